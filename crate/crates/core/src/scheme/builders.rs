use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Construction, FatComponent, FatFlatScheme, StarProvenance};
use crate::combinatorics::subsets;
use crate::error::{Error, Result};
use crate::field::{rational, Rational};
use crate::projective::{
    collinear, intersect_hyperplanes, is_general, random_form, random_general_hyperplanes, random_point_in,
    subspace_contains, LinForm, Point, Subspace,
};

const MAX_ATTEMPTS: usize = 64;

/// A star configuration `S_N(e, s)`: the codimension-`e` intersections of
/// `s` general hyperplanes, one per `e`-subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarData {
    pub ambient_dim: usize,
    pub e: usize,
    pub s: usize,
    pub hyperplanes: Vec<LinForm>,
    /// `origins[i]` is the `e`-subset of hyperplanes cutting out `components[i]`.
    pub origins: Vec<Vec<usize>>,
    pub components: Vec<Subspace>,
}

impl StarData {
    /// The reduced scheme `S_N(e, s)`.
    pub fn scheme(&self) -> FatFlatScheme {
        self.fat(1)
    }

    /// `m S_N(e, s)`.
    pub fn fat(&self, m: u32) -> FatFlatScheme {
        let components = self
            .components
            .iter()
            .zip(&self.origins)
            .map(|(sub, idx)| FatComponent::new(sub.clone(), m).labeled(origin_label(idx)))
            .collect();
        FatFlatScheme::new(self.ambient_dim, components)
            .expect("star components are distinct")
            .with_construction(Construction {
                kind: "star".into(),
                star: Some(self.provenance(m)),
                predicted_waldschmidt: Some(rational(m as i64 * self.s as i64, self.e as i64)),
                predicted_linear_alpha: None,
            })
    }

    fn provenance(&self, m: u32) -> StarProvenance {
        StarProvenance { e: self.e, s: self.s, m, hyperplanes: self.hyperplanes.clone() }
    }
}

fn origin_label(idx: &[usize]) -> String {
    let names: Vec<String> = idx.iter().map(|i| format!("H{}", i + 1)).collect();
    names.join("∩")
}

pub fn star_configuration(n: usize, e: usize, s: usize, hyperplanes: Vec<LinForm>) -> Result<StarData> {
    if !(1..=n).contains(&e) || e > s {
        return Err(Error::InvalidParameters(format!("star needs 1 <= e <= N and e <= s (N={n}, e={e}, s={s})")));
    }
    if hyperplanes.len() != s {
        return Err(Error::InvalidParameters(format!("expected {s} hyperplanes, got {}", hyperplanes.len())));
    }
    if let Some(h) = hyperplanes.iter().find(|h| h.ambient_dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: h.ambient_dim() });
    }
    if !is_general(&hyperplanes, n) {
        return Err(Error::GenericityFailure { attempts: 1 });
    }
    let origins = subsets(s, e);
    let components = origins
        .iter()
        .map(|idx| intersect_hyperplanes(&hyperplanes, idx))
        .collect::<Result<Vec<_>>>()?;
    for i in 0..components.len() {
        for j in i + 1..components.len() {
            if components[i] == components[j] {
                return Err(Error::GenericityFailure { attempts: 1 });
            }
        }
    }
    Ok(StarData { ambient_dim: n, e, s, hyperplanes, origins, components })
}

/// `W_m = W' + m S_N(e, s)`: the star at multiplicity `m` plus extra
/// subspaces lying in the hyperplane union, each with multiplicity at most
/// `floor(m / e)`. Extras of multiplicity zero are dropped.
pub fn build_fat_flat(star: &StarData, m: u32, extras: &[(Subspace, u32)]) -> Result<FatFlatScheme> {
    if m == 0 {
        return Err(Error::InvalidParameters("star multiplicity must be positive".into()));
    }
    let n = star.ambient_dim;
    let cap = m / star.e as u32;
    let mut kept: Vec<&Subspace> = Vec::new();
    let mut components: Vec<FatComponent> = star.fat(m).components().to_vec();
    for (i, (sub, mult)) in extras.iter().enumerate() {
        if sub.ambient_dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: sub.ambient_dim() });
        }
        if !(2..=n).contains(&sub.codim()) {
            return Err(Error::InvalidParameters(format!(
                "extra {i} has codimension {}, outside [2, {n}]",
                sub.codim()
            )));
        }
        if *mult > cap {
            return Err(Error::MultiplicityCap { multiplicity: *mult, cap });
        }
        let in_union = star
            .hyperplanes
            .iter()
            .any(|h| subspace_contains(&Subspace::new(n, vec![h.clone()]).expect("hyperplane"), sub));
        if !in_union {
            return Err(Error::NotInHyperplaneUnion);
        }
        for (j, c) in star.components.iter().enumerate() {
            if c == sub || subspace_contains(c, sub) || subspace_contains(sub, c) {
                return Err(Error::Containment(format!("extra {i} and star component {j}")));
            }
        }
        for (j, other) in kept.iter().enumerate() {
            if *other == sub || subspace_contains(other, sub) || subspace_contains(sub, other) {
                return Err(Error::Containment(format!("extras {j} and {i}")));
            }
        }
        if *mult == 0 {
            continue;
        }
        kept.push(sub);
        components.push(FatComponent::new(sub.clone(), *mult).labeled(format!("M{}", kept.len())));
    }
    Ok(FatFlatScheme::new(n, components)?.with_construction(Construction {
        kind: "fatflat".into(),
        star: Some(star.provenance(m)),
        predicted_waldschmidt: Some(rational(m as i64 * star.s as i64, star.e as i64)),
        predicted_linear_alpha: None,
    }))
}

/// Request for a generic subspace of codimension `codim` inside hyperplane
/// number `hyperplane` of the star.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtraSpec {
    pub hyperplane: usize,
    pub codim: usize,
    pub multiplicity: u32,
}

fn generic_subspace_in(h: &LinForm, codim: usize, rng: &mut ChaCha8Rng) -> Subspace {
    let n = h.ambient_dim();
    loop {
        let mut forms = vec![h.clone()];
        forms.extend((1..codim).map(|_| random_form(rng, n)));
        if let Ok(s) = Subspace::new(n, forms) {
            return s;
        }
    }
}

const EXTRAS_STREAM: u64 = 0x9e37_79b9;

/// Generic subspaces realizing `specs`, reproducible from `seed`.
pub fn generic_extras(star: &StarData, specs: &[ExtraSpec], seed: u64) -> Result<Vec<(Subspace, u32)>> {
    realize_extras(star, specs, &mut ChaCha8Rng::seed_from_u64(seed.wrapping_add(EXTRAS_STREAM)))
}

fn realize_extras(star: &StarData, specs: &[ExtraSpec], rng: &mut ChaCha8Rng) -> Result<Vec<(Subspace, u32)>> {
    specs
        .iter()
        .map(|spec| {
            let h = star.hyperplanes.get(spec.hyperplane).ok_or_else(|| {
                Error::InvalidParameters(format!("hyperplane index {} out of range", spec.hyperplane))
            })?;
            if !(2..=star.ambient_dim).contains(&spec.codim) {
                return Err(Error::InvalidParameters(format!("extra codimension {} out of range", spec.codim)));
            }
            Ok((generic_subspace_in(h, spec.codim, rng), spec.multiplicity))
        })
        .collect()
}

/// A fat flat scheme with `alpha(I^(k)) = d k` for all `k`: the star
/// `e t S_N(e, s)` for a factorization `d = s t`, plus the requested extras at
/// multiplicity at most `t`.
pub fn build_integer_target(
    n: usize,
    d: u64,
    s: usize,
    t: u32,
    e: usize,
    extras: &[ExtraSpec],
    seed: u64,
) -> Result<FatFlatScheme> {
    if d != s as u64 * t as u64 {
        return Err(Error::InvalidParameters(format!("d = {d} is not s * t = {s} * {t}")));
    }
    if t == 0 || !(1..=n).contains(&e) || e > s {
        return Err(Error::InvalidParameters(format!("need t >= 1, 1 <= e <= N, e <= s (N={n}, e={e}, s={s})")));
    }
    if let Some(x) = extras.iter().find(|x| x.multiplicity > t) {
        return Err(Error::MultiplicityCap { multiplicity: x.multiplicity, cap: t });
    }
    let m = e as u32 * t;
    let star = star_configuration(n, e, s, random_general_hyperplanes(n, s, seed)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(EXTRAS_STREAM));
    let mut last = None;
    for _ in 0..MAX_ATTEMPTS {
        let chosen = realize_extras(&star, extras, &mut rng)?;
        match build_fat_flat(&star, m, &chosen) {
            Ok(w) => {
                return Ok(w.with_construction(Construction {
                    kind: "theorem-a".into(),
                    star: Some(star.provenance(m)),
                    predicted_waldschmidt: Some(Rational::from_integer(d.into())),
                    predicted_linear_alpha: Some(d),
                }))
            }
            Err(err @ Error::Containment(_)) => last = Some(err),
            Err(err) => return Err(err),
        }
    }
    Err(last.unwrap_or(Error::GenericityFailure { attempts: MAX_ATTEMPTS }))
}

/// The fat quasi-star `q_1 + ... + q_s + 2 S_2(2, s)` with one extra point on
/// each line, the extra points non-collinear when `s >= 3`.
pub fn build_quasi_star(s: usize, seed: u64) -> Result<FatFlatScheme> {
    if s < 2 {
        return Err(Error::InvalidParameters("a quasi-star needs at least two lines".into()));
    }
    let star = star_configuration(2, 2, s, random_general_hyperplanes(2, s, seed)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x51a2));
    for _ in 0..MAX_ATTEMPTS {
        let qs: Vec<Point> = star
            .hyperplanes
            .iter()
            .enumerate()
            .map(|(i, h)| loop {
                let line = Subspace::new(2, vec![h.clone()]).expect("line");
                let q = random_point_in(&line, &mut rng);
                let off_others = star
                    .hyperplanes
                    .iter()
                    .enumerate()
                    .all(|(j, g)| j == i || !num_traits::Zero::is_zero(&g.eval(q.coords())));
                if off_others {
                    break q;
                }
            })
            .collect();
        if s >= 3 && collinear(&qs)? {
            continue;
        }
        let extras: Vec<(Subspace, u32)> = qs.iter().map(|q| (q.to_subspace(), 1)).collect();
        let w = build_fat_flat(&star, 2, &extras)?;
        return Ok(w.with_construction(Construction {
            kind: "quasi-star".into(),
            star: Some(star.provenance(2)),
            predicted_waldschmidt: Some(Rational::from_integer((s as i64).into())),
            predicted_linear_alpha: Some(s as u64),
        }));
    }
    Err(Error::GenericityFailure { attempts: MAX_ATTEMPTS })
}

/// A scheme with Waldschmidt constant `b / a`: `m S_N(a, s)` for the smallest
/// factorization `b = s m` with `s >= max(a, 2)` and `m >= 2`, otherwise the
/// reduced star `S_N(a, b)`. `N` defaults to `max(a, 2)`.
pub fn build_rational_target(a: usize, b: usize, n: Option<usize>, seed: u64) -> Result<FatFlatScheme> {
    if a < 1 || a >= b {
        return Err(Error::InvalidParameters(format!("need 1 <= a < b, got a={a}, b={b}")));
    }
    let n = n.unwrap_or(a.max(2));
    if n < a {
        return Err(Error::InvalidParameters(format!("ambient dimension {n} is below a = {a}")));
    }
    let split = (a.max(2)..b).find(|&s| b % s == 0 && b / s >= 2);
    let (s, m) = match split {
        Some(s) => (s, (b / s) as u32),
        None => (b, 1),
    };
    let star = star_configuration(n, a, s, random_general_hyperplanes(n, s, seed)?)?;
    let w = star.fat(m);
    let star_meta = w.construction().and_then(|c| c.star.clone());
    Ok(w.with_construction(Construction {
        kind: "rational-target".into(),
        star: star_meta,
        predicted_waldschmidt: Some(rational(b as i64, a as i64)),
        predicted_linear_alpha: None,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::random_general_hyperplanes;

    fn star(n: usize, e: usize, s: usize) -> StarData {
        star_configuration(n, e, s, random_general_hyperplanes(n, s, 1).unwrap()).unwrap()
    }

    #[test]
    fn star_sizes() {
        assert_eq!(star(2, 2, 3).scheme().components().len(), 3);
        let s34 = star(3, 2, 4);
        assert_eq!(s34.components.len(), 6);
        assert!(s34.components.iter().all(|c| c.codim() == 2));
        assert_eq!(star(2, 2, 5).scheme().components().len(), 10);
    }

    #[test]
    fn star_parameter_ranges() {
        let h = random_general_hyperplanes(2, 3, 1).unwrap();
        assert!(star_configuration(2, 3, 3, h.clone()).is_err());
        assert!(star_configuration(2, 0, 3, h.clone()).is_err());
        let bad = vec![h[0].clone(), h[0].clone(), h[1].clone()];
        assert!(matches!(star_configuration(2, 2, 3, bad), Err(Error::GenericityFailure { .. })));
    }

    fn point_on_first_hyperplane(st: &StarData) -> Subspace {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h1 = Subspace::new(st.ambient_dim, vec![st.hyperplanes[0].clone()]).unwrap();
        random_point_in(&h1, &mut rng).to_subspace()
    }

    #[test]
    fn fat_flat_with_a_point_on_h1() {
        let st = star(3, 2, 4);
        let w = build_fat_flat(&st, 2, &[(point_on_first_hyperplane(&st), 1)]).unwrap();
        assert_eq!(w.components().len(), 7);
        assert_eq!(w.components()[6].multiplicity, 1);
        let err = build_fat_flat(&st, 2, &[(point_on_first_hyperplane(&st), 2)]);
        assert_eq!(err, Err(Error::MultiplicityCap { multiplicity: 2, cap: 1 }));
    }

    #[test]
    fn fat_flat_without_extras_is_the_fat_star() {
        let st = star(2, 2, 5);
        let w = build_fat_flat(&st, 2, &[]).unwrap();
        assert_eq!(w.components(), st.fat(2).components());
    }

    #[test]
    fn fat_flat_rejections() {
        let st = star(3, 2, 4);
        // A general point is in no hyperplane.
        let off = Point::from_ints(&[1, 2, 3, 5]).unwrap().to_subspace();
        if st.hyperplanes.iter().all(|h| !num_traits::Zero::is_zero(&h.eval(&Point::from_ints(&[1, 2, 3, 5]).unwrap().coords().to_vec()))) {
            assert_eq!(build_fat_flat(&st, 2, &[(off, 1)]), Err(Error::NotInHyperplaneUnion));
        }
        // A point on a star line.
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let on_line = random_point_in(&st.components[0], &mut rng).to_subspace();
        assert!(matches!(build_fat_flat(&st, 2, &[(on_line, 1)]), Err(Error::Containment(_))));
        // Zero-multiplicity extras are dropped.
        let w = build_fat_flat(&st, 2, &[(point_on_first_hyperplane(&st), 0)]).unwrap();
        assert_eq!(w.components().len(), 6);
        // Hyperplanes themselves are not allowed as extras.
        let h = Subspace::new(3, vec![st.hyperplanes[0].clone()]).unwrap();
        assert!(matches!(build_fat_flat(&st, 2, &[(h, 1)]), Err(Error::InvalidParameters(_))));
    }

    #[test]
    fn integer_targets() {
        let extra = ExtraSpec { hyperplane: 0, codim: 3, multiplicity: 1 };
        let w = build_integer_target(3, 4, 4, 1, 2, &[extra], 1).unwrap();
        assert_eq!(w.components().len(), 7);
        assert!(w.components()[..6].iter().all(|c| c.multiplicity == 2));
        assert_eq!(w.construction().unwrap().predicted_linear_alpha, Some(4));

        let on_lines: Vec<ExtraSpec> =
            (0..5).map(|h| ExtraSpec { hyperplane: h, codim: 2, multiplicity: 1 }).collect();
        let q = build_integer_target(2, 5, 5, 1, 2, &on_lines, 3).unwrap();
        assert_eq!(q.components().len(), 15);

        let single = build_integer_target(3, 6, 3, 2, 3, &[], 1).unwrap();
        assert_eq!(single.components().len(), 1);
        assert_eq!(single.components()[0].multiplicity, 6);

        assert!(build_integer_target(3, 5, 4, 1, 2, &[], 1).is_err());
        let heavy = ExtraSpec { hyperplane: 0, codim: 3, multiplicity: 2 };
        assert!(matches!(build_integer_target(3, 4, 4, 1, 2, &[heavy], 1), Err(Error::MultiplicityCap { .. })));
    }

    #[test]
    fn quasi_stars() {
        let w = build_quasi_star(5, 1).unwrap();
        let doubles = w.components().iter().filter(|c| c.multiplicity == 2).count();
        let simples = w.components().iter().filter(|c| c.multiplicity == 1).count();
        assert_eq!((doubles, simples), (10, 5));
        let qs: Vec<Point> = w.components()[10..].iter().map(|c| Point::from_subspace(&c.subspace).unwrap()).collect();
        assert!(!collinear(&qs).unwrap());

        let small = build_quasi_star(2, 1).unwrap();
        assert_eq!(small.components().len(), 3);
        let three = build_quasi_star(3, 4).unwrap();
        assert_eq!(three.components().len(), 6);
        assert_eq!(three.construction().unwrap().predicted_waldschmidt, Some(Rational::from_integer(3.into())));
    }

    #[test]
    fn rational_targets() {
        let w = build_rational_target(2, 5, None, 1).unwrap();
        assert_eq!(w.ambient_dim(), 2);
        assert_eq!(w.components().len(), 10);
        assert!(w.components().iter().all(|c| c.multiplicity == 1));

        let w = build_rational_target(4, 10, None, 1).unwrap();
        assert_eq!(w.ambient_dim(), 4);
        assert_eq!(w.components().len(), 5);
        assert!(w.components().iter().all(|c| c.multiplicity == 2 && c.subspace.codim() == 4));
        assert_eq!(w.construction().unwrap().predicted_waldschmidt, Some(rational(5, 2)));

        let w = build_rational_target(1, 3, None, 1).unwrap();
        assert_eq!(w.ambient_dim(), 2);
        assert_eq!(w.components().len(), 3);
        assert!(w.components().iter().all(|c| c.subspace.codim() == 1 && c.multiplicity == 1));

        assert!(build_rational_target(3, 3, None, 1).is_err());
        assert!(build_rational_target(3, 5, Some(2), 1).is_err());
    }

    #[test]
    fn builders_produce_valid_schemes() {
        for w in [
            build_quasi_star(4, 9).unwrap(),
            build_rational_target(3, 8, None, 2).unwrap(),
            build_integer_target(3, 6, 3, 2, 2, &[ExtraSpec { hyperplane: 1, codim: 2, multiplicity: 1 }], 4).unwrap(),
        ] {
            assert!(w.validate().is_ok());
        }
    }
}
