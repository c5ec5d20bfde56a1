//! Points, hyperplanes and linear subspaces of projective space with exact
//! rational coordinates.

use std::hash::{Hash, Hasher};

use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::subsets;
use crate::error::{Error, Result};
use crate::field::{int, Rational};
use crate::linalg::{self, Matrix};

/// Range of the integer coefficients drawn for random hyperplanes.
pub const COEFF_BOUND: i64 = 10_000;
const MAX_ATTEMPTS: usize = 64;

/// A nonzero linear form up to scale, stored with its first nonzero
/// coefficient equal to one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinForm {
    coeffs: Vec<Rational>,
}

impl LinForm {
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        let lead = coeffs.iter().find(|c| !c.is_zero()).cloned().ok_or(Error::ZeroForm)?;
        let coeffs = coeffs.into_iter().map(|c| c / &lead).collect();
        Ok(Self { coeffs })
    }

    pub fn from_ints(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    /// The coordinate form `x_i` on `P^n`.
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut c = vec![Rational::zero(); n + 1];
        c[i] = Rational::one();
        Self { coeffs: c }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn ambient_dim(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().zip(x).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }
}

/// A point of `P^n`, first nonzero coordinate normalized to one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    coords: Vec<Rational>,
}

impl Point {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        let lead = coords
            .iter()
            .find(|c| !c.is_zero())
            .cloned()
            .ok_or_else(|| Error::InvalidParameters("the zero vector is not a point".into()))?;
        Ok(Self { coords: coords.into_iter().map(|c| c / &lead).collect() })
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// The point as a codimension-`n` subspace.
    pub fn to_subspace(&self) -> Subspace {
        let n = self.ambient_dim();
        let forms = linalg::kernel_basis(&[self.coords.clone()], n + 1)
            .into_iter()
            .map(|v| LinForm::new(v).expect("kernel vectors are nonzero"))
            .collect();
        Subspace::new(n, forms).expect("kernel of a point has full rank")
    }

    pub fn from_subspace(sub: &Subspace) -> Result<Self> {
        if sub.codim() != sub.ambient_dim() {
            return Err(Error::InvalidParameters(format!(
                "subspace of codimension {} in P^{} is not a point",
                sub.codim(),
                sub.ambient_dim()
            )));
        }
        let basis = sub.span_basis();
        Self::new(basis.into_iter().next().expect("one spanning vector"))
    }

    /// Image under the projective transformation `x -> T x`.
    pub fn transformed(&self, t: &[Vec<Rational>]) -> Result<Self> {
        Self::new(linalg::mat_vec(t, &self.coords))
    }
}

/// A linear subspace of codimension `e`, given by `e` independent forms.
/// Equality compares the reduced row-echelon form of the defining forms.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient_dim: usize,
    forms: Vec<LinForm>,
    echelon: Matrix,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.echelon == other.echelon
    }
}

impl Eq for Subspace {}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ambient_dim.hash(state);
        self.echelon.hash(state);
    }
}

impl Subspace {
    pub fn new(ambient_dim: usize, forms: Vec<LinForm>) -> Result<Self> {
        for f in &forms {
            if f.ambient_dim() != ambient_dim {
                return Err(Error::DimensionMismatch { expected: ambient_dim, found: f.ambient_dim() });
            }
        }
        if forms.is_empty() || forms.len() > ambient_dim {
            return Err(Error::InvalidParameters(format!(
                "codimension {} is outside [1, {ambient_dim}]",
                forms.len()
            )));
        }
        let rows: Matrix = forms.iter().map(|f| f.coeffs.clone()).collect();
        let (echelon, pivots) = linalg::rref(&rows);
        if pivots.len() != forms.len() {
            return Err(Error::RankDeficient { rank: pivots.len(), expected: forms.len() });
        }
        Ok(Self { ambient_dim, forms, echelon })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn codim(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[LinForm] {
        &self.forms
    }

    /// Canonical defining matrix (reduced row-echelon form).
    pub fn echelon(&self) -> &Matrix {
        &self.echelon
    }

    /// Vectors spanning the subspace as a linear subspace of `K^{n+1}`.
    pub fn span_basis(&self) -> Matrix {
        linalg::kernel_basis(&self.echelon, self.ambient_dim + 1)
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        self.forms.iter().all(|f| f.eval(p.coords()).is_zero())
    }

    /// Image under `x -> T x`; forms pull back through `T^{-1}`.
    pub fn transformed(&self, t: &[Vec<Rational>]) -> Result<Self> {
        let inv = linalg::inverse(t)
            .ok_or_else(|| Error::InvalidParameters("coordinate change is singular".into()))?;
        let forms = self
            .forms
            .iter()
            .map(|f| {
                let row = linalg::mat_mul(&[f.coeffs.clone()], &inv).remove(0);
                LinForm::new(row)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.ambient_dim, forms)
    }
}

/// An invertible `(n+1)x(n+1)` matrix whose first `codim` rows are the
/// defining forms of a subspace. In the coordinates `y = A x` the subspace
/// is `y_0 = ... = y_{codim-1} = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordChange {
    matrix: Matrix,
    codim: usize,
}

impl CoordChange {
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn codim(&self) -> usize {
        self.codim
    }

    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        linalg::mat_vec(&self.matrix, x)
    }

    pub fn determinant(&self) -> Rational {
        linalg::determinant(&self.matrix)
    }

    pub fn inverse(&self) -> Matrix {
        linalg::inverse(&self.matrix).expect("coordinate change is invertible")
    }
}

/// Extend the defining forms of `sub` by the unit rows of the non-pivot
/// columns of its echelon form.
pub fn complete_basis(sub: &Subspace) -> CoordChange {
    let n = sub.ambient_dim;
    let (_, pivots) = linalg::rref(&sub.forms.iter().map(|f| f.coeffs.clone()).collect::<Matrix>());
    let mut matrix: Matrix = sub.forms.iter().map(|f| f.coeffs.clone()).collect();
    for c in (0..=n).filter(|c| !pivots.contains(c)) {
        matrix.push(LinForm::coordinate(n, c).coeffs);
    }
    CoordChange { matrix, codim: sub.codim() }
}

/// `true` iff every `min(s, n+1)`-subset of the forms is independent.
pub fn is_general(forms: &[LinForm], n: usize) -> bool {
    let k = forms.len().min(n + 1);
    subsets(forms.len(), k).iter().all(|idx| {
        let rows: Matrix = idx.iter().map(|&i| forms[i].coeffs.clone()).collect();
        linalg::rank(&rows) == k
    })
}

pub(crate) fn random_form(rng: &mut ChaCha8Rng, n: usize) -> LinForm {
    loop {
        let c: Vec<Rational> = (0..=n).map(|_| int(rng.gen_range(-COEFF_BOUND..=COEFF_BOUND))).collect();
        if let Ok(f) = LinForm::new(c) {
            return f;
        }
    }
}

/// `s` hyperplanes of `P^n` in general position, reproducible from `seed`.
pub fn random_general_hyperplanes(n: usize, s: usize, seed: u64) -> Result<Vec<LinForm>> {
    if n < 1 || s < 1 {
        return Err(Error::InvalidParameters(format!("need n >= 1 and s >= 1, got n={n}, s={s}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let forms: Vec<LinForm> = (0..s).map(|_| random_form(&mut rng, n)).collect();
        if is_general(&forms, n) {
            return Ok(forms);
        }
    }
    Err(Error::GenericityFailure { attempts: MAX_ATTEMPTS })
}

/// The intersection of the selected hyperplanes.
pub fn intersect_hyperplanes(forms: &[LinForm], indices: &[usize]) -> Result<Subspace> {
    let first = forms.first().ok_or_else(|| Error::InvalidParameters("no forms".into()))?;
    let n = first.ambient_dim();
    let mut chosen = Vec::with_capacity(indices.len());
    for &i in indices {
        let f = forms
            .get(i)
            .ok_or_else(|| Error::InvalidParameters(format!("index {i} out of range")))?;
        chosen.push(f.clone());
    }
    Subspace::new(n, chosen)
}

/// `b ⊆ a` as projective sets.
pub fn subspace_contains(a: &Subspace, b: &Subspace) -> bool {
    assert_eq!(a.ambient_dim, b.ambient_dim, "subspaces live in different spaces");
    if a.codim() > b.codim() {
        return false;
    }
    let mut rows = b.echelon.clone();
    rows.extend(a.echelon.iter().cloned());
    linalg::rank(&rows) == b.codim()
}

fn det3(a: &[Rational], b: &[Rational], c: &[Rational]) -> Rational {
    &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0])
}

fn check_plane_points(points: &[Point]) -> Result<()> {
    for p in points {
        if p.ambient_dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: p.ambient_dim() });
        }
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i] == points[j] {
                return Err(Error::DuplicatePoints(i, j));
            }
        }
    }
    Ok(())
}

/// Whether distinct points of `P^2` lie on one line.
pub fn collinear(points: &[Point]) -> Result<bool> {
    check_plane_points(points)?;
    if points.len() < 2 {
        return Err(Error::InvalidParameters("collinearity needs at least two points".into()));
    }
    let (a, b) = (points[0].coords(), points[1].coords());
    Ok(points[2..].iter().all(|c| det3(a, b, c.coords()).is_zero()))
}

/// The line through two distinct points of `P^2`.
pub fn line_through(p: &Point, q: &Point) -> Result<LinForm> {
    if p == q {
        return Err(Error::DuplicatePoints(0, 1));
    }
    let (a, b) = (p.coords(), q.coords());
    LinForm::new(vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ])
}

/// The intersection point of two distinct lines of `P^2`.
pub fn meet(l: &LinForm, m: &LinForm) -> Result<Point> {
    Point::from_subspace(&Subspace::new(2, vec![l.clone(), m.clone()])?)
}

/// A random point of `sub`, as an integer combination of a spanning basis.
pub(crate) fn random_point_in(sub: &Subspace, rng: &mut ChaCha8Rng) -> Point {
    let basis = sub.span_basis();
    loop {
        let mut x = vec![Rational::zero(); sub.ambient_dim + 1];
        for v in &basis {
            let c = int(rng.gen_range(-100..=100));
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi += &c * vi;
            }
        }
        if let Ok(p) = Point::new(x) {
            return p;
        }
    }
}

/// A random invertible integer matrix of size `n+1`.
pub fn random_coordinate_change(n: usize, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let m: Matrix = (0..=n).map(|_| (0..=n).map(|_| int(rng.gen_range(-5..=5))).collect()).collect();
        if !linalg::determinant(&m).is_zero() {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::subsets;

    fn coord_sub(n: usize, idx: &[usize]) -> Subspace {
        Subspace::new(n, idx.iter().map(|&i| LinForm::coordinate(n, i)).collect()).unwrap()
    }

    #[test]
    fn three_general_lines() {
        let h = random_general_hyperplanes(2, 3, 7).unwrap();
        assert_eq!(h.len(), 3);
        for pair in subsets(3, 2) {
            assert!(intersect_hyperplanes(&h, &pair).is_ok());
        }
        let rows: Matrix = h.iter().map(|f| f.coeffs().to_vec()).collect();
        assert_eq!(linalg::rank(&rows), 3);
    }

    #[test]
    fn four_general_planes() {
        let h = random_general_hyperplanes(3, 4, 1).unwrap();
        let rows: Matrix = h.iter().map(|f| f.coeffs().to_vec()).collect();
        assert_eq!(linalg::rank(&rows), 4);
    }

    #[test]
    fn five_general_lines_have_ten_nodes() {
        let h = random_general_hyperplanes(2, 5, 1).unwrap();
        let nodes: Vec<Point> = subsets(5, 2)
            .iter()
            .map(|p| Point::from_subspace(&intersect_hyperplanes(&h, p).unwrap()).unwrap())
            .collect();
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                assert_ne!(nodes[i], nodes[j]);
            }
        }
    }

    #[test]
    fn hyperplanes_are_reproducible() {
        assert_eq!(random_general_hyperplanes(3, 6, 42).unwrap(), random_general_hyperplanes(3, 6, 42).unwrap());
        assert!(random_general_hyperplanes(0, 3, 1).is_err());
    }

    #[test]
    fn coordinate_intersections() {
        let forms = vec![LinForm::coordinate(3, 1), LinForm::coordinate(3, 2)];
        let line = intersect_hyperplanes(&forms, &[0, 1]).unwrap();
        assert_eq!(line.codim(), 2);
        assert_eq!(line, coord_sub(3, &[1, 2]));

        let lines = vec![LinForm::coordinate(2, 0), LinForm::coordinate(2, 1)];
        let p = intersect_hyperplanes(&lines, &[0, 1]).unwrap();
        assert_eq!(Point::from_subspace(&p).unwrap(), Point::from_ints(&[0, 0, 1]).unwrap());
    }

    #[test]
    fn dependent_selection_is_rejected() {
        let forms = vec![LinForm::from_ints(&[1, 1, 0]).unwrap(), LinForm::from_ints(&[2, 2, 0]).unwrap()];
        assert!(matches!(intersect_hyperplanes(&forms, &[0, 1]), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn star_lines_from_general_planes() {
        let h = random_general_hyperplanes(3, 4, 1).unwrap();
        for pair in subsets(4, 2) {
            assert_eq!(intersect_hyperplanes(&h, &pair).unwrap().codim(), 2);
        }
    }

    #[test]
    fn completion_examples() {
        let p = coord_sub(2, &[0, 1]);
        let c = complete_basis(&p);
        assert_eq!(c.matrix(), &linalg::inverse(c.matrix()).unwrap());
        let line = Subspace::new(2, vec![LinForm::from_ints(&[1, 1, 0]).unwrap()]).unwrap();
        let c = complete_basis(&line);
        let expected: Matrix = [[1, 1, 0], [0, 1, 0], [0, 0, 1]]
            .iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect();
        assert_eq!(c.matrix(), &expected);
    }

    #[test]
    fn collinearity() {
        let pts: Vec<Point> = [[1, 0, 1], [0, 1, 1], [1, 1, 2]].iter().map(|c| Point::from_ints(c).unwrap()).collect();
        assert!(collinear(&pts).unwrap());
        let tri: Vec<Point> = [[1, 0, 0], [0, 1, 0], [0, 0, 1]].iter().map(|c| Point::from_ints(c).unwrap()).collect();
        assert!(!collinear(&tri).unwrap());
        assert!(collinear(&tri[..2]).unwrap());
        let dup = vec![tri[0].clone(), tri[1].clone(), tri[0].clone()];
        assert_eq!(collinear(&dup), Err(Error::DuplicatePoints(0, 2)));
    }

    #[test]
    fn containment_examples() {
        assert!(subspace_contains(&coord_sub(3, &[0]), &coord_sub(3, &[0, 1])));
        assert!(!subspace_contains(&coord_sub(3, &[0, 1]), &coord_sub(3, &[0])));
        let p = Point::from_ints(&[1, 0, 0]).unwrap().to_subspace();
        let q = Point::from_ints(&[0, 1, 0]).unwrap().to_subspace();
        assert!(!subspace_contains(&p, &q));
        let h = random_general_hyperplanes(3, 4, 1).unwrap();
        let star_line = intersect_hyperplanes(&h, &[0, 1]).unwrap();
        let h1 = intersect_hyperplanes(&h, &[0]).unwrap();
        assert!(subspace_contains(&h1, &star_line));
    }

    #[test]
    fn point_subspace_roundtrip() {
        let p = Point::from_ints(&[3, -2, 5, 1]).unwrap();
        let s = p.to_subspace();
        assert_eq!(s.codim(), 3);
        assert!(s.contains_point(&p));
        assert_eq!(Point::from_subspace(&s).unwrap(), p);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_subspace() -> impl Strategy<Value = Subspace> {
            (1usize..=3, any::<u64>()).prop_flat_map(|(n, seed)| {
                (1..=n).prop_map(move |e| {
                    let h = random_general_hyperplanes(n, e, seed).unwrap();
                    Subspace::new(n, h).unwrap()
                })
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn completion_adapts_coordinates(sub in arb_subspace(), seed in any::<u64>()) {
                let c = complete_basis(&sub);
                prop_assert!(!c.determinant().is_zero());
                for (row, f) in c.matrix().iter().zip(sub.forms()) {
                    prop_assert_eq!(row.as_slice(), f.coeffs());
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let p = random_point_in(&sub, &mut rng);
                let y = c.apply(p.coords());
                prop_assert!(y[..sub.codim()].iter().all(Zero::is_zero));
            }

            #[test]
            fn containment_is_a_partial_order(seed in any::<u64>()) {
                // Nested coordinate-free triples plus a random unrelated subspace.
                let h = random_general_hyperplanes(3, 4, seed).unwrap();
                let a = intersect_hyperplanes(&h, &[0]).unwrap();
                let b = intersect_hyperplanes(&h, &[0, 1]).unwrap();
                let c = intersect_hyperplanes(&h, &[0, 1, 2]).unwrap();
                let d = intersect_hyperplanes(&h, &[2, 3]).unwrap();
                for x in [&a, &b, &c, &d] {
                    prop_assert!(subspace_contains(x, x));
                }
                prop_assert!(subspace_contains(&a, &b) && subspace_contains(&b, &c) && subspace_contains(&a, &c));
                for (x, y) in [(&a, &b), (&b, &c), (&a, &d), (&b, &d)] {
                    if subspace_contains(x, y) && subspace_contains(y, x) {
                        prop_assert_eq!(x, y);
                    }
                }
                prop_assert!(!subspace_contains(&b, &a));
                prop_assert!(!subspace_contains(&d, &b));
            }
        }
    }
}
