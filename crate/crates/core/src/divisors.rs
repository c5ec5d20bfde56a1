//! Divisor classes on the blow-up of the plane at the points of a
//! configuration, and nef certificates built from proper transforms.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::Rational;
use crate::linalg;
use crate::projective::collinear;
use crate::scheme::FatPointsP2;

/// `t L - sum t_i E_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    pub t: i64,
    pub drops: Vec<i64>,
}

impl DivisorClass {
    pub fn new(t: i64, drops: Vec<i64>) -> Self {
        Self { t, drops }
    }

    /// The pullback `L` of a general line.
    pub fn line(n: usize) -> Self {
        Self::new(1, vec![0; n])
    }

    /// `E_i`, written as `0 L - (-1) E_i`.
    pub fn exceptional(n: usize, i: usize) -> Self {
        let mut drops = vec![0; n];
        drops[i] = -1;
        Self::new(0, drops)
    }

    pub fn npoints(&self) -> usize {
        self.drops.len()
    }

    fn scaled_add(&mut self, other: &DivisorClass, c: i64) {
        self.t += c * other.t;
        for (a, b) in self.drops.iter_mut().zip(&other.drops) {
            *a += c * b;
        }
    }
}

/// `D . D' = t t' - sum t_i t'_i`.
pub fn intersect(a: &DivisorClass, b: &DivisorClass) -> Result<i64> {
    if a.npoints() != b.npoints() {
        return Err(Error::DimensionMismatch { expected: a.npoints(), found: b.npoints() });
    }
    Ok(a.t * b.t - a.drops.iter().zip(&b.drops).map(|(x, y)| x * y).sum::<i64>())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ComponentClass {
    /// The exceptional curve over point `i`.
    Exceptional(usize),
    /// Proper transform of a line through exactly the points in the set.
    LineTransform(Vec<usize>),
    /// Proper transform of an irreducible conic through exactly the points in the set.
    ConicTransform(Vec<usize>),
}

impl ComponentClass {
    pub fn points(&self) -> Vec<usize> {
        match self {
            ComponentClass::Exceptional(i) => vec![*i],
            ComponentClass::LineTransform(s) | ComponentClass::ConicTransform(s) => s.clone(),
        }
    }

    pub fn class(&self, n: usize) -> DivisorClass {
        match self {
            ComponentClass::Exceptional(i) => DivisorClass::exceptional(n, *i),
            ComponentClass::LineTransform(s) | ComponentClass::ConicTransform(s) => {
                let t = if matches!(self, ComponentClass::LineTransform(_)) { 1 } else { 2 };
                let mut drops = vec![0; n];
                for &i in s {
                    drops[i] = 1;
                }
                DivisorClass::new(t, drops)
            }
        }
    }
}

fn conic_through(points: &[crate::projective::Point]) -> Vec<Rational> {
    let rows: Vec<Vec<Rational>> = points
        .iter()
        .map(|p| {
            let x = p.coords();
            vec![
                &x[0] * &x[0],
                &x[0] * &x[1],
                &x[0] * &x[2],
                &x[1] * &x[1],
                &x[1] * &x[2],
                &x[2] * &x[2],
            ]
        })
        .collect();
    linalg::kernel_basis(&rows, 6).into_iter().next().expect("five points impose at most five conditions")
}

fn eval_conic(q: &[Rational], p: &crate::projective::Point) -> Rational {
    let x = p.coords();
    let m = [
        &x[0] * &x[0],
        &x[0] * &x[1],
        &x[0] * &x[2],
        &x[1] * &x[1],
        &x[1] * &x[2],
        &x[2] * &x[2],
    ];
    q.iter().zip(m.iter()).map(|(a, b)| a * b).sum()
}

/// Checks that a curve of the given class exists on the configuration.
///
/// A line through two or more points must pass through every configuration
/// point on it; a line through at most one point can avoid the rest. A conic
/// needs no three of its points collinear, which makes it irreducible; through
/// five points the conic is unique, so it must also miss the other points.
pub fn validate_component(c: &ComponentClass, config: &FatPointsP2) -> Result<()> {
    let n = config.len();
    let s = c.points();
    if let Some(&i) = s.iter().find(|&&i| i >= n) {
        return Err(Error::InvalidComponent(format!("point index {i} out of range (n = {n})")));
    }
    let mut sorted = s.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != s.len() {
        return Err(Error::InvalidComponent("repeated point index".into()));
    }
    let pts = config.points();
    match c {
        ComponentClass::Exceptional(_) => Ok(()),
        ComponentClass::LineTransform(s) if s.len() <= 1 => Ok(()),
        ComponentClass::LineTransform(s) => {
            let chosen: Vec<_> = s.iter().map(|&i| pts[i].clone()).collect();
            if !collinear(&chosen)? {
                return Err(Error::InvalidComponent(format!("points {s:?} are not collinear")));
            }
            let line = crate::projective::line_through(&chosen[0], &chosen[1])?;
            if let Some(j) = (0..n).find(|j| !s.contains(j) && line.eval(pts[*j].coords()).is_zero()) {
                return Err(Error::InvalidComponent(format!("the line through {s:?} also contains point {j}")));
            }
            Ok(())
        }
        ComponentClass::ConicTransform(s) => {
            if s.len() > 5 {
                return Err(Error::InvalidComponent("a conic transform passes through at most 5 points".into()));
            }
            for i in 0..s.len() {
                for j in i + 1..s.len() {
                    for k in j + 1..s.len() {
                        let triple = [pts[s[i]].clone(), pts[s[j]].clone(), pts[s[k]].clone()];
                        if collinear(&triple)? {
                            return Err(Error::InvalidComponent(format!(
                                "cannot certify an irreducible conic: points {}, {}, {} are collinear",
                                s[i], s[j], s[k]
                            )));
                        }
                    }
                }
            }
            if s.len() == 5 {
                let chosen: Vec<_> = s.iter().map(|&i| pts[i].clone()).collect();
                let q = conic_through(&chosen);
                if let Some(j) = (0..n).find(|j| !s.contains(j) && eval_conic(&q, &pts[*j]).is_zero()) {
                    return Err(Error::InvalidComponent(format!("the conic through {s:?} also contains point {j}")));
                }
            }
            Ok(())
        }
    }
}

/// A divisor written as a nonnegative combination of irreducible curves.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NefCertificate {
    pub divisor: DivisorClass,
    pub decomposition: Vec<(ComponentClass, u32)>,
}

impl NefCertificate {
    /// Certificate whose divisor is the sum of its decomposition.
    pub fn from_decomposition(n: usize, decomposition: Vec<(ComponentClass, u32)>) -> Self {
        let mut divisor = DivisorClass::new(0, vec![0; n]);
        for (c, a) in &decomposition {
            divisor.scaled_add(&c.class(n), *a as i64);
        }
        Self { divisor, decomposition }
    }
}

/// A divisor that is an effective sum of curves `C_i` and meets each `C_i`
/// nonnegatively meets every curve nonnegatively.
pub fn verify_nef(cert: &NefCertificate, config: &FatPointsP2) -> Result<()> {
    let n = config.len();
    if cert.divisor.npoints() != n {
        return Err(Error::DimensionMismatch { expected: n, found: cert.divisor.npoints() });
    }
    if cert.decomposition.is_empty() {
        return Err(Error::Certificate("empty decomposition".into()));
    }
    let mut sum = DivisorClass::new(0, vec![0; n]);
    for (c, a) in &cert.decomposition {
        if *a == 0 {
            return Err(Error::Certificate("decomposition coefficients must be at least 1".into()));
        }
        validate_component(c, config)?;
        sum.scaled_add(&c.class(n), *a as i64);
    }
    if sum != cert.divisor {
        return Err(Error::Certificate(format!(
            "decomposition sums to ({}, {:?}), not ({}, {:?})",
            sum.t, sum.drops, cert.divisor.t, cert.divisor.drops
        )));
    }
    for (c, _) in &cert.decomposition {
        let v = intersect(&cert.divisor, &c.class(n))?;
        if v < 0 {
            return Err(Error::Certificate(format!("intersection with {c:?} is {v}")));
        }
    }
    Ok(())
}

/// `(sum m_i t_i) / t`, a lower bound for the Waldschmidt constant of the
/// configuration with its multiplicities, given a verified nef divisor.
pub fn lower_bound(z: &FatPointsP2, cert: &NefCertificate) -> Result<Rational> {
    verify_nef(cert, z)?;
    if cert.divisor.t <= 0 {
        return Err(Error::Certificate("the divisor needs t > 0".into()));
    }
    let num: i64 = z.multiplicities().iter().zip(&cert.divisor.drops).map(|(&m, &t)| m as i64 * t).sum();
    Ok(Rational::new(num.into(), cert.divisor.t.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rational;
    use proptest::prelude::*;

    fn figure_two() -> FatPointsP2 {
        FatPointsP2::from_ints(&[[0, 0, 1], [1, 0, 1], [0, 1, 1]], &[2, 2, 1]).unwrap()
    }

    #[test]
    fn pairing_basics() {
        let l = DivisorClass::line(4);
        let e1 = DivisorClass::exceptional(4, 0);
        assert_eq!(intersect(&l, &l).unwrap(), 1);
        assert_eq!(intersect(&e1, &e1).unwrap(), -1);
        let c = DivisorClass::new(2, vec![1, 1, 1, 1]);
        assert_eq!(intersect(&c, &c).unwrap(), 0);
        assert!(intersect(&l, &DivisorClass::line(3)).is_err());
    }

    #[test]
    fn basis_orthogonality() {
        for n in 1..=6 {
            let l = DivisorClass::line(n);
            for i in 0..n {
                let ei = DivisorClass::exceptional(n, i);
                assert_eq!(intersect(&l, &ei).unwrap(), 0);
                for j in 0..n {
                    let expected = if i == j { -1 } else { 0 };
                    assert_eq!(intersect(&ei, &DivisorClass::exceptional(n, j)).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn component_validation() {
        let z = figure_two();
        let l = ComponentClass::LineTransform(vec![0, 1]);
        validate_component(&l, &z).unwrap();
        assert_eq!(l.class(3), DivisorClass::new(1, vec![1, 1, 0]));
        assert!(validate_component(&ComponentClass::LineTransform(vec![0, 1, 2]), &z).is_err());
        let collinear3 = FatPointsP2::from_ints(&[[1, 0, 1], [2, 0, 1], [3, 0, 1]], &[1, 1, 1]).unwrap();
        // A line through two of three collinear points must include the third.
        assert!(validate_component(&ComponentClass::LineTransform(vec![0, 1]), &collinear3).is_err());
        let four = FatPointsP2::from_ints(&[[0, 5, 1], [0, 7, 1], [3, 0, 1], [11, 0, 1]], &[2, 1, 1, 1]).unwrap();
        let c = ComponentClass::ConicTransform(vec![0, 1, 2, 3]);
        validate_component(&c, &four).unwrap();
        assert_eq!(c.class(4), DivisorClass::new(2, vec![1, 1, 1, 1]));
        assert!(validate_component(&ComponentClass::ConicTransform(vec![0, 1, 2]), &collinear3).is_err());
        assert!(validate_component(&ComponentClass::Exceptional(7), &z).is_err());
    }

    #[test]
    fn five_point_conic_must_avoid_the_rest() {
        // Six points on x^2 + y^2 = z^2.
        let pts = [[1, 0, 1], [0, 1, 1], [-1, 0, 1], [0, -1, 1], [3, 4, 5], [4, 3, 5]];
        let z = FatPointsP2::from_ints(&pts, &[1; 6]).unwrap();
        assert!(validate_component(&ComponentClass::ConicTransform(vec![0, 1, 2, 3, 4]), &z).is_err());
        let z5 = FatPointsP2::from_ints(&pts[..5], &[1; 5]).unwrap();
        validate_component(&ComponentClass::ConicTransform(vec![0, 1, 2, 3, 4]), &z5).unwrap();
    }

    #[test]
    fn two_doubles_certificate() {
        let z = figure_two();
        let cert = NefCertificate::from_decomposition(
            3,
            vec![
                (ComponentClass::LineTransform(vec![0, 1]), 1),
                (ComponentClass::LineTransform(vec![0, 2]), 1),
                (ComponentClass::Exceptional(0), 1),
            ],
        );
        assert_eq!(cert.divisor, DivisorClass::new(2, vec![1, 1, 1]));
        verify_nef(&cert, &z).unwrap();
        let g = &cert.divisor;
        assert_eq!(intersect(g, &ComponentClass::LineTransform(vec![0, 1]).class(3)).unwrap(), 0);
        assert_eq!(intersect(g, &ComponentClass::LineTransform(vec![0, 2]).class(3)).unwrap(), 0);
        assert_eq!(intersect(g, &DivisorClass::exceptional(3, 0)).unwrap(), 1);
        assert_eq!(lower_bound(&z, &cert).unwrap(), rational(5, 2));
    }

    fn off_line_config(n: usize) -> FatPointsP2 {
        let mut pts = vec![[0, 1, 1]];
        pts.extend((1..n as i64).map(|x| [x, 0, 1]));
        let mut mults = vec![2];
        mults.extend(std::iter::repeat(1).take(n - 1));
        FatPointsP2::from_ints(&pts, &mults).unwrap()
    }

    fn off_line_certificate(n: usize) -> NefCertificate {
        let mut dec: Vec<_> = (1..n).map(|i| (ComponentClass::LineTransform(vec![0, i]), 1)).collect();
        dec.push((ComponentClass::Exceptional(0), 1));
        NefCertificate::from_decomposition(n, dec)
    }

    #[test]
    fn double_off_a_line_closed_form() {
        for n in 4..=10 {
            let z = off_line_config(n);
            let cert = off_line_certificate(n);
            let mut drops = vec![n as i64 - 2];
            drops.extend(std::iter::repeat(1).take(n - 1));
            assert_eq!(cert.divisor, DivisorClass::new(n as i64 - 1, drops));
            assert_eq!(
                lower_bound(&z, &cert).unwrap(),
                rational(3 * n as i64 - 5, n as i64 - 1),
                "n = {n}"
            );
        }
        assert_eq!(lower_bound(&off_line_config(4), &off_line_certificate(4)).unwrap(), rational(7, 3));
    }

    #[test]
    fn conic_certificate() {
        let four = FatPointsP2::from_ints(&[[0, 5, 1], [0, 7, 1], [3, 0, 1], [11, 0, 1]], &[2, 1, 1, 1]).unwrap();
        let cert = NefCertificate::from_decomposition(4, vec![(ComponentClass::ConicTransform(vec![0, 1, 2, 3]), 1)]);
        assert_eq!(lower_bound(&four, &cert).unwrap(), rational(5, 2));
    }

    #[test]
    fn broken_certificates() {
        let z = figure_two();
        let mut cert = NefCertificate::from_decomposition(3, vec![(ComponentClass::LineTransform(vec![0, 1]), 1)]);
        // L - E1 - E2 has self-intersection -1.
        assert!(matches!(verify_nef(&cert, &z), Err(Error::Certificate(_))));
        cert.divisor.t = 5;
        assert!(matches!(verify_nef(&cert, &z), Err(Error::Certificate(_))));
        let e = NefCertificate::from_decomposition(3, vec![(ComponentClass::Exceptional(0), 2)]);
        assert!(lower_bound(&z, &e).is_err());
    }

    proptest! {
        #[test]
        fn pairing_is_symmetric_and_bilinear(
            a in (-5i64..5, proptest::collection::vec(-5i64..5, 4)),
            b in (-5i64..5, proptest::collection::vec(-5i64..5, 4)),
            c in (-5i64..5, proptest::collection::vec(-5i64..5, 4)),
            k in -3i64..4,
        ) {
            let (a, b, c) = (DivisorClass::new(a.0, a.1), DivisorClass::new(b.0, b.1), DivisorClass::new(c.0, c.1));
            prop_assert_eq!(intersect(&a, &b).unwrap(), intersect(&b, &a).unwrap());
            let mut bc = b.clone();
            bc.scaled_add(&c, k);
            prop_assert_eq!(intersect(&a, &bc).unwrap(), intersect(&a, &b).unwrap() + k * intersect(&a, &c).unwrap());
        }

        #[test]
        fn lower_bound_is_monotone_in_multiplicities(n in 4usize..8, i in 0usize..8, bump in 1u32..4) {
            let z = off_line_config(n);
            let cert = off_line_certificate(n);
            let before = lower_bound(&z, &cert).unwrap();
            let mut mults = z.multiplicities().to_vec();
            mults[i % n] += bump;
            let raised = FatPointsP2::new(z.points().to_vec(), mults).unwrap();
            prop_assert!(lower_bound(&raised, &cert).unwrap() >= before);
        }
    }
}
