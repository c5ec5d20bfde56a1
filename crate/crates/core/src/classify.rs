//! Non-reduced fat points in the plane with Waldschmidt constant below 5/2.
//!
//! Exactly three shapes stay below 5/2: collinear schemes (constant 2),
//! a single double point on two lines that cover every other point
//! (constant 2), and a double point off a line through three simple points
//! (constant 7/3). Every other non-reduced scheme satisfies `>= 5/2`, and the
//! classifier returns a nef certificate on a subscheme that proves it.

use num_traits::Zero;

use crate::divisors::{lower_bound, ComponentClass, NefCertificate};
use crate::error::{Error, Result};
use crate::field::{rational, Rational};
use crate::projective::{collinear, line_through, LinForm, Point};
use crate::scheme::FatPointsP2;

/// A nef certificate on the subscheme with the given points (indices into the
/// classified scheme) and multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubschemeCertificate {
    pub indices: Vec<usize>,
    pub multiplicities: Vec<u32>,
    pub certificate: NefCertificate,
}

impl SubschemeCertificate {
    pub fn subscheme(&self, z: &FatPointsP2) -> Result<FatPointsP2> {
        z.restrict(&self.indices, &self.multiplicities)
    }

    /// The certified lower bound, re-verified against `z`.
    pub fn bound(&self, z: &FatPointsP2) -> Result<Rational> {
        lower_bound(&self.subscheme(z)?, &self.certificate)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reason {
    /// Point `index` alone has constant `multiplicity >= 3`.
    MultiplicityAtLeast3 { index: usize, multiplicity: u32 },
    /// Two double points and a point off their line: `2L - E_1 - E_2 - E_3`.
    TwoDoublesCertificate(SubschemeCertificate),
    /// A double point and three others, no three collinear: the conic class.
    GeneralPositionConic(SubschemeCertificate),
    /// The support lies on two lines; the conic class on a general 4-subset.
    TwoLinesSplitSubscheme(SubschemeCertificate),
    /// A double point off the line of `n - 1` simple points: `(3n - 5)/(n - 1)`.
    Figure3Bound { n: usize, value: Rational, certificate: SubschemeCertificate },
}

impl Reason {
    pub fn certificate(&self) -> Option<&SubschemeCertificate> {
        match self {
            Reason::MultiplicityAtLeast3 { .. } => None,
            Reason::TwoDoublesCertificate(c) | Reason::GeneralPositionConic(c) | Reason::TwoLinesSplitSubscheme(c) => {
                Some(c)
            }
            Reason::Figure3Bound { certificate, .. } => Some(certificate),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Reason::MultiplicityAtLeast3 { .. } => "multiplicity-at-least-3",
            Reason::TwoDoublesCertificate(_) => "two-doubles",
            Reason::GeneralPositionConic(_) => "general-position-conic",
            Reason::TwoLinesSplitSubscheme(_) => "two-lines-split",
            Reason::Figure3Bound { .. } => "double-off-line",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    /// All points on one line.
    CaseA,
    /// One double point `p_0`; two lines through it cover the rest.
    CaseB { double: usize },
    /// `2 p_1 + p_2 + p_3 + p_4` with `p_2, p_3, p_4` on a line missing `p_1`.
    CaseC { double: usize, certificate: SubschemeCertificate },
    NotBelowFiveHalves(Reason),
}

impl Classification {
    pub fn name(&self) -> &'static str {
        match self {
            Classification::CaseA => "case-a",
            Classification::CaseB { .. } => "case-b",
            Classification::CaseC { .. } => "case-c",
            Classification::NotBelowFiveHalves(_) => "not-below-5/2",
        }
    }
}

/// What a classification says about the Waldschmidt constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueClaim {
    Exact(Rational),
    AtLeast(Rational),
}

fn on_line(l: &LinForm, p: &Point) -> bool {
    l.eval(p.coords()).is_zero()
}

/// Distinct lines through `z.points()[p]` carrying the other points, each
/// with its points in input order.
fn lines_through(z: &FatPointsP2, p: usize) -> Result<Vec<(LinForm, Vec<usize>)>> {
    let pts = z.points();
    let mut lines: Vec<(LinForm, Vec<usize>)> = Vec::new();
    for q in (0..z.len()).filter(|&q| q != p) {
        match lines.iter_mut().find(|(l, _)| on_line(l, &pts[q])) {
            Some((_, members)) => members.push(q),
            None => lines.push((line_through(&pts[p], &pts[q])?, vec![q])),
        }
    }
    Ok(lines)
}

fn all_collinear(z: &FatPointsP2, idx: &[usize]) -> Result<bool> {
    if idx.len() < 2 {
        return Ok(true);
    }
    collinear(&idx.iter().map(|&i| z.points()[i].clone()).collect::<Vec<_>>())
}

/// Whether two lines cover the support, one of them through two or more points.
fn on_two_lines(z: &FatPointsP2) -> Result<bool> {
    let pts = z.points();
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            let l = line_through(&pts[i], &pts[j])?;
            let rest: Vec<usize> = (0..z.len()).filter(|&q| !on_line(&l, &pts[q])).collect();
            if all_collinear(z, &rest)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

fn conic_on(z: &FatPointsP2, quad: [usize; 4]) -> SubschemeCertificate {
    let multiplicities = quad.iter().map(|&i| z.multiplicities()[i].min(2)).collect();
    SubschemeCertificate {
        indices: quad.to_vec(),
        multiplicities,
        certificate: NefCertificate::from_decomposition(4, vec![(ComponentClass::ConicTransform(vec![0, 1, 2, 3]), 1)]),
    }
}

/// The divisor `(n-1) L - (n-2) E_0 - E_1 - ... - E_{n-1}` written as the
/// lines from point 0 to every other point plus `E_0`.
fn star_of_lines(n: usize) -> NefCertificate {
    let mut dec: Vec<_> = (1..n).map(|i| (ComponentClass::LineTransform(vec![0, i]), 1)).collect();
    dec.push((ComponentClass::Exceptional(0), 1));
    NefCertificate::from_decomposition(n, dec)
}

/// A general-position 4-subset `{p0, a, b, c}`: one point from each of three
/// lines through `p0`, not collinear.
fn general_quadruple(z: &FatPointsP2, p0: usize, lines: &[(LinForm, Vec<usize>)]) -> Result<Option<[usize; 4]>> {
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            for k in j + 1..lines.len() {
                for &a in &lines[i].1 {
                    for &b in &lines[j].1 {
                        for &c in &lines[k].1 {
                            if !all_collinear(z, &[a, b, c])? {
                                let mut q = [p0, a, b, c];
                                q[1..].sort_unstable();
                                return Ok(Some(q));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

pub fn classify(z: &FatPointsP2) -> Result<Classification> {
    if z.is_empty() {
        return Err(Error::InvalidScheme("empty point configuration".into()));
    }
    let mults = z.multiplicities();
    if mults.iter().all(|&m| m == 1) {
        return Err(Error::ReducedInput);
    }
    if let Some(index) = mults.iter().position(|&m| m >= 3) {
        return Ok(Classification::NotBelowFiveHalves(Reason::MultiplicityAtLeast3 {
            index,
            multiplicity: mults[index],
        }));
    }
    if z.len() == 1 || z.is_collinear() {
        return Ok(Classification::CaseA);
    }
    let doubles: Vec<usize> = (0..z.len()).filter(|&i| mults[i] == 2).collect();
    let pts = z.points();
    if doubles.len() >= 2 {
        let (d0, d1) = (doubles[0], doubles[1]);
        let l = line_through(&pts[d0], &pts[d1])?;
        let q = (0..z.len()).find(|&q| !on_line(&l, &pts[q])).expect("not collinear");
        let certificate = NefCertificate::from_decomposition(
            3,
            vec![
                (ComponentClass::LineTransform(vec![0, 1]), 1),
                (ComponentClass::LineTransform(vec![0, 2]), 1),
                (ComponentClass::Exceptional(0), 1),
            ],
        );
        return Ok(Classification::NotBelowFiveHalves(Reason::TwoDoublesCertificate(SubschemeCertificate {
            indices: vec![d0, d1, q],
            multiplicities: vec![2, 2, 1],
            certificate,
        })));
    }
    let p0 = doubles[0];
    let lines = lines_through(z, p0)?;
    if lines.len() == 2 {
        return Ok(Classification::CaseB { double: p0 });
    }
    let simples: Vec<usize> = (0..z.len()).filter(|&i| i != p0).collect();
    if all_collinear(z, &simples)? {
        // p0 is off their line, else the scheme would be collinear.
        let n = z.len();
        let mut indices = vec![p0];
        indices.extend(&simples);
        let mut sub_mults = vec![2];
        sub_mults.extend(std::iter::repeat(1).take(n - 1));
        let certificate = SubschemeCertificate { indices, multiplicities: sub_mults, certificate: star_of_lines(n) };
        if n == 4 {
            return Ok(Classification::CaseC { double: p0, certificate });
        }
        return Ok(Classification::NotBelowFiveHalves(Reason::Figure3Bound {
            n,
            value: rational(3 * n as i64 - 5, n as i64 - 1),
            certificate,
        }));
    }
    let quad = general_quadruple(z, p0, &lines)?
        .ok_or_else(|| Error::Certificate("no general-position 4-subset through the double point".into()))?;
    let cert = conic_on(z, quad);
    Ok(Classification::NotBelowFiveHalves(if on_two_lines(z)? {
        Reason::TwoLinesSplitSubscheme(cert)
    } else {
        Reason::GeneralPositionConic(cert)
    }))
}

pub fn exact_value(c: &Classification, z: &FatPointsP2) -> Result<ValueClaim> {
    Ok(match c {
        Classification::CaseA | Classification::CaseB { .. } => ValueClaim::Exact(rational(2, 1)),
        Classification::CaseC { .. } => ValueClaim::Exact(rational(7, 3)),
        Classification::NotBelowFiveHalves(Reason::MultiplicityAtLeast3 { multiplicity, .. }) => {
            ValueClaim::AtLeast(Rational::from_integer((*multiplicity).into()))
        }
        Classification::NotBelowFiveHalves(r) => ValueClaim::AtLeast(r.certificate().expect("certificate").bound(z)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::{build_plane_family, PlaneFamily};

    #[test]
    fn theorem_shapes() {
        let a = FatPointsP2::from_ints(&[[1, 0, 1], [2, 0, 1], [3, 0, 1], [4, 0, 1]], &[2, 2, 1, 1]).unwrap();
        assert_eq!(classify(&a).unwrap(), Classification::CaseA);
        assert_eq!(exact_value(&Classification::CaseA, &a).unwrap(), ValueClaim::Exact(rational(2, 1)));

        let b = FatPointsP2::from_ints(&[[0, 3, 1], [5, 0, 1], [0, 0, 1]], &[1, 1, 2]).unwrap();
        assert_eq!(classify(&b).unwrap(), Classification::CaseB { double: 2 });

        let c = build_plane_family(&PlaneFamily::DoubleOffTriple, 3).unwrap();
        let cls = classify(&c).unwrap();
        assert!(matches!(cls, Classification::CaseC { double: 0, .. }));
        assert_eq!(exact_value(&cls, &c).unwrap(), ValueClaim::Exact(rational(7, 3)));
        if let Classification::CaseC { certificate, .. } = &cls {
            assert_eq!(certificate.certificate.divisor.t, 3);
            assert_eq!(certificate.certificate.divisor.drops, vec![2, 1, 1, 1]);
            assert_eq!(certificate.bound(&c).unwrap(), rational(7, 3));
        }
    }

    #[test]
    fn not_below_shapes() {
        let z = FatPointsP2::from_ints(&[[1, 0, 1], [2, 0, 1], [0, 1, 1]], &[2, 2, 1]).unwrap();
        let cls = classify(&z).unwrap();
        assert!(matches!(cls, Classification::NotBelowFiveHalves(Reason::TwoDoublesCertificate(_))));
        assert_eq!(exact_value(&cls, &z).unwrap(), ValueClaim::AtLeast(rational(5, 2)));

        let f3 = build_plane_family(&PlaneFamily::DoubleOffLine { n: 5 }, 1).unwrap();
        let cls = classify(&f3).unwrap();
        match &cls {
            Classification::NotBelowFiveHalves(Reason::Figure3Bound { n, value, .. }) => {
                assert_eq!(*n, 5);
                assert_eq!(*value, rational(5, 2));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(exact_value(&cls, &f3).unwrap(), ValueClaim::AtLeast(rational(5, 2)));

        let w = build_plane_family(&PlaneFamily::DoubleWithTwoPairs, 4).unwrap();
        let cls = classify(&w).unwrap();
        assert!(matches!(cls, Classification::NotBelowFiveHalves(Reason::TwoLinesSplitSubscheme(_))));
        assert_eq!(exact_value(&cls, &w).unwrap(), ValueClaim::AtLeast(rational(5, 2)));

        let gp = FatPointsP2::from_ints(&[[0, 0, 1], [1, 0, 1], [0, 1, 1], [1, 1, 1], [2, 5, 1]], &[2, 1, 1, 1, 1])
            .unwrap();
        assert!(matches!(classify(&gp).unwrap(), Classification::NotBelowFiveHalves(Reason::GeneralPositionConic(_))));

        let triple = FatPointsP2::from_ints(&[[0, 0, 1], [1, 0, 1]], &[3, 1]).unwrap();
        assert!(matches!(
            classify(&triple).unwrap(),
            Classification::NotBelowFiveHalves(Reason::MultiplicityAtLeast3 { index: 0, multiplicity: 3 })
        ));
    }

    #[test]
    fn reduced_and_empty_inputs_are_rejected() {
        let r = FatPointsP2::from_ints(&[[1, 0, 1], [0, 1, 1]], &[1, 1]).unwrap();
        assert_eq!(classify(&r), Err(Error::ReducedInput));
    }

    #[test]
    fn shape_grids() {
        for r in 1..=3 {
            for s in 0..=3 {
                let z = build_plane_family(&PlaneFamily::Collinear { doubles: r, simples: s }, 9).unwrap();
                assert_eq!(classify(&z).unwrap(), Classification::CaseA, "r={r} s={s}");
            }
        }
        for r in 1..=3 {
            for s in 1..=3 {
                let z = build_plane_family(&PlaneFamily::TwoLinesThroughDouble { r, s }, 9).unwrap();
                assert_eq!(classify(&z).unwrap(), Classification::CaseB { double: 0 }, "r={r} s={s}");
            }
        }
    }

    #[test]
    fn every_certificate_reaches_five_halves() {
        let families = [
            PlaneFamily::DoubleWithTwoPairs,
            PlaneFamily::TwoDoublesAndSimple,
            PlaneFamily::DoubleWithTwoPairsAndNode,
            PlaneFamily::DoubleOffLine { n: 5 },
            PlaneFamily::DoubleOffLine { n: 8 },
        ];
        for f in &families {
            for seed in 0..5 {
                let z = build_plane_family(f, seed).unwrap();
                match classify(&z).unwrap() {
                    Classification::NotBelowFiveHalves(r) => {
                        let b = r.certificate().unwrap().bound(&z).unwrap();
                        assert!(b >= rational(5, 2), "{f:?}: {b}");
                    }
                    other => panic!("{f:?}: {other:?}"),
                }
            }
        }
    }
}
