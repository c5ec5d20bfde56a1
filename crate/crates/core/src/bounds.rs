//! Bracketing Waldschmidt constants: witnessed upper bounds from computed
//! initial degrees, certified lower bounds from closed forms, nef divisors
//! and subscheme monotonicity.

use num_traits::Zero;
use rayon::prelude::*;

use crate::classify::{classify, Classification, Reason, SubschemeCertificate};
use crate::divisors::{lower_bound, NefCertificate};
use crate::error::{Error, Result};
use crate::field::{rational, Rational};
use crate::interp::{alpha_symbolic, AlphaOptions, AlphaRecord};
use crate::scheme::{star_configuration, FatFlatScheme, FatPointsP2};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpperBound {
    pub value: Rational,
    pub k: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LowerCertificate {
    /// `ms/e` for `m S_N(e, s)`.
    ClosedFormStar { e: usize, s: usize, m: u32 },
    /// A single component of multiplicity `mu` has constant `mu`.
    SingleComponent { index: usize, multiplicity: u32 },
    /// `(sum m_i t_i)/t` from a nef divisor on fat points in the plane.
    Nef { points: FatPointsP2, certificate: NefCertificate },
    /// A bound on `subscheme` carried over to every scheme containing it.
    Monotone { subscheme: FatFlatScheme, inner: Box<LowerBound> },
}

impl LowerCertificate {
    pub fn name(&self) -> &'static str {
        match self {
            LowerCertificate::ClosedFormStar { .. } => "closed-form-star",
            LowerCertificate::SingleComponent { .. } => "single-component",
            LowerCertificate::Nef { .. } => "nef",
            LowerCertificate::Monotone { .. } => "monotone",
        }
    }

    /// The certificate at the end of a monotonicity chain.
    pub fn root(&self) -> &LowerCertificate {
        match self {
            LowerCertificate::Monotone { inner, .. } => inner.certificate.root(),
            other => other,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerBound {
    pub value: Rational,
    pub certificate: LowerCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Exact(Rational),
    Interval { lower: Rational, upper: Option<Rational> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub table: Vec<AlphaRecord>,
    pub upper: Option<UpperBound>,
    pub lower: LowerBound,
    pub verdict: Verdict,
}

/// `alpha(I^(k))` for `k = 1..=k_max`, computed concurrently.
pub fn upper_bounds(scheme: &FatFlatScheme, k_max: u32, options: &AlphaOptions) -> Result<Vec<AlphaRecord>> {
    if k_max == 0 {
        return Err(Error::InvalidParameters("k_max must be at least 1".into()));
    }
    (1..=k_max).into_par_iter().map(|k| alpha_symbolic(scheme, k, options)).collect()
}

/// The least `alpha(I^(k))/k` over resolved entries, with the first `k` attaining it.
pub fn upper_from_table(table: &[AlphaRecord]) -> Option<UpperBound> {
    let mut best: Option<UpperBound> = None;
    for r in table {
        if let Some(a) = r.alpha {
            let v = rational(a as i64, r.k as i64);
            if best.as_ref().map_or(true, |b| v < b.value) {
                best = Some(UpperBound { value: v, k: r.k });
            }
        }
    }
    best
}

/// `ms/e`, the Waldschmidt constant of `m S_N(e, s)` and of any fat flat
/// scheme built on it with admissible extras.
pub fn closed_form_star(e: usize, s: usize, m: u32) -> Result<LowerBound> {
    if e < 1 || e > s || m < 1 {
        return Err(Error::InvalidParameters(format!("closed form needs 1 <= e <= s, m >= 1 (e={e}, s={s}, m={m})")));
    }
    Ok(LowerBound {
        value: rational(m as i64 * s as i64, e as i64),
        certificate: LowerCertificate::ClosedFormStar { e, s, m },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCheck {
    pub holds: bool,
    pub failing_k: Option<u32>,
    pub table: Vec<AlphaRecord>,
}

/// Whether `alpha(I^(k)) = t k` for every `k <= k_max`.
pub fn check_linear_alpha(scheme: &FatFlatScheme, t: u32, k_max: u32, options: &AlphaOptions) -> Result<LinearCheck> {
    if t == 0 {
        return Err(Error::InvalidParameters("t must be at least 1".into()));
    }
    let table = upper_bounds(scheme, k_max, options)?;
    for r in &table {
        r.resolved()?;
    }
    let failing_k = table.iter().find(|r| r.alpha != Some(t * r.k)).map(|r| r.k);
    Ok(LinearCheck { holds: failing_k.is_none(), failing_k, table })
}

/// First differences `alpha(I^(k+1)) - alpha(I^(k))`.
pub fn beta_sequence(table: &[AlphaRecord]) -> Result<Vec<i64>> {
    let mut values = Vec::with_capacity(table.len());
    for (i, r) in table.iter().enumerate() {
        let expected = table.first().map_or(1, |f| f.k) + i as u32;
        if r.k != expected {
            return Err(Error::TableGap(expected));
        }
        values.push(r.alpha.ok_or(Error::TableGap(r.k))? as i64);
    }
    Ok(values.windows(2).map(|w| w[1] - w[0]).collect())
}

/// Whether `sub` is obtained from `sup` by deleting components and lowering
/// multiplicities.
pub fn is_subscheme(sub: &FatFlatScheme, sup: &FatFlatScheme) -> bool {
    sub.ambient_dim() == sup.ambient_dim()
        && sub.components().iter().all(|c| {
            sup.components().iter().any(|d| d.subspace == c.subspace && c.multiplicity <= d.multiplicity)
        })
}

/// A lower bound for `sub` is one for every `z` containing it.
pub fn monotone_lower(z: &FatFlatScheme, sub: &FatFlatScheme, bound: LowerBound) -> Result<LowerBound> {
    if !is_subscheme(sub, z) {
        return Err(Error::NotSubscheme("the smaller scheme is not contained in the larger one".into()));
    }
    if is_subscheme(z, sub) {
        return Ok(bound);
    }
    Ok(LowerBound {
        value: bound.value.clone(),
        certificate: LowerCertificate::Monotone { subscheme: sub.clone(), inner: Box::new(bound) },
    })
}

/// `mu` for the component of highest multiplicity.
pub fn single_component_bound(scheme: &FatFlatScheme) -> LowerBound {
    let (index, c) = scheme
        .components()
        .iter()
        .enumerate()
        .max_by_key(|(i, c)| (c.multiplicity, std::cmp::Reverse(*i)))
        .expect("schemes are non-empty");
    let single = FatFlatScheme::new(scheme.ambient_dim(), vec![c.clone()]).expect("one component");
    let bound = LowerBound {
        value: Rational::from_integer(c.multiplicity.into()),
        certificate: LowerCertificate::SingleComponent { index, multiplicity: c.multiplicity },
    };
    monotone_lower(scheme, &single, bound).expect("a component is a subscheme")
}

/// Re-derives the star recorded in the scheme's construction and bounds the
/// scheme by its closed form, provided every star component is present with
/// at least the recorded multiplicity.
pub fn star_bound(scheme: &FatFlatScheme) -> Result<Option<LowerBound>> {
    let Some(star) = scheme.construction().and_then(|c| c.star.as_ref()) else {
        return Ok(None);
    };
    let data = star_configuration(scheme.ambient_dim(), star.e, star.s, star.hyperplanes.clone())?;
    let fat = data.fat(star.m);
    if !is_subscheme(&fat, scheme) {
        return Err(Error::Certificate("the recorded star is not contained in the scheme".into()));
    }
    let bound = closed_form_star(star.e, star.s, star.m)?;
    let plain = FatFlatScheme::new(fat.ambient_dim(), fat.components().to_vec())?;
    monotone_lower(scheme, &plain, bound).map(Some)
}

/// A nef bound on `points`, carried to `scheme` by monotonicity.
pub fn nef_bound(scheme: &FatFlatScheme, points: &FatPointsP2, cert: &NefCertificate) -> Result<LowerBound> {
    let value = lower_bound(points, cert)?;
    let bound = LowerBound { value, certificate: LowerCertificate::Nef { points: points.clone(), certificate: cert.clone() } };
    monotone_lower(scheme, &points.to_scheme(), bound)
}

fn subscheme_bound(scheme: &FatFlatScheme, z: &FatPointsP2, c: &SubschemeCertificate) -> Result<LowerBound> {
    nef_bound(scheme, &c.subscheme(z)?, &c.certificate)
}

/// The bound the plane classifier certifies, for non-reduced fat points with
/// a certificate-bearing verdict.
pub fn classifier_bound(scheme: &FatFlatScheme) -> Result<Option<LowerBound>> {
    let Ok(z) = FatPointsP2::from_scheme(scheme) else {
        return Ok(None);
    };
    let cls = match classify(&z) {
        Ok(c) => c,
        Err(Error::ReducedInput) => return Ok(None),
        Err(e) => return Err(e),
    };
    match &cls {
        Classification::CaseC { certificate, .. } => subscheme_bound(scheme, &z, certificate).map(Some),
        Classification::NotBelowFiveHalves(r @ Reason::TwoDoublesCertificate(_))
        | Classification::NotBelowFiveHalves(r @ Reason::GeneralPositionConic(_))
        | Classification::NotBelowFiveHalves(r @ Reason::TwoLinesSplitSubscheme(_))
        | Classification::NotBelowFiveHalves(r @ Reason::Figure3Bound { .. }) => {
            subscheme_bound(scheme, &z, r.certificate().expect("certificate")).map(Some)
        }
        _ => Ok(None),
    }
}

/// Aggregates the `alpha` table with every applicable lower bound and keeps
/// the best one. An explicit nef certificate on a subscheme of plane points
/// may be supplied.
pub fn bound_report(
    scheme: &FatFlatScheme,
    k_max: u32,
    options: &AlphaOptions,
    extra: Option<(&FatPointsP2, &NefCertificate)>,
) -> Result<BoundReport> {
    let table = upper_bounds(scheme, k_max, options)?;
    let upper = upper_from_table(&table);
    let mut candidates = vec![single_component_bound(scheme)];
    candidates.extend(star_bound(scheme)?);
    candidates.extend(classifier_bound(scheme)?);
    if let Some((points, cert)) = extra {
        candidates.push(nef_bound(scheme, points, cert)?);
    }
    // Keep the first candidate among those with the largest value.
    let mut lower = candidates.remove(0);
    for c in candidates {
        if c.value > lower.value {
            lower = c;
        }
    }
    let verdict = match &upper {
        Some(u) if u.value < lower.value => {
            return Err(Error::Certificate(format!(
                "lower bound {} exceeds the witnessed upper bound {} at k = {}",
                lower.value, u.value, u.k
            )));
        }
        Some(u) if u.value == lower.value => Verdict::Exact(u.value.clone()),
        _ => Verdict::Interval { lower: lower.value.clone(), upper: upper.as_ref().map(|u| u.value.clone()) },
    };
    Ok(BoundReport { table, upper, lower, verdict })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonContainment {
    /// `alpha(I^(m)) < r alpha(I)`: then `I^(m)` is not contained in `I^r`.
    pub certified: bool,
    pub alpha_symbolic: u32,
    pub alpha_ordinary: u32,
    /// With a known Waldschmidt constant: whether `m/r < alpha(I)/waldschmidt`.
    pub asymptotic_hint: Option<bool>,
}

/// The degree obstruction to `I^(m) ⊆ I^r`. A negative answer only means the
/// degrees do not decide containment.
pub fn noncontainment_witness(
    scheme: &FatFlatScheme,
    m: u32,
    r: u32,
    options: &AlphaOptions,
    waldschmidt: Option<&Rational>,
) -> Result<NonContainment> {
    if m == 0 || r == 0 {
        return Err(Error::InvalidParameters("m and r must be at least 1".into()));
    }
    let a1 = alpha_symbolic(scheme, 1, options)?.resolved()?;
    let am = if m == 1 { a1 } else { alpha_symbolic(scheme, m, options)?.resolved()? };
    let asymptotic_hint = waldschmidt.filter(|w| !w.is_zero()).map(|w| {
        rational(m as i64, r as i64) < Rational::from_integer(a1.into()) / w
    });
    Ok(NonContainment { certified: (am as u64) < r as u64 * a1 as u64, alpha_symbolic: am, alpha_ordinary: a1, asymptotic_hint })
}
