//! The verification suite: fixed instances with known initial degrees,
//! classifications and Waldschmidt constants, plus a randomized property run.
//! Shared by the `acceptance` test target and the `verify-paper` command.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{
    bound_report, check_linear_alpha, noncontainment_witness, single_component_bound, upper_bounds, upper_from_table,
    Verdict,
};
use crate::classify::{classify, exact_value, Classification, Reason, ValueClaim};
use crate::divisors::{lower_bound, verify_nef, ComponentClass, DivisorClass, NefCertificate};
use crate::field::{format_rational, int, rational, DEFAULT_PRIMES};
use crate::interp::{alpha_symbolic, form_product, membership, AlphaOptions, AlphaRecord};
use crate::projective::{
    line_through, random_coordinate_change, random_general_hyperplanes, LinForm, Subspace,
};
use crate::scheme::{
    build_integer_target, build_plane_family, build_quasi_star, build_rational_target, star_configuration,
    ExtraSpec, FatComponent, FatFlatScheme, FatPointsP2, PlaneFamily,
};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct CheckConfig {
    pub primes: [u64; 2],
    pub seed: u64,
    pub property_instances: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { primes: DEFAULT_PRIMES, seed: 1, property_instances: 200 }
    }
}

impl CheckConfig {
    fn modular(&self) -> AlphaOptions {
        AlphaOptions::modular(self.primes)
    }
}

pub struct Check {
    pub id: &'static str,
    pub criterion: u32,
    pub description: &'static str,
    pub time_limit: Option<Duration>,
    run: fn(&CheckConfig) -> Result<Probe>,
}

/// A check body's verdict before the time limit is applied.
struct Probe {
    passed: bool,
    detail: String,
}

impl Probe {
    fn new() -> Self {
        Probe { passed: true, detail: String::new() }
    }

    fn note(&mut self, ok: bool, text: impl AsRef<str>) {
        if !self.detail.is_empty() {
            self.detail.push_str("; ");
        }
        self.detail.push_str(text.as_ref());
        if !ok {
            self.passed = false;
            self.detail.push_str(" [mismatch]");
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub id: &'static str,
    pub criterion: u32,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub time_limit: Option<Duration>,
}

pub fn all_checks() -> Vec<Check> {
    let secs = |s| Some(Duration::from_secs(s));
    vec![
        Check {
            id: "star-p3",
            criterion: 1,
            description: "alpha(I(S_3(2,4))^(k)) = 2k for k = 1..4",
            time_limit: secs(30),
            run: star_p3,
        },
        Check {
            id: "star-p2",
            criterion: 2,
            description: "S_2(2,5): alpha = 4, 5, 10 at k = 1, 2, 4 and constant exactly 5/2",
            time_limit: secs(30),
            run: star_p2,
        },
        Check {
            id: "integer-target",
            criterion: 3,
            description: "2 S_3(2,4) plus a point on H_1: alpha(I^(k)) = 4k for k = 1..3",
            time_limit: None,
            run: integer_target,
        },
        Check {
            id: "case-c",
            criterion: 4,
            description: "2p_1 + p_2 + p_3 + p_4, simple points collinear: constant 7/3",
            time_limit: None,
            run: case_c,
        },
        Check {
            id: "case-a",
            criterion: 5,
            description: "2p_1 + 2p_2 + p_3 collinear: alpha(I^(k)) = 2k with witness L^(2k)",
            time_limit: None,
            run: case_a,
        },
        Check {
            id: "case-b",
            criterion: 6,
            description: "p_1 + p_2 + 2p_0 on two lines: constant 2",
            time_limit: None,
            run: case_b,
        },
        Check {
            id: "not-below",
            criterion: 7,
            description: "certificates reaching 5/2 and the schemes attaining it",
            time_limit: None,
            run: not_below,
        },
        Check {
            id: "quasi-star",
            criterion: 8,
            description: "quasi-star with s = 5: alpha(I^(k)) = 5k for k = 1, 2",
            time_limit: secs(60),
            run: quasi_star,
        },
        Check {
            id: "rational-target",
            criterion: 9,
            description: "schemes built for 5/2 in P^2 and P^4 have constant exactly 5/2",
            time_limit: secs(300),
            run: rational_targets,
        },
        Check {
            id: "properties",
            criterion: 10,
            description: "randomized monotonicity, subadditivity, field agreement, invariance, membership",
            time_limit: None,
            run: properties,
        },
        Check {
            id: "noncontainment",
            criterion: 11,
            description: "S_2(2,5): alpha(I^(2)) < 2 alpha(I), so I^(2) is not in I^2",
            time_limit: None,
            run: noncontainment,
        },
    ]
}

/// Runs the checks whose id is in `only` (all when `None`). Unknown ids are
/// an error.
pub fn run_checks(config: &CheckConfig, only: Option<&[String]>) -> Result<Vec<CheckOutcome>> {
    let checks = all_checks();
    if let Some(ids) = only {
        if let Some(bad) = ids.iter().find(|id| !checks.iter().any(|c| c.id == id.as_str())) {
            return Err(Error::InvalidParameters(format!("unknown check id {bad:?}")));
        }
    }
    Ok(checks
        .iter()
        .filter(|c| only.map_or(true, |ids| ids.iter().any(|id| id == c.id)))
        .map(|c| run_one(c, config))
        .collect())
}

pub fn run_one(check: &Check, config: &CheckConfig) -> CheckOutcome {
    let start = Instant::now();
    let probe = (check.run)(config);
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match probe {
        Ok(p) => (p.passed, p.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(limit) = check.time_limit {
        if elapsed > limit {
            passed = false;
            detail.push_str(&format!("; exceeded {} s", limit.as_secs()));
        }
    }
    CheckOutcome { id: check.id, criterion: check.criterion, passed, detail, elapsed, time_limit: check.time_limit }
}

fn star_scheme(n: usize, e: usize, s: usize, m: u32, seed: u64) -> Result<FatFlatScheme> {
    Ok(star_configuration(n, e, s, random_general_hyperplanes(n, s, seed)?)?.fat(m))
}

fn opt(a: Option<u32>) -> String {
    a.map_or_else(|| "unresolved".to_string(), |a| a.to_string())
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Exact(q) => format!("exact {}", format_rational(q)),
        Verdict::Interval { lower, upper } => format!(
            "between {} and {}",
            format_rational(lower),
            upper.as_ref().map_or_else(|| "?".to_string(), format_rational)
        ),
    }
}

fn claim_text(c: &ValueClaim) -> String {
    match c {
        ValueClaim::Exact(q) => format!("exactly {}", format_rational(q)),
        ValueClaim::AtLeast(q) => format!("at least {}", format_rational(q)),
    }
}

fn alphas(table: &[AlphaRecord]) -> String {
    let parts: Vec<String> =
        table.iter().map(|r| r.alpha.map_or_else(|| "?".to_string(), |a| a.to_string())).collect();
    parts.join(",")
}

/// `alpha` over a prime field and, as an independent check, over Q.
fn alpha_in_both(scheme: &FatFlatScheme, k: u32, config: &CheckConfig) -> Result<(u32, Option<u32>)> {
    let modp = alpha_symbolic(scheme, k, &config.modular())?.resolved()?;
    let exact = alpha_symbolic(scheme, k, &AlphaOptions::rational())?.alpha;
    Ok((modp, exact))
}

fn note_both(probe: &mut Probe, label: &str, got: (u32, Option<u32>), want: u32) {
    probe.note(got.0 == want && got.1 == Some(want), format!("{label}: modp {} rational {}, want {want}", got.0, opt(got.1)));
}

fn star_p3(config: &CheckConfig) -> Result<Probe> {
    let w = star_scheme(3, 2, 4, 1, config.seed)?;
    let table = upper_bounds(&w, 4, &config.modular())?;
    let mut probe = Probe::new();
    let got: Vec<Option<u32>> = table.iter().map(|r| r.alpha).collect();
    let want: Vec<Option<u32>> = (1..=4).map(|k| Some(2 * k)).collect();
    probe.note(got == want, format!("alpha = {}, want 2,4,6,8", alphas(&table)));
    Ok(probe)
}

fn star_p2(config: &CheckConfig) -> Result<Probe> {
    let w = star_scheme(2, 2, 5, 1, config.seed)?;
    let mut probe = Probe::new();
    note_both(&mut probe, "k=1", alpha_in_both(&w, 1, config)?, 4);
    note_both(&mut probe, "k=2", alpha_in_both(&w, 2, config)?, 5);
    let a4 = alpha_symbolic(&w, 4, &config.modular())?.resolved()?;
    probe.note(a4 == 10, format!("k=4: {a4}, want 10"));
    let report = bound_report(&w, 2, &config.modular(), None)?;
    probe.note(
        report.verdict == Verdict::Exact(rational(5, 2)),
        format!("verdict {}, lower via {}", verdict_text(&report.verdict), report.lower.certificate.name()),
    );
    Ok(probe)
}

fn integer_target(config: &CheckConfig) -> Result<Probe> {
    let extra = ExtraSpec { hyperplane: 0, codim: 3, multiplicity: 1 };
    let w = build_integer_target(3, 4, 4, 1, 2, &[extra], config.seed)?;
    let mut probe = Probe::new();
    let check = check_linear_alpha(&w, 4, 3, &config.modular())?;
    probe.note(check.holds, format!("alpha = {}, want 4,8,12; linear check holds = {}", alphas(&check.table), check.holds));
    Ok(probe)
}

fn double_index(z: &FatPointsP2) -> Result<usize> {
    z.multiplicities()
        .iter()
        .position(|&m| m == 2)
        .ok_or_else(|| Error::InvalidParameters("no double point".into()))
}

fn case_c(config: &CheckConfig) -> Result<Probe> {
    let z = build_plane_family(&PlaneFamily::DoubleOffTriple, config.seed)?;
    let mut probe = Probe::new();
    let c = classify(&z)?;
    let value = exact_value(&c, &z)?;
    probe.note(
        matches!(c, Classification::CaseC { .. }) && value == ValueClaim::Exact(rational(7, 3)),
        format!("classified {}, constant {}", c.name(), claim_text(&value)),
    );

    let w = z.to_scheme();
    note_both(&mut probe, "alpha(I^(3))", alpha_in_both(&w, 3, config)?, 7);

    let d = double_index(&z)?;
    let pts = z.points();
    let others: Vec<usize> = (0..pts.len()).filter(|&i| i != d).collect();
    let mut factors: Vec<(LinForm, u32)> =
        others.iter().map(|&j| Ok((line_through(&pts[d], &pts[j])?, 2))).collect::<Result<_>>()?;
    factors.push((line_through(&pts[others[0]], &pts[others[1]])?, 1));
    let f = form_product(&factors)?;
    probe.note(membership(&f, &w, 3)?, format!("degree {} witness membership in I^(3)", f.degree()));

    let mut decomposition: Vec<(ComponentClass, u32)> =
        others.iter().map(|&j| (ComponentClass::LineTransform(vec![d, j]), 1)).collect();
    decomposition.push((ComponentClass::Exceptional(d), 1));
    let h = NefCertificate::from_decomposition(z.len(), decomposition);
    let mut drops = vec![1; z.len()];
    drops[d] = 2;
    probe.note(h.divisor == DivisorClass::new(3, drops), "H = 3L - 2E_1 - E_2 - E_3 - E_4");
    verify_nef(&h, &z)?;
    let b = lower_bound(&z, &h)?;
    probe.note(b == rational(7, 3), format!("H is nef, bound {}", format_rational(&b)));
    Ok(probe)
}

fn case_a(config: &CheckConfig) -> Result<Probe> {
    let z = build_plane_family(&PlaneFamily::Collinear { doubles: 2, simples: 1 }, config.seed)?;
    let mut probe = Probe::new();
    let c = classify(&z)?;
    probe.note(matches!(c, Classification::CaseA), format!("classified {}", c.name()));
    let w = z.to_scheme();
    let line = line_through(&z.points()[0], &z.points()[1])?;
    for k in 1..=4 {
        note_both(&mut probe, &format!("k={k}"), alpha_in_both(&w, k, config)?, 2 * k);
        let f = form_product(&[(line.clone(), 2 * k)])?;
        probe.note(membership(&f, &w, k)?, format!("L^{} in I^({k})", 2 * k));
    }
    Ok(probe)
}

fn case_b(config: &CheckConfig) -> Result<Probe> {
    let z = build_plane_family(&PlaneFamily::TwoLinesThroughDouble { r: 1, s: 1 }, config.seed)?;
    let mut probe = Probe::new();
    let c = classify(&z)?;
    probe.note(matches!(c, Classification::CaseB { .. }), format!("classified {}", c.name()));
    let w = z.to_scheme();
    for k in 1..=2 {
        let got = alpha_in_both(&w, k, config)?;
        probe.note(got.1 == Some(got.0), format!("k={k}: modp {} rational {}", got.0, opt(got.1)));
    }
    let table = upper_bounds(&w, 4, &config.modular())?;
    let upper = upper_from_table(&table).map(|u| u.value);
    probe.note(upper == Some(int(2)), format!("alpha = {}, min alpha/k = {}", alphas(&table), upper.as_ref().map_or_else(|| "?".to_string(), format_rational)));
    let single = single_component_bound(&w);
    probe.note(single.value == int(2), format!("double point bound {}", format_rational(&single.value)));
    let report = bound_report(&w, 4, &config.modular(), None)?;
    probe.note(report.verdict == Verdict::Exact(int(2)), format!("verdict {}", verdict_text(&report.verdict)));
    Ok(probe)
}

fn not_below(config: &CheckConfig) -> Result<Probe> {
    let five_halves = rational(5, 2);
    let mut probe = Probe::new();

    let z1 = build_plane_family(&PlaneFamily::TwoDoublesAndSimple, config.seed)?;
    match classify(&z1)? {
        Classification::NotBelowFiveHalves(Reason::TwoDoublesCertificate(sc)) => {
            let b = sc.bound(&z1)?;
            probe.note(b == five_halves, format!("two doubles: G bound {}", format_rational(&b)));
        }
        other => probe.note(false, format!("two doubles classified {}", other.name())),
    }

    let z2 = build_plane_family(&PlaneFamily::DoubleOffLine { n: 5 }, config.seed)?;
    match classify(&z2)? {
        Classification::NotBelowFiveHalves(Reason::Figure3Bound { value, certificate, .. }) => {
            let b = certificate.bound(&z2)?;
            probe.note(
                value == five_halves && b == five_halves,
                format!("double off a line of four: bound {}", format_rational(&b)),
            );
        }
        other => probe.note(false, format!("double off a line of four classified {}", other.name())),
    }

    let families = [
        ("W'", PlaneFamily::DoubleWithTwoPairs),
        ("Z'", PlaneFamily::TwoDoublesAndSimple),
        ("Z", PlaneFamily::DoubleOffLine { n: 5 }),
    ];
    for (label, family) in families {
        let w = build_plane_family(&family, config.seed)?.to_scheme();
        let report = bound_report(&w, 2, &config.modular(), None)?;
        let a2 = alpha_in_both(&w, 2, config)?;
        probe.note(
            report.lower.value == five_halves && a2 == (5, Some(5)) && report.verdict == Verdict::Exact(five_halves.clone()),
            format!(
                "{label}: lower {} via {}, alpha(I^(2)) = {}, verdict {}",
                format_rational(&report.lower.value),
                report.lower.certificate.root().name(),
                a2.0,
                verdict_text(&report.verdict)
            ),
        );
    }
    Ok(probe)
}

fn quasi_star(config: &CheckConfig) -> Result<Probe> {
    let w = build_quasi_star(5, config.seed)?;
    let mut probe = Probe::new();
    note_both(&mut probe, "k=1", alpha_in_both(&w, 1, config)?, 5);
    note_both(&mut probe, "k=2", alpha_in_both(&w, 2, config)?, 10);
    Ok(probe)
}

fn rational_targets(config: &CheckConfig) -> Result<Probe> {
    let mut probe = Probe::new();
    for (a, b, k_max, cap) in [(2, 5, 2, None), (4, 10, 4, Some(20))] {
        let w = build_rational_target(a, b, None, config.seed)?;
        let options = match cap {
            Some(c) => config.modular().with_cap(c),
            None => config.modular(),
        };
        let report = bound_report(&w, k_max, &options, None)?;
        probe.note(
            report.verdict == Verdict::Exact(rational(5, 2)),
            format!(
                "({a},{b}) in P^{}: alpha = {}, verdict {}",
                w.ambient_dim(),
                alphas(&report.table),
                verdict_text(&report.verdict)
            ),
        );
    }
    Ok(probe)
}

fn noncontainment(config: &CheckConfig) -> Result<Probe> {
    let w = star_scheme(2, 2, 5, 1, config.seed)?;
    let nc = noncontainment_witness(&w, 2, 2, &config.modular(), Some(&rational(5, 2)))?;
    let mut probe = Probe::new();
    probe.note(
        nc.certified && nc.alpha_symbolic == 5 && nc.alpha_ordinary == 4,
        format!("{} < 2 * {}: certified = {}", nc.alpha_symbolic, nc.alpha_ordinary, nc.certified),
    );
    Ok(probe)
}

fn small_form(rng: &mut ChaCha8Rng, n: usize) -> Option<LinForm> {
    LinForm::new((0..=n).map(|_| int(rng.gen_range(-9..=9))).collect()).ok()
}

/// A random fat flat scheme with no component containing another, and the
/// largest symbolic power to test on it.
pub fn random_instance(rng: &mut ChaCha8Rng) -> (FatFlatScheme, u32) {
    loop {
        let n = rng.gen_range(1..=3);
        let count = rng.gen_range(1..=8);
        let components: Vec<FatComponent> = (0..count)
            .map(|_| {
                let codim = if n == 1 { 1 } else { rng.gen_range(2..=n) };
                let sub = loop {
                    let forms: Option<Vec<LinForm>> = (0..codim).map(|_| small_form(rng, n)).collect();
                    if let Some(Ok(s)) = forms.map(|f| Subspace::new(n, f)) {
                        break s;
                    }
                };
                FatComponent::new(sub, rng.gen_range(1..=2))
            })
            .collect();
        let has_lines = components.iter().any(|c| c.subspace.codim() < n);
        let k_max = if n == 3 && has_lines && count > 4 { 2 } else { 3 };
        if let Ok(w) = FatFlatScheme::new(n, components) {
            return (w, k_max);
        }
    }
}

#[derive(Debug, Default)]
struct Tally {
    violations: Vec<String>,
    escalations: usize,
}

fn check_instance(index: usize, w: &FatFlatScheme, k_max: u32, config: &CheckConfig) -> Result<Tally> {
    let options = config.modular();
    let mut tally = Tally::default();
    let mut flag = |what: String| tally.violations.push(format!("#{index}: {what}"));
    let records: Vec<AlphaRecord> = (1..=k_max).map(|k| alpha_symbolic(w, k, &options)).collect::<Result<_>>()?;
    let alpha: Vec<u32> = records.iter().map(|r| r.resolved()).collect::<Result<_>>()?;
    let escalations = records.iter().filter(|r| r.escalated).count();

    for k in 1..k_max as usize {
        if alpha[k] < alpha[k - 1] {
            flag(format!("alpha drops from {} to {} at k = {}", alpha[k - 1], alpha[k], k + 1));
        }
    }
    for (i, r) in records.iter().enumerate() {
        let f = r.witness.as_ref().expect("resolved record has a witness");
        if !membership(f, w, i as u32 + 1)? {
            flag(format!("witness for k = {} is not in the symbolic power", i + 1));
        }
    }
    for k1 in 1..=k_max {
        for k2 in k1..=k_max - k1 {
            let (f1, f2) = (&records[k1 as usize - 1], &records[k2 as usize - 1]);
            if f1.escalated || f2.escalated {
                continue;
            }
            let product = f1.witness.as_ref().unwrap().mul(f2.witness.as_ref().unwrap())?;
            let sum = (k1 + k2) as usize;
            if alpha[sum - 1] > product.degree() || !membership(&product, w, k1 + k2)? {
                flag(format!("product of witnesses for k = {k1}, {k2} fails at k = {sum}"));
            }
        }
    }

    let exact = alpha_symbolic(w, 1, &AlphaOptions::rational())?.resolved()?;
    if exact != alpha[0] {
        flag(format!("alpha(I) is {} mod p but {exact} over Q", alpha[0]));
    }

    let t = random_coordinate_change(w.ambient_dim(), config.seed.wrapping_add(index as u64));
    let moved = w.transformed(&t)?;
    for k in 1..=k_max {
        let a = alpha_symbolic(&moved, k, &options)?.resolved()?;
        if a != alpha[k as usize - 1] {
            flag(format!("alpha(I^({k})) changes from {} to {a} under a coordinate change", alpha[k as usize - 1]));
        }
    }
    tally.escalations = escalations;
    Ok(tally)
}

fn properties(config: &CheckConfig) -> Result<Probe> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(0x5eed));
    let instances: Vec<(FatFlatScheme, u32)> = (0..config.property_instances).map(|_| random_instance(&mut rng)).collect();
    let tallies: Vec<Tally> = instances
        .par_iter()
        .enumerate()
        .map(|(i, (w, k))| check_instance(i, w, *k, config))
        .collect::<Result<_>>()?;
    let violations: Vec<&String> = tallies.iter().flat_map(|t| &t.violations).collect();
    let escalations: usize = tallies.iter().map(|t| t.escalations).sum();
    let mut probe = Probe::new();
    probe.note(
        violations.is_empty() && escalations == 0,
        format!("{} instances, {} violations, {} escalations", instances.len(), violations.len(), escalations),
    );
    for v in violations.iter().take(5) {
        probe.note(false, v.as_str());
    }
    Ok(probe)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_and_filterable() {
        let ids: Vec<&str> = all_checks().iter().map(|c| c.id).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), ids.len());
        let config = CheckConfig::default();
        let only = vec!["noncontainment".to_string()];
        let out = run_checks(&config, Some(&only)).unwrap();
        assert_eq!(out.len(), 1);
        assert!(out[0].passed, "{}", out[0].detail);
        assert!(run_checks(&config, Some(&["nope".to_string()])).is_err());
    }

    #[test]
    fn small_property_run() {
        let config = CheckConfig { property_instances: 6, ..CheckConfig::default() };
        let p = properties(&config).unwrap();
        assert!(p.passed, "{}", p.detail);
    }

    #[test]
    fn random_instances_respect_limits() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let (w, k) = random_instance(&mut rng);
            assert!(w.ambient_dim() <= 3 && w.components().len() <= 8 && k <= 3);
            assert!(w.validate().is_ok());
        }
    }
}
