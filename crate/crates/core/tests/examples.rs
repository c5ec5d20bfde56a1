//! End-to-end examples through the public API: builders, the engine, bounds
//! and the classifier on named configurations.

use fatflat::bounds::{
    beta_sequence, bound_report, check_linear_alpha, monotone_lower, noncontainment_witness, single_component_bound,
    upper_bounds, upper_from_table, LowerBound, LowerCertificate, Verdict,
};
use fatflat::classify::{classify, exact_value, Classification, ValueClaim};
use fatflat::field::{int, rational, DEFAULT_PRIMES};
use fatflat::interp::{alpha_symbolic, form_product, membership, AlphaOptions};
use fatflat::projective::random_general_hyperplanes;
use fatflat::scheme::{
    build_integer_target, build_plane_family, build_quasi_star, build_rational_target, star_configuration,
    ExtraSpec, FatFlatScheme, PlaneFamily,
};

fn modp() -> AlphaOptions {
    AlphaOptions::modular(DEFAULT_PRIMES)
}

fn alpha(w: &FatFlatScheme, k: u32) -> u32 {
    alpha_symbolic(w, k, &modp()).unwrap().resolved().unwrap()
}

fn star(n: usize, e: usize, s: usize, m: u32) -> FatFlatScheme {
    star_configuration(n, e, s, random_general_hyperplanes(n, s, 1).unwrap()).unwrap().fat(m)
}

#[test]
fn integer_targets() {
    let extra = ExtraSpec { hyperplane: 0, codim: 3, multiplicity: 1 };
    let w = build_integer_target(3, 4, 4, 1, 2, &[extra], 1).unwrap();
    assert_eq!(w.max_multiplicity(), 2);
    assert_eq!(w.construction().unwrap().predicted_waldschmidt, Some(int(4)));

    let single = build_integer_target(3, 6, 3, 2, 3, &[], 1).unwrap();
    assert_eq!(single.components().len(), 1);
    assert_eq!(single.components()[0].multiplicity, 6);
    assert_eq!((alpha(&single, 1), alpha(&single, 2)), (6, 12));

    let lines: Vec<ExtraSpec> =
        (0..5).map(|h| ExtraSpec { hyperplane: h, codim: 2, multiplicity: 1 }).collect();
    let w2 = build_integer_target(2, 5, 5, 1, 2, &lines, 1).unwrap();
    assert_eq!(w2.components().len(), 15);
    assert_eq!(w2.construction().unwrap().predicted_waldschmidt, Some(int(5)));
    assert!(check_linear_alpha(&w2, 5, 2, &modp()).unwrap().holds);
}

#[test]
fn quasi_star_shapes() {
    let w = build_quasi_star(5, 1).unwrap();
    let doubles = w.components().iter().filter(|c| c.multiplicity == 2).count();
    assert_eq!((doubles, w.components().len() - doubles), (10, 5));
    let w3 = build_quasi_star(3, 1).unwrap();
    let report = bound_report(&w3, 1, &modp(), None).unwrap();
    assert_eq!(report.verdict, Verdict::Exact(int(3)));
    assert_eq!(build_quasi_star(2, 1).unwrap().components().len(), 3);
}

#[test]
fn rational_targets() {
    let w = build_rational_target(2, 5, None, 1).unwrap();
    assert_eq!(w.components().len(), 10);
    assert_eq!(w.max_multiplicity(), 1);

    let w4 = build_rational_target(4, 10, None, 1).unwrap();
    assert_eq!((w4.ambient_dim(), w4.components().len(), w4.max_multiplicity()), (4, 5, 2));
    assert_eq!(w4.construction().unwrap().predicted_waldschmidt, Some(rational(5, 2)));

    let lines = build_rational_target(1, 3, None, 1).unwrap();
    assert_eq!((lines.ambient_dim(), lines.components().len()), (2, 3));
    let hyperplanes: Vec<_> = lines.components().iter().map(|c| c.subspace.forms()[0].clone()).collect();
    for k in 1..=3 {
        assert_eq!(alpha(&lines, k), 3 * k);
        let f = form_product(&hyperplanes.iter().map(|h| (h.clone(), k)).collect::<Vec<_>>()).unwrap();
        assert!(membership(&f, &lines, k).unwrap());
    }
    assert!(build_rational_target(3, 2, None, 1).is_err());
}

#[test]
fn upper_bounds_and_betas() {
    let s25 = star(2, 2, 5, 1);
    let table = upper_bounds(&s25, 4, &modp()).unwrap();
    let alphas: Vec<u32> = table.iter().map(|r| r.alpha.unwrap()).collect();
    assert_eq!((alphas[0], alphas[1], alphas[3]), (4, 5, 10));
    let u = upper_from_table(&table).unwrap();
    assert_eq!((u.value.clone(), u.k), (rational(5, 2), 2));
    let beta = beta_sequence(&table).unwrap();
    assert_eq!(beta, alphas.windows(2).map(|w| w[1] as i64 - w[0] as i64).collect::<Vec<_>>());

    let s34 = star(3, 2, 4, 1);
    let t34 = upper_bounds(&s34, 4, &modp()).unwrap();
    assert_eq!(beta_sequence(&t34).unwrap(), vec![1, 3, 1]);
    assert_eq!(upper_from_table(&t34[..3]).unwrap().value, int(2));

    let a = build_plane_family(&PlaneFamily::Collinear { doubles: 2, simples: 1 }, 1).unwrap().to_scheme();
    assert_eq!(beta_sequence(&upper_bounds(&a, 4, &modp()).unwrap()).unwrap(), vec![2, 2, 2]);

    let c = build_plane_family(&PlaneFamily::DoubleOffTriple, 1).unwrap().to_scheme();
    let uc = upper_from_table(&upper_bounds(&c, 3, &modp()).unwrap()).unwrap();
    assert_eq!((uc.value, uc.k), (rational(7, 3), 3));
}

#[test]
fn linear_alpha_checks() {
    let extra = ExtraSpec { hyperplane: 0, codim: 3, multiplicity: 1 };
    let w = build_integer_target(3, 4, 4, 1, 2, &[extra], 1).unwrap();
    assert!(check_linear_alpha(&w, 4, 3, &modp()).unwrap().holds);
    let s25 = check_linear_alpha(&star(2, 2, 5, 1), 4, 2, &modp()).unwrap();
    assert_eq!((s25.holds, s25.failing_k), (false, Some(2)));
    let s34 = check_linear_alpha(&star(3, 2, 4, 1), 2, 4, &modp()).unwrap();
    assert_eq!((s34.holds, s34.failing_k), (false, Some(1)));
}

#[test]
fn monotone_transfers_and_noncontainment() {
    let zp = build_plane_family(&PlaneFamily::TwoDoublesAndSimple, 1).unwrap();
    let bigger = {
        let mut pts = zp.points().to_vec();
        pts.push(fatflat::projective::Point::from_ints(&[7, 11, 1]).unwrap());
        let mut mults = zp.multiplicities().to_vec();
        mults.push(1);
        fatflat::scheme::FatPointsP2::new(pts, mults).unwrap()
    };
    let inner = LowerBound { value: rational(5, 2), certificate: LowerCertificate::SingleComponent { index: 0, multiplicity: 2 } };
    let moved = monotone_lower(&bigger.to_scheme(), &zp.to_scheme(), inner.clone()).unwrap();
    assert_eq!(moved.value, rational(5, 2));
    assert_eq!(monotone_lower(&zp.to_scheme(), &zp.to_scheme(), inner.clone()).unwrap(), inner);
    assert!(monotone_lower(&zp.to_scheme(), &bigger.to_scheme(), inner).is_err());
    assert_eq!(single_component_bound(&bigger.to_scheme()).value, int(2));

    let s25 = star(2, 2, 5, 1);
    assert!(noncontainment_witness(&s25, 2, 2, &modp(), None).unwrap().certified);
    assert!(!noncontainment_witness(&s25, 1, 1, &modp(), None).unwrap().certified);
    assert!(!noncontainment_witness(&star(3, 2, 4, 1), 2, 1, &modp(), None).unwrap().certified);
}

#[test]
fn classifier_examples() {
    let z = fatflat::scheme::FatPointsP2::from_ints(&[[0, 0, 1], [1, 0, 1], [2, 0, 1], [3, 0, 1]], &[2, 2, 1, 1]).unwrap();
    let c = classify(&z).unwrap();
    assert_eq!(c, Classification::CaseA);
    assert_eq!(exact_value(&c, &z).unwrap(), ValueClaim::Exact(int(2)));

    let b = build_plane_family(&PlaneFamily::TwoLinesThroughDouble { r: 1, s: 1 }, 1).unwrap();
    let cb = classify(&b).unwrap();
    assert!(matches!(cb, Classification::CaseB { .. }));
    assert_eq!(exact_value(&cb, &b).unwrap(), ValueClaim::Exact(int(2)));

    let w = build_plane_family(&PlaneFamily::DoubleWithTwoPairs, 1).unwrap();
    let cw = classify(&w).unwrap();
    assert_eq!(exact_value(&cw, &w).unwrap(), ValueClaim::AtLeast(rational(5, 2)));
}
