//! Initial degrees of symbolic powers by a degree-by-degree search.

use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;

use super::conditions::{ConditionMatrix, Expander, ModCheck};
use super::elim::{CoeffRing, Echelon, IntegerRing};
use super::form::{Coeffs, Form};
use super::monomial::MonomialBasis;
use crate::error::{Error, Result};
use crate::field::{PrimeField, DEFAULT_PRIMES};
use crate::scheme::{symbolic_multiplicities, FatFlatScheme};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldMode {
    /// Exact elimination over the rationals.
    Rational,
    /// Elimination modulo `primes[0]`, the answer confirmed modulo `primes[1]`.
    Modular { primes: [u64; 2] },
}

impl Default for FieldMode {
    fn default() -> Self {
        FieldMode::Modular { primes: DEFAULT_PRIMES }
    }
}

impl FieldMode {
    pub fn name(&self) -> &'static str {
        match self {
            FieldMode::Rational => "rational",
            FieldMode::Modular { .. } => "modp",
        }
    }

    pub fn primes(&self) -> Option<[u64; 2]> {
        match self {
            FieldMode::Rational => None,
            FieldMode::Modular { primes } => Some(*primes),
        }
    }
}

impl fmt::Display for FieldMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AlphaOptions {
    pub mode: FieldMode,
    /// Largest degree tried; `None` means `4 k max(mu) #components`.
    pub degree_cap: Option<u32>,
}

impl AlphaOptions {
    pub fn rational() -> Self {
        Self { mode: FieldMode::Rational, degree_cap: None }
    }

    pub fn modular(primes: [u64; 2]) -> Self {
        Self { mode: FieldMode::Modular { primes }, degree_cap: None }
    }

    pub fn with_cap(mut self, cap: u32) -> Self {
        self.degree_cap = Some(cap);
        self
    }
}

pub fn default_degree_cap(scheme: &FatFlatScheme, k: u32) -> u32 {
    4 * k * scheme.max_multiplicity() * scheme.components().len() as u32
}

/// `alpha(I^(k))` together with how it was obtained. `alpha` is `None` when
/// every degree up to the cap has only the zero form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaRecord {
    pub k: u32,
    pub alpha: Option<u32>,
    pub witness: Option<Form>,
    /// The mode the final answer was computed in; `Rational` after escalation.
    pub field_mode: FieldMode,
    pub degree_cap: u32,
    pub degree_cap_hit: bool,
    pub escalated: bool,
}

impl AlphaRecord {
    pub fn resolved(&self) -> Result<u32> {
        self.alpha.ok_or(Error::Unresolved { k: self.k, cap: self.degree_cap })
    }
}

/// Rank of a condition matrix and, if it is not of full column rank, the
/// kernel vector with a one in the first free column.
pub fn rank_and_kernel<R: CoeffRing>(ring: &R, m: &ConditionMatrix<R::Elem>) -> (usize, Option<Vec<R::Elem>>) {
    let mut ech = ring.echelon(m.ncols);
    for row in m.dense_rows(ring) {
        ech.push(row);
        if ech.is_full() {
            break;
        }
    }
    (ech.rank(), ech.kernel_vector())
}

fn expanders<R: CoeffRing + ModCheck>(ring: &R, orders: &[(crate::projective::Subspace, u32)]) -> Result<Vec<Expander<R>>> {
    orders.iter().map(|(sub, kappa)| Expander::new(ring.clone(), sub, *kappa)).collect()
}

/// Eliminate the stacked degree-`d` system, stopping as soon as every
/// column has a pivot.
fn probe<R: CoeffRing>(ring: &R, exps: &mut [Expander<R>], d: u32) -> Option<Vec<R::Elem>> {
    exps.par_iter_mut().for_each(|e| e.advance_to(d));
    let blocks: Vec<ConditionMatrix<R::Elem>> = exps.par_iter().map(|e| e.block()).collect();
    let ncols = MonomialBasis::expected_len(exps[0].ambient_dim(), d);
    let mut ech = ring.echelon(ncols);
    for block in &blocks {
        for row in block.dense_rows(ring) {
            ech.push(row);
            if ech.is_full() {
                return None;
            }
        }
    }
    ech.kernel_vector()
}

/// The stacked condition matrix of `I^(k)` in degree `d`.
pub fn stacked_conditions<R: CoeffRing + ModCheck>(
    ring: &R,
    scheme: &FatFlatScheme,
    k: u32,
    d: u32,
) -> Result<ConditionMatrix<R::Elem>> {
    let orders = symbolic_multiplicities(scheme, k);
    let mut exps = expanders(ring, &orders)?;
    exps.par_iter_mut().for_each(|e| e.advance_to(d));
    let mut blocks = exps.iter().map(|e| e.block());
    let first = blocks.next().expect("schemes are non-empty");
    Ok(blocks.fold(first, ConditionMatrix::stack))
}

/// Whether `I^(k)` has no nonzero form of degree `d`.
pub fn is_full_rank<R: CoeffRing + ModCheck>(ring: &R, scheme: &FatFlatScheme, k: u32, d: u32) -> Result<bool> {
    let orders = symbolic_multiplicities(scheme, k);
    let mut exps = expanders(ring, &orders)?;
    Ok(probe(ring, &mut exps, d).is_none())
}

fn rational_witness(n: usize, d: u32, v: Vec<BigInt>) -> Form {
    Form::from_integers(n, d, v).expect("kernel vector has basis length")
}

fn modular_witness(n: usize, d: u32, p: u64, v: Vec<u64>) -> Form {
    Form::new(n, d, Coeffs::Modular { p, values: v }).expect("kernel vector has basis length")
}

fn rational_search(
    scheme: &FatFlatScheme,
    orders: &[(crate::projective::Subspace, u32)],
    from: u32,
    cap: u32,
) -> Result<Option<(u32, Form)>> {
    let mut exps = expanders(&IntegerRing, orders)?;
    for d in from..=cap {
        if let Some(v) = probe(&IntegerRing, &mut exps, d) {
            return Ok(Some((d, rational_witness(scheme.ambient_dim(), d, v))));
        }
    }
    Ok(None)
}

/// `alpha(I^(k))`: the least degree with a nonzero form vanishing to order
/// `k mu_i` along every component.
///
/// In modular mode a degree where the system has full rank modulo the first
/// prime has full rank over the rationals too, so only the candidate degree
/// needs confirmation. The second prime re-checks it; on disagreement, or if
/// either prime divides a coordinate-change determinant, the search continues
/// over the rationals from that degree.
pub fn alpha_symbolic(scheme: &FatFlatScheme, k: u32, options: &AlphaOptions) -> Result<AlphaRecord> {
    if k == 0 {
        return Err(Error::InvalidParameters("k must be at least 1".into()));
    }
    let orders = symbolic_multiplicities(scheme, k);
    let start = orders.iter().map(|(_, m)| *m).max().unwrap_or(0);
    let cap = options.degree_cap.unwrap_or_else(|| default_degree_cap(scheme, k));
    if cap == 0 {
        return Err(Error::InvalidParameters("degree cap must be at least 1".into()));
    }
    let n = scheme.ambient_dim();
    let record = |alpha: Option<(u32, Form)>, field_mode, escalated| {
        let degree_cap_hit = alpha.is_none();
        let (alpha, witness) = alpha.map(|(d, f)| (Some(d), Some(f))).unwrap_or((None, None));
        AlphaRecord { k, alpha, witness, field_mode, degree_cap: cap, degree_cap_hit, escalated }
    };
    let primes = match options.mode {
        FieldMode::Rational => {
            return Ok(record(rational_search(scheme, &orders, start, cap)?, FieldMode::Rational, false));
        }
        FieldMode::Modular { primes } => primes,
    };
    let f1 = PrimeField::new(primes[0])?;
    let f2 = PrimeField::new(primes[1])?;
    let mut exps = match expanders(&f1, &orders) {
        Ok(e) => e,
        Err(Error::BadPrime(_)) => {
            return Ok(record(rational_search(scheme, &orders, start, cap)?, FieldMode::Rational, true));
        }
        Err(e) => return Err(e),
    };
    for d in start..=cap {
        let Some(v) = probe(&f1, &mut exps, d) else {
            continue;
        };
        let confirmed = match expanders(&f2, &orders) {
            Ok(mut e2) => probe(&f2, &mut e2, d).is_some(),
            Err(Error::BadPrime(_)) => false,
            Err(e) => return Err(e),
        };
        if confirmed {
            return Ok(record(Some((d, modular_witness(n, d, primes[0], v))), options.mode, false));
        }
        return Ok(record(rational_search(scheme, &orders, d, cap)?, FieldMode::Rational, true));
    }
    Ok(record(None, options.mode, false))
}

/// Whether `f` lies in `I^(k)`: every condition row at orders `k mu_i`
/// annihilates it. Modular forms are tested modulo their own prime.
pub fn membership(f: &Form, scheme: &FatFlatScheme, k: u32) -> Result<bool> {
    if f.ambient_dim() != scheme.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: scheme.ambient_dim(), found: f.ambient_dim() });
    }
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let orders = symbolic_multiplicities(scheme, k);
    match f.coeffs() {
        Coeffs::Rational(_) => {
            let ints = f.integer_coeffs().expect("rational form");
            membership_in(&IntegerRing, &orders, f.degree(), &ints)
        }
        Coeffs::Modular { p, values } => membership_in(&PrimeField::new(*p)?, &orders, f.degree(), values),
    }
}

fn membership_in<R: CoeffRing + ModCheck>(
    ring: &R,
    orders: &[(crate::projective::Subspace, u32)],
    d: u32,
    coeffs: &[R::Elem],
) -> Result<bool> {
    let exps = expanders(ring, orders)?;
    Ok(exps.into_par_iter().all(|mut e| {
        e.advance_to(d);
        e.annihilates(coeffs)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::form::form_product;
    use crate::projective::{random_general_hyperplanes, LinForm};
    use crate::scheme::{star_configuration, FatPointsP2};

    fn star(n: usize, e: usize, s: usize, seed: u64) -> crate::scheme::StarData {
        star_configuration(n, e, s, random_general_hyperplanes(n, s, seed).unwrap()).unwrap()
    }

    /// The least degree of a monomial `x^a` with `a_i + a_j >= k` for all
    /// `i < j`: four general planes of `P^3` are the coordinate planes after a
    /// change of coordinates, and the ideal of their six lines is monomial.
    fn tetrahedron_oracle(k: u32) -> u32 {
        let mut best = u32::MAX;
        for a in 0..=k {
            for b in 0..=k {
                for c in 0..=k {
                    for d in 0..=k {
                        let v = [a, b, c, d];
                        let ok = (0..4).all(|i| (i + 1..4).all(|j| v[i] + v[j] >= k));
                        if ok {
                            best = best.min(a + b + c + d);
                        }
                    }
                }
            }
        }
        best
    }

    #[test]
    fn six_lines_in_p3() {
        let w = star(3, 2, 4, 1).scheme();
        let expected: Vec<u32> = (1..=4).map(tetrahedron_oracle).collect();
        assert_eq!(expected, vec![3, 4, 7, 8]);
        for k in 1..=3 {
            let r = alpha_symbolic(&w, k, &AlphaOptions::default()).unwrap();
            assert_eq!(r.alpha, Some(expected[k as usize - 1]));
            assert!(!r.escalated);
            assert!(membership(r.witness.as_ref().unwrap(), &w, k).unwrap());
        }
    }

    #[test]
    fn five_lines_in_the_plane() {
        let st = star(2, 2, 5, 1);
        let w = st.scheme();
        let r1 = alpha_symbolic(&w, 1, &AlphaOptions::rational()).unwrap();
        assert_eq!(r1.alpha, Some(4));
        let r2 = alpha_symbolic(&w, 2, &AlphaOptions::rational()).unwrap();
        assert_eq!(r2.alpha, Some(5));
        let quintic = form_product(&st.hyperplanes.iter().map(|h| (h.clone(), 1)).collect::<Vec<_>>()).unwrap();
        assert!(r2.witness.as_ref().unwrap().is_proportional(&quintic));
        assert!(membership(&quintic, &w, 2).unwrap());
        assert!(!membership(&quintic, &w, 3).unwrap());
    }

    #[test]
    fn modular_and_rational_agree_on_a_fat_point_scheme() {
        let z = FatPointsP2::from_ints(&[[0, 5, 1], [7, 0, 1], [3, 0, 1], [11, 0, 1]], &[2, 1, 1, 1]).unwrap().to_scheme();
        for k in 1..=3 {
            let a = alpha_symbolic(&z, k, &AlphaOptions::default()).unwrap();
            let b = alpha_symbolic(&z, k, &AlphaOptions::rational()).unwrap();
            assert_eq!(a.alpha, b.alpha);
        }
        assert_eq!(alpha_symbolic(&z, 3, &AlphaOptions::default()).unwrap().alpha, Some(7));
    }

    #[test]
    fn cap_is_reported() {
        let w = star(2, 2, 5, 1).scheme();
        let r = alpha_symbolic(&w, 2, &AlphaOptions::default().with_cap(4)).unwrap();
        assert_eq!(r.alpha, None);
        assert!(r.degree_cap_hit);
        assert!(matches!(r.resolved(), Err(Error::Unresolved { k: 2, cap: 4 })));
    }

    #[test]
    fn rank_and_kernel_basics() {
        let f = PrimeField::new(DEFAULT_PRIMES[0]).unwrap();
        let zero = ConditionMatrix::<u64> { ncols: 3, rows: vec![] };
        assert_eq!(rank_and_kernel(&f, &zero), (0, Some(vec![1, 0, 0])));
        let id = ConditionMatrix { ncols: 2, rows: vec![vec![(0, 1u64)], vec![(1, 1u64)]] };
        assert_eq!(rank_and_kernel(&f, &id), (2, None));
    }

    #[test]
    fn membership_rejects_wrong_dimension() {
        let w = star(2, 2, 3, 7).scheme();
        let f = form_product(&[(LinForm::coordinate(3, 0), 2)]).unwrap();
        assert!(matches!(membership(&f, &w, 1), Err(Error::DimensionMismatch { .. })));
    }
}
