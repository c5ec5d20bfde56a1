//! Linear conditions for a degree-`d` form to lie in `I(L)^κ`.
//!
//! In coordinates `w = (y, z) = A x` adapted to `L` (the `y` are its defining
//! forms), a form lies in `I(L)^κ` exactly when every monomial of `y`-degree
//! below `κ` has coefficient zero after substituting `x = A^{-1} w`. Each such
//! monomial gives one linear functional on the coefficients in `x`.

use num_bigint::BigInt;

use super::elim::CoeffRing;
use super::monomial::{exponents, MonomialBasis};
use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::field::{primitive_integer_vector, PrimeField, Rational};
use crate::linalg;
use crate::projective::{complete_basis, Subspace};

/// Condition rows for one or more components, columns indexed by the
/// degree-`d` monomial basis. Rows are stored sparsely.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionMatrix<E> {
    pub ncols: usize,
    pub rows: Vec<Vec<(u32, E)>>,
}

impl<E: Clone> ConditionMatrix<E> {
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn dense_rows<R: CoeffRing<Elem = E>>(&self, ring: &R) -> impl Iterator<Item = Vec<E>> + '_ {
        let zero = ring.zero();
        self.rows.iter().map(move |r| {
            let mut d = vec![zero.clone(); self.ncols];
            for (c, v) in r {
                d[*c as usize] = v.clone();
            }
            d
        })
    }

    pub fn stack(mut self, other: ConditionMatrix<E>) -> Self {
        assert_eq!(self.ncols, other.ncols);
        self.rows.extend(other.rows);
        self
    }
}

/// `sum_{t < κ} C(t+e-1, e-1) C(d-t+N-e, N-e)`: the number of adapted
/// monomials of degree `d` with transverse degree below `κ`.
pub fn expected_row_count(n: usize, e: usize, kappa: u32, d: u32) -> u64 {
    (0..kappa.min(d + 1))
        .map(|t| {
            binomial((t as usize + e - 1) as u64, (e - 1) as u64)
                * binomial((d - t) as u64 + (n - e) as u64, (n - e) as u64)
        })
        .sum()
}

/// The substitution `x = B w` as an integer matrix: `B` is the inverse of the
/// adapted coordinate change with each column scaled to a primitive integer
/// vector. Rescaling an adapted variable does not change which monomials
/// must vanish.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptedSubstitution {
    pub codim: usize,
    pub matrix: Vec<Vec<BigInt>>,
    pub determinant: BigInt,
}

impl AdaptedSubstitution {
    pub fn new(sub: &Subspace) -> Self {
        let inv = complete_basis(sub).inverse();
        let n1 = inv.len();
        let cols: Vec<Vec<BigInt>> = (0..n1)
            .map(|j| primitive_integer_vector(&inv.iter().map(|row| row[j].clone()).collect::<Vec<_>>()))
            .collect();
        let matrix: Vec<Vec<BigInt>> = (0..n1).map(|i| (0..n1).map(|j| cols[j][i].clone()).collect()).collect();
        let rat: Vec<Vec<Rational>> = matrix
            .iter()
            .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
            .collect();
        let determinant = linalg::determinant(&rat).to_integer();
        Self { codim: sub.codim(), matrix, determinant }
    }

    /// Whether the substitution stays invertible modulo `p`.
    pub fn usable_mod(&self, field: &PrimeField) -> bool {
        field.from_bigint(&self.determinant) != 0
    }
}

/// Expands the degree-`j` monomials in adapted coordinates one degree at a
/// time, dropping every adapted monomial of transverse degree `>= κ`.
#[derive(Debug, Clone)]
pub struct Expander<R: CoeffRing> {
    ring: R,
    n: usize,
    codim: usize,
    kappa: u32,
    subst: Vec<Vec<R::Elem>>,
    level: u32,
    basis: MonomialBasis,
    kept: MonomialBasis,
    polys: Vec<Vec<R::Elem>>,
}

fn truncated(n: usize, codim: usize, kappa: u32, j: u32) -> MonomialBasis {
    let exps = exponents(n + 1, j)
        .into_iter()
        .filter(|e| e[..codim].iter().sum::<u32>() < kappa)
        .collect();
    MonomialBasis::from_exponents(n, j, exps)
}

impl<R: CoeffRing> Expander<R> {
    pub fn new(ring: R, sub: &Subspace, kappa: u32) -> Result<Self>
    where
        R: ModCheck,
    {
        let subst = AdaptedSubstitution::new(sub);
        ring.check(&subst)?;
        let n = sub.ambient_dim();
        let entries = subst.matrix.iter().map(|r| r.iter().map(|x| ring.from_bigint(x)).collect()).collect();
        let one = ring.one();
        Ok(Self {
            n,
            codim: subst.codim,
            kappa,
            subst: entries,
            level: 0,
            basis: MonomialBasis::new(n, 0),
            kept: truncated(n, subst.codim, kappa, 0),
            polys: vec![vec![one]],
            ring,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn advance(&mut self) {
        let j = self.level + 1;
        let basis = MonomialBasis::new(self.n, j);
        let kept = truncated(self.n, self.codim, self.kappa, j);
        // shift[c][v]: index in `kept` of (old kept monomial c) * w_v.
        let shift: Vec<Vec<Option<usize>>> = self
            .kept
            .exponents()
            .iter()
            .map(|c| {
                (0..=self.n)
                    .map(|v| {
                        let mut t = c.clone();
                        t[v] += 1;
                        kept.index_of(&t)
                    })
                    .collect()
            })
            .collect();
        let zero = self.ring.zero();
        let mut polys = Vec::with_capacity(basis.len());
        let mut parent_exp = vec![0u32; self.n + 1];
        for a in basis.exponents() {
            let i = a.iter().position(|&x| x > 0).expect("positive degree");
            parent_exp.copy_from_slice(a);
            parent_exp[i] -= 1;
            let parent = &self.polys[self.basis.index_of(&parent_exp).expect("parent monomial")];
            let lin = &self.subst[i];
            let mut out = vec![zero.clone(); kept.len()];
            for (c, coeff) in parent.iter().enumerate() {
                if self.ring.is_zero(coeff) {
                    continue;
                }
                for (v, b) in lin.iter().enumerate() {
                    if self.ring.is_zero(b) {
                        continue;
                    }
                    if let Some(t) = shift[c][v] {
                        out[t] = self.ring.add(&out[t], &self.ring.mul(coeff, b));
                    }
                }
            }
            polys.push(out);
        }
        self.level = j;
        self.basis = basis;
        self.kept = kept;
        self.polys = polys;
    }

    pub fn advance_to(&mut self, d: u32) {
        assert!(d >= self.level, "expanders only move forward");
        while self.level < d {
            self.advance();
        }
    }

    /// The condition rows at the current degree.
    pub fn block(&self) -> ConditionMatrix<R::Elem> {
        let mut rows: Vec<Vec<(u32, R::Elem)>> = vec![Vec::new(); self.kept.len()];
        for (col, poly) in self.polys.iter().enumerate() {
            for (r, v) in poly.iter().enumerate() {
                if !self.ring.is_zero(v) {
                    rows[r].push((col as u32, v.clone()));
                }
            }
        }
        ConditionMatrix { ncols: self.basis.len(), rows }
    }

    /// Evaluate every condition at the current degree on a coefficient vector.
    pub fn annihilates(&self, coeffs: &[R::Elem]) -> bool {
        let zero = self.ring.zero();
        (0..self.kept.len()).all(|r| {
            let acc = self
                .polys
                .iter()
                .zip(coeffs)
                .fold(zero.clone(), |acc, (poly, c)| self.ring.add(&acc, &self.ring.mul(&poly[r], c)));
            self.ring.is_zero(&acc)
        })
    }
}

/// Rejects primes for which the adapted substitution degenerates.
pub trait ModCheck {
    fn check(&self, subst: &AdaptedSubstitution) -> Result<()>;
}

impl ModCheck for super::elim::IntegerRing {
    fn check(&self, _: &AdaptedSubstitution) -> Result<()> {
        Ok(())
    }
}

impl ModCheck for PrimeField {
    fn check(&self, subst: &AdaptedSubstitution) -> Result<()> {
        if subst.usable_mod(self) {
            Ok(())
        } else {
            Err(Error::BadPrime(self.modulus()))
        }
    }
}

/// Condition rows for `I(sub)^κ` in degree `d`.
pub fn condition_rows<R: CoeffRing + ModCheck>(
    ring: &R,
    sub: &Subspace,
    kappa: u32,
    d: u32,
) -> Result<ConditionMatrix<R::Elem>> {
    if kappa == 0 {
        return Err(Error::InvalidParameters("vanishing order must be positive".into()));
    }
    let mut ex = Expander::new(ring.clone(), sub, kappa)?;
    ex.advance_to(d);
    Ok(ex.block())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::interp::elim::IntegerRing;
    use crate::projective::{random_general_hyperplanes, LinForm, Point};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fat_point_row_counts() {
        let p = Point::from_ints(&[1, 2, 3]).unwrap().to_subspace();
        for d in 2..6 {
            assert_eq!(condition_rows(&IntegerRing, &p, 2, d).unwrap().nrows(), 3);
        }
        for m in 1..6 {
            let rows = condition_rows(&IntegerRing, &p, m, 8).unwrap().nrows() as u64;
            assert_eq!(rows, binomial(m as u64 + 1, 2));
        }
        let line = Subspace::new(3, vec![LinForm::coordinate(3, 0), LinForm::coordinate(3, 1)]).unwrap();
        assert_eq!(condition_rows(&IntegerRing, &line, 1, 2).unwrap().nrows(), 3);
    }

    #[test]
    fn row_count_formula_on_random_tuples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = rng.gen_range(1..=4usize);
            let e = rng.gen_range(1..=n);
            let kappa = rng.gen_range(1..=5u32);
            let d = rng.gen_range(0..=7u32);
            let h = random_general_hyperplanes(n, e, rng.gen()).unwrap();
            let sub = Subspace::new(n, h).unwrap();
            let block = condition_rows(&IntegerRing, &sub, kappa, d).unwrap();
            assert_eq!(block.nrows() as u64, expected_row_count(n, e, kappa, d), "n={n} e={e} κ={kappa} d={d}");
            assert_eq!(block.ncols, MonomialBasis::expected_len(n, d));
        }
    }

    #[test]
    fn order_one_conditions_are_evaluation() {
        // For a point and κ = 1 the single condition is proportional to evaluation.
        let p = Point::from_ints(&[2, -1, 3]).unwrap();
        let sub = p.to_subspace();
        let d = 3;
        let block = condition_rows(&IntegerRing, &sub, 1, d).unwrap();
        assert_eq!(block.nrows(), 1);
        let basis = MonomialBasis::new(2, d);
        let x: Vec<BigInt> = [2, -1, 3].iter().map(|&v| BigInt::from(v)).collect();
        let mut row = vec![BigInt::zero(); basis.len()];
        for (c, v) in &block.rows[0] {
            row[*c as usize] = v.clone();
        }
        // row_j = λ * x^(a_j) for a common λ.
        let values: Vec<BigInt> = basis
            .exponents()
            .iter()
            .map(|e| e.iter().zip(&x).fold(BigInt::from(1), |t, (&k, xi)| t * num_traits::pow(xi.clone(), k as usize)))
            .collect();
        let lambda = Rational::new(row[0].clone(), values[0].clone());
        for (r, v) in row.iter().zip(&values) {
            assert_eq!(Rational::from_integer(r.clone()), &lambda * Rational::from_integer(v.clone()));
        }
    }
}
