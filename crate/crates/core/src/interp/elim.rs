//! Exact elimination: dense row echelon forms over `F_p` and fraction-free
//! echelon forms over the integers. Rows are inserted one at a time, each
//! reduced against the pivots already present, so a full-rank system can be
//! abandoned as soon as every column carries a pivot.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::field::{PrimeField, Rational};

/// Coefficients the condition matrices are built over.
pub trait CoeffRing: Clone + Send + Sync + Debug {
    type Elem: Clone + PartialEq + Debug + Send + Sync;
    type Echelon: Echelon<Elem = Self::Elem>;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    fn echelon(&self, ncols: usize) -> Self::Echelon;
}

pub trait Echelon: Send {
    type Elem;
    /// Reduce and insert a row; `true` if it produced a new pivot.
    fn push(&mut self, row: Vec<Self::Elem>) -> bool;
    fn rank(&self) -> usize;
    fn ncols(&self) -> usize;
    fn is_full(&self) -> bool {
        self.rank() == self.ncols()
    }
    /// Kernel vector with a one in the first non-pivot column and zeros in
    /// the remaining non-pivot columns; `None` at full column rank.
    fn kernel_vector(&self) -> Option<Vec<Self::Elem>>;
}

/// The integers, standing in for the rationals: rows are scaled to integer
/// vectors before elimination, which changes neither rank nor kernel.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IntegerRing;

impl CoeffRing for IntegerRing {
    type Elem = BigInt;
    type Echelon = IntegerEchelon;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn from_bigint(&self, v: &BigInt) -> BigInt {
        v.clone()
    }
    fn echelon(&self, ncols: usize) -> IntegerEchelon {
        IntegerEchelon::new(ncols)
    }
}

impl CoeffRing for PrimeField {
    type Elem = u64;
    type Echelon = ModpEchelon;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        PrimeField::add(self, *a, *b)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        PrimeField::mul(self, *a, *b)
    }
    fn from_bigint(&self, v: &BigInt) -> u64 {
        PrimeField::from_bigint(self, v)
    }
    fn echelon(&self, ncols: usize) -> ModpEchelon {
        ModpEchelon::new(*self, ncols)
    }
}

/// Row echelon form over `F_p`. Pivot rows are scaled to a leading one.
#[derive(Debug, Clone)]
pub struct ModpEchelon {
    field: PrimeField,
    ncols: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    pivot_row: Vec<Option<usize>>,
}

impl ModpEchelon {
    pub fn new(field: PrimeField, ncols: usize) -> Self {
        Self { field, ncols, rows: Vec::new(), pivots: Vec::new(), pivot_row: vec![None; ncols] }
    }
}

impl Echelon for ModpEchelon {
    type Elem = u64;

    fn push(&mut self, mut row: Vec<u64>) -> bool {
        debug_assert_eq!(row.len(), self.ncols);
        if self.is_full() {
            return false;
        }
        let p = self.field.modulus();
        for (prow, &c) in self.rows.iter().zip(&self.pivots) {
            let f = row[c];
            if f == 0 {
                continue;
            }
            let negf = p - f;
            for (x, &y) in row[c..].iter_mut().zip(&prow[c..]) {
                if y != 0 {
                    *x = (*x + negf * y) % p;
                }
            }
        }
        let Some(c) = row.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(row[c]).expect("nonzero");
        for x in row[c..].iter_mut() {
            *x = self.field.mul(*x, inv);
        }
        self.pivot_row[c] = Some(self.rows.len());
        self.rows.push(row);
        self.pivots.push(c);
        true
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn ncols(&self) -> usize {
        self.ncols
    }

    fn kernel_vector(&self) -> Option<Vec<u64>> {
        let free = (0..self.ncols).find(|&c| self.pivot_row[c].is_none())?;
        let mut x = vec![0u64; self.ncols];
        x[free] = 1;
        // Row i is zero on the pivot columns of rows inserted before it, so
        // solving in reverse insertion order only reads solved entries.
        for (row, &c) in self.rows.iter().zip(&self.pivots).rev() {
            let mut acc = 0u64;
            for j in c + 1..self.ncols {
                if row[j] != 0 && x[j] != 0 {
                    acc = self.field.add(acc, self.field.mul(row[j], x[j]));
                }
            }
            x[c] = self.field.neg(acc);
        }
        Some(x)
    }
}

/// Fraction-free echelon form over the integers. Each pivot row is kept
/// primitive (content one, positive pivot).
#[derive(Debug, Clone)]
pub struct IntegerEchelon {
    ncols: usize,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    pivot_row: Vec<Option<usize>>,
}

impl IntegerEchelon {
    pub fn new(ncols: usize) -> Self {
        Self { ncols, rows: Vec::new(), pivots: Vec::new(), pivot_row: vec![None; ncols] }
    }
}

fn make_primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |g, x| if x.is_zero() { g } else { g.gcd(x) });
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            if !x.is_zero() {
                *x /= &g;
            }
        }
    }
}

impl Echelon for IntegerEchelon {
    type Elem = BigInt;

    fn push(&mut self, mut row: Vec<BigInt>) -> bool {
        debug_assert_eq!(row.len(), self.ncols);
        if self.is_full() || row.iter().all(Zero::is_zero) {
            return false;
        }
        make_primitive(&mut row);
        for (prow, &c) in self.rows.iter().zip(&self.pivots) {
            if row[c].is_zero() {
                continue;
            }
            // row <- (P[c]/g) row - (row[c]/g) P
            let g = prow[c].gcd(&row[c]);
            let a = &prow[c] / &g;
            let b = &row[c] / &g;
            for (x, y) in row.iter_mut().zip(prow) {
                if !a.is_one() {
                    *x *= &a;
                }
                if !y.is_zero() {
                    *x -= &b * y;
                }
            }
            make_primitive(&mut row);
        }
        let Some(c) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        if row[c].is_negative() {
            for x in row.iter_mut() {
                *x = -&*x;
            }
        }
        self.pivot_row[c] = Some(self.rows.len());
        self.rows.push(row);
        self.pivots.push(c);
        true
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn ncols(&self) -> usize {
        self.ncols
    }

    fn kernel_vector(&self) -> Option<Vec<BigInt>> {
        let free = (0..self.ncols).find(|&c| self.pivot_row[c].is_none())?;
        let mut x = vec![Rational::zero(); self.ncols];
        x[free] = Rational::one();
        for (row, &c) in self.rows.iter().zip(&self.pivots).rev() {
            let mut acc = Rational::zero();
            for j in c + 1..self.ncols {
                if !row[j].is_zero() && !x[j].is_zero() {
                    acc += &x[j] * Rational::from_integer(row[j].clone());
                }
            }
            x[c] = -acc / Rational::from_integer(row[c].clone());
        }
        Some(crate::field::primitive_integer_vector(&x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DEFAULT_PRIMES;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn identity_is_full_rank() {
        let mut e = IntegerEchelon::new(3);
        for i in 0..3 {
            let mut r = vec![0; 3];
            r[i] = 1;
            assert!(e.push(ints(&r)));
        }
        assert!(e.is_full());
        assert!(e.kernel_vector().is_none());
    }

    #[test]
    fn zero_matrix_kernel_is_first_unit_vector() {
        let f = PrimeField::new(DEFAULT_PRIMES[0]).unwrap();
        let mut e = ModpEchelon::new(f, 4);
        assert!(!e.push(vec![0; 4]));
        assert_eq!(e.rank(), 0);
        assert_eq!(e.kernel_vector(), Some(vec![1, 0, 0, 0]));
        assert_eq!(IntegerEchelon::new(4).kernel_vector(), Some(ints(&[1, 0, 0, 0])));
    }

    #[test]
    fn integer_and_modular_agree_on_a_small_system() {
        let rows = [[2, 4, -2, 6], [1, 3, 0, 1], [3, 7, -2, 7]];
        let mut ze = IntegerEchelon::new(4);
        let f = PrimeField::new(DEFAULT_PRIMES[1]).unwrap();
        let mut me = ModpEchelon::new(f, 4);
        for r in rows {
            ze.push(ints(&r));
            me.push(r.iter().map(|&x| f.from_i64(x)).collect());
        }
        assert_eq!(ze.rank(), 2);
        assert_eq!(me.rank(), 2);
        let k = ze.kernel_vector().unwrap();
        for r in rows {
            let dot: BigInt = r.iter().zip(&k).map(|(&a, b)| BigInt::from(a) * b).sum();
            assert!(dot.is_zero());
        }
        let km = me.kernel_vector().unwrap();
        for r in rows {
            let dot = r.iter().zip(&km).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(f.from_i64(a), b)));
            assert_eq!(dot, 0);
        }
        // Same free column, same normalized vector up to the modular image.
        let lifted: Vec<u64> = k.iter().map(|x| f.from_bigint(x)).collect();
        let scale = f.inv(lifted[2]).unwrap();
        let lifted: Vec<u64> = lifted.iter().map(|&x| f.mul(x, scale)).collect();
        assert_eq!(lifted, km);
    }
}
