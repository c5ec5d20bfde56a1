use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::monomial::MonomialBasis;
use crate::error::{Error, Result};
use crate::field::{primitive_integer_vector, PrimeField, Rational, Scalar};
use crate::projective::LinForm;

/// Coefficients of a form, all in one field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coeffs {
    Rational(Vec<Rational>),
    Modular { p: u64, values: Vec<u64> },
}

impl Coeffs {
    fn len(&self) -> usize {
        match self {
            Coeffs::Rational(v) => v.len(),
            Coeffs::Modular { values, .. } => values.len(),
        }
    }
}

/// A homogeneous form of degree `d` on `P^n`, coefficients indexed by the
/// graded-lex monomial basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Form {
    ambient_dim: usize,
    degree: u32,
    coeffs: Coeffs,
}

impl Form {
    pub fn new(ambient_dim: usize, degree: u32, coeffs: Coeffs) -> Result<Self> {
        let expected = MonomialBasis::expected_len(ambient_dim, degree);
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: coeffs.len() });
        }
        if let Coeffs::Modular { p, .. } = &coeffs {
            PrimeField::new(*p)?;
        }
        Ok(Self { ambient_dim, degree, coeffs })
    }

    pub fn from_integers(ambient_dim: usize, degree: u32, coeffs: Vec<BigInt>) -> Result<Self> {
        Self::new(ambient_dim, degree, Coeffs::Rational(coeffs.into_iter().map(Rational::from_integer).collect()))
    }

    pub fn one(ambient_dim: usize) -> Self {
        Self { ambient_dim, degree: 0, coeffs: Coeffs::Rational(vec![Rational::one()]) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &Coeffs {
        &self.coeffs
    }

    pub fn modulus(&self) -> Option<u64> {
        match &self.coeffs {
            Coeffs::Rational(_) => None,
            Coeffs::Modular { p, .. } => Some(*p),
        }
    }

    pub fn basis(&self) -> MonomialBasis {
        MonomialBasis::new(self.ambient_dim, self.degree)
    }

    pub fn is_zero(&self) -> bool {
        match &self.coeffs {
            Coeffs::Rational(v) => v.iter().all(Zero::is_zero),
            Coeffs::Modular { values, .. } => values.iter().all(|&x| x == 0),
        }
    }

    pub fn coefficient(&self, index: usize) -> Scalar {
        match &self.coeffs {
            Coeffs::Rational(v) => Scalar::Rational(v[index].clone()),
            Coeffs::Modular { p, values } => Scalar::Mod { value: values[index], p: *p },
        }
    }

    /// Nonzero terms as (exponent, coefficient) pairs.
    pub fn terms(&self) -> Vec<(Vec<u32>, Scalar)> {
        let basis = self.basis();
        basis
            .exponents()
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), self.coefficient(i)))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    /// Primitive integer coefficients with a positive leading coefficient.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        let Coeffs::Rational(v) = &self.coeffs else {
            return None;
        };
        let mut ints = primitive_integer_vector(v);
        if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
            for x in ints.iter_mut() {
                *x = -&*x;
            }
        }
        Some(ints)
    }

    /// Rescale so the coefficients are primitive integers (rational forms),
    /// or the leading coefficient is one (modular forms).
    pub fn normalized(&self) -> Self {
        let coeffs = match &self.coeffs {
            Coeffs::Rational(_) => {
                Coeffs::Rational(self.integer_coeffs().unwrap().into_iter().map(Rational::from_integer).collect())
            }
            Coeffs::Modular { p, values } => {
                let f = PrimeField::new(*p).expect("validated prime");
                let lead = values.iter().find(|&&x| x != 0).copied().unwrap_or(1);
                let inv = f.inv(lead).unwrap_or(1);
                Coeffs::Modular { p: *p, values: values.iter().map(|&x| f.mul(x, inv)).collect() }
            }
        };
        Self { coeffs, ..self.clone() }
    }

    /// Image of a rational form modulo `p`.
    pub fn reduce_mod(&self, p: u64) -> Result<Self> {
        let f = PrimeField::new(p)?;
        match &self.coeffs {
            Coeffs::Rational(v) => {
                let values = v.iter().map(|q| f.from_rational(q)).collect::<Result<Vec<_>>>()?;
                Ok(Self { coeffs: Coeffs::Modular { p, values }, ..self.clone() })
            }
            Coeffs::Modular { p: q, .. } if *q == p => Ok(self.clone()),
            Coeffs::Modular { p: q, .. } => Err(Error::FieldMismatch(format!("mod-{q}"), format!("mod-{p}"))),
        }
    }

    /// Whether the two forms agree up to a nonzero scalar.
    pub fn is_proportional(&self, other: &Form) -> bool {
        if self.ambient_dim != other.ambient_dim || self.degree != other.degree {
            return false;
        }
        match (&self.coeffs, &other.coeffs) {
            (Coeffs::Rational(_), Coeffs::Rational(_)) => {
                !self.is_zero() && self.normalized() == other.normalized()
            }
            (Coeffs::Modular { p, .. }, Coeffs::Modular { p: q, .. }) => {
                p == q && !self.is_zero() && self.normalized() == other.normalized()
            }
            _ => false,
        }
    }

    pub fn mul(&self, other: &Form) -> Result<Form> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, found: other.ambient_dim });
        }
        let degree = self.degree + other.degree;
        let (ba, bb) = (self.basis(), other.basis());
        let out_basis = MonomialBasis::new(self.ambient_dim, degree);
        let target = |i: usize, j: usize| {
            let e: Vec<u32> = ba.exponents()[i].iter().zip(&bb.exponents()[j]).map(|(a, b)| a + b).collect();
            out_basis.index_of(&e).expect("product monomial")
        };
        let coeffs = match (&self.coeffs, &other.coeffs) {
            (Coeffs::Rational(a), Coeffs::Rational(b)) => {
                let mut out = vec![Rational::zero(); out_basis.len()];
                for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                    for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                        out[target(i, j)] += x * y;
                    }
                }
                Coeffs::Rational(out)
            }
            (Coeffs::Modular { p, values: a }, Coeffs::Modular { p: q, values: b }) if p == q => {
                let f = PrimeField::new(*p)?;
                let mut out = vec![0u64; out_basis.len()];
                for (i, &x) in a.iter().enumerate().filter(|(_, x)| **x != 0) {
                    for (j, &y) in b.iter().enumerate().filter(|(_, y)| **y != 0) {
                        let t = target(i, j);
                        out[t] = f.add(out[t], f.mul(x, y));
                    }
                }
                Coeffs::Modular { p: *p, values: out }
            }
            _ => return Err(Error::FieldMismatch("form".into(), "form of another field".into())),
        };
        Ok(Form { ambient_dim: self.ambient_dim, degree, coeffs })
    }

    pub fn pow(&self, k: u32) -> Result<Form> {
        let mut acc = match &self.coeffs {
            Coeffs::Rational(_) => Form::one(self.ambient_dim),
            Coeffs::Modular { p, .. } => Form::one(self.ambient_dim).reduce_mod(*p)?,
        };
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn from_linear(l: &LinForm) -> Form {
        Form { ambient_dim: l.ambient_dim(), degree: 1, coeffs: Coeffs::Rational(l.coeffs().to_vec()) }
    }
}

/// Expanded product `prod l_i^{a_i}` of linear forms.
pub fn form_product(factors: &[(LinForm, u32)]) -> Result<Form> {
    let first = factors.first().ok_or_else(|| Error::InvalidParameters("empty product".into()))?;
    let n = first.0.ambient_dim();
    let mut acc = Form::one(n);
    for (l, a) in factors {
        if l.ambient_dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: l.ambient_dim() });
        }
        acc = acc.mul(&Form::from_linear(l).pow(*a)?)?;
    }
    Ok(acc)
}
