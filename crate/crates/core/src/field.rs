//! Exact scalars: arbitrary-precision rationals and residues modulo a
//! word-sized prime in `[2^30, 2^31)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Two fixed primes used when the caller does not supply any.
pub const DEFAULT_PRIMES: [u64; 2] = [2_147_483_647, 2_147_483_629];

const PRIME_LOW: u64 = 1 << 30;
const PRIME_HIGH: u64 = 1 << 31;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `a/b` as a string, or just `a` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Arithmetic modulo a prime `p < 2^31`; products fit in a `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !(PRIME_LOW..PRIME_HIGH).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidParameters(format!(
                "{p} is not a prime in [2^30, 2^31)"
            )));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Fermat inverse; `None` for zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        if a % self.p == 0 {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }

    pub fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    pub fn from_bigint(&self, v: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        v.mod_floor(&p).to_u64().expect("residue fits in u64")
    }

    pub fn from_rational(&self, q: &Rational) -> Result<u64> {
        let den = self.from_bigint(q.denom());
        let inv = self.inv(den).ok_or(Error::BadPrime(self.p))?;
        Ok(self.mul(self.from_bigint(q.numer()), inv))
    }

    /// Symmetric lift to `(-p/2, p/2]`.
    pub fn lift(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

/// Deterministic Miller-Rabin, exact for all `n < 3.4e14`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % small == 0 {
            return n == small;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Two distinct pseudo-random primes in `[2^30, 2^31)`, reproducible from `seed`.
pub fn random_primes(seed: u64) -> [u64; 2] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0f_9e1d);
    let mut draw = |avoid: u64| loop {
        let c = rng.gen_range(PRIME_LOW..PRIME_HIGH) | 1;
        if c != avoid && is_prime(c) {
            return c;
        }
    };
    let a = draw(0);
    let b = draw(a);
    [a, b]
}

/// A single exact scalar. Arithmetic between a rational and a residue, or
/// between residues of different primes, is an error rather than a coercion.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(Rational),
    Mod { value: u64, p: u64 },
}

impl Scalar {
    pub fn from_i64(v: i64) -> Self {
        Scalar::Rational(int(v))
    }

    pub fn modular(field: &PrimeField, value: u64) -> Self {
        Scalar::Mod {
            value: value % field.modulus(),
            p: field.modulus(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    fn kind(&self) -> String {
        match self {
            Scalar::Rational(_) => "rational".into(),
            Scalar::Mod { p, .. } => format!("mod-{p}"),
        }
    }

    fn binary(
        &self,
        other: &Scalar,
        q: impl Fn(&Rational, &Rational) -> Rational,
        m: impl Fn(&PrimeField, u64, u64) -> u64,
    ) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(q(a, b))),
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, p: p2 }) if p == p2 => {
                let f = PrimeField { p: *p };
                Ok(Scalar::Mod { value: m(&f, *a, *b), p: *p })
            }
            _ => Err(Error::FieldMismatch(self.kind(), other.kind())),
        }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        self.binary(other, |a, b| a + b, |f, a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar> {
        self.binary(other, |a, b| a - b, |f, a, b| f.sub(a, b))
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        self.binary(other, |a, b| a * b, |f, a, b| f.mul(a, b))
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(q) if !q.is_zero() => Some(Scalar::Rational(q.recip())),
            Scalar::Mod { value, p } => {
                PrimeField { p: *p }.inv(*value).map(|v| Scalar::Mod { value: v, p: *p })
            }
            _ => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => f.write_str(&format_rational(q)),
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

/// Scale a rational vector to a primitive integer vector with the same
/// projective class (positive first nonzero entry not enforced).
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for q in v {
        lcm = lcm.lcm(q.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|q| (q * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

pub fn abs_max_bits(v: &[BigInt]) -> u64 {
    v.iter().map(|x| x.abs().bits()).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_primes_are_in_range() {
        for p in DEFAULT_PRIMES {
            assert!(PrimeField::new(p).is_ok(), "{p}");
        }
        assert!(PrimeField::new(2_147_483_648).is_err());
        assert!(PrimeField::new(1_000_000_007).is_err()); // below 2^30
    }

    #[test]
    fn random_primes_are_reproducible_and_distinct() {
        let a = random_primes(9);
        assert_eq!(a, random_primes(9));
        assert_ne!(a[0], a[1]);
        for p in a {
            assert!(PrimeField::new(p).is_ok());
        }
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("10/4").unwrap(), rational(5, 2));
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert!(parse_rational("1/0").is_err());
        assert_eq!(format_rational(&rational(-6, 4)), "-3/2");
        assert_eq!(format_rational(&int(7)), "7");
    }

    #[test]
    fn mixing_fields_is_an_error() {
        let f = PrimeField::new(DEFAULT_PRIMES[0]).unwrap();
        let a = Scalar::modular(&f, 3);
        let b = Scalar::from_i64(3);
        assert!(matches!(a.add(&b), Err(Error::FieldMismatch(..))));
        let g = Scalar::Mod { value: 3, p: DEFAULT_PRIMES[1] };
        assert!(a.mul(&g).is_err());
    }

    #[test]
    fn bad_denominator_is_reported() {
        let f = PrimeField::new(DEFAULT_PRIMES[0]).unwrap();
        let q = Rational::new(BigInt::one(), BigInt::from(DEFAULT_PRIMES[0]));
        assert_eq!(f.from_rational(&q), Err(Error::BadPrime(DEFAULT_PRIMES[0])));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn rational_inverse(n in 1i64..1_000_000, d in 1i64..1_000_000, neg: bool) {
                let q = rational(if neg { -n } else { n }, d);
                let s = Scalar::Rational(q);
                prop_assert_eq!(s.mul(&s.inv().unwrap()).unwrap(), Scalar::from_i64(1));
            }

            #[test]
            fn fermat_inverse(x in 1u64..DEFAULT_PRIMES[1]) {
                let f = PrimeField::new(DEFAULT_PRIMES[1]).unwrap();
                let inv = f.pow(x, f.modulus() - 2);
                prop_assert_eq!(f.mul(x, inv), 1);
            }
        }
    }
}
