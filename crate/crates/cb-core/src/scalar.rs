//! Exact field elements: arbitrary-precision rationals and prime fields.
//!
//! A [`Scalar`] knows which field it lives in and panics if combined with a
//! scalar from a different field; container types validate fields at
//! construction so the panic is unreachable through the public API.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// The coefficient field of a computation.
///
/// `Q` is the rationals with arbitrary-precision arithmetic; `Fp(p)` is the
/// prime field with `p` elements.  Construct prime fields through
/// [`Field::fp`], which verifies primality; the variant is public so tests
/// and callers that already know `p` is prime can use it directly.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Field {
    Q,
    Fp(u64),
}

impl Field {
    /// Prime field with `p` elements.  `p` must be an odd prime.
    pub fn fp(p: u64) -> Result<Field> {
        if p < 3 {
            return Err(Error::domain(format!("modulus {p} too small, need an odd prime")));
        }
        if !is_prime_u64(p) {
            return Err(Error::domain(format!("modulus {p} is not prime")));
        }
        Ok(Field::Fp(p))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::zero()),
            Field::Fp(p) => Scalar::Fp { p: *p, v: 0 },
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::one()),
            Field::Fp(p) => Scalar::Fp { p: *p, v: 1 },
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::from_integer(BigInt::from(v))),
            Field::Fp(p) => {
                let p128 = *p as i128;
                Scalar::Fp { p: *p, v: (v as i128).rem_euclid(p128) as u64 }
            }
        }
    }

    /// `num / den` in this field.  Over `Fp` the denominator must be a unit.
    pub fn fraction(&self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::domain("fraction with zero denominator"));
        }
        let n = self.from_i64(num);
        let d = self.from_i64(den);
        let inv = d
            .inv()
            .ok_or_else(|| Error::domain(format!("denominator {den} is zero in {self}")))?;
        Ok(&n * &inv)
    }

    /// Parse `"5"`, `"-3"`, or `"a/b"` into this field.
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let parse_int = |t: &str| -> Result<BigInt> {
            BigInt::from_str(t.trim())
                .map_err(|_| Error::domain(format!("cannot parse {t:?} as an integer")))
        };
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (parse_int(n)?, parse_int(d)?),
            None => (parse_int(s)?, BigInt::one()),
        };
        if den.is_zero() {
            return Err(Error::domain(format!("zero denominator in {s:?}")));
        }
        match self {
            Field::Q => Ok(Scalar::Q(BigRational::new(num, den))),
            Field::Fp(p) => {
                let p_big = BigInt::from(*p);
                let reduce = |x: &BigInt| -> u64 {
                    let r = ((x % &p_big) + &p_big) % &p_big;
                    u64::try_from(r).expect("residue fits u64")
                };
                let n = Scalar::Fp { p: *p, v: reduce(&num) };
                let d = Scalar::Fp { p: *p, v: reduce(&den) };
                let inv = d
                    .inv()
                    .ok_or_else(|| Error::domain(format!("denominator of {s:?} is zero in {self}")))?;
                Ok(&n * &inv)
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Q => write!(f, "Q"),
            Field::Fp(p) => write!(f, "F_{p}"),
        }
    }
}

/// An element of [`Field::Q`] or of [`Field::Fp`].
///
/// Rationals are kept reduced with positive denominator (the `num-rational`
/// invariant); prime-field values are residues in `0..p`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Scalar {
    Q(BigRational),
    Fp { p: u64, v: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Q,
            Scalar::Fp { p, .. } => Field::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Q(r) => {
                if r.is_zero() {
                    None
                } else {
                    Some(Scalar::Q(r.recip()))
                }
            }
            Scalar::Fp { p, v } => {
                if *v == 0 {
                    None
                } else {
                    Some(Scalar::Fp { p: *p, v: mod_inverse(*v, *p) })
                }
            }
        }
    }

    /// Pivot weight for elimination: total bit size over `Q`, constant over
    /// `Fp` where every nonzero pivot is as good as any other.
    pub fn bit_size(&self) -> u64 {
        match self {
            Scalar::Q(r) => r.numer().bits() + r.denom().bits(),
            Scalar::Fp { .. } => 1,
        }
    }

    fn check_same_field(&self, other: &Scalar, op: &str) {
        if self.field() != other.field() {
            panic!("{op} on scalars from {} and {}", self.field(), other.field());
        }
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn addmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

/// Inverse of `a` mod prime `p` by extended Euclid.  `a` must be nonzero mod `p`.
fn mod_inverse(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "modulus not coprime to element");
    t0.rem_euclid(p as i128) as u64
}

/// Deterministic Miller-Rabin for u64 (the listed bases decide primality for
/// everything below 3.3e24).
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == small {
            return true;
        }
        if n % small == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn powmod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.check_same_field(rhs, "add");
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { p, v: a }, Scalar::Fp { v: b, .. }) => {
                Scalar::Fp { p: *p, v: addmod(*a, *b, *p) }
            }
            _ => unreachable!(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.check_same_field(rhs, "sub");
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            (Scalar::Fp { p, v: a }, Scalar::Fp { v: b, .. }) => {
                Scalar::Fp { p: *p, v: addmod(*a, *p - *b, *p) }
            }
            _ => unreachable!(),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.check_same_field(rhs, "mul");
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { p, v: a }, Scalar::Fp { v: b, .. }) => {
                Scalar::Fp { p: *p, v: mulmod(*a, *b, *p) }
            }
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { p, v } => Scalar::Fp { p: *p, v: if *v == 0 { 0 } else { p - v } },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

/// Signed magnitude helpers used by elimination over `Q`.
pub(crate) fn rational(s: &Scalar) -> &BigRational {
    match s {
        Scalar::Q(r) => r,
        Scalar::Fp { .. } => panic!("expected a rational scalar"),
    }
}

pub(crate) fn from_rational(r: BigRational) -> Scalar {
    Scalar::Q(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u64 = 2147483647;

    #[test]
    fn rational_arithmetic_reduces() {
        let f = Field::Q;
        let a = f.fraction(2, 4).unwrap();
        let b = f.fraction(1, 2).unwrap();
        assert_eq!(a, b);
        let s = &a + &b;
        assert_eq!(s, f.one());
        assert_eq!((&s - &s), f.zero());
        assert_eq!(format!("{}", f.fraction(-6, 4).unwrap()), "-3/2");
    }

    #[test]
    fn prime_field_arithmetic_wraps() {
        let f = Field::fp(P).unwrap();
        let a = f.from_i64(-1);
        assert_eq!(a, Scalar::Fp { p: P, v: P - 1 });
        assert_eq!(&a + &f.one(), f.zero());
        let x = f.from_i64(123456789);
        let inv = x.inv().unwrap();
        assert_eq!(&x * &inv, f.one());
    }

    #[test]
    fn fraction_parse_agrees_with_fraction() {
        for field in [Field::Q, Field::fp(P).unwrap()] {
            assert_eq!(field.parse("-7/3").unwrap(), field.fraction(-7, 3).unwrap());
            assert_eq!(field.parse("12").unwrap(), field.from_i64(12));
        }
        assert!(Field::Q.parse("1/0").is_err());
        assert!(Field::Q.parse("x").is_err());
    }

    #[test]
    fn composite_modulus_rejected() {
        assert!(Field::fp(2147483646).is_err());
        assert!(Field::fp(1).is_err());
        assert!(Field::fp(2).is_err());
        assert!(Field::fp(1048583).is_ok());
    }

    #[test]
    fn primality_check_on_known_values() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(3));
        assert!(!is_prime_u64(3215031751)); // strong pseudoprime to bases 2,3,5,7
        assert!(is_prime_u64(18446744073709551557)); // largest u64 prime
        assert!(!is_prime_u64(18446744073709551555));
    }

    #[test]
    fn zero_has_no_inverse() {
        assert!(Field::Q.zero().inv().is_none());
        assert!(Field::fp(P).unwrap().zero().inv().is_none());
    }

    #[test]
    #[should_panic(expected = "add")]
    fn mixed_field_panics() {
        let _ = &Field::Q.one() + &Field::fp(P).unwrap().one();
    }
}
