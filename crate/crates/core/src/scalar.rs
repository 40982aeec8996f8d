//! Exact arithmetic in a single real quadratic field ℚ(√D).
//!
//! An [`ExactScalar`] is `a + b·√D` with rational `a`, `b` and a square-free
//! discriminant `D ≥ 2`. Rational values carry `D = 0`. Values over two
//! different square-free discriminants cannot be combined: the checked
//! operations return [`ScalarError::IncompatibleDiscriminant`] and the
//! operator impls panic.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("incompatible discriminants sqrt({0}) and sqrt({1})")]
    IncompatibleDiscriminant(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of negative value {0}")]
    NegativeRadicand(String),
    #[error("radicand {0} does not fit the supported discriminant range")]
    RadicandTooLarge(String),
    #[error("cannot parse {0:?} as an exact scalar")]
    Parse(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    rational: Rational,
    surd: Rational,
    disc: u64,
}

/// Split `n` as `s² · core` with `core` square-free. Trial division runs up to
/// the cube root; the cofactor left over then has at most two prime factors.
pub fn square_free_decomposition(n: u64) -> (u64, u64) {
    assert!(n > 0, "square_free_decomposition of zero");
    let mut n = n;
    let mut outer = 1u64;
    let mut core = 1u64;
    let mut p = 2u64;
    while (p as u128) * (p as u128) * (p as u128) <= n as u128 {
        if n.is_multiple_of(p) {
            let mut e = 0u32;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            outer *= p.pow(e / 2);
            if e % 2 == 1 {
                core *= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        let r = n.sqrt();
        if r * r == n {
            outer *= r;
        } else {
            core *= n;
        }
    }
    (outer, core)
}

pub fn rational_from_i64(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, ScalarError> {
    let err = || ScalarError::Parse(s.to_string());
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(err());
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, d),
        None => (t.as_str(), "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| err())?;
    let den = BigInt::from_str(den).map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

fn rational_sign(q: &Rational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

impl ExactScalar {
    /// `a + b·√d`; perfect-square factors of `d` are pulled into `b`.
    pub fn new(a: Rational, b: Rational, d: u64) -> Self {
        if d == 0 || b.is_zero() {
            return Self::from_rational(a);
        }
        let (outer, core) = square_free_decomposition(d);
        let b = b * Rational::from_integer(BigInt::from(outer));
        if core == 1 {
            Self::from_rational(a + b)
        } else {
            Self { rational: a, surd: b, disc: core }
        }
    }

    pub fn from_rational(q: Rational) -> Self {
        Self { rational: q, surd: Rational::zero(), disc: 0 }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(rational_from_i64(n, d))
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    /// Exact `√q` for a non-negative rational `q`.
    pub fn sqrt_of_rational(q: &Rational) -> Result<Self, ScalarError> {
        if q.is_negative() {
            return Err(ScalarError::NegativeRadicand(format_rational(q)));
        }
        if q.is_zero() {
            return Ok(Self::zero());
        }
        let radicand = q.numer() * q.denom();
        let r = radicand
            .to_u64()
            .ok_or_else(|| ScalarError::RadicandTooLarge(radicand.to_string()))?;
        let inv_den = Rational::new(BigInt::one(), q.denom().clone());
        Ok(Self::new(Rational::zero(), inv_den, r))
    }

    pub fn rational_part(&self) -> &Rational {
        &self.rational
    }

    pub fn surd_part(&self) -> &Rational {
        &self.surd
    }

    /// The square-free discriminant, `0` for rational values.
    pub fn discriminant(&self) -> u64 {
        self.disc
    }

    pub fn is_rational(&self) -> bool {
        self.surd.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.is_rational() {
            Some(&self.rational)
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.surd.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.surd.is_zero() && self.rational.is_one()
    }

    fn common_disc(&self, other: &Self) -> Result<u64, ScalarError> {
        match (self.disc, other.disc) {
            (0, d) | (d, 0) => Ok(d),
            (a, b) if a == b => Ok(a),
            (a, b) => Err(ScalarError::IncompatibleDiscriminant(a, b)),
        }
    }

    fn build(rational: Rational, surd: Rational, disc: u64) -> Self {
        if surd.is_zero() {
            Self::from_rational(rational)
        } else {
            Self { rational, surd, disc }
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ScalarError> {
        let d = self.common_disc(other)?;
        Ok(Self::build(&self.rational + &other.rational, &self.surd + &other.surd, d))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ScalarError> {
        let d = self.common_disc(other)?;
        Ok(Self::build(&self.rational - &other.rational, &self.surd - &other.surd, d))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        let d = self.common_disc(other)?;
        let dq = Rational::from_integer(BigInt::from(d));
        let a = &self.rational * &other.rational + &self.surd * &other.surd * dq;
        let b = &self.rational * &other.surd + &self.surd * &other.rational;
        Ok(Self::build(a, b, d))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, ScalarError> {
        self.common_disc(other)?;
        self.try_mul(&other.inverse()?)
    }

    /// `a² − b²D`, zero only for zero.
    pub fn norm(&self) -> Rational {
        let dq = Rational::from_integer(BigInt::from(self.disc));
        &self.rational * &self.rational - &self.surd * &self.surd * dq
    }

    pub fn conjugate(&self) -> Self {
        Self::build(self.rational.clone(), -self.surd.clone(), self.disc)
    }

    pub fn inverse(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let n = self.norm();
        Ok(Self::build(&self.rational / &n, -(&self.surd / &n), self.disc))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact sign: -1, 0 or 1.
    pub fn signum(&self) -> i8 {
        let sa = rational_sign(&self.rational);
        let sb = rational_sign(&self.surd);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        let dq = Rational::from_integer(BigInt::from(self.disc));
        let a2 = &self.rational * &self.rational;
        let b2d = &self.surd * &self.surd * dq;
        if a2 > b2d {
            sa
        } else {
            sb
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn cmp_exact(&self, other: &Self) -> Result<Ordering, ScalarError> {
        Ok(self.try_sub(other)?.signum().cmp(&0))
    }

    /// Floating-point approximation. Opposite-sign parts go through the
    /// conjugate to avoid cancellation.
    pub fn to_f64(&self) -> f64 {
        let a = self.rational.to_f64().unwrap_or(f64::NAN);
        if self.surd.is_zero() {
            return a;
        }
        let root = (self.disc as f64).sqrt();
        let b = self.surd.to_f64().unwrap_or(f64::NAN);
        if rational_sign(&self.rational) * rational_sign(&self.surd) < 0 {
            let n = self.norm().to_f64().unwrap_or(f64::NAN);
            n / (a - b * root)
        } else {
            a + b * root
        }
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.surd.is_zero() {
            return f.write_str(&format_rational(&self.rational));
        }
        let mag = self.surd.abs();
        let term = if mag.is_one() {
            format!("sqrt({})", self.disc)
        } else {
            format!("{}*sqrt({})", format_rational(&mag), self.disc)
        };
        let neg = self.surd.is_negative();
        if self.rational.is_zero() {
            if neg {
                write!(f, "-{term}")
            } else {
                f.write_str(&term)
            }
        } else {
            let op = if neg { '-' } else { '+' };
            write!(f, "{} {op} {term}", format_rational(&self.rational))
        }
    }
}

impl FromStr for ExactScalar {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ScalarError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(pos) = compact.find("sqrt(") else {
            return parse_rational(&compact).map(Self::from_rational);
        };
        let tail = &compact[pos + 5..];
        let close = tail.find(')').ok_or_else(err)?;
        if close + 1 != tail.len() {
            return Err(err());
        }
        let disc: u64 = tail[..close].parse().map_err(|_| err())?;
        let mut head = &compact[..pos];
        let explicit_coef = head.ends_with('*');
        if explicit_coef {
            head = &head[..head.len() - 1];
        }
        let op = head
            .char_indices()
            .skip(1)
            .find(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i);
        let (rat_txt, negate, coef_txt) = match op {
            Some(i) => (&head[..i], head.as_bytes()[i] == b'-', &head[i + 1..]),
            None => ("0", false, head),
        };
        let coef = match coef_txt {
            "" | "+" if !explicit_coef => Rational::one(),
            "-" if !explicit_coef => -Rational::one(),
            txt => parse_rational(txt)?,
        };
        let coef = if negate { -coef } else { coef };
        Ok(Self::new(parse_rational(rat_txt)?, coef, disc))
    }
}

impl PartialOrd for ExactScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.cmp_exact(other).ok()
    }
}

impl From<Rational> for ExactScalar {
    fn from(q: Rational) -> Self {
        Self::from_rational(q)
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigInt> for ExactScalar {
    fn from(n: BigInt) -> Self {
        Self::from_rational(Rational::from_integer(n))
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::build(-self.rational.clone(), -self.surd.clone(), self.disc)
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
binop!(Div, div, try_div);

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, rhs: &ExactScalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&ExactScalar> for ExactScalar {
    fn mul_assign(&mut self, rhs: &ExactScalar) {
        *self = &*self * rhs;
    }
}

impl Sum for ExactScalar {
    fn sum<I: Iterator<Item = ExactScalar>>(iter: I) -> Self {
        iter.fold(ExactScalar::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a ExactScalar> for ExactScalar {
    fn sum<I: Iterator<Item = &'a ExactScalar>>(iter: I) -> Self {
        iter.fold(ExactScalar::zero(), |acc, x| acc + x)
    }
}

impl Product for ExactScalar {
    fn product<I: Iterator<Item = ExactScalar>>(iter: I) -> Self {
        iter.fold(ExactScalar::one(), |acc, x| acc * x)
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(txt: &str) -> ExactScalar {
        txt.parse().unwrap()
    }

    #[test]
    fn decomposition() {
        assert_eq!(square_free_decomposition(72), (6, 2));
        assert_eq!(square_free_decomposition(1), (1, 1));
        assert_eq!(square_free_decomposition(49), (7, 1));
        assert_eq!(square_free_decomposition(1_000_003 * 1_000_003), (1_000_003, 1));
        assert_eq!(square_free_decomposition(1_000_003 * 999_983), (1, 1_000_003 * 999_983));
    }

    #[test]
    fn perfect_square_folds() {
        let x = ExactScalar::new(rational_from_i64(1, 2), rational_from_i64(1, 3), 36);
        assert_eq!(x, ExactScalar::from_ratio(5, 2));
        assert!(x.is_rational());
        let y = ExactScalar::new(Rational::zero(), Rational::one(), 12);
        assert_eq!(y.to_string(), "2*sqrt(3)");
    }

    #[test]
    fn sign_of_close_values() {
        // 1 + sqrt(2) - 5/2 is about -0.0858
        assert_eq!(s("-3/2 + sqrt(2)").signum(), -1);
        assert_eq!(s("3/2 - sqrt(2)").signum(), 1);
        assert_eq!(s("-sqrt(7)").signum(), -1);
        assert_eq!(s("0").signum(), 0);
    }

    #[test]
    fn inverse_and_norm() {
        let x = s("3 + 2*sqrt(2)");
        assert_eq!(x.norm(), Rational::one());
        assert_eq!(x.inverse().unwrap(), s("3 - 2*sqrt(2)"));
        assert!(ExactScalar::zero().inverse().is_err());
    }

    #[test]
    fn mixed_discriminants_rejected() {
        let e = s("sqrt(2)").try_add(&s("sqrt(3)")).unwrap_err();
        assert_eq!(e, ScalarError::IncompatibleDiscriminant(2, 3));
        assert!(s("sqrt(2)").try_mul(&s("5/7")).is_ok());
    }

    #[test]
    fn text_round_trip() {
        for txt in ["0", "-7/3", "sqrt(5)", "-sqrt(5)", "1/2 + 3/4*sqrt(21)", "-5/2 - sqrt(21)"] {
            assert_eq!(s(txt).to_string(), txt);
        }
        assert_eq!(s("1/2+3/4*sqrt(21)"), s("1/2 + 3/4*sqrt(21)"));
        assert_eq!(s("2 + -1*sqrt(3)"), s("2 - sqrt(3)"));
        assert!("1/0".parse::<ExactScalar>().is_err());
        assert!("sqrt(x)".parse::<ExactScalar>().is_err());
    }

    #[test]
    fn sqrt_of_rational() {
        let r = ExactScalar::sqrt_of_rational(&rational_from_i64(8, 3)).unwrap();
        assert_eq!(r, s("2/3*sqrt(6)"));
        assert_eq!(&r * &r, ExactScalar::from_ratio(8, 3));
    }

    #[test]
    fn float_conversion_avoids_cancellation() {
        let x = s("470832 - 332929*sqrt(2)");
        let exact = x.norm().to_f64().unwrap() / (470832.0 + 332929.0 * 2f64.sqrt());
        assert!((x.to_f64() - exact).abs() < 1e-18);
    }
}
