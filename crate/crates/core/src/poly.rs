//! Dense univariate polynomials over ℚ and their roots in real quadratic fields.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::{format_rational, ExactScalar, Rational};

/// Coefficients from the constant term upwards; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_scalar(&self, x: &ExactScalar) -> ExactScalar {
        self.0
            .iter()
            .rev()
            .fold(ExactScalar::zero(), |acc, c| acc * x + ExactScalar::from(c.clone()))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let lead = self.leading();
        self.0
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + (c / &lead).to_f64().unwrap_or(f64::NAN))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Quotient by `x - r`, assuming `r` is a root.
    pub fn deflate(&self, r: &Rational) -> Self {
        let n = self.0.len();
        let mut out = vec![Rational::zero(); n.saturating_sub(1)];
        let mut carry = Rational::zero();
        for i in (1..n).rev() {
            carry = &carry * r + &self.0[i];
            out[i - 1] = carry.clone();
        }
        Self::new(out)
    }

    /// Scale to coprime integer coefficients with a positive leading term.
    pub fn primitive(&self) -> Vec<BigInt> {
        let lcm = self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if self.leading().is_negative() { -BigInt::one() } else { BigInt::one() };
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|c| c / &g * &sign).collect()
    }

    /// Real roots to double precision, including touching roots.
    pub fn approximate_real_roots(&self) -> Vec<f64> {
        let Some(deg) = self.degree() else { return Vec::new() };
        if deg == 0 {
            return Vec::new();
        }
        if deg == 1 {
            let r = -(&self.0[0] / &self.0[1]);
            return vec![r.to_f64().unwrap_or(f64::NAN)];
        }
        let lead = self.leading();
        let bound = 1.0
            + self.0[..deg]
                .iter()
                .map(|c| (c / &lead).abs().to_f64().unwrap_or(f64::MAX))
                .fold(0.0, f64::max);
        let mut critical = self.derivative().approximate_real_roots();
        critical.retain(|x| x.is_finite());
        critical.sort_by(|a, b| a.total_cmp(b));
        let mut marks = vec![-bound];
        marks.extend(critical.iter().copied());
        marks.push(bound);
        let mut roots = Vec::new();
        for w in marks.windows(2) {
            let (mut lo, mut hi) = (w[0], w[1]);
            let (flo, fhi) = (self.eval_f64(lo), self.eval_f64(hi));
            if flo == 0.0 {
                roots.push(lo);
                continue;
            }
            if flo.signum() == fhi.signum() {
                continue;
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if self.eval_f64(mid).signum() == flo.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        roots.extend(critical);
        roots
    }

    /// Exact rational roots, each listed once.
    pub fn rational_roots(&self) -> Vec<Rational> {
        let mut found: Vec<Rational> = Vec::new();
        for approx in self.approximate_real_roots() {
            for cand in convergents(approx, 10_000_000) {
                if !found.contains(&cand) && self.eval(&cand).is_zero() {
                    found.push(cand);
                }
            }
        }
        found.sort();
        found
    }

    /// All real roots lying in ℚ or a single quadratic extension. The flag is
    /// false when an irreducible factor of degree three or more remains.
    pub fn quadratic_roots(&self) -> (Vec<ExactScalar>, bool) {
        let mut rest = self.clone();
        let mut roots: Vec<ExactScalar> = Vec::new();
        for r in self.rational_roots() {
            while rest.degree().unwrap_or(0) > 0 && rest.eval(&r).is_zero() {
                rest = rest.deflate(&r);
            }
            roots.push(ExactScalar::from(r));
        }
        match rest.degree() {
            Some(2) => {
                let (c, b, a) = (&rest.0[0], &rest.0[1], &rest.0[2]);
                let disc = b * b - Rational::from_integer(BigInt::from(4)) * a * c;
                if !disc.is_negative() {
                    if let Ok(root) = ExactScalar::sqrt_of_rational(&disc) {
                        let two_a = ExactScalar::from(a * Rational::from_integer(BigInt::from(2)));
                        let mb = ExactScalar::from(-b.clone());
                        roots.push((&mb + &root) / &two_a);
                        roots.push((&mb - &root) / &two_a);
                    } else {
                        return (roots, false);
                    }
                }
                (roots, true)
            }
            Some(d) if d >= 3 => (roots, false),
            _ => (roots, true),
        }
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coef = if mag.is_one() && i > 0 { String::new() } else { format_rational(&mag) };
            let power = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            out.push_str(&coef);
            out.push_str(&power);
        }
        out
    }
}

/// Continued-fraction convergents of `x` with denominators up to `max_den`.
fn convergents(x: f64, max_den: i64) -> Vec<Rational> {
    let mut out = Vec::new();
    if !x.is_finite() {
        return out;
    }
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut y = x;
    for _ in 0..40 {
        let a = y.floor();
        let Some(ai) = num_traits::FromPrimitive::from_f64(a) else { break };
        let ai: BigInt = ai;
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > BigInt::from(max_den) {
            break;
        }
        out.push(Rational::new(h2.clone(), k2.clone()));
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = y - a;
        if frac.abs() < 1e-15 {
            break;
        }
        y = 1.0 / frac;
    }
    out
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.0.len().max(rhs.0.len());
        let zero = Rational::zero();
        Poly::new((0..n).map(|i| self.0.get(i).unwrap_or(&zero) + rhs.0.get(i).unwrap_or(&zero)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &rhs.scale(&-Rational::one())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::new(Vec::new());
        }
        let mut out = vec![Rational::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational_from_i64;

    #[test]
    fn display() {
        assert_eq!(Poly::from_i64(&[1, -5, 1]).display_in("a"), "a^2 - 5a + 1");
        assert_eq!(Poly::from_i64(&[0, 0, -3]).to_string(), "-3x^2");
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        // 3 (x - 1)^2 (x - 2/3) (x + 5)
        let p = &(&Poly::from_i64(&[1, -2, 1]) * &Poly::from_i64(&[-2, 3])) * &Poly::from_i64(&[5, 1]);
        assert_eq!(
            p.rational_roots(),
            vec![rational_from_i64(-5, 1), rational_from_i64(2, 3), rational_from_i64(1, 1)]
        );
    }

    #[test]
    fn quadratic_surd_roots() {
        let (roots, complete) = Poly::from_i64(&[1, -5, 1]).quadratic_roots();
        assert!(complete);
        let expect: Vec<ExactScalar> = ["5/2 + 1/2*sqrt(21)", "5/2 - 1/2*sqrt(21)"].iter().map(|s| s.parse().unwrap()).collect();
        assert_eq!(roots, expect);
        let (none, complete) = Poly::from_i64(&[-2, 0, 0, 1]).quadratic_roots();
        assert!(none.is_empty() && !complete);
    }

    #[test]
    fn deflate_and_primitive() {
        let p = Poly::from_i64(&[-6, 11, -6, 1]);
        assert_eq!(p.deflate(&rational_from_i64(1, 1)), Poly::from_i64(&[6, -5, 1]));
        let q = Poly::new(vec![rational_from_i64(1, 2), rational_from_i64(-3, 4)]);
        assert_eq!(q.primitive(), vec![BigInt::from(-2), BigInt::from(3)]);
    }
}
