//! Non-existence arguments: the index-6 relations and the degree-4 positivity
//! certificate.

use std::fmt;

use num_traits::{Signed, Zero};

use super::{moment, q};
use crate::poly::Poly;
use crate::scalar::{format_rational, ExactScalar, Rational};
use crate::symmetry::WeightExponent;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Forced `a` solves the quadratic and is admissible.
    Consistent,
    /// The quadratic has real roots but the forced `a` is not one of them.
    Inconsistent,
    NoRealRoot,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Consistent => "consistent",
            Verdict::Inconsistent => "inconsistent",
            Verdict::NoRealRoot => "no real root",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionReport {
    pub gamma: WeightExponent,
    /// From `{4,1,1}`, `{3,2,1}`, `{2,2,2}`; `None` when the relation does not fix `a`.
    pub forced_a: Option<Rational>,
    /// From `{5,1}`, `{4,2}`, `{3,3}`, scaled to coprime integers.
    pub quadratic: Poly,
    pub roots: Vec<ExactScalar>,
    pub verdict: Verdict,
}

impl fmt::Display for ObstructionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let quad = format!("{} = 0", self.quadratic.display_in("a"));
        match (self.verdict, &self.forced_a) {
            (Verdict::NoRealRoot, _) => write!(f, "{quad}: no real root; no index-6 rule of this form"),
            (v, Some(a)) => write!(f, "a = {} vs {quad}: {v}", format_rational(a)),
            (v, None) => write!(f, "{quad}: {v}"),
        }
    }
}

/// Index-6 rules supported on `v_k` orbits plus one `u_{a,p}` orbit must
/// satisfy two relations in `a`. Both are ratios of integrals over partitions
/// of equal length, so they do not depend on `d`; `d = 2` is used.
///
/// On `v_k` the combinations `S_{5,1} − S_{4,2}`, `S_{4,2} − 2S_{3,3}` and
/// `S_{3,2,1} − 6S_{2,2,2}`, `3S_{2,2,2} − S_{3,2,1} + S_{4,1,1}` vanish, so
/// the `u` orbit alone carries them.
pub fn index6_obstruction(gamma: &WeightExponent) -> ObstructionReport {
    let d = 2;
    let m = |p: &[u32]| moment(p, d, gamma);
    let (m51, m42, m33) = (m(&[5, 1]), m(&[4, 2]), m(&[3, 3]));
    let lead = &m42 - &m33 * q(2);
    let mid = &m42 * q(2) - &m33 * q(2) - &m51;
    let quad = Poly::new(vec![lead.clone(), mid, lead]);
    let quadratic = Poly::new(quad.primitive().into_iter().map(Rational::from_integer).collect());
    let (m411, m321, m222) = (m(&[4, 1, 1]), m(&[3, 2, 1]), m(&[2, 2, 2]));
    let den = &m321 - &m222 * q(6);
    let forced_a =
        (!den.is_zero()).then(|| (&m222 * q(3) - &m321 + &m411) * q(2) / den);
    let (roots, _) = quadratic.quadratic_roots();
    let verdict = if roots.is_empty() {
        Verdict::NoRealRoot
    } else {
        match &forced_a {
            Some(a) if quadratic.eval(a).is_zero() && a.is_positive() && *a != q(1) => Verdict::Consistent,
            _ => Verdict::Inconsistent,
        }
    };
    ObstructionReport { gamma: gamma.clone(), forced_a, quadratic, roots, verdict }
}

/// `P_4 = S_{4} + a S_{3,1} + b S_{2,2}` is orthogonal to lower degrees and
/// positive at every `v_k`, so no positive index-4 rule lives on `v_k` orbits alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct P4Certificate {
    pub d: usize,
    pub a: Rational,
    pub b: Rational,
    /// `∫ P_4`, which must be exactly zero.
    pub integral: Rational,
    /// `P_4(v_k)` for `k = 1, …, d+1`.
    pub values: Vec<Rational>,
}

impl P4Certificate {
    pub fn holds(&self) -> bool {
        self.integral.is_zero() && self.values.iter().all(|v| v.is_positive())
    }
}

pub fn p4_certificate(d: usize, gamma: &WeightExponent) -> P4Certificate {
    assert!(d >= 1, "p4_certificate needs d ≥ 1");
    let g = gamma.value();
    let dq = q(d as i64);
    let one = q(1);
    let a = -q(4) * (g + q(4)) / (&dq * (g + &one));
    let b = q(6) * (g + q(3)) * (g + q(4)) / (&dq * (g + &one) * (g + q(2)));
    let integral = moment(&[4], d, gamma) + &a * moment(&[3, 1], d, gamma) + &b * moment(&[2, 2], d, gamma);
    let values = (1..=d + 1)
        .map(|k| {
            let k = k as i64;
            let c2 = q(k * (k - 1) / 2);
            q(k) + &c2 * q(2) * &a + &c2 * &b
        })
        .collect();
    P4Certificate { d, a, b, integral, values }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::{symmetric_function_value, Partition};

    fn s(p: &[u32], point: &[ExactScalar]) -> ExactScalar {
        symmetric_function_value(&Partition::new(p.to_vec()).unwrap(), point)
    }

    #[test]
    fn chebyshev_forces_seven_thirds() {
        let r = index6_obstruction(&WeightExponent::chebyshev());
        assert_eq!(r.forced_a, Some(Rational::new(7.into(), 3.into())));
        assert_eq!(r.quadratic, Poly::from_i64(&[1, -6, 1]));
        assert_eq!(r.verdict, Verdict::Inconsistent);
    }

    #[test]
    fn uniform_relations() {
        let r = index6_obstruction(&WeightExponent::uniform());
        assert_eq!(r.forced_a, Some(q(2)));
        assert_eq!(r.quadratic, Poly::from_i64(&[1, -5, 1]));
        assert_eq!(r.verdict, Verdict::Inconsistent);
    }

    #[test]
    fn relations_vanish_on_vertex_orbits() {
        // Oracle: evaluate the combinations at v_k directly.
        for k in 1..=5usize {
            let v: Vec<ExactScalar> = (0..6).map(|i| ExactScalar::from_integer(i64::from(i < k))).collect();
            assert!((s(&[5, 1], &v) - s(&[4, 2], &v)).is_zero());
            assert!((s(&[4, 2], &v) - s(&[3, 3], &v) * ExactScalar::from_integer(2)).is_zero());
            assert!((s(&[3, 2, 1], &v) - s(&[2, 2, 2], &v) * ExactScalar::from_integer(6)).is_zero());
        }
    }

    #[test]
    fn p4_uniform() {
        let c = p4_certificate(4, &WeightExponent::uniform());
        assert_eq!(c.a, Rational::new((-4).into(), 1.into()));
        assert_eq!(c.b, Rational::new(9.into(), 1.into()));
        assert_eq!(c.values[1], q(3));
        assert!(c.holds());
    }
}
