//! Integer partitions, monomial symmetric functions and the simplex moments
//! of the weight `Π x_i^γ` on the standard simplex in homogeneous coordinates.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinatorics::{factorial, multinomial};
use crate::scalar::{format_rational, parse_rational, rational_from_i64, ExactScalar, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetryError {
    #[error("weight exponent {0} must exceed -1")]
    ExponentOutOfRange(String),
    #[error("partition parts must be positive, got {0:?}")]
    InvalidPartition(Vec<u32>),
    #[error("cannot parse {0:?}")]
    Parse(String),
}

/// The exponent `γ > -1` of the weight `Π x_i^γ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct WeightExponent(Rational);

impl WeightExponent {
    pub fn new(gamma: Rational) -> Result<Self, SymmetryError> {
        if gamma <= -Rational::one() {
            return Err(SymmetryError::ExponentOutOfRange(format_rational(&gamma)));
        }
        Ok(Self(gamma))
    }

    pub fn uniform() -> Self {
        Self(Rational::zero())
    }

    /// `γ = -1/2`, the exponent induced by the sphere.
    pub fn chebyshev() -> Self {
        Self(rational_from_i64(-1, 2))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }
}

impl fmt::Display for WeightExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl FromStr for WeightExponent {
    type Err = SymmetryError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let q = parse_rational(s).map_err(|_| SymmetryError::Parse(s.to_string()))?;
        Self::new(q)
    }
}

impl TryFrom<String> for WeightExponent {
    type Error = SymmetryError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<WeightExponent> for String {
    fn from(g: WeightExponent) -> String {
        g.to_string()
    }
}

/// A partition with parts in non-increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self, SymmetryError> {
        if parts.contains(&0) {
            return Err(SymmetryError::InvalidPartition(parts));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self(parts))
    }

    /// Nonzero entries of an exponent vector, sorted.
    pub fn from_exponents(alpha: &[u32]) -> Self {
        let mut parts: Vec<u32> = alpha.iter().copied().filter(|&e| e > 0).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(part, multiplicity)` pairs, largest part first.
    pub fn runs(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((q, c)) if *q == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    fn run_lengths(&self) -> Vec<usize> {
        self.runs().into_iter().map(|(_, c)| c).collect()
    }

    /// Exponent vector of length `n` (parts first, zeros after).
    pub fn padded(&self, n: usize) -> Option<Vec<u32>> {
        if self.len() > n {
            return None;
        }
        let mut v = self.0.clone();
        v.resize(n, 0);
        Some(v)
    }

    /// Number of distinct monomials in `S_ℓ` over `n` variables.
    pub fn monomial_count(&self, n: usize) -> BigUint {
        let r = self.len();
        if r > n {
            return BigUint::zero();
        }
        let mut count = factorial(n) / factorial(n - r);
        for c in self.run_lengths() {
            count /= factorial(c);
        }
        count
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = SymmetryError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches('{').trim_end_matches('}');
        let parts = t
            .split(',')
            .map(|p| p.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| SymmetryError::Parse(s.to_string()))?;
        Self::new(parts)
    }
}

/// All partitions of `t` in reverse-lexicographic order: `{t}` first, `{1,…,1}` last.
pub fn partitions_of(t: u32) -> Vec<Partition> {
    fn rec(rem: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition(prefix.clone()));
            return;
        }
        for first in (1..=rem.min(max)).rev() {
            prefix.push(first);
            rec(rem - first, first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if t == 0 {
        return vec![Partition(Vec::new())];
    }
    rec(t, t, &mut Vec::new(), &mut out);
    out
}

/// Rising factorial `x (x+1) … (x+n-1)`.
pub fn pochhammer(x: &Rational, n: u32) -> Rational {
    let mut acc = Rational::one();
    let mut term = x.clone();
    for _ in 0..n {
        acc *= &term;
        term += Rational::one();
    }
    acc
}

/// `∫ x^α w` over the simplex in `d+1 = α.len()` homogeneous coordinates,
/// normalised to total mass one.
pub fn monomial_moment(alpha: &[u32], gamma: &WeightExponent) -> Rational {
    assert!(!alpha.is_empty(), "monomial_moment needs at least one coordinate");
    let g1 = gamma.value() + Rational::one();
    let n = Rational::from_integer(BigInt::from(alpha.len()));
    let total: u32 = alpha.iter().sum();
    let mut num = Rational::one();
    for &a in alpha {
        num *= pochhammer(&g1, a);
    }
    num / pochhammer(&(&g1 * n), total)
}

/// `∫ S_ℓ w` over the `d`-simplex; zero once `ℓ` has more than `d+1` parts.
pub fn partition_integral(part: &Partition, d: usize, gamma: &WeightExponent) -> Rational {
    match part.padded(d + 1) {
        None => Rational::zero(),
        Some(alpha) => {
            let count = Rational::from_integer(BigInt::from(part.monomial_count(d + 1)));
            count * monomial_moment(&alpha, gamma)
        }
    }
}

/// Memoised simplex moments for fixed `d` and `γ`, keyed by sorted exponents.
#[derive(Debug)]
pub struct MomentTable {
    d: usize,
    gamma: WeightExponent,
    cache: RwLock<HashMap<Vec<u32>, Rational>>,
}

impl MomentTable {
    pub fn new(d: usize, gamma: WeightExponent) -> Self {
        Self { d, gamma, cache: RwLock::new(HashMap::new()) }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn gamma(&self) -> &WeightExponent {
        &self.gamma
    }

    pub fn monomial(&self, alpha: &[u32]) -> Rational {
        assert_eq!(alpha.len(), self.d + 1, "exponent length must be d+1");
        let mut key = alpha.to_vec();
        key.sort_unstable_by(|a, b| b.cmp(a));
        if let Some(v) = self.cache.read().expect("moment cache poisoned").get(&key) {
            return v.clone();
        }
        let v = monomial_moment(&key, &self.gamma);
        self.cache.write().expect("moment cache poisoned").insert(key, v.clone());
        v
    }

    pub fn partition(&self, part: &Partition) -> Rational {
        match part.padded(self.d + 1) {
            None => Rational::zero(),
            Some(alpha) => {
                Rational::from_integer(BigInt::from(part.monomial_count(self.d + 1)))
                    * self.monomial(&alpha)
            }
        }
    }
}

/// `S_ℓ` at the indicator vector of `k` coordinates.
pub fn s_value_at_vk(part: &Partition, k: usize) -> BigUint {
    let r = part.len();
    if r > k {
        return BigUint::zero();
    }
    crate::combinatorics::binomial(k, r) * multinomial(&part.run_lengths())
}

/// `S_ℓ` at `(a, 1, …, 1, 0, …)` with `p` ones.
pub fn s_value_at_u(part: &Partition, a: &ExactScalar, p: usize) -> ExactScalar {
    let runs = part.runs();
    let lens: Vec<usize> = runs.iter().map(|&(_, c)| c).collect();
    let r = part.len();
    let mut total = ExactScalar::zero();
    for (j, &(e, _)) in runs.iter().enumerate() {
        let mut reduced = lens.clone();
        reduced[j] -= 1;
        let count = multinomial(&reduced) * crate::combinatorics::binomial(p, r - 1);
        total += &(a.pow(e) * ExactScalar::from(BigInt::from(count)));
    }
    let rest = multinomial(&lens) * crate::combinatorics::binomial(p, r);
    total + ExactScalar::from(BigInt::from(rest))
}

/// Distinct values of a point with multiplicities, in first-seen order.
pub fn value_classes(point: &[ExactScalar]) -> Vec<(ExactScalar, usize)> {
    let mut classes: Vec<(ExactScalar, usize)> = Vec::new();
    for x in point {
        match classes.iter_mut().find(|(v, _)| v == x) {
            Some((_, c)) => *c += 1,
            None => classes.push((x.clone(), 1)),
        }
    }
    classes
}

/// `S_ℓ(x)` by enumerating how many coordinates of each value class receive
/// each exponent of `ℓ`.
pub fn symmetric_function_value(part: &Partition, point: &[ExactScalar]) -> ExactScalar {
    if part.len() > point.len() {
        return ExactScalar::zero();
    }
    let classes = value_classes(point);
    let runs = part.runs();
    let mut used = vec![0usize; classes.len()];
    let mut total = ExactScalar::zero();

    struct Ctx<'a> {
        classes: &'a [(ExactScalar, usize)],
        runs: &'a [(u32, usize)],
    }

    // Distribute run `i` (needing `left` more coordinates) over classes `j..`.
    fn rec(
        ctx: &Ctx,
        i: usize,
        j: usize,
        left: usize,
        used: &mut Vec<usize>,
        denom: BigUint,
        value: ExactScalar,
        total: &mut ExactScalar,
    ) {
        if i == ctx.runs.len() {
            let mut count = BigUint::one();
            for (c, (_, n)) in used.iter().zip(ctx.classes) {
                count *= factorial(*n) / factorial(n - c);
            }
            let term = value * ExactScalar::from(BigInt::from(count / denom));
            *total += &term;
            return;
        }
        if left == 0 {
            let next_left = ctx.runs.get(i + 1).map_or(0, |r| r.1);
            rec(ctx, i + 1, 0, next_left, used, denom, value, total);
            return;
        }
        if j == ctx.classes.len() {
            return;
        }
        let (ref c, n) = ctx.classes[j];
        let room = n - used[j];
        for x in 0..=left.min(room) {
            used[j] += x;
            let v = &value * &c.pow(ctx.runs[i].0 * x as u32);
            rec(ctx, i, j + 1, left - x, used, &denom * factorial(x), v, total);
            used[j] -= x;
        }
    }

    let ctx = Ctx { classes: &classes, runs: &runs };
    let first = runs.first().map_or(0, |r| r.1);
    rec(&ctx, 0, 0, first, &mut used, BigUint::one(), ExactScalar::one(), &mut total);
    total
}

/// `Σ_{y ∈ S_n·x} y^α` where `x` is given by its value classes.
pub fn permutation_orbit_sum(alpha: &[u32], classes: &[(ExactScalar, usize)]) -> ExactScalar {
    let n: usize = classes.iter().map(|c| c.1).sum();
    assert_eq!(alpha.len(), n, "exponent length must match the point");
    let active: Vec<u32> = alpha.iter().copied().filter(|&e| e > 0).collect();
    let mut remaining: Vec<usize> = classes.iter().map(|c| c.1).collect();
    let mut memo: HashMap<(usize, Vec<usize>), ExactScalar> = HashMap::new();

    fn rec(
        step: usize,
        active: &[u32],
        classes: &[(ExactScalar, usize)],
        remaining: &mut Vec<usize>,
        memo: &mut HashMap<(usize, Vec<usize>), ExactScalar>,
    ) -> ExactScalar {
        if step == active.len() {
            return ExactScalar::from(BigInt::from(multinomial(remaining)));
        }
        let key = (step, remaining.clone());
        if let Some(v) = memo.get(&key) {
            return v.clone();
        }
        let mut acc = ExactScalar::zero();
        for j in 0..classes.len() {
            if remaining[j] == 0 || classes[j].0.is_zero() {
                continue;
            }
            remaining[j] -= 1;
            let rest = rec(step + 1, active, classes, remaining, memo);
            remaining[j] += 1;
            if !rest.is_zero() {
                acc += &(classes[j].0.pow(active[step]) * rest);
            }
        }
        memo.insert(key, acc.clone());
        acc
    }

    rec(0, &active, classes, &mut remaining, &mut memo)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn reverse_lex_order() {
        let got: Vec<String> = partitions_of(4).iter().map(|p| p.to_string()).collect();
        assert_eq!(got, ["{4}", "{3,1}", "{2,2}", "{2,1,1}", "{1,1,1,1}"]);
        assert_eq!(partitions_of(10).len(), 42);
    }

    #[test]
    fn moments_small_cases() {
        let g0 = WeightExponent::uniform();
        // ∫ x_1 over the 2-simplex with mass 1 is 1/3.
        assert_eq!(monomial_moment(&[1, 0, 0], &g0), rational_from_i64(1, 3));
        assert_eq!(monomial_moment(&[0, 0, 0], &g0), Rational::one());
        // Σ x_i = 1 gives ∫ S_{1} = 1 for any γ.
        let gh = WeightExponent::chebyshev();
        assert_eq!(partition_integral(&p(&[1]), 6, &gh), Rational::one());
        // The sphere constant c_4 for five coordinates.
        assert_eq!(monomial_moment(&[4, 0, 0, 0], &gh), rational_from_i64(7, 128));
    }

    #[test]
    fn values_at_orbit_points() {
        assert_eq!(s_value_at_vk(&p(&[2, 1, 1]), 4), BigUint::from(12u32));
        assert_eq!(s_value_at_vk(&p(&[2, 1, 1]), 2), BigUint::zero());
        let a = ExactScalar::from_integer(5);
        let direct = {
            let mut pt = vec![a.clone()];
            pt.extend((0..3).map(|_| ExactScalar::one()));
            pt.extend((0..2).map(|_| ExactScalar::zero()));
            symmetric_function_value(&p(&[2, 1]), &pt)
        };
        assert_eq!(s_value_at_u(&p(&[2, 1]), &a, 3), direct);
        // 25*3 + 5*3 + 6
        assert_eq!(direct, ExactScalar::from_integer(96));
    }

    #[test]
    fn orbit_sum_counts_arrangements() {
        let classes = vec![(ExactScalar::from_integer(2), 1), (ExactScalar::zero(), 2)];
        // orbit of (2,0,0): x_1^3 sums to 8.
        assert_eq!(permutation_orbit_sum(&[3, 0, 0], &classes), ExactScalar::from_integer(8));
        assert_eq!(permutation_orbit_sum(&[0, 0, 0], &classes), ExactScalar::from_integer(3));
        assert_eq!(permutation_orbit_sum(&[1, 1, 0], &classes), ExactScalar::zero());
    }
}
