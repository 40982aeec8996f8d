//! Exactness checks by direct monomial integration and by symmetric invariants.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::combinatorics::{binomial, compositions};
use crate::rule::{CubatureRule, Domain, Exactness, Group, RuleError};
use crate::scalar::{ExactScalar, Rational};
use crate::symmetry::{partitions_of, symmetric_function_value, MomentTable, Partition};

/// Largest number of individual monomials enumerated for rules that are not
/// fully symmetric.
pub const MONOMIAL_BUDGET: u64 = 1_000_000;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("verification needs {needed} monomial evaluations, over the budget of {MONOMIAL_BUDGET}")]
    BudgetExceeded { needed: BigUint },
    #[error("invariant check needs a fully symmetric rule")]
    NotSymmetric,
    #[error(transparent)]
    Rule(#[from] RuleError),
}

/// Rational part plus coefficients of `√D` for distinct square-free `D`.
/// Since `1, √D_1, √D_2, …` are linearly independent over ℚ, equality with a
/// single `ExactScalar` is decided coefficient by coefficient.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SurdSum {
    rational: Rational,
    surds: BTreeMap<u64, Rational>,
}

impl SurdSum {
    pub fn add(&mut self, x: &ExactScalar) {
        self.rational += x.rational_part();
        if !x.is_rational() {
            *self.surds.entry(x.discriminant()).or_insert_with(Rational::zero) += x.surd_part();
        }
    }

    pub fn equals(&self, target: &ExactScalar) -> bool {
        if &self.rational != target.rational_part() {
            return false;
        }
        let td = target.discriminant();
        if !target.is_rational() && !self.surds.contains_key(&td) {
            return false;
        }
        self.surds.iter().all(|(&d, b)| if d == td { b == target.surd_part() } else { b.is_zero() })
    }

    pub fn is_single_field(&self) -> bool {
        self.surds.values().filter(|b| !b.is_zero()).count() <= 1
    }
}

impl std::fmt::Display for SurdSum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut s = crate::scalar::format_rational(&self.rational);
        for (d, b) in &self.surds {
            if !b.is_zero() {
                s.push_str(&format!(" + ({})*sqrt({d})", crate::scalar::format_rational(b)));
            }
        }
        f.write_str(&s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub exponents: Vec<u32>,
    pub expected: ExactScalar,
    pub computed: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// One representative exponent per permutation class.
    ExponentClasses,
    /// Every monomial individually.
    FullEnumeration,
}

#[derive(Debug, Clone)]
pub struct ExactnessReport {
    pub target: Exactness,
    pub passed: bool,
    /// Number of individual monomials whose integrals were confirmed or refuted.
    pub monomials_covered: BigUint,
    pub method: Method,
    pub first_failure: Option<Witness>,
}

#[derive(Debug, Clone)]
pub struct SharpnessReport {
    pub stated: ExactnessReport,
    pub next: ExactnessReport,
}

impl SharpnessReport {
    /// Exact at the stated level and not one level higher.
    pub fn is_sharp(&self) -> bool {
        self.stated.passed && !self.next.passed
    }
}

#[derive(Debug, Clone)]
pub struct InvariantReport {
    pub passed: bool,
    /// `Σ λ S_ℓ - ∫ S_ℓ` for every partition checked.
    pub residuals: Vec<(Partition, ExactScalar)>,
}

/// Exponent blocks `(total degree, last coordinate forced to zero)`.
fn degree_blocks(rule: &CubatureRule, target: Exactness) -> Vec<(u32, bool)> {
    match (rule.domain(), target) {
        (_, Exactness::Index(t)) => vec![(t, false)],
        (Domain::Simplex, Exactness::Degree(n)) => (0..=n).map(|m| (m, true)).collect(),
        (Domain::Sphere, Exactness::Degree(n)) => (0..=n).map(|m| (m, false)).collect(),
    }
}

fn expected_value(rule: &CubatureRule, moments: &MomentTable, alpha: &[u32]) -> ExactScalar {
    match rule.domain() {
        Domain::Simplex => ExactScalar::from(moments.monomial(alpha)),
        Domain::Sphere => {
            if alpha.iter().any(|a| a % 2 == 1) {
                ExactScalar::zero()
            } else {
                let half: Vec<u32> = alpha.iter().map(|a| a / 2).collect();
                ExactScalar::from(moments.monomial(&half))
            }
        }
    }
}

/// Contribution of one orbit to `Σ w x^α`.
fn orbit_contribution(rule: &CubatureRule, idx: usize, alpha: &[u32]) -> Result<ExactScalar, RuleError> {
    let o = &rule.orbits()[idx];
    let sum = o.point.monomial_sum(alpha)?;
    if sum.is_zero() {
        return Ok(sum);
    }
    Ok(o.node_weight() * sum)
}

fn evaluate(
    rule: &CubatureRule,
    alpha: &[u32],
    cache: &Mutex<HashMap<Vec<u32>, Vec<ExactScalar>>>,
) -> Result<SurdSum, RuleError> {
    let mut key = alpha.to_vec();
    key.sort_unstable_by(|a, b| b.cmp(a));
    let symmetric: Vec<usize> = rule
        .orbits()
        .iter()
        .enumerate()
        .filter(|(_, o)| {
            matches!(
                o.point.group(),
                Group::Permutation | Group::SignedPermutation | Group::PodalSignedPermutation
            )
        })
        .map(|(i, _)| i)
        .collect();
    let cached = cache.lock().expect("cache poisoned").get(&key).cloned();
    let sym_values = match cached {
        Some(v) => v,
        None => {
            let v = symmetric
                .iter()
                .map(|&i| orbit_contribution(rule, i, &key))
                .collect::<Result<Vec<_>, _>>()?;
            cache.lock().expect("cache poisoned").insert(key, v.clone());
            v
        }
    };
    let mut acc = SurdSum::default();
    for v in &sym_values {
        acc.add(v);
    }
    for i in (0..rule.orbits().len()).filter(|i| !symmetric.contains(i)) {
        acc.add(&orbit_contribution(rule, i, alpha)?);
    }
    Ok(acc)
}

/// Check `Σ w f(x) = ∫ f` for every monomial `f` covered by `target`.
pub fn verify_exactness(rule: &CubatureRule, target: Exactness) -> Result<ExactnessReport, VerifyError> {
    let n = rule.dim() + 1;
    let moments = MomentTable::new(rule.dim(), rule.gamma().clone());
    let blocks = degree_blocks(rule, target);
    let cache = Mutex::new(HashMap::new());

    if rule.is_fully_symmetric() {
        // Every exponent in a class gives the same sum and the same moment.
        let mut jobs: Vec<(Vec<u32>, BigUint)> = Vec::new();
        for &(m, last_zero) in &blocks {
            let slots = if last_zero { n - 1 } else { n };
            for part in partitions_of(m) {
                if let Some(alpha) = part.padded(n) {
                    if part.len() <= slots {
                        jobs.push((alpha, part.monomial_count(slots)));
                    }
                }
            }
        }
        let results = jobs
            .par_iter()
            .map(|(alpha, _)| {
                let got = evaluate(rule, alpha, &cache)?;
                let want = expected_value(rule, &moments, alpha);
                Ok((got.equals(&want), got, want))
            })
            .collect::<Result<Vec<_>, RuleError>>()?;
        let covered = jobs.iter().map(|j| j.1.clone()).sum();
        let first_failure = results.iter().zip(&jobs).find(|(r, _)| !r.0).map(|(r, j)| Witness {
            exponents: j.0.clone(),
            expected: r.2.clone(),
            computed: r.1.to_string(),
        });
        return Ok(ExactnessReport {
            target,
            passed: first_failure.is_none(),
            monomials_covered: covered,
            method: Method::ExponentClasses,
            first_failure,
        });
    }

    let needed: BigUint = blocks
        .iter()
        .map(|&(m, last_zero)| {
            let slots = if last_zero { n - 1 } else { n };
            binomial(m as usize + slots - 1, slots - 1)
        })
        .sum();
    if needed > BigUint::from(MONOMIAL_BUDGET) {
        return Err(VerifyError::BudgetExceeded { needed });
    }
    let mut alphas: Vec<Vec<u32>> = Vec::new();
    for &(m, last_zero) in &blocks {
        if last_zero {
            for mut a in compositions(m, n - 1) {
                a.push(0);
                alphas.push(a);
            }
        } else {
            alphas.extend(compositions(m, n));
        }
    }
    let results = alphas
        .par_iter()
        .map(|alpha| {
            let got = evaluate(rule, alpha, &cache)?;
            let want = expected_value(rule, &moments, alpha);
            Ok((got.equals(&want), got, want))
        })
        .collect::<Result<Vec<_>, RuleError>>()?;
    let first_failure = results.iter().zip(&alphas).find(|(r, _)| !r.0).map(|(r, a)| Witness {
        exponents: a.clone(),
        expected: r.2.clone(),
        computed: r.1.to_string(),
    });
    Ok(ExactnessReport {
        target,
        passed: first_failure.is_none(),
        monomials_covered: BigUint::from(alphas.len()),
        method: Method::FullEnumeration,
        first_failure,
    })
}

pub fn verify_index_exactness(rule: &CubatureRule, t: u32) -> Result<ExactnessReport, VerifyError> {
    verify_exactness(rule, Exactness::Index(t))
}

pub fn verify_degree_exactness(rule: &CubatureRule, n: u32) -> Result<ExactnessReport, VerifyError> {
    verify_exactness(rule, Exactness::Degree(n))
}

/// The next exactness level above `e`. Half-orbit sphere rules only see even
/// degrees, so their index steps by two.
pub fn next_level(rule: &CubatureRule, e: Exactness) -> Exactness {
    match (rule.domain(), e) {
        (Domain::Sphere, Exactness::Index(m)) => Exactness::Index(m + 2),
        (_, Exactness::Index(t)) => Exactness::Index(t + 1),
        (_, Exactness::Degree(n)) => Exactness::Degree(n + 1),
    }
}

pub fn sharpness(rule: &CubatureRule) -> Result<SharpnessReport, VerifyError> {
    let stated = verify_exactness(rule, rule.exactness())?;
    let next = verify_exactness(rule, next_level(rule, rule.exactness()))?;
    Ok(SharpnessReport { stated, next })
}

/// Check the rule against every monomial symmetric function `S_ℓ` of the
/// relevant degrees, evaluated at orbit representatives. This route shares no
/// code with [`verify_exactness`] beyond the moment formula.
pub fn verify_invariants(rule: &CubatureRule, target: Exactness) -> Result<InvariantReport, VerifyError> {
    if !rule.is_fully_symmetric() {
        return Err(VerifyError::NotSymmetric);
    }
    let parts: Vec<Partition> = match (rule.domain(), target) {
        (Domain::Simplex, Exactness::Index(t)) => partitions_of(t),
        (Domain::Simplex, Exactness::Degree(n)) => (0..=n).flat_map(partitions_of).collect(),
        (Domain::Sphere, Exactness::Index(m)) => {
            if m % 2 == 1 {
                Vec::new()
            } else {
                partitions_of(m / 2)
            }
        }
        (Domain::Sphere, Exactness::Degree(n)) => (0..=n / 2).flat_map(partitions_of).collect(),
    };
    let d = rule.dim();
    let residuals: Vec<(Partition, ExactScalar)> = parts
        .into_par_iter()
        .map(|part| {
            let mut acc = ExactScalar::zero();
            for o in rule.orbits() {
                acc += &(&o.weight * symmetric_function_value(&part, o.point.coords()));
            }
            let want = crate::symmetry::partition_integral(&part, d, rule.gamma());
            let r = acc - ExactScalar::from(want);
            (part, r)
        })
        .collect();
    Ok(InvariantReport { passed: residuals.iter().all(|r| r.1.is_zero()), residuals })
}

/// Number of monomials of total degree `m` in `n` variables.
pub fn monomial_total(n: usize, m: u32) -> u64 {
    binomial(m as usize + n - 1, n - 1).to_u64().unwrap_or(u64::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rule::assemble_rule;
    use crate::symmetry::WeightExponent;

    fn q(n: i64, d: i64) -> ExactScalar {
        ExactScalar::from_ratio(n, d)
    }

    fn d5_rule() -> CubatureRule {
        let ks = [6, 1, 2, 3];
        let coef = [q(0, 1), q(1, 112), q(0, 1), q(15, 56 * 81), q(81, 112 * 6561)];
        assemble_rule(5, &WeightExponent::uniform(), 4, &ks, 5, &q(4, 1), &coef).unwrap()
    }

    #[test]
    fn known_rule_is_sharp() {
        let r = d5_rule();
        let s = sharpness(&r).unwrap();
        assert!(s.is_sharp());
        assert_eq!(s.stated.monomials_covered, BigUint::from(126u32));
        assert!(verify_invariants(&r, Exactness::Index(4)).unwrap().passed);
        assert!(!verify_invariants(&r, Exactness::Index(5)).unwrap().passed);
    }

    #[test]
    fn sphere_lift_verifies_at_odd_degree() {
        let s = d5_rule().simplex_to_sphere().unwrap();
        let rep = verify_degree_exactness(&s, 9).unwrap();
        assert!(rep.passed);
        assert!(!verify_degree_exactness(&s, 10).unwrap().passed);
        let half = s.antipodal_reduce().unwrap();
        assert!(verify_index_exactness(&half, 8).unwrap().passed);
        assert!(!verify_index_exactness(&half, 10).unwrap().passed);
    }

    #[test]
    fn surd_sum_equality() {
        let mut s = SurdSum::default();
        s.add(&"1/2 + sqrt(2)".parse().unwrap());
        s.add(&"-sqrt(2)".parse().unwrap());
        s.add(&"sqrt(3)".parse().unwrap());
        assert!(!s.equals(&q(1, 2)));
        s.add(&"-sqrt(3)".parse().unwrap());
        assert!(s.equals(&q(1, 2)));
    }
}
