//! Weight solvers for the orbit families `v_{k_1}, …, v_{k_n}, u_{a,p}`.
//!
//! The unknowns are the unnormalised coefficients `A_j`; the total orbit
//! weights are `λ_j = A_j k_j^t` and `λ_u = A_u (a+p)^t`.

mod family;
mod obstruction;

use thiserror::Error;

use crate::linalg::{self, LinalgError};
use crate::poly::Poly;
use crate::rule::{assemble_orbits, CubatureRule, Domain, Exactness, RuleError};
use crate::scalar::{ExactScalar, Rational};
use crate::symmetry::{partition_integral, partitions_of, s_value_at_u, s_value_at_vk, Partition, WeightExponent};

pub use family::{candidate_a, search_positive, Family, SearchConfig, SearchHit};
pub use obstruction::{index6_obstruction, p4_certificate, ObstructionReport, P4Certificate, Verdict};

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("degenerate parameter: {0}")]
    Degenerate(String),
    #[error("coefficient matrix is singular; dependent orbit column(s) {0:?}")]
    Singular(Vec<usize>),
    #[error("moment equations are inconsistent for these orbits")]
    Inconsistent,
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("no candidate value of a for {0}")]
    NoCandidate(String),
    #[error(transparent)]
    Rule(#[from] RuleError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Degree4Problem {
    pub d: usize,
    pub gamma: WeightExponent,
    pub ks: Vec<usize>,
    pub p: usize,
    pub a: ExactScalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Degree5Problem {
    pub d: usize,
    pub gamma: WeightExponent,
    pub ks: Vec<usize>,
    pub p: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSolution {
    pub a: ExactScalar,
    /// `A_1, …, A_n, A_u`.
    pub coefficients: Vec<ExactScalar>,
    /// `λ_1, …, λ_n, λ_u`, summing to one.
    pub weights: Vec<ExactScalar>,
    /// Assembled simplex rule; zero weights are dropped, negative ones kept.
    pub rule: CubatureRule,
}

impl RuleSolution {
    /// Every weight is non-negative (zeros are dropped from the rule).
    pub fn is_positive(&self) -> bool {
        self.weights.iter().all(|w| !w.is_negative())
    }

    /// Indices of negative weights.
    pub fn negative(&self) -> Vec<usize> {
        self.weights.iter().enumerate().filter(|(_, w)| w.is_negative()).map(|(i, _)| i).collect()
    }
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn moment(part: &[u32], d: usize, gamma: &WeightExponent) -> Rational {
    partition_integral(&Partition::new(part.to_vec()).expect("static partition"), d, gamma)
}

fn check_a(a: &ExactScalar) -> Result<(), ConstructError> {
    if a.is_zero() || a.is_one() {
        return Err(ConstructError::Degenerate(format!("a = {a}")));
    }
    if a.is_negative() {
        return Err(ConstructError::Degenerate(format!("a = {a} is negative")));
    }
    Ok(())
}

fn check_shape(d: usize, ks: &[usize], p: usize) -> Result<(), ConstructError> {
    if d == 0 {
        return Err(ConstructError::InvalidProblem("d must be at least 1".into()));
    }
    if let Some(k) = ks.iter().find(|&&k| k == 0 || k > d + 1) {
        return Err(ConstructError::InvalidProblem(format!("k = {k} outside 1..={}", d + 1)));
    }
    if p == 0 || p > d {
        return Err(ConstructError::InvalidProblem(format!("p = {p} outside 1..={d}")));
    }
    Ok(())
}

/// `A_5 = (m_{3,1} − 2 m_{2,2}) / (a (a−1)² p)`.
pub fn a5_weight(d: usize, gamma: &WeightExponent, p: usize, a: &ExactScalar) -> Result<ExactScalar, ConstructError> {
    if a.is_zero() || a.is_one() {
        return Err(ConstructError::Degenerate(format!("a = {a}")));
    }
    if p == 0 {
        return Err(ConstructError::InvalidProblem("p must be positive".into()));
    }
    let k = moment(&[3, 1], d, gamma) - moment(&[2, 2], d, gamma) * q(2);
    let am1 = a - ExactScalar::one();
    let den = a * &am1 * &am1 * ExactScalar::from_integer(p as i64);
    Ok(ExactScalar::from(k) / den)
}

/// Distinct `k` values in first-seen order, and the column of each input index.
fn merge_columns(ks: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut distinct: Vec<usize> = Vec::new();
    let mut column = Vec::with_capacity(ks.len());
    for &k in ks {
        match distinct.iter().position(|&x| x == k) {
            Some(c) => column.push(c),
            None => {
                column.push(distinct.len());
                distinct.push(k);
            }
        }
    }
    (distinct, column)
}

/// Solve `Σ_j A_j S_ℓ(v_{k_j}) = m_ℓ − A_u S_ℓ(u)` over all partitions of `t`.
/// Duplicate `k` share one unknown reported under the first index.
fn solve_coefficients(
    d: usize,
    gamma: &WeightExponent,
    t: u32,
    ks: &[usize],
    p: usize,
    a: &ExactScalar,
    a_u: &ExactScalar,
) -> Result<Vec<ExactScalar>, ConstructError> {
    let (distinct, column) = merge_columns(ks);
    let mut matrix = Vec::new();
    let mut rhs = Vec::new();
    for part in partitions_of(t) {
        let row: Vec<ExactScalar> =
            distinct.iter().map(|&k| ExactScalar::from(num_bigint::BigInt::from(s_value_at_vk(&part, k)))).collect();
        let b = ExactScalar::from(partition_integral(&part, d, gamma)) - a_u * s_value_at_u(&part, a, p);
        if row.iter().all(|x| x.is_zero()) && b.is_zero() {
            continue;
        }
        matrix.push(row);
        rhs.push(b);
    }
    let x = linalg::solve(&matrix, &rhs).map_err(|e| match e {
        LinalgError::Singular(free) => ConstructError::Singular(
            free.iter().map(|&c| column.iter().position(|&x| x == c).unwrap_or(c)).collect(),
        ),
        LinalgError::Inconsistent(_) => ConstructError::Inconsistent,
        LinalgError::Dimension(m) => ConstructError::InvalidProblem(m),
    })?;
    Ok(ks
        .iter()
        .enumerate()
        .map(|(i, _)| {
            let c = column[i];
            if column.iter().position(|&x| x == c) == Some(i) {
                x[c].clone()
            } else {
                ExactScalar::zero()
            }
        })
        .collect())
}

fn finish(
    d: usize,
    gamma: &WeightExponent,
    t: u32,
    ks: &[usize],
    p: usize,
    a: ExactScalar,
    mut coefficients: Vec<ExactScalar>,
    a_u: ExactScalar,
) -> Result<RuleSolution, ConstructError> {
    coefficients.push(a_u);
    let mut weights: Vec<ExactScalar> = ks
        .iter()
        .zip(&coefficients)
        .map(|(&k, c)| c * ExactScalar::from_integer(k as i64).pow(t))
        .collect();
    weights.push(&coefficients[ks.len()] * (&a + ExactScalar::from_integer(p as i64)).pow(t));
    let orbits = assemble_orbits(d, t, ks, p, &a, &coefficients)?;
    let rule = CubatureRule::new(Domain::Simplex, d, gamma.clone(), Exactness::Index(t), orbits)?;
    Ok(RuleSolution { a, coefficients, weights, rule })
}

/// Index-4 rule for a given `a`.
pub fn solve_degree4(problem: &Degree4Problem) -> Result<RuleSolution, ConstructError> {
    let Degree4Problem { d, gamma, ks, p, a } = problem;
    check_shape(*d, ks, *p)?;
    check_a(a)?;
    let a5 = a5_weight(*d, gamma, *p, a)?;
    let coefficients = solve_coefficients(*d, gamma, 4, ks, *p, a, &a5)?;
    finish(*d, gamma, 4, ks, *p, a.clone(), coefficients, a5)
}

/// The `a` and `A_6` forced by the index-5 relations:
/// `a = (p−1)/2 · (m_{4,1}−m_{3,2})/(m_{3,1,1}−m_{2,2,1}) − 1` and
/// `A_6 = (m_{4,1}−m_{3,2}) / (p a (a−1)² (a+1))`.
pub fn degree5_parameters(d: usize, gamma: &WeightExponent, p: usize) -> Result<(ExactScalar, ExactScalar), ConstructError> {
    if d < 2 {
        return Err(ConstructError::InvalidProblem("index 5 needs d ≥ 2".into()));
    }
    if p == 0 || p > d {
        return Err(ConstructError::InvalidProblem(format!("p = {p} outside 1..={d}")));
    }
    let e1 = moment(&[4, 1], d, gamma) - moment(&[3, 2], d, gamma);
    let e2 = moment(&[3, 1, 1], d, gamma) - moment(&[2, 2, 1], d, gamma);
    if e2 == Rational::from_integer(0.into()) {
        return Err(ConstructError::Degenerate("m_{3,1,1} = m_{2,2,1}".into()));
    }
    let a = Rational::new((p as i64 - 1).into(), 2.into()) * &e1 / e2 - q(1);
    if a == q(0) || a == q(1) || a == q(-1) {
        return Err(ConstructError::Degenerate(format!("derived a = {}", crate::scalar::format_rational(&a))));
    }
    let den = q(p as i64) * &a * (&a - q(1)) * (&a - q(1)) * (&a + q(1));
    Ok((ExactScalar::from(a), ExactScalar::from(e1 / den)))
}

/// Index-5 rule; `a` is determined by `d`, `γ` and `p`.
pub fn solve_degree5(problem: &Degree5Problem) -> Result<RuleSolution, ConstructError> {
    let Degree5Problem { d, gamma, ks, p } = problem;
    check_shape(*d, ks, *p)?;
    let (a, a6) = degree5_parameters(*d, gamma, *p)?;
    check_a(&a)?;
    let coefficients = solve_coefficients(*d, gamma, 5, ks, *p, &a, &a6)?;
    finish(*d, gamma, 5, ks, *p, a, coefficients, a6)
}

/// `S_ℓ(a, 1^p, 0, …)` as a polynomial in `a`.
fn u_polynomial(part: &Partition, p: usize) -> Poly {
    let runs = part.runs();
    let lens: Vec<usize> = runs.iter().map(|&(_, c)| c).collect();
    let r = part.len();
    let mut coeffs = vec![Rational::from_integer(0.into()); part.parts().first().copied().unwrap_or(0) as usize + 1];
    for (j, &(e, _)) in runs.iter().enumerate() {
        let mut reduced = lens.clone();
        reduced[j] -= 1;
        let count = crate::combinatorics::multinomial(&reduced) * crate::combinatorics::binomial(p, r - 1);
        coeffs[e as usize] += Rational::from_integer(count.into());
    }
    coeffs[0] += Rational::from_integer((crate::combinatorics::multinomial(&lens) * crate::combinatorics::binomial(p, r)).into());
    Poly::new(coeffs)
}

/// Values of `a > 0`, `a ≠ 1` at which the index-4 coefficient of orbit
/// `target` (an index into `ks`) vanishes. Roots outside ℚ or a single
/// quadratic field are not reported.
pub fn zero_weight_parameters(
    d: usize,
    gamma: &WeightExponent,
    ks: &[usize],
    p: usize,
    target: usize,
) -> Result<Vec<ExactScalar>, ConstructError> {
    check_shape(d, ks, p)?;
    if target >= ks.len() {
        return Err(ConstructError::InvalidProblem(format!("orbit {target} does not exist")));
    }
    let (distinct, column) = merge_columns(ks);
    if column.iter().position(|&c| c == column[target]) != Some(target) {
        return Err(ConstructError::InvalidProblem(format!("orbit {target} duplicates an earlier k")));
    }
    // A square system: the {3,1} row is the one fixed by A_5.
    let parts: Vec<Partition> = partitions_of(4).into_iter().filter(|l| l.parts() != [3, 1]).collect();
    let matrix: Vec<Vec<ExactScalar>> = parts
        .iter()
        .map(|l| distinct.iter().map(|&k| ExactScalar::from(num_bigint::BigInt::from(s_value_at_vk(l, k)))).collect())
        .collect();
    let polys: Vec<Poly> = parts.iter().map(|l| u_polynomial(l, p)).collect();
    let mut columns = vec![parts.iter().map(|l| ExactScalar::from(partition_integral(l, d, gamma))).collect::<Vec<_>>()];
    for e in 0..=4 {
        columns.push(
            polys.iter().map(|u| ExactScalar::from(u.coeffs().get(e).cloned().unwrap_or_else(|| q(0)))).collect(),
        );
    }
    let sol = linalg::solve_many(&matrix, &columns).map_err(|e| match e {
        LinalgError::Singular(free) => ConstructError::Singular(free),
        _ => ConstructError::Inconsistent,
    })?;
    let c = column[target];
    let rat = |x: &ExactScalar| x.as_rational().cloned().expect("rational moments give rational solutions");
    let w = Poly::new((0..=4).map(|e| rat(&sol[e + 1][c])).collect());
    let k = moment(&[3, 1], d, gamma) - moment(&[2, 2], d, gamma) * q(2);
    let cubic = &Poly::from_i64(&[0, 1, -2, 1]).scale(&(q(p as i64) * rat(&sol[0][c]))) - &w.scale(&k);
    if cubic.is_zero() {
        return Err(ConstructError::Degenerate("coefficient vanishes identically in a".into()));
    }
    let (roots, _) = cubic.quadratic_roots();
    let mut out: Vec<ExactScalar> = roots.into_iter().filter(|r| r.is_positive() && !r.is_one()).collect();
    out.sort_by(|x, y| x.to_f64().total_cmp(&y.to_f64()));
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{sharpness, verify_index_exactness};

    fn r(n: i64, d: i64) -> ExactScalar {
        ExactScalar::from_ratio(n, d)
    }

    fn weights(xs: &[(i64, i64)]) -> Vec<ExactScalar> {
        xs.iter().map(|&(n, d)| r(n, d)).collect()
    }

    #[test]
    fn d5_rule_has_32_nodes() {
        let s = solve_degree4(&Degree4Problem {
            d: 5,
            gamma: WeightExponent::uniform(),
            ks: vec![6, 1, 2, 3],
            p: 5,
            a: r(4, 1),
        })
        .unwrap();
        assert_eq!(s.weights, weights(&[(0, 1), (1, 112), (0, 1), (15, 56), (81, 112)]));
        assert_eq!(s.rule.node_count_u64(), 32);
        assert!(sharpness(&s.rule).unwrap().is_sharp());
    }

    #[test]
    fn a5_matches_quoted_value() {
        let a5 = a5_weight(4, &WeightExponent::uniform(), 4, &r(6, 1)).unwrap();
        assert_eq!(a5, r(1, 25200));
        assert!(a5_weight(4, &WeightExponent::uniform(), 4, &r(1, 1)).is_err());
    }

    #[test]
    fn degree5_duplicate_k_merges() {
        let s = solve_degree5(&Degree5Problem { d: 3, gamma: WeightExponent::uniform(), ks: vec![4, 1, 2, 3, 4], p: 3 })
            .unwrap();
        assert_eq!(s.a, r(5, 1));
        assert_eq!(s.weights, weights(&[(16, 105), (1, 70), (4, 35), (81, 350), (0, 1), (256, 525)]));
        assert_eq!(s.rule.node_count_u64(), 19);
        assert!(verify_index_exactness(&s.rule, 5).unwrap().passed);
    }

    #[test]
    fn zero_weight_roots_recover_known_a() {
        let g = WeightExponent::uniform();
        let roots = zero_weight_parameters(4, &g, &[5, 1, 2, 4], 4, 1).unwrap();
        assert!(roots.contains(&r(6, 1)), "{roots:?}");
        for a in roots {
            let s = solve_degree4(&Degree4Problem { d: 4, gamma: g.clone(), ks: vec![5, 1, 2, 4], p: 4, a }).unwrap();
            assert!(s.weights[1].is_zero());
        }
    }

    #[test]
    fn bad_parameters_rejected() {
        let base = Degree4Problem { d: 4, gamma: WeightExponent::uniform(), ks: vec![5, 1, 2, 4], p: 4, a: r(1, 1) };
        assert!(matches!(solve_degree4(&base), Err(ConstructError::Degenerate(_))));
        let wide = Degree4Problem { ks: vec![6, 1, 2, 4], a: r(6, 1), ..base.clone() };
        assert!(matches!(solve_degree4(&wide), Err(ConstructError::InvalidProblem(_))));
        let p0 = Degree4Problem { p: 0, a: r(6, 1), ..base };
        assert!(matches!(solve_degree4(&p0), Err(ConstructError::InvalidProblem(_))));
    }
}
