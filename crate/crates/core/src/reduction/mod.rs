//! Replacing permutation orbits by design blocks and sign orbits by
//! orthogonal-array rows.

mod design;
mod oa;

pub use design::{
    base_blocks_4_11_5_1, complete_design, cyclic_design, design_4_11_5_1, validate_design, CombinatorialDesign,
    DesignSpec,
};
pub use oa::{full_factorial, parity_array, validate_oa, with_sign_column, OaSpec, OrthogonalArray};

use num_bigint::{BigInt, BigUint};
use thiserror::Error;

use crate::analysis::{verify_exactness, VerifyError};
use crate::combinatorics::multiset_permutations;
use crate::rule::{CubatureRule, Domain, Exactness, Group, OrbitPoint, RuleError, WeightedOrbit};
use crate::scalar::ExactScalar;
use crate::symmetry::value_classes;

/// Provenance note on reduced rules whose exactness was not re-checked.
pub const UNVERIFIED: &str = "reduced-unverified";

/// Largest reduced rule that is built node by node.
pub const MAX_MATERIALIZED_NODES: u64 = 50_000;

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error("not a design: the {}-subset {subset:?} lies in {count} blocks, expected {expected}", subset.len())]
    InvalidDesign { subset: Vec<usize>, count: u64, expected: u64 },
    #[error("not an orthogonal array: columns {columns:?} show pattern {pattern:?} {count} times, expected {expected}")]
    InvalidOa { columns: Vec<usize>, pattern: Vec<i8>, count: usize, expected: usize },
    #[error("line {line}, column {column}: {message}")]
    Format { line: usize, column: usize, message: String },
    #[error("{0}")]
    Mismatch(String),
    #[error("orbit {orbit}: {reason}")]
    Unsuitable { orbit: usize, reason: String },
    #[error("reduced rule fails exactness at exponent {exponents:?}")]
    Verification { exponents: Vec<u32> },
    #[error("reduced rule would have {0} nodes; use the count-only mode")]
    TooLarge(BigUint),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Verify(VerifyError),
}

/// Which pieces of one orbit are replaced, by actual data.
#[derive(Debug, Clone, Copy)]
pub struct Assignment<'a> {
    pub orbit: usize,
    pub design: Option<&'a CombinatorialDesign>,
    pub oa: Option<&'a OrthogonalArray>,
}

impl<'a> Assignment<'a> {
    pub fn design(orbit: usize, design: &'a CombinatorialDesign) -> Self {
        Self { orbit, design: Some(design), oa: None }
    }

    pub fn oa(orbit: usize, oa: &'a OrthogonalArray) -> Self {
        Self { orbit, design: None, oa: Some(oa) }
    }

    pub fn spec(&self) -> SpecAssignment {
        SpecAssignment { orbit: self.orbit, design: self.design.map(|d| d.spec()), oa: self.oa.map(|o| o.spec()) }
    }
}

/// Same as [`Assignment`] with parameters only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpecAssignment {
    pub orbit: usize,
    pub design: Option<DesignSpec>,
    pub oa: Option<OaSpec>,
}

impl SpecAssignment {
    pub fn design(orbit: usize, design: DesignSpec) -> Self {
        Self { orbit, design: Some(design), oa: None }
    }
}

/// `(α, β, k)` for a point taking value `α` on exactly `k` coordinates and
/// `β` on the rest. With two candidate classes the one of size `want_k` wins.
fn two_valued(coords: &[ExactScalar], want_k: usize) -> Option<(ExactScalar, ExactScalar)> {
    let classes = value_classes(coords);
    match classes.as_slice() {
        [(a, n)] if *n == want_k => Some((a.clone(), ExactScalar::zero())),
        [(a, n), (b, _)] if *n == want_k => Some((a.clone(), b.clone())),
        [(b, _), (a, n)] if *n == want_k => Some((a.clone(), b.clone())),
        _ => None,
    }
}

fn index_of(rule: &CubatureRule) -> u32 {
    match (rule.domain(), rule.exactness()) {
        (Domain::Simplex, e) => e.value(),
        (Domain::Sphere, Exactness::Degree(n)) => n / 2,
        (Domain::Sphere, Exactness::Index(m)) => m / 2,
    }
}

fn check_design(rule: &CubatureRule, orbit: usize, spec: &DesignSpec) -> Result<(), ReductionError> {
    let o = &rule.orbits()[orbit];
    let unsuitable = |reason: String| ReductionError::Unsuitable { orbit, reason };
    if !matches!(o.point.group(), Group::Permutation | Group::SignedPermutation) {
        return Err(unsuitable(format!("a design needs a permutation orbit, not {}", o.point.group().name())));
    }
    if spec.v != rule.dim() + 1 {
        return Err(unsuitable(format!("{spec} has v = {}, the rule has {} coordinates", spec.v, rule.dim() + 1)));
    }
    let t = index_of(rule) as usize;
    if spec.t < t {
        return Err(unsuitable(format!("{spec} has strength {} < {t}", spec.t)));
    }
    if two_valued(o.point.coords(), spec.k).is_none() {
        return Err(unsuitable(format!("point is not two-valued with {} equal coordinates", spec.k)));
    }
    Ok(())
}

/// Which strength condition admits the array: `"full"` (strength `2t+1` or
/// all columns) or `"antipodal"` (strength `2t` plus closure under negation).
fn check_oa(rule: &CubatureRule, orbit: usize, spec: &OaSpec) -> Result<&'static str, ReductionError> {
    let o = &rule.orbits()[orbit];
    let unsuitable = |reason: String| ReductionError::Unsuitable { orbit, reason };
    if rule.domain() != Domain::Sphere || !matches!(o.point.group(), Group::SignedPermutation | Group::Sign) {
        return Err(unsuitable("sign replacement needs a full sign orbit on the sphere".into()));
    }
    let tau = o.point.support();
    if spec.columns != tau {
        return Err(unsuitable(format!("{spec} has {} columns, the point has {tau} nonzero coordinates", spec.columns)));
    }
    let Exactness::Degree(n) = rule.exactness() else {
        return Err(unsuitable("sign replacement needs a degree-exact rule".into()));
    };
    let n = n as usize;
    if spec.strength >= n.min(tau) {
        Ok("full")
    } else if spec.antipodal && spec.strength + 1 >= n.min(tau) {
        Ok("antipodal")
    } else {
        Err(unsuitable(format!("{spec} is too weak for degree {n}")))
    }
}

fn check_assignments(rule: &CubatureRule, assignments: &[SpecAssignment]) -> Result<Vec<&'static str>, ReductionError> {
    let mut seen = vec![false; rule.orbits().len()];
    let mut paths = Vec::new();
    for a in assignments {
        if a.orbit >= seen.len() {
            return Err(ReductionError::Mismatch(format!("orbit {} does not exist", a.orbit)));
        }
        if std::mem::replace(&mut seen[a.orbit], true) {
            return Err(ReductionError::Mismatch(format!("orbit {} assigned twice", a.orbit)));
        }
        if let Some(d) = &a.design {
            check_design(rule, a.orbit, d)?;
        }
        if let Some(o) = &a.oa {
            paths.push(check_oa(rule, a.orbit, o)?);
        }
    }
    Ok(paths)
}

/// Node count after the reduction, from the parameters alone.
pub fn reduced_node_count(rule: &CubatureRule, assignments: &[SpecAssignment]) -> Result<BigUint, ReductionError> {
    check_assignments(rule, assignments)?;
    let mut total = BigUint::default();
    for (i, o) in rule.orbits().iter().enumerate() {
        let Some(a) = assignments.iter().find(|a| a.orbit == i) else {
            total += o.point.cardinality();
            continue;
        };
        let images = match &a.design {
            Some(d) => BigUint::from(d.block_count()?),
            None => o.point.permutation_count(),
        };
        let signs = match (rule.domain(), &a.oa) {
            (Domain::Simplex, _) => BigUint::from(1u8),
            (Domain::Sphere, Some(oa)) => BigUint::from(oa.rows),
            (Domain::Sphere, None) => BigUint::from(1u8) << o.point.support(),
        };
        total += images * signs;
    }
    Ok(total)
}

/// Re-check exactness when the monomial count is within budget; otherwise
/// mark the rule unverified.
fn reverify(rule: CubatureRule) -> Result<CubatureRule, ReductionError> {
    match verify_exactness(&rule, rule.exactness()) {
        Ok(report) if report.passed => Ok(rule.with_provenance("reduced, exactness re-verified")),
        Ok(report) => Err(ReductionError::Verification {
            exponents: report.first_failure.map(|w| w.exponents).unwrap_or_default(),
        }),
        Err(VerifyError::BudgetExceeded { .. }) => Ok(rule.with_provenance(UNVERIFIED)),
        Err(e) => Err(ReductionError::Verify(e)),
    }
}

/// Replace each assigned simplex orbit `v^{(α,β)}` by one node per design
/// block (`α` on the block, `β` elsewhere) carrying weight `λ/b`.
pub fn victoir_simplex(rule: &CubatureRule, assignments: &[Assignment]) -> Result<CubatureRule, ReductionError> {
    if rule.domain() != Domain::Simplex {
        return Err(ReductionError::Mismatch("victoir_simplex needs a simplex rule".into()));
    }
    if assignments.iter().any(|a| a.design.is_none() || a.oa.is_some()) {
        return Err(ReductionError::Mismatch("simplex assignments take a design only".into()));
    }
    let specs: Vec<SpecAssignment> = assignments.iter().map(Assignment::spec).collect();
    let count = reduced_node_count(rule, &specs)?;
    if count > BigUint::from(MAX_MATERIALIZED_NODES) {
        return Err(ReductionError::TooLarge(count));
    }
    let mut orbits = Vec::new();
    for (i, o) in rule.orbits().iter().enumerate() {
        let Some(design) = assignments.iter().find(|a| a.orbit == i).and_then(|a| a.design) else {
            orbits.push(o.clone());
            continue;
        };
        let (alpha, beta) = two_valued(o.point.coords(), design.k()).expect("checked above");
        let w = &o.weight / ExactScalar::from_integer(design.block_count() as i64);
        for block in design.blocks() {
            let mut coords = vec![beta.clone(); design.v()];
            block.iter().for_each(|&j| coords[j] = alpha.clone());
            orbits.push(WeightedOrbit { point: OrbitPoint::simplex(Group::Explicit, coords)?, weight: w.clone() });
        }
    }
    let mut out = CubatureRule::new(Domain::Simplex, rule.dim(), rule.gamma().clone(), rule.exactness(), orbits)?;
    for p in rule.provenance() {
        out = out.with_provenance(p.clone());
    }
    reverify(out)
}

/// Replace the permutation part of assigned sphere orbits by design blocks
/// and the sign part by orthogonal-array rows, each node weighted
/// `λ / (images · rows)`.
pub fn victoir_sphere(rule: &CubatureRule, assignments: &[Assignment]) -> Result<CubatureRule, ReductionError> {
    if rule.domain() != Domain::Sphere {
        return Err(ReductionError::Mismatch("victoir_sphere needs a sphere rule".into()));
    }
    let specs: Vec<SpecAssignment> = assignments.iter().map(Assignment::spec).collect();
    let paths = check_assignments(rule, &specs)?;
    let count = reduced_node_count(rule, &specs)?;
    if count > BigUint::from(MAX_MATERIALIZED_NODES) {
        return Err(ReductionError::TooLarge(count));
    }
    let mut orbits = Vec::new();
    for (i, o) in rule.orbits().iter().enumerate() {
        let Some(a) = assignments.iter().find(|a| a.orbit == i) else {
            orbits.push(o.clone());
            continue;
        };
        let coords = o.point.coords();
        let images: Vec<Vec<ExactScalar>> = match (a.design, o.point.group()) {
            (Some(design), _) => {
                let (alpha, beta) = two_valued(coords, design.k()).expect("checked above");
                design
                    .blocks()
                    .iter()
                    .map(|block| {
                        let mut c = vec![beta.clone(); design.v()];
                        block.iter().for_each(|&j| c[j] = alpha.clone());
                        c
                    })
                    .collect()
            }
            (None, Group::SignedPermutation) => {
                let classes = value_classes(coords);
                let labels: Vec<usize> = classes.iter().enumerate().flat_map(|(i, c)| std::iter::repeat_n(i, c.1)).collect();
                multiset_permutations(&labels)
                    .into_iter()
                    .map(|perm| perm.into_iter().map(|i| classes[i].0.clone()).collect())
                    .collect()
            }
            (None, _) => vec![coords.to_vec()],
        };
        let tau = o.point.support();
        let rows: Vec<Vec<i8>> = match a.oa {
            Some(oa) => oa.rows().to_vec(),
            None => full_factorial(tau).rows().to_vec(),
        };
        let per_node = BigInt::from(images.len()) * BigInt::from(rows.len());
        let w = &o.weight / ExactScalar::from(per_node);
        for image in &images {
            for row in &rows {
                let mut signs = vec![1i8; image.len()];
                let mut r = row.iter();
                for (s, c) in signs.iter_mut().zip(image) {
                    if !c.is_zero() {
                        *s = *r.next().expect("row length equals support");
                    }
                }
                orbits.push(WeightedOrbit {
                    point: OrbitPoint::sphere(Group::SignedPoint(signs), image.clone())?,
                    weight: w.clone(),
                });
            }
        }
    }
    let mut out = CubatureRule::new(Domain::Sphere, rule.dim(), rule.gamma().clone(), rule.exactness(), orbits)?;
    for p in rule.provenance() {
        out = out.with_provenance(p.clone());
    }
    if paths.contains(&"antipodal") {
        out = out.with_provenance("orthogonal array admitted by strength 2t with antipodal rows");
    }
    reverify(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::WeightExponent;

    fn q(n: i64, d: i64) -> ExactScalar {
        ExactScalar::from_ratio(n, d)
    }

    fn orbit(coords: Vec<ExactScalar>, weight: ExactScalar) -> WeightedOrbit {
        WeightedOrbit { point: OrbitPoint::simplex(Group::Permutation, coords).unwrap(), weight }
    }

    /// Index-4 rule for d = 10 on the centroid, the vertices, `v_5/5` and
    /// `(5,1,…,1)/15`; 485 nodes.
    fn rule_485() -> CubatureRule {
        let fill = |head: Vec<ExactScalar>, rest: ExactScalar| {
            let mut c = head;
            c.resize(11, rest);
            c
        };
        let orbits = vec![
            orbit(vec![q(1, 11); 11], q(1331, 17472)),
            orbit(fill(vec![q(1, 1)], q(0, 1)), q(11, 12012)),
            orbit(fill(vec![q(1, 5); 5], q(0, 1)), q(66 * 125, 24024)),
            orbit(fill(vec![q(5, 15)], q(1, 15)), q(11 * 3375, 64064)),
        ];
        CubatureRule::new(Domain::Simplex, 10, WeightExponent::uniform(), Exactness::Index(4), orbits).unwrap()
    }

    fn v5(rule: &CubatureRule) -> usize {
        rule.orbits().iter().position(|o| o.point.support() == 5).unwrap()
    }

    #[test]
    fn example_rule_reduces_to_89_nodes() {
        let rule = rule_485();
        assert_eq!(rule.node_count_u64(), 485);
        assert!(verify_exactness(&rule, Exactness::Index(4)).unwrap().passed);
        let design = design_4_11_5_1();
        let reduced = victoir_simplex(&rule, &[Assignment::design(v5(&rule), &design)]).unwrap();
        assert_eq!(reduced.node_count_u64(), 89);
        let mut weights: Vec<String> = reduced.orbits().iter().map(|o| o.node_weight().to_string()).collect();
        weights.sort();
        weights.dedup();
        let mut want = vec!["1331/17472", "1/12012", "125/24024", "3375/64064"];
        want.sort();
        assert_eq!(weights, want);
        assert!(reduced.provenance().iter().all(|p| p != UNVERIFIED));
        let count = reduced_node_count(&rule, &[SpecAssignment::design(v5(&rule), design.spec())]).unwrap();
        assert_eq!(count, BigUint::from(89u32));
    }

    #[test]
    fn weak_or_misfit_designs_rejected() {
        let rule = rule_485();
        let i = v5(&rule);
        for spec in [DesignSpec::new(3, 11, 5, 4), DesignSpec::new(4, 11, 4, 1), DesignSpec::new(4, 12, 5, 1)] {
            let r = reduced_node_count(&rule, &[SpecAssignment::design(i, spec)]);
            assert!(matches!(r, Err(ReductionError::Unsuitable { .. })), "{spec}: {r:?}");
        }
        let twice = [SpecAssignment::design(i, design_4_11_5_1().spec()); 2];
        assert!(reduced_node_count(&rule, &twice).is_err());
    }

    #[test]
    fn complete_design_keeps_the_rule() {
        let rule = rule_485();
        let full = complete_design(11, 5, 4).unwrap();
        let reduced = victoir_simplex(&rule, &[Assignment::design(v5(&rule), &full)]).unwrap();
        assert_eq!(reduced.node_count(), rule.node_count());
    }

    /// d = 3 centroid, degree 3 on the sphere: 16 sign patterns become 8.
    #[test]
    fn parity_array_halves_centroid() {
        let orbit = WeightedOrbit {
            point: OrbitPoint::simplex(Group::Permutation, vec![q(1, 4); 4]).unwrap(),
            weight: q(1, 1),
        };
        let simplex = CubatureRule::new(Domain::Simplex, 3, WeightExponent::uniform(), Exactness::Degree(1), vec![orbit]).unwrap();
        let sphere = simplex.simplex_to_sphere().unwrap();
        assert_eq!(sphere.node_count_u64(), 16);
        let oa = parity_array(4);
        let reduced = victoir_sphere(&sphere, &[Assignment::oa(0, &oa)]).unwrap();
        assert_eq!(reduced.node_count_u64(), 8);
        assert!(verify_exactness(&reduced, Exactness::Degree(3)).unwrap().passed);
        let same = victoir_sphere(&sphere, &[Assignment::oa(0, &full_factorial(4))]).unwrap();
        assert_eq!(same.node_count(), sphere.node_count());
        let weak = parity_array(3);
        assert!(victoir_sphere(&sphere, &[Assignment::oa(0, &with_sign_column(&weak))]).is_err());
    }
}
