//! Orbit-compressed cubature rules on the simplex and the sphere.
//!
//! Simplex points are stored in homogeneous coordinates `(x_1, …, x_{d+1})`
//! with `Σ x_i = 1`. Sphere points on `S^d ⊂ ℝ^{d+1}` are stored by their
//! squared coordinates, plus an explicit sign vector for single points. The
//! weight attached to an orbit is the total over the orbit; every node of the
//! orbit carries `weight / cardinality`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinatorics::multinomial;
use crate::scalar::{ExactScalar, Rational, ScalarError};
use crate::symmetry::{permutation_orbit_sum, value_classes, WeightExponent};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum RuleError {
    #[error("orbit {orbit} has negative weight {weight}")]
    NegativeWeight { orbit: usize, weight: String },
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("group {group} cannot be used on the {domain}")]
    GroupDomainMismatch { group: &'static str, domain: Domain },
    #[error("expected a {expected} rule, got a {got} rule")]
    DomainMismatch { expected: Domain, got: Domain },
    #[error("values from different quadratic fields in one rule: {0}")]
    MixedFields(#[from] ScalarError),
    #[error("{0}")]
    Unsupported(String),
    #[error("orbit {0} is not reflection invariant")]
    NotReflectionInvariant(usize),
    #[error("rule is not centrally symmetric: {0}")]
    NotCentrallySymmetric(String),
    #[error("monomial of odd total degree is not determined on a half orbit")]
    OddDegreeOnHalfOrbit,
    #[error("rule file: {0}")]
    Format(String),
    #[error("rule file: unsupported format_version {0}")]
    Version(u32),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Simplex,
    Sphere,
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Domain::Simplex => "simplex",
            Domain::Sphere => "sphere",
        })
    }
}

/// `Index(t)`: exact for homogeneous polynomials of degree `t` in the
/// coordinates; `Degree(n)`: exact for all polynomials of degree at most `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Exactness {
    Index(u32),
    Degree(u32),
}

impl Exactness {
    pub fn value(&self) -> u32 {
        match *self {
            Exactness::Index(t) | Exactness::Degree(t) => t,
        }
    }
}

impl fmt::Display for Exactness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exactness::Index(t) => write!(f, "index {t}"),
            Exactness::Degree(n) => write!(f, "degree {n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Group {
    /// All coordinate permutations of a simplex point.
    Permutation,
    /// A single simplex point.
    Explicit,
    /// Coordinate permutations and sign changes of a sphere point.
    SignedPermutation,
    /// Sign changes only.
    Sign,
    /// `SignedPermutation` modulo `x ↦ -x`: one node of each antipodal pair.
    PodalSignedPermutation,
    /// `Sign` modulo `x ↦ -x`.
    PodalSign,
    /// A single sphere point with the given coordinate signs.
    SignedPoint(Vec<i8>),
}

impl Group {
    pub fn name(&self) -> &'static str {
        match self {
            Group::Permutation => "permutation",
            Group::Explicit => "explicit",
            Group::SignedPermutation => "signed-permutation",
            Group::Sign => "sign",
            Group::PodalSignedPermutation => "podal-signed-permutation",
            Group::PodalSign => "podal-sign",
            Group::SignedPoint(_) => "signed-point",
        }
    }

    pub fn domain(&self) -> Domain {
        match self {
            Group::Permutation | Group::Explicit => Domain::Simplex,
            _ => Domain::Sphere,
        }
    }

    pub fn is_half_orbit(&self) -> bool {
        matches!(self, Group::PodalSignedPermutation | Group::PodalSign)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPoint {
    group: Group,
    coords: Vec<ExactScalar>,
    cardinality: BigUint,
}

fn check_field(values: &[ExactScalar]) -> Result<u64, RuleError> {
    let mut disc = 0u64;
    for v in values {
        match (disc, v.discriminant()) {
            (_, 0) => {}
            (0, d) => disc = d,
            (a, b) if a == b => {}
            (a, b) => return Err(ScalarError::IncompatibleDiscriminant(a, b).into()),
        }
    }
    Ok(disc)
}

fn sort_descending(v: &mut [ExactScalar]) {
    v.sort_by(|a, b| b.partial_cmp(a).expect("coordinates share one field"));
}

impl OrbitPoint {
    /// A simplex orbit. Coordinates must be non-negative and sum to one.
    pub fn simplex(group: Group, coords: Vec<ExactScalar>) -> Result<Self, RuleError> {
        if group.domain() != Domain::Simplex {
            return Err(RuleError::GroupDomainMismatch { group: group.name(), domain: Domain::Simplex });
        }
        Self::build(group, coords)
    }

    /// A sphere orbit given by squared coordinates. `SignedPoint` signs on
    /// zero coordinates are normalised to `+1`.
    pub fn sphere(group: Group, squared: Vec<ExactScalar>) -> Result<Self, RuleError> {
        if group.domain() != Domain::Sphere {
            return Err(RuleError::GroupDomainMismatch { group: group.name(), domain: Domain::Sphere });
        }
        let group = match group {
            Group::SignedPoint(signs) => {
                if signs.len() != squared.len() || signs.iter().any(|s| *s != 1 && *s != -1) {
                    return Err(RuleError::InvalidPoint("sign vector must be ±1 per coordinate".into()));
                }
                let signs = signs.iter().zip(&squared).map(|(&s, q)| if q.is_zero() { 1 } else { s }).collect();
                Group::SignedPoint(signs)
            }
            g => g,
        };
        Self::build(group, squared)
    }

    fn build(group: Group, mut coords: Vec<ExactScalar>) -> Result<Self, RuleError> {
        if coords.is_empty() {
            return Err(RuleError::InvalidPoint("no coordinates".into()));
        }
        check_field(&coords)?;
        if coords.iter().any(|c| c.is_negative()) {
            return Err(RuleError::InvalidPoint("negative coordinate".into()));
        }
        let total: ExactScalar = coords.iter().sum();
        if !total.is_one() {
            return Err(RuleError::InvalidPoint(format!("coordinates sum to {total}, not 1")));
        }
        if matches!(
            group,
            Group::Permutation | Group::SignedPermutation | Group::PodalSignedPermutation
        ) {
            sort_descending(&mut coords);
        }
        let tau = coords.iter().filter(|c| !c.is_zero()).count();
        let perm = || {
            let counts: Vec<usize> = value_classes(&coords).into_iter().map(|c| c.1).collect();
            multinomial(&counts)
        };
        let signs = BigUint::one() << tau;
        let cardinality = match &group {
            Group::Permutation => perm(),
            Group::Explicit | Group::SignedPoint(_) => BigUint::one(),
            Group::SignedPermutation => perm() * &signs,
            Group::Sign => signs,
            Group::PodalSignedPermutation => perm() * &signs / 2u32,
            Group::PodalSign => signs / 2u32,
        };
        Ok(Self { group, coords, cardinality })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    /// Simplex coordinates, or squared coordinates for sphere points.
    pub fn coords(&self) -> &[ExactScalar] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn cardinality(&self) -> &BigUint {
        &self.cardinality
    }

    /// Number of nonzero coordinates.
    pub fn support(&self) -> usize {
        self.coords.iter().filter(|c| !c.is_zero()).count()
    }

    /// Size of the coordinate-permutation part of the orbit.
    pub fn permutation_count(&self) -> BigUint {
        match self.group {
            Group::Permutation | Group::SignedPermutation | Group::PodalSignedPermutation => {
                let counts: Vec<usize> = value_classes(&self.coords).into_iter().map(|c| c.1).collect();
                multinomial(&counts)
            }
            _ => BigUint::one(),
        }
    }

    /// `Σ_{y in orbit} y^α`. Sphere monomials with an odd exponent vanish on
    /// every group except `SignedPoint`, where they are irrational in general;
    /// see [`OrbitPoint::signed_point_monomial`].
    pub fn monomial_sum(&self, alpha: &[u32]) -> Result<ExactScalar, RuleError> {
        assert_eq!(alpha.len(), self.coords.len(), "exponent length must match the point");
        let any_odd = alpha.iter().any(|a| a % 2 == 1);
        let total: u32 = alpha.iter().sum();
        let half: Vec<u32> = alpha.iter().map(|a| a / 2).collect();
        let product = |exps: &[u32]| -> ExactScalar {
            self.coords.iter().zip(exps).filter(|(_, &e)| e > 0).map(|(c, &e)| c.pow(e)).product()
        };
        let signs = ExactScalar::from(BigInt::from(BigUint::one() << self.support()));
        match &self.group {
            Group::Permutation => Ok(permutation_orbit_sum(alpha, &value_classes(&self.coords))),
            Group::Explicit => Ok(product(alpha)),
            Group::SignedPermutation | Group::Sign if any_odd => Ok(ExactScalar::zero()),
            Group::SignedPermutation => Ok(signs * permutation_orbit_sum(&half, &value_classes(&self.coords))),
            Group::Sign => Ok(signs * product(&half)),
            Group::PodalSignedPermutation | Group::PodalSign if total % 2 == 1 => {
                Err(RuleError::OddDegreeOnHalfOrbit)
            }
            Group::PodalSignedPermutation | Group::PodalSign if any_odd => Ok(ExactScalar::zero()),
            Group::PodalSignedPermutation => {
                let full = signs * permutation_orbit_sum(&half, &value_classes(&self.coords));
                Ok(full / ExactScalar::from_integer(2))
            }
            Group::PodalSign => Ok(signs * product(&half) / ExactScalar::from_integer(2)),
            Group::SignedPoint(_) if !any_odd => Ok(product(&half)),
            Group::SignedPoint(_) => self.signed_point_monomial(alpha),
        }
    }

    /// `x^α` at a single signed sphere point. With odd exponents the value is
    /// `±Π q_i^{⌊α_i/2⌋} · √(Π_{α_i odd} q_i)`, which needs rational `q_i`.
    pub fn signed_point_monomial(&self, alpha: &[u32]) -> Result<ExactScalar, RuleError> {
        let Group::SignedPoint(signs) = &self.group else {
            return Err(RuleError::Unsupported("signed_point_monomial on an orbit".into()));
        };
        let mut sign = 1i64;
        let mut rational_factor = ExactScalar::one();
        let mut radicand = Rational::one();
        for ((q, &a), &s) in self.coords.iter().zip(alpha).zip(signs) {
            rational_factor *= &q.pow(a / 2);
            if a % 2 == 1 {
                if s < 0 {
                    sign = -sign;
                }
                let qr = q.as_rational().ok_or_else(|| {
                    RuleError::Unsupported("odd monomial at a point with irrational squared coordinates".into())
                })?;
                radicand *= qr;
            }
        }
        let root = ExactScalar::sqrt_of_rational(&radicand)?;
        Ok(rational_factor * root * ExactScalar::from_integer(sign))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedOrbit {
    pub point: OrbitPoint,
    /// Total weight of the orbit.
    pub weight: ExactScalar,
}

impl WeightedOrbit {
    pub fn node_weight(&self) -> ExactScalar {
        &self.weight / ExactScalar::from(BigInt::from(self.point.cardinality.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubatureRule {
    domain: Domain,
    dim: usize,
    gamma: WeightExponent,
    exactness: Exactness,
    orbits: Vec<WeightedOrbit>,
    provenance: Vec<String>,
}

impl CubatureRule {
    /// Build a rule; orbits with identical group and representative are merged
    /// and zero-weight orbits dropped. Weights may be negative.
    pub fn new(
        domain: Domain,
        dim: usize,
        gamma: WeightExponent,
        exactness: Exactness,
        orbits: Vec<WeightedOrbit>,
    ) -> Result<Self, RuleError> {
        let mut merged: Vec<WeightedOrbit> = Vec::new();
        let mut all_values = Vec::new();
        for o in orbits {
            if o.point.group.domain() != domain {
                return Err(RuleError::GroupDomainMismatch { group: o.point.group.name(), domain });
            }
            if o.point.len() != dim + 1 {
                return Err(RuleError::InvalidPoint(format!(
                    "point has {} coordinates, expected {}",
                    o.point.len(),
                    dim + 1
                )));
            }
            all_values.extend(o.point.coords.iter().cloned());
            all_values.push(o.weight.clone());
            match merged.iter_mut().find(|m| m.point == o.point) {
                Some(m) => m.weight = m.weight.try_add(&o.weight)?,
                None => merged.push(o),
            }
        }
        check_field(&all_values)?;
        merged.retain(|o| !o.weight.is_zero());
        Ok(Self { domain, dim, gamma, exactness, orbits: merged, provenance: Vec::new() })
    }

    /// As [`CubatureRule::new`] but rejecting negative weights.
    pub fn new_positive(
        domain: Domain,
        dim: usize,
        gamma: WeightExponent,
        exactness: Exactness,
        orbits: Vec<WeightedOrbit>,
    ) -> Result<Self, RuleError> {
        let rule = Self::new(domain, dim, gamma, exactness, orbits)?;
        if let Some((i, o)) = rule.orbits.iter().enumerate().find(|(_, o)| o.weight.is_negative()) {
            return Err(RuleError::NegativeWeight { orbit: i, weight: o.weight.to_string() });
        }
        Ok(rule)
    }

    pub fn with_provenance(mut self, note: impl Into<String>) -> Self {
        self.provenance.push(note.into());
        self
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gamma(&self) -> &WeightExponent {
        &self.gamma
    }

    pub fn exactness(&self) -> Exactness {
        self.exactness
    }

    pub fn orbits(&self) -> &[WeightedOrbit] {
        &self.orbits
    }

    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    pub fn node_count(&self) -> BigUint {
        self.orbits.iter().map(|o| o.point.cardinality.clone()).sum()
    }

    pub fn node_count_u64(&self) -> u64 {
        self.node_count().to_u64().unwrap_or(u64::MAX)
    }

    pub fn total_weight(&self) -> ExactScalar {
        self.orbits.iter().map(|o| &o.weight).sum()
    }

    pub fn is_positive(&self) -> bool {
        !self.orbits.is_empty() && self.orbits.iter().all(|o| o.weight.is_positive())
    }

    /// Every orbit is closed under coordinate permutations.
    pub fn is_fully_symmetric(&self) -> bool {
        self.orbits.iter().all(|o| {
            matches!(
                o.point.group,
                Group::Permutation | Group::SignedPermutation | Group::PodalSignedPermutation
            )
        })
    }

    /// Discriminant shared by all values of the rule, `0` when rational.
    pub fn field_discriminant(&self) -> u64 {
        let mut values = Vec::new();
        for o in &self.orbits {
            values.extend(o.point.coords.iter().cloned());
            values.push(o.weight.clone());
        }
        check_field(&values).unwrap_or(0)
    }

    /// Relabel a simplex index-`t` rule as degree `t`; the two agree because
    /// `Σ x_i = 1` on the simplex.
    pub fn index_to_degree(&self) -> Result<Self, RuleError> {
        self.expect_domain(Domain::Simplex)?;
        let mut r = self.clone();
        r.exactness = Exactness::Degree(self.exactness.value());
        Ok(r)
    }

    pub fn degree_to_index(&self) -> Result<Self, RuleError> {
        self.expect_domain(Domain::Simplex)?;
        let mut r = self.clone();
        r.exactness = Exactness::Index(self.exactness.value());
        Ok(r)
    }

    fn expect_domain(&self, expected: Domain) -> Result<(), RuleError> {
        if self.domain != expected {
            return Err(RuleError::DomainMismatch { expected, got: self.domain });
        }
        Ok(())
    }

    /// Lift through `x_i = y_i²`: a simplex rule exact to degree `n` for the
    /// weight `Π x_i^γ` becomes a degree-`2n+1` sphere rule for `Π |y_i|^{2γ+1}`.
    pub fn simplex_to_sphere(&self) -> Result<Self, RuleError> {
        self.expect_domain(Domain::Simplex)?;
        let mut orbits = Vec::with_capacity(self.orbits.len());
        for o in &self.orbits {
            let group = match o.point.group {
                Group::Permutation => Group::SignedPermutation,
                _ => Group::Sign,
            };
            orbits.push(WeightedOrbit {
                point: OrbitPoint::sphere(group, o.point.coords.clone())?,
                weight: o.weight.clone(),
            });
        }
        let n = self.exactness.value();
        let mut rule = Self::new(Domain::Sphere, self.dim, self.gamma.clone(), Exactness::Degree(2 * n + 1), orbits)?;
        rule.provenance = self.provenance.clone();
        rule.provenance.push("lifted from simplex".into());
        Ok(rule)
    }

    /// Inverse of [`CubatureRule::simplex_to_sphere`] for reflection-invariant rules.
    pub fn sphere_to_simplex(&self) -> Result<Self, RuleError> {
        self.expect_domain(Domain::Sphere)?;
        let mut orbits = Vec::with_capacity(self.orbits.len());
        for (i, o) in self.orbits.iter().enumerate() {
            let group = match o.point.group {
                Group::SignedPermutation => Group::Permutation,
                Group::Sign => Group::Explicit,
                _ => return Err(RuleError::NotReflectionInvariant(i)),
            };
            orbits.push(WeightedOrbit {
                point: OrbitPoint::simplex(group, o.point.coords.clone())?,
                weight: o.weight.clone(),
            });
        }
        let t = self.exactness.value() / 2;
        let mut rule = Self::new(Domain::Simplex, self.dim, self.gamma.clone(), Exactness::Index(t), orbits)?;
        rule.provenance = self.provenance.clone();
        rule.provenance.push("projected to simplex".into());
        Ok(rule)
    }

    /// Keep one node of every antipodal pair with the pair's combined weight.
    /// A degree-`2t+1` rule becomes an index-`2t` rule with half the nodes.
    pub fn antipodal_reduce(&self) -> Result<Self, RuleError> {
        self.expect_domain(Domain::Sphere)?;
        let mut orbits = Vec::new();
        let mut singles: Vec<(usize, &WeightedOrbit)> = Vec::new();
        for (i, o) in self.orbits.iter().enumerate() {
            let group = match &o.point.group {
                Group::SignedPermutation => Group::PodalSignedPermutation,
                Group::Sign => Group::PodalSign,
                Group::SignedPoint(_) => {
                    singles.push((i, o));
                    continue;
                }
                g => return Err(RuleError::NotCentrallySymmetric(format!("orbit {i} is already a {}", g.name()))),
            };
            orbits.push(WeightedOrbit { point: OrbitPoint::sphere(group, o.point.coords.clone())?, weight: o.weight.clone() });
        }
        let mut used = vec![false; singles.len()];
        for a in 0..singles.len() {
            if used[a] {
                continue;
            }
            let (i, x) = singles[a];
            let Group::SignedPoint(sx) = &x.point.group else { unreachable!() };
            let mirror: Vec<i8> = sx.iter().zip(&x.point.coords).map(|(s, q)| if q.is_zero() { 1 } else { -s }).collect();
            let partner = (a + 1..singles.len()).find(|&b| {
                !used[b]
                    && singles[b].1.point.coords == x.point.coords
                    && singles[b].1.point.group == Group::SignedPoint(mirror.clone())
            });
            let Some(b) = partner else {
                return Err(RuleError::NotCentrallySymmetric(format!("orbit {i} has no antipode")));
            };
            if singles[b].1.weight != x.weight {
                return Err(RuleError::NotCentrallySymmetric(format!("orbit {i} and its antipode differ in weight")));
            }
            used[a] = true;
            used[b] = true;
            orbits.push(WeightedOrbit { point: x.point.clone(), weight: &x.weight + &singles[b].1.weight });
        }
        let n = self.exactness.value();
        let mut rule = Self::new(Domain::Sphere, self.dim, self.gamma.clone(), Exactness::Index(n - n % 2), orbits)?;
        rule.provenance = self.provenance.clone();
        rule.provenance.push("antipodal halving".into());
        Ok(rule)
    }

    pub fn to_json(&self) -> Result<String, RuleError> {
        Ok(serde_json::to_string_pretty(&RuleFile::from_rule(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self, RuleError> {
        let file: RuleFile = serde_json::from_str(text)?;
        file.into_rule()
    }
}

/// Representatives `v_k / k` and `(a, 1, …, 1, 0, …) / (a+p)` with weights
/// `λ_j = A_j k_j^t` and `λ_u = A_u (a+p)^t`. Coefficients line up with `ks`
/// followed by the `u` orbit.
pub fn assemble_orbits(
    d: usize,
    t: u32,
    ks: &[usize],
    p: usize,
    a: &ExactScalar,
    coefficients: &[ExactScalar],
) -> Result<Vec<WeightedOrbit>, RuleError> {
    if coefficients.len() != ks.len() + 1 {
        return Err(RuleError::InvalidPoint("one coefficient per orbit plus the u orbit expected".into()));
    }
    let n = d + 1;
    let mut orbits = Vec::new();
    for (&k, c) in ks.iter().zip(coefficients) {
        if k == 0 || k > n {
            return Err(RuleError::InvalidPoint(format!("k = {k} outside 1..={n}")));
        }
        let kq = ExactScalar::from_integer(k as i64);
        let inv = ExactScalar::one() / &kq;
        let coords = (0..n).map(|i| if i < k { inv.clone() } else { ExactScalar::zero() }).collect();
        orbits.push(WeightedOrbit {
            point: OrbitPoint::simplex(Group::Permutation, coords)?,
            weight: c * kq.pow(t),
        });
    }
    if p == 0 || p >= n {
        return Err(RuleError::InvalidPoint(format!("p = {p} outside 1..={d}")));
    }
    let s = a + ExactScalar::from_integer(p as i64);
    if !a.is_positive() || s.is_zero() {
        return Err(RuleError::InvalidPoint(format!("a = {a} must be positive")));
    }
    let inv = ExactScalar::one() / &s;
    let mut coords = vec![a * &inv];
    coords.extend((0..p).map(|_| inv.clone()));
    coords.resize(n, ExactScalar::zero());
    orbits.push(WeightedOrbit {
        point: OrbitPoint::simplex(Group::Permutation, coords)?,
        weight: &coefficients[ks.len()] * s.pow(t),
    });
    Ok(orbits)
}

/// A positive simplex index-`t` rule from the two-parameter orbit family.
pub fn assemble_rule(
    d: usize,
    gamma: &WeightExponent,
    t: u32,
    ks: &[usize],
    p: usize,
    a: &ExactScalar,
    coefficients: &[ExactScalar],
) -> Result<CubatureRule, RuleError> {
    let orbits = assemble_orbits(d, t, ks, p, a, coefficients)?;
    CubatureRule::new_positive(Domain::Simplex, d, gamma.clone(), Exactness::Index(t), orbits)
}

#[derive(Debug, Serialize, Deserialize)]
struct OrbitRecord {
    group: String,
    representative: Vec<ExactScalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    signs: Option<Vec<i8>>,
    weight: ExactScalar,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cardinality: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RuleFile {
    format_version: u32,
    domain: Domain,
    d: usize,
    gamma: WeightExponent,
    exactness: Exactness,
    #[serde(default)]
    provenance: Vec<String>,
    orbits: Vec<OrbitRecord>,
}

impl RuleFile {
    fn from_rule(rule: &CubatureRule) -> Self {
        let orbits = rule
            .orbits
            .iter()
            .map(|o| OrbitRecord {
                group: o.point.group.name().to_string(),
                representative: o.point.coords.clone(),
                signs: match &o.point.group {
                    Group::SignedPoint(s) => Some(s.clone()),
                    _ => None,
                },
                weight: o.weight.clone(),
                cardinality: Some(o.point.cardinality.to_string()),
            })
            .collect();
        Self {
            format_version: FORMAT_VERSION,
            domain: rule.domain,
            d: rule.dim,
            gamma: rule.gamma.clone(),
            exactness: rule.exactness,
            provenance: rule.provenance.clone(),
            orbits,
        }
    }

    fn into_rule(self) -> Result<CubatureRule, RuleError> {
        if self.format_version != FORMAT_VERSION {
            return Err(RuleError::Version(self.format_version));
        }
        let mut orbits = Vec::with_capacity(self.orbits.len());
        for (i, rec) in self.orbits.into_iter().enumerate() {
            let group = match (rec.group.as_str(), rec.signs) {
                ("permutation", None) => Group::Permutation,
                ("explicit", None) => Group::Explicit,
                ("signed-permutation", None) => Group::SignedPermutation,
                ("sign", None) => Group::Sign,
                ("podal-signed-permutation", None) => Group::PodalSignedPermutation,
                ("podal-sign", None) => Group::PodalSign,
                ("signed-point", Some(s)) => Group::SignedPoint(s),
                (g, _) => return Err(RuleError::Format(format!("orbit {i}: bad group {g:?} or sign vector"))),
            };
            let point = match self.domain {
                Domain::Simplex => OrbitPoint::simplex(group, rec.representative)?,
                Domain::Sphere => OrbitPoint::sphere(group, rec.representative)?,
            };
            if let Some(c) = rec.cardinality {
                if c != point.cardinality.to_string() {
                    return Err(RuleError::Format(format!(
                        "orbit {i}: stated cardinality {c} but the orbit has {}",
                        point.cardinality
                    )));
                }
            }
            orbits.push(WeightedOrbit { point, weight: rec.weight });
        }
        let mut rule = CubatureRule::new(self.domain, self.d, self.gamma, self.exactness, orbits)?;
        rule.provenance = self.provenance;
        Ok(rule)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactScalar {
        ExactScalar::from_ratio(n, d)
    }

    fn sample() -> CubatureRule {
        let ks = [6, 1, 2, 3];
        let coef = [q(0, 1), q(1, 112), q(0, 1), q(15, 56 * 81), q(81, 112 * 6561)];
        assemble_rule(5, &WeightExponent::uniform(), 4, &ks, 5, &q(4, 1), &coef).unwrap()
    }

    #[test]
    fn cardinalities() {
        let u = OrbitPoint::simplex(Group::Permutation, vec![q(1, 2), q(1, 4), q(1, 4), q(0, 1)]).unwrap();
        assert_eq!(u.cardinality(), &BigUint::from(12u32));
        let s = OrbitPoint::sphere(Group::SignedPermutation, vec![q(1, 2), q(1, 4), q(1, 4), q(0, 1)]).unwrap();
        assert_eq!(s.cardinality(), &BigUint::from(96u32));
        let h = OrbitPoint::sphere(Group::PodalSignedPermutation, vec![q(1, 2), q(1, 4), q(1, 4), q(0, 1)]).unwrap();
        assert_eq!(h.cardinality(), &BigUint::from(48u32));
        assert!(OrbitPoint::simplex(Group::Sign, vec![q(1, 1)]).is_err());
        assert!(OrbitPoint::simplex(Group::Explicit, vec![q(1, 2), q(1, 3)]).is_err());
    }

    #[test]
    fn sphere_round_trip_keeps_weights() {
        let r = sample();
        let s = r.simplex_to_sphere().unwrap();
        assert_eq!(s.exactness(), Exactness::Degree(9));
        let back = s.sphere_to_simplex().unwrap();
        assert_eq!(back.orbits(), r.orbits());
        assert_eq!(back.node_count(), r.node_count());
        let half = s.antipodal_reduce().unwrap();
        assert_eq!(half.node_count() * 2u32, s.node_count());
        assert_eq!(half.total_weight(), ExactScalar::one());
        assert_eq!(half.exactness(), Exactness::Index(8));
    }

    #[test]
    fn json_round_trip() {
        let r = sample().simplex_to_sphere().unwrap();
        let text = r.to_json().unwrap();
        let back = CubatureRule::from_json(&text).unwrap();
        assert_eq!(back, r);
        let tampered = text.replacen("\"format_version\": 1", "\"format_version\": 7", 1);
        assert!(matches!(CubatureRule::from_json(&tampered), Err(RuleError::Version(7))));
    }

    #[test]
    fn negative_weight_is_reported() {
        let ks = [6, 1, 2, 4];
        let coef = [q(0, 1), q(-1, 112), q(0, 1), q(1, 1), q(1, 1)];
        let err = assemble_rule(5, &WeightExponent::uniform(), 4, &ks, 5, &q(2, 1), &coef).unwrap_err();
        assert!(matches!(err, RuleError::NegativeWeight { orbit: 0, .. }), "{err}");
    }

    #[test]
    fn duplicate_orbits_merge() {
        let ks = [3, 1, 3];
        let coef = [q(1, 27), q(1, 3), q(1, 27), q(0, 1)];
        let r = assemble_rule(2, &WeightExponent::uniform(), 3, &ks, 1, &q(2, 1), &coef).unwrap();
        assert_eq!(r.orbits().len(), 2);
        assert_eq!(r.orbits()[0].weight, q(2, 1));
    }

    #[test]
    fn signed_point_odd_monomial() {
        let p = OrbitPoint::sphere(Group::SignedPoint(vec![1, -1, 1]), vec![q(1, 2), q(1, 3), q(1, 6)]).unwrap();
        // x1 x2 = -(1/sqrt2)(1/sqrt3) = -sqrt(6)/6
        assert_eq!(p.monomial_sum(&[1, 1, 0]).unwrap(), "-1/6*sqrt(6)".parse().unwrap());
        assert_eq!(p.monomial_sum(&[2, 0, 2]).unwrap(), q(1, 12));
    }
}
