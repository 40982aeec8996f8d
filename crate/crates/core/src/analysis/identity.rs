//! Integer identities `M (Σ x_i²)^t = Σ c_j Σ_{orbit} (linear form)^{2t}`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinatorics::{compositions, multinomial, multiset_permutations};
use crate::rule::{CubatureRule, Domain, Exactness, Group};
use crate::scalar::Rational;
use crate::symmetry::WeightExponent;

use super::embedding::{embedding_constant, EmbeddingError};

#[derive(Debug, Error)]
pub enum IdentityError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error("node data is irrational: {0}")]
    Irrational(String),
    #[error("derived identity does not check: {0}")]
    SelfCheck(String),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Dense-enough polynomial: exponent vector → integer coefficient.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MultiPoly {
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MultiPoly {
    pub fn coefficient(&self, exps: &[u32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, exps: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(exps).or_default();
        *e += c;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = Self { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() };
        out.prune();
        out
    }

    /// `(Σ_i s² x_i²)^t`.
    pub fn sum_of_squares_power(n: usize, t: u32, scale: i64) -> Self {
        let mut out = Self::default();
        let factor = BigInt::from(scale).pow(2 * t);
        for beta in compositions(t, n) {
            let parts: Vec<usize> = beta.iter().map(|&b| b as usize).collect();
            let exps = beta.iter().map(|b| 2 * b).collect();
            out.add_term(exps, BigInt::from(multinomial(&parts)) * &factor);
        }
        out
    }

    /// `(Σ_i c_i x_i)^power`.
    pub fn linear_form_power(coeffs: &[i64], power: u32) -> Self {
        let mut out = Self::default();
        for e in compositions(power, coeffs.len()) {
            if e.iter().zip(coeffs).any(|(&ei, &c)| ei > 0 && c == 0) {
                continue;
            }
            let parts: Vec<usize> = e.iter().map(|&x| x as usize).collect();
            let mut c = BigInt::from(multinomial(&parts));
            for (&ei, &ci) in e.iter().zip(coeffs) {
                c *= BigInt::from(ci).pow(ei);
            }
            out.add_term(e, c);
        }
        out.prune();
        out
    }

    fn add_assign(&mut self, other: &Self, times: &BigInt) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v * times);
        }
        self.prune();
    }
}

/// Every form obtained from `pattern` (padded with zeros to `n` entries) by
/// permuting coordinates and flipping signs, one representative per `±` pair.
pub fn orbit_forms(pattern: &[i64], n: usize) -> Vec<Vec<i64>> {
    let mut padded: Vec<i64> = pattern.iter().map(|x| x.abs()).collect();
    padded.resize(n, 0);
    let mut out = Vec::new();
    for arrangement in multiset_permutations(&padded) {
        let nz: Vec<usize> = (0..n).filter(|&i| arrangement[i] != 0).collect();
        if nz.is_empty() {
            continue;
        }
        // The first nonzero entry stays positive.
        for mask in 0..1usize << (nz.len() - 1) {
            let mut f = arrangement.clone();
            for (bit, &i) in nz.iter().skip(1).enumerate() {
                if mask >> bit & 1 == 1 {
                    f[i] = -f[i];
                }
            }
            out.push(f);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityTerm {
    pub coefficient: BigInt,
    /// Nonzero absolute coefficients of the form, e.g. `[2, 1, 1]` for `2x_i ± x_j ± x_k`.
    pub pattern: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetricIdentity {
    /// Number of variables.
    pub n: usize,
    pub multiplier: BigInt,
    /// Left side is `M (Σ (s x_i)²)^t` with this `s`.
    #[serde(default = "one_i64")]
    pub lhs_scale: i64,
    /// Degree of each form power, `2t`.
    pub power: u32,
    pub terms: Vec<IdentityTerm>,
}

fn one_i64() -> i64 {
    1
}

impl SymmetricIdentity {
    pub fn form_count(&self, term: &IdentityTerm) -> usize {
        orbit_forms(&term.pattern, self.n).len()
    }

    /// Number of forms over all terms, a repeated term counted again.
    pub fn total_forms(&self) -> BigUint {
        self.terms.iter().map(|t| BigUint::from(self.form_count(t))).sum()
    }

    /// `Σ coefficient × forms`: how many powers the right side adds up to.
    pub fn power_count(&self) -> BigInt {
        self.terms.iter().map(|t| &t.coefficient * BigInt::from(self.form_count(t))).sum()
    }

    pub fn lhs(&self) -> MultiPoly {
        MultiPoly::sum_of_squares_power(self.n, self.power / 2, self.lhs_scale).scale(&self.multiplier)
    }

    pub fn rhs(&self) -> MultiPoly {
        let mut out = MultiPoly::default();
        for term in &self.terms {
            for form in orbit_forms(&term.pattern, self.n) {
                out.add_assign(&MultiPoly::linear_form_power(&form, self.power), &term.coefficient);
            }
        }
        out
    }

    pub fn to_json(&self) -> Result<String, IdentityError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self, IdentityError> {
        let id: Self = serde_json::from_str(text)?;
        id.validate()?;
        Ok(id)
    }

    fn validate(&self) -> Result<(), IdentityError> {
        if self.n == 0 || self.power == 0 || self.power % 2 == 1 {
            return Err(IdentityError::Invalid("need n ≥ 1 and an even positive power".into()));
        }
        for t in &self.terms {
            if t.pattern.is_empty() || t.pattern.len() > self.n || t.pattern.contains(&0) {
                return Err(IdentityError::Invalid(format!("pattern {:?} does not fit {} variables", t.pattern, self.n)));
            }
        }
        Ok(())
    }
}

fn join(pattern: &[i64]) -> String {
    pattern.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for SymmetricIdentity {
    /// ```text
    /// lhs: 5040 * sum_squares(4) ^ 4
    /// 6 * sym_orbit(2) ^ 8  # 4 forms
    /// ```
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lhs_scale == 1 {
            writeln!(f, "lhs: {} * sum_squares({}) ^ {}", self.multiplier, self.n, self.power / 2)?;
        } else {
            writeln!(f, "lhs: {} * sum_squares({}, {}) ^ {}", self.multiplier, self.n, self.lhs_scale, self.power / 2)?;
        }
        for t in &self.terms {
            writeln!(f, "{} * sym_orbit({}) ^ {}  # {} forms", t.coefficient, join(&t.pattern), self.power, self.form_count(t))?;
        }
        Ok(())
    }
}

/// Parses `COEFF * NAME(ARGS) ^ POWER`, returning the pieces and the column
/// of each piece.
fn split_term(body: &str) -> Option<(&str, &str, &str, &str, [usize; 3])> {
    let star = body.find('*')?;
    let open = body.find('(')?;
    let close = body.rfind(')')?;
    let caret = body.rfind('^')?;
    if !(star < open && open < close && close < caret) {
        return None;
    }
    Some((
        body[..star].trim(),
        body[star + 1..open].trim(),
        &body[open + 1..close],
        body[caret + 1..].trim(),
        [open + 2, caret + 2, 1],
    ))
}

impl FromStr for SymmetricIdentity {
    type Err = IdentityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |line: usize, column: usize, message: String| IdentityError::Parse { line, column, message };
        let mut header: Option<(usize, BigInt, usize, i64, u32)> = None;
        let mut terms = Vec::new();
        let mut power: Option<u32> = None;
        for (i, raw) in s.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("");
            if body.trim().is_empty() {
                continue;
            }
            let (is_lhs, body, offset) = match body.trim_start().strip_prefix("lhs:") {
                Some(rest) => (true, rest, body.len() - rest.len()),
                None => (false, body, 0),
            };
            let (coef, name, args, pow, cols) =
                split_term(body).ok_or_else(|| err(line, 1, "expected `coeff * name(args) ^ power`".into()))?;
            let coef: BigInt = coef.parse().map_err(|_| err(line, offset + 1, format!("bad coefficient {coef:?}")))?;
            let pow: u32 = pow.parse().map_err(|_| err(line, offset + cols[1], format!("bad power {pow:?}")))?;
            let nums: Vec<i64> = args
                .split(',')
                .map(|a| a.trim().parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(|_| err(line, offset + cols[0], format!("bad arguments {args:?}")))?;
            match (is_lhs, name) {
                (true, "sum_squares") => {
                    if header.is_some() {
                        return Err(err(line, 1, "second lhs line".into()));
                    }
                    let (n, scale) = match nums.as_slice() {
                        [n] => (*n, 1),
                        [n, s] => (*n, *s),
                        _ => return Err(err(line, offset + cols[0], "sum_squares takes n or n, scale".into())),
                    };
                    if n < 1 {
                        return Err(err(line, offset + cols[0], "need at least one variable".into()));
                    }
                    header = Some((line, coef, n as usize, scale, pow));
                }
                (false, "sym_orbit") => {
                    if power.is_some_and(|p| p != pow) {
                        return Err(err(line, cols[1], "all terms must share one power".into()));
                    }
                    power = Some(pow);
                    terms.push(IdentityTerm { coefficient: coef, pattern: nums.iter().map(|x| x.abs()).collect() });
                }
                _ => return Err(err(line, offset + 1, format!("unexpected {name:?}"))),
            }
        }
        let (hl, multiplier, n, lhs_scale, t) = header.ok_or_else(|| err(1, 1, "missing `lhs:` line".into()))?;
        if power.is_some_and(|p| p != 2 * t) {
            return Err(err(hl, 1, format!("forms have power {} but the left side has degree {}", power.unwrap_or(0), 2 * t)));
        }
        let id = Self { n, multiplier, lhs_scale, power: 2 * t, terms };
        id.validate()?;
        Ok(id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub passed: bool,
    /// First monomial (in exponent order) where the sides differ, with both coefficients.
    pub first_difference: Option<(Vec<u32>, BigInt, BigInt)>,
    pub monomials: usize,
}

/// Expand both sides exactly and compare coefficient by coefficient.
pub fn identity_check(identity: &SymmetricIdentity) -> IdentityReport {
    let lhs = identity.lhs();
    let rhs = identity.rhs();
    let mut keys: Vec<&Vec<u32>> = lhs.terms.keys().chain(rhs.terms.keys()).collect();
    keys.sort();
    keys.dedup();
    let first_difference = keys
        .iter()
        .find(|k| lhs.coefficient(k) != rhs.coefficient(k))
        .map(|k| ((*k).clone(), lhs.coefficient(k), rhs.coefficient(k)));
    IdentityReport { passed: first_difference.is_none(), first_difference, monomials: keys.len() }
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    let root = |n: &BigInt| {
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    if q.is_negative() {
        return None;
    }
    Some(Rational::new(root(q.numer())?, root(q.denom())?))
}

/// Turn a positive sphere rule with rational nodes and weights into an
/// integer identity. Forms are primitive integer vectors and `M` is the least
/// multiplier clearing all denominators.
pub fn rule_to_identity(rule: &CubatureRule, t: u32) -> Result<SymmetricIdentity, IdentityError> {
    if rule.domain() != Domain::Sphere || !rule.is_positive() {
        return Err(IdentityError::Invalid("need a positive sphere rule".into()));
    }
    if *rule.gamma() != WeightExponent::chebyshev() {
        return Err(IdentityError::Invalid(format!(
            "need the surface measure (gamma = -1/2), the rule has gamma = {}",
            rule.gamma()
        )));
    }
    let exact_enough = match rule.exactness() {
        Exactness::Index(m) => m == 2 * t,
        Exactness::Degree(n) => n >= 2 * t,
    };
    if !exact_enough || t == 0 {
        return Err(IdentityError::Invalid(format!("rule is not exact for degree {}", 2 * t)));
    }
    let n = rule.dim() + 1;
    let ct = embedding_constant(n, t)?;
    // pattern → coefficient per form
    let mut grouped: BTreeMap<Vec<i64>, Rational> = BTreeMap::new();
    for (i, o) in rule.orbits().iter().enumerate() {
        let forms_per_node = match o.point.group() {
            Group::SignedPermutation => Rational::new(1.into(), 2.into()),
            Group::PodalSignedPermutation => Rational::one(),
            g => return Err(IdentityError::Invalid(format!("orbit {i} is a {} orbit, not fully symmetric", g.name()))),
        };
        let weight = o
            .weight
            .as_rational()
            .ok_or_else(|| IdentityError::Irrational(format!("orbit {i} weight {}", o.weight)))?;
        let squared: Vec<Rational> = o
            .point
            .coords()
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| c.as_rational().cloned().ok_or_else(|| IdentityError::Irrational(format!("orbit {i} coordinate {c}"))))
            .collect::<Result<_, _>>()?;
        let q1 = squared[0].clone();
        let ratios: Vec<Rational> = squared
            .iter()
            .map(|q| rational_sqrt(&(q / &q1)).ok_or_else(|| IdentityError::Irrational(format!("orbit {i}: coordinate ratio is not a square"))))
            .collect::<Result<_, _>>()?;
        // ratios = g · pattern with a primitive integer pattern
        let den = ratios.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let ints: Vec<BigInt> = ratios.iter().map(|r| (r * Rational::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let pattern: Vec<i64> = ints
            .iter()
            .map(|x| i64::try_from(x / &g).map_err(|_| IdentityError::Invalid("form coefficient overflows".into())))
            .collect::<Result<_, _>>()?;
        let scale = Rational::new(g, den);
        let node_weight = weight / Rational::from_integer(BigInt::from(o.point.cardinality().clone()));
        let coef = node_weight / &forms_per_node * q1.pow(t as i32) * scale.pow(2 * t as i32) / &ct;
        *grouped.entry(pattern).or_insert_with(Rational::zero) += coef;
    }
    let multiplier = grouped.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut terms: Vec<IdentityTerm> = grouped
        .into_iter()
        .map(|(pattern, c)| IdentityTerm { coefficient: (c * Rational::from_integer(multiplier.clone())).to_integer(), pattern })
        .collect();
    terms.sort_by(|a, b| a.pattern.len().cmp(&b.pattern.len()).then_with(|| b.pattern.cmp(&a.pattern)));
    let id = SymmetricIdentity { n, multiplier, lhs_scale: 1, power: 2 * t, terms };
    let report = identity_check(&id);
    if !report.passed {
        return Err(IdentityError::SelfCheck(format!("{:?}", report.first_difference)));
    }
    Ok(id)
}

const HURWITZ: &str = include_str!("../../data/identities/hurwitz.txt");
const SCHUR_AS_PRINTED: &str = include_str!("../../data/identities/schur-as-printed.txt");
const SCHUR: &str = include_str!("../../data/identities/schur.txt");
const I161280_AS_PRINTED: &str = include_str!("../../data/identities/161280-as-printed.txt");
const I161280: &str = include_str!("../../data/identities/161280.txt");
const I315: &str = include_str!("../../data/identities/315.txt");

/// Bundled identities by name.
pub fn builtin_identity(name: &str) -> Option<SymmetricIdentity> {
    let text = match name {
        "hurwitz" => HURWITZ,
        "schur-as-printed" => SCHUR_AS_PRINTED,
        "schur" => SCHUR,
        "161280-as-printed" => I161280_AS_PRINTED,
        "161280" => I161280,
        "315" => I315,
        _ => return None,
    };
    Some(text.parse().expect("bundled identity parses"))
}

pub const BUILTIN_IDENTITIES: [&str; 6] = ["hurwitz", "schur-as-printed", "schur", "161280-as-printed", "161280", "315"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_sizes() {
        assert_eq!(orbit_forms(&[2, 1, 1], 4).len(), 48);
        assert_eq!(orbit_forms(&[1, 1, 1, 1], 4).len(), 8);
        assert_eq!(orbit_forms(&[3, 1, 1, 1, 1], 5).len(), 80);
        assert_eq!(orbit_forms(&[2, 2, 2], 5).len(), 40);
    }

    #[test]
    fn binomial_expansion() {
        let p = MultiPoly::linear_form_power(&[1, -1], 3);
        assert_eq!(p.coefficient(&[2, 1]), BigInt::from(-3));
        assert_eq!(MultiPoly::sum_of_squares_power(2, 2, 1).coefficient(&[2, 2]), BigInt::from(2));
    }

    #[test]
    fn tiny_identity() {
        // 2(x² + y²) = (x+y)² + (x−y)²
        let id: SymmetricIdentity = "lhs: 2 * sum_squares(2) ^ 1\n1 * sym_orbit(1,1) ^ 2\n".parse().unwrap();
        assert!(identity_check(&id).passed);
        let off: SymmetricIdentity = "lhs: 3 * sum_squares(2) ^ 1\n1 * sym_orbit(1,1) ^ 2\n".parse().unwrap();
        let r = identity_check(&off);
        assert_eq!(r.first_difference, Some((vec![0, 2], BigInt::from(3), BigInt::from(2))));
    }

    #[test]
    fn hurwitz_holds() {
        let h = builtin_identity("hurwitz").unwrap();
        assert!(identity_check(&h).passed);
        assert_eq!(h.to_string().parse::<SymmetricIdentity>().unwrap(), h);
        assert_eq!(SymmetricIdentity::from_json(&h.to_json().unwrap()).unwrap(), h);
    }

    #[test]
    fn parse_errors_have_positions() {
        let e = "lhs: 5 * sum_squares(x) ^ 2\n".parse::<SymmetricIdentity>().unwrap_err();
        assert!(matches!(e, IdentityError::Parse { line: 1, .. }), "{e:?}");
        let e = "lhs: 5 * sum_squares(2) ^ 2\n1 * sym_orbit(1) ^ 2\n".parse::<SymmetricIdentity>().unwrap_err();
        assert!(matches!(e, IdentityError::Parse { .. }), "{e:?}");
    }
}
