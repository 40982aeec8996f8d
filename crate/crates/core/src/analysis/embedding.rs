//! Isometric embeddings `l_2^n → l_{2t}^N` from index-`2t` sphere rules.

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::combinatorics::{compositions, multinomial, multiset_permutations};
use crate::rule::{CubatureRule, Domain, Exactness, Group, RuleError};
use crate::scalar::{ExactScalar, Rational, ScalarError};
use crate::symmetry::{monomial_moment, value_classes, WeightExponent};

use super::verify::{verify_exactness, SurdSum, VerifyError};

/// Largest number of vectors `extract_embedding` lists.
pub const MAX_EMBEDDING_VECTORS: u64 = 1_000_000;

#[derive(Debug, Error)]
pub enum EmbeddingError {
    #[error("embedding needs at least one coordinate")]
    NoCoordinates,
    #[error("{0}")]
    Unsuitable(String),
    #[error("orbit {0} has a non-positive weight")]
    NonPositive(usize),
    #[error("rule is not exact for degree {0}")]
    NotExact(u32),
    #[error("{0} vectors is over the listing limit")]
    TooLarge(u64),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

/// `c_t = ∫ y_1^{2t}` over the unit sphere in `R^{d_ambient}`, normalised.
pub fn embedding_constant(d_ambient: usize, t: u32) -> Result<Rational, EmbeddingError> {
    if d_ambient == 0 {
        return Err(EmbeddingError::NoCoordinates);
    }
    let mut alpha = vec![0u32; d_ambient];
    alpha[0] = t;
    Ok(monomial_moment(&alpha, &WeightExponent::chebyshev()))
}

/// One vector `r_i`, kept as `(λ_i / c_t, x_i)` so that
/// `⟨x, r_i⟩^{2t} = (λ_i / c_t) ⟨x, x_i⟩^{2t}` stays exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingVector {
    pub factor: ExactScalar,
    pub squared: Vec<ExactScalar>,
    /// Sign of each coordinate, `+1` on zeros.
    pub signs: Vec<i8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingSpec {
    pub d_ambient: usize,
    /// `2t`.
    pub power: u32,
    pub constant: Rational,
    pub vectors: Vec<EmbeddingVector>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingCheck {
    pub passed: bool,
    pub first_failure: Option<Vec<u32>>,
}

impl EmbeddingSpec {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Expand `Σ ⟨x, r_i⟩^{2t}` monomial by monomial and compare with `⟨x,x⟩^t`.
    pub fn certify(&self) -> Result<EmbeddingCheck, EmbeddingError> {
        let n = self.d_ambient;
        for e in compositions(self.power, n) {
            let parts: Vec<usize> = e.iter().map(|&x| x as usize).collect();
            let mult = ExactScalar::from(BigInt::from(multinomial(&parts)));
            let mut acc = SurdSum::default();
            for v in &self.vectors {
                let mut sign = 1i64;
                let mut rational = ExactScalar::one();
                let mut radicand = Rational::one();
                for j in 0..n {
                    rational = rational.try_mul(&v.squared[j].pow(e[j] / 2))?;
                    if e[j] % 2 == 1 {
                        sign *= i64::from(v.signs[j]);
                        radicand *= v.squared[j].as_rational().ok_or_else(|| {
                            EmbeddingError::Unsuitable("odd monomials need rational squared coordinates".into())
                        })?;
                    }
                }
                let term = v
                    .factor
                    .try_mul(&rational)?
                    .try_mul(&ExactScalar::sqrt_of_rational(&radicand)?)?
                    .try_mul(&ExactScalar::from_integer(sign))?;
                acc.add(&term.try_mul(&mult)?);
            }
            let want = if e.iter().all(|x| x % 2 == 0) {
                let half: Vec<usize> = e.iter().map(|&x| (x / 2) as usize).collect();
                ExactScalar::from(BigInt::from(multinomial(&half)))
            } else {
                ExactScalar::zero()
            };
            if !acc.equals(&want) {
                return Ok(EmbeddingCheck { passed: false, first_failure: Some(e) });
            }
        }
        Ok(EmbeddingCheck { passed: true, first_failure: None })
    }
}

/// Every sign vector on the nonzero coordinates; with `half`, only those
/// whose first nonzero sign is `+`.
fn sign_vectors(coords: &[ExactScalar], half: bool) -> Vec<Vec<i8>> {
    let nz: Vec<usize> = (0..coords.len()).filter(|&i| !coords[i].is_zero()).collect();
    let free: Vec<usize> = if half { nz.iter().skip(1).copied().collect() } else { nz };
    (0..1usize << free.len())
        .map(|mask| {
            let mut s = vec![1i8; coords.len()];
            for (bit, &i) in free.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    s[i] = -1;
                }
            }
            s
        })
        .collect()
}

fn arrangements(coords: &[ExactScalar]) -> Vec<Vec<ExactScalar>> {
    let classes = value_classes(coords);
    let labels: Vec<usize> = classes.iter().enumerate().flat_map(|(i, c)| std::iter::repeat_n(i, c.1)).collect();
    multiset_permutations(&labels).into_iter().map(|p| p.into_iter().map(|i| classes[i].0.clone()).collect()).collect()
}

/// List the vectors `r_i = (λ_i / c_t)^{1/2t} x_i` of a positive sphere rule
/// exact for every monomial of degree `2t`.
pub fn extract_embedding(rule: &CubatureRule, t: u32) -> Result<EmbeddingSpec, EmbeddingError> {
    if rule.domain() != Domain::Sphere {
        return Err(EmbeddingError::Unsuitable("embedding needs a sphere rule".into()));
    }
    if *rule.gamma() != WeightExponent::chebyshev() {
        return Err(EmbeddingError::Unsuitable(format!(
            "embedding needs the surface measure (gamma = -1/2), the rule has gamma = {}",
            rule.gamma()
        )));
    }
    if let Some(i) = rule.orbits().iter().position(|o| !o.weight.is_positive()) {
        return Err(EmbeddingError::NonPositive(i));
    }
    if rule.node_count_u64() > MAX_EMBEDDING_VECTORS {
        return Err(EmbeddingError::TooLarge(rule.node_count_u64()));
    }
    if t > 0 && !verify_exactness(rule, Exactness::Index(2 * t))?.passed {
        return Err(EmbeddingError::NotExact(2 * t));
    }
    let n = rule.dim() + 1;
    let constant = embedding_constant(n, t)?;
    let c = ExactScalar::from(constant.clone());
    let mut vectors = Vec::new();
    for o in rule.orbits() {
        let factor = o.node_weight().try_div(&c)?;
        let coords = o.point.coords();
        let (images, half) = match o.point.group() {
            Group::SignedPermutation => (arrangements(coords), false),
            Group::PodalSignedPermutation => (arrangements(coords), true),
            Group::Sign => (vec![coords.to_vec()], false),
            Group::PodalSign => (vec![coords.to_vec()], true),
            Group::SignedPoint(s) => {
                vectors.push(EmbeddingVector { factor, squared: coords.to_vec(), signs: s.clone() });
                continue;
            }
            g => return Err(EmbeddingError::Unsuitable(format!("{} orbit on the sphere", g.name()))),
        };
        for image in images {
            for s in sign_vectors(&image, half) {
                vectors.push(EmbeddingVector { factor: factor.clone(), squared: image.clone(), signs: s });
            }
        }
    }
    Ok(EmbeddingSpec { d_ambient: n, power: 2 * t, constant, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `(2t−1)!! (n−2)!! / (n+2t−2)!!`
    fn double_factorial_form(n: i64, t: i64) -> Rational {
        let df = |mut k: i64| {
            let mut acc = BigInt::one();
            while k > 1 {
                acc *= k;
                k -= 2;
            }
            acc
        };
        Rational::new(df(2 * t - 1) * df(n - 2), df(n + 2 * t - 2))
    }

    #[test]
    fn constants() {
        assert_eq!(embedding_constant(4, 4).unwrap(), Rational::new(7.into(), 128.into()));
        assert_eq!(embedding_constant(2, 1).unwrap(), Rational::new(1.into(), 2.into()));
        assert_eq!(embedding_constant(6, 0).unwrap(), Rational::one());
        for n in 2..9 {
            for t in 1..6 {
                assert_eq!(embedding_constant(n as usize, t as u32).unwrap(), double_factorial_form(n, t), "n={n} t={t}");
            }
        }
    }
}
