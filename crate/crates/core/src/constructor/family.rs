//! Parameter families with closed-form choices of `a`, and the positivity search.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::{
    solve_degree4, solve_degree5, zero_weight_parameters, ConstructError, Degree4Problem, Degree5Problem, RuleSolution,
};
use crate::scalar::{ExactScalar, Rational};
use crate::symmetry::WeightExponent;

/// Orbit patterns `(k_1, …)` together with the weight that is driven to zero
/// (or the fixed `a`) that selects the free parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// `(d+1, 1, 2, 3)`, `p = d`.
    SimplexD123,
    /// `(d+1, 1, 2, m)`, `p = d`, vertex weight zero.
    SimplexVertexFree,
    /// `(d+1, 1, 2, m)`, `p = d`, edge-midpoint weight zero.
    SimplexPairFree,
    /// `(d+1, 1, 3, m)`, `p = d`, vertex weight zero.
    SimplexTripleVertexFree,
    /// `(d+1, 1, 3, m)`, `p = d`, triple-centroid weight zero.
    SimplexTripleFree,
    /// `(d+1, 1, 3, m)`, `p = d`, centroid weight zero.
    SimplexTripleCentroidFree,
    /// Chebyshev weight, `(d+1, 1, 2, m)`, `p = d`, vertex weight zero.
    SphereVertexFree,
    /// Chebyshev weight, `(d+1, 1, 2, m)`, `p = d`, edge-midpoint weight zero.
    SpherePairFree,
    /// Chebyshev weight, `(d+1, 1, 2, m)`, `p = d`, `a = 9`.
    SphereNine,
    /// Chebyshev weight, `(d+1, 1, 2, m)`, `p = m − 1`, vertex weight zero.
    SphereShiftedVertexFree,
    /// Chebyshev weight, `(d+1, 1, 2, m)`, `2 ≤ p < d`, `a = 4`.
    SphereFour,
    /// Index 5, `(d+1, 1, 2, 3, m)`, `2 ≤ p ≤ d`, `a` forced.
    Degree5,
}

impl Family {
    pub const ALL: [Family; 12] = [
        Family::SimplexD123,
        Family::SimplexVertexFree,
        Family::SimplexPairFree,
        Family::SimplexTripleVertexFree,
        Family::SimplexTripleFree,
        Family::SimplexTripleCentroidFree,
        Family::SphereVertexFree,
        Family::SpherePairFree,
        Family::SphereNine,
        Family::SphereShiftedVertexFree,
        Family::SphereFour,
        Family::Degree5,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Family::SimplexD123 => "simplex-d123",
            Family::SimplexVertexFree => "simplex-vertex-free",
            Family::SimplexPairFree => "simplex-pair-free",
            Family::SimplexTripleVertexFree => "simplex-triple-vertex-free",
            Family::SimplexTripleFree => "simplex-triple-free",
            Family::SimplexTripleCentroidFree => "simplex-triple-centroid-free",
            Family::SphereVertexFree => "sphere-vertex-free",
            Family::SpherePairFree => "sphere-pair-free",
            Family::SphereNine => "sphere-nine",
            Family::SphereShiftedVertexFree => "sphere-shifted-vertex-free",
            Family::SphereFour => "sphere-four",
            Family::Degree5 => "degree5",
        }
    }

    pub fn degree(self) -> u32 {
        if self == Family::Degree5 {
            5
        } else {
            4
        }
    }

    /// The weight exponent the closed forms were derived for.
    pub fn native_gamma(self) -> Option<WeightExponent> {
        match self {
            Family::SimplexD123
            | Family::SimplexVertexFree
            | Family::SimplexPairFree
            | Family::SimplexTripleVertexFree
            | Family::SimplexTripleFree
            | Family::SimplexTripleCentroidFree => Some(WeightExponent::uniform()),
            Family::Degree5 => None,
            _ => Some(WeightExponent::chebyshev()),
        }
    }

    /// Families for the simplex survey at index 4.
    pub fn simplex_degree4() -> Vec<Family> {
        Family::ALL[..6].to_vec()
    }

    pub fn ks(self, d: usize, m: usize) -> Vec<usize> {
        match self {
            Family::SimplexD123 => vec![d + 1, 1, 2, 3],
            Family::SimplexTripleVertexFree | Family::SimplexTripleFree | Family::SimplexTripleCentroidFree => {
                vec![d + 1, 1, 3, m]
            }
            Family::Degree5 => vec![d + 1, 1, 2, 3, m],
            _ => vec![d + 1, 1, 2, m],
        }
    }

    /// Whether the family takes an `m` parameter.
    pub fn has_m(self) -> bool {
        self != Family::SimplexD123
    }

    fn m_values(self, d: usize) -> Vec<usize> {
        match self {
            Family::SimplexD123 => vec![0],
            Family::SimplexVertexFree | Family::SimplexPairFree => (4..=d).collect(),
            Family::SimplexTripleVertexFree | Family::SimplexTripleFree | Family::SimplexTripleCentroidFree => {
                (4..=d).collect()
            }
            Family::Degree5 => (4..=d + 1).collect(),
            _ => (3..=d).collect(),
        }
    }

    fn p_values(self, d: usize, m: usize) -> Vec<usize> {
        match self {
            Family::SphereShiftedVertexFree if m >= 3 && m - 1 <= d => vec![m - 1],
            Family::SphereShiftedVertexFree => Vec::new(),
            Family::SphereFour => (2..d).collect(),
            Family::Degree5 => (2..=d).collect(),
            _ => vec![d],
        }
    }

    /// Index into `ks` of the weight the family drives to zero.
    fn zero_targets(self) -> Vec<usize> {
        match self {
            Family::SimplexD123 => vec![0, 1, 2, 3],
            Family::SimplexVertexFree
            | Family::SimplexTripleVertexFree
            | Family::SphereVertexFree
            | Family::SphereShiftedVertexFree => vec![1],
            Family::SimplexPairFree | Family::SimplexTripleFree | Family::SpherePairFree => vec![2],
            Family::SimplexTripleCentroidFree => vec![0],
            Family::SphereNine | Family::SphereFour | Family::Degree5 => Vec::new(),
        }
    }

    /// The printed closed form for `a`, if the family has one at these parameters.
    pub fn closed_form(self, d: usize, m: usize, p: usize) -> Result<Option<ExactScalar>, ConstructError> {
        let (d, m, p) = (d as i64, m as i64, p as i64);
        let z = |n: i64| ExactScalar::from_integer(n);
        let root = |disc: i64| -> Result<Option<ExactScalar>, ConstructError> {
            if disc < 0 {
                return Ok(None);
            }
            Ok(Some(ExactScalar::sqrt_of_rational(&Rational::from_integer(disc.into())).map_err(|e| {
                ConstructError::Degenerate(e.to_string())
            })?))
        };
        let quotient = |num: i64, den: i64| -> Option<ExactScalar> { (den != 0).then(|| ExactScalar::from_ratio(num, den)) };
        Ok(match self {
            Family::SimplexD123 => {
                let disc = 1252 - 372 * d + 93 * d * d - 14 * d * d * d + d * d * d * d;
                root(disc)?.map(|r| (z(38 - 7 * d + d * d) + r) / z(8))
            }
            Family::SimplexVertexFree => {
                if m == 1 {
                    return Ok(None);
                }
                let lin = 16 + d - d * d + 2 * (d - 9) * m;
                let disc = -16 * (d - 2) * (d - m) * (m - 1) + lin * lin;
                root(disc)?.map(|r| (z(-16 - d + d * d + 18 * m - 2 * d * m) + r) / z(4 * (m - 1)))
            }
            Family::SimplexPairFree => quotient(2 * (d - m), d + 2 - 2 * m),
            Family::SphereVertexFree => {
                if m == 1 {
                    return Ok(None);
                }
                let lin = 43 - d * d - 45 * m + 3 * d * m;
                let disc = -4 * (3 * m - 3) * (3 * d * d - 6 * d + 6 * m - 3 * d * m) + lin * lin;
                root(disc)?.map(|r| (z(-43 + d * d + 45 * m - 3 * d * m) + r) / z(6 * (m - 1)))
            }
            Family::SpherePairFree => {
                if d == 4 * m - 6 {
                    Some(z(9))
                } else if d == 4 * m - 7 {
                    quotient(3 * (3 * m - 7), m - 3)
                } else if d == 4 * m - 8 {
                    quotient(3 * (3 * m - 8), m - 4)
                } else {
                    None
                }
            }
            Family::SphereNine => Some(z(9)),
            Family::SphereShiftedVertexFree => {
                let lin = -49 + d * d + 51 * m - 3 * d * (2 + m);
                let disc = 36 * d * (2 + d - m) * (m - 3) + lin * lin;
                root(disc)?.map(|r| (z(-49 - 6 * d + d * d + 51 * m - 3 * d * m) + r) / z(6 * d))
            }
            Family::SphereFour => Some(z(4)),
            _ => {
                let _ = p;
                None
            }
        })
    }

    fn solve(self, d: usize, m: usize, p: usize, gamma: &WeightExponent, a: &ExactScalar) -> Result<RuleSolution, ConstructError> {
        let ks = self.ks(d, m);
        if self == Family::Degree5 {
            solve_degree5(&Degree5Problem { d, gamma: gamma.clone(), ks, p })
        } else {
            solve_degree4(&Degree4Problem { d, gamma: gamma.clone(), ks, p, a: a.clone() })
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Family {
    type Err = ConstructError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.id() == s.trim())
            .ok_or_else(|| ConstructError::UnknownFamily(s.to_string()))
    }
}

/// The family's closed form for `a`, falling back to the smallest admissible
/// value that zeroes the family's designated weight. For `degree5` the
/// forced `a` is returned.
pub fn candidate_a(family: &str, d: usize, m: usize, p: usize) -> Result<ExactScalar, ConstructError> {
    let family: Family = family.parse()?;
    if let Some(a) = family.closed_form(d, m, p)? {
        return Ok(a);
    }
    let gamma = family.native_gamma().unwrap_or_else(WeightExponent::uniform);
    if family == Family::Degree5 {
        return Ok(super::degree5_parameters(d, &gamma, p)?.0);
    }
    let ks = family.ks(d, m);
    for target in family.zero_targets() {
        if let Some(a) = zero_weight_parameters(d, &gamma, &ks, p, target)?.into_iter().next() {
            return Ok(a);
        }
    }
    Err(ConstructError::NoCandidate(format!("{family} at d={d}, m={m}, p={p}")))
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub degree: u32,
    pub gamma: WeightExponent,
    pub d_range: std::ops::RangeInclusive<usize>,
    pub families: Vec<Family>,
    /// Upper bound on `m`, if any.
    pub max_m: Option<usize>,
    pub use_closed_forms: bool,
    pub use_zero_weight_roots: bool,
    pub extra_a: Vec<Rational>,
}

impl SearchConfig {
    pub fn new(degree: u32, gamma: WeightExponent, d_range: std::ops::RangeInclusive<usize>, families: Vec<Family>) -> Self {
        Self {
            degree,
            gamma,
            d_range,
            families,
            max_m: None,
            use_closed_forms: true,
            use_zero_weight_roots: true,
            extra_a: Vec::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchHit {
    pub family: Family,
    pub d: usize,
    /// Zero for families without an `m` parameter.
    pub m: usize,
    pub p: usize,
    pub solution: RuleSolution,
}

impl SearchHit {
    pub fn a(&self) -> &ExactScalar {
        &self.solution.a
    }
}

fn candidates(config: &SearchConfig, family: Family, d: usize, m: usize, p: usize) -> Vec<ExactScalar> {
    if family == Family::Degree5 {
        return vec![ExactScalar::zero()];
    }
    let mut out: Vec<ExactScalar> = Vec::new();
    if config.use_closed_forms && family.native_gamma().as_ref() == Some(&config.gamma) {
        if let Ok(Some(a)) = family.closed_form(d, m, p) {
            out.push(a);
        }
    }
    if config.use_zero_weight_roots {
        let ks = family.ks(d, m);
        for target in family.zero_targets() {
            if let Ok(roots) = zero_weight_parameters(d, &config.gamma, &ks, p, target) {
                out.extend(roots);
            }
        }
    }
    out.extend(config.extra_a.iter().cloned().map(ExactScalar::from));
    let mut unique: Vec<ExactScalar> = Vec::new();
    for a in out {
        if !unique.contains(&a) {
            unique.push(a);
        }
    }
    unique
}

/// Enumerate the configured families and keep the rules whose weights are
/// all non-negative. Output is sorted by `(d, family, m, p, a)`.
pub fn search_positive(config: &SearchConfig) -> Vec<SearchHit> {
    let mut tasks = Vec::new();
    for &family in &config.families {
        if family.degree() != config.degree {
            continue;
        }
        for d in config.d_range.clone() {
            for m in family.m_values(d) {
                if config.max_m.is_some_and(|mm| family.has_m() && m > mm) {
                    continue;
                }
                for p in family.p_values(d, m) {
                    tasks.push((family, d, m, p));
                }
            }
        }
    }
    let mut hits: Vec<SearchHit> = tasks
        .par_iter()
        .flat_map_iter(|&(family, d, m, p)| {
            candidates(config, family, d, m, p)
                .into_iter()
                .filter_map(move |a| {
                    let solution = family.solve(d, m, p, &config.gamma, &a).ok()?;
                    (solution.is_positive() && solution.rule.is_positive()).then_some(SearchHit { family, d, m, p, solution })
                })
                .collect::<Vec<_>>()
        })
        .collect();
    hits.sort_by(|x, y| {
        (x.d, x.family, x.m, x.p)
            .cmp(&(y.d, y.family, y.m, y.p))
            .then_with(|| x.a().to_f64().total_cmp(&y.a().to_f64()))
            .then_with(|| x.a().to_string().cmp(&y.a().to_string()))
    });
    hits
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms_at_known_points() {
        assert_eq!(candidate_a("simplex-pair-free", 7, 4, 7).unwrap(), ExactScalar::from_integer(6));
        assert_eq!(candidate_a("sphere-pair-free", 17, 6, 17).unwrap(), ExactScalar::from_integer(11));
        assert_eq!(candidate_a("sphere-four", 9, 4, 5).unwrap(), ExactScalar::from_integer(4));
        assert_eq!(candidate_a("simplex-vertex-free", 4, 4, 4).unwrap(), ExactScalar::from_integer(6));
        assert!(matches!(candidate_a("nope", 3, 3, 3), Err(ConstructError::UnknownFamily(_))));
    }

    #[test]
    fn family_ids_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.id().parse::<Family>().unwrap(), f);
        }
    }

    #[test]
    fn small_survey_is_sorted_and_positive() {
        let cfg = SearchConfig::new(4, WeightExponent::uniform(), 3..=6, Family::simplex_degree4());
        let hits = search_positive(&cfg);
        assert!(!hits.is_empty());
        for w in hits.windows(2) {
            assert!((w[0].d, w[0].family, w[0].m, w[0].p) <= (w[1].d, w[1].family, w[1].m, w[1].p));
        }
        for d in 3..=6 {
            assert!(hits.iter().any(|h| h.d == d), "no rule for d = {d}");
        }
        assert!(hits.iter().all(|h| h.solution.rule.total_weight().is_one()));
    }
}
