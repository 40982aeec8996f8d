//! t-(v, k, λ) designs.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::ReductionError;
use crate::combinatorics::{binomial_u64, subset_rank, subsets};

/// Block-design parameters without the blocks, for count arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DesignSpec {
    pub t: usize,
    pub v: usize,
    pub k: usize,
    pub lambda: u64,
}

impl DesignSpec {
    pub fn new(t: usize, v: usize, k: usize, lambda: u64) -> Self {
        Self { t, v, k, lambda }
    }

    /// `b = λ C(v,t) / C(k,t)`; errors when the quotient is not integral.
    pub fn block_count(&self) -> Result<u64, ReductionError> {
        if self.t > self.k || self.k > self.v {
            return Err(ReductionError::Mismatch(format!("need t ≤ k ≤ v, got {self}")));
        }
        let num = self.lambda as u128 * binomial_u64(self.v, self.t) as u128;
        let den = binomial_u64(self.k, self.t) as u128;
        if !num.is_multiple_of(den) {
            return Err(ReductionError::Mismatch(format!("{self}: λ·C(v,t)/C(k,t) is not an integer")));
        }
        Ok((num / den) as u64)
    }
}

impl fmt::Display for DesignSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-({},{},{})", self.t, self.v, self.k, self.lambda)
    }
}

impl FromStr for DesignSpec {
    type Err = ReductionError;
    /// `t-(v,k,λ)`, e.g. `4-(11,5,1)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ReductionError::Format { line: 1, column: 1, message: format!("expected t-(v,k,lambda), got {s:?}") };
        let (t, rest) = s.trim().split_once('-').ok_or_else(bad)?;
        let inner = rest.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let nums: Vec<u64> = inner.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
        if nums.len() != 3 {
            return Err(bad());
        }
        Ok(Self::new(t.trim().parse().map_err(|_| bad())?, nums[0] as usize, nums[1] as usize, nums[2]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinatorialDesign {
    spec: DesignSpec,
    blocks: Vec<Vec<usize>>,
}

impl CombinatorialDesign {
    pub fn spec(&self) -> DesignSpec {
        self.spec
    }

    pub fn v(&self) -> usize {
        self.spec.v
    }

    pub fn k(&self) -> usize {
        self.spec.k
    }

    pub fn t(&self) -> usize {
        self.spec.t
    }

    pub fn lambda(&self) -> u64 {
        self.spec.lambda
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// `v × b` zero-one matrix with blocks as columns.
    pub fn incidence_matrix(&self) -> Vec<Vec<u8>> {
        let mut m = vec![vec![0u8; self.blocks.len()]; self.spec.v];
        for (j, block) in self.blocks.iter().enumerate() {
            for &i in block {
                m[i][j] = 1;
            }
        }
        m
    }
}

/// Check that every `t`-subset of the `v` points lies in the same number of
/// blocks. Blocks are normalised to sorted order.
pub fn validate_design(blocks: Vec<Vec<usize>>, v: usize, k: usize, t: usize) -> Result<CombinatorialDesign, ReductionError> {
    if t == 0 || t > k || k > v {
        return Err(ReductionError::Mismatch(format!("need 1 ≤ t ≤ k ≤ v, got t={t}, k={k}, v={v}")));
    }
    let mut blocks = blocks;
    for (j, block) in blocks.iter_mut().enumerate() {
        block.sort_unstable();
        let distinct = block.windows(2).all(|w| w[0] != w[1]);
        if block.len() != k || !distinct || block.iter().any(|&i| i >= v) {
            return Err(ReductionError::Mismatch(format!("block {j} is not a {k}-subset of 0..{v}")));
        }
    }
    if blocks.is_empty() {
        return Err(ReductionError::Mismatch("design has no blocks".into()));
    }
    let slots = binomial_u64(v, t) as usize;
    let counts = blocks
        .par_iter()
        .fold(
            || vec![0u64; slots],
            |mut acc, block| {
                for sub in subsets(k, t) {
                    let chosen: Vec<usize> = sub.iter().map(|&i| block[i]).collect();
                    acc[subset_rank(&chosen)] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; slots],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let lambda = counts[0];
    if let Some(sub) = subsets(v, t).find(|s| counts[subset_rank(s)] != lambda) {
        let count = counts[subset_rank(&sub)];
        return Err(ReductionError::InvalidDesign { subset: sub, count, expected: lambda });
    }
    let spec = DesignSpec::new(t, v, k, lambda);
    if spec.block_count()? != blocks.len() as u64 {
        return Err(ReductionError::Mismatch(format!("{spec} needs {} blocks, got {}", spec.block_count()?, blocks.len())));
    }
    Ok(CombinatorialDesign { spec, blocks })
}

/// All `v` cyclic shifts of each base block (given as 0/1 vectors), without repeats.
pub fn cyclic_design(base: &[Vec<u8>], v: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for b in base {
        let support: Vec<usize> = b.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, _)| i).collect();
        for shift in 0..v {
            let mut block: Vec<usize> = support.iter().map(|&i| (i + shift) % v).collect();
            block.sort_unstable();
            if !out.contains(&block) {
                out.push(block);
            }
        }
    }
    out
}

/// Every `k`-subset of a `v`-set: a `t`-design for all `t ≤ k`.
pub fn complete_design(v: usize, k: usize, t: usize) -> Result<CombinatorialDesign, ReductionError> {
    validate_design(subsets(v, k).collect(), v, k, t)
}

const DESIGN_4_11_5_1: &str = include_str!("../../data/4-11-5-1.design");

/// The 4-(11,5,1) design generated by six cyclic base blocks.
pub fn design_4_11_5_1() -> CombinatorialDesign {
    DESIGN_4_11_5_1.parse().expect("bundled design is valid")
}

/// The six base vectors of the 4-(11,5,1) design.
pub fn base_blocks_4_11_5_1() -> Vec<Vec<u8>> {
    [
        [1, 1, 1, 1, 0, 0, 0, 0, 0, 1, 0],
        [1, 1, 1, 0, 1, 0, 0, 1, 0, 0, 0],
        [1, 1, 1, 0, 0, 1, 1, 0, 0, 0, 0],
        [1, 1, 0, 1, 1, 0, 0, 0, 1, 0, 0],
        [1, 1, 0, 1, 0, 1, 0, 1, 0, 0, 0],
        [1, 1, 0, 0, 1, 0, 1, 0, 0, 1, 0],
    ]
    .iter()
    .map(|r| r.to_vec())
    .collect()
}

impl fmt::Display for CombinatorialDesign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {} {}", self.spec.v, self.spec.k, self.spec.t, self.spec.lambda)?;
        for b in &self.blocks {
            let line: Vec<String> = b.iter().map(|i| i.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Numbers on a line with 1-based column positions, skipping `#` comments.
pub(super) fn numbers<T: FromStr>(line: &str, lineno: usize) -> Result<Vec<T>, ReductionError> {
    let body = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut col = 0;
    for tok in body.split(' ') {
        if !tok.is_empty() {
            out.push(tok.parse().map_err(|_| ReductionError::Format {
                line: lineno,
                column: col + 1,
                message: format!("bad number {tok:?}"),
            })?);
        }
        col += tok.chars().count() + 1;
    }
    Ok(out)
}

impl FromStr for CombinatorialDesign {
    type Err = ReductionError;
    /// Header `v k t lambda`, then one block of point indices per line.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s.lines().enumerate().map(|(i, l)| (i + 1, l.replace('\t', " "))).filter(|(_, l)| {
            let body = l.split('#').next().unwrap_or("");
            !body.trim().is_empty()
        });
        let (hl, header) = lines.next().ok_or(ReductionError::Format { line: 1, column: 1, message: "empty design file".into() })?;
        let h: Vec<u64> = numbers(&header, hl)?;
        if h.len() != 4 {
            return Err(ReductionError::Format { line: hl, column: 1, message: "header must be `v k t lambda`".into() });
        }
        let (v, k, t, lambda) = (h[0] as usize, h[1] as usize, h[2] as usize, h[3]);
        let mut blocks = Vec::new();
        for (ln, line) in lines {
            let block: Vec<usize> = numbers(&line, ln)?;
            if block.len() != k {
                return Err(ReductionError::Format { line: ln, column: 1, message: format!("block has {} points, expected {k}", block.len()) });
            }
            blocks.push(block);
        }
        let design = validate_design(blocks, v, k, t)?;
        if design.lambda() != lambda {
            return Err(ReductionError::Format {
                line: hl,
                column: 1,
                message: format!("header says lambda = {lambda}, blocks give {}", design.lambda()),
            });
        }
        Ok(design)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_base_gives_steiner_system() {
        let blocks = cyclic_design(&base_blocks_4_11_5_1(), 11);
        assert_eq!(blocks.len(), 66);
        let d = validate_design(blocks, 11, 5, 4).unwrap();
        assert_eq!(d.lambda(), 1);
        assert_eq!(d, design_4_11_5_1());
        assert_eq!(d.incidence_matrix().iter().map(|r| r.iter().map(|&x| x as usize).sum::<usize>()).sum::<usize>(), 330);
    }

    #[test]
    fn missing_block_is_witnessed() {
        let mut blocks = cyclic_design(&base_blocks_4_11_5_1(), 11);
        let removed = blocks.remove(7);
        match validate_design(blocks, 11, 5, 4) {
            Err(ReductionError::InvalidDesign { subset, count, expected }) => {
                assert_eq!((count, expected), (0, 1));
                assert!(subset.iter().all(|p| removed.contains(p)));
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn complete_design_lambda() {
        let d = complete_design(8, 4, 2).unwrap();
        assert_eq!(d.lambda(), binomial_u64(6, 2));
        assert!(cyclic_design(&[], 5).is_empty());
        assert!(cyclic_design(&[vec![1, 0, 1, 0]], 4).len() <= 4);
    }

    #[test]
    fn file_round_trip_and_errors() {
        let d = design_4_11_5_1();
        let text = d.to_string();
        assert_eq!(text.parse::<CombinatorialDesign>().unwrap(), d);
        let err = "11 5 4 1\n0 1 x 3 9\n".parse::<CombinatorialDesign>().unwrap_err();
        assert!(matches!(err, ReductionError::Format { line: 2, column: 5, .. }), "{err:?}");
    }

    #[test]
    fn block_counts() {
        assert_eq!(DesignSpec::new(4, 15, 5, 2).block_count().unwrap(), 546);
        assert_eq!("4-(12,6,4)".parse::<DesignSpec>().unwrap().block_count().unwrap(), 132);
        assert!(DesignSpec::new(4, 13, 6, 1).block_count().is_err());
    }
}
