//! Integer counting helpers shared by the moment, orbit and design code.

use num_bigint::BigUint;
use num_traits::{One, Zero};

pub fn factorial(n: usize) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `binomial` for callers that know the result fits.
pub fn binomial_u64(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial overflow")
}

/// `(Σ parts)! / Π parts!`
pub fn multinomial(parts: &[usize]) -> BigUint {
    let total: usize = parts.iter().sum();
    let mut acc = factorial(total);
    for &p in parts {
        acc /= factorial(p);
    }
    acc
}

/// Lexicographic k-subsets of `0..n`.
pub struct Subsets {
    n: usize,
    current: Option<Vec<usize>>,
}

pub fn subsets(n: usize, k: usize) -> Subsets {
    let current = if k <= n { Some((0..k).collect()) } else { None };
    Subsets { n, current }
}

impl Iterator for Subsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                return Some(out);
            }
        }
        Some(out)
    }
}

/// Colexicographic rank of a sorted subset, matching `binomial_u64` sizes.
pub fn subset_rank(subset: &[usize]) -> usize {
    subset
        .iter()
        .enumerate()
        .map(|(i, &x)| binomial_u64(x, i + 1) as usize)
        .sum()
}

/// Distinct permutations of a multiset, in lexicographic order.
pub fn multiset_permutations<T: Ord + Clone>(items: &[T]) -> Vec<Vec<T>> {
    let mut cur: Vec<T> = items.to_vec();
    cur.sort();
    let mut out = vec![cur.clone()];
    loop {
        let n = cur.len();
        if n < 2 {
            return out;
        }
        let mut i = n - 1;
        while i > 0 && cur[i - 1] >= cur[i] {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        let mut j = n - 1;
        while cur[j] <= cur[i - 1] {
            j -= 1;
        }
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// All exponent vectors of length `n` with total `t`, lexicographically descending.
pub fn compositions(t: u32, n: usize) -> Vec<Vec<u32>> {
    fn rec(t: u32, n: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 1 {
            prefix.push(t);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=t).rev() {
            prefix.push(first);
            rec(t - first, n - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(t, n, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(binomial(11, 4), BigUint::from(330u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(multinomial(&[2, 1, 1]), BigUint::from(12u32));
        assert_eq!(subsets(5, 3).count(), 10);
        assert_eq!(multiset_permutations(&[1, 1, 0, 0]).len(), 6);
        assert_eq!(compositions(4, 3).len(), 15);
    }

    #[test]
    fn colex_rank_is_a_bijection() {
        let mut seen: Vec<usize> = subsets(7, 3).map(|s| subset_rank(&s)).collect();
        seen.sort();
        assert_eq!(seen, (0..35).collect::<Vec<_>>());
    }
}
