//! Two-level orthogonal arrays over `{−1, +1}`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::design::numbers;
use super::ReductionError;
use crate::combinatorics::subsets;

/// Orthogonal-array parameters without rows, for count arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OaSpec {
    pub rows: u64,
    pub columns: usize,
    pub strength: usize,
    pub antipodal: bool,
}

impl OaSpec {
    pub fn new(rows: u64, columns: usize, strength: usize, antipodal: bool) -> Self {
        Self { rows, columns, strength, antipodal }
    }

    pub fn full_factorial(columns: usize) -> Self {
        Self::new(1u64 << columns, columns, columns, true)
    }
}

impl fmt::Display for OaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OA({},{},2,{})", self.rows, self.columns, self.strength)?;
        if self.antipodal {
            f.write_str(" antipodal")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalArray {
    rows: Vec<Vec<i8>>,
    strength: usize,
    antipodal: bool,
}

impl OrthogonalArray {
    pub fn rows(&self) -> &[Vec<i8>] {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn columns(&self) -> usize {
        self.rows[0].len()
    }

    pub fn strength(&self) -> usize {
        self.strength
    }

    /// `μ = L / 2^s`.
    pub fn index(&self) -> usize {
        self.rows.len() >> self.strength
    }

    pub fn is_antipodal(&self) -> bool {
        self.antipodal
    }

    pub fn spec(&self) -> OaSpec {
        OaSpec::new(self.rows.len() as u64, self.columns(), self.strength, self.antipodal)
    }
}

fn pattern_index(row: &[i8], cols: &[usize]) -> usize {
    cols.iter().enumerate().fold(0, |acc, (bit, &c)| acc | (usize::from(row[c] < 0) << bit))
}

/// Check that every `s`-column projection contains each sign pattern equally often.
pub fn validate_oa(rows: Vec<Vec<i8>>, s: usize) -> Result<OrthogonalArray, ReductionError> {
    let Some(first) = rows.first() else {
        return Err(ReductionError::Mismatch("orthogonal array has no rows".into()));
    };
    let l = first.len();
    if l == 0 || s > l || s >= usize::BITS as usize {
        return Err(ReductionError::Mismatch(format!("strength {s} needs 1..={l} columns")));
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != l || r.iter().any(|&x| x != 1 && x != -1) {
            return Err(ReductionError::Mismatch(format!("row {i} is not a ±1 vector of length {l}")));
        }
    }
    let patterns = 1usize << s;
    let expected = rows.len() / patterns;
    if !rows.len().is_multiple_of(patterns) {
        // Some pattern is short; find it on the first s columns.
        let cols: Vec<usize> = (0..s).collect();
        let mut counts = vec![0usize; patterns];
        rows.iter().for_each(|r| counts[pattern_index(r, &cols)] += 1);
        let p = (0..patterns).find(|&p| counts[p] != expected).unwrap_or(0);
        return Err(ReductionError::InvalidOa { columns: cols, pattern: decode(p, s), count: counts[p], expected });
    }
    let col_sets: Vec<Vec<usize>> = subsets(l, s).collect();
    let bad = col_sets.par_iter().find_first(|cols| {
        let mut counts = vec![0usize; patterns];
        rows.iter().for_each(|r| counts[pattern_index(r, cols)] += 1);
        counts.iter().any(|&c| c != expected)
    });
    if let Some(cols) = bad {
        let mut counts = vec![0usize; patterns];
        rows.iter().for_each(|r| counts[pattern_index(r, cols)] += 1);
        let p = (0..patterns).find(|&p| counts[p] != expected).expect("imbalanced projection");
        return Err(ReductionError::InvalidOa { columns: cols.clone(), pattern: decode(p, s), count: counts[p], expected });
    }
    let mut sorted = rows.clone();
    sorted.sort();
    let antipodal = rows.iter().all(|r| {
        let neg: Vec<i8> = r.iter().map(|x| -x).collect();
        sorted.binary_search(&neg).is_ok()
    });
    Ok(OrthogonalArray { rows, strength: s, antipodal })
}

fn decode(p: usize, s: usize) -> Vec<i8> {
    (0..s).map(|bit| if p >> bit & 1 == 1 { -1 } else { 1 }).collect()
}

/// All `2^l` sign vectors.
pub fn full_factorial(l: usize) -> OrthogonalArray {
    let rows = (0..1usize << l).map(|p| decode(p, l)).collect();
    validate_oa(rows, l).expect("full factorial is an orthogonal array")
}

/// Rows `(x_1, …, x_{l−1}, x_1⋯x_{l−1})`: strength `l−1`, antipodal for even `l`.
pub fn parity_array(l: usize) -> OrthogonalArray {
    assert!(l >= 2, "parity array needs two columns");
    let rows = (0..1usize << (l - 1))
        .map(|p| {
            let mut r = decode(p, l - 1);
            r.push(r.iter().product());
            r
        })
        .collect();
    validate_oa(rows, l - 1).expect("parity array is an orthogonal array")
}

/// `[A 1; A −1]`: one more column and twice the rows. Strength is
/// recomputed as `s + 1` when that holds, `s` otherwise.
pub fn with_sign_column(a: &OrthogonalArray) -> OrthogonalArray {
    let mut rows = Vec::with_capacity(2 * a.row_count());
    for sign in [1i8, -1] {
        for r in a.rows() {
            let mut x = r.clone();
            x.push(sign);
            rows.push(x);
        }
    }
    validate_oa(rows.clone(), a.strength() + 1).unwrap_or_else(|_| validate_oa(rows, a.strength()).expect("strength is kept"))
}

/// 1-based character column of the `idx`-th space-separated token.
fn token_column(line: &str, idx: usize) -> usize {
    let mut col = 0;
    for (i, tok) in line.split(' ').filter(|t| !t.is_empty()).enumerate() {
        col = line[col..].find(tok).map_or(col, |off| col + off);
        if i == idx {
            return line[..col].chars().count() + 1;
        }
        col += tok.len();
    }
    1
}

impl fmt::Display for OrthogonalArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.rows.len(), self.columns(), self.strength)?;
        for r in &self.rows {
            let line: Vec<&str> = r.iter().map(|&x| if x > 0 { "1" } else { "-1" }).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for OrthogonalArray {
    type Err = ReductionError;
    /// Header `L l s`, then `L` rows of `l` entries `1` or `-1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s.lines().enumerate().map(|(i, l)| (i + 1, l.replace('\t', " "))).filter(|(_, l)| {
            !l.split('#').next().unwrap_or("").trim().is_empty()
        });
        let (hl, header) = lines.next().ok_or(ReductionError::Format { line: 1, column: 1, message: "empty OA file".into() })?;
        let h: Vec<usize> = numbers(&header, hl)?;
        if h.len() != 3 {
            return Err(ReductionError::Format { line: hl, column: 1, message: "header must be `L l s`".into() });
        }
        let mut rows = Vec::with_capacity(h[0]);
        for (ln, line) in lines {
            let row: Vec<i8> = numbers(&line, ln)?;
            if row.len() != h[1] {
                return Err(ReductionError::Format { line: ln, column: 1, message: format!("row has {} entries, expected {}", row.len(), h[1]) });
            }
            if let Some(pos) = row.iter().position(|&x| x != 1 && x != -1) {
                return Err(ReductionError::Format { line: ln, column: token_column(&line, pos), message: "entries must be 1 or -1".into() });
            }
            rows.push(row);
        }
        if rows.len() != h[0] {
            return Err(ReductionError::Format { line: hl, column: 1, message: format!("header says {} rows, found {}", h[0], rows.len()) });
        }
        validate_oa(rows, h[2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_array_of_four_columns() {
        let oa = parity_array(4);
        assert_eq!((oa.row_count(), oa.columns(), oa.strength(), oa.index()), (8, 4, 3, 1));
        assert!(oa.is_antipodal());
        assert!(!parity_array(3).is_antipodal());
    }

    #[test]
    fn full_factorial_index_one() {
        let oa = full_factorial(5);
        assert_eq!(oa.index(), 1);
        assert!(oa.is_antipodal());
    }

    #[test]
    fn projection_imbalance_has_witness() {
        let mut rows = parity_array(4).rows().to_vec();
        rows[0][3] = -rows[0][3];
        assert!(matches!(validate_oa(rows, 3), Err(ReductionError::InvalidOa { .. })));
        let odd = vec![vec![1i8, 1], vec![-1, 1], vec![1, -1]];
        assert!(matches!(validate_oa(odd, 1), Err(ReductionError::InvalidOa { .. })));
    }

    #[test]
    fn sign_column_doubles() {
        let oa = with_sign_column(&parity_array(4));
        assert_eq!((oa.row_count(), oa.columns()), (16, 5));
        assert!(oa.strength() >= 3);
    }

    #[test]
    fn file_round_trip() {
        let oa = parity_array(4);
        assert_eq!(oa.to_string().parse::<OrthogonalArray>().unwrap(), oa);
        let err = "2 2 1\n1 2\n-1 -1\n".parse::<OrthogonalArray>().unwrap_err();
        assert!(matches!(err, ReductionError::Format { line: 2, column: 3, .. }), "{err:?}");
    }
}
