//! Fraction-free (Bareiss) elimination over `ExactScalar`.

use thiserror::Error;

use crate::scalar::ExactScalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix has no pivot in column(s) {0:?}")]
    Singular(Vec<usize>),
    #[error("system is inconsistent at row {0}")]
    Inconsistent(usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

struct Echelon {
    rows: Vec<Vec<ExactScalar>>,
    pivots: Vec<usize>,
}

/// Row-reduce `[A | B]` in place. Pivot rows are the first row at or below the
/// current one with a nonzero entry, so the elimination order is deterministic.
fn eliminate(matrix: &[Vec<ExactScalar>], rhs: &[Vec<ExactScalar>], n: usize) -> Echelon {
    let mut rows: Vec<Vec<ExactScalar>> = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend(rhs.iter().map(|col| col[i].clone()));
            r
        })
        .collect();
    let width = rows.first().map_or(0, |r| r.len());
    let mut prev = ExactScalar::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(p, r);
        let pivot = rows[r][c].clone();
        for i in r + 1..rows.len() {
            let factor = rows[i][c].clone();
            for j in c + 1..width {
                let v = (&pivot * &rows[i][j] - &factor * &rows[r][j]) / &prev;
                rows[i][j] = v;
            }
            rows[i][c] = ExactScalar::zero();
        }
        // Rows above the pivot row keep their Bareiss scale; only rows below change.
        prev = pivot;
        pivots.push(c);
        r += 1;
    }
    Echelon { rows, pivots }
}

pub fn rank(matrix: &[Vec<ExactScalar>]) -> usize {
    let n = matrix.first().map_or(0, |r| r.len());
    eliminate(matrix, &[], n).pivots.len()
}

/// Solve `A X = B` for several right-hand sides at once. `A` may have more
/// rows than columns provided the extra equations are consistent.
pub fn solve_many(
    matrix: &[Vec<ExactScalar>],
    rhs: &[Vec<ExactScalar>],
) -> Result<Vec<Vec<ExactScalar>>, LinalgError> {
    let m = matrix.len();
    let n = matrix.first().map_or(0, |r| r.len());
    if matrix.iter().any(|r| r.len() != n) {
        return Err(LinalgError::Dimension("ragged matrix".into()));
    }
    if rhs.iter().any(|c| c.len() != m) {
        return Err(LinalgError::Dimension(format!("right-hand side must have {m} entries")));
    }
    let ech = eliminate(matrix, rhs, n);
    if ech.pivots.len() < n {
        let free = (0..n).filter(|c| !ech.pivots.contains(c)).collect();
        return Err(LinalgError::Singular(free));
    }
    for (i, row) in ech.rows.iter().enumerate().skip(n) {
        if row[n..].iter().any(|v| !v.is_zero()) {
            return Err(LinalgError::Inconsistent(i));
        }
    }
    let mut out = Vec::with_capacity(rhs.len());
    for k in 0..rhs.len() {
        let mut x = vec![ExactScalar::zero(); n];
        for c in (0..n).rev() {
            let row = &ech.rows[c];
            let mut acc = row[n + k].clone();
            for j in c + 1..n {
                acc -= &(&row[j] * &x[j]);
            }
            x[c] = acc / &row[c];
        }
        out.push(x);
    }
    Ok(out)
}

pub fn solve(matrix: &[Vec<ExactScalar>], rhs: &[ExactScalar]) -> Result<Vec<ExactScalar>, LinalgError> {
    Ok(solve_many(matrix, &[rhs.to_vec()])?.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<ExactScalar>> {
        rows.iter().map(|r| r.iter().map(|&v| ExactScalar::from_integer(v)).collect()).collect()
    }

    fn v(xs: &[i64]) -> Vec<ExactScalar> {
        xs.iter().map(|&x| ExactScalar::from_integer(x)).collect()
    }

    #[test]
    fn square_system() {
        let a = m(&[&[0, 2, 1], &[1, 1, 1], &[2, 1, 3]]);
        let x = solve(&a, &v(&[5, 4, 7])).unwrap();
        assert_eq!(x, v(&[1, 2, 1]).into_iter().collect::<Vec<_>>());
    }

    #[test]
    fn overdetermined_consistent_and_inconsistent() {
        let a = m(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(solve(&a, &v(&[2, 3, 5])).unwrap(), v(&[2, 3]));
        assert_eq!(solve(&a, &v(&[2, 3, 6])), Err(LinalgError::Inconsistent(2)));
    }

    #[test]
    fn singular_reports_free_column() {
        let a = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(solve(&a, &v(&[1, 2])), Err(LinalgError::Singular(vec![1])));
        assert_eq!(rank(&a), 1);
    }

    #[test]
    fn surd_entries() {
        let r2: ExactScalar = "sqrt(2)".parse().unwrap();
        let a = vec![vec![ExactScalar::one(), r2.clone()], vec![r2.clone(), ExactScalar::from_integer(3)]];
        let x = solve(&a, &[ExactScalar::one(), ExactScalar::zero()]).unwrap();
        assert_eq!(x[0], ExactScalar::from_integer(3));
        assert_eq!(x[1], -r2);
    }
}
