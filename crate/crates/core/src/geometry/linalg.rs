//! Small dense linear algebra on row-major `Vec<T>` matrices.

use crate::scalar::Real;

/// Solves `m * x = rhs` for square `m` (row-major, `n x n`) by Gaussian
/// elimination with partial pivoting. Returns `None` when a pivot falls
/// below `pivot_tol` times the largest absolute entry.
pub(crate) fn solve<T: Real>(mut m: Vec<T>, mut rhs: Vec<T>, pivot_tol: T) -> Option<Vec<T>> {
    let n = rhs.len();
    debug_assert_eq!(m.len(), n * n);
    let scale = m.iter().fold(T::zero(), |acc, v| acc.max(v.abs()));
    if scale == T::zero() {
        return None;
    }
    let threshold = pivot_tol * scale;
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&a, &b| {
                m[a * n + col]
                    .abs()
                    .partial_cmp(&m[b * n + col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(col);
        if m[pivot_row * n + col].abs() <= threshold {
            return None;
        }
        if pivot_row != col {
            for k in 0..n {
                m.swap(col * n + k, pivot_row * n + k);
            }
            rhs.swap(col, pivot_row);
        }
        let pivot = m[col * n + col];
        for row in col + 1..n {
            let factor = m[row * n + col] / pivot;
            if factor == T::zero() {
                continue;
            }
            for k in col..n {
                let v = m[col * n + k];
                m[row * n + k] = m[row * n + k] - factor * v;
            }
            rhs[row] = rhs[row] - factor * rhs[col];
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for k in row + 1..n {
            acc = acc - m[row * n + k] * x[k];
        }
        x[row] = acc / m[row * n + row];
    }
    Some(x)
}

/// Numerical rank of a `rows x cols` row-major matrix; entries whose
/// eliminated magnitude is at most `tol` count as zero.
pub(crate) fn rank<T: Real>(mut m: Vec<T>, rows: usize, cols: usize, tol: T) -> usize {
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let (best, best_abs) = (row..rows)
            .map(|r| (r, m[r * cols + col].abs()))
            .fold((row, T::zero()), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if best_abs <= tol {
            continue;
        }
        for k in 0..cols {
            m.swap(row * cols + k, best * cols + k);
        }
        let pivot = m[row * cols + col];
        for r in row + 1..rows {
            let factor = m[r * cols + col] / pivot;
            for k in col..cols {
                let v = m[row * cols + k];
                m[r * cols + k] = m[r * cols + k] - factor * v;
            }
        }
        row += 1;
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_pivoting_system() {
        let m: Vec<f64> = vec![0.0, 1.0, 2.0, 1.0];
        let x = solve(m, vec![1.0, 4.0], 1e-14).unwrap();
        assert!((x[0] - 1.5).abs() < 1e-15 && (x[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn singular_system_is_reported() {
        assert!(solve(vec![1.0, 2.0, 2.0, 4.0], vec![1.0, 2.0], 1e-12).is_none());
    }

    #[test]
    fn rank_of_dependent_rows() {
        let m = vec![1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 0.0, 1.0, 1.0];
        assert_eq!(rank(m, 3, 3, 1e-10), 2);
    }
}
