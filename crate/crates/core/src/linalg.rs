//! Dense Gaussian elimination over `Scalar`.
//!
//! One routine serves every linear problem in the crate: recurrence
//! detection, mode decomposition, partial fractions, subspace membership.
//! Exact rows eliminate exactly; float rows use a relative threshold.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Solves A x = b for a possibly non-square, possibly inconsistent system.
///
/// Returns Ok(None) when the system is inconsistent, Ok(Some(x)) otherwise
/// with free variables set to zero. `float_tol` is the relative zero
/// threshold for float entries; exact entries are tested exactly.
pub fn solve_any(a: &[Vec<Scalar>], b: &[Scalar], float_tol: f64) -> Result<Option<Vec<Scalar>>> {
    let rows = a.len();
    if b.len() != rows {
        return Err(Error::InvalidSystem {
            detail: format!("matrix has {rows} rows but rhs has {}", b.len()),
        });
    }
    let cols = a.first().map_or(0, |r| r.len());
    if a.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidSystem {
            detail: "ragged matrix".to_string(),
        });
    }

    let mut m: Vec<Vec<Scalar>> = a.iter().map(|r| r.to_vec()).collect();
    let mut rhs: Vec<Scalar> = b.to_vec();

    let scale = m
        .iter()
        .flatten()
        .chain(rhs.iter())
        .map(|s| s.abs())
        .fold(0.0_f64, f64::max)
        .max(1.0);
    let near_zero = |s: &Scalar| s.is_zero_approx(float_tol * scale);

    let mut pivot_col_of_row: Vec<(usize, usize)> = Vec::new();
    let mut row = 0usize;
    for col in 0..cols {
        // Partial pivoting by modulus keeps the float path stable and is
        // harmless for exact rows.
        let pivot = (row..rows)
            .filter(|&r| !near_zero(&m[r][col]))
            .max_by(|&r1, &r2| m[r1][col].abs().total_cmp(&m[r2][col].abs()));
        let Some(p) = pivot else { continue };
        m.swap(row, p);
        rhs.swap(row, p);
        let inv = m[row][col].inv()?;
        for c in col..cols {
            m[row][c] = &m[row][c] * &inv;
        }
        rhs[row] = &rhs[row] * &inv;
        for r in 0..rows {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..cols {
                    let t = &m[r][c] - &(&f * &m[row][c]);
                    m[r][c] = t;
                }
                let t = &rhs[r] - &(&f * &rhs[row]);
                rhs[r] = t;
            }
        }
        pivot_col_of_row.push((row, col));
        row += 1;
        if row == rows {
            break;
        }
    }

    for r in row..rows {
        if !near_zero(&rhs[r]) {
            return Ok(None);
        }
    }

    let mut x = vec![Scalar::zero(); cols];
    for &(r, c) in &pivot_col_of_row {
        x[c] = rhs[r].clone();
    }
    Ok(Some(x))
}
