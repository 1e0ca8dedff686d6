//! Matrix inversion by LU factorization with partial pivoting.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Pivots smaller than this multiple of `‖M‖_F` count as zero.
pub const PIVOT_TOL: f64 = 1e-13;

/// Inverse of a square matrix.
///
/// Fails with `Singular` on a vanishing pivot and with `IllConditioned` when the
/// Frobenius condition estimate `‖M‖_F‖M⁻¹‖_F` exceeds `cond_limit`.
pub fn invert(m: &ComplexMatrix, cond_limit: f64) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "inverse needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let norm = m.frob_norm();
    let pivot_floor = PIVOT_TOL * norm;

    let mut lu = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();

    for k in 0..n {
        let (pivot_row, pivot_mag) = (k..n)
            .map(|i| (i, lu[(i, k)].norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty pivot range");
        if pivot_mag <= pivot_floor || pivot_mag == 0.0 {
            return Err(Error::Singular { pivot: pivot_mag });
        }
        if pivot_row != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(pivot_row, j)];
                lu[(pivot_row, j)] = tmp;
            }
            perm.swap(k, pivot_row);
        }
        let pivot = lu[(k, k)];
        for i in k + 1..n {
            let factor = lu[(i, k)] / pivot;
            lu[(i, k)] = factor;
            for j in k + 1..n {
                let sub = factor * lu[(k, j)];
                lu[(i, j)] -= sub;
            }
        }
    }

    // Solve L U x = P e_j column by column.
    let mut inv = ComplexMatrix::zeros(n, n);
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        for i in 0..n {
            x[i] = if perm[i] == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            for k in 0..i {
                let l = lu[(i, k)];
                let xk = x[k];
                x[i] -= l * xk;
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let u = lu[(i, k)];
                let xk = x[k];
                x[i] -= u * xk;
            }
            x[i] /= lu[(i, i)];
        }
        inv.set_col(j, &x);
    }

    let estimate = norm * inv.frob_norm();
    if !estimate.is_finite() || estimate > cond_limit {
        return Err(Error::IllConditioned {
            estimate,
            limit: cond_limit,
        });
    }
    Ok(inv)
}
