//! Matrix exponential by scaling and squaring around a truncated Taylor series.

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Scaled argument norm bound before the Taylor core runs.
const SCALED_NORM: f64 = 0.5;
/// Truncation order; at ‖X‖_F ≤ 0.5 the remainder is below 1e-22.
const TAYLOR_ORDER: usize = 18;

pub fn mat_exp(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !x.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "exponential needs a square matrix, got {}x{}",
            x.rows(),
            x.cols()
        )));
    }
    if !x.all_finite() {
        return Err(Error::NonFinite);
    }
    let n = x.rows();
    let norm = x.frob_norm();
    let mut squarings = 0u32;
    if norm > SCALED_NORM {
        squarings = (norm / SCALED_NORM).log2().ceil() as u32;
    }
    let scaled = x.scale_real(0.5f64.powi(squarings as i32));

    // Horner: I + X(I + X/2(I + X/3(…)))
    let identity = ComplexMatrix::identity(n);
    let mut acc = identity.clone();
    for k in (1..=TAYLOR_ORDER).rev() {
        acc = &identity + &(&scaled * &acc).scale_real(1.0 / k as f64);
    }
    for _ in 0..squarings {
        acc = &acc * &acc;
    }
    Ok(acc)
}
