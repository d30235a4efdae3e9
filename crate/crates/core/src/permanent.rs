//! Exact matrix permanents (Ryser's formula with Gray-code updates) and the
//! Wick-moment oracle E ∏ |X_j|^{2p_j} = per(C repeated by multiplicities).

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::sampling::CovarianceSpec;

/// Largest dimension Ryser is allowed to chew on (cost 2^m · m).
pub const PERMANENT_DIM_BUDGET: usize = 24;

/// Exact permanent by Ryser's inclusion–exclusion. The Gray-code walk flips
/// one column per step, so each of the 2^m - 1 subsets costs O(m).
pub fn permanent(rows: &[Vec<Complex64>]) -> Result<Complex64> {
    let m = rows.len();
    if m == 0 {
        return Ok(Complex64::ONE); // empty product convention
    }
    if rows.iter().any(|r| r.len() != m) {
        return Err(CoreError::InvalidInput("permanent needs a square matrix".into()));
    }
    if m > PERMANENT_DIM_BUDGET {
        return Err(CoreError::BudgetExceeded { requested: m, budget: PERMANENT_DIM_BUDGET });
    }
    let mut row_sums = alloc::vec![Complex64::ZERO; m];
    let mut total = Complex64::ZERO;
    let mut popcount: i32 = 0;
    for k in 1u64..(1u64 << m) {
        let j = k.trailing_zeros() as usize; // bit flipped by the Gray step
        let gray = k ^ (k >> 1);
        if gray & (1 << j) != 0 {
            for (sum, row) in row_sums.iter_mut().zip(rows) {
                *sum += row[j];
            }
            popcount += 1;
        } else {
            for (sum, row) in row_sums.iter_mut().zip(rows) {
                *sum -= row[j];
            }
            popcount -= 1;
        }
        let prod: Complex64 = row_sums.iter().product();
        if popcount % 2 == 0 {
            total += prod;
        } else {
            total -= prod;
        }
    }
    if m % 2 == 1 {
        total = -total;
    }
    Ok(total)
}

/// E ∏_j |X_j|^{2p_j} for a centered complex Gaussian vector X with
/// covariance C: the permanent of the m×m matrix (m = Σ p_j) obtained by
/// repeating row/column j of C exactly p_j times.
pub fn wick_moment(spec: &CovarianceSpec, p: &[usize]) -> Result<f64> {
    if p.len() != spec.output_dim() {
        return Err(CoreError::DimensionMismatch {
            expected: spec.output_dim(),
            got: p.len(),
        });
    }
    let c = spec.covariance();
    wick_moment_of_covariance(&c, p)
}

/// Same as [`wick_moment`] but straight from the covariance matrix.
pub fn wick_moment_of_covariance(c: &crate::matrix::HermitianMatrix, p: &[usize]) -> Result<f64> {
    if p.len() != c.dim() {
        return Err(CoreError::DimensionMismatch { expected: c.dim(), got: p.len() });
    }
    let m: usize = p.iter().sum();
    if m > PERMANENT_DIM_BUDGET {
        return Err(CoreError::BudgetExceeded { requested: m, budget: PERMANENT_DIM_BUDGET });
    }
    let mut index = Vec::with_capacity(m);
    for (j, &mult) in p.iter().enumerate() {
        for _ in 0..mult {
            index.push(j);
        }
    }
    let rows: Vec<Vec<Complex64>> = index
        .iter()
        .map(|&a| index.iter().map(|&b| c.entry(a, b)).collect())
        .collect();
    let per = permanent(&rows)?;
    debug_assert!(
        per.im.abs() <= 1e-10 * (1.0 + per.norm()),
        "moment permanent must be real, got {per}"
    );
    Ok(per.re)
}
