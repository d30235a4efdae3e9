//! Hermitian and real symmetric matrices, eigenvalues, PSD tests.

use alloc::vec::Vec;

use num_complex::Complex64;
// needed for f64 math in standalone no_std builds; feature-unified builds
// resolve these methods without it and would flag the import
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{CoreError, Result};

/// Complex Hermitian matrix.
///
/// Construction symmetrizes the input, A ← (A + A*)/2, so the stored
/// entries satisfy `a[j][k] == conj(a[k][j])` exactly; inputs further than
/// `HERMITIAN_TOL` from Hermitian are rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    // row-major
    data: Vec<Complex64>,
}

/// Tolerance for accepting an almost-Hermitian input.
pub const HERMITIAN_TOL: f64 = 1e-12;

impl HermitianMatrix {
    /// Builds from arbitrary square data, symmetrizing away asymmetry noise.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(CoreError::InvalidInput("empty matrix".into()));
        }
        if rows.iter().any(|r| r.len() != dim) {
            return Err(CoreError::DimensionMismatch {
                expected: dim,
                got: rows.iter().map(Vec::len).find(|&l| l != dim).unwrap_or(0),
            });
        }
        let scale: f64 = rows
            .iter()
            .flat_map(|r| r.iter())
            .map(|c| c.norm())
            .fold(0.0, f64::max)
            .max(1.0);
        let mut data = alloc::vec![Complex64::ZERO; dim * dim];
        for j in 0..dim {
            for k in 0..dim {
                let sym = 0.5 * (rows[j][k] + rows[k][j].conj());
                if (rows[j][k] - sym).norm() > HERMITIAN_TOL * scale {
                    return Err(CoreError::InvalidInput(alloc::format!(
                        "entry ({j},{k}) is {} away from Hermitian",
                        (rows[j][k] - sym).norm()
                    )));
                }
                data[j * dim + k] = sym;
            }
        }
        Ok(Self { dim, data })
    }

    /// Symmetrizes without the Hermitian-distance check; used for
    /// finite-difference output where the asymmetry is legitimate FD noise.
    pub fn symmetrized(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(CoreError::InvalidInput("need square, nonempty data".into()));
        }
        let mut data = alloc::vec![Complex64::ZERO; dim * dim];
        for j in 0..dim {
            for k in 0..dim {
                data[j * dim + k] = 0.5 * (rows[j][k] + rows[k][j].conj());
            }
        }
        Ok(Self { dim, data })
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = alloc::vec![Complex64::ZERO; dim * dim];
        for j in 0..dim {
            data[j * dim + j] = Complex64::ONE;
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        self.data[j * self.dim + k]
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.dim)
            .map(|j| self.data[j * self.dim..(j + 1) * self.dim].to_vec())
            .collect()
    }

    /// Leading or trailing principal submatrix over the index range.
    pub fn principal(&self, range: core::ops::Range<usize>) -> Result<Self> {
        if range.end > self.dim || range.is_empty() {
            return Err(CoreError::InvalidInput("bad principal range".into()));
        }
        let dim = range.len();
        let mut data = Vec::with_capacity(dim * dim);
        for j in range.clone() {
            for k in range.clone() {
                data.push(self.entry(j, k));
            }
        }
        Ok(Self { dim, data })
    }

    /// Re(Σ_{j,k} A[j][k] B[k][j]); exactly real for Hermitian inputs.
    pub fn trace_product(&self, other: &Self) -> Result<f64> {
        if self.dim != other.dim {
            return Err(CoreError::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        let mut acc = Complex64::ZERO;
        for j in 0..self.dim {
            for k in 0..self.dim {
                acc += self.entry(j, k) * other.entry(k, j);
            }
        }
        Ok(acc.re)
    }

    /// Eigenvalues, ascending. Uses the real symmetric embedding
    /// [[X, -Y], [Y, X]] of A = X + iY, whose spectrum is that of A doubled.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let n = self.dim;
        let mut embed = RealSymMatrix::zero(2 * n);
        for j in 0..n {
            for k in 0..n {
                let a = self.entry(j, k);
                embed.set(j, k, a.re);
                embed.set(n + j, n + k, a.re);
                embed.set(j, n + k, -a.im);
                embed.set(n + j, k, a.im);
            }
        }
        let doubled = embed.eigenvalues();
        doubled.into_iter().step_by(2).collect()
    }

    /// True iff every eigenvalue is ≥ -tol.
    pub fn is_psd(&self, tol: f64) -> bool {
        self.eigenvalues().into_iter().all(|l| l >= -tol)
    }

    /// Frobenius norm.
    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest deviation from exact Hermitian symmetry (zero by construction).
    pub fn hermitian_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..self.dim {
            for k in 0..self.dim {
                worst = worst.max((self.entry(j, k) - self.entry(k, j).conj()).norm());
            }
        }
        worst
    }

    /// Semidefinite Cholesky factor L with L L* = A.
    ///
    /// Zero (or slightly negative, within `tol`) pivots produce a zero
    /// column, so PSD matrices of any rank factor without pivoting.
    pub fn cholesky_factor(&self, tol: f64) -> Result<Vec<Vec<Complex64>>> {
        let n = self.dim;
        let scale = self.frobenius().max(1.0);
        let mut l = alloc::vec![alloc::vec![Complex64::ZERO; n]; n];
        for j in 0..n {
            let mut d = self.entry(j, j).re;
            for k in 0..j {
                d -= l[j][k].norm_sqr();
            }
            if d < -tol * scale {
                return Err(CoreError::InvalidInput(alloc::format!(
                    "matrix is not positive semidefinite (pivot {d} at {j})"
                )));
            }
            if d <= tol * scale {
                continue; // rank-deficient direction: leave the column zero
            }
            let root = d.sqrt();
            l[j][j] = Complex64::new(root, 0.0);
            for i in j + 1..n {
                let mut s = self.entry(i, j);
                for k in 0..j {
                    s -= l[i][k] * l[j][k].conj();
                }
                l[i][j] = s / root;
            }
        }
        Ok(l)
    }
}

/// Real symmetric matrix (used for the 2n×2n real Hessian).
#[derive(Debug, Clone, PartialEq)]
pub struct RealSymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl RealSymMatrix {
    pub fn zero(dim: usize) -> Self {
        Self { dim, data: alloc::vec![0.0; dim * dim] }
    }

    /// Builds from square data, symmetrizing A ← (A + Aᵀ)/2.
    pub fn symmetrized(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(CoreError::InvalidInput("need square, nonempty data".into()));
        }
        let mut m = Self::zero(dim);
        for j in 0..dim {
            for k in 0..dim {
                m.data[j * dim + k] = 0.5 * (rows[j][k] + rows[k][j]);
            }
        }
        Ok(m)
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for j in 0..dim {
            m.data[j * dim + j] = 1.0;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, j: usize, k: usize) -> f64 {
        self.data[j * self.dim + k]
    }

    pub fn set(&mut self, j: usize, k: usize, v: f64) {
        self.data[j * self.dim + k] = v;
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|j| self.entry(j, j)).sum()
    }

    /// Σ_{j,k} A[j][k] B[k][j].
    pub fn trace_product(&self, other: &Self) -> Result<f64> {
        if self.dim != other.dim {
            return Err(CoreError::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        let mut acc = 0.0;
        for j in 0..self.dim {
            for k in 0..self.dim {
                acc += self.entry(j, k) * other.entry(k, j);
            }
        }
        Ok(acc)
    }

    /// Eigenvalues by cyclic Jacobi rotations, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let n = self.dim;
        let mut a = self.data.clone();
        let idx = |j: usize, k: usize| j * n + k;
        for _sweep in 0..64 {
            let mut off = 0.0;
            for j in 0..n {
                for k in j + 1..n {
                    off += a[idx(j, k)] * a[idx(j, k)];
                }
            }
            if off <= 1e-30 * (1.0 + self.data.iter().map(|x| x * x).sum::<f64>()) {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[idx(p, q)];
                    if apq.abs() < 1e-300 {
                        continue;
                    }
                    let app = a[idx(p, p)];
                    let aqq = a[idx(q, q)];
                    let theta = (aqq - app) / (2.0 * apq);
                    let t = if theta >= 0.0 {
                        1.0 / (theta + (1.0 + theta * theta).sqrt())
                    } else {
                        -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    for r in 0..n {
                        let arp = a[idx(r, p)];
                        let arq = a[idx(r, q)];
                        a[idx(r, p)] = c * arp - s * arq;
                        a[idx(r, q)] = s * arp + c * arq;
                    }
                    for r in 0..n {
                        let apr = a[idx(p, r)];
                        let aqr = a[idx(q, r)];
                        a[idx(p, r)] = c * apr - s * aqr;
                        a[idx(q, r)] = s * apr + c * aqr;
                    }
                }
            }
        }
        let mut eigs: Vec<f64> = (0..n).map(|j| a[idx(j, j)]).collect();
        eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
        eigs
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_trace_product_is_dim() {
        let a = RealSymMatrix::identity(2);
        assert_abs_diff_eq!(a.trace_product(&a).unwrap(), 2.0);
        let h = HermitianMatrix::identity(1);
        let b = HermitianMatrix::from_rows(&[alloc::vec![c(4.0, 0.0)]]).unwrap();
        assert_abs_diff_eq!(h.trace_product(&b).unwrap(), 4.0);
    }

    #[test]
    fn two_by_two_eigenvalues_match_characteristic_polynomial() {
        // [[1, 0.5], [0.5, 1]] has eigenvalues 0.5 and 1.5.
        let m = HermitianMatrix::from_rows(&[
            alloc::vec![c(1.0, 0.0), c(0.5, 0.0)],
            alloc::vec![c(0.5, 0.0), c(1.0, 0.0)],
        ])
        .unwrap();
        let eigs = m.eigenvalues();
        assert_abs_diff_eq!(eigs[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(eigs[1], 1.5, epsilon = 1e-12);
        assert!(m.is_psd(1e-12));
        assert!(!HermitianMatrix::from_rows(&[alloc::vec![c(-1.0, 0.0)]]).unwrap().is_psd(1e-12));
    }

    #[test]
    fn complex_hermitian_eigenvalues() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let m = HermitianMatrix::from_rows(&[
            alloc::vec![c(2.0, 0.0), c(0.0, 1.0)],
            alloc::vec![c(0.0, -1.0), c(2.0, 0.0)],
        ])
        .unwrap();
        let eigs = m.eigenvalues();
        assert_abs_diff_eq!(eigs[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eigs[1], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_clearly_non_hermitian() {
        let r = HermitianMatrix::from_rows(&[
            alloc::vec![c(1.0, 0.0), c(1.0, 0.0)],
            alloc::vec![c(0.0, 0.0), c(1.0, 0.0)],
        ]);
        assert!(r.is_err());
    }

    #[test]
    fn cholesky_roundtrip_and_rank_deficiency() {
        // A = v v* with v = (1, i) is PSD of rank 1.
        let m = HermitianMatrix::from_rows(&[
            alloc::vec![c(1.0, 0.0), c(0.0, -1.0)],
            alloc::vec![c(0.0, 1.0), c(1.0, 0.0)],
        ])
        .unwrap();
        let l = m.cholesky_factor(1e-12).unwrap();
        for j in 0..2 {
            for k in 0..2 {
                let mut s = Complex64::ZERO;
                for i in 0..2 {
                    s += l[j][i] * l[k][i].conj();
                }
                assert_abs_diff_eq!((s - m.entry(j, k)).norm(), 0.0, epsilon = 1e-12);
            }
        }
        let neg = HermitianMatrix::from_rows(&[alloc::vec![c(-1.0, 0.0)]]).unwrap();
        assert!(neg.cholesky_factor(1e-12).is_err());
    }
}

