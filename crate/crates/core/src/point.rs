//! Points of Cⁿ and the two complex pairings used throughout.

use alloc::vec::Vec;

use num_complex::Complex64;
// needed for f64 math in standalone no_std builds; feature-unified builds
// resolve these methods without it and would flag the import
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{CoreError, Result};

/// A point of Cⁿ, stored as `n` complex coordinates.
///
/// Coordinates are always finite; `n >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPoint {
    coords: Vec<Complex64>,
}

impl ComplexPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(CoreError::InvalidInput("a point needs n >= 1 coordinates".into()));
        }
        if coords.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(CoreError::NonFiniteEval { point: coords });
        }
        Ok(Self { coords })
    }

    /// Origin of Cⁿ.
    pub fn zero(n: usize) -> Self {
        Self { coords: alloc::vec![Complex64::ZERO; n] }
    }

    /// One-dimensional point, the common case in the examples.
    pub fn scalar(z: Complex64) -> Self {
        Self { coords: alloc::vec![z] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub(crate) fn coords_mut(&mut self) -> &mut [Complex64] {
        &mut self.coords
    }

    /// |w|² = Σ |w_j|².
    pub fn norm_sqr(&self) -> f64 {
        self.coords.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// The point e^{iθ} w.
    pub fn rotated(&self, theta: f64) -> Self {
        let phase = Complex64::from_polar(1.0, theta);
        Self { coords: self.coords.iter().map(|c| c * phase).collect() }
    }

    /// Componentwise a + λ b.
    pub fn add_scaled(&self, scale: Complex64, other: &ComplexPoint) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Self {
            coords: self
                .coords
                .iter()
                .zip(other.coords.iter())
                .map(|(a, b)| a + scale * b)
                .collect(),
        }
    }
}

/// Bilinear pairing w · w' = Σ w_j w'_j.
pub fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Hermitian pairing a · b̄ = Σ a_j conj(b_j).
pub fn dot_conj(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(ComplexPoint::new(alloc::vec![]).is_err());
        assert!(ComplexPoint::new(alloc::vec![Complex64::new(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn rotation_preserves_norm() {
        let p = ComplexPoint::new(alloc::vec![Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.25)])
            .unwrap();
        let q = p.rotated(0.7);
        assert!((p.norm_sqr() - q.norm_sqr()).abs() < 1e-14);
    }

    #[test]
    fn pairings_disagree_off_reals() {
        let a = [Complex64::new(0.0, 1.0)];
        let b = [Complex64::new(0.0, 1.0)];
        assert_eq!(dot(&a, &b), Complex64::new(-1.0, 0.0));
        assert_eq!(dot_conj(&a, &b), Complex64::new(1.0, 0.0));
    }
}
