//! Tensorized quadrature realizing integration against the standard complex
//! Gaussian γ_n on Cⁿ.
//!
//! Each of the 2n real axes carries the same m-point Gauss–Hermite rule with
//! weights normalized to sum to one, so the grid integrates 1 to 1 and
//! |w_j|² to 1 exactly.

use alloc::vec::Vec;

use num_complex::Complex64;
// needed for f64 math in standalone no_std builds; feature-unified builds
// resolve these methods without it and would flag the import
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{CoreError, Result};
use crate::field::{Growth, ScalarField};
use crate::hermite::gauss_hermite;
use crate::point::ComplexPoint;

/// Default cap on the total node count m^{2n}.
pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

/// Gauss–Hermite tensor grid for γ_n.
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    dim: usize,
    nodes_per_axis: usize,
    axis_nodes: Vec<f64>,
    /// normalized: sums to 1
    axis_weights: Vec<f64>,
}

impl QuadratureGrid {
    /// Builds the grid with the default node budget.
    pub fn build(dim: usize, nodes_per_axis: usize) -> Result<Self> {
        Self::build_with_budget(dim, nodes_per_axis, DEFAULT_NODE_BUDGET)
    }

    pub fn build_with_budget(dim: usize, nodes_per_axis: usize, budget: usize) -> Result<Self> {
        if dim == 0 {
            return Err(CoreError::InvalidInput("grid dimension must be >= 1".into()));
        }
        if nodes_per_axis < 2 {
            return Err(CoreError::InvalidInput("need at least 2 nodes per axis".into()));
        }
        let total = (nodes_per_axis as u128).checked_pow(2 * dim as u32);
        match total {
            Some(t) if t <= budget as u128 => {}
            _ => {
                return Err(CoreError::BudgetExceeded {
                    requested: total.map(|t| t.min(usize::MAX as u128) as usize).unwrap_or(usize::MAX),
                    budget,
                })
            }
        }
        let (axis_nodes, raw_weights) = gauss_hermite(nodes_per_axis)?;
        let sum: f64 = raw_weights.iter().sum();
        let axis_weights = raw_weights.iter().map(|w| w / sum).collect();
        Ok(Self { dim, nodes_per_axis, axis_nodes, axis_weights })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nodes_per_axis(&self) -> usize {
        self.nodes_per_axis
    }

    /// Total node count m^{2n}.
    pub fn len(&self) -> usize {
        self.nodes_per_axis.pow(2 * self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Node by flat index (mixed-radix decode); mostly for inspection,
    /// integration uses the incremental iterator internally.
    pub fn node(&self, mut index: usize) -> ComplexPoint {
        let m = self.nodes_per_axis;
        let mut digits = alloc::vec![0usize; 2 * self.dim];
        for d in digits.iter_mut() {
            *d = index % m;
            index /= m;
        }
        let coords = (0..self.dim)
            .map(|j| Complex64::new(self.axis_nodes[digits[j]], self.axis_nodes[digits[self.dim + j]]))
            .collect();
        ComplexPoint::new(coords).expect("grid nodes are finite")
    }

    pub fn weight(&self, mut index: usize) -> f64 {
        let m = self.nodes_per_axis;
        let mut w = 1.0;
        for _ in 0..2 * self.dim {
            w *= self.axis_weights[index % m];
            index /= m;
        }
        w
    }

    /// Σ over all nodes of weight·g(node). Errors on non-finite evaluations.
    pub fn integrate_fn(
        &self,
        mut g: impl FnMut(&ComplexPoint) -> Complex64,
    ) -> Result<Complex64> {
        let m = self.nodes_per_axis;
        let n = self.dim;
        let axes = 2 * n;
        let mut digits = alloc::vec![0usize; axes];
        let mut point = ComplexPoint::zero(n);
        for j in 0..n {
            point.coords_mut()[j] = Complex64::new(self.axis_nodes[0], self.axis_nodes[0]);
        }
        let mut acc = Complex64::ZERO;
        let total = self.len();
        for step in 0..total {
            let mut w = 1.0;
            for &d in &digits {
                w *= self.axis_weights[d];
            }
            let v = g(&point);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(CoreError::NonFiniteEval { point: point.coords().to_vec() });
            }
            acc += w * v;
            if step + 1 == total {
                break;
            }
            // mixed-radix increment, updating only the coordinates that change
            for axis in 0..axes {
                digits[axis] += 1;
                let wrapped = digits[axis] == m;
                if wrapped {
                    digits[axis] = 0;
                }
                let value = self.axis_nodes[digits[axis]];
                let c = &mut point.coords_mut()[axis % n];
                if axis < n {
                    c.re = value;
                } else {
                    c.im = value;
                }
                if !wrapped {
                    break;
                }
            }
        }
        Ok(acc)
    }

    /// ∫ f dγ over the grid; refuses growth classes the rule cannot handle.
    pub fn integrate(&self, f: &ScalarField) -> Result<Complex64> {
        if f.dim() != self.dim {
            return Err(CoreError::DimensionMismatch { expected: self.dim, got: f.dim() });
        }
        if f.growth() == Growth::Other {
            return Err(CoreError::UnsupportedGrowth);
        }
        self.integrate_fn(|z| f.eval(z))
    }

    /// L²(γ) norm of f on this grid.
    pub fn l2_norm(&self, f: &ScalarField) -> Result<f64> {
        let sq = self.integrate_fn(|z| {
            let v = f.eval(z);
            Complex64::new(v.norm_sqr(), 0.0)
        })?;
        Ok(sq.re.max(0.0).sqrt())
    }

    /// Hermitian L²(γ) pairing ⟨f, g⟩ = ∫ f ḡ dγ.
    pub fn pairing(&self, f: &ScalarField, g: &ScalarField) -> Result<Complex64> {
        self.integrate_fn(|z| f.eval(z) * g.eval(z).conj())
    }

    /// Sum of all weights (1 up to rounding); used by invariant tests.
    pub fn total_weight(&self) -> f64 {
        let per_axis: f64 = self.axis_weights.iter().sum();
        per_axis.powi(2 * self.dim as i32)
    }
}
