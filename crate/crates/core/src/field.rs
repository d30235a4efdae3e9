//! Scalar fields Cⁿ → C with growth and symmetry tags.

use alloc::sync::Arc;

use num_complex::Complex64;
// needed for f64 math in standalone no_std builds; feature-unified builds
// resolve these methods without it and would flag the import
#[allow(unused_imports)]
use num_traits::Float;

use crate::point::ComplexPoint;

/// Declared growth class of a field; quadrature only accepts the first two.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Growth {
    /// Dominated by a polynomial.
    Polynomial,
    /// e^{a·w + b·w̄}-type exponential of a linear form.
    ExpLinear,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    /// f(e^{iθ} w) = f(w) for all θ.
    Circular,
    Unknown,
}

type Evaluator = dyn Fn(&ComplexPoint) -> Complex64 + Send + Sync;

/// Evaluation handle for a function Cⁿ → C.
///
/// Fields are immutable and cheap to clone; evaluators are pure, so a field
/// may be shared freely across threads.
#[derive(Clone)]
pub struct ScalarField {
    dim: usize,
    growth: Growth,
    symmetry: Symmetry,
    /// Set for fields that are continuous but not twice differentiable at
    /// the origin (|w|^β with fractional β); derivative stencils must stay
    /// away from it.
    origin_singular: bool,
    eval: Arc<Evaluator>,
}

impl core::fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("ScalarField")
            .field("dim", &self.dim)
            .field("growth", &self.growth)
            .field("symmetry", &self.symmetry)
            .field("origin_singular", &self.origin_singular)
            .finish()
    }
}

impl ScalarField {
    pub fn new(
        dim: usize,
        growth: Growth,
        symmetry: Symmetry,
        eval: impl Fn(&ComplexPoint) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self { dim, growth, symmetry, origin_singular: false, eval: Arc::new(eval) }
    }

    pub fn with_origin_singularity(mut self) -> Self {
        self.origin_singular = true;
        self
    }

    pub fn eval(&self, z: &ComplexPoint) -> Complex64 {
        debug_assert_eq!(z.dim(), self.dim);
        (self.eval)(z)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn growth(&self) -> Growth {
        self.growth
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn is_circular(&self) -> bool {
        self.symmetry == Symmetry::Circular
    }

    pub fn origin_singular(&self) -> bool {
        self.origin_singular
    }

    /// The constant field.
    pub fn constant(dim: usize, c: Complex64) -> Self {
        Self::new(dim, Growth::Polynomial, Symmetry::Circular, move |_| c)
    }

    /// |w|^β on Cⁿ (radial power). Circular by construction.
    ///
    /// For β that is not an even integer the field is not smooth at the
    /// origin, so it carries the origin-singularity marker.
    pub fn abs_power(dim: usize, beta: f64) -> Self {
        assert!(beta >= 0.0, "abs-power exponent must be nonnegative");
        let smooth_at_zero = beta == 0.0 || (beta.fract() == 0.0 && (beta as u64) % 2 == 0);
        let field = Self::new(dim, Growth::Polynomial, Symmetry::Circular, move |z| {
            Complex64::new(z.norm_sqr().powf(0.5 * beta), 0.0)
        });
        if smooth_at_zero {
            field
        } else {
            field.with_origin_singularity()
        }
    }

    /// f_a(w) = e^{a w + w̄} on C (one-dimensional).
    pub fn exp_linear(a: f64) -> Self {
        Self::new(1, Growth::ExpLinear, Symmetry::Unknown, move |z| {
            let w = z.coords()[0];
            (a * w + w.conj()).exp()
        })
    }

    /// Radial field φ(|w|) from a one-dimensional profile.
    pub fn radial(dim: usize, phi: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(dim, Growth::Other, Symmetry::Circular, move |z| {
            Complex64::new(phi(z.norm()), 0.0)
        })
    }

    /// The rotated field f_θ(w) = f(e^{iθ} w).
    pub fn rotated(&self, theta: f64) -> Self {
        let inner = self.eval.clone();
        Self {
            dim: self.dim,
            growth: self.growth,
            symmetry: self.symmetry,
            origin_singular: self.origin_singular,
            eval: Arc::new(move |z: &ComplexPoint| inner(&z.rotated(theta))),
        }
    }

    /// Pointwise product (growth class is the worse of the two).
    pub fn product(&self, other: &ScalarField) -> Self {
        assert_eq!(self.dim, other.dim);
        let a = self.eval.clone();
        let b = other.eval.clone();
        let growth = match (self.growth, other.growth) {
            (Growth::Polynomial, Growth::Polynomial) => Growth::Polynomial,
            (Growth::Polynomial, Growth::ExpLinear) | (Growth::ExpLinear, Growth::Polynomial) => {
                Growth::ExpLinear
            }
            _ => Growth::Other,
        };
        let symmetry = if self.is_circular() && other.is_circular() {
            Symmetry::Circular
        } else {
            Symmetry::Unknown
        };
        Self {
            dim: self.dim,
            growth,
            symmetry,
            origin_singular: self.origin_singular || other.origin_singular,
            eval: Arc::new(move |z: &ComplexPoint| a(z) * b(z)),
        }
    }

    /// Smooth compactly-cut version: f multiplied by a C^∞ bump supported
    /// in |w| < radius.
    pub fn compact_cut(&self, radius: f64) -> Self {
        let inner = self.eval.clone();
        let r2 = radius * radius;
        Self {
            dim: self.dim,
            growth: Growth::Polynomial,
            symmetry: self.symmetry,
            origin_singular: self.origin_singular,
            eval: Arc::new(move |z: &ComplexPoint| {
                let s = z.norm_sqr() / r2;
                if s >= 1.0 {
                    Complex64::ZERO
                } else {
                    inner(z) * (1.0 - 1.0 / (1.0 - s)).exp()
                }
            }),
        }
    }
}
