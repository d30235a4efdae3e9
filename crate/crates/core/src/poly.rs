//! Holomorphic polynomials and log-plurisubharmonic products ∏|F_j|^{α_j}.

use alloc::vec::Vec;

use num_complex::Complex64;
// needed for f64 math in standalone no_std builds; feature-unified builds
// resolve these methods without it and would flag the import
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, Result};
use crate::field::{Growth, ScalarField, Symmetry};
use crate::point::ComplexPoint;

/// Holomorphic polynomial in n variables, stored term by term as
/// (multi-index, coefficient) pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct HoloPoly {
    dim: usize,
    terms: Vec<(Vec<u32>, Complex64)>,
}

impl HoloPoly {
    pub fn new(dim: usize, terms: Vec<(Vec<u32>, Complex64)>) -> Result<Self> {
        if dim == 0 {
            return Err(CoreError::InvalidInput("polynomial needs n >= 1".into()));
        }
        for (index, _) in &terms {
            if index.len() != dim {
                return Err(CoreError::DimensionMismatch { expected: dim, got: index.len() });
            }
        }
        // merge duplicate multi-indices
        let mut merged: Vec<(Vec<u32>, Complex64)> = Vec::new();
        for (index, coeff) in terms {
            match merged.iter_mut().find(|(i, _)| *i == index) {
                Some((_, c)) => *c += coeff,
                None => merged.push((index, coeff)),
            }
        }
        merged.retain(|(_, c)| c.norm() > 0.0);
        Ok(Self { dim, terms: merged })
    }

    /// The coordinate polynomial z_j (zero-based j).
    pub fn coordinate(dim: usize, j: usize) -> Self {
        let mut index = alloc::vec![0u32; dim];
        index[j] = 1;
        Self { dim, terms: alloc::vec![(index, Complex64::ONE)] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(Vec<u32>, Complex64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Σ coeff · z^index.
    pub fn eval(&self, z: &ComplexPoint) -> Result<Complex64> {
        if z.dim() != self.dim {
            return Err(CoreError::DimensionMismatch { expected: self.dim, got: z.dim() });
        }
        Ok(self.eval_unchecked(z))
    }

    fn eval_unchecked(&self, z: &ComplexPoint) -> Complex64 {
        let coords = z.coords();
        let mut acc = Complex64::ZERO;
        for (index, coeff) in &self.terms {
            let mut term = *coeff;
            for (j, &e) in index.iter().enumerate() {
                if e > 0 {
                    term *= coords[j].powu(e);
                }
            }
            acc += term;
        }
        acc
    }

    /// The common total degree of all terms, if the polynomial is
    /// homogeneous; `None` otherwise. The zero polynomial is an error.
    pub fn homogeneity_degree(&self) -> Result<Option<u32>> {
        if self.is_zero() {
            return Err(CoreError::InvalidInput(
                "homogeneity degree of the zero polynomial is undefined".into(),
            ));
        }
        let degree_of = |index: &[u32]| index.iter().sum::<u32>();
        let d = degree_of(&self.terms[0].0);
        if self.terms.iter().all(|(i, _)| degree_of(i) == d) {
            Ok(Some(d))
        } else {
            Ok(None)
        }
    }
}

/// A product ∏_j |F_j|^{α_j} with holomorphic F_j and α_j ≥ 0.
///
/// Such products are plurisubharmonic; when every factor is homogeneous the
/// product is also circular-symmetric.
#[derive(Debug, Clone)]
pub struct LogPshProduct {
    dim: usize,
    factors: Vec<(HoloPoly, f64)>,
}

impl LogPshProduct {
    pub fn new(factors: Vec<(HoloPoly, f64)>) -> Result<Self> {
        if factors.is_empty() {
            return Err(CoreError::InvalidInput("need at least one factor".into()));
        }
        let dim = factors[0].0.dim();
        for (poly, alpha) in &factors {
            if poly.dim() != dim {
                return Err(CoreError::DimensionMismatch { expected: dim, got: poly.dim() });
            }
            if !(*alpha >= 0.0) {
                return Err(CoreError::InvalidInput("exponents must be >= 0".into()));
            }
        }
        Ok(Self { dim, factors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn factors(&self) -> &[(HoloPoly, f64)] {
        &self.factors
    }

    /// True iff every factor is homogeneous (hence the product circular).
    pub fn all_homogeneous(&self) -> bool {
        self.factors
            .iter()
            .all(|(p, _)| !p.is_zero() && p.homogeneity_degree().map(|d| d.is_some()).unwrap_or(false))
    }

    pub fn eval(&self, z: &ComplexPoint) -> Result<f64> {
        if z.dim() != self.dim {
            return Err(CoreError::DimensionMismatch { expected: self.dim, got: z.dim() });
        }
        let mut acc = 1.0;
        for (poly, alpha) in &self.factors {
            let m = poly.eval_unchecked(z).norm();
            // |F| = 0 with α > 0 contributes 0; α = 0 contributes 1.
            if *alpha > 0.0 {
                acc *= m.powf(*alpha);
            }
        }
        Ok(acc)
    }

    /// Wraps the product as a `ScalarField` with honest tags: polynomial
    /// growth always, circular symmetry iff every factor is homogeneous.
    pub fn as_field(&self) -> ScalarField {
        let symmetry =
            if self.all_homogeneous() { Symmetry::Circular } else { Symmetry::Unknown };
        let this = self.clone();
        ScalarField::new(self.dim, Growth::Polynomial, symmetry, move |z| {
            Complex64::new(this.eval(z).unwrap_or(f64::NAN), 0.0)
        })
    }
}

/// Builds the `ScalarField` for a log-psh product (spec-level entry point).
pub fn make_field(product: &LogPshProduct) -> ScalarField {
    product.as_field()
}

/// Randomized audit that f(e^{iθ} w) = f(w).
///
/// Samples `trials` pairs (w, θ) with the given seed; returns false as soon
/// as |f(e^{iθ}w) - f(w)| > tol · (1 + |f(w)|).
pub fn circular_check(f: &ScalarField, trials: usize, tol: f64, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = f.dim();
    for _ in 0..trials {
        let coords: Vec<Complex64> = (0..n)
            .map(|_| {
                Complex64::new(rng.random::<f64>() * 4.0 - 2.0, rng.random::<f64>() * 4.0 - 2.0)
            })
            .collect();
        let w = ComplexPoint::new(coords).expect("finite by construction");
        let theta = rng.random::<f64>() * 2.0 * core::f64::consts::PI;
        let fw = f.eval(&w);
        let frot = f.eval(&w.rotated(theta));
        if (frot - fw).norm() > tol * (1.0 + fw.norm()) {
            return false;
        }
    }
    true
}
