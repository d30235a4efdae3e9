//! Sampling from γ_n and from covariance-specified complex Gaussian vectors,
//! with batch-based Monte Carlo estimators.

use alloc::vec::Vec;

use num_complex::Complex64;
// needed for f64 math in standalone no_std builds; feature-unified builds
// resolve these methods without it and would flag the import
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{CoreError, Result};
use crate::field::ScalarField;
use crate::matrix::HermitianMatrix;
use crate::point::{dot, dot_conj, ComplexPoint};

/// Monte Carlo run configuration. Two runs with equal configuration produce
/// bit-identical estimates: batch b draws from an independent ChaCha stream
/// derived from (seed, b), and batches are combined in index order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    samples: usize,
    seed: u64,
    batches: usize,
}

impl McConfig {
    pub fn new(samples: usize, seed: u64, batches: usize) -> Result<Self> {
        if samples < 1 || batches < 1 || samples < batches {
            return Err(CoreError::InvalidInput(
                "need samples >= batches >= 1".into(),
            ));
        }
        Ok(Self { samples, seed, batches })
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn batches(&self) -> usize {
        self.batches
    }

    /// Equal batch size; the effective sample count is `per_batch * batches`.
    pub fn per_batch(&self) -> usize {
        self.samples / self.batches
    }

    fn batch_rng(&self, batch: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(batch as u64);
        rng
    }
}

/// One standard complex Gaussian coordinate: real and imaginary parts are
/// independent N(0, ½), so E|G_j|² = 1.
fn standard_coord(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
}

fn fill_standard(rng: &mut ChaCha8Rng, point: &mut ComplexPoint) {
    for c in point.coords_mut() {
        *c = standard_coord(rng);
    }
}

/// Stream of standard complex Gaussian points in Cⁿ.
pub fn sample_standard(n: usize, cfg: &McConfig) -> impl Iterator<Item = ComplexPoint> + '_ {
    let total = cfg.per_batch() * cfg.batches();
    let per_batch = cfg.per_batch();
    let cfg = *cfg;
    let mut rng = cfg.batch_rng(0);
    let mut emitted = 0usize;
    core::iter::from_fn(move || {
        if emitted == total {
            return None;
        }
        if emitted > 0 && emitted % per_batch == 0 {
            rng = cfg.batch_rng(emitted / per_batch);
        }
        emitted += 1;
        let mut p = ComplexPoint::zero(n);
        fill_standard(&mut rng, &mut p);
        Some(p)
    })
}

/// A centered complex Gaussian vector X = AG described by the rows of A.
///
/// Row j is a_j ∈ Cⁿ and X_j = G·a_j, so the complex covariance is
/// C[j][k] = E[X_j X̄_k] = a_j · ā_k.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceSpec {
    rows: Vec<Vec<Complex64>>,
}

impl CovarianceSpec {
    pub fn new(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(CoreError::InvalidInput("need nonempty rows".into()));
        }
        let n = rows[0].len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(CoreError::InvalidInput("rows must share one length".into()));
        }
        if rows.iter().flatten().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(CoreError::InvalidInput("rows must be finite".into()));
        }
        Ok(Self { rows })
    }

    /// Canonical spec from a covariance matrix: rows of its semidefinite
    /// Cholesky factor. (The factor is one of many maps with this
    /// covariance; the law of X only depends on C.)
    pub fn from_covariance(c: &HermitianMatrix) -> Result<Self> {
        let l = c.cholesky_factor(1e-12)?;
        Self::new(l)
    }

    /// Output dimension N.
    pub fn output_dim(&self) -> usize {
        self.rows.len()
    }

    /// Latent dimension n.
    pub fn latent_dim(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<Complex64>] {
        &self.rows
    }

    /// The complex covariance matrix C[j][k] = a_j · ā_k.
    pub fn covariance(&self) -> HermitianMatrix {
        let n = self.output_dim();
        let rows: Vec<Vec<Complex64>> = (0..n)
            .map(|j| (0..n).map(|k| dot_conj(&self.rows[j], &self.rows[k])).collect())
            .collect();
        HermitianMatrix::from_rows(&rows).expect("Gram matrices are Hermitian")
    }

    fn apply(&self, g: &ComplexPoint, out: &mut ComplexPoint) {
        for (j, row) in self.rows.iter().enumerate() {
            out.coords_mut()[j] = dot(g.coords(), row);
        }
    }
}

/// Stream of samples of X = AG ∈ C^N.
pub fn sample_vector<'a>(
    spec: &'a CovarianceSpec,
    cfg: &McConfig,
) -> impl Iterator<Item = ComplexPoint> + 'a {
    let n = spec.latent_dim();
    let big_n = spec.output_dim();
    let cfg = *cfg;
    let total = cfg.per_batch() * cfg.batches();
    let per_batch = cfg.per_batch();
    let mut rng = cfg.batch_rng(0);
    let mut g = ComplexPoint::zero(n);
    let mut emitted = 0usize;
    core::iter::from_fn(move || {
        if emitted == total {
            return None;
        }
        if emitted > 0 && emitted % per_batch == 0 {
            rng = cfg.batch_rng(emitted / per_batch);
        }
        emitted += 1;
        fill_standard(&mut rng, &mut g);
        let mut x = ComplexPoint::zero(big_n);
        spec.apply(&g, &mut x);
        Some(x)
    })
}

fn batch_stats(batch_means: &[Complex64]) -> (Complex64, f64) {
    let b = batch_means.len();
    let mean: Complex64 = batch_means.iter().sum::<Complex64>() / b as f64;
    if b < 2 {
        return (mean, 0.0);
    }
    let var: f64 =
        batch_means.iter().map(|m| (m - mean).norm_sqr()).sum::<f64>() / (b as f64 - 1.0);
    (mean, (var / b as f64).sqrt())
}

/// Monte Carlo estimate of ∫ f dγ_n with batch standard error.
pub fn integrate_mc(f: &ScalarField, n: usize, cfg: &McConfig) -> Result<(Complex64, f64)> {
    if f.dim() != n {
        return Err(CoreError::DimensionMismatch { expected: f.dim(), got: n });
    }
    let per_batch = cfg.per_batch();
    let mut batch_means = Vec::with_capacity(cfg.batches());
    let mut point = ComplexPoint::zero(n);
    for b in 0..cfg.batches() {
        let mut rng = cfg.batch_rng(b);
        let mut acc = Complex64::ZERO;
        for _ in 0..per_batch {
            fill_standard(&mut rng, &mut point);
            let v = f.eval(&point);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(CoreError::NonFiniteEval { point: point.coords().to_vec() });
            }
            acc += v;
        }
        batch_means.push(acc / per_batch as f64);
    }
    Ok(batch_stats(&batch_means))
}

/// Exponents above this need very large samples for a meaningful relative
/// standard error.
pub const HEAVY_TAIL_ALPHA: f64 = 8.0;
pub const HEAVY_TAIL_MIN_SAMPLES: usize = 10_000_000;

/// Monte Carlo estimate of E ∏ |X_j|^{α_j} with batch standard error.
pub fn abs_moment_mc(
    spec: &CovarianceSpec,
    alpha: &[f64],
    cfg: &McConfig,
) -> Result<(f64, f64)> {
    if alpha.len() != spec.output_dim() {
        return Err(CoreError::DimensionMismatch {
            expected: spec.output_dim(),
            got: alpha.len(),
        });
    }
    if alpha.iter().any(|a| *a < 0.0) {
        return Err(CoreError::InvalidInput("exponents must be >= 0".into()));
    }
    if let Some(&a) = alpha.iter().find(|a| **a > HEAVY_TAIL_ALPHA) {
        if cfg.samples() < HEAVY_TAIL_MIN_SAMPLES {
            return Err(CoreError::VarianceWarning {
                alpha: a,
                min_samples: HEAVY_TAIL_MIN_SAMPLES,
            });
        }
    }
    let n = spec.latent_dim();
    let per_batch = cfg.per_batch();
    let mut batch_means = Vec::with_capacity(cfg.batches());
    let mut g = ComplexPoint::zero(n);
    let mut x = ComplexPoint::zero(spec.output_dim());
    for b in 0..cfg.batches() {
        let mut rng = cfg.batch_rng(b);
        let mut acc = 0.0f64;
        for _ in 0..per_batch {
            fill_standard(&mut rng, &mut g);
            spec.apply(&g, &mut x);
            let mut prod = 1.0f64;
            for (c, &a) in x.coords().iter().zip(alpha) {
                if a == 2.0 {
                    prod *= c.norm_sqr(); // frequent case, avoid powf
                } else if a != 0.0 {
                    prod *= c.norm_sqr().powf(0.5 * a);
                }
            }
            acc += prod;
        }
        batch_means.push(Complex64::new(acc / per_batch as f64, 0.0));
    }
    let (mean, stderr) = batch_stats(&batch_means);
    Ok((mean.re, stderr))
}
