//! Randomized audits over many instances: correlation verdicts, Wick-vs-MC
//! moment agreement, Lieb permanent margins, and α-flow shape checks.
//!
//! Instance i derives its own RNG stream from (seed, i), so audits are
//! reproducible and independent of the parallel schedule.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use gauss_psh_core::alpha::{alpha_at, alpha_curve, alpha_prime_two_ways, geometric_t_grid};
use gauss_psh_core::calculus::FdStep;
use gauss_psh_core::field::ScalarField;
use gauss_psh_core::inequality::{
    correlation_gap, lieb_check, random_log_psh, random_psd, GapMethod, InequalityReport,
    LogPshOptions, Verdict,
};
use gauss_psh_core::operators::commutation_residual;
use gauss_psh_core::permanent::wick_moment;
use gauss_psh_core::poly::{make_field, HoloPoly, LogPshProduct};
use gauss_psh_core::sampling::{sample_vector, CovarianceSpec, McConfig};
use gauss_psh_core::semigroup::{bargmann_field, pt_field, SemigroupTime};
use gauss_psh_core::{QuadratureGrid, Result};

fn instance_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1 + index as u64);
    rng
}

/// Rescales every factor's coefficients to unit 2-norm so the products stay
/// O(1) and absolute tolerances are meaningful.
fn normalized(product: &LogPshProduct) -> LogPshProduct {
    let factors = product
        .factors()
        .iter()
        .map(|(poly, alpha)| {
            let norm: f64 = poly
                .terms()
                .iter()
                .map(|(_, c)| c.norm_sqr())
                .sum::<f64>()
                .sqrt()
                .max(1e-12);
            let scaled = poly
                .terms()
                .iter()
                .map(|(idx, c)| (idx.clone(), c / norm))
                .collect();
            (HoloPoly::new(poly.dim(), scaled).expect("rescaled terms stay valid"), *alpha)
        })
        .collect();
    LogPshProduct::new(factors).expect("normalization preserves validity")
}

// ---------------------------------------------------------------------------
// Correlation audit
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct CorrelationInstance {
    pub index: usize,
    pub n: usize,
    pub report: InequalityReport,
}

#[derive(Debug, Clone)]
pub struct CorrelationAudit {
    pub instances: Vec<CorrelationInstance>,
    pub violations: usize,
}

/// `count` random circular-psh/psh pairs on C¹..C³; grids for n ≤ 2, Monte
/// Carlo for n = 3.
pub fn correlation_audit(count: usize, seed: u64) -> Result<CorrelationAudit> {
    let instances: Vec<CorrelationInstance> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(seed, i);
            let n = 1 + i % 3;
            let f = make_field(&normalized(&random_log_psh(
                n,
                LogPshOptions { homogeneous: true, ..Default::default() },
                &mut rng,
            )));
            let g_opts = LogPshOptions { homogeneous: rng.random::<bool>(), ..Default::default() };
            let g = make_field(&normalized(&random_log_psh(n, g_opts, &mut rng)));
            let method = match n {
                1 => GapMethod::Grid { m: 20 },
                2 => GapMethod::Grid { m: 10 },
                _ => GapMethod::Mc {
                    cfg: McConfig::new(150_000, seed ^ (i as u64).wrapping_mul(0x9e37), 20)
                        .expect("static config is valid"),
                },
            };
            let report = correlation_gap(&f, &g, method)?;
            Ok(CorrelationInstance { index: i, n, report })
        })
        .collect::<Result<_>>()?;
    let violations =
        instances.iter().filter(|c| c.report.verdict == Verdict::Violated).count();
    Ok(CorrelationAudit { instances, violations })
}

// ---------------------------------------------------------------------------
// Wick vs Monte Carlo moment audit
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct MomentCase {
    pub p: Vec<usize>,
    pub exact: f64,
    pub estimate: f64,
    pub stderr: f64,
}

impl MomentCase {
    /// |exact - estimate| in units of the standard error.
    pub fn sigma_distance(&self) -> f64 {
        if self.stderr == 0.0 {
            if self.exact == self.estimate {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.exact - self.estimate).abs() / self.stderr
        }
    }
}

/// All multiplicity vectors p over `n` coordinates with 1 ≤ Σp ≤ `max_total`.
pub fn multiplicity_vectors(n: usize, max_total: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..=max_total).map(move |k| {
                    let mut q = p.clone();
                    q.push(k);
                    q
                })
            })
            .collect();
    }
    out.retain(|p| {
        let s: usize = p.iter().sum();
        (1..=max_total).contains(&s)
    });
    out
}

/// Compares the exact Wick permanents against one shared Monte Carlo stream
/// evaluated for every multiplicity vector at once.
pub fn moment_audit_for_spec(
    spec: &CovarianceSpec,
    ps: &[Vec<usize>],
    cfg: &McConfig,
) -> Result<Vec<MomentCase>> {
    let per_batch = cfg.per_batch();
    let batches = cfg.batches();
    let mut batch_means = vec![Vec::with_capacity(batches); ps.len()];
    let mut sums = vec![0.0f64; ps.len()];
    let mut norms_sq = vec![0.0f64; spec.output_dim()];
    for (i, x) in sample_vector(spec, cfg).enumerate() {
        for (j, c) in x.coords().iter().enumerate() {
            norms_sq[j] = c.norm_sqr();
        }
        for (s, p) in sums.iter_mut().zip(ps) {
            let mut prod = 1.0;
            for (j, &mult) in p.iter().enumerate() {
                prod *= norms_sq[j].powi(mult as i32);
            }
            *s += prod;
        }
        if (i + 1) % per_batch == 0 {
            for (means, s) in batch_means.iter_mut().zip(sums.iter_mut()) {
                means.push(*s / per_batch as f64);
                *s = 0.0;
            }
        }
    }
    ps.iter()
        .zip(batch_means)
        .map(|(p, means)| {
            let exact = wick_moment(spec, p)?;
            let b = means.len() as f64;
            let estimate: f64 = means.iter().sum::<f64>() / b;
            let var = means.iter().map(|m| (m - estimate) * (m - estimate)).sum::<f64>()
                / (b - 1.0).max(1.0);
            Ok(MomentCase { p: p.clone(), exact, estimate, stderr: (var / b).sqrt() })
        })
        .collect()
}

/// Runs the moment audit over `covariances` random specs (N ≤ 3) and
/// returns every case; deterministic in `seed`.
pub fn moment_audit(
    covariances: usize,
    samples: usize,
    max_total: usize,
    seed: u64,
) -> Result<Vec<MomentCase>> {
    let cases: Vec<Vec<MomentCase>> = (0..covariances)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(seed, i);
            let big_n = 1 + i % 3;
            let spec = gauss_psh_core::inequality::random_covariance_spec(big_n, 2, &mut rng);
            let ps = multiplicity_vectors(big_n, max_total);
            let cfg = McConfig::new(samples, seed.wrapping_add(31 * i as u64), 20)
                .expect("static config is valid");
            moment_audit_for_spec(&spec, &ps, &cfg)
        })
        .collect::<Result<_>>()?;
    Ok(cases.into_iter().flatten().collect())
}

// ---------------------------------------------------------------------------
// Lieb audit
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct LiebAudit {
    pub checks: usize,
    pub min_margin: f64,
}

/// Random PSD Hermitian matrices (unit diagonal) of dimension 2..=max_dim,
/// every split of each.
pub fn lieb_audit(count: usize, max_dim: usize, seed: u64) -> Result<LiebAudit> {
    let margins: Vec<Vec<f64>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(seed, i);
            let dim = 2 + i % (max_dim - 1);
            let c = random_psd(dim, &mut rng);
            (1..dim).map(|k| lieb_check(&c, k).map(|r| r.margin)).collect()
        })
        .collect::<Result<_>>()?;
    let flat: Vec<f64> = margins.into_iter().flatten().collect();
    Ok(LiebAudit {
        checks: flat.len(),
        min_margin: flat.into_iter().fold(f64::INFINITY, f64::min),
    })
}

// ---------------------------------------------------------------------------
// α-flow audit
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct AlphaAudit {
    /// max over the grid of α_{i+1} - α_i (monotonicity wants ≤ tol).
    pub max_first_diff: f64,
    /// min second divided difference (convexity wants ≥ -tol).
    pub min_d2: f64,
    /// worst per-node disagreement of the P_t^{ou} and P_t routes.
    pub max_cross: f64,
    /// |α(40) - ∫f dγ ∫g dγ|.
    pub limit_gap: f64,
    /// |central difference - integral form| of α'(1).
    pub prime_gap: f64,
    /// quadrature-scaled tolerance for the shape checks.
    pub tol: f64,
}

/// One α-flow instance on C¹ with polynomial (even-exponent) psh fields.
pub fn alpha_audit_instance(seed: u64, index: usize) -> Result<AlphaAudit> {
    let mut rng = instance_rng(seed, index);
    let opts = LogPshOptions {
        homogeneous: true,
        even_alpha: true,
        max_degree: 2,
        ..Default::default()
    };
    let f = make_field(&normalized(&random_log_psh(1, opts, &mut rng)));
    let g = make_field(&normalized(&random_log_psh(
        1,
        LogPshOptions { homogeneous: false, even_alpha: true, max_degree: 2, ..Default::default() },
        &mut rng,
    )));
    let ts = geometric_t_grid(0.05, 40.0, 24);
    alpha_audit_pair(&f, &g, 16, &ts).map(|(audit, _)| audit)
}

/// Shape checks for one (f, g) pair; also returns the sampled curve.
pub fn alpha_audit_pair(
    f: &ScalarField,
    g: &ScalarField,
    m: usize,
    ts: &[f64],
) -> Result<(AlphaAudit, gauss_psh_core::AlphaCurve)> {
    let grid = QuadratureGrid::build(f.dim(), m)?;
    let curve = alpha_curve(f, g, ts, &grid)?;
    let scale = curve.alpha.iter().fold(1.0f64, |a, &b| a.max(b.abs()));

    // quadrature-error estimate: the same α at a probe time on a refined grid
    let probe = SemigroupTime::new(0.2)?;
    let n = f.dim();
    let fine = QuadratureGrid::build(n, m + 6)?;
    let pt_a = QuadratureGrid::build(n, 2 * m)?;
    let pt_b = QuadratureGrid::build(n, 2 * m + 12)?;
    let (coarse_val, _) = alpha_at(f, g, probe, &grid, &pt_a)?;
    let (fine_val, _) = alpha_at(f, g, probe, &fine, &pt_b)?;
    let quad_err = (coarse_val - fine_val).abs();
    let min_h = ts[1] - ts[0];
    let tol = 4.0 * quad_err / (min_h * min_h) + 1e-8 * scale;

    let max_first_diff = curve
        .alpha
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max);
    let min_d2 = curve.d2.iter().copied().fold(f64::INFINITY, f64::min);
    let max_cross = curve.cross_residual.iter().copied().fold(0.0, f64::max);
    let limit_gap = (curve.alpha.last().unwrap() - curve.limit).abs();
    let (fd, integral) = alpha_prime_two_ways(f, g, 1.0, &grid, FdStep::default())?;
    let audit = AlphaAudit {
        max_first_diff,
        min_d2,
        max_cross,
        limit_gap,
        prime_gap: (fd - integral).abs(),
        tol,
    };
    Ok((audit, curve))
}

// ---------------------------------------------------------------------------
// Commutation audit
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct CommutationAudit {
    /// worst residual of either commutation relation at the base step.
    pub max_residual: f64,
    /// median of residual(h)/residual(h/2) over the instances.
    pub median_halving_factor: f64,
    pub instances: usize,
}

/// Random (f, t, z, j) commutation checks; polynomial fields keep the inner
/// quadratures exact so the halving factor isolates the O(h²) stencil error.
pub fn commutation_audit(count: usize, seed: u64, h: f64) -> Result<CommutationAudit> {
    let step = FdStep::new(h)?;
    let half = step.halved();
    let results: Vec<(f64, f64)> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(seed, i);
            let n = 1 + i % 2;
            let grid = QuadratureGrid::build(n, if n == 1 { 30 } else { 12 })?;
            let f = make_field(&normalized(&random_log_psh(
                n,
                LogPshOptions {
                    homogeneous: rng.random::<bool>(),
                    even_alpha: true,
                    max_degree: 2,
                    ..Default::default()
                },
                &mut rng,
            )));
            let t = SemigroupTime::new(0.2 + rng.random::<f64>() * 1.8)?;
            let z = gauss_psh_core::ComplexPoint::new(
                (0..n)
                    .map(|_| {
                        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                    })
                    .collect(),
            )?;
            let j = rng.random_range(0..n);
            let (holo, anti) = commutation_residual(&f, t, &z, j, &grid, step)?;
            let (holo_h, anti_h) = commutation_residual(&f, t, &z, j, &grid, half)?;
            let base = holo.max(anti);
            let refined = holo_h.max(anti_h);
            Ok((base, base / refined.max(f64::MIN_POSITIVE)))
        })
        .collect::<Result<_>>()?;
    let max_residual = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let mut factors: Vec<f64> = results.iter().map(|r| r.1).collect();
    factors.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median_halving_factor = factors[factors.len() / 2];
    Ok(CommutationAudit { max_residual, median_halving_factor, instances: count })
}

// ---------------------------------------------------------------------------
// Hörmander decay check
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct HormanderPoint {
    pub t: f64,
    pub lhs: f64,
    pub bound: f64,
}

/// ‖P_t f - Π₀f‖² against e^{-2t}‖f - Π₀f‖² at the given times.
pub fn hormander_check(
    f: &ScalarField,
    outer: &QuadratureGrid,
    inner: &QuadratureGrid,
    times: &[f64],
) -> Result<Vec<HormanderPoint>> {
    let pi0 = bargmann_field(f, inner);
    let base = outer
        .integrate_fn(|z| Complex64::new((f.eval(z) - pi0.eval(z)).norm_sqr(), 0.0))?
        .re;
    times
        .iter()
        .map(|&t| {
            let ptf = pt_field(f, SemigroupTime::new(t)?, inner);
            let lhs = outer
                .integrate_fn(|z| Complex64::new((ptf.eval(z) - pi0.eval(z)).norm_sqr(), 0.0))?
                .re;
            Ok(HormanderPoint { t, lhs, bound: (-2.0 * t).exp() * base })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplicity_enumeration_counts() {
        // N = 2, Σp ≤ 2: (0,1),(0,2),(1,0),(1,1),(2,0) — five vectors.
        assert_eq!(multiplicity_vectors(2, 2).len(), 5);
        // N = 3, Σp ≤ 4: C(7,3) - 1 = 34.
        assert_eq!(multiplicity_vectors(3, 4).len(), 34);
    }

    #[test]
    fn reduced_correlation_audit_is_clean_and_deterministic() {
        let a = correlation_audit(9, 77).unwrap();
        assert_eq!(a.violations, 0);
        let b = correlation_audit(9, 77).unwrap();
        for (x, y) in a.instances.iter().zip(&b.instances) {
            assert_eq!(x.report.lhs.to_bits(), y.report.lhs.to_bits());
        }
    }

    #[test]
    fn reduced_moment_audit_within_four_sigma() {
        let cases = moment_audit(3, 100_000, 3, 5).unwrap();
        assert!(!cases.is_empty());
        for c in &cases {
            assert!(
                c.sigma_distance() <= 4.0,
                "p = {:?}: exact {} vs {} ± {}",
                c.p,
                c.exact,
                c.estimate,
                c.stderr
            );
        }
    }

    #[test]
    fn reduced_alpha_audit_shape() {
        let audit = alpha_audit_instance(11, 0).unwrap();
        assert!(audit.max_first_diff <= audit.tol, "{audit:?}");
        assert!(audit.min_d2 >= -audit.tol, "{audit:?}");
        assert!(audit.max_cross < 1e-6, "{audit:?}");
        assert!(audit.limit_gap < 1e-6, "{audit:?}");
        assert!(audit.prime_gap < 1e-4, "{audit:?}");
    }
}
