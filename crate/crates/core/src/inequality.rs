//! Correlation and moment inequality checks with oracle-backed reports.

use alloc::vec::Vec;

use num_complex::Complex64;
// needed for f64 math in standalone no_std builds; feature-unified builds
// resolve these methods without it and would flag the import
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::calculus::{complex_hessian, real_hessian, FdStep};
use crate::error::{CoreError, Result};
use crate::field::ScalarField;
use crate::grid::QuadratureGrid;
use crate::matrix::HermitianMatrix;
use crate::permanent::{permanent, wick_moment_of_covariance};
use crate::point::ComplexPoint;
use crate::poly::{HoloPoly, LogPshProduct};
use crate::sampling::{abs_moment_mc, integrate_mc, CovarianceSpec, McConfig};

/// Outcome of an inequality check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Margin clearly positive beyond the error band.
    Holds,
    /// Margin within the error band around zero.
    HoldsWithinError,
    /// Margin below -4·(combined stderr) minus the quadrature floor.
    Violated,
}

/// Both sides of an inequality lhs ≥ rhs with error estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub stderr_lhs: f64,
    pub stderr_rhs: f64,
    pub margin: f64,
    pub verdict: Verdict,
}

/// Number of standard errors a margin must undershoot to count as violated.
pub const VERDICT_SIGMAS: f64 = 4.0;

fn make_report(lhs: f64, rhs: f64, se_lhs: f64, se_rhs: f64, floor: f64) -> InequalityReport {
    let margin = lhs - rhs;
    let band = VERDICT_SIGMAS * (se_lhs * se_lhs + se_rhs * se_rhs).sqrt() + floor;
    let verdict = if margin < -band {
        Verdict::Violated
    } else if margin > band {
        Verdict::Holds
    } else {
        Verdict::HoldsWithinError
    };
    InequalityReport { lhs, rhs, stderr_lhs: se_lhs, stderr_rhs: se_rhs, margin, verdict }
}

/// How to evaluate the correlation integrals.
#[derive(Debug, Clone, Copy)]
pub enum GapMethod {
    /// Tensor quadrature with m nodes per axis; the verdict floor comes from
    /// comparing against a grid with m+6 nodes per axis.
    Grid { m: usize },
    /// Monte Carlo with batch standard errors.
    Mc { cfg: McConfig },
}

/// Tests ∫ f g dγ ≥ ∫ f dγ ∫ g dγ.
///
/// Refuses f without the circular tag (the hypothesis of the inequality);
/// use [`correlation_gap_unchecked`] for exploratory out-of-hypothesis runs.
pub fn correlation_gap(
    f: &ScalarField,
    g: &ScalarField,
    method: GapMethod,
) -> Result<InequalityReport> {
    if !f.is_circular() {
        return Err(CoreError::NotCircular);
    }
    correlation_gap_unchecked(f, g, method)
}

/// Same computation without the circular-hypothesis guard.
pub fn correlation_gap_unchecked(
    f: &ScalarField,
    g: &ScalarField,
    method: GapMethod,
) -> Result<InequalityReport> {
    if f.dim() != g.dim() {
        return Err(CoreError::DimensionMismatch { expected: f.dim(), got: g.dim() });
    }
    let n = f.dim();
    match method {
        GapMethod::Grid { m } => {
            let sides = |m: usize| -> Result<(f64, f64)> {
                let grid = QuadratureGrid::build(n, m)?;
                let lhs = grid.integrate_fn(|z| f.eval(z) * g.eval(z))?.re;
                let rhs = grid.integrate(f)?.re * grid.integrate(g)?.re;
                Ok((lhs, rhs))
            };
            let (lhs, rhs) = sides(m)?;
            let (lhs_fine, rhs_fine) = sides(m + 6)?;
            let scale = 1.0 + lhs.abs() + rhs.abs();
            let floor = VERDICT_SIGMAS * ((lhs - lhs_fine).abs() + (rhs - rhs_fine).abs())
                + 1e-12 * scale;
            Ok(make_report(lhs_fine, rhs_fine, 0.0, 0.0, floor))
        }
        GapMethod::Mc { cfg } => {
            let product = f.product(g);
            let (lhs, se_lhs) = integrate_mc(&product, n, &cfg)?;
            let (ef, se_f) = integrate_mc(f, n, &cfg)?;
            let (eg, se_g) = integrate_mc(g, n, &cfg)?;
            let rhs = ef.re * eg.re;
            let se_rhs = ef.norm() * se_g + eg.norm() * se_f;
            Ok(make_report(lhs.re, rhs, se_lhs, se_rhs, 0.0))
        }
    }
}

fn all_even_integers(alpha: &[f64]) -> Option<Vec<usize>> {
    let mut p = Vec::with_capacity(alpha.len());
    for &a in alpha {
        let half = a / 2.0;
        if half >= 0.0 && half.fract() == 0.0 {
            p.push(half as usize);
        } else {
            return None;
        }
    }
    Some(p)
}

/// Tests the split-moment inequality
/// E ∏_{j<N} |X_j|^{α_j} ≥ (E ∏_{j<k} |X_j|^{α_j}) (E ∏_{j≥k} |X_j|^{α_j}).
///
/// Even-integer exponents go through the exact permanent oracle; everything
/// else is Monte Carlo with batch errors.
pub fn moment_split_report(
    spec: &CovarianceSpec,
    alpha: &[f64],
    k: usize,
    cfg: &McConfig,
) -> Result<InequalityReport> {
    let n = spec.output_dim();
    if alpha.len() != n {
        return Err(CoreError::DimensionMismatch { expected: n, got: alpha.len() });
    }
    if k == 0 || k >= n {
        return Err(CoreError::InvalidInput(alloc::format!(
            "split index must satisfy 1 <= k <= N-1, got {k} for N = {n}"
        )));
    }
    if let Some(p) = all_even_integers(alpha) {
        let total: usize = p.iter().sum();
        if total <= crate::permanent::PERMANENT_DIM_BUDGET {
            let c = spec.covariance();
            let lhs = wick_moment_of_covariance(&c, &p)?;
            let left = wick_moment_of_covariance(&c.principal(0..k)?, &p[..k])?;
            let right = wick_moment_of_covariance(&c.principal(k..n)?, &p[k..])?;
            let rhs = left * right;
            let floor = 1e-10 * (1.0 + lhs.abs() + rhs.abs());
            return Ok(make_report(lhs, rhs, 0.0, 0.0, floor));
        }
    }
    let (lhs, se_lhs) = abs_moment_mc(spec, alpha, cfg)?;
    let left_spec = CovarianceSpec::new(spec.rows()[..k].to_vec())?;
    let right_spec = CovarianceSpec::new(spec.rows()[k..].to_vec())?;
    let (lv, lse) = abs_moment_mc(&left_spec, &alpha[..k], cfg)?;
    let (rv, rse) = abs_moment_mc(&right_spec, &alpha[k..], cfg)?;
    let rhs = lv * rv;
    let se_rhs = lv.abs() * rse + rv.abs() * lse;
    Ok(make_report(lhs, rhs, se_lhs, se_rhs, 0.0))
}

/// Tests the full product bound E ∏ |X_j|^{α_j} ≥ ∏ E |X_j|^{α_j}
/// (the expectation is minimal for independent coordinates).
pub fn moment_product_report(
    spec: &CovarianceSpec,
    alpha: &[f64],
    cfg: &McConfig,
) -> Result<InequalityReport> {
    let n = spec.output_dim();
    if alpha.len() != n {
        return Err(CoreError::DimensionMismatch { expected: n, got: alpha.len() });
    }
    if let Some(p) = all_even_integers(alpha) {
        let total: usize = p.iter().sum();
        if total <= crate::permanent::PERMANENT_DIM_BUDGET {
            let c = spec.covariance();
            let lhs = wick_moment_of_covariance(&c, &p)?;
            let mut rhs = 1.0;
            for (j, &pj) in p.iter().enumerate() {
                rhs *= wick_moment_of_covariance(&c.principal(j..j + 1)?, &[pj])?;
            }
            let floor = 1e-10 * (1.0 + lhs.abs() + rhs.abs());
            return Ok(make_report(lhs, rhs, 0.0, 0.0, floor));
        }
    }
    let (lhs, se_lhs) = abs_moment_mc(spec, alpha, cfg)?;
    let mut rhs = 1.0;
    let mut rel_se = 0.0;
    for j in 0..n {
        let single = CovarianceSpec::new(alloc::vec![spec.rows()[j].clone()])?;
        let (v, se) = abs_moment_mc(&single, &alpha[j..j + 1], cfg)?;
        rhs *= v;
        if v.abs() > 0.0 {
            rel_se += se / v.abs();
        }
    }
    let se_rhs = rhs.abs() * rel_se;
    Ok(make_report(lhs, rhs, se_lhs, se_rhs, 0.0))
}

/// Largest matrix the Lieb audit accepts.
pub const LIEB_DIM_BUDGET: usize = 12;

/// Lieb's permanent inequality for a PSD Hermitian matrix:
/// per(C) ≥ per(C[..k]) · per(C[k..]).
pub fn lieb_check(c: &HermitianMatrix, k: usize) -> Result<InequalityReport> {
    let n = c.dim();
    if n > LIEB_DIM_BUDGET {
        return Err(CoreError::BudgetExceeded { requested: n, budget: LIEB_DIM_BUDGET });
    }
    if k == 0 || k >= n {
        return Err(CoreError::InvalidInput(alloc::format!(
            "split index must satisfy 1 <= k <= dim-1, got {k} for dim {n}"
        )));
    }
    if !c.is_psd(1e-9 * c.frobenius().max(1.0)) {
        return Err(CoreError::InvalidInput("matrix is not positive semidefinite".into()));
    }
    let lhs = permanent(&c.rows())?;
    let left = permanent(&c.principal(0..k)?.rows())?;
    let right = permanent(&c.principal(k..n)?.rows())?;
    debug_assert!(lhs.im.abs() <= 1e-10 * (1.0 + lhs.norm()));
    let rhs = left.re * right.re;
    let floor = 1e-9 * (1.0 + lhs.norm() + rhs.abs());
    Ok(make_report(lhs.re, rhs, 0.0, 0.0, floor))
}

/// The closing computation of the flow analysis: at z the complex-Hessian
/// pairing of f = |w|^{1/3} and g = |w|⁴ is nonnegative while the
/// real-Hessian pairing equals -(4/3)|z|^{1/3}.
///
/// Returns (complex_trace, real_trace).
pub fn hessian_discrepancy_demo(z: &ComplexPoint, step: FdStep) -> Result<(f64, f64)> {
    if z.dim() != 1 {
        return Err(CoreError::DimensionMismatch { expected: 1, got: z.dim() });
    }
    let f = ScalarField::abs_power(1, 1.0 / 3.0);
    let g = ScalarField::abs_power(1, 4.0);
    let cf = complex_hessian(&f, z, step)?;
    let cg = complex_hessian(&g, z, step)?;
    let complex_trace = cf.trace_product(&cg)?;
    let rf = real_hessian(&f, z, step)?;
    let rg = real_hessian(&g, z, step)?;
    let real_trace = rf.trace_product(&rg)?;
    Ok((complex_trace, real_trace))
}

// ---------------------------------------------------------------------------
// Random instances for audits (coefficients i.i.d. standard complex normal).
// ---------------------------------------------------------------------------

fn standard_complex<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
}

fn multi_indices(n: usize, degree: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return alloc::vec![alloc::vec![degree]];
    }
    let mut out = Vec::new();
    for first in 0..=degree {
        for mut rest in multi_indices(n - 1, degree - first) {
            let mut idx = alloc::vec![first];
            idx.append(&mut rest);
            out.push(idx);
        }
    }
    out
}

/// Homogeneous polynomial of the exact degree with random coefficients.
pub fn random_homogeneous_poly<R: Rng>(n: usize, degree: u32, rng: &mut R) -> HoloPoly {
    let terms = multi_indices(n, degree)
        .into_iter()
        .map(|idx| (idx, standard_complex(rng)))
        .collect();
    HoloPoly::new(n, terms).expect("generated terms are consistent")
}

/// Polynomial with terms of every degree up to the bound (generally not
/// homogeneous, hence not circular).
pub fn random_poly<R: Rng>(n: usize, max_degree: u32, rng: &mut R) -> HoloPoly {
    let mut terms = Vec::new();
    for d in 0..=max_degree {
        for idx in multi_indices(n, d) {
            terms.push((idx, standard_complex(rng)));
        }
    }
    HoloPoly::new(n, terms).expect("generated terms are consistent")
}

/// Options for [`random_log_psh`].
#[derive(Debug, Clone, Copy)]
pub struct LogPshOptions {
    pub max_factors: usize,
    pub max_degree: u32,
    pub max_alpha: f64,
    /// Homogeneous factors only (makes the product circular-symmetric).
    pub homogeneous: bool,
    /// Restrict exponents to the even integers {2, 4} (polynomial fields,
    /// which tensor quadrature integrates exactly).
    pub even_alpha: bool,
}

impl Default for LogPshOptions {
    fn default() -> Self {
        Self { max_factors: 2, max_degree: 3, max_alpha: 3.0, homogeneous: true, even_alpha: false }
    }
}

/// Random log-psh product ∏ |F_j|^{α_j} per the options.
pub fn random_log_psh<R: Rng>(n: usize, opts: LogPshOptions, rng: &mut R) -> LogPshProduct {
    let factors = 1 + rng.random_range(0..opts.max_factors.max(1));
    let parts = (0..factors)
        .map(|_| {
            let degree = rng.random_range(1..=opts.max_degree.max(1));
            let poly = if opts.homogeneous {
                random_homogeneous_poly(n, degree, rng)
            } else {
                random_poly(n, degree, rng)
            };
            let alpha = if opts.even_alpha {
                2.0 * rng.random_range(1..=2) as f64
            } else {
                rng.random::<f64>() * opts.max_alpha
            };
            (poly, alpha)
        })
        .collect();
    LogPshProduct::new(parts).expect("generated factors are consistent")
}

/// Random PSD Hermitian matrix B B* with unit diagonal.
pub fn random_psd<R: Rng>(dim: usize, rng: &mut R) -> HermitianMatrix {
    let b: Vec<Vec<Complex64>> =
        (0..dim).map(|_| (0..dim).map(|_| standard_complex(rng)).collect()).collect();
    let mut rows = alloc::vec![alloc::vec![Complex64::ZERO; dim]; dim];
    for j in 0..dim {
        for k in 0..dim {
            rows[j][k] = crate::point::dot_conj(&b[j], &b[k]);
        }
    }
    // normalize to unit diagonal so permanents stay O(1)
    let d: Vec<f64> = (0..dim).map(|j| rows[j][j].re.max(1e-12).sqrt()).collect();
    for j in 0..dim {
        for k in 0..dim {
            rows[j][k] /= d[j] * d[k];
        }
    }
    HermitianMatrix::from_rows(&rows).expect("Gram construction is Hermitian")
}

/// Random covariance spec with N outputs driven by n latent coordinates.
pub fn random_covariance_spec<R: Rng>(big_n: usize, n: usize, rng: &mut R) -> CovarianceSpec {
    let rows = (0..big_n)
        .map(|_| (0..n).map(|_| standard_complex(rng)).collect())
        .collect();
    CovarianceSpec::new(rows).expect("generated rows are consistent")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::make_field;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gap_for_abs_square_pair() {
        // f = g = |w|²: lhs = E|G|⁴ = 2, rhs = 1, margin 1.
        let f = ScalarField::abs_power(1, 2.0);
        let r = correlation_gap(&f, &f, GapMethod::Grid { m: 24 }).unwrap();
        assert_abs_diff_eq!(r.lhs, 2.0, epsilon = 1e-8);
        assert_abs_diff_eq!(r.rhs, 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(r.margin, 1.0, epsilon = 1e-8);
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn gap_for_constant_is_equality() {
        let f = ScalarField::constant(1, Complex64::ONE);
        let r = correlation_gap(&f, &f, GapMethod::Grid { m: 12 }).unwrap();
        assert_abs_diff_eq!(r.margin, 0.0, epsilon = 1e-12);
        assert_eq!(r.verdict, Verdict::HoldsWithinError);
    }

    #[test]
    fn gap_with_shifted_factor() {
        // f = |w|², g = |w+1|²: lhs = E|G|²|G+1|² = 3, rhs = 1·2 = 2.
        let f = ScalarField::abs_power(1, 2.0);
        let shifted = HoloPoly::new(
            1,
            alloc::vec![
                (alloc::vec![1], Complex64::ONE),
                (alloc::vec![0], Complex64::ONE)
            ],
        )
        .unwrap();
        let g = make_field(&LogPshProduct::new(alloc::vec![(shifted, 2.0)]).unwrap());
        let r = correlation_gap(&f, &g, GapMethod::Grid { m: 24 }).unwrap();
        assert_abs_diff_eq!(r.lhs, 3.0, epsilon = 1e-8);
        assert_abs_diff_eq!(r.rhs, 2.0, epsilon = 1e-8);
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn gap_refuses_non_circular_hypothesis() {
        let affine = HoloPoly::new(
            1,
            alloc::vec![
                (alloc::vec![1], Complex64::ONE),
                (alloc::vec![0], Complex64::ONE)
            ],
        )
        .unwrap();
        let f = make_field(&LogPshProduct::new(alloc::vec![(affine, 2.0)]).unwrap());
        let g = ScalarField::abs_power(1, 2.0);
        assert!(matches!(
            correlation_gap(&f, &g, GapMethod::Grid { m: 12 }),
            Err(CoreError::NotCircular)
        ));
        assert!(correlation_gap_unchecked(&f, &g, GapMethod::Grid { m: 12 }).is_ok());
    }

    #[test]
    fn gap_via_monte_carlo() {
        let f = ScalarField::abs_power(1, 2.0);
        let cfg = McConfig::new(200_000, 5, 20).unwrap();
        let r = correlation_gap(&f, &f, GapMethod::Mc { cfg }).unwrap();
        assert!((r.margin - 1.0).abs() < 4.0 * (r.stderr_lhs + r.stderr_rhs) + 0.05);
        assert_ne!(r.verdict, Verdict::Violated);
    }

    #[test]
    fn moment_split_examples() {
        let cfg = McConfig::new(100_000, 2, 10).unwrap();
        // independent: margin 0 within error
        let id = CovarianceSpec::new(alloc::vec![
            alloc::vec![Complex64::ONE, Complex64::ZERO],
            alloc::vec![Complex64::ZERO, Complex64::ONE],
        ])
        .unwrap();
        let r = moment_split_report(&id, &[2.0, 2.0], 1, &cfg).unwrap();
        assert_abs_diff_eq!(r.margin, 0.0, epsilon = 1e-10);
        // correlated ρ = 1/√2: exact permanent route gives 3/2 vs 1
        let rho = core::f64::consts::FRAC_1_SQRT_2;
        let spec = CovarianceSpec::new(alloc::vec![
            alloc::vec![Complex64::ONE, Complex64::ZERO],
            alloc::vec![
                Complex64::new(rho, 0.0),
                Complex64::new((1.0 - rho * rho).sqrt(), 0.0)
            ],
        ])
        .unwrap();
        let r = moment_split_report(&spec, &[2.0, 2.0], 1, &cfg).unwrap();
        assert_abs_diff_eq!(r.lhs, 1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(r.rhs, 1.0, epsilon = 1e-12);
        assert_eq!(r.verdict, Verdict::Holds);
        // fractional exponents go through MC and should also hold
        let r = moment_split_report(&spec, &[1.0, 0.5], 1, &cfg).unwrap();
        assert_ne!(r.verdict, Verdict::Violated);
        // bad split index
        assert!(moment_split_report(&spec, &[2.0, 2.0], 2, &cfg).is_err());
    }

    #[test]
    fn product_bound_for_independent_is_tight() {
        let cfg = McConfig::new(10_000, 2, 10).unwrap();
        let id = CovarianceSpec::new(alloc::vec![
            alloc::vec![Complex64::ONE, Complex64::ZERO],
            alloc::vec![Complex64::ZERO, Complex64::ONE],
        ])
        .unwrap();
        let r = moment_product_report(&id, &[2.0, 4.0], &cfg).unwrap();
        assert_abs_diff_eq!(r.margin, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn lieb_examples() {
        // identity: margins 0
        let id = HermitianMatrix::identity(4);
        let r = lieb_check(&id, 2).unwrap();
        assert_abs_diff_eq!(r.lhs, 1.0);
        assert_abs_diff_eq!(r.rhs, 1.0);
        assert_ne!(r.verdict, Verdict::Violated);
        // 2×2 correlated
        let rho = core::f64::consts::FRAC_1_SQRT_2;
        let c2 = HermitianMatrix::from_rows(&[
            alloc::vec![Complex64::ONE, Complex64::new(rho, 0.0)],
            alloc::vec![Complex64::new(rho, 0.0), Complex64::ONE],
        ])
        .unwrap();
        let r = lieb_check(&c2, 1).unwrap();
        assert_abs_diff_eq!(r.lhs, 1.5, epsilon = 1e-14);
        assert_abs_diff_eq!(r.rhs, 1.0, epsilon = 1e-14);
        // random PSD 4×4, both splits
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let c = random_psd(4, &mut rng);
            for k in 1..4 {
                let r = lieb_check(&c, k).unwrap();
                assert!(r.margin >= -1e-10, "margin {}", r.margin);
            }
        }
        // non-PSD input is refused
        let neg = HermitianMatrix::from_rows(&[alloc::vec![Complex64::new(-1.0, 0.0)]]).unwrap();
        assert!(lieb_check(&neg, 1).is_err());
    }

    #[test]
    fn discrepancy_demo_signs() {
        let step = FdStep::default();
        let (ct, rt) = hessian_discrepancy_demo(
            &ComplexPoint::scalar(Complex64::new(1.0, 0.0)),
            step,
        )
        .unwrap();
        assert!(ct >= 0.0);
        assert_abs_diff_eq!(rt, -4.0 / 3.0, epsilon = 1e-3);
        let (ct8, rt8) = hessian_discrepancy_demo(
            &ComplexPoint::scalar(Complex64::new(8.0, 0.0)),
            FdStep::new(1e-4).unwrap(),
        )
        .unwrap();
        assert!(ct8 >= 0.0);
        assert_abs_diff_eq!(rt8, -8.0 / 3.0, epsilon = 1e-3);
        // too close to the singular origin
        assert!(hessian_discrepancy_demo(
            &ComplexPoint::scalar(Complex64::new(1e-6, 0.0)),
            step
        )
        .is_err());
    }

    #[test]
    fn generators_have_advertised_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let hom = random_homogeneous_poly(2, 3, &mut rng);
        assert_eq!(hom.homogeneity_degree().unwrap(), Some(3));
        let prod = random_log_psh(
            2,
            LogPshOptions { homogeneous: true, ..Default::default() },
            &mut rng,
        );
        assert!(make_field(&prod).is_circular());
        let psd = random_psd(5, &mut rng);
        assert!(psd.is_psd(1e-10));
        assert_abs_diff_eq!(psd.entry(0, 0).re, 1.0, epsilon = 1e-12);
    }
}
