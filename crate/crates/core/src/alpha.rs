//! The flow t ↦ α(t) = ∫ (P_t^{ou} f) g dγ = ∫ (P_t f) g dγ and its
//! derivatives, the quantitative skeleton of the correlation inequality:
//! α decreases from ∫fg dγ to ∫f dγ ∫g dγ, and is convex because
//! α''(t) = ∫ Tr(D²_C P_t f · D²_C g) dγ pairs two PSD complex Hessians.

use alloc::vec::Vec;

use num_complex::Complex64;
// needed for f64 math in standalone no_std builds; feature-unified builds
// resolve these methods without it and would flag the import
#[allow(unused_imports)]
use num_traits::Float;

use crate::calculus::{complex_hessian, dz_field, dzbar_field, FdStep};
use crate::error::{CoreError, Result};
use crate::field::ScalarField;
use crate::grid::QuadratureGrid;
use crate::semigroup::{ou_apply, pt_apply, pt_field, SemigroupTime};

/// Sampled flow with finite-difference derivative estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaCurve {
    pub t: Vec<f64>,
    /// α(t) along the Ornstein–Uhlenbeck path.
    pub alpha: Vec<f64>,
    /// Central-difference first derivative (one-sided at the ends).
    pub d1: Vec<f64>,
    /// Second divided differences (nonnegative for convex α on any grid).
    pub d2: Vec<f64>,
    /// |α via P_t^{ou} - α via P_t| / (1 + |α|) per node.
    pub cross_residual: Vec<f64>,
    /// α(∞) = ∫f dγ · ∫g dγ.
    pub limit: f64,
}

/// Default flow grid: 24 geometric points in [0.05, 40], resolving both the
/// fast initial decay and the plateau.
pub fn default_t_grid() -> Vec<f64> {
    geometric_t_grid(0.05, 40.0, 24)
}

pub fn geometric_t_grid(t_min: f64, t_max: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2 && t_min > 0.0 && t_max > t_min);
    let ratio = (t_max / t_min).powf(1.0 / (points as f64 - 1.0));
    (0..points).map(|i| t_min * ratio.powi(i as i32)).collect()
}

fn require_circular(f: &ScalarField) -> Result<()> {
    if f.is_circular() {
        Ok(())
    } else {
        Err(CoreError::NotCircular)
    }
}

/// The quadrature pair used by the flow: the caller's grid for the outer
/// integral and the OU average, and a grid with doubled per-axis nodes for
/// P_t (its complex weight costs accuracy).
fn pt_companion_grid(grid: &QuadratureGrid) -> Result<QuadratureGrid> {
    QuadratureGrid::build_with_budget(
        grid.dim(),
        2 * grid.nodes_per_axis(),
        crate::grid::DEFAULT_NODE_BUDGET.max(grid.len() * (1 << (2 * grid.dim()))),
    )
}

/// α(t) evaluated along both semigroup paths: (via P_t^{ou}, via P_t).
pub fn alpha_at(
    f: &ScalarField,
    g: &ScalarField,
    time: SemigroupTime,
    grid: &QuadratureGrid,
    pt_grid: &QuadratureGrid,
) -> Result<(f64, f64)> {
    let via_ou = grid.integrate_fn(|z| {
        ou_apply(f, time, z, grid).unwrap_or(Complex64::new(f64::NAN, f64::NAN)) * g.eval(z)
    })?;
    let via_pt = grid.integrate_fn(|z| {
        pt_apply(f, time, z, pt_grid).unwrap_or(Complex64::new(f64::NAN, f64::NAN)) * g.eval(z)
    })?;
    Ok((via_ou.re, via_pt.re))
}

/// Samples α on `t_grid`, reporting derivative estimates, the per-node
/// agreement of the two semigroup routes, and the t → ∞ limit.
pub fn alpha_curve(
    f: &ScalarField,
    g: &ScalarField,
    t_grid: &[f64],
    grid: &QuadratureGrid,
) -> Result<AlphaCurve> {
    require_circular(f)?;
    if t_grid.len() < 3 {
        return Err(CoreError::InvalidInput("need at least 3 flow points".into()));
    }
    if t_grid.windows(2).any(|w| !(w[0] < w[1])) || t_grid[0] < 0.0 {
        return Err(CoreError::InvalidInput("t grid must be strictly increasing, >= 0".into()));
    }
    let pt_grid = pt_companion_grid(grid)?;
    let mut alpha = Vec::with_capacity(t_grid.len());
    let mut cross = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let time = SemigroupTime::new(t)?;
        let (via_ou, via_pt) = alpha_at(f, g, time, grid, &pt_grid)?;
        alpha.push(via_ou);
        cross.push((via_ou - via_pt).abs() / (1.0 + via_ou.abs()));
    }
    let limit = grid.integrate(f)?.re * grid.integrate(g)?.re;
    let (d1, d2) = divided_differences(t_grid, &alpha);
    Ok(AlphaCurve { t: t_grid.to_vec(), alpha, d1, d2, cross_residual: cross, limit })
}

/// Nonuniform 3-point first derivative and second divided differences;
/// endpoints reuse the nearest interior stencil one-sidedly.
fn divided_differences(t: &[f64], v: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = t.len();
    let mut d1 = alloc::vec![0.0; n];
    let mut d2 = alloc::vec![0.0; n];
    for i in 0..n {
        let j = i.clamp(1, n - 2); // stencil center
        let (t0, t1, t2) = (t[j - 1], t[j], t[j + 1]);
        let (v0, v1, v2) = (v[j - 1], v[j], v[j + 1]);
        let hm = t1 - t0;
        let hp = t2 - t1;
        // second divided difference, 2·[t0,t1,t2]v
        d2[i] = 2.0 * ((v2 - v1) / hp - (v1 - v0) / hm) / (hm + hp);
        // first derivative at t[i] from the quadratic through the stencil
        let x = t[i];
        d1[i] = v0 * (2.0 * x - t1 - t2) / ((t0 - t1) * (t0 - t2))
            + v1 * (2.0 * x - t0 - t2) / ((t1 - t0) * (t1 - t2))
            + v2 * (2.0 * x - t0 - t1) / ((t2 - t0) * (t2 - t1));
    }
    (d1, d2)
}

/// α'(t) computed two ways: a central difference of α, and the commuted
/// integral form -Σ_j ∫ P_t(∂_{z_j} f) ∂_{z̄_j} g dγ.
pub fn alpha_prime_two_ways(
    f: &ScalarField,
    g: &ScalarField,
    t: f64,
    grid: &QuadratureGrid,
    step: FdStep,
) -> Result<(f64, f64)> {
    require_circular(f)?;
    if !(t > 0.0) {
        return Err(CoreError::InvalidInput("need t > 0".into()));
    }
    let pt_grid = pt_companion_grid(grid)?;
    let delta = (1e-3 * t.max(1.0)).min(0.5 * t);
    let (plus, _) = alpha_at(f, g, SemigroupTime::new(t + delta)?, grid, &pt_grid)?;
    let (minus, _) = alpha_at(f, g, SemigroupTime::new(t - delta)?, grid, &pt_grid)?;
    let fd = (plus - minus) / (2.0 * delta);

    let time = SemigroupTime::new(t)?;
    let mut integral = 0.0;
    for j in 0..f.dim() {
        let df = dz_field(f, j, step);
        let dg = dzbar_field(g, j, step);
        let term = grid.integrate_fn(|z| {
            pt_apply(&df, time, z, &pt_grid).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
                * dg.eval(z)
        })?;
        integral -= term.re;
    }
    Ok((fd, integral))
}

/// α''(t) in its complex-Hessian trace form,
/// ∫ Tr(D²_C(P_t f)(z) · D²_C g(z)) dγ(z); nonnegative for psh f, g.
pub fn alpha_second_form(
    f: &ScalarField,
    g: &ScalarField,
    t: f64,
    grid: &QuadratureGrid,
    step: FdStep,
) -> Result<f64> {
    require_circular(f)?;
    if !(t > 0.0) {
        return Err(CoreError::InvalidInput("need t > 0".into()));
    }
    let pt_grid = pt_companion_grid(grid)?;
    let ptf = pt_field(f, SemigroupTime::new(t)?, &pt_grid);
    let v = grid.integrate_fn(|z| {
        let pair = complex_hessian(&ptf, z, step)
            .and_then(|hf| Ok((hf, complex_hessian(g, z, step)?)))
            .and_then(|(hf, hg)| hf.trace_product(&hg));
        match pair {
            Ok(tr) => Complex64::new(tr, 0.0),
            Err(_) => Complex64::new(f64::NAN, f64::NAN),
        }
    })?;
    Ok(v.re)
}
