//! One-dimensional Gauss–Hermite rule for the weight e^{-s²}.

use alloc::vec::Vec;

// needed for f64 math in standalone no_std builds; feature-unified builds
// resolve these methods without it and would flag the import
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{CoreError, Result};

/// Nodes (ascending) and weights of the m-point rule:
/// ∫ e^{-s²} g(s) ds ≈ Σ w_i g(s_i), exact for polynomials of degree 2m-1.
pub fn gauss_hermite(m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if m < 1 {
        return Err(CoreError::InvalidInput("need at least one node".into()));
    }
    let mut nodes = alloc::vec![0.0f64; m];
    let mut weights = alloc::vec![0.0f64; m];
    let half = (m + 1) / 2;
    let mf = m as f64;
    let mut z = 0.0f64;
    for i in 0..half {
        // initial guesses for the descending positive roots
        z = match i {
            0 => (2.0 * mf + 1.0).sqrt() - 1.85575 * (2.0 * mf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * mf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * nodes[m - 1],
            3 => 1.91 * z - 0.91 * nodes[m - 2],
            _ => 2.0 * z - nodes[m - i + 1],
        };
        if m % 2 == 1 && i == half - 1 {
            z = 0.0; // odd rules have an exact middle root
        }
        let mut pp = 0.0;
        for _iter in 0..100 {
            // orthonormal recurrence: p_{j+1} = s·√(2/(j+1)) p_j - √(j/(j+1)) p_{j-1}
            let mut p1 = core::f64::consts::PI.powf(-0.25);
            let mut p2 = 0.0f64;
            for j in 0..m {
                let p3 = p2;
                p2 = p1;
                let jf = (j + 1) as f64;
                p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
            }
            pp = (2.0 * mf).sqrt() * p2;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() <= 1e-15 * (1.0 + z.abs()) {
                break;
            }
        }
        nodes[m - 1 - i] = z;
        nodes[i] = -z;
        let w = 2.0 / (pp * pp);
        weights[m - 1 - i] = w;
        weights[i] = w;
    }
    Ok((nodes, weights))
}
