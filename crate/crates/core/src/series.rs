//! The entire series B(x) = Σ_{k≥0} x^k / (k!)².


use crate::error::{CoreError, Result};

/// B(x) = Σ_{k≥0} x^k/(k!)², summed forward until the next term drops below
/// 1e-16 of the partial sum. Defined for x ≥ 0 (the only range needed:
/// arguments are of the form |w·z̄|² scaled by positive constants).
pub fn bessel_b(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(CoreError::InvalidInput(alloc::format!(
            "B(x) requires x >= 0, got {x}"
        )));
    }
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for k in 1..1000u32 {
        term *= x / ((k as f64) * (k as f64));
        sum += term;
        if term < 1e-16 * sum {
            break;
        }
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn value_at_zero_and_negative_input() {
        assert_eq!(bessel_b(0.0).unwrap(), 1.0);
        assert!(bessel_b(-1.0).is_err());
    }

    #[test]
    fn value_at_one_matches_partial_sums() {
        // Oracle: 20 explicit terms of Σ 1/(k!)².
        let mut oracle = 0.0;
        let mut fact = 1.0f64;
        for k in 0..20u32 {
            if k > 0 {
                fact *= k as f64;
            }
            oracle += 1.0 / (fact * fact);
        }
        assert_abs_diff_eq!(bessel_b(1.0).unwrap(), oracle, epsilon = 1e-15);
        assert_abs_diff_eq!(bessel_b(1.0).unwrap(), 2.2795853, epsilon = 1e-7);
    }

    #[test]
    fn matches_angular_quadrature() {
        // (1/2π) ∫ e^{a e^{iθ} + b e^{-iθ}} dθ = B(ab); trapezoid rule is
        // spectrally accurate on periodic integrands.
        let x: f64 = 2.5;
        let a = x.sqrt();
        let nodes = 512;
        let mut acc = 0.0;
        for k in 0..nodes {
            let theta = 2.0 * core::f64::consts::PI * (k as f64) / (nodes as f64);
            acc += (a * theta.cos() * 2.0).exp() * 1.0;
        }
        // e^{a e^{iθ}} e^{a e^{-iθ}} = e^{2a cos θ}, real already
        let oracle = acc / nodes as f64;
        assert_abs_diff_eq!(bessel_b(x).unwrap(), oracle, epsilon = 1e-10);
    }

    #[test]
    fn monotone_and_convex_on_grid() {
        let xs: alloc::vec::Vec<f64> = (0..=100).map(|i| 0.1 * i as f64).collect();
        let vals: alloc::vec::Vec<f64> = xs.iter().map(|&x| bessel_b(x).unwrap()).collect();
        for w in vals.windows(2) {
            assert!(w[1] >= w[0]);
        }
        for w in vals.windows(3) {
            assert!(w[2] - 2.0 * w[1] + w[0] >= -1e-12);
        }
        assert!(vals.iter().all(|&v| v >= 1.0));
    }
}
