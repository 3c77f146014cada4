//! `E[log2(1 + X)]` for `X ~ Gamma(shape, scale)`.
//!
//! The hypergeometric closed form `3F1(k+1,1,1;2;-s) k s log2 e` has a
//! divergent defining series for every positive `s`, so the expectation is
//! evaluated directly. With `X = s e^u` the log-density of `u` is
//! `k (u - ln k) - (e^u - k)` up to a constant: smooth, unimodal with mode
//! `ln k` and width about `1 / sqrt(k)`. The integral and its normaliser are
//! both computed by adaptive quadrature on a geometric partition around
//! the mode, which removes the need for `ln Γ(k)`.

use std::f64::consts::LN_2;

use super::quadrature::{integrate_with_breakpoints, QuadratureSpec};
use crate::{Error, Result};

/// Log-weight cut-off: contributions below `e^-60` of the peak are dropped.
const TAIL_CUTOFF: f64 = 60.0;

pub fn ergodic_log_gamma(shape: f64, scale: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(shape > 0.0 && shape.is_finite()) || !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::invalid(format!(
            "Gamma parameters must be positive and finite, got shape={shape}, scale={scale}"
        )));
    }
    let mode = shape.ln();
    let log_weight = |u: f64| shape * (u - mode) - (u.exp() - shape);
    let weight = |u: f64| log_weight(u).exp();

    let width = 1.0 / shape.sqrt();
    let mut points = vec![mode];
    for dir in [-1.0, 1.0] {
        let mut step = width;
        loop {
            let u = mode + dir * step;
            points.push(u);
            if log_weight(u) < -TAIL_CUTOFF {
                break;
            }
            step *= 2.0;
        }
    }
    points.sort_by(f64::total_cmp);
    // where s e^u crosses one the log term changes from linear to logarithmic
    let knee = -scale.ln();
    if knee > points[0] && knee < points[points.len() - 1] {
        points.push(knee);
        points.sort_by(f64::total_cmp);
    }

    let norm = integrate_with_breakpoints(weight, &points, spec)?;
    let mass = integrate_with_breakpoints(|u| (scale * u.exp()).ln_1p() * weight(u), &points, spec)?;
    if !(norm > 0.0) {
        return Err(Error::NumericalDegeneracy(format!(
            "Gamma normaliser vanished for shape={shape}"
        )));
    }
    Ok(mass / norm / LN_2)
}
