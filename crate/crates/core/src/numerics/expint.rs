//! Exponential integral `E1(x) = ∫_x^∞ e^{-t}/t dt` for real `x > 0`.
//!
//! Power series below `x = 1`, modified-Lentz continued fraction above.

use crate::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_BRANCH: f64 = 1.0;
const EPS: f64 = 1e-16;
const MAX_ITER: usize = 10_000;

/// `E1(x)` with relative error below `1e-10`.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    check(x)?;
    if x <= SERIES_BRANCH {
        Ok(e1_series(x))
    } else {
        // e^{-x} underflows past ~745; E1 is then below the smallest double.
        Ok((-x).exp() * e1_continued_fraction(x))
    }
}

/// `e^x E1(x)`, finite for every `x > 0` including where `e^x` overflows.
pub fn scaled_exp_integral_e1(x: f64) -> Result<f64> {
    check(x)?;
    if x <= SERIES_BRANCH {
        Ok(x.exp() * e1_series(x))
    } else {
        Ok(e1_continued_fraction(x))
    }
}

fn check(x: f64) -> Result<()> {
    if x > 0.0 && !x.is_nan() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "exponential integral needs x > 0, got {x}"
        )))
    }
}

/// `E1(x) = -γ - ln x - Σ_{k≥1} (-x)^k / (k k!)`.
fn e1_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..MAX_ITER {
        let kf = k as f64;
        term *= -x / kf;
        let contrib = term / kf;
        sum += contrib;
        if contrib.abs() < EPS * sum.abs().max(1e-300) {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

/// `e^x E1(x)` from the continued fraction `1/(x+1- 1/(x+3- 4/(x+5- ...)))`.
fn e1_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}
