//! Real branches of the Lambert W function.
//!
//! `W(z)` solves `w * exp(w) = z`. On the real line there are two branches
//! meeting at the branch point `z = -1/e`, `w = -1`:
//!
//! * [`WBranch::Principal`] (`W_0`), defined for `z >= -1/e`, with `w >= -1`;
//! * [`WBranch::MinusOne`] (`W_-1`), defined for `-1/e <= z < 0`, with `w <= -1`.
//!
//! Evaluation starts from a series or asymptotic guess and is refined with
//! Halley's method. Close to the branch point the square-root series in
//! `p = sqrt(2(e z + 1))` is used directly, because the Halley update loses
//! all precision where `w + 1` vanishes.

use crate::error::{domain, Result};

/// Selects a real branch of the Lambert W function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WBranch {
    Principal,
    MinusOne,
}

/// `1/e` split into a double and its rounding residual so that `z + 1/e`
/// keeps full precision next to the branch point.
const INV_E_HI: f64 = 0.367_879_441_171_442_33;
const INV_E_LO: f64 = -1.242_875_367_278_836_3e-17;

/// Arguments this far below `-1/e` are treated as rounding noise on the
/// branch point itself (e.g. `-1.0 * (-1.0f64).exp()`).
const BRANCH_SLACK: f64 = 4.0 * f64::EPSILON * INV_E_HI;

/// Series coefficients of `W_0` in powers of `p`, starting at `p^0`.
const BRANCH_SERIES: [f64; 10] = [
    -1.0,
    1.0,
    -1.0 / 3.0,
    11.0 / 72.0,
    -43.0 / 540.0,
    769.0 / 17280.0,
    -221.0 / 8505.0,
    680_863.0 / 43_545_600.0,
    -1963.0 / 204_120.0,
    226_287_557.0 / 37_623_398_400.0,
];

/// Evaluates `W_b(z)` on the requested real branch.
///
/// Returns a domain error for `z < -1/e`, for non-finite `z`, and for
/// `z >= 0` on the `MinusOne` branch.
pub fn lambert_w(branch: WBranch, z: f64) -> Result<f64> {
    if !z.is_finite() {
        return Err(domain("lambert_w", z));
    }
    let offset = (z + INV_E_HI) + INV_E_LO;
    if offset < -BRANCH_SLACK {
        return Err(domain("lambert_w", z));
    }
    if branch == WBranch::MinusOne && z >= 0.0 {
        return Err(domain("lambert_w (branch -1)", z));
    }
    if offset <= 0.0 {
        return Ok(-1.0);
    }
    if z == 0.0 {
        return Ok(0.0);
    }

    let p = (2.0 * std::f64::consts::E * offset).sqrt();
    let signed_p = match branch {
        WBranch::Principal => p,
        WBranch::MinusOne => -p,
    };
    if p < 1e-3 {
        return Ok(branch_series(signed_p));
    }

    let w = match branch {
        WBranch::Principal => {
            if p < 1.0 {
                branch_series(signed_p)
            } else if z < 3.0 {
                // Winitzki's uniform approximation.
                let l = z.ln_1p();
                l * (1.0 - l.ln_1p() / (2.0 + l))
            } else {
                asymptotic_guess(z.ln())
            }
        }
        WBranch::MinusOne => {
            if p < 1.0 {
                branch_series(signed_p)
            } else {
                asymptotic_guess((-z).ln())
            }
        }
    };

    // Far from the branch point iterate on the logarithmic form so that
    // exp(w) never overflows or underflows.
    let refined = if w.abs() > 2.0 {
        halley_log_form(w, z)
    } else {
        halley_direct(w, z)
    };
    Ok(refined)
}

fn branch_series(p: f64) -> f64 {
    BRANCH_SERIES.iter().rev().fold(0.0, |acc, c| acc * p + c)
}

/// `L1 - L2 + L2/L1` with `L1 = ln|z|`, `L2 = ln|L1|`.
fn asymptotic_guess(l1: f64) -> f64 {
    let l2 = l1.abs().ln();
    l1 - l2 + l2 / l1
}

fn halley_direct(mut w: f64, z: f64) -> f64 {
    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - z;
        if f == 0.0 {
            break;
        }
        let wp1 = w + 1.0;
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        if !step.is_finite() {
            break;
        }
        w -= step;
        if step.abs() <= 2.0 * f64::EPSILON * w.abs().max(1.0) {
            break;
        }
    }
    w
}

/// Halley iteration on `g(w) = w + ln|w| - ln|z|`, which shares its root
/// with `w e^w = z` whenever `w` and `z` have the same sign.
fn halley_log_form(mut w: f64, z: f64) -> f64 {
    let target = z.abs().ln();
    for _ in 0..64 {
        let g = w + w.abs().ln() - target;
        if g == 0.0 {
            break;
        }
        let dg = 1.0 + 1.0 / w;
        let d2g = -1.0 / (w * w);
        let step = g / (dg - g * d2g / (2.0 * dg));
        if !step.is_finite() {
            break;
        }
        w -= step;
        if step.abs() <= 2.0 * f64::EPSILON * w.abs() {
            break;
        }
    }
    w
}
