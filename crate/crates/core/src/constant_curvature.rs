//! Scale-factor solutions `g(t) = φ(t) g_K` over a constant curvature metric.
//!
//! With `g_K` of sectional curvature `K` in dimension `n`, the flow reduces to
//!
//! ```text
//! φ' = -2K(n-1) - (α/φ) K² (n-1) = -(n-1) K (2φ + αK) / φ,
//! ```
//!
//! which integrates implicitly to
//! `φ - φ0 = -2K(n-1)t + (αK/2) ln|(2φ + αK)/(2φ0 + αK)|`. Writing
//! `w = -(2φ + αK)/(αK)` this becomes `w e^w = A e^(A + 4(n-1)t/α)` with
//! `A = w(0)`, so `φ = -(αK/2)(1 + W_b(A e^(A + 4(n-1)t/α)))` where the
//! branch `b` is the one on which `W_b(A e^A) = A`.

use crate::curvature3d::FlowParams;
use crate::error::{domain, Error, Result};
use crate::ode::{integrate_scale_flow, IntegratorOptions, Trajectory};
use crate::special_functions::{lambert_w, WBranch};

/// Scale factor at which an evolution is declared extinct.
pub const EXTINCTION_THRESHOLD: f64 = 1e-8;

/// The flow of `φ g_K` with `g_K` of constant sectional curvature `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantCurvatureProblem {
    pub k: f64,
    pub params: FlowParams,
    pub phi0: f64,
}

impl ConstantCurvatureProblem {
    /// Problem with `φ(0) = 1`.
    pub fn new(k: f64, alpha: f64, n: usize) -> Result<Self> {
        Self::with_phi0(k, alpha, n, 1.0)
    }

    pub fn with_phi0(k: f64, alpha: f64, n: usize, phi0: f64) -> Result<Self> {
        let params = FlowParams::new(alpha, n)?;
        if !k.is_finite() {
            return Err(Error::InvalidParameter(format!("curvature must be finite, got {k}")));
        }
        if !(phi0 > 0.0 && phi0.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "phi0 must be positive and finite, got {phi0}"
            )));
        }
        Ok(Self { k, params, phi0 })
    }

    fn alpha(&self) -> f64 {
        self.params.alpha
    }

    fn nm1(&self) -> f64 {
        (self.params.n - 1) as f64
    }

    /// `2φ0 + αK`; its sign decides the long-time behaviour.
    fn gap(&self) -> f64 {
        2.0 * self.phi0 + self.alpha() * self.k
    }

    /// Whether `2φ0 + αK` vanishes up to rounding in its two terms.
    fn gap_vanishes(&self) -> bool {
        let ak = self.alpha() * self.k;
        self.gap().abs() <= 4.0 * f64::EPSILON * (2.0 * self.phi0).max(ak.abs())
    }

    /// Scalar curvature `n(n-1)K/φ` of `φ g_K`.
    pub fn scalar_curvature(&self, phi: f64) -> f64 {
        let n = self.params.n as f64;
        n * self.nm1() * self.k / phi
    }

    /// `|Rm|² = 2n(n-1)K²/φ²` of `φ g_K`.
    pub fn rm_norm_sq(&self, phi: f64) -> f64 {
        let n = self.params.n as f64;
        2.0 * n * self.nm1() * self.k * self.k / (phi * phi)
    }
}

/// Long-time behaviour of `φ` from `φ(0) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `K = 0`.
    FixedFlat,
    /// `K > 0`, `α >= 0`: finite-time collapse.
    CollapsingSphere,
    /// `K < 0`, `2 + αK < 0`: finite-time collapse.
    CollapsingHyperbolic,
    /// `K < 0`, `2 + αK > 0`: immortal expansion.
    ExpandingHyperbolic,
    /// `K < 0`, `2 + αK = 0`.
    FixedHyperbolic,
    /// `K > 0`, `2 + αK = 0` (needs `α < 0`).
    FixedSphere,
    /// `K > 0`, `α < 0`, `2 + αK != 0`: `φ` tends monotonically to `-αK/2`.
    SettlingSphere,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Self::FixedFlat => "FixedFlat",
            Self::CollapsingSphere => "CollapsingSphere",
            Self::CollapsingHyperbolic => "CollapsingHyperbolic",
            Self::ExpandingHyperbolic => "ExpandingHyperbolic",
            Self::FixedHyperbolic => "FixedHyperbolic",
            Self::FixedSphere => "FixedSphere",
            Self::SettlingSphere => "SettlingSphere",
        }
    }

    pub fn collapses(self) -> bool {
        matches!(self, Self::CollapsingSphere | Self::CollapsingHyperbolic)
    }
}

/// `φ' = -2K(n-1) - (α/φ)K²(n-1)`.
pub fn phi_rhs(phi: f64, prob: &ConstantCurvatureProblem) -> Result<f64> {
    if !(phi > 0.0) {
        return Err(domain("phi_rhs", phi));
    }
    let k = prob.k;
    Ok(-2.0 * k * prob.nm1() - prob.alpha() / phi * k * k * prob.nm1())
}

fn log_rate(phi: f64, prob: &ConstantCurvatureProblem) -> f64 {
    // -(n-1)K(2φ + αK)/φ², factored so the fixed point cancels exactly.
    -prob.nm1() * prob.k * (2.0 * phi + prob.alpha() * prob.k) / (phi * phi)
}

/// Integrates `φ` on `[0, t_end]`, stopping with an `"extinction"` event once
/// `φ` reaches [`EXTINCTION_THRESHOLD`].
pub fn evolve_phi(prob: &ConstantCurvatureProblem, t_end: f64, opts: &IntegratorOptions) -> Result<Trajectory> {
    evolve_phi_between(prob, prob.phi0, 0.0, t_end, opts)
}

fn evolve_phi_between(
    prob: &ConstantCurvatureProblem,
    phi_start: f64,
    t0: f64,
    t_end: f64,
    opts: &IntegratorOptions,
) -> Result<Trajectory> {
    integrate_scale_flow(
        |_, s: &[f64], out: &mut [f64]| out[0] = log_rate(s[0], prob),
        &[phi_start],
        t0,
        t_end,
        opts,
        EXTINCTION_THRESHOLD,
    )
}

/// Integrated `φ` at each of the ascending `times` (starting at or after 0).
///
/// Entries after an extinction are `None`.
pub fn phi_at_times(
    prob: &ConstantCurvatureProblem,
    times: &[f64],
    opts: &IntegratorOptions,
) -> Result<Vec<Option<f64>>> {
    if times.windows(2).any(|w| !(w[1] > w[0])) || times.first().is_some_and(|t| *t < 0.0) {
        return Err(Error::InvalidParameter(
            "sample times must be non-negative and strictly increasing".into(),
        ));
    }
    let mut out = Vec::with_capacity(times.len());
    let mut t = 0.0;
    let mut phi = prob.phi0;
    let mut alive = true;
    for &target in times {
        if !alive {
            out.push(None);
            continue;
        }
        if target > t {
            let traj = evolve_phi_between(prob, phi, t, target, opts)?;
            if traj.event_time("extinction").is_some() {
                alive = false;
                out.push(None);
                continue;
            }
            phi = traj.final_state()[0];
            t = target;
        }
        out.push(Some(phi));
    }
    Ok(out)
}

/// Residual of the implicit solution,
/// `φ - (-2K(n-1)t + φ0 + (αK/2) ln|(2φ + αK)/(2φ0 + αK)|)`.
pub fn phi_implicit_residual(phi: f64, t: f64, prob: &ConstantCurvatureProblem) -> Result<f64> {
    if !(phi > 0.0) {
        return Err(domain("phi_implicit_residual", phi));
    }
    let ak = prob.alpha() * prob.k;
    let log_term = if ak == 0.0 {
        0.0
    } else {
        let num = 2.0 * phi + ak;
        let den = prob.gap();
        if num == 0.0 || den == 0.0 {
            return Err(domain("phi_implicit_residual", phi));
        }
        0.5 * ak * (num / den).abs().ln()
    };
    Ok(phi - (-2.0 * prob.k * prob.nm1() * t + prob.phi0 + log_term))
}

/// Lambert branch on which the closed form passes through `φ0` at `t = 0`.
pub fn closed_form_branch(prob: &ConstantCurvatureProblem) -> WBranch {
    let ak = prob.alpha() * prob.k;
    let a = -prob.gap() / ak;
    if a < -1.0 {
        WBranch::MinusOne
    } else {
        WBranch::Principal
    }
}

/// Closed-form `φ(t) = -(αK/2)(1 + W_b(A e^(A + 4(n-1)t/α)))`.
///
/// The degenerate cases `K = 0` and `2φ0 + αK = 0` are constant, and `α = 0`
/// is the linear Ricci solution. A domain error means the argument left the
/// branch domain, i.e. `t` lies past extinction.
pub fn phi_closed_form(t: f64, prob: &ConstantCurvatureProblem) -> Result<f64> {
    let alpha = prob.alpha();
    let k = prob.k;
    if k == 0.0 || (alpha != 0.0 && prob.gap_vanishes()) {
        return Ok(prob.phi0);
    }
    if alpha == 0.0 {
        let phi = prob.phi0 - 2.0 * k * prob.nm1() * t;
        return if phi > 0.0 {
            Ok(phi)
        } else {
            Err(domain("phi_closed_form", t))
        };
    }
    let ak = alpha * k;
    let a = -prob.gap() / ak;
    let z = a * (a + 4.0 * prob.nm1() * t / alpha).exp();
    let w = lambert_w(closed_form_branch(prob), z).map_err(|_| domain("phi_closed_form", t))?;
    let phi = -0.5 * ak * (1.0 + w);
    if phi > 0.0 {
        Ok(phi)
    } else {
        Err(domain("phi_closed_form", t))
    }
}

/// Extinction time `T = φ0/(2K(n-1)) + (α/(4(n-1))) ln|αK/(2φ0 + αK)|`, or
/// `None` when the solution does not collapse.
pub fn extinction_time(prob: &ConstantCurvatureProblem) -> Option<f64> {
    if !classify_regime_from(prob).collapses() {
        return None;
    }
    let alpha = prob.alpha();
    let nm1 = prob.nm1();
    let base = prob.phi0 / (2.0 * prob.k * nm1);
    let t = if alpha == 0.0 {
        base
    } else {
        let ak = alpha * prob.k;
        base + alpha / (4.0 * nm1) * (ak / prob.gap()).abs().ln()
    };
    (t.is_finite() && t > 0.0).then_some(t)
}

/// Regime of `φ` from `φ(0) = 1`.
pub fn classify_regime(k: f64, params: FlowParams) -> Regime {
    classify_regime_from(&ConstantCurvatureProblem { k, params, phi0: 1.0 })
}

fn classify_regime_from(prob: &ConstantCurvatureProblem) -> Regime {
    let k = prob.k;
    if k == 0.0 {
        return Regime::FixedFlat;
    }
    let gap = if prob.gap_vanishes() { 0.0 } else { prob.gap() };
    if k > 0.0 {
        if prob.alpha() >= 0.0 {
            Regime::CollapsingSphere
        } else if gap == 0.0 {
            Regime::FixedSphere
        } else {
            Regime::SettlingSphere
        }
    } else if gap < 0.0 {
        Regime::CollapsingHyperbolic
    } else if gap > 0.0 {
        Regime::ExpandingHyperbolic
    } else {
        Regime::FixedHyperbolic
    }
}

/// Logarithmic rate of the volume element, `-R - (α/4)|Rm|²`.
pub fn volume_rate(scalar: f64, rm_norm_sq: f64, alpha: f64) -> Result<f64> {
    if !(rm_norm_sq >= 0.0) {
        return Err(domain("volume_rate", rm_norm_sq));
    }
    Ok(-scalar - 0.25 * alpha * rm_norm_sq)
}

/// `φ'` under the volume-normalized flow,
/// `φ' + (2φ/n)(R + (α/4)|Rm|²)`, which vanishes for constant curvature.
pub fn normalized_rhs(prob: &ConstantCurvatureProblem, phi: f64) -> Result<f64> {
    let raw = phi_rhs(phi, prob)?;
    let n = prob.params.n as f64;
    let mean = prob.scalar_curvature(phi) + 0.25 * prob.alpha() * prob.rm_norm_sq(phi);
    Ok(raw + 2.0 * phi / n * mean)
}

/// Whether both eigenvalue triples are constant to within `tol`, as needed
/// for a non-trivial solution that evolves purely by scaling.
pub fn homothety_admissible(a: [f64; 3], b: [f64; 3], tol: f64) -> Result<bool> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let spread = |v: [f64; 3]| {
        let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = v.iter().copied().fold(f64::INFINITY, f64::min);
        max - min
    };
    Ok(spread(a) <= tol && spread(b) <= tol)
}
