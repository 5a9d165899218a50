//! The rotationally symmetric steady gradient soliton on the plane.
//!
//! For `g = ds² + φ(s)² dθ²` with potential `f' = cφ`, the soliton equation
//! `Rc + (α/4)Rm² = ∇∇f` reduces to
//!
//! ```text
//! φ'' = (φ/α)(1 - sqrt(1 + 2cαv)),   φ' = v,   φ(0) = 0, v(0) = 1,
//! ```
//!
//! with curvature `K = -φ''/φ = (sqrt(1 + 2cαv) - 1)/α`. Both are evaluated
//! in the rationalized forms `K = 2cv/(1 + w)`, `w = sqrt(1 + 2cαv)`, which
//! stay accurate as `α -> 0` and reduce to the Ricci cigar at `α = 0`.
//!
//! Along solutions `φ² + Q(v)` is conserved, where
//! `Q(v) = v/c + (w³ - 1)/(3c²α)`, so the plateau radius is `sqrt(Q(1))`.

use crate::error::{domain, Error, Result};
use crate::ode::{integrate_with_event, Event, IntegratorOptions, Termination};

/// Integration stops once `v = φ'` falls to this value.
pub const PLATEAU_SLOPE: f64 = 1e-10;

/// Samples closer to the tip than this are skipped by [`soliton_residual`].
pub const RESIDUAL_MIN_S: f64 = 1e-3;

/// Soliton constant `c` of `f' = cφ` and coupling `α`; `α = 0` is the
/// Ricci cigar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CigarParams {
    pub c: f64,
    pub alpha: f64,
}

impl CigarParams {
    pub fn new(c: f64, alpha: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "soliton constant c must be positive, got {c}"
            )));
        }
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be non-negative, got {alpha}"
            )));
        }
        Ok(Self { c, alpha })
    }

    fn root(&self, v: f64) -> Result<f64> {
        let radicand = 1.0 + 2.0 * self.c * self.alpha * v;
        if !(radicand > 0.0) {
            return Err(domain("cigar radicand 1 + 2cαv", radicand));
        }
        Ok(radicand.sqrt())
    }
}

/// Samples of the soliton along arclength.
#[derive(Debug, Clone, PartialEq)]
pub struct CigarProfile {
    pub s: Vec<f64>,
    pub phi: Vec<f64>,
    pub v: Vec<f64>,
    pub k: Vec<f64>,
    pub f: Vec<f64>,
    /// Whether integration stopped early because `v` reached [`PLATEAU_SLOPE`].
    pub plateau: bool,
}

impl CigarProfile {
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }
}

/// `(φ', v')` with `v' = -2cφv/(1 + sqrt(1 + 2cαv))`.
pub fn cigar_rhs(phi: f64, v: f64, p: &CigarParams) -> Result<(f64, f64)> {
    let w = p.root(v)?;
    Ok((v, -2.0 * p.c * phi * v / (1.0 + w)))
}

/// `K = (sqrt(1 + 2cαv) - 1)/α`.
pub fn cigar_curvature(v: f64, p: &CigarParams) -> Result<f64> {
    let w = p.root(v)?;
    Ok(2.0 * p.c * v / (1.0 + w))
}

/// `Q(v)` of the first integral `φ² + Q(v) = const`.
pub fn first_integral_q(v: f64, p: &CigarParams) -> Result<f64> {
    let w = p.root(v)?;
    Ok(v / p.c + 2.0 * v * (w * w + w + 1.0) / (3.0 * p.c * (1.0 + w)))
}

/// Limiting radius `lim φ(s) = sqrt(Q(1))`.
pub fn plateau_radius(p: &CigarParams) -> f64 {
    first_integral_q(1.0, p).expect("radicand is positive at v = 1").sqrt()
}

/// Largest `|φ² + Q(v) - Q(1)|` over the profile.
pub fn first_integral_drift(profile: &CigarProfile, p: &CigarParams) -> Result<f64> {
    let q1 = first_integral_q(1.0, p)?;
    let mut worst = 0.0f64;
    for (phi, v) in profile.phi.iter().zip(&profile.v) {
        worst = worst.max((phi * phi + first_integral_q(*v, p)? - q1).abs());
    }
    Ok(worst)
}

/// Integrates from the tip `(φ, v) = (0, 1)` to `s_max`, or until `v` drops
/// to [`PLATEAU_SLOPE`].
pub fn integrate_cigar(p: &CigarParams, s_max: f64, opts: &IntegratorOptions) -> Result<CigarProfile> {
    if !(s_max > 0.0 && s_max.is_finite()) {
        return Err(Error::InvalidParameter(format!("s_max must be positive, got {s_max}")));
    }
    let field = |_: f64, y: &[f64], dy: &mut [f64]| match cigar_rhs(y[0], y[1], p) {
        Ok((dphi, dv)) => {
            dy[0] = dphi;
            dy[1] = dv;
        }
        Err(_) => dy.fill(f64::NAN),
    };
    let plateau = |_: f64, y: &[f64]| y[1] - PLATEAU_SLOPE;
    let traj = integrate_with_event(field, &[0.0, 1.0], 0.0, s_max, opts, Event::new("plateau", &plateau))?;
    if traj.termination == Termination::StepSizeUnderflow {
        return Err(Error::Integration(format!(
            "cigar integration underflowed at s = {}",
            traj.final_time()
        )));
    }

    let s = traj.times.clone();
    let phi = traj.component(0);
    let v = traj.component(1);
    let k = v.iter().map(|v| cigar_curvature(*v, p)).collect::<Result<Vec<_>>>()?;
    let mut f = Vec::with_capacity(s.len());
    f.push(0.0);
    for i in 1..s.len() {
        let step = 0.5 * p.c * (phi[i] + phi[i - 1]) * (s[i] - s[i - 1]);
        f.push(f[i - 1] + step);
    }
    Ok(CigarProfile {
        s,
        phi,
        v,
        k,
        f,
        plateau: traj.event_time("plateau").is_some(),
    })
}

/// Ricci cigar `ψ = sqrt(2/c) tanh(sqrt(c/2) s)` and its curvature
/// `K_ψ = c - c tanh²(sqrt(c/2) s)`.
pub fn ricci_cigar_profile(c: f64, s: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(c > 0.0) {
        return Err(Error::InvalidParameter(format!("c must be positive, got {c}")));
    }
    let rate = (0.5 * c).sqrt();
    let psi = s.iter().map(|s| (rate * s).tanh() / rate).collect();
    let k_psi = s
        .iter()
        .map(|s| {
            let th = (rate * s).tanh();
            c - c * th * th
        })
        .collect();
    Ok((psi, k_psi))
}

/// Ricci cigar as a [`CigarProfile`] with `v = ψ'` and `f' = cψ` integrated
/// exactly, for checking [`soliton_residual`] at `α = 0`.
pub fn ricci_cigar_as_profile(c: f64, s: &[f64]) -> Result<CigarProfile> {
    let (psi, k) = ricci_cigar_profile(c, s)?;
    let rate = (0.5 * c).sqrt();
    let v = s
        .iter()
        .map(|s| {
            let sech = 1.0 / (rate * s).cosh();
            sech * sech
        })
        .collect();
    // ∫ c sqrt(2/c) tanh(rate s) ds = 2 ln cosh(rate s).
    let f = s.iter().map(|s| 2.0 * (rate * s).cosh().ln()).collect();
    Ok(CigarProfile {
        s: s.to_vec(),
        phi: psi,
        v,
        k,
        f,
        plateau: false,
    })
}

/// Rounded-soliton reference for `c < 0`:
/// `ψ = sqrt(2/|c|) tan(sqrt(|c|/2) s)` on `[0, π/sqrt(2|c|))`.
pub fn negative_c_reference(c: f64, s: &[f64]) -> Result<Vec<f64>> {
    if !(c < 0.0) {
        return Err(Error::InvalidParameter(format!("c must be negative, got {c}")));
    }
    let rate = (0.5 * c.abs()).sqrt();
    let pole = std::f64::consts::FRAC_PI_2 / rate;
    s.iter()
        .map(|&s| {
            if s < 0.0 || s >= pole {
                Err(domain("negative_c_reference", s))
            } else {
                Ok((rate * s).tan() / rate)
            }
        })
        .collect()
}

/// Largest residual of the soliton equations over samples with
/// `s >= 1e-3` and `φ > 1e-6`.
///
/// With `φ''/φ = -K` taken from the profile, it checks
/// `-φ''/φ + (α/2)(φ''/φ)² - cφ'` together with the two Hessian components
/// `f'' = K + (α/2)K²` and `(φ'/φ) f' = K + (α/2)K²`, where `f' = cφ`.
pub fn soliton_residual(profile: &CigarProfile, p: &CigarParams) -> f64 {
    let c = p.c;
    let half_alpha = 0.5 * p.alpha;
    let mut worst = 0.0f64;
    for i in 0..profile.len() {
        let (s, phi, v, k) = (profile.s[i], profile.phi[i], profile.v[i], profile.k[i]);
        if s < RESIDUAL_MIN_S || phi <= 1e-6 {
            continue;
        }
        let ratio = -k; // φ''/φ
        let lhs = k + half_alpha * k * k;
        let scalar = -ratio + half_alpha * ratio * ratio - c * v;
        let f_prime = c * phi;
        let f_second = c * v;
        let radial = f_second - lhs;
        let angular = v / phi * f_prime - lhs;
        worst = worst.max(scalar.abs()).max(radial.abs()).max(angular.abs());
    }
    worst
}

/// `max |φ(s) - ψ(s)|` over the profile samples.
pub fn sup_gap_to_ricci(profile: &CigarProfile, c: f64) -> Result<f64> {
    let (psi, _) = ricci_cigar_profile(c, &profile.s)?;
    Ok(profile
        .phi
        .iter()
        .zip(&psi)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(c: f64, alpha: f64) -> CigarParams {
        CigarParams::new(c, alpha).unwrap()
    }

    #[test]
    fn rhs_examples() {
        assert_eq!(cigar_rhs(0.0, 1.0, &params(1.0, 1.0)).unwrap(), (1.0, 0.0));
        assert_eq!(cigar_rhs(1.0, 0.0, &params(1.0, 1.0)).unwrap(), (0.0, 0.0));
        let (dphi, dv) = cigar_rhs(1.0, 1.0, &params(1.0, 1.0)).unwrap();
        assert_eq!(dphi, 1.0);
        assert!((dv - (1.0 - 3f64.sqrt())).abs() < 1e-15);
        assert!(cigar_rhs(1.0, -10.0, &params(1.0, 1.0)).is_err());
    }

    #[test]
    fn curvature_examples() {
        assert_eq!(cigar_curvature(0.0, &params(1.0, 1.0)).unwrap(), 0.0);
        assert!((cigar_curvature(1.0, &params(1.0, 1.0)).unwrap() - (3f64.sqrt() - 1.0)).abs() < 1e-15);
        assert_eq!(cigar_curvature(1.0, &params(1.0, 0.0)).unwrap(), 1.0);
        assert!((cigar_curvature(1.0, &params(1.0, 1e-9)).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn profile_invariants() {
        let p = params(1.0, 1.0);
        let prof = integrate_cigar(&p, 20.0, &IntegratorOptions::default()).unwrap();
        assert_eq!((prof.phi[0], prof.v[0]), (0.0, 1.0));
        assert!(prof.v.windows(2).all(|w| w[1] < w[0]));
        assert!(prof.v.iter().all(|v| *v > 0.0));
        assert!(prof.phi.windows(2).all(|w| w[1] > w[0]));
        assert!(prof.k.windows(2).all(|w| w[1] < w[0]));
        assert!(*prof.v.last().unwrap() < 1e-3);
        let plateau = plateau_radius(&p);
        assert!(prof.phi.iter().all(|phi| *phi <= plateau));
        assert!((prof.phi.last().unwrap() - plateau).abs() < 1e-8);
        assert!(first_integral_drift(&prof, &p).unwrap() < 1e-8);
        assert!(soliton_residual(&prof, &p) <= 1e-8);
    }

    #[test]
    fn ricci_mode_is_tanh() {
        let p = params(2.0, 0.0);
        let prof = integrate_cigar(&p, 10.0, &IntegratorOptions::default()).unwrap();
        for (s, phi) in prof.s.iter().zip(&prof.phi) {
            assert!((phi - s.tanh()).abs() < 1e-8, "s={s}");
        }
        assert!((plateau_radius(&p) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn small_alpha_approaches_ricci_cigar() {
        let p = params(1.0, 1e-3);
        let prof = integrate_cigar(&p, 20.0, &IntegratorOptions::default()).unwrap();
        assert!(sup_gap_to_ricci(&prof, 1.0).unwrap() <= 1e-2);
    }

    #[test]
    fn ricci_cigar_examples() {
        let (psi, k) = ricci_cigar_profile(3.0, &[0.0, 40.0]).unwrap();
        assert_eq!((psi[0], k[0]), (0.0, 3.0));
        assert!((psi[1] - (2.0f64 / 3.0).sqrt()).abs() < 1e-15 && k[1].abs() < 1e-15);
        let s = [0.1, 0.7, 2.0];
        let (psi, _) = ricci_cigar_profile(2.0, &s).unwrap();
        for (a, s) in psi.iter().zip(s) {
            assert!((a - s.tanh()).abs() < 1e-15);
        }
    }

    #[test]
    fn residual_accepts_ricci_cigar_and_rejects_flat() {
        let s: Vec<f64> = (0..400).map(|i| 0.05 * i as f64).collect();
        let ricci = ricci_cigar_as_profile(1.5, &s).unwrap();
        assert!(soliton_residual(&ricci, &params(1.5, 0.0)) <= 1e-10);

        let flat = CigarProfile {
            s: s.clone(),
            phi: s.clone(),
            v: vec![1.0; s.len()],
            k: vec![0.0; s.len()],
            f: s.iter().map(|s| 0.5 * 0.7 * s * s).collect(),
            plateau: false,
        };
        assert!((soliton_residual(&flat, &params(0.7, 1.0)) - 0.7).abs() < 1e-15);
    }

    #[test]
    fn negative_c_reference_examples() {
        let s = [0.0, 0.3, 1.2];
        let psi = negative_c_reference(-2.0, &s).unwrap();
        assert_eq!(psi[0], 0.0);
        for (a, s) in psi.iter().zip(s) {
            assert!((a - s.tan()).abs() < 1e-15);
        }
        let near = negative_c_reference(-2.0, &[std::f64::consts::FRAC_PI_2 - 1e-9]).unwrap();
        assert!(near[0] > 1e8);
        assert!(negative_c_reference(-2.0, &[2.0]).is_err());
        assert!(negative_c_reference(1.0, &[0.0]).is_err());
    }

    #[test]
    fn rejects_bad_params() {
        assert!(CigarParams::new(0.0, 1.0).is_err());
        assert!(CigarParams::new(1.0, -1.0).is_err());
        assert!(integrate_cigar(&params(1.0, 1.0), 0.0, &IntegratorOptions::default()).is_err());
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]

        #[test]
        fn profiles_are_monotone_and_conserve_first_integral(c in 0.2f64..5.0, alpha in 0.0f64..5.0) {
            let p = params(c, alpha);
            let prof = integrate_cigar(&p, 20.0 / c.sqrt(), &IntegratorOptions::default()).unwrap();
            proptest::prop_assert!(prof.v.windows(2).all(|w| w[1] < w[0] && w[1] > 0.0));
            proptest::prop_assert!(prof.phi.windows(2).all(|w| w[1] > w[0]));
            proptest::prop_assert!(*prof.k.last().unwrap() <= 1e-3);
            proptest::prop_assert!(first_integral_drift(&prof, &p).unwrap() < 1e-8);
            proptest::prop_assert!(soliton_residual(&prof, &p) <= 1e-8);
        }
    }
}
