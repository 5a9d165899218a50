//! Curvature algebra in three dimensions.
//!
//! In 3D the Riemann tensor is determined by the Ricci tensor, so in an
//! orthonormal Ricci eigenframe everything reduces to triples: the Ricci
//! eigenvalues `(λ, μ, ν)`, the sectional curvatures of the three coordinate
//! planes, and the eigenvalues of `Rm²_ij = R_iklm R_jpqr g^kp g^lq g^mr`.
//! The module also solves the fixed-point equations `-2Rc - (α/2)Rm² = 0`
//! on triples and classifies their solutions.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::ode::{integrate_adaptive, IntegratorOptions, Trajectory};
use crate::roots::{newton_multistart, NonlinearSystem};

/// Principal Ricci curvatures of a 3-manifold at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicciEigenvalues {
    pub lambda: f64,
    pub mu: f64,
    pub nu: f64,
}

impl RicciEigenvalues {
    pub fn new(lambda: f64, mu: f64, nu: f64) -> Self {
        Self { lambda, mu, nu }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.lambda, self.mu, self.nu]
    }

    /// The same multiset in ascending order.
    pub fn canonical(self) -> Self {
        let mut a = self.to_array();
        a.sort_by(f64::total_cmp);
        Self::from_array(a)
    }

    pub fn scalar(self) -> f64 {
        self.lambda + self.mu + self.nu
    }

    /// `|Rc|²`, the sum of squared eigenvalues.
    pub fn norm_sq(self) -> f64 {
        self.lambda * self.lambda + self.mu * self.mu + self.nu * self.nu
    }

    pub fn is_finite(self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }
}

/// Sectional curvatures of the planes spanned by pairs of eigenframe vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionalTriple {
    pub k23: f64,
    pub k13: f64,
    pub k12: f64,
}

impl SectionalTriple {
    pub fn new(k23: f64, k13: f64, k12: f64) -> Self {
        Self { k23, k13, k12 }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.k23, self.k13, self.k12]
    }

    /// Sectional curvature of the plane spanned by `e_i` and `e_j`, `i != j`.
    pub fn plane(self, i: usize, j: usize) -> f64 {
        match (i.min(j), i.max(j)) {
            (0, 1) => self.k12,
            (0, 2) => self.k13,
            (1, 2) => self.k23,
            _ => 0.0,
        }
    }
}

/// Fixed points of the flow on 3-manifolds, up to scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FixedPointClass {
    FlatR3,
    HyperbolicH3,
    ProductH2xR,
    /// Ricci eigenvalues `(-4, -2, -2)/α` for `α > 0`; no locally homogeneous
    /// metric has them.
    NonLocallyHomogeneous,
    SphereS3,
    ProductS2xR,
    /// Ricci eigenvalues `(4, 2, 2)/|α|` for `α < 0`. These are realized by
    /// left-invariant metrics on SU(2), unlike their `α > 0` counterpart.
    AnisotropicHomogeneous,
}

impl FixedPointClass {
    pub fn name(self) -> &'static str {
        match self {
            Self::FlatR3 => "Flat_R3",
            Self::HyperbolicH3 => "Hyperbolic_H3",
            Self::ProductH2xR => "Product_H2xR",
            Self::NonLocallyHomogeneous => "NonLocallyHomogeneous",
            Self::SphereS3 => "Sphere_S3",
            Self::ProductS2xR => "Product_S2xR",
            Self::AnisotropicHomogeneous => "AnisotropicHomogeneous",
        }
    }

    /// Ascending Ricci eigenvalues of this family at `alpha`, or `None` when
    /// the family does not occur for that sign of `alpha`.
    pub fn ricci(self, alpha: f64) -> Option<RicciEigenvalues> {
        let a = 1.0 / alpha;
        let triple = match (self, alpha > 0.0) {
            (Self::FlatR3, _) => [0.0, 0.0, 0.0],
            (Self::HyperbolicH3, true) | (Self::SphereS3, false) => [-4.0 * a, -4.0 * a, -4.0 * a],
            (Self::ProductH2xR, true) => [-2.0 * a, -2.0 * a, 0.0],
            (Self::ProductS2xR, false) => [0.0, -2.0 * a, -2.0 * a],
            (Self::NonLocallyHomogeneous, true) => [-4.0 * a, -2.0 * a, -2.0 * a],
            (Self::AnisotropicHomogeneous, false) => [-2.0 * a, -2.0 * a, -4.0 * a],
            _ => return None,
        };
        Some(RicciEigenvalues::from_array(triple))
    }
}

const ALL_CLASSES: [FixedPointClass; 7] = [
    FixedPointClass::FlatR3,
    FixedPointClass::HyperbolicH3,
    FixedPointClass::ProductH2xR,
    FixedPointClass::NonLocallyHomogeneous,
    FixedPointClass::SphereS3,
    FixedPointClass::ProductS2xR,
    FixedPointClass::AnisotropicHomogeneous,
];

/// Coupling constant and dimension of the flow `∂g/∂t = -2Rc - (α/2)Rm²`.
///
/// `alpha = 0` is the Ricci flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowParams {
    pub alpha: f64,
    pub n: usize,
}

impl FlowParams {
    pub fn new(alpha: f64, n: usize) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("alpha must be finite, got {alpha}")));
        }
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "dimension must be at least 2, got {n}"
            )));
        }
        Ok(Self { alpha, n })
    }
}

pub fn sectional_from_ricci(r: RicciEigenvalues) -> SectionalTriple {
    let RicciEigenvalues { lambda, mu, nu } = r;
    SectionalTriple {
        k23: 0.5 * (mu + nu - lambda),
        k13: 0.5 * (lambda + nu - mu),
        k12: 0.5 * (lambda + mu - nu),
    }
}

pub fn ricci_from_sectional(s: SectionalTriple) -> RicciEigenvalues {
    RicciEigenvalues {
        lambda: s.k12 + s.k13,
        mu: s.k12 + s.k23,
        nu: s.k13 + s.k23,
    }
}

/// Eigenvalues of `Rm²` in the Ricci eigenframe:
/// `2(-a_i² + R a_i + |Rc|² - R²/2)`.
pub fn rm2_eigen_from_ricci(r: RicciEigenvalues) -> [f64; 3] {
    let scalar = r.scalar();
    let norm_sq = r.norm_sq();
    r.to_array()
        .map(|a| 2.0 * (-a * a + scalar * a + norm_sq - 0.5 * scalar * scalar))
}

/// A covariant 4-tensor on a 3-dimensional space, indexed `R[i][j][k][l]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannTensor(pub [[[[f64; 3]; 3]; 3]; 3]);

impl RiemannTensor {
    /// Riemann tensor whose only independent components are
    /// `R_ijij = plane(i, j)`, with all algebraic symmetries imposed.
    pub fn from_planes(plane: impl Fn(usize, usize) -> f64) -> Self {
        let mut r = [[[[0.0; 3]; 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    let k = plane(i, j);
                    r[i][j][i][j] = k;
                    r[i][j][j][i] = -k;
                }
            }
        }
        Self(r)
    }

    /// Orthonormal-frame tensor with the given sectional curvatures.
    pub fn from_sectional(s: SectionalTriple) -> Self {
        Self::from_planes(|i, j| s.plane(i, j))
    }

    /// `Ric_ij = g^kl R_ikjl` for a diagonal metric with entries `g`.
    pub fn ricci(&self, g: [f64; 3]) -> [[f64; 3]; 3] {
        let r = &self.0;
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = (0..3).map(|k| r[i][k][j][k] / g[k]).sum();
            }
        }
        out
    }

    /// `Rm²_ij = R_iklm R_jpqr g^kp g^lq g^mr` for a diagonal metric `g`.
    pub fn rm2(&self, g: [f64; 3]) -> [[f64; 3]; 3] {
        let r = &self.0;
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = 0.0;
                for k in 0..3 {
                    for l in 0..3 {
                        for m in 0..3 {
                            acc += r[i][k][l][m] * r[j][k][l][m] / (g[k] * g[l] * g[m]);
                        }
                    }
                }
                out[i][j] = acc;
            }
        }
        out
    }
}

/// `Rm²` eigenvalues by literal contraction of the full Riemann tensor built
/// from `s` in an orthonormal frame.
///
/// # Panics
///
/// If an off-diagonal entry of the contraction exceeds `1e-14` relative to
/// the diagonal, which would mean the tensor construction is broken.
pub fn rm2_brute_force(s: SectionalTriple) -> [f64; 3] {
    let rm2 = RiemannTensor::from_sectional(s).rm2([1.0; 3]);
    let scale = (0..3).map(|i| rm2[i][i].abs()).fold(1.0, f64::max);
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                assert!(
                    rm2[i][j].abs() <= 1e-14 * scale,
                    "Rm² has off-diagonal entry {} at ({i}, {j})",
                    rm2[i][j]
                );
            }
        }
    }
    [rm2[0][0], rm2[1][1], rm2[2][2]]
}

/// The three fixed-point equations `-2a_i - (α/2)Rm²_i = 0` written out:
/// `-2a_i + (α/2)R² - α a_i R - α|Rc|² + α a_i²`.
pub fn fixed_point_residual(r: RicciEigenvalues, alpha: f64) -> [f64; 3] {
    let scalar = r.scalar();
    let norm_sq = r.norm_sq();
    r.to_array()
        .map(|a| -2.0 * a + 0.5 * alpha * scalar * scalar - alpha * a * scalar - alpha * norm_sq + alpha * a * a)
}

struct FixedPointSystem {
    alpha: f64,
}

impl NonlinearSystem for FixedPointSystem {
    fn dim(&self) -> usize {
        3
    }

    fn residual(&self, x: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&fixed_point_residual(
            RicciEigenvalues::new(x[0], x[1], x[2]),
            self.alpha,
        ));
    }

    fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let alpha = self.alpha;
        let scalar: f64 = x.iter().sum();
        DMatrix::from_fn(3, 3, |i, j| {
            let diag = if i == j {
                -2.0 + 2.0 * alpha * x[i] - alpha * scalar
            } else {
                0.0
            };
            diag + alpha * scalar - alpha * x[i] - 2.0 * alpha * x[j]
        })
    }
}

/// One fixed-point family found by [`solve_fixed_points`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint {
    /// Ascending representative of the family.
    pub ricci: RicciEigenvalues,
    pub class: FixedPointClass,
    pub residual_norm: f64,
    /// Number of distinct orderings of the triple that were found as roots.
    pub orderings: usize,
}

/// Matches a root to a known family within `1e-6/|α|`.
pub fn classify_fixed_point(r: RicciEigenvalues, alpha: f64) -> Result<FixedPointClass> {
    let sorted = r.canonical().to_array();
    let tol = 1e-6 / alpha.abs();
    ALL_CLASSES
        .iter()
        .copied()
        .find(|class| {
            class.ricci(alpha).is_some_and(|reference| {
                let reference = reference.canonical().to_array();
                sorted.iter().zip(&reference).all(|(a, b)| (a - b).abs() <= tol)
            })
        })
        .ok_or(Error::UnclassifiedFixedPoint(r.to_array()))
}

/// Default seeds per axis for [`solve_fixed_points`].
pub const DEFAULT_SEED_GRID: usize = 17;

/// Solves the fixed-point equations by Newton iteration from a
/// `17 x 17 x 17` grid of seeds spanning `[-8/|α|, 8/|α|]³`.
pub fn solve_fixed_points(alpha: f64) -> Result<Vec<FixedPoint>> {
    solve_fixed_points_with_grid(alpha, DEFAULT_SEED_GRID)
}

/// [`solve_fixed_points`] with `per_axis` seeds along each axis.
///
/// Roots are merged into families by their sorted eigenvalues; the result is
/// in ascending lexicographic order of the representatives.
pub fn solve_fixed_points_with_grid(alpha: f64, per_axis: usize) -> Result<Vec<FixedPoint>> {
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "fixed points need a finite nonzero alpha, got {alpha}"
        )));
    }
    if per_axis < 2 {
        return Err(Error::InvalidParameter(format!(
            "seed grid needs at least 2 points per axis, got {per_axis}"
        )));
    }
    let extent = 8.0 / alpha.abs();
    let axis: Vec<f64> = (0..per_axis)
        .map(|k| -extent + 2.0 * extent * k as f64 / (per_axis - 1) as f64)
        .collect();
    let mut seeds = Vec::with_capacity(per_axis.pow(3));
    for &x in &axis {
        for &y in &axis {
            for &z in &axis {
                seeds.push(vec![x, y, z]);
            }
        }
    }
    // The residual scales like 1/α under (r, α) -> (r/c, cα).
    let tol = 1e-11 * (1.0 / alpha.abs()).max(1.0);
    let roots = newton_multistart(&FixedPointSystem { alpha }, &seeds, tol)?;

    let mut families: Vec<FixedPoint> = Vec::new();
    for root in roots {
        let r = RicciEigenvalues::new(root[0], root[1], root[2]);
        let class = classify_fixed_point(r, alpha)?;
        let residual_norm = fixed_point_residual(r, alpha).iter().map(|v| v * v).sum::<f64>().sqrt();
        match families.iter_mut().find(|f| f.class == class) {
            Some(f) => {
                f.orderings += 1;
                f.residual_norm = f.residual_norm.max(residual_norm);
            }
            None => families.push(FixedPoint {
                ricci: class.ricci(alpha).expect("classified for this alpha").canonical(),
                class,
                residual_norm,
                orderings: 1,
            }),
        }
    }
    families.sort_by(|a, b| {
        a.ricci
            .to_array()
            .iter()
            .zip(b.ricci.to_array().iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(families)
}

/// Whether some locally homogeneous 3-manifold has principal Ricci
/// curvatures `r`. At least one of the following must hold:
///
/// 1. all are equal, or two are equal and the last is zero;
/// 2. `λμν > 0`, or at least two of them are zero;
/// 3. all are non-positive, at most one is zero, and for some ordering
///    `2λ < μ + ν` and `λ(μ + ν) <= μ² + ν²`.
///
/// Equalities and zero tests use a tolerance of `1e-9` relative to the
/// largest magnitude.
pub fn kn_local_homogeneity(r: RicciEigenvalues) -> bool {
    let a = r.to_array();
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return true;
    }
    let tol = 1e-9 * scale;
    let zero = |x: f64| x.abs() <= tol;
    let equal = |x: f64, y: f64| (x - y).abs() <= tol;
    const ORDERINGS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

    let all_equal = equal(a[0], a[1]) && equal(a[1], a[2]);
    let two_equal_last_zero = ORDERINGS.iter().any(|p| equal(a[p[0]], a[p[1]]) && zero(a[p[2]]));
    if all_equal || two_equal_last_zero {
        return true;
    }

    let zeros = a.iter().filter(|v| zero(**v)).count();
    if zeros >= 2 || (zeros == 0 && a[0] * a[1] * a[2] > 0.0) {
        return true;
    }

    let non_positive = a.iter().all(|v| *v <= tol);
    non_positive
        && zeros <= 1
        && ORDERINGS.iter().any(|p| {
            let (l, m, n) = (a[p[0]], a[p[1]], a[p[2]]);
            2.0 * l < m + n - tol && l * (m + n) <= m * m + n * n + tol * scale
        })
}

/// Strict parabolicity condition `1 + α k > 0` on every sectional curvature.
pub fn check_parabolicity(s: SectionalTriple, alpha: f64) -> bool {
    s.to_array().iter().all(|k| 1.0 + alpha * k > 0.0)
}

/// Right side of the flow for a diagonal metric `g` in a fixed eigenframe
/// whose curvature is `RiemannTensor::from_planes(|i, j| k_ij sqrt(g_i g_j))`.
///
/// For `g = (1, 1, 1)` the sectional curvatures are `s`; a uniform scaling
/// `g = φ(1, 1, 1)` divides them by `φ`, as for a homothety. The update is
/// `g_i' = -2 Ric_ii - (α/2) Rm²_ii` with both tensors contracted literally.
pub fn eigenframe_rhs(s: SectionalTriple, alpha: f64, g: [f64; 3]) -> [f64; 3] {
    let riemann = RiemannTensor::from_planes(|i, j| s.plane(i, j) * (g[i] * g[j]).sqrt());
    let ric = riemann.ricci(g);
    let rm2 = riemann.rm2(g);
    [0, 1, 2].map(|i| -2.0 * ric[i][i] - 0.5 * alpha * rm2[i][i])
}

/// Integrates [`eigenframe_rhs`] from `g = (1, 1, 1)` over `[0, t_end]`.
pub fn evolve_eigenframe(r: RicciEigenvalues, alpha: f64, t_end: f64, opts: &IntegratorOptions) -> Result<Trajectory> {
    let s = sectional_from_ricci(r);
    integrate_adaptive(
        |_, g: &[f64], dg: &mut [f64]| {
            if g.iter().any(|v| *v <= 0.0) {
                dg.fill(f64::NAN);
                return;
            }
            dg.copy_from_slice(&eigenframe_rhs(s, alpha, [g[0], g[1], g[2]]));
        },
        &[1.0; 3],
        0.0,
        t_end,
        opts,
    )
}

/// Largest deviation `max |g_i(t) - 1|` along [`evolve_eigenframe`].
pub fn eigenframe_drift(r: RicciEigenvalues, alpha: f64, t_end: f64, opts: &IntegratorOptions) -> Result<f64> {
    let traj = evolve_eigenframe(r, alpha, t_end, opts)?;
    Ok(traj
        .states
        .iter()
        .flat_map(|g| g.iter().map(|v| (v - 1.0).abs()))
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: [f64; 3], b: [f64; 3], tol: f64) -> bool {
        a.iter()
            .zip(&b)
            .all(|(x, y)| (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0))
    }

    #[test]
    fn sectional_examples() {
        let s = sectional_from_ricci(RicciEigenvalues::new(2.0, 2.0, 2.0));
        assert_eq!(s.to_array(), [1.0, 1.0, 1.0]);
        let s = sectional_from_ricci(RicciEigenvalues::new(-4.0, -2.0, -2.0));
        assert_eq!(s.to_array(), [0.0, -2.0, -2.0]);
        assert_eq!(
            sectional_from_ricci(RicciEigenvalues::new(0.0, 0.0, 0.0)).to_array(),
            [0.0; 3]
        );
        let r = ricci_from_sectional(SectionalTriple::new(0.0, -2.0, -2.0));
        assert_eq!(r.to_array(), [-4.0, -2.0, -2.0]);
    }

    #[test]
    fn rm2_examples() {
        assert_eq!(rm2_eigen_from_ricci(RicciEigenvalues::new(0.0, 0.0, 0.0)), [0.0; 3]);
        assert_eq!(rm2_eigen_from_ricci(RicciEigenvalues::new(2.0, 2.0, 2.0)), [4.0; 3]);
        assert_eq!(rm2_brute_force(SectionalTriple::new(1.0, 1.0, 1.0)), [4.0; 3]);
        let nil = RicciEigenvalues::new(0.5, -0.5, -0.5);
        assert!(close(rm2_eigen_from_ricci(nil), [0.25, 1.25, 1.25], 1e-15));
        assert!(close(
            rm2_brute_force(sectional_from_ricci(nil)),
            [0.25, 1.25, 1.25],
            1e-15
        ));
    }

    #[test]
    fn ricci_contraction_recovers_eigenvalues() {
        let r = RicciEigenvalues::new(0.3, -1.7, 2.2);
        let ric = RiemannTensor::from_sectional(sectional_from_ricci(r)).ricci([1.0; 3]);
        assert!(close([ric[0][0], ric[1][1], ric[2][2]], r.to_array(), 1e-15));
        assert_eq!(ric[0][1], 0.0);
    }

    #[test]
    fn fixed_point_residual_vanishes_on_families() {
        for alpha in [1.0, 0.3, -1.0, -2.5] {
            for class in ALL_CLASSES {
                if let Some(r) = class.ricci(alpha) {
                    let res = fixed_point_residual(r, alpha);
                    assert!(
                        res.iter().all(|v| v.abs() < 1e-12 / alpha.abs().min(1.0)),
                        "{class:?} {res:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn four_families_at_alpha_one() {
        let fps = solve_fixed_points(1.0).unwrap();
        let classes: Vec<_> = fps.iter().map(|f| f.class).collect();
        assert_eq!(
            classes,
            vec![
                FixedPointClass::HyperbolicH3,
                FixedPointClass::NonLocallyHomogeneous,
                FixedPointClass::ProductH2xR,
                FixedPointClass::FlatR3
            ]
        );
        assert_eq!(fps.iter().map(|f| f.orderings).sum::<usize>(), 8);
        assert!(fps.iter().all(|f| f.residual_norm <= 1e-10));
    }

    #[test]
    fn negative_alpha_gives_spheres() {
        let fps = solve_fixed_points(-1.0).unwrap();
        let s3 = fps.iter().find(|f| f.class == FixedPointClass::SphereS3).unwrap();
        assert_eq!(s3.ricci.to_array(), [4.0; 3]);
        assert!(fps.iter().any(|f| f.class == FixedPointClass::ProductS2xR));
        assert_eq!(fps.len(), 4);
    }

    #[test]
    fn scaling_covariance() {
        let base = solve_fixed_points(1.0).unwrap();
        for c in [2.0, 10.0] {
            let scaled = solve_fixed_points(c).unwrap();
            assert_eq!(base.len(), scaled.len());
            for (a, b) in base.iter().zip(&scaled) {
                assert_eq!(a.class, b.class);
                let a = a.ricci.to_array().map(|v| v / c);
                assert!(close(a, b.ricci.to_array(), 1e-8));
            }
        }
    }

    #[test]
    fn zero_alpha_is_rejected() {
        assert!(solve_fixed_points(0.0).is_err());
        assert!(solve_fixed_points_with_grid(1.0, 1).is_err());
    }

    #[test]
    fn unknown_roots_are_not_classified() {
        let err = classify_fixed_point(RicciEigenvalues::new(1.0, 2.0, 3.0), 1.0);
        assert!(matches!(err, Err(Error::UnclassifiedFixedPoint(_))));
    }

    #[test]
    fn local_homogeneity_examples() {
        assert!(kn_local_homogeneity(RicciEigenvalues::new(0.0, 0.0, 0.0)));
        assert!(!kn_local_homogeneity(RicciEigenvalues::new(-4.0, -2.0, -2.0)));
        assert!(kn_local_homogeneity(RicciEigenvalues::new(-2.0, -2.0, 0.0)));
        assert!(kn_local_homogeneity(RicciEigenvalues::new(-4.0, -4.0, -4.0)));
        // Nil and Sol.
        assert!(kn_local_homogeneity(RicciEigenvalues::new(0.5, -0.5, -0.5)));
        assert!(kn_local_homogeneity(RicciEigenvalues::new(0.0, 0.0, -2.0)));
        assert!(kn_local_homogeneity(RicciEigenvalues::new(4.0, 2.0, 2.0)));
    }

    #[test]
    fn parabolicity_examples() {
        assert!(check_parabolicity(SectionalTriple::new(0.0, 0.0, 0.0), 1.0));
        assert!(!check_parabolicity(SectionalTriple::new(-2.0, -2.0, -2.0), 1.0));
        for alpha in [0.1, 1.0, 7.0] {
            let h3 = sectional_from_ricci(FixedPointClass::HyperbolicH3.ricci(alpha).unwrap());
            assert!(!check_parabolicity(h3, alpha));
        }
        let fps = solve_fixed_points(1.0).unwrap();
        let passing: Vec<_> = fps
            .iter()
            .filter(|f| check_parabolicity(sectional_from_ricci(f.ricci), 1.0))
            .map(|f| f.class)
            .collect();
        assert_eq!(passing, vec![FixedPointClass::FlatR3]);
    }

    #[test]
    fn eigenframe_flow_is_stationary_at_fixed_points() {
        let opts = IntegratorOptions::default();
        for alpha in [1.0, -1.0] {
            for f in solve_fixed_points(alpha).unwrap() {
                let drift = eigenframe_drift(f.ricci, alpha, 1.0, &opts).unwrap();
                assert!(drift < 1e-12, "{:?}: {drift}", f.class);
            }
        }
    }

    #[test]
    fn eigenframe_flow_scales_round_sphere() {
        // Unit sphere: Rc = 2, Rm² = 4, so g' = -4 - 2α at g = 1.
        let s = SectionalTriple::new(1.0, 1.0, 1.0);
        assert!(close(eigenframe_rhs(s, 1.0, [1.0; 3]), [-6.0; 3], 1e-15));
        // g = φ: sectional 1/φ gives g' = -4 - 2α/φ.
        assert!(close(eigenframe_rhs(s, 1.0, [0.5; 3]), [-8.0; 3], 1e-14));
    }

    #[test]
    fn ten_thousand_random_triples_match_oracle() {
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..10_000 {
            let r = RicciEigenvalues::new(
                rng.random_range(-5.0..5.0),
                rng.random_range(-5.0..5.0),
                rng.random_range(-5.0..5.0),
            );
            let a = rm2_eigen_from_ricci(r);
            let b = rm2_brute_force(sectional_from_ricci(r));
            assert!(close(a, b, 1e-12), "{r:?}: {a:?} vs {b:?}");
        }
    }

    proptest! {
        #[test]
        fn sectional_map_round_trips(l in -10.0f64..10.0, m in -10.0f64..10.0, n in -10.0f64..10.0) {
            let r = RicciEigenvalues::new(l, m, n);
            let back = ricci_from_sectional(sectional_from_ricci(r));
            prop_assert!(close(back.to_array(), r.to_array(), 1e-14));
        }

        #[test]
        fn rm2_formula_matches_contraction(l in -5.0f64..5.0, m in -5.0f64..5.0, n in -5.0f64..5.0) {
            let r = RicciEigenvalues::new(l, m, n);
            prop_assert!(close(rm2_eigen_from_ricci(r), rm2_brute_force(sectional_from_ricci(r)), 1e-12));
        }

        #[test]
        fn rm2_is_nonnegative(l in -5.0f64..5.0, m in -5.0f64..5.0, n in -5.0f64..5.0) {
            let b = rm2_eigen_from_ricci(RicciEigenvalues::new(l, m, n));
            prop_assert!(b.iter().all(|v| *v >= -1e-12));
        }

        #[test]
        fn homogeneity_is_permutation_invariant(l in -5.0f64..5.0, m in -5.0f64..5.0, n in -5.0f64..5.0) {
            let a = kn_local_homogeneity(RicciEigenvalues::new(l, m, n));
            prop_assert_eq!(a, kn_local_homogeneity(RicciEigenvalues::new(n, l, m)));
            prop_assert_eq!(a, kn_local_homogeneity(RicciEigenvalues::new(m, l, n)));
        }
    }
}
