//! Flows of diagonal left-invariant metrics on 3-dimensional geometries.
//!
//! A unimodular Lie group has a Milnor frame `X_i` with
//! `[X_2, X_3] = c_1 X_1` (and cyclically). For the metric
//! `g = A θ1² + B θ2² + C θ3²` the orthonormal frame has structure constants
//! `λ_i = c_i g_i / sqrt(ABC)` and, with `μ_i = (λ_1 + λ_2 + λ_3)/2 - λ_i`,
//! principal Ricci curvatures `(2μ_2μ_3, 2μ_1μ_3, 2μ_1μ_2)`. The flow keeps
//! the metric diagonal and evolves `g_i' = (-2a_i - (α/2)b_i) g_i`, where
//! `a` and `b` are the Ricci and `Rm²` eigenvalues.
//!
//! `H3` and `H2xR` are not unimodular; their diagonal metrics are the
//! scalings `A g_H3` and `A g_H2 + C dz²`, with Ricci eigenvalues `-2/A` and
//! `(-1/A, -1/A, 0)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::curvature3d::{rm2_eigen_from_ricci, RicciEigenvalues};
use crate::error::{Error, Result};
use crate::ode::{integrate_scale_flow, IntegratorOptions, Termination, Trajectory};

/// Coefficient at which a direction is considered collapsed.
pub const COLLAPSE_THRESHOLD: f64 = 1e-8;

/// Default horizon for immortality classification.
pub const DEFAULT_HORIZON: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeometryFamily {
    SU2,
    SL2R,
    Sol,
    Nil,
    Euclidean,
    H3,
    H2xR,
}

impl GeometryFamily {
    pub const ALL: [GeometryFamily; 7] = [
        Self::SU2,
        Self::SL2R,
        Self::Sol,
        Self::Nil,
        Self::Euclidean,
        Self::H3,
        Self::H2xR,
    ];

    /// Normalized Milnor structure constants, `None` for `H3` and `H2xR`.
    pub fn structure_constants(self) -> Option<[f64; 3]> {
        match self {
            Self::SU2 => Some([2.0, 2.0, 2.0]),
            Self::SL2R => Some([2.0, 2.0, -2.0]),
            Self::Sol => Some([1.0, -1.0, 0.0]),
            Self::Nil => Some([1.0, 0.0, 0.0]),
            Self::Euclidean => Some([0.0, 0.0, 0.0]),
            Self::H3 | Self::H2xR => None,
        }
    }

    /// Indices of the two directions that share a coefficient in the
    /// symmetric reduction; the remaining index is the distinguished one.
    pub fn symmetric_pair(self) -> Option<[usize; 2]> {
        match self {
            Self::SU2 | Self::Nil | Self::Euclidean => Some([1, 2]),
            Self::Sol | Self::SL2R | Self::H2xR => Some([0, 1]),
            Self::H3 => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::SU2 => "su2",
            Self::SL2R => "sl2r",
            Self::Sol => "sol",
            Self::Nil => "nil",
            Self::Euclidean => "euclidean",
            Self::H3 => "h3",
            Self::H2xR => "h2xr",
        }
    }
}

impl fmt::Display for GeometryFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeometryFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|f| f.name() == lower)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown geometry family '{s}'")))
    }
}

/// A diagonal metric `(A, B, C)` on one of the model geometries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MilnorGeometry {
    pub family: GeometryFamily,
    pub c: [f64; 3],
    pub metric: [f64; 3],
}

impl MilnorGeometry {
    /// Geometry with the family's normalized structure constants.
    ///
    /// `H3` requires `A = B = C` and `H2xR` requires `A = B`.
    pub fn new(family: GeometryFamily, metric: [f64; 3]) -> Result<Self> {
        if metric.iter().any(|g| !(*g > 0.0 && g.is_finite())) {
            return Err(Error::InvalidParameter(format!(
                "metric coefficients must be positive, got {metric:?}"
            )));
        }
        let same = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.max(b);
        match family {
            GeometryFamily::H3 if !(same(metric[0], metric[1]) && same(metric[1], metric[2])) => {
                return Err(Error::InvalidParameter(format!("H3 needs A = B = C, got {metric:?}")));
            }
            GeometryFamily::H2xR if !same(metric[0], metric[1]) => {
                return Err(Error::InvalidParameter(format!("H2xR needs A = B, got {metric:?}")));
            }
            _ => {}
        }
        Ok(Self {
            family,
            c: family.structure_constants().unwrap_or([0.0; 3]),
            metric,
        })
    }

    /// Geometry with explicit structure constants, which must have the sign
    /// pattern of a unimodular family up to a cyclic relabelling.
    pub fn with_constants(family: GeometryFamily, c: [f64; 3], metric: [f64; 3]) -> Result<Self> {
        let reference = family
            .structure_constants()
            .ok_or_else(|| Error::InvalidParameter(format!("{family} is not described by structure constants")))?;
        let signs = |v: [f64; 3]| {
            v.map(|x| {
                if x > 0.0 {
                    1
                } else if x < 0.0 {
                    -1
                } else {
                    0
                }
            })
        };
        let target = signs(reference);
        let mut got = signs(c);
        let matches = (0..3).any(|_| {
            got.rotate_left(1);
            got == target
        });
        if !matches {
            return Err(Error::InvalidParameter(format!(
                "structure constants {c:?} do not have the sign pattern of {family}"
            )));
        }
        let mut geom = Self::new(family, metric)?;
        geom.c = c;
        Ok(geom)
    }
}

/// Principal Ricci curvatures of the diagonal metric `g` with Milnor
/// structure constants `c`, in the orthonormalized frame.
pub fn frame_ricci(c: [f64; 3], g: [f64; 3]) -> [f64; 3] {
    let volume = (g[0] * g[1] * g[2]).sqrt();
    let lambda = [0, 1, 2].map(|i| c[i] * g[i] / volume);
    let half = 0.5 * (lambda[0] + lambda[1] + lambda[2]);
    let mu = lambda.map(|l| half - l);
    [2.0 * mu[1] * mu[2], 2.0 * mu[0] * mu[2], 2.0 * mu[0] * mu[1]]
}

pub fn milnor_ricci(geom: &MilnorGeometry) -> RicciEigenvalues {
    let a = geom.metric[0];
    RicciEigenvalues::from_array(match geom.family {
        GeometryFamily::H3 => [-2.0 / a; 3],
        GeometryFamily::H2xR => [-1.0 / a, -1.0 / a, 0.0],
        _ => frame_ricci(geom.c, geom.metric),
    })
}

/// `d ln g_i / dt = -2a_i - (α/2)b_i`.
pub fn log_rates(geom: &MilnorGeometry, alpha: f64) -> [f64; 3] {
    let ricci = milnor_ricci(geom);
    let rm2 = rm2_eigen_from_ricci(ricci);
    let a = ricci.to_array();
    [0, 1, 2].map(|i| -2.0 * a[i] - 0.5 * alpha * rm2[i])
}

/// `(A', B', C')`.
pub fn rg2_rhs_homogeneous(geom: &MilnorGeometry, alpha: f64) -> [f64; 3] {
    let rates = log_rates(geom, alpha);
    [0, 1, 2].map(|i| rates[i] * geom.metric[i])
}

/// Integrates `(A, B, C)` on `[0, t_end]`, stopping with an `"extinction"`
/// event once the smallest coefficient reaches [`COLLAPSE_THRESHOLD`].
pub fn evolve_homogeneous(
    geom: &MilnorGeometry,
    alpha: f64,
    t_end: f64,
    opts: &IntegratorOptions,
) -> Result<Trajectory> {
    if !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!("alpha must be finite, got {alpha}")));
    }
    let family = geom.family;
    let c = geom.c;
    integrate_scale_flow(
        |_, g: &[f64], out: &mut [f64]| {
            let state = MilnorGeometry {
                family,
                c,
                metric: [g[0], g[1], g[2]],
            };
            out.copy_from_slice(&log_rates(&state, alpha));
        },
        &geom.metric,
        0.0,
        t_end,
        opts,
        COLLAPSE_THRESHOLD,
    )
}

/// Long-time behaviour of a homogeneous flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AsymptoticsClass {
    /// A coefficient collapsed at a finite time, or the step size underflowed.
    FiniteTimeShrinker,
    /// Immortal; two directions shrink relative to the third.
    ImmortalCigar,
    /// Immortal; one direction shrinks relative to the other two.
    ImmortalPancake,
    /// No coefficient moved by more than `1e-8` relative.
    Static,
    /// Immortal, moving, but homothetic to within `1e-6` over the final decade.
    Indeterminate,
}

impl AsymptoticsClass {
    pub fn name(self) -> &'static str {
        match self {
            Self::FiniteTimeShrinker => "FiniteTimeShrinker",
            Self::ImmortalCigar => "ImmortalCigar",
            Self::ImmortalPancake => "ImmortalPancake",
            Self::Static => "Static",
            Self::Indeterminate => "Indeterminate",
        }
    }

    pub fn is_immortal(self) -> bool {
        !matches!(self, Self::FiniteTimeShrinker)
    }
}

/// `ln g(t)` by linear interpolation in `t`.
fn log_state_at(traj: &Trajectory, t: f64) -> Vec<f64> {
    let idx = traj.times.partition_point(|s| *s < t);
    let log = |i: usize| traj.states[i].iter().map(|g| g.ln()).collect::<Vec<_>>();
    if idx == 0 {
        return log(0);
    }
    if idx >= traj.len() {
        return log(traj.len() - 1);
    }
    let (t0, t1) = (traj.times[idx - 1], traj.times[idx]);
    let w = (t - t0) / (t1 - t0);
    log(idx - 1)
        .iter()
        .zip(log(idx))
        .map(|(a, b)| a + w * (b - a))
        .collect()
}

/// Classifies a trajectory of `(A, B, C)`.
///
/// Immortal runs are classified by the volume-normalized exponents
/// `p_i - mean(p)` with `p_i = d ln g_i / d ln t` over the final decade
/// `[t_f/10, t_f]`: one negative exponent is a pancake, two a cigar.
pub fn classify_asymptotics(traj: &Trajectory) -> AsymptoticsClass {
    match traj.termination {
        Termination::Event { .. } | Termination::StepSizeUnderflow => return AsymptoticsClass::FiniteTimeShrinker,
        Termination::ReachedHorizon => {}
    }
    let first = &traj.states[0];
    let drift = traj
        .states
        .iter()
        .flat_map(|g| g.iter().zip(first).map(|(a, b)| (a / b - 1.0).abs()))
        .fold(0.0, f64::max);
    if drift < 1e-8 {
        return AsymptoticsClass::Static;
    }

    let t_f = traj.final_time();
    let t_a = traj.times[0] + (t_f - traj.times[0]) / 10.0;
    let late = log_state_at(traj, t_f);
    let early = log_state_at(traj, t_a);
    let decade = (t_f / t_a).ln();
    let p: Vec<f64> = late.iter().zip(&early).map(|(a, b)| (a - b) / decade).collect();
    let mean = p.iter().sum::<f64>() / p.len() as f64;
    let q: Vec<f64> = p.iter().map(|x| x - mean).collect();
    if q.iter().all(|x| x.abs() <= 1e-6) {
        return AsymptoticsClass::Indeterminate;
    }
    match q.iter().filter(|x| **x < -1e-6).count() {
        1 => AsymptoticsClass::ImmortalPancake,
        2 => AsymptoticsClass::ImmortalCigar,
        _ => AsymptoticsClass::Indeterminate,
    }
}

/// A tensor grid of initial data: `x` is the distinguished coefficient, `y`
/// the shared coefficient of the symmetric pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl PhaseGrid {
    /// `nx x ny` points, log-spaced over `[lo, hi]` on both axes.
    pub fn log_spaced(lo: f64, hi: f64, nx: usize, ny: usize) -> Result<Self> {
        if !(lo > 0.0 && hi > lo && hi.is_finite()) || nx < 2 || ny < 2 {
            return Err(Error::InvalidParameter(format!(
                "log grid needs 0 < lo < hi and at least 2 points per axis, got [{lo}, {hi}] with {nx}x{ny}"
            )));
        }
        let axis = |n: usize| {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n)
                .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
                .collect()
        };
        Ok(Self {
            xs: axis(nx),
            ys: axis(ny),
        })
    }

    pub fn len(&self) -> usize {
        self.xs.len() * self.ys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Default for PhaseGrid {
    fn default() -> Self {
        Self::log_spaced(1e-3, 10.0, 40, 40).expect("valid default grid")
    }
}

/// Metric with distinguished coefficient `x` and shared coefficient `y`.
pub fn symmetric_metric(family: GeometryFamily, x: f64, y: f64) -> Result<[f64; 3]> {
    let pair = family
        .symmetric_pair()
        .ok_or_else(|| Error::InvalidParameter(format!("{family} has no two-parameter symmetric reduction")))?;
    let mut metric = [x; 3];
    metric[pair[0]] = y;
    metric[pair[1]] = y;
    Ok(metric)
}

/// Result of [`phase_plane_scan`]; `classes[iy][ix]` belongs to
/// `(grid.xs[ix], grid.ys[iy])`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseScan {
    pub family: GeometryFamily,
    pub alpha: f64,
    pub grid: PhaseGrid,
    pub classes: Vec<Vec<AsymptoticsClass>>,
}

impl PhaseScan {
    /// Cells `(ix, iy)` with a 4-neighbour of a different class.
    pub fn boundary(&self) -> Vec<(usize, usize)> {
        self.boundary_by(|c| c)
    }

    /// Cells with a 4-neighbour of different fate (immortal or not).
    pub fn fate_boundary(&self) -> Vec<(usize, usize)> {
        self.boundary_by(|c| c.is_immortal())
    }

    fn boundary_by<K: PartialEq>(&self, key: impl Fn(AsymptoticsClass) -> K) -> Vec<(usize, usize)> {
        let ny = self.classes.len();
        let nx = self.classes.first().map_or(0, |r| r.len());
        let mut cells = Vec::new();
        for iy in 0..ny {
            for ix in 0..nx {
                let here = key(self.classes[iy][ix]);
                let differs = [(0i64, 1i64), (0, -1), (1, 0), (-1, 0)].iter().any(|(dx, dy)| {
                    let (jx, jy) = (ix as i64 + dx, iy as i64 + dy);
                    jx >= 0
                        && jy >= 0
                        && (jx as usize) < nx
                        && (jy as usize) < ny
                        && key(self.classes[jy as usize][jx as usize]) != here
                });
                if differs {
                    cells.push((ix, iy));
                }
            }
        }
        cells
    }

    pub fn counts(&self) -> BTreeMap<AsymptoticsClass, usize> {
        let mut counts = BTreeMap::new();
        for class in self.classes.iter().flatten() {
            *counts.entry(*class).or_insert(0) += 1;
        }
        counts
    }
}

/// Whether `cells` form a single 8-connected set. The empty set is not.
pub fn is_connected(cells: &[(usize, usize)]) -> bool {
    let Some(&start) = cells.first() else {
        return false;
    };
    let set: std::collections::BTreeSet<(usize, usize)> = cells.iter().copied().collect();
    let mut seen = std::collections::BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some((x, y)) = stack.pop() {
        for dx in -1i64..=1 {
            for dy in -1i64..=1 {
                let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                if nx < 0 || ny < 0 {
                    continue;
                }
                let next = (nx as usize, ny as usize);
                if set.contains(&next) && seen.insert(next) {
                    stack.push(next);
                }
            }
        }
    }
    seen.len() == set.len()
}

/// Classifies the flow from every grid point of the symmetric reduction.
///
/// Cells run in parallel; each is independent, so the output does not depend
/// on scheduling.
pub fn phase_plane_scan(
    family: GeometryFamily,
    alpha: f64,
    grid: &PhaseGrid,
    t_horizon: f64,
    opts: &IntegratorOptions,
) -> Result<PhaseScan> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("phase grid is empty".into()));
    }
    family
        .symmetric_pair()
        .ok_or_else(|| Error::InvalidParameter(format!("{family} has no two-parameter symmetric reduction")))?;
    let cells: Vec<(usize, usize)> = (0..grid.ys.len())
        .flat_map(|iy| (0..grid.xs.len()).map(move |ix| (ix, iy)))
        .collect();
    let flat: Vec<AsymptoticsClass> = cells
        .par_iter()
        .map(|&(ix, iy)| {
            let metric = symmetric_metric(family, grid.xs[ix], grid.ys[iy])?;
            let geom = MilnorGeometry::new(family, metric)?;
            let traj = evolve_homogeneous(&geom, alpha, t_horizon, opts)?;
            Ok(classify_asymptotics(&traj))
        })
        .collect::<Result<_>>()?;
    let classes = flat.chunks(grid.xs.len()).map(|row| row.to_vec()).collect();
    Ok(PhaseScan {
        family,
        alpha,
        grid: grid.clone(),
        classes,
    })
}
