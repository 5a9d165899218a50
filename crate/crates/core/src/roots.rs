//! Multi-start Newton iteration for small nonlinear algebraic systems.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Relative Euclidean distance under which two roots are considered equal.
pub const DEDUP_DISTANCE: f64 = 1e-6;

const MAX_ITERATIONS: usize = 100;

/// A square system `F(x) = 0`.
pub trait NonlinearSystem: Sync {
    fn dim(&self) -> usize;

    fn residual(&self, x: &[f64], out: &mut [f64]);

    /// Jacobian `dF_i/dx_j`. Defaults to central differences with step
    /// `1e-6 * max(1, |x_j|)`.
    fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let n = self.dim();
        let mut jac = DMatrix::zeros(n, n);
        let mut xp = x.to_vec();
        let mut fp = vec![0.0; n];
        let mut fm = vec![0.0; n];
        for j in 0..n {
            let h = 1e-6 * x[j].abs().max(1.0);
            xp[j] = x[j] + h;
            self.residual(&xp, &mut fp);
            xp[j] = x[j] - h;
            self.residual(&xp, &mut fm);
            xp[j] = x[j];
            for i in 0..n {
                jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        jac
    }
}

/// Adapts a residual closure into a [`NonlinearSystem`] with a
/// finite-difference Jacobian.
pub struct FnSystem<F> {
    dim: usize,
    residual: F,
}

impl<F> FnSystem<F>
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    pub fn new(dim: usize, residual: F) -> Self {
        Self { dim, residual }
    }
}

impl<F> NonlinearSystem for FnSystem<F>
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn residual(&self, x: &[f64], out: &mut [f64]) {
        (self.residual)(x, out)
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Damped Newton from a single seed. Returns the root once `|F| <= tol`.
pub fn newton<S: NonlinearSystem + ?Sized>(system: &S, seed: &[f64], tol: f64) -> Option<Vec<f64>> {
    let n = system.dim();
    let mut x = seed.to_vec();
    let mut f = vec![0.0; n];
    let mut f_try = vec![0.0; n];
    system.residual(&x, &mut f);
    let mut f_norm = norm(&f);
    for _ in 0..MAX_ITERATIONS {
        if !f_norm.is_finite() {
            return None;
        }
        if f_norm <= tol {
            return Some(x);
        }
        let jac = system.jacobian(&x);
        let rhs = DVector::from_iterator(n, f.iter().map(|v| -v));
        let step = jac.lu().solve(&rhs)?;
        if step.iter().any(|v| !v.is_finite()) {
            return None;
        }

        let mut damping = 1.0;
        let mut accepted = false;
        while damping >= 1.0 / 1024.0 {
            let x_try: Vec<f64> = x.iter().zip(step.iter()).map(|(xi, si)| xi + damping * si).collect();
            system.residual(&x_try, &mut f_try);
            let n_try = norm(&f_try);
            if n_try < f_norm {
                x = x_try;
                std::mem::swap(&mut f, &mut f_try);
                f_norm = n_try;
                accepted = true;
                break;
            }
            damping *= 0.5;
        }
        if !accepted || norm(&x) > 1e12 {
            return None;
        }
    }
    (f_norm <= tol).then_some(x)
}

fn same_root(a: &[f64], b: &[f64]) -> bool {
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    diff <= DEDUP_DISTANCE * norm(a).max(norm(b)).max(1.0)
}

/// Runs Newton from every seed and returns the distinct converged roots in
/// lexicographic order. An empty result means no seed converged.
pub fn newton_multistart<S: NonlinearSystem>(system: &S, seeds: &[Vec<f64>], tol: f64) -> Result<Vec<Vec<f64>>> {
    if seeds.is_empty() {
        return Err(Error::InvalidParameter(
            "newton_multistart needs at least one seed".into(),
        ));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if let Some(bad) = seeds.iter().find(|s| s.len() != system.dim()) {
        return Err(Error::InvalidParameter(format!(
            "seed {bad:?} does not have dimension {}",
            system.dim()
        )));
    }

    let converged: Vec<Vec<f64>> = seeds.par_iter().filter_map(|seed| newton(system, seed, tol)).collect();

    let mut roots: Vec<Vec<f64>> = Vec::new();
    for root in converged {
        if !roots.iter().any(|r| same_root(r, &root)) {
            roots.push(root);
        }
    }
    roots.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(roots)
}
