//! Discrete even Minkowski problem.
//!
//! Given weights `α_i` on directions `u_i` spanning R^n, the body with
//! `S_P = Σ α_i (δ_{u_i} + δ_{-u_i})` minimizes
//!
//! ```text
//! J(h) = Σ α_i h_i − (C/n) log V(h),      C = Σ α_i
//! ```
//!
//! over support vectors `h > 0`, where `V(h)` is the volume of the Wulff
//! shape. `J` is convex, `∂V/∂h_i = 2 F_i(h)`, and at the minimizer
//! `F_i = λ α_i`, so a final dilation makes facet areas match exactly.
//! The solver runs damped Newton in `x = log h` and falls back to plain
//! gradient steps when the Newton direction fails the line search.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::convex::{facet_data, wulff_shape, Direction, EvenDiscreteMeasure, FacetData, SymmetricPolytope};
use crate::linalg;
use crate::math::{exp, ln, powf, sqrt};
use crate::{Error, Result};

const ARMIJO: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverPath {
    DampedNewton,
    /// At least one iteration had to fall back to a gradient step.
    ProjectedGradient,
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_iter: usize,
    /// Starting support numbers, one per target direction. Defaults to all ones.
    pub initial: Option<Vec<f64>>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-8,
            max_iter: 10_000,
            initial: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MinkowskiSolution {
    pub body: SymmetricPolytope,
    /// `max_i |F_i − α_i| / α_i` over the target directions.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub path: SolverPath,
}

pub fn solve_even_minkowski(
    target: &EvenDiscreteMeasure,
    tol: f64,
    max_iter: usize,
) -> Result<MinkowskiSolution> {
    solve_even_minkowski_with(
        target,
        &SolverConfig {
            tol,
            max_iter,
            initial: None,
        },
    )
}

struct State {
    h: Vec<f64>,
    data: FacetData,
    volume: f64,
    j: f64,
}

struct Problem<'a> {
    dim: usize,
    normals: Vec<Vec<f64>>,
    alpha: &'a [f64],
    c: f64,
}

impl Problem<'_> {
    fn evaluate(&self, mut h: Vec<f64>) -> Result<State> {
        let s = self.c / linalg::dot(self.alpha, &h);
        h.iter_mut().for_each(|x| *x *= s);
        let data = facet_data(self.dim, &self.normals, &h, true)?;
        let volume = 2.0 * linalg::dot(&h, &data.areas) / self.dim as f64;
        if !(volume > 0.0) {
            return Err(Error::DegenerateBody("iterate has zero volume".into()));
        }
        let j = linalg::dot(self.alpha, &h) - self.c / self.dim as f64 * ln(volume);
        Ok(State { h, data, volume, j })
    }

    fn gradient(&self, st: &State) -> Vec<f64> {
        let k = 2.0 * self.c / (self.dim as f64 * st.volume);
        self.alpha
            .iter()
            .zip(&st.data.areas)
            .map(|(a, f)| a - k * f)
            .collect()
    }

    /// Residual after the dilation that makes total areas match.
    fn residual(&self, st: &State) -> f64 {
        let total: f64 = st.data.areas.iter().sum();
        let scale = self.alpha.iter().sum::<f64>() / total;
        self.alpha
            .iter()
            .zip(&st.data.areas)
            .map(|(a, f)| (f * scale - a).abs() / a)
            .fold(0.0, f64::max)
    }

    /// Hessian of `J` with respect to `x = log h`, row-major.
    fn hessian_log(&self, st: &State, g: &[f64]) -> Vec<f64> {
        let m = self.alpha.len();
        let n = self.dim as f64;
        let v = st.volume;
        let mut dfdh = vec![0.0; m * m];
        for i in 0..m {
            for r in &st.data.ridges[i] {
                let cos = r.sign * linalg::dot(&self.normals[i], &self.normals[r.pair]);
                let sin = sqrt((1.0 - cos * cos).max(0.0));
                if sin < 1e-12 {
                    continue;
                }
                dfdh[i * m + r.pair] += r.volume / sin;
                dfdh[i * m + i] -= r.volume * cos / sin;
            }
        }
        let f = &st.data.areas;
        let mut hx = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                let sym = 0.5 * (dfdh[i * m + j] + dfdh[j * m + i]);
                let hvv = -(self.c / n) * (2.0 * sym / v - 4.0 * f[i] * f[j] / (v * v));
                hx[i * m + j] = st.h[i] * hvv * st.h[j];
            }
            hx[i * m + i] += st.h[i] * g[i];
        }
        hx
    }
}

/// Newton direction in log coordinates with Levenberg damping on failure.
fn newton_direction(hx: &[f64], gx: &[f64]) -> Option<Vec<f64>> {
    let m = gx.len();
    let neg: Vec<f64> = gx.iter().map(|x| -x).collect();
    if let Some(p) = linalg::cholesky_solve(hx, &neg) {
        return Some(p);
    }
    let trace: f64 = (0..m).map(|i| hx[i * m + i].abs()).sum::<f64>() / m as f64;
    let mut mu = 1e-10 * trace.max(1e-300);
    for _ in 0..12 {
        let mut a = hx.to_vec();
        for i in 0..m {
            a[i * m + i] += mu;
        }
        if let Some(p) = linalg::cholesky_solve(&a, &neg) {
            return Some(p);
        }
        mu *= 10.0;
    }
    None
}

pub fn solve_even_minkowski_with(
    target: &EvenDiscreteMeasure,
    config: &SolverConfig,
) -> Result<MinkowskiSolution> {
    let dim = target.dim();
    let rank = target.rank();
    if rank < dim || target.is_empty() {
        return Err(Error::NonSpanning { dim, rank });
    }
    let m = target.len();
    let alpha = target.weights();
    let prob = Problem {
        dim,
        normals: target.directions().iter().map(|d| d.coords().to_vec()).collect(),
        alpha,
        c: alpha.iter().sum(),
    };
    let h0 = match &config.initial {
        Some(h) if h.len() == m && h.iter().all(|x| *x > 0.0 && x.is_finite()) => h.clone(),
        Some(_) => {
            return Err(Error::InvalidInput(
                "initial supports must be positive, one per direction".into(),
            ))
        }
        None => vec![1.0; m],
    };
    let mut st = prob.evaluate(h0)?;
    let mut path = SolverPath::DampedNewton;
    let mut iterations = 0;
    let mut residual = prob.residual(&st);
    while residual > config.tol && iterations < config.max_iter {
        iterations += 1;
        let g = prob.gradient(&st);
        let gx: Vec<f64> = g.iter().zip(&st.h).map(|(a, b)| a * b).collect();
        let gnorm = linalg::norm(&g);
        let hx = prob.hessian_log(&st, &g);
        let newton = newton_direction(&hx, &gx).filter(|p| linalg::dot(p, &gx) < 0.0);
        let mut accepted = None;
        for (is_newton, dir) in [(true, newton), (false, Some(gx.iter().map(|x| -x).collect()))] {
            let Some(p) = dir else { continue };
            if let Some(next) = line_search(&prob, &st, &p, &gx, gnorm) {
                if !is_newton {
                    path = SolverPath::ProjectedGradient;
                }
                accepted = Some(next);
                break;
            }
        }
        match accepted {
            Some(next) => st = next,
            None => break,
        }
        residual = prob.residual(&st);
    }
    let total: f64 = st.data.areas.iter().sum();
    let scale = powf(prob.c / total, 1.0 / (dim as f64 - 1.0).max(1.0));
    let h: Vec<f64> = st.h.iter().map(|x| x * scale).collect();
    let body = wulff_shape(target.directions(), &h)?;
    let residual = final_residual(&body, target);
    let sol = MinkowskiSolution {
        body,
        residual,
        iterations,
        converged: residual <= config.tol,
        path,
    };
    if sol.converged {
        Ok(sol)
    } else {
        Err(Error::NoConvergence(Box::new(sol)))
    }
}

fn line_search(prob: &Problem, st: &State, p: &[f64], gx: &[f64], gnorm: f64) -> Option<State> {
    let slope = linalg::dot(p, gx);
    // largest log-step of 2 keeps trial bodies from collapsing in one go
    let pmax = p.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let mut s = if pmax > 2.0 { 2.0 / pmax } else { 1.0 };
    for _ in 0..MAX_BACKTRACKS {
        let h: Vec<f64> = st.h.iter().zip(p).map(|(h, d)| h * exp(s * d)).collect();
        if let Ok(next) = prob.evaluate(h) {
            let noise = 1e-13 * (st.j.abs() + prob.c);
            if next.j <= st.j + ARMIJO * s * slope {
                return Some(next);
            }
            if (next.j - st.j).abs() <= noise && linalg::norm(&prob.gradient(&next)) <= 0.9 * gnorm {
                return Some(next);
            }
        }
        s *= 0.5;
    }
    None
}

fn final_residual(body: &SymmetricPolytope, target: &EvenDiscreteMeasure) -> f64 {
    target
        .iter()
        .map(|(d, a)| {
            let f = body.normal_index(d).map_or(0.0, |i| body.facet_areas()[i]);
            (f - a).abs() / a
        })
        .fold(0.0, f64::max)
}

/// `J(h)` for support numbers `h` on the target directions.
pub fn objective(target: &EvenDiscreteMeasure, h: &[f64]) -> Result<f64> {
    let v = wulff_shape(target.directions(), h)?.volume();
    let c: f64 = target.weights().iter().sum();
    Ok(linalg::dot(target.weights(), h) - c / target.dim() as f64 * ln(v))
}

/// `∂V/∂h_i = 2 F_i(h)` for the Wulff shape of `(normals, h)`; zero for
/// constraints that carry no facet.
pub fn volume_gradient(normals: &[Direction], h: &[f64]) -> Result<Vec<f64>> {
    let dim = normals
        .first()
        .map(Direction::dim)
        .ok_or_else(|| Error::InvalidInput("no normals".into()))?;
    let raw: Vec<Vec<f64>> = normals.iter().map(|d| d.coords().to_vec()).collect();
    let data = facet_data(dim, &raw, h, false)?;
    Ok(data.areas.into_iter().map(|a| 2.0 * a).collect())
}
