//! The two interpolation families between symmetric polytopes `K0`, `K1`:
//!
//! - the log-Blaschke combination `K̃_t`, whose surface area measure is
//!   `α^{1-t} β^t` on the common support (`α = S_{K0}`, `β = S_{K1}`);
//! - the geometric-mean body `K_t`, the Wulff shape of `h_{K0}^{1-t} h_{K1}^t`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::convex::sphere::hemisphere_grid;
use crate::convex::{
    find_direction, hausdorff_distance, wulff_shape, Direction, EvenDiscreteMeasure,
    SymmetricPolytope, DIRECTION_TOL,
};
use crate::math::{exp, ln, powf};
use crate::minkowski::{solve_even_minkowski_with, SolverConfig};
use crate::{Error, Result};

#[derive(Clone, Debug, Default)]
pub struct PathOptions {
    pub solver: SolverConfig,
    /// Restrict to the directions common to both supports instead of
    /// rejecting mismatched pairs.
    pub allow_support_intersection: bool,
}


/// `t ↦ K̃_t` with solved bodies cached per `t`.
///
/// The cache uses interior mutability, so a path is confined to one thread
/// (`!Sync`); build one path per worker when parallelizing.
#[derive(Debug)]
pub struct LogBlaschkePath {
    k0: SymmetricPolytope,
    k1: SymmetricPolytope,
    directions: Vec<Direction>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    exact_match: bool,
    options: PathOptions,
    cache: RefCell<BTreeMap<u64, SymmetricPolytope>>,
}

/// Directions in both supports with both areas, then those unique to each body.
type SupportMatch = (Vec<(Direction, f64, f64)>, Vec<Direction>, Vec<Direction>);

fn match_supports(k0: &SymmetricPolytope, k1: &SymmetricPolytope) -> SupportMatch {
    let mut common = Vec::new();
    let mut only_first = Vec::new();
    let mut used = alloc::vec![false; k1.normals().len()];
    for (u, &a) in k0.normals().iter().zip(k0.facet_areas()) {
        match find_direction(k1.normals(), u, DIRECTION_TOL) {
            Some(j) => {
                used[j] = true;
                common.push((u.clone(), a, k1.facet_areas()[j]));
            }
            None => only_first.push(u.clone()),
        }
    }
    let only_second = k1
        .normals()
        .iter()
        .zip(&used)
        .filter(|(_, u)| !**u)
        .map(|(d, _)| d.clone())
        .collect();
    (common, only_first, only_second)
}

impl LogBlaschkePath {
    pub fn new(k0: SymmetricPolytope, k1: SymmetricPolytope) -> Result<Self> {
        Self::with_options(k0, k1, PathOptions::default())
    }

    pub fn with_options(
        k0: SymmetricPolytope,
        k1: SymmetricPolytope,
        options: PathOptions,
    ) -> Result<Self> {
        if k0.dim() != k1.dim() {
            return Err(Error::DimensionMismatch {
                expected: k0.dim(),
                found: k1.dim(),
            });
        }
        let (common, only_first, only_second) = match_supports(&k0, &k1);
        let exact_match = only_first.is_empty() && only_second.is_empty();
        if !exact_match && !options.allow_support_intersection {
            return Err(Error::SupportMismatch {
                only_first,
                only_second,
            });
        }
        let mut directions = Vec::with_capacity(common.len());
        let mut alpha = Vec::with_capacity(common.len());
        let mut beta = Vec::with_capacity(common.len());
        for (u, a, b) in common {
            directions.push(u);
            alpha.push(a);
            beta.push(b);
        }
        Ok(LogBlaschkePath {
            k0,
            k1,
            directions,
            alpha,
            beta,
            exact_match,
            options,
            cache: RefCell::new(BTreeMap::new()),
        })
    }

    pub fn k0(&self) -> &SymmetricPolytope {
        &self.k0
    }

    pub fn k1(&self) -> &SymmetricPolytope {
        &self.k1
    }

    pub fn dim(&self) -> usize {
        self.k0.dim()
    }

    /// The common support, one direction per antipodal pair.
    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    /// `φ = dS_{K1}/dS_{K0}` per direction.
    pub fn phi(&self) -> Vec<f64> {
        self.alpha.iter().zip(&self.beta).map(|(a, b)| b / a).collect()
    }

    /// Target measure `α^{1-t} β^t`.
    pub fn target(&self, t: f64) -> Result<EvenDiscreteMeasure> {
        let w = self
            .alpha
            .iter()
            .zip(&self.beta)
            .map(|(a, b)| powf(*a, 1.0 - t) * powf(*b, t));
        EvenDiscreteMeasure::new(self.dim(), self.directions.iter().cloned().zip(w).collect())
    }

    /// `K̃_t`. Out-of-range `t` is rejected.
    pub fn body(&self, t: f64) -> Result<SymmetricPolytope> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidInput(alloc::format!("t = {t} is outside [0, 1]")));
        }
        if self.exact_match && t == 0.0 {
            return Ok(self.k0.clone());
        }
        if self.exact_match && t == 1.0 {
            return Ok(self.k1.clone());
        }
        if let Some(p) = self.cache.borrow().get(&t.to_bits()) {
            return Ok(p.clone());
        }
        let target = self.target(t)?;
        // start from the geometric mean of the endpoint supports
        let init: Vec<f64> = self
            .directions
            .iter()
            .map(|u| {
                let h0 = self.k0.support(u.coords());
                let h1 = self.k1.support(u.coords());
                exp((1.0 - t) * ln(h0) + t * ln(h1))
            })
            .collect();
        let cfg = SolverConfig {
            initial: Some(init),
            ..self.options.solver.clone()
        };
        let body = solve_even_minkowski_with(&target, &cfg)?.body;
        self.cache.borrow_mut().insert(t.to_bits(), body.clone());
        Ok(body)
    }

    pub fn volume(&self, t: f64) -> Result<f64> {
        Ok(self.body(t)?.volume())
    }

    /// `d/dt V(K̃_t) = (n/(n-1)) ∫ log φ dV_{K̃_t}`, one-sided at the endpoints.
    pub fn volume_derivative(&self, t: f64) -> Result<f64> {
        let body = self.body(t)?;
        let n = self.dim() as f64;
        let phi = self.phi();
        let mut s = 0.0;
        for (u, p) in self.directions.iter().zip(&phi) {
            if let Some(i) = body.normal_index(u) {
                s += ln(*p) * body.supports()[i] * body.facet_areas()[i] / n;
            }
        }
        Ok(n / (n - 1.0) * 2.0 * s)
    }

    /// Hausdorff distances `d_H(K̃_t, K0)` for each `t`.
    pub fn endpoint_convergence(&self, ts: &[f64], threshold: f64) -> Result<EndpointReport> {
        let mut distances = Vec::with_capacity(ts.len());
        for &t in ts {
            distances.push(hausdorff_distance(&self.body(t)?, &self.k0)?);
        }
        let diameter = self.k0.diameter();
        let mut order: Vec<usize> = (0..ts.len()).collect();
        order.sort_by(|&a, &b| ts[b].total_cmp(&ts[a]));
        let monotone = order
            .windows(2)
            .all(|w| distances[w[1]] <= distances[w[0]]);
        let smallest = order.last().map_or(0.0, |&i| distances[i]);
        Ok(EndpointReport {
            ts: ts.to_vec(),
            distances,
            diameter,
            monotone,
            converged: smallest <= threshold * diameter,
        })
    }
}

/// Convenience wrapper building a throwaway path.
pub fn log_blaschke(k0: &SymmetricPolytope, k1: &SymmetricPolytope, t: f64) -> Result<SymmetricPolytope> {
    LogBlaschkePath::new(k0.clone(), k1.clone())?.body(t)
}

#[derive(Clone, Debug)]
pub struct EndpointReport {
    pub ts: Vec<f64>,
    pub distances: Vec<f64>,
    pub diameter: f64,
    /// Distances do not increase as `t` decreases.
    pub monotone: bool,
    /// The distance at the smallest `t` is within `threshold · diam(K0)`.
    pub converged: bool,
}

impl EndpointReport {
    pub fn passed(&self) -> bool {
        self.monotone && self.converged
    }
}

/// Outer approximation of `K_t` at two constraint resolutions.
#[derive(Clone, Debug)]
pub struct GeometricMeanBody {
    /// Body at resolution `2m`; its volume is the reported one.
    pub body: SymmetricPolytope,
    pub coarse_volume: f64,
    pub volume: f64,
    /// Richardson estimate of `volume − V(K_t)` from the two resolutions.
    pub refinement_estimate: f64,
    pub m: usize,
    /// The constraint set contains every facet normal of `K0 + K1`, which
    /// makes the Wulff shape exact.
    pub exact: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct GeometricMeanOptions {
    /// Add the facet normals of `K0 + K1` (exact in any dimension).
    pub include_sum_normals: bool,
    /// Add normals and vertex directions of both bodies.
    pub include_body_directions: bool,
}

impl Default for GeometricMeanOptions {
    fn default() -> Self {
        GeometricMeanOptions {
            include_sum_normals: true,
            include_body_directions: true,
        }
    }
}

pub fn geometric_mean_body(
    k0: &SymmetricPolytope,
    k1: &SymmetricPolytope,
    t: f64,
    m: usize,
) -> Result<GeometricMeanBody> {
    geometric_mean_body_with(k0, k1, t, m, GeometricMeanOptions::default())
}

pub fn geometric_mean_body_with(
    k0: &SymmetricPolytope,
    k1: &SymmetricPolytope,
    t: f64,
    m: usize,
    opts: GeometricMeanOptions,
) -> Result<GeometricMeanBody> {
    if k0.dim() != k1.dim() {
        return Err(Error::DimensionMismatch {
            expected: k0.dim(),
            found: k1.dim(),
        });
    }
    let dim = k0.dim();
    let mut base: Vec<Direction> = Vec::new();
    let push = |set: &mut Vec<Direction>, d: Direction| {
        if find_direction(set, &d, DIRECTION_TOL).is_none() {
            set.push(d);
        }
    };
    let mut exact = false;
    if opts.include_body_directions || opts.include_sum_normals {
        for d in k0.normals().iter().chain(k1.normals()) {
            push(&mut base, d.clone());
        }
    }
    if opts.include_body_directions {
        for d in k0.vertex_directions().into_iter().chain(k1.vertex_directions()) {
            push(&mut base, d);
        }
    }
    if opts.include_sum_normals {
        if dim > 2 {
            for d in k0.minkowski_sum(k1)?.normals() {
                push(&mut base, d.clone());
            }
        }
        exact = true;
    }
    let build = |res: usize| -> Result<SymmetricPolytope> {
        let mut dirs = base.clone();
        for g in hemisphere_grid(dim, res) {
            push(&mut dirs, Direction::canonical(g));
        }
        let hs: Vec<f64> = dirs
            .iter()
            .map(|u| {
                let h0 = k0.support(u.coords());
                let h1 = k1.support(u.coords());
                exp((1.0 - t) * ln(h0) + t * ln(h1))
            })
            .collect();
        wulff_shape(&dirs, &hs)
    };
    let coarse = build(m)?;
    let fine = build(2 * m)?;
    let ratio = powf(2.0, 2.0 / (dim as f64 - 1.0)) - 1.0;
    let refinement_estimate = ((coarse.volume() - fine.volume()) / ratio).max(0.0);
    Ok(GeometricMeanBody {
        coarse_volume: coarse.volume(),
        volume: fine.volume(),
        body: fine,
        refinement_estimate,
        m,
        exact,
    })
}
