//! Signed deficits for the inequalities around (LBM).
//!
//! Every report follows one convention: `deficit = favorable − other`, so a
//! nonnegative deficit means the inequality holds.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::combinations::{geometric_mean_body, LogBlaschkePath};
use crate::convex::sphere::hemisphere_grid;
use crate::convex::{
    cone_volume_measure, mixed_volume_v1, project, Direction, EvenDiscreteMeasure,
    SymmetricPolytope,
};
use crate::linalg::dot;
use crate::math::{exp, ln, powf};
use crate::relations::{detect_dilated_direct_summands, phi_on_support, SummandDetection};
use crate::{Error, Result};

/// Default parameter grid: 0.1, …, 0.9 plus 0.01 and 0.99.
pub const DEFAULT_T_GRID: [f64; 11] = [0.01, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99];

/// Relative size below which a deficit counts as equality.
pub const EQUALITY_TOL: f64 = 1e-6;

/// Grid resolution for geometric-mean bodies when none is given.
pub const DEFAULT_RESOLUTION: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    Satisfied,
    EqualityWithinTol,
    ViolatedBeyondBudget,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Satisfied => "satisfied",
            Verdict::EqualityWithinTol => "equality_within_tol",
            Verdict::ViolatedBeyondBudget => "violated_beyond_budget",
        }
    }
}

impl core::fmt::Display for Verdict {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug)]
pub struct DeficitReport {
    pub name: &'static str,
    pub t: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub deficit: f64,
    pub error_budget: f64,
    /// Size the equality tolerance is measured against (a volume).
    pub scale: f64,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl DeficitReport {
    pub fn new(
        name: &'static str,
        t: Option<f64>,
        lhs: f64,
        rhs: f64,
        error_budget: f64,
        scale: f64,
    ) -> Self {
        let deficit = lhs - rhs;
        let eq_tol = EQUALITY_TOL * lhs.abs().max(rhs.abs()).max(scale);
        let verdict = if deficit.abs() <= eq_tol {
            Verdict::EqualityWithinTol
        } else if deficit > 0.0 {
            Verdict::Satisfied
        } else if deficit < -error_budget - eq_tol {
            Verdict::ViolatedBeyondBudget
        } else {
            Verdict::EqualityWithinTol
        };
        DeficitReport {
            name,
            t,
            lhs,
            rhs,
            deficit,
            error_budget,
            scale,
            verdict,
            notes: Vec::new(),
        }
    }

    fn note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }
}

fn geometric_mean(a: f64, b: f64, t: f64) -> f64 {
    exp((1.0 - t) * ln(a) + t * ln(b))
}

/// `(1/n) Σ_full |F_i − w_i| · max h`: how far a solved body's volume can be
/// from that of the exact solution of `target`.
pub fn solver_budget(body: &SymmetricPolytope, target: &EvenDiscreteMeasure) -> f64 {
    let hmax = body.supports().iter().copied().fold(0.0, f64::max);
    let mut mismatch = 0.0;
    for (d, w) in target.iter() {
        let f = body.normal_index(d).map_or(0.0, |i| body.facet_areas()[i]);
        mismatch += (f - w).abs();
    }
    for (u, a) in body.normals().iter().zip(body.facet_areas()) {
        if target.weight_at(u).is_none() {
            mismatch += a;
        }
    }
    2.0 * mismatch * hmax / body.dim() as f64
}

fn path_budget(path: &LogBlaschkePath, t: f64, body: &SymmetricPolytope) -> Result<f64> {
    Ok(solver_budget(body, &path.target(t)?))
}

/// `V(K_t) − V(K0)^{1-t} V(K1)^t`, with `K_t` the outer Wulff approximation.
pub fn lbm_deficit(
    k0: &SymmetricPolytope,
    k1: &SymmetricPolytope,
    t: f64,
    m: usize,
) -> Result<DeficitReport> {
    let g = geometric_mean_body(k0, k1, t, m)?;
    let rhs = geometric_mean(k0.volume(), k1.volume(), t);
    let scale = k0.volume().max(k1.volume());
    let mut r = DeficitReport::new("lbm", Some(t), g.volume, rhs, g.refinement_estimate + 1e-12 * scale, scale)
        .note("V(K_t) from an outer approximation, biased upward by at most the budget");
    if g.exact {
        r = r.note("constraint set contains all normals of K0+K1 (exact)");
    }
    Ok(r)
}

/// `V(K0)^{1-t} V(K1)^t − V(K̃_t)`.
pub fn rlbm_deficit(path: &LogBlaschkePath, t: f64) -> Result<DeficitReport> {
    let body = path.body(t)?;
    let lhs = geometric_mean(path.k0().volume(), path.k1().volume(), t);
    let scale = path.k0().volume().max(path.k1().volume());
    let budget = path_budget(path, t, &body)?;
    Ok(DeficitReport::new("rlbm", Some(t), lhs, body.volume(), budget, scale))
}

/// `V(K_t) − V(K̃_t)`; for planar pairs the containment check runs too.
pub fn tilde_vs_wulff_deficit(
    path: &LogBlaschkePath,
    t: f64,
    m: usize,
) -> Result<(DeficitReport, Option<ContainmentReport>)> {
    let body = path.body(t)?;
    let g = geometric_mean_body(path.k0(), path.k1(), t, m)?;
    let scale = path.k0().volume().max(path.k1().volume());
    let budget = path_budget(path, t, &body)? + g.refinement_estimate;
    let r = DeficitReport::new("tilde-vs-wulff", Some(t), g.volume, body.volume(), budget, scale);
    let cont = if path.dim() == 2 {
        Some(containment_check_2d(path, t)?)
    } else {
        None
    };
    Ok((r, cont))
}

#[derive(Clone, Debug)]
pub struct ContainmentReport {
    pub t: f64,
    /// Largest `(|x·w| − G(w)) / R` over vertices `x` of `K̃_t` and the
    /// normals `w` of both bodies, `G = h_{K0}^{1-t} h_{K1}^t`. These
    /// normals determine `K_t` in the plane, so `≤ tol` is conclusive.
    pub vertex_violation: f64,
    /// Largest `(h_{K̃_t}(v) − G(v)) / R` over a uniform angular grid.
    pub grid_violation: f64,
    /// Largest `(h_{K̃_t}(u^⊥) − G(u^⊥)) / R` over normals `u` of the support.
    pub projection_violation: f64,
    /// Largest `|4 h_{K̃_t}(u^⊥) − ∫|u·v| dS_{K̃_t}| / R'` over the same normals.
    pub cauchy_error: f64,
    pub tol: f64,
}

impl ContainmentReport {
    pub fn holds(&self) -> bool {
        self.vertex_violation <= self.tol && self.grid_violation <= self.tol
    }

    pub fn projection_holds(&self) -> bool {
        self.projection_violation <= self.tol
    }

    pub fn passed(&self) -> bool {
        self.holds() && self.projection_holds() && self.cauchy_error <= self.tol
    }
}

/// Checks `K̃_t ⊆ K_t` and the per-direction projection inequality in the plane.
pub fn containment_check_2d(path: &LogBlaschkePath, t: f64) -> Result<ContainmentReport> {
    if path.dim() != 2 {
        return Err(Error::InvalidInput(format!(
            "containment check is planar, got dimension {}",
            path.dim()
        )));
    }
    let kt = path.body(t)?;
    let (k0, k1) = (path.k0(), path.k1());
    let g = |v: &[f64]| geometric_mean(k0.support(v), k1.support(v), t);
    let r = kt.circumradius().max(k0.circumradius()).max(k1.circumradius());
    let mut vertex_violation = f64::NEG_INFINITY;
    for w in k0.normals().iter().chain(k1.normals()) {
        let gw = g(w.coords());
        for x in kt.vertices() {
            vertex_violation = vertex_violation.max((dot(x, w.coords()).abs() - gw) / r);
        }
    }
    let mut grid_violation = f64::NEG_INFINITY;
    for v in hemisphere_grid(2, 2048) {
        grid_violation = grid_violation.max((kt.support(&v) - g(&v)) / r);
    }
    let mut projection_violation = f64::NEG_INFINITY;
    let mut cauchy_error: f64 = 0.0;
    let s = crate::convex::surface_area_measure(&kt);
    let perimeter = s.total_mass();
    for u in path.directions() {
        let c = u.coords();
        let perp = [-c[1], c[0]];
        projection_violation = projection_violation.max((kt.support(&perp) - g(&perp)) / r);
        let cauchy = s.integrate(|v| v.dot(c).abs());
        cauchy_error = cauchy_error.max((4.0 * kt.support(&perp) - cauchy).abs() / perimeter);
    }
    Ok(ContainmentReport {
        t,
        vertex_violation,
        grid_violation,
        projection_violation,
        cauchy_error,
        tol: 1e-8,
    })
}

/// `∫ log(h_L/h_K) dV_K − (V(K)/n) log(V(L)/V(K))`.
pub fn lm_deficit(k: &SymmetricPolytope, l: &SymmetricPolytope) -> Result<DeficitReport> {
    if k.dim() != l.dim() {
        return Err(Error::DimensionMismatch {
            expected: k.dim(),
            found: l.dim(),
        });
    }
    let cv = cone_volume_measure(k);
    let lhs = cv
        .measure()
        .integrate(|u| ln(l.support(u.coords()) / k.support(u.coords())));
    let n = k.dim() as f64;
    let rhs = k.volume() / n * ln(l.volume() / k.volume());
    let scale = k.volume();
    let budget = 1e-11 * scale.max(lhs.abs()).max(rhs.abs());
    Ok(DeficitReport::new("lm", None, lhs, rhs, budget, scale))
}

/// `∫ log(h_L/h_K) dV_K − (1/(n−1)) ∫ log φ dV_K`, `φ = dS_L/dS_K`.
pub fn weak_rlm_deficit(k: &SymmetricPolytope, l: &SymmetricPolytope) -> Result<DeficitReport> {
    let phi = phi_on_support(k, l)?;
    let n = k.dim() as f64;
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for (i, u) in k.normals().iter().enumerate() {
        let w = 2.0 * k.supports()[i] * k.facet_areas()[i] / n;
        lhs += ln(l.support(u.coords()) / k.supports()[i]) * w;
        rhs += ln(phi[i]) * w;
    }
    rhs /= n - 1.0;
    let scale = k.volume();
    let budget = 1e-11 * scale.max(lhs.abs()).max(rhs.abs());
    Ok(DeficitReport::new("weak-rlm", None, lhs, rhs, budget, scale))
}

#[derive(Clone, Debug)]
pub struct ProjectionRlmReport {
    pub report: DeficitReport,
    /// `φ` is constant on `supp S_K ∖ u^⊥`.
    pub witness: bool,
    /// The constant `c(u)` when the witness holds.
    pub constant: Option<f64>,
}

/// `2 |P_{u⊥}K| log(|P_{u⊥}L| / |P_{u⊥}K|) − ∫ log φ |u·v| dS_K`.
pub fn projection_rlm_deficit(
    k: &SymmetricPolytope,
    l: &SymmetricPolytope,
    u: &Direction,
) -> Result<ProjectionRlmReport> {
    let phi = phi_on_support(k, l)?;
    let pk = project(k, u)?.body.volume();
    let pl = project(l, u)?.body.volume();
    let lhs = 2.0 * pk * ln(pl / pk);
    let mut rhs = 0.0;
    let mut off_plane: Vec<f64> = Vec::new();
    for (i, v) in k.normals().iter().enumerate() {
        let c = v.dot(u.coords()).abs();
        rhs += 2.0 * ln(phi[i]) * c * k.facet_areas()[i];
        if c > crate::relations::ORTH_TOL {
            off_plane.push(phi[i]);
        }
    }
    let scale = pk;
    let budget = 1e-11 * scale.max(lhs.abs()).max(rhs.abs());
    let report = DeficitReport::new("proj-rlm", None, lhs, rhs, budget, scale);
    let c0 = off_plane.first().copied();
    let witness = match c0 {
        Some(c) => off_plane
            .iter()
            .all(|x| (x - c).abs() <= crate::relations::PHI_TOL * c),
        None => true,
    };
    Ok(ProjectionRlmReport {
        report,
        witness,
        constant: if witness { c0.or(Some(1.0)) } else { None },
    })
}

/// The two steps of the chain `V0^{1-t}V1^t ≥ (1/n)∫ G dS̃ ≥ V(K̃)^{(n-1)/n} V(K_t)^{1/n}`
/// together with the two halves of the second step.
#[derive(Clone, Debug)]
pub struct ChainReport {
    pub holder: DeficitReport,
    pub minkowski: DeficitReport,
    /// `(1/n)∫ G dS̃ − V_1(K̃_t, K_t)`, from `G ≥ h_{K_t}`.
    pub support_domination: DeficitReport,
    /// `V_1(K̃_t, K_t) − V(K̃)^{(n-1)/n} V(K_t)^{1/n}`.
    pub mixed_minkowski: DeficitReport,
}

impl ChainReport {
    pub fn all(&self) -> [&DeficitReport; 4] {
        [&self.holder, &self.minkowski, &self.support_domination, &self.mixed_minkowski]
    }
}

pub fn chain_deficits(path: &LogBlaschkePath, t: f64, m: usize) -> Result<ChainReport> {
    let kt = path.body(t)?;
    let (k0, k1) = (path.k0(), path.k1());
    let n = path.dim() as f64;
    let g = geometric_mean_body(k0, k1, t, m)?;
    let mut integral = 0.0;
    for (u, a) in kt.normals().iter().zip(kt.facet_areas()) {
        integral += 2.0 * geometric_mean(k0.support(u.coords()), k1.support(u.coords()), t) * a / n;
    }
    let top = geometric_mean(k0.volume(), k1.volume(), t);
    let v1 = mixed_volume_v1(&kt, &g.body)?;
    let bottom = powf(kt.volume(), (n - 1.0) / n) * powf(g.volume, 1.0 / n);
    let scale = k0.volume().max(k1.volume());
    let sb = path_budget(path, t, &kt)?;
    let rb = g.refinement_estimate;
    Ok(ChainReport {
        holder: DeficitReport::new("chain-holder", Some(t), top, integral, sb, scale),
        minkowski: DeficitReport::new("chain-minkowski", Some(t), integral, bottom, sb + rb, scale),
        support_domination: DeficitReport::new("chain-support", Some(t), integral, v1, sb + rb, scale),
        mixed_minkowski: DeficitReport::new("chain-mixed", Some(t), v1, bottom, sb + rb, scale),
    })
}

#[derive(Clone, Debug)]
pub struct EqualityScan {
    pub reports: Vec<DeficitReport>,
    /// Parameters where the RLBM deficit is an equality within tolerance.
    pub equality_at: Vec<f64>,
    pub detection: Option<SummandDetection>,
    /// Disagreements between the deficit scan and the summand detector.
    pub findings: Vec<String>,
}

/// RLBM over `ts`, cross-checked against the summand detector.
///
/// Summand structure is read operationally: a direct-sum split of the
/// normals with `φ` constant on each class.
pub fn equality_case_scan(path: &LogBlaschkePath, ts: &[f64]) -> Result<EqualityScan> {
    let mut reports = Vec::with_capacity(ts.len());
    let mut equality_at = Vec::new();
    for &t in ts {
        let r = rlbm_deficit(path, t)?;
        if r.verdict == Verdict::EqualityWithinTol {
            equality_at.push(t);
        }
        reports.push(r);
    }
    let detection = detect_dilated_direct_summands(path.k0(), path.k1(), None)?;
    let mut findings = Vec::new();
    let all_equal = equality_at.len() == ts.len() && !ts.is_empty();
    match (&detection, all_equal) {
        (None, true) => findings.push("equality on the whole grid without detected summand structure".into()),
        (Some(_), false) => findings.push(format!(
            "summand structure detected but RLBM is strict at {} of {} parameters",
            ts.len() - equality_at.len(),
            ts.len()
        )),
        _ => {}
    }
    Ok(EqualityScan {
        reports,
        equality_at,
        detection,
        findings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_versus_diamond_lm() {
        let k = SymmetricPolytope::cube(2).unwrap();
        let l = SymmetricPolytope::cross_polytope(2, 1.0).unwrap();
        let r = lm_deficit(&k, &l).unwrap();
        assert!(r.lhs.abs() < 1e-14);
        assert!((r.deficit - 2.0 * ln(2.0)).abs() < 1e-12);
        assert_eq!(r.verdict, Verdict::Satisfied);
    }

    #[test]
    fn verdict_rules() {
        assert_eq!(DeficitReport::new("x", None, 1.0, 1.0 + 1e-9, 0.0, 1.0).verdict, Verdict::EqualityWithinTol);
        assert_eq!(DeficitReport::new("x", None, 1.0, 0.5, 0.0, 1.0).verdict, Verdict::Satisfied);
        assert_eq!(DeficitReport::new("x", None, 1.0, 1.5, 0.1, 1.0).verdict, Verdict::ViolatedBeyondBudget);
        assert_eq!(DeficitReport::new("x", None, 1.0, 1.05, 0.1, 1.0).verdict, Verdict::EqualityWithinTol);
    }
}
