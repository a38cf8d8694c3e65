//! Zonotopes, mixed surface area measures, and the two zonoid identities
//! behind the log-Minkowski inequality for zonoids.
//!
//! Normalization used throughout: for `K ⊂ R^n` and a unit `u`,
//!
//! ```text
//! S(K, …, K, [-u, u], ·) = (2 / (n−1)) · S^{(n−1)}_{P_{u⊥} K}
//! ```
//!
//! with the right side lifted from `u^⊥` to R^n. The square/`e1` and
//! cube/`e3` cases pin the constant.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::convex::{
    project, surface_area_measure, wulff_shape, Direction, EvenDiscreteMeasure, SymmetricPolytope,
};
use crate::inequalities::{lm_deficit, projection_rlm_deficit, weak_rlm_deficit, DeficitReport, ProjectionRlmReport};
use crate::linalg::{self, dot, norm};
use crate::math::{ln, powi};
use crate::relations::{detect_dilated_direct_summands, phi_on_support, SummandDetection};
use crate::{Error, Result};

pub const DEFAULT_GENERATOR_CAP: usize = 12;

/// `Σ [-g_i, g_i]`.
#[derive(Clone, Debug)]
pub struct Zonotope {
    generators: Vec<Vec<f64>>,
    polytope: SymmetricPolytope,
    generating_measure: EvenDiscreteMeasure,
}

fn subsets(n: usize, k: usize, out: &mut Vec<Vec<usize>>) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::new(), out);
}

impl Zonotope {
    pub fn new(generators: Vec<Vec<f64>>) -> Result<Self> {
        Self::with_cap(generators, DEFAULT_GENERATOR_CAP)
    }

    pub fn with_cap(generators: Vec<Vec<f64>>, cap: usize) -> Result<Self> {
        let dim = generators
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::DegenerateBody("no generators".into()))?;
        if generators.len() > cap {
            return Err(Error::TooManyGenerators {
                count: generators.len(),
                cap,
            });
        }
        for g in &generators {
            if g.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: g.len(),
                });
            }
            if !(norm(g) > 0.0) || g.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput("generators must be nonzero and finite".into()));
            }
        }
        let rank = linalg::rank(&generators, 1e-10);
        if rank < dim {
            return Err(Error::DegenerateBody(format!(
                "generators span only {rank} of {dim} dimensions"
            )));
        }
        let mut normals: Vec<Direction> = Vec::new();
        if dim == 1 {
            normals.push(Direction::axis(1, 0));
        } else {
            let mut subs = Vec::new();
            subsets(generators.len(), dim - 1, &mut subs);
            for s in subs {
                let vs: Vec<Vec<f64>> = s.iter().map(|&i| generators[i].clone()).collect();
                let basis = linalg::orthonormal_basis(&vs, 1e-10);
                if basis.len() != dim - 1 {
                    continue;
                }
                let perp = linalg::orthogonal_complement(&basis, dim);
                normals.push(Direction::canonical(perp[0].clone()));
            }
        }
        let supports: Vec<f64> = normals
            .iter()
            .map(|u| generators.iter().map(|g| dot(g, u.coords()).abs()).sum())
            .collect();
        let polytope = wulff_shape(&normals, &supports)?;
        let entries = generators
            .iter()
            .map(|g| Ok((Direction::new(g)?, norm(g) / 2.0)))
            .collect::<Result<Vec<_>>>()?;
        let generating_measure = EvenDiscreteMeasure::new(dim, entries)?;
        Ok(Zonotope {
            generators,
            polytope,
            generating_measure,
        })
    }

    pub fn dim(&self) -> usize {
        self.polytope.dim()
    }

    pub fn generators(&self) -> &[Vec<f64>] {
        &self.generators
    }

    pub fn polytope(&self) -> &SymmetricPolytope {
        &self.polytope
    }

    /// `ρ` with `h_Z(v) = ∫ |u·v| dρ(u)`; an entry `(u, w)` carries mass `w`
    /// at each of `±u`, so `w = |g|/2` summed over generators parallel to `u`.
    pub fn generating_measure(&self) -> &EvenDiscreteMeasure {
        &self.generating_measure
    }

    /// `h_Z(v) = Σ |g_i·v|`
    pub fn support(&self, v: &[f64]) -> f64 {
        self.generators.iter().map(|g| dot(g, v).abs()).sum()
    }

    pub fn generator_directions(&self) -> Vec<Direction> {
        self.generating_measure.directions().to_vec()
    }
}

/// `S(K, …, K, L, ·)` recovered from `S_{K+sL}` by polynomial interpolation.
#[derive(Clone, Debug)]
pub struct MixedSurfaceMeasure {
    pub measure: EvenDiscreteMeasure,
    /// Parameters `s` at which `S_{K+sL}` was sampled.
    pub samples: Vec<f64>,
    pub degree: usize,
}

fn sum_body(k: &SymmetricPolytope, pts: &[Vec<f64>], s: f64) -> Result<SymmetricPolytope> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(k.vertices().len() * pts.len());
    let scale = k.circumradius() + s * pts.iter().map(|p| norm(p)).fold(0.0, f64::max);
    for x in k.vertices() {
        for y in pts {
            let p: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + s * b).collect();
            let dup = out.iter().any(|q| {
                q.iter().zip(&p).all(|(a, b)| (a - b).abs() <= 1e-12 * scale)
                    || q.iter().zip(&p).all(|(a, b)| (a + b).abs() <= 1e-12 * scale)
            });
            if !dup {
                out.push(p);
            }
        }
    }
    SymmetricPolytope::from_vertices(k.dim(), &out)
}

/// Interpolate the `s¹` coefficient of `S_{K + s·conv(±pts)}`.
fn interpolate(k: &SymmetricPolytope, pts: &[Vec<f64>], size: f64) -> Result<MixedSurfaceMeasure> {
    let n = k.dim();
    if n < 2 {
        return Err(Error::InvalidInput("mixed measures need dimension at least 2".into()));
    }
    let mut sigma = k.diameter() / size.max(1e-300);
    let mut last_err = None;
    for _attempt in 0..3 {
        let samples: Vec<f64> = (1..=n).map(|j| sigma * j as f64).collect();
        match interpolate_at(k, pts, &samples, sigma) {
            Ok(m) => return Ok(m),
            Err(e @ Error::InterpolationIllConditioned(_)) => {
                last_err = Some(e);
                sigma *= 0.5;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

fn interpolate_at(
    k: &SymmetricPolytope,
    pts: &[Vec<f64>],
    samples: &[f64],
    sigma: f64,
) -> Result<MixedSurfaceMeasure> {
    let n = k.dim();
    let bodies = samples
        .iter()
        .map(|&s| sum_body(k, pts, s))
        .collect::<Result<Vec<_>>>()?;
    let dirs: Vec<Direction> = bodies[0].normals().to_vec();
    let mut w = vec![vec![0.0; dirs.len()]; samples.len()];
    for (j, b) in bodies.iter().enumerate() {
        if b.normals().len() != dirs.len() {
            return Err(Error::InterpolationIllConditioned(format!(
                "normal fan changed between samples ({} vs {} facets)",
                dirs.len(),
                b.normals().len()
            )));
        }
        for (i, d) in dirs.iter().enumerate() {
            match b.normal_index(d) {
                Some(idx) => w[j][i] = b.facet_areas()[idx],
                None => {
                    return Err(Error::InterpolationIllConditioned(format!(
                        "direction {d} missing at s = {}",
                        samples[j]
                    )))
                }
            }
        }
    }
    // Vandermonde in the rescaled variable s/σ ∈ {1, …, n}
    let mut v = vec![0.0; n * n];
    for j in 0..n {
        let x = samples[j] / sigma;
        for c in 0..n {
            v[j * n + c] = powi(x, c as i32);
        }
    }
    let inv = linalg::inverse(&v, n)
        .ok_or_else(|| Error::InterpolationIllConditioned("singular sample matrix".into()))?;
    let wmax = w.iter().flatten().copied().fold(0.0, f64::max);
    let mut entries = Vec::new();
    for (i, d) in dirs.iter().enumerate() {
        let c1: f64 = (0..n).map(|j| inv[n + j] * w[j][i]).sum::<f64>() / sigma;
        let mixed = c1 / (n as f64 - 1.0);
        if mixed < -1e-8 * wmax {
            return Err(Error::InterpolationIllConditioned(format!(
                "negative mixed weight {mixed:e} at {d}"
            )));
        }
        if mixed > 1e-12 * wmax {
            entries.push((d.clone(), mixed));
        }
    }
    Ok(MixedSurfaceMeasure {
        measure: EvenDiscreteMeasure::new(n, entries)?,
        samples: samples.to_vec(),
        degree: n - 1,
    })
}

/// `S(K, …, K, [-u, u], ·)`
pub fn mixed_surface_measure_segment(k: &SymmetricPolytope, u: &Direction) -> Result<MixedSurfaceMeasure> {
    interpolate(k, &[u.coords().to_vec()], 2.0)
}

/// `S(K, …, K, L, ·)`
pub fn mixed_surface_measure(k: &SymmetricPolytope, l: &SymmetricPolytope) -> Result<MixedSurfaceMeasure> {
    if k.dim() != l.dim() {
        return Err(Error::DimensionMismatch {
            expected: k.dim(),
            found: l.dim(),
        });
    }
    interpolate(k, l.vertices(), l.diameter())
}

/// `(2/(n−1)) S_{P_{u⊥}K}` lifted back to R^n.
pub fn lifted_projection_measure(k: &SymmetricPolytope, u: &Direction) -> Result<EvenDiscreteMeasure> {
    let pr = project(k, u)?;
    let c = 2.0 / (k.dim() as f64 - 1.0);
    let s = surface_area_measure(&pr.body);
    let entries = s.iter().map(|(w, a)| (pr.lift(w), a * c)).collect();
    EvenDiscreteMeasure::new(k.dim(), entries)
}

#[derive(Clone, Debug)]
pub struct SamProjReport {
    pub total_variation: f64,
    pub total_mass: f64,
}

impl SamProjReport {
    pub fn relative(&self) -> f64 {
        self.total_variation / self.total_mass
    }

    pub fn passed(&self, tol: f64) -> bool {
        self.relative() <= tol
    }
}

pub fn verify_sam_proj(k: &SymmetricPolytope, u: &Direction) -> Result<SamProjReport> {
    let mixed = mixed_surface_measure_segment(k, u)?;
    let lifted = lifted_projection_measure(k, u)?;
    Ok(SamProjReport {
        total_variation: mixed.measure.total_variation(&lifted),
        total_mass: lifted.total_mass(),
    })
}

#[derive(Clone, Debug)]
pub struct ZonoidMvReport {
    /// `(1/n) ∫∫ f dS(K,…,K,[-u,u]) dρ(u)`
    pub lhs: f64,
    /// `(1/n) ∫ f dS(K,…,K,Z)`
    pub rhs: f64,
}

impl ZonoidMvReport {
    pub fn relative(&self) -> f64 {
        (self.lhs - self.rhs).abs() / self.lhs.abs().max(self.rhs.abs()).max(1e-300)
    }
}

pub fn verify_zonoidmv(
    k: &SymmetricPolytope,
    z: &Zonotope,
    f: impl Fn(&Direction) -> f64,
) -> Result<ZonoidMvReport> {
    let n = k.dim() as f64;
    let mut lhs = 0.0;
    for (u, w) in z.generating_measure().iter() {
        let m = mixed_surface_measure_segment(k, u)?;
        lhs += 2.0 * w * m.measure.integrate(&f);
    }
    let m = mixed_surface_measure(k, z.polytope())?;
    let rhs = m.measure.integrate(&f) / n;
    Ok(ZonoidMvReport { lhs: lhs / n, rhs })
}

#[derive(Clone, Debug)]
pub struct GeneratorCheck {
    pub u: Direction,
    /// LM for the projections onto `u^⊥`, one dimension down.
    pub projected_lm: DeficitReport,
    /// Relative mismatch of `∫ f dS_{P_{u⊥}Z} = ((n−1)/2) ∫ f dS(Z,…,Z,[-u,u])`
    /// for `f = log(h_L/h_Z) h_Z`.
    pub sam_proj_error: f64,
    pub proj_rlm: Option<ProjectionRlmReport>,
    /// `(n−1) ∫ log(h_L/h_Z) h_Z dS(Z,…,Z,[-u,u]) − ∫ log φ |u·v| dS_Z`
    pub per_u: Option<DeficitReport>,
}

#[derive(Clone, Debug)]
pub struct ZonoidLmReport {
    pub lm: DeficitReport,
    pub detection: Option<SummandDetection>,
    pub generators: Vec<GeneratorCheck>,
    pub weak_rlm: Option<DeficitReport>,
    /// `Σ |g| · per_u` deficits, which should equal `n(n−1)` times the
    /// weak reverse deficit.
    pub integrated: Option<DeficitReport>,
    pub integration_error: Option<f64>,
}

pub fn lm_zonoid_harness(z: &Zonotope, l: &SymmetricPolytope) -> Result<ZonoidLmReport> {
    let k = z.polytope();
    let n = k.dim();
    let nf = n as f64;
    let lm = lm_deficit(k, l)?;
    let matched = phi_on_support(k, l).ok();
    let hl = |d: &Direction| l.support(d.coords());
    let mut generators = Vec::new();
    let mut integ_lhs = 0.0;
    let mut integ_rhs = 0.0;
    for (u, w) in z.generating_measure().iter() {
        let pk = project(k, u)?;
        let pl = project(l, u)?;
        let projected_lm = lm_deficit(&pk.body, &pl.body)?;
        let f = |d: &Direction| ln(hl(d) / k.support(d.coords())) * k.support(d.coords());
        let mixed = mixed_surface_measure_segment(k, u)?;
        let via_mixed = (nf - 1.0) / 2.0 * mixed.measure.integrate(f);
        let proj_measure = surface_area_measure(&pk.body);
        let via_proj = proj_measure.integrate(|wd| f(&pk.lift(wd)));
        let sam_proj_error =
            (via_mixed - via_proj).abs() / via_mixed.abs().max(via_proj.abs()).max(f64::MIN_POSITIVE);
        let (proj_rlm, per_u) = match &matched {
            Some(phi) => {
                let pr = projection_rlm_deficit(k, l, u)?;
                let mut lhs_u = 0.0;
                for (i, v) in k.normals().iter().enumerate() {
                    lhs_u += 2.0 * ln(phi[i]) * v.dot(u.coords()).abs() * k.facet_areas()[i];
                }
                let rhs_u = (nf - 1.0) * mixed.measure.integrate(f);
                integ_lhs += 2.0 * w * rhs_u;
                integ_rhs += 2.0 * w * lhs_u;
                let scale = pk.body.volume();
                let budget = 1e-9 * scale.max(lhs_u.abs()).max(rhs_u.abs());
                (Some(pr), Some(DeficitReport::new("weak-rlm-u", None, rhs_u, lhs_u, budget, scale)))
            }
            None => (None, None),
        };
        generators.push(GeneratorCheck {
            u: u.clone(),
            projected_lm,
            sam_proj_error,
            proj_rlm,
            per_u,
        });
    }
    let (weak_rlm, integrated, integration_error) = if matched.is_some() {
        let weak = weak_rlm_deficit(k, l)?;
        let scale = k.volume();
        let budget = 1e-9 * scale.max(integ_lhs.abs()).max(integ_rhs.abs());
        let integ = DeficitReport::new("weak-rlm-integrated", None, integ_lhs, integ_rhs, budget, scale);
        let err = (integ.deficit - nf * (nf - 1.0) * weak.deficit).abs() / scale;
        (Some(weak), Some(integ), Some(err))
    } else {
        (None, None, None)
    };
    let detection = if matched.is_some() && lm.verdict == crate::Verdict::EqualityWithinTol {
        let witness = z.generator_directions();
        detect_dilated_direct_summands(k, l, Some(&witness))?
    } else {
        None
    };
    Ok(ZonoidLmReport {
        lm,
        detection,
        generators,
        weak_rlm,
        integrated,
        integration_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_from_axes() {
        let z = Zonotope::new(vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        assert!((z.polytope().volume() - 8.0).abs() < 1e-12);
        assert_eq!(z.polytope().normals().len(), 3);
    }

    #[test]
    fn segment_mixed_measure_on_cube_pins_the_constant() {
        let c = SymmetricPolytope::cube(3).unwrap();
        let m = mixed_surface_measure_segment(&c, &Direction::axis(3, 2)).unwrap();
        assert_eq!(m.measure.len(), 2);
        for w in m.measure.weights() {
            assert!((w - 2.0).abs() < 1e-9);
        }
        let r = verify_sam_proj(&c, &Direction::axis(3, 2)).unwrap();
        assert!(r.total_variation < 1e-9);
    }

    #[test]
    fn planar_segment_measure() {
        let sq = SymmetricPolytope::cube(2).unwrap();
        let m = mixed_surface_measure_segment(&sq, &Direction::axis(2, 0)).unwrap();
        assert_eq!(m.measure.len(), 1);
        assert!((m.measure.weight_at(&Direction::axis(2, 1)).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn too_many_generators() {
        let g: Vec<Vec<f64>> = (0..13).map(|i| vec![1.0, i as f64]).collect();
        assert!(matches!(Zonotope::new(g), Err(Error::TooManyGenerators { count: 13, cap: 12 })));
    }
}
