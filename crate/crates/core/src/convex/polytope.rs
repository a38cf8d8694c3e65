use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::direction::{find_direction, Direction, DIRECTION_TOL};
use super::hull::{enumerate_vertices, symmetric_hull_facets, FaceLattice};
use super::measure::{ConeVolumeMeasure, EvenDiscreteMeasure};
use super::sphere::{default_grid_size, hemisphere_grid};
use crate::linalg::{self, dot, norm};
use crate::math::powi;
use crate::{Error, Result};

/// Facets below this fraction of the total surface area are inactive.
pub const INACTIVE_AREA_FRACTION: f64 = 1e-12;

/// An origin-symmetric polytope `{x : |x·u_i| ≤ h_i}`.
///
/// Only facet-supporting normals are kept in `normals`; constraints that were
/// given to the constructor but carry no facet are listed in
/// [`inactive`](Self::inactive) with the support number they were given.
#[derive(Clone, Debug)]
pub struct SymmetricPolytope {
    dim: usize,
    normals: Vec<Direction>,
    supports: Vec<f64>,
    areas: Vec<f64>,
    vertices: Vec<Vec<f64>>,
    volume: f64,
    inactive: Vec<(Direction, f64)>,
}

/// Ridge between the `+u_i` facet and the facet with normal `sign · u_j`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Ridge {
    pub pair: usize,
    pub sign: f64,
    pub volume: f64,
}

/// Raw facet geometry of `{x : |x·u_i| ≤ h_i}` for every given pair,
/// including zero-area ones.
#[derive(Clone, Debug)]
pub(crate) struct FacetData {
    pub areas: Vec<f64>,
    pub ridges: Vec<Vec<Ridge>>,
    pub vertices: Vec<Vec<f64>>,
}

pub(crate) fn facet_data(
    dim: usize,
    normals: &[Vec<f64>],
    supports: &[f64],
    want_ridges: bool,
) -> Result<FacetData> {
    let mut cn = Vec::with_capacity(2 * normals.len());
    let mut cb = Vec::with_capacity(2 * normals.len());
    for (u, &h) in normals.iter().zip(supports) {
        cn.push(u.clone());
        cn.push(linalg::scaled(u, -1.0));
        cb.push(h);
        cb.push(h);
    }
    let ve = enumerate_vertices(dim, &cn, &cb)?;
    let lat = FaceLattice::new(&ve);
    let mut areas = vec![0.0; normals.len()];
    let mut ridges = vec![Vec::new(); normals.len()];
    for i in 0..normals.len() {
        let face = lat.face_of(2 * i);
        if face.len() < dim || lat.affine_dim(&face) != dim - 1 {
            continue;
        }
        if want_ridges {
            let mut raw = Vec::new();
            areas[i] = lat.face_volume(&face, dim - 1, Some(&mut raw));
            ridges[i] = raw
                .into_iter()
                .map(|(c, v)| Ridge {
                    pair: c / 2,
                    sign: if c % 2 == 0 { 1.0 } else { -1.0 },
                    volume: v,
                })
                .collect();
        } else {
            areas[i] = lat.face_volume(&face, dim - 1, None);
        }
    }
    Ok(FacetData {
        areas,
        ridges,
        vertices: ve.vertices,
    })
}

/// Intersection of the slabs `|x·u| ≤ h(u)`.
///
/// Duplicate normals keep the smallest support number.
pub fn wulff_shape(normals: &[Direction], supports: &[f64]) -> Result<SymmetricPolytope> {
    if normals.len() != supports.len() {
        return Err(Error::InvalidInput(format!(
            "{} normals but {} supports",
            normals.len(),
            supports.len()
        )));
    }
    let dim = normals
        .first()
        .map(Direction::dim)
        .ok_or_else(|| Error::DegenerateBody("no normals given".into()))?;
    let mut ns: Vec<Direction> = Vec::with_capacity(normals.len());
    let mut hs: Vec<f64> = Vec::with_capacity(normals.len());
    for (u, &h) in normals.iter().zip(supports) {
        if u.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: u.dim(),
            });
        }
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::DegenerateBody(format!(
                "support {h} at {u} is not strictly positive"
            )));
        }
        match find_direction(&ns, u, DIRECTION_TOL) {
            Some(i) => hs[i] = hs[i].min(h),
            None => {
                ns.push(u.clone());
                hs.push(h);
            }
        }
    }
    let raw: Vec<Vec<f64>> = ns.iter().map(|u| u.coords().to_vec()).collect();
    let rank = linalg::rank(&raw, 1e-10);
    if rank < dim {
        return Err(Error::DegenerateBody(format!(
            "normals span only {rank} of {dim} dimensions; intersection is unbounded"
        )));
    }
    let data = facet_data(dim, &raw, &hs, false)?;
    Ok(SymmetricPolytope::from_facet_data(dim, ns, hs, data))
}

impl SymmetricPolytope {
    pub(crate) fn from_facet_data(
        dim: usize,
        normals: Vec<Direction>,
        supports: Vec<f64>,
        data: FacetData,
    ) -> Self {
        let total: f64 = 2.0 * data.areas.iter().sum::<f64>();
        let mut p = SymmetricPolytope {
            dim,
            normals: Vec::new(),
            supports: Vec::new(),
            areas: Vec::new(),
            vertices: data.vertices,
            volume: 0.0,
            inactive: Vec::new(),
        };
        for ((u, h), a) in normals.into_iter().zip(supports).zip(data.areas) {
            if a > INACTIVE_AREA_FRACTION * total {
                p.normals.push(u);
                p.supports.push(h);
                p.areas.push(a);
            } else {
                p.inactive.push((u, h));
            }
        }
        p.volume = 2.0
            * p.supports
                .iter()
                .zip(&p.areas)
                .map(|(h, a)| h * a)
                .sum::<f64>()
            / dim as f64;
        p
    }

    /// Box `∏ [-a_i, a_i]`.
    pub fn cuboid(half_widths: &[f64]) -> Result<Self> {
        let dim = half_widths.len();
        let normals: Vec<Direction> = (0..dim).map(|i| Direction::axis(dim, i)).collect();
        wulff_shape(&normals, half_widths)
    }

    /// `[-1,1]^dim`
    pub fn cube(dim: usize) -> Result<Self> {
        Self::cuboid(&vec![1.0; dim])
    }

    /// `conv{±r e_i}`
    pub fn cross_polytope(dim: usize, r: f64) -> Result<Self> {
        let pts: Vec<Vec<f64>> = (0..dim)
            .map(|i| {
                let mut e = vec![0.0; dim];
                e[i] = r;
                e
            })
            .collect();
        Self::from_vertices(dim, &pts)
    }

    /// `conv{±p}` over the given points.
    pub fn from_vertices(dim: usize, points: &[Vec<f64>]) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.len(),
            });
        }
        let rank = linalg::rank(points, 1e-10);
        if rank < dim {
            return Err(Error::DegenerateBody(format!(
                "points span only {rank} of {dim} dimensions"
            )));
        }
        let (ns, bs) = symmetric_hull_facets(dim, points)?;
        let dirs: Vec<Direction> = ns.into_iter().map(Direction::canonical).collect();
        wulff_shape(&dirs, &bs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Active facet normals, one per antipodal pair.
    pub fn normals(&self) -> &[Direction] {
        &self.normals
    }

    pub fn supports(&self) -> &[f64] {
        &self.supports
    }

    /// Area of the facet with outer normal `u_i` (equal to that at `-u_i`).
    pub fn facet_areas(&self) -> &[f64] {
        &self.areas
    }

    /// All vertices, both members of each antipodal pair.
    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// Constraints passed to the constructor that carry no facet.
    pub fn inactive(&self) -> &[(Direction, f64)] {
        &self.inactive
    }

    /// `h_P(v)` for an arbitrary (not necessarily unit) vector.
    pub fn support(&self, v: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|x| dot(x, v).abs())
            .fold(0.0, f64::max)
    }

    pub fn circumradius(&self) -> f64 {
        self.vertices.iter().map(|x| norm(x)).fold(0.0, f64::max)
    }

    pub fn diameter(&self) -> f64 {
        2.0 * self.circumradius()
    }

    pub fn surface_area(&self) -> f64 {
        2.0 * self.areas.iter().sum::<f64>()
    }

    /// Index of `u` among the active normals.
    pub fn normal_index(&self, u: &Direction) -> Option<usize> {
        find_direction(&self.normals, u, DIRECTION_TOL)
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidInput(format!("dilation factor {c} must be positive")));
        }
        let fa = powi(c, self.dim as i32 - 1);
        Ok(SymmetricPolytope {
            dim: self.dim,
            normals: self.normals.clone(),
            supports: self.supports.iter().map(|h| h * c).collect(),
            areas: self.areas.iter().map(|a| a * fa).collect(),
            vertices: self.vertices.iter().map(|x| linalg::scaled(x, c)).collect(),
            volume: self.volume * fa * c,
            inactive: self.inactive.iter().map(|(u, h)| (u.clone(), h * c)).collect(),
        })
    }

    /// Image under the orthogonal matrix `r` (row-major `dim × dim`).
    pub fn rotated(&self, r: &[f64]) -> Result<Self> {
        let n = self.dim;
        if r.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: r.len(),
            });
        }
        for i in 0..n {
            for j in 0..n {
                let g: f64 = (0..n).map(|k| r[k * n + i] * r[k * n + j]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                if (g - want).abs() > 1e-9 {
                    return Err(Error::InvalidInput("matrix is not orthogonal".into()));
                }
            }
        }
        let map = |u: &Direction| Direction::canonical(linalg::mat_vec(r, u.coords()));
        Ok(SymmetricPolytope {
            dim: n,
            normals: self.normals.iter().map(map).collect(),
            supports: self.supports.clone(),
            areas: self.areas.clone(),
            vertices: self.vertices.iter().map(|x| linalg::mat_vec(r, x)).collect(),
            volume: self.volume,
            inactive: self.inactive.iter().map(|(u, h)| (map(u), *h)).collect(),
        })
    }

    /// Minkowski sum `self + other`.
    pub fn minkowski_sum(&self, other: &Self) -> Result<Self> {
        check_dims(self, other)?;
        let mut pts: Vec<Vec<f64>> = Vec::new();
        let scale = self.circumradius() + other.circumradius();
        for x in &self.vertices {
            for y in &other.vertices {
                let s = linalg::add(x, y);
                let dup = pts.iter().any(|p| {
                    p.iter().zip(&s).all(|(a, b)| (a - b).abs() <= 1e-12 * scale)
                        || p.iter().zip(&s).all(|(a, b)| (a + b).abs() <= 1e-12 * scale)
                });
                if !dup {
                    pts.push(s);
                }
            }
        }
        Self::from_vertices(self.dim, &pts)
    }

    /// Vertex directions, one per antipodal pair.
    pub fn vertex_directions(&self) -> Vec<Direction> {
        let mut out: Vec<Direction> = Vec::new();
        for x in &self.vertices {
            if let Ok(d) = Direction::new(x) {
                if find_direction(&out, &d, DIRECTION_TOL).is_none() {
                    out.push(d);
                }
            }
        }
        out
    }
}

fn check_dims(p: &SymmetricPolytope, q: &SymmetricPolytope) -> Result<()> {
    if p.dim != q.dim {
        Err(Error::DimensionMismatch {
            expected: p.dim,
            found: q.dim,
        })
    } else {
        Ok(())
    }
}

pub fn surface_area_measure(p: &SymmetricPolytope) -> EvenDiscreteMeasure {
    EvenDiscreteMeasure::from_parts(p.dim, p.normals.clone(), p.areas.clone())
}

pub fn volume(p: &SymmetricPolytope) -> f64 {
    p.volume
}

pub fn support_value(p: &SymmetricPolytope, v: &Direction) -> f64 {
    p.support(v.coords())
}

/// `V_1(K, L) = (1/n) ∫ h_L dS_K`.
pub fn mixed_volume_v1(k: &SymmetricPolytope, l: &SymmetricPolytope) -> Result<f64> {
    check_dims(k, l)?;
    let s: f64 = k
        .normals
        .iter()
        .zip(&k.areas)
        .map(|(u, a)| l.support(u.coords()) * a)
        .sum();
    Ok(2.0 * s / k.dim as f64)
}

pub fn cone_volume_measure(p: &SymmetricPolytope) -> ConeVolumeMeasure {
    let n = p.dim as f64;
    let w = p
        .supports
        .iter()
        .zip(&p.areas)
        .map(|(h, a)| h * a / n)
        .collect();
    ConeVolumeMeasure(EvenDiscreteMeasure::from_parts(p.dim, p.normals.clone(), w))
}

/// Orthogonal projection of a body onto `u^⊥`, expressed in `basis`.
#[derive(Clone, Debug)]
pub struct Projection {
    pub body: SymmetricPolytope,
    /// Orthonormal basis of `u^⊥` (ambient coordinates), one row per axis
    /// of `body`.
    pub basis: Vec<Vec<f64>>,
}

impl Projection {
    /// Ambient direction of a direction of the projected body.
    pub fn lift(&self, w: &Direction) -> Direction {
        let mut x = vec![0.0; self.basis[0].len()];
        for (c, b) in w.coords().iter().zip(&self.basis) {
            linalg::axpy(&mut x, *c, b);
        }
        Direction::canonical(x)
    }

    /// Coordinates of an ambient vector in `basis`.
    pub fn coordinates(&self, x: &[f64]) -> Vec<f64> {
        self.basis.iter().map(|b| dot(b, x)).collect()
    }
}

pub fn project(p: &SymmetricPolytope, u: &Direction) -> Result<Projection> {
    if u.dim() != p.dim {
        return Err(Error::DimensionMismatch {
            expected: p.dim,
            found: u.dim(),
        });
    }
    if p.dim < 2 {
        return Err(Error::DegenerateBody(
            "projection of a 1-dimensional body is a point".into(),
        ));
    }
    let basis = linalg::orthogonal_complement(&[u.coords().to_vec()], p.dim);
    let pts: Vec<Vec<f64>> = p
        .vertices
        .iter()
        .map(|x| basis.iter().map(|b| dot(b, x)).collect())
        .collect();
    let body = SymmetricPolytope::from_vertices(p.dim - 1, &pts)?;
    Ok(Projection { body, basis })
}

/// Support-function distance `max_v |h_P(v) - h_Q(v)|`, sampled over both
/// normal sets, both vertex direction sets and a default direction grid.
///
/// The sample maximum never exceeds the true Hausdorff distance.
pub fn hausdorff_distance(p: &SymmetricPolytope, q: &SymmetricPolytope) -> Result<f64> {
    hausdorff_distance_with_grid(p, q, default_grid_size(p.dim))
}

pub fn hausdorff_distance_with_grid(
    p: &SymmetricPolytope,
    q: &SymmetricPolytope,
    grid: usize,
) -> Result<f64> {
    check_dims(p, q)?;
    let mut best: f64 = 0.0;
    let mut probe = |v: &[f64]| {
        let d = (p.support(v) - q.support(v)).abs();
        if d > best {
            best = d;
        }
    };
    for u in p.normals.iter().chain(&q.normals) {
        probe(u.coords());
    }
    for x in p.vertices.iter().chain(&q.vertices) {
        if let Some(v) = linalg::normalized(x) {
            probe(&v);
        }
    }
    for v in hemisphere_grid(p.dim, grid) {
        probe(&v);
    }
    Ok(best)
}
