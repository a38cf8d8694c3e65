//! Vertex enumeration by the double description method, and face-lattice
//! volumes from vertex/facet incidences.
//!
//! Input is always a bounded polytope `{x : a_k·x ≤ b_k}` with unit `a_k`
//! and `b_k > 0`, so the origin is interior. The homogenized cone
//! `{(s, x) : b_k s − a_k·x ≥ 0, s ≥ 0}` is built one constraint at a time;
//! its extreme rays with `s > 0` are the vertices.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{self, dot, norm};
use crate::{Error, Result};

/// Relative tolerance for "constraint is tight at this ray".
const ZERO_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn new(bits: usize) -> Self {
        BitSet {
            words: vec![0; bits.div_ceil(64)],
        }
    }

    #[inline]
    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    fn intersection_count(&self, other: &BitSet) -> u32 {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    fn intersection(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    #[inline]
    fn is_superset_of(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == *b)
    }

    fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }
}

struct Ray {
    coords: Vec<f64>,
    zeros: BitSet,
}

/// Vertices of an H-polytope with the constraints tight at each vertex.
#[derive(Clone, Debug)]
pub(crate) struct VertexEnumeration {
    pub vertices: Vec<Vec<f64>>,
    pub incidence: Vec<Vec<usize>>,
    /// max |x| over vertices
    pub radius: f64,
}

fn normalize_ray(r: &mut [f64]) {
    let xn = norm(&r[1..]);
    if r[0] < 0.0 {
        r[0] = 0.0;
    }
    if r[0] > 1e-12 * xn {
        let s = r[0];
        for c in r.iter_mut() {
            *c /= s;
        }
    } else if xn > 0.0 {
        for c in r.iter_mut() {
            *c /= xn;
        }
    }
}

/// DD vertex enumeration for `{x ∈ R^dim : normals[k]·x ≤ offsets[k]}`.
pub(crate) fn enumerate_vertices(
    dim: usize,
    normals: &[Vec<f64>],
    offsets: &[f64],
) -> Result<VertexEnumeration> {
    let m = normals.len();
    if m != offsets.len() {
        return Err(Error::InvalidInput("normals and offsets differ in length".into()));
    }
    if offsets.iter().any(|&b| !(b > 0.0) || !b.is_finite()) {
        return Err(Error::DegenerateBody(
            "support numbers must be strictly positive".into(),
        ));
    }
    let d = dim + 1;
    let bmax = offsets.iter().copied().fold(0.0, f64::max);
    let row = |k: usize| -> Vec<f64> {
        if k == m {
            let mut r = vec![0.0; d];
            r[0] = 1.0;
            r
        } else {
            let mut r = Vec::with_capacity(d);
            r.push(offsets[k]);
            r.extend(normals[k].iter().map(|a| -a));
            r
        }
    };
    let rows: Vec<Vec<f64>> = (0..=m).map(row).collect();
    let eval = |k: usize, ray: &[f64]| dot(&rows[k], ray);
    let tol_for = |ray: &[f64]| ZERO_TOL * (ray[0] * bmax + norm(&ray[1..]));

    // Greedy choice of `dim` well-conditioned normals for the initial cone.
    let mut picked: Vec<usize> = Vec::with_capacity(dim);
    let mut qs: Vec<Vec<f64>> = Vec::with_capacity(dim);
    for _ in 0..dim {
        let mut best: Option<(usize, f64)> = None;
        for (k, a) in normals.iter().enumerate() {
            if picked.contains(&k) {
                continue;
            }
            let mut r = a.clone();
            for q in &qs {
                let c = dot(&r, q);
                linalg::axpy(&mut r, -c, q);
            }
            let rn = norm(&r);
            if best.is_none_or(|(_, b)| rn > b) {
                best = Some((k, rn));
            }
        }
        match best {
            Some((k, rn)) if rn > 1e-9 => {
                let mut r = normals[k].clone();
                for q in &qs {
                    let c = dot(&r, q);
                    linalg::axpy(&mut r, -c, q);
                }
                qs.push(linalg::scaled(&r, 1.0 / norm(&r)));
                picked.push(k);
            }
            _ => {
                return Err(Error::NonSpanning {
                    dim,
                    rank: picked.len(),
                })
            }
        }
    }
    let mut init_rows = picked.clone();
    init_rows.push(m);
    let mut a = vec![0.0; d * d];
    for (i, &k) in init_rows.iter().enumerate() {
        a[i * d..(i + 1) * d].copy_from_slice(&rows[k]);
    }
    let inv = linalg::inverse(&a, d)
        .ok_or_else(|| Error::DegenerateBody("singular initial cone".into()))?;

    let nbits = m + 1;
    let mut processed = BitSet::new(nbits);
    for &k in &init_rows {
        processed.insert(k);
    }
    let mut rays: Vec<Ray> = (0..d)
        .map(|j| {
            let mut coords: Vec<f64> = (0..d).map(|i| inv[i * d + j]).collect();
            normalize_ray(&mut coords);
            let mut zeros = BitSet::new(nbits);
            for (i, &k) in init_rows.iter().enumerate() {
                if i != j {
                    zeros.insert(k);
                }
            }
            Ray { coords, zeros }
        })
        .collect();

    // Antipodes of the initial normals first: the cone is bounded after them.
    let mut order: Vec<usize> = Vec::with_capacity(m);
    let mut queued = vec![false; m];
    for &k in &picked {
        queued[k] = true;
    }
    for &k in &picked {
        if let Some(j) = (0..m).find(|&j| {
            !queued[j] && normals[j].iter().zip(&normals[k]).all(|(x, y)| (x + y).abs() < 1e-12)
        }) {
            queued[j] = true;
            order.push(j);
        }
    }
    for (k, q) in queued.iter().enumerate() {
        if !q {
            order.push(k);
        }
    }

    let mut processed_list: Vec<usize> = init_rows.clone();
    for &k in &order {
        let vals: Vec<f64> = rays.iter().map(|r| eval(k, &r.coords)).collect();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut zer = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            let t = tol_for(&r.coords);
            if vals[i] > t {
                pos.push(i);
            } else if vals[i] < -t {
                neg.push(i);
            } else {
                zer.push(i);
            }
        }
        processed.insert(k);
        processed_list.push(k);
        if neg.is_empty() {
            for &i in &zer {
                rays[i].zeros.insert(k);
            }
            continue;
        }
        let mut fresh: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                if rays[p].zeros.intersection_count(&rays[q].zeros) + 2 < d as u32 {
                    continue;
                }
                let common = rays[p].zeros.intersection(&rays[q].zeros);
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(w, rw)| w != p && w != q && rw.zeros.is_superset_of(&common));
                if blocked {
                    continue;
                }
                let (vp, vq) = (vals[p], vals[q]);
                let mut coords: Vec<f64> = rays[q]
                    .coords
                    .iter()
                    .zip(&rays[p].coords)
                    .map(|(cq, cp)| vp * cq - vq * cp)
                    .collect();
                normalize_ray(&mut coords);
                let t = tol_for(&coords);
                let mut zeros = BitSet::new(nbits);
                for &j in &processed_list {
                    if j == k || eval(j, &coords).abs() <= t {
                        zeros.insert(j);
                    }
                }
                let dup = fresh
                    .iter_mut()
                    .find(|f| same_ray(&f.coords, &coords, bmax));
                match dup {
                    Some(f) => f.zeros.union_with(&zeros),
                    None => fresh.push(Ray { coords, zeros }),
                }
            }
        }
        for &i in &zer {
            rays[i].zeros.insert(k);
        }
        let mut next: Vec<Ray> = Vec::with_capacity(pos.len() + zer.len() + fresh.len());
        let mut keep = vec![true; rays.len()];
        for &i in &neg {
            keep[i] = false;
        }
        for (i, r) in rays.into_iter().enumerate() {
            if keep[i] {
                next.push(r);
            }
        }
        for f in fresh {
            match next.iter_mut().find(|r| same_ray(&r.coords, &f.coords, bmax)) {
                Some(r) => r.zeros.union_with(&f.zeros),
                None => next.push(f),
            }
        }
        rays = next;
    }

    let mut vertices: Vec<Vec<f64>> = Vec::with_capacity(rays.len());
    for r in &rays {
        if (r.coords[0] - 1.0).abs() > 1e-9 {
            return Err(Error::DegenerateBody(format!(
                "halfspace intersection is unbounded (ray with s = {:e})",
                r.coords[0]
            )));
        }
        let x = r.coords[1..].to_vec();
        if !vertices.iter().any(|v| same_point(v, &x, bmax)) {
            vertices.push(x);
        }
    }
    let radius = vertices.iter().map(|v| norm(v)).fold(0.0, f64::max);
    let incidence = vertices
        .iter()
        .map(|x| {
            let t = ZERO_TOL * (bmax + norm(x));
            (0..m)
                .filter(|&k| (offsets[k] - dot(&normals[k], x)).abs() <= t)
                .collect()
        })
        .collect();
    Ok(VertexEnumeration {
        vertices,
        incidence,
        radius,
    })
}

fn same_point(a: &[f64], b: &[f64], scale: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-9 * scale.max(1e-300))
}

fn same_ray(a: &[f64], b: &[f64], bmax: f64) -> bool {
    // finite rays have s = 1; directions have unit x-part
    if (a[0] == 1.0) != (b[0] == 1.0) {
        return false;
    }
    let scale = if a[0] == 1.0 { bmax } else { 1.0 };
    a[1..]
        .iter()
        .zip(&b[1..])
        .all(|(x, y)| (x - y).abs() <= 1e-9 * scale)
}

/// Orthonormal basis of the affine hull of `points[idx]`, absolute tolerance.
fn affine_basis(points: &[Vec<f64>], idx: &[usize], tol: f64) -> Vec<Vec<f64>> {
    let base = &points[idx[0]];
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut work: Vec<Vec<f64>> = idx[1..].iter().map(|&i| linalg::sub(&points[i], base)).collect();
    loop {
        let mut best: Option<(usize, f64)> = None;
        for (i, w) in work.iter().enumerate() {
            let wn = norm(w);
            if best.is_none_or(|(_, b)| wn > b) {
                best = Some((i, wn));
            }
        }
        match best {
            Some((i, wn)) if wn > tol => {
                let q = linalg::scaled(&work[i], 1.0 / wn);
                work.swap_remove(i);
                for w in work.iter_mut() {
                    let c = dot(w, &q);
                    linalg::axpy(w, -c, &q);
                }
                basis.push(q);
            }
            _ => break,
        }
    }
    basis
}

pub(crate) struct FaceLattice<'a> {
    pub vertices: &'a [Vec<f64>],
    pub incidence: &'a [Vec<usize>],
    /// absolute length tolerance for affine-dimension tests
    pub tol: f64,
}

impl<'a> FaceLattice<'a> {
    pub fn new(v: &'a VertexEnumeration) -> Self {
        FaceLattice {
            vertices: &v.vertices,
            incidence: &v.incidence,
            tol: 1e-9 * v.radius.max(1e-300),
        }
    }

    pub fn affine_dim(&self, idx: &[usize]) -> usize {
        if idx.is_empty() {
            return 0;
        }
        affine_basis(self.vertices, idx, self.tol).len()
    }

    /// Vertices lying on constraint `k`.
    pub fn face_of(&self, k: usize) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&i| self.incidence[i].binary_search(&k).is_ok())
            .collect()
    }

    /// `d`-volume of the face spanned by `idx` (which must be `d`-dimensional).
    /// When `ridges` is given, each codimension-one subface is reported
    /// once as `(constraint, volume)`.
    pub fn face_volume(
        &self,
        idx: &[usize],
        d: usize,
        mut ridges: Option<&mut Vec<(usize, f64)>>,
    ) -> f64 {
        match d {
            0 => {
                return 1.0;
            }
            1 => {
                let mut best = 0.0;
                for (a, &i) in idx.iter().enumerate() {
                    for &j in &idx[a + 1..] {
                        let dd = linalg::distance(&self.vertices[i], &self.vertices[j]);
                        if dd > best {
                            best = dd;
                        }
                    }
                }
                if let Some(r) = ridges.as_deref_mut() {
                    self.report_endpoints(idx, r);
                }
                return best;
            }
            _ => {}
        }
        let dimf = self.vertices[0].len();
        let mut centroid = vec![0.0; dimf];
        for &i in idx {
            linalg::axpy(&mut centroid, 1.0, &self.vertices[i]);
        }
        for c in centroid.iter_mut() {
            *c /= idx.len() as f64;
        }
        let mut subfaces: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut cands: Vec<usize> = idx.iter().flat_map(|&i| self.incidence[i].iter().copied()).collect();
        cands.sort_unstable();
        cands.dedup();
        for c in cands {
            let t: Vec<usize> = idx
                .iter()
                .copied()
                .filter(|&i| self.incidence[i].binary_search(&c).is_ok())
                .collect();
            if t.len() < d || t.len() == idx.len() {
                continue;
            }
            subfaces.entry(t).or_insert(c);
        }
        let mut vol = 0.0;
        for (t, c) in subfaces {
            let basis = affine_basis(self.vertices, &t, self.tol);
            if basis.len() != d - 1 {
                continue;
            }
            let mut off = linalg::sub(&centroid, &self.vertices[t[0]]);
            for q in &basis {
                let a = dot(&off, q);
                linalg::axpy(&mut off, -a, q);
            }
            let h = norm(&off);
            let sub = self.face_volume(&t, d - 1, None);
            if let Some(r) = ridges.as_deref_mut() {
                r.push((c, sub));
            }
            vol += h * sub / d as f64;
        }
        vol
    }

    fn report_endpoints(&self, idx: &[usize], out: &mut Vec<(usize, f64)>) {
        // 1-dimensional face: the subfaces are its two endpoints
        let own: Vec<usize> = self.common_constraints(idx);
        let mut seen: Vec<usize> = Vec::new();
        for &i in idx {
            if let Some(&c) = self.incidence[i].iter().find(|c| !own.contains(c)) {
                if !seen.contains(&i) && !out.iter().any(|(k, _)| *k == c) {
                    seen.push(i);
                    out.push((c, 1.0));
                }
            }
        }
    }

    fn common_constraints(&self, idx: &[usize]) -> Vec<usize> {
        let mut own = self.incidence[idx[0]].clone();
        for &i in &idx[1..] {
            own.retain(|c| self.incidence[i].binary_search(c).is_ok());
        }
        own
    }
}

/// Facet normals and support numbers of `conv{±p : p ∈ points}`, via vertex
/// enumeration of the polar body. Points must span R^dim.
pub(crate) fn symmetric_hull_facets(
    dim: usize,
    points: &[Vec<f64>],
) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let mut normals = Vec::with_capacity(2 * points.len());
    let mut offsets = Vec::with_capacity(2 * points.len());
    let scale = points.iter().map(|p| norm(p)).fold(0.0, f64::max);
    for p in points {
        let pn = norm(p);
        if pn <= 1e-12 * scale {
            continue;
        }
        let u = linalg::scaled(p, 1.0 / pn);
        let neg = linalg::scaled(&u, -1.0);
        normals.push(u);
        offsets.push(1.0 / pn);
        normals.push(neg);
        offsets.push(1.0 / pn);
    }
    let polar = enumerate_vertices(dim, &normals, &offsets)?;
    let mut out_n = Vec::with_capacity(polar.vertices.len());
    let mut out_b = Vec::with_capacity(polar.vertices.len());
    for y in &polar.vertices {
        let yn = norm(y);
        out_n.push(linalg::scaled(y, 1.0 / yn));
        out_b.push(1.0 / yn);
    }
    Ok((out_n, out_b))
}
