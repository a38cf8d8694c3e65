//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use logbm_core::{Direction, SymmetricPolytope};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 {
            return v.iter().map(|x| x / n).collect();
        }
    }
}

pub fn random_polytope(rng: &mut ChaCha8Rng, dim: usize, pairs: usize) -> SymmetricPolytope {
    loop {
        let normals: Vec<Direction> = (0..pairs)
            .map(|_| Direction::new(&random_unit(rng, dim)).unwrap())
            .collect();
        let supports: Vec<f64> = (0..pairs).map(|_| rng.random_range(0.5..2.0)).collect();
        if let Ok(p) = logbm_core::wulff_shape(&normals, &supports) {
            return p;
        }
    }
}

pub fn random_rotation(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    let mut cols: Vec<Vec<f64>> = Vec::new();
    while cols.len() < dim {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        for q in &cols {
            let c: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 {
            cols.push(v.iter().map(|x| x / n).collect());
        }
    }
    let mut r = vec![0.0; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            r[i * dim + j] = cols[j][i];
        }
    }
    r
}

fn det(m: &mut [Vec<f64>]) -> f64 {
    let n = m.len();
    let mut d = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs()))
            .unwrap();
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= m[c][c];
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    d
}

fn solve_square(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(r, &x)| {
            let mut r = r.clone();
            r.push(x);
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| m[x][c].abs().total_cmp(&m[y][c].abs()))?;
        if m[p][c].abs() < 1e-12 {
            return None;
        }
        m.swap(p, c);
        for r in 0..n {
            if r != c {
                let f = m[r][c] / m[c][c];
                for k in c..=n {
                    m[r][k] -= f * m[c][k];
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n] / m[i][i]).collect())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
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
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Halfspaces `±u_i · x ≤ h_i` of a symmetric polytope.
pub fn halfspaces(p: &SymmetricPolytope) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (u, &h) in p.normals().iter().zip(p.supports()) {
        a.push(u.coords().to_vec());
        a.push(u.coords().iter().map(|x| -x).collect());
        b.push(h);
        b.push(h);
    }
    (a, b)
}

/// Vertices by solving every `dim`-subset of constraints.
pub fn brute_force_vertices(dim: usize, a: &[Vec<f64>], b: &[f64]) -> Vec<Vec<f64>> {
    let scale = b.iter().cloned().fold(0.0, f64::max);
    let mut out: Vec<Vec<f64>> = Vec::new();
    for sub in combinations(a.len(), dim) {
        let rows: Vec<Vec<f64>> = sub.iter().map(|&i| a[i].clone()).collect();
        let rhs: Vec<f64> = sub.iter().map(|&i| b[i]).collect();
        let Some(x) = solve_square(&rows, &rhs) else { continue };
        let feasible = a
            .iter()
            .zip(b)
            .all(|(r, &bi)| r.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>() <= bi + 1e-9 * scale);
        if feasible && !out.iter().any(|y| y.iter().zip(&x).all(|(p, q)| (p - q).abs() < 1e-8 * scale)) {
            out.push(x);
        }
    }
    out
}

/// Volume by a pulling triangulation of the vertex set.
pub fn triangulation_volume(dim: usize, a: &[Vec<f64>], b: &[f64], verts: &[Vec<f64>]) -> f64 {
    let scale = b.iter().cloned().fold(0.0, f64::max);
    let tight: Vec<Vec<usize>> = verts
        .iter()
        .map(|x| {
            (0..a.len())
                .filter(|&k| (a[k].iter().zip(x).map(|(p, q)| p * q).sum::<f64>() - b[k]).abs() < 1e-8 * scale)
                .collect()
        })
        .collect();
    let all: Vec<usize> = (0..verts.len()).collect();
    let mut simplices = Vec::new();
    pull(&all, dim, &tight, verts, &mut simplices);
    let mut fact = 1.0;
    for i in 2..=dim {
        fact *= i as f64;
    }
    simplices
        .iter()
        .map(|s| {
            let mut m: Vec<Vec<f64>> = s[1..]
                .iter()
                .map(|&i| verts[i].iter().zip(&verts[s[0]]).map(|(p, q)| p - q).collect())
                .collect();
            det(&mut m).abs() / fact
        })
        .sum()
}

fn affine_rank(idx: &[usize], verts: &[Vec<f64>]) -> usize {
    let base = &verts[idx[0]];
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for &i in &idx[1..] {
        let mut v: Vec<f64> = verts[i].iter().zip(base).map(|(p, q)| p - q).collect();
        for q in &basis {
            let c: f64 = v.iter().zip(q).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-8 {
            basis.push(v.iter().map(|x| x / n).collect());
        }
    }
    basis.len()
}

fn pull(face: &[usize], d: usize, tight: &[Vec<usize>], verts: &[Vec<f64>], out: &mut Vec<Vec<usize>>) {
    if d == 0 {
        out.push(vec![face[0]]);
        return;
    }
    let apex = face[0];
    let mut seen: Vec<Vec<usize>> = Vec::new();
    let mut cands: Vec<usize> = face.iter().flat_map(|&i| tight[i].clone()).collect();
    cands.sort();
    cands.dedup();
    for c in cands {
        if tight[apex].contains(&c) {
            continue;
        }
        let sub: Vec<usize> = face.iter().copied().filter(|&i| tight[i].contains(&c)).collect();
        if sub.len() < d || seen.contains(&sub) || affine_rank(&sub, verts) != d - 1 {
            continue;
        }
        seen.push(sub.clone());
        let mut low = Vec::new();
        pull(&sub, d - 1, tight, verts, &mut low);
        for mut s in low {
            s.push(apex);
            out.push(s);
        }
    }
}

/// Shoelace area of a planar polygon given in any vertex order.
pub fn shoelace(points: &[Vec<f64>]) -> f64 {
    let cx = points.iter().map(|p| p[0]).sum::<f64>() / points.len() as f64;
    let cy = points.iter().map(|p| p[1]).sum::<f64>() / points.len() as f64;
    let mut pts = points.to_vec();
    pts.sort_by(|p, q| (p[1] - cy).atan2(p[0] - cx).total_cmp(&(q[1] - cy).atan2(q[0] - cx)));
    let mut s = 0.0;
    for i in 0..pts.len() {
        let j = (i + 1) % pts.len();
        s += pts[i][0] * pts[j][1] - pts[j][0] * pts[i][1];
    }
    s.abs() / 2.0
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Second body with the same facet normals, solved from reweighted areas.
pub fn supp_matched_pair(
    rng: &mut ChaCha8Rng,
    dim: usize,
    pairs: usize,
) -> (SymmetricPolytope, SymmetricPolytope) {
    loop {
        let k0 = random_polytope(rng, dim, pairs);
        let entries: Vec<(Direction, f64)> = k0
            .normals()
            .iter()
            .zip(k0.facet_areas())
            .map(|(u, a)| (u.clone(), a * rng.random_range(-1.0f64..1.0).exp()))
            .collect();
        let target = logbm_core::EvenDiscreteMeasure::new(dim, entries).unwrap();
        let Ok(sol) = logbm_core::solve_even_minkowski(&target, 1e-12, 10_000) else {
            continue;
        };
        if sol.body.normals().len() == k0.normals().len() {
            return (k0, sol.body);
        }
    }
}
