//! Seeded random bodies for experiments.

use logbm_core::convex::sphere::hemisphere_grid;
use logbm_core::linalg;
use logbm_core::{Direction, EvenDiscreteMeasure, SymmetricPolytope, Zonotope};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{CliError, Result};

pub const MAX_ATTEMPTS: usize = 100;
pub const SUPPORT_RANGE: (f64, f64) = (0.5, 2.0);

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Per-instance seed, a splitmix64 step of `base + index`.
pub fn instance_seed(base: u64, index: u64) -> u64 {
    let mut z = base.wrapping_add(index.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo.ln()..hi.ln()).exp()
}

pub fn gaussian_unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = linalg::norm(&v);
        if norm > 1e-6 {
            return v.iter().map(|x| x / norm).collect();
        }
    }
}

/// Row-major Haar-ish rotation from Gram-Schmidt on Gaussian columns.
pub fn random_rotation(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let cols: Vec<Vec<f64>> = (0..n).map(|_| gaussian_unit(rng, n)).collect();
        let basis = linalg::orthonormal_basis(&cols, 1e-8);
        if basis.len() == n {
            let mut r = vec![0.0; n * n];
            for (j, b) in basis.iter().enumerate() {
                for i in 0..n {
                    r[i * n + j] = b[i];
                }
            }
            return r;
        }
    }
}

/// `k` directions: a rotated Fibonacci hemisphere for `n = 3`, normalized
/// Gaussians otherwise, resampled until they span.
pub fn random_directions(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<Direction> {
    loop {
        let raw: Vec<Vec<f64>> = if n == 3 {
            let r = random_rotation(rng, 3);
            hemisphere_grid(3, k).iter().map(|v| linalg::mat_vec(&r, v)).collect()
        } else {
            (0..k).map(|_| gaussian_unit(rng, n)).collect()
        };
        if linalg::rank(&raw, 1e-8) == n {
            return raw.iter().map(|v| Direction::new(v).expect("unit vector")).collect();
        }
    }
}

fn log_uniform_supports(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    (0..k).map(|_| log_uniform(rng, SUPPORT_RANGE.0, SUPPORT_RANGE.1)).collect()
}

pub fn random_symmetric_polytope(seed: u64, n: usize, k_pairs: usize) -> Result<SymmetricPolytope> {
    random_symmetric_polytope_from(&mut rng(seed), n, k_pairs)
}

/// Normals outside the active set are pruned and kept in `inactive()`.
pub fn random_symmetric_polytope_from(
    rng: &mut ChaCha8Rng,
    n: usize,
    k_pairs: usize,
) -> Result<SymmetricPolytope> {
    if k_pairs < n {
        return Err(CliError::Config(format!("need at least {n} normal pairs, got {k_pairs}")));
    }
    let mut last = None;
    for _ in 0..MAX_ATTEMPTS {
        let dirs = random_directions(rng, n, k_pairs);
        match polytope_on_normals(rng, &dirs) {
            Ok(p) => return Ok(p),
            Err(e) => {
                log::debug!("rejected random body: {e}");
                last = Some(e);
            }
        }
    }
    Err(CliError::GenerationFailed {
        attempts: MAX_ATTEMPTS,
        last: last.expect("at least one attempt"),
    })
}

/// Log-uniform supports on the given normals.
pub fn polytope_on_normals(rng: &mut ChaCha8Rng, dirs: &[Direction]) -> logbm_core::Result<SymmetricPolytope> {
    let h = log_uniform_supports(rng, dirs.len());
    logbm_core::wulff_shape(dirs, &h)
}

/// Shrinks both bodies to the normals active in both until the supports agree.
pub fn matched_on_common_normals(
    dirs: &[Direction],
    h0: &[f64],
    h1: &[f64],
) -> logbm_core::Result<(SymmetricPolytope, SymmetricPolytope)> {
    let mut dirs = dirs.to_vec();
    let mut h0 = h0.to_vec();
    let mut h1 = h1.to_vec();
    loop {
        let k0 = logbm_core::wulff_shape(&dirs, &h0)?;
        let k1 = logbm_core::wulff_shape(&dirs, &h1)?;
        let keep: Vec<usize> = (0..dirs.len())
            .filter(|&i| k0.normal_index(&dirs[i]).is_some() && k1.normal_index(&dirs[i]).is_some())
            .collect();
        if keep.len() == dirs.len() {
            return Ok((k0, k1));
        }
        dirs = keep.iter().map(|&i| dirs[i].clone()).collect();
        h0 = keep.iter().map(|&i| h0[i]).collect();
        h1 = keep.iter().map(|&i| h1[i]).collect();
    }
}

pub fn random_supp_matched_pair(
    seed: u64,
    n: usize,
    k_pairs: usize,
) -> Result<(SymmetricPolytope, SymmetricPolytope)> {
    random_supp_matched_pair_from(&mut rng(seed), n, k_pairs)
}

pub fn random_supp_matched_pair_from(
    rng: &mut ChaCha8Rng,
    n: usize,
    k_pairs: usize,
) -> Result<(SymmetricPolytope, SymmetricPolytope)> {
    if k_pairs < n {
        return Err(CliError::Config(format!("need at least {n} normal pairs, got {k_pairs}")));
    }
    let mut last = None;
    for _ in 0..MAX_ATTEMPTS {
        let dirs = random_directions(rng, n, k_pairs);
        let h0 = log_uniform_supports(rng, k_pairs);
        let h1 = log_uniform_supports(rng, k_pairs);
        match matched_on_common_normals(&dirs, &h0, &h1) {
            Ok(pair) => return Ok(pair),
            Err(e) => last = Some(e),
        }
    }
    Err(CliError::GenerationFailed {
        attempts: MAX_ATTEMPTS,
        last: last.expect("at least one attempt"),
    })
}

pub fn random_zonotope(rng: &mut ChaCha8Rng, n: usize, max_generators: usize) -> Result<Zonotope> {
    let mut last = None;
    for _ in 0..MAX_ATTEMPTS {
        let count = rng.random_range(n..=max_generators.max(n));
        let g: Vec<Vec<f64>> = (0..count)
            .map(|_| {
                let s = log_uniform(rng, SUPPORT_RANGE.0, SUPPORT_RANGE.1);
                gaussian_unit(rng, n).into_iter().map(|x| x * s).collect()
            })
            .collect();
        match Zonotope::new(g) {
            Ok(z) => return Ok(z),
            Err(e) => last = Some(e),
        }
    }
    Err(CliError::GenerationFailed {
        attempts: MAX_ATTEMPTS,
        last: last.expect("at least one attempt"),
    })
}

/// A rotated product `K = K_1 × … × K_m` of segments and polygons with
/// `L = c_1 K_1 × … × c_m K_m`.
#[derive(Clone, Debug)]
pub struct SummandPair {
    pub k: SymmetricPolytope,
    pub l: SymmetricPolytope,
    pub blocks: Vec<usize>,
    pub dilations: Vec<f64>,
    /// Block index of every normal of `k`, aligned with `k.normals()`.
    pub block_of_normal: Vec<usize>,
}

/// Factor dimensions; every option has at least two factors or a planar one.
pub fn block_partitions(n: usize) -> &'static [&'static [usize]] {
    match n {
        2 => &[&[2], &[1, 1]],
        3 => &[&[1, 1, 1], &[2, 1]],
        4 => &[&[1, 1, 1, 1], &[2, 1, 1], &[2, 2]],
        _ => &[],
    }
}

pub fn random_summand_pair(rng: &mut ChaCha8Rng, n: usize, require_planar: bool) -> Result<SummandPair> {
    let options: Vec<&[usize]> = block_partitions(n)
        .iter()
        .copied()
        .filter(|p| !require_planar || p.contains(&2))
        .collect();
    if options.is_empty() {
        return Err(CliError::Config(format!("no block partition for dimension {n}")));
    }
    let blocks = options[rng.random_range(0..options.len())].to_vec();
    let mut normals: Vec<Vec<f64>> = Vec::new();
    let mut supports = Vec::new();
    let mut owner = Vec::new();
    let mut dilations = Vec::new();
    let mut offset = 0;
    for (b, &d) in blocks.iter().enumerate() {
        let (local_normals, local_supports) = if d == 1 {
            (vec![vec![1.0]], vec![log_uniform(rng, SUPPORT_RANGE.0, SUPPORT_RANGE.1)])
        } else {
            let poly = loop {
                let pairs = rng.random_range(3..=5);
                let p = random_symmetric_polytope_from(rng, 2, pairs)?;
                if p.normals().len() >= 3 {
                    break p;
                }
            };
            (
                poly.normals().iter().map(|u| u.coords().to_vec()).collect(),
                poly.supports().to_vec(),
            )
        };
        for (u, h) in local_normals.into_iter().zip(local_supports) {
            let mut v = vec![0.0; n];
            v[offset..offset + d].copy_from_slice(&u);
            normals.push(v);
            supports.push(h);
            owner.push(b);
        }
        dilations.push(log_uniform(rng, 0.5, 2.0));
        offset += d;
    }
    let r = random_rotation(rng, n);
    let dirs: Vec<Direction> = normals
        .iter()
        .map(|v| Direction::new(&linalg::mat_vec(&r, v)))
        .collect::<logbm_core::Result<_>>()?;
    let l_supports: Vec<f64> = supports.iter().zip(&owner).map(|(h, &b)| h * dilations[b]).collect();
    let k = logbm_core::wulff_shape(&dirs, &supports)?;
    let l = logbm_core::wulff_shape(&dirs, &l_supports)?;
    let block_of_normal = k
        .normals()
        .iter()
        .map(|u| {
            let i = logbm_core::convex::find_direction(&dirs, u, logbm_core::convex::DIRECTION_TOL)
                .expect("normal of the product");
            owner[i]
        })
        .collect();
    Ok(SummandPair {
        k,
        l,
        blocks,
        dilations,
        block_of_normal,
    })
}

/// Scales the area of one facet of a planar factor of `L` by `factor` and
/// re-solves for `L`.
pub fn perturb_planar_factor(
    pair: &SummandPair,
    rng: &mut ChaCha8Rng,
    factor: f64,
    tol: f64,
) -> Result<SymmetricPolytope> {
    let planar: Vec<usize> = (0..pair.k.normals().len())
        .filter(|&i| pair.blocks[pair.block_of_normal[i]] == 2)
        .collect();
    if planar.is_empty() {
        return Err(CliError::Config("pair has no planar factor".into()));
    }
    let pick = planar[rng.random_range(0..planar.len())];
    let s = logbm_core::surface_area_measure(&pair.l);
    let entries: Vec<(Direction, f64)> = pair
        .k
        .normals()
        .iter()
        .enumerate()
        .map(|(i, u)| {
            let w = s.weight_at(u).expect("same normals");
            (u.clone(), if i == pick { w * factor } else { w })
        })
        .collect();
    let target = EvenDiscreteMeasure::new(pair.k.dim(), entries)?;
    Ok(logbm_core::solve_even_minkowski(&target, tol, 10_000)?.body)
}

/// Direction sets spread over orthogonal blocks of the given dimensions,
/// rotated together. Each block of dimension `d > 1` gets the `d` block
/// axes plus at least one generic vector in `Ω`, so its members connect.
pub fn block_direction_sets(rng: &mut ChaCha8Rng, dims: &[usize]) -> (Vec<Direction>, Vec<Direction>) {
    let n: usize = dims.iter().sum();
    let r = random_rotation(rng, n);
    let mut big = Vec::new();
    let mut small = Vec::new();
    let mut offset = 0;
    for &d in dims {
        let counts = [d + rng.random_range(1..3), d + rng.random_range(0..2)];
        for (set, count) in [&mut big, &mut small].into_iter().zip(counts) {
            let mut local: Vec<Vec<f64>> = (0..d)
                .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                .collect();
            if d > 1 {
                local.extend((d..count).map(|_| gaussian_unit(rng, d)));
            }
            for l in local {
                let mut v = vec![0.0; n];
                v[offset..offset + d].copy_from_slice(&l);
                set.push(Direction::new(&linalg::mat_vec(&r, &v)).expect("unit vector"));
            }
        }
        offset += d;
    }
    (big, small)
}
