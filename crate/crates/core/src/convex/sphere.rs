//! Deterministic quasi-uniform direction sets on the upper hemisphere.
//! Every direction stands for an antipodal pair, so half the sphere suffices.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::normalized;
use crate::math::{ceil, cos, powf, sin, sqrt};

const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;

/// About `m` unit vectors covering one hemisphere of S^{dim-1}.
pub fn hemisphere_grid(dim: usize, m: usize) -> Vec<Vec<f64>> {
    let m = m.max(1);
    match dim {
        0 => Vec::new(),
        1 => vec![vec![1.0]],
        2 => (0..m)
            .map(|k| {
                let a = core::f64::consts::PI * k as f64 / m as f64;
                vec![cos(a), sin(a)]
            })
            .collect(),
        3 => (0..m)
            .map(|k| {
                let z = (k as f64 + 0.5) / m as f64;
                let r = sqrt((1.0 - z * z).max(0.0));
                let a = GOLDEN_ANGLE * k as f64;
                vec![r * cos(a), r * sin(a), z]
            })
            .collect(),
        _ => cube_face_grid(dim, m),
    }
}

/// Points on the positive faces of the cube `[-1,1]^dim`, radially projected.
fn cube_face_grid(dim: usize, m: usize) -> Vec<Vec<f64>> {
    let per_face = (m as f64 / dim as f64).max(1.0);
    let r = ceil(powf(per_face, 1.0 / (dim - 1) as f64)).max(1.0) as usize;
    let mut out = Vec::new();
    let mut idx = vec![0usize; dim - 1];
    for face in 0..dim {
        idx.iter_mut().for_each(|i| *i = 0);
        loop {
            let mut p = vec![0.0; dim];
            let mut j = 0;
            for (c, slot) in p.iter_mut().enumerate() {
                if c == face {
                    *slot = 1.0;
                } else {
                    *slot = -1.0 + (2 * idx[j] + 1) as f64 / r as f64;
                    j += 1;
                }
            }
            if let Some(u) = normalized(&p) {
                out.push(u);
            }
            let mut k = 0;
            while k < dim - 1 {
                idx[k] += 1;
                if idx[k] < r {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == dim - 1 {
                break;
            }
        }
    }
    out
}

/// Default grid size used for support-function comparisons.
pub fn default_grid_size(dim: usize) -> usize {
    match dim {
        0 | 1 => 1,
        2 => 720,
        3 => 2000,
        _ => 2048,
    }
}
