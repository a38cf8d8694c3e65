//! Small dense linear algebra on `f64` slices.
//!
//! Everything here is sized for the dimensions this crate works in
//! (n ≤ 4 ambient, a few dozen unknowns in the solver), so the routines are
//! plain textbook versions without blocking.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::sqrt;

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    sqrt(dot(a, a))
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scaled(a: &[f64], c: f64) -> Vec<f64> {
    a.iter().map(|x| x * c).collect()
}

/// `y += c * x`
#[inline]
pub fn axpy(y: &mut [f64], c: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += c * xi;
    }
}

pub fn normalized(a: &[f64]) -> Option<Vec<f64>> {
    let n = norm(a);
    if n > 0.0 && n.is_finite() {
        Some(a.iter().map(|x| x / n).collect())
    } else {
        None
    }
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

/// Square matrix-vector product, `m` row-major `n × n`.
pub fn mat_vec(m: &[f64], x: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n).map(|i| dot(&m[i * n..(i + 1) * n], x)).collect()
}

/// Orthonormalize `vectors` by modified Gram–Schmidt with pivoting on the
/// largest remaining residual. Vectors whose residual falls below
/// `tol * max_norm` are treated as dependent.
pub fn orthonormal_basis(vectors: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let scale = vectors.iter().map(|v| norm(v)).fold(0.0, f64::max);
    if scale == 0.0 {
        return Vec::new();
    }
    let mut work: Vec<Vec<f64>> = vectors.to_vec();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let dim = vectors[0].len();
    while basis.len() < dim {
        let (best, best_norm) = work
            .iter()
            .enumerate()
            .map(|(i, v)| (i, norm(v)))
            .fold((usize::MAX, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best == usize::MAX || best_norm <= tol * scale {
            break;
        }
        let q = scaled(&work[best], 1.0 / best_norm);
        work.swap_remove(best);
        for v in work.iter_mut() {
            let c = dot(v, &q);
            axpy(v, -c, &q);
        }
        basis.push(q);
    }
    basis
}

pub fn rank(vectors: &[Vec<f64>], tol: f64) -> usize {
    orthonormal_basis(vectors, tol).len()
}

/// Orthonormal basis of the orthogonal complement of span(`basis`) in R^dim.
/// `basis` must itself be orthonormal.
pub fn orthogonal_complement(basis: &[Vec<f64>], dim: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = basis.to_vec();
    let start = out.len();
    // Feed unit vectors in order of how far they stick out of the current span.
    let mut candidates: Vec<Vec<f64>> = (0..dim)
        .map(|i| {
            let mut e = vec![0.0; dim];
            e[i] = 1.0;
            e
        })
        .collect();
    while out.len() < dim {
        let mut best: Option<(usize, Vec<f64>, f64)> = None;
        for (i, e) in candidates.iter().enumerate() {
            let mut r = e.clone();
            for q in &out {
                let c = dot(&r, q);
                axpy(&mut r, -c, q);
            }
            let rn = norm(&r);
            if best.as_ref().is_none_or(|b| rn > b.2) {
                best = Some((i, r, rn));
            }
        }
        let (i, mut r, rn) = best.expect("dimension bookkeeping");
        candidates.swap_remove(i);
        for x in r.iter_mut() {
            *x /= rn;
        }
        // one re-orthogonalization pass
        for q in &out {
            let c = dot(&r, q);
            axpy(&mut r, -c, q);
        }
        let rn = norm(&r);
        for x in r.iter_mut() {
            *x /= rn;
        }
        out.push(r);
    }
    out.split_off(start)
}

/// Solve `a x = b` for square row-major `a` by Gaussian elimination with
/// partial pivoting. Returns `None` when a pivot falls below `1e-300`.
pub fn solve(a: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m = a.to_vec();
    let mut x = b.to_vec();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i * n + col].abs().total_cmp(&m[j * n + col].abs()))
            .unwrap();
        if m[piv * n + col].abs() < 1e-300 {
            return None;
        }
        if piv != col {
            for k in 0..n {
                m.swap(col * n + k, piv * n + k);
            }
            x.swap(col, piv);
        }
        let d = m[col * n + col];
        for r in col + 1..n {
            let f = m[r * n + col] / d;
            if f != 0.0 {
                for k in col..n {
                    m[r * n + k] -= f * m[col * n + k];
                }
                x[r] -= f * x[col];
            }
        }
    }
    for col in (0..n).rev() {
        let mut s = x[col];
        for k in col + 1..n {
            s -= m[col * n + k] * x[k];
        }
        x[col] = s / m[col * n + col];
    }
    Some(x)
}

/// Inverse of a square row-major matrix.
pub fn inverse(a: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut inv = vec![0.0; n * n];
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        let col = solve(a, &e)?;
        for i in 0..n {
            inv[i * n + j] = col[i];
        }
    }
    Some(inv)
}

pub fn determinant(a: &[f64], n: usize) -> f64 {
    let mut m = a.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i * n + col].abs().total_cmp(&m[j * n + col].abs()))
            .unwrap();
        if m[piv * n + col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            for k in 0..n {
                m.swap(col * n + k, piv * n + k);
            }
            det = -det;
        }
        let d = m[col * n + col];
        det *= d;
        for r in col + 1..n {
            let f = m[r * n + col] / d;
            for k in col..n {
                m[r * n + k] -= f * m[col * n + k];
            }
        }
    }
    det
}

/// Cholesky solve of a symmetric positive definite system. `None` if the
/// matrix is not numerically positive definite.
pub fn cholesky_solve(a: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if !(s > 0.0) {
                    return None;
                }
                l[i * n + i] = sqrt(s);
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * n + k] * y[k];
        }
        y[i] = s / l[i * n + i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[k * n + i] * x[k];
        }
        x[i] = s / l[i * n + i];
    }
    Some(x)
}

/// Eigenvalues of a symmetric row-major matrix by cyclic Jacobi rotations,
/// sorted ascending.
pub fn symmetric_eigenvalues(a: &[f64], n: usize) -> Vec<f64> {
    let mut m = a.to_vec();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i * n + j] * m[i * n + j])
            .sum();
        let diag: f64 = (0..n).map(|i| m[i * n + i] * m[i * n + i]).sum();
        if off <= 1e-30 * diag.max(1e-300) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Singular values (ascending) of the matrix whose columns are `columns`.
pub fn singular_values(columns: &[Vec<f64>]) -> Vec<f64> {
    let k = columns.len();
    let mut gram = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            gram[i * k + j] = dot(&columns[i], &columns[j]);
        }
    }
    symmetric_eigenvalues(&gram, k)
        .into_iter()
        .map(|e| sqrt(e.max(0.0)))
        .collect()
}

/// Sines of the principal angles between two subspaces given by orthonormal
/// bases of equal size; the largest entry is the subspace distance.
pub fn principal_angle_sines(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<f64> {
    // cosines are singular values of Aᵀ B
    let cols: Vec<Vec<f64>> = b
        .iter()
        .map(|bj| a.iter().map(|ai| dot(ai, bj)).collect())
        .collect();
    singular_values(&cols)
        .into_iter()
        .map(|c| sqrt((1.0 - c * c).max(0.0)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_and_inverse_round_trip() {
        let a = [4.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 2.0];
        let x = solve(&a, &[1.0, 2.0, 3.0]).unwrap();
        let back = mat_vec(&a, &x);
        for (u, v) in back.iter().zip([1.0, 2.0, 3.0]) {
            assert!((u - v).abs() < 1e-12);
        }
        let inv = inverse(&a, 3).unwrap();
        assert!((determinant(&a, 3) * determinant(&inv, 3) - 1.0).abs() < 1e-12);
        assert!(cholesky_solve(&a, &[1.0, 2.0, 3.0]).is_some());
        assert!(cholesky_solve(&[1.0, 2.0, 2.0, 1.0], &[1.0, 1.0]).is_none());
    }

    #[test]
    fn jacobi_eigenvalues_of_known_matrix() {
        let ev = symmetric_eigenvalues(&[2.0, 1.0, 1.0, 2.0], 2);
        assert!((ev[0] - 1.0).abs() < 1e-13 && (ev[1] - 3.0).abs() < 1e-13);
    }

    #[test]
    fn complement_is_orthonormal() {
        let b = orthonormal_basis(&[vec![1.0, 1.0, 0.0]], 1e-12);
        let c = orthogonal_complement(&b, 3);
        assert_eq!(c.len(), 2);
        for q in &c {
            assert!((norm(q) - 1.0).abs() < 1e-14);
            assert!(dot(q, &b[0]).abs() < 1e-14);
        }
        assert!(dot(&c[0], &c[1]).abs() < 1e-14);
    }

    #[test]
    fn rank_detects_dependence() {
        let v = [vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![1.0, 1.0, 0.0]];
        assert_eq!(rank(&v, 1e-12), 2);
    }
}
