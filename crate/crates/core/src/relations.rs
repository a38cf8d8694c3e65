//! Equivalence classes of direction sets under non-orthogonality.
//!
//! For spanning sets `Ω` and `ω`, write `v ⋈ u` when `v·u ≠ 0`. Connected
//! components of the bipartite graph `Ω ⋈ ω` give classes whose spans
//! `V_i = span(Ω ∩ class_i)` and `U_i = span(ω ∩ class_i)` decompose R^n as
//! direct sums, with `V_i ⊥ U_j` whenever `i ≠ j`.

use alloc::format;
use alloc::vec::Vec;

use crate::convex::{find_direction, Direction, SymmetricPolytope, DIRECTION_TOL};
use crate::linalg::{self, dot, norm};
use crate::{Error, Result};

/// `|v·u| ≤ ORTH_TOL` counts as orthogonal.
pub const ORTH_TOL: f64 = 1e-9;

/// Relative tolerance for "φ is constant on a class".
pub const PHI_TOL: f64 = 1e-7;

/// Tolerance on inner products of class bases across classes.
const BASIS_ORTH_TOL: f64 = 1e-7;

#[derive(Clone, Debug)]
pub struct DirectionClass {
    pub members: Vec<Direction>,
    /// Orthonormal basis of the span of `members`.
    pub basis: Vec<Vec<f64>>,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub dim: usize,
    /// Classes of `Ω`, index-aligned with `classes_u`.
    pub classes_v: Vec<DirectionClass>,
    pub classes_u: Vec<DirectionClass>,
}

impl Decomposition {
    pub fn i0(&self) -> usize {
        self.classes_v.len()
    }

    /// Class index of a member of `Ω`.
    pub fn class_of(&self, v: &Direction) -> Option<usize> {
        self.classes_v
            .iter()
            .position(|c| find_direction(&c.members, v, DIRECTION_TOL).is_some())
    }
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: alloc::vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            core::cmp::Ordering::Less => self.parent[ra] = rb,
            core::cmp::Ordering::Greater => self.parent[rb] = ra,
            core::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

fn coords(set: &[Direction]) -> Vec<Vec<f64>> {
    set.iter().map(|d| d.coords().to_vec()).collect()
}

fn span(members: &[Direction]) -> Vec<Vec<f64>> {
    linalg::orthonormal_basis(&coords(members), 1e-10)
}

pub fn decompose(
    omega_big: &[Direction],
    omega_small: &[Direction],
    orth_tol: f64,
) -> Result<Decomposition> {
    let dim = omega_big
        .first()
        .or(omega_small.first())
        .map(Direction::dim)
        .ok_or(Error::NonSpanning { dim: 0, rank: 0 })?;
    for d in omega_big.iter().chain(omega_small) {
        if d.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: d.dim(),
            });
        }
    }
    for set in [omega_big, omega_small] {
        let rank = linalg::rank(&coords(set), 1e-10);
        if rank < dim {
            return Err(Error::NonSpanning { dim, rank });
        }
    }
    let nb = omega_big.len();
    let mut uf = UnionFind::new(nb + omega_small.len());
    for (i, v) in omega_big.iter().enumerate() {
        for (j, u) in omega_small.iter().enumerate() {
            if dot(v.coords(), u.coords()).abs() > orth_tol {
                uf.union(i, nb + j);
            }
        }
    }
    let mut roots: Vec<usize> = Vec::new();
    let mut members_v: Vec<Vec<Direction>> = Vec::new();
    let mut members_u: Vec<Vec<Direction>> = Vec::new();
    for k in 0..nb + omega_small.len() {
        let r = uf.find(k);
        let c = match roots.iter().position(|&x| x == r) {
            Some(c) => c,
            None => {
                roots.push(r);
                members_v.push(Vec::new());
                members_u.push(Vec::new());
                roots.len() - 1
            }
        };
        if k < nb {
            members_v[c].push(omega_big[k].clone());
        } else {
            members_u[c].push(omega_small[k - nb].clone());
        }
    }
    if let Some(c) = (0..roots.len()).find(|&c| members_v[c].is_empty() || members_u[c].is_empty()) {
        let lone = members_v[c].first().or(members_u[c].first()).cloned();
        return Err(Error::InconsistentDecomposition {
            reason: "a direction is orthogonal to the whole other set".into(),
            pair: lone.map(|d| (d.clone(), d)),
        });
    }
    let classes_v: Vec<DirectionClass> = members_v
        .into_iter()
        .map(|m| DirectionClass {
            basis: span(&m),
            members: m,
        })
        .collect();
    let classes_u: Vec<DirectionClass> = members_u
        .into_iter()
        .map(|m| DirectionClass {
            basis: span(&m),
            members: m,
        })
        .collect();
    let dec = Decomposition {
        dim,
        classes_v,
        classes_u,
    };
    check_contract(&dec, orth_tol)?;
    Ok(dec)
}

/// Largest `|v·u|` over members of different classes.
fn worst_cross_pair(dec: &Decomposition) -> Option<(Direction, Direction, f64)> {
    let mut worst: Option<(Direction, Direction, f64)> = None;
    for (i, cv) in dec.classes_v.iter().enumerate() {
        for (j, cu) in dec.classes_u.iter().enumerate() {
            if i == j {
                continue;
            }
            for v in &cv.members {
                for u in &cu.members {
                    let c = dot(v.coords(), u.coords()).abs();
                    if worst.as_ref().is_none_or(|w| c > w.2) {
                        worst = Some((v.clone(), u.clone(), c));
                    }
                }
            }
        }
    }
    worst
}

fn check_contract(dec: &Decomposition, orth_tol: f64) -> Result<()> {
    let fail = |reason: alloc::string::String| {
        let pair = worst_cross_pair(dec).map(|(v, u, _)| (v, u));
        Err(Error::InconsistentDecomposition { reason, pair })
    };
    if dec.classes_v.len() != dec.classes_u.len() {
        return fail("class counts differ".into());
    }
    for (name, classes) in [("V", &dec.classes_v), ("U", &dec.classes_u)] {
        let bases: Vec<Vec<Vec<f64>>> = classes.iter().map(|c| c.basis.clone()).collect();
        if !verify_direct_sum(&bases, dec.dim, orth_tol) {
            return fail(format!("the {name} classes do not form a direct sum of R^{}", dec.dim));
        }
    }
    for (i, cv) in dec.classes_v.iter().enumerate() {
        for (j, cu) in dec.classes_u.iter().enumerate() {
            if i == j {
                continue;
            }
            for a in &cv.basis {
                for b in &cu.basis {
                    if dot(a, b).abs() > BASIS_ORTH_TOL {
                        return fail(format!("V_{} is not orthogonal to U_{}", i + 1, j + 1));
                    }
                }
            }
        }
    }
    Ok(())
}

/// True iff the subspaces have dimensions summing to `dim` and their joined
/// bases have smallest singular value above `orth_tol`.
pub fn verify_direct_sum(classes: &[Vec<Vec<f64>>], dim: usize, orth_tol: f64) -> bool {
    let cols: Vec<Vec<f64>> = classes.iter().flatten().cloned().collect();
    if cols.len() != dim || cols.iter().any(|c| c.len() != dim) {
        return false;
    }
    let mut basis_ok = true;
    for b in classes {
        basis_ok &= linalg::rank(b, 1e-10) == b.len();
    }
    if !basis_ok {
        return false;
    }
    let sv = linalg::singular_values(&cols);
    sv.first().is_some_and(|&s| s > orth_tol)
}

/// Per-class dilation data of a detected summand structure.
#[derive(Clone, Debug)]
pub struct SummandDetection {
    pub decomposition: Decomposition,
    /// Value of `φ = dS_L/dS_K` on each class.
    pub constants: Vec<f64>,
}

/// φ-based detector: present iff `φ` is constant on every class of
/// `decompose(Ω, ω)`, with `Ω = supp S_K` and `ω` the witness set
/// (defaulting to `Ω`).
///
/// With `ω = Ω` the detector only sees splits along mutually orthogonal
/// normal groups.
pub fn detect_dilated_direct_summands(
    k: &SymmetricPolytope,
    l: &SymmetricPolytope,
    witness_omega: Option<&[Direction]>,
) -> Result<Option<SummandDetection>> {
    let phi = phi_on_support(k, l)?;
    let omega = k.normals();
    let witness = witness_omega.unwrap_or(omega);
    let dec = decompose(omega, witness, ORTH_TOL)?;
    let mut constants = Vec::with_capacity(dec.i0());
    for class in &dec.classes_v {
        let vals: Vec<f64> = class
            .members
            .iter()
            .map(|v| {
                let i = k.normal_index(v).expect("class member comes from supp S_K");
                phi[i]
            })
            .collect();
        let c = vals[0];
        if vals.iter().any(|x| (x - c).abs() > PHI_TOL * c) {
            return Ok(None);
        }
        constants.push(c);
    }
    // each direction of Ω must sit in its own class only
    for (i, class) in dec.classes_v.iter().enumerate() {
        for v in &class.members {
            for (j, other) in dec.classes_v.iter().enumerate() {
                if i == j {
                    continue;
                }
                let proj: f64 = other
                    .basis
                    .iter()
                    .map(|b| {
                        let c = dot(b, v.coords());
                        c * c
                    })
                    .sum();
                if proj > 1.0 - 1e-9 {
                    return Ok(None);
                }
            }
        }
    }
    Ok(Some(SummandDetection {
        decomposition: dec,
        constants,
    }))
}

/// `φ_i = β_i / α_i` along the normals of `k`, requiring equal supports.
pub(crate) fn phi_on_support(k: &SymmetricPolytope, l: &SymmetricPolytope) -> Result<Vec<f64>> {
    if k.dim() != l.dim() {
        return Err(Error::DimensionMismatch {
            expected: k.dim(),
            found: l.dim(),
        });
    }
    let mut phi = Vec::with_capacity(k.normals().len());
    let mut only_first = Vec::new();
    let mut used = alloc::vec![false; l.normals().len()];
    for (u, a) in k.normals().iter().zip(k.facet_areas()) {
        match l.normal_index(u) {
            Some(j) => {
                used[j] = true;
                phi.push(l.facet_areas()[j] / a);
            }
            None => {
                only_first.push(u.clone());
                phi.push(f64::NAN);
            }
        }
    }
    let only_second: Vec<Direction> = l
        .normals()
        .iter()
        .zip(&used)
        .filter(|(_, u)| !**u)
        .map(|(d, _)| d.clone())
        .collect();
    if !only_first.is_empty() || !only_second.is_empty() {
        return Err(Error::SupportMismatch {
            only_first,
            only_second,
        });
    }
    Ok(phi)
}

/// Rotate a direction set by the row-major orthogonal matrix `r`.
pub fn rotate_directions(set: &[Direction], r: &[f64]) -> Vec<Direction> {
    set.iter()
        .map(|d| {
            let x = linalg::mat_vec(r, d.coords());
            let n = norm(&x);
            Direction::canonical(x.into_iter().map(|c| c / n).collect())
        })
        .collect()
}
