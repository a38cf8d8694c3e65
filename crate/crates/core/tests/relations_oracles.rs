mod common;

use common::{random_rotation, random_unit, rng};
use logbm_core::relations::{rotate_directions, ORTH_TOL};
use logbm_core::{decompose, detect_dilated_direct_summands, verify_direct_sum, Direction, SymmetricPolytope};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Components of the bipartite non-orthogonality graph, by BFS.
fn component_count(big: &[Direction], small: &[Direction]) -> usize {
    let n = big.len() + small.len();
    let node = |i: usize| if i < big.len() { &big[i] } else { &small[i - big.len()] };
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..big.len() {
        if seen[s] {
            continue;
        }
        count += 1;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                let cross = (i < big.len()) != (j < big.len());
                if cross && !seen[j] && node(i).dot(node(j).coords()).abs() > ORTH_TOL {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    count
}

/// Directions spread over orthogonal coordinate blocks, then rotated.
fn block_sets(r: &mut ChaCha8Rng, dims: &[usize]) -> (Vec<Direction>, Vec<Direction>) {
    let n: usize = dims.iter().sum();
    let rot = random_rotation(r, n);
    let mut big = Vec::new();
    let mut small = Vec::new();
    let mut off = 0;
    for &d in dims {
        for (set, count) in [(&mut big, d + r.random_range(1..3)), (&mut small, d + r.random_range(0..2))] {
            let mut local: Vec<Vec<f64>> = (0..d).map(|i| (0..d).map(|j| f64::from(u8::from(i == j))).collect()).collect();
            if d > 1 {
                for _ in d..count {
                    local.push(random_unit(r, d));
                }
            }
            for l in local {
                let mut v = vec![0.0; n];
                v[off..off + d].copy_from_slice(&l);
                set.push(Direction::new(&v).unwrap());
            }
        }
        off += d;
    }
    (rotate_directions(&big, &rot), rotate_directions(&small, &rot))
}

#[test]
fn constructed_blocks_are_recovered() {
    let mut r = rng(41);
    for dims in [vec![3], vec![1, 2], vec![2, 2], vec![1, 1, 2], vec![1, 1, 1], vec![3, 1]] {
        for _ in 0..10 {
            let (big, small) = block_sets(&mut r, &dims);
            let dec = decompose(&big, &small, ORTH_TOL).unwrap();
            assert_eq!(dec.i0(), dims.len());
            let mut got: Vec<usize> = dec.classes_v.iter().map(|c| c.basis.len()).collect();
            let mut want = dims.clone();
            got.sort_unstable();
            want.sort_unstable();
            assert_eq!(got, want);
        }
    }
}

#[test]
fn class_count_matches_graph_components() {
    let mut r = rng(42);
    for _ in 0..40 {
        let n = r.random_range(2..=4);
        let dims: Vec<usize> = match n {
            2 => vec![1, 1],
            3 => vec![2, 1],
            _ => vec![2, 1, 1],
        };
        let (big, small) = if r.random_bool(0.5) {
            block_sets(&mut r, &dims)
        } else {
            let g = |r: &mut ChaCha8Rng, k| (0..k).map(|_| Direction::new(&random_unit(r, n)).unwrap()).collect::<Vec<_>>();
            (g(&mut r, n + 2), g(&mut r, n + 1))
        };
        let dec = decompose(&big, &small, ORTH_TOL).unwrap();
        assert_eq!(dec.i0(), component_count(&big, &small));
        let bases: Vec<Vec<Vec<f64>>> = dec.classes_v.iter().map(|c| c.basis.clone()).collect();
        assert!(verify_direct_sum(&bases, n, 1e-7));
        for (a, b) in dec.classes_v.iter().zip(&dec.classes_u) {
            assert_eq!(a.basis.len(), b.basis.len());
        }
    }
}

#[test]
fn dilated_box_product_is_detected() {
    let square = SymmetricPolytope::cube(2).unwrap();
    let k = square.minkowski_sum(&SymmetricPolytope::cube(2).unwrap().scaled(0.5).unwrap()).unwrap();
    assert_eq!(k.normals().len(), 2);
    let k3 = SymmetricPolytope::cuboid(&[1.0, 2.0, 0.5]).unwrap();
    let l3 = SymmetricPolytope::cuboid(&[2.0, 4.0, 3.0]).unwrap();
    let det = detect_dilated_direct_summands(&k3, &l3, None).unwrap().unwrap();
    assert_eq!(det.decomposition.i0(), 3);
    let perturbed = SymmetricPolytope::from_vertices(
        3,
        &[vec![1.0, 2.0, 0.5], vec![-1.0, 2.0, 0.5], vec![1.0, -2.0, 0.5], vec![1.0, 2.0, -0.5], vec![1.3, 0.0, 0.0]],
    )
    .unwrap();
    assert!(detect_dilated_direct_summands(&k3, &perturbed, None).is_err());
}
