//! Acceptance suite: nine property checks over seeded random corpora, one
//! PASS/FAIL line each. Exits nonzero when any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use logbm::random::{
    block_direction_sets, gaussian_unit, instance_seed, perturb_planar_factor, random_summand_pair,
    random_supp_matched_pair, random_symmetric_polytope, random_zonotope, rng,
};
use logbm_core::inequalities::{
    chain_deficits, containment_check_2d, lbm_deficit, lm_deficit, rlbm_deficit, weak_rlm_deficit,
    DEFAULT_RESOLUTION, DEFAULT_T_GRID,
};
use logbm_core::relations::ORTH_TOL;
use logbm_core::zonoid::{verify_sam_proj, verify_zonoidmv};
use logbm_core::{
    decompose, detect_dilated_direct_summands, hausdorff_distance, solve_even_minkowski, surface_area_measure,
    verify_direct_sum, Direction, LogBlaschkePath, PathOptions, SolverConfig, SymmetricPolytope, Zonotope,
};
use rand::Rng;
use rayon::prelude::*;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome {
            passed,
            detail: detail.into(),
        }
    }
}

fn path_with_tol(k0: SymmetricPolytope, k1: SymmetricPolytope, tol: f64) -> LogBlaschkePath {
    let options = PathOptions {
        solver: SolverConfig {
            tol,
            ..SolverConfig::default()
        },
        ..PathOptions::default()
    };
    LogBlaschkePath::with_options(k0, k1, options).expect("supp-matched pair")
}

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

/// Minkowski solver round trip.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    let results: Vec<Result<(f64, f64), String>> = (0..200u64)
        .into_par_iter()
        .map(|i| {
            let seed = instance_seed(1, i);
            let n = 2 + (i % 3) as usize;
            let k = rng(seed).random_range(n + 1..=12);
            let p = random_symmetric_polytope(seed, n, k).map_err(|e| e.to_string())?;
            let sol = solve_even_minkowski(&surface_area_measure(&p), 1e-10, 10_000).map_err(|e| e.to_string())?;
            let d = hausdorff_distance(&sol.body, &p).map_err(|e| e.to_string())?;
            Ok((d / p.diameter(), sol.residual))
        })
        .collect();
    let elapsed = start.elapsed();
    let errors = results.iter().filter(|r| r.is_err()).count();
    let ok: Vec<(f64, f64)> = results.into_iter().filter_map(Result::ok).collect();
    let dh = worst(ok.iter().map(|r| r.0));
    let res = worst(ok.iter().map(|r| r.1));
    Outcome::new(
        errors == 0 && dh <= 1e-7 && res <= 1e-8 && elapsed <= Duration::from_secs(300),
        format!("200 bodies, worst d_H/diam {dh:.2e}, worst residual {res:.2e}, {errors} errors, {elapsed:.1?}"),
    )
}

/// Volume derivative along the path against central differences.
fn criterion_2() -> Outcome {
    let results: Vec<Result<f64, String>> = (0..50u64)
        .into_par_iter()
        .map(|i| {
            let seed = instance_seed(2, i);
            let n = 2 + (i % 3) as usize;
            let (k0, k1) = random_supp_matched_pair(seed, n, n + 3).map_err(|e| e.to_string())?;
            let path = path_with_tol(k0, k1, 1e-12);
            let mut worst_rel: f64 = 0.0;
            for t in [0.25, 0.5, 0.75] {
                let h = 1e-3;
                let fd = (path.volume(t + h).map_err(|e| e.to_string())? - path.volume(t - h).map_err(|e| e.to_string())?)
                    / (2.0 * h);
                let d = path.volume_derivative(t).map_err(|e| e.to_string())?;
                worst_rel = worst_rel.max((fd - d).abs() / d.abs());
            }
            Ok(worst_rel)
        })
        .collect();
    let errors = results.iter().filter(|r| r.is_err()).count();
    let fd = worst(results.iter().filter_map(|r| r.as_ref().ok().copied()));
    let mut rect: f64 = 0.0;
    for (a, b) in [(2.0, 0.5), (3.0, 1.5), (0.7, 0.9), (1.2, 2.5)] {
        let path = path_with_tol(SymmetricPolytope::cube(2).unwrap(), SymmetricPolytope::cuboid(&[a, b]).unwrap(), 1e-12);
        for t in [0.25, 0.5, 0.75] {
            let closed = 4.0 * f64::powf(a, t) * f64::powf(b, t) * f64::ln(a * b);
            rect = rect.max((path.volume_derivative(t).unwrap() - closed).abs());
        }
    }
    Outcome::new(
        errors == 0 && fd <= 1e-4 && rect <= 1e-8,
        format!("50 pairs, worst relative FD gap {fd:.4e}; rectangle family worst gap {rect:.2e}; {errors} errors"),
    )
}

#[derive(Default)]
struct PlanarStats {
    containment_failures: usize,
    rlbm: f64,
    lbm: f64,
    holder: f64,
    minkowski: f64,
    errors: usize,
}

/// The planar corpus, shared by the third and fourth criteria.
fn planar_corpus() -> (PlanarStats, Duration) {
    let start = Instant::now();
    let per_pair: Vec<Result<PlanarStats, String>> = (0..1000u64)
        .into_par_iter()
        .map(|i| {
            let seed = instance_seed(3, i);
            let k = rng(seed).random_range(3..=8);
            let (k0, k1) = random_supp_matched_pair(seed, 2, k).map_err(|e| e.to_string())?;
            let path = path_with_tol(k0.clone(), k1.clone(), 1e-10);
            let mut s = PlanarStats {
                rlbm: f64::NEG_INFINITY,
                lbm: f64::NEG_INFINITY,
                holder: f64::NEG_INFINITY,
                minkowski: f64::NEG_INFINITY,
                ..PlanarStats::default()
            };
            for t in DEFAULT_T_GRID {
                let err = |e: logbm_core::Error| format!("seed {seed} t {t}: {e}");
                if !containment_check_2d(&path, t).map_err(err)?.passed() {
                    s.containment_failures += 1;
                }
                let r = rlbm_deficit(&path, t).map_err(err)?;
                s.rlbm = s.rlbm.max(-r.deficit / (1e-8 * r.scale));
                let l = lbm_deficit(&k0, &k1, t, DEFAULT_RESOLUTION).map_err(err)?;
                s.lbm = s.lbm.max(-l.deficit / (1e-8 * l.scale + l.error_budget));
                let c = chain_deficits(&path, t, DEFAULT_RESOLUTION).map_err(err)?;
                s.holder = s.holder.max(-c.holder.deficit / (1e-8 * c.holder.scale));
                s.minkowski = s.minkowski.max(-c.minkowski.deficit / (1e-8 * c.minkowski.scale));
            }
            Ok(s)
        })
        .collect();
    let mut total = PlanarStats {
        rlbm: f64::NEG_INFINITY,
        lbm: f64::NEG_INFINITY,
        holder: f64::NEG_INFINITY,
        minkowski: f64::NEG_INFINITY,
        ..PlanarStats::default()
    };
    for r in per_pair {
        match r {
            Ok(s) => {
                total.containment_failures += s.containment_failures;
                total.rlbm = total.rlbm.max(s.rlbm);
                total.lbm = total.lbm.max(s.lbm);
                total.holder = total.holder.max(s.holder);
                total.minkowski = total.minkowski.max(s.minkowski);
            }
            Err(e) => {
                eprintln!("  planar corpus: {e}");
                total.errors += 1;
            }
        }
    }
    (total, start.elapsed())
}

/// Worst violation ratios are `−deficit / allowance`; ≤ 1 passes.
fn criterion_3(s: &PlanarStats, elapsed: Duration) -> Outcome {
    Outcome::new(
        s.errors == 0
            && s.containment_failures == 0
            && s.rlbm <= 1.0
            && s.lbm <= 1.0
            && elapsed <= Duration::from_secs(600),
        format!(
            "1000 pairs x {} t, containment failures {}, worst rlbm ratio {:.2e}, worst lbm ratio {:.2e}, {} errors, {elapsed:.1?}",
            DEFAULT_T_GRID.len(),
            s.containment_failures,
            s.rlbm,
            s.lbm,
            s.errors
        ),
    )
}

fn criterion_4(s: &PlanarStats) -> Outcome {
    Outcome::new(
        s.errors == 0 && s.holder <= 1.0 && s.minkowski <= 1.0,
        format!("same corpus, worst Holder-step ratio {:.2e}, worst Minkowski-step ratio {:.2e}", s.holder, s.minkowski),
    )
}

/// Dilated direct summands: equality and detection, then perturbed pairs.
fn criterion_5() -> Outcome {
    let tol = 1e-12;
    let eq: Vec<Result<(f64, bool), String>> = (0..100u64)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(instance_seed(5, i));
            let n = 2 + (i % 3) as usize;
            let pair = random_summand_pair(&mut r, n, false).map_err(|e| e.to_string())?;
            let path = path_with_tol(pair.k.clone(), pair.l.clone(), tol);
            let scale = pair.k.volume().max(pair.l.volume());
            let reports = [
                rlbm_deficit(&path, 0.5).map_err(|e| e.to_string())?,
                lm_deficit(&pair.k, &pair.l).map_err(|e| e.to_string())?,
                weak_rlm_deficit(&pair.k, &pair.l).map_err(|e| e.to_string())?,
            ];
            let rel = worst(reports.iter().map(|d| d.deficit.abs() / scale));
            let det = detect_dilated_direct_summands(&pair.k, &pair.l, None).map_err(|e| e.to_string())?;
            let ok = det.is_some_and(|d| d.decomposition.i0() == pair.blocks.len());
            Ok((rel, ok))
        })
        .collect();
    let pert: Vec<Result<(bool, bool), String>> = (0..100u64)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(instance_seed(55, i));
            let n = 2 + (i % 3) as usize;
            let pair = random_summand_pair(&mut r, n, true).map_err(|e| e.to_string())?;
            let factor = if r.random_bool(0.5) {
                r.random_range(1.05..1.3)
            } else {
                r.random_range(0.75..1.0 / 1.05)
            };
            let l = perturb_planar_factor(&pair, &mut r, factor, tol).map_err(|e| e.to_string())?;
            let path = path_with_tol(pair.k.clone(), l.clone(), tol);
            let reports = [
                rlbm_deficit(&path, 0.5).map_err(|e| e.to_string())?,
                lm_deficit(&pair.k, &l).map_err(|e| e.to_string())?,
                weak_rlm_deficit(&pair.k, &l).map_err(|e| e.to_string())?,
            ];
            let strict = reports.iter().all(|d| d.deficit > d.error_budget);
            let absent = detect_dilated_direct_summands(&pair.k, &l, None)
                .map_err(|e| e.to_string())?
                .is_none();
            Ok((strict, absent))
        })
        .collect();
    for e in eq.iter().filter_map(|r| r.as_ref().err()).chain(pert.iter().filter_map(|r| r.as_ref().err())) {
        eprintln!("  summand pairs: {e}");
    }
    let errors = eq.iter().filter(|r| r.is_err()).count() + pert.iter().filter(|r| r.is_err()).count();
    let eq_ok: Vec<(f64, bool)> = eq.into_iter().filter_map(Result::ok).collect();
    let pert_ok: Vec<(bool, bool)> = pert.into_iter().filter_map(Result::ok).collect();
    let eq_rel = worst(eq_ok.iter().map(|x| x.0));
    let eq_detect = eq_ok.iter().filter(|x| x.1).count();
    let strict = pert_ok.iter().filter(|x| x.0).count();
    let absent = pert_ok.iter().filter(|x| x.1).count();
    Outcome::new(
        errors == 0 && eq_rel <= 1e-6 && eq_detect == 100 && strict == 100 && absent == 100,
        format!(
            "equality pairs: worst |deficit|/scale {eq_rel:.2e}, detected with correct i0 {eq_detect}/100; \
             perturbed: strictly positive {strict}/100, detection absent {absent}/100; {errors} errors"
        ),
    )
}

/// Projection and generating-measure identities for zonoids.
fn criterion_6() -> Outcome {
    let results: Vec<Result<(f64, f64), String>> = (0..100u64)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(instance_seed(6, i));
            let z = random_zonotope(&mut r, 3, 8).map_err(|e| e.to_string())?;
            let u = Direction::new(&gaussian_unit(&mut r, 3)).map_err(|e| e.to_string())?;
            let sp = verify_sam_proj(z.polytope(), &u).map_err(|e| e.to_string())?;
            let pairs = r.random_range(4..=8);
            let k = logbm::random::random_symmetric_polytope_from(&mut r, 3, pairs).map_err(|e| e.to_string())?;
            let f = logbm::random::random_symmetric_polytope_from(&mut r, 3, 5).map_err(|e| e.to_string())?;
            let mv = verify_zonoidmv(&k, &z, |v| f.support(v.coords())).map_err(|e| e.to_string())?;
            Ok((sp.total_variation, mv.relative()))
        })
        .collect();
    let errors = results.iter().filter(|r| r.is_err()).count();
    for e in results.iter().filter_map(|r| r.as_ref().err()) {
        eprintln!("  zonoid identities: {e}");
    }
    let ok: Vec<(f64, f64)> = results.into_iter().filter_map(Result::ok).collect();
    let tv = worst(ok.iter().map(|x| x.0));
    let mv = worst(ok.iter().map(|x| x.1));
    let cube = SymmetricPolytope::cube(3).unwrap();
    let pin = verify_sam_proj(&cube, &Direction::axis(3, 2)).unwrap();
    let pin_err = pin.total_variation.max((pin.total_mass - 8.0).abs());
    Outcome::new(
        errors == 0 && tv <= 1e-6 && mv <= 1e-6 && pin_err <= 1e-9,
        format!("100 zonotopes, worst TV {tv:.2e}, worst relative discrepancy {mv:.2e}, cube/e3 error {pin_err:.2e}; {errors} errors"),
    )
}

/// Log-Minkowski inequality with a zonotope as the first body.
fn criterion_7() -> Outcome {
    let results: Vec<Result<f64, String>> = (0..500u64)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(instance_seed(7, i));
            let n = 2 + (i % 3) as usize;
            let z = random_zonotope(&mut r, n, n + 4).map_err(|e| e.to_string())?;
            let k = r.random_range(n..=n + 5);
            let l = logbm::random::random_symmetric_polytope_from(&mut r, n, k).map_err(|e| e.to_string())?;
            let d = lm_deficit(z.polytope(), &l).map_err(|e| e.to_string())?;
            Ok(-d.deficit / d.scale)
        })
        .collect();
    let errors = results.iter().filter(|r| r.is_err()).count();
    let w = worst(results.iter().filter_map(|r| r.as_ref().ok().copied()));
    let z = Zonotope::new(vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
    let oct = SymmetricPolytope::cross_polytope(3, 1.0).unwrap();
    let d = lm_deficit(z.polytope(), &oct).unwrap();
    let gap = (d.deficit - 8.0 / 3.0 * 6f64.ln()).abs();
    Outcome::new(
        errors == 0 && w <= 1e-8 && gap <= 1e-9,
        format!("500 pairs, worst -deficit/scale {w:.2e}; cube/octahedron gap {gap:.2e}; {errors} errors"),
    )
}

/// Decomposition contract on random and constructed direction sets.
fn criterion_8() -> Outcome {
    let start = Instant::now();
    let splits: [&[usize]; 9] = [&[2], &[3], &[1, 1], &[1, 2], &[2, 2], &[1, 1, 1], &[1, 1, 2], &[3, 1], &[2, 1, 1]];
    let results: Vec<Result<(bool, Option<bool>), String>> = (0..500u64)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(instance_seed(8, i));
            let (big, small, expected) = if i % 2 == 0 {
                let dims = splits[(i / 2) as usize % splits.len()];
                let (b, s) = block_direction_sets(&mut r, dims);
                let mut want = dims.to_vec();
                want.sort_unstable();
                (b, s, Some(want))
            } else {
                let n = r.random_range(2..=4);
                let g = |r: &mut rand_chacha::ChaCha8Rng, k: usize| -> Vec<Direction> {
                    (0..k).map(|_| Direction::new(&gaussian_unit(r, n)).unwrap()).collect()
                };
                let kb = r.random_range(n..=n + 4);
                let ks = r.random_range(n..=n + 3);
                (g(&mut r, kb), g(&mut r, ks), None)
            };
            let dim = big[0].dim();
            let dec = decompose(&big, &small, ORTH_TOL).map_err(|e| e.to_string())?;
            let counts = dec.classes_v.len() == dec.classes_u.len()
                && dec.classes_v.iter().zip(&dec.classes_u).all(|(a, b)| a.basis.len() == b.basis.len());
            let bases: Vec<Vec<Vec<f64>>> = dec.classes_v.iter().map(|c| c.basis.clone()).collect();
            let direct = verify_direct_sum(&bases, dim, 1e-7);
            let mut cross = true;
            for (a, ca) in dec.classes_v.iter().enumerate() {
                for (b, cb) in dec.classes_u.iter().enumerate() {
                    if a != b {
                        cross &= ca.members.iter().all(|v| cb.members.iter().all(|u| v.dot(u.coords()).abs() <= ORTH_TOL));
                    }
                }
            }
            let recovered = expected.map(|want| {
                let mut got: Vec<usize> = dec.classes_v.iter().map(|c| c.basis.len()).collect();
                got.sort_unstable();
                got == want
            });
            Ok((counts && direct && cross, recovered))
        })
        .collect();
    let elapsed = start.elapsed();
    let errors = results.iter().filter(|r| r.is_err()).count();
    let ok: Vec<(bool, Option<bool>)> = results.into_iter().filter_map(Result::ok).collect();
    let contract = ok.iter().filter(|x| x.0).count();
    let constructed = ok.iter().filter(|x| x.1.is_some()).count();
    let recovered = ok.iter().filter(|x| x.1 == Some(true)).count();
    Outcome::new(
        errors == 0 && contract == 500 && recovered == constructed && elapsed <= Duration::from_secs(60),
        format!("500 pairs, contract holds {contract}/500, constructed splits recovered {recovered}/{constructed}, {errors} errors, {elapsed:.1?}"),
    )
}

/// Hausdorff convergence of the path to its starting body.
fn criterion_9() -> Outcome {
    let ts = [0.2, 0.1, 0.05, 0.01];
    let results: Vec<Result<(bool, bool, f64), String>> = (0..50u64)
        .into_par_iter()
        .map(|i| {
            let seed = instance_seed(9, i);
            let n = 2 + (i % 2) as usize;
            let (k0, k1) = random_supp_matched_pair(seed, n, n + 3).map_err(|e| e.to_string())?;
            let path = path_with_tol(k0, k1, 1e-10);
            let rep = path.endpoint_convergence(&ts, 1e-3).map_err(|e| e.to_string())?;
            let last = rep.distances[ts.len() - 1] / rep.diameter;
            Ok((rep.monotone, rep.converged, last))
        })
        .collect();
    let errors = results.iter().filter(|r| r.is_err()).count();
    let ok: Vec<(bool, bool, f64)> = results.into_iter().filter_map(Result::ok).collect();
    let monotone = ok.iter().filter(|x| x.0).count();
    let converged = ok.iter().filter(|x| x.1).count();
    let w = worst(ok.iter().map(|x| x.2));
    Outcome::new(
        errors == 0 && monotone == 50 && converged == 50,
        format!("50 pairs, monotone {monotone}/50, d_H/diam at t=0.01 within 1e-3 for {converged}/50 (worst {w:.2e}); {errors} errors"),
    )
}

fn main() -> ExitCode {
    let mut outcomes: Vec<(usize, &str, Outcome)> = Vec::new();
    outcomes.push((1, "Minkowski solver round trip", criterion_1()));
    outcomes.push((2, "volume derivative formula", criterion_2()));
    let (planar, elapsed) = planar_corpus();
    outcomes.push((3, "planar log-Brunn-Minkowski and containment", criterion_3(&planar, elapsed)));
    outcomes.push((4, "Holder and Minkowski steps of the chain", criterion_4(&planar)));
    outcomes.push((5, "equality characterization", criterion_5()));
    outcomes.push((6, "zonoid identities", criterion_6()));
    outcomes.push((7, "log-Minkowski for zonoids", criterion_7()));
    outcomes.push((8, "decomposition contract", criterion_8()));
    outcomes.push((9, "endpoint convergence", criterion_9()));
    let mut failed = 0;
    for (i, name, o) in &outcomes {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {i} {tag} {name}: {}", o.detail);
        failed += usize::from(!o.passed);
    }
    println!("acceptance: {} passed, {failed} failed", outcomes.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
