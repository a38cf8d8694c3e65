use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use log::{error, info, warn};
use logbm::io::{self, PolytopeJson};
use logbm::sweep::{self, rows_to_csv, worst_projection, Check, ExperimentConfig, Row};
use logbm::{CliError, Result};
use logbm_core::combinations::geometric_mean_body;
use logbm_core::inequalities::{
    chain_deficits, lbm_deficit, lm_deficit, rlbm_deficit, weak_rlm_deficit, DEFAULT_RESOLUTION,
    DEFAULT_T_GRID,
};
use logbm_core::minkowski::solve_even_minkowski_with;
use logbm_core::relations::{Decomposition, ORTH_TOL};
use logbm_core::zonoid::{lm_zonoid_harness, verify_sam_proj, verify_zonoidmv};
use logbm_core::{decompose, detect_dilated_direct_summands, Direction, LogBlaschkePath, PathOptions, SolverConfig};
use serde_json::json;

const EXIT_VIOLATION: u8 = 2;
const EXIT_NO_CONVERGENCE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "logbm", version, about = "Log-Brunn-Minkowski experiments on symmetric polytopes")]
struct Cli {
    /// Base seed for every sampled body.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Minkowski solver tolerance [default: 1e-8].
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Worker threads, 0 for one per core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Directory for reports from `sweep`.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    LogBlaschke,
    Wulff,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VerifyCheck {
    Lbm,
    Rlbm,
    Lm,
    WeakRlm,
    ProjRlm,
    Chain,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ZonoidCheck {
    SamProj,
    Zonoidmv,
    Lm,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the even discrete Minkowski problem for a measure.
    MinkowskiSolve {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
        /// Output body; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Combine two bodies at parameter t.
    Combine {
        #[arg(long)]
        k0: PathBuf,
        #[arg(long)]
        k1: PathBuf,
        #[arg(long, value_enum, default_value = "log-blaschke")]
        mode: Mode,
        #[arg(long, default_value_t = 0.5)]
        t: f64,
        /// Sphere grid size for the Wulff mode.
        #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
        resolution: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate one inequality on a pair, one CSV row per parameter.
    Verify {
        #[arg(long, value_enum)]
        check: VerifyCheck,
        #[arg(long)]
        k0: PathBuf,
        #[arg(long)]
        k1: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_T_GRID.to_vec())]
        t_grid: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
        resolution: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Zonoid identities and the zonoid log-Minkowski inequality.
    Zonoid {
        #[arg(long)]
        generators: PathBuf,
        #[arg(long, value_enum)]
        check: ZonoidCheck,
        /// Second body for `lm`, and the body `K` for `zonoidmv`.
        #[arg(long)]
        l: Option<PathBuf>,
        /// Segment direction for `sam-proj`; all generator directions when omitted.
        #[arg(long, value_delimiter = ',')]
        u: Option<Vec<f64>>,
    },
    /// Split two direction sets into orthogonal classes.
    Decompose {
        #[arg(long)]
        omega: PathBuf,
        #[arg(long)]
        omega_small: PathBuf,
        #[arg(long, default_value_t = ORTH_TOL)]
        orth_tol: f64,
    },
    /// Look for a dilated direct-summand structure between K and L.
    DetectSummands {
        #[arg(long)]
        k: PathBuf,
        #[arg(long)]
        l: PathBuf,
        /// Witness direction set; the normals of K when omitted.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Seeded sweep over random supp-matched pairs.
    Sweep {
        /// JSON experiment config; flags below fill in missing fields.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        pairs: Option<usize>,
        #[arg(long)]
        facets: Option<usize>,
        #[arg(long, value_enum, value_delimiter = ',')]
        checks: Option<Vec<Check>>,
        #[arg(long, value_delimiter = ',')]
        t_grid: Option<Vec<f64>>,
    },
}

fn emit_json(value: &serde_json::Value, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => io::write_json(p, value),
        None => {
            println!("{}", serde_json::to_string_pretty(value).expect("json value"));
            Ok(())
        }
    }
}

fn decomposition_json(d: &Decomposition) -> serde_json::Value {
    let classes: Vec<_> = d
        .classes_v
        .iter()
        .zip(&d.classes_u)
        .map(|(v, u)| {
            json!({
                "members": v.members.iter().map(|x| x.coords().to_vec()).collect::<Vec<_>>(),
                "witnesses": u.members.iter().map(|x| x.coords().to_vec()).collect::<Vec<_>>(),
                "basis": v.basis,
            })
        })
        .collect();
    json!({ "dim": d.dim, "i0": d.i0(), "classes": classes })
}

fn solver_config(cli: &Cli) -> SolverConfig {
    SolverConfig {
        tol: cli.tol.unwrap_or(SolverConfig::default().tol),
        ..SolverConfig::default()
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::MinkowskiSolve { measure, max_iter, out } => {
            let target = io::read_measure(measure)?;
            let cfg = SolverConfig {
                max_iter: *max_iter,
                ..solver_config(cli)
            };
            match solve_even_minkowski_with(&target, &cfg) {
                Ok(sol) => {
                    info!("solved in {} iterations, residual {:e}", sol.iterations, sol.residual);
                    emit_json(&serde_json::to_value(PolytopeJson::from(&sol.body)).expect("json"), out.as_deref())?;
                    Ok(ExitCode::SUCCESS)
                }
                Err(logbm_core::Error::NoConvergence(sol)) => {
                    error!("no convergence after {} iterations, residual {:e}", sol.iterations, sol.residual);
                    Ok(ExitCode::from(EXIT_NO_CONVERGENCE))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Combine { k0, k1, mode, t, resolution, out } => {
            let (a, b) = (io::read_polytope(k0)?, io::read_polytope(k1)?);
            let body = match mode {
                Mode::LogBlaschke => {
                    let options = PathOptions {
                        solver: solver_config(cli),
                        ..PathOptions::default()
                    };
                    LogBlaschkePath::with_options(a, b, options)?.body(*t)?
                }
                Mode::Wulff => geometric_mean_body(&a, &b, *t, *resolution)?.body,
            };
            info!("volume {}", body.volume());
            emit_json(&serde_json::to_value(PolytopeJson::from(&body)).expect("json"), out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { check, k0, k1, t_grid, resolution, out } => {
            let (a, b) = (io::read_polytope(k0)?, io::read_polytope(k1)?);
            let options = PathOptions {
                solver: solver_config(cli),
                ..PathOptions::default()
            };
            let mut reports = Vec::new();
            match check {
                VerifyCheck::Lm => reports.push(lm_deficit(&a, &b)?),
                VerifyCheck::WeakRlm => reports.push(weak_rlm_deficit(&a, &b)?),
                VerifyCheck::ProjRlm => reports.push(worst_projection(&a, &b)?),
                VerifyCheck::Lbm => {
                    for &t in t_grid {
                        reports.push(lbm_deficit(&a, &b, t, *resolution)?);
                    }
                }
                VerifyCheck::Rlbm | VerifyCheck::Chain => {
                    let path = LogBlaschkePath::with_options(a.clone(), b.clone(), options)?;
                    for &t in t_grid {
                        if matches!(check, VerifyCheck::Rlbm) {
                            reports.push(rlbm_deficit(&path, t)?);
                        } else {
                            reports.extend(chain_deficits(&path, t, *resolution)?.all().into_iter().cloned());
                        }
                    }
                }
            }
            let tol = format!("solver={:e};m={}", solver_config(cli).tol, resolution);
            let rows: Vec<Row> = reports
                .iter()
                .map(|r| Row::from_report(r, a.dim(), cli.seed, "", &tol))
                .collect();
            let csv = rows_to_csv(&rows)?;
            match out {
                Some(p) => std::fs::write(p, csv).map_err(|source| CliError::Io { path: p.clone(), source })?,
                None => std::io::stdout().write_all(&csv).map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })?,
            }
            let violated = reports.iter().any(|r| r.verdict == logbm_core::Verdict::ViolatedBeyondBudget);
            Ok(if violated { ExitCode::from(EXIT_VIOLATION) } else { ExitCode::SUCCESS })
        }
        Command::Zonoid { generators, check, l, u } => {
            let z = io::read_zonotope(generators)?;
            let other = l.as_deref().map(io::read_polytope).transpose()?;
            let value = match check {
                ZonoidCheck::SamProj => {
                    let dirs = match u {
                        Some(v) => vec![Direction::new(v)?],
                        None => z.generator_directions(),
                    };
                    let mut items = Vec::new();
                    for d in dirs {
                        let r = verify_sam_proj(z.polytope(), &d)?;
                        items.push(json!({
                            "u": d.coords(),
                            "total_variation": r.total_variation,
                            "total_mass": r.total_mass,
                            "relative": r.relative(),
                        }));
                    }
                    json!({ "check": "sam-proj", "results": items })
                }
                ZonoidCheck::Zonoidmv => {
                    let k = other.unwrap_or_else(|| z.polytope().clone());
                    let r = verify_zonoidmv(&k, &z, |v| k.support(v.coords()))?;
                    json!({ "check": "zonoidmv", "lhs": r.lhs, "rhs": r.rhs, "relative": r.relative() })
                }
                ZonoidCheck::Lm => {
                    let l = other.ok_or_else(|| CliError::Config("--l is required for the lm check".into()))?;
                    let r = lm_zonoid_harness(&z, &l)?;
                    let gens: Vec<_> = r
                        .generators
                        .iter()
                        .map(|g| {
                            json!({
                                "u": g.u.coords(),
                                "projected_lm_deficit": g.projected_lm.deficit,
                                "sam_proj_error": g.sam_proj_error,
                                "proj_rlm_deficit": g.proj_rlm.as_ref().map(|p| p.report.deficit),
                                "per_u_deficit": g.per_u.as_ref().map(|p| p.deficit),
                            })
                        })
                        .collect();
                    json!({
                        "check": "lm",
                        "lhs": r.lm.lhs,
                        "rhs": r.lm.rhs,
                        "deficit": r.lm.deficit,
                        "budget": r.lm.error_budget,
                        "verdict": r.lm.verdict.as_str(),
                        "weak_rlm_deficit": r.weak_rlm.as_ref().map(|w| w.deficit),
                        "integration_error": r.integration_error,
                        "summands": r.detection.as_ref().map(|d| decomposition_json(&d.decomposition)),
                        "generators": gens,
                    })
                }
            };
            emit_json(&value, None)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Decompose { omega, omega_small, orth_tol } => {
            let big = io::read_directions(omega)?;
            let small = io::read_directions(omega_small)?;
            let d = decompose(&big, &small, *orth_tol)?;
            emit_json(&decomposition_json(&d), None)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::DetectSummands { k, l, witness } => {
            let (k, l) = (io::read_polytope(k)?, io::read_polytope(l)?);
            let w = witness.as_deref().map(io::read_directions).transpose()?;
            let det = detect_dilated_direct_summands(&k, &l, w.as_deref())?;
            let value = match det {
                Some(d) => {
                    let mut v = decomposition_json(&d.decomposition);
                    v["present"] = json!(true);
                    v["constants"] = json!(d.constants);
                    v
                }
                None => json!({ "present": false }),
            };
            emit_json(&value, None)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep { config, dim, pairs, facets, checks, t_grid } => {
            let mut cfg: ExperimentConfig = match config {
                Some(p) => io::read_json(p)?,
                None => ExperimentConfig {
                    seed: cli.seed,
                    ..ExperimentConfig::default()
                },
            };
            if let Some(t) = cli.tol {
                cfg.tolerances.solver = t;
            }
            if let Some(v) = dim {
                cfg.dimension = *v;
            }
            if let Some(v) = pairs {
                cfg.pairs = *v;
            }
            if let Some(v) = facets {
                cfg.facets = *v;
            }
            if let Some(v) = checks {
                cfg.checks = v.clone();
            }
            if let Some(v) = t_grid {
                cfg.t_grid = v.clone();
            }
            cfg.out_dir = cli.out_dir.clone();
            cfg.jobs = cli.jobs;
            let report = sweep::run_experiment(&cfg)?;
            let (csv, summary) = sweep::write_reports(&report, &cfg.out_dir)?;
            info!("wrote {} and {}", csv.display(), summary.display());
            if !report.summary.failed_seeds.is_empty() {
                warn!("{} instances skipped", report.summary.failed_seeds.len());
            }
            println!("{}", serde_json::to_string_pretty(&report.summary).expect("summary"));
            Ok(if report.summary.any_violation {
                ExitCode::from(EXIT_VIOLATION)
            } else {
                ExitCode::SUCCESS
            })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("LOGBM_LOG_LEVEL", "warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            error!("{e}");
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

