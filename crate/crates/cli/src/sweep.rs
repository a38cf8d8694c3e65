//! Seeded inequality sweeps with CSV rows and a JSON summary.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use logbm_core::inequalities::{
    chain_deficits, lbm_deficit, lm_deficit, projection_rlm_deficit, rlbm_deficit,
    tilde_vs_wulff_deficit, weak_rlm_deficit, DEFAULT_RESOLUTION, DEFAULT_T_GRID, EQUALITY_TOL,
};
use logbm_core::{DeficitReport, LogBlaschkePath, PathOptions, SolverConfig, Verdict};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};
use crate::random::{instance_seed, random_supp_matched_pair};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Lbm,
    Rlbm,
    TildeVsWulff,
    Lm,
    WeakRlm,
    ProjRlm,
    Chain,
}

impl Check {
    pub fn uses_t(self) -> bool {
        matches!(self, Check::Lbm | Check::Rlbm | Check::TildeVsWulff | Check::Chain)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub solver: f64,
    pub resolution: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            solver: SolverConfig::default().tol,
            resolution: DEFAULT_RESOLUTION,
        }
    }
}

impl Tolerances {
    /// The tolerance set written into every row.
    pub fn label(&self) -> String {
        format!("solver={:e};equality={:e};m={}", self.solver, EQUALITY_TOL, self.resolution)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub dimension: usize,
    /// Number of random body pairs.
    pub pairs: usize,
    /// Normal pairs sampled per body before pruning.
    pub facets: usize,
    pub t_grid: Vec<f64>,
    pub checks: Vec<Check>,
    pub tolerances: Tolerances,
    #[serde(skip)]
    pub out_dir: PathBuf,
    /// Worker threads; 0 means one per core.
    #[serde(skip)]
    pub jobs: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 0,
            dimension: 2,
            pairs: 10,
            facets: 6,
            t_grid: DEFAULT_T_GRID.to_vec(),
            checks: vec![Check::Rlbm],
            tolerances: Tolerances::default(),
            out_dir: PathBuf::from("."),
            jobs: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(2..=4).contains(&self.dimension) {
            return Err(CliError::Config(format!("dimension {} is outside 2..=4", self.dimension)));
        }
        if self.facets < self.dimension {
            return Err(CliError::Config(format!(
                "at least {} normal pairs are needed, got {}",
                self.dimension, self.facets
            )));
        }
        if let Some(t) = self.t_grid.iter().find(|t| !(0.0..=1.0).contains(*t)) {
            return Err(CliError::Config(format!("t = {t} is outside [0, 1]")));
        }
        if !(self.tolerances.solver > 0.0) {
            return Err(CliError::Config("solver tolerance must be positive".into()));
        }
        Ok(())
    }

    /// First 16 hex digits of the SHA-256 of the serialized config.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

/// One CSV row; the first nine columns are the fixed schema.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub check: String,
    pub t: Option<f64>,
    pub dim: usize,
    pub seed: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub deficit: f64,
    pub budget: f64,
    pub verdict: String,
    pub config_hash: String,
    pub tol: String,
}

impl Row {
    pub fn from_report(r: &DeficitReport, dim: usize, seed: u64, hash: &str, tol: &str) -> Self {
        Row {
            check: r.name.to_string(),
            t: r.t,
            dim,
            seed,
            lhs: r.lhs,
            rhs: r.rhs,
            deficit: r.deficit,
            budget: r.error_budget,
            verdict: r.verdict.as_str().to_string(),
            config_hash: hash.to_string(),
            tol: tol.to_string(),
        }
    }

    fn key_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.check
            .cmp(&other.check)
            .then(self.dim.cmp(&other.dim))
            .then(self.seed.cmp(&other.seed))
            .then(match (self.t, other.t) {
                (Some(a), Some(b)) => a.total_cmp(&b),
                (a, b) => a.is_some().cmp(&b.is_some()),
            })
    }
}

pub fn sort_rows(rows: &mut [Row]) {
    rows.sort_by(Row::key_cmp);
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub satisfied: usize,
    pub equality_within_tol: usize,
    pub violated_beyond_budget: usize,
    pub worst_deficit: Option<f64>,
    /// `deficit / scale` proxy, `deficit / max(|lhs|, |rhs|)`.
    pub worst_relative: Option<f64>,
    pub worst_seed: Option<u64>,
    pub worst_t: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub config_hash: String,
    pub instances: usize,
    pub failed_seeds: Vec<u64>,
    pub rows: usize,
    pub any_violation: bool,
    pub checks: BTreeMap<String, CheckSummary>,
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub rows: Vec<Row>,
    pub summary: Summary,
}

/// Every row for a single pair.
pub fn evaluate_pair(config: &ExperimentConfig, seed: u64, hash: &str) -> Result<Vec<Row>> {
    let n = config.dimension;
    let tol = config.tolerances.label();
    let m = config.tolerances.resolution;
    let (k0, k1) = random_supp_matched_pair(seed, n, config.facets)?;
    let options = PathOptions {
        solver: SolverConfig {
            tol: config.tolerances.solver,
            ..SolverConfig::default()
        },
        ..PathOptions::default()
    };
    let path = LogBlaschkePath::with_options(k0.clone(), k1.clone(), options)?;
    let mut reports: Vec<DeficitReport> = Vec::new();
    for &check in &config.checks {
        if check.uses_t() {
            for &t in &config.t_grid {
                match check {
                    Check::Lbm => reports.push(lbm_deficit(&k0, &k1, t, m)?),
                    Check::Rlbm => reports.push(rlbm_deficit(&path, t)?),
                    Check::TildeVsWulff => reports.push(tilde_vs_wulff_deficit(&path, t, m)?.0),
                    Check::Chain => {
                        let c = chain_deficits(&path, t, m)?;
                        reports.extend(c.all().into_iter().cloned());
                    }
                    _ => unreachable!(),
                }
            }
        } else {
            match check {
                Check::Lm => reports.push(lm_deficit(&k0, &k1)?),
                Check::WeakRlm => reports.push(weak_rlm_deficit(&k0, &k1)?),
                Check::ProjRlm => reports.push(worst_projection(&k0, &k1)?),
                _ => unreachable!(),
            }
        }
    }
    Ok(reports
        .iter()
        .map(|r| Row::from_report(r, n, seed, hash, &tol))
        .collect())
}

/// Projection deficit minimized over the facet normals of `k`.
pub fn worst_projection(
    k: &logbm_core::SymmetricPolytope,
    l: &logbm_core::SymmetricPolytope,
) -> Result<DeficitReport> {
    let mut worst: Option<DeficitReport> = None;
    for u in k.normals() {
        let r = projection_rlm_deficit(k, l, u)?.report;
        if worst.as_ref().is_none_or(|w| r.deficit / r.scale < w.deficit / w.scale) {
            worst = Some(r);
        }
    }
    worst.ok_or_else(|| CliError::Config("body has no normals".into()))
}

pub fn summarize(config: &ExperimentConfig, rows: &[Row], failed_seeds: Vec<u64>) -> Summary {
    let mut checks: BTreeMap<String, CheckSummary> = BTreeMap::new();
    for r in rows {
        let s = checks.entry(r.check.clone()).or_default();
        match r.verdict.as_str() {
            v if v == Verdict::Satisfied.as_str() => s.satisfied += 1,
            v if v == Verdict::EqualityWithinTol.as_str() => s.equality_within_tol += 1,
            _ => s.violated_beyond_budget += 1,
        }
        if s.worst_deficit.is_none_or(|w| r.deficit < w) {
            s.worst_deficit = Some(r.deficit);
            s.worst_relative = Some(r.deficit / r.lhs.abs().max(r.rhs.abs()).max(f64::MIN_POSITIVE));
            s.worst_seed = Some(r.seed);
            s.worst_t = r.t;
        }
    }
    let any_violation = checks.values().any(|c| c.violated_beyond_budget > 0);
    Summary {
        config_hash: config.hash(),
        instances: config.pairs,
        failed_seeds,
        rows: rows.len(),
        any_violation,
        checks,
    }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<SweepReport> {
    config.validate()?;
    let hash = config.hash();
    let seeds: Vec<u64> = if config.checks.is_empty() {
        Vec::new()
    } else {
        (0..config.pairs as u64).map(|i| instance_seed(config.seed, i)).collect()
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| CliError::Config(e.to_string()))?;
    let results: Vec<(u64, Result<Vec<Row>>)> = pool.install(|| {
        seeds
            .par_iter()
            .map(|&s| (s, evaluate_pair(config, s, &hash)))
            .collect()
    });
    let mut rows = Vec::new();
    let mut failed = Vec::new();
    for (seed, r) in results {
        match r {
            Ok(mut rs) => rows.append(&mut rs),
            Err(e) => {
                log::warn!("instance {seed} skipped: {e}");
                failed.push(seed);
            }
        }
    }
    sort_rows(&mut rows);
    failed.sort_unstable();
    let summary = summarize(config, &rows, failed);
    Ok(SweepReport { rows, summary })
}

pub fn rows_to_csv(rows: &[Row]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(["check", "t", "dim", "seed", "lhs", "rhs", "deficit", "budget", "verdict", "config_hash", "tol"])?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| CliError::Config(e.to_string()))
}

/// Writes `sweep.csv` and `summary.json`, returning their paths.
pub fn write_reports(report: &SweepReport, out_dir: &Path) -> Result<(PathBuf, PathBuf)> {
    std::fs::create_dir_all(out_dir).map_err(|source| CliError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let csv_path = out_dir.join("sweep.csv");
    std::fs::write(&csv_path, rows_to_csv(&report.rows)?).map_err(|source| CliError::Io {
        path: csv_path.clone(),
        source,
    })?;
    let json_path = out_dir.join("summary.json");
    crate::io::write_json(&json_path, &report.summary)?;
    Ok((csv_path, json_path))
}
