//! Probe-cost sweeps: run each algorithm over a (T, D) grid of random
//! instances and tabulate probe count, maximum probe degree, and total
//! probe degree per run.
//!
//! Dense interpolation is executed only up to a configurable degree cap;
//! beyond it the sweep emits a definition-derived row (degree_bound + 1
//! probes of degree 1, which is exact for the deterministic baseline) and
//! marks it as not executed.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::interp::{dense_interpolate, garg_schost, interpolate, InterpConfig};
use crate::ledger::ProbeLedger;
use crate::ring::RingSpec;
use crate::slp::Slp;
use crate::sparse::SparsePoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Recursive,
    GargSchost,
    Dense,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Recursive => "recursive",
            Algorithm::GargSchost => "gargschost",
            Algorithm::Dense => "dense",
        }
    }

    pub fn all() -> [Algorithm; 3] {
        [Algorithm::Recursive, Algorithm::GargSchost, Algorithm::Dense]
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "recursive" => Ok(Algorithm::Recursive),
            "gargschost" => Ok(Algorithm::GargSchost),
            "dense" => Ok(Algorithm::Dense),
            other => Err(format!("unknown algorithm `{other}`")),
        }
    }
}

/// One (algorithm, instance, seed) measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub algorithm: &'static str,
    pub sparsity_bound: u64,
    pub degree_bound: u64,
    pub seed: u64,
    pub trial: u64,
    pub probes: usize,
    pub max_degree: u64,
    pub total_degree: u128,
    pub success: bool,
    /// False for definition-derived dense rows above the execution cap.
    pub executed: bool,
    pub wall_ms: f64,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub sparsity_bounds: Vec<u64>,
    pub degree_bounds: Vec<u64>,
    pub trials: u64,
    pub failure_bound: f64,
    pub seed: u64,
    pub ring: RingSpec,
    /// Dense runs for real only when degree_bound <= this.
    pub dense_execution_cap: u64,
}

impl BenchConfig {
    pub fn new(
        sparsity_bounds: Vec<u64>,
        degree_bounds: Vec<u64>,
        trials: u64,
        failure_bound: f64,
        seed: u64,
        ring: RingSpec,
    ) -> Self {
        BenchConfig {
            sparsity_bounds,
            degree_bounds,
            trials,
            failure_bound,
            seed,
            ring,
            dense_execution_cap: 1 << 12,
        }
    }
}

/// A fixed 64-bit mixer; used to derive independent per-trial seeds so
/// trials can run concurrently yet reproducibly.
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

fn trial_seed(base: u64, sparsity_bound: u64, degree_bound: u64, trial: u64) -> u64 {
    let mut h = splitmix64(base);
    h = splitmix64(h ^ sparsity_bound);
    h = splitmix64(h ^ degree_bound.rotate_left(17));
    splitmix64(h ^ trial.rotate_left(33))
}

/// Run every algorithm on every grid cell for every trial. Trials execute
/// in parallel; records come back in deterministic grid order
/// (T-major, then D, then trial, then algorithm).
pub fn run_sweep(cfg: &BenchConfig) -> Vec<BenchRecord> {
    let mut work = Vec::new();
    for &t in &cfg.sparsity_bounds {
        for &d in &cfg.degree_bounds {
            for trial in 0..cfg.trials {
                work.push((t, d, trial));
            }
        }
    }
    work.par_iter()
        .map(|&(t, d, trial)| run_cell(cfg, t, d, trial))
        .collect::<Vec<Vec<BenchRecord>>>()
        .into_iter()
        .flatten()
        .collect()
}

fn run_cell(cfg: &BenchConfig, t: u64, d: u64, trial: u64) -> Vec<BenchRecord> {
    let seed = trial_seed(cfg.seed, t, d, trial);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let truth = SparsePoly::random(cfg.ring, t, d, &mut rng)
        .expect("grid cells use feasible parameters");
    let program = Slp::from_sparse(&truth);

    Algorithm::all()
        .iter()
        .map(|&algorithm| {
            let base = BenchRecord {
                algorithm: algorithm.name(),
                sparsity_bound: t,
                degree_bound: d,
                seed,
                trial,
                probes: 0,
                max_degree: 0,
                total_degree: 0,
                success: false,
                executed: true,
                wall_ms: 0.0,
            };
            match algorithm {
                Algorithm::Recursive => {
                    let run_cfg =
                        InterpConfig::new(t, d, cfg.failure_bound, cfg.ring, splitmix64(seed))
                            .expect("validated failure bound");
                    let start = Instant::now();
                    let (result, ledger) = interpolate(&program, &run_cfg);
                    BenchRecord {
                        probes: ledger.count(),
                        max_degree: ledger.max_degree(),
                        total_degree: ledger.total_cost(),
                        success: result == truth,
                        wall_ms: start.elapsed().as_secs_f64() * 1e3,
                        ..base
                    }
                }
                Algorithm::GargSchost => {
                    let ledger = ProbeLedger::new();
                    let mut algo_rng = ChaCha12Rng::seed_from_u64(splitmix64(seed ^ 1));
                    let start = Instant::now();
                    let outcome = garg_schost(
                        &program,
                        t,
                        d,
                        cfg.failure_bound,
                        &mut algo_rng,
                        &ledger,
                    );
                    BenchRecord {
                        probes: ledger.count(),
                        max_degree: ledger.max_degree(),
                        total_degree: ledger.total_cost(),
                        success: outcome.map(|f| f == truth).unwrap_or(false),
                        wall_ms: start.elapsed().as_secs_f64() * 1e3,
                        ..base
                    }
                }
                Algorithm::Dense => {
                    if d <= cfg.dense_execution_cap {
                        let ledger = ProbeLedger::new();
                        let start = Instant::now();
                        let outcome = dense_interpolate(&program, d, &ledger);
                        BenchRecord {
                            probes: ledger.count(),
                            max_degree: ledger.max_degree(),
                            total_degree: ledger.total_cost(),
                            success: outcome.map(|f| f == truth).unwrap_or(false),
                            wall_ms: start.elapsed().as_secs_f64() * 1e3,
                            ..base
                        }
                    } else {
                        // Cost model row: the deterministic baseline always
                        // issues exactly degree_bound + 1 probes of degree 1.
                        BenchRecord {
                            probes: (d + 1) as usize,
                            max_degree: 1,
                            total_degree: (d + 1) as u128,
                            success: true,
                            executed: false,
                            ..base
                        }
                    }
                }
            }
        })
        .collect()
}

pub const CSV_HEADER: &str = "# sparse-interp bench v1\n\
    algorithm,T,D,seed,trial,probes,max_degree,total_degree,success,executed,wall_ms\n";

/// Render records as CSV. All columns are decimal integers except the
/// trailing wall-clock column.
pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{:.3}\n",
            r.algorithm,
            r.sparsity_bound,
            r.degree_bound,
            r.seed,
            r.trial,
            r.probes,
            r.max_degree,
            r.total_degree,
            u8::from(r.success),
            u8::from(r.executed),
            r.wall_ms
        ));
    }
    out
}

/// Mean total probe degree per algorithm per (T, D) cell.
pub fn summarize(records: &[BenchRecord]) -> String {
    let mut cells: Vec<(&'static str, u64, u64)> = Vec::new();
    for r in records {
        let key = (r.algorithm, r.sparsity_bound, r.degree_bound);
        if !cells.contains(&key) {
            cells.push(key);
        }
    }
    let mut out = String::from("algorithm             T            D   mean total degree   success\n");
    for (algorithm, t, d) in cells {
        let group: Vec<&BenchRecord> = records
            .iter()
            .filter(|r| (r.algorithm, r.sparsity_bound, r.degree_bound) == (algorithm, t, d))
            .collect();
        let mean: f64 = group.iter().map(|r| r.total_degree as f64).sum::<f64>()
            / group.len().max(1) as f64;
        let successes = group.iter().filter(|r| r.success).count();
        out.push_str(&format!(
            "{algorithm:<12} {t:>12} {d:>12} {mean:>19.1} {successes:>4}/{}\n",
            group.len()
        ));
    }
    out
}

/// Mean total probe degree for one algorithm and cell, if any records match.
pub fn mean_total_degree(
    records: &[BenchRecord],
    algorithm: Algorithm,
    sparsity_bound: u64,
    degree_bound: u64,
) -> Option<f64> {
    let group: Vec<&BenchRecord> = records
        .iter()
        .filter(|r| {
            r.algorithm == algorithm.name()
                && r.sparsity_bound == sparsity_bound
                && r.degree_bound == degree_bound
        })
        .collect();
    if group.is_empty() {
        return None;
    }
    Some(group.iter().map(|r| r.total_degree as f64).sum::<f64>() / group.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config() -> BenchConfig {
        BenchConfig::new(
            vec![2, 4],
            vec![256],
            2,
            0.05,
            99,
            RingSpec::prime_field(1_000_003).unwrap(),
        )
    }

    #[test]
    fn sweep_is_deterministic_and_ordered() {
        let cfg = tiny_config();
        let a = run_sweep(&cfg);
        let b = run_sweep(&cfg);
        // 2 sparsity bounds x 1 degree bound x 2 trials x 3 algorithms.
        assert_eq!(a.len(), 12);
        for (x, y) in a.iter().zip(&b) {
            // Everything except wall time must match run to run.
            assert_eq!(
                (
                    x.algorithm,
                    x.sparsity_bound,
                    x.degree_bound,
                    x.seed,
                    x.trial,
                    x.probes,
                    x.max_degree,
                    x.total_degree,
                    x.success,
                    x.executed
                ),
                (
                    y.algorithm,
                    y.sparsity_bound,
                    y.degree_bound,
                    y.seed,
                    y.trial,
                    y.probes,
                    y.max_degree,
                    y.total_degree,
                    y.success,
                    y.executed
                )
            );
        }
        // Deterministic grid order: T-major, then trial, then algorithm.
        assert_eq!(a[0].algorithm, "recursive");
        assert_eq!(a[0].sparsity_bound, 2);
        assert_eq!(a[5].trial, 1);
        assert_eq!(a[6].sparsity_bound, 4);
    }

    #[test]
    fn dense_rows_above_the_cap_are_cost_model_rows() {
        let mut cfg = tiny_config();
        cfg.degree_bounds = vec![1 << 20];
        cfg.sparsity_bounds = vec![2];
        cfg.trials = 1;
        let records = run_sweep(&cfg);
        let dense: Vec<&BenchRecord> =
            records.iter().filter(|r| r.algorithm == "dense").collect();
        assert_eq!(dense.len(), 1);
        assert!(!dense[0].executed);
        assert_eq!(dense[0].probes, (1 << 20) + 1);
        assert_eq!(dense[0].max_degree, 1);
        assert_eq!(dense[0].total_degree, (1 << 20) + 1);
    }

    #[test]
    fn csv_has_versioned_header_and_integer_flags() {
        let cfg = tiny_config();
        let records = run_sweep(&cfg);
        let csv = to_csv(&records);
        assert!(csv.starts_with("# sparse-interp bench v1\nalgorithm,"));
        let line = csv.lines().nth(2).unwrap();
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 11);
        assert!(fields[8] == "0" || fields[8] == "1");
    }
}
