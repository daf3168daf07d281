//! Phase-transition and delta-scaling sweeps.
//!
//! Work is split into (cell, trial) units. Each unit draws everything it
//! needs from a seed derived from `(master_seed, m, s, trial)`, units run on
//! the rayon pool, and results are aggregated by cell in a fixed order, so
//! the table does not depend on the worker count.

use std::io::Write;

use rand::seq::index;
use rand_distr::{Distribution as _, StandardNormal};
use rayon::prelude::*;

use crate::analysis::{binomial, restricted_isometry_constant, DEFAULT_ENUMERATION_BUDGET};
use crate::error::{Error, Result};
use crate::group::random_sampling_set;
use crate::linalg::{CMatrix, CVector, C64};
use crate::recovery::{iht, omp, recovery_success, DEFAULT_MAX_ITERS, DEFAULT_TOL};
use crate::representation::Representation;
use crate::rng;
use crate::sensing::{measurement_matrix_from_spec, GeneratorSpec};

use super::config::{ExperimentConfig, Solver};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "ORBIT_RIP_THREADS";

pub const CSV_HEADER: [&str; 8] = [
    "m",
    "s",
    "trials",
    "successes",
    "success_rate",
    "median_rel_error",
    "median_delta_s",
    "seed",
];

#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub m: usize,
    pub s: usize,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub median_relative_error: f64,
    pub median_delta_s: Option<f64>,
    /// Cell seed, derived from the master seed and `(m, s)`.
    pub seed: u64,
}

/// Least-squares slope of `ln(median delta_s)` against `ln m` for one sparsity.
#[derive(Clone, Debug, PartialEq)]
pub struct SlopeFit {
    pub s: usize,
    pub slope: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
    pub slopes: Vec<SlopeFit>,
}

fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

impl ResultTable {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
        out.write_record(CSV_HEADER).map_err(csv_err)?;
        for r in &self.rows {
            out.write_record([
                r.m.to_string(),
                r.s.to_string(),
                r.trials.to_string(),
                r.successes.to_string(),
                fmt_float(r.success_rate),
                fmt_float(r.median_relative_error),
                r.median_delta_s.map(fmt_float).unwrap_or_default(),
                r.seed.to_string(),
            ])
            .map_err(csv_err)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn row(&self, m: usize, s: usize) -> Option<&ResultRow> {
        self.rows.iter().find(|r| r.m == m && r.s == s)
    }
}

/// Worker count from `ORBIT_RIP_THREADS`, if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&n| n > 0)
}

/// Runs `f` on a dedicated pool of `threads` workers.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Seed of trial `t` in cell `(m, s)`.
pub fn trial_seed(master_seed: u64, m: usize, s: usize, t: usize) -> u64 {
    rng::derive_seed(master_seed, &[m as u64, s as u64, t as u64])
}

fn cell_seed(master_seed: u64, m: usize, s: usize) -> u64 {
    rng::derive_seed(master_seed, &[m as u64, s as u64])
}

/// Random `s`-sparse unit vector: uniform support, complex standard normal
/// nonzeros, normalized.
pub fn random_sparse_signal(n: usize, s: usize, seed: u64) -> CVector {
    let mut rng = rng::stream(seed, rng::TAG_SIGNAL);
    let support = index::sample(&mut rng, n, s);
    let mut x = CVector::zeros(n);
    let half = std::f64::consts::FRAC_1_SQRT_2;
    for i in support.iter() {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        x[i] = C64::new(re * half, im * half);
    }
    let norm = x.norm();
    x / C64::from(norm)
}

/// The measurement matrix of one trial.
pub type MatrixSource<'a> = dyn Fn(usize, usize, u64) -> Result<CMatrix> + Sync + 'a;

struct TrialOutcome {
    success: bool,
    relative_error: f64,
    delta: Option<f64>,
}

fn run_trial(
    config: &ExperimentConfig,
    source: &MatrixSource<'_>,
    m: usize,
    s: usize,
    t: usize,
    compute_delta: bool,
) -> Result<TrialOutcome> {
    let seed = trial_seed(config.master_seed, m, s, t);
    let phi = source(m, s, seed)?;
    let x = random_sparse_signal(phi.ncols(), s, seed);
    let y = &phi * &x;
    let result = match config.solver {
        Solver::Iht => iht(&phi, &y, s, DEFAULT_MAX_ITERS, DEFAULT_TOL)?,
        Solver::Omp => omp(&phi, &y, s)?,
    };
    let success = recovery_success(&x, &result, config.success_threshold)?;
    let relative_error = (&result.estimate - &x).norm() / x.norm();
    let delta = if compute_delta {
        Some(restricted_isometry_constant(&phi, s)?.delta)
    } else {
        None
    };
    Ok(TrialOutcome {
        success,
        relative_error,
        delta,
    })
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let k = xs.len();
    if k == 0 {
        f64::NAN
    } else if k % 2 == 1 {
        xs[k / 2]
    } else {
        0.5 * (xs[k / 2 - 1] + xs[k / 2])
    }
}

/// Ordinary least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() < 2 || xs.len() != ys.len() {
        return None;
    }
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Some(sxy / sxx)
}

fn orbit_source<'a>(
    config: &'a ExperimentConfig,
    rep: &'a Representation,
) -> Result<impl Fn(usize, usize, u64) -> Result<CMatrix> + Sync + 'a> {
    let allowed = config.allowed_elements(rep.group())?;
    Ok(move |m: usize, _s: usize, seed: u64| {
        let omega = random_sampling_set(rep.group(), m, allowed.as_deref(), seed)?;
        let spec = GeneratorSpec {
            distribution: config.distribution,
            dim: rep.dim(),
            seed,
        };
        Ok(measurement_matrix_from_spec(rep, &omega, &spec)?.into_entries())
    })
}

/// Success statistics for every `(m, s)` cell of the config.
pub fn run_phase_transition(config: &ExperimentConfig) -> Result<ResultTable> {
    let rep = config.validate()?;
    let source = orbit_source(config, &rep)?;
    run_cells(config, &source, config.compute_delta)
}

/// Like [`run_phase_transition`] with `delta_s` computed in every trial, plus
/// the fitted log-log slope of the median `delta_s` against `m` per sparsity.
pub fn run_delta_scaling(config: &ExperimentConfig) -> Result<ResultTable> {
    let rep = config.validate()?;
    check_budget(config, rep.dim())?;
    let source = orbit_source(config, &rep)?;
    run_cells(config, &source, true)
}

/// [`run_delta_scaling`] with the measurement matrices supplied by `source`
/// instead of the configured representation.
pub fn run_delta_scaling_with(config: &ExperimentConfig, source: &MatrixSource<'_>) -> Result<ResultTable> {
    if config.trials_per_cell == 0 {
        return Err(Error::Config("trials_per_cell must be at least 1".into()));
    }
    run_cells(config, source, true)
}

fn check_budget(config: &ExperimentConfig, n: usize) -> Result<()> {
    for &s in &config.sparsity_list {
        let count = binomial(n, s);
        if count > DEFAULT_ENUMERATION_BUDGET {
            return Err(Error::EnumerationBudget {
                n,
                s,
                count,
                budget: DEFAULT_ENUMERATION_BUDGET,
            });
        }
    }
    Ok(())
}

fn run_cells(config: &ExperimentConfig, source: &MatrixSource<'_>, compute_delta: bool) -> Result<ResultTable> {
    let cells: Vec<(usize, usize)> = config
        .sparsity_list
        .iter()
        .flat_map(|&s| config.m_list.iter().map(move |&m| (m, s)))
        .collect();
    let trials = config.trials_per_cell;
    let units: Vec<(usize, usize, usize)> = cells
        .iter()
        .flat_map(|&(m, s)| (0..trials).map(move |t| (m, s, t)))
        .collect();

    let outcomes: Vec<TrialOutcome> = units
        .par_iter()
        .map(|&(m, s, t)| run_trial(config, source, m, s, t, compute_delta))
        .collect::<Result<_>>()?;

    let rows: Vec<ResultRow> = cells
        .iter()
        .zip(outcomes.chunks(trials))
        .map(|(&(m, s), chunk)| {
            let successes = chunk.iter().filter(|o| o.success).count();
            ResultRow {
                m,
                s,
                trials,
                successes,
                success_rate: successes as f64 / trials as f64,
                median_relative_error: median(chunk.iter().map(|o| o.relative_error).collect()),
                median_delta_s: compute_delta.then(|| median(chunk.iter().filter_map(|o| o.delta).collect())),
                seed: cell_seed(config.master_seed, m, s),
            }
        })
        .collect();

    let slopes = if compute_delta {
        config
            .sparsity_list
            .iter()
            .map(|&s| {
                let (xs, ys): (Vec<f64>, Vec<f64>) = rows
                    .iter()
                    .filter(|r| r.s == s)
                    .filter_map(|r| {
                        r.median_delta_s
                            .filter(|d| *d > 0.0)
                            .map(|d| ((r.m as f64).ln(), d.ln()))
                    })
                    .unzip();
                SlopeFit {
                    s,
                    slope: fit_slope(&xs, &ys),
                }
            })
            .collect()
    } else {
        Vec::new()
    };
    Ok(ResultTable { rows, slopes })
}
