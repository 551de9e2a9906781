use std::fmt;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ExperimentSpec, SUCCESS_LINF};
use crate::error::Result;
use crate::solvers::{SolverKind, Status};

/// Metrics of one solver on one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub solver: SolverKind,
    pub n: usize,
    pub m: usize,
    pub s: usize,
    pub sigma0: f64,
    pub trial: usize,
    /// `None` when the solve failed; see `error`.
    pub status: Option<Status>,
    pub iters: usize,
    pub residual: f64,
    pub linf_err: f64,
    pub wall_ms: f64,
    pub error: Option<String>,
}

impl TrialRecord {
    pub fn failed(&self) -> bool {
        self.status.is_none()
    }

    pub fn succeeded(&self) -> bool {
        !self.failed() && self.linf_err <= SUCCESS_LINF
    }
}

/// Per-solver means over the trials that did not fail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub solver: SolverKind,
    pub n: usize,
    pub m: usize,
    pub s: usize,
    pub sigma0: f64,
    pub trials: usize,
    pub failed: usize,
    pub mean_residual: f64,
    pub mean_linf: f64,
    pub mean_wall_ms: f64,
    pub mean_iters: f64,
    /// Fraction of all trials with `‖x − x_orig‖∞ ≤ 1e-5`.
    pub success_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub solver: SolverKind,
    pub k: usize,
    pub mean_residual: f64,
}

/// Everything produced by one experiment run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub spec: ExperimentSpec,
    pub rows: Vec<AggregateRow>,
    pub trials: Vec<TrialRecord>,
    /// Per record: `‖b‖` and the residual after each iteration.
    residual_paths: Vec<(f64, Vec<f64>)>,
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    if count == 0 {
        f64::NAN
    } else {
        sum / count as f64
    }
}

impl ExperimentReport {
    pub(super) fn from_outcomes(spec: &ExperimentSpec, outcomes: Vec<(TrialRecord, f64, Vec<f64>)>) -> Self {
        let (trials, residual_paths): (Vec<_>, Vec<_>) =
            outcomes.into_iter().map(|(rec, b, path)| (rec, (b, path))).unzip();
        let rows = spec
            .solvers
            .iter()
            .map(|&solver| {
                let mine: Vec<&TrialRecord> = trials.iter().filter(|t| t.solver == solver).collect();
                let ok = || mine.iter().filter(|t| !t.failed());
                AggregateRow {
                    solver,
                    n: spec.n,
                    m: spec.m(),
                    s: spec.s(),
                    sigma0: spec.sigma0,
                    trials: mine.len(),
                    failed: mine.iter().filter(|t| t.failed()).count(),
                    mean_residual: mean(ok().map(|t| t.residual)),
                    mean_linf: mean(ok().map(|t| t.linf_err)),
                    mean_wall_ms: mean(ok().map(|t| t.wall_ms)),
                    mean_iters: mean(ok().map(|t| t.iters as f64)),
                    success_rate: mine.iter().filter(|t| t.succeeded()).count() as f64 / mine.len().max(1) as f64,
                }
            })
            .collect();
        ExperimentReport {
            spec: spec.clone(),
            rows,
            trials,
            residual_paths,
        }
    }

    pub fn row(&self, solver: SolverKind) -> Option<&AggregateRow> {
        self.rows.iter().find(|r| r.solver == solver)
    }

    /// Residual of `record_index` after `k ≥ 1` iterations, carrying the last
    /// value forward once the run has stopped.
    fn residual_at(&self, record_index: usize, k: usize) -> f64 {
        let (initial, path) = &self.residual_paths[record_index];
        match path.len() {
            0 => *initial,
            len => path[k.min(len) - 1],
        }
    }

    /// Mean `‖Axᵏ − b‖` across non-failed trials for `k = 1..=max_k`.
    pub fn trace_table(&self, max_k: usize) -> Vec<TraceRow> {
        let mut out = Vec::with_capacity(self.spec.solvers.len() * max_k);
        for &solver in &self.spec.solvers {
            let idx: Vec<usize> = (0..self.trials.len())
                .filter(|&i| self.trials[i].solver == solver && !self.trials[i].failed())
                .collect();
            for k in 1..=max_k {
                out.push(TraceRow {
                    solver,
                    k,
                    mean_residual: mean(idx.iter().map(|&i| self.residual_at(i, k))),
                });
            }
        }
        out
    }

    /// Per-iteration residuals of one record (empty for failed trials).
    pub fn residual_path(&self, record_index: usize) -> &[f64] {
        &self.residual_paths[record_index].1
    }

    pub const RESULTS_HEADER: &'static str = "solver,n,m,s,sigma0,trial,status,iters,residual,linf_err,wall_ms";
    pub const AGGREGATE_HEADER: &'static str =
        "solver,n,m,s,sigma0,trials,mean_residual,mean_linf,mean_wall_ms,mean_iters,success_rate";
    pub const TRACE_HEADER: &'static str = "solver,k,mean_residual";

    pub fn write_results_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{}", Self::RESULTS_HEADER)?;
        for t in &self.trials {
            writeln!(
                w,
                "{},{},{},{},{:e},{},{},{},{:e},{:e},{:e}",
                t.solver,
                t.n,
                t.m,
                t.s,
                t.sigma0,
                t.trial,
                t.status.map_or("failed", |s| s.as_str()),
                t.iters,
                t.residual,
                t.linf_err,
                t.wall_ms
            )?;
        }
        Ok(())
    }

    pub fn write_aggregate_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{}", Self::AGGREGATE_HEADER)?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{:e},{},{:e},{:e},{:e},{:e},{:e}",
                r.solver,
                r.n,
                r.m,
                r.s,
                r.sigma0,
                r.trials,
                r.mean_residual,
                r.mean_linf,
                r.mean_wall_ms,
                r.mean_iters,
                r.success_rate
            )?;
        }
        Ok(())
    }

    pub fn write_trace_csv<W: Write>(&self, mut w: W, max_k: usize) -> Result<()> {
        writeln!(w, "{}", Self::TRACE_HEADER)?;
        for row in self.trace_table(max_k) {
            writeln!(w, "{},{},{:e}", row.solver, row.k, row.mean_residual)?;
        }
        Ok(())
    }

    /// Writes `results.csv`, `aggregate.csv` and `trace.csv` into `dir`.
    pub fn write_all(&self, dir: impl AsRef<Path>, max_k: usize) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        let open = |name: &str| -> Result<std::io::BufWriter<std::fs::File>> {
            Ok(std::io::BufWriter::new(std::fs::File::create(dir.join(name))?))
        };
        self.write_results_csv(open("results.csv")?)?;
        self.write_aggregate_csv(open("aggregate.csv")?)?;
        self.write_trace_csv(open("trace.csv")?, max_k)?;
        Ok(())
    }
}

impl fmt::Display for ExperimentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Failed-only cells print as "-- --".
        let cell = |v: f64, prec: usize| {
            if v.is_nan() {
                "-- --".to_string()
            } else {
                format!("{v:.prec$e}")
            }
        };
        writeln!(
            f,
            "N = {}, M = {}, s = {}, sigma0 = {}, trials = {}",
            self.spec.n,
            self.spec.m(),
            self.spec.s(),
            self.spec.sigma0,
            self.spec.trials
        )?;
        writeln!(
            f,
            "{:<6} {:>12} {:>12} {:>12} {:>10} {:>8} {:>7}",
            "solver", "‖Ax-b‖", "‖x-x0‖∞", "wall ms", "iters", "success", "failed"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<6} {:>12} {:>12} {:>12} {:>10} {:>8.3} {:>7}",
                r.solver.name(),
                cell(r.mean_residual, 3),
                cell(r.mean_linf, 3),
                cell(r.mean_wall_ms, 3),
                if r.mean_iters.is_nan() { "-- --".into() } else { format!("{:.1}", r.mean_iters) },
                r.success_rate,
                r.failed
            )?;
        }
        Ok(())
    }
}
