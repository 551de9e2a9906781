//! Reproducible multi-trial experiments on Gaussian measurement ensembles.
//!
//! [`gen_instance`] draws one instance per `(base_seed, trial_index)`;
//! [`run_experiment`] runs every requested solver on every trial and reduces
//! the per-trial metrics to one [`AggregateRow`] per solver; the mean residual
//! per iteration comes from [`ExperimentReport::trace_table`].

mod generate;
mod report;

pub use generate::{gen_instance, InstanceRng};
pub use report::{AggregateRow, ExperimentReport, TraceRow, TrialRecord};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::solvers::{SolverConfig, SolverKind};

/// Trial count used throughout the reference experiments.
pub const DEFAULT_TRIALS: usize = 40;
/// Iterations shown in the per-iteration residual curves.
pub const DEFAULT_TRACE_LEN: usize = 100;
/// `‖x − x_orig‖∞` at or below this counts as a recovery.
pub const SUCCESS_LINF: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MRule {
    /// `M = N/2`
    Half,
    /// `M = N/4`
    Quarter,
    Explicit(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SRule {
    /// `s = 1% of N`
    Pct1,
    /// `s = 5% of N`
    Pct5,
    Explicit(usize),
}

fn default_trials() -> usize {
    DEFAULT_TRIALS
}

fn default_solvers() -> Vec<SolverKind> {
    vec![SolverKind::Gspa, SolverKind::Niht]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub n: usize,
    pub m_rule: MRule,
    pub s_rule: SRule,
    #[serde(default)]
    pub nonneg: bool,
    #[serde(default)]
    pub sigma0: f64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default = "default_solvers")]
    pub solvers: Vec<SolverKind>,
}

impl ExperimentSpec {
    /// The reference protocol at signal length `n`: `M = N/4`, `s = 5%N`,
    /// 40 trials, no noise.
    pub fn new(n: usize) -> Self {
        ExperimentSpec {
            n,
            m_rule: MRule::Quarter,
            s_rule: SRule::Pct5,
            nonneg: false,
            sigma0: 0.0,
            trials: DEFAULT_TRIALS,
            base_seed: 0,
            solvers: default_solvers(),
        }
    }

    pub fn m(&self) -> usize {
        match self.m_rule {
            MRule::Half => self.n / 2,
            MRule::Quarter => self.n / 4,
            MRule::Explicit(m) => m,
        }
    }

    pub fn s(&self) -> usize {
        match self.s_rule {
            SRule::Pct1 => (self.n / 100).max(1),
            SRule::Pct5 => (self.n * 5 / 100).max(1),
            SRule::Explicit(s) => s,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (n, m, s) = (self.n, self.m(), self.s());
        if !(s >= 1 && s < m && m < n) {
            return Err(Error::InvalidConfig(format!(
                "experiment needs 1 <= s < M < N, got s = {s}, M = {m}, N = {n}"
            )));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if !(self.sigma0 >= 0.0 && self.sigma0.is_finite()) {
            return Err(Error::InvalidConfig(format!("sigma0 must be nonnegative, got {}", self.sigma0)));
        }
        if self.solvers.is_empty() {
            return Err(Error::InvalidConfig("no solvers requested".into()));
        }
        if self.nonneg {
            if let Some(bad) = self.solvers.iter().find(|k| !k.supports_nonneg()) {
                return Err(Error::Unsupported(format!(
                    "{bad} does not support the nonnegativity constraint"
                )));
            }
        }
        Ok(())
    }
}

/// Knobs for [`run_experiment_with`].
#[derive(Debug, Clone)]
pub struct RunOptions {
    /// Worker threads for trials; 0 lets the pool decide.
    pub threads: usize,
    /// Base solver settings; `nonneg` is overridden by the spec.
    pub config: SolverConfig,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            threads: 1,
            config: SolverConfig::default(),
        }
    }
}

/// Runs the experiment serially with the default solver settings.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    run_experiment_with(spec, &RunOptions::default())
}

/// Mean residual per iteration for each solver, `k = 1..=max_k`.
pub fn trace_experiment(spec: &ExperimentSpec, max_k: usize) -> Result<Vec<TraceRow>> {
    if max_k == 0 {
        return Err(Error::InvalidConfig("max_k must be at least 1".into()));
    }
    Ok(run_experiment(spec)?.trace_table(max_k))
}

struct TrialOutcome {
    record: TrialRecord,
    initial_residual: f64,
    residuals: Vec<f64>,
}

fn run_trial(spec: &ExperimentSpec, trial: usize, cfg: &SolverConfig) -> Result<Vec<TrialOutcome>> {
    let inst = gen_instance(spec, trial as u64)?;
    let x_orig = inst.x_orig().expect("generated instances carry ground truth").clone();
    let initial_residual = linalg::norm(inst.b().view());
    let mut out = Vec::with_capacity(spec.solvers.len());
    for &solver in &spec.solvers {
        let base = TrialRecord {
            solver,
            n: inst.n(),
            m: inst.m(),
            s: inst.s(),
            sigma0: spec.sigma0,
            trial,
            status: None,
            iters: 0,
            residual: f64::NAN,
            linf_err: f64::NAN,
            wall_ms: f64::NAN,
            error: None,
        };
        let outcome = match solver.solve(&inst, cfg) {
            Ok(res) if res.x_final.iter().all(|v| v.is_finite()) => {
                let residual = inst.residual_norm(res.x_final.view())?;
                let linf_err = linalg::norm_inf((&res.x_final - &x_orig).view());
                TrialOutcome {
                    record: TrialRecord {
                        status: Some(res.status),
                        iters: res.iterations,
                        residual,
                        linf_err,
                        wall_ms: res.wall_time * 1e3,
                        ..base
                    },
                    initial_residual,
                    residuals: res.trace.records.iter().map(|r| r.residual).collect(),
                }
            }
            Ok(_) => TrialOutcome {
                record: TrialRecord {
                    error: Some("non-finite iterate".into()),
                    ..base
                },
                initial_residual,
                residuals: Vec::new(),
            },
            Err(e) => TrialOutcome {
                record: TrialRecord {
                    error: Some(e.to_string()),
                    ..base
                },
                initial_residual,
                residuals: Vec::new(),
            },
        };
        out.push(outcome);
    }
    Ok(out)
}

/// Runs every requested solver on every trial instance.
///
/// Trials may run in parallel; results are ordered by trial and solver and do
/// not depend on the thread count (wall times aside).
pub fn run_experiment_with(spec: &ExperimentSpec, opts: &RunOptions) -> Result<ExperimentReport> {
    spec.validate()?;
    let cfg = SolverConfig {
        nonneg: spec.nonneg,
        ..opts.config.clone()
    };
    cfg.validate()?;
    let trials: Vec<Vec<TrialOutcome>> = if opts.threads == 1 {
        (0..spec.trials)
            .map(|t| run_trial(spec, t, &cfg))
            .collect::<Result<_>>()?
    } else {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
        pool.install(|| {
            (0..spec.trials)
                .into_par_iter()
                .map(|t| run_trial(spec, t, &cfg))
                .collect::<Result<_>>()
        })?
    };
    Ok(ExperimentReport::from_outcomes(
        spec,
        trials
            .into_iter()
            .flatten()
            .map(|o| (o.record, o.initial_residual, o.residuals))
            .collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_dimensions() {
        let spec = ExperimentSpec::new(1000);
        assert_eq!((spec.m(), spec.s()), (250, 50));
        let spec = ExperimentSpec {
            m_rule: MRule::Half,
            s_rule: SRule::Pct1,
            ..ExperimentSpec::new(1000)
        };
        assert_eq!((spec.m(), spec.s()), (500, 10));
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let mut spec = ExperimentSpec::new(1000);
        spec.s_rule = SRule::Explicit(300);
        assert!(spec.validate().is_err());
        let mut spec = ExperimentSpec::new(1000);
        spec.trials = 0;
        assert!(spec.validate().is_err());
        let mut spec = ExperimentSpec::new(1000);
        spec.nonneg = true;
        spec.solvers = vec![SolverKind::Gspa, SolverKind::Sp];
        assert!(matches!(spec.validate(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn spec_json_uses_defaults() {
        let spec: ExperimentSpec =
            serde_json::from_str(r#"{"n": 200, "m_rule": {"explicit": 50}, "s_rule": "pct5"}"#).unwrap();
        assert_eq!(spec.trials, DEFAULT_TRIALS);
        assert_eq!(spec.m(), 50);
        assert_eq!(spec.s(), 10);
        assert_eq!(spec.solvers, vec![SolverKind::Gspa, SolverKind::Niht]);
    }
}
