//! Sparse solvers sharing one configuration, result and trace schema.
//!
//! * [`gspa_solve`]: projected gradient with a support-equality shortcut and
//!   Armijo-type backtracking when the support moves.
//! * [`niht_solve`]: normalized iterative hard thresholding.
//! * [`cosamp_solve`], [`sp_solve`]: support-swap pursuits with least-squares
//!   refits.

mod armijo;
mod config;
mod gspa;
mod niht;
mod pursuit;
mod trace;

use std::cell::OnceCell;

pub use armijo::{armijo_search, ArmijoStep, SearchFailure};
pub use config::{SolverConfig, StepPolicy};
pub use gspa::gspa_solve;
pub use niht::niht_solve;
pub use pursuit::{cosamp_solve, sp_solve};
pub use trace::{IterationRecord, IterationTrace, SolveResult, Status};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::ProblemInstance;
use crate::spectral::{lipschitz_constant, SpectralInfo};

/// Solver selector used by the benchmark harness and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Gspa,
    Niht,
    #[serde(rename = "csmp", alias = "cosamp")]
    Cosamp,
    Sp,
}

impl SolverKind {
    pub const ALL: [SolverKind; 4] = [SolverKind::Gspa, SolverKind::Niht, SolverKind::Cosamp, SolverKind::Sp];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Gspa => "GSPA",
            SolverKind::Niht => "NIHT",
            SolverKind::Cosamp => "CSMP",
            SolverKind::Sp => "SP",
        }
    }

    pub fn supports_nonneg(self) -> bool {
        matches!(self, SolverKind::Gspa | SolverKind::Niht)
    }

    pub fn solve(self, inst: &ProblemInstance, cfg: &SolverConfig) -> Result<SolveResult> {
        match self {
            SolverKind::Gspa => gspa_solve(inst, cfg),
            SolverKind::Niht => niht_solve(inst, cfg),
            SolverKind::Cosamp => cosamp_solve(inst, cfg),
            SolverKind::Sp => sp_solve(inst, cfg),
        }
    }
}

impl std::str::FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gspa" => Ok(SolverKind::Gspa),
            "niht" => Ok(SolverKind::Niht),
            "cosamp" | "csmp" => Ok(SolverKind::Cosamp),
            "sp" => Ok(SolverKind::Sp),
            other => Err(Error::InvalidConfig(format!("unknown solver '{other}'"))),
        }
    }
}

impl std::fmt::Display for SolverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Power iteration computed on first use; adaptive runs usually never need it.
pub(crate) struct LazySpectrum<'a> {
    inst: &'a ProblemInstance,
    cell: OnceCell<SpectralInfo>,
}

impl<'a> LazySpectrum<'a> {
    pub(crate) fn new(inst: &'a ProblemInstance) -> Self {
        LazySpectrum {
            inst,
            cell: OnceCell::new(),
        }
    }

    pub(crate) fn l_r(&self) -> f64 {
        self.cell.get_or_init(|| lipschitz_constant(self.inst.a())).l_r
    }

    /// `0.99 / l_r`, the default fixed step.
    pub(crate) fn safe_step(&self) -> Result<f64> {
        let l = self.l_r();
        if l > 0.0 {
            Ok(0.99 / l)
        } else {
            Err(Error::InvalidConfig("l_r = 0 (A is the zero matrix); no step 0 < α < 1/l_r exists".into()))
        }
    }
}
