use std::io::Write;

use ndarray::Array1;
use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Why a solver stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// `‖x^{k+1} − x^k‖ ≤ ε`.
    ConvergedEpsilon,
    /// Support-swap pursuits only: residual at most `ε` or no longer improving.
    ConvergedResidual,
    MaxIter,
    /// No acceptable step within `max_backtracks` trials.
    StalledBacktracking,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::ConvergedEpsilon => "converged_epsilon",
            Status::ConvergedResidual => "converged_residual",
            Status::MaxIter => "max_iter",
            Status::StalledBacktracking => "stalled_backtracking",
        }
    }
}

/// One accepted iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub k: usize,
    /// `r(x^{k+1})`.
    pub objective: f64,
    /// `‖Ax^{k+1} − b‖`.
    pub residual: f64,
    /// Accepted step; 1 for the least-squares refits of the pursuits.
    pub alpha: f64,
    pub backtracks: usize,
    pub support_changed: bool,
    /// `‖x^{k+1} − x^k‖`.
    pub delta_norm: f64,
    /// Adaptive GSPA only: the support-equal trial point was refused for
    /// insufficient decrease.
    #[serde(default)]
    pub shortcut_rejected: bool,
    /// Pursuits only: a least-squares subproblem needed a ridge.
    #[serde(default)]
    pub regularized: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IterationTrace {
    pub records: Vec<IterationRecord>,
}

impl IterationTrace {
    pub const CSV_HEADER: &'static str = "k,objective,residual,alpha,backtracks,support_changed,delta_norm";

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> Option<&IterationRecord> {
        self.records.last()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{}", Self::CSV_HEADER)?;
        for r in &self.records {
            writeln!(
                w,
                "{},{:e},{:e},{:e},{},{},{:e}",
                r.k, r.objective, r.residual, r.alpha, r.backtracks, r.support_changed, r.delta_norm
            )?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    #[serde(with = "dense")]
    pub x_final: Array1<f64>,
    pub status: Status,
    pub iterations: usize,
    pub trace: IterationTrace,
    /// Seconds.
    pub wall_time: f64,
}

impl SolveResult {
    /// Step of the last accepted iteration, if any.
    pub fn final_alpha(&self) -> Option<f64> {
        self.trace.last().map(|r| r.alpha)
    }

    pub fn converged(&self) -> bool {
        matches!(self.status, Status::ConvergedEpsilon | Status::ConvergedResidual)
    }
}

/// Serializes a vector as a plain JSON array.
pub(crate) mod dense {
    use ndarray::Array1;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &Array1<f64>, ser: S) -> Result<S::Ok, S::Error> {
        match x.as_slice() {
            Some(s) => s.serialize(ser),
            None => x.to_vec().serialize(ser),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Array1<f64>, D::Error> {
        Vec::<f64>::deserialize(de).map(Array1::from)
    }
}
