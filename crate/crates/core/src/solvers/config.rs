use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::ProblemInstance;

/// How the trial step `α₀ᵏ` is chosen at each iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepPolicy {
    /// `α₀ᵏ = ‖A_Γᵀ(b − Axᵏ)‖² / ‖A_Γ A_Γᵀ(b − Axᵏ)‖²` on the current support.
    Adaptive,
    /// A constant step; must satisfy `0 < α₀ < 1/l_r`.
    Fixed(f64),
    /// Constant step `0.99 / l_r`.
    InverseLipschitz,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub alpha0: StepPolicy,
    /// Backtracking factor in `(0, 1)`.
    pub beta: f64,
    /// Sufficient-decrease constant; at most `1/(4 l_r)` in fixed-step modes.
    pub sigma: f64,
    /// Stop once `‖x^{k+1} − x^k‖ ≤ epsilon`.
    pub epsilon: f64,
    pub max_iter: usize,
    pub max_backtracks: usize,
    /// Project onto `S ∩ R₊ᴺ` instead of `S`.
    pub nonneg: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            alpha0: StepPolicy::Adaptive,
            beta: 0.8,
            sigma: 1e-5,
            epsilon: 1e-6,
            max_iter: 5000,
            max_backtracks: 100,
            nonneg: false,
        }
    }
}

impl SolverConfig {
    /// Defaults with the instance's nonnegativity flag.
    pub fn for_instance(inst: &ProblemInstance) -> Self {
        SolverConfig {
            nonneg: inst.nonneg(),
            ..Default::default()
        }
    }

    pub fn with_policy(mut self, alpha0: StepPolicy) -> Self {
        self.alpha0 = alpha0;
        self
    }

    /// Checks the constraints that do not depend on `l_r`.
    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::InvalidConfig(format!("beta must lie in (0, 1), got {}", self.beta)));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidConfig(format!("sigma must be positive, got {}", self.sigma)));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidConfig(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if self.max_iter == 0 || self.max_backtracks == 0 {
            return Err(Error::InvalidConfig("max_iter and max_backtracks must be positive".into()));
        }
        if let StepPolicy::Fixed(a) = self.alpha0 {
            if !(a > 0.0 && a.is_finite()) {
                return Err(Error::InvalidConfig(format!("fixed alpha0 must be positive, got {a}")));
            }
        }
        Ok(())
    }

    /// The fixed-step bounds `0 < α₀ < 1/l_r` and `σ ≤ 1/(4 l_r)`.
    pub(crate) fn validate_fixed(&self, alpha0: f64, l_r: f64) -> Result<()> {
        if l_r <= 0.0 {
            return Err(Error::InvalidConfig("l_r = 0 (A is the zero matrix)".into()));
        }
        if alpha0 * l_r >= 1.0 {
            return Err(Error::InvalidConfig(format!(
                "alpha0 = {alpha0:e} violates alpha0 < 1/l_r = {:e}",
                1.0 / l_r
            )));
        }
        if self.sigma * 4.0 * l_r > 1.0 {
            return Err(Error::InvalidConfig(format!(
                "sigma = {:e} violates sigma <= 1/(4 l_r) = {:e}",
                self.sigma,
                0.25 / l_r
            )));
        }
        Ok(())
    }
}
