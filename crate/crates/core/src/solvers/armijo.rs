use ndarray::{Array1, ArrayView1};
use thiserror::Error;

use super::SolverConfig;
use crate::error::{check_len, Error};
use crate::linalg;
use crate::problem::ProblemInstance;
use crate::projection::{project, support, SupportSet};

/// Accepted backtracking step.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmijoStep {
    pub point: Array1<f64>,
    /// Step `alpha_start · β^m`.
    pub step: f64,
    pub m: usize,
    pub objective: f64,
    pub(crate) residual: Array1<f64>,
    pub(crate) support: SupportSet,
}

#[derive(Debug, Error)]
pub enum SearchFailure {
    #[error("no step accepted within {tried} backtracks")]
    Exhausted { tried: usize },
    #[error(transparent)]
    Invalid(#[from] Error),
}

/// `r(y) ≤ r(x) − (σ/2)‖y − x‖² / α²`.
#[inline]
pub(crate) fn sufficient_decrease(obj_new: f64, obj_old: f64, dist_sq: f64, alpha: f64, sigma: f64) -> bool {
    obj_new <= obj_old - 0.5 * sigma * dist_sq / (alpha * alpha)
}

/// Trial point `x(α) = P(x − α∇r(x))` with its residual `Ax(α) − b` and objective.
pub(crate) fn trial(
    inst: &ProblemInstance,
    x: ArrayView1<'_, f64>,
    grad: ArrayView1<'_, f64>,
    alpha: f64,
    nonneg: bool,
) -> (Array1<f64>, SupportSet, Array1<f64>, f64) {
    let mut y = x.to_owned();
    y.scaled_add(-alpha, &grad);
    let point = project(y.view(), inst.s(), nonneg);
    let supp = support(point.view(), 0.0);
    let mut residual = linalg::matvec_sparse(inst.a(), point.view(), supp.indices());
    residual -= inst.b();
    let objective = 0.5 * linalg::norm_sq(residual.view());
    (point, supp, residual, objective)
}

/// Backtracking search over `m = 1, 2, …, max_backtracks`.
pub(crate) fn search(
    inst: &ProblemInstance,
    x: ArrayView1<'_, f64>,
    grad: ArrayView1<'_, f64>,
    objective: f64,
    alpha_start: f64,
    cfg: &SolverConfig,
) -> Option<ArmijoStep> {
    for m in 1..=cfg.max_backtracks {
        let step = alpha_start * cfg.beta.powi(m as i32);
        let (point, supp, residual, obj) = trial(inst, x, grad, step, cfg.nonneg);
        let d2 = linalg::norm_sq((&point - &x).view());
        if sufficient_decrease(obj, objective, d2, step, cfg.sigma) {
            return Some(ArmijoStep {
                point,
                step,
                m,
                objective: obj,
                residual,
                support: supp,
            });
        }
    }
    None
}

/// Finds the smallest `m ≥ 1` such that `x(α_start β^m)` satisfies the
/// sufficient-decrease inequality
/// `r(x(α)) ≤ r(x) − (σ/2)‖x(α) − x‖² / α²`.
///
/// The projection is onto `S ∩ R₊ᴺ` when `cfg.nonneg`, else onto `S`.
pub fn armijo_search(
    inst: &ProblemInstance,
    x: ArrayView1<'_, f64>,
    grad: ArrayView1<'_, f64>,
    alpha_start: f64,
    cfg: &SolverConfig,
) -> Result<ArmijoStep, SearchFailure> {
    check_len("x", inst.n(), x.len())?;
    check_len("grad", inst.n(), grad.len())?;
    cfg.validate()?;
    if !(alpha_start > 0.0 && alpha_start.is_finite()) {
        return Err(Error::InvalidConfig(format!("alpha_start must be positive, got {alpha_start}")).into());
    }
    let objective = inst.objective(x)?;
    search(inst, x, grad, objective, alpha_start, cfg).ok_or(SearchFailure::Exhausted {
        tried: cfg.max_backtracks,
    })
}
