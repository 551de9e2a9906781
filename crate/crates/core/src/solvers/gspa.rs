use std::time::Instant;

use ndarray::Array1;

use super::armijo::{search, sufficient_decrease, trial};
use super::{IterationRecord, IterationTrace, LazySpectrum, SolveResult, SolverConfig, Status, StepPolicy};
use crate::error::Result;
use crate::linalg;
use crate::problem::ProblemInstance;
use crate::projection::{project, support, SupportSet};

/// `‖g_Γ‖² / ‖A_Γ g_Γ‖²`, or `None` when the support is empty or either norm
/// vanishes.
pub(crate) fn adaptive_step(inst: &ProblemInstance, grad: &Array1<f64>, gamma: &SupportSet) -> Option<f64> {
    if gamma.is_empty() {
        return None;
    }
    let num: f64 = gamma.indices().iter().map(|&i| grad[i] * grad[i]).sum();
    let ag = linalg::matvec_sparse(inst.a(), grad.view(), gamma.indices());
    let den = linalg::norm_sq(ag.view());
    let step = num / den;
    (num > 0.0 && den > 0.0 && step.is_finite()).then_some(step)
}

/// Gradient support projection.
///
/// Starts from `x⁰ = 0` with `Γ⁰ = supp(P(Aᵀb))`. Each iteration forms the
/// trial point `P(xᵏ − α₀ᵏ∇r(xᵏ))` and accepts it when its support equals
/// `Γᵏ`; otherwise it backtracks from `α₀ᵏ` by powers of `β` until
/// `r(xᵏ(α)) ≤ r(xᵏ) − (σ/2)‖xᵏ(α) − xᵏ‖²/α²`. Stops when
/// `‖x^{k+1} − xᵏ‖ ≤ ε` or after `max_iter` iterations.
///
/// With the adaptive step policy the support-equal trial point must also pass
/// the sufficient-decrease test, since `α₀ᵏ` may exceed `1/L_r`. If the
/// adaptive step is undefined (empty support or zero restricted gradient) the
/// iteration uses `0.99/l_r` instead.
pub fn gspa_solve(inst: &ProblemInstance, cfg: &SolverConfig) -> Result<SolveResult> {
    cfg.validate()?;
    let start = Instant::now();
    let spectrum = LazySpectrum::new(inst);
    let fixed = match cfg.alpha0 {
        StepPolicy::Adaptive => None,
        StepPolicy::Fixed(a) => Some(a),
        StepPolicy::InverseLipschitz => Some(spectrum.safe_step()?),
    };
    if let Some(a) = fixed {
        cfg.validate_fixed(a, spectrum.l_r())?;
    }

    let (s, nonneg) = (inst.s(), cfg.nonneg);
    let mut x = Array1::<f64>::zeros(inst.n());
    let mut residual = -inst.b();
    let mut objective = 0.5 * linalg::norm_sq(residual.view());
    let atb = linalg::matvec_t(inst.a(), inst.b().view());
    let mut gamma = support(project(atb.view(), s, nonneg).view(), 0.0);

    let mut records = Vec::new();
    let mut status = Status::MaxIter;
    for k in 0..cfg.max_iter {
        let grad = linalg::matvec_t(inst.a(), residual.view());
        let alpha0 = match fixed {
            Some(a) => a,
            None => match adaptive_step(inst, &grad, &gamma) {
                Some(a) => a,
                None => spectrum.safe_step()?,
            },
        };

        let (cand, cand_supp, cand_res, cand_obj) = trial(inst, x.view(), grad.view(), alpha0, nonneg);
        let mut shortcut_rejected = false;
        let accepted = if cand_supp == gamma {
            let d2 = linalg::norm_sq((&cand - &x).view());
            if fixed.is_some() || sufficient_decrease(cand_obj, objective, d2, alpha0, cfg.sigma) {
                Some((cand, cand_supp, cand_res, cand_obj, alpha0, 0))
            } else {
                shortcut_rejected = true;
                None
            }
        } else {
            None
        };
        let (next, next_supp, next_res, next_obj, alpha, backtracks) = match accepted {
            Some(step) => step,
            None => match search(inst, x.view(), grad.view(), objective, alpha0, cfg) {
                Some(st) => (st.point, st.support, st.residual, st.objective, st.step, st.m),
                None => {
                    status = Status::StalledBacktracking;
                    break;
                }
            },
        };
        debug_assert!(next_obj <= objective * (1.0 + 1e-12) + 1e-300);

        let delta_norm = linalg::dist(next.view(), x.view());
        records.push(IterationRecord {
            k,
            objective: next_obj,
            residual: (2.0 * next_obj).sqrt(),
            alpha,
            backtracks,
            support_changed: next_supp != gamma,
            delta_norm,
            shortcut_rejected,
            regularized: false,
        });
        x = next;
        gamma = next_supp;
        residual = next_res;
        objective = next_obj;
        if delta_norm <= cfg.epsilon {
            status = Status::ConvergedEpsilon;
            break;
        }
    }

    Ok(SolveResult {
        x_final: x,
        status,
        iterations: records.len(),
        trace: IterationTrace { records },
        wall_time: start.elapsed().as_secs_f64(),
    })
}
