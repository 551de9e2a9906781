use std::time::Instant;

use ndarray::Array1;

use super::armijo::trial;
use super::gspa::adaptive_step;
use super::{IterationRecord, IterationTrace, LazySpectrum, SolveResult, SolverConfig, Status};
use crate::error::Result;
use crate::linalg;
use crate::problem::ProblemInstance;
use crate::projection::{project, support};

/// Step-shrinking constants of the normalized IHT safeguard.
const SHRINK_C: f64 = 0.01;
const SHRINK_KAPPA: f64 = 2.0;

/// Normalized iterative hard thresholding.
///
/// Uses the same adaptive step as GSPA on the current support. When the
/// thresholded point changes support, the step `μ` is kept only if
/// `μ ≤ (1 − c)‖x_new − x‖² / ‖A(x_new − x)‖²`; otherwise it is divided by
/// `κ(1 − c)` and the point recomputed. With `cfg.nonneg` the nonnegative
/// clamp is applied before thresholding.
pub fn niht_solve(inst: &ProblemInstance, cfg: &SolverConfig) -> Result<SolveResult> {
    cfg.validate()?;
    let start = Instant::now();
    let spectrum = LazySpectrum::new(inst);
    let (s, nonneg) = (inst.s(), cfg.nonneg);

    let mut x = Array1::<f64>::zeros(inst.n());
    let mut residual = -inst.b();
    let atb = linalg::matvec_t(inst.a(), inst.b().view());
    let mut gamma = support(project(atb.view(), s, nonneg).view(), 0.0);

    let mut records = Vec::new();
    let mut status = Status::MaxIter;
    'outer: for k in 0..cfg.max_iter {
        let grad = linalg::matvec_t(inst.a(), residual.view());
        let mut mu = match adaptive_step(inst, &grad, &gamma) {
            Some(a) => a,
            None => spectrum.safe_step()?,
        };
        let (mut next, mut next_supp, mut next_res, mut next_obj) = trial(inst, x.view(), grad.view(), mu, nonneg);
        let mut backtracks = 0;
        if next_supp != gamma {
            loop {
                let diff = &next - &x;
                let diff_supp = support(diff.view(), 0.0);
                let ad = linalg::matvec_sparse(inst.a(), diff.view(), diff_supp.indices());
                let den = linalg::norm_sq(ad.view());
                let omega = (1.0 - SHRINK_C) * linalg::norm_sq(diff.view()) / den;
                if den == 0.0 || mu <= omega {
                    break;
                }
                if backtracks == cfg.max_backtracks {
                    status = Status::StalledBacktracking;
                    break 'outer;
                }
                mu /= SHRINK_KAPPA * (1.0 - SHRINK_C);
                backtracks += 1;
                (next, next_supp, next_res, next_obj) = trial(inst, x.view(), grad.view(), mu, nonneg);
            }
        }

        let delta_norm = linalg::dist(next.view(), x.view());
        records.push(IterationRecord {
            k,
            objective: next_obj,
            residual: (2.0 * next_obj).sqrt(),
            alpha: mu,
            backtracks,
            support_changed: next_supp != gamma,
            delta_norm,
            shortcut_rejected: false,
            regularized: false,
        });
        x = next;
        gamma = next_supp;
        residual = next_res;
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
