//! CoSaMP and subspace pursuit. Both identify candidate columns from the
//! residual proxy `Aᵀ(b − Ax)`, refit by least squares on the merged support,
//! and prune back to `s` entries.

use std::time::Instant;

use ndarray::Array1;

use super::{IterationRecord, IterationTrace, SolveResult, SolverConfig, Status};
use crate::error::{Error, Result};
use crate::linalg::{self, least_squares};
use crate::problem::ProblemInstance;
use crate::projection::{support, top_s_indices, SupportSet};

/// Stop once the residual improves by less than this over one iteration.
const MIN_IMPROVEMENT: f64 = 1e-12;

#[derive(Clone, Copy)]
enum Variant {
    Cosamp,
    Subspace,
}

impl Variant {
    fn name(self) -> &'static str {
        match self {
            Variant::Cosamp => "CoSaMP",
            Variant::Subspace => "subspace pursuit",
        }
    }
}

/// Least squares on `cols`, scattered into a length-`n` vector.
fn refit(inst: &ProblemInstance, cols: &[usize]) -> (Array1<f64>, bool) {
    let ls = least_squares(inst.a(), inst.b().view(), cols);
    let mut x = Array1::zeros(inst.n());
    for (&j, &c) in cols.iter().zip(&ls.coef) {
        x[j] = c;
    }
    (x, ls.regularized)
}

fn pursue(inst: &ProblemInstance, cfg: &SolverConfig, variant: Variant) -> Result<SolveResult> {
    cfg.validate()?;
    if cfg.nonneg || inst.nonneg() {
        return Err(Error::Unsupported(format!(
            "{} does not support the nonnegativity constraint",
            variant.name()
        )));
    }
    let start = Instant::now();
    let s = inst.s();
    let proxy_size = match variant {
        Variant::Cosamp => 2 * s,
        Variant::Subspace => s,
    };

    let mut x = Array1::<f64>::zeros(inst.n());
    let mut gamma = SupportSet::empty();
    // b − Ax
    let mut residual = inst.b().clone();
    let mut res_norm = linalg::norm(residual.view());
    let mut best = (x.clone(), res_norm);

    let mut records = Vec::new();
    let mut status = Status::MaxIter;
    for k in 0..cfg.max_iter {
        if res_norm == 0.0 {
            // Nothing left to explain; x already interpolates b.
            records.push(IterationRecord {
                k,
                objective: 0.0,
                residual: 0.0,
                alpha: 1.0,
                backtracks: 0,
                support_changed: false,
                delta_norm: 0.0,
                shortcut_rejected: false,
                regularized: false,
            });
            status = Status::ConvergedEpsilon;
            break;
        }
        let proxy = linalg::matvec_t(inst.a(), residual.view());
        let merged = gamma.union(&SupportSet::new(top_s_indices(proxy.view(), proxy_size)));
        let (wide, mut regularized) = refit(inst, merged.indices());
        let next_supp = SupportSet::new(top_s_indices(wide.view(), s));
        let next = match variant {
            Variant::Cosamp => {
                let mut pruned = Array1::zeros(inst.n());
                for &j in next_supp.indices() {
                    pruned[j] = wide[j];
                }
                pruned
            }
            Variant::Subspace => {
                let (x_new, reg) = refit(inst, next_supp.indices());
                regularized |= reg;
                x_new
            }
        };
        let next_supp = support(next.view(), 0.0);
        let mut next_res = linalg::matvec_sparse(inst.a(), next.view(), next_supp.indices());
        next_res.zip_mut_with(inst.b(), |r, b| *r = b - *r);
        let next_norm = linalg::norm(next_res.view());
        let delta_norm = linalg::dist(next.view(), x.view());

        records.push(IterationRecord {
            k,
            objective: 0.5 * next_norm * next_norm,
            residual: next_norm,
            alpha: 1.0,
            backtracks: 0,
            support_changed: next_supp != gamma,
            delta_norm,
            shortcut_rejected: false,
            regularized,
        });
        let improvement = res_norm - next_norm;
        x = next;
        gamma = next_supp;
        residual = next_res;
        res_norm = next_norm;
        if res_norm < best.1 {
            best = (x.clone(), res_norm);
        }
        if delta_norm <= cfg.epsilon {
            status = Status::ConvergedEpsilon;
            break;
        }
        if res_norm <= cfg.epsilon || improvement < MIN_IMPROVEMENT {
            status = Status::ConvergedResidual;
            break;
        }
    }

    // The pursuits are not monotone; report the best iterate seen.
    let x_final = if best.1 < res_norm { best.0 } else { x };
    Ok(SolveResult {
        x_final,
        status,
        iterations: records.len(),
        trace: IterationTrace { records },
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Compressive sampling matching pursuit: merges the `2s` strongest proxy
/// entries with the current support, refits, and keeps the `s` largest
/// coefficients.
pub fn cosamp_solve(inst: &ProblemInstance, cfg: &SolverConfig) -> Result<SolveResult> {
    pursue(inst, cfg, Variant::Cosamp)
}

/// Subspace pursuit: merges the `s` strongest proxy entries with the current
/// support, refits, prunes to `s`, and refits again on the pruned support.
pub fn sp_solve(inst: &ProblemInstance, cfg: &SolverConfig) -> Result<SolveResult> {
    pursue(inst, cfg, Variant::Subspace)
}
