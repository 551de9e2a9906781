//! First- and second-order optimality certificates for
//! `min ½‖Ax − b‖²  s.t.  ‖x‖₀ ≤ s  (and x ≥ 0)`.
//!
//! The checks use the closed-form characterizations on the support
//! `Γ = supp(x)`:
//!
//! * α-stationarity, nonnegative model: `∇_i r = 0` on `Γ`; off `Γ`, either
//!   `∇_i r ≥ 0` or `∇_i r ∈ [−M_s(x)/α, 0]`.
//! * α-stationarity, sparsity-only model: `∇_i r = 0` on `Γ`; off `Γ`,
//!   `|∇_i r| ≤ M_s(|x|)/α`.
//! * Clarke normal/tangent stationarity: `∇_i r = 0` on `Γ`.
//! * Bouligand normal/tangent stationarity: as Clarke when `|Γ| = s`,
//!   `∇r = 0` when `|Γ| < s`.
//!
//! # Tolerances
//!
//! The α-stationarity test is evaluated on the scaled gradient `α∇r(x)`, so
//! its tolerance is in the units of `x`. This is the scale of the fixed-point
//! residual `x − P(x − α∇r(x))` and of the solvers' `‖x^{k+1} − x^k‖ ≤ ε`
//! stopping rule. [`check_sparsity_stationarity`] has no step size and
//! compares the raw gradient against `tol`. A [`StationarityReport`] applies
//! every test to the same scaled gradient so its verdicts are mutually
//! consistent.

use ndarray::{Array1, Array2, ArrayView1};
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::linalg;
use crate::problem::{kth_largest, ProblemInstance};
use crate::projection::{support, SupportSet};

/// Default tolerance for every inequality in this module.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Largest number of supports [`check_s_regular`] will enumerate.
pub const S_REGULAR_MAX_SUPPORTS: u128 = 200_000;

/// Normal/tangent stationarity notions on the sparse set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stationarity {
    /// Bouligand normal cone.
    NB,
    /// Bouligand tangent cone.
    TB,
    /// Clarke normal cone.
    NC,
    /// Clarke tangent cone.
    TC,
}

/// Tangent cone kinds on `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConeKind {
    Bouligand,
    Clarke,
}

/// Result of an α-stationarity test.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaCheck {
    pub stationary: bool,
    /// Per-index violation of the condition before tolerance, `≥ 0`.
    pub violations: Array1<f64>,
    /// Largest entry of `violations`.
    pub worst_violation: f64,
}

/// All first-order verdicts at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationarityReport {
    pub alpha_stationary: bool,
    pub nb_stationary: bool,
    pub tb_stationary: bool,
    pub nc_stationary: bool,
    pub tc_stationary: bool,
    /// `‖∇r(x)‖` restricted to the support (unscaled).
    pub restricted_grad_norm: f64,
    /// Largest violation of the α-stationarity conditions, in units of `x`.
    pub worst_violation: f64,
    pub support_size: usize,
    pub alpha_used: f64,
    pub tol_used: f64,
    /// Set for `x = 0`: the Clarke cone is `{0}` there, so the restricted
    /// gradient norm is trivially zero and certifies nothing.
    pub empty_support: bool,
}

/// Result of the second-order test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondOrder {
    pub passed: bool,
    /// `λ_min(A_Γᵀ A_Γ)`, `+∞` for an empty support.
    pub lambda_min: f64,
}

/// Checks `x ≥ −tol` (nonnegative instances) and `‖x‖₀ ≤ s` with entries of
/// magnitude at most `tol` treated as zero. Returns the support.
fn feasible_support(inst: &ProblemInstance, x: ArrayView1<'_, f64>, tol: f64) -> Result<SupportSet> {
    check_len("x", inst.n(), x.len())?;
    if !(tol >= 0.0) {
        return Err(Error::InvalidConfig(format!("tol must be nonnegative, got {tol}")));
    }
    if inst.nonneg() {
        if let Some((i, v)) = x.iter().enumerate().find(|(_, v)| **v < -tol) {
            return Err(Error::Infeasible(format!(
                "nonnegativity violated: x[{i}] = {v:e} < -{tol:e}"
            )));
        }
    }
    let gamma = support(x, tol);
    if gamma.len() > inst.s() {
        return Err(Error::Infeasible(format!(
            "sparsity violated: {} nonzeros exceed s = {}",
            gamma.len(),
            inst.s()
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Infeasible("x has a non-finite entry".into()));
    }
    Ok(gamma)
}

/// α-stationarity conditions on an already scaled gradient `g = α∇r(x)`.
fn alpha_conditions(
    x: ArrayView1<'_, f64>,
    g: &Array1<f64>,
    gamma: &SupportSet,
    s: usize,
    nonneg: bool,
    tol: f64,
) -> AlphaCheck {
    // M_s: s-th largest entry; of x itself on the nonnegative model.
    let ms = kth_largest(x, s, !nonneg).unwrap_or(0.0).max(0.0);
    let violations: Array1<f64> = g
        .iter()
        .enumerate()
        .map(|(i, &gi)| {
            if gamma.contains(i) {
                gi.abs()
            } else if nonneg {
                // "gi ≥ 0 or gi ∈ [−M_s, 0]" is the half-line gi ≥ −M_s.
                (-gi - ms).max(0.0)
            } else {
                (gi.abs() - ms).max(0.0)
            }
        })
        .collect();
    let worst_violation = violations.iter().fold(0.0_f64, |m, v| m.max(*v));
    AlphaCheck {
        stationary: violations.iter().all(|v| *v <= tol),
        violations,
        worst_violation,
    }
}

fn sparsity_verdict(g: &Array1<f64>, gamma: &SupportSet, s: usize, kind: Stationarity, tol: f64) -> bool {
    let on_support = gamma.indices().iter().all(|&i| g[i].abs() <= tol);
    match kind {
        Stationarity::NC | Stationarity::TC => on_support,
        Stationarity::NB | Stationarity::TB => {
            if gamma.len() >= s {
                on_support
            } else {
                on_support && g.iter().all(|v| v.abs() <= tol)
            }
        }
    }
}

/// α-stationarity test with tolerance in units of `x` (see module docs).
///
/// Uses the nonnegative-model conditions when the instance is nonnegative and
/// the sparsity-only conditions otherwise.
pub fn check_alpha_stationary(
    inst: &ProblemInstance,
    x: ArrayView1<'_, f64>,
    alpha: f64,
    tol: f64,
) -> Result<AlphaCheck> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidConfig(format!("alpha must be positive, got {alpha}")));
    }
    let gamma = feasible_support(inst, x, tol)?;
    let g = inst.gradient(x)? * alpha;
    Ok(alpha_conditions(x, &g, &gamma, inst.s(), inst.nonneg(), tol))
}

/// Normal/tangent stationarity in the Bouligand or Clarke sense.
pub fn check_sparsity_stationarity(
    inst: &ProblemInstance,
    x: ArrayView1<'_, f64>,
    kind: Stationarity,
    tol: f64,
) -> Result<bool> {
    let gamma = feasible_support(inst, x, tol)?;
    let g = inst.gradient(x)?;
    Ok(sparsity_verdict(&g, &gamma, inst.s(), kind, tol))
}

/// `‖∇r(x)‖₂` over the indices of `supp(x)`; zero when `x = 0`.
pub fn restricted_gradient_norm(inst: &ProblemInstance, x: ArrayView1<'_, f64>) -> Result<f64> {
    let g = inst.gradient(x)?;
    let gamma = support(x, 0.0);
    Ok(gamma.indices().iter().map(|&i| g[i] * g[i]).sum::<f64>().sqrt())
}

/// Every first-order verdict at `x`, evaluated on `α∇r(x)` with one tolerance.
pub fn stationarity_report(
    inst: &ProblemInstance,
    x: ArrayView1<'_, f64>,
    alpha: f64,
    tol: f64,
) -> Result<StationarityReport> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidConfig(format!("alpha must be positive, got {alpha}")));
    }
    let gamma = feasible_support(inst, x, tol)?;
    let grad = inst.gradient(x)?;
    let g = &grad * alpha;
    let alpha_check = alpha_conditions(x, &g, &gamma, inst.s(), inst.nonneg(), tol);
    let verdict = |kind| sparsity_verdict(&g, &gamma, inst.s(), kind, tol);
    let restricted = gamma
        .indices()
        .iter()
        .map(|&i| grad[i] * grad[i])
        .sum::<f64>()
        .sqrt();
    Ok(StationarityReport {
        alpha_stationary: alpha_check.stationary,
        nb_stationary: verdict(Stationarity::NB),
        tb_stationary: verdict(Stationarity::TB),
        nc_stationary: verdict(Stationarity::NC),
        tc_stationary: verdict(Stationarity::TC),
        restricted_grad_norm: restricted,
        worst_violation: alpha_check.worst_violation,
        support_size: gamma.len(),
        alpha_used: alpha,
        tol_used: tol,
        empty_support: gamma.is_empty(),
    })
}

/// Membership of `d` in the Bouligand or Clarke tangent cone of `S` at `x`.
///
/// Clarke: `supp(d) ⊆ supp(x)`. Bouligand: `|supp(d) ∪ supp(x)| ≤ s`.
pub fn tangent_cone_contains(x: ArrayView1<'_, f64>, d: ArrayView1<'_, f64>, s: usize, kind: ConeKind) -> bool {
    let sx = support(x, 0.0);
    let sd = support(d, 0.0);
    debug_assert!(sx.len() <= s, "x must lie in S");
    match kind {
        ConeKind::Clarke => sd.is_subset(&sx),
        ConeKind::Bouligand => sd.union(&sx).len() <= s,
    }
}

/// Second-order test on the Clarke tangent cone, where `dᵀAᵀAd` reduces to
/// the Gram matrix `A_Γᵀ A_Γ`.
///
/// Strict mode requires `λ_min > tol`; otherwise `λ_min ≥ −tol`.
pub fn check_second_order(inst: &ProblemInstance, x: ArrayView1<'_, f64>, strict: bool, tol: f64) -> Result<SecondOrder> {
    check_len("x", inst.n(), x.len())?;
    let gamma = support(x, 0.0);
    if gamma.len() > inst.s() {
        return Err(Error::Infeasible(format!(
            "sparsity violated: {} nonzeros exceed s = {}",
            gamma.len(),
            inst.s()
        )));
    }
    let lambda_min = linalg::min_eigenvalue(linalg::gram(inst.a(), gamma.indices()));
    let passed = if strict { lambda_min > tol } else { lambda_min >= -tol };
    Ok(SecondOrder { passed, lambda_min })
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k.min(n));
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// Whether every `s` columns of `A` are linearly independent, i.e.
/// `λ_min(A_Γᵀ A_Γ) > tol` for all `|Γ| = s`. Enumerates all supports.
pub fn check_s_regular(a: &Array2<f64>, s: usize, tol: f64) -> Result<bool> {
    let n = a.ncols();
    if s == 0 || s > n {
        return Err(Error::OutOfRange {
            what: "s",
            value: s,
            range: format!("[1, {n}]"),
        });
    }
    let count = binomial(n, s);
    if count > S_REGULAR_MAX_SUPPORTS {
        return Err(Error::TooLarge {
            count,
            limit: S_REGULAR_MAX_SUPPORTS,
        });
    }
    use itertools::Itertools;
    Ok((0..n)
        .combinations(s)
        .all(|cols| linalg::min_eigenvalue(linalg::gram(a, &cols)) > tol))
}
