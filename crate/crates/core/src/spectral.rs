use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::linalg;

const TOL: f64 = 1e-10;
const MAX_ITER: usize = 1000;
/// Safeguard so that steps chosen below `1 / l_r` stay below the true bound.
const INFLATION: f64 = 1.01;

/// Estimate of `λ_max(AᵀA)`, the Lipschitz constant of the gradient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralInfo {
    /// Inflated estimate, `1.01 ×` the final Rayleigh quotient.
    pub l_r: f64,
    /// Final Rayleigh quotient `‖Av‖² / ‖v‖²` before inflation.
    pub rayleigh: f64,
    pub iterations_used: usize,
    pub converged: bool,
}

/// Power iteration on `AᵀA` from the normalized all-ones vector.
///
/// Stops once the Rayleigh quotient changes by less than `1e-10` relative, or
/// after 1000 iterations. A zero matrix yields `l_r = 0`.
pub fn lipschitz_constant(a: &Array2<f64>) -> SpectralInfo {
    let n = a.ncols();
    let mut v = Array1::from_elem(n, 1.0 / (n as f64).sqrt());
    let mut rq = 0.0_f64;
    let mut converged = false;
    let mut iterations_used = 0;
    for it in 1..=MAX_ITER {
        iterations_used = it;
        let av = linalg::matvec(a, v.view());
        // v has unit norm here, so ‖Av‖² is the Rayleigh quotient.
        let next_rq = linalg::norm_sq(av.view());
        if next_rq == 0.0 {
            rq = 0.0;
            converged = true;
            break;
        }
        let w = linalg::matvec_t(a, av.view());
        let wn = linalg::norm(w.view());
        let done = it > 1 && (next_rq - rq).abs() <= TOL * next_rq;
        rq = next_rq;
        if done || wn == 0.0 {
            converged = true;
            break;
        }
        v = w / wn;
    }
    SpectralInfo {
        l_r: INFLATION * rq,
        rayleigh: rq,
        iterations_used,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn identity_spectrum() {
        let info = lipschitz_constant(&Array2::eye(5));
        assert!((info.rayleigh - 1.0).abs() < 1e-14);
        assert!((info.l_r - 1.01).abs() < 1e-14);
        assert!(info.converged);
    }

    #[test]
    fn diagonal_spectrum() {
        let info = lipschitz_constant(&array![[1.0, 0.0], [0.0, 2.0]]);
        assert!((info.rayleigh - 4.0).abs() < 1e-9);
        assert!((info.l_r - 4.04).abs() < 1e-8);
    }

    #[test]
    fn zero_matrix_reports_zero() {
        let info = lipschitz_constant(&Array2::zeros((3, 4)));
        assert_eq!(info.l_r, 0.0);
        assert!(info.converged);
    }
}
