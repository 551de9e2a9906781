//! Dense kernels on row-major `ndarray` storage.
//!
//! Everything here is written against contiguous rows so that both `A x` and
//! `Aᵀ y` stream through memory in order. Small symmetric problems (Gram
//! matrices of size at most a few multiples of `s`) are handed to `nalgebra`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use ndarray::{Array1, Array2, ArrayView1};

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm_sq(v: ArrayView1<'_, f64>) -> f64 {
    v.iter().map(|x| x * x).sum()
}

#[inline]
pub fn norm(v: ArrayView1<'_, f64>) -> f64 {
    norm_sq(v).sqrt()
}

pub fn dist(a: ArrayView1<'_, f64>, b: ArrayView1<'_, f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn norm_inf(v: ArrayView1<'_, f64>) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// `A x`.
pub fn matvec(a: &Array2<f64>, x: ArrayView1<'_, f64>) -> Array1<f64> {
    let xs = x.to_vec();
    a.rows()
        .into_iter()
        .map(|row| match row.as_slice() {
            Some(r) => dot(r, &xs),
            None => row.iter().zip(&xs).map(|(p, q)| p * q).sum(),
        })
        .collect()
}

/// `A x` when `x` is nonzero only on `idx`.
pub fn matvec_sparse(a: &Array2<f64>, x: ArrayView1<'_, f64>, idx: &[usize]) -> Array1<f64> {
    a.rows()
        .into_iter()
        .map(|row| idx.iter().map(|&j| row[j] * x[j]).sum())
        .collect()
}

/// `Aᵀ y`, accumulated row by row.
pub fn matvec_t(a: &Array2<f64>, y: ArrayView1<'_, f64>) -> Array1<f64> {
    let mut out = Array1::zeros(a.ncols());
    for (row, &yi) in a.rows().into_iter().zip(y.iter()) {
        if yi != 0.0 {
            out.scaled_add(yi, &row);
        }
    }
    out
}

/// `A_Γᵀ y` for the columns listed in `idx`, in that order.
pub fn matvec_t_cols(a: &Array2<f64>, y: ArrayView1<'_, f64>, idx: &[usize]) -> Vec<f64> {
    let mut out = vec![0.0; idx.len()];
    for (row, &yi) in a.rows().into_iter().zip(y.iter()) {
        for (o, &j) in out.iter_mut().zip(idx) {
            *o += row[j] * yi;
        }
    }
    out
}

/// `A_Γᵀ A_Γ` as an `nalgebra` matrix.
pub fn gram(a: &Array2<f64>, idx: &[usize]) -> DMatrix<f64> {
    let k = idx.len();
    let mut g = DMatrix::zeros(k, k);
    for row in a.rows() {
        for p in 0..k {
            let rp = row[idx[p]];
            if rp == 0.0 {
                continue;
            }
            for q in p..k {
                g[(p, q)] += rp * row[idx[q]];
            }
        }
    }
    for p in 0..k {
        for q in 0..p {
            g[(p, q)] = g[(q, p)];
        }
    }
    g
}

/// Smallest eigenvalue of a symmetric matrix; `+∞` for the empty matrix.
pub fn min_eigenvalue(g: DMatrix<f64>) -> f64 {
    if g.nrows() == 0 {
        return f64::INFINITY;
    }
    SymmetricEigen::new(g).eigenvalues.min()
}

/// Outcome of a normal-equation least-squares solve.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    /// Coefficients in the order of the requested columns.
    pub coef: Vec<f64>,
    /// Set when the Gram matrix was not numerically positive definite and a
    /// ridge of `1e-12 · trace` had to be added.
    pub regularized: bool,
}

/// Minimizes `‖A_Γ z − b‖` by Cholesky on the normal equations.
pub fn least_squares(a: &Array2<f64>, b: ArrayView1<'_, f64>, idx: &[usize]) -> LeastSquares {
    if idx.is_empty() {
        return LeastSquares {
            coef: Vec::new(),
            regularized: false,
        };
    }
    let g = gram(a, idx);
    let rhs = DVector::from_vec(matvec_t_cols(a, b, idx));
    if let Some(ch) = g.clone().cholesky() {
        let z = ch.solve(&rhs);
        if z.iter().all(|v| v.is_finite()) {
            return LeastSquares {
                coef: z.as_slice().to_vec(),
                regularized: false,
            };
        }
    }
    let ridge = 1e-12 * g.trace().max(f64::MIN_POSITIVE);
    let mut g = g;
    for i in 0..g.nrows() {
        g[(i, i)] += ridge;
    }
    let coef = match g.clone().cholesky() {
        Some(ch) => ch.solve(&rhs).as_slice().to_vec(),
        // Still indefinite after the ridge: fall back to a pseudo-inverse solve.
        None => g
            .svd(true, true)
            .solve(&rhs, 1e-12)
            .map(|z| z.as_slice().to_vec())
            .unwrap_or_else(|_| vec![0.0; idx.len()]),
    };
    LeastSquares {
        coef,
        regularized: true,
    }
}
