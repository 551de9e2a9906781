#![allow(dead_code)]

use ndarray::{Array1, Array2};
use sparsekit::bench::{ExperimentSpec, InstanceRng, MRule, SRule};
use sparsekit::solvers::SolverKind;
use sparsekit::ProblemInstance;

pub fn gaussian_matrix(rng: &mut InstanceRng, m: usize, n: usize) -> Array2<f64> {
    Array2::from_shape_simple_fn((m, n), || rng.normal())
}

pub fn gaussian_vector(rng: &mut InstanceRng, n: usize) -> Array1<f64> {
    Array1::from_shape_simple_fn(n, || rng.normal())
}

/// Random `s`-sparse vector; nonnegative when asked.
pub fn sparse_vector(rng: &mut InstanceRng, n: usize, s: usize, nonneg: bool) -> Array1<f64> {
    let mut x = Array1::zeros(n);
    for &i in &rng.permutation(n)[..s] {
        let v = rng.normal();
        x[i] = if nonneg { v.abs() } else { v };
    }
    x
}

/// Gaussian `A`, arbitrary `b`, any shape.
pub fn random_instance(rng: &mut InstanceRng, m: usize, n: usize, s: usize, nonneg: bool) -> ProblemInstance {
    let a = gaussian_matrix(rng, m, n);
    let b = gaussian_vector(rng, m);
    ProblemInstance::builder(a, b, s)
        .nonneg(nonneg)
        .allow_any_shape()
        .build()
        .unwrap()
}

pub fn identity_instance(b: Array1<f64>, s: usize, nonneg: bool) -> ProblemInstance {
    let n = b.len();
    ProblemInstance::builder(Array2::eye(n), b, s)
        .nonneg(nonneg)
        .allow_any_shape()
        .build()
        .unwrap()
}

pub fn spec(n: usize, m: usize, s: usize, nonneg: bool, sigma0: f64, trials: usize, seed: u64) -> ExperimentSpec {
    ExperimentSpec {
        n,
        m_rule: MRule::Explicit(m),
        s_rule: SRule::Explicit(s),
        nonneg,
        sigma0,
        trials,
        base_seed: seed,
        solvers: vec![SolverKind::Gspa],
    }
}

pub fn linf(a: &Array1<f64>, b: &Array1<f64>) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

pub fn l2(a: &Array1<f64>, b: &Array1<f64>) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}
