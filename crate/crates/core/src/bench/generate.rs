//! Seeded instance generation.
//!
//! The stream is fixed so that other implementations can reproduce instances
//! bit for bit from `(base_seed, trial_index)`:
//!
//! 1. Seed `Xoshiro256++` with `seed_from_u64(base_seed.wrapping_add(trial_index))`
//!    (state expanded by SplitMix64, as in the `rand_xoshiro` crate).
//! 2. Uniforms on `[0, 1)` are `(next_u64 >> 11) · 2⁻⁵³`.
//! 3. Integers in `[0, k)` are `(next_u64 · k) >> 64` in 128-bit arithmetic.
//! 4. Standard normals come from Box–Muller in pairs,
//!    `ρ = √(−2 ln(1 − u₁))`, `z₀ = ρ cos 2πu₂`, `z₁ = ρ sin 2πu₂`; both are
//!    used before new uniforms are drawn.
//! 5. Draw order: a Fisher–Yates shuffle of `0..N` (for `i = N−1` down to 1,
//!    swap `i` with an integer in `[0, i]`), whose first `s` entries are the
//!    support; `s` normals for those entries in that order (absolute values when
//!    nonnegative); `M·N` normals for `A` in row-major order; and, only when
//!    `σ₀ > 0`, `M` normals for the noise, `b = A x_orig + σ₀ e`.

use std::f64::consts::TAU;

use ndarray::{Array1, Array2};
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use super::ExperimentSpec;
use crate::error::Result;
use crate::linalg;
use crate::problem::ProblemInstance;

/// Documented random stream used for instance generation.
pub struct InstanceRng {
    inner: Xoshiro256PlusPlus,
    spare: Option<f64>,
}

impl InstanceRng {
    pub fn new(seed: u64) -> Self {
        InstanceRng {
            inner: Xoshiro256PlusPlus::seed_from_u64(seed),
            spare: None,
        }
    }

    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Integer in `[0, bound)`.
    pub fn below(&mut self, bound: usize) -> usize {
        ((self.inner.next_u64() as u128 * bound as u128) >> 64) as usize
    }

    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.uniform();
        let u2 = self.uniform();
        let rho = (-2.0 * (1.0 - u1).ln()).sqrt();
        let (sin, cos) = (TAU * u2).sin_cos();
        self.spare = Some(rho * sin);
        rho * cos
    }

    /// Fisher–Yates shuffle of `0..n`.
    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = self.below(i + 1);
            p.swap(i, j);
        }
        p
    }
}

/// Generates trial `trial_index` of an experiment.
pub fn gen_instance(spec: &ExperimentSpec, trial_index: u64) -> Result<ProblemInstance> {
    spec.validate()?;
    let (n, m, s) = (spec.n, spec.m(), spec.s());
    let seed = spec.base_seed.wrapping_add(trial_index);
    let mut rng = InstanceRng::new(seed);

    let perm = rng.permutation(n);
    let mut x_orig = Array1::<f64>::zeros(n);
    for &i in &perm[..s] {
        let v = rng.normal();
        x_orig[i] = if spec.nonneg { v.abs() } else { v };
    }
    let a = Array2::from_shape_simple_fn((m, n), || rng.normal());
    let support: Vec<usize> = {
        let mut idx = perm[..s].to_vec();
        idx.sort_unstable();
        idx
    };
    let mut b = linalg::matvec_sparse(&a, x_orig.view(), &support);
    if spec.sigma0 > 0.0 {
        for bi in b.iter_mut() {
            *bi += spec.sigma0 * rng.normal();
        }
    }
    ProblemInstance::builder(a, b, s)
        .nonneg(spec.nonneg)
        .x_orig(x_orig)
        .sigma0(spec.sigma0)
        .seed(seed)
        .build()
}
