//! The measurement model `A x = b` with a sparsity budget, the least-squares
//! objective `r(x) = ½‖Ax − b‖²` and its gradient `Aᵀ(Ax − b)`.
//!
//! Indices are 0-based throughout the crate.

use std::path::Path;

use ndarray::{Array1, Array2, ArrayView1};
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::linalg;

/// A sparse (optionally nonnegative) affine feasibility instance.
///
/// Immutable once built; share it freely between threads.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    a: Array2<f64>,
    b: Array1<f64>,
    s: usize,
    nonneg: bool,
    x_orig: Option<Array1<f64>>,
    sigma0: f64,
    seed: Option<u64>,
}

/// Builder for [`ProblemInstance`].
///
/// By default the regime `s < M < N` is enforced. [`allow_any_shape`]
/// relaxes that to `1 <= s <= N`, which small hand-built test instances need.
///
/// [`allow_any_shape`]: InstanceBuilder::allow_any_shape
#[derive(Debug, Clone)]
pub struct InstanceBuilder {
    a: Array2<f64>,
    b: Array1<f64>,
    s: usize,
    nonneg: bool,
    x_orig: Option<Array1<f64>>,
    sigma0: f64,
    seed: Option<u64>,
    any_shape: bool,
}

impl InstanceBuilder {
    pub fn nonneg(mut self, nonneg: bool) -> Self {
        self.nonneg = nonneg;
        self
    }

    pub fn x_orig(mut self, x: Array1<f64>) -> Self {
        self.x_orig = Some(x);
        self
    }

    pub fn sigma0(mut self, sigma0: f64) -> Self {
        self.sigma0 = sigma0;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn allow_any_shape(mut self) -> Self {
        self.any_shape = true;
        self
    }

    pub fn build(self) -> Result<ProblemInstance> {
        let (m, n) = self.a.dim();
        if m == 0 || n == 0 {
            return Err(Error::InvalidInstance("A must be nonempty".into()));
        }
        check_len("b", m, self.b.len())?;
        if self.s == 0 || self.s > n {
            return Err(Error::OutOfRange {
                what: "s",
                value: self.s,
                range: format!("[1, {n}]"),
            });
        }
        if !self.any_shape && !(self.s < m && m < n) {
            return Err(Error::InvalidInstance(format!(
                "expected s < M < N, got s = {}, M = {m}, N = {n}",
                self.s
            )));
        }
        if !(self.sigma0 >= 0.0 && self.sigma0.is_finite()) {
            return Err(Error::InvalidInstance(format!(
                "sigma0 must be a nonnegative number, got {}",
                self.sigma0
            )));
        }
        if self.a.iter().chain(self.b.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInstance("A and b must be finite".into()));
        }
        if let Some(x) = &self.x_orig {
            check_len("x_orig", n, x.len())?;
            let nnz = x.iter().filter(|v| **v != 0.0).count();
            if nnz > self.s {
                return Err(Error::InvalidInstance(format!(
                    "x_orig has {nnz} nonzeros, more than s = {}",
                    self.s
                )));
            }
            if self.nonneg && x.iter().any(|v| *v < 0.0) {
                return Err(Error::InvalidInstance(
                    "x_orig has a negative entry on a nonnegative instance".into(),
                ));
            }
        }
        Ok(ProblemInstance {
            a: self.a,
            b: self.b,
            s: self.s,
            nonneg: self.nonneg,
            x_orig: self.x_orig,
            sigma0: self.sigma0,
            seed: self.seed,
        })
    }
}

impl ProblemInstance {
    pub fn builder(a: Array2<f64>, b: Array1<f64>, s: usize) -> InstanceBuilder {
        InstanceBuilder {
            a,
            b,
            s,
            nonneg: false,
            x_orig: None,
            sigma0: 0.0,
            seed: None,
            any_shape: false,
        }
    }

    pub fn a(&self) -> &Array2<f64> {
        &self.a
    }

    pub fn b(&self) -> &Array1<f64> {
        &self.b
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// Number of measurements `M`.
    pub fn m(&self) -> usize {
        self.a.nrows()
    }

    /// Signal length `N`.
    pub fn n(&self) -> usize {
        self.a.ncols()
    }

    pub fn nonneg(&self) -> bool {
        self.nonneg
    }

    pub fn x_orig(&self) -> Option<&Array1<f64>> {
        self.x_orig.as_ref()
    }

    pub fn sigma0(&self) -> f64 {
        self.sigma0
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// `r(x) = ½‖Ax − b‖²`.
    pub fn objective(&self, x: ArrayView1<'_, f64>) -> Result<f64> {
        check_len("x", self.n(), x.len())?;
        Ok(0.5 * linalg::norm_sq(self.residual(x).view()))
    }

    /// `∇r(x) = Aᵀ(Ax − b)`.
    pub fn gradient(&self, x: ArrayView1<'_, f64>) -> Result<Array1<f64>> {
        check_len("x", self.n(), x.len())?;
        Ok(linalg::matvec_t(&self.a, self.residual(x).view()))
    }

    /// `Ax − b`, without a length check.
    pub(crate) fn residual(&self, x: ArrayView1<'_, f64>) -> Array1<f64> {
        let mut r = linalg::matvec(&self.a, x);
        r -= &self.b;
        r
    }

    /// `‖Ax − b‖`.
    pub fn residual_norm(&self, x: ArrayView1<'_, f64>) -> Result<f64> {
        check_len("x", self.n(), x.len())?;
        Ok(linalg::norm(self.residual(x).view()))
    }

    pub fn to_file_format(&self) -> InstanceFile {
        InstanceFile {
            m: self.m(),
            n: self.n(),
            s: self.s,
            nonneg: self.nonneg,
            sigma0: self.sigma0,
            seed: self.seed,
            a: self.a.iter().copied().collect(),
            b: self.b.to_vec(),
            x_orig: self.x_orig.as_ref().map(|x| x.to_vec()),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file_format())?)
    }

    /// Parses the JSON instance format.
    ///
    /// Files are validated for consistent dimensions but not for the
    /// `s < M < N` regime, so small hand-written instances load too.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)?;
        file.into_instance()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }
}

/// On-disk JSON layout of an instance. `a` is row-major with `m · n` entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub m: usize,
    pub n: usize,
    pub s: usize,
    pub nonneg: bool,
    pub sigma0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_orig: Option<Vec<f64>>,
}

impl InstanceFile {
    pub fn into_instance(self) -> Result<ProblemInstance> {
        check_len("a", self.m * self.n, self.a.len())?;
        let a = Array2::from_shape_vec((self.m, self.n), self.a)
            .map_err(|e| Error::InvalidInstance(e.to_string()))?;
        let mut builder = ProblemInstance::builder(a, Array1::from(self.b), self.s)
            .nonneg(self.nonneg)
            .sigma0(self.sigma0)
            .allow_any_shape();
        if let Some(x) = self.x_orig {
            builder = builder.x_orig(Array1::from(x));
        }
        if let Some(seed) = self.seed {
            builder = builder.seed(seed);
        }
        builder.build()
    }
}

/// The `s`-th largest entry of `x` (of `|x|` when `absolute`), counted with
/// multiplicity.
pub fn kth_largest(x: ArrayView1<'_, f64>, s: usize, absolute: bool) -> Result<f64> {
    if s == 0 || s > x.len() {
        return Err(Error::OutOfRange {
            what: "s",
            value: s,
            range: format!("[1, {}]", x.len()),
        });
    }
    let mut v: Vec<f64> = if absolute {
        x.iter().map(|t| t.abs()).collect()
    } else {
        x.to_vec()
    };
    let (_, kth, _) = v.select_nth_unstable_by(s - 1, |p, q| q.total_cmp(p));
    Ok(*kth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn identity_instance(b: Array1<f64>) -> ProblemInstance {
        let n = b.len();
        ProblemInstance::builder(Array2::eye(n), b, 1)
            .allow_any_shape()
            .build()
            .unwrap()
    }

    #[test]
    fn objective_examples() {
        let inst = identity_instance(array![1.0, 2.0]);
        assert_eq!(inst.objective(array![1.0, 2.0].view()).unwrap(), 0.0);
        let inst = identity_instance(array![0.0, 0.0]);
        assert_eq!(inst.objective(array![3.0, 4.0].view()).unwrap(), 12.5);
    }

    #[test]
    fn gradient_of_identity_with_zero_data_is_x() {
        let inst = identity_instance(array![0.0, 0.0, 0.0]);
        let x = array![1.5, -2.0, 0.25];
        assert_eq!(inst.gradient(x.view()).unwrap(), x);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let inst = identity_instance(array![0.0, 0.0]);
        assert!(matches!(
            inst.objective(array![1.0].view()),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(inst.gradient(array![1.0, 2.0, 3.0].view()).is_err());
    }

    #[test]
    fn regime_enforced_unless_overridden() {
        let a = Array2::<f64>::zeros((3, 5));
        let ok = ProblemInstance::builder(a.clone(), Array1::zeros(3), 2).build();
        assert!(ok.is_ok());
        let bad = ProblemInstance::builder(a.clone(), Array1::zeros(3), 3).build();
        assert!(matches!(bad, Err(Error::InvalidInstance(_))));
        let square = ProblemInstance::builder(Array2::eye(2), Array1::zeros(2), 1).build();
        assert!(square.is_err());
        let wrong_b = ProblemInstance::builder(a, Array1::zeros(4), 2).build();
        assert!(matches!(wrong_b, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn ground_truth_is_validated() {
        let a = Array2::<f64>::zeros((3, 5));
        let dense = ProblemInstance::builder(a.clone(), Array1::zeros(3), 2)
            .x_orig(array![1.0, 1.0, 1.0, 0.0, 0.0])
            .build();
        assert!(dense.is_err());
        let negative = ProblemInstance::builder(a, Array1::zeros(3), 2)
            .nonneg(true)
            .x_orig(array![-1.0, 0.0, 0.0, 0.0, 0.0])
            .build();
        assert!(negative.is_err());
    }

    #[test]
    fn kth_largest_examples() {
        assert_eq!(kth_largest(array![3.0, -5.0, 2.0].view(), 2, true).unwrap(), 3.0);
        assert_eq!(kth_largest(array![0.0, 2.0].view(), 1, false).unwrap(), 2.0);
        assert_eq!(kth_largest(array![1.0, 1.0, 1.0].view(), 3, false).unwrap(), 1.0);
        assert!(kth_largest(array![1.0].view(), 0, false).is_err());
        assert!(kth_largest(array![1.0].view(), 2, false).is_err());
    }

    #[test]
    fn json_round_trip_is_exact() {
        let a = array![[0.1, 1.0 / 3.0, -2.5e-17], [1e300, -0.0, 7.0]];
        let inst = ProblemInstance::builder(a, array![0.2, std::f64::consts::PI], 1)
            .x_orig(array![0.0, 0.0, 1.0 / 7.0])
            .sigma0(0.01)
            .seed(99)
            .allow_any_shape()
            .build()
            .unwrap();
        let back = ProblemInstance::from_json(&inst.to_json().unwrap()).unwrap();
        assert_eq!(back, inst);
    }
}
