//! Projections onto the sparse set `S = {x : ‖x‖₀ ≤ s}`, the nonnegative
//! orthant, and their intersection.
//!
//! All projectors write literal zeros, so supports can be read off with an
//! exact nonzero test. Ties in magnitude are broken toward the smaller index.

use std::cmp::Ordering;

use itertools::Itertools;
use ndarray::{Array1, ArrayView1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Strictly increasing list of indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SupportSet(Vec<usize>);

impl SupportSet {
    /// Sorts and deduplicates `indices`.
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        SupportSet(indices)
    }

    pub fn empty() -> Self {
        SupportSet(Vec::new())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn is_subset(&self, other: &SupportSet) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }

    pub fn union(&self, other: &SupportSet) -> SupportSet {
        SupportSet(self.0.iter().merge(other.0.iter()).dedup().copied().collect())
    }
}

/// Indices with `|x_i| > zero_tol`, ascending.
pub fn support(x: ArrayView1<'_, f64>, zero_tol: f64) -> SupportSet {
    SupportSet(
        x.iter()
            .enumerate()
            .filter(|(_, v)| v.abs() > zero_tol)
            .map(|(i, _)| i)
            .collect(),
    )
}

/// Entrywise `max(x_i, 0)`.
pub fn project_nonneg(x: ArrayView1<'_, f64>) -> Array1<f64> {
    x.mapv(|v| if v > 0.0 { v } else { 0.0 })
}

fn check_budget(s: usize, n: usize) -> Result<()> {
    if s == 0 || s > n {
        return Err(Error::OutOfRange {
            what: "s",
            value: s,
            range: format!("[1, {n}]"),
        });
    }
    Ok(())
}

/// Indices of the `s` largest magnitudes, ascending. Uses a partial
/// selection under the total order (|x| descending, index ascending), which
/// picks exactly the same set as a full sort followed by taking `s`.
pub(crate) fn top_s_indices(x: ArrayView1<'_, f64>, s: usize) -> Vec<usize> {
    let n = x.len();
    let s = s.min(n);
    if s == 0 {
        return Vec::new();
    }
    let by_magnitude = |&i: &usize, &j: &usize| -> Ordering {
        x[j].abs()
            .total_cmp(&x[i].abs())
            .then_with(|| i.cmp(&j))
    };
    let mut idx: Vec<usize> = (0..n).collect();
    if s < n {
        idx.select_nth_unstable_by(s - 1, by_magnitude);
        idx.truncate(s);
    }
    idx.sort_unstable();
    idx
}

/// Hard thresholding: keeps the `s` largest-magnitude entries.
pub fn project_sparse(x: ArrayView1<'_, f64>, s: usize) -> Result<Array1<f64>> {
    check_budget(s, x.len())?;
    Ok(hard_threshold(x, s))
}

pub(crate) fn hard_threshold(x: ArrayView1<'_, f64>, s: usize) -> Array1<f64> {
    let mut out = Array1::zeros(x.len());
    for i in top_s_indices(x, s) {
        out[i] = x[i];
    }
    out
}

/// Projection onto `S ∩ R₊ᴺ`: clamp, then hard-threshold. The order matters.
pub fn project_sparse_nonneg(x: ArrayView1<'_, f64>, s: usize) -> Result<Array1<f64>> {
    check_budget(s, x.len())?;
    Ok(hard_threshold(project_nonneg(x).view(), s))
}

/// The projector used by the solvers: onto `S ∩ R₊ᴺ` or onto `S`.
pub(crate) fn project(x: ArrayView1<'_, f64>, s: usize, nonneg: bool) -> Array1<f64> {
    if nonneg {
        hard_threshold(project_nonneg(x).view(), s)
    } else {
        hard_threshold(x, s)
    }
}

/// Largest `N` accepted by [`brute_force_projection`].
pub const BRUTE_FORCE_MAX_N: usize = 20;

/// Exhaustive projection used as a test oracle.
///
/// Tries every support of size at most `s`, projects `x` onto its coordinate
/// subspace (clamped at zero when `nonneg`), and returns a closest point. Among
/// equally close candidates the lexicographically smallest support wins.
pub fn brute_force_projection(
    x: ArrayView1<'_, f64>,
    s: usize,
    nonneg: bool,
) -> Result<Array1<f64>> {
    let n = x.len();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::TooLarge {
            count: 1u128 << n,
            limit: 1u128 << BRUTE_FORCE_MAX_N,
        });
    }
    check_budget(s, n)?;
    let keep = |v: f64| if nonneg { v.max(0.0) } else { v };
    let total: f64 = x.iter().map(|v| v * v).sum();
    let mut best: Option<(f64, Vec<usize>)> = None;
    for k in 0..=s {
        for cand in (0..n).combinations(k) {
            // Distance² = Σ_{i∉T} x_i² + Σ_{i∈T} (x_i − keep(x_i))².
            let d2 = cand.iter().fold(total, |acc, &i| {
                let kept = keep(x[i]);
                acc - x[i] * x[i] + (x[i] - kept) * (x[i] - kept)
            });
            let better = match &best {
                None => true,
                Some((bd, bs)) => d2 < *bd || (d2 == *bd && cand < *bs),
            };
            if better {
                best = Some((d2, cand));
            }
        }
    }
    let (_, chosen) = best.expect("the empty support is always a candidate");
    let mut out = Array1::zeros(n);
    for i in chosen {
        out[i] = keep(x[i]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn nonneg_clamp() {
        assert_eq!(project_nonneg(array![-2.0, 1.0].view()), array![0.0, 1.0]);
        assert_eq!(project_nonneg(array![0.0, 0.0].view()), array![0.0, 0.0]);
        assert_eq!(
            project_nonneg(array![-1.0, -3.0, -0.5].view()),
            Array1::<f64>::zeros(3)
        );
    }

    #[test]
    fn hard_threshold_examples() {
        let p = project_sparse(array![3.0, -5.0, 2.0].view(), 2).unwrap();
        assert_eq!(p, array![3.0, -5.0, 0.0]);
        let p = project_sparse(array![1.0, 1.0, 0.0].view(), 1).unwrap();
        assert_eq!(p, array![1.0, 0.0, 0.0]);
        let p = project_sparse(array![0.0, 0.0, 0.0].view(), 2).unwrap();
        assert_eq!(p, array![0.0, 0.0, 0.0]);
        assert!(project_sparse(array![1.0].view(), 0).is_err());
        assert!(project_sparse(array![1.0].view(), 2).is_err());
    }

    #[test]
    fn projection_order_is_not_commutative() {
        let x = array![-2.0, 1.0];
        assert_eq!(project_sparse_nonneg(x.view(), 1).unwrap(), array![0.0, 1.0]);
        let reversed = project_nonneg(project_sparse(x.view(), 1).unwrap().view());
        assert_eq!(reversed, array![0.0, 0.0]);
    }

    #[test]
    fn support_examples() {
        assert_eq!(support(array![0.0, 2.0, 0.0].view(), 0.0).indices(), &[1]);
        assert!(support(Array1::<f64>::zeros(4).view(), 0.0).is_empty());
        assert_eq!(support(array![1e-14, 1.0].view(), 1e-12).indices(), &[1]);
    }

    #[test]
    fn brute_force_examples() {
        let p = brute_force_projection(array![-2.0, 1.0].view(), 1, true).unwrap();
        assert_eq!(p, array![0.0, 1.0]);
        let p = brute_force_projection(array![3.0, -5.0, 2.0].view(), 2, false).unwrap();
        assert_eq!(p, array![3.0, -5.0, 0.0]);
        let big = Array1::<f64>::zeros(21);
        assert!(matches!(
            brute_force_projection(big.view(), 1, false),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn brute_force_tie_prefers_smallest_support() {
        let p = brute_force_projection(array![1.0, -1.0, 1.0].view(), 1, false).unwrap();
        assert_eq!(p, array![1.0, 0.0, 0.0]);
    }

    #[test]
    fn top_s_matches_sort_then_take_with_ties() {
        let x: Array1<f64> = array![2.0, -2.0, 1.0, 2.0, 0.0, -1.0];
        for s in 1..=6 {
            let mut order: Vec<usize> = (0..6).collect();
            order.sort_by(|&i, &j| x[j].abs().total_cmp(&x[i].abs()).then(i.cmp(&j)));
            let mut expect = order[..s].to_vec();
            expect.sort_unstable();
            assert_eq!(top_s_indices(x.view(), s), expect);
        }
    }

    #[test]
    fn support_set_algebra() {
        let a = SupportSet::new(vec![3, 1, 1]);
        let b = SupportSet::new(vec![2, 3]);
        assert_eq!(a.indices(), &[1, 3]);
        assert_eq!(a.union(&b).indices(), &[1, 2, 3]);
        assert!(SupportSet::new(vec![3]).is_subset(&a));
        assert!(!b.is_subset(&a));
    }
}
