//! Graded dimensions and the cohomology of a mapping fiber.

use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

/// Dimensions of a graded vector space, `dims[i]` sitting in degree `low + i`.
///
/// Stored trimmed, so equal spaces compare equal regardless of how they were built.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GradedDims {
    low: i32,
    dims: Vec<usize>,
}

impl GradedDims {
    pub fn zero() -> Self {
        GradedDims { low: 0, dims: Vec::new() }
    }

    pub fn new(low: i32, dims: Vec<usize>) -> Self {
        let first = dims.iter().position(|&d| d > 0);
        let last = dims.iter().rposition(|&d| d > 0);
        match (first, last) {
            (Some(a), Some(b)) => GradedDims { low: low + a as i32, dims: dims[a..=b].to_vec() },
            _ => GradedDims::zero(),
        }
    }

    pub fn from_fn(low: i32, high: i32, f: impl Fn(i32) -> usize) -> Self {
        GradedDims::new(low, (low..=high).map(f).collect())
    }

    pub fn get(&self, degree: i32) -> usize {
        usize::try_from(degree - self.low)
            .ok()
            .and_then(|i| self.dims.get(i).copied())
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    /// Lowest and highest nonzero degree.
    pub fn range(&self) -> Option<(i32, i32)> {
        (!self.is_zero()).then(|| (self.low, self.low + self.dims.len() as i32 - 1))
    }

    pub fn euler(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(i, &d)| if (self.low + i as i32) % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }

    /// `(h⁻¹, h⁰, h¹)`.
    pub fn triple(&self) -> (usize, usize, usize) {
        (self.get(-1), self.get(0), self.get(1))
    }

    /// The same space moved up by `k` degrees, `V[k]` in the usual notation.
    pub fn shift(&self, k: i32) -> Self {
        GradedDims { low: self.low - k, dims: self.dims.clone() }
    }
}

impl Add for &GradedDims {
    type Output = GradedDims;

    fn add(self, other: &GradedDims) -> GradedDims {
        match (self.range(), other.range()) {
            (None, _) => other.clone(),
            (_, None) => self.clone(),
            (Some((a, b)), Some((c, d))) => GradedDims::from_fn(a.min(c), b.max(d), |k| self.get(k) + other.get(k)),
        }
    }
}

impl fmt::Display for GradedDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.range().map_or((0, 0), |(a, b)| (a.min(-1), b.max(1)));
        let parts: Vec<String> = (lo..=hi).map(|k| format!("h^{k}={}", self.get(k))).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Cohomology of the fiber of a map `f: C → D` between graded spaces with
/// zero differential, where `rank(k)` is the rank of `f` in degree `k`.
///
/// `h^k = (dim C^k − rank f_k) + (dim D^{k−1} − rank f_{k−1})`.
pub fn fiber(source: &GradedDims, target: &GradedDims, rank: impl Fn(i32) -> usize) -> GradedDims {
    let span = |g: &GradedDims, shift: i32| g.range().map(|(a, b)| (a + shift, b + shift));
    let ends: Vec<(i32, i32)> = [span(source, 0), span(target, 1)].into_iter().flatten().collect();
    let Some(lo) = ends.iter().map(|e| e.0).min() else {
        return GradedDims::zero();
    };
    let hi = ends.iter().map(|e| e.1).max().expect("nonempty");
    GradedDims::from_fn(lo, hi, |k| {
        source.get(k) - rank(k).min(source.get(k)) + target.get(k - 1) - rank(k - 1).min(target.get(k - 1))
    })
}
