//! Standardized samples and the slab counts every engine is built on.

use crate::error::{DepthError, Result};
use crate::linalg::{dot, standardize, Matrix};

/// Observations after the map `y_i = Σ^{-1/2}(x_i − μ)`, split into the points
/// strictly outside the unit sphere and a count of the rest.
#[derive(Debug, Clone)]
pub struct StandardizedSample {
    d: usize,
    /// Row-major `n × d` coordinates.
    coords: Vec<f64>,
    outside_idx: Vec<usize>,
    inside_count: usize,
}

impl StandardizedSample {
    /// Standardizes raw observations against `(μ, Σ)`.
    pub fn new(x: &[Vec<f64>], mu: &[f64], sigma: &Matrix) -> Result<Self> {
        if x.is_empty() {
            return Err(DepthError::EmptyDataset);
        }
        let y = standardize(x, mu, sigma)?;
        Self::from_points(&y)
    }

    /// Wraps points that are already standardized.
    pub fn from_points(y: &[Vec<f64>]) -> Result<Self> {
        let d = y.first().ok_or(DepthError::EmptyDataset)?.len();
        if d == 0 {
            return Err(DepthError::InvalidArgument("points have dimension 0".into()));
        }
        let mut coords = Vec::with_capacity(y.len() * d);
        let mut outside_idx = Vec::new();
        for (i, p) in y.iter().enumerate() {
            if p.len() != d {
                return Err(DepthError::DimensionMismatch { expected: d, found: p.len() });
            }
            if dot(p, p) > 1.0 {
                outside_idx.push(i);
            }
            coords.extend_from_slice(p);
        }
        let inside_count = y.len() - outside_idx.len();
        Ok(StandardizedSample { d, coords, outside_idx, inside_count })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.d
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.d..(i + 1) * self.d]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.d)
    }

    /// Indices of points with `‖y_i‖ > 1`, ascending.
    pub fn outside_idx(&self) -> &[usize] {
        &self.outside_idx
    }

    /// Number of points with `‖y_i‖ ≤ 1`.
    pub fn inside_count(&self) -> usize {
        self.inside_count
    }

    pub fn to_vecs(&self) -> Vec<Vec<f64>> {
        self.points().map(<[f64]>::to_vec).collect()
    }
}

/// Strict counts of points inside (`|uᵀy| < 1`) and outside (`|uᵀy| > 1`)
/// the slab of a direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SlabCounts {
    pub p_in: usize,
    pub p_out: usize,
}

impl SlabCounts {
    pub fn score(&self) -> usize {
        self.p_in.min(self.p_out)
    }
}

/// Outcome of a depth computation: the integer depth, a direction attaining it
/// when one was scored, and how many directions were evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthResult {
    pub depth: usize,
    pub witness: Option<Vec<f64>>,
    pub evaluations: u64,
}

impl DepthResult {
    pub fn zero() -> Self {
        DepthResult { depth: 0, witness: None, evaluations: 0 }
    }
}

/// Strict slab counts for direction `v`; boundary points count in neither set.
pub fn count_slab_strict<'a>(y: impl IntoIterator<Item = &'a [f64]>, v: &[f64]) -> SlabCounts {
    let mut counts = SlabCounts::default();
    for p in y {
        let t = dot(p, v).abs();
        if t < 1.0 {
            counts.p_in += 1;
        } else if t > 1.0 {
            counts.p_out += 1;
        }
    }
    counts
}
