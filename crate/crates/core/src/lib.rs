//! Scatter halfspace depth of a positive definite matrix.
//!
//! For observations `x_1, …, x_n`, a centre `μ` and a positive definite `Σ`,
//! the depth is the smallest number of observations, over all unit
//! directions `u`, lying on one side of the slab
//! `{x : |uᵀ(x − μ)| ≤ √(uᵀΣu)}`: either inside it or outside it. After the
//! affine map `y = Σ^{-1/2}(x − μ)` the slab becomes `{y : |uᵀy| ≤ 1}`.
//!
//! Engines:
//! - [`exact_depth_2d`]: angular sweep for bivariate data.
//! - [`exact_depth_nd`]: enumeration of maximal tangent hyperplanes, any `d ≥ 2`.
//! - [`approx_rdirections`], [`approx_rpoints`]: randomized upper bounds.
//! - [`oracle`]: unpruned reference enumerations for testing.

pub mod approx;
pub mod error;
pub mod exact2d;
pub mod exactnd;
pub mod linalg;
pub mod oracle;
pub mod sample;
pub mod visited;

pub use approx::{
    approx_depth, approx_depth_standardized, approx_rdirections, approx_rpoints, sample_uniform_direction, ApproxConfig, ApproxMethod,
};
pub use error::{DepthError, Result};
pub use exact2d::{circle_angles_2d, exact_depth_2d, exact_depth_2d_standardized};
pub use exactnd::{
    evaluate_tuple, exact_depth_nd, exact_depth_nd_standardized, ExactOptions, TupleBatchResult, DEFAULT_EPS,
};
pub use linalg::{
    orth_complement_basis, project2d, standardize, sym_inv_sqrt, tangent_directions_2d, Matrix, OrthoBasis2D,
};
pub use oracle::{enumerate_all_tangents, grid_lower_scan_2d, OracleReport};
pub use sample::{count_slab_strict, DepthResult, SlabCounts, StandardizedSample};
pub use visited::{SignedIndex, VisitedStore};
