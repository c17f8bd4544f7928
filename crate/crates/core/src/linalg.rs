//! Dense linear algebra and unit-sphere geometry used by every depth engine.
//!
//! Everything here works in the data dimension `d`, which is small. The
//! eigen and QR factorisations are delegated to nalgebra; the remaining
//! helpers are plain loops over `&[f64]` slices and row-major [`Matrix`]
//! values.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{DepthError, Result};

/// Default relative tolerance for symmetry and positive-definiteness checks.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Relative threshold on Householder diagonals below which generators are
/// considered linearly dependent.
pub const RANK_TOL: f64 = 1e-10;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(DepthError::InvalidArgument(format!(
                "matrix shape {rows}x{cols} has an empty side"
            )));
        }
        if data.len() != rows * cols {
            return Err(DepthError::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix from equally long rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(DepthError::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Matrix::new(rows.len(), cols, data)
    }

    pub fn identity(d: usize) -> Self {
        Matrix::diagonal(&vec![1.0; d])
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let d = diag.len();
        let mut data = vec![0.0; d * d];
        for (i, &v) in diag.iter().enumerate() {
            data[i * d + i] = v;
        }
        Matrix { rows: d, cols: d, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = vec![0.0; self.data.len()];
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[c * self.rows + r] = self.get(r, c);
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data: out }
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(DepthError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = vec![0.0; self.rows * other.cols];
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0.0 {
                    continue;
                }
                for c in 0..other.cols {
                    out[r * other.cols + c] += a * other.get(k, c);
                }
            }
        }
        Matrix::new(self.rows, other.cols, out)
    }

    pub fn mul_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(DepthError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows).map(|r| dot(self.row(r), v)).collect())
    }

    /// Largest absolute entry of `self - selfᵀ`.
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.rows.min(self.cols) {
            for c in r + 1..self.cols.min(self.rows) {
                worst = worst.max((self.get(r, c) - self.get(c, r)).abs());
            }
        }
        worst
    }

    /// Elementwise difference; shapes must agree.
    pub fn sub(&self, other: &Matrix) -> Matrix {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Symmetric eigendecomposition.
///
/// Returns eigenvalues in ascending order together with the matrix whose
/// columns are the matching orthonormal eigenvectors. The input is averaged
/// with its transpose first; callers check symmetry.
pub fn symmetric_eigen(a: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    if !a.is_square() {
        return Err(DepthError::NotSquare { rows: a.rows, cols: a.cols });
    }
    if a.data.iter().any(|v| !v.is_finite()) {
        return Err(DepthError::InvalidArgument("matrix has non-finite entries".into()));
    }
    let n = a.rows;
    let m = DMatrix::from_row_slice(n, n, &a.data);
    let sym = (&m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, 10_000)
        .ok_or_else(|| DepthError::InvalidArgument("eigendecomposition did not converge".into()))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = Matrix::identity(n);
    for (dst, &src) in order.iter().enumerate() {
        for k in 0..n {
            vectors.set(k, dst, eig.eigenvectors[(k, src)]);
        }
    }
    Ok((values, vectors))
}

/// The unique symmetric `R` with `R·sigma·R = I`.
///
/// `tol` is relative: symmetry is checked against `tol·max(1, max|σ|)` and
/// eigenvalues at or below `tol·λ_max` are rejected.
pub fn sym_inv_sqrt(sigma: &Matrix, tol: f64) -> Result<Matrix> {
    if !sigma.is_square() {
        return Err(DepthError::NotSquare { rows: sigma.rows, cols: sigma.cols });
    }
    let asym = sigma.max_asymmetry();
    if asym > tol * sigma.max_abs().max(1.0) {
        return Err(DepthError::NotSymmetric { max_asymmetry: asym });
    }
    let (values, q) = symmetric_eigen(sigma)?;
    let d = values.len();
    let lambda_max = values[d - 1];
    let lambda_min = values[0];
    if lambda_max.is_nan() || lambda_max <= 0.0 || lambda_min <= tol * lambda_max {
        return Err(DepthError::NotPositiveDefinite { min_eigenvalue: lambda_min });
    }
    let inv_sqrt: Vec<f64> = values.iter().map(|l| 1.0 / l.sqrt()).collect();
    let mut r = Matrix::new(d, d, vec![0.0; d * d])?;
    for i in 0..d {
        for j in i..d {
            let s: f64 = (0..d).map(|k| q.get(i, k) * inv_sqrt[k] * q.get(j, k)).sum();
            r.set(i, j, s);
            r.set(j, i, s);
        }
    }
    // one symmetric Newton step on R·Σ·R = I recovers the accuracy the
    // eigensolver loses on the smallest eigenvalues
    let e = Matrix::identity(d).sub(&r.matmul(sigma)?.matmul(&r)?);
    let re = r.matmul(&e)?;
    for i in 0..d {
        for j in i..d {
            let s = r.get(i, j) + 0.25 * (re.get(i, j) + re.get(j, i));
            r.set(i, j, s);
            r.set(j, i, s);
        }
    }
    Ok(r)
}

/// Maps every observation to `Σ^{-1/2}(x_i − μ)`, keeping input order.
pub fn standardize(x: &[Vec<f64>], mu: &[f64], sigma: &Matrix) -> Result<Vec<Vec<f64>>> {
    let d = mu.len();
    if sigma.rows() != d || sigma.cols() != d {
        return Err(DepthError::DimensionMismatch { expected: d, found: sigma.rows() });
    }
    let r = sym_inv_sqrt(sigma, DEFAULT_TOL)?;
    let mut centered = vec![0.0; d];
    x.iter()
        .map(|xi| {
            if xi.len() != d {
                return Err(DepthError::DimensionMismatch { expected: d, found: xi.len() });
            }
            for ((c, a), b) in centered.iter_mut().zip(xi).zip(mu) {
                *c = a - b;
            }
            r.mul_vec(&centered)
        })
        .collect()
}

/// Orthonormal basis of the orthogonal complement of `span(generators)` in
/// `R^dim`, taken from a Householder QR factorisation without pivoting.
///
/// The generators are followed by the identity columns so that the
/// factorisation yields a full square `Q`; its trailing `dim − p` columns span
/// the complement. Fails with `RankDeficient` when the generators are not
/// linearly independent (relative to [`RANK_TOL`]).
pub fn orth_complement(generators: &[&[f64]], dim: usize) -> Result<Vec<Vec<f64>>> {
    let p = generators.len();
    if p > dim {
        return Err(DepthError::RankDeficient { rank: dim, expected: p });
    }
    let mut a = DMatrix::<f64>::zeros(dim, p + dim);
    for (j, g) in generators.iter().enumerate() {
        if g.len() != dim {
            return Err(DepthError::DimensionMismatch { expected: dim, found: g.len() });
        }
        a.column_mut(j).copy_from_slice(g);
    }
    for i in 0..dim {
        a[(i, p + i)] = 1.0;
    }
    let scale = generators.iter().map(|g| norm(g)).fold(0.0f64, f64::max);
    let qr = a.qr();
    let r = qr.r();
    for j in 0..p {
        let diag = r[(j, j)].abs();
        if diag <= RANK_TOL * scale || diag == 0.0 {
            return Err(DepthError::RankDeficient { rank: j, expected: p });
        }
    }
    let q = qr.q();
    Ok((p..dim).map(|i| q.column(i).iter().copied().collect()).collect())
}

/// Two orthonormal vectors spanning a plane in `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoBasis2D {
    pub alpha1: Vec<f64>,
    pub alpha2: Vec<f64>,
}

impl OrthoBasis2D {
    pub fn dim(&self) -> usize {
        self.alpha1.len()
    }

    #[inline]
    pub fn project(&self, y: &[f64]) -> [f64; 2] {
        [dot(y, &self.alpha1), dot(y, &self.alpha2)]
    }

    /// Lifts in-plane coordinates back to `R^d`.
    pub fn lift(&self, v: [f64; 2]) -> Vec<f64> {
        self.alpha1
            .iter()
            .zip(&self.alpha2)
            .map(|(a, b)| v[0] * a + v[1] * b)
            .collect()
    }
}

/// Orthonormal basis of the 2-dimensional complement of `d − 2` generators.
pub fn orth_complement_basis(generators: &[&[f64]], dim: usize) -> Result<OrthoBasis2D> {
    if dim < 2 || generators.len() + 2 != dim {
        return Err(DepthError::RankDeficient {
            rank: generators.len(),
            expected: dim.saturating_sub(2),
        });
    }
    let mut comp = orth_complement(generators, dim)?;
    let alpha2 = comp.pop().expect("complement has two vectors");
    let alpha1 = comp.pop().expect("complement has two vectors");
    Ok(OrthoBasis2D { alpha1, alpha2 })
}

/// Coordinates of each point in the plane spanned by `basis`.
pub fn project2d(points: &[Vec<f64>], basis: &OrthoBasis2D) -> Result<Vec<[f64; 2]>> {
    points
        .iter()
        .map(|y| {
            if y.len() != basis.dim() {
                return Err(DepthError::DimensionMismatch { expected: basis.dim(), found: y.len() });
            }
            Ok(basis.project(y))
        })
        .collect()
}

/// The two unit vectors `v` with `vᵀw = 1`: normals of the tangent lines from
/// `w` to the unit circle. The first is rotated counter-clockwise from `w`.
pub fn tangent_directions_2d(w: [f64; 2]) -> Result<([f64; 2], [f64; 2])> {
    let r2 = w[0] * w[0] + w[1] * w[1];
    if r2 < 1.0 {
        return Err(DepthError::InsideBall { norm: r2.sqrt() });
    }
    Ok(tangent_pair_unchecked(w, r2))
}

/// Tangent directions for `‖w‖² = r2`, clamping `r2 < 1` onto the circle.
#[inline]
pub(crate) fn tangent_pair_unchecked(w: [f64; 2], r2: f64) -> ([f64; 2], [f64; 2]) {
    let r2 = r2.max(1.0);
    let r = r2.sqrt();
    let along = [w[0] / r2, w[1] / r2];
    let h = (1.0 - 1.0 / r2).max(0.0).sqrt() / r;
    let perp = [-w[1] * h, w[0] * h];
    (
        [along[0] + perp[0], along[1] + perp[1]],
        [along[0] - perp[0], along[1] - perp[1]],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn gaussian_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> Matrix {
        Matrix::new(r, c, (0..r * c).map(|_| rng.sample(StandardNormal)).collect()).unwrap()
    }

    fn residual_identity(r: &Matrix, sigma: &Matrix) -> f64 {
        let prod = r.matmul(sigma).unwrap().matmul(r).unwrap();
        let d = prod.rows();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((prod.get(i, j) - target).abs());
            }
        }
        worst
    }

    #[test]
    fn inv_sqrt_of_identity_and_diagonal() {
        let r = sym_inv_sqrt(&Matrix::identity(3), DEFAULT_TOL).unwrap();
        assert_eq!(r.as_slice().len(), 9);
        for i in 0..3 {
            for j in 0..3 {
                assert!(close(r.get(i, j), if i == j { 1.0 } else { 0.0 }, 1e-15));
            }
        }
        let r = sym_inv_sqrt(&Matrix::diagonal(&[4.0, 9.0]), DEFAULT_TOL).unwrap();
        assert!(close(r.get(0, 0), 0.5, 1e-15));
        assert!(close(r.get(1, 1), 1.0 / 3.0, 1e-15));
        assert!(close(r.get(0, 1), 0.0, 1e-15));
    }

    #[test]
    fn inv_sqrt_of_coupled_2x2() {
        let sigma = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        // eigenpairs (3, (1,1)/√2) and (1, (1,-1)/√2) give R = Σ λ^{-1/2} q qᵀ
        let s3 = 1.0 / 3f64.sqrt();
        let a = (1.0 + s3) / 2.0;
        let b = (s3 - 1.0) / 2.0;
        let r = sym_inv_sqrt(&sigma, DEFAULT_TOL).unwrap();
        assert!(close(r.get(0, 0), a, 1e-12));
        assert!(close(r.get(1, 1), a, 1e-12));
        assert!(close(r.get(0, 1), b, 1e-12));
        assert!(close(r.get(1, 0), b, 1e-12));
        assert!(residual_identity(&r, &sigma) < 1e-12);
    }

    #[test]
    fn inv_sqrt_rejects_bad_input() {
        let asym = Matrix::from_rows(&[vec![1.0, 0.5], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(sym_inv_sqrt(&asym, DEFAULT_TOL), Err(DepthError::NotSymmetric { .. })));
        let singular = Matrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!(matches!(
            sym_inv_sqrt(&singular, DEFAULT_TOL),
            Err(DepthError::NotPositiveDefinite { .. })
        ));
        let indefinite = Matrix::diagonal(&[1.0, -2.0]);
        assert!(matches!(
            sym_inv_sqrt(&indefinite, DEFAULT_TOL),
            Err(DepthError::NotPositiveDefinite { .. })
        ));
        let rect = Matrix::new(2, 3, vec![0.0; 6]).unwrap();
        assert!(matches!(sym_inv_sqrt(&rect, DEFAULT_TOL), Err(DepthError::NotSquare { .. })));
    }

    #[test]
    fn inv_sqrt_random_spd_up_to_condition_1e6() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..200 {
            let d = 2 + trial % 5;
            // Q diag(λ) Qᵀ with log-uniform λ spanning at most six decades
            let g = gaussian_matrix(&mut rng, d, d);
            let gtg = g.transpose().matmul(&g).unwrap();
            let (_, q) = symmetric_eigen(&gtg).unwrap();
            let lambdas: Vec<f64> = (0..d)
                .map(|i| if i == 0 { 1.0 } else if i == 1 { 1e-6 } else { 10f64.powf(-6.0 * rng.random::<f64>()) })
                .collect();
            let sigma = q.matmul(&Matrix::diagonal(&lambdas)).unwrap().matmul(&q.transpose()).unwrap();
            let r = sym_inv_sqrt(&sigma, DEFAULT_TOL).unwrap();
            assert!(r.max_asymmetry() < 1e-12);
            let res = residual_identity(&r, &sigma);
            assert!(res < 1e-10, "trial {trial}: residual {res:e}");
        }
    }

    #[test]
    fn standardize_examples() {
        let y = standardize(&[vec![3.0, 0.0]], &[1.0, 0.0], &Matrix::diagonal(&[4.0, 4.0])).unwrap();
        assert!(close(y[0][0], 1.0, 1e-15) && close(y[0][1], 0.0, 1e-15));

        let y = standardize(&[vec![0.0, 0.0]], &[0.0, 0.0], &Matrix::identity(2)).unwrap();
        assert_eq!(y, vec![vec![0.0, 0.0]]);

        // Mahalanobis norm: solve Σ z = x by Cramer's rule and compare xᵀz with ‖y‖²
        let sigma = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let x = [2.0, 2.0];
        let det = 2.0 * 2.0 - 1.0 * 1.0;
        let z = [(2.0 * x[0] - 1.0 * x[1]) / det, (2.0 * x[1] - 1.0 * x[0]) / det];
        let mahal = x[0] * z[0] + x[1] * z[1];
        assert!(close(mahal, 8.0 / 3.0, 1e-14));
        let y = standardize(&[x.to_vec()], &[0.0, 0.0], &sigma).unwrap();
        assert!(close(dot(&y[0], &y[0]), mahal, 1e-10));
    }

    #[test]
    fn standardize_dimension_checks() {
        let err = standardize(&[vec![1.0, 2.0, 3.0]], &[0.0, 0.0], &Matrix::identity(2));
        assert!(matches!(err, Err(DepthError::DimensionMismatch { expected: 2, found: 3 })));
        let err = standardize(&[vec![1.0, 2.0]], &[0.0, 0.0], &Matrix::identity(3));
        assert!(matches!(err, Err(DepthError::DimensionMismatch { .. })));
    }

    #[test]
    fn complement_examples() {
        let b = orth_complement_basis(&[&[1.0, 0.0, 0.0]], 3).unwrap();
        for a in [&b.alpha1, &b.alpha2] {
            assert!(close(a[0], 0.0, 1e-15));
            assert!(close(norm(a), 1.0, 1e-15));
        }
        assert!(close(dot(&b.alpha1, &b.alpha2), 0.0, 1e-15));

        let b = orth_complement_basis(&[], 2).unwrap();
        assert_eq!(b.alpha1, vec![1.0, 0.0]);
        assert_eq!(b.alpha2, vec![0.0, 1.0]);
    }

    #[test]
    fn complement_detects_dependence() {
        let g1 = [1.0, 2.0, 3.0, 4.0];
        let g2 = [2.0, 4.0, 6.0, 8.0];
        assert!(matches!(
            orth_complement_basis(&[&g1, &g2], 4),
            Err(DepthError::RankDeficient { .. })
        ));
        assert!(orth_complement_basis(&[&g1], 4).is_err());
    }

    #[test]
    fn projection_examples() {
        let basis = OrthoBasis2D { alpha1: vec![1.0, 0.0, 0.0], alpha2: vec![0.0, 1.0, 0.0] };
        let w = project2d(&[vec![2.0, 0.0, 0.0], vec![0.0, 0.0, 5.0]], &basis).unwrap();
        assert_eq!(w, vec![[2.0, 0.0], [0.0, 0.0]]);
        assert!(project2d(&[vec![1.0, 2.0]], &basis).is_err());
    }

    #[test]
    fn tangent_examples() {
        let (v1, v2) = tangent_directions_2d([2.0, 0.0]).unwrap();
        let h = 3f64.sqrt() / 2.0;
        assert!(close(v1[0], 0.5, 1e-15) && close(v1[1], h, 1e-15));
        assert!(close(v2[0], 0.5, 1e-15) && close(v2[1], -h, 1e-15));

        let (v1, v2) = tangent_directions_2d([1.0, 0.0]).unwrap();
        assert_eq!(v1, [1.0, 0.0]);
        assert_eq!(v2, [1.0, 0.0]);

        let (v1, v2) = tangent_directions_2d([0.0, -5.0]).unwrap();
        let x = 2.0 * 6f64.sqrt() / 5.0;
        assert!(close(v1[0], x, 1e-15) && close(v1[1], -0.2, 1e-15));
        assert!(close(v2[0], -x, 1e-15) && close(v2[1], -0.2, 1e-15));

        assert!(matches!(tangent_directions_2d([0.5, 0.5]), Err(DepthError::InsideBall { .. })));
    }

    proptest! {
        #[test]
        fn complement_is_orthonormal_and_annihilates(seed in any::<u64>(), d in 2usize..7) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let gens: Vec<Vec<f64>> = (0..d - 2)
                .map(|_| (0..d).map(|_| rng.sample(StandardNormal)).collect())
                .collect();
            let refs: Vec<&[f64]> = gens.iter().map(Vec::as_slice).collect();
            let b = orth_complement_basis(&refs, d).unwrap();
            prop_assert!((norm(&b.alpha1) - 1.0).abs() < 1e-10);
            prop_assert!((norm(&b.alpha2) - 1.0).abs() < 1e-10);
            prop_assert!(dot(&b.alpha1, &b.alpha2).abs() < 1e-10);
            for g in &gens {
                let scale = norm(g);
                prop_assert!(dot(&b.alpha1, g).abs() < 1e-10 * scale.max(1.0));
                prop_assert!(dot(&b.alpha2, g).abs() < 1e-10 * scale.max(1.0));
            }
        }

        #[test]
        fn projection_is_linear_and_contracting(seed in any::<u64>(), a in -3.0f64..3.0, c in -3.0f64..3.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = 4;
            let gens: Vec<Vec<f64>> = (0..2).map(|_| (0..d).map(|_| rng.sample(StandardNormal)).collect()).collect();
            let refs: Vec<&[f64]> = gens.iter().map(Vec::as_slice).collect();
            let basis = orth_complement_basis(&refs, d).unwrap();
            let y: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
            let z: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
            let comb: Vec<f64> = y.iter().zip(&z).map(|(p, q)| a * p + c * q).collect();
            let pw = project2d(&[y.clone(), z.clone(), comb], &basis).unwrap();
            for k in 0..2 {
                prop_assert!((pw[2][k] - (a * pw[0][k] + c * pw[1][k])).abs() < 1e-10);
            }
            prop_assert!(pw[0][0].hypot(pw[0][1]) <= norm(&y) + 1e-12);
        }

        #[test]
        fn tangent_contracts_hold(x in -50.0f64..50.0, y in -50.0f64..50.0) {
            prop_assume!(x * x + y * y >= 1.0);
            let w = [x, y];
            let (v1, v2) = tangent_directions_2d(w).unwrap();
            for v in [v1, v2] {
                prop_assert!((v[0].hypot(v[1]) - 1.0).abs() < 1e-10);
                prop_assert!((v[0] * w[0] + v[1] * w[1] - 1.0).abs() < 1e-10);
            }
            // v2 is the mirror image of v1 across the line through 0 and w
            let r2 = x * x + y * y;
            let along = (v1[0] * w[0] + v1[1] * w[1]) / r2;
            let mirror = [2.0 * along * w[0] - v1[0], 2.0 * along * w[1] - v1[1]];
            prop_assert!((mirror[0] - v2[0]).abs() < 1e-10 && (mirror[1] - v2[1]).abs() < 1e-10);
        }
    }
}
