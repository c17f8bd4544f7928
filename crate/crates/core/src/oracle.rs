//! Slow reference computations for checking the engines.
//!
//! [`enumerate_all_tangents`] scores a superset of the maximal directions:
//! every collection of `1..d` signed points (inside points included, they are
//! simply infeasible) is tried without pruning or early exit. It shares no
//! code with the exact engine: tangent directions come from the minimum-norm
//! solution of `Zᵀu = 1` plus a null-space step rather than from a planar
//! projection, and slabs are counted directly in `R^d`.

use crate::visited::Combinations;

/// Summary of an oracle run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub depth: usize,
    pub directions_scored: u64,
    /// Feasible collections found, indexed by collection size minus one.
    pub per_k_breakdown: Vec<u64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves the symmetric positive definite system `g·c = rhs` by Gaussian
/// elimination with partial pivoting. `None` when numerically singular.
fn solve(mut g: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let k = rhs.len();
    let scale = g.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    for col in 0..k {
        let piv = (col..k).max_by(|&a, &b| g[a][col].abs().total_cmp(&g[b][col].abs()))?;
        if g[piv][col].abs() <= 1e-12 * scale {
            return None;
        }
        g.swap(col, piv);
        rhs.swap(col, piv);
        for r in col + 1..k {
            let f = g[r][col] / g[col][col];
            for c in col..k {
                g[r][c] -= f * g[col][c];
            }
            rhs[r] -= f * rhs[col];
        }
    }
    let mut x = vec![0.0; k];
    for r in (0..k).rev() {
        let s: f64 = (r + 1..k).map(|c| g[r][c] * x[c]).sum();
        x[r] = (rhs[r] - s) / g[r][r];
    }
    Some(x)
}

/// The directions `u` on the unit sphere with `uᵀz_j = 1` for all `j` that the
/// oracle scores: `u₀ ± t·n` with `u₀` the minimum-norm solution and `n` a unit
/// vector orthogonal to every `z_j`. `None` if the `z_j` are dependent or the
/// solution set misses the sphere.
fn tangent_directions(z: &[Vec<f64>]) -> Option<[Vec<f64>; 2]> {
    let d = z[0].len();
    let k = z.len();
    let gram: Vec<Vec<f64>> = z.iter().map(|a| z.iter().map(|b| dot(a, b)).collect()).collect();
    let combine = |c: &[f64]| -> Vec<f64> {
        (0..d).map(|i| z.iter().zip(c).map(|(zj, cj)| zj[i] * cj).sum()).collect()
    };
    let c = solve(gram.clone(), vec![1.0; k])?;
    let mut u0 = combine(&c);
    // one step of iterative refinement on the residual 1 − Zᵀu₀
    let resid: Vec<f64> = z.iter().map(|zj| 1.0 - dot(zj, &u0)).collect();
    if let Some(dc) = solve(gram, resid) {
        for (a, b) in u0.iter_mut().zip(combine(&dc)) {
            *a += b;
        }
    }
    let u0_sq = dot(&u0, &u0);
    let band = 1.0 / (1.0 - 1e-12);
    if u0_sq > band * band {
        return None;
    }

    // modified Gram-Schmidt: orthonormalize the z_j, then the first unit
    // coordinate vector with a substantial residual gives n
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(k);
    for zj in z {
        let mut v = zj.clone();
        for b in &basis {
            let p = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
        }
        let nv = dot(&v, &v).sqrt();
        if nv <= 1e-10 * dot(zj, zj).sqrt() {
            return None;
        }
        v.iter_mut().for_each(|x| *x /= nv);
        basis.push(v);
    }
    let mut normal = None;
    let mut best_norm = 0.0;
    for axis in 0..d {
        let mut v = vec![0.0; d];
        v[axis] = 1.0;
        for _ in 0..2 {
            for b in &basis {
                let p = dot(&v, b);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
            }
        }
        let nv = dot(&v, &v).sqrt();
        if nv > best_norm {
            best_norm = nv;
            normal = Some(v.into_iter().map(|x| x / nv).collect::<Vec<f64>>());
        }
        if nv > 0.5 {
            break;
        }
    }
    let normal = normal?;
    let t = (1.0 - u0_sq).max(0.0).sqrt();
    let plus = u0.iter().zip(&normal).map(|(a, b)| a + t * b).collect();
    let minus = u0.iter().zip(&normal).map(|(a, b)| a - t * b).collect();
    Some([plus, minus])
}

fn strict_score(y: &[Vec<f64>], u: &[f64], eps: f64) -> usize {
    let (mut inside, mut outside) = (0, 0);
    for p in y {
        let t = dot(p, u).abs();
        if t < 1.0 - eps {
            inside += 1;
        } else if t > 1.0 + eps {
            outside += 1;
        }
    }
    inside.min(outside)
}

/// Unpruned enumeration of tangent directions through every signed
/// collection of `1..d` standardized points; the minimum strict score.
///
/// When fewer than `d` points lie outside the unit ball the depth is zero
/// (they fit on a hyperplane through the origin) and nothing is enumerated.
pub fn enumerate_all_tangents(y: &[Vec<f64>], eps: f64) -> OracleReport {
    let n = y.len();
    let d = y.first().map_or(0, Vec::len);
    let mut report = OracleReport {
        depth: n / 2,
        directions_scored: 0,
        per_k_breakdown: vec![0; d.saturating_sub(1)],
    };
    let outside = y.iter().filter(|p| dot(p, p) > 1.0).count();
    if d < 2 || outside < d {
        report.depth = 0;
        return report;
    }
    let mut best = n;
    for k in 1..d {
        let mut combos = Combinations::new(k, 0, n);
        while let Some(idx) = combos.next_subset() {
            for mask in 0..1usize << (k - 1) {
                let z: Vec<Vec<f64>> = idx
                    .iter()
                    .enumerate()
                    .map(|(j, &i)| {
                        let flip = j > 0 && (mask >> (j - 1)) & 1 == 1;
                        y[i].iter().map(|v| if flip { -v } else { *v }).collect()
                    })
                    .collect();
                let Some(dirs) = tangent_directions(&z) else { continue };
                report.per_k_breakdown[k - 1] += 1;
                for u in &dirs {
                    report.directions_scored += 1;
                    best = best.min(strict_score(y, u, eps));
                }
            }
        }
    }
    report.depth = best;
    report
}

/// Minimum over `resolution` equally spaced angles in `[0, π)` of the
/// non-strict slab score, for bivariate standardized points.
pub fn grid_lower_scan_2d(y: &[Vec<f64>], resolution: usize) -> usize {
    assert!(resolution >= 4, "resolution must be at least 4");
    let mut best = y.len();
    for j in 0..resolution {
        let t = std::f64::consts::PI * j as f64 / resolution as f64;
        let u = [t.cos(), t.sin()];
        let (mut inside, mut outside) = (0, 0);
        for p in y {
            let s = (p[0] * u[0] + p[1] * u[1]).abs();
            if s <= 1.0 {
                inside += 1;
            }
            if s >= 1.0 {
                outside += 1;
            }
        }
        best = best.min(inside.min(outside));
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cross() -> Vec<Vec<f64>> {
        vec![vec![2.0, 0.0], vec![-2.0, 0.0], vec![0.0, 2.0], vec![0.0, -2.0]]
    }

    fn depth_one() -> Vec<Vec<f64>> {
        vec![vec![1.5, 0.0], vec![0.0, 1.5], vec![0.5, 0.0], vec![0.0, 0.5]]
    }

    #[test]
    fn analytic_instances() {
        assert_eq!(enumerate_all_tangents(&cross(), 1e-14).depth, 0);
        let r = enumerate_all_tangents(&depth_one(), 1e-14);
        assert_eq!(r.depth, 1);
        // two outside points, each with one feasible single-point collection
        assert_eq!(r.per_k_breakdown, vec![2]);
        assert_eq!(r.directions_scored, 4);
    }

    #[test]
    fn too_few_outside_points() {
        let y = vec![vec![3.0, 0.0, 0.0], vec![0.0, 2.0, 0.0], vec![0.1, 0.0, 0.0]];
        let r = enumerate_all_tangents(&y, 1e-14);
        assert_eq!(r.depth, 0);
        assert_eq!(r.directions_scored, 0);
        assert_eq!(r.per_k_breakdown, vec![0, 0]);
    }

    #[test]
    fn tangent_directions_satisfy_contracts() {
        let z = vec![vec![2.0, 0.0, 0.0], vec![0.0, 2.0, 0.0]];
        let [a, b] = tangent_directions(&z).unwrap();
        for u in [&a, &b] {
            assert!((dot(u, u) - 1.0).abs() < 1e-12);
            for zj in &z {
                assert!((dot(u, zj) - 1.0).abs() < 1e-12);
            }
        }
        assert!(tangent_directions(&[vec![2.0, 0.0, 0.0], vec![-2.0, 0.1, 0.0]]).is_none());
        assert!(tangent_directions(&[vec![0.5, 0.0, 0.0]]).is_none());
    }

    #[test]
    fn grid_scan_examples() {
        assert_eq!(grid_lower_scan_2d(&[vec![0.1, 0.2], vec![0.0, -0.3]], 16), 0);
        assert_eq!(grid_lower_scan_2d(&depth_one(), 10_000), 1);
        assert_eq!(grid_lower_scan_2d(&cross(), 10_000), 0);
    }
}
