//! Exact depth for bivariate data by an angular sweep.
//!
//! Every outside point `y` with `‖y‖ = r > 1` touches the unit circle along
//! the directions at angle `φ ± acos(1/r)` (its circle) and their antipodes
//! (its anti-circle). Folding angles modulo `π` merges each circle with its
//! anti-circle, so the half-turn `[0, π)` is cut into arcs on which the strict
//! slab counts are constant. Evaluating one midpoint per arc is exact and needs
//! no perturbation constant. Between consecutive midpoints only the points
//! owning the crossed boundary angle change side, so the sweep updates the
//! counts incrementally.

use std::f64::consts::PI;

use crate::error::Result;
use crate::linalg::Matrix;
use crate::sample::{DepthResult, StandardizedSample};

/// Boundary angles closer than this are merged.
pub const ANGLE_MERGE_TOL: f64 = 1e-12;

#[inline]
fn fold(theta: f64) -> f64 {
    let t = theta.rem_euclid(PI);
    if t >= PI {
        0.0
    } else {
        t
    }
}

/// Distance between two angles on the circle of circumference `π`.
#[inline]
fn folded_distance(a: f64, b: f64) -> f64 {
    let t = (a - b).rem_euclid(PI);
    t.min(PI - t)
}

struct Boundary {
    angle: f64,
    point: usize,
}

/// Arc of an outside point: centre angle and half-width, both folded into `[0, π)`.
#[derive(Clone, Copy)]
struct OutsideArc {
    centre: f64,
    half_width: f64,
}

fn outside_arcs(sample: &StandardizedSample) -> Vec<OutsideArc> {
    sample
        .outside_idx()
        .iter()
        .map(|&i| {
            let y = sample.point(i);
            let r = y[0].hypot(y[1]);
            OutsideArc { centre: fold(y[1].atan2(y[0])), half_width: (1.0 / r).acos() }
        })
        .collect()
}

fn boundaries(arcs: &[OutsideArc]) -> Vec<Boundary> {
    let mut out: Vec<Boundary> = arcs
        .iter()
        .enumerate()
        .flat_map(|(k, a)| {
            [
                Boundary { angle: fold(a.centre - a.half_width), point: k },
                Boundary { angle: fold(a.centre + a.half_width), point: k },
            ]
        })
        .collect();
    out.sort_by(|a, b| a.angle.total_cmp(&b.angle));
    out
}

/// Groups sorted boundaries whose angles agree within [`ANGLE_MERGE_TOL`].
/// Returns the representative angle and the owning points of each group.
fn group_boundaries(sorted: &[Boundary]) -> Vec<(f64, Vec<usize>)> {
    let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
    let mut prev = f64::NEG_INFINITY;
    for b in sorted {
        match groups.last_mut() {
            Some((_, members)) if b.angle - prev <= ANGLE_MERGE_TOL => members.push(b.point),
            _ => groups.push((b.angle, vec![b.point])),
        }
        prev = b.angle;
    }
    // the first and last groups may be neighbours across the fold at π
    if groups.len() > 1 && groups[0].0 + PI - prev <= ANGLE_MERGE_TOL {
        let (_, tail) = groups.pop().expect("len > 1");
        groups[0].1.extend(tail);
    }
    groups
}

/// Folded contact angles of the circles and anti-circles of all outside
/// points, sorted ascending with near-duplicates merged.
pub fn circle_angles_2d(sample: &StandardizedSample) -> Vec<f64> {
    assert_eq!(sample.dim(), 2, "circle_angles_2d needs bivariate data");
    let sorted = boundaries(&outside_arcs(sample));
    let mut angles: Vec<f64> = Vec::with_capacity(sorted.len());
    for b in &sorted {
        match angles.last() {
            Some(&last) if b.angle - last <= ANGLE_MERGE_TOL => {}
            _ => angles.push(b.angle),
        }
    }
    if angles.len() > 1 && angles[0] + PI - angles[angles.len() - 1] <= ANGLE_MERGE_TOL {
        angles.pop();
    }
    angles
}

/// Exact depth of `(Σ, μ)` for bivariate observations `x`.
pub fn exact_depth_2d(x: &[Vec<f64>], mu: &[f64], sigma: &Matrix) -> Result<DepthResult> {
    let sample = StandardizedSample::new(x, mu, sigma)?;
    exact_depth_2d_standardized(&sample)
}

/// [`exact_depth_2d`] on an already standardized sample.
pub fn exact_depth_2d_standardized(sample: &StandardizedSample) -> Result<DepthResult> {
    if sample.dim() != 2 {
        return Err(crate::DepthError::DimensionMismatch { expected: 2, found: sample.dim() });
    }
    let n = sample.len();
    let m = sample.outside_idx().len();
    if m <= 1 {
        return Ok(DepthResult::zero());
    }

    let arcs = outside_arcs(sample);
    let sorted = boundaries(&arcs);
    let groups = group_boundaries(&sorted);

    let is_out = |arc: &OutsideArc, t: f64| folded_distance(t, arc.centre) < arc.half_width;
    let mut best = DepthResult { depth: n, witness: None, evaluations: 0 };
    let consider = |t: f64, p_out: usize, best: &mut DepthResult| {
        best.evaluations += 1;
        let score = p_out.min(n - p_out);
        if score < best.depth {
            best.depth = score;
            best.witness = Some(vec![t.cos(), t.sin()]);
        }
    };

    if groups.len() == 1 {
        let theta = groups[0].0;
        for t in [0.5 * theta, 0.5 * (theta + PI)] {
            let p_out = arcs.iter().filter(|a| is_out(a, t)).count();
            consider(t, p_out, &mut best);
        }
        return Ok(best);
    }

    let g = groups.len();
    let midpoint = |k: usize| {
        if k + 1 < g {
            0.5 * (groups[k].0 + groups[k + 1].0)
        } else {
            fold(0.5 * (groups[k].0 + groups[0].0 + PI))
        }
    };

    let t0 = midpoint(0);
    let mut state: Vec<bool> = arcs.iter().map(|a| is_out(a, t0)).collect();
    let mut p_out = state.iter().filter(|&&s| s).count();
    consider(t0, p_out, &mut best);

    for k in 1..g {
        if best.depth == 0 {
            break;
        }
        for &point in &groups[k].1 {
            let s = &mut state[point];
            *s = !*s;
            if *s {
                p_out += 1;
            } else {
                p_out -= 1;
            }
        }
        consider(midpoint(k), p_out, &mut best);
    }
    Ok(best)
}
