//! Exact depth in any dimension `d ≥ 2` by enumerating maximal tangent
//! hyperplanes of the unit sphere.
//!
//! After standardization only points outside the unit ball can lie on a
//! tangent hyperplane. The engine first walks every `(d−1)`-tuple of outside
//! points with every sign pattern (first sign fixed to `+`). The affine hull
//! of the signed tuple is collapsed onto the 2-D orthogonal complement of its
//! direction space, where it becomes a single point `w`; the tuple lies on a
//! common tangent hyperplane iff `‖w‖ ≥ 1`, and then both tangent directions
//! are scored. Smaller collections (`k < d−1` points) are visited afterwards
//! in decreasing `k`, skipping those already covered by a larger maximal
//! collection, and contribute one direction each.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{DepthError, Result};
use crate::linalg::{dot, orth_complement, orth_complement_basis, tangent_pair_unchecked, Matrix, OrthoBasis2D};
use crate::sample::{DepthResult, SlabCounts, StandardizedSample};
use crate::visited::{Combinations, SignedIndex, VisitedStore};

/// Default strictness margin for slab comparisons at `1 ± eps`.
pub const DEFAULT_EPS: f64 = 1e-14;

/// Band around `‖w‖ = 1` treated as tangent rather than infeasible.
pub const TANGENCY_BAND: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct ExactOptions {
    pub eps: f64,
    /// Skip collections already covered by a larger maximal collection.
    pub dedupe: bool,
    /// Worker threads for the `(d−1)`-tuple sweep; `1` runs sequentially.
    pub threads: usize,
    pub deadline: Option<Instant>,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions { eps: DEFAULT_EPS, dedupe: true, threads: 1, deadline: None }
    }
}

/// Result of evaluating one signed collection of outside points.
#[derive(Debug, Clone, PartialEq)]
pub struct TupleBatchResult {
    pub feasible: bool,
    pub counts: Vec<SlabCounts>,
    pub directions_in_plane: Vec<[f64; 2]>,
    /// The scored directions lifted back to `R^d`.
    pub directions: Vec<Vec<f64>>,
}

impl TupleBatchResult {
    fn infeasible() -> Self {
        TupleBatchResult {
            feasible: false,
            counts: Vec::new(),
            directions_in_plane: Vec::new(),
            directions: Vec::new(),
        }
    }

    pub fn best_score(&self) -> Option<usize> {
        self.counts.iter().map(SlabCounts::score).min()
    }
}

/// Shared counting state: points deep inside the ball are inside every slab
/// and are counted once instead of per direction.
pub(crate) struct Scorer<'a> {
    sample: &'a StandardizedSample,
    eps: f64,
    candidates: Vec<usize>,
    deep_inside: usize,
}

impl<'a> Scorer<'a> {
    pub(crate) fn new(sample: &'a StandardizedSample, eps: f64) -> Self {
        let limit = (1.0 - eps) * (1.0 - eps);
        let mut candidates = Vec::new();
        let mut deep_inside = 0;
        for (i, p) in sample.points().enumerate() {
            if dot(p, p) < limit {
                deep_inside += 1;
            } else {
                candidates.push(i);
            }
        }
        Scorer { sample, eps, candidates, deep_inside }
    }

    #[inline]
    fn classify(&self, t: f64, counts: &mut SlabCounts, delta: isize) {
        if t < 1.0 - self.eps {
            counts.p_in = counts.p_in.wrapping_add_signed(delta);
        } else if t > 1.0 + self.eps {
            counts.p_out = counts.p_out.wrapping_add_signed(delta);
        }
    }

    /// Strict counts for lifted directions `dirs`; the tuple `members` lie on
    /// the slab boundary by construction and are counted in neither set.
    fn count<const K: usize>(&self, dirs: [&[f64]; K], members: &[usize]) -> [SlabCounts; K] {
        let mut counts = [SlabCounts { p_in: self.deep_inside, p_out: 0 }; K];
        for &i in &self.candidates {
            let y = self.sample.point(i);
            for (u, c) in dirs.iter().zip(counts.iter_mut()) {
                self.classify(dot(u, y).abs(), c, 1);
            }
        }
        for &i in members {
            let y = self.sample.point(i);
            for (u, c) in dirs.iter().zip(counts.iter_mut()) {
                self.classify(dot(u, y).abs(), c, -1);
            }
        }
        counts
    }

    fn signed_point(&self, s: SignedIndex) -> Vec<f64> {
        let idx = self.sample.outside_idx()[s.index];
        self.sample.point(idx).iter().map(|v| v * s.sign()).collect()
    }

    /// Evaluates one signed collection. `completion` must hold `d − 1 − k`
    /// vectors orthogonal to the signed points. Affinely degenerate
    /// collections fail with `RankDeficient`.
    pub(crate) fn evaluate(&self, signed: &[SignedIndex], completion: &[Vec<f64>]) -> Result<TupleBatchResult> {
        let d = self.sample.dim();
        let k = signed.len();
        if k == 0 || k + completion.len() != d - 1 {
            return Err(DepthError::InvalidArgument(format!(
                "{k} points and {} completion vectors do not span a {}-flat",
                completion.len(),
                d - 2
            )));
        }
        let z: Vec<Vec<f64>> = signed.iter().map(|&s| self.signed_point(s)).collect();
        let mut gens: Vec<Vec<f64>> = z[1..]
            .iter()
            .map(|zj| zj.iter().zip(&z[0]).map(|(a, b)| a - b).collect())
            .collect();
        gens.extend(completion.iter().cloned());
        let refs: Vec<&[f64]> = gens.iter().map(Vec::as_slice).collect();
        let basis = orth_complement_basis(&refs, d)?;

        let w = basis.project(&z[0]);
        let r2 = w[0] * w[0] + w[1] * w[1];
        let floor = 1.0 - TANGENCY_BAND;
        if r2 < floor * floor {
            return Ok(TupleBatchResult::infeasible());
        }
        let (v1, v2) = tangent_pair_unchecked(w, r2);
        let members: Vec<usize> = signed.iter().map(|s| self.sample.outside_idx()[s.index]).collect();
        if k + 1 == d {
            let (u1, u2) = (basis.lift(v1), basis.lift(v2));
            let [c1, c2] = self.count([&u1, &u2], &members);
            Ok(TupleBatchResult {
                feasible: true,
                counts: vec![c1, c2],
                directions_in_plane: vec![v1, v2],
                directions: vec![u1, u2],
            })
        } else {
            let u1 = basis.lift(v1);
            let [c1] = self.count([&u1], &members);
            Ok(TupleBatchResult {
                feasible: true,
                counts: vec![c1],
                directions_in_plane: vec![v1],
                directions: vec![u1],
            })
        }
    }
}

/// Evaluates the signed collection `signed_pts` of outside points (positions
/// in `sample.outside_idx()`), completed to a `(d−2)`-flat by `completion`.
///
/// Both tangent directions are scored when the collection has `d − 1` points,
/// one otherwise.
pub fn evaluate_tuple(
    sample: &StandardizedSample,
    signed_pts: &[SignedIndex],
    completion: &[Vec<f64>],
    eps: f64,
) -> Result<TupleBatchResult> {
    if let Some(bad) = signed_pts.iter().find(|s| s.index >= sample.outside_idx().len()) {
        return Err(DepthError::InvalidArgument(format!(
            "outside position {} out of range",
            bad.index
        )));
    }
    Scorer::new(sample, eps).evaluate(signed_pts, completion)
}

/// Completion vectors for a `k`-collection: the first `d − 1 − k` vectors of an
/// orthonormal basis of the complement of `span(z*_1..z*_k)`.
pub fn completion_vectors(points: &[Vec<f64>], d: usize) -> Result<Vec<Vec<f64>>> {
    let refs: Vec<&[f64]> = points.iter().map(Vec::as_slice).collect();
    let mut comp = orth_complement(&refs, d)?;
    comp.truncate((d - 1).saturating_sub(points.len()));
    Ok(comp)
}

/// Running minimum with the first direction that attained it.
#[derive(Debug, Clone)]
struct Best {
    depth: usize,
    witness: Option<Vec<f64>>,
    evaluations: u64,
}

impl Best {
    fn offer(&mut self, batch: &TupleBatchResult) {
        for (c, u) in batch.counts.iter().zip(&batch.directions) {
            self.evaluations += 1;
            if c.score() < self.depth {
                self.depth = c.score();
                self.witness = Some(u.clone());
            }
        }
    }
}

fn signed_from_mask(positions: &[usize], mask: usize, out: &mut Vec<SignedIndex>) {
    out.clear();
    out.extend(positions.iter().enumerate().map(|(j, &p)| SignedIndex {
        index: p,
        negated: j > 0 && (mask >> (j - 1)) & 1 == 1,
    }));
}

struct Sweep<'a> {
    scorer: Scorer<'a>,
    opts: &'a ExactOptions,
    m: usize,
    d: usize,
    stop: &'a AtomicBool,
}

impl Sweep<'_> {
    fn timed_out(&self) -> bool {
        self.opts.deadline.is_some_and(|t| Instant::now() >= t)
    }

    /// All `(d−1)`-tuples whose first outside position is `first`.
    fn full_tuples_from(&self, first: usize, store: &mut VisitedStore, best: &mut Best) -> Result<()> {
        let k = self.d - 1;
        let mut rest = Combinations::new(k - 1, first + 1, self.m);
        let mut positions = vec![first; k];
        let mut signed = Vec::with_capacity(k);
        let mut codes = Vec::with_capacity(k);
        let mut since_check = 0u32;
        while let Some(tail) = rest.next_subset() {
            positions[1..].copy_from_slice(tail);
            for mask in 0..1usize << (k - 1) {
                if self.stop.load(Ordering::Relaxed) {
                    return Ok(());
                }
                since_check += 1;
                if since_check >= 512 {
                    since_check = 0;
                    if self.timed_out() {
                        return Err(DepthError::DeadlineExceeded);
                    }
                }
                signed_from_mask(&positions, mask, &mut signed);
                let batch = match self.scorer.evaluate(&signed, &[]) {
                    Ok(b) => b,
                    Err(DepthError::RankDeficient { .. }) => continue,
                    Err(e) => return Err(e),
                };
                if !batch.feasible {
                    continue;
                }
                if self.opts.dedupe {
                    codes.clear();
                    codes.extend(signed.iter().map(|s| s.code(self.m)));
                    store.mark(&codes);
                }
                best.offer(&batch);
                if best.depth == 0 {
                    self.stop.store(true, Ordering::Relaxed);
                    return Ok(());
                }
            }
        }
        Ok(())
    }

    /// Unvisited collections of `k < d − 1` points, for `k = d−2, …, 1`.
    fn partial_collections(&self, store: &mut VisitedStore, best: &mut Best) -> Result<()> {
        let mut signed = Vec::with_capacity(self.d);
        let mut codes = Vec::with_capacity(self.d);
        let mut since_check = 0u32;
        for k in (1..self.d - 1).rev() {
            let mut combos = Combinations::new(k, 0, self.m);
            while let Some(positions) = combos.next_subset() {
                for mask in 0..1usize << (k - 1) {
                    since_check += 1;
                    if since_check >= 512 {
                        since_check = 0;
                        if self.timed_out() {
                            return Err(DepthError::DeadlineExceeded);
                        }
                    }
                    signed_from_mask(positions, mask, &mut signed);
                    codes.clear();
                    codes.extend(signed.iter().map(|s| s.code(self.m)));
                    if self.opts.dedupe && store.is_visited(&codes) {
                        continue;
                    }
                    let z: Vec<Vec<f64>> = signed.iter().map(|&s| self.scorer.signed_point(s)).collect();
                    let completion = match completion_vectors(&z, self.d) {
                        Ok(c) => c,
                        Err(DepthError::RankDeficient { .. }) => continue,
                        Err(e) => return Err(e),
                    };
                    let batch = match self.scorer.evaluate(&signed, &completion) {
                        Ok(b) => b,
                        Err(DepthError::RankDeficient { .. }) => continue,
                        Err(e) => return Err(e),
                    };
                    if !batch.feasible {
                        continue;
                    }
                    if self.opts.dedupe {
                        store.mark(&codes);
                    }
                    best.offer(&batch);
                    if best.depth == 0 {
                        return Ok(());
                    }
                }
            }
        }
        Ok(())
    }
}

/// Exact depth of `(Σ, μ)` with respect to `x` in any dimension `d ≥ 2`.
pub fn exact_depth_nd(x: &[Vec<f64>], mu: &[f64], sigma: &Matrix, opts: &ExactOptions) -> Result<DepthResult> {
    let sample = StandardizedSample::new(x, mu, sigma)?;
    exact_depth_nd_standardized(&sample, opts)
}

/// [`exact_depth_nd`] on an already standardized sample.
pub fn exact_depth_nd_standardized(sample: &StandardizedSample, opts: &ExactOptions) -> Result<DepthResult> {
    let d = sample.dim();
    if d < 2 {
        return Err(DepthError::InvalidArgument(format!("dimension {d} < 2")));
    }
    let n = sample.len();
    let m = sample.outside_idx().len();
    if m < d {
        return Ok(DepthResult::zero());
    }

    let stop = AtomicBool::new(false);
    let sweep = Sweep {
        scorer: Scorer::new(sample, opts.eps),
        opts,
        m,
        d,
        stop: &stop,
    };

    let firsts = 0..=m - (d - 1);
    let (mut store, mut best) = if opts.threads <= 1 {
        let mut store = VisitedStore::new(m, d);
        let mut best = Best { depth: n, witness: None, evaluations: 0 };
        for first in firsts {
            sweep.full_tuples_from(first, &mut store, &mut best)?;
            if best.depth == 0 {
                break;
            }
        }
        (store, best)
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .map_err(|e| DepthError::InvalidArgument(format!("thread pool: {e}")))?;
        let parts: Vec<Result<(VisitedStore, Best)>> = pool.install(|| {
            firsts
                .into_par_iter()
                .map(|first| {
                    let mut store = VisitedStore::new(m, d);
                    let mut best = Best { depth: n, witness: None, evaluations: 0 };
                    sweep.full_tuples_from(first, &mut store, &mut best)?;
                    Ok((store, best))
                })
                .collect()
        });
        let mut store = VisitedStore::new(m, d);
        let mut best = Best { depth: n, witness: None, evaluations: 0 };
        for part in parts {
            let (s, b) = part?;
            store.merge(s);
            best.evaluations += b.evaluations;
            if b.depth < best.depth {
                best.depth = b.depth;
                best.witness = b.witness;
            }
        }
        (store, best)
    };

    if best.depth > 0 && d > 2 {
        sweep.partial_collections(&mut store, &mut best)?;
    }
    Ok(DepthResult { depth: best.depth, witness: best.witness, evaluations: best.evaluations })
}

/// Orthonormal basis used by [`evaluate_tuple`] for a signed collection;
/// exposed for diagnostics and tests.
pub fn tuple_plane(
    sample: &StandardizedSample,
    signed_pts: &[SignedIndex],
    completion: &[Vec<f64>],
) -> Result<(OrthoBasis2D, [f64; 2])> {
    let d = sample.dim();
    let scorer = Scorer::new(sample, DEFAULT_EPS);
    let z: Vec<Vec<f64>> = signed_pts.iter().map(|&s| scorer.signed_point(s)).collect();
    let first = z.first().ok_or_else(|| DepthError::InvalidArgument("empty collection".into()))?;
    let mut gens: Vec<Vec<f64>> =
        z[1..].iter().map(|zj| zj.iter().zip(first).map(|(a, b)| a - b).collect()).collect();
    gens.extend(completion.iter().cloned());
    let refs: Vec<&[f64]> = gens.iter().map(Vec::as_slice).collect();
    let basis = orth_complement_basis(&refs, d)?;
    let w = basis.project(first);
    Ok((basis, w))
}
