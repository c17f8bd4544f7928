//! Randomized upper bounds on the depth.
//!
//! `rdirections` scores uniformly random directions with non-strict counts.
//! `rpoints` draws random signed `(d−1)`-tuples of outside points and scores
//! the two tangent directions through each feasible one, exactly as the exact
//! engine does for the tuples it enumerates; smaller collections are skipped.
//!
//! Both use ChaCha8 seeded from a `u64`. The sequential mode consumes a single
//! stream (stream id 0), so a run with `N` samples scores a prefix of the
//! directions of any run with more samples. With `threads > 1`, worker `w`
//! draws its share of the `N` samples from stream id `w + 1` of the same seed.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{DepthError, Result};
use crate::exactnd::{Scorer, DEFAULT_EPS};
use crate::linalg::{dot, Matrix};
use crate::sample::{DepthResult, StandardizedSample};
use crate::visited::SignedIndex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApproxMethod {
    RDirections,
    RPoints,
}

impl fmt::Display for ApproxMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ApproxMethod::RDirections => "rdirections",
            ApproxMethod::RPoints => "rpoints",
        })
    }
}

impl FromStr for ApproxMethod {
    type Err = DepthError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rdirections" => Ok(ApproxMethod::RDirections),
            "rpoints" => Ok(ApproxMethod::RPoints),
            other => Err(DepthError::InvalidArgument(format!("unknown approximation `{other}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ApproxConfig {
    pub method: ApproxMethod,
    /// Number of sampled directions (rdirections) or signed tuples (rpoints).
    pub samples: usize,
    pub seed: u64,
    /// Strictness margin, used by rpoints only.
    pub eps: f64,
    pub threads: usize,
}

impl ApproxConfig {
    pub fn new(method: ApproxMethod, samples: usize, seed: u64) -> Self {
        ApproxConfig { method, samples, seed, eps: DEFAULT_EPS, threads: 1 }
    }

    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(DepthError::InvalidArgument("sample count N must be at least 1".into()));
        }
        Ok(())
    }
}

/// Uniform direction on the unit sphere of `R^d` (normalized Gaussian).
pub fn sample_uniform_direction<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let n = dot(&v, &v).sqrt();
        if n > 0.0 && n.is_finite() {
            for x in v.iter_mut() {
                *x /= n;
            }
            return v;
        }
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Splits `total` samples over the workers and runs `job(rng, share)` on each,
/// keeping the smallest result.
fn run_split<F>(cfg: &ApproxConfig, job: F) -> Result<DepthResult>
where
    F: Fn(&mut ChaCha8Rng, usize) -> DepthResult + Sync,
{
    if cfg.threads <= 1 {
        return Ok(job(&mut stream_rng(cfg.seed, 0), cfg.samples));
    }
    let workers = cfg.threads.min(cfg.samples);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| DepthError::InvalidArgument(format!("thread pool: {e}")))?;
    let parts: Vec<DepthResult> = pool.install(|| {
        (0..workers)
            .into_par_iter()
            .map(|w| {
                let share = cfg.samples / workers + usize::from(w < cfg.samples % workers);
                job(&mut stream_rng(cfg.seed, w as u64 + 1), share)
            })
            .collect()
    });
    let evaluations = parts.iter().map(|p| p.evaluations).sum();
    let mut best = parts
        .into_iter()
        .min_by_key(|p| p.depth)
        .expect("at least one worker");
    best.evaluations = evaluations;
    Ok(best)
}

/// Random-direction approximation with non-strict counts.
pub fn approx_rdirections(x: &[Vec<f64>], mu: &[f64], sigma: &Matrix, cfg: &ApproxConfig) -> Result<DepthResult> {
    approx_rdirections_standardized(&StandardizedSample::new(x, mu, sigma)?, cfg)
}

pub fn approx_rdirections_standardized(sample: &StandardizedSample, cfg: &ApproxConfig) -> Result<DepthResult> {
    cfg.validate()?;
    let n = sample.len();
    let d = sample.dim();
    // points well inside the ball never reach |uᵀy| ≥ 1
    let mut always_in = 0;
    let mut candidates = Vec::new();
    for (i, p) in sample.points().enumerate() {
        if dot(p, p) < 1.0 - 1e-12 {
            always_in += 1;
        } else {
            candidates.push(i);
        }
    }
    run_split(cfg, |rng, share| {
        let mut best = DepthResult { depth: n, witness: None, evaluations: 0 };
        for _ in 0..share {
            let u = sample_uniform_direction(rng, d);
            let (mut p_in, mut p_out) = (always_in, 0usize);
            for &i in &candidates {
                let t = dot(&u, sample.point(i)).abs();
                if t <= 1.0 {
                    p_in += 1;
                }
                if t >= 1.0 {
                    p_out += 1;
                }
            }
            best.evaluations += 1;
            let score = p_in.min(p_out);
            if score < best.depth {
                best.depth = score;
                best.witness = Some(u);
                if score == 0 {
                    break;
                }
            }
        }
        best
    })
}

/// Random-tuple approximation: the `(d−1)`-tuple stage of the exact engine
/// restricted to `N` random signed tuples drawn with replacement.
pub fn approx_rpoints(x: &[Vec<f64>], mu: &[f64], sigma: &Matrix, cfg: &ApproxConfig) -> Result<DepthResult> {
    approx_rpoints_standardized(&StandardizedSample::new(x, mu, sigma)?, cfg)
}

pub fn approx_rpoints_standardized(sample: &StandardizedSample, cfg: &ApproxConfig) -> Result<DepthResult> {
    cfg.validate()?;
    let n = sample.len();
    let d = sample.dim();
    let m = sample.outside_idx().len();
    if d < 2 {
        return Err(DepthError::InvalidArgument(format!("dimension {d} < 2")));
    }
    if m < d {
        return Ok(DepthResult::zero());
    }
    let scorer = Scorer::new(sample, cfg.eps);
    let k = d - 1;
    let outcome = std::sync::Mutex::new(None::<DepthError>);
    let result = run_split(cfg, |rng, share| {
        let mut best = DepthResult { depth: n, witness: None, evaluations: 0 };
        let mut signed: Vec<SignedIndex> = Vec::with_capacity(k);
        for _ in 0..share {
            let mut positions = index::sample(rng, m, k).into_vec();
            positions.sort_unstable();
            signed.clear();
            for (j, &p) in positions.iter().enumerate() {
                let negated = j > 0 && rng.random::<bool>();
                signed.push(SignedIndex { index: p, negated });
            }
            let batch = match scorer.evaluate(&signed, &[]) {
                Ok(b) => b,
                Err(DepthError::RankDeficient { .. }) => continue,
                Err(e) => {
                    *outcome.lock().expect("poisoned") = Some(e);
                    break;
                }
            };
            for (c, u) in batch.counts.iter().zip(batch.directions) {
                best.evaluations += 1;
                if c.score() < best.depth {
                    best.depth = c.score();
                    best.witness = Some(u);
                }
            }
            if best.depth == 0 {
                break;
            }
        }
        best
    })?;
    match outcome.into_inner().expect("poisoned") {
        Some(e) => Err(e),
        None => Ok(result),
    }
}

/// Dispatches on `cfg.method`.
pub fn approx_depth(x: &[Vec<f64>], mu: &[f64], sigma: &Matrix, cfg: &ApproxConfig) -> Result<DepthResult> {
    let sample = StandardizedSample::new(x, mu, sigma)?;
    approx_depth_standardized(&sample, cfg)
}

pub fn approx_depth_standardized(sample: &StandardizedSample, cfg: &ApproxConfig) -> Result<DepthResult> {
    match cfg.method {
        ApproxMethod::RDirections => approx_rdirections_standardized(sample, cfg),
        ApproxMethod::RPoints => approx_rpoints_standardized(sample, cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact2d::exact_depth_2d;
    use crate::exactnd::{exact_depth_nd, ExactOptions};

    fn gaussian(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<Vec<f64>> {
        (0..n).map(|_| (0..d).map(|_| rng.sample(StandardNormal)).collect()).collect()
    }

    #[test]
    fn directions_are_unit_and_centred() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in 1..6 {
            for _ in 0..100 {
                let v = sample_uniform_direction(&mut rng, d);
                assert!((dot(&v, &v).sqrt() - 1.0).abs() < 1e-12);
            }
        }
        let mut plus = 0;
        for _ in 0..10_000 {
            let v = sample_uniform_direction(&mut rng, 1);
            assert!(v[0] == 1.0 || v[0] == -1.0);
            plus += usize::from(v[0] > 0.0);
        }
        // binomial(10⁴, ½) has sd 50
        assert!((plus as i64 - 5000).abs() < 250);

        let draws = 100_000;
        let mut mean = [0.0; 3];
        for _ in 0..draws {
            let v = sample_uniform_direction(&mut rng, 3);
            for k in 0..3 {
                mean[k] += v[k] / draws as f64;
            }
        }
        // each coordinate has variance 1/3, so the standard error is ≈ 0.0018
        for m in mean {
            assert!(m.abs() < 0.02, "{mean:?}");
        }
    }

    #[test]
    fn all_inside_gives_zero() {
        let pts: Vec<Vec<f64>> = (0..6).map(|i| vec![0.1 * i as f64, 0.0, 0.05]).collect();
        for method in [ApproxMethod::RDirections, ApproxMethod::RPoints] {
            for n in [1, 10, 1000] {
                let r = approx_depth(&pts, &[0.0; 3], &Matrix::identity(3), &ApproxConfig::new(method, n, 4))
                    .unwrap();
                assert_eq!(r.depth, 0);
            }
        }
    }

    #[test]
    fn zero_samples_is_invalid() {
        let pts = vec![vec![2.0, 0.0]];
        let cfg = ApproxConfig::new(ApproxMethod::RDirections, 0, 1);
        assert!(approx_depth(&pts, &[0.0; 2], &Matrix::identity(2), &cfg).is_err());
    }

    #[test]
    fn runs_are_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let pts = gaussian(&mut rng, 50, 3);
        for method in [ApproxMethod::RDirections, ApproxMethod::RPoints] {
            let cfg = ApproxConfig::new(method, 2000, 77);
            let a = approx_depth(&pts, &[0.0; 3], &Matrix::identity(3), &cfg).unwrap();
            let b = approx_depth(&pts, &[0.0; 3], &Matrix::identity(3), &cfg).unwrap();
            assert_eq!(a, b);
            let par = ApproxConfig { threads: 3, ..cfg.clone() };
            let c = approx_depth(&pts, &[0.0; 3], &Matrix::identity(3), &par).unwrap();
            let e = approx_depth(&pts, &[0.0; 3], &Matrix::identity(3), &par).unwrap();
            assert_eq!(c.depth, e.depth);
        }
    }

    #[test]
    fn depth_one_dataset_with_random_directions() {
        let pts = vec![vec![1.5, 0.0], vec![0.0, 1.5], vec![0.5, 0.0], vec![0.0, 0.5]];
        let mut ones = 0;
        for seed in 0..50 {
            let cfg = ApproxConfig::new(ApproxMethod::RDirections, 10_000, seed);
            let r = approx_depth(&pts, &[0.0; 2], &Matrix::identity(2), &cfg).unwrap();
            assert!(r.depth >= 1);
            ones += usize::from(r.depth == 1);
        }
        assert!(ones >= 45, "{ones}");
    }

    #[test]
    fn few_outside_points_short_circuit_rpoints() {
        let pts = vec![vec![3.0, 0.0, 0.0], vec![0.0, 3.0, 0.0], vec![0.1, 0.1, 0.1]];
        let cfg = ApproxConfig::new(ApproxMethod::RPoints, 100, 1);
        assert_eq!(approx_depth(&pts, &[0.0; 3], &Matrix::identity(3), &cfg).unwrap(), DepthResult::zero());
    }

    #[test]
    fn exhaustive_rpoints_is_exact_in_2d() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for trial in 0..50 {
            let n = 8 + trial % 57;
            let pts = gaussian(&mut rng, n, 2);
            let exact = exact_depth_2d(&pts, &[0.0; 2], &Matrix::identity(2)).unwrap();
            let m = StandardizedSample::from_points(&pts).unwrap().outside_idx().len();
            let cfg = ApproxConfig::new(ApproxMethod::RPoints, 50 * m.max(1), trial as u64);
            let approx = approx_depth(&pts, &[0.0; 2], &Matrix::identity(2), &cfg).unwrap();
            assert_eq!(approx.depth, exact.depth, "trial {trial}");
        }
    }

    #[test]
    fn approximations_bound_exact_from_above_and_shrink_with_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for trial in 0..20 {
            let d = 2 + trial % 3;
            let pts = gaussian(&mut rng, 20, d);
            let mu = vec![0.0; d];
            let sigma = Matrix::identity(d);
            let exact = exact_depth_nd(&pts, &mu, &sigma, &ExactOptions::default()).unwrap().depth;
            for method in [ApproxMethod::RDirections, ApproxMethod::RPoints] {
                let mut prev = usize::MAX;
                for n in [1, 10, 100, 1000] {
                    let r = approx_depth(&pts, &mu, &sigma, &ApproxConfig::new(method, n, trial as u64)).unwrap();
                    assert!(r.depth >= exact);
                    assert!(r.depth <= prev);
                    prev = r.depth;
                }
            }
        }
    }
}
