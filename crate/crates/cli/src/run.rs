use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use scatter_depth::{
    approx_depth_standardized, enumerate_all_tangents, exact_depth_2d_standardized, exact_depth_nd_standardized,
    ApproxConfig, ApproxMethod, DepthResult, ExactOptions, Matrix, StandardizedSample, DEFAULT_EPS,
};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::io::{parse_inline_matrix, parse_inline_vector, read_dataset, read_matrix, read_vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Exact2d,
    Rdirections,
    Rpoints,
    Oracle,
}

impl Method {
    pub fn is_approx(self) -> bool {
        matches!(self, Method::Rdirections | Method::Rpoints)
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Method::Exact | Method::Exact2d | Method::Oracle)
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Exact2d => "exact2d",
            Method::Rdirections => "rdirections",
            Method::Rpoints => "rpoints",
            Method::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Ok(match s.trim() {
            "exact" => Method::Exact,
            "exact2d" => Method::Exact2d,
            "rdirections" => Method::Rdirections,
            "rpoints" => Method::Rpoints,
            "oracle" => Method::Oracle,
            other => {
                return Err(CliError::Validation(format!(
                    "unknown method `{other}` (expected exact, exact2d, rdirections, rpoints or oracle)"
                )))
            }
        })
    }
}

/// Where the centre comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum MuSpec {
    Zero,
    Mean,
    Inline(Vec<f64>),
    File(PathBuf),
}

/// Where the scatter matrix comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum SigmaSpec {
    Identity,
    Inline(Matrix),
    File(PathBuf),
}

impl MuSpec {
    /// `zero`, `mean`, an existing file, or an inline vector.
    pub fn parse(spec: &str) -> CliResult<Self> {
        match spec.trim() {
            "zero" => Ok(MuSpec::Zero),
            "mean" => Ok(MuSpec::Mean),
            s if Path::new(s).is_file() => Ok(MuSpec::File(PathBuf::from(s))),
            s => parse_inline_vector(s).map(MuSpec::Inline),
        }
    }

    fn resolve(&self, x: &[Vec<f64>]) -> CliResult<Vec<f64>> {
        let d = x[0].len();
        let mu = match self {
            MuSpec::Zero => vec![0.0; d],
            MuSpec::Mean => {
                let mut m = vec![0.0; d];
                for row in x {
                    for (a, v) in m.iter_mut().zip(row) {
                        *a += v / x.len() as f64;
                    }
                }
                m
            }
            MuSpec::Inline(v) => v.clone(),
            MuSpec::File(p) => read_vector(p)?,
        };
        if mu.len() != d {
            return Err(CliError::Validation(format!("centre has {} entries, data has {d} columns", mu.len())));
        }
        Ok(mu)
    }
}

impl SigmaSpec {
    /// `identity`, an existing file, or an inline matrix.
    pub fn parse(spec: &str) -> CliResult<Self> {
        match spec.trim() {
            "identity" => Ok(SigmaSpec::Identity),
            s if Path::new(s).is_file() => Ok(SigmaSpec::File(PathBuf::from(s))),
            s => parse_inline_matrix(s).map(SigmaSpec::Inline),
        }
    }

    fn resolve(&self, d: usize) -> CliResult<Matrix> {
        let m = match self {
            SigmaSpec::Identity => Matrix::identity(d),
            SigmaSpec::Inline(m) => m.clone(),
            SigmaSpec::File(p) => read_matrix(p)?,
        };
        if m.rows() != d || m.cols() != d {
            return Err(CliError::Validation(format!(
                "scatter matrix is {}x{}, data has {d} columns",
                m.rows(),
                m.cols()
            )));
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Plain,
    Json,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub data_path: PathBuf,
    pub mu: MuSpec,
    pub sigma: SigmaSpec,
    pub method: Method,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub eps: f64,
    pub threads: usize,
    pub output: OutputFormat,
}

impl RunConfig {
    pub fn new(data_path: impl Into<PathBuf>, method: Method) -> Self {
        RunConfig {
            data_path: data_path.into(),
            mu: MuSpec::Zero,
            sigma: SigmaSpec::Identity,
            method,
            samples: None,
            seed: None,
            eps: DEFAULT_EPS,
            threads: 1,
            output: OutputFormat::Plain,
        }
    }

    /// Checks everything that does not need the data.
    pub fn validate(&self) -> CliResult<()> {
        if self.method.is_approx() {
            match self.samples {
                None => return Err(CliError::Validation(format!("method {} requires --N", self.method))),
                Some(0) => return Err(CliError::Validation("--N must be at least 1".into())),
                Some(_) => {}
            }
            if self.seed.is_none() {
                return Err(CliError::Validation(format!("method {} requires --seed", self.method)));
            }
        }
        if !(self.eps.is_finite() && self.eps >= 0.0 && self.eps < 0.5) {
            return Err(CliError::Validation(format!("--eps must lie in [0, 0.5), got {}", self.eps)));
        }
        if self.threads == 0 {
            return Err(CliError::Validation("--threads must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunOutput {
    pub depth: usize,
    pub depth_normalized: f64,
    pub method: Method,
    pub n: usize,
    pub d: usize,
    pub elapsed_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    pub evaluations: u64,
}

impl RunOutput {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain struct serializes")
    }

    pub fn to_plain(&self) -> String {
        format!(
            "sHD = {} ({}/{})\ntime: {:.6} s, method {}, {} directions scored\n",
            self.depth, self.depth, self.n, self.elapsed_s, self.method, self.evaluations
        )
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Plain => self.to_plain(),
            OutputFormat::Json => self.to_json() + "\n",
        }
    }
}

/// Runs one method on an already standardized sample.
pub fn compute(
    sample: &StandardizedSample,
    method: Method,
    samples: Option<usize>,
    seed: Option<u64>,
    eps: f64,
    threads: usize,
    deadline: Option<Instant>,
) -> CliResult<DepthResult> {
    let result = match method {
        Method::Exact => {
            let opts = ExactOptions { eps, threads, deadline, ..ExactOptions::default() };
            exact_depth_nd_standardized(sample, &opts)?
        }
        Method::Exact2d => {
            if sample.dim() != 2 {
                return Err(CliError::Validation(format!("exact2d needs 2 columns, data has {}", sample.dim())));
            }
            exact_depth_2d_standardized(sample)?
        }
        Method::Rdirections | Method::Rpoints => {
            let kind = if method == Method::Rpoints { ApproxMethod::RPoints } else { ApproxMethod::RDirections };
            let cfg = ApproxConfig {
                method: kind,
                samples: samples.ok_or_else(|| CliError::Validation(format!("method {method} requires N")))?,
                seed: seed.ok_or_else(|| CliError::Validation(format!("method {method} requires a seed")))?,
                eps,
                threads,
            };
            approx_depth_standardized(sample, &cfg)?
        }
        Method::Oracle => {
            let report = enumerate_all_tangents(&sample.to_vecs(), eps);
            DepthResult { depth: report.depth, witness: None, evaluations: report.directions_scored }
        }
    };
    Ok(result)
}

/// Loads the inputs named by `config` and computes the depth.
pub fn run(config: &RunConfig) -> CliResult<RunOutput> {
    config.validate()?;
    let x = read_dataset(&config.data_path)?;
    let d = x[0].len();
    if d < 2 && config.method != Method::Rdirections {
        return Err(CliError::Validation(format!("method {} needs at least 2 columns", config.method)));
    }
    if config.method == Method::Exact2d && d != 2 {
        return Err(CliError::Validation(format!("exact2d needs 2 columns, data has {d}")));
    }
    let mu = config.mu.resolve(&x)?;
    let sigma = config.sigma.resolve(d)?;

    let start = Instant::now();
    let sample = StandardizedSample::new(&x, &mu, &sigma)?;
    let result = compute(&sample, config.method, config.samples, config.seed, config.eps, config.threads, None)?;
    let elapsed_s = start.elapsed().as_secs_f64();

    let approx = config.method.is_approx();
    Ok(RunOutput {
        depth: result.depth,
        depth_normalized: result.depth as f64 / x.len() as f64,
        method: config.method,
        n: x.len(),
        d,
        elapsed_s,
        seed: config.seed.filter(|_| approx),
        samples: config.samples.filter(|_| approx),
        evaluations: result.evaluations,
    })
}
