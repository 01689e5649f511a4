//! Problem specifications and their instances.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use adanag_core::objective::{
    logistic_fixture, random_quadratic, synthetic_least_squares, LeastSquares, Logistic, Matrix, Objective,
};

use crate::error::{BenchError, Result};
use crate::libsvm::{normalize_labels, read_libsvm, Dataset};

/// Regularization γ of the logistic problem, absolute or relative to the
/// data smoothness ¼λ_max(AᵀA).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaRule {
    Value(f64),
    /// γ = L/m.
    LOverM,
    /// γ = L/(10m).
    LOverTenM,
}

impl GammaRule {
    pub fn parse(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        match compact.as_str() {
            "L/m" => Ok(GammaRule::LOverM),
            "L/(10m)" | "L/10m" => Ok(GammaRule::LOverTenM),
            v => match v.parse::<f64>() {
                Ok(g) if g >= 0.0 && g.is_finite() => Ok(GammaRule::Value(g)),
                _ => Err(BenchError::Config(format!("gamma rule {s:?} is not L/m, L/(10m) or a nonnegative number"))),
            },
        }
    }

    /// γ for a data smoothness `l` and `m` rows.
    pub fn resolve(&self, l: f64, m: usize) -> f64 {
        match self {
            GammaRule::Value(g) => *g,
            GammaRule::LOverM => l / m as f64,
            GammaRule::LOverTenM => l / (10.0 * m as f64),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSpec {
    /// Random d-dimensional quadratic with minimizer 0.
    Quadratic {
        d: usize,
    },
    /// Synthetic least squares with b = Ax⋆.
    LeastSquares {
        m: usize,
        n: usize,
    },
    /// Least squares on a LIBSVM file, labels as b.
    LeastSquaresFile {
        path: PathBuf,
    },
    Logistic {
        path: PathBuf,
        gamma: GammaRule,
    },
    /// The 2×2 fixture with known optimum.
    LogisticFixture {
        gamma: f64,
    },
}

fn fields(rest: &str) -> Result<BTreeMap<&str, &str>> {
    rest.split(',')
        .filter(|f| !f.trim().is_empty())
        .map(|f| {
            f.split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| BenchError::Config(format!("problem field {f:?} is not key=value")))
        })
        .collect()
}

fn take<T: std::str::FromStr>(map: &mut BTreeMap<&str, &str>, key: &str, default: Option<T>) -> Result<T> {
    match map.remove(key) {
        Some(v) => v.parse().map_err(|_| BenchError::Config(format!("problem field {key} = {v:?} is malformed"))),
        None => default.ok_or_else(|| BenchError::Config(format!("problem field {key} is required"))),
    }
}

impl ProblemSpec {
    /// Parses `kind[:key=value,...]`, e.g. `least-squares:m=100,n=400` or
    /// `logistic:path=mushrooms,gamma=L/m`.
    pub fn parse(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut f = fields(rest)?;
        let spec = match kind.trim() {
            "quadratic" => ProblemSpec::Quadratic { d: take(&mut f, "d", Some(5))? },
            "least-squares" | "ls" => match f.remove("path") {
                Some(p) => ProblemSpec::LeastSquaresFile { path: p.into() },
                None => {
                    ProblemSpec::LeastSquares { m: take(&mut f, "m", Some(100))?, n: take(&mut f, "n", Some(400))? }
                }
            },
            "logistic" => {
                let path: PathBuf = take::<String>(&mut f, "path", None)?.into();
                let gamma = GammaRule::parse(f.remove("gamma").unwrap_or("L/m"))?;
                ProblemSpec::Logistic { path, gamma }
            }
            "logistic-fixture" => ProblemSpec::LogisticFixture { gamma: take(&mut f, "gamma", Some(0.1))? },
            other => {
                return Err(BenchError::Config(format!(
                    "unknown problem {other:?}; expected quadratic, least-squares, logistic or logistic-fixture"
                )))
            }
        };
        if let Some(k) = f.keys().next() {
            return Err(BenchError::Config(format!("problem field {k} does not apply to {}", kind.trim())));
        }
        if matches!(
            spec,
            ProblemSpec::Quadratic { d: 0 }
                | ProblemSpec::LeastSquares { m: 0, .. }
                | ProblemSpec::LeastSquares { n: 0, .. }
        ) {
            return Err(BenchError::Config("problem dimensions must be positive".into()));
        }
        Ok(spec)
    }

    /// Loads files and builds anything that does not depend on the seed.
    pub fn prepare(&self) -> Result<Prepared> {
        let shared = match self {
            ProblemSpec::LeastSquaresFile { path } => {
                let ds = load(path)?;
                let obj = LeastSquares::new(Matrix::Sparse(ds.a), ds.labels)?.with_known_l();
                Some(Instance::at_origin(Arc::new(obj)))
            }
            ProblemSpec::Logistic { path, gamma } => {
                Some(Instance::at_origin(Arc::new(logistic_from(load(path)?, *gamma)?)))
            }
            ProblemSpec::LogisticFixture { gamma } => Some(Instance::at_origin(Arc::new(logistic_fixture(*gamma)?))),
            _ => None,
        };
        Ok(Prepared { spec: self.clone(), shared })
    }
}

fn load(path: &Path) -> Result<Dataset> {
    if !path.exists() {
        return Err(BenchError::Config(format!("dataset {} does not exist", path.display())));
    }
    read_libsvm(path, None)
}

/// Logistic regression on a dataset with normalized labels and γ resolved
/// against the data smoothness.
pub fn logistic_from(ds: Dataset, gamma: GammaRule) -> Result<Logistic> {
    let y = normalize_labels(&ds.labels)?;
    let m = ds.labels.len();
    let a = Matrix::Sparse(ds.a);
    let data_l = Logistic::new(a.clone(), y.clone(), 0.0)?.data_smoothness();
    Ok(Logistic::new(a, y, gamma.resolve(data_l, m))?.with_known_l())
}

#[derive(Clone)]
pub struct Instance {
    pub obj: Arc<dyn Objective>,
    pub x0: Vec<f64>,
}

impl Instance {
    fn at_origin(obj: Arc<dyn Objective>) -> Self {
        let x0 = vec![0.0; obj.dim()];
        Instance { obj, x0 }
    }
}

pub struct Prepared {
    pub spec: ProblemSpec,
    shared: Option<Instance>,
}

impl Prepared {
    /// The instance used with `seed`. Synthetic problems draw their data from
    /// the seed; file-backed problems are shared by every seed.
    pub fn instance(&self, seed: u64) -> Instance {
        if let Some(i) = &self.shared {
            return i.clone();
        }
        match self.spec {
            ProblemSpec::Quadratic { d } => Instance { obj: Arc::new(random_quadratic(d, seed)), x0: vec![1.0; d] },
            ProblemSpec::LeastSquares { m, n } => Instance::at_origin(Arc::new(synthetic_least_squares(m, n, seed).0)),
            _ => unreachable!("file-backed problems are prepared up front"),
        }
    }

    /// Seeds sharing a key share one objective, so they pool f⋆ together.
    pub fn pool_key(&self, seed: u64) -> Option<u64> {
        if self.shared.is_some() {
            None
        } else {
            Some(seed)
        }
    }
}
