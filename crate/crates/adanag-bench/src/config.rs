//! Flat `key = value` configuration with command-line overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{BenchError, Result};
use crate::problem::ProblemSpec;
use crate::registry::{Knobs, SolverSpec};

pub const KEYS: &[&str] = &[
    "problem",
    "solver",
    "p",
    "gamma",
    "epsilon",
    "relax_from",
    "eta1",
    "s0",
    "max_iters",
    "grad_tol",
    "seed",
    "jobs",
    "out_dir",
    "certify",
    "plot",
    "clock",
];

/// Raw settings, later entries overriding earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings(pub BTreeMap<String, String>);

fn canonical(key: &str) -> String {
    key.trim().replace('-', "_")
}

impl Settings {
    /// Parses `key = value` lines; `#` starts a comment and blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = Settings::default();
        for (i, line) in text.lines().enumerate() {
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (k, v) = body
                .split_once('=')
                .ok_or_else(|| BenchError::Config(format!("line {}: expected key = value, got {body:?}", i + 1)))?;
            if !KEYS.contains(&canonical(k).as_str()) {
                return Err(BenchError::Config(format!("line {}: unknown key {:?}", i + 1, k.trim())));
            }
            out.set(k, v.trim())?;
        }
        Ok(out)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path).map_err(BenchError::io(path))?)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        let key = canonical(key);
        if !KEYS.contains(&key.as_str()) {
            return Err(BenchError::Config(format!("unknown key {key:?}")));
        }
        self.0.insert(key, value.into());
        Ok(())
    }

    /// Applies every entry of `other` on top of `self`.
    pub fn merge(&mut self, other: Settings) {
        self.0.extend(other.0);
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.0
            .get(key)
            .map(|v| v.parse::<T>().map_err(|_| BenchError::Config(format!("{key} = {v:?} is malformed"))))
            .transpose()
    }
}

/// Source of the elapsed_s column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClockMode {
    Monotonic,
    /// Every elapsed time reads zero, making outputs byte-reproducible.
    Off,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problem: ProblemSpec,
    pub solvers: Vec<SolverSpec>,
    pub max_iters: usize,
    /// 0 disables the gradient stopping test.
    pub grad_tol: f64,
    pub seeds: Vec<u64>,
    pub jobs: usize,
    pub out_dir: PathBuf,
    pub certify: bool,
    pub plot: bool,
    pub clock: ClockMode,
}

/// Seeds as `3`, `0,1,2` or the half-open range `0..5`.
pub fn parse_seeds(s: &str) -> Result<Vec<u64>> {
    let bad = || BenchError::Config(format!("seed {s:?} is not N, a list N,M,... or a range N..M"));
    let seeds: Vec<u64> = if let Some((a, b)) = s.split_once("..") {
        let (a, b): (u64, u64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        (a..b).collect()
    } else {
        s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?
    };
    if seeds.is_empty() {
        return Err(bad());
    }
    Ok(seeds)
}

impl ExperimentConfig {
    pub fn from_settings(s: &Settings) -> Result<Self> {
        let d = Knobs::default();
        let knobs = Knobs {
            p: s.get("p")?.unwrap_or(d.p),
            gamma: s.get("gamma")?.unwrap_or(d.gamma),
            epsilon: s.get("epsilon")?,
            relax_from: s.get("relax_from")?.unwrap_or(d.relax_from),
            eta1: s.get("eta1")?,
            s0: s.get("s0")?,
        };
        let problem = ProblemSpec::parse(s.0.get("problem").map_or("least-squares", String::as_str))?;
        let solvers = SolverSpec::parse_list(s.0.get("solver").map_or("adanag", String::as_str), &knobs)?;
        let max_iters: usize = s.get("max_iters")?.unwrap_or(1000);
        if max_iters == 0 {
            return Err(BenchError::Config("max_iters must be at least 1".into()));
        }
        let grad_tol: f64 = s.get("grad_tol")?.unwrap_or(0.0);
        if !(grad_tol >= 0.0) {
            return Err(BenchError::Config(format!("grad_tol must be nonnegative, got {grad_tol}")));
        }
        let jobs: usize = s.get("jobs")?.unwrap_or(1);
        let clock = match s.0.get("clock").map(String::as_str) {
            None | Some("monotonic") => ClockMode::Monotonic,
            Some("off") => ClockMode::Off,
            Some(v) => return Err(BenchError::Config(format!("clock = {v:?}; expected monotonic or off"))),
        };
        Ok(ExperimentConfig {
            problem,
            solvers,
            max_iters,
            grad_tol,
            seeds: parse_seeds(s.0.get("seed").map_or("0", String::as_str))?,
            jobs: jobs.max(1),
            out_dir: s.0.get("out_dir").map_or_else(|| PathBuf::from("out"), PathBuf::from),
            certify: s.get("certify")?.unwrap_or(false),
            plot: s.get("plot")?.unwrap_or(false),
            clock,
        })
    }
}
