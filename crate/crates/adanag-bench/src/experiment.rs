//! Solver × seed matrices: validation, parallel runs, f⋆ pooling and artifacts.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;

use adanag_core::lyapunov::{accel_potentials, adagd_potentials, all_passed, Certificate};
use adanag_core::solvers::{run, Clock, NoClock, RunOptions, Trace};
use rayon::prelude::*;

use crate::certify::{certification_grad_tol, certify};
use crate::clock::MonotonicClock;
use crate::config::{ClockMode, ExperimentConfig};
use crate::error::{BenchError, Result};
use crate::output::{certificate_rows, summary_rows, write_certificates, write_summary, write_trace, SummaryRow};
use crate::plot::{emit_plot, PlotStyle, Series};
use crate::problem::Prepared;
use crate::registry::SolverSpec;

/// Lowest objective value over every record of every trace.
pub fn pool_fstar(traces: &[&Trace]) -> Result<f64> {
    if traces.is_empty() {
        return Err(BenchError::Usage("pooling f⋆ needs at least one trace".into()));
    }
    Ok(traces.iter().map(|t| t.min_f()).fold(f64::INFINITY, f64::min))
}

/// The outcome of one (solver, seed) cell.
#[derive(Debug, Clone)]
pub struct CellResult {
    pub solver: String,
    pub seed: u64,
    pub trace: Trace,
    /// Divergence or another runtime failure, with the partial trace kept.
    pub error: Option<String>,
    pub certificates: Vec<Certificate>,
    pub potentials: Option<Vec<f64>>,
}

impl CellResult {
    pub fn certified(&self) -> bool {
        all_passed(&self.certificates)
    }
}

#[derive(Debug, Clone)]
pub struct Artifacts {
    pub cells: Vec<CellResult>,
    pub trace_files: Vec<PathBuf>,
    pub summary: PathBuf,
    pub certificates: Option<PathBuf>,
    pub plot: Option<PathBuf>,
    pub summary_rows: Vec<SummaryRow>,
    /// One line per diverged run or failed certificate set.
    pub failures: Vec<String>,
}

impl Artifacts {
    pub fn success(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Loads data and checks every schedule and capability before any run starts.
pub fn prepare(config: &ExperimentConfig) -> Result<Prepared> {
    for spec in &config.solvers {
        if let Some(report) = spec.kind.validate(config.max_iters as i64)? {
            if let Some(v) = report.violation {
                return Err(BenchError::Config(format!(
                    "{} schedule fails {} at k = {} ({} vs {})",
                    spec.kind, v.inequality, v.k, v.lhs, v.rhs
                )));
            }
        }
    }
    let prepared = config.problem.prepare()?;
    let probe = prepared.instance(config.seeds[0]);
    for spec in &config.solvers {
        if matches!(spec.kind, crate::registry::SolverKind::Nag | crate::registry::SolverKind::Gd)
            && probe.obj.known_l().is_none()
        {
            return Err(BenchError::Config(format!("{} needs a known smoothness constant", spec.kind)));
        }
    }
    if config.certify && probe.obj.known_opt().and_then(|o| o.x_star.as_ref()).is_none() {
        return Err(BenchError::Config("--certify needs a problem with a known minimizer".into()));
    }
    Ok(prepared)
}

fn potentials_for(spec: &SolverSpec, trace: &Trace, f_star: f64) -> Option<Vec<f64>> {
    trace.records.first()?.anchor_dist_sq?;
    if let Some(mut s) = spec.kind.accel_schedule() {
        accel_potentials(trace, &mut s, f_star).ok()
    } else {
        spec.kind.gd_schedule().and_then(|s| adagd_potentials(trace, &s, f_star).ok())
    }
}

fn run_cell(config: &ExperimentConfig, prepared: &Prepared, spec: &SolverSpec, seed: u64) -> CellResult {
    let inst = prepared.instance(seed);
    let obj = inst.obj.as_ref();
    let grad_tol = if config.certify && config.grad_tol == 0.0 { certification_grad_tol(obj) } else { config.grad_tol };
    let opts = RunOptions { max_iters: config.max_iters, grad_tol };
    let mut mono = MonotonicClock::new();
    let mut none = NoClock;
    let clock: &mut dyn Clock = match config.clock {
        ClockMode::Monotonic => &mut mono,
        ClockMode::Off => &mut none,
    };
    let name = spec.name();
    let (trace, error) = match spec.build(obj, &inst.x0, seed) {
        Ok(mut st) => match run(st.as_mut(), obj, opts, &mut [], clock) {
            Ok(t) => (t, None),
            Err(e) => {
                let msg = e.error.to_string();
                (e.trace, Some(msg))
            }
        },
        Err(e) => (
            Trace { solver: name.clone(), records: Vec::new(), stop: adanag_core::solvers::StopReason::MaxIters },
            Some(e.to_string()),
        ),
    };
    let f_star = obj.known_opt().map(|o| o.f_star);
    let potentials = f_star.and_then(|fs| potentials_for(spec, &trace, fs));
    let certificates =
        if config.certify && error.is_none() { certify(spec, obj, &trace).unwrap_or_default() } else { Vec::new() };
    CellResult { solver: name, seed, trace, error, certificates, potentials }
}

/// Runs every (solver, seed) cell on up to `jobs` threads, in a fixed order.
pub fn run_cells(config: &ExperimentConfig, prepared: &Prepared) -> Result<Vec<CellResult>> {
    let cells: Vec<(&SolverSpec, u64)> =
        config.solvers.iter().flat_map(|s| config.seeds.iter().map(move |seed| (s, *seed))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| BenchError::Usage(format!("thread pool: {e}")))?;
    Ok(pool.install(|| cells.par_iter().map(|(spec, seed)| run_cell(config, prepared, spec, *seed)).collect()))
}

fn create(path: &PathBuf) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).map_err(BenchError::io(path))?))
}

/// Validates, runs, pools f⋆ where the optimum is unknown, and writes one
/// trace CSV per cell plus the summary (and certificate table and plot when
/// requested) into `out_dir`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Artifacts> {
    let prepared = prepare(config)?;
    let cells = run_cells(config, &prepared)?;
    fs::create_dir_all(&config.out_dir).map_err(BenchError::io(&config.out_dir))?;

    let mut groups: BTreeMap<Option<u64>, Vec<&Trace>> = BTreeMap::new();
    for c in &cells {
        if !c.trace.records.is_empty() {
            groups.entry(prepared.pool_key(c.seed)).or_default().push(&c.trace);
        }
    }
    let f_star_of = |seed: u64| -> Option<f64> {
        let exact = prepared.instance(seed).obj.known_opt().map(|o| o.f_star);
        exact.or_else(|| groups.get(&prepared.pool_key(seed)).and_then(|t| pool_fstar(t).ok()))
    };

    let mut trace_files = Vec::new();
    let mut rows = Vec::new();
    let mut cert_rows = Vec::new();
    let mut failures = Vec::new();
    for c in &cells {
        let f_star = f_star_of(c.seed);
        let path = config.out_dir.join(format!("trace_{}_seed{}.csv", c.solver, c.seed));
        write_trace(create(&path)?, &c.trace, f_star, c.potentials.as_deref())?;
        trace_files.push(path);
        let status = match &c.error {
            Some(e) => {
                failures.push(format!("{} seed {}: {e}", c.solver, c.seed));
                "failed"
            }
            None => "ok",
        };
        if !c.trace.records.is_empty() {
            rows.extend(summary_rows(&c.trace, &c.solver, c.seed, f_star.unwrap_or(f64::NAN), status));
        }
        if config.certify {
            cert_rows.extend(certificate_rows(&c.solver, c.seed, &c.certificates));
            if c.error.is_none() && !c.certified() {
                let first = c.certificates.iter().find(|x| !x.passed()).expect("a failure exists");
                failures.push(format!(
                    "{} seed {}: certificate {} fails at k = {} (lhs {} > rhs {})",
                    c.solver,
                    c.seed,
                    first.kind.as_str(),
                    first.k,
                    first.lhs,
                    first.rhs
                ));
            }
        }
    }
    let summary = config.out_dir.join("summary.csv");
    write_summary(create(&summary)?, &rows)?;
    let certificates = if config.certify {
        let p = config.out_dir.join("certificates.csv");
        write_certificates(create(&p)?, &cert_rows)?;
        Some(p)
    } else {
        None
    };
    let plot = if config.plot {
        let seed = config.seeds[0];
        let series: Vec<Series> = cells
            .iter()
            .filter(|c| c.seed == seed && !c.trace.records.is_empty())
            .map(|c| {
                let fs = f_star_of(seed).unwrap_or(0.0);
                Series {
                    label: c.solver.clone(),
                    x: c.trace.records.iter().map(|r| r.k as f64).collect(),
                    y: c.trace.records.iter().map(|r| r.f - fs).collect(),
                }
            })
            .collect();
        let p = config.out_dir.join("convergence.svg");
        let svg = emit_plot(&series, &PlotStyle { title: Some(format!("seed {seed}")), ..Default::default() })?;
        fs::write(&p, svg).map_err(BenchError::io(&p))?;
        Some(p)
    } else {
        None
    };
    Ok(Artifacts { cells, trace_files, summary, certificates, plot, summary_rows: rows, failures })
}
