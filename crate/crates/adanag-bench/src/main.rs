use std::fs::File;
use std::path::PathBuf;
use std::process::ExitCode;

use adanag_bench::config::{ExperimentConfig, Settings};
use adanag_bench::experiment::run_experiment;
use adanag_bench::output::read_trace;
use adanag_bench::plot::{emit_plot, PlotStyle, Series, XAxis};
use adanag_bench::registry::{Knobs, SolverSpec};
use adanag_bench::{BenchError, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "adanag-bench", version, about = "Run, certify and plot adaptive first-order methods")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a solver × seed matrix and write trace CSVs and a summary.
    Run(RunArgs),
    /// Same as `run --certify`.
    Certify(RunArgs),
    /// Plot f − f⋆ from trace CSVs into one SVG.
    Plot(PlotArgs),
    /// Check schedule conditions up to --max-iters.
    ValidateSchedule(ValidateArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Flat key = value file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated solver names, e.g. adanag,adanag-g12,nag.
    #[arg(long)]
    solver: Option<String>,
    /// kind[:key=value,...], e.g. least-squares:m=100,n=400 or logistic:path=data.svm,gamma=L/m.
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    /// γ of adagd-gamma.
    #[arg(long)]
    gamma: Option<f64>,
    /// ε of the relaxed AdaNAG curvature branch.
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    eta1: Option<f64>,
    #[arg(long)]
    s0: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// Stop once ‖∇f‖² ≤ tol; 0 disables.
    #[arg(long)]
    grad_tol: Option<f64>,
    /// N, N,M,... or N..M.
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    certify: bool,
    /// Also write convergence.svg.
    #[arg(long)]
    plot: bool,
    /// monotonic or off (elapsed_s = 0, byte-reproducible output).
    #[arg(long)]
    clock: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Axis {
    Iteration,
    Wall,
}

#[derive(Args)]
struct PlotArgs {
    /// Trace CSVs; each becomes one polyline labelled by its file stem.
    #[arg(required = true)]
    traces: Vec<PathBuf>,
    #[arg(long, short)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "iteration")]
    x_axis: Axis,
    #[arg(long)]
    title: Option<String>,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    solver: String,
    #[arg(long, default_value_t = 100_000)]
    max_iters: i64,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
}

impl RunArgs {
    fn settings(&self, force_certify: bool) -> Result<Settings> {
        let mut s = match &self.config {
            Some(p) => Settings::read(p)?,
            None => Settings::default(),
        };
        let mut o = Settings::default();
        let pairs: [(&str, Option<String>); 13] = [
            ("solver", self.solver.clone()),
            ("problem", self.problem.clone()),
            ("p", self.p.map(|v| v.to_string())),
            ("gamma", self.gamma.map(|v| v.to_string())),
            ("epsilon", self.epsilon.map(|v| v.to_string())),
            ("eta1", self.eta1.map(|v| v.to_string())),
            ("s0", self.s0.map(|v| v.to_string())),
            ("max_iters", self.max_iters.map(|v| v.to_string())),
            ("grad_tol", self.grad_tol.map(|v| v.to_string())),
            ("seed", self.seed.clone()),
            ("jobs", self.jobs.map(|v| v.to_string())),
            ("out_dir", self.out_dir.as_ref().map(|v| v.display().to_string())),
            ("clock", self.clock.clone()),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                o.set(k, v)?;
            }
        }
        if self.certify || force_certify {
            o.set("certify", "true")?;
        }
        if self.plot {
            o.set("plot", "true")?;
        }
        s.merge(o);
        Ok(s)
    }
}

fn run_cmd(args: &RunArgs, force_certify: bool) -> Result<bool> {
    let config = ExperimentConfig::from_settings(&args.settings(force_certify)?)?;
    let art = run_experiment(&config)?;
    // the last summary row of each trace
    for (i, row) in art.summary_rows.iter().enumerate() {
        if art.summary_rows.get(i + 1).is_some_and(|n| n.solver == row.solver && n.seed == row.seed) {
            continue;
        }
        println!(
            "{:<18} seed {:<3} k {:<6} f-f* {:<12.4e} min|g|^2 {:<12.4e} {:.3}s {}",
            row.solver, row.seed, row.k, row.f_minus_fstar, row.min_grad_norm_sq, row.wall_s, row.status
        );
    }
    println!("wrote {} trace file(s) and {}", art.trace_files.len(), art.summary.display());
    if let Some(p) = &art.certificates {
        println!("certificates: {}", p.display());
    }
    if let Some(p) = &art.plot {
        println!("plot: {}", p.display());
    }
    for f in &art.failures {
        eprintln!("FAILED {f}");
    }
    Ok(art.success())
}

fn plot_cmd(args: &PlotArgs) -> Result<bool> {
    let mut series = Vec::new();
    for path in &args.traces {
        let cols = read_trace(File::open(path).map_err(BenchError::io(path))?)?;
        let x = match args.x_axis {
            Axis::Iteration => cols.k,
            Axis::Wall => cols.elapsed_s,
        };
        let label = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
        series.push(Series { label, x, y: cols.f_minus_fstar });
    }
    let style = PlotStyle {
        x_axis: match args.x_axis {
            Axis::Iteration => XAxis::Iteration,
            Axis::Wall => XAxis::WallTime,
        },
        title: args.title.clone(),
        ..Default::default()
    };
    std::fs::write(&args.out, emit_plot(&series, &style)?).map_err(BenchError::io(&args.out))?;
    println!("plot: {}", args.out.display());
    Ok(true)
}

fn validate_cmd(args: &ValidateArgs) -> Result<bool> {
    let d = Knobs::default();
    let knobs = Knobs { p: args.p.unwrap_or(d.p), gamma: args.gamma.unwrap_or(d.gamma), ..d };
    let mut ok = true;
    for spec in SolverSpec::parse_list(&args.solver, &knobs)? {
        match spec.kind.validate(args.max_iters)? {
            None => println!("{}: no schedule conditions", spec.kind),
            Some(r) => match r.violation {
                None => println!("{}: PASS up to K = {}", spec.kind, r.checked_up_to),
                Some(v) => {
                    ok = false;
                    println!("{}: FAIL {} at k = {} (lhs {}, rhs {})", spec.kind, v.inequality, v.k, v.lhs, v.rhs);
                }
            },
        }
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(a) => run_cmd(a, false),
        Command::Certify(a) => run_cmd(a, true),
        Command::Plot(a) => plot_cmd(a),
        Command::ValidateSchedule(a) => validate_cmd(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
