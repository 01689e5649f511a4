//! One-step transitions for every method and a generic runner.

mod accel;
mod acfgm;
mod adagd;
mod baselines;

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::curvature::{initial_curvature_seeded, CurvatureGuard};
use crate::error::{Error, Result};
use crate::objective::{GradSample, Objective};
use crate::vector::dist_sq;

pub use accel::AccelState;
pub use acfgm::{AcfgmState, ACFGM_BETA};
pub use adagd::AdaGdState;
pub use baselines::{GdState, NagState};

/// Options shared by the adaptive initializers.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct InitOptions {
    /// Seed of the perturbation that defines x̃₀.
    pub seed: u64,
    /// Initial step, used verbatim when set.
    pub s0: Option<f64>,
    /// Initial curvature guess, replacing the perturbation estimate when set.
    pub l0: Option<f64>,
    pub guard: CurvatureGuard,
}

impl InitOptions {
    pub fn with_seed(seed: u64) -> Self {
        InitOptions { seed, ..Default::default() }
    }

    pub(crate) fn resolve_l0(&self, obj: &dyn Objective, x0: &GradSample) -> Result<f64> {
        match self.l0 {
            Some(l) if l > 0.0 && l.is_finite() => Ok(l),
            Some(l) => Err(Error::Usage(alloc::format!("L₀ must be positive and finite, got {l}"))),
            None => initial_curvature_seeded(obj, x0, self.seed),
        }
    }

    pub(crate) fn resolve_s0(&self, default: f64) -> Result<f64> {
        match self.s0 {
            Some(s) if s > 0.0 && s.is_finite() => Ok(s),
            Some(s) => Err(Error::Usage(alloc::format!("s₀ must be positive and finite, got {s}"))),
            None => Ok(default),
        }
    }
}

/// A solver state that can advance one iteration.
pub trait Stepper: Send {
    fn name(&self) -> &str;
    fn k(&self) -> usize;
    /// Point, value and gradient at x_k.
    fn sample(&self) -> &GradSample;
    /// The step applied from x_k (s_k; η_{k+1} for AC-FGM).
    fn step_size(&self) -> f64;
    /// L_k, with L₀ the initial guess (the supplied L for fixed-step methods).
    fn curvature(&self) -> f64;
    /// The point entering the distance term of the potential: z_k for the
    /// accelerated family, x_k otherwise.
    fn anchor(&self) -> &[f64];
    /// Count of rounding sentinels met by the step rule so far.
    fn anomalies(&self) -> u64 {
        0
    }
    /// ⟨∇f(x_k), ∇f(x_{k−1})⟩, absent at k = 0.
    fn grad_dot_prev(&self) -> Option<f64>;
    fn step(&mut self, obj: &dyn Objective) -> Result<()>;
}

/// One row of telemetry, recorded at every x_k.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub k: usize,
    pub f: f64,
    pub grad_norm_sq: f64,
    pub step: f64,
    pub curvature: f64,
    /// ‖anchor_k − x⋆‖² when x⋆ is known.
    pub anchor_dist_sq: Option<f64>,
    /// ‖x_k − x⋆‖² when x⋆ is known.
    pub x_dist_sq: Option<f64>,
    pub grad_dot_prev: Option<f64>,
    pub anomalies: u64,
    pub elapsed_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    MaxIters,
    GradTol,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub solver: String,
    pub records: Vec<TraceRecord>,
    pub stop: StopReason,
}

impl Trace {
    pub fn min_f(&self) -> f64 {
        self.records.iter().map(|r| r.f).fold(f64::INFINITY, f64::min)
    }

    pub fn last(&self) -> &TraceRecord {
        self.records.last().expect("a trace holds at least x₀")
    }
}

/// A failed run with everything recorded before the failure.
#[derive(Debug, Clone, PartialEq)]
pub struct RunError {
    pub error: Error,
    pub trace: Trace,
}

impl core::fmt::Display for RunError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{} (after {} records)", self.error, self.trace.records.len())
    }
}

impl core::error::Error for RunError {}

/// Seconds since some fixed origin. The std crate supplies a monotonic clock.
pub trait Clock {
    fn now_s(&mut self) -> f64;
}

/// A clock that always reads zero.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn now_s(&mut self) -> f64 {
        0.0
    }
}

/// Observer of consecutive records.
pub trait Hook {
    fn observe(&mut self, prev: &TraceRecord, curr: &TraceRecord);
}

/// Counts iterations where f fails to decrease away from a stationary point.
/// An exact oscillation f_{k+1} = f_k counts.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NonDecreaseMonitor {
    pub count: usize,
    pub first: Option<usize>,
}

impl Hook for NonDecreaseMonitor {
    fn observe(&mut self, prev: &TraceRecord, curr: &TraceRecord) {
        if curr.f >= prev.f && prev.grad_norm_sq > 0.0 {
            self.count += 1;
            self.first.get_or_insert(curr.k);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub max_iters: usize,
    /// Stop once ‖∇f(x_k)‖² ≤ grad_tol; 0 disables.
    pub grad_tol: f64,
}

impl RunOptions {
    pub fn iters(max_iters: usize) -> Self {
        RunOptions { max_iters, grad_tol: 0.0 }
    }
}

/// Blow-up threshold relative to 1 + |f(x₀)|.
pub const DIVERGENCE_FACTOR: f64 = 1e12;

fn record(st: &dyn Stepper, x_star: Option<&[f64]>, elapsed_s: f64) -> TraceRecord {
    let smp = st.sample();
    TraceRecord {
        k: st.k(),
        f: smp.f,
        grad_norm_sq: smp.grad_norm_sq(),
        step: st.step_size(),
        curvature: st.curvature(),
        anchor_dist_sq: x_star.map(|xs| dist_sq(st.anchor(), xs)),
        x_dist_sq: x_star.map(|xs| dist_sq(&smp.x, xs)),
        grad_dot_prev: st.grad_dot_prev(),
        anomalies: st.anomalies(),
        elapsed_s,
    }
}

/// Iterates up to `max_iters` steps, recording x₀, …, x_K.
pub fn run(
    st: &mut dyn Stepper,
    obj: &dyn Objective,
    opts: RunOptions,
    hooks: &mut [&mut dyn Hook],
    clock: &mut dyn Clock,
) -> core::result::Result<Trace, Box<RunError>> {
    let x_star = obj.known_opt().and_then(|o| o.x_star.as_deref());
    let t0 = clock.now_s();
    let mut trace = Trace {
        solver: String::from(st.name()),
        records: Vec::with_capacity(opts.max_iters.min(1 << 20) + 1),
        stop: StopReason::MaxIters,
    };
    let limit = DIVERGENCE_FACTOR * (1.0 + st.sample().f.abs());
    trace.records.push(record(st, x_star, 0.0));
    if opts.max_iters == 0 {
        let error = Error::Usage("max_iters must be at least 1".into());
        return Err(Box::new(RunError { error, trace }));
    }
    for _ in 0..opts.max_iters {
        if opts.grad_tol > 0.0 && trace.last().grad_norm_sq <= opts.grad_tol {
            trace.stop = StopReason::GradTol;
            return Ok(trace);
        }
        if let Err(error) = st.step(obj) {
            let error = match error {
                Error::NonFinite { .. } => Error::Divergence { k: st.k() + 1, f: f64::NAN },
                e => e,
            };
            return Err(Box::new(RunError { error, trace }));
        }
        let rec = record(st, x_star, clock.now_s() - t0);
        if rec.f > limit {
            let error = Error::Divergence { k: rec.k, f: rec.f };
            trace.records.push(rec);
            return Err(Box::new(RunError { error, trace }));
        }
        for h in hooks.iter_mut() {
            h.observe(trace.last(), &rec);
        }
        trace.records.push(rec);
    }
    if opts.grad_tol > 0.0 && trace.last().grad_norm_sq <= opts.grad_tol {
        trace.stop = StopReason::GradTol;
    }
    Ok(trace)
}

/// The s_{k+1} choice shared by the adaptive methods: `growth` is the first
/// branch, `coef/l` the curvature branch.
pub(crate) fn next_step(growth: f64, coef: f64, l: f64, anomalies: &mut u64) -> f64 {
    if l == 0.0 {
        growth
    } else if l == f64::INFINITY {
        *anomalies += 1;
        growth
    } else {
        growth.min(coef / l)
    }
}
