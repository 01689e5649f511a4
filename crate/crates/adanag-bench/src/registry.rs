//! Solver names accepted on the command line and their construction.

use std::fmt;

use adanag_core::objective::Objective;
use adanag_core::schedules::{
    epsilon_bar, validate_schedule, AccelSchedule, GScheduleSpec, GdScheduleSpec, Relaxation, ValidationReport,
};
use adanag_core::solvers::{AccelState, AcfgmState, AdaGdState, GdState, InitOptions, NagState, Stepper, ACFGM_BETA};

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolverKind {
    AdaNag,
    Simple,
    /// AdaNAG-G with the poly(p) schedule.
    G(f64),
    GSqrt,
    AdaGd0,
    AdaGdHalf,
    AdaGd1,
    Gamma(f64),
    Nag,
    Gd,
    AcFgm,
}

pub const SOLVER_NAMES: &[&str] = &[
    "adanag",
    "simple",
    "adanag-g12",
    "adanag-g",
    "adanag-gsqrt",
    "adagd0",
    "adagd-half",
    "adagd1",
    "adagd-gamma",
    "nag",
    "gd",
    "ac-fgm",
];

/// Per-solver knobs shared by every solver of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Knobs {
    /// p of `adanag-g`.
    pub p: f64,
    /// γ of `adagd-gamma`.
    pub gamma: f64,
    /// ε of the relaxed AdaNAG curvature branch.
    pub epsilon: Option<f64>,
    /// First index N where the relaxation applies.
    pub relax_from: usize,
    /// η₁ of AC-FGM.
    pub eta1: Option<f64>,
    /// s₀ of the adaptive methods.
    pub s0: Option<f64>,
}

impl Default for Knobs {
    fn default() -> Self {
        Knobs { p: 12.0, gamma: 0.5, epsilon: None, relax_from: 3, eta1: None, s0: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSpec {
    pub kind: SolverKind,
    pub s0: Option<f64>,
    pub eta1: Option<f64>,
    pub relax: Option<Relaxation>,
}

impl SolverKind {
    pub fn parse(name: &str, knobs: &Knobs) -> Result<Self> {
        Ok(match name {
            "adanag" => SolverKind::AdaNag,
            "simple" | "simple-adanag" => SolverKind::Simple,
            "adanag-g" => SolverKind::G(knobs.p),
            "adanag-gsqrt" | "gsqrt" => SolverKind::GSqrt,
            "adagd0" => SolverKind::AdaGd0,
            "adagd-half" => SolverKind::AdaGdHalf,
            "adagd1" => SolverKind::AdaGd1,
            "adagd-gamma" | "gamma" => SolverKind::Gamma(knobs.gamma),
            "nag" => SolverKind::Nag,
            "gd" => SolverKind::Gd,
            "ac-fgm" | "acfgm" => SolverKind::AcFgm,
            other => match other.strip_prefix("adanag-g").and_then(|p| p.parse::<f64>().ok()) {
                Some(p) => SolverKind::G(p),
                None => {
                    return Err(BenchError::Config(format!(
                        "unknown solver {other:?}; expected one of {}",
                        SOLVER_NAMES.join(", ")
                    )))
                }
            },
        })
    }

    pub fn is_accelerated(&self) -> bool {
        matches!(self, SolverKind::AdaNag | SolverKind::Simple | SolverKind::G(_) | SolverKind::GSqrt)
    }

    pub fn accel_schedule(&self) -> Option<AccelSchedule> {
        match self {
            SolverKind::AdaNag => Some(AccelSchedule::adanag()),
            SolverKind::Simple => Some(AccelSchedule::simple()),
            SolverKind::G(p) => GScheduleSpec::poly(*p).ok().map(AccelSchedule::general),
            SolverKind::GSqrt => Some(AccelSchedule::general(GScheduleSpec::sqrt())),
            _ => None,
        }
    }

    pub fn gd_schedule(&self) -> Option<GdScheduleSpec> {
        match self {
            SolverKind::AdaGd0 => Some(GdScheduleSpec::adagd0()),
            SolverKind::AdaGdHalf => Some(GdScheduleSpec::adagd_half()),
            SolverKind::AdaGd1 => Some(GdScheduleSpec::adagd1()),
            SolverKind::Gamma(g) => GdScheduleSpec::gamma(*g).ok(),
            _ => None,
        }
    }

    /// Checks the schedule conditions up to `k_max`; `None` when the solver
    /// has no parametrized schedule.
    pub fn validate(&self, k_max: i64) -> Result<Option<ValidationReport>> {
        Ok(match self {
            SolverKind::G(p) => Some(validate_schedule(&GScheduleSpec::poly(*p)?, k_max)),
            SolverKind::GSqrt => Some(validate_schedule(&GScheduleSpec::sqrt(), k_max)),
            SolverKind::Gamma(g) => Some(validate_schedule(&GdScheduleSpec::gamma(*g)?, k_max)),
            k => k.gd_schedule().map(|s| validate_schedule(&s, k_max)),
        })
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolverKind::AdaNag => f.write_str("adanag"),
            SolverKind::Simple => f.write_str("simple"),
            SolverKind::G(p) => write!(f, "adanag-g{p}"),
            SolverKind::GSqrt => f.write_str("adanag-gsqrt"),
            SolverKind::AdaGd0 => f.write_str("adagd0"),
            SolverKind::AdaGdHalf => f.write_str("adagd-half"),
            SolverKind::AdaGd1 => f.write_str("adagd1"),
            SolverKind::Gamma(g) => write!(f, "adagd-gamma{g}"),
            SolverKind::Nag => f.write_str("nag"),
            SolverKind::Gd => f.write_str("gd"),
            SolverKind::AcFgm => f.write_str("ac-fgm"),
        }
    }
}

impl SolverSpec {
    /// Resolves a name with the shared knobs, rejecting knob combinations
    /// that have no meaning for the solver.
    pub fn parse(name: &str, knobs: &Knobs) -> Result<Self> {
        let kind = SolverKind::parse(name.trim(), knobs)?;
        if let SolverKind::G(p) = kind {
            GScheduleSpec::poly(p).map_err(|e| BenchError::Config(e.to_string()))?;
        }
        if let SolverKind::Gamma(g) = kind {
            GdScheduleSpec::gamma(g).map_err(|e| BenchError::Config(e.to_string()))?;
        }
        let relax = match (knobs.epsilon, kind) {
            (None, _) | (Some(_), SolverKind::Nag | SolverKind::Gd | SolverKind::AcFgm) => None,
            (Some(eps), SolverKind::AdaNag) => {
                let bar = epsilon_bar(knobs.relax_from).map_err(|e| BenchError::Config(e.to_string()))?;
                if !(eps >= 0.0 && eps < bar) {
                    return Err(BenchError::Config(format!(
                        "epsilon = {eps} must lie in [0, ε̄_{} = {bar:.6})",
                        knobs.relax_from
                    )));
                }
                Some(Relaxation { eps, from: knobs.relax_from })
            }
            (Some(_), k) => {
                return Err(BenchError::Config(format!("epsilon relaxation is only defined for adanag, not {k}")))
            }
        };
        let s0 = if matches!(kind, SolverKind::Nag | SolverKind::Gd | SolverKind::AcFgm) { None } else { knobs.s0 };
        let eta1 = if kind == SolverKind::AcFgm { knobs.eta1 } else { None };
        Ok(SolverSpec { kind, s0, eta1, relax })
    }

    pub fn parse_list(names: &str, knobs: &Knobs) -> Result<Vec<Self>> {
        let specs: Vec<Self> =
            names.split(',').filter(|s| !s.trim().is_empty()).map(|n| Self::parse(n, knobs)).collect::<Result<_>>()?;
        if specs.is_empty() {
            return Err(BenchError::Config("no solvers given".into()));
        }
        Ok(specs)
    }

    pub fn name(&self) -> String {
        match self.relax {
            Some(r) => format!("{}-eps{}", self.kind, r.eps),
            None => self.kind.to_string(),
        }
    }

    pub fn build(&self, obj: &dyn Objective, x0: &[f64], seed: u64) -> Result<Box<dyn Stepper>> {
        let opts = InitOptions { seed, s0: self.s0, ..Default::default() };
        let need_l = || {
            obj.known_l().ok_or_else(|| {
                BenchError::Config(format!("{} needs a problem with a known smoothness constant", self.kind))
            })
        };
        Ok(match self.kind {
            SolverKind::Nag => Box::new(NagState::init(obj, x0, Some(need_l()?))?),
            SolverKind::Gd => Box::new(GdState::init(obj, x0, Some(need_l()?))?),
            SolverKind::AcFgm => {
                let opts = InitOptions { s0: self.eta1, ..opts };
                Box::new(AcfgmState::init(obj, x0, opts, ACFGM_BETA)?)
            }
            k => {
                if let Some(sched) = k.accel_schedule() {
                    let mut st = AccelState::init(self.name(), sched, obj, x0, opts)?;
                    if let Some(r) = self.relax {
                        st = st.with_relaxation(r);
                    }
                    Box::new(st)
                } else {
                    let sched = k.gd_schedule().expect("every remaining kind is a gradient schedule");
                    Box::new(AdaGdState::init(self.name(), sched, obj, x0, opts)?)
                }
            }
        })
    }
}
