//! Parameter sequences, their named constants, and condition checks.

mod accel;
mod adanag;
mod g;
mod gd;
mod theta;

pub use accel::{AccelSchedule, Relaxation};
pub use adanag::{adanag_constants, epsilon_bar, AdaNagParams, ConstantRow, ConstantTable};
pub use g::{GKind, GScheduleSpec, SeqFn};
pub use gd::{GdKind, GdScheduleSpec};
pub use theta::{ThetaKind, ThetaSeq};

/// Relative slack allowed when a condition holds with equality in exact arithmetic.
pub const VALIDATION_RTOL: f64 = 1e-12;

/// First failed inequality of a schedule sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub k: i64,
    pub inequality: &'static str,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checked_up_to: i64,
    pub violation: Option<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Per-index inequality checks of a schedule family.
pub trait ScheduleConditions {
    /// Returns the first inequality that fails at index `k`.
    fn check(&self, k: i64) -> Option<Violation>;
}

/// Checks every condition for k = 0..=K and reports the first violation.
pub fn validate_schedule(spec: &dyn ScheduleConditions, k_max: i64) -> ValidationReport {
    for k in 0..=k_max {
        if let Some(v) = spec.check(k) {
            return ValidationReport { checked_up_to: k, violation: Some(v) };
        }
    }
    ValidationReport { checked_up_to: k_max, violation: None }
}

/// `lhs ≥ rhs` up to [`VALIDATION_RTOL`].
pub(crate) fn ge(k: i64, inequality: &'static str, lhs: f64, rhs: f64) -> Option<Violation> {
    if lhs.is_finite() && rhs.is_finite() && lhs >= rhs - VALIDATION_RTOL * rhs.abs() {
        None
    } else {
        Some(Violation { k, inequality, lhs, rhs })
    }
}
