use alloc::format;

use num_rational::Rational64;

use super::{ge, ScheduleConditions, Violation};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GdKind {
    /// A_k = γ(k+1)+2, B_k = γ(k+1).
    Gamma(f64),
    /// A_k = (k+5)/2, B_k = (k+1)/2.
    AdaGd1,
    /// A_k = 2√(k+4), B_k = 2√(k+2) − 2.
    AdaGdHalf,
    /// A_k = 3, B_k = 5/4.
    AdaGd0,
}

/// (A_k, B_k) of the adaptive gradient method, with A₋₁ = 0 and B₋₁ = B₀ + 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GdScheduleSpec {
    pub kind: GdKind,
    /// Certified r ≤ r_k^L for all k.
    pub r: f64,
}

impl GdScheduleSpec {
    pub fn gamma(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(Error::Schedule(format!("gamma schedule needs γ ∈ (0, 1], got {gamma}")));
        }
        let r = gamma * (gamma + 2.0) / (3.0 * gamma * gamma + 5.0 * gamma + 4.0);
        Ok(GdScheduleSpec { kind: GdKind::Gamma(gamma), r })
    }

    pub fn adagd1() -> Self {
        GdScheduleSpec { kind: GdKind::AdaGd1, r: 5.0 / 29.0 }
    }

    pub fn adagd_half() -> Self {
        let mut me = GdScheduleSpec { kind: GdKind::AdaGdHalf, r: 0.0 };
        // r_k^L increases from its k = 0 value toward ½
        me.r = me.r_l(0);
        me
    }

    pub fn adagd0() -> Self {
        GdScheduleSpec { kind: GdKind::AdaGd0, r: 20.0 / 63.0 }
    }

    pub fn a(&self, k: i64) -> f64 {
        if k < 0 {
            return 0.0;
        }
        let kf = k as f64;
        match self.kind {
            GdKind::Gamma(g) => g * (kf + 1.0) + 2.0,
            GdKind::AdaGd1 => (kf + 5.0) / 2.0,
            GdKind::AdaGdHalf => 2.0 * libm::sqrt(kf + 4.0),
            GdKind::AdaGd0 => 3.0,
        }
    }

    pub fn b(&self, k: i64) -> f64 {
        if k < 0 {
            return self.b(0) + 1.0;
        }
        let kf = k as f64;
        match self.kind {
            GdKind::Gamma(g) => g * (kf + 1.0),
            GdKind::AdaGd1 => (kf + 1.0) / 2.0,
            GdKind::AdaGdHalf => 2.0 * libm::sqrt(kf + 2.0) - 2.0,
            GdKind::AdaGd0 => 1.25,
        }
    }

    /// r_k^s = (A_{k−1}+1)/A_k.
    pub fn r_s(&self, k: i64) -> f64 {
        (self.a(k - 1) + 1.0) / self.a(k)
    }

    /// r_k^L = (A_k/B_k + (B_{k+1}+1)/A_k)⁻¹.
    pub fn r_l(&self, k: i64) -> f64 {
        let (a, b, bn) = (self.a(k), self.b(k), self.b(k + 1));
        1.0 / (a / b + (bn + 1.0) / a)
    }

    /// s₀·L₀ of the default start, r·A₀.
    pub fn r0(&self) -> f64 {
        self.r * self.a(0)
    }

    /// (A_k, B_k) as exact rationals for the families with rational entries.
    pub fn exact_ab(&self, k: i64) -> Option<(Rational64, Rational64)> {
        let r = |n: i64, d: i64| Rational64::new(n, d);
        match self.kind {
            GdKind::AdaGd0 => Some((if k < 0 { r(0, 1) } else { r(3, 1) }, if k < 0 { r(9, 4) } else { r(5, 4) })),
            GdKind::AdaGd1 => {
                Some((if k < 0 { r(0, 1) } else { r(k + 5, 2) }, if k < 0 { r(3, 2) } else { r(k + 1, 2) }))
            }
            _ => None,
        }
    }

    /// (r_k^s, r_k^L) in exact arithmetic when available.
    pub fn exact_ratios(&self, k: i64) -> Option<(Rational64, Rational64)> {
        let (am, _) = self.exact_ab(k - 1)?;
        let (a, b) = self.exact_ab(k)?;
        let (_, bn) = self.exact_ab(k + 1)?;
        let one = Rational64::from_integer(1);
        Some(((am + one) / a, one / (a / b + (bn + one) / a)))
    }
}

impl ScheduleConditions for GdScheduleSpec {
    fn check(&self, k: i64) -> Option<Violation> {
        if !(self.a(k) > 0.0 && self.b(k) > 0.0) {
            return Some(Violation { k, inequality: "A_k, B_k > 0", lhs: self.a(k).min(self.b(k)), rhs: 0.0 });
        }
        ge(k, "(A_k+1)/A_{k+1} ≥ 1", (self.a(k) + 1.0) / self.a(k + 1), 1.0)
            .or_else(|| ge(k, "r_k^L ≥ r", self.r_l(k), self.r))
            .or_else(|| {
                let (a, an) = (self.a(k), self.a(k + 1));
                ge(k, "A_{k+1}²/(A_k+1) − 1 ≥ B_{k+2}", an * an / (a + 1.0) - 1.0, self.b(k + 2))
            })
    }
}
