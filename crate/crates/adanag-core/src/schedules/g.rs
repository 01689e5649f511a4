use alloc::format;
use alloc::sync::Arc;

use super::{ge, ScheduleConditions, Violation};
use crate::error::{Error, Result};

/// A sequence defined for k ≥ −1.
pub type SeqFn = Arc<dyn Fn(i64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum GKind {
    /// τ_k = (k+2+p)/p, α_k = ½(τ_{k+1}−1)²/τ_k².
    Poly(f64),
    /// τ_k = 2√(k+3), α_k = ½.
    Sqrt,
    Custom {
        tau: SeqFn,
        alpha: SeqFn,
    },
}

impl core::fmt::Debug for GKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            GKind::Poly(p) => write!(f, "Poly({p})"),
            GKind::Sqrt => write!(f, "Sqrt"),
            GKind::Custom { .. } => write!(f, "Custom"),
        }
    }
}

/// Parameters (τ_k, α_k) of the generalized method and the derived (A_k, B_k).
#[derive(Debug, Clone)]
pub struct GScheduleSpec {
    pub kind: GKind,
    /// Certified r with (A_k/B_k + (B_{k+1}+α²_{k+1}τ²_{k+1})/A_k)⁻¹ ≥ r/α_{k+1}.
    pub r: f64,
}

impl GScheduleSpec {
    pub fn poly(p: f64) -> Result<Self> {
        if !(p > 2.0) || !p.is_finite() {
            return Err(Error::Schedule(format!("poly(p) needs p > 2, got {p}")));
        }
        let r = 27.0 / (2.0 * (p + 3.0) * (2.0 * p * p + 8.0 * p + 17.0));
        Ok(GScheduleSpec { kind: GKind::Poly(p), r })
    }

    pub fn sqrt() -> Self {
        GScheduleSpec { kind: GKind::Sqrt, r: 0.1 }
    }

    pub fn custom(tau: SeqFn, alpha: SeqFn, r: f64) -> Self {
        GScheduleSpec { kind: GKind::Custom { tau, alpha }, r }
    }

    pub fn tau(&self, k: i64) -> f64 {
        let kf = k as f64;
        match &self.kind {
            GKind::Poly(p) => (kf + 2.0 + p) / p,
            GKind::Sqrt => 2.0 * libm::sqrt(kf + 3.0),
            GKind::Custom { tau, .. } => tau(k),
        }
    }

    pub fn alpha(&self, k: i64) -> f64 {
        let kf = k as f64;
        match &self.kind {
            GKind::Poly(p) => (kf + 3.0) * (kf + 3.0) / (2.0 * (kf + p + 2.0) * (kf + p + 2.0)),
            GKind::Sqrt => 0.5,
            GKind::Custom { alpha, .. } => alpha(k),
        }
    }

    /// A_k = α_{k+1}τ_{k+1}(τ_{k+1}−1) for k ≥ 0, A₋₁ = 0.
    pub fn a(&self, k: i64) -> f64 {
        if k < 0 {
            return 0.0;
        }
        let t = self.tau(k + 1);
        self.alpha(k + 1) * t * (t - 1.0)
    }

    /// B_k = α_k²τ_k²((τ_k−1)²/(α_{k−1}τ²_{k−1}) − 1), k ≥ 0 (B₀ through the
    /// k = −1 values of τ and α); B₋₁ = B₀ + α₀²τ₀².
    pub fn b(&self, k: i64) -> f64 {
        if k < 0 {
            let (a0, t0) = (self.alpha(0), self.tau(0));
            return self.b(0) + a0 * a0 * t0 * t0;
        }
        let (a, t) = (self.alpha(k), self.tau(k));
        if let GKind::Poly(_) = self.kind {
            // (τ_k−1)²/(α_{k−1}τ²_{k−1}) = 2 identically for this family
            return a * a * t * t;
        }
        let (ap, tp) = (self.alpha(k - 1), self.tau(k - 1));
        a * a * t * t * ((t - 1.0) * (t - 1.0) / (ap * tp * tp) - 1.0)
    }

    /// (A_{k−1} + α_kτ_k)/A_k.
    pub fn growth(&self, k: i64) -> f64 {
        (self.a(k - 1) + self.alpha(k) * self.tau(k)) / self.a(k)
    }

    /// (A_k/B_k + (1+ε)(B_{k+1} + α²_{k+1}τ²_{k+1})/A_k)⁻¹.
    pub fn curvature_coef(&self, k: i64, eps: f64) -> f64 {
        let (a, b, bn) = (self.a(k), self.b(k), self.b(k + 1));
        let (an, tn) = (self.alpha(k + 1), self.tau(k + 1));
        1.0 / (a / b + (1.0 + eps) * (bn + an * an * tn * tn) / a)
    }

    /// τ_k²/(τ_{k+1}(τ_{k+1}−1)).
    pub fn tau_ratio(&self, k: i64) -> f64 {
        let (t, tn) = (self.tau(k), self.tau(k + 1));
        t * t / (tn * (tn - 1.0))
    }

    /// s₀·L₀ of the default start, A₀/(α₀τ₀)·(r/α₁).
    pub fn r0(&self) -> f64 {
        self.a(0) / (self.alpha(0) * self.tau(0)) * (self.r / self.alpha(1))
    }

    /// Σ_{k=0}^{K} ln τ_k²/(τ_{k+1}(τ_{k+1}−1)).
    pub fn growth_log_product(&self, k_max: i64) -> f64 {
        (0..=k_max).map(|k| libm::log(self.tau_ratio(k))).sum()
    }
}

impl ScheduleConditions for GScheduleSpec {
    fn check(&self, k: i64) -> Option<Violation> {
        let a = self.alpha(k);
        if !(a > 0.0) {
            return Some(Violation { k, inequality: "α_k > 0", lhs: a, rhs: 0.0 });
        }
        if !(a <= 1.0) {
            return Some(Violation { k, inequality: "α_k ≤ 1", lhs: a, rhs: 1.0 });
        }
        if !(self.a(k) > 0.0) {
            return Some(Violation { k, inequality: "A_k > 0", lhs: self.a(k), rhs: 0.0 });
        }
        if !(self.b(k) > 0.0) {
            return Some(Violation { k, inequality: "B_k > 0", lhs: self.b(k), rhs: 0.0 });
        }
        ge(k, "τ_k²/(τ_{k+1}(τ_{k+1}−1)) ≥ 1", self.tau_ratio(k), 1.0).or_else(|| {
            ge(
                k,
                "(A_k/B_k + (B_{k+1}+α²τ²)/A_k)⁻¹ ≥ r/α_{k+1}",
                self.curvature_coef(k, 0.0),
                self.r / self.alpha(k + 1),
            )
        })
    }
}
