use super::adanag::AdaNagParams;
use super::g::GScheduleSpec;

/// ε-relaxation of the curvature branch, active for k ≥ `from`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Relaxation {
    pub eps: f64,
    pub from: usize,
}

/// The accelerated family y = x − s g, z ← z − s α_k τ_k g, x = (1−1/τ_{k+1})y + z/τ_{k+1}
/// together with the Lyapunov weights (A_k, B_k).
#[derive(Debug, Clone)]
pub enum AccelSchedule {
    /// τ_k = θ_{k+2} with recursive θ.
    AdaNag(AdaNagParams),
    /// τ_k = (k+4)/2 with the closed-form step coefficients of the rational variant.
    Simple(AdaNagParams),
    General(GScheduleSpec),
}

impl AccelSchedule {
    pub fn adanag() -> Self {
        AccelSchedule::AdaNag(AdaNagParams::recursive())
    }

    pub fn simple() -> Self {
        AccelSchedule::Simple(AdaNagParams::rational())
    }

    pub fn general(spec: GScheduleSpec) -> Self {
        AccelSchedule::General(spec)
    }

    pub fn alpha(&mut self, k: usize) -> f64 {
        match self {
            AccelSchedule::AdaNag(p) | AccelSchedule::Simple(p) => p.alpha(k),
            AccelSchedule::General(g) => g.alpha(k as i64),
        }
    }

    pub fn tau(&mut self, k: usize) -> f64 {
        match self {
            AccelSchedule::AdaNag(p) | AccelSchedule::Simple(p) => p.theta(k + 2),
            AccelSchedule::General(g) => g.tau(k as i64),
        }
    }

    /// A_k for k ≥ −1 (A₋₁ = 0).
    pub fn a(&mut self, k: i64) -> f64 {
        if k < 0 {
            return 0.0;
        }
        match self {
            AccelSchedule::General(g) => g.a(k),
            _ => {
                let t = self.tau(k as usize + 1);
                self.alpha(k as usize + 1) * t * (t - 1.0)
            }
        }
    }

    /// B_k for k ≥ −1, with B₋₁ = B₀ + α₀²τ₀².
    pub fn b(&mut self, k: i64) -> f64 {
        match self {
            AccelSchedule::General(g) => g.b(k),
            AccelSchedule::AdaNag(p) | AccelSchedule::Simple(p) => {
                let (a0, t2) = (p.alpha(0), p.theta(2));
                match k {
                    k if k < 0 => (p.tilde_alpha0() + a0) * a0 * t2 * t2,
                    0 => p.tilde_alpha0() * a0 * t2 * t2,
                    k => {
                        let (a, t) = (p.alpha(k as usize), p.theta(k as usize + 2));
                        a * a * t * t
                    }
                }
            }
        }
    }

    /// First-branch coefficient of the step rule at step k.
    pub fn growth(&mut self, k: usize) -> f64 {
        match self {
            AccelSchedule::AdaNag(p) => {
                if k == 0 {
                    let (t2, t3) = (p.theta(2), p.theta(3));
                    p.alpha(0) / p.alpha(1) * t2 / (t3 * (t3 - 1.0))
                } else {
                    p.alpha(k) / p.alpha(k + 1)
                }
            }
            AccelSchedule::Simple(_) => {
                if k == 0 {
                    320.0 / 381.0
                } else {
                    let kf = k as f64;
                    kf * (kf + 3.0) / ((kf + 1.0) * (kf + 2.0))
                }
            }
            AccelSchedule::General(g) => g.growth(k as i64),
        }
    }

    /// Curvature-branch coefficient c_k in s_{k+1} ≤ c_k/L_{k+1}.
    pub fn curvature_coef(&mut self, k: usize, relax: Option<Relaxation>) -> f64 {
        let eps = match relax {
            Some(r) if k >= r.from => r.eps,
            _ => 0.0,
        };
        match self {
            AccelSchedule::AdaNag(p) => {
                if k == 0 {
                    p.floor_factor() / p.alpha(1)
                } else {
                    let (a, an) = (p.alpha(k), p.alpha(k + 1));
                    a * a / (an + a * a * (1.0 + eps))
                }
            }
            AccelSchedule::Simple(_) => {
                if k == 0 {
                    50.0 / 177.0
                } else {
                    let kf = k as f64;
                    kf * kf * (kf + 3.0) / (3.0 * kf * kf * kf + 13.0 * kf * kf + 16.0 * kf + 8.0)
                }
            }
            AccelSchedule::General(g) => g.curvature_coef(k as i64, eps),
        }
    }

    /// s₀·L₀ of the default initial step.
    pub fn r0(&mut self) -> f64 {
        match self {
            AccelSchedule::AdaNag(p) | AccelSchedule::Simple(p) => p.r0(),
            AccelSchedule::General(g) => g.r0(),
        }
    }
}
