use super::theta::{ThetaKind, ThetaSeq};

/// θ and α for AdaNAG (recursive θ) or its rational-θ variant.
#[derive(Debug, Clone)]
pub struct AdaNagParams {
    theta: ThetaSeq,
}

impl AdaNagParams {
    pub fn new(kind: ThetaKind) -> Self {
        AdaNagParams { theta: ThetaSeq::new(kind) }
    }

    pub fn recursive() -> Self {
        Self::new(ThetaKind::Recursive)
    }

    pub fn rational() -> Self {
        Self::new(ThetaKind::Rational)
    }

    pub fn kind(&self) -> ThetaKind {
        self.theta.kind()
    }

    pub fn theta(&mut self, k: usize) -> f64 {
        self.theta.get(k)
    }

    /// α_k = ½(1 − 1/θ_{k+2}) for k ≥ 1; α₀ = (2θ₂/(θ₂−1))·(1/α₃ + 1/α₂² − 1/α₁)⁻¹.
    pub fn alpha(&mut self, k: usize) -> f64 {
        if k == 0 {
            let t2 = self.theta(2);
            let (a1, a2, a3) = (self.alpha(1), self.alpha(2), self.alpha(3));
            2.0 * t2 / (t2 - 1.0) / (1.0 / a3 + 1.0 / (a2 * a2) - 1.0 / a1)
        } else {
            0.5 * (1.0 - 1.0 / self.theta(k + 2))
        }
    }

    /// tildeα₀ = ½(1 − 1/θ₂).
    pub fn tilde_alpha0(&mut self) -> f64 {
        0.5 * (1.0 - 1.0 / self.theta(2))
    }

    /// α₂²α₃/(α₃ + α₂²), the step-floor factor.
    pub fn floor_factor(&mut self) -> f64 {
        let (a2, a3) = (self.alpha(2), self.alpha(3));
        a2 * a2 * a3 / (a3 + a2 * a2)
    }

    /// min{α₂²α₃/(α₃+α₂²), α₁²α₂/(α₂+α₁²)}, a floor on s_kα_kL that holds
    /// for every k ≥ 1 (the second term covers the k = 1 → 2 transition).
    pub fn uniform_floor_factor(&mut self) -> f64 {
        let (a1, a2) = (self.alpha(1), self.alpha(2));
        self.floor_factor().min(a1 * a1 * a2 / (a2 + a1 * a1))
    }

    /// r₀ = θ₃(θ₃−1)/θ₂ · (1/α₀) · α₂²α₃/(α₃+α₂²), so that s₀ = r₀/L₀.
    pub fn r0(&mut self) -> f64 {
        let (t2, t3) = (self.theta(2), self.theta(3));
        t3 * (t3 - 1.0) / t2 / self.alpha(0) * self.floor_factor()
    }

    /// A row of the named constant table.
    pub fn constants(&mut self) -> ConstantRow {
        let (t2, t3) = (self.theta(2), self.theta(3));
        let (a0, a1, a2, a3) = (self.alpha(0), self.alpha(1), self.alpha(2), self.alpha(3));
        let ta0 = self.tilde_alpha0();
        let r0 = self.r0();
        ConstantRow {
            growth0: a0 / a1 * t2 / (t3 * (t3 - 1.0)),
            r0,
            rate: 2.0 * (a3 + a2 * a2) / (a2 * a2 * a3),
            grad_coef: r0 * r0 * a0 * (ta0 + a0) * t2 * t2,
            c_l: 1.0 / (r0 * (ta0 + a0) * t2),
            floor: self.floor_factor(),
            curv0: self.floor_factor() / a1,
        }
    }
}

/// Named constants of one AdaNAG variant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantRow {
    /// (α₀/α₁)·θ₂/(θ₃(θ₃−1)), the k = 0 growth coefficient.
    pub growth0: f64,
    /// s₀·L₀ of the default initial step.
    pub r0: f64,
    /// 2(α₃+α₂²)/(α₂²α₃).
    pub rate: f64,
    /// r₀²α₀(tildeα₀+α₀)θ₂², the ‖∇f(x₀)‖² coefficient in C.
    pub grad_coef: f64,
    /// c_L = 1/(r₀(tildeα₀+α₀)θ₂).
    pub c_l: f64,
    /// α₂²α₃/(α₃+α₂²).
    pub floor: f64,
    /// α₂²α₃/((α₃+α₂²)α₁), the k = 0 curvature coefficient.
    pub curv0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantTable {
    pub adanag: ConstantRow,
    pub simple: ConstantRow,
}

/// Named constants computed from the θ memo.
pub fn adanag_constants() -> ConstantTable {
    ConstantTable { adanag: AdaNagParams::recursive().constants(), simple: AdaNagParams::rational().constants() }
}

/// ε̄_N = (1/α₂² + 1/α₃ − 1/α_N²)·α_{N+1} − 1 with AdaNAG α's.
pub fn epsilon_bar(n: usize) -> crate::Result<f64> {
    if n < 3 {
        return Err(crate::Error::Usage(alloc::format!("ε̄_N needs N ≥ 3, got {n}")));
    }
    let mut p = AdaNagParams::recursive();
    let (a2, a3, an, an1) = (p.alpha(2), p.alpha(3), p.alpha(n), p.alpha(n + 1));
    Ok((1.0 / (a2 * a2) + 1.0 / a3 - 1.0 / (an * an)) * an1 - 1.0)
}
