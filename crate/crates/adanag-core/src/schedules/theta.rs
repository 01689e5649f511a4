use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaKind {
    /// θ₀ = 1, θ_k = ½(1 + √(1 + 4θ²_{k−1})).
    Recursive,
    /// θ_k = (k + 2)/2.
    Rational,
}

/// The θ sequence with a lazily grown memo.
#[derive(Debug, Clone)]
pub struct ThetaSeq {
    kind: ThetaKind,
    memo: Vec<f64>,
}

impl ThetaSeq {
    pub fn new(kind: ThetaKind) -> Self {
        ThetaSeq { kind, memo: vec![1.0] }
    }

    pub fn recursive() -> Self {
        Self::new(ThetaKind::Recursive)
    }

    pub fn rational() -> Self {
        Self::new(ThetaKind::Rational)
    }

    pub fn kind(&self) -> ThetaKind {
        self.kind
    }

    pub fn get(&mut self, k: usize) -> f64 {
        match self.kind {
            ThetaKind::Rational => (k as f64 + 2.0) / 2.0,
            ThetaKind::Recursive => {
                while self.memo.len() <= k {
                    let t = *self.memo.last().expect("memo starts at θ₀");
                    self.memo.push(0.5 * (1.0 + libm::sqrt(1.0 + 4.0 * t * t)));
                }
                self.memo[k]
            }
        }
    }
}
