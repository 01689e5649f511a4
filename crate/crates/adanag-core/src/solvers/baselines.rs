use alloc::vec::Vec;

use super::Stepper;
use crate::error::{Error, Result};
use crate::objective::{evaluate, GradSample, Objective};
use crate::schedules::ThetaSeq;
use crate::vector::{dot, lerp_into};

fn require_l(obj: &dyn Objective, l: Option<f64>) -> Result<f64> {
    match l.or(obj.known_l()) {
        Some(l) if l > 0.0 && l.is_finite() => Ok(l),
        Some(l) => Err(Error::Usage(alloc::format!("fixed-step methods need L > 0, got {l}"))),
        None => Err(Error::Usage("fixed-step methods need a smoothness constant L".into())),
    }
}

/// Gradient descent with constant step 1/L.
#[derive(Debug, Clone)]
pub struct GdState {
    k: usize,
    sample: GradSample,
    l: f64,
    grad_dot_prev: Option<f64>,
}

impl GdState {
    /// `l` overrides the objective's known L.
    pub fn init(obj: &dyn Objective, x0: &[f64], l: Option<f64>) -> Result<Self> {
        let l = require_l(obj, l)?;
        Ok(GdState { k: 0, sample: evaluate(obj, x0)?, l, grad_dot_prev: None })
    }
}

impl Stepper for GdState {
    fn name(&self) -> &str {
        "gd"
    }

    fn k(&self) -> usize {
        self.k
    }

    fn sample(&self) -> &GradSample {
        &self.sample
    }

    fn step_size(&self) -> f64 {
        1.0 / self.l
    }

    fn curvature(&self) -> f64 {
        self.l
    }

    fn anchor(&self) -> &[f64] {
        &self.sample.x
    }

    fn grad_dot_prev(&self) -> Option<f64> {
        self.grad_dot_prev
    }

    fn step(&mut self, obj: &dyn Objective) -> Result<()> {
        let s = 1.0 / self.l;
        let x: Vec<f64> = self.sample.x.iter().zip(&self.sample.g).map(|(x, g)| x - s * g).collect();
        let next = evaluate(obj, &x)?;
        self.grad_dot_prev = Some(dot(&next.g, &self.sample.g));
        self.sample = next;
        self.k += 1;
        Ok(())
    }
}

/// Nesterov's method with step 1/L:
/// y = x_k − g_k/L, z_{k+1} = z_k − θ_k g_k/L, x_{k+1} = (1 − 1/θ_{k+1}) y + z_{k+1}/θ_{k+1}.
#[derive(Debug, Clone)]
pub struct NagState {
    k: usize,
    sample: GradSample,
    z: Vec<f64>,
    theta: ThetaSeq,
    l: f64,
    grad_dot_prev: Option<f64>,
}

impl NagState {
    pub fn init(obj: &dyn Objective, x0: &[f64], l: Option<f64>) -> Result<Self> {
        let l = require_l(obj, l)?;
        let sample = evaluate(obj, x0)?;
        Ok(NagState { k: 0, z: sample.x.clone(), sample, theta: ThetaSeq::recursive(), l, grad_dot_prev: None })
    }
}

impl Stepper for NagState {
    fn name(&self) -> &str {
        "nag"
    }

    fn k(&self) -> usize {
        self.k
    }

    fn sample(&self) -> &GradSample {
        &self.sample
    }

    fn step_size(&self) -> f64 {
        1.0 / self.l
    }

    fn curvature(&self) -> f64 {
        self.l
    }

    fn anchor(&self) -> &[f64] {
        &self.z
    }

    fn grad_dot_prev(&self) -> Option<f64> {
        self.grad_dot_prev
    }

    fn step(&mut self, obj: &dyn Objective) -> Result<()> {
        let s = 1.0 / self.l;
        let (th, tn) = (self.theta.get(self.k), self.theta.get(self.k + 1));
        let g = &self.sample.g;
        let y: Vec<f64> = self.sample.x.iter().zip(g).map(|(x, g)| x - s * g).collect();
        for (z, g) in self.z.iter_mut().zip(g) {
            *z -= s * th * g;
        }
        let mut x = alloc::vec![0.0; y.len()];
        lerp_into(&y, &self.z, 1.0 / tn, &mut x);
        let next = evaluate(obj, &x)?;
        self.grad_dot_prev = Some(dot(&next.g, &self.sample.g));
        self.sample = next;
        self.k += 1;
        Ok(())
    }
}
