use alloc::vec::Vec;

use super::{next_step, InitOptions, Stepper};
use crate::curvature::{local_curvature, CurvatureGuard};
use crate::error::{Error, Result};
use crate::objective::{evaluate, GradSample, Objective};
use crate::vector::dot;

/// β = 1 − √6/3.
pub const ACFGM_BETA: f64 = 0.183_503_419_072_274_08;

/// Auto-conditioned fast gradient method without the line-search adjustment:
/// z_{k+1} = y_k − η_{k+1} g_k, y_{k+1} = (1−β_{k+1}) y_k + β_{k+1} z_{k+1},
/// x_{k+1} = (τ_{k+1} x_k + z_{k+1})/(1 + τ_{k+1}).
#[derive(Debug, Clone)]
pub struct AcfgmState {
    guard: CurvatureGuard,
    beta: f64,
    k: usize,
    sample: GradSample,
    y: Vec<f64>,
    /// η_{k+1}, the step applied from x_k.
    eta: f64,
    eta1: f64,
    l: f64,
    lhat: f64,
    anomalies: u64,
    grad_dot_prev: Option<f64>,
}

impl AcfgmState {
    /// η₁ = 2/(5L₀) unless `opts.s0` is set.
    pub fn init(obj: &dyn Objective, x0: &[f64], opts: InitOptions, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta <= ACFGM_BETA + 1e-15) {
            return Err(Error::Usage(alloc::format!("β must lie in (0, 1 − √6/3], got {beta}")));
        }
        let sample = evaluate(obj, x0)?;
        let l0 = opts.resolve_l0(obj, &sample)?;
        let eta1 = opts.resolve_s0(2.0 / (5.0 * l0))?;
        Ok(AcfgmState {
            guard: opts.guard,
            beta,
            k: 0,
            y: sample.x.clone(),
            sample,
            eta: eta1,
            eta1,
            l: l0,
            lhat: 1.0 / (4.0 * (1.0 - beta) * eta1),
            anomalies: 0,
            grad_dot_prev: None,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn eta1(&self) -> f64 {
        self.eta1
    }

    /// L̂_k = max{1/(4(1−β)η₁), L₁, …, L_k}.
    pub fn lhat(&self) -> f64 {
        self.lhat
    }
}

impl Stepper for AcfgmState {
    fn name(&self) -> &str {
        "ac-fgm"
    }

    fn k(&self) -> usize {
        self.k
    }

    fn sample(&self) -> &GradSample {
        &self.sample
    }

    fn step_size(&self) -> f64 {
        self.eta
    }

    fn curvature(&self) -> f64 {
        self.l
    }

    fn anchor(&self) -> &[f64] {
        &self.sample.x
    }

    fn anomalies(&self) -> u64 {
        self.anomalies
    }

    fn grad_dot_prev(&self) -> Option<f64> {
        self.grad_dot_prev
    }

    fn step(&mut self, obj: &dyn Objective) -> Result<()> {
        let j = self.k + 1;
        let (beta, tau) = if j == 1 { (0.0, 0.0) } else { (self.beta, j as f64 / 2.0) };
        let eta = self.eta;
        let z: Vec<f64> = self.y.iter().zip(&self.sample.g).map(|(y, g)| y - eta * g).collect();
        for (y, z) in self.y.iter_mut().zip(&z) {
            *y = (1.0 - beta) * *y + beta * z;
        }
        let x: Vec<f64> = self.sample.x.iter().zip(&z).map(|(x, z)| (tau * x + z) / (1.0 + tau)).collect();
        let next = evaluate(obj, &x)?;
        let l = local_curvature(&self.sample, &next, self.guard)?.l;
        // η_{j+1} from L_j
        let (growth, coef) = match j + 1 {
            2 => ((1.0 - self.beta) * self.eta1, 0.25),
            3 => (self.eta, 0.25),
            n => (n as f64 / (n as f64 - 1.0) * self.eta, (n as f64 - 1.0) / 8.0),
        };
        self.eta = next_step(growth, coef, l, &mut self.anomalies);
        if l.is_finite() {
            self.lhat = self.lhat.max(l);
        }
        self.grad_dot_prev = Some(dot(&next.g, &self.sample.g));
        self.l = l;
        self.sample = next;
        self.k = j;
        Ok(())
    }
}
