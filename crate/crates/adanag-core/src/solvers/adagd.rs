use alloc::string::String;

use super::{next_step, InitOptions, Stepper};
use crate::curvature::{local_curvature, CurvatureGuard};
use crate::error::Result;
use crate::objective::{evaluate, GradSample, Objective};
use crate::schedules::GdScheduleSpec;
use crate::vector::dot;

/// Adaptive gradient descent x_{k+1} = x_k − s_k g_k with
/// s_{k+1} = min{r_k^s s_k, r_k^L / L_{k+1}}.
#[derive(Debug)]
pub struct AdaGdState {
    name: String,
    schedule: GdScheduleSpec,
    guard: CurvatureGuard,
    k: usize,
    sample: GradSample,
    s: f64,
    l: f64,
    anomalies: u64,
    grad_dot_prev: Option<f64>,
}

impl AdaGdState {
    /// s₀ = r·A₀/L₀ unless overridden.
    pub fn init(
        name: impl Into<String>,
        schedule: GdScheduleSpec,
        obj: &dyn Objective,
        x0: &[f64],
        opts: InitOptions,
    ) -> Result<Self> {
        let sample = evaluate(obj, x0)?;
        let l0 = opts.resolve_l0(obj, &sample)?;
        let s = opts.resolve_s0(schedule.r0() / l0)?;
        Ok(AdaGdState {
            name: name.into(),
            schedule,
            guard: opts.guard,
            k: 0,
            sample,
            s,
            l: l0,
            anomalies: 0,
            grad_dot_prev: None,
        })
    }

    pub fn schedule(&self) -> &GdScheduleSpec {
        &self.schedule
    }
}

impl Stepper for AdaGdState {
    fn name(&self) -> &str {
        &self.name
    }

    fn k(&self) -> usize {
        self.k
    }

    fn sample(&self) -> &GradSample {
        &self.sample
    }

    fn step_size(&self) -> f64 {
        self.s
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
        let k = self.k as i64;
        let s = self.s;
        let x: alloc::vec::Vec<f64> = self.sample.x.iter().zip(&self.sample.g).map(|(x, g)| x - s * g).collect();
        let next = evaluate(obj, &x)?;
        let est = local_curvature(&self.sample, &next, self.guard)?;
        self.s = next_step(self.schedule.r_s(k) * s, self.schedule.r_l(k), est.l, &mut self.anomalies);
        self.grad_dot_prev = Some(dot(&next.g, &self.sample.g));
        self.l = est.l;
        self.sample = next;
        self.k += 1;
        Ok(())
    }
}
