use alloc::string::String;
use alloc::vec::Vec;

use super::{next_step, InitOptions, Stepper};
use crate::curvature::{local_curvature, CurvatureGuard, RunningMinInvL};
use crate::error::Result;
use crate::objective::{evaluate, GradSample, Objective};
use crate::schedules::{AccelSchedule, Relaxation};
use crate::vector::{dot, lerp_into};

/// State of AdaNAG, Simple AdaNAG and AdaNAG-G.
///
/// Step k maps (x_k, z_k, s_k) to
/// y = x_k − s_k g_k, z_{k+1} = z_k − s_k α_k τ_k g_k,
/// x_{k+1} = (1 − 1/τ_{k+1}) y + z_{k+1}/τ_{k+1}.
#[derive(Debug)]
pub struct AccelState {
    name: String,
    schedule: AccelSchedule,
    relax: Option<Relaxation>,
    guard: CurvatureGuard,
    k: usize,
    sample: GradSample,
    z: Vec<f64>,
    s: f64,
    l: f64,
    running: RunningMinInvL,
    anomalies: u64,
    grad_dot_prev: Option<f64>,
}

impl AccelState {
    /// Starts at x₀ = z₀ with L₀ from a seeded perturbation and s₀ = r₀/L₀ unless overridden.
    pub fn init(
        name: impl Into<String>,
        mut schedule: AccelSchedule,
        obj: &dyn Objective,
        x0: &[f64],
        opts: InitOptions,
    ) -> Result<Self> {
        let sample = evaluate(obj, x0)?;
        let l0 = opts.resolve_l0(obj, &sample)?;
        let s = opts.resolve_s0(schedule.r0() / l0)?;
        let mut running = RunningMinInvL::default();
        running.update(l0);
        Ok(AccelState {
            name: name.into(),
            schedule,
            relax: None,
            guard: opts.guard,
            k: 0,
            z: sample.x.clone(),
            sample,
            s,
            l: l0,
            running,
            anomalies: 0,
            grad_dot_prev: None,
        })
    }

    pub fn adanag(obj: &dyn Objective, x0: &[f64], opts: InitOptions) -> Result<Self> {
        Self::init("adanag", AccelSchedule::adanag(), obj, x0, opts)
    }

    pub fn simple(obj: &dyn Objective, x0: &[f64], opts: InitOptions) -> Result<Self> {
        Self::init("simple-adanag", AccelSchedule::simple(), obj, x0, opts)
    }

    /// Uses the relaxed curvature coefficient from step `relax.from` on.
    pub fn with_relaxation(mut self, relax: Relaxation) -> Self {
        self.relax = Some(relax);
        self
    }

    pub fn schedule_mut(&mut self) -> &mut AccelSchedule {
        &mut self.schedule
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    /// min{1/L₀, …, 1/L_k}.
    pub fn running_min_inv_l(&self) -> f64 {
        self.running.s
    }
}

impl Stepper for AccelState {
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
        &self.z
    }

    fn anomalies(&self) -> u64 {
        self.anomalies
    }

    fn grad_dot_prev(&self) -> Option<f64> {
        self.grad_dot_prev
    }

    fn step(&mut self, obj: &dyn Objective) -> Result<()> {
        let k = self.k;
        let (s, g) = (self.s, &self.sample.g);
        let zc = s * self.schedule.alpha(k) * self.schedule.tau(k);
        let t = self.schedule.tau(k + 1);
        let y: Vec<f64> = self.sample.x.iter().zip(g).map(|(x, g)| x - s * g).collect();
        for (z, g) in self.z.iter_mut().zip(g) {
            *z -= zc * g;
        }
        let mut x = alloc::vec![0.0; y.len()];
        lerp_into(&y, &self.z, 1.0 / t, &mut x);
        let next = evaluate(obj, &x)?;
        let est = local_curvature(&self.sample, &next, self.guard)?;
        let growth = self.schedule.growth(k) * s;
        let coef = self.schedule.curvature_coef(k, self.relax);
        self.s = next_step(growth, coef, est.l, &mut self.anomalies);
        self.running.update(est.l);
        self.grad_dot_prev = Some(dot(&next.g, &self.sample.g));
        self.l = est.l;
        self.sample = next;
        self.k += 1;
        Ok(())
    }
}
