//! Potential functions and per-iteration certificates over recorded traces.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::schedules::{AccelSchedule, AdaNagParams, GKind, GdScheduleSpec};
use crate::solvers::{Trace, TraceRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CertificateKind {
    AccelDescent,
    AdaGdDescent,
    RateF,
    RateGrad,
    StepFloor,
    Radius,
    QBound,
}

impl CertificateKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CertificateKind::AccelDescent => "adanag_descent",
            CertificateKind::AdaGdDescent => "adagd_descent",
            CertificateKind::RateF => "rate_f",
            CertificateKind::RateGrad => "rate_grad",
            CertificateKind::StepFloor => "step_floor",
            CertificateKind::Radius => "radius",
            CertificateKind::QBound => "q_bound",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// The inequality needs a global smoothness constant the run does not have.
    Uncertifiable,
}

/// A checked inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub k: i64,
    pub lhs: f64,
    pub rhs: f64,
    /// lhs − rhs.
    pub slack: f64,
    pub status: Status,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    fn uncertifiable(kind: CertificateKind, k: i64) -> Self {
        Certificate { kind, k, lhs: f64::NAN, rhs: f64::NAN, slack: f64::NAN, status: Status::Uncertifiable }
    }
}

/// Slack allowed on a passing certificate: rtol·|rhs| + atol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rtol: 1e-9, atol: 1e-12 }
    }
}

impl Tolerance {
    pub const EXACT: Tolerance = Tolerance { rtol: 0.0, atol: 0.0 };

    pub fn check(&self, kind: CertificateKind, k: i64, lhs: f64, rhs: f64) -> Certificate {
        let slack = lhs - rhs;
        let ok = slack <= self.rtol * rhs.abs() + self.atol;
        Certificate { kind, k, lhs, rhs, slack, status: if ok { Status::Pass } else { Status::Fail } }
    }
}

pub fn all_passed(certs: &[Certificate]) -> bool {
    certs.iter().all(Certificate::passed)
}

pub fn first_failure(certs: &[Certificate]) -> Option<&Certificate> {
    certs.iter().find(|c| c.status == Status::Fail)
}

fn anchor(r: &TraceRecord) -> Result<f64> {
    r.anchor_dist_sq.ok_or_else(|| Error::Capability("certificates need a known minimizer x⋆".into()))
}

fn check_nonempty(trace: &Trace) -> Result<()> {
    if trace.records.is_empty() {
        Err(Error::Usage("empty trace".into()))
    } else {
        Ok(())
    }
}

/// min{a, b/l} under 1/0 = ∞, 1/∞ = 0.
fn min_over_l(a: f64, b: f64, l: f64) -> f64 {
    if l == 0.0 {
        a
    } else {
        a.min(b / l)
    }
}

/// V_k = s_{k+1}A_k(f_k − f⋆) + ½s_k²B_k‖g_k‖² + ½‖w_{k+1} − x⋆‖² for
/// k = −1, …, K−1 (index i holds V_{i−1}), where w is the trace anchor and
/// V₋₁ = ½s₀²B₋₁‖g₀‖² + ½‖w₀ − x⋆‖².
pub fn potentials(
    trace: &Trace,
    f_star: f64,
    mut a: impl FnMut(i64) -> f64,
    mut b: impl FnMut(i64) -> f64,
) -> Result<Vec<f64>> {
    check_nonempty(trace)?;
    let rec = &trace.records;
    let r0 = &rec[0];
    let mut v = Vec::with_capacity(rec.len());
    v.push(0.5 * r0.step * r0.step * b(-1) * r0.grad_norm_sq + 0.5 * anchor(r0)?);
    for k in 0..rec.len() - 1 {
        let (r, n) = (&rec[k], &rec[k + 1]);
        let ki = k as i64;
        v.push(n.step * a(ki) * (r.f - f_star) + 0.5 * r.step * r.step * b(ki) * r.grad_norm_sq + 0.5 * anchor(n)?);
    }
    Ok(v)
}

/// Potentials of the accelerated family.
pub fn accel_potentials(trace: &Trace, sched: &mut AccelSchedule, f_star: f64) -> Result<Vec<f64>> {
    let n = trace.records.len() as i64;
    let ab: Vec<(f64, f64)> = (-1..n).map(|k| (sched.a(k), sched.b(k))).collect();
    potentials(trace, f_star, |k| ab[(k + 1) as usize].0, |k| ab[(k + 1) as usize].1)
}

/// Potentials of adaptive gradient descent.
pub fn adagd_potentials(trace: &Trace, sched: &GdScheduleSpec, f_star: f64) -> Result<Vec<f64>> {
    potentials(trace, f_star, |k| sched.a(k), |k| sched.b(k))
}

/// Per-step descent of the accelerated potential:
/// V₀ − V₋₁ ≤ −s₀α₀τ₀‖g₀‖²/(2L) (needs the global `l`), and for k ≥ 0
/// V_{k+1} − V_k ≤ −½min{s_k²B_k, s_{k+1}A_k/L_{k+1}}‖g_k‖².
pub fn check_accel_descent(
    trace: &Trace,
    sched: &mut AccelSchedule,
    f_star: f64,
    l: Option<f64>,
    tol: Tolerance,
) -> Result<Vec<Certificate>> {
    let v = accel_potentials(trace, sched, f_star)?;
    let rec = &trace.records;
    let kind = CertificateKind::AccelDescent;
    let mut out = Vec::with_capacity(v.len());
    if v.len() >= 2 {
        out.push(match l {
            Some(l) => {
                let r0 = &rec[0];
                let rhs = -r0.step * sched.alpha(0) * sched.tau(0) * r0.grad_norm_sq / (2.0 * l);
                tol.check(kind, -1, v[1] - v[0], rhs)
            }
            None => Certificate::uncertifiable(kind, -1),
        });
    }
    for k in 0..v.len().saturating_sub(2) {
        let (r, n) = (&rec[k], &rec[k + 1]);
        let ki = k as i64;
        let m = min_over_l(r.step * r.step * sched.b(ki), n.step * sched.a(ki), n.curvature);
        out.push(tol.check(kind, ki, v[k + 2] - v[k + 1], -0.5 * m * r.grad_norm_sq));
    }
    Ok(out)
}

/// Per-step descent of the gradient-descent potential for k ≥ −1:
/// V_{k+1} − V_k ≤ (s_{k+1}A_k + s_{k+1} − s_{k+2}A_{k+1})(f⋆ − f_{k+1})
///   − s_{k+1}‖g_{k+1}‖²/(2L) − ½s̃_k² min{A_k, B_k}‖g_k‖²,
/// s̃_k = min{s_k, s_{k+1}, 1/L_{k+1}}. Without a global L the k = −1 case is
/// uncertifiable and the L-term is dropped elsewhere (a weaker inequality).
pub fn check_adagd_descent(
    trace: &Trace,
    sched: &GdScheduleSpec,
    f_star: f64,
    l: Option<f64>,
    tol: Tolerance,
) -> Result<Vec<Certificate>> {
    check_adagd_descent_ab(trace, |k| sched.a(k), |k| sched.b(k), f_star, l, tol)
}

/// [`check_adagd_descent`] for arbitrary weights, B₋₁ included.
pub fn check_adagd_descent_ab(
    trace: &Trace,
    mut a: impl FnMut(i64) -> f64,
    mut b: impl FnMut(i64) -> f64,
    f_star: f64,
    l: Option<f64>,
    tol: Tolerance,
) -> Result<Vec<Certificate>> {
    let v = potentials(trace, f_star, &mut a, &mut b)?;
    let rec = &trace.records;
    let kind = CertificateKind::AdaGdDescent;
    let mut out = Vec::with_capacity(v.len());
    // transition V_k → V_{k+1} uses records k, k+1, k+2 (k = −1 reuses record 0)
    for k in -1..(rec.len() as i64 - 2) {
        if k == -1 && l.is_none() {
            out.push(Certificate::uncertifiable(kind, -1));
            continue;
        }
        let r = &rec[k.max(0) as usize];
        let (n, nn) = (&rec[(k + 1) as usize], &rec[(k + 2) as usize]);
        let head = (n.step * a(k) + n.step - nn.step * a(k + 1)) * (f_star - n.f);
        let cocoercive = l.map_or(0.0, |l| n.step * n.grad_norm_sq / (2.0 * l));
        let tail = if k < 0 {
            0.0
        } else {
            let st = min_over_l(r.step.min(n.step), 1.0, n.curvature);
            0.5 * st * st * a(k).min(b(k)) * r.grad_norm_sq
        };
        let idx = (k + 1) as usize;
        out.push(tol.check(kind, k, v[idx + 1] - v[idx], head - cocoercive - tail));
    }
    Ok(out)
}

/// The potentials of a passing run should be nonincreasing; returns the
/// first k with V_{k+1} > V_k beyond `tol`.
pub fn first_potential_increase(v: &[f64], tol: Tolerance) -> Option<i64> {
    v.windows(2).position(|w| w[1] - w[0] > tol.rtol * w[0].abs() + tol.atol).map(|i| i as i64 - 1)
}

/// Exact constant C = 2V₋₁ − s₀α₀τ₀‖g₀‖²/L of the accelerated family,
/// ‖x₀−x⋆‖² + (s₀²B₋₁ − s₀α₀τ₀/L)‖g₀‖².
pub fn accel_constant(sched: &mut AccelSchedule, s0: f64, d0_sq: f64, g0_sq: f64, l: f64) -> f64 {
    d0_sq + (s0 * s0 * sched.b(-1) - s0 * sched.alpha(0) * sched.tau(0) / l) * g0_sq
}

/// C = ‖x₀−x⋆‖² + r₀²α₀(tildeα₀+α₀)θ₂²·(1/L₀)(1/L₀ − c_L/L)‖g₀‖², valid for s₀ = r₀/L₀.
pub fn adanag_constant_table_form(params: &mut AdaNagParams, l0: f64, l: f64, d0_sq: f64, g0_sq: f64) -> f64 {
    let row = params.constants();
    d0_sq + row.grad_coef / l0 * (1.0 / l0 - row.c_l / l) * g0_sq
}

/// ‖x₀−x⋆‖² + c·(1/L₀)(1/L₀ − 2/L)‖g₀‖² with the two-digit c of the headline statements.
pub fn rounded_constant(c: f64, l0: f64, l: f64, d0_sq: f64, g0_sq: f64) -> f64 {
    d0_sq + c / l0 * (1.0 / l0 - 2.0 / l) * g0_sq
}

pub const ADANAG_ROUNDED_COEF: f64 = 0.14;
pub const SIMPLE_ROUNDED_COEF: f64 = 0.15;

/// C = ‖x₀−x⋆‖² + (B₀+1)s₀²‖g₀‖² − (s₀/L)‖g₀‖².
pub fn adagd_constant(sched: &GdScheduleSpec, s0: f64, d0_sq: f64, g0_sq: f64, l: f64) -> f64 {
    d0_sq + (sched.b(-1) * s0 * s0 - s0 / l) * g0_sq
}

/// 22L/(k+4)²·C.
pub fn adanag_rate_f(k: usize, l: f64, c: f64) -> f64 {
    let k = k as f64;
    22.0 * l / ((k + 4.0) * (k + 4.0)) * c
}

/// 5.5L/θ²_{k+2}·C.
pub fn adanag_rate_f_theta(params: &mut AdaNagParams, k: usize, l: f64, c: f64) -> f64 {
    let t = params.theta(k + 2);
    5.5 * l / (t * t) * c
}

/// 1440L²/(k(k²+12k+47))·C, k ≥ 1.
pub fn adanag_rate_grad(k: usize, l: f64, c: f64) -> f64 {
    let k = k as f64;
    1440.0 * l * l / (k * (k * k + 12.0 * k + 47.0)) * c
}

/// 24L/((k+3)(k+5))·C.
pub fn simple_rate_f(k: usize, l: f64, c: f64) -> f64 {
    let k = k as f64;
    24.0 * l / ((k + 3.0) * (k + 5.0)) * c
}

/// 1671L²/(k(k²+10k+33))·C, k ≥ 1.
pub fn simple_rate_grad(k: usize, l: f64, c: f64) -> f64 {
    let k = k as f64;
    1671.0 * l * l / (k * (k * k + 10.0 * k + 33.0)) * c
}

/// C/(2s_{k+1}A_k) with the realized step s_{k+1}.
pub fn accel_realized_bound(sched: &mut AccelSchedule, k: usize, s_next: f64, c: f64) -> f64 {
    c / (2.0 * s_next * sched.a(k as i64))
}

/// p²(k+p+3)/((k+3)(k+4)²); multiplies C/s_{k+1} for the poly(p) schedule.
pub fn g_poly_prefactor(p: f64, k: usize) -> f64 {
    let k = k as f64;
    p * p * (k + p + 3.0) / ((k + 3.0) * (k + 4.0) * (k + 4.0))
}

/// 1/(4(k+4−√(k+4)/2)); multiplies C/s_{k+1} for the square-root schedule.
pub fn g_sqrt_prefactor(k: usize) -> f64 {
    let k = k as f64;
    1.0 / (4.0 * (k + 4.0 - 0.5 * libm::sqrt(k + 4.0)))
}

/// Closed-form prefactor of a built-in G schedule, if it has one.
pub fn g_prefactor(kind: &GKind, k: usize) -> Option<f64> {
    match kind {
        GKind::Poly(p) => Some(g_poly_prefactor(*p, k)),
        GKind::Sqrt => Some(g_sqrt_prefactor(k)),
        GKind::Custom { .. } => None,
    }
}

/// L/(2rA_k)·C.
pub fn adagd_rate_f(sched: &GdScheduleSpec, k: usize, l: f64, c: f64) -> f64 {
    l / (2.0 * sched.r * sched.a(k as i64)) * c
}

/// C/(2Σ_{i=1}^{k} s_i), the minimum-selection bound on f − f⋆.
pub fn adagd_min_f(step_sum: f64, c: f64) -> f64 {
    c / (2.0 * step_sum)
}

/// L²/(rΣ_{i=1}^{k}(1 + r·min{A_i, B_i}))·C, k ≥ 1.
pub fn adagd_rate_grad(sched: &GdScheduleSpec, k: usize, l: f64, c: f64) -> f64 {
    let r = sched.r;
    let sum: f64 = (1..=k as i64).map(|i| 1.0 + r * sched.a(i).min(sched.b(i))).sum();
    l * l / (r * sum) * c
}

/// (L/(2r))/(γ(k+1)+2)·C for A_k = γ(k+1)+2.
pub fn gamma_rate_f(gamma: f64, r: f64, k: usize, l: f64, c: f64) -> f64 {
    l / (2.0 * r) / (gamma * (k as f64 + 1.0) + 2.0) * c
}

/// (2L²/r)/(k(rγ(k+3)+2))·C, k ≥ 1.
pub fn gamma_rate_grad(gamma: f64, r: f64, k: usize, l: f64, c: f64) -> f64 {
    let k = k as f64;
    2.0 * l * l / r / (k * (r * gamma * (k + 3.0) + 2.0)) * c
}

/// (12/β)L̂_k/((k+1)(k+2))·(‖x₀−x⋆‖² + β(5η₂L₁/2 − η₂/η₁)η₁²‖g₀‖²).
#[allow(clippy::too_many_arguments)]
pub fn acfgm_bound(beta: f64, k: usize, lhat: f64, eta1: f64, eta2: f64, l1: f64, d0_sq: f64, g0_sq: f64) -> f64 {
    let k = k as f64;
    let c = d0_sq + beta * (2.5 * eta2 * l1 - eta2 / eta1) * eta1 * eta1 * g0_sq;
    12.0 / beta * lhat / ((k + 1.0) * (k + 2.0)) * c
}

/// f_k − f⋆ ≤ bound(k) for every record where `bound` returns a value.
pub fn check_rate_f(
    trace: &Trace,
    f_star: f64,
    mut bound: impl FnMut(usize) -> Option<f64>,
    tol: Tolerance,
) -> Vec<Certificate> {
    trace
        .records
        .iter()
        .filter_map(|r| bound(r.k).map(|b| tol.check(CertificateKind::RateF, r.k as i64, r.f - f_star, b)))
        .collect()
}

/// min_{1≤i≤k}(f_i − f⋆) ≤ bound(k) for k ≥ 1.
pub fn check_min_f(
    trace: &Trace,
    f_star: f64,
    mut bound: impl FnMut(usize) -> Option<f64>,
    tol: Tolerance,
) -> Vec<Certificate> {
    let mut best = f64::INFINITY;
    let mut out = Vec::new();
    for r in trace.records.iter().skip(1) {
        best = best.min(r.f - f_star);
        if let Some(b) = bound(r.k) {
            out.push(tol.check(CertificateKind::RateF, r.k as i64, best, b));
        }
    }
    out
}

/// min_{1≤i≤k}‖g_i‖² ≤ bound(k) for k ≥ 1.
pub fn check_rate_grad(trace: &Trace, mut bound: impl FnMut(usize) -> Option<f64>, tol: Tolerance) -> Vec<Certificate> {
    let mut best = f64::INFINITY;
    let mut out = Vec::new();
    for r in trace.records.iter().skip(1) {
        best = best.min(r.grad_norm_sq);
        if let Some(b) = bound(r.k) {
            out.push(tol.check(CertificateKind::RateGrad, r.k as i64, best, b));
        }
    }
    out
}

/// Relative margin granted to step floors.
pub const STEP_FLOOR_RTOL: f64 = 1e-9;

/// floor/L·(1 − 1e-9) ≤ weight(k)·s_k for k ≥ `from`.
pub fn check_step_floor(
    trace: &Trace,
    floor: f64,
    l: f64,
    from: usize,
    mut weight: impl FnMut(usize) -> f64,
) -> Vec<Certificate> {
    let lo = floor / l * (1.0 - STEP_FLOOR_RTOL);
    trace
        .records
        .iter()
        .filter(|r| r.k >= from)
        .map(|r| Tolerance::EXACT.check(CertificateKind::StepFloor, r.k as i64, lo, weight(r.k) * r.step))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadiusReport {
    /// R_k = √(2V₋₁) + Σ_{i<k} s_i‖g_i‖ for every record.
    pub radii: Vec<f64>,
    pub certificates: Vec<Certificate>,
    /// The last radius, an estimate of lim R_k.
    pub limit: f64,
}

/// ‖x_k − x⋆‖ ≤ R_k(1 + 1e-9) with `v_minus1` = V₋₁.
pub fn radius_certificate(trace: &Trace, v_minus1: f64) -> Result<RadiusReport> {
    check_nonempty(trace)?;
    let mut radius = libm::sqrt(2.0 * v_minus1);
    let mut radii = Vec::with_capacity(trace.records.len());
    let mut certificates = Vec::with_capacity(trace.records.len());
    for r in &trace.records {
        let d = r.x_dist_sq.ok_or_else(|| Error::Capability("radius needs a known minimizer x⋆".into()))?;
        radii.push(radius);
        certificates.push(Tolerance::EXACT.check(
            CertificateKind::Radius,
            r.k as i64,
            libm::sqrt(d),
            radius * (1.0 + STEP_FLOOR_RTOL),
        ));
        radius += r.step * libm::sqrt(r.grad_norm_sq);
    }
    let limit = *radii.last().expect("nonempty");
    Ok(RadiusReport { radii, certificates, limit })
}

/// Q_k and its bound Q̄_k for the transition x_k → x_{k+1}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QDiagnostic {
    pub k: usize,
    pub q: f64,
    pub q_bar: f64,
    /// ρ_k = (B_{k+1} + α²_{k+1}τ²_{k+1})/A_k.
    pub rho: f64,
}

/// Evaluates Q_k for every transition with finite positive L_{k+1}.
pub fn q_diagnostics(trace: &Trace, sched: &mut AccelSchedule) -> Vec<QDiagnostic> {
    let rec = &trace.records;
    let mut out = Vec::new();
    for k in 0..rec.len().saturating_sub(2) {
        let (r, n) = (&rec[k], &rec[k + 1]);
        let l = n.curvature;
        let Some(dot) = n.grad_dot_prev else { continue };
        if !(l > 0.0 && l.is_finite()) {
            continue;
        }
        let ki = k as i64;
        let (a, b, bn) = (sched.a(ki), sched.b(ki), sched.b(ki + 1));
        let (an, tn) = (sched.alpha(k + 1), sched.tau(k + 1));
        let rho = (bn + an * an * tn * tn) / a;
        let (s, sn) = (r.step, n.step);
        let bracket = (1.0 - rho * sn * l) * n.grad_norm_sq - 2.0 * (1.0 - s * l) * dot
            + (1.0 + b / a * s * s / sn * l) * r.grad_norm_sq;
        let q = -sn * a / (2.0 * l) * bracket;
        let q_bar = if s * l <= 1.0 { -0.5 * s * s * b * r.grad_norm_sq } else { -0.5 * sn / l * a * r.grad_norm_sq };
        out.push(QDiagnostic { k, q, q_bar, rho });
    }
    out
}

/// Q_k ≤ Q̄_k for every diagnostic.
pub fn check_q(diags: &[QDiagnostic], tol: Tolerance) -> Vec<Certificate> {
    diags.iter().map(|d| tol.check(CertificateKind::QBound, d.k as i64, d.q, d.q_bar)).collect()
}
