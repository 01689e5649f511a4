//! The certificates that apply to each solver, evaluated on a finished trace.

use adanag_core::lyapunov::*;
use adanag_core::objective::Objective;
use adanag_core::schedules::{AdaNagParams, GKind};
use adanag_core::solvers::Trace;

use crate::error::{BenchError, Result};
use crate::registry::{SolverKind, SolverSpec};

/// grad_tol used when certifying without an explicit tolerance: stops once
/// ‖g‖² reaches the rounding level of f⋆, where f − f⋆ carries no signal.
pub fn certification_grad_tol(obj: &dyn Objective) -> f64 {
    match (obj.known_l(), obj.known_opt()) {
        (Some(l), Some(opt)) => 2.0 * l * 1e4 * f64::EPSILON * opt.f_star.abs(),
        _ => 0.0,
    }
}

/// Per-step descent for the Lyapunov families, plus rate bounds and step
/// floors when the global smoothness constant is known. Closed-form rates
/// and floors assume the default s₀ and no relaxation; other runs get the
/// descent and realized-rate checks only.
pub fn certify(spec: &SolverSpec, obj: &dyn Objective, trace: &Trace) -> Result<Vec<Certificate>> {
    let opt = obj
        .known_opt()
        .filter(|o| o.x_star.is_some())
        .ok_or_else(|| BenchError::Config("certificates need a problem with a known minimizer".into()))?;
    let f_star = opt.f_star;
    let l = obj.known_l();
    let tol = Tolerance::default();
    let rec = &trace.records;
    let default_start = spec.s0.is_none() && spec.relax.is_none();
    let mut out = Vec::new();
    if let Some(mut sched) = spec.kind.accel_schedule() {
        out.extend(check_accel_descent(trace, &mut sched, f_star, l, tol)?);
        let Some(l) = l else { return Ok(out) };
        let r0 = &rec[0];
        let (d0, g0) = (r0.x_dist_sq.unwrap_or(0.0), r0.grad_norm_sq);
        let c = accel_constant(&mut sched, r0.step, d0, g0, l);
        out.extend(check_rate_f(
            trace,
            f_star,
            |k| rec.get(k + 1).map(|n| accel_realized_bound(&mut sched, k, n.step, c)),
            tol,
        ));
        if !default_start {
            return Ok(out);
        }
        match spec.kind {
            SolverKind::AdaNag => {
                out.extend(check_rate_f(trace, f_star, |k| Some(adanag_rate_f(k, l, c)), tol));
                out.extend(check_rate_grad(trace, |k| Some(adanag_rate_grad(k, l, c)), tol));
                let floor = AdaNagParams::recursive().uniform_floor_factor();
                out.extend(check_step_floor(trace, floor, l, 1, |k| sched.alpha(k)));
            }
            SolverKind::Simple => {
                out.extend(check_rate_f(trace, f_star, |k| Some(simple_rate_f(k, l, c)), tol));
                out.extend(check_rate_grad(trace, |k| Some(simple_rate_grad(k, l, c)), tol));
            }
            SolverKind::G(p) => g_checks(&mut out, trace, &GKind::Poly(p), spec, f_star, l, c, tol),
            SolverKind::GSqrt => g_checks(&mut out, trace, &GKind::Sqrt, spec, f_star, l, c, tol),
            _ => {}
        }
    } else if let Some(sched) = spec.kind.gd_schedule() {
        out.extend(check_adagd_descent(trace, &sched, f_star, l, tol)?);
        let Some(l) = l else { return Ok(out) };
        let r0 = &rec[0];
        let c = adagd_constant(&sched, r0.step, r0.x_dist_sq.unwrap_or(0.0), r0.grad_norm_sq, l);
        let mut sum = 0.0;
        out.extend(check_min_f(
            trace,
            f_star,
            |k| {
                sum += rec[k].step;
                Some(adagd_min_f(sum, c))
            },
            tol,
        ));
        if default_start {
            out.extend(check_rate_f(trace, f_star, |k| Some(adagd_rate_f(&sched, k, l, c)), tol));
            out.extend(check_rate_grad(trace, |k| Some(adagd_rate_grad(&sched, k, l, c)), tol));
            out.extend(check_step_floor(trace, sched.r, l, 1, |_| 1.0));
        }
    } else if spec.kind == SolverKind::AcFgm && rec.len() >= 2 {
        let (eta1, eta2, l1) = (rec[0].step, rec[1].step, rec[1].curvature);
        let (d0, g0) = (rec[0].x_dist_sq.unwrap_or(0.0), rec[0].grad_norm_sq);
        let beta = adanag_core::solvers::ACFGM_BETA;
        let mut lhat = 1.0 / (4.0 * (1.0 - beta) * eta1);
        out.extend(check_rate_f(
            trace,
            f_star,
            |k| {
                if k == 0 {
                    return None;
                }
                if rec[k].curvature.is_finite() {
                    lhat = lhat.max(rec[k].curvature);
                }
                Some(acfgm_bound(beta, k, lhat, eta1, eta2, l1, d0, g0))
            },
            tol,
        ));
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn g_checks(
    out: &mut Vec<Certificate>,
    trace: &Trace,
    kind: &GKind,
    spec: &SolverSpec,
    f_star: f64,
    l: f64,
    c: f64,
    tol: Tolerance,
) {
    let rec = &trace.records;
    out.extend(check_rate_f(
        trace,
        f_star,
        |k| rec.get(k + 1).and_then(|n| g_prefactor(kind, k).map(|p| p / n.step * c)),
        tol,
    ));
    if let Some(mut sched) = spec.kind.accel_schedule() {
        let r = match &sched {
            adanag_core::schedules::AccelSchedule::General(g) => g.r,
            _ => return,
        };
        out.extend(check_step_floor(trace, r, l, 1, |k| sched.alpha(k)));
    }
}
