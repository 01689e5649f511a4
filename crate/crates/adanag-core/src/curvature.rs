//! Local curvature estimates, the initial guess L₀ and the running minimum of 1/L.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::objective::{evaluate, GradSample, Objective};
use crate::vector::{dist_sq, dot, first_non_finite, norm};

/// Rounding guard for the Bregman denominator.
///
/// The denominator is declared zero when it is within `tol · scale` of zero,
/// with `scale = |f_prev| + |f_curr| + ‖g_curr‖‖x_prev − x_curr‖ + abs_scale`.
/// The default `abs_scale` puts that floor a few ulps above the subnormal
/// range, where values and gradients no longer carry relative precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureGuard {
    pub tol: f64,
    pub abs_scale: f64,
}

pub const SUBNORMAL_SCALE: f64 = f64::MIN_POSITIVE / f64::EPSILON;

impl Default for CurvatureGuard {
    fn default() -> Self {
        CurvatureGuard { tol: 4.0 * f64::EPSILON, abs_scale: SUBNORMAL_SCALE }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureEstimate {
    /// Nonnegative estimate, or `+∞` for the rounding sentinel.
    pub l: f64,
    pub numer: f64,
    pub denom: f64,
}

impl CurvatureEstimate {
    /// Nonzero gradient change over a vanishing Bregman gap. Impossible in
    /// exact arithmetic for convex f, so it flags a rounding artifact.
    pub fn is_sentinel(&self) -> bool {
        self.l == f64::INFINITY
    }
}

/// L = −½‖g_curr − g_prev‖² / (f_curr − f_prev + ⟨g_curr, x_prev − x_curr⟩).
pub fn local_curvature(prev: &GradSample, curr: &GradSample, guard: CurvatureGuard) -> Result<CurvatureEstimate> {
    for s in [prev, curr] {
        if !s.f.is_finite() {
            return Err(Error::NonFinite { what: "sample value", index: 0 });
        }
        if let Some(i) = first_non_finite(&s.g) {
            return Err(Error::NonFinite { what: "sample gradient", index: i });
        }
    }
    let numer = 0.5 * dist_sq(&curr.g, &prev.g);
    let dx: Vec<f64> = prev.x.iter().zip(&curr.x).map(|(a, b)| a - b).collect();
    let denom = curr.f - prev.f + dot(&curr.g, &dx);
    let scale = prev.f.abs() + curr.f.abs() + norm(&curr.g) * norm(&dx) + guard.abs_scale;
    let l = if denom >= -guard.tol * scale {
        let gscale = dot(&prev.g, &prev.g) + dot(&curr.g, &curr.g) + guard.abs_scale;
        if numer <= guard.tol * gscale {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        -numer / denom
    };
    Ok(CurvatureEstimate { l, numer, denom })
}

/// x̃₀ = x₀ + u with u iid Uniform[0,1) from a ChaCha8 stream keyed by `seed`.
pub fn perturb_point(x0: &[f64], seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    x0.iter().map(|x| x + rng.random::<f64>()).collect()
}

pub const INITIAL_CURVATURE_RETRIES: u64 = 8;

/// L₀ = ‖∇f(x₀) − ∇f(x̃₀)‖ / ‖x₀ − x̃₀‖ for a given perturbed point.
pub fn initial_curvature(obj: &dyn Objective, x0: &GradSample, x_tilde: &[f64]) -> Result<f64> {
    let t = evaluate(obj, x_tilde)?;
    let dx = libm::sqrt(dist_sq(&x0.x, &t.x));
    if dx == 0.0 {
        return Err(Error::Usage("x̃₀ must differ from x₀".into()));
    }
    Ok(libm::sqrt(dist_sq(&x0.g, &t.g)) / dx)
}

/// L₀ from seeded perturbations, retrying with fresh seeds when the gradients
/// coincide (up to [`INITIAL_CURVATURE_RETRIES`] retries).
pub fn initial_curvature_seeded(obj: &dyn Objective, x0: &GradSample, seed: u64) -> Result<f64> {
    for attempt in 0..=INITIAL_CURVATURE_RETRIES {
        let xt = perturb_point(&x0.x, seed.wrapping_add(attempt));
        let l0 = initial_curvature(obj, x0, &xt)?;
        if l0 > 0.0 && l0.is_finite() {
            return Ok(l0);
        }
    }
    Err(Error::Init(alloc::format!(
        "gradient did not change under {} perturbations (flat region); supply L₀ explicitly",
        INITIAL_CURVATURE_RETRIES + 1
    )))
}

/// S_k = min{1/L₀, …, 1/L_k} with 1/0 = +∞ and 1/∞ = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunningMinInvL {
    pub s: f64,
}

impl Default for RunningMinInvL {
    fn default() -> Self {
        RunningMinInvL { s: f64::INFINITY }
    }
}

impl RunningMinInvL {
    pub fn update(&mut self, l_new: f64) -> f64 {
        self.s = update_running_min(self.s, l_new);
        self.s
    }
}

pub fn update_running_min(s: f64, l_new: f64) -> f64 {
    s.min(inv(l_new))
}

/// 1/L with 1/0 = ∞ and 1/∞ = 0.
pub fn inv(l: f64) -> f64 {
    if l == 0.0 {
        f64::INFINITY
    } else if l == f64::INFINITY {
        0.0
    } else {
        1.0 / l
    }
}
