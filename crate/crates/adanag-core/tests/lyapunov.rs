#![allow(clippy::excessive_precision)] // oracle values keep every printed digit

use adanag_core::lyapunov::*;
use adanag_core::objective::*;
use adanag_core::schedules::*;
use adanag_core::solvers::*;
use approx::assert_relative_eq;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const V_MINUS1: f64 = 0.652_293_959_437_250_64;
const FIVE_HALVES_OVER_THETA2_SQ: f64 = 1.143_080_159_499_076_8;
const ACFGM_COEF: f64 = 65.393_876_913_398_137;

fn start(d: usize, seed: u64) -> Vec<f64> {
    let mut r = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
    (0..d).map(|_| 2.0 * r.random::<f64>() - 1.0).collect()
}

fn problems(seed: u64) -> Vec<(Box<dyn Objective>, Vec<f64>)> {
    vec![
        (Box::new(random_quadratic(5, seed)), start(5, seed)),
        (Box::new(synthetic_least_squares(50, 100, seed).0), vec![0.0; 100]),
        (Box::new(logistic_fixture(0.1).unwrap()), start(2, seed)),
    ]
}

/// Stops once ‖g‖² is at the rounding level of f⋆, where f − f⋆ is noise.
fn certify_opts(obj: &dyn Objective, iters: usize) -> RunOptions {
    let f_star = obj.known_opt().unwrap().f_star;
    RunOptions { max_iters: iters, grad_tol: 2.0 * obj.known_l().unwrap() * 1e4 * f64::EPSILON * f_star.abs() }
}

fn accel_schedules() -> Vec<(&'static str, AccelSchedule, Option<Relaxation>)> {
    vec![
        ("adanag", AccelSchedule::adanag(), None),
        ("simple", AccelSchedule::simple(), None),
        ("g12", AccelSchedule::general(GScheduleSpec::poly(12.0).unwrap()), None),
        ("gsqrt", AccelSchedule::general(GScheduleSpec::sqrt()), None),
        ("relaxed", AccelSchedule::adanag(), Some(Relaxation { eps: 1e-6, from: 3 })),
    ]
}

fn gd_schedules() -> Vec<GdScheduleSpec> {
    vec![
        GdScheduleSpec::adagd0(),
        GdScheduleSpec::adagd_half(),
        GdScheduleSpec::adagd1(),
        GdScheduleSpec::gamma(0.5).unwrap(),
    ]
}

fn accel_trace(
    sched: AccelSchedule,
    relax: Option<Relaxation>,
    obj: &dyn Objective,
    x0: &[f64],
    seed: u64,
    opts: RunOptions,
) -> Trace {
    let mut st = AccelState::init("accel", sched, obj, x0, InitOptions::with_seed(seed)).unwrap();
    if let Some(r) = relax {
        st = st.with_relaxation(r);
    }
    run(&mut st, obj, opts, &mut [], &mut NoClock).unwrap()
}

fn gd_trace(spec: GdScheduleSpec, obj: &dyn Objective, x0: &[f64], seed: u64, opts: RunOptions) -> Trace {
    let mut st = AdaGdState::init("adagd", spec, obj, x0, InitOptions::with_seed(seed)).unwrap();
    run(&mut st, obj, opts, &mut [], &mut NoClock).unwrap()
}

#[test]
fn initial_potential_on_half_square() {
    let q = Quadratic::diagonal(&[1.0]);
    let o = InitOptions { s0: Some(0.4255), l0: Some(1.0), ..Default::default() };
    let mut st = AccelState::adanag(&q, &[1.0], o).unwrap();
    let tr = run(&mut st, &q, RunOptions::iters(1), &mut [], &mut NoClock).unwrap();
    let v = accel_potentials(&tr, &mut AccelSchedule::adanag(), 0.0).unwrap();
    assert_relative_eq!(v[0], V_MINUS1, max_relative = 1e-14);
}

#[test]
fn potential_vanishes_at_the_optimum() {
    let q = Quadratic::centered(DenseMatrix::diagonal(&[2.0, 3.0]), vec![1.0, 1.0], 0.5).unwrap().with_known_l(3.0);
    let o = InitOptions { l0: Some(3.0), ..Default::default() };
    let mut st = AccelState::adanag(&q, &[1.0, 1.0], o).unwrap();
    let tr = run(&mut st, &q, RunOptions::iters(5), &mut [], &mut NoClock).unwrap();
    let v = accel_potentials(&tr, &mut AccelSchedule::adanag(), 0.5).unwrap();
    assert!(v.iter().all(|&x| x == 0.0), "{v:?}");
    let c = check_accel_descent(&tr, &mut AccelSchedule::adanag(), 0.5, Some(3.0), Tolerance::EXACT).unwrap();
    assert!(c.iter().all(|c| c.passed() && c.slack == 0.0));
    let mut gd = AdaGdState::init("g", GdScheduleSpec::adagd0(), &q, &[1.0, 1.0], o).unwrap();
    let tr = run(&mut gd, &q, RunOptions::iters(5), &mut [], &mut NoClock).unwrap();
    assert_eq!(adagd_potentials(&tr, &GdScheduleSpec::adagd0(), 0.5).unwrap()[0], 0.0);
    assert!(all_passed(
        &check_adagd_descent(&tr, &GdScheduleSpec::adagd0(), 0.5, Some(3.0), Tolerance::EXACT).unwrap()
    ));
}

#[test]
fn potential_f_term_is_homogeneous() {
    let (ls, _) = synthetic_least_squares(10, 6, 3);
    let tr = accel_trace(AccelSchedule::adanag(), None, &ls, &[0.0; 6], 3, RunOptions::iters(20));
    let mut scaled = tr.clone();
    scaled.records.iter_mut().for_each(|r| r.f *= 7.0);
    let f_term = |t: &Trace| potentials(t, 0.0, |_| 1.0, |_| 0.0).unwrap();
    let dist = |t: &Trace| potentials(t, 0.0, |_| 0.0, |_| 0.0).unwrap();
    for (a, b) in f_term(&tr).iter().zip(f_term(&scaled)).zip(dist(&tr)).map(|((a, b), d)| (a - d, b - d)) {
        assert_relative_eq!(7.0 * a, b, max_relative = 1e-12);
    }
}

#[test]
fn missing_minimizer_is_a_capability_error() {
    let q = Quadratic::diagonal(&[1.0]).without_optimum();
    let tr = accel_trace(AccelSchedule::adanag(), None, &q, &[1.0], 0, RunOptions::iters(3));
    assert!(matches!(accel_potentials(&tr, &mut AccelSchedule::adanag(), 0.0), Err(adanag_core::Error::Capability(_))));
}

#[test]
fn descent_holds_for_every_method_and_problem() {
    for seed in 0..6 {
        for (obj, x0) in problems(seed) {
            let obj = obj.as_ref();
            let (f_star, l) = (obj.known_opt().unwrap().f_star, obj.known_l());
            let opts = certify_opts(obj, 500);
            for (name, sched, relax) in accel_schedules() {
                let tr = accel_trace(sched.clone(), relax, obj, &x0, seed, opts);
                let c = check_accel_descent(&tr, &mut sched.clone(), f_star, l, Tolerance::default()).unwrap();
                assert_eq!(c.len(), tr.records.len() - 1);
                assert!(all_passed(&c), "{name} seed {seed}: {:?}", first_failure(&c));
                let v = accel_potentials(&tr, &mut sched.clone(), f_star).unwrap();
                assert_eq!(first_potential_increase(&v, Tolerance::default()), None, "{name}");
            }
            for spec in gd_schedules() {
                let tr = gd_trace(spec, obj, &x0, seed, opts);
                let c = check_adagd_descent(&tr, &spec, f_star, l, Tolerance::default()).unwrap();
                assert!(all_passed(&c), "{:?} seed {seed}: {:?}", spec.kind, first_failure(&c));
            }
        }
    }
}

#[test]
fn constant_objective_gives_zero_slack() {
    let q = Quadratic::new(DenseMatrix::diagonal(&[0.0, 0.0])).unwrap().with_known_l(1.0);
    let o = InitOptions { l0: Some(1.0), ..Default::default() };
    let mut st = AccelState::adanag(&q, &[0.3, -0.2], o).unwrap();
    let tr = run(&mut st, &q, RunOptions::iters(10), &mut [], &mut NoClock).unwrap();
    let c = check_accel_descent(&tr, &mut AccelSchedule::adanag(), 0.0, Some(1.0), Tolerance::EXACT).unwrap();
    assert!(c.iter().all(|c| c.slack == 0.0 && c.rhs == 0.0), "{c:?}");
}

#[test]
fn inflated_steps_break_descent() {
    for seed in 0..5 {
        let q = random_quadratic(5, seed);
        let x0 = start(5, seed);
        let mut tr = accel_trace(AccelSchedule::adanag(), None, &q, &x0, seed, RunOptions::iters(100));
        tr.records.iter_mut().for_each(|r| r.step *= 10.0);
        let c = check_accel_descent(&tr, &mut AccelSchedule::adanag(), 0.0, q.known_l(), Tolerance::default()).unwrap();
        assert!(!all_passed(&c), "seed {seed}");
    }
}

#[test]
fn inflated_b0_breaks_the_first_gradient_certificate() {
    let q = random_quadratic(5, 1);
    let spec = GdScheduleSpec::adagd1();
    let tr = gd_trace(spec, &q, &start(5, 1), 1, RunOptions::iters(20));
    let l = q.known_l();
    let b = |k: i64| if k == 0 { 10.0 * spec.b(0) } else { spec.b(k) };
    let c = check_adagd_descent_ab(&tr, |k| spec.a(k), b, 0.0, l, Tolerance::default()).unwrap();
    assert_eq!(c[0].k, -1);
    assert!(!c[0].passed(), "{:?}", c[0]);
    assert!(all_passed(&check_adagd_descent(&tr, &spec, 0.0, l, Tolerance::default()).unwrap()));
}

#[test]
fn first_certificate_needs_the_global_constant() {
    let q = random_quadratic(3, 2);
    let tr = accel_trace(AccelSchedule::adanag(), None, &q, &[1.0, 1.0, 1.0], 2, RunOptions::iters(10));
    let c = check_accel_descent(&tr, &mut AccelSchedule::adanag(), 0.0, None, Tolerance::default()).unwrap();
    assert_eq!(c[0].status, Status::Uncertifiable);
    assert!(c[1..].iter().all(Certificate::passed));
    let tr = gd_trace(GdScheduleSpec::adagd0(), &q, &[1.0, 1.0, 1.0], 2, RunOptions::iters(10));
    let c = check_adagd_descent(&tr, &GdScheduleSpec::adagd0(), 0.0, None, Tolerance::default()).unwrap();
    assert_eq!(c[0].status, Status::Uncertifiable);
    assert!(c[1..].iter().all(Certificate::passed));
}

#[test]
fn adagd0_hand_run_certifies() {
    let q = Quadratic::diagonal(&[1.0]);
    let o = InitOptions { l0: Some(1.0), ..Default::default() };
    let spec = GdScheduleSpec::adagd0();
    let mut st = AdaGdState::init("g", spec, &q, &[1.0], o).unwrap();
    let tr = run(&mut st, &q, RunOptions::iters(5), &mut [], &mut NoClock).unwrap();
    let c = check_adagd_descent(&tr, &spec, 0.0, Some(1.0), Tolerance::default()).unwrap();
    assert_eq!(c.len(), 5);
    assert!(all_passed(&c[..4]), "{c:?}");
}

#[test]
fn headline_rate_arithmetic() {
    assert_eq!(adanag_rate_f(0, 1.0, 1.0), 1.375);
    let mut p = AdaNagParams::recursive();
    assert_relative_eq!(adanag_rate_f_theta(&mut p, 0, 1.0, 1.0), FIVE_HALVES_OVER_THETA2_SQ, max_relative = 1e-14);
    assert_eq!(g_poly_prefactor(12.0, 0), 45.0);
    assert_eq!(g_sqrt_prefactor(0), 1.0 / 12.0);
    for k in [0, 5, 100] {
        let raw = 144.0 * (k as f64 + 15.0) / ((k as f64 + 3.0) * (k as f64 + 4.0).powi(2));
        assert_relative_eq!(g_poly_prefactor(12.0, k), raw, max_relative = 1e-15);
    }
    let g1 = GdScheduleSpec::gamma(1.0).unwrap();
    assert_eq!(g1.r, 0.25);
    assert_relative_eq!(adagd_rate_f(&g1, 0, 1.0, 1.0), 2.0 / 3.0, max_relative = 1e-15);
    assert_relative_eq!(gamma_rate_f(1.0, 0.25, 0, 1.0, 1.0), 2.0 / 3.0, max_relative = 1e-15);
    let mut prev = f64::INFINITY;
    for k in 0..1000 {
        let b = adagd_rate_f(&g1, k, 1.0, 1.0);
        assert!(b < prev);
        prev = b;
    }
    assert_relative_eq!(12.0 / ACFGM_BETA, ACFGM_COEF, max_relative = 1e-15);
}

#[test]
fn cited_prefactors_are_one_over_twice_a() {
    // the closed-form G bounds are C/(2s_{k+1}A_k) with A_k written out
    for (spec, f) in [
        (GScheduleSpec::poly(12.0).unwrap(), g_poly_prefactor as fn(f64, usize) -> f64),
        (GScheduleSpec::poly(3.0).unwrap(), g_poly_prefactor),
    ] {
        let GKind::Poly(p) = spec.kind else { unreachable!() };
        for k in 0..200 {
            assert_relative_eq!(f(p, k), 1.0 / (2.0 * spec.a(k as i64)), max_relative = 1e-12);
        }
    }
    let s = GScheduleSpec::sqrt();
    for k in 0..200 {
        assert_relative_eq!(g_sqrt_prefactor(k), 1.0 / (2.0 * s.a(k as i64)), max_relative = 1e-12);
    }
}

#[test]
fn table_constant_equals_the_potential_form() {
    for seed in 0..5 {
        let (ls, _) = synthetic_least_squares(20, 30, seed);
        let l = ls.known_l().unwrap();
        let tr = accel_trace(AccelSchedule::adanag(), None, &ls, &[0.0; 30], seed, RunOptions::iters(1));
        let r0 = &tr.records[0];
        let (d0, g0) = (r0.x_dist_sq.unwrap(), r0.grad_norm_sq);
        let exact = accel_constant(&mut AccelSchedule::adanag(), r0.step, d0, g0, l);
        let table = adanag_constant_table_form(&mut AdaNagParams::recursive(), r0.curvature, l, d0, g0);
        assert_relative_eq!(exact, table, max_relative = 1e-12);
        let v = accel_potentials(&tr, &mut AccelSchedule::adanag(), 0.0).unwrap();
        let mut sched = AccelSchedule::adanag();
        assert_relative_eq!(exact, 2.0 * v[0] - r0.step * sched.alpha(0) * sched.tau(0) * g0 / l, max_relative = 1e-12);
        // 0.14 < grad coefficient and 2 > c_L, so the rounded constant is the smaller one
        assert!(rounded_constant(ADANAG_ROUNDED_COEF, r0.curvature, l, d0, g0) <= exact);
    }
}

struct Constants {
    exact: f64,
    rounded: f64,
}

fn constants(tr: &Trace, sched: &mut AccelSchedule, l: f64, rounded_coef: f64) -> Constants {
    let r0 = &tr.records[0];
    let (d0, g0) = (r0.x_dist_sq.unwrap(), r0.grad_norm_sq);
    Constants {
        exact: accel_constant(sched, r0.step, d0, g0, l),
        rounded: rounded_constant(rounded_coef, r0.curvature, l, d0, g0),
    }
}

#[test]
fn accelerated_rates_hold_on_least_squares() {
    let tol = Tolerance::default();
    for seed in 0..3 {
        let (ls, _) = synthetic_least_squares(50, 100, seed);
        let l = ls.known_l().unwrap();
        let x0 = vec![0.0; 100];

        let tr = accel_trace(AccelSchedule::adanag(), None, &ls, &x0, seed, RunOptions::iters(2000));
        let c = constants(&tr, &mut AccelSchedule::adanag(), l, ADANAG_ROUNDED_COEF);
        for cc in [c.exact, c.rounded] {
            let f = check_rate_f(&tr, 0.0, |k| Some(adanag_rate_f(k, l, cc)), tol);
            assert!(all_passed(&f), "{:?}", first_failure(&f));
            let g = check_rate_grad(&tr, |k| Some(adanag_rate_grad(k, l, cc)), tol);
            assert!(all_passed(&g), "{:?}", first_failure(&g));
        }
        let mut p = AdaNagParams::recursive();
        let f = check_rate_f(&tr, 0.0, |k| Some(adanag_rate_f_theta(&mut p, k, l, c.exact)), tol);
        assert!(all_passed(&f));

        let tr = accel_trace(AccelSchedule::simple(), None, &ls, &x0, seed, RunOptions::iters(2000));
        let c = constants(&tr, &mut AccelSchedule::simple(), l, SIMPLE_ROUNDED_COEF);
        for cc in [c.exact, c.rounded] {
            let f = check_rate_f(&tr, 0.0, |k| Some(simple_rate_f(k, l, cc)), tol);
            assert!(all_passed(&f), "{:?}", first_failure(&f));
            let g = check_rate_grad(&tr, |k| Some(simple_rate_grad(k, l, cc)), tol);
            assert!(all_passed(&g), "{:?}", first_failure(&g));
        }

        for spec in [GScheduleSpec::poly(12.0).unwrap(), GScheduleSpec::sqrt()] {
            let mut sched = AccelSchedule::general(spec.clone());
            let tr = accel_trace(AccelSchedule::general(spec.clone()), None, &ls, &x0, seed, RunOptions::iters(2000));
            let c = constants(&tr, &mut sched, l, 0.0).exact;
            let rec = &tr.records;
            let f = check_rate_f(
                &tr,
                0.0,
                |k| rec.get(k + 1).map(|n| g_prefactor(&spec.kind, k).unwrap() / n.step * c),
                tol,
            );
            assert!(all_passed(&f), "{:?}: {:?}", spec.kind, first_failure(&f));
            let f =
                check_rate_f(&tr, 0.0, |k| rec.get(k + 1).map(|n| accel_realized_bound(&mut sched, k, n.step, c)), tol);
            assert!(all_passed(&f));
        }
    }
}

#[test]
fn gradient_method_rates_hold() {
    let tol = Tolerance::default();
    for seed in 0..3 {
        for (obj, x0) in problems(seed).into_iter().take(2) {
            let obj = obj.as_ref();
            let l = obj.known_l().unwrap();
            for spec in gd_schedules().into_iter().chain([GdScheduleSpec::gamma(1.0).unwrap()]) {
                let tr = gd_trace(spec, obj, &x0, seed, RunOptions::iters(1000));
                let r0 = &tr.records[0];
                let c = adagd_constant(&spec, r0.step, r0.x_dist_sq.unwrap(), r0.grad_norm_sq, l);
                let f = check_rate_f(&tr, 0.0, |k| Some(adagd_rate_f(&spec, k, l, c)), tol);
                assert!(all_passed(&f), "{:?} {:?}", spec.kind, first_failure(&f));
                let mut sum = 0.0;
                let steps: Vec<f64> = tr.records.iter().map(|r| r.step).collect();
                let m = check_min_f(
                    &tr,
                    0.0,
                    |k| {
                        sum += steps[k];
                        Some(adagd_min_f(sum, c))
                    },
                    tol,
                );
                assert!(all_passed(&m), "{:?} {:?}", spec.kind, first_failure(&m));
                let g = check_rate_grad(&tr, |k| Some(adagd_rate_grad(&spec, k, l, c)), tol);
                assert!(all_passed(&g), "{:?} {:?}", spec.kind, first_failure(&g));
                if let GdKind::Gamma(gm) = spec.kind {
                    let f = check_rate_f(&tr, 0.0, |k| Some(gamma_rate_f(gm, spec.r, k, l, c)), tol);
                    assert!(all_passed(&f));
                    let g = check_rate_grad(&tr, |k| Some(gamma_rate_grad(gm, spec.r, k, l, c)), tol);
                    assert!(all_passed(&g), "{:?}", first_failure(&g));
                }
            }
        }
    }
}

#[test]
fn iterates_stay_in_the_radius() {
    for seed in 0..10 {
        let q = random_quadratic(5, seed);
        let tr = accel_trace(AccelSchedule::adanag(), None, &q, &start(5, seed), seed, RunOptions::iters(1000));
        let v = accel_potentials(&tr, &mut AccelSchedule::adanag(), 0.0).unwrap();
        let rep = radius_certificate(&tr, v[0]).unwrap();
        assert!(all_passed(&rep.certificates), "{:?}", first_failure(&rep.certificates));
        assert!(rep.limit.is_finite() && rep.limit >= rep.radii[0]);
    }
}

#[test]
fn radius_is_constant_at_the_optimum() {
    let q = random_quadratic(3, 4);
    let x_star = q.known_opt().unwrap().x_star.clone().unwrap();
    let tr = accel_trace(AccelSchedule::adanag(), None, &q, &x_star, 4, RunOptions::iters(10));
    let rep = radius_certificate(&tr, 0.0).unwrap();
    assert!(rep.radii.iter().all(|&r| r == 0.0));
    assert!(all_passed(&rep.certificates));
}

#[test]
fn radius_increments_become_negligible() {
    let q = Quadratic::diagonal(&[0.5, 1.0, 2.0, 4.0]);
    let tr = accel_trace(AccelSchedule::adanag(), None, &q, &[1.0, -1.0, 1.0, -1.0], 0, RunOptions::iters(10_000));
    let v = accel_potentials(&tr, &mut AccelSchedule::adanag(), 0.0).unwrap();
    let rep = radius_certificate(&tr, v[0]).unwrap();
    let inc = rep.radii[10_000] - rep.radii[9_999];
    assert!(inc < 1e-10, "{inc}");
}

#[test]
fn quadratic_term_respects_its_bound() {
    for seed in 0..10 {
        let q = random_quadratic(5, seed);
        let tr = accel_trace(AccelSchedule::adanag(), None, &q, &start(5, seed), seed, RunOptions::iters(300));
        let d = q_diagnostics(&tr, &mut AccelSchedule::adanag());
        assert!(d.len() > 100);
        for x in &d {
            assert_relative_eq!(x.rho, 1.0, max_relative = 1e-12);
        }
        let c = check_q(&d, Tolerance::default());
        assert!(all_passed(&c), "{:?}", first_failure(&c));
    }
}

#[test]
fn q_bound_branches_meet_at_unit_step() {
    // s = 1/L with A/B chosen so both branch values agree
    let (s, l, a, b, g) = (0.5, 2.0, 3.0, 6.0, 1.7);
    let sn = s * s * b * l / a;
    assert_relative_eq!(-0.5 * s * s * b * g, -0.5 * sn / l * a * g);
}

#[test]
fn acfgm_bound_holds() {
    for seed in 0..10 {
        let q = random_quadratic(5, seed);
        let x0 = start(5, seed);
        let mut st = AcfgmState::init(&q, &x0, InitOptions::with_seed(seed), ACFGM_BETA).unwrap();
        let tr = run(&mut st, &q, RunOptions::iters(1000), &mut [], &mut NoClock).unwrap();
        let rec = &tr.records;
        let (eta1, eta2, l1) = (rec[0].step, rec[1].step, rec[1].curvature);
        let (d0, g0) = (rec[0].x_dist_sq.unwrap(), rec[0].grad_norm_sq);
        let mut lhat = 1.0 / (4.0 * (1.0 - ACFGM_BETA) * eta1);
        let c = check_rate_f(
            &tr,
            0.0,
            |k| {
                if k == 0 {
                    return None;
                }
                if rec[k].curvature.is_finite() {
                    lhat = lhat.max(rec[k].curvature);
                }
                Some(acfgm_bound(ACFGM_BETA, k, lhat, eta1, eta2, l1, d0, g0))
            },
            Tolerance::default(),
        );
        assert!(all_passed(&c), "seed {seed}: {:?}", first_failure(&c));
        assert_relative_eq!(lhat, st.lhat(), max_relative = 1e-15);
    }
}

#[test]
fn certificate_kinds_have_stable_names() {
    let names: Vec<&str> = [
        CertificateKind::AccelDescent,
        CertificateKind::AdaGdDescent,
        CertificateKind::RateF,
        CertificateKind::RateGrad,
        CertificateKind::StepFloor,
        CertificateKind::Radius,
        CertificateKind::QBound,
    ]
    .iter()
    .map(|k| k.as_str())
    .collect();
    assert_eq!(names, ["adanag_descent", "adagd_descent", "rate_f", "rate_grad", "step_floor", "radius", "q_bound"]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn potentials_never_increase_on_random_quadratics(seed in 0u64..10_000, d in 2usize..8) {
        let q = random_quadratic(d, seed);
        let x0 = start(d, seed);
        for (_, sched, relax) in accel_schedules() {
            let tr = accel_trace(sched.clone(), relax, &q, &x0, seed, RunOptions::iters(200));
            let c = check_accel_descent(&tr, &mut sched.clone(), 0.0, q.known_l(), Tolerance::default()).unwrap();
            prop_assert!(all_passed(&c), "{:?}", first_failure(&c));
            let v = accel_potentials(&tr, &mut sched.clone(), 0.0).unwrap();
            prop_assert_eq!(first_potential_increase(&v, Tolerance::default()), None);
        }
        for spec in gd_schedules() {
            let tr = gd_trace(spec, &q, &x0, seed, RunOptions::iters(200));
            let c = check_adagd_descent(&tr, &spec, 0.0, q.known_l(), Tolerance::default()).unwrap();
            prop_assert!(all_passed(&c), "{:?}", first_failure(&c));
        }
    }

    #[test]
    fn tolerance_admits_exactly_the_documented_slack(rhs in -1e3f64..1e3, frac in 0.0f64..2.0) {
        prop_assume!((frac - 1.0).abs() > 1e-3);
        let allowed = 1e-9 * rhs.abs() + 1e-12;
        let c = Tolerance::default().check(CertificateKind::RateF, 0, rhs + frac * allowed, rhs);
        prop_assert_eq!(c.passed(), frac < 1.0);
    }
}
