//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the lines always reach
//! stdout. The exit status is nonzero when a criterion regresses; a clause
//! that is known not to hold as stated prints FAIL without failing the
//! build, provided its corrected form still holds.

#![allow(clippy::excessive_precision)] // oracle values keep every printed digit

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use adanag_bench::certify::{certification_grad_tol, certify};
use adanag_bench::libsvm::{parse_libsvm_str, read_libsvm, serialize, Dataset};
use adanag_bench::registry::{Knobs, SolverKind, SolverSpec};
use adanag_bench::BenchError;
use adanag_core::lyapunov::*;
use adanag_core::objective::*;
use adanag_core::schedules::*;
use adanag_core::solvers::*;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

// independent high-precision values, see scripts/oracle.py
const ONE_STEP_X1: f64 = 0.569_463_743_588_598_074_876;
const EPS_BAR_3: f64 = 0.398_745_68;
const TWELVE_OVER_BETA: f64 = 65.393_876_913_398_137_178_4;
const ADANAG_CITED_FLOOR: f64 = 0.091_311;

const DESCENT_SOLVERS: &str = "adanag,simple,adanag-g12,adanag-gsqrt,adagd0,adagd-half,adagd1,adagd-gamma";

type Criterion = (&'static str, fn() -> Report);

struct Report {
    /// The criterion as stated.
    pass: bool,
    /// The criterion, or its corrected form when it is known not to hold as stated.
    sound: bool,
    detail: String,
}

impl Report {
    fn plain(pass: bool, detail: String) -> Self {
        Report { pass, sound: pass, detail }
    }
}

fn start(d: usize, seed: u64) -> Vec<f64> {
    (0..d).map(|i| ((seed as f64 + 1.0) * (i as f64 + 0.7)).sin()).collect()
}

fn problems(seed: u64) -> Vec<(&'static str, Box<dyn Objective>, Vec<f64>)> {
    vec![
        ("quadratic", Box::new(random_quadratic(5, seed)), start(5, seed)),
        ("least-squares", Box::new(synthetic_least_squares(50, 100, seed).0), vec![0.0; 100]),
        ("logistic", Box::new(logistic_fixture(0.1).unwrap()), start(2, seed)),
    ]
}

fn specs(names: &str, knobs: &Knobs) -> Vec<SolverSpec> {
    SolverSpec::parse_list(names, knobs).unwrap()
}

fn trace(spec: &SolverSpec, obj: &dyn Objective, x0: &[f64], seed: u64, opts: RunOptions) -> Trace {
    let mut st = spec.build(obj, x0, seed).unwrap();
    run(st.as_mut(), obj, opts, &mut [], &mut NoClock).unwrap()
}

fn descent(spec: &SolverSpec, obj: &dyn Objective, tr: &Trace) -> Vec<Certificate> {
    let f_star = obj.known_opt().unwrap().f_star;
    let (l, tol) = (obj.known_l(), Tolerance::default());
    match (spec.kind.accel_schedule(), spec.kind.gd_schedule()) {
        (Some(mut s), _) => check_accel_descent(tr, &mut s, f_star, l, tol).unwrap(),
        (None, Some(s)) => check_adagd_descent(tr, &s, f_star, l, tol).unwrap(),
        _ => unreachable!("{} has no potential", spec.kind),
    }
}

/// Runs every spec on the descent problem set and tallies per-step certificates.
fn descent_sweep(specs: &[SolverSpec], seeds: u64, iters: usize) -> (usize, Vec<String>) {
    let (mut checked, mut failures) = (0, Vec::new());
    for seed in 0..seeds {
        for (name, obj, x0) in problems(seed) {
            let obj = obj.as_ref();
            let opts = RunOptions { max_iters: iters, grad_tol: certification_grad_tol(obj) };
            for spec in specs {
                let tr = trace(spec, obj, &x0, seed, opts);
                let c = descent(spec, obj, &tr);
                checked += c.len();
                if let Some(f) = first_failure(&c) {
                    failures.push(format!("{} {name} seed {seed} k {}: slack {:e}", spec.name(), f.k, f.slack));
                }
            }
        }
    }
    (checked, failures)
}

fn criterion_1() -> Report {
    let t = adanag_constants();
    let (a, s) = (t.adanag, t.simple);
    let rows = [
        ("adanag growth0", a.growth0, 0.6745, false),
        ("adanag r0", a.r0, 0.4255, false),
        ("adanag rate", a.rate, 21.9032, false),
        ("adanag grad_coef", a.grad_coef, 0.3045, true),
        ("adanag c_L", a.c_l, 1.4424, true),
        ("simple growth0", s.growth0, 0.8399, false),
        ("simple r0", s.r0, 0.3363, false),
        ("simple rate", s.rate, 23.6, false),
        ("simple grad_coef", s.grad_coef, 0.1544, true),
        ("simple c_L", s.c_l, 2.0578, true),
    ];
    let worst = rows.iter().map(|r| (r.1 - r.2).abs()).fold(0.0, f64::max);
    let residuals: Vec<String> = rows
        .iter()
        .filter(|r| r.3 && (r.1 - r.2).abs() > 5e-5)
        .map(|r| format!("{} {:.6} vs {} ({:.1e})", r.0, r.1, r.2, (r.1 - r.2).abs()))
        .collect();
    let note = if residuals.is_empty() { "none".to_string() } else { residuals.join(", ") };
    Report::plain(
        worst <= 5e-4,
        format!("10 table entries, max |diff| {worst:.2e} <= 5e-4; tilde-alpha0 residuals above 5e-5: {note}"),
    )
}

fn criterion_2() -> Report {
    let (checked, failures) = descent_sweep(&specs(DESCENT_SOLVERS, &Knobs::default()), 20, 500);
    Report::plain(
        failures.is_empty() && checked > 0,
        format!(
            "{checked} per-step certificates over 20 seeds x 3 problems x 8 solvers, {} failing {:?}",
            failures.len(),
            failures.first()
        ),
    )
}

fn criterion_3() -> Report {
    let mut checked = 0;
    let mut failures = Vec::new();
    let mut uncovered = Vec::new();
    for seed in 0..3 {
        let (ls, _) = synthetic_least_squares(50, 100, seed);
        let l = ls.known_l().unwrap();
        let x0 = vec![0.0; 100];
        for spec in specs(DESCENT_SOLVERS, &Knobs::default()) {
            let tr = trace(&spec, &ls, &x0, seed, RunOptions::iters(2000));
            let mut rates: Vec<Certificate> = certify(&spec, &ls, &tr)
                .unwrap()
                .into_iter()
                .filter(|c| matches!(c.kind, CertificateKind::RateF | CertificateKind::RateGrad))
                .collect();
            if let SolverKind::Gamma(g) = spec.kind {
                let sched = spec.kind.gd_schedule().unwrap();
                let r0 = &tr.records[0];
                let c = adagd_constant(&sched, r0.step, r0.x_dist_sq.unwrap(), r0.grad_norm_sq, l);
                let tol = Tolerance::default();
                rates.extend(check_rate_f(&tr, 0.0, |k| Some(gamma_rate_f(g, sched.r, k, l, c)), tol));
                rates.extend(check_rate_grad(&tr, |k| Some(gamma_rate_grad(g, sched.r, k, l, c)), tol));
            }
            if rates.is_empty() {
                uncovered.push(spec.name());
            }
            checked += rates.len();
            if let Some(f) = first_failure(&rates) {
                failures.push(format!("{} seed {seed} {} k {}", spec.name(), f.kind.as_str(), f.k));
            }
        }
    }
    Report::plain(
        failures.is_empty() && uncovered.is_empty(),
        format!(
            "{checked} rate checks on least squares 50x100, k <= 2000, 3 seeds; {} violations {:?}; solvers without a rate {:?}",
            failures.len(),
            failures.first(),
            uncovered
        ),
    )
}

fn criterion_4() -> Report {
    let knobs = Knobs::default();
    let mut notes = Vec::new();

    // AdaNAG at the cited factor, and at the factor that holds for every k ≥ 1
    let adanag = specs("adanag", &knobs)[0];
    let exact_floor = AdaNagParams::recursive().floor_factor();
    let h1 = AdaNagParams::recursive().uniform_floor_factor();
    let mut cited_first: Option<(String, i64, f64, f64)> = None;
    let mut exact_first: Option<(String, i64, f64)> = None;
    let mut k1_ok = true;
    let mut uniform_ok = true;
    let mut cases: Vec<(String, Box<dyn Objective>, Vec<f64>)> =
        vec![("f = x^2/2".into(), Box::new(Quadratic::diagonal(&[1.0])), vec![1.0])];
    for seed in 0..5 {
        for (name, obj, x0) in problems(seed) {
            cases.push((format!("{name} seed {seed}"), obj, x0));
        }
    }
    for (name, obj, x0) in &cases {
        let obj = obj.as_ref();
        let l = obj.known_l().unwrap();
        let tr = trace(&adanag, obj, x0, 0, RunOptions::iters(400));
        let mut s = AccelSchedule::adanag();
        let cited = check_step_floor(&tr, ADANAG_CITED_FLOOR, l, 1, |k| s.alpha(k));
        let exact = check_step_floor(&tr, exact_floor, l, 1, |k| s.alpha(k));
        k1_ok &= exact[0].passed();
        if exact_first.is_none() {
            exact_first = first_failure(&exact).map(|f| (name.clone(), f.k, f.rhs * l));
        }
        if cited_first.is_none() {
            if let Some(f) = first_failure(&cited) {
                cited_first = Some((name.clone(), f.k, f.rhs * l, f.lhs * l));
            }
        }
        uniform_ok &= all_passed(&check_step_floor(&tr, h1, l, 1, |k| s.alpha(k)));
    }
    let cited_ok = cited_first.is_none();
    match &cited_first {
        Some((name, k, got, want)) => notes.push(format!(
            "adanag s_k*alpha_k*L >= 0.091311 FAILS on {name} at k = {k} ({got:.9} < {want:.9}); exact factor {exact_floor:.9} holds at k = 1: {k1_ok}; uniform floor {h1:.9} holds for k >= 1: {uniform_ok}"
        )),
        None => notes.push("adanag floor 0.091311 holds".into()),
    }
    if let Some((name, k, got)) = &exact_first {
        notes.push(format!("exact factor {exact_floor:.9} also fails on {name} at k = {k} ({got:.9})"));
    }

    // AdaGD and AdaNAG-G floors
    let mut family_ok = true;
    for seed in 0..5 {
        for (_, obj, x0) in problems(seed) {
            let obj = obj.as_ref();
            let l = obj.known_l().unwrap();
            for spec in specs("adagd0,adagd-half,adagd1,adagd-gamma,adanag-g12,adanag-gsqrt,adanag-g3", &knobs) {
                let tr = trace(&spec, obj, x0.as_slice(), seed, RunOptions::iters(400));
                let c = match (spec.kind.gd_schedule(), spec.kind.accel_schedule()) {
                    (Some(g), _) => check_step_floor(&tr, g.r, l, 1, |_| 1.0),
                    (None, Some(AccelSchedule::General(g))) => check_step_floor(&tr, g.r, l, 1, |k| g.alpha(k as i64)),
                    _ => unreachable!(),
                };
                family_ok &= all_passed(&c);
            }
        }
    }
    notes.push(format!("adagd and adanag-g floors r/L hold: {family_ok}"));

    // window minimum on ½Lx² against 1/3 and against the coefficient it tracks
    let l = 5.0;
    let q = Quadratic::diagonal(&[l]);
    let mut window_ok = true;
    let mut tracking_ok = true;
    for spec in [GScheduleSpec::poly(12.0).unwrap(), GScheduleSpec::sqrt()] {
        let mut st =
            AccelState::init("g", AccelSchedule::general(spec.clone()), &q, &[1.0], InitOptions::with_seed(1)).unwrap();
        let tr = run(&mut st, &q, RunOptions::iters(10_000), &mut [], &mut NoClock).unwrap();
        let window = &tr.records[1000..];
        let lo = window.iter().map(|r| r.step * l).fold(f64::INFINITY, f64::min);
        window_ok &= lo >= (1.0 / 3.0) * (1.0 - 1e-3);
        tracking_ok &= window.iter().all(|r| r.step * l >= spec.curvature_coef(r.k as i64 - 1, 0.0) * (1.0 - 1e-9));
        tracking_ok &= (spec.curvature_coef(100_000_000, 0.0) * 3.0 - 1.0).abs() < 1e-3;
        notes.push(format!(
            "{:?} min s_k*L over [1e3, 1e4] = {lo:.6} vs 1/3*(1-1e-3) = {:.6}",
            spec.kind,
            (1.0 / 3.0) * (1.0 - 1e-3)
        ));
    }
    notes.push(format!("s_k*L >= r_(k-1) in the window and r_k -> 1/3 by k = 1e8: {tracking_ok}"));

    Report {
        pass: cited_ok && family_ok && window_ok,
        sound: k1_ok && uniform_ok && family_ok && tracking_ok,
        detail: notes.join("; "),
    }
}

fn criterion_5() -> Report {
    let mut notes = Vec::new();
    let mut ok = true;
    for g in [
        GScheduleSpec::poly(3.0).unwrap(),
        GScheduleSpec::poly(12.0).unwrap(),
        GScheduleSpec::poly(20.0).unwrap(),
        GScheduleSpec::sqrt(),
    ] {
        let rep = validate_schedule(&g, 100_000);
        ok &= rep.passed();
        if let Some(v) = rep.violation {
            notes.push(format!("{:?} fails {} at k {}", g.kind, v.inequality, v.k));
        }
    }
    let gds = [
        GdScheduleSpec::adagd0(),
        GdScheduleSpec::adagd_half(),
        GdScheduleSpec::adagd1(),
        GdScheduleSpec::gamma(0.5).unwrap(),
        GdScheduleSpec::gamma(1.0).unwrap(),
    ];
    for g in &gds {
        let rep = validate_schedule(g, 100_000);
        ok &= rep.passed();
        if let Some(v) = rep.violation {
            notes.push(format!("{:?} fails {} at k {}", g.kind, v.inequality, v.k));
        }
    }
    let g0 = GdScheduleSpec::adagd0();
    let exact = (1..1000).all(|k| {
        let (rs, rl) = g0.exact_ratios(k).unwrap();
        (*rs.numer(), *rs.denom(), *rl.numer(), *rl.denom()) == (4, 3, 20, 63)
    });
    ok &= exact;
    let gamma1 = GdScheduleSpec::gamma(1.0).unwrap().r;
    ok &= gamma1 == 0.25;
    let p12 = GScheduleSpec::poly(12.0).unwrap().r;
    ok &= (p12 - 27.0 / 12030.0).abs() <= 1e-12;
    notes.insert(
        0,
        format!(
            "4 accelerated + 5 gradient schedules checked to K = 1e5; adagd0 r^s = 4/3, r^L = 20/63 as rationals: {exact}; gamma(1) r = {gamma1}; poly(12) r - 27/12030 = {:.1e}",
            p12 - 27.0 / 12030.0
        ),
    );
    Report::plain(ok, notes.join("; "))
}

fn criterion_6() -> Report {
    let q = Quadratic::diagonal(&[1.0]);
    let o = InitOptions { s0: Some(0.4255), l0: Some(1.0), ..Default::default() };
    let mut st = AccelState::adanag(&q, &[1.0], o).unwrap();
    st.step(&q).unwrap();
    let x1 = st.sample().x[0];
    let mut gd = AdaGdState::init(
        "adagd0",
        GdScheduleSpec::adagd0(),
        &q,
        &[1.0],
        InitOptions { l0: Some(1.0), ..Default::default() },
    )
    .unwrap();
    gd.step(&q).unwrap();
    let s1 = gd.step_size();
    let tie = (s1 - 20.0 / 63.0).abs() <= 4.0 * f64::EPSILON * (20.0 / 63.0);
    Report::plain(
        (x1 - ONE_STEP_X1).abs() <= 1e-6 && tie,
        format!(
            "x1 = {x1:.15} vs oracle {ONE_STEP_X1:.15} (|diff| {:.1e}); adagd0 s1 = {s1:e} vs 20/63 = {:e}",
            (x1 - ONE_STEP_X1).abs(),
            20.0 / 63.0
        ),
    )
}

/// Least-squares slope of the seed-averaged log f against log k over [lo, hi].
fn loglog_slope(traces: &[Trace], lo: usize, hi: usize) -> f64 {
    let pts: Vec<(f64, f64)> = (lo..=hi)
        .map(|k| {
            let mean =
                traces.iter().map(|t| t.records[k].f.max(f64::MIN_POSITIVE).ln()).sum::<f64>() / traces.len() as f64;
            ((k as f64).ln(), mean)
        })
        .collect();
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn criterion_7() -> Report {
    let names = ["adanag", "adanag-g12", "adagd1", "nag"];
    let mut traces: Vec<Vec<Trace>> = vec![Vec::new(); names.len()];
    for seed in 0..5 {
        let (ls, _) = synthetic_least_squares(100, 400, seed);
        let x0 = vec![0.0; 400];
        for (i, n) in names.iter().enumerate() {
            let spec = specs(n, &Knobs::default())[0];
            traces[i].push(trace(&spec, &ls, &x0, seed, RunOptions::iters(3000)));
        }
    }
    let slopes: Vec<f64> = traces.iter().map(|t| loglog_slope(t, 100, 3000)).collect();
    let hit = |t: &Trace| t.records.iter().find(|r| r.f <= 1e-8).map_or(usize::MAX, |r| r.k);
    let g12_first = traces[1].iter().all(|t| hit(t) < usize::MAX);
    let not_later = traces[1].iter().zip(&traces[3]).all(|(g, n)| hit(g) <= hit(n));
    let hits = |i: usize| {
        traces[i]
            .iter()
            .map(|t| if hit(t) == usize::MAX { "none".to_string() } else { hit(t).to_string() })
            .collect::<Vec<_>>()
            .join(",")
    };
    Report::plain(
        slopes[0] <= -1.9 && slopes[1] <= -1.9 && slopes[2] <= -0.9 && g12_first && not_later,
        format!(
            "slopes adanag {:.2}, adanag-g12 {:.2}, adagd1 {:.2} (nag {:.2}); first k with f <= 1e-8 per seed: adanag-g12 [{}], nag [{}]",
            slopes[0],
            slopes[1],
            slopes[2],
            slopes[3],
            hits(1),
            hits(3)
        ),
    )
}

fn criterion_8() -> Report {
    let bar = epsilon_bar(3).unwrap();
    let eps = 1e-6;
    let knobs = Knobs { epsilon: Some(eps), ..Knobs::default() };
    let relaxed = specs("adanag", &knobs);
    let relaxed_ok = relaxed[0].relax.is_some();
    let (checked, failures) = descent_sweep(&relaxed, 20, 500);
    Report::plain(
        (bar - 0.399).abs() <= 2e-3 && (bar - EPS_BAR_3).abs() <= 1e-7 && eps < bar && relaxed_ok && failures.is_empty(),
        format!("eps_bar_3 = {bar:.8} (oracle {EPS_BAR_3}); eps = {eps:e} < eps_bar_3; relaxed descent {checked} certificates, {} failing", failures.len()),
    )
}

fn dataset() -> impl Strategy<Value = Dataset> {
    let value = prop_oneof![-1e6f64..1e6, Just(0.0), Just(1.0), (-300i32..300).prop_map(|e| 1.5 * 10f64.powi(e))];
    let row = proptest::collection::btree_map(0usize..40, value, 0..8);
    (proptest::collection::vec((row, prop_oneof![Just(-1.0), Just(1.0), -5f64..5.0]), 1..12), 0usize..5).prop_map(
        |(rows, extra)| {
            let labels: Vec<f64> = rows.iter().map(|r| r.1).collect();
            let rows: Vec<Vec<(usize, f64)>> = rows.into_iter().map(|r| r.0.into_iter().collect()).collect();
            let width = rows.iter().flatten().map(|(c, _)| c + 1).max().unwrap_or(0) + extra;
            Dataset { a: SparseMatrix::from_rows(width, &rows).unwrap(), labels, n_features: width }
        },
    )
}

fn criterion_9() -> Report {
    let mut runner = TestRunner::new_with_rng(
        Config { failure_persistence: None, ..Config::with_cases(200) },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    let round_trip = runner.run(&dataset(), |ds| {
        let text = serialize(&ds);
        let back = parse_libsvm_str(&text, Some(ds.n_features)).unwrap();
        prop_assert_eq!(&back, &ds);
        prop_assert_eq!(serialize(&back), text);
        Ok(())
    });
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let expected = [
        ("non_increasing_index.svm", 4, 8, "non-increasing index"),
        ("non_numeric_token.svm", 2, 5, "non-numeric token"),
        ("zero_index.svm", 3, 3, "is not positive"),
    ];
    let mut fixtures_ok = true;
    let mut seen = Vec::new();
    for (file, line, col, needle) in expected {
        match read_libsvm(&dir.join(file), None) {
            Err(BenchError::Parse { line: l, column: c, message }) => {
                fixtures_ok &= l == line && c == col && message.contains(needle);
                seen.push(format!("{file} {l}:{c}"));
            }
            other => {
                fixtures_ok = false;
                seen.push(format!("{file} {other:?}"));
            }
        }
    }
    Report::plain(
        round_trip.is_ok() && fixtures_ok,
        format!("200 generated datasets round-trip: {}; malformed fixtures: {}", round_trip.is_ok(), seen.join(", ")),
    )
}

fn criterion_10() -> Report {
    let mut radius_ok = true;
    let mut acfgm_ok = true;
    for seed in 0..10 {
        let q = random_quadratic(5, seed);
        let x0 = start(5, seed);
        let spec = specs("adanag", &Knobs::default())[0];
        let tr = trace(&spec, &q, &x0, seed, RunOptions::iters(1000));
        let v = accel_potentials(&tr, &mut AccelSchedule::adanag(), 0.0).unwrap();
        radius_ok &= all_passed(&radius_certificate(&tr, v[0]).unwrap().certificates);

        let spec = specs("ac-fgm", &Knobs::default())[0];
        let tr = trace(&spec, &q, &x0, seed, RunOptions::iters(1000));
        let c = certify(&spec, &q, &tr).unwrap();
        acfgm_ok &= !c.is_empty() && all_passed(&c);
    }
    let coef = 12.0 / ACFGM_BETA;
    let coef_ok = (coef - 65.39).abs() < 5e-3 && (coef - TWELVE_OVER_BETA).abs() <= 1e-12;
    Report::plain(
        radius_ok && acfgm_ok && coef_ok,
        format!("adanag radius over 10 seeds x 1000 iterations: {radius_ok}; ac-fgm bound: {acfgm_ok}; 12/beta = {coef:.10}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("constant table", criterion_1),
        ("per-step potential descent", criterion_2),
        ("rate bounds on least squares", criterion_3),
        ("step-size floors", criterion_4),
        ("schedule validation", criterion_5),
        ("hand-computed first steps", criterion_6),
        ("empirical order", criterion_7),
        ("relaxed curvature branch", criterion_8),
        ("LIBSVM parser", criterion_9),
        ("boundedness and AC-FGM bound", criterion_10),
    ];
    let mut regressions = Vec::new();
    let mut passed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = f();
        let verdict = if r.pass { "PASS" } else { "FAIL" };
        println!("criterion {}: {verdict} {title} [{:.2}s] {}", i + 1, t.elapsed().as_secs_f64(), r.detail);
        passed += r.pass as usize;
        if !r.sound {
            regressions.push(i + 1);
        }
    }
    println!("{passed}/10 criteria pass as stated");
    if regressions.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("regressed: {regressions:?}");
        ExitCode::FAILURE
    }
}
