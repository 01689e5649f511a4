//! Prints the seed-1 synthetic least-squares problem (m = 50, n = 100), the
//! default AdaNAG s₀ and the 2000-step f trace as JSON, for
//! `scripts/adanag_reference.py`.

use adanag_core::objective::{synthetic_least_squares, Matrix};
use adanag_core::solvers::{run, AccelState, InitOptions, NoClock, RunOptions, Stepper};

fn list(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x:e}")).collect();
    format!("[{}]", items.join(","))
}

fn main() {
    let (ls, _) = synthetic_least_squares(50, 100, 1);
    let x0 = vec![0.0; 100];
    let mut st = AccelState::adanag(&ls, &x0, InitOptions::with_seed(1)).expect("init");
    let s0 = st.step_size();
    let tr = run(&mut st, &ls, RunOptions::iters(2000), &mut [], &mut NoClock).expect("run");
    let Matrix::Dense(a) = ls.matrix() else { unreachable!("synthetic data is dense") };
    let rows: Vec<String> = (0..a.rows).map(|i| list(a.row(i))).collect();
    let f: Vec<f64> = tr.records.iter().map(|r| r.f).collect();
    println!("{{\"A\":[{}],\"b\":{},\"s0\":{s0:e},\"f\":{}}}", rows.join(","), list(ls.rhs()), list(&f));
}
