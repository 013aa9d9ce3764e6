//! Monte-Carlo calibration of the degree-split estimator.
//!
//! `cargo run --release --example calibrate_estimator -- [n] [a] [b] [rho] [seeds]`
//! prints one line per seed and per form, then the mean error and the
//! fraction of seeds within the pinned acceptance tolerance.

use dpsbm::privacy::{param_estimate_with, EstimatorForm};
use dpsbm::sbm::generate;
use dpsbm::SbmParams;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let get = |k: usize, d: f64| args.get(k).and_then(|s| s.parse().ok()).unwrap_or(d);
    let n = get(0, 4000.0) as usize;
    let (a, b, rho) = (get(1, 20.0), get(2, 2.0), get(3, 0.3));
    let seeds = get(4, 20.0) as u64;
    let params = SbmParams::Basbm { n, a, b, rho };
    println!("n = {n}, a = {a}, b = {b}, rho = {rho}, {seeds} seeds");
    for form in [EstimatorForm::ConditionalMean, EstimatorForm::Literal] {
        let (mut ea, mut eb, mut within, mut degenerate) = (0.0, 0.0, 0, 0);
        for seed in 0..seeds {
            let (g, _) = generate(&params, seed).expect("valid parameters");
            match param_estimate_with(&g, form) {
                Ok(e) => {
                    println!("{form:?} seed {seed}: a {:.3} b {:.3} rho {:.4}", e.a, e.b, e.rho);
                    ea += e.a - a;
                    eb += e.b - b;
                    if (e.a - a).abs() <= 1.0 && (e.b - b).abs() <= 0.5 {
                        within += 1;
                    }
                }
                Err(err) => {
                    println!("{form:?} seed {seed}: {err}");
                    degenerate += 1;
                }
            }
        }
        let ok = (seeds - degenerate).max(1) as f64;
        println!(
            "{form:?}: mean error a {:+.3} b {:+.3}; within |da| <= 1, |db| <= 0.5: {within}/{seeds}; degenerate {degenerate}",
            ea / ok,
            eb / ok
        );
    }
}
