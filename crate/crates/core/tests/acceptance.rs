//! Acceptance gate. Each test prints one `PASS`/`FAIL` line and then asserts.
//!
//! Run with `cargo test -p chronofrac --test acceptance -- --nocapture --test-threads 1`.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use chronofrac::cli::{self, Outcome, RunConfig};
use chronofrac::conductivity::ConductivityModel;
use chronofrac::frac::{frac_integral, verify_composition, FracOrder};
use chronofrac::oracle::{brute_force_discrete, closed_form_power_integral, constant_f_solution, extension_inequality_check};
use chronofrac::thermistor::{
    contraction_constant, existence_diagnostics, picard_solve, uniqueness_threshold, ProblemSpec, ThermistorOperator,
};
use chronofrac::timescale::{build_grid, GridFunction, TimeScale};

// Γ(3/2)/9 to 17 digits, computed with 40-digit arithmetic.
const LAMBDA_STAR: f64 = 0.098469658383639779;

fn sci(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn verdict(id: u32, title: &str, passed: bool, detail: String) {
    let tag = if passed { "PASS" } else { "FAIL" };
    println!("{tag} criterion {id:>2} {title}: {detail}");
    assert!(passed, "criterion {id} ({title}) failed: {detail}");
}

fn sampled(ts: &TimeScale, h: f64, f: impl Fn(f64) -> f64) -> GridFunction {
    GridFunction::from_fn(Arc::new(build_grid(ts, h).unwrap()), f).unwrap()
}

fn affine() -> ConductivityModel {
    ConductivityModel::ClampedAffine { base: 1.0, slope: 1.0, lo: 1.0, hi: 2.0 }
}

fn unit_problem(alpha: f64, lambda: f64, model: ConductivityModel, h: f64) -> ProblemSpec {
    ProblemSpec::new(TimeScale::interval(0.0, 1.0).unwrap(), alpha, lambda, model)
        .unwrap()
        .with_h_max(h)
        .unwrap()
}

#[test]
fn criterion_01_discrete_exactness() {
    let ts = TimeScale::integers(0, 20).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0_f64;
    for alpha in [0.1, 0.25, 0.4] {
        for _ in 0..20 {
            let vals: Vec<f64> = (0..21).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let abs: Vec<f64> = vals.iter().map(|v| v.abs()).collect();
            let g = GridFunction::new(Arc::new(build_grid(&ts, 1.0).unwrap()), vals.clone()).unwrap();
            for t in 1..=20 {
                let t = t as f64;
                let got = frac_integral(&g, FracOrder::new(alpha).unwrap(), t).unwrap();
                let want = brute_force_discrete(&ts, &vals, alpha, t).unwrap();
                // relative to the sum of absolute terms, so cancellation does not inflate it
                let scale = brute_force_discrete(&ts, &abs, alpha, t).unwrap().max(f64::MIN_POSITIVE);
                worst = worst.max((got - want).abs() / scale);
            }
        }
    }
    verdict(1, "discrete exactness", worst <= 1e-12, format!("max relative error {worst:.3e} (limit 1e-12)"));
}

#[test]
fn criterion_02_power_rule() {
    let ts = TimeScale::interval(0.0, 1.0).unwrap();
    let alpha = 0.5;
    let order = FracOrder::new(alpha).unwrap();
    let mut details = Vec::new();
    let mut passed = true;
    for beta in [0.0_f64, 1.0, 2.0] {
        let errs: Vec<f64> = [128.0, 256.0, 512.0]
            .iter()
            .map(|n| {
                let g = sampled(&ts, 1.0 / n, |s| s.powf(beta));
                g.grid()
                    .nodes()
                    .iter()
                    .map(|&t| (frac_integral(&g, order, t).unwrap() - closed_form_power_integral(alpha, beta, t)).abs())
                    .fold(0.0, f64::max)
            })
            .collect();
        if beta < 2.0 {
            // the linear interpolant reproduces s^0 and s^1, so only rounding remains
            passed &= errs.iter().all(|&e| e <= 1e-12);
            details.push(format!("beta={beta}: errors {} (exact, limit 1e-12)", sci(&errs)));
        } else {
            let ratios: Vec<f64> = errs.windows(2).map(|w| w[0] / w[1]).collect();
            passed &= ratios.iter().all(|r| (3.5..=4.5).contains(r));
            details.push(format!("beta={beta}: halving ratios {ratios:.3?} (band [3.5, 4.5])"));
        }
    }
    verdict(2, "power rule", passed, details.join("; "));
}

#[test]
fn criterion_03_composition() {
    let order = FracOrder::new(0.5).unwrap();
    let ts = TimeScale::interval(0.0, 1.0).unwrap();
    let errs: Vec<f64> =
        [128.0, 256.0, 512.0].iter().map(|n| verify_composition(&sampled(&ts, 1.0 / n, |s| s), order).err_di).collect();
    let continuous = errs[2] <= 5e-3 && errs.windows(2).all(|w| w[1] < w[0]);

    let z = TimeScale::integers(0, 8).unwrap();
    let discrete = verify_composition(&sampled(&z, 1.0, |s| s * s), FracOrder::new(0.3).unwrap()).err_di;
    let exact = discrete <= 1e-10;

    verdict(
        3,
        "composition identities",
        continuous && exact,
        format!("interval err_DI {} (limit 5e-3, decreasing); integers err_DI {discrete:.3e} (limit 1e-10)", sci(&errs)),
    );
}

#[test]
fn criterion_04_constant_f_fixed_point() {
    let (c, lambda, alpha) = (2.0, 0.7, 0.3);
    let spec = unit_problem(alpha, lambda, ConductivityModel::Constant { c }, 1.0 / 512.0);
    let report = picard_solve(&spec, None).unwrap();
    let err = report
        .solution
        .iter()
        .map(|(t, u)| (u - constant_f_solution(c, lambda, alpha, 1.0, t)).abs())
        .fold(0.0, f64::max);
    let passed = report.converged && report.iterations <= 2 && err <= 1e-9;
    verdict(
        4,
        "closed-form fixed point",
        passed,
        format!("converged={} in {} iterations, max error {err:.3e} (limit 1e-9)", report.converged, report.iterations),
    );
}

#[test]
fn criterion_05_contraction_constant() {
    let spec = unit_problem(0.25, 1.0, affine(), 1.0 / 64.0);
    let threshold = uniqueness_threshold(&spec);
    let err = (threshold - LAMBDA_STAR).abs();
    let q_at = contraction_constant(&spec.clone().with_lambda(threshold).unwrap());
    let passed = err <= 1e-12 && (q_at - 1.0).abs() <= 1e-12;
    verdict(
        5,
        "contraction constant",
        passed,
        format!("lambda* = {threshold} (|diff| {err:.1e}), q(lambda*) = {q_at}"),
    );
}

#[test]
fn criterion_06_empirical_contraction() {
    let base = unit_problem(0.25, 1.0, affine(), 1.0 / 128.0);
    let spec = base.clone().with_lambda(0.5 * uniqueness_threshold(&base)).unwrap();
    let q = contraction_constant(&spec);
    let op = ThermistorOperator::new(&spec).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..100 {
        let scale = rng.gen_range(0.01..=10.0);
        let mut draw = || -> GridFunction {
            let vals = (0..op.grid().len()).map(|_| rng.gen_range(0.0..scale)).collect();
            GridFunction::new(Arc::clone(op.grid()), vals).unwrap()
        };
        let (u, v) = (draw(), draw());
        let lhs = op.apply(&u).unwrap().distance(&op.apply(&v).unwrap());
        worst = worst.max(lhs - q * u.distance(&v));
    }
    let report = op.solve(None).unwrap();
    let ratio = report.max_step_ratio().unwrap_or(0.0);
    let passed = worst <= 1e-8 && ratio <= q + 0.05;
    verdict(
        6,
        "empirical contraction",
        passed,
        format!("max(|Ku-Kv| - q|u-v|) = {worst:.3e} (limit 1e-8), max step ratio {ratio:.4} (q = {q:.4})"),
    );
}

fn diagnostic_problems() -> Vec<ProblemSpec> {
    let mixed = TimeScale::new(vec![[0.0, 0.6], [0.8, 0.8], [1.0, 1.5], [1.7, 1.7], [2.0, 2.0]]).unwrap();
    vec![
        unit_problem(0.25, 0.0, affine(), 1.0 / 64.0),
        unit_problem(0.25, 0.05, affine(), 1.0 / 256.0),
        unit_problem(0.4, 1.0, ConductivityModel::Constant { c: 2.0 }, 1.0 / 256.0),
        unit_problem(0.1, 0.03, ConductivityModel::BoundedRational { c1: 1.0, c2: 3.0, scale: 2.0 }, 1.0 / 128.0),
        ProblemSpec::new(TimeScale::integers(0, 6).unwrap(), 0.3, 0.2, affine()).unwrap(),
        ProblemSpec::new(mixed, 0.35, 0.1, affine()).unwrap().with_h_max(0.05).unwrap(),
    ]
}

#[test]
fn criterion_07_a_priori_bounds() {
    let mut failures = Vec::new();
    let problems = diagnostic_problems();
    for (i, spec) in problems.iter().enumerate() {
        let report = picard_solve(spec, None).unwrap();
        let diag = existence_diagnostics(spec, &report);
        if !report.converged || !diag.all_passed() {
            let failed: Vec<String> = diag
                .checks
                .iter()
                .filter(|c| c.applicable && !c.passed)
                .map(|c| format!("{} observed {:.3e} > bound {:.3e}", c.name, c.observed, c.bound))
                .collect();
            failures.push(format!("problem {i}: converged={} {}", report.converged, failed.join(", ")));
        }
    }
    verdict(
        7,
        "a priori bounds",
        failures.is_empty(),
        format!("{} problems, failures: {failures:?}", problems.len()),
    );
}

fn random_time_scale(rng: &mut ChaCha8Rng) -> TimeScale {
    let mut comps = Vec::new();
    let mut at = rng.gen_range(-1.0..1.0);
    for _ in 0..rng.gen_range(1..5) {
        if rng.gen_bool(0.5) {
            let len = rng.gen_range(0.2..1.5);
            comps.push([at, at + len]);
            at += len;
        } else {
            comps.push([at, at]);
        }
        at += rng.gen_range(0.1..0.8);
    }
    comps.push([at, at]);
    TimeScale::new(comps).unwrap()
}

fn random_model(rng: &mut ChaCha8Rng) -> ConductivityModel {
    match rng.gen_range(0..4) {
        0 => ConductivityModel::Constant { c: rng.gen_range(0.5..3.0) },
        1 => {
            let lo = rng.gen_range(0.5..1.5);
            ConductivityModel::ClampedAffine { base: lo, slope: rng.gen_range(-1.0..2.0), lo, hi: lo + rng.gen_range(0.0..2.0) }
        }
        2 => {
            let c1 = rng.gen_range(0.5..1.5);
            ConductivityModel::BoundedRational { c1, c2: c1 + rng.gen_range(0.0..2.0), scale: rng.gen_range(0.1..3.0) }
        }
        _ => {
            let values = (0..4).map(|_| rng.gen_range(0.5..2.5)).collect();
            ConductivityModel::Table { breakpoints: vec![0.0, 0.5, 1.0, 2.0], values }
        }
    }
}

#[test]
fn criterion_08_positivity() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = Vec::new();
    for i in 0..20 {
        let ts = random_time_scale(&mut rng);
        let h = ts.span() / 200.0;
        let spec = ProblemSpec::new(ts, rng.gen_range(0.05..0.45), 1.0, random_model(&mut rng)).unwrap();
        let cap = uniqueness_threshold(&spec).min(5.0);
        let spec = spec.with_lambda(rng.gen_range(0.05..0.9) * cap).unwrap().with_h_max(h).unwrap();
        let report = picard_solve(&spec, None).unwrap();
        let vals = report.solution.values();
        let ok = report.converged && vals[0] >= 0.0 && vals[1..].iter().all(|&u| u > 0.0);
        if !ok {
            failures.push(format!("config {i}: converged={} min={:e}", report.converged, vals[1..].iter().fold(f64::INFINITY, |m, &v| m.min(v))));
        }
    }
    verdict(8, "positivity", failures.is_empty(), format!("20 random configurations, failures: {failures:?}"));
}

#[test]
fn criterion_09_extension_inequality() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = f64::INFINITY;
    for _ in 0..50 {
        let ts = random_time_scale(&mut rng);
        let grid = Arc::new(build_grid(&ts, rng.gen_range(0.02..0.3)).unwrap());
        let mut level = rng.gen_range(-2.0..2.0);
        let vals = (0..grid.len())
            .map(|_| {
                level += rng.gen_range(0.0..0.5);
                level
            })
            .collect();
        let check = extension_inequality_check(&GridFunction::new(grid, vals).unwrap(), 1e-10).unwrap();
        worst = worst.min(check.real - check.delta);
    }
    verdict(9, "extension inequality", worst >= -1e-10, format!("min(real - delta) over 50 scales = {worst:.3e} (limit -1e-10)"));
}

#[test]
fn criterion_10_cli_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("constant.json");
    fs::write(
        &config_path,
        r#"{"problem": {"time_scale": [[0, 1]], "alpha": 0.3, "lambda": 0.7,
            "model": {"family": "constant", "c": 2}, "h_max": 0.001953125}}"#,
    )
    .unwrap();
    let config: RunConfig = cli::load_config(&config_path).unwrap();
    let out = dir.path().join("out");
    let solved = cli::cmd_solve(&config, &out, true).unwrap();

    let mut reader = csv::Reader::from_path(out.join("solution.csv")).unwrap();
    let mut err = 0.0_f64;
    let mut rows = 0;
    for row in reader.records() {
        let row = row.unwrap();
        let t: f64 = row[0].parse().unwrap();
        let u: f64 = row[1].parse().unwrap();
        err = err.max((u - constant_f_solution(2.0, 0.7, 0.3, 1.0, t)).abs());
        rows += 1;
    }

    let cases = Path::new(env!("CARGO_MANIFEST_DIR")).join("cases");
    let verified = cli::cmd_verify(&cases, None, None).unwrap();
    let passed = solved == Outcome::Success && rows == 513 && err <= 1e-9 && verified == Outcome::Success;
    verdict(
        10,
        "cli round trip",
        passed,
        format!("solve {solved:?}, {rows} rows, max error {err:.3e} (limit 1e-9); verify {verified:?}"),
    );
}
