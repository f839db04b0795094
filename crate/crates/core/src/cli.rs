//! Command implementations behind the `chronofrac` binary. Each command
//! reads a JSON [`RunConfig`] and writes CSV/JSON files into an output
//! directory.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::oracle::{builtin_studies, load_suites, run_suite, CaseOutcome};
use crate::thermistor::{
    contraction_constant, contraction_terms, existence_diagnostics, json_float, uniqueness_threshold, ProblemSpec,
    SolveReport, ThermistorOperator,
};

/// Environment variable capping the number of sweep worker threads.
pub const THREADS_ENV: &str = "CHRONOFRAC_THREADS";

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: Option<ProblemSpec>,
    #[serde(default)]
    pub sweep: Option<SweepRange>,
    #[serde(default)]
    pub verify: Option<VerifyOptions>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepRange {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lambda_step: f64,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyOptions {
    pub cases_dir: Option<PathBuf>,
    /// Suite names (file stems) to run; all suites when absent.
    pub suites: Option<Vec<String>>,
}

/// How a command finished, mapped to the process exit code by the binary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    VerificationFailed,
    NotConverged,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::VerificationFailed => 2,
            Outcome::NotConverged => 3,
        }
    }
}

/// Usage and configuration errors exit with this code.
pub const EXIT_CONFIG: i32 = 1;

pub fn load_config(path: &Path) -> anyhow::Result<RunConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
    let mut config: RunConfig =
        serde_json::from_str(&text).with_context(|| format!("invalid config {}", path.display()))?;
    // relative case directories are taken relative to the config file
    if let Some(dir) = config.verify.as_mut().and_then(|v| v.cases_dir.as_mut()) {
        if dir.is_relative() {
            if let Some(parent) = path.parent() {
                *dir = parent.join(&*dir);
            }
        }
    }
    Ok(config)
}

fn require_problem(config: &RunConfig) -> anyhow::Result<&ProblemSpec> {
    config.problem.as_ref().context("config is missing the \"problem\" section")
}

fn create_out(out: &Path) -> anyhow::Result<()> {
    fs::create_dir_all(out).with_context(|| format!("output directory {} is not writable", out.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("cannot write {}", path.display()))
}

fn csv_writer(path: &Path) -> anyhow::Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))
}

// `Display` for f64 prints the shortest string that parses back to the same value
fn num(v: f64) -> String {
    v.to_string()
}

/// Solves the configured problem; writes `solution.csv`, `trace.csv`,
/// `report.json` and `diagnostics.json`.
pub fn cmd_solve(config: &RunConfig, out: &Path, strict: bool) -> anyhow::Result<Outcome> {
    let spec = require_problem(config)?;
    create_out(out)?;
    let report = ThermistorOperator::new(spec)?.solve(None)?;

    let mut w = csv_writer(&out.join("solution.csv"))?;
    w.write_record(["t", "u"])?;
    for (t, u) in report.solution.iter() {
        w.write_record([num(t), num(u)])?;
    }
    w.flush()?;

    let mut w = csv_writer(&out.join("trace.csv"))?;
    w.write_record(["k", "d_k"])?;
    for (k, d) in report.trace.iter().enumerate() {
        w.write_record([k.to_string(), num(*d)])?;
    }
    w.flush()?;

    write_json(&out.join("report.json"), &report)?;
    write_json(&out.join("diagnostics.json"), &existence_diagnostics(spec, &report))?;

    println!(
        "solve: {} after {} iterations, residual {:e}, q = {}, |u|_inf = {}",
        if report.converged { "converged" } else { "NOT converged" },
        report.iterations,
        report.residual,
        report.q,
        report.solution.sup_norm()
    );
    Ok(if strict && !report.converged { Outcome::NotConverged } else { Outcome::Success })
}

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdReport {
    #[serde(serialize_with = "json_float::serialize")]
    pub lambda_star: f64,
    pub q_at_lambda: f64,
    pub terms: crate::thermistor::ContractionTerms,
}

pub fn threshold_report(spec: &ProblemSpec) -> ThresholdReport {
    ThresholdReport {
        lambda_star: uniqueness_threshold(spec),
        q_at_lambda: contraction_constant(spec),
        terms: contraction_terms(spec),
    }
}

/// Writes `threshold.json` with `λ*`, `q(λ)` and both contraction summands.
pub fn cmd_threshold(config: &RunConfig, out: &Path) -> anyhow::Result<Outcome> {
    let spec = require_problem(config)?;
    create_out(out)?;
    let report = threshold_report(spec);
    write_json(&out.join("threshold.json"), &report)?;
    println!("lambda_star = {}, q(lambda = {}) = {}", report.lambda_star, spec.lambda, report.q_at_lambda);
    Ok(Outcome::Success)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub lambda: f64,
    pub iterations: usize,
    pub residual: f64,
    pub q: f64,
    pub converged: bool,
    pub u_inf: f64,
    pub max_step_ratio: Option<f64>,
}

impl SweepRange {
    pub fn validate(&self) -> anyhow::Result<()> {
        let SweepRange { lambda_min, lambda_max, lambda_step } = *self;
        if !(lambda_min.is_finite() && lambda_max.is_finite() && lambda_min < lambda_max) {
            bail!("lambda_min must be less than lambda_max");
        }
        if lambda_min < 0.0 {
            bail!("lambda_min must be >= 0");
        }
        if !(lambda_step > 0.0 && lambda_step.is_finite()) {
            bail!("lambda_step must be positive");
        }
        Ok(())
    }

    /// `λ_min + k·step` for every `k` keeping the value within `λ_max`.
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.lambda_max - self.lambda_min) / self.lambda_step + 1e-9).floor() as usize;
        (0..=n).map(|k| self.lambda_min + k as f64 * self.lambda_step).collect()
    }
}

fn sweep_threads() -> anyhow::Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => {
            let n: usize = v.trim().parse().with_context(|| format!("{THREADS_ENV} must be a positive integer"))?;
            if n == 0 {
                bail!("{THREADS_ENV} must be a positive integer");
            }
            Ok(Some(n))
        }
        Err(_) => Ok(None),
    }
}

pub fn run_sweep(spec: &ProblemSpec, range: &SweepRange) -> anyhow::Result<Vec<SweepRow>> {
    range.validate()?;
    let base = ThermistorOperator::new(spec)?;
    let solve_one = |lambda: f64| -> anyhow::Result<SweepRow> {
        let op = base.with_lambda(lambda)?;
        let report: SolveReport = op.solve(None)?;
        Ok(SweepRow {
            lambda,
            iterations: report.iterations,
            residual: report.residual,
            q: report.q,
            converged: report.converged,
            u_inf: report.solution.sup_norm(),
            max_step_ratio: report.max_step_ratio(),
        })
    };
    let lambdas = range.values();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = sweep_threads()? {
        builder = builder.num_threads(n);
    }
    let pool = builder.build()?;
    // indexed collect keeps rows in ascending λ whatever the schedule
    pool.install(|| lambdas.par_iter().map(|&l| solve_one(l)).collect())
}

/// Solves across a λ range; writes `sweep.csv` in ascending λ.
pub fn cmd_sweep(config: &RunConfig, out: &Path, range: SweepRange, strict: bool) -> anyhow::Result<Outcome> {
    let spec = require_problem(config)?;
    create_out(out)?;
    let rows = run_sweep(spec, &range)?;
    let mut w = csv_writer(&out.join("sweep.csv"))?;
    w.write_record(["lambda", "iterations", "residual", "q", "converged", "u_inf", "max_step_ratio"])?;
    for r in &rows {
        w.write_record([
            num(r.lambda),
            r.iterations.to_string(),
            num(r.residual),
            num(r.q),
            r.converged.to_string(),
            num(r.u_inf),
            r.max_step_ratio.map(num).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    let failed = rows.iter().filter(|r| !r.converged).count();
    println!("sweep: {} points, {} not converged", rows.len(), failed);
    Ok(if strict && failed > 0 { Outcome::NotConverged } else { Outcome::Success })
}

/// Runs every oracle suite in the cases directory plus the built-in
/// composition refinement studies, printing one line per case.
pub fn cmd_verify(cases_dir: &Path, suites: Option<&[String]>, out: Option<&Path>) -> anyhow::Result<Outcome> {
    let mut loaded = load_suites(cases_dir)?;
    if let Some(names) = suites {
        for n in names {
            if !loaded.iter().any(|s| &s.name == n) {
                bail!("suite '{n}' not found in {}", cases_dir.display());
            }
        }
        loaded.retain(|s| names.contains(&s.name));
    }
    let total: usize = loaded.iter().map(|s| s.cases.len()).sum();
    if total == 0 {
        println!("verify: 0 cases in {}", cases_dir.display());
    }

    let mut outcomes: Vec<(String, CaseOutcome)> = Vec::new();
    for suite in &loaded {
        outcomes.extend(run_suite(suite).into_iter().map(|o| (suite.name.clone(), o)));
    }
    outcomes.extend(builtin_studies().into_iter().map(|o| ("builtin".to_string(), o)));

    for (suite, o) in &outcomes {
        let status = if o.passed { "PASS" } else { "FAIL" };
        print!("{status} {suite}/{}: error {:e}, tolerance {:e}, margin {:e}", o.name, o.error, o.tolerance, o.margin);
        match &o.failure {
            Some(msg) => println!(" ({msg})"),
            None => println!(),
        }
    }
    let failures: Vec<_> = outcomes.iter().filter(|(_, o)| !o.passed).collect();
    if let Some(out) = out {
        create_out(out)?;
        let rows: Vec<_> = outcomes
            .iter()
            .map(|(s, o)| serde_json::json!({ "suite": s, "outcome": o }))
            .collect();
        write_json(&out.join("verify.json"), &rows)?;
    }
    println!("verify: {} cases, {} failed", outcomes.len(), failures.len());
    if failures.is_empty() {
        Ok(Outcome::Success)
    } else {
        for (suite, o) in &failures {
            eprintln!("failed: {suite}/{}", o.name);
        }
        Ok(Outcome::VerificationFailed)
    }
}
