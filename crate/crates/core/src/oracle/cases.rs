//! Serialized oracle cases. A suite is one JSON file holding an array of
//! cases; `verify` runs every suite found in a cases directory.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{brute_force_discrete, closed_form_power_integral, constant_f_solution, extension_inequality_check};
use crate::conductivity::ConductivityModel;
use crate::error::{Error, Result};
use crate::frac::{frac_derivative, frac_integral, gamma_fn, verify_composition, FracOrder};
use crate::thermistor::{self, ProblemSpec, ThermistorOperator};
use crate::timescale::{self, build_grid, delta_integral, GridFunction, TimeScale};

/// A function to sample on a grid: polynomial coefficients (constant term
/// first) or explicit values, one per node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleFn {
    Poly(Vec<f64>),
    Values(Vec<f64>),
}

impl SampleFn {
    fn sample(&self, grid: Arc<timescale::Grid>) -> Result<GridFunction> {
        match self {
            SampleFn::Poly(c) => GridFunction::from_fn(grid, |t| c.iter().rev().fold(0.0, |acc, &k| acc * t + k)),
            SampleFn::Values(v) => GridFunction::new(grid, v.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CaseInput {
    Gamma { x: f64 },
    Sigma { time_scale: TimeScale, t: f64 },
    Rho { time_scale: TimeScale, t: f64 },
    Graininess { time_scale: TimeScale, t: f64 },
    DeltaIntegral { time_scale: TimeScale, h_max: f64, g: SampleFn, a: f64, b: f64 },
    FracIntegral { time_scale: TimeScale, h_max: f64, g: SampleFn, alpha: f64, t: f64 },
    FracDerivative { time_scale: TimeScale, h_max: f64, g: SampleFn, alpha: f64, t: f64 },
    /// `‖D^α(I^α g) − g‖∞` on the grid.
    CompositionDi { time_scale: TimeScale, h_max: f64, g: SampleFn, alpha: f64 },
    EvalF { model: ConductivityModel, u: f64 },
    /// Expected samples `[c1, c2, L_f]`.
    Constants { model: ConductivityModel },
    Denominator { problem: ProblemSpec, u: SampleFn },
    ApplyK { problem: ProblemSpec, u: SampleFn, t: f64 },
    ContractionConstant { problem: ProblemSpec },
    UniquenessThreshold { problem: ProblemSpec },
    SupBound { problem: ProblemSpec },
    EquicontinuityModulus { problem: ProblemSpec, t1: f64, t2: f64 },
    /// Converged Picard solution at every node.
    PicardSolution { problem: ProblemSpec },
    PicardIterations { problem: ProblemSpec },
    ClosedFormPowerIntegral { alpha: f64, beta: f64, t: f64 },
    BruteForceDiscrete { time_scale: TimeScale, g: Vec<f64>, alpha: f64, t: f64 },
    ConstantFSolution { c: f64, lambda: f64, alpha: f64, end: f64, t: f64 },
    /// `∫ G dt − ∫ g Δt`, expected to be nonnegative up to the tolerance.
    ExtensionGap { time_scale: TimeScale, h_max: f64, g: SampleFn },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Expected {
    Scalar(f64),
    Samples(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleCase {
    pub name: String,
    pub inputs: CaseInput,
    pub expected: Expected,
    /// Absolute tolerance on `|actual − expected|` (max over samples).
    pub tolerance: f64,
}

impl OracleCase {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::param("tolerance", format!("must be positive in case '{}'", self.name)));
        }
        let finite = match &self.expected {
            Expected::Scalar(v) => v.is_finite(),
            Expected::Samples(v) => v.iter().all(|x| x.is_finite()),
        };
        if !finite {
            return Err(Error::param("expected", format!("must be finite in case '{}'", self.name)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseOutcome {
    pub name: String,
    pub passed: bool,
    /// `tolerance − error`; negative when the case fails.
    pub margin: f64,
    pub error: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Suite {
    pub name: String,
    pub cases: Vec<OracleCase>,
}

/// Loads every `*.json` suite in `dir`, sorted by file name.
pub fn load_suites(dir: &Path) -> Result<Vec<Suite>> {
    let entries = fs::read_dir(dir)
        .map_err(|e| Error::param("cases_dir", format!("cannot be read ({}): {e}", dir.display())))?;
    let mut paths: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|path| {
            let text = fs::read_to_string(&path)
                .map_err(|e| Error::param("cases_dir", format!("{}: {e}", path.display())))?;
            let cases: Vec<OracleCase> = serde_json::from_str(&text)
                .map_err(|e| Error::param("cases", format!("{}: {e}", path.display())))?;
            cases.iter().try_for_each(OracleCase::validate)?;
            let name = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            Ok(Suite { name, cases })
        })
        .collect()
}

pub fn run_suite(suite: &Suite) -> Vec<CaseOutcome> {
    suite.cases.iter().map(run_case).collect()
}

pub fn run_case(case: &OracleCase) -> CaseOutcome {
    let result = evaluate(&case.inputs).and_then(|actual| compare(&actual, &case.expected));
    match result {
        Ok(error) => CaseOutcome {
            name: case.name.clone(),
            passed: error <= case.tolerance,
            margin: case.tolerance - error,
            error,
            tolerance: case.tolerance,
            failure: None,
        },
        Err(e) => CaseOutcome {
            name: case.name.clone(),
            passed: false,
            margin: f64::NEG_INFINITY,
            error: f64::INFINITY,
            tolerance: case.tolerance,
            failure: Some(e.to_string()),
        },
    }
}

fn compare(actual: &Expected, expected: &Expected) -> Result<f64> {
    match (actual, expected) {
        (Expected::Scalar(a), Expected::Scalar(e)) => Ok((a - e).abs()),
        (Expected::Samples(a), Expected::Samples(e)) if a.len() == e.len() => {
            Ok(a.iter().zip(e).fold(0.0, |m, (x, y)| m.max((x - y).abs())))
        }
        (Expected::Samples(a), Expected::Samples(e)) => Err(Error::Domain(format!(
            "expected {} samples, computed {}",
            e.len(),
            a.len()
        ))),
        _ => Err(Error::Domain("expected value has the wrong shape for this case kind".into())),
    }
}

fn grid_fn(ts: &TimeScale, h_max: f64, g: &SampleFn) -> Result<GridFunction> {
    g.sample(Arc::new(build_grid(ts, h_max)?))
}

fn problem_fn(op: &ThermistorOperator, u: &SampleFn) -> Result<GridFunction> {
    u.sample(Arc::clone(op.grid()))
}

fn evaluate(input: &CaseInput) -> Result<Expected> {
    use CaseInput::*;
    use Expected::Scalar;
    Ok(match input {
        Gamma { x } => Scalar(gamma_fn(*x)?),
        Sigma { time_scale, t } => Scalar(timescale::sigma(time_scale, *t)?),
        Rho { time_scale, t } => Scalar(timescale::rho(time_scale, *t)?),
        Graininess { time_scale, t } => Scalar(timescale::graininess(time_scale, *t)?),
        DeltaIntegral { time_scale, h_max, g, a, b } => Scalar(delta_integral(&grid_fn(time_scale, *h_max, g)?, *a, *b)?),
        FracIntegral { time_scale, h_max, g, alpha, t } => {
            Scalar(frac_integral(&grid_fn(time_scale, *h_max, g)?, FracOrder::new(*alpha)?, *t)?)
        }
        FracDerivative { time_scale, h_max, g, alpha, t } => {
            Scalar(frac_derivative(&grid_fn(time_scale, *h_max, g)?, FracOrder::new(*alpha)?, *t)?)
        }
        CompositionDi { time_scale, h_max, g, alpha } => {
            Scalar(verify_composition(&grid_fn(time_scale, *h_max, g)?, FracOrder::new(*alpha)?).err_di)
        }
        EvalF { model, u } => {
            model.validate()?;
            Scalar(model.eval(*u))
        }
        Constants { model } => {
            model.validate()?;
            let c = model.constants();
            Expected::Samples(vec![c.c1, c.c2, c.lipschitz])
        }
        Denominator { problem, u } => {
            let op = ThermistorOperator::new(problem)?;
            Scalar(op.denominator(&problem_fn(&op, u)?)?)
        }
        ApplyK { problem, u, t } => {
            let op = ThermistorOperator::new(problem)?;
            let ku = op.apply(&problem_fn(&op, u)?)?;
            Scalar(ku.values()[op.grid().index_of(*t)?])
        }
        ContractionConstant { problem } => Scalar(thermistor::contraction_constant(problem)),
        UniquenessThreshold { problem } => Scalar(thermistor::uniqueness_threshold(problem)),
        SupBound { problem } => Scalar(thermistor::sup_bound(problem)),
        EquicontinuityModulus { problem, t1, t2 } => Scalar(thermistor::equicontinuity_modulus(problem, *t1, *t2)?),
        PicardSolution { problem } => Expected::Samples(thermistor::picard_solve(problem, None)?.solution.into_values()),
        PicardIterations { problem } => Scalar(thermistor::picard_solve(problem, None)?.iterations as f64),
        ClosedFormPowerIntegral { alpha, beta, t } => Scalar(closed_form_power_integral(*alpha, *beta, *t)),
        BruteForceDiscrete { time_scale, g, alpha, t } => Scalar(brute_force_discrete(time_scale, g, *alpha, *t)?),
        ConstantFSolution { c, lambda, alpha, end, t } => Scalar(constant_f_solution(*c, *lambda, *alpha, *end, *t)),
        ExtensionGap { time_scale, h_max, g } => {
            let check = extension_inequality_check(&grid_fn(time_scale, *h_max, g)?, f64::INFINITY)?;
            // a positive gap is as good as zero; only a negative gap is a violation
            Scalar((check.real - check.delta).min(0.0))
        }
    })
}

/// Composition refinement studies run by `verify` alongside the suites:
/// `‖D^α(I^α g) − g‖∞` for `g(s) = s` on `[0, 1]` must not exceed `5e-3`
/// at `h = 1/512` and must shrink under each halving of `h`.
pub fn builtin_studies() -> Vec<CaseOutcome> {
    let ts = TimeScale::interval(0.0, 1.0).expect("unit interval");
    let mut out = Vec::new();
    for alpha in [0.25, 0.5, 0.75] {
        let order = FracOrder::new(alpha).expect("order in (0, 1)");
        let errs: Vec<f64> = [128.0, 256.0, 512.0]
            .iter()
            .map(|n| {
                let g = grid_fn(&ts, 1.0 / n, &SampleFn::Poly(vec![0.0, 1.0])).expect("valid grid");
                verify_composition(&g, order).err_di
            })
            .collect();
        let decreasing = errs.windows(2).all(|w| w[1] < w[0]);
        let tolerance = 5e-3;
        let error = errs[2];
        out.push(CaseOutcome {
            name: format!("composition_di_refinement_alpha_{alpha}"),
            passed: decreasing && error <= tolerance,
            margin: tolerance - error,
            error,
            tolerance,
            failure: (!decreasing).then(|| format!("discrepancy not decreasing under refinement: {errs:?}")),
        });
    }
    out
}
