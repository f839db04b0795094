//! Closed-form constants attached to the operator `K`: its Lipschitz
//! (contraction) constant, the uniqueness threshold on `λ`, the uniform
//! bound on `‖Ku‖∞` and the equicontinuity modulus.
//!
//! `T` denotes the span `T − t0` throughout, and times entering the
//! modulus are measured from `t0`.

use serde::Serialize;

use super::ProblemSpec;
use crate::error::{Error, Result};
use crate::frac::gamma_positive;

/// The two λ-free summands whose sum, times `λ`, is the contraction
/// constant:
///
/// ```text
/// term1 = T^{2α} L_f / ((c1 T)² Γ(2α+1))
/// term2 = 2 c2² T^{2(α+1)} L_f / ((c1 T)⁴ Γ(2α+1))
/// ```
///
/// `term1` bounds the change of the numerator `f(u(s))`, `term2` the
/// change of the nonlocal denominator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContractionTerms {
    pub term1: f64,
    pub term2: f64,
}

impl ContractionTerms {
    pub fn sum(self) -> f64 {
        self.term1 + self.term2
    }
}

pub fn contraction_terms(spec: &ProblemSpec) -> ContractionTerms {
    let c = spec.model.constants();
    let t = spec.span();
    let a = spec.alpha;
    let g = gamma_positive(2.0 * a + 1.0);
    let c1t = c.c1 * t;
    ContractionTerms {
        term1: t.powf(2.0 * a) * c.lipschitz / (c1t * c1t * g),
        term2: 2.0 * c.c2 * c.c2 * t.powf(2.0 * (a + 1.0)) * c.lipschitz / (c1t.powi(4) * g),
    }
}

/// `q(λ) = λ·(term1 + term2)`.
pub fn contraction_constant(spec: &ProblemSpec) -> f64 {
    spec.lambda * contraction_terms(spec).sum()
}

/// `λ* = (term1 + term2)^{-1}`, infinite when `L_f = 0`.
pub fn uniqueness_threshold(spec: &ProblemSpec) -> f64 {
    let s = contraction_terms(spec).sum();
    if s == 0.0 {
        f64::INFINITY
    } else {
        1.0 / s
    }
}

/// `λ M T^{2α}/Γ(2α+1)` with `M = c2/(c1 T)²`.
pub fn sup_bound(spec: &ProblemSpec) -> f64 {
    let c = spec.model.constants();
    let t = spec.span();
    let two_a = 2.0 * spec.alpha;
    spec.lambda * c.c2 * t.powf(two_a) / ((c.c1 * t).powi(2) * gamma_positive(two_a + 1.0))
}

/// `λ c2 /((c1 T)² Γ(2α+1)) · |t2^{2α} − t1^{2α}|`, times measured from `t0`.
pub fn equicontinuity_modulus(spec: &ProblemSpec, t1: f64, t2: f64) -> Result<f64> {
    if t1 > t2 {
        return Err(Error::Domain(format!("equicontinuity_modulus needs t1 <= t2, got {t1} > {t2}")));
    }
    let t0 = spec.t0();
    let (end, tol) = (spec.time_scale.end(), crate::SNAP_TOL);
    if t1 < t0 - tol || t2 > end + tol {
        return Err(Error::Domain(format!("[{t1}, {t2}] is not inside [{t0}, {end}]")));
    }
    let c = spec.model.constants();
    let two_a = 2.0 * spec.alpha;
    let scale = spec.lambda * c.c2 / ((c.c1 * spec.span()).powi(2) * gamma_positive(two_a + 1.0));
    let p = |t: f64| (t - t0).max(0.0).powf(two_a);
    Ok(scale * (p(t2) - p(t1)).abs())
}
