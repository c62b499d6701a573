//! Sufficient conditions for `I(A:B) > I(A:E)` and the critical CHSH
//! winning probability above which they hold.
//!
//! Pointwise, in terms of guessing probabilities, the condition is
//! `h(P_B) < 2(1 − P_E)`. With `P_B = β` and `P_E` obtained from the
//! monogamy curve it becomes `h(β) < 3 − 4 f(β)`. Both are strict:
//! equality is classified insecure.

use serde::{Deserialize, Serialize};

use crate::entropy::{binary_entropy, Probability};
use crate::error::{Error, Result};
use crate::monogamy::{evaluate, BetaValue, MonogamyModel, Theory, CLASSICAL_BOUND};

/// Hard cap on bisection steps.
pub const MAX_BISECTION_ITERATIONS: u32 = 200;

/// `(2 + √2)/4`.
pub fn tsirelson() -> BetaValue {
    BetaValue::TSIRELSON
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointwiseReport {
    pub p_b: f64,
    pub p_e: f64,
    /// `h(P_B)`
    pub lhs_bits: f64,
    /// `2(1 − P_E)`
    pub rhs_bits: f64,
    pub secure: bool,
    pub margin_bits: f64,
}

/// Evaluates `h(P_B) < 2(1 − P_E)`.
pub fn check_pointwise(p_b: Probability, p_e: Probability) -> Result<PointwiseReport> {
    for (name, p) in [("P_B", p_b), ("P_E", p_e)] {
        if p.get() < 0.5 {
            return Err(Error::domain(format!(
                "{name} = {} is below 1/2; guessing probabilities are at least chance",
                p.get()
            )));
        }
    }
    let lhs = binary_entropy(p_b);
    let rhs = 2.0 * (1.0 - p_e.get());
    Ok(PointwiseReport {
        p_b: p_b.get(),
        p_e: p_e.get(),
        lhs_bits: lhs,
        rhs_bits: rhs,
        secure: lhs < rhs,
        margin_bits: rhs - lhs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub beta: BetaValue,
    pub theory: Theory,
    /// `h(β)`
    pub lhs_bits: f64,
    /// `3 − 4 f(β)`
    pub rhs_bits: f64,
    pub secure: bool,
    pub margin_bits: f64,
}

/// Evaluates `h(β) < 3 − 4 f(β)` for the given model.
pub fn check_condition(beta: BetaValue, model: &MonogamyModel) -> Result<ConditionReport> {
    let f = evaluate(model, beta)?;
    let lhs = binary_entropy(beta.as_probability());
    let rhs = 3.0 - 4.0 * f.get();
    Ok(ConditionReport {
        beta,
        theory: model.theory(),
        lhs_bits: lhs,
        rhs_bits: rhs,
        secure: lhs < rhs,
        margin_bits: rhs - lhs,
    })
}

/// `(3 − 4 f(β)) − h(β)`; positive exactly when the condition holds.
pub fn condition_margin(beta: BetaValue, model: &MonogamyModel) -> Result<f64> {
    check_condition(beta, model).map(|r| r.margin_bits)
}

/// Largest `f` still compatible with security at `β`: `(3 − h(β))/4`.
pub fn condition_boundary(beta: BetaValue) -> f64 {
    (3.0 - binary_entropy(beta.as_probability())) / 4.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalStatus {
    /// The margin changes sign inside the bracket.
    Root,
    /// Secure everywhere on the bracket.
    AlwaysSecure,
    /// Insecure everywhere on the bracket, including its upper end.
    NeverSecure,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalResult {
    pub theory: Theory,
    /// Midpoint of the final bracket for [`CriticalStatus::Root`]; the lower
    /// end for `AlwaysSecure`; the upper end for `NeverSecure`.
    pub beta_star: BetaValue,
    pub bracket: (f64, f64),
    pub tolerance: f64,
    pub iterations: u32,
    pub status: CriticalStatus,
    /// Condition margin at `beta_star`.
    pub margin_bits: f64,
}

/// Bisects the condition margin on `[3/4, upper]`, where `upper` is the top
/// of the model's domain.
///
/// The margin is strictly increasing on that bracket (the entropy term falls,
/// the monogamy term cannot rise), so a single sign change is a root.
pub fn critical_beta(model: &MonogamyModel, tolerance: f64) -> Result<CriticalResult> {
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(Error::usage(format!(
            "tolerance must be a positive finite number, got {tolerance}"
        )));
    }
    let upper = model.domain_upper().get();
    if upper < CLASSICAL_BOUND || !model.contains(CLASSICAL_BOUND) {
        return Err(Error::usage(format!(
            "{} model domain [{}, {upper}] does not cover the bracket [3/4, {upper}]",
            model.theory(),
            model.domain_lower()
        )));
    }
    let margin = |b: f64| -> Result<f64> { condition_margin(BetaValue::new(b)?, model) };

    let mut lo = CLASSICAL_BOUND;
    let mut hi = upper;
    let g_lo = margin(lo)?;
    let g_hi = margin(hi)?;

    let done = |status, beta: f64, bracket, iterations, margin_bits| {
        Ok(CriticalResult {
            theory: model.theory(),
            beta_star: BetaValue::new(beta)?,
            bracket,
            tolerance,
            iterations,
            status,
            margin_bits,
        })
    };

    if g_lo > 0.0 {
        return done(CriticalStatus::AlwaysSecure, lo, (lo, hi), 0, g_lo);
    }
    if g_hi <= 0.0 {
        return done(CriticalStatus::NeverSecure, hi, (lo, hi), 0, g_hi);
    }

    // invariant: margin(lo) <= 0 < margin(hi)
    let mut iterations = 0;
    while hi - lo > tolerance && iterations < MAX_BISECTION_ITERATIONS {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        if margin(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let star = lo + 0.5 * (hi - lo);
    done(
        CriticalStatus::Root,
        star,
        (lo, hi),
        iterations,
        margin(star)?,
    )
}
