//! Ordinary differential conditions on the profile curve under which the
//! warped and graph constructions are Blaschke-normalized hyperspheres.
//!
//! Each condition has the shape `lhs = sign * W * g1'^2`, where `W` is the
//! Wronskian of the curve. For the families with a definite base the sign
//! is prescribed by the data; for the Lorentzian-base families the
//! condition uses `|W|` and the sign becomes a free branch choice.

use super::curve::{Curve, CurveJet};
use super::Family;
use crate::error::{Error, Result};
use serde::Serialize;

/// Default relative tolerance for accepting a condition.
pub const CONDITION_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditionTerms {
    pub lhs: f64,
    /// Prescribed sign of `W`, or `None` when only `|W|` enters.
    pub sign: Option<f64>,
    pub wronskian: f64,
    pub g1p_sq: f64,
}

impl ConditionTerms {
    pub fn rhs(&self) -> f64 {
        match self.sign {
            Some(s) => s * self.wronskian * self.g1p_sq,
            None => self.wronskian.abs() * self.g1p_sq,
        }
    }
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Both sides of the condition for `family` at one curve jet.
pub fn condition_terms(family: Family, eps1: f64, j: &CurveJet) -> Result<ConditionTerms> {
    let (g1, g1p, g2, g2p) = (j.g1[0], j.g1[1], j.g2[0], j.g2[1]);
    let a5 = j.alpha().abs().powi(5);
    let (lhs, s) = match family {
        Family::C1Proper => (g2 * g2 * a5, Some(sign(g1p * g2 * eps1))),
        Family::C1Improper => (g2 * g2 * g2p.abs().powi(5), Some(sign(g1p * g2 * eps1))),
        Family::C2 => (g1 * g1 * a5, Some(-sign(g1 * g1p))),
        Family::C1t8Proper => (g2 * g2 * a5, None),
        Family::C1t8Improper => (g2 * g2 * g2p.abs().powi(5), None),
        Family::C2t8 => (g1 * g1 * a5, None),
        other => {
            return Err(Error::Config(format!("family {other} has no curve condition")));
        }
    };
    Ok(ConditionTerms { lhs, sign: s, wronskian: j.wronskian(), g1p_sq: g1p * g1p })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionResult {
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs - rhs| / max(|lhs|, |rhs|)`.
    pub residual: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

pub fn check_condition(family: Family, eps1: f64, curve: &Curve, t: f64, tol: f64) -> Result<ConditionResult> {
    let jet = curve.jet(t)?;
    let terms = condition_terms(family, eps1, &jet)?;
    let (lhs, rhs) = (terms.lhs, terms.rhs());
    let scale = lhs.abs().max(rhs.abs());
    let residual = if scale > 0.0 { (lhs - rhs).abs() / scale } else { 0.0 };
    let reason = if terms.sign == Some(0.0) {
        Some("sign factor vanishes".to_string())
    } else if terms.g1p_sq == 0.0 {
        Some("g1' vanishes".to_string())
    } else if lhs == 0.0 {
        Some("left-hand side vanishes".to_string())
    } else if !residual.is_finite() {
        Some("non-finite residual".to_string())
    } else {
        None
    };
    Ok(ConditionResult { t, lhs, rhs, residual, pass: reason.is_none() && residual <= tol, reason })
}

pub fn check_condition_c1_proper(curve: &Curve, eps1: f64, t: f64) -> Result<ConditionResult> {
    check_condition(Family::C1Proper, eps1, curve, t, CONDITION_TOL)
}

pub fn check_condition_c1_improper(curve: &Curve, eps1: f64, t: f64) -> Result<ConditionResult> {
    check_condition(Family::C1Improper, eps1, curve, t, CONDITION_TOL)
}

pub fn check_condition_c2(curve: &Curve, t: f64) -> Result<ConditionResult> {
    check_condition(Family::C2, 0.0, curve, t, CONDITION_TOL)
}

/// Lorentzian-base variants; `family` selects which of the three.
pub fn check_condition_t8(family: Family, curve: &Curve, t: f64) -> Result<ConditionResult> {
    if !family.is_t8() || family.is_c3() {
        return Err(Error::Config(format!("{family} is not a curve family over a Lorentzian base")));
    }
    check_condition(family, 0.0, curve, t, CONDITION_TOL)
}

/// Second derivative of `g2` forced by the condition, given `g1` exactly
/// and the current `g2`, `g2'`. `branch` fixes the sign of `W` for the
/// absolute-value conditions.
pub fn solve_g2pp(family: Family, eps1: f64, g1: [f64; 3], g2: f64, g2p: f64, branch: f64) -> Result<(f64, f64)> {
    let probe = CurveJet { g1, g2: [g2, g2p, 0.0] };
    let terms = condition_terms(family, eps1, &probe)?;
    let s = terms.sign.unwrap_or(branch);
    if s == 0.0 || g1[1] == 0.0 {
        return Err(Error::Synthesis { t: f64::NAN, reason: "degenerate sign factor or vanishing g1'".into() });
    }
    let w = terms.lhs / (s * terms.g1p_sq);
    Ok(((w + g1[2] * g2p) / g1[1], s))
}
