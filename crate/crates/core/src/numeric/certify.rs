use super::induce::{blaschke_residual, induce, shape_operator, signature_check, Signature};
use super::measure::{
    classify_symmetry, measure_difference_tensor, structure_case, ClassifyTolerance, FrameKind, SymmetryClass,
};
use crate::constructions::{
    build_immersion, check_condition, expected_normal, ConditionResult, FamilySpec, CONDITION_TOL,
};
use crate::error::Result;
use crate::grid::Grid3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Bound on `max |S - H Id|`.
    pub shape: f64,
    /// Bound on the relative Blaschke defect.
    pub blaschke: f64,
    /// Fraction of points that must meet the Blaschke bound.
    pub blaschke_fraction: f64,
    /// Relative transversal component allowed in the derivative of the normal.
    pub equiaffine: f64,
    /// Relative tolerance of the curve condition.
    pub condition: f64,
    /// Points closer than this to the chart boundary are flagged.
    pub boundary_margin: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            shape: 1e-10,
            blaschke: 1e-6,
            blaschke_fraction: 0.99,
            equiaffine: 1e-8,
            condition: CONDITION_TOL,
            boundary_margin: 1e-3,
        }
    }
}

/// Optional finite-difference measurement of the difference tensor.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureOptions {
    pub step: f64,
    pub classify: ClassifyTolerance,
    pub nu_tol: f64,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        MeasureOptions { step: 1e-2, classify: ClassifyTolerance::default(), nu_tol: 1e-4 }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct CertifyOptions {
    pub tolerances: Tolerances,
    pub measure: Option<MeasureOptions>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointMeasurement {
    pub frame: FrameKind,
    pub a4: f64,
    pub a6: f64,
    pub b4: f64,
    pub canonical_residual: f64,
    pub class: SymmetryClass,
    pub nu: f64,
    pub case: u8,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointReport {
    pub t: f64,
    pub v: f64,
    pub w: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub s_residual: Option<f64>,
    pub blaschke_residual: Option<f64>,
    pub signature: Option<Signature>,
    pub xi_flipped: bool,
    pub h_eff: f64,
    pub near_boundary: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measured: Option<PointMeasurement>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub points: usize,
    pub errors: usize,
    pub max_s_residual: f64,
    pub blaschke_pass_fraction: f64,
    pub max_blaschke_residual: f64,
    pub signature_failures: usize,
    pub inconsistent_orientation: bool,
    pub condition_failures: usize,
    pub near_boundary: usize,
    pub verdict: Verdict,
    pub reasons: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificationReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: serde_json::Value,
    pub grid: Grid3,
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureOptions>,
    pub conditions: Vec<ConditionResult>,
    pub summary: Summary,
    #[serde(skip)]
    pub runtime_seconds: f64,
    pub points: Vec<PointReport>,
}

impl CertificationReport {
    pub fn passed(&self) -> bool {
        self.summary.verdict == Verdict::Pass
    }
}

/// Curve condition at every `t` of the grid, for families that have one.
pub fn check_curve_conditions(spec: &FamilySpec, ts: &[f64], tol: f64) -> Result<Vec<ConditionResult>> {
    let Some(curve) = spec.curve() else {
        return Ok(Vec::new());
    };
    ts.iter().map(|&t| check_condition(spec.family, spec.eps1(), curve, t, tol)).collect()
}

/// Certifies a single point: Blaschke normalization, shape operator and
/// signature of the metric for the predicted affine normal.
pub fn certify_point(spec: &FamilySpec, t: f64, v: f64, w: f64, opts: &CertifyOptions) -> PointReport {
    let tol = &opts.tolerances;
    let mut rep = PointReport {
        t,
        v,
        w,
        error: None,
        s_residual: None,
        blaschke_residual: None,
        signature: None,
        xi_flipped: false,
        h_eff: spec.h,
        near_boundary: spec.domain_margin(t, v, w) < tol.boundary_margin,
        measured: None,
    };
    let run = |rep: &mut PointReport| -> Result<()> {
        let jet = build_immersion(spec, t, v, w)?;
        let mut normal = expected_normal(spec, &jet);
        let mut data = induce(&jet, &normal.xi)?;
        let mut sig = signature_check(&data.h);
        if sig == Signature::ReversedLorentz {
            normal = normal.flipped();
            data = induce(&jet, &normal.xi)?;
            sig = signature_check(&data.h);
            rep.xi_flipped = true;
            rep.h_eff = -spec.h;
        }
        rep.signature = Some(sig);
        rep.blaschke_residual = Some(blaschke_residual(&data));
        let s = shape_operator(&jet, &normal, tol.equiaffine)?;
        let mut dev = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                let id = if i == j { rep.h_eff } else { 0.0 };
                dev = dev.max((s[i][j] - id).abs());
            }
        }
        rep.s_residual = Some(dev);
        if let (Some(m), Signature::LorentzOk) = (&opts.measure, sig) {
            let k = measure_difference_tensor(spec, t, v, w, m.step)?;
            rep.measured = Some(PointMeasurement {
                frame: k.frame_kind,
                a4: k.a4,
                a6: k.a6,
                b4: k.b4,
                canonical_residual: k.residual,
                class: classify_symmetry(&k, &m.classify),
                nu: k.structure.nu,
                case: structure_case(&k, m.nu_tol),
            });
        }
        Ok(())
    };
    if let Err(e) = run(&mut rep) {
        rep.error = Some(e.to_string());
    }
    rep
}

/// Certifies every grid point in parallel; results keep grid order.
pub fn certify(spec: &FamilySpec, grid: &Grid3, opts: &CertifyOptions) -> Result<CertificationReport> {
    let start = Instant::now();
    let tol = opts.tolerances;
    let conditions = check_curve_conditions(spec, &grid.t.values(), tol.condition)?;
    let points: Vec<PointReport> =
        grid.points().par_iter().map(|p| certify_point(spec, p[0], p[1], p[2], opts)).collect();

    let n = points.len();
    let errors = points.iter().filter(|p| p.error.is_some()).count();
    let max_s = points.iter().filter_map(|p| p.s_residual).fold(0.0, f64::max);
    let b_ok = points.iter().filter(|p| p.blaschke_residual.is_some_and(|r| r < tol.blaschke)).count();
    let max_b = points.iter().filter_map(|p| p.blaschke_residual).fold(0.0, f64::max);
    let sig_fail = points.iter().filter(|p| p.signature != Some(Signature::LorentzOk)).count();
    let flips = points.iter().filter(|p| p.xi_flipped).count();
    let inconsistent = flips != 0 && flips != n;
    let cond_fail = conditions.iter().filter(|c| !c.pass).count();
    let frac = if n == 0 { 0.0 } else { b_ok as f64 / n as f64 };

    let mut reasons = Vec::new();
    if n == 0 {
        reasons.push("empty grid".to_string());
    }
    if errors > 0 {
        reasons.push(format!("{errors} points could not be evaluated"));
    }
    if !(max_s < tol.shape) || points.iter().any(|p| p.error.is_none() && p.s_residual.is_none()) {
        reasons.push(format!("shape operator deviates from H Id by {max_s:e}"));
    }
    if frac < tol.blaschke_fraction {
        reasons.push(format!("Blaschke condition met at only {:.2}% of points", 100.0 * frac));
    }
    if sig_fail > 0 {
        reasons.push(format!("{sig_fail} points without Lorentzian signature"));
    }
    if inconsistent {
        reasons.push("orientation of the normal is not uniform".to_string());
    }
    if cond_fail > 0 {
        reasons.push(format!("curve condition violated at {cond_fail} parameter values"));
    }
    let summary = Summary {
        points: n,
        errors,
        max_s_residual: max_s,
        blaschke_pass_fraction: frac,
        max_blaschke_residual: max_b,
        signature_failures: sig_fail,
        inconsistent_orientation: inconsistent,
        condition_failures: cond_fail,
        near_boundary: points.iter().filter(|p| p.near_boundary).count(),
        verdict: if reasons.is_empty() { Verdict::Pass } else { Verdict::Fail },
        reasons,
    };
    Ok(CertificationReport {
        tool: "hypersym",
        version: crate::VERSION,
        config: spec.describe(),
        grid: *grid,
        tolerances: tol,
        measure: opts.measure,
        conditions,
        summary,
        runtime_seconds: start.elapsed().as_secs_f64(),
        points,
    })
}
