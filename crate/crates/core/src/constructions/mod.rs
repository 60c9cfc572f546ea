//! Explicit hypersurfaces in R^4 assembled from a base affine sphere and a
//! planar profile curve (or a constant), together with the affine normal
//! each construction is expected to have.

pub mod base;
pub mod conditions;
pub mod curve;
pub mod instances;
pub mod synth;

pub use base::{BaseJet, BaseKind, BaseSurface};
pub use conditions::*;
pub use curve::{Curve, CurveFn, CurveJet, SampledCurve};
pub use synth::{synthesize_curve, CurveOde, SynthesisRequest};

use crate::error::{Error, Result};
use crate::numeric::{induce, InducedData, Jet2Point, NormalField};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// `(g1, g2 * psi)` over a definite proper base.
    C1Proper,
    /// Same shape, constant normal `e1`.
    C1Improper,
    /// `(g1 * psi + g2 * e3, g1)` over the elliptic paraboloid.
    C2,
    /// `(t * psi - c t^4 e3, t)` over the elliptic paraboloid.
    C3a,
    /// `(psi + c t^3 e3, t^4)` over the elliptic paraboloid.
    C3b,
    C1t8Proper,
    C1t8Improper,
    C2t8,
    C3t8a,
    C3t8b,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::C1Proper,
        Family::C1Improper,
        Family::C2,
        Family::C3a,
        Family::C3b,
        Family::C1t8Proper,
        Family::C1t8Improper,
        Family::C2t8,
        Family::C3t8a,
        Family::C3t8b,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::C1Proper => "c1-proper",
            Family::C1Improper => "c1-improper",
            Family::C2 => "c2",
            Family::C3a => "c3a",
            Family::C3b => "c3b",
            Family::C1t8Proper => "c1t8-proper",
            Family::C1t8Improper => "c1t8-improper",
            Family::C2t8 => "c2t8",
            Family::C3t8a => "c3t8a",
            Family::C3t8b => "c3t8b",
        }
    }

    /// Families over a Lorentzian base, whose difference tensor has a boost
    /// in its stabilizer.
    pub fn is_t8(self) -> bool {
        matches!(self, Family::C1t8Proper | Family::C1t8Improper | Family::C2t8 | Family::C3t8a | Family::C3t8b)
    }

    pub fn is_c3(self) -> bool {
        matches!(self, Family::C3a | Family::C3b | Family::C3t8a | Family::C3t8b)
    }

    /// Whether the affine normal is `-H * position` with `H != 0`.
    pub fn is_proper(self) -> bool {
        matches!(self, Family::C1Proper | Family::C2 | Family::C1t8Proper | Family::C2t8)
    }

    fn admissible_bases(self) -> &'static [BaseSurface] {
        use BaseSurface::*;
        match self {
            Family::C1Proper | Family::C1Improper => &[Sphere, TwoSheeted, Titeica],
            Family::C1t8Proper | Family::C1t8Improper => &[OneSheeted],
            Family::C2 | Family::C3a | Family::C3b => &[EllipticParaboloid],
            Family::C2t8 | Family::C3t8a | Family::C3t8b => &[HyperbolicParaboloid],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        Family::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| Error::Config(format!("unknown family `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Shape {
    Curve(Curve),
    Constant(f64),
}

/// A validated member of one of the construction families.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilySpec {
    pub family: Family,
    pub base: BaseSurface,
    pub shape: Shape,
    /// Requested mean curvature: `+-1` for proper families, `0` otherwise.
    pub h: f64,
    /// Length of the constant affine normal of improper families.
    pub normal_scale: f64,
}

/// Point used to calibrate constant normals.
const CALIBRATION_POINT: (f64, f64, f64) = (1.0, 0.25, 0.5);

impl FamilySpec {
    pub fn new(family: Family, base: BaseSurface, shape: Shape, h: Option<f64>) -> Result<FamilySpec> {
        if !family.admissible_bases().contains(&base) {
            let allowed: Vec<&str> = family.admissible_bases().iter().map(|b| b.name()).collect();
            return Err(Error::Config(format!("family {family} needs base {}, got {base}", allowed.join(" or "))));
        }
        match (&shape, family.is_c3()) {
            (Shape::Curve(_), true) => {
                return Err(Error::Config(format!("family {family} takes a constant c, not a curve")))
            }
            (Shape::Constant(_), false) => return Err(Error::Config(format!("family {family} takes a profile curve"))),
            (Shape::Constant(c), true) => {
                let ok = if family.is_t8() { *c != 0.0 } else { *c > 0.0 };
                if !ok || !c.is_finite() {
                    return Err(Error::Config(format!("constant c = {c} not allowed for {family}")));
                }
            }
            _ => {}
        }
        let h = match (family.is_proper(), h) {
            (true, None) => 1.0,
            (true, Some(x)) if x == 1.0 || x == -1.0 => x,
            (false, None) => 0.0,
            (false, Some(0.0)) => 0.0,
            (_, Some(x)) => {
                return Err(Error::Config(format!(
                    "mean curvature {x} not allowed for {family} (expected {})",
                    if family.is_proper() { "+1 or -1" } else { "0" }
                )))
            }
        };
        let mut spec = FamilySpec { family, base, shape, h, normal_scale: 1.0 };
        if family.is_c3() {
            spec.normal_scale = spec.calibrate_normal()?;
        }
        Ok(spec)
    }

    pub fn curve(&self) -> Option<&Curve> {
        match &self.shape {
            Shape::Curve(c) => Some(c),
            Shape::Constant(_) => None,
        }
    }

    pub fn constant(&self) -> Option<f64> {
        match self.shape {
            Shape::Constant(c) => Some(c),
            Shape::Curve(_) => None,
        }
    }

    pub fn eps1(&self) -> f64 {
        self.base.eps1().unwrap_or(0.0)
    }

    /// Direction of the constant normal for improper families.
    fn normal_direction(&self) -> [f64; 4] {
        match self.family {
            Family::C3b | Family::C3t8b => [0.0, 0.0, 0.0, 1.0],
            Family::C3a | Family::C3t8a => [0.0, 0.0, 1.0, 0.0],
            _ => [1.0, 0.0, 0.0, 0.0],
        }
    }

    /// For a constant field `lambda * e`, the metric scales with `1/lambda`
    /// and the volume determinant with `lambda`, so the Blaschke condition
    /// fixes `lambda^5 = |det h_e| / det_e^2`.
    fn calibrate_normal(&self) -> Result<f64> {
        let (t, v, w) = CALIBRATION_POINT;
        let jet = build_immersion(self, t, v, w)?;
        let d: InducedData = induce(&jet, &self.normal_direction())?;
        let det_h = crate::numeric::det3(&d.h).abs();
        Ok((det_h / (d.det_wedge * d.det_wedge)).powf(0.2))
    }

    /// Smallest distance-like margin to the boundary of the parameter domain.
    pub fn domain_margin(&self, t: f64, v: f64, w: f64) -> f64 {
        let mut m = self.base.domain_margin(v, w);
        if self.family.is_c3() {
            m = m.min(t);
        }
        if let Some((a, b)) = self.curve().and_then(Curve::range) {
            m = m.min(t - a).min(b - t);
        }
        m
    }

    pub fn describe(&self) -> serde_json::Value {
        let mut o = serde_json::json!({
            "family": self.family.name(),
            "base": self.base.name(),
            "H": self.h,
        });
        match &self.shape {
            Shape::Curve(c) => o["curve"] = c.describe().into(),
            Shape::Constant(c) => {
                o["c"] = (*c).into();
                o["normal_scale"] = self.normal_scale.into();
            }
        }
        if let Some(e) = self.base.eps1() {
            o["eps1"] = e.into();
        }
        o
    }
}

fn out_of_domain(t: f64, v: f64, w: f64, e: Error) -> Error {
    match e {
        Error::OutOfDomain { reason, .. } => Error::OutOfDomain { t, v, w, reason },
        Error::CurveRange { start, end, .. } => {
            Error::OutOfDomain { t, v, w, reason: format!("curve only available on [{start}, {end}]") }
        }
        Error::Config(reason) => Error::OutOfDomain { t, v, w, reason },
        other => other,
    }
}

fn lift(p: [f64; 3], last: f64) -> [f64; 4] {
    [p[0], p[1], p[2], last]
}

/// Exact 2-jet of the immersion at `(t, v, w)`.
pub fn build_immersion(spec: &FamilySpec, t: f64, v: f64, w: f64) -> Result<Jet2Point> {
    let b = spec.base.jet(v, w).map_err(|e| out_of_domain(t, v, w, e))?;
    let z3 = [0.0; 3];
    let (x, d1, d2);
    match spec.family {
        Family::C1Proper | Family::C1Improper | Family::C1t8Proper | Family::C1t8Improper => {
            let c = spec.curve().expect("validated").jet(t).map_err(|e| out_of_domain(t, v, w, e))?;
            let warp = |s: f64, p: [f64; 3]| [0.0, s * p[0], s * p[1], s * p[2]];
            x = [c.g1[0], c.g2[0] * b.x[0], c.g2[0] * b.x[1], c.g2[0] * b.x[2]];
            let mut dt = warp(c.g2[1], b.x);
            dt[0] = c.g1[1];
            d1 = [dt, warp(c.g2[0], b.d1[0]), warp(c.g2[0], b.d1[1])];
            let mut tt = warp(c.g2[2], b.x);
            tt[0] = c.g1[2];
            d2 = [
                tt,
                warp(c.g2[1], b.d1[0]),
                warp(c.g2[1], b.d1[1]),
                warp(c.g2[0], b.d2[0]),
                warp(c.g2[0], b.d2[1]),
                warp(c.g2[0], b.d2[2]),
            ];
        }
        Family::C2 | Family::C2t8 => {
            let c = spec.curve().expect("validated").jet(t).map_err(|e| out_of_domain(t, v, w, e))?;
            let gr = |k: usize| {
                let mut p = lift(b.x.map(|q| q * c.g1[k]), c.g1[k]);
                p[2] += c.g2[k];
                p
            };
            let sc = |s: f64, p: [f64; 3]| lift(p.map(|q| q * s), 0.0);
            x = gr(0);
            d1 = [gr(1), sc(c.g1[0], b.d1[0]), sc(c.g1[0], b.d1[1])];
            d2 = [
                gr(2),
                sc(c.g1[1], b.d1[0]),
                sc(c.g1[1], b.d1[1]),
                sc(c.g1[0], b.d2[0]),
                sc(c.g1[0], b.d2[1]),
                sc(c.g1[0], b.d2[2]),
            ];
        }
        Family::C3a | Family::C3t8a => {
            let c = spec.constant().expect("validated");
            if t <= 0.0 {
                return Err(Error::OutOfDomain { t, v, w, reason: "t must be positive".into() });
            }
            let sc = |s: f64, p: [f64; 3]| lift(p.map(|q| q * s), 0.0);
            x = [t * b.x[0], t * b.x[1], t * b.x[2] - c * t.powi(4), t];
            d1 = [[b.x[0], b.x[1], b.x[2] - 4.0 * c * t.powi(3), 1.0], sc(t, b.d1[0]), sc(t, b.d1[1])];
            d2 = [
                [0.0, 0.0, -12.0 * c * t * t, 0.0],
                lift(b.d1[0], 0.0),
                lift(b.d1[1], 0.0),
                sc(t, b.d2[0]),
                sc(t, b.d2[1]),
                sc(t, b.d2[2]),
            ];
        }
        Family::C3b | Family::C3t8b => {
            let c = spec.constant().expect("validated");
            if t <= 0.0 {
                return Err(Error::OutOfDomain { t, v, w, reason: "t must be positive".into() });
            }
            x = [b.x[0], b.x[1], b.x[2] + c * t.powi(3), t.powi(4)];
            d1 = [[0.0, 0.0, 3.0 * c * t * t, 4.0 * t.powi(3)], lift(b.d1[0], 0.0), lift(b.d1[1], 0.0)];
            d2 = [
                [0.0, 0.0, 6.0 * c * t, 12.0 * t * t],
                lift(z3, 0.0),
                lift(z3, 0.0),
                lift(b.d2[0], 0.0),
                lift(b.d2[1], 0.0),
                lift(b.d2[2], 0.0),
            ];
        }
    }
    Ok(Jet2Point { x, d1, d2 })
}

/// Affine normal predicted by the construction: `-H * position` for proper
/// families and a calibrated constant vector otherwise. The orientation is
/// not yet adjusted to the Lorentzian sign convention.
pub fn expected_normal(spec: &FamilySpec, jet: &Jet2Point) -> NormalField {
    if spec.family.is_proper() {
        let s = |p: [f64; 4]| p.map(|c| -spec.h * c);
        NormalField { xi: s(jet.x), dxi: jet.d1.map(s) }
    } else {
        NormalField { xi: spec.normal_direction().map(|c| c * spec.normal_scale), dxi: [[0.0; 4]; 3] }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(f: Family, b: BaseSurface, shape: Shape) -> Result<FamilySpec> {
        FamilySpec::new(f, b, shape, None)
    }

    #[test]
    fn base_admissibility() {
        let cur = || Shape::Curve("cosh,sinh".parse().unwrap());
        assert!(spec(Family::C2, BaseSurface::TwoSheeted, cur()).is_err());
        assert!(spec(Family::C1Proper, BaseSurface::EllipticParaboloid, cur()).is_err());
        assert!(spec(Family::C1Proper, BaseSurface::TwoSheeted, cur()).is_ok());
        assert!(spec(Family::C3a, BaseSurface::EllipticParaboloid, cur()).is_err());
        assert!(spec(Family::C3a, BaseSurface::EllipticParaboloid, Shape::Constant(-1.0)).is_err());
        assert!(spec(Family::C3t8a, BaseSurface::HyperbolicParaboloid, Shape::Constant(-1.0)).is_ok());
        assert!(FamilySpec::new(Family::C1Proper, BaseSurface::Sphere, cur(), Some(0.5)).is_err());
        assert!(FamilySpec::new(Family::C3b, BaseSurface::EllipticParaboloid, Shape::Constant(1.0), Some(1.0)).is_err());
    }

    #[test]
    fn constant_normal_scales() {
        for c in [0.5, 1.0, 3.0] {
            let a = spec(Family::C3a, BaseSurface::EllipticParaboloid, Shape::Constant(c)).unwrap();
            assert!((a.normal_scale - (12.0 * c).powf(0.2)).abs() < 1e-12);
            let b = spec(Family::C3b, BaseSurface::EllipticParaboloid, Shape::Constant(c)).unwrap();
            assert!((b.normal_scale - (64.0 / (81.0 * c.powi(4))).powf(0.2)).abs() < 1e-12);
        }
    }

    #[test]
    fn jets_match_finite_differences() {
        let specs = [
            spec(Family::C1Proper, BaseSurface::TwoSheeted, Shape::Curve("cosh,sinh".parse().unwrap())).unwrap(),
            spec(Family::C2, BaseSurface::EllipticParaboloid, Shape::Curve("t,-1/2*t^-1".parse().unwrap())).unwrap(),
            spec(Family::C3a, BaseSurface::EllipticParaboloid, Shape::Constant(1.0)).unwrap(),
            spec(Family::C3b, BaseSurface::EllipticParaboloid, Shape::Constant(2.0)).unwrap(),
        ];
        let e = 1e-5;
        let p = [0.9, 0.3, -0.2];
        for s in &specs {
            let j = build_immersion(s, p[0], p[1], p[2]).unwrap();
            for a in 0..3 {
                let mut q = p;
                q[a] += e;
                let jp = build_immersion(s, q[0], q[1], q[2]).unwrap();
                q[a] -= 2.0 * e;
                let jm = build_immersion(s, q[0], q[1], q[2]).unwrap();
                for k in 0..4 {
                    let d = (jp.x[k] - jm.x[k]) / (2.0 * e);
                    assert!((d - j.d1[a][k]).abs() < 1e-7, "{} d{a} x{k}", s.family);
                    for b in 0..3 {
                        let dd = (jp.d1[b][k] - jm.d1[b][k]) / (2.0 * e);
                        assert!((dd - j.second(a, b)[k]).abs() < 1e-6, "{} d{a}{b} x{k}", s.family);
                    }
                }
            }
        }
    }

    #[test]
    fn outside_chart_is_reported() {
        let s = spec(Family::C1Proper, BaseSurface::Sphere, Shape::Curve("cos,sin".parse().unwrap())).unwrap();
        assert!(matches!(build_immersion(&s, 0.5, 0.9, 0.9), Err(Error::OutOfDomain { .. })));
        let c = spec(Family::C3a, BaseSurface::EllipticParaboloid, Shape::Constant(1.0)).unwrap();
        assert!(build_immersion(&c, -0.5, 0.0, 0.0).is_err());
    }
}
