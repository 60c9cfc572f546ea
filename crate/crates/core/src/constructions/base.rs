//! Two-dimensional affine spheres in R^3 used as bases of the warped and
//! graph constructions, with exact second-order jets.

use crate::error::{Error, Result};
use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseSurface {
    /// `z = (v^2 + w^2) / 2`, definite improper sphere.
    EllipticParaboloid,
    /// `z = v w`, Lorentzian improper sphere.
    HyperbolicParaboloid,
    /// Upper hemisphere `z = sqrt(1 - v^2 - w^2)`.
    Sphere,
    /// Upper sheet `z = sqrt(1 + v^2 + w^2)`.
    TwoSheeted,
    /// `x = sqrt(1 - v^2 + w^2)`, graph over the `(y, z)` plane.
    OneSheeted,
    /// `x y z = const` on the positive octant, scaled to unit mean curvature.
    Titeica,
}

/// Position and derivatives of a parametrized surface in R^3.
/// Second derivatives are stored as `[vv, vw, ww]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BaseJet {
    pub x: [f64; 3],
    pub d1: [[f64; 3]; 2],
    pub d2: [[f64; 3]; 3],
}

/// How the affine normal of the base is determined.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum BaseKind {
    /// Affine normal `-eps1 * position`.
    Proper { eps1: f64 },
    /// Affine normal `e3`.
    Improper,
}

impl BaseSurface {
    pub const ALL: [BaseSurface; 6] = [
        BaseSurface::EllipticParaboloid,
        BaseSurface::HyperbolicParaboloid,
        BaseSurface::Sphere,
        BaseSurface::TwoSheeted,
        BaseSurface::OneSheeted,
        BaseSurface::Titeica,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BaseSurface::EllipticParaboloid => "elliptic-paraboloid",
            BaseSurface::HyperbolicParaboloid => "hyperbolic-paraboloid",
            BaseSurface::Sphere => "sphere",
            BaseSurface::TwoSheeted => "two-sheeted",
            BaseSurface::OneSheeted => "one-sheeted",
            BaseSurface::Titeica => "titeica",
        }
    }

    pub fn kind(self) -> BaseKind {
        match self {
            BaseSurface::EllipticParaboloid | BaseSurface::HyperbolicParaboloid => BaseKind::Improper,
            BaseSurface::Sphere | BaseSurface::OneSheeted => BaseKind::Proper { eps1: 1.0 },
            BaseSurface::TwoSheeted | BaseSurface::Titeica => BaseKind::Proper { eps1: -1.0 },
        }
    }

    pub fn eps1(self) -> Option<f64> {
        match self.kind() {
            BaseKind::Proper { eps1 } => Some(eps1),
            BaseKind::Improper => None,
        }
    }

    /// Whether the affine metric of the base is Lorentzian.
    pub fn is_lorentzian(self) -> bool {
        matches!(self, BaseSurface::HyperbolicParaboloid | BaseSurface::OneSheeted)
    }

    /// Signed distance-like margin to the chart boundary; positive inside.
    pub fn domain_margin(self, v: f64, w: f64) -> f64 {
        match self {
            BaseSurface::Sphere => 1.0 - v * v - w * w,
            BaseSurface::OneSheeted => 1.0 - v * v + w * w,
            BaseSurface::Titeica => v.min(w),
            _ => f64::INFINITY,
        }
    }

    pub fn jet(self, v: f64, w: f64) -> Result<BaseJet> {
        if !(v.is_finite() && w.is_finite()) || self.domain_margin(v, w) <= 0.0 {
            return Err(Error::OutOfDomain { t: f64::NAN, v, w, reason: format!("outside the {} chart", self.name()) });
        }
        Ok(match self {
            BaseSurface::EllipticParaboloid => graph_z(v, w, [(v * v + w * w) / 2.0, v, w, 1.0, 0.0, 1.0]),
            BaseSurface::HyperbolicParaboloid => graph_z(v, w, [v * w, w, v, 0.0, 1.0, 0.0]),
            BaseSurface::Sphere => graph_z(v, w, sqrt_quadric(v, w, -1.0, -1.0)),
            BaseSurface::TwoSheeted => graph_z(v, w, sqrt_quadric(v, w, 1.0, 1.0)),
            BaseSurface::OneSheeted => {
                let g = graph_z(v, w, sqrt_quadric(v, w, -1.0, 1.0));
                // Move the graph coordinate to the front.
                let rot = |p: [f64; 3]| [p[2], p[0], p[1]];
                BaseJet { x: rot(g.x), d1: g.d1.map(rot), d2: g.d2.map(rot) }
            }
            BaseSurface::Titeica => {
                let s = titeica_scale();
                let g = 1.0 / (v * w);
                let raw = graph_z(v, w, [g, -g / v, -g / w, 2.0 * g / (v * v), g / (v * w), 2.0 * g / (w * w)]);
                let sc = |p: [f64; 3]| p.map(|c| c * s);
                BaseJet { x: sc(raw.x), d1: raw.d1.map(sc), d2: raw.d2.map(sc) }
            }
        })
    }

    /// Affine normal of the base at a point, and its derivatives.
    pub fn normal(self, jet: &BaseJet) -> ([f64; 3], [[f64; 3]; 2]) {
        match self.kind() {
            BaseKind::Improper => ([0.0, 0.0, 1.0], [[0.0; 3]; 2]),
            BaseKind::Proper { eps1 } => {
                let s = |p: [f64; 3]| p.map(|c| -eps1 * c);
                (s(jet.x), jet.d1.map(s))
            }
        }
    }
}

impl fmt::Display for BaseSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BaseSurface {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        BaseSurface::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown base surface `{s}`")))
    }
}

/// Jet of `(v, w, g(v, w))` from `[g, g_v, g_w, g_vv, g_vw, g_ww]`.
fn graph_z(v: f64, w: f64, g: [f64; 6]) -> BaseJet {
    BaseJet {
        x: [v, w, g[0]],
        d1: [[1.0, 0.0, g[1]], [0.0, 1.0, g[2]]],
        d2: [[0.0, 0.0, g[3]], [0.0, 0.0, g[4]], [0.0, 0.0, g[5]]],
    }
}

/// Derivatives of `sqrt(1 + a v^2 + b w^2)`.
fn sqrt_quadric(v: f64, w: f64, a: f64, b: f64) -> [f64; 6] {
    let g = (1.0 + a * v * v + b * w * w).sqrt();
    let g3 = g * g * g;
    [g, a * v / g, b * w / g, a / g - a * a * v * v / g3, -a * b * v * w / g3, b / g - b * b * w * w / g3]
}

/// Affine metric of a surface with transversal field `xi`, and the
/// determinant `det(x_v, x_w, xi)`.
pub fn surface_metric(jet: &BaseJet, xi: [f64; 3]) -> Result<([[f64; 2]; 2], f64)> {
    let m = Matrix3::from_columns(&[Vector3::from(jet.d1[0]), Vector3::from(jet.d1[1]), Vector3::from(xi)]);
    let det = m.determinant();
    let lu = m.lu();
    let mut h = [[0.0; 2]; 2];
    for (slot, (i, j)) in [(0, 0), (0, 1), (1, 1)].into_iter().enumerate() {
        let c = lu.solve(&Vector3::from(jet.d2[slot])).ok_or(Error::NotTransversal(0.0))?;
        h[i][j] = c[2];
        h[j][i] = c[2];
    }
    Ok((h, det))
}

/// Scale making the Titeica surface a Blaschke-normalized sphere with
/// affine normal equal to its position vector. Computed once from the
/// unscaled surface at `(1, 1)`; the metric is scale invariant while the
/// volume determinant scales with the cube.
pub fn titeica_scale() -> f64 {
    static SCALE: OnceLock<f64> = OnceLock::new();
    *SCALE.get_or_init(|| {
        let g = 1.0;
        let raw = graph_z(1.0, 1.0, [g, -g, -g, 2.0 * g, g, 2.0 * g]);
        let (h, det) = surface_metric(&raw, raw.x).expect("titeica chart is transversal");
        let det_h = (h[0][0] * h[1][1] - h[0][1] * h[1][0]).abs();
        (det_h / (det * det)).powf(1.0 / 6.0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blaschke_ratio(b: BaseSurface, v: f64, w: f64) -> (f64, [[f64; 2]; 2]) {
        let j = b.jet(v, w).unwrap();
        let (xi, _) = b.normal(&j);
        let (h, det) = surface_metric(&j, xi).unwrap();
        let det_h = (h[0][0] * h[1][1] - h[0][1] * h[1][0]).abs();
        (det_h / (det * det), h)
    }

    #[test]
    fn titeica_scale_closed_form() {
        assert!((titeica_scale() - 3f64.powf(-0.5)).abs() < 1e-14);
    }

    #[test]
    fn bases_are_normalized() {
        let pts = [(0.3, 0.2), (0.6, 0.1), (0.5, 0.7)];
        for b in BaseSurface::ALL {
            for &(v, w) in &pts {
                let (r, h) = blaschke_ratio(b, v, w);
                assert!((r - 1.0).abs() < 1e-12, "{b} at ({v},{w}): ratio {r}");
                let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
                assert_eq!(det < 0.0, b.is_lorentzian(), "{b}");
            }
        }
    }

    #[test]
    fn sphere_chart_domain() {
        assert!(BaseSurface::Sphere.jet(0.9, 0.9).is_err());
        assert!(BaseSurface::Titeica.jet(-0.1, 1.0).is_err());
        assert!(BaseSurface::OneSheeted.jet(1.2, 0.0).is_err());
        assert!(BaseSurface::OneSheeted.jet(1.2, 1.0).is_ok());
    }

    #[test]
    fn jets_match_finite_differences() {
        let e = 1e-5;
        for b in BaseSurface::ALL {
            let (v, w) = (0.4, 0.3);
            let j = b.jet(v, w).unwrap();
            let jp = b.jet(v + e, w).unwrap();
            let jm = b.jet(v - e, w).unwrap();
            for k in 0..3 {
                let d = (jp.x[k] - jm.x[k]) / (2.0 * e);
                assert!((d - j.d1[0][k]).abs() < 1e-8, "{b}");
                let dd = (jp.d1[1][k] - jm.d1[1][k]) / (2.0 * e);
                assert!((dd - j.d2[1][k]).abs() < 1e-7, "{b}");
            }
        }
    }
}
