//! A catalogue of concrete members of every family, each with a grid that
//! stays inside its chart.

use super::{synthesize_curve, BaseSurface, Curve, CurveFn, Family, FamilySpec, Shape, SynthesisRequest};
use crate::error::Result;
use crate::grid::{Grid1D, Grid3};

#[derive(Clone, Debug)]
pub struct Instance {
    pub name: &'static str,
    pub spec: FamilySpec,
    pub grid: Grid3,
}

const T_RANGE: (f64, f64) = (0.5, 2.0);
/// Sampled curves extend past the grid so finite-difference stencils at the
/// grid edges stay inside the curve.
const CURVE_RANGE: (f64, f64) = (0.4, 2.1);

fn grid(t: (f64, f64), vw: (f64, f64), nt: usize, nvw: usize) -> Grid3 {
    let g = |r: (f64, f64), n| Grid1D { start: r.0, end: r.1, count: n };
    Grid3 { t: g(t, nt), v: g(vw, nvw), w: g(vw, nvw) }
}

/// Profile curve obtained by integrating the condition from `t = 0.4`.
pub fn synthesized(
    family: Family,
    eps1: f64,
    g1: CurveFn,
    g2_0: f64,
    g2p_0: f64,
    branch: Option<f64>,
) -> Result<Curve> {
    synthesize_curve(&SynthesisRequest {
        family,
        eps1,
        g1,
        t0: CURVE_RANGE.0,
        g2_0,
        g2p_0,
        t_end: CURVE_RANGE.1,
        steps: 3400,
        branch,
    })
}

/// `(t, k t^(-1/3))` with `k^6 = 27/256`, an exact solution of the proper
/// condition over the round sphere.
pub fn sphere_power_curve() -> Curve {
    let k = (27.0f64 / 256.0).powf(1.0 / 6.0);
    Curve::analytic(CurveFn::identity(), CurveFn::Power { coef: k, exponent: -1.0 / 3.0 })
}

/// Members of every family; `nt` and `nvw` set the grid resolution.
pub fn shipped_instances(nt: usize, nvw: usize) -> Result<Vec<Instance>> {
    use BaseSurface::*;
    let c1_curve = synthesized(Family::C1Proper, -1.0, CurveFn::identity(), 1.0, 2.0, None)?;
    let c1i_curve = synthesized(Family::C1Improper, -1.0, CurveFn::identity(), 1.0, 0.5, None)?;
    let c2_curve = synthesized(Family::C2, 0.0, CurveFn::identity(), -1.0, 0.5, None)?;
    let t8p_curve = synthesized(Family::C1t8Proper, 0.0, CurveFn::identity(), 1.0, 2.0, Some(-1.0))?;
    let t8i_curve = synthesized(Family::C1t8Improper, 0.0, CurveFn::identity(), 1.0, 0.5, Some(1.0))?;
    let c2t8_curve = synthesized(Family::C2t8, 0.0, CurveFn::identity(), -1.0, 0.5, Some(-1.0))?;

    let sym = (-1.0, 1.0);
    let octant = (0.5, 2.0);
    let lor = (-0.8, 0.8);
    let cur = |c: &Curve| Shape::Curve(c.clone());
    let mk = |name, family, base, shape, vw| -> Result<Instance> {
        Ok(Instance { name, spec: FamilySpec::new(family, base, shape, None)?, grid: grid(T_RANGE, vw, nt, nvw) })
    };
    Ok(vec![
        mk("c1-proper/two-sheeted", Family::C1Proper, TwoSheeted, cur(&c1_curve), sym)?,
        mk("c1-proper/titeica", Family::C1Proper, Titeica, cur(&c1_curve), octant)?,
        mk("c1-proper/sphere", Family::C1Proper, Sphere, Shape::Curve(sphere_power_curve()), (-0.5, 0.5))?,
        mk("c1-improper/two-sheeted", Family::C1Improper, TwoSheeted, cur(&c1i_curve), sym)?,
        mk("c1-improper/titeica", Family::C1Improper, Titeica, cur(&c1i_curve), octant)?,
        mk("c2/elliptic-paraboloid", Family::C2, EllipticParaboloid, cur(&c2_curve), sym)?,
        mk("c3a/elliptic-paraboloid", Family::C3a, EllipticParaboloid, Shape::Constant(1.0), sym)?,
        mk("c3b/elliptic-paraboloid", Family::C3b, EllipticParaboloid, Shape::Constant(1.0), sym)?,
        mk("c1t8-proper/one-sheeted", Family::C1t8Proper, OneSheeted, cur(&t8p_curve), lor)?,
        mk("c1t8-improper/one-sheeted", Family::C1t8Improper, OneSheeted, cur(&t8i_curve), lor)?,
        mk("c2t8/hyperbolic-paraboloid", Family::C2t8, HyperbolicParaboloid, cur(&c2t8_curve), sym)?,
        mk("c3t8a/hyperbolic-paraboloid", Family::C3t8a, HyperbolicParaboloid, Shape::Constant(1.0), sym)?,
        mk("c3t8b/hyperbolic-paraboloid", Family::C3t8b, HyperbolicParaboloid, Shape::Constant(1.0), sym)?,
    ])
}

/// Sphere base with the circle profile: satisfies none of the conditions
/// and yields a definite metric.
pub fn negative_control(nt: usize, nvw: usize) -> Result<Instance> {
    Ok(Instance {
        name: "c1-proper/sphere/cos,sin",
        spec: FamilySpec::new(Family::C1Proper, BaseSurface::Sphere, Shape::Curve("cos,sin".parse()?), None)?,
        grid: grid((0.3, 1.2), (-0.6, 0.6), nt, nvw),
    })
}
