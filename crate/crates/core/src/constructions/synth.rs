//! Numerical construction of profile curves: given `g1` analytically, the
//! condition becomes a second-order ODE for `g2`, integrated with classical
//! Runge-Kutta.

use super::conditions::solve_g2pp;
use super::curve::{Curve, CurveFn, SampledCurve};
use super::Family;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthesisRequest {
    pub family: Family,
    /// Mean curvature sign of the base; ignored by families that do not use it.
    pub eps1: f64,
    pub g1: CurveFn,
    pub t0: f64,
    pub g2_0: f64,
    pub g2p_0: f64,
    pub t_end: f64,
    pub steps: usize,
    /// Sign of the Wronskian. Free for Lorentzian-base families; for the
    /// others it must agree with the prescribed sign if given.
    pub branch: Option<f64>,
}

/// The second-order ODE for `g2` behind a synthesized curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveOde {
    pub family: Family,
    pub eps1: f64,
    pub branch: f64,
}

impl CurveOde {
    pub fn g2pp(&self, g1: CurveFn, t: f64, y: [f64; 2]) -> Result<f64> {
        let g = g1.eval(t)?;
        solve_g2pp(self.family, self.eps1, g, y[0], y[1], self.branch).map(|r| r.0)
    }

    /// One classical Runge-Kutta step of size `h` for `(g2, g2')`.
    pub fn step(&self, g1: CurveFn, t: f64, y: [f64; 2], h: f64) -> Result<[f64; 2]> {
        let f = |t: f64, y: [f64; 2]| self.g2pp(g1, t, y).map(|a| [y[1], a]);
        let add = |y: [f64; 2], k: [f64; 2], c: f64| [y[0] + c * k[0], y[1] + c * k[1]];
        let k1 = f(t, y)?;
        let k2 = f(t + h / 2.0, add(y, k1, h / 2.0))?;
        let k3 = f(t + h / 2.0, add(y, k2, h / 2.0))?;
        let k4 = f(t + h, add(y, k3, h))?;
        Ok(std::array::from_fn(|c| y[c] + h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c])))
    }
}

pub fn synthesize_curve(req: &SynthesisRequest) -> Result<Curve> {
    if req.steps == 0 {
        return Err(Error::Config("synthesis needs at least one step".into()));
    }
    if !(req.t0.is_finite() && req.t_end.is_finite()) || req.t0 == req.t_end {
        return Err(Error::Config("synthesis interval is empty".into()));
    }
    if req.family.is_c3() {
        return Err(Error::Config(format!("{} has no profile curve", req.family)));
    }
    let branch = match req.branch {
        Some(b) if b == 1.0 || b == -1.0 => b,
        Some(b) => return Err(Error::Config(format!("branch must be +1 or -1, got {b}"))),
        None => 1.0,
    };
    let abort = |t: f64, reason: &str| Error::Synthesis { t, reason: reason.to_string() };

    let rhs = |t: f64, y: [f64; 2]| -> Result<([f64; 2], f64)> {
        let g1 = req.g1.eval(t)?;
        let (g2pp, s) = solve_g2pp(req.family, req.eps1, g1, y[0], y[1], branch)
            .map_err(|_| abort(t, "sign factor or g1' vanishes"))?;
        Ok(([y[1], g2pp], s))
    };

    let (_, sign0) = rhs(req.t0, [req.g2_0, req.g2p_0])?;
    if !req.family.is_t8() {
        if let Some(b) = req.branch {
            if b != sign0 {
                return Err(Error::Config(format!("branch {b} contradicts the sign {sign0} prescribed by the data")));
            }
        }
    }

    let h = (req.t_end - req.t0) / req.steps as f64;
    let mut t = req.t0;
    let mut y = [req.g2_0, req.g2p_0];
    let mut nodes = Vec::with_capacity(req.steps + 1);
    let node = |t: f64, y: [f64; 2]| -> Result<[f64; 3]> {
        let (d, s) = rhs(t, y)?;
        if s != sign0 {
            return Err(abort(t, "sign factor changed along the curve"));
        }
        if !d[1].is_finite() {
            return Err(abort(t, "solution blew up"));
        }
        Ok([y[0], y[1], d[1]])
    };
    nodes.push(node(t, y)?);
    let ode = CurveOde { family: req.family, eps1: req.eps1, branch: sign0 };
    for i in 0..req.steps {
        y = ode.step(req.g1, t, y, h).map_err(|_| abort(t, "sign factor or g1' vanishes"))?;
        t = req.t0 + h * (i + 1) as f64;
        nodes.push(node(t, y)?);
    }
    let (start, step) = if h < 0.0 {
        nodes.reverse();
        (req.t_end, -h)
    } else {
        (req.t0, h)
    };
    Ok(Curve::Sampled(SampledCurve { g1: req.g1, start, step, nodes, ode: Some(ode) }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::conditions::{check_condition, CONDITION_TOL};

    fn sinh_request(steps: usize) -> SynthesisRequest {
        SynthesisRequest {
            family: Family::C1Proper,
            eps1: -1.0,
            g1: CurveFn::Cosh,
            t0: 0.5,
            g2_0: 0.5f64.sinh(),
            g2p_0: 0.5f64.cosh(),
            t_end: 2.0,
            steps,
            branch: None,
        }
    }

    #[test]
    fn recovers_sinh() {
        let c = synthesize_curve(&sinh_request(2000)).unwrap();
        for t in [0.5, 0.77, 1.3, 2.0] {
            let j = c.jet(t).unwrap();
            assert!((j.g2[0] - t.sinh()).abs() < 1e-9, "t={t}");
            assert!((j.g2[1] - t.cosh()).abs() < 1e-9, "t={t}");
        }
    }

    #[test]
    fn nodes_satisfy_condition() {
        let c = synthesize_curve(&sinh_request(500)).unwrap();
        let Curve::Sampled(s) = &c else { unreachable!() };
        for i in 0..s.nodes.len() {
            let t = s.start + s.step * i as f64;
            let r = check_condition(Family::C1Proper, -1.0, &c, t, CONDITION_TOL).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn backwards_integration() {
        let mut req = sinh_request(1000);
        req.t0 = 1.5;
        req.g2_0 = 1.5f64.sinh();
        req.g2p_0 = 1.5f64.cosh();
        req.t_end = 0.5;
        let c = synthesize_curve(&req).unwrap();
        assert_eq!(c.range(), Some((0.5, 1.5)));
        assert!((c.jet(0.9).unwrap().g2[0] - 0.9f64.sinh()).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_requests() {
        assert!(synthesize_curve(&sinh_request(0)).is_err());
        let mut wrong_branch = sinh_request(10);
        wrong_branch.branch = Some(1.0);
        assert!(synthesize_curve(&wrong_branch).is_err());
        let mut c3 = sinh_request(10);
        c3.family = Family::C3a;
        assert!(synthesize_curve(&c3).is_err());
    }

    #[test]
    fn aborts_when_sign_factor_flips() {
        // g2 crosses zero going backwards through t = 0.
        let mut req = sinh_request(1000);
        req.t_end = -1.0;
        assert!(matches!(synthesize_curve(&req), Err(Error::Synthesis { .. })));
    }
}
