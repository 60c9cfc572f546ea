//! Planar profile curves `t -> (g1(t), g2(t))`, analytic or sampled.

use super::synth::CurveOde;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Elementary scalar functions with exact first and second derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum CurveFn {
    Cosh,
    Sinh,
    Cos,
    Sin,
    Exp,
    /// `coef * t^exponent`.
    Power {
        coef: f64,
        exponent: f64,
    },
}

impl CurveFn {
    pub fn identity() -> CurveFn {
        CurveFn::Power { coef: 1.0, exponent: 1.0 }
    }

    /// Value, first and second derivative.
    pub fn eval(&self, t: f64) -> Result<[f64; 3]> {
        let (c, s) = (t.cosh(), t.sinh());
        let out = match *self {
            CurveFn::Cosh => [c, s, c],
            CurveFn::Sinh => [s, c, s],
            CurveFn::Cos => [t.cos(), -t.sin(), -t.cos()],
            CurveFn::Sin => [t.sin(), t.cos(), -t.sin()],
            CurveFn::Exp => [t.exp(); 3],
            CurveFn::Power { coef, exponent: p } => {
                let integral = p.fract() == 0.0;
                if (!integral && t <= 0.0) || (integral && p < 0.0 && t == 0.0) {
                    return Err(Error::Config(format!("{self} is undefined at t = {t}")));
                }
                // A vanishing factor wins over a pole of `t^(p - k)` at zero.
                let term = |c: f64, e: f64| if c == 0.0 { 0.0 } else { c * t.powf(e) };
                [term(coef, p), term(coef * p, p - 1.0), term(coef * p * (p - 1.0), p - 2.0)]
            }
        };
        Ok(out)
    }
}

impl fmt::Display for CurveFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveFn::Cosh => f.write_str("cosh"),
            CurveFn::Sinh => f.write_str("sinh"),
            CurveFn::Cos => f.write_str("cos"),
            CurveFn::Sin => f.write_str("sin"),
            CurveFn::Exp => f.write_str("exp"),
            CurveFn::Power { coef, exponent } => {
                if *coef != 1.0 {
                    write!(f, "{coef}*")?;
                }
                f.write_str("t")?;
                if *exponent != 1.0 {
                    write!(f, "^{exponent}")?;
                }
                Ok(())
            }
        }
    }
}

fn parse_number(s: &str) -> Option<f64> {
    let s = s.trim();
    let inner = s.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(s);
    if let Some((a, b)) = inner.split_once('/') {
        let (a, b): (f64, f64) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
        return (b != 0.0).then(|| a / b);
    }
    inner.parse().ok()
}

/// Accepts the named functions and monomials such as `t`, `0.5*t^2`,
/// `-1/2*t^-1` or `t^(1/3)`.
impl FromStr for CurveFn {
    type Err = Error;
    fn from_str(s: &str) -> Result<CurveFn> {
        let s = s.trim();
        match s {
            "cosh" => return Ok(CurveFn::Cosh),
            "sinh" => return Ok(CurveFn::Sinh),
            "cos" => return Ok(CurveFn::Cos),
            "sin" => return Ok(CurveFn::Sin),
            "exp" => return Ok(CurveFn::Exp),
            _ => {}
        }
        let bad = || Error::Config(format!("unsupported curve component `{s}`"));
        let (coef, rest) = match s.rsplit_once('*') {
            Some((c, r)) => (parse_number(c).ok_or_else(bad)?, r.trim()),
            None if s.starts_with("-t") => (-1.0, &s[1..]),
            None => (1.0, s),
        };
        let rest = rest.strip_prefix('t').ok_or_else(bad)?;
        let exponent = if rest.is_empty() {
            1.0
        } else {
            parse_number(rest.strip_prefix('^').ok_or_else(bad)?).ok_or_else(bad)?
        };
        Ok(CurveFn::Power { coef, exponent })
    }
}

/// Values and derivatives of both components at one parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveJet {
    pub g1: [f64; 3],
    pub g2: [f64; 3],
}

impl CurveJet {
    /// `g1 g2' - g1' g2`.
    pub fn alpha(&self) -> f64 {
        self.g1[0] * self.g2[1] - self.g1[1] * self.g2[0]
    }

    /// `g1' g2'' - g1'' g2'`.
    pub fn wronskian(&self) -> f64 {
        self.g1[1] * self.g2[2] - self.g1[2] * self.g2[1]
    }
}

/// A second component sampled on a uniform grid, with value, first and
/// second derivative stored per node. The first component stays analytic.
///
/// Between nodes the curve is evaluated by one Runge-Kutta step from the
/// nearest node when the generating ODE is known, and by quintic Hermite
/// interpolation otherwise. The interpolated second derivative loses about
/// `eps / step^2` to cancellation, which is too coarse for condition checks
/// on fine samplings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledCurve {
    pub g1: CurveFn,
    pub start: f64,
    pub step: f64,
    pub nodes: Vec<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ode: Option<CurveOde>,
}

impl SampledCurve {
    pub fn end(&self) -> f64 {
        self.start + self.step * (self.nodes.len() - 1) as f64
    }

    pub fn g2(&self, t: f64) -> Result<[f64; 3]> {
        let n = self.nodes.len();
        let (start, end) = (self.start, self.end());
        let slack = 1e-9 * self.step;
        if n < 2 || !(t >= start - slack && t <= end + slack) {
            return Err(Error::CurveRange { t, start, end });
        }
        let x = ((t - start) / self.step).clamp(0.0, (n - 1) as f64);
        if let Some(ode) = &self.ode {
            let i = x.round() as usize;
            let ti = start + self.step * i as f64;
            let a = self.nodes[i];
            if t == ti {
                return Ok(a);
            }
            let y = ode.step(self.g1, ti, [a[0], a[1]], t - ti)?;
            return Ok([y[0], y[1], ode.g2pp(self.g1, t, y)?]);
        }
        let i = (x.floor() as usize).min(n - 2);
        let s = x - i as f64;
        let h = self.step;
        let (a, b) = (self.nodes[i], self.nodes[i + 1]);
        let coeffs = [a[0], h * a[1], h * h * a[2], b[0], h * b[1], h * h * b[2]];
        let mut out = [0.0; 3];
        for (d, o) in out.iter_mut().enumerate() {
            let basis = hermite5(s, d);
            let v: f64 = coeffs.iter().zip(basis).map(|(c, b)| c * b).sum();
            *o = v / h.powi(d as i32);
        }
        Ok(out)
    }
}

/// Quintic Hermite basis on `[0, 1]` (or its `d`-th derivative), ordered as
/// left value, slope, curvature, then right value, slope, curvature.
fn hermite5(s: f64, d: usize) -> [f64; 6] {
    const C: [[f64; 6]; 6] = [
        [1.0, 0.0, 0.0, -10.0, 15.0, -6.0],
        [0.0, 1.0, 0.0, -6.0, 8.0, -3.0],
        [0.0, 0.0, 0.5, -1.5, 1.5, -0.5],
        [0.0, 0.0, 0.0, 10.0, -15.0, 6.0],
        [0.0, 0.0, 0.0, -4.0, 7.0, -3.0],
        [0.0, 0.0, 0.0, 0.5, -1.0, 0.5],
    ];
    C.map(|c| {
        let mut acc = 0.0;
        for (k, &ck) in c.iter().enumerate().skip(d) {
            let fall: f64 = (0..d).map(|m| (k - m) as f64).product();
            acc += ck * fall * s.powi((k - d) as i32);
        }
        acc
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Curve {
    Analytic { g1: CurveFn, g2: CurveFn },
    Sampled(SampledCurve),
}

impl Curve {
    pub fn analytic(g1: CurveFn, g2: CurveFn) -> Curve {
        Curve::Analytic { g1, g2 }
    }

    pub fn jet(&self, t: f64) -> Result<CurveJet> {
        match self {
            Curve::Analytic { g1, g2 } => Ok(CurveJet { g1: g1.eval(t)?, g2: g2.eval(t)? }),
            Curve::Sampled(s) => Ok(CurveJet { g1: s.g1.eval(t)?, g2: s.g2(t)? }),
        }
    }

    /// Parameter range where the curve is available, if restricted.
    pub fn range(&self) -> Option<(f64, f64)> {
        match self {
            Curve::Analytic { .. } => None,
            Curve::Sampled(s) => Some((s.start, s.end())),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Curve::Analytic { g1, g2 } => format!("{g1},{g2}"),
            Curve::Sampled(s) => {
                format!("{},<sampled on [{}, {}] with {} nodes>", s.g1, s.start, s.end(), s.nodes.len())
            }
        }
    }
}

/// Parses `g1,g2`.
impl FromStr for Curve {
    type Err = Error;
    fn from_str(s: &str) -> Result<Curve> {
        let (a, b) = s.split_once(',').ok_or_else(|| Error::Config(format!("curve `{s}` is not `g1,g2`")))?;
        Ok(Curve::analytic(a.parse()?, b.parse()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_named_and_monomials() {
        assert_eq!("cosh".parse::<CurveFn>().unwrap(), CurveFn::Cosh);
        assert_eq!("t".parse::<CurveFn>().unwrap(), CurveFn::identity());
        assert_eq!("-1/2*t^-1".parse::<CurveFn>().unwrap(), CurveFn::Power { coef: -0.5, exponent: -1.0 });
        assert_eq!("0.5*t^2".parse::<CurveFn>().unwrap(), CurveFn::Power { coef: 0.5, exponent: 2.0 });
        let cube_root = "t^(-1/3)".parse::<CurveFn>().unwrap();
        assert!(matches!(cube_root, CurveFn::Power { exponent, .. } if (exponent + 1.0 / 3.0).abs() < 1e-15));
        assert!("tan".parse::<CurveFn>().is_err());
        assert!("cosh".parse::<Curve>().is_err());
    }

    #[test]
    fn power_domain() {
        let f = CurveFn::Power { coef: 1.0, exponent: 0.5 };
        assert!(f.eval(-1.0).is_err());
        assert!(CurveFn::Power { coef: 1.0, exponent: -1.0 }.eval(0.0).is_err());
        assert!(CurveFn::Power { coef: 1.0, exponent: 2.0 }.eval(-1.0).is_ok());
    }

    #[test]
    fn display_round_trip() {
        for s in ["cosh", "t", "0.5*t^2", "-0.5*t^-1"] {
            let f: CurveFn = s.parse().unwrap();
            assert_eq!(f.to_string().parse::<CurveFn>().unwrap(), f);
        }
    }

    #[test]
    fn hermite_reproduces_quintics() {
        // Any quintic is reproduced exactly, derivatives included.
        let p = |t: f64| [t.powi(5) - 2.0 * t * t + 1.0, 5.0 * t.powi(4) - 4.0 * t, 20.0 * t.powi(3) - 4.0];
        let step = 0.25;
        let nodes = (0..9).map(|i| p(i as f64 * step)).collect();
        let s = SampledCurve { g1: CurveFn::identity(), start: 0.0, step, nodes, ode: None };
        for t in [0.0, 0.1, 0.33, 1.7, 2.0] {
            let got = s.g2(t).unwrap();
            let want = p(t);
            for d in 0..3 {
                assert!((got[d] - want[d]).abs() < 1e-11, "t={t} d={d}");
            }
        }
        assert!(s.g2(2.1).is_err());
    }
}
