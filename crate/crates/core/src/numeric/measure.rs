//! Finite-difference recovery of the difference tensor, its canonical form
//! and the structure functions that separate the construction families.

use super::induce::{induce, signature_check, InducedData, NormalField, Signature};
use crate::constructions::{build_immersion, expected_normal, FamilySpec};
use crate::error::{Error, Result};
use crate::tensor::{difference_tensor_eval, metric_eval, pick_invariant, CanonicalK, FrameVector};
use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

type Vec3 = [f64; 3];
type Mat3 = [[f64; 3]; 3];
type Tensor3 = [[[f64; 3]; 3]; 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FrameKind {
    Orthonormal,
    Lightcone,
}

/// Orientation of the transversal field that makes the metric have exactly
/// one negative eigenvalue, and the resulting mean curvature.
pub fn oriented_normal(spec: &FamilySpec, t: f64, v: f64, w: f64) -> Result<(NormalField, Signature, bool)> {
    let jet = build_immersion(spec, t, v, w)?;
    let n = expected_normal(spec, &jet);
    let d = induce(&jet, &n.xi)?;
    match signature_check(&d.h) {
        Signature::ReversedLorentz => Ok((n.flipped(), Signature::LorentzOk, true)),
        s => Ok((n, s, false)),
    }
}

/// Induced data on a `3 x 3 x 3` stencil of spacing `step` around a point,
/// plus the points two steps out along each axis for fourth-order first
/// derivatives.
struct Stencil {
    step: f64,
    /// `data[i][j][k]` at offsets `(i - 1, j - 1, k - 1) * step`.
    data: Vec<InducedData>,
    /// `far[a][0]` at `-2 step` and `far[a][1]` at `+2 step` along axis `a`.
    far: [[InducedData; 2]; 3],
    /// `diag[p][q]` at `(+-2, +-2) step` in coordinate plane `p` (`tv`, `tw`,
    /// `vw`), with `q` the sign pattern `++`, `+-`, `-+`, `--`.
    diag: [[InducedData; 4]; 3],
    centre_normal: NormalField,
}

impl Stencil {
    fn new(spec: &FamilySpec, p: Vec3, step: f64, flip: bool) -> Result<Stencil> {
        let eval = |o: [f64; 3]| -> Result<(InducedData, NormalField)> {
            let jet = build_immersion(spec, p[0] + o[0] * step, p[1] + o[1] * step, p[2] + o[2] * step)?;
            let mut n = expected_normal(spec, &jet);
            if flip {
                n = n.flipped();
            }
            Ok((induce(&jet, &n.xi)?, n))
        };
        let mut data = Vec::with_capacity(27);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    data.push(eval([i as f64 - 1.0, j as f64 - 1.0, k as f64 - 1.0])?.0);
                }
            }
        }
        let axis = |a: usize, s: f64| {
            let mut o = [0.0; 3];
            o[a] = s;
            eval(o).map(|x| x.0)
        };
        let far = [[axis(0, -2.0)?, axis(0, 2.0)?], [axis(1, -2.0)?, axis(1, 2.0)?], [axis(2, -2.0)?, axis(2, 2.0)?]];
        let plane = |a: usize, b: usize| -> Result<[InducedData; 4]> {
            let at = |sa: f64, sb: f64| {
                let mut o = [0.0; 3];
                o[a] = sa;
                o[b] = sb;
                eval(o).map(|x| x.0)
            };
            Ok([at(2.0, 2.0)?, at(2.0, -2.0)?, at(-2.0, 2.0)?, at(-2.0, -2.0)?])
        };
        let diag = [plane(0, 1)?, plane(0, 2)?, plane(1, 2)?];
        let centre_normal = eval([0.0; 3])?.1;
        Ok(Stencil { step, data, far, diag, centre_normal })
    }

    fn at(&self, o: [i32; 3]) -> &InducedData {
        let idx = |x: i32| (x + 1) as usize;
        &self.data[idx(o[0]) * 9 + idx(o[1]) * 3 + idx(o[2])]
    }

    fn centre(&self) -> &InducedData {
        self.at([0, 0, 0])
    }

    fn unit(a: usize, s: i32) -> [i32; 3] {
        let mut o = [0; 3];
        o[a] = s;
        o
    }

    /// `dh[a][b][c] = d_a h_bc`, fourth-order central differences.
    fn dh(&self) -> Tensor3 {
        std::array::from_fn(|a| {
            let p = self.at(Self::unit(a, 1)).h;
            let m = self.at(Self::unit(a, -1)).h;
            let (m2, p2) = (self.far[a][0].h, self.far[a][1].h);
            std::array::from_fn(|b| {
                std::array::from_fn(|c| (8.0 * (p[b][c] - m[b][c]) - (p2[b][c] - m2[b][c])) / (12.0 * self.step))
            })
        })
    }

    /// `ddh[a][b][c][d] = d_a d_b h_cd`, fourth order; mixed derivatives are
    /// Richardson-extrapolated from spacings `step` and `2 step`.
    fn ddh(&self) -> [[Mat3; 3]; 3] {
        let s2 = self.step * self.step;
        let h0 = self.centre().h;
        std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                std::array::from_fn(|c| {
                    std::array::from_fn(|d| {
                        if a == b {
                            let p = self.at(Self::unit(a, 1)).h[c][d];
                            let m = self.at(Self::unit(a, -1)).h[c][d];
                            let (m2, p2) = (self.far[a][0].h[c][d], self.far[a][1].h[c][d]);
                            (16.0 * (p + m) - (p2 + m2) - 30.0 * h0[c][d]) / (12.0 * s2)
                        } else {
                            let mut o = [0; 3];
                            let mut f = |sa: i32, sb: i32| {
                                o = [0; 3];
                                o[a] = sa;
                                o[b] = sb;
                                self.at(o).h[c][d]
                            };
                            let near = (f(1, 1) - f(1, -1) - f(-1, 1) + f(-1, -1)) / (4.0 * s2);
                            let q = &self.diag[a + b - 1];
                            let far = (q[0].h[c][d] - q[1].h[c][d] - q[2].h[c][d] + q[3].h[c][d]) / (16.0 * s2);
                            (4.0 * near - far) / 3.0
                        }
                    })
                })
            })
        })
    }

    /// Gradient of `sqrt|h_tt|`, fourth-order central differences.
    fn d_lapse(&self) -> Vec3 {
        let n = |d: &InducedData| d.h[0][0].abs().sqrt();
        std::array::from_fn(|a| {
            let d1 = n(self.at(Self::unit(a, 1))) - n(self.at(Self::unit(a, -1)));
            let d2 = n(&self.far[a][1]) - n(&self.far[a][0]);
            (8.0 * d1 - d2) / (12.0 * self.step)
        })
    }
}

fn inverse(h: &Mat3) -> Result<Mat3> {
    let m = Matrix3::from_fn(|r, c| h[r][c]);
    let inv = m.try_inverse().ok_or_else(|| Error::DegenerateFrame("singular metric".into()))?;
    Ok(std::array::from_fn(|r| std::array::from_fn(|c| inv[(r, c)])))
}

/// Christoffel symbols of the Levi-Civita connection, `g[k][i][j]`.
fn levi_civita(hinv: &Mat3, dh: &Tensor3) -> Tensor3 {
    std::array::from_fn(|k| {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..3).map(|l| 0.5 * hinv[k][l] * (dh[i][j][l] + dh[j][i][l] - dh[l][i][j])).sum())
        })
    })
}

fn form(h: &Mat3, x: &Vec3, y: &Vec3) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            s += h[i][j] * x[i] * y[j];
        }
    }
    s
}

fn apply(k: &Tensor3, x: &Vec3, y: &Vec3) -> Vec3 {
    std::array::from_fn(|c| {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += k[c][i][j] * x[i] * y[j];
            }
        }
        s
    })
}

fn lin(a: f64, x: &Vec3, b: f64, y: &Vec3) -> Vec3 {
    std::array::from_fn(|i| a * x[i] + b * y[i])
}

fn scale(a: f64, x: &Vec3) -> Vec3 {
    x.map(|c| a * c)
}

/// Cubic form components `C_abc = h(K(F_a, F_b), F_c)` in a frame.
fn cubic(h: &Mat3, k: &Tensor3, f: &[Vec3; 3]) -> Tensor3 {
    std::array::from_fn(|a| std::array::from_fn(|b| std::array::from_fn(|c| form(h, &apply(k, &f[a], &f[b]), &f[c]))))
}

fn canonical_cubic(k: &CanonicalK<f64>) -> Tensor3 {
    let sig = k.signature();
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            std::array::from_fn(|c| {
                let kab = difference_tensor_eval(k, &FrameVector::basis(a), &FrameVector::basis(b));
                metric_eval(&kab, &FrameVector::basis(c), sig)
            })
        })
    })
}

fn max_dev(a: &Tensor3, b: &Tensor3) -> f64 {
    let mut m = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                m = m.max((a[i][j][k] - b[i][j][k]).abs());
            }
        }
    }
    m
}

fn max_abs(a: &Tensor3) -> f64 {
    max_dev(a, &[[[0.0; 3]; 3]; 3])
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct StructureAudit {
    /// `h(nabla_V T, V)` in the orthonormal frame, or `h(nabla_E V, F)` in
    /// the lightcone frame.
    pub a22: f64,
    /// Trichotomy quantity; vanishes exactly for the graph-type families.
    pub nu: f64,
    /// Relative defect of the geodesic equation of the distinguished unit
    /// field, `D_T T = -2 a4 T - xi` (resp. `D_V V = -2 b4 V + xi`).
    pub geodesic_residual: f64,
}

/// Canonical form of the measured difference tensor at one point.
#[derive(Clone, Debug, Serialize)]
pub struct MeasuredK {
    pub t: f64,
    pub v: f64,
    pub w: f64,
    pub frame_kind: FrameKind,
    pub a4: f64,
    pub a6: f64,
    pub b4: f64,
    /// Largest deviation of the frame components of the cubic form from the
    /// canonical table with the fitted coefficients.
    pub residual: f64,
    /// Largest frame component of the cubic form.
    pub magnitude: f64,
    /// Largest `|tr K_X|` over frame vectors.
    pub apolarity: f64,
    /// Coordinate components of the adapted frame.
    pub frame: [Vec3; 3],
    /// Mean curvature after orienting the normal.
    pub h_eff: f64,
    pub xi_flipped: bool,
    /// Normalized scalar curvature of the affine metric.
    pub kappa_hat: f64,
    /// Pick invariant computed from the fitted canonical form.
    pub pick: f64,
    pub structure: StructureAudit,
}

/// Measures the difference tensor `K = nabla - nabla_hat` at `(t, v, w)`
/// with central differences of spacing `step` and brings it to canonical
/// form.
pub fn measure_difference_tensor(spec: &FamilySpec, t: f64, v: f64, w: f64, step: f64) -> Result<MeasuredK> {
    if !(step > 0.0) {
        return Err(Error::Config(format!("finite-difference step must be positive, got {step}")));
    }
    let (_, sig, flip) = oriented_normal(spec, t, v, w)?;
    if sig != Signature::LorentzOk {
        return Err(Error::DegenerateFrame(format!("metric signature {sig:?}")));
    }
    let h_eff = if flip { -spec.h } else { spec.h };
    let st = Stencil::new(spec, [t, v, w], step, flip)?;
    let c = *st.centre();
    let h = c.h;
    let hinv = inverse(&h)?;
    let dh = st.dh();
    let lc = levi_civita(&hinv, &dh);
    let k: Tensor3 =
        std::array::from_fn(|a| std::array::from_fn(|i| std::array::from_fn(|j| c.gamma[a][i][j] - lc[a][i][j])));
    let kappa_hat = scalar_curvature(&h, &hinv, &st.ddh(), &lc);

    let e = |i: usize| -> Vec3 { std::array::from_fn(|k| if k == i { 1.0 } else { 0.0 }) };
    let jet = build_immersion(spec, t, v, w)?;
    let dn = st.d_lapse();
    let lapse = h[0][0].abs().sqrt();
    // Derivative along x of the unit field sign * d_t / lapse, by the
    // Levi-Civita connection.
    let nabla_unit = |sign: f64, x: &Vec3| -> Vec3 {
        let dir: f64 = (0..3).map(|j| x[j] * dn[j]).sum();
        std::array::from_fn(|i| {
            let mut s = if i == 0 { -sign * dir / (lapse * lapse) } else { 0.0 };
            for j in 0..3 {
                s += x[j] * lc[i][j][0] * sign / lapse;
            }
            s
        })
    };
    // D_{d_t / n}(d_t / n) in R^4.
    let dtt: [f64; 4] =
        std::array::from_fn(|r| (jet.d2[0][r] / lapse - jet.d1[0][r] * dn[0] / (lapse * lapse)) / lapse);
    let xi = st.centre_normal.xi;
    let rel = |x: [f64; 4], y: [f64; 4]| {
        let num = x.iter().zip(&y).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        let den = x.iter().fold(1.0f64, |m, a| m.max(a.abs()));
        num / den
    };

    let (kind, frame, canon, a4, a6, b4, structure) = if h[0][0] < 0.0 {
        let mut tv = scale(1.0 / lapse, &e(0));
        let proj = |x: &Vec3, u: &Vec3, n: f64| lin(1.0, x, -form(&h, x, u) / n, u);
        let vv0 = proj(&e(1), &tv, -1.0);
        let nv = form(&h, &vv0, &vv0);
        let ww0 = proj(&e(2), &tv, -1.0);
        if nv <= 0.0 {
            return Err(Error::DegenerateFrame("spatial plane is not positive".into()));
        }
        let mut vv = scale(1.0 / nv.sqrt(), &vv0);
        let ww1 = proj(&ww0, &vv, 1.0);
        let nw = form(&h, &ww1, &ww1);
        if nw <= 0.0 {
            return Err(Error::DegenerateFrame("spatial plane is not positive".into()));
        }
        let mut ww = scale(1.0 / nw.sqrt(), &ww1);
        let fit_a4 = |cc: &Tensor3| (cc[0][0][0] / 2.0 + cc[0][1][1] + cc[0][2][2]) / 3.0;
        let mut sign = 1.0;
        if fit_a4(&cubic(&h, &k, &[tv, vv, ww])) < 0.0 {
            tv = scale(-1.0, &tv);
            sign = -1.0;
        }
        let cc = cubic(&h, &k, &[tv, vv, ww]);
        let ar = (cc[1][1][1] - cc[1][2][2]) / 2.0;
        let ai = (cc[2][2][2] - cc[1][1][2]) / 2.0;
        let th = -ai.atan2(ar) / 3.0;
        let (cs, sn) = (th.cos(), th.sin());
        let (v2, w2) = (lin(cs, &vv, sn, &ww), lin(-sn, &vv, cs, &ww));
        vv = v2;
        ww = w2;
        let frame = [tv, vv, ww];
        let cc = cubic(&h, &k, &frame);
        let a4 = fit_a4(&cc);
        let a6 = (cc[1][1][1] - cc[1][2][2]) / 2.0;
        let canon = CanonicalK::Ortho { a4, a6 };
        let a22 = form(&h, &nabla_unit(sign, &vv), &vv);
        let rhs: [f64; 4] = std::array::from_fn(|r| -2.0 * a4 * sign * jet.d1[0][r] / lapse - xi[r]);
        let structure = StructureAudit { a22, nu: a22 * a22 - a4 * a4 - h_eff, geodesic_residual: rel(dtt, rhs) };
        (FrameKind::Orthonormal, frame, canon, a4, a6, 0.0, (cc, structure))
    } else {
        let mut vt = scale(1.0 / lapse, &e(0));
        let proj = |x: &Vec3| lin(1.0, x, -form(&h, x, &vt), &vt);
        let (pv, pw) = (proj(&e(1)), proj(&e(2)));
        // Either coordinate vector may be null; pick the least null of a few
        // combinations to start the Gram-Schmidt process.
        let candidates = [(pv, pw), (pw, pv), (lin(1.0, &pv, 1.0, &pw), pv), (lin(1.0, &pv, -1.0, &pw), pv)];
        let nullness = |x: &Vec3| form(&h, x, x).abs() / x.iter().map(|c| c * c).sum::<f64>();
        let (first, second) = candidates.into_iter().max_by(|a, b| nullness(&a.0).total_cmp(&nullness(&b.0))).unwrap();
        let n1 = form(&h, &first, &first);
        let u1 = scale(1.0 / n1.abs().sqrt(), &first);
        let s1 = n1.signum();
        let b2 = lin(1.0, &second, -s1 * form(&h, &second, &u1), &u1);
        let n2 = form(&h, &b2, &b2);
        if n2 * s1 >= 0.0 || n2 == 0.0 {
            return Err(Error::DegenerateFrame("transverse plane is not Lorentzian".into()));
        }
        let u2 = scale(1.0 / n2.abs().sqrt(), &b2);
        let (tm, sp) = if s1 < 0.0 { (u1, u2) } else { (u2, u1) };
        let r2 = std::f64::consts::FRAC_1_SQRT_2;
        let ee = lin(r2, &tm, r2, &sp);
        let ff = lin(-r2, &tm, r2, &sp);
        let fit_b4 = |cc: &Tensor3| (-cc[1][1][1] / 2.0 + cc[1][0][2]) / 2.0;
        let mut sign = 1.0;
        if fit_b4(&cubic(&h, &k, &[ee, vt, ff])) < 0.0 {
            vt = scale(-1.0, &vt);
            sign = -1.0;
        }
        let frame = [ee, vt, ff];
        let cc = cubic(&h, &k, &frame);
        let b4 = fit_b4(&cc);
        let canon = CanonicalK::Light { b4 };
        let a12 = form(&h, &nabla_unit(sign, &ee), &ff);
        let rhs: [f64; 4] = std::array::from_fn(|r| -2.0 * b4 * sign * jet.d1[0][r] / lapse + xi[r]);
        let structure = StructureAudit { a22: a12, nu: b4 * b4 - a12 * a12 - h_eff, geodesic_residual: rel(dtt, rhs) };
        (FrameKind::Lightcone, frame, canon, 0.0, 0.0, b4, (cc, structure))
    };
    let (cc, structure) = structure;
    let residual = max_dev(&cc, &canonical_cubic(&canon));
    let apolarity = frame
        .iter()
        .map(|x| (0..3).map(|a| (0..3).map(|i| k[a][i][a] * x[i]).sum::<f64>()).sum::<f64>().abs())
        .fold(0.0, f64::max);
    Ok(MeasuredK {
        t,
        v,
        w,
        frame_kind: kind,
        a4,
        a6,
        b4,
        residual,
        magnitude: max_abs(&cc),
        apolarity,
        frame,
        h_eff,
        xi_flipped: flip,
        kappa_hat,
        pick: pick_invariant(&canon),
        structure,
    })
}

/// Normalized scalar curvature `tr Ric / 6` from the metric, its second
/// derivatives and its Christoffel symbols.
pub fn scalar_curvature(h: &Mat3, hinv: &Mat3, ddh: &[[Mat3; 3]; 3], lc: &Tensor3) -> f64 {
    // R_ikpq = h(R(d_p, d_q) d_k, d_i).
    let riem = |i: usize, k: usize, p: usize, q: usize| -> f64 {
        let mut r = 0.5 * (ddh[k][p][i][q] + ddh[i][q][k][p] - ddh[k][q][i][p] - ddh[i][p][k][q]);
        for n in 0..3 {
            for m in 0..3 {
                r += h[n][m] * (lc[n][k][p] * lc[m][i][q] - lc[n][k][q] * lc[m][i][p]);
            }
        }
        r
    };
    let mut s = 0.0;
    for x in 0..3 {
        for y in 0..3 {
            if hinv[x][y] == 0.0 {
                continue;
            }
            for a in 0..3 {
                for e in 0..3 {
                    s += hinv[x][y] * hinv[a][e] * riem(e, y, a, x);
                }
            }
        }
    }
    s / 6.0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SymmetryClass {
    SO2,
    Z3,
    S3,
    SO11,
    Unknown,
}

impl std::fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SymmetryClass::SO2 => "so2",
            SymmetryClass::Z3 => "z3",
            SymmetryClass::S3 => "s3",
            SymmetryClass::SO11 => "so11",
            SymmetryClass::Unknown => "unknown",
        })
    }
}

/// Thresholds for [`classify_symmetry`]. Coefficients at most `zero` count
/// as vanishing, at least `positive` as nonzero; anything between, or a
/// canonical-form residual above `residual`, yields `Unknown`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyTolerance {
    pub zero: f64,
    pub positive: f64,
    pub residual: f64,
}

impl Default for ClassifyTolerance {
    fn default() -> Self {
        ClassifyTolerance { zero: 1e-4, positive: 1e-3, residual: 1e-3 }
    }
}

pub fn classify_symmetry(m: &MeasuredK, tol: &ClassifyTolerance) -> SymmetryClass {
    let scale = m.magnitude.max(1.0);
    if m.residual > tol.residual * scale {
        return SymmetryClass::Unknown;
    }
    let level = |x: f64| {
        if x.abs() <= tol.zero {
            Some(false)
        } else if x.abs() >= tol.positive {
            Some(true)
        } else {
            None
        }
    };
    match m.frame_kind {
        FrameKind::Lightcone => match level(m.b4) {
            Some(true) => SymmetryClass::SO11,
            _ => SymmetryClass::Unknown,
        },
        FrameKind::Orthonormal => match (level(m.a4), level(m.a6)) {
            (Some(true), Some(false)) => SymmetryClass::SO2,
            (Some(true), Some(true)) => SymmetryClass::Z3,
            (Some(false), Some(true)) => SymmetryClass::S3,
            _ => SymmetryClass::Unknown,
        },
    }
}

/// Which of the three structural cases the trichotomy quantity selects.
pub fn structure_case(m: &MeasuredK, nu_tol: f64) -> u8 {
    if m.structure.nu.abs() > nu_tol {
        1
    } else if m.h_eff != 0.0 {
        2
    } else {
        3
    }
}
