use super::jet::{slot, Jet2Point};
use crate::error::{Error, Result};
use nalgebra::{Matrix3, Matrix4, SymmetricEigen, Vector4};
use serde::{Deserialize, Serialize};

/// A transversal field along the immersion together with its first
/// derivatives in `t`, `v`, `w`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormalField {
    pub xi: [f64; 4],
    pub dxi: [[f64; 4]; 3],
}

impl NormalField {
    pub fn flipped(&self) -> NormalField {
        NormalField { xi: self.xi.map(|c| -c), dxi: self.dxi.map(|r| r.map(|c| -c)) }
    }
}

/// Induced metric, connection and volume data for a fixed transversal field.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InducedData {
    /// Affine fundamental form in the coordinate basis.
    pub h: [[f64; 3]; 3],
    /// `gamma[k][i][j]`: coefficient of `d_k` in the induced derivative of
    /// `d_j` along `d_i`.
    pub gamma: [[[f64; 3]; 3]; 3],
    /// `det(phi_t, phi_v, phi_w, xi)`.
    pub det_wedge: f64,
}

fn frame_matrix(jet: &Jet2Point, xi: &[f64; 4]) -> Result<Matrix4<f64>> {
    let cols = [jet.d1[0], jet.d1[1], jet.d1[2], *xi];
    let m = Matrix4::from_fn(|r, c| cols[c][r]);
    let det = m.determinant();
    let norms: f64 = cols.iter().map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt()).product();
    if !(norms > 0.0) || !(det.abs() >= 1e-10 * norms) {
        let rel = if norms > 0.0 { det.abs() / norms } else { 0.0 };
        return Err(Error::NotTransversal(rel));
    }
    Ok(m)
}

/// Decomposes every second derivative as `sum_k gamma^k_ij phi_k + h_ij xi`.
pub fn induce(jet: &Jet2Point, xi: &[f64; 4]) -> Result<InducedData> {
    let m = frame_matrix(jet, xi)?;
    let det_wedge = m.determinant();
    let lu = m.lu();
    let mut h = [[0.0; 3]; 3];
    let mut gamma = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let c = lu.solve(&Vector4::from(jet.d2[slot(i, j)])).ok_or(Error::NotTransversal(0.0))?;
            for k in 0..3 {
                gamma[k][i][j] = c[k];
                gamma[k][j][i] = c[k];
            }
            h[i][j] = c[3];
            h[j][i] = c[3];
        }
    }
    Ok(InducedData { h, gamma, det_wedge })
}

pub fn det3(m: &[[f64; 3]; 3]) -> f64 {
    Matrix3::from_fn(|r, c| m[r][c]).determinant()
}

/// Relative defect of the equiaffine normalization `det^2 = |det h|`.
pub fn blaschke_residual(data: &InducedData) -> f64 {
    let a = data.det_wedge * data.det_wedge;
    let b = det3(&data.h).abs();
    let scale = a.max(b);
    if scale == 0.0 {
        f64::INFINITY
    } else {
        (a - b).abs() / scale
    }
}

/// Shape operator from `D_i xi = -S(d_i)`. Fails when the derivative of the
/// field has a transversal component beyond `tol` (relative), i.e. when the
/// field is not equiaffine.
pub fn shape_operator(jet: &Jet2Point, normal: &NormalField, tol: f64) -> Result<[[f64; 3]; 3]> {
    let lu = frame_matrix(jet, &normal.xi)?.lu();
    let mut s = [[0.0; 3]; 3];
    for i in 0..3 {
        let c = lu.solve(&Vector4::from(normal.dxi[i])).ok_or(Error::NotTransversal(0.0))?;
        let scale = c.iter().take(3).fold(1.0f64, |m, x| m.max(x.abs()));
        if c[3].abs() > tol * scale {
            return Err(Error::NotEquiaffine(c[3]));
        }
        for j in 0..3 {
            s[j][i] = -c[j];
        }
    }
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Signature {
    /// One negative and two positive eigenvalues.
    LorentzOk,
    /// Two negative and one positive; flipping the transversal field fixes it.
    ReversedLorentz,
    Definite,
    Degenerate,
}

/// Classifies the signature of a symmetric form; eigenvalues below
/// `1e-12` of the largest are treated as zero.
pub fn signature_check(h: &[[f64; 3]; 3]) -> Signature {
    let m = Matrix3::from_fn(|r, c| 0.5 * (h[r][c] + h[c][r]));
    let eig = SymmetricEigen::new(m).eigenvalues;
    let scale = eig.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if !(scale > 0.0) || eig.iter().any(|e| e.abs() <= 1e-12 * scale) {
        return Signature::Degenerate;
    }
    match eig.iter().filter(|e| **e < 0.0).count() {
        1 => Signature::LorentzOk,
        2 => Signature::ReversedLorentz,
        _ => Signature::Definite,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Graph `x4 = f(t, v, w)` with constant normal `e4`.
    fn graph(hess: [[f64; 3]; 3]) -> Jet2Point {
        let mut d1 = [[0.0; 4]; 3];
        for (i, row) in d1.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        let mut d2 = [[0.0; 4]; 6];
        for i in 0..3 {
            for j in i..3 {
                d2[slot(i, j)][3] = hess[i][j];
            }
        }
        Jet2Point { x: [0.0; 4], d1, d2 }
    }

    #[test]
    fn paraboloid_metric_is_hessian() {
        let hess = [[-1.0, 0.0, 0.0], [0.0, 2.0, 0.5], [0.0, 0.5, 1.0]];
        let d = induce(&graph(hess), &[0.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(d.h, hess);
        assert_eq!(d.gamma, [[[0.0; 3]; 3]; 3]);
        assert_eq!(signature_check(&d.h), Signature::LorentzOk);
    }

    #[test]
    fn tangent_field_is_rejected() {
        let j = graph([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        assert!(matches!(induce(&j, &[1.0, 0.0, 0.0, 0.0]), Err(Error::NotTransversal(_))));
    }

    #[test]
    fn signatures() {
        let d = |a: f64, b: f64, c: f64| [[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]];
        assert_eq!(signature_check(&d(-1.0, 1.0, 1.0)), Signature::LorentzOk);
        assert_eq!(signature_check(&d(-1.0, -1.0, 1.0)), Signature::ReversedLorentz);
        assert_eq!(signature_check(&d(1.0, 1.0, 1.0)), Signature::Definite);
        assert_eq!(signature_check(&d(-1.0, -1.0, -1.0)), Signature::Definite);
        assert_eq!(signature_check(&d(1.0, 0.0, 1.0)), Signature::Degenerate);
    }

    #[test]
    fn non_equiaffine_field_is_rejected() {
        let j = graph([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        let n = NormalField { xi: [0.0, 0.0, 0.0, 1.0], dxi: [[0.0, 0.0, 0.0, 0.01], [0.0; 4], [0.0; 4]] };
        assert!(matches!(shape_operator(&j, &n, 1e-8), Err(Error::NotEquiaffine(_))));
    }
}
