//! Frame-level algebra for the canonical difference tensor.
//!
//! Vectors are expressed in one of two frames of the tangent space:
//! an orthonormal frame `{T, V, W}` with `h = diag(-1, 1, 1)`, or a
//! lightcone frame `{E, V, F}` with `h(E, F) = h(V, V) = 1` and `E`, `F`
//! null. Component index `i` always refers to the `i`-th frame vector in
//! that listing order.

use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Neg, Sub};

/// Orthonormal frame directions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FrameIndex {
    T,
    V,
    W,
}

impl FrameIndex {
    pub const ALL: [FrameIndex; 3] = [FrameIndex::T, FrameIndex::V, FrameIndex::W];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> FrameIndex {
        Self::ALL[i]
    }

    pub fn name(self) -> &'static str {
        ["T", "V", "W"][self as usize]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FrameSignature {
    Orthonormal,
    Lightcone,
}

impl FrameSignature {
    /// Gram matrix of the frame. Both choices are their own inverse.
    pub fn gram(self) -> [[i64; 3]; 3] {
        match self {
            FrameSignature::Orthonormal => [[-1, 0, 0], [0, 1, 0], [0, 0, 1]],
            FrameSignature::Lightcone => [[0, 0, 1], [0, 1, 0], [1, 0, 0]],
        }
    }

    pub fn inverse_gram(self) -> [[i64; 3]; 3] {
        self.gram()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrameVector<S>(pub [S; 3]);

impl<S: Scalar> FrameVector<S> {
    pub fn zero() -> Self {
        FrameVector([S::zero(), S::zero(), S::zero()])
    }

    pub fn basis(i: usize) -> Self {
        let mut v = Self::zero();
        v.0[i] = S::one();
        v
    }

    pub fn new(a: S, b: S, c: S) -> Self {
        FrameVector([a, b, c])
    }

    pub fn scale(&self, s: &S) -> Self {
        FrameVector([s.clone() * self.0[0].clone(), s.clone() * self.0[1].clone(), s.clone() * self.0[2].clone()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    pub fn map<T, F: Fn(&S) -> T>(&self, f: F) -> FrameVector<T> {
        FrameVector([f(&self.0[0]), f(&self.0[1]), f(&self.0[2])])
    }
}

impl<S: Scalar> Add for FrameVector<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let [a, b, c] = self.0;
        let [x, y, z] = o.0;
        FrameVector([a + x, b + y, c + z])
    }
}

impl<S: Scalar> Sub for FrameVector<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let [a, b, c] = self.0;
        let [x, y, z] = o.0;
        FrameVector([a - x, b - y, c - z])
    }
}

impl<S: Scalar> Neg for FrameVector<S> {
    type Output = Self;
    fn neg(self) -> Self {
        let [a, b, c] = self.0;
        FrameVector([-a, -b, -c])
    }
}

fn scaled<S: Scalar>(n: i64, s: &S) -> S {
    S::from_int(n) * s.clone()
}

/// Canonical normal forms of the difference tensor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum CanonicalK<S> {
    /// Orthonormal frame, stabilizer containing a rotation group.
    Ortho { a4: S, a6: S },
    /// Lightcone frame, stabilizer containing a boost group.
    Light { b4: S },
}

impl<S: Scalar> CanonicalK<S> {
    pub fn signature(&self) -> FrameSignature {
        match self {
            CanonicalK::Ortho { .. } => FrameSignature::Orthonormal,
            CanonicalK::Light { .. } => FrameSignature::Lightcone,
        }
    }

    /// `K(e_i, e_j)` for frame basis vectors.
    pub fn on_basis(&self, i: usize, j: usize) -> FrameVector<S> {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        let z = S::zero;
        match self {
            CanonicalK::Ortho { a4, a6 } => match (i, j) {
                (0, 0) => FrameVector([scaled(-2, a4), z(), z()]),
                (0, 1) => FrameVector([z(), a4.clone(), z()]),
                (0, 2) => FrameVector([z(), z(), a4.clone()]),
                (1, 1) => FrameVector([-a4.clone(), a6.clone(), z()]),
                (1, 2) => FrameVector([z(), z(), -a6.clone()]),
                _ => FrameVector([-a4.clone(), -a6.clone(), z()]),
            },
            CanonicalK::Light { b4 } => match (i, j) {
                (0, 0) | (2, 2) => FrameVector::zero(),
                (0, 1) => FrameVector([b4.clone(), z(), z()]),
                (0, 2) => FrameVector([z(), b4.clone(), z()]),
                (1, 1) => FrameVector([z(), scaled(-2, b4), z()]),
                _ => FrameVector([z(), z(), b4.clone()]),
            },
        }
    }
}

/// `h(x, y)` in the given frame.
pub fn metric_eval<S: Scalar>(x: &FrameVector<S>, y: &FrameVector<S>, sig: FrameSignature) -> S {
    let g = sig.gram();
    let mut acc = S::zero();
    for i in 0..3 {
        for j in 0..3 {
            if g[i][j] != 0 {
                acc = acc + scaled(g[i][j], &(x.0[i].clone() * y.0[j].clone()));
            }
        }
    }
    acc
}

/// Bilinear extension of the canonical table.
pub fn difference_tensor_eval<S: Scalar>(k: &CanonicalK<S>, x: &FrameVector<S>, y: &FrameVector<S>) -> FrameVector<S> {
    let mut acc = FrameVector::zero();
    for i in 0..3 {
        if x.0[i].is_zero() {
            continue;
        }
        for j in 0..3 {
            if y.0[j].is_zero() {
                continue;
            }
            let c = x.0[i].clone() * y.0[j].clone();
            acc = acc + k.on_basis(i, j).scale(&c);
        }
    }
    acc
}

/// Metric trace of `K_x = K(x, .)`; zero for an apolar tensor.
pub fn trace_k<S: Scalar>(k: &CanonicalK<S>, x: &FrameVector<S>, sig: FrameSignature) -> S {
    let inv = sig.inverse_gram();
    let mut acc = S::zero();
    for i in 0..3 {
        for j in 0..3 {
            if inv[i][j] == 0 {
                continue;
            }
            let kx = difference_tensor_eval(k, x, &FrameVector::basis(i));
            acc = acc + scaled(inv[i][j], &metric_eval(&kx, &FrameVector::basis(j), sig));
        }
    }
    acc
}

/// Difference tensor together with the affine mean curvature.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureContext<S> {
    pub k: CanonicalK<S>,
    pub h: S,
}

impl<S: Scalar> CurvatureContext<S> {
    pub fn new(k: CanonicalK<S>, h: S) -> Self {
        CurvatureContext { k, h }
    }

    pub fn signature(&self) -> FrameSignature {
        self.k.signature()
    }
}

/// Curvature of the Levi-Civita connection of the affine metric:
/// `R(X,Y)Z = H(h(Y,Z)X - h(X,Z)Y) - K(X,K(Y,Z)) + K(Y,K(X,Z))`.
pub fn curvature_lc<S: Scalar>(
    ctx: &CurvatureContext<S>,
    x: &FrameVector<S>,
    y: &FrameVector<S>,
    z: &FrameVector<S>,
) -> FrameVector<S> {
    let sig = ctx.signature();
    let k = &ctx.k;
    let gauss = x.scale(&metric_eval(y, z, sig)) - y.scale(&metric_eval(x, z, sig));
    gauss.scale(&ctx.h) - difference_tensor_eval(k, x, &difference_tensor_eval(k, y, z))
        + difference_tensor_eval(k, y, &difference_tensor_eval(k, x, z))
}

/// `Ric(X, Y) = tr(Z -> R(Z, X)Y)`.
pub fn ricci<S: Scalar>(ctx: &CurvatureContext<S>, x: &FrameVector<S>, y: &FrameVector<S>) -> S {
    let sig = ctx.signature();
    let inv = sig.inverse_gram();
    let mut acc = S::zero();
    for i in 0..3 {
        let r = curvature_lc(ctx, &FrameVector::basis(i), x, y);
        for j in 0..3 {
            if inv[i][j] != 0 {
                acc = acc + scaled(inv[i][j], &metric_eval(&r, &FrameVector::basis(j), sig));
            }
        }
    }
    acc
}

/// Ricci tensor on the frame basis.
pub fn ricci_matrix<S: Scalar>(ctx: &CurvatureContext<S>) -> [[S; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| ricci(ctx, &FrameVector::basis(i), &FrameVector::basis(j))))
}

/// Normalized scalar curvature: metric trace of Ricci divided by `n(n-1) = 6`.
pub fn scalar_curvature<S: Scalar>(ctx: &CurvatureContext<S>) -> S {
    let inv = ctx.signature().inverse_gram();
    let ric = ricci_matrix(ctx);
    let mut acc = S::zero();
    for i in 0..3 {
        for j in 0..3 {
            if inv[i][j] != 0 {
                acc = acc + scaled(inv[i][j], &ric[i][j]);
            }
        }
    }
    acc * S::from_ratio(1, 6)
}

/// Pick invariant `J = h(K, K) / 6` as a full metric contraction of the
/// cubic form `C(X, Y, Z) = h(K(X, Y), Z)`.
pub fn pick_invariant<S: Scalar>(k: &CanonicalK<S>) -> S {
    let sig = k.signature();
    let inv = sig.inverse_gram();
    let c: [[[S; 3]; 3]; 3] = std::array::from_fn(|i| {
        std::array::from_fn(|j| std::array::from_fn(|l| metric_eval(&k.on_basis(i, j), &FrameVector::basis(l), sig)))
    });
    // Every frame has exactly one nonzero inverse-metric entry per row.
    let partner = |i: usize| (0..3).find(|&a| inv[i][a] != 0).unwrap();
    let mut acc = S::zero();
    for i in 0..3 {
        for j in 0..3 {
            for l in 0..3 {
                let (a, b, d) = (partner(i), partner(j), partner(l));
                let sign = inv[i][a] * inv[j][b] * inv[l][d];
                acc = acc + scaled(sign, &(c[i][j][l].clone() * c[a][b][d].clone()));
            }
        }
    }
    acc * S::from_ratio(1, 6)
}

/// Closed form of [`pick_invariant`] for each canonical form.
pub fn pick_closed_form<S: Scalar>(k: &CanonicalK<S>) -> S {
    match k {
        CanonicalK::Ortho { a4, a6 } => {
            (scaled(-5, &(a4.clone() * a4.clone())) + scaled(2, &(a6.clone() * a6.clone()))) * S::from_ratio(1, 3)
        }
        CanonicalK::Light { b4 } => scaled(5, &(b4.clone() * b4.clone())) * S::from_ratio(1, 3),
    }
}
