use serde::Serialize;

/// Position and first and second partial derivatives of a map from
/// `(t, v, w)` to R^4. Second derivatives are stored in the slot order of
/// [`slot`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Jet2Point {
    pub x: [f64; 4],
    pub d1: [[f64; 4]; 3],
    pub d2: [[f64; 4]; 6],
}

/// Index of `d^2 / dx_i dx_j` in [`Jet2Point::d2`]: `tt, tv, tw, vv, vw, ww`.
pub const fn slot(i: usize, j: usize) -> usize {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    match (a, b) {
        (0, 0) => 0,
        (0, 1) => 1,
        (0, 2) => 2,
        (1, 1) => 3,
        (1, 2) => 4,
        _ => 5,
    }
}

impl Jet2Point {
    pub fn second(&self, i: usize, j: usize) -> [f64; 4] {
        self.d2[slot(i, j)]
    }
}
