//! Inclusive uniform grids written as `start:end:count`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl Grid1D {
    pub fn new(start: f64, end: f64, count: usize) -> Result<Grid1D> {
        if count == 0 || !start.is_finite() || !end.is_finite() {
            return Err(Error::Parse(format!("invalid grid {start}:{end}:{count}")));
        }
        Ok(Grid1D { start, end, count })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.end - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|i| if i + 1 == self.count { self.end } else { self.start + step * i as f64 }).collect()
    }

    pub fn step(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.end - self.start) / (self.count - 1) as f64
        }
    }
}

impl FromStr for Grid1D {
    type Err = Error;
    fn from_str(s: &str) -> Result<Grid1D> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::Parse(format!("grid `{s}` is not start:end:count"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let end: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
        Grid1D::new(start, end, count)
    }
}

impl fmt::Display for Grid1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.end, self.count)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid3 {
    pub t: Grid1D,
    pub v: Grid1D,
    pub w: Grid1D,
}

impl Grid3 {
    pub fn len(&self) -> usize {
        self.t.count * self.v.count * self.w.count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points in `t`-major order.
    pub fn points(&self) -> Vec<[f64; 3]> {
        let (ts, vs, ws) = (self.t.values(), self.v.values(), self.w.values());
        let mut out = Vec::with_capacity(self.len());
        for &t in &ts {
            for &v in &vs {
                for &w in &ws {
                    out.push([t, v, w]);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inclusive_endpoints() {
        let g: Grid1D = "0.5:2:4".parse().unwrap();
        assert_eq!(g.values(), vec![0.5, 1.0, 1.5, 2.0]);
        let one: Grid1D = "3:7:1".parse().unwrap();
        assert_eq!(one.values(), vec![3.0]);
    }

    #[test]
    fn malformed_grids() {
        for s in ["1:2", "a:2:3", "0:1:0", "0:1:-2"] {
            assert!(s.parse::<Grid1D>().is_err(), "{s}");
        }
    }
}
