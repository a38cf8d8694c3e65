use alloc::vec::Vec;
use core::fmt;

use crate::linalg;
use crate::{Error, Result};

/// Coordinates below this magnitude are skipped when picking the sign of
/// the canonical antipodal representative.
const CANON_EPS: f64 = 1e-12;

/// Two canonical directions closer than this (max-coordinate) are the same.
pub const DIRECTION_TOL: f64 = 1e-9;

/// A unit vector standing for the antipodal pair `{v, -v}`.
///
/// The stored representative has its first non-negligible coordinate
/// positive, so `v` and `-v` canonicalize to the same value.
#[derive(Clone, Debug, PartialEq)]
pub struct Direction(Vec<f64>);

impl Direction {
    pub fn new(coords: &[f64]) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidInput("empty direction".into()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("non-finite direction coordinate".into()));
        }
        let n = linalg::norm(coords);
        // already-unit input is kept bit-for-bit so canonicalization is idempotent
        let v = if (n - 1.0).abs() <= 4.0 * f64::EPSILON {
            coords.to_vec()
        } else {
            linalg::normalized(coords).ok_or_else(|| Error::InvalidInput("zero direction".into()))?
        };
        Ok(Self::canonical(v))
    }

    /// Canonicalize an already normalized vector.
    pub(crate) fn canonical(mut v: Vec<f64>) -> Self {
        if let Some(first) = v.iter().find(|c| c.abs() > CANON_EPS) {
            if *first < 0.0 {
                for c in v.iter_mut() {
                    *c = -*c;
                }
            }
        }
        Direction(v)
    }

    pub fn axis(dim: usize, i: usize) -> Self {
        let mut v = alloc::vec![0.0; dim];
        v[i] = 1.0;
        Direction(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dot(&self, x: &[f64]) -> f64 {
        linalg::dot(&self.0, x)
    }

    pub fn approx_eq(&self, other: &Direction, tol: f64) -> bool {
        self.0.len() == other.0.len()
            && self.0.iter().zip(&other.0).all(|(a, b)| (a - b).abs() <= tol)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c:.6}")?;
        }
        f.write_str(")")
    }
}

/// Index of `d` in `set`, matching canonical representatives within `tol`.
pub fn find_direction(set: &[Direction], d: &Direction, tol: f64) -> Option<usize> {
    set.iter().position(|x| x.approx_eq(d, tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antipodes_share_a_representative() {
        let a = Direction::new(&[-1.0, 2.0, 0.5]).unwrap();
        let b = Direction::new(&[1.0, -2.0, -0.5]).unwrap();
        assert_eq!(a, b);
        assert!(a.coords()[0] > 0.0);
        assert!((linalg::norm(a.coords()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn leading_zero_is_skipped() {
        let a = Direction::new(&[0.0, -3.0, 4.0]).unwrap();
        assert_eq!(a.coords(), &[0.0, 0.6, -0.8]);
    }

    #[test]
    fn canonicalization_is_idempotent() {
        let a = Direction::new(&[-0.3, 0.1, -0.9, 0.2]).unwrap();
        let b = Direction::new(a.coords()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_zero_and_nan() {
        assert!(Direction::new(&[0.0, 0.0]).is_err());
        assert!(Direction::new(&[f64::NAN, 1.0]).is_err());
    }
}
