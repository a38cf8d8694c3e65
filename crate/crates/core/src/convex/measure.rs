use alloc::vec::Vec;

use super::direction::{find_direction, Direction, DIRECTION_TOL};
use crate::linalg;
use crate::{Error, Result};

/// Even finite measure on the sphere with finitely many atoms.
///
/// Entry `(v, w)` puts mass `w` on `v` and mass `w` on `-v`, so the total
/// mass of the full measure is `2 Σ w`.
#[derive(Clone, Debug, PartialEq)]
pub struct EvenDiscreteMeasure {
    dim: usize,
    directions: Vec<Direction>,
    weights: Vec<f64>,
}

impl EvenDiscreteMeasure {
    /// Build from raw entries, merging duplicate directions by summing weights.
    pub fn new(dim: usize, entries: Vec<(Direction, f64)>) -> Result<Self> {
        let mut directions: Vec<Direction> = Vec::with_capacity(entries.len());
        let mut weights: Vec<f64> = Vec::with_capacity(entries.len());
        for (d, w) in entries {
            if d.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: d.dim(),
                });
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::InvalidInput(alloc::format!(
                    "measure weight {w} at {d} is not strictly positive"
                )));
            }
            match find_direction(&directions, &d, DIRECTION_TOL) {
                Some(i) => weights[i] += w,
                None => {
                    directions.push(d);
                    weights.push(w);
                }
            }
        }
        Ok(Self {
            dim,
            directions,
            weights,
        })
    }

    /// Directions must already be canonical and distinct, weights positive.
    pub(crate) fn from_parts(dim: usize, directions: Vec<Direction>, weights: Vec<f64>) -> Self {
        debug_assert_eq!(directions.len(), weights.len());
        Self {
            dim,
            directions,
            weights,
        }
    }

    /// Canonicalizes raw coordinate vectors first.
    pub fn from_raw(dim: usize, directions: &[Vec<f64>], weights: &[f64]) -> Result<Self> {
        if directions.len() != weights.len() {
            return Err(Error::InvalidInput(
                "directions and weights differ in length".into(),
            ));
        }
        let entries = directions
            .iter()
            .zip(weights)
            .map(|(d, &w)| Ok((Direction::new(d)?, w)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(dim, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    /// Per-pair weights (mass on each of `v` and `-v`).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Direction, f64)> {
        self.directions.iter().zip(self.weights.iter().copied())
    }

    pub fn total_mass(&self) -> f64 {
        2.0 * self.weights.iter().sum::<f64>()
    }

    pub fn weight_at(&self, d: &Direction) -> Option<f64> {
        find_direction(&self.directions, d, DIRECTION_TOL).map(|i| self.weights[i])
    }

    /// ∫ f dμ over the full (antipodally expanded) measure, for even `f`.
    pub fn integrate(&self, mut f: impl FnMut(&Direction) -> f64) -> f64 {
        2.0 * self.iter().map(|(d, w)| f(d) * w).sum::<f64>()
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(
            self.dim,
            self.iter().map(|(d, w)| (d.clone(), w * c)).collect(),
        )
    }

    pub fn rank(&self) -> usize {
        let vs: Vec<Vec<f64>> = self.directions.iter().map(|d| d.coords().to_vec()).collect();
        linalg::rank(&vs, 1e-10)
    }

    pub fn spans(&self) -> bool {
        self.rank() == self.dim
    }

    /// Total variation distance between two measures on the union of their supports.
    pub fn total_variation(&self, other: &Self) -> f64 {
        let mut tv = 0.0;
        let mut seen = alloc::vec![false; other.len()];
        for (d, w) in self.iter() {
            match find_direction(&other.directions, d, DIRECTION_TOL) {
                Some(j) => {
                    seen[j] = true;
                    tv += (w - other.weights[j]).abs();
                }
                None => tv += w,
            }
        }
        for (j, w) in other.weights.iter().enumerate() {
            if !seen[j] {
                tv += w;
            }
        }
        2.0 * tv
    }
}

/// The cone volume measure `dV_P = (1/n) h_P dS_P`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeVolumeMeasure(pub EvenDiscreteMeasure);

impl ConeVolumeMeasure {
    pub fn measure(&self) -> &EvenDiscreteMeasure {
        &self.0
    }

    pub fn total_mass(&self) -> f64 {
        self.0.total_mass()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn merges_antipodal_duplicates() {
        let m = EvenDiscreteMeasure::from_raw(
            2,
            &[vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0]],
            &[1.0, 2.0, 4.0],
        )
        .unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.weights(), &[3.0, 4.0]);
        assert_eq!(m.total_mass(), 14.0);
    }

    #[test]
    fn rejects_nonpositive_weight() {
        assert!(EvenDiscreteMeasure::from_raw(2, &[vec![1.0, 0.0]], &[0.0]).is_err());
        assert!(EvenDiscreteMeasure::from_raw(2, &[vec![1.0, 0.0]], &[-1.0]).is_err());
    }

    #[test]
    fn spanning_check() {
        let m = EvenDiscreteMeasure::from_raw(3, &[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]], &[1.0, 1.0])
            .unwrap();
        assert!(!m.spans());
        assert_eq!(m.rank(), 2);
    }
}
