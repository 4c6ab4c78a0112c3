use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned box with a point count per axis.
///
/// Exact-field sampling uses the nodes (endpoints included); the
/// finite-volume solver uses `resolution` as the cell count and samples
/// cell centers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub resolution: Vec<usize>,
}

impl GridSpec {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, resolution: Vec<usize>) -> Result<Self> {
        let g = Self {
            lower,
            upper,
            resolution,
        };
        g.validate()?;
        Ok(g)
    }

    /// Square (or cube) grid `[lo, hi]^d` with `n` points per axis.
    pub fn cube(d: usize, lo: f64, hi: f64, n: usize) -> Result<Self> {
        Self::new(vec![lo; d], vec![hi; d], vec![n; d])
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.lower.len();
        if !(d == 2 || d == 3) || self.upper.len() != d || self.resolution.len() != d {
            return Err(Error::Domain(format!(
                "grid needs matching lower/upper/resolution of length 2 or 3, got {}/{}/{}",
                self.lower.len(),
                self.upper.len(),
                self.resolution.len()
            )));
        }
        for axis in 0..d {
            let (lo, hi, n) = (self.lower[axis], self.upper[axis], self.resolution[axis]);
            if !(lo.is_finite() && hi.is_finite() && lo < hi) || n == 0 {
                return Err(Error::Domain(format!(
                    "axis {axis}: need finite lower < upper and resolution >= 1"
                )));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn len(&self) -> usize {
        self.resolution.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Per-axis indices of flat index `flat`, x fastest.
    pub fn unravel(&self, mut flat: usize) -> Vec<usize> {
        self.resolution
            .iter()
            .map(|&n| {
                let i = flat % n;
                flat /= n;
                i
            })
            .collect()
    }

    fn node_coord(&self, axis: usize, i: usize) -> f64 {
        let n = self.resolution[axis];
        if n == 1 {
            return self.lower[axis];
        }
        let (lo, hi) = (self.lower[axis], self.upper[axis]);
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }

    pub fn node(&self, flat: usize) -> Vec<f64> {
        self.unravel(flat)
            .into_iter()
            .enumerate()
            .map(|(axis, i)| self.node_coord(axis, i))
            .collect()
    }

    /// Node spacing along `axis` (zero for a single node).
    pub fn node_spacing(&self, axis: usize) -> f64 {
        let n = self.resolution[axis];
        if n == 1 {
            0.0
        } else {
            (self.upper[axis] - self.lower[axis]) / (n - 1) as f64
        }
    }

    pub fn cell_size(&self, axis: usize) -> f64 {
        (self.upper[axis] - self.lower[axis]) / self.resolution[axis] as f64
    }

    pub fn cell_center(&self, axis: usize, i: usize) -> f64 {
        self.lower[axis] + (i as f64 + 0.5) * self.cell_size(axis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_major_x_fastest() {
        let g = GridSpec::new(vec![0.0, 0.0], vec![1.0, 2.0], vec![3, 2]).unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g.node(0), vec![0.0, 0.0]);
        assert_eq!(g.node(1), vec![0.5, 0.0]);
        assert_eq!(g.node(3), vec![0.0, 2.0]);
        assert_eq!(g.node(5), vec![1.0, 2.0]);
    }

    #[test]
    fn refinement_shares_nodes_exactly() {
        let coarse = GridSpec::cube(2, -5.0, 3.3, 5).unwrap();
        let fine = GridSpec::cube(2, -5.0, 3.3, 9).unwrap();
        for j in 0..5 {
            for i in 0..5 {
                assert_eq!(coarse.node(j * 5 + i), fine.node(2 * j * 9 + 2 * i));
            }
        }
    }

    #[test]
    fn rejects_malformed() {
        assert!(GridSpec::new(vec![0.0], vec![1.0], vec![2]).is_err());
        assert!(GridSpec::new(vec![0.0, 0.0], vec![1.0, 0.0], vec![2, 2]).is_err());
        assert!(GridSpec::new(vec![0.0, 0.0], vec![1.0, 1.0], vec![2, 0]).is_err());
    }
}
