//! Equiangular direction sets: unit vectors `v_1..v_N` in R^d with
//! `v_i·v_j = −a` for `i ≠ j`.
//!
//! The Gram matrix of such a set is `G = (1+a)I − aJ`, with eigenvalue
//! `1+a` on the complement of the all-ones vector and `1+a−aN` on it. A set
//! exists in R^d exactly when `G` is positive semidefinite with rank ≤ d.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gas::GasParams;

/// Tolerance for treating `1 + a − aN` (and Cholesky pivots) as zero.
pub const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionSet {
    dim: usize,
    a: f64,
    vectors: Vec<Vec<f64>>,
}

fn check_dim(d: usize) -> Result<()> {
    if d == 2 || d == 3 {
        Ok(())
    } else {
        Err(Error::Domain(format!("dimension must be 2 or 3, got {d}")))
    }
}

/// Smallest eigenvalue of the N×N Gram matrix, `1 + a − aN`.
fn smallest_gram_eigenvalue(a: f64, n: usize) -> f64 {
    1.0 + a - a * n as f64
}

/// Largest number of directions satisfying the dot-product constraint in R^d.
pub fn max_wave_count(g: &GasParams, d: usize) -> Result<usize> {
    check_dim(d)?;
    let a = g.a();
    let mut best = 1;
    for n in 2..=d + 1 {
        let lambda = smallest_gram_eigenvalue(a, n);
        let degenerate = lambda.abs() <= DEGENERACY_TOL;
        if lambda < 0.0 && !degenerate {
            break;
        }
        let rank = if degenerate { n - 1 } else { n };
        if rank <= d {
            best = n;
        }
    }
    Ok(best)
}

/// The canonical set of `n` directions for gas `g` in R^d.
pub fn build_directions(g: &GasParams, d: usize, n: usize) -> Result<DirectionSet> {
    let max = max_wave_count(g, d)?;
    if n == 0 || n > max {
        return Err(Error::Infeasible {
            requested: n,
            max,
            gamma: g.gamma(),
            dim: d,
        });
    }
    let a = g.a();
    let gram: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { -a }).collect())
        .collect();
    let mut ds = DirectionSet::from_gram(d, a, &gram)?;
    // a decimal gamma near a degenerate value leaves the Gram matrix very
    // slightly indefinite; keep the vectors unit length in that case
    for v in &mut ds.vectors {
        let len = norm(v);
        if (len - 1.0).abs() > 1e-14 {
            v.iter_mut().for_each(|c| *c /= len);
        }
    }
    Ok(ds)
}

/// Semidefinite Cholesky factor `G = L Lᵀ`, with near-zero pivots giving
/// zero columns. Row `i` of `L` is vector `i` written in the orthonormal
/// basis obtained by Gram-Schmidt on the earlier vectors, which is exactly
/// the canonical orientation.
fn semidefinite_cholesky(gram: &[Vec<f64>]) -> Result<(Vec<Vec<f64>>, Vec<bool>)> {
    let n = gram.len();
    let mut l = vec![vec![0.0; n]; n];
    let mut active = vec![false; n];
    for j in 0..n {
        let pivot = gram[j][j] - (0..j).map(|c| l[j][c] * l[j][c]).sum::<f64>();
        if pivot < -DEGENERACY_TOL {
            return Err(Error::Domain(format!(
                "Gram matrix is not positive semidefinite (pivot {pivot:e} at {j})"
            )));
        }
        if pivot <= DEGENERACY_TOL {
            continue;
        }
        active[j] = true;
        let diag = pivot.sqrt();
        l[j][j] = diag;
        for i in j + 1..n {
            let off = gram[i][j] - (0..j).map(|c| l[i][c] * l[j][c]).sum::<f64>();
            l[i][j] = off / diag;
        }
    }
    Ok((l, active))
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(p, q)| p * q).sum()
}

fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

fn cross(x: &[f64], y: &[f64]) -> [f64; 3] {
    [
        x[1] * y[2] - x[2] * y[1],
        x[2] * y[0] - x[0] * y[2],
        x[0] * y[1] - x[1] * y[0],
    ]
}

/// Normalizes `v` and flips its sign so the last nonzero component is positive.
fn canonical_unit(v: &[f64]) -> Vec<f64> {
    let len = norm(v);
    let mut u: Vec<f64> = v.iter().map(|c| c / len).collect();
    if let Some(last) = u.iter().rev().find(|c| c.abs() > 1e-12) {
        if *last < 0.0 {
            u.iter_mut().for_each(|c| *c = -*c);
        }
    }
    u
}

impl DirectionSet {
    /// Factors an explicit Gram matrix into vectors in canonical position.
    ///
    /// Used for the canonical sets and for deliberately perturbed ones.
    pub fn from_gram(dim: usize, a: f64, gram: &[Vec<f64>]) -> Result<Self> {
        check_dim(dim)?;
        let n = gram.len();
        if n == 0 || gram.iter().any(|row| row.len() != n) {
            return Err(Error::Domain("Gram matrix must be square and nonempty".into()));
        }
        let (l, active) = semidefinite_cholesky(gram)?;
        let cols: Vec<usize> = (0..n).filter(|&c| active[c]).collect();
        if cols.len() > dim {
            return Err(Error::Domain(format!(
                "Gram matrix has rank {} which does not fit in R^{dim}",
                cols.len()
            )));
        }
        let vectors = l
            .iter()
            .map(|row| {
                let mut v = vec![0.0; dim];
                for (slot, &c) in cols.iter().enumerate() {
                    v[slot] = row[c];
                }
                v
            })
            .collect();
        Ok(Self { dim, a, vectors })
    }

    /// Wraps user-supplied vectors without enforcing the dot-product
    /// constraint; `gram_residual` reports how far they are from it.
    pub fn custom(dim: usize, a: f64, vectors: Vec<Vec<f64>>) -> Result<Self> {
        check_dim(dim)?;
        if vectors.is_empty() {
            return Err(Error::Domain("direction set must not be empty".into()));
        }
        for v in &vectors {
            if v.len() != dim || v.iter().any(|c| !c.is_finite()) {
                return Err(Error::Domain(format!(
                    "direction {v:?} is not a finite vector in R^{dim}"
                )));
            }
        }
        Ok(Self { dim, a, vectors })
    }

    /// Same set with the Gram entry `(i, j)` shifted by `delta`, refactored
    /// into canonical position. The result violates the constraint on purpose.
    pub fn perturbed(&self, i: usize, j: usize, delta: f64) -> Result<Self> {
        let n = self.n();
        if i >= n || j >= n || i == j {
            return Err(Error::Domain(format!(
                "perturbation indices ({i}, {j}) invalid for {n} directions"
            )));
        }
        let mut gram: Vec<Vec<f64>> = (0..n)
            .map(|p| (0..n).map(|q| dot(&self.vectors[p], &self.vectors[q])).collect())
            .collect();
        gram[i][j] += delta;
        gram[j][i] += delta;
        Self::from_gram(self.dim, self.a, &gram)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.vectors.len()
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k]
    }

    /// Gram matrix of the stored vectors.
    pub fn gram(&self) -> Vec<Vec<f64>> {
        self.vectors
            .iter()
            .map(|p| self.vectors.iter().map(|q| dot(p, q)).collect())
            .collect()
    }

    /// `max |v_i·v_j − G_ij|` against the target Gram matrix (1 on the
    /// diagonal, −a off it).
    pub fn gram_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, p) in self.vectors.iter().enumerate() {
            for (j, q) in self.vectors.iter().enumerate() {
                let target = if i == j { 1.0 } else { -self.a };
                worst = worst.max((dot(p, q) - target).abs());
            }
        }
        worst
    }

    /// Dimension of the span of the set.
    pub fn span_rank(&self) -> usize {
        match self.dim {
            2 => {
                let independent = self.vectors.iter().any(|p| {
                    self.vectors
                        .iter()
                        .any(|q| (p[0] * q[1] - p[1] * q[0]).abs() > DEGENERACY_TOL)
                });
                if independent {
                    2
                } else {
                    1
                }
            }
            _ => match self.widest_normal() {
                None => 1,
                Some(normal) => {
                    if self.vectors.iter().all(|v| dot(v, &normal).abs() <= DEGENERACY_TOL) {
                        2
                    } else {
                        3
                    }
                }
            },
        }
    }

    /// Normalized cross product of the most independent pair (3-D only).
    fn widest_normal(&self) -> Option<Vec<f64>> {
        let mut best: Option<[f64; 3]> = None;
        let mut best_len = DEGENERACY_TOL;
        for (i, p) in self.vectors.iter().enumerate() {
            for q in &self.vectors[i + 1..] {
                let c = cross(p, q);
                let len = norm(&c);
                if len > best_len {
                    best_len = len;
                    best = Some(c);
                }
            }
        }
        best.map(|c| canonical_unit(&c))
    }

    /// A unit vector orthogonal to every direction, when the set does not span R^d.
    pub fn transverse_direction(&self) -> Option<Vec<f64>> {
        if self.span_rank() >= self.dim {
            return None;
        }
        let v = &self.vectors[0];
        match self.dim {
            2 => Some(canonical_unit(&[-v[1], v[0]])),
            _ => {
                if let Some(normal) = self.widest_normal() {
                    return Some(normal);
                }
                // one-dimensional span: cross with the least aligned axis
                let axis = (0..3)
                    .min_by(|&x, &y| v[x].abs().total_cmp(&v[y].abs()))
                    .unwrap_or(0);
                let mut e = [0.0; 3];
                e[axis] = 1.0;
                Some(canonical_unit(&cross(v, &e)))
            }
        }
    }
}
