//! Exact linear algebra over the rationals.
//!
//! Everything here is loss-free: solving uses Gaussian elimination with
//! partial pivoting, and inertia uses symmetric congruence (Lagrange)
//! diagonalization. No floating point is involved anywhere.

use crate::rat::Rat;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RatlinError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Dense row-major matrix of rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rat>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        RatMatrix { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            entries: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self, RatlinError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        for row in &rows {
            if row.len() != ncols {
                return Err(RatlinError::DimensionMismatch {
                    expected: ncols,
                    found: row.len(),
                });
            }
        }
        Ok(RatMatrix {
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rat) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        self.entries[i * self.cols + j] = value;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self.at(i, j) != self.at(j, i) {
                    return false;
                }
            }
        }
        true
    }

    /// `A v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.at(i, j) * &v[j])
                    .fold(Rat::zero(), |acc, t| acc + t)
            })
            .collect()
    }

    /// Submatrix on the given row/column index set (indices may repeat or
    /// reorder; the result is `idx.len()` square for a square input).
    pub fn principal_submatrix(&self, idx: &[usize]) -> RatMatrix {
        let n = idx.len();
        let mut entries = Vec::with_capacity(n * n);
        for &i in idx {
            for &j in idx {
                entries.push(self.at(i, j).clone());
            }
        }
        RatMatrix::new(n, n, entries)
    }
}

/// Signature of a symmetric matrix: counts of positive, zero, and negative
/// eigenvalues (equivalently, diagonal signs after congruence).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Inertia {
    pub positive: usize,
    pub zero: usize,
    pub negative: usize,
}

/// Solves `G x = b` for symmetric `G` by exact Gaussian elimination with
/// partial pivoting (largest absolute value in the pivot column).
pub fn solve_symmetric(g: &RatMatrix, b: &[Rat]) -> Result<Vec<Rat>, RatlinError> {
    assert!(g.is_symmetric(), "solve_symmetric requires a symmetric matrix");
    assert_eq!(b.len(), g.rows(), "right-hand side must match matrix size");
    let n = g.rows();
    let mut a: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| g.at(i, j).clone()).collect())
        .collect();
    let mut rhs: Vec<Rat> = b.to_vec();

    for col in 0..n {
        let pivot_row = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .max_by(|&r, &s| a[r][col].abs().cmp(&a[s][col].abs()))
            .ok_or(RatlinError::SingularMatrix)?;
        a.swap(col, pivot_row);
        rhs.swap(col, pivot_row);
        let pivot = a[col][col].clone();
        for row in (col + 1)..n {
            if a[row][col].is_zero() {
                continue;
            }
            let factor = &a[row][col] / &pivot;
            for j in col..n {
                let delta = &factor * &a[col][j];
                a[row][j] = &a[row][j] - &delta;
            }
            let delta = &factor * &rhs[col];
            rhs[row] = &rhs[row] - &delta;
        }
    }

    let mut x = vec![Rat::zero(); n];
    for row in (0..n).rev() {
        let mut acc = rhs[row].clone();
        for j in (row + 1)..n {
            acc -= &a[row][j] * &x[j];
        }
        x[row] = acc / &a[row][row];
    }
    Ok(x)
}

/// Inertia by symmetric congruence diagonalization.
///
/// At each step the pivot is the nonzero diagonal entry of largest absolute
/// value in the active block; if the active diagonal is entirely zero but an
/// off-diagonal entry `w[i][j]` is not, the congruence "add row/column `j`
/// to row/column `i`" manufactures the nonzero diagonal entry `2 w[i][j]`.
pub fn inertia(g: &RatMatrix) -> Inertia {
    assert!(g.is_symmetric(), "inertia requires a symmetric matrix");
    let n = g.rows();
    // Work on the full symmetric matrix; elimination of row/col k replaces
    // the trailing block by its exact Schur complement, preserving symmetry.
    let mut w: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| g.at(i, j).clone()).collect())
        .collect();
    let mut result = Inertia {
        positive: 0,
        zero: 0,
        negative: 0,
    };

    let mut k = 0;
    while k < n {
        let pivot_row = (k..n)
            .filter(|&i| !w[i][i].is_zero())
            .max_by(|&i, &j| w[i][i].abs().cmp(&w[j][j].abs()));
        let pivot_row = match pivot_row {
            Some(i) => i,
            None => {
                // All active diagonal entries are zero.
                let off = (k..n)
                    .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !w[i][j].is_zero());
                match off {
                    None => {
                        // Active block is identically zero.
                        result.zero += n - k;
                        break;
                    }
                    Some((i, j)) => {
                        for l in 0..n {
                            let t = w[j][l].clone();
                            w[i][l] += t;
                        }
                        for row in w.iter_mut() {
                            let t = row[j].clone();
                            row[i] += t;
                        }
                        i
                    }
                }
            }
        };

        swap_symmetric(&mut w, k, pivot_row);
        let pivot = w[k][k].clone();
        if pivot.is_positive() {
            result.positive += 1;
        } else {
            result.negative += 1;
        }
        for i in (k + 1)..n {
            if w[i][k].is_zero() {
                continue;
            }
            let factor = &w[i][k] / &pivot;
            for j in (k + 1)..n {
                let delta = &factor * &w[k][j];
                w[i][j] = &w[i][j] - &delta;
            }
            w[i][k] = Rat::zero();
            w[k][i] = Rat::zero();
        }
        // Mirror the eliminated block back onto symmetry (rows were updated;
        // copy into columns so later off-diagonal scans see a symmetric w).
        for i in (k + 1)..n {
            for j in (i + 1)..n {
                w[j][i] = w[i][j].clone();
            }
        }
        k += 1;
    }
    result
}

fn swap_symmetric(w: &mut [Vec<Rat>], a: usize, b: usize) {
    if a == b {
        return;
    }
    w.swap(a, b);
    for row in w.iter_mut() {
        row.swap(a, b);
    }
}

/// A symmetric matrix is negative definite iff its inertia is `(0, 0, n)`.
/// The empty matrix is vacuously negative definite.
pub fn is_negative_definite(g: &RatMatrix) -> bool {
    let sig = inertia(g);
    sig.positive == 0 && sig.zero == 0
}

/// Rank of an arbitrary (not necessarily square) matrix by row reduction.
pub fn rank(m: &RatMatrix) -> usize {
    let mut a: Vec<Vec<Rat>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.at(i, j).clone()).collect())
        .collect();
    let (nrows, ncols) = (m.rows(), m.cols());
    let mut r = 0;
    for col in 0..ncols {
        let Some(pivot_row) = (r..nrows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, pivot_row);
        let pivot = a[r][col].clone();
        for i in (r + 1)..nrows {
            if a[i][col].is_zero() {
                continue;
            }
            let factor = &a[i][col] / &pivot;
            for j in col..ncols {
                let delta = &factor * &a[r][j];
                a[i][j] = &a[i][j] - &delta;
            }
        }
        r += 1;
        if r == nrows {
            break;
        }
    }
    r
}
