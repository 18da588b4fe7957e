//! Independent re-implementations used to cross-check the main library.
//!
//! These deliberately avoid the library's own algorithms: inertia is read
//! off the characteristic polynomial (Faddeev–LeVerrier plus Descartes'
//! rule of signs, exact for symmetric matrices because all eigenvalues are
//! real), and extremality is decided by enumerating basic feasible
//! solutions and recession rays over all column subsets instead of running
//! a simplex.

use hkz_core::model::DivisorClass;
use hkz_core::rat::Rat;
use hkz_core::ratlin::{Inertia, RatMatrix};
use num_traits::{One, Signed, Zero};

fn trace(a: &RatMatrix) -> Rat {
    (0..a.rows()).map(|i| a.at(i, i).clone()).sum()
}

fn mat_mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    assert_eq!(a.cols(), b.rows());
    let mut out = RatMatrix::zeros(a.rows(), b.cols());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            let mut acc = Rat::zero();
            for k in 0..a.cols() {
                acc += a.at(i, k) * b.at(k, j);
            }
            out.set(i, j, acc);
        }
    }
    out
}

/// Coefficients `c_0, …, c_n` of `det(λI − A) = Σ c_k λ^k` (monic), via
/// the Faddeev–LeVerrier recurrence.
pub fn charpoly(a: &RatMatrix) -> Vec<Rat> {
    assert!(a.is_square());
    let n = a.rows();
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let mut mk = a.clone();
    for k in 1..=n {
        let c = -trace(&mk) / Rat::from_integer(k.into());
        coeffs[n - k] = c.clone();
        if k < n {
            for i in 0..n {
                let bumped = mk.at(i, i) + &c;
                mk.set(i, i, bumped);
            }
            mk = mat_mul(a, &mk);
        }
    }
    coeffs
}

fn sign_changes(coeffs: &[Rat]) -> usize {
    let mut changes = 0;
    let mut last: Option<bool> = None;
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        let pos = c.is_positive();
        if let Some(prev) = last {
            if prev != pos {
                changes += 1;
            }
        }
        last = Some(pos);
    }
    changes
}

/// Inertia of a symmetric matrix from its characteristic polynomial: the
/// zero count is the multiplicity of the root 0, and Descartes' rule of
/// signs is exact on the remaining factor because every root is real.
pub fn inertia_via_charpoly(a: &RatMatrix) -> Inertia {
    assert!(a.is_symmetric());
    let coeffs = charpoly(a);
    let zero = coeffs
        .iter()
        .position(|c| !c.is_zero())
        .expect("monic polynomial has a nonzero coefficient");
    let reduced = &coeffs[zero..];
    let positive = sign_changes(reduced);
    let negated: Vec<Rat> = reduced
        .iter()
        .enumerate()
        .map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() })
        .collect();
    let negative = sign_changes(&negated);
    assert_eq!(positive + negative + zero, a.rows());
    Inertia {
        positive,
        zero,
        negative,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleExtremality {
    NotInCone,
    Extremal,
    NotExtremal,
}

/// Reduced row echelon form; returns pivot column indices.
fn rref(rows: &mut Vec<Vec<Rat>>) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = if nrows == 0 { 0 } else { rows[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].clone();
        for v in &mut rows[r] {
            *v /= &inv;
        }
        for i in 0..nrows {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for cc in 0..ncols {
                    let t = &rows[r][cc] * &f;
                    rows[i][cc] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    pivots
}

/// Solves `Σ x_k · cols[k] = rhs` when the columns are linearly
/// independent; `None` when inconsistent or the columns are dependent.
fn solve_columns(cols: &[&[Rat]], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let dim = rhs.len();
    let n = cols.len();
    let mut rows: Vec<Vec<Rat>> = (0..dim)
        .map(|i| {
            let mut row: Vec<Rat> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut rows);
    if pivots.contains(&n) {
        return None; // inconsistent: pivot in the augmented column
    }
    if pivots.len() != n {
        return None; // dependent columns
    }
    let mut x = vec![Rat::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = rows[r][n].clone();
    }
    Some(x)
}

/// One-dimensional kernel generator of the column list, if the kernel has
/// dimension exactly 1.
fn kernel_line(cols: &[&[Rat]]) -> Option<Vec<Rat>> {
    let n = cols.len();
    if n == 0 {
        return None;
    }
    let dim = cols[0].len();
    let mut rows: Vec<Vec<Rat>> = (0..dim)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect();
    let pivots = rref(&mut rows);
    if pivots.len() + 1 != n {
        return None;
    }
    let free = (0..n).find(|c| !pivots.contains(c)).expect("one free column");
    let mut v = vec![Rat::zero(); n];
    v[free] = Rat::one();
    for (r, &c) in pivots.iter().enumerate() {
        v[c] = -rows[r][free].clone();
    }
    Some(v)
}

/// Brute-force extremality oracle: enumerates every column subset. A basic
/// feasible solution (independent columns, unique nonnegative solution)
/// certifies membership; a positive weight on a generator not proportional
/// to `L` — in a basic solution, or in a nonnegative recession ray of a
/// one-dimensional subset kernel — certifies non-extremality. Optima of
/// each coordinate are attained at such vertices or improved along such
/// rays, so the enumeration is exhaustive.
pub fn extremal_oracle(generators: &[DivisorClass], l: &DivisorClass) -> OracleExtremality {
    let n = generators.len();
    assert!(n <= 16, "oracle is exponential in the generator count");
    assert!(!l.is_zero());
    let cols: Vec<&[Rat]> = generators.iter().map(|g| g.coords()).collect();
    let nonprop: Vec<bool> = generators
        .iter()
        .map(|g| g.proportion_to(l).is_none())
        .collect();

    let mut feasible = false;
    let mut witnessed = false;
    let mut ray_witnessed = false;
    for mask in 0u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
        let sub: Vec<&[Rat]> = idx.iter().map(|&j| cols[j]).collect();
        if let Some(x) = solve_columns(&sub, l.coords()) {
            if x.iter().all(|v| !v.is_negative()) {
                feasible = true;
                if idx
                    .iter()
                    .zip(&x)
                    .any(|(&j, v)| v.is_positive() && nonprop[j])
                {
                    witnessed = true;
                }
            }
        }
        if let Some(mut v) = kernel_line(&sub) {
            if v.iter().all(|c| !c.is_positive()) {
                for c in &mut v {
                    *c = -c.clone();
                }
            }
            if v.iter().all(|c| !c.is_negative())
                && idx
                    .iter()
                    .zip(&v)
                    .any(|(&j, c)| c.is_positive() && nonprop[j])
            {
                ray_witnessed = true;
            }
        }
    }
    if !feasible {
        return OracleExtremality::NotInCone;
    }
    if witnessed || ray_witnessed {
        OracleExtremality::NotExtremal
    } else {
        OracleExtremality::Extremal
    }
}
