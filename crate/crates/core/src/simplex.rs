//! Exact two-phase simplex over the rationals, with Bland's anti-cycling
//! pivot rule. Internal utility for the cone analyses: problem sizes are
//! tiny, so guaranteed termination and exactness win over speed.
//!
//! Constraint form throughout: `Σ λ_i · columns[i] = rhs`, `λ ≥ 0`.

use crate::rat::Rat;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

pub(crate) enum LpResult {
    Infeasible,
    /// Finite maximum of the target coordinate, with an attaining point.
    Bounded { value: Rat, point: Vec<Rat> },
    /// Target coordinate unbounded above; `point` is a feasible solution
    /// one unit along the improving ray (so its target value exceeds the
    /// basic solution's).
    Unbounded { point: Vec<Rat> },
}

struct Tableau {
    nvars: usize,
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let pivot = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v = &*v / &pivot;
        }
        self.rhs[row] = &self.rhs[row] / &pivot;
        for i in 0..self.rows.len() {
            if i == row || self.rows[i][col].is_zero() {
                continue;
            }
            let f = self.rows[i][col].clone();
            for j in 0..self.rows[i].len() {
                let delta = &f * &self.rows[row][j];
                self.rows[i][j] = &self.rows[i][j] - &delta;
            }
            let delta = &f * &self.rhs[row];
            self.rhs[i] = &self.rhs[i] - &delta;
        }
        self.basis[row] = col;
    }

    /// Current basic solution restricted to the original variables.
    fn point(&self) -> Vec<Rat> {
        let mut x = vec![Rat::zero(); self.nvars];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.nvars {
                x[b] = self.rhs[i].clone();
            }
        }
        x
    }

    /// Maximizes `cost`ᵀλ with Bland's rule: entering column is the lowest
    /// index with positive reduced cost; ties in the ratio test break
    /// toward the lowest basis index. Returns `Err(col)` when the
    /// objective is unbounded along entering column `col`.
    fn maximize_obj(&mut self, cost: &[Rat]) -> Result<(), usize> {
        let ncols = self.rows.first().map_or(0, Vec::len);
        loop {
            let mut entering = None;
            for j in 0..ncols {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut r = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() && !self.rows[i][j].is_zero() {
                        r -= &cost[b] * &self.rows[i][j];
                    }
                }
                if r.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(col) = entering else {
                return Ok(());
            };
            let mut leave: Option<usize> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][col].is_positive() {
                    continue;
                }
                let better = match leave {
                    None => true,
                    Some(l) => {
                        let cand = &self.rhs[i] / &self.rows[i][col];
                        let best = &self.rhs[l] / &self.rows[l][col];
                        match cand.cmp(&best) {
                            Ordering::Less => true,
                            Ordering::Equal => self.basis[i] < self.basis[l],
                            Ordering::Greater => false,
                        }
                    }
                };
                if better {
                    leave = Some(i);
                }
            }
            match leave {
                Some(row) => self.pivot(row, col),
                None => return Err(col),
            }
        }
    }
}

/// Phase 1: feasibility via artificial variables. On success the returned
/// tableau is a feasible basis over the original columns only (artificials
/// driven out, redundant rows dropped).
fn phase1(columns: &[Vec<Rat>], rhs: &[Rat]) -> Option<Tableau> {
    let n = rhs.len();
    let k = columns.len();
    for c in columns {
        assert_eq!(c.len(), n, "column length must match rhs length");
    }
    let mut rows: Vec<Vec<Rat>> = (0..n)
        .map(|i| columns.iter().map(|c| c[i].clone()).collect())
        .collect();
    let mut b = rhs.to_vec();
    for i in 0..n {
        if b[i].is_negative() {
            for v in rows[i].iter_mut() {
                *v = -v.clone();
            }
            b[i] = -b[i].clone();
        }
    }
    for (i, row) in rows.iter_mut().enumerate() {
        row.extend((0..n).map(|a| if a == i { Rat::one() } else { Rat::zero() }));
    }
    let mut t = Tableau {
        nvars: k,
        rows,
        rhs: b,
        basis: (k..k + n).collect(),
    };
    let mut cost = vec![Rat::zero(); k + n];
    for c in cost.iter_mut().skip(k) {
        *c = -Rat::one();
    }
    t.maximize_obj(&cost)
        .expect("phase-1 objective is bounded above by zero");
    if t.basis
        .iter()
        .enumerate()
        .any(|(i, &b)| b >= k && !t.rhs[i].is_zero())
    {
        return None;
    }
    // Drive out artificials still basic at zero; drop redundant rows.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= k {
            if let Some(j) = (0..k).find(|&j| !t.rows[i][j].is_zero()) {
                t.pivot(i, j);
                i += 1;
            } else {
                t.rows.remove(i);
                t.rhs.remove(i);
                t.basis.remove(i);
            }
        } else {
            i += 1;
        }
    }
    for row in t.rows.iter_mut() {
        row.truncate(k);
    }
    Some(t)
}

pub(crate) fn is_feasible(columns: &[Vec<Rat>], rhs: &[Rat]) -> bool {
    phase1(columns, rhs).is_some()
}

/// Maximizes `λ[target]` subject to `Σ λ_i · columns[i] = rhs`, `λ ≥ 0`.
pub(crate) fn maximize_coordinate(
    columns: &[Vec<Rat>],
    rhs: &[Rat],
    target: usize,
) -> LpResult {
    let Some(mut t) = phase1(columns, rhs) else {
        return LpResult::Infeasible;
    };
    let k = columns.len();
    let mut cost = vec![Rat::zero(); k];
    cost[target] = Rat::one();
    match t.maximize_obj(&cost) {
        Ok(()) => {
            let point = t.point();
            LpResult::Bounded {
                value: point[target].clone(),
                point,
            }
        }
        Err(col) => {
            // One unit along the improving ray keeps every coordinate
            // nonnegative (the entering column has no positive entries).
            let mut point = t.point();
            point[col] += Rat::one();
            for (i, &b) in t.basis.iter().enumerate() {
                if b < k {
                    let delta = t.rows[i][col].clone();
                    point[b] -= delta;
                }
            }
            LpResult::Unbounded { point }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat_int, ratio};

    fn cols(v: &[&[i64]]) -> Vec<Vec<Rat>> {
        v.iter()
            .map(|c| c.iter().map(|&x| rat_int(x)).collect())
            .collect()
    }

    fn vec_i(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat_int(x)).collect()
    }

    fn check_point(columns: &[Vec<Rat>], rhs: &[Rat], point: &[Rat]) {
        assert_eq!(point.len(), columns.len());
        assert!(point.iter().all(|c| !c.is_negative()));
        for i in 0..rhs.len() {
            let mut acc = Rat::zero();
            for (lam, col) in point.iter().zip(columns) {
                acc += lam * &col[i];
            }
            assert_eq!(acc, rhs[i]);
        }
    }

    #[test]
    fn feasibility_basics() {
        let c = cols(&[&[1, 0], &[0, 1]]);
        assert!(is_feasible(&c, &vec_i(&[1, 1])));
        assert!(is_feasible(&c, &vec_i(&[0, 0])));
        assert!(!is_feasible(&c, &vec_i(&[-1, 0])));
        assert!(!is_feasible(&[], &vec_i(&[1, 0])));
        assert!(is_feasible(&[], &vec_i(&[0, 0])));
    }

    #[test]
    fn bounded_maximum() {
        // λ0 + λ2 = 1, λ1 + λ2 = 1 over the three generators of a square.
        let c = cols(&[&[1, 0], &[0, 1], &[1, 1]]);
        let rhs = vec_i(&[1, 1]);
        match maximize_coordinate(&c, &rhs, 0) {
            LpResult::Bounded { value, point } => {
                assert_eq!(value, rat_int(1));
                check_point(&c, &rhs, &point);
                assert_eq!(point[0], rat_int(1));
            }
            _ => panic!("expected bounded optimum"),
        }
    }

    #[test]
    fn forced_zero_maximum() {
        let c = cols(&[&[1, 0], &[0, 1]]);
        let rhs = vec_i(&[1, 0]);
        match maximize_coordinate(&c, &rhs, 1) {
            LpResult::Bounded { value, .. } => assert_eq!(value, rat_int(0)),
            _ => panic!("expected bounded optimum"),
        }
    }

    #[test]
    fn unbounded_direction() {
        // Lineality: (1,0) and (-1,0) cancel, so λ0 is unbounded.
        let c = cols(&[&[1, 0], &[-1, 0], &[0, 1]]);
        let rhs = vec_i(&[0, 1]);
        match maximize_coordinate(&c, &rhs, 0) {
            LpResult::Unbounded { point } => {
                check_point(&c, &rhs, &point);
                assert!(point[0].is_positive());
            }
            _ => panic!("expected unbounded"),
        }
    }

    #[test]
    fn infeasible_target() {
        let c = cols(&[&[1, 0], &[0, 1]]);
        assert!(matches!(
            maximize_coordinate(&c, &vec_i(&[-1, -1]), 0),
            LpResult::Infeasible
        ));
    }

    #[test]
    fn rational_data() {
        let c = vec![vec![ratio(1, 2), ratio(1, 3)], vec![ratio(1, 4), ratio(2, 3)]];
        let rhs = vec![ratio(3, 4), rat_int(1)];
        match maximize_coordinate(&c, &rhs, 0) {
            LpResult::Bounded { point, .. } => check_point(&c, &rhs, &point),
            _ => panic!("expected bounded optimum"),
        }
    }

    #[test]
    fn redundant_rows_are_dropped() {
        // Second row duplicates the first.
        let c = vec![vec![rat_int(1), rat_int(1)], vec![rat_int(2), rat_int(2)]];
        let rhs = vec![rat_int(3), rat_int(3)];
        match maximize_coordinate(&c, &rhs, 1) {
            LpResult::Bounded { value, point } => {
                check_point(&c, &rhs, &point);
                assert_eq!(value, ratio(3, 2));
            }
            _ => panic!("expected bounded optimum"),
        }
    }
}
