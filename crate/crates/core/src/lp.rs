//! Exact two-phase simplex for `min c·x` subject to `A x = b`, `x ≥ 0`.
//!
//! Bland's rule guarantees termination; redundant equality rows are removed
//! by elimination before phase one.

use num_traits::{Signed, Zero};

use crate::linalg::Rref;
use crate::rational::{RVec, Rat};

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: RVec, value: Rat },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// `m` rows of `[A | b]`.
    rows: Vec<RVec>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rat {
        &self.rows[i][self.cols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *v -= &f * p;
                    }
                }
            }
        }
        self.basis[r] = c;
    }

    fn reduced_costs(&self, cost: &[Rat], active: usize) -> RVec {
        (0..active)
            .map(|j| {
                let mut r = cost[j].clone();
                for (row, &b) in self.rows.iter().zip(&self.basis) {
                    if !row[j].is_zero() {
                        r -= &cost[b] * &row[j];
                    }
                }
                r
            })
            .collect()
    }

    /// Runs simplex over columns `0..active`; false when unbounded.
    fn optimize(&mut self, cost: &[Rat], active: usize) -> bool {
        loop {
            let reduced = self.reduced_costs(cost, active);
            let Some(enter) = (0..active).find(|&j| reduced[j].is_negative() && !self.basis.contains(&j)) else {
                return true;
            };
            let mut leave: Option<(usize, Rat)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][enter];
                if a.is_positive() {
                    let ratio = self.rhs(i) / a;
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }
}

pub fn minimize(c: &[Rat], a: &[RVec], b: &[Rat]) -> LpOutcome {
    let n = c.len();
    let aug: Vec<RVec> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), n);
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let reduced = Rref::from_rows(&aug, n + 1);
    if reduced.pivots.contains(&n) {
        return LpOutcome::Infeasible;
    }
    let m = reduced.rank();
    let cols = n + m;
    let rows: Vec<RVec> = reduced
        .rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let sign = if row[n].is_negative() { -Rat::from_integer(1.into()) } else { Rat::from_integer(1.into()) };
            let mut out: RVec = row[..n].iter().map(|v| v * &sign).collect();
            out.extend((0..m).map(|k| if k == i { Rat::from_integer(1.into()) } else { Rat::zero() }));
            out.push(&row[n] * &sign);
            out
        })
        .collect();
    let mut tab = Tableau {
        rows,
        basis: (n..cols).collect(),
        cols,
    };

    let mut phase1 = vec![Rat::zero(); cols];
    for v in phase1[n..].iter_mut() {
        *v = Rat::from_integer(1.into());
    }
    tab.optimize(&phase1, cols);
    let infeasibility = tab
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &b)| b >= n)
        .fold(Rat::zero(), |acc, (i, _)| acc + tab.rhs(i));
    if infeasibility.is_positive() {
        return LpOutcome::Infeasible;
    }
    for i in 0..m {
        if tab.basis[i] >= n {
            let j = (0..n)
                .find(|&j| !tab.rows[i][j].is_zero())
                .expect("independent rows keep a structural pivot");
            tab.pivot(i, j);
        }
    }

    let mut cost = c.to_vec();
    cost.extend(std::iter::repeat_n(Rat::zero(), m));
    if !tab.optimize(&cost, n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rat::zero(); n];
    for (i, &bv) in tab.basis.iter().enumerate() {
        x[bv] = tab.rhs(i).clone();
    }
    let value = x.iter().zip(c).fold(Rat::zero(), |acc, (xi, ci)| acc + xi * ci);
    LpOutcome::Optimal { x, value }
}

/// Some feasible point of `A x = b`, `x ≥ 0`.
pub fn feasible_point(a: &[RVec], b: &[Rat], n: usize) -> Option<RVec> {
    match minimize(&vec![Rat::zero(); n], a, b) {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn v(xs: &[i64]) -> RVec {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn small_optimum() {
        // min -x - y s.t. x + 2y + s1 = 4, 3x + y + s2 = 6
        let out = minimize(&v(&[-1, -1, 0, 0]), &[v(&[1, 2, 1, 0]), v(&[3, 1, 0, 1])], &v(&[4, 6]));
        match out {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, rat(-14, 5));
                assert_eq!(&x[..2], &[rat(8, 5), rat(6, 5)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        assert_eq!(minimize(&v(&[1]), &[v(&[1])], &v(&[-1])), LpOutcome::Infeasible);
        assert_eq!(minimize(&v(&[-1, 0]), &[v(&[1, -1])], &v(&[0])), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let out = minimize(&v(&[1, 1]), &[v(&[1, 1]), v(&[2, 2])], &v(&[3, 6]));
        assert!(matches!(out, LpOutcome::Optimal { value, .. } if value == int(3)));
    }

    #[test]
    fn degenerate_cycle_prone_problem_terminates() {
        // Beale's example in equality form.
        let c = vec![rat(-3, 4), int(150), rat(-1, 50), int(6), int(0), int(0), int(0)];
        let a = vec![
            vec![rat(1, 4), int(-60), rat(-1, 25), int(9), int(1), int(0), int(0)],
            vec![rat(1, 2), int(-90), rat(-1, 50), int(3), int(0), int(1), int(0)],
            vec![int(0), int(0), int(1), int(0), int(0), int(0), int(1)],
        ];
        let b = v(&[0, 0, 1]);
        match minimize(&c, &a, &b) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat(-1, 20)),
            other => panic!("{other:?}"),
        }
    }
}
