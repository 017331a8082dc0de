//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::rational::{RVec, Rat};

/// A matrix in reduced row echelon form.
#[derive(Clone, Debug, PartialEq)]
pub struct Rref {
    pub rows: Vec<RVec>,
    /// Pivot column of each row.
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl Rref {
    pub fn new(cols: usize) -> Self {
        Rref {
            rows: Vec::new(),
            pivots: Vec::new(),
            cols,
        }
    }

    pub fn from_rows(rows: &[RVec], cols: usize) -> Self {
        let mut r = Rref::new(cols);
        for row in rows {
            r.insert(row.clone());
        }
        r
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `row` against the basis without inserting it.
    pub fn reduce(&self, mut row: RVec) -> RVec {
        for (basis, &p) in self.rows.iter().zip(&self.pivots) {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (c, b) in row.iter_mut().zip(basis) {
                    if !b.is_zero() {
                        *c -= &f * b;
                    }
                }
            }
        }
        row
    }

    pub fn is_independent(&self, row: &[Rat]) -> bool {
        self.reduce(row.to_vec()).iter().any(|c| !c.is_zero())
    }

    /// Adds a row; returns false when it lies in the current row space.
    pub fn insert(&mut self, row: RVec) -> bool {
        assert_eq!(row.len(), self.cols);
        let mut row = self.reduce(row);
        let Some(p) = row.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = row[p].recip();
        for c in row.iter_mut() {
            *c *= &inv;
        }
        for (basis, _) in self.rows.iter_mut().zip(&self.pivots) {
            if !basis[p].is_zero() {
                let f = basis[p].clone();
                for (b, r) in basis.iter_mut().zip(&row) {
                    if !r.is_zero() {
                        *b -= &f * r;
                    }
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, row);
        self.pivots.insert(at, p);
        true
    }

    /// Basis of `{x : row·x = 0 for every row}`.
    pub fn nullspace(&self) -> Vec<RVec> {
        let free: Vec<usize> = (0..self.cols).filter(|c| !self.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rat::zero(); self.cols];
                v[f] = Rat::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = -row[f].clone();
                }
                v
            })
            .collect()
    }
}

pub fn rank(rows: &[RVec], cols: usize) -> usize {
    Rref::from_rows(rows, cols).rank()
}

pub fn nullspace(rows: &[RVec], cols: usize) -> Vec<RVec> {
    Rref::from_rows(rows, cols).nullspace()
}

/// Some solution of `A x = b`, or `None` if inconsistent.
pub fn solve(a: &[RVec], b: &[Rat], cols: usize) -> Option<RVec> {
    let aug: Vec<RVec> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let r = Rref::from_rows(&aug, cols + 1);
    if r.pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![Rat::zero(); cols];
    for (row, &p) in r.rows.iter().zip(&r.pivots) {
        x[p] = row[cols].clone();
    }
    Some(x)
}

/// Dimension of the affine hull of `points` (−1 encoded as `None` when empty).
pub fn affine_dimension(points: &[RVec]) -> Option<usize> {
    let first = points.first()?;
    let diffs: Vec<RVec> = points[1..]
        .iter()
        .map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect())
        .collect();
    Some(rank(&diffs, first.len()))
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}
