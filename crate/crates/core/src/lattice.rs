//! Integer row reduction with a unimodular transform, and subgroups of `ℚᵐ`
//! generated by finitely many vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{RVec, Rat};

pub type IVec = Vec<BigInt>;

/// `U·A = H` with `U` unimodular and `H` in row echelon form; the nonzero
/// rows of `H` come first and have positive pivots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowEchelon {
    pub h: Vec<IVec>,
    pub u: Vec<IVec>,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

pub fn row_echelon(a: &[IVec], cols: usize) -> RowEchelon {
    let m = a.len();
    let mut h: Vec<IVec> = a.to_vec();
    let mut u: Vec<IVec> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m {
            break;
        }
        // Euclid on column c among rows r..m until a single nonzero remains.
        loop {
            let nonzero: Vec<usize> = (r..m).filter(|&i| !h[i][c].is_zero()).collect();
            if nonzero.len() <= 1 {
                break;
            }
            let p = *nonzero.iter().min_by_key(|&&i| h[i][c].abs()).unwrap();
            for &i in &nonzero {
                if i != p {
                    let q = h[i][c].div_floor(&h[p][c]);
                    let (hp, up) = (h[p].clone(), u[p].clone());
                    for (x, y) in h[i].iter_mut().zip(&hp) {
                        *x -= &q * y;
                    }
                    for (x, y) in u[i].iter_mut().zip(&up) {
                        *x -= &q * y;
                    }
                }
            }
        }
        let Some(p) = (r..m).find(|&i| !h[i][c].is_zero()) else {
            continue;
        };
        h.swap(r, p);
        u.swap(r, p);
        if h[r][c].is_negative() {
            for x in h[r].iter_mut() {
                *x = -x.clone();
            }
            for x in u[r].iter_mut() {
                *x = -x.clone();
            }
        }
        pivots.push(c);
        r += 1;
    }
    RowEchelon { h, u, rank: r, pivots }
}

/// Basis of `{x ∈ ℤⁿ : A x = 0}` for an integer `m × n` matrix `A`.
pub fn integer_kernel(a: &[IVec], n: usize) -> Vec<IVec> {
    // Row-reduce Aᵀ: rows of U whose image row in H is zero span the kernel.
    let at: Vec<IVec> = (0..n).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect();
    let e = row_echelon(&at, a.len());
    e.u[e.rank..].to_vec()
}

/// Common denominator of a set of rationals.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// The subgroup of `ℚᵐ` generated by finitely many vectors, in echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalLattice {
    dim: usize,
    denom: BigInt,
    /// Echelon basis of `denom · L` with positive pivots.
    rows: Vec<IVec>,
    pivots: Vec<usize>,
}

impl RationalLattice {
    pub fn generated_by(generators: &[RVec], dim: usize) -> Self {
        let denom = common_denominator(generators.iter().flatten());
        let scaled: Vec<IVec> = generators
            .iter()
            .map(|g| g.iter().map(|v| (v * Rat::from_integer(denom.clone())).to_integer()).collect())
            .collect();
        let e = row_echelon(&scaled, dim);
        RationalLattice {
            dim,
            denom,
            rows: e.h[..e.rank].to_vec(),
            pivots: e.pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> Vec<RVec> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|v| Rat::new(v.clone(), self.denom.clone())).collect())
            .collect()
    }

    /// Integer coordinates of `v` in the echelon basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[Rat]) -> Option<IVec> {
        let d = Rat::from_integer(self.denom.clone());
        let mut w: IVec = Vec::with_capacity(self.dim);
        for x in v {
            let s = x * &d;
            if !s.is_integer() {
                return None;
            }
            w.push(s.to_integer());
        }
        let mut coords = Vec::with_capacity(self.rows.len());
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let (q, r) = w[p].div_rem(&row[p]);
            if !r.is_zero() {
                return None;
            }
            for (x, y) in w.iter_mut().zip(row) {
                *x -= &q * y;
            }
            coords.push(q);
        }
        w.iter().all(|x| x.is_zero()).then_some(coords)
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Some lattice point `z` with `lo ≤ z ≤ hi` componentwise.
    pub fn point_in_box(&self, lo: &[Rat], hi: &[Rat]) -> Option<RVec> {
        let d = Rat::from_integer(self.denom.clone());
        let lo: Vec<Rat> = lo.iter().map(|x| x * &d).collect();
        let hi: Vec<Rat> = hi.iter().map(|x| x * &d).collect();
        let mut acc: IVec = vec![BigInt::zero(); self.dim];
        self.search_box(0, &mut acc, &lo, &hi)
            .map(|z| z.into_iter().map(|v| Rat::new(v, self.denom.clone())).collect())
    }

    fn search_box(&self, r: usize, acc: &mut IVec, lo: &[Rat], hi: &[Rat]) -> Option<IVec> {
        if r == self.rows.len() {
            let ok = acc
                .iter()
                .enumerate()
                .all(|(i, v)| lo[i] <= Rat::from_integer(v.clone()) && Rat::from_integer(v.clone()) <= hi[i]);
            return ok.then(|| acc.clone());
        }
        let row = &self.rows[r];
        let p = self.pivots[r];
        let base = Rat::from_integer(acc[p].clone());
        let step = Rat::from_integer(row[p].clone());
        let cmin = ((&lo[p] - &base) / &step).ceil().to_integer();
        let cmax = ((&hi[p] - &base) / &step).floor().to_integer();
        let mut c = cmin;
        while c <= cmax {
            for (x, y) in acc.iter_mut().zip(row) {
                *x += &c * y;
            }
            let found = self.search_box(r + 1, acc, lo, hi);
            for (x, y) in acc.iter_mut().zip(row) {
                *x -= &c * y;
            }
            if found.is_some() {
                return found;
            }
            c += 1;
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn iv(xs: &[i64]) -> IVec {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn mat_vec(a: &[IVec], x: &IVec) -> IVec {
        a.iter()
            .map(|row| row.iter().zip(x).fold(BigInt::zero(), |acc, (p, q)| acc + p * q))
            .collect()
    }

    #[test]
    fn kernel_of_small_matrices() {
        let a = vec![iv(&[1, 0])];
        assert_eq!(integer_kernel(&a, 2), vec![iv(&[0, 1])]);
        let a = vec![iv(&[2, 4, 6])];
        let k = integer_kernel(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&a, v).iter().all(|x| x.is_zero()));
        }
        let a = vec![iv(&[1, 0]), iv(&[0, 1])];
        assert!(integer_kernel(&a, 2).is_empty());
    }

    #[test]
    fn transform_is_consistent() {
        let a = vec![iv(&[4, 6, 2]), iv(&[6, 9, 3]), iv(&[2, 1, 5])];
        let e = row_echelon(&a, 3);
        for (urow, hrow) in e.u.iter().zip(&e.h) {
            let combo: IVec = (0..3)
                .map(|j| urow.iter().zip(&a).fold(BigInt::zero(), |acc, (c, row)| acc + c * &row[j]))
                .collect();
            assert_eq!(&combo, hrow);
        }
        assert_eq!(e.rank, 2);
    }

    #[test]
    fn half_lattice_membership_and_interpolation() {
        let l = RationalLattice::generated_by(&[vec![rat(1, 2), int(0)], vec![int(0), rat(1, 2)]], 2);
        assert!(l.contains(&[rat(1, 2), int(-3)]));
        assert!(!l.contains(&[rat(1, 3), int(0)]));
        let z = l
            .point_in_box(&[rat(1, 2), int(0)], &[rat(1, 2), int(0)])
            .unwrap();
        assert_eq!(z, vec![rat(1, 2), int(0)]);

        let skew = RationalLattice::generated_by(&[vec![int(1), int(1)], vec![int(1), int(-1)]], 2);
        assert!(!skew.contains(&[int(1), int(0)]));
        assert!(skew.contains(&[int(2), int(0)]));
        assert_eq!(skew.point_in_box(&[int(1), int(0)], &[int(1), rat(1, 2)]), None);
        assert!(skew.point_in_box(&[int(0), int(0)], &[int(1), int(1)]).is_some());
    }
}
