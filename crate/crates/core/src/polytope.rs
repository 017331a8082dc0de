//! The real state space of a finite algebra as an exact polytope.
//!
//! Variables are the values `s(x)`, one per carrier element. The equalities
//! `s(0)=0`, `s(1)=1` and `s(x)+s(y)=s(x+y)` are solved once, giving an affine
//! parametrization `s = base + Σ tⱼ dirⱼ`; the bounds `0 ≤ s(x) ≤ 1` become
//! half-spaces in the parameters `t`, on which vertices are found by an
//! active-set search.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{dot, Rref};
use crate::rational::{self, RVec, Rat};

/// `normal · t ≤ bound`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct HalfSpace {
    normal: RVec,
    bound: Rat,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Equality {
    #[serde(with = "rational::vec")]
    pub coeffs: RVec,
    #[serde(with = "rational")]
    pub rhs: Rat,
}

#[derive(Clone, Debug)]
pub struct StatePolytope {
    carrier_size: usize,
    equalities: Vec<Equality>,
    rank: usize,
    base: Option<RVec>,
    dirs: Vec<RVec>,
    halfspaces: Vec<HalfSpace>,
    empty: bool,
}

/// Upper limit on active sets examined during vertex enumeration.
pub const DEFAULT_MAX_ACTIVE_SETS: usize = 20_000_000;

impl StatePolytope {
    pub fn new(fa: &FiniteAlgebra) -> Self {
        let n = fa.len();
        let mut equalities = Vec::new();
        let unit_row = |i: usize, rhs: Rat| {
            let mut coeffs = rational::zeros(n);
            coeffs[i] = Rat::one();
            Equality { coeffs, rhs }
        };
        equalities.push(unit_row(fa.zero(), Rat::zero()));
        equalities.push(unit_row(fa.one(), Rat::one()));
        for (x, y, z) in fa.defined_sums() {
            let mut coeffs = rational::zeros(n);
            coeffs[x] += Rat::one();
            coeffs[y] += Rat::one();
            coeffs[z] -= Rat::one();
            if coeffs.iter().any(|c| !c.is_zero()) && !equalities.iter().any(|e| e.coeffs == coeffs) {
                equalities.push(Equality { coeffs, rhs: Rat::zero() });
            }
        }

        let coeff_rank = Rref::from_rows(&equalities.iter().map(|e| e.coeffs.clone()).collect::<Vec<_>>(), n).rank();
        let aug: Vec<RVec> = equalities
            .iter()
            .map(|e| {
                let mut r = e.coeffs.clone();
                r.push(e.rhs.clone());
                r
            })
            .collect();
        let reduced = Rref::from_rows(&aug, n + 1);
        let mut poly = StatePolytope {
            carrier_size: n,
            equalities,
            rank: coeff_rank,
            base: None,
            dirs: Vec::new(),
            halfspaces: Vec::new(),
            empty: true,
        };
        if reduced.pivots.contains(&n) {
            return poly;
        }
        let mut base = rational::zeros(n);
        for (row, &p) in reduced.rows.iter().zip(&reduced.pivots) {
            base[p] = row[n].clone();
        }
        let coeff_only = Rref {
            rows: reduced.rows.iter().map(|r| r[..n].to_vec()).collect(),
            pivots: reduced.pivots.clone(),
            cols: n,
        };
        let dirs = coeff_only.nullspace();
        let d = dirs.len();

        let mut halfspaces = Vec::new();
        let mut feasible = true;
        for x in 0..n {
            let g: RVec = dirs.iter().map(|dir| dir[x].clone()).collect();
            if g.iter().all(|c| c.is_zero()) {
                if base[x].is_negative() || base[x] > Rat::one() {
                    feasible = false;
                }
                continue;
            }
            // base + g·t ≥ 0  and  base + g·t ≤ 1
            halfspaces.push(normalize(g.iter().map(|c| -c).collect(), base[x].clone()));
            halfspaces.push(normalize(g, Rat::one() - &base[x]));
        }
        halfspaces.sort();
        // Keep the tightest bound for each normal.
        halfspaces.dedup_by(|later, earlier| later.normal == earlier.normal);
        poly.halfspaces = halfspaces;
        poly.base = Some(base);
        poly.dirs = dirs;
        poly.empty = !feasible;
        if feasible && d > 0 {
            let (rows, rhs, cols) = poly.feasibility_rows();
            poly.empty = crate::lp::feasible_point(&rows, &rhs, cols).is_none();
        }
        poly
    }

    /// `A z = b, z ≥ 0` with `t = t⁺ − t⁻` and slacks, for emptiness tests.
    fn feasibility_rows(&self) -> (Vec<RVec>, RVec, usize) {
        let d = self.dirs.len();
        let m = self.halfspaces.len();
        let cols = 2 * d + m;
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        for (k, h) in self.halfspaces.iter().enumerate() {
            let mut row = rational::zeros(cols);
            for j in 0..d {
                row[j] = h.normal[j].clone();
                row[d + j] = -h.normal[j].clone();
            }
            row[2 * d + k] = Rat::one();
            rows.push(row);
            rhs.push(h.bound.clone());
        }
        (rows, rhs, cols)
    }

    pub fn carrier_size(&self) -> usize {
        self.carrier_size
    }

    pub fn equalities(&self) -> &[Equality] {
        &self.equalities
    }

    pub fn bound_count(&self) -> usize {
        self.halfspaces.len()
    }

    /// `|carrier| − rank` of the equality system.
    pub fn dimension(&self) -> usize {
        self.carrier_size - self.rank
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    /// Whether `values` satisfies every equality and bound.
    pub fn contains(&self, values: &[Rat]) -> bool {
        values.len() == self.carrier_size
            && values.iter().all(|v| !v.is_negative() && *v <= Rat::one())
            && self.equalities.iter().all(|e| dot(&e.coeffs, values) == e.rhs)
    }

    fn point(&self, t: &[Rat]) -> RVec {
        let mut s = self.base.clone().expect("nonempty polytope");
        for (tj, dir) in t.iter().zip(&self.dirs) {
            if !tj.is_zero() {
                for (si, di) in s.iter_mut().zip(dir) {
                    *si += tj * di;
                }
            }
        }
        s
    }

    /// All vertices as value vectors, duplicate-free and sorted.
    pub fn enumerate_vertices(&self, max_dim: usize) -> Result<Vec<RVec>> {
        self.enumerate_vertices_capped(max_dim, DEFAULT_MAX_ACTIVE_SETS)
    }

    pub fn enumerate_vertices_capped(&self, max_dim: usize, max_active_sets: usize) -> Result<Vec<RVec>> {
        if self.empty {
            return Ok(Vec::new());
        }
        let d = self.dirs.len();
        if d > max_dim {
            return Err(Error::CapExceeded {
                what: "polytope dimension",
                limit: max_dim,
                actual: d,
            });
        }
        if d == 0 {
            return Ok(vec![self.point(&[])]);
        }
        let m = self.halfspaces.len();
        let estimate = binomial(m, d);
        if estimate > max_active_sets {
            return Err(Error::CapExceeded {
                what: "active sets",
                limit: max_active_sets,
                actual: estimate,
            });
        }
        let mut found: Vec<RVec> = (0..m)
            .into_par_iter()
            .flat_map_iter(|first| {
                let mut out = Vec::new();
                let mut basis = Rref::new(d);
                basis.insert(self.halfspaces[first].normal.clone());
                let mut chosen = vec![first];
                self.search(first + 1, &mut chosen, &mut basis, &mut out);
                out
            })
            .collect();
        found.sort();
        found.dedup();
        Ok(found)
    }

    fn search(&self, from: usize, chosen: &mut Vec<usize>, basis: &mut Rref, out: &mut Vec<RVec>) {
        let d = self.dirs.len();
        if chosen.len() == d {
            let a: Vec<RVec> = chosen.iter().map(|&k| self.halfspaces[k].normal.clone()).collect();
            let b: RVec = chosen.iter().map(|&k| self.halfspaces[k].bound.clone()).collect();
            let t = crate::linalg::solve(&a, &b, d).expect("independent active set");
            if self.halfspaces.iter().all(|h| dot(&h.normal, &t) <= h.bound) {
                out.push(self.point(&t));
            }
            return;
        }
        for k in from..self.halfspaces.len() {
            if self.halfspaces.len() - k < d - chosen.len() {
                break;
            }
            if !basis.is_independent(&self.halfspaces[k].normal) {
                continue;
            }
            let saved = basis.clone();
            basis.insert(self.halfspaces[k].normal.clone());
            chosen.push(k);
            self.search(k + 1, chosen, basis, out);
            chosen.pop();
            *basis = saved;
        }
    }
}

fn normalize(mut normal: RVec, mut bound: Rat) -> HalfSpace {
    let lead = normal.iter().find(|c| !c.is_zero()).expect("nonzero normal").abs();
    for c in normal.iter_mut() {
        *c /= &lead;
    }
    bound /= &lead;
    HalfSpace { normal, bound }
}

fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n.saturating_sub(k));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

/// `Σ wᵢ pᵢ`.
pub fn convex_combination(points: &[RVec], weights: &[Rat]) -> RVec {
    let n = points.first().map_or(0, |p| p.len());
    let mut out = rational::zeros(n);
    for (p, w) in points.iter().zip(weights) {
        if w.is_zero() {
            continue;
        }
        for (o, v) in out.iter_mut().zip(p) {
            *o += w * v;
        }
    }
    out
}
