//! Signed measures with values in `ℚⁿ` and their lattice operations.
//!
//! The order `≤⁺` has the measures (nonnegative additive maps) as positive
//! cone. Suprema are computed from the subadditive map `x ↦ m₁(x) ∨ m₂(x)`
//! as the largest sum over ordered decompositions of `x`.

use num_traits::One;
use serde::Serialize;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::linalg::Rref;
use crate::lp::{self, LpOutcome};
use crate::ordered::{RieszKind, RieszRep};
use crate::polytope::StatePolytope;
use crate::rational::{self, RVec, Rat};
use crate::state::RState;

/// An additive map from a finite algebra into `ℚⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedMeasure {
    target: RieszRep,
    values: Vec<RVec>,
}

fn require_qn(target: &RieszRep) -> Result<usize> {
    match target.kind() {
        RieszKind::Qn(n) => Ok(n),
        RieszKind::LexQ2 => Err(Error::Unsupported(
            "lattice operations on signed measures need a Dedekind complete target".into(),
        )),
    }
}

impl SignedMeasure {
    pub fn new(fa: &FiniteAlgebra, target: RieszRep, values: Vec<RVec>) -> Result<Self> {
        if values.len() != fa.len() {
            return Err(Error::DimensionMismatch {
                expected: fa.len(),
                actual: values.len(),
            });
        }
        for v in &values {
            target.check(v)?;
        }
        for (x, y, z) in fa.defined_sums() {
            if target.add(&values[x], &values[y]) != values[z] {
                return Err(Error::InvalidState(format!(
                    "not additive at {} + {}",
                    fa.label(x),
                    fa.label(y)
                )));
            }
        }
        Ok(SignedMeasure { target, values })
    }

    pub fn zero(fa: &FiniteAlgebra, target: RieszRep) -> Self {
        let values = vec![target.zero(); fa.len()];
        SignedMeasure { target, values }
    }

    pub fn from_state(s: &RState) -> Result<Self> {
        let values = s
            .values()
            .ok_or_else(|| Error::Unsupported("family states are not tabulated".into()))?;
        Ok(SignedMeasure {
            target: s.target().clone(),
            values: values.to_vec(),
        })
    }

    /// Measure from real coordinate functions, one per target coordinate.
    pub fn from_components(fa: &FiniteAlgebra, components: &[RVec]) -> Result<Self> {
        let values = (0..fa.len())
            .map(|x| components.iter().map(|c| c[x].clone()).collect())
            .collect();
        Self::new(fa, RieszRep::qn(components.len()), values)
    }

    pub fn target(&self) -> &RieszRep {
        &self.target
    }

    pub fn values(&self) -> &[RVec] {
        &self.values
    }

    pub fn value(&self, x: usize) -> &RVec {
        &self.values[x]
    }

    fn check_compatible(&self, other: &SignedMeasure) -> Result<()> {
        if self.values.len() != other.values.len() {
            return Err(Error::DimensionMismatch {
                expected: self.values.len(),
                actual: other.values.len(),
            });
        }
        if self.target != other.target {
            return Err(Error::DimensionMismatch {
                expected: self.target.dim(),
                actual: other.target.dim(),
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &SignedMeasure, f: impl Fn(&RVec, &RVec) -> RVec) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(SignedMeasure {
            target: self.target.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &SignedMeasure) -> Result<Self> {
        self.zip_with(other, |a, b| self.target.add(a, b))
    }

    pub fn sub(&self, other: &SignedMeasure) -> Result<Self> {
        self.zip_with(other, |a, b| self.target.sub(a, b))
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, alpha: &Rat) -> Self {
        SignedMeasure {
            target: self.target.clone(),
            values: self.values.iter().map(|v| self.target.scale(alpha, v)).collect(),
        }
    }

    /// Pointwise nonnegative, i.e. a measure.
    pub fn is_measure(&self) -> bool {
        let zero = self.target.zero();
        self.values.iter().all(|v| self.target.leq(&zero, v))
    }
}

/// `m₁ ≤⁺ m₂` iff `m₂ − m₁` is a measure.
pub fn measure_order(m1: &SignedMeasure, m2: &SignedMeasure) -> Result<bool> {
    Ok(m2.sub(m1)?.is_measure())
}

/// A map with `d(0) = 0` and `d(x+y) ≤ d(x) + d(y)` wherever `x+y` exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubadditiveMap {
    target: RieszRep,
    values: Vec<RVec>,
}

impl SubadditiveMap {
    pub fn new(fa: &FiniteAlgebra, target: RieszRep, values: Vec<RVec>) -> Result<Self> {
        require_qn(&target)?;
        if values.len() != fa.len() {
            return Err(Error::DimensionMismatch {
                expected: fa.len(),
                actual: values.len(),
            });
        }
        for v in &values {
            target.check(v)?;
        }
        if values[fa.zero()] != target.zero() {
            return Err(Error::Precondition("d(0) ≠ 0".into()));
        }
        for (x, y, z) in fa.defined_sums() {
            if !target.leq(&values[z], &target.add(&values[x], &values[y])) {
                return Err(Error::Precondition(format!(
                    "not subadditive at {} + {}",
                    fa.label(x),
                    fa.label(y)
                )));
            }
        }
        Ok(SubadditiveMap { target, values })
    }

    pub fn values(&self) -> &[RVec] {
        &self.values
    }
}

/// Carrier indices ordered by the size of their down-sets, so that every
/// proper summand of `x` precedes `x`.
fn by_downset(fa: &FiniteAlgebra) -> Vec<usize> {
    let n = fa.len();
    let mut order: Vec<(usize, usize)> = (0..n)
        .map(|x| ((0..n).filter(|&y| fa.leq(y, x)).count(), x))
        .collect();
    order.sort_unstable();
    order.into_iter().map(|(_, x)| x).collect()
}

/// For each `x`, the defined splits `x = y + z` with `y, z ≠ 0`.
fn splits(fa: &FiniteAlgebra) -> Vec<Vec<(usize, usize)>> {
    let mut out = vec![Vec::new(); fa.len()];
    let zero = fa.zero();
    for (y, z, x) in fa.defined_sums() {
        if y != zero && z != zero {
            out[x].push((y, z));
        }
    }
    out
}

fn extreme_over_decompositions(fa: &FiniteAlgebra, d: &[RVec], n: usize, maximize: bool) -> Vec<RVec> {
    let order = by_downset(fa);
    let splits = splits(fa);
    let mut best: Vec<RVec> = vec![Vec::new(); fa.len()];
    for &x in &order {
        let mut b = d[x].clone();
        for &(y, z) in &splits[x] {
            assert!(!best[y].is_empty(), "summand processed before its sum");
            for j in 0..n {
                let cand = &best[y][j] + &d[z][j];
                if (maximize && cand > b[j]) || (!maximize && cand < b[j]) {
                    b[j] = cand;
                }
            }
        }
        best[x] = b;
    }
    best
}

/// `m(x) = ⋁ { d(x₁)+⋯+d(xₖ) : x = x₁+⋯+xₖ }`, computed per coordinate by
/// dynamic programming over `x = (x₁+⋯+xₖ₋₁) + xₖ`.
pub fn sup_from_subadditive(fa: &FiniteAlgebra, d: &SubadditiveMap) -> Result<SignedMeasure> {
    let n = require_qn(&d.target)?;
    let values = extreme_over_decompositions(fa, &d.values, n, true);
    SignedMeasure::new(fa, d.target.clone(), values)
        .map_err(|e| Error::Verification(format!("supremum is not additive: {e}")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeOp {
    Sup,
    Inf,
}

/// `m₁ ∨ m₂` or `m₁ ∧ m₂` in the order `≤⁺`.
pub fn lattice_ops(fa: &FiniteAlgebra, m1: &SignedMeasure, m2: &SignedMeasure, op: LatticeOp) -> Result<SignedMeasure> {
    m1.check_compatible(m2)?;
    let n = require_qn(&m1.target)?;
    let r = &m1.target;
    let pointwise: Vec<RVec> = m1
        .values
        .iter()
        .zip(&m2.values)
        .map(|(a, b)| match op {
            LatticeOp::Sup => r.join(a, b),
            LatticeOp::Inf => r.meet(a, b),
        })
        .collect();
    let values = extreme_over_decompositions(fa, &pointwise, n, op == LatticeOp::Sup);
    SignedMeasure::new(fa, r.clone(), values)
        .map_err(|e| Error::Verification(format!("lattice operation is not additive: {e}")))
}

/// `m = m⁺ − m⁻` with `m⁺ = m ∨ 0`.
pub fn jordan_decompose(fa: &FiniteAlgebra, m: &SignedMeasure) -> Result<(SignedMeasure, SignedMeasure)> {
    let zero = SignedMeasure::zero(fa, m.target.clone());
    let plus = lattice_ops(fa, m, &zero, LatticeOp::Sup)?;
    let minus = plus.sub(m)?;
    if !plus.is_measure() || !minus.is_measure() {
        return Err(Error::Verification("Jordan parts are not measures".into()));
    }
    Ok((plus, minus))
}

/// The least upper bound of `m₁, m₂` by linear programming.
///
/// Minimizes the total mass `Σₓ Σᵢ hᵢ(x)` over additive `h` with `h ≥ m₁`
/// and `h ≥ m₂` pointwise. For the least upper bound `m*` and any feasible
/// `h`, `h − m*` is a measure, so its total mass is nonnegative and vanishes
/// only when `h = m*`; the minimizer is therefore unique and equals `m*`.
/// The variables are `w = h − (m₁ ∨ m₂) ≥ 0` taken pointwise.
pub fn lub_oracle(fa: &FiniteAlgebra, m1: &SignedMeasure, m2: &SignedMeasure) -> Result<SignedMeasure> {
    m1.check_compatible(m2)?;
    let n = require_qn(&m1.target)?;
    let r = &m1.target;
    let size = fa.len();
    let floor: Vec<RVec> = m1.values.iter().zip(&m2.values).map(|(a, b)| r.join(a, b)).collect();
    let var = |x: usize, j: usize| x * n + j;
    let cols = size * n;
    let mut rows: Vec<RVec> = Vec::new();
    let mut rhs: RVec = Vec::new();
    for j in 0..n {
        let mut row = rational::zeros(cols);
        row[var(fa.zero(), j)] = Rat::one();
        rows.push(row);
        rhs.push(-floor[fa.zero()][j].clone());
    }
    for (x, y, z) in fa.defined_sums() {
        for j in 0..n {
            // w_x + w_y − w_z = M_z − M_x − M_y
            let mut row = rational::zeros(cols);
            row[var(x, j)] += Rat::one();
            row[var(y, j)] += Rat::one();
            row[var(z, j)] -= Rat::one();
            rows.push(row);
            rhs.push(&floor[z][j] - &floor[x][j] - &floor[y][j]);
        }
    }
    let cost = rational::ones(cols);
    let w = match lp::minimize(&cost, &rows, &rhs) {
        LpOutcome::Optimal { x, .. } => x,
        other => return Err(Error::Verification(format!("least upper bound LP is {other:?}"))),
    };
    let values: Vec<RVec> = (0..size)
        .map(|x| (0..n).map(|j| &floor[x][j] + &w[var(x, j)]).collect())
        .collect();
    let h = SignedMeasure::new(fa, r.clone(), values)?;
    if !measure_order(m1, &h)? || !measure_order(m2, &h)? {
        return Err(Error::Verification("LP optimum is not an upper bound".into()));
    }
    Ok(h)
}

/// Basis of the real additive maps on `fa` (the span of the signed measures).
pub fn measure_basis(fa: &FiniteAlgebra) -> Vec<RVec> {
    let n = fa.len();
    let mut rows = Vec::new();
    let mut r0 = rational::zeros(n);
    r0[fa.zero()] = Rat::one();
    rows.push(r0);
    for (x, y, z) in fa.defined_sums() {
        let mut row = rational::zeros(n);
        row[x] += Rat::one();
        row[y] += Rat::one();
        row[z] -= Rat::one();
        rows.push(row);
    }
    Rref::from_rows(&rows, n).nullspace()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplexReport {
    pub empty: bool,
    pub vertex_count: usize,
    /// Affine dimension of the vertex set; `None` for an empty state space.
    pub affine_dimension: Option<usize>,
    pub is_simplex: bool,
    pub is_bauer: bool,
    /// Coefficients `λ` with `Σ λᵢ vᵢ = 0`, `Σ λᵢ = 0`, when not a simplex.
    pub witness: Option<Vec<String>>,
    /// Number `n` of `ℚ¹` factors for a `ℚⁿ` target.
    pub target_components: usize,
    /// The `ℚⁿ` state space is the `n`-fold product of the real one.
    pub product_vertex_count: String,
    pub component_is_simplex: bool,
}

/// Simplex and Bauer certification of the real state space, with the product
/// structure of the `ℚⁿ` state space.
pub fn simplex_report(fa: &FiniteAlgebra, rep: &RieszRep, max_dim: usize) -> Result<SimplexReport> {
    let n = require_qn(rep)?;
    let vertices = StatePolytope::new(fa).enumerate_vertices(max_dim)?;
    Ok(simplex_report_from_vertices(&vertices, n))
}

pub fn simplex_report_from_vertices(vertices: &[RVec], n: usize) -> SimplexReport {
    let k = vertices.len();
    let dim = crate::linalg::affine_dimension(vertices);
    let is_simplex = k > 0 && dim == Some(k - 1);
    let witness = (!is_simplex && k > 0).then(|| {
        let size = vertices[0].len();
        let mut rows: Vec<RVec> = (0..size).map(|x| vertices.iter().map(|v| v[x].clone()).collect()).collect();
        rows.push(rational::ones(k));
        let null = Rref::from_rows(&rows, k).nullspace();
        rational::vec_to_strings(&null[0])
    });
    let product = num_bigint::BigInt::from(k).pow(n as u32);
    SimplexReport {
        empty: k == 0,
        vertex_count: k,
        affine_dimension: dim,
        is_simplex,
        is_bauer: is_simplex,
        witness,
        target_components: n,
        product_vertex_count: product.to_string(),
        component_is_simplex: is_simplex,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Element, PmvAlgebra};
    use crate::rational::int;

    fn boolean_square() -> FiniteAlgebra {
        PmvAlgebra::chain_power(1, 2).finite(64).unwrap()
    }

    /// Real measure on `Ł₁²` with the given values at `e₁ = (1,0)` and `e₂ = (0,1)`.
    fn measure_e(fa: &FiniteAlgebra, a: i64, b: i64) -> SignedMeasure {
        let vals: RVec = fa
            .elements()
            .iter()
            .map(|e| {
                let c = e.chain_coords().unwrap();
                int(c[0] * a + c[1] * b)
            })
            .collect();
        SignedMeasure::from_components(fa, &[vals]).unwrap()
    }

    fn at(fa: &FiniteAlgebra, m: &SignedMeasure, c: &[i64]) -> Rat {
        m.value(fa.index_of(&Element::ints(c)).unwrap())[0].clone()
    }

    #[test]
    fn order_examples() {
        let fa = boolean_square();
        let m1 = measure_e(&fa, 2, 0);
        let m2 = measure_e(&fa, 0, 2);
        assert!(measure_order(&m1, &m1).unwrap());
        assert!(!measure_order(&m1, &m2).unwrap() && !measure_order(&m2, &m1).unwrap());
        let s = measure_e(&fa, 1, 1);
        assert!(measure_order(&m1, &m1.add(&s).unwrap()).unwrap());
    }

    #[test]
    fn sup_from_subadditive_examples() {
        let fa = boolean_square();
        let vals: Vec<RVec> = fa
            .elements()
            .iter()
            .map(|e| {
                let c = e.chain_coords().unwrap();
                vec![if c == [0, 0] { int(0) } else { int(2) }]
            })
            .collect();
        let d = SubadditiveMap::new(&fa, RieszRep::qn(1), vals).unwrap();
        let m = sup_from_subadditive(&fa, &d).unwrap();
        assert_eq!(at(&fa, &m, &[1, 0]), int(2));
        assert_eq!(at(&fa, &m, &[0, 1]), int(2));
        assert_eq!(at(&fa, &m, &[1, 1]), int(4));

        let add = measure_e(&fa, 3, -1);
        let d = SubadditiveMap::new(&fa, RieszRep::qn(1), add.values().to_vec()).unwrap();
        assert_eq!(sup_from_subadditive(&fa, &d).unwrap(), add);
        let zero = SignedMeasure::zero(&fa, RieszRep::qn(1));
        let d = SubadditiveMap::new(&fa, RieszRep::qn(1), zero.values().to_vec()).unwrap();
        assert_eq!(sup_from_subadditive(&fa, &d).unwrap(), zero);
    }

    #[test]
    fn lattice_examples() {
        let fa = boolean_square();
        let m1 = measure_e(&fa, 2, 0);
        let m2 = measure_e(&fa, 0, 2);
        let sup = lattice_ops(&fa, &m1, &m2, LatticeOp::Sup).unwrap();
        assert_eq!(sup, measure_e(&fa, 2, 2));
        assert_eq!(lub_oracle(&fa, &m1, &m2).unwrap(), sup);
        let inf = lattice_ops(&fa, &m1, &m2, LatticeOp::Inf).unwrap();
        assert_eq!(inf, measure_e(&fa, 0, 0));

        let small = measure_e(&fa, 1, 1);
        let big = measure_e(&fa, 2, 3);
        assert_eq!(lattice_ops(&fa, &small, &big, LatticeOp::Sup).unwrap(), big);
        assert_eq!(lattice_ops(&fa, &small, &big, LatticeOp::Inf).unwrap(), small);
        assert_eq!(lub_oracle(&fa, &small, &big).unwrap(), big);
        assert_eq!(lub_oracle(&fa, &small, &small).unwrap(), small);
        let zero = SignedMeasure::zero(&fa, RieszRep::qn(1));
        assert_eq!(lattice_ops(&fa, &small, &zero, LatticeOp::Inf).unwrap(), zero);
    }

    #[test]
    fn jordan_examples() {
        let fa = boolean_square();
        let m = measure_e(&fa, 1, -1);
        let (p, n) = jordan_decompose(&fa, &m).unwrap();
        assert_eq!(p, measure_e(&fa, 1, 0));
        assert_eq!(n, measure_e(&fa, 0, 1));
        let pos = measure_e(&fa, 2, 1);
        let zero = SignedMeasure::zero(&fa, RieszRep::qn(1));
        assert_eq!(jordan_decompose(&fa, &pos).unwrap(), (pos.clone(), zero.clone()));
        assert_eq!(jordan_decompose(&fa, &pos.neg()).unwrap(), (zero, pos));
    }

    #[test]
    fn lex_target_is_rejected() {
        let fa = boolean_square();
        let vals = vec![vec![int(0), int(0)]; fa.len()];
        let m = SignedMeasure::new(&fa, RieszRep::lex_q2(), vals).unwrap();
        assert!(matches!(lattice_ops(&fa, &m, &m, LatticeOp::Sup), Err(Error::Unsupported(_))));
    }

    #[test]
    fn simplex_examples() {
        let cube = PmvAlgebra::chain_power(2, 3).finite(64).unwrap();
        let r = simplex_report(&cube, &RieszRep::qn(1), 12).unwrap();
        assert_eq!((r.vertex_count, r.affine_dimension, r.is_simplex, r.is_bauer), (3, Some(2), true, true));
        let chain = PmvAlgebra::chain(4).finite(64).unwrap();
        let r = simplex_report(&chain, &RieszRep::qn(1), 12).unwrap();
        assert_eq!((r.vertex_count, r.affine_dimension, r.is_simplex), (1, Some(0), true));
        let r = simplex_report(&boolean_square(), &RieszRep::qn(2), 12).unwrap();
        assert!(r.component_is_simplex);
        assert_eq!(r.product_vertex_count, "4");

        let square = vec![
            vec![int(0), int(0)],
            vec![int(0), int(1)],
            vec![int(1), int(0)],
            vec![int(1), int(1)],
        ];
        let r = simplex_report_from_vertices(&square, 1);
        assert!(!r.is_simplex);
        assert_eq!(r.witness, Some(vec!["1".into(), "-1".into(), "-1".into(), "1".into()]));
    }

    #[test]
    fn measure_basis_dimension() {
        assert_eq!(measure_basis(&boolean_square()).len(), 2);
        assert_eq!(measure_basis(&PmvAlgebra::chain(3).finite(64).unwrap()).len(), 1);
    }
}
