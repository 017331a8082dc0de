//! Concrete unital ℓ-groups and unital Riesz spaces.
//!
//! Two group backends ship: ℤⁿ with the componentwise order and ℤ² with the
//! lexicographic order. Two Riesz spaces ship: ℚⁿ with the componentwise order
//! (coordinate set `T = {1..n}`, point evaluations as coordinates) and ℚ² with
//! the lexicographic order.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rat, RVec};

/// An element of a concrete ℓ-group. Both bundled backends are integral.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement(pub Vec<i64>);

impl GroupElement {
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        GroupElement(coords.into())
    }

    pub fn zero(dim: usize) -> Self {
        GroupElement(vec![0; dim])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// ℤⁿ ordered componentwise.
    Zn(usize),
    /// ℤ × ℤ ordered lexicographically.
    Z2Lex,
}

impl GroupKind {
    pub fn dim(&self) -> usize {
        match *self {
            GroupKind::Zn(n) => n,
            GroupKind::Z2Lex => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupOp {
    Add,
    Neg,
    Join,
    Meet,
    Leq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupValue {
    Element(GroupElement),
    Bool(bool),
}

/// A unital ℓ-group `(G, u)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnitalGroup {
    kind: GroupKind,
    unit: GroupElement,
}

impl UnitalGroup {
    /// Checks that `unit` is a strong unit of the chosen backend.
    pub fn new(kind: GroupKind, unit: GroupElement) -> Result<Self> {
        if unit.dim() != kind.dim() {
            return Err(Error::DimensionMismatch {
                expected: kind.dim(),
                actual: unit.dim(),
            });
        }
        let strong = match kind {
            GroupKind::Zn(_) => unit.0.iter().all(|&c| c >= 1),
            GroupKind::Z2Lex => unit.0[0] >= 1,
        };
        if !strong {
            return Err(Error::InvalidGroup(format!("{unit} is not a strong unit")));
        }
        Ok(UnitalGroup { kind, unit })
    }

    pub fn zn(unit: &[i64]) -> Result<Self> {
        Self::new(GroupKind::Zn(unit.len()), GroupElement::new(unit))
    }

    pub fn z2lex(unit: [i64; 2]) -> Result<Self> {
        Self::new(GroupKind::Z2Lex, GroupElement::new(unit))
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn unit(&self) -> &GroupElement {
        &self.unit
    }

    pub fn dim(&self) -> usize {
        self.kind.dim()
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement::zero(self.dim())
    }

    pub fn check(&self, x: &GroupElement) -> Result<()> {
        if x.dim() == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: x.dim(),
            })
        }
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        GroupElement(x.0.iter().zip(&y.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self, x: &GroupElement) -> GroupElement {
        GroupElement(x.0.iter().map(|a| -a).collect())
    }

    pub fn sub(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        GroupElement(x.0.iter().zip(&y.0).map(|(a, b)| a - b).collect())
    }

    pub fn leq(&self, x: &GroupElement, y: &GroupElement) -> bool {
        match self.kind {
            GroupKind::Zn(_) => x.0.iter().zip(&y.0).all(|(a, b)| a <= b),
            GroupKind::Z2Lex => x.0 <= y.0,
        }
    }

    pub fn join(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        match self.kind {
            GroupKind::Zn(_) => GroupElement(x.0.iter().zip(&y.0).map(|(a, b)| *a.max(b)).collect()),
            GroupKind::Z2Lex => {
                if self.leq(x, y) {
                    y.clone()
                } else {
                    x.clone()
                }
            }
        }
    }

    pub fn meet(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        match self.kind {
            GroupKind::Zn(_) => GroupElement(x.0.iter().zip(&y.0).map(|(a, b)| *a.min(b)).collect()),
            GroupKind::Z2Lex => {
                if self.leq(x, y) {
                    x.clone()
                } else {
                    y.clone()
                }
            }
        }
    }

    /// `g⁺ = g ∨ 0`.
    pub fn positive_part(&self, x: &GroupElement) -> GroupElement {
        self.join(x, &self.zero())
    }

    /// `g⁻ = −(g ∧ 0)`.
    pub fn negative_part(&self, x: &GroupElement) -> GroupElement {
        self.neg(&self.meet(x, &self.zero()))
    }

    pub fn eval(&self, op: GroupOp, x: &GroupElement, y: Option<&GroupElement>) -> Result<GroupValue> {
        self.check(x)?;
        if let Some(y) = y {
            self.check(y)?;
        }
        let need = |name| y.ok_or(Error::MissingOperand(name));
        Ok(match op {
            GroupOp::Add => GroupValue::Element(self.add(x, need("add")?)),
            GroupOp::Neg => GroupValue::Element(self.neg(x)),
            GroupOp::Join => GroupValue::Element(self.join(x, need("join")?)),
            GroupOp::Meet => GroupValue::Element(self.meet(x, need("meet")?)),
            GroupOp::Leq => GroupValue::Bool(self.leq(x, need("leq")?)),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RieszKind {
    /// ℚⁿ with the componentwise order and unit `(1,…,1)`.
    Qn(usize),
    /// ℚ × ℚ with the lexicographic order and unit `(1,0)`.
    LexQ2,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RieszOp {
    Add,
    Scale(Rat),
    Abs,
    Join,
    Meet,
    Leq,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RieszValue {
    Vector(RVec),
    Bool(bool),
}

/// Non-fatal conditions raised while evaluating a Riesz-space operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RieszSignal {
    /// A negative scalar was used where positivity of the cone is asserted.
    NegativeScale,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RieszEval {
    pub value: RieszValue,
    pub signal: Option<RieszSignal>,
}

/// A concrete unital Riesz space `(R, 1_R)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RieszRep {
    kind: RieszKind,
}

impl RieszRep {
    pub fn qn(n: usize) -> Self {
        assert!(n >= 1, "Qn needs at least one coordinate");
        RieszRep { kind: RieszKind::Qn(n) }
    }

    pub fn lex_q2() -> Self {
        RieszRep { kind: RieszKind::LexQ2 }
    }

    pub fn kind(&self) -> RieszKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            RieszKind::Qn(n) => n,
            RieszKind::LexQ2 => 2,
        }
    }

    /// Size of the coordinate set `T` (ℚⁿ only).
    pub fn coordinate_count(&self) -> Option<usize> {
        match self.kind {
            RieszKind::Qn(n) => Some(n),
            RieszKind::LexQ2 => None,
        }
    }

    pub fn is_archimedean(&self) -> bool {
        matches!(self.kind, RieszKind::Qn(_))
    }

    pub fn is_dedekind_complete(&self) -> bool {
        matches!(self.kind, RieszKind::Qn(_))
    }

    pub fn unit(&self) -> RVec {
        match self.kind {
            RieszKind::Qn(n) => rational::ones(n),
            RieszKind::LexQ2 => vec![rational::one(), rational::zero()],
        }
    }

    pub fn zero(&self) -> RVec {
        rational::zeros(self.dim())
    }

    pub fn check(&self, r: &[Rat]) -> Result<()> {
        if r.len() == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: r.len(),
            })
        }
    }

    pub fn add(&self, r: &[Rat], t: &[Rat]) -> RVec {
        r.iter().zip(t).map(|(a, b)| a + b).collect()
    }

    pub fn sub(&self, r: &[Rat], t: &[Rat]) -> RVec {
        r.iter().zip(t).map(|(a, b)| a - b).collect()
    }

    pub fn neg(&self, r: &[Rat]) -> RVec {
        r.iter().map(|a| -a).collect()
    }

    pub fn scale(&self, alpha: &Rat, r: &[Rat]) -> RVec {
        r.iter().map(|a| alpha * a).collect()
    }

    pub fn leq(&self, r: &[Rat], t: &[Rat]) -> bool {
        match self.kind {
            RieszKind::Qn(_) => r.iter().zip(t).all(|(a, b)| a <= b),
            RieszKind::LexQ2 => lex_cmp(r, t) != Ordering::Greater,
        }
    }

    pub fn is_positive(&self, r: &[Rat]) -> bool {
        self.leq(&self.zero(), r)
    }

    pub fn join(&self, r: &[Rat], t: &[Rat]) -> RVec {
        match self.kind {
            RieszKind::Qn(_) => r.iter().zip(t).map(|(a, b)| a.max(b).clone()).collect(),
            RieszKind::LexQ2 => {
                if self.leq(r, t) {
                    t.to_vec()
                } else {
                    r.to_vec()
                }
            }
        }
    }

    pub fn meet(&self, r: &[Rat], t: &[Rat]) -> RVec {
        match self.kind {
            RieszKind::Qn(_) => r.iter().zip(t).map(|(a, b)| a.min(b).clone()).collect(),
            RieszKind::LexQ2 => {
                if self.leq(r, t) {
                    r.to_vec()
                } else {
                    t.to_vec()
                }
            }
        }
    }

    /// `|r| = r ∨ 0 + (−r) ∨ 0`.
    pub fn abs(&self, r: &[Rat]) -> RVec {
        let zero = self.zero();
        self.add(&self.join(r, &zero), &self.join(&self.neg(r), &zero))
    }

    /// Truncated sum in `Γ(R, 1_R)`: `(r + t) ∧ 1_R`.
    pub fn oplus(&self, r: &[Rat], t: &[Rat]) -> RVec {
        self.meet(&self.add(r, t), &self.unit())
    }

    /// `‖r‖ = inf{α ≥ 0 : |r| ≤ α·1_R}`.
    ///
    /// On ℚⁿ this is the sup-norm over the coordinate set. On lexicographic
    /// ℚ² it is the absolute value of the first coordinate of `r`; the
    /// infimum is attained only when the second coordinate of `|r|` is ≤ 0.
    pub fn norm_unit(&self, r: &[Rat]) -> Rat {
        match self.kind {
            RieszKind::Qn(_) => r.iter().map(|a| a.abs()).max().unwrap_or_else(rational::zero),
            RieszKind::LexQ2 => r[0].abs(),
        }
    }

    /// Whether `|r| ≤ ‖r‖·1_R`.
    pub fn norm_attained(&self, r: &[Rat]) -> bool {
        let bound = self.scale(&self.norm_unit(r), &self.unit());
        self.leq(&self.abs(r), &bound)
    }

    pub fn eval(&self, op: &RieszOp, r: &[Rat], arg: Option<&[Rat]>) -> Result<RieszEval> {
        self.check(r)?;
        if let Some(t) = arg {
            self.check(t)?;
        }
        let need = |name| arg.ok_or(Error::MissingOperand(name));
        let mut signal = None;
        let value = match op {
            RieszOp::Add => RieszValue::Vector(self.add(r, need("add")?)),
            RieszOp::Scale(alpha) => {
                if alpha.is_negative() {
                    signal = Some(RieszSignal::NegativeScale);
                }
                RieszValue::Vector(self.scale(alpha, r))
            }
            RieszOp::Abs => RieszValue::Vector(self.abs(r)),
            RieszOp::Join => RieszValue::Vector(self.join(r, need("join")?)),
            RieszOp::Meet => RieszValue::Vector(self.meet(r, need("meet")?)),
            RieszOp::Leq => RieszValue::Bool(self.leq(r, need("leq")?)),
        };
        Ok(RieszEval { value, signal })
    }
}

fn lex_cmp(r: &[Rat], t: &[Rat]) -> Ordering {
    for (a, b) in r.iter().zip(t) {
        match a.cmp(b) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

pub fn is_zero_vec(r: &[Rat]) -> bool {
    r.iter().all(|a| a.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> GroupElement {
        GroupElement::new(xs)
    }

    fn q(xs: &[(i64, i64)]) -> RVec {
        xs.iter().map(|&(p, d)| rat(p, d)).collect()
    }

    #[test]
    fn group_examples() {
        let zn = UnitalGroup::zn(&[1, 1]).unwrap();
        assert_eq!(
            zn.eval(GroupOp::Join, &v(&[1, 0]), Some(&v(&[0, 1]))).unwrap(),
            GroupValue::Element(v(&[1, 1]))
        );
        assert_eq!(
            zn.eval(GroupOp::Add, &v(&[1, 2]), Some(&v(&[3, -1]))).unwrap(),
            GroupValue::Element(v(&[4, 1]))
        );
        let lex = UnitalGroup::z2lex([1, 0]).unwrap();
        assert_eq!(
            lex.eval(GroupOp::Leq, &v(&[0, 5]), Some(&v(&[1, -100]))).unwrap(),
            GroupValue::Bool(true)
        );
    }

    #[test]
    fn group_errors() {
        let zn = UnitalGroup::zn(&[1, 1]).unwrap();
        assert_eq!(
            zn.eval(GroupOp::Add, &v(&[1]), Some(&v(&[1, 1]))),
            Err(Error::DimensionMismatch { expected: 2, actual: 1 })
        );
        assert_eq!(zn.eval(GroupOp::Meet, &v(&[1, 1]), None), Err(Error::MissingOperand("meet")));
        assert!(UnitalGroup::zn(&[1, 0]).is_err());
        assert!(UnitalGroup::z2lex([0, 7]).is_err());
        assert!(UnitalGroup::z2lex([1, -7]).is_ok());
    }

    #[test]
    fn riesz_examples() {
        let q3 = RieszRep::qn(3);
        let r = q3.eval(&RieszOp::Abs, &q(&[(-1, 1), (2, 1), (0, 1)]), None).unwrap();
        assert_eq!(r.value, RieszValue::Vector(q(&[(1, 1), (2, 1), (0, 1)])));

        let lex = RieszRep::lex_q2();
        let r = lex.eval(&RieszOp::Join, &q(&[(0, 1), (7, 1)]), Some(&q(&[(0, 1), (3, 1)]))).unwrap();
        assert_eq!(r.value, RieszValue::Vector(q(&[(0, 1), (7, 1)])));

        let q2 = RieszRep::qn(2);
        let r = q2.eval(&RieszOp::Scale(rat(1, 2)), &q(&[(1, 1), (3, 1)]), None).unwrap();
        assert_eq!(r.value, RieszValue::Vector(q(&[(1, 2), (3, 2)])));
        assert_eq!(r.signal, None);

        let r = q2.eval(&RieszOp::Scale(int(-1)), &q(&[(1, 1), (3, 1)]), None).unwrap();
        assert_eq!(r.signal, Some(RieszSignal::NegativeScale));
        assert_eq!(r.value, RieszValue::Vector(q(&[(-1, 1), (-3, 1)])));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(RieszRep::qn(2).norm_unit(&q(&[(1, 2), (-1, 1)])), int(1));
        assert_eq!(RieszRep::qn(3).norm_unit(&q(&[(0, 1), (0, 1), (0, 1)])), int(0));
        assert_eq!(RieszRep::lex_q2().norm_unit(&q(&[(2, 1), (-9, 1)])), int(2));
    }

    /// Independent evaluation of `inf{α : |r| ≤ (α,0)}` on lexicographic ℚ²
    /// by case analysis on the order: `|r|` is `r` or `−r`, whichever is
    /// lexicographically nonnegative; `(a,b) ≤ (α,0)` iff `a < α`, or `a = α`
    /// and `b ≤ 0`.
    fn lex_norm_oracle(r: &[Rat]) -> (Rat, bool) {
        let neg: RVec = r.iter().map(|a| -a).collect();
        let abs = if lex_cmp(r, &neg) == Ordering::Less { neg } else { r.to_vec() };
        (abs[0].clone(), !abs[1].is_positive())
    }

    #[test]
    fn lex_norm_matches_case_analysis() {
        let lex = RieszRep::lex_q2();
        for r in [q(&[(2, 1), (-9, 1)]), q(&[(2, 1), (5, 1)]), q(&[(0, 1), (3, 1)]), q(&[(-3, 2), (1, 1)])] {
            let (inf, attained) = lex_norm_oracle(&r);
            assert_eq!(lex.norm_unit(&r), inf);
            assert_eq!(lex.norm_attained(&r), attained);
        }
        // (2,5): the bound (2,0) fails while (2+ε,0) holds.
        let r = q(&[(2, 1), (5, 1)]);
        assert!(!lex.leq(&lex.abs(&r), &q(&[(2, 1), (0, 1)])));
        assert!(lex.leq(&lex.abs(&r), &q(&[(2001, 1000), (0, 1)])));
    }

    fn arb_vec(n: usize) -> impl Strategy<Value = RVec> {
        proptest::collection::vec((-20i64..20, 1i64..6), n).prop_map(|xs| xs.into_iter().map(|(p, d)| rat(p, d)).collect())
    }

    proptest! {
        #[test]
        fn lattice_identity_zn(x in proptest::collection::vec(-50i64..50, 3), y in proptest::collection::vec(-50i64..50, 3)) {
            let g = UnitalGroup::zn(&[1, 1, 1]).unwrap();
            let (x, y) = (GroupElement(x), GroupElement(y));
            prop_assert_eq!(g.add(&g.join(&x, &y), &g.meet(&x, &y)), g.add(&x, &y));
        }

        #[test]
        fn lattice_identity_lex(x in proptest::collection::vec(-50i64..50, 2), y in proptest::collection::vec(-50i64..50, 2)) {
            let g = UnitalGroup::z2lex([1, 0]).unwrap();
            let (x, y) = (GroupElement(x), GroupElement(y));
            prop_assert_eq!(g.add(&g.join(&x, &y), &g.meet(&x, &y)), g.add(&x, &y));
        }

        #[test]
        fn norm_axioms_qn(r in arb_vec(3), t in arb_vec(3), (p, d) in (-9i64..9, 1i64..5)) {
            let q3 = RieszRep::qn(3);
            let alpha = rat(p, d);
            prop_assert_eq!(q3.norm_unit(&r).is_zero(), is_zero_vec(&r));
            prop_assert_eq!(q3.norm_unit(&q3.scale(&alpha, &r)), alpha.abs() * q3.norm_unit(&r));
            prop_assert!(q3.norm_unit(&q3.add(&r, &t)) <= q3.norm_unit(&r) + q3.norm_unit(&t));
            let sup = r.iter().map(|a| a.abs()).fold(rational::zero(), |m, a| if a > m { a } else { m });
            prop_assert_eq!(q3.norm_unit(&r), sup);
            prop_assert!(q3.norm_attained(&r));
        }
    }

    #[test]
    fn exhaustive_lattice_identity_small_grid() {
        let zn = UnitalGroup::zn(&[1, 1]).unwrap();
        let lex = UnitalGroup::z2lex([1, 0]).unwrap();
        let grid: Vec<GroupElement> = (-3..=3).flat_map(|a| (-3..=3).map(move |b| v(&[a, b]))).collect();
        for g in [&zn, &lex] {
            for x in &grid {
                for y in &grid {
                    assert_eq!(g.add(&g.join(x, y), &g.meet(x, y)), g.add(x, y));
                }
            }
        }
    }
}
