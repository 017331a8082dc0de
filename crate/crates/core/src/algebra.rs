//! Pseudo MV-algebras.
//!
//! An algebra is either an explicit Cayley table, the unit interval `Γ(G,u)`
//! of a unital ℓ-group, a finite product, or the chain `Γ(ℤ,k)`. Any finite
//! algebra can be tabulated into a [`FiniteAlgebra`], which precomputes the
//! derived operations and the partial addition and is what the ideal, state
//! and measure modules work on.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ordered::{GroupElement, GroupKind, UnitalGroup};

/// A carrier member. Table elements compare by index, interval elements by
/// group coordinates and product elements by component tuples.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Index(usize),
    Group(GroupElement),
    Tuple(Vec<Element>),
}

impl Element {
    /// An element of a chain `Γ(ℤ,k)`.
    pub fn int(j: i64) -> Self {
        Element::Group(GroupElement(vec![j]))
    }

    pub fn group(coords: &[i64]) -> Self {
        Element::Group(GroupElement::new(coords))
    }

    pub fn tuple(parts: impl Into<Vec<Element>>) -> Self {
        Element::Tuple(parts.into())
    }

    /// Tuple of chain elements, e.g. `ints(&[1, 0])` for `(1,0)` in `Ł₁²`.
    pub fn ints(coords: &[i64]) -> Self {
        Element::Tuple(coords.iter().map(|&c| Element::int(c)).collect())
    }

    /// Flattened integer coordinates of an element of a product of chains or
    /// of `Γ(ℤⁿ,u)`.
    pub fn chain_coords(&self) -> Option<Vec<i64>> {
        match self {
            Element::Index(_) => None,
            Element::Group(g) => Some(g.0.clone()),
            Element::Tuple(parts) => {
                let mut out = Vec::new();
                for p in parts {
                    out.extend(p.chain_coords()?);
                }
                Some(out)
            }
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Index(i) => write!(f, "#{i}"),
            Element::Group(g) => write!(f, "{g}"),
            Element::Tuple(parts) => {
                write!(f, "(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Raw operation tables of a finite algebra `(M; ⊕, ⁻, ~, 0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyTable {
    labels: Vec<String>,
    oplus: Vec<Vec<usize>>,
    neg_minus: Vec<usize>,
    neg_tilde: Vec<usize>,
    zero: usize,
    one: usize,
}

impl CayleyTable {
    pub fn new(
        labels: Vec<String>,
        oplus: Vec<Vec<usize>>,
        neg_minus: Vec<usize>,
        neg_tilde: Vec<usize>,
        zero: usize,
        one: usize,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty carrier".into()));
        }
        if oplus.len() != n || oplus.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidTable("oplus is not a square table over the carrier".into()));
        }
        if neg_minus.len() != n || neg_tilde.len() != n {
            return Err(Error::InvalidTable("negation tables must cover the carrier".into()));
        }
        let in_range = |v: &usize| *v < n;
        if !oplus.iter().flatten().all(in_range) || !neg_minus.iter().all(in_range) || !neg_tilde.iter().all(in_range) {
            return Err(Error::InvalidTable("table entry outside the carrier".into()));
        }
        if zero >= n || one >= n {
            return Err(Error::InvalidTable("constant outside the carrier".into()));
        }
        if zero == one {
            return Err(Error::InvalidTable("0 and 1 coincide".into()));
        }
        Ok(CayleyTable {
            labels,
            oplus,
            neg_minus,
            neg_tilde,
            zero,
            one,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn oplus_table(&self) -> &[Vec<usize>] {
        &self.oplus
    }

    pub fn neg_minus_table(&self) -> &[usize] {
        &self.neg_minus
    }

    pub fn neg_tilde_table(&self) -> &[usize] {
        &self.neg_tilde
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    /// Overwrites one `⊕` entry; used to build mutants for the axiom checker.
    pub fn set_oplus(&mut self, x: usize, y: usize, value: usize) {
        assert!(value < self.len());
        self.oplus[x][y] = value;
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.labels.len());
        self.labels = labels;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PmvOp {
    Oplus,
    Odot,
    NegMinus,
    NegTilde,
    Leq,
    Join,
    Meet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PmvValue {
    Element(Element),
    Bool(bool),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `−x + y`, the unique `z` with `x + z = y`.
    Left,
    /// `y − x`, the unique `z` with `z + x = y`.
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IterateMode {
    /// Partial-sum multiple `nx`; undefined once a partial sum is.
    NatMul,
    /// `xⁿ` under `⊙`.
    OdotPow,
    /// `n⊙x` with `(n+1)⊙x = (n⊙x) ⊕ x`.
    OplusMul,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PmvAlgebra {
    Table(Arc<CayleyTable>),
    Gamma(UnitalGroup),
    Product(Vec<PmvAlgebra>),
    /// `Γ(ℤ,k)` with carrier `0..=k`.
    Chain(i64),
}

impl PmvAlgebra {
    pub fn chain(k: i64) -> Self {
        assert!(k >= 1, "Chain(k) needs k ≥ 1");
        PmvAlgebra::Chain(k)
    }

    pub fn gamma(group: UnitalGroup) -> Self {
        PmvAlgebra::Gamma(group)
    }

    pub fn table(table: CayleyTable) -> Self {
        PmvAlgebra::Table(Arc::new(table))
    }

    pub fn product(factors: Vec<PmvAlgebra>) -> Self {
        assert!(!factors.is_empty(), "empty product");
        PmvAlgebra::Product(factors)
    }

    /// `Ł_k × ⋯ × Ł_k` with `n` factors.
    pub fn chain_power(k: i64, n: usize) -> Self {
        PmvAlgebra::product(vec![PmvAlgebra::chain(k); n])
    }

    pub fn name(&self) -> String {
        match self {
            PmvAlgebra::Table(t) => format!("Table({})", t.len()),
            PmvAlgebra::Gamma(g) => match g.kind() {
                GroupKind::Zn(n) => format!("Gamma(Z^{n},{})", g.unit()),
                GroupKind::Z2Lex => format!("Gamma(ZlexZ,{})", g.unit()),
            },
            PmvAlgebra::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(|f| f.name()).collect();
                format!("Product({})", parts.join(","))
            }
            PmvAlgebra::Chain(k) => format!("Chain({k})"),
        }
    }

    pub fn zero(&self) -> Element {
        match self {
            PmvAlgebra::Table(t) => Element::Index(t.zero),
            PmvAlgebra::Gamma(g) => Element::Group(g.zero()),
            PmvAlgebra::Product(fs) => Element::Tuple(fs.iter().map(|f| f.zero()).collect()),
            PmvAlgebra::Chain(_) => Element::int(0),
        }
    }

    pub fn one(&self) -> Element {
        match self {
            PmvAlgebra::Table(t) => Element::Index(t.one),
            PmvAlgebra::Gamma(g) => Element::Group(g.unit().clone()),
            PmvAlgebra::Product(fs) => Element::Tuple(fs.iter().map(|f| f.one()).collect()),
            PmvAlgebra::Chain(k) => Element::int(*k),
        }
    }

    pub fn contains(&self, x: &Element) -> bool {
        match (self, x) {
            (PmvAlgebra::Table(t), Element::Index(i)) => *i < t.len(),
            (PmvAlgebra::Gamma(g), Element::Group(e)) => {
                e.dim() == g.dim() && g.leq(&g.zero(), e) && g.leq(e, g.unit())
            }
            (PmvAlgebra::Chain(k), Element::Group(e)) => e.dim() == 1 && (0..=*k).contains(&e.0[0]),
            (PmvAlgebra::Product(fs), Element::Tuple(parts)) => {
                fs.len() == parts.len() && fs.iter().zip(parts).all(|(f, p)| f.contains(p))
            }
            _ => false,
        }
    }

    pub fn check(&self, x: &Element) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::NotInCarrier(x.to_string()))
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            PmvAlgebra::Gamma(g) => matches!(g.kind(), GroupKind::Zn(_)),
            PmvAlgebra::Product(fs) => fs.iter().all(|f| f.is_finite()),
            _ => true,
        }
    }

    /// Carrier size, saturating at `usize::MAX`; `None` when infinite.
    pub fn carrier_size(&self) -> Option<usize> {
        match self {
            PmvAlgebra::Table(t) => Some(t.len()),
            PmvAlgebra::Chain(k) => Some(*k as usize + 1),
            PmvAlgebra::Gamma(g) => match g.kind() {
                GroupKind::Zn(_) => Some(
                    g.unit()
                        .0
                        .iter()
                        .fold(1usize, |acc, &c| acc.saturating_mul(c as usize + 1)),
                ),
                GroupKind::Z2Lex => None,
            },
            PmvAlgebra::Product(fs) => fs
                .iter()
                .try_fold(1usize, |acc, f| f.carrier_size().map(|s| acc.saturating_mul(s))),
        }
    }

    /// Canonically ordered carrier of a finite algebra.
    pub fn carrier(&self) -> Result<Vec<Element>> {
        match self {
            PmvAlgebra::Table(t) => Ok((0..t.len()).map(Element::Index).collect()),
            PmvAlgebra::Chain(k) => Ok((0..=*k).map(Element::int).collect()),
            PmvAlgebra::Gamma(g) => match g.kind() {
                GroupKind::Zn(_) => {
                    let ranges: Vec<Vec<Element>> = g
                        .unit()
                        .0
                        .iter()
                        .map(|&c| (0..=c).map(Element::int).collect())
                        .collect();
                    Ok(cartesian(&ranges)
                        .into_iter()
                        .map(|parts| {
                            Element::Group(GroupElement(
                                parts.iter().map(|p| p.chain_coords().unwrap()[0]).collect(),
                            ))
                        })
                        .collect())
                }
                GroupKind::Z2Lex => Err(Error::InfiniteCarrier(self.name())),
            },
            PmvAlgebra::Product(fs) => {
                let carriers = fs.iter().map(|f| f.carrier()).collect::<Result<Vec<_>>>()?;
                Ok(cartesian(&carriers).into_iter().map(Element::Tuple).collect())
            }
        }
    }

    /// The first `count` elements of a canonical enumeration of the carrier.
    ///
    /// Finite carriers are enumerated in canonical order. For `Γ(ℤ lex ℤ,u)`
    /// the enumeration walks outwards in the second coordinate, row by row,
    /// so that `Γ(ℤ lex ℤ,(1,0))` yields `(0,0),(1,0),(0,1),(1,−1),…`.
    pub fn sample(&self, count: usize) -> Vec<Element> {
        if let Ok(carrier) = self.carrier() {
            return carrier.into_iter().take(count).collect();
        }
        match self {
            PmvAlgebra::Gamma(g) => {
                let (a, b) = (g.unit().0[0], g.unit().0[1]);
                let mut out = Vec::with_capacity(count);
                let mut r = 0i64;
                while out.len() < count {
                    for row in 0..=a {
                        let mut push = |c: i64| {
                            if out.len() < count {
                                out.push(Element::group(&[row, c]));
                            }
                        };
                        if row == 0 {
                            push(r);
                        } else if row == a {
                            push(b - r);
                        } else if r == 0 {
                            push(0);
                        } else {
                            push(-r);
                            push(r);
                        }
                    }
                    r += 1;
                }
                out
            }
            PmvAlgebra::Product(fs) => {
                let per = fs.iter().map(|f| f.sample(count)).collect::<Vec<_>>();
                cartesian(&per).into_iter().take(count).map(Element::Tuple).collect()
            }
            _ => unreachable!("finite backends are handled above"),
        }
    }

    /// Tabulates a finite algebra.
    pub fn finite(&self, max_carrier: usize) -> Result<FiniteAlgebra> {
        FiniteAlgebra::new(self, max_carrier)
    }

    /// Product-of-chains shape `Ł_{k₁} × ⋯ × Ł_{kₙ}` (or `Γ(ℤⁿ,u)`).
    pub fn chain_factors(&self) -> Option<Vec<i64>> {
        match self {
            PmvAlgebra::Chain(k) => Some(vec![*k]),
            PmvAlgebra::Gamma(g) => match g.kind() {
                GroupKind::Zn(_) => Some(g.unit().0.clone()),
                GroupKind::Z2Lex => None,
            },
            PmvAlgebra::Product(fs) => {
                let mut out = Vec::new();
                for f in fs {
                    out.extend(f.chain_factors()?);
                }
                Some(out)
            }
            PmvAlgebra::Table(_) => None,
        }
    }

    fn parts<'a>(&self, x: &'a Element) -> &'a [Element] {
        match x {
            Element::Tuple(p) => p,
            _ => unreachable!("carrier membership checked"),
        }
    }

    fn index(x: &Element) -> usize {
        match x {
            Element::Index(i) => *i,
            _ => unreachable!("carrier membership checked"),
        }
    }

    fn coord(x: &Element) -> i64 {
        match x {
            Element::Group(g) => g.0[0],
            _ => unreachable!("carrier membership checked"),
        }
    }

    fn group_elem(x: &Element) -> &GroupElement {
        match x {
            Element::Group(g) => g,
            _ => unreachable!("carrier membership checked"),
        }
    }

    // Unchecked primitives; callers guarantee membership.

    fn raw_oplus(&self, x: &Element, y: &Element) -> Element {
        match self {
            PmvAlgebra::Table(t) => Element::Index(t.oplus[Self::index(x)][Self::index(y)]),
            PmvAlgebra::Gamma(g) => {
                Element::Group(g.meet(&g.add(Self::group_elem(x), Self::group_elem(y)), g.unit()))
            }
            PmvAlgebra::Chain(k) => Element::int((Self::coord(x) + Self::coord(y)).min(*k)),
            PmvAlgebra::Product(fs) => Element::Tuple(
                fs.iter()
                    .zip(self.parts(x).iter().zip(self.parts(y)))
                    .map(|(f, (a, b))| f.raw_oplus(a, b))
                    .collect(),
            ),
        }
    }

    fn raw_neg_minus(&self, x: &Element) -> Element {
        match self {
            PmvAlgebra::Table(t) => Element::Index(t.neg_minus[Self::index(x)]),
            PmvAlgebra::Gamma(g) => Element::Group(g.sub(g.unit(), Self::group_elem(x))),
            PmvAlgebra::Chain(k) => Element::int(k - Self::coord(x)),
            PmvAlgebra::Product(fs) => {
                Element::Tuple(fs.iter().zip(self.parts(x)).map(|(f, a)| f.raw_neg_minus(a)).collect())
            }
        }
    }

    fn raw_neg_tilde(&self, x: &Element) -> Element {
        match self {
            PmvAlgebra::Table(t) => Element::Index(t.neg_tilde[Self::index(x)]),
            PmvAlgebra::Gamma(g) => Element::Group(g.add(&g.neg(Self::group_elem(x)), g.unit())),
            PmvAlgebra::Chain(k) => Element::int(k - Self::coord(x)),
            PmvAlgebra::Product(fs) => {
                Element::Tuple(fs.iter().zip(self.parts(x)).map(|(f, a)| f.raw_neg_tilde(a)).collect())
            }
        }
    }

    fn raw_odot(&self, x: &Element, y: &Element) -> Element {
        match self {
            // x ⊙ y = (y⁻ ⊕ x⁻)~
            PmvAlgebra::Table(_) => {
                self.raw_neg_tilde(&self.raw_oplus(&self.raw_neg_minus(y), &self.raw_neg_minus(x)))
            }
            PmvAlgebra::Gamma(g) => {
                let s = g.add(&g.sub(Self::group_elem(x), g.unit()), Self::group_elem(y));
                Element::Group(g.join(&s, &g.zero()))
            }
            PmvAlgebra::Chain(k) => Element::int((Self::coord(x) - k + Self::coord(y)).max(0)),
            PmvAlgebra::Product(fs) => Element::Tuple(
                fs.iter()
                    .zip(self.parts(x).iter().zip(self.parts(y)))
                    .map(|(f, (a, b))| f.raw_odot(a, b))
                    .collect(),
            ),
        }
    }

    fn raw_leq(&self, x: &Element, y: &Element) -> bool {
        match self {
            // x ≤ y iff x⁻ ⊕ y = 1
            PmvAlgebra::Table(t) => self.raw_oplus(&self.raw_neg_minus(x), y) == Element::Index(t.one),
            PmvAlgebra::Gamma(g) => g.leq(Self::group_elem(x), Self::group_elem(y)),
            PmvAlgebra::Chain(_) => Self::coord(x) <= Self::coord(y),
            PmvAlgebra::Product(fs) => fs
                .iter()
                .zip(self.parts(x).iter().zip(self.parts(y)))
                .all(|(f, (a, b))| f.raw_leq(a, b)),
        }
    }

    fn raw_join(&self, x: &Element, y: &Element) -> Element {
        match self {
            // x ∨ y = x ⊕ (x~ ⊙ y)
            PmvAlgebra::Table(_) => self.raw_oplus(x, &self.raw_odot(&self.raw_neg_tilde(x), y)),
            PmvAlgebra::Gamma(g) => Element::Group(g.join(Self::group_elem(x), Self::group_elem(y))),
            PmvAlgebra::Chain(_) => Element::int(Self::coord(x).max(Self::coord(y))),
            PmvAlgebra::Product(fs) => Element::Tuple(
                fs.iter()
                    .zip(self.parts(x).iter().zip(self.parts(y)))
                    .map(|(f, (a, b))| f.raw_join(a, b))
                    .collect(),
            ),
        }
    }

    fn raw_meet(&self, x: &Element, y: &Element) -> Element {
        match self {
            // x ∧ y = x ⊙ (x⁻ ⊕ y)
            PmvAlgebra::Table(_) => self.raw_odot(x, &self.raw_oplus(&self.raw_neg_minus(x), y)),
            PmvAlgebra::Gamma(g) => Element::Group(g.meet(Self::group_elem(x), Self::group_elem(y))),
            PmvAlgebra::Chain(_) => Element::int(Self::coord(x).min(Self::coord(y))),
            PmvAlgebra::Product(fs) => Element::Tuple(
                fs.iter()
                    .zip(self.parts(x).iter().zip(self.parts(y)))
                    .map(|(f, (a, b))| f.raw_meet(a, b))
                    .collect(),
            ),
        }
    }

    pub fn oplus(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.raw_oplus(x, y))
    }

    pub fn odot(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.raw_odot(x, y))
    }

    pub fn neg_minus(&self, x: &Element) -> Result<Element> {
        self.check(x)?;
        Ok(self.raw_neg_minus(x))
    }

    pub fn neg_tilde(&self, x: &Element) -> Result<Element> {
        self.check(x)?;
        Ok(self.raw_neg_tilde(x))
    }

    pub fn leq(&self, x: &Element, y: &Element) -> Result<bool> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.raw_leq(x, y))
    }

    pub fn join(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.raw_join(x, y))
    }

    pub fn meet(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.raw_meet(x, y))
    }

    pub fn eval(&self, op: PmvOp, x: &Element, y: Option<&Element>) -> Result<PmvValue> {
        let need = |name| y.ok_or(Error::MissingOperand(name));
        Ok(match op {
            PmvOp::Oplus => PmvValue::Element(self.oplus(x, need("oplus")?)?),
            PmvOp::Odot => PmvValue::Element(self.odot(x, need("odot")?)?),
            PmvOp::NegMinus => PmvValue::Element(self.neg_minus(x)?),
            PmvOp::NegTilde => PmvValue::Element(self.neg_tilde(x)?),
            PmvOp::Leq => PmvValue::Bool(self.leq(x, need("leq")?)?),
            PmvOp::Join => PmvValue::Element(self.join(x, need("join")?)?),
            PmvOp::Meet => PmvValue::Element(self.meet(x, need("meet")?)?),
        })
    }

    /// `x + y`, defined iff `x ⊙ y = 0`.
    pub fn partial_add(&self, x: &Element, y: &Element) -> Result<Option<Element>> {
        if self.odot(x, y)? == self.zero() {
            Ok(Some(self.raw_oplus(x, y)))
        } else {
            Ok(None)
        }
    }

    /// The unique difference of `x ≤ y` on the requested side, verified by
    /// re-adding.
    pub fn subtract(&self, x: &Element, y: &Element, side: Side) -> Result<Element> {
        if !self.leq(x, y)? {
            return Err(Error::Precondition(format!("{x} ≰ {y}")));
        }
        let (z, back) = match side {
            Side::Right => {
                let z = self.raw_odot(y, &self.raw_neg_minus(x));
                let back = self.partial_add(&z, x)?;
                (z, back)
            }
            Side::Left => {
                let z = self.raw_odot(&self.raw_neg_tilde(x), y);
                let back = self.partial_add(x, &z)?;
                (z, back)
            }
        };
        if back.as_ref() != Some(y) {
            return Err(Error::Verification(format!("difference of {x} ≤ {y} does not re-add")));
        }
        Ok(z)
    }

    pub fn iterate(&self, x: &Element, n: usize, mode: IterateMode) -> Result<Option<Element>> {
        self.check(x)?;
        let mut acc = match mode {
            IterateMode::OdotPow => self.one(),
            IterateMode::NatMul | IterateMode::OplusMul => self.zero(),
        };
        for _ in 0..n {
            acc = match mode {
                IterateMode::NatMul => match self.partial_add(&acc, x)? {
                    Some(next) => next,
                    None => return Ok(None),
                },
                IterateMode::OdotPow => self.raw_odot(&acc, x),
                IterateMode::OplusMul => self.raw_oplus(&acc, x),
            };
        }
        Ok(Some(acc))
    }

    /// Common refinement of `a₁ + a₂ = b₁ + b₂`.
    ///
    /// Interval-based backends use `c₁₁ = a₁ ∧ b₁`, `c₁₂ = −c₁₁ + a₁`,
    /// `c₂₁ = −c₁₁ + b₁`, `c₂₂ = −c₂₁ + a₂`; table backends search.
    pub fn rdp2_decompose(&self, a1: &Element, a2: &Element, b1: &Element, b2: &Element) -> Result<Rdp2Witness> {
        let lhs = self.partial_add(a1, a2)?;
        let rhs = self.partial_add(b1, b2)?;
        match (&lhs, &rhs) {
            (Some(l), Some(r)) if l == r => {}
            _ => return Err(Error::Precondition("a₁+a₂ and b₁+b₂ must be defined and equal".into())),
        }
        let witness = match self {
            PmvAlgebra::Table(t) => {
                let fa = FiniteAlgebra::from_table(self.clone(), (**t).clone());
                let [i1, i2, j1, j2] = [a1, a2, b1, b2].map(Self::index);
                let [c11, c12, c21, c22] = fa.rdp2_search(i1, i2, j1, j2).ok_or(Error::NoRdp2Witness)?;
                Rdp2Witness {
                    c11: Element::Index(c11),
                    c12: Element::Index(c12),
                    c21: Element::Index(c21),
                    c22: Element::Index(c22),
                }
            }
            _ => {
                let c11 = self.raw_meet(a1, b1);
                let c12 = self.subtract(&c11, a1, Side::Left)?;
                let c21 = self.subtract(&c11, b1, Side::Left)?;
                let c22 = self.subtract(&c21, a2, Side::Left)?;
                Rdp2Witness { c11, c12, c21, c22 }
            }
        };
        if !witness.verify(self, a1, a2, b1, b2)? {
            return Err(Error::Verification("RDP2 witness fails its identities".into()));
        }
        Ok(witness)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rdp2Witness {
    pub c11: Element,
    pub c12: Element,
    pub c21: Element,
    pub c22: Element,
}

impl Rdp2Witness {
    /// `a₁=c₁₁+c₁₂`, `a₂=c₂₁+c₂₂`, `b₁=c₁₁+c₂₁`, `b₂=c₁₂+c₂₂`, `c₁₂∧c₂₁=0`.
    pub fn verify(&self, alg: &PmvAlgebra, a1: &Element, a2: &Element, b1: &Element, b2: &Element) -> Result<bool> {
        let sum = |x: &Element, y: &Element| alg.partial_add(x, y);
        Ok(sum(&self.c11, &self.c12)?.as_ref() == Some(a1)
            && sum(&self.c21, &self.c22)?.as_ref() == Some(a2)
            && sum(&self.c11, &self.c21)?.as_ref() == Some(b1)
            && sum(&self.c12, &self.c22)?.as_ref() == Some(b2)
            && alg.meet(&self.c12, &self.c21)? == alg.zero())
    }
}

fn cartesian(sets: &[Vec<Element>]) -> Vec<Vec<Element>> {
    let mut out: Vec<Vec<Element>> = vec![Vec::new()];
    for set in sets {
        let mut next = Vec::with_capacity(out.len() * set.len());
        for prefix in &out {
            for e in set {
                let mut p = prefix.clone();
                p.push(e.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// A tabulated finite algebra with its derived operations precomputed from
/// `⊕`, `⁻`, `~` through the defining identities.
#[derive(Clone, Debug)]
pub struct FiniteAlgebra {
    source: PmvAlgebra,
    elements: Vec<Element>,
    table: CayleyTable,
    odot: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
    meet: Vec<Vec<usize>>,
    leq: Vec<Vec<bool>>,
    sum: Vec<Vec<Option<usize>>>,
}

impl FiniteAlgebra {
    pub fn new(alg: &PmvAlgebra, max_carrier: usize) -> Result<Self> {
        let size = alg.carrier_size().ok_or_else(|| Error::InfiniteCarrier(alg.name()))?;
        if size > max_carrier {
            return Err(Error::CapExceeded {
                what: "carrier size",
                limit: max_carrier,
                actual: size,
            });
        }
        if let PmvAlgebra::Table(t) = alg {
            return Ok(Self::from_table(alg.clone(), (**t).clone()));
        }
        let elements = alg.carrier()?;
        let index = |e: &Element| elements.binary_search(e).expect("operations stay in the carrier");
        let oplus = elements
            .iter()
            .map(|x| elements.iter().map(|y| index(&alg.raw_oplus(x, y))).collect())
            .collect();
        let neg_minus = elements.iter().map(|x| index(&alg.raw_neg_minus(x))).collect();
        let neg_tilde = elements.iter().map(|x| index(&alg.raw_neg_tilde(x))).collect();
        let labels = elements.iter().map(|e| e.to_string()).collect();
        let table = CayleyTable::new(labels, oplus, neg_minus, neg_tilde, index(&alg.zero()), index(&alg.one()))?;
        let mut fa = Self::from_table(alg.clone(), table);
        fa.elements = elements;
        Ok(fa)
    }

    /// Wraps raw tables; the tables need not satisfy the axioms.
    pub fn from_cayley(table: CayleyTable) -> Self {
        let source = PmvAlgebra::table(table.clone());
        Self::from_table(source, table)
    }

    fn from_table(source: PmvAlgebra, table: CayleyTable) -> Self {
        let n = table.len();
        let t = &table;
        let odot: Vec<Vec<usize>> = (0..n)
            .map(|x| (0..n).map(|y| t.neg_tilde[t.oplus[t.neg_minus[y]][t.neg_minus[x]]]).collect())
            .collect();
        let join = (0..n)
            .map(|x| (0..n).map(|y| t.oplus[x][odot[t.neg_tilde[x]][y]]).collect())
            .collect();
        let meet = (0..n)
            .map(|x| (0..n).map(|y| odot[x][t.oplus[t.neg_minus[x]][y]]).collect())
            .collect();
        let leq = (0..n)
            .map(|x| (0..n).map(|y| t.oplus[t.neg_minus[x]][y] == t.one).collect())
            .collect();
        let sum = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| (odot[x][y] == t.zero).then_some(t.oplus[x][y]))
                    .collect()
            })
            .collect();
        FiniteAlgebra {
            source,
            elements: (0..n).map(Element::Index).collect(),
            table,
            odot,
            join,
            meet,
            leq,
            sum,
        }
    }

    pub fn source(&self) -> &PmvAlgebra {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Element {
        &self.elements[i]
    }

    pub fn label(&self, i: usize) -> &str {
        &self.table.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.table.labels
    }

    pub fn table(&self) -> &CayleyTable {
        &self.table
    }

    pub fn index_of(&self, x: &Element) -> Option<usize> {
        self.elements.binary_search(x).ok()
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.table.labels.iter().position(|l| l == label)
    }

    pub fn zero(&self) -> usize {
        self.table.zero
    }

    pub fn one(&self) -> usize {
        self.table.one
    }

    pub fn oplus(&self, x: usize, y: usize) -> usize {
        self.table.oplus[x][y]
    }

    pub fn odot(&self, x: usize, y: usize) -> usize {
        self.odot[x][y]
    }

    pub fn neg_minus(&self, x: usize) -> usize {
        self.table.neg_minus[x]
    }

    pub fn neg_tilde(&self, x: usize) -> usize {
        self.table.neg_tilde[x]
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x][y]
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x][y]
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    /// Partial addition: `Some(x ⊕ y)` when `x ⊙ y = 0`.
    pub fn sum(&self, x: usize, y: usize) -> Option<usize> {
        self.sum[x][y]
    }

    /// All defined partial sums `(x, y, x + y)` in index order.
    pub fn defined_sums(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.len()).flat_map(move |x| (0..self.len()).filter_map(move |y| self.sum[x][y].map(|z| (x, y, z))))
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.len()).all(|x| (0..self.len()).all(|y| self.oplus(x, y) == self.oplus(y, x)))
    }

    pub fn check_axioms(&self) -> AxiomReport {
        check_over(&TableSig(self), &(0..self.len()).collect::<Vec<_>>()).expect("table signature is total")
    }

    /// First `(c₁₁, c₁₂, c₂₁, c₂₂)` in index order refining `a₁+a₂ = b₁+b₂`.
    pub fn rdp2_search(&self, a1: usize, a2: usize, b1: usize, b2: usize) -> Option<[usize; 4]> {
        let n = self.len();
        for c11 in 0..n {
            for c12 in 0..n {
                if self.sum(c11, c12) != Some(a1) {
                    continue;
                }
                for c21 in 0..n {
                    if self.sum(c11, c21) != Some(b1) || self.meet(c12, c21) != self.zero() {
                        continue;
                    }
                    for c22 in 0..n {
                        if self.sum(c21, c22) == Some(a2) && self.sum(c12, c22) == Some(b2) {
                            return Some([c11, c12, c21, c22]);
                        }
                    }
                }
            }
        }
        None
    }

    /// Boolean elements `e ⊕ e = e`.
    pub fn boolean_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&e| self.oplus(e, e) == e).collect()
    }

    /// Ordered `n`-tuples of pairwise disjoint Boolean elements summing to 1.
    pub fn boolean_partitions(&self, n: usize) -> Vec<Vec<usize>> {
        let booleans = self.boolean_elements();
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(n);
        self.extend_partition(&booleans, n, self.zero(), &mut current, &mut out);
        out
    }

    fn extend_partition(&self, booleans: &[usize], n: usize, acc: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == n {
            if acc == self.one() {
                out.push(current.clone());
            }
            return;
        }
        for &e in booleans {
            if current.iter().any(|&a| self.meet(a, e) != self.zero()) {
                continue;
            }
            if let Some(next) = self.sum(acc, e) {
                current.push(e);
                self.extend_partition(booleans, n, next, current, out);
                current.pop();
            }
        }
    }

    /// Whether there is a bijection preserving `⊕`, `⁻`, `~`, 0 and 1.
    pub fn is_isomorphic(&self, other: &FiniteAlgebra) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let n = self.len();
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        map[self.zero()] = other.zero();
        map[self.one()] = other.one();
        used[other.zero()] = true;
        used[other.one()] = true;
        let order: Vec<usize> = (0..n).filter(|&x| x != self.zero() && x != self.one()).collect();
        self.iso_extend(other, &order, 0, &mut map, &mut used)
    }

    fn iso_consistent(&self, other: &FiniteAlgebra, map: &[usize]) -> bool {
        let n = self.len();
        for x in 0..n {
            if map[x] == usize::MAX {
                continue;
            }
            for (img, want) in [
                (map[self.neg_minus(x)], other.neg_minus(map[x])),
                (map[self.neg_tilde(x)], other.neg_tilde(map[x])),
            ] {
                if img != usize::MAX && img != want {
                    return false;
                }
            }
            for y in 0..n {
                if map[y] == usize::MAX {
                    continue;
                }
                let img = map[self.oplus(x, y)];
                if img != usize::MAX && img != other.oplus(map[x], map[y]) {
                    return false;
                }
            }
        }
        true
    }

    fn iso_extend(&self, other: &FiniteAlgebra, order: &[usize], pos: usize, map: &mut [usize], used: &mut [bool]) -> bool {
        if !self.iso_consistent(other, map) {
            return false;
        }
        if pos == order.len() {
            return true;
        }
        let x = order[pos];
        for y in 0..other.len() {
            if used[y] {
                continue;
            }
            map[x] = y;
            used[y] = true;
            if self.iso_extend(other, order, pos + 1, map, used) {
                return true;
            }
            map[x] = usize::MAX;
            used[y] = false;
        }
        false
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    A1,
    A2,
    A3,
    A4,
    A5,
    A6,
    A7,
    A8,
    /// `0 ≠ 1`.
    Nontrivial,
}

impl Axiom {
    pub const ALL: [Axiom; 9] = [
        Axiom::A1,
        Axiom::A2,
        Axiom::A3,
        Axiom::A4,
        Axiom::A5,
        Axiom::A6,
        Axiom::A7,
        Axiom::A8,
        Axiom::Nontrivial,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Axiom::A1 => "A1",
            Axiom::A2 => "A2",
            Axiom::A3 => "A3",
            Axiom::A4 => "A4",
            Axiom::A5 => "A5",
            Axiom::A6 => "A6",
            Axiom::A7 => "A7",
            Axiom::A8 => "A8",
            Axiom::Nontrivial => "0!=1",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub passed: bool,
    /// Labels of the first counterexample, in evaluation order.
    pub witness: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
    pub evaluated: usize,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, axiom: Axiom) -> &AxiomCheck {
        self.checks.iter().find(|c| c.axiom == axiom).expect("every axiom is reported")
    }
}

/// The basic signature `(⊕, ⁻, ~, 0, 1)` the axiom checker evaluates.
trait Signature {
    type E: Clone + PartialEq;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn oplus(&self, x: &Self::E, y: &Self::E) -> Result<Self::E>;
    fn neg_minus(&self, x: &Self::E) -> Result<Self::E>;
    fn neg_tilde(&self, x: &Self::E) -> Result<Self::E>;
    fn label(&self, x: &Self::E) -> String;

    /// `x ⊙ y = (y⁻ ⊕ x⁻)~`.
    fn odot(&self, x: &Self::E, y: &Self::E) -> Result<Self::E> {
        self.neg_tilde(&self.oplus(&self.neg_minus(y)?, &self.neg_minus(x)?)?)
    }
}

struct TableSig<'a>(&'a FiniteAlgebra);

impl Signature for TableSig<'_> {
    type E = usize;
    fn zero(&self) -> usize {
        self.0.zero()
    }
    fn one(&self) -> usize {
        self.0.one()
    }
    fn oplus(&self, x: &usize, y: &usize) -> Result<usize> {
        Ok(self.0.oplus(*x, *y))
    }
    fn neg_minus(&self, x: &usize) -> Result<usize> {
        Ok(self.0.neg_minus(*x))
    }
    fn neg_tilde(&self, x: &usize) -> Result<usize> {
        Ok(self.0.neg_tilde(*x))
    }
    fn label(&self, x: &usize) -> String {
        self.0.label(*x).to_string()
    }
}

struct LazySig<'a>(&'a PmvAlgebra);

impl Signature for LazySig<'_> {
    type E = Element;
    fn zero(&self) -> Element {
        self.0.zero()
    }
    fn one(&self) -> Element {
        self.0.one()
    }
    fn oplus(&self, x: &Element, y: &Element) -> Result<Element> {
        self.0.oplus(x, y)
    }
    fn neg_minus(&self, x: &Element) -> Result<Element> {
        self.0.neg_minus(x)
    }
    fn neg_tilde(&self, x: &Element) -> Result<Element> {
        self.0.neg_tilde(x)
    }
    fn label(&self, x: &Element) -> String {
        x.to_string()
    }
}

fn check_over<S: Signature>(sig: &S, elems: &[S::E]) -> Result<AxiomReport> {
    let mut witnesses: Vec<Option<Vec<String>>> = vec![None; Axiom::ALL.len()];
    let mut record = |axiom: Axiom, w: &[&S::E]| {
        let slot = &mut witnesses[axiom as usize];
        if slot.is_none() {
            *slot = Some(w.iter().map(|e| sig.label(e)).collect());
        }
    };
    let (zero, one) = (sig.zero(), sig.one());

    if zero == one {
        record(Axiom::Nontrivial, &[&zero]);
    }
    if sig.neg_tilde(&one)? != zero || sig.neg_minus(&one)? != zero {
        record(Axiom::A4, &[&one]);
    }
    for x in elems {
        if sig.oplus(x, &zero)? != *x || sig.oplus(&zero, x)? != *x {
            record(Axiom::A2, &[x]);
        }
        if sig.oplus(x, &one)? != one || sig.oplus(&one, x)? != one {
            record(Axiom::A3, &[x]);
        }
        if sig.neg_tilde(&sig.neg_minus(x)?)? != *x {
            record(Axiom::A8, &[x]);
        }
        for y in elems {
            let x_oplus_y = sig.oplus(x, y)?;
            let a5_left = sig.neg_tilde(&sig.oplus(&sig.neg_minus(x)?, &sig.neg_minus(y)?)?)?;
            let a5_right = sig.neg_minus(&sig.oplus(&sig.neg_tilde(x)?, &sig.neg_tilde(y)?)?)?;
            if a5_left != a5_right {
                record(Axiom::A5, &[x, y]);
            }
            let t1 = sig.oplus(x, &sig.odot(&sig.neg_tilde(x)?, y)?)?;
            let t2 = sig.oplus(y, &sig.odot(&sig.neg_tilde(y)?, x)?)?;
            let t3 = sig.oplus(&sig.odot(x, &sig.neg_minus(y)?)?, y)?;
            let t4 = sig.oplus(&sig.odot(y, &sig.neg_minus(x)?)?, x)?;
            if t1 != t2 || t2 != t3 || t3 != t4 {
                record(Axiom::A6, &[x, y]);
            }
            let a7_left = sig.odot(x, &sig.oplus(&sig.neg_minus(x)?, y)?)?;
            let a7_right = sig.odot(&sig.oplus(x, &sig.neg_tilde(y)?)?, y)?;
            if a7_left != a7_right {
                record(Axiom::A7, &[x, y]);
            }
            for z in elems {
                if sig.oplus(x, &sig.oplus(y, z)?)? != sig.oplus(&x_oplus_y, z)? {
                    record(Axiom::A1, &[x, y, z]);
                }
            }
        }
    }
    let checks = Axiom::ALL
        .iter()
        .map(|&axiom| {
            let witness = witnesses[axiom as usize].clone();
            AxiomCheck {
                axiom,
                passed: witness.is_none(),
                witness,
            }
        })
        .collect();
    Ok(AxiomReport {
        checks,
        evaluated: elems.len(),
    })
}

/// Exhaustive check of A1–A8 and `0 ≠ 1` over a finite carrier.
pub fn check_axioms(alg: &PmvAlgebra, max_carrier: usize) -> Result<AxiomReport> {
    if !alg.is_finite() {
        return Err(Error::InfiniteCarrier(alg.name()));
    }
    Ok(alg.finite(max_carrier)?.check_axioms())
}

/// A1–A8 over the cube of a sample. Table backends are checked exhaustively.
pub fn sampled_axiom_check(alg: &PmvAlgebra, sample: &[Element]) -> Result<AxiomReport> {
    if let PmvAlgebra::Table(t) = alg {
        return Ok(FiniteAlgebra::from_table(alg.clone(), (**t).clone()).check_axioms());
    }
    for x in sample {
        alg.check(x)?;
    }
    check_over(&LazySig(alg), sample)
}
