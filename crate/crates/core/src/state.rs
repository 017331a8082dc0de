//! Riesz-space-valued states.
//!
//! A state with values in `(R,1_R)` is stored as its full value table over a
//! tabulated algebra, except for the closed-form family `s_b(a,m) = (a, m·b)`
//! on `Γ(ℤ lex ℤ,(1,0))` with values in lexicographic `ℚ²`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Element, FiniteAlgebra, PmvAlgebra};
use crate::error::{Error, Result};
use crate::ideal::{self, Ideal, LazyIdeal};
use crate::lp;
use crate::ordered::{is_zero_vec, GroupKind, RieszKind, RieszRep};
use crate::rational::{self, RVec, Rat};

#[derive(Clone, Debug, PartialEq)]
pub enum StateValues {
    /// `values[i]` is the value at carrier index `i`.
    Table(Vec<RVec>),
    /// `s_b(a,m) = (a, m·b)` on `Γ(ℤ lex ℤ,(1,0))`.
    LexFamily { b: Rat },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RState {
    target: RieszRep,
    values: StateValues,
}

impl RState {
    /// Validated state from a value table.
    pub fn new(fa: &FiniteAlgebra, target: RieszRep, values: Vec<RVec>) -> Result<Self> {
        validate(fa, &target, &values)?;
        Ok(RState {
            target,
            values: StateValues::Table(values),
        })
    }

    /// A real state, i.e. a state into `ℚ¹`.
    pub fn real(fa: &FiniteAlgebra, values: &[Rat]) -> Result<Self> {
        Self::new(fa, RieszRep::qn(1), values.iter().map(|v| vec![v.clone()]).collect())
    }

    /// `s(x) = (s₁(x),…,sₙ(x))` into `ℚⁿ`; every component must be a state.
    pub fn from_components(fa: &FiniteAlgebra, components: &[RVec]) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidState("no components".into()));
        }
        for (i, c) in components.iter().enumerate() {
            Self::real(fa, c).map_err(|e| Error::InvalidState(format!("component {i}: {e}")))?;
        }
        let values = (0..fa.len())
            .map(|x| components.iter().map(|c| c[x].clone()).collect())
            .collect();
        Self::new(fa, RieszRep::qn(components.len()), values)
    }

    /// The family `s_b`, `b ≥ 0`, on `Γ(ℤ lex ℤ,(1,0))`.
    pub fn lex_family(b: Rat) -> Result<Self> {
        if b.is_negative() {
            return Err(Error::InvalidState(format!("family parameter b = {b} is negative")));
        }
        Ok(RState {
            target: RieszRep::lex_q2(),
            values: StateValues::LexFamily { b },
        })
    }

    pub fn target(&self) -> &RieszRep {
        &self.target
    }

    pub fn values(&self) -> Option<&[RVec]> {
        match &self.values {
            StateValues::Table(v) => Some(v),
            StateValues::LexFamily { .. } => None,
        }
    }

    pub fn family_parameter(&self) -> Option<&Rat> {
        match &self.values {
            StateValues::LexFamily { b } => Some(b),
            StateValues::Table(_) => None,
        }
    }

    /// Value at a carrier index of a tabulated state.
    pub fn value(&self, x: usize) -> &RVec {
        match &self.values {
            StateValues::Table(v) => &v[x],
            StateValues::LexFamily { .. } => panic!("family states are evaluated on elements"),
        }
    }

    /// `j`-th coordinate function of a tabulated `ℚⁿ`-valued state.
    pub fn component(&self, j: usize) -> RVec {
        match &self.values {
            StateValues::Table(v) => v.iter().map(|r| r[j].clone()).collect(),
            StateValues::LexFamily { .. } => panic!("family states have no coordinate table"),
        }
    }

    pub fn components(&self) -> Vec<RVec> {
        (0..self.target.dim()).map(|j| self.component(j)).collect()
    }

    /// Value of a family state at an element of `Γ(ℤ lex ℤ,(1,0))`.
    pub fn lex_value(&self, x: &Element) -> Result<RVec> {
        let StateValues::LexFamily { b } = &self.values else {
            return Err(Error::Unsupported("not a family state".into()));
        };
        match x {
            Element::Group(g) if g.dim() == 2 => Ok(vec![rational::int(g.0[0]), rational::int(g.0[1]) * b]),
            _ => Err(Error::NotInCarrier(x.to_string())),
        }
    }
}

fn validate(fa: &FiniteAlgebra, target: &RieszRep, values: &[RVec]) -> Result<()> {
    if values.len() != fa.len() {
        return Err(Error::InvalidState(format!(
            "value table has {} entries for a carrier of {}",
            values.len(),
            fa.len()
        )));
    }
    for (x, v) in values.iter().enumerate() {
        target
            .check(v)
            .map_err(|e| Error::InvalidState(format!("value at {}: {e}", fa.label(x))))?;
    }
    let unit = target.unit();
    if values[fa.one()] != unit {
        return Err(Error::InvalidState("s(1) ≠ 1_R".into()));
    }
    let zero = target.zero();
    for (x, v) in values.iter().enumerate() {
        if !target.leq(&zero, v) || !target.leq(v, &unit) {
            return Err(Error::InvalidState(format!("value at {} is outside [0,1_R]", fa.label(x))));
        }
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
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Verdict::Yes
    }
}

/// The operations and evaluation an identity or morphism check needs.
trait StateView {
    type E: Clone + PartialEq;
    fn elements(&self) -> &[Self::E];
    fn target(&self) -> &RieszRep;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn oplus(&self, x: &Self::E, y: &Self::E) -> Self::E;
    fn odot(&self, x: &Self::E, y: &Self::E) -> Self::E;
    fn neg_minus(&self, x: &Self::E) -> Self::E;
    fn neg_tilde(&self, x: &Self::E) -> Self::E;
    fn join(&self, x: &Self::E, y: &Self::E) -> Self::E;
    fn meet(&self, x: &Self::E, y: &Self::E) -> Self::E;
    fn leq(&self, x: &Self::E, y: &Self::E) -> bool;
    fn value(&self, x: &Self::E) -> RVec;
    fn label(&self, x: &Self::E) -> String;
}

struct FiniteView<'a> {
    fa: &'a FiniteAlgebra,
    s: &'a RState,
    indices: Vec<usize>,
}

impl<'a> FiniteView<'a> {
    fn new(fa: &'a FiniteAlgebra, s: &'a RState) -> Self {
        FiniteView {
            fa,
            s,
            indices: (0..fa.len()).collect(),
        }
    }
}

impl StateView for FiniteView<'_> {
    type E = usize;
    fn elements(&self) -> &[usize] {
        &self.indices
    }
    fn target(&self) -> &RieszRep {
        &self.s.target
    }
    fn zero(&self) -> usize {
        self.fa.zero()
    }
    fn one(&self) -> usize {
        self.fa.one()
    }
    fn oplus(&self, x: &usize, y: &usize) -> usize {
        self.fa.oplus(*x, *y)
    }
    fn odot(&self, x: &usize, y: &usize) -> usize {
        self.fa.odot(*x, *y)
    }
    fn neg_minus(&self, x: &usize) -> usize {
        self.fa.neg_minus(*x)
    }
    fn neg_tilde(&self, x: &usize) -> usize {
        self.fa.neg_tilde(*x)
    }
    fn join(&self, x: &usize, y: &usize) -> usize {
        self.fa.join(*x, *y)
    }
    fn meet(&self, x: &usize, y: &usize) -> usize {
        self.fa.meet(*x, *y)
    }
    fn leq(&self, x: &usize, y: &usize) -> bool {
        self.fa.leq(*x, *y)
    }
    fn value(&self, x: &usize) -> RVec {
        self.s.value(*x).clone()
    }
    fn label(&self, x: &usize) -> String {
        self.fa.label(*x).to_string()
    }
}

struct SampleView<'a> {
    alg: &'a PmvAlgebra,
    s: &'a RState,
    sample: &'a [Element],
}

impl StateView for SampleView<'_> {
    type E = Element;
    fn elements(&self) -> &[Element] {
        self.sample
    }
    fn target(&self) -> &RieszRep {
        &self.s.target
    }
    fn zero(&self) -> Element {
        self.alg.zero()
    }
    fn one(&self) -> Element {
        self.alg.one()
    }
    fn oplus(&self, x: &Element, y: &Element) -> Element {
        self.alg.oplus(x, y).expect("sample lies in the carrier")
    }
    fn odot(&self, x: &Element, y: &Element) -> Element {
        self.alg.odot(x, y).expect("sample lies in the carrier")
    }
    fn neg_minus(&self, x: &Element) -> Element {
        self.alg.neg_minus(x).expect("sample lies in the carrier")
    }
    fn neg_tilde(&self, x: &Element) -> Element {
        self.alg.neg_tilde(x).expect("sample lies in the carrier")
    }
    fn join(&self, x: &Element, y: &Element) -> Element {
        self.alg.join(x, y).expect("sample lies in the carrier")
    }
    fn meet(&self, x: &Element, y: &Element) -> Element {
        self.alg.meet(x, y).expect("sample lies in the carrier")
    }
    fn leq(&self, x: &Element, y: &Element) -> bool {
        self.alg.leq(x, y).expect("sample lies in the carrier")
    }
    fn value(&self, x: &Element) -> RVec {
        self.s.lex_value(x).expect("family state on its own algebra")
    }
    fn label(&self, x: &Element) -> String {
        x.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub passed: bool,
    pub witness: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> &IdentityCheck {
        self.checks.iter().find(|c| c.name == name).expect("known identity")
    }
}

pub const IDENTITY_NAMES: [&str; 8] = [
    "zero",
    "difference",
    "negation",
    "double_negation",
    "lattice_valuation",
    "sum_valuation",
    "truncated_sum",
    "commutativity",
];

fn identity_suite<V: StateView>(view: &V) -> IdentityReport {
    let r = view.target();
    let unit = r.unit();
    let zero_r = r.zero();
    let mut witness: BTreeMap<&'static str, Vec<String>> = BTreeMap::new();
    let mut fail = |name: &'static str, w: &[&V::E]| {
        witness.entry(name).or_insert_with(|| w.iter().map(|e| view.label(e)).collect());
    };

    if view.value(&view.zero()) != zero_r {
        fail("zero", &[&view.zero()]);
    }
    for x in view.elements() {
        let sx = view.value(x);
        let (xm, xt) = (view.neg_minus(x), view.neg_tilde(x));
        let complement = r.sub(&unit, &sx);
        if view.value(&xm) != complement || view.value(&xt) != complement {
            fail("negation", &[x]);
        }
        if view.value(&view.neg_minus(&xm)) != sx || view.value(&view.neg_tilde(&xt)) != sx {
            fail("double_negation", &[x]);
        }
        for y in view.elements() {
            let sy = view.value(y);
            let sum = r.add(&sx, &sy);
            if view.leq(x, y) {
                let diff = r.sub(&sy, &sx);
                let right = view.value(&view.odot(y, &xm));
                let left = view.value(&view.odot(&xt, y));
                if !r.leq(&sx, &sy) || right != diff || left != diff {
                    fail("difference", &[x, y]);
                }
            }
            if r.add(&view.value(&view.join(x, y)), &view.value(&view.meet(x, y))) != sum {
                fail("lattice_valuation", &[x, y]);
            }
            let s_oplus = view.value(&view.oplus(x, y));
            let s_odot = view.value(&view.odot(x, y));
            if r.add(&s_oplus, &s_odot) != sum {
                fail("sum_valuation", &[x, y]);
            }
            if r.oplus(&s_oplus, &s_odot) != r.oplus(&sx, &sy) {
                fail("truncated_sum", &[x, y]);
            }
            if s_oplus != view.value(&view.oplus(y, x)) {
                fail("commutativity", &[x, y]);
            }
        }
    }
    IdentityReport {
        checks: IDENTITY_NAMES
            .iter()
            .map(|&name| IdentityCheck {
                name,
                passed: !witness.contains_key(name),
                witness: witness.get(name).cloned(),
            })
            .collect(),
    }
}

/// The state identity suite over the whole carrier.
pub fn state_identities(fa: &FiniteAlgebra, s: &RState) -> IdentityReport {
    identity_suite(&FiniteView::new(fa, s))
}

/// The same identities for a family state over a sample.
pub fn family_identities(alg: &PmvAlgebra, s: &RState, sample: &[Element]) -> Result<IdentityReport> {
    for x in sample {
        alg.check(x)?;
        s.lex_value(x)?;
    }
    Ok(identity_suite(&SampleView { alg, s, sample }))
}

fn hom_equations<V: StateView>(view: &V) -> bool {
    let r = view.target();
    let unit = r.unit();
    if view.value(&view.one()) != unit || !is_zero_vec(&view.value(&view.zero())) {
        return false;
    }
    view.elements().iter().all(|x| {
        let sx = view.value(x);
        let comp = r.sub(&unit, &sx);
        view.value(&view.neg_minus(x)) == comp
            && view.value(&view.neg_tilde(x)) == comp
            && view
                .elements()
                .iter()
                .all(|y| view.value(&view.oplus(x, y)) == r.oplus(&sx, &view.value(y)))
    })
}

fn meet_equations<V: StateView>(view: &V) -> bool {
    let r = view.target();
    view.elements().iter().all(|x| {
        let sx = view.value(x);
        view.elements()
            .iter()
            .all(|y| view.value(&view.meet(x, y)) == r.meet(&sx, &view.value(y)))
    })
}

fn additive_on<V: StateView>(view: &V) -> bool {
    let r = view.target();
    let unit = r.unit();
    let zero = r.zero();
    if view.value(&view.one()) != unit {
        return false;
    }
    view.elements().iter().all(|x| {
        let sx = view.value(x);
        r.leq(&zero, &sx)
            && r.leq(&sx, &unit)
            && view.elements().iter().all(|y| {
                view.odot(x, y) != view.zero() || view.value(&view.oplus(x, y)) == r.add(&sx, &view.value(y))
            })
    })
}

/// Homomorphism equations into `Γ(R,1_R)`.
pub fn is_homomorphism(fa: &FiniteAlgebra, s: &RState) -> bool {
    hom_equations(&FiniteView::new(fa, s))
}

/// `s(x ∧ y) = s(x) ∧ s(y)` for all pairs.
pub fn is_meet_preserving(fa: &FiniteAlgebra, s: &RState) -> bool {
    meet_equations(&FiniteView::new(fa, s))
}

/// For `ℚⁿ` targets: every component is a vertex of the real state polytope.
pub fn is_extremal(s: &RState, vertices: &[RVec]) -> Verdict {
    match s.target.kind() {
        RieszKind::Qn(_) if s.values().is_some() => {
            Verdict::from_bool(s.components().iter().all(|c| vertices.binary_search(c).is_ok()))
        }
        _ => Verdict::Unknown,
    }
}

pub fn kernel(fa: &FiniteAlgebra, s: &RState) -> Ideal {
    Ideal::from_indices((0..fa.len()).filter(|&x| is_zero_vec(s.value(x))).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StateClassification {
    pub is_state: bool,
    pub is_morphism: Verdict,
    pub is_meet_preserving: Verdict,
    pub is_extremal: Verdict,
    /// Kernel members (sampled members for family states).
    pub kernel: Vec<String>,
    pub kernel_normal: bool,
    pub kernel_maximal: bool,
    pub bounded: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Classification of a tabulated state against the sorted real vertices of
/// the algebra's state polytope.
pub fn classify_r_state(fa: &FiniteAlgebra, s: &RState, vertices: &[RVec]) -> Result<StateClassification> {
    let Some(values) = s.values() else {
        return Err(Error::Unsupported("family states are classified on samples".into()));
    };
    validate(fa, &s.target, values)?;
    let ker = kernel(fa, s);
    let class = ideal::classify_ideal(fa, &ker);
    let extremal = is_extremal(s, vertices);
    Ok(StateClassification {
        is_state: true,
        is_morphism: Verdict::from_bool(is_homomorphism(fa, s)),
        is_meet_preserving: Verdict::from_bool(is_meet_preserving(fa, s)),
        is_extremal: extremal,
        kernel: ker.labels(fa),
        kernel_normal: class.is_normal,
        kernel_maximal: class.is_maximal,
        bounded: false,
        note: (extremal == Verdict::Unknown)
            .then(|| "extremality is not decided for this target".to_string()),
    })
}

fn is_lex_unit_interval(alg: &PmvAlgebra) -> bool {
    matches!(alg, PmvAlgebra::Gamma(g) if g.kind() == GroupKind::Z2Lex && g.unit().0 == [1, 0])
}

/// Sample-bounded classification of a family state `s_b`.
///
/// Extremality is not decidable from finitely many values; the verdict uses
/// the known classification of the family, in which exactly `s₀` is
/// extremal.
pub fn classify_family_state(
    alg: &PmvAlgebra,
    s: &RState,
    sample: &[Element],
    bound: usize,
) -> Result<StateClassification> {
    let Some(b) = s.family_parameter().cloned() else {
        return Err(Error::Unsupported("not a family state".into()));
    };
    if !is_lex_unit_interval(alg) {
        return Err(Error::Unsupported("family states live on Γ(ℤ lex ℤ,(1,0))".into()));
    }
    for x in sample {
        alg.check(x)?;
    }
    let view = SampleView { alg, s, sample };
    let is_state = additive_on(&view);
    if !is_state {
        return Err(Error::InvalidState("family state fails additivity on the sample".into()));
    }
    let s_owned = s.clone();
    let ker = LazyIdeal::predicate(alg.clone(), move |x| {
        s_owned.lex_value(x).map(|v| is_zero_vec(&v)).unwrap_or(false)
    });
    let kernel_members: Vec<String> = sample
        .iter()
        .filter(|x| ker.contains(x).unwrap_or(false))
        .map(|x| x.to_string())
        .collect();
    let class = ideal::classify_lazy_ideal(&ker, sample, bound)?;
    Ok(StateClassification {
        is_state,
        is_morphism: Verdict::from_bool(hom_equations(&view)),
        is_meet_preserving: Verdict::from_bool(meet_equations(&view)),
        is_extremal: Verdict::from_bool(b.is_zero()),
        kernel: kernel_members,
        kernel_normal: class.is_normal,
        kernel_maximal: class.is_maximal,
        bounded: true,
        note: Some("extremality from the classification of the s_b family: only s_0 is extremal".into()),
    })
}

/// Every real state-morphism, as value vectors sorted canonically.
///
/// A morphism onto its image is a surjective homomorphism onto a finite
/// subalgebra `{0, 1/d, …, 1}` of `[0,1]`; for each `d < |M|` the integer
/// homomorphisms onto `{0,…,d}` are found by backtracking, propagating
/// `h(x⊕y) = min(d, h(x)+h(y))` and `h(x⁻) = h(x~) = d − h(x)`.
pub fn real_state_morphisms(fa: &FiniteAlgebra) -> Vec<RVec> {
    let n = fa.len();
    let mut found: Vec<RVec> = (1..n as i64)
        .into_par_iter()
        .flat_map_iter(|d| {
            homs_onto_chain(fa, d)
                .into_iter()
                .map(move |h| h.into_iter().map(|v| rational::rat(v, d)).collect::<RVec>())
        })
        .collect();
    found.sort();
    found.dedup();
    found
}

struct HomSearch<'a> {
    fa: &'a FiniteAlgebra,
    d: i64,
    val: Vec<Option<i64>>,
    trail: Vec<usize>,
    assigned: Vec<usize>,
}

impl HomSearch<'_> {
    fn set(&mut self, x: usize, v: i64, queue: &mut Vec<usize>) -> bool {
        match self.val[x] {
            Some(w) => w == v,
            None => {
                self.val[x] = Some(v);
                self.trail.push(x);
                queue.push(x);
                true
            }
        }
    }

    fn assign(&mut self, x: usize, v: i64) -> bool {
        let mut queue = Vec::new();
        if !self.set(x, v, &mut queue) {
            return false;
        }
        while let Some(x) = queue.pop() {
            self.assigned.push(x);
            let vx = self.val[x].unwrap();
            let c = self.d - vx;
            if !self.set(self.fa.neg_minus(x), c, &mut queue) || !self.set(self.fa.neg_tilde(x), c, &mut queue) {
                return false;
            }
            for k in 0..self.assigned.len() {
                let y = self.assigned[k];
                let s = (vx + self.val[y].unwrap()).min(self.d);
                if !self.set(self.fa.oplus(x, y), s, &mut queue) || !self.set(self.fa.oplus(y, x), s, &mut queue) {
                    return false;
                }
            }
        }
        true
    }

    fn undo(&mut self, trail_len: usize, assigned_len: usize) {
        while self.trail.len() > trail_len {
            let x = self.trail.pop().unwrap();
            self.val[x] = None;
        }
        self.assigned.truncate(assigned_len);
    }

    fn search(&mut self, out: &mut Vec<Vec<i64>>) {
        let Some(x) = self.val.iter().position(|v| v.is_none()) else {
            let mut seen = vec![false; self.d as usize + 1];
            for v in &self.val {
                seen[v.unwrap() as usize] = true;
            }
            if seen.iter().all(|&b| b) {
                out.push(self.val.iter().map(|v| v.unwrap()).collect());
            }
            return;
        };
        for v in 0..=self.d {
            let (t, a) = (self.trail.len(), self.assigned.len());
            if self.assign(x, v) {
                self.search(out);
            }
            self.undo(t, a);
        }
    }
}

fn homs_onto_chain(fa: &FiniteAlgebra, d: i64) -> Vec<Vec<i64>> {
    let mut search = HomSearch {
        fa,
        d,
        val: vec![None; fa.len()],
        trail: Vec::new(),
        assigned: Vec::new(),
    };
    let mut out = Vec::new();
    if search.assign(fa.zero(), 0) && search.assign(fa.one(), d) {
        search.search(&mut out);
    }
    out
}

/// All state-morphisms into `ℚᵐ`: `m`-tuples of real state-morphisms, in
/// lexicographic order of the tuples.
pub fn enumerate_r_morphisms(fa: &FiniteAlgebra, m: usize, cap: usize) -> Result<Vec<RState>> {
    let reals = real_state_morphisms(fa);
    let count = (reals.len() as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if count > cap as u128 {
        return Err(Error::CapExceeded {
            what: "morphism count",
            limit: cap,
            actual: count.min(usize::MAX as u128) as usize,
        });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut idx = vec![0usize; m];
    if reals.is_empty() {
        return Ok(out);
    }
    loop {
        let comps: Vec<RVec> = idx.iter().map(|&i| reals[i].clone()).collect();
        out.push(RState::from_components(fa, &comps)?);
        let mut k = m;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < reals.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// `s(x) = Σᵢ (xᵢ/kᵢ)·aᵢ` on `Ł_{k₁} × ⋯ × Ł_{kₙ}` for Boolean coefficients
/// `aᵢ ∈ Γ(ℚᵐ,1)` with pairwise zero meets summing to `1`.
pub fn morphism_from_partition(fa: &FiniteAlgebra, m: usize, coefficients: &[RVec]) -> Result<RState> {
    let factors = fa
        .source()
        .chain_factors()
        .ok_or_else(|| Error::Precondition("domain must be a product of chains".into()))?;
    if coefficients.len() != factors.len() {
        return Err(Error::DimensionMismatch {
            expected: factors.len(),
            actual: coefficients.len(),
        });
    }
    let rep = RieszRep::qn(m);
    for a in coefficients {
        rep.check(a)?;
        if !a.iter().all(|c| c.is_zero() || c.is_one()) {
            return Err(Error::Precondition(format!(
                "invalid partition: {} is not Boolean",
                rational::vec_to_strings(a).join(",")
            )));
        }
    }
    for i in 0..coefficients.len() {
        for j in i + 1..coefficients.len() {
            if !is_zero_vec(&rep.meet(&coefficients[i], &coefficients[j])) {
                return Err(Error::Precondition(format!("invalid partition: a{} ∧ a{} ≠ 0", i + 1, j + 1)));
            }
        }
    }
    let total = coefficients.iter().fold(rep.zero(), |acc, a| rep.add(&acc, a));
    if total != rep.unit() {
        return Err(Error::Precondition("invalid partition: coefficients do not sum to 1".into()));
    }
    let values = fa
        .elements()
        .iter()
        .map(|e| {
            let x = e.chain_coords().expect("product-of-chains element");
            x.iter()
                .zip(&factors)
                .zip(coefficients)
                .fold(rep.zero(), |acc, ((&xi, &ki), a)| rep.add(&acc, &rep.scale(&rational::rat(xi, ki), a)))
        })
        .collect();
    let s = RState::new(fa, rep, values)?;
    if !is_homomorphism(fa, &s) {
        return Err(Error::Verification("partition state is not a homomorphism".into()));
    }
    Ok(s)
}

#[derive(Clone, Debug)]
pub struct KernelQuotient {
    pub quotient: ideal::Quotient,
    pub induced: RState,
}

/// `M/Ker(s)` with the induced state `s̃([x]) = s(x)`.
pub fn quotient_by_kernel(fa: &FiniteAlgebra, s: &RState) -> Result<KernelQuotient> {
    let ker = kernel(fa, s);
    let q = ideal::quotient(fa, &ker)?;
    let values: Vec<RVec> = q.representatives.iter().map(|&r| s.value(r).clone()).collect();
    for x in 0..fa.len() {
        if values[q.projection[x]] != *s.value(x) {
            return Err(Error::Verification(format!("s is not constant on the class of {}", fa.label(x))));
        }
    }
    let induced = RState::new(&q.algebra, s.target.clone(), values)?;
    if kernel(&q.algebra, &induced).len() != 1 {
        return Err(Error::Verification("induced state has a nontrivial kernel".into()));
    }
    Ok(KernelQuotient { quotient: q, induced })
}

/// Weights expressing a `ℚⁿ`-state as a convex combination of the given
/// extremal states.
///
/// Each component is written over the real vertices occurring in
/// `extremal`; the weight of an extremal state is the product of the weights
/// of its components. The reconstruction is checked exactly.
pub fn convex_decompose(fa: &FiniteAlgebra, s: &RState, extremal: &[RState]) -> Result<Vec<Rat>> {
    let RieszKind::Qn(n) = s.target.kind() else {
        return Err(Error::Unsupported("convex decomposition needs a ℚⁿ target".into()));
    };
    if s.values().is_none() {
        return Err(Error::Unsupported("family states are not tabulated".into()));
    }
    let mut reals: Vec<RVec> = Vec::new();
    let mut tuples = Vec::with_capacity(extremal.len());
    for e in extremal {
        if e.target != s.target || e.values().is_none() {
            return Err(Error::Precondition("extremal states must share the ℚⁿ target".into()));
        }
        tuples.push(e.components());
        reals.extend(e.components());
    }
    reals.sort();
    reals.dedup();
    let size = fa.len();
    let mut component_weights: Vec<RVec> = Vec::with_capacity(n);
    for c in s.components() {
        // Σⱼ λⱼ vⱼ = c, Σⱼ λⱼ = 1, λ ≥ 0.
        let mut rows: Vec<RVec> = (0..size).map(|x| reals.iter().map(|v| v[x].clone()).collect()).collect();
        let mut rhs = c.clone();
        rows.push(rational::ones(reals.len()));
        rhs.push(Rat::one());
        let lambda = lp::feasible_point(&rows, &rhs, reals.len())
            .ok_or_else(|| Error::Precondition("state lies outside the hull of the extremal states".into()))?;
        component_weights.push(lambda);
    }
    let weights: Vec<Rat> = tuples
        .iter()
        .map(|t| {
            t.iter().enumerate().fold(Rat::one(), |acc, (i, c)| {
                let j = reals.binary_search(c).expect("component collected above");
                acc * &component_weights[i][j]
            })
        })
        .collect();
    let total = weights.iter().fold(Rat::zero(), |a, w| a + w);
    let mut rebuilt = vec![rational::zeros(n); size];
    for (w, e) in weights.iter().zip(extremal) {
        for (x, acc) in rebuilt.iter_mut().enumerate() {
            *acc = s.target.add(acc, &s.target.scale(w, e.value(x)));
        }
    }
    if total != Rat::one() || rebuilt.as_slice() != s.values().unwrap() {
        return Err(Error::Verification("convex reconstruction is not exact".into()));
    }
    Ok(weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordered::UnitalGroup;
    use crate::polytope::StatePolytope;
    use crate::rational::{int, rat};

    fn fa(alg: &PmvAlgebra) -> FiniteAlgebra {
        alg.finite(64).unwrap()
    }

    fn verts(fa: &FiniteAlgebra) -> Vec<RVec> {
        StatePolytope::new(fa).enumerate_vertices(12).unwrap()
    }

    /// Real state `x ↦ xⱼ / kⱼ` on a product of chains.
    fn projection(fa: &FiniteAlgebra, j: usize) -> RVec {
        let ks = fa.source().chain_factors().unwrap();
        fa.elements()
            .iter()
            .map(|e| rat(e.chain_coords().unwrap()[j], ks[j]))
            .collect()
    }

    #[test]
    fn family_values() {
        let s = RState::lex_family(rat(7, 3)).unwrap();
        assert_eq!(s.lex_value(&Element::group(&[0, 1])).unwrap(), vec![int(0), rat(7, 3)]);
        let s0 = RState::lex_family(int(0)).unwrap();
        assert_eq!(s0.lex_value(&Element::group(&[1, -5])).unwrap(), vec![int(1), int(0)]);
        assert!(matches!(RState::lex_family(rat(-1, 2)), Err(Error::InvalidState(_))));
    }

    #[test]
    fn components_into_q2() {
        let a = fa(&PmvAlgebra::chain_power(1, 2));
        let s = RState::from_components(&a, &[projection(&a, 0), projection(&a, 1)]).unwrap();
        let e1 = a.index_of(&Element::ints(&[1, 0])).unwrap();
        assert_eq!(s.value(e1), &vec![int(1), int(0)]);
        let bad = vec![int(0), int(1), int(1), int(1)];
        assert!(matches!(
            RState::from_components(&a, &[projection(&a, 0), bad]),
            Err(Error::InvalidState(_))
        ));
    }

    #[test]
    fn identity_style_morphism_on_boolean_cube() {
        let a = fa(&PmvAlgebra::chain_power(1, 3));
        let v = verts(&a);
        let s = RState::from_components(&a, &[projection(&a, 0), projection(&a, 1), projection(&a, 2)]).unwrap();
        let c = classify_r_state(&a, &s, &v).unwrap();
        assert_eq!(c.is_morphism, Verdict::Yes);
        assert_eq!(c.is_meet_preserving, Verdict::Yes);
        assert_eq!(c.is_extremal, Verdict::Yes);
        assert_eq!(c.kernel, vec!["(0,0,0)"]);
        assert!(!c.kernel_maximal);

        let p0 = projection(&a, 0);
        let s = RState::from_components(&a, &[p0.clone(), p0.clone(), p0]).unwrap();
        let c = classify_r_state(&a, &s, &v).unwrap();
        assert!(c.is_morphism.is_yes() && c.is_extremal.is_yes());
        assert_eq!(c.kernel, vec!["(0,0,0)", "(0,0,1)", "(0,1,0)", "(0,1,1)"]);
        assert!(c.kernel_maximal);
    }

    #[test]
    fn family_classification() {
        let m = PmvAlgebra::gamma(UnitalGroup::z2lex([1, 0]).unwrap());
        let sample = m.sample(25);
        let s1 = RState::lex_family(int(1)).unwrap();
        let c = classify_family_state(&m, &s1, &sample, 25).unwrap();
        assert!(c.is_morphism.is_yes() && c.bounded);
        assert_eq!(c.kernel, vec!["(0,0)"]);
        assert!(!c.kernel_maximal);
        assert_eq!(c.is_extremal, Verdict::No);

        let s0 = RState::lex_family(int(0)).unwrap();
        let c = classify_family_state(&m, &s0, &sample, 25).unwrap();
        assert!(c.is_morphism.is_yes() && c.kernel_maximal);
        assert_eq!(c.is_extremal, Verdict::Yes);
        let expected: Vec<String> = (0..=12).map(|n| format!("(0,{n})")).collect();
        assert_eq!(c.kernel, expected);

        let report = family_identities(&m, &s1, &sample).unwrap();
        assert!(report.all_passed(), "{report:?}");
    }

    #[test]
    fn partition_morphisms() {
        let a = fa(&PmvAlgebra::chain_power(1, 2));
        let e = |c: &[i64]| -> RVec { c.iter().map(|&x| int(x)).collect() };
        let id = morphism_from_partition(&a, 2, &[e(&[1, 0]), e(&[0, 1])]).unwrap();
        for x in 0..a.len() {
            let c = a.element(x).chain_coords().unwrap();
            assert_eq!(id.value(x), &e(&c));
        }
        let s = morphism_from_partition(&a, 2, &[e(&[1, 1]), e(&[0, 0])]).unwrap();
        for x in 0..a.len() {
            let c = a.element(x).chain_coords().unwrap();
            assert_eq!(s.value(x), &e(&[c[0], c[0]]));
        }
        assert!(matches!(
            morphism_from_partition(&a, 2, &[e(&[1, 0]), e(&[1, 1])]),
            Err(Error::Precondition(_))
        ));

        let b = fa(&PmvAlgebra::chain_power(1, 3));
        let s = morphism_from_partition(&b, 3, &[e(&[1, 0, 0]), e(&[0, 1, 0]), e(&[0, 0, 1])]).unwrap();
        let e1 = b.index_of(&Element::ints(&[1, 0, 0])).unwrap();
        assert_eq!(s.value(e1), &e(&[1, 0, 0]));
        assert!(*s.value(e1) != s.target().zero() && *s.value(e1) != s.target().unit());
    }

    #[test]
    fn morphism_counts_small() {
        let a = fa(&PmvAlgebra::chain_power(1, 2));
        assert_eq!(enumerate_r_morphisms(&a, 2, 1000).unwrap().len(), 4);
        let b = fa(&PmvAlgebra::chain_power(2, 3));
        let reals = real_state_morphisms(&b);
        assert_eq!(reals.len(), 3);
        let mut projections: Vec<RVec> = (0..3).map(|j| projection(&b, j)).collect();
        projections.sort();
        assert_eq!(reals, projections);
        assert_eq!(enumerate_r_morphisms(&fa(&PmvAlgebra::chain(1)), 1, 10).unwrap().len(), 1);
        assert!(matches!(enumerate_r_morphisms(&b, 3, 5), Err(Error::CapExceeded { .. })));
    }

    /// Real homomorphisms by trying every map into {0, 1/d, …, 1} for all
    /// d < |M|.
    fn brute_real_homs(fa: &FiniteAlgebra) -> Vec<RVec> {
        let n = fa.len();
        let mut out = Vec::new();
        for d in 1..n as i64 {
            let mut h = vec![0i64; n];
            loop {
                let values: RVec = h.iter().map(|&v| rat(v, d)).collect();
                if let Ok(s) = RState::real(fa, &values) {
                    if is_homomorphism(fa, &s) {
                        out.push(values);
                    }
                }
                let mut i = 0;
                while i < n && h[i] == d {
                    h[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
                h[i] += 1;
            }
        }
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn hom_search_matches_brute_force() {
        for alg in [
            PmvAlgebra::chain(3),
            PmvAlgebra::chain_power(1, 2),
            PmvAlgebra::product(vec![PmvAlgebra::chain(2), PmvAlgebra::chain(1)]),
        ] {
            let a = fa(&alg);
            assert_eq!(real_state_morphisms(&a), brute_real_homs(&a), "{}", alg.name());
        }
    }

    #[test]
    fn kernel_quotients() {
        let a = fa(&PmvAlgebra::chain_power(1, 2));
        let p0 = projection(&a, 0);
        let s = RState::from_components(&a, &[p0.clone(), p0]).unwrap();
        let kq = quotient_by_kernel(&a, &s).unwrap();
        assert!(kq.quotient.algebra.is_isomorphic(&fa(&PmvAlgebra::chain(1))));

        let b = fa(&PmvAlgebra::product(vec![PmvAlgebra::chain(2), PmvAlgebra::chain(1)]));
        let s = RState::real(&b, &projection(&b, 1)).unwrap();
        let kq = quotient_by_kernel(&b, &s).unwrap();
        assert!(kq.quotient.algebra.is_isomorphic(&fa(&PmvAlgebra::chain(1))));
        assert_eq!(kernel(&kq.quotient.algebra, &kq.induced).len(), 1);

        let s = RState::from_components(&a, &[projection(&a, 0), projection(&a, 1)]).unwrap();
        let kq = quotient_by_kernel(&a, &s).unwrap();
        assert!(kq.quotient.algebra.is_isomorphic(&a));
    }

    #[test]
    fn convex_decomposition_examples() {
        let a = fa(&PmvAlgebra::chain_power(1, 2));
        let (p1, p2) = (projection(&a, 0), projection(&a, 1));
        let half = crate::polytope::convex_combination(&[p1.clone(), p2.clone()], &[rat(1, 2), rat(1, 2)]);
        let s = RState::real(&a, &half).unwrap();
        let ext = enumerate_r_morphisms(&a, 1, 100).unwrap();
        assert_eq!(convex_decompose(&a, &s, &ext).unwrap(), vec![rat(1, 2), rat(1, 2)]);

        let c1 = crate::polytope::convex_combination(&[p1.clone(), p2.clone()], &[rat(3, 4), rat(1, 4)]);
        let s = RState::from_components(&a, &[c1, p2.clone()]).unwrap();
        let ext = enumerate_r_morphisms(&a, 2, 100).unwrap();
        let w = convex_decompose(&a, &s, &ext).unwrap();
        for (e, wi) in ext.iter().zip(&w) {
            let comps = e.components();
            let expected = if comps == vec![p1.clone(), p2.clone()] {
                rat(3, 4)
            } else if comps == vec![p2.clone(), p2.clone()] {
                rat(1, 4)
            } else {
                int(0)
            };
            assert_eq!(*wi, expected);
        }

        for (i, e) in ext.iter().enumerate() {
            let w = convex_decompose(&a, e, &ext).unwrap();
            for (j, wj) in w.iter().enumerate() {
                assert_eq!(*wj, if i == j { int(1) } else { int(0) });
            }
        }
    }
}
