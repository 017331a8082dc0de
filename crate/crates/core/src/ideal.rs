//! Ideals, normality, maximality and quotients.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{CayleyTable, Element, FiniteAlgebra, IterateMode, PmvAlgebra};
use crate::error::{Error, Result};

/// A subset of a finite carrier, stored as sorted indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ideal {
    members: Vec<usize>,
}

impl Ideal {
    pub fn from_indices(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        Ideal { members }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &x in &self.members {
            m[x] = true;
        }
        m
    }

    pub fn labels(&self, fa: &FiniteAlgebra) -> Vec<String> {
        self.members.iter().map(|&x| fa.label(x).to_string()).collect()
    }

    pub fn elements(&self, fa: &FiniteAlgebra) -> Vec<Element> {
        self.members.iter().map(|&x| fa.element(x).clone()).collect()
    }
}

/// Least ideal containing `generators`: downward closure and `⊕`-closure
/// iterated to a fixpoint.
pub fn ideal_generated(fa: &FiniteAlgebra, generators: &[usize]) -> Ideal {
    let n = fa.len();
    let mut inside = vec![false; n];
    inside[fa.zero()] = true;
    for &g in generators {
        inside[g] = true;
    }
    loop {
        let mut changed = false;
        for b in 0..n {
            if !inside[b] {
                continue;
            }
            for a in 0..n {
                if !inside[a] && fa.leq(a, b) {
                    inside[a] = true;
                    changed = true;
                }
            }
        }
        let current: Vec<usize> = (0..n).filter(|&x| inside[x]).collect();
        for &a in &current {
            for &b in &current {
                let s = fa.oplus(a, b);
                if !inside[s] {
                    inside[s] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            return Ideal::from_indices((0..n).filter(|&x| inside[x]).collect());
        }
    }
}

pub fn is_ideal(fa: &FiniteAlgebra, set: &Ideal) -> bool {
    let n = fa.len();
    let mask = set.mask(n);
    if !mask[fa.zero()] {
        return false;
    }
    for &b in set.members() {
        if (0..n).any(|a| fa.leq(a, b) && !mask[a]) {
            return false;
        }
        if set.members().iter().any(|&a| !mask[fa.oplus(a, b)]) {
            return false;
        }
    }
    true
}

/// `a ⊕ I = I ⊕ a` for every `a`.
pub fn is_normal(fa: &FiniteAlgebra, set: &Ideal) -> bool {
    (0..fa.len()).all(|a| {
        let left: BTreeSet<usize> = set.members().iter().map(|&b| fa.oplus(a, b)).collect();
        let right: BTreeSet<usize> = set.members().iter().map(|&c| fa.oplus(c, a)).collect();
        left == right
    })
}

/// Proper, and every `x ∉ I` generates the whole algebra together with `I`.
pub fn is_maximal(fa: &FiniteAlgebra, set: &Ideal) -> bool {
    let n = fa.len();
    if set.len() == n || !is_ideal(fa, set) {
        return false;
    }
    let mut gens = set.members().to_vec();
    (0..n).filter(|&x| !set.contains(x)).all(|x| {
        gens.push(x);
        let whole = ideal_generated(fa, &gens).len() == n;
        gens.pop();
        whole
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IdealClass {
    pub is_ideal: bool,
    pub is_normal: bool,
    pub is_maximal: bool,
}

pub fn classify_ideal(fa: &FiniteAlgebra, set: &Ideal) -> IdealClass {
    let ideal = is_ideal(fa, set);
    IdealClass {
        is_ideal: ideal,
        is_normal: ideal && is_normal(fa, set),
        is_maximal: ideal && is_maximal(fa, set),
    }
}

/// Every ideal, found by closing `{0}` under single-element extensions
/// `I ↦ gen(I ∪ {x})`. Output is sorted.
pub fn all_ideals(fa: &FiniteAlgebra, cap: usize) -> Result<Vec<Ideal>> {
    let start = ideal_generated(fa, &[]);
    let mut seen: BTreeSet<Ideal> = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(ideal) = queue.pop_front() {
        let mut gens = ideal.members().to_vec();
        for x in 0..fa.len() {
            if ideal.contains(x) {
                continue;
            }
            gens.push(x);
            let next = ideal_generated(fa, &gens);
            gens.pop();
            if seen.insert(next.clone()) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded {
                        what: "ideal count",
                        limit: cap,
                        actual: seen.len(),
                    });
                }
                queue.push_back(next);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalIdeal {
    pub ideal: Ideal,
    pub normal: bool,
}

pub fn all_maximal_ideals(fa: &FiniteAlgebra, cap: usize) -> Result<Vec<MaximalIdeal>> {
    Ok(all_ideals(fa, cap)?
        .into_iter()
        .filter(|i| is_maximal(fa, i))
        .map(|ideal| {
            let normal = is_normal(fa, &ideal);
            MaximalIdeal { ideal, normal }
        })
        .collect())
}

/// `M/I` as a table algebra together with the projection `x ↦ [x]`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub algebra: FiniteAlgebra,
    pub projection: Vec<usize>,
    /// Smallest member of each class.
    pub representatives: Vec<usize>,
}

/// Quotient by the congruence `x ≈ y` iff `x ⊙ y⁻ ∈ I` and `y ⊙ x⁻ ∈ I`.
pub fn quotient(fa: &FiniteAlgebra, set: &Ideal) -> Result<Quotient> {
    if !is_ideal(fa, set) {
        return Err(Error::NotIdeal);
    }
    if !is_normal(fa, set) {
        return Err(Error::NotNormal);
    }
    let n = fa.len();
    let mask = set.mask(n);
    let equiv = |x: usize, y: usize| mask[fa.odot(x, fa.neg_minus(y))] && mask[fa.odot(y, fa.neg_minus(x))];
    let mut projection = vec![usize::MAX; n];
    let mut representatives = Vec::new();
    for x in 0..n {
        if projection[x] != usize::MAX {
            continue;
        }
        let class = representatives.len();
        representatives.push(x);
        for y in x..n {
            if projection[y] == usize::MAX && equiv(x, y) {
                projection[y] = class;
            }
        }
    }
    let k = representatives.len();
    if k == 1 {
        return Err(Error::DegenerateQuotient);
    }
    let reps = &representatives;
    let oplus = reps
        .iter()
        .map(|&a| reps.iter().map(|&b| projection[fa.oplus(a, b)]).collect())
        .collect();
    let neg_minus = reps.iter().map(|&a| projection[fa.neg_minus(a)]).collect();
    let neg_tilde = reps.iter().map(|&a| projection[fa.neg_tilde(a)]).collect();
    let labels = reps.iter().map(|&a| format!("[{}]", fa.label(a))).collect();
    let table = CayleyTable::new(
        labels,
        oplus,
        neg_minus,
        neg_tilde,
        projection[fa.zero()],
        projection[fa.one()],
    )?;
    Ok(Quotient {
        algebra: FiniteAlgebra::from_cayley(table),
        projection,
        representatives,
    })
}

/// Membership rule of an ideal in an infinite algebra.
#[derive(Clone)]
pub enum LazyMembership {
    /// `y ≤ n⊙(g₁ ⊕ ⋯ ⊕ gₖ)` for some `n ≤ n_bound`.
    Generated { generators: Vec<Element>, n_bound: usize },
    Predicate(Arc<dyn Fn(&Element) -> bool + Send + Sync>),
}

impl fmt::Debug for LazyMembership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LazyMembership::Generated { generators, n_bound } => f
                .debug_struct("Generated")
                .field("generators", generators)
                .field("n_bound", n_bound)
                .finish(),
            LazyMembership::Predicate(_) => f.write_str("Predicate(..)"),
        }
    }
}

/// An ideal of an infinite algebra, known only through a membership oracle.
#[derive(Clone, Debug)]
pub struct LazyIdeal {
    pub algebra: PmvAlgebra,
    pub membership: LazyMembership,
}

impl LazyIdeal {
    pub fn generated(algebra: PmvAlgebra, generators: Vec<Element>, n_bound: usize) -> Self {
        LazyIdeal {
            algebra,
            membership: LazyMembership::Generated { generators, n_bound },
        }
    }

    pub fn predicate(algebra: PmvAlgebra, pred: impl Fn(&Element) -> bool + Send + Sync + 'static) -> Self {
        LazyIdeal {
            algebra,
            membership: LazyMembership::Predicate(Arc::new(pred)),
        }
    }

    pub fn contains(&self, y: &Element) -> Result<bool> {
        self.algebra.check(y)?;
        match &self.membership {
            LazyMembership::Predicate(p) => Ok(p(y)),
            LazyMembership::Generated { generators, n_bound } => {
                let mut h = self.algebra.zero();
                for g in generators {
                    h = self.algebra.oplus(&h, g)?;
                }
                for n in 0..=*n_bound {
                    let bound = self.algebra.iterate(&h, n, IterateMode::OplusMul)?.expect("⊕-multiples always exist");
                    if self.algebra.leq(y, &bound)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundedIdealClass {
    pub is_ideal: bool,
    pub is_normal: bool,
    pub is_maximal: bool,
    /// Verdicts cover the sample and multiples up to `bound` only.
    pub bounded: bool,
    pub bound: usize,
}

/// Sample-bounded classification of a lazy ideal.
///
/// Normality checks `a ⊕ b ∈ I ⊕ a` through the candidate
/// `c = (a ⊕ b) ⊙ a⁻` and `b ⊕ a ∈ a ⊕ I` through `c' = a~ ⊙ (b ⊕ a)`.
/// Maximality checks that each sampled `x ∉ I` reaches 1 as `n⊙x ⊕ h`
/// with `n ≤ bound` and `h` a sampled member.
pub fn classify_lazy_ideal(ideal: &LazyIdeal, sample: &[Element], bound: usize) -> Result<BoundedIdealClass> {
    let alg = &ideal.algebra;
    let inside: Vec<bool> = sample.iter().map(|y| ideal.contains(y)).collect::<Result<_>>()?;
    let members: Vec<&Element> = sample.iter().zip(&inside).filter(|(_, &m)| m).map(|(e, _)| e).collect();

    let mut is_ideal_v = ideal.contains(&alg.zero())?;
    for b in &members {
        for (a, &a_in) in sample.iter().zip(&inside) {
            if !a_in && alg.leq(a, b)? {
                is_ideal_v = false;
            }
        }
        for a in &members {
            if !ideal.contains(&alg.oplus(a, b)?)? {
                is_ideal_v = false;
            }
        }
    }

    let mut is_normal_v = is_ideal_v;
    for a in sample {
        for b in &members {
            let ab = alg.oplus(a, b)?;
            let c = alg.odot(&ab, &alg.neg_minus(a)?)?;
            if !(ideal.contains(&c)? && alg.oplus(&c, a)? == ab) {
                is_normal_v = false;
            }
            let ba = alg.oplus(b, a)?;
            let c2 = alg.odot(&alg.neg_tilde(a)?, &ba)?;
            if !(ideal.contains(&c2)? && alg.oplus(a, &c2)? == ba) {
                is_normal_v = false;
            }
        }
    }

    let one = alg.one();
    let mut is_maximal_v = is_ideal_v && !ideal.contains(&one)?;
    if is_maximal_v {
        for (x, _) in sample.iter().zip(&inside).filter(|(_, &m)| !m) {
            let mut reached = false;
            'search: for n in 1..=bound {
                let nx = alg.iterate(x, n, IterateMode::OplusMul)?.expect("⊕-multiples always exist");
                for h in &members {
                    if alg.oplus(&nx, h)? == one {
                        reached = true;
                        break 'search;
                    }
                }
            }
            if !reached {
                is_maximal_v = false;
                break;
            }
        }
    }
    Ok(BoundedIdealClass {
        is_ideal: is_ideal_v,
        is_normal: is_normal_v,
        is_maximal: is_maximal_v,
        bounded: true,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordered::UnitalGroup;
    use proptest::prelude::*;

    fn idx(fa: &FiniteAlgebra, coords: &[i64]) -> usize {
        fa.index_of(&Element::ints(coords)).unwrap()
    }

    /// Smallest ideal by brute force over all subsets containing `s`.
    fn brute_generated(fa: &FiniteAlgebra, s: &[usize]) -> Ideal {
        let n = fa.len();
        let mut best: Option<Ideal> = None;
        for mask in 0u32..(1 << n) {
            let set = Ideal::from_indices((0..n).filter(|&i| mask & (1 << i) != 0).collect());
            if s.iter().all(|&x| set.contains(x)) && is_ideal(fa, &set) && best.as_ref().is_none_or(|b| set.len() < b.len()) {
                best = Some(set);
            }
        }
        best.unwrap()
    }

    #[test]
    fn generated_examples() {
        let c2 = PmvAlgebra::chain(2).finite(64).unwrap();
        assert_eq!(ideal_generated(&c2, &[1]).members(), &[0, 1, 2]);
        assert_eq!(ideal_generated(&c2, &[]).members(), &[0]);

        let p = PmvAlgebra::chain_power(2, 2).finite(64).unwrap();
        let i = ideal_generated(&p, &[idx(&p, &[1, 0])]);
        assert_eq!(i.labels(&p), vec!["(0,0)", "(1,0)", "(2,0)"]);
        assert_eq!(i, brute_generated(&p, &[idx(&p, &[1, 0])]));
    }

    #[test]
    fn classify_examples() {
        let p = PmvAlgebra::chain_power(2, 2).finite(64).unwrap();
        let i = Ideal::from_indices((0..=2).map(|j| idx(&p, &[0, j])).collect());
        assert_eq!(
            classify_ideal(&p, &i),
            IdealClass {
                is_ideal: true,
                is_normal: true,
                is_maximal: true
            }
        );
        let c2 = PmvAlgebra::chain(2).finite(64).unwrap();
        let whole = Ideal::from_indices(vec![0, 1, 2]);
        assert_eq!(
            classify_ideal(&c2, &whole),
            IdealClass {
                is_ideal: true,
                is_normal: true,
                is_maximal: false
            }
        );
        assert!(!is_ideal(&c2, &Ideal::from_indices(vec![0, 1])));
    }

    #[test]
    fn lex_ideal_is_maximal_on_bounded_sample() {
        let m = PmvAlgebra::gamma(UnitalGroup::z2lex([1, 0]).unwrap());
        let ideal = LazyIdeal::predicate(m.clone(), |e| matches!(e, Element::Group(g) if g.0[0] == 0));
        let sample = m.sample(41);
        let class = classify_lazy_ideal(&ideal, &sample, 20).unwrap();
        assert!(class.is_ideal && class.is_normal && class.is_maximal && class.bounded);

        let generated = LazyIdeal::generated(m.clone(), vec![Element::group(&[0, 1])], 20);
        assert!(generated.contains(&Element::group(&[0, 20])).unwrap());
        assert!(!generated.contains(&Element::group(&[0, 21])).unwrap());
        let zero_ideal = LazyIdeal::generated(m.clone(), vec![], 20);
        let class = classify_lazy_ideal(&zero_ideal, &sample, 20).unwrap();
        assert!(class.is_ideal && class.is_normal && !class.is_maximal);
    }

    #[test]
    fn maximal_ideal_enumeration() {
        let b = PmvAlgebra::chain_power(1, 2).finite(64).unwrap();
        let max = all_maximal_ideals(&b, 1000).unwrap();
        let labels: Vec<Vec<String>> = max.iter().map(|m| m.ideal.labels(&b)).collect();
        assert_eq!(labels, vec![vec!["(0,0)", "(0,1)"], vec!["(0,0)", "(1,0)"]]);
        assert!(max.iter().all(|m| m.normal));

        for k in 1..=5 {
            let c = PmvAlgebra::chain(k).finite(64).unwrap();
            let max = all_maximal_ideals(&c, 1000).unwrap();
            assert_eq!(max.len(), 1);
            assert_eq!(max[0].ideal.members(), &[0]);
            let table = FiniteAlgebra::from_cayley(c.table().clone());
            assert_eq!(all_maximal_ideals(&table, 1000).unwrap(), max);
        }

        for (k, n) in [(1, 3), (2, 2), (2, 3), (3, 2)] {
            let a = PmvAlgebra::chain_power(k, n).finite(64).unwrap();
            let max = all_maximal_ideals(&a, 1000).unwrap();
            assert_eq!(max.len(), n);
            for m in &max {
                let c = classify_ideal(&a, &m.ideal);
                assert!(c.is_ideal && c.is_maximal);
            }
        }
    }

    #[test]
    fn ideal_cap_is_enforced() {
        let a = PmvAlgebra::chain_power(1, 3).finite(64).unwrap();
        assert_eq!(all_ideals(&a, 1000).unwrap().len(), 8);
        assert!(matches!(all_ideals(&a, 3), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn quotient_examples() {
        let c2 = PmvAlgebra::chain(2).finite(64).unwrap();
        let q = quotient(&c2, &Ideal::from_indices(vec![0])).unwrap();
        assert!(q.algebra.is_isomorphic(&c2));
        assert!(matches!(
            quotient(&c2, &Ideal::from_indices(vec![0, 1, 2])),
            Err(Error::DegenerateQuotient)
        ));

        let b = PmvAlgebra::chain_power(1, 2).finite(64).unwrap();
        let i = Ideal::from_indices(vec![idx(&b, &[0, 0]), idx(&b, &[0, 1])]);
        let q = quotient(&b, &i).unwrap();
        let c1 = PmvAlgebra::chain(1).finite(64).unwrap();
        assert!(q.algebra.is_isomorphic(&c1));
        assert!(q.algebra.check_axioms().all_passed());
        assert_eq!(q.projection, vec![0, 0, 1, 1]);
    }

    #[test]
    fn projection_is_a_surjective_homomorphism_with_kernel_i() {
        let a = PmvAlgebra::product(vec![PmvAlgebra::chain(2), PmvAlgebra::chain(3)]).finite(64).unwrap();
        for ideal in all_ideals(&a, 1000).unwrap() {
            let Ok(q) = quotient(&a, &ideal) else {
                assert_eq!(ideal.len(), a.len());
                continue;
            };
            let p = &q.projection;
            let qa = &q.algebra;
            assert!(qa.check_axioms().all_passed());
            for x in 0..a.len() {
                assert_eq!(p[a.neg_minus(x)], qa.neg_minus(p[x]));
                assert_eq!(p[a.neg_tilde(x)], qa.neg_tilde(p[x]));
                for y in 0..a.len() {
                    assert_eq!(p[a.oplus(x, y)], qa.oplus(p[x], p[y]));
                }
            }
            let kernel: Vec<usize> = (0..a.len()).filter(|&x| p[x] == qa.zero()).collect();
            assert_eq!(kernel, ideal.members());
            let mut image: Vec<usize> = p.clone();
            image.sort_unstable();
            image.dedup();
            assert_eq!(image.len(), qa.len());
        }
    }

    proptest! {
        #[test]
        fn generated_ideal_is_a_closure_operator(s in proptest::collection::vec(0usize..12, 0..4), t in proptest::collection::vec(0usize..12, 0..3)) {
            let a = PmvAlgebra::product(vec![PmvAlgebra::chain(2), PmvAlgebra::chain(3)]).finite(64).unwrap();
            let gs = ideal_generated(&a, &s);
            prop_assert!(s.iter().all(|&x| gs.contains(x)));
            prop_assert!(is_ideal(&a, &gs));
            prop_assert_eq!(ideal_generated(&a, gs.members()), gs.clone());
            let mut st = s.clone();
            st.extend(&t);
            let gst = ideal_generated(&a, &st);
            prop_assert!(gs.members().iter().all(|&x| gst.contains(x)));
        }
    }
}
