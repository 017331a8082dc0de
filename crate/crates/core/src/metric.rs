//! The state pseudo-norm `|x|_s = ‖ŝ(x)‖` on a unital group `(ℤⁿ,u)`, the
//! pseudo-metric `d_s`, its kernel, and the image subgroup `ŝ(ℤⁿ) ⊆ ℚᵐ`.
//!
//! The state on `Γ(ℤⁿ,u)` is extended to the group by slicing `g⁺` and `g⁻`
//! greedily into pieces of `[0,u]`. The completion of the group under `d_s`
//! is represented only by the image subgroup with its componentwise order.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::lattice::{self, RationalLattice};
use crate::ordered::{GroupElement, RieszKind, RieszRep, UnitalGroup};
use crate::rational::{self, RVec, Rat};
use crate::state::RState;

#[derive(Clone, Debug)]
pub struct MetricContext {
    group: UnitalGroup,
    target: RieszRep,
    index: HashMap<Vec<i64>, usize>,
    values: Vec<RVec>,
}

/// Extends a state on `Γ(ℤⁿ,u)` (or a product of chains, read as such) to
/// the whole group.
pub fn extend_state(fa: &FiniteAlgebra, s: &RState) -> Result<MetricContext> {
    let unit = fa
        .source()
        .chain_factors()
        .ok_or_else(|| Error::Unsupported(format!("{} is not an interval of ℤⁿ", fa.source().name())))?;
    let values = s
        .values()
        .ok_or_else(|| Error::Unsupported("family states cannot be extended".into()))?;
    if !matches!(s.target().kind(), RieszKind::Qn(_)) {
        return Err(Error::Unsupported("the pseudo-norm needs a ℚⁿ target".into()));
    }
    if values.len() != fa.len() {
        return Err(Error::DimensionMismatch {
            expected: fa.len(),
            actual: values.len(),
        });
    }
    let index = fa
        .elements()
        .iter()
        .enumerate()
        .map(|(i, e)| (e.chain_coords().expect("chain-like carrier"), i))
        .collect();
    let ctx = MetricContext {
        group: UnitalGroup::zn(&unit)?,
        target: s.target().clone(),
        index,
        values: values.to_vec(),
    };
    if ctx.extend(ctx.group.unit())? != ctx.target.unit() {
        return Err(Error::Verification("extension does not map u to 1".into()));
    }
    let probe = ctx.grid(2);
    ctx.check_well_defined(&probe)?;
    Ok(ctx)
}

impl MetricContext {
    pub fn group(&self) -> &UnitalGroup {
        &self.group
    }

    pub fn target(&self) -> &RieszRep {
        &self.target
    }

    fn interval_value(&self, x: &GroupElement) -> &RVec {
        &self.values[self.index[&x.0]]
    }

    fn check_dim(&self, g: &GroupElement) -> Result<()> {
        if g.dim() != self.group.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.group.dim(),
                actual: g.dim(),
            });
        }
        Ok(())
    }

    /// Greedy slices of a positive element: `x₁ = g ∧ u`, then of `g − x₁`.
    fn unit_slices(&self, g: &GroupElement) -> Vec<GroupElement> {
        let grp = &self.group;
        let zero = grp.zero();
        let mut rest = g.clone();
        let mut out = Vec::new();
        while rest != zero {
            let slice = grp.meet(&rest, grp.unit());
            rest = grp.sub(&rest, &slice);
            out.push(slice);
        }
        out
    }

    /// Slices `(of g⁺, of g⁻)`.
    pub fn slices(&self, g: &GroupElement) -> Result<(Vec<GroupElement>, Vec<GroupElement>)> {
        self.check_dim(g)?;
        Ok((
            self.unit_slices(&self.group.positive_part(g)),
            self.unit_slices(&self.group.negative_part(g)),
        ))
    }

    fn sum_values<'a>(&self, pieces: impl IntoIterator<Item = &'a GroupElement>, sign: i64) -> RVec {
        let mut acc = self.target.zero();
        for p in pieces {
            let v = self.interval_value(p);
            for (a, b) in acc.iter_mut().zip(v) {
                if sign > 0 {
                    *a += b;
                } else {
                    *a -= b;
                }
            }
        }
        acc
    }

    /// `ŝ(g) = Σ s(slices of g⁺) − Σ s(slices of g⁻)`.
    pub fn extend(&self, g: &GroupElement) -> Result<RVec> {
        let (pos, neg) = self.slices(g)?;
        Ok(self.target.sub(&self.sum_values(&pos, 1), &self.sum_values(&neg, 1)))
    }

    /// `ŝ(g)` from two other decompositions: unit vectors, and per-coordinate
    /// greedy slices.
    fn alternative_values(&self, g: &GroupElement) -> [RVec; 2] {
        let n = self.group.dim();
        let unit = &self.group.unit().0;
        let mut by_atoms = self.target.zero();
        let mut by_coords = self.target.zero();
        for i in 0..n {
            let c = g.0[i];
            let sign = c.signum();
            let mut e = vec![0; n];
            e[i] = 1;
            let atom = self.interval_value(&GroupElement(e.clone()));
            for _ in 0..c.abs() {
                by_atoms = if sign > 0 {
                    self.target.add(&by_atoms, atom)
                } else {
                    self.target.sub(&by_atoms, atom)
                };
            }
            let mut left = c.abs();
            while left > 0 {
                e[i] = left.min(unit[i]);
                left -= e[i];
                let piece = self.sum_values([&GroupElement(e.clone())], sign);
                by_coords = self.target.add(&by_coords, &piece);
            }
        }
        [by_atoms, by_coords]
    }

    /// Compares the greedy extension with the alternative decompositions.
    pub fn check_well_defined(&self, samples: &[GroupElement]) -> Result<()> {
        samples.par_iter().try_for_each(|g| {
            let v = self.extend(g)?;
            for alt in self.alternative_values(g) {
                if alt != v {
                    return Err(Error::Verification(format!("extension depends on the decomposition of {g}")));
                }
            }
            Ok(())
        })
    }

    /// `ŝ(eᵢ)` for the unit vectors `eᵢ`, i.e. the columns of the value matrix.
    pub fn atom_values(&self) -> Vec<RVec> {
        let n = self.group.dim();
        (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 1;
                self.interval_value(&GroupElement(e)).clone()
            })
            .collect()
    }

    /// All `g` with `|gᵢ| ≤ radius·uᵢ`, in lexicographic order.
    pub fn grid(&self, radius: i64) -> Vec<GroupElement> {
        let mut out = vec![Vec::new()];
        for &u in &self.group.unit().0 {
            let r = radius * u;
            out = out
                .into_iter()
                .flat_map(|p: Vec<i64>| {
                    (-r..=r).map(move |c| {
                        let mut q = p.clone();
                        q.push(c);
                        q
                    })
                })
                .collect();
        }
        out.into_iter().map(GroupElement).collect()
    }

    /// The image subgroup `ŝ(ℤⁿ)`.
    pub fn image_lattice(&self) -> RationalLattice {
        RationalLattice::generated_by(&self.atom_values(), self.target.dim())
    }
}

/// `|x|_s = ‖ŝ(x)‖`.
pub fn pseudo_norm(ctx: &MetricContext, x: &GroupElement) -> Result<Rat> {
    Ok(ctx.target.norm_unit(&ctx.extend(x)?))
}

/// `d_s(x,y) = |x − y|_s`.
pub fn dist(ctx: &MetricContext, x: &GroupElement, y: &GroupElement) -> Result<Rat> {
    ctx.check_dim(x)?;
    ctx.check_dim(y)?;
    pseudo_norm(ctx, &ctx.group.sub(x, y))
}

/// Integer basis of `{x ∈ ℤⁿ : ŝ(x) = 0}` in echelon form.
pub fn norm_kernel(ctx: &MetricContext) -> Vec<Vec<i64>> {
    let n = ctx.group.dim();
    let atoms = ctx.atom_values();
    let m = ctx.target.dim();
    let denom = lattice::common_denominator(atoms.iter().flatten());
    let d = Rat::from_integer(denom);
    let matrix: Vec<Vec<BigInt>> = (0..m)
        .map(|j| (0..n).map(|i| (&atoms[i][j] * &d).to_integer()).collect())
        .collect();
    let kernel = lattice::integer_kernel(&matrix, n);
    let reduced = lattice::row_echelon(&kernel, n);
    reduced.h[..reduced.rank]
        .iter()
        .map(|row| row.iter().map(|v| v.to_i64().expect("kernel entries fit in i64")).collect())
        .collect()
}

fn kernel_lattice(basis: &[Vec<i64>], n: usize) -> RationalLattice {
    let rows: Vec<RVec> = basis.iter().map(|b| b.iter().map(|&c| rational::int(c)).collect()).collect();
    RationalLattice::generated_by(&rows, n)
}

fn group_as_rats(g: &GroupElement) -> RVec {
    g.0.iter().map(|&c| rational::int(c)).collect()
}

/// Outcome of one property over a sample.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyTally {
    pub name: String,
    pub evaluated: usize,
    pub passed: usize,
    pub counterexample: Option<String>,
}

impl PropertyTally {
    fn new(name: &str) -> Self {
        PropertyTally {
            name: name.to_string(),
            evaluated: 0,
            passed: 0,
            counterexample: None,
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.evaluated += 1;
        if ok {
            self.passed += 1;
        } else if self.counterexample.is_none() {
            self.counterexample = Some(witness());
        }
    }

    fn merge(&mut self, other: PropertyTally) {
        self.evaluated += other.evaluated;
        self.passed += other.passed;
        if self.counterexample.is_none() {
            self.counterexample = other.counterexample;
        }
    }

    pub fn all_passed(&self) -> bool {
        self.passed == self.evaluated
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub properties: Vec<PropertyTally>,
}

impl PropertyReport {
    pub fn all_passed(&self) -> bool {
        self.properties.iter().all(PropertyTally::all_passed)
    }

    pub fn get(&self, name: &str) -> &PropertyTally {
        self.properties
            .iter()
            .find(|p| p.name == name)
            .unwrap_or_else(|| panic!("no property {name}"))
    }
}

/// Runs `check(i, tallies)` for every sample index in parallel and merges the
/// tallies in sample order, so the first counterexample is deterministic.
fn tally_over(names: &[&str], count: usize, check: impl Fn(usize, &mut [PropertyTally]) + Sync) -> PropertyReport {
    let parts: Vec<Vec<PropertyTally>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut t: Vec<PropertyTally> = names.iter().map(|n| PropertyTally::new(n)).collect();
            check(i, &mut t);
            t
        })
        .collect();
    let mut properties: Vec<PropertyTally> = names.iter().map(|n| PropertyTally::new(n)).collect();
    for part in parts {
        for (acc, t) in properties.iter_mut().zip(part) {
            acc.merge(t);
        }
    }
    PropertyReport { properties }
}

/// `ŝ` on every distinct element produced by `f` over sample pairs.
fn extension_table(
    ctx: &MetricContext,
    samples: &[GroupElement],
    f: impl Fn(&GroupElement, &GroupElement) -> Vec<GroupElement> + Sync,
) -> HashMap<Vec<i64>, RVec> {
    let mut keys: Vec<Vec<i64>> = samples
        .par_iter()
        .flat_map_iter(|x| samples.iter().flat_map(|y| f(x, y)).map(|g| g.0).collect::<Vec<_>>())
        .collect();
    keys.par_sort_unstable();
    keys.dedup();
    keys.into_par_iter()
        .map(|k| {
            let v = ctx.extend(&GroupElement(k.clone())).expect("sample dimension checked");
            (k, v)
        })
        .collect()
}

pub const NORM_PROPERTIES: [&str; 5] = ["subadditive", "coordinate_bound", "integer_multiple", "symmetric", "monotone"];

/// Pseudo-norm laws over all sample pairs:
/// subadditivity, the coordinate bound `|ŝ(x)(t) − ŝ(y)(t)| ≤ |x−y|_s`,
/// `|nx|_s ≤ |n|·|x|_s` for `|n| ≤ 3`, symmetry with `|0|_s = 0`, and
/// monotonicity on `−y ≤ x ≤ y`.
pub fn check_norm_properties(ctx: &MetricContext, samples: &[GroupElement]) -> Result<PropertyReport> {
    for g in samples {
        ctx.check_dim(g)?;
    }
    let grp = &ctx.group;
    let t = &ctx.target;
    let hat: Vec<RVec> = samples.iter().map(|g| ctx.extend(g)).collect::<Result<_>>()?;
    let norm: Vec<Rat> = hat.iter().map(|v| t.norm_unit(v)).collect();
    let zero = grp.zero();
    let norm_zero = pseudo_norm(ctx, &zero)?;
    let table = extension_table(ctx, samples, |x, y| vec![grp.add(x, y), grp.sub(x, y)]);
    let norm_of = |g: &GroupElement| t.norm_unit(&table[&g.0]);
    Ok(tally_over(&NORM_PROPERTIES, samples.len(), |i, tally| {
        let x = &samples[i];
        let nx = |k: i64| GroupElement(x.0.iter().map(|c| c * k).collect());
        for k in -3..=3 {
            let lhs = pseudo_norm(ctx, &nx(k)).expect("sample dimension checked");
            let rhs = Rat::from_integer(BigInt::from(k.abs())) * &norm[i];
            tally[2].record(lhs <= rhs, || format!("|{k}·{x}| > {k}·|{x}|"));
        }
        let neg = pseudo_norm(ctx, &grp.neg(x)).expect("sample dimension checked");
        tally[3].record(neg == norm[i] && norm_zero.is_zero(), || format!("|−{x}| ≠ |{x}|"));
        for (j, y) in samples.iter().enumerate() {
            let sum = norm_of(&grp.add(x, y));
            tally[0].record(sum <= &norm[i] + &norm[j], || format!("|{x} + {y}| > |{x}| + |{y}|"));
            let d = norm_of(&grp.sub(x, y));
            let coords_ok = hat[i].iter().zip(&hat[j]).all(|(a, b)| (a - b).abs() <= d);
            tally[1].record(coords_ok, || format!("coordinate of ŝ({x}) − ŝ({y}) exceeds d"));
            if grp.leq(&zero, y) && grp.leq(&grp.neg(y), x) && grp.leq(x, y) {
                tally[4].record(norm[i] <= norm[j], || format!("−{y} ≤ {x} ≤ {y} but |{x}| > |{y}|"));
            }
        }
    }))
}

pub const METRIC_PROPERTIES: [&str; 5] = ["zero_diagonal", "symmetry", "triangle", "factorization", "directedness"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MetricReport {
    pub properties: PropertyReport,
    pub kernel_basis: Vec<Vec<i64>>,
    pub kernel_trivial: bool,
    /// No two distinct samples are at distance 0.
    pub separates_samples: bool,
    /// A pair of distinct samples at distance 0, if any.
    pub zero_distance_pair: Option<(Vec<i64>, Vec<i64>)>,
}

impl MetricReport {
    pub fn is_metric(&self) -> bool {
        self.kernel_trivial
    }

    pub fn all_passed(&self) -> bool {
        self.properties.all_passed()
    }
}

/// Pseudo-metric laws of `d_s` over the samples, factorization of `ŝ`
/// through the kernel subgroup in both directions, and directedness of the
/// image (`ŝ(g) = ŝ(g⁺) − ŝ(g⁻)` with both terms positive and in the image).
pub fn check_metric(ctx: &MetricContext, samples: &[GroupElement]) -> Result<MetricReport> {
    for g in samples {
        ctx.check_dim(g)?;
    }
    let grp = &ctx.group;
    let t = &ctx.target;
    let n = grp.dim();
    let kernel_basis = norm_kernel(ctx);
    let kernel = kernel_lattice(&kernel_basis, n);
    let image = ctx.image_lattice();
    let hat: Vec<RVec> = samples.iter().map(|g| ctx.extend(g)).collect::<Result<_>>()?;
    let table = extension_table(ctx, samples, |x, y| vec![grp.sub(x, y)]);
    let d = |a: &GroupElement, b: &GroupElement| t.norm_unit(&table[&grp.sub(a, b).0]);
    let pivots: Vec<usize> = (0..samples.len()).step_by((samples.len() / 8).max(1)).collect();
    let zero_pairs: Vec<Option<(usize, usize)>> = (0..samples.len())
        .into_par_iter()
        .map(|i| {
            (0..samples.len())
                .find(|&j| j != i && d(&samples[i], &samples[j]).is_zero())
                .map(|j| (i, j))
        })
        .collect();
    let properties = tally_over(&METRIC_PROPERTIES, samples.len(), |i, tally| {
        let x = &samples[i];
        tally[0].record(d(x, x).is_zero(), || format!("d({x},{x}) ≠ 0"));
        for y in samples {
            let dxy = d(x, y);
            tally[1].record(dxy == d(y, x), || format!("d({x},{y}) ≠ d({y},{x})"));
            for &k in &pivots {
                let z = &samples[k];
                tally[2].record(d(x, z) <= &dxy + d(y, z), || format!("d({x},{z}) > d({x},{y}) + d({y},{z})"));
            }
        }
        for (j, y) in samples.iter().enumerate() {
            let in_kernel = kernel.contains(&group_as_rats(&grp.sub(x, y)));
            tally[3].record(in_kernel == (hat[i] == hat[j]), || {
                format!("{x} − {y}: kernel membership {in_kernel} disagrees with ŝ")
            });
        }
        let pos = ctx.extend(&grp.positive_part(x)).expect("sample dimension checked");
        let neg = ctx.extend(&grp.negative_part(x)).expect("sample dimension checked");
        let zero = t.zero();
        let ok = t.leq(&zero, &pos)
            && t.leq(&zero, &neg)
            && t.sub(&pos, &neg) == hat[i]
            && image.contains(&pos)
            && image.contains(&neg);
        tally[4].record(ok, || format!("ŝ({x}) is not a difference of positive image elements"));
    });
    let zero_distance_pair = zero_pairs
        .into_iter()
        .flatten()
        .next()
        .map(|(i, j)| (samples[i].0.clone(), samples[j].0.clone()));
    Ok(MetricReport {
        properties,
        kernel_trivial: kernel_basis.is_empty(),
        kernel_basis,
        separates_samples: zero_distance_pair.is_none(),
        zero_distance_pair,
    })
}

/// Points `x₁, x₂ ≤ y₁, y₂` of the image subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Quadruple {
    #[serde(with = "rational::vec")]
    pub x1: RVec,
    #[serde(with = "rational::vec")]
    pub x2: RVec,
    #[serde(with = "rational::vec")]
    pub y1: RVec,
    #[serde(with = "rational::vec")]
    pub y2: RVec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InterpolantSource {
    Join,
    Meet,
    Search,
}

/// Quadruple from group elements: `xᵢ = ŝ(gᵢ)` and `yᵢ = ŝ((g₁ ∨ g₂) + hᵢ⁺)`.
pub fn quadruple_from_group(
    ctx: &MetricContext,
    g1: &GroupElement,
    g2: &GroupElement,
    h1: &GroupElement,
    h2: &GroupElement,
) -> Result<Quadruple> {
    let grp = &ctx.group;
    let top = grp.join(g1, g2);
    Ok(Quadruple {
        x1: ctx.extend(g1)?,
        x2: ctx.extend(g2)?,
        y1: ctx.extend(&grp.add(&top, &grp.positive_part(h1)))?,
        y2: ctx.extend(&grp.add(&top, &grp.positive_part(h2)))?,
    })
}

/// Deterministic quadruples drawn from a sample by fixed index strides.
pub fn sample_quadruples(ctx: &MetricContext, samples: &[GroupElement], count: usize) -> Result<Vec<Quadruple>> {
    let len = samples.len();
    if len == 0 {
        return Ok(Vec::new());
    }
    (0..count)
        .map(|k| {
            quadruple_from_group(
                ctx,
                &samples[(7 * k) % len],
                &samples[(13 * k + 5) % len],
                &samples[(3 * k + 1) % len],
                &samples[(11 * k + 2) % len],
            )
        })
        .collect()
}

/// Some `z` in the image with `x₁, x₂ ≤ z ≤ y₁, y₂`: first `x₁ ∨ x₂`, then
/// `y₁ ∧ y₂`, then a search of the lattice points in the box between them.
pub fn interpolate(image: &RationalLattice, rep: &RieszRep, q: &Quadruple) -> Option<(RVec, InterpolantSource)> {
    let lo = rep.join(&q.x1, &q.x2);
    let hi = rep.meet(&q.y1, &q.y2);
    if !rep.leq(&lo, &hi) {
        return None;
    }
    if image.contains(&lo) {
        return Some((lo, InterpolantSource::Join));
    }
    if image.contains(&hi) {
        return Some((hi, InterpolantSource::Meet));
    }
    image.point_in_box(&lo, &hi).map(|z| (z, InterpolantSource::Search))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InterpolationReport {
    pub evaluated: usize,
    pub passed: usize,
    pub via_join: usize,
    pub via_meet: usize,
    pub via_search: usize,
    /// First quadruple that is malformed or has no interpolant in the image.
    pub counterexample: Option<Quadruple>,
}

impl InterpolationReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.evaluated
    }
}

pub fn check_interpolation(ctx: &MetricContext, quadruples: &[Quadruple]) -> InterpolationReport {
    let image = ctx.image_lattice();
    let rep = &ctx.target;
    let outcomes: Vec<Option<InterpolantSource>> = quadruples
        .par_iter()
        .map(|q| {
            let points = [&q.x1, &q.x2, &q.y1, &q.y2];
            let well_formed = points.iter().all(|p| p.len() == rep.dim() && image.contains(p))
                && [&q.y1, &q.y2].iter().all(|y| rep.leq(&q.x1, y) && rep.leq(&q.x2, y));
            if !well_formed {
                return None;
            }
            let (z, via) = interpolate(&image, rep, q)?;
            let between = [&q.x1, &q.x2].iter().all(|x| rep.leq(x, &z))
                && [&q.y1, &q.y2].iter().all(|y| rep.leq(&z, y))
                && image.contains(&z);
            between.then_some(via)
        })
        .collect();
    let mut report = InterpolationReport {
        evaluated: quadruples.len(),
        passed: 0,
        via_join: 0,
        via_meet: 0,
        via_search: 0,
        counterexample: None,
    };
    for (q, o) in quadruples.iter().zip(outcomes) {
        match o {
            Some(via) => {
                report.passed += 1;
                match via {
                    InterpolantSource::Join => report.via_join += 1,
                    InterpolantSource::Meet => report.via_meet += 1,
                    InterpolantSource::Search => report.via_search += 1,
                }
            }
            None if report.counterexample.is_none() => report.counterexample = Some(q.clone()),
            None => {}
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PmvAlgebra;
    use crate::rational::{int, rat};

    fn square() -> FiniteAlgebra {
        PmvAlgebra::gamma(UnitalGroup::zn(&[2, 2]).unwrap()).finite(64).unwrap()
    }

    /// `s(x) = (x₁/2, x₂/2)` or `(x₁/2, x₁/2)` on `Γ(ℤ²,(2,2))`.
    fn square_state(fa: &FiniteAlgebra, collapse: bool) -> RState {
        let values = fa
            .elements()
            .iter()
            .map(|e| {
                let c = e.chain_coords().unwrap();
                let second = if collapse { c[0] } else { c[1] };
                vec![rat(c[0], 2), rat(second, 2)]
            })
            .collect();
        RState::new(fa, RieszRep::qn(2), values).unwrap()
    }

    fn g(c: &[i64]) -> GroupElement {
        GroupElement::new(c)
    }

    #[test]
    fn extension_of_chain_state() {
        let fa = PmvAlgebra::chain(2).finite(64).unwrap();
        let s = RState::real(&fa, &[int(0), rat(1, 2), int(1)]).unwrap();
        let ctx = extend_state(&fa, &s).unwrap();
        let (pos, neg) = ctx.slices(&g(&[5])).unwrap();
        assert_eq!(pos, vec![g(&[2]), g(&[2]), g(&[1])]);
        assert!(neg.is_empty());
        assert_eq!(ctx.extend(&g(&[5])).unwrap(), vec![rat(5, 2)]);
        assert_eq!(ctx.extend(&g(&[-5])).unwrap(), vec![rat(-5, 2)]);
        assert_eq!(ctx.extend(&g(&[2])).unwrap(), vec![int(1)]);
        assert!(norm_kernel(&ctx).is_empty());
    }

    #[test]
    fn non_interval_algebras_are_rejected() {
        let lex = PmvAlgebra::gamma(UnitalGroup::z2lex([1, 0]).unwrap());
        let fa = PmvAlgebra::chain(1).finite(64).unwrap();
        let table = FiniteAlgebra::from_cayley(fa.table().clone());
        let s = RState::real(&table, &[int(0), int(1)]).unwrap();
        assert!(matches!(extend_state(&table, &s), Err(Error::Unsupported(_))));
        assert!(lex.finite(64).is_err());
    }

    #[test]
    fn norm_and_distance_examples() {
        let fa = square();
        let ctx = extend_state(&fa, &square_state(&fa, false)).unwrap();
        assert_eq!(pseudo_norm(&ctx, &g(&[1, 2])).unwrap(), int(1));
        assert_eq!(pseudo_norm(&ctx, &g(&[0, 0])).unwrap(), int(0));
        assert_eq!(dist(&ctx, &g(&[3, -1]), &g(&[3, -1])).unwrap(), int(0));
        assert_eq!(dist(&ctx, &g(&[3, -1]), &g(&[0, 0])).unwrap(), rat(3, 2));
        assert!(norm_kernel(&ctx).is_empty());
        let x = g(&[1, -3]);
        let lhs = pseudo_norm(&ctx, &g(&[-2, 6])).unwrap();
        assert_eq!(lhs, int(2) * pseudo_norm(&ctx, &x).unwrap());
    }

    #[test]
    fn collapsed_state_has_kernel_spanned_by_second_axis() {
        let fa = square();
        let ctx = extend_state(&fa, &square_state(&fa, true)).unwrap();
        assert_eq!(norm_kernel(&ctx), vec![vec![0, 1]]);
        assert_eq!(dist(&ctx, &g(&[1, 5]), &g(&[1, -2])).unwrap(), int(0));
        let report = check_metric(&ctx, &ctx.grid(1)).unwrap();
        assert!(report.all_passed(), "{report:?}");
        assert!(!report.is_metric() && !report.separates_samples);
    }

    #[test]
    fn kernel_of_a_mixed_state() {
        // s(x) = x₁/4 + x₂/6 on Γ(ℤ²,(2,3)) vanishes on ℤ(2,−3).
        let fa = PmvAlgebra::gamma(UnitalGroup::zn(&[2, 3]).unwrap()).finite(64).unwrap();
        let values: Vec<Rat> = fa
            .elements()
            .iter()
            .map(|e| {
                let c = e.chain_coords().unwrap();
                rat(c[0], 4) + rat(c[1], 6)
            })
            .collect();
        let ctx = extend_state(&fa, &RState::real(&fa, &values).unwrap()).unwrap();
        assert_eq!(norm_kernel(&ctx), vec![vec![2, -3]]);
    }

    #[test]
    fn properties_hold_on_a_small_grid() {
        let fa = square();
        let ctx = extend_state(&fa, &square_state(&fa, false)).unwrap();
        let grid = ctx.grid(1);
        let r = check_norm_properties(&ctx, &grid).unwrap();
        assert!(r.all_passed(), "{r:?}");
        assert!(r.get("monotone").evaluated > 0);
        let m = check_metric(&ctx, &grid).unwrap();
        assert!(m.all_passed() && m.is_metric() && m.separates_samples);
    }

    #[test]
    fn interpolation_examples() {
        let image = RationalLattice::generated_by(&[vec![rat(1, 2), int(0)], vec![int(0), rat(1, 2)]], 2);
        let q = Quadruple {
            x1: vec![int(0), int(0)],
            x2: vec![rat(1, 2), rat(-1, 2)],
            y1: vec![rat(1, 2), rat(1, 2)],
            y2: vec![int(1), int(0)],
        };
        let rep = RieszRep::qn(2);
        assert_eq!(
            interpolate(&image, &rep, &q),
            Some((vec![rat(1, 2), int(0)], InterpolantSource::Join))
        );
        let degenerate = Quadruple {
            x1: vec![int(1), int(1)],
            x2: vec![int(0), int(0)],
            y1: vec![int(1), int(1)],
            y2: vec![int(2), int(1)],
        };
        assert_eq!(interpolate(&image, &rep, &degenerate).unwrap().0, vec![int(1), int(1)]);

        let fa = PmvAlgebra::chain(3).finite(64).unwrap();
        let s = RState::real(&fa, &[int(0), rat(1, 3), rat(2, 3), int(1)]).unwrap();
        let ctx = extend_state(&fa, &s).unwrap();
        let grid = ctx.grid(2);
        let quads = sample_quadruples(&ctx, &grid, 30).unwrap();
        let r = check_interpolation(&ctx, &quads);
        assert!(r.all_passed());
        assert_eq!(r.via_join, 30);
    }

    #[test]
    fn malformed_quadruples_are_reported() {
        let fa = square();
        let ctx = extend_state(&fa, &square_state(&fa, false)).unwrap();
        let bad = Quadruple {
            x1: vec![int(1), int(0)],
            x2: vec![int(0), int(0)],
            y1: vec![int(0), int(0)],
            y2: vec![int(1), int(1)],
        };
        let off_lattice = Quadruple {
            x1: vec![rat(1, 3), int(0)],
            x2: vec![int(0), int(0)],
            y1: vec![int(1), int(1)],
            y2: vec![int(1), int(1)],
        };
        let r = check_interpolation(&ctx, &[bad.clone(), off_lattice]);
        assert_eq!((r.evaluated, r.passed), (2, 0));
        assert_eq!(r.counterexample, Some(bad));
    }
}
