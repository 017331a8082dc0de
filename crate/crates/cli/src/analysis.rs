//! Runs the requested analyses and assembles the report.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use pmv_core::algebra::{sampled_axiom_check, AxiomReport, FiniteAlgebra};
use pmv_core::ideal::{all_ideals, classify_ideal, quotient};
use pmv_core::jordan::{jordan_decompose, lattice_ops, lub_oracle, measure_basis, simplex_report, LatticeOp, SignedMeasure};
use pmv_core::metric::{check_interpolation, check_metric, check_norm_properties, extend_state, sample_quadruples};
use pmv_core::ordered::GroupElement;
use pmv_core::polytope::StatePolytope;
use pmv_core::rational::{self, RVec, Rat};
use pmv_core::state::{
    classify_family_state, classify_r_state, convex_decompose, enumerate_r_morphisms, family_identities, kernel,
    state_identities, IdentityReport, RState,
};
use pmv_core::Error;

use crate::job::{Analysis, Job};

/// Upper limits on enumerations that have no job-level cap.
pub const IDEAL_CAP: usize = 4096;
pub const MORPHISM_CAP: usize = 100_000;
/// Largest grid of group elements used by the metric analysis.
pub const METRIC_GRID_CAP: usize = 1024;
pub const INTERPOLATION_SAMPLES: usize = 100;

/// Result of one analysis: its report section, property failures, and CSV
/// tables keyed by file name.
#[derive(Debug, Default)]
pub struct Section {
    pub value: Value,
    pub failures: Vec<String>,
    pub tables: BTreeMap<String, Vec<Vec<String>>>,
}

fn strs(v: &[Rat]) -> Vec<String> {
    rational::vec_to_strings(v)
}

fn table_values(values: &[RVec]) -> Value {
    json!(values.iter().map(|v| strs(v)).collect::<Vec<_>>())
}

fn axiom_section(report: &AxiomReport, exhaustive: bool) -> Section {
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| json!({"axiom": c.axiom.name(), "passed": c.passed, "witness": c.witness}))
        .collect();
    let failures = report
        .failures()
        .map(|c| match &c.witness {
            Some(w) => format!("{} fails at ({})", c.axiom.name(), w.join(", ")),
            None => format!("{} fails", c.axiom.name()),
        })
        .collect();
    Section {
        value: json!({"exhaustive": exhaustive, "evaluated": report.evaluated, "all_passed": report.all_passed(), "checks": checks}),
        failures,
        tables: BTreeMap::new(),
    }
}

pub fn axioms(job: &Job, fa: Option<&FiniteAlgebra>) -> Result<Section, Error> {
    match fa {
        Some(fa) => Ok(axiom_section(&fa.check_axioms(), true)),
        None => {
            let sample = job.algebra.sample(job.caps.sample_bound);
            Ok(axiom_section(&sampled_axiom_check(&job.algebra, &sample)?, false))
        }
    }
}

fn ideals(fa: &FiniteAlgebra) -> Result<Section, Error> {
    let list = all_ideals(fa, IDEAL_CAP)?;
    let entries: Vec<Value> = list
        .iter()
        .map(|i| {
            let class = classify_ideal(fa, i);
            let quotient_size = if class.is_normal && i.len() < fa.len() {
                Some(quotient(fa, i)?.algebra.len())
            } else {
                None
            };
            Ok(json!({
                "members": i.labels(fa),
                "normal": class.is_normal,
                "maximal": class.is_maximal,
                "quotient_size": quotient_size,
            }))
        })
        .collect::<Result<_, Error>>()?;
    let maximal = list.iter().filter(|i| classify_ideal(fa, i).is_maximal).count();
    Ok(Section {
        value: json!({"count": list.len(), "maximal_count": maximal, "ideals": entries}),
        ..Section::default()
    })
}

fn identity_failures(what: &str, r: &IdentityReport) -> Vec<String> {
    r.checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| match &c.witness {
            Some(w) => format!("{what}: identity ({}) fails at ({})", c.name, w.join(", ")),
            None => format!("{what}: identity ({}) fails", c.name),
        })
        .collect()
}

fn states(job: &Job, fa: Option<&FiniteAlgebra>) -> Result<Section, Error> {
    let Some(fa) = fa else {
        let b = job.family.clone().expect("validated family parameter");
        let s = RState::lex_family(b.clone())?;
        let sample = job.algebra.sample(job.caps.sample_bound);
        let ids = family_identities(&job.algebra, &s, &sample)?;
        let class = classify_family_state(&job.algebra, &s, &sample, job.caps.sample_bound)?;
        return Ok(Section {
            value: json!({
                "family": {"b": rational::to_string(&b)},
                "sample_size": sample.len(),
                "identities": ids,
                "classification": class,
            }),
            failures: identity_failures("family state", &ids),
            tables: BTreeMap::new(),
        });
    };
    let poly = StatePolytope::new(fa);
    let verts = poly.enumerate_vertices(job.caps.max_dim)?;
    let mut failures = Vec::new();
    let mut vertex_entries = Vec::new();
    let mut rows = Vec::new();
    for (i, v) in verts.iter().enumerate() {
        let s = RState::real(fa, v)?;
        let ids = state_identities(fa, &s);
        failures.extend(identity_failures(&format!("vertex {i}"), &ids));
        let class = classify_r_state(fa, &s, &verts)?;
        vertex_entries.push(json!({"values": strs(v), "classification": class, "identities_hold": ids.all_passed()}));
        for (x, val) in v.iter().enumerate() {
            rows.push(vec![i.to_string(), fa.label(x).to_string(), rational::to_string(val)]);
        }
    }
    let mut value = json!({
        "polytope_dimension": poly.dimension(),
        "empty": poly.is_empty(),
        "equalities": poly.equalities().len(),
        "vertex_count": verts.len(),
        "vertices": vertex_entries,
        "target_dimension": job.rep.dim(),
    });
    if let Some(values) = &job.state {
        let s = RState::new(fa, job.rep.clone(), values.clone())?;
        let ids = state_identities(fa, &s);
        failures.extend(identity_failures("given state", &ids));
        let class = classify_r_state(fa, &s, &verts)?;
        let extremal = enumerate_r_morphisms(fa, job.rep.dim(), MORPHISM_CAP)?;
        let weights = convex_decompose(fa, &s, &extremal)?;
        let decomposition: Vec<Value> = weights
            .iter()
            .zip(&extremal)
            .filter(|(w, _)| **w != Rat::from_integer(0.into()))
            .map(|(w, e)| json!({"weight": rational::to_string(w), "morphism": table_values(e.values().unwrap())}))
            .collect();
        value["given_state"] = json!({
            "classification": class,
            "identities": ids,
            "decomposition": decomposition,
        });
    }
    let mut tables = BTreeMap::new();
    let mut csv = vec![vec!["vertex".into(), "element".into(), "value".into()]];
    csv.extend(rows);
    tables.insert("vertices.csv".to_string(), csv);
    Ok(Section { value, failures, tables })
}

fn morphisms(job: &Job, fa: &FiniteAlgebra) -> Result<Section, Error> {
    let m = job.rep.dim();
    let list = enumerate_r_morphisms(fa, m, MORPHISM_CAP)?;
    let mut entries = Vec::with_capacity(list.len());
    let mut rows = vec![vec!["morphism".into(), "element".into(), "coordinate".into(), "value".into()]];
    for (i, s) in list.iter().enumerate() {
        let ker = kernel(fa, s);
        let class = classify_ideal(fa, &ker);
        entries.push(json!({
            "values": table_values(s.values().unwrap()),
            "kernel": ker.labels(fa),
            "kernel_maximal": class.is_maximal,
        }));
        for x in 0..fa.len() {
            for (j, v) in s.value(x).iter().enumerate() {
                rows.push(vec![i.to_string(), fa.label(x).to_string(), j.to_string(), rational::to_string(v)]);
            }
        }
    }
    let mut tables = BTreeMap::new();
    tables.insert("morphisms.csv".to_string(), rows);
    tables.insert(
        "morphism_counts.csv".to_string(),
        vec![
            vec!["algebra".into(), "carrier_size".into(), "target_dim".into(), "count".into()],
            vec![job.algebra.name(), fa.len().to_string(), m.to_string(), list.len().to_string()],
        ],
    );
    Ok(Section {
        value: json!({"target_dimension": m, "count": list.len(), "morphisms": entries}),
        failures: Vec::new(),
        tables,
    })
}

/// Test measures built from the basis of additive maps: coordinate `j` of
/// measure `i` is `(−1)ʲ·basis[(i+j) mod d]`.
fn basis_measures(fa: &FiniteAlgebra, n: usize) -> Result<Vec<SignedMeasure>, Error> {
    let basis = measure_basis(fa);
    let d = basis.len();
    (0..d)
        .map(|i| {
            let comps: Vec<RVec> = (0..n)
                .map(|j| {
                    let b = &basis[(i + j) % d];
                    if j % 2 == 0 {
                        b.clone()
                    } else {
                        b.iter().map(|v| -v).collect()
                    }
                })
                .collect();
            SignedMeasure::from_components(fa, &comps)
        })
        .collect()
}

fn jordan(job: &Job, fa: &FiniteAlgebra) -> Result<Section, Error> {
    let n = job.rep.dim();
    let measures = basis_measures(fa, n)?;
    let mut failures = Vec::new();
    let mut pairs = 0;
    for (i, a) in measures.iter().enumerate() {
        for (j, b) in measures.iter().enumerate().skip(i + 1) {
            let sup = lattice_ops(fa, a, b, LatticeOp::Sup)?;
            let oracle = lub_oracle(fa, a, b)?;
            if sup != oracle {
                failures.push(format!("supremum of measures {i} and {j} differs from the LP least upper bound"));
            }
            pairs += 1;
        }
    }
    let zero = SignedMeasure::zero(fa, job.rep.clone());
    let mut decompositions = Vec::new();
    for (i, m) in measures.iter().enumerate() {
        let (p, q) = jordan_decompose(fa, m)?;
        if lattice_ops(fa, &p, &q, LatticeOp::Inf)? != zero {
            failures.push(format!("measure {i}: positive and negative parts are not disjoint"));
        }
        decompositions.push(json!({
            "measure": table_values(m.values()),
            "positive": table_values(p.values()),
            "negative": table_values(q.values()),
        }));
    }
    Ok(Section {
        value: json!({
            "measure_space_dimension": measures.len(),
            "pairs_checked": pairs,
            "sup_matches_lp": failures.is_empty(),
            "decompositions": decompositions,
        }),
        failures,
        tables: BTreeMap::new(),
    })
}

/// Half-widths of the metric grid per axis: at most `2uᵢ` and the sample
/// bound, shrunk until the grid has at most [`METRIC_GRID_CAP`] points.
fn metric_half_widths(unit: &[i64], sample_bound: usize) -> Vec<i64> {
    let per_axis = ((sample_bound as i64) - 1) / 2;
    let mut h: Vec<i64> = unit.iter().map(|&u| (2 * u).min(per_axis).max(0)).collect();
    let size = |h: &[i64]| h.iter().fold(1u128, |acc, &x| acc * (2 * x as u128 + 1));
    while size(&h) > METRIC_GRID_CAP as u128 {
        let i = (0..h.len()).max_by_key(|&i| (h[i], std::cmp::Reverse(i))).unwrap();
        h[i] -= 1;
    }
    h
}

fn metric(job: &Job, fa: &FiniteAlgebra) -> Result<Section, Error> {
    let state = match &job.state {
        Some(values) => RState::new(fa, job.rep.clone(), values.clone())?,
        None => {
            let verts = StatePolytope::new(fa).enumerate_vertices(job.caps.max_dim)?;
            if verts.is_empty() {
                return Err(Error::InvalidState("the algebra has no states".into()));
            }
            let w = Rat::new(1.into(), (verts.len() as i64).into());
            let bary = pmv_core::polytope::convex_combination(&verts, &vec![w; verts.len()]);
            RState::from_components(fa, &vec![bary; job.rep.dim()])?
        }
    };
    let ctx = extend_state(fa, &state)?;
    let h = metric_half_widths(&ctx.group().unit().0, job.caps.sample_bound);
    let mut grid: Vec<Vec<i64>> = vec![Vec::new()];
    for &w in &h {
        grid = grid
            .into_iter()
            .flat_map(|p| {
                (-w..=w).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    let grid: Vec<GroupElement> = grid.into_iter().map(GroupElement).collect();
    let norms = check_norm_properties(&ctx, &grid)?;
    let metric = check_metric(&ctx, &grid)?;
    let quads = sample_quadruples(&ctx, &grid, INTERPOLATION_SAMPLES)?;
    let interp = check_interpolation(&ctx, &quads);
    let mut failures = Vec::new();
    for p in norms.properties.iter().chain(&metric.properties.properties) {
        if !p.all_passed() {
            failures.push(format!(
                "property {} fails: {}",
                p.name,
                p.counterexample.clone().unwrap_or_default()
            ));
        }
    }
    if metric.is_metric() != metric.separates_samples {
        failures.push("metric verdict disagrees with separation of the samples".into());
    }
    if !interp.all_passed() {
        failures.push("interpolation fails on a sampled quadruple".into());
    }
    Ok(Section {
        value: json!({
            "state": table_values(state.values().unwrap()),
            "grid": {"half_widths": h, "points": grid.len()},
            "kernel_basis": metric.kernel_basis,
            "is_metric": metric.is_metric(),
            "norm_properties": norms,
            "metric_properties": metric.properties,
            "separates_samples": metric.separates_samples,
            "zero_distance_pair": metric.zero_distance_pair,
            "interpolation": interp,
        }),
        failures,
        tables: BTreeMap::new(),
    })
}

fn simplex(job: &Job, fa: &FiniteAlgebra) -> Result<Section, Error> {
    let r = simplex_report(fa, &job.rep, job.caps.max_dim)?;
    let failures = if r.empty {
        vec!["the state space is empty".to_string()]
    } else {
        Vec::new()
    };
    Ok(Section {
        value: serde_json::to_value(&r).expect("serializable report"),
        failures,
        tables: BTreeMap::new(),
    })
}

pub fn run_one(job: &Job, fa: Option<&FiniteAlgebra>, a: Analysis) -> Result<Section, Error> {
    let need = || fa.ok_or_else(|| Error::Unsupported(format!("{} needs a finite algebra", a.name())));
    match a {
        Analysis::Axioms => axioms(job, fa),
        Analysis::Ideals => ideals(need()?),
        Analysis::States => states(job, fa),
        Analysis::Morphisms => morphisms(job, need()?),
        Analysis::Jordan => jordan(job, need()?),
        Analysis::Metric => metric(job, need()?),
        Analysis::Simplex => simplex(job, need()?),
    }
}

/// Runs every analysis concurrently; results keep the canonical order.
pub fn run_all(job: &Job, fa: Option<&FiniteAlgebra>) -> Vec<(Analysis, Result<Section, Error>)> {
    job.analyses.par_iter().map(|&a| (a, run_one(job, fa, a))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_widths_respect_caps() {
        assert_eq!(metric_half_widths(&[2, 2], 25), vec![4, 4]);
        assert_eq!(metric_half_widths(&[20], 25), vec![12]);
        let h = metric_half_widths(&[3, 3, 3], 25);
        assert!(h.iter().map(|&x| 2 * x + 1).product::<i64>() <= METRIC_GRID_CAP as i64);
    }
}
