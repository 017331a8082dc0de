//! Job files: parsing and validation.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use pmv_core::algebra::PmvAlgebra;
use pmv_core::ordered::{GroupKind, RieszRep};
use pmv_core::rational::{self, RVec, Rat};
use pmv_core::schema::AlgebraSpec;

pub const JOB_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Analysis {
    Axioms,
    Ideals,
    States,
    Morphisms,
    Jordan,
    Metric,
    Simplex,
}

impl Analysis {
    pub fn name(self) -> &'static str {
        match self {
            Analysis::Axioms => "axioms",
            Analysis::Ideals => "ideals",
            Analysis::States => "states",
            Analysis::Morphisms => "morphisms",
            Analysis::Jordan => "jordan",
            Analysis::Metric => "metric",
            Analysis::Simplex => "simplex",
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RieszSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qn: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lexq2: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Caps {
    pub max_carrier: usize,
    pub max_dim: usize,
    pub sample_bound: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_carrier: 64,
            max_dim: 12,
            sample_bound: 25,
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub b: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    #[serde(default = "default_version")]
    pub version: u32,
    pub algebra: AlgebraSpec,
    pub riesz: RieszSpec,
    pub analyses: Vec<Analysis>,
    #[serde(default)]
    pub caps: Caps,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub family: Option<FamilySpec>,
    /// Values of a state, one vector per carrier element in canonical order.
    #[serde(default)]
    pub state: Option<Vec<Vec<String>>>,
}

fn default_version() -> u32 {
    JOB_VERSION
}

/// A malformed job, located by its field path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecError {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for SpecError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invalid job at `{}`: {}", self.field, self.message)
    }
}

fn err(field: impl Into<String>, message: impl Into<String>) -> SpecError {
    SpecError {
        field: field.into(),
        message: message.into(),
    }
}

/// A validated job.
#[derive(Clone, Debug)]
pub struct Job {
    pub algebra: PmvAlgebra,
    pub rep: RieszRep,
    pub analyses: Vec<Analysis>,
    pub caps: Caps,
    pub output: OutputSpec,
    pub family: Option<Rat>,
    pub state: Option<Vec<RVec>>,
}

pub fn parse(text: &str) -> Result<JobSpec, SpecError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let field = if path == "." { "job".to_string() } else { path };
        err(field, e.into_inner().to_string())
    })
}

fn is_lex_interval(alg: &PmvAlgebra) -> bool {
    matches!(alg, PmvAlgebra::Gamma(g) if g.kind() == GroupKind::Z2Lex && g.unit().0 == [1, 0])
}

pub fn validate(spec: JobSpec) -> Result<Job, SpecError> {
    if spec.version != JOB_VERSION {
        return Err(err("version", format!("unsupported version {}, expected {JOB_VERSION}", spec.version)));
    }
    let caps = spec.caps;
    for (name, v) in [
        ("caps.max_carrier", caps.max_carrier),
        ("caps.max_dim", caps.max_dim),
        ("caps.sample_bound", caps.sample_bound),
    ] {
        if v == 0 {
            return Err(err(name, "must be positive"));
        }
    }
    if spec.analyses.is_empty() {
        return Err(err("analyses", "at least one analysis is required"));
    }
    let algebra = spec.algebra.build("algebra").map_err(|e| match e {
        pmv_core::Error::InvalidSpec { field, message } => err(field, message),
        other => err("algebra", other.to_string()),
    })?;
    let rep = match (spec.riesz.qn, spec.riesz.lexq2) {
        (Some(0), None) => return Err(err("riesz.qn", "must be positive")),
        (Some(n), None) => RieszRep::qn(n),
        (None, Some(true)) => RieszRep::lex_q2(),
        (None, Some(false)) => return Err(err("riesz.lexq2", "must be true when given")),
        _ => return Err(err("riesz", "give exactly one of {\"qn\": n} or {\"lexq2\": true}")),
    };
    let lex = spec.riesz.lexq2.is_some();
    if lex && !is_lex_interval(&algebra) {
        return Err(err("riesz.lexq2", "the lexicographic target is supported for Γ(ℤ lex ℤ,(1,0)) only"));
    }
    let family = match &spec.family {
        None => None,
        Some(f) => {
            if !lex {
                return Err(err("family", "family states need the lexq2 target"));
            }
            let b = rational::parse(&f.b).ok_or_else(|| err("family.b", format!("`{}` is not a rational", f.b)))?;
            if b < Rat::from_integer(0.into()) {
                return Err(err("family.b", "must be nonnegative"));
            }
            Some(b)
        }
    };
    let finite = algebra.is_finite();
    let state = match &spec.state {
        None => None,
        Some(rows) => {
            if !finite || lex {
                return Err(err("state", "explicit states need a finite algebra and a ℚⁿ target"));
            }
            let mut out = Vec::with_capacity(rows.len());
            for (i, row) in rows.iter().enumerate() {
                if row.len() != rep.dim() {
                    return Err(err(format!("state[{i}]"), format!("expected {} coordinates", rep.dim())));
                }
                let mut v = Vec::with_capacity(row.len());
                for (j, text) in row.iter().enumerate() {
                    v.push(
                        rational::parse(text)
                            .ok_or_else(|| err(format!("state[{i}][{j}]"), format!("`{text}` is not a rational")))?,
                    );
                }
                out.push(v);
            }
            Some(out)
        }
    };

    for (i, &a) in spec.analyses.iter().enumerate() {
        let field = format!("analyses[{i}]");
        let ok = match a {
            Analysis::Axioms => true,
            Analysis::States if lex => family.is_some(),
            _ if lex || !finite => false,
            Analysis::Metric => algebra.chain_factors().is_some(),
            _ => true,
        };
        if !ok {
            let reason = match a {
                Analysis::States => "the lexq2 target needs a \"family\" parameter".to_string(),
                Analysis::Metric if finite && !lex => "the metric needs an interval of ℤⁿ or a product of chains".into(),
                _ => format!("{} needs a finite algebra and a ℚⁿ target", a.name()),
            };
            return Err(err(field, reason));
        }
    }
    let mut analyses = spec.analyses.clone();
    analyses.sort_unstable();
    analyses.dedup();

    Ok(Job {
        algebra,
        rep,
        analyses,
        caps,
        output: spec.output,
        family,
        state,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(json: &str) -> Result<Job, SpecError> {
        validate(parse(json)?)
    }

    #[test]
    fn valid_chain_job() {
        let job = check(r#"{"algebra":{"kind":"chain","k":2},"riesz":{"qn":1},"analyses":["states","axioms","states"]}"#)
            .unwrap();
        assert_eq!(job.analyses, vec![Analysis::Axioms, Analysis::States]);
        assert_eq!(job.caps, Caps::default());
    }

    #[test]
    fn errors_name_the_field() {
        let cases = [
            (r#"{"algebra":{"kind":"chain","k":2},"riesz":{"qn":1},"analyses":["states","bogus"]}"#, "analyses[1]"),
            (r#"{"algebra":{"kind":"chain","k":2},"riesz":{"qn":1},"analyses":[]}"#, "analyses"),
            (r#"{"algebra":{"kind":"chain","k":2},"riesz":{"qn":0},"analyses":["axioms"]}"#, "riesz.qn"),
            (r#"{"algebra":{"kind":"chain","k":2},"riesz":{},"analyses":["axioms"]}"#, "riesz"),
            (
                r#"{"algebra":{"kind":"chain","k":2},"riesz":{"qn":1},"analyses":["axioms"],"caps":{"max_dim":0}}"#,
                "caps.max_dim",
            ),
            (r#"{"algebra":{"kind":"chain","k":0},"riesz":{"qn":1},"analyses":["axioms"]}"#, "algebra.k"),
            (r#"{"algebra":{"kind":"chain","k":2},"riesz":{"qn":1},"analyses":["axioms"],"extra":1}"#, "extra"),
            (
                r#"{"algebra":{"kind":"gamma","group":"z2lex","unit":[1,0]},"riesz":{"lexq2":true},"analyses":["states"]}"#,
                "analyses[0]",
            ),
            (
                r#"{"algebra":{"kind":"gamma","group":"z2lex","unit":[1,0]},"riesz":{"qn":1},"analyses":["ideals"]}"#,
                "analyses[0]",
            ),
            (
                r#"{"algebra":{"kind":"chain","k":2},"riesz":{"qn":1},"analyses":["states"],"state":[["0"],["x"],["1"]]}"#,
                "state[1][0]",
            ),
        ];
        for (json, field) in cases {
            let e = check(json).unwrap_err();
            assert_eq!(e.field, field, "{json}: {e}");
        }
    }

    #[test]
    fn family_parameter_is_parsed() {
        let job = check(
            r#"{"algebra":{"kind":"gamma","group":"z2lex","unit":[1,0]},"riesz":{"lexq2":true},"analyses":["states"],"family":{"b":"7/3"}}"#,
        )
        .unwrap();
        assert_eq!(job.family, Some(rational::rat(7, 3)));
    }
}
