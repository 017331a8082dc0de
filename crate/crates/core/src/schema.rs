//! JSON descriptions of algebras.
//!
//! ```json
//! {"kind":"table","carrier":["0","a","b","1"],"oplus":[[...]],"neg_minus":[...],"neg_tilde":[...],"zero":"0","one":"1"}
//! {"kind":"gamma","group":"zn","n":2,"unit":[2,2]}
//! {"kind":"chain","k":3}
//! {"kind":"product","factors":[...]}
//! ```
//!
//! Table entries name carrier members by label; a bare integer is read as a
//! carrier index.

use serde::{Deserialize, Serialize};

use crate::algebra::{CayleyTable, FiniteAlgebra, PmvAlgebra};
use crate::error::{Error, Result};
use crate::ordered::{GroupKind, UnitalGroup};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Label(String),
    Index(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum AlgebraSpec {
    Table {
        carrier: Vec<String>,
        oplus: Vec<Vec<Entry>>,
        neg_minus: Vec<Entry>,
        neg_tilde: Vec<Entry>,
        zero: Entry,
        one: Entry,
    },
    Gamma {
        group: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        unit: Vec<i64>,
    },
    Chain {
        k: i64,
    },
    Product {
        factors: Vec<AlgebraSpec>,
    },
}

impl AlgebraSpec {
    /// Builds the algebra; `field` prefixes error locations.
    pub fn build(&self, field: &str) -> Result<PmvAlgebra> {
        match self {
            AlgebraSpec::Table {
                carrier,
                oplus,
                neg_minus,
                neg_tilde,
                zero,
                one,
            } => {
                let n = carrier.len();
                if n == 0 {
                    return Err(Error::spec(format!("{field}.carrier"), "carrier is empty"));
                }
                for (i, label) in carrier.iter().enumerate() {
                    if carrier[..i].contains(label) {
                        return Err(Error::spec(format!("{field}.carrier"), format!("duplicate label {label:?}")));
                    }
                }
                let resolve = |entry: &Entry, at: String| -> Result<usize> {
                    match entry {
                        Entry::Index(i) if *i < n => Ok(*i),
                        Entry::Index(i) => Err(Error::spec(at, format!("index {i} outside the carrier"))),
                        Entry::Label(l) => carrier
                            .iter()
                            .position(|c| c == l)
                            .ok_or_else(|| Error::spec(at, format!("unknown element {l:?}"))),
                    }
                };
                if oplus.len() != n {
                    return Err(Error::spec(
                        format!("{field}.oplus"),
                        format!("expected {n} rows, found {}", oplus.len()),
                    ));
                }
                let mut table = Vec::with_capacity(n);
                for (i, row) in oplus.iter().enumerate() {
                    if row.len() != n {
                        return Err(Error::spec(
                            format!("{field}.oplus[{i}]"),
                            format!("expected {n} entries, found {} (table is not square)", row.len()),
                        ));
                    }
                    table.push(
                        row.iter()
                            .enumerate()
                            .map(|(j, e)| resolve(e, format!("{field}.oplus[{i}][{j}]")))
                            .collect::<Result<Vec<_>>>()?,
                    );
                }
                let unary = |entries: &[Entry], name: &str| -> Result<Vec<usize>> {
                    if entries.len() != n {
                        return Err(Error::spec(
                            format!("{field}.{name}"),
                            format!("expected {n} entries, found {}", entries.len()),
                        ));
                    }
                    entries
                        .iter()
                        .enumerate()
                        .map(|(i, e)| resolve(e, format!("{field}.{name}[{i}]")))
                        .collect()
                };
                let nm = unary(neg_minus, "neg_minus")?;
                let nt = unary(neg_tilde, "neg_tilde")?;
                let z = resolve(zero, format!("{field}.zero"))?;
                let o = resolve(one, format!("{field}.one"))?;
                if z == o {
                    return Err(Error::spec(format!("{field}.one"), "0 and 1 coincide"));
                }
                let t = CayleyTable::new(carrier.clone(), table, nm, nt, z, o)
                    .map_err(|e| Error::spec(field.to_string(), e.to_string()))?;
                Ok(PmvAlgebra::table(t))
            }
            AlgebraSpec::Gamma { group, n, unit } => {
                let grp = match group.as_str() {
                    "zn" => {
                        if let Some(n) = n {
                            if *n != unit.len() {
                                return Err(Error::spec(
                                    format!("{field}.unit"),
                                    format!("expected {n} coordinates, found {}", unit.len()),
                                ));
                            }
                        }
                        if unit.is_empty() {
                            return Err(Error::spec(format!("{field}.unit"), "unit is empty"));
                        }
                        UnitalGroup::zn(unit)
                    }
                    "z2lex" => {
                        if unit.len() != 2 || n.is_some_and(|n| n != 2) {
                            return Err(Error::spec(format!("{field}.unit"), "z2lex needs a unit with 2 coordinates"));
                        }
                        UnitalGroup::z2lex([unit[0], unit[1]])
                    }
                    other => {
                        return Err(Error::spec(format!("{field}.group"), format!("unknown group {other:?}")));
                    }
                };
                grp.map(PmvAlgebra::gamma)
                    .map_err(|e| Error::spec(format!("{field}.unit"), e.to_string()))
            }
            AlgebraSpec::Chain { k } => {
                if *k < 1 {
                    return Err(Error::spec(format!("{field}.k"), "k must be ≥ 1"));
                }
                Ok(PmvAlgebra::chain(*k))
            }
            AlgebraSpec::Product { factors } => {
                if factors.is_empty() {
                    return Err(Error::spec(format!("{field}.factors"), "product needs at least one factor"));
                }
                let built = factors
                    .iter()
                    .enumerate()
                    .map(|(i, f)| f.build(&format!("{field}.factors[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                Ok(PmvAlgebra::product(built))
            }
        }
    }

    /// Spec describing `alg`; table specs use labels.
    pub fn describe(alg: &PmvAlgebra) -> AlgebraSpec {
        match alg {
            PmvAlgebra::Table(t) => Self::table_of(t),
            PmvAlgebra::Gamma(g) => match g.kind() {
                GroupKind::Zn(n) => AlgebraSpec::Gamma {
                    group: "zn".into(),
                    n: Some(n),
                    unit: g.unit().0.clone(),
                },
                GroupKind::Z2Lex => AlgebraSpec::Gamma {
                    group: "z2lex".into(),
                    n: None,
                    unit: g.unit().0.clone(),
                },
            },
            PmvAlgebra::Chain(k) => AlgebraSpec::Chain { k: *k },
            PmvAlgebra::Product(fs) => AlgebraSpec::Product {
                factors: fs.iter().map(Self::describe).collect(),
            },
        }
    }

    /// Explicit table spec of a tabulated algebra.
    pub fn tabulate(fa: &FiniteAlgebra) -> AlgebraSpec {
        Self::table_of(fa.table())
    }

    fn table_of(t: &CayleyTable) -> AlgebraSpec {
        let label = |i: usize| Entry::Label(t.labels()[i].clone());
        AlgebraSpec::Table {
            carrier: t.labels().to_vec(),
            oplus: t
                .oplus_table()
                .iter()
                .map(|row| row.iter().map(|&v| label(v)).collect())
                .collect(),
            neg_minus: t.neg_minus_table().iter().map(|&v| label(v)).collect(),
            neg_tilde: t.neg_tilde_table().iter().map(|&v| label(v)).collect(),
            zero: label(t.zero()),
            one: label(t.one()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(json: &str) -> AlgebraSpec {
        serde_json::from_str(json).unwrap()
    }

    #[test]
    fn table_json_round_trip() {
        let json = r#"{"kind":"table","carrier":["0","a","1"],"oplus":[["0","a","1"],["a","1","1"],["1","1","1"]],"neg_minus":["1","a","0"],"neg_tilde":["1","a","0"],"zero":"0","one":"1"}"#;
        let spec = parse(json);
        let alg = spec.build("algebra").unwrap();
        assert_eq!(serde_json::to_string(&AlgebraSpec::describe(&alg)).unwrap(), json);
        let chain = PmvAlgebra::chain(2).finite(64).unwrap();
        let t = alg.finite(64).unwrap();
        assert!(t.is_isomorphic(&chain));
    }

    #[test]
    fn gamma_and_nested_specs() {
        let g = parse(r#"{"kind":"gamma","group":"zn","n":2,"unit":[2,2]}"#).build("algebra").unwrap();
        assert_eq!(g.carrier_size(), Some(9));
        let lex = parse(r#"{"kind":"gamma","group":"z2lex","unit":[1,0]}"#).build("algebra").unwrap();
        assert!(!lex.is_finite());
        let p = parse(r#"{"kind":"product","factors":[{"kind":"chain","k":1},{"kind":"chain","k":2}]}"#)
            .build("algebra")
            .unwrap();
        assert_eq!(p.carrier_size(), Some(6));
        assert_eq!(AlgebraSpec::describe(&p).build("x").unwrap(), p);
    }

    #[test]
    fn errors_name_the_field() {
        let bad = parse(r#"{"kind":"table","carrier":["0","1"],"oplus":[["0","1"],["1"]],"neg_minus":["1","0"],"neg_tilde":["1","0"],"zero":"0","one":"1"}"#);
        match bad.build("algebra") {
            Err(Error::InvalidSpec { field, .. }) => assert_eq!(field, "algebra.oplus[1]"),
            other => panic!("{other:?}"),
        }
        let bad = parse(r#"{"kind":"gamma","group":"zn","n":2,"unit":[0,2]}"#);
        assert!(matches!(bad.build("algebra"), Err(Error::InvalidSpec { field, .. }) if field == "algebra.unit"));
        let bad = parse(r#"{"kind":"product","factors":[{"kind":"chain","k":0}]}"#);
        assert!(matches!(bad.build("algebra"), Err(Error::InvalidSpec { field, .. }) if field == "algebra.factors[0].k"));
        let bad = parse(r#"{"kind":"table","carrier":["0","1"],"oplus":[["0","1"],["1","z"]],"neg_minus":["1","0"],"neg_tilde":["1","0"],"zero":"0","one":"1"}"#);
        assert!(matches!(bad.build("algebra"), Err(Error::InvalidSpec { field, .. }) if field == "algebra.oplus[1][1]"));
    }
}
