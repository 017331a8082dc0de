use pmv_core::algebra::{check_axioms, sampled_axiom_check};
use pmv_core::schema::AlgebraSpec;
use pmv_core::{PmvAlgebra, UnitalGroup};
use proptest::prelude::*;

fn spec(json: &str) -> AlgebraSpec {
    serde_json::from_str(json).unwrap()
}

#[test]
fn spec_round_trip_preserves_the_table() {
    for json in [
        r#"{"kind":"chain","k":3}"#,
        r#"{"kind":"gamma","group":"zn","n":2,"unit":[1,2]}"#,
        r#"{"kind":"product","factors":[{"kind":"chain","k":1},{"kind":"chain","k":2}]}"#,
    ] {
        let alg = spec(json).build("algebra").unwrap();
        let again = AlgebraSpec::describe(&alg).build("algebra").unwrap();
        let (a, b) = (alg.finite(64).unwrap(), again.finite(64).unwrap());
        assert_eq!(a.labels(), b.labels());
        assert_eq!(a.table(), b.table());
        assert!(a.is_isomorphic(&b));
    }
}

#[test]
fn table_backend_agrees_with_its_source() {
    let alg = PmvAlgebra::gamma(UnitalGroup::zn(&[2, 1]).unwrap());
    let fa = alg.finite(64).unwrap();
    let table = PmvAlgebra::table(fa.table().clone());
    assert!(check_axioms(&table, 64).unwrap().all_passed());
    let tabulated = table.finite(64).unwrap();
    assert!(fa.is_isomorphic(&tabulated));
}

#[test]
fn lexicographic_interval_passes_sampled_axioms() {
    let alg = PmvAlgebra::gamma(UnitalGroup::z2lex([1, 0]).unwrap());
    assert!(!alg.is_finite());
    let sample = alg.sample(12);
    assert!(sampled_axiom_check(&alg, &sample).unwrap().all_passed());
}

proptest! {
    #[test]
    fn rdp2_witness_on_lex_interval(a in 0usize..12, b in 0usize..12, c in 0usize..12) {
        let alg = PmvAlgebra::gamma(UnitalGroup::z2lex([1, 0]).unwrap());
        let s = alg.sample(12);
        let (a1, a2, b1) = (&s[a], &s[b], &s[c]);
        if let Some(total) = alg.partial_add(a1, a2).unwrap() {
            if alg.leq(b1, &total).unwrap() {
                let b2 = alg.subtract(b1, &total, pmv_core::algebra::Side::Left).unwrap();
                if alg.partial_add(b1, &b2).unwrap() == Some(total) {
                    let w = alg.rdp2_decompose(a1, a2, b1, &b2).unwrap();
                    prop_assert!(w.verify(&alg, a1, a2, b1, &b2).unwrap());
                }
            }
        }
    }
}
