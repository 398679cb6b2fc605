mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use common::{any_seq, f, formula, keying, lrn_seq, s, substitution_with};
use lericone::formula::{Atom, Formula, Sequent};
use lericone::seq::Mode;
use lericone::subst::{
    apply_plain, godel, godel_substitute, inverse_rename, skeletonize, substitution_from_json, Keying,
    LericoneSubstitution, Numbering, PlainSubstitution,
};

fn keyed_pair() -> impl Strategy<Value = (LericoneSubstitution, LericoneSubstitution)> {
    keying().prop_flat_map(|k| (substitution_with(k, 3), substitution_with(k, 3)))
}

fn any_substitution() -> impl Strategy<Value = LericoneSubstitution> {
    keying().prop_flat_map(|k| substitution_with(k, 3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn star_composes((sigma, tau) in keyed_pair(), x in any_seq(3), a in formula(3, 4)) {
        let st = sigma.star(&tau).unwrap();
        prop_assert_eq!(st.apply(&x, &a), sigma.apply(&x, &tau.apply(&x, &a)));
    }

    #[test]
    fn t_of_reads_c_as_the_c_transform(sigma in any_substitution(), x in lrn_seq(4), a in formula(3, 4)) {
        let xc = x.with_c().unwrap();
        prop_assert_eq!(sigma.t_of().apply(&xc, &a), sigma.apply(&x.c_transform().unwrap(), &a));
    }

    #[test]
    fn shift_inserts_y(sigma in any_substitution(), x in lrn_seq(3), y in lrn_seq(4), a in formula(3, 4)) {
        let xc = x.with_c().unwrap();
        let xyc = x.concat(&y).unwrap().with_c().unwrap();
        prop_assert_eq!(sigma.shift(&y).unwrap().apply(&xc, &a), sigma.apply(&xyc, &a));
    }

    #[test]
    fn star_keeps_faithfulness((sigma, tau) in (substitution_with(Keying::Faithful, 3), substitution_with(Keying::Faithful, 3)), x in any_seq(5), a in formula(3, 3)) {
        let st = sigma.star(&tau).unwrap();
        prop_assert!(st.is_faithful());
        prop_assert_eq!(st.apply(&x, &a), st.apply(&x.reduct(), &a));
    }

    #[test]
    fn faithful_tables_respect_equivalence(sigma in substitution_with(Keying::Faithful, 3), x in any_seq(5), a in formula(3, 4)) {
        let nn = x.reduct();
        prop_assert_eq!(sigma.apply(&x, &a), sigma.apply(&nn, &a));
    }
}

proptest! {
    #[test]
    fn plain_tables_match_plain_substitution(
        pairs in proptest::collection::vec((1u64..=3, formula(3, 2)), 0..4),
        x in any_seq(4),
        a in formula(3, 4),
    ) {
        let mut plain = PlainSubstitution::new();
        for (p, image) in pairs {
            plain.insert(Atom::p(p), image);
        }
        prop_assert_eq!(LericoneSubstitution::from_plain(&plain).apply(&x, &a), apply_plain(&plain, &a));
    }

    #[test]
    fn skeleton_inverse_round_trip(a in formula(3, 5), faithful in any::<bool>()) {
        let mode = if faithful { Mode::Faithful } else { Mode::Plain };
        let (sk, table) = skeletonize(&Sequent::theorem(a.clone()), mode, Numbering::Compact).unwrap();
        prop_assert_eq!(apply_plain(&inverse_rename(&table), &sk.conclusion), a);
        prop_assert_eq!(table.len(), sk.conclusion.atoms().len());
    }

    #[test]
    fn godel_is_injective(keys in proptest::collection::vec((any_seq(6), 1u64..=8), 1..40)) {
        let mut seen = std::collections::BTreeMap::new();
        for (x, p) in keys {
            let code = godel(&x, &Atom::p(p)).unwrap();
            if let Some(prev) = seen.insert(code.clone(), (x.clone(), p)) {
                prop_assert_eq!(prev, (x, p));
            }
        }
    }

    #[test]
    fn substitution_json_round_trip(sigma in any_substitution()) {
        let text = serde_json::to_string(&sigma).unwrap();
        prop_assert_eq!(substitution_from_json(&text, Keying::Exact).unwrap(), sigma);
    }
}

#[test]
fn godel_example() {
    assert_eq!(godel_substitute(&f("~p1 -> (p1 -> p1)")).unwrap().to_string(), "~p20250 -> (p750 -> p2250)");
    assert!(godel_substitute(&Formula::atom(1 << 20)).is_err());
}

#[test]
fn star_identities() {
    let mut sigma = LericoneSubstitution::identity(Keying::Exact);
    sigma.insert(&s("lc"), Atom::p(1), f("p2 & p3"));
    let id = LericoneSubstitution::identity(Keying::Exact);
    assert_eq!(id.star(&sigma).unwrap(), sigma);
    assert_eq!(sigma.star(&id).unwrap(), sigma);
}

#[test]
fn star_rejects_mixed_keyings() {
    let a = LericoneSubstitution::identity(Keying::Exact);
    let b = LericoneSubstitution::identity(Keying::Faithful);
    assert!(a.star(&b).is_err());
}

#[test]
fn conflicting_faithful_entries_are_rejected() {
    let json = r#"{"keying":"faithful","entries":[
        {"seq":"c","atom":1,"image":"p2"},
        {"seq":"nnc","atom":1,"image":"p3"}]}"#;
    assert!(substitution_from_json(json, Keying::Faithful).is_err());
    let json = r#"[{"seq":"c","atom":1,"image":"p2"},{"seq":"nnc","atom":1,"image":"p2"}]"#;
    let sigma = substitution_from_json(json, Keying::Faithful).unwrap();
    assert_eq!(sigma.len(), 1);
}

#[test]
fn exact_keying_distinguishes_equivalent_sequences() {
    let mut sigma = LericoneSubstitution::identity(Keying::Exact);
    sigma.insert(&s("c"), Atom::p(1), f("p2"));
    assert_eq!(sigma.apply(&s(""), &f("p1 -> ~~p1")).to_string(), "p2 -> ~~p1");
    assert!(!sigma.is_faithful());
    let keys: BTreeSet<_> = sigma.to_faithful().unwrap().entries().map(|(k, _)| k.clone()).collect();
    assert_eq!(keys.len(), 1);
}
