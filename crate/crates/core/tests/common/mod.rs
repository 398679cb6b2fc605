#![allow(dead_code)]

use proptest::prelude::*;

use lericone::formula::{Formula, OccurrencePath, Sequent};
use lericone::seq::{annotate_from, LericoneSeq, Sym};
use lericone::subst::{Key, Keying, LericoneSubstitution};

pub fn f(text: &str) -> Formula {
    text.parse().unwrap()
}

pub fn s(text: &str) -> LericoneSeq {
    text.parse().unwrap()
}

pub fn formula(atoms: u64, depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = (1..=atoms).prop_map(Formula::atom);
    leaf.prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::imp(a, b)),
        ]
    })
}

pub fn implication(atoms: u64, depth: u32) -> impl Strategy<Value = Formula> {
    (formula(atoms, depth), formula(atoms, depth)).prop_map(|(a, b)| Formula::imp(a, b))
}

/// Small sequents whose relevant domain stays under the brute-force cap.
pub fn sequent(atoms: u64) -> impl Strategy<Value = Sequent> {
    (proptest::collection::vec(formula(atoms, 2), 0..=2), formula(atoms, 3)).prop_map(|(ps, c)| Sequent::new(ps, c))
}

pub fn lrn_seq(max_len: usize) -> impl Strategy<Value = LericoneSeq> {
    proptest::collection::vec(prop_oneof![Just(Sym::L), Just(Sym::R), Just(Sym::N)], 0..=max_len)
        .prop_map(|syms| LericoneSeq::from_syms(&syms).unwrap())
}

pub fn any_seq(max_len: usize) -> impl Strategy<Value = LericoneSeq> {
    (lrn_seq(max_len), any::<bool>()).prop_map(|(x, c)| if c { x.with_c().unwrap() } else { x })
}

pub fn keying() -> impl Strategy<Value = Keying> {
    prop_oneof![Just(Keying::Uniform), Just(Keying::Exact), Just(Keying::Faithful)]
}

pub fn substitution_with(keying: Keying, atoms: u64) -> impl Strategy<Value = LericoneSubstitution> {
    proptest::collection::vec((any_seq(4), 1..=atoms, formula(atoms, 1)), 0..6).prop_map(move |entries| {
        let mut out = LericoneSubstitution::identity(keying);
        for (seq, atom, image) in entries {
            out.insert(&seq, lericone::formula::Atom::p(atom), image);
        }
        out
    })
}

/// Keys of the atom occurrences of `a` read from `x`.
pub fn occurrence_keys(a: &Formula, x: &LericoneSeq) -> Vec<Key> {
    let mut out = Vec::new();
    annotate_from(a, x, &mut OccurrencePath::root(), &mut |_, seq, node| {
        if let Formula::Atom(p) = node {
            out.push((seq.clone(), p.clone()));
        }
    });
    out
}
