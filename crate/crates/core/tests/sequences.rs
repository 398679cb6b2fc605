mod common;

use proptest::prelude::*;

use common::{any_seq, formula, lrn_seq, s};
use lericone::formula::OccurrencePath;
use lericone::seq::{annotate_from, LericoneSeq, Sym};

/// `x` with `nn` spliced in at `at`.
fn with_nn(x: &LericoneSeq, at: usize) -> LericoneSeq {
    let at = at % (x.len() + 1);
    let at = if x.ends_with_c() { at.min(x.len() - 1) } else { at };
    let mut syms = x.syms().to_vec();
    syms.splice(at..at, [Sym::N, Sym::N]);
    LericoneSeq::from_syms(&syms).unwrap()
}

proptest! {
    #[test]
    fn reduct_is_idempotent_and_nn_free(x in any_seq(10)) {
        let r = x.reduct();
        prop_assert_eq!(r.reduct(), r.clone());
        prop_assert!(!r.to_string().contains("nn"));
        prop_assert!(x.equivalent(&r));
    }

    #[test]
    fn splicing_nn_preserves_equivalence(x in any_seq(8), at in 0usize..20) {
        let y = with_nn(&x, at);
        prop_assert!(x.equivalent(&y));
        prop_assert!(y.equivalent(&x));
        prop_assert_eq!(x.faithful_key(), y.faithful_key());
    }

    #[test]
    fn equivalent_sequences_share_polarity(x in lrn_seq(8), at in 0usize..20) {
        let y = with_nn(&x, at);
        prop_assert_eq!(x.polarity().unwrap(), y.polarity().unwrap());
    }

    #[test]
    fn faithful_key_is_a_congruence(x in any_seq(6), at in 0usize..20) {
        let y = with_nn(&x, at);
        prop_assert_eq!(x.neg_child().faithful_key(), y.neg_child().faithful_key());
        let (xl, xr) = x.imp_children();
        let (yl, yr) = y.imp_children();
        prop_assert_eq!(xl.faithful_key(), yl.faithful_key());
        prop_assert_eq!(xr.faithful_key(), yr.faithful_key());
    }

    #[test]
    fn faithful_key_is_the_reduct_after_c(x in lrn_seq(8)) {
        let xc = x.with_c().unwrap();
        prop_assert_eq!(xc.faithful_key(), xc.reduct());
    }

    /// Reading a formula from `ε` gives the c-transform of what reading it
    /// from `c` gives, minus the `c`.
    #[test]
    fn reading_from_epsilon_is_the_c_transform(a in formula(3, 5)) {
        let mut from_eps = Vec::new();
        annotate_from(&a, &LericoneSeq::empty(), &mut OccurrencePath::root(), &mut |_, x, _| from_eps.push(x.clone()));
        let mut from_c = Vec::new();
        annotate_from(&a, &LericoneSeq::c(), &mut OccurrencePath::root(), &mut |_, x, _| from_c.push(x.clone()));
        for (e, c) in from_eps.iter().zip(&from_c) {
            prop_assert!(c.ends_with_c());
            prop_assert_eq!(e, &c.strip_c().c_transform().unwrap());
        }
    }

    #[test]
    fn polarity_counts_n_and_l(x in lrn_seq(10)) {
        let flips = x.syms().iter().filter(|&&s| s == Sym::N || s == Sym::L).count();
        let positive = x.polarity().unwrap() == lericone::seq::Polarity::Positive;
        prop_assert_eq!(positive, flips % 2 == 0);
    }
}

#[test]
fn c_only_at_the_end() {
    assert!("cl".parse::<LericoneSeq>().is_err());
    assert!(s("lc").prepend(Sym::C).is_err());
    assert!(s("lc").c_transform().is_err());
    assert!(s("lc").polarity().is_err());
}
