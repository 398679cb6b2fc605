//! Variable sharing, plain and lericone, and the countermodels that certify
//! its failure.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Atom, Formula, OccurrencePath, Sequent, Step};
use crate::semantics::{eval, Assignment};
use crate::seq::{annotate, annotate_from, LericoneSeq, Mode, Polarity};
use crate::subst::{skeletonize, Numbering};

/// Least atom occurring in both formulas.
pub fn shares_atom(a: &Formula, b: &Formula) -> Option<Atom> {
    let right = b.atoms();
    a.atoms().into_iter().find(|p| right.binary_search(p).is_ok())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharingWitness {
    pub atom: Atom,
    /// The shared sequence; in faithful mode, the shared faithful key.
    pub seq: LericoneSeq,
    pub antecedent_path: OccurrencePath,
    pub consequent_path: OccurrencePath,
    pub mode: Mode,
}

struct Occurrence {
    path: OccurrencePath,
    atom: Atom,
    seq: LericoneSeq,
}

/// Atom occurrences of the antecedent and the consequent of `imp`, with their
/// sequences in `imp`, left to right.
fn sides(imp: &Formula) -> Result<(Vec<Occurrence>, Vec<Occurrence>)> {
    if imp.as_imp().is_none() {
        return Err(Error::NotImplication(imp.to_string()));
    }
    let ann = annotate(imp);
    let (mut left, mut right) = (Vec::new(), Vec::new());
    for (path, atom) in imp.atom_occurrences() {
        let seq = ann[&path].clone();
        let side = if path.steps()[0] == Step::Left { &mut left } else { &mut right };
        side.push(Occurrence { path, atom, seq });
    }
    Ok((left, right))
}

/// First atom occurring in both halves of `imp` under equal (plain) or
/// equivalent (faithful) sequences.
pub fn lericone_sharing(imp: &Formula, mode: Mode) -> Result<Option<SharingWitness>> {
    let (left, right) = sides(imp)?;
    for a in &left {
        let key = mode.normalize(&a.seq);
        if let Some(b) = right.iter().find(|b| b.atom == a.atom && mode.normalize(&b.seq) == key) {
            return Ok(Some(SharingWitness {
                atom: a.atom.clone(),
                seq: key,
                antecedent_path: a.path.clone(),
                consequent_path: b.path.clone(),
                mode,
            }));
        }
    }
    Ok(None)
}

fn positive_prefix(seq: &LericoneSeq) -> bool {
    // every occurrence below a top-level conditional ends in c
    seq.strip_c().polarity().expect("prefix is c-free") == Polarity::Positive
}

/// Keys of the atom occurrences of `a` when it is one half of a top-level
/// conditional, with whether the prefix before `c` is positive.
fn half_keys(a: &Formula) -> Vec<(LericoneSeq, Atom, bool)> {
    let mut out = Vec::new();
    annotate_from(a, &LericoneSeq::c(), &mut OccurrencePath::root(), &mut |_, seq, node| {
        if let Formula::Atom(p) = node {
            out.push((seq.clone(), p.clone(), positive_prefix(seq)));
        }
    });
    out
}

/// `f⁺_A`: 1 at an occurrence key `x·c` of `a` with `x` positive, 0 elsewhere.
pub fn f_plus(a: &Formula, mode: Mode) -> Assignment {
    let mut f = Assignment::new(mode, false);
    for (seq, atom, positive) in half_keys(a) {
        if positive {
            f.set(&seq, atom, true);
        }
    }
    f
}

/// `f⁻_A`: 0 at an occurrence key `x·c` of `a` with `x` positive, 1 elsewhere.
pub fn f_minus(a: &Formula, mode: Mode) -> Assignment {
    let mut f = Assignment::new(mode, true);
    for (seq, atom, positive) in half_keys(a) {
        if positive {
            f.set(&seq, atom, false);
        }
    }
    f
}

/// The assignment `h` for atom-disjoint `a` and `b`: it agrees with `f⁺` on
/// the occurrences of `a`, with `f⁻` on those of `b`, and is 1 elsewhere.
/// It makes `a` true and `b` false at `c`, so `a → b` fails.
pub fn make_h(a: &Formula, b: &Formula, mode: Mode) -> Result<Assignment> {
    let imp = Formula::imp(a.clone(), b.clone());
    let (left, right) = sides(&imp)?;
    if let Some(atom) = shares_atom(a, b) {
        let first = |side: &[Occurrence]| side.iter().find(|o| o.atom == atom).unwrap().path.to_string();
        return Err(Error::SharedAtom { atom: atom.to_string(), antecedent: first(&left), consequent: first(&right) });
    }
    let mut h = Assignment::new(mode, true);
    for o in &left {
        h.set(&o.seq, o.atom.clone(), positive_prefix(&o.seq));
    }
    for o in &right {
        h.set(&o.seq, o.atom.clone(), !positive_prefix(&o.seq));
    }
    Ok(h)
}

/// A falsifying assignment for `imp` when no lericone sharing witness exists.
///
/// The implication is skeletonized so that its two halves become
/// atom-disjoint, `h` is built on the skeleton, and the result is read back
/// onto the original keys.
pub fn certify_irrelevance(imp: &Formula, mode: Mode) -> Result<Option<Assignment>> {
    if lericone_sharing(imp, mode)?.is_some() {
        return Ok(None);
    }
    let (skeleton, table) = skeletonize(&Sequent::theorem(imp.clone()), mode, Numbering::Compact)?;
    let (a, b) = skeleton.conclusion.as_imp().expect("skeletons keep their shape");
    let h = make_h(a, b, mode)?;
    let mut model = Assignment::new(mode, true);
    for ((seq, fresh), value) in h.entries() {
        let (_, atom) = table
            .source_of(fresh)
            .ok_or_else(|| Error::Internal(format!("skeleton atom p{fresh} has no source")))?;
        model.set(seq, atom.clone(), value);
    }
    if eval(&model, &LericoneSeq::empty(), imp) {
        return Err(Error::Internal(format!("certificate {model:?} does not falsify `{imp}`")));
    }
    Ok(Some(model))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(text: &str) -> Formula {
        text.parse().unwrap()
    }

    fn s(text: &str) -> LericoneSeq {
        text.parse().unwrap()
    }

    #[test]
    fn shares_atom_examples() {
        assert_eq!(shares_atom(&f("p1 -> p2"), &f("p2 -> p3")), Some(Atom::p(2)));
        assert_eq!(shares_atom(&f("p1"), &f("p2")), None);
        assert_eq!(shares_atom(&f("p1 & p2"), &f("~p2")), Some(Atom::p(2)));
    }

    #[test]
    fn sharing_examples() {
        let w = lericone_sharing(&f("(p1 -> p2) -> (p1 -> p2)"), Mode::Plain).unwrap().unwrap();
        assert_eq!((w.atom, w.seq), (Atom::p(1), s("lc")));
        assert_eq!(w.antecedent_path, OccurrencePath::new(vec![Step::Left, Step::Left]));
        assert_eq!(w.consequent_path, OccurrencePath::new(vec![Step::Right, Step::Left]));
        assert!(lericone_sharing(&f("p1 -> ~~p1"), Mode::Plain).unwrap().is_none());
        let w = lericone_sharing(&f("p1 -> ~~p1"), Mode::Faithful).unwrap().unwrap();
        assert_eq!(w.seq, s("c"));
        assert!(lericone_sharing(&f("p1 -> (p2 | ~p2)"), Mode::Faithful).unwrap().is_none());
        assert!(lericone_sharing(&f("p1 & p2"), Mode::Plain).is_err());
    }

    #[test]
    fn make_h_examples() {
        let h = make_h(&f("p1"), &f("p2"), Mode::Plain).unwrap();
        assert!(h.get(&s("c"), &Atom::p(1)));
        assert!(!h.get(&s("c"), &Atom::p(2)));
        assert!(!h.eval(&s(""), &f("p1 -> p2")));

        let h = make_h(&f("p1 | ~p1"), &f("p2 | ~p2"), Mode::Plain).unwrap();
        assert!(h.get(&s("c"), &Atom::p(1)));
        assert!(!h.get(&s("nc"), &Atom::p(1)));
        assert!(!h.get(&s("c"), &Atom::p(2)));
        assert!(h.get(&s("nc"), &Atom::p(2)));
        assert!(!h.eval(&s(""), &f("(p1 | ~p1) -> (p2 | ~p2)")));

        assert!(matches!(make_h(&f("p1"), &f("~p1"), Mode::Plain), Err(Error::SharedAtom { .. })));
    }

    #[test]
    fn certificates() {
        let imp = f("p1 -> (p2 | ~p2)");
        assert!(!certify_irrelevance(&imp, Mode::Plain).unwrap().unwrap().eval(&s(""), &imp));
        assert!(certify_irrelevance(&f("p1 -> ~~p1"), Mode::Plain).unwrap().is_some());
        assert!(certify_irrelevance(&f("p1 -> ~~p1"), Mode::Faithful).unwrap().is_none());
        assert!(certify_irrelevance(&f("p1 -> p1"), Mode::Plain).unwrap().is_none());
    }

    #[test]
    fn mirror_definition_agrees() {
        let a = f("(p1 -> ~p2) & ~(p4 -> (p3 | ~~p1))");
        let (plus, minus) = (f_plus(&a, Mode::Plain), f_minus(&a, Mode::Plain));
        for (seq, atom, _) in half_keys(&a) {
            assert_eq!(minus.get(&seq, &atom), !plus.get(&seq, &atom));
        }
        assert_eq!(minus.get(&s("rrc"), &Atom::p(9)), !plus.get(&s("rrc"), &Atom::p(9)));
    }
}
