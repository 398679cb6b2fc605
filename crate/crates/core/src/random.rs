//! Seeded generators for formulas, sequences, substitutions, assignments and
//! Hilbert proofs.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::formula::{Atom, Formula, OccurrencePath};
use crate::hilbert::{axiom_ids, instantiate_axiom, rule_conclusion, Binding, HilbertProof, Justification, Line, Logic, RuleId};
use crate::semantics::Assignment;
use crate::seq::{annotate_from, LericoneSeq, Mode, Sym};
use crate::subst::{Key, Keying, LericoneSubstitution, PlainSubstitution};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A formula with exactly `conn` connectives over atoms `p1..=p{atoms}`.
pub fn formula_of_size<R: Rng>(rng: &mut R, atoms: u64, conn: usize) -> Formula {
    if conn == 0 {
        return Formula::atom(rng.gen_range(1..=atoms));
    }
    match rng.gen_range(0..4) {
        0 => Formula::not(formula_of_size(rng, atoms, conn - 1)),
        k => {
            let left = rng.gen_range(0..conn);
            let (a, b) = (formula_of_size(rng, atoms, left), formula_of_size(rng, atoms, conn - 1 - left));
            match k {
                1 => Formula::and(a, b),
                2 => Formula::or(a, b),
                _ => Formula::imp(a, b),
            }
        }
    }
}

/// A formula with at most `max_conn` connectives.
pub fn formula<R: Rng>(rng: &mut R, atoms: u64, max_conn: usize) -> Formula {
    let conn = rng.gen_range(0..=max_conn);
    formula_of_size(rng, atoms, conn)
}

/// An implication with at most `max_conn` connectives on each side.
pub fn implication<R: Rng>(rng: &mut R, atoms: u64, max_conn: usize) -> Formula {
    Formula::imp(formula(rng, atoms, max_conn), formula(rng, atoms, max_conn))
}

/// Two formulas over disjoint atom ranges: `p1..=p{atoms}` and the next
/// `atoms` indices.
pub fn disjoint_pair<R: Rng>(rng: &mut R, atoms: u64, max_conn: usize) -> (Formula, Formula) {
    let a = formula(rng, atoms, max_conn);
    let b = formula(rng, atoms, max_conn);
    let mut shift = PlainSubstitution::new();
    for i in 1..=atoms {
        shift.insert(Atom::p(i), Formula::atom(i + atoms));
    }
    (a, shift.apply(&b))
}

/// A c-free sequence of length at most `max_len`.
pub fn lrn_seq<R: Rng>(rng: &mut R, max_len: usize) -> LericoneSeq {
    let len = rng.gen_range(0..=max_len);
    let syms: Vec<Sym> = (0..len).map(|_| *[Sym::L, Sym::R, Sym::N].choose(rng).unwrap()).collect();
    LericoneSeq::from_syms(&syms).unwrap()
}

/// A sequence of length at most `max_len + 1`, ending in `c` half the time.
pub fn seq<R: Rng>(rng: &mut R, max_len: usize) -> LericoneSeq {
    let x = lrn_seq(rng, max_len);
    if rng.gen_bool(0.5) {
        x.with_c().unwrap()
    } else {
        x
    }
}

/// Sequences of every node of `f` read from `x`.
pub fn node_seqs(f: &Formula, x: &LericoneSeq) -> Vec<LericoneSeq> {
    let mut out = Vec::new();
    annotate_from(f, x, &mut OccurrencePath::root(), &mut |_, seq, _| out.push(seq.clone()));
    out
}

/// A substitution with about `entries` entries. Keys come from `hints` and
/// from random sequences; images have at most `image_conn` connectives.
pub fn substitution<R: Rng>(
    rng: &mut R,
    keying: Keying,
    atoms: u64,
    hints: &[LericoneSeq],
    entries: usize,
    image_conn: usize,
) -> LericoneSubstitution {
    let mut out = LericoneSubstitution::identity(keying);
    for _ in 0..entries {
        let key_seq = if !hints.is_empty() && rng.gen_bool(0.7) {
            hints.choose(rng).unwrap().clone()
        } else {
            seq(rng, 4)
        };
        let atom = Atom::p(rng.gen_range(1..=atoms));
        out.insert(&key_seq, atom, formula(rng, atoms, image_conn));
    }
    out
}

/// An assignment with random values on `keys` and a random default.
pub fn assignment<R: Rng>(rng: &mut R, mode: Mode, keys: &[Key]) -> Assignment {
    let mut out = Assignment::new(mode, rng.gen_bool(0.5));
    for (x, p) in keys {
        out.set(x, p.clone(), rng.gen_bool(0.5));
    }
    out
}

fn push_checked(lines: &mut Vec<Line>, formula: Formula, just: Justification, max_atoms: usize) -> Option<usize> {
    if formula.atom_count() > max_atoms {
        return None;
    }
    lines.push(Line { formula, just });
    Some(lines.len() - 1)
}

fn axiom_line<R: Rng>(rng: &mut R, logic: Logic, atoms: u64) -> (Formula, Justification) {
    let id = *axiom_ids(logic).choose(rng).unwrap();
    let mut bind = Binding::new();
    for m in ['A', 'B', 'C', 'D'] {
        bind.insert(m, formula(rng, atoms, 1));
    }
    let forms = instantiate_axiom(id, &bind);
    let formula = forms.choose(rng).unwrap().clone();
    (formula, Justification::Axiom { axiom: id.to_string(), bind: None })
}

/// A random proof of `lines` lines (or a few more) in `logic`. Every line has
/// at most `max_atoms` atom occurrences; the conclusion is the last line.
pub fn proof<R: Rng>(rng: &mut R, logic: Logic, lines_wanted: usize, atoms: u64, max_atoms: usize) -> HilbertProof {
    let mut lines: Vec<Line> = Vec::new();
    let (f, j) = axiom_line(rng, logic, atoms);
    lines.push(Line { formula: f, just: j });
    let mut stalls = 0;
    while lines.len() < lines_wanted && stalls < 200 {
        let before = lines.len();
        // favour the newest lines so conclusions rest on long chains
        let pick = |rng: &mut R, lines: &[Line], pred: &dyn Fn(&Formula) -> bool| -> Option<usize> {
            let ok: Vec<usize> = (0..lines.len()).filter(|&i| pred(&lines[i].formula)).collect();
            if rng.gen_bool(0.6) {
                ok.last().copied()
            } else {
                ok.choose(rng).copied()
            }
        };
        let any = |_: &Formula| true;
        let is_imp = |f: &Formula| f.as_imp().is_some();
        let max_op = if logic == Logic::B { 6 } else { 5 };
        match rng.gen_range(0..max_op) {
            0 => {
                let (f, j) = axiom_line(rng, logic, atoms);
                push_checked(&mut lines, f, j, max_atoms);
            }
            1 => {
                let (i, k) = (pick(rng, &lines, &any).unwrap(), pick(rng, &lines, &any).unwrap());
                let f = rule_conclusion(RuleId::R1, &[&lines[i].formula, &lines[k].formula]).unwrap();
                push_checked(&mut lines, f, Justification::Rule { rule: RuleId::R1, from: vec![i, k] }, max_atoms);
            }
            2 => {
                // A, A → A ∨ C ⟹ A ∨ C
                let i = pick(rng, &lines, &any).unwrap();
                let a = lines[i].formula.clone();
                let c = formula(rng, atoms, 0);
                let ax = Formula::imp(a.clone(), Formula::or(a, c));
                let Some(j) = push_checked(&mut lines, ax, Justification::Axiom { axiom: "A3".into(), bind: None }, max_atoms) else {
                    stalls += 1;
                    continue;
                };
                let f = rule_conclusion(RuleId::R2, &[&lines[i].formula, &lines[j].formula]).unwrap();
                if push_checked(&mut lines, f, Justification::Rule { rule: RuleId::R2, from: vec![i, j] }, max_atoms).is_none() {
                    lines.pop();
                }
            }
            3 => {
                if let Some(i) = pick(rng, &lines, &is_imp) {
                    let f = rule_conclusion(RuleId::R3, &[&lines[i].formula]).unwrap();
                    push_checked(&mut lines, f, Justification::Rule { rule: RuleId::R3, from: vec![i] }, max_atoms);
                }
            }
            4 => {
                if let (Some(i), Some(k)) = (pick(rng, &lines, &is_imp), pick(rng, &lines, &is_imp)) {
                    let f = rule_conclusion(RuleId::R4, &[&lines[i].formula, &lines[k].formula]).unwrap();
                    push_checked(&mut lines, f, Justification::Rule { rule: RuleId::R4, from: vec![i, k] }, max_atoms);
                }
            }
            _ => {
                let neg_cons = |f: &Formula| matches!(f.as_imp(), Some((_, Formula::Not(_))));
                if let Some(i) = pick(rng, &lines, &neg_cons) {
                    let f = rule_conclusion(RuleId::R5, &[&lines[i].formula]).unwrap();
                    push_checked(&mut lines, f, Justification::Rule { rule: RuleId::R5, from: vec![i] }, max_atoms);
                }
            }
        }
        if lines.len() == before {
            stalls += 1;
        }
    }
    // end on an inference when there is one
    while lines.len() > 1 && matches!(lines.last().unwrap().just, Justification::Axiom { .. }) {
        lines.pop();
    }
    HilbertProof { logic, lines }
}

/// Sequences under which atoms of the proof's lines occur, read from ε.
pub fn proof_hints(pr: &HilbertProof) -> Vec<LericoneSeq> {
    let mut out: Vec<LericoneSeq> = pr
        .lines
        .iter()
        .flat_map(|l| node_seqs(&l.formula, &LericoneSeq::empty()))
        .filter(|s| s.ends_with_c())
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Every formula over `p1..=p{atoms}`, grouped by connective count.
/// Sizes up to `stored` are kept in memory; larger ones are streamed.
pub struct Enumerator {
    atoms: u64,
    by_size: Vec<Vec<Formula>>,
}

impl Enumerator {
    pub fn new(atoms: u64, stored: usize) -> Self {
        let mut e = Enumerator { atoms, by_size: Vec::new() };
        for n in 0..=stored {
            let mut level = Vec::new();
            e.for_each_of_size(n, &mut |f| level.push(f.clone()));
            e.by_size.push(level);
        }
        e
    }

    pub fn stored(&self, n: usize) -> Option<&[Formula]> {
        self.by_size.get(n).map(Vec::as_slice)
    }

    /// Calls `visit` on each formula with exactly `n` connectives.
    pub fn for_each_of_size(&self, n: usize, visit: &mut dyn FnMut(&Formula)) {
        if let Some(level) = self.by_size.get(n) {
            level.iter().for_each(|f| visit(f));
            return;
        }
        if n == 0 {
            (1..=self.atoms).for_each(|i| visit(&Formula::atom(i)));
            return;
        }
        self.for_each_of_size(n - 1, &mut |a| visit(&Formula::not(a.clone())));
        for left in 0..n {
            self.for_each_of_size(left, &mut |a| {
                self.for_each_of_size(n - 1 - left, &mut |b| {
                    visit(&Formula::and(a.clone(), b.clone()));
                    visit(&Formula::or(a.clone(), b.clone()));
                    visit(&Formula::imp(a.clone(), b.clone()));
                })
            });
        }
    }
}

/// Number of formulas with exactly `n` connectives over `atoms` atoms.
pub fn count_of_size(atoms: u64, n: usize) -> u128 {
    let mut counts: Vec<u128> = vec![atoms as u128];
    for k in 1..=n {
        let binary: u128 = (0..k).map(|l| counts[l] * counts[k - 1 - l]).sum();
        counts.push(counts[k - 1] + 3 * binary);
    }
    counts[n]
}
