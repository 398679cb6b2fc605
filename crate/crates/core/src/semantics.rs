//! Lericone-sensitive assignments, evaluation and the two semantic decision
//! procedures (brute force over the relevant keys, and skeleton + truth table).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Atom, Formula, OccurrencePath, Sequent};
use crate::seq::{annotate_from, LericoneSeq, Mode};
use crate::subst::{skeletonize, AtomImage, Key, Keying, LericoneSubstitution, Numbering, RenamingTable};

pub const DEFAULT_CAP: usize = 24;

/// A truth-value assignment to (sequence, atom) pairs. Faithful assignments
/// store and look up keys by their faithful key.
#[derive(Clone, PartialEq, Eq)]
pub struct Assignment {
    default: bool,
    mode: Mode,
    table: BTreeMap<Key, bool>,
}

impl Assignment {
    pub fn new(mode: Mode, default: bool) -> Self {
        Assignment { default, mode, table: BTreeMap::new() }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_faithful(&self) -> bool {
        self.mode == Mode::Faithful
    }

    pub fn default_value(&self) -> bool {
        self.default
    }

    pub fn set(&mut self, seq: &LericoneSeq, atom: Atom, value: bool) {
        self.table.insert((self.mode.normalize(seq), atom), value);
    }

    pub fn get(&self, seq: &LericoneSeq, atom: &Atom) -> bool {
        self.table
            .get(&(self.mode.normalize(seq), atom.clone()))
            .copied()
            .unwrap_or(self.default)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Key, bool)> {
        self.table.iter().map(|(k, v)| (k, *v))
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Value of `a` at `x`.
    pub fn eval(&self, x: &LericoneSeq, a: &Formula) -> bool {
        eval(self, x, a)
    }

    /// True when every premise holds at ε and the conclusion fails there.
    pub fn falsifies(&self, s: &Sequent) -> bool {
        let root = LericoneSeq::empty();
        s.premises.iter().all(|p| eval(self, &root, p)) && !eval(self, &root, &s.conclusion)
    }
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[default {}]{{", self.mode.name(), self.default as u8)?;
        for (i, ((seq, atom), v)) in self.table.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({seq:?},p{atom})={}", *v as u8)?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentEntry {
    pub seq: LericoneSeq,
    pub atom: Atom,
    pub value: u8,
}

#[derive(Serialize, Deserialize)]
struct WireAssignment {
    default: u8,
    entries: Vec<AssignmentEntry>,
    faithful: bool,
}

impl Serialize for Assignment {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        WireAssignment {
            default: self.default as u8,
            entries: self
                .table
                .iter()
                .map(|((seq, atom), v)| AssignmentEntry { seq: seq.clone(), atom: atom.clone(), value: *v as u8 })
                .collect(),
            faithful: self.is_faithful(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Assignment {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = WireAssignment::deserialize(deserializer)?;
        let mode = if wire.faithful { Mode::Faithful } else { Mode::Plain };
        let mut out = Assignment::new(mode, wire.default != 0);
        for e in wire.entries {
            let key = (mode.normalize(&e.seq), e.atom);
            let value = e.value != 0;
            if out.table.get(&key).is_some_and(|&old| old != value) {
                return Err(serde::de::Error::custom(format!("conflicting values for key ({:?}, p{})", key.0, key.1)));
            }
            out.table.insert(key, value);
        }
        Ok(out)
    }
}

pub fn eval(f: &Assignment, x: &LericoneSeq, a: &Formula) -> bool {
    match a {
        Formula::Atom(p) => f.get(x, p),
        Formula::Not(b) => !eval(f, &x.neg_child(), b),
        Formula::And(b, c) => eval(f, x, b) && eval(f, x, c),
        Formula::Or(b, c) => eval(f, x, b) || eval(f, x, c),
        Formula::Imp(b, c) => {
            let (l, r) = x.imp_children();
            !eval(f, &l, b) || eval(f, &r, c)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Valid,
    Invalid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Brute,
    Skeleton,
    Tableau,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub countermodel: Option<Assignment>,
}

impl Verdict {
    pub fn valid(method: Method) -> Self {
        Verdict { status: Status::Valid, method, countermodel: None }
    }

    pub fn invalid(method: Method, countermodel: Assignment) -> Self {
        Verdict { status: Status::Invalid, method, countermodel: Some(countermodel) }
    }

    pub fn is_valid(&self) -> bool {
        self.status == Status::Valid
    }
}

/// Every key consulted when evaluating the premises and conclusion from ε,
/// normalized for the mode, in ascending order.
pub fn relevant_domain(s: &Sequent, mode: Mode) -> BTreeSet<Key> {
    let mut out = BTreeSet::new();
    for f in s.formulas() {
        annotate_from(f, &LericoneSeq::empty(), &mut OccurrencePath::root(), &mut |_, seq, node| {
            if let Formula::Atom(p) = node {
                out.insert((mode.normalize(seq), p.clone()));
            }
        });
    }
    out
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Var(u32),
    Not(u32),
    And(u32, u32),
    Or(u32, u32),
}

/// A sequent flattened to a straight-line program over numbered variables.
#[derive(Clone, Debug, Default)]
pub struct Program {
    ops: Vec<Op>,
    premises: Vec<u32>,
    conclusion: u32,
    vars: usize,
}

impl Program {
    /// Compiles `s`, numbering each atom occurrence by `var_of`.
    fn compile(s: &Sequent, vars: usize, mut var_of: impl FnMut(&LericoneSeq, &Atom) -> u32) -> Program {
        fn go(
            ops: &mut Vec<Op>,
            f: &Formula,
            x: &LericoneSeq,
            var_of: &mut impl FnMut(&LericoneSeq, &Atom) -> u32,
        ) -> u32 {
            let op = match f {
                Formula::Atom(p) => Op::Var(var_of(x, p)),
                Formula::Not(a) => Op::Not(go(ops, a, &x.neg_child(), var_of)),
                Formula::And(a, b) => {
                    let (a, b) = (go(ops, a, x, var_of), go(ops, b, x, var_of));
                    Op::And(a, b)
                }
                Formula::Or(a, b) => {
                    let (a, b) = (go(ops, a, x, var_of), go(ops, b, x, var_of));
                    Op::Or(a, b)
                }
                Formula::Imp(a, b) => {
                    let (l, r) = x.imp_children();
                    let a = go(ops, a, &l, var_of);
                    let not_a = ops.len() as u32;
                    ops.push(Op::Not(a));
                    let b = go(ops, b, &r, var_of);
                    Op::Or(not_a, b)
                }
            };
            ops.push(op);
            ops.len() as u32 - 1
        }
        let mut ops = Vec::new();
        let root = LericoneSeq::empty();
        let premises = s.premises.iter().map(|p| go(&mut ops, p, &root, &mut var_of)).collect();
        let conclusion = go(&mut ops, &s.conclusion, &root, &mut var_of);
        Program { ops, premises, conclusion, vars }
    }

    /// Index of the first variable vector, in binary counting order with
    /// variable 0 most significant, under which every premise is true and the
    /// conclusion false.
    pub fn first_falsifier(&self) -> Option<u64> {
        let k = self.vars;
        let total: u64 = 1 << k;
        let words = total.div_ceil(64);
        let lanes_mask = if total >= 64 { u64::MAX } else { (1u64 << total) - 1 };
        // lane pattern of counter bit b within one 64-lane word
        const LOW: [u64; 6] = [
            0xAAAA_AAAA_AAAA_AAAA,
            0xCCCC_CCCC_CCCC_CCCC,
            0xF0F0_F0F0_F0F0_F0F0,
            0xFF00_FF00_FF00_FF00,
            0xFFFF_0000_FFFF_0000,
            0xFFFF_FFFF_0000_0000,
        ];
        let mut var_words = vec![0u64; k];
        let mut scratch = vec![0u64; self.ops.len()];
        for word in 0..words {
            for (i, w) in var_words.iter_mut().enumerate() {
                let bit = k - 1 - i;
                *w = if bit < 6 {
                    LOW[bit]
                } else if (word >> (bit - 6)) & 1 == 1 {
                    u64::MAX
                } else {
                    0
                };
            }
            for (idx, op) in self.ops.iter().enumerate() {
                scratch[idx] = match *op {
                    Op::Var(v) => var_words[v as usize],
                    Op::Not(a) => !scratch[a as usize],
                    Op::And(a, b) => scratch[a as usize] & scratch[b as usize],
                    Op::Or(a, b) => scratch[a as usize] | scratch[b as usize],
                };
            }
            let mut bad = lanes_mask & !scratch[self.conclusion as usize];
            for &p in &self.premises {
                bad &= scratch[p as usize];
            }
            if bad != 0 {
                return Some(word * 64 + bad.trailing_zeros() as u64);
            }
        }
        None
    }
}

fn check_cap(what: &'static str, needed: usize, cap: usize) -> Result<()> {
    // counters are u64, so 63 is a hard ceiling whatever the cap says
    if needed > cap.min(63) {
        return Err(Error::Capacity { what, needed, cap });
    }
    Ok(())
}

fn bit_of(vector: u64, index: usize, count: usize) -> bool {
    (vector >> (count - 1 - index)) & 1 == 1
}

/// Decides the sequent by enumerating every assignment to its relevant keys.
pub fn brute_consequence(s: &Sequent, mode: Mode, cap: usize) -> Result<Verdict> {
    let keys: Vec<Key> = relevant_domain(s, mode).into_iter().collect();
    check_cap("brute-force enumeration", keys.len(), cap)?;
    let index: HashMap<&Key, u32> = keys.iter().enumerate().map(|(i, k)| (k, i as u32)).collect();
    let program = Program::compile(s, keys.len(), |x, p| index[&(mode.normalize(x), p.clone())]);
    let Some(vector) = program.first_falsifier() else {
        return Ok(Verdict::valid(Method::Brute));
    };
    let mut model = Assignment::new(mode, false);
    for (i, (seq, atom)) in keys.iter().enumerate() {
        model.set(seq, atom.clone(), bit_of(vector, i, keys.len()));
    }
    certify(s, model, Method::Brute)
}

fn certify(s: &Sequent, model: Assignment, method: Method) -> Result<Verdict> {
    if !model.falsifies(s) {
        return Err(Error::Internal(format!("{method:?} countermodel {model:?} does not falsify `{s}`")));
    }
    Ok(Verdict::invalid(method, model))
}

/// Outcome of a classical truth-table check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalVerdict {
    pub status: Status,
    /// First falsifying valuation, atoms ascending.
    pub countermodel: Option<BTreeMap<Atom, bool>>,
}

/// Classical validity by truth table, atoms ordered ascending.
pub fn classical_valid(s: &Sequent, cap: usize) -> Result<ClassicalVerdict> {
    let mut atoms: BTreeSet<Atom> = BTreeSet::new();
    for f in s.formulas() {
        atoms.extend(f.atoms());
    }
    let atoms: Vec<Atom> = atoms.into_iter().collect();
    check_cap("truth table", atoms.len(), cap)?;
    let index: HashMap<&Atom, u32> = atoms.iter().enumerate().map(|(i, a)| (a, i as u32)).collect();
    // Classical evaluation ignores sequences, so compile with every key
    // collapsed to its atom.
    let program = Program::compile(s, atoms.len(), |_, p| index[p]);
    Ok(match program.first_falsifier() {
        None => ClassicalVerdict { status: Status::Valid, countermodel: None },
        Some(vector) => ClassicalVerdict {
            status: Status::Invalid,
            countermodel: Some(
                atoms.iter().enumerate().map(|(i, a)| (a.clone(), bit_of(vector, i, atoms.len()))).collect(),
            ),
        },
    })
}

/// Decides via the skeleton: classical validity of the skeleton, with a
/// classical countermodel pulled back through the renaming.
pub fn decide(s: &Sequent, mode: Mode, cap: usize) -> Result<Verdict> {
    decide_with(s, mode, cap, Numbering::Compact)
}

pub fn decide_with(s: &Sequent, mode: Mode, cap: usize, numbering: Numbering) -> Result<Verdict> {
    let (skeleton, table) = skeletonize(s, mode, numbering)?;
    let classical = classical_valid(&skeleton, cap)?;
    match classical.countermodel {
        None => Ok(Verdict::valid(Method::Skeleton)),
        Some(valuation) => certify(s, pull_back(&valuation, &table), Method::Skeleton),
    }
}

/// Turns a valuation of fresh skeleton atoms into an assignment on the
/// original keys. Unlisted keys default to 0.
pub fn pull_back(valuation: &BTreeMap<Atom, bool>, table: &RenamingTable) -> Assignment {
    let mut model = Assignment::new(table.mode(), false);
    for (fresh, value) in valuation {
        if let Some((seq, atom)) = table.source_of(fresh) {
            model.set(seq, atom.clone(), *value);
        }
    }
    model
}

/// `f • σ`, tabulated over `domain` together with the keys of `f` and
/// (unless `σ` is uniform) of `σ`.
///
/// Off those keys the result takes `f`'s default. That is exact everywhere
/// when `f` is plain and `σ` is not uniform, or when both are faithful; in
/// other combinations it is exact on the supplied domain.
pub fn bullet(f: &Assignment, sigma: &LericoneSubstitution, domain: &[Key]) -> Assignment {
    let mode = if f.is_faithful() && sigma.keying() != Keying::Exact { Mode::Faithful } else { Mode::Plain };
    let mut keys: BTreeSet<Key> = domain.iter().cloned().collect();
    keys.extend(f.entries().map(|(k, _)| k.clone()));
    if sigma.keying() != Keying::Uniform {
        keys.extend(sigma.entries().map(|(k, _)| k.clone()));
    }
    let mut out = Assignment::new(mode, f.default_value());
    for (seq, atom) in keys {
        let value = eval(f, &seq, &sigma.image(&seq, &atom));
        out.set(&seq, atom, value);
    }
    out
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

    fn thm(text: &str) -> Sequent {
        Sequent::theorem(f(text))
    }

    #[test]
    fn eval_examples() {
        let mut m = Assignment::new(Mode::Plain, false);
        m.set(&s("c"), Atom::p(1), true);
        m.set(&s("nnc"), Atom::p(1), false);
        assert!(!m.eval(&s(""), &f("p1 -> ~~p1")));
        let ones = Assignment::new(Mode::Plain, true);
        assert!(ones.eval(&s(""), &f("p1 -> p1")));
        let mut any = Assignment::new(Mode::Plain, false);
        any.set(&s("c"), Atom::p(2), true);
        assert!(any.eval(&s(""), &f("(p1 -> p2) | (p2 -> p3)")));
    }

    #[test]
    fn relevant_domain_examples() {
        let keys = |t: &str| -> Vec<String> {
            relevant_domain(&thm(t), Mode::Plain).iter().map(|(x, p)| format!("{x}:{p}")).collect()
        };
        assert_eq!(keys("p1 -> ~~p1"), ["c:1", "nnc:1"]);
        assert_eq!(keys("p1"), [":1"]);
        assert_eq!(keys("(p1 -> p2) | (p2 -> p3)"), ["c:1", "c:2", "c:3"]);
    }

    #[test]
    fn brute_examples() {
        assert!(brute_consequence(&thm("p1 -> p1"), Mode::Plain, DEFAULT_CAP).unwrap().is_valid());
        let v = brute_consequence(&thm("p1 -> ~~p1"), Mode::Plain, DEFAULT_CAP).unwrap();
        let model = v.countermodel.unwrap();
        let entries: Vec<_> = model.entries().map(|((x, p), v)| (x.to_string(), p.clone(), v)).collect();
        assert_eq!(entries, vec![("c".into(), Atom::p(1), true), ("nnc".into(), Atom::p(1), false)]);
        assert!(brute_consequence(&thm("p1 -> ~~p1"), Mode::Faithful, DEFAULT_CAP).unwrap().is_valid());
        assert!(!brute_consequence(&thm("~~p1 -> p1"), Mode::Plain, DEFAULT_CAP).unwrap().is_valid());
    }

    #[test]
    fn brute_capacity() {
        let wide = (1..=5).map(|i| format!("p{i}")).collect::<Vec<_>>().join(" | ");
        match brute_consequence(&thm(&wide), Mode::Plain, 4) {
            Err(Error::Capacity { needed: 5, cap: 4, .. }) => {}
            other => panic!("expected capacity error, got {other:?}"),
        }
    }

    #[test]
    fn classical_examples() {
        assert_eq!(classical_valid(&thm("p1 -> p1"), DEFAULT_CAP).unwrap().status, Status::Valid);
        let v = classical_valid(&thm("p1 -> p2"), DEFAULT_CAP).unwrap();
        let cm = v.countermodel.unwrap();
        assert_eq!(cm[&Atom::p(1)], true);
        assert_eq!(cm[&Atom::p(2)], false);
        assert_eq!(classical_valid(&thm("(p1 -> p2) | (p2 -> p3)"), DEFAULT_CAP).unwrap().status, Status::Valid);
    }

    #[test]
    fn decide_examples() {
        assert!(!decide(&thm("(p1 -> (p1 -> p2)) -> (p1 -> p2)"), Mode::Plain, DEFAULT_CAP).unwrap().is_valid());
        assert!(decide(&thm("p1 -> ~~p1"), Mode::Faithful, DEFAULT_CAP).unwrap().is_valid());
        let v = decide(&thm("(p1 | ~p1) -> (p2 | ~p2)"), Mode::Plain, DEFAULT_CAP).unwrap();
        assert!(v.countermodel.unwrap().falsifies(&thm("(p1 | ~p1) -> (p2 | ~p2)")));
    }

    #[test]
    fn premises_are_respected() {
        let mp: Sequent = "p1, p1 -> p2 |- p2".parse().unwrap();
        // p1 at ε and p1 at c are different keys, so this fails
        assert!(!brute_consequence(&mp, Mode::Plain, DEFAULT_CAP).unwrap().is_valid());
        let trivial: Sequent = "p1 & p2 |- p2".parse().unwrap();
        assert!(brute_consequence(&trivial, Mode::Plain, DEFAULT_CAP).unwrap().is_valid());
    }

    #[test]
    fn bullet_examples() {
        let mut m = Assignment::new(Mode::Plain, true);
        m.set(&s("nc"), Atom::p(1), false);
        let id = LericoneSubstitution::identity(Keying::Exact);
        let domain = vec![(s("c"), Atom::p(1)), (s("nc"), Atom::p(1))];
        let same = bullet(&m, &id, &domain);
        for (seq, atom) in &domain {
            assert_eq!(same.get(seq, atom), m.get(seq, atom));
        }
        let mut sigma = LericoneSubstitution::identity(Keying::Exact);
        sigma.insert(&s("c"), Atom::p(1), f("~p1"));
        let b = bullet(&Assignment::new(Mode::Plain, true), &sigma, &[]);
        // 1 − f(nc, p) with f ≡ 1
        assert!(!b.get(&s("c"), &Atom::p(1)));
    }

    #[test]
    fn json_round_trip() {
        let mut m = Assignment::new(Mode::Faithful, false);
        m.set(&s("nnc"), Atom::p(3), true);
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, r#"{"default":0,"entries":[{"seq":"c","atom":3,"value":1}],"faithful":true}"#);
        let back: Assignment = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
    }
}
