//! Signed tableaux over triples ⟨x, i, A⟩.
//!
//! Rules are applied FIFO on the leftmost open branch. Branches close eagerly:
//! every new triple is checked against an index keyed by (normalized
//! sequence, formula). Faithful mode normalizes by the faithful key, which
//! stands in for explicit Faithfulness Rule steps.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Atom, Formula, Sequent};
use crate::semantics::{Assignment, Status};
use crate::seq::{LericoneSeq, Mode};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Triple {
    pub seq: LericoneSeq,
    #[serde(with = "bit")]
    pub sign: bool,
    pub formula: Formula,
}

mod bit {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &bool, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(*v as u8)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<bool, D::Error> {
        match u8::deserialize(d)? {
            0 => Ok(false),
            1 => Ok(true),
            other => Err(serde::de::Error::custom(format!("sign must be 0 or 1, got {other}"))),
        }
    }
}

impl Triple {
    pub fn new(seq: LericoneSeq, sign: bool, formula: Formula) -> Self {
        Triple { seq, sign, formula }
    }
}

impl fmt::Debug for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{:?},{},{}⟩", self.seq, self.sign as u8, self.formula)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    #[serde(rename = "Positive Conjunction Rule")]
    PositiveConjunction,
    #[serde(rename = "Negative Conjunction Rule")]
    NegativeConjunction,
    #[serde(rename = "Positive Disjunction Rule")]
    PositiveDisjunction,
    #[serde(rename = "Negative Disjunction Rule")]
    NegativeDisjunction,
    #[serde(rename = "Positive Negation Rule")]
    PositiveNegation,
    #[serde(rename = "Negative Negation Rule")]
    NegativeNegation,
    #[serde(rename = "Positive Conditional Rule, ε case")]
    PositiveConditionalEmpty,
    #[serde(rename = "Positive Conditional Rule, x̄≠ε case")]
    PositiveConditional,
    #[serde(rename = "Negative Conditional Rule, ε case")]
    NegativeConditionalEmpty,
    #[serde(rename = "Negative Conditional Rule, x̄≠ε case")]
    NegativeConditional,
}

impl Rule {
    pub fn name(self) -> String {
        serde_json::to_value(self).unwrap().as_str().unwrap().to_string()
    }
}

/// What a rule does to a branch: extend it, or split it in two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extension {
    Linear(Vec<Triple>),
    Split(Triple, Triple),
}

/// The rule for a triple, with its output. `None` for atoms.
pub fn extension(t: &Triple) -> Option<(Rule, Extension)> {
    let x = &t.seq;
    let tr = |seq: &LericoneSeq, sign: bool, f: &Formula| Triple::new(seq.clone(), sign, f.clone());
    Some(match (&t.formula, t.sign) {
        (Formula::Atom(_), _) => return None,
        (Formula::And(a, b), true) => (Rule::PositiveConjunction, Extension::Linear(vec![tr(x, true, a), tr(x, true, b)])),
        (Formula::And(a, b), false) => (Rule::NegativeConjunction, Extension::Split(tr(x, false, a), tr(x, false, b))),
        (Formula::Or(a, b), true) => (Rule::PositiveDisjunction, Extension::Split(tr(x, true, a), tr(x, true, b))),
        (Formula::Or(a, b), false) => (Rule::NegativeDisjunction, Extension::Linear(vec![tr(x, false, a), tr(x, false, b)])),
        (Formula::Not(a), true) => (Rule::PositiveNegation, Extension::Linear(vec![tr(&x.neg_child(), false, a)])),
        (Formula::Not(a), false) => (Rule::NegativeNegation, Extension::Linear(vec![tr(&x.neg_child(), true, a)])),
        (Formula::Imp(a, b), sign) => {
            let (l, r) = x.imp_children();
            let rule = match (sign, x.is_empty()) {
                (true, true) => Rule::PositiveConditionalEmpty,
                (true, false) => Rule::PositiveConditional,
                (false, true) => Rule::NegativeConditionalEmpty,
                (false, false) => Rule::NegativeConditional,
            };
            if sign {
                (rule, Extension::Split(tr(&l, false, a), tr(&r, true, b)))
            } else {
                (rule, Extension::Linear(vec![tr(&l, true, a), tr(&r, false, b)]))
            }
        }
    })
}

/// The two triples that close a branch, and their shared key.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Closure {
    pub positive: Triple,
    pub negative: Triple,
    pub key: LericoneSeq,
}

/// A branch: triples in insertion order, of which a prefix has been expanded.
#[derive(Clone, Debug)]
pub struct Branch {
    mode: Mode,
    triples: Vec<Triple>,
    processed: usize,
    seen: HashSet<Triple>,
    index: HashMap<(LericoneSeq, Formula), (Option<usize>, Option<usize>)>,
    closure: Option<Closure>,
}

impl Branch {
    fn new(mode: Mode) -> Self {
        Branch {
            mode,
            triples: Vec::new(),
            processed: 0,
            seen: HashSet::new(),
            index: HashMap::new(),
            closure: None,
        }
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn closure(&self) -> Option<&Closure> {
        self.closure.as_ref()
    }

    pub fn is_open(&self) -> bool {
        self.closure.is_none()
    }

    pub fn is_saturated(&self) -> bool {
        self.processed == self.triples.len()
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.seen.contains(t)
    }

    /// Adds a triple unless present; closes the branch on the first conflict.
    fn add(&mut self, t: Triple) {
        if self.closure.is_some() || self.seen.contains(&t) {
            return;
        }
        let key = self.mode.normalize(&t.seq);
        let slot = self.index.entry((key.clone(), t.formula.clone())).or_insert((None, None));
        let idx = self.triples.len();
        let other = if t.sign {
            slot.0.get_or_insert(idx);
            slot.1
        } else {
            slot.1.get_or_insert(idx);
            slot.0
        };
        self.seen.insert(t.clone());
        self.triples.push(t);
        if let Some(j) = other {
            let (pos, neg) = if self.triples[idx].sign { (idx, j) } else { (j, idx) };
            self.closure = Some(Closure {
                positive: self.triples[pos].clone(),
                negative: self.triples[neg].clone(),
                key,
            });
        }
    }

    /// Next triple with a rule, marking atoms on the way as processed.
    fn next_compound(&mut self) -> Option<Triple> {
        while self.processed < self.triples.len() {
            let t = &self.triples[self.processed];
            self.processed += 1;
            if !t.formula.is_atom() {
                return Some(t.clone());
            }
        }
        None
    }
}

pub fn initial_branch(s: &Sequent, mode: Mode) -> Branch {
    let mut b = Branch::new(mode);
    for p in &s.premises {
        b.add(Triple::new(LericoneSeq::empty(), true, p.clone()));
    }
    b.add(Triple::new(LericoneSeq::empty(), false, s.conclusion.clone()));
    b
}

/// A tableau under step-by-step construction.
#[derive(Clone, Debug)]
pub struct Tableau {
    mode: Mode,
    branches: Vec<Branch>,
}

pub fn initial_tableau(s: &Sequent, mode: Mode) -> Tableau {
    Tableau { mode, branches: vec![initial_branch(s, mode)] }
}

impl Tableau {
    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn is_closed(&self) -> bool {
        self.branches.iter().all(|b| !b.is_open())
    }

    /// Applies one rule to the oldest unexpanded compound triple of the
    /// leftmost open branch that has one. Returns false when there is none.
    pub fn expand(&mut self) -> bool {
        for i in 0..self.branches.len() {
            if !self.branches[i].is_open() {
                continue;
            }
            let Some(t) = self.branches[i].next_compound() else { continue };
            let (_, ext) = extension(&t).expect("compound triple");
            match ext {
                Extension::Linear(ts) => {
                    for n in ts {
                        self.branches[i].add(n);
                    }
                }
                Extension::Split(left, right) => {
                    let mut other = self.branches[i].clone();
                    self.branches[i].add(left);
                    other.add(right);
                    self.branches.insert(i + 1, other);
                }
            }
            return true;
        }
        false
    }

    pub fn saturate(&mut self) {
        while self.expand() {}
    }
}

/// Rule-application tree of a tableau.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProofTree {
    Apply { consumed: Triple, rule: Rule, branches: Vec<ProofBranch> },
    Closed(Closure),
    Open,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofBranch {
    pub added: Vec<Triple>,
    pub then: Box<ProofTree>,
}

/// A closed tableau.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableauProof {
    #[serde(with = "sequent_text")]
    pub sequent: Sequent,
    pub mode: Mode,
    pub tree: ProofTree,
}

mod sequent_text {
    use crate::formula::Sequent;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Sequent, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Sequent, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug)]
pub enum TableauOutcome {
    Proved(TableauProof),
    Refuted { branch: Vec<Triple>, countermodel: Assignment },
}

impl TableauOutcome {
    pub fn status(&self) -> Status {
        match self {
            TableauOutcome::Proved(_) => Status::Valid,
            TableauOutcome::Refuted { .. } => Status::Invalid,
        }
    }
}

enum Run {
    Closed(ProofTree),
    Open(Branch),
}

/// Expands `b` to closure or saturation, leftmost branch first.
fn run(mut b: Branch, record: bool) -> Run {
    if let Some(c) = &b.closure {
        return Run::Closed(if record { ProofTree::Closed(c.clone()) } else { ProofTree::Open });
    }
    let Some(t) = b.next_compound() else { return Run::Open(b) };
    let (rule, ext) = extension(&t).expect("compound triple");
    match ext {
        Extension::Linear(ts) => {
            for n in &ts {
                b.add(n.clone());
            }
            match run(b, record) {
                Run::Closed(then) if record => Run::Closed(ProofTree::Apply {
                    consumed: t,
                    rule,
                    branches: vec![ProofBranch { added: ts, then: Box::new(then) }],
                }),
                other => other,
            }
        }
        Extension::Split(left, right) => {
            let mut other = b.clone();
            b.add(left.clone());
            let left_tree = match run(b, record) {
                Run::Closed(tree) => tree,
                open => return open,
            };
            other.add(right.clone());
            let right_tree = match run(other, record) {
                Run::Closed(tree) => tree,
                open => return open,
            };
            Run::Closed(if record {
                ProofTree::Apply {
                    consumed: t,
                    rule,
                    branches: vec![
                        ProofBranch { added: vec![left], then: Box::new(left_tree) },
                        ProofBranch { added: vec![right], then: Box::new(right_tree) },
                    ],
                }
            } else {
                ProofTree::Open
            })
        }
    }
}

/// Runs the tableau for `s`. A closed tableau yields a proof; otherwise the
/// leftmost saturated open branch yields a verified countermodel.
pub fn prove(s: &Sequent, mode: Mode) -> Result<TableauOutcome> {
    match run(initial_branch(s, mode), true) {
        Run::Closed(tree) => Ok(TableauOutcome::Proved(TableauProof { sequent: s.clone(), mode, tree })),
        Run::Open(branch) => {
            let countermodel = extract_countermodel(&branch)?;
            if !countermodel.falsifies(s) {
                return Err(Error::Internal(format!("tableau countermodel {countermodel:?} does not falsify `{s}`")));
            }
            Ok(TableauOutcome::Refuted { branch: branch.triples, countermodel })
        }
    }
}

/// Status only; no proof object or countermodel is built.
pub fn tableau_status(s: &Sequent, mode: Mode) -> Status {
    match run(initial_branch(s, mode), false) {
        Run::Closed(_) => Status::Valid,
        Run::Open(_) => Status::Invalid,
    }
}

/// Assignment making exactly the positive atomic triples of a saturated open
/// branch true.
pub fn extract_countermodel(b: &Branch) -> Result<Assignment> {
    if !b.is_open() {
        return Err(Error::Input("branch is closed".into()));
    }
    if !b.is_saturated() {
        return Err(Error::Input("branch is not saturated".into()));
    }
    if b.mode == Mode::Faithful && !faithful_closure_consistent(b) {
        return Err(Error::Internal("faithful closure of an open branch has a conflicting pair".into()));
    }
    let mut model = Assignment::new(b.mode, false);
    for t in &b.triples {
        if let (Formula::Atom(p), true) = (&t.formula, t.sign) {
            model.set(&t.seq, p.clone(), true);
        }
    }
    Ok(model)
}

/// No two triples of the branch disagree on a formula under equal faithful
/// keys.
pub fn faithful_closure_consistent(b: &Branch) -> bool {
    let mut signs: HashMap<(LericoneSeq, &Formula), bool> = HashMap::new();
    for t in &b.triples {
        match signs.insert((t.seq.faithful_key(), &t.formula), t.sign) {
            Some(old) if old != t.sign => return false,
            _ => {}
        }
    }
    true
}

impl TableauProof {
    /// Re-applies every recorded rule from the initial branch and checks that
    /// each leaf closes with its recorded witness.
    pub fn replay(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Internal(format!("proof replay: {msg}")));
        fn walk(tree: &ProofTree, branch: &mut Vec<Triple>, mode: Mode, fail: &dyn Fn(String) -> Result<()>) -> Result<()> {
            match tree {
                ProofTree::Open => fail("open leaf in a proof".into()),
                ProofTree::Closed(c) => {
                    if !branch.contains(&c.positive) || !branch.contains(&c.negative) {
                        return fail(format!("closure triples {:?} / {:?} are not on the branch", c.positive, c.negative));
                    }
                    let ok = c.positive.sign
                        && !c.negative.sign
                        && c.positive.formula == c.negative.formula
                        && mode.normalize(&c.positive.seq) == c.key
                        && mode.normalize(&c.negative.seq) == c.key;
                    if ok {
                        Ok(())
                    } else {
                        fail(format!("{:?} and {:?} do not conflict under key {:?}", c.positive, c.negative, c.key))
                    }
                }
                ProofTree::Apply { consumed, rule, branches } => {
                    if !branch.contains(consumed) {
                        return fail(format!("{consumed:?} is not on the branch"));
                    }
                    let Some((expected_rule, ext)) = extension(consumed) else {
                        return fail(format!("no rule applies to {consumed:?}"));
                    };
                    if expected_rule != *rule {
                        return fail(format!("{consumed:?} takes {}, not {}", expected_rule.name(), rule.name()));
                    }
                    let expected: Vec<Vec<Triple>> = match ext {
                        Extension::Linear(ts) => vec![ts],
                        Extension::Split(a, b) => vec![vec![a], vec![b]],
                    };
                    let found: Vec<&Vec<Triple>> = branches.iter().map(|b| &b.added).collect();
                    if found.len() != expected.len() || found.iter().zip(&expected).any(|(f, e)| *f != e) {
                        return fail(format!("{} on {consumed:?} added the wrong triples", rule.name()));
                    }
                    for b in branches {
                        let mark = branch.len();
                        branch.extend(b.added.iter().cloned());
                        walk(&b.then, branch, mode, fail)?;
                        branch.truncate(mark);
                    }
                    Ok(())
                }
            }
        }
        let mut branch: Vec<Triple> = initial_branch(&self.sequent, self.mode).triples;
        walk(&self.tree, &mut branch, self.mode, &fail)
    }

    /// Rule applications in the proof.
    pub fn steps(&self) -> usize {
        fn count(t: &ProofTree) -> usize {
            match t {
                ProofTree::Apply { branches, .. } => 1 + branches.iter().map(|b| count(&b.then)).sum::<usize>(),
                _ => 0,
            }
        }
        count(&self.tree)
    }
}

/// Atoms true in a countermodel, for display.
pub fn positive_atoms(model: &Assignment) -> Vec<(LericoneSeq, Atom)> {
    model.entries().filter(|(_, v)| *v).map(|(k, _)| k.clone()).collect()
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

    fn tr(seq: &str, sign: bool, formula: &str) -> Triple {
        Triple::new(s(seq), sign, f(formula))
    }

    fn thm(text: &str) -> Sequent {
        Sequent::theorem(f(text))
    }

    #[test]
    fn initial_tableaux() {
        let t = initial_tableau(&thm("p1 -> p1"), Mode::Plain);
        assert_eq!(t.branches()[0].triples(), &[tr("", false, "p1 -> p1")]);
        let t = initial_tableau(&"p1 |- p2".parse().unwrap(), Mode::Plain);
        assert_eq!(t.branches()[0].triples(), &[tr("", true, "p1"), tr("", false, "p2")]);
        let t = initial_tableau(&"p1, p2 |- p1 & p2".parse().unwrap(), Mode::Plain);
        assert_eq!(t.branches()[0].triples().len(), 3);
    }

    #[test]
    fn expansion_steps() {
        let mut t = initial_tableau(&thm("p1 -> ~~p1"), Mode::Plain);
        assert!(t.expand());
        assert_eq!(&t.branches()[0].triples()[1..], &[tr("c", true, "p1"), tr("c", false, "~~p1")]);
        assert!(t.expand());
        assert!(t.branches()[0].contains(&tr("nc", true, "~p1")));
        assert!(t.expand());
        assert!(t.branches()[0].contains(&tr("nnc", false, "p1")));
        assert!(!t.expand());

        let mut d = initial_tableau(&"p1 | p2 |- p3".parse().unwrap(), Mode::Plain);
        assert!(d.expand());
        assert_eq!(d.branches().len(), 2);
        assert!(d.branches()[0].contains(&tr("", true, "p1")));
        assert!(d.branches()[1].contains(&tr("", true, "p2")));
    }

    #[test]
    fn proves_identity() {
        let TableauOutcome::Proved(proof) = prove(&thm("p1 -> p1"), Mode::Plain).unwrap() else {
            panic!("p1 -> p1 should close")
        };
        let ProofTree::Apply { rule, branches, .. } = &proof.tree else { panic!() };
        assert_eq!(*rule, Rule::NegativeConditionalEmpty);
        assert_eq!(
            *branches[0].then,
            ProofTree::Closed(Closure { positive: tr("c", true, "p1"), negative: tr("c", false, "p1"), key: s("c") })
        );
        proof.replay().unwrap();
        assert_eq!(rule.name(), "Negative Conditional Rule, ε case");
    }

    #[test]
    fn double_negation_separates_modes() {
        let outcome = prove(&thm("p1 -> ~~p1"), Mode::Plain).unwrap();
        let TableauOutcome::Refuted { countermodel, .. } = outcome else { panic!() };
        assert_eq!(positive_atoms(&countermodel), vec![(s("c"), Atom::p(1))]);
        assert!(!countermodel.default_value());
        let TableauOutcome::Proved(proof) = prove(&thm("p1 -> ~~p1"), Mode::Faithful).unwrap() else { panic!() };
        proof.replay().unwrap();
    }

    #[test]
    fn proves_prefixing_disjunction() {
        let TableauOutcome::Proved(proof) = prove(&thm("(p1 -> p2) | (p2 -> p3)"), Mode::Plain).unwrap() else {
            panic!()
        };
        proof.replay().unwrap();
    }

    #[test]
    fn faithful_refutation_keys_by_faithful_key() {
        let TableauOutcome::Refuted { countermodel, .. } = prove(&thm("p1 -> p2"), Mode::Faithful).unwrap() else {
            panic!()
        };
        assert!(countermodel.is_faithful());
        assert_eq!(positive_atoms(&countermodel), vec![(s("c"), Atom::p(1))]);
    }

    #[test]
    fn faithful_closure_on_compound_formulas_is_sound() {
        // ⟨ε,1,p1→p2⟩ and ⟨nn,0,p1→p2⟩ close faithfully. The parts sit at c
        // on one side and at lnn/rnn on the other; those share faithful keys,
        // so the sequent really is faithfully valid.
        let seq: Sequent = "p1 -> p2 |- ~~(p1 -> p2)".parse().unwrap();
        assert_eq!(tableau_status(&seq, Mode::Faithful), Status::Valid);
        assert_eq!(tableau_status(&seq, Mode::Plain), Status::Invalid);
    }

    #[test]
    fn replay_rejects_tampering() {
        let TableauOutcome::Proved(mut proof) = prove(&thm("p1 -> p1"), Mode::Plain).unwrap() else { panic!() };
        if let ProofTree::Apply { rule, .. } = &mut proof.tree {
            *rule = Rule::PositiveConditionalEmpty;
        }
        assert!(proof.replay().is_err());
    }

    #[test]
    fn countermodel_preconditions() {
        let b = initial_branch(&thm("p1 -> p2"), Mode::Plain);
        assert!(extract_countermodel(&b).is_err());
        let closed = initial_branch(&"p1 |- p1".parse().unwrap(), Mode::Plain);
        assert!(extract_countermodel(&closed).is_err());
        let empty = initial_branch(&thm("p1"), Mode::Plain);
        let mut empty = empty;
        empty.next_compound();
        let m = extract_countermodel(&empty).unwrap();
        assert!(m.is_empty() && !m.default_value());
    }

    #[test]
    fn proof_json_uses_rule_names() {
        let TableauOutcome::Proved(proof) = prove(&thm("p1 -> p1"), Mode::Plain).unwrap() else { panic!() };
        let text = serde_json::to_string(&proof).unwrap();
        assert!(text.contains("\"Negative Conditional Rule, ε case\""));
        let back: TableauProof = serde_json::from_str(&text).unwrap();
        assert_eq!(back, proof);
    }
}
