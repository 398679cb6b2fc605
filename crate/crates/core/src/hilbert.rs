//! Hilbert proofs in BM and B: schema matching, checking, and transformation
//! of a proof of `A` into a proof of `σ(ε, A)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Formula, OccurrencePath};
use crate::seq::{annotate_from, LericoneSeq};
use crate::subst::{Keying, LericoneSubstitution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Logic {
    BM,
    B,
}

impl FromStr for Logic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Logic> {
        match s {
            "BM" | "bm" => Ok(Logic::BM),
            "B" | "b" => Ok(Logic::B),
            other => Err(Error::Input(format!("unknown logic `{other}`"))),
        }
    }
}

/// Metavariables `A`..`D` of the schemas.
pub type Binding = BTreeMap<char, Formula>;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Pattern {
    Meta(char),
    Not(Box<Pattern>),
    And(Box<Pattern>, Box<Pattern>),
    Or(Box<Pattern>, Box<Pattern>),
    Imp(Box<Pattern>, Box<Pattern>),
}

impl Pattern {
    /// Reads a schema written with atoms p1..p4 standing for A..D.
    fn from_formula(f: &Formula) -> Pattern {
        let b = |f: &Formula| Box::new(Pattern::from_formula(f));
        match f {
            Formula::Atom(p) => Pattern::Meta((b'A' + p.to_u64().unwrap() as u8 - 1) as char),
            Formula::Not(a) => Pattern::Not(b(a)),
            Formula::And(x, y) => Pattern::And(b(x), b(y)),
            Formula::Or(x, y) => Pattern::Or(b(x), b(y)),
            Formula::Imp(x, y) => Pattern::Imp(b(x), b(y)),
        }
    }

    fn matches(&self, f: &Formula, bind: &mut Binding) -> bool {
        match (self, f) {
            (Pattern::Meta(m), _) => match bind.get(m) {
                Some(bound) => bound == f,
                None => {
                    bind.insert(*m, f.clone());
                    true
                }
            },
            (Pattern::Not(p), Formula::Not(a)) => p.matches(a, bind),
            (Pattern::And(p, q), Formula::And(a, b))
            | (Pattern::Or(p, q), Formula::Or(a, b))
            | (Pattern::Imp(p, q), Formula::Imp(a, b)) => p.matches(a, bind) && q.matches(b, bind),
            _ => false,
        }
    }

    fn instantiate(&self, bind: &Binding) -> Option<Formula> {
        Some(match self {
            Pattern::Meta(m) => bind.get(m)?.clone(),
            Pattern::Not(p) => Formula::not(p.instantiate(bind)?),
            Pattern::And(p, q) => Formula::and(p.instantiate(bind)?, q.instantiate(bind)?),
            Pattern::Or(p, q) => Formula::or(p.instantiate(bind)?, q.instantiate(bind)?),
            Pattern::Imp(p, q) => Formula::imp(p.instantiate(bind)?, q.instantiate(bind)?),
        })
    }
}

struct Schema {
    id: &'static str,
    pattern: Pattern,
    // sequence of the first occurrence of each metavariable, read from ε
    seqs: BTreeMap<char, LericoneSeq>,
}

const SCHEMAS: [(&str, &str); 11] = [
    ("A1", "p1 -> p1"),
    ("A2", "p1 & p2 -> p1"),
    ("A2", "p1 & p2 -> p2"),
    ("A3", "p1 -> p1 | p2"),
    ("A3", "p2 -> p1 | p2"),
    ("A4", "p1 & (p2 | p3) -> (p1 & p2) | (p1 & p3)"),
    ("A5", "((p1 -> p2) & (p1 -> p3)) -> (p1 -> (p2 & p3))"),
    ("A6", "((p1 -> p3) & (p2 -> p3)) -> ((p1 | p2) -> p3)"),
    ("A7", "~(p1 & p2) -> (~p1 | ~p2)"),
    ("A8", "(~p1 & ~p2) -> ~(p1 | p2)"),
    ("A9", "~~p1 -> p1"),
];

fn schemas() -> &'static [Schema] {
    static CELL: OnceLock<Vec<Schema>> = OnceLock::new();
    CELL.get_or_init(|| {
        SCHEMAS
            .iter()
            .map(|(id, text)| {
                let f: Formula = text.parse().expect("schema text parses");
                let mut seqs = BTreeMap::new();
                annotate_from(&f, &LericoneSeq::empty(), &mut OccurrencePath::root(), &mut |_, seq, node| {
                    if let Formula::Atom(p) = node {
                        let m = (b'A' + p.to_u64().unwrap() as u8 - 1) as char;
                        seqs.entry(m).or_insert_with(|| seq.clone());
                    }
                });
                Schema { id, pattern: Pattern::from_formula(&f), seqs }
            })
            .collect()
    })
}

pub fn axiom_ids(logic: Logic) -> &'static [&'static str] {
    match logic {
        Logic::BM => &["A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8"],
        Logic::B => &["A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9"],
    }
}

fn axiom_allowed(id: &str, logic: Logic) -> bool {
    axiom_ids(logic).contains(&id)
}

/// First schema, in A1..A9 order, of which `f` is an instance.
pub fn match_axiom(f: &Formula, logic: Logic) -> Option<(&'static str, Binding)> {
    schemas().iter().filter(|s| axiom_allowed(s.id, logic)).find_map(|s| {
        let mut bind = Binding::new();
        s.pattern.matches(f, &mut bind).then_some((s.id, bind))
    })
}

/// Instance of axiom `id` with binding `bind`, trying each form of the axiom.
pub fn instantiate_axiom(id: &str, bind: &Binding) -> Vec<Formula> {
    schemas().iter().filter(|s| s.id == id).filter_map(|s| s.pattern.instantiate(bind)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
}

impl RuleId {
    fn arity(self) -> usize {
        match self {
            RuleId::R1 | RuleId::R2 | RuleId::R4 => 2,
            RuleId::R3 | RuleId::R5 => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Justification {
    Axiom {
        axiom: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bind: Option<BTreeMap<char, Formula>>,
    },
    Rule {
        rule: RuleId,
        from: Vec<usize>,
    },
    /// Accepted by the parser only so the checker can reject it by name.
    Premise {
        premise: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Line {
    pub formula: Formula,
    pub just: Justification,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertProof {
    pub logic: Logic,
    pub lines: Vec<Line>,
}

impl HilbertProof {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }

    pub fn from_json(text: &str) -> Result<HilbertProof> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("proof JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("proofs serialize")
    }
}

impl fmt::Display for HilbertProof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:?} proof, {} lines", self.logic, self.lines.len())?;
        for (i, line) in self.lines.iter().enumerate() {
            let why = match &line.just {
                Justification::Axiom { axiom, .. } => axiom.clone(),
                Justification::Rule { rule, from } => format!("{rule:?} {from:?}"),
                Justification::Premise { .. } => "premise".to_string(),
            };
            writeln!(f, "{i:>4}  {}    [{why}]", line.formula)?;
        }
        Ok(())
    }
}

/// Conclusion of `rule` applied to `premises`, if the shapes fit.
pub fn rule_conclusion(rule: RuleId, premises: &[&Formula]) -> Result<Formula, String> {
    let imp = |f: &Formula| f.as_imp().map(|(a, b)| (a.clone(), b.clone())).ok_or_else(|| format!("`{f}` is not an implication"));
    match (rule, premises) {
        (RuleId::R1, [a, b]) => Ok(Formula::and((*a).clone(), (*b).clone())),
        (RuleId::R2, [a, ab]) => {
            let (ante, cons) = imp(ab)?;
            if ante == **a {
                Ok(cons)
            } else {
                Err(format!("second premise `{ab}` does not have antecedent `{a}`"))
            }
        }
        (RuleId::R3, [ab]) => {
            let (a, b) = imp(ab)?;
            Ok(Formula::imp(Formula::not(b), Formula::not(a)))
        }
        (RuleId::R4, [ab, cd]) => {
            let (a, b) = imp(ab)?;
            let (c, d) = imp(cd)?;
            Ok(Formula::imp(Formula::imp(b, c), Formula::imp(a, d)))
        }
        (RuleId::R5, [anb]) => {
            let (a, nb) = imp(anb)?;
            match nb {
                Formula::Not(b) => Ok(Formula::imp((*b).clone(), Formula::not(a))),
                other => Err(format!("consequent `{other}` is not a negation")),
            }
        }
        (rule, ps) => Err(format!("{rule:?} takes {} premises, got {}", rule.arity(), ps.len())),
    }
}

/// Checks every line; reports the first failure.
pub fn check_proof(pr: &HilbertProof) -> Result<()> {
    if pr.lines.is_empty() {
        return Err(Error::Proof { line: 0, message: "empty proof".into() });
    }
    for (i, line) in pr.lines.iter().enumerate() {
        let err = |message: String| Err(Error::Proof { line: i, message });
        match &line.just {
            Justification::Premise { .. } => return err("premises are not allowed; proofs derive theorems".into()),
            Justification::Axiom { axiom, bind } => {
                if !axiom_ids(Logic::B).contains(&axiom.as_str()) {
                    return err(format!("unknown axiom `{axiom}`"));
                }
                if !axiom_allowed(axiom, pr.logic) {
                    return err(format!("{axiom} is not an axiom of {:?}", pr.logic));
                }
                match bind {
                    Some(bind) => {
                        let instances = instantiate_axiom(axiom, bind);
                        if instances.is_empty() {
                            return err(format!("binding leaves metavariables of {axiom} unbound"));
                        }
                        if !instances.contains(&line.formula) {
                            return err(format!("expected `{}`, found `{}`", instances[0], line.formula));
                        }
                    }
                    None => {
                        let any_form = schemas().iter().filter(|s| s.id == axiom).any(|s| s.pattern.matches(&line.formula, &mut Binding::new()));
                        if !any_form {
                            return err(format!("`{}` is not an instance of {axiom}", line.formula));
                        }
                    }
                }
            }
            Justification::Rule { rule, from } => {
                if *rule == RuleId::R5 && pr.logic == Logic::BM {
                    return err("R5 is not a rule of BM".into());
                }
                if from.len() != rule.arity() {
                    return err(format!("{rule:?} cites {} lines, needs {}", from.len(), rule.arity()));
                }
                if let Some(&bad) = from.iter().find(|&&j| j >= i) {
                    return err(format!("cites line {bad}, which does not precede it"));
                }
                let premises: Vec<&Formula> = from.iter().map(|&j| &pr.lines[j].formula).collect();
                match rule_conclusion(*rule, &premises) {
                    Ok(expected) if expected == line.formula => {}
                    Ok(expected) => return err(format!("{rule:?} yields `{expected}`, found `{}`", line.formula)),
                    Err(why) => return err(format!("{rule:?} does not apply: {why}")),
                }
            }
        }
    }
    Ok(())
}

/// Builds a proof of `σ(ε, A)` from a proof of `A`.
///
/// Each line is re-proved under the substitution its use demands: modus
/// ponens needs the major premise under `t(σ)`, contraposition needs `σ^n`,
/// and R4 needs `σ^l` and `σ^r`. Shared sub-proofs are emitted once per
/// substitution.
pub fn transform_proof(pr: &HilbertProof, sigma: &LericoneSubstitution) -> Result<HilbertProof> {
    check_proof(pr)?;
    if pr.logic == Logic::B && !sigma.is_faithful() {
        return Err(Error::NotFaithful(
            "B proofs need a faithful substitution (A9 and R5 identify nnc with c)".into(),
        ));
    }
    let mut builder = Builder { source: pr, out: Vec::new(), memo: HashMap::new() };
    builder.emit(pr.lines.len() - 1, sigma)?;
    let out = HilbertProof { logic: pr.logic, lines: builder.out };
    check_proof(&out)?;
    Ok(out)
}

struct Builder<'a> {
    source: &'a HilbertProof,
    out: Vec<Line>,
    memo: HashMap<(usize, LericoneSubstitution), usize>,
}

impl Builder<'_> {
    fn emit(&mut self, index: usize, sigma: &LericoneSubstitution) -> Result<usize> {
        if let Some(&done) = self.memo.get(&(index, sigma.clone())) {
            return Ok(done);
        }
        let line = &self.source.lines[index];
        let root = LericoneSeq::empty();
        let just = match &line.just {
            Justification::Axiom { axiom, .. } => {
                let schema = schemas()
                    .iter()
                    .filter(|s| s.id == axiom)
                    .find_map(|s| {
                        let mut bind = Binding::new();
                        s.pattern.matches(&line.formula, &mut bind).then_some((s, bind))
                    })
                    .ok_or_else(|| Error::Internal(format!("line {index} no longer matches {axiom}")))?;
                let (schema, bind) = schema;
                let new_bind = bind
                    .iter()
                    .map(|(m, f)| (*m, sigma.apply(&schema.seqs[m], f)))
                    .collect();
                Justification::Axiom { axiom: axiom.clone(), bind: Some(new_bind) }
            }
            Justification::Rule { rule, from } => {
                let from = match rule {
                    RuleId::R1 => vec![self.emit(from[0], sigma)?, self.emit(from[1], sigma)?],
                    RuleId::R2 => vec![self.emit(from[0], sigma)?, self.emit(from[1], &sigma.t_of())?],
                    RuleId::R3 | RuleId::R5 => vec![self.emit(from[0], &sigma.shift(&"n".parse()?)?)?],
                    RuleId::R4 => vec![
                        self.emit(from[0], &sigma.shift(&"l".parse()?)?)?,
                        self.emit(from[1], &sigma.shift(&"r".parse()?)?)?,
                    ],
                };
                Justification::Rule { rule: *rule, from }
            }
            Justification::Premise { .. } => unreachable!("checked proofs have no premises"),
        };
        let formula = sigma.apply(&root, &line.formula);
        self.out.push(Line { formula, just });
        let at = self.out.len() - 1;
        self.memo.insert((index, sigma.clone()), at);
        Ok(at)
    }
}

/// Keyings a substitution may use when transforming proofs in `logic`.
pub fn admissible_keyings(logic: Logic) -> &'static [Keying] {
    match logic {
        Logic::BM => &[Keying::Uniform, Keying::Exact, Keying::Faithful],
        Logic::B => &[Keying::Uniform, Keying::Faithful],
    }
}
