//! Propositional formulas over atoms `p1, p2, ...`, their concrete syntax, and
//! addressing of subformula occurrences by parse-tree paths.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a propositional atom. Always at least 1.
///
/// Small indices are stored inline; the Gödel coding of occurrences produces
/// indices far beyond `u64`, which fall back to a big integer.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Atom(AtomRepr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum AtomRepr {
    Small(u64),
    // invariant: value > u64::MAX
    Big(Arc<BigUint>),
}

impl Atom {
    pub fn new(index: u64) -> Result<Atom> {
        if index == 0 {
            return Err(Error::ZeroAtom);
        }
        Ok(Atom(AtomRepr::Small(index)))
    }

    pub fn from_big(index: BigUint) -> Result<Atom> {
        if index.is_zero() {
            return Err(Error::ZeroAtom);
        }
        Ok(match index.to_u64() {
            Some(small) => Atom(AtomRepr::Small(small)),
            None => Atom(AtomRepr::Big(Arc::new(index))),
        })
    }

    /// Convenience constructor for indices known to be positive.
    ///
    /// # Panics
    /// If `index` is 0.
    pub fn p(index: u64) -> Atom {
        Atom::new(index).expect("atom indices start at 1")
    }

    pub fn to_u64(&self) -> Option<u64> {
        match &self.0 {
            AtomRepr::Small(v) => Some(*v),
            AtomRepr::Big(_) => None,
        }
    }

    pub fn to_biguint(&self) -> BigUint {
        match &self.0 {
            AtomRepr::Small(v) => BigUint::from(*v),
            AtomRepr::Big(v) => (**v).clone(),
        }
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use AtomRepr::*;
        match (&self.0, &other.0) {
            (Small(a), Small(b)) => a.cmp(b),
            (Small(_), Big(_)) => std::cmp::Ordering::Less,
            (Big(_), Small(_)) => std::cmp::Ordering::Greater,
            (Big(a), Big(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            AtomRepr::Small(v) => write!(f, "{v}"),
            AtomRepr::Big(v) => write!(f, "{v}"),
        }
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{self}")
    }
}

impl FromStr for Atom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Atom> {
        let digits = s.strip_prefix('p').unwrap_or(s);
        let value = BigUint::parse_bytes(digits.as_bytes(), 10)
            .filter(|_| !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()))
            .ok_or_else(|| Error::BadAtom(s.to_string()))?;
        Atom::from_big(value)
    }
}

// JSON carries atoms as integers when they fit, and as decimal strings otherwise.
impl Serialize for Atom {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match &self.0 {
            AtomRepr::Small(v) => serializer.serialize_u64(*v),
            AtomRepr::Big(v) => serializer.serialize_str(&v.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Atom {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Atom, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Int(v) => Atom::new(v).map_err(serde::de::Error::custom),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// A propositional formula. Children are shared, so cloning is cheap.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Atom),
    Not(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Imp(Arc<Formula>, Arc<Formula>),
}

impl Formula {
    pub fn atom(index: u64) -> Formula {
        Formula::Atom(Atom::p(index))
    }

    pub fn not(a: Formula) -> Formula {
        Formula::Not(Arc::new(a))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Arc::new(a), Arc::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Arc::new(a), Arc::new(b))
    }

    /// Number of connectives.
    pub fn connectives(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(a) => 1 + a.connectives(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                1 + a.connectives() + b.connectives()
            }
        }
    }

    pub fn atom_count(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Not(a) => a.atom_count(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.atom_count() + b.atom_count()
            }
        }
    }

    /// Distinct atoms in ascending order.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_atoms(&self, out: &mut Vec<Atom>) {
        match self {
            Formula::Atom(p) => out.push(p.clone()),
            Formula::Not(a) => a.collect_atoms(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Atom(_))
    }

    pub fn as_imp(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Imp(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn subformula_at(&self, path: &OccurrencePath) -> Result<&Formula> {
        let mut node = self;
        for (depth, step) in path.steps().iter().enumerate() {
            node = match (node, step) {
                (Formula::Not(a), Step::Only) => a,
                (Formula::And(a, _) | Formula::Or(a, _) | Formula::Imp(a, _), Step::Left) => a,
                (Formula::And(_, b) | Formula::Or(_, b) | Formula::Imp(_, b), Step::Right) => b,
                _ => {
                    return Err(Error::InvalidPath {
                        path: path.to_string(),
                        position: depth,
                        step: *step,
                    })
                }
            };
        }
        Ok(node)
    }

    /// Every atom occurrence with its path, left to right.
    pub fn atom_occurrences(&self) -> Vec<(OccurrencePath, Atom)> {
        let mut out = Vec::new();
        self.walk(&mut OccurrencePath::root(), &mut |path, node| {
            if let Formula::Atom(p) = node {
                out.push((path.clone(), p.clone()));
            }
        });
        out
    }

    /// Pre-order traversal over every node with its path.
    pub fn walk<'a>(&'a self, path: &mut OccurrencePath, visit: &mut impl FnMut(&OccurrencePath, &'a Formula)) {
        visit(path, self);
        match self {
            Formula::Atom(_) => {}
            Formula::Not(a) => {
                path.push(Step::Only);
                a.walk(path, visit);
                path.pop();
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                path.push(Step::Left);
                a.walk(path, visit);
                path.pop();
                path.push(Step::Right);
                b.walk(path, visit);
                path.pop();
            }
        }
    }

    /// All valid paths, in pre-order.
    pub fn paths(&self) -> Vec<OccurrencePath> {
        let mut out = Vec::new();
        self.walk(&mut OccurrencePath::root(), &mut |path, _| out.push(path.clone()));
        out
    }

    /// Renders with explicit parentheses around every compound subformula.
    pub fn render_full(&self) -> String {
        match self {
            Formula::Atom(p) => format!("p{p}"),
            Formula::Not(a) => format!("~{}", a.render_full()),
            Formula::And(a, b) => format!("({} & {})", a.render_full(), b.render_full()),
            Formula::Or(a, b) => format!("({} | {})", a.render_full(), b.render_full()),
            Formula::Imp(a, b) => format!("({} -> {})", a.render_full(), b.render_full()),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Imp(..) => 0,
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            Formula::Not(_) | Formula::Atom(_) => 3,
        }
    }
}

pub fn render(f: &Formula) -> String {
    f.to_string()
}

pub fn parse(text: &str) -> Result<Formula> {
    text.parse()
}

// `~` binds tightest, then `&`, `|`, `->`, and `&` and `|` associate to the
// left. Parentheses are minimal except that a binary operand of `->` is always
// bracketed: `(p1 & p2) -> (p3 -> p4)` rather than `p1 & p2 -> (p3 -> p4)`.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, node: &Formula, parens: bool) -> fmt::Result {
            if parens {
                write!(f, "({node})")
            } else {
                write!(f, "{node}")
            }
        }
        match self {
            Formula::Atom(p) => write!(f, "p{p}"),
            Formula::Not(a) => {
                f.write_str("~")?;
                child(f, a, a.precedence() < 3)
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                let (prec, op) = if matches!(self, Formula::And(..)) { (2, " & ") } else { (1, " | ") };
                child(f, a, a.precedence() < prec)?;
                f.write_str(op)?;
                child(f, b, b.precedence() <= prec)
            }
            Formula::Imp(a, b) => {
                child(f, a, a.precedence() < 3)?;
                f.write_str(" -> ")?;
                child(f, b, b.precedence() < 3)
            }
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(text: &str) -> Result<Formula> {
        let mut parser = Parser::new(text);
        let f = parser.formula()?;
        parser.skip_ws();
        if parser.pos < parser.src.len() {
            return Err(parser.error(&["end of input", "->", "|", "&"]));
        }
        Ok(f)
    }
}

impl Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Formula, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

struct Parser<'s> {
    src: &'s [u8],
    pos: usize,
}

impl<'s> Parser<'s> {
    fn new(text: &'s str) -> Self {
        Parser { src: text.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn error(&self, expected: &[&str]) -> Error {
        Error::Syntax {
            offset: self.pos,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let left = self.disjunction()?;
        if self.eat("->") {
            let right = self.formula()?;
            return Ok(Formula::imp(left, right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut acc = self.conjunction()?;
        while self.eat("|") {
            acc = Formula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut acc = self.unary()?;
        while self.eat("&") {
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula> {
        self.skip_ws();
        match self.src.get(self.pos) {
            Some(b'~') => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.formula()?;
                if !self.eat(")") {
                    return Err(self.error(&[")", "->", "|", "&"]));
                }
                Ok(inner)
            }
            Some(b'p') => {
                let start = self.pos;
                self.pos += 1;
                let digits_start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if self.pos == digits_start {
                    return Err(self.error(&["digit"]));
                }
                let digits = &self.src[digits_start..self.pos];
                let value = BigUint::parse_bytes(digits, 10).expect("ascii digits");
                Atom::from_big(value).map(Formula::Atom).map_err(|_| Error::Syntax {
                    offset: start,
                    expected: vec!["atom index >= 1".to_string()],
                })
            }
            _ => Err(self.error(&["~", "(", "p<digits>"])),
        }
    }
}

/// One step of a path through a parse tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Step {
    /// The operand of a negation.
    Only,
    Left,
    Right,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Step::Only => "only",
            Step::Left => "left",
            Step::Right => "right",
        })
    }
}

/// Address of a subformula occurrence: the steps taken from the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OccurrencePath(Vec<Step>);

impl OccurrencePath {
    pub fn root() -> Self {
        OccurrencePath(Vec::new())
    }

    pub fn new(steps: Vec<Step>) -> Self {
        OccurrencePath(steps)
    }

    pub fn steps(&self) -> &[Step] {
        &self.0
    }

    pub fn push(&mut self, step: Step) {
        self.0.push(step);
    }

    pub fn pop(&mut self) -> Option<Step> {
        self.0.pop()
    }

    pub fn child(&self, step: Step) -> OccurrencePath {
        let mut out = self.clone();
        out.push(step);
        out
    }

    pub fn starts_with(&self, prefix: &[Step]) -> bool {
        self.0.starts_with(prefix)
    }
}

impl fmt::Display for OccurrencePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, step) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{step}")?;
        }
        f.write_str("]")
    }
}

/// Finitely many premises and a conclusion.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
}

impl Sequent {
    pub fn new(premises: Vec<Formula>, conclusion: Formula) -> Self {
        Sequent { premises, conclusion }
    }

    pub fn theorem(conclusion: Formula) -> Self {
        Sequent { premises: Vec::new(), conclusion }
    }

    /// Premises followed by the conclusion.
    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.premises.iter().chain(std::iter::once(&self.conclusion))
    }
}

/// Command-line sequent syntax: `p1, p1 -> p2 |- p2`. A bare formula is a
/// sequent without premises.
impl FromStr for Sequent {
    type Err = Error;

    fn from_str(text: &str) -> Result<Sequent> {
        let Some(split) = text.find("|-") else {
            return Ok(Sequent::theorem(text.parse()?));
        };
        let (left, right) = (&text[..split], &text[split + 2..]);
        let conclusion: Formula = right.parse().map_err(|e: Error| e.shifted(split + 2))?;
        let mut premises = Vec::new();
        if !left.trim().is_empty() {
            let mut offset = 0;
            for piece in left.split(',') {
                premises.push(piece.parse().map_err(|e: Error| e.shifted(offset))?);
                offset += piece.len() + 1;
            }
        }
        Ok(Sequent { premises, conclusion })
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.premises.is_empty() {
            return write!(f, "{}", self.conclusion);
        }
        for (i, p) in self.premises.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, " |- {}", self.conclusion)
    }
}
