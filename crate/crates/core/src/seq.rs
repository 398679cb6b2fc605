//! Lericone sequences and the lericone annotation of parse trees.
//!
//! A sequence is a word over `l`, `r`, `n`, `c`, stored with the innermost
//! constructor first: descending through a negation turns `x` into `n·x`, so
//! the word grows at the front. `c` may only be the final symbol.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::formula::{Formula, OccurrencePath, Step};

/// A sequence symbol. Variant order matches the character order `c < l < n < r`,
/// so the derived ordering on sequences is plain string order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    C,
    L,
    N,
    R,
}

impl Sym {
    pub fn as_char(self) -> char {
        match self {
            Sym::C => 'c',
            Sym::L => 'l',
            Sym::N => 'n',
            Sym::R => 'r',
        }
    }

    pub fn from_char(ch: char) -> Option<Sym> {
        Some(match ch {
            'c' => Sym::C,
            'l' => Sym::L,
            'n' => Sym::N,
            'r' => Sym::R,
            _ => return None,
        })
    }
}

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LericoneSeq(SmallVec<[Sym; 15]>);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

impl LericoneSeq {
    pub fn empty() -> Self {
        LericoneSeq(SmallVec::new())
    }

    /// The one-symbol sequence `c`.
    pub fn c() -> Self {
        LericoneSeq(SmallVec::from_slice(&[Sym::C]))
    }

    pub fn from_syms(syms: &[Sym]) -> Result<Self> {
        if let Some(pos) = syms.iter().position(|&s| s == Sym::C) {
            if pos + 1 != syms.len() {
                let text: String = syms.iter().map(|s| s.as_char()).collect();
                return Err(Error::BadSequence(text));
            }
        }
        Ok(LericoneSeq(SmallVec::from_slice(syms)))
    }

    pub fn syms(&self) -> &[Sym] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<Sym> {
        self.0.last().copied()
    }

    pub fn first(&self) -> Option<Sym> {
        self.0.first().copied()
    }

    /// True when the sequence is in LRN, i.e. has no trailing `c`.
    pub fn is_lrn(&self) -> bool {
        self.last() != Some(Sym::C)
    }

    pub fn ends_with_c(&self) -> bool {
        !self.is_lrn()
    }

    /// `sym·self`. Prepending `c` is only possible onto ε.
    pub fn prepend(&self, sym: Sym) -> Result<Self> {
        if sym == Sym::C && !self.is_empty() {
            return Err(Error::BadSequence(format!("c{self}")));
        }
        let mut out = SmallVec::with_capacity(self.len() + 1);
        out.push(sym);
        out.extend_from_slice(&self.0);
        Ok(LericoneSeq(out))
    }

    /// `self·other`. `self` must be c-free unless `other` is empty.
    pub fn concat(&self, other: &LericoneSeq) -> Result<Self> {
        if self.ends_with_c() && !other.is_empty() {
            return Err(Error::BadSequence(format!("{self}{other}")));
        }
        let mut out = self.0.clone();
        out.extend_from_slice(&other.0);
        Ok(LericoneSeq(out))
    }

    /// `self·c` for c-free `self`.
    pub fn with_c(&self) -> Result<Self> {
        self.require_lrn()?;
        let mut out = self.0.clone();
        out.push(Sym::C);
        Ok(LericoneSeq(out))
    }

    /// The LRN prefix: drops a trailing `c` if present.
    pub fn strip_c(&self) -> LericoneSeq {
        let mut out = self.0.clone();
        if out.last() == Some(&Sym::C) {
            out.pop();
        }
        LericoneSeq(out)
    }

    pub fn ends_with(&self, suffix: &LericoneSeq) -> bool {
        self.0.ends_with(&suffix.0)
    }

    pub fn starts_with(&self, prefix: &LericoneSeq) -> bool {
        self.0.starts_with(&prefix.0)
    }

    /// Drops `len` symbols from the end.
    pub fn truncated(&self, len: usize) -> LericoneSeq {
        LericoneSeq(SmallVec::from_slice(&self.0[..len]))
    }

    /// Drops the first `count` symbols.
    pub fn tail(&self, count: usize) -> LericoneSeq {
        LericoneSeq(SmallVec::from_slice(&self.0[count..]))
    }

    fn require_lrn(&self) -> Result<()> {
        if self.is_lrn() {
            Ok(())
        } else {
            Err(Error::NotLrn(self.to_string()))
        }
    }

    /// The c-transform: a final `l` or `r` becomes `c`; anything else is
    /// returned unchanged.
    pub fn c_transform(&self) -> Result<LericoneSeq> {
        self.require_lrn()?;
        Ok(self.c_transform_unchecked())
    }

    fn c_transform_unchecked(&self) -> LericoneSeq {
        let mut out = self.0.clone();
        if let Some(last) = out.last_mut() {
            if matches!(*last, Sym::L | Sym::R) {
                *last = Sym::C;
            }
        }
        LericoneSeq(out)
    }

    /// The nn-free normal form, by one stack pass.
    pub fn reduct(&self) -> LericoneSeq {
        let mut out: SmallVec<[Sym; 15]> = SmallVec::with_capacity(self.len());
        for &s in &self.0 {
            if s == Sym::N && out.last() == Some(&Sym::N) {
                out.pop();
            } else {
                out.push(s);
            }
        }
        LericoneSeq(out)
    }

    pub fn equivalent(&self, other: &LericoneSeq) -> bool {
        self.reduct() == other.reduct()
    }

    /// Key under which faithful tables, assignments and closure identify
    /// sequences: the reduct, with a final `l` or `r` turned into `c`.
    ///
    /// `ε ~ nn`, yet a conditional at `ε` hands its parts to `c` while one at
    /// `nn` hands them to `lnn` and `rnn`. Keying by the reduct alone keeps
    /// `lnn` and `c` apart and so fails to make evaluation respect `~`. This
    /// key is a congruence for the evaluation clauses and agrees with the
    /// reduct on every sequence ending in `c`.
    pub fn faithful_key(&self) -> LericoneSeq {
        let reduced = self.reduct();
        if reduced.is_lrn() {
            reduced.c_transform_unchecked()
        } else {
            reduced
        }
    }

    pub fn polarity(&self) -> Result<Polarity> {
        self.require_lrn()?;
        let flips = self.0.iter().filter(|&&s| matches!(s, Sym::N | Sym::L)).count();
        Ok(if flips % 2 == 0 { Polarity::Positive } else { Polarity::Negative })
    }

    /// Sequence of the operand of a negation at `self`.
    pub fn neg_child(&self) -> LericoneSeq {
        self.prepend(Sym::N).expect("prepending n is always valid")
    }

    /// Sequences of the antecedent and consequent of a conditional at `self`.
    pub fn imp_children(&self) -> (LericoneSeq, LericoneSeq) {
        if self.is_empty() {
            (LericoneSeq::c(), LericoneSeq::c())
        } else {
            (
                self.prepend(Sym::L).expect("prepending l is always valid"),
                self.prepend(Sym::R).expect("prepending r is always valid"),
            )
        }
    }
}

impl fmt::Display for LericoneSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for LericoneSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str("ε")
        } else {
            write!(f, "{self}")
        }
    }
}

/// Accepts `""` (or `ε`) for the empty sequence.
impl FromStr for LericoneSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "ε" {
            return Ok(LericoneSeq::empty());
        }
        let syms: Option<Vec<Sym>> = s.chars().map(Sym::from_char).collect();
        let syms = syms.ok_or_else(|| Error::BadSequence(s.to_string()))?;
        LericoneSeq::from_syms(&syms)
    }
}

impl Serialize for LericoneSeq {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LericoneSeq {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Which sequences a table, assignment or closure check identifies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Plain,
    Faithful,
}

impl Mode {
    pub fn normalize(self, seq: &LericoneSeq) -> LericoneSeq {
        match self {
            Mode::Plain => seq.clone(),
            Mode::Faithful => seq.faithful_key(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Plain => "plain",
            Mode::Faithful => "faithful",
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "plain" => Ok(Mode::Plain),
            "faithful" => Ok(Mode::Faithful),
            other => Err(Error::Input(format!("unknown mode `{other}`"))),
        }
    }
}

/// The lericone sequence of the occurrence at `path`.
pub fn lrcn(root: &Formula, path: &OccurrencePath) -> Result<LericoneSeq> {
    root.subformula_at(path)?;
    let mut seq = LericoneSeq::empty();
    let mut node = root;
    for step in path.steps() {
        node = match (node, step) {
            (Formula::Not(a), Step::Only) => {
                seq = seq.neg_child();
                a
            }
            (Formula::And(a, b) | Formula::Or(a, b), _) => {
                if *step == Step::Left {
                    a
                } else {
                    b
                }
            }
            (Formula::Imp(a, b), _) => {
                let (l, r) = seq.imp_children();
                if *step == Step::Left {
                    seq = l;
                    a
                } else {
                    seq = r;
                    b
                }
            }
            _ => unreachable!("path validated above"),
        };
    }
    Ok(seq)
}

/// The maximal lericone parse tree: every occurrence path with its sequence.
pub type LrcnAnnotation = BTreeMap<OccurrencePath, LericoneSeq>;

pub fn annotate(root: &Formula) -> LrcnAnnotation {
    let mut out = BTreeMap::new();
    annotate_from(root, &LericoneSeq::empty(), &mut OccurrencePath::root(), &mut |path, seq, _| {
        out.insert(path.clone(), seq.clone());
    });
    out
}

/// Pre-order traversal of `f` with each node's sequence, starting at `seq`.
pub fn annotate_from<'a>(
    f: &'a Formula,
    seq: &LericoneSeq,
    path: &mut OccurrencePath,
    visit: &mut impl FnMut(&OccurrencePath, &LericoneSeq, &'a Formula),
) {
    visit(path, seq, f);
    match f {
        Formula::Atom(_) => {}
        Formula::Not(a) => {
            path.push(Step::Only);
            annotate_from(a, &seq.neg_child(), path, visit);
            path.pop();
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            path.push(Step::Left);
            annotate_from(a, seq, path, visit);
            path.pop();
            path.push(Step::Right);
            annotate_from(b, seq, path, visit);
            path.pop();
        }
        Formula::Imp(a, b) => {
            let (l, r) = seq.imp_children();
            path.push(Step::Left);
            annotate_from(a, &l, path, visit);
            path.pop();
            path.push(Step::Right);
            annotate_from(b, &r, path, visit);
            path.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> LericoneSeq {
        text.parse().unwrap()
    }

    fn f(text: &str) -> Formula {
        text.parse().unwrap()
    }

    #[test]
    fn construction_rejects_inner_c() {
        assert!("cl".parse::<LericoneSeq>().is_err());
        assert!("lcc".parse::<LericoneSeq>().is_err());
        assert!("lnc".parse::<LericoneSeq>().is_ok());
        assert!("x".parse::<LericoneSeq>().is_err());
        assert_eq!(s(""), LericoneSeq::empty());
        assert!(s("c").prepend(Sym::C).is_err());
        assert_eq!(s("c").prepend(Sym::N).unwrap(), s("nc"));
    }

    #[test]
    fn ordering_is_string_order() {
        let mut words = vec![s("r"), s("nc"), s(""), s("c"), s("lc"), s("l"), s("nnc")];
        words.sort();
        let rendered: Vec<String> = words.iter().map(|w| w.to_string()).collect();
        let mut expected = rendered.clone();
        expected.sort();
        assert_eq!(rendered, expected);
    }

    #[test]
    fn lrcn_examples() {
        let root = f("~p1 -> (p1 -> p2)");
        let first_p = OccurrencePath::new(vec![Step::Left, Step::Only]);
        assert_eq!(lrcn(&root, &first_p).unwrap(), s("nc"));
        let neg = f("~(p1 -> p2)");
        let inner = OccurrencePath::new(vec![Step::Only, Step::Left]);
        assert_eq!(lrcn(&neg, &inner).unwrap(), s("ln"));
        assert_eq!(lrcn(&f("p1"), &OccurrencePath::root()).unwrap(), s(""));
        assert!(lrcn(&f("p1"), &OccurrencePath::new(vec![Step::Left])).is_err());
    }

    #[test]
    fn annotate_examples() {
        let root = f("~p1 -> (p1 -> p2)");
        let ann = annotate(&root);
        let atoms: Vec<String> = root
            .atom_occurrences()
            .iter()
            .map(|(path, _)| ann[path].to_string())
            .collect();
        assert_eq!(atoms, ["nc", "lc", "rc"]);
        assert_eq!(ann.len(), root.paths().len());
        assert_eq!(ann[&OccurrencePath::root()], s(""));

        let ex = f("(p1 -> p1) -> p1");
        let ann = annotate(&ex);
        assert_eq!(ann[&OccurrencePath::new(vec![Step::Left, Step::Left])], s("lc"));
        assert_eq!(ann[&OccurrencePath::new(vec![Step::Right])], s("c"));

        let conj = f("p1 & p2");
        assert!(annotate(&conj).values().all(|seq| seq.is_empty()));
    }

    #[test]
    fn c_transform_examples() {
        assert_eq!(s("l").c_transform().unwrap(), s("c"));
        assert_eq!(s("rn").c_transform().unwrap(), s("rn"));
        assert_eq!(s("").c_transform().unwrap(), s(""));
        assert_eq!(s("nl").c_transform().unwrap(), s("nc"));
        assert!(s("lc").c_transform().is_err());
    }

    #[test]
    fn reduct_examples() {
        assert_eq!(s("nn").reduct(), s(""));
        assert_eq!(s("nnnc").reduct(), s("nc"));
        assert_eq!(s("lnnr").reduct(), s("lr"));
        assert!(s("nnc").equivalent(&s("c")));
        assert!(!s("lc").equivalent(&s("rc")));
        assert!(s("nnnn").equivalent(&s("")));
    }

    #[test]
    fn faithful_key_examples() {
        assert_eq!(s("lnn").faithful_key(), s("c"));
        assert_eq!(s("nnc").faithful_key(), s("c"));
        assert_eq!(s("nn").faithful_key(), s(""));
        assert_eq!(s("nl").faithful_key(), s("nc"));
        assert_eq!(s("n").faithful_key(), s("n"));
    }

    #[test]
    fn polarity_examples() {
        assert_eq!(s("").polarity().unwrap(), Polarity::Positive);
        assert_eq!(s("n").polarity().unwrap(), Polarity::Negative);
        assert_eq!(s("ln").polarity().unwrap(), Polarity::Positive);
        assert_eq!(s("r").polarity().unwrap(), Polarity::Positive);
        assert!(s("nc").polarity().is_err());
    }
}
