//! Plain and lericone substitutions, their algebra, Gödel coding and skeletons.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Atom, Formula, OccurrencePath, Sequent};
use crate::seq::{annotate_from, LericoneSeq, Mode, Sym};

/// Anything that sends an atom occurrence under a sequence to a formula.
pub trait AtomImage {
    fn image(&self, seq: &LericoneSeq, atom: &Atom) -> Formula;
}

/// `s(x, f)`: rewrites every atom of `f` by its image under the sequence the
/// occurrence receives when `f` itself sits at `x`.
pub fn apply_lericone<S: AtomImage + ?Sized>(s: &S, x: &LericoneSeq, f: &Formula) -> Formula {
    match f {
        Formula::Atom(p) => s.image(x, p),
        Formula::Not(a) => Formula::not(apply_lericone(s, &x.neg_child(), a)),
        Formula::And(a, b) => Formula::and(apply_lericone(s, x, a), apply_lericone(s, x, b)),
        Formula::Or(a, b) => Formula::or(apply_lericone(s, x, a), apply_lericone(s, x, b)),
        Formula::Imp(a, b) => {
            let (l, r) = x.imp_children();
            Formula::imp(apply_lericone(s, &l, a), apply_lericone(s, &r, b))
        }
    }
}

/// A sequence-independent substitution; atoms off the table are fixed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PlainSubstitution(BTreeMap<Atom, Formula>);

impl PlainSubstitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, atom: Atom, image: Formula) {
        if image == Formula::Atom(atom.clone()) {
            self.0.remove(&atom);
        } else {
            self.0.insert(atom, image);
        }
    }

    pub fn get(&self, atom: &Atom) -> Formula {
        self.0.get(atom).cloned().unwrap_or_else(|| Formula::Atom(atom.clone()))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Atom, &Formula)> {
        self.0.iter()
    }

    pub fn apply(&self, f: &Formula) -> Formula {
        apply_plain(self, f)
    }
}

impl AtomImage for PlainSubstitution {
    fn image(&self, _seq: &LericoneSeq, atom: &Atom) -> Formula {
        self.get(atom)
    }
}

pub fn apply_plain(s: &PlainSubstitution, f: &Formula) -> Formula {
    match f {
        Formula::Atom(p) => s.get(p),
        Formula::Not(a) => Formula::not(apply_plain(s, a)),
        Formula::And(a, b) => Formula::and(apply_plain(s, a), apply_plain(s, b)),
        Formula::Or(a, b) => Formula::or(apply_plain(s, a), apply_plain(s, b)),
        Formula::Imp(a, b) => Formula::imp(apply_plain(s, a), apply_plain(s, b)),
    }
}

/// How a substitution table identifies sequences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Keying {
    /// Images ignore the sequence: a plain substitution.
    Uniform,
    /// Every sequence is its own key.
    Exact,
    /// Sequences with the same faithful key share an image.
    Faithful,
}

impl Keying {
    pub fn normalize(self, seq: &LericoneSeq) -> LericoneSeq {
        match self {
            Keying::Uniform => LericoneSeq::empty(),
            Keying::Exact => seq.clone(),
            Keying::Faithful => seq.faithful_key(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Keying::Uniform => "uniform",
            Keying::Exact => "exact",
            Keying::Faithful => "faithful",
        }
    }
}

impl fmt::Display for Keying {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub type Key = (LericoneSeq, Atom);

/// A lericone substitution: a finite table with identity default.
///
/// Keys are stored normalized for the keying, so a faithful table can only
/// ever describe a faithful substitution.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LericoneSubstitution {
    keying: Keying,
    table: BTreeMap<Key, Formula>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubstitutionEntry {
    pub seq: LericoneSeq,
    pub atom: Atom,
    pub image: Formula,
}

impl LericoneSubstitution {
    pub fn identity(keying: Keying) -> Self {
        LericoneSubstitution { keying, table: BTreeMap::new() }
    }

    pub fn from_plain(plain: &PlainSubstitution) -> Self {
        let mut out = Self::identity(Keying::Uniform);
        for (atom, image) in plain.entries() {
            out.table.insert((LericoneSeq::empty(), atom.clone()), image.clone());
        }
        out
    }

    /// Builds a table, rejecting entries that normalize to the same key with
    /// different images.
    pub fn from_entries(keying: Keying, entries: impl IntoIterator<Item = SubstitutionEntry>) -> Result<Self> {
        let mut out = Self::identity(keying);
        let mut seen: BTreeMap<Key, (LericoneSeq, Formula)> = BTreeMap::new();
        for SubstitutionEntry { seq, atom, image } in entries {
            let key = (keying.normalize(&seq), atom);
            if let Some((first_seq, first)) = seen.get(&key) {
                if *first != image {
                    return Err(Error::NotFaithful(format!(
                        "({first_seq:?}, p{}) and ({seq:?}, p{}) share a {keying} key but map to `{first}` and `{image}`",
                        key.1, key.1
                    )));
                }
                continue;
            }
            seen.insert(key.clone(), (seq, image.clone()));
            out.insert_normalized(key, image);
        }
        Ok(out)
    }

    pub fn keying(&self) -> Keying {
        self.keying
    }

    /// Sets the image for every sequence sharing `seq`'s key.
    pub fn insert(&mut self, seq: &LericoneSeq, atom: Atom, image: Formula) {
        let key = (self.keying.normalize(seq), atom);
        self.insert_normalized(key, image);
    }

    fn insert_normalized(&mut self, key: Key, image: Formula) {
        if image == Formula::Atom(key.1.clone()) {
            self.table.remove(&key);
        } else {
            self.table.insert(key, image);
        }
    }

    /// Non-identity entries, keyed by normalized sequence.
    pub fn entries(&self) -> impl Iterator<Item = (&Key, &Formula)> {
        self.table.iter()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn to_entries(&self) -> Vec<SubstitutionEntry> {
        self.table
            .iter()
            .map(|((seq, atom), image)| SubstitutionEntry { seq: seq.clone(), atom: atom.clone(), image: image.clone() })
            .collect()
    }

    pub fn is_plain(&self) -> bool {
        self.keying == Keying::Uniform || self.table.is_empty()
    }

    /// Faithful keying enforces faithfulness; an exact table is faithful only
    /// when it has no entries, since its equivalence classes are infinite and
    /// only the listed member would move.
    pub fn is_faithful(&self) -> bool {
        self.keying != Keying::Exact || self.table.is_empty()
    }

    /// Reinterprets an exact table under faithful keying, failing if two
    /// entries with the same faithful key disagree.
    pub fn to_faithful(&self) -> Result<Self> {
        Self::from_entries(Keying::Faithful, self.to_entries())
    }

    pub fn apply(&self, x: &LericoneSeq, f: &Formula) -> Formula {
        apply_lericone(self, x, f)
    }

    /// `σ ⋆ τ`: `(x, p) ↦ σ(x, τ(x, p))`.
    pub fn star(&self, tau: &LericoneSubstitution) -> Result<Self> {
        if self.keying != tau.keying {
            return Err(Error::KeyingMismatch(self.keying.name(), tau.keying.name()));
        }
        let mut out = Self::identity(self.keying);
        for key in self.table.keys().chain(tau.table.keys()) {
            if out.table.contains_key(key) {
                continue;
            }
            let (seq, atom) = key;
            let image = self.apply(seq, &tau.image(seq, atom));
            out.insert_normalized(key.clone(), image);
        }
        Ok(out)
    }

    /// `t(σ)`: at `x·c` it behaves like `σ` at `t(x)`. A uniform table is
    /// returned unchanged; that only alters the unconstrained values off
    /// `c`-terminated keys.
    pub fn t_of(&self) -> Self {
        if self.keying == Keying::Uniform {
            return self.clone();
        }
        let mut out = Self::identity(self.keying);
        for ((k, atom), _) in &self.table {
            // LRN words w with t(w) = k
            let preimages: Vec<LericoneSeq> = match k.last() {
                Some(Sym::C) => {
                    let v = k.strip_c();
                    vec![
                        v.concat(&LericoneSeq::from_syms(&[Sym::L]).unwrap()).unwrap(),
                        v.concat(&LericoneSeq::from_syms(&[Sym::R]).unwrap()).unwrap(),
                    ]
                }
                None | Some(Sym::N) => vec![k.clone()],
                Some(Sym::L | Sym::R) => vec![],
            };
            for w in preimages {
                let t_w = w.c_transform().expect("preimages are c-free");
                let image = self.image(&t_w, atom);
                out.insert(&w.with_c().unwrap(), atom.clone(), image);
            }
        }
        out
    }

    /// `σ^y`: at `x·c` it behaves like `σ` at `x·y·c`.
    pub fn shift(&self, y: &LericoneSeq) -> Result<Self> {
        if !y.is_lrn() {
            return Err(Error::NotLrn(y.to_string()));
        }
        if self.keying == Keying::Uniform {
            return Ok(self.clone());
        }
        let y_red = y.reduct();
        let mut out = Self::identity(self.keying);
        for ((k, atom), _) in &self.table {
            if !k.ends_with_c() {
                continue;
            }
            let u = k.strip_c();
            let mut candidates = Vec::new();
            match self.keying {
                Keying::Exact => {
                    if u.ends_with(y) {
                        candidates.push(u.truncated(u.len() - y.len()));
                    }
                }
                Keying::Faithful => {
                    if u.ends_with(&y_red) {
                        candidates.push(u.truncated(u.len() - y_red.len()));
                    }
                    // w ending in n can cancel a leading n of y
                    if y_red.first() == Some(Sym::N) {
                        let rest = y_red.tail(1);
                        if u.ends_with(&rest) {
                            let w = u.truncated(u.len() - rest.len());
                            candidates.push(w.concat(&"n".parse().unwrap()).unwrap());
                        }
                    }
                    candidates.retain(|w| {
                        *w == w.reduct() && w.concat(y).unwrap().with_c().unwrap().faithful_key() == *k
                    });
                }
                Keying::Uniform => unreachable!(),
            }
            for w in candidates {
                let image = self.image(&w.concat(y).unwrap().with_c().unwrap(), atom);
                out.insert(&w.with_c().unwrap(), atom.clone(), image);
            }
        }
        Ok(out)
    }
}

impl AtomImage for LericoneSubstitution {
    fn image(&self, seq: &LericoneSeq, atom: &Atom) -> Formula {
        let key = (self.keying.normalize(seq), atom.clone());
        self.table.get(&key).cloned().unwrap_or_else(|| Formula::Atom(atom.clone()))
    }
}

impl fmt::Debug for LericoneSubstitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{", self.keying)?;
        for (i, ((seq, atom), image)) in self.table.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({seq:?},p{atom})↦{image}")?;
        }
        f.write_str("}")
    }
}

#[derive(Serialize, Deserialize)]
struct WireSubstitution {
    keying: Keying,
    entries: Vec<SubstitutionEntry>,
}

impl Serialize for LericoneSubstitution {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        WireSubstitution { keying: self.keying, entries: self.to_entries() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LericoneSubstitution {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = WireSubstitution::deserialize(deserializer)?;
        LericoneSubstitution::from_entries(wire.keying, wire.entries).map_err(serde::de::Error::custom)
    }
}

/// Parses a substitution file: either `{"keying": ..., "entries": [...]}` or a
/// bare list of entries, which gets `default_keying`.
pub fn substitution_from_json(text: &str, default_keying: Keying) -> Result<LericoneSubstitution> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Either {
        Tagged(WireSubstitution),
        Bare(Vec<SubstitutionEntry>),
    }
    let parsed: Either = serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))?;
    match parsed {
        Either::Tagged(w) => LericoneSubstitution::from_entries(w.keying, w.entries),
        Either::Bare(entries) => LericoneSubstitution::from_entries(default_keying, entries),
    }
}

fn symbol_code(sym: Sym) -> u32 {
    match sym {
        Sym::L => 1,
        Sym::R => 2,
        Sym::C => 3,
        Sym::N => 4,
    }
}

/// The first `count` primes.
fn primes(count: usize) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(count);
    let mut candidate = 2u64;
    while out.len() < count {
        if out.iter().take_while(|&&p| p * p <= candidate).all(|&p| candidate % p != 0) {
            out.push(candidate);
        }
        candidate += 1;
    }
    out
}

/// `g(x)`: the i-th symbol from the left contributes the (i+1)-th prime raised
/// to its code, so the first symbol is carried by 3.
pub fn godel_seq(x: &LericoneSeq) -> BigUint {
    let ps = primes(x.len() + 1);
    x.syms()
        .iter()
        .enumerate()
        .fold(BigUint::from(1u32), |acc, (i, &sym)| acc * BigUint::from(ps[i + 1]).pow(symbol_code(sym)))
}

/// Largest atom index accepted by the Gödel coding; `2^i` is materialized.
pub const GODEL_MAX_ATOM: u64 = 1 << 16;

/// `g(x, p_i) = p_{2^i · g(x)}`.
pub fn godel(x: &LericoneSeq, p: &Atom) -> Result<Atom> {
    let i = p
        .to_u64()
        .filter(|&i| i <= GODEL_MAX_ATOM)
        .ok_or_else(|| Error::Input(format!("atom p{p} is too large for the Gödel coding")))?;
    Atom::from_big(godel_seq(x) << i)
}

/// The Gödel coding as an atomic injective substitution.
#[derive(Clone, Copy, Debug, Default)]
pub struct GodelCoding;

impl AtomImage for GodelCoding {
    /// # Panics
    /// On atoms above [`GODEL_MAX_ATOM`]; [`godel_substitute`] checks first.
    fn image(&self, seq: &LericoneSeq, atom: &Atom) -> Formula {
        Formula::Atom(godel(seq, atom).expect("atom index within the Gödel limit"))
    }
}

pub fn godel_substitute(f: &Formula) -> Result<Formula> {
    for atom in f.atoms() {
        godel(&LericoneSeq::empty(), &atom)?;
    }
    Ok(apply_lericone(&GodelCoding, &LericoneSeq::empty(), f))
}

/// How a skeleton numbers its fresh atoms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Numbering {
    /// 1, 2, 3, ... in order of first encounter.
    #[default]
    Compact,
    Godel,
}

/// An injective renaming of (sequence, atom) keys to fresh atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RenamingTable {
    mode: Mode,
    forward: BTreeMap<Key, Atom>,
    backward: BTreeMap<Atom, Key>,
    // keys in order of first encounter
    order: Vec<Key>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenamingEntry {
    pub seq: LericoneSeq,
    pub atom: Atom,
    pub fresh: Atom,
}

impl RenamingTable {
    pub fn new(mode: Mode) -> Self {
        RenamingTable { mode, ..Default::default() }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Fresh atom for a key, allocating it on first sight.
    pub fn intern(&mut self, seq: &LericoneSeq, atom: &Atom, numbering: Numbering) -> Atom {
        let key = (self.mode.normalize(seq), atom.clone());
        if let Some(fresh) = self.forward.get(&key) {
            return fresh.clone();
        }
        let fresh = match numbering {
            Numbering::Compact => Atom::p(self.order.len() as u64 + 1),
            Numbering::Godel => godel(&key.0, atom).expect("atom index within the Gödel limit"),
        };
        self.forward.insert(key.clone(), fresh.clone());
        self.backward.insert(fresh.clone(), key.clone());
        self.order.push(key);
        fresh
    }

    pub fn fresh_for(&self, seq: &LericoneSeq, atom: &Atom) -> Option<&Atom> {
        self.forward.get(&(self.mode.normalize(seq), atom.clone()))
    }

    pub fn source_of(&self, fresh: &Atom) -> Option<&Key> {
        self.backward.get(fresh)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Keys in order of first encounter.
    pub fn keys(&self) -> &[Key] {
        &self.order
    }

    pub fn entries(&self) -> Vec<RenamingEntry> {
        self.order
            .iter()
            .map(|key| RenamingEntry { seq: key.0.clone(), atom: key.1.clone(), fresh: self.forward[key].clone() })
            .collect()
    }
}

impl AtomImage for RenamingTable {
    fn image(&self, seq: &LericoneSeq, atom: &Atom) -> Formula {
        Formula::Atom(self.fresh_for(seq, atom).cloned().unwrap_or_else(|| atom.clone()))
    }
}

/// `ι⁻¹`: sends each fresh atom back to its source atom.
pub fn inverse_rename(table: &RenamingTable) -> PlainSubstitution {
    let mut out = PlainSubstitution::new();
    for (fresh, (_, atom)) in &table.backward {
        out.insert(fresh.clone(), Formula::Atom(atom.clone()));
    }
    out
}

/// Replaces every atom occurrence by a fresh atom determined by its key.
pub fn skeletonize(s: &Sequent, mode: Mode, numbering: Numbering) -> Result<(Sequent, RenamingTable)> {
    if numbering == Numbering::Godel {
        for f in s.formulas() {
            for atom in f.atoms() {
                godel(&LericoneSeq::empty(), &atom)?;
            }
        }
    }
    let mut table = RenamingTable::new(mode);
    for f in s.formulas() {
        annotate_from(f, &LericoneSeq::empty(), &mut OccurrencePath::root(), &mut |_, seq, node| {
            if let Formula::Atom(p) = node {
                table.intern(seq, p, numbering);
            }
        });
    }
    let rename = |f: &Formula| apply_lericone(&table, &LericoneSeq::empty(), f);
    let skeleton = Sequent::new(s.premises.iter().map(rename).collect(), rename(&s.conclusion));
    Ok((skeleton, table))
}
