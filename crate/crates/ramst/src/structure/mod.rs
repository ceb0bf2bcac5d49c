//! Finite partial structures: the universal datum.
//!
//! A structure assigns to every identifier of a vocabulary a finite partial
//! function over atoms. Tokens (nullary identifiers) hold at most one entry
//! and play the role of program variables; pointers (positive arity) are
//! unbounded memory. All types here are immutable values: updates build new
//! structures, so snapshots and traces are free to share.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use smallvec::SmallVec;
use thiserror::Error;

mod access;
mod encode;
mod iso;
mod term;

pub use access::{accessible_atoms, free_structure, is_free};
pub use encode::{
    decode_chain, decode_numeral, decode_string, encode_chain, encode_numeral,
    encode_numeral_named, encode_string,
};
pub use iso::{isomorphic, ISO_ATOM_GUARD};
pub use term::{eval_term, Term};

/// An unstructured element of the carrier set. Two atoms are equal iff their
/// ids are equal. "Undefined" is not an atom; it is `None` at the
/// `Option<Atom>` level wherever a value may be missing.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(pub u32);

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@{}", self.0)
    }
}

/// Index of a declaration within one [`Vocabulary`]. Ids from different
/// vocabularies are matched by name, never by index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FuncId(pub u32);

impl FuncId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One identifier: name, arity, and (in ramified vocabularies) a rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuncDecl {
    pub name: String,
    pub arity: usize,
    pub rank: Option<u32>,
}

impl FuncDecl {
    pub fn is_token(&self) -> bool {
        self.arity == 0
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("identifier `{0}` declared twice")]
    DuplicateId(String),
    #[error("identifier `{0}` not declared")]
    Undeclared(String),
    #[error("arity mismatch for `{name}`: declared {declared}, used with {used}")]
    Arity {
        name: String,
        declared: usize,
        used: usize,
    },
    #[error("rank missing for `{0}` in ranked vocabulary")]
    MissingRank(String),
    #[error("term is not standard (contains omega)")]
    NonStandard,
    #[error("vocabulary containment violated: {0}")]
    Containment(String),
    #[error("vocabularies overlap on `{0}`")]
    Overlap(String),
    #[error("structure exceeds the {ISO_ATOM_GUARD}-atom guard for isomorphism/freeness checks")]
    SizeGuard,
    #[error("shape error: {0}")]
    Shape(String),
}

/// A finite set of identifiers, each with an arity and optionally a rank.
/// Ranks are present on all ids or on none (`ranked` flag).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Vocabulary {
    decls: Vec<FuncDecl>,
    ranked: bool,
}

impl Vocabulary {
    pub fn new() -> Self {
        Vocabulary::default()
    }

    /// Build an unranked vocabulary from `(name, arity)` pairs.
    pub fn unranked<'a>(
        ids: impl IntoIterator<Item = (&'a str, usize)>,
    ) -> Result<Self, StructureError> {
        let mut v = Vocabulary::new();
        for (name, arity) in ids {
            v.push(FuncDecl {
                name: name.to_string(),
                arity,
                rank: None,
            })?;
        }
        Ok(v)
    }

    /// Build a ramified vocabulary from `(name, arity, rank)` triples.
    pub fn ranked<'a>(
        ids: impl IntoIterator<Item = (&'a str, usize, u32)>,
    ) -> Result<Self, StructureError> {
        let mut v = Vocabulary::new();
        v.ranked = true;
        for (name, arity, rank) in ids {
            v.push(FuncDecl {
                name: name.to_string(),
                arity,
                rank: Some(rank),
            })?;
        }
        Ok(v)
    }

    pub fn push(&mut self, decl: FuncDecl) -> Result<FuncId, StructureError> {
        if self.id(&decl.name).is_some() {
            return Err(StructureError::DuplicateId(decl.name));
        }
        if self.ranked && decl.rank.is_none() && !self.decls.is_empty() {
            return Err(StructureError::MissingRank(decl.name));
        }
        self.ranked = decl.rank.is_some();
        if let Some(prev) = self.decls.iter().find(|d| d.rank.is_some() != self.ranked) {
            return Err(StructureError::MissingRank(prev.name.clone()));
        }
        let id = FuncId(self.decls.len() as u32);
        self.decls.push(decl);
        Ok(id)
    }

    pub fn is_ranked(&self) -> bool {
        self.ranked
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    pub fn id(&self, name: &str) -> Option<FuncId> {
        self.decls
            .iter()
            .position(|d| d.name == name)
            .map(|i| FuncId(i as u32))
    }

    pub fn decl(&self, id: FuncId) -> &FuncDecl {
        &self.decls[id.index()]
    }

    pub fn decls(&self) -> impl Iterator<Item = (FuncId, &FuncDecl)> {
        self.decls
            .iter()
            .enumerate()
            .map(|(i, d)| (FuncId(i as u32), d))
    }

    pub fn ids(&self) -> impl Iterator<Item = FuncId> {
        (0..self.decls.len() as u32).map(FuncId)
    }

    /// Rank of an id; 0 when the vocabulary is unranked.
    pub fn rank(&self, id: FuncId) -> u32 {
        self.decl(id).rank.unwrap_or(0)
    }

    /// Largest declared rank (0 for empty or unranked vocabularies).
    pub fn max_rank(&self) -> u32 {
        self.decls
            .iter()
            .filter_map(|d| d.rank)
            .max()
            .unwrap_or(0)
    }

    /// The set `V_r` of ids of rank `r`.
    pub fn rank_class(&self, r: u32) -> Vec<FuncId> {
        self.decls()
            .filter(|(_, d)| d.rank.unwrap_or(0) == r)
            .map(|(i, _)| i)
            .collect()
    }

    /// True when `self` declares every id of `other` with the same arity.
    pub fn contains(&self, other: &Vocabulary) -> bool {
        other.decls.iter().all(|d| {
            self.id(&d.name)
                .map(|i| self.decl(i).arity == d.arity)
                .unwrap_or(false)
        })
    }

    /// Drop all ranks.
    pub fn erase_ranks(&self) -> Vocabulary {
        Vocabulary {
            decls: self
                .decls
                .iter()
                .map(|d| FuncDecl {
                    name: d.name.clone(),
                    arity: d.arity,
                    rank: None,
                })
                .collect(),
            ranked: false,
        }
    }
}

/// Argument tuple of an entry. Strictness is structural: tuples hold atoms
/// only, so no entry can mention "undefined".
pub type ArgTuple = SmallVec<[Atom; 2]>;

/// A finite partial function over atoms, measured by its number of entries.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FpFunction {
    arity: usize,
    entries: BTreeMap<ArgTuple, Atom>,
}

impl FpFunction {
    pub fn new(arity: usize) -> Self {
        FpFunction {
            arity,
            entries: BTreeMap::new(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of entries: the size `|f|` of this component.
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, args: &[Atom]) -> Option<Atom> {
        debug_assert_eq!(args.len(), self.arity);
        self.entries.get(args).copied()
    }

    /// Add an entry, replacing any previous value for the tuple.
    pub fn insert(&mut self, args: ArgTuple, value: Atom) {
        assert_eq!(args.len(), self.arity, "entry tuple length != arity");
        self.entries.insert(args, value);
    }

    pub fn remove(&mut self, args: &[Atom]) -> Option<Atom> {
        self.entries.remove(args)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&ArgTuple, Atom)> {
        self.entries.iter().map(|(k, v)| (k, *v))
    }

    /// Domain: the set of argument tuples with an entry.
    pub fn domain(&self) -> impl Iterator<Item = &ArgTuple> {
        self.entries.keys()
    }

    /// Image: values of entries.
    pub fn image(&self) -> BTreeSet<Atom> {
        self.entries.values().copied().collect()
    }
}

/// Represent a finite k-ary relation (k >= 1) as an fp-function: each related
/// tuple maps to its own first coordinate.
pub fn relation_as_fpfunction(arity: usize, tuples: &BTreeSet<ArgTuple>) -> FpFunction {
    assert!(arity >= 1, "relations have arity >= 1");
    let mut f = FpFunction::new(arity);
    for t in tuples {
        assert_eq!(t.len(), arity);
        f.insert(t.clone(), t[0]);
    }
    f
}

/// The relation induced by an fp-function: its domain.
pub fn induced_relation(f: &FpFunction) -> BTreeSet<ArgTuple> {
    f.domain().cloned().collect()
}

/// An fp-structure: one component per vocabulary id. Raw equality (`==`)
/// compares atom ids exactly; semantic equality is [`isomorphic`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    vocab: Vocabulary,
    comps: Vec<FpFunction>,
    atom_names: BTreeMap<Atom, String>,
}

impl Structure {
    /// The empty structure over a vocabulary: every component empty.
    pub fn empty(vocab: Vocabulary) -> Self {
        let comps = vocab
            .decls
            .iter()
            .map(|d| FpFunction::new(d.arity))
            .collect();
        Structure {
            vocab,
            comps,
            atom_names: BTreeMap::new(),
        }
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn component(&self, id: FuncId) -> &FpFunction {
        &self.comps[id.index()]
    }

    pub fn component_mut(&mut self, id: FuncId) -> &mut FpFunction {
        &mut self.comps[id.index()]
    }

    pub fn components(&self) -> impl Iterator<Item = (FuncId, &FpFunction)> {
        self.comps
            .iter()
            .enumerate()
            .map(|(i, f)| (FuncId(i as u32), f))
    }

    /// Size of one id: its entry count.
    pub fn size_of(&self, id: FuncId) -> usize {
        self.comps[id.index()].size()
    }

    /// Size of a set of ids: the sum of their entry counts.
    pub fn size_of_set(&self, ids: &[FuncId]) -> usize {
        ids.iter().map(|i| self.size_of(*i)).sum()
    }

    /// Size of the whole structure.
    pub fn size(&self) -> usize {
        self.comps.iter().map(|f| f.size()).sum()
    }

    /// Size of rank class `V_j`.
    pub fn rank_size(&self, j: u32) -> usize {
        self.vocab
            .decls()
            .filter(|(_, d)| d.rank.unwrap_or(0) == j)
            .map(|(i, _)| self.size_of(i))
            .sum()
    }

    /// Sizes per rank `0..=max_rank`.
    pub fn rank_sizes(&self) -> Vec<usize> {
        let ell = self.vocab.max_rank();
        (0..=ell).map(|j| self.rank_size(j)).collect()
    }

    /// Domain: atoms occurring in argument tuples.
    pub fn domain(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        for f in &self.comps {
            for (args, _) in f.entries() {
                out.extend(args.iter().copied());
            }
        }
        out
    }

    /// Range: atoms occurring as entry values.
    pub fn range(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        for f in &self.comps {
            out.extend(f.image());
        }
        out
    }

    /// Scope: domain plus range.
    pub fn scope(&self) -> BTreeSet<Atom> {
        let mut out = self.domain();
        out.extend(self.range());
        out
    }

    /// Largest atom id in scope, if any. Fresh atoms must exceed this.
    pub fn max_atom(&self) -> Option<Atom> {
        self.scope().into_iter().next_back()
    }

    /// Attach a display name to an atom. Purely cosmetic.
    pub fn name_atom(&mut self, atom: Atom, name: impl Into<String>) {
        self.atom_names.insert(atom, name.into());
    }

    pub fn atom_name(&self, atom: Atom) -> Option<&str> {
        self.atom_names.get(&atom).map(|s| s.as_str())
    }

    pub fn atom_names(&self) -> &BTreeMap<Atom, String> {
        &self.atom_names
    }

    /// Trivial expansion to a larger vocabulary: shared ids keep their
    /// components, new ids are empty.
    pub fn expand(&self, w: &Vocabulary) -> Result<Structure, StructureError> {
        if !w.contains(&self.vocab) {
            return Err(StructureError::Containment(
                "expansion vocabulary must contain the structure's".into(),
            ));
        }
        let mut out = Structure::empty(w.clone());
        out.atom_names = self.atom_names.clone();
        for (id, d) in self.vocab.decls() {
            let wid = w.id(&d.name).expect("checked by contains");
            out.comps[wid.index()] = self.comps[id.index()].clone();
        }
        Ok(out)
    }

    /// Reduct to a sub-vocabulary.
    pub fn reduct(&self, v: &Vocabulary) -> Result<Structure, StructureError> {
        if !self.vocab.contains(v) {
            return Err(StructureError::Containment(
                "reduct vocabulary must be contained in the structure's".into(),
            ));
        }
        let mut out = Structure::empty(v.clone());
        for (vid, d) in v.decls() {
            let id = self.vocab.id(&d.name).expect("checked by contains");
            out.comps[vid.index()] = self.comps[id.index()].clone();
        }
        out.atom_names = self
            .atom_names
            .iter()
            .filter(|(a, _)| out.scope().contains(a))
            .map(|(a, n)| (*a, n.clone()))
            .collect();
        Ok(out)
    }

    /// Union of two structures over disjoint vocabularies (tuples of
    /// structures are represented as a single structure this way).
    pub fn merge(&self, other: &Structure) -> Result<Structure, StructureError> {
        let mut vocab = self.vocab.clone();
        for (_, d) in other.vocab.decls() {
            if vocab.id(&d.name).is_some() {
                return Err(StructureError::Overlap(d.name.clone()));
            }
            vocab.push(d.clone())?;
        }
        let mut out = Structure::empty(vocab);
        for (id, d) in self.vocab.decls() {
            let nid = out.vocab.id(&d.name).unwrap();
            out.comps[nid.index()] = self.comps[id.index()].clone();
        }
        for (id, d) in other.vocab.decls() {
            let nid = out.vocab.id(&d.name).unwrap();
            out.comps[nid.index()] = other.comps[id.index()].clone();
        }
        out.atom_names = self.atom_names.clone();
        for (a, n) in &other.atom_names {
            out.atom_names.entry(*a).or_insert_with(|| n.clone());
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use smallvec::smallvec;

    fn numeral_vocab() -> Vocabulary {
        Vocabulary::unranked([("z", 0), ("s", 1)]).unwrap()
    }

    #[test]
    fn vocabulary_rejects_duplicates() {
        let err = Vocabulary::unranked([("z", 0), ("z", 1)]).unwrap_err();
        assert_eq!(err, StructureError::DuplicateId("z".into()));
    }

    #[test]
    fn empty_structure_has_size_zero() {
        let s = Structure::empty(numeral_vocab());
        assert_eq!(s.size(), 0);
    }

    #[test]
    fn entry_bookkeeping_is_exact() {
        let mut s = Structure::empty(numeral_vocab());
        let sid = s.vocab().id("s").unwrap();
        let before = s.size();
        s.component_mut(sid).insert(smallvec![Atom(0)], Atom(1));
        assert_eq!(s.size(), before + 1);
        s.component_mut(sid).remove(&[Atom(0)]);
        assert_eq!(s.size(), before);
    }

    #[test]
    fn token_component_holds_at_most_one_entry() {
        let mut s = Structure::empty(numeral_vocab());
        let z = s.vocab().id("z").unwrap();
        s.component_mut(z).insert(smallvec![], Atom(3));
        s.component_mut(z).insert(smallvec![], Atom(4));
        assert_eq!(s.size_of(z), 1);
        assert_eq!(s.component(z).get(&[]), Some(Atom(4)));
    }

    #[test]
    fn expand_reduct_round_trip() {
        let mut s = Structure::empty(numeral_vocab());
        let z = s.vocab().id("z").unwrap();
        s.component_mut(z).insert(smallvec![], Atom(0));
        let w = Vocabulary::unranked([("z", 0), ("s", 1), ("g", 2)]).unwrap();
        let e = s.expand(&w).unwrap();
        assert_eq!(e.size(), s.size());
        let back = e.reduct(s.vocab()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn merge_adds_sizes() {
        let mut a = Structure::empty(Vocabulary::unranked([("c", 0), ("f", 1)]).unwrap());
        let f = a.vocab().id("f").unwrap();
        a.component_mut(f).insert(smallvec![Atom(0)], Atom(1));
        a.component_mut(f).insert(smallvec![Atom(1)], Atom(2));
        let mut b = Structure::empty(Vocabulary::unranked([("d", 0), ("g", 1)]).unwrap());
        let g = b.vocab().id("g").unwrap();
        b.component_mut(g).insert(smallvec![Atom(7)], Atom(8));
        let m = a.merge(&b).unwrap();
        assert_eq!(m.size(), a.size() + b.size());
        assert!(a.merge(&a).is_err());
    }

    #[test]
    fn relation_round_trips() {
        let mut rel = BTreeSet::new();
        rel.insert(smallvec![Atom(1), Atom(2)] as ArgTuple);
        rel.insert(smallvec![Atom(2), Atom(2)] as ArgTuple);
        let f = relation_as_fpfunction(2, &rel);
        assert_eq!(f.size(), 2);
        assert_eq!(f.get(&[Atom(1), Atom(2)]), Some(Atom(1)));
        assert_eq!(induced_relation(&f), rel);
    }
}
