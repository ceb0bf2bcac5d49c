//! Mutable execution state behind the immutable-structure facade.
//!
//! A run converts the input structure into indexed hash-map components,
//! applies updates in place with O(1) size bookkeeping, and converts back
//! at the end. Token components are a plain `Option<Atom>`, since they are
//! touched constantly by walk tokens.

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::structure::{ArgTuple, Atom, FpFunction, Structure, Vocabulary};
use crate::structure::Term;

pub(crate) enum Comp {
    Token(Option<Atom>),
    Unary(FxHashMap<Atom, Atom>),
    Wide(FxHashMap<ArgTuple, Atom>),
}

impl Comp {
    fn size(&self) -> u64 {
        match self {
            Comp::Token(v) => v.is_some() as u64,
            Comp::Unary(m) => m.len() as u64,
            Comp::Wide(m) => m.len() as u64,
        }
    }
}

/// Issues atoms outside the scope of everything seen so far. Monotone: an
/// issued atom is never reused, which makes freshness trivial. The seed
/// offsets the id stream so different seeds produce different (isomorphic)
/// atoms.
#[derive(Clone, Copy, Debug)]
pub struct AtomAllocator {
    next: u32,
}

impl AtomAllocator {
    pub fn above(max_atom: Option<Atom>, seed: u64) -> AtomAllocator {
        let base = max_atom.map(|a| a.0 + 1).unwrap_or(0);
        AtomAllocator {
            next: base + (seed % 97) as u32,
        }
    }

    pub fn fresh(&mut self) -> Atom {
        let a = Atom(self.next);
        self.next = self
            .next
            .checked_add(1)
            .expect("atom allocator exhausted the id space");
        a
    }
}

pub(crate) struct ExecState {
    pub comps: Vec<Comp>,
    pub arities: Vec<usize>,
    pub ranks: Vec<u32>,
    pub names: Vec<String>,
    pub sizes: Vec<u64>,
    pub rank_size: Vec<u64>,
    pub rank_hw: Vec<u64>,
    /// Cumulative active-extension / active-contraction counters per id.
    pub cum_ext: Vec<u64>,
    pub cum_con: Vec<u64>,
    pub alloc: AtomAllocator,
    /// Index of the hidden scratch token that implements `set` sugar.
    pub scratch: usize,
}

impl ExecState {
    /// Lay out the unit vocabulary (plus the hidden scratch slot) and load
    /// the input components by name. Ids missing from the input start
    /// empty: the trivial expansion.
    pub fn load(vocab: &Vocabulary, input: &Structure, seed: u64) -> Result<ExecState, String> {
        for (_, d) in input.vocab().decls() {
            match vocab.id(&d.name) {
                Some(i) if vocab.decl(i).arity == d.arity => {}
                Some(_) => {
                    return Err(format!(
                        "input id `{}` has a different arity than the unit declares",
                        d.name
                    ))
                }
                None => {
                    return Err(format!(
                        "input id `{}` is not in the unit vocabulary",
                        d.name
                    ))
                }
            }
        }
        let ell = vocab.max_rank();
        let n = vocab.len() + 1;
        let mut st = ExecState {
            comps: Vec::with_capacity(n),
            arities: Vec::with_capacity(n),
            ranks: Vec::with_capacity(n),
            names: Vec::with_capacity(n),
            sizes: vec![0; n],
            rank_size: vec![0; ell as usize + 1],
            rank_hw: vec![0; ell as usize + 1],
            cum_ext: vec![0; n],
            cum_con: vec![0; n],
            alloc: AtomAllocator::above(input.max_atom(), seed),
            scratch: vocab.len(),
        };
        for (id, d) in vocab.decls() {
            let rank = d.rank.unwrap_or(0);
            st.arities.push(d.arity);
            st.ranks.push(rank);
            st.names.push(d.name.clone());
            let mut comp = match d.arity {
                0 => Comp::Token(None),
                1 => Comp::Unary(FxHashMap::default()),
                _ => Comp::Wide(FxHashMap::default()),
            };
            if let Some(iid) = input.vocab().id(&d.name) {
                let f = input.component(iid);
                match &mut comp {
                    Comp::Token(slot) => *slot = f.get(&[]),
                    Comp::Unary(m) => {
                        for (args, val) in f.entries() {
                            m.insert(args[0], val);
                        }
                    }
                    Comp::Wide(m) => {
                        for (args, val) in f.entries() {
                            m.insert(args.clone(), val);
                        }
                    }
                }
            }
            let sz = comp.size();
            st.sizes[id.index()] = sz;
            st.rank_size[rank as usize] += sz;
            st.comps.push(comp);
        }
        // Hidden scratch token for assignment sugar: rank 0, arity 0.
        st.arities.push(0);
        st.ranks.push(0);
        st.names.push("$a".into());
        st.comps.push(Comp::Token(None));
        st.rank_hw.copy_from_slice(&st.rank_size);
        Ok(st)
    }

    pub fn total_size(&self) -> u64 {
        self.sizes.iter().sum()
    }

    pub fn variant_size(&self, ids: &[crate::structure::FuncId]) -> u64 {
        ids.iter().map(|i| self.sizes[i.index()]).sum()
    }

    pub fn lookup(&self, head: usize, args: &[Atom]) -> Option<Atom> {
        match &self.comps[head] {
            Comp::Token(v) => *v,
            Comp::Unary(m) => m.get(&args[0]).copied(),
            Comp::Wide(m) => m.get(args).copied(),
        }
    }

    pub fn eval(&self, t: &Term) -> Option<Atom> {
        match t {
            Term::Omega => None,
            Term::App(id, args) => {
                let mut vals: SmallVec<[Atom; 2]> = SmallVec::new();
                for a in args {
                    vals.push(self.eval(a)?);
                }
                self.lookup(id.index(), &vals)
            }
        }
    }

    fn bump(&mut self, id: usize, delta: i64) {
        let r = self.ranks[id] as usize;
        if delta > 0 {
            self.sizes[id] += 1;
            self.rank_size[r] += 1;
            self.cum_ext[id] += 1;
            if self.rank_size[r] > self.rank_hw[r] {
                self.rank_hw[r] = self.rank_size[r];
            }
        } else {
            self.sizes[id] -= 1;
            self.rank_size[r] -= 1;
            self.cum_con[id] += 1;
        }
    }

    /// Extension: active only when all arguments and the value denote and
    /// the spot is empty.
    pub fn apply_ext(&mut self, head: usize, args: &[Atom], val: Atom) -> bool {
        let inserted = match &mut self.comps[head] {
            Comp::Token(slot) => {
                if slot.is_none() {
                    *slot = Some(val);
                    true
                } else {
                    false
                }
            }
            Comp::Unary(m) => match m.entry(args[0]) {
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(val);
                    true
                }
                _ => false,
            },
            Comp::Wide(m) => match m.entry(SmallVec::from_slice(args)) {
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(val);
                    true
                }
                _ => false,
            },
        };
        if inserted {
            self.bump(head, 1);
        }
        inserted
    }

    /// Contraction: active when the entry was present.
    pub fn apply_con(&mut self, head: usize, args: &[Atom]) -> bool {
        let removed = match &mut self.comps[head] {
            Comp::Token(slot) => slot.take().is_some(),
            Comp::Unary(m) => m.remove(&args[0]).is_some(),
            Comp::Wide(m) => m.remove(args).is_some(),
        };
        if removed {
            self.bump(head, -1);
        }
        removed
    }

    /// Inception: binds an undefined token to a fresh atom; counts as an
    /// active extension in the ledger.
    pub fn apply_inc(&mut self, token: usize) -> bool {
        match &mut self.comps[token] {
            Comp::Token(slot) if slot.is_none() => {
                *slot = Some(self.alloc.fresh());
                self.bump(token, 1);
                true
            }
            _ => false,
        }
    }

    /// Convert back to an immutable structure over the unit vocabulary.
    /// The hidden scratch slot is dropped (it is empty after every
    /// completed assignment).
    pub fn into_structure(mut self, vocab: &Vocabulary) -> Structure {
        let mut out = Structure::empty(vocab.clone());
        for (id, _) in vocab.decls() {
            let f: &mut FpFunction = out.component_mut(id);
            match &mut self.comps[id.index()] {
                Comp::Token(v) => {
                    if let Some(a) = v {
                        f.insert(SmallVec::new(), *a);
                    }
                }
                Comp::Unary(m) => {
                    for (k, v) in m.drain() {
                        f.insert(SmallVec::from_slice(&[k]), v);
                    }
                }
                Comp::Wide(m) => {
                    for (k, v) in m.drain() {
                        f.insert(k, v);
                    }
                }
            }
        }
        out
    }
}
