//! Isomorphism of fp-structures.
//!
//! Two structures over the same vocabulary are isomorphic when an atom
//! bijection carries every entry of one onto the other and back. The check
//! refines an atom coloring seeded from token values and falls back to
//! backtracking over the remaining color classes. Correct for all
//! structures; fast for accessible ones, which refine to near-discrete
//! colorings.

use std::collections::BTreeMap;

use super::{Atom, Structure, StructureError};

/// Hard cap on scope size for `isomorphic` and `is_free`. This is a
/// desk-scale tool; adversarial graph isomorphism is out of scope.
pub const ISO_ATOM_GUARD: usize = 10_000;

struct FlatEntry {
    comp: usize,
    args: Vec<usize>,
    val: usize,
}

struct Side {
    atoms: Vec<Atom>,
    entries: Vec<FlatEntry>,
    incident: Vec<Vec<usize>>,
    token_sig: Vec<Vec<usize>>,
}

fn flatten(s: &Structure, comp_order: &[super::FuncId]) -> Side {
    let atoms: Vec<Atom> = s.scope().into_iter().collect();
    let index: BTreeMap<Atom, usize> = atoms.iter().enumerate().map(|(i, a)| (*a, i)).collect();
    let mut entries = Vec::new();
    let mut incident = vec![Vec::new(); atoms.len()];
    let mut token_sig = vec![Vec::new(); atoms.len()];
    for (ci, id) in comp_order.iter().enumerate() {
        let f = s.component(*id);
        for (args, val) in f.entries() {
            if f.arity() == 0 {
                token_sig[index[&val]].push(ci);
                continue;
            }
            let e = FlatEntry {
                comp: ci,
                args: args.iter().map(|a| index[a]).collect(),
                val: index[&val],
            };
            let ei = entries.len();
            for a in &e.args {
                if !incident[*a].contains(&ei) {
                    incident[*a].push(ei);
                }
            }
            if !incident[e.val].contains(&ei) {
                incident[e.val].push(ei);
            }
            entries.push(e);
        }
    }
    for sig in &mut token_sig {
        sig.sort_unstable();
    }
    Side {
        atoms,
        entries,
        incident,
        token_sig,
    }
}

/// Number signatures by their sorted order, so the two sides assign the
/// same color to the same signature.
fn canonical_numbering<S: Ord + Clone>(sigs: &[S]) -> (Vec<u32>, usize) {
    let palette: BTreeMap<&S, u32> = {
        let uniq: std::collections::BTreeSet<&S> = sigs.iter().collect();
        uniq.into_iter()
            .enumerate()
            .map(|(i, s)| (s, i as u32))
            .collect()
    };
    let out = sigs.iter().map(|s| palette[s]).collect();
    (out, palette.len())
}

/// One refinement round: color atoms by their current color plus the
/// multiset of entry contexts they occur in. Returns the new coloring and
/// the number of distinct colors.
fn refine(side: &Side, colors: &[u32]) -> (Vec<u32>, usize) {
    let mut sigs: Vec<(u32, Vec<Vec<u32>>)> = Vec::with_capacity(side.atoms.len());
    for (ai, _) in side.atoms.iter().enumerate() {
        let mut ctx: Vec<Vec<u32>> = Vec::new();
        for &ei in &side.incident[ai] {
            let e = &side.entries[ei];
            let mut c = Vec::with_capacity(e.args.len() + 3);
            c.push(e.comp as u32);
            for (p, a) in e.args.iter().enumerate() {
                if *a == ai {
                    c.push(p as u32 + 1);
                }
            }
            if e.val == ai {
                c.push(u32::MAX);
            }
            c.push(u32::MAX - 1);
            for a in &e.args {
                c.push(colors[*a]);
            }
            c.push(colors[e.val]);
            ctx.push(c);
        }
        ctx.sort();
        sigs.push((colors[ai], ctx));
    }
    canonical_numbering(&sigs)
}

fn initial_colors(side: &Side) -> (Vec<u32>, usize) {
    canonical_numbering(&side.token_sig)
}

fn histogram(colors: &[u32]) -> BTreeMap<u32, usize> {
    let mut h = BTreeMap::new();
    for c in colors {
        *h.entry(*c).or_insert(0) += 1;
    }
    h
}

/// Backtracking completion: map atoms of side 1 to same-colored atoms of
/// side 2, checking entry consistency as soon as an entry becomes fully
/// mapped.
fn search(s1: &Side, s2: &Side, c1: &[u32], c2: &[u32]) -> bool {
    let n = s1.atoms.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&a| (c1[a], std::cmp::Reverse(s1.incident[a].len())));
    let mut mapping = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn consistent(s1: &Side, s2: &Side, mapping: &[usize], just_mapped: usize) -> bool {
        'entry: for &ei in &s1.incident[just_mapped] {
            let e = &s1.entries[ei];
            let mut img_args = Vec::with_capacity(e.args.len());
            for a in &e.args {
                if mapping[*a] == usize::MAX {
                    continue 'entry;
                }
                img_args.push(mapping[*a]);
            }
            if mapping[e.val] == usize::MAX {
                continue;
            }
            let img_val = mapping[e.val];
            let ok = s2
                .entries
                .iter()
                .any(|f| f.comp == e.comp && f.args == img_args && f.val == img_val);
            if !ok {
                return false;
            }
        }
        true
    }

    fn dfs(
        pos: usize,
        order: &[usize],
        s1: &Side,
        s2: &Side,
        c1: &[u32],
        c2: &[u32],
        mapping: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let a = order[pos];
        for b in 0..s2.atoms.len() {
            if used[b] || c2[b] != c1[a] {
                continue;
            }
            mapping[a] = b;
            used[b] = true;
            if consistent(s1, s2, mapping, a)
                && dfs(pos + 1, order, s1, s2, c1, c2, mapping, used)
            {
                return true;
            }
            mapping[a] = usize::MAX;
            used[b] = false;
        }
        false
    }

    dfs(0, &order, s1, s2, c1, c2, &mut mapping, &mut used)
}

/// Decide isomorphism. Requires the two vocabularies to declare the same
/// names with the same arities (ranks too, when both are ranked).
pub fn isomorphic(s1: &Structure, s2: &Structure) -> Result<bool, StructureError> {
    let v1 = s1.vocab();
    let v2 = s2.vocab();
    if v1.len() != v2.len() {
        return Err(StructureError::Containment(
            "isomorphism requires matching vocabularies".into(),
        ));
    }
    let mut order2 = Vec::with_capacity(v1.len());
    for (_, d) in v1.decls() {
        match v2.id(&d.name) {
            Some(i2) if v2.decl(i2).arity == d.arity => {
                if v1.is_ranked() && v2.is_ranked() && v2.decl(i2).rank != d.rank {
                    return Err(StructureError::Containment(format!(
                        "rank mismatch on `{}`",
                        d.name
                    )));
                }
                order2.push(i2);
            }
            _ => {
                return Err(StructureError::Containment(format!(
                    "no matching declaration for `{}`",
                    d.name
                )))
            }
        }
    }
    let order1: Vec<_> = v1.ids().collect();
    for (i, id1) in order1.iter().enumerate() {
        if s1.size_of(*id1) != s2.size_of(order2[i]) {
            return Ok(false);
        }
    }
    if s1.scope().len() != s2.scope().len() {
        return Ok(false);
    }
    if s1.scope().len() > ISO_ATOM_GUARD {
        return Err(StructureError::SizeGuard);
    }

    let side1 = flatten(s1, &order1);
    let side2 = flatten(s2, &order2);
    let (mut c1, mut k) = initial_colors(&side1);
    let (mut c2, k2) = initial_colors(&side2);
    if k != k2 {
        return Ok(false);
    }
    loop {
        if histogram(&c1) != histogram(&c2) {
            return Ok(false);
        }
        let (n1, k1) = refine(&side1, &c1);
        let (n2, k2) = refine(&side2, &c2);
        if k1 != k2 {
            return Ok(false);
        }
        // Refinement only ever splits classes; a round that does not add
        // classes leaves the partition stable.
        let stable = k1 == k;
        k = k1;
        c1 = n1;
        c2 = n2;
        if stable {
            break;
        }
    }
    Ok(search(&side1, &side2, &c1, &c2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{free_structure, Term, Vocabulary};
    use smallvec::smallvec;

    fn chain(vocab: &Vocabulary, atoms: &[u32]) -> Structure {
        let mut s = Structure::empty(vocab.clone());
        let e = vocab.id("e").unwrap();
        let f = vocab.id("f").unwrap();
        s.component_mut(e).insert(smallvec![], Atom(atoms[0]));
        for w in atoms.windows(2) {
            s.component_mut(f)
                .insert(smallvec![Atom(w[0])], Atom(w[1]));
        }
        s
    }

    #[test]
    fn renaming_is_isomorphic() {
        let vocab = Vocabulary::unranked([("e", 0), ("f", 1)]).unwrap();
        let a = chain(&vocab, &[0, 1, 2, 3]);
        let b = chain(&vocab, &[10, 4, 7, 2]);
        assert!(isomorphic(&a, &b).unwrap());
    }

    #[test]
    fn different_lengths_are_not_isomorphic() {
        let vocab = Vocabulary::unranked([("e", 0), ("f", 1)]).unwrap();
        let a = chain(&vocab, &[0, 1, 2]);
        let b = chain(&vocab, &[0, 1, 2, 3]);
        assert!(!isomorphic(&a, &b).unwrap());
    }

    #[test]
    fn free_structures_of_different_terms_differ() {
        let vocab = Vocabulary::unranked([("z", 0), ("s", 1)]).unwrap();
        let z = vocab.id("z").unwrap();
        let s = vocab.id("s").unwrap();
        let mut t2 = Term::token(z);
        for _ in 0..2 {
            t2 = Term::App(s, vec![t2]);
        }
        let mut t3 = Term::token(z);
        for _ in 0..3 {
            t3 = Term::App(s, vec![t3]);
        }
        let phi2 = free_structure(&t2, &vocab).unwrap();
        let phi3 = free_structure(&t3, &vocab).unwrap();
        assert!(!isomorphic(&phi2, &phi3).unwrap());
        assert!(isomorphic(&phi3, &phi3).unwrap());
    }

    #[test]
    fn value_structure_matters_not_ids() {
        // Two chains on the same atom ids but wired differently.
        let vocab = Vocabulary::unranked([("e", 0), ("f", 1)]).unwrap();
        let a = chain(&vocab, &[0, 1, 2, 3]);
        let mut b = chain(&vocab, &[0, 1, 2, 3]);
        let f = b.vocab().id("f").unwrap();
        b.component_mut(f).remove(&[Atom(2)]);
        b.component_mut(f).insert(smallvec![Atom(2)], Atom(0));
        assert!(!isomorphic(&a, &b).unwrap());
    }
}
