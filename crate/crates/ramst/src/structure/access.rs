//! Accessibility, freeness, and free structures of standard terms.

use std::collections::BTreeSet;

use smallvec::SmallVec;

use super::iso::ISO_ATOM_GUARD;
use super::{Atom, FuncDecl, Structure, StructureError, Term, Vocabulary};

/// Least set of atoms containing all token values and closed under entry
/// application, computed by fixpoint iteration. These are exactly the values
/// of standard terms.
pub fn accessible_atoms(s: &Structure) -> BTreeSet<Atom> {
    let mut reached: BTreeSet<Atom> = BTreeSet::new();
    for (id, d) in s.vocab().decls() {
        if d.is_token() {
            if let Some(a) = s.component(id).get(&[]) {
                reached.insert(a);
            }
        }
    }
    loop {
        let mut grew = false;
        for (_, f) in s.components() {
            if f.arity() == 0 {
                continue;
            }
            for (args, val) in f.entries() {
                if !reached.contains(&val) && args.iter().all(|a| reached.contains(a)) {
                    reached.insert(val);
                    grew = true;
                }
            }
        }
        if !grew {
            return reached;
        }
    }
}

/// A structure is accessible when every atom in its domain is the value of
/// some term; it is free when, in addition, there is a subterm-closed term
/// set whose valuation covers the range injectively. Operationally that
/// means the pointer-entry productions are single-valued and well-founded:
/// no atom is the value of two pointer entries, and no atom depends on
/// itself through entries. Tokens co-designate transparently (the
/// designated-root token of a free structure is the canonical case), so
/// they never break freeness.
pub fn is_free(s: &Structure) -> Result<bool, StructureError> {
    if s.scope().len() > ISO_ATOM_GUARD {
        return Err(StructureError::SizeGuard);
    }
    let reached = accessible_atoms(s);
    if !s.domain().iter().all(|a| reached.contains(a)) {
        return Ok(false);
    }
    // One pointer entry per produced atom.
    let mut producer: std::collections::BTreeMap<Atom, &super::ArgTuple> = Default::default();
    for (_, f) in s.components() {
        if f.arity() == 0 {
            continue;
        }
        for (args, val) in f.entries() {
            if producer.insert(val, args).is_some() {
                return Ok(false);
            }
        }
    }
    // Entry productions must be well-founded: walking "value -> argument"
    // through producers must never revisit an atom.
    let mut state: std::collections::BTreeMap<Atom, u8> = Default::default();
    fn grounded(
        a: Atom,
        producer: &std::collections::BTreeMap<Atom, &super::ArgTuple>,
        state: &mut std::collections::BTreeMap<Atom, u8>,
    ) -> bool {
        match state.get(&a) {
            Some(1) => return false,
            Some(2) => return true,
            _ => {}
        }
        state.insert(a, 1);
        if let Some(args) = producer.get(&a) {
            for arg in args.iter() {
                if !grounded(*arg, producer, state) {
                    return false;
                }
            }
        }
        state.insert(a, 2);
        true
    }
    let atoms: Vec<Atom> = producer.keys().copied().collect();
    Ok(atoms.iter().all(|a| grounded(*a, &producer, &mut state)))
}

/// The free structure of a standard term: one atom per distinct subterm,
/// entries mirroring the subterm relation, and an extra token designating
/// the term as a whole. The extra token is named `root` (uniquified if the
/// vocabulary already uses that name) and behaves as an ordinary token.
pub fn free_structure(q: &Term, vocab: &Vocabulary) -> Result<Structure, StructureError> {
    if !q.is_standard() {
        return Err(StructureError::NonStandard);
    }
    q.check(vocab)?;
    let mut v = vocab.clone();
    let mut root_name = String::from("root");
    while v.id(&root_name).is_some() {
        root_name.push('_');
    }
    let rank = if v.is_ranked() { Some(0) } else { None };
    let root = v.push(FuncDecl {
        name: root_name,
        arity: 0,
        rank,
    })?;

    let subterms = q.subterms();
    let mut out = Structure::empty(v);
    let atom_of = |t: &Term, subterms: &[&Term]| -> Atom {
        Atom(subterms.iter().position(|u| *u == t).unwrap() as u32)
    };
    for (i, t) in subterms.iter().enumerate() {
        let Term::App(id, args) = t else {
            unreachable!("standard terms have no omega")
        };
        let tuple: SmallVec<[Atom; 2]> = args.iter().map(|a| atom_of(a, &subterms)).collect();
        out.component_mut(*id).insert(tuple, Atom(i as u32));
    }
    let top = atom_of(q, &subterms);
    out.component_mut(root).insert(SmallVec::new(), top);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use smallvec::smallvec;

    fn nat_vocab() -> Vocabulary {
        Vocabulary::unranked([("z", 0), ("s", 1)]).unwrap()
    }

    fn nat_term(vocab: &Vocabulary, n: usize) -> Term {
        let z = vocab.id("z").unwrap();
        let s = vocab.id("s").unwrap();
        let mut t = Term::token(z);
        for _ in 0..n {
            t = Term::App(s, vec![t]);
        }
        t
    }

    #[test]
    fn empty_structure_has_no_accessible_atoms() {
        let s = Structure::empty(nat_vocab());
        assert!(accessible_atoms(&s).is_empty());
        assert!(is_free(&s).unwrap());
    }

    #[test]
    fn tokenless_entries_are_inaccessible() {
        let mut s = Structure::empty(nat_vocab());
        let f = s.vocab().id("s").unwrap();
        s.component_mut(f).insert(smallvec![Atom(0)], Atom(1));
        assert!(accessible_atoms(&s).is_empty());
        // Domain atom 0 is not accessible, so the structure is not free.
        assert!(!is_free(&s).unwrap());
    }

    #[test]
    fn sssz_has_four_atoms_and_five_entries() {
        let vocab = nat_vocab();
        let phi = free_structure(&nat_term(&vocab, 3), &vocab).unwrap();
        assert_eq!(phi.scope().len(), 4);
        assert_eq!(accessible_atoms(&phi).len(), 4);
        assert_eq!(phi.size(), 5);
        let s = phi.vocab().id("s").unwrap();
        assert_eq!(phi.size_of(s), 3);
        assert!(is_free(&phi).unwrap());
    }

    #[test]
    fn shared_subterms_collapse() {
        // p(prr)r and p(prr)(prr) both have 3 distinct subterms.
        let vocab = Vocabulary::unranked([("r", 0), ("p", 2)]).unwrap();
        let r = vocab.id("r").unwrap();
        let p = vocab.id("p").unwrap();
        let prr = Term::App(p, vec![Term::token(r), Term::token(r)]);
        let t1 = Term::App(p, vec![prr.clone(), Term::token(r)]);
        let t2 = Term::App(p, vec![prr.clone(), prr.clone()]);
        let phi1 = free_structure(&t1, &vocab).unwrap();
        let phi2 = free_structure(&t2, &vocab).unwrap();
        assert_eq!(phi1.scope().len(), 3);
        assert_eq!(phi2.scope().len(), 3);
        assert!(is_free(&phi1).unwrap());
        assert!(is_free(&phi2).unwrap());
    }

    #[test]
    fn single_token_free_structure() {
        let vocab = Vocabulary::unranked([("c", 0)]).unwrap();
        let c = vocab.id("c").unwrap();
        let phi = free_structure(&Term::token(c), &vocab).unwrap();
        assert_eq!(phi.scope().len(), 1);
        let root = phi.vocab().id("root").unwrap();
        let cid = phi.vocab().id("c").unwrap();
        assert_eq!(phi.component(root).get(&[]), phi.component(cid).get(&[]));
    }

    #[test]
    fn cycle_breaks_freeness() {
        let vocab = nat_vocab();
        let mut phi = free_structure(&nat_term(&vocab, 2), &vocab).unwrap();
        let s = phi.vocab().id("s").unwrap();
        let z = phi.vocab().id("z").unwrap();
        let zero = phi.component(z).get(&[]).unwrap();
        let top = Atom(2);
        phi.component_mut(s).insert(smallvec![top], zero);
        assert!(!is_free(&phi).unwrap());
    }

    #[test]
    fn non_standard_terms_are_rejected() {
        let vocab = nat_vocab();
        let s = vocab.id("s").unwrap();
        let t = Term::App(s, vec![Term::Omega]);
        assert_eq!(
            free_structure(&t, &vocab).unwrap_err(),
            StructureError::NonStandard
        );
    }

    #[test]
    fn accessibility_is_monotone_in_entries() {
        let vocab = nat_vocab();
        let phi = free_structure(&nat_term(&vocab, 2), &vocab).unwrap();
        let before = accessible_atoms(&phi);
        let mut bigger = phi.clone();
        let s = bigger.vocab().id("s").unwrap();
        bigger.component_mut(s).insert(smallvec![Atom(2)], Atom(9));
        let after = accessible_atoms(&bigger);
        assert!(before.is_subset(&after));
    }
}
