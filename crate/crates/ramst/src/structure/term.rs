//! Terms and their strict evaluation over a structure.

use super::{Atom, FuncId, Structure, StructureError, Vocabulary};

/// A term: either the non-denoting constant omega, or an application of an
/// identifier to arity-many subterms. A term is *standard* when omega does
/// not occur in it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Omega,
    App(FuncId, Vec<Term>),
}

impl Term {
    pub fn token(id: FuncId) -> Term {
        Term::App(id, Vec::new())
    }

    pub fn is_standard(&self) -> bool {
        match self {
            Term::Omega => false,
            Term::App(_, args) => args.iter().all(Term::is_standard),
        }
    }

    /// All ids used in the term resolve in `vocab` with matching arity.
    pub fn check(&self, vocab: &Vocabulary) -> Result<(), StructureError> {
        match self {
            Term::Omega => Ok(()),
            Term::App(id, args) => {
                if id.index() >= vocab.len() {
                    return Err(StructureError::Undeclared(format!("#{}", id.0)));
                }
                let d = vocab.decl(*id);
                if d.arity != args.len() {
                    return Err(StructureError::Arity {
                        name: d.name.clone(),
                        declared: d.arity,
                        used: args.len(),
                    });
                }
                args.iter().try_for_each(|a| a.check(vocab))
            }
        }
    }

    /// Distinct subterms, children before parents. Omega never appears in
    /// the output of a standard term.
    pub fn subterms(&self) -> Vec<&Term> {
        let mut seen: Vec<&Term> = Vec::new();
        fn walk<'a>(t: &'a Term, seen: &mut Vec<&'a Term>) {
            if seen.contains(&t) {
                return;
            }
            if let Term::App(_, args) = t {
                for a in args {
                    walk(a, seen);
                }
            }
            seen.push(t);
        }
        walk(self, &mut seen);
        seen
    }
}

/// The value of a term in a structure: omega denotes "undefined", and
/// application is strict, so a missing entry or an undefined subterm makes
/// the whole term undefined.
pub fn eval_term(s: &Structure, t: &Term) -> Option<Atom> {
    match t {
        Term::Omega => None,
        Term::App(id, args) => {
            let mut vals = super::ArgTuple::new();
            for a in args {
                vals.push(eval_term(s, a)?);
            }
            s.component(*id).get(&vals)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::free_structure;

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
    fn omega_evaluates_to_undefined() {
        let vocab = Vocabulary::unranked([("z", 0), ("s", 1)]).unwrap();
        let s = Structure::empty(vocab);
        assert_eq!(eval_term(&s, &Term::Omega), None);
    }

    #[test]
    fn free_structure_evaluates_its_own_term() {
        let vocab = Vocabulary::unranked([("z", 0), ("s", 1)]).unwrap();
        let t = nat_term(&vocab, 3);
        let phi = free_structure(&t, &vocab).unwrap();
        let root = phi.vocab().id("root").unwrap();
        // The value of the term is the atom designated by the root token.
        let t_in_phi = nat_term(phi.vocab(), 3);
        assert_eq!(
            eval_term(&phi, &t_in_phi),
            phi.component(root).get(&[])
        );
    }

    #[test]
    fn evaluation_is_strict_on_missing_entries() {
        let vocab = Vocabulary::unranked([("z", 0), ("s", 1)]).unwrap();
        let ssz = nat_term(&vocab, 2);
        let phi = free_structure(&ssz, &vocab).unwrap();
        let sssz = nat_term(phi.vocab(), 3);
        assert_eq!(eval_term(&phi, &sssz), None);
    }

    #[test]
    fn term_with_omega_is_undefined_everywhere() {
        let vocab = Vocabulary::unranked([("z", 0), ("s", 1)]).unwrap();
        let t = nat_term(&vocab, 2);
        let phi = free_structure(&t, &vocab).unwrap();
        let s = phi.vocab().id("s").unwrap();
        let bad = Term::App(s, vec![Term::Omega]);
        assert_eq!(eval_term(&phi, &bad), None);
        assert!(!bad.is_standard());
    }

    #[test]
    fn arity_check_rejects_bad_terms() {
        let vocab = Vocabulary::unranked([("z", 0), ("s", 1)]).unwrap();
        let z = vocab.id("z").unwrap();
        let bad = Term::App(z, vec![Term::Omega]);
        assert!(bad.check(&vocab).is_err());
    }
}
