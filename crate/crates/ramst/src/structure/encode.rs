//! Inductive data as structures: unary numerals, chains, binary strings.
//!
//! A numeral is the free structure of `s^n z`; a chain is a token plus an
//! injective unary pointer listing atoms head to tail. Decoders validate
//! shape and reject cycles, branching off the walk, and junk entries.

use smallvec::smallvec;

use super::{Atom, Structure, StructureError, Term, Vocabulary};

/// `encode_numeral(n)` is the free structure of the term `s^n z` over the
/// vocabulary `{z, s, root}`.
pub fn encode_numeral(n: usize) -> Structure {
    encode_numeral_named(n, "z", "s", "root")
}

/// Numeral with caller-chosen identifier names (arithmetic transducers take
/// their two inputs over disjoint numeral vocabularies).
pub fn encode_numeral_named(n: usize, zero: &str, succ: &str, root: &str) -> Structure {
    let vocab = Vocabulary::unranked([(zero, 0), (succ, 1)]).unwrap();
    let z = vocab.id(zero).unwrap();
    let s = vocab.id(succ).unwrap();
    let mut t = Term::token(z);
    for _ in 0..n {
        t = Term::App(s, vec![t]);
    }
    let mut phi = super::free_structure(&t, &vocab).unwrap();
    if root != "root" {
        // Rebuild under the requested root name.
        let mut vocab2 = Vocabulary::unranked([(zero, 0), (succ, 1), (root, 0)]).unwrap();
        let _ = &mut vocab2;
        let mut out = Structure::empty(vocab2);
        for (id, d) in phi.vocab().decls() {
            let name = if d.name == "root" { root } else { &d.name };
            let nid = out.vocab().id(name).unwrap();
            out.comps[nid.index()] = phi.component(id).clone();
        }
        phi = out;
    }
    phi
}

/// Inverse of [`encode_numeral_named`]: the length of the successor chain
/// from the zero token. The root token, when declared, must designate the
/// end of the chain.
pub fn decode_numeral(
    s: &Structure,
    zero: &str,
    succ: &str,
    root: &str,
) -> Result<usize, StructureError> {
    let z = s
        .vocab()
        .id(zero)
        .ok_or_else(|| StructureError::Undeclared(zero.into()))?;
    let f = s
        .vocab()
        .id(succ)
        .ok_or_else(|| StructureError::Undeclared(succ.into()))?;
    let start = s
        .component(z)
        .get(&[])
        .ok_or_else(|| StructureError::Shape(format!("zero token `{zero}` undefined")))?;
    let mut seen = std::collections::BTreeSet::new();
    let mut cur = start;
    seen.insert(cur);
    let mut n = 0usize;
    while let Some(next) = s.component(f).get(&[cur]) {
        if !seen.insert(next) {
            return Err(StructureError::Shape("numeral has a cycle".into()));
        }
        cur = next;
        n += 1;
    }
    if s.size_of(f) != n {
        return Err(StructureError::Shape(format!(
            "numeral has junk `{succ}` entries off the chain"
        )));
    }
    if let Some(r) = s.vocab().id(root) {
        if let Some(top) = s.component(r).get(&[]) {
            if top != cur {
                return Err(StructureError::Shape(format!(
                    "root token `{root}` does not designate the top of the numeral"
                )));
            }
        }
    }
    Ok(n)
}

/// A chain over `{head, ptr}` listing the given atoms in order. Atoms must
/// be pairwise distinct, otherwise the pointer would not be injective.
pub fn encode_chain(
    atoms: &[Atom],
    head: &str,
    ptr: &str,
) -> Result<Structure, StructureError> {
    let vocab = Vocabulary::unranked([(head, 0), (ptr, 1)])?;
    let mut s = Structure::empty(vocab);
    let mut seen = std::collections::BTreeSet::new();
    for a in atoms {
        if !seen.insert(*a) {
            return Err(StructureError::Shape("chain atoms must be distinct".into()));
        }
    }
    if let Some(first) = atoms.first() {
        let h = s.vocab().id(head).unwrap();
        s.component_mut(h).insert(smallvec![], *first);
        let p = s.vocab().id(ptr).unwrap();
        for w in atoms.windows(2) {
            s.component_mut(p).insert(smallvec![w[0]], w[1]);
        }
    }
    Ok(s)
}

/// The listing `head, ptr(head), ptr(ptr(head)), ...` of a chain. Rejects
/// cycles and junk entries off the walk; an undefined head is the empty
/// listing (which then requires the pointer to be empty too).
pub fn decode_chain(
    s: &Structure,
    head: &str,
    ptr: &str,
) -> Result<Vec<Atom>, StructureError> {
    let h = s
        .vocab()
        .id(head)
        .ok_or_else(|| StructureError::Undeclared(head.into()))?;
    let p = s
        .vocab()
        .id(ptr)
        .ok_or_else(|| StructureError::Undeclared(ptr.into()))?;
    let mut out = Vec::new();
    let Some(start) = s.component(h).get(&[]) else {
        if s.size_of(p) != 0 {
            return Err(StructureError::Shape(format!(
                "chain head `{head}` undefined but `{ptr}` is nonempty"
            )));
        }
        return Ok(out);
    };
    let mut seen = std::collections::BTreeSet::new();
    let mut cur = start;
    out.push(cur);
    seen.insert(cur);
    while let Some(next) = s.component(p).get(&[cur]) {
        if !seen.insert(next) {
            return Err(StructureError::Shape("chain has a cycle".into()));
        }
        out.push(next);
        cur = next;
    }
    if s.size_of(p) != out.len() - 1 {
        return Err(StructureError::Shape(format!(
            "chain has junk `{ptr}` entries off the walk"
        )));
    }
    Ok(out)
}

/// A binary string as a structure over `{head, zero, one}`: walking the
/// pointers from the head token spells the string last character first,
/// mirroring the free structure of the corresponding term.
pub fn encode_string(
    bits: &str,
    head: &str,
    zero: &str,
    one: &str,
) -> Result<Structure, StructureError> {
    let vocab = Vocabulary::unranked([(head, 0), (zero, 1), (one, 1)])?;
    let mut s = Structure::empty(vocab);
    let h = s.vocab().id(head).unwrap();
    let f0 = s.vocab().id(zero).unwrap();
    let f1 = s.vocab().id(one).unwrap();
    s.component_mut(h).insert(smallvec![], Atom(0));
    let mut cur = Atom(0);
    for (i, c) in bits.chars().rev().enumerate() {
        let next = Atom(i as u32 + 1);
        let f = match c {
            '0' => f0,
            '1' => f1,
            _ => return Err(StructureError::Shape(format!("not a bit: {c:?}"))),
        };
        s.component_mut(f).insert(smallvec![cur], next);
        cur = next;
    }
    Ok(s)
}

/// Inverse of [`encode_string`].
pub fn decode_string(
    s: &Structure,
    head: &str,
    zero: &str,
    one: &str,
) -> Result<String, StructureError> {
    let h = s
        .vocab()
        .id(head)
        .ok_or_else(|| StructureError::Undeclared(head.into()))?;
    let f0 = s
        .vocab()
        .id(zero)
        .ok_or_else(|| StructureError::Undeclared(zero.into()))?;
    let f1 = s
        .vocab()
        .id(one)
        .ok_or_else(|| StructureError::Undeclared(one.into()))?;
    let mut cur = s
        .component(h)
        .get(&[])
        .ok_or_else(|| StructureError::Shape(format!("string head `{head}` undefined")))?;
    let mut seen = std::collections::BTreeSet::new();
    seen.insert(cur);
    let mut rev = String::new();
    loop {
        match (s.component(f0).get(&[cur]), s.component(f1).get(&[cur])) {
            (Some(_), Some(_)) => {
                return Err(StructureError::Shape("string branches".into()));
            }
            (Some(n), None) => {
                rev.push('0');
                cur = n;
            }
            (None, Some(n)) => {
                rev.push('1');
                cur = n;
            }
            (None, None) => break,
        }
        if !seen.insert(cur) {
            return Err(StructureError::Shape("string has a cycle".into()));
        }
    }
    if s.size_of(f0) + s.size_of(f1) != rev.len() {
        return Err(StructureError::Shape("string has junk entries".into()));
    }
    Ok(rev.chars().rev().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::is_free;

    #[test]
    fn numeral_zero_has_size_two() {
        let phi = encode_numeral(0);
        assert_eq!(phi.size(), 2);
        assert_eq!(decode_numeral(&phi, "z", "s", "root").unwrap(), 0);
    }

    #[test]
    fn numeral_round_trip() {
        for n in [0, 1, 7, 33, 200] {
            let phi = encode_numeral(n);
            assert!(is_free(&phi).unwrap());
            assert_eq!(decode_numeral(&phi, "z", "s", "root").unwrap(), n);
        }
    }

    #[test]
    fn chain_round_trip() {
        for n in [0usize, 1, 5, 200] {
            let atoms: Vec<Atom> = (0..n as u32).map(Atom).collect();
            let s = encode_chain(&atoms, "a", "e").unwrap();
            assert_eq!(decode_chain(&s, "a", "e").unwrap(), atoms);
        }
    }

    #[test]
    fn chain_cycle_is_a_shape_error() {
        let atoms: Vec<Atom> = (0..2).map(Atom).collect();
        let mut s = encode_chain(&atoms, "a", "e").unwrap();
        let e = s.vocab().id("e").unwrap();
        s.component_mut(e).insert(smallvec![Atom(1)], Atom(0));
        assert!(matches!(
            decode_chain(&s, "a", "e"),
            Err(StructureError::Shape(_))
        ));
    }

    #[test]
    fn chain_junk_is_a_shape_error() {
        let atoms: Vec<Atom> = (0..3).map(Atom).collect();
        let mut s = encode_chain(&atoms, "a", "e").unwrap();
        let e = s.vocab().id("e").unwrap();
        s.component_mut(e).insert(smallvec![Atom(9)], Atom(10));
        assert!(matches!(
            decode_chain(&s, "a", "e"),
            Err(StructureError::Shape(_))
        ));
    }

    #[test]
    fn string_round_trip() {
        for s in ["", "0", "1", "110", "010101110"] {
            let st = encode_string(s, "e", "f0", "f1").unwrap();
            assert_eq!(decode_string(&st, "e", "f0", "f1").unwrap(), s);
        }
    }

    #[test]
    fn numeral_junk_is_rejected() {
        let mut phi = encode_numeral(3);
        let s = phi.vocab().id("s").unwrap();
        phi.component_mut(s).insert(smallvec![Atom(50)], Atom(51));
        assert!(decode_numeral(&phi, "z", "s", "root").is_err());
    }
}
