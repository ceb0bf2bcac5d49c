//! Insertion sort as a single-rank STR unit.
//!
//! Input: a chain `(a, e)` and a binary order pointer `leq` (the relation
//! encoding: `leq(x, y)` is defined exactly when `x <= y`). Output: a chain
//! `(b, f)` listing the same atoms without repetition, consistent with the
//! order. Sorting is non-size-increasing, so everything lives in rank 0:
//! each outer pass consumes one input link and rebuilds the sorted prefix
//! through a spawned copy, inserting the new atom at its place.

use super::build::*;
use super::TransducerSig;
use crate::syntax::SourceUnit;

pub const SORT_IN: [&str; 3] = ["a", "e", "leq"];
pub const SORT_OUT: [&str; 2] = ["b", "f"];

pub fn gen_insertion_sort() -> (SourceUnit, TransducerSig) {
    let mut v = VocabBuilder::new();
    let a = v.tok("a", 0);
    let e = v.ptr("e", 0);
    let leq = v.id("leq", 2, 0);
    let b = v.tok("b", 0);
    let f = v.ptr("f", 0);
    // Internals: the sorted prefix hangs off sentinel `sb` via `f`; each
    // insertion rebuilds it onto sentinel `sc` via `fp`, then back.
    let fp = v.ptr("fp", 0);
    let sb = v.tok("sb", 0);
    let sc = v.tok("sc", 0);
    let tb = v.tok("tb", 0);
    let tb2 = v.tok("tb2", 0);
    let w = v.tok("w", 0);
    let x = v.tok("x", 0);
    let y = v.tok("y", 0);
    let p = v.tok("p", 0);

    // Merge the pending atom `p` into the consumed prefix: each pass pops
    // one prefix atom `y` and appends the smaller of `y` and `p`, carrying
    // the larger forward.
    let merge = dov(
        def(ap1(f, tv(w))),
        vec![f],
        seq(vec![
            set_tok(y, ap1(f, tv(w))),
            con(f, vec![tv(w)]),
            set_tok(w, tv(y)),
            iff(
                def(ap(leq, vec![tv(y), tv(p)])),
                seq(append_tail(fp, tb2, y)),
                seq(vec![
                    seq(append_tail(fp, tb2, p)),
                    set_tok(p, tv(y)),
                ]),
            ),
        ]),
    );
    // Rebuild `f` from the merged copy.
    let rebuild = dov(
        def(ap1(fp, tv(w))),
        vec![fp],
        seq(vec![
            set_tok(y, ap1(fp, tv(w))),
            con(fp, vec![tv(w)]),
            set_tok(w, tv(y)),
            seq(append_tail(f, tb, y)),
        ]),
    );
    let insert_x = seq(vec![
        set_tok(p, tv(x)),
        set_tok(w, tv(sb)),
        set_tok(tb2, tv(sc)),
        merge,
        seq(append_tail(fp, tb2, p)),
        set_tok(tb, tv(sb)),
        set_tok(w, tv(sc)),
        rebuild,
    ]);
    let prog = seq(vec![
        // Sentinels and scratch; the first input atom (if any) seeds the
        // sorted prefix.
        set_tok_new(sb),
        set_tok_new(sc),
        set_tok(tb, tv(sb)),
        set_tok(tb2, tv(sc)),
        set_tok(w, tv(a)),
        set_tok(x, tv(a)),
        set_tok(y, tv(a)),
        set_tok(p, tv(a)),
        ext(f, vec![tv(sb)], tv(a)),
        set_tok(tb, tv(a)),
        // One insertion per input link.
        dov(
            def(ap1(e, tv(w))),
            vec![e],
            seq(vec![
                set_tok(x, ap1(e, tv(w))),
                con(e, vec![tv(w)]),
                set_tok(w, tv(x)),
                insert_x,
            ]),
        ),
        // Materialize the output chain without the sentinel link.
        set_tok(b, ap1(f, tv(sb))),
        con(f, vec![tv(sb)]),
    ]);
    let unit = v.unit(prog);
    let sig = TransducerSig {
        inputs: SORT_IN.iter().map(|s| s.to_string()).collect(),
        input_rank: 0,
        outputs: SORT_OUT.iter().map(|s| s.to_string()).collect(),
        output_rank: 0,
    };
    (unit, sig)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::certify_run;
    use crate::checker::{check, max_rank};
    use crate::interp::{run_transducer, ExecConfig};
    use crate::structure::{
        decode_chain, encode_chain, relation_as_fpfunction, Atom, Structure, Vocabulary,
    };
    use std::collections::BTreeSet;

    /// Chain plus a total order given as the ranking of the atoms.
    pub(crate) fn sort_input(atoms: &[Atom], order: &[Atom]) -> Structure {
        let chain = encode_chain(atoms, "a", "e").unwrap();
        let mut rel = BTreeSet::new();
        for (i, x) in order.iter().enumerate() {
            for y in &order[i..] {
                rel.insert(crate::structure::ArgTuple::from_slice(&[*x, *y]));
            }
        }
        let leq = relation_as_fpfunction(2, &rel);
        let mut vocab = chain.vocab().clone();
        vocab
            .push(crate::structure::FuncDecl {
                name: "leq".into(),
                arity: 2,
                rank: None,
            })
            .unwrap();
        let mut s = chain.expand(&vocab).unwrap();
        *s.component_mut(s.vocab().id("leq").unwrap()) = leq;
        s
    }

    fn out_vocab() -> Vocabulary {
        Vocabulary::unranked([("b", 0), ("f", 1)]).unwrap()
    }

    #[test]
    fn sort_unit_is_single_rank() {
        let (unit, _) = gen_insertion_sort();
        assert!(check(&unit).accepted(), "{:?}", check(&unit).errors);
        assert_eq!(max_rank(&unit).unwrap(), 0);
    }

    #[test]
    fn sorted_input_comes_back_unchanged() {
        let (unit, _) = gen_insertion_sort();
        let atoms: Vec<Atom> = (0..8).map(Atom).collect();
        let input = sort_input(&atoms, &atoms);
        let (out, _) = run_transducer(&unit, &input, &out_vocab(), ExecConfig::default()).unwrap();
        assert_eq!(decode_chain(&out, "b", "f").unwrap(), atoms);
    }

    #[test]
    fn reverse_sorted_input_gets_sorted() {
        let (unit, _) = gen_insertion_sort();
        let atoms: Vec<Atom> = (0..10).rev().map(Atom).collect();
        let order: Vec<Atom> = (0..10).map(Atom).collect();
        let input = sort_input(&atoms, &order);
        let (out, metrics) =
            run_transducer(&unit, &input, &out_vocab(), ExecConfig::default()).unwrap();
        assert_eq!(decode_chain(&out, "b", "f").unwrap(), order);
        let v = certify_run(&unit, &metrics).unwrap();
        assert!(v.pass, "{v}");
    }

    #[test]
    fn empty_and_singleton_chains() {
        let (unit, _) = gen_insertion_sort();
        for atoms in [vec![], vec![Atom(5)]] {
            let input = sort_input(&atoms, &atoms);
            let (out, _) =
                run_transducer(&unit, &input, &out_vocab(), ExecConfig::default()).unwrap();
            assert_eq!(decode_chain(&out, "b", "f").unwrap(), atoms);
        }
    }

    #[test]
    fn time_bound_is_quadratic() {
        let (unit, _) = gen_insertion_sort();
        let m = crate::bounds::time_bound(&unit).unwrap();
        assert_eq!(m.degree(), 2);
    }
}
