//! Arithmetic over unary numerals.
//!
//! Addition runs entirely in rank 0: it is not size-increasing, so the
//! first input can be consumed outright and spliced onto the second.
//! Multiplication takes both inputs in rank 1: the second input paces the
//! outer loop, and the inner loop consumes the first input while spawning
//! it back (legal at rank 1) and emitting one fresh output link per unit.

use super::build::*;
use super::TransducerSig;
use crate::syntax::SourceUnit;

/// Standard identifier names for the two numeral inputs and the output.
pub const ADD_IN1: [&str; 3] = ["z1", "s1", "r1"];
pub const ADD_IN2: [&str; 3] = ["z2", "s2", "r2"];
pub const ARITH_OUT: [&str; 3] = ["zo", "so", "ro"];

/// Rank-0 addition transducer: output numeral has `m + n` successor
/// entries. The first input is depleted; no spawning is possible at rank 0,
/// which is fine because nothing needs re-reading.
pub fn gen_add() -> (SourceUnit, TransducerSig) {
    let mut v = VocabBuilder::new();
    let z1 = v.tok("z1", 0);
    let s1 = v.ptr("s1", 0);
    let _r1 = v.tok("r1", 0);
    let z2 = v.tok("z2", 0);
    let s2 = v.ptr("s2", 0);
    let _r2 = v.tok("r2", 0);
    let zo = v.tok("zo", 0);
    let so = v.ptr("so", 0);
    let ro = v.tok("ro", 0);
    let w = v.tok("w", 0);
    let vw = v.tok("v", 0);
    let b = v.tok("b", 0);

    let prog = seq(vec![
        set_tok(zo, tv(z2)),
        set_tok(w, tv(z2)),
        set_tok(vw, tv(z1)),
        set_tok(b, tv(z1)),
        // Copy the second input's chain onto the output pointer in place.
        dov(
            def(ap1(s2, tv(w))),
            vec![s2],
            seq(vec![
                set_tok(b, ap1(s2, tv(w))),
                con(s2, vec![tv(w)]),
                ext(so, vec![tv(w)], tv(b)),
                set_tok(w, tv(b)),
            ]),
        ),
        // Splice the first input after it, reusing its successor atoms.
        dov(
            def(ap1(s1, tv(vw))),
            vec![s1],
            seq(vec![
                set_tok(b, ap1(s1, tv(vw))),
                con(s1, vec![tv(vw)]),
                ext(so, vec![tv(w)], tv(b)),
                set_tok(w, tv(b)),
                set_tok(vw, tv(b)),
            ]),
        ),
        set_tok(ro, tv(w)),
    ]);
    let unit = v.unit(prog);
    let sig = TransducerSig {
        inputs: ADD_IN1.iter().chain(&ADD_IN2).map(|s| s.to_string()).collect(),
        input_rank: 0,
        outputs: ARITH_OUT.iter().map(|s| s.to_string()).collect(),
        output_rank: 0,
    };
    (unit, sig)
}

/// Rank-1 multiplication transducer: the inner addition spawns the first
/// input so it can be re-used once per unit of the second input. Output
/// lands in rank 0.
pub fn gen_mult() -> (SourceUnit, TransducerSig) {
    let mut v = VocabBuilder::new();
    let z1 = v.tok("z1", 1);
    let s1 = v.ptr("s1", 1);
    let _r1 = v.tok("r1", 1);
    let z2 = v.tok("z2", 1);
    let s2 = v.ptr("s2", 1);
    let _r2 = v.tok("r2", 1);
    let zo = v.tok("zo", 0);
    let so = v.ptr("so", 0);
    let ro = v.tok("ro", 0);
    let s1p = v.ptr("s1p", 1);
    let w2 = v.tok("w2", 0);
    let vw = v.tok("v", 0);
    let b = v.tok("b", 0);
    let to = v.tok("to", 0);
    let tmp = v.tok("tmp", 0);

    let inner_consume = dov(
        def(ap1(s1, tv(vw))),
        vec![s1],
        seq(vec![
            set_tok(b, ap1(s1, tv(vw))),
            con(s1, vec![tv(vw)]),
            ext(s1p, vec![tv(vw)], tv(b)),
            // Advance the output tail to a fresh atom. `set _ = new` never
            // overwrites, so the old tail is cleared first.
            set_tok(tmp, tv(to)),
            con(to, vec![]),
            set_tok_new(to),
            ext(so, vec![tv(tmp)], tv(to)),
            set_tok(vw, tv(b)),
        ]),
    );
    let inner_restore = dov(
        def(ap1(s1p, tv(vw))),
        vec![s1p],
        seq(vec![
            set_tok(b, ap1(s1p, tv(vw))),
            con(s1p, vec![tv(vw)]),
            ext(s1, vec![tv(vw)], tv(b)),
            set_tok(vw, tv(b)),
        ]),
    );
    let prog = seq(vec![
        set_tok_new(zo),
        set_tok(to, tv(zo)),
        set_tok(w2, tv(z2)),
        set_tok(vw, tv(z1)),
        set_tok(b, tv(z1)),
        set_tok(tmp, tv(zo)),
        dov(
            def(ap1(s2, tv(w2))),
            vec![s2],
            seq(vec![
                set_tok(b, ap1(s2, tv(w2))),
                con(s2, vec![tv(w2)]),
                set_tok(w2, tv(b)),
                set_tok(vw, tv(z1)),
                inner_consume,
                set_tok(vw, tv(z1)),
                inner_restore,
            ]),
        ),
        set_tok(ro, tv(to)),
    ]);
    let unit = v.unit(prog);
    let sig = TransducerSig {
        inputs: ADD_IN1.iter().chain(&ADD_IN2).map(|s| s.to_string()).collect(),
        input_rank: 1,
        outputs: ARITH_OUT.iter().map(|s| s.to_string()).collect(),
        output_rank: 0,
    };
    (unit, sig)
}

/// Identity transducer over the given interface: a single inactive update.
pub fn gen_identity(interface: &[(&str, usize, u32)], rank: u32) -> (SourceUnit, TransducerSig) {
    let mut v = VocabBuilder::new();
    let mut names = Vec::new();
    for (name, arity, r) in interface {
        v.id(name, *arity, *r);
        names.push(name.to_string());
    }
    let nil = v.tok("nil_id", 0);
    let unit = v.unit(noop(nil));
    let sig = TransducerSig {
        inputs: names.clone(),
        input_rank: rank,
        outputs: names,
        output_rank: rank,
    };
    (unit, sig)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::certify_run;
    use crate::checker::{check, max_rank};
    use crate::interp::{run_transducer, ExecConfig};
    use crate::structure::{decode_numeral, encode_numeral_named, Structure, Vocabulary};

    fn numeral_pair(m: usize, n: usize) -> Structure {
        let a = encode_numeral_named(m, "z1", "s1", "r1");
        let b = encode_numeral_named(n, "z2", "s2", "r2");
        // Shift the second input's atoms above the first's.
        let b = {
            let mut out = Structure::empty(b.vocab().clone());
            let off = a.max_atom().map(|x| x.0 + 1).unwrap_or(0);
            for (id, f) in b.components() {
                for (args, val) in f.entries() {
                    let args = args
                        .iter()
                        .map(|x| crate::structure::Atom(x.0 + off))
                        .collect();
                    out.component_mut(id)
                        .insert(args, crate::structure::Atom(val.0 + off));
                }
            }
            out
        };
        a.merge(&b).unwrap()
    }

    fn out_vocab() -> Vocabulary {
        Vocabulary::unranked([("zo", 0), ("so", 1), ("ro", 0)]).unwrap()
    }

    #[test]
    fn add_unit_is_accepted_at_rank_zero() {
        let (unit, _) = gen_add();
        assert!(check(&unit).accepted());
        assert_eq!(max_rank(&unit).unwrap(), 0);
    }

    #[test]
    fn mult_unit_is_accepted_at_rank_one() {
        let (unit, _) = gen_mult();
        assert!(check(&unit).accepted());
        assert_eq!(max_rank(&unit).unwrap(), 1);
    }

    #[test]
    fn add_small_cases() {
        let (unit, _) = gen_add();
        for (m, n) in [(0, 0), (0, 3), (2, 3), (7, 1), (5, 0)] {
            let input = numeral_pair(m, n);
            let (out, _) =
                run_transducer(&unit, &input, &out_vocab(), ExecConfig::default()).unwrap();
            assert_eq!(
                decode_numeral(&out, "zo", "so", "ro").unwrap(),
                m + n,
                "add({m},{n})"
            );
        }
    }

    #[test]
    fn mult_small_cases() {
        let (unit, _) = gen_mult();
        for (m, n) in [(0, 0), (0, 3), (3, 0), (1, 1), (2, 3), (4, 5)] {
            let input = numeral_pair(m, n);
            let (out, _) =
                run_transducer(&unit, &input, &out_vocab(), ExecConfig::default()).unwrap();
            assert_eq!(
                decode_numeral(&out, "zo", "so", "ro").unwrap(),
                m * n,
                "mult({m},{n})"
            );
        }
    }

    #[test]
    fn mult_runs_are_certified() {
        let (unit, _) = gen_mult();
        for (m, n) in [(4, 5), (16, 16), (0, 7)] {
            let input = numeral_pair(m, n);
            let (_, metrics) =
                run_transducer(&unit, &input, &out_vocab(), ExecConfig::default()).unwrap();
            let v = certify_run(&unit, &metrics).unwrap();
            assert!(v.pass, "mult({m},{n}): {v}");
        }
    }
}
