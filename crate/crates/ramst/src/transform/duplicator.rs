//! String duplication and spawning.
//!
//! The generated unit walks a string-like input (a head token plus a family
//! of unary pointers, one per letter) with the pointer family as the loop
//! variant. Each pass consumes one input entry after writing it to every
//! requested copy; termination is by depletion under an empty (true) guard.
//! A copy at the variant's own rank is spawning and is legal only once:
//! the rank's total size must not grow across a pass. When the source is
//! kept, the spawn slot is spent on an internal shadow family that a second
//! depletion loop renames back.

use super::build::*;
use super::{TransducerSig, TransformError};
use crate::structure::FuncId;
use crate::syntax::{Guard, Program, SourceUnit};

/// One requested copy of the source family: pointer names aligned with the
/// source pointers, all at one rank.
#[derive(Clone, Debug)]
pub struct CopyGroup {
    pub names: Vec<String>,
    pub rank: u32,
}

#[derive(Clone, Debug)]
pub struct DuplicatorSpec {
    /// Head token naming the walk start (kept at the source rank).
    pub head: String,
    /// Source pointer names, all unary, all at `src_rank`.
    pub src: Vec<String>,
    pub src_rank: u32,
    pub copies: Vec<CopyGroup>,
    /// Restore the source after consuming it (costs the one same-rank
    /// copy).
    pub keep_source: bool,
}

pub fn gen_duplicator(spec: &DuplicatorSpec) -> Result<(SourceUnit, TransducerSig), TransformError> {
    if spec.src.is_empty() {
        return Err(TransformError::Invalid("no source pointers".into()));
    }
    let same_rank_copies = spec
        .copies
        .iter()
        .filter(|c| c.rank == spec.src_rank)
        .count();
    if same_rank_copies + spec.keep_source as usize > 1 {
        return Err(TransformError::Refused(format!(
            "{} same-rank copies requested{}; the rank budget allows exactly one",
            same_rank_copies,
            if spec.keep_source {
                " while keeping the source"
            } else {
                ""
            }
        )));
    }
    for c in &spec.copies {
        if c.rank > spec.src_rank {
            return Err(TransformError::Refused(format!(
                "copy at rank {} above the source rank {} would grow a monitored rank",
                c.rank, spec.src_rank
            )));
        }
        if c.names.len() != spec.src.len() {
            return Err(TransformError::Invalid(
                "copy group arity does not match the source family".into(),
            ));
        }
    }

    let mut v = VocabBuilder::new();
    let head = v.tok(&spec.head, spec.src_rank);
    let src: Vec<FuncId> = spec.src.iter().map(|n| v.ptr(n, spec.src_rank)).collect();
    let copies: Vec<Vec<FuncId>> = spec
        .copies
        .iter()
        .map(|c| c.names.iter().map(|n| v.ptr(n, c.rank)).collect())
        .collect();
    let shadow: Option<Vec<FuncId>> = spec.keep_source.then(|| {
        spec.src
            .iter()
            .map(|n| v.ptr(&format!("{n}_sp"), spec.src_rank))
            .collect()
    });
    let a = v.tok("wa", 0);
    let b = v.tok("wb", 0);
    let nil = v.tok("nil", 0);

    // One branch per source pointer: copy the entry everywhere, then
    // consume it and advance.
    let walk_loop = |from: &[FuncId], also_to: &[&[FuncId]]| -> Program {
        let mut cases: Program = noop(nil);
        for (k, fk) in from.iter().enumerate().rev() {
            let entry = ap1(*fk, tv(a));
            let mut body = Vec::new();
            for grp in also_to {
                body.push(ext(grp[k], vec![tv(a)], entry.clone()));
            }
            body.push(set_tok(b, entry.clone()));
            body.push(con(*fk, vec![tv(a)]));
            body.push(set_tok(a, tv(b)));
            cases = iff(def(entry), seq(body), cases);
        }
        dov(Guard::True, from.to_vec(), cases)
    };

    let mut prog = vec![set_tok(a, tv(head)), set_tok(b, tv(head))];
    {
        let mut targets: Vec<&[FuncId]> = copies.iter().map(|g| g.as_slice()).collect();
        if let Some(sh) = &shadow {
            targets.push(sh.as_slice());
        }
        prog.push(walk_loop(&src, &targets));
    }
    if let Some(sh) = &shadow {
        // Rename the shadow family back onto the source.
        prog.push(set_tok(a, tv(head)));
        prog.push(walk_loop(sh, &[&src]));
    }

    let unit = v.unit(seq(prog));
    let mut outputs: Vec<String> = vec![spec.head.clone()];
    for c in &spec.copies {
        outputs.extend(c.names.iter().cloned());
    }
    if spec.keep_source {
        outputs.extend(spec.src.iter().cloned());
    }
    let sig = TransducerSig {
        inputs: std::iter::once(spec.head.clone())
            .chain(spec.src.iter().cloned())
            .collect(),
        input_rank: spec.src_rank,
        outputs,
        output_rank: 0,
    };
    Ok((unit, sig))
}

/// The standard two-letter string duplicator: rank-1 source `(e, f0, f1)`,
/// two rank-0 copies `(g0, g1)` and `(h0, h1)`, plus a rank-1 spawn that
/// restores the source.
pub fn gen_string_duplicator() -> (SourceUnit, TransducerSig) {
    let spec = DuplicatorSpec {
        head: "e".into(),
        src: vec!["f0".into(), "f1".into()],
        src_rank: 1,
        copies: vec![
            CopyGroup {
                names: vec!["g0".into(), "g1".into()],
                rank: 0,
            },
            CopyGroup {
                names: vec!["h0".into(), "h1".into()],
                rank: 0,
            },
        ],
        keep_source: true,
    };
    gen_duplicator(&spec).expect("standard duplicator spec is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::certify_run;
    use crate::checker::check;
    use crate::interp::{run, ExecConfig, ExitReason};
    use crate::structure::{decode_string, encode_string};

    #[test]
    fn standard_duplicator_is_accepted() {
        let (unit, _) = gen_string_duplicator();
        let report = check(&unit);
        assert!(report.accepted(), "{:?}", report.errors);
    }

    #[test]
    fn duplication_copies_and_restores() {
        let (unit, _) = gen_string_duplicator();
        let input = encode_string("110", "e", "f0", "f1").unwrap();
        let (out, metrics, _) = run(&unit, &input, ExecConfig::default()).unwrap();
        for (h, z, o) in [("e", "f0", "f1"), ("e", "g0", "g1"), ("e", "h0", "h1")] {
            assert_eq!(decode_string(&out, h, z, o).unwrap(), "110");
        }
        // Each walked entry costs one pass; depletion ends both loops.
        assert_eq!(metrics.activations.len(), 2);
        assert_eq!(metrics.activations[0].passes, 3);
        assert_eq!(metrics.activations[0].exit, ExitReason::VariantDepleted);
        assert_eq!(metrics.activations[1].passes, 3);
        let v = certify_run(&unit, &metrics).unwrap();
        assert!(v.pass, "{v}");
    }

    #[test]
    fn two_same_rank_copies_are_refused() {
        let spec = DuplicatorSpec {
            head: "e".into(),
            src: vec!["f0".into(), "f1".into()],
            src_rank: 1,
            copies: vec![
                CopyGroup {
                    names: vec!["g0".into(), "g1".into()],
                    rank: 1,
                },
                CopyGroup {
                    names: vec!["h0".into(), "h1".into()],
                    rank: 1,
                },
            ],
            keep_source: false,
        };
        assert!(matches!(
            gen_duplicator(&spec),
            Err(TransformError::Refused(_))
        ));
    }

    #[test]
    fn pure_spawn_preserves_the_input() {
        let spec = DuplicatorSpec {
            head: "e".into(),
            src: vec!["f0".into(), "f1".into()],
            src_rank: 1,
            copies: vec![],
            keep_source: true,
        };
        let (unit, _) = gen_duplicator(&spec).unwrap();
        let input = encode_string("0101", "e", "f0", "f1").unwrap();
        let (out, _, _) = run(&unit, &input, ExecConfig::default()).unwrap();
        assert_eq!(decode_string(&out, "e", "f0", "f1").unwrap(), "0101");
    }

    #[test]
    fn one_same_rank_copy_without_keep_is_allowed() {
        let spec = DuplicatorSpec {
            head: "e".into(),
            src: vec!["f0".into(), "f1".into()],
            src_rank: 1,
            copies: vec![CopyGroup {
                names: vec!["g0".into(), "g1".into()],
                rank: 1,
            }],
            keep_source: false,
        };
        let (unit, _) = gen_duplicator(&spec).unwrap();
        let input = encode_string("1001", "e", "f0", "f1").unwrap();
        let (out, _, _) = run(&unit, &input, ExecConfig::default()).unwrap();
        assert_eq!(decode_string(&out, "e", "g0", "g1").unwrap(), "1001");
    }
}
