//! Rank shifting and transducer composition.
//!
//! Shifting every rank by the same amount changes nothing semantically
//! (the domination order is what matters), which is exactly what makes
//! composition work: if the producer's output rank and the consumer's
//! input rank disagree, the lower side is lifted until they meet, and the
//! two programs are sequenced over the union vocabulary.

use rustc_hash::FxHashMap;

use crate::checker::check;
use crate::structure::{FuncDecl, FuncId, Term, Vocabulary};
use crate::syntax::{Dialect, Program, SourceUnit, UpdateAst};

use super::{TransducerSig, TransformError};

/// Increment every rank in an STR unit by `d`. The program text is
/// untouched; outputs and step counts are identical on shared inputs.
pub fn shift_ranks(unit: &SourceUnit, d: u32) -> Result<SourceUnit, TransformError> {
    if unit.dialect != Dialect::Str {
        return Err(TransformError::Invalid(
            "rank shifting applies to STR units".into(),
        ));
    }
    let mut vocab = Vocabulary::new();
    for (_, decl) in unit.vocab.decls() {
        vocab
            .push(FuncDecl {
                name: decl.name.clone(),
                arity: decl.arity,
                rank: Some(decl.rank.unwrap_or(0) + d),
            })
            .expect("same names as a valid vocabulary");
    }
    Ok(SourceUnit {
        dialect: Dialect::Str,
        vocab,
        prog: unit.prog.clone(),
    })
}

fn remap_term(t: &Term, map: &[FuncId]) -> Term {
    match t {
        Term::Omega => Term::Omega,
        Term::App(id, args) => Term::App(
            map[id.index()],
            args.iter().map(|a| remap_term(a, map)).collect(),
        ),
    }
}

/// Rewrite a program's identifier indices through `map`.
pub(crate) fn remap_program(p: &Program, map: &[FuncId]) -> Program {
    match p {
        Program::Update(u, span) => {
            let u = match u {
                UpdateAst::Extension { head, args, value } => UpdateAst::Extension {
                    head: map[head.index()],
                    args: args.iter().map(|a| remap_term(a, map)).collect(),
                    value: remap_term(value, map),
                },
                UpdateAst::Contraction { head, args } => UpdateAst::Contraction {
                    head: map[head.index()],
                    args: args.iter().map(|a| remap_term(a, map)).collect(),
                },
                UpdateAst::Inception { token } => UpdateAst::Inception {
                    token: map[token.index()],
                },
            };
            Program::Update(u, *span)
        }
        Program::Assign {
            head,
            args,
            rhs,
            span,
        } => Program::Assign {
            head: map[head.index()],
            args: args.iter().map(|a| remap_term(a, map)).collect(),
            rhs: match rhs {
                crate::syntax::AssignRhs::Term(t) => {
                    crate::syntax::AssignRhs::Term(remap_term(t, map))
                }
                crate::syntax::AssignRhs::New => crate::syntax::AssignRhs::New,
            },
            span: *span,
        },
        Program::Seq(a, b) => Program::Seq(
            Box::new(remap_program(a, map)),
            Box::new(remap_program(b, map)),
        ),
        Program::If {
            guard,
            then_branch,
            else_branch,
            span,
        } => Program::If {
            guard: remap_guard(guard, map),
            then_branch: Box::new(remap_program(then_branch, map)),
            else_branch: Box::new(remap_program(else_branch, map)),
            span: *span,
        },
        Program::Do {
            guard,
            variant,
            body,
            span,
        } => Program::Do {
            guard: remap_guard(guard, map),
            variant: variant
                .as_ref()
                .map(|ids| ids.iter().map(|i| map[i.index()]).collect()),
            body: Box::new(remap_program(body, map)),
            span: *span,
        },
    }
}

fn remap_guard(g: &crate::syntax::Guard, map: &[FuncId]) -> crate::syntax::Guard {
    use crate::syntax::Guard;
    match g {
        Guard::True => Guard::True,
        Guard::False => Guard::False,
        Guard::Eq(a, b) => Guard::Eq(remap_term(a, map), remap_term(b, map)),
        Guard::Not(g) => Guard::Not(Box::new(remap_guard(g, map))),
        Guard::And(a, b) => Guard::And(
            Box::new(remap_guard(a, map)),
            Box::new(remap_guard(b, map)),
        ),
        Guard::Or(a, b) => Guard::Or(
            Box::new(remap_guard(a, map)),
            Box::new(remap_guard(b, map)),
        ),
    }
}

/// Compose two transducers: run `p1`, then `p2` reading `p1`'s outputs.
/// `p1`'s declared outputs must be among `p2`'s inputs (extra `p2` inputs
/// ride along as inputs of the composition). Ranks are aligned by lifting
/// one side; `p2`-side scratch ids that collide with `p1` names are
/// renamed.
pub fn compose(
    p1: &SourceUnit,
    sig1: &TransducerSig,
    p2: &SourceUnit,
    sig2: &TransducerSig,
) -> Result<(SourceUnit, TransducerSig), TransformError> {
    for u in [p1, p2] {
        let r = check(u);
        if !r.accepted() {
            return Err(TransformError::Invalid(format!(
                "compose requires accepted units:\n{}",
                r.machine_format("<unit>")
            )));
        }
    }
    for out in &sig1.outputs {
        if !sig2.inputs.contains(out) {
            return Err(TransformError::Invalid(format!(
                "producer output `{out}` is not an input of the consumer"
            )));
        }
    }

    // Align ranks: producer output rank s1 vs consumer input rank t2.
    let (p1, sig1_in_rank, p2, d2) = if sig1.output_rank >= sig2.input_rank {
        let d = sig1.output_rank - sig2.input_rank;
        (p1.clone(), sig1.input_rank, shift_ranks(p2, d)?, d)
    } else {
        let d = sig2.input_rank - sig1.output_rank;
        (shift_ranks(p1, d)?, sig1.input_rank + d, p2.clone(), 0)
    };

    let interface: Vec<String> = sig1.outputs.clone();
    let mut vocab = p1.vocab.clone();
    let mut name_map: FxHashMap<String, String> = FxHashMap::default();
    let mut idx_map: Vec<FuncId> = Vec::with_capacity(p2.vocab.len());
    for (_, d) in p2.vocab.decls() {
        if interface.contains(&d.name) {
            let Some(existing) = vocab.id(&d.name) else {
                return Err(TransformError::Invalid(format!(
                    "interface id `{}` is not declared by the producer",
                    d.name
                )));
            };
            let e = vocab.decl(existing);
            if e.arity != d.arity || e.rank != d.rank {
                return Err(TransformError::Invalid(format!(
                    "interface id `{}` disagrees between the two units \
                     (arity {}/{}, rank {:?}/{:?})",
                    d.name, e.arity, d.arity, e.rank, d.rank
                )));
            }
            idx_map.push(existing);
            continue;
        }
        let mut name = d.name.clone();
        if sig2.inputs.contains(&d.name) {
            // A pass-through input of the consumer: it must not collide
            // with anything the producer declares.
            if vocab.id(&name).is_some() {
                return Err(TransformError::Invalid(format!(
                    "consumer input `{name}` collides with a producer identifier"
                )));
            }
        } else {
            while vocab.id(&name).is_some() {
                name.push_str("_c2");
            }
        }
        if name != d.name {
            name_map.insert(d.name.clone(), name.clone());
        }
        let id = vocab
            .push(FuncDecl {
                name,
                arity: d.arity,
                rank: d.rank,
            })
            .expect("freshness ensured above");
        idx_map.push(id);
    }

    let prog2 = remap_program(&p2.prog, &idx_map);
    let unit = SourceUnit {
        dialect: Dialect::Str,
        vocab,
        prog: Program::Seq(Box::new(p1.prog.clone()), Box::new(prog2)),
    };
    let rename = |n: &String| name_map.get(n).cloned().unwrap_or_else(|| n.clone());
    let mut inputs = sig1.inputs.clone();
    for extra in sig2.inputs.iter().filter(|i| !interface.contains(i)) {
        inputs.push(rename(extra));
    }
    let sig = TransducerSig {
        inputs,
        input_rank: sig1_in_rank,
        outputs: sig2.outputs.iter().map(rename).collect(),
        output_rank: sig2.output_rank + d2,
    };
    Ok((unit, sig))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::{check, max_rank};
    use crate::interp::{run, ExecConfig};
    use crate::structure::encode_string;
    use crate::transform::gen_string_duplicator;

    #[test]
    fn zero_shift_is_identity() {
        let (unit, _) = gen_string_duplicator();
        let shifted = shift_ranks(&unit, 0).unwrap();
        assert_eq!(unit, shifted);
    }

    #[test]
    fn shifting_preserves_outputs_and_steps() {
        let (unit, _) = gen_string_duplicator();
        let shifted = shift_ranks(&unit, 2).unwrap();
        assert!(check(&shifted).accepted());
        assert_eq!(
            max_rank(&shifted).unwrap(),
            max_rank(&unit).unwrap() + 2
        );
        let input = encode_string("10110", "e", "f0", "f1").unwrap();
        let (o1, m1, _) = run(&unit, &input, ExecConfig::default()).unwrap();
        let (o2, m2, _) = run(&shifted, &input, ExecConfig::default()).unwrap();
        assert_eq!(m1.steps, m2.steps);
        // Same atoms, same entries: components agree one by one.
        for (id, d) in o1.vocab().decls() {
            let id2 = o2.vocab().id(&d.name).unwrap();
            assert_eq!(o1.component(id), o2.component(id2));
        }
    }
}
