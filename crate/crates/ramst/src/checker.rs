//! Static well-formedness: declaration and arity checks, dialect rules, and
//! the STR variant discipline.
//!
//! Ramification beyond variant-rank homogeneity (the non-growth of ranks
//! `>= r` across a pass) is a run-time re-entry condition, not syntax, so
//! the checker only records which ranks each loop monitors; the interpreter
//! enforces them pass by pass.

use std::fmt;

use crate::structure::{FuncId, Term, Vocabulary};
use crate::syntax::{AssignRhs, Dialect, Guard, Program, SourceUnit, Span, UpdateAst};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckCode {
    VariantMixedRank,
    VariantToken,
    Undeclared,
    Arity,
    Dialect,
    NonStandard,
}

impl fmt::Display for CheckCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckCode::VariantMixedRank => "E_VARIANT_MIXED_RANK",
            CheckCode::VariantToken => "E_VARIANT_TOKEN",
            CheckCode::Undeclared => "E_UNDECLARED",
            CheckCode::Arity => "E_ARITY",
            CheckCode::Dialect => "E_DIALECT",
            CheckCode::NonStandard => "E_NONSTANDARD",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckError {
    pub pos: Span,
    pub code: CheckCode,
    pub msg: String,
}

/// Per-loop record: the variant, its rank, and the ranks the loop must not
/// grow. Loops are numbered in pre-order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopInfo {
    pub loop_id: usize,
    pub pos: Span,
    pub variant: Vec<FuncId>,
    pub rank: u32,
    pub monitored: Vec<u32>,
}

#[derive(Clone, Debug, Default)]
pub struct CheckReport {
    pub errors: Vec<CheckError>,
    pub loops: Vec<LoopInfo>,
}

impl CheckReport {
    pub fn accepted(&self) -> bool {
        self.errors.is_empty()
    }

    /// One error per line: `FILE:LINE:COL CODE MESSAGE`.
    pub fn machine_format(&self, file: &str) -> String {
        let mut out = String::new();
        for e in &self.errors {
            out.push_str(&format!(
                "{file}:{}:{} {} {}\n",
                e.pos.line, e.pos.col, e.code, e.msg
            ));
        }
        out
    }
}

struct Ctx<'a> {
    vocab: &'a Vocabulary,
    dialect: Dialect,
    report: CheckReport,
    next_loop: usize,
}

impl Ctx<'_> {
    fn err(&mut self, pos: Span, code: CheckCode, msg: String) {
        self.report.errors.push(CheckError { pos, code, msg });
    }

    fn term(&mut self, t: &Term, pos: Span) {
        match t {
            Term::Omega => {}
            Term::App(id, args) => {
                if id.index() >= self.vocab.len() {
                    self.err(
                        pos,
                        CheckCode::Undeclared,
                        format!("identifier #{} is not declared", id.0),
                    );
                    return;
                }
                let d = self.vocab.decl(*id);
                if d.arity != args.len() {
                    self.err(
                        pos,
                        CheckCode::Arity,
                        format!(
                            "`{}` has arity {}, applied to {} arguments",
                            d.name,
                            d.arity,
                            args.len()
                        ),
                    );
                }
                for a in args {
                    self.term(a, pos);
                }
            }
        }
    }

    fn standard(&mut self, t: &Term, pos: Span) {
        if !t.is_standard() {
            self.err(
                pos,
                CheckCode::NonStandard,
                "updates require standard terms (no omega)".into(),
            );
        }
    }

    fn head(&mut self, head: FuncId, args: &[Term], pos: Span) {
        if head.index() >= self.vocab.len() {
            self.err(
                pos,
                CheckCode::Undeclared,
                format!("identifier #{} is not declared", head.0),
            );
            return;
        }
        let d = self.vocab.decl(head);
        if d.arity != args.len() {
            self.err(
                pos,
                CheckCode::Arity,
                format!(
                    "`{}` has arity {}, applied to {} arguments",
                    d.name,
                    d.arity,
                    args.len()
                ),
            );
        }
        for a in args {
            self.term(a, pos);
            self.standard(a, pos);
        }
    }

    fn guard(&mut self, g: &Guard, pos: Span) {
        match g {
            Guard::True | Guard::False => {}
            Guard::Eq(a, b) => {
                self.term(a, pos);
                self.term(b, pos);
            }
            Guard::Not(g) => self.guard(g, pos),
            Guard::And(a, b) | Guard::Or(a, b) => {
                self.guard(a, pos);
                self.guard(b, pos);
            }
        }
    }

    fn prog(&mut self, p: &Program) {
        match p {
            Program::Update(u, pos) => match u {
                UpdateAst::Extension { head, args, value } => {
                    self.head(*head, args, *pos);
                    self.term(value, *pos);
                    self.standard(value, *pos);
                }
                UpdateAst::Contraction { head, args } => self.head(*head, args, *pos),
                UpdateAst::Inception { token } => {
                    if token.index() >= self.vocab.len() {
                        self.err(
                            *pos,
                            CheckCode::Undeclared,
                            format!("identifier #{} is not declared", token.0),
                        );
                    } else if self.vocab.decl(*token).arity != 0 {
                        self.err(
                            *pos,
                            CheckCode::Arity,
                            format!(
                                "inception target `{}` must be a token",
                                self.vocab.decl(*token).name
                            ),
                        );
                    }
                }
            },
            Program::Assign {
                head,
                args,
                rhs,
                span,
            } => {
                self.head(*head, args, *span);
                if let AssignRhs::Term(t) = rhs {
                    self.term(t, *span);
                    self.standard(t, *span);
                }
            }
            Program::Seq(a, b) => {
                self.prog(a);
                self.prog(b);
            }
            Program::If {
                guard,
                then_branch,
                else_branch,
                span,
            } => {
                self.guard(guard, *span);
                self.prog(then_branch);
                self.prog(else_branch);
            }
            Program::Do {
                guard,
                variant,
                body,
                span,
            } => {
                let loop_id = self.next_loop;
                self.next_loop += 1;
                self.guard(guard, *span);
                match (self.dialect, variant) {
                    (Dialect::St, Some(_)) => self.err(
                        *span,
                        CheckCode::Dialect,
                        "ST loops carry no variant".into(),
                    ),
                    (Dialect::St, None) => {
                        self.report.loops.push(LoopInfo {
                            loop_id,
                            pos: *span,
                            variant: vec![],
                            rank: 0,
                            monitored: vec![],
                        });
                    }
                    (_, None) => self.err(
                        *span,
                        CheckCode::Dialect,
                        format!("{} loops require a variant", self.dialect),
                    ),
                    (_, Some(ids)) => {
                        if ids.is_empty() {
                            self.err(
                                *span,
                                CheckCode::Dialect,
                                "variants are nonempty sets of pointers".into(),
                            );
                        }
                        let mut rank: Option<u32> = None;
                        let mut ok = true;
                        let mut seen = std::collections::BTreeSet::new();
                        let mut dedup = Vec::new();
                        for id in ids {
                            if id.index() >= self.vocab.len() {
                                self.err(
                                    *span,
                                    CheckCode::Undeclared,
                                    format!("identifier #{} is not declared", id.0),
                                );
                                ok = false;
                                continue;
                            }
                            if !seen.insert(*id) {
                                continue;
                            }
                            dedup.push(*id);
                            let d = self.vocab.decl(*id);
                            if d.is_token() {
                                self.err(
                                    *span,
                                    CheckCode::VariantToken,
                                    format!("variant member `{}` is a token", d.name),
                                );
                                ok = false;
                            }
                            if self.dialect == Dialect::Str {
                                let r = d.rank.unwrap_or(0);
                                match rank {
                                    None => rank = Some(r),
                                    Some(r0) if r0 != r => {
                                        self.err(
                                            *span,
                                            CheckCode::VariantMixedRank,
                                            format!(
                                                "variant mixes ranks {r0} and {r} (member `{}`)",
                                                d.name
                                            ),
                                        );
                                        ok = false;
                                    }
                                    _ => {}
                                }
                            }
                        }
                        if ok {
                            let r = rank.unwrap_or(0);
                            let monitored = if self.dialect == Dialect::Str {
                                (r..=self.vocab.max_rank()).collect()
                            } else {
                                vec![]
                            };
                            self.report.loops.push(LoopInfo {
                                loop_id,
                                pos: *span,
                                variant: dedup,
                                rank: r,
                                monitored,
                            });
                        }
                    }
                }
                self.prog(body);
            }
        }
    }
}

/// Check a unit. The report is accepted exactly when the error list is
/// empty; accepted units carry a loop table used by the interpreter and the
/// bounds generator.
pub fn check(unit: &SourceUnit) -> CheckReport {
    let mut ctx = Ctx {
        vocab: &unit.vocab,
        dialect: unit.dialect,
        report: CheckReport::default(),
        next_loop: 0,
    };
    match (unit.dialect, unit.vocab.is_ranked()) {
        (Dialect::Str, false) if !unit.vocab.is_empty() => ctx.err(
            Span::default(),
            CheckCode::Dialect,
            "STR units require a ranked vocabulary".into(),
        ),
        (Dialect::St | Dialect::Stv, true) => ctx.err(
            Span::default(),
            CheckCode::Dialect,
            format!("{} units must not declare ranks", unit.dialect),
        ),
        _ => {}
    }
    ctx.prog(&unit.prog);
    ctx.report
}

/// Largest rank declared in an accepted STR unit; the number of polynomial
/// variables downstream is `max_rank + 1`.
pub fn max_rank(unit: &SourceUnit) -> Result<u32, CheckError> {
    if unit.dialect != Dialect::Str {
        return Err(CheckError {
            pos: Span::default(),
            code: CheckCode::Dialect,
            msg: format!("max_rank is defined for STR units, not {}", unit.dialect),
        });
    }
    Ok(unit.vocab.max_rank())
}
