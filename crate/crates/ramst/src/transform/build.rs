//! Builders the generators share: vocabulary assembly, statement
//! shorthands, and chain idioms.
//!
//! Generated code follows two conventions that keep the ramification
//! conditions easy to meet. Every scratch token is initialized before the
//! first loop (a `set` on a defined token is net-zero at its rank, but a
//! first write adds an entry, which would show up inside a monitored
//! pass). And working chains are sentinel-headed: a fresh atom anchors the
//! chain, so every item is a pointer entry, appends need no empty-case
//! branch, and the entry count equals the item count.

use crate::structure::{FuncDecl, FuncId, Term, Vocabulary};
use crate::syntax::{AssignRhs, Dialect, Guard, Program, SourceUnit, Span, UpdateAst};

/// Vocabulary builder for generated STR units.
pub(crate) struct VocabBuilder {
    vocab: Vocabulary,
}

impl VocabBuilder {
    pub fn new() -> Self {
        VocabBuilder {
            vocab: Vocabulary::new(),
        }
    }

    pub fn id(&mut self, name: &str, arity: usize, rank: u32) -> FuncId {
        self.vocab
            .push(FuncDecl {
                name: name.to_string(),
                arity,
                rank: Some(rank),
            })
            .unwrap_or_else(|e| panic!("generator vocabulary: {e}"))
    }

    pub fn tok(&mut self, name: &str, rank: u32) -> FuncId {
        self.id(name, 0, rank)
    }

    pub fn ptr(&mut self, name: &str, rank: u32) -> FuncId {
        self.id(name, 1, rank)
    }

    pub fn has(&self, name: &str) -> bool {
        self.vocab.id(name).is_some()
    }

    pub fn unit(self, prog: Program) -> SourceUnit {
        SourceUnit {
            dialect: Dialect::Str,
            vocab: self.vocab,
            prog,
        }
    }
}

pub(crate) fn tv(tok: FuncId) -> Term {
    Term::token(tok)
}

pub(crate) fn ap1(f: FuncId, a: Term) -> Term {
    Term::App(f, vec![a])
}

pub(crate) fn ap(f: FuncId, args: Vec<Term>) -> Term {
    Term::App(f, args)
}

pub(crate) fn ext(head: FuncId, args: Vec<Term>, value: Term) -> Program {
    Program::Update(UpdateAst::Extension { head, args, value }, Span::default())
}

pub(crate) fn con(head: FuncId, args: Vec<Term>) -> Program {
    Program::Update(UpdateAst::Contraction { head, args }, Span::default())
}

pub(crate) fn set_tok(tok: FuncId, value: Term) -> Program {
    Program::Assign {
        head: tok,
        args: vec![],
        rhs: AssignRhs::Term(value),
        span: Span::default(),
    }
}

pub(crate) fn set_tok_new(tok: FuncId) -> Program {
    Program::Assign {
        head: tok,
        args: vec![],
        rhs: AssignRhs::New,
        span: Span::default(),
    }
}

pub(crate) fn seq(stmts: Vec<Program>) -> Program {
    Program::seq(stmts)
}

pub(crate) fn iff(guard: Guard, then: Program, els: Program) -> Program {
    Program::If {
        guard,
        then_branch: Box::new(then),
        else_branch: Box::new(els),
        span: Span::default(),
    }
}

pub(crate) fn dov(guard: Guard, variant: Vec<FuncId>, body: Program) -> Program {
    Program::Do {
        guard,
        variant: Some(variant),
        body: Box::new(body),
        span: Span::default(),
    }
}

pub(crate) fn def(t: Term) -> Guard {
    Guard::def(t)
}

/// A statement with no effect: contracting a token that is never extended.
pub(crate) fn noop(nil: FuncId) -> Program {
    con(nil, vec![])
}

/// Walk-and-consume one link of a unary chain: `item := ptr(walk);
/// con ptr(walk); walk := item`. Only sound where the link is known to
/// exist (guard with `def(ptr(walk))` otherwise).
pub(crate) fn pop_link(ptr: FuncId, walk: FuncId, item: FuncId) -> Vec<Program> {
    vec![
        set_tok(item, ap1(ptr, tv(walk))),
        con(ptr, vec![tv(walk)]),
        set_tok(walk, tv(item)),
    ]
}

/// Append the value of `item` to a sentinel-headed chain with tail token
/// `tail`: `ext ptr(tail) = item; tail := item`.
pub(crate) fn append_tail(ptr: FuncId, tail: FuncId, item: FuncId) -> Vec<Program> {
    vec![
        ext(ptr, vec![tv(tail)], tv(item)),
        set_tok(tail, tv(item)),
    ]
}
