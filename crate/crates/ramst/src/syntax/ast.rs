//! Program syntax trees for the three dialects.

use crate::structure::{FuncId, Term, Vocabulary};

/// Source position. Compares equal to every other span so that structural
/// AST equality ignores formatting; the position still rides along for
/// error reporting.
#[derive(Clone, Copy, Debug, Default)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl PartialEq for Span {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Span {}

impl std::fmt::Display for Span {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// ST is unrestricted iteration, STV requires depleting variants, STR adds
/// ramification. Erasing ranks turns STR into STV; erasing variants turns
/// STV into ST.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dialect {
    St,
    Stv,
    Str,
}

impl std::fmt::Display for Dialect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Dialect::St => "ST",
            Dialect::Stv => "STV",
            Dialect::Str => "STR",
        })
    }
}

/// The three primitive updates. Extension adds one entry when the spot is
/// empty and everything denotes; contraction removes one entry; inception
/// binds an undefined token to an atom outside the current scope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UpdateAst {
    Extension {
        head: FuncId,
        args: Vec<Term>,
        value: Term,
    },
    Contraction {
        head: FuncId,
        args: Vec<Term>,
    },
    Inception {
        token: FuncId,
    },
}

impl UpdateAst {
    pub fn head(&self) -> FuncId {
        match self {
            UpdateAst::Extension { head, .. } | UpdateAst::Contraction { head, .. } => *head,
            UpdateAst::Inception { token } => *token,
        }
    }
}

/// Right-hand side of assignment sugar: a term, or a fresh atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AssignRhs {
    Term(Term),
    New,
}

/// Boolean combination of equations over terms. Equations compare values in
/// the flat domain where "undefined" equals itself, so `t == omega` is the
/// definedness test (`def(t)` is sugar for its negation).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Guard {
    True,
    False,
    Eq(Term, Term),
    Not(Box<Guard>),
    And(Box<Guard>, Box<Guard>),
    Or(Box<Guard>, Box<Guard>),
}

impl Guard {
    pub fn def(t: Term) -> Guard {
        Guard::Not(Box::new(Guard::Eq(t, Term::Omega)))
    }

    pub fn ne(a: Term, b: Term) -> Guard {
        Guard::Not(Box::new(Guard::Eq(a, b)))
    }
}

/// Program statements. Sequencing is kept binary and right-associated by
/// convention (the parser and all builders fold that way).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Program {
    Update(UpdateAst, Span),
    /// `set f(t, ...) = q` / `set f(t, ...) = new`: sugar for the
    /// save/contract/extend/release sequence over a reserved scratch token.
    Assign {
        head: FuncId,
        args: Vec<Term>,
        rhs: AssignRhs,
        span: Span,
    },
    Seq(Box<Program>, Box<Program>),
    If {
        guard: Guard,
        then_branch: Box<Program>,
        else_branch: Box<Program>,
        span: Span,
    },
    Do {
        guard: Guard,
        /// `None` in dialect ST; a nonempty pointer set otherwise.
        variant: Option<Vec<FuncId>>,
        body: Box<Program>,
        span: Span,
    },
}

impl Program {
    pub fn span(&self) -> Span {
        match self {
            Program::Update(_, s) => *s,
            Program::Assign { span, .. } => *span,
            Program::Seq(a, _) => a.span(),
            Program::If { span, .. } => *span,
            Program::Do { span, .. } => *span,
        }
    }

    /// Right-associated sequence of statements. Panics on an empty list:
    /// the grammar has no empty program.
    pub fn seq(stmts: Vec<Program>) -> Program {
        let mut it = stmts.into_iter().rev();
        let last = it.next().expect("Program::seq of empty list");
        it.fold(last, |acc, s| Program::Seq(Box::new(s), Box::new(acc)))
    }

    /// Flatten nested sequences, in order.
    pub fn flatten(&self) -> Vec<&Program> {
        match self {
            Program::Seq(a, b) => {
                let mut v = a.flatten();
                v.extend(b.flatten());
                v
            }
            other => vec![other],
        }
    }

    /// Pre-order traversal of all statements (including loop bodies and
    /// branch arms).
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Program)) {
        f(self);
        match self {
            Program::Seq(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            Program::If {
                then_branch,
                else_branch,
                ..
            } => {
                then_branch.walk(f);
                else_branch.walk(f);
            }
            Program::Do { body, .. } => body.walk(f),
            _ => {}
        }
    }
}

/// A parsed or generated compilation unit: dialect, vocabulary (ranked iff
/// STR), and the program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceUnit {
    pub dialect: Dialect,
    pub vocab: Vocabulary,
    pub prog: Program,
}

/// The assignment desugaring: `f t⃗ := q` becomes
/// `ext b = q; con f(t⃗); ext f(t⃗) = b; con b`, where `b` is a scratch
/// token that memorizes the value in case the contraction makes it
/// inaccessible. `f t⃗ := new` becomes `new b; ext f(t⃗) = b; con b`.
pub fn desugar_assignment(
    head: FuncId,
    args: Vec<Term>,
    rhs: AssignRhs,
    scratch: FuncId,
) -> Program {
    let span = Span::default();
    let scratch_term = Term::token(scratch);
    match rhs {
        AssignRhs::Term(q) => Program::seq(vec![
            Program::Update(
                UpdateAst::Extension {
                    head: scratch,
                    args: vec![],
                    value: q,
                },
                span,
            ),
            Program::Update(
                UpdateAst::Contraction {
                    head,
                    args: args.clone(),
                },
                span,
            ),
            Program::Update(
                UpdateAst::Extension {
                    head,
                    args,
                    value: scratch_term,
                },
                span,
            ),
            Program::Update(UpdateAst::Contraction { head: scratch, args: vec![] }, span),
        ]),
        AssignRhs::New => Program::seq(vec![
            Program::Update(UpdateAst::Inception { token: scratch }, span),
            Program::Update(
                UpdateAst::Extension {
                    head,
                    args,
                    value: scratch_term,
                },
                span,
            ),
            Program::Update(UpdateAst::Contraction { head: scratch, args: vec![] }, span),
        ]),
    }
}
