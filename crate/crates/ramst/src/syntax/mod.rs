//! Concrete grammar, parser, and printer for ST/STV/STR units.
//!
//! The normative grammar, in EBNF (comments run from `#` to end of line;
//! input is UTF-8 and newline-insensitive):
//!
//! ```text
//! unit    := "dialect" ("ST"|"STV"|"STR") vocab prog
//! vocab   := "vocab" "{" decl ("," decl)* "}"
//! decl    := NAME ":" NAT ("@" NAT)?          # "@rank" iff dialect STR
//! prog    := stmt (";" stmt)*
//! stmt    := update
//!          | "if" "[" guard "]" "{" prog "}" "{" prog "}"
//!          | "do" "[" guard? "]" ("[" NAME ("," NAME)* "]")? "{" prog "}"
//! update  := "ext" app "=" term | "con" app | "new" NAME
//!          | "set" app "=" (term | "new")
//! app     := NAME ("(" term ("," term)* ")")?
//! term    := "omega" | app
//! guard   := "true" | "false" | term "==" term | term "!=" term
//!          | "def" "(" term ")" | "!" guard | guard "&&" guard
//!          | guard "||" guard | "(" guard ")"
//! ```
//!
//! An empty loop guard `[ ]` reads as `true`. `def(t)` is sugar for
//! `!(t == omega)` and `a != b` for `!(a == b)`; the parser desugars both
//! and the printer restores them.

mod ast;
mod lexer;
mod parser;
mod printer;

pub use ast::{
    desugar_assignment, AssignRhs, Dialect, Guard, Program, SourceUnit, Span, UpdateAst,
};
pub use parser::{parse_program, parse_term};
pub use printer::print_program;
pub(crate) use printer::term_to_string;

use thiserror::Error;

/// Lex or parse failure with its source position.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {msg}")]
pub struct SyntaxError {
    pub line: u32,
    pub col: u32,
    pub msg: String,
}

impl SyntaxError {
    pub(crate) fn at(span: Span, msg: impl Into<String>) -> Self {
        SyntaxError {
            line: span.line,
            col: span.col,
            msg: msg.into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::Term;

    #[test]
    fn extension_parses() {
        let unit = parse_program("dialect ST vocab { a:0, f:1, g:1 } ext g(a) = f(a)").unwrap();
        let g = unit.vocab.id("g").unwrap();
        match &unit.prog {
            Program::Update(UpdateAst::Extension { head, args, value }, _) => {
                assert_eq!(*head, g);
                assert_eq!(args.len(), 1);
                assert!(matches!(value, Term::App(..)));
            }
            other => panic!("expected an extension, got {other:?}"),
        }
    }

    #[test]
    fn st_loops_reject_variants() {
        let err =
            parse_program("dialect ST vocab { a:0, f:1 } do [true] [f] { con f(a) }").unwrap_err();
        assert!(err.msg.contains("forbidden"), "{err}");
    }

    #[test]
    fn stv_loops_require_variants() {
        let err = parse_program("dialect STV vocab { a:0, f:1 } do [true] { con f(a) }")
            .unwrap_err();
        assert!(err.msg.contains("require"), "{err}");
    }

    #[test]
    fn ranks_only_in_str() {
        let err = parse_program("dialect STV vocab { f:1 @0 } do [][f] { con f(f) }").unwrap_err();
        assert!(err.msg.contains("STR-only"), "{err}");
        let err = parse_program("dialect STR vocab { f:1 } do [][f] { con f(f) }").unwrap_err();
        assert!(err.msg.contains("needs a rank"), "{err}");
    }

    #[test]
    fn undeclared_and_arity_errors_carry_positions() {
        let err = parse_program("dialect ST vocab { a:0 } ext b = a").unwrap_err();
        assert!(err.msg.contains("undeclared"), "{err}");
        assert!(err.line >= 1 && err.col > 1);
        let err = parse_program("dialect ST vocab { a:0, f:2 } con f(a)").unwrap_err();
        assert!(err.msg.contains("arity"), "{err}");
    }

    #[test]
    fn desugared_assignment_is_the_four_update_sequence() {
        let unit = parse_program("dialect ST vocab { a:0, b:0, f:1 } set f(a) = f(f(a))").unwrap();
        let (head, args, rhs) = match &unit.prog {
            Program::Assign {
                head, args, rhs, ..
            } => (*head, args.clone(), rhs.clone()),
            other => panic!("expected assignment, got {other:?}"),
        };
        let scratch = unit.vocab.id("b").unwrap();
        let prog = desugar_assignment(head, args, rhs, scratch);
        let stmts = prog.flatten();
        assert_eq!(stmts.len(), 4);
        assert!(matches!(
            stmts[0],
            Program::Update(UpdateAst::Extension { head, .. }, _) if *head == scratch
        ));
        assert!(matches!(
            stmts[1],
            Program::Update(UpdateAst::Contraction { .. }, _)
        ));
        assert!(matches!(
            stmts[3],
            Program::Update(UpdateAst::Contraction { head, .. }, _) if *head == scratch
        ));
    }

    #[test]
    fn set_new_is_the_inception_sequence() {
        let unit = parse_program("dialect ST vocab { a:0, b:0, f:1 } set f(a) = new").unwrap();
        let (head, args) = match &unit.prog {
            Program::Assign {
                head,
                args,
                rhs: AssignRhs::New,
                ..
            } => (*head, args.clone()),
            other => panic!("expected `set _ = new`, got {other:?}"),
        };
        let scratch = unit.vocab.id("b").unwrap();
        let prog = desugar_assignment(head, args, AssignRhs::New, scratch);
        let stmts = prog.flatten();
        assert_eq!(stmts.len(), 3);
        assert!(matches!(
            stmts[0],
            Program::Update(UpdateAst::Inception { token }, _) if *token == scratch
        ));
    }
}
