//! Canonical pretty-printer. `parse_program(print_program(u))` is
//! structurally identical to `u`, and the output is byte-stable, which the
//! corpus golden files rely on.

use crate::structure::{Term, Vocabulary};

use super::ast::*;

pub fn print_program(unit: &SourceUnit) -> String {
    let mut out = String::new();
    out.push_str(&format!("dialect {}\n", unit.dialect));
    out.push_str("vocab {\n");
    let n = unit.vocab.len();
    for (i, (_, d)) in unit.vocab.decls().enumerate() {
        out.push_str(&format!("  {}: {}", d.name, d.arity));
        if let Some(r) = d.rank {
            out.push_str(&format!(" @{r}"));
        }
        if i + 1 < n {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("}\n");
    print_prog(&unit.prog, &unit.vocab, 0, &mut out);
    out.push('\n');
    out
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn print_prog(p: &Program, vocab: &Vocabulary, depth: usize, out: &mut String) {
    let stmts = p.flatten();
    let n = stmts.len();
    for (i, s) in stmts.into_iter().enumerate() {
        print_stmt(s, vocab, depth, out);
        if i + 1 < n {
            out.push(';');
            out.push('\n');
        }
    }
}

fn print_stmt(p: &Program, vocab: &Vocabulary, depth: usize, out: &mut String) {
    match p {
        Program::Update(u, _) => {
            indent(out, depth);
            match u {
                UpdateAst::Extension { head, args, value } => {
                    out.push_str("ext ");
                    print_app(*head, args, vocab, out);
                    out.push_str(" = ");
                    print_term(value, vocab, out);
                }
                UpdateAst::Contraction { head, args } => {
                    out.push_str("con ");
                    print_app(*head, args, vocab, out);
                }
                UpdateAst::Inception { token } => {
                    out.push_str("new ");
                    out.push_str(&vocab.decl(*token).name);
                }
            }
        }
        Program::Assign {
            head, args, rhs, ..
        } => {
            indent(out, depth);
            out.push_str("set ");
            print_app(*head, args, vocab, out);
            out.push_str(" = ");
            match rhs {
                AssignRhs::Term(t) => print_term(t, vocab, out),
                AssignRhs::New => out.push_str("new"),
            }
        }
        Program::Seq(..) => {
            // Sequences are flattened by the caller; a nested Seq can only
            // appear if constructed directly, so print it inline.
            print_prog(p, vocab, depth, out);
        }
        Program::If {
            guard,
            then_branch,
            else_branch,
            ..
        } => {
            indent(out, depth);
            out.push_str("if [");
            print_guard(guard, vocab, 0, out);
            out.push_str("] {\n");
            print_prog(then_branch, vocab, depth + 1, out);
            out.push('\n');
            indent(out, depth);
            out.push_str("} {\n");
            print_prog(else_branch, vocab, depth + 1, out);
            out.push('\n');
            indent(out, depth);
            out.push('}');
        }
        Program::Do {
            guard,
            variant,
            body,
            ..
        } => {
            indent(out, depth);
            out.push_str("do [");
            print_guard(guard, vocab, 0, out);
            out.push(']');
            if let Some(ids) = variant {
                out.push_str(" [");
                for (i, id) in ids.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    out.push_str(&vocab.decl(*id).name);
                }
                out.push(']');
            }
            out.push_str(" {\n");
            print_prog(body, vocab, depth + 1, out);
            out.push('\n');
            indent(out, depth);
            out.push('}');
        }
    }
}

fn print_app(head: crate::structure::FuncId, args: &[Term], vocab: &Vocabulary, out: &mut String) {
    out.push_str(&vocab.decl(head).name);
    if !args.is_empty() {
        out.push('(');
        for (i, a) in args.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            print_term(a, vocab, out);
        }
        out.push(')');
    }
}

pub(crate) fn print_term(t: &Term, vocab: &Vocabulary, out: &mut String) {
    match t {
        Term::Omega => out.push_str("omega"),
        Term::App(id, args) => print_app(*id, args, vocab, out),
    }
}

pub(crate) fn term_to_string(t: &Term, vocab: &Vocabulary) -> String {
    let mut s = String::new();
    print_term(t, vocab, &mut s);
    s
}

/// Precedence: 1 = `||`, 2 = `&&`, 3 = atoms and `!`.
fn print_guard(g: &Guard, vocab: &Vocabulary, min_prec: u8, out: &mut String) {
    match g {
        Guard::True => out.push_str("true"),
        Guard::False => out.push_str("false"),
        Guard::Eq(a, b) => {
            print_term(a, vocab, out);
            out.push_str(" == ");
            print_term(b, vocab, out);
        }
        Guard::Not(inner) => match inner.as_ref() {
            // `def(t)` and `!=` are the canonical spellings of negated
            // equations against omega / another term.
            Guard::Eq(t, Term::Omega) => {
                out.push_str("def(");
                print_term(t, vocab, out);
                out.push(')');
            }
            Guard::Eq(a, b) => {
                print_term(a, vocab, out);
                out.push_str(" != ");
                print_term(b, vocab, out);
            }
            other => {
                out.push('!');
                let needs_parens = matches!(other, Guard::And(..) | Guard::Or(..));
                if needs_parens {
                    out.push('(');
                }
                print_guard(other, vocab, 3, out);
                if needs_parens {
                    out.push(')');
                }
            }
        },
        Guard::And(a, b) => {
            let parens = min_prec > 2;
            if parens {
                out.push('(');
            }
            print_guard(a, vocab, 2, out);
            out.push_str(" && ");
            print_guard(b, vocab, 3, out);
            if parens {
                out.push(')');
            }
        }
        Guard::Or(a, b) => {
            let parens = min_prec > 1;
            if parens {
                out.push('(');
            }
            print_guard(a, vocab, 1, out);
            out.push_str(" || ");
            print_guard(b, vocab, 2, out);
            if parens {
                out.push(')');
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_program;
    use super::*;

    fn roundtrip(src: &str) {
        let unit = parse_program(src).unwrap();
        let printed = print_program(&unit);
        let reparsed = parse_program(&printed).unwrap_or_else(|e| {
            panic!("printer output failed to parse: {e}\n---\n{printed}")
        });
        assert_eq!(unit, reparsed, "round-trip changed the AST:\n{printed}");
        // Printing is idempotent.
        assert_eq!(printed, print_program(&reparsed));
    }

    #[test]
    fn simple_updates_round_trip() {
        roundtrip("dialect ST vocab { a:0, f:1 } ext f(a) = f(f(a)); con f(a); new a");
    }

    #[test]
    fn guards_round_trip() {
        roundtrip(
            "dialect STV vocab { a:0, b:0, f:1 } \
             if [def(f(a)) && !(a == b || f(a) != b) && true] { con f(a) } { new b }",
        );
    }

    #[test]
    fn loops_round_trip() {
        roundtrip(
            "dialect STR vocab { a:0 @0, f:1 @1, g:1 @1 } \
             do [] [f, g] { set f(a) = g(a); set a = new }",
        );
    }

    #[test]
    fn empty_guard_is_true() {
        let unit = parse_program("dialect STV vocab { f:1 } do [] [f] { con f(omega) }");
        // omega in update arguments is rejected.
        assert!(unit.is_err());
        let unit =
            parse_program("dialect STV vocab { a:0, f:1 } do [] [f] { con f(a) }").unwrap();
        match &unit.prog {
            Program::Do { guard, .. } => assert_eq!(*guard, Guard::True),
            _ => panic!("expected a loop"),
        }
    }

    #[test]
    fn nested_blocks_round_trip() {
        roundtrip(
            "dialect STR vocab { a:0 @0, e:1 @0, f:1 @1 } \
             do [def(a)] [f] { if [e(a) == omega] { con f(a); new a } { set a = e(a) } }; \
             con e(a)",
        );
    }
}
