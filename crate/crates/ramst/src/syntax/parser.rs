//! Recursive-descent parser for the program grammar.
//!
//! Identifiers are resolved against the vocabulary header as they are read,
//! so undeclared names and arity mismatches are reported with positions at
//! parse time. Dialect-level syntax rules are enforced here too: ranks are
//! declared exactly in STR units, ST loops carry no variant, and STV/STR
//! loops must carry one.

use crate::structure::{FuncDecl, FuncId, Term, Vocabulary};

use super::ast::*;
use super::lexer::{lex, Tok};
use super::SyntaxError;

const KEYWORDS: &[&str] = &[
    "dialect", "vocab", "ext", "con", "new", "set", "if", "do", "true", "false", "def", "omega",
];

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    vocab: Vocabulary,
}

pub fn parse_program(src: &str) -> Result<SourceUnit, SyntaxError> {
    let lexed = lex(src)?;
    let mut p = Parser {
        toks: lexed.toks,
        pos: 0,
        vocab: Vocabulary::new(),
    };
    p.unit()
}

/// Parse a single term against a vocabulary (used by guard evaluation in
/// tests and by the CLI).
pub fn parse_term(src: &str, vocab: &Vocabulary) -> Result<Term, SyntaxError> {
    let lexed = lex(src)?;
    let mut p = Parser {
        toks: lexed.toks,
        pos: 0,
        vocab: vocab.clone(),
    };
    let t = p.term()?;
    p.expect(Tok::Eof)?;
    Ok(t)
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn next(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<Span, SyntaxError> {
        let (t, span) = self.next();
        if t == tok {
            Ok(span)
        } else {
            Err(SyntaxError::at(span, format!("expected {tok}, found {t}")))
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<Span, SyntaxError> {
        let (t, span) = self.next();
        match t {
            Tok::Ident(s) if s == kw => Ok(span),
            other => Err(SyntaxError::at(
                span,
                format!("expected `{kw}`, found {other}"),
            )),
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn name(&mut self) -> Result<(String, Span), SyntaxError> {
        let (t, span) = self.next();
        match t {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => Ok((s, span)),
            Tok::Ident(s) => Err(SyntaxError::at(
                span,
                format!("`{s}` is a keyword, not a name"),
            )),
            other => Err(SyntaxError::at(span, format!("expected a name, found {other}"))),
        }
    }

    fn nat(&mut self) -> Result<(u64, Span), SyntaxError> {
        let (t, span) = self.next();
        match t {
            Tok::Nat(n) => Ok((n, span)),
            other => Err(SyntaxError::at(
                span,
                format!("expected a number, found {other}"),
            )),
        }
    }

    fn unit(&mut self) -> Result<SourceUnit, SyntaxError> {
        self.keyword("dialect")?;
        let (d, dspan) = self.name()?;
        let dialect = match d.as_str() {
            "ST" => Dialect::St,
            "STV" => Dialect::Stv,
            "STR" => Dialect::Str,
            other => {
                return Err(SyntaxError::at(
                    dspan,
                    format!("unknown dialect `{other}` (expected ST, STV, or STR)"),
                ))
            }
        };
        self.vocab_header(dialect)?;
        let prog = self.prog(dialect)?;
        self.expect(Tok::Eof)?;
        Ok(SourceUnit {
            dialect,
            vocab: std::mem::take(&mut self.vocab),
            prog,
        })
    }

    fn vocab_header(&mut self, dialect: Dialect) -> Result<(), SyntaxError> {
        self.keyword("vocab")?;
        self.expect(Tok::LBrace)?;
        loop {
            let (name, nspan) = self.name()?;
            self.expect(Tok::Colon)?;
            let (arity, _) = self.nat()?;
            let rank = if *self.peek() == Tok::At {
                let at = self.next().1;
                if dialect != Dialect::Str {
                    return Err(SyntaxError::at(
                        at,
                        format!("rank declared in dialect {dialect}; ranks are STR-only"),
                    ));
                }
                let (r, _) = self.nat()?;
                Some(r as u32)
            } else {
                if dialect == Dialect::Str {
                    return Err(SyntaxError::at(
                        nspan,
                        format!("`{name}` needs a rank (`@r`) in dialect STR"),
                    ));
                }
                None
            };
            self.vocab
                .push(FuncDecl {
                    name: name.clone(),
                    arity: arity as usize,
                    rank,
                })
                .map_err(|e| SyntaxError::at(nspan, e.to_string()))?;
            match self.next() {
                (Tok::Comma, _) => continue,
                (Tok::RBrace, _) => return Ok(()),
                (t, span) => {
                    return Err(SyntaxError::at(span, format!("expected `,` or `}}`, found {t}")))
                }
            }
        }
    }

    fn prog(&mut self, dialect: Dialect) -> Result<Program, SyntaxError> {
        let mut stmts = vec![self.stmt(dialect)?];
        while *self.peek() == Tok::Semi {
            self.next();
            stmts.push(self.stmt(dialect)?);
        }
        Ok(Program::seq(stmts))
    }

    fn resolve(&self, name: &str, span: Span) -> Result<FuncId, SyntaxError> {
        self.vocab
            .id(name)
            .ok_or_else(|| SyntaxError::at(span, format!("undeclared identifier `{name}`")))
    }

    /// `app := NAME ("(" term ("," term)* ")")?` with arity checking.
    fn app(&mut self) -> Result<(FuncId, Vec<Term>, Span), SyntaxError> {
        let (name, span) = self.name()?;
        let id = self.resolve(&name, span)?;
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen {
            self.next();
            args.push(self.term()?);
            while *self.peek() == Tok::Comma {
                self.next();
                args.push(self.term()?);
            }
            self.expect(Tok::RParen)?;
        }
        let declared = self.vocab.decl(id).arity;
        if declared != args.len() {
            return Err(SyntaxError::at(
                span,
                format!(
                    "arity mismatch for `{name}`: declared {declared}, used with {}",
                    args.len()
                ),
            ));
        }
        Ok((id, args, span))
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        if self.at_keyword("omega") {
            self.next();
            return Ok(Term::Omega);
        }
        let (id, args, _) = self.app()?;
        Ok(Term::App(id, args))
    }

    /// Update argument positions require standard terms.
    fn standard_terms(args: &[Term], value: Option<&Term>, span: Span) -> Result<(), SyntaxError> {
        let all_standard =
            args.iter().all(Term::is_standard) && value.map(Term::is_standard).unwrap_or(true);
        if all_standard {
            Ok(())
        } else {
            Err(SyntaxError::at(
                span,
                "omega is not allowed in updates; only guards may mention it",
            ))
        }
    }

    fn stmt(&mut self, dialect: Dialect) -> Result<Program, SyntaxError> {
        let span = self.span();
        if self.at_keyword("ext") {
            self.next();
            let (head, args, hspan) = self.app()?;
            self.expect(Tok::Assign)?;
            let value = self.term()?;
            Self::standard_terms(&args, Some(&value), hspan)?;
            return Ok(Program::Update(
                UpdateAst::Extension { head, args, value },
                span,
            ));
        }
        if self.at_keyword("con") {
            self.next();
            let (head, args, hspan) = self.app()?;
            Self::standard_terms(&args, None, hspan)?;
            return Ok(Program::Update(UpdateAst::Contraction { head, args }, span));
        }
        if self.at_keyword("new") {
            self.next();
            let (name, nspan) = self.name()?;
            let token = self.resolve(&name, nspan)?;
            if self.vocab.decl(token).arity != 0 {
                return Err(SyntaxError::at(
                    nspan,
                    format!("inception target `{name}` must be a token"),
                ));
            }
            return Ok(Program::Update(UpdateAst::Inception { token }, span));
        }
        if self.at_keyword("set") {
            self.next();
            let (head, args, hspan) = self.app()?;
            self.expect(Tok::Assign)?;
            let rhs = if self.at_keyword("new") {
                self.next();
                AssignRhs::New
            } else {
                let t = self.term()?;
                Self::standard_terms(&[], Some(&t), hspan)?;
                AssignRhs::Term(t)
            };
            Self::standard_terms(&args, None, hspan)?;
            return Ok(Program::Assign {
                head,
                args,
                rhs,
                span,
            });
        }
        if self.at_keyword("if") {
            self.next();
            self.expect(Tok::LBracket)?;
            let guard = self.guard()?;
            self.expect(Tok::RBracket)?;
            self.expect(Tok::LBrace)?;
            let then_branch = self.prog(dialect)?;
            self.expect(Tok::RBrace)?;
            self.expect(Tok::LBrace)?;
            let else_branch = self.prog(dialect)?;
            self.expect(Tok::RBrace)?;
            return Ok(Program::If {
                guard,
                then_branch: Box::new(then_branch),
                else_branch: Box::new(else_branch),
                span,
            });
        }
        if self.at_keyword("do") {
            self.next();
            self.expect(Tok::LBracket)?;
            let guard = if *self.peek() == Tok::RBracket {
                Guard::True
            } else {
                self.guard()?
            };
            self.expect(Tok::RBracket)?;
            let variant = if *self.peek() == Tok::LBracket {
                let vspan = self.next().1;
                if dialect == Dialect::St {
                    return Err(SyntaxError::at(
                        vspan,
                        "variants are forbidden in dialect ST",
                    ));
                }
                let mut ids = Vec::new();
                loop {
                    let (name, nspan) = self.name()?;
                    ids.push(self.resolve(&name, nspan)?);
                    match self.next() {
                        (Tok::Comma, _) => continue,
                        (Tok::RBracket, _) => break,
                        (t, s) => {
                            return Err(SyntaxError::at(
                                s,
                                format!("expected `,` or `]`, found {t}"),
                            ))
                        }
                    }
                }
                Some(ids)
            } else {
                if dialect != Dialect::St {
                    return Err(SyntaxError::at(
                        span,
                        format!("loops in dialect {dialect} require a variant"),
                    ));
                }
                None
            };
            self.expect(Tok::LBrace)?;
            let body = self.prog(dialect)?;
            self.expect(Tok::RBrace)?;
            return Ok(Program::Do {
                guard,
                variant,
                body: Box::new(body),
                span,
            });
        }
        Err(SyntaxError::at(
            span,
            format!("expected a statement, found {}", self.peek()),
        ))
    }

    fn guard(&mut self) -> Result<Guard, SyntaxError> {
        self.or_guard()
    }

    fn or_guard(&mut self) -> Result<Guard, SyntaxError> {
        let mut g = self.and_guard()?;
        while *self.peek() == Tok::OrOr {
            self.next();
            let rhs = self.and_guard()?;
            g = Guard::Or(Box::new(g), Box::new(rhs));
        }
        Ok(g)
    }

    fn and_guard(&mut self) -> Result<Guard, SyntaxError> {
        let mut g = self.atom_guard()?;
        while *self.peek() == Tok::AndAnd {
            self.next();
            let rhs = self.atom_guard()?;
            g = Guard::And(Box::new(g), Box::new(rhs));
        }
        Ok(g)
    }

    fn atom_guard(&mut self) -> Result<Guard, SyntaxError> {
        match self.peek() {
            Tok::Bang => {
                self.next();
                let g = self.atom_guard()?;
                Ok(Guard::Not(Box::new(g)))
            }
            Tok::LParen => {
                self.next();
                let g = self.guard()?;
                self.expect(Tok::RParen)?;
                Ok(g)
            }
            Tok::Ident(s) if s == "true" => {
                self.next();
                Ok(Guard::True)
            }
            Tok::Ident(s) if s == "false" => {
                self.next();
                Ok(Guard::False)
            }
            Tok::Ident(s) if s == "def" => {
                self.next();
                self.expect(Tok::LParen)?;
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(Guard::def(t))
            }
            _ => {
                let lhs = self.term()?;
                match self.next() {
                    (Tok::EqEq, _) => Ok(Guard::Eq(lhs, self.term()?)),
                    (Tok::NotEq, _) => Ok(Guard::ne(lhs, self.term()?)),
                    (t, s) => Err(SyntaxError::at(
                        s,
                        format!("expected `==` or `!=`, found {t}"),
                    )),
                }
            }
        }
    }
}
