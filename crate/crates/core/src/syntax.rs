//! Surface syntax.
//!
//! ```text
//! term   := binder | app
//! binder := ("Pi" | "Sig" | "fn") IDENT ":" term "." term
//! app    := atom+
//! atom   := "Prop" | "Type" NAT | "fst" atom | "snd" atom
//!         | "<" term "," term ">" ":" (atom | binder)
//!         | IDENT | "(" term ")"
//! ```
//!
//! `TypeN` may be written with or without a space. `--` starts a line
//! comment. A context file holds one `IDENT : term` entry per line.

use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::term::{Context, Name, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(String),
    Colon,
    Dot,
    Comma,
    Lt,
    Gt,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Nat(s) => format!("`{s}`"),
            Tok::Colon => "`:`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Gt => "`>`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

const KEYWORDS: &[&str] = &["Pi", "Sig", "fn", "fst", "snd", "Prop", "Type"];

/// Whether `s` is usable as a variable name.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'') && !is_reserved(s)
}

fn is_reserved(s: &str) -> bool {
    KEYWORDS.contains(&s) || universe_suffix(s).is_some()
}

fn universe_suffix(s: &str) -> Option<&str> {
    let rest = s.strip_prefix("Type")?;
    (!rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit())).then_some(rest)
}

fn lex(src: &str, first_line: usize) -> Result<(Vec<Spanned>, (usize, usize)), ParseError> {
    let mut out = Vec::new();
    let mut line = first_line;
    let mut col = 1;
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c == '-' {
            chars.next();
            col += 1;
            if chars.peek() == Some(&'-') {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
                continue;
            }
            return Err(ParseError {
                line: tl,
                column: tc,
                message: "unexpected character `-`".into(),
            });
        }
        let single = match c {
            ':' => Some(Tok::Colon),
            '.' => Some(Tok::Dot),
            ',' => Some(Tok::Comma),
            '<' => Some(Tok::Lt),
            '>' => Some(Tok::Gt),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            col += 1;
            out.push(Spanned {
                tok,
                line: tl,
                column: tc,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c.is_ascii_digit() {
            let digits = c.is_ascii_digit();
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                let ok = if digits {
                    c.is_ascii_digit()
                } else {
                    c.is_ascii_alphanumeric() || c == '_' || c == '\''
                };
                if !ok {
                    break;
                }
                word.push(c);
                chars.next();
                col += 1;
            }
            out.push(Spanned {
                tok: if digits { Tok::Nat(word) } else { Tok::Ident(word) },
                line: tl,
                column: tc,
            });
            continue;
        }
        return Err(ParseError {
            line: tl,
            column: tc,
            message: format!("unexpected character `{c}`"),
        });
    }
    Ok((out, (line, col)))
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    eof: (usize, usize),
}

impl Parser {
    fn new(src: &str, first_line: usize) -> Result<Self, ParseError> {
        let (toks, eof) = lex(src, first_line)?;
        Ok(Self { toks, pos: 0, eof })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|s| (s.line, s.column))
            .unwrap_or(self.eof)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let (line, column) = self.here();
        Err(ParseError {
            line,
            column,
            message: message.into(),
        })
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, ParseError> {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {}", t.describe())),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.unexpected(&tok.describe())
        }
    }

    fn ident(&mut self) -> Result<Name, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if is_identifier(s) => {
                let n = Name::from(s.as_str());
                self.pos += 1;
                Ok(n)
            }
            Some(Tok::Ident(s)) => self.error(format!("`{s}` is reserved")),
            _ => self.unexpected("an identifier"),
        }
    }

    fn at_binder(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == "Pi" || s == "Sig" || s == "fn")
    }

    fn at_atom(&self) -> bool {
        match self.peek() {
            Some(Tok::Lt) | Some(Tok::LParen) => true,
            Some(Tok::Ident(s)) => !matches!(s.as_str(), "Pi" | "Sig" | "fn"),
            _ => false,
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        stacker::maybe_grow(32 * 1024, 1024 * 1024, || {
            if self.at_binder() {
                self.binder()
            } else {
                self.app()
            }
        })
    }

    fn binder(&mut self) -> Result<Term, ParseError> {
        let kw = match self.peek() {
            Some(Tok::Ident(s)) => s.clone(),
            _ => return self.unexpected("a binder"),
        };
        self.pos += 1;
        let x = self.ident()?;
        self.expect(Tok::Colon)?;
        let dom = self.term()?;
        self.expect(Tok::Dot)?;
        let body = self.term()?;
        let (dom, body) = (Arc::new(dom), Arc::new(body));
        Ok(match kw.as_str() {
            "Pi" => Term::Pi(x, dom, body),
            "Sig" => Term::Sigma(x, dom, body),
            _ => Term::Lam(x, dom, body),
        })
    }

    fn app(&mut self) -> Result<Term, ParseError> {
        if !self.at_atom() {
            return self.unexpected("a term");
        }
        let mut t = self.atom()?;
        while self.at_atom() {
            let a = self.atom()?;
            t = Term::app(t, a);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        stacker::maybe_grow(32 * 1024, 1024 * 1024, || {
            let tok = match self.peek() {
                Some(t) => t.clone(),
                None => return self.unexpected("a term"),
            };
            match tok {
                Tok::LParen => {
                    self.pos += 1;
                    let t = self.term()?;
                    self.expect(Tok::RParen)?;
                    Ok(t)
                }
                Tok::Lt => {
                    self.pos += 1;
                    let m = self.term()?;
                    self.expect(Tok::Comma)?;
                    let n = self.term()?;
                    self.expect(Tok::Gt)?;
                    self.expect(Tok::Colon)?;
                    let ann = if self.at_binder() {
                        self.binder()?
                    } else {
                        self.atom()?
                    };
                    Ok(Term::pair(m, n, ann))
                }
                Tok::Ident(s) => match s.as_str() {
                    "Prop" => {
                        self.pos += 1;
                        Ok(Term::Prop)
                    }
                    "Type" => {
                        self.pos += 1;
                        match self.peek() {
                            Some(Tok::Nat(d)) => {
                                let d = d.clone();
                                let level = self.level(&d)?;
                                self.pos += 1;
                                Ok(Term::Type(level))
                            }
                            _ => self.unexpected("a universe level"),
                        }
                    }
                    "fst" | "snd" => {
                        self.pos += 1;
                        if !self.at_atom() {
                            return self.unexpected("an argument to a projection");
                        }
                        let a = self.atom()?;
                        Ok(if s == "fst" {
                            Term::proj1(a)
                        } else {
                            Term::proj2(a)
                        })
                    }
                    _ => {
                        if let Some(d) = universe_suffix(&s) {
                            let level = self.level(d)?;
                            self.pos += 1;
                            Ok(Term::Type(level))
                        } else {
                            Ok(Term::Var(self.ident()?))
                        }
                    }
                },
                other => self.error(format!("expected a term, found {}", other.describe())),
            }
        })
    }

    fn level(&self, digits: &str) -> Result<u32, ParseError> {
        match digits.parse::<u32>() {
            Ok(l) => Ok(l),
            Err(_) => self.error(format!("universe level `{digits}` is too large")),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => self.error(format!("unexpected {} after term", t.describe())),
        }
    }
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, 1)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parse a context file: one `IDENT : term` per non-blank line.
pub fn parse_context(text: &str) -> Result<Context, ParseError> {
    let mut entries: Vec<(Name, Term)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let mut p = Parser::new(line, i + 1)?;
        if p.peek().is_none() {
            continue;
        }
        let x = p.ident()?;
        p.expect(Tok::Colon)?;
        let t = p.term()?;
        p.finish()?;
        entries.push((x, t));
    }
    Ok(Context::from_entries(entries.iter().map(|(n, t)| (&**n, t.clone()))))
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Term,
    App,
    Atom,
}

/// Render a term in surface syntax. `parse_term(&print_term(t))` is
/// alpha-equal to `t`.
pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    write_term(&mut out, t, Prec::Term);
    out
}

pub fn print_context(g: &Context) -> String {
    let mut out = String::new();
    for (x, t) in g.entries() {
        let _ = writeln!(out, "{x} : {}", print_term(t));
    }
    out
}

/// Binders and pairs annotated by a binder extend as far right as possible.
fn is_open(t: &Term) -> bool {
    match t {
        Term::Pi(..) | Term::Sigma(..) | Term::Lam(..) => true,
        Term::Pair(_, _, ann) => is_binder(ann),
        _ => false,
    }
}

fn is_binder(t: &Term) -> bool {
    matches!(t, Term::Pi(..) | Term::Sigma(..) | Term::Lam(..))
}

fn write_term(out: &mut String, t: &Term, prec: Prec) {
    stacker::maybe_grow(32 * 1024, 1024 * 1024, || {
        let needs_parens = match t {
            _ if is_open(t) => prec != Prec::Term,
            Term::App(..) => prec == Prec::Atom,
            _ => false,
        };
        if needs_parens {
            out.push('(');
        }
        match t {
            Term::Var(x) => out.push_str(x),
            Term::Prop => out.push_str("Prop"),
            Term::Type(j) => {
                let _ = write!(out, "Type{j}");
            }
            Term::Pi(x, a, b) => write_binder(out, "Pi", x, a, b),
            Term::Sigma(x, a, b) => write_binder(out, "Sig", x, a, b),
            Term::Lam(x, a, b) => write_binder(out, "fn", x, a, b),
            Term::App(f, a) => {
                write_term(out, f, Prec::App);
                out.push(' ');
                write_term(out, a, Prec::Atom);
            }
            Term::Pair(m, n, ann) => {
                out.push_str("< ");
                write_term(out, m, Prec::Term);
                out.push_str(" , ");
                write_term(out, n, Prec::Term);
                out.push_str(" > : ");
                if is_binder(ann) {
                    write_term(out, ann, Prec::Term);
                } else {
                    write_term(out, ann, Prec::Atom);
                }
            }
            Term::Proj1(m) => {
                out.push_str("fst ");
                write_term(out, m, Prec::Atom);
            }
            Term::Proj2(m) => {
                out.push_str("snd ");
                write_term(out, m, Prec::Atom);
            }
        }
        if needs_parens {
            out.push(')');
        }
    })
}

fn write_binder(out: &mut String, kw: &str, x: &Name, a: &Term, b: &Term) {
    let _ = write!(out, "{kw} {x} : ");
    // binder domains are parenthesised when open, for readability
    write_term(out, a, Prec::App);
    out.push_str(" . ");
    write_term(out, b, Prec::Term);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::alpha_eq;

    #[test]
    fn parses_binders_and_universes() {
        assert_eq!(
            parse_term("Pi x : Prop . x").unwrap(),
            Term::pi("x", Term::Prop, Term::var("x"))
        );
        assert_eq!(parse_term("Type0").unwrap(), Term::ty(0));
        assert_eq!(parse_term("Type 12").unwrap(), Term::ty(12));
    }

    #[test]
    fn parses_prop2_term() {
        let c = parse_term("Sig x : (Sig y : Prop . Prop) . Prop").unwrap();
        assert_eq!(
            c,
            Term::sigma("x", Term::sigma("y", Term::Prop, Term::Prop), Term::Prop)
        );
    }

    #[test]
    fn parses_self_application_constant() {
        let a = parse_term("fn y : Type0 . (Sig x : Type0 . y y)").unwrap();
        assert_eq!(
            a,
            Term::lam(
                "y",
                Term::ty(0),
                Term::sigma("x", Term::ty(0), Term::app(Term::var("y"), Term::var("y")))
            )
        );
    }

    #[test]
    fn application_is_left_associative() {
        let t = parse_term("f a b").unwrap();
        assert_eq!(
            t,
            Term::app(Term::app(Term::var("f"), Term::var("a")), Term::var("b"))
        );
        assert_eq!(print_term(&t), "f a b");
        let t = Term::app(Term::var("f"), Term::app(Term::var("a"), Term::var("b")));
        assert_eq!(print_term(&t), "f (a b)");
    }

    #[test]
    fn prints_examples() {
        assert_eq!(print_term(&Term::pi("x", Term::Prop, Term::var("x"))), "Pi x : Prop . x");
        let src = "< Prop , Prop > : Sig x : Type0 . Type0";
        assert_eq!(print_term(&parse_term(src).unwrap()), src);
    }

    #[test]
    fn projections_take_atoms() {
        let t = parse_term("fst p q").unwrap();
        assert_eq!(t, Term::app(Term::proj1(Term::var("p")), Term::var("q")));
        let t = parse_term("snd (p q)").unwrap();
        assert_eq!(print_term(&t), "snd (p q)");
    }

    #[test]
    fn open_forms_are_parenthesised_in_argument_position() {
        let pair = parse_term("< a , b > : Sig x : A . B").unwrap();
        let t = Term::app(pair.clone(), Term::var("c"));
        let s = print_term(&t);
        assert_eq!(s, "(< a , b > : Sig x : A . B) c");
        assert_eq!(parse_term(&s).unwrap(), t);
        let t = Term::app(Term::var("f"), Term::lam("x", Term::Prop, Term::var("x")));
        assert_eq!(print_term(&t), "f (fn x : Prop . x)");
    }

    #[test]
    fn comments_and_whitespace_are_ignored() {
        let t = parse_term("-- identity\nfn x : Prop .\n   x -- body\n").unwrap();
        assert!(alpha_eq(&t, &Term::lam("y", Term::Prop, Term::var("y"))));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_term("Pi x : Prop").unwrap_err();
        assert_eq!((e.line, e.column), (1, 12));
        let e = parse_term("fn x : Prop .\n  )").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        let e = parse_term("fn Prop : Prop . Prop").unwrap_err();
        assert!(e.message.contains("reserved"), "{e}");
        assert!(parse_term("x $").is_err());
        assert!(parse_term("").is_err());
    }

    #[test]
    fn parses_context_files() {
        let g = parse_context("A : Type0\n\n-- proof variable\np : Pi x : A . Prop\n").unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.lookup("p"), Some(&Term::pi("x", Term::var("A"), Term::Prop)));
        let e = parse_context("A : Type0\nB Type0\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert_eq!(print_context(&g), "A : Type0\np : Pi x : A . Prop\n");
    }
}
