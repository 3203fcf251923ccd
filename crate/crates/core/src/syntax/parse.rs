//! Recursive-descent parser for the ASCII term language.
//!
//! ```text
//! sequent   ::= structure '|-' structure
//! structure ::= '@' name [ '(' structure, ... ')' ]      hat (F) application
//!             | '#' name [ '(' structure, ... ')' ]      check (G) application
//!             | '@top' | '#bot'
//!             | '(' structure ')'                        when it starts with @ or #
//!             | formula
//! formula   ::= conj ( '\/' conj )*
//! conj      ::= unit ( '/\' unit )*
//! unit      ::= 'top' | 'bot' | name [ '(' formula, ... ')' ] | VAR [':' F|G]
//!             | '(' formula ')'
//! ```
//!
//! Both binary operators associate to the left and `/\` binds tighter than
//! `\/`. Uppercase identifiers are metavariables; they are only accepted by
//! the rule-file reader.

use crate::error::{Error, Result};
use crate::signature::{Signature, Sort};

use super::{flavor_prefix, Formula, Sequent, Structure};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Var(String),
    At,
    Hash,
    LParen,
    RParen,
    Comma,
    Colon,
    And,
    Or,
    Turnstile,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        let two = text.get(i..i + 2);
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '@' => Tok::At,
            '#' => Tok::Hash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            ':' => Tok::Colon,
            '/' if two == Some("/\\") => {
                i += 1;
                Tok::And
            }
            '\\' if two == Some("\\/") => {
                i += 1;
                Tok::Or
            }
            '|' if two == Some("|-") => {
                i += 1;
                Tok::Turnstile
            }
            c if c.is_ascii_alphabetic() => {
                while i + 1 < bytes.len() && {
                    let d = bytes[i + 1] as char;
                    d.is_ascii_alphanumeric() || d == '_' || d == '.' || d == '\''
                } {
                    i += 1;
                }
                let word = &text[start..=i];
                if c.is_ascii_uppercase() {
                    Tok::Var(word.to_string())
                } else {
                    Tok::Ident(word.to_string())
                }
            }
            other => return Err(Error::parse(start, format!("unexpected character `{other}`"))),
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

/// Untyped parse tree shared by concrete terms and rule schemas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub pos: usize,
    pub kind: TermKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermKind {
    Var(String, Option<Sort>),
    Name(String),
    Top,
    Bot,
    And(Box<Term>, Box<Term>),
    Or(Box<Term>, Box<Term>),
    Call(String, Vec<Term>),
    HatTop,
    CheckBot,
    SApp(String, Sort, Vec<Term>),
}

impl Term {
    /// Whether the term was written in structural syntax (`@`/`#`).
    pub fn is_structural(&self) -> bool {
        matches!(
            self.kind,
            TermKind::HatTop | TermKind::CheckBot | TermKind::SApp(..)
        )
    }
}

pub(crate) struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    len: usize,
}

impl Parser {
    pub(crate) fn new(text: &str) -> Result<Parser> {
        Ok(Parser {
            toks: lex(text)?,
            at: 0,
            len: text.len(),
        })
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|t| t.0).unwrap_or(self.len)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.at + 1).map(|t| &t.1)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|t| t.1.clone());
        self.at += 1;
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(Error::parse(self.pos(), format!("expected {what}")))
        }
    }

    pub(crate) fn finish(&self) -> Result<()> {
        if self.at < self.toks.len() {
            return Err(Error::parse(self.pos(), "unexpected trailing input"));
        }
        Ok(())
    }

    pub(crate) fn sequent(&mut self) -> Result<(Term, Term)> {
        let ante = self.structure()?;
        self.expect(Tok::Turnstile, "`|-`")?;
        let succ = self.structure()?;
        self.finish()?;
        Ok((ante, succ))
    }

    pub(crate) fn structure(&mut self) -> Result<Term> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::At) | Some(Tok::Hash) => {
                let sort = if self.bump() == Some(Tok::At) { Sort::F } else { Sort::G };
                let name = match self.bump() {
                    Some(Tok::Ident(n)) => n,
                    _ => return Err(Error::parse(self.pos(), "expected connective name")),
                };
                match (sort, name.as_str()) {
                    (Sort::F, "top") => return Ok(Term { pos, kind: TermKind::HatTop }),
                    (Sort::G, "bot") => return Ok(Term { pos, kind: TermKind::CheckBot }),
                    (Sort::F, "bot") | (Sort::G, "top") => {
                        return Err(Error::parse(
                            pos,
                            format!("`{}{name}` is not a structure", flavor_prefix(sort)),
                        ))
                    }
                    _ => {}
                }
                let mut args = Vec::new();
                if self.eat(&Tok::LParen) {
                    loop {
                        args.push(self.structure()?);
                        if self.eat(&Tok::Comma) {
                            continue;
                        }
                        self.expect(Tok::RParen, "`,` or `)`")?;
                        break;
                    }
                }
                Ok(Term {
                    pos,
                    kind: TermKind::SApp(name, sort, args),
                })
            }
            Some(Tok::LParen) if matches!(self.peek2(), Some(Tok::At) | Some(Tok::Hash)) => {
                self.bump();
                let inner = self.structure()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => self.formula(),
        }
    }

    pub(crate) fn formula(&mut self) -> Result<Term> {
        let mut lhs = self.conj()?;
        while self.peek() == Some(&Tok::Or) {
            let pos = self.pos();
            self.bump();
            let rhs = self.conj()?;
            lhs = Term {
                pos,
                kind: TermKind::Or(Box::new(lhs), Box::new(rhs)),
            };
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Term> {
        let mut lhs = self.unit()?;
        while self.peek() == Some(&Tok::And) {
            let pos = self.pos();
            self.bump();
            let rhs = self.unit()?;
            lhs = Term {
                pos,
                kind: TermKind::And(Box::new(lhs), Box::new(rhs)),
            };
        }
        Ok(lhs)
    }

    fn unit(&mut self) -> Result<Term> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::LParen) => {
                let inner = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some(Tok::Var(name)) => {
                let sort = if self.eat(&Tok::Colon) {
                    match self.bump() {
                        Some(Tok::Var(s)) if s == "F" => Some(Sort::F),
                        Some(Tok::Var(s)) if s == "G" => Some(Sort::G),
                        _ => return Err(Error::parse(self.pos(), "expected sort `F` or `G`")),
                    }
                } else {
                    None
                };
                Ok(Term {
                    pos,
                    kind: TermKind::Var(name, sort),
                })
            }
            Some(Tok::Ident(name)) => {
                let kind = match name.as_str() {
                    "top" => TermKind::Top,
                    "bot" => TermKind::Bot,
                    _ if self.peek() == Some(&Tok::LParen) => {
                        self.bump();
                        let mut args = Vec::new();
                        loop {
                            args.push(self.formula()?);
                            if self.eat(&Tok::Comma) {
                                continue;
                            }
                            self.expect(Tok::RParen, "`,` or `)`")?;
                            break;
                        }
                        TermKind::Call(name, args)
                    }
                    _ => TermKind::Name(name),
                };
                Ok(Term { pos, kind })
            }
            Some(Tok::At) | Some(Tok::Hash) => Err(Error::parse(
                pos,
                "structural connective inside a formula",
            )),
            Some(_) => Err(Error::parse(pos, "expected a formula")),
            None => Err(Error::parse(pos, "unexpected end of input")),
        }
    }
}

/// Converts a formula term. Metavariables are rejected.
pub(crate) fn term_to_formula(t: &Term, sig: &Signature) -> Result<Formula> {
    match &t.kind {
        TermKind::Top => Ok(Formula::Top),
        TermKind::Bot => Ok(Formula::Bot),
        TermKind::And(a, b) => Ok(Formula::and(term_to_formula(a, sig)?, term_to_formula(b, sig)?)),
        TermKind::Or(a, b) => Ok(Formula::or(term_to_formula(a, sig)?, term_to_formula(b, sig)?)),
        TermKind::Name(name) => match sig.get(name) {
            None => Ok(Formula::atom(name)),
            Some(c) if c.arity == 0 => {
                if !c.operational {
                    return Err(Error::parse(t.pos, format!("`{name}` is structural-only")));
                }
                Ok(Formula::app(name, vec![]))
            }
            Some(c) => Err(Error::parse(
                t.pos,
                format!("`{name}` expects {} arguments", c.arity),
            )),
        },
        TermKind::Call(name, args) => {
            let c = sig
                .get(name)
                .ok_or_else(|| Error::parse(t.pos, format!("unknown connective `{name}`")))?;
            if !c.operational {
                return Err(Error::parse(
                    t.pos,
                    format!("`{name}` is structural-only and cannot occur in a formula"),
                ));
            }
            if args.len() != c.arity {
                return Err(Error::parse(
                    t.pos,
                    format!("`{name}` expects {} arguments, found {}", c.arity, args.len()),
                ));
            }
            let args = args
                .iter()
                .map(|a| term_to_formula(a, sig))
                .collect::<Result<Vec<_>>>()?;
            Ok(Formula::app(name, args))
        }
        TermKind::Var(name, _) => Err(Error::parse(
            t.pos,
            format!("metavariable `{name}` in a concrete term"),
        )),
        TermKind::HatTop | TermKind::CheckBot | TermKind::SApp(..) => Err(Error::parse(
            t.pos,
            "structural connective inside a formula",
        )),
    }
}

/// Converts a structure term at a position of the given sort.
pub(crate) fn term_to_structure(t: &Term, sig: &Signature, expected: Sort) -> Result<Structure> {
    let sort_err = |found: Sort| {
        Error::parse(
            t.pos,
            format!("sort error: {found}-structure where a {expected}-structure is required"),
        )
    };
    match &t.kind {
        TermKind::HatTop => {
            if expected != Sort::F {
                return Err(sort_err(Sort::F));
            }
            Ok(Structure::HatTop)
        }
        TermKind::CheckBot => {
            if expected != Sort::G {
                return Err(sort_err(Sort::G));
            }
            Ok(Structure::CheckBot)
        }
        TermKind::SApp(name, sort, args) => {
            let c = sig
                .get(name)
                .ok_or_else(|| Error::parse(t.pos, format!("unknown connective `{name}`")))?;
            if c.family != *sort {
                return Err(Error::parse(
                    t.pos,
                    format!(
                        "sort error: `{name}` is a {}-connective, `{}` flavor is illegal",
                        c.family,
                        flavor_prefix(*sort)
                    ),
                ));
            }
            if *sort != expected {
                return Err(sort_err(*sort));
            }
            if args.len() != c.arity {
                return Err(Error::parse(
                    t.pos,
                    format!("`{name}` expects {} arguments, found {}", c.arity, args.len()),
                ));
            }
            let args = args
                .iter()
                .enumerate()
                .map(|(i, a)| term_to_structure(a, sig, c.arg_sort(i)))
                .collect::<Result<Vec<_>>>()?;
            Ok(Structure::App {
                conn: name.clone(),
                sort: *sort,
                args,
            })
        }
        _ => Ok(Structure::Leaf(term_to_formula(t, sig)?)),
    }
}

pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula> {
    let mut p = Parser::new(text)?;
    let t = p.formula()?;
    p.finish()?;
    term_to_formula(&t, sig)
}

pub fn parse_structure(text: &str, sig: &Signature, sort: Sort) -> Result<Structure> {
    let mut p = Parser::new(text)?;
    let t = p.structure()?;
    p.finish()?;
    term_to_structure(&t, sig, sort)
}

pub fn parse_sequent(text: &str, sig: &Signature) -> Result<Sequent> {
    let (a, s) = Parser::new(text)?.sequent()?;
    Ok(Sequent::new(
        term_to_structure(&a, sig, Sort::F)?,
        term_to_structure(&s, sig, Sort::G)?,
    ))
}
