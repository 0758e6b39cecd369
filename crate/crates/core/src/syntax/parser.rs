//! Recursive-descent parser for the surface syntax.
//!
//! ```text
//! iff    ::= imp ( "<->" imp )?
//! imp    ::= cond ( "->" imp )?
//! cond   ::= or ( "=>" or )?
//! or     ::= and ( "|" and )*
//! and    ::= unary ( "&" unary )*
//! unary  ::= "~" unary | binder IDENT "." iff | primary
//! binder ::= "forall" | "exists" | "forallp" | "existsp"
//! primary::= "(" iff ")" | "true" | "false" | IDENT ( "(" IDENT ( "," IDENT )* ")" )?
//! ```
//!
//! Binder bodies extend as far to the right as possible. An identifier in
//! formula position is a propositional variable unless the signature
//! declares it as a nullary predicate; identifiers in argument position are
//! individual variables.

use std::borrow::Cow;
use std::fmt;

use thiserror::Error;

use super::formula::{Formula, Signature, SignatureError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Position {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("expected {expected}, found {found}")]
    UnexpectedToken { expected: String, found: String },
    #[error("predicate `{0}` is not declared in the signature")]
    UndeclaredPredicate(String),
    #[error("predicate `{pred}` has arity {expected} but is used with {found} argument(s)")]
    ArityMismatch {
        pred: String,
        expected: usize,
        found: usize,
    },
    #[error("variable `{0}` is neither bound nor registered as free")]
    UnboundVariable(String),
    #[error(transparent)]
    Signature(SignatureError),
    #[error("`{0}` is non-associative; add parentheses")]
    NonAssociative(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{position}: {kind}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub position: Position,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Reject free variables the signature does not register.
    pub strict: bool,
    /// Declare unknown predicates with the arity of their first use.
    pub infer_predicates: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Tilde,
    Bar,
    Amp,
    Arrow,
    DoubleArrow,
    Cond,
    LParen,
    RParen,
    Comma,
    Dot,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Tilde => f.write_str("`~`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Amp => f.write_str("`&`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::DoubleArrow => f.write_str("`<->`"),
            Tok::Cond => f.write_str("`=>`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Position)>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut column = 1;
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (offset, c) = chars[i];
        let pos = Position { offset, line, column };
        let advance = |n: usize, column: &mut usize| *column += n;
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut column);
            i += 1;
            continue;
        }
        let rest = &text[offset..];
        let (tok, len) = if rest.starts_with("<->") {
            (Tok::DoubleArrow, 3)
        } else if rest.starts_with("->") {
            (Tok::Arrow, 2)
        } else if rest.starts_with("=>") {
            (Tok::Cond, 2)
        } else {
            match c {
                '~' => (Tok::Tilde, 1),
                '|' => (Tok::Bar, 1),
                '&' => (Tok::Amp, 1),
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                ',' => (Tok::Comma, 1),
                '.' => (Tok::Dot, 1),
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let len = rest
                        .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
                        .unwrap_or(rest.len());
                    (Tok::Ident(rest[..len].to_owned()), len)
                }
                other => {
                    return Err(ParseError {
                        kind: ParseErrorKind::UnexpectedChar(other),
                        position: pos,
                    })
                }
            }
        };
        out.push((tok, pos));
        advance(len, &mut column);
        i += len;
    }
    let end = Position {
        offset: text.len(),
        line,
        column,
    };
    out.push((Tok::Eof, end));
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Individual,
    Prop,
}

struct Parser<'a> {
    tokens: Vec<(Tok, Position)>,
    pos: usize,
    sig: Cow<'a, Signature>,
    options: ParseOptions,
    scope: Vec<(String, Kind)>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].0
    }

    fn position(&self) -> Position {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let tok = self.tokens[self.pos].0.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            kind,
            position: self.position(),
        }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        self.error(ParseErrorKind::UnexpectedToken {
            expected: expected.to_owned(),
            found: self.peek().to_string(),
        })
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn ident(&mut self, expected: &str) -> Result<String, ParseError> {
        match self.peek() {
            Tok::Ident(name) if !is_keyword(name) => {
                let name = name.clone();
                self.bump();
                Ok(name)
            }
            _ => Err(self.unexpected(expected)),
        }
    }

    fn bound(&self, name: &str, kind: Kind) -> bool {
        self.scope.iter().rev().any(|(n, k)| n == name && *k == kind)
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let left = self.imp()?;
        if *self.peek() == Tok::DoubleArrow {
            self.bump();
            let right = self.imp()?;
            if *self.peek() == Tok::DoubleArrow {
                return Err(self.error(ParseErrorKind::NonAssociative("<->")));
            }
            return Ok(Formula::iff(left, right));
        }
        Ok(left)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let left = self.cond()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let right = self.imp()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn cond(&mut self) -> Result<Formula, ParseError> {
        let left = self.or()?;
        if *self.peek() == Tok::Cond {
            self.bump();
            let right = self.or()?;
            if *self.peek() == Tok::Cond {
                return Err(self.error(ParseErrorKind::NonAssociative("=>")));
            }
            return Ok(Formula::cond(left, right));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.and()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let right = self.and()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let right = self.unary()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Ident(word) if matches!(word.as_str(), "forall" | "exists" | "forallp" | "existsp") => {
                self.bump();
                let var = self.ident("a variable name")?;
                self.expect(Tok::Dot, "`.`")?;
                let kind = if word.ends_with('p') {
                    Kind::Prop
                } else {
                    Kind::Individual
                };
                self.scope.push((var.clone(), kind));
                let body = self.iff();
                self.scope.pop();
                let body = body?;
                Ok(match word.as_str() {
                    "forall" => Formula::forall_ind(var, body),
                    "exists" => Formula::exists_ind(var, body),
                    "forallp" => Formula::forall_prop(var, body),
                    _ => Formula::exists_prop(var, body),
                })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        let start = self.position();
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let inner = self.iff()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(word) if word == "true" => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::Ident(word) if word == "false" => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::Ident(name) if !is_keyword(&name) => {
                self.bump();
                if *self.peek() == Tok::LParen {
                    self.bump();
                    let mut args = Vec::new();
                    if *self.peek() != Tok::RParen {
                        loop {
                            let arg_pos = self.position();
                            let arg = self.ident("an individual variable")?;
                            if self.options.strict
                                && !self.bound(&arg, Kind::Individual)
                                && !self.sig.free_individuals().contains(&arg)
                            {
                                return Err(ParseError {
                                    kind: ParseErrorKind::UnboundVariable(arg),
                                    position: arg_pos,
                                });
                            }
                            args.push(arg);
                            if *self.peek() == Tok::Comma {
                                self.bump();
                            } else {
                                break;
                            }
                        }
                    }
                    self.expect(Tok::RParen, "`,` or `)`")?;
                    self.atom(name, args, start)
                } else if self.bound(&name, Kind::Prop) {
                    Ok(Formula::PropVar(name))
                } else if let Some(arity) = self.sig.arity(&name) {
                    if arity == 0 {
                        Ok(Formula::atom(name, Vec::<String>::new()))
                    } else {
                        Err(ParseError {
                            kind: ParseErrorKind::ArityMismatch {
                                pred: name,
                                expected: arity,
                                found: 0,
                            },
                            position: start,
                        })
                    }
                } else if self.options.strict && !self.sig.free_props().contains(&name) {
                    Err(ParseError {
                        kind: ParseErrorKind::UnboundVariable(name),
                        position: start,
                    })
                } else {
                    Ok(Formula::PropVar(name))
                }
            }
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn atom(&mut self, pred: String, args: Vec<String>, at: Position) -> Result<Formula, ParseError> {
        match self.sig.arity(&pred) {
            None if self.options.infer_predicates => {
                self.sig
                    .to_mut()
                    .declare_predicate(pred.as_str(), args.len())
                    .map_err(|e| ParseError {
                        kind: ParseErrorKind::Signature(e),
                        position: at,
                    })?;
                Ok(Formula::Atom { pred, args })
            }
            None => Err(ParseError {
                kind: ParseErrorKind::UndeclaredPredicate(pred),
                position: at,
            }),
            Some(arity) if arity != args.len() => Err(ParseError {
                kind: ParseErrorKind::ArityMismatch {
                    pred,
                    expected: arity,
                    found: args.len(),
                },
                position: at,
            }),
            Some(_) => Ok(Formula::Atom { pred, args }),
        }
    }
}

fn is_keyword(word: &str) -> bool {
    matches!(
        word,
        "forall" | "exists" | "forallp" | "existsp" | "true" | "false"
    )
}

/// Parses surface syntax, keeping sugar constructors.
pub fn parse_surface_with(
    text: &str,
    sig: &Signature,
    options: ParseOptions,
) -> Result<Formula, ParseError> {
    parse_with_signature(text, sig, options).map(|(f, _)| f)
}

/// Parses surface syntax and returns the signature extended by every
/// predicate the text introduces when `infer_predicates` is set.
pub fn parse_with_signature(
    text: &str,
    sig: &Signature,
    options: ParseOptions,
) -> Result<(Formula, Signature), ParseError> {
    let mut parser = Parser {
        tokens: lex(text)?,
        pos: 0,
        sig: Cow::Borrowed(sig),
        options,
        scope: Vec::new(),
    };
    let formula = parser.iff()?;
    if *parser.peek() != Tok::Eof {
        return Err(parser.unexpected("an operator or end of input"));
    }
    Ok((formula, parser.sig.into_owned()))
}

pub fn parse_surface(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    parse_surface_with(text, sig, ParseOptions::default())
}

/// Parses and desugars to the primitive connectives.
pub fn parse_qcl(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    parse_qcl_with(text, sig, ParseOptions::default())
}

pub fn parse_qcl_with(
    text: &str,
    sig: &Signature,
    options: ParseOptions,
) -> Result<Formula, ParseError> {
    parse_surface_with(text, sig, options).map(|f| super::desugar(&f))
}
