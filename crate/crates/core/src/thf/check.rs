//! A checker for the THF0 subset this crate writes: declarations before
//! use, bound variables, connective arities and simple types.

use std::collections::{BTreeMap, BTreeSet};

use super::{is_lower_word, Role, ThfError};
use crate::kernel::Type;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Token {
    text: String,
    line: usize,
}

const SYMBOLS: [&str; 20] = [
    "<=>", "=>", "<=", "<~>", "~|", "~&", "!!", "??", "(", ")", "[", "]", ",", ":", ".", "@", "^", "!", "?", "~",
];
const SINGLE: [char; 5] = ['|', '&', '=', '>', '*'];

fn lex(text: &str) -> Result<Vec<Token>, ThfError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut rest = text;
    let malformed = |line, message: String| ThfError::Malformed { line, message };
    while let Some(c) = rest.chars().next() {
        if c == '\n' {
            line += 1;
            rest = &rest[1..];
        } else if c.is_whitespace() {
            rest = &rest[c.len_utf8()..];
        } else if c == '%' {
            rest = rest.find('\n').map_or("", |i| &rest[i..]);
        } else if c == '\'' {
            let end = rest[1..].find('\'').ok_or_else(|| malformed(line, "unterminated quote".into()))?;
            out.push(Token { text: rest[..end + 2].to_owned(), line });
            rest = &rest[end + 2..];
        } else if c.is_ascii_alphanumeric() || c == '_' || c == '$' {
            let end = rest[1..]
                .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                .map_or(rest.len(), |i| i + 1);
            out.push(Token { text: rest[..end].to_owned(), line });
            rest = &rest[end..];
        } else if let Some(sym) = SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            out.push(Token { text: (*sym).to_owned(), line });
            rest = &rest[sym.len()..];
        } else if SINGLE.contains(&c) {
            out.push(Token { text: c.to_string(), line });
            rest = &rest[1..];
        } else {
            return Err(malformed(line, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

/// The token stream of a THF0 text, without layout or comments.
pub fn tokens(text: &str) -> Result<Vec<String>, ThfError> {
    Ok(lex(text)?.into_iter().map(|t| t.text).collect())
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckSummary {
    pub includes: usize,
    pub types: usize,
    pub definitions: usize,
    pub conjectures: usize,
    pub axioms: usize,
}

#[derive(Clone, Debug)]
enum Expr {
    Symbol(String),
    Var(String),
    Bool,
    /// A connective used as a term, like `(~)`.
    Connective(String),
    Not(Box<Expr>),
    Binary(String, Box<Expr>, Box<Expr>),
    Apply(Box<Expr>, Vec<Expr>),
    Lambda(Vec<(String, Type)>, Box<Expr>),
    Quantified(Vec<(String, Type)>, Box<Expr>),
}

const BINARY: [&str; 9] = ["|", "&", "=>", "<=", "<=>", "<~>", "~|", "~&", "="];

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
}

impl Parser<'_> {
    fn line(&self) -> usize {
        self.tokens
            .get(self.pos)
            .or(self.tokens.last())
            .map_or(1, |t| t.line)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ThfError> {
        Err(ThfError::Malformed {
            line: self.line(),
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<&str> {
        self.tokens.get(self.pos).map(|t| t.text.as_str())
    }

    fn peek_at(&self, offset: usize) -> Option<&str> {
        self.tokens.get(self.pos + offset).map(|t| t.text.as_str())
    }

    fn next(&mut self) -> Result<String, ThfError> {
        match self.tokens.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.text.clone())
            }
            None => self.error("unexpected end of input"),
        }
    }

    fn expect(&mut self, want: &str) -> Result<(), ThfError> {
        match self.peek() {
            Some(t) if t == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => {
                let t = t.to_owned();
                self.error(format!("expected `{want}`, found `{t}`"))
            }
            None => self.error(format!("expected `{want}` at end of input")),
        }
    }

    fn lower_word(&mut self) -> Result<String, ThfError> {
        let word = self.next()?;
        if is_lower_word(&word) {
            Ok(word)
        } else {
            self.pos -= 1;
            self.error(format!("expected a lower-case word, found `{word}`"))
        }
    }

    fn ty(&mut self) -> Result<Type, ThfError> {
        let domain = match self.next()?.as_str() {
            "$i" => Type::I,
            "$o" => Type::O,
            "mu" => Type::U,
            "(" => {
                let inner = self.ty()?;
                self.expect(")")?;
                inner
            }
            other => {
                let other = other.to_owned();
                self.pos -= 1;
                return self.error(format!("unknown type `{other}`"));
            }
        };
        if self.peek() == Some(">") {
            self.pos += 1;
            Ok(Type::fun(domain, self.ty()?))
        } else {
            Ok(domain)
        }
    }

    fn binders(&mut self) -> Result<Vec<(String, Type)>, ThfError> {
        self.expect("[")?;
        let mut out = Vec::new();
        loop {
            let name = self.next()?;
            if !name.starts_with(|c: char| c.is_ascii_uppercase()) {
                self.pos -= 1;
                return self.error(format!("`{name}` is not a variable"));
            }
            self.expect(":")?;
            out.push((name, self.ty()?));
            match self.next()?.as_str() {
                "," => continue,
                "]" => break,
                other => {
                    let other = other.to_owned();
                    self.pos -= 1;
                    return self.error(format!("expected `,` or `]`, found `{other}`"));
                }
            }
        }
        self.expect(":")?;
        Ok(out)
    }

    fn unitary(&mut self) -> Result<Expr, ThfError> {
        let token = self.next()?;
        match token.as_str() {
            "(" => {
                if let (Some(op), Some(")")) = (self.peek(), self.peek_at(1)) {
                    if op == "~" || BINARY.contains(&op) {
                        let op = op.to_owned();
                        self.pos += 2;
                        return Ok(Expr::Connective(op));
                    }
                }
                let first = self.unitary()?;
                let expr = match self.peek() {
                    Some("@") => {
                        let mut args = Vec::new();
                        while self.peek() == Some("@") {
                            self.pos += 1;
                            args.push(self.unitary()?);
                        }
                        Expr::Apply(Box::new(first), args)
                    }
                    Some(op) if BINARY.contains(&op) => {
                        let op = op.to_owned();
                        self.pos += 1;
                        let second = self.unitary()?;
                        if self.peek().is_some_and(|t| BINARY.contains(&t) || t == "@") {
                            return self.error("connectives must be parenthesized");
                        }
                        Expr::Binary(op, Box::new(first), Box::new(second))
                    }
                    _ => first,
                };
                self.expect(")")?;
                Ok(expr)
            }
            "~" => Ok(Expr::Not(Box::new(self.unitary()?))),
            "^" | "!" | "?" => {
                let binders = self.binders()?;
                let body = Box::new(self.unitary()?);
                Ok(match token.as_str() {
                    "^" => Expr::Lambda(binders, body),
                    _ => Expr::Quantified(binders, body),
                })
            }
            "$true" | "$false" => Ok(Expr::Bool),
            "!!" | "??" => Ok(Expr::Connective(token)),
            _ if is_lower_word(&token) => Ok(Expr::Symbol(token)),
            _ if token.starts_with(|c: char| c.is_ascii_uppercase()) => Ok(Expr::Var(token)),
            _ => {
                self.pos -= 1;
                self.error(format!("unexpected `{token}`"))
            }
        }
    }
}

struct Checker {
    symbols: BTreeMap<String, Type>,
    defined: BTreeSet<String>,
    summary: CheckSummary,
}

impl Checker {
    fn type_of(&self, expr: &Expr, scope: &mut Vec<(String, Type)>, line: usize) -> Result<Type, ThfError> {
        let bad = |message: String| ThfError::Malformed { line, message };
        let prop = Type::fun(Type::O, Type::O);
        Ok(match expr {
            Expr::Symbol(s) => self
                .symbols
                .get(s)
                .cloned()
                .ok_or_else(|| ThfError::UndeclaredSymbol(s.clone()))?,
            Expr::Var(v) => scope
                .iter()
                .rev()
                .find(|(name, _)| name == v)
                .map(|(_, ty)| ty.clone())
                .ok_or_else(|| bad(format!("variable `{v}` is not bound")))?,
            Expr::Bool => Type::O,
            Expr::Connective(op) => match op.as_str() {
                "~" => prop,
                "!!" | "??" => return Err(bad(format!("`{op}` needs a type annotation this checker lacks"))),
                "=" => return Err(bad("`(=)` is polymorphic".into())),
                _ => Type::curried([Type::O, Type::O], Type::O),
            },
            Expr::Not(a) => {
                self.expect(a, &Type::O, scope, line)?;
                Type::O
            }
            Expr::Binary(op, l, r) => {
                if op == "=" {
                    let ty = self.type_of(l, scope, line)?;
                    self.expect(r, &ty, scope, line)?;
                } else {
                    self.expect(l, &Type::O, scope, line)?;
                    self.expect(r, &Type::O, scope, line)?;
                }
                Type::O
            }
            Expr::Apply(head, args) => {
                let mut ty = self.type_of(head, scope, line)?;
                for arg in args {
                    let Type::Arrow(domain, codomain) = ty else {
                        return Err(bad(format!("too many arguments for a term of type {}", super::render_type(&ty))));
                    };
                    self.expect(arg, &domain, scope, line)?;
                    ty = *codomain;
                }
                ty
            }
            Expr::Lambda(binders, body) => {
                let depth = scope.len();
                scope.extend(binders.iter().cloned());
                let body = self.type_of(body, scope, line);
                scope.truncate(depth);
                binders.iter().rev().fold(body?, |acc, (_, ty)| Type::fun(ty.clone(), acc))
            }
            Expr::Quantified(binders, body) => {
                let depth = scope.len();
                scope.extend(binders.iter().cloned());
                let body = self.expect(body, &Type::O, scope, line);
                scope.truncate(depth);
                body?;
                Type::O
            }
        })
    }

    fn expect(&self, expr: &Expr, want: &Type, scope: &mut Vec<(String, Type)>, line: usize) -> Result<(), ThfError> {
        let found = self.type_of(expr, scope, line)?;
        if found == *want {
            Ok(())
        } else {
            Err(ThfError::Malformed {
                line,
                message: format!(
                    "expected type {}, found {}",
                    super::render_type(want),
                    super::render_type(&found)
                ),
            })
        }
    }

    fn document(
        &mut self,
        text: &str,
        resolve: &dyn Fn(&str) -> Option<String>,
        open: &mut Vec<String>,
    ) -> Result<(), ThfError> {
        let tokens = lex(text)?;
        let mut p = Parser { tokens: &tokens, pos: 0 };
        let mut names = BTreeSet::new();
        while let Some(head) = p.peek() {
            match head {
                "include" => {
                    p.pos += 1;
                    p.expect("(")?;
                    let quoted = p.next()?;
                    let Some(file) = quoted.strip_prefix('\'').and_then(|q| q.strip_suffix('\'')) else {
                        return p.error("include expects a quoted file name");
                    };
                    p.expect(")")?;
                    p.expect(".")?;
                    if open.iter().any(|f| f == file) {
                        return p.error(format!("include cycle through '{file}'"));
                    }
                    let body = resolve(file).ok_or_else(|| ThfError::MissingInclude(file.to_owned()))?;
                    open.push(file.to_owned());
                    self.document(&body, resolve, open)?;
                    open.pop();
                    self.summary.includes += 1;
                }
                "thf" => {
                    p.pos += 1;
                    self.entry(&mut p, &mut names)?;
                }
                other => {
                    let other = other.to_owned();
                    return p.error(format!("expected `thf` or `include`, found `{other}`"));
                }
            }
        }
        Ok(())
    }

    fn entry(&mut self, p: &mut Parser, names: &mut BTreeSet<String>) -> Result<(), ThfError> {
        p.expect("(")?;
        let line = p.line();
        let name = p.lower_word()?;
        if !names.insert(name.clone()) {
            return Err(ThfError::DuplicateName(name));
        }
        p.expect(",")?;
        let keyword = p.next()?;
        let Some(role) = Role::from_keyword(&keyword) else {
            p.pos -= 1;
            return p.error(format!("unsupported role `{keyword}`"));
        };
        p.expect(",")?;
        match role {
            Role::Type => {
                let parenthesized = p.peek() == Some("(");
                if parenthesized {
                    p.pos += 1;
                }
                let symbol = p.lower_word()?;
                p.expect(":")?;
                let ty = p.ty()?;
                if parenthesized {
                    p.expect(")")?;
                }
                if self.symbols.insert(symbol.clone(), ty).is_some() {
                    return Err(ThfError::DuplicateName(symbol));
                }
                self.summary.types += 1;
            }
            Role::Definition => {
                let expr = p.unitary()?;
                let Expr::Binary(op, lhs, rhs) = &expr else {
                    return Err(ThfError::Malformed { line, message: "a definition must be an equation".into() });
                };
                let Expr::Symbol(symbol) = lhs.as_ref() else {
                    return Err(ThfError::Malformed { line, message: "a definition must define a symbol".into() });
                };
                if op != "=" {
                    return Err(ThfError::Malformed { line, message: "a definition must be an equation".into() });
                }
                let ty = self
                    .symbols
                    .get(symbol)
                    .cloned()
                    .ok_or_else(|| ThfError::UndeclaredSymbol(symbol.clone()))?;
                if !self.defined.insert(symbol.clone()) {
                    return Err(ThfError::Malformed { line, message: format!("`{symbol}` is defined twice") });
                }
                self.expect(rhs, &ty, &mut Vec::new(), line)?;
                self.summary.definitions += 1;
            }
            Role::Conjecture | Role::Axiom => {
                let expr = p.unitary()?;
                self.expect(&expr, &Type::O, &mut Vec::new(), line)?;
                match role {
                    Role::Conjecture => self.summary.conjectures += 1,
                    _ => self.summary.axioms += 1,
                }
            }
        }
        p.expect(")")?;
        p.expect(".")
    }
}

/// Checks a document. `resolve` maps an include name to its text.
pub fn check_document(
    text: &str,
    resolve: &dyn Fn(&str) -> Option<String>,
) -> Result<CheckSummary, ThfError> {
    let mut checker = Checker {
        symbols: BTreeMap::new(),
        defined: BTreeSet::new(),
        summary: CheckSummary::default(),
    };
    checker.document(text, resolve, &mut Vec::new())?;
    Ok(checker.summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(text: &str) -> Result<CheckSummary, ThfError> {
        check_document(text, &|_| None)
    }

    #[test]
    fn tokens_ignore_layout_and_comments() {
        let a = tokens("thf(x,type,(\n    x: $i > $o )). % note").unwrap();
        let b = tokens("thf( x , type , ( x : $i>$o ) ) .").unwrap();
        assert_eq!(a, b);
        assert_eq!(a[9], "$i");
    }

    #[test]
    fn accepts_typed_conjecture() {
        let text = "thf(p,type,( p: $i > $o )).\nthf(c,conjecture, ! [S: $i] : ( ( p @ S ) | ~ ( p @ S ) ) ).";
        let summary = check(text).unwrap();
        assert_eq!((summary.types, summary.conjectures), (1, 1));
    }

    #[test]
    fn rejects_use_before_declaration() {
        let text = "thf(c,conjecture, ( p @ s ) ).\nthf(p,type,( p: $i > $o )).";
        assert_eq!(check(text), Err(ThfError::UndeclaredSymbol("p".into())));
    }

    #[test]
    fn rejects_bad_arity_and_unbound_variables() {
        let decl = "thf(p,type,( p: $i > $o )).\n";
        assert!(matches!(check(&format!("{decl}thf(c,conjecture, ( ( p @ X ) | ) ).")), Err(ThfError::Malformed { .. })));
        assert!(matches!(check(&format!("{decl}thf(c,conjecture, ( p @ X ) ).")), Err(ThfError::Malformed { .. })));
        assert!(matches!(check(&format!("{decl}thf(c,conjecture, ( p ) ).")), Err(ThfError::Malformed { .. })));
        assert!(matches!(check(&format!("{decl}thf(p,axiom, $true ).")), Err(ThfError::DuplicateName(_))));
    }

    #[test]
    fn missing_include_is_reported() {
        assert_eq!(check("include('x.ax')."), Err(ThfError::MissingInclude("x.ax".into())));
    }
}
