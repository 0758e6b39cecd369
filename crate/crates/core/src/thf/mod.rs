//! TPTP THF0 output: the axiom file defining the lifted connectives and one
//! problem file per formula.

mod check;
mod render;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use check::{check_document, tokens, CheckSummary};
pub use render::{render, render_type, Mode};

use crate::embedding::{embed, predicate_type, selection_type, Combinator, EmbedError, EmbeddingEnv, SELECTION};
use crate::kernel::{fresh_name, substitute, KernelError, Term, Type, Var};
use crate::syntax::{free_vars, Formula, Signature};

/// File name problems include for the connective definitions.
pub const AXIOM_FILE: &str = "CK_axioms.ax";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ThfError {
    #[error("term outside the combinator fragment: {0}")]
    OutsideFragment(String),
    #[error(transparent)]
    IllTyped(#[from] KernelError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error("symbol `{0}` is not declared")]
    UndeclaredSymbol(String),
    #[error("declaration name `{0}` is used twice")]
    DuplicateName(String),
    #[error("`{0}` is not a THF0 lower-case word")]
    BadName(String),
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("cannot resolve include '{0}'")]
    MissingInclude(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Type,
    Definition,
    Conjecture,
    Axiom,
}

impl Role {
    pub fn keyword(self) -> &'static str {
        match self {
            Role::Type => "type",
            Role::Definition => "definition",
            Role::Conjecture => "conjecture",
            Role::Axiom => "axiom",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Role> {
        [Role::Type, Role::Definition, Role::Conjecture, Role::Axiom]
            .into_iter()
            .find(|r| r.keyword() == word)
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// One `thf(name,role,…).` entry. For a type declaration `body` is
/// `symbol: type`; otherwise it is the formula text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Declaration {
    pub name: String,
    pub role: Role,
    pub body: String,
}

impl Declaration {
    fn text(&self) -> String {
        match self.role {
            Role::Type => format!("thf({},type,(\n    {} )).\n", self.name, self.body),
            role => format!("thf({},{role},\n    {}).\n", self.name, self.body),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThfDocument {
    includes: Vec<String>,
    declarations: Vec<Declaration>,
    rendered: String,
}

impl ThfDocument {
    pub fn new(includes: Vec<String>, declarations: Vec<Declaration>) -> Result<Self, ThfError> {
        let mut names = BTreeSet::new();
        for d in &declarations {
            if !is_lower_word(&d.name) {
                return Err(ThfError::BadName(d.name.clone()));
            }
            if !names.insert(d.name.as_str()) {
                return Err(ThfError::DuplicateName(d.name.clone()));
            }
        }
        let mut blocks: Vec<String> = Vec::new();
        if !includes.is_empty() {
            blocks.push(includes.iter().map(|i| format!("include('{i}').\n")).collect());
        }
        blocks.extend(declarations.iter().map(Declaration::text));
        Ok(ThfDocument {
            rendered: blocks.join("\n"),
            includes,
            declarations,
        })
    }

    pub fn includes(&self) -> &[String] {
        &self.includes
    }

    pub fn declarations(&self) -> &[Declaration] {
        &self.declarations
    }

    pub fn text(&self) -> &str {
        &self.rendered
    }

    /// Runs the well-formedness checker, resolving the axiom file include to
    /// [`emit_axioms`].
    pub fn check(&self) -> Result<CheckSummary, ThfError> {
        check_document(&self.rendered, &|file| {
            (file == AXIOM_FILE).then(|| emit_axioms().rendered)
        })
    }
}

impl fmt::Display for ThfDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.rendered)
    }
}

pub(crate) fn is_lower_word(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn type_declaration(name: String, symbol: &str, ty: &Type) -> Declaration {
    Declaration {
        name,
        role: Role::Type,
        body: format!("{symbol}: {}", render_type(ty)),
    }
}

/// The axiom file: `f` and every combinator with its definition.
pub fn emit_axioms() -> ThfDocument {
    let mut declarations = vec![type_declaration(format!("{SELECTION}_type"), SELECTION, &selection_type())];
    for c in Combinator::ALL {
        declarations.push(type_declaration(format!("{}_type", c.name()), c.name(), &c.ty()));
        // The quantifier definitions carry the bare symbol as their name.
        let name = match c {
            Combinator::ForallInd | Combinator::ForallProp | Combinator::ExistsInd | Combinator::ExistsProp => {
                c.name().to_owned()
            }
            _ => format!("{}_def", c.name()),
        };
        let lambda = render::render_at(&c.definition(), Mode::Kernel, 8)
            .expect("combinator definitions are closed and well typed");
        declarations.push(Declaration {
            name,
            role: Role::Definition,
            body: format!("( {}\n    = ( {lambda} ) )", c.name()),
        });
    }
    ThfDocument::new(Vec::new(), declarations).expect("axiom names are distinct")
}

/// A problem file whose conjecture is `valid @ ⌊φ⌋` in combinator form.
///
/// Free variables of `φ` and of the signature become declared constants,
/// renamed to lower case where needed.
pub fn emit_problem(formula: &Formula, name: &str, sig: &Signature) -> Result<ThfDocument, ThfError> {
    if !is_lower_word(name) {
        return Err(ThfError::BadName(name.to_owned()));
    }
    for (pred, _) in formula.predicates() {
        if sig.arity(&pred).is_none() {
            return Err(ThfError::UndeclaredSymbol(pred));
        }
    }
    let mut term = embed(formula, &EmbeddingEnv::new(sig))?;

    let free = free_vars(formula);
    let props: BTreeSet<&String> = free.props.iter().chain(sig.free_props()).collect();
    let individuals: BTreeSet<&String> = free.individuals.iter().chain(sig.free_individuals()).collect();

    let mut used: BTreeSet<String> = Combinator::ALL.iter().map(|c| c.name().to_owned()).collect();
    used.insert(SELECTION.to_owned());
    used.insert(name.to_owned());
    used.extend(sig.predicates().map(|(p, _)| p.to_owned()));
    // Names already in THF form keep their spelling; the rest are renamed after.
    let vars: Vec<Var> = props
        .iter()
        .map(|p| Var::new(p.as_str(), Type::prop()))
        .chain(individuals.iter().map(|x| Var::new(x.as_str(), Type::U)))
        .collect();
    used.extend(vars.iter().filter(|v| is_lower_word(&v.name)).map(|v| v.name.clone()));

    let mut symbols: Vec<(String, Type)> = Vec::new();
    for var in &vars {
        let symbol = if is_lower_word(&var.name) && !symbols.iter().any(|(s, _)| *s == var.name) {
            var.name.clone()
        } else {
            let hint = lower_hint(&var.name);
            let fresh = fresh_name(&hint, &used);
            used.insert(fresh.clone());
            fresh
        };
        term = substitute(&term, var, &Term::constant(symbol.as_str(), var.ty.clone()))?;
        symbols.push((symbol, var.ty.clone()));
    }
    symbols.extend(sig.predicates().map(|(p, n)| (p.to_owned(), predicate_type(n))));

    let mut declarations: Vec<Declaration> = symbols
        .iter()
        .map(|(symbol, ty)| type_declaration(symbol.clone(), symbol, ty))
        .collect();
    let conjecture = Term::app(Combinator::Valid.constant(), term);
    declarations.push(Declaration {
        name: name.to_owned(),
        role: Role::Conjecture,
        body: render::render_at(&conjecture, Mode::Combinator, 4)?,
    });
    ThfDocument::new(vec![AXIOM_FILE.to_owned()], declarations)
}

fn lower_hint(name: &str) -> String {
    let lower: String = name.to_ascii_lowercase();
    if is_lower_word(&lower) {
        lower
    } else {
        format!("v{lower}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_qcl;

    #[test]
    fn axiom_file_counts() {
        let doc = emit_axioms();
        let count = |role| doc.declarations().iter().filter(|d| d.role == role).count();
        assert_eq!(count(Role::Type), 15);
        assert_eq!(count(Role::Definition), 14);
        assert!(doc.includes().is_empty());
        assert_eq!(doc.text(), emit_axioms().text());
        doc.check().unwrap();
    }

    #[test]
    fn smallest_problem() {
        let f = parse_qcl("p", &Signature::new()).unwrap();
        let doc = emit_problem(&f, "small", &Signature::new()).unwrap();
        assert_eq!(
            doc.text(),
            "include('CK_axioms.ax').\n\nthf(p,type,(\n    p: $i > $o )).\n\nthf(small,conjecture,\n    ( valid @ p )).\n"
        );
        doc.check().unwrap();
    }

    #[test]
    fn free_variables_become_constants() {
        let sig = Signature::new().with_predicate("k", 2).unwrap();
        let f = parse_qcl("(P => k(X, x)) | forall Y. k(Y, Y)", &sig).unwrap();
        let doc = emit_problem(&f, "mixed", &sig).unwrap();
        let bodies: Vec<&str> = doc.declarations().iter().map(|d| d.body.as_str()).collect();
        assert_eq!(bodies[..4], ["p: $i > $o", "x1: mu", "x: mu", "k: mu > mu > $i > $o"]);
        assert!(doc.text().contains("^ [Y: mu]"));
        doc.check().unwrap();
    }

    #[test]
    fn undeclared_predicate_and_bad_names() {
        let f = parse_qcl("q(X)", &Signature::new().with_predicate("q", 1).unwrap()).unwrap();
        assert_eq!(
            emit_problem(&f, "t", &Signature::new()),
            Err(ThfError::UndeclaredSymbol("q".into()))
        );
        let p = parse_qcl("p", &Signature::new()).unwrap();
        assert_eq!(emit_problem(&p, "Bad", &Signature::new()), Err(ThfError::BadName("Bad".into())));
        assert!(matches!(emit_problem(&p, "p", &Signature::new()), Err(ThfError::DuplicateName(_))));
    }
}
