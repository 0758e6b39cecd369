use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// A quantified conditional logic formula.
///
/// The first seven constructors are the primitive grammar. The remaining
/// ones are surface sugar; [`desugar`](crate::syntax::desugar) removes them.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    PropVar(String),
    Atom { pred: String, args: Vec<String> },
    Not(Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    /// The conditional `φ => ψ`; the antecedent indexes the selection function.
    Cond(Box<Formula>, Box<Formula>),
    ForallInd(String, Box<Formula>),
    ForallProp(String, Box<Formula>),

    True,
    False,
    And(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    ExistsInd(String, Box<Formula>),
    ExistsProp(String, Box<Formula>),
}

impl Formula {
    pub fn prop(name: impl Into<String>) -> Self {
        Formula::PropVar(name.into())
    }

    pub fn atom<I, S>(pred: impl Into<String>, args: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Formula::Atom {
            pred: pred.into(),
            args: args.into_iter().map(Into::into).collect(),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(body: Formula) -> Self {
        Formula::Not(Box::new(body))
    }

    pub fn or(left: Formula, right: Formula) -> Self {
        Formula::Or(Box::new(left), Box::new(right))
    }

    pub fn cond(antecedent: Formula, consequent: Formula) -> Self {
        Formula::Cond(Box::new(antecedent), Box::new(consequent))
    }

    pub fn forall_ind(var: impl Into<String>, body: Formula) -> Self {
        Formula::ForallInd(var.into(), Box::new(body))
    }

    pub fn forall_prop(var: impl Into<String>, body: Formula) -> Self {
        Formula::ForallProp(var.into(), Box::new(body))
    }

    pub fn and(left: Formula, right: Formula) -> Self {
        Formula::And(Box::new(left), Box::new(right))
    }

    pub fn implies(left: Formula, right: Formula) -> Self {
        Formula::Implies(Box::new(left), Box::new(right))
    }

    pub fn iff(left: Formula, right: Formula) -> Self {
        Formula::Iff(Box::new(left), Box::new(right))
    }

    pub fn exists_ind(var: impl Into<String>, body: Formula) -> Self {
        Formula::ExistsInd(var.into(), Box::new(body))
    }

    pub fn exists_prop(var: impl Into<String>, body: Formula) -> Self {
        Formula::ExistsProp(var.into(), Box::new(body))
    }

    /// True when only the primitive constructors occur.
    pub fn is_primitive(&self) -> bool {
        match self {
            Formula::PropVar(_) | Formula::Atom { .. } => true,
            Formula::Not(b) | Formula::ForallInd(_, b) | Formula::ForallProp(_, b) => {
                b.is_primitive()
            }
            Formula::Or(l, r) | Formula::Cond(l, r) => l.is_primitive() && r.is_primitive(),
            _ => false,
        }
    }

    /// Nesting depth of connectives and quantifiers; atoms have depth zero.
    pub fn depth(&self) -> usize {
        match self {
            Formula::PropVar(_) | Formula::Atom { .. } | Formula::True | Formula::False => 0,
            Formula::Not(b)
            | Formula::ForallInd(_, b)
            | Formula::ForallProp(_, b)
            | Formula::ExistsInd(_, b)
            | Formula::ExistsProp(_, b) => 1 + b.depth(),
            Formula::Or(l, r)
            | Formula::Cond(l, r)
            | Formula::And(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::PropVar(_) | Formula::Atom { .. } | Formula::True | Formula::False => 1,
            Formula::Not(b)
            | Formula::ForallInd(_, b)
            | Formula::ForallProp(_, b)
            | Formula::ExistsInd(_, b)
            | Formula::ExistsProp(_, b) => 1 + b.size(),
            Formula::Or(l, r)
            | Formula::Cond(l, r)
            | Formula::And(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => 1 + l.size() + r.size(),
        }
    }

    /// Predicate symbols with the arity they are used at, in order of first use.
    pub fn predicates(&self) -> Vec<(String, usize)> {
        let mut out: Vec<(String, usize)> = Vec::new();
        self.visit(&mut |f| {
            if let Formula::Atom { pred, args } = f {
                if !out.iter().any(|(p, _)| p == pred) {
                    out.push((pred.clone(), args.len()));
                }
            }
        });
        out
    }

    /// Every subformula, including `self`, in pre-order.
    pub fn subformulas(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        fn go<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
            out.push(f);
            match f {
                Formula::Not(b)
                | Formula::ForallInd(_, b)
                | Formula::ForallProp(_, b)
                | Formula::ExistsInd(_, b)
                | Formula::ExistsProp(_, b) => go(b, out),
                Formula::Or(l, r)
                | Formula::Cond(l, r)
                | Formula::And(l, r)
                | Formula::Implies(l, r)
                | Formula::Iff(l, r) => {
                    go(l, out);
                    go(r, out);
                }
                _ => {}
            }
        }
        go(self, &mut out);
        out
    }

    fn visit(&self, f: &mut impl FnMut(&Formula)) {
        for sub in self.subformulas() {
            f(sub);
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::pretty_qcl(self))
    }
}

/// Free variables of a formula, split by kind.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreeVars {
    pub individuals: BTreeSet<String>,
    pub props: BTreeSet<String>,
}

impl FreeVars {
    pub fn is_empty(&self) -> bool {
        self.individuals.is_empty() && self.props.is_empty()
    }
}

/// Variables with a free occurrence in `formula`.
pub fn free_vars(formula: &Formula) -> FreeVars {
    let mut out = FreeVars::default();
    let mut ind_scope = Vec::new();
    let mut prop_scope = Vec::new();
    collect_free(formula, &mut ind_scope, &mut prop_scope, &mut out);
    out
}

fn collect_free<'a>(
    formula: &'a Formula,
    ind_scope: &mut Vec<&'a str>,
    prop_scope: &mut Vec<&'a str>,
    out: &mut FreeVars,
) {
    match formula {
        Formula::PropVar(p) => {
            if !prop_scope.contains(&p.as_str()) {
                out.props.insert(p.clone());
            }
        }
        Formula::Atom { args, .. } => {
            for x in args {
                if !ind_scope.contains(&x.as_str()) {
                    out.individuals.insert(x.clone());
                }
            }
        }
        Formula::True | Formula::False => {}
        Formula::Not(b) => collect_free(b, ind_scope, prop_scope, out),
        Formula::Or(l, r)
        | Formula::Cond(l, r)
        | Formula::And(l, r)
        | Formula::Implies(l, r)
        | Formula::Iff(l, r) => {
            collect_free(l, ind_scope, prop_scope, out);
            collect_free(r, ind_scope, prop_scope, out);
        }
        Formula::ForallInd(x, b) | Formula::ExistsInd(x, b) => {
            ind_scope.push(x);
            collect_free(b, ind_scope, prop_scope, out);
            ind_scope.pop();
        }
        Formula::ForallProp(p, b) | Formula::ExistsProp(p, b) => {
            prop_scope.push(p);
            collect_free(b, ind_scope, prop_scope, out);
            prop_scope.pop();
        }
    }
}

/// Names the THF0 encoding already uses; user symbols may not take them.
pub const RESERVED_NAMES: &[&str] = &[
    "f",
    "mu",
    "cnot",
    "cor",
    "ctrue",
    "cfalse",
    "ccond",
    "cand",
    "ccondequiv",
    "cimpl",
    "cequiv",
    "cforall_ind",
    "cforall_prop",
    "cexists_ind",
    "cexists_prop",
    "valid",
];

const KEYWORDS: &[&str] = &[
    "forall", "exists", "forallp", "existsp", "true", "false",
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SignatureError {
    #[error("`{0}` is reserved by the HOL encoding")]
    Reserved(String),
    #[error("`{0}` is a keyword of the surface syntax")]
    Keyword(String),
    #[error("`{0}` is not a valid identifier")]
    BadIdentifier(String),
    #[error("`{0}` is declared twice")]
    Duplicate(String),
    #[error("signature line {line}: {message}")]
    Syntax { line: usize, message: String },
}

/// Predicate arities plus the free variables a formula may mention.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    predicates: BTreeMap<String, usize>,
    free_individuals: BTreeSet<String>,
    free_props: BTreeSet<String>,
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    fn check_name(&self, name: &str) -> Result<(), SignatureError> {
        if !is_identifier(name) {
            return Err(SignatureError::BadIdentifier(name.to_owned()));
        }
        if KEYWORDS.contains(&name) {
            return Err(SignatureError::Keyword(name.to_owned()));
        }
        if self.predicates.contains_key(name)
            || self.free_individuals.contains(name)
            || self.free_props.contains(name)
        {
            return Err(SignatureError::Duplicate(name.to_owned()));
        }
        Ok(())
    }

    pub fn declare_predicate(
        &mut self,
        name: impl Into<String>,
        arity: usize,
    ) -> Result<&mut Self, SignatureError> {
        let name = name.into();
        self.check_name(&name)?;
        if RESERVED_NAMES.contains(&name.as_str()) {
            return Err(SignatureError::Reserved(name));
        }
        self.predicates.insert(name, arity);
        Ok(self)
    }

    pub fn declare_free_individual(
        &mut self,
        name: impl Into<String>,
    ) -> Result<&mut Self, SignatureError> {
        let name = name.into();
        self.check_name(&name)?;
        self.free_individuals.insert(name);
        Ok(self)
    }

    pub fn declare_free_prop(&mut self, name: impl Into<String>) -> Result<&mut Self, SignatureError> {
        let name = name.into();
        self.check_name(&name)?;
        self.free_props.insert(name);
        Ok(self)
    }

    /// Builder form of [`declare_predicate`](Self::declare_predicate).
    pub fn with_predicate(mut self, name: &str, arity: usize) -> Result<Self, SignatureError> {
        self.declare_predicate(name, arity)?;
        Ok(self)
    }

    pub fn arity(&self, pred: &str) -> Option<usize> {
        self.predicates.get(pred).copied()
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&str, usize)> {
        self.predicates.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn free_individuals(&self) -> &BTreeSet<String> {
        &self.free_individuals
    }

    pub fn free_props(&self) -> &BTreeSet<String> {
        &self.free_props
    }

    /// Parses the signature file format: one `pred <name> <arity>` per line.
    ///
    /// `var <name>` and `prop <name>` register free individual and
    /// propositional variables. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self, SignatureError> {
        let mut sig = Signature::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let syntax = |message: &str| SignatureError::Syntax {
                line: idx + 1,
                message: message.to_owned(),
            };
            match fields.as_slice() {
                ["pred", name, arity] => {
                    let arity: usize = arity.parse().map_err(|_| syntax("arity must be a non-negative integer"))?;
                    sig.declare_predicate(*name, arity)?;
                }
                ["var", name] => {
                    sig.declare_free_individual(*name)?;
                }
                ["prop", name] => {
                    sig.declare_free_prop(*name)?;
                }
                _ => return Err(syntax("expected `pred <name> <arity>`, `var <name>` or `prop <name>`")),
            }
        }
        Ok(sig)
    }

    /// Renders the signature in the format [`parse`](Self::parse) reads.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (name, arity) in &self.predicates {
            out.push_str(&format!("pred {name} {arity}\n"));
        }
        for name in &self.free_individuals {
            out.push_str(&format!("var {name}\n"));
        }
        for name in &self.free_props {
            out.push_str(&format!("prop {name}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_vars_examples() {
        let bound = Formula::forall_ind("X", Formula::atom("k", ["X"]));
        assert!(free_vars(&bound).is_empty());

        let single = free_vars(&Formula::atom("k", ["X"]));
        assert_eq!(single.individuals, BTreeSet::from(["X".to_owned()]));
        assert!(single.props.is_empty());

        let mixed = free_vars(&Formula::forall_ind("X", Formula::atom("k", ["X", "Y"])));
        assert_eq!(mixed.individuals, BTreeSet::from(["Y".to_owned()]));
    }

    #[test]
    fn free_vars_respects_kinds() {
        // `forallp X` does not bind the individual `X`.
        let f = Formula::forall_prop("X", Formula::or(Formula::prop("X"), Formula::atom("k", ["X"])));
        let fv = free_vars(&f);
        assert_eq!(fv.individuals, BTreeSet::from(["X".to_owned()]));
        assert!(fv.props.is_empty());
    }

    #[test]
    fn signature_rejects_reserved_and_duplicates() {
        let mut sig = Signature::new();
        assert_eq!(
            sig.declare_predicate("f", 1).unwrap_err(),
            SignatureError::Reserved("f".into())
        );
        sig.declare_predicate("b", 1).unwrap();
        assert_eq!(
            sig.declare_free_prop("b").unwrap_err(),
            SignatureError::Duplicate("b".into())
        );
        assert!(matches!(
            sig.declare_predicate("forall", 0),
            Err(SignatureError::Keyword(_))
        ));
    }

    #[test]
    fn signature_file_round_trip() {
        let text = "# demo\npred b 1\npred r 2\n\nprop a\nvar Y\n";
        let sig = Signature::parse(text).unwrap();
        assert_eq!(sig.arity("b"), Some(1));
        assert_eq!(sig.arity("r"), Some(2));
        assert!(sig.free_props().contains("a"));
        assert_eq!(Signature::parse(&sig.to_text()).unwrap(), sig);
        assert!(matches!(
            Signature::parse("pred b x"),
            Err(SignatureError::Syntax { line: 1, .. })
        ));
    }
}
