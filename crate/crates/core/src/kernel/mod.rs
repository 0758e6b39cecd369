//! Simply typed λ-calculus over the base types `o`, `i` and `u`.
//!
//! Terms use a locally nameless encoding: bound variables are de Bruijn
//! indices, free variables are named. Binders keep a name hint that is only
//! consulted when printing, so `==` on terms is alpha-equivalence.

mod print;
mod reduce;

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

pub use print::fresh_name;
pub(crate) use reduce::shift;
pub use reduce::{
    beta_normalize, contract_nth, eta_contract, normalize, normalize_by_steps, redex_count, step,
};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Type {
    /// Booleans.
    O,
    /// Worlds.
    I,
    /// Individuals.
    U,
    Arrow(Box<Type>, Box<Type>),
}

impl Type {
    pub fn fun(domain: Type, codomain: Type) -> Type {
        Type::Arrow(Box::new(domain), Box::new(codomain))
    }

    /// `i → o`, the type of world predicates (embedded formulas).
    pub fn prop() -> Type {
        Type::fun(Type::I, Type::O)
    }

    /// `a₁ → … → aₙ → result`.
    pub fn curried(args: impl IntoIterator<Item = Type>, result: Type) -> Type {
        let args: Vec<Type> = args.into_iter().collect();
        args.into_iter()
            .rev()
            .fold(result, |acc, arg| Type::fun(arg, acc))
    }

    pub fn is_prop(&self) -> bool {
        matches!(self, Type::Arrow(d, c) if **d == Type::I && **c == Type::O)
    }

    pub fn split(&self) -> Option<(&Type, &Type)> {
        match self {
            Type::Arrow(d, c) => Some((d, c)),
            _ => None,
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::O => f.write_str("o"),
            Type::I => f.write_str("i"),
            Type::U => f.write_str("u"),
            Type::Arrow(d, c) => {
                if d.split().is_some() {
                    write!(f, "({d}) > {c}")
                } else {
                    write!(f, "{d} > {c}")
                }
            }
        }
    }
}

/// A typed free variable. Two variables are the same iff name and type agree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Var {
    pub name: String,
    pub ty: Type,
}

impl Var {
    pub fn new(name: impl Into<String>, ty: Type) -> Self {
        Var {
            name: name.into(),
            ty,
        }
    }
}

/// Constants: the logical ones with fixed denotations, plus named constants
/// whose denotation comes from an interpretation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Constant {
    Not,
    Or,
    /// Abbreviation for `λA.λB.¬(¬A ∨ ¬B)`.
    And,
    /// Abbreviation for `λA.λB.¬A ∨ B`.
    Imp,
    True,
    False,
    /// `Π` at the given quantified type, of type `(α → o) → o`.
    Pi(Type),
    Named { name: String, ty: Type },
}

impl Constant {
    pub fn ty(&self) -> Type {
        let o = || Type::O;
        match self {
            Constant::Not => Type::fun(o(), o()),
            Constant::Or | Constant::And | Constant::Imp => Type::curried([o(), o()], o()),
            Constant::True | Constant::False => o(),
            Constant::Pi(alpha) => Type::fun(Type::fun(alpha.clone(), o()), o()),
            Constant::Named { ty, .. } => ty.clone(),
        }
    }
}

/// Binder annotation: the bound variable's type and a printing hint.
#[derive(Clone, Debug)]
pub struct Binder {
    pub hint: String,
    pub ty: Type,
}

#[derive(Clone, Debug)]
pub enum Term {
    Const(Constant),
    Free(Var),
    /// De Bruijn index; `0` refers to the innermost enclosing binder.
    Bound(usize),
    Lam(Binder, Box<Term>),
    App(Box<Term>, Box<Term>),
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Term::Const(a), Term::Const(b)) => a == b,
            (Term::Free(a), Term::Free(b)) => a == b,
            (Term::Bound(a), Term::Bound(b)) => a == b,
            (Term::Lam(a, x), Term::Lam(b, y)) => a.ty == b.ty && x == y,
            (Term::App(f, a), Term::App(g, b)) => f == g && a == b,
            _ => false,
        }
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        std::mem::discriminant(self).hash(state);
        match self {
            Term::Const(c) => c.hash(state),
            Term::Free(v) => v.hash(state),
            Term::Bound(i) => i.hash(state),
            Term::Lam(b, body) => {
                b.ty.hash(state);
                body.hash(state);
            }
            Term::App(f, a) => {
                f.hash(state);
                a.hash(state);
            }
        }
    }
}

/// Alpha-equivalence. Equal to `a == b` since binder names are not stored
/// structurally.
pub fn alpha_equal(a: &Term, b: &Term) -> bool {
    a == b
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("cannot apply a term of non-function type {0}")]
    NotAFunction(Type),
    #[error("argument has type {found} but the function expects {expected}")]
    ArgumentMismatch { expected: Type, found: Type },
    #[error("bound index {0} escapes every binder")]
    LooseBound(usize),
    #[error("cannot substitute a term of type {found} for `{var}` of type {expected}")]
    SubstitutionType {
        var: String,
        expected: Type,
        found: Type,
    },
}

impl Term {
    pub fn var(name: impl Into<String>, ty: Type) -> Term {
        Term::Free(Var::new(name, ty))
    }

    pub fn constant(name: impl Into<String>, ty: Type) -> Term {
        Term::Const(Constant::Named {
            name: name.into(),
            ty,
        })
    }

    pub fn app(f: Term, arg: Term) -> Term {
        Term::App(Box::new(f), Box::new(arg))
    }

    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    /// `λx. body`, binding every free occurrence of `x` in `body`.
    pub fn lam(x: &Var, body: Term) -> Term {
        Term::Lam(
            Binder {
                hint: x.name.clone(),
                ty: x.ty.clone(),
            },
            Box::new(abstract_var(&body, x, 0)),
        )
    }

    /// Nested abstraction, outermost binder first.
    pub fn lams(vars: &[Var], body: Term) -> Term {
        vars.iter().rev().fold(body, |acc, v| Term::lam(v, acc))
    }

    /// `∀x. body`, stored as `Π (λx. body)`.
    pub fn forall(x: &Var, body: Term) -> Term {
        Term::app(Term::Const(Constant::Pi(x.ty.clone())), Term::lam(x, body))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(body: Term) -> Term {
        Term::app(Term::Const(Constant::Not), body)
    }

    pub fn or(left: Term, right: Term) -> Term {
        Term::apps(Term::Const(Constant::Or), [left, right])
    }

    pub fn and(left: Term, right: Term) -> Term {
        Term::apps(Term::Const(Constant::And), [left, right])
    }

    pub fn imp(left: Term, right: Term) -> Term {
        Term::apps(Term::Const(Constant::Imp), [left, right])
    }

    pub fn truth() -> Term {
        Term::Const(Constant::True)
    }

    pub fn falsity() -> Term {
        Term::Const(Constant::False)
    }

    /// Head and arguments of an application spine.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut head = self;
        while let Term::App(f, a) = head {
            args.push(&**a);
            head = f;
        }
        args.reverse();
        (head, args)
    }

    /// Type of a term with no loose bound variables.
    pub fn type_of(&self) -> Result<Type, KernelError> {
        type_in(self, &mut Vec::new())
    }

    /// Type under a binder context, innermost binder last.
    pub fn type_in_context(&self, context: &[Type]) -> Result<Type, KernelError> {
        type_in(self, &mut context.to_vec())
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect(&mut |t| {
            if let Term::Free(v) = t {
                out.insert(v.clone());
            }
        });
        out
    }

    /// Names of named constants occurring in the term.
    pub fn constants(&self) -> BTreeSet<(String, Type)> {
        let mut out = BTreeSet::new();
        self.collect(&mut |t| {
            if let Term::Const(Constant::Named { name, ty }) = t {
                out.insert((name.clone(), ty.clone()));
            }
        });
        out
    }

    /// True when some bound index escapes all enclosing binders.
    pub fn has_loose_bound(&self) -> bool {
        reduce::max_loose(self, 0).is_some()
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Lam(_, b) => 1 + b.size(),
            Term::App(f, a) => 1 + f.size() + a.size(),
            _ => 1,
        }
    }

    fn collect(&self, visit: &mut impl FnMut(&Term)) {
        visit(self);
        match self {
            Term::Lam(_, b) => b.collect(visit),
            Term::App(f, a) => {
                f.collect(visit);
                a.collect(visit);
            }
            _ => {}
        }
    }

    /// Replaces named constants using `lookup`; a constant for which it
    /// returns `None` is kept.
    pub fn replace_constants(&self, lookup: &impl Fn(&str, &Type) -> Option<Term>) -> Term {
        match self {
            Term::Const(Constant::Named { name, ty }) => {
                lookup(name, ty).unwrap_or_else(|| self.clone())
            }
            Term::Lam(b, body) => Term::Lam(b.clone(), Box::new(body.replace_constants(lookup))),
            Term::App(f, a) => Term::app(f.replace_constants(lookup), a.replace_constants(lookup)),
            _ => self.clone(),
        }
    }
}

fn type_in(term: &Term, ctx: &mut Vec<Type>) -> Result<Type, KernelError> {
    match term {
        Term::Const(c) => Ok(c.ty()),
        Term::Free(v) => Ok(v.ty.clone()),
        Term::Bound(i) => ctx
            .len()
            .checked_sub(i + 1)
            .map(|pos| ctx[pos].clone())
            .ok_or(KernelError::LooseBound(*i)),
        Term::Lam(b, body) => {
            ctx.push(b.ty.clone());
            let body_ty = type_in(body, ctx);
            ctx.pop();
            Ok(Type::fun(b.ty.clone(), body_ty?))
        }
        Term::App(f, a) => {
            let fty = type_in(f, ctx)?;
            let aty = type_in(a, ctx)?;
            match fty {
                Type::Arrow(d, c) if *d == aty => Ok(*c),
                Type::Arrow(d, _) => Err(KernelError::ArgumentMismatch {
                    expected: *d,
                    found: aty,
                }),
                other => Err(KernelError::NotAFunction(other)),
            }
        }
    }
}

fn abstract_var(term: &Term, x: &Var, depth: usize) -> Term {
    match term {
        Term::Free(v) if v == x => Term::Bound(depth),
        Term::Lam(b, body) => Term::Lam(b.clone(), Box::new(abstract_var(body, x, depth + 1))),
        Term::App(f, a) => Term::app(abstract_var(f, x, depth), abstract_var(a, x, depth)),
        _ => term.clone(),
    }
}

/// Capture-avoiding substitution `[replacement/var] term`.
///
/// Bound variables are indices, so no renaming is needed here; printing
/// picks fresh names where a binder hint would clash.
pub fn substitute(term: &Term, var: &Var, replacement: &Term) -> Result<Term, KernelError> {
    let found = replacement.type_of()?;
    if found != var.ty {
        return Err(KernelError::SubstitutionType {
            var: var.name.clone(),
            expected: var.ty.clone(),
            found,
        });
    }
    Ok(replace_free(term, var, replacement, 0))
}

fn replace_free(term: &Term, var: &Var, replacement: &Term, depth: usize) -> Term {
    match term {
        Term::Free(v) if v == var => reduce::shift(replacement, depth as isize, 0),
        Term::Lam(b, body) => Term::Lam(
            b.clone(),
            Box::new(replace_free(body, var, replacement, depth + 1)),
        ),
        Term::App(f, a) => Term::app(
            replace_free(f, var, replacement, depth),
            replace_free(a, var, replacement, depth),
        ),
        _ => term.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Term {
        Term::constant("p", Type::prop())
    }

    #[test]
    fn typing_examples() {
        let x = Var::new("X", Type::I);
        let a = Term::var("A", Type::prop());
        let t = Term::lam(&x, Term::not(Term::app(a, Term::Free(x.clone()))));
        assert_eq!(t.type_of().unwrap(), Type::prop());

        assert_eq!(Term::app(p(), Term::var("w", Type::I)).type_of().unwrap(), Type::O);

        let err = Term::app(p(), Term::var("w", Type::U)).type_of().unwrap_err();
        assert_eq!(
            err,
            KernelError::ArgumentMismatch {
                expected: Type::I,
                found: Type::U
            }
        );
        assert!(matches!(
            Term::app(Term::truth(), Term::truth()).type_of(),
            Err(KernelError::NotAFunction(Type::O))
        ));
        assert_eq!(Term::Bound(0).type_of(), Err(KernelError::LooseBound(0)));
    }

    #[test]
    fn substitution_examples() {
        let x = Var::new("X", Type::I);
        let w = Term::var("w", Type::I);
        assert_eq!(substitute(&Term::Free(x.clone()), &x, &w).unwrap(), w);

        let ident = Term::lam(&x, Term::Free(x.clone()));
        assert_eq!(substitute(&ident, &x, &w).unwrap(), ident);

        let y = Var::new("Y", Type::I);
        let f = Term::constant("f", Type::fun(Type::I, Type::O));
        let body = Term::lam(&y, Term::app(f.clone(), Term::Free(x.clone())));
        let out = substitute(&body, &x, &Term::Free(y.clone())).unwrap();
        // The substituted `Y` stays free; the binder is renamed on display.
        assert!(out.free_vars().contains(&y));
        assert_eq!(out.to_string(), "λY1:i. (f Y)");

        let err = substitute(&body, &x, &Term::var("d", Type::U)).unwrap_err();
        assert!(matches!(err, KernelError::SubstitutionType { .. }));
    }

    #[test]
    fn alpha_equality() {
        let x = Var::new("X", Type::I);
        let y = Var::new("Y", Type::I);
        let id_x = Term::lam(&x, Term::Free(x.clone()));
        let id_y = Term::lam(&y, Term::Free(y.clone()));
        assert!(alpha_equal(&id_x, &id_y));

        let k1 = Term::lam(&x, Term::lam(&y, Term::Free(x.clone())));
        let k2 = Term::lam(&y, Term::lam(&x, Term::Free(x.clone())));
        assert!(!alpha_equal(&k1, &k2));
    }

    #[test]
    fn binder_types_matter_for_equality() {
        let xi = Var::new("X", Type::I);
        let xu = Var::new("X", Type::U);
        let a = Term::lam(&xi, Term::truth());
        let b = Term::lam(&xu, Term::truth());
        assert_ne!(a, b);
    }

    #[test]
    fn curried_types_print_right_associated() {
        let f = Type::curried([Type::I, Type::prop()], Type::prop());
        assert_eq!(f.to_string(), "i > (i > o) > i > o");
    }
}
