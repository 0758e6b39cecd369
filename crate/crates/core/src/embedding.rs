//! The translation of conditional logic formulas into HOL terms of type `i → o`.
//!
//! Two routes produce the same thing:
//!
//! * [`embed`] builds *combinator form*: applications of the named constants
//!   `cnot`, `cor`, `ccond`, `cforall_ind`, … exactly as a THF0 problem
//!   writes them. [`unfold`] replaces each constant by its definition from
//!   [`Combinator::definition`].
//! * [`embed_inline`] writes the λ-terms of the connectives directly into
//!   the result, using its own copies of the connective definitions.
//!
//! After βη-normalization both routes give alpha-equal terms; the kernel
//! form used for evaluation is [`embed_kernel`].

use std::collections::BTreeMap;

use thiserror::Error;

use crate::kernel::{normalize, Constant, Term, Type, Var};
use crate::syntax::{Formula, Signature};

/// Name of the selection-function constant.
pub const SELECTION: &str = "f";

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EmbedError {
    #[error("predicate `{0}` is not declared")]
    UndeclaredPredicate(String),
    #[error("predicate `{pred}` has arity {expected} but is applied to {found} argument(s)")]
    ArityMismatch {
        pred: String,
        expected: usize,
        found: usize,
    },
}

/// The lifted connectives of the THF0 encoding, in declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Combinator {
    Not,
    Or,
    True,
    False,
    Cond,
    And,
    CondEquiv,
    Impl,
    Equiv,
    ForallInd,
    ForallProp,
    ExistsInd,
    ExistsProp,
    Valid,
}

impl Combinator {
    pub const ALL: [Combinator; 14] = [
        Combinator::Not,
        Combinator::Or,
        Combinator::True,
        Combinator::False,
        Combinator::Cond,
        Combinator::And,
        Combinator::CondEquiv,
        Combinator::Impl,
        Combinator::Equiv,
        Combinator::ForallInd,
        Combinator::ForallProp,
        Combinator::ExistsInd,
        Combinator::ExistsProp,
        Combinator::Valid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Combinator::Not => "cnot",
            Combinator::Or => "cor",
            Combinator::True => "ctrue",
            Combinator::False => "cfalse",
            Combinator::Cond => "ccond",
            Combinator::And => "cand",
            Combinator::CondEquiv => "ccondequiv",
            Combinator::Impl => "cimpl",
            Combinator::Equiv => "cequiv",
            Combinator::ForallInd => "cforall_ind",
            Combinator::ForallProp => "cforall_prop",
            Combinator::ExistsInd => "cexists_ind",
            Combinator::ExistsProp => "cexists_prop",
            Combinator::Valid => "valid",
        }
    }

    pub fn from_name(name: &str) -> Option<Combinator> {
        Combinator::ALL.into_iter().find(|c| c.name() == name)
    }

    pub fn ty(self) -> Type {
        let prop = Type::prop;
        match self {
            Combinator::Not => Type::fun(prop(), prop()),
            Combinator::True | Combinator::False => prop(),
            Combinator::Or
            | Combinator::Cond
            | Combinator::And
            | Combinator::CondEquiv
            | Combinator::Impl
            | Combinator::Equiv => Type::curried([prop(), prop()], prop()),
            Combinator::ForallInd | Combinator::ExistsInd => {
                Type::fun(Type::fun(Type::U, prop()), prop())
            }
            Combinator::ForallProp | Combinator::ExistsProp => {
                Type::fun(Type::fun(prop(), prop()), prop())
            }
            Combinator::Valid => Type::fun(prop(), Type::O),
        }
    }

    /// The combinator as a named constant.
    pub fn constant(self) -> Term {
        Term::constant(self.name(), self.ty())
    }

    /// The closed defining λ-term, as in the THF0 axiom file.
    pub fn definition(self) -> Term {
        let phi = Var::new("Phi", Type::prop());
        let psi = Var::new("Psi", Type::prop());
        let x = Var::new("X", Type::I);
        let w = Var::new("W", Type::I);
        let at = |v: &Var, world: &Var| Term::app(Term::Free(v.clone()), Term::Free(world.clone()));
        let pointwise = |combine: fn(Term, Term) -> Term| {
            Term::lams(
                &[phi.clone(), psi.clone(), x.clone()],
                combine(at(&phi, &x), at(&psi, &x)),
            )
        };
        let both = |outer: Combinator, inner: Combinator| {
            let fwd = Term::apps(inner.constant(), [Term::Free(phi.clone()), Term::Free(psi.clone())]);
            let bwd = Term::apps(inner.constant(), [Term::Free(psi.clone()), Term::Free(phi.clone())]);
            Term::lams(&[phi.clone(), psi.clone()], Term::apps(outer.constant(), [fwd, bwd]))
        };
        match self {
            Combinator::Not => Term::lams(&[phi.clone(), x.clone()], Term::not(at(&phi, &x))),
            Combinator::Or => pointwise(Term::or),
            Combinator::True => Term::lam(&x, Term::truth()),
            Combinator::False => Term::lam(&x, Term::falsity()),
            Combinator::Cond => {
                let selected = Term::apps(
                    selection_constant(),
                    [Term::Free(x.clone()), Term::Free(phi.clone()), Term::Free(w.clone())],
                );
                Term::lams(
                    &[phi.clone(), psi.clone(), x.clone()],
                    Term::forall(&w, Term::imp(selected, at(&psi, &w))),
                )
            }
            Combinator::And => pointwise(Term::and),
            Combinator::CondEquiv => both(Combinator::And, Combinator::Cond),
            Combinator::Impl => pointwise(Term::imp),
            Combinator::Equiv => both(Combinator::And, Combinator::Impl),
            Combinator::ForallInd | Combinator::ForallProp => {
                let bound = quantified_var(self);
                let phi = Var::new("Phi", Type::fun(bound.ty.clone(), Type::prop()));
                let body = Term::apps(
                    Term::Free(phi.clone()),
                    [Term::Free(bound.clone()), Term::Free(w.clone())],
                );
                Term::lams(&[phi, w.clone()], Term::forall(&bound, body))
            }
            Combinator::ExistsInd | Combinator::ExistsProp => {
                let forall = if self == Combinator::ExistsInd {
                    Combinator::ForallInd
                } else {
                    Combinator::ForallProp
                };
                let bound = quantified_var(self);
                let phi = Var::new("Phi", Type::fun(bound.ty.clone(), Type::prop()));
                let negated = Term::app(
                    Combinator::Not.constant(),
                    Term::app(Term::Free(phi.clone()), Term::Free(bound.clone())),
                );
                let body = Term::app(
                    Combinator::Not.constant(),
                    Term::app(forall.constant(), Term::lam(&bound, negated)),
                );
                Term::lam(&phi, body)
            }
            Combinator::Valid => {
                let s = Var::new("S", Type::I);
                Term::lam(&phi, Term::forall(&s, at(&phi, &s)))
            }
        }
    }
}

fn quantified_var(c: Combinator) -> Var {
    match c {
        Combinator::ForallInd | Combinator::ExistsInd => Var::new("X", Type::U),
        _ => Var::new("P", Type::prop()),
    }
}

/// `f : i → (i → o) → (i → o)`.
pub fn selection_type() -> Type {
    Type::curried([Type::I, Type::prop()], Type::prop())
}

pub fn selection_constant() -> Term {
    Term::constant(SELECTION, selection_type())
}

/// `u → … → u → (i → o)` with `arity` argument positions.
pub fn predicate_type(arity: usize) -> Type {
    Type::curried(std::iter::repeat_n(Type::U, arity), Type::prop())
}

/// Predicate constants available to the translation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EmbeddingEnv {
    predicates: BTreeMap<String, usize>,
}

impl EmbeddingEnv {
    pub fn new(sig: &Signature) -> Self {
        EmbeddingEnv {
            predicates: sig.predicates().map(|(k, n)| (k.to_owned(), n)).collect(),
        }
    }

    /// Environment declaring exactly the predicates a formula uses.
    pub fn for_formula(formula: &Formula) -> Self {
        EmbeddingEnv {
            predicates: formula.predicates().into_iter().collect(),
        }
    }

    pub fn with_predicate(mut self, name: &str, arity: usize) -> Self {
        self.predicates.insert(name.to_owned(), arity);
        self
    }

    pub fn selection(&self) -> Term {
        selection_constant()
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&str, usize)> {
        self.predicates.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// The constant `k : uⁿ → (i → o)`.
    pub fn predicate(&self, name: &str) -> Result<Term, EmbedError> {
        self.predicates
            .get(name)
            .map(|&n| Term::constant(name, predicate_type(n)))
            .ok_or_else(|| EmbedError::UndeclaredPredicate(name.to_owned()))
    }

    fn atom(&self, pred: &str, args: &[String]) -> Result<Term, EmbedError> {
        let arity = *self
            .predicates
            .get(pred)
            .ok_or_else(|| EmbedError::UndeclaredPredicate(pred.to_owned()))?;
        if arity != args.len() {
            return Err(EmbedError::ArityMismatch {
                pred: pred.to_owned(),
                expected: arity,
                found: args.len(),
            });
        }
        let head = Term::constant(pred, predicate_type(arity));
        Ok(Term::apps(head, args.iter().map(|x| Term::Free(individual(x)))))
    }

    /// Combinator definitions as (name, closed λ-term) pairs, in declaration order.
    pub fn combinator_definitions(&self) -> Vec<(&'static str, Term)> {
        Combinator::ALL
            .into_iter()
            .map(|c| (c.name(), c.definition()))
            .collect()
    }
}

fn individual(name: &str) -> Var {
    Var::new(name, Type::U)
}

fn proposition(name: &str) -> Var {
    Var::new(name, Type::prop())
}

/// Combinator form of the translation.
///
/// Sugar constructors map to their own combinators (`cand`, `cimpl`,
/// `cequiv`, `cexists_*`, `ctrue`, `cfalse`).
pub fn embed(formula: &Formula, env: &EmbeddingEnv) -> Result<Term, EmbedError> {
    use Combinator as C;
    let unary = |c: C, a: &Formula| -> Result<Term, EmbedError> {
        Ok(Term::app(c.constant(), embed(a, env)?))
    };
    let binary = |c: C, a: &Formula, b: &Formula| -> Result<Term, EmbedError> {
        Ok(Term::apps(c.constant(), [embed(a, env)?, embed(b, env)?]))
    };
    let binder = |c: C, v: Var, body: &Formula| -> Result<Term, EmbedError> {
        Ok(Term::app(c.constant(), Term::lam(&v, embed(body, env)?)))
    };
    match formula {
        Formula::PropVar(p) => Ok(Term::Free(proposition(p))),
        Formula::Atom { pred, args } => env.atom(pred, args),
        Formula::Not(a) => unary(C::Not, a),
        Formula::Or(a, b) => binary(C::Or, a, b),
        Formula::Cond(a, b) => binary(C::Cond, a, b),
        Formula::ForallInd(x, body) => binder(C::ForallInd, individual(x), body),
        Formula::ForallProp(p, body) => binder(C::ForallProp, proposition(p), body),
        Formula::True => Ok(C::True.constant()),
        Formula::False => Ok(C::False.constant()),
        Formula::And(a, b) => binary(C::And, a, b),
        Formula::Implies(a, b) => binary(C::Impl, a, b),
        Formula::Iff(a, b) => binary(C::Equiv, a, b),
        Formula::ExistsInd(x, body) => binder(C::ExistsInd, individual(x), body),
        Formula::ExistsProp(p, body) => binder(C::ExistsProp, proposition(p), body),
    }
}

/// `valid @ ⌊φ⌋` in combinator form.
pub fn embed_valid(formula: &Formula, env: &EmbeddingEnv) -> Result<Term, EmbedError> {
    Ok(Term::app(Combinator::Valid.constant(), embed(formula, env)?))
}

/// Replaces every combinator constant by its definition, recursively.
pub fn unfold(term: &Term) -> Term {
    term.replace_constants(&|name, ty| {
        Combinator::from_name(name)
            .filter(|c| c.ty() == *ty)
            .map(|c| unfold(&c.definition()))
    })
}

/// The connectives written as λ-terms, independently of [`Combinator::definition`].
mod inline {
    use super::*;

    fn a() -> Var {
        Var::new("A", Type::prop())
    }
    fn b() -> Var {
        Var::new("B", Type::prop())
    }
    fn x() -> Var {
        Var::new("X", Type::I)
    }
    fn at(v: &Var, w: &Var) -> Term {
        Term::app(Term::Free(v.clone()), Term::Free(w.clone()))
    }

    /// λA.λX.¬(A X)
    pub fn not() -> Term {
        Term::lam(&a(), Term::lam(&x(), Term::not(at(&a(), &x()))))
    }

    fn lifted(connective: Constant) -> Term {
        let body = Term::apps(Term::Const(connective), [at(&a(), &x()), at(&b(), &x())]);
        Term::lam(&a(), Term::lam(&b(), Term::lam(&x(), body)))
    }

    /// λA.λB.λX.(A X) ∨ (B X)
    pub fn or() -> Term {
        lifted(Constant::Or)
    }

    pub fn and() -> Term {
        lifted(Constant::And)
    }

    pub fn implies() -> Term {
        lifted(Constant::Imp)
    }

    /// λA.λB.λX.∀W.(f X A W) → (B W)
    pub fn cond() -> Term {
        let w = Var::new("W", Type::I);
        let selected = Term::apps(
            selection_constant(),
            [Term::Free(x()), Term::Free(a()), Term::Free(w.clone())],
        );
        let body = Term::forall(&w, Term::imp(selected, at(&b(), &w)));
        Term::lam(&a(), Term::lam(&b(), Term::lam(&x(), body)))
    }

    /// λA.λB.(A ⇒→ B) ∧ (B ⇒→ A), pointwise.
    pub fn equiv() -> Term {
        let fwd = Term::apps(implies(), [Term::Free(a()), Term::Free(b())]);
        let bwd = Term::apps(implies(), [Term::Free(b()), Term::Free(a())]);
        Term::lam(&a(), Term::lam(&b(), Term::apps(and(), [fwd, bwd])))
    }

    /// λQ.λW.∀X.(Q X W) for individuals, λR.λW.∀P.(R P W) for propositions.
    pub fn forall(bound: Var) -> Term {
        let q = Var::new("Q", Type::fun(bound.ty.clone(), Type::prop()));
        let w = Var::new("W", Type::I);
        let body = Term::apps(
            Term::Free(q.clone()),
            [Term::Free(bound.clone()), Term::Free(w.clone())],
        );
        Term::lam(&q, Term::lam(&w, Term::forall(&bound, body)))
    }

    /// λQ.λW.¬∀X.¬(Q X W)
    pub fn exists(bound: Var) -> Term {
        let q = Var::new("Q", Type::fun(bound.ty.clone(), Type::prop()));
        let w = Var::new("W", Type::I);
        let body = Term::apps(
            Term::Free(q.clone()),
            [Term::Free(bound.clone()), Term::Free(w.clone())],
        );
        Term::lam(
            &q,
            Term::lam(&w, Term::not(Term::forall(&bound, Term::not(body)))),
        )
    }

    pub fn constant(value: Term) -> Term {
        Term::lam(&x(), value)
    }

    /// λA.∀S.(A S)
    pub fn valid() -> Term {
        let s = Var::new("S", Type::I);
        Term::lam(&a(), Term::forall(&s, at(&a(), &s)))
    }
}

/// The translation with the connective λ-terms written in place.
pub fn embed_inline(formula: &Formula, env: &EmbeddingEnv) -> Result<Term, EmbedError> {
    let binary = |op: Term, l: &Formula, r: &Formula| -> Result<Term, EmbedError> {
        Ok(Term::apps(op, [embed_inline(l, env)?, embed_inline(r, env)?]))
    };
    let binder = |op: fn(Var) -> Term, v: Var, body: &Formula| -> Result<Term, EmbedError> {
        Ok(Term::app(op(v.clone()), Term::lam(&v, embed_inline(body, env)?)))
    };
    match formula {
        Formula::PropVar(p) => Ok(Term::Free(proposition(p))),
        Formula::Atom { pred, args } => env.atom(pred, args),
        Formula::Not(a) => Ok(Term::app(inline::not(), embed_inline(a, env)?)),
        Formula::Or(l, r) => binary(inline::or(), l, r),
        Formula::Cond(l, r) => binary(inline::cond(), l, r),
        Formula::ForallInd(x, body) => binder(inline::forall, individual(x), body),
        Formula::ForallProp(p, body) => binder(inline::forall, proposition(p), body),
        Formula::True => Ok(inline::constant(Term::truth())),
        Formula::False => Ok(inline::constant(Term::falsity())),
        Formula::And(l, r) => binary(inline::and(), l, r),
        Formula::Implies(l, r) => binary(inline::implies(), l, r),
        Formula::Iff(l, r) => binary(inline::equiv(), l, r),
        Formula::ExistsInd(x, body) => binder(inline::exists, individual(x), body),
        Formula::ExistsProp(p, body) => binder(inline::exists, proposition(p), body),
    }
}

/// `vld ⌊φ⌋` with the inline route.
pub fn embed_valid_inline(formula: &Formula, env: &EmbeddingEnv) -> Result<Term, EmbedError> {
    Ok(Term::app(inline::valid(), embed_inline(formula, env)?))
}

/// βη-normal kernel form of `⌊φ⌋`.
pub fn embed_kernel(formula: &Formula, env: &EmbeddingEnv) -> Result<Term, EmbedError> {
    Ok(normalize(&embed_inline(formula, env)?))
}

/// βη-normal kernel form of `vld ⌊φ⌋`.
pub fn embed_valid_kernel(formula: &Formula, env: &EmbeddingEnv) -> Result<Term, EmbedError> {
    Ok(normalize(&embed_valid_inline(formula, env)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::alpha_equal;
    use crate::syntax::parse_surface;

    fn env() -> EmbeddingEnv {
        EmbeddingEnv::default().with_predicate("b", 1).with_predicate("r", 2)
    }

    fn p() -> Term {
        Term::var("p", Type::prop())
    }
    fn q() -> Term {
        Term::var("q", Type::prop())
    }

    #[test]
    fn propositional_variable_is_a_variable() {
        assert_eq!(embed(&Formula::prop("p"), &env()).unwrap(), p());
        assert_eq!(embed_kernel(&Formula::prop("p"), &env()).unwrap(), p());
    }

    #[test]
    fn conditional_kernel_form() {
        let f = Formula::cond(Formula::prop("p"), Formula::prop("q"));
        let x = Var::new("X", Type::I);
        let w = Var::new("W", Type::I);
        let expected = Term::lam(
            &x,
            Term::forall(
                &w,
                Term::imp(
                    Term::apps(selection_constant(), [Term::Free(x.clone()), p(), Term::Free(w.clone())]),
                    Term::app(q(), Term::Free(w.clone())),
                ),
            ),
        );
        assert_eq!(embed_kernel(&f, &env()).unwrap(), expected);
    }

    #[test]
    fn forall_ind_kernel_form() {
        let f = Formula::forall_ind("X", Formula::atom("b", ["X"]));
        let w = Var::new("W", Type::I);
        let x = Var::new("X", Type::U);
        let b = Term::constant("b", predicate_type(1));
        let expected = Term::lam(
            &w,
            Term::forall(&x, Term::apps(b, [Term::Free(x.clone()), Term::Free(w.clone())])),
        );
        assert_eq!(embed_kernel(&f, &env()).unwrap(), expected);
    }

    #[test]
    fn valid_wrapper() {
        let s = Var::new("S", Type::I);
        let expected = normalize(&Term::forall(&s, Term::app(p(), Term::Free(s.clone()))));
        assert_eq!(embed_valid_kernel(&Formula::prop("p"), &env()).unwrap(), expected);
        assert_eq!(embed_valid(&Formula::prop("p"), &env()).unwrap().type_of().unwrap(), Type::O);
    }

    #[test]
    fn excluded_middle_valid_form() {
        let f = Formula::or(Formula::prop("p"), Formula::not(Formula::prop("p")));
        let s = Var::new("S", Type::I);
        let ps = Term::app(p(), Term::Free(s.clone()));
        let expected = Term::forall(&s, Term::or(ps.clone(), Term::not(ps)));
        assert_eq!(embed_valid_kernel(&f, &env()).unwrap(), normalize(&expected));
    }

    #[test]
    fn compositional_clauses() {
        let a = Formula::prop("p");
        let ea = embed(&a, &env()).unwrap();
        assert_eq!(
            embed(&Formula::not(a.clone()), &env()).unwrap(),
            Term::app(Combinator::Not.constant(), ea.clone())
        );
        assert_eq!(
            embed(&Formula::cond(a.clone(), a.clone()), &env()).unwrap(),
            Term::apps(Combinator::Cond.constant(), [ea.clone(), ea])
        );
    }

    #[test]
    fn combinator_definitions_are_closed_and_well_typed() {
        for c in Combinator::ALL {
            let def = c.definition();
            assert!(def.free_vars().is_empty(), "{} has free variables", c.name());
            assert_eq!(def.type_of().unwrap(), c.ty(), "{}", c.name());
        }
        assert_eq!(env().combinator_definitions().len(), 14);
    }

    #[test]
    fn combinators_agree_with_inline_connectives() {
        assert_eq!(normalize(&unfold(&Combinator::Not.constant())), normalize(&inline::not()));
        assert_eq!(normalize(&unfold(&Combinator::Or.constant())), normalize(&inline::or()));
        assert_eq!(normalize(&unfold(&Combinator::Cond.constant())), normalize(&inline::cond()));
        assert_eq!(normalize(&unfold(&Combinator::Valid.constant())), normalize(&inline::valid()));
        assert_eq!(
            normalize(&unfold(&Combinator::ForallInd.constant())),
            normalize(&inline::forall(Var::new("X", Type::U)))
        );
        assert_eq!(
            normalize(&unfold(&Combinator::ExistsProp.constant())),
            normalize(&inline::exists(Var::new("P", Type::prop())))
        );
        assert_eq!(normalize(&unfold(&Combinator::Equiv.constant())), normalize(&inline::equiv()));
    }

    #[test]
    fn exists_definition_shape() {
        // cexists_ind = λΦ. cnot (cforall_ind (λX. cnot (Φ X)))
        let def = Combinator::ExistsInd.definition();
        assert_eq!(
            def.to_string(),
            "λPhi:u > i > o. (cnot (cforall_ind (λX:u. (cnot (Phi X)))))"
        );
    }

    #[test]
    fn routes_agree_on_barcan() {
        let sig = Signature::new().with_predicate("b", 1).unwrap();
        let f = parse_surface("(forall X. a => b(X)) -> (a => forall X. b(X))", &sig).unwrap();
        let via_combinators = normalize(&unfold(&embed(&f, &env()).unwrap()));
        let via_inline = embed_kernel(&f, &env()).unwrap();
        assert!(alpha_equal(&via_combinators, &via_inline));
        assert_eq!(via_inline.type_of().unwrap(), Type::prop());
    }

    #[test]
    fn errors() {
        assert_eq!(
            embed(&Formula::atom("zz", ["X"]), &env()).unwrap_err(),
            EmbedError::UndeclaredPredicate("zz".into())
        );
        assert!(matches!(
            embed_inline(&Formula::atom("r", ["X"]), &env()),
            Err(EmbedError::ArityMismatch { expected: 2, found: 1, .. })
        ));
    }
}
