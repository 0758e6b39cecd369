//! Finite Henkin models for the HOL image of the embedding.
//!
//! `D_o`, `D_i`, `D_u` and `D_{i→o}` are materialized; values of every other
//! function type are closures produced by evaluation, and are tabulated
//! over their argument domain when returned. Quantification is supported at
//! `i`, `u` and `i → o` only.

mod eval;
mod flat;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub use eval::{CompiledTerm, Slots};

use crate::embedding::{embed_kernel, EmbedError, EmbeddingEnv};
use crate::kernel::{KernelError, Term, Type, Var};
use crate::semantics::{
    eval_qcl, EvalError, Individual, Interpretation, ModelError, QclAssignment,
    SelectionModel, SelectionTable, World, WorldSet,
};
use crate::syntax::Formula;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum HolError {
    #[error("ill-typed term: {0}")]
    IllTyped(#[from] KernelError),
    #[error("quantification over type {0} is not supported")]
    UnsupportedQuantifier(Type),
    #[error("the domain of type {0} is not enumerated")]
    UnsupportedDomain(Type),
    #[error("variable {name}:{ty} has no value", name = .0.name, ty = .0.ty)]
    MissingVariable(Var),
    #[error("value assigned to {name} does not belong to type {ty}", name = .0.name, ty = .0.ty)]
    ValueMismatch(Var),
    #[error("value for constant {0} does not belong to its type")]
    ConstantMismatch(String),
    #[error("{0} is not a member of the propositional domain")]
    OutsideDomain(WorldSet),
    #[error("expected a value of type {0}")]
    Expected(&'static str),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A member of some `D_α`. Functions other than those of type `i → o` are
/// given by their results on each element of the argument domain, in
/// domain order: `F, T` for `o`, worlds and individuals by index, and
/// `D_{i→o}` as listed by [`FiniteHenkinModel::domain_prop`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    Bool(bool),
    World(World),
    Individual(Individual),
    Prop(WorldSet),
    Function(Vec<Element>),
}

impl Element {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Element::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_world(&self) -> Option<World> {
        match self {
            Element::World(w) => Some(*w),
            _ => None,
        }
    }

    pub fn as_prop(&self) -> Option<WorldSet> {
        match self {
            Element::Prop(s) => Some(*s),
            _ => None,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Bool(b) => f.write_str(if *b { "T" } else { "F" }),
            Element::World(w) => write!(f, "{w}"),
            Element::Individual(d) => write!(f, "{d}"),
            Element::Prop(s) => write!(f, "{s}"),
            Element::Function(rs) => write!(f, "[{}]", rs.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ")),
        }
    }
}

/// `H = ⟨{D_α}, I⟩` restricted to what the embedding needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteHenkinModel {
    domain_i: usize,
    domain_u: usize,
    domain_prop: Vec<WorldSet>,
    selection: SelectionTable,
    predicates: Interpretation,
    other: BTreeMap<(String, Type), Element>,
}

impl FiniteHenkinModel {
    /// `f` false everywhere, no predicates.
    pub fn new(domain_i: usize, domain_u: usize, domain_prop: Vec<WorldSet>) -> Result<Self, ModelError> {
        if domain_i == 0 {
            return Err(ModelError::NoWorlds);
        }
        // The structural checks are those of a selection model over the same domains.
        let probe = SelectionModel::new(domain_i, domain_u)?.with_props(domain_prop)?;
        Ok(FiniteHenkinModel {
            domain_i,
            domain_u,
            domain_prop: probe.props().to_vec(),
            selection: SelectionTable::empty(domain_i),
            predicates: Interpretation::default(),
            other: BTreeMap::new(),
        })
    }

    /// `(I f)(s, q, t) = T` exactly when `t ∈ value`, for `q` the set `set`.
    pub fn set_selection(&mut self, s: World, set: WorldSet, value: WorldSet) -> Result<(), ModelError> {
        if s.0 >= self.domain_i {
            return Err(ModelError::WorldOutOfRange(s));
        }
        let full = WorldSet::full(self.domain_i);
        if !set.is_subset(full) {
            return Err(ModelError::NotASubset { set });
        }
        let mut table = self.selection.entries().to_vec();
        let index = self.selection.index(s, set);
        table[index] = value;
        self.selection = SelectionTable::from_entries(self.domain_i, table)?;
        Ok(())
    }

    /// Interprets `k : uⁿ → i → o` by per-world tuple masks.
    pub fn set_predicate(&mut self, name: &str, arity: usize, extensions: Vec<u64>) -> Result<(), ModelError> {
        if extensions.len() != self.domain_i {
            return Err(ModelError::WorldOutOfRange(World(extensions.len())));
        }
        self.predicates.insert(name, arity, extensions);
        Ok(())
    }

    /// Fixes the denotation of some other constant.
    pub fn set_constant(&mut self, name: &str, ty: Type, value: Element) -> Result<(), HolError> {
        if self.value_of(&value, &ty).is_none() {
            return Err(HolError::ConstantMismatch(name.to_owned()));
        }
        self.other.insert((name.to_owned(), ty), value);
        Ok(())
    }

    pub fn domain_i(&self) -> usize {
        self.domain_i
    }

    pub fn domain_u(&self) -> usize {
        self.domain_u
    }

    pub fn domain_prop(&self) -> &[WorldSet] {
        &self.domain_prop
    }

    pub fn selection(&self) -> &SelectionTable {
        &self.selection
    }

    pub fn predicates(&self) -> &Interpretation {
        &self.predicates
    }

    /// `(I f)(s, q, t)`.
    pub fn interp_f(&self, s: World, q: WorldSet, t: World) -> bool {
        self.selection.contains(s, q, t)
    }

    pub(crate) fn take_accessed(&self) -> u128 {
        self.selection.take_accessed()
    }

    pub(crate) fn load_selection(&mut self, entries: &[WorldSet]) {
        self.selection.load(entries);
    }
}

/// `H^M`: worlds, individuals and `Q` become `D_i`, `D_u` and `D_{i→o}`;
/// `f` and the predicates are interpreted from `M`.
pub fn build_henkin(model: &SelectionModel) -> FiniteHenkinModel {
    FiniteHenkinModel {
        domain_i: model.worlds(),
        domain_u: model.individuals(),
        domain_prop: model.props().to_vec(),
        selection: SelectionTable::from_entries(model.worlds(), model.selection().entries().to_vec())
            .expect("copied from a valid model"),
        predicates: model.interpretation().clone(),
        other: BTreeMap::new(),
    }
}

/// A HOL variable assignment. A lifted assignment is total: variables it
/// does not mention take [`FiniteHenkinModel::default_element`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HolAssignment {
    values: BTreeMap<Var, Element>,
    total: bool,
}

impl HolAssignment {
    /// An assignment with no bindings; unbound variables are errors.
    pub fn partial() -> Self {
        Self::default()
    }

    /// An assignment with no bindings; unbound variables take defaults.
    pub fn total() -> Self {
        HolAssignment {
            values: BTreeMap::new(),
            total: true,
        }
    }

    pub fn bind(&mut self, var: Var, value: Element) {
        self.values.insert(var, value);
    }

    /// `φ[value/var]`.
    pub fn with(mut self, var: Var, value: Element) -> Self {
        self.bind(var, value);
        self
    }

    pub fn get(&self, var: &Var) -> Option<&Element> {
        self.values.get(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Element)> {
        self.values.iter()
    }

    pub fn is_total(&self) -> bool {
        self.total
    }
}

/// `⌊g⌋`: `X_u ↦ g(X)`, `P_{i→o} ↦ g(P)`, defaults elsewhere.
pub fn lift_assignment(g: &QclAssignment) -> HolAssignment {
    let mut out = HolAssignment::total();
    for (x, d) in g.individuals() {
        out.bind(Var::new(x, Type::U), Element::Individual(d));
    }
    for (p, set) in g.props() {
        out.bind(Var::new(p, Type::prop()), Element::Prop(set));
    }
    out
}

/// `V(φ, t)`.
pub fn eval_hol(model: &FiniteHenkinModel, assignment: &HolAssignment, term: &Term) -> Result<Element, HolError> {
    let compiled = CompiledTerm::new(term)?;
    compiled.eval(model, &compiled.bind(model, assignment)?)
}

/// `V(φ, t) = T` for a term of type `o`.
pub fn eval_hol_bool(model: &FiniteHenkinModel, assignment: &HolAssignment, term: &Term) -> Result<bool, HolError> {
    let compiled = CompiledTerm::new(term)?;
    compiled.eval_bool(model, &compiled.bind(model, assignment)?)
}

/// `H ⊨ t`: `t` is true under every assignment of its free variables.
pub fn hol_valid(model: &FiniteHenkinModel, term: &Term) -> Result<bool, HolError> {
    CompiledTerm::new(term)?.valid(model)
}

#[derive(Debug, Error)]
pub enum CorrespondenceError {
    #[error(transparent)]
    Qcl(#[from] EvalError),
    #[error(transparent)]
    Hol(#[from] HolError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
}

/// Both sides of the correspondence at one point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sides {
    /// `M, g, s ⊨ δ`.
    pub qcl: bool,
    /// `V(⌊g⌋[s/S], ⌊δ⌋ S) = T`.
    pub hol: bool,
}

impl Sides {
    pub fn agree(&self) -> bool {
        self.qcl == self.hol
    }
}

/// The world variable `S_i` the embedded formula is applied to.
pub fn world_variable() -> Var {
    Var::new("S", Type::I)
}

/// Embedding environment declaring the predicates a model interprets.
pub fn model_env(model: &SelectionModel) -> EmbeddingEnv {
    model
        .interpretation()
        .iter()
        .fold(EmbeddingEnv::default(), |env, (name, table)| env.with_predicate(name, table.arity()))
}

/// Evaluates `M, g, s ⊨ δ` and `V(⌊g⌋[s/S_i], ⌊δ⌋ S_i)` in `H^M`.
pub fn correspondence_sides(
    model: &SelectionModel,
    g: &QclAssignment,
    s: World,
    delta: &Formula,
) -> Result<Sides, CorrespondenceError> {
    let qcl = eval_qcl(model, g, s, delta)?;
    let henkin = build_henkin(model);
    let embedded = embed_kernel(delta, &model_env(model))?;
    let applied = Term::app(embedded, Term::Free(world_variable()));
    let assignment = lift_assignment(g).with(world_variable(), Element::World(s));
    let hol = eval_hol_bool(&henkin, &assignment, &applied)?;
    Ok(Sides { qcl, hol })
}

/// Whether the two sides of the correspondence agree at `(M, g, s, δ)`.
pub fn correspondence_check(
    model: &SelectionModel,
    g: &QclAssignment,
    s: World,
    delta: &Formula,
) -> Result<bool, CorrespondenceError> {
    Ok(correspondence_sides(model, g, s, delta)?.agree())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::{embed_valid_kernel, Combinator};
    use crate::kernel::normalize;
    use crate::semantics::model_valid;
    use crate::syntax::{parse_qcl, Signature};

    fn parse(text: &str) -> Formula {
        let sig = Signature::new().with_predicate("b", 1).unwrap();
        parse_qcl(text, &sig).unwrap()
    }

    fn p() -> Var {
        Var::new("p", Type::prop())
    }

    #[test]
    fn selection_clause() {
        let mut m = SelectionModel::new(1, 1).unwrap();
        m.set_selection(World(0), WorldSet(1), WorldSet(1)).unwrap();
        let h = build_henkin(&m);
        assert!(h.interp_f(World(0), WorldSet(1), World(0)));
        assert!(!h.interp_f(World(0), WorldSet(0), World(0)));
    }

    #[test]
    fn domains_follow_the_model() {
        let m = SelectionModel::new(2, 1)
            .unwrap()
            .with_props([WorldSet(0), WorldSet(3)])
            .unwrap();
        let h = build_henkin(&m);
        assert_eq!(h.domain_prop().len(), 2);
        assert_eq!(h.domain_i(), 2);
    }

    #[test]
    fn selection_round_trip() {
        let mut m = SelectionModel::new(2, 1).unwrap();
        m.set_selection(World(0), WorldSet(2), WorldSet(3)).unwrap();
        m.set_selection(World(1), WorldSet(1), WorldSet(2)).unwrap();
        let h = build_henkin(&m);
        for s in 0..2 {
            for &q in m.props() {
                let rebuilt = WorldSet::from_worlds((0..2).map(World).filter(|&t| h.interp_f(World(s), q, t)));
                assert_eq!(rebuilt, m.select(World(s), q));
            }
        }
    }

    #[test]
    fn lifted_assignment() {
        let g = QclAssignment::new()
            .with_individual("X", Individual(1))
            .with_prop("P", WorldSet(1));
        let phi = lift_assignment(&g);
        assert_eq!(phi.get(&Var::new("X", Type::U)), Some(&Element::Individual(Individual(1))));
        assert_eq!(phi.get(&Var::new("P", Type::prop())), Some(&Element::Prop(WorldSet(1))));
        let h = FiniteHenkinModel::new(2, 2, vec![WorldSet(2), WorldSet(3)]).unwrap();
        let w = Term::var("W", Type::I);
        assert_eq!(eval_hol(&h, &phi, &w).unwrap(), Element::World(World(0)));
        let q = Term::var("Q", Type::prop());
        assert_eq!(eval_hol(&h, &phi, &q).unwrap(), Element::Prop(WorldSet(2)));
        let k = Term::var("K", Type::fun(Type::U, Type::O));
        assert_eq!(
            eval_hol(&h, &phi, &k).unwrap(),
            Element::Function(vec![Element::Bool(false), Element::Bool(false)])
        );
    }

    #[test]
    fn negation_and_world_quantifier() {
        let h = FiniteHenkinModel::new(2, 1, crate::semantics::all_world_sets(2).collect()).unwrap();
        let s = Var::new("S", Type::I);
        let body = Term::forall(&s, Term::app(Term::Free(p()), Term::Free(s.clone())));
        let full = HolAssignment::partial().with(p(), Element::Prop(WorldSet(3)));
        let part = HolAssignment::partial().with(p(), Element::Prop(WorldSet(1)));
        assert!(eval_hol_bool(&h, &full, &body).unwrap());
        assert!(!eval_hol_bool(&h, &part, &body).unwrap());
        assert!(eval_hol_bool(&h, &part, &Term::not(body)).unwrap());
        assert_eq!(
            eval_hol(&h, &HolAssignment::partial(), &Term::Free(p())).unwrap_err(),
            HolError::MissingVariable(p())
        );
    }

    #[test]
    fn unsupported_quantifier() {
        let h = FiniteHenkinModel::new(1, 1, vec![WorldSet(0)]).unwrap();
        let g = Var::new("G", Type::fun(Type::U, Type::U));
        let t = Term::forall(&g, Term::truth());
        assert!(matches!(
            eval_hol(&h, &HolAssignment::total(), &t),
            Err(HolError::UnsupportedQuantifier(_))
        ));
    }

    #[test]
    fn validity_of_closed_and_open_terms() {
        let m = SelectionModel::new(2, 1).unwrap();
        let h = build_henkin(&m);
        let s = Var::new("S", Type::I);
        let ctrue = Term::app(Combinator::True.definition(), Term::Free(s.clone()));
        assert!(hol_valid(&h, &normalize(&Term::forall(&s, ctrue))).unwrap());
        let open = Term::forall(&s, Term::app(Term::Free(p()), Term::Free(s.clone())));
        assert!(!hol_valid(&h, &open).unwrap());
        let only_full = FiniteHenkinModel::new(2, 1, vec![WorldSet(3)]).unwrap();
        assert!(hol_valid(&only_full, &open).unwrap());
    }

    #[test]
    fn correspondence_examples() {
        let mut m = SelectionModel::new(2, 2).unwrap();
        m.declare_predicate("b", 1).unwrap();
        m.add_fact("b", World(1), &[Individual(0)]).unwrap();
        m.set_selection(World(0), WorldSet(1), WorldSet(2)).unwrap();
        m.set_selection(World(1), WorldSet(3), WorldSet(1)).unwrap();
        for text in ["P", "p => q", "forallp P. P => P", "forall X. b(X) => P", "~(P | b(X))"] {
            let f = parse(text);
            for g in crate::semantics::assignments(&m, &crate::syntax::free_vars(&f)) {
                for s in m.world_iter() {
                    assert!(correspondence_check(&m, &g, s, &f).unwrap(), "{text} at {s}");
                }
            }
        }
    }

    #[test]
    fn validity_transfers() {
        let mut m = SelectionModel::new(2, 1).unwrap();
        m.declare_predicate("b", 1).unwrap();
        m.set_selection(World(0), WorldSet(1), WorldSet(2)).unwrap();
        let env = model_env(&m);
        let h = build_henkin(&m);
        for text in ["p => p", "p => q | ~q", "(forall X. a => b(X)) -> (a => forall X. b(X))"] {
            let f = parse(text);
            assert_eq!(
                model_valid(&m, &f).unwrap(),
                hol_valid(&h, &embed_valid_kernel(&f, &env).unwrap()).unwrap(),
                "{text}"
            );
        }
    }

    #[test]
    fn extensional_equality() {
        let h = FiniteHenkinModel::new(2, 1, crate::semantics::all_world_sets(2).collect()).unwrap();
        let x = Var::new("X", Type::I);
        let lam = Term::lam(&x, Term::app(Term::Free(p()), Term::Free(x.clone())));
        let phi = HolAssignment::partial().with(p(), Element::Prop(WorldSet(2)));
        assert_eq!(eval_hol(&h, &phi, &lam).unwrap(), eval_hol(&h, &phi, &Term::Free(p())).unwrap());
        // λQ. Q s1 over D_{i→o} in domain order.
        let q = Var::new("Q", Type::prop());
        let at_s1 = Term::lam(&q, Term::app(Term::Free(q.clone()), Term::var("W", Type::I)));
        let phi = HolAssignment::partial().with(Var::new("W", Type::I), Element::World(World(1)));
        let expected = (0..4).map(|m| Element::Bool(m & 2 != 0)).collect();
        assert_eq!(eval_hol(&h, &phi, &at_s1).unwrap(), Element::Function(expected));
    }

    #[test]
    fn tabulated_functions_can_be_assigned() {
        let h = FiniteHenkinModel::new(2, 2, vec![WorldSet(0), WorldSet(3)]).unwrap();
        let k = Var::new("K", Type::fun(Type::U, Type::O));
        let d = Var::new("D", Type::U);
        let body = Term::app(Term::Free(k.clone()), Term::Free(d.clone()));
        let table = Element::Function(vec![Element::Bool(false), Element::Bool(true)]);
        let phi = HolAssignment::partial().with(k.clone(), table).with(d.clone(), Element::Individual(Individual(1)));
        assert!(eval_hol_bool(&h, &phi, &body).unwrap());
        let bad = HolAssignment::partial()
            .with(k.clone(), Element::Function(vec![Element::Bool(true)]))
            .with(d, Element::Individual(Individual(0)));
        assert_eq!(eval_hol(&h, &bad, &body).unwrap_err(), HolError::ValueMismatch(k));
        let outside = HolAssignment::partial().with(p(), Element::Prop(WorldSet(1)));
        assert!(matches!(eval_hol(&h, &outside, &Term::Free(p())), Err(HolError::ValueMismatch(_))));
    }

    #[test]
    fn uninterpreted_constants_default() {
        let mut h = FiniteHenkinModel::new(2, 1, vec![WorldSet(1), WorldSet(2)]).unwrap();
        let a = Term::constant("a", Type::prop());
        let phi = HolAssignment::partial();
        assert_eq!(eval_hol(&h, &phi, &a).unwrap(), Element::Prop(WorldSet(1)));
        h.set_constant("a", Type::prop(), Element::Prop(WorldSet(2))).unwrap();
        assert_eq!(eval_hol(&h, &phi, &a).unwrap(), Element::Prop(WorldSet(2)));
        assert!(h.set_constant("a", Type::prop(), Element::Prop(WorldSet(3))).is_err());
        let c = Term::constant("c", Type::fun(Type::I, Type::I));
        assert_eq!(
            h.default_element(&Type::fun(Type::I, Type::I)).unwrap(),
            eval_hol(&h, &phi, &c).unwrap()
        );
    }
}
