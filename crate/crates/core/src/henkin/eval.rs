//! Compiled evaluation of HOL terms in a finite Henkin model.

use std::rc::Rc;

use super::{Element, FiniteHenkinModel, HolAssignment, HolError};
use crate::embedding::{predicate_type, selection_type, SELECTION};
use crate::kernel::{shift, Constant, Term, Type, Var};
use crate::semantics::{Individual, World, WorldSet};
use crate::util::Odometer;
use super::flat::{word_of, FlatTerm};

/// Domains that can be enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(super) enum Sort {
    Bool,
    World,
    Individual,
    Prop,
}

impl Sort {
    pub(super) fn of(ty: &Type) -> Option<Sort> {
        match ty {
            Type::O => Some(Sort::Bool),
            Type::I => Some(Sort::World),
            Type::U => Some(Sort::Individual),
            t if t.is_prop() => Some(Sort::Prop),
            _ => None,
        }
    }

    /// Sorts `Π` may range over.
    fn quantifiable(ty: &Type) -> Result<Sort, HolError> {
        match Sort::of(ty) {
            Some(Sort::Bool) | None => Err(HolError::UnsupportedQuantifier(ty.clone())),
            Some(sort) => Ok(sort),
        }
    }
}

/// Constants with a fixed interpretation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(super) enum Head {
    Not,
    Or,
    And,
    Imp,
    Pi(Sort),
    Select,
    Pred { name: String, ty: Type, arity: usize },
}

impl Head {
    fn of(c: &Constant) -> Result<Option<Head>, HolError> {
        Ok(Some(match c {
            Constant::Not => Head::Not,
            Constant::Or => Head::Or,
            Constant::And => Head::And,
            Constant::Imp => Head::Imp,
            Constant::Pi(ty) => Head::Pi(Sort::quantifiable(ty)?),
            Constant::True | Constant::False => return Ok(None),
            Constant::Named { name, ty } if name == SELECTION && *ty == selection_type() => Head::Select,
            Constant::Named { name, ty } => match predicate_arity(ty) {
                Some(arity) => Head::Pred {
                    name: name.clone(),
                    ty: ty.clone(),
                    arity,
                },
                None => return Ok(None),
            },
        }))
    }

    fn arity(&self) -> usize {
        match self {
            Head::Not | Head::Pi(_) => 1,
            Head::Or | Head::And | Head::Imp => 2,
            Head::Select => 3,
            Head::Pred { arity, .. } => arity + 1,
        }
    }
}

/// `n` when `ty` is `uⁿ → i → o`.
fn predicate_arity(ty: &Type) -> Option<usize> {
    let mut arity = 0;
    let mut rest = ty;
    while let Type::Arrow(a, b) = rest {
        if **a != Type::U {
            break;
        }
        arity += 1;
        rest = b;
    }
    (*ty == predicate_type(arity)).then_some(arity)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(super) enum Code {
    Free(usize),
    Bound(usize),
    Bool(bool),
    Other { name: String, ty: Type },
    Head(Head),
    Lam(Box<Code>),
    App(Box<Code>, Box<Code>),
    /// An interpreted constant applied to all its arguments.
    Saturated(Head, Vec<Code>),
    /// `Π (λ. body)`.
    Forall(Sort, Box<Code>),
    /// `f s (λ. body) t`.
    Select(Box<Code>, Box<Code>, Box<Code>),
}

/// A term type-checked once and prepared for repeated evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompiledTerm {
    ty: Type,
    free: Vec<Var>,
    code: Code,
    flat: Option<FlatTerm>,
}

impl CompiledTerm {
    /// Fails on ill-typed terms and on quantifiers outside `i`, `u`, `i → o`.
    pub fn new(term: &Term) -> Result<Self, HolError> {
        let ty = term.type_of()?;
        let mut free = Vec::new();
        let code = compile(term, &mut free)?;
        let flat = (ty == Type::O).then(|| FlatTerm::new(&code, &free)).flatten();
        Ok(CompiledTerm { ty, free, code, flat })
    }

    pub fn ty(&self) -> &Type {
        &self.ty
    }

    /// Free variables, in slot order.
    pub fn free_vars(&self) -> &[Var] {
        &self.free
    }

    /// Values of the free variables under `assignment`, in slot order.
    pub fn bind(&self, model: &FiniteHenkinModel, assignment: &HolAssignment) -> Result<Slots, HolError> {
        let values = self
            .free
            .iter()
            .map(|var| match assignment.get(var) {
                Some(e) => model.value_of(e, &var.ty).ok_or_else(|| HolError::ValueMismatch(var.clone())),
                None if assignment.is_total() => Ok(model.default_value(&var.ty)),
                None => Err(HolError::MissingVariable(var.clone())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Slots(values.into()))
    }

    /// `V(φ, t)` as a domain element.
    pub fn eval(&self, model: &FiniteHenkinModel, slots: &Slots) -> Result<Element, HolError> {
        let machine = Machine { model };
        let free = slots.0.clone();
        let value = machine.eval(&self.code, &mut Vec::new(), &free)?;
        machine.reify(value, &self.ty)
    }

    /// `V(φ, t) = T`; `t` must have type `o`.
    pub fn eval_bool(&self, model: &FiniteHenkinModel, slots: &Slots) -> Result<bool, HolError> {
        if self.ty != Type::O {
            return Err(HolError::Expected("o"));
        }
        if let Some(flat) = &self.flat {
            if let Some(mut frame) = slots.0.iter().map(word_of).collect::<Option<Vec<u64>>>() {
                frame.resize(flat.frame, 0);
                let predicates = flat.resolve(model);
                return Ok(flat.runner(model, &predicates).holds(&flat.root, &mut frame));
            }
        }
        Machine { model }.eval(&self.code, &mut Vec::new(), &slots.0)?.as_bool()
    }

    /// `V(φ, t) = T` for every assignment `φ` of the free variables.
    pub fn valid(&self, model: &FiniteHenkinModel) -> Result<bool, HolError> {
        if self.ty != Type::O {
            return Err(HolError::Expected("o"));
        }
        let machine = Machine { model };
        // Individuals first, then by name: the order conditional-logic
        // validity uses, so both sides stop at the same first failure.
        let mut order: Vec<usize> = (0..self.free.len()).collect();
        order.sort_by_key(|&i| (self.free[i].ty != Type::U, &self.free[i].name));
        let sorts = order
            .iter()
            .map(|&i| {
                let ty = &self.free[i].ty;
                Sort::of(ty).ok_or_else(|| HolError::UnsupportedQuantifier(ty.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut digits = Odometer::new(sorts.iter().map(|&s| model.size(s)).collect());
        if let Some(flat) = &self.flat {
            let predicates = flat.resolve(model);
            let runner = flat.runner(model, &predicates);
            let mut frame = vec![0; flat.frame];
            while let Some(digits) = digits.next() {
                for ((&slot, &sort), &k) in order.iter().zip(&sorts).zip(digits) {
                    frame[slot] = runner.word(sort, k);
                }
                if !runner.holds(&flat.root, &mut frame) {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        let mut free: Rc<[Value]> = vec![Value::Bool(false); self.free.len()].into();
        let mut env = Vec::new();
        while let Some(digits) = digits.next() {
            // A closure that captured the previous values may still hold them.
            if Rc::get_mut(&mut free).is_none() {
                free = free.iter().cloned().collect();
            }
            let values = Rc::get_mut(&mut free).expect("unique after copying");
            for ((&slot, &sort), &k) in order.iter().zip(&sorts).zip(digits) {
                values[slot] = model.element(sort, k);
            }
            env.clear();
            if !machine.eval(&self.code, &mut env, &free)?.as_bool()? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Free-variable values for a [`CompiledTerm`].
#[derive(Clone)]
pub struct Slots(Rc<[Value<'static>]>);

fn compile(term: &Term, free: &mut Vec<Var>) -> Result<Code, HolError> {
    Ok(match term {
        Term::Free(v) => Code::Free(match free.iter().position(|f| f == v) {
            Some(i) => i,
            None => {
                free.push(v.clone());
                free.len() - 1
            }
        }),
        Term::Bound(k) => Code::Bound(*k),
        Term::Const(c) => constant(c)?,
        Term::Lam(_, body) => Code::Lam(Box::new(compile(body, free)?)),
        Term::App(..) => {
            let (head, args) = term.spine();
            if let Term::Const(c) = head {
                if let Some(h) = Head::of(c)? {
                    if args.len() == h.arity() {
                        return match h {
                            Head::Pi(sort) => Ok(Code::Forall(sort, Box::new(compile_body(args[0], free)?))),
                            Head::Select => Ok(Code::Select(
                                Box::new(compile(args[0], free)?),
                                Box::new(compile_body(args[1], free)?),
                                Box::new(compile(args[2], free)?),
                            )),
                            h => {
                                let args = args.iter().map(|a| compile(a, free)).collect::<Result<_, _>>()?;
                                Ok(Code::Saturated(h, args))
                            }
                        };
                    }
                }
            }
            let mut code = compile(head, free)?;
            for a in args {
                code = Code::App(Box::new(code), Box::new(compile(a, free)?));
            }
            code
        }
    })
}

/// The body of `t` read as a one-argument function, η-expanding when `t` is
/// not an abstraction.
fn compile_body(t: &Term, free: &mut Vec<Var>) -> Result<Code, HolError> {
    match t {
        Term::Lam(_, body) => compile(body, free),
        t => compile(&Term::app(shift(t, 1, 0), Term::Bound(0)), free),
    }
}

fn constant(c: &Constant) -> Result<Code, HolError> {
    Ok(match Head::of(c)? {
        Some(h) => Code::Head(h),
        None => match c {
            Constant::True => Code::Bool(true),
            Constant::False => Code::Bool(false),
            Constant::Named { name, ty } => Code::Other {
                name: name.clone(),
                ty: ty.clone(),
            },
            _ => unreachable!("logical constants have heads"),
        },
    })
}

#[derive(Clone)]
pub(super) enum Value<'c> {
    Bool(bool),
    World(World),
    Individual(Individual),
    Prop(WorldSet),
    Func(Rc<Function<'c>>),
}

pub(super) enum Function<'c> {
    Lambda {
        body: &'c Code,
        env: Vec<Value<'c>>,
        free: Rc<[Value<'c>]>,
    },
    Partial {
        head: &'c Head,
        args: Vec<Value<'c>>,
    },
    Constant(Value<'c>),
    /// Results for each element of the argument sort, in domain order.
    Table {
        arg: Sort,
        results: Vec<Value<'c>>,
    },
}

impl Value<'_> {
    fn as_bool(&self) -> Result<bool, HolError> {
        match self {
            Value::Bool(b) => Ok(*b),
            _ => Err(HolError::Expected("o")),
        }
    }

    fn as_world(&self) -> Result<World, HolError> {
        match self {
            Value::World(w) => Ok(*w),
            _ => Err(HolError::Expected("i")),
        }
    }

    fn as_individual(&self) -> Result<Individual, HolError> {
        match self {
            Value::Individual(d) => Ok(*d),
            _ => Err(HolError::Expected("u")),
        }
    }
}

impl FiniteHenkinModel {
    pub(super) fn size(&self, sort: Sort) -> usize {
        match sort {
            Sort::Bool => 2,
            Sort::World => self.domain_i,
            Sort::Individual => self.domain_u,
            Sort::Prop => self.domain_prop.len(),
        }
    }

    pub(super) fn element(&self, sort: Sort, k: usize) -> Value<'static> {
        match sort {
            Sort::Bool => Value::Bool(k == 1),
            Sort::World => Value::World(World(k)),
            Sort::Individual => Value::Individual(Individual(k)),
            Sort::Prop => Value::Prop(self.domain_prop[k]),
        }
    }

    pub(super) fn default_value(&self, ty: &Type) -> Value<'static> {
        match Sort::of(ty) {
            Some(sort) => self.element(sort, 0),
            None => {
                let Type::Arrow(_, result) = ty else { unreachable!("base types have sorts") };
                Value::Func(Rc::new(Function::Constant(self.default_value(result))))
            }
        }
    }

    /// The internal value of `element` at type `ty`, if it belongs to `D_ty`.
    pub(super) fn value_of(&self, element: &Element, ty: &Type) -> Option<Value<'static>> {
        match (element, ty) {
            (Element::Bool(b), Type::O) => Some(Value::Bool(*b)),
            (Element::World(w), Type::I) => (w.0 < self.domain_i).then_some(Value::World(*w)),
            (Element::Individual(d), Type::U) => (d.0 < self.domain_u).then_some(Value::Individual(*d)),
            (Element::Prop(s), t) if t.is_prop() => self.domain_prop.contains(s).then_some(Value::Prop(*s)),
            (Element::Function(results), Type::Arrow(a, b)) if !ty.is_prop() => {
                let arg = Sort::of(a)?;
                if results.len() != self.size(arg) {
                    return None;
                }
                let results = results.iter().map(|r| self.value_of(r, b)).collect::<Option<Vec<_>>>()?;
                Some(Value::Func(Rc::new(Function::Table { arg, results })))
            }
            _ => None,
        }
    }

    /// The denotation of a predicate constant, falling back to a stored
    /// element and then to the default one.
    pub(super) fn predicate(&self, name: &str, ty: &Type, arity: usize) -> PredicateRef<'_> {
        if let Some(table) = self.predicates.get(name).filter(|t| t.arity() == arity) {
            return PredicateRef::Table(table);
        }
        match self.other.get(&(name.to_owned(), ty.clone())) {
            Some(Element::Prop(s)) => PredicateRef::Set(*s),
            Some(e) => PredicateRef::Tabulated(e),
            None => PredicateRef::Set(self.domain_prop.first().copied().unwrap_or(WorldSet::EMPTY)),
        }
    }
}

pub(super) enum PredicateRef<'m> {
    Table(&'m crate::semantics::PredicateTable),
    /// The same set for every argument tuple.
    Set(WorldSet),
    Tabulated(&'m Element),
}

impl PredicateRef<'_> {
    /// Whether the tuple at `index` (first argument fastest) holds at `w`.
    pub(super) fn holds(&self, index: usize, individuals: usize, w: World) -> bool {
        match self {
            PredicateRef::Table(table) => table.holds(w, index),
            PredicateRef::Set(s) => s.contains(w),
            PredicateRef::Tabulated(e) => {
                let mut e = *e;
                let mut rest = index;
                while let Element::Function(results) = e {
                    e = &results[rest % individuals];
                    rest /= individuals;
                }
                e.as_prop().is_some_and(|s| s.contains(w))
            }
        }
    }
}

struct Machine<'m> {
    model: &'m FiniteHenkinModel,
}

impl<'m> Machine<'m> {
    fn eval<'c>(&self, code: &'c Code, env: &mut Vec<Value<'c>>, free: &Rc<[Value<'c>]>) -> Result<Value<'c>, HolError> {
        match code {
            Code::Free(i) => Ok(free[*i].clone()),
            Code::Bound(k) => Ok(env[env.len() - 1 - k].clone()),
            Code::Bool(b) => Ok(Value::Bool(*b)),
            Code::Other { name, ty } => Ok(match self.model.other.get(&(name.clone(), ty.clone())) {
                Some(e) => self.model.value_of(e, ty).expect("checked when set"),
                None => self.model.default_value(ty),
            }),
            Code::Head(h) => Ok(Value::Func(Rc::new(Function::Partial {
                head: h,
                args: Vec::new(),
            }))),
            Code::Lam(body) => Ok(Value::Func(Rc::new(Function::Lambda {
                body,
                env: env.clone(),
                free: free.clone(),
            }))),
            Code::App(f, a) => {
                let f = self.eval(f, env, free)?;
                let a = self.eval(a, env, free)?;
                self.apply(f, a)
            }
            Code::Forall(sort, body) => {
                for k in 0..self.model.size(*sort) {
                    env.push(self.model.element(*sort, k));
                    let holds = self.eval(body, env, free);
                    env.pop();
                    if !holds?.as_bool()? {
                        return Ok(Value::Bool(false));
                    }
                }
                Ok(Value::Bool(true))
            }
            Code::Saturated(head, args) => self.saturated(head, args, env, free).map(Value::Bool),
            Code::Select(s, body, t) => {
                let s = self.eval(s, env, free)?.as_world()?;
                let mut q = WorldSet::EMPTY;
                for w in 0..self.model.domain_i {
                    env.push(Value::World(World(w)));
                    let holds = self.eval(body, env, free);
                    env.pop();
                    if holds?.as_bool()? {
                        q = q.with(World(w));
                    }
                }
                let t = self.eval(t, env, free)?.as_world()?;
                Ok(Value::Bool(self.model.interp_f(s, q, t)))
            }
        }
    }

    fn saturated<'c>(
        &self,
        head: &Head,
        args: &'c [Code],
        env: &mut Vec<Value<'c>>,
        free: &Rc<[Value<'c>]>,
    ) -> Result<bool, HolError> {
        let mut arg = |i: usize| self.eval(&args[i], env, free);
        Ok(match head {
            Head::Not => !arg(0)?.as_bool()?,
            // Short-circuiting keeps selection reads to those that matter;
            // implication looks at its consequent first.
            Head::Or => arg(0)?.as_bool()? || arg(1)?.as_bool()?,
            Head::And => arg(0)?.as_bool()? && arg(1)?.as_bool()?,
            Head::Imp => arg(1)?.as_bool()? || !arg(0)?.as_bool()?,
            Head::Pi(sort) => {
                let f = arg(0)?;
                self.forall(*sort, f)?
            }
            Head::Select => {
                let s = arg(0)?.as_world()?;
                let q = arg(1)?;
                let t = arg(2)?.as_world()?;
                let q = self.to_set(q)?;
                self.model.interp_f(s, q, t)
            }
            Head::Pred { name, ty, arity } => self.predicate(name, ty, *arity, arg)?,
        })
    }

    /// Predicate application; `arg(i)` produces the i-th argument, the world
    /// last.
    fn predicate<'c>(
        &self,
        name: &str,
        ty: &Type,
        arity: usize,
        mut arg: impl FnMut(usize) -> Result<Value<'c>, HolError>,
    ) -> Result<bool, HolError> {
        let w = arg(arity)?.as_world()?;
        let mut index = 0;
        for i in (0..arity).rev() {
            index = index * self.model.domain_u + arg(i)?.as_individual()?.0;
        }
        Ok(self.model.predicate(name, ty, arity).holds(index, self.model.domain_u, w))
    }

    fn forall<'c>(&self, sort: Sort, f: Value<'c>) -> Result<bool, HolError> {
        for k in 0..self.model.size(sort) {
            if !self.apply(f.clone(), self.model.element(sort, k))?.as_bool()? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The worlds at which a value of type `i → o` is true.
    fn to_set<'c>(&self, value: Value<'c>) -> Result<WorldSet, HolError> {
        match value {
            Value::Prop(s) => Ok(s),
            f @ Value::Func(_) => {
                let mut set = WorldSet::EMPTY;
                for w in 0..self.model.domain_i {
                    if self.apply(f.clone(), Value::World(World(w)))?.as_bool()? {
                        set = set.with(World(w));
                    }
                }
                Ok(set)
            }
            _ => Err(HolError::Expected("i > o")),
        }
    }

    fn index_of(&self, sort: Sort, value: Value) -> Result<usize, HolError> {
        Ok(match sort {
            Sort::Bool => value.as_bool()? as usize,
            Sort::World => value.as_world()?.0,
            Sort::Individual => value.as_individual()?.0,
            Sort::Prop => {
                let set = self.to_set(value)?;
                self.model
                    .domain_prop
                    .iter()
                    .position(|&s| s == set)
                    .ok_or(HolError::OutsideDomain(set))?
            }
        })
    }

    fn apply<'c>(&self, f: Value<'c>, arg: Value<'c>) -> Result<Value<'c>, HolError> {
        let func = match f {
            Value::Prop(set) => return Ok(Value::Bool(set.contains(arg.as_world()?))),
            Value::Func(func) => func,
            _ => return Err(HolError::Expected("a function")),
        };
        match &*func {
            Function::Lambda { body, env, free } => {
                let mut env = env.clone();
                env.push(arg);
                self.eval(body, &mut env, free)
            }
            Function::Constant(v) => Ok(v.clone()),
            Function::Table { arg: sort, results } => Ok(results[self.index_of(*sort, arg)?].clone()),
            Function::Partial { head, args } => {
                let mut args = args.clone();
                args.push(arg);
                if args.len() < head.arity() {
                    return Ok(Value::Func(Rc::new(Function::Partial { head, args })));
                }
                let value = match head {
                    Head::Not => !args[0].as_bool()?,
                    Head::Or => args[0].as_bool()? || args[1].as_bool()?,
                    Head::And => args[0].as_bool()? && args[1].as_bool()?,
                    Head::Imp => !args[0].as_bool()? || args[1].as_bool()?,
                    Head::Pi(sort) => self.forall(*sort, args.pop().expect("one argument"))?,
                    Head::Select => {
                        let s = args[0].as_world()?;
                        let t = args[2].as_world()?;
                        let q = self.to_set(args[1].clone())?;
                        self.model.interp_f(s, q, t)
                    }
                    Head::Pred { name, ty, arity } => self.predicate(name, ty, *arity, |i| Ok(args[i].clone()))?,
                };
                Ok(Value::Bool(value))
            }
        }
    }

    /// The element denoted by `value` at type `ty`, tabulating functions.
    fn reify<'c>(&self, value: Value<'c>, ty: &Type) -> Result<Element, HolError> {
        Ok(match ty {
            Type::O => Element::Bool(value.as_bool()?),
            Type::I => Element::World(value.as_world()?),
            Type::U => Element::Individual(value.as_individual()?),
            t if t.is_prop() => Element::Prop(self.to_set(value)?),
            Type::Arrow(a, b) => {
                let sort = Sort::of(a).ok_or_else(|| HolError::UnsupportedDomain((**a).clone()))?;
                let results = (0..self.model.size(sort))
                    .map(|k| {
                        let r = self.apply(value.clone(), self.model.element(sort, k))?;
                        self.reify(r, b)
                    })
                    .collect::<Result<_, _>>()?;
                Element::Function(results)
            }
        })
    }
}

impl FiniteHenkinModel {
    /// The fixed element chosen for an unconstrained denotation: `F`, the
    /// first world, the first individual, the first member of `D_{i→o}`, or
    /// the constant function onto the default of the result type.
    pub fn default_element(&self, ty: &Type) -> Result<Element, HolError> {
        Machine { model: self }.reify(self.default_value(ty), ty)
    }
}
