//! A faster evaluator for formulas whose binders are all consumed by `Π` or
//! by the set argument of `f`, which covers every embedded formula. Values
//! are plain words in one frame: free variables first, then one slot per
//! enclosing binder.

use super::eval::{Code, Head, PredicateRef, Sort};
use super::FiniteHenkinModel;
use crate::kernel::{Type, Var};
use crate::semantics::{World, WorldSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(super) enum Flat {
    Const(bool),
    /// A free variable of type `o`.
    Truth(usize),
    Not(Box<Flat>),
    Or(Box<Flat>, Box<Flat>),
    And(Box<Flat>, Box<Flat>),
    Imp(Box<Flat>, Box<Flat>),
    /// Binds `slot` to each element of the sort.
    Forall { sort: Sort, slot: usize, body: Box<Flat> },
    /// `f s {slot | body} t`.
    Select { s: usize, slot: usize, body: Box<Flat>, t: usize },
    /// `p w` for a `p : i → o` in a slot.
    Member { prop: usize, world: usize },
    /// Predicate number `pred` applied to individuals, then a world.
    Pred { pred: usize, args: Vec<usize>, world: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(super) struct FlatTerm {
    pub(super) root: Flat,
    pub(super) frame: usize,
    pub(super) predicates: Vec<(String, Type, usize)>,
}

impl FlatTerm {
    /// `None` when the term needs the general evaluator.
    pub(super) fn new(code: &Code, free: &[Var]) -> Option<FlatTerm> {
        let mut builder = Builder {
            free: free.iter().map(|v| Sort::of(&v.ty)).collect(),
            binders: Vec::new(),
            frame: free.len(),
            predicates: Vec::new(),
        };
        let root = builder.formula(code)?;
        Some(FlatTerm {
            root,
            frame: builder.frame,
            predicates: builder.predicates,
        })
    }

    pub(super) fn resolve<'a>(&self, model: &'a FiniteHenkinModel) -> Vec<PredicateRef<'a>> {
        self.predicates
            .iter()
            .map(|(name, ty, arity)| model.predicate(name, ty, *arity))
            .collect()
    }

    pub(super) fn runner<'a>(
        &self,
        model: &'a FiniteHenkinModel,
        predicates: &'a [PredicateRef<'a>],
    ) -> Runner<'a> {
        Runner { model, predicates }
    }
}

struct Builder {
    free: Vec<Option<Sort>>,
    /// Sort and slot of each enclosing binder, innermost last.
    binders: Vec<(Sort, usize)>,
    frame: usize,
    predicates: Vec<(String, Type, usize)>,
}

impl Builder {
    fn slot(&self, code: &Code, want: Sort) -> Option<usize> {
        let (sort, slot) = match code {
            Code::Free(i) => (self.free[*i]?, *i),
            Code::Bound(k) => *self.binders.get(self.binders.len().checked_sub(k + 1)?)?,
            _ => return None,
        };
        (sort == want).then_some(slot)
    }

    fn bind(&mut self, sort: Sort, body: &Code) -> Option<(usize, Flat)> {
        let slot = self.free.len() + self.binders.len();
        self.frame = self.frame.max(slot + 1);
        self.binders.push((sort, slot));
        let body = self.formula(body);
        self.binders.pop();
        Some((slot, body?))
    }

    fn formula(&mut self, code: &Code) -> Option<Flat> {
        Some(match code {
            Code::Bool(b) => Flat::Const(*b),
            Code::Free(_) => Flat::Truth(self.slot(code, Sort::Bool)?),
            Code::Forall(sort, body) => {
                let (slot, body) = self.bind(*sort, body)?;
                Flat::Forall { sort: *sort, slot, body: Box::new(body) }
            }
            Code::Select(s, body, t) => {
                let s = self.slot(s, Sort::World)?;
                let t = self.slot(t, Sort::World)?;
                let (slot, body) = self.bind(Sort::World, body)?;
                Flat::Select { s, slot, body: Box::new(body), t }
            }
            Code::App(p, w) => Flat::Member {
                prop: self.slot(p, Sort::Prop)?,
                world: self.slot(w, Sort::World)?,
            },
            Code::Saturated(head, args) => match head {
                Head::Not => Flat::Not(Box::new(self.formula(&args[0])?)),
                Head::Or => Flat::Or(Box::new(self.formula(&args[0])?), Box::new(self.formula(&args[1])?)),
                Head::And => Flat::And(Box::new(self.formula(&args[0])?), Box::new(self.formula(&args[1])?)),
                Head::Imp => Flat::Imp(Box::new(self.formula(&args[0])?), Box::new(self.formula(&args[1])?)),
                Head::Pred { name, ty, arity } => {
                    let key = (name.clone(), ty.clone(), *arity);
                    let pred = match self.predicates.iter().position(|p| *p == key) {
                        Some(i) => i,
                        None => {
                            self.predicates.push(key);
                            self.predicates.len() - 1
                        }
                    };
                    Flat::Pred {
                        pred,
                        args: args[..*arity]
                            .iter()
                            .map(|a| self.slot(a, Sort::Individual))
                            .collect::<Option<_>>()?,
                        world: self.slot(&args[*arity], Sort::World)?,
                    }
                }
                Head::Pi(_) | Head::Select => return None,
            },
            _ => return None,
        })
    }
}

pub(super) struct Runner<'a> {
    model: &'a FiniteHenkinModel,
    predicates: &'a [PredicateRef<'a>],
}

impl Runner<'_> {
    /// Same short-circuit order as the general evaluator.
    pub(super) fn holds(&self, node: &Flat, frame: &mut [u64]) -> bool {
        match node {
            Flat::Const(b) => *b,
            Flat::Truth(slot) => frame[*slot] != 0,
            Flat::Not(a) => !self.holds(a, frame),
            Flat::Or(a, b) => self.holds(a, frame) || self.holds(b, frame),
            Flat::And(a, b) => self.holds(a, frame) && self.holds(b, frame),
            Flat::Imp(a, b) => self.holds(b, frame) || !self.holds(a, frame),
            Flat::Forall { sort, slot, body } => {
                for k in 0..self.model.size(*sort) {
                    frame[*slot] = self.word(*sort, k);
                    if !self.holds(body, frame) {
                        return false;
                    }
                }
                true
            }
            Flat::Select { s, slot, body, t } => {
                let mut set = WorldSet::EMPTY;
                for w in 0..self.model.domain_i {
                    frame[*slot] = w as u64;
                    if self.holds(body, frame) {
                        set = set.with(World(w));
                    }
                }
                self.model
                    .interp_f(World(frame[*s] as usize), set, World(frame[*t] as usize))
            }
            Flat::Member { prop, world } => frame[*prop] >> frame[*world] & 1 == 1,
            Flat::Pred { pred, args, world } => {
                let w = World(frame[*world] as usize);
                let index = args
                    .iter()
                    .rev()
                    .fold(0, |acc, a| acc * self.model.domain_u + frame[*a] as usize);
                self.predicates[*pred].holds(index, self.model.domain_u, w)
            }
        }
    }

    pub(super) fn word(&self, sort: Sort, k: usize) -> u64 {
        match sort {
            Sort::Prop => self.model.domain_prop[k].0,
            _ => k as u64,
        }
    }
}

/// The frame word for an already checked value, if it is not a function.
pub(super) fn word_of(value: &super::eval::Value) -> Option<u64> {
    use super::eval::Value;
    match value {
        Value::Bool(b) => Some(*b as u64),
        Value::World(w) => Some(w.0 as u64),
        Value::Individual(d) => Some(d.0 as u64),
        Value::Prop(s) => Some(s.0),
        Value::Func(_) => None,
    }
}
