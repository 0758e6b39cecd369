use std::collections::BTreeMap;

use thiserror::Error;

use super::model::{Individual, PredicateTable, SelectionModel, World, WorldSet};
use crate::syntax::{free_vars, Formula, FreeVars};
use crate::util::Odometer;

/// `g = (g_iv, g_pv)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QclAssignment {
    individuals: BTreeMap<String, Individual>,
    props: BTreeMap<String, WorldSet>,
}

impl QclAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_individual(mut self, var: &str, d: Individual) -> Self {
        self.set_individual(var, d);
        self
    }

    pub fn with_prop(mut self, var: &str, set: WorldSet) -> Self {
        self.set_prop(var, set);
        self
    }

    /// `[d/X]g`.
    pub fn set_individual(&mut self, var: &str, d: Individual) {
        match self.individuals.get_mut(var) {
            Some(slot) => *slot = d,
            None => {
                self.individuals.insert(var.to_owned(), d);
            }
        }
    }

    /// `[p/P]g`.
    pub fn set_prop(&mut self, var: &str, set: WorldSet) {
        match self.props.get_mut(var) {
            Some(slot) => *slot = set,
            None => {
                self.props.insert(var.to_owned(), set);
            }
        }
    }

    pub fn individual(&self, var: &str) -> Option<Individual> {
        self.individuals.get(var).copied()
    }

    pub fn prop(&self, var: &str) -> Option<WorldSet> {
        self.props.get(var).copied()
    }

    pub fn individuals(&self) -> impl Iterator<Item = (&str, Individual)> {
        self.individuals.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn props(&self) -> impl Iterator<Item = (&str, WorldSet)> {
        self.props.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Keeps only the bindings of the given variables.
    pub fn restrict(&self, vars: &FreeVars) -> QclAssignment {
        QclAssignment {
            individuals: self
                .individuals
                .iter()
                .filter(|(k, _)| vars.individuals.contains(*k))
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
            props: self
                .props
                .iter()
                .filter(|(k, _)| vars.props.contains(*k))
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("individual variable `{0}` has no value")]
    UnboundIndividual(String),
    #[error("propositional variable `{0}` has no value")]
    UnboundProp(String),
    #[error("world {0} is not in the model")]
    WorldOutOfRange(World),
    #[error("`{var}` is assigned {value}, which is not in the domain")]
    IndividualOutOfRange { var: String, value: Individual },
    #[error("`{var}` is assigned {value}, which is not a member of Q")]
    PropNotInDomain { var: String, value: WorldSet },
    #[error("predicate `{0}` is not interpreted in the model")]
    UndeclaredPredicate(String),
    #[error("predicate `{pred}` has arity {expected}, applied to {found} argument(s)")]
    ArityMismatch {
        pred: String,
        expected: usize,
        found: usize,
    },
}

/// A formula with its variables resolved to frame slots, ready for repeated
/// evaluation. Free variables take the first slots (individuals, then
/// propositional variables, each sorted by name); every binder gets a slot
/// of its own after them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreparedFormula {
    root: Node,
    individuals: Vec<String>,
    props: Vec<String>,
    predicates: Vec<(String, usize)>,
    frame: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Node {
    Prop(usize),
    Atom { pred: usize, args: Vec<usize> },
    Not(Box<Node>),
    Or(Box<Node>, Box<Node>),
    Cond(Box<Node>, Box<Node>),
    ForallInd(usize, Box<Node>),
    ForallProp(usize, Box<Node>),
    True,
    False,
    And(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
    ExistsInd(usize, Box<Node>),
    ExistsProp(usize, Box<Node>),
}

struct Resolver<'a> {
    /// Innermost last.
    individuals: Vec<(&'a str, usize)>,
    props: Vec<(&'a str, usize)>,
    predicates: Vec<(String, usize)>,
    depth: usize,
    frame: usize,
}

impl<'a> Resolver<'a> {
    fn lookup(scope: &[(&str, usize)], var: &str) -> usize {
        scope
            .iter()
            .rev()
            .find(|(name, _)| *name == var)
            .map(|(_, slot)| *slot)
            .expect("free variables are bound at the root")
    }

    fn bind(&mut self, individual: bool, var: &'a str, body: &'a Formula) -> (usize, Box<Node>) {
        let slot = self.depth;
        self.depth += 1;
        self.frame = self.frame.max(self.depth);
        let scope = if individual { &mut self.individuals } else { &mut self.props };
        scope.push((var, slot));
        let body = self.node(body);
        let scope = if individual { &mut self.individuals } else { &mut self.props };
        scope.pop();
        self.depth -= 1;
        (slot, Box::new(body))
    }

    fn pair(&mut self, l: &'a Formula, r: &'a Formula) -> (Box<Node>, Box<Node>) {
        (Box::new(self.node(l)), Box::new(self.node(r)))
    }

    fn node(&mut self, formula: &'a Formula) -> Node {
        match formula {
            Formula::PropVar(p) => Node::Prop(Self::lookup(&self.props, p)),
            Formula::Atom { pred, args } => {
                let key = (pred.clone(), args.len());
                let pred = match self.predicates.iter().position(|p| *p == key) {
                    Some(i) => i,
                    None => {
                        self.predicates.push(key);
                        self.predicates.len() - 1
                    }
                };
                let args = args.iter().map(|x| Self::lookup(&self.individuals, x)).collect();
                Node::Atom { pred, args }
            }
            Formula::Not(body) => Node::Not(Box::new(self.node(body))),
            Formula::Or(l, r) => {
                let (l, r) = self.pair(l, r);
                Node::Or(l, r)
            }
            Formula::Cond(l, r) => {
                let (l, r) = self.pair(l, r);
                Node::Cond(l, r)
            }
            Formula::And(l, r) => {
                let (l, r) = self.pair(l, r);
                Node::And(l, r)
            }
            Formula::Implies(l, r) => {
                let (l, r) = self.pair(l, r);
                Node::Implies(l, r)
            }
            Formula::Iff(l, r) => {
                let (l, r) = self.pair(l, r);
                Node::Iff(l, r)
            }
            Formula::ForallInd(x, body) => {
                let (slot, body) = self.bind(true, x, body);
                Node::ForallInd(slot, body)
            }
            Formula::ExistsInd(x, body) => {
                let (slot, body) = self.bind(true, x, body);
                Node::ExistsInd(slot, body)
            }
            Formula::ForallProp(p, body) => {
                let (slot, body) = self.bind(false, p, body);
                Node::ForallProp(slot, body)
            }
            Formula::ExistsProp(p, body) => {
                let (slot, body) = self.bind(false, p, body);
                Node::ExistsProp(slot, body)
            }
            Formula::True => Node::True,
            Formula::False => Node::False,
        }
    }
}

impl PreparedFormula {
    pub fn new(formula: &Formula) -> Self {
        let FreeVars { individuals, props } = free_vars(formula);
        let individuals: Vec<String> = individuals.into_iter().collect();
        let props: Vec<String> = props.into_iter().collect();
        let free = individuals.len() + props.len();
        let mut resolver = Resolver {
            individuals: individuals.iter().enumerate().map(|(i, x)| (x.as_str(), i)).collect(),
            props: props
                .iter()
                .enumerate()
                .map(|(i, p)| (p.as_str(), individuals.len() + i))
                .collect(),
            predicates: Vec::new(),
            depth: free,
            frame: free,
        };
        let root = resolver.node(formula);
        let (predicates, frame) = (resolver.predicates, resolver.frame);
        PreparedFormula {
            root,
            individuals,
            props,
            predicates,
            frame,
        }
    }

    fn run<'m>(&self, model: &'m SelectionModel) -> Result<Run<'m>, EvalError> {
        let tables = self
            .predicates
            .iter()
            .map(|(pred, arity)| {
                let table = model
                    .interpretation()
                    .get(pred)
                    .ok_or_else(|| EvalError::UndeclaredPredicate(pred.clone()))?;
                if table.arity() != *arity {
                    return Err(EvalError::ArityMismatch {
                        pred: pred.clone(),
                        expected: table.arity(),
                        found: *arity,
                    });
                }
                Ok(table)
            })
            .collect::<Result<_, _>>()?;
        Ok(Run { model, tables })
    }

    /// A frame holding `g`'s values for the free variables.
    fn frame(&self, model: &SelectionModel, g: &QclAssignment) -> Result<Vec<u64>, EvalError> {
        let mut frame = vec![0; self.frame];
        for (slot, x) in self.individuals.iter().enumerate() {
            let value = g.individual(x).ok_or_else(|| EvalError::UnboundIndividual(x.clone()))?;
            if value.0 >= model.individuals() {
                return Err(EvalError::IndividualOutOfRange { var: x.clone(), value });
            }
            frame[slot] = value.0 as u64;
        }
        for (k, p) in self.props.iter().enumerate() {
            let value = g.prop(p).ok_or_else(|| EvalError::UnboundProp(p.clone()))?;
            if !model.is_prop(value) {
                return Err(EvalError::PropNotInDomain { var: p.clone(), value });
            }
            frame[self.individuals.len() + k] = value.0;
        }
        Ok(frame)
    }

    /// `M, g, s ⊨ φ`.
    pub fn holds(&self, model: &SelectionModel, g: &QclAssignment, s: World) -> Result<bool, EvalError> {
        if s.0 >= model.worlds() {
            return Err(EvalError::WorldOutOfRange(s));
        }
        let run = self.run(model)?;
        let mut frame = self.frame(model, g)?;
        Ok(run.holds(&self.root, &mut frame, s))
    }

    /// `[φ]` under `g`.
    pub fn proof_set(&self, model: &SelectionModel, g: &QclAssignment) -> Result<WorldSet, EvalError> {
        let run = self.run(model)?;
        let mut frame = self.frame(model, g)?;
        Ok(run.proof_set(&self.root, &mut frame))
    }

    /// First (assignment, world) at which φ fails. Assignments are visited
    /// in the order of [`assignments`].
    pub fn counterexample(&self, model: &SelectionModel) -> Result<Option<(QclAssignment, World)>, EvalError> {
        let run = self.run(model)?;
        let split = self.individuals.len();
        let radices = std::iter::repeat_n(model.individuals(), split)
            .chain(std::iter::repeat_n(model.props().len(), self.props.len()))
            .collect();
        let mut digits = Odometer::new(radices);
        let mut frame = vec![0; self.frame];
        while let Some(digits) = digits.next() {
            for (slot, &d) in digits.iter().enumerate() {
                frame[slot] = if slot < split { d as u64 } else { model.props()[d].0 };
            }
            for s in model.world_iter() {
                if !run.holds(&self.root, &mut frame, s) {
                    let mut g = QclAssignment::new();
                    for (x, &d) in self.individuals.iter().zip(digits) {
                        g.set_individual(x, Individual(d));
                    }
                    for (p, &k) in self.props.iter().zip(&digits[split..]) {
                        g.set_prop(p, model.props()[k]);
                    }
                    return Ok(Some((g, s)));
                }
            }
        }
        Ok(None)
    }

    /// `M ⊨ φ`.
    pub fn valid_in(&self, model: &SelectionModel) -> Result<bool, EvalError> {
        Ok(self.counterexample(model)?.is_none())
    }
}

/// A prepared formula's predicates looked up in one model.
struct Run<'m> {
    model: &'m SelectionModel,
    tables: Vec<&'m PredicateTable>,
}

impl Run<'_> {
    fn holds(&self, node: &Node, frame: &mut [u64], s: World) -> bool {
        match node {
            Node::Prop(slot) => frame[*slot] >> s.0 & 1 == 1,
            Node::Atom { pred, args } => {
                let individuals = self.model.individuals();
                let index = args.iter().rev().fold(0, |acc, a| acc * individuals + frame[*a] as usize);
                self.tables[*pred].holds(s, index)
            }
            Node::Not(body) => !self.holds(body, frame, s),
            Node::Or(l, r) => self.holds(l, frame, s) || self.holds(r, frame, s),
            Node::Cond(antecedent, consequent) => {
                // `f(s, A) ⊆ [ψ]`; membership is only read where ψ fails.
                let proof_set = self.proof_set(antecedent, frame);
                for t in self.model.world_iter() {
                    if !self.holds(consequent, frame, t) && self.model.selects(s, proof_set, t) {
                        return false;
                    }
                }
                true
            }
            Node::ForallInd(slot, body) => (0..self.model.individuals()).all(|d| {
                frame[*slot] = d as u64;
                self.holds(body, frame, s)
            }),
            Node::ForallProp(slot, body) => self.model.props().iter().all(|q| {
                frame[*slot] = q.0;
                self.holds(body, frame, s)
            }),
            Node::True => true,
            Node::False => false,
            Node::And(l, r) => self.holds(l, frame, s) && self.holds(r, frame, s),
            Node::Implies(l, r) => !self.holds(l, frame, s) || self.holds(r, frame, s),
            Node::Iff(l, r) => self.holds(l, frame, s) == self.holds(r, frame, s),
            Node::ExistsInd(slot, body) => (0..self.model.individuals()).any(|d| {
                frame[*slot] = d as u64;
                self.holds(body, frame, s)
            }),
            Node::ExistsProp(slot, body) => self.model.props().iter().any(|q| {
                frame[*slot] = q.0;
                self.holds(body, frame, s)
            }),
        }
    }

    fn proof_set(&self, node: &Node, frame: &mut [u64]) -> WorldSet {
        let mut set = WorldSet::EMPTY;
        for t in self.model.world_iter() {
            if self.holds(node, frame, t) {
                set = set.with(t);
            }
        }
        set
    }
}

/// `M, g, s ⊨ φ`.
///
/// Sugar constructors are evaluated by their classical truth conditions, so
/// the result agrees with evaluating the desugared formula. Every free
/// variable of φ must be bound by `g` and every predicate declared, whether
/// or not evaluation reaches it.
pub fn eval_qcl(
    model: &SelectionModel,
    g: &QclAssignment,
    s: World,
    formula: &Formula,
) -> Result<bool, EvalError> {
    PreparedFormula::new(formula).holds(model, g, s)
}

/// `[φ] = {u | M, g, u ⊨ φ}`.
pub fn proof_set(model: &SelectionModel, g: &QclAssignment, formula: &Formula) -> Result<WorldSet, EvalError> {
    PreparedFormula::new(formula).proof_set(model, g)
}

/// Every assignment of the given variables: individuals over `D`,
/// propositional variables over `Q`. Deterministic order; one empty
/// assignment when there are no variables.
pub fn assignments<'m>(model: &'m SelectionModel, vars: &FreeVars) -> impl Iterator<Item = QclAssignment> + 'm {
    let mut walk = AssignmentWalk::new(model, vars);
    std::iter::from_fn(move || walk.next().cloned())
}

/// The assignments of [`assignments`], updated in place.
struct AssignmentWalk<'m> {
    model: &'m SelectionModel,
    individuals: Vec<String>,
    props: Vec<String>,
    digits: Odometer,
    current: QclAssignment,
}

impl<'m> AssignmentWalk<'m> {
    fn new(model: &'m SelectionModel, vars: &FreeVars) -> Self {
        let individuals: Vec<String> = vars.individuals.iter().cloned().collect();
        let props: Vec<String> = vars.props.iter().cloned().collect();
        let radices = std::iter::repeat_n(model.individuals(), individuals.len())
            .chain(std::iter::repeat_n(model.props().len(), props.len()))
            .collect();
        AssignmentWalk {
            model,
            individuals,
            props,
            digits: Odometer::new(radices),
            current: QclAssignment::new(),
        }
    }

    fn next(&mut self) -> Option<&QclAssignment> {
        let digits = self.digits.next()?;
        for (x, &d) in self.individuals.iter().zip(digits) {
            self.current.set_individual(x, Individual(d));
        }
        for (p, &k) in self.props.iter().zip(&digits[self.individuals.len()..]) {
            self.current.set_prop(p, self.model.props()[k]);
        }
        Some(&self.current)
    }
}

/// First (assignment, world) at which φ fails, over the free variables of φ.
pub fn find_counterexample(
    model: &SelectionModel,
    formula: &Formula,
) -> Result<Option<(QclAssignment, World)>, EvalError> {
    PreparedFormula::new(formula).counterexample(model)
}

/// `M ⊨ φ`: φ holds at every world under every assignment of its free variables.
pub fn model_valid(model: &SelectionModel, formula: &Formula) -> Result<bool, EvalError> {
    PreparedFormula::new(formula).valid_in(model)
}

/// Which assignments [`check_model_property`] ranges over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AssignmentRange {
    /// All assignments of each formula's free variables over `D` and `Q`.
    All,
    /// Exactly these assignments.
    Given(Vec<QclAssignment>),
}

/// Whether every proof set of every corpus formula lies in `Q`.
pub fn check_model_property(
    model: &SelectionModel,
    corpus: &[Formula],
    range: &AssignmentRange,
) -> Result<bool, EvalError> {
    for formula in corpus {
        let check = |g: &QclAssignment| -> Result<bool, EvalError> {
            Ok(model.is_prop(proof_set(model, g, formula)?))
        };
        let ok = match range {
            AssignmentRange::All => {
                let mut ok = true;
                for g in assignments(model, &free_vars(formula)) {
                    if !check(&g)? {
                        ok = false;
                        break;
                    }
                }
                ok
            }
            AssignmentRange::Given(gs) => {
                let mut ok = true;
                for g in gs {
                    if !check(g)? {
                        ok = false;
                        break;
                    }
                }
                ok
            }
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}
