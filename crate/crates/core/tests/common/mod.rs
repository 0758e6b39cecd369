//! Seeded generators and the laws the property suites and the acceptance
//! target both check. A law takes a case seed and reports a failure as text.
#![allow(dead_code)]

use qcl2hol::embedding::{predicate_type, selection_type, SELECTION};
use qcl2hol::henkin::{build_henkin, eval_hol, eval_hol_bool, Element, FiniteHenkinModel, HolAssignment, HolError};
use qcl2hol::kernel::{
    alpha_equal, contract_nth, normalize, normalize_by_steps, redex_count, substitute, Term, Type, Var,
};
use qcl2hol::semantics::{Individual, SelectionModel, World, WorldSet};
use qcl2hol::syntax::{Formula, Signature};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Law = fn(u64) -> Result<(), String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Runs `law` on seeds `base, base+1, …` and returns the first failure.
pub fn run_law(law: Law, base: u64, cases: u64) -> Result<u64, String> {
    for seed in base..base + cases {
        law(seed).map_err(|e| format!("seed {seed}: {e}"))?;
    }
    Ok(cases)
}

fn prop() -> Type {
    Type::prop()
}

/// Free variables every generated term may use.
pub fn context() -> Vec<Var> {
    vec![
        Var::new("p", prop()),
        Var::new("q", prop()),
        Var::new("w", Type::I),
        Var::new("v", Type::I),
        Var::new("x", Type::U),
        Var::new("y", Type::U),
        Var::new("a", Type::O),
        Var::new("r", Type::fun(Type::U, prop())),
    ]
}

pub fn constants() -> Vec<Term> {
    vec![
        Term::constant(SELECTION, selection_type()),
        Term::constant("b", predicate_type(1)),
        Term::constant("c", predicate_type(2)),
    ]
}

/// Types a λ may bind and an argument may have.
pub fn argument_types() -> [Type; 4] {
    [Type::O, Type::I, Type::U, prop()]
}

/// Types the quantifiers range over.
pub fn quantified_types() -> [Type; 3] {
    [Type::I, Type::U, prop()]
}

/// Type-directed random terms with β- and η-redexes.
pub struct TermGen {
    pub rng: ChaCha8Rng,
    scope: Vec<Var>,
}

impl TermGen {
    pub fn new(rng: ChaCha8Rng) -> Self {
        TermGen { rng, scope: context() }
    }

    /// A binder drawn from a small pool that overlaps the free variables,
    /// so that shadowing and capture situations come up often.
    fn binder(&mut self, ty: &Type) -> Var {
        let pool: &[&str] = match ty {
            Type::O => &["a", "B"],
            Type::I => &["w", "v", "W"],
            Type::U => &["x", "y", "Z"],
            _ => &["p", "q", "P"],
        };
        Var::new(*pool.choose(&mut self.rng).unwrap(), ty.clone())
    }

    fn within(&mut self, var: &Var, build: impl FnOnce(&mut Self) -> Term) -> Term {
        self.scope.push(var.clone());
        let body = build(self);
        self.scope.pop();
        body
    }

    fn lam(&mut self, ty: &Type, body_ty: &Type, depth: u32) -> Term {
        let var = self.binder(ty);
        let body = self.within(&var, |g| g.term(body_ty, depth));
        Term::lam(&var, body)
    }

    fn atoms(&self, ty: &Type) -> Vec<Term> {
        self.scope
            .iter()
            .filter(|v| v.ty == *ty)
            .map(|v| Term::Free(v.clone()))
            .chain(constants().into_iter().filter(|c| c.type_of().ok().as_ref() == Some(ty)))
            .collect()
    }

    pub fn leaf(&mut self, ty: &Type) -> Term {
        let atoms = self.atoms(ty);
        if let Some(t) = atoms.choose(&mut self.rng) {
            return t.clone();
        }
        match ty {
            Type::O => {
                if self.rng.gen() {
                    Term::truth()
                } else {
                    Term::falsity()
                }
            }
            Type::Arrow(a, b) => self.lam(a, b, 0),
            _ => unreachable!("the context has a variable of every base type"),
        }
    }

    pub fn term(&mut self, ty: &Type, depth: u32) -> Term {
        if depth == 0 {
            return self.leaf(ty);
        }
        let d = depth - 1;
        match self.rng.gen_range(0..12) {
            0 | 1 => self.leaf(ty),
            2 => {
                let arg_ty = argument_types().choose(&mut self.rng).unwrap().clone();
                let f = self.lam(&arg_ty, ty, d);
                let arg = self.term(&arg_ty, d);
                Term::app(f, arg)
            }
            3 | 4 => {
                let arg_ty = argument_types().choose(&mut self.rng).unwrap().clone();
                let f = self.term(&Type::fun(arg_ty.clone(), ty.clone()), d);
                let arg = self.term(&arg_ty, d);
                Term::app(f, arg)
            }
            _ => match ty {
                Type::O => match self.rng.gen_range(0..6) {
                    0 => Term::not(self.term(&Type::O, d)),
                    1 => Term::or(self.term(&Type::O, d), self.term(&Type::O, d)),
                    2 => Term::and(self.term(&Type::O, d), self.term(&Type::O, d)),
                    3 => Term::imp(self.term(&Type::O, d), self.term(&Type::O, d)),
                    _ => {
                        let q = quantified_types().choose(&mut self.rng).unwrap().clone();
                        let var = self.binder(&q);
                        let body = self.within(&var, |g| g.term(&Type::O, d));
                        Term::forall(&var, body)
                    }
                },
                Type::Arrow(a, b) => {
                    if self.rng.gen_range(0..4) == 0 {
                        // An η-redex λX. t X.
                        let var = self.binder(a);
                        let inner = self.term(ty, d);
                        let applied = self.within(&var, |_| Term::app(inner, Term::Free(var.clone())));
                        Term::lam(&var, applied)
                    } else {
                        self.lam(a, b, d)
                    }
                }
                _ => self.leaf(ty),
            },
        }
    }
}

/// A random selection model interpreting `k/0`, `b/1` and `c/2`.
pub fn random_model(rng: &mut ChaCha8Rng) -> SelectionModel {
    let worlds = rng.gen_range(1..=3);
    let individuals = rng.gen_range(1..=2);
    let mut model = SelectionModel::new(worlds, individuals).unwrap();
    let all = 1u64 << worlds;
    if rng.gen_bool(0.5) {
        let props: Vec<WorldSet> = (0..all).filter(|_| rng.gen_bool(0.5)).map(WorldSet).collect();
        let props = if props.is_empty() { vec![WorldSet(all - 1)] } else { props };
        model.set_props(props).unwrap();
    }
    for s in 0..worlds {
        for set in 0..all {
            model
                .set_selection(World(s), WorldSet(set), WorldSet(rng.gen_range(0..all)))
                .unwrap();
        }
    }
    for (pred, arity) in [("k", 0u32), ("b", 1), ("c", 2)] {
        model.declare_predicate(pred, arity as usize).unwrap();
        let tuples = individuals.pow(arity);
        for s in 0..worlds {
            model.set_extension(pred, World(s), rng.gen_range(0..1u64 << tuples)).unwrap();
        }
    }
    model
}

pub fn random_element(rng: &mut ChaCha8Rng, henkin: &FiniteHenkinModel, ty: &Type) -> Element {
    match ty {
        Type::O => Element::Bool(rng.gen()),
        Type::I => Element::World(World(rng.gen_range(0..henkin.domain_i()))),
        Type::U => Element::Individual(Individual(rng.gen_range(0..henkin.domain_u()))),
        t if t.is_prop() => Element::Prop(*henkin.domain_prop().choose(rng).unwrap()),
        Type::Arrow(a, b) => {
            let n = domain(henkin, a).len();
            Element::Function((0..n).map(|_| random_element(rng, henkin, b)).collect())
        }
    }
}

/// The elements of a base type or of `i → o`.
pub fn domain(henkin: &FiniteHenkinModel, ty: &Type) -> Vec<Element> {
    match ty {
        Type::O => vec![Element::Bool(false), Element::Bool(true)],
        Type::I => (0..henkin.domain_i()).map(|w| Element::World(World(w))).collect(),
        Type::U => (0..henkin.domain_u()).map(|d| Element::Individual(Individual(d))).collect(),
        t if t.is_prop() => henkin.domain_prop().iter().map(|s| Element::Prop(*s)).collect(),
        other => panic!("no enumerated domain for {other}"),
    }
}

pub fn random_assignment(rng: &mut ChaCha8Rng, henkin: &FiniteHenkinModel) -> HolAssignment {
    let mut phi = HolAssignment::partial();
    for var in context() {
        let value = random_element(rng, henkin, &var.ty);
        phi.bind(var, value);
    }
    phi
}

/// A Henkin model, an assignment and a term generator from one seed.
pub struct Case {
    pub henkin: FiniteHenkinModel,
    pub phi: HolAssignment,
    pub gen: TermGen,
}

pub fn case(seed: u64) -> Case {
    let mut r = rng(seed);
    let model = random_model(&mut r);
    let henkin = build_henkin(&model);
    let phi = random_assignment(&mut r, &henkin);
    Case {
        henkin,
        phi,
        gen: TermGen::new(r),
    }
}

impl Case {
    pub fn value(&self, t: &Term) -> Result<Element, String> {
        eval_hol(&self.henkin, &self.phi, t).map_err(|e| format!("{e} in {t}"))
    }

    pub fn truth(&self, t: &Term) -> Result<bool, String> {
        eval_hol_bool(&self.henkin, &self.phi, t).map_err(|e| format!("{e} in {t}"))
    }

    pub fn truth_under(&self, phi: &HolAssignment, t: &Term) -> Result<bool, String> {
        eval_hol_bool(&self.henkin, phi, t).map_err(|e| format!("{e} in {t}"))
    }
}

fn check(holds: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if holds {
        Ok(())
    } else {
        Err(what())
    }
}

// Valuation laws of a Henkin model.

pub fn valuation_not(seed: u64) -> Result<(), String> {
    let mut c = case(seed);
    let s = c.gen.term(&Type::O, 3);
    let negated = Term::not(s.clone());
    check(c.truth(&negated)? == !c.truth(&s)?, || format!("V(¬s) ≠ ¬V(s) for s = {s}"))
}

fn binary_law(seed: u64, build: fn(Term, Term) -> Term, expect: fn(bool, bool) -> bool) -> Result<(), String> {
    let mut c = case(seed);
    let s = c.gen.term(&Type::O, 3);
    let t = c.gen.term(&Type::O, 3);
    let whole = build(s.clone(), t.clone());
    let (vs, vt) = (c.truth(&s)?, c.truth(&t)?);
    check(c.truth(&whole)? == expect(vs, vt), || format!("clause fails for {whole}"))
}

pub fn valuation_or(seed: u64) -> Result<(), String> {
    binary_law(seed, Term::or, |a, b| a || b)
}

pub fn valuation_and(seed: u64) -> Result<(), String> {
    binary_law(seed, Term::and, |a, b| a && b)
}

pub fn valuation_imp(seed: u64) -> Result<(), String> {
    binary_law(seed, Term::imp, |a, b| !a || b)
}

/// `V(∀X.s) = V(Π(λX.s)) = T` iff `V(φ[v/V], (λX.s) V) = T` for every `v`.
pub fn valuation_forall(seed: u64) -> Result<(), String> {
    let mut c = case(seed);
    let ty = quantified_types().choose(&mut c.gen.rng).unwrap().clone();
    let x = Var::new("X", ty.clone());
    let body = c.gen.within(&x, |g| g.term(&Type::O, 3));
    let forall = Term::forall(&x, body.clone());
    let lam = Term::lam(&x, body);
    let pi = Term::app(Term::Const(qcl2hol::kernel::Constant::Pi(ty.clone())), lam.clone());
    let fresh = Var::new("V", ty.clone());
    let applied = Term::app(lam, Term::Free(fresh.clone()));
    let mut every = true;
    for v in domain(&c.henkin, &ty) {
        every &= c.truth_under(&c.phi.clone().with(fresh.clone(), v), &applied)?;
    }
    let (direct, via_pi) = (c.truth(&forall)?, c.truth(&pi)?);
    check(direct == every && via_pi == every, || format!("quantifier clause fails for {forall}"))
}

fn value_types() -> Vec<Type> {
    vec![
        Type::O,
        Type::I,
        Type::U,
        prop(),
        Type::fun(Type::U, prop()),
        Type::fun(prop(), prop()),
    ]
}

/// `l =βη r` implies `V(φ,l) = V(φ,r)`, for the normal form and a single step.
pub fn valuation_beta_eta(seed: u64) -> Result<(), String> {
    let mut c = case(seed);
    let ty = value_types().choose(&mut c.gen.rng).unwrap().clone();
    let l = c.gen.term(&ty, 4);
    let value = c.value(&l)?;
    let nf = normalize(&l);
    check(c.value(&nf)? == value, || format!("{l} and its normal form {nf} differ"))?;
    let redexes = redex_count(&l);
    if redexes > 0 {
        let n = c.gen.rng.gen_range(0..redexes);
        let stepped = contract_nth(&l, n).expect("redex exists");
        check(c.value(&stepped)? == value, || format!("{l} and {stepped} differ"))?;
    }
    Ok(())
}

// Kernel laws.

fn kernel_term(seed: u64) -> (TermGen, Term) {
    let mut gen = TermGen::new(rng(seed));
    let ty = value_types().choose(&mut gen.rng).unwrap().clone();
    let t = gen.term(&ty, 5);
    (gen, t)
}

pub fn normalization_idempotent(seed: u64) -> Result<(), String> {
    let (_, t) = kernel_term(seed);
    let nf = normalize(&t);
    check(normalize(&nf) == nf, || format!("normalize is not idempotent on {t}"))?;
    check(redex_count(&nf) == 0, || format!("normal form {nf} has a β-redex"))
}

pub fn subject_reduction(seed: u64) -> Result<(), String> {
    let (_, t) = kernel_term(seed);
    let ty = t.type_of().map_err(|e| format!("generated term ill typed: {e}"))?;
    for n in 0..redex_count(&t) {
        let reduct = contract_nth(&t, n).expect("redex exists");
        check(reduct.type_of().as_ref() == Ok(&ty), || format!("step {n} of {t} changes the type"))?;
    }
    let nf = normalize(&t);
    check(nf.type_of().as_ref() == Ok(&ty), || format!("normalizing {t} changes the type"))
}

/// Two strategies (innermost-first and one step at a time) meet.
pub fn confluence(seed: u64) -> Result<(), String> {
    let (_, t) = kernel_term(seed);
    let a = normalize(&t);
    let b = normalize_by_steps(&t);
    check(alpha_equal(&a, &b), || format!("{t} normalizes to {a} and to {b}"))
}

/// `[A/X]B` is capture-avoiding: its value is `V(φ[V(φ,A)/X], B)`, it
/// commutes with normalization and its free variables are the expected ones.
pub fn substitution(seed: u64) -> Result<(), String> {
    let mut c = case(seed);
    let x = context().choose(&mut c.gen.rng).unwrap().clone();
    let b = c.gen.term(&Type::O, 4);
    let a = c.gen.term(&x.ty, 3);
    let result = substitute(&b, &x, &a).map_err(|e| e.to_string())?;

    let mut expected = b.free_vars();
    if expected.remove(&x) {
        expected.extend(a.free_vars());
    }
    check(result.free_vars() == expected, || format!("free variables of [{a}/{}]{b}", x.name))?;

    // Without full comprehension V(A) may lie outside D_{i→o}, and then
    // there is no shifted assignment to compare against.
    let shifted = c.phi.clone().with(x.clone(), c.value(&a)?);
    match eval_hol_bool(&c.henkin, &shifted, &b) {
        Err(HolError::ValueMismatch(_)) => {}
        shifted_value => {
            let shifted_value = shifted_value.map_err(|e| format!("{e} in {b}"))?;
            check(c.truth(&result)? == shifted_value, || {
                format!("[{a}/{}]{b} = {result} changes the value", x.name)
            })?;
        }
    }

    let lhs = normalize(&result);
    let rhs = normalize(&substitute(&normalize(&b), &x, &normalize(&a)).map_err(|e| e.to_string())?);
    check(alpha_equal(&lhs, &rhs), || format!("substitution and normalization do not commute on {b}"))
}

// Surface formulas.

pub fn surface_sig() -> Signature {
    Signature::new()
        .with_predicate("b", 1)
        .unwrap()
        .with_predicate("c", 2)
        .unwrap()
        .with_predicate("k", 0)
        .unwrap()
}

/// A random formula over `surface_sig`, sugar included.
pub fn surface_formula(rng: &mut ChaCha8Rng, depth: u32) -> Formula {
    const IND: [&str; 3] = ["X", "Y", "Z"];
    const PROPS: [&str; 3] = ["p", "q", "P"];
    if depth == 0 || rng.gen_range(0..5) == 0 {
        return match rng.gen_range(0..6) {
            0 | 1 => Formula::prop(*PROPS.choose(rng).unwrap()),
            2 => Formula::atom("b", [*IND.choose(rng).unwrap()]),
            3 => Formula::atom("c", [*IND.choose(rng).unwrap(), *IND.choose(rng).unwrap()]),
            4 => Formula::atom("k", Vec::<String>::new()),
            _ => {
                if rng.gen() {
                    Formula::True
                } else {
                    Formula::False
                }
            }
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..12) {
        0 => Formula::not(surface_formula(rng, d)),
        1 => Formula::or(surface_formula(rng, d), surface_formula(rng, d)),
        2 => Formula::cond(surface_formula(rng, d), surface_formula(rng, d)),
        3 => Formula::and(surface_formula(rng, d), surface_formula(rng, d)),
        4 => Formula::implies(surface_formula(rng, d), surface_formula(rng, d)),
        5 => Formula::iff(surface_formula(rng, d), surface_formula(rng, d)),
        6 => Formula::forall_ind(*IND.choose(rng).unwrap(), surface_formula(rng, d)),
        7 => Formula::exists_ind(*IND.choose(rng).unwrap(), surface_formula(rng, d)),
        8 => Formula::forall_prop(*PROPS.choose(rng).unwrap(), surface_formula(rng, d)),
        9 => Formula::exists_prop(*PROPS.choose(rng).unwrap(), surface_formula(rng, d)),
        _ => surface_formula(rng, d),
    }
}

pub fn parse_pretty_round_trip(seed: u64) -> Result<(), String> {
    let f = surface_formula(&mut rng(seed), 5);
    let text = qcl2hol::syntax::pretty_qcl(&f);
    let back = qcl2hol::syntax::parse_surface(&text, &surface_sig()).map_err(|e| format!("`{text}`: {e}"))?;
    check(back == f, || format!("`{text}` parses to {back:?}, not {f:?}"))
}

/// The flat evaluator (all binders consumed by `Π` or `f`) against the
/// general one, forced by wrapping the term in a β-redex.
pub fn evaluators_agree(seed: u64) -> Result<(), String> {
    let mut c = case(seed);
    let t = normalize(&c.gen.term(&Type::O, 4));
    let b = Var::new("B", Type::O);
    let wrapped = Term::app(Term::lam(&b, Term::Free(b.clone())), t.clone());
    check(c.truth(&t)? == c.truth(&wrapped)?, || format!("evaluators differ on {t}"))
}
