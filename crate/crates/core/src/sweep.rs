//! Exhaustive sweeps comparing the conditional-logic and HOL sides.
//!
//! Selection tables are covered with [`search_selections`]: each evaluation
//! reports which entries of `f` it read, and only those are branched on. A
//! single evaluation therefore stands for every table agreeing with it on
//! the entries read. Counts below are of covered tables, not evaluations.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use thiserror::Error;

use crate::embedding::{embed_kernel, embed_valid_kernel, EmbedError, EmbeddingEnv};
use crate::henkin::{
    build_henkin, lift_assignment, world_variable, CompiledTerm, Element, FiniteHenkinModel, HolError, Sides,
};
use crate::kernel::Term;
use crate::semantics::{
    assignments, frames, interpretation_count, interpretations, search_selections, Frame, PreparedFormula, Bounds, BoundsError,
    Coverage, EvalError, ModelError, Probe, QclAssignment, RuleInstance, SelectionModel, World,
};
use crate::syntax::{free_vars, Formula};

/// Disagreements kept verbatim in a report; the rest are only counted.
pub const MAX_EXAMPLES: usize = 8;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Qcl(#[from] EvalError),
    #[error(transparent)]
    Hol(#[from] HolError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error("predicate `{0}` is used with two different arities")]
    ArityConflict(String),
}

/// Predicates used by `formulas`, with arities.
pub fn collect_predicates<'a>(
    formulas: impl IntoIterator<Item = &'a Formula>,
) -> Result<Vec<(String, usize)>, SweepError> {
    let mut seen = BTreeMap::new();
    for f in formulas {
        for (name, arity) in f.predicates() {
            if *seen.entry(name.clone()).or_insert(arity) != arity {
                return Err(SweepError::ArityConflict(name));
            }
        }
    }
    Ok(seen.into_iter().collect())
}

fn env_for(predicates: &[(String, usize)]) -> EmbeddingEnv {
    predicates
        .iter()
        .fold(EmbeddingEnv::default(), |env, (name, arity)| env.with_predicate(name, *arity))
}

/// A model `M` together with `H^M`, kept in step while tables are searched.
struct Structure<'f> {
    frame: &'f Frame,
    model: SelectionModel,
    henkin: FiniteHenkinModel,
}

impl Structure<'_> {
    /// Covers every selection table of the frame, asking `property` of each
    /// evaluated table whether it is a hit.
    fn search<P>(&mut self, evaluations: &mut u64, mut property: P) -> Result<Coverage, SweepError>
    where
        P: FnMut(&SelectionModel, &FiniteHenkinModel) -> Result<bool, SweepError>,
    {
        let Structure { model, henkin, .. } = self;
        let flow = search_selections(model.worlds(), |table| {
            model.load_selection(table);
            henkin.load_selection(table);
            model.take_accessed();
            henkin.take_accessed();
            *evaluations += 1;
            match property(model, henkin) {
                Err(e) => ControlFlow::Break(e),
                Ok(hit) => ControlFlow::Continue(Probe {
                    accessed: model.take_accessed() | henkin.take_accessed(),
                    hit,
                }),
            }
        })?;
        match flow {
            ControlFlow::Continue(c) => Ok(c),
            ControlFlow::Break(e) => Err(e),
        }
    }
}

/// Calls `visit` once per (frame, interpretation) within the bounds.
fn for_each_structure<F>(bounds: &Bounds, predicates: &[(String, usize)], mut visit: F) -> Result<usize, SweepError>
where
    F: FnMut(&mut Structure<'_>) -> Result<(), SweepError>,
{
    let mut count = 0;
    for frame in frames(bounds)? {
        let skeleton = frame.skeleton()?;
        for interp in interpretations(&frame, predicates)? {
            let mut model = skeleton.clone();
            model.set_interpretation(interp);
            let henkin = build_henkin(&model);
            visit(&mut Structure { frame: &frame, model, henkin })?;
            count += 1;
        }
    }
    Ok(count)
}

/// A point where the two sides of the correspondence differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disagreement {
    pub formula: Formula,
    pub model: SelectionModel,
    pub assignment: QclAssignment,
    pub world: World,
    pub sides: Sides,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CorrespondenceReport {
    pub formulas: usize,
    /// (frame, interpretation) pairs visited.
    pub structures: usize,
    /// `(M, g, s, δ)` points covered.
    pub points: u128,
    pub evaluations: u64,
    /// Points at which the sides differ.
    pub disagreements: u128,
    pub examples: Vec<Disagreement>,
}

struct Prepared<'f> {
    formula: &'f Formula,
    qcl: PreparedFormula,
    applied: CompiledTerm,
    vars: crate::syntax::FreeVars,
}

/// Checks `M, g, s ⊨ δ` against `V(⌊g⌋[s/S], ⌊δ⌋ S)` in `H^M` for every model
/// within the bounds, every assignment of `δ`'s free variables, every world
/// and every `δ` in `formulas`.
pub fn correspondence_sweep(formulas: &[Formula], bounds: &Bounds) -> Result<CorrespondenceReport, SweepError> {
    let predicates = collect_predicates(formulas)?;
    let env = env_for(&predicates);
    let prepared = formulas
        .iter()
        .map(|formula| {
            Ok(Prepared {
                formula,
                qcl: PreparedFormula::new(formula),
                applied: CompiledTerm::new(&Term::app(embed_kernel(formula, &env)?, Term::Free(world_variable())))?,
                vars: free_vars(formula),
            })
        })
        .collect::<Result<Vec<_>, SweepError>>()?;

    let mut report = CorrespondenceReport {
        formulas: formulas.len(),
        ..Default::default()
    };
    let mut evaluations = 0;
    report.structures = for_each_structure(bounds, &predicates, |structure| {
        for item in &prepared {
            let gs: Vec<QclAssignment> = assignments(&structure.model, &item.vars).collect();
            for g in gs {
                let lifted = lift_assignment(&g);
                for s in structure.model.world_iter() {
                    let phi = lifted.clone().with(world_variable(), Element::World(s));
                    let slots = item.applied.bind(&structure.henkin, &phi)?;
                    let covered = structure.search(&mut evaluations, |model, henkin| {
                        let sides = Sides {
                            qcl: item.qcl.holds(model, &g, s)?,
                            hol: item.applied.eval_bool(henkin, &slots)?,
                        };
                        if !sides.agree() && report.examples.len() < MAX_EXAMPLES {
                            report.examples.push(Disagreement {
                                formula: item.formula.clone(),
                                model: model.clone(),
                                assignment: g.clone(),
                                world: s,
                                sides,
                            });
                        }
                        Ok(!sides.agree())
                    })?;
                    report.points += covered.tables;
                    report.disagreements += covered.hits;
                }
            }
        }
        Ok(())
    })?;
    report.evaluations = evaluations;
    Ok(report)
}

/// A model where validity in `M` and in `H^M` differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidityDisagreement {
    pub formula: Formula,
    pub model: SelectionModel,
    pub qcl_valid: bool,
    pub hol_valid: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidityReport {
    pub formulas: usize,
    pub structures: usize,
    /// `(M, φ)` pairs covered.
    pub pairs: u128,
    pub evaluations: u64,
    pub disagreements: u128,
    pub examples: Vec<ValidityDisagreement>,
}

/// Checks `M ⊨ φ` against `H^M ⊨ vld ⌊φ⌋` for every model within the
/// bounds and every `φ` in `formulas`.
pub fn validity_sweep(formulas: &[Formula], bounds: &Bounds) -> Result<ValidityReport, SweepError> {
    let predicates = collect_predicates(formulas)?;
    let env = env_for(&predicates);
    let terms = formulas
        .iter()
        .map(|f| Ok((PreparedFormula::new(f), CompiledTerm::new(&embed_valid_kernel(f, &env)?)?)))
        .collect::<Result<Vec<_>, SweepError>>()?;

    let mut report = ValidityReport {
        formulas: formulas.len(),
        ..Default::default()
    };
    let mut evaluations = 0;
    report.structures = for_each_structure(bounds, &predicates, |structure| {
        for (formula, (prepared, term)) in formulas.iter().zip(&terms) {
            let covered = structure.search(&mut evaluations, |model, henkin| {
                let qcl_valid = prepared.valid_in(model)?;
                let hol = term.valid(henkin)?;
                if qcl_valid != hol && report.examples.len() < MAX_EXAMPLES {
                    report.examples.push(ValidityDisagreement {
                        formula: formula.clone(),
                        model: model.clone(),
                        qcl_valid,
                        hol_valid: hol,
                    });
                }
                Ok(qcl_valid != hol)
            })?;
            report.pairs += covered.tables;
            report.disagreements += covered.hits;
        }
        Ok(())
    })?;
    report.evaluations = evaluations;
    Ok(report)
}

/// Models within the bounds, and how many of them have `H^M ⊨ vld ⌊φ⌋`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HolValidityCount {
    pub models: u128,
    pub valid: u128,
}

pub fn hol_validity_count(formula: &Formula, bounds: &Bounds) -> Result<HolValidityCount, SweepError> {
    let predicates = collect_predicates([formula])?;
    let term = CompiledTerm::new(&embed_valid_kernel(formula, &env_for(&predicates))?)?;
    let mut count = HolValidityCount::default();
    let mut evaluations = 0;
    for_each_structure(bounds, &predicates, |structure| {
        let covered = structure.search(&mut evaluations, |_, henkin| Ok(term.valid(henkin)?))?;
        count.models += covered.tables;
        count.valid += covered.hits;
        Ok(())
    })?;
    Ok(count)
}

/// Per-instance totals over the models of a rule sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceSummary {
    pub instance: RuleInstance,
    pub models: u128,
    /// Models in which the premise is valid.
    pub premise_valid: u128,
    /// Models in which the premise is valid and the conclusion is not.
    pub violations: u128,
}

/// Checks premise validity ⟹ conclusion validity for each instance in
/// every model within the bounds.
///
/// Validity of a formula does not depend on predicates it does not mention,
/// so each instance is checked on the reducts to its own predicates and
/// every reduct stands for all of its expansions to the others.
pub fn rule_sweep(instances: &[RuleInstance], bounds: &Bounds) -> Result<Vec<InstanceSummary>, SweepError> {
    let predicates = collect_predicates(instances.iter().flat_map(|i| [&i.premise, &i.conclusion]))?;
    let mut summaries = Vec::with_capacity(instances.len());
    let mut evaluations = 0;
    for instance in instances {
        let own = collect_predicates([&instance.premise, &instance.conclusion])?;
        let others: Vec<_> = predicates.iter().filter(|p| !own.contains(p)).cloned().collect();
        let premise = PreparedFormula::new(&instance.premise);
        let conclusion = PreparedFormula::new(&instance.conclusion);
        let mut summary = InstanceSummary {
            instance: instance.clone(),
            models: 0,
            premise_valid: 0,
            violations: 0,
        };
        for_each_structure(bounds, &own, |structure| {
            let expansions = interpretation_count(structure.frame, &others).ok_or(BoundsError::ResourceLimit {
                what: "predicate interpretation",
                needed: "overflowing".into(),
                limit: u128::MAX,
            })?;
            let premise_valid = structure.search(&mut evaluations, |model, _| Ok(premise.valid_in(model)?))?;
            let violated = structure.search(&mut evaluations, |model, _| {
                Ok(premise.valid_in(model)? && !conclusion.valid_in(model)?)
            })?;
            summary.models += premise_valid.tables * expansions;
            summary.premise_valid += premise_valid.hits * expansions;
            summary.violations += violated.hits * expansions;
            Ok(())
        })?;
        summaries.push(summary);
    }
    Ok(summaries)
}
