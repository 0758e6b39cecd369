//! Selection-function models of quantified conditional logic.

mod enumerate;
mod eval;
pub mod format;
mod model;
mod rules;

pub use enumerate::{
    enumerate_models, enumerate_models_exact, frames, interpretation_count, interpretations,
    model_count, search_selections, selection_table_count, selection_tables, valid_up_to,
    Bounds, BoundsError, Countermodel, Coverage, Frame, Probe, QMode, SemanticsError, Verdict,
    INTERPRETATION_LIMIT, MAX_SEARCH_WORLDS, MODEL_LIMIT,
};
pub use eval::{
    PreparedFormula,
    assignments, check_model_property, eval_qcl, find_counterexample, model_valid, proof_set,
    AssignmentRange, EvalError, QclAssignment,
};
pub use model::{
    all_world_sets, tuple_at, tuple_index, Individual, Interpretation, ModelError,
    PredicateTable, SelectionModel, SelectionTable, World, WorldSet, MAX_TUPLES, MAX_WORLDS,
};
pub use rules::{check_rule_schemata, standard_battery, Rule, RuleInstance, RuleOutcome, RuleReport};
