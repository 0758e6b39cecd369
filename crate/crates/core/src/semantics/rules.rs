use std::fmt;

use super::eval::{model_valid, EvalError};
use super::model::SelectionModel;
use crate::syntax::{desugar, Formula};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    /// From `φ ↔ φ'` infer `(φ ⇒ ψ) ↔ (φ' ⇒ ψ)`.
    Rcea,
    /// From `φ ↔ φ'` infer `(ψ ⇒ φ) ↔ (ψ ⇒ φ')`.
    Rcec,
    /// From `(φ1 ∧ … ∧ φn) ↔ ψ` infer `((φ0 ⇒ φ1) ∧ … ∧ (φ0 ⇒ φn)) → (φ0 ⇒ ψ)`.
    Rck,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Rcea => "RCEA",
            Rule::Rcec => "RCEC",
            Rule::Rck => "RCK",
        })
    }
}

/// One instance of a rule, with premise and conclusion in primitive connectives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleInstance {
    pub rule: Rule,
    pub label: String,
    pub premise: Formula,
    pub conclusion: Formula,
}

impl RuleInstance {
    pub fn rcea(label: &str, phi: Formula, phi_alt: Formula, psi: Formula) -> Self {
        RuleInstance {
            rule: Rule::Rcea,
            label: label.to_owned(),
            premise: desugar(&Formula::iff(phi.clone(), phi_alt.clone())),
            conclusion: desugar(&Formula::iff(
                Formula::cond(phi, psi.clone()),
                Formula::cond(phi_alt, psi),
            )),
        }
    }

    pub fn rcec(label: &str, phi: Formula, phi_alt: Formula, psi: Formula) -> Self {
        RuleInstance {
            rule: Rule::Rcec,
            label: label.to_owned(),
            premise: desugar(&Formula::iff(phi.clone(), phi_alt.clone())),
            conclusion: desugar(&Formula::iff(
                Formula::cond(psi.clone(), phi),
                Formula::cond(psi, phi_alt),
            )),
        }
    }

    /// `consequents` are `φ1 … φn`; panics if empty.
    pub fn rck(label: &str, antecedent: Formula, consequents: Vec<Formula>, psi: Formula) -> Self {
        assert!(!consequents.is_empty(), "RCK needs at least one consequent");
        let conjunction = |fs: Vec<Formula>| fs.into_iter().reduce(Formula::and).expect("non-empty");
        let conditionals = consequents
            .iter()
            .map(|c| Formula::cond(antecedent.clone(), c.clone()))
            .collect();
        RuleInstance {
            rule: Rule::Rck,
            label: label.to_owned(),
            premise: desugar(&Formula::iff(conjunction(consequents), psi.clone())),
            conclusion: desugar(&Formula::implies(
                conjunction(conditionals),
                Formula::cond(antecedent, psi),
            )),
        }
    }
}

/// Instances over propositional variables `p`, `q`, `r` and a unary predicate `b`.
pub fn standard_battery() -> Vec<RuleInstance> {
    let p = || Formula::prop("p");
    let q = || Formula::prop("q");
    let r = || Formula::prop("r");
    let bx = || Formula::atom("b", ["X"]);
    let all_b = || Formula::forall_ind("X", bx());
    let no_counter_b = || Formula::not(Formula::exists_ind("X", Formula::not(bx())));
    let excluded = |f: Formula| Formula::or(f.clone(), Formula::not(f));
    let dneg = |f: Formula| Formula::not(Formula::not(f));
    vec![
        RuleInstance::rcea("or-commutes", Formula::or(p(), q()), Formula::or(q(), p()), r()),
        RuleInstance::rcea("double-negation", p(), dneg(p()), q()),
        RuleInstance::rcea(
            "and-commutes",
            Formula::and(p(), q()),
            Formula::and(q(), p()),
            Formula::cond(p(), r()),
        ),
        RuleInstance::rcea("quantifier-duality", all_b(), no_counter_b(), p()),
        RuleInstance::rcea("identical", p(), p(), q()),
        RuleInstance::rcea("tautologies", excluded(p()), excluded(q()), r()),
        RuleInstance::rcea("contingent", p(), q(), r()),
        RuleInstance::rcec("identical", p(), p(), q()),
        RuleInstance::rcec("or-commutes", Formula::or(p(), q()), Formula::or(q(), p()), r()),
        RuleInstance::rcec("double-negation", dneg(p()), p(), q()),
        RuleInstance::rcec("quantifier-duality", all_b(), no_counter_b(), p()),
        RuleInstance::rcec("tautologies", excluded(p()), excluded(q()), r()),
        RuleInstance::rcec(
            "nested-conditional",
            Formula::cond(p(), q()),
            dneg(Formula::cond(p(), q())),
            r(),
        ),
        RuleInstance::rck("n1-reflexive", p(), vec![q()], q()),
        RuleInstance::rck("n1-or-commutes", p(), vec![Formula::or(q(), r())], Formula::or(r(), q())),
        RuleInstance::rck("n2-conjunction", p(), vec![q(), r()], Formula::and(q(), r())),
        RuleInstance::rck("n2-swapped", p(), vec![q(), r()], Formula::and(r(), q())),
        RuleInstance::rck(
            "n2-absorption",
            all_b(),
            vec![p(), excluded(p())],
            p(),
        ),
        RuleInstance::rck(
            "n3-with-atom",
            r(),
            vec![p(), q(), bx()],
            Formula::and(Formula::and(p(), q()), bx()),
        ),
        RuleInstance::rck(
            "n3-regrouped",
            Formula::cond(q(), p()),
            vec![p(), q(), r()],
            Formula::and(p(), Formula::and(q(), r())),
        ),
    ]
}

/// Validity of one instance's premise and conclusion in one model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RuleOutcome {
    pub premise_valid: bool,
    pub conclusion_valid: bool,
}

impl RuleOutcome {
    pub fn violated(&self) -> bool {
        self.premise_valid && !self.conclusion_valid
    }
}

/// Outcomes in the order of the instances checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleReport {
    pub outcomes: Vec<RuleOutcome>,
}

impl RuleReport {
    pub fn violations(&self) -> impl Iterator<Item = usize> + '_ {
        self.outcomes
            .iter()
            .enumerate()
            .filter(|(_, o)| o.violated())
            .map(|(i, _)| i)
    }

    pub fn is_clean(&self) -> bool {
        self.violations().next().is_none()
    }
}

/// Checks premise validity ⟹ conclusion validity for each instance in `model`.
pub fn check_rule_schemata(model: &SelectionModel, instances: &[RuleInstance]) -> Result<RuleReport, EvalError> {
    let outcomes = instances
        .iter()
        .map(|inst| {
            let premise_valid = model_valid(model, &inst.premise)?;
            // The conclusion is only needed when the premise holds.
            let conclusion_valid = !premise_valid || model_valid(model, &inst.conclusion)?;
            Ok(RuleOutcome {
                premise_valid,
                conclusion_valid,
            })
        })
        .collect::<Result<_, EvalError>>()?;
    Ok(RuleReport { outcomes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::model::{World, WorldSet};
    use crate::syntax::free_vars;

    #[test]
    fn battery_shape() {
        let battery = standard_battery();
        for rule in [Rule::Rcea, Rule::Rcec, Rule::Rck] {
            assert!(battery.iter().filter(|i| i.rule == rule).count() >= 5, "{rule}");
        }
        for inst in &battery {
            assert!(inst.premise.is_primitive() && inst.conclusion.is_primitive());
            assert!(free_vars(&inst.conclusion).individuals.is_subset(&["X".to_string()].into()));
        }
    }

    #[test]
    fn identical_premise_is_trivially_preserved() {
        let mut m = SelectionModel::new(2, 1).unwrap();
        m.declare_predicate("b", 1).unwrap();
        m.set_selection(World(0), WorldSet(1), WorldSet(2)).unwrap();
        let inst = RuleInstance::rcec("identical", Formula::prop("p"), Formula::prop("p"), Formula::prop("q"));
        let report = check_rule_schemata(&m, &[inst]).unwrap();
        assert_eq!(
            report.outcomes,
            vec![RuleOutcome {
                premise_valid: true,
                conclusion_valid: true
            }]
        );
    }

    #[test]
    fn battery_holds_in_a_sample_model() {
        let mut m = SelectionModel::new(2, 2).unwrap();
        m.declare_predicate("b", 1).unwrap();
        for a in 0..4 {
            m.set_selection(World(0), WorldSet(a), WorldSet(a ^ 1)).unwrap();
            m.set_selection(World(1), WorldSet(a), WorldSet(3)).unwrap();
        }
        let report = check_rule_schemata(&m, &standard_battery()).unwrap();
        assert!(report.is_clean());
        assert!(report.outcomes.iter().filter(|o| o.premise_valid).count() > 10);
    }
}
