//! Quantified conditional logic: formulas, signatures, parsing and printing.

mod formula;
mod parser;
mod pretty;

pub use formula::{free_vars, Formula, FreeVars, Signature, SignatureError, RESERVED_NAMES};
pub use parser::{
    parse_qcl, parse_qcl_with, parse_surface, parse_surface_with, parse_with_signature, ParseError, ParseErrorKind,
    ParseOptions, Position,
};
pub use pretty::pretty_qcl;

/// Bound variable used when `true` is rewritten to `forallp P. P | ~P`.
const TRUTH_VAR: &str = "P";

/// Rewrites every sugar constructor into the primitive connectives.
///
/// `true` becomes `forallp P. P | ~P`, which holds at every world of every
/// model because the propositional domain is non-empty; `false` is its
/// negation.
pub fn desugar(formula: &Formula) -> Formula {
    match formula {
        Formula::PropVar(_) | Formula::Atom { .. } => formula.clone(),
        Formula::Not(b) => Formula::not(desugar(b)),
        Formula::Or(l, r) => Formula::or(desugar(l), desugar(r)),
        Formula::Cond(l, r) => Formula::cond(desugar(l), desugar(r)),
        Formula::ForallInd(x, b) => Formula::forall_ind(x.clone(), desugar(b)),
        Formula::ForallProp(p, b) => Formula::forall_prop(p.clone(), desugar(b)),
        Formula::True => Formula::forall_prop(
            TRUTH_VAR,
            Formula::or(Formula::prop(TRUTH_VAR), Formula::not(Formula::prop(TRUTH_VAR))),
        ),
        Formula::False => Formula::not(desugar(&Formula::True)),
        Formula::And(l, r) => Formula::not(Formula::or(
            Formula::not(desugar(l)),
            Formula::not(desugar(r)),
        )),
        Formula::Implies(l, r) => Formula::or(Formula::not(desugar(l)), desugar(r)),
        Formula::Iff(l, r) => desugar(&Formula::and(
            Formula::implies((**l).clone(), (**r).clone()),
            Formula::implies((**r).clone(), (**l).clone()),
        )),
        Formula::ExistsInd(x, b) => {
            Formula::not(Formula::forall_ind(x.clone(), Formula::not(desugar(b))))
        }
        Formula::ExistsProp(p, b) => {
            Formula::not(Formula::forall_prop(p.clone(), Formula::not(desugar(b))))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::prop("p")
    }
    fn q() -> Formula {
        Formula::prop("q")
    }

    #[test]
    fn conjunction() {
        assert_eq!(
            desugar(&Formula::and(p(), q())),
            Formula::not(Formula::or(Formula::not(p()), Formula::not(q())))
        );
    }

    #[test]
    fn existential() {
        let body = Formula::atom("b", ["X"]);
        assert_eq!(
            desugar(&Formula::exists_ind("X", body.clone())),
            Formula::not(Formula::forall_ind("X", Formula::not(body)))
        );
        assert_eq!(
            desugar(&Formula::exists_prop("P", Formula::prop("P"))),
            Formula::not(Formula::forall_prop("P", Formula::not(Formula::prop("P"))))
        );
    }

    #[test]
    fn biconditional_goes_through_implications() {
        let expected = Formula::not(Formula::or(
            Formula::not(Formula::or(Formula::not(p()), q())),
            Formula::not(Formula::or(Formula::not(q()), p())),
        ));
        assert_eq!(desugar(&Formula::iff(p(), q())), expected);
    }

    #[test]
    fn primitive_is_unchanged() {
        let f = Formula::forall_prop("P", Formula::cond(Formula::prop("P"), Formula::not(q())));
        assert_eq!(desugar(&f), f);
    }

    #[test]
    fn constants_are_closed() {
        let t = desugar(&Formula::True);
        assert!(t.is_primitive());
        assert!(free_vars(&t).is_empty());
        assert_eq!(desugar(&Formula::False), Formula::not(t));
    }
}
