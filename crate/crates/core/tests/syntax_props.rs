mod common;

use common::*;
use proptest::prelude::*;
use qcl2hol::syntax::{desugar, free_vars, Formula};

fn formula(seed: u64) -> Formula {
    surface_formula(&mut rng(seed), 5)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1024, ..ProptestConfig::default() })]

    #[test]
    fn pretty_text_parses_back(seed in any::<u64>()) {
        parse_pretty_round_trip(seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn desugar_is_idempotent(seed in any::<u64>()) {
        let once = desugar(&formula(seed));
        prop_assert_eq!(desugar(&once), once);
    }

    #[test]
    fn desugar_keeps_free_variables(seed in any::<u64>()) {
        let f = formula(seed);
        prop_assert_eq!(free_vars(&desugar(&f)), free_vars(&f));
    }

    #[test]
    fn desugar_output_is_primitive(seed in any::<u64>()) {
        let d = desugar(&formula(seed));
        prop_assert!(d.is_primitive(), "{:?}", d);
    }
}
