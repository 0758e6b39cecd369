mod common;

use common::*;
use proptest::prelude::*;
use qcl2hol::embedding::{embed, embed_inline, embed_kernel, embed_valid, unfold, Combinator, EmbeddingEnv};
use qcl2hol::henkin::correspondence_sides;
use qcl2hol::kernel::{alpha_equal, normalize, Term, Type, Var};
use qcl2hol::semantics::{all_world_sets, Individual, QclAssignment};
use qcl2hol::syntax::{free_vars, Formula};
use qcl2hol::thf::emit_problem;
use rand::seq::SliceRandom;
use rand::Rng;

fn env() -> EmbeddingEnv {
    EmbeddingEnv::new(&surface_sig())
}

fn formula(seed: u64, depth: u32) -> Formula {
    surface_formula(&mut rng(seed), depth)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 512, ..ProptestConfig::default() })]

    #[test]
    fn embedded_types(seed in any::<u64>()) {
        let f = formula(seed, 5);
        prop_assert_eq!(embed(&f, &env()).unwrap().type_of().unwrap(), Type::prop());
        prop_assert_eq!(embed_valid(&f, &env()).unwrap().type_of().unwrap(), Type::O);
        prop_assert_eq!(embed_kernel(&f, &env()).unwrap().type_of().unwrap(), Type::prop());
    }

    #[test]
    fn translation_is_structural(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (surface_formula(&mut r, 3), surface_formula(&mut r, 3));
        let e = |f: &Formula| embed(f, &env()).unwrap();
        let (ea, eb) = (e(&a), e(&b));
        let binary = |c: Combinator| Term::apps(c.constant(), [ea.clone(), eb.clone()]);
        prop_assert_eq!(e(&Formula::not(a.clone())), Term::app(Combinator::Not.constant(), ea.clone()));
        prop_assert_eq!(e(&Formula::or(a.clone(), b.clone())), binary(Combinator::Or));
        prop_assert_eq!(e(&Formula::cond(a.clone(), b.clone())), binary(Combinator::Cond));
        prop_assert_eq!(e(&Formula::and(a.clone(), b.clone())), binary(Combinator::And));
        prop_assert_eq!(e(&Formula::implies(a.clone(), b.clone())), binary(Combinator::Impl));
        prop_assert_eq!(e(&Formula::iff(a.clone(), b.clone())), binary(Combinator::Equiv));
        let x = Var::new("X", Type::U);
        prop_assert_eq!(
            e(&Formula::forall_ind("X", a.clone())),
            Term::app(Combinator::ForallInd.constant(), Term::lam(&x, ea.clone()))
        );
        let p = Var::new("P", Type::prop());
        prop_assert_eq!(
            e(&Formula::exists_prop("P", a.clone())),
            Term::app(Combinator::ExistsProp.constant(), Term::lam(&p, ea))
        );
    }

    #[test]
    fn free_variables_carry_over(seed in any::<u64>()) {
        let f = formula(seed, 5);
        let fv = free_vars(&f);
        let expected: std::collections::BTreeSet<Var> = fv
            .props
            .iter()
            .map(|p| Var::new(p.as_str(), Type::prop()))
            .chain(fv.individuals.iter().map(|x| Var::new(x.as_str(), Type::U)))
            .collect();
        let t = embed(&f, &env()).unwrap();
        prop_assert_eq!(t.free_vars(), expected.clone());
        prop_assert_eq!(embed_kernel(&f, &env()).unwrap().free_vars(), expected);
        let allowed = ["f", "k", "b", "c"];
        prop_assert!(unfold(&t).constants().iter().all(|(n, _)| allowed.contains(&n.as_str())));
    }

    #[test]
    fn combinators_unfold_to_the_inline_embedding(seed in any::<u64>()) {
        let f = formula(seed, 5);
        let via_combinators = normalize(&unfold(&embed(&f, &env()).unwrap()));
        let inline = normalize(&embed_inline(&f, &env()).unwrap());
        prop_assert!(alpha_equal(&via_combinators, &inline), "{} vs {}", via_combinators, inline);
        prop_assert!(alpha_equal(&via_combinators, &embed_kernel(&f, &env()).unwrap()));
    }

    #[test]
    fn emitted_problems_are_stable_and_well_formed(seed in any::<u64>()) {
        let f = formula(seed, 4);
        let doc = emit_problem(&f, "goal", &surface_sig()).unwrap();
        let again = emit_problem(&f, "goal", &surface_sig()).unwrap();
        prop_assert_eq!(doc.text(), again.text());
        doc.check().map_err(|e| TestCaseError::fail(format!("{e}\n{doc}")))?;
    }

    #[test]
    fn compiled_evaluators_agree(seed in any::<u64>()) {
        evaluators_agree(seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn both_sides_agree_on_random_models(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = surface_formula(&mut r, 5);
        let mut model = random_model(&mut r);
        model.set_props(all_world_sets(model.worlds())).unwrap();
        let fv = free_vars(&f);
        let mut g = QclAssignment::new();
        for x in &fv.individuals {
            g.set_individual(x, Individual(r.gen_range(0..model.individuals())));
        }
        for p in &fv.props {
            g.set_prop(p, *model.props().choose(&mut r).unwrap());
        }
        for s in model.world_iter() {
            let sides = correspondence_sides(&model, &g, s, &f).unwrap();
            prop_assert!(sides.agree(), "{:?} at {:?}: {:?}", f, s, sides);
        }
    }
}
