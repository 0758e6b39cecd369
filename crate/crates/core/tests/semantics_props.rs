mod common;

use common::*;
use proptest::prelude::*;
use qcl2hol::semantics::{eval_qcl, proof_set, Individual, QclAssignment, SelectionModel, WorldSet};
use qcl2hol::syntax::{free_vars, Formula};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const INDIVIDUALS: [&str; 4] = ["X", "Y", "Z", "W"];
const PROPS: [&str; 4] = ["p", "q", "P", "r"];

/// Values for every variable the generator can produce, and then some.
fn assignment(r: &mut ChaCha8Rng, model: &SelectionModel) -> QclAssignment {
    let mut g = QclAssignment::new();
    for x in INDIVIDUALS {
        g.set_individual(x, Individual(r.gen_range(0..model.individuals())));
    }
    for p in PROPS {
        g.set_prop(p, *model.props().choose(r).unwrap());
    }
    g
}

struct Setup {
    r: ChaCha8Rng,
    model: SelectionModel,
    g: QclAssignment,
}

fn setup(seed: u64) -> Setup {
    let mut r = rng(seed);
    let model = random_model(&mut r);
    let g = assignment(&mut r, &model);
    Setup { r, model, g }
}

fn proof(s: &Setup, f: &Formula) -> WorldSet {
    proof_set(&s.model, &s.g, f).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1024, ..ProptestConfig::default() })]

    #[test]
    fn only_free_variables_matter(seed in any::<u64>()) {
        let mut s = setup(seed);
        let f = surface_formula(&mut s.r, 5);
        let fv = free_vars(&f);
        let mut other = assignment(&mut s.r, &s.model);
        for x in &fv.individuals {
            other.set_individual(x, s.g.individual(x).unwrap());
        }
        for p in &fv.props {
            other.set_prop(p, s.g.prop(p).unwrap());
        }
        prop_assert_eq!(proof_set(&s.model, &other, &f).unwrap(), proof(&s, &f));
    }

    #[test]
    fn updating_a_bound_or_absent_variable(seed in any::<u64>()) {
        let mut s = setup(seed);
        let f = surface_formula(&mut s.r, 5);
        let fv = free_vars(&f);
        let before = proof(&s, &f);
        let z = *INDIVIDUALS.choose(&mut s.r).unwrap();
        if !fv.individuals.contains(z) {
            let d = Individual(s.r.gen_range(0..s.model.individuals()));
            let updated = s.g.clone().with_individual(z, d);
            prop_assert_eq!(proof_set(&s.model, &updated, &f).unwrap(), before);
        }
        let p = *PROPS.choose(&mut s.r).unwrap();
        if !fv.props.contains(p) {
            let value = *s.model.props().choose(&mut s.r).unwrap();
            let updated = s.g.clone().with_prop(p, value);
            prop_assert_eq!(proof_set(&s.model, &updated, &f).unwrap(), before);
        }
    }

    #[test]
    fn equal_proof_sets_give_equal_conditionals(seed in any::<u64>()) {
        let mut s = setup(seed);
        let phi = surface_formula(&mut s.r, 4);
        let psi = surface_formula(&mut s.r, 4);
        let candidates = [
            Formula::not(Formula::not(phi.clone())),
            Formula::or(phi.clone(), phi.clone()),
            Formula::and(phi.clone(), Formula::True),
            Formula::or(Formula::False, phi.clone()),
            surface_formula(&mut s.r, 4),
        ];
        for alt in candidates {
            if proof(&s, &alt) == proof(&s, &phi) {
                prop_assert_eq!(
                    proof(&s, &Formula::cond(phi.clone(), psi.clone())),
                    proof(&s, &Formula::cond(alt, psi.clone()))
                );
            }
        }
    }

    #[test]
    fn exists_is_dual_to_forall(seed in any::<u64>()) {
        let mut s = setup(seed);
        let body = surface_formula(&mut s.r, 4);
        let x = *INDIVIDUALS.choose(&mut s.r).unwrap();
        let p = *PROPS.choose(&mut s.r).unwrap();
        let dual_ind = Formula::not(Formula::forall_ind(x, Formula::not(body.clone())));
        prop_assert_eq!(proof(&s, &Formula::exists_ind(x, body.clone())), proof(&s, &dual_ind));
        let dual_prop = Formula::not(Formula::forall_prop(p, Formula::not(body.clone())));
        prop_assert_eq!(proof(&s, &Formula::exists_prop(p, body)), proof(&s, &dual_prop));
    }

    #[test]
    fn proof_sets_of_boolean_connectives(seed in any::<u64>()) {
        let mut s = setup(seed);
        let a = surface_formula(&mut s.r, 4);
        let b = surface_formula(&mut s.r, 4);
        let (pa, pb) = (proof(&s, &a), proof(&s, &b));
        prop_assert_eq!(proof(&s, &Formula::not(a.clone())), pa.complement(s.model.worlds()));
        prop_assert_eq!(proof(&s, &Formula::or(a.clone(), b.clone())), pa.union(pb));
        for w in s.model.world_iter() {
            prop_assert_eq!(eval_qcl(&s.model, &s.g, w, &a).unwrap(), pa.contains(w));
        }
    }
}
