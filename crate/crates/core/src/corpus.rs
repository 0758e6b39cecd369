//! Formula corpora for the correspondence sweeps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::syntax::Formula;

/// Variable and predicate names the corpus is built from: one propositional
/// variable `P`, one individual variable `X` and one unary predicate `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    pub prop: String,
    pub individual: String,
    pub predicate: String,
}

impl Default for Alphabet {
    fn default() -> Self {
        Alphabet {
            prop: "P".into(),
            individual: "X".into(),
            predicate: "b".into(),
        }
    }
}

impl Alphabet {
    pub fn atoms(&self) -> Vec<Formula> {
        vec![
            Formula::prop(&self.prop),
            Formula::atom(&self.predicate, [self.individual.as_str()]),
        ]
    }

    pub fn predicates(&self) -> Vec<(String, usize)> {
        vec![(self.predicate.clone(), 1)]
    }

    fn unary(&self, kind: usize, a: Formula) -> Formula {
        match kind {
            0 => Formula::not(a),
            1 => Formula::forall_ind(&self.individual, a),
            _ => Formula::forall_prop(&self.prop, a),
        }
    }

    fn binary(kind: usize, a: Formula, b: Formula) -> Formula {
        match kind {
            0 => Formula::or(a, b),
            _ => Formula::cond(a, b),
        }
    }
}

/// Every primitive formula of depth at most `depth`, atoms first.
///
/// An atom has depth 0; each connective or quantifier adds one.
pub fn formulas_up_to(depth: usize, alphabet: &Alphabet) -> Vec<Formula> {
    let mut level = alphabet.atoms();
    for _ in 0..depth {
        let mut next = alphabet.atoms();
        for kind in 0..3 {
            next.extend(level.iter().map(|a| alphabet.unary(kind, a.clone())));
        }
        for kind in 0..2 {
            for a in &level {
                next.extend(level.iter().map(|b| Alphabet::binary(kind, a.clone(), b.clone())));
            }
        }
        level = next;
    }
    level
}

/// Size of [`formulas_up_to`] without building it: `c(0) = 2`,
/// `c(k) = 2 + 3·c(k-1) + 2·c(k-1)²`.
pub fn corpus_size(depth: usize) -> u128 {
    (0..depth).fold(2, |c, _| 2 + 3 * c + 2 * c * c)
}

/// A random primitive formula of depth exactly `depth`.
pub fn random_formula(rng: &mut impl Rng, depth: usize, alphabet: &Alphabet) -> Formula {
    if depth == 0 {
        return alphabet.atoms().swap_remove(rng.gen_range(0..2));
    }
    match rng.gen_range(0..5) {
        k @ 0..=2 => alphabet.unary(k, random_formula(rng, depth - 1, alphabet)),
        k => {
            let deep = random_formula(rng, depth - 1, alphabet);
            let shallow = random_formula_up_to(rng, depth - 1, alphabet);
            if rng.gen_bool(0.5) {
                Alphabet::binary(k - 3, deep, shallow)
            } else {
                Alphabet::binary(k - 3, shallow, deep)
            }
        }
    }
}

/// A random primitive formula of depth at most `depth`.
pub fn random_formula_up_to(rng: &mut impl Rng, depth: usize, alphabet: &Alphabet) -> Formula {
    let exact = rng.gen_range(0..=depth);
    random_formula(rng, exact, alphabet)
}

/// `count` formulas of depth exactly `depth` from a ChaCha8 stream seeded
/// with `seed`.
pub fn sample_formulas(seed: u64, count: usize, depth: usize, alphabet: &Alphabet) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_formula(&mut rng, depth, alphabet)).collect()
}

/// The correspondence corpus: everything up to `exhaustive_depth`, then
/// `samples` random formulas one level deeper.
pub fn corpus(exhaustive_depth: usize, samples: usize, seed: u64, alphabet: &Alphabet) -> Vec<Formula> {
    let mut out = formulas_up_to(exhaustive_depth, alphabet);
    out.extend(sample_formulas(seed, samples, exhaustive_depth + 1, alphabet));
    out
}
