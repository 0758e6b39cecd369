//! Builds a two-world selection model by hand, lifts it to its Henkin
//! model and compares both sides of the correspondence at each world.

use qcl2hol::embedding::{embed_valid_kernel, EmbeddingEnv};
use qcl2hol::henkin::{build_henkin, correspondence_sides, hol_valid};
use qcl2hol::semantics::{model_valid, QclAssignment, SelectionModel, World, WorldSet};
use qcl2hol::syntax::{free_vars, parse_qcl, Signature};

fn main() {
    // f(0, {0}) = {1}: at world 0 the most similar p-world is world 1.
    let mut model = SelectionModel::new(2, 1).unwrap();
    model.set_selection(World(0), WorldSet(0b01), WorldSet(0b10)).unwrap();
    model.set_selection(World(1), WorldSet(0b01), WorldSet(0b01)).unwrap();

    let sig = Signature::new();
    let g = QclAssignment::new().with_prop("p", WorldSet(0b01));
    for text in ["p => p", "p => ~p", "forallp P. (P => (P | ~P))"] {
        let f = parse_qcl(text, &sig).unwrap();
        for s in model.world_iter() {
            let sides = correspondence_sides(&model, &g, s, &f).unwrap();
            println!("{text:<28} world {}  qcl {:<5} hol {}", s.0, sides.qcl, sides.hol);
        }
        let henkin = build_henkin(&model);
        let embedded = embed_valid_kernel(&f, &EmbeddingEnv::new(&sig)).unwrap();
        if free_vars(&f).is_empty() {
            println!("{text:<28} valid: qcl {} hol {}", model_valid(&model, &f).unwrap(), hol_valid(&henkin, &embedded).unwrap());
        }
    }
}
