//! Searches all models with at most two worlds and two individuals for a
//! countermodel, printing the first one found.
//!
//!     cargo run --example validate -- "(p => q) -> (p -> q)"

use qcl2hol::semantics::format::write_countermodel;
use qcl2hol::semantics::{valid_up_to, Bounds, Verdict};
use qcl2hol::syntax::{parse_with_signature, ParseOptions, Signature};

fn main() {
    let text = std::env::args().nth(1).unwrap_or_else(|| "(p => q) -> (p -> q)".to_owned());
    let options = ParseOptions { infer_predicates: true, ..Default::default() };
    let (formula, _) = parse_with_signature(&text, &Signature::new(), options).expect("formula");
    match valid_up_to(&formula, &Bounds::new(2, 2)).expect("bounds") {
        Verdict::Valid { models } => println!("valid in all {models} models"),
        Verdict::Countermodel(cm) => print!("countermodel\n{}", write_countermodel(&cm)),
    }
}
