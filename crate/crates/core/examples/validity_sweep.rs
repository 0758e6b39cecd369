//! Validity in each model against validity of the embedded formula in the
//! corresponding Henkin model, over the same models and corpus as the
//! correspondence sweep.

use std::time::Instant;

use qcl2hol::corpus::{corpus, Alphabet};
use qcl2hol::semantics::Bounds;
use qcl2hol::sweep::validity_sweep;

fn main() {
    let samples = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200);
    let formulas = corpus(2, samples, 1, &Alphabet::default());
    let start = Instant::now();
    let report = validity_sweep(&formulas, &Bounds::new(2, 2)).expect("sweep");
    println!("formulas:      {}", report.formulas);
    println!("structures:    {}", report.structures);
    println!("pairs:         {}", report.pairs);
    println!("evaluations:   {}", report.evaluations);
    println!("disagreements: {}", report.disagreements);
    println!("elapsed:       {:.1?}", start.elapsed());
}
