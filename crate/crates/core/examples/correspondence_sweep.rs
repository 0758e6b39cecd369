//! Truth in a selection model against truth of the embedded formula in the
//! matching Henkin model: every model with at most two worlds and two
//! individuals, every assignment and world, every formula up to depth 2
//! plus seeded depth-3 samples. Pass the sample count as the first argument.

use std::time::Instant;

use qcl2hol::corpus::{corpus, Alphabet};
use qcl2hol::semantics::Bounds;
use qcl2hol::sweep::correspondence_sweep;

fn main() {
    let samples = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200);
    let formulas = corpus(2, samples, 1, &Alphabet::default());
    let start = Instant::now();
    let report = correspondence_sweep(&formulas, &Bounds::new(2, 2)).expect("sweep");
    println!("formulas:      {}", report.formulas);
    println!("structures:    {}", report.structures);
    println!("points:        {}", report.points);
    println!("evaluations:   {}", report.evaluations);
    println!("disagreements: {}", report.disagreements);
    println!("elapsed:       {:.1?}", start.elapsed());
}
