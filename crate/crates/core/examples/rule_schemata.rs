//! RCEA, RCEC and RCK over the standard instance battery: whenever the
//! premise is valid in a model, so is the conclusion.

use qcl2hol::semantics::{standard_battery, Bounds};
use qcl2hol::sweep::rule_sweep;

fn main() {
    let worlds = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let summaries = rule_sweep(&standard_battery(), &Bounds::new(worlds, 2)).expect("sweep");
    for s in &summaries {
        println!(
            "{:<5} {:<28} models {:>8}  premise valid {:>8}  violations {}",
            s.instance.rule.to_string(),
            s.instance.label,
            s.models,
            s.premise_valid,
            s.violations
        );
    }
}
