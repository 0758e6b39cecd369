//! Writes the connective definitions and the Barcan and converse Barcan
//! problems to a directory, then runs the THF0 checker over each problem.
//!
//!     cargo run --example emit_barcan -- /tmp/barcan

use std::fs;
use std::path::PathBuf;

use qcl2hol::syntax::{parse_surface, Signature};
use qcl2hol::thf::{emit_axioms, emit_problem, AXIOM_FILE};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "barcan".to_owned()));
    fs::create_dir_all(&dir)?;
    fs::write(dir.join(AXIOM_FILE), emit_axioms().text())?;

    let sig = Signature::new().with_predicate("b", 1)?;
    let problems = [
        ("bf", "(forall X. (a => b(X))) -> (a => forall X. b(X))"),
        ("cbf", "(a => forall X. b(X)) -> (forall X. (a => b(X)))"),
    ];
    for (name, text) in problems {
        let doc = emit_problem(&parse_surface(text, &sig)?, name, &sig)?;
        let summary = doc.check()?;
        let path = dir.join(format!("{name}.p"));
        fs::write(&path, doc.text())?;
        println!("{}: {} type declarations, {} conjecture", path.display(), summary.types, summary.conjectures);
    }
    Ok(())
}
