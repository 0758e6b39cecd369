use qcl2hol::syntax::{parse_surface, Signature};
use qcl2hol::thf::{emit_axioms, emit_problem, tokens};

const AXIOMS: &str = include_str!("golden/CK_axioms.ax");
const BF: &str = include_str!("golden/bf.p");
const CBF: &str = include_str!("golden/cbf.p");

fn barcan_sig() -> Signature {
    Signature::new().with_predicate("b", 1).unwrap()
}

#[test]
fn axiom_file_matches_golden() {
    let doc = emit_axioms();
    assert_eq!(tokens(doc.text()).unwrap(), tokens(AXIOMS).unwrap());
    assert_eq!(doc.text(), AXIOMS);
}

#[test]
fn barcan_problems_match_golden() {
    let sig = barcan_sig();
    for (name, text, golden) in [
        ("bf", "(forall X. (a => b(X))) -> (a => forall X. b(X))", BF),
        ("cbf", "(a => forall X. b(X)) -> (forall X. (a => b(X)))", CBF),
    ] {
        let formula = parse_surface(text, &sig).unwrap();
        let doc = emit_problem(&formula, name, &sig).unwrap();
        assert_eq!(tokens(doc.text()).unwrap(), tokens(golden).unwrap(), "{name}");
        assert_eq!(doc.text(), golden, "{name}");
        let summary = doc.check().unwrap();
        assert_eq!((summary.includes, summary.conjectures), (1, 1));
    }
}

#[test]
fn golden_files_pass_the_checker() {
    let resolve = |file: &str| (file == "CK_axioms.ax").then(|| AXIOMS.to_owned());
    let axioms = qcl2hol::thf::check_document(AXIOMS, &resolve).unwrap();
    assert_eq!((axioms.types, axioms.definitions), (15, 14));
    for golden in [BF, CBF] {
        qcl2hol::thf::check_document(golden, &resolve).unwrap();
    }
}
