//! βη-normalization and capture-avoiding substitution in the HOL kernel.

use qcl2hol::embedding::{embed, unfold, EmbeddingEnv};
use qcl2hol::kernel::{normalize, normalize_by_steps, redex_count, substitute, Term, Type, Var};
use qcl2hol::syntax::{parse_qcl, Signature};

fn main() {
    let f = Term::constant("g", Type::fun(Type::U, Type::O));
    let x = Var::new("X", Type::U);
    let y = Var::new("Y", Type::U);
    let body = Term::lam(&y, Term::app(f, Term::Free(x.clone())));
    println!("[Y/X]({body}) = {}", substitute(&body, &x, &Term::Free(y)).unwrap());

    let formula = parse_qcl("p => ~q", &Signature::new()).unwrap();
    let unfolded = unfold(&embed(&formula, &EmbeddingEnv::default()).unwrap());
    println!("\nunfolded:   {unfolded}");
    println!("β-redexes:  {}", redex_count(&unfolded));
    let nf = normalize(&unfolded);
    println!("normalized: {nf}");
    println!("stepwise:   {}", normalize_by_steps(&unfolded));
}
