//! Embeds a formula and prints the combinator term, its unfolded normal
//! form and the THF0 text of both.
//!
//!     cargo run --example translate -- "a => forall X. b(X)"

use qcl2hol::embedding::{embed, embed_kernel, EmbeddingEnv};
use qcl2hol::syntax::{parse_with_signature, ParseOptions, Signature};
use qcl2hol::thf::{render, Mode};

fn main() {
    let text = std::env::args().nth(1).unwrap_or_else(|| "(p => q) | ~p".to_owned());
    let options = ParseOptions { infer_predicates: true, ..Default::default() };
    let (formula, sig) = match parse_with_signature(&text, &Signature::new(), options) {
        Ok(parsed) => parsed,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(65);
        }
    };
    let env = EmbeddingEnv::new(&sig);
    let combinators = embed(&formula, &env).expect("declared predicates");
    let kernel = embed_kernel(&formula, &env).expect("declared predicates");
    println!("type:        {}", combinators.type_of().unwrap());
    println!("combinators: {combinators}");
    println!("kernel:      {kernel}");
    println!("\n{}", render(&combinators, Mode::Combinator).unwrap());
    println!("\n{}", render(&kernel, Mode::Kernel).unwrap());
}
