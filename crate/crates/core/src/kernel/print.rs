use std::collections::BTreeSet;
use std::fmt::{self, Write};

use super::{Constant, Term};

/// `hint` if unused, else `hint` followed by the smallest unused positive suffix.
pub fn fresh_name(hint: &str, used: &BTreeSet<String>) -> String {
    if !used.contains(hint) {
        return hint.to_owned();
    }
    (1..)
        .map(|k| format!("{hint}{k}"))
        .find(|candidate| !used.contains(candidate))
        .expect("unbounded suffix search")
}

struct Printer {
    used: BTreeSet<String>,
    names: Vec<String>,
}

impl Printer {
    fn bind(&mut self, hint: &str) -> String {
        let name = fresh_name(hint, &self.used);
        self.used.insert(name.clone());
        self.names.push(name.clone());
        name
    }

    fn unbind(&mut self) {
        if let Some(name) = self.names.pop() {
            self.used.remove(&name);
        }
    }

    fn term(&mut self, t: &Term, out: &mut String) {
        match t {
            Term::Lam(b, body) => {
                let name = self.bind(&b.hint);
                let _ = write!(out, "λ{name}:{}. ", b.ty);
                self.term(body, out);
                self.unbind();
            }
            _ => self.atomic(t, out),
        }
    }

    fn atomic(&mut self, t: &Term, out: &mut String) {
        match t {
            Term::Const(c) => out.push_str(&constant_symbol(c)),
            Term::Free(v) => out.push_str(&v.name),
            Term::Bound(k) => match self.names.len().checked_sub(k + 1) {
                Some(pos) => out.push_str(&self.names[pos]),
                None => {
                    let _ = write!(out, "#{k}");
                }
            },
            Term::Lam(..) => {
                out.push('(');
                self.term(t, out);
                out.push(')');
            }
            Term::App(..) => {
                let (head, args) = t.spine();
                match (head, args.as_slice()) {
                    (Term::Const(Constant::Not), [a]) => {
                        out.push('¬');
                        self.atomic(a, out);
                    }
                    (Term::Const(c @ (Constant::Or | Constant::And | Constant::Imp)), [l, r]) => {
                        out.push('(');
                        self.atomic(l, out);
                        let _ = write!(out, " {} ", constant_symbol(c));
                        self.atomic(r, out);
                        out.push(')');
                    }
                    (Term::Const(Constant::Pi(_)), [Term::Lam(b, body)]) => {
                        let name = self.bind(&b.hint);
                        let _ = write!(out, "(∀{name}:{}. ", b.ty);
                        self.term(body, out);
                        out.push(')');
                        self.unbind();
                    }
                    _ => {
                        out.push('(');
                        self.atomic(head, out);
                        for a in args {
                            out.push(' ');
                            self.atomic(a, out);
                        }
                        out.push(')');
                    }
                }
            }
        }
    }
}

fn constant_symbol(c: &Constant) -> String {
    match c {
        Constant::Not => "¬".into(),
        Constant::Or => "∨".into(),
        Constant::And => "∧".into(),
        Constant::Imp => "→".into(),
        Constant::True => "⊤".into(),
        Constant::False => "⊥".into(),
        Constant::Pi(ty) => format!("Π[{ty}]"),
        Constant::Named { name, .. } => name.clone(),
    }
}

/// Names that a binder must not take: free variables and named constants.
pub(crate) fn reserved_names(t: &Term) -> BTreeSet<String> {
    let mut used: BTreeSet<String> = t.free_vars().into_iter().map(|v| v.name).collect();
    used.extend(t.constants().into_iter().map(|(n, _)| n));
    used
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut printer = Printer {
            used: reserved_names(self),
            names: Vec::new(),
        };
        let mut out = String::new();
        printer.term(self, &mut out);
        f.write_str(&out)
    }
}
