//! THF0 term text, laid out the way tptp4X prints: an application stays on
//! one line unless an argument spans several, λ and ∀ break before a
//! compound body, and binary connectives put the operator at the start of
//! the second line.

use std::collections::BTreeSet;

use super::ThfError;
use crate::embedding::Combinator;
use crate::kernel::{fresh_name, Constant, Term, Type};

/// Which terms [`render`] accepts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Terms in the embedding's image: combinators, `f`, predicates and
    /// variables, with λ only as the argument of a quantifier combinator.
    Combinator,
    /// Any well-typed kernel term.
    Kernel,
}

const WIDTH: usize = 80;

pub fn render_type(ty: &Type) -> String {
    match ty {
        Type::O => "$o".into(),
        Type::I => "$i".into(),
        Type::U => "mu".into(),
        Type::Arrow(a, b) => {
            let left = match **a {
                Type::Arrow(..) => format!("( {} )", render_type(a)),
                _ => render_type(a),
            };
            format!("{left} > {}", render_type(b))
        }
    }
}

/// The term as THF0 text starting at column `column`.
pub fn render(term: &Term, mode: Mode) -> Result<String, ThfError> {
    render_at(term, mode, 0)
}

pub(super) fn render_at(term: &Term, mode: Mode, column: usize) -> Result<String, ThfError> {
    term.type_of()?;
    if mode == Mode::Combinator {
        check_fragment(term, false)?;
    }
    let mut used: BTreeSet<String> = term.free_vars().into_iter().map(|v| v.name).collect();
    used.extend(term.constants().into_iter().map(|(n, _)| n));
    let tree = Builder { used, names: Vec::new() }.node(term);
    Ok(tree.layout(column))
}

fn check_fragment(term: &Term, binder_argument: bool) -> Result<(), ThfError> {
    match term {
        Term::Const(Constant::Named { .. }) | Term::Free(_) | Term::Bound(_) => Ok(()),
        Term::Const(c) => Err(ThfError::OutsideFragment(format!("logical constant {c:?}"))),
        Term::Lam(_, body) if binder_argument => check_fragment(body, false),
        Term::Lam(..) => Err(ThfError::OutsideFragment("λ outside a quantifier combinator".into())),
        Term::App(..) => {
            let (head, args) = term.spine();
            let binder = matches!(head, Term::Const(Constant::Named { name, .. })
                if matches!(Combinator::from_name(name),
                    Some(Combinator::ForallInd | Combinator::ForallProp | Combinator::ExistsInd | Combinator::ExistsProp)));
            check_fragment(head, false)?;
            args.iter().try_for_each(|a| check_fragment(a, binder))
        }
    }
}

/// A term with binder names chosen, ready for layout.
enum Node {
    Word(String),
    Lambda(Vec<(String, String)>, Box<Node>),
    Forall(String, String, Box<Node>),
    Not(Box<Node>),
    Binary(&'static str, Box<Node>, Box<Node>),
    Apply(Box<Node>, Vec<Node>),
}

struct Builder {
    used: BTreeSet<String>,
    names: Vec<String>,
}

impl Builder {
    /// TPTP variables start with an upper-case letter.
    fn bind(&mut self, hint: &str) -> String {
        let mut base: String = hint.chars().filter(|c| c.is_ascii_alphanumeric() || *c == '_').collect();
        match base.chars().next() {
            Some(c) if c.is_ascii_uppercase() => {}
            Some(c) if c.is_ascii_lowercase() => base.replace_range(..1, &c.to_ascii_uppercase().to_string()),
            _ => base.insert(0, 'V'),
        }
        let name = fresh_name(&base, &self.used);
        self.used.insert(name.clone());
        self.names.push(name.clone());
        name
    }

    fn unbind(&mut self) {
        if let Some(name) = self.names.pop() {
            self.used.remove(&name);
        }
    }

    fn node(&mut self, t: &Term) -> Node {
        match t {
            Term::Const(c) => Node::Word(match c {
                Constant::Not => "(~)".into(),
                Constant::Or => "(|)".into(),
                Constant::And => "(&)".into(),
                Constant::Imp => "(=>)".into(),
                Constant::True => "$true".into(),
                Constant::False => "$false".into(),
                Constant::Pi(_) => "!!".into(),
                Constant::Named { name, .. } => name.clone(),
            }),
            Term::Free(v) => Node::Word(v.name.clone()),
            Term::Bound(k) => Node::Word(self.names[self.names.len() - 1 - k].clone()),
            Term::Lam(..) => {
                let mut binders = Vec::new();
                let mut body = t;
                while let Term::Lam(b, inner) = body {
                    binders.push((self.bind(&b.hint), render_type(&b.ty)));
                    body = inner;
                }
                let body = self.node(body);
                for _ in &binders {
                    self.unbind();
                }
                Node::Lambda(binders, Box::new(body))
            }
            Term::App(..) => {
                let (head, args) = t.spine();
                match (head, args.as_slice()) {
                    (Term::Const(Constant::Not), [a]) => Node::Not(Box::new(self.node(a))),
                    (Term::Const(c @ (Constant::Or | Constant::And | Constant::Imp)), [l, r]) => {
                        let op = match c {
                            Constant::Or => "|",
                            Constant::And => "&",
                            _ => "=>",
                        };
                        Node::Binary(op, Box::new(self.node(l)), Box::new(self.node(r)))
                    }
                    (Term::Const(Constant::Pi(_)), [Term::Lam(b, body)]) => {
                        let name = self.bind(&b.hint);
                        let body = self.node(body);
                        self.unbind();
                        Node::Forall(name, render_type(&b.ty), Box::new(body))
                    }
                    _ => Node::Apply(
                        Box::new(self.node(head)),
                        args.iter().map(|a| self.node(a)).collect(),
                    ),
                }
            }
        }
    }
}

fn binder_list(binders: &[(String, String)]) -> String {
    binders.iter().map(|(n, ty)| format!("{n}: {ty}")).collect::<Vec<_>>().join(",")
}

impl Node {
    /// Parenthesized or a single word, so it can stand as an operand.
    fn is_closed(&self) -> bool {
        matches!(self, Node::Word(_) | Node::Apply(..) | Node::Binary(..))
    }

    fn operand(&self, column: usize) -> String {
        if self.is_closed() {
            self.layout(column)
        } else {
            format!("( {} )", self.layout(column + 2))
        }
    }

    /// The argument of `@`: λ needs no parentheses there.
    fn argument(&self, column: usize) -> String {
        match self {
            Node::Lambda(..) => self.layout(column),
            _ => self.operand(column),
        }
    }

    fn layout(&self, column: usize) -> String {
        match self {
            Node::Word(w) => w.clone(),
            Node::Lambda(binders, body) => {
                let head = format!("^ [{}] :", binder_list(binders));
                match **body {
                    Node::Word(_) => format!("{head} {}", body.layout(column)),
                    // A quantifier keeps the λ's column.
                    Node::Forall(..) => format!("{head}\n{}{}", pad(column), body.layout(column)),
                    _ => format!("{head}\n{}{}", pad(column + 2), body.layout(column + 2)),
                }
            }
            Node::Forall(name, ty, body) => {
                let head = format!("! [{name}: {ty}] :");
                match **body {
                    Node::Word(_) => format!("{head} {}", body.layout(column)),
                    _ => format!("{head}\n{}{}", pad(column + 2), body.layout(column + 2)),
                }
            }
            Node::Not(a) => format!("~ {}", a.operand(column + 2)),
            Node::Binary(op, l, r) => format!(
                "( {}\n{}{op} {} )",
                l.operand(column + 2),
                pad(column + 1 - op.len()),
                r.operand(column + 2)
            ),
            Node::Apply(head, args) => {
                // An unparenthesized λ would swallow the arguments after it.
                let flat: Vec<String> = args
                    .iter()
                    .enumerate()
                    .map(|(i, a)| match i + 1 == args.len() {
                        true => a.argument(column + 2),
                        false => a.operand(column + 2),
                    })
                    .collect();
                let head = head.operand(column + 2);
                let one_line = format!("( {head} @ {} )", flat.join(" @ "));
                if !one_line.contains('\n') && column + one_line.len() <= WIDTH {
                    return one_line;
                }
                // Leading words stay on the head's line.
                let mut out = format!("( {head}");
                let mut broken = false;
                for (arg, text) in args.iter().zip(&flat) {
                    if !broken && matches!(arg, Node::Word(_)) {
                        out.push_str(" @ ");
                        out.push_str(text);
                    } else {
                        broken = true;
                        out.push('\n');
                        out.push_str(&pad(column));
                        out.push_str("@ ");
                        out.push_str(text);
                    }
                }
                out.push_str(" )");
                out
            }
        }
    }
}

fn pad(n: usize) -> String {
    " ".repeat(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Var;

    #[test]
    fn types_nest_to_the_left() {
        let f = Type::curried([Type::I, Type::prop()], Type::prop());
        assert_eq!(render_type(&f), "$i > ( $i > $o ) > $i > $o");
        assert_eq!(render_type(&Type::fun(Type::U, Type::prop())), "mu > $i > $o");
    }

    #[test]
    fn small_terms() {
        let p = Term::var("p", Type::prop());
        let cnot_p = Term::app(Combinator::Not.constant(), p.clone());
        assert_eq!(render(&cnot_p, Mode::Combinator).unwrap(), "( cnot @ p )");
        let x = Var::new("X", Type::I);
        let lam = Term::lam(&x, Term::not(Term::app(p, Term::Free(x.clone()))));
        assert_eq!(render(&lam, Mode::Kernel).unwrap(), "^ [X: $i] :\n  ~ ( p @ X )");
        assert!(matches!(render(&lam, Mode::Combinator), Err(ThfError::OutsideFragment(_))));
    }

    #[test]
    fn binder_names_become_variables() {
        let p = Var::new("p", Type::prop());
        let w = Var::new("W", Type::I);
        let t = Term::lam(&p, Term::forall(&w, Term::app(Term::Free(p.clone()), Term::Free(w.clone()))));
        assert_eq!(
            render(&t, Mode::Kernel).unwrap(),
            "^ [P: $i > $o] :\n! [W: $i] :\n  ( P @ W )"
        );
    }
}
