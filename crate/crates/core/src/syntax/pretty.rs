use super::formula::Formula;

const IFF: u8 = 1;
const IMP: u8 = 2;
const COND: u8 = 3;
const OR: u8 = 4;
const AND: u8 = 5;
const UNARY: u8 = 6;

/// Prints a formula in the surface syntax with minimal parentheses.
pub fn pretty_qcl(formula: &Formula) -> String {
    let mut out = String::new();
    print(formula, 0, true, &mut out);
    out
}

// `rightmost` is true when nothing follows this subterm before the end of its
// enclosing group, so a binder body may extend to the right without parens.
fn print(formula: &Formula, min_prec: u8, rightmost: bool, out: &mut String) {
    match formula {
        Formula::PropVar(p) => out.push_str(p),
        Formula::Atom { pred, args } => {
            out.push_str(pred);
            out.push('(');
            out.push_str(&args.join(", "));
            out.push(')');
        }
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Not(body) => {
            out.push('~');
            print(body, UNARY, rightmost, out);
        }
        Formula::ForallInd(v, b) => binder("forall", v, b, rightmost, out),
        Formula::ForallProp(v, b) => binder("forallp", v, b, rightmost, out),
        Formula::ExistsInd(v, b) => binder("exists", v, b, rightmost, out),
        Formula::ExistsProp(v, b) => binder("existsp", v, b, rightmost, out),
        Formula::Or(l, r) => binary(" | ", OR, (OR, OR + 1), l, r, min_prec, rightmost, out),
        Formula::And(l, r) => binary(" & ", AND, (AND, AND + 1), l, r, min_prec, rightmost, out),
        Formula::Implies(l, r) => binary(" -> ", IMP, (IMP + 1, IMP), l, r, min_prec, rightmost, out),
        Formula::Cond(l, r) => binary(" => ", COND, (COND + 1, COND + 1), l, r, min_prec, rightmost, out),
        Formula::Iff(l, r) => binary(" <-> ", IFF, (IFF + 1, IFF + 1), l, r, min_prec, rightmost, out),
    }
}

fn binder(keyword: &str, var: &str, body: &Formula, rightmost: bool, out: &mut String) {
    if !rightmost {
        out.push('(');
    }
    out.push_str(keyword);
    out.push(' ');
    out.push_str(var);
    out.push_str(". ");
    print(body, 0, true, out);
    if !rightmost {
        out.push(')');
    }
}

#[allow(clippy::too_many_arguments)]
fn binary(
    op: &str,
    prec: u8,
    (left_min, right_min): (u8, u8),
    left: &Formula,
    right: &Formula,
    min_prec: u8,
    rightmost: bool,
    out: &mut String,
) {
    let parens = prec < min_prec;
    if parens {
        out.push('(');
    }
    print(left, left_min, false, out);
    out.push_str(op);
    print(right, right_min, parens || rightmost, out);
    if parens {
        out.push(')');
    }
}
