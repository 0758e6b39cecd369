use super::Term;

/// Adds `delta` to every bound index at or above `cutoff`.
pub(crate) fn shift(term: &Term, delta: isize, cutoff: usize) -> Term {
    if delta == 0 {
        return term.clone();
    }
    match term {
        Term::Bound(k) if *k >= cutoff => Term::Bound((*k as isize + delta) as usize),
        Term::Lam(b, body) => Term::Lam(b.clone(), Box::new(shift(body, delta, cutoff + 1))),
        Term::App(f, a) => Term::app(shift(f, delta, cutoff), shift(a, delta, cutoff)),
        _ => term.clone(),
    }
}

/// Substitutes `arg` for index `depth` in `body` and lowers the indices above
/// it; `body[0 := arg]` is the β-contraction of `(λ. body) arg`.
fn instantiate(body: &Term, arg: &Term, depth: usize) -> Term {
    match body {
        Term::Bound(k) if *k == depth => shift(arg, depth as isize, 0),
        Term::Bound(k) if *k > depth => Term::Bound(k - 1),
        Term::Lam(b, inner) => Term::Lam(b.clone(), Box::new(instantiate(inner, arg, depth + 1))),
        Term::App(f, a) => Term::app(instantiate(f, arg, depth), instantiate(a, arg, depth)),
        _ => body.clone(),
    }
}

/// Largest index that escapes `depth` binders, if any.
pub(crate) fn max_loose(term: &Term, depth: usize) -> Option<usize> {
    match term {
        Term::Bound(k) if *k >= depth => Some(k - depth),
        Term::Lam(_, body) => max_loose(body, depth + 1),
        Term::App(f, a) => match (max_loose(f, depth), max_loose(a, depth)) {
            (Some(x), Some(y)) => Some(x.max(y)),
            (x, y) => x.or(y),
        },
        _ => None,
    }
}

fn occurs(term: &Term, index: usize) -> bool {
    match term {
        Term::Bound(k) => *k == index,
        Term::Lam(_, body) => occurs(body, index + 1),
        Term::App(f, a) => occurs(f, index) || occurs(a, index),
        _ => false,
    }
}

/// The η-contractum of `λ. body` when `body` is `g 0` with `0` not free in `g`.
fn eta_redex(body: &Term) -> Option<Term> {
    match body {
        Term::App(g, x) if matches!(**x, Term::Bound(0)) && !occurs(g, 0) => Some(shift(g, -1, 0)),
        _ => None,
    }
}

pub fn beta_normalize(term: &Term) -> Term {
    match term {
        Term::Lam(b, body) => Term::Lam(b.clone(), Box::new(beta_normalize(body))),
        Term::App(f, a) => match beta_normalize(f) {
            Term::Lam(_, body) => beta_normalize(&instantiate(&body, a, 0)),
            head => Term::app(head, beta_normalize(a)),
        },
        _ => term.clone(),
    }
}

/// Contracts every η-redex bottom-up. On β-normal input the result is β-normal.
pub fn eta_contract(term: &Term) -> Term {
    match term {
        Term::Lam(b, body) => {
            let body = eta_contract(body);
            eta_redex(&body).unwrap_or_else(|| Term::Lam(b.clone(), Box::new(body)))
        }
        Term::App(f, a) => Term::app(eta_contract(f), eta_contract(a)),
        _ => term.clone(),
    }
}

/// βη-normal form.
pub fn normalize(term: &Term) -> Term {
    eta_contract(&beta_normalize(term))
}

/// One leftmost-outermost β or η step.
pub fn step(term: &Term) -> Option<Term> {
    match term {
        Term::App(f, a) => {
            if let Term::Lam(_, body) = &**f {
                return Some(instantiate(body, a, 0));
            }
            if let Some(f2) = step(f) {
                return Some(Term::app(f2, (**a).clone()));
            }
            step(a).map(|a2| Term::app((**f).clone(), a2))
        }
        Term::Lam(b, body) => {
            if let Some(contracted) = eta_redex(body) {
                return Some(contracted);
            }
            step(body).map(|body2| Term::Lam(b.clone(), Box::new(body2)))
        }
        _ => None,
    }
}

/// Normal form reached by iterating [`step`].
pub fn normalize_by_steps(term: &Term) -> Term {
    let mut current = term.clone();
    while let Some(next) = step(&current) {
        current = next;
    }
    current
}

/// Number of β- and η-redexes in the term.
pub fn redex_count(term: &Term) -> usize {
    let here = match term {
        Term::App(f, _) => matches!(**f, Term::Lam(..)) as usize,
        Term::Lam(_, body) => eta_redex(body).is_some() as usize,
        _ => 0,
    };
    here + match term {
        Term::App(f, a) => redex_count(f) + redex_count(a),
        Term::Lam(_, body) => redex_count(body),
        _ => 0,
    }
}

/// Contracts the `n`-th redex in pre-order; `None` if there are not that many.
pub fn contract_nth(term: &Term, n: usize) -> Option<Term> {
    let mut remaining = n;
    contract_at(term, &mut remaining)
}

fn contract_at(term: &Term, remaining: &mut usize) -> Option<Term> {
    let contractum = match term {
        Term::App(f, a) => match &**f {
            Term::Lam(_, body) => Some(instantiate(body, a, 0)),
            _ => None,
        },
        Term::Lam(_, body) => eta_redex(body),
        _ => None,
    };
    if let Some(c) = contractum {
        if *remaining == 0 {
            return Some(c);
        }
        *remaining -= 1;
    }
    match term {
        Term::App(f, a) => {
            if let Some(f2) = contract_at(f, remaining) {
                return Some(Term::app(f2, (**a).clone()));
            }
            contract_at(a, remaining).map(|a2| Term::app((**f).clone(), a2))
        }
        Term::Lam(b, body) => contract_at(body, remaining).map(|b2| Term::Lam(b.clone(), Box::new(b2))),
        _ => None,
    }
}
