//! Pretty-printer emitting minimal parentheses.
//!
//! The printer is the inverse of the parser: `parse(render(φ))`
//! reconstructs `φ` exactly. Binary connectives reproduce the precedence
//! and associativity of the grammar; quantifiers (whose scope extends
//! maximally to the right) are printed bare exactly when they sit in tail
//! position, i.e. when nothing follows them inside the current
//! parenthesization.

use std::fmt;

use crate::formulas::{ConFormula, Context, LFormula, PreFormula, Term};

const PREC_IMPLIES: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_SLASH: u8 = 4;
const PREC_NOT: u8 = 5;
const PREC_ATOM: u8 = 6;

pub(crate) enum View<'a> {
    Atom(&'a str, &'a [Term]),
    Top,
    Not(&'a dyn Viewable),
    And(&'a dyn Viewable, &'a dyn Viewable),
    Or(&'a dyn Viewable, &'a dyn Viewable),
    Implies(&'a dyn Viewable, &'a dyn Viewable),
    Forall(&'a str, &'a dyn Viewable),
    Exists(&'a str, &'a dyn Viewable),
    Presup(&'a LFormula, &'a dyn Viewable),
    In(&'a Context, &'a dyn Viewable),
}

pub(crate) trait Viewable {
    fn view(&self) -> View<'_>;
}

impl Viewable for LFormula {
    fn view(&self) -> View<'_> {
        match self {
            LFormula::Atom(p, args) => View::Atom(p, args),
            LFormula::Not(f) => View::Not(f.as_ref()),
            LFormula::And(a, b) => View::And(a.as_ref(), b.as_ref()),
            LFormula::Or(a, b) => View::Or(a.as_ref(), b.as_ref()),
            LFormula::Implies(a, b) => View::Implies(a.as_ref(), b.as_ref()),
            LFormula::Forall(x, f) => View::Forall(x, f.as_ref()),
            LFormula::Exists(x, f) => View::Exists(x, f.as_ref()),
        }
    }
}

impl Viewable for PreFormula {
    fn view(&self) -> View<'_> {
        match self {
            PreFormula::Atom(p, args) => View::Atom(p, args),
            PreFormula::Not(f) => View::Not(f.as_ref()),
            PreFormula::And(a, b) => View::And(a.as_ref(), b.as_ref()),
            PreFormula::Or(a, b) => View::Or(a.as_ref(), b.as_ref()),
            PreFormula::Implies(a, b) => View::Implies(a.as_ref(), b.as_ref()),
            PreFormula::Forall(x, f) => View::Forall(x, f.as_ref()),
            PreFormula::Exists(x, f) => View::Exists(x, f.as_ref()),
            PreFormula::Presup(pi, f) => View::Presup(pi, f.as_ref()),
        }
    }
}

impl Viewable for ConFormula {
    fn view(&self) -> View<'_> {
        match self {
            ConFormula::Atom(p, args) => View::Atom(p, args),
            ConFormula::Top => View::Top,
            ConFormula::Not(f) => View::Not(f.as_ref()),
            ConFormula::And(a, b) => View::And(a.as_ref(), b.as_ref()),
            ConFormula::Or(a, b) => View::Or(a.as_ref(), b.as_ref()),
            ConFormula::Implies(a, b) => View::Implies(a.as_ref(), b.as_ref()),
            ConFormula::Forall(x, f) => View::Forall(x, f.as_ref()),
            ConFormula::Exists(x, f) => View::Exists(x, f.as_ref()),
            ConFormula::In(ctx, f) => View::In(ctx, f.as_ref()),
        }
    }
}

fn prec(v: &View<'_>) -> u8 {
    match v {
        View::Atom(_, _) | View::Top | View::In(_, _) => PREC_ATOM,
        View::Not(_) => PREC_NOT,
        View::Presup(_, _) => PREC_SLASH,
        View::And(_, _) => PREC_AND,
        View::Or(_, _) => PREC_OR,
        View::Implies(_, _) => PREC_IMPLIES,
        // Quantifiers are parenthesized by position (tail or not), never by
        // precedence; the value is unused.
        View::Forall(_, _) | View::Exists(_, _) => PREC_IMPLIES,
    }
}

/// Writes `formula`, parenthesizing when its connective binds looser than
/// `req` or when a quantifier occurs outside tail position.
pub(crate) fn write_formula(
    f: &mut fmt::Formatter<'_>,
    formula: &dyn Viewable,
    req: u8,
    tail: bool,
) -> fmt::Result {
    let view = formula.view();
    let quantified = matches!(view, View::Forall(_, _) | View::Exists(_, _));
    let needs_paren = if quantified { !tail } else { prec(&view) < req };
    if needs_paren {
        write!(f, "(")?;
        write_bare(f, &view, PREC_IMPLIES, true)?;
        write!(f, ")")
    } else {
        write_bare(f, &view, req, tail)
    }
}

fn write_bare(f: &mut fmt::Formatter<'_>, view: &View<'_>, _req: u8, tail: bool) -> fmt::Result {
    match view {
        View::Atom(p, args) => {
            write!(f, "{p}")?;
            if !args.is_empty() {
                write!(f, "(")?;
                for (i, t) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")?;
            }
            Ok(())
        }
        View::Top => write!(f, "true"),
        View::Not(x) => {
            write!(f, "~")?;
            write_formula(f, *x, PREC_NOT, tail)
        }
        View::And(a, b) => {
            write_formula(f, *a, PREC_AND, false)?;
            write!(f, " & ")?;
            write_formula(f, *b, PREC_AND + 1, tail)
        }
        View::Or(a, b) => {
            write_formula(f, *a, PREC_OR, false)?;
            write!(f, " | ")?;
            write_formula(f, *b, PREC_OR + 1, tail)
        }
        View::Implies(a, b) => {
            write_formula(f, *a, PREC_IMPLIES + 1, false)?;
            write!(f, " -> ")?;
            write_formula(f, *b, PREC_IMPLIES, tail)
        }
        View::Presup(pi, body) => {
            write_formula(f, *pi, PREC_ATOM, false)?;
            write!(f, "/")?;
            write_formula(f, *body, PREC_SLASH, tail)
        }
        View::Forall(x, body) => {
            write!(f, "forall {x}. ")?;
            write_formula(f, *body, PREC_IMPLIES, true)
        }
        View::Exists(x, body) => {
            write!(f, "exists {x}. ")?;
            write_formula(f, *body, PREC_IMPLIES, true)
        }
        View::In(ctx, body) => {
            write!(f, "in({ctx}, ")?;
            write_formula(f, *body, PREC_IMPLIES, true)?;
            write!(f, ")")
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) | Term::Const(x) => write!(f, "{x}"),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                for (i, t) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write_formula(f, m, PREC_IMPLIES, true)?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for LFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self, PREC_IMPLIES, true)
    }
}

impl fmt::Display for PreFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self, PREC_IMPLIES, true)
    }
}

impl fmt::Display for ConFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self, PREC_IMPLIES, true)
    }
}

/// Renders a term without whitespace (`f(a,b)`), for single-token fields in
/// proof traces.
pub(crate) fn term_compact(t: &Term) -> String {
    match t {
        Term::Var(x) | Term::Const(x) => x.clone(),
        Term::App(name, args) => {
            let inner: Vec<String> = args.iter().map(term_compact).collect();
            format!("{}({})", name, inner.join(","))
        }
    }
}
