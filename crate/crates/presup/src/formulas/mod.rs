//! Abstract syntax for terms, the three formula languages, and contexts.
//!
//! Three formula types share the first-order core:
//!
//! * [`LFormula`] — plain first-order logic,
//! * [`PreFormula`] — adds the binary presupposition connective `π/φ`
//!   ([`PreFormula::Presup`]), whose left argument is always an [`LFormula`],
//! * [`ConFormula`] — adds nested context statements `in(Γ, φ)`
//!   ([`ConFormula::In`]) and the verum constant [`ConFormula::Top`].
//!
//! A [`Context`] is a finite set of `LFormula`s, deduplicated up to
//! alpha-equivalence.

use std::collections::BTreeSet;

mod context;
pub use context::Context;

/// A first-order term: a variable, a constant, or a function application.
///
/// Zero-ary functions are represented as [`Term::Const`]; application
/// argument lists are always non-empty.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::Const(name.into())
    }

    pub fn app(name: impl Into<String>, args: Vec<Term>) -> Term {
        assert!(!args.is_empty(), "zero-ary applications are constants");
        Term::App(name.into(), args)
    }

    /// All variable names occurring in the term.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::Const(_) => {}
            Term::App(_, args) => {
                for a in args {
                    a.collect_vars(out);
                }
            }
        }
    }

    pub fn contains_var(&self, var: &str) -> bool {
        match self {
            Term::Var(x) => x == var,
            Term::Const(_) => false,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(var)),
        }
    }

    /// Replaces every occurrence of the variable `var` by `term`.
    pub fn substitute(&self, var: &str, term: &Term) -> Term {
        match self {
            Term::Var(x) if x == var => term.clone(),
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.substitute(var, term)).collect())
            }
        }
    }

    pub(crate) fn collect_identifiers(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) | Term::Const(x) => {
                out.insert(x.clone());
            }
            Term::App(f, args) => {
                out.insert(f.clone());
                for a in args {
                    a.collect_identifiers(out);
                }
            }
        }
    }
}

/// Picks `base` with the least numeric suffix that avoids every name in
/// `taken` (`x` → `x1`, `x2`, …).
pub(crate) fn fresh_variant(base: &str, taken: &BTreeSet<String>) -> String {
    let mut n: u64 = 1;
    loop {
        let candidate = format!("{base}{n}");
        if !taken.contains(&candidate) {
            return candidate;
        }
        n += 1;
    }
}

/// Matches two variable occurrences under a stack of bound-name pairs.
///
/// The rightmost binding wins (inner quantifiers shadow outer ones); two
/// free occurrences match only if they are the same name.
fn vars_match(a: &str, b: &str, env: &[(String, String)]) -> bool {
    let left = env.iter().rposition(|(x, _)| x == a);
    let right = env.iter().rposition(|(_, y)| y == b);
    match (left, right) {
        (Some(i), Some(j)) => i == j,
        (None, None) => a == b,
        _ => false,
    }
}

fn terms_alpha_eq(a: &Term, b: &Term, env: &[(String, String)]) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => vars_match(x, y, env),
        (Term::Const(c), Term::Const(d)) => c == d,
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| terms_alpha_eq(x, y, env))
        }
        _ => false,
    }
}

macro_rules! boolean_constructors {
    ($ty:ident) => {
        impl $ty {
            /// A zero-ary (propositional) atom.
            pub fn atom(name: impl Into<String>) -> $ty {
                $ty::Atom(name.into(), Vec::new())
            }

            pub fn pred(name: impl Into<String>, args: Vec<Term>) -> $ty {
                $ty::Atom(name.into(), args)
            }

            pub fn not(f: $ty) -> $ty {
                $ty::Not(Box::new(f))
            }

            pub fn and(a: $ty, b: $ty) -> $ty {
                $ty::And(Box::new(a), Box::new(b))
            }

            pub fn or(a: $ty, b: $ty) -> $ty {
                $ty::Or(Box::new(a), Box::new(b))
            }

            pub fn implies(a: $ty, b: $ty) -> $ty {
                $ty::Implies(Box::new(a), Box::new(b))
            }

            pub fn forall(x: impl Into<String>, f: $ty) -> $ty {
                $ty::Forall(x.into(), Box::new(f))
            }

            pub fn exists(x: impl Into<String>, f: $ty) -> $ty {
                $ty::Exists(x.into(), Box::new(f))
            }
        }
    };
}

/// A formula of first-order logic (the base language).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LFormula {
    Atom(String, Vec<Term>),
    Not(Box<LFormula>),
    And(Box<LFormula>, Box<LFormula>),
    Or(Box<LFormula>, Box<LFormula>),
    Implies(Box<LFormula>, Box<LFormula>),
    Forall(String, Box<LFormula>),
    Exists(String, Box<LFormula>),
}

boolean_constructors!(LFormula);

impl LFormula {
    /// The variables with at least one free occurrence.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            LFormula::Atom(_, args) => {
                for t in args {
                    collect_free_term(t, bound, out);
                }
            }
            LFormula::Not(f) => f.collect_free(bound, out),
            LFormula::And(a, b) | LFormula::Or(a, b) | LFormula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            LFormula::Forall(x, f) | LFormula::Exists(x, f) => {
                bound.push(x.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Capture-avoiding substitution of `term` for free occurrences of `var`.
    pub fn substitute(&self, var: &str, term: &Term) -> LFormula {
        match self {
            LFormula::Atom(p, args) => {
                LFormula::Atom(p.clone(), args.iter().map(|t| t.substitute(var, term)).collect())
            }
            LFormula::Not(f) => LFormula::not(f.substitute(var, term)),
            LFormula::And(a, b) => LFormula::and(a.substitute(var, term), b.substitute(var, term)),
            LFormula::Or(a, b) => LFormula::or(a.substitute(var, term), b.substitute(var, term)),
            LFormula::Implies(a, b) => {
                LFormula::implies(a.substitute(var, term), b.substitute(var, term))
            }
            LFormula::Forall(x, f) => {
                let (x, f) = subst_under_binder(x, f.as_ref(), var, term, |f, v, t| f.substitute(v, t), LFormula::free_vars);
                LFormula::Forall(x, Box::new(f))
            }
            LFormula::Exists(x, f) => {
                let (x, f) = subst_under_binder(x, f.as_ref(), var, term, |f, v, t| f.substitute(v, t), LFormula::free_vars);
                LFormula::Exists(x, Box::new(f))
            }
        }
    }

    /// Equality up to consistent renaming of bound variables.
    pub fn alpha_eq(&self, other: &LFormula) -> bool {
        self.alpha_eq_env(other, &mut Vec::new())
    }

    pub(crate) fn alpha_eq_env(&self, other: &LFormula, env: &mut Vec<(String, String)>) -> bool {
        match (self, other) {
            (LFormula::Atom(p, xs), LFormula::Atom(q, ys)) => {
                p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| terms_alpha_eq(x, y, env))
            }
            (LFormula::Not(a), LFormula::Not(b)) => a.alpha_eq_env(b, env),
            (LFormula::And(a1, a2), LFormula::And(b1, b2))
            | (LFormula::Or(a1, a2), LFormula::Or(b1, b2))
            | (LFormula::Implies(a1, a2), LFormula::Implies(b1, b2)) => {
                a1.alpha_eq_env(b1, env) && a2.alpha_eq_env(b2, env)
            }
            (LFormula::Forall(x, a), LFormula::Forall(y, b))
            | (LFormula::Exists(x, a), LFormula::Exists(y, b)) => {
                env.push((x.clone(), y.clone()));
                let r = a.alpha_eq_env(b, env);
                env.pop();
                r
            }
            _ => false,
        }
    }

    /// Every identifier occurring anywhere in the formula: predicates,
    /// functions, constants, and variables (bound or free).
    pub fn identifiers(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_identifiers(&mut out);
        out
    }

    pub(crate) fn collect_identifiers(&self, out: &mut BTreeSet<String>) {
        match self {
            LFormula::Atom(p, args) => {
                out.insert(p.clone());
                for t in args {
                    t.collect_identifiers(out);
                }
            }
            LFormula::Not(f) => f.collect_identifiers(out),
            LFormula::And(a, b) | LFormula::Or(a, b) | LFormula::Implies(a, b) => {
                a.collect_identifiers(out);
                b.collect_identifiers(out);
            }
            LFormula::Forall(x, f) | LFormula::Exists(x, f) => {
                out.insert(x.clone());
                f.collect_identifiers(out);
            }
        }
    }
}

fn collect_free_term(t: &Term, bound: &[String], out: &mut BTreeSet<String>) {
    match t {
        Term::Var(x) => {
            if !bound.iter().any(|b| b == x) {
                out.insert(x.clone());
            }
        }
        Term::Const(_) => {}
        Term::App(_, args) => {
            for a in args {
                collect_free_term(a, bound, out);
            }
        }
    }
}

/// Substitutes under a binder `x`, renaming `x` when `term` would be
/// captured. The renamed variable gets the least fresh numeric suffix.
fn subst_under_binder<F: Clone>(
    x: &str,
    body: &F,
    var: &str,
    term: &Term,
    subst: impl Fn(&F, &str, &Term) -> F,
    free_vars: impl Fn(&F) -> BTreeSet<String>,
) -> (String, F) {
    if x == var {
        return (x.to_string(), body.clone());
    }
    let body_free = free_vars(body);
    if term.contains_var(x) && body_free.contains(var) {
        let mut taken = body_free;
        term.collect_vars(&mut taken);
        taken.insert(var.to_string());
        let fresh = fresh_variant(x, &taken);
        let renamed = subst(body, x, &Term::Var(fresh.clone()));
        (fresh.clone(), subst(&renamed, var, term))
    } else {
        (x.to_string(), subst(body, var, term))
    }
}

/// A formula of the presupposition language: first-order logic plus the
/// binary presupposition connective `π/φ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PreFormula {
    Atom(String, Vec<Term>),
    Not(Box<PreFormula>),
    And(Box<PreFormula>, Box<PreFormula>),
    Or(Box<PreFormula>, Box<PreFormula>),
    Implies(Box<PreFormula>, Box<PreFormula>),
    Forall(String, Box<PreFormula>),
    Exists(String, Box<PreFormula>),
    /// `π/φ`: the body `φ` presupposes the first-order formula `π`.
    Presup(LFormula, Box<PreFormula>),
}

boolean_constructors!(PreFormula);

impl PreFormula {
    pub fn presup(pi: LFormula, body: PreFormula) -> PreFormula {
        PreFormula::Presup(pi, Box::new(body))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            PreFormula::Atom(_, args) => {
                for t in args {
                    collect_free_term(t, bound, out);
                }
            }
            PreFormula::Not(f) => f.collect_free(bound, out),
            PreFormula::And(a, b) | PreFormula::Or(a, b) | PreFormula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            PreFormula::Forall(x, f) | PreFormula::Exists(x, f) => {
                bound.push(x.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
            PreFormula::Presup(pi, f) => {
                // Free variables of the first-order half, minus those bound
                // by quantifiers enclosing the connective.
                for v in pi.free_vars() {
                    if !bound.iter().any(|b| *b == v) {
                        out.insert(v);
                    }
                }
                f.collect_free(bound, out);
            }
        }
    }

    pub fn substitute(&self, var: &str, term: &Term) -> PreFormula {
        match self {
            PreFormula::Atom(p, args) => {
                PreFormula::Atom(p.clone(), args.iter().map(|t| t.substitute(var, term)).collect())
            }
            PreFormula::Not(f) => PreFormula::not(f.substitute(var, term)),
            PreFormula::And(a, b) => {
                PreFormula::and(a.substitute(var, term), b.substitute(var, term))
            }
            PreFormula::Or(a, b) => PreFormula::or(a.substitute(var, term), b.substitute(var, term)),
            PreFormula::Implies(a, b) => {
                PreFormula::implies(a.substitute(var, term), b.substitute(var, term))
            }
            PreFormula::Forall(x, f) => {
                let (x, f) = subst_under_binder(x, f.as_ref(), var, term, |f, v, t| f.substitute(v, t), PreFormula::free_vars);
                PreFormula::Forall(x, Box::new(f))
            }
            PreFormula::Exists(x, f) => {
                let (x, f) = subst_under_binder(x, f.as_ref(), var, term, |f, v, t| f.substitute(v, t), PreFormula::free_vars);
                PreFormula::Exists(x, Box::new(f))
            }
            PreFormula::Presup(pi, f) => {
                PreFormula::Presup(pi.substitute(var, term), Box::new(f.substitute(var, term)))
            }
        }
    }

    pub fn alpha_eq(&self, other: &PreFormula) -> bool {
        self.alpha_eq_env(other, &mut Vec::new())
    }

    fn alpha_eq_env(&self, other: &PreFormula, env: &mut Vec<(String, String)>) -> bool {
        match (self, other) {
            (PreFormula::Atom(p, xs), PreFormula::Atom(q, ys)) => {
                p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| terms_alpha_eq(x, y, env))
            }
            (PreFormula::Not(a), PreFormula::Not(b)) => a.alpha_eq_env(b, env),
            (PreFormula::And(a1, a2), PreFormula::And(b1, b2))
            | (PreFormula::Or(a1, a2), PreFormula::Or(b1, b2))
            | (PreFormula::Implies(a1, a2), PreFormula::Implies(b1, b2)) => {
                a1.alpha_eq_env(b1, env) && a2.alpha_eq_env(b2, env)
            }
            (PreFormula::Forall(x, a), PreFormula::Forall(y, b))
            | (PreFormula::Exists(x, a), PreFormula::Exists(y, b)) => {
                env.push((x.clone(), y.clone()));
                let r = a.alpha_eq_env(b, env);
                env.pop();
                r
            }
            (PreFormula::Presup(p1, f1), PreFormula::Presup(p2, f2)) => {
                p1.alpha_eq_env(p2, env) && f1.alpha_eq_env(f2, env)
            }
            _ => false,
        }
    }

    pub fn identifiers(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_identifiers(&mut out);
        out
    }

    fn collect_identifiers(&self, out: &mut BTreeSet<String>) {
        match self {
            PreFormula::Atom(p, args) => {
                out.insert(p.clone());
                for t in args {
                    t.collect_identifiers(out);
                }
            }
            PreFormula::Not(f) => f.collect_identifiers(out),
            PreFormula::And(a, b) | PreFormula::Or(a, b) | PreFormula::Implies(a, b) => {
                a.collect_identifiers(out);
                b.collect_identifiers(out);
            }
            PreFormula::Forall(x, f) | PreFormula::Exists(x, f) => {
                out.insert(x.clone());
                f.collect_identifiers(out);
            }
            PreFormula::Presup(pi, f) => {
                pi.collect_identifiers(out);
                f.collect_identifiers(out);
            }
        }
    }

    /// The structural embedding back into the base language, available
    /// exactly when the formula contains no presupposition connective.
    pub fn to_l(&self) -> Option<LFormula> {
        match self {
            PreFormula::Atom(p, args) => Some(LFormula::Atom(p.clone(), args.clone())),
            PreFormula::Not(f) => Some(LFormula::not(f.to_l()?)),
            PreFormula::And(a, b) => Some(LFormula::and(a.to_l()?, b.to_l()?)),
            PreFormula::Or(a, b) => Some(LFormula::or(a.to_l()?, b.to_l()?)),
            PreFormula::Implies(a, b) => Some(LFormula::implies(a.to_l()?, b.to_l()?)),
            PreFormula::Forall(x, f) => Some(LFormula::Forall(x.clone(), Box::new(f.to_l()?))),
            PreFormula::Exists(x, f) => Some(LFormula::Exists(x.clone(), Box::new(f.to_l()?))),
            PreFormula::Presup(_, _) => None,
        }
    }
}

impl From<LFormula> for PreFormula {
    fn from(f: LFormula) -> PreFormula {
        match f {
            LFormula::Atom(p, args) => PreFormula::Atom(p, args),
            LFormula::Not(f) => PreFormula::not((*f).into()),
            LFormula::And(a, b) => PreFormula::and((*a).into(), (*b).into()),
            LFormula::Or(a, b) => PreFormula::or((*a).into(), (*b).into()),
            LFormula::Implies(a, b) => PreFormula::implies((*a).into(), (*b).into()),
            LFormula::Forall(x, f) => PreFormula::Forall(x, Box::new((*f).into())),
            LFormula::Exists(x, f) => PreFormula::Exists(x, Box::new((*f).into())),
        }
    }
}

/// A formula of the context language: first-order logic plus nested
/// context statements `in(Γ, φ)` and the verum constant `⊤`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConFormula {
    Atom(String, Vec<Term>),
    Not(Box<ConFormula>),
    And(Box<ConFormula>, Box<ConFormula>),
    Or(Box<ConFormula>, Box<ConFormula>),
    Implies(Box<ConFormula>, Box<ConFormula>),
    Forall(String, Box<ConFormula>),
    Exists(String, Box<ConFormula>),
    /// `in(Γ, φ)`: `φ` holds in the extension of the current context by `Γ`.
    In(Context, Box<ConFormula>),
    Top,
}

boolean_constructors!(ConFormula);

impl ConFormula {
    pub fn in_context(context: Context, body: ConFormula) -> ConFormula {
        ConFormula::In(context, Box::new(body))
    }

    /// The base-language reading of a formula that mentions neither `in`
    /// nor `true`, or `None` if it mentions either.
    pub fn to_l(&self) -> Option<LFormula> {
        match self {
            ConFormula::Atom(p, args) => Some(LFormula::Atom(p.clone(), args.clone())),
            ConFormula::Not(f) => Some(LFormula::not(f.to_l()?)),
            ConFormula::And(a, b) => Some(LFormula::and(a.to_l()?, b.to_l()?)),
            ConFormula::Or(a, b) => Some(LFormula::or(a.to_l()?, b.to_l()?)),
            ConFormula::Implies(a, b) => Some(LFormula::implies(a.to_l()?, b.to_l()?)),
            ConFormula::Forall(x, f) => Some(LFormula::Forall(x.clone(), Box::new(f.to_l()?))),
            ConFormula::Exists(x, f) => Some(LFormula::Exists(x.clone(), Box::new(f.to_l()?))),
            ConFormula::In(..) | ConFormula::Top => None,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            ConFormula::Atom(_, args) => {
                for t in args {
                    collect_free_term(t, bound, out);
                }
            }
            ConFormula::Top => {}
            ConFormula::Not(f) => f.collect_free(bound, out),
            ConFormula::And(a, b) | ConFormula::Or(a, b) | ConFormula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            ConFormula::Forall(x, f) | ConFormula::Exists(x, f) => {
                bound.push(x.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
            ConFormula::In(ctx, f) => {
                for member in ctx.iter() {
                    for v in member.free_vars() {
                        if !bound.iter().any(|b| *b == v) {
                            out.insert(v);
                        }
                    }
                }
                f.collect_free(bound, out);
            }
        }
    }

    pub fn substitute(&self, var: &str, term: &Term) -> ConFormula {
        match self {
            ConFormula::Atom(p, args) => {
                ConFormula::Atom(p.clone(), args.iter().map(|t| t.substitute(var, term)).collect())
            }
            ConFormula::Top => ConFormula::Top,
            ConFormula::Not(f) => ConFormula::not(f.substitute(var, term)),
            ConFormula::And(a, b) => {
                ConFormula::and(a.substitute(var, term), b.substitute(var, term))
            }
            ConFormula::Or(a, b) => ConFormula::or(a.substitute(var, term), b.substitute(var, term)),
            ConFormula::Implies(a, b) => {
                ConFormula::implies(a.substitute(var, term), b.substitute(var, term))
            }
            ConFormula::Forall(x, f) => {
                let (x, f) = subst_under_binder(x, f.as_ref(), var, term, |f, v, t| f.substitute(v, t), ConFormula::free_vars);
                ConFormula::Forall(x, Box::new(f))
            }
            ConFormula::Exists(x, f) => {
                let (x, f) = subst_under_binder(x, f.as_ref(), var, term, |f, v, t| f.substitute(v, t), ConFormula::free_vars);
                ConFormula::Exists(x, Box::new(f))
            }
            ConFormula::In(ctx, f) => {
                ConFormula::In(ctx.substitute(var, term), Box::new(f.substitute(var, term)))
            }
        }
    }

    pub fn alpha_eq(&self, other: &ConFormula) -> bool {
        self.alpha_eq_env(other, &mut Vec::new())
    }

    fn alpha_eq_env(&self, other: &ConFormula, env: &mut Vec<(String, String)>) -> bool {
        match (self, other) {
            (ConFormula::Atom(p, xs), ConFormula::Atom(q, ys)) => {
                p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| terms_alpha_eq(x, y, env))
            }
            (ConFormula::Top, ConFormula::Top) => true,
            (ConFormula::Not(a), ConFormula::Not(b)) => a.alpha_eq_env(b, env),
            (ConFormula::And(a1, a2), ConFormula::And(b1, b2))
            | (ConFormula::Or(a1, a2), ConFormula::Or(b1, b2))
            | (ConFormula::Implies(a1, a2), ConFormula::Implies(b1, b2)) => {
                a1.alpha_eq_env(b1, env) && a2.alpha_eq_env(b2, env)
            }
            (ConFormula::Forall(x, a), ConFormula::Forall(y, b))
            | (ConFormula::Exists(x, a), ConFormula::Exists(y, b)) => {
                env.push((x.clone(), y.clone()));
                let r = a.alpha_eq_env(b, env);
                env.pop();
                r
            }
            (ConFormula::In(c1, f1), ConFormula::In(c2, f2)) => {
                c1.alpha_eq_env(c2, env) && f1.alpha_eq_env(f2, env)
            }
            _ => false,
        }
    }

    pub fn identifiers(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_identifiers(&mut out);
        out
    }

    fn collect_identifiers(&self, out: &mut BTreeSet<String>) {
        match self {
            ConFormula::Atom(p, args) => {
                out.insert(p.clone());
                for t in args {
                    t.collect_identifiers(out);
                }
            }
            ConFormula::Top => {}
            ConFormula::Not(f) => f.collect_identifiers(out),
            ConFormula::And(a, b) | ConFormula::Or(a, b) | ConFormula::Implies(a, b) => {
                a.collect_identifiers(out);
                b.collect_identifiers(out);
            }
            ConFormula::Forall(x, f) | ConFormula::Exists(x, f) => {
                out.insert(x.clone());
                f.collect_identifiers(out);
            }
            ConFormula::In(ctx, f) => {
                for member in ctx.iter() {
                    member.collect_identifiers(out);
                }
                f.collect_identifiers(out);
            }
        }
    }
}

impl From<LFormula> for ConFormula {
    fn from(f: LFormula) -> ConFormula {
        match f {
            LFormula::Atom(p, args) => ConFormula::Atom(p, args),
            LFormula::Not(f) => ConFormula::not((*f).into()),
            LFormula::And(a, b) => ConFormula::and((*a).into(), (*b).into()),
            LFormula::Or(a, b) => ConFormula::or((*a).into(), (*b).into()),
            LFormula::Implies(a, b) => ConFormula::implies((*a).into(), (*b).into()),
            LFormula::Forall(x, f) => ConFormula::Forall(x, Box::new((*f).into())),
            LFormula::Exists(x, f) => ConFormula::Exists(x, Box::new((*f).into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn px(name: &str, args: Vec<Term>) -> LFormula {
        LFormula::pred(name, args)
    }

    #[test]
    fn free_vars_excludes_bound() {
        let f = LFormula::forall("x", px("P", vec![Term::var("x"), Term::var("y")]));
        let fv = f.free_vars();
        assert_eq!(fv.into_iter().collect::<Vec<_>>(), vec!["y".to_string()]);
    }

    #[test]
    fn free_vars_of_closed_formula_is_empty() {
        let f = px("P", vec![Term::constant("a")]);
        assert!(f.free_vars().is_empty());
    }

    #[test]
    fn free_vars_mixed() {
        let f = LFormula::and(
            px("P", vec![Term::var("X")]),
            LFormula::exists("z", px("Q", vec![Term::var("z"), Term::var("Y")])),
        );
        let fv: Vec<String> = f.free_vars().into_iter().collect();
        assert_eq!(fv, vec!["X".to_string(), "Y".to_string()]);
    }

    #[test]
    fn substitute_free_occurrence() {
        let f = LFormula::forall("x", px("P", vec![Term::var("x"), Term::var("y")]));
        let g = f.substitute("y", &Term::constant("a"));
        assert_eq!(
            g,
            LFormula::forall("x", px("P", vec![Term::var("x"), Term::constant("a")]))
        );
    }

    #[test]
    fn substitute_renames_to_avoid_capture() {
        let f = LFormula::forall("x", px("P", vec![Term::var("x"), Term::var("y")]));
        let g = f.substitute("y", &Term::var("x"));
        assert_eq!(
            g,
            LFormula::forall("x1", px("P", vec![Term::var("x1"), Term::var("x")]))
        );
    }

    #[test]
    fn substitute_into_both_conjuncts() {
        let f = LFormula::and(px("P", vec![Term::var("y")]), px("Q", vec![Term::var("y")]));
        let t = Term::app("f", vec![Term::var("z")]);
        let g = f.substitute("y", &t);
        assert_eq!(
            g,
            LFormula::and(px("P", vec![t.clone()]), px("Q", vec![t.clone()]))
        );
    }

    #[test]
    fn substitute_bound_variable_is_noop() {
        let f = LFormula::forall("x", px("P", vec![Term::var("x")]));
        assert_eq!(f.substitute("x", &Term::constant("a")), f);
    }

    #[test]
    fn alpha_eq_renamed_binder() {
        let f = LFormula::forall("x", px("P", vec![Term::var("x")]));
        let g = LFormula::forall("y", px("P", vec![Term::var("y")]));
        assert!(f.alpha_eq(&g));
    }

    #[test]
    fn alpha_eq_distinguishes_free_variables() {
        let f = px("P", vec![Term::var("x")]);
        let g = px("P", vec![Term::var("y")]);
        assert!(!f.alpha_eq(&g));
    }

    #[test]
    fn alpha_eq_is_reflexive_on_propositional() {
        let f = LFormula::and(LFormula::atom("p"), LFormula::atom("q"));
        assert!(f.alpha_eq(&f.clone()));
    }

    #[test]
    fn alpha_eq_respects_shadowing() {
        // ∀x∀x P(x) vs ∀x∀y P(x): the inner binder shadows in the first.
        let f = LFormula::forall("x", LFormula::forall("x", px("P", vec![Term::var("x")])));
        let g = LFormula::forall("x", LFormula::forall("y", px("P", vec![Term::var("x")])));
        assert!(!f.alpha_eq(&g));
        let h = LFormula::forall("a", LFormula::forall("b", px("P", vec![Term::var("b")])));
        assert!(f.alpha_eq(&h));
    }

    #[test]
    fn substitute_then_free_vars() {
        // free_vars(φ[x := t]) = (free_vars(φ) \ {x}) ∪ free_vars(t) for free x.
        let f = LFormula::or(px("P", vec![Term::var("x")]), px("Q", vec![Term::var("w")]));
        let t = Term::app("f", vec![Term::var("u"), Term::constant("c")]);
        let g = f.substitute("x", &t);
        let fv: Vec<String> = g.free_vars().into_iter().collect();
        assert_eq!(fv, vec!["u".to_string(), "w".to_string()]);
    }

    #[test]
    fn pre_formula_embeds_and_projects() {
        let l = LFormula::implies(LFormula::atom("p"), LFormula::atom("q"));
        let p: PreFormula = l.clone().into();
        assert_eq!(p.to_l(), Some(l));
        let with_presup = PreFormula::presup(LFormula::atom("m"), PreFormula::atom("h"));
        assert_eq!(with_presup.to_l(), None);
    }

    #[test]
    fn presup_free_vars_include_left_argument() {
        let f = PreFormula::presup(
            px("P", vec![Term::var("x")]),
            PreFormula::pred("Q", vec![Term::var("y")]),
        );
        let fv: Vec<String> = f.free_vars().into_iter().collect();
        assert_eq!(fv, vec!["x".to_string(), "y".to_string()]);
        let bound = PreFormula::forall("x", f);
        let fv: Vec<String> = bound.free_vars().into_iter().collect();
        assert_eq!(fv, vec!["y".to_string()]);
    }

    #[test]
    fn con_formula_substitutes_into_context_members() {
        let ctx: Context = [px("P", vec![Term::var("x")])].into_iter().collect();
        let f = ConFormula::in_context(ctx, ConFormula::pred("Q", vec![Term::var("x")]));
        let g = f.substitute("x", &Term::constant("a"));
        let expected_ctx: Context = [px("P", vec![Term::constant("a")])].into_iter().collect();
        assert_eq!(
            g,
            ConFormula::in_context(expected_ctx, ConFormula::pred("Q", vec![Term::constant("a")]))
        );
    }

    #[test]
    fn fresh_variant_picks_least_suffix() {
        let taken: BTreeSet<String> = ["x1".to_string(), "x2".to_string()].into_iter().collect();
        assert_eq!(fresh_variant("x", &taken), "x3");
        assert_eq!(fresh_variant("y", &taken), "y1");
    }
}
