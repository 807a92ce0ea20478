//! First-order unification with occurs check and a backtrackable trail.

use std::collections::{BTreeMap, HashMap};

use crate::formulas::Term;

use super::Substitution;

/// The prover's mutable binding store. Bindings are triangular (a bound
/// variable's term may mention other bound variables); [`Bindings::resolve`]
/// chases them out. The trail records bound names so the search can undo to
/// a mark when a closure choice is withdrawn.
#[derive(Debug, Default)]
pub(crate) struct Bindings {
    map: HashMap<String, Term>,
    trail: Vec<String>,
}

impl Bindings {
    pub fn new() -> Bindings {
        Bindings::default()
    }

    pub fn mark(&self) -> usize {
        self.trail.len()
    }

    pub fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let name = self.trail.pop().unwrap();
            self.map.remove(&name);
        }
    }

    /// Follows variable bindings until an unbound variable or a non-variable
    /// term appears (without descending into arguments).
    fn walk(&self, t: &Term) -> Term {
        let mut current = t.clone();
        while let Term::Var(x) = &current {
            match self.map.get(x) {
                Some(next) => current = next.clone(),
                None => break,
            }
        }
        current
    }

    /// Fully applies the bindings to a term.
    pub fn resolve(&self, t: &Term) -> Term {
        match self.walk(t) {
            Term::App(f, args) => Term::App(f, args.iter().map(|a| self.resolve(a)).collect()),
            other => other,
        }
    }

    fn occurs(&self, var: &str, t: &Term) -> bool {
        match self.walk(t) {
            Term::Var(x) => x == var,
            Term::Const(_) => false,
            Term::App(_, args) => args.iter().any(|a| self.occurs(var, a)),
        }
    }

    fn bind(&mut self, var: String, t: Term) -> bool {
        if self.occurs(&var, &t) {
            return false;
        }
        self.trail.push(var.clone());
        self.map.insert(var, t);
        true
    }

    /// Extends the bindings to make the two terms equal. On failure the
    /// bindings may hold partial extensions; callers undo to their mark.
    pub fn unify_terms(&mut self, a: &Term, b: &Term) -> bool {
        let a = self.walk(a);
        let b = self.walk(b);
        match (a, b) {
            (Term::Var(x), Term::Var(y)) if x == y => true,
            (Term::Var(x), t) | (t, Term::Var(x)) => self.bind(x, t),
            (Term::Const(c), Term::Const(d)) => c == d,
            (Term::App(f, xs), Term::App(g, ys)) => {
                f == g
                    && xs.len() == ys.len()
                    && xs.iter().zip(&ys).all(|(x, y)| self.unify_terms(x, y))
            }
            _ => false,
        }
    }

    /// Unifies two atoms: same predicate, same arity, arguments pairwise.
    pub fn unify_atoms(&mut self, a: (&str, &[Term]), b: (&str, &[Term])) -> bool {
        a.0 == b.0
            && a.1.len() == b.1.len()
            && a.1.iter().zip(b.1).all(|(x, y)| self.unify_terms(x, y))
    }

    /// The bindings as an idempotent substitution (every right-hand side
    /// fully resolved).
    pub fn export(&self) -> Substitution {
        let mut out = BTreeMap::new();
        for var in self.map.keys() {
            out.insert(var.clone(), self.resolve(&Term::Var(var.clone())));
        }
        Substitution::from_map(out)
    }
}

/// Computes the most general unifier of two atomic formulas, standalone.
///
/// `None` signals failure (predicate mismatch, arity mismatch, or the
/// occurs check).
pub fn unify_atoms(a: (&str, &[Term]), b: (&str, &[Term])) -> Option<Substitution> {
    let mut bindings = Bindings::new();
    if bindings.unify_atoms(a, b) {
        Some(bindings.export())
    } else {
        None
    }
}
