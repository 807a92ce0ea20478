//! Contexts: finite sets of first-order formulas.

use std::collections::BTreeSet;

use super::{LFormula, Term};

/// A finite set of [`LFormula`]s, deduplicated up to alpha-equivalence.
///
/// Members keep their first-insertion order so that rendering is
/// deterministic, but equality ignores order: two contexts are equal when
/// each member of one is alpha-equivalent to some member of the other.
#[derive(Debug, Clone, Default)]
pub struct Context {
    members: Vec<LFormula>,
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    pub fn singleton(f: LFormula) -> Context {
        Context { members: vec![f] }
    }

    /// Adds a formula unless an alpha-equivalent member is already present.
    /// Returns whether the context grew.
    pub fn insert(&mut self, f: LFormula) -> bool {
        if self.contains(&f) {
            false
        } else {
            self.members.push(f);
            true
        }
    }

    /// A copy of this context extended by `f`.
    pub fn with(&self, f: LFormula) -> Context {
        let mut out = self.clone();
        out.insert(f);
        out
    }

    pub fn union(&self, other: &Context) -> Context {
        let mut out = self.clone();
        for f in &other.members {
            out.insert(f.clone());
        }
        out
    }

    /// Membership up to alpha-equivalence.
    pub fn contains(&self, f: &LFormula) -> bool {
        self.members.iter().any(|m| m.alpha_eq(f))
    }

    pub fn iter(&self) -> std::slice::Iter<'_, LFormula> {
        self.members.iter()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_subset_of(&self, other: &Context) -> bool {
        self.members.iter().all(|m| other.contains(m))
    }

    pub fn substitute(&self, var: &str, term: &Term) -> Context {
        let mut out = Context::new();
        for m in &self.members {
            out.insert(m.substitute(var, term));
        }
        out
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for m in &self.members {
            out.extend(m.free_vars());
        }
        out
    }

    /// Set equality up to alpha-equivalence under an outer renaming
    /// environment (used when contexts occur under quantifiers).
    pub(crate) fn alpha_eq_env(&self, other: &Context, env: &mut Vec<(String, String)>) -> bool {
        if self.members.len() != other.members.len() {
            return false;
        }
        let mut used = vec![false; other.members.len()];
        'outer: for m in &self.members {
            for (i, n) in other.members.iter().enumerate() {
                if !used[i] && m.alpha_eq_env(n, env) {
                    used[i] = true;
                    continue 'outer;
                }
            }
            return false;
        }
        true
    }
}

impl PartialEq for Context {
    fn eq(&self, other: &Context) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }
}

impl Eq for Context {}

impl FromIterator<LFormula> for Context {
    fn from_iter<I: IntoIterator<Item = LFormula>>(iter: I) -> Context {
        let mut out = Context::new();
        for f in iter {
            out.insert(f);
        }
        out
    }
}

impl<'a> IntoIterator for &'a Context {
    type Item = &'a LFormula;
    type IntoIter = std::slice::Iter<'a, LFormula>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_is_idempotent_up_to_alpha() {
        let mut ctx = Context::new();
        assert!(ctx.insert(LFormula::forall("x", LFormula::pred("P", vec![Term::var("x")]))));
        assert!(!ctx.insert(LFormula::forall("y", LFormula::pred("P", vec![Term::var("y")]))));
        assert_eq!(ctx.len(), 1);
    }

    #[test]
    fn equality_ignores_insertion_order() {
        let a: Context = [LFormula::atom("p"), LFormula::atom("q")].into_iter().collect();
        let b: Context = [LFormula::atom("q"), LFormula::atom("p")].into_iter().collect();
        assert_eq!(a, b);
    }

    #[test]
    fn equality_distinguishes_different_sets() {
        let a: Context = [LFormula::atom("p")].into_iter().collect();
        let b: Context = [LFormula::atom("p"), LFormula::atom("q")].into_iter().collect();
        assert_ne!(a, b);
    }

    #[test]
    fn union_deduplicates() {
        let a: Context = [LFormula::atom("p"), LFormula::atom("q")].into_iter().collect();
        let b: Context = [LFormula::atom("q"), LFormula::atom("r")].into_iter().collect();
        let u = a.union(&b);
        assert_eq!(u.len(), 3);
    }

    #[test]
    fn iteration_preserves_insertion_order() {
        let ctx: Context = [LFormula::atom("b"), LFormula::atom("a")].into_iter().collect();
        let names: Vec<String> = ctx
            .iter()
            .map(|f| match f {
                LFormula::Atom(p, _) => p.clone(),
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(names, vec!["b".to_string(), "a".to_string()]);
    }
}
