//! A labeled tableau calculus for the context language.
//!
//! A proof refutes the negation of its goal. Every node carries a label
//! `(i, σ)`: `i` identifies the context the node's formula belongs to, and
//! `σ` is the set of context identifiers accessible from it. The two context
//! rules create fresh contexts:
//!
//! * `(in)` on `(i, σ): in({φ₁…φₙ}, ψ)` branches to `(j, σ∪{i}): ¬φ₁∨…∨¬φₙ`
//!   and `(j, σ∪{i}): ψ` with `j` fresh;
//! * `(¬in)` on `(i, σ): ¬in({φ₁…φₙ}, ψ)` chains `(j, σ∪{i}): φ₁`, …,
//!   `(j, σ∪{i}): φₙ`, `(j, σ∪{i}): ¬ψ` with `j` fresh.
//!
//! Boolean and quantifier rules keep their premise's label. A branch closes
//! on nodes `(i, σ): φ` and `(j, σ′): ¬ψ` when φ and ψ unify **and** the
//! labels allow it: `i = j`, or `i ∈ σ′`, or `j ∈ σ`.
//!
//! The search uses rigid free variables (one global substitution,
//! backtracking over closure choices) and iterative deepening over the
//! γ-rule multiplicity.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::formulas::{ConFormula, Context, LFormula, Term};

mod proof;
mod search;
pub(crate) mod unify;
mod verify;

pub use proof::{ClosureLink, NodeId, Origin, Proof, ProofNode, TraceError};
pub use unify::unify_atoms;
pub use verify::{verify, VerifyError};

/// The label `(i, σ)` attached to a tableau node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Label {
    /// The identifier of the context the node belongs to.
    pub context: u32,
    /// The identifiers of the contexts accessible from the node.
    pub accessible: std::collections::BTreeSet<u32>,
}

impl Label {
    pub fn root() -> Label {
        Label { context: 0, accessible: Default::default() }
    }

    /// The label of daughters created by the context rules: a fresh context
    /// `j` whose accessible set extends this label's by its own context.
    pub fn enter(&self, fresh: u32) -> Label {
        let mut accessible = self.accessible.clone();
        accessible.insert(self.context);
        Label { context: fresh, accessible }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {{", self.context)?;
        for (i, c) in self.accessible.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}})")
    }
}

/// Decides closure condition (b): the nodes share a context, or either
/// node's context is accessible from the other.
pub fn labels_admit_closure(a: &Label, b: &Label) -> bool {
    a.context == b.context
        || b.accessible.contains(&a.context)
        || a.accessible.contains(&b.context)
}

/// The expansion rules of the calculus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RuleName {
    In,
    NotIn,
    And,
    NotAnd,
    Or,
    NotOr,
    Implies,
    NotImplies,
    NotNot,
    Forall,
    NotForall,
    Exists,
    NotExists,
}

impl RuleName {
    pub const ALL: [RuleName; 13] = [
        RuleName::In,
        RuleName::NotIn,
        RuleName::And,
        RuleName::NotAnd,
        RuleName::Or,
        RuleName::NotOr,
        RuleName::Implies,
        RuleName::NotImplies,
        RuleName::NotNot,
        RuleName::Forall,
        RuleName::NotForall,
        RuleName::Exists,
        RuleName::NotExists,
    ];

    pub fn key(self) -> &'static str {
        match self {
            RuleName::In => "in",
            RuleName::NotIn => "not_in",
            RuleName::And => "and",
            RuleName::NotAnd => "not_and",
            RuleName::Or => "or",
            RuleName::NotOr => "not_or",
            RuleName::Implies => "implies",
            RuleName::NotImplies => "not_implies",
            RuleName::NotNot => "not_not",
            RuleName::Forall => "forall",
            RuleName::NotForall => "not_forall",
            RuleName::Exists => "exists",
            RuleName::NotExists => "not_exists",
        }
    }

    pub fn from_key(key: &str) -> Option<RuleName> {
        RuleName::ALL.into_iter().find(|r| r.key() == key)
    }

    fn index(self) -> usize {
        RuleName::ALL.iter().position(|r| *r == self).unwrap()
    }
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// One application counter per expansion rule.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleCounts {
    counts: [u64; 13],
}

impl RuleCounts {
    pub fn bump(&mut self, rule: RuleName) {
        self.counts[rule.index()] += 1;
    }

    pub fn get(&self, rule: RuleName) -> u64 {
        self.counts[rule.index()]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (RuleName, u64)> + '_ {
        RuleName::ALL.into_iter().map(|r| (r, self.get(r)))
    }

    pub fn merge(&mut self, other: &RuleCounts) {
        for (slot, v) in self.counts.iter_mut().zip(&other.counts) {
            *slot += v;
        }
    }
}

impl Serialize for RuleCounts {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(13))?;
        for (rule, count) in self.iter() {
            map.serialize_entry(rule.key(), &count)?;
        }
        map.end()
    }
}

/// Work counters accumulated by proof search.
///
/// `formula_expansions` counts context-member formulas materialized onto the
/// tree by the `(in)`/`(¬in)` rules — the measure of how often premises are
/// (re)processed, and the redundancy metric compared by the `bench` module.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ProofStats {
    pub rules: RuleCounts,
    pub nodes_created: u64,
    pub branches_opened: u64,
    pub branches_closed: u64,
    pub formula_expansions: u64,
    pub unification_attempts: u64,
    /// Number of proof searches merged into this aggregate.
    pub proofs: u64,
}

impl ProofStats {
    pub fn merge(&mut self, other: &ProofStats) {
        self.rules.merge(&other.rules);
        self.nodes_created += other.nodes_created;
        self.branches_opened += other.branches_opened;
        self.branches_closed += other.branches_closed;
        self.formula_expansions += other.formula_expansions;
        self.unification_attempts += other.unification_attempts;
        self.proofs += other.proofs;
    }
}

impl fmt::Display for ProofStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<24}{}", "proofs", self.proofs)?;
        writeln!(f, "{:<24}{}", "nodes created", self.nodes_created)?;
        writeln!(f, "{:<24}{}", "branches opened", self.branches_opened)?;
        writeln!(f, "{:<24}{}", "branches closed", self.branches_closed)?;
        writeln!(f, "{:<24}{}", "formula expansions", self.formula_expansions)?;
        writeln!(f, "{:<24}{}", "unification attempts", self.unification_attempts)?;
        for (rule, count) in self.rules.iter() {
            writeln!(f, "{:<24}{}", format!("rule {rule}"), count)?;
        }
        Ok(())
    }
}

/// Resource bounds for proof search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProofLimits {
    /// Maximum γ-rule instantiations per universal formula per branch
    /// (reached by iterative deepening).
    pub gamma_multiplicity: u32,
    /// Maximum number of tableau nodes per search round.
    pub node_limit: usize,
    /// Maximum number of iterative-deepening rounds.
    pub depth_limit: u32,
}

impl Default for ProofLimits {
    fn default() -> ProofLimits {
        ProofLimits { gamma_multiplicity: 3, node_limit: 100_000, depth_limit: 5 }
    }
}

/// An idempotent substitution: every right-hand side is fully resolved.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<String, Term>,
}

impl Substitution {
    pub(crate) fn from_map(bindings: BTreeMap<String, Term>) -> Substitution {
        Substitution { bindings }
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.bindings.get(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Term)> {
        self.bindings.iter()
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        match t {
            Term::Var(x) => self.bindings.get(x).cloned().unwrap_or_else(|| t.clone()),
            Term::Const(_) => t.clone(),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| self.apply_term(a)).collect())
            }
        }
    }

    pub fn apply_con(&self, f: &ConFormula) -> ConFormula {
        let mut out = f.clone();
        for (var, term) in &self.bindings {
            out = out.substitute(var, term);
        }
        out
    }
}

/// The outcome of a proof search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProofVerdict {
    /// Every branch of the tableau closed: the goal is proved.
    Closed,
    /// The tableau saturated without closing and no γ-rule was starved:
    /// the goal is not provable.
    Open,
    /// A resource limit cut the search short of a definite answer.
    ResourceOut,
}

impl ProofVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            ProofVerdict::Closed => "closed",
            ProofVerdict::Open => "open",
            ProofVerdict::ResourceOut => "resource_out",
        }
    }
}

impl fmt::Display for ProofVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct ProofResult {
    pub verdict: ProofVerdict,
    /// The closed proof object, present when the verdict is `Closed`.
    pub proof: Option<Proof>,
    pub stats: ProofStats,
    /// Number of iterative-deepening rounds run.
    pub rounds: u32,
}

/// Checks whether two nodes close a branch: one must carry an atom and the
/// other its negation, the atoms must unify, and the labels must satisfy
/// condition (b). Returns the unifier.
pub fn check_closure(a: &ProofNode, b: &ProofNode) -> Option<Substitution> {
    let (pos, neg) = match (&a.formula, &b.formula) {
        (ConFormula::Atom(p, xs), ConFormula::Not(n)) => match n.as_ref() {
            ConFormula::Atom(q, ys) => ((p, xs), (q, ys)),
            _ => return None,
        },
        (ConFormula::Not(n), ConFormula::Atom(q, ys)) => match n.as_ref() {
            ConFormula::Atom(p, xs) => ((p, xs), (q, ys)),
            _ => return None,
        },
        _ => return None,
    };
    if !labels_admit_closure(&a.label, &b.label) {
        return None;
    }
    unify_atoms((pos.0, pos.1), (neg.0, neg.1))
}

/// Searches for a closed tableau refuting `¬goal`.
///
/// Iterative deepening raises the γ-multiplicity one round at a time, up to
/// `limits.gamma_multiplicity` rounds and never more than
/// `limits.depth_limit`. Statistics accumulate across rounds.
pub fn prove(goal: &ConFormula, limits: &ProofLimits) -> ProofResult {
    let mut stats = ProofStats { proofs: 1, ..ProofStats::default() };
    let max_rounds = limits.gamma_multiplicity.min(limits.depth_limit).max(1);
    let mut rounds = 0;
    for multiplicity in 1..=max_rounds {
        rounds = multiplicity;
        match search::run_round(goal, limits, multiplicity, &mut stats) {
            search::RoundOutcome::Closed(proof) => {
                return ProofResult { verdict: ProofVerdict::Closed, proof: Some(proof), stats, rounds };
            }
            search::RoundOutcome::Open => {
                return ProofResult { verdict: ProofVerdict::Open, proof: None, stats, rounds };
            }
            search::RoundOutcome::ResourceOut => {
                return ProofResult { verdict: ProofVerdict::ResourceOut, proof: None, stats, rounds };
            }
            search::RoundOutcome::GammaStarved => continue,
        }
    }
    ProofResult { verdict: ProofVerdict::ResourceOut, proof: None, stats, rounds }
}

/// The verdict of an entailment check `Γ ⊢ π`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntailmentVerdict {
    Entailed,
    NotProved,
    Unknown,
}

impl EntailmentVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            EntailmentVerdict::Entailed => "entailed",
            EntailmentVerdict::NotProved => "not proved",
            EntailmentVerdict::Unknown => "unknown",
        }
    }
}

impl fmt::Display for EntailmentVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Decides `Γ ⊢ π` by proving `in(Γ, π)`: `Entailed` on a closed tableau,
/// `NotProved` on a saturated open one, `Unknown` when limits were hit.
pub fn entails(
    context: &Context,
    goal: &LFormula,
    limits: &ProofLimits,
) -> (EntailmentVerdict, ProofResult) {
    let statement = ConFormula::in_context(context.clone(), goal.clone().into());
    let result = prove(&statement, limits);
    let verdict = match result.verdict {
        ProofVerdict::Closed => EntailmentVerdict::Entailed,
        ProofVerdict::Open => EntailmentVerdict::NotProved,
        ProofVerdict::ResourceOut => EntailmentVerdict::Unknown,
    };
    (verdict, result)
}
