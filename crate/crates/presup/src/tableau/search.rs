//! Depth-first proof search with rigid free variables.
//!
//! All branches share one set of variable bindings. Closing a branch by
//! unification is a choice point: if the remaining branches cannot be
//! closed under the resulting bindings, the search undoes them and tries
//! the next candidate pair. A closure that binds nothing is committed
//! immediately — it constrains no other branch, so if the rest of the
//! tableau fails afterwards it would have failed anyway.

use std::collections::{BTreeMap, BTreeSet};

use crate::formulas::{ConFormula, Term};

use super::proof::{ClosureLink, NodeId, Origin, Proof, ProofNode};
use super::unify::Bindings;
use super::{labels_admit_closure, Label, ProofLimits, ProofStats, RuleName};

pub(super) enum RoundOutcome {
    Closed(Proof),
    Open,
    /// The round failed, but some universal formula hit the γ-multiplicity
    /// cap along the way; a deeper round may still close the tableau.
    GammaStarved,
    ResourceOut,
}

/// Runs one search round at a fixed γ-multiplicity.
pub(super) fn run_round(
    goal: &ConFormula,
    limits: &ProofLimits,
    multiplicity: u32,
    stats: &mut ProofStats,
) -> RoundOutcome {
    let mut searcher = Searcher::new(goal, limits, multiplicity, stats);
    searcher.stats.branches_opened += 1;
    let root = Branch {
        leaf: 0,
        path: vec![0],
        gamma_used: BTreeMap::new(),
        expanded: BTreeSet::new(),
    };
    if searcher.search(vec![root]) {
        let substitution = searcher.bindings.export();
        RoundOutcome::Closed(Proof {
            goal: goal.clone(),
            nodes: searcher.nodes,
            closures: searcher.closures,
            substitution,
        })
    } else if searcher.resource_out {
        RoundOutcome::ResourceOut
    } else if searcher.gamma_starved {
        RoundOutcome::GammaStarved
    } else {
        RoundOutcome::Open
    }
}

/// One open branch: its leaf, the node ids from root to leaf, and the
/// per-branch expansion bookkeeping.
#[derive(Debug, Clone)]
struct Branch {
    leaf: NodeId,
    path: Vec<NodeId>,
    /// γ-rule applications per universal node on this branch.
    gamma_used: BTreeMap<NodeId, u32>,
    /// Non-γ nodes already expanded on this branch.
    expanded: BTreeSet<NodeId>,
}

const CLASS_GAMMA: u8 = 4;

/// Expansion priority: lower classes first. Non-branching rules come before
/// the context rules, which come before the branching rules; quantifier
/// instantiation comes last.
fn expansion_class(f: &ConFormula) -> Option<u8> {
    match f {
        ConFormula::And(..) => Some(0),
        ConFormula::Not(inner) => match inner.as_ref() {
            ConFormula::And(..)
            | ConFormula::Or(..)
            | ConFormula::Implies(..)
            | ConFormula::Not(..)
            | ConFormula::Forall(..)
            | ConFormula::Exists(..) => Some(0),
            ConFormula::In(..) => Some(1),
            ConFormula::Atom(..) | ConFormula::Top => None,
        },
        ConFormula::In(..) | ConFormula::Or(..) | ConFormula::Implies(..) => Some(2),
        ConFormula::Exists(..) => Some(3),
        ConFormula::Forall(..) => Some(CLASS_GAMMA),
        ConFormula::Atom(..) | ConFormula::Top => None,
    }
}

fn atom_parts(f: &ConFormula) -> Option<(&str, &[Term])> {
    match f {
        ConFormula::Atom(p, args) => Some((p, args)),
        _ => None,
    }
}

fn negated_atom_parts(f: &ConFormula) -> Option<(&str, &[Term])> {
    match f {
        ConFormula::Not(inner) => atom_parts(inner),
        _ => None,
    }
}

struct Searcher<'a> {
    node_limit: usize,
    multiplicity: u32,
    nodes: Vec<ProofNode>,
    bindings: Bindings,
    closures: Vec<ClosureLink>,
    stats: &'a mut ProofStats,
    /// Next fresh context identifier; the root context is 0.
    ctx_counter: u32,
    /// Identifier of the most recent rule application.
    expansion_counter: u64,
    /// Every identifier in play, to keep generated names fresh.
    used_names: BTreeSet<String>,
    var_counter: usize,
    sk_counter: usize,
    resource_out: bool,
    gamma_starved: bool,
}

impl<'a> Searcher<'a> {
    fn new(
        goal: &ConFormula,
        limits: &ProofLimits,
        multiplicity: u32,
        stats: &'a mut ProofStats,
    ) -> Searcher<'a> {
        let root = ProofNode {
            id: 0,
            parent: None,
            label: Label::root(),
            formula: ConFormula::not(goal.clone()),
            origin: None,
        };
        stats.nodes_created += 1;
        Searcher {
            node_limit: limits.node_limit,
            multiplicity,
            nodes: vec![root],
            bindings: Bindings::default(),
            closures: Vec::new(),
            stats,
            ctx_counter: 1,
            expansion_counter: 0,
            used_names: goal.identifiers(),
            var_counter: 0,
            sk_counter: 0,
            resource_out: false,
            gamma_starved: false,
        }
    }

    fn fresh_var(&mut self) -> String {
        loop {
            self.var_counter += 1;
            let name = format!("X{}", self.var_counter);
            if self.used_names.insert(name.clone()) {
                return name;
            }
        }
    }

    fn fresh_skolem(&mut self) -> String {
        loop {
            self.sk_counter += 1;
            let name = format!("sk{}", self.sk_counter);
            if self.used_names.insert(name.clone()) {
                return name;
            }
        }
    }

    fn mk_node(
        &mut self,
        parent: NodeId,
        label: Label,
        formula: ConFormula,
        origin: Origin,
    ) -> Option<NodeId> {
        if self.nodes.len() >= self.node_limit {
            self.resource_out = true;
            return None;
        }
        let id = self.nodes.len();
        self.nodes.push(ProofNode {
            id,
            parent: Some(parent),
            label,
            formula,
            origin: Some(origin),
        });
        self.stats.nodes_created += 1;
        Some(id)
    }

    /// Closes every branch on the stack, depth first. Returns `true` when
    /// all of them closed; on `false`, closures and bindings are restored
    /// to their state at the call.
    fn search(&mut self, mut stack: Vec<Branch>) -> bool {
        if self.resource_out {
            return false;
        }
        let branch = match stack.pop() {
            None => return true,
            Some(b) => b,
        };

        // A `¬true` node closes the branch outright, binding nothing.
        if let Some(&node) = branch.path.iter().find(|&&n| {
            matches!(&self.nodes[n].formula,
                     ConFormula::Not(inner) if matches!(inner.as_ref(), ConFormula::Top))
        }) {
            self.closures.push(ClosureLink::NotTop { leaf: branch.leaf, node });
            self.stats.branches_closed += 1;
            let ok = self.search(stack);
            if !ok {
                self.closures.pop();
            }
            return ok;
        }

        // Complementary pairs on the path whose labels admit closure,
        // newest first.
        let mut pairs: Vec<(NodeId, NodeId)> = Vec::new();
        for &pos in &branch.path {
            if atom_parts(&self.nodes[pos].formula).is_none() {
                continue;
            }
            for &neg in &branch.path {
                if negated_atom_parts(&self.nodes[neg].formula).is_none() {
                    continue;
                }
                if labels_admit_closure(&self.nodes[pos].label, &self.nodes[neg].label) {
                    pairs.push((pos, neg));
                }
            }
        }
        pairs.sort_by_key(|&(p, n)| (std::cmp::Reverse(p.max(n)), std::cmp::Reverse(p.min(n))));

        for (pos, neg) in pairs {
            self.stats.unification_attempts += 1;
            let mark = self.bindings.mark();
            let unified = {
                let (p, xs) = atom_parts(&self.nodes[pos].formula).unwrap();
                let (q, ys) = negated_atom_parts(&self.nodes[neg].formula).unwrap();
                self.bindings.unify_atoms((p, xs), (q, ys))
            };
            if !unified {
                self.bindings.undo_to(mark);
                continue;
            }
            let ground = self.bindings.mark() == mark;
            self.closures.push(ClosureLink::Complementary { leaf: branch.leaf, positive: pos, negative: neg });
            self.stats.branches_closed += 1;
            if ground {
                // Nothing was bound: this closure cannot interfere with any
                // other branch, so there is no point in trying alternatives.
                let ok = self.search(stack);
                if !ok {
                    self.closures.pop();
                }
                return ok;
            }
            if self.search(stack.clone()) {
                return true;
            }
            self.closures.pop();
            self.bindings.undo_to(mark);
        }

        // No closure: expand a formula on the branch.
        let premise = match self.pick_expansion(&branch) {
            Some(id) => id,
            None => {
                // Saturated and open. If a universal sits on the path it
                // was capped, so a deeper round may fare better.
                if branch
                    .path
                    .iter()
                    .any(|&id| matches!(self.nodes[id].formula, ConFormula::Forall(..)))
                {
                    self.gamma_starved = true;
                }
                return false;
            }
        };
        let before = self.nodes.len();
        let children = match self.expand(premise, &branch) {
            Some(children) => children,
            None => return false,
        };
        for child in children.into_iter().rev() {
            stack.push(child);
        }
        if self.search(stack) {
            return true;
        }
        // The nodes added by this expansion are unreachable once it fails:
        // every branch still on an outer stack predates them.
        self.nodes.truncate(before);
        false
    }

    /// The next formula to expand on the branch: lowest rule class, then
    /// fewest γ-instantiations so far, then oldest node.
    fn pick_expansion(&self, branch: &Branch) -> Option<NodeId> {
        let mut best: Option<(u8, u32, NodeId)> = None;
        for &id in &branch.path {
            let class = match expansion_class(&self.nodes[id].formula) {
                Some(c) => c,
                None => continue,
            };
            let gamma_used = if class == CLASS_GAMMA {
                let used = branch.gamma_used.get(&id).copied().unwrap_or(0);
                if used >= self.multiplicity {
                    continue;
                }
                used
            } else {
                if branch.expanded.contains(&id) {
                    continue;
                }
                0
            };
            let key = (class, gamma_used, id);
            if best.map_or(true, |b| key < b) {
                best = Some(key);
            }
        }
        best.map(|(_, _, id)| id)
    }

    /// Extends `branch` by the chained nodes `added`, marking the premise
    /// as spent (for non-γ rules) or charging its γ-budget.
    fn extended(&self, branch: &Branch, premise: NodeId, added: Vec<NodeId>, gamma: bool) -> Branch {
        let mut child = branch.clone();
        child.path.extend(added.iter().copied());
        child.leaf = *added.last().expect("every rule adds at least one node");
        if gamma {
            *child.gamma_used.entry(premise).or_insert(0) += 1;
        } else {
            child.expanded.insert(premise);
        }
        child
    }

    /// Applies the one rule that matches the premise's formula. Returns the
    /// branches that replace the expanded branch, or `None` on hitting the
    /// node limit.
    fn expand(&mut self, premise_id: NodeId, branch: &Branch) -> Option<Vec<Branch>> {
        let premise = self.nodes[premise_id].clone();
        let label = premise.label.clone();
        self.expansion_counter += 1;
        let exp = self.expansion_counter;
        let origin = |rule: RuleName, part: usize, introduced: Option<Term>| Origin {
            rule,
            premise: premise_id,
            expansion: exp,
            part,
            introduced,
        };

        match premise.formula {
            ConFormula::And(a, b) => {
                self.stats.rules.bump(RuleName::And);
                let d1 = self.mk_node(branch.leaf, label.clone(), *a, origin(RuleName::And, 0, None))?;
                let d2 = self.mk_node(d1, label, *b, origin(RuleName::And, 1, None))?;
                Some(vec![self.extended(branch, premise_id, vec![d1, d2], false)])
            }
            ConFormula::Or(a, b) => {
                self.stats.rules.bump(RuleName::Or);
                self.stats.branches_opened += 1;
                let d1 = self.mk_node(branch.leaf, label.clone(), *a, origin(RuleName::Or, 0, None))?;
                let d2 = self.mk_node(branch.leaf, label, *b, origin(RuleName::Or, 1, None))?;
                Some(vec![
                    self.extended(branch, premise_id, vec![d1], false),
                    self.extended(branch, premise_id, vec![d2], false),
                ])
            }
            ConFormula::Implies(a, b) => {
                self.stats.rules.bump(RuleName::Implies);
                self.stats.branches_opened += 1;
                let d1 = self.mk_node(
                    branch.leaf,
                    label.clone(),
                    ConFormula::not(*a),
                    origin(RuleName::Implies, 0, None),
                )?;
                let d2 = self.mk_node(branch.leaf, label, *b, origin(RuleName::Implies, 1, None))?;
                Some(vec![
                    self.extended(branch, premise_id, vec![d1], false),
                    self.extended(branch, premise_id, vec![d2], false),
                ])
            }
            ConFormula::In(ctx, body) => {
                self.stats.rules.bump(RuleName::In);
                self.stats.formula_expansions += ctx.len() as u64;
                let fresh = self.ctx_counter;
                self.ctx_counter += 1;
                let inner = label.enter(fresh);
                if ctx.is_empty() {
                    let d = self.mk_node(branch.leaf, inner, *body, origin(RuleName::In, 0, None))?;
                    return Some(vec![self.extended(branch, premise_id, vec![d], false)]);
                }
                let mut members = ctx.iter();
                let first = ConFormula::not(members.next().unwrap().clone().into());
                let disjunction = members
                    .fold(first, |acc, m| ConFormula::or(acc, ConFormula::not(m.clone().into())));
                self.stats.branches_opened += 1;
                let d1 =
                    self.mk_node(branch.leaf, inner.clone(), disjunction, origin(RuleName::In, 0, None))?;
                let d2 = self.mk_node(branch.leaf, inner, *body, origin(RuleName::In, 1, None))?;
                Some(vec![
                    self.extended(branch, premise_id, vec![d1], false),
                    self.extended(branch, premise_id, vec![d2], false),
                ])
            }
            ConFormula::Forall(x, body) => {
                self.stats.rules.bump(RuleName::Forall);
                let term = Term::var(self.fresh_var());
                let instance = body.substitute(&x, &term);
                let d = self.mk_node(
                    branch.leaf,
                    label,
                    instance,
                    origin(RuleName::Forall, 0, Some(term)),
                )?;
                Some(vec![self.extended(branch, premise_id, vec![d], true)])
            }
            ConFormula::Exists(x, body) => {
                self.stats.rules.bump(RuleName::Exists);
                // Skolemize over the free variables of the existential.
                let mut free = body.free_vars();
                free.remove(&x);
                let name = self.fresh_skolem();
                let term = if free.is_empty() {
                    Term::constant(name)
                } else {
                    Term::app(name, free.into_iter().map(Term::var).collect())
                };
                let instance = body.substitute(&x, &term);
                let d = self.mk_node(
                    branch.leaf,
                    label,
                    instance,
                    origin(RuleName::Exists, 0, Some(term)),
                )?;
                Some(vec![self.extended(branch, premise_id, vec![d], false)])
            }
            ConFormula::Not(inner) => match *inner {
                ConFormula::And(a, b) => {
                    self.stats.rules.bump(RuleName::NotAnd);
                    let rewritten = ConFormula::or(ConFormula::not(*a), ConFormula::not(*b));
                    let d = self.mk_node(branch.leaf, label, rewritten, origin(RuleName::NotAnd, 0, None))?;
                    Some(vec![self.extended(branch, premise_id, vec![d], false)])
                }
                ConFormula::Or(a, b) => {
                    self.stats.rules.bump(RuleName::NotOr);
                    let rewritten = ConFormula::and(ConFormula::not(*a), ConFormula::not(*b));
                    let d = self.mk_node(branch.leaf, label, rewritten, origin(RuleName::NotOr, 0, None))?;
                    Some(vec![self.extended(branch, premise_id, vec![d], false)])
                }
                ConFormula::Implies(a, b) => {
                    self.stats.rules.bump(RuleName::NotImplies);
                    let rewritten = ConFormula::and(*a, ConFormula::not(*b));
                    let d = self.mk_node(
                        branch.leaf,
                        label,
                        rewritten,
                        origin(RuleName::NotImplies, 0, None),
                    )?;
                    Some(vec![self.extended(branch, premise_id, vec![d], false)])
                }
                ConFormula::Not(g) => {
                    self.stats.rules.bump(RuleName::NotNot);
                    let d = self.mk_node(branch.leaf, label, *g, origin(RuleName::NotNot, 0, None))?;
                    Some(vec![self.extended(branch, premise_id, vec![d], false)])
                }
                ConFormula::In(ctx, body) => {
                    self.stats.rules.bump(RuleName::NotIn);
                    self.stats.formula_expansions += ctx.len() as u64;
                    let fresh = self.ctx_counter;
                    self.ctx_counter += 1;
                    let inner_label = label.enter(fresh);
                    let mut parent = branch.leaf;
                    let mut added = Vec::new();
                    for (part, member) in ctx.iter().enumerate() {
                        let d = self.mk_node(
                            parent,
                            inner_label.clone(),
                            member.clone().into(),
                            origin(RuleName::NotIn, part, None),
                        )?;
                        parent = d;
                        added.push(d);
                    }
                    let d = self.mk_node(
                        parent,
                        inner_label,
                        ConFormula::not(*body),
                        origin(RuleName::NotIn, ctx.len(), None),
                    )?;
                    added.push(d);
                    Some(vec![self.extended(branch, premise_id, added, false)])
                }
                ConFormula::Forall(x, f) => {
                    self.stats.rules.bump(RuleName::NotForall);
                    let rewritten = ConFormula::exists(x, ConFormula::not(*f));
                    let d = self.mk_node(branch.leaf, label, rewritten, origin(RuleName::NotForall, 0, None))?;
                    Some(vec![self.extended(branch, premise_id, vec![d], false)])
                }
                ConFormula::Exists(x, f) => {
                    self.stats.rules.bump(RuleName::NotExists);
                    let rewritten = ConFormula::forall(x, ConFormula::not(*f));
                    let d = self.mk_node(branch.leaf, label, rewritten, origin(RuleName::NotExists, 0, None))?;
                    Some(vec![self.extended(branch, premise_id, vec![d], false)])
                }
                ConFormula::Atom(..) | ConFormula::Top => {
                    unreachable!("literals are never selected for expansion")
                }
            },
            ConFormula::Atom(..) | ConFormula::Top => {
                unreachable!("literals are never selected for expansion")
            }
        }
    }
}
