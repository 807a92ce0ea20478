//! Independent validation of closed proofs.
//!
//! [`verify`] re-derives every node of a proof from its origin: the rule
//! must match the premise's formula, the daughter formulas and labels are
//! recomputed and compared, quantifier rules must introduce genuinely fresh
//! symbols, and every leaf must carry exactly one valid closure under the
//! proof's single substitution. It shares no state with the search — a bug
//! that fabricates nodes or closures is caught here.

use std::fmt;

use std::collections::BTreeMap;

use crate::formulas::{ConFormula, Term};

use super::proof::{ClosureLink, NodeId, Proof};
use super::{labels_admit_closure, Label, RuleName};

/// A defect found in a proof object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyError {
    pub message: String,
}

impl fmt::Display for VerifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid proof: {}", self.message)
    }
}

impl std::error::Error for VerifyError {}

macro_rules! bail {
    ($($arg:tt)*) => {
        return Err(VerifyError { message: format!($($arg)*) })
    };
}

enum Attach {
    Chained,
    Branching,
}

/// Checks a proof from scratch. Returns `Ok(())` exactly when the object
/// is a closed, rule-conforming tableau for its goal.
pub fn verify(proof: &Proof) -> Result<(), VerifyError> {
    if proof.nodes.is_empty() {
        bail!("proof has no nodes");
    }

    // Per-node bookkeeping sanity.
    for (i, node) in proof.nodes.iter().enumerate() {
        if node.id != i {
            bail!("node {} is stored at index {}", node.id, i);
        }
        if node.label.accessible.contains(&node.label.context) {
            bail!("node {i}: context {} is in its own accessible set", node.label.context);
        }
        match (i, &node.parent, &node.origin) {
            (0, None, None) => {}
            (0, _, _) => bail!("the root must have no parent and no origin"),
            (_, Some(p), Some(_)) => {
                if *p >= i {
                    bail!("node {i}: parent {p} does not precede it");
                }
            }
            (_, None, _) => bail!("node {i}: missing parent"),
            (_, _, None) => bail!("node {i}: missing origin"),
        }
    }
    let root = &proof.nodes[0];
    if root.label != Label::root() {
        bail!("the root label must be (0, {{}})");
    }
    if root.formula != ConFormula::not(proof.goal.clone()) {
        bail!("the root must carry the negated goal");
    }

    // Tree shape: at most two children, and two only for a branching pair
    // from a single rule application.
    let mut children: Vec<Vec<NodeId>> = vec![Vec::new(); proof.nodes.len()];
    for node in &proof.nodes[1..] {
        children[node.parent.unwrap()].push(node.id);
    }
    for (id, kids) in children.iter().enumerate() {
        if kids.len() > 2 {
            bail!("node {id} has {} children", kids.len());
        }
        if kids.len() == 2 {
            let exp = |k: NodeId| proof.nodes[k].origin.as_ref().unwrap().expansion;
            if exp(kids[0]) != exp(kids[1]) {
                bail!("node {id}: children from different rule applications");
            }
        }
    }

    // Group daughters by rule application and re-derive each group.
    let mut groups: BTreeMap<u64, Vec<NodeId>> = BTreeMap::new();
    for node in &proof.nodes[1..] {
        groups.entry(node.origin.as_ref().unwrap().expansion).or_default().push(node.id);
    }
    for (exp, mut members) in groups {
        members.sort_by_key(|&id| proof.nodes[id].origin.as_ref().unwrap().part);
        let head = proof.nodes[members[0]].origin.as_ref().unwrap();
        let rule = head.rule;
        let premise_id = head.premise;
        for (k, &id) in members.iter().enumerate() {
            let o = proof.nodes[id].origin.as_ref().unwrap();
            if o.rule != rule || o.premise != premise_id {
                bail!("expansion {exp}: daughters disagree on rule or premise");
            }
            if o.part != k {
                bail!("expansion {exp}: daughter parts are not contiguous");
            }
            if o.introduced.is_some() && !matches!(rule, RuleName::Forall | RuleName::Exists) {
                bail!("expansion {exp}: rule {rule} must not introduce a term");
            }
        }
        if premise_id >= members[0] {
            bail!("expansion {exp}: premise {premise_id} does not precede its daughters");
        }
        let premise = &proof.nodes[premise_id];
        let plabel = premise.label.clone();
        let first = &proof.nodes[members[0]];

        // Fresh-context bookkeeping for the two context rules.
        let fresh_context = |ctx_rule: RuleName| -> Result<Label, VerifyError> {
            let j = first.label.context;
            if j == 0 {
                bail!("expansion {exp}: rule {ctx_rule} reused the root context");
            }
            for earlier in &proof.nodes[..members[0]] {
                if earlier.label.context == j || earlier.label.accessible.contains(&j) {
                    bail!("expansion {exp}: context {j} is not fresh");
                }
            }
            Ok(plabel.enter(j))
        };
        // Fresh-symbol check for quantifier rules.
        let fresh_symbol = |name: &str| -> Result<(), VerifyError> {
            for earlier in &proof.nodes[..members[0]] {
                if earlier.formula.identifiers().contains(name) {
                    bail!("expansion {exp}: introduced symbol {name} is not fresh");
                }
            }
            Ok(())
        };
        let introduced = || first.origin.as_ref().unwrap().introduced.as_ref();

        let (attach, expected_label, expected): (Attach, Label, Vec<ConFormula>) =
            match (&premise.formula, rule) {
                (ConFormula::And(a, b), RuleName::And) => {
                    (Attach::Chained, plabel, vec![(**a).clone(), (**b).clone()])
                }
                (ConFormula::Or(a, b), RuleName::Or) => {
                    (Attach::Branching, plabel, vec![(**a).clone(), (**b).clone()])
                }
                (ConFormula::Implies(a, b), RuleName::Implies) => (
                    Attach::Branching,
                    plabel,
                    vec![ConFormula::not((**a).clone()), (**b).clone()],
                ),
                (ConFormula::In(ctx, body), RuleName::In) => {
                    let inner = fresh_context(RuleName::In)?;
                    if ctx.is_empty() {
                        (Attach::Chained, inner, vec![(**body).clone()])
                    } else {
                        let mut ms = ctx.iter();
                        let head = ConFormula::not(ms.next().unwrap().clone().into());
                        let disjunction = ms.fold(head, |acc, m| {
                            ConFormula::or(acc, ConFormula::not(m.clone().into()))
                        });
                        (Attach::Branching, inner, vec![disjunction, (**body).clone()])
                    }
                }
                (ConFormula::Forall(x, f), RuleName::Forall) => {
                    let term = match introduced() {
                        Some(t @ Term::Var(v)) => {
                            fresh_symbol(v)?;
                            t.clone()
                        }
                        _ => bail!("expansion {exp}: a universal must introduce a fresh variable"),
                    };
                    (Attach::Chained, plabel, vec![f.substitute(x, &term)])
                }
                (ConFormula::Exists(x, f), RuleName::Exists) => {
                    let term = match introduced() {
                        Some(t) => t.clone(),
                        None => bail!("expansion {exp}: an existential must introduce a term"),
                    };
                    let (name, args) = match &term {
                        Term::Const(c) => (c.as_str(), Vec::new()),
                        Term::App(g, args) => (g.as_str(), args.clone()),
                        Term::Var(_) => {
                            bail!("expansion {exp}: an existential must introduce a Skolem term")
                        }
                    };
                    fresh_symbol(name)?;
                    let expected_args: Vec<Term> =
                        premise.formula.free_vars().into_iter().map(Term::var).collect();
                    if args != expected_args {
                        bail!(
                            "expansion {exp}: Skolem arguments must be the free variables of the premise"
                        );
                    }
                    (Attach::Chained, plabel, vec![f.substitute(x, &term)])
                }
                (ConFormula::Not(inner), rule) => match (inner.as_ref(), rule) {
                    (ConFormula::And(a, b), RuleName::NotAnd) => (
                        Attach::Chained,
                        plabel,
                        vec![ConFormula::or(
                            ConFormula::not((**a).clone()),
                            ConFormula::not((**b).clone()),
                        )],
                    ),
                    (ConFormula::Or(a, b), RuleName::NotOr) => (
                        Attach::Chained,
                        plabel,
                        vec![ConFormula::and(
                            ConFormula::not((**a).clone()),
                            ConFormula::not((**b).clone()),
                        )],
                    ),
                    (ConFormula::Implies(a, b), RuleName::NotImplies) => (
                        Attach::Chained,
                        plabel,
                        vec![ConFormula::and((**a).clone(), ConFormula::not((**b).clone()))],
                    ),
                    (ConFormula::Not(g), RuleName::NotNot) => {
                        (Attach::Chained, plabel, vec![(**g).clone()])
                    }
                    (ConFormula::In(ctx, body), RuleName::NotIn) => {
                        let inner_label = fresh_context(RuleName::NotIn)?;
                        let mut expected: Vec<ConFormula> =
                            ctx.iter().map(|m| m.clone().into()).collect();
                        expected.push(ConFormula::not((**body).clone()));
                        (Attach::Chained, inner_label, expected)
                    }
                    (ConFormula::Forall(x, f), RuleName::NotForall) => (
                        Attach::Chained,
                        plabel,
                        vec![ConFormula::exists(x.clone(), ConFormula::not((**f).clone()))],
                    ),
                    (ConFormula::Exists(x, f), RuleName::NotExists) => (
                        Attach::Chained,
                        plabel,
                        vec![ConFormula::forall(x.clone(), ConFormula::not((**f).clone()))],
                    ),
                    _ => bail!("expansion {exp}: rule {rule} does not match its premise"),
                },
                _ => bail!("expansion {exp}: rule {rule} does not match its premise"),
            };

        if members.len() != expected.len() {
            bail!(
                "expansion {exp}: rule {rule} yields {} daughters, found {}",
                expected.len(),
                members.len()
            );
        }
        for (&id, want) in members.iter().zip(&expected) {
            let node = &proof.nodes[id];
            if node.formula != *want {
                bail!("node {id}: formula does not follow from rule {rule}");
            }
            if node.label != expected_label {
                bail!("node {id}: label does not follow from rule {rule}");
            }
        }
        let parent0 = first.parent.unwrap();
        match attach {
            Attach::Chained => {
                for pair in members.windows(2) {
                    if proof.nodes[pair[1]].parent != Some(pair[0]) {
                        bail!("expansion {exp}: daughters of rule {rule} must form a chain");
                    }
                }
            }
            Attach::Branching => {
                for &id in &members {
                    if proof.nodes[id].parent != Some(parent0) {
                        bail!("expansion {exp}: daughters of rule {rule} must share a parent");
                    }
                }
            }
        }
        if !proof.path_to(parent0).contains(&premise_id) {
            bail!("expansion {exp}: premise {premise_id} is not on the branch it expands");
        }
    }

    // The substitution must be idempotent: right-hand sides are resolved.
    for (var, term) in proof.substitution.iter() {
        if proof.substitution.apply_term(term) != *term {
            bail!("substitution is not idempotent at {var}");
        }
    }

    // Every leaf carries exactly one valid closure.
    let mut closed: BTreeMap<NodeId, usize> = BTreeMap::new();
    for closure in &proof.closures {
        let leaf = closure.leaf();
        if leaf >= proof.nodes.len() {
            bail!("closure refers to missing node {leaf}");
        }
        if !children[leaf].is_empty() {
            bail!("closure attached to internal node {leaf}");
        }
        *closed.entry(leaf).or_insert(0) += 1;
        let path = proof.path_to(leaf);
        match closure {
            ClosureLink::Complementary { positive, negative, .. } => {
                if !path.contains(positive) || !path.contains(negative) {
                    bail!("closure of leaf {leaf}: nodes are not on its branch");
                }
                let pos = &proof.nodes[*positive];
                let neg = &proof.nodes[*negative];
                let (p, xs) = match &pos.formula {
                    ConFormula::Atom(p, xs) => (p, xs),
                    _ => bail!("closure of leaf {leaf}: node {positive} is not an atom"),
                };
                let (q, ys) = match &neg.formula {
                    ConFormula::Not(inner) => match inner.as_ref() {
                        ConFormula::Atom(q, ys) => (q, ys),
                        _ => bail!("closure of leaf {leaf}: node {negative} is not a negated atom"),
                    },
                    _ => bail!("closure of leaf {leaf}: node {negative} is not a negated atom"),
                };
                if p != q
                    || xs.len() != ys.len()
                    || xs.iter().zip(ys).any(|(x, y)| {
                        proof.substitution.apply_term(x) != proof.substitution.apply_term(y)
                    })
                {
                    bail!("closure of leaf {leaf}: atoms differ under the substitution");
                }
                if !labels_admit_closure(&pos.label, &neg.label) {
                    bail!("closure of leaf {leaf}: labels do not admit closure");
                }
            }
            ClosureLink::NotTop { node, .. } => {
                if !path.contains(node) {
                    bail!("closure of leaf {leaf}: node {node} is not on its branch");
                }
                let is_not_top = matches!(&proof.nodes[*node].formula,
                                          ConFormula::Not(inner) if matches!(inner.as_ref(), ConFormula::Top));
                if !is_not_top {
                    bail!("closure of leaf {leaf}: node {node} is not a negated truth constant");
                }
            }
        }
    }
    for (id, kids) in children.iter().enumerate() {
        if kids.is_empty() && closed.get(&id).copied().unwrap_or(0) != 1 {
            bail!("leaf {id} must have exactly one closure");
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_con;
    use crate::tableau::proof::{Origin, ProofNode};
    use crate::tableau::{prove, ProofLimits, ProofVerdict, Substitution};

    fn proved(text: &str) -> Proof {
        let result = prove(&parse_con(text).unwrap(), &ProofLimits::default());
        assert_eq!(result.verdict, ProofVerdict::Closed, "`{text}` should be provable");
        result.proof.unwrap()
    }

    #[test]
    fn accepts_prover_output() {
        for text in [
            "p | ~p",
            "true",
            "in({p}, p)",
            "in({p, p -> q}, q)",
            "in({p}, in({q}, p & q))",
            "in({}, p | ~p)",
            "(forall x. p(x)) -> p(a)",
            "in({p(a)}, exists x. p(x))",
            "in({forall x. (p(x) -> p(f(x))), p(a)}, p(f(f(a))))",
            "in({p}, (p & in({q}, p & q)) & in({q -> r}, p))",
        ] {
            let proof = proved(text);
            verify(&proof).unwrap_or_else(|e| panic!("proof of `{text}` rejected: {e}"));
        }
    }

    #[test]
    fn round_tripped_trace_still_verifies() {
        let proof = proved("in({p}, (p & in({q}, p & q)) & in({q -> r}, p))");
        let back = Proof::from_trace(&proof.to_trace()).unwrap();
        verify(&back).unwrap();
    }

    #[test]
    fn rejects_tampered_formula() {
        let mut proof = proved("in({p}, p)");
        proof.nodes[1].formula = parse_con("q").unwrap();
        assert!(verify(&proof).is_err());
    }

    #[test]
    fn rejects_tampered_label() {
        let mut proof = proved("in({p}, p)");
        proof.nodes[1].label.context = 0;
        assert!(verify(&proof).is_err());
        let mut proof = proved("in({p}, p)");
        proof.nodes[2].label.accessible.clear();
        assert!(verify(&proof).is_err());
    }

    #[test]
    fn rejects_missing_closure() {
        let mut proof = proved("in({p}, p)");
        proof.closures.clear();
        let err = verify(&proof).unwrap_err();
        assert!(err.message.contains("exactly one closure"));
    }

    #[test]
    fn rejects_tampered_substitution() {
        let mut proof = proved("(forall x. p(x)) -> p(a)");
        proof.substitution = Substitution::from_map(
            [("X1".to_string(), Term::constant("b"))].into_iter().collect(),
        );
        let err = verify(&proof).unwrap_err();
        assert!(err.message.contains("atoms differ"));
    }

    #[test]
    fn rejects_non_idempotent_substitution() {
        let mut proof = proved("(forall x. p(x)) -> p(a)");
        proof.substitution = Substitution::from_map(
            [
                ("X1".to_string(), Term::var("Y")),
                ("Y".to_string(), Term::constant("a")),
            ]
            .into_iter()
            .collect(),
        );
        let err = verify(&proof).unwrap_err();
        assert!(err.message.contains("idempotent"));
    }

    #[test]
    fn rejects_stale_quantifier_witness() {
        let mut proof = proved("(forall x. p(x)) -> p(a)");
        let gamma = proof
            .nodes
            .iter()
            .position(|n| {
                n.origin.as_ref().is_some_and(|o| o.rule == RuleName::Forall)
            })
            .unwrap();
        // Claim the universal was instantiated with an already-used name.
        proof.nodes[gamma].origin.as_mut().unwrap().introduced = Some(Term::var("a"));
        assert!(verify(&proof).is_err());
    }

    #[test]
    fn rejects_forged_sibling_closure() {
        // Hand-build the (open) tableau for ¬G with
        // G = ~(~in({q}, p) & ~in({r}, q)), then forge a closure between
        // q in context 1 and ¬q in context 2. The tree itself is fully
        // rule-conforming; only the closure labels are illegal.
        let goal = parse_con("~(~in({q}, p) & ~in({r}, q))").unwrap();
        let l0 = Label::root();
        let l1 = Label { context: 1, accessible: [0].into_iter().collect() };
        let l2 = Label { context: 2, accessible: [0].into_iter().collect() };
        let node = |id, parent, label: &Label, text: &str, origin| ProofNode {
            id,
            parent,
            label: label.clone(),
            formula: parse_con(text).unwrap(),
            origin,
        };
        let origin = |rule, premise, expansion, part| {
            Some(Origin { rule, premise, expansion, part, introduced: None })
        };
        let nodes = vec![
            node(0, None, &l0, "~~(~in({q}, p) & ~in({r}, q))", None),
            node(1, Some(0), &l0, "~in({q}, p) & ~in({r}, q)", origin(RuleName::NotNot, 0, 1, 0)),
            node(2, Some(1), &l0, "~in({q}, p)", origin(RuleName::And, 1, 2, 0)),
            node(3, Some(2), &l0, "~in({r}, q)", origin(RuleName::And, 1, 2, 1)),
            node(4, Some(3), &l1, "q", origin(RuleName::NotIn, 2, 3, 0)),
            node(5, Some(4), &l1, "~p", origin(RuleName::NotIn, 2, 3, 1)),
            node(6, Some(5), &l2, "r", origin(RuleName::NotIn, 3, 4, 0)),
            node(7, Some(6), &l2, "~q", origin(RuleName::NotIn, 3, 4, 1)),
        ];
        let proof = Proof {
            goal,
            nodes,
            closures: vec![ClosureLink::Complementary { leaf: 7, positive: 4, negative: 7 }],
            substitution: Substitution::default(),
        };
        let err = verify(&proof).unwrap_err();
        assert!(err.message.contains("labels do not admit closure"), "{err}");
    }

    #[test]
    fn rejects_wrong_root() {
        let mut proof = proved("in({p}, p)");
        proof.goal = parse_con("in({p}, q)").unwrap();
        let err = verify(&proof).unwrap_err();
        assert!(err.message.contains("negated goal"));
    }
}
