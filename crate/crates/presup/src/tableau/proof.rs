//! Closed proof objects and their line-oriented trace serialization.

use std::collections::BTreeSet;
use std::fmt;

use crate::formulas::{ConFormula, Term};
use crate::syntax::{parse_con, parse_term};

use super::{Label, RuleName, Substitution};

/// Index of a node in [`Proof::nodes`].
pub type NodeId = usize;

/// How a node was put on the tree: which rule application created it, from
/// which premise, and (for quantifier rules) which term it introduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Origin {
    pub rule: RuleName,
    /// The node the rule was applied to.
    pub premise: NodeId,
    /// Identifier of the rule application; nodes created together share it.
    pub expansion: u64,
    /// Position of this node within its rule application, starting at 0.
    pub part: usize,
    /// The term introduced by a quantifier rule, if any: a fresh variable
    /// for γ-rules, a Skolem term for δ-rules.
    pub introduced: Option<Term>,
}

/// One labeled node of a tableau.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofNode {
    pub id: NodeId,
    /// The node this one is attached under; `None` for the root.
    pub parent: Option<NodeId>,
    pub label: Label,
    pub formula: ConFormula,
    /// `None` for the root, which carries the negated goal.
    pub origin: Option<Origin>,
}

/// Why one branch of a closed tableau is closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosureLink {
    /// Two nodes on the branch carry an atom and its negation, unifiable
    /// under the proof's substitution, with labels admitting closure.
    Complementary { leaf: NodeId, positive: NodeId, negative: NodeId },
    /// A node on the branch is `¬true`.
    NotTop { leaf: NodeId, node: NodeId },
}

impl ClosureLink {
    pub fn leaf(&self) -> NodeId {
        match self {
            ClosureLink::Complementary { leaf, .. } => *leaf,
            ClosureLink::NotTop { leaf, .. } => *leaf,
        }
    }
}

/// A closed tableau: the refutation tree for `¬goal`, one closure per
/// branch, and the single global substitution under which every closure
/// holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proof {
    pub goal: ConFormula,
    /// Nodes in creation order; a node's id is its index.
    pub nodes: Vec<ProofNode>,
    pub closures: Vec<ClosureLink>,
    pub substitution: Substitution,
}

impl Proof {
    /// Children of `id`, in creation order.
    pub fn children(&self, id: NodeId) -> Vec<NodeId> {
        self.nodes.iter().filter(|n| n.parent == Some(id)).map(|n| n.id).collect()
    }

    /// The node ids on the path from the root to `id`, inclusive.
    pub fn path_to(&self, id: NodeId) -> Vec<NodeId> {
        let mut path = Vec::new();
        let mut cursor = Some(id);
        while let Some(node) = cursor {
            path.push(node);
            cursor = self.nodes[node].parent;
        }
        path.reverse();
        path
    }

    /// Serializes the proof as a line-oriented trace. The format is stable
    /// and round-trips through [`Proof::from_trace`].
    pub fn to_trace(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("goal {}\n", self.goal));
        for node in &self.nodes {
            let acc: Vec<String> =
                node.label.accessible.iter().map(|c| c.to_string()).collect();
            let parent =
                node.parent.map_or_else(|| "-".to_string(), |p| p.to_string());
            let (rule, from, exp, part, intro) = match &node.origin {
                None => (
                    "root".to_string(),
                    "-".to_string(),
                    "-".to_string(),
                    "-".to_string(),
                    "-".to_string(),
                ),
                Some(o) => (
                    o.rule.key().to_string(),
                    o.premise.to_string(),
                    o.expansion.to_string(),
                    o.part.to_string(),
                    o.introduced
                        .as_ref()
                        .map_or_else(|| "-".to_string(), crate::syntax::term_compact),
                ),
            };
            out.push_str(&format!(
                "node {} ctx {} acc {{{}}} parent {} rule {} from {} exp {} part {} intro {} formula {}\n",
                node.id,
                node.label.context,
                acc.join(","),
                parent,
                rule,
                from,
                exp,
                part,
                intro,
                node.formula,
            ));
        }
        for closure in &self.closures {
            match closure {
                ClosureLink::Complementary { leaf, positive, negative } => {
                    out.push_str(&format!("closure {leaf} atoms {positive} {negative}\n"));
                }
                ClosureLink::NotTop { leaf, node } => {
                    out.push_str(&format!("closure {leaf} top {node}\n"));
                }
            }
        }
        for (var, term) in self.substitution.iter() {
            out.push_str(&format!(
                "subst {} {}\n",
                var,
                crate::syntax::term_compact(term)
            ));
        }
        out
    }

    /// Parses a trace produced by [`Proof::to_trace`].
    pub fn from_trace(text: &str) -> Result<Proof, TraceError> {
        let mut goal = None;
        let mut nodes: Vec<ProofNode> = Vec::new();
        let mut closures = Vec::new();
        let mut bindings = std::collections::BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let err = |message: String| TraceError { line: lineno, message };
            let line = line.trim_end();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("goal ") {
                if goal.is_some() {
                    return Err(err("duplicate goal line".into()));
                }
                goal = Some(
                    parse_con(rest).map_err(|e| err(format!("bad goal formula: {e}")))?,
                );
            } else if let Some(rest) = line.strip_prefix("node ") {
                let node = parse_node_line(rest, nodes.len())
                    .map_err(|message| err(message))?;
                nodes.push(node);
            } else if let Some(rest) = line.strip_prefix("closure ") {
                closures.push(parse_closure_line(rest).map_err(|message| err(message))?);
            } else if let Some(rest) = line.strip_prefix("subst ") {
                let (var, term_text) = rest
                    .split_once(' ')
                    .ok_or_else(|| err("subst line needs a variable and a term".into()))?;
                let term = parse_term(term_text)
                    .map_err(|e| err(format!("bad substitution term: {e}")))?;
                bindings.insert(var.to_string(), term);
            } else {
                return Err(err(format!("unrecognized line: {line}")));
            }
        }
        let goal = goal.ok_or(TraceError { line: 0, message: "missing goal line".into() })?;
        Ok(Proof { goal, nodes, closures, substitution: Substitution::from_map(bindings) })
    }
}

fn parse_usize(token: &str, what: &str) -> Result<usize, String> {
    token.parse().map_err(|_| format!("bad {what}: {token}"))
}

fn parse_node_line(rest: &str, expected_id: usize) -> Result<ProofNode, String> {
    // Layout after the "node " prefix, space-separated:
    //   <id> ctx <c> acc {<c,..>} parent <p|-> rule <key|root>
    //   from <id|-> exp <n|-> part <k|-> intro <term|-> formula <formula…>
    let tokens: Vec<&str> = rest.splitn(19, ' ').collect();
    if tokens.len() != 19 {
        return Err("truncated node line".into());
    }
    let keyword = |at: usize, want: &str| -> Result<(), String> {
        if tokens[at] == want {
            Ok(())
        } else {
            Err(format!("expected `{want}`, found `{}`", tokens[at]))
        }
    };
    let id = parse_usize(tokens[0], "node id")?;
    if id != expected_id {
        return Err(format!("node id {id} out of order; expected {expected_id}"));
    }
    keyword(1, "ctx")?;
    let context: u32 = tokens[2].parse().map_err(|_| format!("bad context id: {}", tokens[2]))?;
    keyword(3, "acc")?;
    let acc_body = tokens[4]
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| format!("bad accessible set: {}", tokens[4]))?;
    let mut accessible = BTreeSet::new();
    if !acc_body.is_empty() {
        for piece in acc_body.split(',') {
            accessible.insert(
                piece.parse().map_err(|_| format!("bad accessible context: {piece}"))?,
            );
        }
    }
    keyword(5, "parent")?;
    let parent = match tokens[6] {
        "-" => None,
        p => Some(parse_usize(p, "parent id")?),
    };
    keyword(7, "rule")?;
    keyword(9, "from")?;
    keyword(11, "exp")?;
    keyword(13, "part")?;
    keyword(15, "intro")?;
    keyword(17, "formula")?;
    let origin = if tokens[8] == "root" {
        for (at, what) in [(10, "from"), (12, "exp"), (14, "part"), (16, "intro")] {
            if tokens[at] != "-" {
                return Err(format!("root node must have {what} `-`"));
            }
        }
        None
    } else {
        let rule = RuleName::from_key(tokens[8])
            .ok_or_else(|| format!("unknown rule: {}", tokens[8]))?;
        let premise = parse_usize(tokens[10], "premise id")?;
        let expansion: u64 =
            tokens[12].parse().map_err(|_| format!("bad expansion id: {}", tokens[12]))?;
        let part = parse_usize(tokens[14], "part index")?;
        let introduced = match tokens[16] {
            "-" => None,
            t => Some(parse_term(t).map_err(|e| format!("bad introduced term: {e}"))?),
        };
        Some(Origin { rule, premise, expansion, part, introduced })
    };
    let formula = parse_con(tokens[18]).map_err(|e| format!("bad node formula: {e}"))?;
    Ok(ProofNode { id, parent, label: Label { context, accessible }, formula, origin })
}

fn parse_closure_line(rest: &str) -> Result<ClosureLink, String> {
    let tokens: Vec<&str> = rest.split(' ').collect();
    match tokens.as_slice() {
        [leaf, "atoms", positive, negative] => Ok(ClosureLink::Complementary {
            leaf: parse_usize(leaf, "closure leaf")?,
            positive: parse_usize(positive, "closure node")?,
            negative: parse_usize(negative, "closure node")?,
        }),
        [leaf, "top", node] => Ok(ClosureLink::NotTop {
            leaf: parse_usize(leaf, "closure leaf")?,
            node: parse_usize(node, "closure node")?,
        }),
        _ => Err(format!("bad closure line: {rest}")),
    }
}

/// An error from [`Proof::from_trace`], with the 1-based offending line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for TraceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "trace error at line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for TraceError {}
