//! Presupposition projection: which presuppositions of a discourse survive
//! to become commitments of the whole discourse?
//!
//! Two routes answer that question.
//!
//! The *recursive* route walks the discourse with [`pres`], threading a
//! growing local context through the connectives: the right conjunct of
//! `φ & ψ` (and the consequent of `φ -> ψ`) is evaluated in the context
//! extended by the assertive content of `φ`, and the right disjunct of
//! `φ | ψ` in the context extended by `~as(φ)`.  Every trigger `π/φ` fires
//! one entailment check `Γ ⊢ π` against its local context; `π` projects
//! exactly when the check fails.  Each check is an independent proof
//! search, so material shared between contexts is re-proved from scratch
//! again and again.
//!
//! The *translation* route compiles the discourse once, via [`translate_tau`],
//! into the context language: local contexts become explicit `in(Γ, …)`
//! operators and every trigger contributes its presupposition as a proof
//! obligation inside the right operator.  A single tableau refutation of the
//! translation then answers *all* projection checks at once, sharing the
//! decomposition of common context members between them.  [`translate`]
//! additionally prunes vacuous `true` obligations with [`simplify_top`].
//!
//! Both routes agree: the translation is provable exactly when [`pres`]
//! projects nothing (the `bench` module measures how much redundant work
//! the translation saves).

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::formulas::{ConFormula, Context, LFormula, PreFormula};
use crate::syntax::render;
use crate::tableau::{self, EntailmentVerdict, Proof, ProofLimits, ProofStats};

/// The assertive content `as(φ)`: the formula with all presupposition
/// markers stripped, `as(π/φ) = as(φ)`.
///
/// This is what a discourse *adds* to the context when it is processed,
/// as opposed to what it requires of the context.
pub fn assertive_content(f: &PreFormula) -> LFormula {
    match f {
        PreFormula::Atom(p, args) => LFormula::Atom(p.clone(), args.clone()),
        PreFormula::Not(g) => LFormula::not(assertive_content(g)),
        PreFormula::And(a, b) => LFormula::and(assertive_content(a), assertive_content(b)),
        PreFormula::Or(a, b) => LFormula::or(assertive_content(a), assertive_content(b)),
        PreFormula::Implies(a, b) => LFormula::implies(assertive_content(a), assertive_content(b)),
        PreFormula::Forall(x, g) => LFormula::Forall(x.clone(), Box::new(assertive_content(g))),
        PreFormula::Exists(x, g) => LFormula::Exists(x.clone(), Box::new(assertive_content(g))),
        PreFormula::Presup(_, body) => assertive_content(body),
    }
}

/// The potential presuppositions `pp(φ)`: the left arguments of all `/`
/// subformulas, collected without regard to context.
///
/// A nonempty `pp(φ)` means `φ` contains at least one trigger, so a
/// context-sensitive translation of `φ` is required.
pub fn potential_presups(f: &PreFormula) -> Context {
    let mut out = Context::new();
    collect_pp(f, &mut out);
    out
}

fn collect_pp(f: &PreFormula, out: &mut Context) {
    match f {
        PreFormula::Atom(..) => {}
        PreFormula::Not(g) | PreFormula::Forall(_, g) | PreFormula::Exists(_, g) => {
            collect_pp(g, out)
        }
        PreFormula::And(a, b) | PreFormula::Or(a, b) | PreFormula::Implies(a, b) => {
            collect_pp(a, out);
            collect_pp(b, out);
        }
        PreFormula::Presup(pi, body) => {
            out.insert(pi.clone());
            collect_pp(body, out);
        }
    }
}

/// The answer an oracle gives to one entailment question `Γ ⊢ π`.
#[derive(Debug, Clone)]
pub struct EntailmentOutcome {
    pub verdict: EntailmentVerdict,
    /// Work the oracle performed, merged into [`PresuppositionSet::stats`].
    pub stats: ProofStats,
    /// A checkable proof object when the oracle produced one.
    pub proof: Option<Proof>,
}

/// Decides entailment questions `Γ ⊢ π` for [`pres_with`].
///
/// The projection function is parametric in the entailment relation: the
/// default is the labeled tableau prover ([`TableauOracle`]), and the
/// `bench` module substitutes a truth-table oracle to cross-check it on
/// propositional inputs.
pub trait EntailmentOracle {
    fn entails(&mut self, context: &Context, goal: &LFormula) -> EntailmentOutcome;
}

/// The default oracle: one labeled-tableau proof search per question.
#[derive(Debug, Clone, Copy)]
pub struct TableauOracle {
    pub limits: ProofLimits,
}

impl EntailmentOracle for TableauOracle {
    fn entails(&mut self, context: &Context, goal: &LFormula) -> EntailmentOutcome {
        let (verdict, result) = tableau::entails(context, goal, &self.limits);
        EntailmentOutcome {
            verdict,
            stats: result.stats,
            proof: result.proof,
        }
    }
}

/// What became of one potential presupposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MemberVerdict {
    /// Some occurrence's local context failed to entail it: it projects.
    Projects,
    /// Every occurrence was entailed by its local context: it is absorbed.
    Entailed,
    /// At least one check ran out of resources and none failed outright.
    Unknown,
}

impl MemberVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            MemberVerdict::Projects => "projects",
            MemberVerdict::Entailed => "entailed",
            MemberVerdict::Unknown => "unknown",
        }
    }

    fn from_check(verdict: EntailmentVerdict) -> MemberVerdict {
        match verdict {
            EntailmentVerdict::Entailed => MemberVerdict::Entailed,
            EntailmentVerdict::NotProved => MemberVerdict::Projects,
            EntailmentVerdict::Unknown => MemberVerdict::Unknown,
        }
    }

    /// A presupposition triggered more than once projects if *any*
    /// occurrence does (set union over occurrences).
    fn merge(self, other: MemberVerdict) -> MemberVerdict {
        fn rank(v: MemberVerdict) -> u8 {
            match v {
                MemberVerdict::Entailed => 0,
                MemberVerdict::Unknown => 1,
                MemberVerdict::Projects => 2,
            }
        }
        if rank(other) > rank(self) {
            other
        } else {
            self
        }
    }
}

impl fmt::Display for MemberVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for MemberVerdict {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// One entailment question asked while computing a presupposition set,
/// in the order the recursion asked them.
#[derive(Debug, Clone)]
pub struct EntailmentCheck {
    pub context: Context,
    pub goal: LFormula,
    pub verdict: EntailmentVerdict,
    /// The closed tableau when the check succeeded.
    pub proof: Option<Proof>,
}

impl Serialize for EntailmentCheck {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("EntailmentCheck", 3)?;
        s.serialize_field("context", &render(&self.context))?;
        s.serialize_field("goal", &render(&self.goal))?;
        s.serialize_field("verdict", self.verdict.as_str())?;
        s.end()
    }
}

/// The result of projecting a discourse: its potential presuppositions with
/// their fates, the entailment checks that decided them, and the total
/// proof-search work.
#[derive(Debug, Clone, Default)]
pub struct PresuppositionSet {
    /// Every potential presupposition (deduplicated up to alpha-equivalence,
    /// in first-trigger order) with its merged verdict.
    pub members: Vec<(LFormula, MemberVerdict)>,
    /// The checks in the order the recursion performed them.
    pub checks: Vec<EntailmentCheck>,
    /// Aggregate work across all checks.
    pub stats: ProofStats,
}

impl PresuppositionSet {
    /// The presuppositions of the whole discourse.
    ///
    /// An `Unknown` member is included: a presupposition not shown to be
    /// entailed by its local context must conservatively be treated as a
    /// commitment of the discourse.
    pub fn projected(&self) -> Vec<&LFormula> {
        self.members
            .iter()
            .filter(|(_, v)| *v != MemberVerdict::Entailed)
            .map(|(f, _)| f)
            .collect()
    }

    /// Whether every check produced a definite verdict.
    pub fn is_definite(&self) -> bool {
        self.checks
            .iter()
            .all(|c| c.verdict != EntailmentVerdict::Unknown)
    }

    fn note_member(&mut self, pi: &LFormula, verdict: MemberVerdict) {
        if let Some((_, v)) = self.members.iter_mut().find(|(m, _)| m.alpha_eq(pi)) {
            *v = v.merge(verdict);
        } else {
            self.members.push((pi.clone(), verdict));
        }
    }
}

impl fmt::Display for PresuppositionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let projected = self.projected();
        if projected.is_empty() {
            writeln!(f, "projected: (none)")?;
        } else {
            let rendered: Vec<String> = projected.iter().map(|m| render(*m)).collect();
            writeln!(f, "projected: {}", rendered.join(", "))?;
        }
        if self.members.is_empty() {
            writeln!(f, "members: (none)")?;
        } else {
            writeln!(f, "members:")?;
            for (m, v) in &self.members {
                writeln!(f, "  {}: {}", render(m), v)?;
            }
        }
        write!(f, "checks: {}", self.checks.len())?;
        for c in &self.checks {
            write!(
                f,
                "\n  {} |- {}: {}",
                render(&c.context),
                render(&c.goal),
                c.verdict.as_str()
            )?;
        }
        Ok(())
    }
}

impl Serialize for PresuppositionSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Member {
            formula: String,
            verdict: MemberVerdict,
        }
        let mut s = serializer.serialize_struct("PresuppositionSet", 4)?;
        let projected: Vec<String> = self.projected().iter().map(|m| render(*m)).collect();
        let members: Vec<Member> = self
            .members
            .iter()
            .map(|(m, v)| Member {
                formula: render(m),
                verdict: *v,
            })
            .collect();
        s.serialize_field("projected", &projected)?;
        s.serialize_field("members", &members)?;
        s.serialize_field("checks", &self.checks)?;
        s.serialize_field("stats", &self.stats)?;
        s.end()
    }
}

/// Computes the presuppositions `φ` projects against the context `Γ`,
/// deciding each entailment check with the labeled tableau prover.
pub fn pres(f: &PreFormula, context: &Context, limits: &ProofLimits) -> PresuppositionSet {
    pres_with(f, context, &mut TableauOracle { limits: *limits })
}

/// [`pres`] with a caller-supplied entailment oracle.
///
/// The recursion follows the structure of `φ`, left to right:
///
/// * atoms presuppose nothing, negation is transparent;
/// * in `φ & ψ` and `φ -> ψ`, `ψ` is evaluated in `Γ ∪ {as(φ)}`;
/// * in `φ | ψ`, `ψ` is evaluated in `Γ ∪ {~as(φ)}`;
/// * quantifiers pass `Γ` through unchanged;
/// * `π/φ` asks the oracle whether `Γ ⊢ π` — `π` projects unless it is
///   entailed — and then evaluates `φ` in the same `Γ`.
pub fn pres_with(
    f: &PreFormula,
    context: &Context,
    oracle: &mut dyn EntailmentOracle,
) -> PresuppositionSet {
    let mut out = PresuppositionSet::default();
    collect_pres(f, context, oracle, &mut out);
    out
}

fn collect_pres(
    f: &PreFormula,
    context: &Context,
    oracle: &mut dyn EntailmentOracle,
    out: &mut PresuppositionSet,
) {
    match f {
        PreFormula::Atom(..) => {}
        PreFormula::Not(g) => collect_pres(g, context, oracle, out),
        PreFormula::And(a, b) | PreFormula::Implies(a, b) => {
            collect_pres(a, context, oracle, out);
            let extended = context.with(assertive_content(a));
            collect_pres(b, &extended, oracle, out);
        }
        PreFormula::Or(a, b) => {
            collect_pres(a, context, oracle, out);
            let extended = context.with(LFormula::not(assertive_content(a)));
            collect_pres(b, &extended, oracle, out);
        }
        PreFormula::Forall(_, g) | PreFormula::Exists(_, g) => {
            collect_pres(g, context, oracle, out)
        }
        PreFormula::Presup(pi, body) => {
            let outcome = oracle.entails(context, pi);
            out.stats.merge(&outcome.stats);
            out.note_member(pi, MemberVerdict::from_check(outcome.verdict));
            out.checks.push(EntailmentCheck {
                context: context.clone(),
                goal: pi.clone(),
                verdict: outcome.verdict,
                proof: outcome.proof,
            });
            collect_pres(body, context, oracle, out);
        }
    }
}

/// Translates `φ` against the context `Γ` into the context language.
///
/// The translation is purely syntactic — no entailment checks run.  Its
/// output is provable exactly when no presupposition of `φ` projects
/// against `Γ`.  Case analysis, by the main connective of `φ`:
///
/// * **atom** — nothing to check: `true`;
/// * **`~φ`** — negation is transparent: `τ(φ, Γ)` if `φ` contains a
///   trigger, else `true`;
/// * **`φ & ψ`, `φ -> ψ`** — if `φ` contains a trigger, both sides carry
///   obligations and the pair is wrapped in `Γ` when `Γ` is nonempty:
///   `in(Γ, τ(φ, ∅) & τ(ψ, {as(φ)}))`; with empty `Γ` the wrapper is
///   dropped; if `φ` is trigger-free it is absorbed into the context of
///   `ψ`: `τ(ψ, Γ ∪ {φ})`;
/// * **`φ | ψ`** — as above with `~as(φ)` (resp. `~φ`) in place of
///   `as(φ)` (resp. `φ`);
/// * **`π/φ`** — the obligation `π` itself, conjoined with the body's
///   obligations when the body has any, wrapped in `Γ` when nonempty;
/// * **quantifiers** — `in(Γ, Qx τ(φ, ∅))` when `φ` has a trigger and `Γ`
///   is nonempty, `Qx τ(φ, Γ)` when `Γ` is empty, `true` otherwise.
///
/// The `in` operator is only ever introduced with a nonempty context.
pub fn translate_tau(f: &PreFormula, context: &Context) -> ConFormula {
    match f {
        PreFormula::Atom(..) => ConFormula::Top,
        PreFormula::Not(g) => {
            if potential_presups(g).is_empty() {
                ConFormula::Top
            } else {
                translate_tau(g, context)
            }
        }
        PreFormula::And(a, b) | PreFormula::Implies(a, b) => {
            translate_binary(a, b, context, false)
        }
        PreFormula::Or(a, b) => translate_binary(a, b, context, true),
        PreFormula::Presup(pi, body) => {
            let obligation: ConFormula = pi.clone().into();
            let combined = if potential_presups(body).is_empty() {
                obligation
            } else {
                ConFormula::and(obligation, translate_tau(body, &Context::new()))
            };
            wrap(context, combined)
        }
        PreFormula::Forall(x, body) => translate_quant(context, body, |inner| {
            ConFormula::Forall(x.clone(), Box::new(inner))
        }),
        PreFormula::Exists(x, body) => translate_quant(context, body, |inner| {
            ConFormula::Exists(x.clone(), Box::new(inner))
        }),
    }
}

/// Shared case for `&`, `->` (`negate_left = false`) and `|` (`true`):
/// the right operand's local context grows by `as(φ)` or `~as(φ)`.
fn translate_binary(
    a: &PreFormula,
    b: &PreFormula,
    context: &Context,
    negate_left: bool,
) -> ConFormula {
    let extension = if negate_left {
        LFormula::not(assertive_content(a))
    } else {
        assertive_content(a)
    };
    if potential_presups(a).is_empty() {
        // The left operand is trigger-free, hence identical to its
        // assertive content: absorb it into the right operand's context.
        let extended = context.with(extension);
        translate_tau(b, &extended)
    } else {
        let left = translate_tau(a, &Context::new());
        let right = translate_tau(b, &Context::from_iter([extension]));
        wrap(context, ConFormula::and(left, right))
    }
}

fn translate_quant(
    context: &Context,
    body: &PreFormula,
    quantify: impl FnOnce(ConFormula) -> ConFormula,
) -> ConFormula {
    if potential_presups(body).is_empty() {
        ConFormula::Top
    } else if context.is_empty() {
        quantify(translate_tau(body, context))
    } else {
        wrap(context, quantify(translate_tau(body, &Context::new())))
    }
}

/// `in(Γ, φ)`, or `φ` itself when `Γ` is empty.
fn wrap(context: &Context, body: ConFormula) -> ConFormula {
    if context.is_empty() {
        body
    } else {
        ConFormula::in_context(context.clone(), body)
    }
}

/// Removes vacuous `true` obligations, bottom-up:
///
/// * `true & φ` and `φ & true` become `φ`;
/// * `true | φ`, `φ | true`, and `φ -> true` become `true`;
/// * `true -> φ` becomes `φ`;
/// * `in(Γ, true)` and `Qx true` become `true`;
/// * `~true` is left intact (it is falsity, not vacuity).
///
/// One bottom-up pass reaches a fixpoint: every rewrite yields either
/// `true` or an already-simplified subterm.
pub fn simplify_top(f: &ConFormula) -> ConFormula {
    match f {
        ConFormula::Atom(..) | ConFormula::Top => f.clone(),
        ConFormula::Not(g) => ConFormula::not(simplify_top(g)),
        ConFormula::And(a, b) => match (simplify_top(a), simplify_top(b)) {
            (ConFormula::Top, b) => b,
            (a, ConFormula::Top) => a,
            (a, b) => ConFormula::and(a, b),
        },
        ConFormula::Or(a, b) => match (simplify_top(a), simplify_top(b)) {
            (ConFormula::Top, _) | (_, ConFormula::Top) => ConFormula::Top,
            (a, b) => ConFormula::or(a, b),
        },
        ConFormula::Implies(a, b) => match (simplify_top(a), simplify_top(b)) {
            (_, ConFormula::Top) => ConFormula::Top,
            (ConFormula::Top, b) => b,
            (a, b) => ConFormula::implies(a, b),
        },
        ConFormula::In(ctx, body) => match simplify_top(body) {
            ConFormula::Top => ConFormula::Top,
            body => ConFormula::in_context(ctx.clone(), body),
        },
        ConFormula::Forall(x, body) => match simplify_top(body) {
            ConFormula::Top => ConFormula::Top,
            body => ConFormula::Forall(x.clone(), Box::new(body)),
        },
        ConFormula::Exists(x, body) => match simplify_top(body) {
            ConFormula::Top => ConFormula::Top,
            body => ConFormula::Exists(x.clone(), Box::new(body)),
        },
    }
}

/// The full translation pipeline against the empty context:
/// `simplify_top(translate_tau(φ, ∅))`.
pub fn translate(f: &PreFormula) -> ConFormula {
    simplify_top(&translate_tau(f, &Context::new()))
}

/// Flags `in` operators whose context mentions a variable bound outside
/// them.
///
/// The translation can leave a context inside a quantifier — for example
/// `forall x. (P(x)/Q(x) -> S(x)/T(x))` yields
/// `forall x. P(x) & in({Q(x)}, S(x))` — and such a context is only
/// meaningful relative to the binding.  Proof search handles this (the
/// bound variable is instantiated before the context is entered), but the
/// formula no longer denotes a single fixed context set, so the condition
/// is worth surfacing to callers.
pub fn scope_warnings(f: &ConFormula) -> Vec<String> {
    let mut warnings = Vec::new();
    walk_scopes(f, &mut Vec::new(), &mut warnings);
    warnings
}

fn walk_scopes(f: &ConFormula, bound: &mut Vec<String>, warnings: &mut Vec<String>) {
    match f {
        ConFormula::Atom(..) | ConFormula::Top => {}
        ConFormula::Not(g) => walk_scopes(g, bound, warnings),
        ConFormula::And(a, b) | ConFormula::Or(a, b) | ConFormula::Implies(a, b) => {
            walk_scopes(a, bound, warnings);
            walk_scopes(b, bound, warnings);
        }
        ConFormula::Forall(x, g) | ConFormula::Exists(x, g) => {
            bound.push(x.clone());
            walk_scopes(g, bound, warnings);
            bound.pop();
        }
        ConFormula::In(ctx, body) => {
            for x in ctx.free_vars() {
                if bound.contains(&x) {
                    warnings.push(format!(
                        "context {} mentions the bound variable {}; it denotes one context per instantiation",
                        render(ctx),
                        x
                    ));
                }
            }
            walk_scopes(body, bound, warnings);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_con, parse_l, parse_pre};

    fn pre(s: &str) -> PreFormula {
        parse_pre(s).expect("test formula parses")
    }

    fn l(s: &str) -> LFormula {
        parse_l(s).expect("test formula parses")
    }

    fn ctx(members: &[&str]) -> Context {
        members.iter().map(|s| l(s)).collect()
    }

    /// The running example: a three-sentence discourse whose triggers are
    /// all satisfied by what precedes them.
    fn discourse() -> PreFormula {
        pre("p & ((p/q -> (p & q)/r) & p/s)")
    }

    #[test]
    fn assertive_content_strips_every_marker() {
        assert_eq!(assertive_content(&discourse()), l("p & ((q -> r) & s)"));
        assert_eq!(assertive_content(&pre("m/h")), l("h"));
        assert_eq!(
            assertive_content(&pre("forall x. (P(x)/Q(x) | ~R(x))")),
            l("forall x. (Q(x) | ~R(x))")
        );
    }

    #[test]
    fn potential_presups_collects_left_arguments() {
        let pp = potential_presups(&discourse());
        assert_eq!(pp.len(), 2);
        assert!(pp.contains(&l("p")));
        assert!(pp.contains(&l("p & q")));
        assert!(potential_presups(&pre("p & (q -> r)")).is_empty());
    }

    #[test]
    fn satisfied_triggers_do_not_project() {
        let set = pres(&discourse(), &Context::new(), &ProofLimits::default());
        assert!(set.projected().is_empty());
        assert_eq!(set.checks.len(), 3);
        assert!(set
            .checks
            .iter()
            .all(|c| c.verdict == EntailmentVerdict::Entailed));
        // The contexts grow left to right exactly as the connectives dictate.
        assert_eq!(set.checks[0].context, ctx(&["p"]));
        assert_eq!(set.checks[0].goal, l("p"));
        assert_eq!(set.checks[1].context, ctx(&["p", "q"]));
        assert_eq!(set.checks[1].goal, l("p & q"));
        assert_eq!(set.checks[2].context, ctx(&["p", "q -> r"]));
        assert_eq!(set.checks[2].goal, l("p"));
    }

    #[test]
    fn unsatisfied_trigger_projects() {
        let set = pres(&pre("m/h"), &Context::new(), &ProofLimits::default());
        assert_eq!(
            set.members,
            vec![(l("m"), MemberVerdict::Projects)]
        );
        assert_eq!(set.projected(), vec![&l("m")]);
        assert_eq!(set.checks.len(), 1);
        assert_eq!(set.checks[0].verdict, EntailmentVerdict::NotProved);
    }

    #[test]
    fn antecedent_can_absorb_its_own_presupposition() {
        // The trigger in the consequent is checked against {m}, so nothing
        // projects even from the empty starting context.
        let set = pres(&pre("m -> m/h"), &Context::new(), &ProofLimits::default());
        assert!(set.projected().is_empty());
        assert_eq!(set.members, vec![(l("m"), MemberVerdict::Entailed)]);
    }

    #[test]
    fn starting_context_satisfies_triggers() {
        let set = pres(&pre("m/h"), &ctx(&["m"]), &ProofLimits::default());
        assert!(set.projected().is_empty());
    }

    #[test]
    fn disjunction_extends_with_negated_left() {
        // The right disjunct of ~m | m/h is read against {~as(~m)} = {~~m},
        // which still proves m.
        let set = pres(&pre("~m | m/h"), &Context::new(), &ProofLimits::default());
        assert!(set.projected().is_empty());
        assert_eq!(set.checks[0].context, ctx(&["~~m"]));
    }

    #[test]
    fn repeated_trigger_merges_to_the_worse_verdict() {
        // First occurrence of m is unsupported, second is supported (its
        // context holds h and m by then); the union still projects m.
        let set = pres(
            &pre("m/h & (m & m/h)"),
            &Context::new(),
            &ProofLimits::default(),
        );
        assert_eq!(set.checks.len(), 2);
        assert_eq!(set.checks[0].verdict, EntailmentVerdict::NotProved);
        assert_eq!(set.checks[1].verdict, EntailmentVerdict::Entailed);
        assert_eq!(set.checks[1].context, ctx(&["h", "m"]));
        assert_eq!(set.members, vec![(l("m"), MemberVerdict::Projects)]);
    }

    #[test]
    fn quantifiers_pass_the_context_through() {
        let set = pres(
            &pre("P(a) & forall x. (P(a)/Q(x))"),
            &Context::new(),
            &ProofLimits::default(),
        );
        assert!(set.projected().is_empty());
        assert_eq!(set.checks[0].context, ctx(&["P(a)"]));
    }

    #[test]
    fn display_lists_checks_in_order() {
        let set = pres(&discourse(), &Context::new(), &ProofLimits::default());
        let text = set.to_string();
        assert_eq!(
            text,
            "projected: (none)\n\
             members:\n\
             \x20 p: entailed\n\
             \x20 p & q: entailed\n\
             checks: 3\n\
             \x20 {p} |- p: entailed\n\
             \x20 {p, q} |- p & q: entailed\n\
             \x20 {p, q -> r} |- p: entailed"
        );
    }

    #[test]
    fn display_reports_projection() {
        let set = pres(&pre("m/h"), &Context::new(), &ProofLimits::default());
        let text = set.to_string();
        assert!(text.starts_with("projected: m\n"));
        assert!(text.contains("m: projects"));
        assert!(text.contains("{} |- m: not proved"));
    }

    #[test]
    fn set_serializes_to_json() {
        let set = pres(&pre("m/h"), &Context::new(), &ProofLimits::default());
        let v = serde_json::to_value(&set).expect("serializes");
        assert_eq!(v["projected"], serde_json::json!(["m"]));
        assert_eq!(v["members"][0]["formula"], "m");
        assert_eq!(v["members"][0]["verdict"], "projects");
        assert_eq!(v["checks"][0]["context"], "{}");
        assert_eq!(v["checks"][0]["goal"], "m");
        assert_eq!(v["checks"][0]["verdict"], "not proved");
        assert!(v["stats"]["nodes_created"].as_u64().unwrap() > 0);
    }

    #[test]
    fn translation_of_the_discourse() {
        let t = translate_tau(&discourse(), &Context::new());
        assert_eq!(
            render(&t),
            "in({p}, p & in({q}, p & q) & in({q -> r}, p))"
        );
        // Already free of `true`, so simplification is the identity here.
        assert_eq!(simplify_top(&t), t);
        assert_eq!(translate(&discourse()), t);
    }

    #[test]
    fn translation_of_trigger_free_formulas_is_vacuous() {
        assert_eq!(translate(&pre("P(a)")), ConFormula::Top);
        assert_eq!(translate(&pre("p & (q -> r)")), ConFormula::Top);
        assert_eq!(translate(&pre("forall x. P(x)")), ConFormula::Top);
    }

    #[test]
    fn translation_wraps_triggers_in_their_context() {
        let t = translate_tau(&pre("p/q"), &ctx(&["r"]));
        assert_eq!(t, parse_con("in({r}, p)").unwrap());
        // Against the empty context the obligation stands bare.
        assert_eq!(translate(&pre("p/q")), parse_con("p").unwrap());
    }

    #[test]
    fn translation_threads_local_contexts() {
        // The trigger-free antecedent m is absorbed into the consequent's
        // context rather than producing a conjunction.
        assert_eq!(
            translate(&pre("m -> m/h")),
            parse_con("in({m}, m)").unwrap()
        );
        // A disjunction contributes its negated left disjunct.
        assert_eq!(
            translate(&pre("m | m/h")),
            parse_con("in({~m}, m)").unwrap()
        );
    }

    #[test]
    fn translation_keeps_both_sides_when_the_left_triggers() {
        assert_eq!(
            translate(&pre("p/q & r/s")),
            parse_con("p & in({q}, r)").unwrap()
        );
        // …and wraps the pair when the outer context is nonempty.
        assert_eq!(
            translate_tau(&pre("p/q & r/s"), &ctx(&["u"])),
            parse_con("in({u}, p & in({q}, r))").unwrap()
        );
    }

    #[test]
    fn translation_of_quantified_bodies() {
        assert_eq!(
            translate(&pre("forall x. (P(x)/Q(x))")),
            parse_con("forall x. P(x)").unwrap()
        );
        assert_eq!(
            translate_tau(&pre("exists x. (P(x)/Q(x))"), &ctx(&["r"])),
            parse_con("in({r}, exists x. P(x))").unwrap()
        );
        // Negation is transparent.
        assert_eq!(
            translate(&pre("~(p/q)")),
            parse_con("p").unwrap()
        );
    }

    #[test]
    fn simplify_removes_vacuous_obligations() {
        let cases = [
            ("true & p", "p"),
            ("p & true", "p"),
            ("true | p", "true"),
            ("p | true", "true"),
            ("true -> p", "p"),
            ("p -> true", "true"),
            ("in({p}, true)", "true"),
            ("forall x. true", "true"),
            ("in({p}, q & true)", "in({p}, q)"),
            ("~true", "~true"),
            ("p & (true & (q & true))", "p & q"),
        ];
        for (input, expected) in cases {
            assert_eq!(
                simplify_top(&parse_con(input).unwrap()),
                parse_con(expected).unwrap(),
                "simplify_top({input})"
            );
        }
    }

    #[test]
    fn never_emits_empty_in_contexts() {
        fn no_empty_in(f: &ConFormula) -> bool {
            match f {
                ConFormula::Atom(..) | ConFormula::Top => true,
                ConFormula::Not(g)
                | ConFormula::Forall(_, g)
                | ConFormula::Exists(_, g) => no_empty_in(g),
                ConFormula::And(a, b)
                | ConFormula::Or(a, b)
                | ConFormula::Implies(a, b) => no_empty_in(a) && no_empty_in(b),
                ConFormula::In(ctx, g) => !ctx.is_empty() && no_empty_in(g),
            }
        }
        for s in [
            "p & ((p/q -> (p & q)/r) & p/s)",
            "m -> m/h",
            "p/q & r/s",
            "~(p/q) | (m/h & u)",
            "forall x. (P(x)/Q(x) -> S(x)/T(x))",
        ] {
            assert!(no_empty_in(&translate(&pre(s))), "translation of {s}");
        }
    }

    #[test]
    fn scope_warning_fires_for_captured_context() {
        let t = translate(&pre("forall x. (P(x)/Q(x) -> S(x)/T(x))"));
        assert_eq!(render(&t), "forall x. P(x) & in({Q(x)}, S(x))");
        let warnings = scope_warnings(&t);
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("{Q(x)}"));
        assert!(warnings[0].contains("bound variable x"));
    }

    #[test]
    fn no_scope_warning_for_closed_contexts() {
        assert!(scope_warnings(&translate(&discourse())).is_empty());
        assert!(scope_warnings(&translate(&pre("forall x. (P(a)/Q(x))"))).is_empty());
    }
}
