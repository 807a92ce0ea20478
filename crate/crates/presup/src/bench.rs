//! Quantifying the redundancy the context-language translation removes.
//!
//! The baseline route ([`run_baseline`]) answers each projection question
//! with its own tableau: a trigger's local context is decomposed from
//! scratch for every check, so material shared between contexts — in a
//! discourse, everything said so far — is re-processed once per trigger.
//! The contextual route ([`run_contextual`]) proves the single translated
//! formula, where each context member is decomposed once and shared, via
//! labels, by every obligation that can see it.
//!
//! [`compare`] runs both on the same input and reports the ratio of
//! context-member decompositions (`formula_expansions`), plus an agreement
//! verdict: the translation must be provable exactly when the baseline
//! projects nothing.  A disagreement is a hard error, not a data point.
//!
//! The module also houses the independent semantic ground truth used to
//! cross-check the prover on propositional inputs: a truth-table
//! entailment decision ([`entail_truth_table`]) lifted to the context
//! language by [`eval_oracle`], and a seeded discourse generator
//! ([`generate_family`]) for scaling measurements.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::formulas::{ConFormula, Context, LFormula, PreFormula};
use crate::projection::{
    pres, simplify_top, translate_tau, EntailmentOracle, EntailmentOutcome, PresuppositionSet,
};
use crate::syntax::render;
use crate::tableau::{
    prove, EntailmentVerdict, ProofLimits, ProofResult, ProofStats, ProofVerdict,
};

/// Why the semantic oracle could not evaluate an input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    /// A quantifier or a predicate with arguments: not propositional.
    NonPropositional(String),
    /// A connective the context-language evaluator does not interpret
    /// (negation or implication over a subformula mentioning `in`).
    UnsupportedShape(String),
    /// Too many distinct atoms to enumerate valuations.
    TooManyAtoms(usize),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::NonPropositional(what) => {
                write!(f, "not propositional: {what}")
            }
            OracleError::UnsupportedShape(what) => {
                write!(f, "unsupported shape: {what}")
            }
            OracleError::TooManyAtoms(n) => {
                write!(f, "too many distinct atoms to enumerate: {n}")
            }
        }
    }
}

impl std::error::Error for OracleError {}

/// Ceiling on distinct atoms for truth-table enumeration (2^22 valuations).
const MAX_TABLE_ATOMS: usize = 22;

/// Decides `Δ ⊨ π` for propositional inputs by enumerating all valuations
/// of the atoms that occur in `Δ` and `π`.
///
/// This is the semantic ground truth against which the tableau prover is
/// cross-checked; it shares no code with the proof search.
pub fn entail_truth_table(context: &Context, goal: &LFormula) -> Result<bool, OracleError> {
    let mut atoms = BTreeSet::new();
    for member in context.iter() {
        collect_prop_atoms(member, &mut atoms)?;
    }
    collect_prop_atoms(goal, &mut atoms)?;
    if atoms.len() > MAX_TABLE_ATOMS {
        return Err(OracleError::TooManyAtoms(atoms.len()));
    }
    let atoms: Vec<&String> = atoms.iter().collect();
    for bits in 0u64..(1u64 << atoms.len()) {
        let valuation: BTreeMap<&str, bool> = atoms
            .iter()
            .enumerate()
            .map(|(i, name)| (name.as_str(), bits & (1 << i) != 0))
            .collect();
        let premises_hold = context.iter().all(|m| eval_prop(m, &valuation));
        if premises_hold && !eval_prop(goal, &valuation) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn collect_prop_atoms(f: &LFormula, out: &mut BTreeSet<String>) -> Result<(), OracleError> {
    match f {
        LFormula::Atom(p, args) => {
            if args.is_empty() {
                out.insert(p.clone());
                Ok(())
            } else {
                Err(OracleError::NonPropositional(format!(
                    "predicate with arguments: {}",
                    render(f)
                )))
            }
        }
        LFormula::Not(g) => collect_prop_atoms(g, out),
        LFormula::And(a, b) | LFormula::Or(a, b) | LFormula::Implies(a, b) => {
            collect_prop_atoms(a, out)?;
            collect_prop_atoms(b, out)
        }
        LFormula::Forall(..) | LFormula::Exists(..) => Err(OracleError::NonPropositional(
            format!("quantifier: {}", render(f)),
        )),
    }
}

fn eval_prop(f: &LFormula, valuation: &BTreeMap<&str, bool>) -> bool {
    match f {
        LFormula::Atom(p, _) => valuation.get(p.as_str()).copied().unwrap_or(false),
        LFormula::Not(g) => !eval_prop(g, valuation),
        LFormula::And(a, b) => eval_prop(a, valuation) && eval_prop(b, valuation),
        LFormula::Or(a, b) => eval_prop(a, valuation) || eval_prop(b, valuation),
        LFormula::Implies(a, b) => !eval_prop(a, valuation) || eval_prop(b, valuation),
        LFormula::Forall(..) | LFormula::Exists(..) => {
            unreachable!("quantifiers are rejected before evaluation")
        }
    }
}

/// An [`EntailmentOracle`] backed by [`entail_truth_table`] instead of
/// proof search, for cross-checking the projection function on
/// propositional inputs.  Non-propositional questions come back `Unknown`.
#[derive(Debug, Clone, Copy, Default)]
pub struct TruthTableOracle;

impl EntailmentOracle for TruthTableOracle {
    fn entails(&mut self, context: &Context, goal: &LFormula) -> EntailmentOutcome {
        let verdict = match entail_truth_table(context, goal) {
            Ok(true) => EntailmentVerdict::Entailed,
            Ok(false) => EntailmentVerdict::NotProved,
            Err(_) => EntailmentVerdict::Unknown,
        };
        EntailmentOutcome {
            verdict,
            stats: ProofStats::default(),
            proof: None,
        }
    }
}

/// Evaluates a context-language formula against a model context `Δ`:
/// `in(Γ, ψ)` holds exactly when `ψ` holds against `Δ ∪ Γ`, and a
/// subformula free of `in` and `true` holds exactly when `Δ` entails it.
///
/// Supported shapes are the ones the translation emits: conjunctions and
/// disjunctions of obligations, `in` operators, `true`, and arbitrary
/// propositional material inside pure subformulas.  Negation or
/// implication *over* an `in` operator, quantifiers over impure bodies,
/// and non-propositional atoms are errors.
pub fn eval_oracle(delta: &Context, f: &ConFormula) -> Result<bool, OracleError> {
    // A pure subformula is judged as a whole; recursing into (say) a pure
    // disjunction would wrongly split Δ ⊨ a | b into Δ ⊨ a or Δ ⊨ b.
    if let Some(base) = f.to_l() {
        return entail_truth_table(delta, &base);
    }
    match f {
        ConFormula::Top => Ok(true),
        ConFormula::In(ctx, body) => eval_oracle(&delta.union(ctx), body),
        ConFormula::And(a, b) => Ok(eval_oracle(delta, a)? && eval_oracle(delta, b)?),
        // An impure disjunct is a fact about Δ, not about the valuation,
        // so disjunction does distribute here.
        ConFormula::Or(a, b) => Ok(eval_oracle(delta, a)? || eval_oracle(delta, b)?),
        ConFormula::Not(_) => Err(OracleError::UnsupportedShape(format!(
            "negation over an in-formula: {}",
            render(f)
        ))),
        ConFormula::Implies(..) => Err(OracleError::UnsupportedShape(format!(
            "implication over an in-formula: {}",
            render(f)
        ))),
        ConFormula::Forall(..) | ConFormula::Exists(..) => Err(OracleError::NonPropositional(
            format!("quantifier: {}", render(f)),
        )),
        ConFormula::Atom(..) => unreachable!("atoms convert to the base language"),
    }
}

/// Generates a discourse with `n` context sentences followed by `k`
/// triggers, deterministically from `seed`.
///
/// The result is the right-nested conjunction
/// `c1 & (c2 & (… & (cn & (t1 & (t2 & … tk)))))` where each trigger
/// `tj = πj/aj` presupposes a random nonempty conjunction `πj` of the
/// context atoms `c1 … cn`.  Every `πj` is entailed by the time it is
/// reached, so nothing projects; the baseline nevertheless re-decomposes
/// the `n` context sentences for every one of the `k` triggers, while the
/// translation decomposes them once.
pub fn generate_family(n: usize, k: usize, seed: u64) -> PreFormula {
    assert!(n >= 1, "need at least one context sentence");
    assert!(k >= 1, "need at least one trigger");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut triggers = Vec::with_capacity(k);
    for j in 1..=k {
        let pi = loop {
            let mut conjunction: Option<LFormula> = None;
            for i in 1..=n {
                if rng.next_u32() & 1 == 1 {
                    let atom = LFormula::atom(format!("c{i}"));
                    conjunction = Some(match conjunction {
                        None => atom,
                        Some(acc) => LFormula::and(acc, atom),
                    });
                }
            }
            // An empty subset would make the trigger vacuous; redraw.
            if let Some(pi) = conjunction {
                break pi;
            }
        };
        triggers.push(PreFormula::presup(pi, PreFormula::atom(format!("a{j}"))));
    }
    let mut formula = triggers.pop().expect("k >= 1");
    while let Some(t) = triggers.pop() {
        formula = PreFormula::and(t, formula);
    }
    for i in (1..=n).rev() {
        formula = PreFormula::and(PreFormula::atom(format!("c{i}")), formula);
    }
    formula
}

/// Runs the recursive route: one tableau per trigger.
pub fn run_baseline(f: &PreFormula, context: &Context, limits: &ProofLimits) -> PresuppositionSet {
    pres(f, context, limits)
}

/// The translation route's outcome.
#[derive(Debug, Clone)]
pub struct ContextualRun {
    /// The simplified translation that was (or would be) proved.
    pub translation: ConFormula,
    /// The proof search outcome; `None` when the translation is `true`
    /// and no search was needed.
    pub result: Option<ProofResult>,
    /// Whether no presupposition projects: `Some(true)` on a closed
    /// tableau (or a vacuous translation), `Some(false)` on a saturated
    /// open one, `None` when resources ran out.
    pub none_project: Option<bool>,
}

impl ContextualRun {
    pub fn stats(&self) -> ProofStats {
        self.result
            .as_ref()
            .map(|r| r.stats.clone())
            .unwrap_or_default()
    }

    pub fn verdict_str(&self) -> &'static str {
        match &self.result {
            None => "vacuous",
            Some(r) => r.verdict.as_str(),
        }
    }
}

/// Runs the translation route: one tableau for the whole discourse.
pub fn run_contextual(f: &PreFormula, context: &Context, limits: &ProofLimits) -> ContextualRun {
    let translation = simplify_top(&translate_tau(f, context));
    if translation == ConFormula::Top {
        return ContextualRun {
            translation,
            result: None,
            none_project: Some(true),
        };
    }
    let result = prove(&translation, limits);
    let none_project = match result.verdict {
        ProofVerdict::Closed => Some(true),
        ProofVerdict::Open => Some(false),
        ProofVerdict::ResourceOut => None,
    };
    ContextualRun {
        translation,
        result: Some(result),
        none_project,
    }
}

/// Both routes on one input, with the redundancy ratio and the agreement
/// verdict.
#[derive(Debug, Clone)]
pub struct BenchReport {
    pub formula: PreFormula,
    pub baseline: PresuppositionSet,
    pub contextual: ContextualRun,
    /// `Some(agree)` when both routes reached definite verdicts, `None`
    /// when either was indefinite.
    pub agreement: Option<bool>,
    /// Baseline context-member decompositions per contextual one; `None`
    /// when the contextual route did none (nothing to normalize by).
    pub ratio: Option<f64>,
}

impl BenchReport {
    /// Aligned plain-text rendering (the CLI's non-JSON output).
    pub fn to_text(&self) -> String {
        let mut lines = Vec::new();
        lines.push(format!("formula:            {}", render(&self.formula)));
        lines.push(format!(
            "translation:        {}",
            render(&self.contextual.translation)
        ));
        let projected = self.baseline.projected();
        let projected_text = if projected.is_empty() {
            "(none)".to_string()
        } else {
            projected
                .iter()
                .map(|m| render(*m))
                .collect::<Vec<_>>()
                .join(", ")
        };
        let unknown = self
            .baseline
            .checks
            .iter()
            .filter(|c| c.verdict == EntailmentVerdict::Unknown)
            .count();
        lines.push(format!("baseline projected: {projected_text}"));
        lines.push(format!(
            "baseline checks:    {} ({} unknown)",
            self.baseline.checks.len(),
            unknown
        ));
        lines.push(format!(
            "contextual verdict: {}",
            self.contextual.verdict_str()
        ));
        let agreement = match self.agreement {
            Some(true) => "yes",
            Some(false) => "no",
            None => "indefinite",
        };
        lines.push(format!("agreement:          {agreement}"));
        let ratio = match self.ratio {
            Some(r) => format!("{r:.2}"),
            None => "n/a".to_string(),
        };
        lines.push(format!("expansion ratio:    {ratio}"));
        lines.push(String::new());
        let contextual_stats = self.contextual.stats();
        lines.push(format!(
            "{:<28}{:>12}{:>12}",
            "metric", "baseline", "contextual"
        ));
        let rows: [(&str, u64, u64); 6] = [
            (
                "formula expansions",
                self.baseline.stats.formula_expansions,
                contextual_stats.formula_expansions,
            ),
            (
                "nodes created",
                self.baseline.stats.nodes_created,
                contextual_stats.nodes_created,
            ),
            (
                "branches opened",
                self.baseline.stats.branches_opened,
                contextual_stats.branches_opened,
            ),
            (
                "branches closed",
                self.baseline.stats.branches_closed,
                contextual_stats.branches_closed,
            ),
            (
                "unification attempts",
                self.baseline.stats.unification_attempts,
                contextual_stats.unification_attempts,
            ),
            (
                "proof searches",
                self.baseline.stats.proofs,
                contextual_stats.proofs,
            ),
        ];
        for (name, b, c) in rows {
            lines.push(format!("{name:<28}{b:>12}{c:>12}"));
        }
        for (rule, b) in self.baseline.stats.rules.iter() {
            let c = contextual_stats.rules.get(rule);
            lines.push(format!("{:<28}{:>12}{:>12}", format!("rule {rule}"), b, c));
        }
        lines.join("\n")
    }
}

impl Serialize for BenchReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Contextual<'a> {
            verdict: &'static str,
            none_project: Option<bool>,
            stats: ProofStats,
            #[serde(skip_serializing_if = "Option::is_none")]
            rounds: Option<u32>,
            translation: &'a str,
        }
        let translation = render(&self.contextual.translation);
        let mut s = serializer.serialize_struct("BenchReport", 5)?;
        s.serialize_field("formula", &render(&self.formula))?;
        s.serialize_field("baseline", &self.baseline)?;
        s.serialize_field(
            "contextual",
            &Contextual {
                verdict: self.contextual.verdict_str(),
                none_project: self.contextual.none_project,
                stats: self.contextual.stats(),
                rounds: self.contextual.result.as_ref().map(|r| r.rounds),
                translation: &translation,
            },
        )?;
        s.serialize_field("agreement", &self.agreement)?;
        s.serialize_field("ratio", &self.ratio)?;
        s.end()
    }
}

/// The two routes reached contradictory definite verdicts — a prover or
/// translation bug, never a measurement.
#[derive(Debug, Clone)]
pub struct Disagreement {
    pub report: BenchReport,
}

impl fmt::Display for Disagreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let projected = self.report.baseline.projected();
        let baseline = if projected.is_empty() {
            "projects nothing".to_string()
        } else {
            format!(
                "projects {}",
                projected
                    .iter()
                    .map(|m| render(*m))
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        };
        write!(
            f,
            "routes disagree on {}: baseline {}, but the translation tableau is {}",
            render(&self.report.formula),
            baseline,
            self.report.contextual.verdict_str()
        )
    }
}

impl std::error::Error for Disagreement {}

/// Runs both routes and compares them.
///
/// Agreement means: the baseline projects nothing if and only if the
/// translation is provable.  `agreement` is `None` when either route was
/// indefinite (an `unknown` check or an out-of-resources tableau); a
/// definite mismatch is returned as [`Disagreement`].
pub fn compare(
    f: &PreFormula,
    context: &Context,
    limits: &ProofLimits,
) -> Result<BenchReport, Disagreement> {
    let baseline = run_baseline(f, context, limits);
    let contextual = run_contextual(f, context, limits);
    let baseline_none = if baseline.is_definite() {
        Some(baseline.projected().is_empty())
    } else {
        None
    };
    let agreement = match (baseline_none, contextual.none_project) {
        (Some(b), Some(c)) => Some(b == c),
        _ => None,
    };
    let contextual_expansions = contextual.stats().formula_expansions;
    let ratio = if contextual_expansions == 0 {
        None
    } else {
        Some(baseline.stats.formula_expansions as f64 / contextual_expansions as f64)
    };
    let report = BenchReport {
        formula: f.clone(),
        baseline,
        contextual,
        agreement,
        ratio,
    };
    if agreement == Some(false) {
        Err(Disagreement { report })
    } else {
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projection::{pres_with, translate};
    use crate::syntax::{parse_con, parse_l, parse_pre};

    fn l(s: &str) -> LFormula {
        parse_l(s).unwrap()
    }

    fn pre(s: &str) -> PreFormula {
        parse_pre(s).unwrap()
    }

    fn con(s: &str) -> ConFormula {
        parse_con(s).unwrap()
    }

    fn ctx(members: &[&str]) -> Context {
        members.iter().map(|s| l(s)).collect()
    }

    #[test]
    fn truth_table_entailment() {
        assert_eq!(entail_truth_table(&ctx(&["p"]), &l("p")), Ok(true));
        assert_eq!(entail_truth_table(&Context::new(), &l("p")), Ok(false));
        assert_eq!(
            entail_truth_table(&ctx(&["p", "p -> q"]), &l("q")),
            Ok(true)
        );
        assert_eq!(entail_truth_table(&ctx(&["p | q"]), &l("p")), Ok(false));
        assert_eq!(
            entail_truth_table(&Context::new(), &l("p | ~p")),
            Ok(true)
        );
        assert_eq!(entail_truth_table(&ctx(&["p & q"]), &l("q & p")), Ok(true));
    }

    #[test]
    fn truth_table_rejects_non_propositional_inputs() {
        assert!(matches!(
            entail_truth_table(&Context::new(), &l("P(a)")),
            Err(OracleError::NonPropositional(_))
        ));
        assert!(matches!(
            entail_truth_table(&Context::new(), &l("forall x. P(x)")),
            Err(OracleError::NonPropositional(_))
        ));
    }

    #[test]
    fn oracle_evaluates_contexts_cumulatively() {
        assert_eq!(eval_oracle(&Context::new(), &con("true")), Ok(true));
        assert_eq!(eval_oracle(&Context::new(), &con("in({p}, p)")), Ok(true));
        assert_eq!(eval_oracle(&Context::new(), &con("in({q}, p)")), Ok(false));
        // Members accumulate through nesting.
        assert_eq!(
            eval_oracle(&Context::new(), &con("in({p}, in({p -> q}, q))")),
            Ok(true)
        );
        assert_eq!(eval_oracle(&ctx(&["p"]), &con("in({p -> q}, q)")), Ok(true));
    }

    #[test]
    fn oracle_judges_pure_subformulas_as_a_whole() {
        // Splitting the disjunction would lose this entailment.
        assert_eq!(eval_oracle(&ctx(&["p | q"]), &con("p | q")), Ok(true));
        assert_eq!(eval_oracle(&ctx(&["p | q"]), &con("p")), Ok(false));
    }

    #[test]
    fn oracle_rejects_unsupported_shapes() {
        assert!(matches!(
            eval_oracle(&Context::new(), &con("~in({p}, p)")),
            Err(OracleError::UnsupportedShape(_))
        ));
        assert!(matches!(
            eval_oracle(&Context::new(), &con("in({p}, p) -> true")),
            Err(OracleError::UnsupportedShape(_))
        ));
        assert!(matches!(
            eval_oracle(&Context::new(), &con("forall x. in({P(x)}, P(x))")),
            Err(OracleError::NonPropositional(_))
        ));
    }

    #[test]
    fn oracle_accepts_the_discourse_translation() {
        let t = translate(&pre("p & ((p/q -> (p & q)/r) & p/s)"));
        assert_eq!(eval_oracle(&Context::new(), &t), Ok(true));
        // An unsupported trigger shows up as a false obligation.
        assert_eq!(eval_oracle(&Context::new(), &translate(&pre("m/h"))), Ok(false));
    }

    #[test]
    fn family_generation_is_deterministic_and_well_formed() {
        let a = generate_family(3, 2, 7);
        let b = generate_family(3, 2, 7);
        assert_eq!(a, b);
        assert_ne!(a, generate_family(3, 2, 8));
        let text = render(&a);
        assert!(text.starts_with("c1 & (c2 & (c3 & ("), "got: {text}");
        assert!(text.contains("/a1"));
        assert!(text.contains("/a2"));
    }

    #[test]
    fn family_triggers_are_all_satisfied() {
        let family = generate_family(4, 3, 11);
        let set = run_baseline(&family, &Context::new(), &ProofLimits::default());
        assert!(set.projected().is_empty());
        assert_eq!(set.checks.len(), 3);
        // Check j sees the n context sentences plus j-1 earlier bodies:
        // 4 + 5 + 6 member decompositions across the three checks.
        assert_eq!(set.stats.formula_expansions, 15);
    }

    #[test]
    fn contextual_route_shares_the_context() {
        let family = generate_family(4, 3, 11);
        let run = run_contextual(&family, &Context::new(), &ProofLimits::default());
        assert_eq!(run.none_project, Some(true));
        // n members once, then one new body per later trigger: 4 + 2.
        assert_eq!(run.stats().formula_expansions, 6);
    }

    #[test]
    fn compare_on_the_discourse() {
        let report = compare(
            &pre("p & ((p/q -> (p & q)/r) & p/s)"),
            &Context::new(),
            &ProofLimits::default(),
        )
        .expect("routes agree");
        assert_eq!(report.agreement, Some(true));
        assert_eq!(report.baseline.stats.formula_expansions, 5);
        assert_eq!(report.contextual.stats().formula_expansions, 3);
        let ratio = report.ratio.unwrap();
        assert!((ratio - 5.0 / 3.0).abs() < 1e-9, "ratio {ratio}");
    }

    #[test]
    fn compare_when_a_presupposition_projects() {
        let report = compare(&pre("p/q"), &Context::new(), &ProofLimits::default())
            .expect("routes agree");
        assert_eq!(report.agreement, Some(true));
        assert_eq!(report.baseline.projected(), vec![&l("p")]);
        assert_eq!(report.contextual.none_project, Some(false));
        assert_eq!(report.contextual.verdict_str(), "open");
    }

    #[test]
    fn compare_on_a_trigger_free_formula() {
        let report = compare(&pre("P(a)"), &Context::new(), &ProofLimits::default())
            .expect("routes agree");
        assert_eq!(report.contextual.translation, ConFormula::Top);
        assert_eq!(report.contextual.verdict_str(), "vacuous");
        assert_eq!(report.agreement, Some(true));
        assert_eq!(report.ratio, None);
        assert_eq!(report.baseline.checks.len(), 0);
    }

    #[test]
    fn report_serializes_with_stable_field_names() {
        let report = compare(&pre("m -> m/h"), &Context::new(), &ProofLimits::default())
            .expect("routes agree");
        let v = serde_json::to_value(&report).unwrap();
        assert_eq!(v["formula"], "m -> m/h");
        assert_eq!(v["contextual"]["translation"], "in({m}, m)");
        assert_eq!(v["contextual"]["verdict"], "closed");
        assert_eq!(v["contextual"]["none_project"], true);
        assert_eq!(v["agreement"], true);
        assert!(v["ratio"].is_number());
        assert!(v["baseline"]["stats"]["formula_expansions"].is_u64());
        assert_eq!(v["baseline"]["projected"], serde_json::json!([]));
    }

    #[test]
    fn report_text_lists_both_routes() {
        let report = compare(
            &pre("p & ((p/q -> (p & q)/r) & p/s)"),
            &Context::new(),
            &ProofLimits::default(),
        )
        .unwrap();
        let text = report.to_text();
        assert!(text.contains("baseline projected: (none)"));
        assert!(text.contains("contextual verdict: closed"));
        assert!(text.contains("agreement:          yes"));
        assert!(text.contains("expansion ratio:    1.67"));
        assert!(text.contains("formula expansions"));
        assert!(text.contains("rule in"));
    }

    #[test]
    fn disagreement_is_reportable() {
        // Fabricate a mismatched report to pin the error rendering; the
        // real pipeline returns Err for exactly this shape.
        let baseline = run_baseline(&pre("m/h"), &Context::new(), &ProofLimits::default());
        let contextual = run_contextual(&pre("m -> m/h"), &Context::new(), &ProofLimits::default());
        let disagreement = Disagreement {
            report: BenchReport {
                formula: pre("m/h"),
                baseline,
                contextual,
                agreement: Some(false),
                ratio: None,
            },
        };
        let text = disagreement.to_string();
        assert!(text.contains("routes disagree"));
        assert!(text.contains("projects m"));
        assert!(text.contains("closed"));
    }

    #[test]
    fn truth_table_oracle_matches_the_prover_here() {
        let formula = pre("p & ((p/q -> (p & q)/r) & p/s)");
        let by_tables = pres_with(&formula, &Context::new(), &mut TruthTableOracle);
        let by_proofs = pres(&formula, &Context::new(), &ProofLimits::default());
        assert!(by_tables.projected().is_empty());
        assert_eq!(
            by_tables
                .checks
                .iter()
                .map(|c| c.verdict)
                .collect::<Vec<_>>(),
            by_proofs
                .checks
                .iter()
                .map(|c| c.verdict)
                .collect::<Vec<_>>()
        );
    }
}
