//! `presup` — batch commands over discourses and context formulas:
//! parsing, translation, tableau proving, presupposition projection, and
//! the baseline-vs-contextual benchmark.
//!
//! Exit status: 0 on success (an open tableau is a successful
//! determination), 1 on parse errors, 2 when proof search ran out of
//! resources where a definite answer was required, 3 when the two
//! benchmark routes reach contradictory definite verdicts.

use std::fmt::Write as _;
use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use presup::bench::{compare, generate_family, run_contextual};
use presup::projection::{pres, scope_warnings, translate};
use presup::tableau::{prove, ProofLimits, ProofVerdict};
use presup::{parse_con, parse_l, parse_pre, render, Context, ParseError, PreFormula};

#[derive(Parser)]
#[command(
    name = "presup",
    version,
    about = "Presupposition projection: per-trigger entailment checks and a single labeled-tableau proof over nested contexts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and echo its normalized rendering.
    Parse {
        #[command(flatten)]
        input: InputArgs,
        /// Grammar to parse with.
        #[arg(long, value_enum, default_value_t = Lang::Pre)]
        lang: Lang,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Translate a discourse into the context language (and simplify).
    Translate {
        #[command(flatten)]
        input: InputArgs,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Prove a context-language formula with the labeled tableau.
    Prove {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        limits: LimitArgs,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
        /// Include the proof trace in the output.
        #[arg(long)]
        trace: bool,
    },
    /// Compute the projected presupposition set of a discourse.
    Project {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        limits: LimitArgs,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
        /// Cross-check emptiness against the contextual route.
        #[arg(long)]
        check: bool,
    },
    /// Run both projection routes and report the redundancy ratio.
    Bench {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        limits: LimitArgs,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
        /// Generate the input instead of reading one: `n,k,seed` gives a
        /// discourse with n context sentences and k satisfied triggers.
        #[arg(long, value_name = "N,K,SEED", conflicts_with_all = ["expr", "file"])]
        family: Option<String>,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Inline formula text.
    #[arg(short = 'e', long = "expr", value_name = "FORMULA", conflicts_with = "file")]
    expr: Option<String>,
    /// Input file; `-` reads standard input.
    #[arg(value_name = "FILE")]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct LimitArgs {
    /// Variable instantiations per universal formula per branch.
    #[arg(long, value_name = "N")]
    gamma: Option<u32>,
    /// Tableau node budget per search round.
    #[arg(long, value_name = "N")]
    nodes: Option<usize>,
    /// Iterative-deepening round budget.
    #[arg(long, value_name = "N")]
    depth: Option<u32>,
}

impl LimitArgs {
    fn limits(&self) -> ProofLimits {
        let mut limits = ProofLimits::default();
        if let Some(g) = self.gamma {
            limits.gamma_multiplicity = g;
        }
        if let Some(n) = self.nodes {
            limits.node_limit = n;
        }
        if let Some(d) = self.depth {
            limits.depth_limit = d;
        }
        limits
    }
}

#[derive(ValueEnum, Clone, Copy)]
enum Lang {
    /// Discourse language with presupposition markers.
    Pre,
    /// Context language with `in` and `true`.
    Con,
    /// Plain first-order formulas.
    L,
}

impl Lang {
    fn as_str(self) -> &'static str {
        match self {
            Lang::Pre => "pre",
            Lang::Con => "con",
            Lang::L => "l",
        }
    }
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn parse(message: String) -> Failure {
        Failure { code: 1, message }
    }

    fn indefinite(message: String) -> Failure {
        Failure { code: 2, message }
    }

    fn disagreement(message: String) -> Failure {
        Failure { code: 3, message }
    }
}

fn main() -> ExitCode {
    reset_sigpipe();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("{}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

/// Restores the default SIGPIPE disposition so a downstream `head` or
/// `less` terminates the process quietly instead of panicking a write.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Parse { input, lang, json } => cmd_parse(&input, lang, json),
        Command::Translate { input, json } => cmd_translate(&input, json),
        Command::Prove {
            input,
            limits,
            json,
            trace,
        } => cmd_prove(&input, &limits.limits(), json, trace),
        Command::Project {
            input,
            limits,
            json,
            check,
        } => cmd_project(&input, &limits.limits(), json, check),
        Command::Bench {
            input,
            limits,
            json,
            family,
        } => cmd_bench(&input, &limits.limits(), json, family.as_deref()),
    }
}

fn read_input(input: &InputArgs) -> Result<String, Failure> {
    match (&input.expr, &input.file) {
        (Some(text), None) => Ok(text.clone()),
        (None, Some(path)) if path.as_os_str() == "-" => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Failure::parse(format!("error: cannot read standard input: {e}")))?;
            Ok(text)
        }
        (None, Some(path)) => fs::read_to_string(path)
            .map_err(|e| Failure::parse(format!("error: cannot read {}: {e}", path.display()))),
        (None, None) => Err(Failure::parse(
            "error: no input; pass -e <formula> or a file path (- for standard input)".into(),
        )),
        (Some(_), Some(_)) => unreachable!("clap rejects -e together with a file"),
    }
}

/// Renders a parse error with the offending line and a caret under the span.
fn explain_parse_error(source: &str, err: &ParseError) -> String {
    let start = err.span.start.min(source.len());
    let line_start = source[..start].rfind('\n').map(|i| i + 1).unwrap_or(0);
    let line_end = source[line_start..]
        .find('\n')
        .map(|i| line_start + i)
        .unwrap_or(source.len());
    let line = &source[line_start..line_end];
    let line_no = source[..start].matches('\n').count() + 1;
    let column = start - line_start;
    let width = err.span.end.saturating_sub(start).clamp(1, line.len().saturating_sub(column).max(1));
    let mut out = String::new();
    let _ = writeln!(out, "error: {err}");
    let _ = writeln!(out, " --> line {}, column {}", line_no, column + 1);
    let _ = writeln!(out, "  | {line}");
    let _ = write!(out, "  | {}{}", " ".repeat(column), "^".repeat(width));
    if !err.expected.is_empty() {
        let _ = write!(out, "\nexpected: {}", err.expected.join(", "));
    }
    out
}

fn parse_failure(source: &str, err: &ParseError) -> Failure {
    Failure::parse(explain_parse_error(source, err))
}

fn read_pre(input: &InputArgs) -> Result<PreFormula, Failure> {
    let text = read_input(input)?;
    parse_pre(&text).map_err(|e| parse_failure(&text, &e))
}

fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("JSON renders"));
}

fn cmd_parse(input: &InputArgs, lang: Lang, json: bool) -> Result<(), Failure> {
    let text = read_input(input)?;
    let rendered = match lang {
        Lang::Pre => parse_pre(&text).map(|f| render(&f)),
        Lang::Con => parse_con(&text).map(|f| render(&f)),
        Lang::L => parse_l(&text).map(|f| render(&f)),
    }
    .map_err(|e| parse_failure(&text, &e))?;
    if json {
        print_json(&serde_json::json!({
            "command": "parse",
            "language": lang.as_str(),
            "formula": rendered,
        }));
    } else {
        println!("{rendered}");
    }
    Ok(())
}

fn cmd_translate(input: &InputArgs, json: bool) -> Result<(), Failure> {
    let formula = read_pre(input)?;
    let translation = translate(&formula);
    let warnings = scope_warnings(&translation);
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    if json {
        print_json(&serde_json::json!({
            "command": "translate",
            "input": render(&formula),
            "translation": render(&translation),
            "warnings": warnings,
        }));
    } else {
        println!("{}", render(&translation));
    }
    Ok(())
}

fn cmd_prove(input: &InputArgs, limits: &ProofLimits, json: bool, trace: bool) -> Result<(), Failure> {
    let text = read_input(input)?;
    let formula = parse_con(&text).map_err(|e| parse_failure(&text, &e))?;
    let result = prove(&formula, limits);
    if json {
        let mut value = serde_json::json!({
            "command": "prove",
            "formula": render(&formula),
            "verdict": result.verdict.as_str(),
            "rounds": result.rounds,
            "stats": result.stats,
        });
        if trace {
            if let Some(proof) = &result.proof {
                value["trace"] = serde_json::Value::String(proof.to_trace());
            }
        }
        print_json(&value);
    } else {
        println!("verdict: {}", result.verdict.as_str());
        println!("rounds: {}", result.rounds);
        println!();
        println!("{}", result.stats);
        if trace {
            if let Some(proof) = &result.proof {
                println!();
                print!("{}", proof.to_trace());
            }
        }
    }
    if result.verdict == ProofVerdict::ResourceOut {
        return Err(Failure::indefinite(format!(
            "proof search hit its limits (gamma {}, nodes {}, depth {}) without a verdict",
            limits.gamma_multiplicity, limits.node_limit, limits.depth_limit
        )));
    }
    Ok(())
}

fn cmd_project(
    input: &InputArgs,
    limits: &ProofLimits,
    json: bool,
    check: bool,
) -> Result<(), Failure> {
    let formula = read_pre(input)?;
    let set = pres(&formula, &Context::new(), limits);
    let cross = if check {
        Some(run_contextual(&formula, &Context::new(), limits))
    } else {
        None
    };
    let agrees = cross.as_ref().map(|c| {
        match (set.is_definite(), c.none_project) {
            (true, Some(none)) => Some(set.projected().is_empty() == none),
            _ => None,
        }
    });
    if json {
        let mut value = serde_json::to_value(&set).expect("set serializes");
        value["command"] = "project".into();
        value["formula"] = render(&formula).into();
        if let (Some(c), Some(agrees)) = (&cross, &agrees) {
            value["cross_check"] = serde_json::json!({
                "verdict": c.verdict_str(),
                "agrees": agrees,
            });
        }
        print_json(&value);
    } else {
        println!("{set}");
        if let (Some(c), Some(agrees)) = (&cross, &agrees) {
            let status = match agrees {
                Some(true) => "agrees".to_string(),
                Some(false) => "DISAGREES".to_string(),
                None => "indefinite".to_string(),
            };
            println!("cross-check: translation {}; {}", c.verdict_str(), status);
        }
    }
    if agrees == Some(Some(false)) {
        return Err(Failure::disagreement(
            "the contextual route contradicts the baseline presupposition set".into(),
        ));
    }
    if !set.is_definite() {
        return Err(Failure::indefinite(
            "some entailment checks ran out of resources; the set above is an over-approximation"
                .into(),
        ));
    }
    if agrees == Some(None) {
        return Err(Failure::indefinite(
            "the cross-check proof ran out of resources".into(),
        ));
    }
    Ok(())
}

fn parse_family_spec(spec: &str) -> Result<PreFormula, Failure> {
    let parts: Vec<&str> = spec.split(',').collect();
    let usage = || {
        Failure::parse(format!(
            "error: --family expects `n,k,seed` (three comma-separated integers), got `{spec}`"
        ))
    };
    if parts.len() != 3 {
        return Err(usage());
    }
    let n: usize = parts[0].trim().parse().map_err(|_| usage())?;
    let k: usize = parts[1].trim().parse().map_err(|_| usage())?;
    let seed: u64 = parts[2].trim().parse().map_err(|_| usage())?;
    if n == 0 || k == 0 {
        return Err(usage());
    }
    Ok(generate_family(n, k, seed))
}

fn cmd_bench(
    input: &InputArgs,
    limits: &ProofLimits,
    json: bool,
    family: Option<&str>,
) -> Result<(), Failure> {
    let formula = match family {
        Some(spec) => parse_family_spec(spec)?,
        None => read_pre(input)?,
    };
    let (report, disagreement) = match compare(&formula, &Context::new(), limits) {
        Ok(report) => (report, None),
        Err(d) => {
            let message = d.to_string();
            (d.report, Some(message))
        }
    };
    if json {
        let mut value = serde_json::to_value(&report).expect("report serializes");
        value["command"] = "bench".into();
        print_json(&value);
    } else {
        println!("{}", report.to_text());
    }
    if let Some(message) = disagreement {
        return Err(Failure::disagreement(message));
    }
    if report.agreement.is_none() {
        return Err(Failure::indefinite(
            "a route was indefinite at these limits; no agreement verdict".into(),
        ));
    }
    Ok(())
}
