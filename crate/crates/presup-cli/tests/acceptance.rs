//! Acceptance gate for the command-line tool: criteria 1 and 2, plus
//! regression coverage of exit codes, diagnostics, and the JSON surface.
//!
//! Each criterion prints exactly one `ACCEPTANCE <n>: PASS`/`FAIL` line
//! (criteria 3 through 8 live in the library crate's acceptance target).

use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};
use std::time::{Duration, Instant};

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR")))
}

fn fixture(name: &str) -> String {
    let path = fixture_path(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("reading {}: {e}", path.display()))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_presup"))
        .args(args)
        .output()
        .expect("the binary launches")
}

fn run_with_stdin(args: &[&str], input: &str) -> Output {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_presup"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("the binary launches");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().expect("the binary exits")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

fn assert_success(output: &Output, what: &str) {
    assert!(
        output.status.success(),
        "{what} failed with {:?}:\n{}",
        output.status.code(),
        stderr_of(output)
    );
}

/// Runs a criterion body and prints the one-line verdict the gate requires.
fn report(criterion: &str, body: impl FnOnce()) {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(()) => println!("ACCEPTANCE {criterion}: PASS"),
        Err(cause) => {
            println!("ACCEPTANCE {criterion}: FAIL");
            resume_unwind(cause);
        }
    }
}

// --- criterion 1 -----------------------------------------------------------

#[test]
fn criterion_1_project_the_three_sentence_discourse() {
    report("1 (project: three checks, nothing projects, byte-equal output)", || {
        let start = Instant::now();
        let path = fixture_path("discourse2.pre");
        let output = run(&["project", path.to_str().unwrap()]);
        assert_success(&output, "project");
        let text = stdout_of(&output);
        assert_eq!(
            text,
            fixture("golden/discourse2.project.txt"),
            "output must byte-equal the golden transcript"
        );
        assert!(text.contains("projected: (none)"), "no presupposition survives");
        assert!(text.contains("checks: 3"), "exactly one entailment check per trigger");
        assert!(
            start.elapsed() < Duration::from_secs(1),
            "projection must finish within one second"
        );
    });
}

// --- criterion 2 -----------------------------------------------------------

#[test]
fn criterion_2_translate_into_the_context_language() {
    report("2 (translate emits the nested-context form of the discourse)", || {
        let path = fixture_path("discourse2.pre");
        let output = run(&["translate", path.to_str().unwrap()]);
        assert_success(&output, "translate");
        let text = stdout_of(&output);
        assert_eq!(
            text,
            fixture("golden/discourse2.translate.txt"),
            "output must byte-equal the golden transcript"
        );
        assert_eq!(
            text.trim_end(),
            fixture("eq3.con").trim_end(),
            "the translation is the proof goal the tableau criteria consume"
        );
    });
}

// --- command behavior ------------------------------------------------------

#[test]
fn prove_matches_the_golden_transcript() {
    let path = fixture_path("eq3.con");
    let output = run(&["prove", path.to_str().unwrap()]);
    assert_success(&output, "prove");
    assert_eq!(stdout_of(&output), fixture("golden/eq3.prove.txt"));
}

#[test]
fn prove_leaves_an_invalid_goal_open_with_success_status() {
    let output = run(&["prove", "-e", "in({p}, q)"]);
    assert_success(&output, "prove of an open goal");
    assert!(stdout_of(&output).contains("verdict: open"));
}

#[test]
fn parse_errors_use_caret_diagnostics_and_exit_1() {
    let output = run(&["parse", "-e", "p & & q"]);
    assert_eq!(output.status.code(), Some(1));
    let err = stderr_of(&output);
    assert!(err.contains("error: parse error"), "stderr was: {err}");
    assert!(err.contains("line 1, column 5"), "stderr was: {err}");
    assert!(err.contains('^'), "stderr was: {err}");
}

#[test]
fn exhausted_limits_exit_2_when_an_answer_is_required() {
    let path = fixture_path("eq3.con");
    let output = run(&["prove", path.to_str().unwrap(), "--nodes", "2", "--depth", "1"]);
    assert_eq!(output.status.code(), Some(2), "stderr: {}", stderr_of(&output));
}

#[test]
fn dash_reads_standard_input() {
    let output = run_with_stdin(&["project", "-"], "m/h\n");
    assert_success(&output, "project from stdin");
    let text = stdout_of(&output);
    assert!(text.contains("projected: m"), "stdout was: {text}");
}

#[test]
fn project_cross_check_reports_agreement() {
    let path = fixture_path("discourse2.pre");
    let output = run(&["project", path.to_str().unwrap(), "--check"]);
    assert_success(&output, "project --check");
    let text = stdout_of(&output);
    assert!(text.contains("cross-check: translation closed; agrees"), "stdout was: {text}");
}

#[test]
fn bench_reports_the_redundancy_ratio_for_the_generated_family() {
    let output = run(&["bench", "--family", "20,5,42"]);
    assert_success(&output, "bench --family");
    let text = stdout_of(&output);
    let field = |name: &str| {
        text.lines()
            .find_map(|line| line.strip_prefix(name))
            .unwrap_or_else(|| panic!("no `{name}` line in: {text}"))
            .trim()
            .to_string()
    };
    assert_eq!(field("expansion ratio:"), "4.58");
    assert_eq!(field("agreement:"), "yes");
}

#[test]
fn translate_warns_about_context_members_mentioning_bound_variables() {
    let output = run(&["translate", "-e", "forall x. (P(x)/Q(x) -> S(x)/T(x))"]);
    assert_success(&output, "translate with scope warning");
    let err = stderr_of(&output);
    assert!(err.contains("warning:"), "stderr was: {err}");
    assert!(err.contains("bound variable x"), "stderr was: {err}");
}

#[test]
fn nested_context_fixture_parses_in_the_context_language() {
    let path = fixture_path("formula4.con");
    let output = run(&["parse", path.to_str().unwrap(), "--lang", "con"]);
    assert_success(&output, "parse --lang con");
    assert_eq!(stdout_of(&output).trim_end(), fixture("formula4.con").trim_end());
}

// --- JSON surface ----------------------------------------------------------

fn validator() -> jsonschema::Validator {
    let schema: serde_json::Value =
        serde_json::from_str(&fixture("schema.json")).expect("schema is valid JSON");
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn check_json(validator: &jsonschema::Validator, args: &[&str]) -> serde_json::Value {
    let output = run(args);
    assert_success(&output, &format!("{args:?}"));
    let doc: serde_json::Value =
        serde_json::from_str(&stdout_of(&output)).unwrap_or_else(|e| {
            panic!("{args:?} did not print JSON: {e}\n{}", stdout_of(&output))
        });
    if let Err(error) = validator.validate(&doc) {
        panic!("{args:?} violates the schema: {error}\n{doc:#}");
    }
    doc
}

#[test]
fn every_json_output_validates_against_the_schema() {
    let validator = validator();
    let pre_fixtures =
        ["sentence1a.pre", "sentence1b.pre", "discourse2.pre", "family_20_5_42.pre"];
    for name in pre_fixtures {
        let path = fixture_path(name);
        let path = path.to_str().unwrap();
        check_json(&validator, &["parse", path, "--json"]);
        check_json(&validator, &["translate", path, "--json"]);
        check_json(&validator, &["project", path, "--json"]);
        check_json(&validator, &["project", path, "--json", "--check"]);
        check_json(&validator, &["bench", path, "--json"]);
    }
    for name in ["eq3.con", "formula4.con"] {
        let path = fixture_path(name);
        let path = path.to_str().unwrap();
        check_json(&validator, &["parse", path, "--lang", "con", "--json"]);
        check_json(&validator, &["prove", path, "--json"]);
        check_json(&validator, &["prove", path, "--json", "--trace"]);
    }
    check_json(&validator, &["parse", "-e", "forall x. P(x) -> Q(x)", "--lang", "l", "--json"]);
    check_json(&validator, &["bench", "--family", "6,3,7", "--json"]);
    check_json(&validator, &["prove", "-e", "in({p}, q)", "--json"]);

    let doc = check_json(
        &validator,
        &["project", fixture_path("discourse2.pre").to_str().unwrap(), "--json"],
    );
    assert_eq!(doc["command"], "project");
    assert_eq!(doc["projected"], serde_json::json!([]));
    assert_eq!(doc["checks"].as_array().map(Vec::len), Some(3));
}
