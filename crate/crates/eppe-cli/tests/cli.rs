//! End-to-end tests for the `eppe` binary: exit codes, deterministic
//! output, and the documented subcommand behaviours.

use std::io::Write as _;
use std::process::Command;

use eppe_core::formula::PrefixBlock;
use eppe_core::parse::parse_input;
use eppe_core::pipeline::build_ph2;

fn eppe(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_eppe"))
        .args(args)
        .output()
        .expect("binary should run");
    (
        String::from_utf8(out.stdout).expect("stdout should be utf-8"),
        String::from_utf8(out.stderr).expect("stderr should be utf-8"),
        out.status.code().unwrap_or(-1),
    )
}

fn write_fixture(dir: &tempfile::TempDir, name: &str, content: &str) -> String {
    let path = dir.path().join(name);
    let mut f = std::fs::File::create(&path).expect("fixture file");
    writeln!(f, "{content}").expect("fixture write");
    path.to_str().expect("utf-8 path").to_string()
}

#[test]
fn compile_without_passes_roundtrips() {
    let dir = tempfile::tempdir().unwrap();
    let src = "(exists (x) (= (- x 3) 0))";
    let path = write_fixture(&dir, "toy.eppe", src);
    let (stdout, _, code) = eppe(&["compile", &path]);
    assert_eq!(code, 0);
    assert_eq!(stdout.lines().next(), Some(src));
    // the whole output (ledger comments included) re-parses to the same
    // formula
    let (_, reparsed) = parse_input(&stdout).expect("output re-parses");
    let (_, original) = parse_input(src).unwrap();
    assert_eq!(reparsed, original);
}

#[test]
fn compile_exit_codes_follow_the_failure_kind() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_fixture(&dir, "bad.eppe", "(((");
    let (_, stderr, code) = eppe(&["compile", &bad]);
    assert_eq!(code, 2, "parse failure: {stderr}");
    assert!(stderr.contains("syntax error"));

    let nobuq = write_fixture(&dir, "nobuq.eppe", "(exists (x) (= x 0))");
    let (_, stderr, code) = eppe(&["compile", &nobuq, "--eliminate-buq"]);
    assert_eq!(code, 3, "shape failure: {stderr}");
    assert!(stderr.contains("shape mismatch"));

    let (_, stderr, code) = eppe(&[
        "verify",
        "less",
        "--range",
        "a=0..5000000",
        "--range",
        "b=0..5000000",
    ]);
    assert_eq!(code, 4, "budget failure: {stderr}");
    assert!(stderr.contains("budget exceeded"));
}

#[test]
fn compile_collapse_pairs_matches_the_reference_collapse() {
    let art = build_ph2().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = write_fixture(&dir, "e4.eppe", &art.e4.to_string());
    let (stdout, _, code) = eppe(&["compile", &path, "--collapse-pairs"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.lines().next(), Some(art.e6.to_string().as_str()));
}

#[test]
fn compile_full_elimination_emits_one_prefixed_equation() {
    let dir = tempfile::tempdir().unwrap();
    let toy = write_fixture(
        &dir,
        "toy.eppe",
        "(forall (y < 2) (exists (x) (= (- x y) 0)))",
    );

    let (stdout, _, code) = eppe(&["compile", &toy, "--eliminate-buq", "--flatten"]);
    assert_eq!(code, 0);
    let (_, formula) = parse_input(&stdout).expect("flattened output re-parses");
    let stats = formula.stats();
    assert_eq!(stats.equations, 1);
    assert_eq!(stats.prefix, vec![PrefixBlock::Exists(18)]);
    assert!(stdout.contains("; ledger"));

    let (stdout, _, code) = eppe(&["compile", &toy, "--eliminate-buq"]);
    assert_eq!(code, 0);
    let conditions = stdout
        .lines()
        .filter(|l| l.starts_with("condition "))
        .count();
    assert_eq!(conditions, 4, "m + 3 conditions for one inner witness");
}

#[test]
fn pipeline_ph2_reports_the_expected_counts() {
    let (stdout, _, code) = eppe(&["pipeline", "ph2"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("unknowns: 138 (expected 138)"));
    assert!(stdout.contains("conditions: 27 (expected 27)"));
    assert!(stdout.contains("ledger check: all matrix symbols bound; free parameters: k M a b r"));
    assert!(stdout.contains("final (sexpr): (exists"));
    assert!(stdout.contains("final (latex): "));
    assert!(stdout.contains("ledger:\nident\torigin\tdisplay"));
}

#[test]
fn pipeline_goodstein_reconciles_the_ledger() {
    let (stdout, _, code) = eppe(&["pipeline", "goodstein"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("unknowns: 188 (displayed 181)"));
    assert!(stdout.contains("built blocks: 3 17 36 27 19 45 35 (+ 6 universals)"));
    assert!(stdout.contains("displayed blocks: 3 13 34 27 19 44 35 (+ 6 universals)"));
    assert!(stdout.contains("erratum (13 entries):"));
    assert!(stdout.contains("ledger check: all matrix symbols bound; free parameters: m a"));
}

#[test]
fn pipeline_ph2_sum_notation_fits_a_page() {
    let latex_line = |stdout: &str| {
        stdout
            .lines()
            .find(|l| l.starts_with("final (latex): "))
            .expect("latex line present")
            .to_string()
    };
    let (full, _, code) = eppe(&["pipeline", "ph2"]);
    assert_eq!(code, 0);
    let (summed, _, code) = eppe(&["pipeline", "ph2", "--sum-notation"]);
    assert_eq!(code, 0);
    let full_latex = latex_line(&full);
    let sum_latex = latex_line(&summed);
    assert!(sum_latex.contains("\\sum_{l=1}^{24}"));
    assert!(
        sum_latex.len() < 5000,
        "sum-notation latex should fit one dense page, got {} chars",
        sum_latex.len()
    );
    assert!(
        2 * sum_latex.len() < full_latex.len(),
        "sum notation should compress substantially ({} vs {})",
        sum_latex.len(),
        full_latex.len()
    );
}

#[test]
fn verify_exit_codes_track_expectations() {
    // corrected gadget: zero counterexamples, exit 0 (small ranges for speed)
    let (stdout, _, code) = eppe(&[
        "verify",
        "div-binom",
        "--range",
        "y1=1..4",
        "--range",
        "z=1..5",
        "--range",
        "w=0..5",
    ]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("counterexamples: 0"));

    // contrast gadget: counterexamples expected, still exit 0, listed
    let (stdout, _, code) = eppe(&["verify", "div-binom-literal"]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("counterexample"));
    assert!(stdout.contains("y1 = 3, z = 4, w = 2"));

    // unknown gadget: exit 1 and the registry is listed
    let (_, stderr, code) = eppe(&["verify", "nonsense"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("registered: remainder"));

    // unknown parameter name in an override: exit 1
    let (_, stderr, code) = eppe(&["verify", "less", "--range", "zz=0..1"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("has no parameter"));
}

#[test]
fn verify_output_is_byte_deterministic() {
    let (a, _, code_a) = eppe(&["verify", "div-binom-literal"]);
    let (b, _, code_b) = eppe(&["verify", "div-binom-literal", "--jobs", "2"]);
    assert_eq!(code_a, 0);
    assert_eq!(code_b, 0);
    assert_eq!(a, b, "reports must not depend on worker count");
    assert!(a.contains("records:"));
    let json_lines = a
        .lines()
        .skip_while(|l| *l != "records:")
        .skip(1)
        .collect::<Vec<_>>();
    assert_eq!(json_lines.len(), 440);
    for line in json_lines {
        let v: serde_json::Value = serde_json::from_str(line).expect("record line is json");
        assert!(v.get("agree").is_some());
    }
}

#[test]
fn oracle_reference_values() {
    let cases: &[(&[&str], &str)] = &[
        (
            &["oracle", "goodstein", "3", "2"],
            "3 3 3 2 1 0 (terminated, 5 steps)\n",
        ),
        (
            &["oracle", "goodstein", "2", "2"],
            "2 2 1 0 (terminated, 3 steps)\n",
        ),
        (&["oracle", "binomial", "4"], "1 4 6 4 1\n"),
        (&["oracle", "cantor", "1", "2"], "7\n"),
        (&["oracle", "partial-binom", "17", "2", "1"], "19\n"),
        (
            &["oracle", "ph2-check", "--k", "3", "--r", "2", "--m", "1"],
            "true\n",
        ),
        (
            &["oracle", "ph2-check", "--k", "4", "--r", "2", "--m", "1"],
            "false\n",
        ),
        (
            &["oracle", "ph2-min-m", "--k", "3", "--r", "2"],
            "least M: 1\n",
        ),
        (
            &["oracle", "hereditary", "26", "2"],
            "2^(2^(2)) + 2^(2 + 1) + 2\n",
        ),
    ];
    for (args, want) in cases {
        let (stdout, stderr, code) = eppe(args);
        assert_eq!(code, 0, "{args:?}: {stderr}");
        assert_eq!(&stdout, want, "{args:?}");
    }

    let (stdout, _, code) = eppe(&["oracle", "psi", "2", "--count", "3"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "n\tpsi\tchi\n0\t0\t1\n1\t1\t2\n2\t4\t7\n3\t15\t26\n");

    // the non-terminating case reports its cap instead of looping
    let (stdout, _, code) = eppe(&["oracle", "goodstein", "4", "2", "--cap", "20"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("no termination within 20 steps"));
}

#[test]
fn out_flag_redirects_the_whole_page() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let path_str = path.to_str().unwrap();
    let (direct, _, code) = eppe(&["pipeline", "ph2"]);
    assert_eq!(code, 0);
    let (stdout, _, code) = eppe(&["pipeline", "ph2", "--out", path_str]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty(), "everything should go to the file");
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, direct);
}
