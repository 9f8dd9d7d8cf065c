//! End-to-end behaviour of the `helixlab` command line: outputs, exit codes
//! and the three output formats.

use std::process::Command;

use helixlab_core::{parse_sheaf_expr, Variety};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("helixlab").chain(args.iter().copied());
    let code = helixlab_cli::run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (code, out, _) = run(&full);
    (code, serde_json::from_str(&out).expect("JSON output"))
}

fn lines(out: &str) -> Vec<&str> {
    out.lines().collect()
}

#[test]
fn spinor_cohomology_has_four_sections() {
    let (code, out, _) = run(&["cohom", "--variety", "Q3", "Sigma"]);
    assert_eq!(code, 0);
    let l = lines(&out);
    for want in ["h^0 = 4", "h^1 = 0", "h^2 = 0", "h^3 = 0", "chi = 4", "status: ok"] {
        assert!(l.contains(&want), "missing {:?} in\n{}", want, out);
    }
}

#[test]
fn projective_dual_basis_of_the_standard_thread() {
    let (code, out, _) = run(&["dual-basis", "--variety", "P3", "--thread", "0"]);
    assert_eq!(code, 0);
    let got: Vec<&str> = out.lines().filter(|l| l.starts_with("F_")).collect();
    assert_eq!(got, ["F_0 = O(3)", "F_1 = wT^1(2)", "F_2 = wT^2(1)", "F_3 = O(4)"]);
}

#[test]
fn psi_one_regularity_on_the_three_dimensional_quadric() {
    // The engine's value; the bound -2 needs a regular sequence that only
    // exists from dimension five on.
    let (code, out, _) = run(&["reg", "--variety", "Q3", "psi_1(3)"]);
    assert_eq!(code, 0);
    assert!(lines(&out).contains(&"reg = -3"), "{}", out);
    let (_, v) = json(&["cm-reg", "--variety", "Q3", "psi_1(3)"]);
    assert_eq!(v["reg"], -2);
}

#[test]
fn regularity_threshold_answers_membership() {
    let (code, v) = json(&["reg", "--variety", "P2", "Omega^1(2)"]);
    assert_eq!(code, 0);
    assert_eq!(v["reg"], 0);
    let (code, v) = json(&["reg", "--variety", "P2", "Omega^1(2)", "--m", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["m"], 0);
    assert_eq!(v["regular"], "yes");
    let (_, v) = json(&["reg", "--variety", "P2", "Omega^1(2)", "--m", "-1"]);
    assert_ne!(v["regular"], "yes");
}

#[test]
fn mutation_reports_the_result_and_its_class() {
    let (code, v) = json(&["mutate", "--variety", "P2", "O", "O(1)"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"], "wT^1(0)");
    assert_eq!(v["class"], serde_json::json!([-1, 3, 0]));
    let (code, v) = json(&["mutate", "--left", "--variety", "P2", "O", "O(1)"]);
    assert_eq!(code, 0);
    assert_eq!(v["side"], "left");
}

#[test]
fn exit_codes_follow_the_error_class() {
    // Success.
    assert_eq!(run(&["cohom", "--variety", "P2", "O(1)"]).0, 0);
    // Undecided within the search budget.
    assert_eq!(run(&["--max-width", "1", "reg", "--variety", "Q5", "Omega^3(2)+Omega^2(1)"]).0, 2);
    // Input errors.
    assert_eq!(run(&["cohom", "--variety", "P2", "Foo"]).0, 3);
    assert_eq!(run(&["cohom", "--variety", "Q4", "O"]).0, 3);
    assert_eq!(run(&["mutate", "--variety", "P2", "O(1)", "O"]).0, 3);
    assert_eq!(run(&["no-such-command"]).0, 3);
    // A mutation outside the catalog still reports its class.
    let (code, v) = json(&["mutate", "--variety", "P2", "O", "O(2)"]);
    assert_eq!(code, 4);
    assert_eq!(v["class"], serde_json::json!([-1, 0, 6]));
    assert!(v["error"].as_str().unwrap().contains("not representable"));
}

#[test]
fn errors_go_to_stderr_and_into_the_document() {
    let (code, out, err) = run(&["cohom", "--variety", "P2", "Foo"]);
    assert_eq!(code, 3);
    assert!(err.starts_with("helixlab: syntax error"), "{}", err);
    assert!(out.contains("status: error(3)"), "{}", out);
}

#[test]
fn json_documents_carry_the_common_keys() {
    let (_, v) = json(&["ext", "--variety", "Q3", "Sigma", "O(1)"]);
    for key in ["command", "variety", "status", "ext", "chi", "source", "target"] {
        assert!(v.get(key).is_some(), "missing {}", key);
    }
    assert_eq!(v["status"], "ok");
    assert_eq!(v["variety"], "Q3");
    let (_, v) = json(&["compare", "--variety", "Q3", "Omega^2(3)"]);
    for key in ["reg", "lower", "upper", "holds"] {
        assert!(v.get(key).is_some(), "missing {}", key);
    }
    assert_eq!(v["holds"], true);
    assert_eq!(run(&["compare", "--variety", "P3", "O"]).0, 3);
}

#[test]
fn csv_grids_have_one_row_per_cell() {
    let (code, out, _) = run(&["--format", "csv", "e1", "--variety", "P2", "--thread", "0", "O(1)"]);
    assert_eq!(code, 0);
    let mut l = out.lines();
    assert_eq!(l.next(), Some("p,q,rank_lo,rank_hi,factor"));
    let rows: Vec<&str> = l.collect();
    assert_eq!(rows.len(), 9);
    assert!(rows.contains(&"-1,1,1,1,O(1)"));
}

#[test]
fn beilinson_grid_sums_to_the_class() {
    // Classes are written in the basis [O], [O(1)], ..., [O(n)].
    for thread in ["-2", "0", "1", "3"] {
        let (code, g) = json(&["e1", "--variety", "P3", "--thread", thread, "O(2)"]);
        assert_eq!(code, 0);
        assert_eq!(g["k0_sum"], serde_json::json!([0, 0, 1, 0]), "thread {}", thread);
    }
}

#[test]
fn printed_sheaves_parse_back() {
    let v: Variety = "Q5".parse().unwrap();
    let (_, out, _) = run(&["helix", "--variety", "Q5", "-3", "9"]);
    let members: Vec<&str> = out.lines().filter_map(|l| l.split_once(" = ").map(|(_, s)| s)).collect();
    assert_eq!(members.len(), 13);
    for m in members {
        let f = parse_sheaf_expr(m, v).unwrap();
        assert_eq!(f.to_string(), m);
    }
}

#[test]
fn json_output_is_deterministic() {
    let args = ["--format", "json", "reg", "--variety", "Q5", "Omega^2(3)+2*Sigma(-1)"];
    let first = run(&args).1;
    for _ in 0..3 {
        assert_eq!(run(&args).1, first);
    }
}

#[test]
fn width_budget_can_come_from_the_environment() {
    let bin = env!("CARGO_BIN_EXE_helixlab");
    let args = ["reg", "--variety", "Q5", "Omega^3(2)+Omega^2(1)"];
    let narrow = Command::new(bin).args(args).env(helixlab_cli::MAX_WIDTH_ENV, "1").output().unwrap();
    assert_eq!(narrow.status.code(), Some(2));
    let wide = Command::new(bin).args(args).env_remove(helixlab_cli::MAX_WIDTH_ENV).output().unwrap();
    assert_eq!(wide.status.code(), Some(0));
    // The flag wins over the environment.
    let flag = Command::new(bin)
        .args(["--max-width", "64"])
        .args(args)
        .env(helixlab_cli::MAX_WIDTH_ENV, "1")
        .output()
        .unwrap();
    assert_eq!(flag.status.code(), Some(0));
    let bad = Command::new(bin).args(args).env(helixlab_cli::MAX_WIDTH_ENV, "lots").output().unwrap();
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn verify_paper_runs_a_single_criterion() {
    let (code, v) = json(&["verify-paper", "projective-duals"]);
    assert_eq!(code, 0);
    assert_eq!(v["total"], 1);
    assert_eq!(v["passed"], 1);
    assert_eq!(run(&["verify-paper", "11"]).0, 3);
}
