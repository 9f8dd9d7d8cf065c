//! Acceptance suite: runs `verify-paper all` twice through the command-line
//! entry point, prints one pass/fail line per criterion and checks that the
//! JSON renderings are byte-identical.
//!
//! Three criteria contain statements that no correct engine can satisfy;
//! their failures are pinned exactly so that any other change still fails:
//!
//! * criterion 5 at `j = n`: `psi_n(-n) = 2^k Sigma(-n-1)` has Euler
//!   characteristic `-4^k`, so its cohomology is not one-dimensional;
//! * criterion 8 at `n = 3`: the regular-sequence witness for
//!   `Reg_sigma(psi_1(3 + 3 lambda)) = -2 - 4 lambda` needs `n >= 5`; on
//!   `Q_3` the value is `-3 - 4 lambda` while the pushforward part holds;
//! * criterion 9, the literal "E_1 class sum vanishes for i != 0": the sum is
//!   `[F]` on every thread, which the suite checks separately.

use std::time::{Duration, Instant};

use serde_json::Value;

fn run_json(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("helixlab").chain(args.iter().copied());
    let code = helixlab_cli::run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).expect("UTF-8 output"))
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array()
        .expect("array")
        .iter()
        .map(|s| s.as_str().expect("string").to_string())
        .collect()
}

/// Failures that a correct engine must report, per criterion.
fn pinned_failures(id: u64) -> Vec<String> {
    match id {
        5 => [(3u32, 2u32), (5, 3), (7, 4)]
            .iter()
            .map(|&(n, k)| {
                let copies = 1u64 << k;
                let mut ranks = vec!["0".to_string(); n as usize];
                ranks.push((copies * copies).to_string());
                format!(
                    "Q{n} H*(psi_{n}(-{n})) = H*({copies}*Sigma(-{})) = [{}], expected 1 in degree {n}",
                    n + 1,
                    ranks.join(", ")
                )
            })
            .collect(),
        8 => (-2i64..=2)
            .map(|l| {
                format!(
                    "Q3 lambda={l} psi_1({}): (Reg_sigma, Reg^CM) = (Exact({}), Exact({})), expected ({}, {})",
                    3 + 3 * l,
                    -3 - 4 * l,
                    -2 - 3 * l,
                    -2 - 4 * l,
                    -2 - 3 * l
                )
            })
            .collect(),
        9 => ["P2", "P3", "P4", "Q3", "Q5"]
            .iter()
            .map(|v| format!("{v} literal vanishing for i != 0: 200 of 200 grids sum to k0(F), not 0"))
            .collect(),
        _ => Vec::new(),
    }
}

#[test]
fn acceptance_criteria() {
    let start = Instant::now();
    let (code, first) = run_json(&["--format", "json", "verify-paper", "all"]);
    let doc: Value = serde_json::from_str(&first).expect("JSON document");
    let criteria = doc["criteria"].as_array().expect("criteria");
    assert_eq!(criteria.len(), 10);

    let mut mismatches = Vec::new();
    for c in criteria {
        let id = c["id"].as_u64().expect("id");
        let passed = c["passed"].as_bool().expect("passed");
        let failures = strings(&c["failures"]);
        let pinned = pinned_failures(id);
        let verdict = match (passed, pinned.is_empty()) {
            (true, _) => "PASS",
            (false, false) if failures == pinned => "FAIL (pinned deviation)",
            (false, _) => "FAIL",
        };
        println!(
            "criterion {:>2} {:<24} {} [{} checks]",
            id,
            c["slug"].as_str().expect("slug"),
            verdict,
            c["checks"]
        );
        for f in &failures {
            println!("      {}", f);
        }
        if failures != pinned {
            mismatches.push(format!("criterion {}: failures {:?}, pinned {:?}", id, failures, pinned));
        }
        assert!(c["checks"].as_u64().expect("checks") > 0, "criterion {} made no checks", id);
    }
    assert_eq!(code, 1, "verify-paper exits 1 while pinned deviations fail");
    assert!(mismatches.is_empty(), "unexpected outcomes:\n{}", mismatches.join("\n"));

    let (code2, second) = run_json(&["--format", "json", "verify-paper", "all"]);
    assert_eq!(code, code2);
    assert!(first == second, "verify-paper all is not byte-identical across runs");
    println!("determinism: two runs of verify-paper all rendered {} identical bytes", first.len());

    let elapsed = start.elapsed();
    println!("elapsed: {:.1}s", elapsed.as_secs_f64());
    assert!(elapsed < Duration::from_secs(60), "suite took {:?}", elapsed);
}
