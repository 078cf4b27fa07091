//! End-to-end CLI tests against the bundled curve.

use std::process::{Command, Output};

fn e2p(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_e2p"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn expand_matches_golden_coefficients() {
    let out = e2p(&["expand", "--N", "15"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for needle in [
        "(2, 711/2 + 2301/4*w)",
        "(3, 31495/4 + 12740*w)",
        "(3, -237/2 - 767/4*w)",
        "(5, -6299/4 - 2548*w)",
        "(7, -2438895/112 - 563745/16*w)",
        "(9, -2455225/8 - 7945275/16*w)",
        "(11, -1517389435/352 - 6974965*w)",
        "(13, -25264737675/416 - 3144554175/32*w)",
        "(5, -711 - 2301/2*w)",
        "(7, -94485/4 - 38220*w)",
        "(9, 60972375/8 + 98655375/8*w)",
        "(11, 1288993125/2 + 4171269375/4*w)",
        "(13, -200868706875/2 - 162506197500*w)",
    ] {
        assert!(text.contains(needle), "expand output missing {needle}");
    }
}

#[test]
fn expand_is_deterministic_and_truncates() {
    let a = e2p(&["expand", "--N", "15"]);
    let b = e2p(&["expand", "--N", "15"]);
    assert_eq!(a.stdout, b.stdout, "two runs must be byte-identical");

    // N = 2: the logarithm is u + O(u^2)
    let out = e2p(&["expand", "--N", "2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let log_section: Vec<&str> = text
        .split("# log\n")
        .nth(1)
        .unwrap()
        .split('#')
        .next()
        .unwrap()
        .lines()
        .collect();
    assert_eq!(log_section, vec!["(1, 1)"]);
}

#[test]
fn classify_agrees_and_exits_zero() {
    let out = e2p(&["classify", "--primes", "5..50"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["consistent"], serde_json::json!(true));
    let rows = doc["classifications"].as_array().unwrap();
    let class_of = |p: u64| -> String {
        rows.iter()
            .find(|r| r["p"] == serde_json::json!(p))
            .map(|r| r["class"].as_str().unwrap().to_string())
            .unwrap()
    };
    assert_eq!(class_of(5), "bad");
    assert_eq!(class_of(7), "supersingular");
    assert_eq!(class_of(11), "supersingular");
    assert_eq!(class_of(13), "supersingular");
    assert_eq!(class_of(17), "ordinary");
    assert_eq!(class_of(19), "ordinary");
    assert_eq!(class_of(23), "ordinary");
}

#[test]
fn verify_small_window_passes() {
    let out = e2p(&[
        "verify",
        "--A",
        "13/2 + 21/2*w",
        "--primes",
        "5..30",
        "--N",
        "120",
        "--k",
        "1",
        "--places",
        "both",
    ]);
    assert_eq!(
        code(&out),
        0,
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let results = doc["results"].as_array().unwrap();
    assert!(results.iter().all(|r| r["ok"] == serde_json::json!(true)));
    // mu mod 7 for the smallest supersingular prime: 47 = 5 (mod 7)
    let p7 = results
        .iter()
        .find(|r| r["p"] == serde_json::json!(7))
        .unwrap();
    assert_eq!(p7["mu"], serde_json::json!("5 mod 7"));
    // 19 splits: both places reported
    let p19: Vec<_> = results
        .iter()
        .filter(|r| r["p"] == serde_json::json!(19))
        .collect();
    assert_eq!(p19.len(), 2);
}

#[test]
fn verify_bad_prime_is_classification_only() {
    let out = e2p(&[
        "verify",
        "--A",
        "13/2 + 21/2*w",
        "--primes",
        "5",
        "--N",
        "20",
    ]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let results = doc["results"].as_array().unwrap();
    assert_eq!(results.len(), 1);
    assert_eq!(results[0]["class"], serde_json::json!("bad"));
    assert_eq!(results[0]["ok"], serde_json::json!(true));
}

#[test]
fn verify_perturbed_value_fails_with_violation() {
    let out = e2p(&[
        "verify",
        "--A",
        "15/2 + 21/2*w",
        "--primes",
        "17",
        "--N",
        "100",
        "--k",
        "1",
    ]);
    assert_eq!(code(&out), 1);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let r = &doc["results"][0];
    assert_eq!(r["ok"], serde_json::json!(false));
    assert_eq!(r["first_violation"]["index"], serde_json::json!(17));
    assert_eq!(r["first_violation"]["valuation"], serde_json::json!(-1));
}

#[test]
fn verify_rejects_bad_config() {
    // empty ordinary set for recovery
    let out = e2p(&[
        "verify", "--A", "recover", "--primes", "7,11", "--N", "60", "--k", "1",
    ]);
    assert_eq!(code(&out), 2);
    // unknown fixture
    let out = e2p(&["verify", "--curve", "nope-such-fixture", "--N", "20"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn recover_and_verify_equivalence() {
    // `verify --A recover` must agree with `recover` + `verify --A <value>`
    let rec = e2p(&[
        "recover",
        "--primes",
        "17,19,23,31",
        "--N",
        "60",
        "--k",
        "1",
        "--bound",
        "25",
    ]);
    assert_eq!(
        code(&rec),
        0,
        "stderr: {}",
        String::from_utf8_lossy(&rec.stderr)
    );
    let rec_doc: serde_json::Value = serde_json::from_str(&stdout(&rec)).unwrap();
    let a = rec_doc["A"].as_str().unwrap();
    assert_eq!(a, "13/2 + 21/2*w");

    let via_recover = e2p(&[
        "verify",
        "--A",
        "recover",
        "--primes",
        "17,19,23,31",
        "--N",
        "60",
        "--k",
        "1",
        "--bound",
        "25",
    ]);
    assert_eq!(code(&via_recover), 0);
    let doc1: serde_json::Value = serde_json::from_str(&stdout(&via_recover)).unwrap();
    assert_eq!(doc1["A"].as_str().unwrap(), a);

    let direct = e2p(&[
        "verify",
        "--A",
        a,
        "--primes",
        "17,19,23,31",
        "--N",
        "60",
        "--k",
        "1",
    ]);
    assert_eq!(code(&direct), 0);
    let doc2: serde_json::Value = serde_json::from_str(&stdout(&direct)).unwrap();
    assert_eq!(doc1["results"], doc2["results"]);
}

#[test]
fn verify_fast_domain_agrees() {
    let out = e2p(&[
        "verify",
        "--A",
        "13/2 + 21/2*w",
        "--primes",
        "17,19,23",
        "--N",
        "120",
        "--k",
        "1",
        "--domain",
        "both",
    ]);
    assert_eq!(
        code(&out),
        0,
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn verify_fast_domain_full_scale_supersingular() {
    // the scaled-residue domain reproduces the deep mod-49 result in
    // milliseconds
    let out = e2p(&[
        "verify", "--A", "13/2 + 21/2*w", "--primes", "7", "--N", "500", "--k", "2", "--domain",
        "fast",
    ]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let r = &doc["results"][0];
    assert_eq!(r["ok"], serde_json::json!(true));
    assert_eq!(r["mu"], serde_json::json!("47 mod 7^2"));
    assert_eq!(r["pre_violation"]["index"], serde_json::json!(343));
    assert_eq!(r["pre_violation"]["valuation"], serde_json::json!(-2));
}

#[test]
fn solve_mu_small() {
    let out = e2p(&[
        "solve-mu",
        "--A",
        "13/2 + 21/2*w",
        "--p",
        "7",
        "--N",
        "120",
        "--k",
        "1",
    ]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["result"]["mu"], serde_json::json!("5 mod 7"));
    assert_eq!(
        doc["result"]["pre_violation"]["index"],
        serde_json::json!(7)
    );
    // ordinary prime rejected
    let bad = e2p(&["solve-mu", "--A", "13/2 + 21/2*w", "--p", "17", "--N", "60"]);
    assert_eq!(code(&bad), 2);
}

#[test]
fn analytic_recognizes_the_golden_value() {
    let out = e2p(&["analytic"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["A_recognized"], serde_json::json!("13/2 + 21/2*w"));
    let embs = doc["embeddings"].as_array().unwrap();
    let im0 = embs[0]["tau"]["im"].as_f64().unwrap();
    let im1 = embs[1]["tau"]["im"].as_f64().unwrap();
    assert!((im0 - 0.968_245_836_551_854_3).abs() < 1e-10);
    assert!((im1 - 1.9364916731037084).abs() < 1e-10);
}

#[test]
fn expand_writes_to_file() {
    let dir = std::env::temp_dir().join(format!("e2p-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("expand.txt");
    let out = e2p(&["expand", "--N", "8", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("(5, -711 - 2301/2*w)"));
    std::fs::remove_dir_all(&dir).ok();
}
