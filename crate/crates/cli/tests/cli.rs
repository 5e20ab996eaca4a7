//! End-to-end checks of the binary: formats, exit codes, cache behavior.

use std::path::PathBuf;
use std::process::{Command, Output};

use millscale_cli::emit::{LemmaDoc, SequenceDoc};

fn millscale(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_millscale"))
        .args(args)
        .env_remove("MILLSCALE_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn sequence_text_lists_terms_with_statuses() {
    let out = millscale(&[
        "sequence",
        "--c",
        "3",
        "--variant",
        "ceiling",
        "--terms",
        "4",
    ]);
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    let values: Vec<&str> = lines
        .iter()
        .map(|l| l.split_whitespace().nth(1).unwrap())
        .collect();
    assert_eq!(values, ["2", "7", "337", "38272739"]);
    for l in &lines {
        let status = l.split_whitespace().nth(2).unwrap();
        assert!(status.starts_with("proven"), "line {l:?}");
    }
}

#[test]
fn sequence_single_term_echoes_seed() {
    let out = millscale(&["sequence", "--terms", "1"]);
    let text = stdout_of(&out);
    assert!(text.starts_with("1 2"));
    assert_eq!(text.lines().count(), 1);
}

#[test]
fn sequence_bfile_is_bare_pairs() {
    let out = millscale(&["sequence", "--terms", "4", "--format", "bfile"]);
    assert_eq!(stdout_of(&out), "1 2\n2 7\n3 337\n4 38272739\n");
}

#[test]
fn floor_bfile_matches_segmented_sieve_oracle() {
    // Independent oracle: next prime above x by sieving [x+1, x+200] with
    // all primes below sqrt.
    fn oracle_next_prime(x: u64) -> u64 {
        let span = 200usize;
        let lo = x + 1;
        let mut composite = vec![false; span];
        let mut p = 2u64;
        while p * p <= x + span as u64 {
            let start = lo.next_multiple_of(p).max(p * p);
            let mut m = start;
            while m < lo + span as u64 {
                composite[(m - lo) as usize] = true;
                m += p;
            }
            p += 1;
        }
        (0..span)
            .find(|&i| !composite[i])
            .map(|i| lo + i as u64)
            .expect("prime within span")
    }
    let mut expected = vec![2u64];
    for _ in 0..3 {
        let last = *expected.last().unwrap();
        expected.push(oracle_next_prime(last.pow(3)));
    }
    assert_eq!(expected, [2, 11, 1361, 2521008887]);

    let out = millscale(&[
        "sequence",
        "--variant",
        "floor",
        "--terms",
        "4",
        "--format",
        "bfile",
    ]);
    let text = stdout_of(&out);
    let got: Vec<u64> = text
        .lines()
        .map(|l| l.split_whitespace().nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(got, expected);
}

#[test]
fn sequence_json_round_trips_byte_identically() {
    let out = millscale(&["sequence", "--terms", "4", "--format", "json"]);
    let text = stdout_of(&out);
    let doc: SequenceDoc = serde_json::from_str(&text).expect("parses");
    let mut again = serde_json::to_string_pretty(&doc).unwrap();
    again.push('\n');
    assert_eq!(text, again);
    assert_eq!(doc.records.len(), 4);
    assert_eq!(doc.records[3].value, "38272739");
    assert!(doc
        .records
        .iter()
        .all(|r| r.lower_bound_ok && r.upper_bound_ok));
}

#[test]
fn constant_text_leads_with_certified_digits() {
    let out = millscale(&[
        "constant", "--terms", "5", "--digits", "20", "--format", "text",
    ]);
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "1.24055470525201424067");
    assert!(text.contains("certified_fraction_digits = 20"));
    assert!(text.contains("terms_used = 5"));
    assert!(text.contains("status[5] = probable(bpsw+16)"));
}

#[test]
fn constant_json_round_trips_byte_identically() {
    let out = millscale(&[
        "constant", "--terms", "4", "--digits", "8", "--format", "json",
    ]);
    let text = stdout_of(&out);
    let doc: millscale_cli::emit::ConstantDoc = serde_json::from_str(&text).unwrap();
    let mut again = serde_json::to_string_pretty(&doc).unwrap();
    again.push('\n');
    assert_eq!(text, again);
    assert_eq!(doc.digits, "1.24055470");
    assert_eq!(doc.certified_fraction_digits, 8);
}

#[test]
fn constant_rejects_bfile_format_with_usage_error() {
    let out = millscale(&["constant", "--terms", "2", "--format", "bfile"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("usage error"));
}

#[test]
fn unknown_flag_exits_two() {
    let out = millscale(&["sequence", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_succeeds_at_default_precision() {
    let out = millscale(&["verify", "--terms", "4"]);
    let text = stdout_of(&out);
    assert!(text.contains("round trip passed for 4 terms"));
}

#[test]
fn verify_with_truncated_precision_exits_one_after_retry() {
    let out = millscale(&["verify", "--terms", "6", "--digits", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("precision insufficient"), "stderr: {err}");
}

#[test]
fn verify_retries_once_with_doubled_precision() {
    // 3 digits cannot pin the 23-digit fifth term, the doubled 6 can.
    let out = millscale(&[
        "verify", "--terms", "5", "--digits", "3", "--format", "json",
    ]);
    let text = stdout_of(&out);
    let doc: millscale_cli::emit::VerifyDoc = serde_json::from_str(&text).unwrap();
    assert!(doc.retried);
    assert_eq!(doc.frac_digits, 6);
    assert!(doc.all_passed);
    let mut again = serde_json::to_string_pretty(&doc).unwrap();
    again.push('\n');
    assert_eq!(text, again);
}

#[test]
fn verify_floor_variant_round_trips() {
    let out = millscale(&["verify", "--variant", "floor", "--terms", "4"]);
    let text = stdout_of(&out);
    assert!(text.contains("index 4: expected 2521008887 ok"));
    assert!(text.contains("round trip passed for 4 terms"));
}

#[test]
fn lemma_check_reports_empty_violations() {
    let out = millscale(&[
        "lemma-check",
        "--n-min",
        "2",
        "--n-max",
        "40",
        "--format",
        "json",
    ]);
    let text = stdout_of(&out);
    let doc: LemmaDoc = serde_json::from_str(&text).unwrap();
    assert!(doc.violations.is_empty());
    let worst = doc.worst_margin.unwrap();
    assert_eq!(worst.n, 2);
    assert_eq!(worst.prime, "7");
    // JSON round trip stays byte-identical here too.
    let reparsed: LemmaDoc = serde_json::from_str(&text).unwrap();
    let mut again = serde_json::to_string_pretty(&reparsed).unwrap();
    again.push('\n');
    assert_eq!(text, again);
}

#[test]
fn lemma_check_rejects_bad_range() {
    let out = millscale(&["lemma-check", "--n-min", "9", "--n-max", "5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bench_emits_stats() {
    let out = millscale(&["bench", "--scale", "1", "--format", "json"]);
    let text = stdout_of(&out);
    let doc: millscale_cli::emit::BenchDoc = serde_json::from_str(&text).unwrap();
    assert_eq!(doc.digits, 10);
    assert_eq!(doc.target.len(), 10);
    assert!(doc.stats.mr_tests_run >= 1);
    let mut again = serde_json::to_string_pretty(&doc).unwrap();
    again.push('\n');
    assert_eq!(text, again);
}

#[test]
fn bench_rejects_scale_zero() {
    let out = millscale(&["bench", "--scale", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cache_makes_second_constant_run_byte_identical_with_zero_searches() {
    let dir = tempfile::tempdir().unwrap();
    let cache: PathBuf = dir.path().join("seq.json");
    let args = [
        "constant",
        "--terms",
        "5",
        "--digits",
        "20",
        "--cache",
        cache.to_str().unwrap(),
    ];
    let first = millscale(&args);
    let first_text = stdout_of(&first);
    assert!(cache.exists());

    let second = millscale(&args);
    let second_text = stdout_of(&second);
    assert_eq!(first_text, second_text);

    // The second run rebuilt records from the cache: zero search work.
    let seq2 = millscale(&[
        "sequence",
        "--terms",
        "5",
        "--format",
        "json",
        "--cache",
        cache.to_str().unwrap(),
    ]);
    let doc: SequenceDoc = serde_json::from_str(&stdout_of(&seq2)).unwrap();
    for r in &doc.records {
        assert_eq!(r.stats.candidates_examined, 0, "index {}", r.index);
        assert_eq!(r.stats.mr_tests_run, 0, "index {}", r.index);
    }
}

#[test]
fn cache_env_var_supplies_default_location() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("env-cache.json");
    let out = Command::new(env!("CARGO_BIN_EXE_millscale"))
        .args(["sequence", "--terms", "3"])
        .env("MILLSCALE_CACHE", &cache)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(cache.exists());
    let cached: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cache).unwrap()).unwrap();
    assert_eq!(cached["terms"].as_array().unwrap().len(), 3);
    assert_eq!(cached["variant"], "ceiling");
    assert_eq!(cached["seed"], "2");
}

#[test]
fn tampered_cache_fails_with_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("seq.json");
    let args = [
        "sequence",
        "--terms",
        "3",
        "--cache",
        cache.to_str().unwrap(),
    ];
    assert!(millscale(&args).status.success());
    let mut doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cache).unwrap()).unwrap();
    doc["terms"][1] = serde_json::Value::String("9".into());
    std::fs::write(&cache, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
    let out = millscale(&args);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cache rejected"));
}

#[test]
fn constant_out_writes_digit_file_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.digits");
    let out = millscale(&[
        "constant",
        "--terms",
        "5",
        "--digits",
        "60",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let body = std::fs::read_to_string(&path).unwrap();
    // Five terms certify 24 fractional digits; one line, trailing newline.
    assert_eq!(body, "1.240554705252014240674695\n");

    let sidecar: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("b.meta.json")).unwrap())
            .unwrap();
    assert_eq!(sidecar["c"], 3);
    assert_eq!(sidecar["variant"], "ceiling");
    assert_eq!(sidecar["seed"], "2");
    assert_eq!(sidecar["terms_used"], 5);
    assert_eq!(sidecar["certified_fraction_digits"], 24);
    assert_eq!(sidecar["statuses"].as_array().unwrap().len(), 5);
}

#[test]
fn allow_c2_is_gated() {
    let out = millscale(&["sequence", "--c", "2", "--terms", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let out = millscale(&["sequence", "--c", "2", "--terms", "3", "--allow-c2"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn composite_seed_is_rejected() {
    let out = millscale(&["sequence", "--seed", "9", "--terms", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not prime"));
}
