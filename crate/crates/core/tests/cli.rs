mod common;

use common::fixture_path;
use malle_core::cli::{parse_bound, run};

fn malle(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("malle").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn value<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| {
            let (k, v) = l.split_once('\t')?;
            (k == key).then_some(v)
        })
        .unwrap_or_else(|| panic!("no {key} in\n{text}"))
}

#[test]
fn invariants_tsv() {
    let (code, out, _) = malle(&["--format", "tsv", "invariants", "--d", "4", "--A", "C2xC2"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "a"), "4");
    assert_eq!(value(&out, "exponent"), "1/4");
    assert_eq!(value(&out, "b"), "1");
    assert_eq!(value(&out, "b_A"), "2");
}

#[test]
fn delta_table_matches_golden_file() {
    let (code, out, _) = malle(&["--format", "tsv", "delta-table", "--d", "3", "--A", "C3"]);
    assert_eq!(code, 0);
    let numbers = |text: &str| -> Vec<String> {
        text.lines()
            .filter(|l| !l.starts_with('#'))
            .map(|l| l.split('\t').skip(3).collect::<Vec<_>>().join(" "))
            .collect()
    };
    let golden = std::fs::read_to_string(common::manifest_path("tests/golden/table_S3_C3.tsv")).unwrap();
    assert_eq!(numbers(&out), numbers(&golden));
}

#[test]
fn delta_table_needs_prime_cyclic_group() {
    let (code, _, err) = malle(&["delta-table", "--d", "3", "--A", "C4"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error:"), "{err}");
}

#[test]
fn verify_lemmas_passes() {
    let (code, out, _) = malle(&["verify-lemmas", "--dmax", "4", "--amax", "6"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.lines().filter(|l| l.starts_with("PASS")).count() >= 5);
    assert!(!out.contains("FAIL"));
}

#[test]
fn tail_bound_reports_exact_beta() {
    let (code, out, _) = malle(&["--format", "tsv", "tail-bound", "--d", "3", "--A", "C2", "--Y", "1024"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "beta"), "-499/1000");
    assert_eq!(value(&out, "beta_negative"), "true");
    let (code, _, err) = malle(&["tail-bound", "--d", "3", "--A", "C2", "--Y", "1024", "--epsilon", "1"]);
    assert_eq!(code, 1, "{err}");
}

#[test]
fn census_on_fixture() {
    let path = fixture_path();
    let path = path.to_str().unwrap();
    let (code, out, _) = malle(&["--format", "tsv", "census", "--dataset", path, "--d", "3", "--A", "C2", "--X", "1e5", "10^6"]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "X\tY\tcount\tflagged_wild\tnon_disjoint\tfit_constant\tcomplete");
    assert!(rows[1].starts_with("100000\t-\t"));
    assert!(rows[2].starts_with("1000000\t-\t"));
    let (code, _, err) = malle(&["census", "--dataset", path, "--d", "3", "--A", "C2", "--X", "1e5", "--Y", "12"]);
    assert_eq!(code, 1);
    assert!(err.contains("Y must exceed"), "{err}");
}

#[test]
fn compose_on_fixture() {
    let path = fixture_path();
    let (code, out, _) = malle(&["compose", "--dataset", path.to_str().unwrap(), "--F", "3.1.23.1", "--K", "2.0.4.1"]);
    assert_eq!(code, 0);
    assert!(out.contains("33856"), "{out}");
}

#[test]
fn uniformity_on_fixture() {
    let path = fixture_path();
    let (code, out, _) = malle(&[
        "uniformity", "--dataset", path.to_str().unwrap(), "--d", "3",
        "--uniformity-spec", "2.1:1:0;3:1:0", "--X", "2001",
    ]);
    assert_eq!(code, 0);
    // unit ranges admit only q = 1, so every field counts once
    assert!(out.lines().any(|l| l.starts_with("2001\t324\t324\t")), "{out}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(malle(&["frobnicate"]).0, 2);
    assert_eq!(malle(&["invariants", "--d", "3"]).0, 2);
    assert_eq!(malle(&["invariants", "--d", "3", "--A", "C0"]).0, 2);
    assert_eq!(malle(&["--help"]).0, 0);
}

#[test]
fn missing_dataset_is_reported() {
    let (code, _, err) = malle(&["compose", "--dataset", "/nonexistent/x.fields", "--F", "a", "--K", "b"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error:"));
}

#[test]
fn bounds() {
    assert_eq!(parse_bound("1e7"), Ok(10_000_000));
    assert_eq!(parse_bound("10^3"), Ok(1000));
    assert_eq!(parse_bound("2e3"), Ok(2000));
    assert!(parse_bound("x").is_err());
}
