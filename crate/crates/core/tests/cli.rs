//! End-to-end tests of the command-line surface: exit codes, report
//! formats, the decompose/coset-enum/orbit-table subcommands, configuration
//! file handling, and the cache environment variable.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_spinor-verify"))
}

fn run_in(cache: &std::path::Path, args: &[&str]) -> std::process::Output {
    Command::new(bin())
        .arg("--cache-dir")
        .arg(cache)
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn exit_codes_contract() {
    let tmp = tempfile::tempdir().unwrap();
    // pass -> 0
    let out = run_in(tmp.path(), &["verify", "nu-s"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    // unknown id -> 2
    let out = run_in(tmp.path(), &["verify", "no-such-check"]);
    assert_eq!(out.status.code(), Some(2));
    // parameter out of range -> 2
    let out = run_in(tmp.path(), &["verify", "orbit-table", "--prime", "11"]);
    assert_eq!(out.status.code(), Some(2));
    // failing check -> 1 (mutated normalization)
    let out = run_in(tmp.path(), &["verify", "normalization", "--mutate", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn report_formats() {
    let tmp = tempfile::tempdir().unwrap();
    for id in ["nu-s", "normalization", "factorization"] {
        let out = run_in(tmp.path(), &["verify", id]);
        assert_eq!(out.status.code(), Some(0));
    }
    let out = run_in(tmp.path(), &["report", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let arr = parsed.as_array().unwrap();
    assert_eq!(arr.len(), 3);
    for r in arr {
        assert_eq!(r["status"], "pass");
        assert!(r["paper_ref"].is_string());
        assert!(r["elapsed_ms"].is_number());
        assert!(r["residual"].is_string());
    }
    let out = run_in(tmp.path(), &["report", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("factorization"));
    assert!(text.contains("check"));
    // one pass + one fail aggregates to exit 1
    let out = run_in(tmp.path(), &["verify", "normalization", "--mutate", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run_in(tmp.path(), &["report", "--format", "text"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn decompose_subcommand() {
    let tmp = tempfile::tempdir().unwrap();
    // character of V(1,0;0;0) x V(1,0;0;0): serialized over (a, b, c, d)
    let input = tmp.path().join("char.poly");
    // (a + b + 1/b + 1/a)^2 expanded
    let mut terms = std::collections::BTreeMap::new();
    let weights = [(1i16, 0i16), (0, 1), (0, -1), (-1, 0)];
    for (e1, f1) in weights {
        for (e2, f2) in weights {
            *terms.entry((e1 + e2, f1 + f2)).or_insert(0i64) += 1;
        }
    }
    let mut text = String::new();
    for ((ea, eb), c) in terms {
        text.push_str(&format!("{c}; {ea},{eb},0,0\n"));
    }
    std::fs::write(&input, text).unwrap();
    let out = run_in(tmp.path(), &["decompose", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let arr = parsed.as_array().unwrap();
    // V(2,0) + V(0,1) + V(0,0)
    assert_eq!(arr.len(), 3);
    let weights: Vec<Vec<u64>> = arr
        .iter()
        .map(|v| {
            v["weight"]
                .as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_u64().unwrap())
                .collect()
        })
        .collect();
    assert!(weights.contains(&vec![2, 0, 0, 0]));
    assert!(weights.contains(&vec![0, 1, 0, 0]));
    assert!(weights.contains(&vec![0, 0, 0, 0]));
}

#[test]
fn coset_enum_and_orbit_table() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_in(tmp.path(), &["coset-enum", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(parsed["count"], 25);
    let reps = parsed["representatives"].as_array().unwrap();
    assert_eq!(reps.len(), 25);
    // text form is an aligned table with a header
    let out = run_in(tmp.path(), &["coset-enum"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() >= 26);

    let out = run_in(tmp.path(), &["orbit-table", "--q", "3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = parsed.as_array().unwrap();
    assert_eq!(rows.len(), 8);
    assert_eq!(rows[0]["orbits"], 3);
}

#[test]
fn config_file_and_flag_override() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("spinor.conf");
    std::fs::write(&cfg, "prime = 11\n").unwrap();
    // config alone: out-of-range prime -> usage error
    let out = Command::new(bin())
        .arg("--cache-dir")
        .arg(tmp.path())
        .args(["--config", cfg.to_str().unwrap(), "verify", "orbit-table"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // flag overrides the config value
    let out = Command::new(bin())
        .arg("--cache-dir")
        .arg(tmp.path())
        .args([
            "--config",
            cfg.to_str().unwrap(),
            "verify",
            "orbit-table",
            "--prime",
            "3",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
}

#[test]
fn cache_env_variable() {
    let tmp = tempfile::tempdir().unwrap();
    let out = Command::new(bin())
        .env(spinor_verify::cli::CACHE_ENV, tmp.path())
        .args(["verify", "nu-s"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(tmp.path().join("reports").join("nu-s.json").exists());
}

#[test]
fn list_checks_covers_registry() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_in(tmp.path(), &["list-checks"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for id in [
        "uq-group-law",
        "coset-25",
        "orbit-table",
        "prop-sym-vxw",
        "prop-triple",
        "prop-double-sl2-tau",
        "master",
        "normalization",
        "nu-s",
        "theorem",
        "twist-reduce",
        "factorization",
        "conjugate-intersection",
    ] {
        assert!(text.contains(id), "missing {id}");
    }
}
