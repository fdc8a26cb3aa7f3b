//! End-to-end checks of the binary: exit codes, JSON summaries, and
//! byte-reproducible CSV artifacts.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sumlab-cli"))
}

#[test]
fn selftest_quick_passes() {
    let out = bin().args(["selftest", "--quick"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS field-inverses"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn bad_kernel_is_a_config_error() {
    let out = bin()
        .args(["kernel-dump", "--kernel", "nonsense:1", "--q", "101"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn non_prime_q_is_a_config_error() {
    let out = bin()
        .args(["kernel-dump", "--kernel", "kl:2", "--q", "100"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn oversized_field_hits_the_cap() {
    // Smallest prime above the 2^26 table cap.
    let out = bin()
        .args(["kernel-dump", "--kernel", "kl:2", "--q", "67108879"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4), "{out:?}");
}

#[test]
fn moments_verifies_the_exchange_identity() {
    let out = bin()
        .args([
            "moments", "--kernel", "kl:2", "--q", "5", "--l", "1", "--m", "1",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["identity_holds"], true);
    assert!(v["config"].as_str().unwrap().contains("\"command\":\"moments\""));
}

#[test]
fn survey_csv_is_byte_reproducible() {
    let dir = std::env::temp_dir();
    let p1 = dir.join("sumlab_survey_1.csv");
    let p2 = dir.join("sumlab_survey_2.csv");
    for p in [&p1, &p2] {
        let out = bin()
            .args([
                "survey-cancel",
                "--kernel",
                "kl:2",
                "--q",
                "101",
                "--l",
                "2",
                "--c",
                "1",
                "--samples",
                "50",
                "--diag",
                "10",
                "--seed",
                "1",
                "--out",
                p.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{out:?}");
    }
    let a = std::fs::read(&p1).unwrap();
    let b = std::fs::read(&p2).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b, "same config must byte-reproduce the CSV");
}

#[test]
fn nu_reports_mass_under_bound() {
    let out = bin().args(["nu", "--q", "101"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["l1"].as_f64().unwrap(), 200.0);
}

#[test]
fn goursat_all_emits_five_certificates() {
    let out = bin().args(["goursat"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["certificates"].as_array().unwrap().len(), 5);
    let unknown = bin().args(["goursat", "--group", "nope"]).output().unwrap();
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn calibration_override_changes_thresholds() {
    let out = bin()
        .args([
            "survey-cancel",
            "--kernel",
            "kl:2",
            "--q",
            "101",
            "--samples",
            "5",
            "--diag",
            "0",
            "--cal",
            "c_q=7",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["thresholds"][0].as_f64().unwrap(), 7.0 * 101.0);
    let bad = bin()
        .args([
            "survey-cancel", "--kernel", "kl:2", "--q", "101", "--cal", "bogus=1",
        ])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
