mod common;

use std::process::Command;

use flab::cli::{run, Outcome};
use flab::json::{parse_document, Document};
use serde_json::Value;

fn flab(args: &[&str]) -> Outcome {
    let mut v = vec!["flab"];
    v.extend_from_slice(args);
    run(v)
}

fn fixture(name: &str) -> String {
    common::fixture(&format!("{name}.json")).to_string_lossy().into_owned()
}

fn json(o: &Outcome) -> Value {
    assert_eq!(o.code, 0, "stderr: {}", o.stderr);
    serde_json::from_str(&o.stdout).unwrap()
}

#[test]
fn validate_exit_codes() {
    let cases: &[(&str, i32, &str)] = &[
        ("pcanon2", 0, ""),
        ("repeated_weights", 0, ""),
        ("singular_phi", 1, "SingularPhi block 0"),
        ("unsorted_weights", 1, "UnsortedWeights block 0"),
        ("weight_out_of_bounds", 1, "WeightOutOfBounds block 0"),
        ("residue_degree_mismatch", 1, "ResidueDegreeMismatch"),
        ("block_rank_mismatch", 1, "BlockRankMismatch block 0"),
        ("symmetry_violation", 1, "SymmetryViolation block 0 entry (0,1)"),
        ("filtration_violation", 1, "FiltrationViolation block 0 entry (1,1)"),
        ("not_perfect", 1, "NotPerfect block 0"),
        ("phi_incompatible", 1, "PhiIncompatible block 0 entry (0,1)"),
        ("odd_rank_symplectic", 1, "OddRankSymplectic"),
        ("invalid_ldata", 1, "InvalidLData"),
        ("reducible_modulus", 1, "ReducibleModulus"),
        ("truncated", 2, "ParseError"),
        ("unknown_field", 2, "ParseError"),
        ("wrong_type", 2, "ParseError"),
    ];
    for &(name, code, msg) in cases {
        let o = flab(&["validate", &fixture(name)]);
        assert_eq!(o.code, code, "{name}: {}", o.stderr);
        assert!(o.stderr.starts_with(msg), "{name}: {}", o.stderr);
        if code == 0 {
            assert_eq!(o.stdout.trim(), r#"{"valid":true}"#);
        }
    }
}

#[test]
fn missing_file_is_exit_2() {
    let o = flab(&["validate", "/nonexistent/module.json"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.starts_with("ReadError"));
}

#[test]
fn unknown_subcommand_is_exit_2() {
    assert_eq!(flab(&["frobnicate"]).code, 2);
    assert_eq!(flab(&["--help"]).code, 0);
}

#[test]
fn canonical_file_round_trips() {
    let path = common::fixture("pcanon2.json");
    let text = std::fs::read_to_string(&path).unwrap();
    let doc = parse_document(text.trim()).unwrap();
    let back = flab::json::to_canonical(&flab::json::document_to_file(&doc));
    assert_eq!(back, text.trim());
}

#[test]
fn lift_emits_valid_chain() {
    for family in ["witt", "dual"] {
        let o = flab(&["lift", &fixture("pcanon2"), "--tower-depth", "3", "--family", family]);
        let chain = json(&o);
        let stages = chain.as_array().unwrap();
        assert_eq!(stages.len(), 3);
        for (m, s) in stages.iter().enumerate() {
            assert_eq!(s["ring"]["level"], m as u64 + 1);
            let Document::Paired(p) = parse_document(&s.to_string()).unwrap() else { panic!("pairing dropped") };
            p.validate().unwrap();
        }
    }
    let single = json(&flab(&["lift", &fixture("pcanon2"), "--tower-depth", "1"]));
    assert_eq!(single.as_array().unwrap().len(), 1);
}

#[test]
fn lift_failures() {
    let o = flab(&["lift", &fixture("repeated_weights")]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.starts_with("MultiplicityNotFree"), "{}", o.stderr);
    assert_eq!(flab(&["lift", &fixture("singular_phi")]).code, 1);
    assert_eq!(flab(&["lift", &fixture("truncated")]).code, 2);
}

#[test]
fn tangent_report() {
    let r = json(&flab(&["tangent", &fixture("pcanon2")]));
    assert_eq!(r["formula_check"], true);
    assert_eq!(r["dim_pairing_lie"], 3);
    assert_eq!(r["dim_fil0"], 2);
    assert_eq!(r["dim_end_mf_pairing"], 1);
    assert_eq!(r["dim_tangent"], 2);
}

#[test]
fn normalize_output_validates() {
    let r = json(&flab(&["normalize", &fixture("pcanon2")]));
    let Document::Paired(p) = parse_document(&r["module"].to_string()).unwrap() else { panic!() };
    p.validate().unwrap();
    assert_eq!(r["omega"].as_array().unwrap().len(), 1);
}

#[test]
fn tensor_simples_two_twists() {
    let r = json(&flab(&["tensor-simples", "--h", "2", "--i", "0,1", "--h2", "2", "--i2", "1,0", "--q", "5"]));
    let summands = r["summands"].as_array().unwrap();
    // s = 0 collapses to period 1 and contributes two copies of M(1;(1))
    assert_eq!(summands.len(), 2);
    assert_eq!(summands[0]["spec"]["i"], serde_json::json!([1]));
    assert_eq!(summands[0]["d_s"], 2);
    assert_eq!(summands[1]["spec"]["i"], serde_json::json!([0, 2]));
    assert_eq!(summands[1]["d_s"], 1);
    let e = json(&flab(&[
        "tensor-simples", "--i", "0,1", "--i2", "1,0", "--q", "5", "--embeddings",
    ]));
    assert_eq!(e["joint_invertible"], true);
    assert!(e["embeddings"].as_array().unwrap().iter().all(|x| x["verified"] == true));
}

#[test]
fn tensor_simples_rejects_non_minimal_period() {
    let o = flab(&["tensor-simples", "--h", "2", "--i", "1,1", "--i2", "0"]);
    assert_eq!(o.code, 1);
}

#[test]
fn feasibility_accepts_and_rejects() {
    let r = json(&flab(&["feasibility", "--group", "gsp", "--m", "4", "--p", "19", "--degree", "1", "--h0", "4"]));
    assert_eq!(r["accept"], true);
    let r = json(&flab(&["feasibility", "--group", "gsp", "--m", "4", "--p", "17"]));
    assert_eq!(r["accept"], false);
    assert_eq!(r["binding"], flab::feasibility::THM_BOUND);
    let r = json(&flab(&["feasibility", "--group", "gsp", "--m", "4", "--p", "5", "--weights", "[[0,1,2,3]]"]));
    assert_eq!(r["binding"], flab::feasibility::WEIGHT_SPREAD);
    let o = flab(&["feasibility", "--group", "gsp", "--m", "4", "--p", "5", "--weights", "[[0,"]);
    assert_eq!(o.code, 2);
}

#[test]
fn sample_is_seeded_and_valid() {
    let a = flab(&["sample", "--seed", "9", "--p", "7", "--rank", "4"]);
    let b = flab(&["sample", "--seed", "9", "--p", "7", "--rank", "4"]);
    assert_eq!(a, b);
    let Document::Paired(p) = parse_document(a.stdout.trim()).unwrap() else { panic!() };
    p.validate().unwrap();
    let o = flab(&["sample", "--epsilon", "1", "--rank", "3", "--p", "11", "--level", "2", "--family", "dual"]);
    assert!(parse_document(json(&o).to_string().as_str()).unwrap().validate().is_ok());
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("flab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("chain.json");
    let o = flab(&["lift", &fixture("pcanon2"), "--output", out.to_str().unwrap()]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.is_empty());
    let chain: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(chain.as_array().unwrap().len(), 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn quiet_suppresses_diagnostics() {
    let o = flab(&["--quiet", "validate", &fixture("singular_phi")]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.is_empty());
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_flab");
    let code = |name: &str| Command::new(bin).args(["validate", &fixture(name)]).output().unwrap();
    let ok = code("pcanon2");
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout).trim(), r#"{"valid":true}"#);
    let bad = code("singular_phi");
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("SingularPhi block 0"));
    assert_eq!(code("truncated").status.code(), Some(2));
}
