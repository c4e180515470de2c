//! Integration tests for the command-line surface: schema round trips,
//! deterministic output, certificate verification and tamper detection.

use std::io::Write;

use bbf_cli::{run, Cli};
use clap::Parser;

fn invoke(args: &[&str]) -> anyhow::Result<bbf_cli::Outcome> {
    let mut full = vec!["bbf"];
    full.extend_from_slice(args);
    run(Cli::parse_from(full))
}

fn invoke_ok(args: &[&str]) -> bbf_cli::Outcome {
    invoke(args).expect("command should succeed")
}

#[test]
fn lattice_info_round_trips() {
    let out = invoke_ok(&["lattice-info", "--lattice", "U", "--format", "json"]);
    assert_eq!(out.exit_code, 0);
    let value: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(value["schema"], "bbf/report/1");
    assert_eq!(value["command"], "lattice-info");
    assert_eq!(value["result"]["signature"], serde_json::json!([1, 1]));
    assert_eq!(value["result"]["unimodular"], serde_json::json!(true));
    assert!(value["inputs"][0]["sha256"].as_str().unwrap().len() == 64);
}

#[test]
fn reports_are_byte_identical() {
    let args = ["bir-rank2", "--lattice", "<2> + <-6>", "--walls", "K3", "--format", "json"];
    let a = invoke_ok(&args);
    let b = invoke_ok(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.exit_code, 0);
}

#[test]
fn verdict_trio_through_the_cli() {
    let cases = [
        ("<2> + <-2>", "bir-finite", 0),
        ("<4> + <-6>", "bir-finite", 0),
        ("<2> + <-6>", "bir-infinite", 0),
    ];
    for (lattice, verdict, code) in cases {
        let out = invoke_ok(&[
            "bir-rank2", "--lattice", lattice, "--walls", "K3", "--format", "json",
        ]);
        assert_eq!(out.exit_code, code, "{lattice}");
        let value: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(value["result"]["verdict"], verdict, "{lattice}");
    }
    // Without wall data the verdict is undetermined and the exit code is 2.
    let out = invoke_ok(&["bir-rank2", "--lattice", "<2> + <-6>", "--format", "json"]);
    assert_eq!(out.exit_code, 2);
}

#[test]
fn build_and_verify_round_trip() {
    let out = invoke_ok(&[
        "schifo-build",
        "--lattice",
        "U^3",
        "--ell",
        "1,1,0,0,0,0",
        "--a",
        "0,0,1,-1,0,0",
        "--N",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(out.exit_code, 0);
    let value: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(value["result"]["outcome"], "hyperbolic");
    assert_eq!(value["result"]["diagonal"], serde_json::json!(["2", "-2032"]));
    assert_eq!(value["result"]["report"]["verdict"], "bir-infinite");
    assert_eq!(
        value["result"]["certificate_document"]["certificate"]["scale"],
        serde_json::json!("8")
    );

    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(out.stdout.as_bytes()).unwrap();
    let path = file.path().to_str().unwrap().to_owned();
    let verified = invoke_ok(&["schifo-verify", &path, "--format", "json"]);
    assert_eq!(verified.exit_code, 0);
    let value: serde_json::Value = serde_json::from_str(&verified.stdout).unwrap();
    assert_eq!(value["result"]["valid"], serde_json::json!(true));
}

#[test]
fn tampered_certificates_are_rejected_naming_the_index() {
    let out = invoke_ok(&[
        "schifo-build",
        "--lattice",
        "U^3",
        "--ell",
        "1,1,0,0,0,0",
        "--a",
        "0,0,1,-1,0,0",
        "--N",
        "2",
        "--format",
        "json",
    ]);
    let mut value: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    // Flip one residue datum in the i = 2 reason.
    let reason = &mut value["result"]["certificate_document"]["certificate"]["reasons"][2];
    assert_eq!(reason["i"], "2");
    reason["m_over_q2"] = serde_json::json!("6");

    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(serde_json::to_string(&value).unwrap().as_bytes()).unwrap();
    let path = file.path().to_str().unwrap().to_owned();
    let Err(err) = invoke(&["schifo-verify", &path]) else {
        panic!("tampered certificate must fail");
    };
    let message = format!("{err:#}");
    assert!(message.contains("i = 2"), "error should name the index: {message}");
}

#[test]
fn definite_branch_is_reported_cleanly() {
    let out = invoke_ok(&[
        "schifo-build",
        "--lattice",
        "U^3",
        "--ell",
        "1,1,0,0,0,0",
        "--a",
        "0,0,1,1,0,0",
        "--N",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(out.exit_code, 0);
    let value: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(value["result"]["outcome"], "definite");
    assert!(value["result"]["note"].as_str().unwrap().contains("definite"));
    assert!(value["result"]["certificate_document"].is_null());
}

#[test]
fn complement_and_cone_locate() {
    let out = invoke_ok(&[
        "complement", "--lattice", "U", "--vectors", "1,1", "--format", "json",
    ]);
    let value: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    let basis = &value["result"]["complement_basis"][0];
    assert!(
        *basis == serde_json::json!(["1", "-1"]) || *basis == serde_json::json!(["-1", "1"]),
        "unexpected generator {basis}"
    );
    assert_eq!(value["result"]["complement_gram"][0][0], "-2");

    let out = invoke_ok(&[
        "cone-locate",
        "--lattice",
        "<4> + <-6>",
        "--ample",
        "1,0",
        "--class",
        "3,2",
        "--walls",
        "K3",
        "--format",
        "json",
    ]);
    let value: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(value["result"]["in_positive_cone"], serde_json::json!(true));
    assert_eq!(value["result"]["movable"]["status"], "blocked");
    assert_eq!(value["result"]["movable"]["blocking_wall"], serde_json::json!(["1", "1"]));
}

#[test]
fn represents_reports_witness_or_certificate() {
    let out = invoke_ok(&[
        "forms-represents", "--form", "4 0 -6", "--target", "-2", "--format", "json",
    ]);
    let value: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(value["result"]["represented"], serde_json::json!(true));
    assert!(value["result"]["witness"].is_array());

    let out = invoke_ok(&[
        "forms-represents", "--form", "2 0 -6", "--target", "-2", "--format", "json",
    ]);
    let value: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(value["result"]["represented"], serde_json::json!(false));
    assert_eq!(value["result"]["certificate"]["kind"], "cycle-search");
}

#[test]
fn chambers_svg_and_json() {
    let out = invoke_ok(&[
        "chambers",
        "--lattice",
        "<4> + <-6>",
        "--ample",
        "1,0",
        "--classes",
        "1,1;1,-1",
        "--format",
        "json",
    ]);
    let value: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(value["result"]["chambers"].as_array().unwrap().len(), 3);
    let marked: Vec<bool> = value["result"]["chambers"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["contains_reference"].as_bool().unwrap())
        .collect();
    assert_eq!(marked.iter().filter(|&&b| b).count(), 1);

    let out = invoke_ok(&[
        "chambers",
        "--lattice",
        "<4> + <-6>",
        "--ample",
        "1,0",
        "--classes",
        "1,1;1,-1",
        "--format",
        "svg",
    ]);
    assert!(out.stdout.starts_with("<svg"));
    assert!(out.stdout.contains("</svg>"));
}

#[test]
fn lattice_files_and_walls_files_load() {
    let mut lattice_file = tempfile::NamedTempFile::new().unwrap();
    lattice_file
        .write_all(br#"{"name": "toy", "gram": [["2", "0"], ["0", "-6"]]}"#)
        .unwrap();
    let lattice_path = lattice_file.path().to_str().unwrap().to_owned();

    let mut walls_file = tempfile::NamedTempFile::new().unwrap();
    walls_file
        .write_all(
            br#"{"label": "custom", "floor": "-4", "entries": [{"square": "-2", "div": "any"}, {"square": "-4", "div": "2"}]}"#,
        )
        .unwrap();
    let walls_path = walls_file.path().to_str().unwrap().to_owned();

    let out = invoke_ok(&[
        "bir-rank2",
        "--lattice",
        &lattice_path,
        "--walls",
        &walls_path,
        "--format",
        "json",
    ]);
    let value: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    // diag(2,-6) represents -4 at (1,1) with div 2, so the custom table
    // flips the verdict to finite.
    assert_eq!(value["result"]["verdict"], "bir-finite");
    assert_eq!(value["inputs"].as_array().unwrap().len(), 2);
}

#[test]
fn bad_inputs_fail_with_context() {
    assert!(invoke(&["lattice-info", "--lattice", "Q7"]).is_err());
    assert!(invoke(&["forms-represents", "--form", "1 2", "--target", "3"]).is_err());
    assert!(invoke(&[
        "schifo-build",
        "--lattice",
        "U", // no three hyperbolic blocks
        "--ell",
        "1,0",
        "--a",
        "0,1",
        "--N",
        "2",
    ])
    .is_err());
}

#[test]
fn catalog_override_changes_resolution() {
    let mut catalog = tempfile::NamedTempFile::new().unwrap();
    catalog
        .write_all(
            br#"{"schema": "bbf/catalog/1", "entries": [
                {"name": "tiny", "expr": "U + <-2>", "source": "local override"}
            ]}"#,
        )
        .unwrap();
    let path = catalog.path().to_str().unwrap().to_owned();
    let out = invoke_ok(&[
        "lattice-info", "--lattice", "tiny", "--catalog", &path, "--format", "json",
    ]);
    let value: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(value["result"]["lattice"]["rank"], 3);
    assert_eq!(value["inputs"][0]["kind"], "file");
    // The built-in names are gone under the override.
    assert!(invoke(&["lattice-info", "--lattice", "K3[2]", "--catalog", &path]).is_err());
}

#[test]
fn builtin_data_files_expose_labels() {
    let loader = bbf_cli::io::Loader::new(None).unwrap();
    assert!(loader.builtin_wall_labels().contains(&"K3".to_owned()));
    assert!(loader.catalog_names().contains(&"OG10".to_owned()));
}
