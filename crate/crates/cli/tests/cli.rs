use std::io::{Cursor, Write};
use std::process::{Command, Stdio};

use cusp_cm_cli::{run, Output, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn call(args: &[&str]) -> Output {
    let argv = std::iter::once("cusp-cm").chain(args.iter().copied());
    run(argv, &mut Cursor::new(Vec::new()))
}

fn call_batch(input: &str) -> Output {
    run(
        ["cusp-cm", "--batch"],
        &mut Cursor::new(input.as_bytes().to_vec()),
    )
}

fn json(out: &Output) -> Value {
    serde_json::from_str(out.stdout.trim()).unwrap()
}

#[test]
fn cohom_example() {
    let out = call(&[
        "cohom", "--s", "1", "--seq", "2,-1", "--m", "1", "--lambda", "3/2",
    ]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(out.stdout, "{\"theta\":2,\"delta\":0,\"h0\":1,\"h1\":0}\n");
}

#[test]
fn canon_example() {
    let out = call(&["canon", "--s", "2", "--seq", "3,4,1,2"]);
    assert_eq!(out.stdout, "{\"canonical\":[1,2,3,4],\"aperiodic\":true}\n");
    let out = call(&["canon", "--s", "1", "--seq", "1,1"]);
    assert_eq!(json(&out)["aperiodic"], false);
}

#[test]
fn verify_grid_example() {
    let out = call(&[
        "verify",
        "--grid",
        "rs_max=4",
        "entries=-2..2",
        "m_max=2",
        "lambdas=1,-1,2",
    ]);
    assert_eq!(out.code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["mismatches"], 0);
    assert!(v["cases"].as_u64().unwrap() > 1000);
    let table = call(&["--format", "table", "verify", "--grid", "rs_max=2"]);
    assert!(table.stdout.contains("mismatches=0"), "{}", table.stdout);
}

#[test]
fn verify_single() {
    let v = json(&call(&[
        "verify", "--s", "1", "--seq", "1,-1,2", "--lambda", "3",
    ]));
    assert_eq!(v["agree"], true);
    assert_eq!(v["oracle"]["h0"], 2);
}

#[test]
fn kahn_violation_is_structured() {
    let out = call(&[
        "classify", "--s", "1", "--b", "1", "--seq", "0", "--lambda", "1",
    ]);
    assert_eq!(out.code, EXIT_USAGE);
    assert_eq!(json(&out)["error"]["kind"], "kahn_violation");
    assert_eq!(out.stderr.lines().count(), 1);
}

#[test]
fn validation_errors_exit_2() {
    for args in [
        &["frobnicate"][..],
        &["canon", "--s", "1", "--seq", "1,,2"],
        &["canon", "--s", "2", "--seq", "1,2,3"],
        &["cohom", "--s", "1", "--seq", "1", "--lambda", "1/0"],
        &["cohom", "--s", "1", "--seq", "1", "--lambda", "0"],
        &[
            "cohom", "--s", "1", "--seq", "1", "--m", "0", "--lambda", "2",
        ],
        &["tpq-geometry", "--p", "4", "--q", "4"],
        &[
            "classify", "--s", "2", "--b", "0,0", "--seq", "1,0", "--lambda", "2",
        ],
        &["canon", "--s", "1", "--seq", "1", "--format", "dot"],
    ] {
        let out = call(args);
        assert_eq!(out.code, EXIT_USAGE, "{args:?}");
        assert_eq!(out.stderr.lines().count(), 1, "{args:?}: {}", out.stderr);
    }
}

#[test]
fn classify_and_enumerate() {
    let v = json(&call(&[
        "classify", "--s", "1", "--b", "1", "--seq", "1", "--lambda", "1",
    ]));
    assert_eq!(v["label"], "M([1],1,1)");
    assert_eq!(v["rank"], 2);
    let v = json(&call(&["enumerate", "--s", "1", "--b", "1", "--rank", "1"]));
    assert_eq!(v["count"], 2);
    assert_eq!(v["free"], true);
    let v = json(&call(&["growth", "--s", "1", "--b", "1", "--r-max", "4"]));
    assert_eq!(
        v["counts"],
        serde_json::json!({"1": 2, "2": 5, "3": 10, "4": 23})
    );
}

#[test]
fn tpq_commands() {
    let v = json(&call(&["tpq-geometry", "--p", "3", "--q", "8"]));
    assert_eq!(
        (v["s"].clone(), v["b"].clone()),
        (2.into(), serde_json::json!([1, 0]))
    );
    let v = json(&call(&[
        "tpq-sigma",
        "--p",
        "5",
        "--q",
        "6",
        "--seq",
        "1,2,3,4,5,6",
    ]));
    assert_eq!(v["sigma"], serde_json::json!([2, 1, 6, 5, 4, 3]));
    let v = json(&call(&[
        "tpq-descend",
        "--p",
        "3",
        "--q",
        "8",
        "--seq",
        "1,0",
        "--lambda",
        "-1",
    ]));
    assert_eq!(
        v["images"],
        serde_json::json!(["N1([1,0],1,-1)", "N2([1,0],1,-1)"])
    );
    let v = json(&call(&["tpq-descend", "--p", "3", "--q", "8", "--free"]));
    assert_eq!(v["images"], serde_json::json!(["A'"]));
}

#[test]
fn quiver_outputs_are_deterministic() {
    let args = [
        "quiver",
        "--s",
        "1",
        "--b",
        "1",
        "--max-rank",
        "2",
        "--depth",
        "3",
        "--lambdas",
        "1,2",
    ];
    let a = call(&args);
    assert_eq!(a, call(&args));
    assert!(a.stdout.starts_with("digraph ar_quiver {"));
    let golden = include_str!("../../core/tests/golden/cusp_b1_rank2_depth3.dot");
    assert_eq!(a.stdout, golden);

    let special = call(&[
        "tpq-quiver",
        "--p",
        "3",
        "--q",
        "8",
        "--special",
        "--depth",
        "3",
    ]);
    assert_eq!(
        special.stdout,
        include_str!("../../core/tests/golden/tpq_3_8_special_depth3.dot")
    );

    let v = json(&call(&[
        "tpq-quiver",
        "--p",
        "3",
        "--q",
        "8",
        "--format",
        "json",
        "--dimension",
        "2",
    ]));
    for key in ["nodes", "arrows", "tubes", "translate"] {
        assert!(v[key].is_array());
    }
    assert_eq!(v["decoration"]["at_free"], 2);
}

#[test]
fn batch_preserves_order_and_isolates_errors() {
    let input = [
        r#"{"cmd":"canon","s":2,"seq":[3,4,1,2]}"#,
        "not json",
        r#"{"cmd":"cohom","s":1,"seq":[2,-1],"m":1,"lambda":"3/2"}"#,
        "",
        r#"{"cmd":"classify","s":1,"b":[1],"seq":[0],"lambda":1}"#,
        r#"{"cmd":"verify","grid":"rs_max=2 entries=-1..1 m_max=1"}"#,
        r#"{"seq":[1]}"#,
    ]
    .join("\n");
    let out = call_batch(&input);
    assert_eq!(out.code, EXIT_OK);
    let lines: Vec<Value> = out
        .stdout
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0]["canonical"], serde_json::json!([1, 2, 3, 4]));
    assert_eq!(lines[1]["error"]["kind"], "usage");
    assert_eq!(lines[2]["h0"], 1);
    assert_eq!(lines[3]["error"]["kind"], "kahn_violation");
    assert_eq!(lines[4]["mismatches"], 0);
    assert_eq!(lines[5]["error"]["kind"], "usage");
}

#[test]
fn binary_round_trip() {
    let exe = env!("CARGO_BIN_EXE_cusp-cm");
    let out = Command::new(exe)
        .args([
            "cohom", "--s", "1", "--seq", "2,-1", "--m", "1", "--lambda", "3/2",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "{\"theta\":2,\"delta\":0,\"h0\":1,\"h1\":0}\n"
    );

    let bad = Command::new(exe)
        .args(["canon", "--s", "1", "--seq", "a"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));

    let mut child = Command::new(exe)
        .arg("--batch")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(
            b"{\"cmd\":\"canon\",\"s\":1,\"seq\":[2,1]}\n{\"cmd\":\"canon\",\"s\":1,\"seq\":[]}\n",
        )
        .unwrap();
    let out = child.wait_with_output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "{\"canonical\":[1,2],\"aperiodic\":true}");
    assert!(lines[1].contains("\"error\""));
}
