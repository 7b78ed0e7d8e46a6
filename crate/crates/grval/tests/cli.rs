//! End-to-end tests of the command-line interface against the gallery
//! files: exit codes, output shapes, JSON round-trips, determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn gallery(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../gallery")
        .join(name);
    p.to_str().expect("utf-8 path").to_string()
}

fn grval(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grval"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(out)).expect("stdout is JSON")
}

#[test]
fn check_pbw_exit_codes() {
    let ok = grval(&["check-pbw", &gallery("weyl1.spec")]);
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
    assert!(stdout(&ok).contains("PASS"));

    let fail = grval(&["check-pbw", &gallery("broken-sl2.spec")]);
    assert_eq!(fail.status.code(), Some(1));
    let text = stdout(&fail);
    assert!(text.contains("FAIL"));
    assert!(text.contains("h*f*e"), "witness missing: {text}");

    let dir = tempdir();
    let bad = dir.join("bad.spec");
    std::fs::write(&bad, "[field]\nkind = \n").unwrap();
    let err = grval(&["check-pbw", bad.to_str().unwrap()]);
    assert_eq!(err.status.code(), Some(2));
    assert!(stderr(&err).contains("line 2"));
}

#[test]
fn check_pbw_weyl2_and_jordan_pass() {
    for file in ["weyl2.spec", "jordan.spec", "qplane-t.spec", "sl2.spec"] {
        let out = grval(&["check-pbw", &gallery(file)]);
        assert_eq!(out.status.code(), Some(0), "{file}: {}", stderr(&out));
    }
}

#[test]
fn val_symbol_nf_outputs() {
    let spec = gallery("weyl1.spec");
    let val = grval(&["val", &spec, "2*x + 4*D"]);
    assert_eq!(stdout(&val).trim(), "1");

    let val0 = grval(&["val", &spec, "0"]);
    assert_eq!(stdout(&val0).trim(), "infinity");

    let sym = grval(&["symbol", &spec, "2*x + 4*D"]);
    let text = stdout(&sym);
    assert!(text.contains("degree -1"), "{text}");
    assert!(text.contains("residue x"), "{text}");

    let nf = grval(&["nf", &spec, "D*x"]);
    assert_eq!(stdout(&nf).trim(), "x*D + 1");

    // symbol of zero is an input error
    let zero = grval(&["symbol", &spec, "0"]);
    assert_eq!(zero.status.code(), Some(2));

    // unknown generator is reported with a position
    let unk = grval(&["nf", &spec, "x*q"]);
    assert_eq!(unk.status.code(), Some(2));
    assert!(stderr(&unk).contains("unknown generator"));
}

#[test]
fn val_json_round_trip() {
    let out = grval(&["val", &gallery("weyl1.spec"), "2*x + 4*D", "--json"]);
    let v = json(&out);
    assert_eq!(v["format_version"], 1);
    assert_eq!(v["valuation"], 1);
    let out = grval(&["val", &gallery("weyl1.spec"), "0", "--json"]);
    assert_eq!(json(&out)["valuation"], "infinity");
}

#[test]
fn hilbert_modes() {
    let graded = grval(&["hilbert", &gallery("commutative.spec"), "--max-degree", "4"]);
    assert_eq!(stdout(&graded).trim(), "1 2 3 4 5");

    let free = grval(&["hilbert", &gallery("free2.spec"), "--max-degree", "3"]);
    assert_eq!(stdout(&free).trim(), "1 2 4 8");

    let filtered = grval(&[
        "hilbert",
        &gallery("weyl1.spec"),
        "--max-degree",
        "3",
        "--mode",
        "filtered",
    ]);
    assert_eq!(stdout(&filtered).trim(), "1 3 6 10");

    // graded mode on the (nonhomogeneous) Weyl relations is an input error
    let bad = grval(&["hilbert", &gallery("weyl1.spec"), "--max-degree", "3"]);
    assert_eq!(bad.status.code(), Some(2));

    // filtered mode needs a confluent pbw spec
    let bad = grval(&[
        "hilbert",
        &gallery("broken-sl2.spec"),
        "--max-degree",
        "3",
        "--mode",
        "filtered",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn good_reduction_verdicts() {
    let good = grval(&[
        "good-reduction",
        &gallery("qplane-p2.spec"),
        "--max-degree",
        "6",
        "--json",
    ]);
    assert_eq!(good.status.code(), Some(0));
    let v = json(&good);
    assert_eq!(v["verdict"]["kind"], "good_reduction");
    assert_eq!(v["graded_reductor"], true);
    let dims: Vec<u64> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["dim_base"].as_u64().unwrap())
        .collect();
    assert_eq!(dims, vec![1, 2, 3, 4, 5, 6, 7]);

    let fail = grval(&[
        "good-reduction",
        &gallery("reduction-fail.spec"),
        "--max-degree",
        "2",
        "--json",
    ]);
    assert_eq!(fail.status.code(), Some(1));
    let v = json(&fail);
    assert_eq!(v["verdict"]["kind"], "fails_at_degree");
    assert_eq!(v["verdict"]["degree"], 2);
    assert_eq!(v["rows"][2]["dim_base"], 2);
    assert_eq!(v["rows"][2]["dim_residue"], 3);

    // an integer commutator relation reduces to itself
    let comm = grval(&[
        "good-reduction",
        &gallery("commutative.spec"),
        "--max-degree",
        "4",
    ]);
    assert_eq!(comm.status.code(), Some(0));
    assert!(stdout(&comm).contains("good reduction up to degree 4"));
}

#[test]
fn graded_check_tables() {
    let weyl = grval(&[
        "graded-check",
        &gallery("weyl1.spec"),
        "--max-degree",
        "6",
        "--json",
    ]);
    assert_eq!(weyl.status.code(), Some(0));
    assert_eq!(json(&weyl)["all_equal"], true);

    let sl2 = grval(&[
        "graded-check",
        &gallery("sl2.spec"),
        "--max-degree",
        "5",
        "--json",
    ]);
    assert_eq!(sl2.status.code(), Some(0));
    assert_eq!(json(&sl2)["all_equal"], true);
}

#[test]
fn lie_reduce_json_constants() {
    let out = grval(&["lie-reduce", &gallery("sl2.json"), "--p", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["scale_exponent"], 0);
    assert_eq!(v["jacobi_reduced"], true);
    assert_eq!(
        v["reduced_constants"][0][1],
        serde_json::json!(["0", "0", "1"])
    );
    assert_eq!(
        v["reduced_constants"][2][0],
        serde_json::json!(["0", "0", "0"])
    );
    assert_eq!(
        v["reduced_constants"][2][1],
        serde_json::json!(["0", "0", "0"])
    );

    let p5 = grval(&["lie-reduce", &gallery("sl2.json"), "--p", "5", "--json"]);
    let v = json(&p5);
    assert_eq!(
        v["reduced_constants"][2][0],
        serde_json::json!(["2", "0", "0"])
    );
    assert_eq!(
        v["reduced_constants"][2][1],
        serde_json::json!(["0", "3", "0"])
    );

    // rescaling example: [a,b] = (1/2) a at p = 2
    let scaled = grval(&["lie-reduce", &gallery("scaled.json"), "--p", "2", "--json"]);
    let v = json(&scaled);
    assert_eq!(v["scale_exponent"], 1);
    assert_eq!(v["reduced_constants"][0][1], serde_json::json!(["1", "0"]));

    // broken constants are rejected as input error
    let broken = grval(&["lie-reduce", &gallery("broken-sl2.json"), "--p", "2"]);
    assert_eq!(broken.status.code(), Some(2));
    assert!(stderr(&broken).contains("Jacobi"));
}

#[test]
fn lie_reduce_emits_checkable_spec() {
    let dir = tempdir();
    let emitted = dir.join("envel.spec");
    let out = grval(&[
        "lie-reduce",
        &gallery("sl2.json"),
        "--p",
        "2",
        "--emit-spec",
        emitted.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let check = grval(&["check-pbw", emitted.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(0), "{}", stderr(&check));

    // the spec-file route with a [lie] section agrees with the JSON route
    let via_spec = grval(&["lie-reduce", &gallery("sl2.spec"), "--json"]);
    assert_eq!(via_spec.status.code(), Some(0), "{}", stderr(&via_spec));
    let via_json = grval(&["lie-reduce", &gallery("sl2.json"), "--p", "2", "--json"]);
    assert_eq!(
        json(&via_spec)["reduced_constants"],
        json(&via_json)["reduced_constants"]
    );

    // --p conflicts with a spec file's own field
    let conflict = grval(&["lie-reduce", &gallery("sl2.spec"), "--p", "3"]);
    assert_eq!(conflict.status.code(), Some(2));
}

#[test]
fn props_reports() {
    let ok = grval(&[
        "props",
        &gallery("weyl1.spec"),
        "--samples",
        "60",
        "--seed",
        "11",
        "--json",
    ]);
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
    let v = json(&ok);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
    assert_eq!(v["double_graded"]["all_equal"], true);
    assert_eq!(v["pass"], true);
    assert_eq!(v["seed"], 11);

    // empty run passes vacuously
    let empty = grval(&["props", &gallery("weyl1.spec"), "--samples", "0", "--json"]);
    assert_eq!(empty.status.code(), Some(0));
    assert_eq!(json(&empty)["failures"].as_array().unwrap().len(), 0);

    // engineered zero-divisor reduction lists DomainFailure witnesses
    let bad = grval(&[
        "props",
        &gallery("zero-divisor.spec"),
        "--samples",
        "40",
        "--seed",
        "7",
        "--json",
    ]);
    assert_eq!(bad.status.code(), Some(1));
    let v = json(&bad);
    let failures = v["failures"].as_array().unwrap();
    assert!(!failures.is_empty());
    assert!(failures
        .iter()
        .any(|f| f["got"] == "DomainFailure" && f["check"] == "symbol"));
}

#[test]
fn props_failure_witnesses_reparse() {
    // polynomials in failure records are valid expressions
    let bad = grval(&[
        "props",
        &gallery("zero-divisor.spec"),
        "--samples",
        "40",
        "--seed",
        "7",
        "--json",
    ]);
    let v = json(&bad);
    for f in v["failures"].as_array().unwrap() {
        for key in ["a", "b"] {
            let expr = f[key].as_str().unwrap();
            if expr.starts_with("gamma=") {
                continue;
            }
            let out = grval(&["nf", &gallery("zero-divisor.spec"), expr]);
            assert_eq!(out.status.code(), Some(0), "expr {expr:?}");
        }
    }
}

#[test]
fn lattice_subcommands() {
    let basis = grval(&[
        "lattice",
        "basis",
        "--p",
        "2",
        "--input",
        &gallery("lattice-basis.json"),
    ]);
    assert_eq!(basis.status.code(), Some(0), "{}", stderr(&basis));
    let v = json(&basis);
    assert_eq!(v["rank"], 2);
    assert_eq!(v["basis"][0], serde_json::json!(["1/2", "1/2"]));

    let div = grval(&[
        "lattice",
        "divisors",
        "--p",
        "2",
        "--input",
        &gallery("lattice-divisors.json"),
    ]);
    assert_eq!(json(&div)["divisors"], serde_json::json!([1, 3]));

    let int = grval(&[
        "lattice",
        "intersect",
        "--p",
        "2",
        "--input",
        &gallery("lattice-intersect.json"),
    ]);
    assert_eq!(json(&int)["basis"], serde_json::json!([["1/2", "1/2"]]));

    let red = grval(&[
        "lattice",
        "reduce",
        "--p",
        "2",
        "--input",
        &gallery("lattice-basis.json"),
    ]);
    let v = json(&red);
    assert_eq!(v["dim"], 2);
    assert_eq!(v["unramified"], true);

    // missing field flags are an input error
    let nofield = grval(&[
        "lattice",
        "basis",
        "--input",
        &gallery("lattice-basis.json"),
    ]);
    assert_eq!(nofield.status.code(), Some(2));

    // t-adic lattices work through the same entry point
    let dir = tempdir();
    let input = dir.join("t.json");
    std::fs::write(&input, r#"{ "vectors": [["t", "0"], ["0", "1/t"]] }"#).unwrap();
    let t = grval(&[
        "lattice",
        "basis",
        "--t-adic",
        "--q",
        "3",
        "--input",
        input.to_str().unwrap(),
    ]);
    assert_eq!(t.status.code(), Some(0), "{}", stderr(&t));
    assert_eq!(json(&t)["rank"], 2);
}

#[test]
fn reports_round_trip_through_serde() {
    // the library report types deserialize back to equal values
    use grval::reduction::ReductionReport;
    use grval::valfilt::ValueFunctionReport;

    let good = grval(&[
        "good-reduction",
        &gallery("qplane-p2.spec"),
        "--max-degree",
        "4",
        "--json",
    ]);
    let v = json(&good);
    // strip the CLI envelope down to the embedded report fields
    let report_json = serde_json::json!({
        "max_degree": v["max_degree"],
        "rows": v["rows"],
        "verdict": v["verdict"],
        "graded_reductor": v["graded_reductor"],
    });
    let report: ReductionReport = serde_json::from_value(report_json.clone()).unwrap();
    let back = serde_json::to_value(&report).unwrap();
    assert_eq!(back, report_json);

    // a value-function report round-trips exactly
    let sample = ValueFunctionReport {
        format_version: 1,
        field: "Q with the 2-adic valuation".into(),
        algebra: "PBW algebra on x, D".into(),
        checks: 9,
        samples: 3,
        seed: 5,
        height: 10,
        max_degree: 4,
        failures: vec![],
    };
    let text = serde_json::to_string(&sample).unwrap();
    let parsed: ValueFunctionReport = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed, sample);
}

fn tempdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "grval-test-{}-{}",
        std::process::id(),
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .unwrap()
            .as_nanos()
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
