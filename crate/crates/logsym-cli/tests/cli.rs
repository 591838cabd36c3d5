use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn model(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../models")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logsym"))
        .args(args)
        .output()
        .expect("logsym runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn poisson_cohomology_table_for_the_three_divisor_four_torus() {
    let out = run(&["poisson-cohomology", &model("t4_section3.json")]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    for row in ["0\t1", "1\t10", "2\t40", "3\t70", "4\t39"] {
        assert!(
            text.lines().any(|l| l == row),
            "missing row {row:?} in:\n{text}"
        );
    }
}

#[test]
fn single_z_type_divisor_adds_one_shifted_copy_of_the_hypersurface() {
    // T^2 with one z-type divisor: no pairs, so the log part is the whole answer
    let out = run(&["poisson-cohomology", &model("t2_single.json")]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&run(&[
        "poisson-cohomology",
        &model("t2_single.json"),
        "--format",
        "json",
    ])))
    .unwrap();
    assert_eq!(v["total"], serde_json::json!([1, 4, 3]));
    assert_eq!(v["log_part"], v["total"]);
    assert_eq!(v["summands"].as_array().unwrap().len(), 0);
}

#[test]
fn json_reports_validate_against_the_published_schema() {
    let schema: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/schema.json"),
        )
        .unwrap(),
    )
    .unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");

    let matrix: &[(&str, &str)] = &[
        ("b-cohomology", "t4_section3.json"),
        ("decompose", "t4_section3.json"),
        ("check-partitionable", "t4_section3.json"),
        ("partition", "t4_section3.json"),
        ("poisson-cohomology", "t4_section3.json"),
        ("verify-symplectic", "t4_omega1.json"),
        ("verify-symplectic", "t4_omega3.json"),
        ("cosymplectic", "t2_cosym_good.json"),
        ("cosymplectic", "t2_cosym_bad.json"),
        ("cosymplectic", "t4_omega2.json"),
        ("oracle", "t2_single.json"),
        ("check-partitionable", "t4_cond1_violation.json"),
        ("check-partitionable", "t4_omega3.json"),
        ("b-cohomology", "t6_product.json"),
        ("b-cohomology", "t4_custom.json"),
        ("all", "t2_single.json"),
        ("all", "t4_omega3.json"),
    ];
    for (cmd, file) in matrix {
        let out = run(&[cmd, &model(file), "--format", "json"]);
        let text = stdout(&out);
        let instance: serde_json::Value = serde_json::from_str(&text)
            .unwrap_or_else(|e| panic!("{cmd} {file}: output is not JSON ({e}):\n{text}"));
        let errors: Vec<String> = validator
            .iter_errors(&instance)
            .map(|e| format!("{} at {}", e, e.instance_path))
            .collect();
        assert!(errors.is_empty(), "{cmd} {file}: {}", errors.join("; "));
    }
}

#[test]
fn shipped_model_files_validate_against_the_published_schema() {
    let schema: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/schema.json"),
        )
        .unwrap(),
    )
    .unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models");
    let mut seen = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        seen += 1;
        let instance: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        let errors: Vec<String> = validator
            .iter_errors(&instance)
            .map(|e| format!("{} at {}", e, e.instance_path))
            .collect();
        assert!(
            errors.is_empty(),
            "{}: {}",
            path.display(),
            errors.join("; ")
        );
    }
    assert!(seen >= 10, "expected the full model catalog, found {seen}");
}

#[test]
fn exit_zero_on_success() {
    let out = run(&["verify-symplectic", &model("t4_omega1.json")]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn exit_one_on_input_errors() {
    let out = run(&["b-cohomology", "/nonexistent/model.json"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).starts_with("error:"), "{}", stderr(&out));

    // a usage error is an input error, not a failed check
    let out = run(&["no-such-command", &model("t2_single.json")]);
    assert_eq!(code(&out), 1);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(
        &bad,
        r#"{"model": "torus", "dimension": 2, "coordinates": ["x", "y"],
           "omega": "dx/sin(y)^dy"}"#,
    )
    .unwrap();
    let out = run(&["verify-symplectic", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(
        stderr(&out).contains("pole coordinate mismatch"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn exit_two_on_failed_checks_with_a_structured_report() {
    let out = run(&["check-partitionable", &model("t4_omega3.json")]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).contains("not_closed"), "{}", stdout(&out));

    let out = run(&["check-partitionable", &model("t4_cond1_violation.json")]);
    assert_eq!(code(&out), 2);
    let text = stdout(&out);
    assert!(text.contains("condition (1)"), "{text}");

    // the report is still well-formed JSON under --format json
    let out = run(&[
        "check-partitionable",
        &model("t4_cond1_violation.json"),
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 2);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["partitionable"], serde_json::json!(false));
    assert_eq!(v["check_failed"], serde_json::json!(true));
}

#[test]
fn json_output_is_byte_deterministic() {
    let runs: [Vec<String>; 2] = [
        vec![
            "all".into(),
            model("t2_single.json"),
            "--format".into(),
            "json".into(),
        ],
        vec![
            "poisson-cohomology".into(),
            model("t4_section3.json"),
            "--format".into(),
            "json".into(),
        ],
    ];
    for args in runs {
        let args: Vec<&str> = args.iter().map(|s| s as &str).collect();
        let first = run(&args);
        let second = run(&args);
        assert_eq!(code(&first), code(&second));
        assert_eq!(first.stdout, second.stdout, "{args:?} output drifted");
    }
}

#[test]
fn cutoff_flag_overrides_the_oracle_settings() {
    let out = run(&[
        "oracle",
        &model("t2_single.json"),
        "--cutoff",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    for est in v["estimates"].as_array().unwrap() {
        let dims = est["dims"].as_array().unwrap();
        assert_eq!(dims.len(), 1);
        assert_eq!(dims[0][0], serde_json::json!(2));
        // a single cutoff can never certify stabilization
        assert_eq!(est["stabilized"], serde_json::Value::Null);
    }
}
