use std::path::Path;
use std::process::{Command, Output};

use rectgf_cli::record::{CheckStatus, OutputRecord, Payload, SCHEMA};

fn rectgf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rectgf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn record(args: &[&str]) -> OutputRecord {
    let out = rectgf(args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid record")
}

fn write_spec(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

/// Data rows of one `# section:` block of CSV output.
fn csv_section(text: &str, name: &str) -> Vec<Vec<String>> {
    let marker = format!("# section: {name}");
    let body: String = text
        .lines()
        .skip_while(|l| *l != marker)
        .skip(1)
        .take_while(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    csv::Reader::from_reader(body.as_bytes())
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect()
}

#[test]
fn infinite_well_levels() {
    let rec = record(&[
        "bound-states",
        "--preset",
        "infinite-well",
        "--max-states",
        "10",
    ]);
    let Payload::BoundStates(r) = rec.payload else {
        panic!("wrong payload")
    };
    assert_eq!(r.states.len(), 10);
    for s in &r.states {
        let exact = (s.n as f64 * std::f64::consts::PI).powi(2);
        assert!(
            (s.energy / exact - 1.0).abs() < 1e-12,
            "{} vs {exact}",
            s.energy
        );
        assert!(s.norm_error.abs() < 1e-8);
    }
    assert_eq!(rec.inputs.units, "natural units");
}

#[test]
fn shallow_well_has_an_empty_table() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "shallow.json",
        r#"{"units": {"hbar2_over_2m": 1.0}, "heights": [1.0, 0.0, 5.0], "breakpoints": [0.0, 0.1]}"#,
    );
    let rec = record(&["bound-states", "--spec", &spec]);
    let Payload::BoundStates(r) = rec.payload else {
        panic!("wrong payload")
    };
    assert!(r.states.is_empty());
    let csv = rectgf(&["bound-states", "--spec", &spec, "--format", "csv"]);
    assert_eq!(code(&csv), 0);
    assert!(String::from_utf8(csv.stdout)
        .unwrap()
        .ends_with("# section: states\nn,energy,parity,norm_error,pole_residual,shallow\n"));
}

#[test]
fn malformed_json_reports_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "bad.json", "{\n  \"heights\": [1.0, 0.0,\n}");
    let out = rectgf(&["bound-states", "--spec", &spec]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3, column"), "{err}");
}

#[test]
fn invalid_specs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "order.json",
        r#"{"units": {"hbar2_over_2m": 1.0}, "heights": [1.0, 0.0, 5.0], "breakpoints": [1.0, 0.5]}"#,
    );
    assert_eq!(code(&rectgf(&["bound-states", "--spec", &spec])), 2);
    assert_eq!(
        code(&rectgf(&["bound-states", "--preset", "no-such-well"])),
        2
    );
    assert_eq!(
        code(&rectgf(&[
            "bound-states",
            "--spec",
            "/nonexistent/spec.json"
        ])),
        2
    );
    assert_eq!(
        code(&rectgf(&[
            "bound-states",
            "--spec",
            &spec,
            "--preset",
            "infinite-well"
        ])),
        2
    );
}

#[test]
fn green_flags_a_sign_changing_pole() {
    let rec = record(&[
        "green",
        "--preset",
        "infinite-well",
        "--xi",
        "0.3",
        "--xf",
        "0.6",
        "--emin",
        "9.86",
        "--emax",
        "9.88",
        "--n-points",
        "41",
    ]);
    let Payload::Green(r) = rec.payload else {
        panic!("wrong payload")
    };
    assert_eq!(r.rows.len(), 41);
    let e1 = std::f64::consts::PI.powi(2);
    let flagged: Vec<_> = r.rows.iter().filter(|row| row.pole_flag != 0).collect();
    assert!(flagged
        .iter()
        .any(|row| row.pole_flag == -1 && row.energy < e1));
    assert!(flagged
        .iter()
        .any(|row| row.pole_flag == 1 && row.energy > e1));
    let far = r.rows.first().unwrap();
    assert_eq!(far.pole_flag, 0);
}

#[test]
fn green_is_finite_at_coincident_points() {
    let rec = record(&[
        "green",
        "--preset",
        "asymmetric-well",
        "--xi",
        "0.7",
        "--xf",
        "0.7",
        "--emin",
        "1",
        "--emax",
        "9",
        "--n-points",
        "17",
    ]);
    let Payload::Green(r) = rec.payload else {
        panic!("wrong payload")
    };
    assert!(r
        .rows
        .iter()
        .all(|row| row.re_g.unwrap().is_finite() && row.im_g.unwrap().is_finite()));
}

#[test]
fn free_particle_is_the_direct_term() {
    let rec = record(&[
        "green",
        "--preset",
        "free-particle",
        "--xi",
        "-0.4",
        "--xf",
        "0.9",
        "--emin",
        "0.25",
        "--emax",
        "9",
        "--n-points",
        "12",
    ]);
    let Payload::Green(r) = rec.payload else {
        panic!("wrong payload")
    };
    for row in &r.rows {
        // ħ²/2m = 1, so m/(iħ²k) = 1/(2ik).
        let k = row.energy.sqrt();
        let i = num_complex::Complex64::i();
        let expected = (i * k * 1.3).exp() / (2.0 * i * k);
        let got = num_complex::Complex64::new(row.re_g.unwrap(), row.im_g.unwrap());
        assert!((got - expected).norm() < 1e-13 * expected.norm());
    }
}

#[test]
fn green_rejects_bad_geometry() {
    let base = [
        "green",
        "--preset",
        "infinite-well",
        "--emin",
        "1",
        "--emax",
        "2",
    ];
    let inside_wall = [&base[..], &["--xi", "1.5", "--xf", "0.5"]].concat();
    assert_eq!(code(&rectgf(&inside_wall)), 2);
    let reversed = [
        "green",
        "--preset",
        "asymmetric-well",
        "--xi",
        "0.5",
        "--xf",
        "0.5",
        "--emin",
        "3",
        "--emax",
        "2",
    ];
    assert_eq!(code(&rectgf(&reversed)), 2);
}

#[test]
fn gaas_resonances_with_curve() {
    let rec = record(&[
        "resonances",
        "--preset",
        "gaas-fig7",
        "--curve",
        "--n-points",
        "3000",
    ]);
    let Payload::Resonances(r) = rec.payload else {
        panic!("wrong payload")
    };
    assert!(!r.resonances.is_empty());
    assert!(r
        .resonances
        .iter()
        .all(|p| p.energy > 0.0 && p.energy < 0.23 && p.gamma > 0.0));
    assert!(r.resonances.iter().all(|p| p.tau.unwrap() > 0.0));
    assert_eq!(r.curve.as_ref().unwrap().len(), 3000);
    let inset = r.inset.unwrap();
    assert_eq!(inset.len(), 3000);
    for row in &inset {
        assert!((row.transmission + row.reflection - 1.0).abs() < 1e-10);
    }
}

#[test]
fn expect_peaks_exit_code() {
    let args = [
        "resonances",
        "--preset",
        "gaas-fig7",
        "--emin",
        "0.30",
        "--emax",
        "0.34",
        "--n-points",
        "500",
    ];
    let out = rectgf(&args);
    assert_eq!(code(&out), 0);
    let strict = rectgf(&[&args[..], &["--expect-peaks"]].concat());
    assert_eq!(code(&strict), 4);
    // The record is still written.
    let rec: OutputRecord = serde_json::from_slice(&strict.stdout).unwrap();
    assert!(matches!(rec.payload, Payload::Resonances(ref r) if r.resonances.is_empty()));
}

#[test]
fn resonances_need_a_barrier() {
    assert_eq!(
        code(&rectgf(&["resonances", "--preset", "free-particle"])),
        2
    );
}

#[test]
fn verify_infinite_well_passes_everything() {
    let rec = record(&["verify", "--preset", "infinite-well"]);
    let Payload::Verify(v) = rec.payload else {
        panic!("wrong payload")
    };
    assert!(v.passed);
    assert_eq!(v.checks.len(), 4);
    assert!(
        v.checks.iter().all(|c| c.status == CheckStatus::Pass),
        "{:?}",
        v.checks
    );
}

#[test]
fn verify_gaas_transfer_matrix_and_path_sum() {
    let rec = record(&[
        "verify",
        "--preset",
        "gaas-fig7",
        "--suite",
        "transfer-matrix,path-sum",
    ]);
    let Payload::Verify(v) = rec.payload else {
        panic!("wrong payload")
    };
    assert_eq!(v.checks.len(), 2);
    assert!(
        v.checks.iter().all(|c| c.status == CheckStatus::Pass),
        "{:?}",
        v.checks
    );
}

#[test]
fn verify_square_and_asymmetric_wells() {
    for preset in ["square-well", "asymmetric-well"] {
        let rec = record(&["verify", "--preset", preset]);
        let Payload::Verify(v) = rec.payload else {
            panic!("wrong payload")
        };
        assert!(v.passed, "{preset}: {:?}", v.checks);
    }
}

#[test]
fn impossible_tolerance_fails_with_a_report() {
    let out = rectgf(&["verify", "--preset", "infinite-well", "--tol", "1e-30"]);
    assert_eq!(code(&out), 5);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("max error"), "{err}");
    let rec: OutputRecord = serde_json::from_slice(&out.stdout).unwrap();
    let Payload::Verify(v) = rec.payload else {
        panic!("wrong payload")
    };
    assert!(!v.passed);
    assert!(v
        .checks
        .iter()
        .all(|c| c.status == CheckStatus::Fail && c.max_error.is_some()));
}

#[test]
fn output_is_byte_deterministic() {
    for format in ["json", "csv"] {
        let args = [
            "resonances",
            "--preset",
            "gaas-fig7",
            "--curve",
            "--n-points",
            "1500",
            "--format",
            format,
        ];
        let a = rectgf(&args);
        let b = rectgf(&args);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout, "{format}");
    }
}

#[test]
fn csv_and_json_carry_the_same_numbers() {
    let args = [
        "resonances",
        "--preset",
        "gaas-fig7",
        "--curve",
        "--n-points",
        "1200",
    ];
    let rec = record(&args);
    let csv =
        String::from_utf8(rectgf(&[&args[..], &["--format", "csv"]].concat()).stdout).unwrap();
    let Payload::Resonances(r) = rec.payload else {
        panic!("wrong payload")
    };
    let num = |s: &str| s.parse::<f64>().unwrap();

    let rows = csv_section(&csv, "resonances");
    assert_eq!(rows.len(), r.resonances.len());
    for (row, p) in rows.iter().zip(&r.resonances) {
        assert_eq!(num(&row[1]).to_bits(), p.energy.to_bits());
        assert_eq!(num(&row[2]).to_bits(), p.gamma.to_bits());
        assert_eq!(num(&row[3]).to_bits(), p.tau.unwrap().to_bits());
        assert_eq!(num(&row[4]).to_bits(), p.peak_height.to_bits());
    }
    let curve = csv_section(&csv, "curve");
    for (row, c) in curve.iter().zip(r.curve.as_ref().unwrap()) {
        assert_eq!(num(&row[0]).to_bits(), c.energy.to_bits());
        assert_eq!(num(&row[1]).to_bits(), c.a_squared.to_bits());
    }
    let inset = csv_section(&csv, "inset");
    for (row, b) in inset.iter().zip(r.inset.as_ref().unwrap()) {
        assert_eq!(num(&row[1]).to_bits(), b.transmission.to_bits());
        assert_eq!(num(&row[2]).to_bits(), b.reflection.to_bits());
    }

    let green = [
        "green",
        "--preset",
        "gaas-fig7",
        "--xi",
        "120",
        "--xf",
        "850",
        "--emin",
        "0.01",
        "--emax",
        "0.3",
    ];
    let rec = record(&green);
    let csv =
        String::from_utf8(rectgf(&[&green[..], &["--format", "csv"]].concat()).stdout).unwrap();
    let Payload::Green(g) = rec.payload else {
        panic!("wrong payload")
    };
    let rows = csv_section(&csv, "rows");
    assert_eq!(rows.len(), g.rows.len());
    for (row, v) in rows.iter().zip(&g.rows) {
        assert_eq!(num(&row[0]).to_bits(), v.energy.to_bits());
        assert_eq!(num(&row[1]).to_bits(), v.re_g.unwrap().to_bits());
        assert_eq!(num(&row[2]).to_bits(), v.im_g.unwrap().to_bits());
    }
}

#[test]
fn records_round_trip() {
    let runs: [&[&str]; 4] = [
        &["bound-states", "--preset", "asymmetric-well"],
        &[
            "green",
            "--preset",
            "square-well",
            "--xi",
            "-2",
            "--xf",
            "0.5",
            "--emin",
            "1",
            "--emax",
            "30",
        ],
        &[
            "resonances",
            "--preset",
            "gaas-fig7",
            "--curve",
            "--n-points",
            "800",
        ],
        &["verify", "--preset", "square-well"],
    ];
    for args in runs {
        let out = rectgf(args);
        let rec: OutputRecord = serde_json::from_slice(&out.stdout).unwrap();
        let again = serde_json::to_vec_pretty(&rec).unwrap();
        assert_eq!([again, b"\n".to_vec()].concat(), out.stdout, "{args:?}");
        let back: OutputRecord = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(back, rec);
    }
}

#[test]
fn out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("states.csv");
    let out = rectgf(&[
        "bound-states",
        "--preset",
        "square-well",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# schema_version: 1\n# command: bound-states\n"));
    let parities: Vec<String> = csv_section(&text, "states")
        .into_iter()
        .map(|r| r[2].clone())
        .collect();
    assert_eq!(parities, ["even", "odd", "even", "odd"]);
}

#[test]
fn schema_command_prints_the_published_schema() {
    let out = rectgf(&["schema"]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), SCHEMA);
    let schema: serde_json::Value = serde_json::from_str(SCHEMA).unwrap();
    assert_eq!(schema["properties"]["schema_version"]["const"], 1);
}

/// Validates records with Python's jsonschema when it is installed.
#[test]
fn records_validate_against_the_schema() {
    let probe = Command::new("python3")
        .args(["-c", "import jsonschema"])
        .output();
    if !matches!(probe, Ok(ref o) if o.status.success()) {
        eprintln!("python3 with jsonschema not available; skipping schema validation");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let schema = dir.path().join("schema.json");
    std::fs::write(&schema, SCHEMA).unwrap();
    let runs: [&[&str]; 6] = [
        &[
            "bound-states",
            "--preset",
            "infinite-well",
            "--max-states",
            "4",
        ],
        &[
            "green",
            "--preset",
            "infinite-well",
            "--xi",
            "0.2",
            "--xf",
            "0.2",
            "--emin",
            "0",
            "--emax",
            "40",
        ],
        &[
            "green",
            "--preset",
            "gaas-fig7",
            "--xi",
            "100",
            "--xf",
            "900",
            "--emin",
            "0.01",
            "--emax",
            "0.2",
        ],
        &[
            "resonances",
            "--preset",
            "gaas-fig7",
            "--curve",
            "--n-points",
            "600",
        ],
        &["verify", "--preset", "gaas-fig7"],
        &["verify", "--preset", "infinite-well", "--tol", "1e-30"],
    ];
    let mut files = Vec::new();
    for (j, args) in runs.iter().enumerate() {
        let path = dir.path().join(format!("record{j}.json"));
        let out = rectgf(&[args, &["--out", path.to_str().unwrap()][..]].concat());
        assert!(code(&out) == 0 || code(&out) == 5);
        files.push(path.display().to_string());
    }
    let script = "import json, sys, jsonschema\n\
        schema = json.load(open(sys.argv[1]))\n\
        jsonschema.Draft202012Validator.check_schema(schema)\n\
        for f in sys.argv[2:]:\n    jsonschema.validate(json.load(open(f)), schema, cls=jsonschema.Draft202012Validator)\n";
    let out = Command::new("python3")
        .arg("-c")
        .arg(script)
        .arg(&schema)
        .args(&files)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn schema_rejects_a_wrong_version() {
    let probe = Command::new("python3")
        .args(["-c", "import jsonschema"])
        .output();
    if !matches!(probe, Ok(ref o) if o.status.success()) {
        return;
    }
    let out = rectgf(&["bound-states", "--preset", "square-well"]);
    let mut value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    value["schema_version"] = 2.into();
    let dir = tempfile::tempdir().unwrap();
    let schema = dir.path().join("schema.json");
    let doc = dir.path().join("doc.json");
    std::fs::write(&schema, SCHEMA).unwrap();
    std::fs::write(&doc, value.to_string()).unwrap();
    let script = "import json, sys, jsonschema\n\
        jsonschema.validate(json.load(open(sys.argv[2])), json.load(open(sys.argv[1])))\n";
    let out = Command::new("python3")
        .arg("-c")
        .arg(script)
        .arg(&schema)
        .arg(&doc)
        .output()
        .unwrap();
    assert!(!out.status.success());
}
