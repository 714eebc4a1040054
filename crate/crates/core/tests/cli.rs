use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mmsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mmsp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// CSV rows as (header, records).
fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn col(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

const KEYSTONE: [&str; 8] = ["--v0", "1", "--a", "0.3", "--b", "0.2", "--alpha", "1"];
const DEEP: [&str; 8] = ["--v0", "400", "--a", "1", "--b", "-0.97", "--alpha", "1"];

fn args<'a>(head: &[&'a str], rest: &[&'a str]) -> Vec<&'a str> {
    head.iter().chain(rest).copied().collect()
}

#[test]
fn spectrum_csv_shape() {
    let text = stdout(&mmsp(&args(
        &["spectrum"],
        &args(&KEYSTONE, &["--l", "0", "--n-max", "1", "--scheme", "both", "--format", "csv"]),
    )));
    assert!(text.ends_with('\n') && !text.contains('\r'));
    let (header, rows) = parse_csv(&text);
    assert_eq!(header.join(","), "n,l,scheme,energy,chi,s_exponent,valid");
    assert_eq!(rows.len(), 4);
    let e = col(&header, "energy");
    assert_eq!(rows[0][e], rows[1][e]);
    assert_eq!(rows[2][e], rows[3][e]);
    assert_eq!(rows[0][2], "greene-aldrich");
    assert_eq!(rows[1][2], "pekeris");
}

#[test]
fn spectrum_json_matches_csv() {
    let base = args(&["spectrum"], &args(&DEEP, &["--l", "0", "--l", "2", "--n-max", "4"]));
    let csv = stdout(&mmsp(&args(&base, &["--format", "csv"])));
    let json = stdout(&mmsp(&args(&base, &["--format", "json"])));
    let (header, rows) = parse_csv(&csv);
    let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
    let records = parsed.as_array().unwrap();
    assert_eq!(records.len(), rows.len());
    for (row, rec) in rows.iter().zip(records) {
        let obj = rec.as_object().unwrap();
        assert_eq!(obj.len(), header.len());
        for (name, field) in header.iter().zip(row) {
            let v = &obj[name.as_str()];
            let rendered = match v {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Null => String::new(),
                other => other.to_string(),
            };
            if v.is_f64() {
                assert_eq!(v.as_f64().unwrap().to_bits(), field.parse::<f64>().unwrap().to_bits());
                assert!(json.contains(&format!("\"{name}\": {field}")));
            } else {
                assert_eq!(&rendered, field);
            }
        }
    }
}

#[test]
fn emitted_valid_levels_satisfy_spectrum_invariants() {
    let text = stdout(&mmsp(&args(&["spectrum"], &args(&DEEP, &["--l", "0", "--l", "1", "--n-max", "6"]))));
    let (header, rows) = parse_csv(&text);
    let (n, l, s, e, v) = (col(&header, "n"), col(&header, "l"), col(&header, "scheme"), col(&header, "energy"), col(&header, "valid"));
    let asymptote = -400.0;
    let mut last: std::collections::HashMap<(String, String), f64> = Default::default();
    let mut valid_rows = 0;
    for row in &rows {
        let energy: f64 = row[e].parse().unwrap();
        assert!(energy.is_finite());
        if row[v] != "true" {
            continue;
        }
        valid_rows += 1;
        if row[l] == "0" {
            assert!(energy < asymptote);
        }
        let key = (row[l].clone(), row[s].clone());
        if let Some(prev) = last.insert(key, energy) {
            assert!(energy > prev, "n={} not above previous level", row[n]);
        }
    }
    assert!(valid_rows >= 6);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for cmd in ["spectrum", "compare"] {
        let mut outputs = Vec::new();
        for i in 0..2 {
            let path = dir.path().join(format!("{cmd}{i}.json"));
            let full = args(&[cmd], &args(&DEEP, &["--n-max", "2", "--format", "json", "--grid-points", "2000", "--out", path.to_str().unwrap()]));
            assert_eq!(mmsp(&full).status.code(), Some(0));
            outputs.push(fs::read(&path).unwrap());
        }
        assert_eq!(outputs[0], outputs[1], "{cmd}");
    }
}

#[test]
fn supercritical_exits_two_and_leaves_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let out = mmsp(&["spectrum", "--v0", "10", "--a", "0.3", "--b", "0.2", "--alpha", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("fall to center"));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn compare_on_binding_set() {
    let text = stdout(&mmsp(&["compare", "--v0", "4", "--a", "2", "--b", "-1.8", "--alpha", "1", "--n-max", "0"]));
    let (header, rows) = parse_csv(&text);
    assert_eq!(header.join(","), "n,l,scheme,e_closed,e_oracle,abs_err,rel_err,conv_gap");
    assert_eq!(rows.len(), 2);
    for row in rows {
        let abs_err: f64 = row[col(&header, "abs_err")].parse().unwrap();
        assert!(abs_err <= 1e-3);
    }
}

fn rel_err_l1(alpha: &str, r_max: &str) -> Vec<f64> {
    let text = stdout(&mmsp(&[
        "compare", "--v0", "1", "--a", "1", "--b", "-0.9", "--alpha", alpha, "--l", "1", "--n-max", "0",
        "--grid-points", "8000", "--r-max", r_max,
    ]));
    let (header, rows) = parse_csv(&text);
    rows.iter().map(|r| r[col(&header, "rel_err")].parse().unwrap()).collect()
}

#[test]
fn compare_trend_in_alpha() {
    // r_max = 20 / (alpha u) with u the s exponent of the level
    let coarse = rel_err_l1("0.1", "118");
    let fine = rel_err_l1("0.05", "21.6");
    assert_eq!(coarse.len(), 2);
    for (c, f) in coarse.iter().zip(&fine) {
        assert!(f < c, "{f} !< {c}");
    }
}

#[test]
fn compare_without_binding_exits_three() {
    let out = mmsp(&["compare", "--v0", "0", "--a", "2", "--b", "-1.8", "--alpha", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no binding"));
}

#[test]
fn sweep_row_count() {
    let text = stdout(&mmsp(&[
        "sweep", "--v0", "1", "--a", "0.3", "--b", "0.2", "--axis", "alpha", "--from", "0.5", "--to", "1.0",
        "--steps", "2", "--n-max", "0",
    ]));
    let (header, rows) = parse_csv(&text);
    assert_eq!(header.join(","), "axis_value,n,l,scheme,energy,valid");
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0][0], "0.5");
    assert_eq!(rows[3][0], "1");
}

#[test]
fn sweep_across_supercritical_threshold() {
    // threshold V0 = 2 alpha^2 (1/4) / (mu (A+B)^2) with A+B = 0.2
    let threshold = 0.5 / 0.04;
    let text = stdout(&mmsp(&[
        "sweep", "--a", "2", "--b", "-1.8", "--alpha", "1", "--axis", "v0", "--from", "10", "--to", "15",
        "--steps", "11", "--n-max", "0", "--format", "csv",
    ]));
    assert!(!text.to_lowercase().contains("nan") && !text.to_lowercase().contains("inf"));
    let (_, rows) = parse_csv(&text);
    for row in rows {
        let v0: f64 = row[0].parse().unwrap();
        assert_eq!(row[5] == "true", v0 <= threshold, "{row:?}");
        assert_eq!(row[4].is_empty(), row[5] == "false");
    }
}

#[test]
fn usage_errors_exit_64() {
    let cases: [&[&str]; 5] = [
        &["sweep", "--v0", "1", "--a", "0.3", "--b", "0.2", "--axis", "alpha", "--from", "0.5", "--to", "1", "--steps", "1"],
        &["sweep", "--v0", "1", "--a", "0.3", "--b", "0.2", "--axis", "alpha", "--from", "0.5", "--to", "0.5", "--steps", "3"],
        &["spectrum", "--v0", "1", "--a", "0.3", "--b", "0.2", "--alpha", "1", "--bogus"],
        &["spectrum", "--v0", "1", "--a", "0.3", "--b", "0.2"],
        &["spectrum", "--v0", "1", "--a", "0.3", "--b", "0.2", "--alpha", "1", "--format", "xml"],
    ];
    for case in cases {
        assert_eq!(mmsp(case).status.code(), Some(64), "{case:?}");
    }
    assert_eq!(mmsp(&["--help"]).status.code(), Some(0));
    assert_eq!(mmsp(&["--version"]).status.code(), Some(0));
}

#[test]
fn unwritable_output_exits_74() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.csv");
    let out = mmsp(&args(&["spectrum"], &args(&KEYSTONE, &["--out", path.to_str().unwrap()])));
    assert_eq!(out.status.code(), Some(74));
    assert!(!Path::new(&path).exists());
}

#[test]
fn presets_load_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("presets.ini");
    fs::write(&file, "# shallow and deep wells\n[deep]\nv0 = 400\na_coef = 1\nb_coef = -0.97\nalpha = 1\n\n[half-mass]\nv0 = 400\na_coef = 1\nb_coef = -0.97\nalpha = 1\nmu = 0.5\n").unwrap();
    let f = file.to_str().unwrap();
    let from_preset = stdout(&mmsp(&["spectrum", "--preset", "deep", "--preset-file", f]));
    let from_flags = stdout(&mmsp(&args(&["spectrum"], &DEEP)));
    assert_eq!(from_preset, from_flags);

    let overridden = stdout(&mmsp(&["spectrum", "--preset", "half-mass", "--preset-file", f, "--mu", "1"]));
    assert_eq!(overridden, from_flags);
    let half = stdout(&mmsp(&["spectrum", "--preset", "half-mass", "--preset-file", f]));
    assert_ne!(half, from_flags);

    assert_eq!(mmsp(&["spectrum", "--preset", "nope", "--preset-file", f]).status.code(), Some(64));
    assert_eq!(mmsp(&["spectrum", "--preset", "deep"]).status.code(), Some(64));
    let missing = dir.path().join("none.ini");
    assert_eq!(
        mmsp(&["spectrum", "--preset", "deep", "--preset-file", missing.to_str().unwrap()]).status.code(),
        Some(74)
    );
}
