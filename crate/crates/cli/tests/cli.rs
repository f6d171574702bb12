use std::process::{Command, Output};

use serde_json::Value;

fn engel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_engel"))
        .args(args)
        .env_remove("ENGEL_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = engel(args);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    stdout(&o)
}

#[test]
fn k0_has_twelve_digits() {
    let s = ok(&["k0"]);
    assert_eq!(s.trim(), "0.908908557549");
    let js: Value = serde_json::from_str(&ok(&["k0", "--format", "json"])).unwrap();
    assert!((js["k0"].as_f64().unwrap() - 0.9089085575485).abs() < 1e-12);
}

#[test]
fn cut_time_of_a_circle() {
    // t_cut = 2π/|c| on C₆
    let s = ok(&["cut-time", "--theta", "0", "--c", "4", "--alpha", "0"]);
    let mut it = s.split_whitespace();
    let t: f64 = it.next().unwrap().parse().unwrap();
    assert!((t - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    assert_eq!(it.next(), Some("C6"));
    let js: Value = serde_json::from_str(&ok(&[
        "cut-time", "--theta", "0.3", "--c", "-0.2", "--alpha", "-1", "--format", "json",
    ]))
    .unwrap();
    assert_eq!(js["class"], "C1");
    assert!(js["k"].as_f64().unwrap() < 1.0);
}

#[test]
fn infinite_cut_time_is_null_in_json() {
    let js: Value = serde_json::from_str(&ok(&[
        "cut-time", "--theta", "0", "--c", "0", "--alpha", "0", "--format", "json",
    ]))
    .unwrap();
    assert!(js["t_cut"].is_null());
    let s = ok(&["cut-time", "--theta", "0", "--c", "0", "--alpha", "0"]);
    assert!(s.starts_with("inf "), "{s}");
}

#[test]
fn classify_labels_the_reference_points() {
    let cases = [
        (["0", "1", "0", "0"], "A+ 1"),
        (["0", "1", "0", "1"], "I0x+ 2"),
        (["0", "0", "0", "1"], "E+ family"),
        (["1", "1", "1", "1"], "Generic 1"),
        (["0", "0", "1", "0"], "Nx^+(C) 2"),
    ];
    for (p, want) in cases {
        let mut args = vec!["classify"];
        args.extend(p);
        assert_eq!(ok(&args).trim(), want, "{p:?}");
    }
    let flags = ok(&["classify", "--x", "0", "--y", "-1", "--z", "0", "--w", "0"]);
    assert_eq!(flags.trim(), "A- 1");
}

#[test]
fn synthesize_returns_both_minimizers() {
    let js: Value = serde_json::from_str(&ok(&["synthesize", "0", "1", "0", "1"])).unwrap();
    assert_eq!(js["multiplicity"], "Two");
    let ms = js["minimizers"].as_array().unwrap();
    assert_eq!(ms.len(), 2);
    for m in ms {
        assert!(m["residual"].as_f64().unwrap() <= 1e-6);
        assert_eq!(m["time"], ms[0]["time"]);
    }
    let fam: Value = serde_json::from_str(&ok(&[
        "synthesize",
        "--x",
        "0",
        "--y",
        "0",
        "--z",
        "0",
        "--w",
        "-2",
        "--family-samples",
        "8",
    ]))
    .unwrap();
    assert_eq!(fam["minimizers"].as_array().unwrap().len(), 8);
    assert!(fam["family"]["sigma"].as_f64().unwrap() < 0.0);
}

#[test]
fn geodesic_csv_and_json_agree() {
    let args = [
        "geodesic",
        "--theta",
        "0.4",
        "--c",
        "-1",
        "--alpha",
        "0.5",
        "--t",
        "3",
        "--samples",
        "11",
    ];
    let csv = ok(&args);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "t,x,y,z,w,theta,c");
    assert_eq!(lines.len(), 12);
    let last: Vec<f64> = lines[11].split(',').map(|v| v.parse().unwrap()).collect();

    let mut jargs = args.to_vec();
    jargs.extend(["--format", "json"]);
    let js: Value = serde_json::from_str(&ok(&jargs)).unwrap();
    let zw = js["zw"].as_array().unwrap();
    assert_eq!(zw.len(), 11);
    assert_eq!(zw[10][0].as_f64().unwrap(), last[3]);
    assert_eq!(js["xy"][10][1].as_f64().unwrap(), last[2]);
}

#[test]
fn curves_export_has_a_header_and_the_grid() {
    for (which, head) in [
        ("w1", "k,Y,W"),
        ("w21", "k,Y,W"),
        ("w22", "k,Y,W"),
        ("fix3", "p,Y,W"),
    ] {
        let s = ok(&["curves", "--which", which, "--grid", "9"]);
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], head);
        assert_eq!(lines.len(), 10, "{which}");
        for l in &lines[1..] {
            assert!(l.split(',').all(|v| v.parse::<f64>().unwrap().is_finite()));
        }
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        &["synthesize", "0.3", "-0.8", "0.4", "0.1"][..],
        &[
            "geodesic", "--theta", "1", "--c", "0.2", "--alpha", "-2", "--t", "5",
        ],
        &["curves", "--which", "w22", "--grid", "50"],
        &["selftest", "--only", "1,6,7"],
    ] {
        assert_eq!(engel(args).stdout, engel(args).stdout, "{args:?}");
    }
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["nonsense"][..],
        &["classify", "0", "0", "1"],
        &["classify", "--x", "1"],
        &["cut-time", "--theta", "0"],
        &["curves", "--which", "w3"],
        &["k0", "--eps-class", "0"],
        &["synthesize", "1", "1", "1", "1", "--tol", "-1"],
        &[
            "geodesic",
            "--theta",
            "0",
            "--c",
            "1",
            "--alpha",
            "0",
            "--t",
            "1",
            "--samples",
            "1",
        ],
        &["selftest", "--only", "13"],
        &["k0", "--config", "/nonexistent/engel.toml"],
    ] {
        let o = engel(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
    assert_eq!(engel(&["--help"]).status.code(), Some(0));
}

#[test]
fn numeric_failures_exit_1() {
    let o = engel(&["synthesize", "0", "0", "0", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    let o = engel(&["classify", "nan", "0", "0", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn config_file_then_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("engel.toml");
    std::fs::write(&path, "format = \"json\"\ncurve_grid = 4\n").unwrap();
    let p = path.to_str().unwrap();

    let s = ok(&["curves", "--which", "w1", "--config", p]);
    let js: Value = serde_json::from_str(&s).unwrap();
    assert_eq!(js["rows"].as_array().unwrap().len(), 4);
    // flags override the file
    let s = ok(&[
        "curves", "--which", "w1", "--config", p, "--format", "csv", "--grid", "3",
    ]);
    assert_eq!(s.lines().count(), 4);

    // the environment variable stands in for --config
    let o = Command::new(env!("CARGO_BIN_EXE_engel"))
        .args(["k0"])
        .env("ENGEL_CONFIG", &path)
        .output()
        .unwrap();
    assert!(String::from_utf8(o.stdout).unwrap().contains("\"k0\""));

    std::fs::write(&path, "tolerance = 1\n").unwrap();
    assert_eq!(engel(&["k0", "--config", p]).status.code(), Some(2));
}

#[test]
fn selftest_prints_config_and_one_line_per_criterion() {
    let s = ok(&["selftest", "--only", "1,2,6,7,12"]);
    assert!(s.starts_with("# configuration\n"));
    assert!(s.contains("# tol = "));
    let lines: Vec<&str> = s.lines().filter(|l| l.starts_with("criterion")).collect();
    assert_eq!(lines.len(), 5);
    assert!(lines.iter().all(|l| l.contains(" PASS ")), "{s}");
    assert!(s.ends_with("5 of 5 criteria passed\n"));
}
