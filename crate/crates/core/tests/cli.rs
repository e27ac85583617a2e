use std::path::Path;

use sphere_facets::cli::{parse_aggregate_csv, run, CSV_HEADER};

fn sim(dir: &Path, name: &str, extra: &[&str]) -> (i32, String) {
    let out = dir.join(name);
    let mut args = vec!["sphere-facets", "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    let code = run(args);
    (code, std::fs::read_to_string(&out).unwrap_or_default())
}

#[test]
fn simulate_is_byte_identical_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["simulate", "--n", "2", "--N", "100", "--trials", "1000", "--seed", "7"];
    let (c1, a) = sim(dir.path(), "a.csv", &args);
    let (c2, b) = sim(dir.path(), "b.csv", &args);
    let mut eight = vec!["--threads", "8"];
    eight.extend_from_slice(&args);
    let (c3, c) = sim(dir.path(), "c.csv", &eight);
    assert_eq!((c1, c2, c3), (0, 0, 0));
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn simulate_writes_metadata_and_exact_header() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = sim(dir.path(), "a.csv", &["simulate", "--n", "2,3", "--N", "40,80", "--trials", "50", "--seed", "3"]);
    assert_eq!(code, 0);
    let comments: Vec<&str> = text.lines().filter(|l| l.starts_with('#')).collect();
    assert!(comments.iter().any(|l| *l == "# seed=3"));
    assert!(comments.iter().any(|l| l.starts_with("# config_hash=")));
    assert!(comments.iter().any(|l| l.starts_with("# version=")));
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body[0], CSV_HEADER);
    assert_eq!(CSV_HEADER, "n,N,trials,stat,mean,stderr");
    // long format: 5 statistics for n = 2, 3 for n = 3, per N
    assert_eq!(body.len() - 1, 2 * 5 + 2 * 3);
    let (_, rows) = parse_aggregate_csv(&text).unwrap();
    assert!(rows.iter().all(|r| r.trials == 50 && r.mean > 0.0));
}

#[test]
fn config_hash_ignores_threads_but_not_seed() {
    let dir = tempfile::tempdir().unwrap();
    let hash = |t: &str| t.lines().find(|l| l.starts_with("# config_hash=")).unwrap().to_string();
    let (_, a) = sim(dir.path(), "a.csv", &["--threads", "1", "simulate", "--trials", "5", "--seed", "1"]);
    let (_, b) = sim(dir.path(), "b.csv", &["--threads", "2", "simulate", "--trials", "5", "--seed", "1"]);
    let (_, c) = sim(dir.path(), "c.csv", &["simulate", "--trials", "5", "--seed", "2"]);
    assert_eq!(hash(&a), hash(&b));
    assert_ne!(hash(&a), hash(&c));
}

#[test]
fn flags_override_config_which_overrides_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# experiment\nseed = 11\ntrials = 20\nN = 30\n").unwrap();
    let c = cfg.to_str().unwrap();
    let (code, text) = sim(dir.path(), "a.csv", &["--config", c, "simulate"]);
    assert_eq!(code, 0);
    assert!(text.contains("# seed=11"));
    assert!(text.contains("\n2,30,20,min_facet,"));
    let (code, text) = sim(dir.path(), "b.csv", &["--config", c, "simulate", "--trials", "25", "--seed", "12"]);
    assert_eq!(code, 0);
    assert!(text.contains("# seed=12"));
    assert!(text.contains("\n2,30,25,min_facet,"));

    std::fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(sim(dir.path(), "c.csv", &["--config", c, "simulate"]).0, 2);
}

fn write_synthetic(path: &Path, exponent: f64, grid: &[u64]) {
    let mut s = format!("# seed=0\n{CSV_HEADER}\n");
    for &m in grid {
        s.push_str(&format!("2,{m},100,min_facet,{},0\n", 3.0 * (m as f64).powf(exponent)));
    }
    std::fs::write(path, s).unwrap();
}

#[test]
fn fit_recovers_synthetic_exponent() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("syn.csv");
    write_synthetic(&input, -2.0, &[100, 200, 400, 800, 1600]);
    let out = dir.path().join("fit.json");
    let plot = dir.path().join("plot.csv");
    let code = run([
        "sphere-facets",
        "--out",
        out.to_str().unwrap(),
        "fit",
        input.to_str().unwrap(),
        "--plot",
        plot.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    let fit = &v["fits"][0];
    assert!((fit["exponent"].as_f64().unwrap() + 2.0).abs() < 1e-12);
    assert_eq!(fit["pass"], serde_json::Value::Bool(true));
    assert!(std::fs::read_to_string(plot).unwrap().starts_with("n,stat,N,mean,stderr,model\n"));
}

#[test]
fn fit_outside_window_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("syn.csv");
    write_synthetic(&input, -1.0, &[100, 200, 400, 800]);
    let out = dir.path().join("fit.json");
    assert_eq!(run(["sphere-facets", "--out", out.to_str().unwrap(), "fit", input.to_str().unwrap()]), 1);
}

#[test]
fn fit_rejects_bad_input_with_usage_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fit.json");
    let out = out.to_str().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "n,N,stat\n2,100,min_facet\n").unwrap();
    assert_eq!(run(["sphere-facets", "--out", out, "fit", bad.to_str().unwrap()]), 2);
    std::fs::write(&bad, format!("{CSV_HEADER}\n2,100,10,min_facet,abc,0.1\n")).unwrap();
    assert_eq!(run(["sphere-facets", "--out", out, "fit", bad.to_str().unwrap()]), 2);
    let short = dir.path().join("short.csv");
    write_synthetic(&short, -2.0, &[100, 200, 400]);
    assert_eq!(run(["sphere-facets", "--out", out, "fit", short.to_str().unwrap()]), 2);
    assert_eq!(run(["sphere-facets", "fit", "/nonexistent/file.csv"]), 2);
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let out = out.to_str().unwrap();
    assert_eq!(run(["sphere-facets", "verify", "everything"]), 2);
    assert_eq!(run(["sphere-facets", "--out", out, "--format", "json", "verify", "lemma17"]), 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["passed"], serde_json::Value::Bool(true));
    assert!(v["reports"].as_array().unwrap().len() >= 4);
    assert_eq!(run(["sphere-facets", "--out", out, "verify", "tails", "--n", "2", "--N", "50", "--trials", "500"]), 0);
    assert_eq!(run(["sphere-facets", "--out", out, "verify", "bp", "--n", "2"]), 2);
}

#[test]
fn bounds_and_caps_commands() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.csv");
    let o = out.to_str().unwrap();
    assert_eq!(run(["sphere-facets", "--out", o, "bounds", "--bound", "max_facet_tail", "--n", "2", "--N", "100", "--t", "1"]), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("bound,n,N,param,raw,value\n"));
    let row = text.lines().last().unwrap();
    let raw: f64 = row.split(',').nth(4).unwrap().parse().unwrap();
    assert!((raw - 0.0186033073688997).abs() < 1e-14);
    assert_eq!(run(["sphere-facets", "--out", o, "bounds"]), 0);
    assert_eq!(run(["sphere-facets", "bounds", "--bound", "nonsense"]), 2);

    assert_eq!(run(["sphere-facets", "--out", o, "--format", "json", "caps", "--n", "3", "--p", "-0.5"]), 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!((v["area"].as_f64().unwrap() - 3.0 * std::f64::consts::PI).abs() < 1e-12);
    assert_eq!(run(["sphere-facets", "caps", "--n", "3"]), 2);
    assert_eq!(run(["sphere-facets", "caps", "--n", "3", "--p", "2"]), 2);
}
