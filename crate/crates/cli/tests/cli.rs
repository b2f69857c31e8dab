use std::path::Path;
use std::process::{Command, Output};

use hrg::model::exact_distance;
use hrg_cli::commands::build_graph;
use hrg_cli::config::FileConfig;
use hrg_cli::io::{read_graph, write_graph};
use hrg_cli::{GeneratorChoice, Overrides, RunConfig};

fn hrg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hrg"))
        .args(args)
        .env("HRG_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn config(n: usize, beta: f64, generator: GeneratorChoice) -> RunConfig {
    let cli = Overrides {
        n: Some(n),
        beta: Some(beta),
        seed: Some(11),
        generator: Some(generator),
        ..Default::default()
    };
    RunConfig::merge(&cli, FileConfig::default()).unwrap()
}

#[test]
fn written_graph_reloads_equal() {
    let dir = tempfile::tempdir().unwrap();
    for (i, generator) in [GeneratorChoice::Naive, GeneratorChoice::Accelerated, GeneratorChoice::ChungLu]
        .into_iter()
        .enumerate()
    {
        let g = build_graph(&config(2000, 2.0, generator)).unwrap();
        let sub = dir.path().join(i.to_string());
        write_graph(&sub, &g).unwrap();
        assert_eq!(read_graph(&sub).unwrap(), g);
    }
    let mut disc = config(500, 2.0, GeneratorChoice::Accelerated);
    disc.params = disc.params.with_disc(true);
    let g = build_graph(&disc).unwrap();
    write_graph(dir.path(), &g).unwrap();
    assert_eq!(read_graph(dir.path()).unwrap(), g);
}

#[test]
fn generate_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let read = |sub: &str, file: &str| std::fs::read(dir.path().join(sub).join(file)).unwrap();
    for sub in ["a", "b"] {
        let threads = if sub == "a" { "1" } else { "3" };
        let out = Command::new(env!("CARGO_BIN_EXE_hrg"))
            .args(["generate", "--n", "10", "--seed", "5", "--out"])
            .arg(dir.path().join(sub))
            .env("HRG_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(read("a", "edges.txt"), read("b", "edges.txt"));
    assert_eq!(read("a", "positions.txt"), read("b", "positions.txt"));
    let edges = String::from_utf8(read("a", "edges.txt")).unwrap();
    assert!(edges.starts_with("#hrg v1\n#params 10 1 1 2 5\n#generator accelerated\n"));
}

#[test]
fn disc_edges_are_shorter_than_the_radius_after_reload() {
    let dir = tempfile::tempdir().unwrap();
    let out = hrg(&["generate", "--n", "100", "--disc", "--seed", "2", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let g = read_graph(dir.path()).unwrap();
    let p = *g.params();
    assert!(p.disc);
    assert!(g.edge_count() > 0);
    for (u, v) in g.edges() {
        assert!(exact_distance(&g.positions()[u], &g.positions()[v], &p) < p.radius);
    }
    // And the complement: no missing short pair.
    for u in 0..100 {
        for v in u + 1..100 {
            let short = exact_distance(&g.positions()[u], &g.positions()[v], &p) < p.radius;
            assert_eq!(short, g.has_edge(u, v));
        }
    }
}

#[test]
fn generate_summary_reports_cold_mean_degree() {
    let dir = tempfile::tempdir().unwrap();
    let out = hrg(&["generate", "--n", "10000", "--out", dir.path().to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mean: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("mean degree"))
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!((mean / 4.0 - 1.0).abs() <= 0.25, "{text}");
}

#[test]
fn predict_payloads() {
    let cold = json(&hrg(&["predict", "--n", "1000", "--k-cap", "5"]));
    assert_eq!(cold["schema"], 1);
    assert_eq!(cold["prediction"]["constants"]["k_const"], 2.0);
    assert_eq!(cold["prediction"]["constants"]["power_exponent"], 3.0);
    assert_eq!(cold["prediction"]["mp_pmf"].as_array().unwrap().len(), 6);

    let critical = json(&hrg(&["predict", "--beta", "1"]));
    let k = critical["prediction"]["constants"]["k_const"].as_f64().unwrap();
    assert!((k - 2.0 / std::f64::consts::PI).abs() < 1e-15);
    assert_eq!(critical["prediction"]["growth"], "logarithmic");

    let out = hrg(&["predict", "--beta", "0.5", "--zeta", "4"]);
    assert_eq!(out.status.code(), Some(1));
    let err = json(&out);
    assert!(err["error"]["message"].as_str().unwrap().contains("hot-regime constant undefined"));
}

#[test]
fn validate_profiles_and_refusals() {
    let out = hrg(&["validate", "--n", "5000"]);
    let report = json(&out);
    let names: Vec<&str> = report["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"tail-exponent") && names.contains(&"tv-distance"), "{names:?}");
    assert_eq!(out.status.code(), Some(if report["passed"] == true { 0 } else { 2 }));

    let out = hrg(&["validate", "--n", "2000", "--beta", "0.5", "--n-grid", "256,512,1024,2048", "--replicates", "2"]);
    let report = json(&out);
    let names: Vec<&str> = report["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"polynomial-growth"), "{names:?}");

    let out = hrg(&["validate", "--zeta", "2", "--alpha", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("0 < ζ/α < 2"));
}

#[test]
fn usage_and_io_exit_codes() {
    assert_eq!(hrg(&["generate", "--n", "abc"]).status.code(), Some(1));
    assert_eq!(hrg(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(hrg(&["generate", "--zeta", "-1"]).status.code(), Some(1));
    assert_eq!(hrg(&["scale", "--generator", "chung-lu"]).status.code(), Some(1));
    assert_eq!(hrg(&["analyze", "--graph", "/definitely/not/here"]).status.code(), Some(3));
    assert_eq!(hrg(&["--help"]).status.code(), Some(0));
    let bad_threads = Command::new(env!("CARGO_BIN_EXE_hrg"))
        .args(["predict"])
        .env("HRG_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad_threads.status.code(), Some(1));
}

#[test]
fn config_file_sits_between_flags_and_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "n = 800\nbeta = 1.0\nk_cap = 4\n").unwrap();
    let out = json(&hrg(&["predict", "--config", cfg.to_str().unwrap(), "--beta", "3"]));
    assert_eq!(out["params"]["n_vertices"], 800);
    assert_eq!(out["params"]["beta"], 3.0);
    assert_eq!(out["prediction"]["mp_pmf"].as_array().unwrap().len(), 5);

    std::fs::write(&cfg, "n = 800\nnn = 3\n").unwrap();
    let out = hrg(&["predict", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown field"));
}

#[test]
fn analyze_writes_report_and_histogram() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert!(hrg(&["generate", "--n", "3000", "--out", d]).status.success());
    assert!(hrg(&["analyze", "--graph", d, "--out", d]).status.success());
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(Path::new(d).join("report.json")).unwrap()).unwrap();
    assert_eq!(report["schema"], 1);
    let hist = report["degrees"]["histogram"].as_object().unwrap();
    let total: u64 = hist.values().map(|v| v.as_u64().unwrap()).sum();
    assert_eq!(total, 3000);
    let csv = std::fs::read_to_string(Path::new(d).join("histogram.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("k,N_k,N_k/N,mp_pmf"));
    let row0: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row0[0], "0");
    assert!(!row0[3].is_empty());
}

#[test]
fn scale_with_independence() {
    let out = hrg(&[
        "scale", "--n", "1000", "--n-grid", "128,256,512,1024", "--replicates", "2", "--m", "3", "--samples", "20",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["scaling"]["rows"].as_array().unwrap().len(), 4);
    assert_eq!(v["independence"]["m"], 3);
}
