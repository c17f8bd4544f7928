use std::fs;
use std::path::Path;
use std::process::Command;

use sdepth::{bench, read_dataset, run, write_dataset, BenchSpec, CellStatus, Method, MuSpec, RunConfig, SigmaSpec};

fn sdepth(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_sdepth")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const DEPTH_ONE: &str = "x,y\n1.5,0\n0,1.5\n0.5,0\n0,0.5\n";

#[test]
fn exact_on_the_depth_one_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let data = write(dir.path(), "d1.csv", DEPTH_ONE);
    for method in ["exact", "exact2d", "oracle"] {
        let (code, out, _) = sdepth(&["compute", "--data", &data, "--method", method, "--json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["depth"], 1);
        assert_eq!(v["depth_normalized"], 0.25);
        assert_eq!(v["n"], 4);
        assert_eq!(v["d"], 2);
        assert_eq!(v["method"], method);
        assert!(v.get("seed").is_none() && v.get("N").is_none());
    }
    let (code, out, _) = sdepth(&["compute", "--data", &data, "--method", "exact"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("sHD = 1 (1/4)\n"), "{out}");
    assert!(out.lines().nth(1).unwrap().starts_with("time:"));
}

#[test]
fn approximations_echo_seed_and_sample_count() {
    let dir = tempfile::tempdir().unwrap();
    let data = write(dir.path(), "d1.csv", DEPTH_ONE);
    let (code, out, _) =
        sdepth(&["compute", "--data", &data, "--method", "rpoints", "--N", "500", "--seed", "7", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["depth"], 1);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["N"], 500);
}

#[test]
fn exit_codes_by_category() {
    let dir = tempfile::tempdir().unwrap();
    let data = write(dir.path(), "d1.csv", DEPTH_ONE);

    // missing N is rejected before the data is even read
    let (code, out, _) = sdepth(&["compute", "--data", "/nonexistent", "--method", "rdirections", "--json"]);
    assert_eq!(code, 2);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["error"]["category"], "validation");

    let (code, _, err) = sdepth(&["compute", "--data", &data, "--method", "exact", "--sigma", "1,2;2,1"]);
    assert_eq!(code, 3, "{err}");
    let (code, _, _) = sdepth(&["compute", "--data", &data, "--method", "exact", "--sigma", "1,0,0;0,1,0;0,0,1"]);
    assert_eq!(code, 2);
    let (code, _, _) = sdepth(&["compute", "--data", "/nonexistent/file", "--method", "exact"]);
    assert_eq!(code, 4);
    let ragged = write(dir.path(), "bad.csv", "1,2\n3\n");
    let (code, _, err) = sdepth(&["compute", "--data", &ragged, "--method", "exact"]);
    assert_eq!(code, 4);
    assert!(err.contains("line 2"), "{err}");
    let (code, _, _) = sdepth(&["compute", "--data", &data, "--method", "magic"]);
    assert_eq!(code, 2);
}

#[test]
fn identity_keyword_matches_identity_file_and_inline_specs() {
    let dir = tempfile::tempdir().unwrap();
    let data = write(dir.path(), "d1.csv", DEPTH_ONE);
    let ident = write(dir.path(), "sigma.txt", "1 0\n0 1\n");
    let mu = write(dir.path(), "mu.txt", "0\n0\n");
    let base = RunConfig::new(&data, Method::Exact);
    let a = run(&base).unwrap();
    let b = run(&RunConfig {
        sigma: SigmaSpec::parse(&ident).unwrap(),
        mu: MuSpec::parse(&mu).unwrap(),
        ..base.clone()
    })
    .unwrap();
    let c = run(&RunConfig {
        sigma: SigmaSpec::parse("1,0;0,1").unwrap(),
        mu: MuSpec::parse("0,0").unwrap(),
        ..base.clone()
    })
    .unwrap();
    assert_eq!(a.depth, b.depth);
    assert_eq!(a.depth, c.depth);
    assert_eq!(SigmaSpec::parse(&ident).unwrap(), SigmaSpec::File(ident.into()));

    // column means of the depth-one data are (0.5, 0.5)
    let m = run(&RunConfig { mu: MuSpec::Mean, ..base.clone() }).unwrap();
    let explicit = run(&RunConfig { mu: MuSpec::Inline(vec![0.5, 0.5]), ..base }).unwrap();
    assert_eq!(m.depth, explicit.depth);
}

#[test]
fn dataset_round_trip_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let rows: Vec<Vec<f64>> = (0..50)
        .map(|i| {
            let t = i as f64;
            vec![(t * 0.37).sin() * 1e3, 1.0 / (t + 3.0), -(t * 1.1).exp() * 1e-200]
        })
        .collect();
    let p = dir.path().join("rows.csv");
    write_dataset(&p, &rows).unwrap();
    let back = read_dataset(&p).unwrap();
    assert_eq!(back, rows);
    let q = dir.path().join("rows2.csv");
    write_dataset(&q, &back).unwrap();
    assert_eq!(fs::read_to_string(&p).unwrap(), fs::read_to_string(&q).unwrap());
}

#[test]
fn bench_smoke_and_reproducibility() {
    let spec = BenchSpec { seed: 11, samples: 2000, ..BenchSpec::new(vec![2], vec![32], 3, vec![Method::Exact]) };
    let t = bench(&spec).unwrap();
    assert_eq!(t.cells.len(), 1);
    assert_eq!(t.cells[0].status, CellStatus::Done);
    assert!(t.cells[0].mean_time_s.unwrap() > 0.0);

    let spec = BenchSpec {
        seed: 11,
        samples: 2000,
        ..BenchSpec::new(vec![2, 3], vec![24], 4, vec![Method::Exact, Method::Exact2d, Method::Rpoints, Method::Rdirections])
    };
    let a = bench(&spec).unwrap();
    let b = bench(&spec).unwrap();
    let depths = |t: &sdepth::BenchTable| t.cells.iter().map(|c| c.depths.clone()).collect::<Vec<_>>();
    assert_eq!(depths(&a), depths(&b));
    let skipped = a.cells.iter().find(|c| c.d == 3 && c.method == Method::Exact2d).unwrap();
    assert_eq!(skipped.status, CellStatus::Skipped);
    for c in a.cells.iter().filter(|c| c.method.is_approx()) {
        assert!(c.match_fraction.is_some());
        assert!(c.mean_rel_diff.unwrap_or(0.0) >= 0.0);
    }
    let csv = a.to_csv().unwrap();
    assert_eq!(csv.lines().count(), 1 + a.cells.len());
    assert!(a.to_text().contains("rpoints"));
}

#[test]
fn slow_cells_are_censored_with_larger_sizes() {
    let spec = BenchSpec {
        time_budget_s: 1e-4,
        ..BenchSpec::new(vec![4], vec![60, 80], 1, vec![Method::Exact])
    };
    let t = bench(&spec).unwrap();
    assert!(t.cells.iter().all(|c| c.status == CellStatus::Censored));
    assert!(t.to_text().contains(sdepth::bench::CENSORED_MARK));
}

#[test]
fn bench_command_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let (code, text, _) = sdepth(&[
        "bench", "--dims", "2", "--sizes", "16,32", "--trials", "2", "--methods", "exact,rdirections", "--N", "300",
        "--seed", "3", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(text.contains("rdirections"));
    let csv = fs::read_to_string(out).unwrap();
    assert!(csv.starts_with("d,n,method,status"));
    assert_eq!(csv.lines().count(), 5);
}
