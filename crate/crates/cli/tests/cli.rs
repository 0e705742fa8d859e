use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn netinfer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netinfer"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = netinfer(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_owned()
}

fn simulated(dir: &TempDir, seed: &str) -> (String, String) {
    let g = path(dir, "graph.txt");
    let ts = path(dir, "series.txt");
    ok(&["generate", "--seed", seed, "--out", &g]);
    ok(&["simulate", "--graph", &g, "--seed", seed, "--out", &ts]);
    (g, ts)
}

#[test]
fn infer_lcrc_auto_reports_accuracy() {
    let dir = TempDir::new().unwrap();
    let (g, ts) = simulated(&dir, "5");
    let pem = path(&dir, "pem.txt");
    let edges = path(&dir, "edges.txt");
    let out = ok(&[
        "infer", "--input", &ts, "--pem", "lcrc", "--dt-tau", "auto", "--truth", &g, "--out", &pem,
        "--edges-out", &edges,
    ]);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let phi: f64 = stdout
        .lines()
        .find_map(|l| l.strip_prefix("accuracy "))
        .expect("accuracy line")
        .parse()
        .unwrap();
    assert!((0.0..=1.0).contains(&phi));
    assert!(fs::read_to_string(&pem).unwrap().starts_with("pem 10 kind=lcrc"));
    let truth_edges = fs::read_to_string(&g).unwrap();
    let inferred = fs::read_to_string(&edges).unwrap();
    assert_eq!(truth_edges.lines().count(), inferred.lines().count());
}

#[test]
fn pipeline_is_reproducible() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let (ga, ta) = simulated(&a, "11");
    let (gb, tb) = simulated(&b, "11");
    assert_eq!(fs::read(&ga).unwrap(), fs::read(&gb).unwrap());
    assert_eq!(fs::read(&ta).unwrap(), fs::read(&tb).unwrap());
}

fn without_wall_time(csv: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "wall_time_s").unwrap();
    lines
        .map(|l| {
            let mut f: Vec<&str> = l.split(',').collect();
            f.remove(col);
            f.join(",")
        })
        .collect()
}

#[test]
fn sweep_is_deterministic_across_jobs() {
    let dir = TempDir::new().unwrap();
    let one = path(&dir, "one.csv");
    let four = path(&dir, "four.csv");
    let again = path(&dir, "again.csv");
    let common = [
        "sweep", "--n", "6,8", "--density", "0.3,0.5", "--samples", "300", "--trials", "3",
        "--seed", "9",
    ];
    ok(&[&common[..], &["--jobs", "1", "--out", &one]].concat());
    ok(&[&common[..], &["--jobs", "4", "--out", &four]].concat());
    ok(&[&common[..], &["--jobs", "4", "--out", &again]].concat());
    let one = without_wall_time(&fs::read_to_string(one).unwrap());
    assert_eq!(one.len(), 2 * 2 * 3 * 3);
    assert_eq!(one, without_wall_time(&fs::read_to_string(four).unwrap()));
    assert_eq!(one, without_wall_time(&fs::read_to_string(again).unwrap()));
}

#[test]
fn bench_time_gc_slower_than_lcrc() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "timing.csv");
    ok(&[
        "bench-time", "--pems", "lcrc,lccf,lc,gc", "--n", "10", "--samples", "1000", "--trials",
        "5", "--out", &out,
    ]);
    let csv = fs::read_to_string(out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,N,delta_hat,pem,trial,seed,wall_time_s"));
    let (mut gc, mut lcrc) = (0.0, 0.0);
    for l in lines {
        let f: Vec<&str> = l.split(',').collect();
        let t: f64 = f[6].parse().unwrap();
        match f[3] {
            "gc" => gc += t,
            "lcrc" => lcrc += t,
            _ => {}
        }
    }
    assert!(gc > lcrc, "gc {gc} vs lcrc {lcrc}");
}

fn table(args: &[&str]) -> Vec<(u32, u32, f64, bool)> {
    let out = ok(&[&["motif-table"], args].concat());
    String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[1].parse().unwrap(), f[2].parse().unwrap(), f[3].parse().unwrap(), f[4] == "1")
        })
        .collect()
}

#[test]
fn motif_table_var1_localizes() {
    let rows = table(&["--dt-tau", "1", "--k-list", "0"]);
    assert!(!rows.is_empty());
    for (lb, lf, v, _) in rows {
        if lb != lf {
            assert_eq!(v, 0.0, "({lb},{lf})");
        }
    }
}

#[test]
fn motif_table_oup_limit_argmax() {
    let rows = table(&["--dt-tau", "0.0001", "--k-list", "0"]);
    let mut argmax: Vec<(u32, u32)> = rows.iter().filter(|r| r.3).map(|r| (r.0, r.1)).collect();
    argmax.sort();
    assert_eq!(argmax, vec![(0, 1), (1, 0)]);
}

#[test]
fn motif_table_lag_three_argmax() {
    let rows = table(&["--dt-tau", "0.8", "--k-list", "3"]);
    let argmax: Vec<(u32, u32)> = rows.iter().filter(|r| r.3).map(|r| (r.0, r.1)).collect();
    assert_eq!(argmax, vec![(0, 3)]);
}

#[test]
fn motif_table_writes_file() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "table.csv");
    ok(&["motif-table", "--lmax", "2", "--out", &out]);
    assert!(fs::read_to_string(out).unwrap().starts_with("k,lB,lF,value,is_argmax"));
}

fn code(args: &[&str]) -> (i32, String) {
    let out = netinfer(args);
    (out.status.code().unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn exit_codes() {
    let (c, err) = code(&["motif-table", "--lmax", "13"]);
    assert_eq!(c, 2);
    assert!(err.contains("--lmax"));
    let (c, err) = code(&["motif-table", "--dt-tau", "1.5"]);
    assert_eq!(c, 2);
    assert!(err.contains("--dt-tau"));
    let (c, _) = code(&["generate", "--density", "1.5"]);
    assert_eq!(c, 2);
    let (c, _) = code(&["sweep", "--jobs", "0", "--trials", "1"]);
    assert_eq!(c, 2);
    let (c, _) = code(&["infer", "--pem", "bogus", "--input", "x"]);
    assert_eq!(c, 2);

    let dir = TempDir::new().unwrap();
    let missing = path(&dir, "missing.txt");
    let (c, err) = code(&["infer", "--input", &missing]);
    assert_eq!(c, 4);
    assert!(err.contains(&missing));
    let (c, _) = code(&["generate", "--out", &path(&dir, "no/such/dir/g.txt")]);
    assert_eq!(c, 4);

    let bad = path(&dir, "bad.txt");
    fs::write(&bad, "this is not a time series\n").unwrap();
    let (c, err) = code(&["infer", "--input", &bad]);
    assert_eq!(c, 3);
    assert!(err.contains(&bad));
}

#[test]
fn help_lists_defaults() {
    let out = ok(&["simulate", "--help"]);
    let help = String::from_utf8(out.stdout).unwrap();
    for d in [
        "--eps <EPS>", "[default: 0.9]", "[default: 1]", "[default: 0.5]", "[default: 0.2]",
        "[default: 1000]",
    ] {
        assert!(help.contains(d), "missing {d}");
    }
    let out = ok(&["generate", "--help"]);
    let help = String::from_utf8(out.stdout).unwrap();
    for d in ["--n <N>", "[default: 10]", "[default: 0.5]", "--delta <DELTA>", "[default: 0]"] {
        assert!(help.contains(d), "missing {d}");
    }
}

#[test]
fn config_is_echoed() {
    let out = ok(&["motif-table", "--lmax", "1"]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("lmax: 1"));
    assert!(err.contains("eps: 0.9"));
    assert!(Path::new(env!("CARGO_BIN_EXE_netinfer")).exists());
}
