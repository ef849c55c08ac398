//! Command-line contract: exit codes (0 ok, 1 infeasible/invalid, 2 usage),
//! deterministic output, file options, and format round trips.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cacaug"))
}

fn asset(name: &str) -> String {
    format!("{}/assets/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn tmp_dir(tag: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("cacaug-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn usage_errors_exit_two() {
    let out = bin().output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["solve", &asset("cactus12.cacap")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "missing --method is a usage error");
}

#[test]
fn validate_reports_shape() {
    let out = bin().args(["validate", &asset("cactus12.cacap")]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        stdout,
        "valid cactus: nodes=12 edges=17 cycles=6 links=8 cuts=19 feasible=true\n"
    );
}

#[test]
fn validate_rejects_bad_files() {
    let dir = tmp_dir("invalid");
    // A path graph has a bridge.
    let bad = dir.join("bad.cacap");
    std::fs::write(&bad, "p cacap 3 2 1\ne 0 1\ne 1 2\nl 0 2\n").unwrap();
    let out = bin().args(["validate", bad.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("bridge"), "diagnostic names the defect: {stderr}");
    // Feasibility failure also exits 1.
    let uncovered = dir.join("uncovered.cacap");
    std::fs::write(&uncovered, "p cacap 3 3 1\ne 0 1\ne 1 2\ne 2 0\nl 0 1\n").unwrap();
    let out = bin()
        .args(["validate", uncovered.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn cuts_listing_matches_count() {
    let out = bin().args(["cuts", &asset("cactus12.cacap")]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("cuts 19"));
    assert_eq!(stdout.lines().filter(|l| l.starts_with("cut ")).count(), 19);
}

#[test]
fn reduce_matches_golden_asset() {
    let out = bin().args(["reduce", &asset("cactus12.cacap")]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let golden = std::fs::read_to_string(asset("cactus12.steiner.expected")).unwrap();
    assert_eq!(stdout, golden);
    // --out writes the same bytes.
    let dir = tmp_dir("reduce");
    let path = dir.join("st.txt");
    let status = bin()
        .args(["reduce", &asset("cactus12.cacap"), "--out", path.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), golden);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn exact_solve_matches_golden() {
    let out = bin()
        .args(["solve", &asset("cactus12.cacap"), "--method", "exact"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let golden = std::fs::read_to_string(asset("cactus12.exact.expected")).unwrap();
    assert_eq!(stdout, golden);
}

#[test]
fn irr_solve_is_deterministic_and_feasible() {
    let run = || {
        bin()
            .args([
                "solve",
                &asset("cactus12.cacap"),
                "--method",
                "irr",
                "--k",
                "3",
                "--seed",
                "11",
                "--reps",
                "6",
            ])
            .output()
            .unwrap()
    };
    let a = run();
    assert_eq!(a.status.code(), Some(0));
    let b = run();
    assert_eq!(a.stdout, b.stdout);
    let stdout = String::from_utf8(a.stdout).unwrap();
    assert!(stdout.contains("method irr"));
    assert!(stdout.contains("optimum 6"));
    assert!(stdout.contains("runs "));
}

#[test]
fn greedy_solve_exits_one_on_infeasible() {
    let dir = tmp_dir("greedy");
    let path = dir.join("uncovered.cacap");
    std::fs::write(&path, "p cacap 3 3 1\ne 0 1\ne 1 2\ne 2 0\nl 0 1\n").unwrap();
    let out = bin()
        .args(["solve", path.to_str().unwrap(), "--method", "greedy"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn marking_analyze_reports_nodes() {
    let out = bin()
        .args([
            "marking",
            "analyze",
            &asset("steiner17.tree"),
            "--samples",
            "500",
            "--seed",
            "3",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("tree steiner=7 terminals=10 root=0 well_structured=true"));
    assert_eq!(stdout.lines().filter(|l| l.starts_with("node ")).count(), 7);
    assert!(stdout.contains("tree_bound"));
    assert!(stdout.contains("within_rho=true"));
    assert_eq!(
        stdout.lines().filter(|l| l.starts_with("monte_carlo ")).count(),
        7
    );
}

#[test]
fn bounds_verify_json_and_exit() {
    let dir = tmp_dir("bounds");
    let path = dir.join("report.json");
    let out = bin()
        .args([
            "bounds", "verify", "--grid-step", "0.001", "--imax", "500",
            "--samples", "500", "--out", path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let json = std::fs::read_to_string(&path).unwrap();
    assert!(json.contains("\"all_pass\": true"));
    assert!(json.contains("\"rho\": 1.9091958650969243"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn gen_output_validates_and_roundtrips() {
    let dir = tmp_dir("gen");
    let path = dir.join("g.cacap");
    let status = bin()
        .args([
            "gen", "--cycles", "4", "--max-cycle-len", "5", "--links", "5",
            "--seed", "17", "--out", path.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let out = bin().args(["validate", path.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    // Identical seed, identical bytes.
    let again = dir.join("g2.cacap");
    bin()
        .args([
            "gen", "--cycles", "4", "--max-cycle-len", "5", "--links", "5",
            "--seed", "17", "--out", again.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert_eq!(
        std::fs::read(&path).unwrap(),
        std::fs::read(&again).unwrap()
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn bench_writes_stable_csv_schema() {
    let dir = tmp_dir("bench");
    for seed in [2u64, 5] {
        bin()
            .args([
                "gen", "--cycles", "2", "--max-cycle-len", "4", "--links", "3",
                "--seed", &seed.to_string(),
                "--out", dir.join(format!("i{seed}.cacap")).to_str().unwrap(),
            ])
            .status()
            .unwrap();
    }
    let csv_path = dir.join("report.csv");
    let status = bin()
        .args([
            "bench", "--dir", dir.to_str().unwrap(),
            "--out", csv_path.to_str().unwrap(),
            "--reps", "3", "--seed", "1",
        ])
        .env("CACAUG_THREADS", "2")
        .status()
        .unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("instance,n,t,links,cuts,method,cost,opt,ratio,wall_ms,seed")
    );
    // Two instances, two methods each, rows sorted by file name.
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[0].starts_with("i2.cacap,"));
    assert!(rows[2].starts_with("i5.cacap,"));
    for row in rows {
        assert_eq!(row.split(',').count(), 11);
    }
    std::fs::remove_dir_all(&dir).ok();
}
