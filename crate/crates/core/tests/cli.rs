use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn unmac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unmac"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn rows(text: &str) -> Vec<(f64, f64)> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,f"));
    lines
        .map(|l| {
            let (x, f) = l.split_once(',').unwrap();
            (x.parse().unwrap(), f.parse().unwrap())
        })
        .collect()
}

fn trapezoid(r: &[(f64, f64)], g: impl Fn(f64) -> f64) -> f64 {
    r.windows(2)
        .map(|w| 0.5 * (w[1].0 - w[0].0) * (g(w[0].0) * w[0].1 + g(w[1].0) * w[1].1))
        .sum()
}

#[test]
fn pdf_airframe_peak() {
    let o = unmac(&["pdf", "airframe", "--grid", "0:7.5:0.05"]);
    assert_eq!(code(&o), 0);
    let r = rows(&String::from_utf8(o.stdout).unwrap());
    let (x, f) = r
        .iter()
        .copied()
        .fold((0.0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
    assert!((x - 3.75).abs() < 1e-9);
    assert!((f - 0.266_67).abs() < 1e-5);
}

#[test]
fn pdf_localization_integrates_to_one() {
    let o = unmac(&[
        "pdf",
        "localization",
        "--sigma-i",
        "1.9",
        "--sigma-j",
        "1.9",
        "--grid",
        "0:40:0.01",
    ]);
    assert_eq!(code(&o), 0);
    let r = rows(&String::from_utf8(o.stdout).unwrap());
    assert!((trapezoid(&r, |_| 1.0) - 1.0).abs() < 1e-4);
}

#[test]
fn pdf_mobility_mean_and_file_output() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("mob.csv");
    let o = unmac(&[
        "pdf",
        "mobility",
        "--dt",
        "0.01",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let r = rows(&fs::read_to_string(&path).unwrap());
    assert!((trapezoid(&r, |x| x) - 0.258).abs() < 1e-3);

    let o = unmac(&["pdf", "mobility", "--tech", "bluetooth"]);
    let r = rows(&String::from_utf8(o.stdout).unwrap());
    assert!((trapezoid(&r, |x| x) - 0.258).abs() < 1e-3);
}

#[test]
fn pdf_usage_errors() {
    assert_eq!(code(&unmac(&["pdf", "wingspan"])), 1);
    assert_eq!(code(&unmac(&["pdf", "direction", "--grid", "-1:1:0.1"])), 1);
    assert_eq!(code(&unmac(&["pdf", "airframe", "--grid", "1:0:0.1"])), 1);
    assert_eq!(
        code(&unmac(&["pdf", "mobility", "--tech", "smoke-signals"])),
        1
    );
    assert_eq!(code(&unmac(&[])), 1);
    assert_eq!(code(&unmac(&["--help"])), 0);
}

fn simulate(dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        "simulate",
        "--lambda",
        "2",
        "--budget",
        "10000",
        "--dt",
        "1,0.1",
        "--out",
        dir.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    unmac(&args)
}

#[test]
fn simulate_smoke_and_reproducible() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let oa = simulate(a.path(), &["--seed", "3", "--workers", "1"]);
    assert_eq!(code(&oa), 0, "{}", String::from_utf8_lossy(&oa.stderr));
    let ob = simulate(b.path(), &["--seed", "3", "--workers", "2"]);
    assert_eq!(code(&ob), 0);

    let stats = fs::read_to_string(a.path().join("stats.csv")).unwrap();
    let mut lines = stats.lines();
    assert_eq!(
        lines.next(),
        Some("lambda,format,dt,conflicts,macs,flight_hours,rate")
    );
    assert_eq!(lines.count(), 10);
    assert_eq!(
        stats,
        fs::read_to_string(b.path().join("stats.csv")).unwrap()
    );

    let summary = String::from_utf8(oa.stdout).unwrap();
    assert!(summary.contains("standard-remote-id / MAC"));
    assert_eq!(
        summary,
        fs::read_to_string(a.path().join("summary.txt")).unwrap()
    );
    let echo = fs::read_to_string(a.path().join("config.toml")).unwrap();
    assert!(echo.contains("seed = 3"));
}

#[test]
fn config_file_is_overridden_by_flags_and_echo_reproduces() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(
        &cfg,
        "seed = 5\n[simulation]\nlambda_list = [2.0]\ntrajectory_budget = 2000\n\
         [uncertainty]\ndt_list = [1.0]\neps_mode = \"fixed_3sigma\"\n",
    )
    .unwrap();
    let out1 = dir.path().join("one");
    let o = unmac(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "6",
        "--tech",
        "bluetooth",
        "--out",
        out1.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let echo = out1.join("config.toml");
    let text = fs::read_to_string(&echo).unwrap();
    assert!(text.contains("seed = 6"));
    assert!(text.contains("dt_list = [0.01]"));
    assert!(text.contains("fixed_3sigma"));

    let out2 = dir.path().join("two");
    let o = unmac(&[
        "simulate",
        "--config",
        echo.to_str().unwrap(),
        "--out",
        out2.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        fs::read(out1.join("stats.csv")).unwrap(),
        fs::read(out2.join("stats.csv")).unwrap()
    );
}

#[test]
fn simulate_rejects_bad_configs() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&simulate(dir.path(), &["--budget", "10"])), 1);
    assert_eq!(
        code(&simulate(dir.path(), &["--gps-standard", "best-case"])),
        1
    );
    assert_eq!(
        code(&simulate(dir.path(), &["--formats", "candidate-9"])),
        1
    );
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "[simulation]\nlambda_list = \"many\"\n").unwrap();
    assert_eq!(
        code(&unmac(&["simulate", "--config", cfg.to_str().unwrap()])),
        1
    );
}

#[test]
fn diameter_dump() {
    let dir = TempDir::new().unwrap();
    let o = simulate(
        dir.path(),
        &[
            "--dump-diameters",
            "--formats",
            "perfect-knowledge,standard-remote-id",
        ],
    );
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(dir.path().join("diameters.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lambda,format,dt,diameter"));
    for l in lines {
        let f: Vec<&str> = l.split(',').collect();
        let d: f64 = f[3].parse().unwrap();
        match f[1] {
            "perfect-knowledge" => assert!(d > 0.0 && d <= 15.0),
            "standard-remote-id" => assert!(d >= 175.0),
            other => panic!("{other}"),
        }
    }
}

#[test]
fn unmac_dist_samples() {
    let dir = TempDir::new().unwrap();
    let o = unmac(&[
        "unmac-dist",
        "--samples",
        "2000",
        "--formats",
        "perfect-knowledge,standard-remote-id",
        "--dt",
        "1,0.02",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("unmac_dist.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("format,dt,sample"));
    let mut n = 0;
    for l in lines {
        let f: Vec<&str> = l.split(',').collect();
        let r: f64 = f[2].parse().unwrap();
        match f[0] {
            "perfect-knowledge" => assert!(r <= 7.5),
            "standard-remote-id" => assert!(r >= 87.5),
            other => panic!("{other}"),
        }
        n += 1;
    }
    assert_eq!(n, 2 * 2 * 2000);
    assert!(dir.path().join("config.toml").exists());
}

#[test]
fn compare_ranks_and_flags() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&simulate(dir.path(), &[])), 0);
    let stats = dir.path().join("stats.csv");
    let o = unmac(&["compare", stats.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let report = String::from_utf8(o.stdout).unwrap();
    let first_ranked: Vec<&str> = report.lines().filter(|l| l.contains("  1. ")).collect();
    assert_eq!(first_ranked.len(), 2);
    assert!(first_ranked.iter().all(|l| l.contains("perfect-knowledge")));
    assert!(report.contains("ordering invariants hold"));

    // Swap two counts so candidate-3 beats candidate-2's conflicts.
    let text = fs::read_to_string(&stats).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    for l in lines.iter_mut().filter(|l| l.contains("candidate-3,1.0,")) {
        let mut f: Vec<String> = l.split(',').map(String::from).collect();
        f[3] = "999999999".into();
        *l = f.join(",");
    }
    let broken = dir.path().join("broken.csv");
    fs::write(&broken, lines.join("\n") + "\n").unwrap();
    assert_eq!(code(&unmac(&["compare", broken.to_str().unwrap()])), 2);

    let garbage = dir.path().join("garbage.csv");
    fs::write(&garbage, "lambda,format\n1,nope\n").unwrap();
    assert_eq!(code(&unmac(&["compare", garbage.to_str().unwrap()])), 2);
    assert_eq!(code(&unmac(&["compare", "/nonexistent/stats.csv"])), 2);
}

#[test]
fn compare_single_format() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("one.csv");
    fs::write(
        &path,
        "lambda,format,dt,conflicts,macs,flight_hours,rate\n2.0,candidate-2,1.0,4,2,8.0,0.5\n",
    )
    .unwrap();
    let o = unmac(&["compare", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let report = String::from_utf8(o.stdout).unwrap();
    assert!(report.contains("1. candidate-2"));
    assert!(!report.contains("2. "));
}
