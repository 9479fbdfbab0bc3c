use std::path::PathBuf;
use std::process::{Command, Output};

use selberg::LengthSpectrum;

const SCHOTTKY: &str = r#"
model = "H3-complex-2x2"
generators = [
  [[4.9530324243951149, 0.0], 0.0, 0.0, [0.20189651799465538, 0.0]],
  [[3.0, 0.5], 2.0, 1.0, [0.972972972972973, -0.16216216216216217]],
]
"#;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_selberg"));
    cmd.env_remove("SELBERG_THREADS").env("RUST_LOG", "error");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "status {:?}, stderr: {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("selberg-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn delta_m() {
    assert_eq!(stdout(&run(&["lie", "delta-m", "--n", "3"])).trim(), "2,1,0");
}

#[test]
fn pfrac_exact() {
    assert_eq!(stdout(&run(&["zeta", "pfrac", "--s", "1,2"])).trim(), "1/3,-1/3");
}

#[test]
fn heat_weyl_reports_slope() {
    let text = stdout(&run(&[
        "heat",
        "weyl",
        "--model",
        "circle-reflection",
        "--rmax",
        "40000",
    ]));
    let slope: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("fitted_slope="))
        .unwrap()
        .parse()
        .unwrap();
    assert!((slope - 1.0).abs() < 0.02);
}

#[test]
fn invalid_input_exits_2() {
    // repeated squares
    assert_eq!(run(&["zeta", "pfrac", "--s", "1,-1"]).status.code(), Some(2));
    assert_eq!(run(&["lie", "delta-m", "--n", "0"]).status.code(), Some(2));
    assert_eq!(
        run(&["--threads", "0", "lie", "delta-m", "--n", "2"]).status.code(),
        Some(2)
    );
}

#[test]
fn numerical_guard_exits_3() {
    let out = run(&["lie", "character", "--lambda", "1,0", "--angles", "0,0", "--strict"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    let dir = scratch("parabolic");
    let spec = dir.join("parabolic.toml");
    std::fs::write(&spec, "model = \"H2-real-2x2\"\ngenerators = [[1.0, 1.0, 0.0, 1.0]]\n").unwrap();
    let out = run(&[
        "spectrum",
        "compute",
        "--spec",
        spec.to_str().unwrap(),
        "--max-word-len",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn validate_does_not_compute() {
    let dir = scratch("validate");
    let spec = dir.join("g.toml");
    std::fs::write(&spec, SCHOTTKY).unwrap();
    let text = stdout(&run(&[
        "--validate",
        "spectrum",
        "compute",
        "--spec",
        spec.to_str().unwrap(),
    ]));
    assert!(text.starts_with("ok: 2 generators"), "{text}");
    let bad = dir.join("bad.toml");
    std::fs::write(&bad, "model = \"H2-real-2x2\"\ngenerators = [[2.0, 0.0, 0.0, 2.0]]\n").unwrap();
    assert_eq!(
        run(&["--validate", "spectrum", "compute", "--spec", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn spectrum_csv_round_trips_and_ignores_threads() {
    let dir = scratch("spectrum");
    let spec = dir.join("g.toml");
    std::fs::write(&spec, SCHOTTKY).unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let csv = dir.join(format!("spectrum-{threads}.csv"));
        stdout(&run(&[
            "--threads",
            threads,
            "-o",
            csv.to_str().unwrap(),
            "spectrum",
            "compute",
            "--spec",
            spec.to_str().unwrap(),
            "--max-word-len",
            "5",
            "--cutoff",
            "4",
        ]));
        outputs.push(std::fs::read_to_string(&csv).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let parsed = LengthSpectrum::from_csv_str(&outputs[0]).unwrap();
    assert!(parsed.hyperbolic().count() > 0);
    assert_eq!(parsed.to_csv_string(), outputs[0]);

    // log Z over the same file, again with two thread counts
    let csv = dir.join("spectrum-1.csv");
    let mut evals = Vec::new();
    for threads in ["1", "3"] {
        evals.push(stdout(&run(&[
            "--threads",
            threads,
            "zeta",
            "eval",
            "--spectrum",
            csv.to_str().unwrap(),
            "--sigma",
            "1",
            "--vol",
            "1",
            "--s-grid",
            "6:7:0.5,0:1:1",
            "--allow-ambiguous",
        ])));
    }
    assert_eq!(evals[0], evals[1]);
    assert!(evals[0].starts_with("re_s,im_s,re_logZ,im_logZ,absZ"));
}

#[test]
fn selftest_passes() {
    let text = stdout(&run(&["selftest", "--seed", "3", "--samples", "40"]));
    assert!(!text.contains("FAIL"), "{text}");
}
