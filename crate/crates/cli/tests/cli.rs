use std::fs;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_complex-hoeffding");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn gfun_table_starts_at_zero() {
    let o = run(&["gfun", "--d-min", "0", "--d-max", "5", "--steps", "6"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "d,G,envelope,ratio");
    assert_eq!(rows.len(), 7);
    assert_eq!(rows[1], "0.0,0.0,0.0,1.0");
    assert!(text.lines().next().unwrap().contains("--seed 0"));
}

#[test]
fn gfun_extended_matches_double() {
    let a = stdout(&run(&["gfun", "--d-min", "0.5", "--d-max", "3", "--steps", "4"]));
    let b = stdout(&run(&["gfun", "--d-min", "0.5", "--d-max", "3", "--steps", "4", "--precision", "extended"]));
    for (x, y) in a.lines().skip(2).zip(b.lines().skip(2)) {
        let gx: f64 = x.split(',').nth(1).unwrap().parse().unwrap();
        let gy: f64 = y.split(',').nth(1).unwrap().parse().unwrap();
        assert!((gx - gy).abs() <= 1e-14 * gy, "{x} vs {y}");
    }
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["d0", "--tol", "1e-12"][..],
        &["supremum", "--class", "2", "--d", "-1"],
        &["supremum", "--class", "4", "--d", "1"],
        &["region", "--d", "2", "--class", "2", "--samples", "0", "--out", "/nonexistent/x.csv"],
        &["nonsense"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn supremum_two_point_reaches_g() {
    let text = stdout(&run(&["supremum", "--class", "2", "--d", "1"]));
    let g: f64 = text.lines().find_map(|l| l.strip_prefix("g_function: ")).unwrap().parse().unwrap();
    let v: f64 = text.lines().find_map(|l| l.strip_prefix("best_value: ")).unwrap().parse().unwrap();
    assert!((g - v).abs() < 1e-9);
    assert!(text.contains("refinement_history: ["));
}

#[test]
fn region_output_is_deterministic_and_confined() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, cloud) = (dir.path().join("a.csv"), dir.path().join("b.csv"), dir.path().join("cloud.csv"));
    for (out, threads) in [(&a, "1"), (&b, "3")] {
        let o = run(&[
            "region", "--d", "2", "--class", "3", "--samples", "20000", "--grid", "128", "--seed", "5", "--threads", threads,
            "--out", out.to_str().unwrap(), "--cloud-out", cloud.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert!(text.starts_with("# re,im; region --d 2 --class 3 --samples 20000 --grid 128 --seed 5\n"));
    assert_eq!(fs::read_to_string(&cloud).unwrap().lines().count(), 20_001);
    let mut names: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names, ["a.csv", "b.csv", "cloud.csv"]);
}

#[test]
fn verify_caratheodory_is_seeded() {
    let a = run(&["verify", "--suite", "caratheodory", "--seed", "7"]);
    let b = run(&["verify", "--suite", "caratheodory", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).lines().any(|l| l == "PASS 1/1"));
}

#[test]
fn verify_bounds_prints_margin_table() {
    let o = run(&["verify", "--suite", "bounds"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("technical_margins"));
    assert!(text.lines().filter(|l| l.starts_with("# tech t=")).count() >= 10);
}

#[test]
fn verify_dist_file_passes_and_fails() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.txt");
    fs::write(&good, "# square\n1 0 0.25\n-1 0 0.25\n0 1 0.25\n0 -1 0.25\n").unwrap();
    let o = run(&["verify", "--dist", good.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "1 0 0.5\n-1 0\n").unwrap();
    assert_eq!(run(&["verify", "--dist", bad.to_str().unwrap()]).status.code(), Some(1));
}
