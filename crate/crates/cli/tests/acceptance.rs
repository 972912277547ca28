//! Acceptance criteria, one line each. Exits nonzero if any criterion fails.
//!
//! Criteria 1 and 10 and the Q report of 11 go through the built binary; the
//! rest call the library against independent references (the 512-bit
//! oracle, nalgebra eigensolves, direct atom sums, locally generated laws).

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use nalgebra::Matrix2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use complex_hoeffding::bounds::extended::{to_f64, Oracle};
use complex_hoeffding::bounds::{extremal_two_point, g_function, integral_identity_check, technical_check};
use complex_hoeffding::caratheodory::decompose;
use complex_hoeffding::families::{
    hessian_fd, r_matrix, r_min_eigenvalue, Functional, StationaryFrame, FD_STEP_FRACTION,
};
use complex_hoeffding::geometry::{distance_to_boundary, point_in_polygon};
use complex_hoeffding::search::{stationary_support, sup_abs_three_point, sup_abs_two_point, DEFAULT_TWO_POINT_BUDGET};
use complex_hoeffding::{ComplexValue, FiniteDistribution};

const BIN: &str = env!("CARGO_BIN_EXE_complex-hoeffding");

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn c(re: f64, im: f64) -> ComplexValue {
    ComplexValue::new(re, im)
}

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xacce_0000 + tag)
}

/// Zero-mean law on `n` atoms, rescaled to diameter `d`. Mean and diameter
/// are computed here from the raw atoms.
fn zero_mean_law(r: &mut ChaCha8Rng, n: usize, d: f64) -> FiniteDistribution {
    loop {
        let pts: Vec<ComplexValue> = (0..n).map(|_| c(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))).collect();
        let w: Vec<f64> = (0..n).map(|_| r.random_range(0.05..1.0)).collect();
        let total: f64 = w.iter().sum();
        let mean: ComplexValue = pts.iter().zip(&w).map(|(z, p)| z * (p / total)).sum();
        let mut diam: f64 = 0.0;
        for a in &pts {
            for b in &pts {
                diam = diam.max((a - b).norm());
            }
        }
        if diam == 0.0 {
            continue;
        }
        let atoms = pts.iter().zip(&w).map(|(z, p)| ((z - mean) * (d / diam), p / total));
        if let Ok(law) = FiniteDistribution::new(atoms) {
            if law.len() == n {
                return law.center();
            }
        }
    }
}

fn list(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:.6e}")).collect::<Vec<_>>().join(", ")
}

fn exp_sum(z: &FiniteDistribution) -> ComplexValue {
    z.atoms().iter().map(|a| a.point.exp() * a.prob).sum()
}

fn run_bin(args: &[&str]) -> (bool, String, Duration) {
    let t = Instant::now();
    let out = Command::new(BIN).args(args).output().expect("running the binary");
    (out.status.success(), String::from_utf8_lossy(&out.stdout).into_owned(), t.elapsed())
}

fn field(text: &str, key: &str) -> Option<f64> {
    text.lines().find_map(|l| l.strip_prefix(key)).and_then(|v| v.trim().parse().ok())
}

fn criterion_1() -> Outcome {
    let (ok, out, took) = run_bin(&["d0", "--tol", "1e-7"]);
    let bracket = out.lines().find_map(|l| l.strip_prefix("bracket = [")).map(|s| {
        let v: Vec<f64> = s.trim_end_matches(']').split(',').map(|x| x.trim().parse().unwrap_or(f64::NAN)).collect();
        v
    });
    let (Some(b), Some(ell), Some(x), Some(theta)) = (bracket, field(&out, "ell = "), field(&out, "x = "), field(&out, "theta = "))
    else {
        return outcome(false, format!("unparsable output (exit ok: {ok}): {out}"));
    };
    let d0 = 0.5 * (b[0] + b[1]);
    let pass = ok
        && (d0 - 3.120491233).abs() <= 1e-6
        && (ell - d0).abs() <= 1e-5
        && (x - 0.636527202).abs() <= 1e-5
        && (theta - 1.9198934984).abs() <= 1e-5
        && took.as_secs_f64() <= 60.0;
    outcome(pass, format!("d0={d0:.10} ell={ell:.9} x={x:.9} theta={theta:.10} in {:.2}s", took.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let mut oracle = Oracle::default();
    let (mut sup_err, mut eq_err): (f64, f64) = (0.0, 0.0);
    for d in [0.5, 1.0, 2.0, 3.0] {
        let g = to_f64(&oracle.g_function(d));
        let s = match sup_abs_two_point(d, DEFAULT_TWO_POINT_BUDGET) {
            Ok(r) => r.best_value,
            Err(e) => return outcome(false, format!("search failed at d={d}: {e}")),
        };
        sup_err = sup_err.max((s - g).abs());
        let x = extremal_two_point(d).expect("extremal law").center();
        eq_err = eq_err.max((exp_sum(&x) - 1.0 - g).norm());
    }
    outcome(
        sup_err <= 1e-6 && eq_err <= 1e-10,
        format!("max |sup2 - G| = {sup_err:.3e}, max |E e^(X_d - E X_d) - 1 - G| = {eq_err:.3e} (G from 512-bit oracle)"),
    )
}

fn criterion_3() -> Outcome {
    let mut oracle = Oracle::default();
    let mut ratios = Vec::new();
    let mut agree: f64 = 0.0;
    for d in [0.05f64, 0.1, 0.2] {
        let g = g_function(d).expect("G");
        agree = agree.max((g - to_f64(&oracle.g_function(d))).abs() / g);
        ratios.push((g - d * d / 8.0 - 7.0 * d.powi(4) / 1152.0) / d.powi(6));
    }
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    outcome(
        lo > 0.0 && hi <= 2.0 * lo && agree <= 1e-13,
        format!("remainder/d^6 = {}, spread {:.4}, G vs oracle {agree:.1e}", list(&ratios), hi / lo),
    )
}

fn criterion_4() -> Outcome {
    let t = Instant::now();
    let mut r = rng(4);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..100_000 {
        let n = r.random_range(2..=10);
        let d = 10.0 * (1.0 - r.random::<f64>());
        let z = zero_mean_law(&mut r, n, d);
        let dd = z.diameter();
        worst = worst.max((exp_sum(&z) - 1.0).norm() - ((dd * dd / 8.0).exp() - 1.0));
    }
    let secs = t.elapsed().as_secs_f64();
    outcome(worst <= 1e-9 && secs <= 30.0, format!("10^5 laws: max |E e^Z - 1| - (e^(d^2/8) - 1) = {worst:.3e} in {secs:.2}s"))
}

fn criterion_5() -> Outcome {
    let mut oracle = Oracle::default();
    let mut excess = Vec::new();
    for d in [1.0, 2.0, 3.0] {
        match sup_abs_three_point(d, 1_000_000, 0) {
            Ok(r) => excess.push(r.best_value - to_f64(&oracle.g_function(d))),
            Err(e) => return outcome(false, format!("search failed at d={d}: {e}")),
        }
    }
    let worst = excess.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    outcome(worst <= 1e-5, format!("sup3 - G at d = 1, 2, 3 (budget 10^6): {}", list(&excess)))
}

fn criterion_6() -> Outcome {
    let (mut m1, mut m2) = (f64::INFINITY, f64::INFINITY);
    let (mut t1, mut t2) = (0.0, 0.0);
    let mut all = true;
    let mut oracle = Oracle::default();
    for k in 0..1_000 {
        let t = 3.0 + 27.0 * k as f64 / 999.0;
        let b = technical_check(t).expect("t >= 3");
        // both margins again from the 512-bit G
        let e = (t * t / 8.0).exp();
        let own1 = 1.65 * e - (to_f64(&oracle.g_function(2.0 * t)) + 1.0).sqrt();
        let own2 = 0.9 * e - (to_f64(&oracle.g_function(t)) + 1.0);
        all &= b.tech1_ok && b.tech2_ok && own1 > 0.0 && own2 > 0.0;
        all &= (own1 - b.tech1_margin).abs() <= 1e-12 * e && (own2 - b.tech2_margin).abs() <= 1e-12 * e;
        if b.tech1_margin < m1 {
            (m1, t1) = (b.tech1_margin, t);
        }
        if b.tech2_margin < m2 {
            (m2, t2) = (b.tech2_margin, t);
        }
    }
    outcome(all, format!("min tech1 margin {m1:.6e} at t={t1:.4}, min tech2 margin {m2:.6e} at t={t2:.4}"))
}

fn criterion_7() -> Outcome {
    let mut r = rng(7);
    let (mut recon, mut mean, mut size): (f64, f64, usize) = (0.0, 0.0, 0);
    for _ in 0..10_000 {
        let n = r.random_range(4..=10);
        let d = 10.0 * (1.0 - r.random::<f64>());
        let z = zero_mean_law(&mut r, n, d);
        let dec = match decompose(&z) {
            Ok(m) => m,
            Err(e) => return outcome(false, format!("decompose failed: {e}")),
        };
        // rebuild the mixture by hand, atom by atom
        let mut probs = vec![0.0; z.len()];
        for (w, comp) in &dec.components {
            size = size.max(comp.len());
            let m: ComplexValue = comp.atoms().iter().map(|a| a.point * a.prob).sum();
            mean = mean.max(m.norm());
            for a in comp.atoms() {
                match z.atoms().iter().position(|b| b.point == a.point) {
                    Some(i) => probs[i] += w * a.prob,
                    None => return outcome(false, "component atom not in the input"),
                }
            }
        }
        for (a, p) in z.atoms().iter().zip(&probs) {
            recon = recon.max((a.prob - p).abs());
        }
    }
    outcome(
        recon <= 1e-9 && mean <= 1e-9 && size <= 3,
        format!("10^4 laws: max atomwise error {recon:.3e}, max component |mean| {mean:.3e}, max component size {size}"),
    )
}

fn criterion_8() -> Outcome {
    let mut r = rng(8);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..10_000 {
        let n = r.random_range(2..=10);
        let pts: Vec<ComplexValue> = (0..n).map(|_| c(r.random_range(-3.0..3.0), r.random_range(-3.0..3.0))).collect();
        let z = FiniteDistribution::uniform(&pts).expect("law");
        let disk = z.enclosing_disk();
        let covers = pts.iter().all(|p| (p - disk.center).norm() <= disk.radius * (1.0 + 1e-12) + 1e-15);
        if !covers {
            return outcome(false, "enclosing disk misses a support point");
        }
        worst = worst.max(disk.radius - z.diameter() / 3f64.sqrt());
    }
    let mut eq: f64 = 0.0;
    for k in 0..100 {
        let rot = ComplexValue::from_polar(1.0 + k as f64 / 100.0, 0.1 * k as f64);
        let pts: Vec<ComplexValue> = (0..3).map(|j| c(0.3, -0.2) + rot * ComplexValue::from_polar(1.0, 2.0 * PI * j as f64 / 3.0)).collect();
        let z = FiniteDistribution::uniform(&pts).expect("law");
        eq = eq.max((z.enclosing_disk().radius - z.diameter() / 3f64.sqrt()).abs());
    }
    outcome(worst <= 1e-12 && eq <= 1e-12, format!("max radius - diam/sqrt3 = {worst:.3e}; equilateral gap {eq:.3e}"))
}

fn criterion_9() -> Outcome {
    let mut r = rng(9);
    let (mut mb, mut cs): (f64, f64) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for _ in 0..1_000 {
        let n = r.random_range(2..=10);
        let d = r.random_range(3.0..=8.0);
        let z = zero_mean_law(&mut r, n, d);
        let dd = z.diameter();
        let lhs: ComplexValue = z.atoms().iter().map(|a| a.point * a.point.exp() * a.prob).sum();
        let e = exp_sum(&z);
        let m2: f64 = z.atoms().iter().map(|a| a.point.norm_sqr() * a.prob).sum();
        let var: f64 = z.atoms().iter().map(|a| (a.point.exp() - e).norm_sqr() * a.prob).sum();
        mb = mb.max(lhs.norm() / (0.75 * dd * (dd * dd / 8.0).exp()) - 1.0);
        cs = cs.max(lhs.norm() - (m2 * var).sqrt() * (1.0 + 1e-12));
    }
    let res: Vec<f64> = [3.0, 5.0, 10.0].iter().map(|&d| integral_identity_check(d).unwrap_or(f64::INFINITY)).collect();
    let worst_res = res.iter().copied().fold(0.0, f64::max);
    outcome(
        mb <= 0.0 && cs <= 0.0 && worst_res <= 1e-8,
        format!("mbound ratio - 1 max {mb:.3e}; Cauchy-Schwarz excess max {cs:.3e}; integral residuals {}", list(&res)),
    )
}

fn read_curves(path: &Path) -> std::io::Result<Vec<Vec<ComplexValue>>> {
    let text = std::fs::read_to_string(path)?;
    let mut curves = vec![Vec::new()];
    for line in text.lines() {
        if line.starts_with('#') {
            continue;
        }
        if line.trim().is_empty() {
            curves.push(Vec::new());
            continue;
        }
        let mut it = line.split(',').map(|x| x.trim().parse::<f64>().unwrap_or(f64::NAN));
        let (re, im) = (it.next().unwrap_or(f64::NAN), it.next().unwrap_or(f64::NAN));
        curves.last_mut().unwrap().push(c(re, im));
    }
    curves.retain(|v| !v.is_empty());
    Ok(curves)
}

fn area(poly: &[ComplexValue]) -> f64 {
    poly.windows(2).map(|w| w[0].re * w[1].im - w[1].re * w[0].im).sum::<f64>() / 2.0
}

fn summary_value(text: &str, key: &str) -> Option<f64> {
    text.lines().find_map(|l| l.strip_prefix(&format!("{key},"))).and_then(|v| v.split(',').next()?.parse().ok())
}

fn criterion_10(dir: &Path) -> Outcome {
    let (ok, _, took) = run_bin(&["figure1", "--out-dir", dir.to_str().unwrap()]);
    if !ok {
        return outcome(false, "figure1 exited with failure");
    }
    let Ok(summary) = std::fs::read_to_string(dir.join("figure1_summary.txt")) else {
        return outcome(false, "missing figure1_summary.txt");
    };
    let mut outer = Vec::new();
    let mut closed = true;
    let mut g_cells: f64 = 0.0;
    let mut oracle = Oracle::default();
    for k in [2, 3] {
        for d in [2, 3, 4, 5] {
            let path = dir.join(format!("boundary_class{k}_d{d}.csv"));
            let curves = match read_curves(&path) {
                Ok(cv) if !cv.is_empty() => cv,
                _ => return outcome(false, format!("missing or empty {}", path.display())),
            };
            closed &= curves.iter().all(|v| v.len() >= 4 && v.first() == v.last() && area(v) > 0.0);
            let big = curves.iter().max_by(|a, b| area(a).total_cmp(&area(b))).unwrap().clone();
            // cell size from the summary row for this panel
            let row = summary.lines().find(|l| l.starts_with(&format!("{k},{d},")));
            let cell = row.and_then(|l| l.rsplit(',').next()?.parse::<f64>().ok()).unwrap_or(f64::NAN);
            if k == 2 {
                let m = big.iter().map(|v| (v - 1.0).norm()).fold(0.0, f64::max);
                g_cells = g_cells.max((m - to_f64(&oracle.g_function(d as f64))).abs() / cell);
            }
            outer.push((k, d, big, cell));
        }
    }
    let mut nest_fail = 0;
    for (ka, da, a, ca) in &outer {
        for (kb, db, b, cb) in &outer {
            let related = (ka == kb && *db == da + 1) || (*ka == 2 && *kb == 3 && da == db);
            if related {
                let poly = &b[..b.len() - 1];
                let margin = 2.0 * ca.max(*cb);
                nest_fail += a.iter().filter(|&&v| !point_in_polygon(v, poly) && distance_to_boundary(v, poly) > margin).count();
            }
        }
    }
    let gap = summary_value(&summary, "gap").unwrap_or(f64::NAN);
    let pocket = summary_value(&summary, "largest_pocket_cells").unwrap_or(0.0);
    let pos = summary_value(&summary, "largest_pocket_relative_position").unwrap_or(f64::NAN);
    let pass = closed && nest_fail == 0 && g_cells <= 2.0 && gap > 0.0 && pocket > 0.0 && pos <= 0.05;
    outcome(
        pass,
        format!(
            "closed {closed}, nesting violations {nest_fail}, two-point max |p-1| vs G within {g_cells:.2} cells; \
             d=3 gap {gap:.3e}, largest pocket {pocket} cells at relative position {pos:.4} ({:.1}s)",
            took.as_secs_f64()
        ),
    )
}

fn criterion_11(dir: &Path) -> Outcome {
    let mut r = rng(11);
    let mut eig: f64 = 0.0;
    for _ in 0..10_000 {
        let (c0, c1) = (r.random_range(-3.0..3.0), r.random_range(-3.0..3.0));
        let f = StationaryFrame {
            v: r.random_range(-3.0..3.0),
            w: r.random_range(-3.0..3.0),
            c0,
            c1,
            delta: (c0 - 1.0f64).hypot(c1),
            convention: Functional::RealPart,
        };
        let m = r_matrix(&f);
        let direct = Matrix2::new(m.xx, m.xy, m.xy, m.yy).symmetric_eigen().eigenvalues.min();
        eig = eig.max((r_min_eigenvalue(&f) - direct).abs());
    }
    let (mut fd, mut tol): (f64, f64) = (0.0, 1e-4);
    for seed in 0..8 {
        let p = match stationary_support(Functional::RealPart, seed) {
            Ok(p) => p,
            Err(e) => return outcome(false, format!("no stationary support: {e}")),
        };
        let step = FD_STEP_FRACTION * p.support.diameter();
        tol = tol.max(10.0 * step * step);
        let h = hessian_fd(&p.support, Functional::RealPart, None).expect("stencil inside");
        fd = fd.max(h.max_abs_diff(&r_matrix(&p.frame)));
    }
    let (a, b) = (dir.join("q_report_a.txt"), dir.join("q_report_b.txt"));
    let mut reports = Vec::new();
    for path in [&a, &b] {
        let (ok, _, _) = run_bin(&["verify", "--suite", "caratheodory", "--q-report", path.to_str().unwrap()]);
        reports.push(if ok { std::fs::read(path).ok() } else { None });
    }
    let deterministic = matches!((&reports[0], &reports[1]), (Some(x), Some(y)) if x == y && !x.is_empty());
    let archived = archive(&a);
    outcome(
        eig <= 1e-12 && fd <= tol && deterministic && archived.is_some(),
        format!(
            "eigen gap {eig:.3e} on 10^4 frames; FD vs R {fd:.3e} (tol {tol:.1e}); Q report byte-identical across runs: {deterministic}; archived at {}",
            archived.map(|p| p.display().to_string()).unwrap_or_else(|| "<failed>".into())
        ),
    )
}

/// Copy the Q report to the build tree so it outlives the temporary dir.
fn archive(report: &Path) -> Option<PathBuf> {
    let dest = Path::new(env!("CARGO_TARGET_TMPDIR")).join("q_report.txt");
    std::fs::copy(report, &dest).ok().map(|_| dest)
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let dir = tempfile::tempdir().expect("temp dir");
    let criteria: Vec<Criterion> = vec![
        ("d0 reproduction", Box::new(criterion_1)),
        ("extremal attainment", Box::new(criterion_2)),
        ("series check", Box::new(criterion_3)),
        ("main-theorem property suite", Box::new(criterion_4)),
        ("three-point supremum", Box::new(criterion_5)),
        ("technical-lemma margins", Box::new(criterion_6)),
        ("Caratheodory reconstruction", Box::new(criterion_7)),
        ("Jung bound", Box::new(criterion_8)),
        ("proof-chain inequalities", Box::new(criterion_9)),
        ("region boundaries", Box::new(|| criterion_10(dir.path()))),
        ("Q/R algebra", Box::new(|| criterion_11(dir.path()))),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.passed {
            failed += 1;
        }
        println!("{} criterion {:>2} ({name}): {}", if o.passed { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
