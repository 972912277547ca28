use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use complex_hoeffding::bounds::extended::{to_f64, Oracle};
use complex_hoeffding::bounds::{envelope, g_function};
use complex_hoeffding::regions::figure::{figure_checks, figure_panels, three_point_convexity};
use complex_hoeffding::regions::{sample_region, trace_boundary, BoundaryCurve, FamilyClass};
use complex_hoeffding::search::{
    compute_d0, sup_abs_three_point, sup_abs_two_point, OptimizationResult, DEFAULT_THREE_POINT_BUDGET,
    DEFAULT_TWO_POINT_BUDGET,
};
use complex_hoeffding::verify::{q_report, run_suite, verify_distribution, Precision, Suite};
use complex_hoeffding::FiniteDistribution;

#[derive(Parser, Debug)]
#[command(name = "complex-hoeffding", version, about = "Bounds, extremal searches and attainable regions for E e^Z")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads, 0 for one per core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[arg(long, global = true, value_enum, default_value_t = PrecisionArg::Double)]
    precision: PrecisionArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PrecisionArg {
    Double,
    Extended,
}

impl PrecisionArg {
    fn name(self) -> &'static str {
        match self {
            PrecisionArg::Double => "double",
            PrecisionArg::Extended => "extended",
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ClassArg {
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
}

impl ClassArg {
    fn family(self) -> FamilyClass {
        match self {
            ClassArg::Two => FamilyClass::TwoPoint,
            ClassArg::Three => FamilyClass::ThreePoint,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    All,
    #[value(name = "complex_dist")]
    ComplexDist,
    Bounds,
    Families,
    Search,
    Caratheodory,
    Regions,
}

impl SuiteArg {
    fn suite(self) -> Suite {
        match self {
            SuiteArg::All => Suite::All,
            SuiteArg::ComplexDist => Suite::ComplexDist,
            SuiteArg::Bounds => Suite::Bounds,
            SuiteArg::Families => Suite::Families,
            SuiteArg::Search => Suite::Search,
            SuiteArg::Caratheodory => Suite::Caratheodory,
            SuiteArg::Regions => Suite::Regions,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Table of G(d), the envelope e^(d^2/8) - 1 and their ratio.
    Gfun {
        #[arg(long, default_value_t = 0.0)]
        d_min: f64,
        #[arg(long, default_value_t = 5.0)]
        d_max: f64,
        #[arg(long, default_value_t = 51)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Critical diameter below which Re E e^Z stays non-negative.
    D0 {
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        /// Evaluations per two-point search.
        #[arg(long, default_value_t = DEFAULT_TWO_POINT_BUDGET)]
        budget: usize,
    },
    /// sup |E e^Z - 1| over the two- or three-point class.
    Supremum {
        #[arg(long, value_enum)]
        class: ClassArg,
        #[arg(long)]
        d: f64,
        /// Defaults to 65536 (two-point) or 200000 (three-point).
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Boundary of the attainable region for one class and diameter.
    Region {
        #[arg(long)]
        d: f64,
        #[arg(long, value_enum)]
        class: ClassArg,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 512)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        cloud_out: Option<PathBuf>,
    },
    /// Run invariant checks; exits 1 when any fails.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        /// Check a distribution file (`re im prob` per line) instead of a suite.
        #[arg(long)]
        dist: Option<PathBuf>,
        #[arg(long)]
        report_out: Option<PathBuf>,
        /// Write the Q/R stationarity comparison here.
        #[arg(long)]
        q_report: Option<PathBuf>,
        #[arg(long, default_value_t = 16)]
        q_samples: usize,
    },
    /// Boundaries of both classes for d = 2, 3, 4, 5 plus shape checks.
    Figure1 {
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 512)]
        grid: usize,
        /// Cloud size for the d = 3 convexity diagnostic.
        #[arg(long, default_value_t = 4_000_000)]
        convexity_samples: usize,
        #[arg(long, default_value_t = 2048)]
        convexity_grid: usize,
    },
}

/// Invalid option values; reported with exit status 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn validate(cmd: &Command) -> Result<()> {
    let positive = |name: &str, v: f64| {
        if v.is_finite() && v > 0.0 {
            Ok(())
        } else {
            Err(usage(format!("--{name} must be a positive number, got {v}")))
        }
    };
    let at_least = |name: &str, v: usize, min: usize| {
        if v >= min {
            Ok(())
        } else {
            Err(usage(format!("--{name} must be at least {min}, got {v}")))
        }
    };
    match cmd {
        Command::Gfun { d_min, d_max, steps, .. } => {
            if !(d_min.is_finite() && *d_min >= 0.0 && d_max.is_finite() && d_max >= d_min) {
                return Err(usage(format!("need 0 <= --d-min <= --d-max, got {d_min}, {d_max}")));
            }
            at_least("steps", *steps, 1)?;
            if *steps == 1 && d_max != d_min {
                return Err(usage("--steps 1 needs --d-min equal to --d-max"));
            }
        }
        Command::D0 { tol, budget } => {
            if !(tol.is_finite() && *tol >= 1e-9) {
                return Err(usage(format!("--tol must be at least 1e-9, got {tol:e}")));
            }
            at_least("budget", *budget, 1)?;
        }
        Command::Supremum { d, budget, .. } => {
            positive("d", *d)?;
            if let Some(b) = budget {
                at_least("budget", *b, 1)?;
            }
        }
        Command::Region { d, samples, grid, .. } => {
            positive("d", *d)?;
            at_least("samples", *samples, 1)?;
            at_least("grid", *grid, 4)?;
        }
        Command::Verify { q_samples, .. } => at_least("q-samples", *q_samples, 1)?,
        Command::Figure1 { samples, grid, convexity_samples, convexity_grid, .. } => {
            at_least("samples", *samples, 1)?;
            at_least("grid", *grid, 4)?;
            at_least("convexity-samples", *convexity_samples, 1)?;
            at_least("convexity-grid", *convexity_grid, 4)?;
        }
    }
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

/// Write to `path`, or stdout when absent.
fn emit(path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        Some(p) => write_file(p, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn curves_csv(header: &str, curves: &[BoundaryCurve]) -> String {
    let mut s = format!("# re,im; {header}\n");
    for (k, c) in curves.iter().enumerate() {
        if k > 0 {
            s.push('\n');
        }
        for v in &c.vertices {
            let _ = writeln!(s, "{:?},{:?}", v.re, v.im);
        }
    }
    s
}

fn gfun(g: &Global, d_min: f64, d_max: f64, steps: usize, out: Option<&Path>) -> Result<()> {
    let mut s = format!(
        "# d,G,envelope,ratio; gfun --d-min {d_min} --d-max {d_max} --steps {steps} --seed {} --precision {}\n",
        g.seed,
        g.precision.name()
    );
    let _ = writeln!(s, "d,G,envelope,ratio");
    let mut oracle = Oracle::default();
    for k in 0..steps {
        let d = if steps == 1 { d_min } else { d_min + (d_max - d_min) * k as f64 / (steps - 1) as f64 };
        let (gv, ev) = match g.precision {
            PrecisionArg::Double => (g_function(d)?, envelope(d)?),
            PrecisionArg::Extended if d == 0.0 => (0.0, 0.0),
            PrecisionArg::Extended => (to_f64(&oracle.g_function(d)), to_f64(&oracle.envelope(d))),
        };
        let ratio = if d == 0.0 { 1.0 } else { gv / ev };
        let _ = writeln!(s, "{d:?},{gv:?},{ev:?},{ratio:?}");
    }
    emit(out, &s)
}

fn d0(g: &Global, tol: f64, budget: usize) -> Result<()> {
    let r = compute_d0(tol, budget)?;
    let digits = (-tol.log10()).ceil().max(0.0) as usize;
    let p = r.extremal_params;
    println!("# d0 --tol {tol:e} --budget {budget} --seed {}", g.seed);
    println!("d0 = {:.*} ± {tol:e}", digits, r.d0);
    println!("bracket = [{:?}, {:?}]", r.bracket.0, r.bracket.1);
    println!("ell = {:?}", p.ell);
    println!("x = {:?}", p.x);
    println!("theta = {:?}", p.theta);
    println!("bisection_steps = {}", r.history.len() - 1);
    Ok(())
}

fn format_result(r: &OptimizationResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "best_value: {:?}", r.best_value);
    let _ = writeln!(s, "best_params: {:?}", r.best_params);
    let _ = writeln!(s, "evaluations: {}", r.evaluations);
    let _ = writeln!(s, "converged: {}", r.converged);
    let _ = writeln!(s, "refinement_history: [");
    for (v, p) in &r.refinement_history {
        let _ = writeln!(s, "  {{ value: {v:?}, params: {p:?} }},");
    }
    let _ = writeln!(s, "]");
    s
}

fn supremum(g: &Global, class: ClassArg, d: f64, budget: Option<usize>) -> Result<()> {
    let (r, budget) = match class {
        ClassArg::Two => {
            let b = budget.unwrap_or(DEFAULT_TWO_POINT_BUDGET);
            (sup_abs_two_point(d, b)?, b)
        }
        ClassArg::Three => {
            let b = budget.unwrap_or(DEFAULT_THREE_POINT_BUDGET);
            (sup_abs_three_point(d, b, g.seed)?, b)
        }
    };
    println!("# supremum --class {} --d {d} --budget {budget} --seed {}", class.family().points(), g.seed);
    println!("g_function: {:?}", g_function(d)?);
    print!("{}", format_result(&r));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn region(g: &Global, d: f64, class: ClassArg, samples: usize, grid: usize, out: &Path, cloud_out: Option<&Path>) -> Result<()> {
    let k = class.family().points();
    let config = format!("region --d {d} --class {k} --samples {samples} --grid {grid} --seed {}", g.seed);
    let cloud = sample_region(d, class.family(), samples, g.seed)?;
    let curves = trace_boundary(&cloud, grid)?;
    write_file(out, &curves_csv(&config, &curves))?;
    if let Some(path) = cloud_out {
        let mut s = format!("# re,im; {config}\n");
        for p in &cloud.points {
            let _ = writeln!(s, "{:?},{:?}", p.re, p.im);
        }
        write_file(path, &s)?;
    }
    eprintln!("{} contour(s), {} vertices", curves.len(), curves.iter().map(|c| c.vertices.len()).sum::<usize>());
    Ok(())
}

/// Returns whether every check passed.
fn verify(
    g: &Global,
    suite: SuiteArg,
    dist: Option<&Path>,
    report_out: Option<&Path>,
    q_out: Option<&Path>,
    q_samples: usize,
) -> Result<bool> {
    let report = match dist {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let z: FiniteDistribution = text.parse().with_context(|| format!("parsing {}", path.display()))?;
            verify_distribution(&z, g.seed)
        }
        None => {
            let precision = match g.precision {
                PrecisionArg::Double => Precision::Double,
                PrecisionArg::Extended => Precision::Extended,
            };
            run_suite(suite.suite(), g.seed, precision)
        }
    };
    let what = match dist {
        Some(p) => format!("--dist {}", p.display()),
        None => format!("--suite {}", suite.suite()),
    };
    let text = format!("# verify {what} --seed {} --precision {}\n{}", g.seed, g.precision.name(), report.to_text());
    print!("{text}");
    if let Some(p) = report_out {
        write_file(p, &text)?;
    }
    if let Some(p) = q_out {
        write_file(p, &q_report(q_samples, g.seed)?.to_text(g.seed))?;
    }
    for f in report.failures() {
        eprintln!("verification failed: {}/{}: {}", f.suite, f.name, f.detail);
    }
    Ok(report.all_passed())
}

fn figure1(g: &Global, out_dir: &Path, samples: usize, grid: usize, csamples: usize, cgrid: usize) -> Result<()> {
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let panels = figure_panels(samples, grid, g.seed)?;
    for p in &panels {
        let config = format!(
            "figure1 panel class={} d={} --samples {samples} --grid {grid} --seed {}",
            p.class.points(),
            p.d,
            g.seed
        );
        write_file(&out_dir.join(p.file_name()), &curves_csv(&config, &p.curves))?;
    }
    let checks = figure_checks(&panels)?;
    let mut s = format!(
        "# figure1 --samples {samples} --grid {grid} --convexity-samples {csamples} --convexity-grid {cgrid} --seed {}\n",
        g.seed
    );
    let _ = writeln!(s, "class,d,curves,closed,max_abs_minus_one,G,cell_size");
    for p in &checks.panels {
        let _ = writeln!(
            s,
            "{},{},{},{},{:?},{:?},{:?}",
            p.class.points(),
            p.d,
            p.curves,
            p.all_closed,
            p.max_distance_from_one,
            p.g,
            p.cell_size
        );
    }
    let _ = writeln!(s);
    let _ = writeln!(s, "inner,outer,vertices_outside_2_cells");
    for (a, b, n) in &checks.nesting {
        let _ = writeln!(s, "{a},{b},{n}");
    }
    let _ = writeln!(s);
    let conv = three_point_convexity(3.0, csamples, cgrid, g.seed)?;
    let _ = writeln!(s, "convexity class=3 d=3");
    let _ = writeln!(s, "gap,{:?}", conv.gap);
    let _ = writeln!(s, "missing_cells,{}", conv.missing_cells);
    let _ = writeln!(s, "hull_re_range,{:?},{:?}", conv.hull_re_range.0, conv.hull_re_range.1);
    match (conv.pockets.first(), conv.relative_position()) {
        (Some(p), Some(pos)) => {
            let _ = writeln!(s, "largest_pocket_cells,{}", p.cells);
            let _ = writeln!(s, "largest_pocket_centroid,{:?},{:?}", p.centroid.re, p.centroid.im);
            let _ = writeln!(s, "largest_pocket_relative_position,{pos:?}");
        }
        _ => {
            let _ = writeln!(s, "largest_pocket_cells,0");
        }
    }
    write_file(&out_dir.join("figure1_summary.txt"), &s)?;
    eprintln!("wrote {} boundary files and figure1_summary.txt to {}", panels.len(), out_dir.display());
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    validate(&cli.command)?;
    if cli.global.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.global.threads)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let g = &cli.global;
    match &cli.command {
        Command::Gfun { d_min, d_max, steps, out } => gfun(g, *d_min, *d_max, *steps, out.as_deref())?,
        Command::D0 { tol, budget } => d0(g, *tol, *budget)?,
        Command::Supremum { class, d, budget } => supremum(g, *class, *d, *budget)?,
        Command::Region { d, class, samples, grid, out, cloud_out } => {
            region(g, *d, *class, *samples, *grid, out, cloud_out.as_deref())?
        }
        Command::Verify { suite, dist, report_out, q_report, q_samples } => {
            return verify(g, *suite, dist.as_deref(), report_out.as_deref(), q_report.as_deref(), *q_samples)
        }
        Command::Figure1 { out_dir, samples, grid, convexity_samples, convexity_grid } => {
            figure1(g, out_dir, *samples, *grid, *convexity_samples, *convexity_grid)?
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.is::<Usage>() => {
            eprintln!("error: {e}\n\nRun with --help for usage.");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn validation_rejects_bad_ranges() {
        let bad = [
            Command::D0 { tol: 1e-10, budget: 10 },
            Command::Supremum { class: ClassArg::Two, d: 0.0, budget: None },
            Command::Gfun { d_min: 2.0, d_max: 1.0, steps: 3, out: None },
            Command::Region { d: 1.0, class: ClassArg::Three, samples: 0, grid: 512, out: "x".into(), cloud_out: None },
        ];
        for c in bad {
            assert!(validate(&c).unwrap_err().is::<Usage>(), "{c:?}");
        }
    }

    #[test]
    fn curves_are_blank_line_separated() {
        use complex_hoeffding::ComplexValue;
        let c = |x: f64| BoundaryCurve { vertices: vec![ComplexValue::new(x, 0.0); 4], cell_size: 1.0 };
        let s = curves_csv("cfg", &[c(0.0), c(1.0)]);
        assert!(s.starts_with("# re,im; cfg\n"));
        assert_eq!(s.lines().filter(|l| l.is_empty()).count(), 1);
    }
}
