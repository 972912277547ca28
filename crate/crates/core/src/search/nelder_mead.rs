//! Box-constrained Nelder-Mead. Trial points are projected onto the box.

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub max_evals: usize,
    /// Stop when the simplex values agree to `ftol * (1 + |f_best|)`.
    pub ftol: f64,
    /// and every vertex is within `xtol * width` of the best one per axis.
    pub xtol: f64,
    /// Initial edge length as a fraction of each box width.
    pub initial_step: f64,
}

impl Default for Options {
    fn default() -> Self {
        Self { max_evals: 2000, ftol: 1e-15, xtol: 1e-10, initial_step: 0.05 }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

fn project(x: &mut [f64], bounds: &[(f64, f64)]) {
    for (xi, &(lo, hi)) in x.iter_mut().zip(bounds) {
        *xi = xi.clamp(lo, hi);
    }
}

/// Minimize `f` from `x0`, restarting from a fresh small simplex around
/// the incumbent after each convergence until a restart stops improving.
pub fn minimize<F>(f: &F, x0: &[f64], bounds: &[(f64, f64)], opts: Options) -> Outcome
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    let mut best = run(f, x0, bounds, opts, opts.initial_step, opts.max_evals);
    let mut evals = best.evals;
    let mut step = opts.initial_step * 0.1;
    while best.converged && evals + 4 * (x0.len() + 1) <= opts.max_evals {
        let next = run(f, &best.x, bounds, opts, step, opts.max_evals - evals);
        evals += next.evals;
        let improved = next.value < best.value - opts.ftol * (1.0 + best.value.abs());
        if next.value < best.value || (next.value == best.value && next.x < best.x) {
            best = Outcome { converged: next.converged, ..next };
        }
        if !improved {
            break;
        }
        step *= 0.1;
    }
    best.evals = evals;
    best
}

fn run<F>(f: &F, x0: &[f64], bounds: &[(f64, f64)], opts: Options, step: f64, budget: usize) -> Outcome
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    let n = x0.len();
    let nf = n as f64;
    // dimension-adapted coefficients
    let (alpha, gamma, rho, sigma) = (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf);
    let width: Vec<f64> = bounds.iter().map(|&(lo, hi)| (hi - lo).max(f64::MIN_POSITIVE)).collect();
    let evals = std::cell::Cell::new(0usize);
    let eval = |x: &[f64]| {
        evals.set(evals.get() + 1);
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut start = x0.to_vec();
    project(&mut start, bounds);
    let mut simplex: Vec<(f64, Vec<f64>)> = Vec::with_capacity(n + 1);
    simplex.push((eval(&start), start.clone()));
    for i in 0..n {
        let mut v = start.clone();
        let h = step * width[i];
        v[i] = if v[i] + h <= bounds[i].1 { v[i] + h } else { v[i] - h };
        project(&mut v, bounds);
        simplex.push((eval(&v), v));
    }

    let order = |s: &mut Vec<(f64, Vec<f64>)>| {
        s.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal)))
    };
    let mut converged = false;
    loop {
        order(&mut simplex);
        let (fb, fw) = (simplex[0].0, simplex[n].0);
        let spread = simplex
            .iter()
            .skip(1)
            .flat_map(|(_, v)| v.iter().zip(&simplex[0].1).zip(&width).map(|((a, b), w)| (a - b).abs() / w))
            .fold(0.0, f64::max);
        if (fw - fb).abs() <= opts.ftol * (1.0 + fb.abs()) && spread <= opts.xtol {
            converged = true;
            break;
        }
        if evals.get() + n + 2 > budget {
            break;
        }
        let mut centroid = vec![0.0; n];
        for (_, v) in simplex.iter().take(n) {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / nf;
            }
        }
        let toward = |t: f64, from: &[f64]| -> Vec<f64> {
            let mut p: Vec<f64> = centroid.iter().zip(from).map(|(c, x)| c + t * (c - x)).collect();
            project(&mut p, bounds);
            p
        };
        let worst = simplex[n].1.clone();
        let xr = toward(alpha, &worst);
        let fr = eval(&xr);
        if fr < simplex[0].0 {
            let xe = toward(alpha * gamma, &worst);
            let fe = eval(&xe);
            simplex[n] = if fe < fr { (fe, xe) } else { (fr, xr) };
            continue;
        }
        if fr < simplex[n - 1].0 {
            simplex[n] = (fr, xr);
            continue;
        }
        let (xc, fc) = if fr < simplex[n].0 {
            let xc = toward(alpha * rho, &worst);
            let fc = eval(&xc);
            (xc, fc)
        } else {
            let xc = toward(-rho, &worst);
            let fc = eval(&xc);
            (xc, fc)
        };
        if fc < fr.min(simplex[n].0) {
            simplex[n] = (fc, xc);
            continue;
        }
        let best = simplex[0].1.clone();
        for item in simplex.iter_mut().skip(1) {
            let mut p: Vec<f64> = best.iter().zip(&item.1).map(|(b, x)| b + sigma * (x - b)).collect();
            project(&mut p, bounds);
            *item = (eval(&p), p);
        }
    }
    let (value, x) = simplex.swap_remove(0);
    Outcome { x, value, evals: evals.get(), converged }
}
