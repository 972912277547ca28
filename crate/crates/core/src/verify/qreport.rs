//! Comparison of the quadratic forms at stationary supports with
//! finite-difference Hessians.
//!
//! For the modulus functional the report sets the entries of
//! [`q_matrix`], the claimed trace and determinant, and the matrix from the
//! second-order expansion ([`q_matrix_expanded`]) against the
//! finite-difference half-Hessian. Nothing here is asserted; the report
//! records which forms agree.

use std::fmt::Write;

use crate::families::{
    hessian_fd, q_det_claim, q_matrix, q_matrix_expanded, q_trace_claim, r_matrix, Functional, Sym2, FD_STEP_FRACTION,
};
use crate::search::stationary_support;
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct QRow {
    pub seed: u64,
    pub v: f64,
    pub w: f64,
    pub c0: f64,
    pub c1: f64,
    pub delta: f64,
    pub residual: f64,
    pub fd: Sym2,
    pub q: Sym2,
    pub q_expanded: Sym2,
    pub trace_claim: f64,
    pub det_claim: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QReport {
    pub rows: Vec<QRow>,
    /// Largest entrywise `|fd - q|`.
    pub q_entry_error: f64,
    pub q_expanded_entry_error: f64,
    /// Largest `|trace fd - trace claim|`.
    pub trace_claim_error: f64,
    pub det_claim_error: f64,
    /// Largest `|trace q - trace claim|`, the internal consistency of the
    /// stated matrix with its stated trace.
    pub q_trace_vs_claim: f64,
    pub q_det_vs_claim: f64,
    /// Largest entrywise `|fd - r|` at real-part stationary supports.
    pub r_entry_error: f64,
    /// `max(1e-4, 10 step^2)` at the largest step used.
    pub fd_tolerance: f64,
}

/// Tolerance a form must meet against finite differences to count as
/// agreeing.
fn agrees(err: f64, tol: f64) -> &'static str {
    if err <= tol {
        "agrees"
    } else {
        "disagrees"
    }
}

/// Build the report from `samples` modulus-stationary and `samples`
/// real-part-stationary supports, the `k`-th found from seed `seed + k`.
pub fn q_report(samples: usize, seed: u64) -> Result<QReport> {
    let mut rows = Vec::with_capacity(samples);
    let (mut qe, mut qxe, mut tre, mut dte, mut qtc, mut qdc, mut re) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut tol: f64 = 1e-4;
    for k in 0..samples as u64 {
        let s = seed.wrapping_add(k);
        let p = stationary_support(Functional::ModulusSquared, s)?;
        let step = FD_STEP_FRACTION * p.support.diameter();
        tol = tol.max(10.0 * step * step);
        let fd = hessian_fd(&p.support, Functional::ModulusSquared, None)?;
        let (q, q_expanded) = (q_matrix(&p.frame), q_matrix_expanded(&p.frame));
        let (trace_claim, det_claim) = (q_trace_claim(&p.frame), q_det_claim(&p.frame));
        qe = qe.max(fd.max_abs_diff(&q));
        qxe = qxe.max(fd.max_abs_diff(&q_expanded));
        tre = tre.max((fd.trace() - trace_claim).abs());
        dte = dte.max((fd.det() - det_claim).abs());
        qtc = qtc.max((q.trace() - trace_claim).abs());
        qdc = qdc.max((q.det() - det_claim).abs());
        let f = p.frame;
        rows.push(QRow { seed: s, v: f.v, w: f.w, c0: f.c0, c1: f.c1, delta: f.delta, residual: p.residual, fd, q, q_expanded, trace_claim, det_claim });

        let pr = stationary_support(Functional::RealPart, s)?;
        let fdr = hessian_fd(&pr.support, Functional::RealPart, None)?;
        re = re.max(fdr.max_abs_diff(&r_matrix(&pr.frame)));
    }
    Ok(QReport {
        rows,
        q_entry_error: qe,
        q_expanded_entry_error: qxe,
        trace_claim_error: tre,
        det_claim_error: dte,
        q_trace_vs_claim: qtc,
        q_det_vs_claim: qdc,
        r_entry_error: re,
        fd_tolerance: tol,
    })
}

impl QReport {
    pub fn summary_lines(&self) -> Vec<String> {
        let t = self.fd_tolerance;
        vec![
            format!("Q entries vs finite differences: max error {:.3e} ({})", self.q_entry_error, agrees(self.q_entry_error, t)),
            format!("Q trace claim vs finite differences: max error {:.3e} ({})", self.trace_claim_error, agrees(self.trace_claim_error, t)),
            format!("Q determinant claim vs finite differences: max error {:.3e} ({})", self.det_claim_error, agrees(self.det_claim_error, t)),
            format!("expanded Q vs finite differences: max error {:.3e} ({})", self.q_expanded_entry_error, agrees(self.q_expanded_entry_error, t)),
            format!("trace of Q entries vs trace claim: max difference {:.3e}", self.q_trace_vs_claim),
            format!("determinant of Q entries vs determinant claim: max difference {:.3e}", self.q_det_vs_claim),
            format!("R entries vs finite differences: max error {:.3e} ({})", self.r_entry_error, agrees(self.r_entry_error, t)),
            format!("finite-difference tolerance {:.1e}", t),
        ]
    }

    /// Plain-text report: summary as `#` lines, then one CSV row per
    /// modulus-stationary support.
    pub fn to_text(&self, seed: u64) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# Q/R stationarity report, seed {seed}, {} supports", self.rows.len());
        for line in self.summary_lines() {
            let _ = writeln!(s, "# {line}");
        }
        let _ = writeln!(
            s,
            "seed,v,w,c0,c1,delta,residual,fd_xx,fd_xy,fd_yy,q_xx,q_xy,q_yy,qexp_xx,qexp_xy,qexp_yy,fd_trace,trace_claim,fd_det,det_claim"
        );
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
                r.seed, r.v, r.w, r.c0, r.c1, r.delta, r.residual, r.fd.xx, r.fd.xy, r.fd.yy, r.q.xx, r.q.xy, r.q.yy,
                r.q_expanded.xx, r.q_expanded.xy, r.q_expanded.yy, r.fd.trace(), r.trace_claim, r.fd.det(), r.det_claim
            );
        }
        s
    }
}
