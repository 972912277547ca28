//! Property tests of the module invariants over generated inputs.

use std::f64::consts::PI;

use nalgebra::Matrix2;
use proptest::prelude::*;

use complex_hoeffding::bounds::{envelope, g_function, technical_check};
use complex_hoeffding::caratheodory::decompose;
use complex_hoeffding::families::{
    expansion_coefficients, r_matrix, r_min_eigenvalue, three_point, triangle_dist, two_point, Functional,
    StationaryFrame, TriangleSupport, TwoPointParams, THREE_POINT_DIM,
};
use complex_hoeffding::{mix, ComplexValue, FiniteDistribution};

fn c(re: f64, im: f64) -> ComplexValue {
    ComplexValue::new(re, im)
}

fn law(max_atoms: usize) -> impl Strategy<Value = FiniteDistribution> {
    prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0, 0.05f64..1.0), 1..=max_atoms).prop_map(|raw| {
        let total: f64 = raw.iter().map(|a| a.2).sum();
        FiniteDistribution::new(raw.into_iter().map(|(x, y, p)| (c(x, y), p / total))).unwrap()
    })
}

/// Zero-mean law with 2 to 10 atoms rescaled to a diameter in `(0, 10]`.
fn zero_mean_law() -> impl Strategy<Value = FiniteDistribution> {
    (law(10), 1e-3f64..=10.0).prop_filter_map("needs two distinct atoms", |(z, d)| {
        let z = z.center();
        let diam = z.diameter();
        (diam > 0.0).then(|| z.map_points(|p| p * (d / diam)).unwrap().center())
    })
}

fn exp_sum(z: &FiniteDistribution) -> ComplexValue {
    z.atoms().iter().map(|a| a.point.exp() * a.prob).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn jung_radius(z in law(10)) {
        let disk = z.enclosing_disk();
        prop_assert!(disk.radius <= z.diameter() / 3f64.sqrt() + 1e-12);
        for p in z.points() {
            prop_assert!((p - disk.center).norm() <= disk.radius * (1.0 + 1e-12) + 1e-14);
        }
    }

    #[test]
    fn zero_mean_support_within_diameter(z in zero_mean_law()) {
        let d = z.diameter();
        for p in z.points() {
            prop_assert!(p.norm() <= d * (1.0 + 1e-12));
        }
    }

    #[test]
    fn diameter_is_affine(z in law(8), a in (-3.0f64..3.0, -3.0f64..3.0), b in (-5.0f64..5.0, -5.0f64..5.0)) {
        let a = c(a.0, a.1);
        let moved = z.affine(a, c(b.0, b.1)).unwrap();
        prop_assert!((moved.diameter() - a.norm() * z.diameter()).abs() <= 1e-12 * (1.0 + a.norm() * z.diameter()));
    }

    #[test]
    fn expectation_is_linear_in_mixtures(x in law(6), y in law(6), t in 0.0f64..=1.0) {
        let m = mix(&[x.clone(), y.clone()], &[t, 1.0 - t]).unwrap();
        let want = exp_sum(&x) * t + exp_sum(&y) * (1.0 - t);
        prop_assert!((m.expect_exp().unwrap() - want).norm() <= 1e-12 * (1.0 + want.norm()));
    }

    #[test]
    fn real_zero_mean_jensen(raw in prop::collection::vec((-5.0f64..5.0, 0.05f64..1.0), 1..10)) {
        let total: f64 = raw.iter().map(|a| a.1).sum();
        let z = FiniteDistribution::new(raw.iter().map(|&(x, p)| (c(x, 0.0), p / total))).unwrap().center();
        let v = z.expect_exp().unwrap();
        prop_assert!(v.re >= 1.0 - 1e-14);
        prop_assert_eq!(v.im, 0.0);
    }

    #[test]
    fn main_bound(z in zero_mean_law()) {
        let gap = (exp_sum(&z) - 1.0).norm() - envelope(z.diameter()).unwrap();
        prop_assert!(gap <= 1e-9, "gap {gap}");
    }

    #[test]
    fn g_increasing_and_below_envelope(a in 0.0f64..30.0, b in 0.0f64..30.0) {
        let (lo, hi) = (a.min(b), a.max(b));
        prop_assume!(hi - lo > 1e-9 * hi);
        let (glo, ghi) = (g_function(lo).unwrap(), g_function(hi).unwrap());
        prop_assert!(glo >= 0.0 && glo < ghi);
        prop_assert!(ghi.ln_1p() <= hi * hi / 8.0 * (1.0 + 1e-14));
        prop_assert!(ghi <= envelope(hi).unwrap());
    }

    #[test]
    fn technical_margins_positive(t in 3.0f64..=30.0) {
        let r = technical_check(t).unwrap();
        prop_assert!(r.tech1_ok && r.tech2_ok && !r.below_hypothesis);
        prop_assert!(r.g_value <= r.envelope_value);
    }

    #[test]
    fn averaging_inequality(x in 0.0f64..=1.0, y in 0.0f64..=1.0) {
        prop_assert!(x * y + ((1.0 - x * x) * (1.0 - y * y)).sqrt() <= 1.0 + 1e-12);
    }

    #[test]
    fn two_point_mean_and_diameter(ell in 0.0f64..10.0, x in 1e-9f64..1.0, theta in -PI..PI) {
        let z = two_point(&TwoPointParams::new(ell, x, theta).unwrap()).unwrap();
        prop_assert!(z.mean().norm() <= 1e-12 * ell.max(1.0));
        prop_assert!((z.diameter() - ell).abs() <= 1e-12 * ell.max(1.0));
    }

    #[test]
    fn three_point_laws_are_admissible(
        p in prop::collection::vec(0.0f64..1.0, THREE_POINT_DIM),
        d in 0.1f64..6.0,
        pin in any::<bool>(),
    ) {
        let mut params = p.clone();
        params[0] *= 2.0 * PI;
        for r in &mut params[3..] {
            *r *= d;
        }
        let z = three_point(&params, d, pin).unwrap();
        prop_assert!(z.len() <= 3);
        prop_assert!(z.mean().norm() <= 1e-12 * d.max(1.0));
        prop_assert!(z.diameter() <= d * (1.0 + 1e-12));
        if pin && z.len() > 1 {
            prop_assert!((z.diameter() - d).abs() <= 1e-12 * d);
        }
    }

    #[test]
    fn affine_expansion_is_exact(
        v in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 3),
        lam in prop::collection::vec(0.05f64..1.0, 3),
        mu in prop::collection::vec(0.05f64..1.0, 3),
    ) {
        let t = TriangleSupport::new(c(v[0].0, v[0].1), c(v[1].0, v[1].1), c(v[2].0, v[2].1));
        prop_assume!(t.is_ok());
        let t = t.unwrap();
        let inside = |w: &[f64]| -> ComplexValue {
            let s: f64 = w.iter().sum();
            t.vertices().iter().zip(w).map(|(z, wi)| z * (wi / s)).sum()
        };
        let t = t.translate(-inside(&lam)).unwrap();
        let coeffs = expansion_coefficients(&t);
        let s: f64 = mu.iter().sum();
        let u: ComplexValue = t.vertices().iter().zip(&mu).map(|(z, wi)| z * (wi / s)).sum();
        let direct = exp_sum(&triangle_dist(&t, u, false).unwrap());
        prop_assert!((coeffs.affine(u.re, u.im) - direct).norm() <= 1e-12 * (1.0 + direct.norm()));
        let at0 = exp_sum(&triangle_dist(&t, c(0.0, 0.0), false).unwrap());
        prop_assert!((coeffs.C - at0).norm() <= 1e-12 * (1.0 + at0.norm()));
    }

    #[test]
    fn r_eigenvalue_matches_eigensolve(v in -3.0f64..3.0, w in -3.0f64..3.0, c0 in -3.0f64..3.0, c1 in -3.0f64..3.0) {
        let f = StationaryFrame { v, w, c0, c1, delta: (c0 - 1.0).hypot(c1), convention: Functional::RealPart };
        let m = r_matrix(&f);
        let direct = Matrix2::new(m.xx, m.xy, m.xy, m.yy).symmetric_eigen().eigenvalues.min();
        prop_assert!((r_min_eigenvalue(&f) - direct).abs() <= 1e-12);
        if c0 > 0.0 {
            prop_assert!(r_min_eigenvalue(&f) < 0.0);
        }
    }

    #[test]
    fn decomposition_transports_expectations(z in zero_mean_law()) {
        prop_assume!(z.len() >= 3);
        let dec = decompose(&z).unwrap();
        let total = exp_sum(&z);
        let mut weighted = c(0.0, 0.0);
        let mut bound = 0.0;
        for (w, comp) in &dec.components {
            prop_assert!(comp.diameter() <= z.diameter() * (1.0 + 1e-12));
            let e = exp_sum(comp);
            weighted += e * *w;
            bound += w * (e - 1.0).norm();
        }
        prop_assert!((total - weighted).norm() <= 1e-10 * (1.0 + total.norm()));
        prop_assert!((total - 1.0).norm() <= bound + 1e-9);
    }

    #[test]
    fn shrinking_toward_zero_is_a_segment(z in zero_mean_law(), t in 0.0f64..=1.0) {
        let zero = FiniteDistribution::point_mass(c(0.0, 0.0)).unwrap();
        let m = mix(&[z.clone(), zero], &[t, 1.0 - t]).unwrap();
        let want = 1.0 + (exp_sum(&z) - 1.0) * t;
        prop_assert!((m.expect_exp().unwrap() - want).norm() <= 1e-12 * want.norm().max(1.0));
        prop_assert!(m.diameter() <= z.diameter() * (1.0 + 1e-12));
    }
}
