//! Property-based tests of the algebraic invariants.

use proptest::prelude::*;

use cvc3::adapted_frame::{decompose, homogeneous_residual_norm, rotate_frame, ChristoffelTable};
use cvc3::connection_curvature::sec_quadratic;
use cvc3::cvc_analysis::cvc_bruteforce_triple;
use cvc3::geodesic_ode::{ell_closed_form, fg_system_minus1, EllParams};
use cvc3::lie_metric::orthonormalize;
use cvc3::linalg::{identity_deviation, Mat3, Vec3};

fn entry() -> impl Strategy<Value = f64> {
    (-200i32..=200).prop_map(|x| f64::from(x) / 100.0)
}

fn table_strategy() -> impl Strategy<Value = ChristoffelTable> {
    (entry(), entry(), entry(), entry(), entry(), entry(), entry())
        .prop_map(|(a11, a12, a21, a22, f, g, c)| ChristoffelTable::new(a11, a12, a21, a22, f, g, c))
}

proptest! {
    #[test]
    fn normal_form_reconstructs_entries(a11 in entry(), a12 in entry(), a21 in entry(), a22 in entry()) {
        let nf = decompose(a11, a12, a21, a22);
        let (r11, r12, r21, r22) = nf.reconstruct();
        prop_assert!((r11 - a11).abs() < 1e-12);
        prop_assert!((r12 - a12).abs() < 1e-12);
        prop_assert!((r21 - a21).abs() < 1e-12);
        prop_assert!((r22 - a22).abs() < 1e-12);
        prop_assert!((nf.trace - 2.0 * nf.a).abs() < 1e-12);
        prop_assert!((nf.det_traceless + nf.sigma * nf.sigma + nf.tau * nf.tau).abs() < 1e-12);
    }

    #[test]
    fn rotation_preserves_invariants(t in table_strategy(), theta in -7.0..7.0f64) {
        let r = rotate_frame(&t, theta);
        let (n0, n1) = (t.normal_form(), r.normal_form());
        prop_assert!((n0.trace - n1.trace).abs() < 1e-12);
        prop_assert!((n0.det - n1.det).abs() < 1e-12);
        prop_assert!((n0.a - n1.a).abs() < 1e-12);
        prop_assert!((n0.b - n1.b).abs() < 1e-12);
        prop_assert!((n0.det_traceless - n1.det_traceless).abs() < 1e-12);
    }

    #[test]
    fn rotation_preserves_residual_norm(
        t in table_strategy(),
        theta in -7.0..7.0f64,
        eps in -1.5..1.5f64,
        lambda in -3.0..3.0f64,
    ) {
        let before = homogeneous_residual_norm(&t, eps, lambda);
        let after = homogeneous_residual_norm(&rotate_frame(&t, theta), eps, lambda);
        prop_assert!((before - after).abs() < 1e-10 * (1.0 + before));
    }

    #[test]
    fn quadratic_form_stays_inside_the_triple_range(
        a in entry(), b in entry(), c in entry(),
        x in -1.0..1.0f64, y in -1.0..1.0f64, z in -1.0..1.0f64,
    ) {
        let v = Vec3::new(x, y, z);
        prop_assume!(v.norm() > 1e-3);
        let unit = v.normalize();
        let triple = [a, b, c];
        let sec = sec_quadratic(triple, &unit, 1e-9).unwrap();
        let lo = a.min(b).min(c);
        let hi = a.max(b).max(c);
        prop_assert!(sec >= lo - 1e-12 && sec <= hi + 1e-12);
    }

    #[test]
    fn median_is_always_a_cvc_level(a in entry(), b in entry(), c in entry()) {
        let mut sorted = [a, b, c];
        sorted.sort_by(f64::total_cmp);
        prop_assert!(cvc_bruteforce_triple([a, b, c], sorted[1], 64, 128, 1e-6, 9));
    }

    #[test]
    fn ell_closed_form_solves_its_equation(
        eps in prop::sample::select(vec![-1.0, 0.0, 1.0]),
        tr_a0 in entry(),
        det_a0 in entry(),
        t in -2.0..2.0f64,
    ) {
        let p = EllParams::new(eps, tr_a0, det_a0).unwrap();
        prop_assert!((ell_closed_form(&p, 0.0) - 1.0).abs() < 1e-13);
        let h = 1e-4;
        let second =
            (ell_closed_form(&p, t + h) - 2.0 * ell_closed_form(&p, t) + ell_closed_form(&p, t - h))
                / (h * h);
        let residual = second + 4.0 * eps * ell_closed_form(&p, t) - 2.0 * p.k();
        prop_assert!(residual.abs() < 1e-5, "residual {residual:e}");
    }

    #[test]
    fn fg_closed_form_solves_the_coupled_system(
        mu in 0.2..3.0f64,
        f0 in entry(),
        g0 in entry(),
        t in -2.0..2.0f64,
    ) {
        let h = 1e-5;
        let (fp, gp) = fg_system_minus1(mu, f0, g0, t + h).unwrap();
        let (fm, gm) = fg_system_minus1(mu, f0, g0, t - h).unwrap();
        let (f, g) = fg_system_minus1(mu, f0, g0, t).unwrap();
        prop_assert!(((fp - fm) / (2.0 * h) - g / mu).abs() < 1e-5);
        prop_assert!(((gp - gm) / (2.0 * h) - mu * f).abs() < 1e-5);
    }

    #[test]
    fn orthonormalize_always_reaches_identity_gram(
        b11 in entry(), b12 in entry(), b13 in entry(),
        b21 in entry(), b22 in entry(), b23 in entry(),
        b31 in entry(), b32 in entry(), b33 in entry(),
    ) {
        let b = Mat3::new(b11, b12, b13, b21, b22, b23, b31, b32, b33);
        let gram = b * b.transpose() + Mat3::identity() * 0.1;
        let mla = cvc3::lie_metric::MetricLieAlgebra::from_brackets(
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
            gram,
        );
        let ortho = orthonormalize(&mla).unwrap();
        prop_assert!(identity_deviation(ortho.gram()) == 0.0);
        prop_assert!(cvc3::lie_metric::validate(&ortho).jacobi < 1e-10);
    }
}
