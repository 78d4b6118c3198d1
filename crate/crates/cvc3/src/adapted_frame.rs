//! Connection coefficients of an adapted orthonormal frame `{e1, e2, e3}`.
//!
//! In an adapted frame the whole Levi-Civita connection of a homogeneous
//! 3-manifold model is encoded by seven constants: the four entries of the
//! matrix `A` (the adjoint of `v -> nabla_v e3` on the plane orthogonal to
//! `e3`) plus `f`, `g`, `c`:
//!
//! ```text
//! nabla_{e1} e3 = a11 e1 + a12 e2      nabla_{e2} e3 = a21 e1 + a22 e2
//! nabla_{e3} e1 = c e2                 nabla_{e3} e2 = -c e1
//! nabla_{e2} e1 = f e2 - a21 e3        nabla_{e2} e2 = -f e1 - a22 e3
//! nabla_{e1} e2 = g e1 - a12 e3        nabla_{e1} e1 = -g e2 - a11 e3
//! nabla_{e3} e3 = 0
//! ```
//!
//! This module houses the table itself, the normal-form split of `A` into
//! traceless-symmetric, trace and skew parts, the transformation law under
//! constant rotations of `{e1, e2}`, and the residual checker for the nine
//! algebraic curvature equations a constant table must satisfy to define a
//! homogeneous model with plane curvatures `(lambda, eps, eps)`.

use serde::{Deserialize, Serialize};

use crate::error::{CvcError, Result};

/// Names of the nine homogeneous curvature residuals, in report order.
pub const HOMOGENEOUS_RESIDUAL_NAMES: [&str; 9] = [
    "R1221", "R1331", "R2332", "R1213", "R1223", "R1312", "R2312", "R1323", "R2313",
];

/// Constant connection coefficients of an adapted frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChristoffelTable {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
    pub f: f64,
    pub g: f64,
    pub c: f64,
}

impl ChristoffelTable {
    pub fn new(a11: f64, a12: f64, a21: f64, a22: f64, f: f64, g: f64, c: f64) -> Self {
        Self { a11, a12, a21, a22, f, g, c }
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    }

    /// Normal-form split of the `A` block.
    pub fn normal_form(&self) -> ANormalForm {
        decompose(self.a11, self.a12, self.a21, self.a22)
    }

    /// Reverses the distinguished direction `e3` keeping the subframe
    /// `{e1, e2}`. The `A` block and `c` change sign while `f` and `g` are
    /// untouched; in particular `a -> -a` and `b -> -b`.
    pub fn flip_e3(&self) -> Self {
        Self {
            a11: -self.a11,
            a12: -self.a12,
            a21: -self.a21,
            a22: -self.a22,
            f: self.f,
            g: self.g,
            c: -self.c,
        }
    }
}

/// Split of `A` into traceless-symmetric (`sigma`, `tau`), trace (`a`) and
/// skew (`b`) parts, together with the invariants `tr A`, `det A` and
/// `det A0 = -(sigma^2 + tau^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ANormalForm {
    pub sigma: f64,
    pub tau: f64,
    pub a: f64,
    pub b: f64,
    pub trace: f64,
    pub det: f64,
    pub det_traceless: f64,
}

impl ANormalForm {
    /// Entries `(a11, a12, a21, a22)` rebuilt from the parts.
    pub fn reconstruct(&self) -> (f64, f64, f64, f64) {
        (
            self.a + self.sigma,
            self.tau + self.b,
            self.tau - self.b,
            self.a - self.sigma,
        )
    }
}

/// Normal-form decomposition of a 2x2 block.
pub fn decompose(a11: f64, a12: f64, a21: f64, a22: f64) -> ANormalForm {
    let sigma = 0.5 * (a11 - a22);
    let tau = 0.5 * (a12 + a21);
    let a = 0.5 * (a11 + a22);
    let b = 0.5 * (a12 - a21);
    ANormalForm {
        sigma,
        tau,
        a,
        b,
        trace: a11 + a22,
        det: a11 * a22 - a12 * a21,
        det_traceless: -(sigma * sigma + tau * tau),
    }
}

/// Rotates the subframe `{e1, e2}` by the constant angle `theta`.
///
/// The `A` block conjugates by the rotation, `(f, g)` rotates as a vector and
/// `c` is unchanged. Only constant angles are meaningful here: a homogeneous
/// model has no room for the frame-derivative terms a varying angle would add.
pub fn rotate_frame(table: &ChristoffelTable, theta: f64) -> ChristoffelTable {
    let (sn, cs) = theta.sin_cos();
    // T A T^{-1} with T = [[cos, sin], [-sin, cos]].
    let r0 = (cs * table.a11 + sn * table.a21, cs * table.a12 + sn * table.a22);
    let r1 = (-sn * table.a11 + cs * table.a21, -sn * table.a12 + cs * table.a22);
    ChristoffelTable {
        a11: r0.0 * cs + r0.1 * sn,
        a12: -r0.0 * sn + r0.1 * cs,
        a21: r1.0 * cs + r1.1 * sn,
        a22: -r1.0 * sn + r1.1 * cs,
        f: cs * table.f + sn * table.g,
        g: -sn * table.f + cs * table.g,
        c: table.c,
    }
}

/// The unique angle in `[0, pi)` whose rotation puts the traceless symmetric
/// part into the form `diag(s, -s)` with `s > 0`.
///
/// Fails with `DegenerateA0` when `sigma^2 + tau^2 <= tol^2`: there the
/// traceless part vanishes and every adapted frame is as canonical as any
/// other.
pub fn canonical_frame_angle(nf: &ANormalForm, tol: f64) -> Result<f64> {
    let r2 = nf.sigma * nf.sigma + nf.tau * nf.tau;
    if r2 <= tol * tol {
        return Err(CvcError::DegenerateA0);
    }
    // Solve tau cos(2 theta) - sigma sin(2 theta) = 0 with
    // sigma cos(2 theta) + tau sin(2 theta) > 0.
    let mut theta = 0.5 * nf.tau.atan2(nf.sigma);
    if theta < 0.0 {
        theta += std::f64::consts::PI;
    }
    Ok(theta)
}

/// Residuals of the nine algebraic curvature equations of a constant table,
/// in the order `(R1221, R1331, R2332, R1213, R1223, R1312, R2312, R1323,
/// R2313)`.
///
/// All residuals vanish exactly when the table defines a homogeneous model
/// whose plane orthogonal to `e3` has curvature `lambda` and whose planes
/// containing `e3` have curvature `epsilon`.
pub fn verify_homogeneous(table: &ChristoffelTable, epsilon: f64, lambda: f64) -> [f64; 9] {
    let ChristoffelTable { a11, a12, a21, a22, f, g, c } = *table;
    let det = a11 * a22 - a12 * a21;
    let tr = a11 + a22;
    [
        f * f + g * g + c * (a12 - a21) + det + lambda,
        c * (a12 + a21) - a11 * a11 - a12 * a21 - epsilon,
        -c * (a12 + a21) - a22 * a22 - a12 * a21 - epsilon,
        g * (a11 - a22) - f * (a12 + a21),
        f * (a11 - a22) + g * (a12 + a21),
        g * a11 + f * (c - a12),
        -f * a22 + g * (c + a21),
        c * (a11 - a22) + a12 * tr,
        c * (a11 - a22) + a21 * tr,
    ]
}

/// Euclidean norm of the nine homogeneous residuals.
pub fn homogeneous_residual_norm(table: &ChristoffelTable, epsilon: f64, lambda: f64) -> f64 {
    verify_homogeneous(table, epsilon, lambda)
        .iter()
        .map(|r| r * r)
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn assert_close(x: f64, y: f64, tol: f64) {
        assert!((x - y).abs() <= tol, "{x} vs {y}");
    }

    #[test]
    fn decompose_direct_arithmetic() {
        let nf = decompose(1.0, 2.0, 3.0, 4.0);
        assert_eq!(nf.sigma, -1.5);
        assert_eq!(nf.tau, 2.5);
        assert_eq!(nf.a, 2.5);
        assert_eq!(nf.b, -0.5);
        let (a11, a12, a21, a22) = nf.reconstruct();
        assert_eq!((a11, a12, a21, a22), (1.0, 2.0, 3.0, 4.0));
    }

    #[test]
    fn decompose_off_diagonal_block() {
        // a12 = mu, a21 = 1/mu with mu = 2; det A = -1.
        let nf = decompose(0.0, 2.0, 0.5, 0.0);
        assert_eq!(nf.sigma, 0.0);
        assert_eq!(nf.tau, 1.25);
        assert_eq!(nf.a, 0.0);
        assert_eq!(nf.b, 0.75);
        assert_eq!(nf.det, -1.0);
    }

    #[test]
    fn decompose_identity() {
        let nf = decompose(1.0, 0.0, 0.0, 1.0);
        assert_eq!((nf.sigma, nf.tau, nf.b, nf.a), (0.0, 0.0, 0.0, 1.0));
    }

    #[test]
    fn rotation_by_zero_is_identity() {
        let t = ChristoffelTable::new(0.3, -1.2, 0.7, 0.1, 0.5, -0.4, 2.0);
        let r = rotate_frame(&t, 0.0);
        assert_eq!(t, r);
    }

    #[test]
    fn quarter_turn_moves_canonical_block_off_diagonal() {
        // sigma = 1, b = 0: rotating by pi/4 must yield the off-diagonal
        // block (0, mu; 1/mu, 0) with mu = b - sigma = -1.
        let t = ChristoffelTable::new(1.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0);
        let r = rotate_frame(&t, std::f64::consts::FRAC_PI_4);
        assert_close(r.a11, 0.0, 1e-15);
        assert_close(r.a22, 0.0, 1e-15);
        assert_close(r.a12, -1.0, 1e-15);
        assert_close(r.a21, -1.0, 1e-15);
        // General law: a12' = b - sigma, a21' = -(b + sigma).
        let nf = t.normal_form();
        assert_close(r.a12, nf.b - nf.sigma, 1e-15);
        assert_close(r.a21, -(nf.b + nf.sigma), 1e-15);
    }

    #[test]
    fn rotation_invariants() {
        let mut rng = SplitMix64::new(11);
        for _ in 0..100 {
            let t = ChristoffelTable::new(
                rng.range(-2.0, 2.0),
                rng.range(-2.0, 2.0),
                rng.range(-2.0, 2.0),
                rng.range(-2.0, 2.0),
                rng.range(-2.0, 2.0),
                rng.range(-2.0, 2.0),
                rng.range(-2.0, 2.0),
            );
            let theta = rng.range(-7.0, 7.0);
            let r = rotate_frame(&t, theta);
            let (n0, n1) = (t.normal_form(), r.normal_form());
            assert_close(n0.trace, n1.trace, 1e-12);
            assert_close(n0.det, n1.det, 1e-12);
            assert_close(n0.a, n1.a, 1e-12);
            assert_close(n0.b, n1.b, 1e-12);
            assert_close(n0.det_traceless, n1.det_traceless, 1e-12);
        }
    }

    #[test]
    fn canonical_angle_branches() {
        let diag = |s: f64, t: f64| decompose(s, t, t, -s);
        assert_close(canonical_frame_angle(&diag(1.0, 0.0), 1e-9).unwrap(), 0.0, 1e-15);
        assert_close(
            canonical_frame_angle(&diag(-1.0, 0.0), 1e-9).unwrap(),
            std::f64::consts::FRAC_PI_2,
            1e-15,
        );
        assert_close(
            canonical_frame_angle(&diag(0.0, 1.0), 1e-9).unwrap(),
            std::f64::consts::FRAC_PI_4,
            1e-15,
        );
        assert!(matches!(
            canonical_frame_angle(&diag(0.0, 0.0), 1e-9),
            Err(CvcError::DegenerateA0)
        ));
    }

    #[test]
    fn canonical_angle_diagonalizes_traceless_part() {
        let mut rng = SplitMix64::new(23);
        for _ in 0..100 {
            let t = ChristoffelTable::new(
                rng.range(-2.0, 2.0),
                rng.range(-2.0, 2.0),
                rng.range(-2.0, 2.0),
                rng.range(-2.0, 2.0),
                0.0,
                0.0,
                0.0,
            );
            let nf = t.normal_form();
            if nf.sigma.abs() + nf.tau.abs() < 1e-3 {
                continue;
            }
            let theta = canonical_frame_angle(&nf, 1e-9).unwrap();
            assert!((0.0..std::f64::consts::PI).contains(&theta));
            let rot = rotate_frame(&t, theta).normal_form();
            assert!(rot.sigma > 0.0);
            assert_close(rot.tau, 0.0, 1e-12);
            // theta and theta + pi produce the same rotated traceless part.
            let rot_pi = rotate_frame(&t, theta + std::f64::consts::PI).normal_form();
            assert_close(rot.sigma, rot_pi.sigma, 1e-12);
            assert_close(rot.tau, rot_pi.tau, 1e-12);
        }
    }

    #[test]
    fn homogeneous_residuals_vanish_on_known_solutions() {
        // b = 1, c = 3/2, lambda = -(2c + 1) = -4.
        let type2 = ChristoffelTable::new(0.0, 1.0, -1.0, 0.0, 0.0, 0.0, 1.5);
        for r in verify_homogeneous(&type2, 1.0, -4.0) {
            assert_close(r, 0.0, 1e-15);
        }
        // A = 0, f = 1, g = 2, lambda = -(f^2 + g^2) = -5.
        let solvable = ChristoffelTable::new(0.0, 0.0, 0.0, 0.0, 1.0, 2.0, 0.0);
        for r in verify_homogeneous(&solvable, 0.0, -5.0) {
            assert_close(r, 0.0, 1e-15);
        }
    }

    #[test]
    fn perturbing_b_breaks_r1331() {
        let mut t = ChristoffelTable::new(0.0, 1.0, -1.0, 0.0, 0.0, 0.0, 1.5);
        t.a12 += 0.1;
        t.a21 -= 0.1;
        let res = verify_homogeneous(&t, 1.0, -4.0);
        assert!(res[1].abs() > 0.1);
        assert!(res[2].abs() > 0.1);
    }

    #[test]
    fn residual_norm_is_rotation_invariant() {
        let mut rng = SplitMix64::new(5);
        for _ in 0..100 {
            let t = ChristoffelTable::new(
                rng.range(-2.0, 2.0),
                rng.range(-2.0, 2.0),
                rng.range(-2.0, 2.0),
                rng.range(-2.0, 2.0),
                rng.range(-2.0, 2.0),
                rng.range(-2.0, 2.0),
                rng.range(-2.0, 2.0),
            );
            let eps = rng.range(-1.5, 1.5);
            let lam = rng.range(-3.0, 3.0);
            let theta = rng.range(-7.0, 7.0);
            let n0 = homogeneous_residual_norm(&t, eps, lam);
            let n1 = homogeneous_residual_norm(&rotate_frame(&t, theta), eps, lam);
            assert_close(n0, n1, 1e-11 * (1.0 + n0));
        }
    }

    #[test]
    fn flip_reverses_skew_and_trace_parts() {
        let t = ChristoffelTable::new(0.4, 1.5, -0.3, 0.2, 0.9, -1.1, 0.6);
        let flipped = t.flip_e3();
        let (n0, n1) = (t.normal_form(), flipped.normal_form());
        assert_eq!(n1.a, -n0.a);
        assert_eq!(n1.b, -n0.b);
        assert_eq!(flipped.f, t.f);
        assert_eq!(flipped.g, t.g);
        // Flipping is a symmetry of the homogeneous equations.
        let r0 = homogeneous_residual_norm(&t, -1.0, 0.7);
        let r1 = homogeneous_residual_norm(&flipped, -1.0, 0.7);
        assert_close(r0, r1, 1e-12);
    }
}
