//! Pointwise constant-vector-curvature analysis.
//!
//! A point has cvc(eps) when every tangent vector lies in some 2-plane of
//! sectional curvature eps. Sectional curvature restricted to the planes
//! containing a fixed unit vector `v` is the quadratic form of
//! [`sec_quadratic`](crate::connection_curvature::sec_quadratic) restricted to
//! the circle of unit normals orthogonal to `v`; its range is the interval
//! between the two plane curvatures complementary to `v` (Cauchy
//! interlacing). Requiring eps inside that interval for every `v` is
//! equivalent to `median(plane curvatures) = eps`, which is the O(1) decision
//! implemented here; [`cvc_bruteforce`] samples the definition directly as an
//! independent oracle.

use serde::{Deserialize, Serialize};

use crate::connection_curvature::{sec_quadratic, CurvatureData};
use crate::error::{CvcError, Result};
use crate::linalg::Vec3;
use crate::rng::SplitMix64;

/// Which one-sided curvature bound accompanies the cvc value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Extremality {
    #[serde(rename = "SEC_AT_MOST")]
    SecAtMost,
    #[serde(rename = "SEC_AT_LEAST")]
    SecAtLeast,
    #[serde(rename = "BOTH")]
    Both,
    #[serde(rename = "NEITHER")]
    Neither,
}

impl std::fmt::Display for Extremality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Extremality::SecAtMost => "sec <= eps",
            Extremality::SecAtLeast => "sec >= eps",
            Extremality::Both => "isotropic (sec = eps)",
            Extremality::Neither => "no one-sided bound",
        };
        f.write_str(s)
    }
}

/// Verdict record for one epsilon.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CvcReport {
    pub epsilon: f64,
    pub is_cvc: bool,
    pub extremality: Extremality,
    pub isotropic: bool,
    /// Curvature of the plane orthogonal to the distinguished direction;
    /// defined at extremal non-isotropic cvc points.
    pub lambda: Option<f64>,
    /// Unit vector contained in every curvature-eps plane, in the coordinates
    /// of the frame the curvature data came in; defined with `lambda`.
    pub e3_direction: Option<[f64; 3]>,
    /// Plane curvatures of the Ricci eigenframe, as diagnostics.
    pub plane_curvatures: [f64; 3],
    pub tol: f64,
}

fn sorted_with_indices(triple: [f64; 3]) -> [(usize, f64); 3] {
    let mut idx = [(0usize, triple[0]), (1, triple[1]), (2, triple[2])];
    idx.sort_by(|a, b| a.1.total_cmp(&b.1));
    idx
}

/// One-sided curvature bounds relative to eps.
pub fn extremality(cd: &CurvatureData, epsilon: f64, tol: f64) -> Extremality {
    extremality_of_triple(cd.plane_curvatures(), epsilon, tol)
}

pub fn extremality_of_triple(triple: [f64; 3], epsilon: f64, tol: f64) -> Extremality {
    let max = triple.iter().fold(f64::NEG_INFINITY, |a, &x| a.max(x));
    let min = triple.iter().fold(f64::INFINITY, |a, &x| a.min(x));
    let at_most = max <= epsilon + tol;
    let at_least = min >= epsilon - tol;
    match (at_most, at_least) {
        (true, true) => Extremality::Both,
        (true, false) => Extremality::SecAtMost,
        (false, true) => Extremality::SecAtLeast,
        (false, false) => Extremality::Neither,
    }
}

/// Full cvc verdict for one epsilon.
pub fn cvc_status(cd: &CurvatureData, epsilon: f64, tol: f64) -> CvcReport {
    let triple = cd.plane_curvatures();
    let sorted = sorted_with_indices(triple);
    let is_cvc = (sorted[1].1 - epsilon).abs() <= tol;
    let isotropic = sorted[2].1 - sorted[0].1 <= tol;
    let ext = extremality_of_triple(triple, epsilon, tol);
    let (lambda, e3_direction) = if is_cvc && !isotropic && ext != Extremality::Neither {
        // The distinguished direction is normal to the plane whose curvature
        // differs from eps; its Ricci eigenvalue is 2 eps.
        let (odd_idx, odd_val) = sorted
            .iter()
            .copied()
            .max_by(|a, b| (a.1 - epsilon).abs().total_cmp(&(b.1 - epsilon).abs()))
            .unwrap();
        let dir = cd.diag_frame().column(odd_idx).into_owned();
        (Some(odd_val), Some([dir[0], dir[1], dir[2]]))
    } else {
        (None, None)
    };
    CvcReport {
        epsilon,
        is_cvc,
        extremality: ext,
        isotropic,
        lambda,
        e3_direction,
        plane_curvatures: triple,
        tol,
    }
}

/// The unit vector contained in every curvature-eps plane of an extremal,
/// non-isotropic cvc point.
pub fn e3_direction(cd: &CurvatureData, epsilon: f64, tol: f64) -> Result<Vec3> {
    let report = cvc_status(cd, epsilon, tol);
    if report.isotropic {
        return Err(CvcError::IsotropicPoint);
    }
    if !report.is_cvc || report.extremality == Extremality::Neither {
        return Err(CvcError::UnsupportedModel(
            "not an extremal cvc point for this epsilon".into(),
        ));
    }
    let d = report.e3_direction.expect("populated for extremal non-isotropic cvc");
    Ok(Vec3::new(d[0], d[1], d[2]))
}

/// Max over a circle sweep of `|sec(plane containing v) - eps|`, with `v` in
/// Ricci-eigenframe coordinates. Verification helper for the claim that all
/// planes through the distinguished direction have curvature eps.
pub fn plane_sweep_max_deviation(
    triple: [f64; 3],
    v: &Vec3,
    epsilon: f64,
    n_angles: usize,
) -> f64 {
    let (u1, u2) = crate::linalg::orthonormal_complement(v);
    let mut worst = 0.0_f64;
    for s in 0..n_angles {
        let angle = std::f64::consts::TAU * s as f64 / n_angles as f64;
        let w = u1 * angle.cos() + u2 * angle.sin();
        // The plane span(v, w) has unit normal v x w.
        let z = v.cross(&w);
        let sec = sec_quadratic(triple, &z, 1e-6).expect("unit normal");
        worst = worst.max((sec - epsilon).abs());
    }
    worst
}

/// Samples the cvc definition directly: for `n_vectors` random unit vectors,
/// sweeps the circle of planes containing each and asks whether eps lies in
/// the observed sectional range (the intermediate value theorem upgrades
/// that to existence of an eps-plane).
///
/// On each circle the sectional curvature is `c + r cos(2 angle + phase)`,
/// so the sampled extrema can miss the true ones by at most
/// `r (1 - cos(2 pi / n_angles))`; that certified bound is added to `tol`,
/// otherwise planes where eps is attained exactly at the interval endpoint
/// would be misjudged.
pub fn cvc_bruteforce_triple(
    triple: [f64; 3],
    epsilon: f64,
    n_vectors: usize,
    n_angles: usize,
    tol: f64,
    seed: u64,
) -> bool {
    let mut rng = SplitMix64::new(seed);
    let spread = triple.iter().fold(f64::NEG_INFINITY, |a, &x| a.max(x))
        - triple.iter().fold(f64::INFINITY, |a, &x| a.min(x));
    let margin = 0.5 * spread * (1.0 - (std::f64::consts::TAU / n_angles as f64).cos());
    let tol = tol + margin;
    for _ in 0..n_vectors {
        let v = rng.unit_vector();
        let (u1, u2) = crate::linalg::orthonormal_complement(&v);
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for s in 0..n_angles {
            let angle = std::f64::consts::TAU * s as f64 / n_angles as f64;
            let w = u1 * angle.cos() + u2 * angle.sin();
            let z = v.cross(&w);
            let sec = z[0] * z[0] * triple[0] + z[1] * z[1] * triple[1] + z[2] * z[2] * triple[2];
            min = min.min(sec);
            max = max.max(sec);
        }
        if epsilon < min - tol || epsilon > max + tol {
            return false;
        }
    }
    true
}

/// [`cvc_bruteforce_triple`] on the plane curvatures of full curvature data.
pub fn cvc_bruteforce(
    cd: &CurvatureData,
    epsilon: f64,
    n_vectors: usize,
    n_angles: usize,
    tol: f64,
    seed: u64,
) -> bool {
    cvc_bruteforce_triple(cd.plane_curvatures(), epsilon, n_vectors, n_angles, tol, seed)
}
