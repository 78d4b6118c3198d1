//! Jacobi fields along frame-direction geodesics and hyperbolic rank.
//!
//! A manifold has positive hyperbolic rank when every complete geodesic
//! carries an orthogonal Jacobi field `J` with `sec(gamma', J) = -1` for all
//! time. For the homogeneous models built in [`families`](crate::families)
//! the Jacobi equation `J'' + R(J, gamma') gamma' = 0` reduces, in the
//! left-invariant frame along a frame-direction geodesic, to a
//! constant-coefficient linear system; [`hyperbolic_rank_test`] integrates a
//! basis of orthogonal initial conditions and searches their span for a
//! witness field.

use serde::{Deserialize, Serialize};

use crate::connection_curvature::ConnectionCoefficients;
use crate::cvc_analysis::{cvc_status, Extremality};
use crate::error::{CvcError, Result};
use crate::families::{FamilyModel, FamilySpec};
use crate::geodesic_ode::rk4_step;
use crate::linalg::{Mat3, Vec3};
use crate::rng::SplitMix64;

/// One of the three frame directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FrameAxis {
    E1,
    E2,
    E3,
}

impl FrameAxis {
    pub fn index(&self) -> usize {
        match self {
            FrameAxis::E1 => 0,
            FrameAxis::E2 => 1,
            FrameAxis::E3 => 2,
        }
    }
}

impl std::fmt::Display for FrameAxis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "e{}", self.index() + 1)
    }
}

/// Jacobi field value and covariant derivative in frame coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacobiState {
    pub j: [f64; 3],
    pub j_prime: [f64; 3],
    pub t: f64,
}

impl JacobiState {
    pub fn new(j: [f64; 3], j_prime: [f64; 3], t: f64) -> Self {
        Self { j, j_prime, t }
    }

    pub fn zero() -> Self {
        Self::new([0.0; 3], [0.0; 3], 0.0)
    }
}

/// Outcome of the witness search.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankVerdict {
    pub has_hyperbolic_rank_witness: bool,
    /// Initial conditions of the best candidate when it is a witness.
    pub witness: Option<JacobiState>,
    /// Max over the span of |sec(gamma', J) + 1| for the best candidate.
    pub max_sec_deviation: f64,
    /// RMS of the same deviation, which the verdict thresholds.
    pub rms_sec_deviation: f64,
}

struct JacobiSystem {
    /// (G)_{k,i} = Gamma[d][i][k]: covariant derivative along the geodesic.
    g: Mat3,
    /// (K)_{l,i} = R[i][d][d][l]: the Jacobi operator.
    k: Mat3,
    axis: usize,
}

fn jacobi_system(model: &FamilyModel, dir: FrameAxis) -> Result<JacobiSystem> {
    let d = dir.index();
    let riemann = model.curvature.riemann();
    let k_full = Mat3::from_fn(|l, i| riemann[i][d][d][l]);
    if let FamilySpec::SpaceForm { epsilon } = model.spec {
        // Space forms are isotropic: every direction is geodesic and in a
        // parallel frame along the geodesic the connection term vanishes
        // while the Jacobi operator is eps on the orthogonal complement.
        let k = Mat3::from_fn(|l, i| {
            if l == i && l != d {
                epsilon
            } else {
                0.0
            }
        });
        return Ok(JacobiSystem { g: Mat3::zeros(), k, axis: d });
    }
    let table = model.table.ok_or_else(|| {
        CvcError::UnsupportedModel(format!(
            "{} carries no left-invariant frame to integrate in",
            model.spec.variant_name()
        ))
    })?;
    let conn = ConnectionCoefficients::from_table(&table);
    if conn.nabla(d, d).norm() > 1e-12 {
        return Err(CvcError::NotGeodesicDirection { axis: d + 1 });
    }
    let g = Mat3::from_fn(|k, i| conn.gamma()[d][i][k]);
    Ok(JacobiSystem { g, k: k_full, axis: d })
}

fn sec_against_geodesic(sys: &JacobiSystem, j: &Vec3) -> Option<f64> {
    if j.norm() <= 1e-8 {
        return None;
    }
    let q_r = (j.transpose() * sys.k * j)[(0, 0)];
    let q_n = j.norm_squared() - j[sys.axis] * j[sys.axis];
    if q_n <= 1e-16 {
        return None;
    }
    Some(q_r / q_n)
}

fn integrate_states(
    sys: &JacobiSystem,
    init: &JacobiState,
    t_span: (f64, f64),
    step: f64,
) -> Result<Vec<JacobiState>> {
    if step.is_nan() || step <= 0.0 {
        return Err(CvcError::ParameterOutOfRange(format!(
            "step must be positive, got {step}"
        )));
    }
    if t_span.0 > 0.0 || t_span.1 < 0.0 || t_span.0 >= t_span.1 {
        return Err(CvcError::ParameterOutOfRange(format!(
            "t span [{}, {}] must contain 0",
            t_span.0, t_span.1
        )));
    }
    let g = sys.g;
    let k = sys.k;
    let deriv = move |_t: f64, y: &[f64; 6]| -> [f64; 6] {
        let u = Vec3::new(y[0], y[1], y[2]);
        let v = Vec3::new(y[3], y[4], y[5]);
        let du = v - g * u;
        let dv = -g * v - k * u;
        [du[0], du[1], du[2], dv[0], dv[1], dv[2]]
    };
    let y0 = [
        init.j[0],
        init.j[1],
        init.j[2],
        init.j_prime[0],
        init.j_prime[1],
        init.j_prime[2],
    ];
    let n_back = (-t_span.0 / step).round() as usize;
    let n_fwd = (t_span.1 / step).round() as usize;
    let mut states = vec![[0.0; 6]; n_back + n_fwd + 1];
    states[n_back] = y0;
    let mut y = y0;
    for i in 0..n_fwd {
        y = rk4_step(deriv, i as f64 * step, &y, step);
        states[n_back + i + 1] = y;
    }
    y = y0;
    for i in 0..n_back {
        y = rk4_step(deriv, -(i as f64) * step, &y, -step);
        states[n_back - i - 1] = y;
    }
    Ok(states
        .iter()
        .enumerate()
        .map(|(i, y)| JacobiState {
            j: [y[0], y[1], y[2]],
            j_prime: [y[3], y[4], y[5]],
            t: (i as f64 - n_back as f64) * step,
        })
        .collect())
}

/// Integrates `J'' + R(J, gamma') gamma' = 0` along the geodesic through the
/// identity tangent to the given frame direction.
///
/// For left-invariant models the direction must be geodesic in the model's
/// table (`nabla_dir dir = 0`); space forms accept any direction and
/// integrate in a parallel frame.
pub fn jacobi_integrate(
    model: &FamilyModel,
    dir: FrameAxis,
    init: &JacobiState,
    t_span: (f64, f64),
    step: f64,
) -> Result<Vec<JacobiState>> {
    let sys = jacobi_system(model, dir)?;
    integrate_states(&sys, init, t_span, step)
}

/// Searches the orthogonal Jacobi fields along the chosen geodesic for one
/// with `sec(gamma', J) = -1` everywhere.
///
/// The four-dimensional space of orthogonal initial conditions is integrated
/// on a basis; candidates are linear combinations, scored by the RMS of
/// `|sec + 1|` over 200 sample times (skipping near-zeros of `J`), with a
/// seeded random search plus compass refinement over the combination sphere.
/// A candidate below `tol` is a witness.
pub fn hyperbolic_rank_test(
    model: &FamilyModel,
    dir: FrameAxis,
    t_max: f64,
    step: f64,
    tol: f64,
    seed: u64,
) -> Result<RankVerdict> {
    let report = cvc_status(&model.curvature, -1.0, crate::DEFAULT_TOL);
    if !(report.is_cvc && report.extremality != Extremality::Neither) {
        return Err(CvcError::UnsupportedModel(
            "hyperbolic rank test needs a cvc(-1) model with extremal curvature -1".into(),
        ));
    }
    if t_max.is_nan() || t_max <= 0.0 {
        return Err(CvcError::ParameterOutOfRange(format!(
            "t_max must be positive, got {t_max}"
        )));
    }
    let sys = jacobi_system(model, dir)?;
    let d = sys.axis;
    let p = (d + 1) % 3;
    let q = (d + 2) % 3;

    let unit = |slot: usize, idx: usize| {
        let mut s = JacobiState::zero();
        if slot == 0 {
            s.j[idx] = 1.0;
        } else {
            s.j_prime[idx] = 1.0;
        }
        s
    };
    let basis_inits = [unit(0, p), unit(0, q), unit(1, p), unit(1, q)];
    let trajectories: Vec<Vec<JacobiState>> = basis_inits
        .iter()
        .map(|init| integrate_states(&sys, init, (0.0, t_max), step))
        .collect::<Result<_>>()?;

    // 200 sample times spread over the grid.
    let n_grid = trajectories[0].len();
    let n_samples = 200.min(n_grid);
    let sample_idx: Vec<usize> = (0..n_samples)
        .map(|s| s * (n_grid - 1) / (n_samples - 1).max(1))
        .collect();

    let evaluate = |alpha: &[f64; 4]| -> (f64, f64) {
        let mut sum_sq = 0.0;
        let mut max_dev = 0.0_f64;
        let mut n_valid = 0usize;
        for &idx in &sample_idx {
            let mut j = Vec3::zeros();
            for m in 0..4 {
                j += Vec3::from_row_slice(&trajectories[m][idx].j) * alpha[m];
            }
            if let Some(sec) = sec_against_geodesic(&sys, &j) {
                let dev = (sec + 1.0).abs();
                sum_sq += dev * dev;
                max_dev = max_dev.max(dev);
                n_valid += 1;
            }
        }
        if n_valid == 0 {
            return (f64::INFINITY, f64::INFINITY);
        }
        ((sum_sq / n_valid as f64).sqrt(), max_dev)
    };

    let mut rng = SplitMix64::new(seed);
    let mut best_alpha = [1.0, 0.0, 0.0, 0.0];
    let (mut best_rms, mut best_max) = evaluate(&best_alpha);
    let consider = |alpha: [f64; 4], best_alpha: &mut [f64; 4], best_rms: &mut f64, best_max: &mut f64| {
        let (rms, max) = evaluate(&alpha);
        if rms < *best_rms {
            *best_alpha = alpha;
            *best_rms = rms;
            *best_max = max;
        }
    };
    for m in 0..4 {
        let mut a = [0.0; 4];
        a[m] = 1.0;
        consider(a, &mut best_alpha, &mut best_rms, &mut best_max);
    }
    for _ in 0..512 {
        consider(rng.unit_vector4(), &mut best_alpha, &mut best_rms, &mut best_max);
    }
    // Compass refinement on the unit sphere of combinations.
    let mut radius = 0.25;
    while radius > 1e-5 {
        let mut improved = false;
        for m in 0..4 {
            for sign in [-1.0, 1.0] {
                let mut a = best_alpha;
                a[m] += sign * radius;
                let norm: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm < 1e-12 {
                    continue;
                }
                for x in &mut a {
                    *x /= norm;
                }
                let (rms, max) = evaluate(&a);
                if rms < best_rms {
                    best_alpha = a;
                    best_rms = rms;
                    best_max = max;
                    improved = true;
                }
            }
        }
        if !improved {
            radius *= 0.5;
        }
    }

    let has_witness = best_rms < tol;
    let witness = if has_witness {
        let mut j = [0.0; 3];
        let mut j_prime = [0.0; 3];
        for m in 0..4 {
            for i in 0..3 {
                j[i] += best_alpha[m] * basis_inits[m].j[i];
                j_prime[i] += best_alpha[m] * basis_inits[m].j_prime[i];
            }
        }
        Some(JacobiState::new(j, j_prime, 0.0))
    } else {
        None
    };
    Ok(RankVerdict {
        has_hyperbolic_rank_witness: has_witness,
        witness,
        max_sec_deviation: best_max,
        rms_sec_deviation: best_rms,
    })
}
