//! Evolution of the adapted-frame quantities along distinguished geodesics.
//!
//! Along a geodesic tangent to the distinguished direction the trace and
//! determinant of `A`, the plane curvature `lambda`, and the normal-form
//! parts `b`, `sigma`, `tau` obey the autonomous system
//!
//! ```text
//! (tr A)'        = 2 (det A - eps) - (tr A)^2
//! (det A + eps)' = -(tr A)(det A + eps)
//! (lambda-eps)'  = -(tr A)(lambda - eps)
//! b'             = -(tr A) b
//! sigma'         =  2 c tau - (tr A) sigma
//! tau'           = -2 c sigma - (tr A) tau
//! ```
//!
//! The substitution `tr A = ell'/ell` linearizes the first two equations into
//! `ell'' + 4 eps ell = 2k` with `k = det A(0) + eps`, `ell(0) = 1`,
//! `ell'(0) = tr A(0)`; the closed-form solutions are implemented here per
//! epsilon and validated against fixed-step RK4 integration of the raw
//! system.

use serde::{Deserialize, Serialize};

use crate::error::{CvcError, Result};

/// Initial data for the `ell` equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllParams {
    pub epsilon: f64,
    pub tr_a0: f64,
    pub det_a0: f64,
}

impl EllParams {
    /// `epsilon` must be one of -1, 0, 1 (the normalized curvature levels).
    pub fn new(epsilon: f64, tr_a0: f64, det_a0: f64) -> Result<Self> {
        if epsilon != -1.0 && epsilon != 0.0 && epsilon != 1.0 {
            return Err(CvcError::ParameterOutOfRange(format!(
                "epsilon must be -1, 0 or 1, got {epsilon}"
            )));
        }
        Ok(Self { epsilon, tr_a0, det_a0 })
    }

    /// The forcing constant `k = det A(0) + eps`.
    pub fn k(&self) -> f64 {
        self.det_a0 + self.epsilon
    }
}

/// Closed-form solution of `ell'' + 4 eps ell = 2k`, `ell(0) = 1`,
/// `ell'(0) = tr A(0)`.
pub fn ell_closed_form(p: &EllParams, t: f64) -> f64 {
    let d = p.det_a0;
    match p.epsilon as i32 {
        -1 => 0.5 * (p.tr_a0 * (2.0 * t).sinh() + (d + 1.0) * (2.0 * t).cosh() - (d - 1.0)),
        0 => d * t * t + p.tr_a0 * t + 1.0,
        _ => {
            let k = p.k();
            0.5 * k + (1.0 - 0.5 * k) * (2.0 * t).cos() + 0.5 * p.tr_a0 * (2.0 * t).sin()
        }
    }
}

/// Derivative of [`ell_closed_form`] in `t`.
pub fn ell_closed_form_deriv(p: &EllParams, t: f64) -> f64 {
    let d = p.det_a0;
    match p.epsilon as i32 {
        -1 => p.tr_a0 * (2.0 * t).cosh() + (d + 1.0) * (2.0 * t).sinh(),
        0 => 2.0 * d * t + p.tr_a0,
        _ => {
            let k = p.k();
            -2.0 * (1.0 - 0.5 * k) * (2.0 * t).sin() + p.tr_a0 * (2.0 * t).cos()
        }
    }
}

/// `tr A(t) = ell'/ell` and `det A(t) = -eps + k/ell`, failing when `ell`
/// is not positive at `t`.
pub fn tr_det_along(p: &EllParams, t: f64) -> Result<(f64, f64)> {
    let ell = ell_closed_form(p, t);
    if ell <= 0.0 {
        return Err(CvcError::EllNonpositive { t });
    }
    Ok((ell_closed_form_deriv(p, t) / ell, -p.epsilon + p.k() / ell))
}

/// Analytic zeros of the closed form inside `[t0, t1]`, returned as the zero
/// closest to the origin. Touching zeros count: the geometry needs `ell`
/// strictly positive.
pub fn ell_first_zero_in(p: &EllParams, t0: f64, t1: f64) -> Option<f64> {
    let mut zeros: Vec<f64> = Vec::new();
    let d = p.det_a0;
    match p.epsilon as i32 {
        0 => {
            if d == 0.0 {
                if p.tr_a0 != 0.0 {
                    zeros.push(-1.0 / p.tr_a0);
                }
            } else {
                let disc = p.tr_a0 * p.tr_a0 - 4.0 * d;
                if disc >= 0.0 {
                    let s = disc.sqrt();
                    zeros.push((-p.tr_a0 + s) / (2.0 * d));
                    zeros.push((-p.tr_a0 - s) / (2.0 * d));
                }
            }
        }
        -1 => {
            // 4 ell = P x^2 + c3 x + Q with x = e^{2t} > 0.
            let big_p = p.tr_a0 + d + 1.0;
            let big_q = d + 1.0 - p.tr_a0;
            let c3 = -2.0 * (d - 1.0);
            let mut push_x = |x: f64| {
                if x > 0.0 {
                    zeros.push(0.5 * x.ln());
                }
            };
            if big_p == 0.0 {
                if c3 != 0.0 {
                    push_x(-big_q / c3);
                }
            } else {
                let disc = c3 * c3 - 4.0 * big_p * big_q;
                if disc >= 0.0 {
                    let s = disc.sqrt();
                    push_x((-c3 + s) / (2.0 * big_p));
                    push_x((-c3 - s) / (2.0 * big_p));
                }
            }
        }
        _ => {
            // ell = c + R cos(2t - psi).
            let c = 0.5 * p.k();
            let a = 1.0 - c;
            let b = 0.5 * p.tr_a0;
            let r = (a * a + b * b).sqrt();
            if r > 1e-300 && c.abs() <= r {
                let psi = b.atan2(a);
                let u = (-c / r).clamp(-1.0, 1.0).acos();
                let lo = (2.0 * t0 - psi - u) / std::f64::consts::TAU;
                let hi = (2.0 * t1 - psi + u) / std::f64::consts::TAU;
                for n in (lo.floor() as i64 - 1)..=(hi.ceil() as i64 + 1) {
                    let base = psi + std::f64::consts::TAU * n as f64;
                    zeros.push(0.5 * (base + u));
                    zeros.push(0.5 * (base - u));
                }
            }
        }
    }
    zeros
        .into_iter()
        .filter(|t| *t >= t0 && *t <= t1)
        .min_by(|a, b| a.abs().total_cmp(&b.abs()))
}

/// One classical fixed-step RK4 step for `y' = deriv(t, y)`.
pub fn rk4_step<const N: usize>(
    deriv: impl Fn(f64, &[f64; N]) -> [f64; N],
    t: f64,
    y: &[f64; N],
    h: f64,
) -> [f64; N] {
    let add = |y: &[f64; N], k: &[f64; N], s: f64| {
        let mut out = *y;
        for i in 0..N {
            out[i] += s * k[i];
        }
        out
    };
    let k1 = deriv(t, y);
    let k2 = deriv(t + 0.5 * h, &add(y, &k1, 0.5 * h));
    let k3 = deriv(t + 0.5 * h, &add(y, &k2, 0.5 * h));
    let k4 = deriv(t + h, &add(y, &k3, h));
    let mut out = *y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Remaining initial data for the coupled frame system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameOdeInit {
    pub lambda0: f64,
    pub b0: f64,
    pub sigma0: f64,
    pub tau0: f64,
    /// The rotation coefficient `c` of the adapted frame, constant here.
    pub c: f64,
}

impl Default for FrameOdeInit {
    fn default() -> Self {
        Self { lambda0: 0.0, b0: 0.0, sigma0: 0.0, tau0: 0.0, c: 0.0 }
    }
}

/// Sampled evolution of the frame quantities on a uniform grid.
///
/// The `f`, `g` and `theta` channels are not driven by this system (they
/// evolve by their own reduced equations, see [`fg_system_minus1`] and
/// [`theta_evolution_cvc0`]) and are kept as zero columns so trajectories
/// share one layout.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OdeTrajectory {
    pub times: Vec<f64>,
    pub ell: Vec<f64>,
    pub tr_a: Vec<f64>,
    pub det_a: Vec<f64>,
    pub lambda: Vec<f64>,
    pub b: Vec<f64>,
    pub sigma: Vec<f64>,
    pub tau: Vec<f64>,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
    pub theta: Vec<f64>,
    /// `K` with `det A + eps = K (lambda - eps)`, fitted at t = 0;
    /// absent when `lambda(0) = eps`.
    pub k_prop: Option<f64>,
    /// `C` with `b = C (lambda - eps)`, fitted at t = 0.
    pub c_prop: Option<f64>,
}

impl OdeTrajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Index of the grid point t = 0.
    pub fn origin_index(&self) -> usize {
        self.times
            .iter()
            .position(|&t| t.abs() < 1e-12)
            .expect("grid contains t = 0")
    }
}

// State layout for the RK4 system.
const ELL: usize = 0;
const DELL: usize = 1;
const TRA: usize = 2;
const DETA: usize = 3;
const LAM: usize = 4;
const B: usize = 5;
const SIG: usize = 6;
const TAU: usize = 7;

/// Integrates the coupled frame system on `[t_span.0, t_span.1]` (which must
/// contain 0, where the initial data lives) with fixed step `step`.
///
/// Fails with `EllNonpositive` at the first grid point where `ell` stops
/// being positive: such data cannot live on a complete geodesic.
pub fn integrate_frame_ode(
    p: &EllParams,
    init: &FrameOdeInit,
    t_span: (f64, f64),
    step: f64,
) -> Result<OdeTrajectory> {
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
    let n_back = (-t_span.0 / step).round() as usize;
    let n_fwd = (t_span.1 / step).round() as usize;
    // The realized grid may overshoot the span by up to half a step.
    if let Some(t) = ell_first_zero_in(p, -(n_back as f64) * step, n_fwd as f64 * step) {
        return Err(CvcError::EllNonpositive { t });
    }
    let epsilon = p.epsilon;
    let k = p.k();
    let c = init.c;
    let deriv = move |_t: f64, y: &[f64; 8]| -> [f64; 8] {
        [
            y[DELL],
            2.0 * k - 4.0 * epsilon * y[ELL],
            2.0 * (y[DETA] - epsilon) - y[TRA] * y[TRA],
            -y[TRA] * (y[DETA] + epsilon),
            -y[TRA] * (y[LAM] - epsilon),
            -y[TRA] * y[B],
            2.0 * c * y[TAU] - y[TRA] * y[SIG],
            -2.0 * c * y[SIG] - y[TRA] * y[TAU],
        ]
    };

    let y0 = [
        1.0,
        p.tr_a0,
        p.tr_a0,
        p.det_a0,
        init.lambda0,
        init.b0,
        init.sigma0,
        init.tau0,
    ];
    let mut states = vec![[0.0; 8]; n_back + n_fwd + 1];
    states[n_back] = y0;
    let mut y = y0;
    for i in 0..n_fwd {
        let t = i as f64 * step;
        y = rk4_step(deriv, t, &y, step);
        if y[ELL] <= 0.0 {
            return Err(CvcError::EllNonpositive { t: t + step });
        }
        states[n_back + i + 1] = y;
    }
    y = y0;
    for i in 0..n_back {
        let t = -(i as f64) * step;
        y = rk4_step(deriv, t, &y, -step);
        if y[ELL] <= 0.0 {
            return Err(CvcError::EllNonpositive { t: t - step });
        }
        states[n_back - i - 1] = y;
    }

    let times: Vec<f64> = (0..states.len())
        .map(|i| (i as f64 - n_back as f64) * step)
        .collect();
    let column = |j: usize| states.iter().map(|s| s[j]).collect::<Vec<f64>>();
    let denom = init.lambda0 - epsilon;
    let (k_prop, c_prop) = if denom.abs() > 1e-15 {
        (Some((p.det_a0 + epsilon) / denom), Some(init.b0 / denom))
    } else {
        (None, None)
    };
    let n = times.len();
    Ok(OdeTrajectory {
        times,
        ell: column(ELL),
        tr_a: column(TRA),
        det_a: column(DETA),
        lambda: column(LAM),
        b: column(B),
        sigma: column(SIG),
        tau: column(TAU),
        f: vec![0.0; n],
        g: vec![0.0; n],
        theta: vec![0.0; n],
        k_prop,
        c_prop,
    })
}

/// Whether the eps = -1 closed form stays positive on all of R.
///
/// Writing `4 ell = P e^{2t} + Q e^{-2t} + c3` with `P = tr A(0) + det A(0)
/// + 1`, `Q = det A(0) + 1 - tr A(0)`, `c3 = -2 (det A(0) - 1)`, positivity
/// needs `P, Q >= 0` and, when both are positive, the interior minimum
/// `2 sqrt(P Q) + c3` to be positive as well.
pub fn ell_stays_positive_minus1(tr_a0: f64, det_a0: f64) -> bool {
    let p = tr_a0 + det_a0 + 1.0;
    let q = det_a0 + 1.0 - tr_a0;
    let c3 = -2.0 * (det_a0 - 1.0);
    if p < 0.0 || q < 0.0 {
        return false;
    }
    if p == 0.0 && q == 0.0 {
        return true;
    }
    if p == 0.0 || q == 0.0 {
        return c3 >= 0.0;
    }
    2.0 * (p * q).sqrt() + c3 > 0.0
}

/// Long-time behaviour of `tr A` along complete eps = -1 geodesics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AsymptoticClass {
    /// `tr A -> -2` backward, `tr A -> 2` forward.
    #[serde(rename = "S_MINUS2_2")]
    MinusTwoToTwo,
    /// `tr A -> 0` backward, `tr A -> 2` forward.
    #[serde(rename = "S_0_2")]
    ZeroToTwo,
    /// `tr A -> -2` backward, `tr A -> 0` forward.
    #[serde(rename = "S_MINUS2_0")]
    MinusTwoToZero,
    /// `tr A` vanishes identically.
    #[serde(rename = "S_0_0")]
    ZeroToZero,
}

impl AsymptoticClass {
    /// Declared limits of `tr A` at t -> -inf and t -> +inf.
    pub fn limits(&self) -> (f64, f64) {
        match self {
            AsymptoticClass::MinusTwoToTwo => (-2.0, 2.0),
            AsymptoticClass::ZeroToTwo => (0.0, 2.0),
            AsymptoticClass::MinusTwoToZero => (-2.0, 0.0),
            AsymptoticClass::ZeroToZero => (0.0, 0.0),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            AsymptoticClass::MinusTwoToTwo => "S_MINUS2_2",
            AsymptoticClass::ZeroToTwo => "S_0_2",
            AsymptoticClass::MinusTwoToZero => "S_MINUS2_0",
            AsymptoticClass::ZeroToZero => "S_0_0",
        }
    }
}

impl std::fmt::Display for AsymptoticClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Classifies eps = -1 initial data by the signs of `c1 + c2` and `c1 - c2`
/// where `c1 = tr A(0)`, `c2 = det A(0) + 1`.
pub fn asymptotic_class_minus1(tr_a0: f64, det_a0: f64) -> Result<AsymptoticClass> {
    if !ell_stays_positive_minus1(tr_a0, det_a0) {
        return Err(CvcError::InvalidInitialData { tr_a0, det_a0 });
    }
    const ZTOL: f64 = 1e-12;
    let c1 = tr_a0;
    let c2 = det_a0 + 1.0;
    let sum_zero = (c1 + c2).abs() <= ZTOL;
    let diff_zero = (c1 - c2).abs() <= ZTOL;
    Ok(match (sum_zero, diff_zero) {
        (true, true) => AsymptoticClass::ZeroToZero,
        (false, true) => AsymptoticClass::ZeroToTwo,
        (true, false) => AsymptoticClass::MinusTwoToZero,
        (false, false) => AsymptoticClass::MinusTwoToTwo,
    })
}

/// Closed-form solution of the coupled `(f, g)` system along eps = -1
/// geodesics in the off-diagonal frame (`a11 = a22 = c = 0`, `a12 = mu`,
/// `a21 = 1/mu`): `f' = g/mu`, `g' = mu f`, solved by
/// `c1 e^t (1, mu) + c2 e^{-t} (1, -mu)`.
pub fn fg_system_minus1(mu: f64, f0: f64, g0: f64, t: f64) -> Result<(f64, f64)> {
    if mu == 0.0 {
        return Err(CvcError::ParameterOutOfRange("mu must be nonzero".into()));
    }
    let c1 = 0.5 * (f0 + g0 / mu);
    let c2 = 0.5 * (f0 - g0 / mu);
    let up = t.exp();
    let down = (-t).exp();
    Ok((c1 * up + c2 * down, mu * (c1 * up - c2 * down)))
}

/// Closed-form frame angle along eps = 0 geodesics in the lower-triangular
/// frame: `theta' = -mu cos^2 theta`, hence
/// `theta(t) = arctan(tan theta(0) - mu t)`.
pub fn theta_evolution_cvc0(mu: f64, theta0: f64, t: f64) -> Result<f64> {
    if mu == 0.0 {
        return Err(CvcError::ParameterOutOfRange("mu must be nonzero".into()));
    }
    if theta0.abs() >= std::f64::consts::FRAC_PI_2 {
        return Err(CvcError::ParameterOutOfRange(format!(
            "theta0 must lie in (-pi/2, pi/2), got {theta0}"
        )));
    }
    Ok((theta0.tan() - mu * t).atan())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn assert_close(x: f64, y: f64, tol: f64) {
        assert!((x - y).abs() <= tol, "{x} vs {y}");
    }

    #[test]
    fn stationary_minus1_ell_is_one() {
        let p = EllParams::new(-1.0, 0.0, -1.0).unwrap();
        for i in -30..=30 {
            assert_close(ell_closed_form(&p, i as f64 * 0.1), 1.0, 1e-14);
        }
    }

    #[test]
    fn parabolic_cvc0_solution() {
        let p = EllParams::new(0.0, 2.0, 1.0).unwrap();
        for i in -10..=50 {
            let t = i as f64 * 0.1;
            assert_close(ell_closed_form(&p, t), (t + 1.0) * (t + 1.0), 1e-12);
        }
    }

    #[test]
    fn constant_solution_for_plus1() {
        let p = EllParams::new(1.0, 0.0, 1.0).unwrap();
        for i in -30..=30 {
            assert_close(ell_closed_form(&p, i as f64 * 0.1), 1.0, 1e-14);
        }
    }

    #[test]
    fn epsilon_must_be_normalized() {
        assert!(EllParams::new(0.5, 0.0, 0.0).is_err());
    }

    #[test]
    fn closed_form_satisfies_the_ode() {
        let mut rng = SplitMix64::new(5);
        for &eps in &[-1.0, 0.0, 1.0] {
            for _ in 0..40 {
                let p = EllParams::new(eps, rng.range(-2.0, 2.0), rng.range(-2.0, 2.0)).unwrap();
                let t = rng.range(-2.0, 2.0);
                assert_close(ell_closed_form(&p, 0.0), 1.0, 1e-14);
                assert_close(ell_closed_form_deriv(&p, 0.0), p.tr_a0, 1e-14);
                let h = 1e-4;
                let second = (ell_closed_form(&p, t + h) - 2.0 * ell_closed_form(&p, t)
                    + ell_closed_form(&p, t - h))
                    / (h * h);
                let residual = second + 4.0 * eps * ell_closed_form(&p, t) - 2.0 * p.k();
                assert_close(residual, 0.0, 1e-6);
            }
        }
    }

    #[test]
    fn tr_det_examples() {
        let p = EllParams::new(-1.0, 0.0, -1.0).unwrap();
        for t in [-3.0, 0.0, 1.7] {
            let (tr, det) = tr_det_along(&p, t).unwrap();
            assert_close(tr, 0.0, 1e-14);
            assert_close(det, -1.0, 1e-14);
        }

        let p0 = EllParams::new(0.0, 2.0, 1.0).unwrap();
        let (tr, det) = tr_det_along(&p0, 9.0).unwrap();
        assert_close(tr, 2.0 / 10.0, 1e-12);
        assert_close(det, 1.0 / 100.0, 1e-12);
        assert!(matches!(
            tr_det_along(&p0, -1.0),
            Err(CvcError::EllNonpositive { .. })
        ));
    }

    #[test]
    fn tr_evolution_matches_riccati_equation() {
        let mut rng = SplitMix64::new(9);
        for &eps in &[-1.0, 0.0, 1.0] {
            for _ in 0..20 {
                let p = EllParams::new(eps, rng.range(-0.5, 0.5), rng.range(-0.5, 0.5)).unwrap();
                let t = rng.range(-0.5, 0.5);
                let h = 1e-4;
                let (tr_p, _) = tr_det_along(&p, t + h).unwrap();
                let (tr_m, _) = tr_det_along(&p, t - h).unwrap();
                let (tr, det) = tr_det_along(&p, t).unwrap();
                let lhs = (tr_p - tr_m) / (2.0 * h);
                let rhs = 2.0 * (det - eps) - tr * tr;
                assert_close(lhs, rhs, 1e-6);
            }
        }
    }

    #[test]
    fn stationary_trajectory_is_constant() {
        let p = EllParams::new(-1.0, 0.0, -1.0).unwrap();
        let init = FrameOdeInit { lambda0: 1.0, b0: 0.0, sigma0: 1.0, tau0: 0.0, c: 0.0 };
        let tr = integrate_frame_ode(&p, &init, (-2.0, 2.0), 1e-3).unwrap();
        for i in 0..tr.len() {
            assert_close(tr.ell[i], 1.0, 1e-10);
            assert_close(tr.tr_a[i], 0.0, 1e-10);
            assert_close(tr.det_a[i], -1.0, 1e-10);
            assert_close(tr.lambda[i], 1.0, 1e-10);
            assert_close(tr.b[i], 0.0, 1e-10);
            assert_close(tr.sigma[i], 1.0, 1e-10);
            assert_close(tr.tau[i], 0.0, 1e-10);
        }
    }

    #[test]
    fn trajectory_invariants_hold() {
        let p = EllParams::new(-1.0, 0.4, -0.3).unwrap();
        let init = FrameOdeInit { lambda0: 0.5, b0: 0.3, sigma0: 0.7, tau0: -0.2, c: 0.9 };
        let tr = integrate_frame_ode(&p, &init, (-2.0, 2.0), 1e-3).unwrap();
        let kp = tr.k_prop.unwrap();
        let cp = tr.c_prop.unwrap();
        let k = p.k();
        for i in 0..tr.len() {
            assert!(tr.ell[i] > 0.0);
            assert_close(tr.tr_a[i], ell_closed_form_deriv(&p, tr.times[i]) / tr.ell[i], 1e-6);
            assert_close(tr.det_a[i] + p.epsilon, k / tr.ell[i], 1e-6);
            assert_close(tr.det_a[i] + p.epsilon, kp * (tr.lambda[i] - p.epsilon), 1e-8);
            assert_close(tr.b[i], cp * (tr.lambda[i] - p.epsilon), 1e-8);
        }
    }

    #[test]
    fn lambda_never_crosses_epsilon() {
        let mut rng = SplitMix64::new(13);
        for &eps in &[-1.0, 0.0, 1.0] {
            for _ in 0..10 {
                let p = EllParams::new(eps, rng.range(-0.3, 0.3), rng.range(-0.3, 0.3)).unwrap();
                let lambda0 =
                    eps + rng.range(0.1, 1.0) * if rng.next_f64() < 0.5 { 1.0 } else { -1.0 };
                let init = FrameOdeInit { lambda0, b0: 0.0, sigma0: 0.0, tau0: 0.0, c: 0.0 };
                let Ok(tr) = integrate_frame_ode(&p, &init, (-2.0, 2.0), 1e-3) else {
                    continue;
                };
                let sign0 = (lambda0 - eps).signum();
                for i in 0..tr.len() {
                    assert!((tr.lambda[i] - eps) * sign0 > 0.0);
                }
            }
        }
    }

    #[test]
    fn zero_traceless_part_stays_zero() {
        let p = EllParams::new(-1.0, 0.4, -0.3).unwrap();
        let init = FrameOdeInit { lambda0: 0.5, b0: 0.3, sigma0: 0.0, tau0: 0.0, c: 1.3 };
        let tr = integrate_frame_ode(&p, &init, (-2.0, 2.0), 1e-3).unwrap();
        for i in 0..tr.len() {
            assert_close(tr.sigma[i], 0.0, 1e-12);
            assert_close(tr.tau[i], 0.0, 1e-12);
        }
    }

    #[test]
    fn det_traceless_evolution_law() {
        // d/dt (sigma^2 + tau^2) = -2 tr A (sigma^2 + tau^2), checked by
        // finite differences on a generic run.
        let p = EllParams::new(-1.0, 0.2, -0.9).unwrap();
        let init = FrameOdeInit { lambda0: 0.4, b0: 0.1, sigma0: 0.6, tau0: 0.5, c: 0.8 };
        let tr = integrate_frame_ode(&p, &init, (-1.0, 1.0), 1e-3).unwrap();
        let sq = |i: usize| tr.sigma[i] * tr.sigma[i] + tr.tau[i] * tr.tau[i];
        for i in (1..tr.len() - 1).step_by(97) {
            let lhs = (sq(i + 1) - sq(i - 1)) / (2.0 * 1e-3);
            let rhs = -2.0 * tr.tr_a[i] * sq(i);
            assert_close(lhs, rhs, 1e-5);
        }
    }

    #[test]
    fn vanishing_trace_is_equivalent_to_det_at_epsilon() {
        // tr A vanishes identically iff det A sits at eps identically.
        for &eps in &[-1.0, 0.0, 1.0] {
            let stationary = EllParams::new(eps, 0.0, eps).unwrap();
            for i in -20..=20 {
                let (tr, det) = tr_det_along(&stationary, i as f64 * 0.1).unwrap();
                assert_close(tr, 0.0, 1e-13);
                assert_close(det, eps, 1e-13);
            }
        }
        // k = 0 data: det A is constant at -eps != eps while tr A moves.
        let moving = EllParams::new(-1.0, 0.0, 1.0).unwrap();
        let (tr, det) = tr_det_along(&moving, 1.0).unwrap();
        assert!(tr.abs() > 1e-3);
        assert_close(det, 1.0, 1e-13);
        // Generic data: both move.
        let generic = EllParams::new(-1.0, 0.5, 0.2).unwrap();
        let (tr, det) = tr_det_along(&generic, 1.0).unwrap();
        assert!(tr.abs() > 1e-3);
        assert!((det - 0.2).abs() > 1e-3);
    }

    #[test]
    fn mid_span_blowup_is_reported() {
        let p = EllParams::new(0.0, 2.0, 1.0).unwrap();
        let init = FrameOdeInit::default();
        let err = integrate_frame_ode(&p, &init, (-2.0, 2.0), 1e-3).unwrap_err();
        match err {
            CvcError::EllNonpositive { t } => assert!(t <= -0.999),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn asymptotic_class_examples() {
        assert_eq!(asymptotic_class_minus1(0.0, -1.0).unwrap(), AsymptoticClass::ZeroToZero);
        assert_eq!(asymptotic_class_minus1(2.0, 1.0).unwrap(), AsymptoticClass::ZeroToTwo);
        assert_eq!(asymptotic_class_minus1(0.0, 0.0).unwrap(), AsymptoticClass::MinusTwoToTwo);
        assert_eq!(asymptotic_class_minus1(-1.0, 0.0).unwrap(), AsymptoticClass::MinusTwoToZero);
    }

    #[test]
    fn inadmissible_initial_data_is_rejected() {
        // Sign conditions hold but the interior minimum of ell is negative.
        assert!(matches!(
            asymptotic_class_minus1(-10.0, 10.0),
            Err(CvcError::InvalidInitialData { .. })
        ));
        // ell -> -inf backward.
        assert!(matches!(
            asymptotic_class_minus1(5.0, 1.0),
            Err(CvcError::InvalidInitialData { .. })
        ));
    }

    #[test]
    fn positivity_analysis_matches_dense_sampling() {
        let mut rng = SplitMix64::new(44);
        for _ in 0..300 {
            let tr_a0 = rng.range(-3.0, 3.0);
            let det_a0 = rng.range(-3.0, 3.0);
            let p = EllParams::new(-1.0, tr_a0, det_a0).unwrap();
            let mut positive = true;
            for i in -4000..=4000 {
                if ell_closed_form(&p, i as f64 * 0.005) <= 0.0 {
                    positive = false;
                    break;
                }
            }
            // Dense sampling on [-20, 20] can miss a barely-negative dip, but
            // a sampled zero must be predicted.
            if !positive {
                assert!(
                    !ell_stays_positive_minus1(tr_a0, det_a0),
                    "sampled a nonpositive ell for ({tr_a0}, {det_a0})"
                );
            }
        }
    }

    #[test]
    fn fg_modes() {
        let mu = 1.7;
        let (f, g) = fg_system_minus1(mu, 0.0, 0.0, 2.3).unwrap();
        assert_eq!((f, g), (0.0, 0.0));

        for t in [-1.0, 0.0, 0.5, 2.0] {
            let (f, g) = fg_system_minus1(mu, 1.0, mu, t).unwrap();
            assert_close(f, t.exp(), 1e-12);
            assert_close(g, mu * t.exp(), 1e-12);

            let (f, g) = fg_system_minus1(mu, 1.0, -mu, t).unwrap();
            assert_close(f, (-t).exp(), 1e-12);
            assert_close(g, -mu * (-t).exp(), 1e-12);
        }
    }

    #[test]
    fn fg_satisfies_the_coupled_system() {
        let mut rng = SplitMix64::new(71);
        for _ in 0..40 {
            let mu = rng.range(0.2, 3.0);
            let f0 = rng.range(-1.0, 1.0);
            let g0 = rng.range(-1.0, 1.0);
            let t = rng.range(-2.0, 2.0);
            let h = 1e-5;
            let (fp, gp) = fg_system_minus1(mu, f0, g0, t + h).unwrap();
            let (fm, gm) = fg_system_minus1(mu, f0, g0, t - h).unwrap();
            let (f, g) = fg_system_minus1(mu, f0, g0, t).unwrap();
            assert_close((fp - fm) / (2.0 * h), g / mu, 1e-6);
            assert_close((gp - gm) / (2.0 * h), mu * f, 1e-6);
        }
    }

    #[test]
    fn theta_closed_form() {
        assert_close(
            theta_evolution_cvc0(1.0, 0.0, 1.0).unwrap(),
            -std::f64::consts::FRAC_PI_4,
            1e-15,
        );
        assert_close(theta_evolution_cvc0(2.0, 0.3, 0.0).unwrap(), 0.3, 1e-15);
        assert!(theta_evolution_cvc0(0.0, 0.3, 1.0).is_err());
        assert!(theta_evolution_cvc0(1.0, 2.0, 1.0).is_err());
        // The angle saturates at -pi/2 forward and +pi/2 backward for mu > 0.
        let half = std::f64::consts::FRAC_PI_2;
        assert_close(theta_evolution_cvc0(1.0, 0.3, 1e6).unwrap(), -half, 1e-5);
        assert_close(theta_evolution_cvc0(1.0, 0.3, -1e6).unwrap(), half, 1e-5);
    }

    #[test]
    fn theta_matches_rk4() {
        let mu = 2.0;
        let theta0 = 0.3;
        let step = 1e-4;
        let mut theta = [theta0];
        let deriv = |_t: f64, y: &[f64; 1]| [-mu * y[0].cos().powi(2)];
        let mut worst = 0.0_f64;
        for i in 0..50_000 {
            let t = i as f64 * step;
            theta = rk4_step(deriv, t, &theta, step);
            let closed = theta_evolution_cvc0(mu, theta0, t + step).unwrap();
            worst = worst.max((closed - theta[0]).abs());
        }
        assert!(worst < 1e-8, "max deviation {worst}");
    }
}
