//! Browser bindings for the interactive demo page.
//!
//! Three operations are exposed, all returning JSON strings so the page
//! stays framework-free: a family explorer (full analysis report), a
//! geodesic ODE tracer, and a sectional-curvature sphere map.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use cvc3::connection_curvature::sec_quadratic;
use cvc3::families::{build, FamilySpec};
use cvc3::geodesic_ode::{
    asymptotic_class_minus1, ell_closed_form, integrate_frame_ode, EllParams, FrameOdeInit,
};
use cvc3::linalg::Vec3;
use cvc3::report::{analyze, AnalysisOptions, InputDocument};

fn spec_from_parts(variant: &str, p1: f64, p2: f64) -> Result<FamilySpec, String> {
    match variant {
        "cvc1-type1" => Ok(FamilySpec::Cvc1TypeI { mu: p1 }),
        "cvc1-type2" => Ok(FamilySpec::Cvc1TypeII { c: p1 }),
        "cvc1-nonunimodular" => Ok(FamilySpec::Cvc1Nonunimodular { f: p1, g: p2 }),
        "cvc-minus1" => Ok(FamilySpec::CvcMinus1 { mu: p1 }),
        "cvc0-product" => Ok(FamilySpec::Cvc0Product { kappa: p1 }),
        "cvc0-solvable" => Ok(FamilySpec::Cvc0Solvable { f: p1, g: p2 }),
        "space-form" => Ok(FamilySpec::SpaceForm { epsilon: p1 }),
        other => Err(format!("unknown family variant `{other}`")),
    }
}

pub fn family_report_impl(variant: &str, p1: f64, p2: f64) -> Result<String, String> {
    let spec = spec_from_parts(variant, p1, p2)?;
    let doc = InputDocument::from_family(spec, None);
    let report = analyze(&doc, &AnalysisOptions::default()).map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct TrajectoryJson {
    times: Vec<f64>,
    ell: Vec<f64>,
    ell_closed: Vec<f64>,
    tr_a: Vec<f64>,
    det_a: Vec<f64>,
    lambda: Vec<f64>,
    b: Vec<f64>,
    sigma: Vec<f64>,
    tau: Vec<f64>,
    asymptotic_class: Option<String>,
}

#[allow(clippy::too_many_arguments)]
pub fn ode_trajectory_impl(
    epsilon: f64,
    tr_a0: f64,
    det_a0: f64,
    lambda0: f64,
    b0: f64,
    sigma0: f64,
    tau0: f64,
    c: f64,
    t_min: f64,
    t_max: f64,
    step: f64,
) -> Result<String, String> {
    let params = EllParams::new(epsilon, tr_a0, det_a0).map_err(|e| e.to_string())?;
    let init = FrameOdeInit { lambda0, b0, sigma0, tau0, c };
    let tr = integrate_frame_ode(&params, &init, (t_min, t_max), step)
        .map_err(|e| e.to_string())?;
    let ell_closed = tr.times.iter().map(|&t| ell_closed_form(&params, t)).collect();
    let asymptotic_class = if epsilon == -1.0 {
        asymptotic_class_minus1(tr_a0, det_a0)
            .ok()
            .map(|c| c.name().to_string())
    } else {
        None
    };
    let out = TrajectoryJson {
        times: tr.times,
        ell: tr.ell,
        ell_closed,
        tr_a: tr.tr_a,
        det_a: tr.det_a,
        lambda: tr.lambda,
        b: tr.b,
        sigma: tr.sigma,
        tau: tr.tau,
        asymptotic_class,
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct HeatmapJson {
    n_theta: usize,
    n_phi: usize,
    /// Row-major over (phi, theta): sec of the plane orthogonal to the
    /// direction (sin phi cos theta, sin phi sin theta, cos phi) in the
    /// Ricci eigenframe.
    values: Vec<f64>,
    min: f64,
    max: f64,
    plane_curvatures: [f64; 3],
}

pub fn sectional_map_impl(
    variant: &str,
    p1: f64,
    p2: f64,
    n_theta: usize,
    n_phi: usize,
) -> Result<String, String> {
    if n_theta < 2 || n_phi < 2 || n_theta * n_phi > 1_000_000 {
        return Err("grid must be at least 2x2 and at most 10^6 cells".into());
    }
    let spec = spec_from_parts(variant, p1, p2)?;
    let model = build(spec).map_err(|e| e.to_string())?;
    let triple = model.curvature.plane_curvatures();
    let mut values = Vec::with_capacity(n_theta * n_phi);
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for i in 0..n_phi {
        let phi = std::f64::consts::PI * i as f64 / (n_phi - 1) as f64;
        for j in 0..n_theta {
            let theta = std::f64::consts::TAU * j as f64 / n_theta as f64;
            let z = Vec3::new(phi.sin() * theta.cos(), phi.sin() * theta.sin(), phi.cos());
            let sec = sec_quadratic(triple, &z, 1e-9).map_err(|e| e.to_string())?;
            min = min.min(sec);
            max = max.max(sec);
            values.push(sec);
        }
    }
    let out = HeatmapJson { n_theta, n_phi, values, min, max, plane_curvatures: triple };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

/// Analysis report of one homogeneous family member, as JSON.
#[wasm_bindgen]
pub fn family_report(variant: &str, p1: f64, p2: f64) -> Result<String, JsValue> {
    family_report_impl(variant, p1, p2).map_err(|e| JsValue::from_str(&e))
}

/// Frame quantities along a distinguished geodesic, as JSON arrays.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn ode_trajectory(
    epsilon: f64,
    tr_a0: f64,
    det_a0: f64,
    lambda0: f64,
    b0: f64,
    sigma0: f64,
    tau0: f64,
    c: f64,
    t_min: f64,
    t_max: f64,
    step: f64,
) -> Result<String, JsValue> {
    ode_trajectory_impl(epsilon, tr_a0, det_a0, lambda0, b0, sigma0, tau0, c, t_min, t_max, step)
        .map_err(|e| JsValue::from_str(&e))
}

/// Sectional curvature over the sphere of plane normals, as a JSON grid.
#[wasm_bindgen]
pub fn sectional_map(
    variant: &str,
    p1: f64,
    p2: f64,
    n_theta: usize,
    n_phi: usize,
) -> Result<String, JsValue> {
    sectional_map_impl(variant, p1, p2, n_theta, n_phi).map_err(|e| JsValue::from_str(&e))
}
