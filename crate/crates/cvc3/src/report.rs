//! Input/report file formats and the analysis pipeline.
//!
//! Documents are JSON with a `kind` discriminator:
//!
//! ```json
//! {"kind": "metric_lie_algebra", "structure_constants": [[[...]]], "gram": [[...]]}
//! {"kind": "christoffel_table", "a11": 0.0, "a12": 2.0, "a21": 0.5, "a22": 0.0,
//!  "f": 0.0, "g": 0.0, "c": 0.0}
//! {"kind": "family", "variant": "cvc_minus1", "mu": 2.0}
//! ```
//!
//! plus an optional free-form `metadata` object. Reports are deterministic
//! given the input, the seed and the tolerances.

use serde::{Deserialize, Serialize};

use crate::adapted_frame::{verify_homogeneous, ChristoffelTable, HOMOGENEOUS_RESIDUAL_NAMES};
use crate::connection_curvature::{levi_civita, riemann_tensor, CurvatureData};
use crate::cvc_analysis::{cvc_bruteforce, cvc_status, CvcReport, Extremality};
use crate::error::{CvcError, Result};
use crate::families::{build, FamilyModel, FamilySpec};
use crate::geodesic_ode::OdeTrajectory;
use crate::lie_metric::{
    christoffel_to_brackets, milnor_map, orthonormalize, validate, GroupLabel, MetricLieAlgebra,
    MilnorForm, ValidationReport,
};
use crate::linalg::Mat3;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

/// The three kinds of analyzable inputs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputPayload {
    MetricLieAlgebra {
        structure_constants: Vec<Vec<Vec<f64>>>,
        gram: Vec<Vec<f64>>,
    },
    ChristoffelTable {
        a11: f64,
        a12: f64,
        a21: f64,
        a22: f64,
        f: f64,
        g: f64,
        c: f64,
    },
    Family(FamilySpec),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InputDocument {
    #[serde(flatten)]
    pub payload: InputPayload,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

impl InputDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CvcError::MalformedInput(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serialization")
    }

    pub fn from_algebra(mla: &MetricLieAlgebra, metadata: Option<Metadata>) -> Self {
        let c = mla.structure_constants();
        let structure_constants = (0..3)
            .map(|i| (0..3).map(|j| c[i][j].to_vec()).collect())
            .collect();
        let gram = (0..3)
            .map(|i| (0..3).map(|j| mla.gram()[(i, j)]).collect())
            .collect();
        Self {
            payload: InputPayload::MetricLieAlgebra { structure_constants, gram },
            metadata,
        }
    }

    pub fn from_table(t: &ChristoffelTable, metadata: Option<Metadata>) -> Self {
        Self {
            payload: InputPayload::ChristoffelTable {
                a11: t.a11,
                a12: t.a12,
                a21: t.a21,
                a22: t.a22,
                f: t.f,
                g: t.g,
                c: t.c,
            },
            metadata,
        }
    }

    pub fn from_family(spec: FamilySpec, metadata: Option<Metadata>) -> Self {
        Self { payload: InputPayload::Family(spec), metadata }
    }
}

fn algebra_from_parts(
    structure_constants: &[Vec<Vec<f64>>],
    gram: &[Vec<f64>],
) -> Result<MetricLieAlgebra> {
    let bad = |what: &str| {
        Err(CvcError::MalformedInput(format!(
            "{what}: structure_constants must be 3x3x3 and gram 3x3"
        )))
    };
    if structure_constants.len() != 3 {
        return bad("wrong outer length");
    }
    let mut c = [[[0.0; 3]; 3]; 3];
    for (i, plane) in structure_constants.iter().enumerate() {
        if plane.len() != 3 {
            return bad("wrong middle length");
        }
        for (j, row) in plane.iter().enumerate() {
            if row.len() != 3 {
                return bad("wrong inner length");
            }
            for (k, v) in row.iter().enumerate() {
                c[i][j][k] = *v;
            }
        }
    }
    if gram.len() != 3 || gram.iter().any(|r| r.len() != 3) {
        return bad("wrong gram shape");
    }
    let g = Mat3::from_fn(|i, j| gram[i][j]);
    Ok(MetricLieAlgebra::new(c, g))
}

/// Knobs of the analysis pipeline, mirroring the CLI flags.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalysisOptions {
    pub epsilons: Vec<f64>,
    pub tol: f64,
    /// Sample count for the brute-force cvc confirmation.
    pub samples: usize,
    pub seed: u64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self { epsilons: vec![-1.0, 0.0, 1.0], tol: 1e-8, samples: 500, seed: 42 }
    }
}

/// One cvc verdict plus the sampling oracle's confirmation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CvcVerdict {
    #[serde(flatten)]
    pub report: CvcReport,
    pub bruteforce_agrees: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurvatureSummary {
    pub plane_curvatures: [f64; 3],
    pub ricci: [[f64; 3]; 3],
    pub ricci_eigenvalues: [f64; 3],
    pub scalar: f64,
    pub eigen_gap: f64,
    pub sec_range: [f64; 2],
}

impl CurvatureSummary {
    fn new(cd: &CurvatureData) -> Self {
        let mut triple = cd.plane_curvatures();
        triple.sort_by(f64::total_cmp);
        let e = cd.ricci_eigenvalues();
        let r = cd.ricci();
        Self {
            plane_curvatures: cd.plane_curvatures(),
            ricci: [
                [r[(0, 0)], r[(0, 1)], r[(0, 2)]],
                [r[(1, 0)], r[(1, 1)], r[(1, 2)]],
                [r[(2, 0)], r[(2, 1)], r[(2, 2)]],
            ],
            ricci_eigenvalues: [e[0], e[1], e[2]],
            scalar: cd.scalar(),
            eigen_gap: cd.eigen_gap(),
            sec_range: [triple[0], triple[2]],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResidualTable {
    pub epsilon: f64,
    pub lambda: f64,
    pub names: Vec<String>,
    pub values: Vec<f64>,
    pub max_abs: f64,
}

impl ResidualTable {
    pub fn new(table: &ChristoffelTable, epsilon: f64, lambda: f64) -> Self {
        let values = verify_homogeneous(table, epsilon, lambda);
        Self {
            epsilon,
            lambda,
            names: HOMOGENEOUS_RESIDUAL_NAMES.iter().map(|s| s.to_string()).collect(),
            values: values.to_vec(),
            max_abs: values.iter().fold(0.0_f64, |a, x| a.max(x.abs())),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyMatch {
    pub spec: FamilySpec,
    pub discrepancy: f64,
}

/// Everything the pipeline derives from one input.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool_version: String,
    pub input: InputDocument,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationReport>,
    pub curvature: CurvatureSummary,
    pub cvc: Vec<CvcVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub milnor: Option<MilnorForm>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family_match: Option<FamilyMatch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homogeneous_residuals: Option<ResidualTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub no_finite_volume_quotient: Option<bool>,
    pub tol: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Full pipeline: validate, orthonormalize, connect, curve, decide cvc,
/// classify, and match against the built-in families.
pub fn analyze(doc: &InputDocument, opts: &AnalysisOptions) -> Result<ReportDocument> {
    let mut validation = None;
    let mut table = None;
    let mut model: Option<FamilyModel> = None;

    let (algebra, curvature) = match &doc.payload {
        InputPayload::MetricLieAlgebra { structure_constants, gram } => {
            let raw = algebra_from_parts(structure_constants, gram)?;
            let report = validate(&raw);
            if let Some(name) = report.failing_invariant(opts.tol.max(crate::DEFAULT_TOL)) {
                return Err(CvcError::MalformedInput(format!(
                    "validation failed on invariant `{name}`"
                )));
            }
            validation = Some(report);
            let ortho = orthonormalize(&raw)?;
            let cd = riemann_tensor(&levi_civita(&ortho)?, &ortho);
            (Some(ortho), cd)
        }
        InputPayload::ChristoffelTable { a11, a12, a21, a22, f, g, c } => {
            let t = ChristoffelTable::new(*a11, *a12, *a21, *a22, *f, *g, *c);
            let mla = christoffel_to_brackets(&t)?;
            validation = Some(validate(&mla));
            table = Some(t);
            let cd = riemann_tensor(&levi_civita(&mla)?, &mla);
            (Some(mla), cd)
        }
        InputPayload::Family(spec) => {
            let m = build(*spec)?;
            table = m.table;
            let algebra = m.algebra.clone();
            if let Some(a) = &algebra {
                validation = Some(validate(a));
            }
            let cd = m.curvature.clone();
            model = Some(m);
            (algebra, cd)
        }
    };

    let milnor = match &algebra {
        Some(a) => Some(milnor_map(a, opts.tol.max(crate::DEFAULT_TOL))?),
        None => None,
    };

    let mut cvc = Vec::new();
    for &eps in &opts.epsilons {
        let report = cvc_status(&curvature, eps, opts.tol);
        let oracle = cvc_bruteforce(
            &curvature,
            eps,
            opts.samples,
            256,
            crate::SAMPLED_TOL,
            opts.seed,
        );
        cvc.push(CvcVerdict { bruteforce_agrees: oracle == report.is_cvc, report });
    }

    // Residuals of the nine homogeneous equations at the detected (eps,
    // lambda), when the input carries a table and some cvc level holds.
    let homogeneous_residuals = table.and_then(|t| {
        cvc.iter()
            .find(|v| v.report.is_cvc && v.report.extremality != Extremality::Neither)
            .map(|v| {
                let lambda = v.report.lambda.unwrap_or(v.report.epsilon);
                ResidualTable::new(&t, v.report.epsilon, lambda)
            })
    });

    let family_match = match_family(&curvature, milnor.as_ref(), opts.tol);

    let no_finite_volume_quotient = match (&model, &milnor) {
        (Some(m), _) => Some(m.no_finite_volume_quotient),
        (None, Some(mf)) => Some(!mf.unimodular),
        _ => None,
    };

    Ok(ReportDocument {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        input: doc.clone(),
        validation,
        curvature: CurvatureSummary::new(&curvature),
        cvc,
        milnor,
        family_match,
        homogeneous_residuals,
        no_finite_volume_quotient,
        tol: opts.tol,
        samples: opts.samples,
        seed: opts.seed,
    })
}

fn sorted3(mut t: [f64; 3]) -> [f64; 3] {
    t.sort_by(f64::total_cmp);
    t
}

fn sorted_eigs(mf: &MilnorForm) -> [f64; 3] {
    let (vals, _) = crate::linalg::sym_eigen_sorted(&mf.l());
    [vals[0], vals[1], vals[2]]
}

/// Tries to recognize the curvature data as one of the built-in families.
///
/// Parameters are recovered from isometry invariants (plane curvature,
/// Milnor eigenvalues); the candidate is rebuilt and compared. Families with
/// a rotational gauge freedom in `(f, g)` are reported by the canonical
/// representative `(sqrt(f^2 + g^2), 0)` of their isometry class.
pub fn match_family(
    cd: &CurvatureData,
    milnor: Option<&MilnorForm>,
    tol: f64,
) -> Option<FamilyMatch> {
    let triple = sorted3(cd.plane_curvatures());
    let spread = triple[2] - triple[0];
    if spread <= tol.max(1e-9) {
        let epsilon = (triple[0] + triple[1] + triple[2]) / 3.0;
        return Some(FamilyMatch { spec: FamilySpec::SpaceForm { epsilon }, discrepancy: spread });
    }

    let mut candidates: Vec<FamilySpec> = Vec::new();
    for eps in [-1.0_f64, 0.0, 1.0] {
        let r = cvc_status(cd, eps, tol.max(1e-9));
        if !(r.is_cvc && r.extremality != Extremality::Neither) {
            continue;
        }
        let Some(lambda) = r.lambda else { continue };
        match eps as i32 {
            -1 => {
                if let Some(mf) = milnor {
                    if mf.unimodular {
                        let mu = -sorted_eigs(mf)[0];
                        if mu >= 1.0 - 1e-9 {
                            candidates.push(FamilySpec::CvcMinus1 { mu: mu.max(1.0) });
                        }
                    }
                }
            }
            0 => {
                match milnor {
                    Some(mf)
                        if mf.group_label == GroupLabel::NonunimodularSolvable
                            && lambda < 0.0 =>
                    {
                        candidates.push(FamilySpec::Cvc0Solvable {
                            f: (-lambda).sqrt(),
                            g: 0.0,
                        });
                    }
                    None => candidates.push(FamilySpec::Cvc0Product { kappa: lambda.signum() }),
                    _ => {}
                }
            }
            _ => {
                candidates.push(FamilySpec::Cvc1TypeII { c: -(lambda + 1.0) / 2.0 });
                if let Some(mf) = milnor {
                    if mf.group_label == GroupLabel::Su2 && (lambda + 1.0).abs() <= 1e-6 {
                        let mu = -sorted_eigs(mf)[2];
                        if mu > 0.0 && mu < 1.0 {
                            candidates.push(FamilySpec::Cvc1TypeI { mu });
                        }
                    }
                    if mf.group_label == GroupLabel::NonunimodularSolvable && lambda <= -3.0 {
                        candidates.push(FamilySpec::Cvc1Nonunimodular {
                            f: (-lambda - 3.0).sqrt(),
                            g: 0.0,
                        });
                    }
                }
            }
        }
    }

    let mut best: Option<FamilyMatch> = None;
    for spec in candidates {
        let Ok(m) = build(spec) else { continue };
        let mut disc = 0.0_f64;
        let got = sorted3(m.curvature.plane_curvatures());
        for (a, b) in got.iter().zip(triple.iter()) {
            disc = disc.max((a - b).abs());
        }
        match (milnor, m.algebra.as_ref()) {
            (Some(mf), Some(alg)) => {
                let Ok(mf_model) = milnor_map(alg, 1e-9) else { continue };
                if mf.group_label != mf_model.group_label {
                    continue;
                }
                if mf.unimodular && mf_model.unimodular {
                    for (a, b) in sorted_eigs(mf).iter().zip(sorted_eigs(&mf_model).iter()) {
                        disc = disc.max((a - b).abs());
                    }
                }
            }
            (None, None) => {}
            _ => continue,
        }
        if disc < 1e-6 && best.as_ref().is_none_or(|b| disc < b.discrepancy) {
            best = Some(FamilyMatch { spec, discrepancy: disc });
        }
    }
    best
}

/// Human-readable rendering; the JSON report is the source of truth.
pub fn render_text(report: &ReportDocument) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(out, "cvc3 report (v{})", report.tool_version);
    if let Some(meta) = &report.input.metadata {
        if let Some(name) = &meta.name {
            let _ = writeln!(out, "input: {name}");
        }
    }
    if let Some(v) = &report.validation {
        let _ = writeln!(
            out,
            "validation: antisymmetry {:.3e}, jacobi {:.3e}, gram asym {:.3e}, gram min eig {}",
            v.antisymmetry, v.jacobi, v.gram_asymmetry, v.gram_min_eigenvalue
        );
    }
    let c = &report.curvature;
    let _ = writeln!(
        out,
        "plane curvatures (eigenframe): [{}, {}, {}]",
        c.plane_curvatures[0], c.plane_curvatures[1], c.plane_curvatures[2]
    );
    let _ = writeln!(
        out,
        "ricci eigenvalues: [{}, {}, {}]   scalar: {}",
        c.ricci_eigenvalues[0], c.ricci_eigenvalues[1], c.ricci_eigenvalues[2], c.scalar
    );
    let _ = writeln!(out, "sectional range: [{}, {}]", c.sec_range[0], c.sec_range[1]);
    for v in &report.cvc {
        let r = &v.report;
        let _ = write!(
            out,
            "cvc({}): {}  [{}]",
            r.epsilon,
            if r.is_cvc { "yes" } else { "no" },
            r.extremality
        );
        if let Some(lambda) = r.lambda {
            let _ = write!(out, "  lambda = {lambda}");
        }
        if r.isotropic {
            let _ = write!(out, "  (isotropic)");
        }
        let _ = writeln!(
            out,
            "  oracle {}",
            if v.bruteforce_agrees { "agrees" } else { "DISAGREES" }
        );
    }
    if let Some(mf) = &report.milnor {
        let _ = writeln!(
            out,
            "group: {}  (unimodular: {})",
            mf.group_label, mf.unimodular
        );
        if let Some(signs) = mf.eigen_signs {
            let _ = writeln!(out, "L eigenvalue signs: {:?}", signs);
        }
    }
    if let Some(fm) = &report.family_match {
        let _ = writeln!(
            out,
            "family match: {:?} (discrepancy {:.3e})",
            fm.spec, fm.discrepancy
        );
    }
    if let Some(res) = &report.homogeneous_residuals {
        let _ = writeln!(
            out,
            "homogeneous residuals at (eps, lambda) = ({}, {}): max |r| = {:.3e}",
            res.epsilon, res.lambda, res.max_abs
        );
        for (name, value) in res.names.iter().zip(res.values.iter()) {
            let _ = writeln!(out, "  {name}: {value:.3e}");
        }
    }
    if let Some(nfvq) = report.no_finite_volume_quotient {
        let _ = writeln!(
            out,
            "finite-volume quotients: {}",
            if nfvq { "none exist" } else { "exist" }
        );
    }
    out
}

/// CSV rendering of a trajectory: comma separated, header row, LF endings.
pub fn trajectory_csv(tr: &OdeTrajectory) -> String {
    let mut out = String::from("t,ell,trA,detA,lambda,b,sigma,tau,f,g,theta\n");
    for i in 0..tr.len() {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            tr.times[i],
            tr.ell[i],
            tr.tr_a[i],
            tr.det_a[i],
            tr.lambda[i],
            tr.b[i],
            tr.sigma[i],
            tr.tau[i],
            tr.f[i],
            tr.g[i],
            tr.theta[i]
        ));
    }
    out
}
