//! The classified homogeneous cvc(eps) families with extremal curvature.
//!
//! Each variant builds the defining adapted-frame table (or, for products of
//! space forms, the curvature tensor directly), derives the full curvature
//! pipeline from it, and records what the classification asserts: the plane
//! curvature `lambda`, the cvc level `eps`, the simply-connected group, the
//! sectional range, and whether the model covers finite-volume manifolds.

use serde::{Deserialize, Serialize};

use crate::adapted_frame::ChristoffelTable;
use crate::connection_curvature::{levi_civita, riemann_tensor, CurvatureData};
use crate::cvc_analysis::{cvc_status, CvcReport};
use crate::error::{CvcError, Result};
use crate::lie_metric::{christoffel_to_brackets, GroupLabel, MetricLieAlgebra};
use crate::DEFAULT_TOL;

/// Parameter record selecting one homogeneous model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum FamilySpec {
    /// cvc(1), sectional range [-1, 1], on SU(2); `mu` in (0, 1).
    #[serde(rename = "cvc1_type_i")]
    Cvc1TypeI { mu: f64 },
    /// cvc(1) with plane curvature -(2c + 1); SU(2) for c < 1, Heisenberg at
    /// c = 1, the universal cover of SL(2,R) for c > 1.
    #[serde(rename = "cvc1_type_ii")]
    Cvc1TypeII { c: f64 },
    /// cvc(1) with plane curvature -(3 + f^2 + g^2) on a non-unimodular
    /// solvable group (Heisenberg when f = g = 0).
    #[serde(rename = "cvc1_nonunimodular")]
    Cvc1Nonunimodular { f: f64, g: f64 },
    /// cvc(-1), sectional range [-1, 1]; E(1,1) at mu = 1, the universal
    /// cover of SL(2,R) for mu > 1.
    #[serde(rename = "cvc_minus1")]
    CvcMinus1 { mu: f64 },
    /// Product of a curvature-kappa surface with a line; kappa is +1 or -1.
    #[serde(rename = "cvc0_product")]
    Cvc0Product { kappa: f64 },
    /// cvc(0) with plane curvature -(f^2 + g^2) on a non-unimodular solvable
    /// group; (f, g) != (0, 0).
    #[serde(rename = "cvc0_solvable")]
    Cvc0Solvable { f: f64, g: f64 },
    /// Constant curvature epsilon.
    #[serde(rename = "space_form")]
    SpaceForm { epsilon: f64 },
}

impl FamilySpec {
    pub fn variant_name(&self) -> &'static str {
        match self {
            FamilySpec::Cvc1TypeI { .. } => "cvc1_type_i",
            FamilySpec::Cvc1TypeII { .. } => "cvc1_type_ii",
            FamilySpec::Cvc1Nonunimodular { .. } => "cvc1_nonunimodular",
            FamilySpec::CvcMinus1 { .. } => "cvc_minus1",
            FamilySpec::Cvc0Product { .. } => "cvc0_product",
            FamilySpec::Cvc0Solvable { .. } => "cvc0_solvable",
            FamilySpec::SpaceForm { .. } => "space_form",
        }
    }
}

/// A fully built homogeneous model.
#[derive(Debug, Clone)]
pub struct FamilyModel {
    pub spec: FamilySpec,
    /// Defining adapted-frame table, when the model is left-invariant.
    pub table: Option<ChristoffelTable>,
    /// Left-invariant metric Lie algebra, when one exists.
    pub algebra: Option<MetricLieAlgebra>,
    pub curvature: CurvatureData,
    pub expected_lambda: f64,
    pub expected_epsilon: f64,
    pub expected_group: Option<GroupLabel>,
    pub expected_sec_range: (f64, f64),
    /// Set on the non-unimodular variants, which admit no finite-volume
    /// quotients.
    pub no_finite_volume_quotient: bool,
}

impl FamilyModel {
    /// Verdict of the cvc analysis at the model's own epsilon.
    pub fn cvc_report(&self, tol: f64) -> CvcReport {
        cvc_status(&self.curvature, self.expected_epsilon, tol)
    }
}

fn range_out(msg: String) -> CvcError {
    CvcError::ParameterOutOfRange(msg)
}

fn model_from_table(
    spec: FamilySpec,
    table: ChristoffelTable,
    expected_lambda: f64,
    expected_epsilon: f64,
    expected_group: Option<GroupLabel>,
    no_finite_volume_quotient: bool,
) -> Result<FamilyModel> {
    let algebra = christoffel_to_brackets(&table)?;
    let conn = levi_civita(&algebra)?;
    let curvature = riemann_tensor(&conn, &algebra);
    let lo = expected_lambda.min(expected_epsilon);
    let hi = expected_lambda.max(expected_epsilon);
    Ok(FamilyModel {
        spec,
        table: Some(table),
        algebra: Some(algebra),
        curvature,
        expected_lambda,
        expected_epsilon,
        expected_group,
        expected_sec_range: (lo, hi),
        no_finite_volume_quotient,
    })
}

/// Builds the model selected by `spec`, checking parameter ranges.
pub fn build(spec: FamilySpec) -> Result<FamilyModel> {
    match spec {
        FamilySpec::Cvc1TypeI { mu } => {
            if !(mu > 0.0 && mu < 1.0) {
                return Err(range_out(format!("type I requires mu in (0, 1), got {mu}")));
            }
            let table = ChristoffelTable::new(0.0, mu, -1.0 / mu, 0.0, 0.0, 0.0, 0.0);
            model_from_table(spec, table, -1.0, 1.0, Some(GroupLabel::Su2), false)
        }
        FamilySpec::Cvc1TypeII { c } => {
            let table = ChristoffelTable::new(0.0, 1.0, -1.0, 0.0, 0.0, 0.0, c);
            let group = if c > 1.0 + DEFAULT_TOL {
                GroupLabel::Sl2rUniversalCover
            } else if c < 1.0 - DEFAULT_TOL {
                GroupLabel::Su2
            } else {
                GroupLabel::Heisenberg
            };
            model_from_table(spec, table, -(2.0 * c + 1.0), 1.0, Some(group), false)
        }
        FamilySpec::Cvc1Nonunimodular { f, g } => {
            let table = ChristoffelTable::new(0.0, 1.0, -1.0, 0.0, f, g, 1.0);
            let unimodular = f == 0.0 && g == 0.0;
            let group = if unimodular {
                GroupLabel::Heisenberg
            } else {
                GroupLabel::NonunimodularSolvable
            };
            model_from_table(
                spec,
                table,
                -(3.0 + f * f + g * g),
                1.0,
                Some(group),
                !unimodular,
            )
        }
        FamilySpec::CvcMinus1 { mu } => {
            if mu.is_nan() || mu < 1.0 {
                return Err(range_out(format!("cvc(-1) family requires mu >= 1, got {mu}")));
            }
            let table = ChristoffelTable::new(0.0, mu, 1.0 / mu, 0.0, 0.0, 0.0, 0.0);
            let group = if (mu - 1.0).abs() <= DEFAULT_TOL {
                GroupLabel::E11
            } else {
                GroupLabel::Sl2rUniversalCover
            };
            model_from_table(spec, table, 1.0, -1.0, Some(group), false)
        }
        FamilySpec::Cvc0Product { kappa } => {
            if (kappa - 1.0).abs() > DEFAULT_TOL && (kappa + 1.0).abs() > DEFAULT_TOL {
                return Err(range_out(format!("product factor curvature must be +1 or -1, got {kappa}")));
            }
            let kappa = kappa.signum();
            let curvature = CurvatureData::from_plane_curvatures([kappa, 0.0, 0.0]);
            Ok(FamilyModel {
                spec,
                table: None,
                algebra: None,
                curvature,
                expected_lambda: kappa,
                expected_epsilon: 0.0,
                expected_group: None,
                expected_sec_range: (kappa.min(0.0), kappa.max(0.0)),
                no_finite_volume_quotient: false,
            })
        }
        FamilySpec::Cvc0Solvable { f, g } => {
            if f == 0.0 && g == 0.0 {
                return Err(range_out("cvc(0) solvable requires (f, g) != (0, 0)".into()));
            }
            let table = ChristoffelTable::new(0.0, 0.0, 0.0, 0.0, f, g, 0.0);
            model_from_table(
                spec,
                table,
                -(f * f + g * g),
                0.0,
                Some(GroupLabel::NonunimodularSolvable),
                true,
            )
        }
        FamilySpec::SpaceForm { epsilon } => {
            if epsilon <= 0.0 {
                // Horospherical-type table A = sqrt(-eps) Id; abelian at 0.
                let s = (-epsilon).sqrt();
                let table = ChristoffelTable::new(s, 0.0, 0.0, s, 0.0, 0.0, 0.0);
                model_from_table(spec, table, epsilon, epsilon, None, false)
            } else {
                let curvature =
                    CurvatureData::from_plane_curvatures([epsilon, epsilon, epsilon]);
                Ok(FamilyModel {
                    spec,
                    table: None,
                    algebra: None,
                    curvature,
                    expected_lambda: epsilon,
                    expected_epsilon: epsilon,
                    expected_group: None,
                    expected_sec_range: (epsilon, epsilon),
                    no_finite_volume_quotient: false,
                })
            }
        }
    }
}

/// Reparametrization of the type I family: `mu = sqrt((1 - alpha)/(1 + alpha))`
/// maps `alpha` in (0, 1) onto `mu` in (0, 1).
pub fn type1_mu_from_alpha(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(range_out(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    Ok(((1.0 - alpha) / (1.0 + alpha)).sqrt())
}

/// Isometry-class data of a built model.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct IsometryInvariant {
    /// Curvature of the plane orthogonal to the distinguished direction.
    pub plane_curvature: f64,
    /// `sigma^2 + tau^2` of the defining table: the square of the canonical
    /// frame's sigma, invariant under frame rotation. Present for
    /// left-invariant models; separates the type I and cvc(-1) classes,
    /// where the plane curvature alone is constant.
    pub traceless_norm_sq: Option<f64>,
}

/// Gauge-invariant isometry data; fails on isotropic models, where no plane
/// is distinguished.
pub fn isometry_invariant(model: &FamilyModel) -> Result<IsometryInvariant> {
    let report = model.cvc_report(DEFAULT_TOL);
    if report.isotropic {
        return Err(CvcError::IsotropicModel);
    }
    let plane_curvature = report.lambda.ok_or(CvcError::IsotropicModel)?;
    let traceless_norm_sq = model.table.map(|t| {
        let nf = t.normal_form();
        nf.sigma * nf.sigma + nf.tau * nf.tau
    });
    Ok(IsometryInvariant { plane_curvature, traceless_norm_sq })
}
