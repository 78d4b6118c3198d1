//! Three-dimensional metric Lie algebras and the Milnor classification.
//!
//! A [`MetricLieAlgebra`] is a bracket on a fixed basis `{v1, v2, v3}` given
//! by structure constants `C[i][j][k]` (meaning `[v_i, v_j] = sum_k C[i][j][k]
//! v_k`) together with a gram matrix of inner products. The basis is declared
//! positively oriented by convention.

use serde::{Deserialize, Serialize};

use crate::adapted_frame::ChristoffelTable;
use crate::error::{CvcError, Result};
use crate::linalg::{identity_deviation, max_abs, sym_eigen_sorted, Mat3, Vec3};
use crate::rng::SplitMix64;
use crate::DEFAULT_TOL;

/// Simply-connected three-dimensional Lie groups, keyed by the sign pattern
/// of the eigenvalues of the (self-adjoint) Milnor map, plus the solvable
/// catch-all for the non-unimodular case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupLabel {
    #[serde(rename = "SU2")]
    Su2,
    #[serde(rename = "SL2R_UNIVERSAL_COVER")]
    Sl2rUniversalCover,
    #[serde(rename = "E11")]
    E11,
    #[serde(rename = "HEISENBERG")]
    Heisenberg,
    #[serde(rename = "E2_UNIVERSAL_COVER")]
    E2UniversalCover,
    #[serde(rename = "ABELIAN_R3")]
    AbelianR3,
    #[serde(rename = "NONUNIMODULAR_SOLVABLE")]
    NonunimodularSolvable,
}

impl std::fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            GroupLabel::Su2 => "SU(2)",
            GroupLabel::Sl2rUniversalCover => "universal cover of SL(2,R)",
            GroupLabel::E11 => "E(1,1)",
            GroupLabel::Heisenberg => "Heisenberg group",
            GroupLabel::E2UniversalCover => "universal cover of E(2)",
            GroupLabel::AbelianR3 => "abelian R^3",
            GroupLabel::NonunimodularSolvable => "non-unimodular solvable group",
        };
        f.write_str(s)
    }
}

/// A 3-dimensional Lie algebra with an inner product on the basis.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricLieAlgebra {
    structure_constants: [[[f64; 3]; 3]; 3],
    gram: Mat3,
}

impl MetricLieAlgebra {
    pub fn new(structure_constants: [[[f64; 3]; 3]; 3], gram: Mat3) -> Self {
        Self { structure_constants, gram }
    }

    /// Builds the constants from the three independent brackets
    /// `[v2,v3]`, `[v3,v1]`, `[v1,v2]`, enforcing antisymmetry.
    pub fn from_brackets(b23: Vec3, b31: Vec3, b12: Vec3, gram: Mat3) -> Self {
        let mut c = [[[0.0; 3]; 3]; 3];
        // Adding 0.0 keeps negated zero entries from serializing as -0.0.
        for k in 0..3 {
            c[1][2][k] = b23[k] + 0.0;
            c[2][1][k] = -b23[k] + 0.0;
            c[2][0][k] = b31[k] + 0.0;
            c[0][2][k] = -b31[k] + 0.0;
            c[0][1][k] = b12[k] + 0.0;
            c[1][0][k] = -b12[k] + 0.0;
        }
        Self::new(c, gram)
    }

    pub fn abelian() -> Self {
        Self::from_brackets(Vec3::zeros(), Vec3::zeros(), Vec3::zeros(), Mat3::identity())
    }

    /// The round unit 3-sphere model: `[v_i, v_j] = 2 v_k` cyclically, with
    /// the bi-invariant inner product.
    pub fn su2_round() -> Self {
        Self::from_brackets(
            Vec3::new(2.0, 0.0, 0.0),
            Vec3::new(0.0, 2.0, 0.0),
            Vec3::new(0.0, 0.0, 2.0),
            Mat3::identity(),
        )
    }

    pub fn structure_constants(&self) -> &[[[f64; 3]; 3]; 3] {
        &self.structure_constants
    }

    pub fn gram(&self) -> &Mat3 {
        &self.gram
    }

    /// The bracket `[v_i, v_j]` in basis coordinates.
    pub fn bracket(&self, i: usize, j: usize) -> Vec3 {
        Vec3::from_row_slice(&self.structure_constants[i][j])
    }

    /// Bilinear extension of the bracket to arbitrary coordinate vectors.
    pub fn bracket_vectors(&self, x: &Vec3, y: &Vec3) -> Vec3 {
        let mut out = Vec3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                out += self.bracket(i, j) * (x[i] * y[j]);
            }
        }
        out
    }

    pub fn is_orthonormal(&self, tol: f64) -> bool {
        identity_deviation(&self.gram) <= tol
    }

    /// Rewrites the algebra in the basis `w_i = sum_k basis[(i, k)] v_k`.
    pub fn change_basis(&self, basis: &Mat3) -> Result<Self> {
        let inv = basis
            .try_inverse()
            .ok_or_else(|| CvcError::MalformedInput("singular basis change".into()))?;
        let mut c = [[[0.0; 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                // [w_i, w_j] in the old basis, then re-expressed in the new one.
                let mut old = Vec3::zeros();
                for k in 0..3 {
                    for l in 0..3 {
                        old += self.bracket(k, l) * (basis[(i, k)] * basis[(j, l)]);
                    }
                }
                for n in 0..3 {
                    c[i][j][n] = (0..3).map(|m| old[m] * inv[(m, n)]).sum();
                }
            }
        }
        let gram = basis * self.gram * basis.transpose();
        Ok(Self::new(c, gram))
    }

    /// Conjugates an orthonormal algebra by a rotation (columns of `q` are
    /// the new basis vectors in the old coordinates).
    pub fn rotated(&self, q: &Mat3) -> Result<Self> {
        self.change_basis(&q.transpose())
    }
}

/// Residuals of the three structural invariants.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ValidationReport {
    /// max |C[i][j][k] + C[j][i][k]|
    pub antisymmetry: f64,
    /// max over basis triples of the Jacobi identity defect
    pub jacobi: f64,
    /// max |gram - gram^T|
    pub gram_asymmetry: f64,
    /// smallest eigenvalue of the symmetrized gram
    pub gram_min_eigenvalue: f64,
}

impl ValidationReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.failing_invariant(tol).is_none()
    }

    /// Name of the first violated invariant, if any.
    pub fn failing_invariant(&self, tol: f64) -> Option<&'static str> {
        if self.antisymmetry > tol {
            Some("antisymmetry")
        } else if self.jacobi > tol {
            Some("jacobi_identity")
        } else if self.gram_asymmetry > tol {
            Some("gram_symmetry")
        } else if self.gram_min_eigenvalue <= tol {
            Some("gram_positive_definite")
        } else {
            None
        }
    }
}

/// Checks antisymmetry, the Jacobi identity and positivity of the gram.
#[allow(clippy::needless_range_loop)]
pub fn validate(mla: &MetricLieAlgebra) -> ValidationReport {
    let c = mla.structure_constants();
    let mut antisymmetry = 0.0_f64;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                antisymmetry = antisymmetry.max((c[i][j][k] + c[j][i][k]).abs());
            }
        }
    }

    let mut jacobi = 0.0_f64;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let cycle = mla.bracket_vectors(&mla.bracket(i, j), &basis_vec(k))
                    + mla.bracket_vectors(&mla.bracket(j, k), &basis_vec(i))
                    + mla.bracket_vectors(&mla.bracket(k, i), &basis_vec(j));
                jacobi = jacobi.max(cycle.amax());
            }
        }
    }

    let gram_asymmetry = max_abs(&(mla.gram() - mla.gram().transpose()));
    let (eigs, _) = sym_eigen_sorted(mla.gram());
    ValidationReport {
        antisymmetry,
        jacobi,
        gram_asymmetry,
        gram_min_eigenvalue: eigs[0],
    }
}

fn basis_vec(k: usize) -> Vec3 {
    let mut v = Vec3::zeros();
    v[k] = 1.0;
    v
}

/// Change of basis making the gram the identity, by Cholesky factorization
/// (lower-triangular Gram-Schmidt, so the orientation is preserved).
pub fn orthonormalize(mla: &MetricLieAlgebra) -> Result<MetricLieAlgebra> {
    let sym = (mla.gram() + mla.gram().transpose()) * 0.5;
    let chol = sym.cholesky().ok_or(CvcError::NotPositiveDefinite)?;
    let lower: Mat3 = chol.l();
    let basis = lower
        .solve_lower_triangular(&Mat3::identity())
        .ok_or(CvcError::NotPositiveDefinite)?;
    let mut out = mla.change_basis(&basis)?;
    // The gram is the identity by construction; store it exactly.
    out.gram = Mat3::identity();
    Ok(out)
}

/// The Milnor map of an orthonormal positively-oriented basis and the data
/// derived from it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MilnorForm {
    /// Columns are `[v2,v3]`, `[v3,v1]`, `[v1,v2]` in basis coordinates.
    pub l_matrix: [[f64; 3]; 3],
    pub unimodular: bool,
    /// max |L - L^T|
    pub asymmetry: f64,
    /// Signs of the eigenvalues of `L` (ascending), present when unimodular.
    pub eigen_signs: Option<[i8; 3]>,
    pub group_label: GroupLabel,
}

impl MilnorForm {
    pub fn l(&self) -> Mat3 {
        Mat3::from_fn(|i, j| self.l_matrix[i][j])
    }
}

/// Computes the Milnor map `L(v1) = [v2,v3]`, `L(v2) = [v3,v1]`,
/// `L(v3) = [v1,v2]` of an orthonormal algebra and classifies the group.
pub fn milnor_map(mla: &MetricLieAlgebra, tol: f64) -> Result<MilnorForm> {
    let dev = identity_deviation(mla.gram());
    if dev > tol {
        return Err(CvcError::NotOrthonormal { residual: dev });
    }
    let l = Mat3::from_columns(&[mla.bracket(1, 2), mla.bracket(2, 0), mla.bracket(0, 1)]);
    let asymmetry = max_abs(&(l - l.transpose()));
    let unimodular = asymmetry <= tol;
    let (eigen_signs, group_label) = if unimodular {
        let signs = eigen_sign_pattern(&l, tol);
        (Some(signs), label_from_signs(signs))
    } else {
        (None, GroupLabel::NonunimodularSolvable)
    };
    Ok(MilnorForm {
        l_matrix: [
            [l[(0, 0)], l[(0, 1)], l[(0, 2)]],
            [l[(1, 0)], l[(1, 1)], l[(1, 2)]],
            [l[(2, 0)], l[(2, 1)], l[(2, 2)]],
        ],
        unimodular,
        asymmetry,
        eigen_signs,
        group_label,
    })
}

fn eigen_sign_pattern(l: &Mat3, tol: f64) -> [i8; 3] {
    let (vals, _) = sym_eigen_sorted(l);
    let sign = |x: f64| {
        if x.abs() < tol {
            0i8
        } else if x > 0.0 {
            1
        } else {
            -1
        }
    };
    [sign(vals[0]), sign(vals[1]), sign(vals[2])]
}

fn label_from_signs(signs: [i8; 3]) -> GroupLabel {
    let pos = signs.iter().filter(|&&s| s > 0).count();
    let neg = signs.iter().filter(|&&s| s < 0).count();
    let zero = 3 - pos - neg;
    match (zero, pos, neg) {
        (0, 3, 0) | (0, 0, 3) => GroupLabel::Su2,
        (0, _, _) => GroupLabel::Sl2rUniversalCover,
        (1, 1, 1) => GroupLabel::E11,
        (1, _, _) => GroupLabel::E2UniversalCover,
        (2, _, _) => GroupLabel::Heisenberg,
        _ => GroupLabel::AbelianR3,
    }
}

/// Classification of a unimodular Milnor form by the eigenvalue sign pattern.
///
/// Fails with `NotUnimodular` when `L` is asymmetric beyond `tol`. Eigenvalues
/// inside the dead zone `|value| < tol` count as zero, since the sign table
/// branches on exact zeros.
pub fn classify_unimodular(mf: &MilnorForm, tol: f64) -> Result<GroupLabel> {
    if mf.asymmetry > tol {
        return Err(CvcError::NotUnimodular { residual: mf.asymmetry });
    }
    Ok(label_from_signs(eigen_sign_pattern(&mf.l(), tol)))
}

/// Recovers the left-invariant Lie algebra of a constant adapted-frame table
/// via the torsion-free identity `[X, Y] = nabla_X Y - nabla_Y X`.
///
/// Fails with `JacobiViolation` when the resulting constants do not close
/// into a Lie algebra: such a table is internally inconsistent.
pub fn christoffel_to_brackets(table: &ChristoffelTable) -> Result<MetricLieAlgebra> {
    let b13 = Vec3::new(table.a11, table.a12 - table.c, 0.0);
    let b23 = Vec3::new(table.a21 + table.c, table.a22, 0.0);
    let b12 = Vec3::new(table.g, -table.f, table.a21 - table.a12);
    let mla = MetricLieAlgebra::from_brackets(b23, -b13, b12, Mat3::identity());
    let report = validate(&mla);
    if report.jacobi > DEFAULT_TOL {
        return Err(CvcError::JacobiViolation { residual: report.jacobi });
    }
    Ok(mla)
}

/// Samples a random valid metric Lie algebra.
///
/// Brackets are generated through the cross-product correspondence
/// `[u, v] = L(u x v)` with `L = S + (a x .)` and `S a = 0`, which closes the
/// Jacobi identity by construction; roughly half the samples are unimodular.
pub fn random_metric_lie_algebra(rng: &mut SplitMix64) -> MetricLieAlgebra {
    let q = rng.rotation();
    let mut d = Vec3::new(rng.range(-2.0, 2.0), rng.range(-2.0, 2.0), rng.range(-2.0, 2.0));
    let mut a = Vec3::zeros();
    if rng.next_f64() < 0.5 {
        // Non-unimodular: put the skew vector in the kernel of S.
        d[0] = 0.0;
        a = q.column(0) * rng.range(-2.0, 2.0);
    }
    let s = q * Mat3::from_diagonal(&d) * q.transpose();
    let cross = Mat3::new(0.0, -a[2], a[1], a[2], 0.0, -a[0], -a[1], a[0], 0.0);
    let l = s + cross;
    let gram = if rng.next_f64() < 0.5 { Mat3::identity() } else { rng.spd_matrix() };
    MetricLieAlgebra::from_brackets(
        l.column(0).into_owned(),
        l.column(1).into_owned(),
        l.column(2).into_owned(),
        gram,
    )
}
