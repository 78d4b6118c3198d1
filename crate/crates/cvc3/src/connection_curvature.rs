//! Levi-Civita connection and curvature of a left-invariant metric.
//!
//! Everything is expressed in an orthonormal frame, where the connection is a
//! constant rank-3 array `Gamma[i][j][k]` meaning `nabla_{v_i} v_j = sum_k
//! Gamma[i][j][k] v_k`, and the curvature is the rank-4 array `R[i][j][k][l] =
//! <R(v_i, v_j) v_k, v_l>` with the sign convention
//! `sec(X ^ Y) = <R(X, Y) Y, X>`.

use crate::adapted_frame::ChristoffelTable;
use crate::error::{CvcError, Result};
use crate::lie_metric::MetricLieAlgebra;
use crate::linalg::{sym_eigen_sorted, Mat3, Vec3};

pub type Rank3 = [[[f64; 3]; 3]; 3];
pub type Rank4 = [[[[f64; 3]; 3]; 3]; 3];

/// Connection coefficients of an orthonormal frame.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionCoefficients {
    gamma: Rank3,
}

impl ConnectionCoefficients {
    pub fn new(gamma: Rank3) -> Self {
        Self { gamma }
    }

    pub fn gamma(&self) -> &Rank3 {
        &self.gamma
    }

    /// `nabla_{v_i} v_j` in frame coordinates.
    pub fn nabla(&self, i: usize, j: usize) -> Vec3 {
        Vec3::from_row_slice(&self.gamma[i][j])
    }

    /// Expands an adapted-frame table into the full coefficient array.
    pub fn from_table(t: &ChristoffelTable) -> Self {
        let mut g = [[[0.0; 3]; 3]; 3];
        g[0][2][0] = t.a11;
        g[0][2][1] = t.a12;
        g[1][2][0] = t.a21;
        g[1][2][1] = t.a22;
        g[2][0][1] = t.c;
        g[2][1][0] = -t.c;
        g[1][0][1] = t.f;
        g[1][0][2] = -t.a21;
        g[1][1][0] = -t.f;
        g[1][1][2] = -t.a22;
        g[0][1][0] = t.g;
        g[0][1][2] = -t.a12;
        g[0][0][1] = -t.g;
        g[0][0][2] = -t.a11;
        Self::new(g)
    }

    /// max |Gamma[i][j][k] + Gamma[i][k][j]| (metric compatibility defect).
    pub fn compatibility_residual(&self) -> f64 {
        let mut r = 0.0_f64;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    r = r.max((self.gamma[i][j][k] + self.gamma[i][k][j]).abs());
                }
            }
        }
        r
    }

    /// max |Gamma[i][j][.] - Gamma[j][i][.] - C[i][j][.]| (torsion defect).
    pub fn torsion_residual(&self, mla: &MetricLieAlgebra) -> f64 {
        let mut r = 0.0_f64;
        for i in 0..3 {
            for j in 0..3 {
                let d = self.nabla(i, j) - self.nabla(j, i) - mla.bracket(i, j);
                r = r.max(d.amax());
            }
        }
        r
    }
}

/// Koszul formula for a left-invariant metric in an orthonormal frame:
/// `2 <nabla_X Y, Z> = <[X,Y],Z> - <[Y,Z],X> + <[Z,X],Y>`.
pub fn levi_civita(mla: &MetricLieAlgebra) -> Result<ConnectionCoefficients> {
    let dev = crate::linalg::identity_deviation(mla.gram());
    if dev > crate::DEFAULT_TOL {
        return Err(CvcError::NotOrthonormal { residual: dev });
    }
    let c = mla.structure_constants();
    let mut g = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                g[i][j][k] = 0.5 * (c[i][j][k] - c[j][k][i] + c[k][i][j]);
            }
        }
    }
    Ok(ConnectionCoefficients::new(g))
}

/// Full curvature information at a point, in the frame the inputs came in,
/// together with a Ricci-diagonalizing rotation of that frame.
#[derive(Debug, Clone)]
pub struct CurvatureData {
    riemann: Rank4,
    ricci: Mat3,
    scalar: f64,
    /// Columns are an orthonormal, positively-oriented Ricci eigenbasis.
    diag_frame: Mat3,
    /// Ricci eigenvalues matching the columns of `diag_frame`, ascending.
    ricci_eigenvalues: Vec3,
    /// Sectional curvatures of the coordinate planes of `diag_frame`;
    /// entry `i` is the curvature of the plane orthogonal to column `i`.
    plane_curvatures: [f64; 3],
    /// Smallest gap between Ricci eigenvalues: near zero the eigenframe is
    /// gauge-sensitive.
    eigen_gap: f64,
}

impl CurvatureData {
    /// Derives all curvature data from a curvature tensor.
    pub fn from_riemann(riemann: Rank4) -> Self {
        let mut ricci = Mat3::zeros();
        for j in 0..3 {
            for k in 0..3 {
                ricci[(j, k)] = (0..3).map(|i| riemann[i][j][k][i]).sum();
            }
        }
        let scalar = ricci.trace();
        let (vals, frame) = sym_eigen_sorted(&ricci);
        let plane_curvatures = [
            0.5 * scalar - vals[0],
            0.5 * scalar - vals[1],
            0.5 * scalar - vals[2],
        ];
        let eigen_gap = (vals[1] - vals[0]).min(vals[2] - vals[1]);
        Self {
            riemann,
            ricci,
            scalar,
            diag_frame: frame,
            ricci_eigenvalues: vals,
            plane_curvatures,
            eigen_gap,
        }
    }

    /// A constant tensor whose coordinate planes have the given curvatures
    /// (entry `i` is the plane orthogonal to `v_i`) and whose mixed
    /// components vanish.
    #[allow(clippy::needless_range_loop)]
    pub fn from_plane_curvatures(plane_curvatures: [f64; 3]) -> Self {
        let mut r = [[[[0.0; 3]; 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let missing = 3 - i - j;
                let lam = plane_curvatures[missing];
                r[i][j][j][i] = lam;
                r[i][j][i][j] = -lam;
            }
        }
        Self::from_riemann(r)
    }

    pub fn riemann(&self) -> &Rank4 {
        &self.riemann
    }

    pub fn component(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.riemann[i][j][k][l]
    }

    pub fn ricci(&self) -> &Mat3 {
        &self.ricci
    }

    pub fn scalar(&self) -> f64 {
        self.scalar
    }

    pub fn diag_frame(&self) -> &Mat3 {
        &self.diag_frame
    }

    pub fn ricci_eigenvalues(&self) -> Vec3 {
        self.ricci_eigenvalues
    }

    pub fn plane_curvatures(&self) -> [f64; 3] {
        self.plane_curvatures
    }

    pub fn eigen_gap(&self) -> f64 {
        self.eigen_gap
    }

    /// max |R[i][j][k][l] + R[j][i][k][l]| and the same for the last pair.
    pub fn antisymmetry_residual(&self) -> f64 {
        let mut r = 0.0_f64;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        r = r.max((self.riemann[i][j][k][l] + self.riemann[j][i][k][l]).abs());
                        r = r.max((self.riemann[i][j][k][l] + self.riemann[i][j][l][k]).abs());
                    }
                }
            }
        }
        r
    }

    /// max |R[i][j][k][l] - R[k][l][i][j]|.
    pub fn pair_symmetry_residual(&self) -> f64 {
        let mut r = 0.0_f64;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        r = r.max((self.riemann[i][j][k][l] - self.riemann[k][l][i][j]).abs());
                    }
                }
            }
        }
        r
    }

    /// max over the cyclic sum `R(i,j)k + R(j,k)i + R(k,i)j`.
    pub fn first_bianchi_residual(&self) -> f64 {
        let mut r = 0.0_f64;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let s = self.riemann[i][j][k][l]
                            + self.riemann[j][k][i][l]
                            + self.riemann[k][i][j][l];
                        r = r.max(s.abs());
                    }
                }
            }
        }
        r
    }
}

/// Curvature tensor of a constant-coefficient connection:
/// `R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_{[X,Y]} Z`.
pub fn riemann_tensor(conn: &ConnectionCoefficients, mla: &MetricLieAlgebra) -> CurvatureData {
    let g = conn.gamma();
    let c = mla.structure_constants();
    let mut r = [[[[0.0; 3]; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let mut v = 0.0;
                    for m in 0..3 {
                        v += g[j][k][m] * g[i][m][l]
                            - g[i][k][m] * g[j][m][l]
                            - c[i][j][m] * g[m][k][l];
                    }
                    r[i][j][k][l] = v;
                }
            }
        }
    }
    CurvatureData::from_riemann(r)
}

/// Sectional curvature of the plane spanned by `x` and `y`, computed along
/// two independent routes.
#[derive(Debug, Clone, Copy)]
pub struct SectionalValue {
    /// Direct contraction `<R(x, y) y, x>` on the orthonormalized pair.
    pub direct: f64,
    /// `S/2 - Ric(z, z)` with `z` the unit normal of the plane.
    pub via_ricci: f64,
}

impl SectionalValue {
    pub fn value(&self) -> f64 {
        self.direct
    }

    pub fn discrepancy(&self) -> f64 {
        (self.direct - self.via_ricci).abs()
    }
}

/// Sectional curvature of `span(x, y)`; the input pair need not be exactly
/// orthonormal, only non-degenerate.
pub fn sectional(cd: &CurvatureData, x: &Vec3, y: &Vec3, tol: f64) -> Result<SectionalValue> {
    let gram_det = x.norm_squared() * y.norm_squared() - x.dot(y).powi(2);
    if gram_det <= tol * tol {
        return Err(CvcError::DegeneratePlane);
    }
    let xh = x.normalize();
    let mut yh = y - xh * y.dot(&xh);
    let n = yh.norm();
    if n <= tol {
        return Err(CvcError::DegeneratePlane);
    }
    yh /= n;

    let r = cd.riemann();
    let mut direct = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    direct += r[i][j][k][l] * xh[i] * yh[j] * yh[k] * xh[l];
                }
            }
        }
    }
    let z = xh.cross(&yh);
    let via_ricci = 0.5 * cd.scalar() - (z.transpose() * cd.ricci() * z)[(0, 0)];
    Ok(SectionalValue { direct, via_ricci })
}

/// Sectional curvature of the plane orthogonal to the unit vector `z`, given
/// in coordinates of the Ricci eigenframe: the quadratic form
/// `c1^2 k_1 + c2^2 k_2 + c3^2 k_3` on the plane curvatures.
pub fn sec_quadratic(plane_curvatures: [f64; 3], z: &Vec3, tol: f64) -> Result<f64> {
    let n = z.norm();
    if (n - 1.0).abs() > tol {
        return Err(CvcError::NotUnit { norm: n });
    }
    Ok(z[0] * z[0] * plane_curvatures[0]
        + z[1] * z[1] * plane_curvatures[1]
        + z[2] * z[2] * plane_curvatures[2])
}
