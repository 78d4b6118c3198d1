//! Small dense linear algebra helpers on top of nalgebra.

use nalgebra::{Matrix3, Vector3};

pub type Mat3 = Matrix3<f64>;
pub type Vec3 = Vector3<f64>;

/// Eigendecomposition of a symmetric 3x3 matrix.
///
/// Returns eigenvalues sorted ascending and the matrix of matching unit
/// eigenvectors as columns, adjusted to determinant +1 so the eigenframe is a
/// rotation of the input frame.
pub fn sym_eigen_sorted(m: &Mat3) -> (Vec3, Mat3) {
    let sym = (m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = Vec3::new(
        eig.eigenvalues[order[0]],
        eig.eigenvalues[order[1]],
        eig.eigenvalues[order[2]],
    );
    let mut vectors = Mat3::from_columns(&[
        eig.eigenvectors.column(order[0]).into_owned(),
        eig.eigenvectors.column(order[1]).into_owned(),
        eig.eigenvectors.column(order[2]).into_owned(),
    ]);
    if vectors.determinant() < 0.0 {
        let flipped = -vectors.column(2).into_owned();
        vectors.set_column(2, &flipped);
    }
    (values, vectors)
}

/// Maximum absolute entry of a 3x3 matrix.
pub fn max_abs(m: &Mat3) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// Deviation of `m` from the identity in the max norm.
pub fn identity_deviation(m: &Mat3) -> f64 {
    max_abs(&(m - Mat3::identity()))
}

/// Completes a unit vector to an orthonormal pair spanning its orthogonal
/// complement, oriented so that `v x u1 = u2`.
pub fn orthonormal_complement(v: &Vec3) -> (Vec3, Vec3) {
    let pick = if v.x.abs() < 0.9 {
        Vec3::new(1.0, 0.0, 0.0)
    } else {
        Vec3::new(0.0, 1.0, 0.0)
    };
    let u1 = (pick - v * pick.dot(v)).normalize();
    let u2 = v.cross(&u1);
    (u1, u2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_sorted_recovers_diagonal() {
        let m = Mat3::from_diagonal(&Vec3::new(3.0, -1.0, 2.0));
        let (vals, vecs) = sym_eigen_sorted(&m);
        assert!((vals[0] + 1.0).abs() < 1e-14);
        assert!((vals[1] - 2.0).abs() < 1e-14);
        assert!((vals[2] - 3.0).abs() < 1e-14);
        assert!((vecs.determinant() - 1.0).abs() < 1e-12);
        let recon = vecs * Mat3::from_diagonal(&vals) * vecs.transpose();
        assert!(max_abs(&(recon - m)) < 1e-12);
    }

    #[test]
    fn complement_is_orthonormal() {
        let v = Vec3::new(0.6, -0.48, 0.64).normalize();
        let (u1, u2) = orthonormal_complement(&v);
        assert!(u1.dot(&v).abs() < 1e-14);
        assert!(u2.dot(&v).abs() < 1e-14);
        assert!(u1.dot(&u2).abs() < 1e-14);
        assert!((u1.norm() - 1.0).abs() < 1e-14);
        assert!((v.cross(&u1) - u2).norm() < 1e-14);
    }
}
