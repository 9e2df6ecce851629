//! Dense real linear algebra helpers shared by every module.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::tol;

pub type Mat = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// The standard symplectic matrix `J = (0, I; −I, 0)` in `(x, p)` block order.
pub fn j_matrix(n: usize) -> Mat {
    let mut j = Mat::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = 1.0;
        j[(n + i, i)] = -1.0;
    }
    j
}

pub fn max_abs(m: &Mat) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

pub fn symmetrize(m: &Mat) -> Mat {
    (m + m.transpose()) * 0.5
}

pub fn asymmetry(m: &Mat) -> f64 {
    max_abs(&(m - m.transpose()))
}

pub fn require_square(m: &Mat) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(format!(
            "expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows())
}

/// Returns `n` for a `2n × 2n` matrix.
pub fn half_dim(m: &Mat) -> Result<usize> {
    let side = require_square(m)?;
    if side == 0 || side % 2 != 0 {
        return Err(Error::Dimension(format!(
            "phase-space matrix must have even positive side, got {side}"
        )));
    }
    Ok(side / 2)
}

pub fn require_symmetric(m: &Mat, tol: f64) -> Result<()> {
    require_square(m)?;
    let asym = asymmetry(m);
    let scale = max_abs(m).max(1.0);
    if asym > tol * scale {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    Ok(())
}

/// Symmetric eigendecomposition with eigenvalues sorted ascending and the
/// eigenvector columns permuted to match.
pub fn sym_eigen(m: &Mat) -> (Vector, Mat) {
    let eig = SymmetricEigen::new(symmetrize(m));
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = Vector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = Mat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

pub fn min_eigenvalue(m: &Mat) -> f64 {
    sym_eigen(m).0[0]
}

pub fn max_eigenvalue(m: &Mat) -> f64 {
    let v = sym_eigen(m).0;
    v[v.len() - 1]
}

/// Checks symmetry and positive definiteness. The reported eigenvalue is the
/// smallest one of the symmetrized input.
pub fn require_spd(m: &Mat) -> Result<()> {
    require_symmetric(m, tol::SYMMETRY)?;
    if m.nrows() == 0 {
        return Err(Error::Dimension("empty matrix".into()));
    }
    let lo = min_eigenvalue(m);
    if !(lo > 0.0) {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: lo });
    }
    Ok(())
}

/// `V f(Λ) Vᵀ` for a symmetric matrix, eigenvalues clamped at
/// [`tol::EIG_CLAMP`] first.
fn spd_apply(m: &Mat, f: impl Fn(f64) -> f64) -> Mat {
    let (values, vectors) = sym_eigen(m);
    let diag = Vector::from_iterator(values.len(), values.iter().map(|&v| f(v.max(tol::EIG_CLAMP))));
    let out = &vectors * Mat::from_diagonal(&diag) * vectors.transpose();
    symmetrize(&out)
}

pub fn spd_sqrt(m: &Mat) -> Mat {
    spd_apply(m, f64::sqrt)
}

pub fn spd_inv_sqrt(m: &Mat) -> Mat {
    spd_apply(m, |v| 1.0 / v.sqrt())
}

pub fn spd_pow(m: &Mat, p: f64) -> Mat {
    spd_apply(m, |v| v.powf(p))
}

/// Inverse of an SPD matrix, symmetrized.
pub fn spd_inverse(m: &Mat) -> Result<Mat> {
    let chol = nalgebra::Cholesky::new(symmetrize(m)).ok_or_else(|| Error::NotPositiveDefinite {
        min_eigenvalue: min_eigenvalue(m),
    })?;
    Ok(symmetrize(&chol.inverse()))
}

pub fn inverse(m: &Mat) -> Result<Mat> {
    require_square(m)?;
    m.clone()
        .try_inverse()
        .ok_or_else(|| Error::Degenerate("singular matrix".into()))
}

/// Splits a `2n × 2n` matrix into its `(A, B; C, D)` blocks.
pub fn blocks(m: &Mat, n: usize) -> (Mat, Mat, Mat, Mat) {
    (
        m.view((0, 0), (n, n)).into_owned(),
        m.view((0, n), (n, n)).into_owned(),
        m.view((n, 0), (n, n)).into_owned(),
        m.view((n, n), (n, n)).into_owned(),
    )
}

pub fn from_blocks(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> Mat {
    let n = a.nrows();
    let mut m = Mat::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(a);
    m.view_mut((0, n), (n, n)).copy_from(b);
    m.view_mut((n, 0), (n, n)).copy_from(c);
    m.view_mut((n, n), (n, n)).copy_from(d);
    m
}

pub fn block_diag(a: &Mat, d: &Mat) -> Mat {
    let z1 = Mat::zeros(a.nrows(), d.ncols());
    let z2 = Mat::zeros(d.nrows(), a.ncols());
    from_blocks(a, &z1, &z2, d)
}

/// Largest eigenvalue of `A^{1/2} B A^{1/2}`, i.e. of `AB`, computed in
/// symmetric form.
pub fn max_eig_product(a: &Mat, b: &Mat) -> f64 {
    let ah = spd_sqrt(a);
    max_eigenvalue(&symmetrize(&(&ah * b * &ah)))
}

/// Eigenvalues (ascending) of `A^{1/2} B A^{1/2}`.
pub fn eig_product(a: &Mat, b: &Mat) -> Vector {
    let ah = spd_sqrt(a);
    sym_eigen(&symmetrize(&(&ah * b * &ah))).0
}

pub fn from_rows(rows: &[Vec<f64>]) -> Result<Mat> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Dimension("ragged matrix rows".into()));
    }
    Ok(Mat::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

pub fn to_rows(m: &Mat) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}
