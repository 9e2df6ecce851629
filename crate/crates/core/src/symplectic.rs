//! The real symplectic group: membership, generators, pre-Iwasawa
//! factorization, symplectic spectra and Williamson normal form.
//!
//! Phase-space coordinates are ordered `(x₁..xₙ, p₁..pₙ)` everywhere and the
//! symplectic form is `σ(z, z') = Jz·z'` with `J = (0, I; −I, 0)`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    self, asymmetry, blocks, from_blocks, half_dim, j_matrix, max_abs, spd_inv_sqrt, spd_sqrt, symmetrize, Mat,
};
use crate::tol;

/// Outcome of a boolean numerical check together with the measured residual.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub holds: bool,
    pub residual: f64,
}

/// `‖SᵀJS − J‖_max`.
pub fn symplectic_residual(m: &Mat) -> Result<f64> {
    let n = half_dim(m)?;
    let j = j_matrix(n);
    Ok(max_abs(&(m.transpose() * &j * m - j)))
}

pub fn is_symplectic(m: &Mat, tol: f64) -> Result<Check> {
    let residual = symplectic_residual(m)?;
    Ok(Check {
        holds: residual <= tol,
        residual,
    })
}

/// A `2n × 2n` real matrix with `SᵀJS = J`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    n: usize,
    m: Mat,
}

impl SymplecticMatrix {
    /// Validates at the default tolerance [`tol::SYMPLECTIC`].
    pub fn new(m: Mat) -> Result<Self> {
        Self::with_tolerance(m, tol::SYMPLECTIC)
    }

    pub fn with_tolerance(m: Mat, tol: f64) -> Result<Self> {
        let check = is_symplectic(&m, tol)?;
        if !check.holds {
            return Err(Error::NotSymplectic {
                residual: check.residual,
            });
        }
        Ok(Self { n: m.nrows() / 2, m })
    }

    /// Wraps a matrix that is symplectic by construction.
    pub(crate) fn from_trusted(m: Mat) -> Self {
        debug_assert!(m.nrows().is_multiple_of(2) && m.nrows() == m.ncols());
        Self { n: m.nrows() / 2, m }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_trusted(Mat::identity(2 * n, 2 * n))
    }

    pub fn j(n: usize) -> Self {
        Self::from_trusted(j_matrix(n))
    }

    /// `M_L = diag(L⁻¹, Lᵀ)`.
    pub fn dilation(l: &Mat) -> Result<Self> {
        let linv = linalg::inverse(l)
            .map_err(|_| Error::InvalidArgument("dilation requires an invertible matrix L".into()))?;
        let z = Mat::zeros(l.nrows(), l.nrows());
        Ok(Self::from_trusted(from_blocks(&linv, &z, &z, &l.transpose())))
    }

    /// The lower shear `(I, 0; P, I)`, written `V_{−P}` in the usual
    /// generator notation. `P` must be symmetric.
    pub fn shear(p: &Mat) -> Result<Self> {
        linalg::require_symmetric(p, tol::SYMMETRY)?;
        let n = p.nrows();
        let i = Mat::identity(n, n);
        Ok(Self::from_trusted(from_blocks(
            &i,
            &Mat::zeros(n, n),
            &symmetrize(p),
            &i,
        )))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Mat {
        &self.m
    }

    pub fn into_matrix(self) -> Mat {
        self.m
    }

    pub fn blocks(&self) -> (Mat, Mat, Mat, Mat) {
        blocks(&self.m, self.n)
    }

    pub fn residual(&self) -> f64 {
        symplectic_residual(&self.m).unwrap_or(f64::INFINITY)
    }

    pub fn compose(&self, rhs: &SymplecticMatrix) -> SymplecticMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in symplectic product");
        Self::from_trusted(&self.m * &rhs.m)
    }

    pub fn transpose(&self) -> SymplecticMatrix {
        Self::from_trusted(self.m.transpose())
    }

    /// Block inverse `(Dᵀ, −Bᵀ; −Cᵀ, Aᵀ)`; no linear solve involved.
    pub fn inverse(&self) -> SymplecticMatrix {
        let (a, b, c, d) = self.blocks();
        Self::from_trusted(from_blocks(
            &d.transpose(),
            &(-b.transpose()),
            &(-c.transpose()),
            &a.transpose(),
        ))
    }
}

/// Symplectic inverse of an arbitrary matrix, validated first.
pub fn symplectic_inverse(m: &Mat, tol: f64) -> Result<SymplecticMatrix> {
    Ok(SymplecticMatrix::with_tolerance(m.clone(), tol)?.inverse())
}

/// One of the three families generating `Sp(n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SymplecticGenerator {
    /// The standard symplectic matrix.
    J,
    /// `M_L = diag(L⁻¹, Lᵀ)`, `L` invertible.
    Ml { l: Vec<Vec<f64>> },
    /// The shear `(x, p) ↦ (x, p − Px)`, `P` symmetric. This is the
    /// projection of multiplication by `exp(−iPx·x/2ħ)`.
    Vp { p: Vec<Vec<f64>> },
}

impl SymplecticGenerator {
    pub fn ml(l: &Mat) -> Self {
        Self::Ml { l: linalg::to_rows(l) }
    }

    pub fn vp(p: &Mat) -> Self {
        Self::Vp { p: linalg::to_rows(p) }
    }

    /// The symplectic matrix this generator stands for in dimension `n`.
    pub fn matrix(&self, n: usize) -> Result<SymplecticMatrix> {
        match self {
            Self::J => Ok(SymplecticMatrix::j(n)),
            Self::Ml { l } => {
                let l = linalg::from_rows(l)?;
                check_block_dim(&l, n)?;
                SymplecticMatrix::dilation(&l)
            }
            Self::Vp { p } => {
                let p = linalg::from_rows(p)?;
                check_block_dim(&p, n)?;
                SymplecticMatrix::shear(&(-p))
            }
        }
    }
}

fn check_block_dim(m: &Mat, n: usize) -> Result<()> {
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::Dimension(format!(
            "expected {n}x{n} block, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

/// `S = V_{−P} M_L R` with `P` symmetric, `L` SPD and `R ∈ Sp(n) ∩ O(2n)`.
#[derive(Debug, Clone)]
pub struct PreIwasawaFactors {
    pub p: Mat,
    pub l: Mat,
    pub r: SymplecticMatrix,
    /// Asymmetry of `P` before it was symmetrized.
    pub p_asymmetry: f64,
    /// `‖V_{−P} M_L R − S‖_max`.
    pub reconstruction_error: f64,
    /// `‖RᵀR − I‖_max`.
    pub orthogonality_error: f64,
}

impl PreIwasawaFactors {
    pub fn reconstruct(&self) -> Mat {
        let shear = SymplecticMatrix::from_trusted(from_blocks(
            &Mat::identity(self.p.nrows(), self.p.nrows()),
            &Mat::zeros(self.p.nrows(), self.p.nrows()),
            &self.p,
            &Mat::identity(self.p.nrows(), self.p.nrows()),
        ));
        let dil = SymplecticMatrix::dilation(&self.l).expect("L is SPD");
        shear.compose(&dil).compose(&self.r).into_matrix()
    }
}

pub fn pre_iwasawa(s: &SymplecticMatrix) -> Result<PreIwasawaFactors> {
    let n = s.n();
    let (a, b, c, d) = s.blocks();
    let gram = symmetrize(&(&a * a.transpose() + &b * b.transpose()));
    let gram_inv = linalg::spd_inverse(&gram)
        .map_err(|_| Error::Internal("AAᵀ + BBᵀ is singular for a symplectic input".into()))?;
    let l = spd_inv_sqrt(&gram);
    let p_raw = (&c * a.transpose() + &d * b.transpose()) * gram_inv;
    let p_asymmetry = asymmetry(&p_raw);
    let p = symmetrize(&p_raw);
    let e = &l * &a;
    let f = &l * &b;
    let r = SymplecticMatrix::from_trusted(from_blocks(&e, &f, &(-&f), &e));
    let orthogonality_error = max_abs(&(r.matrix().transpose() * r.matrix() - Mat::identity(2 * n, 2 * n)));
    let mut factors = PreIwasawaFactors {
        p,
        l,
        r,
        p_asymmetry,
        reconstruction_error: 0.0,
        orthogonality_error,
    };
    factors.reconstruction_error = max_abs(&(factors.reconstruct() - s.matrix()));
    Ok(factors)
}

/// Hermitian eigendecomposition of `iK`, `K = M^{1/2} J M^{1/2}`. The
/// eigenvalues come in pairs `±λ_j`.
fn skew_eigen(m: &Mat) -> Result<(usize, SymmetricEigen<Complex64, nalgebra::Dyn>, Mat)> {
    let n = half_dim(m)?;
    linalg::require_spd(m)?;
    let root = spd_sqrt(m);
    let k = &root * j_matrix(n) * &root;
    let k = (&k - k.transpose()) * 0.5;
    let herm: DMatrix<Complex64> = k.map(|v| Complex64::new(0.0, v));
    Ok((n, SymmetricEigen::new(herm), root))
}

/// Positive halves of the `±λ` eigenvalue pairs, sorted descending, with the
/// index of the corresponding eigenvector column.
fn paired_spectrum(values: &[f64]) -> Result<Vec<(f64, usize)>> {
    let mut pos: Vec<(f64, usize)> = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > 0.0)
        .map(|(i, &v)| (v, i))
        .collect();
    let mut neg: Vec<f64> = values.iter().filter(|&&v| v <= 0.0).map(|v| -v).collect();
    if pos.len() != neg.len() {
        return Err(Error::Internal(format!(
            "unbalanced skew spectrum: {} positive vs {} non-positive eigenvalues",
            pos.len(),
            neg.len()
        )));
    }
    pos.sort_by(|a, b| b.0.total_cmp(&a.0));
    neg.sort_by(|a, b| b.total_cmp(a));
    let top = pos.first().map_or(1.0, |p| p.0);
    for ((p, _), q) in pos.iter().zip(&neg) {
        if (p - q).abs() > tol::PAIRING * top.max(1.0) {
            return Err(Error::Internal(format!("cannot pair ±iλ: {p} vs {q}")));
        }
    }
    Ok(pos)
}

/// Symplectic eigenvalues of an SPD matrix, descending: the `λ_j > 0` with
/// `±iλ_j` the eigenvalues of `JM`.
pub fn symplectic_eigenvalues(m: &Mat) -> Result<Vec<f64>> {
    let (_, eig, _) = skew_eigen(m)?;
    let values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    Ok(paired_spectrum(&values)?.into_iter().map(|(v, _)| v).collect())
}

/// Williamson normal form `Sᵀ M S = diag(Λ, Λ)`.
#[derive(Debug, Clone)]
pub struct WilliamsonForm {
    pub s: SymplecticMatrix,
    /// Symplectic eigenvalues, descending.
    pub spectrum: Vec<f64>,
    /// `‖Sᵀ M S − diag(Λ, Λ)‖_max`.
    pub residual: f64,
}

impl WilliamsonForm {
    pub fn diagonal(&self) -> Mat {
        let n = self.spectrum.len();
        Mat::from_fn(2 * n, 2 * n, |i, j| if i == j { self.spectrum[i % n] } else { 0.0 })
    }
}

pub fn williamson(m: &Mat) -> Result<WilliamsonForm> {
    let (n, eig, root) = skew_eigen(m)?;
    let values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let pairs = paired_spectrum(&values)?;
    // For iK w = λ w with w = a + ib: K a = λ b and K b = −λ a.
    let mut frame = Mat::zeros(2 * n, 2 * n);
    for (j, &(lambda, col)) in pairs.iter().enumerate() {
        let w = eig.eigenvectors.column(col);
        for i in 0..2 * n {
            frame[(i, j)] = std::f64::consts::SQRT_2 * w[i].im * lambda.sqrt();
            frame[(i, n + j)] = std::f64::consts::SQRT_2 * w[i].re * lambda.sqrt();
        }
    }
    let root_inv = linalg::spd_inverse(&root)?;
    let s = SymplecticMatrix::from_trusted(root_inv * frame);
    let spectrum: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let mut form = WilliamsonForm {
        s,
        spectrum,
        residual: 0.0,
    };
    form.residual = max_abs(&(form.s.matrix().transpose() * m * form.s.matrix() - form.diagonal()));
    Ok(form)
}

/// Cayley transform of a skew matrix: always orthogonal.
pub(crate) fn cayley(k: &Mat) -> Mat {
    let i = Mat::identity(k.nrows(), k.nrows());
    (&i - k).try_inverse().expect("I − K invertible for skew K") * (&i + k)
}

/// Deterministic pseudo-random symplectic matrix built as three rounds of
/// `V_{−P} · M_L · J` with entries scaled by `spread`. With `spread = 0`
/// every `P` vanishes and every `L` is the identity.
pub fn random_symplectic(seed: u64, n: usize, spread: f64) -> Result<SymplecticMatrix> {
    if n == 0 {
        return Err(Error::Dimension("n must be positive".into()));
    }
    if !(spread >= 0.0) || !spread.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "spread must be finite and ≥ 0, got {spread}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut uniform = |scale: f64| -> f64 { scale * rng.random_range(-1.0..=1.0) };
    let mut s = SymplecticMatrix::identity(n);
    for _ in 0..3 {
        let mut p = Mat::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = uniform(spread);
                p[(i, j)] = v;
                p[(j, i)] = v;
            }
        }
        let mut k1 = Mat::zeros(n, n);
        let mut k2 = Mat::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let a = uniform(spread);
                let b = uniform(spread);
                k1[(i, j)] = a;
                k1[(j, i)] = -a;
                k2[(i, j)] = b;
                k2[(j, i)] = -b;
            }
        }
        let scales = Mat::from_diagonal(&linalg::Vector::from_iterator(
            n,
            (0..n).map(|_| uniform(0.5 * spread).exp()),
        ));
        let l = cayley(&k1) * scales * cayley(&k2).transpose();
        s = s
            .compose(&SymplecticMatrix::shear(&p)?)
            .compose(&SymplecticMatrix::dilation(&l)?)
            .compose(&SymplecticMatrix::j(n));
    }
    SymplecticMatrix::with_tolerance(s.into_matrix(), tol::SYMPLECTIC_LOOSE)
}

/// Pseudo-random element of `Sp(n) ∩ O(2n)`.
pub fn random_symplectic_rotation(seed: u64, n: usize) -> Result<SymplecticMatrix> {
    Ok(pre_iwasawa(&random_symplectic(seed, n, 1.0)?)?.r)
}
