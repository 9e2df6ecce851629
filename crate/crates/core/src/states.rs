//! Generalized Gaussian states `ψ_{W,Y}`, their Wigner and covariance
//! matrices, the quantum condition and its consequences.
//!
//! A state is identified with the exponent of
//! `ψ_{W,Y}(x) = (det W / (πħ)ⁿ)^{1/4} exp(−(W + iY)x·x / 2ħ)`; global phases
//! are discarded.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blobs::{PhaseEllipsoid, QuantumBlob};
use crate::capacities;
use crate::error::{Error, Result};
use crate::linalg::{self, blocks, from_blocks, half_dim, Mat, Vector};
use crate::symplectic::{self, SymplecticGenerator};
use crate::tol;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    w: Mat,
    y: Mat,
    hbar: f64,
}

impl GaussianState {
    pub fn new(w: Mat, y: Mat, hbar: f64) -> Result<Self> {
        linalg::require_spd(&w)?;
        linalg::require_symmetric(&y, tol::SYMMETRY)?;
        if w.shape() != y.shape() {
            return Err(Error::Dimension("W and Y must have the same size".into()));
        }
        if !(hbar > 0.0) {
            return Err(Error::InvalidArgument(format!("hbar must be positive, got {hbar}")));
        }
        Ok(Self {
            w: linalg::symmetrize(&w),
            y: linalg::symmetrize(&y),
            hbar,
        })
    }

    /// The standard Gaussian `φ₀ = ψ_{I,0}`.
    pub fn standard(n: usize, hbar: f64) -> Self {
        Self {
            w: Mat::identity(n, n),
            y: Mat::zeros(n, n),
            hbar,
        }
    }

    pub fn w(&self) -> &Mat {
        &self.w
    }

    pub fn y(&self) -> &Mat {
        &self.y
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn n(&self) -> usize {
        self.w.nrows()
    }

    /// `ψ_{W,Y}(x)`.
    pub fn amplitude(&self, x: &Vector) -> Complex64 {
        let n = self.n() as i32;
        let norm = (self.w.determinant() / (std::f64::consts::PI * self.hbar).powi(n)).powf(0.25);
        let re = x.dot(&(&self.w * x));
        let im = x.dot(&(&self.y * x));
        Complex64::new(-re, -im).scale(0.5 / self.hbar).exp() * norm
    }
}

/// `G = (W + YW⁻¹Y, YW⁻¹; W⁻¹Y, W⁻¹)`, so that
/// `Wψ(z) = (πħ)⁻ⁿ exp(−Gz·z/ħ)`.
pub fn wigner_matrix(state: &GaussianState) -> Mat {
    let winv = linalg::spd_inverse(&state.w).expect("validated SPD");
    let y = &state.y;
    let g = from_blocks(&(&state.w + y * &winv * y), &(y * &winv), &(&winv * y), &winv);
    linalg::symmetrize(&g)
}

/// Second-moment matrix `Σ` of a centered state, with blocks
/// `(Σ_XX, Σ_XP; Σ_PX, Σ_PP)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    sigma: Mat,
    hbar: f64,
}

impl CovarianceMatrix {
    /// Requires a symmetric `2n × 2n` matrix; definiteness is checked by
    /// [`quantum_condition_check`], not here.
    pub fn new(sigma: Mat, hbar: f64) -> Result<Self> {
        half_dim(&sigma)?;
        linalg::require_symmetric(&sigma, tol::SYMMETRY)?;
        if !(hbar > 0.0) {
            return Err(Error::InvalidArgument(format!("hbar must be positive, got {hbar}")));
        }
        Ok(Self {
            sigma: linalg::symmetrize(&sigma),
            hbar,
        })
    }

    pub fn sigma(&self) -> &Mat {
        &self.sigma
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn n(&self) -> usize {
        self.sigma.nrows() / 2
    }

    pub fn xx(&self) -> Mat {
        blocks(&self.sigma, self.n()).0
    }

    pub fn xp(&self) -> Mat {
        blocks(&self.sigma, self.n()).1
    }

    pub fn pp(&self) -> Mat {
        blocks(&self.sigma, self.n()).3
    }

    /// The covariance ellipsoid `{z : ½Σ⁻¹z·z ≤ 1}` written at level `ħ`,
    /// i.e. `{z : (ħ/2)Σ⁻¹ z·z ≤ ħ}`.
    pub fn ellipsoid(&self) -> Result<PhaseEllipsoid> {
        let inv = linalg::spd_inverse(&self.sigma)?;
        PhaseEllipsoid::new(inv * (self.hbar / 2.0), self.hbar)
    }
}

/// `Σ = (ħ/2) G⁻¹`.
pub fn covariance(state: &GaussianState) -> CovarianceMatrix {
    let g = wigner_matrix(state);
    let ginv = linalg::spd_inverse(&g).expect("Wigner matrix is SPD");
    CovarianceMatrix {
        sigma: ginv * (state.hbar / 2.0),
        hbar: state.hbar,
    }
}

/// `Σ_m = ħ(m + ½) I₂ₙ` of the product Hermite state `h_m ⊗ ⋯ ⊗ h_m`.
pub fn hermite_covariance(m: u32, n: usize, hbar: f64) -> CovarianceMatrix {
    CovarianceMatrix {
        sigma: Mat::identity(2 * n, 2 * n) * (hbar * (m as f64 + 0.5)),
        hbar,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumVerdict {
    /// `Σ + (iħ/2)J ⪰ 0`, decided as `λ_min^σ(Σ) ≥ ħ/2 − tol`.
    pub passes: bool,
    /// `c(Ω_Σ) ≥ πħ − tol`, decided independently from the capacity.
    pub capacity_passes: bool,
    pub positive_definite: bool,
    pub min_symplectic_eigenvalue: f64,
    pub symplectic_spectrum: Vec<f64>,
    pub capacity_of_cov_ellipsoid: f64,
    pub rs_margins: Vec<f64>,
    /// Matrix `G` of a quantum blob inside `Ω_Σ`, when the condition holds.
    pub blob: Option<Vec<Vec<f64>>>,
    /// The blob is the only one inside `Ω_Σ` (capacity exactly `πħ`).
    pub blob_unique: bool,
    pub diagnostics: Option<String>,
}

pub fn quantum_condition_check(cov: &CovarianceMatrix, tol: f64) -> Result<QuantumVerdict> {
    let hbar = cov.hbar;
    let rs_margins = robertson_schrodinger_check(cov);
    let min_eig = linalg::min_eigenvalue(&cov.sigma);
    if !(min_eig > 0.0) {
        return Ok(QuantumVerdict {
            passes: false,
            capacity_passes: false,
            positive_definite: false,
            min_symplectic_eigenvalue: 0.0,
            symplectic_spectrum: Vec::new(),
            capacity_of_cov_ellipsoid: 0.0,
            rs_margins,
            blob: None,
            blob_unique: false,
            diagnostics: Some(format!("Σ is not positive definite (smallest eigenvalue {min_eig:e})")),
        });
    }
    let spectrum = symplectic::symplectic_eigenvalues(&cov.sigma)?;
    let lmin = *spectrum.last().expect("n ≥ 1");
    let passes = lmin >= hbar / 2.0 - tol;

    let omega = cov.ellipsoid()?;
    let capacity = capacities::ellipsoid_capacity(&omega)?.value;
    let pi_hbar = std::f64::consts::PI * hbar;
    let capacity_passes = capacity >= pi_hbar - 2.0 * std::f64::consts::PI * tol;

    let (blob, blob_unique) = if passes {
        // Williamson frame of the ellipsoid's form: Sᵀ M S = diag(Λ, Λ) with
        // Λ ≤ 1, so S(B²ⁿ(√ħ)) ⊆ Ω_Σ.
        let w = symplectic::williamson(omega.matrix())?;
        let qb = QuantumBlob::from_symplectic(&w.s, hbar)?;
        let unique = (capacity - pi_hbar).abs() <= 2.0 * std::f64::consts::PI * tol.max(1e-12);
        (Some(linalg::to_rows(qb.g())), unique)
    } else {
        (None, false)
    };
    Ok(QuantumVerdict {
        passes,
        capacity_passes,
        positive_definite: true,
        min_symplectic_eigenvalue: lmin,
        symplectic_spectrum: spectrum,
        capacity_of_cov_ellipsoid: capacity,
        rs_margins,
        blob,
        blob_unique,
        diagnostics: None,
    })
}

/// `Σ_XX[j,j] Σ_PP[j,j] − Σ_XP[j,j]² − ħ²/4` for each degree of freedom.
pub fn robertson_schrodinger_check(cov: &CovarianceMatrix) -> Vec<f64> {
    let n = cov.n();
    let s = &cov.sigma;
    (0..n)
        .map(|j| s[(j, j)] * s[(n + j, n + j)] - s[(j, n + j)].powi(2) - cov.hbar * cov.hbar / 4.0)
        .collect()
}

/// Parameters of the position and momentum densities `|ψ|²`, `|ψ̂|²`: both
/// centered normal laws.
#[derive(Debug, Clone, PartialEq)]
pub struct Marginals {
    pub position_covariance: Mat,
    pub momentum_covariance: Mat,
}

impl Marginals {
    fn density(cov: &Mat, u: &Vector) -> f64 {
        let n = cov.nrows() as i32;
        let inv = linalg::spd_inverse(cov).expect("marginal covariance is SPD");
        (2.0 * std::f64::consts::PI).powi(-n).sqrt() / cov.determinant().sqrt() * (-0.5 * u.dot(&(inv * u))).exp()
    }

    pub fn position_density(&self, x: &Vector) -> f64 {
        Self::density(&self.position_covariance, x)
    }

    pub fn momentum_density(&self, p: &Vector) -> f64 {
        Self::density(&self.momentum_covariance, p)
    }
}

pub fn marginals(state: &GaussianState) -> Marginals {
    let cov = covariance(state);
    Marginals {
        position_covariance: cov.xx(),
        momentum_covariance: cov.pp(),
    }
}

/// Pure `n = 1` covariance matrices with the given marginal variances:
/// `Σ_XP = ±√(σ_xx σ_pp − ħ²/4)`. One matrix when the root vanishes.
pub fn pauli_partners(sigma_xx: f64, sigma_pp: f64, hbar: f64, tol: f64) -> Result<Vec<CovarianceMatrix>> {
    if !(sigma_xx > 0.0) || !(sigma_pp > 0.0) {
        return Err(Error::InvalidArgument("variances must be positive".into()));
    }
    let product = sigma_xx * sigma_pp;
    let disc = product - hbar * hbar / 4.0;
    if disc < -tol {
        return Err(Error::NoQuantumSolution { product });
    }
    let root = disc.max(0.0).sqrt();
    let make = |c: f64| CovarianceMatrix {
        sigma: Mat::from_row_slice(2, 2, &[sigma_xx, c, c, sigma_pp]),
        hbar,
    };
    if root <= tol {
        Ok(vec![make(0.0)])
    } else {
        Ok(vec![make(root), make(-root)])
    }
}

/// Action of an elementary metaplectic operator on `ψ_{W,Y}`:
/// - `Vp(P)`: multiplication by `exp(−iPx·x/2ħ)`, `Y ↦ Y + P`;
/// - `Ml(L)`: `ψ ↦ √|det L| ψ(Lx)`, `(W, Y) ↦ (LᵀWL, LᵀYL)`;
/// - `J`: Fourier transform, `W + iY ↦ (W + iY)⁻¹`.
pub fn metaplectic_apply(state: &GaussianState, g: &SymplecticGenerator) -> Result<GaussianState> {
    let n = state.n();
    match g {
        SymplecticGenerator::Vp { p } => {
            let p = linalg::from_rows(p)?;
            GaussianState::new(state.w.clone(), &state.y + p, state.hbar)
        }
        SymplecticGenerator::Ml { l } => {
            let l = linalg::from_rows(l)?;
            if l.nrows() != n || l.ncols() != n {
                return Err(Error::Dimension("L has the wrong size".into()));
            }
            if l.determinant().abs() < 1e-300 {
                return Err(Error::InvalidArgument("L is singular".into()));
            }
            GaussianState::new(l.transpose() * &state.w * &l, l.transpose() * &state.y * &l, state.hbar)
        }
        SymplecticGenerator::J => {
            let z: DMatrix<Complex64> = DMatrix::from_fn(n, n, |i, j| Complex64::new(state.w[(i, j)], state.y[(i, j)]));
            let zinv = z
                .try_inverse()
                .ok_or_else(|| Error::Internal("W + iY singular with W > 0".into()))?;
            GaussianState::new(zinv.map(|c| c.re), zinv.map(|c| c.im), state.hbar)
        }
    }
}
