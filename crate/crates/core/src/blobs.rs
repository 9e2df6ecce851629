//! Quantum blobs `S(B²ⁿ(√ħ))`, their normal form and projections, John
//! ellipsoids of product bodies, and the blob ↔ Gaussian correspondence.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, block_diag, blocks, half_dim, max_abs, Mat, Vector};
use crate::polar::{self, ball_volume, EllipsoidBody, PolytopeBody, Space};
use crate::states::{self, GaussianState};
use crate::symplectic::{self, pre_iwasawa, SymplecticMatrix};

/// Tolerance for the blob invariants (symplecticity of `G`, unit spectrum).
pub const BLOB_TOL: f64 = 1e-9;

/// A centered phase-space ellipsoid `{z : Mz·z ≤ ħ}`, `M` SPD of side `2n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseEllipsoid {
    m: Mat,
    hbar: f64,
}

impl PhaseEllipsoid {
    pub fn new(m: Mat, hbar: f64) -> Result<Self> {
        half_dim(&m)?;
        linalg::require_spd(&m)?;
        if !(hbar > 0.0) {
            return Err(Error::InvalidArgument(format!("hbar must be positive, got {hbar}")));
        }
        Ok(Self {
            m: linalg::symmetrize(&m),
            hbar,
        })
    }

    pub fn ball(n: usize, r: f64, hbar: f64) -> Result<Self> {
        Self::new(Mat::identity(2 * n, 2 * n) * (hbar / (r * r)), hbar)
    }

    pub fn matrix(&self) -> &Mat {
        &self.m
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn n(&self) -> usize {
        self.m.nrows() / 2
    }

    pub fn volume(&self) -> f64 {
        ball_volume(2 * self.n(), self.hbar.sqrt()) / self.m.determinant().sqrt()
    }

    /// Image under a linear map `z ↦ Sz`.
    pub fn image(&self, s: &Mat) -> Result<Self> {
        let sinv = linalg::inverse(s)?;
        Self::new(sinv.transpose() * &self.m * sinv, self.hbar)
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        Self {
            m: &self.m / (lambda * lambda),
            hbar: self.hbar,
        }
    }

    /// `self ⊆ outer`, decided by the Löwner order of the level-one forms.
    /// Returns the smallest eigenvalue of `M_self − M_outer` after whitening
    /// by `M_outer`; the inclusion holds when it is `≥ −tol`.
    pub fn inside(&self, outer: &PhaseEllipsoid, tol: f64) -> Result<(bool, f64)> {
        if self.m.nrows() != outer.m.nrows() {
            return Err(Error::Dimension("ellipsoids of different dimension".into()));
        }
        let mo = &outer.m / outer.hbar;
        let mi = &self.m / self.hbar;
        let w = linalg::spd_inv_sqrt(&mo);
        let margin = linalg::min_eigenvalue(&linalg::symmetrize(&(&w * (mi - &mo) * &w)));
        Ok((margin >= -tol, margin))
    }

    /// Orthogonal projections onto position and momentum space, via Schur
    /// complements.
    pub fn projections(&self) -> (EllipsoidBody, EllipsoidBody) {
        let n = self.n();
        let (mxx, mxp, mpx, mpp) = blocks(&self.m, n);
        let mpp_inv = linalg::spd_inverse(&mpp).expect("diagonal block of SPD matrix");
        let mxx_inv = linalg::spd_inverse(&mxx).expect("diagonal block of SPD matrix");
        let sx = linalg::symmetrize(&(&mxx - &mxp * mpp_inv * &mpx));
        let sp = linalg::symmetrize(&(&mpp - &mpx * mxx_inv * &mxp));
        (
            EllipsoidBody::new(Space::Position, sx, self.hbar).expect("Schur complement of SPD"),
            EllipsoidBody::new(Space::Momentum, sp, self.hbar).expect("Schur complement of SPD"),
        )
    }
}

/// `QB = {z : Gz·z ≤ ħ}` with `G` symmetric, positive definite and
/// symplectic.
#[derive(Debug, Clone)]
pub struct QuantumBlob {
    g: Mat,
    hbar: f64,
    generator: Option<SymplecticMatrix>,
}

impl QuantumBlob {
    /// `QB(S) = S(B²ⁿ(√ħ))`, i.e. `G = (SSᵀ)⁻¹`.
    pub fn from_symplectic(s: &SymplecticMatrix, hbar: f64) -> Result<Self> {
        if !(hbar > 0.0) {
            return Err(Error::InvalidArgument(format!("hbar must be positive, got {hbar}")));
        }
        let sinv = s.inverse();
        let g = linalg::symmetrize(&(sinv.matrix().transpose() * sinv.matrix()));
        Ok(Self {
            g,
            hbar,
            generator: Some(s.clone()),
        })
    }

    /// Validates `G` (SPD and symplectic within [`BLOB_TOL`]).
    pub fn from_matrix(g: Mat, hbar: f64) -> Result<Self> {
        PhaseEllipsoid::new(g.clone(), hbar)?;
        let check = symplectic::is_symplectic(&g, BLOB_TOL)?;
        if !check.holds {
            return Err(Error::NotSymplectic {
                residual: check.residual,
            });
        }
        Ok(Self {
            g: linalg::symmetrize(&g),
            hbar,
            generator: None,
        })
    }

    pub fn g(&self) -> &Mat {
        &self.g
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn n(&self) -> usize {
        self.g.nrows() / 2
    }

    pub fn generator(&self) -> Option<&SymplecticMatrix> {
        self.generator.as_ref()
    }

    pub fn ellipsoid(&self) -> PhaseEllipsoid {
        PhaseEllipsoid {
            m: self.g.clone(),
            hbar: self.hbar,
        }
    }

    pub fn volume(&self) -> f64 {
        self.ellipsoid().volume()
    }

    /// A generator `S` with `G = (SSᵀ)⁻¹`: the provenance matrix if known,
    /// else the symmetric symplectic root `G^{−1/2}`.
    pub fn some_generator(&self) -> SymplecticMatrix {
        match &self.generator {
            Some(s) => s.clone(),
            None => SymplecticMatrix::from_trusted(linalg::spd_inv_sqrt(&self.g)),
        }
    }

    /// Measured invariants; all should be at rounding level.
    pub fn invariant_residuals(&self) -> Result<BlobInvariants> {
        let n = self.n();
        let spectrum = symplectic::symplectic_eigenvalues(&self.g)?;
        let expected = (std::f64::consts::PI * self.hbar).powi(n as i32) / (1..=n).map(|k| k as f64).product::<f64>();
        Ok(BlobInvariants {
            symplectic_residual: symplectic::symplectic_residual(&self.g)?,
            det_error: (self.g.determinant() - 1.0).abs(),
            spectrum_error: spectrum.iter().map(|l| (l - 1.0).abs()).fold(0.0, f64::max),
            volume_rel_error: (self.volume() - expected).abs() / expected,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlobInvariants {
    pub symplectic_residual: f64,
    pub det_error: f64,
    pub spectrum_error: f64,
    pub volume_rel_error: f64,
}

pub fn blob_from_symplectic(s: &SymplecticMatrix, hbar: f64) -> Result<QuantumBlob> {
    QuantumBlob::from_symplectic(s, hbar)
}

/// Normal form `QB = V_{−P} M_L (B²ⁿ(√ħ))`.
#[derive(Debug, Clone)]
pub struct BlobNormalForm {
    pub p: Mat,
    pub l: Mat,
}

pub fn blob_normal_form(blob: &QuantumBlob) -> Result<BlobNormalForm> {
    let f = pre_iwasawa(&blob.some_generator())?;
    Ok(BlobNormalForm { p: f.p, l: f.l })
}

/// Position and momentum shadows of a blob.
#[derive(Debug, Clone)]
pub struct BlobProjections {
    pub x: EllipsoidBody,
    pub p: EllipsoidBody,
    pub saturated: bool,
}

/// Saturation holds when `‖G_XP‖_max ≤ tol`.
pub fn project_blob(blob: &QuantumBlob, tol: f64) -> BlobProjections {
    let (x, p) = blob.ellipsoid().projections();
    let n = blob.n();
    let gxp = blob.g.view((0, n), (n, n)).into_owned();
    BlobProjections {
        x,
        p,
        saturated: max_abs(&gxp) <= tol,
    }
}

/// John ellipsoid of `X × P` for two centered ellipsoids.
#[derive(Debug, Clone)]
pub struct JohnEllipsoid {
    pub ellipsoid: PhaseEllipsoid,
    /// Whether the John ellipsoid is itself a quantum blob.
    pub is_blob: bool,
    /// Largest entry-wise mismatch between the projections of the John
    /// ellipsoid and the factors.
    pub projection_error: f64,
}

pub fn john_of_pair(x: &EllipsoidBody, p: &EllipsoidBody) -> Result<JohnEllipsoid> {
    if x.dim() != p.dim() {
        return Err(Error::Dimension(format!(
            "factors have dimensions {} and {}",
            x.dim(),
            p.dim()
        )));
    }
    let hbar = x.hbar();
    let b = p.q() * (hbar / p.hbar());
    let m = block_diag(x.q(), &b);
    let residual = symplectic::symplectic_residual(&m)?;
    let ellipsoid = PhaseEllipsoid::new(m, hbar)?;
    let (px, pp) = ellipsoid.projections();
    let projection_error = max_abs(&(px.q() - x.q())).max(max_abs(&(pp.q() - &b)));
    Ok(JohnEllipsoid {
        ellipsoid,
        is_blob: residual <= BLOB_TOL,
        projection_error,
    })
}

/// Diagnostics of the John-ellipsoid optimizer.
#[derive(Debug, Clone)]
pub struct JohnSolution {
    pub ellipsoid: PhaseEllipsoid,
    pub iterations: usize,
    /// Final optimality gap `max_i κ_i / d − 1`.
    pub gap: f64,
}

pub const JOHN_GAP: f64 = 1e-10;
pub const JOHN_MAX_ITER: usize = 200_000;

/// Maximal-volume centered ellipsoid inside `{z : |cᵢ·z| ≤ 1 ∀i}`.
///
/// Solved through the dual problem: the minimum-volume centered ellipsoid
/// enclosing `±cᵢ`, by coordinate ascent on the log-determinant of
/// `Σ uᵢ cᵢcᵢᵀ` with Todd–Yildirim away steps.
pub fn john_of_symmetric_polytope(normals: &[Vector], hbar: f64) -> Result<JohnSolution> {
    let d = normals.first().map_or(0, |c| c.len());
    if d == 0 || normals.len() < d {
        return Err(Error::Degenerate("too few facet normals".into()));
    }
    let m = normals.len();
    let df = d as f64;
    let mut u = vec![1.0 / m as f64; m];
    let mut gap = f64::INFINITY;
    for iter in 0..JOHN_MAX_ITER {
        let mut x = Mat::zeros(d, d);
        for (w, c) in u.iter().zip(normals) {
            x += c * c.transpose() * *w;
        }
        let xinv =
            linalg::spd_inverse(&x).map_err(|_| Error::Degenerate("facet normals do not span the space".into()))?;
        let kappa: Vec<f64> = normals.iter().map(|c| c.dot(&(&xinv * c))).collect();
        let (j, kmax) = kappa.iter().enumerate().fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, &k)| if k > acc.1 { (i, k) } else { acc },
        );
        let (k, kmin) = kappa
            .iter()
            .enumerate()
            .filter(|(i, _)| u[*i] > 0.0)
            .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
        gap = kmax / df - 1.0;
        if gap <= JOHN_GAP {
            let shape = linalg::symmetrize(&(x * (df * hbar / (1.0 + gap.max(0.0)))));
            return Ok(JohnSolution {
                ellipsoid: PhaseEllipsoid::new(shape, hbar)?,
                iterations: iter,
                gap,
            });
        }
        if kmax - df >= df - kmin {
            let tau = (kmax - df) / (df * (kmax - 1.0));
            for w in u.iter_mut() {
                *w *= 1.0 - tau;
            }
            u[j] += tau;
        } else {
            let bound = -u[k] / (1.0 - u[k]);
            let tau = if kmin > 1.0 {
                ((kmin - df) / (df * (kmin - 1.0))).max(bound)
            } else {
                bound
            };
            for w in u.iter_mut() {
                *w *= 1.0 - tau;
            }
            u[k] += tau;
            if u[k] < 1e-300 {
                u[k] = 0.0;
            }
        }
    }
    Err(Error::Convergence {
        iterations: JOHN_MAX_ITER,
        gap,
    })
}

/// John ellipsoid of `X × P` for planar (or linear) polytopes, `n ≤ 2`.
pub fn john_of_polytope_product(x: &PolytopeBody, p: &PolytopeBody) -> Result<JohnSolution> {
    let n = x.dim();
    if p.dim() != n {
        return Err(Error::Dimension("factors have different dimensions".into()));
    }
    if n > 2 {
        return Err(Error::Dimension(format!(
            "polytope John solver supports n ≤ 2, got {n}"
        )));
    }
    let mut normals = Vec::with_capacity(x.normals().len() + p.normals().len());
    for a in x.normals() {
        let mut c = Vector::zeros(2 * n);
        c.rows_mut(0, n).copy_from(a);
        normals.push(c);
    }
    for b in p.normals() {
        let mut c = Vector::zeros(2 * n);
        c.rows_mut(n, n).copy_from(b);
        normals.push(c);
    }
    john_of_symmetric_polytope(&normals, x.hbar())
}

/// Which rescaling of `John(X × X^ħ)` to place inside `John(X × P)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rescaling {
    /// `M_λ = diag(λ⁻¹I, λI)`, `1 ≤ λ ≤ λ_max`.
    Lambda(f64),
    /// `M_{A^{−1/2}B^{−1/2}}`.
    Ab,
}

#[derive(Debug, Clone)]
pub struct RescaledBlob {
    pub blob: QuantumBlob,
    pub contained: bool,
    /// Löwner margin of the containment test.
    pub margin: f64,
    pub lambda_max: f64,
}

pub fn rescaled_blob_family(a: &Mat, b: &Mat, choice: Rescaling, hbar: f64) -> Result<RescaledBlob> {
    if a.nrows() != b.nrows() {
        return Err(Error::Dimension("A and B differ in size".into()));
    }
    let x = EllipsoidBody::new(Space::Position, a.clone(), hbar)?;
    let p = EllipsoidBody::new(Space::Momentum, b.clone(), hbar)?;
    let report = polar::quantum_pair_check(&x.clone().into(), &p.clone().into())?;
    let lambda_max = report.lambda_max;
    if !report.holds {
        return Err(Error::NotQuantumPair {
            lambda_max,
            witness: report.witness.unwrap_or_default(),
        });
    }
    let n = a.nrows();
    let base = SymplecticMatrix::dilation(&linalg::spd_sqrt(a))?;
    let s = match choice {
        Rescaling::Lambda(lambda) => {
            if !(lambda >= 1.0 - 1e-12) || lambda > lambda_max * (1.0 + 1e-12) {
                return Err(Error::ScaleOutOfRange { lambda, lambda_max });
            }
            let m_lambda = SymplecticMatrix::dilation(&(Mat::identity(n, n) * lambda))?;
            m_lambda.compose(&base)
        }
        Rescaling::Ab => {
            let l = linalg::spd_inv_sqrt(a) * linalg::spd_inv_sqrt(b);
            SymplecticMatrix::dilation(&l)?.compose(&base)
        }
    };
    let blob = QuantumBlob::from_symplectic(&s, hbar)?;
    let john = john_of_pair(&x, &p)?;
    let (contained, margin) = blob.ellipsoid().inside(&john.ellipsoid, 1e-9)?;
    Ok(RescaledBlob {
        blob,
        contained,
        margin,
        lambda_max,
    })
}

/// `Γ`: the Gaussian `ψ_{W,Y}` whose Wigner matrix is the blob's `G`. With
/// the normal form `(P, L)` this is `W = L²`, `Y = −P`.
pub fn blob_to_gaussian(blob: &QuantumBlob) -> Result<GaussianState> {
    let nf = blob_normal_form(blob)?;
    GaussianState::new(linalg::symmetrize(&(&nf.l * &nf.l)), -nf.p, blob.hbar)
}

/// `Γ⁻¹`: the blob `{z : Gz·z ≤ ħ}` with `G` the Wigner matrix of the state.
pub fn gaussian_to_blob(state: &GaussianState) -> Result<QuantumBlob> {
    QuantumBlob::from_matrix(states::wigner_matrix(state), state.hbar())
}
