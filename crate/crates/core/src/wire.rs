//! JSON-facing records and their conversions to library types. Matrices
//! travel as row lists; `n` fields are validated against the rows.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blobs::{PhaseEllipsoid, QuantumBlob};
use crate::concentration::SampledFunction1D;
use crate::error::{Error, Result};
use crate::linalg::{self, Mat, Vector};
use crate::polar::{ConvexBody, EllipsoidBody, PolytopeBody, Space};
use crate::states::{CovarianceMatrix, GaussianState};
use crate::symplectic::SymplecticMatrix;

pub type Rows = Vec<Vec<f64>>;

fn sized(rows: &Rows, side: usize, what: &str) -> Result<Mat> {
    let m = linalg::from_rows(rows)?;
    if m.nrows() != side || m.ncols() != side {
        return Err(Error::Dimension(format!(
            "{what}: expected {side}×{side}, got {}×{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m)
}

/// A square matrix; `n` is its side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub rows: Rows,
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<Mat> {
        sized(&self.rows, self.n, "matrix")
    }

    pub fn to_symplectic(&self, tol: f64) -> Result<SymplecticMatrix> {
        SymplecticMatrix::with_tolerance(self.to_matrix()?, tol)
    }
}

impl From<&Mat> for MatrixJson {
    fn from(m: &Mat) -> Self {
        Self {
            n: m.nrows(),
            rows: linalg::to_rows(m),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BodyKind {
    Ellipsoid,
    Polytope,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BodyJson {
    pub kind: BodyKind,
    pub space: Space,
    pub hbar: f64,
    #[serde(rename = "Q", default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Rows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Rows>,
}

impl BodyJson {
    pub fn to_body(&self) -> Result<ConvexBody> {
        match self.kind {
            BodyKind::Ellipsoid => {
                let q = self
                    .q
                    .as_ref()
                    .ok_or_else(|| Error::InvalidArgument("ellipsoid body needs \"Q\"".into()))?;
                let q = linalg::from_rows(q)?;
                Ok(EllipsoidBody::new(self.space, q, self.hbar)?.into())
            }
            BodyKind::Polytope => {
                let v = self
                    .vertices
                    .as_ref()
                    .ok_or_else(|| Error::InvalidArgument("polytope body needs \"vertices\"".into()))?;
                let points: Vec<Vector> = v.iter().map(|r| Vector::from_column_slice(r)).collect();
                Ok(PolytopeBody::from_vertices(self.space, &points, self.hbar)?.into())
            }
        }
    }
}

impl From<&ConvexBody> for BodyJson {
    fn from(b: &ConvexBody) -> Self {
        match b {
            ConvexBody::Ellipsoid(e) => Self {
                kind: BodyKind::Ellipsoid,
                space: e.space(),
                hbar: e.hbar(),
                q: Some(linalg::to_rows(e.q())),
                vertices: None,
            },
            ConvexBody::Polytope(p) => Self {
                kind: BodyKind::Polytope,
                space: p.space(),
                hbar: p.hbar(),
                q: None,
                vertices: Some(p.vertices().iter().map(|v| v.iter().copied().collect()).collect()),
            },
        }
    }
}

/// A quantum blob `{Gz·z ≤ ħ}`; `G` is `2n × 2n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlobJson {
    pub n: usize,
    pub hbar: f64,
    #[serde(rename = "G")]
    pub g: Rows,
}

impl BlobJson {
    pub fn to_blob(&self) -> Result<QuantumBlob> {
        QuantumBlob::from_matrix(sized(&self.g, 2 * self.n, "G")?, self.hbar)
    }
}

impl From<&QuantumBlob> for BlobJson {
    fn from(b: &QuantumBlob) -> Self {
        Self {
            n: b.n(),
            hbar: b.hbar(),
            g: linalg::to_rows(b.g()),
        }
    }
}

/// A phase-space ellipsoid `{Mz·z ≤ ħ}`; `M` is `2n × 2n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseEllipsoidJson {
    pub n: usize,
    pub hbar: f64,
    #[serde(rename = "M")]
    pub m: Rows,
}

impl PhaseEllipsoidJson {
    pub fn to_ellipsoid(&self) -> Result<PhaseEllipsoid> {
        PhaseEllipsoid::new(sized(&self.m, 2 * self.n, "M")?, self.hbar)
    }
}

impl From<&PhaseEllipsoid> for PhaseEllipsoidJson {
    fn from(e: &PhaseEllipsoid) -> Self {
        Self {
            n: e.n(),
            hbar: e.hbar(),
            m: linalg::to_rows(e.matrix()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub n: usize,
    pub hbar: f64,
    #[serde(rename = "W")]
    pub w: Rows,
    #[serde(rename = "Y")]
    pub y: Rows,
}

impl StateJson {
    pub fn to_state(&self) -> Result<GaussianState> {
        GaussianState::new(sized(&self.w, self.n, "W")?, sized(&self.y, self.n, "Y")?, self.hbar)
    }
}

impl From<&GaussianState> for StateJson {
    fn from(s: &GaussianState) -> Self {
        Self {
            n: s.n(),
            hbar: s.hbar(),
            w: linalg::to_rows(s.w()),
            y: linalg::to_rows(s.y()),
        }
    }
}

/// A covariance matrix; `Sigma` is `2n × 2n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceJson {
    pub n: usize,
    pub hbar: f64,
    #[serde(rename = "Sigma")]
    pub sigma: Rows,
}

impl CovarianceJson {
    pub fn to_covariance(&self) -> Result<CovarianceMatrix> {
        CovarianceMatrix::new(sized(&self.sigma, 2 * self.n, "Sigma")?, self.hbar)
    }
}

impl From<&CovarianceMatrix> for CovarianceJson {
    fn from(c: &CovarianceMatrix) -> Self {
        Self {
            n: c.n(),
            hbar: c.hbar(),
            sigma: linalg::to_rows(c.sigma()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionJson {
    pub hbar: f64,
    #[serde(rename = "L")]
    pub half_width: f64,
    pub samples_re: Vec<f64>,
    pub samples_im: Vec<f64>,
}

impl FunctionJson {
    pub fn to_function(&self) -> Result<SampledFunction1D> {
        if self.samples_re.len() != self.samples_im.len() {
            return Err(Error::Dimension("samples_re and samples_im differ in length".into()));
        }
        let values = self
            .samples_re
            .iter()
            .zip(&self.samples_im)
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect();
        SampledFunction1D::new(self.half_width, values, self.hbar)
    }
}

impl From<&SampledFunction1D> for FunctionJson {
    fn from(f: &SampledFunction1D) -> Self {
        Self {
            hbar: f.hbar(),
            half_width: f.half_width(),
            samples_re: f.values().iter().map(|v| v.re).collect(),
            samples_im: f.values().iter().map(|v| v.im).collect(),
        }
    }
}
