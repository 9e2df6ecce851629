//! Seeded generators of test instances. Every function is a pure function of
//! its seed; different generators draw from different ChaCha streams, so the
//! same seed used twice yields unrelated instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::blobs::QuantumBlob;
use crate::error::{Error, Result};
use crate::linalg::{Mat, Vector};
use crate::polar::{EllipsoidBody, PolytopeBody, Space};
use crate::states::CovarianceMatrix;
use crate::symplectic::{self, cayley, SymplecticMatrix};

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn random_orthogonal(r: &mut ChaCha8Rng, n: usize) -> Mat {
    let mut k = Mat::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = r.random_range(-2.0..=2.0);
            k[(i, j)] = v;
            k[(j, i)] = -v;
        }
    }
    cayley(&k)
}

fn spd_from(r: &mut ChaCha8Rng, n: usize, spread: f64) -> Mat {
    let o = random_orthogonal(r, n);
    let d = Vector::from_iterator(n, (0..n).map(|_| (spread * r.random_range(-1.0..=1.0)).exp()));
    let m = &o * Mat::from_diagonal(&d) * o.transpose();
    (&m + m.transpose()) * 0.5
}

/// SPD matrix with eigenvalues in `[e^{−spread}, e^{spread}]`.
pub fn random_spd(seed: u64, n: usize, spread: f64) -> Result<Mat> {
    if n == 0 {
        return Err(Error::Dimension("n must be positive".into()));
    }
    Ok(spd_from(&mut rng(seed, 1), n, spread))
}

pub fn random_ellipsoid(seed: u64, space: Space, n: usize, hbar: f64) -> Result<EllipsoidBody> {
    let q = spd_from(&mut rng(seed, 2), n.max(1), 1.0);
    EllipsoidBody::new(space, q * hbar, hbar)
}

/// Centrally symmetric polygon with `2k` vertices at distinct angles and
/// radii in `[0.5, 2]`.
pub fn random_symmetric_polygon(seed: u64, k: usize, space: Space, hbar: f64) -> Result<PolytopeBody> {
    if k < 2 {
        return Err(Error::InvalidArgument("need at least two vertex pairs".into()));
    }
    let mut r = rng(seed, 3);
    let offset = r.random_range(0.0..std::f64::consts::PI);
    let step = std::f64::consts::PI / k as f64;
    let mut points = Vec::with_capacity(2 * k);
    for i in 0..k {
        let theta = offset + step * (i as f64 + r.random_range(0.1..0.9));
        let rad = r.random_range(0.5..2.0);
        let v = Vector::from_row_slice(&[rad * theta.cos(), rad * theta.sin()]);
        points.push(-&v);
        points.push(v);
    }
    PolytopeBody::from_vertices(space, &points, hbar)
}

/// Random half-widths `a, b` of an interval pair `([−a, a], [−b, b])` with
/// `ab ≥ ħ`. Every fourth seed is saturated, `ab = ħ`.
pub fn random_interval_pair(seed: u64, hbar: f64) -> (f64, f64) {
    let mut r = rng(seed, 4);
    let a = r.random_range(0.2..3.0);
    let lambda = if seed.is_multiple_of(4) {
        1.0
    } else {
        r.random_range(1.0..4.0)
    };
    (a, lambda * hbar / a)
}

pub fn random_blob(seed: u64, n: usize, hbar: f64) -> Result<QuantumBlob> {
    QuantumBlob::from_symplectic(&symplectic::random_symplectic(seed, n, 1.0)?, hbar)
}

/// `Σ = (ħ/2) S diag(ν, ν) Sᵀ` with symplectic spectrum `(ħ/2)ν`. When
/// `passing`, every `ν ≥ 1`; otherwise the smallest `ν` lies in `[0.2, 0.9]`.
pub fn random_covariance(seed: u64, n: usize, hbar: f64, passing: bool) -> Result<CovarianceMatrix> {
    let s: SymplecticMatrix = symplectic::random_symplectic(seed, n, 0.7)?;
    let mut r = rng(seed, 5);
    let mut nu: Vec<f64> = (0..n).map(|_| r.random_range(1.0..3.0)).collect();
    if !passing {
        nu[0] = r.random_range(0.2..0.9);
    }
    let mut diag = nu.clone();
    diag.extend_from_slice(&nu);
    let d = Mat::from_diagonal(&Vector::from_vec(diag));
    let sigma = s.matrix() * d * s.matrix().transpose() * (hbar / 2.0);
    CovarianceMatrix::new((&sigma + sigma.transpose()) * 0.5, hbar)
}

/// `k` uniform draws from `[lo, hi)`.
pub fn random_uniform(seed: u64, k: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mut r = rng(seed, 6);
    (0..k).map(|_| r.random_range(lo..hi)).collect()
}

/// `k` unit vectors of `ℝⁿ`: the coordinate axes first, then seeded
/// Gaussian directions.
pub fn random_directions(seed: u64, n: usize, k: usize) -> Vec<Vector> {
    let mut r = rng(seed, 7);
    let mut out: Vec<Vector> = (0..n.min(k))
        .map(|i| Vector::from_fn(n, |j, _| f64::from(u8::from(i == j))))
        .collect();
    while out.len() < k {
        let v = Vector::from_fn(n, |_, _| r.sample::<f64, _>(StandardNormal));
        let norm = v.norm();
        if norm > 1e-6 {
            out.push(v / norm);
        }
    }
    out
}
