//! One-dimensional ħ-Fourier analysis on a uniform grid, concentration
//! fractions and the Donoho–Stark, polar and Hardy bounds.
//!
//! The grid on `[−L, L)` is `x_k = −L + k·2L/N`, `k = 0..N`. Its transform
//! lives on the grid of the same shape with half-width `πħN/2L`, so that
//! transforming twice returns to the original grid.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::polar::{self, EllipsoidBody, Space};
use crate::tol;

/// Samples are rejected by [`hbar_fourier`] when either end exceeds this.
pub const BOUNDARY_GUARD: f64 = 1e-10;
pub const DEFAULT_POINTS: usize = 4096;
pub const DEFAULT_HALF_WIDTH_FACTOR: f64 = 12.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction1D {
    half_width: f64,
    values: Vec<Complex64>,
    hbar: f64,
}

impl SampledFunction1D {
    pub fn new(half_width: f64, values: Vec<Complex64>, hbar: f64) -> Result<Self> {
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "half-width must be positive, got {half_width}"
            )));
        }
        if !(hbar > 0.0) {
            return Err(Error::InvalidArgument(format!("hbar must be positive, got {hbar}")));
        }
        if values.len() < 4 || !values.len().is_multiple_of(2) {
            return Err(Error::InsufficientGrid(format!(
                "need an even number of at least 4 samples, got {}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite sample".into()));
        }
        Ok(Self {
            half_width,
            values,
            hbar,
        })
    }

    /// Samples `f` on `N` points of `[−L, L)`.
    pub fn from_fn(half_width: f64, points: usize, hbar: f64, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let h = 2.0 * half_width / points as f64;
        let values = (0..points).map(|k| f(-half_width + k as f64 * h)).collect();
        Self::new(half_width, values, hbar)
    }

    /// `ψ_{W,Y}(x) = (W/πħ)^{1/4} exp(−(W + iY)x²/2ħ)` on the default grid.
    pub fn gaussian(w: f64, y: f64, hbar: f64) -> Result<Self> {
        if !(w > 0.0) {
            return Err(Error::InvalidArgument(format!("W must be positive, got {w}")));
        }
        let z = Complex64::new(w, y);
        let zinv = z.inv();
        let scale = (hbar / w).sqrt().max((hbar / zinv.re).sqrt());
        let norm = (w / (PI * hbar)).powf(0.25);
        Self::from_fn(DEFAULT_HALF_WIDTH_FACTOR * scale, DEFAULT_POINTS, hbar, |x| {
            (-z * x * x / (2.0 * hbar)).exp() * norm
        })
    }

    /// The `m`-th normalized Hermite function on the default grid.
    pub fn hermite(m: usize, hbar: f64) -> Result<Self> {
        let scale = (hbar * (2 * m + 1) as f64).sqrt();
        Self::from_fn(DEFAULT_HALF_WIDTH_FACTOR * scale, DEFAULT_POINTS, hbar, |x| {
            Complex64::new(hermite_function(m, x, hbar), 0.0)
        })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_width / self.values.len() as f64
    }

    pub fn grid(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.len()).map(|k| -self.half_width + k as f64 * h).collect()
    }

    /// Trapezoid `‖f‖²` on the periodic grid.
    pub fn norm_sq(&self) -> f64 {
        self.step() * self.values.iter().map(Complex64::norm_sqr).sum::<f64>()
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm_sq().sqrt();
        if !(norm > 0.0) {
            return Err(Error::Degenerate("zero function".into()));
        }
        Ok(Self {
            values: self.values.iter().map(|v| v / norm).collect(),
            ..self.clone()
        })
    }

    /// `f(−x)` on the same grid (`x_k ↦ x_{N−k}`, with `x_N ≡ x_0`).
    pub fn reflected(&self) -> Self {
        let n = self.len();
        Self {
            values: (0..n).map(|k| self.values[(n - k) % n]).collect(),
            ..self.clone()
        }
    }

    /// Largest sample modulus difference against another function on the same grid.
    pub fn max_difference(&self, other: &Self) -> Result<f64> {
        if self.len() != other.len() || (self.half_width - other.half_width).abs() > 1e-12 * self.half_width {
            return Err(Error::Dimension("functions live on different grids".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// `h_m(x) = (πħ)^{−1/4} (2^m m!)^{−1/2} H_m(x/√ħ) e^{−x²/2ħ}` by the stable
/// three-term recurrence.
pub fn hermite_function(m: usize, x: f64, hbar: f64) -> f64 {
    let u = x / hbar.sqrt();
    let mut prev = 0.0;
    let mut cur = (PI * hbar).powf(-0.25) * (-u * u / 2.0).exp();
    for k in 0..m {
        let next = (2.0 / (k + 1) as f64).sqrt() * u * cur - (k as f64 / (k + 1) as f64).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `f̂(p) = (2πħ)^{−1/2} ∫ e^{−ipx/ħ} f(x) dx` by FFT.
pub fn hbar_fourier(f: &SampledFunction1D) -> Result<SampledFunction1D> {
    let n = f.len();
    let edge = f.values[0].norm().max(f.values[n - 1].norm());
    if edge > BOUNDARY_GUARD {
        return Err(Error::InsufficientGrid(format!(
            "boundary sample {edge:e} exceeds {BOUNDARY_GUARD:e}; widen the grid"
        )));
    }
    let hbar = f.hbar;
    let h = f.step();
    let lp = PI * hbar * n as f64 / (2.0 * f.half_width);
    let sign = |k: usize| if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut buf: Vec<Complex64> = f.values.iter().enumerate().map(|(k, v)| v * sign(k)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    // e^{−ip_m x_k/ħ} = (−1)^{N/2 + m + k} e^{−2πimk/N}.
    let scale = h / (2.0 * PI * hbar).sqrt() * sign(n / 2);
    let values = buf.into_iter().enumerate().map(|(m, v)| v * scale * sign(m)).collect();
    SampledFunction1D::new(lp, values, hbar)
}

/// Integral of `|f|²` over `[−a, a]`, exact for the piecewise-quintic
/// interpolant of the samples (six nodes per cell).
fn mass_on(f: &SampledFunction1D, a: f64) -> f64 {
    const NODES: [f64; 6] = [-2.0, -1.0, 0.0, 1.0, 2.0, 3.0];
    let n = f.len();
    let h = f.step();
    let l = f.half_width;
    let g: Vec<f64> = f.values.iter().map(Complex64::norm_sqr).collect();
    let at = |k: isize| g[k.rem_euclid(n as isize) as usize];
    let first = (((l - a) / h).floor() as isize).max(0);
    let last = ((((l + a) / h).ceil()) as isize).min(n as isize);
    let r = (0.6f64).sqrt() / 2.0;
    let gauss = [(0.5 - r, 5.0 / 18.0), (0.5, 8.0 / 18.0), (0.5 + r, 5.0 / 18.0)];
    let lagrange = |t: f64, vals: &[f64; 6]| -> f64 {
        let mut acc = 0.0;
        for (i, &xi) in NODES.iter().enumerate() {
            let mut w = 1.0;
            for (j, &xj) in NODES.iter().enumerate() {
                if i != j {
                    w *= (t - xj) / (xi - xj);
                }
            }
            acc += w * vals[i];
        }
        acc
    };
    let mut total = 0.0;
    for k in first..last {
        let x0 = -l + k as f64 * h;
        let lo = x0.max(-a);
        let hi = (x0 + h).min(a);
        if hi <= lo {
            continue;
        }
        let vals = [at(k - 2), at(k - 1), at(k), at(k + 1), at(k + 2), at(k + 3)];
        let (tl, th) = ((lo - x0) / h, (hi - x0) / h);
        let s: f64 = gauss
            .iter()
            .map(|&(q, w)| w * lagrange(tl + q * (th - tl), &vals))
            .sum();
        total += s * (hi - lo);
    }
    total
}

/// `ε` with `∫_{−a}^{a} |f|² = (1 − ε²) ‖f‖²`, clamped to `[0, 1]`.
pub fn concentration(f: &SampledFunction1D, a: f64) -> Result<f64> {
    if !(a >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "interval half-width must be non-negative, got {a}"
        )));
    }
    if a > f.half_width * (1.0 + 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "interval [−{a}, {a}] exceeds the grid [−{}, {}]",
            f.half_width, f.half_width
        )));
    }
    let total = f.norm_sq();
    if !(total > 0.0) {
        return Err(Error::Degenerate("zero function".into()));
    }
    if a >= f.half_width {
        return Ok(0.0);
    }
    let inside = mass_on(f, a) / total;
    Ok((1.0 - inside).clamp(0.0, 1.0).sqrt())
}

/// Concentration of `f` and `f̂` on symmetric intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub eps_x: f64,
    pub eps_p: f64,
    pub c_x: f64,
    pub c_p: f64,
    pub ds: DonohoStark,
}

pub fn concentration_report(f: &SampledFunction1D, c_x: f64, c_p: f64, tol: f64) -> Result<ConcentrationReport> {
    let f = f.normalized()?;
    let eps_x = concentration(&f, c_x)?;
    let eps_p = concentration(&hbar_fourier(&f)?, c_p)?;
    let ds = donoho_stark_check(eps_x, eps_p, &[c_x], &[c_p], f.hbar, tol)?;
    Ok(ConcentrationReport {
        eps_x,
        eps_p,
        c_x,
        c_p,
        ds,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DonohoStark {
    /// `Vol(C_X × C_P)`.
    pub lhs: f64,
    /// `(2πħ)ⁿ (1 − ε_x − ε_p)²`.
    pub rhs: f64,
    pub consistent: bool,
    /// `ε_x + ε_p ≥ 1`: the bound says nothing.
    pub vacuous: bool,
}

/// Boxes are given by their half-widths per coordinate.
pub fn donoho_stark_check(
    eps_x: f64,
    eps_p: f64,
    c_x: &[f64],
    c_p: &[f64],
    hbar: f64,
    tol: f64,
) -> Result<DonohoStark> {
    if c_x.len() != c_p.len() || c_x.is_empty() {
        return Err(Error::Dimension(
            "C_X and C_P must be boxes of the same dimension".into(),
        ));
    }
    let n = c_x.len() as i32;
    let lhs: f64 = c_x.iter().chain(c_p).map(|a| 2.0 * a).product();
    let slack = 1.0 - eps_x - eps_p;
    let vacuous = slack <= 0.0;
    let rhs = if vacuous {
        0.0
    } else {
        (2.0 * PI * hbar).powi(n) * slack * slack
    };
    Ok(DonohoStark {
        lhs,
        rhs,
        consistent: lhs >= rhs - tol,
        vacuous,
    })
}

/// `Γ(n/2 + 1)²` from factorials: `k!²` for `n = 2k`, `((2k+1)!!)² π / 4^{k+1}`
/// for `n = 2k + 1`.
pub fn gamma_half_sq(n: usize) -> f64 {
    let k = n / 2;
    if n.is_multiple_of(2) {
        let f: f64 = (1..=k).map(|i| i as f64).product();
        f * f
    } else {
        let df: f64 = (0..=k).map(|i| (2 * i + 1) as f64).product();
        df * df * PI / 4f64.powi(k as i32 + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarConcentration {
    /// `(2πħ)ⁿ (1 − ε_x − ε_p)²`.
    pub lhs: f64,
    /// `(πħ)ⁿ / Γ(n/2 + 1)²`.
    pub rhs: f64,
    pub consistent: bool,
    pub vacuous: bool,
    /// Large-`n` form of `rhs`: `(1/πn)(2eπħ/n)ⁿ`.
    pub stirling_envelope: f64,
    /// `1 − √(rhs / (2πħ)ⁿ)`, the least `ε_x + ε_p` compatible with the bound.
    pub eps_sum_floor: f64,
}

pub fn polar_concentration_bound(n: usize, hbar: f64, eps_x: f64, eps_p: f64, tol: f64) -> Result<PolarConcentration> {
    if n == 0 {
        return Err(Error::Dimension("n must be positive".into()));
    }
    if !(hbar > 0.0) {
        return Err(Error::InvalidArgument(format!("hbar must be positive, got {hbar}")));
    }
    let nf = n as f64;
    let slack = 1.0 - eps_x - eps_p;
    let vacuous = slack <= 0.0;
    let lhs = if vacuous {
        0.0
    } else {
        (2.0 * PI * hbar).powi(n as i32) * slack * slack
    };
    // ratio = rhs / (2πħ)ⁿ = 2⁻ⁿ / Γ(n/2+1)², taken through logs for large n.
    let (rhs, ratio) = if n <= 100 {
        let rhs = (PI * hbar).powi(n as i32) / gamma_half_sq(n);
        (rhs, 0.5f64.powi(n as i32) / gamma_half_sq(n))
    } else {
        let lg = statrs::function::gamma::ln_gamma(nf / 2.0 + 1.0);
        let rhs = (nf * (PI * hbar).ln() - 2.0 * lg).exp();
        (rhs, (-nf * 2f64.ln() - 2.0 * lg).exp())
    };
    let stirling_envelope = (2.0 * std::f64::consts::E * PI * hbar / nf).powf(nf) / (PI * nf);
    Ok(PolarConcentration {
        lhs,
        rhs,
        consistent: lhs <= rhs + tol,
        vacuous,
        stirling_envelope,
        eps_sum_floor: (1.0 - ratio.sqrt()).clamp(0.0, 1.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HardyRegime {
    /// Some eigenvalue of `AB` exceeds 1: only `ψ = 0` obeys both bounds.
    Fail,
    /// `AB` has all eigenvalues 1: `ψ` is a multiple of `e^{−Ax·x/2ħ}`.
    GaussianUnique,
    /// Eigenvalues at most 1, not all equal to 1.
    HermiteFamily,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardyReport {
    /// Spectrum of `A^{1/2} B A^{1/2}`, ascending.
    pub eigs_ab: Vec<f64>,
    pub regime: HardyRegime,
    /// `({Ax·x ≤ ħ}, {Bp·p ≤ ħ})` is a quantum polar pair.
    pub polar_equivalent: bool,
}

/// Classifies the decay pair `|ψ| ≤ Ce^{−Ax·x/2ħ}`, `|ψ̂| ≤ Ce^{−Bp·p/2ħ}` and
/// checks it against the polar-pair test on `X_A`, `P_B`.
pub fn hardy_check(a: &Mat, b: &Mat, hbar: f64) -> Result<HardyReport> {
    linalg::require_spd(a)?;
    linalg::require_spd(b)?;
    if a.shape() != b.shape() {
        return Err(Error::Dimension("A and B must have the same size".into()));
    }
    let eigs = linalg::eig_product(a, b);
    let top = eigs.max();
    // Same threshold as the pair test: λ_max = 1/√top ≥ 1 − tol.
    let regime = if 1.0 / top.sqrt() < 1.0 - tol::PAIR {
        HardyRegime::Fail
    } else if eigs.iter().all(|&e| (e - 1.0).abs() <= tol::QUANTUM) {
        HardyRegime::GaussianUnique
    } else {
        HardyRegime::HermiteFamily
    };
    let x = EllipsoidBody::new(Space::Position, a.clone(), hbar)?;
    let p = EllipsoidBody::new(Space::Momentum, b.clone(), hbar)?;
    let pair = polar::quantum_pair_check(&x.into(), &p.into())?;
    if pair.holds != (regime != HardyRegime::Fail) {
        return Err(Error::Internal(format!(
            "Hardy regime {regime:?} disagrees with pair test (λ_max = {})",
            pair.lambda_max
        )));
    }
    Ok(HardyReport {
        eigs_ab: eigs.iter().copied().collect(),
        regime,
        polar_equivalent: pair.holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_gaussian_is_fourier_invariant() {
        let f = SampledFunction1D::gaussian(1.0, 0.0, 1.0).unwrap();
        let g = hbar_fourier(&f).unwrap();
        assert!((g.half_width() - f.half_width()).abs() > 1.0);
        let direct = SampledFunction1D::from_fn(g.half_width(), g.len(), 1.0, |p| {
            Complex64::new(PI.powf(-0.25) * (-p * p / 2.0).exp(), 0.0)
        })
        .unwrap();
        assert!(g.max_difference(&direct).unwrap() < 1e-6);
    }

    #[test]
    fn phase_is_right_for_any_even_size() {
        for points in [1022, 1024] {
            let f = SampledFunction1D::from_fn(12.0, points, 1.0, |x| Complex64::new(hermite_function(1, x, 1.0), 0.0))
                .unwrap();
            let g = hbar_fourier(&f).unwrap();
            let expect = SampledFunction1D::from_fn(g.half_width(), points, 1.0, |p| {
                Complex64::new(0.0, -hermite_function(1, p, 1.0))
            })
            .unwrap();
            assert!(g.max_difference(&expect).unwrap() < 1e-8, "N = {points}");
        }
    }

    #[test]
    fn double_transform_is_parity() {
        let f = SampledFunction1D::hermite(3, 1.0).unwrap();
        let ff = hbar_fourier(&hbar_fourier(&f).unwrap()).unwrap();
        assert!(ff.max_difference(&f.reflected()).unwrap() < 1e-10);
    }

    #[test]
    fn concentration_edges() {
        let f = SampledFunction1D::gaussian(1.0, 0.0, 1.0).unwrap();
        assert_eq!(concentration(&f, f.half_width()).unwrap(), 0.0);
        assert_eq!(concentration(&f, 0.0).unwrap(), 1.0);
        assert!(concentration(&f, 2.0 * f.half_width()).is_err());
    }

    #[test]
    fn narrow_grid_rejected() {
        let f = SampledFunction1D::from_fn(1.0, 64, 1.0, |x| Complex64::new((-x * x).exp(), 0.0)).unwrap();
        assert!(matches!(hbar_fourier(&f), Err(Error::InsufficientGrid(_))));
    }

    #[test]
    fn ds_examples() {
        let r = donoho_stark_check(0.3966, 0.3966, &[1.0], &[1.0], 1.0, 1e-9).unwrap();
        assert!(r.consistent && (r.lhs - 4.0).abs() < 1e-15);
        assert!((r.rhs - 2.0 * PI * 0.2068f64.powi(2)).abs() < 1e-12);
        assert!(donoho_stark_check(0.6, 0.5, &[1.0], &[1.0], 1.0, 1e-9).unwrap().vacuous);
        assert!(
            !donoho_stark_check(0.0, 0.0, &[1.0], &[1.0], 1.0, 1e-9)
                .unwrap()
                .consistent
        );
    }

    #[test]
    fn polar_bound_examples() {
        let r = polar_concentration_bound(1, 1.0, 0.0, 0.0, 1e-9).unwrap();
        assert_eq!(r.rhs, 4.0);
        assert!(!r.consistent && (r.lhs - 2.0 * PI).abs() < 1e-15);
        let r = polar_concentration_bound(20, 1.0, 0.0, 0.0, 1e-9).unwrap();
        assert!(r.eps_sum_floor > 1.0 - 1e-9);
        let big = polar_concentration_bound(150, 1.0, 0.5, 0.5, 1e-9).unwrap();
        assert!(big.vacuous && big.rhs.is_finite());
    }

    #[test]
    fn hardy_examples() {
        let id = Mat::identity(2, 2);
        let r = hardy_check(&id, &id, 1.0).unwrap();
        assert_eq!(r.regime, HardyRegime::GaussianUnique);
        let r = hardy_check(&Mat::from_element(1, 1, 2.0), &Mat::from_element(1, 1, 1.0), 1.0).unwrap();
        assert_eq!(r.regime, HardyRegime::Fail);
        assert!(!r.polar_equivalent);
        let a = Mat::from_diagonal(&linalg::Vector::from_row_slice(&[1.0, 4.0]));
        let b = Mat::from_diagonal(&linalg::Vector::from_row_slice(&[1.0, 0.125]));
        let r = hardy_check(&a, &b, 1.0).unwrap();
        assert_eq!(r.regime, HardyRegime::HermiteFamily);
        assert!((r.eigs_ab[0] - 0.5).abs() < 1e-14 && (r.eigs_ab[1] - 1.0).abs() < 1e-14);
    }
}
