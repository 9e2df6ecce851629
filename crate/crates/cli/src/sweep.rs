//! Seeded property suites. Each seed yields one row per property with the
//! measured value, the bound it is compared against, a margin and a verdict.
//!
//! For inequalities the margin is the signed slack (negative means
//! violated); for identities it is `|measured − bound|`.

use std::f64::consts::PI;

use clap::ValueEnum;
use serde::{Serialize, Serializer};
use symplecta::blobs;
use symplecta::capacities;
use symplecta::concentration::{self, HardyRegime, SampledFunction1D};
use symplecta::linalg::{self, Mat};
use symplecta::polar::{self, ConvexBody, EllipsoidBody, Space};
use symplecta::sampling;
use symplecta::states;
use symplecta::symplectic;

use crate::{CliError, CliResult, Context};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Symplectic,
    Polar,
    Blobs,
    States,
    Rs,
    Capacities,
    HzPair,
    Gromov,
    Concentration,
    Hardy,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Symplectic => "symplectic",
            Suite::Polar => "polar",
            Suite::Blobs => "blobs",
            Suite::States => "states",
            Suite::Rs => "rs",
            Suite::Capacities => "capacities",
            Suite::HzPair => "hz-pair",
            Suite::Gromov => "gromov",
            Suite::Concentration => "concentration",
            Suite::Hardy => "hardy",
        }
    }
}

fn verdict<S: Serializer>(pass: &bool, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(if *pass { "pass" } else { "fail" })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub suite: &'static str,
    pub property: String,
    pub seed: u64,
    pub measured: f64,
    pub bound: f64,
    pub margin: f64,
    #[serde(serialize_with = "verdict")]
    pub pass: bool,
}

pub const COLUMNS: [&str; 7] = ["suite", "property", "seed", "measured", "bound", "margin", "pass"];

/// `a..b` and `a..=b` are both inclusive; also a single seed, a comma list,
/// or the empty string.
pub fn parse_seeds(text: &str) -> CliResult<Vec<u64>> {
    let bad = || CliError::Input(format!("invalid seed range {text:?}"));
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    if let Some((a, b)) = text.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        return Ok(if a <= b { (a..=b).collect() } else { Vec::new() });
    }
    text.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
}

pub fn to_csv(rows: &[Row]) -> CliResult<String> {
    let err = |e: csv::Error| CliError::Input(format!("cannot write CSV: {e}"));
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(COLUMNS).map_err(err)?;
    for r in rows {
        w.serialize(r).map_err(err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Input(format!("cannot write CSV: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::Input(e.to_string()))
}

struct Rows<'a> {
    suite: Suite,
    seed: u64,
    tol: f64,
    out: &'a mut Vec<Row>,
}

impl Rows<'_> {
    fn push(&mut self, property: impl Into<String>, measured: f64, bound: f64, margin: f64, pass: bool) {
        self.out.push(Row {
            suite: self.suite.name(),
            property: property.into(),
            seed: self.seed,
            measured,
            bound,
            margin,
            pass,
        });
    }

    /// `measured ≈ bound` within `tol · max(1, |bound|)`.
    fn identity(&mut self, property: &str, measured: f64, bound: f64) {
        let margin = (measured - bound).abs();
        let pass = margin <= self.tol * bound.abs().max(1.0);
        self.push(property, measured, bound, margin, pass);
    }

    fn at_least(&mut self, property: &str, measured: f64, bound: f64) {
        let margin = measured - bound;
        let pass = margin >= -self.tol * bound.abs().max(1.0);
        self.push(property, measured, bound, margin, pass);
    }

    fn at_most(&mut self, property: &str, measured: f64, bound: f64) {
        let margin = bound - measured;
        let pass = margin >= -self.tol * bound.abs().max(1.0);
        self.push(property, measured, bound, margin, pass);
    }

    fn agree(&mut self, property: &str, agrees: bool) {
        let m = if agrees { 1.0 } else { 0.0 };
        self.push(property, m, 1.0, m - 1.0, agrees);
    }
}

pub fn run_suite(suite: Suite, seeds: &[u64], ctx: &Context) -> CliResult<Vec<Row>> {
    let mut out = Vec::new();
    for &seed in seeds {
        let mut rows = Rows {
            suite,
            seed,
            tol: ctx.tol,
            out: &mut out,
        };
        let hbar = ctx.hbar;
        match suite {
            Suite::Symplectic => symplectic_suite(&mut rows, seed)?,
            Suite::Polar => polar_suite(&mut rows, seed, hbar)?,
            Suite::Blobs => blobs_suite(&mut rows, seed, hbar)?,
            Suite::States => states_suite(&mut rows, seed, hbar, ctx.tol)?,
            Suite::Rs => rs_suite(&mut rows, seed, hbar)?,
            Suite::Capacities => capacities_suite(&mut rows, seed, hbar)?,
            Suite::HzPair => hz_pair_suite(&mut rows, seed, hbar)?,
            Suite::Gromov => gromov_suite(&mut rows, seed, ctx.tol)?,
            Suite::Concentration => concentration_suite(&mut rows, seed, hbar, ctx.tol)?,
            Suite::Hardy => hardy_suite(&mut rows, seed, hbar)?,
        }
    }
    Ok(out)
}

fn dim(seed: u64, lo: usize, count: u64) -> usize {
    lo + (seed % count) as usize
}

fn symplectic_suite(r: &mut Rows, seed: u64) -> CliResult<()> {
    let n = dim(seed, 1, 3);
    let s = symplectic::random_symplectic(seed, n, 1.0)?;
    r.identity("membership_residual", s.residual(), 0.0);
    let f = symplectic::pre_iwasawa(&s)?;
    r.identity("pre_iwasawa_reconstruction", f.reconstruction_error, 0.0);
    let eye = Mat::identity(2 * n, 2 * n);
    r.identity(
        "inverse_residual",
        linalg::max_abs(&(s.inverse().matrix() * s.matrix() - eye)),
        0.0,
    );
    let w = symplectic::williamson(&sampling::random_spd(seed, 2 * n, 1.0)?)?;
    r.identity("williamson_residual", w.residual, 0.0);
    Ok(())
}

fn polar_suite(r: &mut Rows, seed: u64, hbar: f64) -> CliResult<()> {
    let n = dim(seed, 1, 4);
    let dirs = sampling::random_directions(seed, n, 16);
    let x: ConvexBody = sampling::random_ellipsoid(seed, Space::Position, n, hbar)?.into();
    let back = x.polar_dual().polar_dual();
    r.identity("ellipsoid_biduality", polar::support_distance(&back, &x, &dirs)?, 0.0);
    let m = polar::mahler_volume(&x)?;
    r.identity("ellipsoid_santalo_equality", m.mahler / m.santalo_bound, 1.0);

    let poly: ConvexBody =
        sampling::random_symmetric_polygon(seed, 3 + (seed % 4) as usize, Space::Position, hbar)?.into();
    let dirs2 = sampling::random_directions(seed, 2, 16);
    let back = poly.polar_dual().polar_dual();
    r.identity("polygon_biduality", polar::support_distance(&back, &poly, &dirs2)?, 0.0);
    let m = polar::mahler_volume(&poly)?;
    r.at_most("polygon_santalo", m.mahler / m.santalo_bound, 1.0);
    r.at_least("polygon_mahler", m.mahler / m.mahler_bound, 1.0);

    let ball: ConvexBody = EllipsoidBody::ball(Space::Position, n, hbar.sqrt(), hbar)?.into();
    let dual = ball.polar_dual().with_space(Space::Position);
    r.identity("ball_self_duality", polar::support_distance(&dual, &ball, &dirs)?, 0.0);
    Ok(())
}

fn blobs_suite(r: &mut Rows, seed: u64, hbar: f64) -> CliResult<()> {
    let n = dim(seed, 1, 3);
    let b = sampling::random_blob(seed, n, hbar)?;
    let pr = blobs::project_blob(&b, 1e-12);
    let lambda = polar::lambda_max_ellipsoids(&pr.x, &pr.p);
    r.at_least("projection_pair", lambda, 1.0);
    let expect = (PI * hbar).powi(n as i32) / (1..=n).map(|k| k as f64).product::<f64>();
    r.identity("volume", b.volume() / expect, 1.0);
    let state = blobs::blob_to_gaussian(&b)?;
    let back = blobs::gaussian_to_blob(&state)?;
    r.identity("gamma_round_trip", linalg::max_abs(&(back.g() - b.g())), 0.0);
    let cov = states::covariance(&state);
    let purity = cov.sigma().determinant() / (hbar / 2.0).powi(2 * n as i32);
    r.identity("purity", purity, 1.0);
    Ok(())
}

fn states_suite(r: &mut Rows, seed: u64, hbar: f64, tol: f64) -> CliResult<()> {
    let n = dim(seed, 1, 3);
    let passing = seed.is_multiple_of(2);
    let cov = sampling::random_covariance(seed, n, hbar, passing)?;
    let v = states::quantum_condition_check(&cov, tol)?;
    r.agree("condition_matches_capacity", v.passes == v.capacity_passes);
    r.agree("condition_matches_construction", v.passes == passing);
    Ok(())
}

fn rs_suite(r: &mut Rows, seed: u64, hbar: f64) -> CliResult<()> {
    let n = dim(seed, 1, 3);
    let cov = sampling::random_covariance(seed, n, hbar, true)?;
    let worst = states::robertson_schrodinger_check(&cov)
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    r.at_least("rs_margin", worst, 0.0);
    Ok(())
}

fn capacities_suite(r: &mut Rows, seed: u64, hbar: f64) -> CliResult<()> {
    let n = dim(seed, 1, 3);
    let m = sampling::random_spd(seed, 2 * n, 1.0)?;
    let e = blobs::PhaseEllipsoid::new(m.clone(), hbar)?;
    let c = capacities::ellipsoid_capacity(&e)?.value;
    // Spectrum of JM is ±iλ_j.
    let jm = linalg::j_matrix(n) * &m;
    let top = jm.complex_eigenvalues().iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    r.identity("ellipsoid_formula", c, PI * hbar / top);
    let b = sampling::random_blob(seed, n, hbar)?;
    r.identity(
        "blob_capacity",
        capacities::ellipsoid_capacity(&b.ellipsoid())?.value,
        PI * hbar,
    );
    Ok(())
}

fn hz_pair_suite(r: &mut Rows, seed: u64, hbar: f64) -> CliResult<()> {
    let (a, b) = sampling::random_interval_pair(seed, hbar);
    let x: ConvexBody = polar::PolytopeBody::interval(Space::Position, a, hbar).into();
    let p: ConvexBody = polar::PolytopeBody::interval(Space::Momentum, b, hbar).into();
    let c = capacities::hz_product_pair(&x, &p)?.value;
    // For intervals λ_max = ab/ħ, so 4λ_maxħ is the rectangle's area.
    r.identity("product_formula", c, 4.0 * a * b);
    Ok(())
}

fn gromov_suite(r: &mut Rows, seed: u64, tol: f64) -> CliResult<()> {
    let n = dim(seed, 2, 2);
    let s = symplectic::random_symplectic(seed, n, 1.0)?;
    for j in 1..=n {
        let a = capacities::projection_area_check(&s, 1.0, j, tol)?;
        r.at_least(&format!("plane_{j}_area"), a.area, a.bound);
    }
    Ok(())
}

fn concentration_suite(r: &mut Rows, seed: u64, hbar: f64, tol: f64) -> CliResult<()> {
    let m = (seed % 6) as usize;
    let f = SampledFunction1D::hermite(m, hbar)?;
    let widths = sampling::random_uniform(seed, 2, 0.3, 4.0);
    let rep = concentration::concentration_report(&f, widths[0] * hbar.sqrt(), widths[1] * hbar.sqrt(), tol)?;
    r.at_least("donoho_stark", rep.ds.lhs, rep.ds.rhs);
    Ok(())
}

fn hardy_suite(r: &mut Rows, seed: u64, hbar: f64) -> CliResult<()> {
    let n = dim(seed, 1, 3);
    let a = sampling::random_spd(2 * seed, n, 1.0)?;
    let b = sampling::random_spd(2 * seed + 1, n, 1.0)?;
    let h = concentration::hardy_check(&a, &b, hbar)?;
    let x = EllipsoidBody::new(Space::Position, a, hbar)?;
    let p = EllipsoidBody::new(Space::Momentum, b, hbar)?;
    let pair = polar::quantum_pair_check(&x.into(), &p.into())?;
    r.agree("regime_matches_pair", (h.regime != HardyRegime::Fail) == pair.holds);
    Ok(())
}
