//! Centered symmetric convex bodies, `ħ`-polar duality, Mahler volumes and
//! quantum-polar-pair certification.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::hull;
use crate::linalg::{self, Mat, Vector};
use crate::tol;

/// Which copy of `ℝⁿ` a body lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Space {
    #[serde(rename = "x")]
    Position,
    #[serde(rename = "p")]
    Momentum,
}

impl Space {
    pub fn dual(self) -> Space {
        match self {
            Space::Position => Space::Momentum,
            Space::Momentum => Space::Position,
        }
    }
}

/// `{u : Qu·u ≤ ħ}` with `Q` symmetric positive definite.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipsoidBody {
    space: Space,
    q: Mat,
    hbar: f64,
}

impl EllipsoidBody {
    pub fn new(space: Space, q: Mat, hbar: f64) -> Result<Self> {
        check_hbar(hbar)?;
        linalg::require_spd(&q)?;
        Ok(Self {
            space,
            q: linalg::symmetrize(&q),
            hbar,
        })
    }

    /// The ball of radius `r`.
    pub fn ball(space: Space, n: usize, r: f64, hbar: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
        }
        Self::new(space, Mat::identity(n, n) * (hbar / (r * r)), hbar)
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn q(&self) -> &Mat {
        &self.q
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn dim(&self) -> usize {
        self.q.nrows()
    }

    /// Shape matrix normalized to level one: `{u : (Q/ħ)u·u ≤ 1}`.
    pub fn unit_form(&self) -> Mat {
        &self.q / self.hbar
    }

    pub fn volume(&self) -> f64 {
        ball_volume(self.dim(), self.hbar.sqrt()) / self.q.determinant().sqrt()
    }
}

/// A centrally symmetric polytope held in both vertex and halfspace form.
/// Halfspaces are `a · u ≤ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolytopeBody {
    space: Space,
    vertices: Vec<Vector>,
    normals: Vec<Vector>,
    hbar: f64,
}

impl PolytopeBody {
    /// Builds the symmetric hull of `points ∪ −points`. Non-extreme points are
    /// dropped.
    pub fn from_vertices(space: Space, points: &[Vector], hbar: f64) -> Result<Self> {
        check_hbar(hbar)?;
        let d = points.first().map_or(0, |p| p.len());
        if d == 0 || points.iter().any(|p| p.len() != d) {
            return Err(Error::Dimension(
                "polytope vertices must share one positive dimension".into(),
            ));
        }
        let mut sym: Vec<Vector> = Vec::with_capacity(2 * points.len());
        for p in points {
            for cand in [p.clone(), -p] {
                if !sym.iter().any(|q| (q - &cand).norm() <= 1e-12 * cand.norm().max(1.0)) {
                    sym.push(cand);
                }
            }
        }
        if d == 1 {
            let a = sym.iter().map(|p| p[0].abs()).fold(0.0, f64::max);
            if !(a > 0.0) {
                return Err(Error::Degenerate("interval of zero length".into()));
            }
            return Ok(Self::interval(space, a, hbar));
        }
        let facets = hull::facets(&sym)?;
        let keep = hull::extreme_points(&sym, &facets);
        Ok(Self {
            space,
            vertices: keep.into_iter().map(|i| sym[i].clone()).collect(),
            normals: facets.into_iter().map(|f| f.normal).collect(),
            hbar,
        })
    }

    pub fn interval(space: Space, half_width: f64, hbar: f64) -> Self {
        let v = |x: f64| Vector::from_element(1, x);
        Self {
            space,
            vertices: vec![v(half_width), v(-half_width)],
            normals: vec![v(1.0 / half_width), v(-1.0 / half_width)],
            hbar,
        }
    }

    /// Axis-aligned box `∏ [−wᵢ, wᵢ]`.
    pub fn cuboid(space: Space, half_widths: &[f64], hbar: f64) -> Result<Self> {
        check_hbar(hbar)?;
        let d = half_widths.len();
        if d == 0 || half_widths.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::Degenerate("box half-widths must be positive".into()));
        }
        let vertices = (0..1usize << d)
            .map(|mask| {
                Vector::from_iterator(
                    d,
                    (0..d).map(|k| {
                        if mask >> k & 1 == 1 {
                            half_widths[k]
                        } else {
                            -half_widths[k]
                        }
                    }),
                )
            })
            .collect();
        let mut normals = Vec::with_capacity(2 * d);
        for k in 0..d {
            for s in [1.0, -1.0] {
                let mut a = Vector::zeros(d);
                a[k] = s / half_widths[k];
                normals.push(a);
            }
        }
        Ok(Self {
            space,
            vertices,
            normals,
            hbar,
        })
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn normals(&self) -> &[Vector] {
        &self.normals
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }

    /// Exact volume for `n ≤ 4`.
    pub fn volume(&self) -> Result<f64> {
        if self.dim() > 4 {
            return Err(Error::Dimension(format!(
                "exact polytope volume supported for n ≤ 4, got {}",
                self.dim()
            )));
        }
        hull::volume(&self.vertices)
    }

    /// Largest violation `max_v (a·v)` of the halfspaces by the vertex set
    /// and vice versa; zero when both representations describe one set.
    pub fn representation_gap(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in &self.normals {
            let h = self.vertices.iter().map(|v| a.dot(v)).fold(f64::NEG_INFINITY, f64::max);
            worst = worst.max((h - 1.0).abs());
        }
        worst
    }
}

/// A centered symmetric convex body: ellipsoid or polytope.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexBody {
    Ellipsoid(EllipsoidBody),
    Polytope(PolytopeBody),
}

impl From<EllipsoidBody> for ConvexBody {
    fn from(e: EllipsoidBody) -> Self {
        ConvexBody::Ellipsoid(e)
    }
}

impl From<PolytopeBody> for ConvexBody {
    fn from(p: PolytopeBody) -> Self {
        ConvexBody::Polytope(p)
    }
}

impl ConvexBody {
    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Ellipsoid(e) => e.dim(),
            ConvexBody::Polytope(p) => p.dim(),
        }
    }

    pub fn space(&self) -> Space {
        match self {
            ConvexBody::Ellipsoid(e) => e.space,
            ConvexBody::Polytope(p) => p.space,
        }
    }

    pub fn hbar(&self) -> f64 {
        match self {
            ConvexBody::Ellipsoid(e) => e.hbar,
            ConvexBody::Polytope(p) => p.hbar,
        }
    }

    pub fn as_ellipsoid(&self) -> Option<&EllipsoidBody> {
        match self {
            ConvexBody::Ellipsoid(e) => Some(e),
            ConvexBody::Polytope(_) => None,
        }
    }

    pub fn support(&self, direction: &Vector) -> Result<f64> {
        if direction.len() != self.dim() {
            return Err(Error::Dimension(format!(
                "direction has length {}, body has dimension {}",
                direction.len(),
                self.dim()
            )));
        }
        if direction.norm() == 0.0 {
            return Err(Error::InvalidArgument(
                "support function needs a nonzero direction".into(),
            ));
        }
        Ok(self.support_unchecked(direction))
    }

    fn support_unchecked(&self, d: &Vector) -> f64 {
        match self {
            ConvexBody::Ellipsoid(e) => {
                let qinv = linalg::spd_inverse(&e.q).expect("validated SPD");
                (e.hbar * d.dot(&(qinv * d))).max(0.0).sqrt()
            }
            ConvexBody::Polytope(p) => p.vertices.iter().map(|v| d.dot(v)).fold(f64::NEG_INFINITY, f64::max),
        }
    }

    /// `X^ħ = {p : p·x ≤ ħ for all x ∈ X}`; the space tag flips.
    pub fn polar_dual(&self) -> ConvexBody {
        match self {
            ConvexBody::Ellipsoid(e) => ConvexBody::Ellipsoid(EllipsoidBody {
                space: e.space.dual(),
                q: linalg::spd_inverse(&e.q).expect("validated SPD"),
                hbar: e.hbar,
            }),
            ConvexBody::Polytope(p) => ConvexBody::Polytope(PolytopeBody {
                space: p.space.dual(),
                vertices: p.normals.iter().map(|a| a * p.hbar).collect(),
                normals: p.vertices.iter().map(|v| v / p.hbar).collect(),
                hbar: p.hbar,
            }),
        }
    }

    /// Image under an invertible linear map `u ↦ Lu`.
    pub fn linear_image(&self, l: &Mat) -> Result<ConvexBody> {
        if l.nrows() != self.dim() || l.ncols() != self.dim() {
            return Err(Error::Dimension("map does not match body dimension".into()));
        }
        let linv = linalg::inverse(l)?;
        Ok(match self {
            ConvexBody::Ellipsoid(e) => ConvexBody::Ellipsoid(EllipsoidBody {
                space: e.space,
                q: linalg::symmetrize(&(linv.transpose() * &e.q * &linv)),
                hbar: e.hbar,
            }),
            ConvexBody::Polytope(p) => ConvexBody::Polytope(PolytopeBody {
                space: p.space,
                vertices: p.vertices.iter().map(|v| l * v).collect(),
                normals: p.normals.iter().map(|a| linv.transpose() * a).collect(),
                hbar: p.hbar,
            }),
        })
    }

    pub fn scaled(&self, lambda: f64) -> ConvexBody {
        match self {
            ConvexBody::Ellipsoid(e) => ConvexBody::Ellipsoid(EllipsoidBody {
                space: e.space,
                q: &e.q / (lambda * lambda),
                hbar: e.hbar,
            }),
            ConvexBody::Polytope(p) => ConvexBody::Polytope(PolytopeBody {
                space: p.space,
                vertices: p.vertices.iter().map(|v| v * lambda).collect(),
                normals: p.normals.iter().map(|a| a / lambda).collect(),
                hbar: p.hbar,
            }),
        }
    }

    pub fn volume(&self) -> Result<f64> {
        match self {
            ConvexBody::Ellipsoid(e) => Ok(e.volume()),
            ConvexBody::Polytope(p) => p.volume(),
        }
    }

    /// Same body with a different space tag.
    pub fn with_space(&self, space: Space) -> ConvexBody {
        let mut out = self.clone();
        match &mut out {
            ConvexBody::Ellipsoid(e) => e.space = space,
            ConvexBody::Polytope(p) => p.space = space,
        }
        out
    }
}

/// Support-function distance `max_d |h_A(d) − h_B(d)|` over the given unit
/// directions.
pub fn support_distance(a: &ConvexBody, b: &ConvexBody, directions: &[Vector]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for d in directions {
        worst = worst.max((a.support(d)? - b.support(d)?).abs());
    }
    Ok(worst)
}

fn check_hbar(hbar: f64) -> Result<()> {
    if !(hbar > 0.0) || !hbar.is_finite() {
        return Err(Error::InvalidArgument(format!("hbar must be positive, got {hbar}")));
    }
    Ok(())
}

/// `Vol Bⁿ(r) = π^{n/2} rⁿ / Γ(n/2 + 1)`.
pub fn ball_volume(n: usize, r: f64) -> f64 {
    std::f64::consts::PI.powf(n as f64 / 2.0) * r.powi(n as i32) / gamma(n as f64 / 2.0 + 1.0)
}

/// Result of an inclusion test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inclusion {
    pub holds: bool,
    /// `max_d h_inner(d) / h_outer(d)` over the directions that decide the
    /// inclusion; `≤ 1` exactly when the inner body fits.
    pub ratio: f64,
    /// Unit direction of worst violation when `holds` is false.
    pub witness: Option<Vec<f64>>,
}

/// Decides `inner ⊆ outer`. The tolerance is relative: the inclusion holds
/// when `h_inner ≤ (1 + tol)·h_outer` in every deciding direction.
pub fn contains(outer: &ConvexBody, inner: &ConvexBody, tol: f64) -> Result<Inclusion> {
    if outer.dim() != inner.dim() {
        return Err(Error::Dimension(format!(
            "cannot compare bodies of dimension {} and {}",
            outer.dim(),
            inner.dim()
        )));
    }
    if outer.space() != inner.space() {
        return Err(Error::InvalidArgument("bodies live in different spaces".into()));
    }
    let (ratio, worst) = match (outer, inner) {
        (ConvexBody::Ellipsoid(o), ConvexBody::Ellipsoid(i)) => {
            // h_i(d)² = dᵀ(ħ_i Q_i⁻¹)d; whiten by the outer form.
            let outer_dual = linalg::spd_inverse(&o.q)? * o.hbar;
            let inner_dual = linalg::spd_inverse(&i.q)? * i.hbar;
            let w = linalg::spd_inv_sqrt(&outer_dual);
            let (vals, vecs) = linalg::sym_eigen(&linalg::symmetrize(&(&w * inner_dual * &w)));
            let k = vals.len() - 1;
            let dir = &w * vecs.column(k);
            (vals[k].max(0.0).sqrt(), dir)
        }
        (ConvexBody::Polytope(o), _) => {
            let mut best = (f64::NEG_INFINITY, o.normals[0].clone());
            for a in &o.normals {
                let r = inner.support_unchecked(a);
                if r > best.0 {
                    best = (r, a.clone());
                }
            }
            best
        }
        (ConvexBody::Ellipsoid(o), ConvexBody::Polytope(i)) => {
            let form = o.unit_form();
            let mut best = (f64::NEG_INFINITY, i.vertices[0].clone());
            for v in &i.vertices {
                let r = v.dot(&(&form * v)).max(0.0).sqrt();
                if r > best.0 {
                    best = (r, &form * v);
                }
            }
            best
        }
    };
    let holds = ratio <= 1.0 + tol;
    let witness = (!holds).then(|| {
        let u = worst.normalize();
        u.iter().copied().collect()
    });
    Ok(Inclusion { holds, ratio, witness })
}

/// Verdict on whether `(X, P)` is a quantum polar pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumPairReport {
    pub holds: bool,
    /// `sup{λ : λX^ħ ⊆ P}`.
    pub lambda_max: f64,
    pub saturated: bool,
    pub witness: Option<Vec<f64>>,
}

/// Closed-form `λ_max` for `X = {Ax·x ≤ ħ}`, `P = {Bp·p ≤ ħ}`:
/// `1/√(max eig A^{1/2} B A^{1/2})`.
pub fn lambda_max_ellipsoids(x: &EllipsoidBody, p: &EllipsoidBody) -> f64 {
    // Normalize both to level ħ_x so that unequal levels are handled too.
    let a = &x.q;
    let b = &p.q * (x.hbar / p.hbar);
    1.0 / linalg::max_eig_product(a, &b).sqrt()
}

/// `λ_max` by bisection on `λ ↦ [λX^ħ ⊆ P]`, to relative precision `1e-14`.
pub fn lambda_max_bisection(x: &ConvexBody, p: &ConvexBody) -> Result<f64> {
    let dual = x.polar_dual();
    let fits = |lambda: f64| -> Result<bool> { Ok(contains(p, &dual.scaled(lambda), 0.0)?.holds) };
    let (mut lo, mut hi) = (1.0, 1.0);
    if fits(1.0)? {
        while fits(hi)? {
            lo = hi;
            hi *= 2.0;
            if hi > 1e300 {
                return Err(Error::Internal("unbounded λ_max".into()));
            }
        }
    } else {
        while !fits(lo)? {
            hi = lo;
            lo *= 0.5;
            if lo < 1e-300 {
                return Err(Error::Internal("λ_max underflow".into()));
            }
        }
    }
    while (hi - lo) > 1e-14 * hi {
        let mid = 0.5 * (lo + hi);
        if fits(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

fn check_pair_inputs(x: &ConvexBody, p: &ConvexBody) -> Result<()> {
    if x.space() != Space::Position || p.space() != Space::Momentum {
        return Err(Error::InvalidArgument(
            "pair check expects X in position space and P in momentum space".into(),
        ));
    }
    if (x.hbar() - p.hbar()).abs() > 1e-12 * x.hbar().max(p.hbar()) {
        return Err(Error::InvalidArgument(format!(
            "mismatched hbar: {} vs {}",
            x.hbar(),
            p.hbar()
        )));
    }
    if x.dim() != p.dim() {
        return Err(Error::Dimension("X and P have different dimensions".into()));
    }
    Ok(())
}

/// Decides `X^ħ ⊆ P`, computes `λ_max` and saturation `X^ħ = P`.
pub fn quantum_pair_check(x: &ConvexBody, p: &ConvexBody) -> Result<QuantumPairReport> {
    check_pair_inputs(x, p)?;
    let dual = x.polar_dual();
    let lambda_max = match (x, p) {
        (ConvexBody::Ellipsoid(xe), ConvexBody::Ellipsoid(pe)) => lambda_max_ellipsoids(xe, pe),
        _ => lambda_max_bisection(x, p)?,
    };
    let holds = lambda_max >= 1.0 - tol::PAIR;
    let forward = contains(p, &dual, tol::PAIR)?;
    let saturated = holds && contains(&dual, p, tol::PAIR)?.holds;
    let witness = if holds {
        None
    } else {
        forward.witness.or_else(|| Some(unit_first(x.dim())))
    };
    Ok(QuantumPairReport {
        holds,
        lambda_max,
        saturated,
        witness,
    })
}

fn unit_first(n: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[0] = 1.0;
    v
}

/// Mahler volume and the two classical bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MahlerReport {
    pub vol_x: f64,
    pub vol_dual: f64,
    pub mahler: f64,
    /// `(Vol Bⁿ(√ħ))²`.
    pub santalo_bound: f64,
    /// `(4ħ)ⁿ / n!`.
    pub mahler_bound: f64,
    pub santalo_ok: bool,
    /// Only decided for `n ≤ 2`; `None` above.
    pub mahler_ok: Option<bool>,
}

pub fn mahler_volume(x: &ConvexBody) -> Result<MahlerReport> {
    let n = x.dim();
    let hbar = x.hbar();
    let vol_x = x.volume()?;
    let vol_dual = x.polar_dual().volume()?;
    if !(vol_x > 0.0) || !(vol_dual > 0.0) || !vol_x.is_finite() || !vol_dual.is_finite() {
        return Err(Error::Degenerate("body or its dual has no volume".into()));
    }
    let mahler = vol_x * vol_dual;
    let santalo_bound = ball_volume(n, hbar.sqrt()).powi(2);
    let factorial: f64 = (1..=n).map(|k| k as f64).product();
    let mahler_bound = (4.0 * hbar).powi(n as i32) / factorial;
    let rel = 1e-8;
    let santalo_ok = mahler <= santalo_bound * (1.0 + rel);
    let lower = mahler >= mahler_bound * (1.0 - rel);
    let mahler_ok = if n <= 2 {
        Some(lower)
    } else {
        log::info!("n = {n}: lower bound {mahler_bound} vs mahler {mahler} (not asserted)");
        None
    };
    if !santalo_ok {
        log::warn!("Blaschke–Santaló bound exceeded: {mahler} > {santalo_bound}");
    }
    Ok(MahlerReport {
        vol_x,
        vol_dual,
        mahler,
        santalo_bound,
        mahler_bound,
        santalo_ok,
        mahler_ok,
    })
}
