//! Symplectic capacities of ellipsoids, planar regions and position ×
//! momentum products.
//!
//! All symplectic capacities agree on ellipsoids, where
//! `c(Ω) = πħ / λ_max^σ(M)`. For planar convex regions the Hofer–Zehnder
//! capacity is the enclosed area. The product formula
//! `c_HZ(X × P) = 4 λ_max ħ` covers quantum polar pairs. No other
//! Hofer–Zehnder values are computed.

use serde::{Deserialize, Serialize};

use crate::blobs::PhaseEllipsoid;
use crate::error::{Error, Result};
use crate::linalg::{self, Vector};
use crate::polar::{self, ConvexBody};
use crate::symplectic::{self, SymplecticMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapacityMethod {
    EllipsoidFormula,
    PlanarArea,
    ProductFormula,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapacityValue {
    pub value: f64,
    pub method: CapacityMethod,
    pub hbar: f64,
}

pub fn ellipsoid_capacity(e: &PhaseEllipsoid) -> Result<CapacityValue> {
    let spectrum = symplectic::symplectic_eigenvalues(e.matrix())?;
    Ok(CapacityValue {
        value: std::f64::consts::PI * e.hbar() / spectrum[0],
        method: CapacityMethod::EllipsoidFormula,
        hbar: e.hbar(),
    })
}

/// Gromov width of an ellipsoid. Equal to [`ellipsoid_capacity`].
pub fn c_min_ellipsoid(e: &PhaseEllipsoid) -> Result<CapacityValue> {
    ellipsoid_capacity(e)
}

/// Cylindrical capacity of an ellipsoid. Equal to [`ellipsoid_capacity`].
pub fn c_max_ellipsoid(e: &PhaseEllipsoid) -> Result<CapacityValue> {
    ellipsoid_capacity(e)
}

/// A centered convex region of the `(x, p)` plane.
#[derive(Debug, Clone)]
pub enum PlanarRegion {
    /// Vertices in any order; the hull is taken.
    Polygon(Vec<Vector>),
    Ellipse(PhaseEllipsoid),
}

/// Shoelace area of the convex hull of planar points.
pub fn polygon_area(points: &[Vector]) -> Result<f64> {
    if points.iter().any(|p| p.len() != 2) {
        return Err(Error::Dimension("polygon vertices must be planar".into()));
    }
    if points.len() < 3 {
        return Err(Error::Degenerate("polygon needs at least three vertices".into()));
    }
    let cx = points.iter().map(|p| p[0]).sum::<f64>() / points.len() as f64;
    let cy = points.iter().map(|p| p[1]).sum::<f64>() / points.len() as f64;
    let mut sorted: Vec<(f64, f64)> = points.iter().map(|p| (p[0], p[1])).collect();
    sorted.sort_by(|a, b| (a.1 - cy).atan2(a.0 - cx).total_cmp(&(b.1 - cy).atan2(b.0 - cx)));
    let k = sorted.len();
    let twice: f64 = (0..k)
        .map(|i| {
            let (x0, y0) = sorted[i];
            let (x1, y1) = sorted[(i + 1) % k];
            x0 * y1 - x1 * y0
        })
        .sum();
    Ok(twice.abs() / 2.0)
}

/// Hofer–Zehnder capacity of a planar convex region: its area.
pub fn hz_planar(region: &PlanarRegion, hbar: f64) -> Result<CapacityValue> {
    let value = match region {
        PlanarRegion::Polygon(points) => polygon_area(points)?,
        PlanarRegion::Ellipse(e) => {
            if e.n() != 1 {
                return Err(Error::Dimension(format!(
                    "planar capacity needs a 2-dimensional region, got {}",
                    2 * e.n()
                )));
            }
            std::f64::consts::PI * e.hbar() / e.matrix().determinant().sqrt()
        }
    };
    Ok(CapacityValue {
        value,
        method: CapacityMethod::PlanarArea,
        hbar,
    })
}

/// `c_HZ(X × P) = 4 λ_max ħ`, with `4ħ` in the saturated case.
pub fn hz_product_pair(x: &ConvexBody, p: &ConvexBody) -> Result<CapacityValue> {
    let report = polar::quantum_pair_check(x, p)?;
    if !report.holds {
        return Err(Error::NotQuantumPair {
            lambda_max: report.lambda_max,
            witness: report.witness.unwrap_or_default(),
        });
    }
    if let (ConvexBody::Ellipsoid(_), ConvexBody::Ellipsoid(_)) = (x, p) {
        let bisected = polar::lambda_max_bisection(x, p)?;
        if (bisected - report.lambda_max).abs() > 1e-9 * report.lambda_max {
            return Err(Error::Internal(format!(
                "λ_max routes disagree: closed form {} vs bisection {bisected}",
                report.lambda_max
            )));
        }
    }
    let hbar = x.hbar();
    let value = if report.saturated {
        4.0 * hbar
    } else {
        4.0 * report.lambda_max * hbar
    };
    Ok(CapacityValue {
        value,
        method: CapacityMethod::ProductFormula,
        hbar,
    })
}

/// The rectangle `X × P ⊂ ℝ²` for one degree of freedom, as a polygon.
pub fn product_rectangle(x: &ConvexBody, p: &ConvexBody) -> Result<PlanarRegion> {
    if x.dim() != 1 || p.dim() != 1 {
        return Err(Error::Dimension("product rectangle needs n = 1".into()));
    }
    let one = Vector::from_element(1, 1.0);
    let a = x.support(&one)?;
    let b = p.support(&one)?;
    let v = |u: f64, w: f64| Vector::from_row_slice(&[u, w]);
    Ok(PlanarRegion::Polygon(vec![v(a, b), v(-a, b), v(-a, -b), v(a, -b)]))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectionArea {
    pub area: f64,
    pub bound: f64,
    pub passes: bool,
}

/// Area of the projection of `S(B²ⁿ(R))` onto the `(x_j, p_j)` plane
/// (`j` is 1-based), compared with `πR²`.
pub fn projection_area_check(s: &SymplecticMatrix, radius: f64, j: usize, tol: f64) -> Result<ProjectionArea> {
    let n = s.n();
    if j == 0 || j > n {
        return Err(Error::InvalidArgument(format!("plane index {j} outside 1..={n}")));
    }
    let gram = s.matrix() * s.matrix().transpose();
    let (a, b) = (j - 1, n + j - 1);
    let det = gram[(a, a)] * gram[(b, b)] - gram[(a, b)] * gram[(b, a)];
    let bound = std::f64::consts::PI * radius * radius;
    let area = bound * det.max(0.0).sqrt();
    Ok(ProjectionArea {
        area,
        bound,
        passes: area >= bound - tol,
    })
}

/// Capacity of `{z : Mz·z ≤ ħ}` read directly from `M` without building a
/// [`PhaseEllipsoid`].
pub fn capacity_of_form(m: &linalg::Mat, hbar: f64) -> Result<f64> {
    Ok(ellipsoid_capacity(&PhaseEllipsoid::new(m.clone(), hbar)?)?.value)
}
