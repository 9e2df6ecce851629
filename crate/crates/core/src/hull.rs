//! Facet enumeration and exact volumes of small-dimensional convex polytopes
//! given by their vertices.
//!
//! Facets are found by brute force over `d`-subsets of the points, which is
//! fine for the dimensions handled here (`d ≤ 4`) and exact to rounding.

use crate::error::{Error, Result};
use crate::linalg::{Mat, Vector};

/// A supporting hyperplane `normal · y = 1` and the points lying on it.
#[derive(Debug, Clone)]
pub struct Facet {
    pub normal: Vector,
    pub members: Vec<usize>,
}

const ON_PLANE: f64 = 1e-9;

fn combinations(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n || k == 0 {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Facets of the convex hull of `points`, assuming the origin is interior.
pub fn facets(points: &[Vector]) -> Result<Vec<Facet>> {
    let d = points.first().map_or(0, |p| p.len());
    if d == 0 || points.len() < d + 1 {
        return Err(Error::Degenerate(format!(
            "need at least {} points in dimension {d}",
            d + 1
        )));
    }
    let scale = points.iter().map(|p| p.norm()).fold(0.0, f64::max);
    let mut out: Vec<Facet> = Vec::new();
    combinations(points.len(), d, |subset| {
        let sys = Mat::from_fn(d, d, |i, j| points[subset[i]][j]);
        let lu = sys.clone().lu();
        let det = lu.determinant();
        if det.abs() <= 1e-12 * scale.powi(d as i32) {
            return;
        }
        let Some(normal) = lu.solve(&Vector::from_element(d, 1.0)) else {
            return;
        };
        if points.iter().any(|p| normal.dot(p) > 1.0 + ON_PLANE) {
            return;
        }
        if out
            .iter()
            .any(|f| (&f.normal - &normal).norm() <= ON_PLANE * normal.norm().max(1.0))
        {
            return;
        }
        let members = points
            .iter()
            .enumerate()
            .filter(|(_, p)| (normal.dot(p) - 1.0).abs() <= ON_PLANE)
            .map(|(i, _)| i)
            .collect();
        out.push(Facet { normal, members });
    });
    if out.len() < d + 1 {
        return Err(Error::Degenerate(
            "point set is flat or does not surround the origin".into(),
        ));
    }
    Ok(out)
}

/// Orthonormal basis of the hyperplane orthogonal to `normal`, as the rows of
/// a `(d−1) × d` matrix.
fn complement_basis(normal: &Vector) -> Mat {
    let d = normal.len();
    let u = normal.normalize();
    let mut basis: Vec<Vector> = Vec::with_capacity(d - 1);
    for k in 0..d {
        let mut e = Vector::zeros(d);
        e[k] = 1.0;
        let mut v = &e - &u * u.dot(&e);
        for b in &basis {
            v -= b * b.dot(&v);
        }
        if v.norm() > 1e-6 {
            basis.push(v.normalize());
        }
        if basis.len() == d - 1 {
            break;
        }
    }
    Mat::from_fn(d - 1, d, |i, j| basis[i][j])
}

/// Volume of the convex hull of `points` (full-dimensional), by a fan
/// decomposition from the centroid over the facets, recursing on each facet.
pub fn volume(points: &[Vector]) -> Result<f64> {
    let d = points.first().map_or(0, |p| p.len());
    match d {
        0 => Ok(1.0),
        1 => {
            let lo = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
            let hi = points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
            Ok(hi - lo)
        }
        _ => {
            let centroid = points.iter().fold(Vector::zeros(d), |acc, p| acc + p) / points.len() as f64;
            let shifted: Vec<Vector> = points.iter().map(|p| p - &centroid).collect();
            let mut total = 0.0;
            for facet in facets(&shifted)? {
                let height = 1.0 / facet.normal.norm();
                let basis = complement_basis(&facet.normal);
                let local: Vec<Vector> = facet.members.iter().map(|&i| &basis * &shifted[i]).collect();
                let area = volume(&local)?;
                total += height * area / d as f64;
            }
            Ok(total)
        }
    }
}

/// Indices of points that are vertices: those lying on facets whose normals
/// span the whole space.
pub fn extreme_points(points: &[Vector], facets: &[Facet]) -> Vec<usize> {
    let d = points.first().map_or(0, |p| p.len());
    (0..points.len())
        .filter(|&i| {
            let normals: Vec<&Vector> = facets
                .iter()
                .filter(|f| f.members.contains(&i))
                .map(|f| &f.normal)
                .collect();
            if normals.len() < d {
                return false;
            }
            let m = Mat::from_fn(normals.len(), d, |r, c| normals[r][c]);
            m.rank(1e-9 * m.norm().max(1.0)) == d
        })
        .collect()
}
