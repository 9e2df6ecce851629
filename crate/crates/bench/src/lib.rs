//! Deterministic inputs for the kernel benchmarks.

use symplecta::linalg::{Mat, Vector};
use symplecta::polar::{ConvexBody, PolytopeBody, Space};
use symplecta::sampling;
use symplecta::{SampledFunction1D, SymplecticMatrix};

pub const SEED: u64 = 17;

pub fn symplectic(n: usize) -> SymplecticMatrix {
    symplecta::random_symplectic(SEED, n, 1.0).expect("valid dimension")
}

pub fn spd(dim: usize) -> Mat {
    sampling::random_spd(SEED, dim, 1.0).expect("valid dimension")
}

/// Two random symmetric polygons whose product is fed to the John solver.
pub fn polygon_product(k: usize) -> (PolytopeBody, PolytopeBody) {
    let x = sampling::random_symmetric_polygon(SEED, k, Space::Position, 1.0).expect("valid polygon");
    let p = sampling::random_symmetric_polygon(SEED + 1, k, Space::Momentum, 1.0).expect("valid polygon");
    (x, p)
}

pub fn polytope(dim: usize, points: usize) -> ConvexBody {
    let pts: Vec<Vector> = sampling::random_directions(SEED, dim, points)
        .into_iter()
        .flat_map(|d| [d.clone(), -d])
        .collect();
    PolytopeBody::from_vertices(Space::Position, &pts, 1.0)
        .expect("full-dimensional")
        .into()
}

pub fn hermite(m: usize) -> SampledFunction1D {
    SampledFunction1D::hermite(m, 1.0).expect("default grid")
}
