use std::f64::consts::PI;

use proptest::prelude::*;
use symplecta::blobs::{john_of_pair, PhaseEllipsoid};
use symplecta::capacities::{
    c_max_ellipsoid, c_min_ellipsoid, ellipsoid_capacity, hz_planar, hz_product_pair, polygon_area, product_rectangle,
    projection_area_check, CapacityMethod, PlanarRegion,
};
use symplecta::linalg::{self, Mat, Vector};
use symplecta::polar::{ConvexBody, EllipsoidBody, PolytopeBody, Space};
use symplecta::sampling;
use symplecta::symplectic::{random_symplectic, SymplecticMatrix};
use symplecta::Error;

fn diag(xs: &[f64]) -> Mat {
    Mat::from_diagonal(&Vector::from_row_slice(xs))
}

fn pt(x: f64, y: f64) -> Vector {
    Vector::from_row_slice(&[x, y])
}

/// Largest symplectic eigenvalue from the dense eigenvalues of `JM`.
fn top_symplectic_eig(m: &Mat) -> f64 {
    let n = m.nrows() / 2;
    (linalg::j_matrix(n) * m)
        .complex_eigenvalues()
        .iter()
        .map(|z| z.im.abs())
        .fold(0.0, f64::max)
}

/// Area of a planar polygon given counter-clockwise, by Green's theorem on
/// each edge parametrized linearly (midpoint rule is exact here).
fn green_area(ccw: &[Vector]) -> f64 {
    let k = ccw.len();
    (0..k)
        .map(|i| {
            let (a, b) = (&ccw[i], &ccw[(i + 1) % k]);
            let mid = (a + b) / 2.0;
            let d = b - a;
            0.5 * (mid[0] * d[1] - mid[1] * d[0])
        })
        .sum()
}

#[test]
fn ellipsoid_capacity_examples() {
    for hbar in [0.5f64, 1.0, 2.0] {
        for n in 1..=3 {
            let c = ellipsoid_capacity(&PhaseEllipsoid::ball(n, hbar.sqrt(), hbar).unwrap()).unwrap();
            assert!((c.value - PI * hbar).abs() < 1e-12);
            assert_eq!(c.method, CapacityMethod::EllipsoidFormula);
        }
    }
    let e = PhaseEllipsoid::new(diag(&[4.0, 1.0]), 1.0).unwrap();
    assert!((ellipsoid_capacity(&e).unwrap().value - PI / 2.0).abs() < 1e-12);
    assert_eq!(c_min_ellipsoid(&e).unwrap(), c_max_ellipsoid(&e).unwrap());
    let b = sampling::random_blob(5, 3, 0.7).unwrap();
    assert!((ellipsoid_capacity(&b.ellipsoid()).unwrap().value - PI * 0.7).abs() < 1e-9);
    assert!(PhaseEllipsoid::new(diag(&[1.0, -1.0]), 1.0).is_err());
}

#[test]
fn planar_examples() {
    let disk = PlanarRegion::Ellipse(PhaseEllipsoid::ball(1, 1.5, 1.0).unwrap());
    assert!((hz_planar(&disk, 1.0).unwrap().value - PI * 2.25).abs() < 1e-12);
    for (a, hbar) in [(0.5, 1.0), (2.0, 0.3)] {
        let rect = vec![pt(a, hbar / a), pt(-a, hbar / a), pt(-a, -hbar / a), pt(a, -hbar / a)];
        let c = hz_planar(&PlanarRegion::Polygon(rect), hbar).unwrap();
        assert!((c.value - 4.0 * hbar).abs() < 1e-12);
        assert_eq!(c.method, CapacityMethod::PlanarArea);
    }
    let sq = vec![pt(1.0, -1.0), pt(-1.0, 1.0), pt(1.0, 1.0), pt(-1.0, -1.0)];
    assert!((polygon_area(&sq).unwrap() - 4.0).abs() < 1e-14);
    let ball4 = PlanarRegion::Ellipse(PhaseEllipsoid::ball(2, 1.0, 1.0).unwrap());
    assert!(hz_planar(&ball4, 1.0).is_err());
    assert!(polygon_area(&[pt(0.0, 0.0), pt(1.0, 0.0)]).is_err());
}

#[test]
fn product_pair_examples() {
    for hbar in [0.5f64, 1.0] {
        let x: ConvexBody = EllipsoidBody::ball(Space::Position, 2, hbar.sqrt(), hbar)
            .unwrap()
            .into();
        let c = hz_product_pair(&x, &x.polar_dual()).unwrap();
        assert!((c.value - 4.0 * hbar).abs() < 1e-12);
        assert_eq!(c.method, CapacityMethod::ProductFormula);
    }
    let x: ConvexBody = PolytopeBody::interval(Space::Position, 1.0, 1.0).into();
    let p: ConvexBody = PolytopeBody::interval(Space::Momentum, 2.0, 1.0).into();
    let c = hz_product_pair(&x, &p).unwrap();
    assert!((c.value - 8.0).abs() < 1e-9);
    let rect = product_rectangle(&x, &p).unwrap();
    assert!((hz_planar(&rect, 1.0).unwrap().value - 8.0).abs() < 1e-12);

    let x: ConvexBody = EllipsoidBody::ball(Space::Position, 2, 1.0, 1.0).unwrap().into();
    let p: ConvexBody = EllipsoidBody::new(Space::Momentum, Mat::identity(2, 2) * 4.0, 1.0)
        .unwrap()
        .into();
    assert!(matches!(hz_product_pair(&x, &p), Err(Error::NotQuantumPair { .. })));
}

#[test]
fn projection_area_examples() {
    for r in [0.5, 1.0, 3.0] {
        let a = projection_area_check(&SymplecticMatrix::identity(2), r, 1, 1e-9).unwrap();
        assert!(a.passes && (a.area - PI * r * r).abs() < 1e-12);
    }
    let s = SymplecticMatrix::dilation(&diag(&[2.0, 0.5])).unwrap();
    let a = projection_area_check(&s, 1.0, 1, 1e-9).unwrap();
    assert!(a.passes && (a.area - PI).abs() < 1e-12);
    assert!(projection_area_check(&s, 1.0, 0, 1e-9).is_err());
    assert!(projection_area_check(&s, 1.0, 3, 1e-9).is_err());
}

#[test]
fn projection_area_on_random_maps() {
    for seed in 0..200 {
        let s = random_symplectic(seed, 2, 1.0).unwrap();
        for j in 1..=2 {
            let a = projection_area_check(&s, 1.0, j, 1e-9).unwrap();
            assert!(a.passes, "seed {seed} j {j}: {}", a.area);
        }
    }
}

#[test]
fn projection_area_matches_shadow_of_the_ellipsoid() {
    // Oracle: the shadow of S(B(R)) on the (x_j, p_j) plane is the ellipse
    // whose inverse form is the 2×2 submatrix of SSᵀ scaled by R².
    for seed in 0..20 {
        let s = random_symplectic(seed, 2, 1.0).unwrap();
        let g = s.matrix() * s.matrix().transpose();
        for j in 0..2 {
            let idx = [j, j + 2];
            let sub = Mat::from_fn(2, 2, |a, b| g[(idx[a], idx[b])]);
            let root = linalg::spd_sqrt(&sub) * 2.0;
            let hull: Vec<Vector> = (0..20_000)
                .map(|k| {
                    let t = 2.0 * PI * k as f64 / 20_000.0;
                    let u = pt(t.cos(), t.sin());
                    &root * u
                })
                .collect();
            let area = green_area(&hull);
            let got = projection_area_check(&s, 2.0, j + 1, 1e-9).unwrap().area;
            assert!((area - got).abs() < 1e-6 * got);
        }
    }
}

#[test]
fn john_capacity_of_pair_with_dual() {
    for seed in 0..20 {
        for n in 1..=3 {
            let x = sampling::random_ellipsoid(seed, Space::Position, n, 1.3).unwrap();
            let dual = ConvexBody::from(x.clone()).polar_dual();
            let j = john_of_pair(&x, dual.as_ellipsoid().unwrap()).unwrap();
            let c = ellipsoid_capacity(&j.ellipsoid).unwrap().value;
            assert!((c - PI * 1.3).abs() < 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn formula_matches_dense_oracle(seed in 0u64..10_000, n in 1usize..=3, hbar in 0.1f64..5.0) {
        let m = sampling::random_spd(seed, 2 * n, 1.0).unwrap();
        let c = ellipsoid_capacity(&PhaseEllipsoid::new(m.clone(), hbar).unwrap()).unwrap().value;
        let want = PI * hbar / top_symplectic_eig(&m);
        prop_assert!((c - want).abs() <= 1e-8 * want);
    }

    #[test]
    fn conformal_on_ellipsoids(seed in 0u64..10_000, n in 1usize..=3, k in 0usize..3) {
        let lambda = [0.5, 2.0, 3.0][k];
        let e = PhaseEllipsoid::new(sampling::random_spd(seed, 2 * n, 1.0).unwrap(), 1.0).unwrap();
        let c0 = ellipsoid_capacity(&e).unwrap().value;
        let c1 = ellipsoid_capacity(&e.scaled(lambda)).unwrap().value;
        prop_assert!((c1 - lambda * lambda * c0).abs() <= 1e-9 * c1);
    }

    #[test]
    fn conformal_on_polygons(seed in 0u64..10_000, k in 0usize..3) {
        let lambda = [0.5, 2.0, 3.0][k];
        let poly = sampling::random_symmetric_polygon(seed, 8, Space::Position, 1.0).unwrap();
        let a0 = polygon_area(poly.vertices()).unwrap();
        let scaled: Vec<Vector> = poly.vertices().iter().map(|v| v * lambda).collect();
        let a1 = hz_planar(&PlanarRegion::Polygon(scaled), 1.0).unwrap().value;
        prop_assert!((a1 - lambda * lambda * a0).abs() <= 1e-12 * a1);
    }

    #[test]
    fn shoelace_matches_green_on_hull(seed in 0u64..10_000) {
        let poly = sampling::random_symmetric_polygon(seed, 8, Space::Position, 1.0).unwrap();
        let mut vs: Vec<Vector> = poly.vertices().to_vec();
        vs.sort_by(|a, b| a[1].atan2(a[0]).total_cmp(&b[1].atan2(b[0])));
        prop_assert!((polygon_area(poly.vertices()).unwrap() - green_area(&vs)).abs() < 1e-12);
    }

    #[test]
    fn symplectic_invariance(seed in 0u64..10_000, n in 1usize..=3) {
        let e = PhaseEllipsoid::new(sampling::random_spd(seed, 2 * n, 1.0).unwrap(), 1.0).unwrap();
        let s = random_symplectic(seed + 5, n, 0.7).unwrap();
        let c0 = ellipsoid_capacity(&e).unwrap().value;
        let c1 = ellipsoid_capacity(&e.image(s.matrix()).unwrap()).unwrap().value;
        prop_assert!((c0 - c1).abs() <= 1e-8 * c0.max(1.0));
    }

    #[test]
    fn monotone_on_nested_ellipsoids(seed in 0u64..10_000, n in 1usize..=3, t in 0.0f64..0.99) {
        let m = sampling::random_spd(seed, 2 * n, 1.0).unwrap();
        let u = sampling::random_directions(seed, 2 * n, 2 * n + 1).pop().unwrap();
        let shrink = t * linalg::min_eigenvalue(&m);
        let outer = PhaseEllipsoid::new(&m - &u * u.transpose() * shrink, 1.0).unwrap();
        let inner = PhaseEllipsoid::new(m, 1.0).unwrap();
        prop_assert!(inner.inside(&outer, 1e-9).unwrap().0);
        let (ci, co) = (ellipsoid_capacity(&inner).unwrap().value, ellipsoid_capacity(&outer).unwrap().value);
        prop_assert!(ci <= co + 1e-9);
    }

    #[test]
    fn planar_agrees_with_formula_on_ellipses(seed in 0u64..10_000, hbar in 0.1f64..5.0) {
        let e = PhaseEllipsoid::new(sampling::random_spd(seed, 2, 1.0).unwrap(), hbar).unwrap();
        let a = hz_planar(&PlanarRegion::Ellipse(e.clone()), hbar).unwrap().value;
        let c = ellipsoid_capacity(&e).unwrap().value;
        prop_assert!((a - c).abs() <= 1e-9 * c);
    }

    #[test]
    fn product_formula_matches_rectangle(seed in 0u64..10_000) {
        let (a, b) = sampling::random_interval_pair(seed, 1.0);
        let x: ConvexBody = PolytopeBody::interval(Space::Position, a, 1.0).into();
        let p: ConvexBody = PolytopeBody::interval(Space::Momentum, b, 1.0).into();
        let c = hz_product_pair(&x, &p).unwrap().value;
        let area = 4.0 * a * b;
        prop_assert!((c - area).abs() <= 1e-9 * area);
        // Same pair as 1-dimensional ellipsoids.
        let xe: ConvexBody = EllipsoidBody::new(Space::Position, diag(&[1.0 / (a * a)]), 1.0).unwrap().into();
        let pe: ConvexBody = EllipsoidBody::new(Space::Momentum, diag(&[1.0 / (b * b)]), 1.0).unwrap().into();
        let ce = hz_product_pair(&xe, &pe).unwrap().value;
        prop_assert!((ce - area).abs() <= 1e-9 * area);
    }
}
