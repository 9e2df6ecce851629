use proptest::prelude::*;
use symplecta::blobs::blob_to_gaussian;
use symplecta::linalg::{self, Mat, Vector};
use symplecta::sampling;
use symplecta::states::{
    covariance, hermite_covariance, marginals, metaplectic_apply, pauli_partners, quantum_condition_check,
    robertson_schrodinger_check, wigner_matrix, CovarianceMatrix, GaussianState,
};
use symplecta::symplectic::{is_symplectic, SymplecticGenerator};
use symplecta::Error;

const PI: f64 = std::f64::consts::PI;

fn max_abs(m: &Mat) -> f64 {
    m.iter().fold(0.0, |a, v| a.max(v.abs()))
}

fn m2(a: f64, b: f64, c: f64, d: f64) -> Mat {
    Mat::from_row_slice(2, 2, &[a, b, c, d])
}

fn one(x: f64) -> Mat {
    Mat::from_element(1, 1, x)
}

fn random_state(seed: u64, n: usize, hbar: f64) -> GaussianState {
    let w = sampling::random_spd(seed, n, 1.0).unwrap();
    let y = sampling::random_spd(seed + 1, n, 1.0).unwrap() - Mat::identity(n, n) * 1.5;
    GaussianState::new(w, y, hbar).unwrap()
}

fn random_generator(seed: u64, n: usize) -> SymplecticGenerator {
    match seed % 3 {
        0 => SymplecticGenerator::J,
        1 => {
            let a = sampling::random_spd(seed, n, 1.0).unwrap();
            let rot = linalg::j_matrix(n).view((0, n), (n, n)).into_owned();
            SymplecticGenerator::ml(&(a * rot))
        }
        _ => SymplecticGenerator::vp(&(sampling::random_spd(seed, n, 1.0).unwrap() - Mat::identity(n, n))),
    }
}

#[test]
fn wigner_examples() {
    let g = wigner_matrix(&GaussianState::standard(2, 1.0));
    assert!(max_abs(&(g - Mat::identity(4, 4))) < 1e-15);
    let g = wigner_matrix(&GaussianState::new(one(1.0), one(1.0), 1.0).unwrap());
    assert!(max_abs(&(&g - m2(2.0, 1.0, 1.0, 1.0))) < 1e-15);
    assert!((g.determinant() - 1.0).abs() < 1e-14);
    let g = wigner_matrix(&random_state(3, 2, 1.0));
    assert!(is_symplectic(&g, 1e-9).unwrap().holds);
}

#[test]
fn invalid_states_are_rejected() {
    assert!(GaussianState::new(one(-1.0), one(0.0), 1.0).is_err());
    assert!(GaussianState::new(Mat::identity(2, 2), m2(0.0, 1.0, 0.0, 0.0), 1.0).is_err());
    assert!(GaussianState::new(one(1.0), one(0.0), 0.0).is_err());
}

#[test]
fn covariance_examples() {
    let c = covariance(&GaussianState::standard(1, 1.0));
    assert!(max_abs(&(c.sigma() - Mat::identity(2, 2) * 0.5)) < 1e-15);
    let c = covariance(&GaussianState::new(one(1.0), one(1.0), 1.0).unwrap());
    assert!(max_abs(&(c.sigma() - m2(0.5, -0.5, -0.5, 1.0))) < 1e-14);
}

#[test]
fn quantum_condition_examples() {
    for hbar in [0.5, 1.0, 2.0] {
        let v = quantum_condition_check(
            &CovarianceMatrix::new(Mat::identity(4, 4) * (hbar / 2.0), hbar).unwrap(),
            1e-9,
        )
        .unwrap();
        assert!(v.passes && v.capacity_passes && v.blob_unique);
        assert!((v.capacity_of_cov_ellipsoid - PI * hbar).abs() < 1e-12);
        let g = linalg::from_rows(&v.blob.unwrap()).unwrap();
        assert!(max_abs(&(g - Mat::identity(4, 4))) < 1e-10);

        let v = quantum_condition_check(
            &CovarianceMatrix::new(Mat::identity(2, 2) * (hbar / 4.0), hbar).unwrap(),
            1e-9,
        )
        .unwrap();
        assert!(!v.passes && !v.capacity_passes && v.blob.is_none());
        assert!((v.min_symplectic_eigenvalue - hbar / 4.0).abs() < 1e-12);
    }
    let v = quantum_condition_check(&hermite_covariance(2, 2, 1.0), 1e-9).unwrap();
    assert!(v.passes && !v.blob_unique);
    assert!((v.min_symplectic_eigenvalue - 2.5).abs() < 1e-12);
}

#[test]
fn non_positive_covariance_fails_without_error() {
    let v = quantum_condition_check(&CovarianceMatrix::new(m2(1.0, 2.0, 2.0, 1.0), 1.0).unwrap(), 1e-9).unwrap();
    assert!(!v.passes && !v.positive_definite);
    assert!(v.diagnostics.is_some());
    assert!(CovarianceMatrix::new(m2(1.0, 2.0, 0.0, 1.0), 1.0).is_err());
}

#[test]
fn robertson_schrodinger_examples() {
    let m = robertson_schrodinger_check(&CovarianceMatrix::new(Mat::identity(4, 4) * 0.5, 1.0).unwrap());
    assert!(m.iter().all(|x| x.abs() < 1e-15));
    let m = robertson_schrodinger_check(&CovarianceMatrix::new(m2(0.5, -0.5, -0.5, 1.0), 1.0).unwrap());
    assert!(m[0].abs() < 1e-15);
    for hbar in [0.5f64, 2.0] {
        let m = robertson_schrodinger_check(&CovarianceMatrix::new(Mat::identity(2, 2) * hbar, hbar).unwrap());
        assert!((m[0] - 0.75 * hbar * hbar).abs() < 1e-14);
    }
}

#[test]
fn marginal_examples() {
    let m = marginals(&GaussianState::standard(1, 1.0));
    assert!((m.position_covariance[(0, 0)] - 0.5).abs() < 1e-15);
    assert!((m.momentum_covariance[(0, 0)] - 0.5).abs() < 1e-15);
    let m = marginals(&GaussianState::new(one(1.0), one(1.0), 1.0).unwrap());
    assert!((m.position_covariance[(0, 0)] - 0.5).abs() < 1e-14);
    assert!((m.momentum_covariance[(0, 0)] - 1.0).abs() < 1e-14);
}

#[test]
fn marginal_matches_amplitude_and_integrates_to_one() {
    for seed in 0..5 {
        let s = random_state(seed, 1, 0.7);
        let m = marginals(&s);
        let sd = m.position_covariance[(0, 0)].sqrt();
        // Trapezoid rule over ±10 standard deviations.
        let k = 4000;
        let h = 20.0 * sd / k as f64;
        let mut total = 0.0;
        for i in 0..=k {
            let x = Vector::from_element(1, -10.0 * sd + h * i as f64);
            let d = s.amplitude(&x).norm_sqr();
            assert!((d - m.position_density(&x)).abs() < 1e-12);
            total += if i == 0 || i == k { 0.5 * d } else { d };
        }
        assert!((total * h - 1.0).abs() < 1e-8);
    }
}

#[test]
fn pauli_partner_examples() {
    let one_partner = pauli_partners(0.5, 0.5, 1.0, 1e-12).unwrap();
    assert_eq!(one_partner.len(), 1);
    assert!(one_partner[0].xp()[(0, 0)].abs() < 1e-15);
    let two = pauli_partners(1.0, 1.0, 1.0, 1e-12).unwrap();
    assert_eq!(two.len(), 2);
    let mut offs: Vec<f64> = two.iter().map(|c| c.xp()[(0, 0)]).collect();
    offs.sort_by(f64::total_cmp);
    assert!((offs[0] + 3f64.sqrt() / 2.0).abs() < 1e-15);
    assert!((offs[1] - 3f64.sqrt() / 2.0).abs() < 1e-15);
    for c in &two {
        let v = quantum_condition_check(c, 1e-9).unwrap();
        assert!(v.passes && v.blob_unique);
        assert!((c.sigma().determinant() - 0.25).abs() < 1e-14);
    }
    assert!(matches!(
        pauli_partners(0.25, 0.25, 1.0, 1e-12),
        Err(Error::NoQuantumSolution { .. })
    ));
}

#[test]
fn metaplectic_examples() {
    let phi = GaussianState::standard(2, 1.0);
    let out = metaplectic_apply(&phi, &SymplecticGenerator::J).unwrap();
    assert!(max_abs(&(out.w() - Mat::identity(2, 2))) < 1e-14 && max_abs(out.y()) < 1e-14);

    let s = GaussianState::new(one(1.0), one(0.0), 1.0).unwrap();
    let out = metaplectic_apply(&s, &SymplecticGenerator::vp(&one(1.0))).unwrap();
    assert!((out.w()[(0, 0)] - 1.0).abs() < 1e-15 && (out.y()[(0, 0)] - 1.0).abs() < 1e-15);

    let g = SymplecticGenerator::ml(&one(2.0));
    let out = metaplectic_apply(&s, &g).unwrap();
    let sg = g.matrix(1).unwrap();
    let want = sg.matrix() * covariance(&s).sigma() * sg.matrix().transpose();
    assert!(max_abs(&(covariance(&out).sigma() - &want)) < 1e-14);
    assert!((covariance(&out).xx()[(0, 0)] - 0.125).abs() < 1e-14);

    assert!(metaplectic_apply(&s, &SymplecticGenerator::ml(&one(0.0))).is_err());
}

#[test]
fn fourier_of_squeezed_state_by_quadrature() {
    // Numerical ħ-Fourier transform of ψ_{W,Y} at a few points compared
    // with the amplitude of the J-image, up to a global phase.
    let hbar = 0.8;
    let s = GaussianState::new(one(1.7), one(-0.6), hbar).unwrap();
    let t = metaplectic_apply(&s, &SymplecticGenerator::J).unwrap();
    let ft = |p: f64| {
        let k = 6000;
        let h = 24.0 / k as f64;
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for i in 0..=k {
            let x = -12.0 + h * i as f64;
            let w = if i == 0 || i == k { 0.5 } else { 1.0 };
            acc += s.amplitude(&Vector::from_element(1, x)) * num_complex::Complex64::from_polar(w, -p * x / hbar);
        }
        acc * h / (2.0 * PI * hbar).sqrt()
    };
    let phase = ft(0.0) / t.amplitude(&Vector::from_element(1, 0.0));
    assert!((phase.norm() - 1.0).abs() < 1e-9);
    for p in [-1.5, -0.3, 0.4, 2.0] {
        let want = t.amplitude(&Vector::from_element(1, p)) * phase;
        assert!((ft(p) - want).norm() < 1e-9, "p = {p}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn wigner_matrix_is_symplectic_spd(seed in 0u64..10_000, n in 1usize..=3, hbar in 0.1f64..5.0) {
        let g = wigner_matrix(&random_state(seed, n, hbar));
        prop_assert!(is_symplectic(&g, 1e-8).unwrap().holds);
        prop_assert!(g.clone().symmetric_eigenvalues().min() > 0.0);
        prop_assert!((g.determinant() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn pure_states_saturate(seed in 0u64..10_000, n in 1usize..=3, hbar in 0.1f64..5.0) {
        let cov = covariance(&random_state(seed, n, hbar));
        prop_assert!((cov.sigma().determinant() - (hbar / 2.0).powi(2 * n as i32)).abs() < 1e-8);
        let v = quantum_condition_check(&cov, 1e-9).unwrap();
        prop_assert!(v.passes && v.blob_unique);
        prop_assert!((v.capacity_of_cov_ellipsoid - PI * hbar).abs() < 1e-8 * hbar);
    }

    #[test]
    fn metaplectic_covariance_transport(seed in 0u64..10_000, n in 1usize..=3) {
        let s = random_state(seed, n, 1.0);
        let g = random_generator(seed, n);
        let out = metaplectic_apply(&s, &g).unwrap();
        let sg = g.matrix(n).unwrap();
        let want = sg.matrix() * covariance(&s).sigma() * sg.matrix().transpose();
        prop_assert!(max_abs(&(covariance(&out).sigma() - &want)) <= 1e-9 * max_abs(&want).max(1.0));
    }

    #[test]
    fn verdict_equivalences(seed in 0u64..10_000, n in 1usize..=3, passing: bool) {
        let cov = sampling::random_covariance(seed, n, 1.0, passing).unwrap();
        let v = quantum_condition_check(&cov, 1e-9).unwrap();
        prop_assert_eq!(v.passes, v.capacity_passes);
        if v.passes {
            prop_assert!(v.rs_margins.iter().all(|m| *m >= -1e-9));
        }
        prop_assert_eq!(v.rs_margins, robertson_schrodinger_check(&cov));
    }

    #[test]
    fn witness_blob_sits_inside_covariance_ellipsoid(seed in 0u64..10_000, n in 1usize..=3) {
        let cov = sampling::random_covariance(seed, n, 1.0, true).unwrap();
        let v = quantum_condition_check(&cov, 1e-9).unwrap();
        let g = linalg::from_rows(v.blob.as_ref().unwrap()).unwrap();
        let omega = cov.ellipsoid().unwrap();
        // Löwner oracle: G − (ħ/2)Σ⁻¹ ⪰ 0.
        let gap = &g - cov.sigma().clone().try_inverse().unwrap() * 0.5;
        prop_assert!(gap.symmetric_eigenvalues().min() >= -1e-9 * max_abs(&g));
        prop_assert!(max_abs(&(omega.matrix() - cov.sigma().clone().try_inverse().unwrap() * 0.5)) < 1e-9 * max_abs(omega.matrix()));
    }

    #[test]
    fn blob_state_covariance_round_trip(seed in 0u64..10_000, n in 1usize..=3) {
        let b = sampling::random_blob(seed, n, 1.0).unwrap();
        let cov = covariance(&blob_to_gaussian(&b).unwrap());
        let m = cov.ellipsoid().unwrap();
        prop_assert!(max_abs(&(m.matrix() - b.g())) <= 1e-9 * max_abs(b.g()));
    }
}
