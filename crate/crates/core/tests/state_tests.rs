mod common;

use micromaser::{DensityMatrix, DEFAULT_TAIL_TOL};
use num_complex::Complex64;

#[test]
fn thermal_state_matches_geometric_closed_form() {
    for &nbar in &[0.5, 1.0, 5.0, 10.0] {
        let rho = DensityMatrix::thermal_state(nbar, DEFAULT_TAIL_TOL).unwrap();
        let d = rho.diagnostics();
        // Purity of a geometric distribution: (1-r)/(1+r) with r = nbar/(nbar+1).
        let expected_zeta = 1.0 - 1.0 / (2.0 * nbar + 1.0);
        assert!(
            (d.purity_deficit - expected_zeta).abs() < 1e-10,
            "nbar={nbar}: zeta={} expected {expected_zeta}",
            d.purity_deficit
        );
        // Renormalization folds the discarded geometric tail (order
        // tail_tol) back into every level, so the closed form holds to a
        // few multiples of the truncation budget, not machine precision.
        assert!((rho.element(0, 0).re - 1.0 / (nbar + 1.0)).abs() < 1e-9);
        assert!((rho.trace() - 1.0).abs() < 1e-12);
        assert!(
            (d.mean_n - nbar).abs() < 1e-6,
            "mean {} vs {nbar}",
            d.mean_n
        );
        let q = d.mandel_q.expect("thermal field has photons");
        assert!((q - nbar).abs() < 1e-4, "thermal Mandel Q {} vs {nbar}", q);
    }
}

#[test]
fn thermal_state_zero_mean_is_vacuum() {
    let rho = DensityMatrix::thermal_state(0.0, DEFAULT_TAIL_TOL).unwrap();
    let d = rho.diagnostics();
    assert_eq!(rho.element(0, 0), Complex64::new(1.0, 0.0));
    assert_eq!(d.purity_deficit, 0.0);
    assert_eq!(d.mean_n, 0.0);
    assert_eq!(d.mandel_q, None);
}

#[test]
fn dephased_coherent_state_is_poissonian() {
    let mu = 10.0;
    let rho = DensityMatrix::dephased_coherent_state(mu, DEFAULT_TAIL_TOL).unwrap();
    let d = rho.diagnostics();
    assert!((d.mean_n - mu).abs() < 1e-6);
    let q = d.mandel_q.expect("field has photons");
    assert!(q.abs() < 1e-9, "Poissonian Mandel Q should vanish, got {q}");

    // Independent purity route: sum of squared Poisson weights in the log
    // domain, summed far past the state's own cutoff.
    let purity: f64 = (0..400)
        .map(|n| (-2.0 * mu + 2.0 * n as f64 * mu.ln() - 2.0 * common::ln_factorial(n)).exp())
        .sum();
    let zeta_oracle = 1.0 - purity;
    assert!(
        (d.purity_deficit - zeta_oracle).abs() < 1e-8,
        "zeta {} vs oracle {zeta_oracle}",
        d.purity_deficit
    );
    assert!((d.purity_deficit - 0.910219688115).abs() < 1e-9);
}

#[test]
fn fock_state_is_pure_with_sharp_number() {
    let rho = DensityMatrix::fock_state(5, 6).unwrap();
    let d = rho.diagnostics();
    assert!(
        rho.dim() >= 8,
        "occupied level needs headroom, dim={}",
        rho.dim()
    );
    assert_eq!(rho.element(5, 5), Complex64::new(1.0, 0.0));
    assert_eq!(d.purity_deficit, 0.0);
    assert_eq!(d.mean_n, 5.0);
    assert_eq!(d.variance_n, 0.0);
    assert_eq!(d.mandel_q, Some(-1.0));

    let vac = DensityMatrix::fock_state(0, 1).unwrap();
    assert_eq!(vac.diagnostics().mandel_q, None);
}

#[test]
fn fock_state_rejects_level_outside_basis() {
    assert!(DensityMatrix::fock_state(3, 2).is_err());
    assert!(DensityMatrix::fock_state(0, 0).is_err());
}

#[test]
fn constructors_reject_bad_parameters() {
    assert!(DensityMatrix::thermal_state(-1.0, DEFAULT_TAIL_TOL).is_err());
    assert!(DensityMatrix::thermal_state(f64::NAN, DEFAULT_TAIL_TOL).is_err());
    assert!(DensityMatrix::dephased_coherent_state(-0.5, DEFAULT_TAIL_TOL).is_err());
    // tail_tol outside (0, 1e-6]
    assert!(DensityMatrix::thermal_state(1.0, 0.0).is_err());
    assert!(DensityMatrix::thermal_state(1.0, 1e-5).is_err());
    assert!(DensityMatrix::thermal_state(1.0, -1e-10).is_err());
}

#[test]
fn constructors_satisfy_all_invariants() {
    let states = [
        DensityMatrix::thermal_state(10.0, DEFAULT_TAIL_TOL).unwrap(),
        DensityMatrix::dephased_coherent_state(10.0, DEFAULT_TAIL_TOL).unwrap(),
        DensityMatrix::fock_state(4, 10).unwrap(),
    ];
    for rho in &states {
        rho.validate().unwrap();
        let top2: f64 = rho.element(rho.dim() - 1, rho.dim() - 1).re
            + rho.element(rho.dim() - 2, rho.dim() - 2).re;
        assert!(top2 <= DEFAULT_TAIL_TOL, "tail band mass {top2}");
    }
}

#[test]
fn from_elements_enforces_hermiticity_and_trace() {
    let good = vec![
        Complex64::new(0.5, 0.0),
        Complex64::new(0.1, 0.2),
        Complex64::new(0.1, -0.2),
        Complex64::new(0.5, 0.0),
    ];
    let rho = DensityMatrix::from_elements(2, good.clone(), DEFAULT_TAIL_TOL).unwrap();
    // Mass sits on the top two levels of a dim-2 matrix, so the basis grows.
    assert!(rho.dim() > 2);
    assert_eq!(rho.element(0, 1), Complex64::new(0.1, 0.2));
    rho.validate().unwrap();

    let mut skew = good.clone();
    skew[1] = Complex64::new(0.3, 0.2);
    assert!(DensityMatrix::from_elements(2, skew, DEFAULT_TAIL_TOL).is_err());

    let mut off_trace = good;
    off_trace[0] = Complex64::new(0.3, 0.0);
    assert!(DensityMatrix::from_elements(2, off_trace, DEFAULT_TAIL_TOL).is_err());

    assert!(DensityMatrix::from_elements(0, vec![], DEFAULT_TAIL_TOL).is_err());
    assert!(
        DensityMatrix::from_elements(2, vec![Complex64::new(1.0, 0.0); 3], DEFAULT_TAIL_TOL)
            .is_err()
    );
}

#[test]
fn validate_flags_negative_eigenvalues() {
    // Hermitian, unit trace, but indefinite: diag(1.5, -0.5) plus headroom.
    let dim = 4;
    let mut elements = vec![Complex64::new(0.0, 0.0); dim * dim];
    elements[0] = Complex64::new(1.5, 0.0);
    elements[dim + 1] = Complex64::new(-0.5, 0.0);
    let rho = DensityMatrix::from_elements(dim, elements, DEFAULT_TAIL_TOL).unwrap();
    assert!(rho.validate().is_err());
}

#[test]
fn ensure_headroom_pads_without_touching_diagnostics() {
    let rho = DensityMatrix::thermal_state(10.0, DEFAULT_TAIL_TOL).unwrap();
    let before = rho.diagnostics();
    let padded = rho.ensure_headroom(6);
    assert_eq!(padded.dim(), rho.dim() + 6);
    let after = padded.diagnostics();
    assert!((before.purity_deficit - after.purity_deficit).abs() <= 1e-15);
    assert!((before.mean_n - after.mean_n).abs() <= 1e-15);
    for n in 0..rho.dim() {
        for m in 0..rho.dim() {
            assert_eq!(rho.element(n, m), padded.element(n, m));
        }
    }
    for n in rho.dim()..padded.dim() {
        assert_eq!(padded.element(n, n), Complex64::new(0.0, 0.0));
    }
    assert_eq!(rho.ensure_headroom(0).dim(), rho.dim());
}

#[test]
fn photon_distribution_tracks_the_diagonal() {
    let rho = DensityMatrix::thermal_state(3.0, DEFAULT_TAIL_TOL).unwrap();
    let dist = rho.photon_distribution();
    assert_eq!(dist.len(), rho.dim());
    let total: f64 = dist.iter().map(|&(_, p)| p).sum();
    assert!((total - 1.0).abs() < 1e-12);
    for window in dist.windows(2) {
        assert!(window[1].1 < window[0].1, "geometric weights must decay");
        assert!(window[1].1 >= 0.0);
    }
}
