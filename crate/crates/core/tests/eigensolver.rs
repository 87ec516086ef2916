mod common;

use common::{dense_eigenvalues, sorted_count_below};
use proptest::prelude::*;
use rabi_spectra::tridiag::{eigenvalues_all, lowest_eigenvalues};
use rabi_spectra::{
    eigenvalues_bisect, jacobi_params, sturm_count, Interval, ModelSpec, SectorLabel, Sign,
    SymTridiag,
};

fn tridiag_strategy(max_n: usize) -> impl Strategy<Value = SymTridiag> {
    (1..=max_n).prop_flat_map(|n| {
        (
            prop::collection::vec(-10.0..10.0f64, n),
            prop::collection::vec(0.01..5.0f64, n - 1),
        )
            .prop_map(|(d, e)| SymTridiag::new(d, e).unwrap())
    })
}

proptest! {
    #[test]
    fn sturm_count_is_monotone(m in tridiag_strategy(20), x in -30.0..30.0f64, dx in 0.0..10.0f64) {
        prop_assert!(sturm_count(&m, x).unwrap() <= sturm_count(&m, x + dx).unwrap());
    }

    #[test]
    fn bisection_matches_dense(m in tridiag_strategy(12)) {
        let s = eigenvalues_bisect(&m, m.gershgorin(), 1e-13).unwrap();
        let dense = dense_eigenvalues(&m);
        prop_assert_eq!(s.len(), m.n_max());
        for (x, y) in s.eigenvalues.iter().zip(&dense) {
            prop_assert!((x - y).abs() <= 1e-10, "{} vs {}", x, y);
        }
    }

    #[test]
    fn eigenvalues_strictly_increase_inside_gershgorin(m in tridiag_strategy(15)) {
        let s = eigenvalues_all(&m);
        let d = m.diag();
        let amax = m.offdiag().iter().copied().fold(0.0, f64::max);
        let lo = d.iter().copied().fold(f64::INFINITY, f64::min) - 2.0 * amax;
        let hi = d.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 2.0 * amax;
        for w in s.eigenvalues.windows(2) {
            prop_assert!(w[0] < w[1]);
        }
        for &x in &s.eigenvalues {
            prop_assert!(x >= lo - 1e-9 && x <= hi + 1e-9);
        }
    }

    #[test]
    fn window_count_matches_sturm(m in tridiag_strategy(15), a in -20.0..20.0f64, w in 0.0..15.0f64) {
        let win = Interval::new(a, a + w);
        let s = eigenvalues_bisect(&m, win, 1e-12).unwrap();
        let expect = sturm_count(&m, win.hi).unwrap() - sturm_count(&m, win.lo).unwrap();
        prop_assert_eq!(s.len(), expect);
    }

    #[test]
    fn leading_sections_interlace(m in tridiag_strategy(14)) {
        prop_assume!(m.n_max() >= 2);
        let full = dense_eigenvalues(&m);
        let sub = eigenvalues_all(&m.leading(m.n_max() - 1).unwrap()).eigenvalues;
        for (j, mu) in sub.iter().enumerate() {
            prop_assert!(full[j] <= *mu + 1e-10 && *mu <= full[j + 1] + 1e-10);
        }
    }
}

#[test]
fn median_count_two_photon_section() {
    let model = ModelSpec::two_photon(0.1, 1.0).unwrap();
    let p = jacobi_params(&model, SectorLabel::parity(0, Sign::Plus)).unwrap();
    let m = p.truncation(50).unwrap();
    let dense = dense_eigenvalues(&m);
    let median = 0.5 * (dense[24] + dense[25]);
    assert_eq!(sturm_count(&m, median).unwrap(), 25);
}

#[test]
fn intensity_section_matches_dense() {
    let model = ModelSpec::intensity_dependent(1.0, 0.25, 2.0).unwrap();
    let p = jacobi_params(&model, SectorLabel::signed(Sign::Plus)).unwrap();
    let m = p.truncation(200).unwrap();
    let s = eigenvalues_bisect(&m, m.gershgorin(), 1e-12).unwrap();
    let dense = dense_eigenvalues(&m);
    assert_eq!(s.len(), 200);
    for (x, y) in s.eigenvalues.iter().zip(&dense) {
        assert!((x - y).abs() <= 1e-10, "{x} vs {y}");
    }
}

#[test]
fn lowest_ten_intensity_match_dense() {
    let model = ModelSpec::intensity_dependent(1.0, 0.25, 0.0).unwrap();
    let p = jacobi_params(&model, SectorLabel::signed(Sign::Plus)).unwrap();
    let m = p.truncation(100).unwrap();
    let low = lowest_eigenvalues(&m, 10, 1e-12).unwrap();
    let dense = dense_eigenvalues(&m);
    for (x, y) in low.eigenvalues.iter().zip(&dense) {
        assert!((x - y).abs() <= 1e-10);
    }
    for lambda in [-3.0, 0.0, 0.5, 7.25, 40.0] {
        assert_eq!(sturm_count(&m, lambda).unwrap(), sorted_count_below(&dense, lambda));
    }
}

#[test]
fn full_window_count_is_n_max() {
    let model = ModelSpec::rabi_stark(0.3, 1.0, 0.4).unwrap();
    let p = jacobi_params(&model, SectorLabel::parity(1, Sign::Minus)).unwrap();
    for n in [2, 17, 64, 300] {
        let m = p.truncation(n).unwrap();
        assert_eq!(eigenvalues_all(&m).len(), n);
    }
}
