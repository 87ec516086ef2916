#![allow(dead_code)]

use nalgebra::DMatrix;
use rabi_spectra::{ModelSpec, SectorLabel, Sign, SymTridiag};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Dense symmetric eigensolver reference (nalgebra), sorted ascending.
pub fn dense_eigenvalues(m: &SymTridiag) -> Vec<f64> {
    let n = m.n_max();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        a[(i, i)] = m.diag()[i];
        if i + 1 < n {
            a[(i, i + 1)] = m.offdiag()[i];
            a[(i + 1, i)] = m.offdiag()[i];
        }
    }
    let mut ev: Vec<f64> = a.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn sorted_count_below(sorted: &[f64], lambda: f64) -> usize {
    sorted.partition_point(|&x| x < lambda)
}

fn parity(n: usize) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Jacobi coefficients `(a_n, b_n)` written directly from the sector
/// formulas, independent of the library's modulation form.
pub fn closed_form(model: &ModelSpec, sector: SectorLabel, n: usize) -> (f64, f64) {
    let pm = sector.sign.value();
    let mu = sector.mu.unwrap_or(0) as f64;
    let x = n as f64;
    let sq = ((2.0 * x + 1.0 + mu) * (2.0 * x + 2.0 + mu)).sqrt();
    match *model {
        ModelSpec::IntensityDependent { kappa, g, delta } => (
            g * ((x + 1.0) * (x + 2.0 * kappa)).sqrt(),
            x + pm * parity(n) * delta / 2.0,
        ),
        ModelSpec::TwoPhoton { g, delta } => {
            (g * sq, 2.0 * x + mu + pm * parity(n) * delta / 2.0)
        }
        ModelSpec::AnisotropicTwoPhoton { g_minus, g_plus, delta } => {
            let g = (g_plus + g_minus) / 2.0;
            let gp = (g_plus - g_minus) / 2.0;
            anisotropic_formula(g, gp, delta, sector, n)
        }
        ModelSpec::TwoPhotonRabiStark { g, delta, kappa } => (
            g * sq,
            (2.0 * x + mu) * (1.0 + pm * parity(n) * kappa) + pm * parity(n) * delta / 2.0,
        ),
    }
}

/// Anisotropic coefficients as functions of `(g, g')`, admitting `g' = 0`.
pub fn anisotropic_formula(g: f64, gp: f64, delta: f64, sector: SectorLabel, n: usize) -> (f64, f64) {
    let pm = sector.sign.value();
    let mu = sector.mu.unwrap_or(0) as f64;
    let x = n as f64;
    let sq = ((2.0 * x + 1.0 + mu) * (2.0 * x + 2.0 + mu)).sqrt();
    (
        (g - pm * parity(n) * gp) * sq,
        2.0 * x + mu + pm * parity(n) * delta / 2.0,
    )
}

pub fn random_model(rng: &mut ChaCha8Rng, family: usize) -> ModelSpec {
    let delta = rng.random_range(-4.0..4.0);
    match family % 4 {
        0 => ModelSpec::intensity_dependent(
            rng.random_range(0.05..3.0),
            rng.random_range(0.05..1.0),
            delta,
        )
        .unwrap(),
        1 => ModelSpec::two_photon(rng.random_range(0.05..1.0), delta).unwrap(),
        2 => loop {
            let gm = rng.random_range(0.02..1.0);
            let gp = rng.random_range(0.02..1.0);
            if gm != gp {
                break ModelSpec::anisotropic(gm, gp, delta).unwrap();
            }
        },
        _ => ModelSpec::rabi_stark(
            rng.random_range(0.05..1.0),
            delta,
            rng.random_range(-1.8..1.8),
        )
        .unwrap(),
    }
}

pub fn plus(mu: u8) -> SectorLabel {
    SectorLabel::parity(mu, Sign::Plus)
}
