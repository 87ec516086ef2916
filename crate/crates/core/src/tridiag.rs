//! Symmetric tridiagonal kernel: Sturm-sequence counting and windowed
//! bisection.
//!
//! Every eigenvalue query goes through [`sturm_count`]. The number of
//! negative pivots of the LDLᵀ factorisation of `T - λI` equals the number of
//! eigenvalues strictly below `λ`, so a window `[lo, hi)` holds
//! `count(hi) - count(lo)` eigenvalues and bisection on counts isolates each
//! one without ever forming eigenvectors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Half-open real interval `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn is_empty(&self) -> bool {
        !(self.lo < self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x < self.hi
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo).max(0.0)
    }
}

/// A finite symmetric tridiagonal matrix with strictly positive off-diagonal
/// (a truncated Jacobi matrix).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymTridiag {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::invalid("tridiagonal matrix must have n_max >= 1"));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::invalid(format!(
                "offdiag length {} does not match diag length {} - 1",
                offdiag.len(),
                diag.len()
            )));
        }
        if let Some(i) = diag.iter().position(|d| !d.is_finite()) {
            return Err(Error::invalid(format!("diag[{i}] is not finite")));
        }
        if let Some(i) = offdiag.iter().position(|a| !(a.is_finite() && *a > 0.0)) {
            return Err(Error::invalid(format!(
                "offdiag[{i}] = {} must be finite and strictly positive",
                offdiag[i]
            )));
        }
        Ok(Self { diag, offdiag })
    }

    /// Leading `n × n` section of the Jacobi matrix with off-diagonal `a` and
    /// diagonal `b`.
    pub fn from_fn(n: usize, a: impl Fn(usize) -> f64, b: impl Fn(usize) -> f64) -> Result<Self> {
        let diag = (0..n).map(&b).collect();
        let offdiag = (0..n.saturating_sub(1)).map(&a).collect();
        Self::new(diag, offdiag)
    }

    pub fn n_max(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// Leading principal `n × n` submatrix.
    pub fn leading(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.n_max() {
            return Err(Error::invalid(format!(
                "leading section size {n} outside 1..={}",
                self.n_max()
            )));
        }
        Ok(Self {
            diag: self.diag[..n].to_vec(),
            offdiag: self.offdiag[..n - 1].to_vec(),
        })
    }

    /// Row-wise Gershgorin enclosure of the spectrum, as a closed interval
    /// widened by one ulp-scale margin so that `[lo, hi)` holds every
    /// eigenvalue.
    pub fn gershgorin(&self) -> Interval {
        let n = self.n_max();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.offdiag[i - 1] } else { 0.0 };
            let right = if i + 1 < n { self.offdiag[i] } else { 0.0 };
            let r = left + right;
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        let pad = 4.0 * f64::EPSILON * (lo.abs().max(hi.abs()) + 1.0) * n as f64;
        Interval::new(lo - pad, hi + pad)
    }

    pub fn spectral_radius_bound(&self) -> f64 {
        let g = self.gershgorin();
        g.lo.abs().max(g.hi.abs())
    }

    /// `1e-12 · max(1, ρ)` with `ρ` the Gershgorin radius.
    pub fn default_tol(&self) -> f64 {
        1e-12 * self.spectral_radius_bound().max(1.0)
    }
}

/// Eigenvalues of a truncation, ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedSpectrum {
    pub eigenvalues: Vec<f64>,
    pub n_max: usize,
    pub tol: f64,
    pub window: Option<Interval>,
}

impl TruncatedSpectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

/// Number of eigenvalues of `m` strictly less than `lambda`.
pub fn sturm_count(m: &SymTridiag, lambda: f64) -> Result<usize> {
    if !lambda.is_finite() {
        return Err(Error::invalid(format!("sturm_count: lambda = {lambda} is not finite")));
    }
    Ok(count_below(m, lambda))
}

fn count_below(m: &SymTridiag, lambda: f64) -> usize {
    let diag = &m.diag;
    let off = &m.offdiag;
    let mut count = 0;
    let mut d = 1.0;
    for i in 0..diag.len() {
        let shifted = diag[i] - lambda;
        d = if i == 0 { shifted } else { shifted - off[i - 1] * off[i - 1] / d };
        if d == 0.0 {
            // zero pivot: nudge off zero so the next step stays finite and
            // an eigenvalue sitting exactly at lambda is not counted
            d = (diag[i].abs() + lambda.abs() + 1.0) * f64::EPSILON;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// All eigenvalues of `m` inside `window = [lo, hi)`, each located to a
/// half-width of at most `tol`.
pub fn eigenvalues_bisect(m: &SymTridiag, window: Interval, tol: f64) -> Result<TruncatedSpectrum> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::invalid(format!("bisection tolerance must be positive, got {tol}")));
    }
    if !window.lo.is_finite() || !window.hi.is_finite() {
        return Err(Error::invalid("bisection window bounds must be finite"));
    }
    let mut eigenvalues = Vec::new();
    if !window.is_empty() {
        let n_lo = count_below(m, window.lo);
        let n_hi = count_below(m, window.hi);
        if n_hi > n_lo {
            eigenvalues.reserve(n_hi - n_lo);
            bisect(m, window.lo, window.hi, n_lo, n_hi, tol, &mut eigenvalues);
        }
    }
    Ok(TruncatedSpectrum {
        eigenvalues,
        n_max: m.n_max(),
        tol,
        window: Some(window),
    })
}

/// Full spectrum over the Gershgorin window with the default tolerance.
pub fn eigenvalues_all(m: &SymTridiag) -> TruncatedSpectrum {
    let window = m.gershgorin();
    let tol = m.default_tol();
    let mut spectrum = eigenvalues_bisect(m, window, tol).expect("gershgorin window is finite");
    spectrum.window = None;
    spectrum
}

/// The `k` smallest eigenvalues (fewer when `k > n_max`).
pub fn lowest_eigenvalues(m: &SymTridiag, k: usize, tol: f64) -> Result<TruncatedSpectrum> {
    let g = m.gershgorin();
    let k = k.min(m.n_max());
    if k == 0 {
        return eigenvalues_bisect(m, Interval::new(g.lo, g.lo), tol);
    }
    // smallest hi with count(hi) >= k, found by bisection on counts
    let (mut lo, mut hi) = (g.lo, g.hi);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(m, mid) >= k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut spectrum = eigenvalues_bisect(m, Interval::new(g.lo, hi), tol)?;
    spectrum.eigenvalues.truncate(k);
    Ok(spectrum)
}

fn bisect(
    m: &SymTridiag,
    lo: f64,
    hi: f64,
    n_lo: usize,
    n_hi: usize,
    tol: f64,
    out: &mut Vec<f64>,
) {
    if n_hi == n_lo {
        return;
    }
    let mid = 0.5 * (lo + hi);
    if hi - lo <= 2.0 * tol || mid <= lo || mid >= hi {
        out.extend(std::iter::repeat_n(mid, n_hi - n_lo));
        return;
    }
    let n_mid = count_below(m, mid);
    bisect(m, lo, mid, n_lo, n_mid, tol, out);
    bisect(m, mid, hi, n_mid, n_hi, tol, out);
}

/// Partial sums `S_k = Σ_{n≤k} 1/a_n` for `k < n_terms`.
///
/// Divergence of these sums (Carleman's condition) makes the Jacobi operator
/// self-adjoint; the caller judges the trend.
pub fn carleman_partial_sums(a: impl Fn(usize) -> f64, n_terms: usize) -> Result<Vec<f64>> {
    let mut sums = Vec::with_capacity(n_terms);
    let mut acc = 0.0;
    for n in 0..n_terms {
        let an = a(n);
        if !(an > 0.0) || !an.is_finite() {
            return Err(Error::invalid(format!("a({n}) = {an} is not strictly positive")));
        }
        acc += 1.0 / an;
        sums.push(acc);
    }
    Ok(sums)
}
