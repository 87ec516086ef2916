//! Periodically modulated Jacobi parameters and the trace criterion.
//!
//! Parameters of the form `a_n = α_n √((n+t)(n+s))`, `b_n = β_n n + γ_n` with
//! `N`-periodic `α, β, γ` are classified by the period-`N` transfer-matrix
//! product at spectral parameter zero:
//!
//! * `|tr X₀(0)| > 2`: the essential spectrum is empty;
//! * `|tr X₀(0)| < 2`: the spectrum is purely absolutely continuous on ℝ;
//! * `|tr X₀(0)| = 2` with `X₀(0)` not diagonalizable: the essential spectrum
//!   is the closure of `{x : τ(x) < 0}` for the affine polynomial `τ` built
//!   by [`tau`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Mat2 = [[f64; 2]; 2];

/// Tolerance for deciding `X₀(0) = ±I` entrywise.
pub const SCALAR_TOL: f64 = 1e-12;
/// Agreement required between the fp trace and an exactly known `±2`.
pub const TRACE_CROSSCHECK_TOL: f64 = 1e-9;
/// Relative tolerance used when no exact regime is supplied.
pub const CRITICAL_REL_TOL: f64 = 1e-12;

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

pub fn det(m: &Mat2) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

pub fn trace(m: &Mat2) -> f64 {
    m[0][0] + m[1][1]
}

const IDENTITY: Mat2 = [[1.0, 0.0], [0.0, 1.0]];

/// `N`-periodic modulation data. Subscripts are taken modulo `N`, so
/// `alpha(-1)` is `α_{N-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicModulation {
    alpha: Vec<f64>,
    beta: Vec<f64>,
    gamma: Vec<f64>,
    t: f64,
    s: f64,
}

impl PeriodicModulation {
    pub fn new(alpha: Vec<f64>, beta: Vec<f64>, gamma: Vec<f64>, t: f64, s: f64) -> Result<Self> {
        let n = alpha.len();
        if n == 0 {
            return Err(Error::invalid("modulation period must be at least 1"));
        }
        if beta.len() != n || gamma.len() != n {
            return Err(Error::invalid(format!(
                "alpha, beta, gamma must share the period (got {}, {}, {})",
                n,
                beta.len(),
                gamma.len()
            )));
        }
        if let Some(i) = alpha.iter().position(|a| !(a.is_finite() && *a > 0.0)) {
            return Err(Error::invalid(format!("alpha[{i}] = {} must be positive", alpha[i])));
        }
        if beta.iter().chain(&gamma).any(|x| !x.is_finite()) {
            return Err(Error::invalid("beta and gamma must be finite"));
        }
        if !(t > 0.0 && t.is_finite()) || !(s > 0.0 && s.is_finite()) {
            return Err(Error::invalid(format!("offsets t = {t}, s = {s} must both be positive")));
        }
        Ok(Self { alpha, beta, gamma, t, s })
    }

    pub fn period(&self) -> usize {
        self.alpha.len()
    }

    fn wrap(&self, n: i64) -> usize {
        n.rem_euclid(self.period() as i64) as usize
    }

    pub fn alpha(&self, n: i64) -> f64 {
        self.alpha[self.wrap(n)]
    }

    pub fn beta(&self, n: i64) -> f64 {
        self.beta[self.wrap(n)]
    }

    pub fn gamma(&self, n: i64) -> f64 {
        self.gamma[self.wrap(n)]
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// `α_n √((n+t)(n+s))`.
    pub fn a(&self, n: usize) -> f64 {
        let x = n as f64;
        self.alpha(n as i64) * ((x + self.t) * (x + self.s)).sqrt()
    }

    /// `β_n n + γ_n`.
    pub fn b(&self, n: usize) -> f64 {
        self.beta(n as i64) * n as f64 + self.gamma(n as i64)
    }
}

/// One-step transfer matrix `B_n(0)`.
pub fn transfer_matrix(m: &PeriodicModulation, n: i64) -> Mat2 {
    let an = m.alpha(n);
    [[0.0, 1.0], [-m.alpha(n - 1) / an, -m.beta(n) / an]]
}

/// `X_i(0) = B_{i+N-1}(0) ⋯ B_{i+1}(0) B_i(0)`.
pub fn cyclic_monodromy(m: &PeriodicModulation, i: i64) -> Mat2 {
    let n = m.period() as i64;
    (i..i + n).fold(IDENTITY, |acc, k| mat_mul(&transfer_matrix(m, k), &acc))
}

/// What is known exactly about the trace, independent of rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExactRegime {
    /// Nothing known; decide from the floating-point trace.
    Unknown,
    /// `|tr| ≠ 2` is known exactly.
    Regular,
    /// `tr = 2·sign` exactly.
    Critical { sign: i8 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Monodromy {
    pub x0: Mat2,
    pub trace: f64,
    /// Sign of the trace when `|tr| ≥ 2`, zero inside `(-2, 2)`.
    pub epsilon: i8,
    /// Only meaningful at `|tr| = 2`: whether `X₀(0) = ±I`.
    pub diagonalizable_at_pm2: bool,
    pub regime: ExactRegime,
}

impl Monodromy {
    /// Pins the trace to exactly `2·sign`, as established by an exact
    /// parameter predicate.
    pub fn with_exact_critical(mut self, sign: i8) -> Self {
        let sign = if sign < 0 { -1 } else { 1 };
        self.regime = ExactRegime::Critical { sign };
        self.epsilon = sign;
        self.diagonalizable_at_pm2 = is_scalar(&self.x0, sign as f64);
        self
    }

    /// Declares that `|tr| ≠ 2` holds exactly.
    pub fn with_exact_regular(mut self) -> Self {
        self.regime = ExactRegime::Regular;
        self.epsilon = if self.trace.abs() < 2.0 { 0 } else { self.trace.signum() as i8 };
        self.diagonalizable_at_pm2 = false;
        self
    }

    /// Sign of the critical trace when this monodromy sits at `|tr| = 2`.
    fn critical_sign(&self) -> Option<i8> {
        match self.regime {
            ExactRegime::Critical { sign } => Some(sign),
            ExactRegime::Regular => None,
            ExactRegime::Unknown => near_pm2(self.trace),
        }
    }
}

fn near_pm2(trace: f64) -> Option<i8> {
    if (trace.abs() - 2.0).abs() <= CRITICAL_REL_TOL * 2.0 {
        Some(if trace > 0.0 { 1 } else { -1 })
    } else {
        None
    }
}

fn is_scalar(x: &Mat2, lambda: f64) -> bool {
    (0..2).all(|i| (0..2).all(|j| (x[i][j] - lambda * IDENTITY[i][j]).abs() <= SCALAR_TOL))
}

/// Monodromy `X₀(0)` over one period, with the regime left for the
/// floating-point trace to decide.
pub fn monodromy(m: &PeriodicModulation) -> Monodromy {
    let x0 = cyclic_monodromy(m, 0);
    let tr = trace(&x0);
    let mono = Monodromy {
        x0,
        trace: tr,
        epsilon: 0,
        diagonalizable_at_pm2: false,
        regime: ExactRegime::Unknown,
    };
    match near_pm2(tr) {
        Some(sign) => Monodromy { regime: ExactRegime::Unknown, ..mono.with_exact_critical(sign) },
        None => Monodromy { regime: ExactRegime::Unknown, ..mono.with_exact_regular() },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PhaseKind {
    /// Purely discrete spectrum.
    EmptyEssential,
    /// Absolutely continuous spectrum filling the real line.
    FullLineAC,
    /// Essential spectrum equal to a closed half-line.
    CriticalHalfLine,
}

impl PhaseKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            PhaseKind::EmptyEssential => "EmptyEssential",
            PhaseKind::FullLineAC => "FullLineAC",
            PhaseKind::CriticalHalfLine => "CriticalHalfLine",
        }
    }
}

impl std::fmt::Display for PhaseKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Phase from the trace criterion.
pub fn classify(mono: &Monodromy) -> Result<PhaseKind> {
    if let Some(sign) = mono.critical_sign() {
        let expected = 2.0 * sign as f64;
        if (mono.trace - expected).abs() > TRACE_CROSSCHECK_TOL {
            return Err(Error::TraceMismatch {
                trace: mono.trace,
                expected: format!("tr = {expected}"),
            });
        }
        if mono.diagonalizable_at_pm2 {
            return Err(Error::UnsupportedRegime(format!(
                "|tr X0(0)| = 2 but X0(0) is a multiple of the identity (tr = {}); \
                 the half-line criterion requires a non-diagonalizable monodromy",
                mono.trace
            )));
        }
        return Ok(PhaseKind::CriticalHalfLine);
    }
    let t = mono.trace.abs();
    if t < 2.0 {
        Ok(PhaseKind::FullLineAC)
    } else if t > 2.0 {
        Ok(PhaseKind::EmptyEssential)
    } else {
        Err(Error::TraceMismatch {
            trace: mono.trace,
            expected: "|tr| != 2".into(),
        })
    }
}

/// Limits `s_n = α_{n-1}` and `r_n = (β_n/2)(t+s) - γ_n`, `n = 0..N`.
pub fn limit_sequences(m: &PeriodicModulation) -> (Vec<f64>, Vec<f64>) {
    let n = m.period() as i64;
    let s = (0..n).map(|i| m.alpha(i - 1)).collect();
    let r = (0..n)
        .map(|i| 0.5 * m.beta(i) * (m.t() + m.s()) - m.gamma(i))
        .collect();
    (s, r)
}

/// Affine `τ(x) = c1·x + c0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauPolynomial {
    pub c1: f64,
    pub c0: f64,
    /// Per-index contributions `(c1_i, c0_i)`, one per residue of the period.
    pub summands: Vec<(f64, f64)>,
}

impl TauPolynomial {
    pub fn eval(&self, x: f64) -> f64 {
        self.c1 * x + self.c0
    }

    /// Zero of τ.
    pub fn root(&self) -> Result<f64> {
        if self.c1 == 0.0 {
            return Err(Error::DegenerateTau { c0: self.c0 });
        }
        Ok(-self.c0 / self.c1)
    }
}

/// Builds `τ(x) = Σ_i [ s_i/α_{i-1} (1 - ε X_i[0][0]) - (x + r_i)/α_{i-1} ε X_i[1][0] ]`.
pub fn tau(m: &PeriodicModulation, mono: &Monodromy, s: &[f64], r: &[f64]) -> Result<TauPolynomial> {
    if classify(mono)? != PhaseKind::CriticalHalfLine {
        return Err(Error::InvalidState(format!(
            "tau is only defined at |tr X0(0)| = 2 (tr = {})",
            mono.trace
        )));
    }
    let n = m.period();
    if s.len() != n || r.len() != n {
        return Err(Error::invalid(format!(
            "limit sequences must have the period length {n} (got {}, {})",
            s.len(),
            r.len()
        )));
    }
    let eps = mono.epsilon as f64;
    let summands: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let x = cyclic_monodromy(m, i as i64);
            let alpha_prev = m.alpha(i as i64 - 1);
            let slope = -eps * x[1][0] / alpha_prev;
            let constant = s[i] / alpha_prev * (1.0 - eps * x[0][0]) + slope * r[i];
            (slope, constant)
        })
        .collect();
    let c1 = summands.iter().map(|(c, _)| c).sum();
    let c0 = summands.iter().map(|(_, c)| c).sum();
    Ok(TauPolynomial { c1, c0, summands })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `[endpoint, ∞)`
    Up,
    /// `(-∞, endpoint]`
    Down,
}

/// Closed half-line of the real axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfLine {
    pub endpoint: f64,
    pub direction: Direction,
}

impl HalfLine {
    pub fn contains(&self, x: f64) -> bool {
        match self.direction {
            Direction::Up => x >= self.endpoint,
            Direction::Down => x <= self.endpoint,
        }
    }

    /// `(lo, hi)` with an infinite end.
    pub fn bounds(&self) -> (f64, f64) {
        match self.direction {
            Direction::Up => (self.endpoint, f64::INFINITY),
            Direction::Down => (f64::NEG_INFINITY, self.endpoint),
        }
    }
}

/// Closure of `τ⁻¹((-∞, 0))`.
pub fn essential_halfline(tau: &TauPolynomial) -> Result<HalfLine> {
    let endpoint = tau.root()?;
    let direction = if tau.c1 < 0.0 { Direction::Up } else { Direction::Down };
    Ok(HalfLine { endpoint, direction })
}

/// Partial sums `T_k = Σ_{n=1}^{k} |x_{n+N} - x_n|`, returned for
/// `k = 1..=n_terms`.
///
/// Boundedness of `T_k` is membership in the Stolz class of period `N`; a
/// finite prefix can only show a flattening trend, so no verdict is given.
pub fn stolz_partial_sums(x: impl Fn(usize) -> f64, period: usize, n_terms: usize) -> Result<Vec<f64>> {
    if period == 0 {
        return Err(Error::invalid("Stolz period must be at least 1"));
    }
    if n_terms < 2 * period {
        return Err(Error::invalid(format!(
            "need at least {} terms for period {period}, got {n_terms}",
            2 * period
        )));
    }
    let mut acc = 0.0;
    Ok((1..=n_terms)
        .map(|n| {
            acc += (x(n + period) - x(n)).abs();
            acc
        })
        .collect())
}

/// Classification outcome for one Jacobi operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseReport {
    pub kind: PhaseKind,
    pub trace: f64,
    pub tau: Option<TauPolynomial>,
    pub essential_spectrum: Option<HalfLine>,
    /// Closed-form endpoint for the critical clause, when one exists.
    pub closed_form_endpoint: Option<f64>,
    /// Parameter condition that selected the phase, e.g. `g = 1/2`.
    pub clause: String,
    pub notes: String,
}
