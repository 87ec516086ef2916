//! The four Rabi-type Hamiltonians, their Jacobi-operator sectors, and the
//! exact regime predicates that select a spectral phase.
//!
//! Each Hamiltonian acts on `ℂ² ⊗ ℓ²(ℕ₀)` with basis `e^ν_m` (spin `ν = ±1`,
//! photon number `m`). Reordering the basis along `f_n = e^{±(-1)^n}_{p(n)}`
//! with `p(n) = n` (intensity-dependent) or `p(n) = 2n + μ` (two-photon
//! family) splits the operator into invariant sectors, each a Jacobi matrix
//! whose parameters have the modulated form `a_n = α_n √((n+t)(n+s))`,
//! `b_n = β_n n + γ_n` with period 2.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modulation::{
    classify, essential_halfline, limit_sequences, monodromy, tau, Direction, HalfLine,
    PeriodicModulation, PhaseKind, PhaseReport,
};
use crate::tridiag::SymTridiag;

/// Relative tolerance of the criticality predicates.
pub const CRITICAL_TOL: f64 = 1e-12;
/// Agreement required between the τ-derived and the closed-form endpoint.
pub const ENDPOINT_CROSSCHECK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum ModelSpec {
    /// `N̂ + (Δ/2)σ_z + g σ_x ⊗ ((N̂+2κ)^{1/2} â + â† (N̂+2κ)^{1/2})`
    IntensityDependent { kappa: f64, g: f64, delta: f64 },
    /// `N̂ + (Δ/2)σ_z + g σ_x ⊗ (â² + â†²)`
    TwoPhoton { g: f64, delta: f64 },
    /// `N̂ + (Δ/2)σ_z + (g₋σ₋ + g₊σ₊) ⊗ â†² + (g₊σ₋ + g₋σ₊) ⊗ â²`
    AnisotropicTwoPhoton { g_minus: f64, g_plus: f64, delta: f64 },
    /// `N̂ + σ_z ⊗ (κN̂ + Δ/2) + g σ_x ⊗ (â² + â†²)`
    TwoPhotonRabiStark { g: f64, delta: f64, kappa: f64 },
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::invalid(msg))
    }
}

fn finite(x: f64, name: &str) -> Result<()> {
    require(x.is_finite(), &format!("{name} must be finite"))
}

fn is_critical(x: f64, target: f64) -> bool {
    (x - target).abs() <= CRITICAL_TOL * target.abs().max(f64::MIN_POSITIVE)
}

impl ModelSpec {
    pub fn intensity_dependent(kappa: f64, g: f64, delta: f64) -> Result<Self> {
        let m = ModelSpec::IntensityDependent { kappa, g, delta };
        m.validate()?;
        Ok(m)
    }

    pub fn two_photon(g: f64, delta: f64) -> Result<Self> {
        let m = ModelSpec::TwoPhoton { g, delta };
        m.validate()?;
        Ok(m)
    }

    pub fn anisotropic(g_minus: f64, g_plus: f64, delta: f64) -> Result<Self> {
        let m = ModelSpec::AnisotropicTwoPhoton { g_minus, g_plus, delta };
        m.validate()?;
        Ok(m)
    }

    pub fn rabi_stark(g: f64, delta: f64, kappa: f64) -> Result<Self> {
        let m = ModelSpec::TwoPhotonRabiStark { g, delta, kappa };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ModelSpec::IntensityDependent { kappa, g, delta } => {
                finite(kappa, "kappa")?;
                finite(g, "g")?;
                finite(delta, "delta")?;
                require(kappa >= 0.0, "kappa must be non-negative")?;
                require(g > 0.0, "g must be positive")
            }
            ModelSpec::TwoPhoton { g, delta } => {
                finite(g, "g")?;
                finite(delta, "delta")?;
                require(g > 0.0, "g must be positive")
            }
            ModelSpec::AnisotropicTwoPhoton { g_minus, g_plus, delta } => {
                finite(g_minus, "g_minus")?;
                finite(g_plus, "g_plus")?;
                finite(delta, "delta")?;
                require(g_minus > 0.0, "g_minus must be positive")?;
                require(g_plus > 0.0, "g_plus must be positive")?;
                require(g_minus != g_plus, "g_minus and g_plus must differ")
            }
            ModelSpec::TwoPhotonRabiStark { g, delta, kappa } => {
                finite(g, "g")?;
                finite(delta, "delta")?;
                finite(kappa, "kappa")?;
                require(g > 0.0, "g must be positive")
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::IntensityDependent { .. } => "intensity",
            ModelSpec::TwoPhoton { .. } => "two-photon",
            ModelSpec::AnisotropicTwoPhoton { .. } => "anisotropic",
            ModelSpec::TwoPhotonRabiStark { .. } => "rabi-stark",
        }
    }

    pub fn delta(&self) -> f64 {
        match *self {
            ModelSpec::IntensityDependent { delta, .. }
            | ModelSpec::TwoPhoton { delta, .. }
            | ModelSpec::AnisotropicTwoPhoton { delta, .. }
            | ModelSpec::TwoPhotonRabiStark { delta, .. } => delta,
        }
    }

    /// Mean coupling `g`; for the anisotropic model `(g₊ + g₋)/2`.
    pub fn coupling(&self) -> f64 {
        match *self {
            ModelSpec::IntensityDependent { g, .. }
            | ModelSpec::TwoPhoton { g, .. }
            | ModelSpec::TwoPhotonRabiStark { g, .. } => g,
            ModelSpec::AnisotropicTwoPhoton { g_minus, g_plus, .. } => 0.5 * (g_plus + g_minus),
        }
    }

    /// Same model with the mean coupling replaced. The anisotropic model keeps
    /// its asymmetry `g' = (g₊ − g₋)/2`.
    pub fn with_coupling(&self, g: f64) -> Result<Self> {
        let m = match *self {
            ModelSpec::IntensityDependent { kappa, delta, .. } => {
                ModelSpec::IntensityDependent { kappa, g, delta }
            }
            ModelSpec::TwoPhoton { delta, .. } => ModelSpec::TwoPhoton { g, delta },
            ModelSpec::AnisotropicTwoPhoton { g_minus, g_plus, delta } => {
                let gp = 0.5 * (g_plus - g_minus);
                ModelSpec::AnisotropicTwoPhoton { g_minus: g - gp, g_plus: g + gp, delta }
            }
            ModelSpec::TwoPhotonRabiStark { delta, kappa, .. } => {
                ModelSpec::TwoPhotonRabiStark { g, delta, kappa }
            }
        };
        m.validate()?;
        Ok(m)
    }

    fn photon_stride(&self) -> usize {
        match self {
            ModelSpec::IntensityDependent { .. } => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ModelSpec::IntensityDependent { kappa, g, delta } => {
                write!(f, "intensity(kappa={kappa}, g={g}, delta={delta})")
            }
            ModelSpec::TwoPhoton { g, delta } => write!(f, "two-photon(g={g}, delta={delta})"),
            ModelSpec::AnisotropicTwoPhoton { g_minus, g_plus, delta } => {
                write!(f, "anisotropic(g_minus={g_minus}, g_plus={g_plus}, delta={delta})")
            }
            ModelSpec::TwoPhotonRabiStark { g, delta, kappa } => {
                write!(f, "rabi-stark(g={g}, delta={delta}, kappa={kappa})")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "+")]
    Plus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Minus => -1.0,
            Sign::Plus => 1.0,
        }
    }
}

/// Sector of the direct-sum decomposition: the `±` sign and, for the
/// two-photon family, the photon-number parity `μ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SectorLabel {
    pub sign: Sign,
    pub mu: Option<u8>,
}

impl SectorLabel {
    pub fn signed(sign: Sign) -> Self {
        Self { sign, mu: None }
    }

    pub fn parity(mu: u8, sign: Sign) -> Self {
        Self { sign, mu: Some(mu) }
    }
}

impl fmt::Display for SectorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(mu) = self.mu {
            write!(f, "{mu}")?;
        }
        f.write_str(match self.sign {
            Sign::Minus => "-",
            Sign::Plus => "+",
        })
    }
}

impl std::str::FromStr for SectorLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let sign = match s.chars().last() {
            Some('+') => Sign::Plus,
            Some('-') => Sign::Minus,
            _ => return Err(Error::invalid(format!("sector '{s}' must end in + or -"))),
        };
        match &s[..s.len() - 1] {
            "" => Ok(SectorLabel::signed(sign)),
            "0" => Ok(SectorLabel::parity(0, sign)),
            "1" => Ok(SectorLabel::parity(1, sign)),
            other => Err(Error::invalid(format!("sector parity '{other}' must be 0 or 1"))),
        }
    }
}

/// Invariant sectors in fixed order: `−, +` or `0−, 0+, 1−, 1+`.
pub fn sectors(model: &ModelSpec) -> Vec<SectorLabel> {
    match model {
        ModelSpec::IntensityDependent { .. } => {
            vec![SectorLabel::signed(Sign::Minus), SectorLabel::signed(Sign::Plus)]
        }
        _ => vec![
            SectorLabel::parity(0, Sign::Minus),
            SectorLabel::parity(0, Sign::Plus),
            SectorLabel::parity(1, Sign::Minus),
            SectorLabel::parity(1, Sign::Plus),
        ],
    }
}

fn check_sector(model: &ModelSpec, sector: SectorLabel) -> Result<u8> {
    match (model, sector.mu) {
        (ModelSpec::IntensityDependent { .. }, None) => Ok(0),
        (ModelSpec::IntensityDependent { .. }, Some(_)) => Err(Error::invalid(
            "intensity-dependent sectors carry no parity; use + or -",
        )),
        (_, Some(mu)) if mu <= 1 => Ok(mu),
        (_, Some(mu)) => Err(Error::invalid(format!("parity {mu} must be 0 or 1"))),
        (_, None) => Err(Error::invalid(format!(
            "{} sectors need a parity: 0+, 0-, 1+ or 1-",
            model.name()
        ))),
    }
}

/// Jacobi parameters of one sector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JacobiParams {
    pub model: ModelSpec,
    pub label: SectorLabel,
    pub modulation: PeriodicModulation,
}

impl JacobiParams {
    pub fn a(&self, n: usize) -> f64 {
        self.modulation.a(n)
    }

    pub fn b(&self, n: usize) -> f64 {
        self.modulation.b(n)
    }

    /// Leading `n_max × n_max` section.
    pub fn truncation(&self, n_max: usize) -> Result<SymTridiag> {
        SymTridiag::from_fn(n_max, |n| self.a(n), |n| self.b(n))
    }

    /// A constant `c > 0` with `a_n ≥ c (n + 1)` for every `n`.
    pub fn carleman_constant(&self) -> f64 {
        let m = &self.modulation;
        let alpha_min = (0..m.period() as i64).map(|i| m.alpha(i)).fold(f64::INFINITY, f64::min);
        alpha_min * (m.t().min(1.0) * m.s().min(1.0)).sqrt()
    }

    /// Lower bound on `Σ_{n≤k} 1/a_n` from `a_n ≤ α_max (n + (t+s)/2)`.
    pub fn carleman_lower_bound(&self, k: usize) -> f64 {
        let m = &self.modulation;
        let alpha_max = (0..m.period() as i64).map(|i| m.alpha(i)).fold(0.0, f64::max);
        let shift = 0.5 * (m.t() + m.s());
        ((k as f64 + 1.0 + shift) / shift).ln() / alpha_max
    }
}

/// Jacobi parameters of `sector`, with the period-2 modulation read off the
/// closed forms.
pub fn jacobi_params(model: &ModelSpec, sector: SectorLabel) -> Result<JacobiParams> {
    model.validate()?;
    let mu = check_sector(model, sector)? as f64;
    let sg = sector.sign.value();
    let modulation = match *model {
        ModelSpec::IntensityDependent { kappa, g, delta } => {
            if kappa == 0.0 {
                return Err(Error::DegenerateParameter(
                    "intensity-dependent model with kappa = 0 has a_0 = 0 and is not a Jacobi matrix"
                        .into(),
                ));
            }
            let h = sg * delta / 2.0;
            PeriodicModulation::new(vec![g, g], vec![1.0, 1.0], vec![h, -h], 1.0, 2.0 * kappa)?
        }
        ModelSpec::TwoPhoton { g, delta } => {
            let h = sg * delta / 2.0;
            PeriodicModulation::new(
                vec![2.0 * g, 2.0 * g],
                vec![2.0, 2.0],
                vec![mu + h, mu - h],
                0.5 + mu / 2.0,
                1.0 + mu / 2.0,
            )?
        }
        ModelSpec::AnisotropicTwoPhoton { g_minus, g_plus, delta } => {
            let g = 0.5 * (g_plus + g_minus);
            let gp = 0.5 * (g_plus - g_minus);
            let h = sg * delta / 2.0;
            PeriodicModulation::new(
                vec![2.0 * (g - sg * gp), 2.0 * (g + sg * gp)],
                vec![2.0, 2.0],
                vec![mu + h, mu - h],
                0.5 + mu / 2.0,
                1.0 + mu / 2.0,
            )?
        }
        ModelSpec::TwoPhotonRabiStark { g, delta, kappa } => {
            let h = sg * delta / 2.0;
            let (even, odd) = (1.0 + sg * kappa, 1.0 - sg * kappa);
            PeriodicModulation::new(
                vec![2.0 * g, 2.0 * g],
                vec![2.0 * even, 2.0 * odd],
                vec![even * mu + h, odd * mu - h],
                0.5 + mu / 2.0,
                1.0 + mu / 2.0,
            )?
        }
    };
    Ok(JacobiParams { model: *model, label: sector, modulation })
}

/// Spin and photon number of the `n`-th sector basis vector
/// `f_n = e^{±(-1)^n}_{p(n)}`.
pub fn sector_basis_index(model: &ModelSpec, sector: SectorLabel, n: usize) -> (i8, usize) {
    let parity: i8 = if n % 2 == 0 { 1 } else { -1 };
    let nu = match sector.sign {
        Sign::Plus => parity,
        Sign::Minus => -parity,
    };
    let photon = model.photon_stride() * n + sector.mu.unwrap_or(0) as usize;
    (nu, photon)
}

/// Dense row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![0.0; dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    fn add(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] += v;
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// Position of `e^ν_m` in the product basis `e^ν ⊗ e_m`, `ν = -1` first.
pub fn product_index(nu: i8, photon: usize, cutoff: usize) -> usize {
    let spin = if nu < 0 { 0 } else { 1 };
    spin * cutoff + photon
}

#[derive(Debug, Clone, Copy)]
enum SpinOp {
    Id,
    Z,
    X,
    /// `e^{-1} ↦ e^{+1}`
    Raise,
    /// `e^{+1} ↦ e^{-1}`
    Lower,
}

impl SpinOp {
    fn apply(self, nu: i8) -> Option<(i8, f64)> {
        match self {
            SpinOp::Id => Some((nu, 1.0)),
            SpinOp::Z => Some((nu, nu as f64)),
            SpinOp::X => Some((-nu, 1.0)),
            SpinOp::Raise => (nu < 0).then_some((1, 1.0)),
            SpinOp::Lower => (nu > 0).then_some((-1, 1.0)),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum FieldOp {
    One,
    Number,
    /// `(â†)²`
    Create2,
    /// `â²`
    Annihilate2,
    /// `â† (N̂ + shift)^{1/2}`
    CreateShifted(f64),
    /// `(N̂ + shift)^{1/2} â`
    AnnihilateShifted(f64),
}

fn create(m: usize) -> (usize, f64) {
    (m + 1, ((m + 1) as f64).sqrt())
}

fn annihilate(m: usize) -> Option<(usize, f64)> {
    (m > 0).then(|| (m - 1, (m as f64).sqrt()))
}

impl FieldOp {
    fn apply(self, m: usize) -> Option<(usize, f64)> {
        match self {
            FieldOp::One => Some((m, 1.0)),
            FieldOp::Number => Some((m, m as f64)),
            FieldOp::Create2 => {
                let (m1, c1) = create(m);
                let (m2, c2) = create(m1);
                Some((m2, c1 * c2))
            }
            FieldOp::Annihilate2 => {
                let (m1, c1) = annihilate(m)?;
                let (m2, c2) = annihilate(m1)?;
                Some((m2, c1 * c2))
            }
            FieldOp::CreateShifted(shift) => {
                let c0 = (m as f64 + shift).sqrt();
                let (m1, c1) = create(m);
                Some((m1, c0 * c1))
            }
            FieldOp::AnnihilateShifted(shift) => {
                let (m1, c1) = annihilate(m)?;
                Some((m1, (m1 as f64 + shift).sqrt() * c1))
            }
        }
    }
}

fn hamiltonian_terms(model: &ModelSpec) -> Vec<(SpinOp, FieldOp, f64)> {
    use FieldOp::*;
    use SpinOp::*;
    match *model {
        ModelSpec::IntensityDependent { kappa, g, delta } => vec![
            (Id, Number, 1.0),
            (Z, FieldOp::One, delta / 2.0),
            (X, AnnihilateShifted(2.0 * kappa), g),
            (X, CreateShifted(2.0 * kappa), g),
        ],
        ModelSpec::TwoPhoton { g, delta } => vec![
            (Id, Number, 1.0),
            (Z, FieldOp::One, delta / 2.0),
            (X, Annihilate2, g),
            (X, Create2, g),
        ],
        ModelSpec::AnisotropicTwoPhoton { g_minus, g_plus, delta } => vec![
            (Id, Number, 1.0),
            (Z, FieldOp::One, delta / 2.0),
            (Lower, Create2, g_minus),
            (Raise, Create2, g_plus),
            (Lower, Annihilate2, g_plus),
            (Raise, Annihilate2, g_minus),
        ],
        ModelSpec::TwoPhotonRabiStark { g, delta, kappa } => vec![
            (Id, Number, 1.0),
            (Z, Number, kappa),
            (Z, FieldOp::One, delta / 2.0),
            (X, Annihilate2, g),
            (X, Create2, g),
        ],
    }
}

/// Matrix of the Hamiltonian compressed to photon numbers `< cutoff`, in the
/// product basis ordered by [`product_index`]. Terms that leave the cutoff
/// are dropped.
pub fn hamiltonian_matrix(model: &ModelSpec, cutoff: usize) -> Result<DenseMatrix> {
    model.validate()?;
    if cutoff < 4 {
        return Err(Error::invalid(format!("cutoff must be at least 4, got {cutoff}")));
    }
    let terms = hamiltonian_terms(model);
    let mut h = DenseMatrix::zeros(2 * cutoff);
    for nu in [-1i8, 1] {
        for m in 0..cutoff {
            let col = product_index(nu, m, cutoff);
            for &(spin, field, coeff) in &terms {
                let Some((nu2, cs)) = spin.apply(nu) else { continue };
                let Some((m2, cf)) = field.apply(m) else { continue };
                if m2 >= cutoff || cs * cf == 0.0 {
                    continue;
                }
                h.add(product_index(nu2, m2, cutoff), col, coeff * cs * cf);
            }
        }
    }
    Ok(h)
}

/// Result of comparing the reordered Hamiltonian with its sector blocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionCheck {
    pub cutoff: usize,
    /// Largest entrywise deviation over the whole reordered matrix.
    pub max_deviation: f64,
    /// Largest absolute entry coupling two different sectors.
    pub max_cross_sector: f64,
    pub block_sizes: Vec<usize>,
}

/// Reorders the truncated Hamiltonian into sector bases and measures its
/// distance from the block-diagonal sum of truncated Jacobi matrices.
///
/// Truncating photon numbers below `cutoff` keeps an initial segment of
/// every sector basis, so each block is compared in full.
pub fn verify_decomposition(model: &ModelSpec, cutoff: usize) -> Result<DecompositionCheck> {
    if cutoff < 8 {
        return Err(Error::invalid(format!("cutoff must be at least 8, got {cutoff}")));
    }
    let h = hamiltonian_matrix(model, cutoff)?;
    let dim = h.dim();
    let labels = sectors(model);

    // owner[i] = (sector index, position within sector) for product index i
    let mut owner: Vec<Option<(usize, usize)>> = vec![None; dim];
    let mut blocks = Vec::with_capacity(labels.len());
    let mut block_sizes = Vec::with_capacity(labels.len());
    for (k, &label) in labels.iter().enumerate() {
        let params = jacobi_params(model, label)?;
        let mut size = 0;
        loop {
            let (nu, photon) = sector_basis_index(model, label, size);
            if photon >= cutoff {
                break;
            }
            let idx = product_index(nu, photon, cutoff);
            if owner[idx].is_some() {
                return Err(Error::InvalidState(format!(
                    "basis vector e^{nu}_{photon} assigned to two sectors"
                )));
            }
            owner[idx] = Some((k, size));
            size += 1;
        }
        blocks.push(params);
        block_sizes.push(size);
    }
    if let Some(i) = owner.iter().position(Option::is_none) {
        return Err(Error::InvalidState(format!("product basis vector {i} belongs to no sector")));
    }

    let mut max_deviation = 0.0f64;
    let mut max_cross = 0.0f64;
    for i in 0..dim {
        let (si, ni) = owner[i].unwrap();
        for j in 0..dim {
            let (sj, nj) = owner[j].unwrap();
            let entry = h.get(i, j);
            if si != sj {
                max_cross = max_cross.max(entry.abs());
                max_deviation = max_deviation.max(entry.abs());
                continue;
            }
            let p = &blocks[si];
            let expected = if ni == nj {
                p.b(ni)
            } else if ni.abs_diff(nj) == 1 {
                p.a(ni.min(nj))
            } else {
                0.0
            };
            max_deviation = max_deviation.max((entry - expected).abs());
        }
    }
    Ok(DecompositionCheck {
        cutoff,
        max_deviation,
        max_cross_sector: max_cross,
        block_sizes,
    })
}

/// Regime selected from the exact parameter predicates.
#[derive(Debug, Clone, PartialEq)]
struct Clause {
    kind: PhaseKind,
    /// `(sign of the critical trace, closed-form half-line)`
    critical: Option<(i8, HalfLine)>,
    condition: String,
}

fn regular(kind: PhaseKind, condition: &str) -> Clause {
    Clause { kind, critical: None, condition: condition.into() }
}

fn critical(sign: i8, endpoint: f64, direction: Direction, condition: &str) -> Clause {
    Clause {
        kind: PhaseKind::CriticalHalfLine,
        critical: Some((sign, HalfLine { endpoint, direction })),
        condition: condition.into(),
    }
}

fn symbolic_clause(model: &ModelSpec) -> Clause {
    use PhaseKind::*;
    match *model {
        ModelSpec::IntensityDependent { kappa, g, .. } => {
            if is_critical(g, 0.5) {
                critical(1, -kappa, Direction::Up, "g = 1/2")
            } else if g < 0.5 {
                regular(EmptyEssential, "0 < g < 1/2")
            } else {
                regular(FullLineAC, "g > 1/2")
            }
        }
        ModelSpec::TwoPhoton { g, .. } => {
            if is_critical(g, 0.5) {
                critical(1, -0.5, Direction::Up, "g = 1/2")
            } else if g < 0.5 {
                regular(EmptyEssential, "0 < g < 1/2")
            } else {
                regular(FullLineAC, "g > 1/2")
            }
        }
        ModelSpec::AnisotropicTwoPhoton { g_minus, g_plus, .. } => {
            let g = 0.5 * (g_plus + g_minus);
            let gp = (0.5 * (g_plus - g_minus)).abs();
            if is_critical(g, 0.5) {
                critical(1, -0.5, Direction::Up, "g = 1/2")
            } else if is_critical(gp, 0.5) {
                critical(-1, -0.5, Direction::Down, "|g'| = 1/2")
            } else if g < 0.5 {
                regular(EmptyEssential, "g < 1/2")
            } else if gp > 0.5 {
                regular(EmptyEssential, "|g'| > 1/2")
            } else {
                regular(FullLineAC, "|g'| < 1/2 < g")
            }
        }
        ModelSpec::TwoPhotonRabiStark { g, delta, kappa } => {
            let circle = kappa * kappa + 4.0 * g * g;
            if is_critical(kappa.abs(), 1.0) {
                critical(-1, -kappa * delta / 2.0, Direction::Down, "|kappa| = 1")
            } else if kappa.abs() > 1.0 {
                regular(EmptyEssential, "|kappa| > 1")
            } else if is_critical(circle, 1.0) {
                let endpoint = (kappa * kappa - 1.0 - kappa * delta) / 2.0;
                critical(1, endpoint, Direction::Up, "kappa^2 + 4g^2 = 1")
            } else if circle < 1.0 {
                regular(EmptyEssential, "kappa^2 + 4g^2 < 1")
            } else {
                regular(FullLineAC, "|kappa| < 1 and kappa^2 + 4g^2 > 1")
            }
        }
    }
}

/// Phase of one sector: exact regime predicates select the clause, the
/// monodromy trace is cross-checked against it, and in critical regimes the
/// half-line comes from `τ` and is compared with the closed form.
pub fn predicted_phase(model: &ModelSpec, sector: SectorLabel) -> Result<PhaseReport> {
    let params = jacobi_params(model, sector)?;
    let m = &params.modulation;
    let clause = symbolic_clause(model);
    let mono = match clause.critical {
        Some((sign, _)) => monodromy(m).with_exact_critical(sign),
        None => monodromy(m).with_exact_regular(),
    };
    let kind = classify(&mono)?;
    if kind != clause.kind {
        return Err(Error::TraceMismatch {
            trace: mono.trace,
            expected: format!("{} for {}", clause.kind, clause.condition),
        });
    }

    let mut report = PhaseReport {
        kind,
        trace: mono.trace,
        tau: None,
        essential_spectrum: None,
        closed_form_endpoint: None,
        clause: clause.condition.clone(),
        notes: String::new(),
    };
    match clause.critical {
        None => {
            report.notes = match kind {
                PhaseKind::EmptyEssential => {
                    "|tr X0(0)| > 2: essential spectrum empty, spectrum discrete".into()
                }
                _ => "|tr X0(0)| < 2: absolutely continuous spectrum is the whole line".into(),
            };
        }
        Some((_, closed)) => {
            let (s, r) = limit_sequences(m);
            let tau = tau(m, &mono, &s, &r)?;
            let half = essential_halfline(&tau)?;
            let scale = closed.endpoint.abs().max(1.0);
            if half.direction != closed.direction
                || (half.endpoint - closed.endpoint).abs() > ENDPOINT_CROSSCHECK_TOL * scale
            {
                return Err(Error::InvalidState(format!(
                    "tau half-line {:?} at {} disagrees with closed form {:?} at {}",
                    half.direction, half.endpoint, closed.direction, closed.endpoint
                )));
            }
            report.notes = format!(
                "|tr X0(0)| = 2, X0(0) not diagonalizable: essential spectrum = closure of {{tau < 0}}, tau(x) = {}*x {} {}",
                tau.c1,
                if tau.c0 < 0.0 { '-' } else { '+' },
                tau.c0.abs()
            );
            report.tau = Some(tau);
            report.essential_spectrum = Some(half);
            report.closed_form_endpoint = Some(closed.endpoint);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn sector_counts() {
        let m = ModelSpec::intensity_dependent(1.0, 1.0, 0.0).unwrap();
        assert_eq!(sectors(&m).len(), 2);
        let m = ModelSpec::two_photon(1.0, 0.0).unwrap();
        assert_eq!(sectors(&m).len(), 4);
        let m = ModelSpec::rabi_stark(1.0, 0.0, 0.0).unwrap();
        let s = sectors(&m);
        assert_eq!(s.len(), 4);
        let names: Vec<String> = s.iter().map(ToString::to_string).collect();
        assert_eq!(names, ["0-", "0+", "1-", "1+"]);
    }

    #[test]
    fn constructor_constraints() {
        assert!(ModelSpec::intensity_dependent(-0.1, 1.0, 0.0).is_err());
        assert!(ModelSpec::intensity_dependent(1.0, 0.0, 0.0).is_err());
        assert!(ModelSpec::two_photon(-1.0, 0.0).is_err());
        let err = ModelSpec::anisotropic(0.0, 1.0, 0.0).unwrap_err();
        assert!(err.to_string().contains("g_minus must be positive"));
        assert!(ModelSpec::anisotropic(0.4, 0.4, 0.0).is_err());
        assert!(ModelSpec::rabi_stark(1.0, f64::NAN, 0.0).is_err());
    }

    #[test]
    fn anisotropic_asymmetry_below_mean() {
        for (gm, gp) in [(0.1, 3.0), (2.0, 0.01), (0.7, 0.8)] {
            let m = ModelSpec::anisotropic(gm, gp, 0.0).unwrap();
            let g = m.coupling();
            assert!((0.5f64 * (gp - gm)).abs() < g);
        }
    }

    #[test]
    fn intensity_kappa_zero_is_degenerate() {
        let m = ModelSpec::intensity_dependent(0.0, 1.0, 0.0).unwrap();
        assert!(matches!(
            jacobi_params(&m, SectorLabel::signed(Sign::Plus)),
            Err(Error::DegenerateParameter(_))
        ));
    }

    #[test]
    fn sector_mismatch() {
        let m = ModelSpec::two_photon(1.0, 0.0).unwrap();
        assert!(jacobi_params(&m, SectorLabel::signed(Sign::Plus)).is_err());
        let m = ModelSpec::intensity_dependent(1.0, 1.0, 0.0).unwrap();
        assert!(jacobi_params(&m, SectorLabel::parity(0, Sign::Plus)).is_err());
    }

    #[test]
    fn intensity_parameters() {
        let m = ModelSpec::intensity_dependent(1.0, 1.0, 2.0).unwrap();
        let p = jacobi_params(&m, SectorLabel::signed(Sign::Plus)).unwrap();
        assert!(close(p.a(0), 2f64.sqrt(), 1e-15));
        assert_eq!(p.b(0), 1.0);
        assert_eq!(p.b(1), 0.0);
    }

    #[test]
    fn two_photon_parameters() {
        let m = ModelSpec::two_photon(0.5, 0.0).unwrap();
        let p = jacobi_params(&m, SectorLabel::parity(0, Sign::Plus)).unwrap();
        assert!(close(p.a(0), 0.5 * 2f64.sqrt(), 1e-15));
        for n in 0..20 {
            assert_eq!(p.b(n), 2.0 * n as f64);
        }
    }

    #[test]
    fn zero_splitting_makes_signs_agree() {
        let models = [
            ModelSpec::intensity_dependent(0.7, 0.3, 0.0).unwrap(),
            ModelSpec::two_photon(0.3, 0.0).unwrap(),
            ModelSpec::anisotropic(0.2, 0.5, 0.0).unwrap(),
            ModelSpec::rabi_stark(0.3, 0.0, 0.0).unwrap(),
        ];
        for m in models {
            for mu in [None, Some(0), Some(1)] {
                let plus = SectorLabel { sign: Sign::Plus, mu };
                let minus = SectorLabel { sign: Sign::Minus, mu };
                let (Ok(p), Ok(q)) = (jacobi_params(&m, plus), jacobi_params(&m, minus)) else {
                    continue;
                };
                for n in 0..50 {
                    assert_eq!(p.b(n), q.b(n));
                }
            }
        }
    }

    #[test]
    fn basis_index_examples() {
        let id = ModelSpec::intensity_dependent(1.0, 1.0, 0.0).unwrap();
        assert_eq!(sector_basis_index(&id, SectorLabel::signed(Sign::Plus), 3), (-1, 3));
        let tp = ModelSpec::two_photon(1.0, 0.0).unwrap();
        assert_eq!(sector_basis_index(&tp, SectorLabel::parity(1, Sign::Minus), 0), (-1, 1));
        assert_eq!(sector_basis_index(&tp, SectorLabel::parity(0, Sign::Plus), 0), (1, 0));
    }

    #[test]
    fn hamiltonian_entries() {
        let (g, delta) = (0.3, 0.8);
        let m = ModelSpec::two_photon(g, delta).unwrap();
        let c = 12;
        let h = hamiltonian_matrix(&m, c).unwrap();
        assert!(h.is_symmetric());
        for nu in [-1i8, 1] {
            for n in 0..c {
                let i = product_index(nu, n, c);
                assert!(close(h.get(i, i), n as f64 + nu as f64 * delta / 2.0, 1e-15));
                if n + 2 < c {
                    let j = product_index(-nu, n + 2, c);
                    let expect = g * (((n + 1) * (n + 2)) as f64).sqrt();
                    assert!(close(h.get(j, i), expect, 1e-14));
                }
            }
        }
        assert!(hamiltonian_matrix(&m, 3).is_err());
    }

    #[test]
    fn hamiltonian_is_symmetric_for_all_models() {
        let models = [
            ModelSpec::intensity_dependent(0.6, 0.4, 1.1).unwrap(),
            ModelSpec::anisotropic(0.2, 0.9, -0.3).unwrap(),
            ModelSpec::rabi_stark(0.4, 0.5, 0.7).unwrap(),
        ];
        for m in models {
            assert!(hamiltonian_matrix(&m, 16).unwrap().is_symmetric());
        }
    }

    #[test]
    fn decomposition_small_cutoff() {
        let m = ModelSpec::anisotropic(0.2, 0.8, 2.0).unwrap();
        let check = verify_decomposition(&m, 20).unwrap();
        assert!(check.max_deviation <= 1e-12, "{check:?}");
        assert_eq!(check.max_cross_sector, 0.0);
        assert_eq!(check.block_sizes, vec![10, 10, 10, 10]);
        assert!(verify_decomposition(&m, 7).is_err());
    }

    #[test]
    fn odd_cutoff_blocks() {
        let m = ModelSpec::two_photon(0.4, 1.0).unwrap();
        let check = verify_decomposition(&m, 9).unwrap();
        assert_eq!(check.block_sizes, vec![5, 5, 4, 4]);
    }

    #[test]
    fn sector_label_parse() {
        assert_eq!("+".parse::<SectorLabel>().unwrap(), SectorLabel::signed(Sign::Plus));
        assert_eq!("1-".parse::<SectorLabel>().unwrap(), SectorLabel::parity(1, Sign::Minus));
        assert!("2+".parse::<SectorLabel>().is_err());
        assert!("0".parse::<SectorLabel>().is_err());
    }

    #[test]
    fn phase_examples() {
        let m = ModelSpec::two_photon(0.3, 5.0).unwrap();
        for s in sectors(&m) {
            assert_eq!(predicted_phase(&m, s).unwrap().kind, PhaseKind::EmptyEssential);
        }
        let m = ModelSpec::rabi_stark(0.8, 3.0, 1.0).unwrap();
        for s in sectors(&m) {
            let r = predicted_phase(&m, s).unwrap();
            assert_eq!(r.kind, PhaseKind::CriticalHalfLine);
            let half = r.essential_spectrum.unwrap();
            assert_eq!(half.direction, Direction::Down);
            assert!(close(half.endpoint, -1.5, 1e-12));
        }
        let m = ModelSpec::rabi_stark(0.4, 1.0, 0.6).unwrap();
        for s in sectors(&m) {
            let r = predicted_phase(&m, s).unwrap();
            assert_eq!(r.kind, PhaseKind::CriticalHalfLine);
            let half = r.essential_spectrum.unwrap();
            assert_eq!(half.direction, Direction::Up);
            assert!(close(half.endpoint, -0.62, 1e-12), "{}", half.endpoint);
        }
    }

    #[test]
    fn intensity_critical_tau() {
        let kappa = 1.3;
        let m = ModelSpec::intensity_dependent(kappa, 0.5, 0.9).unwrap();
        for s in sectors(&m) {
            let r = predicted_phase(&m, s).unwrap();
            let tau = r.tau.unwrap();
            assert!(close(tau.c1, -8.0, 1e-12));
            assert!(close(tau.c0, -8.0 * kappa, 1e-12));
        }
    }

    #[test]
    fn two_photon_critical_tau() {
        let m = ModelSpec::two_photon(0.5, 1.7).unwrap();
        for s in sectors(&m) {
            let tau = predicted_phase(&m, s).unwrap().tau.unwrap();
            assert!(close(tau.c1, -4.0, 1e-12));
            assert!(close(tau.c0, -2.0, 1e-12));
        }
    }

    #[test]
    fn anisotropic_down_tau() {
        let (gm, gp) = (0.2, 1.2);
        let m = ModelSpec::anisotropic(gm, gp, 0.4).unwrap();
        for s in sectors(&m) {
            let p = jacobi_params(&m, s).unwrap();
            let prod = p.modulation.alpha(0) * p.modulation.alpha(1);
            let tau = predicted_phase(&m, s).unwrap().tau.unwrap();
            assert!(close(tau.c1, 4.0 / prod, 1e-12));
            assert!(close(tau.c0, 2.0 / prod, 1e-12));
        }
    }

    #[test]
    fn near_critical_input_counts_as_critical() {
        let m = ModelSpec::two_photon(0.5 * (1.0 + 1e-13), 1.0).unwrap();
        let r = predicted_phase(&m, SectorLabel::parity(0, Sign::Plus)).unwrap();
        assert_eq!(r.kind, PhaseKind::CriticalHalfLine);
        let m = ModelSpec::two_photon(0.5 * (1.0 + 1e-9), 1.0).unwrap();
        let r = predicted_phase(&m, SectorLabel::parity(0, Sign::Plus)).unwrap();
        assert_eq!(r.kind, PhaseKind::FullLineAC);
    }

    #[test]
    fn with_coupling_keeps_asymmetry() {
        let m = ModelSpec::anisotropic(0.2, 0.8, 1.0).unwrap();
        let m2 = m.with_coupling(0.7).unwrap();
        let ModelSpec::AnisotropicTwoPhoton { g_minus, g_plus, .. } = m2 else { panic!() };
        assert!(close(g_plus - g_minus, 0.6, 1e-15));
        assert!(close(m2.coupling(), 0.7, 1e-15));
    }
}
