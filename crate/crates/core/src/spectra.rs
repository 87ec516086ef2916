//! Finite-section experiments: truncated spectra, eigenvalue spacing as the
//! coupling approaches its critical value, and counting near a predicted
//! essential-spectrum edge.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modulation::{Direction, PhaseKind, PhaseReport};
use crate::models::{jacobi_params, predicted_phase, JacobiParams, ModelSpec, SectorLabel};
use crate::tridiag::{
    eigenvalues_bisect, lowest_eigenvalues, sturm_count, Interval, SymTridiag, TruncatedSpectrum,
};

/// Default cutoff ladder for edge counting.
pub const DEFAULT_CUTOFFS: [usize; 3] = [200, 400, 800];
/// Default edge window width.
pub const DEFAULT_EDGE_WIDTH: f64 = 5.0;
/// Fraction of the Gershgorin range, measured from the top, treated as
/// truncation artefacts and left out of spacing statistics.
pub const SPURIOUS_TOP_FRACTION: f64 = 0.10;

/// Eigenvalues of the `cutoff × cutoff` section inside `window`.
pub fn spectrum_scan(
    params: &JacobiParams,
    cutoff: usize,
    window: Interval,
    tol: f64,
) -> Result<TruncatedSpectrum> {
    if cutoff < 2 {
        return Err(Error::invalid(format!("cutoff must be at least 2, got {cutoff}")));
    }
    let m = params.truncation(cutoff)?;
    eigenvalues_bisect(&m, window, tol)
}

/// Upper limit below which eigenvalues enter spacing statistics.
pub fn trusted_ceiling(m: &SymTridiag) -> f64 {
    let g = m.gershgorin();
    g.hi - SPURIOUS_TOP_FRACTION * g.width()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollapsePoint {
    pub coupling: f64,
    pub phase: PhaseKind,
    pub spectrum: TruncatedSpectrum,
    /// Eigenvalues that entered the gap statistics.
    pub used: usize,
    pub mean_gap: f64,
    pub min_gap: f64,
    /// Set when the point is outside the discrete regime, or too few
    /// eigenvalues survived the spurious-edge filter.
    pub warning: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollapseScan {
    pub family: ModelSpec,
    pub sector: SectorLabel,
    pub cutoff: usize,
    pub k: usize,
    pub points: Vec<CollapsePoint>,
}

impl CollapseScan {
    pub fn mean_gaps(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.mean_gap).collect()
    }

    pub fn min_gaps(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.min_gap).collect()
    }
}

fn gap_stats(eigs: &[f64]) -> (f64, f64) {
    if eigs.len() < 2 {
        return (f64::NAN, f64::NAN);
    }
    let gaps: Vec<f64> = eigs.windows(2).map(|w| w[1] - w[0]).collect();
    let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
    let min = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    (mean, min)
}

/// Spacing of the lowest `k` eigenvalues along a coupling grid.
///
/// `family` supplies every parameter except the mean coupling, which takes
/// each grid value in turn. `tol` defaults to `1e-12·max(1, ρ)`.
pub fn collapse_scan(
    family: &ModelSpec,
    grid: &[f64],
    sector: SectorLabel,
    cutoff: usize,
    k: usize,
    tol: Option<f64>,
) -> Result<CollapseScan> {
    if grid.is_empty() {
        return Err(Error::invalid("coupling grid is empty"));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::invalid("coupling grid must be strictly increasing"));
    }
    if k < 2 {
        return Err(Error::invalid(format!("k must be at least 2, got {k}")));
    }
    if cutoff < k {
        return Err(Error::invalid(format!("cutoff {cutoff} is smaller than k = {k}")));
    }
    let points = grid
        .par_iter()
        .map(|&g| {
            let model = family.with_coupling(g)?;
            let params = jacobi_params(&model, sector)?;
            let phase = predicted_phase(&model, sector)?.kind;
            let m = params.truncation(cutoff)?;
            let tol = tol.unwrap_or_else(|| m.default_tol());
            let spectrum = lowest_eigenvalues(&m, k, tol)?;
            let ceiling = trusted_ceiling(&m);
            let kept: Vec<f64> =
                spectrum.eigenvalues.iter().copied().filter(|&x| x < ceiling).collect();
            let (mean_gap, min_gap) = gap_stats(&kept);
            let warning = if phase != PhaseKind::EmptyEssential {
                Some(format!(
                    "{phase} at g = {g}: truncated gaps do not measure a discrete spectrum"
                ))
            } else if kept.len() < spectrum.len() {
                Some(format!(
                    "{} of {} eigenvalues fall in the spurious top band",
                    spectrum.len() - kept.len(),
                    spectrum.len()
                ))
            } else {
                None
            };
            Ok(CollapsePoint {
                coupling: g,
                phase,
                used: kept.len(),
                spectrum,
                mean_gap,
                min_gap,
                warning,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CollapseScan { family: *family, sector, cutoff, k, points })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeDensityReport {
    pub endpoint: f64,
    pub direction: Direction,
    pub width: f64,
    pub cutoffs: Vec<usize>,
    /// Eigenvalues within `width` of the endpoint, inside the half-line.
    pub essential_counts: Vec<usize>,
    /// Eigenvalues within `width` of the endpoint, outside the half-line.
    pub complementary_counts: Vec<usize>,
}

impl EdgeDensityReport {
    pub fn essential_window(&self) -> Interval {
        edge_windows(self.endpoint, self.direction, self.width).0
    }

    pub fn complementary_window(&self) -> Interval {
        edge_windows(self.endpoint, self.direction, self.width).1
    }
}

fn edge_windows(endpoint: f64, direction: Direction, width: f64) -> (Interval, Interval) {
    let above = Interval::new(endpoint, endpoint + width);
    let below = Interval::new(endpoint - width, endpoint);
    match direction {
        Direction::Up => (above, below),
        Direction::Down => (below, above),
    }
}

fn count_in(m: &SymTridiag, w: Interval) -> Result<usize> {
    if w.is_empty() {
        return Ok(0);
    }
    Ok(sturm_count(m, w.hi)? - sturm_count(m, w.lo)?)
}

/// Counts truncated eigenvalues on both sides of a predicted half-line edge
/// for each cutoff.
pub fn edge_density(
    params: &JacobiParams,
    report: &PhaseReport,
    cutoffs: &[usize],
    width: f64,
) -> Result<EdgeDensityReport> {
    if report.kind != PhaseKind::CriticalHalfLine {
        return Err(Error::InvalidState(format!(
            "edge density needs a critical half-line phase, got {}",
            report.kind
        )));
    }
    let half = report.essential_spectrum.ok_or_else(|| {
        Error::InvalidState("critical phase report carries no half-line".into())
    })?;
    if !(width >= 0.0) || !width.is_finite() {
        return Err(Error::invalid(format!("window width must be non-negative, got {width}")));
    }
    if cutoffs.is_empty() || cutoffs.windows(2).any(|w| w[0] >= w[1]) || cutoffs[0] < 2 {
        return Err(Error::invalid("cutoffs must be strictly increasing and at least 2"));
    }
    let (ess, comp) = edge_windows(half.endpoint, half.direction, width);
    let counts = cutoffs
        .par_iter()
        .map(|&n| {
            let m = params.truncation(n)?;
            Ok((count_in(&m, ess)?, count_in(&m, comp)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EdgeDensityReport {
        endpoint: half.endpoint,
        direction: half.direction,
        width,
        cutoffs: cutoffs.to_vec(),
        essential_counts: counts.iter().map(|c| c.0).collect(),
        complementary_counts: counts.iter().map(|c| c.1).collect(),
    })
}

/// Lowest `k` eigenvalues at each cutoff of a ladder, for monotonicity
/// checks across truncations.
pub fn cutoff_ladder(
    params: &JacobiParams,
    cutoffs: &[usize],
    k: usize,
    tol: f64,
) -> Result<Vec<TruncatedSpectrum>> {
    cutoffs
        .par_iter()
        .map(|&n| lowest_eigenvalues(&params.truncation(n)?, k, tol))
        .collect()
}
