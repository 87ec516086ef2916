use anyhow::Result;
use rabi_spectra::spectra::spectrum_scan;
use rabi_spectra::{
    collapse_scan, edge_density, jacobi_params, predicted_phase, sectors, verify_decomposition,
    ModelSpec, PhaseKind, SectorLabel,
};
use rayon::prelude::*;
use serde_json::json;

use crate::args::{Command, Common, Grid, IndexRange, Window};
use crate::output::{num, opt_num, Report};

fn selected(model: &ModelSpec, sector: Option<SectorLabel>) -> Result<Vec<SectorLabel>> {
    match sector {
        Some(s) => {
            jacobi_params(model, s)?;
            Ok(vec![s])
        }
        None => Ok(sectors(model)),
    }
}

pub fn run(command: &Command) -> Result<(ModelSpec, Report)> {
    match command {
        Command::Classify(common) => classify(common),
        Command::Params { common, n } => params(common, *n),
        Command::Spectrum { common, cutoff, window, tol } => {
            spectrum(common, *cutoff, *window, *tol)
        }
        Command::Collapse { common, grid, cutoff, k, tol } => {
            collapse(common, grid, *cutoff, *k, *tol)
        }
        Command::Edge { common, cutoffs, width } => edge(common, cutoffs, *width),
        Command::VerifyDecomp { common, cutoff } => verify(common, *cutoff),
    }
}

fn classify(common: &Common) -> Result<(ModelSpec, Report)> {
    let model = common.model.build()?;
    let labels = selected(&model, common.sector)?;
    let reports = labels
        .iter()
        .map(|&s| predicted_phase(&model, s))
        .collect::<rabi_spectra::Result<Vec<_>>>()?;
    let data: Vec<_> = labels
        .iter()
        .zip(&reports)
        .map(|(s, r)| json!({ "sector": s.to_string(), "report": r }))
        .collect();
    let mut out = Report::new(
        &["model", "sector", "trace", "phase", "tau_c1", "tau_c0", "ess_lo", "ess_hi", "clause"],
        data,
    )?;
    for (s, r) in labels.iter().zip(&reports) {
        let (lo, hi) = match (r.kind, r.essential_spectrum) {
            (PhaseKind::CriticalHalfLine, Some(h)) => {
                let (lo, hi) = h.bounds();
                (num(lo), num(hi))
            }
            (PhaseKind::FullLineAC, _) => (num(f64::NEG_INFINITY), num(f64::INFINITY)),
            _ => (String::new(), String::new()),
        };
        out.push(vec![
            model.name().to_string(),
            s.to_string(),
            num(r.trace),
            r.kind.to_string(),
            opt_num(r.tau.as_ref().map(|t| t.c1)),
            opt_num(r.tau.as_ref().map(|t| t.c0)),
            lo,
            hi,
            r.clause.clone(),
        ]);
    }
    Ok((model, out))
}

fn params(common: &Common, range: IndexRange) -> Result<(ModelSpec, Report)> {
    let model = common.model.build()?;
    let mut rows = Vec::new();
    for s in selected(&model, common.sector)? {
        let p = jacobi_params(&model, s)?;
        for n in range.lo..=range.hi {
            rows.push((s, n, p.a(n), p.b(n)));
        }
    }
    let data: Vec<_> = rows
        .iter()
        .map(|(s, n, a, b)| json!({ "sector": s.to_string(), "n": n, "a": a, "b": b }))
        .collect();
    let mut out = Report::new(&["sector", "n", "a", "b"], data)?;
    for (s, n, a, b) in rows {
        out.push(vec![s.to_string(), n.to_string(), num(a), num(b)]);
    }
    Ok((model, out))
}

fn spectrum(
    common: &Common,
    cutoff: usize,
    window: Option<Window>,
    tol: Option<f64>,
) -> Result<(ModelSpec, Report)> {
    let model = common.model.build()?;
    let labels = selected(&model, common.sector)?;
    let spectra = labels
        .par_iter()
        .map(|&s| {
            let p = jacobi_params(&model, s)?;
            let m = p.truncation(cutoff)?;
            let w = window.map(|w| w.0).unwrap_or_else(|| m.gershgorin());
            spectrum_scan(&p, cutoff, w, tol.unwrap_or_else(|| m.default_tol()))
        })
        .collect::<rabi_spectra::Result<Vec<_>>>()?;
    let data: Vec<_> = labels
        .iter()
        .zip(&spectra)
        .map(|(s, sp)| json!({ "sector": s.to_string(), "spectrum": sp }))
        .collect();
    let mut out = Report::new(&["sector", "index", "eigenvalue"], data)?;
    for (s, sp) in labels.iter().zip(&spectra) {
        for (i, x) in sp.eigenvalues.iter().enumerate() {
            out.push(vec![s.to_string(), i.to_string(), num(*x)]);
        }
    }
    Ok((model, out))
}

fn collapse(
    common: &Common,
    grid: &Grid,
    cutoff: usize,
    k: usize,
    tol: Option<f64>,
) -> Result<(ModelSpec, Report)> {
    let family = common.model.build_with(grid.0.first().copied())?;
    let labels = selected(&family, common.sector)?;
    let scans = labels
        .iter()
        .map(|&s| collapse_scan(&family, &grid.0, s, cutoff, k, tol))
        .collect::<rabi_spectra::Result<Vec<_>>>()?;
    let data: Vec<_> = labels
        .iter()
        .zip(&scans)
        .map(|(s, scan)| json!({ "sector": s.to_string(), "scan": scan }))
        .collect();
    let mut out =
        Report::new(&["g", "mean_gap", "min_gap", "sector", "used", "phase", "warning"], data)?;
    for (s, scan) in labels.iter().zip(&scans) {
        for p in &scan.points {
            out.push(vec![
                num(p.coupling),
                num(p.mean_gap),
                num(p.min_gap),
                s.to_string(),
                p.used.to_string(),
                p.phase.to_string(),
                p.warning.clone().unwrap_or_default(),
            ]);
        }
    }
    Ok((family, out))
}

fn edge(common: &Common, cutoffs: &[usize], width: f64) -> Result<(ModelSpec, Report)> {
    let model = common.model.build()?;
    let labels = selected(&model, common.sector)?;
    let reports = labels
        .iter()
        .map(|&s| {
            let phase = predicted_phase(&model, s)?;
            edge_density(&jacobi_params(&model, s)?, &phase, cutoffs, width)
        })
        .collect::<rabi_spectra::Result<Vec<_>>>()?;
    let data: Vec<_> = labels
        .iter()
        .zip(&reports)
        .map(|(s, r)| json!({ "sector": s.to_string(), "report": r }))
        .collect();
    let mut out = Report::new(
        &["sector", "endpoint", "direction", "cutoff", "essential_count", "complementary_count"],
        data,
    )?;
    for (s, r) in labels.iter().zip(&reports) {
        let direction = match r.direction {
            rabi_spectra::Direction::Up => "up",
            rabi_spectra::Direction::Down => "down",
        };
        for (i, n) in r.cutoffs.iter().enumerate() {
            out.push(vec![
                s.to_string(),
                num(r.endpoint),
                direction.to_string(),
                n.to_string(),
                r.essential_counts[i].to_string(),
                r.complementary_counts[i].to_string(),
            ]);
        }
    }
    Ok((model, out))
}

fn verify(common: &Common, cutoff: usize) -> Result<(ModelSpec, Report)> {
    let model = common.model.build()?;
    if common.sector.is_some() {
        anyhow::bail!("verify-decomp covers all sectors; drop --sector");
    }
    let check = verify_decomposition(&model, cutoff)?;
    let mut out = Report::new(
        &["model", "cutoff", "max_deviation", "max_cross_sector", "block_sizes"],
        &check,
    )?;
    let sizes: Vec<String> = check.block_sizes.iter().map(|b| b.to_string()).collect();
    out.push(vec![
        model.name().to_string(),
        check.cutoff.to_string(),
        num(check.max_deviation),
        num(check.max_cross_sector),
        sizes.join(" "),
    ]);
    Ok((model, out))
}
