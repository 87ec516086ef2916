use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rabi_spectra::{Interval, ModelSpec, SectorLabel};

#[derive(Debug, Parser)]
#[command(name = "rabi-spectra", version, about = "Spectral phases of Rabi-type models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Phase table: trace, phase, τ and essential spectrum per sector.
    Classify(Common),
    /// Jacobi coefficients a(n), b(n).
    Params {
        #[command(flatten)]
        common: Common,
        /// Index range `lo..hi` (inclusive) or a single index.
        #[arg(long, default_value = "0..9")]
        n: IndexRange,
    },
    /// Truncated-matrix eigenvalues.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 200)]
        cutoff: usize,
        /// Half-open window `lo:hi`; defaults to the Gershgorin interval.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<Window>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Gap statistics of the lowest eigenvalues along a coupling grid.
    Collapse {
        #[command(flatten)]
        common: Common,
        /// Coupling grid `start:stop:step`, endpoints included.
        #[arg(long)]
        grid: Grid,
        #[arg(long, default_value_t = 400)]
        cutoff: usize,
        #[arg(short = 'k', default_value_t = 20)]
        k: usize,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Eigenvalue counts on both sides of a critical half-line edge.
    Edge {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_values_t = [200usize, 400, 800])]
        cutoffs: Vec<usize>,
        #[arg(long, default_value_t = 5.0)]
        width: f64,
    },
    /// Compare the truncated Hamiltonian with its sector blocks.
    VerifyDecomp {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 200)]
        cutoff: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify(_) => "classify",
            Command::Params { .. } => "params",
            Command::Spectrum { .. } => "spectrum",
            Command::Collapse { .. } => "collapse",
            Command::Edge { .. } => "edge",
            Command::VerifyDecomp { .. } => "verify-decomp",
        }
    }

    pub fn common(&self) -> &Common {
        match self {
            Command::Classify(c) => c,
            Command::Params { common, .. }
            | Command::Spectrum { common, .. }
            | Command::Collapse { common, .. }
            | Command::Edge { common, .. }
            | Command::VerifyDecomp { common, .. } => common,
        }
    }
}

#[derive(Debug, Args)]
pub struct Common {
    #[command(flatten)]
    pub model: ModelArgs,
    /// One sector (`+`, `-`, `0+`, `0-`, `1+`, `1-`); all sectors when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub sector: Option<SectorLabel>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to a file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Intensity,
    TwoPhoton,
    Anisotropic,
    RabiStark,
}

/// A numeric parameter or the `critical` preset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Param {
    Value(f64),
    Critical,
}

impl FromStr for Param {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "critical" {
            return Ok(Param::Critical);
        }
        s.parse()
            .map(Param::Value)
            .map_err(|_| format!("'{s}' is neither a number nor 'critical'"))
    }
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: ModelKind,
    /// Coupling, or `critical` for the critical value of the model.
    #[arg(long, allow_negative_numbers = true)]
    pub g: Option<Param>,
    /// `critical` selects |kappa| = 1 for rabi-stark.
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: Option<Param>,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub delta: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub g_plus: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub g_minus: Option<f64>,
    /// Anisotropy (g₊ − g₋)/2, as an alternative to --g-plus/--g-minus.
    #[arg(long, allow_negative_numbers = true)]
    pub g_prime: Option<Param>,
    /// rabi-stark: put g on the circle kappa² + 4g² = 1.
    #[arg(long)]
    pub on_circle: bool,
}

fn value(p: Option<Param>, name: &str, critical: f64) -> Result<f64> {
    match p {
        Some(Param::Value(x)) => Ok(x),
        Some(Param::Critical) => Ok(critical),
        None => bail!("--{name} is required"),
    }
}

impl ModelArgs {
    pub fn build(&self) -> Result<ModelSpec> {
        self.build_with(None)
    }

    /// Builds the model; `default_g` stands in for a missing `--g`.
    pub fn build_with(&self, default_g: Option<f64>) -> Result<ModelSpec> {
        let g = self.g.or(default_g.map(Param::Value));
        let unused = |cond: bool, flag: &str| -> Result<()> {
            if cond {
                bail!("{flag} does not apply to --model {}", self.kind_name());
            }
            Ok(())
        };
        let anisotropic_flags = self.g_plus.is_some() || self.g_minus.is_some() || self.g_prime.is_some();
        let model = match self.model {
            ModelKind::Intensity => {
                unused(anisotropic_flags, "--g-plus/--g-minus/--g-prime")?;
                unused(self.on_circle, "--on-circle")?;
                if self.kappa == Some(Param::Critical) {
                    bail!("kappa has no critical value for --model intensity");
                }
                let kappa = value(self.kappa, "kappa", f64::NAN)?;
                ModelSpec::intensity_dependent(kappa, value(g, "g", 0.5)?, self.delta)?
            }
            ModelKind::TwoPhoton => {
                unused(anisotropic_flags, "--g-plus/--g-minus/--g-prime")?;
                unused(self.on_circle, "--on-circle")?;
                unused(self.kappa.is_some(), "--kappa")?;
                ModelSpec::two_photon(value(g, "g", 0.5)?, self.delta)?
            }
            ModelKind::Anisotropic => {
                unused(self.on_circle, "--on-circle")?;
                unused(self.kappa.is_some(), "--kappa")?;
                match (self.g_minus, self.g_plus, self.g_prime) {
                    (Some(gm), Some(gp), None) if self.g.is_none() => {
                        let m = ModelSpec::anisotropic(gm, gp, self.delta)?;
                        match default_g {
                            Some(g) => m.with_coupling(g)?,
                            None => m,
                        }
                    }
                    (None, None, Some(prime)) => {
                        let g = value(g, "g", 0.5)?;
                        let gp = value(Some(prime), "g-prime", 0.5)?;
                        ModelSpec::anisotropic(g - gp, g + gp, self.delta)?
                    }
                    _ => bail!("anisotropic model needs --g-minus and --g-plus, or --g and --g-prime"),
                }
            }
            ModelKind::RabiStark => {
                unused(anisotropic_flags, "--g-plus/--g-minus/--g-prime")?;
                let kappa = value(self.kappa, "kappa", 1.0)?;
                let circle = self.on_circle || g == Some(Param::Critical);
                let g = if circle {
                    if self.g.is_some_and(|p| p != Param::Critical) {
                        bail!("--on-circle fixes g; drop the numeric --g");
                    }
                    if !(kappa.abs() < 1.0) {
                        bail!("the circle kappa^2 + 4g^2 = 1 needs |kappa| < 1, got {kappa}");
                    }
                    (1.0 - kappa * kappa).sqrt() / 2.0
                } else {
                    value(g, "g", f64::NAN)?
                };
                ModelSpec::rabi_stark(g, self.delta, kappa)?
            }
        };
        Ok(model)
    }

    fn kind_name(&self) -> &'static str {
        match self.model {
            ModelKind::Intensity => "intensity",
            ModelKind::TwoPhoton => "two-photon",
            ModelKind::Anisotropic => "anisotropic",
            ModelKind::RabiStark => "rabi-stark",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexRange {
    pub lo: usize,
    pub hi: usize,
}

impl FromStr for IndexRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad index '{t}'"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => {
                let n = parse(s)?;
                (n, n)
            }
        };
        if lo > hi {
            return Err(format!("empty index range {s}"));
        }
        Ok(IndexRange { lo, hi })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window(pub Interval);

impl FromStr for Window {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s.split_once(':').ok_or_else(|| format!("window '{s}' must be lo:hi"))?;
        let lo: f64 = a.parse().map_err(|_| format!("bad window bound '{a}'"))?;
        let hi: f64 = b.parse().map_err(|_| format!("bad window bound '{b}'"))?;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(format!("window '{s}' must satisfy lo <= hi with finite bounds"));
        }
        Ok(Window(Interval::new(lo, hi)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, h] = parts[..] else {
            return Err(format!("grid '{s}' must be start:stop:step"));
        };
        let num = |t: &str| t.parse::<f64>().map_err(|_| format!("bad grid value '{t}'"));
        let (a, b, h) = (num(a)?, num(b)?, num(h)?);
        if !(a.is_finite() && b.is_finite() && h.is_finite()) || h <= 0.0 || b < a {
            return Err(format!("grid '{s}' needs start <= stop and step > 0"));
        }
        let steps = ((b - a) / h + 1e-9).floor() as usize;
        // round away the accumulated representation error of a + i·h
        let snap = |x: f64| (x * 1e12).round() / 1e12;
        Ok(Grid((0..=steps).map(|i| snap(a + i as f64 * h)).collect()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_hits_decimal_values() {
        let g: Grid = "0.30:0.49:0.01".parse().unwrap();
        assert_eq!(g.0.len(), 20);
        assert_eq!(g.0[0], 0.3);
        assert_eq!(g.0[19], 0.49);
        assert_eq!(g.0[7], 0.37);
        assert!("0.5:0.1:0.1".parse::<Grid>().is_err());
        assert!("1:2".parse::<Grid>().is_err());
    }

    #[test]
    fn index_ranges() {
        assert_eq!("0..3".parse(), Ok(IndexRange { lo: 0, hi: 3 }));
        assert_eq!("4".parse(), Ok(IndexRange { lo: 4, hi: 4 }));
        assert!("5..2".parse::<IndexRange>().is_err());
    }

    #[test]
    fn windows_and_params() {
        let w: Window = "-3:5.5".parse().unwrap();
        assert_eq!(w.0, Interval::new(-3.0, 5.5));
        assert!("3:1".parse::<Window>().is_err());
        assert_eq!("critical".parse(), Ok(Param::Critical));
        assert_eq!("-0.25".parse(), Ok(Param::Value(-0.25)));
    }
}
