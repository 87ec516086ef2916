//! Spectral phases of two-photon and intensity-dependent Rabi models.
//!
//! Each Hamiltonian splits into a direct sum of Jacobi operators whose
//! parameters are 2-periodically modulated. The period transfer-matrix trace
//! decides between a discrete spectrum, absolutely continuous spectrum on the
//! whole line, and, at the critical coupling, an essential spectrum that is a
//! half-line with an explicit endpoint. Truncated-matrix eigenvalues obtained
//! by Sturm bisection corroborate each prediction.
//!
//! Modules, bottom-up:
//!
//! * [`tridiag`]: symmetric tridiagonal matrices, Sturm counts, bisection;
//! * [`modulation`]: transfer matrices, monodromy, trace classification, τ;
//! * [`models`]: the four Hamiltonians and their sector reductions;
//! * [`spectra`]: finite-section scans built on the above.

pub mod error;
pub mod models;
pub mod modulation;
pub mod spectra;
pub mod tridiag;

pub use error::{Error, Result};
pub use models::{
    hamiltonian_matrix, jacobi_params, predicted_phase, sector_basis_index, sectors,
    verify_decomposition, DecompositionCheck, JacobiParams, ModelSpec, SectorLabel, Sign,
};
pub use modulation::{
    classify, essential_halfline, limit_sequences, monodromy, stolz_partial_sums, tau,
    transfer_matrix, Direction, HalfLine, Monodromy, PeriodicModulation, PhaseKind, PhaseReport,
    TauPolynomial,
};
pub use spectra::{collapse_scan, edge_density, spectrum_scan, CollapseScan, EdgeDensityReport};
pub use tridiag::{
    carleman_partial_sums, eigenvalues_bisect, sturm_count, Interval, SymTridiag,
    TruncatedSpectrum,
};
