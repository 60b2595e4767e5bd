//! Exact simulation of periodically kicked Ising spin ladders.
//!
//! The crate covers the whole pipeline: Pauli-string algebra on a rectangular
//! lattice, the Floquet propagator and its quasienergy spectrum, Jordan-Wigner
//! Majorana operators and corner spectral functions, the closed-form transfer
//! matrix analysis of the open chain, and stroboscopic magnetization dynamics.

extern crate openblas_src;

pub mod cli;
pub mod dynamics;
pub mod eigen;
pub mod error;
pub mod floquet;
pub mod lattice;
pub mod majorana;
pub mod pauli;
pub mod solvable;
pub mod spacing;
pub mod state;
pub mod transfer;

pub use eigen::{diagonalize, diagonalize_with, EigenMethod, QuasienergySpectrum};
pub use error::{Error, Result};
pub use floquet::{fold_quasienergy, DriveParams, FloquetOperator};
pub use lattice::{Bond, BondDir, Boundary, Lattice};
pub use majorana::{majorana, MajoranaKind, MajoranaMode, ModeTarget, SpectralConfig, SpectralFunctions};
pub use pauli::{Pauli, PauliString, PauliSum};
pub use spacing::{spacing_stats, SpacingStats};
pub use state::StateVector;
