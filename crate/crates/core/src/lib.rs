//! Configuration interaction for lithium-like ions over small explicit radial
//! bases, and the natural-occupation analysis built on top of it: generalized
//! Pauli (Klyachko) constraints, quasi-pinning, projection bounds, and
//! three-fermion entanglement measures.
//!
//! The pipeline runs bottom-up through the modules:
//!
//! ```text
//! radial ─► basis ─► determinants ─► ci ─► density ─► constraints
//!                                              └────► entanglement
//! ```
//!
//! All quantities are in Hartree atomic units.

pub mod basis;
pub mod ci;
pub mod constraints;
pub mod density;
pub mod determinants;
pub mod entanglement;
mod error;
pub mod linalg;
pub mod lp;
pub mod optimize;
pub mod quadrature;
pub mod radial;

pub use basis::{BasisParams, IntegralTable, OrthoTransform, RankId, Spin, SpinOrbital};
pub use ci::{CIState, SolveResult};
pub use constraints::{ConstraintCatalog, ConstraintReport, ProjectionBound};
pub use density::{AmplitudeTensor, DualityPairs, OccupationSpectrum, OneBodyRDM};
pub use determinants::{Determinant, SpinAdaptedBasis};
pub use error::{Error, Result};
pub use radial::RadialFunction;

/// Number of electrons; every state in this crate is a three-electron doublet.
pub const N_ELECTRONS: usize = 3;

/// Reference energies quoted alongside results (hartree). Not computed here.
pub const EXACT_ENERGY: f64 = -7.478060;
pub const HARTREE_FOCK_ENERGY: f64 = -7.432727;
