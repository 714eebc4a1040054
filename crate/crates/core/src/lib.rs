//! Bound-state spectra of the modified Mobius square potential
//!
//! ```text
//! V(r) = -V0 * ((A + B e^{-2 alpha r}) / (1 - e^{-2 alpha r}))^2
//! ```
//!
//! The crate provides closed-form Nikiforov-Uvarov energy levels and radial
//! wavefunctions under two centrifugal approximations (Pekeris-type and
//! Greene-Aldrich), an executable version of the NU quantization condition
//! used as an algebraic cross-check, and an independent finite-difference
//! radial eigensolver that uses the exact `1/r^2` barrier.
//!
//! Module map:
//!
//! - [`model`]: potential, physical context, dimensionless mapping, centrifugal schemes
//! - [`nu`]: the NU machinery specialised to `sigma(s) = s(1 - s)`, `tau~(s) = 1 - s`
//! - [`spectrum`]: closed-form levels, validity classification, enumeration
//! - [`wavefunction`]: Jacobi polynomials, radial functions, normalization, nodes
//! - [`oracle`]: finite-difference Hamiltonians and Sturm-bisection eigenvalues
//! - [`report`]: CLI commands, preset files, CSV/JSON emission

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod model;
pub mod nu;
pub mod oracle;
pub mod report;
pub mod spectrum;
pub mod wavefunction;

pub use error::{Error, Result};
pub use model::{
    ApproximationScheme, DimensionlessParams, PhysicalContext, PotentialParams, DEFAULT_C0,
};
pub use spectrum::{QuantumNumbers, SpectrumRecord, Validity};
