//! Three-level effective-Hamiltonian model of photoassociation in the
//! presence of vacuum-induced coherence, with bound states in the continuum,
//! Fano spectra and a discretized-continuum reference implementation.

pub mod bic;
pub mod dressing;
pub mod heff;
pub mod linalg;
pub mod microscopic;
pub mod oracle;
pub mod params;
pub mod quadrature;
pub mod spectrum;

pub use heff::{build, eigensystem, ComplexEigenSet, EffectivePair, EigenError};
pub use params::{validate, DimensionlessParams, ParamsSpec, ValidationMode};
pub use num_complex::Complex64;
