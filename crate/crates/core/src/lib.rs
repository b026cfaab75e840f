//! Quasi-1D Bose–Einstein condensate scattering from a Gaussian obstacle,
//! optionally dressed with a PT-symmetric gain/loss term.
//!
//! * [`grid`]: periodic lattice, fields, quadrature, DFT pair.
//! * [`potential`]: trap + obstacle + imaginary term, `g_s` from lab units.
//! * [`propagator`]: split-step GPE solver and imaginary-time ground states.
//! * [`variational`]: reduced Gaussian-ansatz equations of motion.
//! * [`observables`]: left/right powers, moments, energy, comparisons.
//! * [`experiment`]: config files, data files and the command drivers.

pub mod error;
pub mod experiment;
pub mod grid;
pub mod potential;
pub mod observables;
pub mod propagator;
pub mod variational;

pub use error::{Error, Result};
