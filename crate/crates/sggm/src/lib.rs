//! Estimation and restoration of Gaussian fields on square periodic lattices.
//!
//! A field is modelled by a nearest-neighbour Gaussian graphical model with a
//! smoothness weight, a dc anchor, and additive white measurement noise. The
//! marginal likelihood of the observed field factorizes over spectral modes,
//! so hyperparameters can be fitted on a band-limited frequency window at a
//! fraction of the full cost, then applied as a Wiener gain at full
//! resolution. [`evaluation`] provides the closed-form restoration risk that
//! makes the window-size trade-off measurable without Monte Carlo.
//!
//! Module layout:
//! - [`spectral`]: lattice fields, the unitary 2-D DFT, frequency windows
//! - [`model`]: per-mode variances and the band-limited evidence objective
//! - [`estimator`]: evidence maximization in log coordinates
//! - [`restoration`]: posterior-mean (Wiener) filtering at full resolution
//! - [`evaluation`]: closed-form risk and SNR reporting
//! - [`synthesis`]: seeded sampling from the prior and noise degradation
//! - [`dense_oracle`]: brute-force pixel-space reference implementations
//! - [`io`] and [`commands`]: file formats and the CLI entry points

pub mod commands;
#[cfg(feature = "validation")]
pub mod dense_oracle;
pub mod estimator;
pub mod evaluation;
pub mod io;
pub mod model;
pub mod numeric;
pub mod restoration;
pub mod spectral;
pub mod synthesis;
#[cfg(feature = "validation")]
pub mod validation;
