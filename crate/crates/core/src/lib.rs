//! Numerical laboratory for the lowest two Neumann eigenpairs of
//! `h_L = -d²/dx² + v` on `I = (-L/2, L/2)`.
//!
//! * [`potentials`]: symbolic non-negative potentials with exact interval norms.
//! * [`fdsolver`]: cell-centred finite differences, Sturm bisection, inverse
//!   iteration and Richardson extrapolation.
//! * [`oracle`]: transfer matrices, Prüfer counting and shooting, used to
//!   certify the finite-difference solver.
//! * [`bounds`]: closed-form ground-state and spectral-gap inequalities checked
//!   against measured spectra.
//! * [`sweep`], [`powerlaw`]: parameter sweeps, CSV output and log-log fits.
//!
//! Row-level work in sweeps and batch verification runs on rayon when the
//! `parallel` feature is enabled (the default) and sequentially otherwise.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod fdsolver;
pub mod oracle;
pub mod parallel;
pub mod potentials;
pub mod powerlaw;
pub mod sweep;

pub use error::{Error, Result};
pub use potentials::{IntervalNorms, PotentialSpec, StepPiece};
