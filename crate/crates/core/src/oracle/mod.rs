//! Independent spectral computations that certify the finite-difference solver.

mod layers;
mod profile;
mod prufer;
mod transfer;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fdsolver::SpectralResult;
use crate::potentials::PotentialSpec;

pub use layers::{decompose, Layer, LayerDecomposition};
pub use profile::{ground_state_profile, GroundStateProfile};
pub use prufer::{prufer_count, MAX_ENERGY};
pub use transfer::{eigenvalues_exact, match_function, shoot};

/// Default relative tolerance for solver/oracle eigenvalue agreement.
pub const AGREEMENT_TOL: f64 = 1e-6;

/// Outcome of checking a [`SpectralResult`] against the oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum OracleAgreement {
    /// Piecewise-constant potentials: exact eigenvalues from transfer matrices.
    TransferMatrix {
        lambda0: f64,
        lambda1: f64,
        relative_deviation: f64,
        tolerance: f64,
        agrees: bool,
    },
    /// Other potentials: Prüfer counts just below λ₀, between λ₀ and λ₁, and
    /// just above λ₁ must read 0, 1, 2.
    PruferCount {
        counts: [usize; 3],
        agrees: bool,
    },
}

impl OracleAgreement {
    pub fn agrees(&self) -> bool {
        match self {
            OracleAgreement::TransferMatrix { agrees, .. } => *agrees,
            OracleAgreement::PruferCount { agrees, .. } => *agrees,
        }
    }
}

fn relative_deviation(measured: f64, exact: f64) -> f64 {
    let scale = exact.abs().max(f64::MIN_POSITIVE);
    (measured - exact).abs() / scale
}

/// Cross-check solver eigenvalues against the best oracle available for `p`.
pub fn cross_check(
    p: &PotentialSpec,
    length: f64,
    result: &SpectralResult,
    tolerance: f64,
) -> Result<OracleAgreement> {
    if p.is_piecewise_constant() {
        let [l0, l1] = eigenvalues_exact(&decompose(p, length)?)?;
        // λ₀ vanishes when v is zero on the interval; below a thousandth of
        // λ₁ its deviation is measured on the λ₁ scale instead.
        let dev0 = (result.lambda0 - l0).abs() / l0.abs().max(1e-3 * l1);
        let dev = dev0.max(relative_deviation(result.lambda1, l1));
        Ok(OracleAgreement::TransferMatrix {
            lambda0: l0,
            lambda1: l1,
            relative_deviation: dev,
            tolerance,
            agrees: dev <= tolerance,
        })
    } else {
        let err = result.error_estimate;
        let margin = |x: f64, e: f64| tolerance * x.abs() + e + 1e-12;
        let mid = 0.5 * (result.lambda0 + result.lambda1);
        let counts = [
            prufer_count(p, length, result.lambda0 - margin(result.lambda0, err.lambda0))?,
            prufer_count(p, length, mid)?,
            prufer_count(p, length, result.lambda1 + margin(result.lambda1, err.lambda1))?,
        ];
        Ok(OracleAgreement::PruferCount {
            counts,
            agrees: counts == [0, 1, 2],
        })
    }
}
