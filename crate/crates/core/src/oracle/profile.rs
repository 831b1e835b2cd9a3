use serde::{Deserialize, Serialize};

use crate::error::{check_length, Error, Result};
use crate::potentials::PotentialSpec;

use super::prufer::{rk4_over, OnInterval};

/// Unnormalized ground state obtained by shooting, sampled uniformly on `[-L/2, L/2]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundStateProfile {
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub inf: f64,
    pub sup: f64,
}

impl GroundStateProfile {
    /// `inf/sup`, independent of the arbitrary starting amplitude.
    pub fn ratio(&self) -> f64 {
        self.inf / self.sup
    }
}

const RESCALE_ABOVE: f64 = 1e15;

/// Integrate `-u'' + v u = λ₀ u` from `(u, u') = (1, 0)` at the left end.
///
/// Where the ground state decays in the direction of integration, the error
/// in `λ₀` grows like the square of the amplitude ratio, so very small
/// `inf/sup` values are not resolved.
pub fn ground_state_profile(
    p: &PotentialSpec,
    length: f64,
    lambda0: f64,
    samples: usize,
) -> Result<GroundStateProfile> {
    check_length(length)?;
    if samples < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 samples, got {samples}")));
    }
    let half = 0.5 * length;
    let spacing = length / (samples - 1) as f64;
    let x: Vec<f64> = (0..samples)
        .map(|j| if j + 1 == samples { half } else { -half + j as f64 * spacing })
        .collect();

    // Sample points join the cut list so every sample is hit exactly.
    struct Sampled<'a> {
        inner: OnInterval<'a>,
        extra: &'a [f64],
    }
    impl super::prufer::Segmented for Sampled<'_> {
        fn span(&self) -> (f64, f64) {
            self.inner.span()
        }
        fn cuts(&self) -> Vec<f64> {
            let mut c = self.inner.cuts();
            c.extend(self.extra.iter().copied());
            c.sort_by(f64::total_cmp);
            c.dedup();
            c
        }
        fn value(&self, x: f64, a: f64, b: f64) -> f64 {
            self.inner.value(x, a, b)
        }
        fn max_value(&self) -> f64 {
            self.inner.max_value()
        }
    }
    let pot = Sampled {
        inner: OnInterval { potential: p, half },
        extra: &x[1..samples - 1],
    };
    use super::prufer::Segmented;
    let vmax = pot.max_value();
    let step = (1e-3 * length).min(0.05 / (1.0 + lambda0.abs() + vmax).sqrt());

    let mut u = Vec::with_capacity(samples);
    u.push(1.0);
    let mut next = 1;
    rk4_over(
        &pot,
        step,
        [1.0, 0.0],
        |v, &[y, dy]| [dy, (v - lambda0) * y],
        |pos, state| {
            if state[0].abs() > RESCALE_ABOVE {
                let s = state[0].abs();
                state.iter_mut().for_each(|c| *c /= s);
                u.iter_mut().for_each(|c| *c /= s);
            }
            if next < samples && pos == x[next] {
                u.push(state[0]);
                next += 1;
            }
        },
    );
    debug_assert_eq!(u.len(), samples);
    let inf = u.iter().copied().fold(f64::INFINITY, f64::min);
    let sup = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(GroundStateProfile { x, u, inf, sup })
}
