//! Oscillation counting through the Prüfer angle.
//!
//! With `u = ρ sin θ`, `u' = ρ cos θ` the equation `-u'' + v u = λ u` becomes
//! `θ' = cos²θ + (λ − v) sin²θ`. The Neumann left end fixes `θ = π/2`; the
//! `k`-th eigenvalue is reached when `θ(L/2) = π/2 + kπ`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{check_length, Error, Result};
use crate::potentials::PotentialSpec;

use super::layers::LayerDecomposition;

/// Beyond this the fixed step needed to resolve the phase becomes meaningless.
pub const MAX_ENERGY: f64 = 1e12;

/// A potential on a closed span, smooth between its cut points.
pub(crate) trait Segmented {
    fn span(&self) -> (f64, f64);
    /// Interior points where the potential jumps or has a kink.
    fn cuts(&self) -> Vec<f64>;
    /// `v(x)` for `x` in the segment `[a, b]`, using the one-sided value at the ends.
    fn value(&self, x: f64, a: f64, b: f64) -> f64;
    fn max_value(&self) -> f64;

    fn segments(&self) -> Vec<(f64, f64)> {
        let (lo, hi) = self.span();
        let mut points = vec![lo];
        points.extend(self.cuts());
        points.push(hi);
        points.windows(2).map(|w| (w[0], w[1])).collect()
    }
}

pub(crate) struct OnInterval<'a> {
    pub potential: &'a PotentialSpec,
    pub half: f64,
}

impl Segmented for OnInterval<'_> {
    fn span(&self) -> (f64, f64) {
        (-self.half, self.half)
    }
    fn cuts(&self) -> Vec<f64> {
        self.potential.breakpoints(-self.half, self.half)
    }
    fn value(&self, x: f64, a: f64, b: f64) -> f64 {
        self.potential.evaluate_on_segment(x, a, b)
    }
    fn max_value(&self) -> f64 {
        self.potential.sup_on(-self.half, self.half)
    }
}

impl Segmented for LayerDecomposition {
    fn span(&self) -> (f64, f64) {
        (
            self.layers.first().map_or(0.0, |l| l.left),
            self.layers.last().map_or(0.0, |l| l.right),
        )
    }
    fn cuts(&self) -> Vec<f64> {
        self.breakpoints()
    }
    fn value(&self, _x: f64, a: f64, b: f64) -> f64 {
        self.value_at(0.5 * (a + b))
    }
    fn max_value(&self) -> f64 {
        LayerDecomposition::max_value(self)
    }
}

/// Classical fourth-order Runge–Kutta over every segment, never stepping
/// across a cut. `visit` sees the state after each step.
pub(crate) fn rk4_over<S, const D: usize>(
    pot: &S,
    max_step: f64,
    mut state: [f64; D],
    rhs: impl Fn(f64, &[f64; D]) -> [f64; D],
    mut visit: impl FnMut(f64, &mut [f64; D]),
) -> [f64; D]
where
    S: Segmented + ?Sized,
{
    for (a, b) in pot.segments() {
        let steps = ((b - a) / max_step).ceil().max(1.0) as usize;
        let h = (b - a) / steps as f64;
        let v = |x: f64| pot.value(x, a, b);
        for k in 0..steps {
            let x = a + k as f64 * h;
            let x_end = if k + 1 == steps { b } else { x + h };
            let add = |s: &[f64; D], d: &[f64; D], f: f64| {
                let mut out = *s;
                out.iter_mut().zip(d).for_each(|(o, d)| *o += f * d);
                out
            };
            let f = |x: f64, s: &[f64; D]| rhs(v(x), s);
            let k1 = f(x, &state);
            let k2 = f(x + 0.5 * h, &add(&state, &k1, 0.5 * h));
            let k3 = f(x + 0.5 * h, &add(&state, &k2, 0.5 * h));
            let k4 = f(x_end, &add(&state, &k3, h));
            for i in 0..D {
                state[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            visit(x_end, &mut state);
        }
    }
    state
}

fn max_step(length: f64, lambda: f64, vmax: f64) -> f64 {
    (1e-3 * length).min(0.1 / (1.0 + lambda.abs() + vmax).sqrt())
}

pub(crate) fn prufer_phase<S: Segmented + ?Sized>(pot: &S, lambda: f64) -> Result<f64> {
    if !lambda.is_finite() || lambda.abs() > MAX_ENERGY {
        return Err(Error::StepUnderflow(lambda));
    }
    let (lo, hi) = pot.span();
    let step = max_step(hi - lo, lambda, pot.max_value());
    let [theta] = rk4_over(
        pot,
        step,
        [FRAC_PI_2],
        |v, &[t]| {
            let (s, c) = t.sin_cos();
            [c * c + (lambda - v) * s * s]
        },
        |_, _| {},
    );
    Ok(theta)
}

fn count_from_phase(theta: f64) -> usize {
    ((theta - FRAC_PI_2) / PI).ceil().max(0.0) as usize
}

pub(crate) fn prufer_count_layers(layers: &LayerDecomposition, lambda: f64) -> Result<usize> {
    prufer_phase(layers, lambda).map(count_from_phase)
}

/// Number of Neumann eigenvalues of `h_L` strictly below `lambda`.
pub fn prufer_count(p: &PotentialSpec, length: f64, lambda: f64) -> Result<usize> {
    check_length(length)?;
    let pot = OnInterval {
        potential: p,
        half: 0.5 * length,
    };
    prufer_phase(&pot, lambda).map(count_from_phase)
}
