//! Exact Neumann spectrum of piecewise-constant potentials.
//!
//! The solution of `-u'' + v u = λ u` started from `(u, u') = (1, 0)` at the
//! left end is carried across each layer by its 2×2 propagator; the
//! eigenvalues are the zeros of `D(λ) = u'(L/2)`.

use crate::error::{Error, Result};

use super::layers::LayerDecomposition;
use super::prufer::prufer_count_layers;

/// `(cos(√ξ ℓ), sin(√ξ ℓ)/√ξ)` extended evenly through `ξ = 0`, together with
/// a positive scale factor already divided out (non-zero only for very thick
/// classically forbidden layers).
fn propagator(xi: f64, ell: f64) -> (f64, f64) {
    let z = xi * ell * ell;
    if z.abs() < 1e-8 {
        // Taylor terms up to z²; the next ones are below 1e-24 relative.
        let c = 1.0 - z / 2.0 + z * z / 24.0;
        let s = ell * (1.0 - z / 6.0 + z * z / 120.0);
        (c, s)
    } else if xi > 0.0 {
        let k = xi.sqrt();
        ((k * ell).cos(), (k * ell).sin() / k)
    } else {
        let k = (-xi).sqrt();
        let t = k * ell;
        if t > 300.0 {
            // cosh and sinh scaled by e^{-t}; only the sign and zeros of D matter.
            let tail = (-2.0 * t).exp();
            (0.5 * (1.0 + tail), 0.5 * (1.0 - tail) / k)
        } else {
            (t.cosh(), t.sinh() / k)
        }
    }
}

/// `(u, u')` at `L/2`, up to a positive factor.
pub fn shoot(layers: &LayerDecomposition, lambda: f64) -> (f64, f64) {
    let (mut u, mut du) = (1.0_f64, 0.0_f64);
    for layer in &layers.layers {
        let xi = lambda - layer.value;
        let (c, s) = propagator(xi, layer.width());
        let next = (c * u + s * du, -xi * s * u + c * du);
        u = next.0;
        du = next.1;
        let m = u.abs().max(du.abs());
        if m > 1e150 || (m < 1e-150 && m > 0.0) {
            u /= m;
            du /= m;
        }
    }
    (u, du)
}

/// `D(λ)`, positive below the ground state and alternating in sign across
/// each (simple) eigenvalue.
pub fn match_function(layers: &LayerDecomposition, lambda: f64) -> f64 {
    shoot(layers, lambda).1
}

fn energy_scale(layers: &LayerDecomposition) -> f64 {
    let l = layers.length();
    std::f64::consts::PI.powi(2) / (l * l) + layers.max_value()
}

/// An energy with exactly `target` eigenvalues below it, found by bisecting
/// the Prüfer count between `lo` (count ≤ target) and `hi` (count > target).
fn separator(layers: &LayerDecomposition, target: usize, mut lo: f64, mut hi: f64) -> Result<f64> {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        match prufer_count_layers(layers, mid)? {
            c if c == target => return Ok(mid),
            c if c < target => lo = mid,
            _ => hi = mid,
        }
    }
    Err(Error::Bracket(format!(
        "no energy with exactly {target} eigenvalue(s) below it in [{lo:e}, {hi:e}]"
    )))
}

fn upper_with_count(layers: &LayerDecomposition, at_least: usize, start: f64) -> Result<f64> {
    let mut hi = start;
    for _ in 0..60 {
        if prufer_count_layers(layers, hi)? >= at_least {
            return Ok(hi);
        }
        hi *= 2.0;
    }
    Err(Error::Bracket(format!("count never reached {at_least} below {hi:e}")))
}

/// Root of `D` in `[a, b]` where `D` changes sign: bisection to a coarse
/// bracket, then safeguarded secant steps.
fn refine_root(layers: &LayerDecomposition, mut a: f64, mut b: f64, abs_tol: f64) -> Result<f64> {
    let mut fa = match_function(layers, a);
    let fb = match_function(layers, b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket(format!(
            "D has no sign change on [{a:e}, {b:e}]"
        )));
    }
    let tol = |x: f64| (1e-13 * x.abs()).max(abs_tol);

    while b - a > 1e-4 * a.abs().max(b.abs()).max(abs_tol) {
        let m = 0.5 * (a + b);
        let fm = match_function(layers, m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }

    let (mut x0, mut x1) = (a, b);
    let (mut f0, mut f1) = (match_function(layers, a), match_function(layers, b));
    for _ in 0..100 {
        let mut x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if !(x2 > a && x2 < b) {
            x2 = 0.5 * (a + b);
        }
        let f2 = match_function(layers, x2);
        if f2 == 0.0 {
            return Ok(x2);
        }
        if f2.signum() == fa.signum() {
            a = x2;
            fa = f2;
        } else {
            b = x2;
        }
        let step = (x2 - x1).abs();
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        if step <= tol(x2) || b - a <= tol(x2) {
            return Ok(x2);
        }
    }
    Ok(0.5 * (a + b))
}

/// The two lowest Neumann eigenvalues, to relative accuracy about 1e-12.
pub fn eigenvalues_exact(layers: &LayerDecomposition) -> Result<[f64; 2]> {
    let scale = energy_scale(layers);
    // v ≥ 0 puts every eigenvalue at or above zero.
    let lo = -1e-3 * scale;
    if prufer_count_layers(layers, lo)? != 0 {
        return Err(Error::Bracket("eigenvalue count below zero is not zero".into()));
    }
    let hi2 = upper_with_count(layers, 2, 4.0 * scale + 1e-300)?;
    let s1 = separator(layers, 1, lo, hi2)?;
    let hi3 = upper_with_count(layers, 3, hi2)?;
    let s2 = separator(layers, 2, s1, hi3)?;

    let abs_tol = 1e-15 * scale;
    let l0 = refine_root(layers, lo, s1, abs_tol)?;
    let l1 = refine_root(layers, s1, s2, abs_tol)?;
    Ok([l0, l1])
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::oracle::layers::decompose;
    use crate::potentials::PotentialSpec;
    use std::f64::consts::PI;

    #[test]
    fn free_spectrum() {
        for length in [0.5, 1.0, 3.0, 20.0] {
            let layers = decompose(&PotentialSpec::Zero, length).unwrap();
            let [l0, l1] = eigenvalues_exact(&layers).unwrap();
            let exact = PI * PI / (length * length);
            assert!(l0.abs() < 1e-14 * exact, "{l0}");
            assert!((l1 - exact).abs() < 1e-12 * exact, "{l1} vs {exact}");
            // D(λ) = −√λ sin(√λ L) on a single free layer.
            let lam = 0.3 * exact;
            let expected = -lam.sqrt() * (lam.sqrt() * length).sin();
            assert!((match_function(&layers, lam) - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn constant_shift() {
        let layers = decompose(&PotentialSpec::Constant { value: 2.5 }, 2.0).unwrap();
        let [l0, l1] = eigenvalues_exact(&layers).unwrap();
        assert!((l0 - 2.5).abs() < 1e-12);
        assert!((l1 - 2.5 - PI * PI / 4.0).abs() < 1e-12);
    }

    /// 40-digit reference values from an independent arbitrary-precision
    /// transfer-matrix computation.
    #[test]
    fn symmetric_step_reference_values() {
        let cases = [
            (10.0, 0.056_780_444_081_603_512_84, 0.100_202_499_347_296_897_39),
            (50.0, 0.003_471_725_421_039_606_638, 0.003_959_831_499_005_304_482),
        ];
        for (length, r0, r1) in cases {
            let layers = decompose(&PotentialSpec::step(1.0, -0.5, 0.5), length).unwrap();
            let [l0, l1] = eigenvalues_exact(&layers).unwrap();
            assert!((l0 / r0 - 1.0).abs() < 1e-12, "L={length}: {l0}");
            assert!((l1 / r1 - 1.0).abs() < 1e-12, "L={length}: {l1}");
        }
    }

    #[test]
    fn sign_changes_across_eigenvalues() {
        let layers = decompose(&PotentialSpec::step(1.0, -0.5, 0.5), 10.0).unwrap();
        let [l0, l1] = eigenvalues_exact(&layers).unwrap();
        let d = |x: f64| match_function(&layers, x);
        assert!(d(l0 * (1.0 - 1e-6)) > 0.0 && d(l0 * (1.0 + 1e-6)) < 0.0);
        assert!(d(l1 * (1.0 - 1e-6)) < 0.0 && d(l1 * (1.0 + 1e-6)) > 0.0);
    }

    #[test]
    fn thick_barrier_does_not_overflow() {
        let layers = decompose(&PotentialSpec::step(40.0, -30.0, 30.0), 100.0).unwrap();
        let [l0, l1] = eigenvalues_exact(&layers).unwrap();
        assert!(l0.is_finite() && l1 > l0);
    }
}
