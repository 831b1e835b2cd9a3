//! Repeated Richardson extrapolation for sequences computed on grids refined
//! by a factor of two, with an error expansion in even powers of `h`.

/// Romberg-style table: row `k` eliminates the `h^{2k}` term.
pub fn table(values: &[f64]) -> Vec<Vec<f64>> {
    let mut rows = vec![values.to_vec()];
    for k in 1..values.len() {
        let factor = 4f64.powi(k as i32);
        let prev = rows.last().expect("table has a first row");
        let next = prev
            .windows(2)
            .map(|w| (factor * w[1] - w[0]) / (factor - 1.0))
            .collect();
        rows.push(next);
    }
    rows
}

/// Final extrapolant and an error estimate: its largest distance from any
/// raw value.
///
/// Jumps that cut grid cells at a varying fraction make the `h²` coefficient
/// change erratically from level to level. Extrapolation then gains little,
/// and the finest levels can agree with each other while both carry the same
/// error, so only the full spread is a safe estimate.
pub fn extrapolate(values: &[f64]) -> (f64, f64) {
    let rows = table(values);
    let best = rows.last().and_then(|r| r.first()).copied().unwrap_or(f64::NAN);
    let err = values.iter().map(|v| (best - v).abs()).fold(0.0, f64::max);
    (best, err)
}

/// Convergence order seen on the last three raw values, `log2(|Δ₁| / |Δ₂|)`.
/// `None` when fewer than three values exist or the differences are at rounding level.
pub fn observed_order(values: &[f64], noise_floor: f64) -> Option<f64> {
    let n = values.len();
    if n < 3 {
        return None;
    }
    let d1 = values[n - 2] - values[n - 3];
    let d2 = values[n - 1] - values[n - 2];
    let noise = (1e-12 * values[n - 1].abs()).max(noise_floor);
    if d2.abs() <= noise || d1.abs() <= noise {
        return None;
    }
    Some((d1 / d2).abs().log2())
}
