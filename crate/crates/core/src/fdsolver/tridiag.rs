//! Symmetric tridiagonal eigen-machinery: Sturm counts, bisection and
//! inverse iteration for the two lowest eigenpairs.

use crate::error::{Error, Result};

use super::DiscreteOperator;

const MAX_INVERSE_ITERATIONS: usize = 50;
const MAX_CEILING_RAISES: usize = 8;

/// Residual gate: `‖Tφ − λφ‖₂ ≤ RESIDUAL_TOL · ‖T‖∞ · ‖φ‖₂`.
pub const RESIDUAL_TOL: f64 = 1e-8;

/// One eigenpair with a Euclidean-unit eigenvector.
#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: f64,
    /// Bisection bracket `[lo, hi]` containing the eigenvalue.
    pub bracket: (f64, f64),
    pub vector: Vec<f64>,
    pub iterations: usize,
    /// `‖Tφ − λφ‖₂ / ‖T‖∞` for the unit vector.
    pub relative_residual: f64,
}

fn pivot_floor(offdiag: &[f64]) -> f64 {
    let e2 = offdiag.iter().map(|e| e * e).fold(1.0, f64::max);
    f64::MIN_POSITIVE * e2
}

/// Number of eigenvalues strictly below `x` (negative pivots of `T − xI = LDLᵀ`).
pub fn sturm_count(diag: &[f64], offdiag: &[f64], x: f64) -> usize {
    let pivmin = pivot_floor(offdiag);
    let mut count = 0;
    let mut q = 0.0;
    for i in 0..diag.len() {
        q = if i == 0 {
            diag[0] - x
        } else {
            diag[i] - x - offdiag[i - 1] * offdiag[i - 1] / q
        };
        if q.abs() <= pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn bisection_tolerance(lo: f64, hi: f64) -> f64 {
    1e-13_f64.max(1e-12 * lo.abs().max(hi.abs()))
}

/// Bracket `[lo, hi]` with `count(lo) ≤ index < count(hi)`, shrunk to the
/// bisection tolerance.
fn bisect(diag: &[f64], offdiag: &[f64], index: usize, mut lo: f64, mut hi: f64) -> (f64, f64) {
    while hi - lo > bisection_tolerance(lo, hi) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, offdiag, mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// `max_i Σ_j |T_ij|`.
pub fn inf_norm(op: &DiscreteOperator) -> f64 {
    let n = op.diag.len();
    (0..n)
        .map(|i| {
            let left = if i > 0 { op.offdiag[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { op.offdiag[i].abs() } else { 0.0 };
            op.diag[i].abs() + left + right
        })
        .fold(0.0, f64::max)
}

/// `Tx`.
pub fn apply(op: &DiscreteOperator, x: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|i| {
            let mut y = op.diag[i] * x[i];
            if i > 0 {
                y += op.offdiag[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                y += op.offdiag[i] * x[i + 1];
            }
            y
        })
        .collect()
}

fn norm2(x: &[f64]) -> f64 {
    let scale = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale * x.iter().map(|v| (v / scale).powi(2)).sum::<f64>().sqrt()
}

fn normalize(x: &mut [f64]) {
    let n = norm2(x);
    x.iter_mut().for_each(|v| *v /= n);
}

fn relative_residual(op: &DiscreteOperator, value: f64, x: &[f64], t_norm: f64) -> f64 {
    let tx = apply(op, x);
    let r: Vec<f64> = tx.iter().zip(x).map(|(a, b)| a - value * b).collect();
    norm2(&r) / (t_norm * norm2(x))
}

fn max_change(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Positive pivots of `T − σI = LDLᵀ`, or `None` if the shifted matrix is
/// not positive definite.
fn ldl_positive(op: &DiscreteOperator, shift: f64) -> Option<Vec<f64>> {
    let pivmin = pivot_floor(&op.offdiag);
    let mut pivots = Vec::with_capacity(op.diag.len());
    for i in 0..op.diag.len() {
        let q = if i == 0 {
            op.diag[0] - shift
        } else {
            op.diag[i] - shift - op.offdiag[i - 1] * op.offdiag[i - 1] / pivots[i - 1]
        };
        if q <= pivmin {
            return None;
        }
        pivots.push(q);
    }
    Some(pivots)
}

/// Solve `LDLᵀ x = b` in place. With negative off-diagonals and positive
/// pivots every update adds terms of one sign, so positive data stays positive.
fn ldl_solve(pivots: &[f64], offdiag: &[f64], b: &mut [f64]) {
    let n = b.len();
    for i in 1..n {
        b[i] -= offdiag[i - 1] / pivots[i - 1] * b[i - 1];
    }
    for i in 0..n {
        b[i] /= pivots[i];
    }
    for i in (0..n - 1).rev() {
        b[i] -= offdiag[i] / pivots[i] * b[i + 1];
    }
}

/// Partial-pivoting LU of a general tridiagonal matrix (LAPACK `gttrf` layout).
struct TridiagonalLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    ipiv: Vec<usize>,
}

impl TridiagonalLu {
    fn factor(op: &DiscreteOperator, shift: f64, zero_pivot: f64) -> Self {
        let n = op.diag.len();
        let mut dl = op.offdiag.clone();
        let mut du = op.offdiag.clone();
        let mut d: Vec<f64> = op.diag.iter().map(|v| v - shift).collect();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut ipiv: Vec<usize> = (0..n).collect();
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] != 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                ipiv[i] = i + 1;
            }
        }
        for p in d.iter_mut() {
            if *p == 0.0 {
                *p = zero_pivot;
            }
        }
        TridiagonalLu { dl, d, du, du2, ipiv }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = b.len();
        for i in 0..n - 1 {
            let ip = self.ipiv[i];
            let temp = b[2 * i + 1 - ip] - self.dl[i] * b[ip];
            b[i] = b[ip];
            b[i + 1] = temp;
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

/// Ground state by inverse iteration at the lower bisection end, where
/// `T − σI` is positive definite and the eigenvector comes out strictly positive.
fn ground_state(op: &DiscreteOperator, value: f64, bracket: (f64, f64), t_norm: f64) -> Result<Eigenpair> {
    let n = op.diag.len();
    let mut shift = bracket.0;
    let mut pivots = ldl_positive(op, shift);
    // The count certified `lo` below every eigenvalue, so this only retries
    // against rounding in the last pivot.
    let mut widen = bisection_tolerance(bracket.0, bracket.1);
    while pivots.is_none() {
        shift -= widen;
        widen *= 2.0;
        pivots = ldl_positive(op, shift);
    }
    let pivots = pivots.expect("loop exits with a factorization");

    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut residual = f64::INFINITY;
    for it in 1..=MAX_INVERSE_ITERATIONS {
        let mut y = x.clone();
        ldl_solve(&pivots, &op.offdiag, &mut y);
        normalize(&mut y);
        let change = max_change(&x, &y);
        x = y;
        residual = relative_residual(op, value, &x, t_norm);
        if it >= 3 && change <= 1e-13 {
            return finish(0, value, bracket, x, it, residual);
        }
    }
    if residual <= RESIDUAL_TOL {
        return finish(0, value, bracket, x, MAX_INVERSE_ITERATIONS, residual);
    }
    Err(Error::NoConvergence {
        index: 0,
        iterations: MAX_INVERSE_ITERATIONS,
        residual,
    })
}

fn finish(
    index: usize,
    value: f64,
    bracket: (f64, f64),
    vector: Vec<f64>,
    iterations: usize,
    relative_residual: f64,
) -> Result<Eigenpair> {
    if relative_residual > RESIDUAL_TOL {
        return Err(Error::NoConvergence {
            index,
            iterations,
            residual: relative_residual,
        });
    }
    Ok(Eigenpair {
        value,
        bracket,
        vector,
        iterations,
        relative_residual,
    })
}

fn deflate(x: &mut [f64], against: &[f64]) {
    let dot: f64 = x.iter().zip(against).map(|(a, b)| a * b).sum();
    x.iter_mut().zip(against).for_each(|(a, b)| *a -= dot * b);
}

/// First excited state by shifted inverse iteration, kept orthogonal to the ground state.
fn excited_state(
    op: &DiscreteOperator,
    value: f64,
    bracket: (f64, f64),
    ground: &[f64],
    t_norm: f64,
) -> Result<Eigenpair> {
    let n = op.diag.len();
    let lu = TridiagonalLu::factor(op, value, f64::EPSILON * t_norm);
    let mut x: Vec<f64> = (0..n)
        .map(|i| {
            let s = (i as f64 + 0.5) / n as f64;
            (std::f64::consts::PI * s).cos() + 1e-3 * (7.0 * s).sin()
        })
        .collect();
    deflate(&mut x, ground);
    normalize(&mut x);
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    for it in 1..=MAX_INVERSE_ITERATIONS {
        iterations = it;
        let mut y = x.clone();
        lu.solve(&mut y);
        deflate(&mut y, ground);
        normalize(&mut y);
        // Sign is arbitrary between iterations; align before comparing.
        let dot: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        if dot < 0.0 {
            y.iter_mut().for_each(|v| *v = -*v);
        }
        let change = max_change(&x, &y);
        x = y;
        residual = relative_residual(op, value, &x, t_norm);
        if it >= 2 && change <= 1e-12 {
            break;
        }
    }
    if x[0] < 0.0 {
        x.iter_mut().for_each(|v| *v = -*v);
    }
    finish(1, value, bracket, x, iterations, residual)
}

/// The two lowest eigenpairs of `op`, eigenvalues by Sturm bisection and
/// eigenvectors (Euclidean-unit, ground state positive) by inverse iteration.
pub fn lowest_two_eigenpairs(op: &DiscreteOperator) -> Result<(Eigenpair, Eigenpair)> {
    let n = op.diag.len();
    if n < 2 {
        return Err(Error::InvalidGrid(format!("need at least 2 cells, got {n}")));
    }
    let diag_max = op.diag.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let off_max = op.offdiag.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let floor = op
        .diag
        .iter()
        .fold(f64::INFINITY, |m, &v| m.min(v))
        - 2.0 * off_max;
    let mut lo = floor - 1.0 - 1e-12 * floor.abs();
    while sturm_count(&op.diag, &op.offdiag, lo) > 0 {
        lo -= 1.0 + lo.abs();
    }
    let mut ceiling = diag_max + 2.0 * off_max;
    let mut raises = 0;
    while sturm_count(&op.diag, &op.offdiag, ceiling) < 2 {
        if raises == MAX_CEILING_RAISES {
            return Err(Error::TooFewEigenvalues {
                found: sturm_count(&op.diag, &op.offdiag, ceiling),
                ceiling,
            });
        }
        ceiling = 2.0 * ceiling.abs() + 1.0;
        raises += 1;
    }

    let b0 = bisect(&op.diag, &op.offdiag, 0, lo, ceiling);
    let b1 = bisect(&op.diag, &op.offdiag, 1, b0.0, ceiling);
    let l0 = 0.5 * (b0.0 + b0.1);
    let l1 = 0.5 * (b1.0 + b1.1);

    let t_norm = inf_norm(op);
    let ground = ground_state(op, l0, b0, t_norm)?;
    let excited = excited_state(op, l1, b1, &ground.vector, t_norm)?;
    Ok((ground, excited))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(diag: Vec<f64>, offdiag: Vec<f64>) -> DiscreteOperator {
        DiscreteOperator {
            cell_potential: vec![0.0; diag.len()],
            diag,
            offdiag,
            cell_width: 1.0,
        }
    }

    /// Dense symmetric Jacobi rotations; test-only reference eigenvalues.
    fn jacobi_eigenvalues(o: &DiscreteOperator) -> Vec<f64> {
        let n = o.diag.len();
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            a[i][i] = o.diag[i];
            if i + 1 < n {
                a[i][i + 1] = o.offdiag[i];
                a[i + 1][i] = o.offdiag[i];
            }
        }
        for _ in 0..100 {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[i][j] * a[i][j])
                .sum();
            if off < 1e-26 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    if a[p][q].abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for row in a.iter_mut() {
                        let (akp, akq) = (row[p], row[q]);
                        row[p] = c * akp - s * akq;
                        row[q] = s * akp + c * akq;
                    }
                    let (rp, rq) = (a[p].clone(), a[q].clone());
                    for (k, (apk, aqk)) in rp.into_iter().zip(rq).enumerate() {
                        a[p][k] = c * apk - s * aqk;
                        a[q][k] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    #[test]
    fn sturm_count_matches_dense_reference() {
        let o = op(
            vec![4.0, -1.0, 3.0, 0.5, 2.0, 7.0],
            vec![1.0, -2.0, 0.3, 1.5, -0.7],
        );
        let ev = jacobi_eigenvalues(&o);
        for (k, &e) in ev.iter().enumerate() {
            assert_eq!(sturm_count(&o.diag, &o.offdiag, e - 1e-9), k);
            assert_eq!(sturm_count(&o.diag, &o.offdiag, e + 1e-9), k + 1);
        }
        let (g, x) = lowest_two_eigenpairs(&o).unwrap();
        assert!((g.value - ev[0]).abs() < 1e-12);
        assert!((x.value - ev[1]).abs() < 1e-12);
    }

    #[test]
    fn lu_solve_matches_product() {
        let o = op(vec![0.1, 2.0, -3.0, 1.0, 0.0], vec![5.0, -1.0, 2.0, 4.0]);
        let lu = TridiagonalLu::factor(&o, 0.3, 1e-300);
        let x_true = vec![1.0, -2.0, 0.5, 3.0, -1.5];
        let shifted = op(o.diag.iter().map(|d| d - 0.3).collect(), o.offdiag.clone());
        let mut b = apply(&shifted, &x_true);
        lu.solve(&mut b);
        for (a, e) in b.iter().zip(&x_true) {
            assert!((a - e).abs() < 1e-12, "{a} vs {e}");
        }
    }

    #[test]
    fn ground_state_is_positive_with_deep_barrier() {
        // Barrier of height 50 over half the cells: strongly decaying ground state.
        let n = 400;
        let h: f64 = 0.05;
        let k = 1.0 / (h * h);
        let diag: Vec<f64> = (0..n)
            .map(|i| {
                let base = if i == 0 || i == n - 1 { k } else { 2.0 * k };
                base + if i >= n / 2 { 50.0 } else { 0.0 }
            })
            .collect();
        let o = op(diag, vec![-k; n - 1]);
        let (g, x) = lowest_two_eigenpairs(&o).unwrap();
        assert!(g.vector.iter().all(|&v| v > 0.0));
        let (lo, hi) = g.vector.iter().fold((f64::MAX, 0.0_f64), |(a, b), &v| (a.min(v), b.max(v)));
        assert!(lo / hi < 1e-25, "ratio {}", lo / hi);
        assert!(g.relative_residual < 1e-12 && x.relative_residual < 1e-10);
        let dot: f64 = g.vector.iter().zip(&x.vector).map(|(a, b)| a * b).sum();
        assert!(dot.abs() < 1e-10);
    }
}
