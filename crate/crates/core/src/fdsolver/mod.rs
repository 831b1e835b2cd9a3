//! Cell-centred finite-difference discretization of `h_L` with Neumann ends,
//! and the extrapolated two-level spectral solve built on it.

pub mod richardson;
pub mod tridiag;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{check_length, Error, Result};
use crate::potentials::PotentialSpec;

pub use tridiag::{lowest_two_eigenpairs, sturm_count, Eigenpair};

pub const DEFAULT_BASE_CELLS: usize = 256;
pub const DEFAULT_LEVELS: usize = 3;
pub const DEFAULT_CELLS_PER_LENGTH: f64 = 64.0;

/// Smallest base grid accepted by [`solve_extrapolated`].
pub const MIN_BASE_CELLS: usize = 64;

/// `max(256, ceil(64·L))`, which keeps `h ≲ 1/64` across sweeps.
pub fn default_base_cells(length: f64) -> usize {
    base_cells_for(length, DEFAULT_CELLS_PER_LENGTH, DEFAULT_BASE_CELLS)
}

pub fn base_cells_for(length: f64, cells_per_length: f64, min_cells: usize) -> usize {
    min_cells.max((cells_per_length * length).ceil() as usize)
}

/// Uniform cell-centred grid on `(-L/2, L/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    length: f64,
    cells: usize,
}

impl Grid {
    pub fn new(length: f64, cells: usize) -> Result<Self> {
        check_length(length)?;
        if cells < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 cells, got {cells}")));
        }
        Ok(Grid { length, cells })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn cell_width(&self) -> f64 {
        self.length / self.cells as f64
    }

    /// Left face of cell `i` (`i = cells` gives the right end).
    pub fn face(&self, i: usize) -> f64 {
        -0.5 * self.length + i as f64 * self.cell_width()
    }

    pub fn node(&self, i: usize) -> f64 {
        -0.5 * self.length + (i as f64 + 0.5) * self.cell_width()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.cells).map(|i| self.node(i))
    }
}

/// Symmetric tridiagonal matrix of the discretized operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteOperator {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
    pub cell_width: f64,
    /// Potential part of `diag`.
    pub cell_potential: Vec<f64>,
}

impl DiscreteOperator {
    /// `⟨x, Tx⟩ / ⟨x, x⟩` as `Σ (x_{i+1} − x_i)²/h² + Σ v̄_i x_i²` over `Σ x_i²`.
    ///
    /// Both sums are non-negative, so an energy near zero keeps its relative
    /// accuracy. Forming `⟨x, Tx⟩` from the matrix entries cancels at the
    /// `1/h²` scale instead.
    pub fn rayleigh_quotient(&self, x: &[f64]) -> f64 {
        let h2 = self.cell_width * self.cell_width;
        let kinetic: f64 = x.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum::<f64>() / h2;
        let potential: f64 = x.iter().zip(&self.cell_potential).map(|(xi, v)| v * xi * xi).sum();
        let norm: f64 = x.iter().map(|xi| xi * xi).sum();
        (kinetic + potential) / norm
    }
}

/// Three-point stencil with reflecting boundary cells. The potential enters
/// as its exact mean over each cell.
pub fn assemble(p: &PotentialSpec, grid: &Grid) -> DiscreteOperator {
    let n = grid.cells();
    let h = grid.cell_width();
    let k = 1.0 / (h * h);
    let cell_potential: Vec<f64> = (0..n).map(|i| p.average(grid.face(i), grid.face(i + 1))).collect();
    let diag = cell_potential
        .iter()
        .enumerate()
        .map(|(i, v)| if i == 0 || i == n - 1 { k + v } else { 2.0 * k + v })
        .collect();
    DiscreteOperator {
        diag,
        offdiag: vec![-k; n - 1],
        cell_width: h,
        cell_potential,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorEstimate {
    pub lambda0: f64,
    pub lambda1: f64,
    pub gap: f64,
    /// Change of the ground-state extrema between the two finest grids.
    pub phi0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservedOrder {
    pub lambda0: Option<f64>,
    pub lambda1: Option<f64>,
}

/// Raw values on one refinement level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelValues {
    pub cells: usize,
    pub lambda0: f64,
    pub lambda1: f64,
    pub inf_phi0: f64,
    pub sup_phi0: f64,
}

/// Extrapolated eigen-data for one `(potential, L)` instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    pub length: f64,
    pub base_cells: usize,
    pub levels: usize,
    /// Cell count of the finest grid; `phi0` lives on its nodes.
    pub cells: usize,
    pub cell_width: f64,
    pub lambda0: f64,
    pub lambda1: f64,
    pub gap: f64,
    pub inf_phi0: f64,
    pub sup_phi0: f64,
    pub error_estimate: ErrorEstimate,
    pub observed_order: ObservedOrder,
    pub residuals: [f64; 2],
    pub raw: Vec<LevelValues>,
    pub warnings: Vec<String>,
    /// Ground state on the finest grid, positive, with `Σ φᵢ² h = 1`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub phi0: Vec<f64>,
}

impl SpectralResult {
    pub fn harnack_ratio(&self) -> f64 {
        self.inf_phi0 / self.sup_phi0
    }

    pub fn without_profile(mut self) -> Self {
        self.phi0 = Vec::new();
        self
    }
}

struct LevelSolve {
    values: LevelValues,
    phi0: Vec<f64>,
    residuals: [f64; 2],
}

fn solve_level(p: &PotentialSpec, grid: &Grid) -> Result<LevelSolve> {
    let op = assemble(p, grid);
    let (ground, excited) = lowest_two_eigenpairs(&op)?;
    // Bisection resolves eigenvalues only to about ε‖T‖; the Rayleigh quotient
    // of the converged vectors is accurate to second order in their error.
    let lambda0 = op.rayleigh_quotient(&ground.vector);
    let lambda1 = op.rayleigh_quotient(&excited.vector);
    let scale = 1.0 / grid.cell_width().sqrt();
    let phi0: Vec<f64> = ground.vector.iter().map(|v| v * scale).collect();
    let (inf, sup) = phi0
        .iter()
        .fold((f64::INFINITY, 0.0_f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    Ok(LevelSolve {
        values: LevelValues {
            cells: grid.cells(),
            lambda0,
            lambda1,
            inf_phi0: inf,
            sup_phi0: sup,
        },
        phi0,
        residuals: [ground.relative_residual, excited.relative_residual],
    })
}

/// Solve on `base_cells · 2^k` cells for `k < levels` and extrapolate each
/// eigenvalue assuming second-order convergence.
pub fn solve_extrapolated(
    p: &PotentialSpec,
    length: f64,
    base_cells: usize,
    levels: usize,
) -> Result<SpectralResult> {
    check_length(length)?;
    p.validate()?;
    if base_cells < MIN_BASE_CELLS {
        return Err(Error::InvalidGrid(format!(
            "base cell count must be at least {MIN_BASE_CELLS}, got {base_cells}"
        )));
    }
    if !(2..=4).contains(&levels) {
        return Err(Error::InvalidArgument(format!(
            "levels must be 2, 3 or 4, got {levels}"
        )));
    }

    let mut raw = Vec::with_capacity(levels);
    let mut finest = None;
    for k in 0..levels {
        let grid = Grid::new(length, base_cells << k)?;
        let level = solve_level(p, &grid)?;
        raw.push(level.values);
        finest = Some((grid, level));
    }
    let (grid, finest) = finest.expect("at least two levels");

    let l0: Vec<f64> = raw.iter().map(|r| r.lambda0).collect();
    let l1: Vec<f64> = raw.iter().map(|r| r.lambda1).collect();
    let gaps: Vec<f64> = raw.iter().map(|r| r.lambda1 - r.lambda0).collect();
    let (lambda0, err0) = richardson::extrapolate(&l0);
    let (lambda1, err1) = richardson::extrapolate(&l1);
    let (gap, err_gap) = richardson::extrapolate(&gaps);

    let prev = raw[levels - 2];
    let phi_err = (finest.values.inf_phi0 - prev.inf_phi0)
        .abs()
        .max((finest.values.sup_phi0 - prev.sup_phi0).abs());

    // Level-to-level changes below the eigenvalue rounding level of the
    // finest operator carry no order information.
    let h = grid.cell_width();
    let noise_floor = 16.0 * f64::EPSILON * (4.0 / (h * h) + p.max_value().abs());
    let observed_order = ObservedOrder {
        lambda0: richardson::observed_order(&l0, noise_floor),
        lambda1: richardson::observed_order(&l1, noise_floor),
    };
    let mut warnings = Vec::new();
    for (name, order) in [("lambda0", observed_order.lambda0), ("lambda1", observed_order.lambda1)] {
        if let Some(order) = order {
            if (order - 2.0).abs() > 0.5 {
                let msg = format!(
                    "{name}: observed convergence order {order:.2} deviates from 2 \
                     (potential `{}`, L = {length})",
                    p.kind()
                );
                warn!("{msg}");
                warnings.push(msg);
            }
        }
    }

    Ok(SpectralResult {
        length,
        base_cells,
        levels,
        cells: grid.cells(),
        cell_width: grid.cell_width(),
        lambda0,
        lambda1,
        gap,
        inf_phi0: finest.values.inf_phi0,
        sup_phi0: finest.values.sup_phi0,
        error_estimate: ErrorEstimate {
            lambda0: err0,
            lambda1: err1,
            gap: err_gap,
            phi0: phi_err,
        },
        observed_order,
        residuals: finest.residuals,
        raw,
        warnings,
        phi0: finest.phi0,
    })
}
