//! Closed-form ground-state and spectral-gap inequalities, and their
//! verification against measured spectra.
//!
//! Exponentially small factors are carried in log space, so a bound such as
//! `e^{-800}` keeps a meaningful `ln_value` even after `value` underflows.

use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fdsolver::SpectralResult;
use crate::oracle::OracleAgreement;
use crate::potentials::{IntervalNorms, PotentialSpec};

const PI2: f64 = PI * PI;

/// A bound as `(ln value, value)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    pub ln_value: f64,
    pub value: f64,
}

impl Bound {
    fn from_ln(ln_value: f64) -> Self {
        Bound {
            ln_value,
            value: ln_value.exp(),
        }
    }

    fn from_value(value: f64) -> Self {
        Bound {
            ln_value: value.ln(),
            value,
        }
    }
}

/// `e^{-8L‖v‖₁} · π²/L²`.
pub fn gap_lower_bound(norms: &IntervalNorms, length: f64) -> Bound {
    Bound::from_ln(-8.0 * length * norms.l1 + (PI2 / (length * length)).ln())
}

/// `e^{-4L‖v‖₁}`, the floor on `inf φ⁰ / sup φ⁰`.
pub fn harnack_floor(norms: &IntervalNorms, length: f64) -> Bound {
    Bound::from_ln(-4.0 * length * norms.l1)
}

/// `e^{-4L‖v‖₁} / √L`.
pub fn inf_lower_bound(norms: &IntervalNorms, length: f64) -> Bound {
    Bound::from_ln(-4.0 * length * norms.l1 - 0.5 * length.ln())
}

/// `(1 + √(4π² + 16C)) / √L` for potentials with `v ≤ C/x²`; `None` otherwise.
pub fn sup_upper_bound(decay_constant: Option<f64>, length: f64) -> Option<f64> {
    decay_constant.map(|c| (1.0 + (4.0 * PI2 + 16.0 * c).sqrt()) / length.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabeledBound {
    pub name: &'static str,
    pub value: f64,
}

pub const LAMBDA0_MEAN_POTENTIAL: &str = "lambda0_mean_potential";
pub const LAMBDA0_QUARTER_INTERVAL: &str = "lambda0_quarter_interval";
pub const LAMBDA0_DECAY_CLASS: &str = "lambda0_decay_class";

/// Upper bounds on λ₀ from trial functions: the constant (`‖v‖₁/L`), the
/// Dirichlet–Neumann mode on `(L/4, L/2)` (`π²/(L/2)² + ‖v‖_{L∞(L/4, L/2)}`),
/// and, in the decay class, `(4π² + 16C)/L²`.
pub fn lambda0_upper_bounds(p: &PotentialSpec, norms: &IntervalNorms, length: f64) -> Vec<LabeledBound> {
    let mut out = vec![
        LabeledBound {
            name: LAMBDA0_MEAN_POTENTIAL,
            value: norms.l1 / length,
        },
        LabeledBound {
            name: LAMBDA0_QUARTER_INTERVAL,
            value: PI2 / (0.25 * length * length) + p.sup_on(0.25 * length, 0.5 * length),
        },
    ];
    if let Some(c) = norms.decay_constant {
        out.push(LabeledBound {
            name: LAMBDA0_DECAY_CLASS,
            value: (4.0 * PI2 + 16.0 * c) / (length * length),
        });
    }
    out
}

/// Gap of the Neumann Laplacian scaled by the squared Harnack ratio of the ground state.
pub fn kirsch_comparison_bound(inf_phi0: f64, sup_phi0: f64, length: f64) -> Result<f64> {
    if !(inf_phi0 > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "ground-state infimum must be positive, got {inf_phi0:e}"
        )));
    }
    if !(sup_phi0 >= inf_phi0) {
        return Err(Error::InvalidArgument(format!(
            "ground-state supremum {sup_phi0:e} below infimum {inf_phi0:e}"
        )));
    }
    let ratio = inf_phi0 / sup_phi0;
    Ok(ratio * ratio * PI2 / (length * length))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogDerivative {
    /// `max |φ'/φ|` over interior nodes, by central differences.
    pub max_ratio: f64,
    /// `4‖v‖₁`.
    pub bound: f64,
    /// Discretization allowance `h · sup|φ''/φ| ≤ h (‖v‖∞ + λ₀)` plus a relative floor.
    pub allowance: f64,
}

impl LogDerivative {
    pub fn holds(&self) -> bool {
        self.max_ratio <= self.bound + self.allowance
    }
}

pub fn log_derivative_check(
    phi0: &[f64],
    cell_width: f64,
    norms: &IntervalNorms,
    lambda0: f64,
    policy: &TolerancePolicy,
) -> Result<LogDerivative> {
    if !(cell_width > 0.0) {
        return Err(Error::InvalidArgument(format!("cell width must be positive, got {cell_width}")));
    }
    if let Some((index, &value)) = phi0.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
        return Err(Error::NonPositiveSample { index, value });
    }
    let max_ratio = phi0
        .windows(3)
        .map(|w| ((w[2] - w[0]) / (2.0 * cell_width * w[1])).abs())
        .fold(0.0, f64::max);
    let bound = 4.0 * norms.l1;
    let allowance = cell_width * (norms.sup + lambda0.max(0.0)) + policy.relative * bound.max(1.0);
    Ok(LogDerivative {
        max_ratio,
        bound,
        allowance,
    })
}

/// Slack granted to the measured side of every check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    /// Relative widening of the measured value; the solver's own error
    /// estimate is added on top.
    pub relative: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy { relative: 1e-8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Holds,
    Violated,
    Inapplicable,
}

impl CheckStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Holds => "holds",
            CheckStatus::Violated => "violated",
            CheckStatus::Inapplicable => "inapplicable",
        }
    }
}

/// One inequality `measured (relation) bound`.
///
/// `slack` is the raw signed margin (positive when the inequality holds
/// strictly). The check holds iff `slack + allowance ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub relation: Relation,
    pub bound_value: Option<f64>,
    pub bound_ln: Option<f64>,
    pub measured_value: Option<f64>,
    pub slack: Option<f64>,
    pub allowance: Option<f64>,
    pub status: CheckStatus,
}

impl BoundCheck {
    fn evaluate(name: &str, relation: Relation, bound: Bound, measured: f64, allowance: f64) -> Self {
        let slack = match relation {
            Relation::AtLeast => measured - bound.value,
            Relation::AtMost => bound.value - measured,
        };
        let status = if slack + allowance >= 0.0 {
            CheckStatus::Holds
        } else {
            CheckStatus::Violated
        };
        BoundCheck {
            name: name.to_string(),
            relation,
            bound_value: Some(bound.value),
            bound_ln: Some(bound.ln_value),
            measured_value: Some(measured),
            slack: Some(slack),
            allowance: Some(allowance),
            status,
        }
    }

    fn inapplicable(name: &str, relation: Relation, measured: f64) -> Self {
        BoundCheck {
            name: name.to_string(),
            relation,
            bound_value: None,
            bound_ln: None,
            measured_value: Some(measured),
            slack: None,
            allowance: None,
            status: CheckStatus::Inapplicable,
        }
    }

    fn failed(name: &str, relation: Relation, measured: f64) -> Self {
        BoundCheck {
            status: CheckStatus::Violated,
            ..Self::inapplicable(name, relation, measured)
        }
    }

    /// `|slack| / |bound|`, the relative tightness of the inequality.
    pub fn relative_slack(&self) -> Option<f64> {
        match (self.slack, self.bound_value) {
            (Some(s), Some(b)) if b != 0.0 => Some((s / b).abs()),
            _ => None,
        }
    }
}

/// Every applicable inequality for one `(potential, L)` instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub potential: PotentialSpec,
    pub length: f64,
    pub norms: IntervalNorms,
    pub checks: Vec<BoundCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleAgreement>,
}

pub mod names {
    pub const GAP_THEOREM: &str = "gap_theorem";
    pub const GAP_KIRSCH: &str = "gap_kirsch";
    pub const INF_LOWER: &str = "inf_lower";
    pub const HARNACK_RATIO: &str = "harnack_ratio";
    pub const SUP_DECAY_CLASS: &str = "sup_decay_class";
    pub const SUP_ENERGY: &str = "sup_energy";
    pub const SUP_NORMALIZATION: &str = "sup_normalization";
    pub const LOG_DERIVATIVE: &str = "log_derivative";
}

impl BoundReport {
    pub fn check(&self, name: &str) -> Option<&BoundCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn applicable(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.status != CheckStatus::Inapplicable)
            .count()
    }

    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.status == CheckStatus::Holds).count()
    }

    pub fn violations(&self) -> impl Iterator<Item = &BoundCheck> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Violated)
    }

    /// All applicable checks hold and the oracle, if consulted, agrees.
    pub fn all_hold(&self) -> bool {
        self.violations().next().is_none() && self.oracle.as_ref().is_none_or(|o| o.agrees())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }

    /// One CSV row per check.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record([
            "name",
            "relation",
            "bound_value",
            "bound_ln",
            "measured_value",
            "slack",
            "allowance",
            "status",
        ])?;
        let fmt = |v: Option<f64>| v.map(crate::sweep::format_float).unwrap_or_default();
        for c in &self.checks {
            w.write_record([
                c.name.clone(),
                c.relation.symbol().to_string(),
                fmt(c.bound_value),
                fmt(c.bound_ln),
                fmt(c.measured_value),
                fmt(c.slack),
                fmt(c.allowance),
                c.status.as_str().to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Evaluate every inequality against `result`, which must have been computed
/// for `(p, length)`.
pub fn verify(p: &PotentialSpec, length: f64, result: &SpectralResult, policy: &TolerancePolicy) -> Result<BoundReport> {
    use names::*;
    let norms = p.interval_norms(length)?;
    let eps = policy.relative;
    let err = result.error_estimate;
    let (inf, sup) = (result.inf_phi0, result.sup_phi0);
    let ratio = inf / sup;
    let ratio_err = err.phi0 / sup + inf * err.phi0 / (sup * sup);
    let lambda0 = result.lambda0;
    let mut checks = vec![BoundCheck::evaluate(
        GAP_THEOREM,
        Relation::AtLeast,
        gap_lower_bound(&norms, length),
        result.gap,
        eps * result.gap.abs() + err.gap,
    )];

    checks.push(match kirsch_comparison_bound(inf, sup, length) {
        Ok(k) => BoundCheck::evaluate(
            GAP_KIRSCH,
            Relation::AtLeast,
            Bound::from_value(k),
            result.gap,
            eps * result.gap.abs() + err.gap + 2.0 * ratio * ratio_err * PI2 / (length * length),
        ),
        Err(_) => BoundCheck::failed(GAP_KIRSCH, Relation::AtLeast, result.gap),
    });

    checks.push(BoundCheck::evaluate(
        INF_LOWER,
        Relation::AtLeast,
        inf_lower_bound(&norms, length),
        inf,
        eps * inf + err.phi0,
    ));

    checks.push(BoundCheck::evaluate(
        HARNACK_RATIO,
        Relation::AtLeast,
        harnack_floor(&norms, length),
        ratio,
        eps * ratio + ratio_err,
    ));

    checks.push(match sup_upper_bound(norms.decay_constant, length) {
        Some(b) => BoundCheck::evaluate(
            SUP_DECAY_CLASS,
            Relation::AtMost,
            Bound::from_value(b),
            sup,
            eps * sup + err.phi0,
        ),
        None => BoundCheck::inapplicable(SUP_DECAY_CLASS, Relation::AtMost, sup),
    });

    // λ₀ ≥ 0 for v ≥ 0; clamp rounding-level negatives before the square root.
    let l0 = lambda0.max(0.0);
    let root_l = length.sqrt();
    let energy_bound = l0.sqrt() * root_l + 1.0 / root_l;
    let energy_spread = root_l * ((l0 + err.lambda0).sqrt() - l0.sqrt());
    checks.push(BoundCheck::evaluate(
        SUP_ENERGY,
        Relation::AtMost,
        Bound::from_value(energy_bound),
        sup,
        eps * sup + err.phi0 + energy_spread,
    ));

    checks.push(BoundCheck::evaluate(
        SUP_NORMALIZATION,
        Relation::AtLeast,
        Bound::from_value(1.0 / root_l),
        sup,
        eps * sup + err.phi0,
    ));

    // λ₀ may vanish, so its relative widening is taken on the free-gap scale at least.
    let lambda0_scale = lambda0.abs().max(PI2 / (length * length));
    for b in lambda0_upper_bounds(p, &norms, length) {
        checks.push(BoundCheck::evaluate(
            b.name,
            Relation::AtMost,
            Bound::from_value(b.value),
            lambda0,
            eps * lambda0_scale + err.lambda0,
        ));
    }
    if norms.decay_constant.is_none() {
        checks.push(BoundCheck::inapplicable(LAMBDA0_DECAY_CLASS, Relation::AtMost, lambda0));
    }

    checks.push(
        match log_derivative_check(&result.phi0, result.cell_width, &norms, lambda0, policy) {
            Ok(ld) => BoundCheck::evaluate(
                LOG_DERIVATIVE,
                Relation::AtMost,
                Bound::from_value(ld.bound),
                ld.max_ratio,
                ld.allowance,
            ),
            Err(_) if result.phi0.is_empty() => {
                BoundCheck::inapplicable(LOG_DERIVATIVE, Relation::AtMost, f64::NAN)
            }
            Err(_) => BoundCheck::failed(LOG_DERIVATIVE, Relation::AtMost, f64::NAN),
        },
    );

    Ok(BoundReport {
        potential: p.clone(),
        length,
        norms,
        checks,
        oracle: None,
    })
}
