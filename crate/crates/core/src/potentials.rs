//! Admissible potentials.
//!
//! Every potential is a symbolic record, so the interval norms that feed the
//! bounds are computed in closed form rather than by quadrature.

use serde::{Deserialize, Serialize};

use crate::error::{check_length, Error, Result};

/// One piece `height · 1_[a, b]` of a [`PotentialSpec::MultiStep`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepPiece {
    pub height: f64,
    pub support: [f64; 2],
}

impl StepPiece {
    fn contains(&self, x: f64) -> bool {
        self.support[0] <= x && x <= self.support[1]
    }

    fn overlap(&self, lo: f64, hi: f64) -> f64 {
        (hi.min(self.support[1]) - lo.max(self.support[0])).max(0.0)
    }

    /// Positive-measure intersection with the open interval `(lo, hi)`.
    fn meets(&self, lo: f64, hi: f64) -> bool {
        self.support[0] < hi && self.support[1] > lo
    }

    /// Smallest `C` with `height ≤ C / x²` on the support, if finite.
    fn decay_constant(&self) -> Option<f64> {
        let [a, b] = self.support;
        if self.height == 0.0 {
            Some(0.0)
        } else if a <= 0.0 && 0.0 <= b {
            None
        } else {
            Some(self.height * (a * a).max(b * b))
        }
    }
}

/// A non-negative, bounded potential `v: ℝ → [0, ∞)`.
///
/// JSON form is internally tagged, e.g.
/// `{"type": "step", "height": 1.0, "support": [-0.5, 0.5]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PotentialSpec {
    Zero,
    Constant {
        value: f64,
    },
    Step {
        height: f64,
        support: [f64; 2],
    },
    MultiStep {
        pieces: Vec<StepPiece>,
    },
    /// `v(x) = min(cap, decay / x²)`.
    InverseSquareCapped {
        decay: f64,
        cap: f64,
    },
}

/// Norms of a potential restricted to `I = (-L/2, L/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalNorms {
    /// `‖v‖_{L¹(I)}`
    pub l1: f64,
    /// `‖v‖_{L∞(I)}`
    pub sup: f64,
    /// A constant `C` with `v(x) ≤ C/x²` for all `x ≠ 0`, when one exists.
    pub decay_constant: Option<f64>,
}

fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::InvalidPotential {
        field: field.into(),
        reason: reason.into(),
    }
}

fn check_height(field: &str, h: f64) -> Result<()> {
    if !h.is_finite() {
        Err(invalid(field, "must be finite"))
    } else if h < 0.0 {
        Err(invalid(field, format!("must be non-negative, got {h}")))
    } else {
        Ok(())
    }
}

fn check_support(field: &str, [a, b]: [f64; 2]) -> Result<()> {
    if !(a.is_finite() && b.is_finite()) {
        Err(invalid(field, "endpoints must be finite"))
    } else if a >= b {
        Err(invalid(field, format!("left endpoint {a} must be below right endpoint {b}")))
    } else {
        Ok(())
    }
}

#[derive(Clone, Copy)]
enum Shape {
    Number,
    Interval,
    Pieces,
}

fn json_kind(v: &serde_json::Value) -> &'static str {
    use serde_json::Value;
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

fn check_shape(field: &str, v: Option<&serde_json::Value>, shape: Shape) -> Option<Error> {
    let Some(v) = v else {
        return Some(invalid(field, "missing"));
    };
    match shape {
        Shape::Number if !v.is_number() => Some(invalid(field, format!("expected a number, got {}", json_kind(v)))),
        Shape::Interval => match v.as_array() {
            Some(a) if a.len() == 2 && a.iter().all(|x| x.is_number()) => None,
            _ => Some(invalid(field, "expected an array of two numbers [a, b]")),
        },
        Shape::Pieces => {
            let Some(pieces) = v.as_array() else {
                return Some(invalid(field, format!("expected an array, got {}", json_kind(v))));
            };
            pieces.iter().enumerate().find_map(|(i, piece)| {
                let name = format!("{field}[{i}]");
                if !piece.is_object() {
                    return Some(invalid(name, format!("expected an object, got {}", json_kind(piece))));
                }
                check_shape(&format!("{name}.height"), piece.get("height"), Shape::Number)
                    .or_else(|| check_shape(&format!("{name}.support"), piece.get("support"), Shape::Interval))
            })
        }
        _ => None,
    }
}

/// Locate the offending field of a JSON potential that failed to deserialize.
fn diagnose_shape(value: &serde_json::Value) -> Option<Error> {
    let Some(obj) = value.as_object() else {
        return Some(invalid("type", format!("potential must be a JSON object, got {}", json_kind(value))));
    };
    let Some(kind) = obj.get("type").and_then(|t| t.as_str()) else {
        return Some(invalid("type", "missing or not a string"));
    };
    let fields: &[(&str, Shape)] = match kind {
        "zero" => &[],
        "constant" => &[("value", Shape::Number)],
        "step" => &[("height", Shape::Number), ("support", Shape::Interval)],
        "multi_step" => &[("pieces", Shape::Pieces)],
        "inverse_square_capped" => &[("decay", Shape::Number), ("cap", Shape::Number)],
        other => {
            return Some(invalid(
                "type",
                format!(
                    "unknown potential type {other:?}; expected zero, constant, step, \
                     multi_step or inverse_square_capped"
                ),
            ))
        }
    };
    fields
        .iter()
        .find_map(|&(name, shape)| check_shape(name, obj.get(name), shape))
}

impl PotentialSpec {
    pub fn step(height: f64, a: f64, b: f64) -> Self {
        PotentialSpec::Step {
            height,
            support: [a, b],
        }
    }

    /// Parse and validate a JSON description. Shape errors name the field.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let spec: PotentialSpec = match serde_json::from_value(value.clone()) {
            Ok(spec) => spec,
            Err(e) => return Err(diagnose_shape(&value).unwrap_or_else(|| e.into())),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("potential serialization is infallible")
    }

    pub fn kind(&self) -> &'static str {
        match self {
            PotentialSpec::Zero => "zero",
            PotentialSpec::Constant { .. } => "constant",
            PotentialSpec::Step { .. } => "step",
            PotentialSpec::MultiStep { .. } => "multi_step",
            PotentialSpec::InverseSquareCapped { .. } => "inverse_square_capped",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PotentialSpec::Zero => Ok(()),
            PotentialSpec::Constant { value } => check_height("value", *value),
            PotentialSpec::Step { height, support } => {
                check_height("height", *height)?;
                check_support("support", *support)
            }
            PotentialSpec::MultiStep { pieces } => {
                for (i, piece) in pieces.iter().enumerate() {
                    check_height(&format!("pieces[{i}].height"), piece.height)?;
                    check_support(&format!("pieces[{i}].support"), piece.support)?;
                }
                for (i, pair) in pieces.windows(2).enumerate() {
                    if pair[0].support[1] >= pair[1].support[0] {
                        return Err(invalid(
                            format!("pieces[{}].support", i + 1),
                            "pieces must be pairwise disjoint and sorted by left endpoint",
                        ));
                    }
                }
                Ok(())
            }
            PotentialSpec::InverseSquareCapped { decay, cap } => {
                if !(decay.is_finite() && *decay > 0.0) {
                    return Err(invalid("decay", format!("must be positive and finite, got {decay}")));
                }
                if !(cap.is_finite() && *cap > 0.0) {
                    return Err(invalid("cap", format!("must be positive and finite, got {cap}")));
                }
                Ok(())
            }
        }
    }

    /// Pointwise value. Step supports are closed intervals.
    pub fn evaluate(&self, x: f64) -> f64 {
        match self {
            PotentialSpec::Zero => 0.0,
            PotentialSpec::Constant { value } => *value,
            PotentialSpec::Step { height, support } => {
                if support[0] <= x && x <= support[1] {
                    *height
                } else {
                    0.0
                }
            }
            PotentialSpec::MultiStep { pieces } => pieces
                .iter()
                .find(|p| p.contains(x))
                .map_or(0.0, |p| p.height),
            PotentialSpec::InverseSquareCapped { decay, cap } => {
                let x2 = x * x;
                if x2 == 0.0 || decay / x2 > *cap {
                    *cap
                } else {
                    decay / x2
                }
            }
        }
    }

    /// Value of `v` at `x` treating `[a, b]` as a segment free of
    /// discontinuities: piecewise-constant potentials take their interior
    /// value even at the segment ends.
    pub fn evaluate_on_segment(&self, x: f64, a: f64, b: f64) -> f64 {
        if self.is_piecewise_constant() {
            self.evaluate(0.5 * (a + b))
        } else {
            self.evaluate(x)
        }
    }

    pub fn is_piecewise_constant(&self) -> bool {
        !matches!(self, PotentialSpec::InverseSquareCapped { .. })
    }

    /// `∫_lo^hi v(x) dx` in closed form (`lo ≤ hi`).
    pub fn integral(&self, lo: f64, hi: f64) -> f64 {
        debug_assert!(lo <= hi);
        match self {
            PotentialSpec::Zero => 0.0,
            PotentialSpec::Constant { value } => value * (hi - lo),
            PotentialSpec::Step { height, support } => {
                height * (hi.min(support[1]) - lo.max(support[0])).max(0.0)
            }
            PotentialSpec::MultiStep { pieces } => {
                pieces.iter().map(|p| p.height * p.overlap(lo, hi)).sum()
            }
            PotentialSpec::InverseSquareCapped { decay, cap } => {
                inverse_square_antiderivative(*decay, *cap, hi)
                    - inverse_square_antiderivative(*decay, *cap, lo)
            }
        }
    }

    /// Mean of `v` over `[lo, hi]`; exact for constant pieces that cover the cell.
    pub fn average(&self, lo: f64, hi: f64) -> f64 {
        let width = hi - lo;
        match self {
            PotentialSpec::Zero => 0.0,
            PotentialSpec::Constant { value } => *value,
            PotentialSpec::Step { height, support } => {
                let overlap = (hi.min(support[1]) - lo.max(support[0])).max(0.0);
                if overlap == width {
                    *height
                } else {
                    height * (overlap / width)
                }
            }
            PotentialSpec::MultiStep { pieces } => pieces
                .iter()
                .map(|p| {
                    let overlap = p.overlap(lo, hi);
                    if overlap == width {
                        p.height
                    } else {
                        p.height * (overlap / width)
                    }
                })
                .sum(),
            PotentialSpec::InverseSquareCapped { .. } => self.integral(lo, hi) / width,
        }
    }

    /// Essential supremum of `v` over the open interval `(lo, hi)`.
    pub fn sup_on(&self, lo: f64, hi: f64) -> f64 {
        match self {
            PotentialSpec::Zero => 0.0,
            PotentialSpec::Constant { value } => *value,
            PotentialSpec::Step { height, support } => {
                if support[0] < hi && support[1] > lo {
                    *height
                } else {
                    0.0
                }
            }
            PotentialSpec::MultiStep { pieces } => pieces
                .iter()
                .filter(|p| p.meets(lo, hi))
                .map(|p| p.height)
                .fold(0.0, f64::max),
            PotentialSpec::InverseSquareCapped { .. } => {
                let nearest = if lo < 0.0 && 0.0 < hi {
                    0.0
                } else {
                    lo.abs().min(hi.abs())
                };
                self.evaluate(nearest)
            }
        }
    }

    /// Global supremum over ℝ.
    pub fn max_value(&self) -> f64 {
        match self {
            PotentialSpec::Zero => 0.0,
            PotentialSpec::Constant { value } => *value,
            PotentialSpec::Step { height, .. } => *height,
            PotentialSpec::MultiStep { pieces } => pieces.iter().map(|p| p.height).fold(0.0, f64::max),
            PotentialSpec::InverseSquareCapped { cap, .. } => *cap,
        }
    }

    /// Smallest `C` such that `v(x) ≤ C/x²` for every `x ≠ 0`, when finite.
    pub fn decay_constant(&self) -> Option<f64> {
        match self {
            PotentialSpec::Zero => Some(0.0),
            PotentialSpec::Constant { value } => (*value == 0.0).then_some(0.0),
            PotentialSpec::Step { height, support } => StepPiece {
                height: *height,
                support: *support,
            }
            .decay_constant(),
            PotentialSpec::MultiStep { pieces } => pieces
                .iter()
                .map(StepPiece::decay_constant)
                .try_fold(0.0, |acc, c| c.map(|c| f64::max(acc, c))),
            PotentialSpec::InverseSquareCapped { decay, .. } => Some(*decay),
        }
    }

    /// Points in the open interval `(lo, hi)` where `v` jumps or has a kink, sorted.
    pub fn breakpoints(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut points: Vec<f64> = match self {
            PotentialSpec::Zero | PotentialSpec::Constant { .. } => Vec::new(),
            PotentialSpec::Step { support, .. } => support.to_vec(),
            PotentialSpec::MultiStep { pieces } => {
                pieces.iter().flat_map(|p| p.support).collect()
            }
            PotentialSpec::InverseSquareCapped { decay, cap } => {
                let knee = (decay / cap).sqrt();
                vec![-knee, knee]
            }
        };
        points.retain(|&x| lo < x && x < hi);
        points.sort_by(f64::total_cmp);
        points.dedup();
        points
    }

    /// Exact norms on `I = (-L/2, L/2)`.
    pub fn interval_norms(&self, length: f64) -> Result<IntervalNorms> {
        check_length(length)?;
        let half = 0.5 * length;
        Ok(IntervalNorms {
            l1: self.integral(-half, half),
            sup: self.sup_on(-half, half),
            decay_constant: self.decay_constant(),
        })
    }
}

/// Odd antiderivative of `min(cap, decay/x²)` vanishing at 0.
fn inverse_square_antiderivative(decay: f64, cap: f64, x: f64) -> f64 {
    let knee = (decay / cap).sqrt();
    let t = x.abs();
    let value = if t <= knee {
        cap * t
    } else {
        2.0 * (decay * cap).sqrt() - decay / t
    };
    value.copysign(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn evaluate_examples() {
        assert_eq!(PotentialSpec::Zero.evaluate(0.3), 0.0);
        let step = PotentialSpec::step(1.0, -0.5, 0.5);
        assert_eq!(step.evaluate(0.0), 1.0);
        assert_eq!(step.evaluate(0.7), 0.0);
        let isc = PotentialSpec::InverseSquareCapped { decay: 1.0, cap: 4.0 };
        assert_eq!(isc.evaluate(1.0), 1.0);
        assert_eq!(isc.evaluate(0.1), 4.0);
        assert_eq!(isc.evaluate(0.0), 4.0);
    }

    #[test]
    fn norm_examples() {
        let n = PotentialSpec::Zero.interval_norms(10.0).unwrap();
        assert_eq!((n.l1, n.sup, n.decay_constant), (0.0, 0.0, Some(0.0)));

        let n = PotentialSpec::step(2.0, -0.25, 0.25).interval_norms(1.0).unwrap();
        assert_eq!((n.l1, n.sup), (1.0, 2.0));
        assert_eq!(n.decay_constant, None);

        let n = PotentialSpec::InverseSquareCapped { decay: 1.0, cap: 4.0 }
            .interval_norms(4.0)
            .unwrap();
        assert!((n.l1 - 7.0).abs() < 1e-15);
        assert_eq!(n.sup, 4.0);
        assert_eq!(n.decay_constant, Some(1.0));
    }

    #[test]
    fn step_norms_clip_to_interval() {
        let n = PotentialSpec::step(1.0, -0.5, 3.0).interval_norms(4.0).unwrap();
        assert_eq!(n.l1, 2.5);
        let outside = PotentialSpec::step(3.0, 2.0, 5.0).interval_norms(4.0).unwrap();
        assert_eq!((outside.l1, outside.sup), (0.0, 0.0));
        assert_eq!(outside.decay_constant, Some(75.0));
    }

    #[test]
    fn decay_constants() {
        assert_eq!(PotentialSpec::Constant { value: 2.0 }.decay_constant(), None);
        assert_eq!(PotentialSpec::Constant { value: 0.0 }.decay_constant(), Some(0.0));
        assert_eq!(PotentialSpec::step(2.0, 1.0, 3.0).decay_constant(), Some(18.0));
        assert_eq!(PotentialSpec::step(2.0, -3.0, -1.0).decay_constant(), Some(18.0));
        let multi = PotentialSpec::MultiStep {
            pieces: vec![
                StepPiece { height: 1.0, support: [-4.0, -2.0] },
                StepPiece { height: 2.0, support: [1.0, 2.0] },
            ],
        };
        assert_eq!(multi.decay_constant(), Some(16.0));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            PotentialSpec::Zero.interval_norms(0.0),
            Err(Error::InvalidLength(_))
        ));
        assert!(PotentialSpec::step(-1.0, 0.0, 1.0).validate().is_err());
        assert!(PotentialSpec::step(1.0, 1.0, 1.0).validate().is_err());
        let overlapping = PotentialSpec::MultiStep {
            pieces: vec![
                StepPiece { height: 1.0, support: [0.0, 2.0] },
                StepPiece { height: 1.0, support: [1.0, 3.0] },
            ],
        };
        let err = overlapping.validate().unwrap_err().to_string();
        assert!(err.contains("pieces[1].support"), "{err}");
        assert!(PotentialSpec::InverseSquareCapped { decay: 0.0, cap: 1.0 }.validate().is_err());
    }

    #[test]
    fn json_format() {
        let step = PotentialSpec::step(1.0, -0.5, 0.5);
        assert_eq!(step.to_json(), r#"{"type":"step","height":1.0,"support":[-0.5,0.5]}"#);
        assert_eq!(PotentialSpec::from_json(r#"{"type":"zero"}"#).unwrap(), PotentialSpec::Zero);
        let err = PotentialSpec::from_json(r#"{"type":"step","height":1.0}"#).unwrap_err();
        assert!(err.to_string().contains("support"), "{err}");
        let err = PotentialSpec::from_json(r#"{"type":"constant","value":-2}"#).unwrap_err();
        assert!(err.to_string().contains("value"), "{err}");
    }

    #[test]
    fn shape_errors_name_the_field() {
        let field = |text: &str| match PotentialSpec::from_json(text).unwrap_err() {
            Error::InvalidPotential { field, .. } => field,
            other => panic!("unexpected error {other}"),
        };
        assert_eq!(field(r#"{"type":"step","height":"x","support":[0,1]}"#), "height");
        assert_eq!(field(r#"{"type":"step","height":1,"support":[0]}"#), "support");
        assert_eq!(field(r#"{"type":"wedge"}"#), "type");
        assert_eq!(field(r#"[1, 2]"#), "type");
        assert_eq!(
            field(r#"{"type":"multi_step","pieces":[{"height":1,"support":[0,1]},{"height":null,"support":[2,3]}]}"#),
            "pieces[1].height"
        );
        assert_eq!(field(r#"{"type":"inverse_square_capped","decay":1}"#), "cap");
        assert!(matches!(PotentialSpec::from_json("{not json"), Err(Error::Json(_))));
    }

    #[test]
    fn breakpoints_inside_interval_only() {
        let isc = PotentialSpec::InverseSquareCapped { decay: 1.0, cap: 4.0 };
        assert_eq!(isc.breakpoints(-2.0, 2.0), vec![-0.5, 0.5]);
        assert_eq!(isc.breakpoints(-0.25, 0.25), Vec::<f64>::new());
        let step = PotentialSpec::step(1.0, -0.5, 3.0);
        assert_eq!(step.breakpoints(-2.0, 2.0), vec![-0.5]);
    }

    pub(crate) fn arb_potential() -> impl Strategy<Value = PotentialSpec> {
        let step = (0.0..5.0f64, -10.0..10.0f64, 0.01..10.0f64)
            .prop_map(|(h, a, w)| PotentialSpec::step(h, a, a + w));
        let multi = prop::collection::vec((0.0..3.0f64, 0.01..3.0f64, 0.01..3.0f64), 1..5).prop_map(
            |raw| {
                let mut left = -8.0;
                let pieces = raw
                    .into_iter()
                    .map(|(h, gap, w)| {
                        let a = left + gap;
                        left = a + w;
                        StepPiece { height: h, support: [a, a + w] }
                    })
                    .collect();
                PotentialSpec::MultiStep { pieces }
            },
        );
        prop_oneof![
            Just(PotentialSpec::Zero),
            (0.0..5.0f64).prop_map(|value| PotentialSpec::Constant { value }),
            step,
            multi,
            (0.01..5.0f64, 0.1..50.0f64)
                .prop_map(|(decay, cap)| PotentialSpec::InverseSquareCapped { decay, cap }),
        ]
    }

    /// Composite Simpson rule on each smooth piece between the given cut
    /// points. Pieces away from the origin are integrated in `ln |x|`, which
    /// resolves the `1/x²` tail near a small knee.
    fn simpson_oracle(p: &PotentialSpec, cuts: &[f64], panels: usize) -> f64 {
        let simpson = |g: &dyn Fn(f64) -> f64, a: f64, b: f64| {
            let h = (b - a) / panels as f64;
            let mut sum = g(a) + g(b);
            for k in 1..panels {
                let weight = if k % 2 == 1 { 4.0 } else { 2.0 };
                sum += weight * g(a + k as f64 * h);
            }
            sum * h / 3.0
        };
        cuts.windows(2)
            .map(|w| {
                let (a, b) = (w[0], w[1]);
                let f = |x: f64| p.evaluate_on_segment(x, a, b);
                if a > 0.0 {
                    simpson(&|s: f64| f(s.exp()) * s.exp(), a.ln(), b.ln())
                } else if b < 0.0 {
                    simpson(&|s: f64| f(-s.exp()) * s.exp(), (-b).ln(), (-a).ln())
                } else {
                    simpson(&f, a, b)
                }
            })
            .sum()
    }

    /// Jump and kink locations, derived from the parameters independently of
    /// [`PotentialSpec::breakpoints`].
    fn oracle_cuts(p: &PotentialSpec, length: f64) -> Vec<f64> {
        let half = 0.5 * length;
        let mut cuts = vec![-half, half];
        match p {
            PotentialSpec::Step { support, .. } => cuts.extend(support),
            PotentialSpec::MultiStep { pieces } => {
                for piece in pieces {
                    cuts.extend(piece.support)
                }
            }
            PotentialSpec::InverseSquareCapped { decay, cap } => {
                let knee = (decay / cap).sqrt();
                cuts.extend([-knee, knee])
            }
            _ => {}
        }
        cuts.retain(|x| (-half..=half).contains(x));
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        cuts
    }

    #[test]
    fn inverse_square_l1_matches_quadrature_oracle() {
        let p = PotentialSpec::InverseSquareCapped { decay: 1.0, cap: 4.0 };
        let quad = simpson_oracle(&p, &oracle_cuts(&p, 4.0), 20_000);
        assert!((quad - 7.0).abs() < 1e-10, "{quad}");
    }

    proptest! {
        #[test]
        fn l1_matches_simpson(p in arb_potential(), length in 0.1..40.0f64) {
            let norms = p.interval_norms(length).unwrap();
            let quad = simpson_oracle(&p, &oracle_cuts(&p, length), 10_000);
            let scale = norms.l1.abs().max(1e-12);
            prop_assert!((quad - norms.l1).abs() <= 1e-6 * scale, "quad {} exact {}", quad, norms.l1);
        }

        #[test]
        fn norms_are_consistent(p in arb_potential(), length in 0.1..40.0f64, t in -0.5..0.5f64) {
            let norms = p.interval_norms(length).unwrap();
            prop_assert!(norms.l1 >= 0.0 && norms.sup >= 0.0);
            prop_assert!(norms.l1 <= norms.sup * length * (1.0 + 1e-12));
            let x = t * length;
            prop_assert!(p.evaluate(x) >= 0.0);
            prop_assert!(p.evaluate(x) <= norms.sup);
        }

        #[test]
        fn l1_monotone_in_length(p in arb_potential(), a in 0.1..20.0f64, extra in 0.0..20.0f64) {
            let short = p.interval_norms(a).unwrap().l1;
            let long = p.interval_norms(a + extra).unwrap().l1;
            prop_assert!(long >= short * (1.0 - 1e-14));
        }

        #[test]
        fn decay_constant_dominates(p in arb_potential()) {
            if let Some(c) = p.decay_constant() {
                for k in 0..1000 {
                    let x = -20.0 + 40.0 * (k as f64 + 0.5) / 1000.0;
                    prop_assert!(p.evaluate(x) <= c / (x * x) * (1.0 + 1e-12));
                }
            }
        }

        #[test]
        fn json_round_trips_bit_exactly(p in arb_potential()) {
            let back = PotentialSpec::from_json(&p.to_json()).unwrap();
            prop_assert_eq!(back, p);
        }
    }
}
