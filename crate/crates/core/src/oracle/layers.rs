use serde::{Deserialize, Serialize};

use crate::error::{check_length, Error, Result};
use crate::potentials::PotentialSpec;

/// Constant value `value` on `(left, right)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub left: f64,
    pub right: f64,
    pub value: f64,
}

impl Layer {
    pub fn width(&self) -> f64 {
        self.right - self.left
    }
}

/// Piecewise-constant description of a potential on `I`, with adjacent
/// equal layers merged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerDecomposition {
    pub layers: Vec<Layer>,
}

impl LayerDecomposition {
    pub fn length(&self) -> f64 {
        match (self.layers.first(), self.layers.last()) {
            (Some(a), Some(b)) => b.right - a.left,
            _ => 0.0,
        }
    }

    pub fn max_value(&self) -> f64 {
        self.layers.iter().map(|l| l.value).fold(0.0, f64::max)
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        self.layers.iter().skip(1).map(|l| l.left).collect()
    }

    /// Value on the layer containing `(a + b)/2`.
    pub fn value_at(&self, x: f64) -> f64 {
        self.layers
            .iter()
            .find(|l| x < l.right)
            .or(self.layers.last())
            .map_or(0.0, |l| l.value)
    }
}

pub fn decompose(p: &PotentialSpec, length: f64) -> Result<LayerDecomposition> {
    check_length(length)?;
    if !p.is_piecewise_constant() {
        return Err(Error::NotPiecewiseConstant(p.kind()));
    }
    let half = 0.5 * length;
    let mut cuts = vec![-half];
    cuts.extend(p.breakpoints(-half, half));
    cuts.push(half);

    let mut layers: Vec<Layer> = Vec::with_capacity(cuts.len());
    for w in cuts.windows(2) {
        let value = p.evaluate(0.5 * (w[0] + w[1]));
        match layers.last_mut() {
            Some(last) if last.value == value => last.right = w[1],
            _ => layers.push(Layer {
                left: w[0],
                right: w[1],
                value,
            }),
        }
    }
    Ok(LayerDecomposition { layers })
}
