//! C² maps φ: ℝ → ℝ used for outer composition φ∘f.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Samples used when checking φ' > 0 and φ'' ≥ 0 on an interval.
pub const CONVEXITY_SAMPLES: usize = 513;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OuterMap {
    /// t ↦ slope·t + offset
    Affine {
        slope: f64,
        offset: f64,
    },
    Exp,
    /// t ↦ t^exponent; with `positive_domain` the map is only defined for t > 0.
    Power {
        exponent: i32,
        positive_domain: bool,
    },
    /// t ↦ Σ c_k t^k, coefficients in ascending degree.
    Polynomial {
        coefficients: Vec<f64>,
    },
}

impl OuterMap {
    pub fn identity() -> Self {
        OuterMap::Affine { slope: 1.0, offset: 0.0 }
    }

    pub fn affine(slope: f64, offset: f64) -> Self {
        OuterMap::Affine { slope, offset }
    }

    pub fn power(exponent: i32) -> Self {
        OuterMap::Power { exponent, positive_domain: false }
    }

    pub fn polynomial(coefficients: Vec<f64>) -> Self {
        OuterMap::Polynomial { coefficients }
    }

    pub fn name(&self) -> String {
        match self {
            OuterMap::Affine { slope, offset } => format!("affine({slope},{offset})"),
            OuterMap::Exp => "exp".to_string(),
            OuterMap::Power { exponent, .. } => format!("pow({exponent})"),
            OuterMap::Polynomial { coefficients } => format!("poly{coefficients:?}"),
        }
    }

    /// φ(t), φ'(t), φ''(t).
    pub fn derivatives(&self, t: f64) -> Result<(f64, f64, f64)> {
        match self {
            OuterMap::Affine { slope, offset } => Ok((slope * t + offset, *slope, 0.0)),
            OuterMap::Exp => {
                let e = t.exp();
                Ok((e, e, e))
            }
            OuterMap::Power { exponent, positive_domain } => {
                let k = *exponent;
                if (*positive_domain && t <= 0.0) || (k < 0 && t == 0.0) {
                    return Err(Error::Domain { map: self.name(), arg: t });
                }
                let kf = k as f64;
                let d0 = t.powi(k);
                let d1 = if k == 0 { 0.0 } else { kf * t.powi(k - 1) };
                let d2 = if k == 0 || k == 1 { 0.0 } else { kf * (kf - 1.0) * t.powi(k - 2) };
                Ok((d0, d1, d2))
            }
            OuterMap::Polynomial { coefficients } => {
                let (mut d0, mut d1, mut d2) = (0.0, 0.0, 0.0);
                for &c in coefficients.iter().rev() {
                    d2 = d2 * t + 2.0 * d1;
                    d1 = d1 * t + d0;
                    d0 = d0 * t + c;
                }
                Ok((d0, d1, d2))
            }
        }
    }

    pub fn value(&self, t: f64) -> Result<f64> {
        self.derivatives(t).map(|d| d.0)
    }

    /// Whether φ' > 0 and φ'' ≥ 0 hold on [lo, hi].
    ///
    /// Closed form for the named maps; polynomials are sampled at
    /// [`CONVEXITY_SAMPLES`] evenly spaced points.
    pub fn is_convex_increasing_on(&self, lo: f64, hi: f64) -> bool {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        match self {
            OuterMap::Affine { slope, .. } => *slope > 0.0,
            OuterMap::Exp => true,
            OuterMap::Power { exponent, positive_domain } => {
                let k = *exponent;
                if *positive_domain && lo <= 0.0 {
                    return false;
                }
                match k {
                    1 => true,
                    // φ'(0) = 0 and φ'' < 0 for negative t when k is odd
                    k if k >= 2 => lo > 0.0,
                    _ => false,
                }
            }
            OuterMap::Polynomial { .. } => (0..CONVEXITY_SAMPLES).all(|i| {
                let t = lo + (hi - lo) * i as f64 / (CONVEXITY_SAMPLES - 1) as f64;
                match self.derivatives(t) {
                    Ok((_, d1, d2)) => d1 > 0.0 && d2 >= 0.0,
                    Err(_) => false,
                }
            }),
        }
    }
}
