//! Bisection for the first convex level.

use serde::{Deserialize, Serialize};

use super::{convexity_via_d, extract_level, regularity, DSign};
use crate::critical::{find_critical_points, CriticalSet, DEFAULT_SEEDS_PER_AXIS};
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::Box2;

/// Evenly spaced probes across [lo, hi] used to check monotonicity.
const MONOTONICITY_PROBES: usize = 8;
const REGULARITY_DELTA: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelProbe {
    pub level: f64,
    pub components: usize,
    pub regular: bool,
    pub d_sign: Option<DSign>,
    pub convex: bool,
}

/// regular ∧ one closed component ∧ D < 0 along it.
pub struct LevelOracle {
    field: ScalarField,
    bounds: Box2,
    cells: usize,
    critical: CriticalSet,
}

impl LevelOracle {
    pub fn new(f: &ScalarField, bounds: &Box2, cells: usize) -> Result<Self> {
        let critical = find_critical_points(f, bounds, DEFAULT_SEEDS_PER_AXIS, None)?;
        Ok(Self::with_critical_set(f, bounds, cells, critical))
    }

    pub fn with_critical_set(f: &ScalarField, bounds: &Box2, cells: usize, critical: CriticalSet) -> Self {
        LevelOracle { field: f.clone(), bounds: *bounds, cells, critical }
    }

    pub fn critical_set(&self) -> &CriticalSet {
        &self.critical
    }

    pub fn probe(&self, c: f64) -> Result<LevelProbe> {
        let curve = extract_level(&self.field, c, &self.bounds, self.cells)?;
        let reg = regularity(&self.field, &curve, &self.critical, REGULARITY_DELTA)?;
        let single = curve.components.len() == 1 && curve.components[0].closed;
        let d_sign = if single { Some(convexity_via_d(&self.field, &curve, 0)?.components[0].d_sign) } else { None };
        Ok(LevelProbe {
            level: c,
            components: curve.components.len(),
            regular: reg.regular,
            d_sign,
            convex: reg.regular && single && d_sign == Some(DSign::AllNegative),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FirstConvexLevelResult {
    pub c_star: f64,
    pub bracket: (f64, f64),
    pub probes: Vec<LevelProbe>,
    pub post_check_levels: Vec<LevelProbe>,
}

/// Bisects for the smallest convex level in [lo, hi] to width `tol`.
///
/// The oracle is assumed monotone in c; the assumption is checked on evenly
/// spaced probes beforehand and on three levels above the bracket afterwards.
pub fn first_convex_level(
    f: &ScalarField,
    lo: f64,
    hi: f64,
    tol: f64,
    bounds: &Box2,
    cells: usize,
) -> Result<FirstConvexLevelResult> {
    let oracle = LevelOracle::new(f, bounds, cells)?;
    search_with(&oracle, lo, hi, tol)
}

pub fn search_with(oracle: &LevelOracle, lo: f64, hi: f64, tol: f64) -> Result<FirstConvexLevelResult> {
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::Precondition(format!("need lo < hi and tol > 0 (got {lo}, {hi}, {tol})")));
    }
    let probes: Vec<LevelProbe> = (0..=MONOTONICITY_PROBES)
        .map(|k| oracle.probe(lo + (hi - lo) * k as f64 / MONOTONICITY_PROBES as f64))
        .collect::<Result<_>>()?;
    if probes[0].convex {
        return Err(Error::BracketInvalid(format!("level {lo} is already convex")));
    }
    if !probes[MONOTONICITY_PROBES].convex {
        return Err(Error::BracketInvalid(format!("level {hi} is not convex")));
    }
    let first = probes.iter().position(|p| p.convex).expect("hi is convex");
    if let Some(p) = probes[first..].iter().find(|p| !p.convex) {
        return Err(Error::BracketInvalid(format!(
            "verdict not monotone: level {} is not convex above convex level {}",
            p.level, probes[first].level
        )));
    }
    let (mut a, mut b) = (probes[first - 1].level, probes[first].level);
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if oracle.probe(mid)?.convex {
            b = mid;
        } else {
            a = mid;
        }
    }
    let post_check_levels: Vec<LevelProbe> =
        (1..=3).map(|k| oracle.probe(b + (hi - b) * k as f64 / 4.0)).collect::<Result<_>>()?;
    if let Some(p) = post_check_levels.iter().find(|p| !p.convex) {
        return Err(Error::BracketInvalid(format!("post-check level {} is not convex", p.level)));
    }
    Ok(FirstConvexLevelResult { c_star: 0.5 * (a + b), bracket: (a, b), probes, post_check_levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levelset::tests::f1g1;
    use crate::poly::{integer, FamilySpec};

    #[test]
    fn product_threshold_is_sixteen() {
        let r = first_convex_level(&f1g1(), 0.5, 100.0, 1e-2, &Box2::for_family(1.0), 600).unwrap();
        assert!((r.c_star - 16.0).abs() <= 0.05, "{r:?}");
        assert!(r.bracket.1 - r.bracket.0 <= 1e-2);
    }

    #[test]
    fn cassini_threshold_is_three() {
        let f = ScalarField::polynomial(FamilySpec::cassini(integer(1)).build().unwrap());
        let r = first_convex_level(&f, 0.5, 100.0, 1e-2, &Box2::for_family(1.0), 600).unwrap();
        assert!((r.c_star - 3.0).abs() <= 0.05, "{r:?}");
    }

    #[test]
    fn convex_function_has_invalid_bracket() {
        let f = ScalarField::polynomial("x^2 + y^2".parse().unwrap());
        let e = first_convex_level(&f, 0.5, 3.0, 1e-2, &Box2::square(2.0), 200).unwrap_err();
        assert!(matches!(e, Error::BracketInvalid(_)));
    }
}
