//! Level curves f⁻¹(c): extraction, regularity, convexity and the search
//! for the first convex level.

mod convexity;
mod export;
mod marching;
mod param;
mod search;

use serde::{Deserialize, Serialize};

use crate::critical::CriticalSet;
use crate::error::Result;
use crate::field::{Point, ScalarField};
use crate::grid::Box2;

pub use convexity::{
    convexity_det_value, convexity_geometric, convexity_via_d, ComponentConvexity, ConvexityReport, DSign,
    GeometricVerdict,
};
pub use export::{level_report, to_csv, to_svg, ComponentReport, LevelReport};
pub use marching::extract_level;
pub use param::parametrize_product_level;
pub use search::{first_convex_level, search_with, FirstConvexLevelResult, LevelOracle, LevelProbe};

/// Default grid: 600 cells per axis.
pub const DEFAULT_CELLS: usize = 600;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub points: Vec<Point>,
    pub closed: bool,
}

impl Component {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelCurve {
    pub level: f64,
    pub components: Vec<Component>,
    pub bounds: Box2,
    pub nx: usize,
    pub ny: usize,
}

impl LevelCurve {
    pub fn spacing(&self) -> (f64, f64) {
        (self.bounds.width() / self.nx as f64, self.bounds.height() / self.ny as f64)
    }

    pub fn cell_diagonal(&self) -> f64 {
        let (hx, hy) = self.spacing();
        hx.hypot(hy)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Point> {
        self.components.iter().flat_map(|c| c.points.iter())
    }
}

pub fn component_count(curve: &LevelCurve) -> usize {
    curve.components.len()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub regular: bool,
    /// min ‖∇f‖ over the vertices (∞ for an empty curve).
    pub min_gradient_norm: f64,
    /// min distance from a vertex to a critical point (∞ if none).
    pub min_critical_distance: f64,
    /// Critical points whose value equals the level, which lie on f⁻¹(c) exactly.
    pub critical_points_on_level: usize,
}

/// Regularity evidence: min ‖∇f‖ over vertices > δ, every vertex farther
/// than δ from the critical set, and no critical value equal to c.
pub fn regularity(f: &ScalarField, curve: &LevelCurve, cs: &CriticalSet, delta: f64) -> Result<RegularityReport> {
    let mut min_grad = f64::INFINITY;
    let mut min_dist = f64::INFINITY;
    for p in curve.vertices() {
        min_grad = min_grad.min(f.jet(p)?.gradient_norm());
        for q in &cs.points {
            min_dist = min_dist.min(p.distance(&q.location));
        }
    }
    let c = curve.level;
    let on_level = cs
        .points
        .iter()
        .filter(|q| {
            curve.bounds.contains(q.location.x(), q.location.y()) && (q.value - c).abs() <= 1e-9 * (1.0 + c.abs())
        })
        .count();
    Ok(RegularityReport {
        regular: min_grad > delta && min_dist > delta && on_level == 0,
        min_gradient_norm: min_grad,
        min_critical_distance: min_dist,
        critical_points_on_level: on_level,
    })
}

pub fn is_regular_level(f: &ScalarField, curve: &LevelCurve, cs: &CriticalSet, delta: f64) -> Result<bool> {
    Ok(regularity(f, curve, cs, delta)?.regular)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::critical::find_critical_points;
    use crate::poly::{integer, FamilySpec};

    pub(crate) fn f1g1() -> ScalarField {
        let spec = FamilySpec::product(vec![FamilySpec::cassini(integer(1)), FamilySpec::anti_cassini(integer(1))]);
        ScalarField::polynomial(spec.build().unwrap())
    }

    #[test]
    fn regularity_of_product_levels() {
        let f = f1g1();
        let b = Box2::for_family(1.0);
        let cs = find_critical_points(&f, &b, 41, None).unwrap();
        let zero = extract_level(&f, 0.0, &b, 300).unwrap();
        assert!(!is_regular_level(&f, &zero, &cs, 1e-6).unwrap());
        let twenty = extract_level(&f, 20.0, &b, 300).unwrap();
        assert!(is_regular_level(&f, &twenty, &cs, 1e-6).unwrap());
    }

    #[test]
    fn empty_curve_is_regular() {
        let f = f1g1();
        let b = Box2::square(0.5);
        let cs = find_critical_points(&f, &b, 11, None).unwrap();
        let far = extract_level(&f, 1e9, &b, 50).unwrap();
        assert_eq!(component_count(&far), 0);
        assert!(is_regular_level(&f, &far, &CriticalSet { points: vec![], ..cs }, 1e-6).unwrap());
    }
}
