//! Convexity of level curves: the sign of the bordered determinant D(f)
//! along the curve, and an independent polygon test.

use serde::{Deserialize, Serialize};

use super::LevelCurve;
use crate::critical::default_eps_crit;
use crate::error::{Error, Result};
use crate::field::{Jet2, Point, ScalarField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DSign {
    AllNegative,
    AllPositive,
    Mixed,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeometricVerdict {
    Convex,
    Nonconvex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentConvexity {
    pub d_sign: DSign,
    pub geometric: Option<GeometricVerdict>,
    pub samples: usize,
    pub skipped: usize,
    pub d_min: f64,
    pub d_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub level: f64,
    pub components: Vec<ComponentConvexity>,
}

impl ConvexityReport {
    /// Every component has D < 0 throughout.
    pub fn all_negative(&self) -> bool {
        !self.components.is_empty() && self.components.iter().all(|c| c.d_sign == DSign::AllNegative)
    }
}

/// D(f) = 2 f_x f_y f_xy − f_x² f_yy − f_y² f_xx from a planar jet.
pub fn convexity_det_value(j: &Jet2) -> f64 {
    let (fx, fy) = (j.gradient[0], j.gradient[1]);
    let (fxx, fxy, fyy) = (*j.hessian.get(0, 0), *j.hessian.get(0, 1), *j.hessian.get(1, 1));
    2.0 * fx * fy * fxy - fx * fx * fyy - fy * fy * fxx
}

/// Values below this size are treated as zero: D is cubic in the jet, so the
/// scale is ‖∇f‖²·‖H‖.
fn d_tolerance(j: &Jet2) -> f64 {
    let g2 = j.gradient[0] * j.gradient[0] + j.gradient[1] * j.gradient[1];
    1e-12 * g2 * (1.0 + j.hessian.norm_inf())
}

enum Sample {
    Skipped,
    Value { d: f64, tol: f64 },
}

fn sample_d(f: &ScalarField, x: f64, y: f64) -> Result<Sample> {
    let j = f.jet(&[x, y])?;
    if j.gradient_norm() <= default_eps_crit(j.value) {
        return Ok(Sample::Skipped);
    }
    Ok(Sample::Value { d: convexity_det_value(&j), tol: d_tolerance(&j) })
}

/// Newton projection onto f = c along ∇f.
fn project(f: &ScalarField, c: f64, mut x: f64, mut y: f64) -> (f64, f64) {
    for _ in 0..4 {
        let Ok(j) = f.jet(&[x, y]) else { break };
        let g2 = j.gradient[0] * j.gradient[0] + j.gradient[1] * j.gradient[1];
        if !(g2 > 0.0) {
            break;
        }
        let r = j.value - c;
        x -= r * j.gradient[0] / g2;
        y -= r * j.gradient[1] / g2;
    }
    (x, y)
}

/// Golden-section search of `sign`·D along the polyline through the
/// neighbours of vertex `k`, each trial point projected onto the level.
fn refine_extremum(
    f: &ScalarField,
    c: f64,
    pts: &[Point],
    k: usize,
    closed: bool,
    sign: f64,
) -> Result<Option<(f64, f64)>> {
    let n = pts.len();
    let (prev, next) = if closed {
        ((k + n - 1) % n, (k + 1) % n)
    } else if k == 0 || k + 1 == n {
        return Ok(None);
    } else {
        (k - 1, k + 1)
    };
    let at = |u: f64| -> (f64, f64) {
        let (a, b, t) = if u < 0.0 { (&pts[k], &pts[prev], -u) } else { (&pts[k], &pts[next], u) };
        project(f, c, a.x() + t * (b.x() - a.x()), a.y() + t * (b.y() - a.y()))
    };
    let eval = |u: f64| -> Result<(f64, f64)> {
        let (x, y) = at(u);
        Ok(match sample_d(f, x, y)? {
            Sample::Value { d, tol } => (sign * d, tol),
            Sample::Skipped => (f64::NEG_INFINITY, 0.0),
        })
    };
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (-1.0, 1.0);
    let mut u1 = hi - phi * (hi - lo);
    let mut u2 = lo + phi * (hi - lo);
    let (mut e1, mut e2) = (eval(u1)?, eval(u2)?);
    for _ in 0..40 {
        if e1.0 < e2.0 {
            lo = u1;
            (u1, e1) = (u2, e2);
            u2 = lo + phi * (hi - lo);
            e2 = eval(u2)?;
        } else {
            hi = u2;
            (u2, e2) = (u1, e1);
            u1 = hi - phi * (hi - lo);
            e1 = eval(u1)?;
        }
    }
    let best = if e1.0 >= e2.0 { e1 } else { e2 };
    Ok(best.0.is_finite().then_some((sign * best.0, best.1)))
}

/// Sign of D(f) along each component, sampled at up to
/// `samples_per_component` vertices (0 = all) and refined locally around
/// the sampled extremes.
pub fn convexity_via_d(f: &ScalarField, curve: &LevelCurve, samples_per_component: usize) -> Result<ConvexityReport> {
    let mut components = Vec::with_capacity(curve.components.len());
    for comp in &curve.components {
        let n = comp.points.len();
        let idx: Vec<usize> = if samples_per_component == 0 || samples_per_component >= n {
            (0..n).collect()
        } else {
            (0..samples_per_component).map(|k| k * n / samples_per_component).collect()
        };
        let (mut skipped, mut neg, mut pos) = (0, 0, 0);
        let (mut d_min, mut d_max) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut k_min, mut k_max) = (None, None);
        for &k in &idx {
            let p = &comp.points[k];
            match sample_d(f, p.x(), p.y())? {
                Sample::Skipped => skipped += 1,
                Sample::Value { d, tol } => {
                    if d < -tol {
                        neg += 1;
                    } else if d > tol {
                        pos += 1;
                    }
                    if d < d_min {
                        (d_min, k_min) = (d, Some(k));
                    }
                    if d > d_max {
                        (d_max, k_max) = (d, Some(k));
                    }
                }
            }
        }
        if let Some(k) = k_max {
            if let Some((v, tol)) = refine_extremum(f, curve.level, &comp.points, k, comp.closed, 1.0)? {
                if v > d_max {
                    d_max = v;
                    pos += (v > tol && pos == 0) as usize;
                }
            }
        }
        if let Some(k) = k_min {
            if let Some((v, tol)) = refine_extremum(f, curve.level, &comp.points, k, comp.closed, -1.0)? {
                if v < d_min {
                    d_min = v;
                    neg += (v < -tol && neg == 0) as usize;
                }
            }
        }
        let d_sign = if idx.is_empty() || skipped * 10 > idx.len() {
            DSign::Indeterminate
        } else if neg > 0 && pos > 0 {
            DSign::Mixed
        } else if neg > 0 {
            DSign::AllNegative
        } else if pos > 0 {
            DSign::AllPositive
        } else {
            DSign::Indeterminate
        };
        let geometric = if comp.closed && n >= 3 { Some(convexity_geometric(&comp.points, true)?) } else { None };
        components.push(ComponentConvexity { d_sign, geometric, samples: idx.len(), skipped, d_min, d_max });
    }
    Ok(ConvexityReport { level: curve.level, components })
}

/// Polygon convexity: consecutive turns share one sign (turns with
/// |cross| ≤ 1e−12·scale² count as straight) and the total turning is ±2π.
pub fn convexity_geometric(points: &[Point], closed: bool) -> Result<GeometricVerdict> {
    if !closed {
        return Err(Error::OpenComponent);
    }
    let n = points.len();
    if n < 3 {
        return Err(Error::Precondition(format!("a closed polyline needs ≥ 3 vertices (got {n})")));
    }
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in points {
        xmin = xmin.min(p.x());
        xmax = xmax.max(p.x());
        ymin = ymin.min(p.y());
        ymax = ymax.max(p.y());
    }
    let scale = (xmax - xmin).hypot(ymax - ymin);
    let eps = 1e-12 * scale * scale;
    let (mut left, mut right) = (false, false);
    let mut turning = 0.0;
    for k in 0..n {
        let (a, b, c) = (&points[(k + n - 1) % n], &points[k], &points[(k + 1) % n]);
        let (e1x, e1y) = (b.x() - a.x(), b.y() - a.y());
        let (e2x, e2y) = (c.x() - b.x(), c.y() - b.y());
        let cross = e1x * e2y - e1y * e2x;
        let dot = e1x * e2x + e1y * e2y;
        if cross > eps {
            left = true;
        } else if cross < -eps {
            right = true;
        }
        turning += cross.atan2(dot);
    }
    let full_turn = (turning.abs() - std::f64::consts::TAU).abs() <= 1e-6;
    Ok(if left != right && full_turn { GeometricVerdict::Convex } else { GeometricVerdict::Nonconvex })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Box2;
    use crate::levelset::extract_level;
    use crate::levelset::tests::f1g1;

    fn poly(pts: &[(f64, f64)]) -> Vec<Point> {
        pts.iter().map(|&(x, y)| Point::xy(x, y)).collect()
    }

    #[test]
    fn square_and_l_shape() {
        let sq = poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        assert_eq!(convexity_geometric(&sq, true).unwrap(), GeometricVerdict::Convex);
        let l = poly(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)]);
        assert_eq!(convexity_geometric(&l, true).unwrap(), GeometricVerdict::Nonconvex);
        assert_eq!(convexity_geometric(&sq, false).unwrap_err(), Error::OpenComponent);
    }

    #[test]
    fn collinear_vertices_are_fine() {
        let sq = poly(&[(0.0, 0.0), (0.5, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        assert_eq!(convexity_geometric(&sq, true).unwrap(), GeometricVerdict::Convex);
    }

    #[test]
    fn twice_wound_polygon_is_not_convex() {
        // a pentagram turns the same way at every vertex but winds twice
        let star: Vec<Point> = (0..5)
            .map(|k| {
                let t = std::f64::consts::TAU * 2.0 * k as f64 / 5.0;
                Point::xy(t.cos(), t.sin())
            })
            .collect();
        assert_eq!(convexity_geometric(&star, true).unwrap(), GeometricVerdict::Nonconvex);
    }

    #[test]
    fn paraboloid_levels_negative() {
        let f = ScalarField::polynomial("x^2 + y^2".parse().unwrap());
        let curve = extract_level(&f, 2.0, &Box2::square(2.0), 100).unwrap();
        let rep = convexity_via_d(&f, &curve, 0).unwrap();
        assert!(rep.all_negative());
        assert_eq!(rep.components[0].geometric, Some(GeometricVerdict::Convex));
    }

    #[test]
    fn product_levels() {
        let f = f1g1();
        let b = Box2::for_family(1.0);
        let above = convexity_via_d(&f, &extract_level(&f, 20.0, &b, 600).unwrap(), 0).unwrap();
        assert_eq!(above.components[0].d_sign, DSign::AllNegative);
        assert_eq!(above.components[0].geometric, Some(GeometricVerdict::Convex));
        let below = convexity_via_d(&f, &extract_level(&f, 4.0, &b, 600).unwrap(), 0).unwrap();
        assert_eq!(below.components[0].d_sign, DSign::Mixed);
        assert_eq!(below.components[0].geometric, Some(GeometricVerdict::Nonconvex));
    }

    #[test]
    fn near_threshold_levels() {
        let f = f1g1();
        let b = Box2::for_family(1.0);
        for (c, want) in [(15.97, DSign::Mixed), (16.03, DSign::AllNegative)] {
            let rep = convexity_via_d(&f, &extract_level(&f, c, &b, 600).unwrap(), 0).unwrap();
            assert_eq!(rep.components[0].d_sign, want, "c = {c}: {:?}", rep.components[0]);
        }
    }
}
