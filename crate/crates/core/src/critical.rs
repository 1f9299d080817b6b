//! Critical points, critical values and the rank of d(f⊕g).

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{direct_sum_jacobian, Jet2, Point, ScalarField, SymmetricMatrix};
use crate::grid::Box2;

pub const DEFAULT_MAX_ITER: usize = 100;
pub const DEFAULT_SEEDS_PER_AXIS: usize = 41;

/// 1e−10·(1 + |f(p)|)
pub fn default_eps_crit(value: f64) -> f64 {
    1e-10 * (1.0 + value.abs())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NewtonOutcome {
    pub point: Point,
    pub value: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Steps that fell back to the direction −H∇f because H was singular
    /// or the Newton step failed to decrease ‖∇f‖².
    pub fallback_steps: usize,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// Solves H d = rhs by Gaussian elimination with partial pivoting.
fn solve(h: &SymmetricMatrix, rhs: &[f64]) -> Option<Vec<f64>> {
    let n = rhs.len();
    let scale = h.norm_inf();
    if scale == 0.0 || !scale.is_finite() {
        return None;
    }
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row: Vec<f64> = (0..n).map(|j| *h.get(i, j)).collect();
            row.push(rhs[i]);
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() <= 1e-14 * scale {
            return None;
        }
        a.swap(col, piv);
        for row in (col + 1)..n {
            let k = a[row][col] / a[col][col];
            for c in col..=n {
                a[row][c] -= k * a[col][c];
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = ((i + 1)..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = (a[i][n] - s) / a[i][i];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

fn hess_times(h: &SymmetricMatrix, v: &[f64]) -> Vec<f64> {
    (0..v.len()).map(|i| (0..v.len()).map(|j| h.get(i, j) * v[j]).sum()).collect()
}

fn merit(j: &Jet2) -> f64 {
    j.gradient.iter().map(|g| g * g).sum()
}

/// Backtracking along `dir` from `p` until ‖∇f‖² drops below `m0`.
fn line_search(f: &ScalarField, p: &[f64], dir: &[f64], t0: f64, m0: f64) -> Option<(Vec<f64>, Jet2)> {
    let mut t = t0;
    for _ in 0..40 {
        let q: Vec<f64> = p.iter().zip(dir).map(|(a, d)| a + t * d).collect();
        if let Ok(j) = f.jet(&q) {
            if j.is_finite() && merit(&j) < m0 {
                return Some((q, j));
            }
        }
        t *= 0.5;
    }
    None
}

/// Damped Newton iteration for ∇f = 0.
///
/// Convergence needs ‖∇f‖ ≤ ε_crit together with a Newton step shorter than
/// 1e−10·(1+‖p‖); iteration keeps polishing past ε_crit, which matters at
/// degenerate roots where Newton converges only linearly.
pub fn newton_refine(f: &ScalarField, p0: &[f64], max_iter: usize, eps_crit: Option<f64>) -> Result<NewtonOutcome> {
    let mut p = p0.to_vec();
    let mut jet = f.jet(&p)?;
    let mut fallback_steps = 0;
    let mut iterations = 0;
    let converged = loop {
        let gn = jet.gradient_norm();
        let eps = eps_crit.unwrap_or_else(|| default_eps_crit(jet.value));
        if gn == 0.0 {
            break true;
        }
        let neg_g: Vec<f64> = jet.gradient.iter().map(|g| -g).collect();
        let step = solve(&jet.hessian, &neg_g);
        let step_tol = 1e-10 * (1.0 + norm(&p));
        if gn <= eps && step.as_ref().is_some_and(|d| norm(d) <= step_tol) {
            break true;
        }
        if iterations >= max_iter || !jet.is_finite() {
            break false;
        }
        iterations += 1;
        let m0 = merit(&jet);
        let accepted = step.as_ref().and_then(|d| line_search(f, &p, d, 1.0, m0));
        let accepted = match accepted {
            Some(a) => Some(a),
            None => {
                fallback_steps += 1;
                let hg = hess_times(&jet.hessian, &jet.gradient);
                let hhg = hess_times(&jet.hessian, &hg);
                let (dir, t0) = if norm(&hg) > 0.0 {
                    let denom: f64 = hhg.iter().map(|a| a * a).sum();
                    let t0 = if denom > 0.0 { hg.iter().map(|a| a * a).sum::<f64>() / denom } else { 1.0 };
                    (hg.iter().map(|a| -a).collect::<Vec<_>>(), t0)
                } else {
                    (neg_g.clone(), 1.0)
                };
                line_search(f, &p, &dir, t0, m0)
            }
        };
        match accepted {
            Some((q, j)) => {
                p = q;
                jet = j;
            }
            // stalled: accept only a nondegenerate root at round-off level
            None => break gn <= eps && step.as_ref().is_some_and(|d| norm(d) <= 1e3 * step_tol),
        }
    };
    let gradient_norm = jet.gradient_norm();
    Ok(NewtonOutcome { point: Point::new(p)?, value: jet.value, gradient_norm, iterations, converged, fallback_steps })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MorseIndex {
    Index(usize),
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub location: Point,
    pub value: f64,
    pub gradient_norm: f64,
    pub hessian_eigs: Vec<f64>,
    pub morse_index: MorseIndex,
}

impl CriticalPoint {
    fn from_jet(location: Point, jet: &Jet2) -> Self {
        let eigs = jet.hessian.eigenvalues();
        let eps = default_eps_crit(jet.value);
        let morse_index = if eigs.iter().any(|e| e.abs() <= eps) {
            MorseIndex::Degenerate
        } else {
            MorseIndex::Index(eigs.iter().filter(|e| **e < 0.0).count())
        };
        CriticalPoint {
            location,
            value: jet.value,
            gradient_norm: jet.gradient_norm(),
            hessian_eigs: eigs,
            morse_index,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverDiagnostics {
    pub seeds: usize,
    pub converged: usize,
    pub not_converged: usize,
    pub outside_box: usize,
    pub merged: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalSet {
    pub points: Vec<CriticalPoint>,
    pub search_box: Box2,
    pub seeds_used: usize,
    pub dedupe_radius: f64,
    pub values: Vec<f64>,
    pub diagnostics: SolverDiagnostics,
}

fn cmp_xy(a: &Point, b: &Point) -> Ordering {
    a.x().total_cmp(&b.x()).then(a.y().total_cmp(&b.y()))
}

/// Multistart Newton from a `seeds_per_axis`² grid over `bounds`.
pub fn find_critical_points(
    f: &ScalarField,
    bounds: &Box2,
    seeds_per_axis: usize,
    eps_crit: Option<f64>,
) -> Result<CriticalSet> {
    if f.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: f.dim() });
    }
    if seeds_per_axis < 2 {
        return Err(Error::Precondition("need at least 2 seeds per axis".into()));
    }
    let n = seeds_per_axis - 1;
    let seeds: Vec<[f64; 2]> = (0..=n)
        .flat_map(|j| (0..=n).map(move |i| (i, j)))
        .map(|(i, j)| [bounds.x_at(i, n), bounds.y_at(j, n)])
        .collect();
    let outcomes: Vec<NewtonOutcome> =
        seeds.par_iter().map(|s| newton_refine(f, s, DEFAULT_MAX_ITER, eps_crit)).collect::<Result<_>>()?;

    let mut diagnostics = SolverDiagnostics { seeds: seeds.len(), ..Default::default() };
    let slack = 1e-9 * bounds.diagonal();
    let grown = Box2 {
        xmin: bounds.xmin - slack,
        xmax: bounds.xmax + slack,
        ymin: bounds.ymin - slack,
        ymax: bounds.ymax + slack,
    };
    let mut found: Vec<NewtonOutcome> = Vec::new();
    for o in outcomes {
        if !o.converged {
            diagnostics.not_converged += 1;
        } else if !grown.contains(o.point.x(), o.point.y()) {
            diagnostics.outside_box += 1;
        } else {
            diagnostics.converged += 1;
            found.push(o);
        }
    }
    found.sort_by(|a, b| cmp_xy(&a.point, &b.point));

    let radius = 1e-6 * bounds.diagonal();
    let mut kept: Vec<NewtonOutcome> = Vec::new();
    for o in found {
        match kept.iter_mut().find(|k| k.point.distance(&o.point) <= radius) {
            Some(k) => {
                diagnostics.merged += 1;
                if o.gradient_norm < k.gradient_norm {
                    *k = o;
                }
            }
            None => kept.push(o),
        }
    }
    kept.sort_by(|a, b| cmp_xy(&a.point, &b.point));

    let points = kept
        .into_iter()
        .map(|o| {
            let jet = f.jet(&o.point)?;
            Ok(CriticalPoint::from_jet(o.point, &jet))
        })
        .collect::<Result<Vec<_>>>()?;
    let values = merge_values(points.iter().map(|p| p.value));
    Ok(CriticalSet { points, search_box: *bounds, seeds_used: seeds.len(), dedupe_radius: radius, values, diagnostics })
}

fn merge_values(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::new();
    for x in v {
        match out.last() {
            Some(&last) if (x - last).abs() <= 1e-9 * (1.0 + last.abs()) => {}
            _ => out.push(x),
        }
    }
    out
}

/// B(f): sorted distinct critical values, merged within 1e−9·(1+|v|).
pub fn critical_values(cs: &CriticalSet) -> Vec<f64> {
    merge_values(cs.points.iter().map(|p| p.value))
}

/// μ_max(f) = max f over the critical set.
pub fn mu_max(cs: &CriticalSet) -> Result<f64> {
    cs.points.iter().map(|p| p.value).max_by(f64::total_cmp).ok_or(Error::EmptyCriticalSet)
}

/// Numerical rank of d(f⊕g) at p; `tau` defaults to 1e−9·(1 + max row norm).
pub fn direct_sum_rank(f: &ScalarField, g: &ScalarField, p: &[f64], tau: Option<f64>) -> Result<usize> {
    let jac = direct_sum_jacobian(f, g, p)?;
    let tau = tau.unwrap_or_else(|| jac.default_rank_tolerance());
    Ok(jac.rank(tau))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::OuterMap;
    use crate::poly::{integer, FamilySpec};

    fn f1() -> ScalarField {
        ScalarField::polynomial(FamilySpec::cassini(integer(1)).build().unwrap())
    }

    fn f1g1() -> ScalarField {
        let spec = FamilySpec::product(vec![FamilySpec::cassini(integer(1)), FamilySpec::anti_cassini(integer(1))]);
        ScalarField::polynomial(spec.build().unwrap())
    }

    #[test]
    fn newton_to_cassini_focus() {
        let o = newton_refine(&f1(), &[0.9, 0.05], 100, None).unwrap();
        assert!(o.converged);
        assert!((o.point.x() - 1.0).abs() < 1e-10 && o.point.y().abs() < 1e-10);
    }

    #[test]
    fn newton_fixed_point() {
        let o = newton_refine(&f1(), &[1.0, 0.0], 100, None).unwrap();
        assert!(o.converged);
        assert_eq!(o.iterations, 0);
    }

    #[test]
    fn newton_product_axis_point() {
        let o = newton_refine(&f1g1(), &[0.1, 1.1], 100, None).unwrap();
        assert!(o.converged);
        assert!(o.point.x().abs() < 1e-10);
        assert!((o.point.y() - 2f64.powf(0.25)).abs() < 1e-10);
    }

    #[test]
    fn cassini_critical_set() {
        let cs = find_critical_points(&f1(), &Box2::square(3.0), 41, None).unwrap();
        let locs: Vec<(f64, f64)> = cs.points.iter().map(|p| (p.location.x(), p.location.y())).collect();
        assert_eq!(locs.len(), 3, "{locs:?}");
        for (got, want) in locs.iter().zip([(-1.0, 0.0), (0.0, 0.0), (1.0, 0.0)]) {
            assert!((got.0 - want.0).abs() < 1e-8 && (got.1 - want.1).abs() < 1e-8);
        }
        assert_eq!(cs.points[0].morse_index, MorseIndex::Index(0));
        assert_eq!(cs.points[1].morse_index, MorseIndex::Index(1));
        assert_eq!(cs.points[2].morse_index, MorseIndex::Index(0));
        let b = critical_values(&cs);
        assert_eq!(b.len(), 2);
        assert!((b[0] + 1.0).abs() < 1e-12 && b[1].abs() < 1e-12);
        assert!(mu_max(&cs).unwrap().abs() < 1e-12);
    }

    #[test]
    fn product_critical_set() {
        let cs = find_critical_points(&f1g1(), &Box2::square(3.0), 41, None).unwrap();
        assert_eq!(cs.points.len(), 5, "{:?}", cs.points);
        let q = 2f64.powf(0.25);
        let want = [(-q, 0.0), (0.0, -q), (0.0, 0.0), (0.0, q), (q, 0.0)];
        for (p, w) in cs.points.iter().zip(want) {
            assert!((p.location.x() - w.0).abs() < 1e-8 && (p.location.y() - w.1).abs() < 1e-8, "{p:?}");
        }
        assert_eq!(cs.points[2].morse_index, MorseIndex::Degenerate);
        assert_eq!(cs.values.len(), 2);
        assert!((cs.values[0] + 4.0).abs() < 1e-9 && cs.values[1].abs() < 1e-9);
    }

    #[test]
    fn shifted_paraboloid() {
        let f = ScalarField::polynomial("x^2 - 2*x + 1 + y^2".parse().unwrap());
        let cs = find_critical_points(&f, &Box2::square(3.0), 11, None).unwrap();
        assert_eq!(cs.points.len(), 1);
        assert!((cs.points[0].location.x() - 1.0).abs() < 1e-12);
        assert_eq!(cs.points[0].morse_index, MorseIndex::Index(0));
    }

    #[test]
    fn empty_set_has_no_mu_max() {
        let f = ScalarField::linear(vec![1.0, 2.0], 0.0);
        let cs = find_critical_points(&f, &Box2::square(1.0), 5, None).unwrap();
        assert!(cs.points.is_empty());
        assert_eq!(mu_max(&cs).unwrap_err(), Error::EmptyCriticalSet);
    }

    #[test]
    fn ranks() {
        let x = ScalarField::coordinate(2, 0);
        let y = ScalarField::coordinate(2, 1);
        assert_eq!(direct_sum_rank(&x, &y, &[0.3, 0.4], None).unwrap(), 2);
        let g = ScalarField::compose(OuterMap::Exp, &f1());
        assert!(direct_sum_rank(&f1(), &g, &[0.3, 0.4], None).unwrap() <= 1);
        assert_eq!(direct_sum_rank(&f1(), &g, &[1.0, 0.0], None).unwrap(), 0);
    }
}
