//! Where is the Hessian positive definite?
//!
//! Pointwise membership tests, a constructive certificate that the
//! complement of Hess⁺ is bounded for the radial polynomial families,
//! grid scans of the complement and an estimate of h_max = max f over it.

use num::{BigRational, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{direct_sum_jacobian, rank2_sym_eigs, Point, ScalarField, SymmetricMatrix};
use crate::grid::Box2;
use crate::poly::{det_hessian, integer, trace_hessian, BivariatePoly, FamilySpec, FloatPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    In,
    Out,
    BoundaryWithinTolerance,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    TraceDet { trace: f64, det: f64 },
    Lambda { lambda: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub status: Membership,
    pub witness: Witness,
    pub tol: f64,
}

/// 1e−9·(1 + ‖H‖∞)
pub fn default_tolerance(h: &SymmetricMatrix) -> f64 {
    1e-9 * (1.0 + h.norm_inf())
}

fn classify(witnesses: &[f64], tol: f64) -> Membership {
    if witnesses.iter().all(|&w| w > tol) {
        Membership::In
    } else if tol > 0.0 && witnesses.iter().all(|&w| w >= -tol) {
        Membership::BoundaryWithinTolerance
    } else {
        Membership::Out
    }
}

/// Positive definiteness of H_p(f). In the plane the witness is
/// (trace, det); otherwise λ(H_p(f)).
pub fn hess_plus_contains(f: &ScalarField, p: &[f64], tol: f64) -> Result<MembershipVerdict> {
    if tol < 0.0 || !tol.is_finite() {
        return Err(Error::Precondition(format!("tolerance must be ≥ 0 (got {tol})")));
    }
    let h = f.jet(p)?.hessian;
    Ok(verdict_for_hessian(&h, tol))
}

pub fn verdict_for_hessian(h: &SymmetricMatrix, tol: f64) -> MembershipVerdict {
    if h.dim() == 2 {
        let (trace, det) = (h.trace(), h.determinant_2x2());
        MembershipVerdict { status: classify(&[trace, det], tol), witness: Witness::TraceDet { trace, det }, tol }
    } else {
        let lambda = h.lambda_min();
        MembershipVerdict { status: classify(&[lambda], tol), witness: Witness::Lambda { lambda }, tol }
    }
}

/// Positive semidefiniteness: in ⟺ λ(H_p(f)) ≥ −tol.
pub fn hess_semidef_contains(f: &ScalarField, p: &[f64], tol: f64) -> Result<MembershipVerdict> {
    let lambda = f.jet(p)?.hessian.lambda_min();
    let status = if lambda >= -tol { Membership::In } else { Membership::Out };
    Ok(MembershipVerdict { status, witness: Witness::Lambda { lambda }, tol })
}

// ---------------------------------------------------------------------------
// Boundedness certificate

const THETA_CELLS: usize = 4096;
const RADIAL_CELLS: usize = 16;
const MAX_SUBDIVISION: u32 = 20;
const MAX_HALVINGS: usize = 48;
/// Sub-cells one angular column may visit before the annulus is given up.
const COLUMN_BUDGET: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateStatus {
    Certified,
    Unknown,
}

/// Limits of Tr H / r^(2n−2) and det H / r^(4n−4) as r → ∞.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeadingConstants {
    pub trace: String,
    pub det: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Margin {
    pub trace: f64,
    pub det: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateGrid {
    pub theta_cells: usize,
    pub radial_cells_per_annulus: usize,
    pub annuli: usize,
    pub cells_checked: usize,
    /// Beyond this radius the dominant-term minorants of trace and det are positive.
    pub dominance_radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundednessCertificate {
    pub family: String,
    #[serde(rename = "R")]
    pub radius: f64,
    pub leading_constants: LeadingConstants,
    pub margin: Margin,
    pub grid: CertificateGrid,
    pub status: CertificateStatus,
}

/// Polar bounds for one polynomial: homogeneous parts r^k q_k(θ) with
/// |q_k| ≤ m[k], |q_k'| ≤ k·m[k]; the top part is the constant `lead`.
struct PolarBound {
    poly: FloatPoly,
    m: Vec<f64>,
    top: usize,
    lead: f64,
}

impl PolarBound {
    fn new(p: &BivariatePoly, top: usize, lead: f64) -> Self {
        let m = (0..=top)
            .map(|k| p.homogeneous_part(k as u32).terms().map(|(_, c)| c.abs().to_f64().unwrap_or(f64::INFINITY)).sum())
            .collect();
        PolarBound { poly: p.to_float(), m, top, lead }
    }

    fn lower_sum(&self, r: f64) -> f64 {
        (0..self.top).map(|k| self.m[k] * r.powi(k as i32)).sum()
    }

    /// L·r^top − Σ_{k<top} M_k r^k
    fn minorant(&self, r: f64) -> f64 {
        self.lead * r.powi(self.top as i32) - self.lower_sum(r)
    }

    /// The unique positive root of the minorant (0 when all lower parts vanish).
    fn dominance_radius(&self) -> f64 {
        let total: f64 = self.m[..self.top].iter().sum();
        if total == 0.0 {
            return 0.0;
        }
        let mut hi = (total / self.lead).max(1.0);
        while self.minorant(hi) <= 0.0 {
            hi *= 2.0;
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.minorant(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    fn lipschitz_theta(&self, r: f64) -> f64 {
        (1..self.top).map(|k| k as f64 * self.m[k] * r.powi(k as i32)).sum()
    }

    fn lipschitz_r(&self, r: f64) -> f64 {
        (1..=self.top).map(|k| k as f64 * self.m[k] * r.powi(k as i32 - 1)).sum()
    }

    fn rounding_slack(&self, r: f64) -> f64 {
        let scale = self.lower_sum(r) + self.m[self.top] * r.powi(self.top as i32);
        64.0 * f64::EPSILON * scale * (self.poly_terms() as f64)
    }

    fn poly_terms(&self) -> usize {
        self.m.len()
    }

    /// Certified lower bound of the polynomial on the polar cell, or `None`
    /// if subdivision to `depth` cannot make it positive.
    fn cell_lower_bound(&self, r0: f64, r1: f64, t0: f64, t1: f64, depth: u32, count: &mut usize) -> Option<f64> {
        *count += 1;
        let (rc, tc) = (0.5 * (r0 + r1), 0.5 * (t0 + t1));
        let centre = self.poly.eval(rc * tc.cos(), rc * tc.sin());
        let slack_r = self.lipschitz_r(r1) * 0.5 * (r1 - r0);
        let slack_t = self.lipschitz_theta(r1) * 0.5 * (t1 - t0);
        let bound = centre - slack_r - slack_t - self.rounding_slack(r1);
        if bound > 0.0 {
            return Some(bound);
        }
        if depth == 0 || centre <= 0.0 || *count > COLUMN_BUDGET {
            return None;
        }
        // Halve whichever side contributes more slack.
        let halves = if slack_r >= slack_t {
            [(r0, rc, t0, t1), (rc, r1, t0, t1)]
        } else {
            [(r0, r1, t0, tc), (r0, r1, tc, t1)]
        };
        let mut best = f64::INFINITY;
        for (a, b, c, d) in halves {
            best = best.min(self.cell_lower_bound(a, b, c, d, depth - 1, count)?);
        }
        Some(best)
    }

    /// Minimum certified lower bound over the annulus r ∈ [r0, r1].
    fn validate_annulus(&self, r0: f64, r1: f64) -> Option<(f64, usize)> {
        let dt = std::f64::consts::TAU / THETA_CELLS as f64;
        let dr = (r1 - r0) / RADIAL_CELLS as f64;
        let results: Option<Vec<(f64, usize)>> = (0..THETA_CELLS)
            .into_par_iter()
            .map(|j| {
                let (t0, t1) = (j as f64 * dt, (j + 1) as f64 * dt);
                let mut count = 0;
                let mut best = f64::INFINITY;
                for i in 0..RADIAL_CELLS {
                    let a = r0 + i as f64 * dr;
                    let b = if i + 1 == RADIAL_CELLS { r1 } else { a + dr };
                    best = best.min(self.cell_lower_bound(a, b, t0, t1, MAX_SUBDIVISION, &mut count)?);
                }
                Some((best, count))
            })
            .collect();
        Some(results?.into_iter().fold((f64::INFINITY, 0), |(m, c), (m2, c2)| (m.min(m2), c + c2)))
    }
}

/// Checks that the top homogeneous part of `p` is exactly `lead`·(x²+y²)^(top/2).
fn check_top(p: &BivariatePoly, top: u32, lead: &BigRational) -> bool {
    p.degree() == Some(top) && p.homogeneous_part(top) == BivariatePoly::radius_sq().pow(top / 2).scale(lead)
}

/// A radius R beyond which trace and det of the Hessian are positive.
///
/// The annulus [R, 2R] and every dyadic annulus out to the dominance radius
/// are checked on a polar grid with explicit Lipschitz slack; past the
/// dominance radius the minorant L·r^top − Σ M_k r^k is positive.
pub fn certify_complement_bounded(spec: &FamilySpec) -> Result<BoundednessCertificate> {
    let poly = spec.build().map_err(|e| Error::Precondition(e.to_string()))?;
    let parts = spec.radial_parts()?;
    parts.validate().map_err(|e| Error::Precondition(e.to_string()))?;
    let n = parts.radial_degree().expect("validated") as i64;
    let a0 = parts.leading_coefficient().expect("validated").clone();
    let lead_trace = integer(4 * n * n) * &a0;
    let lead_det = integer(4 * n * n * (2 * n - 1)) * &a0 * &a0;
    let leading_constants = LeadingConstants { trace: lead_trace.to_string(), det: lead_det.to_string() };

    let trace = trace_hessian(&poly);
    let det = det_hessian(&poly);
    let (top_t, top_d) = ((2 * n - 2) as u32, (4 * n - 4) as u32);

    let unknown = |dominance_radius: f64| BoundednessCertificate {
        family: spec.label(),
        radius: f64::INFINITY,
        leading_constants: leading_constants.clone(),
        margin: Margin { trace: 0.0, det: 0.0 },
        grid: CertificateGrid {
            theta_cells: THETA_CELLS,
            radial_cells_per_annulus: RADIAL_CELLS,
            annuli: 0,
            cells_checked: 0,
            dominance_radius,
        },
        status: CertificateStatus::Unknown,
    };
    if !check_top(&trace, top_t, &lead_trace) || !check_top(&det, top_d, &lead_det) {
        return Ok(unknown(f64::INFINITY));
    }

    let bt = PolarBound::new(&trace, top_t as usize, lead_trace.to_f64().unwrap_or(0.0));
    let bd = PolarBound::new(&det, top_d as usize, lead_det.to_f64().unwrap_or(0.0));
    let r_dom = bt.dominance_radius().max(bd.dominance_radius());
    let start = if r_dom > 0.0 { r_dom } else { 1.0 };

    let check = |r0: f64, r1: f64| -> Option<(Margin, usize)> {
        let (mt, ct) = bt.validate_annulus(r0, r1)?;
        let (md, cd) = bd.validate_annulus(r0, r1)?;
        Some((Margin { trace: mt, det: md }, ct + cd))
    };

    let Some((mut margin, mut cells)) = check(start, 2.0 * start) else {
        return Ok(unknown(r_dom));
    };
    let mut radius = start;
    let mut annuli = 1;
    for _ in 0..MAX_HALVINGS {
        match check(0.5 * radius, radius) {
            Some((m, c)) => {
                margin.trace = margin.trace.min(m.trace);
                margin.det = margin.det.min(m.det);
                cells += c;
                annuli += 1;
                radius *= 0.5;
            }
            None => break,
        }
    }
    Ok(BoundednessCertificate {
        family: spec.label(),
        radius,
        leading_constants,
        margin,
        grid: CertificateGrid {
            theta_cells: THETA_CELLS,
            radial_cells_per_annulus: RADIAL_CELLS,
            annuli,
            cells_checked: cells,
            dominance_radius: r_dom,
        },
        status: CertificateStatus::Certified,
    })
}

// ---------------------------------------------------------------------------
// Complement scans

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplementScan {
    pub bounds: Box2,
    pub spacing: f64,
    pub nx: usize,
    pub ny: usize,
    pub points: Vec<Point>,
}

impl ComplementScan {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }
}

/// Grid nodes (spacing ≤ `resolution`) where H is not positive definite at tol = 0.
pub fn scan_complement(f: &ScalarField, bounds: &Box2, resolution: f64) -> Result<ComplementScan> {
    if !(resolution > 0.0) {
        return Err(Error::Precondition(format!("resolution must be positive (got {resolution})")));
    }
    if f.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: f.dim() });
    }
    let (nx, ny) = bounds.divisions_for_spacing(resolution);
    let rows: Vec<Vec<Point>> = (0..=ny)
        .into_par_iter()
        .map(|j| {
            let y = bounds.y_at(j, ny);
            (0..=nx)
                .filter_map(|i| {
                    let x = bounds.x_at(i, nx);
                    let jet = f.jet(&[x, y]).ok()?;
                    let out = verdict_for_hessian(&jet.hessian, 0.0).status != Membership::In;
                    out.then(|| Point::xy(x, y))
                })
                .collect()
        })
        .collect();
    Ok(ComplementScan {
        bounds: *bounds,
        spacing: bounds.width() / nx as f64,
        nx,
        ny,
        points: rows.into_iter().flatten().collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HMaxEstimate {
    pub value: f64,
    pub argmax: Point,
    pub grid_resolution: f64,
    /// Grid maxima can only under-estimate the true maximum.
    pub lower_bound: bool,
}

fn in_complement(f: &ScalarField, x: f64, y: f64) -> bool {
    f.jet(&[x, y]).map(|j| verdict_for_hessian(&j.hessian, 0.0).status != Membership::In).unwrap_or(false)
}

/// max f over the scanned complement, then `rounds` local refinements
/// (spacing ÷10 each) around the running argmax.
pub fn h_max_estimate(f: &ScalarField, scan: &ComplementScan, rounds: usize) -> Result<HMaxEstimate> {
    let mut best: Option<(f64, f64, f64)> = None;
    for p in &scan.points {
        let v = f.value_xy(p.x(), p.y());
        if v.is_finite() && best.is_none_or(|(b, _, _)| v > b) {
            best = Some((v, p.x(), p.y()));
        }
    }
    let (mut value, mut bx, mut by) = best.ok_or(Error::EmptyComplement)?;
    let mut h = scan.spacing;
    const HALF: i32 = 10;
    for _ in 0..rounds {
        let step = h / 10.0;
        let candidates: Vec<(f64, f64, f64)> = (-HALF..=HALF)
            .into_par_iter()
            .flat_map_iter(|i| {
                (-HALF..=HALF).filter_map(move |j| {
                    let (x, y) = (bx + i as f64 * step, by + j as f64 * step);
                    if !in_complement(f, x, y) {
                        return None;
                    }
                    let v = f.value_xy(x, y);
                    v.is_finite().then_some((v, x, y))
                })
            })
            .collect();
        for (v, x, y) in candidates {
            if v > value {
                (value, bx, by) = (v, x, y);
            }
        }
        h = step;
    }
    Ok(HMaxEstimate { value, argmax: Point::xy(bx, by), grid_resolution: h, lower_bound: true })
}

// ---------------------------------------------------------------------------
// Hypothesis audit for products

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayCheck {
    pub angle: f64,
    pub values: Vec<f64>,
    pub increasing_tail: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisAuditReport {
    pub sample_count: usize,
    pub seed: u64,
    /// Fraction of samples with ⟨∇f,∇g⟩ + ‖∇f‖‖∇g‖ > 0.
    pub positive_fraction: f64,
    /// Fraction of samples where rank d(f⊕g) = 2.
    pub rank_two_fraction: f64,
    /// Bounding box [xmin, xmax, ymin, ymax] of rank-2 samples, if any.
    pub rank_two_extent: Option<[f64; 4]>,
    pub rays: Vec<RayCheck>,
    /// Sampling evidence only; never a proof.
    pub is_proof: bool,
}

const AUDIT_RAYS: usize = 16;
const AUDIT_RAY_STEPS: usize = 8;

/// Samples the gradient-alignment and growth hypotheses for f·g on `bounds`.
pub fn audit_product_hypotheses(
    f: &ScalarField,
    g: &ScalarField,
    bounds: &Box2,
    samples: usize,
    seed: u64,
) -> Result<HypothesisAuditReport> {
    if samples == 0 {
        return Err(Error::Precondition("samples must be ≥ 1".into()));
    }
    if f.dim() != 2 || g.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: f.dim().max(g.dim()) });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<[f64; 2]> = (0..samples)
        .map(|_| [rng.gen_range(bounds.xmin..=bounds.xmax), rng.gen_range(bounds.ymin..=bounds.ymax)])
        .collect();
    let per_point: Vec<(bool, bool, [f64; 2])> = pts
        .par_iter()
        .map(|p| {
            let jac = direct_sum_jacobian(f, g, p)?;
            let (u, v) = (&jac.rows[0], &jac.rows[1]);
            let (_, mu) = rank2_sym_eigs(u, v);
            let nu = u.iter().map(|a| a * a).sum::<f64>().sqrt();
            let nv = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            let positive = mu > 1e-12 * nu * nv && mu > 0.0;
            let rank_two = jac.rank(jac.default_rank_tolerance()) == 2;
            Ok((positive, rank_two, *p))
        })
        .collect::<Result<_>>()?;
    let positive = per_point.iter().filter(|t| t.0).count();
    let mut extent: Option<[f64; 4]> = None;
    let mut rank_two = 0;
    for (_, r2, p) in &per_point {
        if *r2 {
            rank_two += 1;
            let e = extent.get_or_insert([p[0], p[0], p[1], p[1]]);
            e[0] = e[0].min(p[0]);
            e[1] = e[1].max(p[0]);
            e[2] = e[2].min(p[1]);
            e[3] = e[3].max(p[1]);
        }
    }

    let prod = ScalarField::product(f, g)?;
    let cx = 0.5 * (bounds.xmin + bounds.xmax);
    let cy = 0.5 * (bounds.ymin + bounds.ymax);
    let base = 0.5 * bounds.diagonal();
    let rays = (0..AUDIT_RAYS)
        .map(|k| {
            let angle = std::f64::consts::TAU * k as f64 / AUDIT_RAYS as f64;
            let values: Vec<f64> = (0..AUDIT_RAY_STEPS)
                .map(|s| {
                    let r = base * 2f64.powi(s as i32);
                    prod.value_xy(cx + r * angle.cos(), cy + r * angle.sin())
                })
                .collect();
            let tail = &values[AUDIT_RAY_STEPS / 2..];
            let increasing_tail =
                tail.windows(2).all(|w| w[1] > w[0] || (w[0] == f64::INFINITY && w[1] == f64::INFINITY));
            RayCheck { angle, values, increasing_tail }
        })
        .collect();

    Ok(HypothesisAuditReport {
        sample_count: samples,
        seed,
        positive_fraction: positive as f64 / samples as f64,
        rank_two_fraction: rank_two as f64 / samples as f64,
        rank_two_extent: extent,
        rays,
        is_proof: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::OuterMap;

    fn f1() -> ScalarField {
        ScalarField::polynomial(FamilySpec::cassini(integer(1)).build().unwrap())
    }

    fn f1g1() -> ScalarField {
        let spec = FamilySpec::product(vec![FamilySpec::cassini(integer(1)), FamilySpec::anti_cassini(integer(1))]);
        ScalarField::polynomial(spec.build().unwrap())
    }

    #[test]
    fn cassini_membership() {
        assert_eq!(hess_plus_contains(&f1(), &[2.0, 0.0], 0.0).unwrap().status, Membership::In);
        assert_eq!(hess_plus_contains(&f1(), &[0.0, 0.0], 0.0).unwrap().status, Membership::Out);
        assert_eq!(hess_semidef_contains(&f1(), &[0.0, 0.0], 1e-9).unwrap().status, Membership::Out);
    }

    #[test]
    fn product_origin_is_boundary() {
        let v = hess_plus_contains(&f1g1(), &[0.0, 0.0], 1e-9).unwrap();
        assert_eq!(v.status, Membership::BoundaryWithinTolerance);
        assert_eq!(v.witness, Witness::TraceDet { trace: 0.0, det: 0.0 });
        assert_eq!(hess_plus_contains(&f1g1(), &[0.0, 0.0], 0.0).unwrap().status, Membership::Out);
        assert_eq!(hess_semidef_contains(&f1g1(), &[0.0, 0.0], 0.0).unwrap().status, Membership::In);
    }

    #[test]
    fn lambda_path_in_three_dims() {
        let f =
            ScalarField::quadratic(vec![vec![2.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 3.0]], vec![0.0; 3]);
        let v = hess_plus_contains(&f, &[0.1, 0.2, 0.3], 0.0).unwrap();
        assert_eq!(v.status, Membership::In);
        assert!(matches!(v.witness, Witness::Lambda { lambda } if (lambda - 1.0).abs() < 1e-12));
    }

    #[test]
    fn paraboloid_complement_empty() {
        let f = ScalarField::polynomial("x^2 + y^2".parse().unwrap());
        let scan = scan_complement(&f, &Box2::square(2.0), 0.05).unwrap();
        assert!(scan.is_empty());
        assert_eq!(h_max_estimate(&f, &scan, 3).unwrap_err(), Error::EmptyComplement);
    }

    #[test]
    fn cassini_complement_contains_origin() {
        let scan = scan_complement(&f1(), &Box2::square(2.0), 0.01).unwrap();
        assert!(scan.points.iter().any(|p| p.x() == 0.0 && p.y() == 0.0));
        let h = h_max_estimate(&f1(), &scan, 3).unwrap();
        assert!(h.value >= 0.0);
        assert_eq!(f1().value(&h.argmax).unwrap(), h.value);
    }

    #[test]
    fn certificate_for_cassini() {
        let cert = certify_complement_bounded(&FamilySpec::cassini(integer(1))).unwrap();
        assert_eq!(cert.status, CertificateStatus::Certified);
        assert_eq!(cert.leading_constants.trace, "16");
        assert_eq!(cert.leading_constants.det, "48");
        assert!(cert.radius.is_finite() && cert.margin.trace > 0.0 && cert.margin.det > 0.0);
        // the complement reaches (0, ±1), where 3s² + 2t = 1
        assert!(cert.radius > 1.0);
    }

    #[test]
    fn certificate_rejects_bad_family() {
        let spec = FamilySpec::radial_plus(vec![integer(0), integer(1)], "x^2 + y^2 + x*y".parse().unwrap());
        assert!(matches!(certify_complement_bounded(&spec), Err(Error::Precondition(_))));
    }

    #[test]
    fn audit_same_field() {
        let f = f1();
        let r = audit_product_hypotheses(&f, &f, &Box2::square(2.0), 500, 7).unwrap();
        assert_eq!(r.positive_fraction, 1.0);
        assert_eq!(r.rank_two_fraction, 0.0);
        assert!(r.rank_two_extent.is_none());
        assert!(!r.is_proof);
        assert_eq!(r, audit_product_hypotheses(&f, &f, &Box2::square(2.0), 500, 7).unwrap());
    }

    #[test]
    fn audit_opposite_gradients() {
        let f = ScalarField::coordinate(2, 0);
        let g = ScalarField::linear(vec![-1.0, 0.0], 0.0);
        let r = audit_product_hypotheses(&f, &g, &Box2::square(1.0), 100, 0).unwrap();
        assert_eq!(r.positive_fraction, 0.0);
    }

    #[test]
    fn audit_compositions_of_one_field() {
        let s = ScalarField::polynomial("x^2 + y^2".parse().unwrap());
        let f = ScalarField::compose(OuterMap::Exp, &s);
        let g = ScalarField::power(&s, 2);
        let r = audit_product_hypotheses(&f, &g, &Box2::square(2.0), 400, 3).unwrap();
        assert_eq!(r.positive_fraction, 1.0);
        assert_eq!(r.rank_two_fraction, 0.0);
        assert!(r.rays.iter().all(|ray| ray.increasing_tail));
    }
}
