//! Reproduction checks for the quantitative claims about the Cassini family
//! and the product f₁g₁.
//!
//! Every check is deterministic given [`VerifyOptions`]. Details never carry
//! timings, so two runs produce identical matrices.

use std::f64::consts::TAU;

use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::critical::{find_critical_points, mu_max, DEFAULT_SEEDS_PER_AXIS};
use crate::field::{rank2_sym_eigs, Jet2, OuterMap, ScalarField};
use crate::grid::Box2;
use crate::levelset::{
    convexity_det_value, convexity_via_d, extract_level, first_convex_level, parametrize_product_level, DSign,
    DEFAULT_CELLS,
};
use crate::poly::{det_hessian, integer, rational, trace_hessian, BivariatePoly, FamilySpec};
use crate::region::{
    certify_complement_bounded, h_max_estimate, hess_plus_contains, scan_complement, CertificateStatus, Membership,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Instances per property suite.
    pub property_instances: usize,
    /// Mutation smoke test: negate every D(f) value the checks read directly.
    pub flip_d_sign: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 0, property_instances: 1000, flip_d_sign: false }
    }
}

impl VerifyOptions {
    fn d_sign(&self) -> f64 {
        if self.flip_d_sign {
            -1.0
        } else {
            1.0
        }
    }
}

pub type CheckFn = fn(&VerifyOptions) -> Result<String, String>;

pub struct Check {
    pub id: u32,
    pub name: &'static str,
    pub tolerance: &'static str,
    /// Desk-scale runtime budget in seconds.
    pub time_limit: f64,
    pub run: CheckFn,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: u32,
    pub name: String,
    pub tolerance: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyMatrix {
    pub version: String,
    pub options: VerifyOptions,
    pub all_passed: bool,
    pub checks: Vec<CheckResult>,
}

impl VerifyMatrix {
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub fn checks() -> Vec<Check> {
    vec![
        Check { id: 1, name: "symbolic trace of f1*g1", tolerance: "exact", time_limit: 1.0, run: trace_identity },
        Check { id: 2, name: "symbolic determinant of f1*g1", tolerance: "exact", time_limit: 1.0, run: det_identity },
        Check {
            id: 3,
            name: "trace-positivity region",
            tolerance: "0 mismatches outside 1e-9 band",
            time_limit: 5.0,
            run: trace_region,
        },
        Check {
            id: 4,
            name: "critical sets of f1 and f1*g1",
            tolerance: "locations 1e-8, values 1e-9",
            time_limit: 10.0,
            run: critical_sets,
        },
        Check {
            id: 5,
            name: "first convex level of f1*g1",
            tolerance: "|c* - 16| <= 0.05",
            time_limit: 60.0,
            run: first_convex,
        },
        Check {
            id: 6,
            name: "restricted determinant on levels 4 and 25",
            tolerance: "1e-6 relative",
            time_limit: 10.0,
            run: restricted_det,
        },
        Check {
            id: 7,
            name: "component counts at -2 and 20",
            tolerance: "exact counts",
            time_limit: 5.0,
            run: component_counts,
        },
        Check {
            id: 8,
            name: "circle parametrization residual",
            tolerance: "|f-b| <= 1e-9(1+b)",
            time_limit: 1.0,
            run: param_residual,
        },
        Check {
            id: 9,
            name: "boundedness certificates",
            tolerance: "all points beyond R in Hess+",
            time_limit: 30.0,
            run: certificates,
        },
        Check {
            id: 10,
            name: "property suites",
            tolerance: "per suite (1e-5 fd, 1e-12 combinators, 1e-10 eigen)",
            time_limit: 60.0,
            run: properties,
        },
        Check {
            id: 11,
            name: "h_max >= mu_max for f1*g1",
            tolerance: "h_max >= 0, |mu_max| <= 1e-9",
            time_limit: 10.0,
            run: hmax_order,
        },
    ]
}

pub fn run_check(check: &Check, opts: &VerifyOptions) -> CheckResult {
    let (passed, detail) = match (check.run)(opts) {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CheckResult { id: check.id, name: check.name.to_string(), tolerance: check.tolerance.to_string(), passed, detail }
}

pub fn run_all(opts: &VerifyOptions) -> VerifyMatrix {
    let checks: Vec<CheckResult> = checks().iter().map(|c| run_check(c, opts)).collect();
    VerifyMatrix {
        version: env!("CARGO_PKG_VERSION").to_string(),
        options: opts.clone(),
        all_passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

// ---------------------------------------------------------------------------

fn f1_spec() -> FamilySpec {
    FamilySpec::cassini(integer(1))
}

fn f1g1_spec() -> FamilySpec {
    FamilySpec::product(vec![FamilySpec::cassini(integer(1)), FamilySpec::anti_cassini(integer(1))])
}

fn f1g1_poly() -> BivariatePoly {
    f1g1_spec().build().expect("valid family")
}

fn f1g1() -> ScalarField {
    ScalarField::polynomial(f1g1_poly())
}

fn family_box() -> Box2 {
    Box2::for_family(1.0)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c(n: i64) -> BivariatePoly {
    BivariatePoly::constant(integer(n))
}

fn trace_identity(_: &VerifyOptions) -> Result<String, String> {
    let s = BivariatePoly::radius_sq();
    let want = &(&c(64) * &s.pow(3)) - &(&c(32) * &s);
    let got = trace_hessian(&f1g1_poly());
    ensure(got == want, || format!("trace {got} != {want}"))?;
    Ok(format!("{} terms", got.term_count()))
}

fn det_identity(_: &VerifyOptions) -> Result<String, String> {
    let s = BivariatePoly::radius_sq();
    let t = BivariatePoly::hyperbolic();
    let inner = &(&(&(&c(7) * &s.pow(6)) - &(&c(12) * &t.pow(2))) - &(&c(28) * &s.pow(4)))
        + &(&(&c(36) * &s.pow(2)) * &t.pow(2));
    let want = &c(64) * &inner;
    let got = det_hessian(&f1g1_poly());
    ensure(got == want, || format!("det {got} != {want}"))?;
    Ok(format!("{} terms", got.term_count()))
}

fn trace_region(_: &VerifyOptions) -> Result<String, String> {
    let f = f1g1();
    let b = Box2::square(2.0);
    let n = 100;
    let threshold = 0.5f64.sqrt();
    let (mut mismatches, mut banded) = (0usize, 0usize);
    for j in 0..n {
        for i in 0..n {
            let (x, y) = (b.x_at(i, n - 1), b.y_at(j, n - 1));
            let s = x * x + y * y;
            if (s - threshold).abs() <= 1e-9 {
                banded += 1;
                continue;
            }
            let tr = f.jet(&[x, y]).map_err(|e| e.to_string())?.hessian.trace();
            if (tr > 0.0) != (s > threshold) {
                mismatches += 1;
            }
        }
    }
    ensure(mismatches == 0, || format!("{mismatches} sign mismatches"))?;
    Ok(format!("{} points, {banded} in band, 0 mismatches", n * n))
}

/// A field, its expected critical points and its expected critical values.
type CriticalCase = (ScalarField, Vec<(f64, f64)>, Vec<f64>);

fn critical_sets(_: &VerifyOptions) -> Result<String, String> {
    let q = 2f64.powf(0.25);
    let cases: [CriticalCase; 2] = [
        (
            ScalarField::polynomial(f1_spec().build().expect("valid")),
            vec![(-1.0, 0.0), (0.0, 0.0), (1.0, 0.0)],
            vec![-1.0, 0.0],
        ),
        (f1g1(), vec![(-q, 0.0), (0.0, -q), (0.0, 0.0), (0.0, q), (q, 0.0)], vec![-4.0, 0.0]),
    ];
    let mut detail = Vec::new();
    for (f, locs, vals) in &cases {
        let cs = find_critical_points(f, &family_box(), DEFAULT_SEEDS_PER_AXIS, None).map_err(|e| e.to_string())?;
        ensure(cs.points.len() == locs.len(), || format!("{} points, expected {}", cs.points.len(), locs.len()))?;
        let mut loc_err = 0f64;
        for (p, w) in cs.points.iter().zip(locs) {
            loc_err = loc_err.max((p.location.x() - w.0).abs().max((p.location.y() - w.1).abs()));
        }
        ensure(loc_err <= 1e-8, || format!("location error {loc_err:.3e}"))?;
        ensure(cs.values.len() == vals.len(), || format!("values {:?}", cs.values))?;
        let val_err = cs.values.iter().zip(vals).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        ensure(val_err <= 1e-9, || format!("value error {val_err:.3e}"))?;
        detail.push(format!("{} points, B={:?}", cs.points.len(), vals));
    }
    Ok(detail.join("; "))
}

fn first_convex(_: &VerifyOptions) -> Result<String, String> {
    let r = first_convex_level(&f1g1(), 0.5, 100.0, 1e-2, &family_box(), DEFAULT_CELLS).map_err(|e| e.to_string())?;
    ensure((r.c_star - 16.0).abs() <= 0.05, || format!("c* = {}", r.c_star))?;
    Ok(format!("c* = {:.4}, bracket [{:.4}, {:.4}]", r.c_star, r.bracket.0, r.bracket.1))
}

/// −2⁸[3s⁸+5bs⁶−12bs⁴−3b²s²+b²] and the magnitude of its terms.
fn restricted_det_formula(s: f64, b: f64) -> (f64, f64) {
    let terms = [3.0 * s.powi(8), 5.0 * b * s.powi(6), -12.0 * b * s.powi(4), -3.0 * b * b * s * s, b * b];
    (-256.0 * terms.iter().sum::<f64>(), 256.0 * terms.iter().map(|t| t.abs()).sum::<f64>())
}

fn restricted_det(opts: &VerifyOptions) -> Result<String, String> {
    let f = f1g1();
    let mut detail = Vec::new();
    for b in [4.0, 25.0] {
        let pts = parametrize_product_level(1.0, b, 256).map_err(|e| e.to_string())?;
        let (mut lo, mut hi, mut worst) = (f64::INFINITY, f64::NEG_INFINITY, 0f64);
        for p in &pts {
            let d = opts.d_sign() * convexity_det_value(&f.jet(p).map_err(|e| e.to_string())?);
            let (want, scale) = restricted_det_formula(p.x() * p.x() + p.y() * p.y(), b);
            worst = worst.max((d - want).abs() / scale);
            lo = lo.min(d);
            hi = hi.max(d);
        }
        ensure(worst <= 1e-6, || format!("b={b}: relative error {worst:.3e}"))?;
        let uniform = hi < 0.0;
        ensure(uniform == (b > 16.0), || format!("b={b}: D range [{lo:.4e}, {hi:.4e}]"))?;
        // The extreme value 2⁹b²(4−√b) sits on the diagonals and carries the sign flip.
        let extreme = 512.0 * b * b * (4.0 - b.sqrt());
        ensure((hi - extreme).abs() <= 1e-6 * extreme.abs(), || {
            format!("b={b}: max D {hi:.6e}, expected {extreme:.6e}")
        })?;
        detail.push(format!("b={b}: rel err {worst:.1e}, D in [{lo:.4e}, {hi:.4e}]"));
    }
    Ok(detail.join("; "))
}

fn component_counts(opts: &VerifyOptions) -> Result<String, String> {
    let f = f1g1();
    let neg = extract_level(&f, -2.0, &family_box(), DEFAULT_CELLS).map_err(|e| e.to_string())?;
    let closed = neg.components.iter().filter(|c| c.closed).count();
    ensure(neg.components.len() == 4 && closed == 4, || format!("level -2: {} components", neg.components.len()))?;
    let pos = extract_level(&f, 20.0, &family_box(), DEFAULT_CELLS).map_err(|e| e.to_string())?;
    ensure(pos.components.len() == 1 && pos.components[0].closed, || {
        format!("level 20: {} components", pos.components.len())
    })?;
    let report = convexity_via_d(&f, &pos, 0).map_err(|e| e.to_string())?;
    let comp = &report.components[0];
    let (d_min, d_max) = if opts.flip_d_sign { (-comp.d_max, -comp.d_min) } else { (comp.d_min, comp.d_max) };
    let sign = match (opts.flip_d_sign, comp.d_sign) {
        (true, DSign::AllNegative) => DSign::AllPositive,
        (true, DSign::AllPositive) => DSign::AllNegative,
        (_, s) => s,
    };
    ensure(sign == DSign::AllNegative, || format!("level 20: D sign {sign:?}, range [{d_min:.3e}, {d_max:.3e}]"))?;
    Ok(format!("level -2: 4 closed; level 20: 1 closed, D in [{d_min:.3e}, {d_max:.3e}]"))
}

fn param_residual(_: &VerifyOptions) -> Result<String, String> {
    let f = f1g1();
    let mut detail = Vec::new();
    for b in [1.0, 16.0, 100.0] {
        let pts = parametrize_product_level(1.0, b, 1024).map_err(|e| e.to_string())?;
        let worst = pts.iter().map(|p| (f.value_xy(p.x(), p.y()) - b).abs()).fold(0.0, f64::max);
        ensure(worst <= 1e-9 * (1.0 + b), || format!("b={b}: residual {worst:.3e}"))?;
        detail.push(format!("b={b}: {worst:.1e}"));
    }
    Ok(detail.join("; "))
}

const POINTS_BEYOND_R: usize = 100_000;

fn certificates(opts: &VerifyOptions) -> Result<String, String> {
    let specs = [f1_spec(), FamilySpec::anti_cassini(integer(1)), f1g1_spec()];
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut detail = Vec::new();
    for spec in &specs {
        let cert = certify_complement_bounded(spec).map_err(|e| e.to_string())?;
        ensure(cert.status == CertificateStatus::Certified, || format!("{}: {:?}", spec.label(), cert.status))?;
        let radius = cert.radius;
        let f = ScalarField::polynomial(spec.build().map_err(|e| e.to_string())?);
        let mut failures = 0;
        for _ in 0..POINTS_BEYOND_R {
            let theta = rng.gen_range(0.0..TAU);
            let r = radius * (1.0 + 9.0 * (1.0 - rng.gen::<f64>()));
            let v = hess_plus_contains(&f, &[r * theta.cos(), r * theta.sin()], 0.0).map_err(|e| e.to_string())?;
            if v.status != Membership::In {
                failures += 1;
            }
        }
        ensure(failures == 0, || format!("{}: {failures} points beyond R={radius} outside Hess+", spec.label()))?;
        detail.push(format!("{}: R={radius:.6}", spec.label()));
    }
    Ok(format!("{}; {POINTS_BEYOND_R} points each", detail.join("; ")))
}

fn hmax_order(_: &VerifyOptions) -> Result<String, String> {
    let f = f1g1();
    let scan = scan_complement(&f, &family_box(), 0.02).map_err(|e| e.to_string())?;
    let h = h_max_estimate(&f, &scan, 3).map_err(|e| e.to_string())?;
    let cs = find_critical_points(&f, &family_box(), DEFAULT_SEEDS_PER_AXIS, None).map_err(|e| e.to_string())?;
    let mu = mu_max(&cs).map_err(|e| e.to_string())?;
    ensure(mu.abs() <= 1e-9, || format!("mu_max = {mu:.3e}"))?;
    ensure(h.value >= 0.0 && h.value >= mu, || format!("h_max = {:.6}, mu_max = {mu:.3e}", h.value))?;
    Ok(format!("h_max >= {:.6} at ({:.4}, {:.4}), mu_max = 0", h.value, h.argmax.x(), h.argmax.y()))
}

// ---------------------------------------------------------------------------
// Property suites

/// A random planar polynomial field together with its coefficient-magnitude poly.
struct Instance {
    poly: BivariatePoly,
    field: ScalarField,
}

impl Instance {
    fn new(poly: BivariatePoly) -> Self {
        Instance { field: ScalarField::polynomial(poly.clone()), poly }
    }

    /// Σ|c|·|x|^i|y|^j·(1+deg)², a bound on the size of every jet entry.
    fn magnitude(&self, x: f64, y: f64) -> f64 {
        let d = self.poly.degree().unwrap_or(0) as f64;
        let m: f64 = self
            .poly
            .terms()
            .map(|(mono, c)| {
                let c = num::ToPrimitive::to_f64(c).unwrap_or(0.0).abs();
                c * x.abs().powi(mono.x as i32) * y.abs().powi(mono.y as i32)
            })
            .sum();
        (1.0 + m) * (1.0 + d) * (1.0 + d)
    }
}

fn random_alpha(rng: &mut ChaCha8Rng) -> BigRational {
    rational(rng.gen_range(1..=8), 4)
}

fn random_poly(rng: &mut ChaCha8Rng) -> BivariatePoly {
    let terms = rng.gen_range(2..=6);
    let mut p = BivariatePoly::zero();
    for _ in 0..terms {
        let (i, j) = (rng.gen_range(0..=4u32), rng.gen_range(0..=4u32));
        if i + j > 4 {
            continue;
        }
        let coef = rational(rng.gen_range(-6..=6), 2);
        p = &p + &BivariatePoly::monomial(coef, i, j);
    }
    p
}

fn random_instance(rng: &mut ChaCha8Rng) -> Instance {
    let poly = match rng.gen_range(0..4) {
        0 => FamilySpec::cassini(random_alpha(rng)).build(),
        1 => FamilySpec::anti_cassini(random_alpha(rng)).build(),
        2 => FamilySpec::product(vec![
            FamilySpec::cassini(random_alpha(rng)),
            FamilySpec::anti_cassini(random_alpha(rng)),
        ])
        .build(),
        _ => Ok(random_poly(rng)),
    };
    Instance::new(poly.expect("positive alpha"))
}

fn random_point(rng: &mut ChaCha8Rng, h: f64) -> [f64; 2] {
    [rng.gen_range(-h..h), rng.gen_range(-h..h)]
}

fn jet_distance(a: &Jet2, b: &Jet2) -> f64 {
    let mut d = (a.value - b.value).abs();
    for (x, y) in a.gradient.iter().zip(&b.gradient) {
        d = d.max((x - y).abs());
    }
    for (x, y) in a.hessian.packed().iter().zip(b.hessian.packed()) {
        d = d.max((x - y).abs());
    }
    d
}

type Suite = fn(&mut ChaCha8Rng, usize, f64) -> Result<String, String>;

fn properties(opts: &VerifyOptions) -> Result<String, String> {
    let suites: [(&str, Suite); 7] = [
        ("finite differences", prop_finite_differences),
        ("combinators", prop_combinators),
        ("rank-2 eigenvalues", prop_rank2),
        ("product lower bound", prop_product_bound),
        ("composition inclusion", prop_compose_inclusion),
        ("D negative in Hess+", prop_d_negative),
        ("outer product at critical points", prop_outer_at_critical),
    ];
    let n = opts.property_instances;
    let mut detail = Vec::new();
    for (k, (name, suite)) in suites.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(k as u64));
        let d = suite(&mut rng, n, opts.d_sign()).map_err(|e| format!("{name}: {e}"))?;
        detail.push(format!("{name}: {d}"));
    }
    Ok(detail.join("; "))
}

fn prop_finite_differences(rng: &mut ChaCha8Rng, n: usize, _: f64) -> Result<String, String> {
    const H: f64 = 1e-5;
    let mut worst = 0f64;
    for _ in 0..n {
        let inst = random_instance(rng);
        let [x, y] = random_point(rng, 1.5);
        let j = inst.field.jet(&[x, y]).map_err(|e| e.to_string())?;
        let scale = inst.magnitude(x, y);
        let jp = |dx: f64, dy: f64| inst.field.jet(&[x + dx, y + dy]).expect("finite");
        let (xp, xm, yp, ym) = (jp(H, 0.0), jp(-H, 0.0), jp(0.0, H), jp(0.0, -H));
        let fd_grad = [(xp.value - xm.value) / (2.0 * H), (yp.value - ym.value) / (2.0 * H)];
        let fd_hess = [
            (xp.gradient[0] - xm.gradient[0]) / (2.0 * H),
            (yp.gradient[0] - ym.gradient[0]) / (2.0 * H),
            (yp.gradient[1] - ym.gradient[1]) / (2.0 * H),
        ];
        let ad = [j.gradient[0], j.gradient[1], *j.hessian.get(0, 0), *j.hessian.get(0, 1), *j.hessian.get(1, 1)];
        let fd = [fd_grad[0], fd_grad[1], fd_hess[0], fd_hess[1], fd_hess[2]];
        for (a, b) in ad.iter().zip(fd) {
            let rel = (a - b).abs() / scale;
            worst = worst.max(rel);
            if rel > 1e-5 {
                return Err(format!("{} at ({x}, {y}): jet {a} vs fd {b}", inst.poly));
            }
        }
    }
    Ok(format!("{n} ok, worst {worst:.1e}"))
}

fn prop_combinators(rng: &mut ChaCha8Rng, n: usize, _: f64) -> Result<String, String> {
    let mut worst = 0f64;
    for _ in 0..n {
        let (f, g) = (random_instance(rng), random_instance(rng));
        let [x, y] = random_point(rng, 1.2);
        let p = [x, y];
        // Product node against the jet of the expanded product polynomial.
        let prod = ScalarField::product(&f.field, &g.field).map_err(|e| e.to_string())?;
        let expanded = ScalarField::polynomial(&f.poly * &g.poly);
        let scale = f.magnitude(x, y) * g.magnitude(x, y);
        let err =
            jet_distance(&prod.jet(&p).map_err(|e| e.to_string())?, &expanded.jet(&p).map_err(|e| e.to_string())?)
                / scale;
        worst = worst.max(err);
        if err > 1e-12 {
            return Err(format!("product at ({x}, {y}): relative error {err:.3e}"));
        }
        // t + t³ against jet arithmetic.
        let jf = f.field.jet(&p).map_err(|e| e.to_string())?;
        let cubic = ScalarField::compose(OuterMap::polynomial(vec![0.0, 1.0, 0.0, 1.0]), &f.field);
        let generic = &jf + &jf.powi(3);
        let fm = f.magnitude(x, y);
        let err = jet_distance(&cubic.jet(&p).map_err(|e| e.to_string())?, &generic) / (fm * fm * fm);
        worst = worst.max(err);
        if err > 1e-12 {
            return Err(format!("t+t^3 at ({x}, {y}): relative error {err:.3e}"));
        }
        // exp: e^f(∇f, H + ∇f∇fᵀ), written out.
        if jf.value.abs() < 30.0 {
            let e = jf.value.exp();
            let got = ScalarField::compose(OuterMap::Exp, &f.field).jet(&p).map_err(|e| e.to_string())?;
            let g0 = &jf.gradient;
            let want = [
                e,
                e * g0[0],
                e * g0[1],
                e * (jf.hessian.get(0, 0) + g0[0] * g0[0]),
                e * (jf.hessian.get(0, 1) + g0[0] * g0[1]),
                e * (jf.hessian.get(1, 1) + g0[1] * g0[1]),
            ];
            let have = [
                got.value,
                got.gradient[0],
                got.gradient[1],
                *got.hessian.get(0, 0),
                *got.hessian.get(0, 1),
                *got.hessian.get(1, 1),
            ];
            let err = have.iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / (e * fm * fm);
            worst = worst.max(err);
            if err > 1e-12 {
                return Err(format!("exp at ({x}, {y}): relative error {err:.3e}"));
            }
        }
    }
    Ok(format!("{n} ok, worst {worst:.1e}"))
}

fn prop_rank2(rng: &mut ChaCha8Rng, n: usize, _: f64) -> Result<String, String> {
    let mut worst = 0f64;
    for _ in 0..n {
        let dim = rng.gen_range(2..=6);
        let u: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (lam, mu) = rank2_sym_eigs(&u, &v);
        let eigs = crate::field::SymmetricMatrix::sym_outer(&u, &v).eigenvalues();
        let dense_lo = eigs.iter().copied().fold(f64::INFINITY, f64::min);
        let dense_hi = eigs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let norm = |w: &[f64]| w.iter().map(|a| a * a).sum::<f64>().sqrt();
        let tol = 1e-10 * (1.0 + norm(&u) * norm(&v));
        let err = (lam - dense_lo).abs().max((mu - dense_hi).abs());
        worst = worst.max(err);
        if err > tol {
            return Err(format!("dim {dim}: ({lam}, {mu}) vs dense ({dense_lo}, {dense_hi})"));
        }
    }
    Ok(format!("{n} ok, worst {worst:.1e}"))
}

/// Draws points until `accept` holds, giving up after 200 tries per instance.
fn sample_where(rng: &mut ChaCha8Rng, h: f64, mut accept: impl FnMut(&[f64; 2]) -> bool) -> Option<[f64; 2]> {
    (0..200).map(|_| random_point(rng, h)).find(|p| accept(p))
}

fn prop_product_bound(rng: &mut ChaCha8Rng, n: usize, _: f64) -> Result<String, String> {
    let mut done = 0;
    let mut attempts = 0;
    while done < n {
        attempts += 1;
        if attempts > 20 * n {
            return Err(format!("only {done} admissible instances"));
        }
        let (f, g) = (random_instance(rng), random_instance(rng));
        let Some(p) = sample_where(rng, 2.0, |p| {
            f.field.value(p).unwrap_or(-1.0) >= 0.0 && g.field.value(p).unwrap_or(-1.0) >= 0.0
        }) else {
            continue;
        };
        let bound = crate::field::product_lambda_lower_bound(&f.field, &g.field, &p).map_err(|e| e.to_string())?;
        let prod = ScalarField::product(&f.field, &g.field).map_err(|e| e.to_string())?;
        let lam = prod.jet(&p).map_err(|e| e.to_string())?.hessian.lambda_min();
        let tol = 1e-12 * f.magnitude(p[0], p[1]) * g.magnitude(p[0], p[1]);
        if lam < bound - tol {
            return Err(format!("at {p:?}: λ(H(fg)) = {lam} below bound {bound}"));
        }
        done += 1;
    }
    Ok(format!("{n} ok"))
}

/// λ(H_p f) comfortably above zero.
fn strictly_in(f: &Instance, p: &[f64; 2]) -> bool {
    f.field.jet(p).is_ok_and(|j| {
        let h = &j.hessian;
        h.lambda_min() > 1e-9 * (1.0 + h.norm_inf())
    })
}

fn prop_compose_inclusion(rng: &mut ChaCha8Rng, n: usize, _: f64) -> Result<String, String> {
    let maps = [OuterMap::Exp, OuterMap::polynomial(vec![0.0, 1.0, 0.0, 1.0])];
    let (mut done, mut attempts) = (0, 0);
    while done < n {
        attempts += 1;
        if attempts > 20 * n {
            return Err(format!("only {done} admissible instances"));
        }
        let f = random_instance(rng);
        let phi = &maps[done % 2];
        // t + t³ is convex increasing on t ≥ 0 only; exp is capped to stay finite.
        let domain_ok = |v: f64| match phi {
            OuterMap::Exp => v < 50.0,
            _ => v >= 0.0,
        };
        let Some(p) = sample_where(rng, 2.0, |p| strictly_in(&f, p) && f.field.value(p).is_ok_and(domain_ok)) else {
            continue;
        };
        let composed = ScalarField::compose(phi.clone(), &f.field);
        let v = hess_plus_contains(&composed, &p, 0.0).map_err(|e| e.to_string())?;
        if v.status != Membership::In {
            return Err(format!("{} at {p:?}: {:?}", phi.name(), v.witness));
        }
        done += 1;
    }
    Ok(format!("{n} ok"))
}

fn prop_d_negative(rng: &mut ChaCha8Rng, n: usize, d_sign: f64) -> Result<String, String> {
    let (mut done, mut attempts) = (0, 0);
    while done < n {
        attempts += 1;
        if attempts > 20 * n {
            return Err(format!("only {done} admissible instances"));
        }
        let f = random_instance(rng);
        let regular = |p: &[f64; 2]| f.field.jet(p).is_ok_and(|j| j.gradient_norm() > 1e-6);
        let Some(p) = sample_where(rng, 2.0, |p| strictly_in(&f, p) && regular(p)) else {
            continue;
        };
        let d = d_sign * convexity_det_value(&f.field.jet(&p).map_err(|e| e.to_string())?);
        if !(d < 0.0) {
            return Err(format!("{} at {p:?}: D = {d}", f.poly));
        }
        done += 1;
    }
    Ok(format!("{n} ok"))
}

fn prop_outer_at_critical(rng: &mut ChaCha8Rng, n: usize, _: f64) -> Result<String, String> {
    let mut worst = 0f64;
    for k in 0..n {
        // A field with a critical point known exactly.
        let (f, crit) = if rng.gen_bool(0.5) {
            let a = [rational(1, 2), integer(1), rational(3, 2), integer(2)][rng.gen_range(0..4)].clone();
            let alpha = &a * &a;
            let af = num::ToPrimitive::to_f64(&a).expect("small");
            let pts = [[0.0, 0.0], [af, 0.0], [-af, 0.0]];
            (Instance::new(FamilySpec::cassini(alpha).build().expect("valid")), pts[rng.gen_range(0..3)])
        } else {
            let (px, py) = (rational(rng.gen_range(-8..=8), 4), rational(rng.gen_range(-8..=8), 4));
            let dx = &BivariatePoly::x() - &BivariatePoly::constant(px.clone());
            let dy = &BivariatePoly::y() - &BivariatePoly::constant(py.clone());
            let c = |r: i64| BivariatePoly::constant(rational(r, 2));
            let q = &(&(&c(rng.gen_range(-6..=6)) * &dx.pow(2)) + &(&c(rng.gen_range(-6..=6)) * &(&dx * &dy)))
                + &(&c(rng.gen_range(-6..=6)) * &dy.pow(2));
            let to = |r: &BigRational| num::ToPrimitive::to_f64(r).expect("small");
            (Instance::new(q), [to(&px), to(&py)])
        };
        let g = random_instance(rng);
        // The critical point may belong to either factor.
        let (a, b) = if k % 2 == 0 { (&f, &g) } else { (&g, &f) };
        let ja = a.field.jet(&crit).map_err(|e| e.to_string())?;
        let jb = b.field.jet(&crit).map_err(|e| e.to_string())?;
        let (lam, mu) = rank2_sym_eigs(&ja.gradient, &jb.gradient);
        let err = lam.abs().max(mu.abs()) / (f.magnitude(crit[0], crit[1]) * g.magnitude(crit[0], crit[1]));
        worst = worst.max(err);
        if err > 1e-12 {
            return Err(format!("at {crit:?}: λ = {lam}, μ = {mu}"));
        }
    }
    Ok(format!("{n} ok, worst {worst:.1e}"))
}
