use hessplus::critical::find_critical_points;
use hessplus::grid::Box2;
use hessplus::levelset::{
    convexity_geometric, convexity_via_d, extract_level, first_convex_level, level_report, parametrize_product_level,
    to_csv, DSign, GeometricVerdict,
};
use hessplus::poly::{integer, rational, FamilySpec};
use hessplus::ScalarField;
use proptest::prelude::*;

fn product(alpha: num::BigRational) -> ScalarField {
    let spec = FamilySpec::product(vec![FamilySpec::cassini(alpha.clone()), FamilySpec::anti_cassini(alpha)]);
    ScalarField::polynomial(spec.build().unwrap())
}

#[test]
fn threshold_scales_with_a_to_the_eighth() {
    // α = a² = 16/25, so 16a⁸ = 16·(16/25)⁴.
    let f = product(rational(16, 25));
    let want = 16.0 * (16.0f64 / 25.0).powi(4);
    let r = first_convex_level(&f, 0.05, 20.0, 1e-3, &Box2::for_family(0.8), 600).unwrap();
    assert!((r.c_star - want).abs() <= 0.02, "{} vs {want}", r.c_star);
}

#[test]
fn report_for_convex_level() {
    let f = product(integer(1));
    let b = Box2::for_family(1.0);
    let cs = find_critical_points(&f, &b, 41, None).unwrap();
    let curve = extract_level(&f, 20.0, &b, 300).unwrap();
    let rep = level_report(&f, &curve, &cs, 1e-6).unwrap();
    assert!(rep.regular && rep.convex && rep.component_count == 1);
    assert_eq!(rep.components[0].geometric, Some(GeometricVerdict::Convex));
    let csv = to_csv(&curve);
    assert_eq!(csv.lines().count(), 2 + curve.components[0].points.len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn vertices_lie_on_the_level(a4 in 2i64..8, c in -0.2f64..6.0) {
        let alpha = a4 as f64 / 4.0;
        let f = ScalarField::polynomial(FamilySpec::cassini(rational(a4, 4)).build().unwrap());
        prop_assume!((c + alpha * alpha).abs() > 0.05 && c.abs() > 0.05);
        let b = Box2::for_family(alpha.sqrt() * 1.5);
        let curve = extract_level(&f, c, &b, 200).unwrap();
        // Cassini levels: two ovals below 0 (and above −α²), one loop above.
        let want = if c < -alpha * alpha { 0 } else if c < 0.0 { 2 } else { 1 };
        prop_assert_eq!(curve.components.len(), want);
        for p in curve.vertices() {
            prop_assert!((f.value(p).unwrap() - c).abs() <= 1e-8 * (1.0 + c.abs()));
        }
    }

    #[test]
    fn d_verdict_agrees_with_geometry(c in 17.0f64..200.0) {
        // Above the threshold both oracles report a convex single loop.
        let f = product(integer(1));
        let curve = extract_level(&f, c, &Box2::for_family(1.0 + c.powf(0.125)), 200).unwrap();
        prop_assert_eq!(curve.components.len(), 1);
        let d = convexity_via_d(&f, &curve, 0).unwrap();
        prop_assert_eq!(d.components[0].d_sign, DSign::AllNegative);
        let comp = &curve.components[0];
        prop_assert_eq!(convexity_geometric(&comp.points, comp.closed).unwrap(), GeometricVerdict::Convex);
    }

    #[test]
    fn parametrization_residual(a4 in 1i64..12, b in 0.01f64..1e3) {
        let alpha = a4 as f64 / 4.0;
        let f = product(rational(a4, 4));
        for p in parametrize_product_level(alpha, b, 256).unwrap() {
            prop_assert!((f.value(&p).unwrap() - b).abs() <= 1e-9 * (1.0 + b));
        }
    }
}
