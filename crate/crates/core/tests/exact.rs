use hessplus::levelset::convexity_det_value;
use hessplus::poly::{
    convexity_det, det_hessian, integer, rational, symbolic_hessian, trace_hessian, BivariatePoly, FamilySpec, Monomial,
};
use hessplus::region::{hess_plus_contains, Membership};
use hessplus::ScalarField;
use num::ToPrimitive;
use proptest::prelude::*;

fn poly_strategy() -> impl Strategy<Value = BivariatePoly> {
    prop::collection::vec((0u32..=5, 0u32..=5, -20i64..=20, 1i64..=7), 0..8).prop_map(|terms| {
        BivariatePoly::from_terms(terms.into_iter().map(|(i, j, n, d)| (Monomial::new(i, j), rational(n, d))))
    })
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= 1e-10 * (1.0 + scale)
}

#[test]
fn cassini_trace_and_det_closed_forms() {
    // tr = 16s, det = 16(3s² + 2αt − α²)
    for alpha in [rational(1, 4), integer(1), integer(3)] {
        let f = FamilySpec::cassini(alpha.clone()).build().unwrap();
        let (s, t) = (BivariatePoly::radius_sq(), BivariatePoly::hyperbolic());
        assert_eq!(trace_hessian(&f), s.scale(&integer(16)));
        let inner = &(&s.pow(2).scale(&integer(3)) + &t.scale(&(integer(2) * &alpha)))
            - &BivariatePoly::constant(&alpha * &alpha);
        assert_eq!(det_hessian(&f), inner.scale(&integer(16)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn display_round_trips(p in poly_strategy()) {
        let text = p.to_string();
        let back: BivariatePoly = text.parse().unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn symbolic_hessian_matches_jets(p in poly_strategy(), x in -1.5f64..1.5, y in -1.5f64..1.5) {
        let h = symbolic_hessian(&p);
        let j = ScalarField::polynomial(p.clone()).jet(&[x, y]).unwrap();
        let scale = p.max_abs_coefficient() * 3f64.powi(10);
        prop_assert!(close(h.fxx.eval(x, y), *j.hessian.get(0, 0), scale));
        prop_assert!(close(h.fxy.eval(x, y), *j.hessian.get(0, 1), scale));
        prop_assert!(close(h.fyy.eval(x, y), *j.hessian.get(1, 1), scale));
        prop_assert!(close(det_hessian(&p).eval(x, y), j.hessian.determinant_2x2(), scale * scale));
    }

    #[test]
    fn exact_evaluation_agrees(p in poly_strategy(), n in -40i64..40, m in -40i64..40) {
        let (x, y) = (rational(n, 16), rational(m, 16));
        let exact = p.eval_exact(&x, &y).to_f64().unwrap();
        let float = p.eval(n as f64 / 16.0, m as f64 / 16.0);
        prop_assert!(close(exact, float, p.max_abs_coefficient() * 3f64.powi(10)));
    }

    #[test]
    fn convexity_det_identity(p in poly_strategy(), x in -1.5f64..1.5, y in -1.5f64..1.5) {
        // D = 2 fx fy fxy − fx² fyy − fy² fxx, symbolically and from jets.
        let d = convexity_det(&p).eval(x, y);
        let jd = convexity_det_value(&ScalarField::polynomial(p.clone()).jet(&[x, y]).unwrap());
        let scale = (p.max_abs_coefficient() * 3f64.powi(10)).powi(3);
        prop_assert!(close(d, jd, scale));
    }

    #[test]
    fn cassini_membership_matches_closed_form(a4 in 1i64..12, x in -2.5f64..2.5, y in -2.5f64..2.5) {
        let alpha = a4 as f64 / 4.0;
        let f = ScalarField::polynomial(FamilySpec::cassini(rational(a4, 4)).build().unwrap());
        let (s, t) = (x * x + y * y, x * x - y * y);
        let g = 3.0 * s * s + 2.0 * alpha * t - alpha * alpha;
        prop_assume!(g.abs() > 1e-9 * (1.0 + alpha * alpha) && s > 1e-12);
        let got = hess_plus_contains(&f, &[x, y], 0.0).unwrap().status;
        prop_assert_eq!(got == Membership::In, g > 0.0);
    }
}
