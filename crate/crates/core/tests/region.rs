use hessplus::field::SymmetricMatrix;
use hessplus::levelset::{convexity_det_value, parametrize_product_level};
use hessplus::poly::{integer, rational, BivariatePoly, FamilySpec, Monomial};
use hessplus::region::{
    certify_complement_bounded, hess_plus_contains, verdict_for_hessian, CertificateStatus, Membership,
};
use hessplus::ScalarField;
use proptest::prelude::*;

fn sym2() -> impl Strategy<Value = SymmetricMatrix> {
    (-5.0f64..5.0, -5.0f64..5.0, -5.0f64..5.0)
        .prop_map(|(a, b, c)| SymmetricMatrix::from_rows(&[vec![a, b], vec![b, c]]))
}

fn rank(m: Membership) -> u8 {
    match m {
        Membership::Out => 0,
        Membership::BoundaryWithinTolerance => 1,
        Membership::In => 2,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn trace_det_agrees_with_lambda(h in sym2()) {
        let lam = h.lambda_min();
        prop_assume!(lam.abs() > 1e-9 * (1.0 + h.norm_inf()));
        let v = verdict_for_hessian(&h, 0.0);
        prop_assert_eq!(v.status == Membership::In, lam > 0.0);
    }

    #[test]
    fn membership_is_monotone_in_tolerance(h in sym2(), t1 in 0.0f64..1.0, dt in 0.0f64..1.0) {
        // Raising tol can only move In to boundary and Out to boundary.
        let (lo, hi) = (verdict_for_hessian(&h, t1).status, verdict_for_hessian(&h, t1 + dt).status);
        if hi == Membership::In {
            prop_assert_eq!(lo, Membership::In);
        }
        if lo == Membership::Out {
            prop_assert_ne!(hi, Membership::In);
        }
        prop_assert!(rank(hi) <= rank(lo).max(1));
    }

    #[test]
    fn restricted_determinant_identity(b in 0.1f64..400.0, k in 0usize..64) {
        // On the b-level of f₁g₁, D = −2⁸[3s⁸+5bs⁶−12bs⁴−3b²s²+b²].
        let f = ScalarField::polynomial(
            FamilySpec::product(vec![FamilySpec::cassini(integer(1)), FamilySpec::anti_cassini(integer(1))]).build().unwrap(),
        );
        let p = &parametrize_product_level(1.0, b, 64).unwrap()[k];
        let s = p.x() * p.x() + p.y() * p.y();
        let terms = [3.0 * s.powi(8), 5.0 * b * s.powi(6), -12.0 * b * s.powi(4), -3.0 * b * b * s * s, b * b];
        let want = -256.0 * terms.iter().sum::<f64>();
        let scale = 256.0 * terms.iter().map(|t| t.abs()).sum::<f64>();
        let got = convexity_det_value(&f.jet(p).unwrap());
        prop_assert!((got - want).abs() <= 1e-9 * scale, "{got} vs {want}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn certified_radius_is_sound(
        a4 in 1i64..12,
        anti in any::<bool>(),
        c0 in 0i64..4,
        rest in prop::collection::vec((0u32..=3, 0u32..=3, -4i64..=4), 1..4),
        radial in any::<bool>(),
        angles in prop::collection::vec(0.0f64..std::f64::consts::TAU, 64),
    ) {
        let spec = if radial {
            let mut p = BivariatePoly::from_terms(
                rest.into_iter().filter(|(i, j, _)| (2..=3).contains(&(i + j))).map(|(i, j, c)| (Monomial::new(i, j), integer(c))),
            );
            if p.degree().unwrap_or(0) < 2 {
                p = BivariatePoly::x().pow(2);
            }
            FamilySpec::radial_plus(vec![integer(c0), integer(0), integer(1)], p)
        } else if anti {
            FamilySpec::anti_cassini(rational(a4, 4))
        } else {
            FamilySpec::cassini(rational(a4, 4))
        };
        let cert = certify_complement_bounded(&spec).unwrap();
        prop_assert_eq!(cert.status, CertificateStatus::Certified);
        prop_assert!(cert.margin.trace > 0.0 && cert.margin.det > 0.0);
        let f = ScalarField::polynomial(spec.build().unwrap());
        for (k, th) in angles.iter().enumerate() {
            let r = cert.radius * (1.0 + k as f64 / 8.0);
            let v = hess_plus_contains(&f, &[r * th.cos(), r * th.sin()], 0.0).unwrap();
            prop_assert_eq!(v.status, Membership::In, "r={} theta={}", r, th);
        }
    }
}
