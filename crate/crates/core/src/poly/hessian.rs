use serde::Serialize;

use super::{Axis, BivariatePoly};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymbolicHessian {
    pub fxx: BivariatePoly,
    pub fxy: BivariatePoly,
    pub fyy: BivariatePoly,
}

pub fn symbolic_hessian(p: &BivariatePoly) -> SymbolicHessian {
    let dx = p.partial(Axis::X);
    let dy = p.partial(Axis::Y);
    SymbolicHessian { fxx: dx.partial(Axis::X), fxy: dx.partial(Axis::Y), fyy: dy.partial(Axis::Y) }
}

pub fn trace_hessian(p: &BivariatePoly) -> BivariatePoly {
    let h = symbolic_hessian(p);
    &h.fxx + &h.fyy
}

pub fn det_hessian(p: &BivariatePoly) -> BivariatePoly {
    let h = symbolic_hessian(p);
    &(&h.fxx * &h.fyy) - &(&h.fxy * &h.fxy)
}

/// The bordered determinant
///
/// ```text
/// | fxx fxy fx |
/// | fxy fyy fy | = 2 fx fy fxy − fx² fyy − fy² fxx
/// | fx  fy  0  |
/// ```
///
/// which is negative along a regular level curve lying in the region where
/// the Hessian is positive definite.
pub fn convexity_det(p: &BivariatePoly) -> BivariatePoly {
    let fx = p.partial(Axis::X);
    let fy = p.partial(Axis::Y);
    let h = symbolic_hessian(p);
    let two = BivariatePoly::constant(super::integer(2));
    let cross = &(&(&two * &fx) * &fy) * &h.fxy;
    let xx = &(&fx * &fx) * &h.fyy;
    let yy = &(&fy * &fy) * &h.fxx;
    &(&cross - &xx) - &yy
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{integer, FamilySpec};

    fn s() -> BivariatePoly {
        BivariatePoly::radius_sq()
    }
    fn t() -> BivariatePoly {
        BivariatePoly::hyperbolic()
    }
    fn k(n: i64) -> BivariatePoly {
        BivariatePoly::constant(integer(n))
    }

    fn f1g1() -> BivariatePoly {
        FamilySpec::product(vec![FamilySpec::cassini(integer(1)), FamilySpec::anti_cassini(integer(1))])
            .build()
            .unwrap()
    }

    #[test]
    fn paraboloid() {
        let p = s();
        assert_eq!(det_hessian(&p), k(4));
        assert_eq!(trace_hessian(&p), k(4));
        assert_eq!(convexity_det(&p), &k(-8) * &s());
    }

    #[test]
    fn linear_has_zero_convexity_det() {
        let p: BivariatePoly = "3*x - 2*y + 5".parse().unwrap();
        assert!(convexity_det(&p).is_zero());
    }

    #[test]
    fn product_trace_closed_form() {
        // 64 s³ − 32 s
        let want = &(&k(64) * &s().pow(3)) - &(&k(32) * &s());
        assert_eq!(trace_hessian(&f1g1()), want);
    }

    #[test]
    fn product_det_closed_form() {
        // 64 (7 s⁶ − 12 t² − 28 s⁴ + 36 s² t²)
        let inner = &(&(&(&k(7) * &s().pow(6)) - &(&k(12) * &t().pow(2))) - &(&k(28) * &s().pow(4)))
            + &(&(&k(36) * &s().pow(2)) * &t().pow(2));
        assert_eq!(det_hessian(&f1g1()), &k(64) * &inner);
    }

    #[test]
    fn convexity_det_on_product_levels() {
        // D(fg) ≡ −2⁸[3s⁸ + 5F s⁶ − 12F s⁴ − 3F² s² + F²] with F = f₁g₁
        let f = f1g1();
        let bracket = &(&(&(&(&k(3) * &s().pow(8)) + &(&(&k(5) * &f) * &s().pow(6)))
            - &(&(&k(12) * &f) * &s().pow(4)))
            - &(&(&k(3) * &f.pow(2)) * &s().pow(2)))
            + &f.pow(2);
        assert_eq!(convexity_det(&f), &k(-256) * &bracket);
    }
}
