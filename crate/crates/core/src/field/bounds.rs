//! Lower bounds on λ(H) for products and outer compositions.

use super::{rank2_sym_eigs, OuterMap, ScalarField};
use crate::error::{Error, Result};

/// f(p)λ(H_p g) + g(p)λ(H_p f) + λ((∇f)ᵀ∇g + (∇g)ᵀ∇f), valid when f(p), g(p) ≥ 0.
///
/// Never exceeds λ(H_p(fg)) since λ is superadditive and λ(cA) = cλ(A) for c ≥ 0.
pub fn product_lambda_lower_bound(f: &ScalarField, g: &ScalarField, p: &[f64]) -> Result<f64> {
    let jf = f.jet(p)?;
    let jg = g.jet(p)?;
    if jf.value < 0.0 || jg.value < 0.0 {
        return Err(Error::Precondition(format!(
            "product bound needs f(p), g(p) ≥ 0 (got {}, {})",
            jf.value, jg.value
        )));
    }
    let (lam, _) = rank2_sym_eigs(&jf.gradient, &jg.gradient);
    Ok(jf.value * jg.hessian.lambda_min() + jg.value * jf.hessian.lambda_min() + lam)
}

/// φ'(f(p))·λ(H_p f) for convex increasing φ.
pub fn compose_lambda_lower_bound(phi: &OuterMap, f: &ScalarField, p: &[f64]) -> Result<f64> {
    let jf = f.jet(p)?;
    let (_, d1, d2) = phi.derivatives(jf.value)?;
    if d1 < 0.0 || d2 < 0.0 {
        return Err(Error::Precondition(format!(
            "{} is not convex increasing at {} (φ' = {d1}, φ'' = {d2})",
            phi.name(),
            jf.value
        )));
    }
    Ok(d1 * jf.hessian.lambda_min())
}
