use crate::error::{Error, Result};
use crate::field::Point;

/// m points of the level f_a·g_a = b (b > 0) as images of the unit circle.
///
/// With α = a², w = v² − u² and s = ρ², the level equation reads
/// ρ⁸ − 4α²w²ρ⁴ = b, so ρ⁴ = 2α²w² + √(4α⁴w⁴ + b).
pub fn parametrize_product_level(alpha: f64, b: f64, m: usize) -> Result<Vec<Point>> {
    if !(b > 0.0) {
        return Err(Error::Precondition(format!("level b must be positive (got {b})")));
    }
    if !(alpha > 0.0) {
        return Err(Error::Precondition(format!("alpha must be positive (got {alpha})")));
    }
    if m < 3 {
        return Err(Error::Precondition(format!("need at least 3 samples (got {m})")));
    }
    Ok((0..m)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / m as f64;
            let (v, u) = theta.sin_cos();
            let w = v * v - u * u;
            let aw2 = alpha * alpha * w * w;
            let q = 2.0 * aw2 + (4.0 * aw2 * aw2 + b).sqrt();
            let rho = q.sqrt().sqrt();
            Point::xy(rho * u, rho * v)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ScalarField;
    use crate::levelset::tests::f1g1;

    #[test]
    fn axis_point_at_sixteen() {
        let pts = parametrize_product_level(1.0, 16.0, 4).unwrap();
        let want = (2.0 + 20f64.sqrt()).powf(0.25);
        assert!((pts[0].x() - want).abs() < 1e-14 && pts[0].y() == 0.0);
        let f: ScalarField = f1g1();
        assert!((f.value(&pts[0]).unwrap() - 16.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_point() {
        let pts = parametrize_product_level(1.0, 16.0, 8).unwrap();
        let r = 16f64.powf(0.125);
        assert!((pts[1].x() - r * 0.5f64.sqrt()).abs() < 1e-14);
        assert!((pts[1].y() - r * 0.5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn residuals() {
        let f = f1g1();
        for b in [1.0, 16.0, 100.0] {
            for p in parametrize_product_level(1.0, b, 1024).unwrap() {
                assert!((f.value(&p).unwrap() - b).abs() <= 1e-9 * (1.0 + b));
            }
        }
        assert!(parametrize_product_level(1.0, 0.0, 10).is_err());
    }
}
