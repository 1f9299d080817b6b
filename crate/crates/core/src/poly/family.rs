//! The polynomial families f(x,y) = P(x²+y²) + p(x,y).
//!
//! Cassini-type members: f_a = (x²+y²)² − 2α(x²−y²) and its mirror
//! g_a = (x²+y²)² + 2α(x²−y²), with α = a² kept exact.

use std::fmt;

use num::{BigRational, Signed, Zero};

use super::{integer, BivariatePoly};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    Cassini(BigRational),
    AntiCassini(BigRational),
    RadialPlus(RadialPoly),
    Product(Vec<FamilySpec>),
}

/// P(x²+y²) + p(x,y) with P given by ascending coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialPoly {
    pub radial: Vec<BigRational>,
    pub rest: BivariatePoly,
}

impl RadialPoly {
    pub fn new(radial: Vec<BigRational>, rest: BivariatePoly) -> Self {
        let mut radial = radial;
        while radial.last().is_some_and(|c| c.is_zero()) {
            radial.pop();
        }
        RadialPoly { radial, rest }
    }

    /// deg P, or `None` when P = 0.
    pub fn radial_degree(&self) -> Option<usize> {
        self.radial.iter().rposition(|c| !c.is_zero())
    }

    /// The leading coefficient a₀ of P.
    pub fn leading_coefficient(&self) -> Option<&BigRational> {
        self.radial_degree().map(|n| &self.radial[n])
    }

    /// Checks nonnegative coefficients of P, deg P ≥ 1 and 2·deg P > deg p ≥ 2.
    pub fn validate(&self) -> Result<()> {
        if let Some(k) = self.radial.iter().position(|c| c.is_negative()) {
            return Err(Error::Family(format!("coefficient of z^{k} in P is negative ({})", self.radial[k])));
        }
        let n = match self.radial_degree() {
            Some(n) if n >= 1 => n,
            _ => return Err(Error::Family("deg P must be at least 1".into())),
        };
        let dp = self.rest.degree().unwrap_or(0) as usize;
        if self.rest.degree().is_none() || dp < 2 {
            return Err(Error::Family(format!("deg p must be at least 2 (got {dp})")));
        }
        if 2 * n <= dp {
            return Err(Error::Family(format!("2·deg P > deg p violated (deg P = {n}, deg p = {dp})")));
        }
        Ok(())
    }

    pub fn to_poly(&self) -> BivariatePoly {
        &BivariatePoly::radial(&self.radial) + &self.rest
    }

    /// (PQ)(s) + P(s)q + Q(s)p + pq, the constructive product decomposition.
    pub fn product(&self, other: &RadialPoly) -> RadialPoly {
        let mut pq = vec![BigRational::zero(); self.radial.len() + other.radial.len()];
        for (i, a) in self.radial.iter().enumerate() {
            for (j, b) in other.radial.iter().enumerate() {
                pq[i + j] += a * b;
            }
        }
        let p_s = BivariatePoly::radial(&self.radial);
        let q_s = BivariatePoly::radial(&other.radial);
        let rest = &(&(&p_s * &other.rest) + &(&q_s * &self.rest)) + &(&self.rest * &other.rest);
        RadialPoly::new(pq, rest)
    }
}

impl FamilySpec {
    pub fn cassini(alpha: BigRational) -> Self {
        FamilySpec::Cassini(alpha)
    }

    pub fn anti_cassini(alpha: BigRational) -> Self {
        FamilySpec::AntiCassini(alpha)
    }

    pub fn radial_plus(radial: Vec<BigRational>, rest: BivariatePoly) -> Self {
        FamilySpec::RadialPlus(RadialPoly::new(radial, rest))
    }

    pub fn product(factors: Vec<FamilySpec>) -> Self {
        FamilySpec::Product(factors)
    }

    /// The P(s) + p decomposition; products combine constructively.
    pub fn radial_parts(&self) -> Result<RadialPoly> {
        match self {
            FamilySpec::Cassini(alpha) | FamilySpec::AntiCassini(alpha) => {
                if !alpha.is_positive() {
                    return Err(Error::Family(format!("alpha must be positive (got {alpha})")));
                }
                let sign = if matches!(self, FamilySpec::Cassini(_)) { -2 } else { 2 };
                let rest = BivariatePoly::hyperbolic().scale(&(integer(sign) * alpha));
                Ok(RadialPoly::new(vec![integer(0), integer(0), integer(1)], rest))
            }
            FamilySpec::RadialPlus(r) => Ok(r.clone()),
            FamilySpec::Product(factors) => {
                let mut iter = factors.iter();
                let first = iter.next().ok_or_else(|| Error::Family("empty product".into()))?.radial_parts()?;
                iter.try_fold(first, |acc, f| Ok(acc.product(&f.radial_parts()?)))
            }
        }
    }

    /// Validates every factor and returns the exact polynomial.
    pub fn build(&self) -> Result<BivariatePoly> {
        match self {
            FamilySpec::Product(factors) => {
                if factors.is_empty() {
                    return Err(Error::Family("empty product".into()));
                }
                let mut acc = BivariatePoly::one();
                for f in factors {
                    acc = &acc * &f.build()?;
                }
                Ok(acc)
            }
            _ => {
                let parts = self.radial_parts()?;
                parts.validate()?;
                Ok(parts.to_poly())
            }
        }
    }

    /// Short label, e.g. `prod(cassini(1),anti(1))`.
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Cassini(a) => write!(f, "cassini({a})"),
            FamilySpec::AntiCassini(a) => write!(f, "anti({a})"),
            FamilySpec::RadialPlus(r) => {
                let p: Vec<String> = r.radial.iter().map(|c| c.to_string()).collect();
                write!(f, "radial(P=[{}], p={})", p.join(","), r.rest)
            }
            FamilySpec::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(|x| x.to_string()).collect();
                write!(f, "prod({})", parts.join(","))
            }
        }
    }
}

/// Splits an arbitrary polynomial into P(x²+y²) + p(x,y), taking into P
/// every even-degree homogeneous component that is exactly c·(x²+y²)^k with
/// c ≥ 0. Returns `None` when the top component is not of that form, in
/// which case no split with 2·deg P > deg p exists.
pub fn radial_decomposition(poly: &BivariatePoly) -> Option<RadialPoly> {
    let top = poly.degree()?;
    if top % 2 != 0 {
        return None;
    }
    let mut radial = vec![BigRational::zero(); (top / 2 + 1) as usize];
    let mut rest = BivariatePoly::zero();
    for d in 0..=top {
        let part = poly.homogeneous_part(d);
        if part.is_zero() {
            continue;
        }
        let k = d / 2;
        let c = part.coefficient(d, 0);
        let is_radial = d % 2 == 0 && !c.is_negative() && part == BivariatePoly::radius_sq().pow(k).scale(&c);
        if is_radial {
            radial[k as usize] = c;
        } else if d == top {
            return None;
        } else {
            rest = &rest + &part;
        }
    }
    if radial.last().is_none_or(|c| c.is_zero()) {
        return None;
    }
    Some(RadialPoly::new(radial, rest))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rational, Monomial};

    #[test]
    fn cassini_coefficients() {
        let p = FamilySpec::cassini(integer(1)).build().unwrap();
        let want = BivariatePoly::from_terms([
            (Monomial::new(4, 0), integer(1)),
            (Monomial::new(2, 2), integer(2)),
            (Monomial::new(0, 4), integer(1)),
            (Monomial::new(2, 0), integer(-2)),
            (Monomial::new(0, 2), integer(2)),
        ]);
        assert_eq!(p, want);
        let g = FamilySpec::anti_cassini(integer(1)).build().unwrap();
        assert_eq!(g.coefficient(2, 0), integer(2));
        assert_eq!(g.coefficient(0, 2), integer(-2));
    }

    #[test]
    fn radial_plus_reproduces_cassini() {
        let rest: BivariatePoly = "2*y^2 - 2*x^2".parse().unwrap();
        let spec = FamilySpec::radial_plus(vec![integer(0), integer(0), integer(1)], rest);
        assert_eq!(spec.build().unwrap(), FamilySpec::cassini(integer(1)).build().unwrap());
    }

    #[test]
    fn violated_clauses_are_named() {
        let bad_degree = FamilySpec::radial_plus(vec![integer(0), integer(1)], "x^2 + y^2 + x*y".parse().unwrap());
        let e = bad_degree.build().unwrap_err();
        assert!(e.to_string().contains("2·deg P > deg p"), "{e}");

        let negative = FamilySpec::radial_plus(vec![integer(0), integer(-1), integer(1)], "x*y".parse().unwrap());
        assert!(negative.build().unwrap_err().to_string().contains("negative"));

        let low_rest = FamilySpec::radial_plus(vec![integer(0), integer(0), integer(1)], "x".parse().unwrap());
        assert!(low_rest.build().unwrap_err().to_string().contains("at least 2"));

        assert!(FamilySpec::cassini(integer(0)).build().is_err());
    }

    #[test]
    fn product_parts_match_product_poly() {
        let spec = FamilySpec::product(vec![FamilySpec::cassini(rational(1, 2)), FamilySpec::anti_cassini(integer(3))]);
        let parts = spec.radial_parts().unwrap();
        parts.validate().unwrap();
        assert_eq!(parts.to_poly(), spec.build().unwrap());
        assert_eq!(parts.radial_degree(), Some(4));
    }

    #[test]
    fn decomposition_of_cassini_product() {
        let p = FamilySpec::product(vec![FamilySpec::cassini(integer(1)), FamilySpec::anti_cassini(integer(1))])
            .build()
            .unwrap();
        let d = radial_decomposition(&p).unwrap();
        assert_eq!(d.radial_degree(), Some(4));
        assert_eq!(d.leading_coefficient(), Some(&integer(1)));
        // rest is −4t²
        assert_eq!(d.rest, BivariatePoly::hyperbolic().pow(2).scale(&integer(-4)));
        d.validate().unwrap();
        assert_eq!(d.to_poly(), p);
    }

    #[test]
    fn decomposition_rejects_non_radial_top() {
        let p: BivariatePoly = "x^4 + y^2".parse().unwrap();
        assert!(radial_decomposition(&p).is_none());
        let odd: BivariatePoly = "x^3 + y".parse().unwrap();
        assert!(radial_decomposition(&odd).is_none());
    }
}
