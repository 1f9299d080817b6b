//! Scalar fields on ℝⁿ and their exact second-order jets.
//!
//! A [`ScalarField`] is an immutable expression tree: exact polynomials
//! (planar), pointwise products, outer compositions φ∘f and user-supplied
//! jet rules. Products and compositions assemble the child jets with the
//! product rule and the chain rule for Hessians, so every jet is exact up to
//! floating-point rounding.

mod bounds;
mod jet;
mod matrix;
mod outer;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{BivariatePoly, PolyJet};

pub use bounds::{compose_lambda_lower_bound, product_lambda_lower_bound};
pub use jet::{Jet2, Scalar};
pub use matrix::{rank2_sym_eigs, SymmetricMatrix};
pub use outer::{OuterMap, CONVEXITY_SAMPLES};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        if coords.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        Ok(Point { coords })
    }

    /// Planar point; panics on non-finite input.
    pub fn xy(x: f64, y: f64) -> Self {
        Point::new(vec![x, y]).expect("finite planar point")
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn x(&self) -> f64 {
        self.coords[0]
    }

    pub fn y(&self) -> f64 {
        self.coords[1]
    }

    pub fn distance(&self, other: &Point) -> f64 {
        self.coords.iter().zip(&other.coords).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|a| a * a).sum::<f64>().sqrt()
    }
}

impl std::ops::Deref for Point {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.coords
    }
}

/// A jet rule evaluated on seeded coordinate jets.
pub type JetRule = Arc<dyn Fn(&[Jet2]) -> Result<Jet2> + Send + Sync>;

#[derive(Clone)]
pub struct ScalarField {
    node: Arc<Node>,
}

enum Node {
    Polynomial { poly: PolyJet, label: Option<String> },
    Product(ScalarField, ScalarField),
    Compose(OuterMap, ScalarField),
    Rule { dim: usize, label: String, rule: JetRule },
}

impl ScalarField {
    fn from_node(node: Node) -> Self {
        ScalarField { node: Arc::new(node) }
    }

    pub fn polynomial(poly: BivariatePoly) -> Self {
        Self::from_node(Node::Polynomial { poly: PolyJet::new(poly), label: None })
    }

    /// A polynomial carrying a family name such as `cassini(1)`.
    pub fn named_family(label: impl Into<String>, poly: BivariatePoly) -> Self {
        Self::from_node(Node::Polynomial { poly: PolyJet::new(poly), label: Some(label.into()) })
    }

    pub fn from_rule(dim: usize, label: impl Into<String>, rule: JetRule) -> Self {
        Self::from_node(Node::Rule { dim, label: label.into(), rule })
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        Self::from_rule(dim, format!("{c}"), Arc::new(move |v| Ok(Jet2::constant(v.len(), c))))
    }

    pub fn coordinate(dim: usize, index: usize) -> Self {
        assert!(index < dim);
        Self::from_rule(dim, format!("x{index}"), Arc::new(move |v| Ok(v[index].clone())))
    }

    /// Σ w_i x_i + offset
    pub fn linear(weights: Vec<f64>, offset: f64) -> Self {
        let dim = weights.len();
        Self::from_rule(
            dim,
            format!("linear({weights:?},{offset})"),
            Arc::new(move |v| {
                let mut acc = Jet2::constant(v.len(), offset);
                for (w, xi) in weights.iter().zip(v) {
                    acc = &acc + &xi.scale(w);
                }
                Ok(acc)
            }),
        )
    }

    /// xᵀ A x / 2 + bᵀx with symmetric A given by rows.
    pub fn quadratic(a: Vec<Vec<f64>>, b: Vec<f64>) -> Self {
        let dim = b.len();
        Self::from_rule(
            dim,
            "quadratic".to_string(),
            Arc::new(move |v| {
                let n = v.len();
                let mut acc = Jet2::constant(n, 0.0);
                for i in 0..n {
                    acc = &acc + &v[i].scale(&b[i]);
                    for j in 0..n {
                        acc = &acc + &(&v[i] * &v[j]).scale(&(0.5 * a[i][j]));
                    }
                }
                Ok(acc)
            }),
        )
    }

    /// Pointwise product f·g.
    pub fn product(f: &ScalarField, g: &ScalarField) -> Result<Self> {
        if f.dim() != g.dim() {
            return Err(Error::DimensionMismatch { expected: f.dim(), got: g.dim() });
        }
        Ok(Self::from_node(Node::Product(f.clone(), g.clone())))
    }

    /// Outer composition φ∘f.
    pub fn compose(phi: OuterMap, f: &ScalarField) -> Self {
        Self::from_node(Node::Compose(phi, f.clone()))
    }

    /// f^m as an outer composition.
    pub fn power(f: &ScalarField, m: i32) -> Self {
        Self::compose(OuterMap::power(m), f)
    }

    pub fn dim(&self) -> usize {
        match &*self.node {
            Node::Polynomial { .. } => 2,
            Node::Product(f, _) => f.dim(),
            Node::Compose(_, f) => f.dim(),
            Node::Rule { dim, .. } => *dim,
        }
    }

    /// The exact polynomial when the field is a polynomial or a product of
    /// polynomials.
    pub fn exact_polynomial(&self) -> Option<BivariatePoly> {
        match &*self.node {
            Node::Polynomial { poly, .. } => Some(poly.exact().clone()),
            Node::Product(f, g) => Some(&f.exact_polynomial()? * &g.exact_polynomial()?),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match &*self.node {
            Node::Polynomial { poly, label } => label.clone().unwrap_or_else(|| poly.exact().to_string()),
            Node::Product(f, g) => format!("prod({},{})", f.label(), g.label()),
            Node::Compose(phi, f) => format!("compose({},{})", phi.name(), f.label()),
            Node::Rule { label, .. } => label.clone(),
        }
    }

    fn check_dim(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: p.len() });
        }
        Ok(())
    }

    /// Value, gradient and Hessian at `p`.
    pub fn jet(&self, p: &[f64]) -> Result<Jet2> {
        self.check_dim(p)?;
        self.jet_unchecked(p)
    }

    fn jet_unchecked(&self, p: &[f64]) -> Result<Jet2> {
        match &*self.node {
            Node::Polynomial { poly, .. } => Ok(poly.jet(p[0], p[1])),
            Node::Product(f, g) => Ok(f.jet_unchecked(p)?.product(&g.jet_unchecked(p)?)),
            Node::Compose(phi, f) => {
                let inner = f.jet_unchecked(p)?;
                let (d0, d1, d2) = phi.derivatives(inner.value)?;
                Ok(inner.compose(d0, d1, d2))
            }
            Node::Rule { rule, .. } => rule(&Jet2::variables(p)),
        }
    }

    /// Value only; cheaper than [`ScalarField::jet`] for polynomial leaves.
    pub fn value(&self, p: &[f64]) -> Result<f64> {
        self.check_dim(p)?;
        self.value_unchecked(p)
    }

    fn value_unchecked(&self, p: &[f64]) -> Result<f64> {
        match &*self.node {
            Node::Polynomial { poly, .. } => Ok(poly.value(p[0], p[1])),
            Node::Product(f, g) => Ok(f.value_unchecked(p)? * g.value_unchecked(p)?),
            Node::Compose(phi, f) => phi.value(f.value_unchecked(p)?),
            Node::Rule { rule, .. } => Ok(rule(&Jet2::variables(p))?.value),
        }
    }

    /// Planar value for hot loops; errors map to NaN.
    pub fn value_xy(&self, x: f64, y: f64) -> f64 {
        match &*self.node {
            Node::Polynomial { poly, .. } => poly.value(x, y),
            _ => self.value(&[x, y]).unwrap_or(f64::NAN),
        }
    }
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarField({}; dim {})", self.label(), self.dim())
    }
}

/// The 2×n Jacobian of f⊕g: x ↦ (f(x), g(x)).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectSumJacobian {
    pub rows: [Vec<f64>; 2],
}

impl DirectSumJacobian {
    /// Singular values σ₁ ≥ σ₂ of the 2×n matrix. σ₁σ₂ is the norm of the
    /// wedge u∧v, computed from the 2×2 minors to avoid cancellation.
    pub fn singular_values(&self) -> (f64, f64) {
        let (u, v) = (&self.rows[0], &self.rows[1]);
        let uu: f64 = u.iter().map(|a| a * a).sum();
        let vv: f64 = v.iter().map(|a| a * a).sum();
        let uv: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
        let mut wedge = 0.0;
        for i in 0..u.len() {
            for j in (i + 1)..u.len() {
                let m = u[i] * v[j] - u[j] * v[i];
                wedge += m * m;
            }
        }
        let wedge = wedge.sqrt();
        let (_, big) = matrix::eig2(uu, uv, vv);
        let s1 = big.max(0.0).sqrt();
        let s2 = if s1 > 0.0 { wedge / s1 } else { 0.0 };
        (s1, s2)
    }

    pub fn max_row_norm(&self) -> f64 {
        self.rows.iter().map(|r| r.iter().map(|a| a * a).sum::<f64>().sqrt()).fold(0.0, f64::max)
    }

    /// Scale-aware threshold 1e−9·(1 + max row norm).
    pub fn default_rank_tolerance(&self) -> f64 {
        1e-9 * (1.0 + self.max_row_norm())
    }

    pub fn rank(&self, tau: f64) -> usize {
        let (s1, s2) = self.singular_values();
        (s1 > tau) as usize + (s2 > tau) as usize
    }
}

pub fn direct_sum_jacobian(f: &ScalarField, g: &ScalarField, p: &[f64]) -> Result<DirectSumJacobian> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), got: g.dim() });
    }
    let jf = f.jet(p)?;
    let jg = g.jet(p)?;
    Ok(DirectSumJacobian { rows: [jf.gradient, jg.gradient] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{integer, FamilySpec};
    use std::f64::consts::E;

    fn cassini1() -> ScalarField {
        ScalarField::polynomial(FamilySpec::cassini(integer(1)).build().unwrap())
    }

    fn anti1() -> ScalarField {
        ScalarField::polynomial(FamilySpec::anti_cassini(integer(1)).build().unwrap())
    }

    fn paraboloid() -> ScalarField {
        ScalarField::polynomial("x^2 + y^2".parse().unwrap())
    }

    #[test]
    fn cassini_critical_gradient() {
        let j = cassini1().jet(&[1.0, 0.0]).unwrap();
        assert_eq!(j.gradient, vec![0.0, 0.0]);
    }

    #[test]
    fn cassini_origin_hessian() {
        let j = cassini1().jet(&[0.0, 0.0]).unwrap();
        assert_eq!(*j.hessian.get(0, 0), -4.0);
        assert_eq!(*j.hessian.get(0, 1), 0.0);
        assert_eq!(*j.hessian.get(1, 1), 4.0);
    }

    #[test]
    fn constant_field_has_zero_derivatives() {
        let c = ScalarField::constant(3, 2.5);
        let j = c.jet(&[1.0, -2.0, 0.3]).unwrap();
        assert_eq!(j.value, 2.5);
        assert!(j.gradient.iter().all(|g| *g == 0.0));
        assert!(j.hessian.packed().iter().all(|h| *h == 0.0));
    }

    #[test]
    fn product_of_coordinates() {
        let x = ScalarField::coordinate(2, 0);
        let j = ScalarField::product(&x, &x).unwrap().jet(&[3.0, 1.0]).unwrap();
        assert_eq!(j.value, 9.0);
        assert_eq!(j.gradient, vec![6.0, 0.0]);
        assert_eq!(j.hessian.packed(), &[2.0, 0.0, 0.0]);
    }

    #[test]
    fn product_value_at_one_one() {
        let fg = ScalarField::product(&cassini1(), &anti1()).unwrap();
        assert_eq!(fg.value(&[1.0, 1.0]).unwrap(), 16.0);
    }

    #[test]
    fn dimension_mismatch() {
        let a = ScalarField::coordinate(3, 0);
        assert!(matches!(ScalarField::product(&a, &cassini1()), Err(Error::DimensionMismatch { .. })));
        assert!(cassini1().jet(&[1.0]).is_err());
    }

    #[test]
    fn compose_identity_is_transparent() {
        let f = cassini1();
        let g = ScalarField::compose(OuterMap::identity(), &f);
        for p in [[0.3, -0.7], [1.5, 2.0]] {
            assert_eq!(f.jet(&p).unwrap(), g.jet(&p).unwrap());
        }
    }

    #[test]
    fn compose_exp_paraboloid() {
        let g = ScalarField::compose(OuterMap::Exp, &paraboloid());
        let j = g.jet(&[1.0, 0.0]).unwrap();
        assert!((j.gradient[0] - 2.0 * E).abs() < 1e-14);
        assert_eq!(j.gradient[1], 0.0);
        assert!((*j.hessian.get(0, 0) - 6.0 * E).abs() < 1e-13);
        assert_eq!(*j.hessian.get(0, 1), 0.0);
        // φ'·H(f) contributes 2e in the yy slot
        assert!((*j.hessian.get(1, 1) - 2.0 * E).abs() < 1e-13);
    }

    #[test]
    fn compose_affine_scales_hessian() {
        let f = cassini1();
        let g = ScalarField::compose(OuterMap::affine(2.0, 3.0), &f);
        let (jf, jg) = (f.jet(&[0.4, 0.9]).unwrap(), g.jet(&[0.4, 0.9]).unwrap());
        for (a, b) in jf.hessian.packed().iter().zip(jg.hessian.packed()) {
            assert_eq!(2.0 * a, *b);
        }
    }

    #[test]
    fn power_domain_error_propagates() {
        let f = ScalarField::compose(OuterMap::Power { exponent: 2, positive_domain: true }, &cassini1());
        assert!(matches!(f.jet(&[0.0, 0.0]), Err(Error::Domain { .. })));
    }

    #[test]
    fn direct_sum_examples() {
        let x = ScalarField::coordinate(2, 0);
        let y = ScalarField::coordinate(2, 1);
        let j = direct_sum_jacobian(&x, &y, &[0.2, 5.0]).unwrap();
        assert_eq!(j.rows, [vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(j.rank(j.default_rank_tolerance()), 2);

        let f = cassini1();
        let jff = direct_sum_jacobian(&f, &f, &[0.3, 1.1]).unwrap();
        assert!(jff.rank(jff.default_rank_tolerance()) <= 1);

        let jfg = direct_sum_jacobian(&f, &anti1(), &[1.0, 1.0]).unwrap();
        assert_eq!(jfg.rows, [vec![4.0, 12.0], vec![12.0, 4.0]]);
    }

    #[test]
    fn point_rejects_non_finite() {
        assert!(matches!(Point::new(vec![1.0, f64::NAN]), Err(Error::NonFinite(1))));
        assert_eq!(Point::xy(3.0, 4.0).norm(), 5.0);
    }
}
