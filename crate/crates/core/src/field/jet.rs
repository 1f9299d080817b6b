//! Second-order forward-mode jets.
//!
//! A [`Jet2`] carries a value, its gradient and its Hessian with respect to
//! `n` seed coordinates. Arithmetic on jets propagates all three exactly,
//! so evaluating any polynomial expression in jet arithmetic yields the
//! exact second-order Taylor data (exact for rational scalars, machine
//! precision for `f64`).

use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::SymmetricMatrix;

/// Scalar types jets can be built over.
pub trait Scalar:
    Clone + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self> + Send + Sync
{
}

impl<T> Scalar for T where
    T: Clone + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T> + Send + Sync
{
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Jet2<T = f64> {
    pub value: T,
    pub gradient: Vec<T>,
    pub hessian: SymmetricMatrix<T>,
}

impl<T: Scalar> Jet2<T> {
    pub fn constant(dim: usize, value: T) -> Self {
        Jet2 { value, gradient: vec![T::zero(); dim], hessian: SymmetricMatrix::zeros(dim) }
    }

    /// The coordinate function x_i seeded at `value`.
    pub fn variable(dim: usize, index: usize, value: T) -> Self {
        let mut gradient = vec![T::zero(); dim];
        gradient[index] = T::one();
        Jet2 { value, gradient, hessian: SymmetricMatrix::zeros(dim) }
    }

    /// Seeds every coordinate of `point`.
    pub fn variables(point: &[T]) -> Vec<Self> {
        let n = point.len();
        point.iter().enumerate().map(|(i, v)| Self::variable(n, i, v.clone())).collect()
    }

    pub fn dim(&self) -> usize {
        self.gradient.len()
    }

    pub fn scale(&self, k: &T) -> Self {
        Jet2 {
            value: k.clone() * self.value.clone(),
            gradient: self.gradient.iter().map(|g| k.clone() * g.clone()).collect(),
            hessian: self.hessian.map(|h| k.clone() * h.clone()),
        }
    }

    pub fn add_scalar(&self, k: &T) -> Self {
        let mut out = self.clone();
        out.value = out.value + k.clone();
        out
    }

    /// Outer composition φ∘self given φ(v), φ'(v), φ''(v) at v = self.value:
    /// ∇(φ∘f) = φ'∇f and H(φ∘f) = φ'H(f) + φ''(∇f)ᵀ∇f.
    pub fn compose(&self, d0: T, d1: T, d2: T) -> Self {
        let g = &self.gradient;
        Jet2 {
            value: d0,
            gradient: g.iter().map(|gi| d1.clone() * gi.clone()).collect(),
            hessian: SymmetricMatrix::from_fn(self.dim(), |i, j| {
                d1.clone() * self.hessian.get(i, j).clone() + d2.clone() * g[i].clone() * g[j].clone()
            }),
        }
    }

    /// Product rule: H(fg) = f H(g) + g H(f) + (∇f)ᵀ∇g + (∇g)ᵀ∇f.
    pub fn product(&self, other: &Self) -> Self {
        let (f, g) = (&self.value, &other.value);
        let (df, dg) = (&self.gradient, &other.gradient);
        Jet2 {
            value: f.clone() * g.clone(),
            gradient: df.iter().zip(dg).map(|(a, b)| f.clone() * b.clone() + g.clone() * a.clone()).collect(),
            hessian: SymmetricMatrix::from_fn(self.dim(), |i, j| {
                f.clone() * other.hessian.get(i, j).clone()
                    + g.clone() * self.hessian.get(i, j).clone()
                    + df[i].clone() * dg[j].clone()
                    + dg[i].clone() * df[j].clone()
            }),
        }
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.dim(), T::one());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.product(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.product(&base);
            }
        }
        acc
    }
}

impl Jet2<f64> {
    pub fn exp(&self) -> Self {
        let e = self.value.exp();
        self.compose(e, e, e)
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.gradient.iter().all(|g| g.is_finite()) && self.hessian.is_finite()
    }

    pub fn gradient_norm(&self) -> f64 {
        self.gradient.iter().map(|g| g * g).sum::<f64>().sqrt()
    }
}

impl<'a, T: Scalar> Add<&'a Jet2<T>> for &'a Jet2<T> {
    type Output = Jet2<T>;
    fn add(self, rhs: &'a Jet2<T>) -> Jet2<T> {
        Jet2 {
            value: self.value.clone() + rhs.value.clone(),
            gradient: self.gradient.iter().zip(&rhs.gradient).map(|(a, b)| a.clone() + b.clone()).collect(),
            hessian: self.hessian.zip_with(&rhs.hessian, |a, b| a.clone() + b.clone()),
        }
    }
}

impl<'a, T: Scalar> Sub<&'a Jet2<T>> for &'a Jet2<T> {
    type Output = Jet2<T>;
    fn sub(self, rhs: &'a Jet2<T>) -> Jet2<T> {
        Jet2 {
            value: self.value.clone() - rhs.value.clone(),
            gradient: self.gradient.iter().zip(&rhs.gradient).map(|(a, b)| a.clone() - b.clone()).collect(),
            hessian: self.hessian.zip_with(&rhs.hessian, |a, b| a.clone() - b.clone()),
        }
    }
}

impl<'a, T: Scalar> Mul<&'a Jet2<T>> for &'a Jet2<T> {
    type Output = Jet2<T>;
    fn mul(self, rhs: &'a Jet2<T>) -> Jet2<T> {
        self.product(rhs)
    }
}

impl<T: Scalar> Add for Jet2<T> {
    type Output = Jet2<T>;
    fn add(self, rhs: Jet2<T>) -> Jet2<T> {
        &self + &rhs
    }
}

impl<T: Scalar> Sub for Jet2<T> {
    type Output = Jet2<T>;
    fn sub(self, rhs: Jet2<T>) -> Jet2<T> {
        &self - &rhs
    }
}

impl<T: Scalar> Mul for Jet2<T> {
    type Output = Jet2<T>;
    fn mul(self, rhs: Jet2<T>) -> Jet2<T> {
        self.product(&rhs)
    }
}

impl<T: Scalar> Neg for Jet2<T> {
    type Output = Jet2<T>;
    fn neg(self) -> Jet2<T> {
        Jet2 {
            value: -self.value,
            gradient: self.gradient.into_iter().map(|g| -g).collect(),
            hessian: self.hessian.map(|h| -h.clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigRational;

    #[test]
    fn square_of_variable() {
        let x = Jet2::variable(2, 0, 3.0);
        let sq = &x * &x;
        assert_eq!(sq.value, 9.0);
        assert_eq!(sq.gradient, vec![6.0, 0.0]);
        assert_eq!(*sq.hessian.get(0, 0), 2.0);
        assert_eq!(*sq.hessian.get(0, 1), 0.0);
        assert_eq!(*sq.hessian.get(1, 1), 0.0);
    }

    #[test]
    fn powi_matches_repeated_product() {
        let v = Jet2::variables(&[0.7f64, -1.3]);
        let xy = &v[0] * &v[1];
        let p5 = xy.powi(5);
        let mut manual = xy.clone();
        for _ in 0..4 {
            manual = &manual * &xy;
        }
        assert!((p5.value - manual.value).abs() < 1e-14);
        for (a, b) in p5.hessian.packed().iter().zip(manual.hessian.packed()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_rational_jet() {
        let half = BigRational::new(1.into(), 2.into());
        let v = Jet2::variables(&[half.clone(), BigRational::from_integer(2.into())]);
        // x^2 y at (1/2, 2): value 1/2, grad (2xy, x^2) = (2, 1/4), hess [[2y, 2x],[2x, 0]]
        let f = &(&v[0] * &v[0]) * &v[1];
        assert_eq!(f.value, half);
        assert_eq!(f.gradient[0], BigRational::from_integer(2.into()));
        assert_eq!(f.gradient[1], BigRational::new(1.into(), 4.into()));
        assert_eq!(*f.hessian.get(0, 0), BigRational::from_integer(4.into()));
        assert_eq!(*f.hessian.get(0, 1), BigRational::from_integer(1.into()));
    }
}
