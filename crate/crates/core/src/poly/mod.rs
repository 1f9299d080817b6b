//! Exact bivariate polynomials over ℚ.
//!
//! Terms live in a map keyed by [`Monomial`] under graded lexicographic
//! order; zero coefficients are never stored, so structural equality is
//! polynomial equality.

mod family;
mod hessian;
mod text;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::field::{Jet2, SymmetricMatrix};

pub use family::{radial_decomposition, FamilySpec, RadialPoly};
pub use hessian::{convexity_det, det_hessian, symbolic_hessian, trace_hessian, SymbolicHessian};
pub use text::{parse_univariate, ParsePolyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub x: u32,
    pub y: u32,
}

impl Monomial {
    pub const fn new(x: u32, y: u32) -> Self {
        Monomial { x, y }
    }

    pub fn degree(&self) -> u32 {
        self.x + self.y
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree().cmp(&other.degree()).then(self.x.cmp(&other.x))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact conversion of a finite f64 to a rational.
pub fn rational_from_f64(v: f64) -> Option<BigRational> {
    BigRational::from_float(v)
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BivariatePoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl BivariatePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: BigRational, x: u32, y: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::new(x, y), c);
        }
        BivariatePoly { terms }
    }

    pub fn x() -> Self {
        Self::monomial(BigRational::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(BigRational::one(), 0, 1)
    }

    /// s = x² + y²
    pub fn radius_sq() -> Self {
        Self::monomial(BigRational::one(), 2, 0) + Self::monomial(BigRational::one(), 0, 2)
    }

    /// t = x² − y²
    pub fn hyperbolic() -> Self {
        Self::monomial(BigRational::one(), 2, 0) - Self::monomial(BigRational::one(), 0, 2)
    }

    /// Σ c_k (x²+y²)^k for coefficients in ascending degree.
    pub fn radial(coefficients: &[BigRational]) -> Self {
        let s = Self::radius_sq();
        let mut acc = Self::zero();
        for c in coefficients.iter().rev() {
            acc = &(&acc * &s) + &Self::constant(c.clone());
        }
        acc
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, x: u32, y: u32) -> BigRational {
        self.terms.get(&Monomial::new(x, y)).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Terms in ascending graded lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    pub fn homogeneous_part(&self, degree: u32) -> Self {
        BivariatePoly {
            terms: self.terms.iter().filter(|(m, _)| m.degree() == degree).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        BivariatePoly { terms: self.terms.iter().map(|(m, c)| (*m, c * k)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn partial(&self, axis: Axis) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let (e, dm) = match axis {
                Axis::X => (m.x, Monomial::new(m.x.wrapping_sub(1), m.y)),
                Axis::Y => (m.y, Monomial::new(m.x, m.y.wrapping_sub(1))),
            };
            if e > 0 {
                out.add_term(dm, c * integer(e as i64));
            }
        }
        out
    }

    /// p(y, x)
    pub fn swap_xy(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (Monomial::new(m.y, m.x), c.clone())))
    }

    pub fn eval_exact(&self, x: &BigRational, y: &BigRational) -> BigRational {
        let deg = self.degree().unwrap_or(0) as usize;
        let xp = powers(x, deg);
        let yp = powers(y, deg);
        self.terms
            .iter()
            .map(|(m, c)| c * &xp[m.x as usize] * &yp[m.y as usize])
            .fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.to_float().eval(x, y)
    }

    pub fn to_float(&self) -> FloatPoly {
        FloatPoly::from_exact(self)
    }

    /// Second-order jet computed by jet arithmetic (Horner-free term sum),
    /// an evaluation path independent of symbolic differentiation.
    pub fn jet_via_arithmetic<T>(&self, x: T, y: T, lift: impl Fn(&BigRational) -> T) -> Jet2<T>
    where
        T: crate::field::Scalar,
    {
        let vars = Jet2::variables(&[x, y]);
        let deg = self.degree().unwrap_or(0);
        let mut xp = vec![Jet2::constant(2, T::one())];
        let mut yp = vec![Jet2::constant(2, T::one())];
        for k in 1..=deg as usize {
            xp.push(&xp[k - 1] * &vars[0]);
            yp.push(&yp[k - 1] * &vars[1]);
        }
        let mut acc = Jet2::constant(2, T::zero());
        for (m, c) in &self.terms {
            let term = (&xp[m.x as usize] * &yp[m.y as usize]).scale(&lift(c));
            acc = &acc + &term;
        }
        acc
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.values().map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY)).fold(0.0, f64::max)
    }
}

fn powers(v: &BigRational, deg: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(deg + 1);
    out.push(BigRational::one());
    for k in 1..=deg {
        let next = &out[k - 1] * v;
        out.push(next);
    }
    out
}

impl fmt::Debug for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BivariatePoly({self})")
    }
}

impl Serialize for BivariatePoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BivariatePoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl<'a> Add<&'a BivariatePoly> for &'a BivariatePoly {
    type Output = BivariatePoly;
    fn add(self, rhs: &'a BivariatePoly) -> BivariatePoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a BivariatePoly> for &'a BivariatePoly {
    type Output = BivariatePoly;
    fn sub(self, rhs: &'a BivariatePoly) -> BivariatePoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a BivariatePoly> for &'a BivariatePoly {
    type Output = BivariatePoly;
    fn mul(self, rhs: &'a BivariatePoly) -> BivariatePoly {
        let mut out = BivariatePoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(Monomial::new(ma.x + mb.x, ma.y + mb.y), ca * cb);
            }
        }
        out
    }
}

impl Neg for &BivariatePoly {
    type Output = BivariatePoly;
    fn neg(self) -> BivariatePoly {
        BivariatePoly { terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for BivariatePoly {
            type Output = BivariatePoly;
            fn $method(self, rhs: BivariatePoly) -> BivariatePoly {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for BivariatePoly {
    type Output = BivariatePoly;
    fn neg(self) -> BivariatePoly {
        -&self
    }
}

/// Floating-point image of a [`BivariatePoly`] for fast evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatPoly {
    terms: Vec<(u32, u32, f64)>,
    degree: usize,
}

impl FloatPoly {
    pub fn from_exact(p: &BivariatePoly) -> Self {
        FloatPoly {
            terms: p.terms.iter().map(|(m, c)| (m.x, m.y, c.to_f64().unwrap_or(f64::NAN))).collect(),
            degree: p.degree().unwrap_or(0) as usize,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut xp = [0.0f64; 64];
        let mut yp = [0.0f64; 64];
        if self.degree < 64 {
            fill_powers(x, &mut xp[..=self.degree]);
            fill_powers(y, &mut yp[..=self.degree]);
            self.eval_with(&xp, &yp)
        } else {
            self.terms.iter().map(|&(i, j, c)| c * x.powi(i as i32) * y.powi(j as i32)).sum()
        }
    }

    pub(crate) fn eval_with(&self, xp: &[f64], yp: &[f64]) -> f64 {
        self.terms.iter().map(|&(i, j, c)| c * xp[i as usize] * yp[j as usize]).sum()
    }
}

pub(crate) fn fill_powers(v: f64, out: &mut [f64]) {
    let mut acc = 1.0;
    for slot in out.iter_mut() {
        *slot = acc;
        acc *= v;
    }
}

/// A polynomial together with floating images of its first and second
/// partials, so jets are read off symbolic derivatives.
#[derive(Debug, Clone)]
pub struct PolyJet {
    exact: BivariatePoly,
    f: FloatPoly,
    fx: FloatPoly,
    fy: FloatPoly,
    fxx: FloatPoly,
    fxy: FloatPoly,
    fyy: FloatPoly,
}

impl PolyJet {
    pub fn new(exact: BivariatePoly) -> Self {
        let dx = exact.partial(Axis::X);
        let dy = exact.partial(Axis::Y);
        PolyJet {
            f: exact.to_float(),
            fx: dx.to_float(),
            fy: dy.to_float(),
            fxx: dx.partial(Axis::X).to_float(),
            fxy: dx.partial(Axis::Y).to_float(),
            fyy: dy.partial(Axis::Y).to_float(),
            exact,
        }
    }

    pub fn exact(&self) -> &BivariatePoly {
        &self.exact
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.f.eval(x, y)
    }

    pub fn jet(&self, x: f64, y: f64) -> Jet2 {
        let d = self.f.degree();
        if d >= 64 {
            return Jet2 {
                value: self.f.eval(x, y),
                gradient: vec![self.fx.eval(x, y), self.fy.eval(x, y)],
                hessian: SymmetricMatrix::from_fn(2, |i, j| match (i, j) {
                    (0, 0) => self.fxx.eval(x, y),
                    (0, 1) => self.fxy.eval(x, y),
                    _ => self.fyy.eval(x, y),
                }),
            };
        }
        let mut xp = [0.0f64; 64];
        let mut yp = [0.0f64; 64];
        fill_powers(x, &mut xp[..=d]);
        fill_powers(y, &mut yp[..=d]);
        let hxx = self.fxx.eval_with(&xp, &yp);
        let hxy = self.fxy.eval_with(&xp, &yp);
        let hyy = self.fyy.eval_with(&xp, &yp);
        Jet2 {
            value: self.f.eval_with(&xp, &yp),
            gradient: vec![self.fx.eval_with(&xp, &yp), self.fy.eval_with(&xp, &yp)],
            hessian: SymmetricMatrix::from_fn(2, |i, j| match (i, j) {
                (0, 0) => hxx,
                (0, 1) => hxy,
                _ => hyy,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy(i: u32, j: u32, c: i64) -> BivariatePoly {
        BivariatePoly::monomial(integer(c), i, j)
    }

    #[test]
    fn difference_of_squares() {
        let x = BivariatePoly::x();
        let y = BivariatePoly::y();
        let p = &(&x + &y) * &(&x - &y);
        assert_eq!(p, &xy(2, 0, 1) - &xy(0, 2, 1));
    }

    #[test]
    fn adding_zero_is_identity() {
        let p = FamilySpec::cassini(integer(1)).build().unwrap();
        assert_eq!(&p + &BivariatePoly::zero(), p);
    }

    #[test]
    fn cancellation_removes_terms() {
        let p = &xy(3, 1, 5) - &xy(3, 1, 5);
        assert!(p.is_zero());
        assert_eq!(p.term_count(), 0);
        assert_eq!(p.degree(), None);
    }

    #[test]
    fn partial_examples() {
        assert_eq!(xy(2, 1, 1).partial(Axis::X), xy(1, 1, 2));
        assert!(BivariatePoly::constant(integer(7)).partial(Axis::Y).is_zero());
        // ∂x cassini(α) = 4x³ + 4xy² − 4αx
        let alpha = rational(3, 2);
        let c = FamilySpec::cassini(alpha.clone()).build().unwrap();
        let want = &(&xy(3, 0, 4) + &xy(1, 2, 4)) - &BivariatePoly::monomial(integer(4) * &alpha, 1, 0);
        assert_eq!(c.partial(Axis::X), want);
    }

    #[test]
    fn product_of_families_expands() {
        let f = FamilySpec::cassini(integer(1)).build().unwrap();
        let g = FamilySpec::anti_cassini(integer(1)).build().unwrap();
        let want = [(8, 0, 1), (6, 2, 4), (4, 4, 6), (2, 6, 4), (0, 8, 1), (4, 0, -4), (2, 2, 8), (0, 4, -4)]
            .iter()
            .fold(BivariatePoly::zero(), |acc, &(i, j, c)| &acc + &xy(i, j, c));
        assert_eq!(&f * &g, want);
    }

    #[test]
    fn graded_lex_order() {
        let p: BivariatePoly = "1*y^3 + 2*x + 3*x^2*y + 4".parse().unwrap();
        let order: Vec<_> = p.terms().map(|(m, _)| (m.x, m.y)).collect();
        assert_eq!(order, vec![(0, 0), (1, 0), (0, 3), (2, 1)]);
    }

    #[test]
    fn float_eval_matches_exact() {
        let p: BivariatePoly = "3/2*x^3*y - 5*y^2 + 1/3".parse().unwrap();
        let exact = p.eval_exact(&rational(1, 2), &rational(-3, 4));
        let approx = p.eval(0.5, -0.75);
        assert!((exact.to_f64().unwrap() - approx).abs() < 1e-15);
    }

    #[test]
    fn jet_paths_agree_exactly() {
        let f = FamilySpec::cassini(integer(1)).build().unwrap();
        let g = FamilySpec::anti_cassini(integer(1)).build().unwrap();
        let p = &f * &g;
        let (x, y) = (rational(3, 7), rational(-5, 3));
        let jet = p.jet_via_arithmetic(x.clone(), y.clone(), |c| c.clone());
        let h = symbolic_hessian(&p);
        assert_eq!(jet.value, p.eval_exact(&x, &y));
        assert_eq!(jet.gradient[0], p.partial(Axis::X).eval_exact(&x, &y));
        assert_eq!(*jet.hessian.get(0, 1), h.fxy.eval_exact(&x, &y));
        assert_eq!(*jet.hessian.get(1, 1), h.fyy.eval_exact(&x, &y));
    }
}
