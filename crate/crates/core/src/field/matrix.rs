//! Symmetric matrices stored as a packed upper triangle, with the extreme
//! eigenvalue queries λ(A) = min ⟨Ax,x⟩ and μ(A) = max ⟨Ax,x⟩ over unit x.

use num::Zero;
use serde::{Deserialize, Serialize};

/// Off-diagonal Frobenius norm at which the Jacobi sweep stops.
const JACOBI_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricMatrix<T = f64> {
    dim: usize,
    /// Row-major upper triangle: (0,0),(0,1),..,(0,n-1),(1,1),..
    entries: Vec<T>,
}

#[inline]
fn packed_index(dim: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * dim - i * (i + 1) / 2 + j
}

impl<T: Clone + Zero> SymmetricMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        SymmetricMatrix { dim, entries: vec![T::zero(); dim * (dim + 1) / 2] }
    }

    /// Builds a matrix from a closure evaluated on the upper triangle only.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(dim * (dim + 1) / 2);
        for i in 0..dim {
            for j in i..dim {
                entries.push(f(i, j));
            }
        }
        SymmetricMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[packed_index(self.dim, i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        let k = packed_index(self.dim, i, j);
        self.entries[k] = value;
    }

    pub fn packed(&self) -> &[T] {
        &self.entries
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> SymmetricMatrix<U> {
        SymmetricMatrix { dim: self.dim, entries: self.entries.iter().map(f).collect() }
    }

    pub(crate) fn zip_with(&self, other: &Self, mut f: impl FnMut(&T, &T) -> T) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        SymmetricMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        }
    }
}

impl SymmetricMatrix<f64> {
    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        Self::from_fn(diag.len(), |i, j| if i == j { diag[i] } else { 0.0 })
    }

    /// Builds from a full row-major matrix, reading the upper triangle.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        Self::from_fn(rows.len(), |i, j| rows[i][j])
    }

    /// The symmetric product uᵀv + vᵀu of two row vectors.
    pub fn sym_outer(u: &[f64], v: &[f64]) -> Self {
        debug_assert_eq!(u.len(), v.len());
        Self::from_fn(u.len(), |i, j| u[i] * v[j] + v[i] * u[j])
    }

    /// The rank-one matrix uᵀu.
    pub fn outer_self(u: &[f64]) -> Self {
        Self::from_fn(u.len(), |i, j| u[i] * u[j])
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|v| v.is_finite())
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Max absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.dim).map(|i| (0..self.dim).map(|j| self.get(i, j).abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, k: f64) -> Self {
        self.map(|v| k * v)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    /// Quadratic form ⟨Av, v⟩.
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += v[i] * self.get(i, j) * v[j];
            }
        }
        acc
    }

    pub fn determinant_2x2(&self) -> f64 {
        assert_eq!(self.dim, 2);
        self.get(0, 0) * self.get(1, 1) - self.get(0, 1) * self.get(0, 1)
    }

    /// All eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        match self.dim {
            0 => Vec::new(),
            1 => vec![*self.get(0, 0)],
            2 => {
                let (lo, hi) = eig2(*self.get(0, 0), *self.get(0, 1), *self.get(1, 1));
                vec![lo, hi]
            }
            _ => {
                let mut e = jacobi_eigenvalues(self);
                e.sort_by(|a, b| a.total_cmp(b));
                e
            }
        }
    }

    /// λ(A): the smallest eigenvalue.
    pub fn lambda_min(&self) -> f64 {
        match self.dim {
            2 => eig2(*self.get(0, 0), *self.get(0, 1), *self.get(1, 1)).0,
            _ => self.eigenvalues().first().copied().unwrap_or(0.0),
        }
    }

    /// μ(A): the largest eigenvalue.
    pub fn mu_max(&self) -> f64 {
        match self.dim {
            2 => eig2(*self.get(0, 0), *self.get(0, 1), *self.get(1, 1)).1,
            _ => self.eigenvalues().last().copied().unwrap_or(0.0),
        }
    }
}

/// Closed-form eigenvalues of [[a,b],[b,c]], ascending.
///
/// The larger-magnitude root comes from (tr ± √disc)/2; the other is det/root,
/// which keeps full relative accuracy when the two differ by many orders.
pub(crate) fn eig2(a: f64, b: f64, c: f64) -> (f64, f64) {
    let half_tr = 0.5 * (a + c);
    let half_diff = 0.5 * (a - c);
    let rad = half_diff.hypot(b);
    if rad == 0.0 {
        return (half_tr, half_tr);
    }
    let big = if half_tr >= 0.0 { half_tr + rad } else { half_tr - rad };
    if big == 0.0 {
        return (-rad, rad);
    }
    let det = a * c - b * b;
    let small = det / big;
    if big >= small {
        (small, big)
    } else {
        (big, small)
    }
}

fn jacobi_eigenvalues(m: &SymmetricMatrix) -> Vec<f64> {
    let n = m.dim();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| *m.get(i, j)).collect()).collect();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_TOL {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

/// The two potentially nonzero eigenvalues of uᵀv + vᵀu:
/// ⟨u,v⟩ − ‖u‖‖v‖ and ⟨u,v⟩ + ‖u‖‖v‖ (Lagrange's identity).
pub fn rank2_sym_eigs(u: &[f64], v: &[f64]) -> (f64, f64) {
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu = u.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nv = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let prod = nu * nv;
    // Cauchy-Schwarz can be violated by a rounding ulp; clamp so λ ≤ 0 ≤ μ.
    ((dot - prod).min(0.0), (dot + prod).max(0.0))
}
