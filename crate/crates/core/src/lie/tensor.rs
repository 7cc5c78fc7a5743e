//! Vector-valued 2-forms, stored by their values on basis pairs.

use super::forms::KForm;
use super::linalg::{self, Vector};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorValued2Form {
    dim: usize,
    values: Vec<Vector>,
}

impl VectorValued2Form {
    pub fn zero(dim: usize) -> Self {
        VectorValued2Form {
            dim,
            values: vec![linalg::zeros(dim); dim * dim],
        }
    }

    /// Builds from `f(i, j)` for `i < j`; the rest follows by antisymmetry.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Vector) -> Self {
        let mut out = Self::zero(dim);
        for i in 0..dim {
            for j in i + 1..dim {
                let v = f(i, j);
                out.values[j * dim + i] = linalg::vneg(&v);
                out.values[i * dim + j] = v;
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Value on `(e_i, e_j)`.
    pub fn value(&self, i: usize, j: usize) -> &Vector {
        &self.values[i * self.dim + j]
    }

    /// The `k`-th output component as a scalar 2-form.
    pub fn component(&self, k: usize) -> KForm {
        let mut f = KForm::zero(self.dim, 2);
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                f.set(&[i, j], self.value(i, j)[k].clone());
            }
        }
        f
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(self.dim, |i, j| linalg::vsub(self.value(i, j), other.value(i, j)))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(self.dim, |i, j| linalg::vadd(self.value(i, j), other.value(i, j)))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| linalg::is_zero_vec(v))
    }

    /// `(i, j, k, value)` for every nonzero component with `i < j`, one-based.
    pub fn nonzero_components(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for (k, c) in self.value(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        out.push((i + 1, j + 1, k + 1, c.clone()));
                    }
                }
            }
        }
        out
    }

    pub fn map(&self, mut f: impl FnMut(&Scalar) -> Scalar) -> Self {
        Self::from_fn(self.dim, |i, j| self.value(i, j).iter().map(&mut f).collect())
    }
}
