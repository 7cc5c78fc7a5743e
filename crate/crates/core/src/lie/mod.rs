//! Lie algebras given by structure constants.

pub mod forms;
pub mod linalg;
pub mod tensor;

use crate::scalar::{Polynomial, Scalar};
pub use forms::{contact_condition, KForm};
pub use linalg::{Matrix, Vector};
pub use tensor::VectorValued2Form;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("wedge degree {degree} exceeds dimension {dim}")]
    DegreeOverflow { degree: usize, dim: usize },
    #[error("contact condition needs odd dimension, got {0}")]
    EvenDimension(usize),
    #[error("[e{0},e{0}] must vanish")]
    DiagonalBracket(usize),
}

/// `[e_i, e_j] = Σ_k c^k_ij e_k`, stored densely and kept antisymmetric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    c: Vec<Scalar>,
    /// Parameter names appearing in the structure constants.
    pub params: Vec<String>,
    /// Polynomials assumed nonvanishing.
    pub constraints: Vec<Polynomial>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JacobiViolation {
    pub triple: (usize, usize, usize),
    pub residual: Vector,
}

impl LieAlgebra {
    /// The abelian algebra of dimension `dim`.
    pub fn new(dim: usize) -> Self {
        LieAlgebra {
            dim,
            c: vec![Scalar::zero(); dim * dim * dim],
            params: Vec::new(),
            constraints: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn at(&self, i: usize, j: usize) -> usize {
        (i * self.dim + j) * self.dim
    }

    fn check_index(&self, i: usize) -> Result<(), LieError> {
        if i >= self.dim {
            return Err(LieError::IndexOutOfRange {
                index: i + 1,
                dim: self.dim,
            });
        }
        Ok(())
    }

    /// Sets `[e_i, e_j] = v` and `[e_j, e_i] = -v` (zero-based indices).
    pub fn set_bracket(&mut self, i: usize, j: usize, v: &[Scalar]) -> Result<(), LieError> {
        self.check_index(i)?;
        self.check_index(j)?;
        if v.len() != self.dim {
            return Err(LieError::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        if i == j {
            if linalg::is_zero_vec(v) {
                return Ok(());
            }
            return Err(LieError::DiagonalBracket(i + 1));
        }
        let (a, b) = (self.at(i, j), self.at(j, i));
        for k in 0..self.dim {
            self.c[a + k] = v[k].clone();
            self.c[b + k] = -&v[k];
        }
        Ok(())
    }

    /// Adds `v` to `[e_i, e_j]`.
    pub fn add_bracket(&mut self, i: usize, j: usize, v: &[Scalar]) -> Result<(), LieError> {
        self.check_index(i)?;
        self.check_index(j)?;
        let cur = self.bracket_basis(i, j).to_vec();
        self.set_bracket(i, j, &linalg::vadd(&cur, v))
    }

    /// `[e_i, e_j]` as a coordinate slice.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[Scalar] {
        let a = self.at(i, j);
        &self.c[a..a + self.dim]
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.c[self.at(i, j) + k]
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vector, LieError> {
        for v in [x, y] {
            if v.len() != self.dim {
                return Err(LieError::DimensionMismatch {
                    expected: self.dim,
                    got: v.len(),
                });
            }
        }
        let mut out = linalg::zeros(self.dim);
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if i == j || y[j].is_zero() {
                    continue;
                }
                let br = self.bracket_basis(i, j);
                if linalg::is_zero_vec(br) {
                    continue;
                }
                let s = &x[i] * &y[j];
                for k in 0..self.dim {
                    if !br[k].is_zero() {
                        out[k] += &(&s * &br[k]);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `[e_i, y]`.
    pub fn bracket_with_basis(&self, i: usize, y: &[Scalar]) -> Vector {
        self.bracket(&linalg::unit(self.dim, i), y).expect("dimension checked")
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(Scalar::is_zero)
    }

    /// Matrix of `ad_x` acting on columns.
    pub fn ad(&self, x: &[Scalar]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim)
            .map(|j| self.bracket(x, &linalg::unit(self.dim, j)).expect("dimension checked"))
            .collect();
        linalg::transpose(&cols)
    }

    /// Every `(i<j<k)` whose cyclic sum `[[e_i,e_j],e_k] + ...` is not identically zero.
    pub fn jacobi_check(&self) -> Vec<JacobiViolation> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let mut r = linalg::zeros(n);
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        let ab = self.bracket_basis(a, b).to_vec();
                        let t = self
                            .bracket(&ab, &linalg::unit(n, c))
                            .expect("dimension checked");
                        r = linalg::vadd(&r, &t);
                    }
                    if !linalg::is_zero_vec(&r) {
                        out.push(JacobiViolation {
                            triple: (i + 1, j + 1, k + 1),
                            residual: r,
                        });
                    }
                }
            }
        }
        out
    }

    /// Basis of the center, as the common kernel of all `ad_{e_j}` read as maps of `x`.
    pub fn center(&self) -> Vec<Vector> {
        let n = self.dim;
        // [x, e_j]_k = Σ_i x_i c^k_ij; one row per (j, k).
        let mut rows: Matrix = Vec::with_capacity(n * n);
        for j in 0..n {
            for k in 0..n {
                let row: Vector = (0..n)
                    .map(|i| self.structure_constant(i, j, k).clone())
                    .collect();
                if !linalg::is_zero_vec(&row) {
                    rows.push(row);
                }
            }
        }
        if rows.is_empty() {
            return linalg::identity(n);
        }
        linalg::nullspace(&rows, n)
    }

    /// All variables occurring in the structure constants.
    pub fn variables(&self) -> Vec<String> {
        let mut v: Vec<String> = self.c.iter().flat_map(|s| s.variables()).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Drops the last basis vector: the quotient by a central last direction.
    pub fn truncate_last(&self) -> LieAlgebra {
        let m = self.dim - 1;
        let mut out = LieAlgebra::new(m);
        for i in 0..m {
            for j in i + 1..m {
                out.set_bracket(i, j, &self.bracket_basis(i, j)[..m])
                    .expect("indices in range");
            }
        }
        out.params = self.params.clone();
        out.constraints = self.constraints.clone();
        out
    }

    /// Specializes some parameters to rational values.
    pub fn substitute(&self, a: &crate::scalar::Assignment) -> Result<LieAlgebra, crate::scalar::ScalarError> {
        let c = self.c.iter().map(|s| s.substitute(a)).collect::<Result<_, _>>()?;
        Ok(LieAlgebra {
            dim: self.dim,
            c,
            params: self.params.iter().filter(|p| !a.contains_key(*p)).cloned().collect(),
            constraints: self
                .constraints
                .iter()
                .map(|p| p.substitute(a))
                .filter(|p| !p.is_constant())
                .collect(),
        })
    }

    /// Nonzero brackets `(i, j, [e_i, e_j])` with `i < j`, zero-based.
    pub fn nonzero_brackets(&self) -> Vec<(usize, usize, Vector)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let b = self.bracket_basis(i, j);
                if !linalg::is_zero_vec(b) {
                    out.push((i, j, b.to_vec()));
                }
            }
        }
        out
    }
}

/// Renders a vector as `e1 - 2*e3` with one-based names.
pub fn format_vector(v: &[Scalar]) -> String {
    let mut s = String::new();
    for (k, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let text = c.to_string();
        let single = c.numerator().num_terms() == 1;
        let (neg, body) = match text.strip_prefix('-') {
            Some(rest) if single => (true, rest.to_string()),
            _ => (false, text),
        };
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if body == "1" {
            s.push_str(&format!("e{}", k + 1));
        } else if !single && c.denominator().is_one() {
            s.push_str(&format!("({body})*e{}", k + 1));
        } else {
            s.push_str(&format!("{body}*e{}", k + 1));
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::linalg::unit;
    use super::*;

    fn heisenberg3() -> LieAlgebra {
        let mut h = LieAlgebra::new(3);
        h.set_bracket(0, 1, &unit(3, 2)).unwrap();
        h
    }

    #[test]
    fn bracket_is_antisymmetric() {
        let h = heisenberg3();
        assert_eq!(h.bracket(&unit(3, 1), &unit(3, 0)).unwrap(), linalg::vneg(&unit(3, 2)));
        let x = vec![Scalar::from_int(2), Scalar::var("a"), Scalar::one()];
        assert!(linalg::is_zero_vec(&h.bracket(&x, &x).unwrap()));
    }

    #[test]
    fn broken_algebra_violates_jacobi() {
        let mut a = LieAlgebra::new(4);
        a.set_bracket(0, 1, &unit(4, 2)).unwrap();
        a.set_bracket(2, 3, &unit(4, 0)).unwrap();
        let v = a.jacobi_check();
        assert_eq!(v.len(), 2);
        assert_eq!(v[0].triple, (1, 2, 4));
        assert_eq!(v[1].triple, (2, 3, 4));
        assert_eq!(format_vector(&v[0].residual), "e1");
        assert!(heisenberg3().jacobi_check().is_empty());
    }

    #[test]
    fn derivation_on_abelian_ideal_is_a_lie_algebra() {
        // ad e1 permutes an abelian ideal cyclically; Jacobi holds.
        let mut a = LieAlgebra::new(4);
        a.set_bracket(0, 1, &unit(4, 2)).unwrap();
        a.set_bracket(0, 2, &unit(4, 3)).unwrap();
        a.set_bracket(0, 3, &unit(4, 1)).unwrap();
        assert!(a.jacobi_check().is_empty());
    }

    #[test]
    fn center_of_heisenberg() {
        let z = heisenberg3().center();
        assert_eq!(z.len(), 1);
        assert_eq!(format_vector(&z[0]), "e3");
        assert_eq!(LieAlgebra::new(4).center().len(), 4);
    }

    #[test]
    fn out_of_range_and_mismatch() {
        let mut a = LieAlgebra::new(3);
        assert!(matches!(
            a.set_bracket(0, 3, &unit(3, 0)),
            Err(LieError::IndexOutOfRange { .. })
        ));
        assert!(a.bracket(&unit(2, 0), &unit(3, 0)).is_err());
    }
}
