//! Alternating forms with the unnormalized wedge: `e^1 ^ e^2 = e^1 (x) e^2 - e^2 (x) e^1`.

use std::collections::BTreeMap;
use std::fmt;

use super::{LieAlgebra, LieError};
use crate::scalar::Scalar;

/// Sparse alternating k-form; keys are strictly increasing index tuples.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KForm {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, Scalar>,
}

/// Sign of the permutation sorting `idx`, or `None` on a repeated index.
pub fn sort_sign(idx: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut v = idx.to_vec();
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

fn signed(s: &Scalar, sign: i32) -> Scalar {
    if sign < 0 {
        -s
    } else {
        s.clone()
    }
}

fn det(rows: &[Vec<Scalar>]) -> Scalar {
    super::linalg::determinant(&rows.to_vec())
}

impl KForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        KForm {
            dim,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// The dual coform `e^i` (zero-based index).
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut f = Self::zero(dim, 1);
        f.set(&[i], Scalar::one());
        f
    }

    /// `e^{i1} ^ ... ^ e^{ik}` for arbitrary order (sign applied).
    pub fn monomial(dim: usize, idx: &[usize]) -> Self {
        let mut f = Self::zero(dim, idx.len());
        f.set(idx, Scalar::one());
        f
    }

    pub fn from_coeffs(dim: usize, degree: usize, entries: impl IntoIterator<Item = (Vec<usize>, Scalar)>) -> Self {
        let mut f = Self::zero(dim, degree);
        for (k, v) in entries {
            let cur = f.coeff(&k);
            f.set(&k, cur + v);
        }
        f
    }

    pub fn substitute(&self, a: &crate::scalar::Assignment) -> Result<KForm, crate::scalar::ScalarError> {
        let mut out = KForm::zero(self.dim, self.degree);
        for (k, v) in &self.coeffs {
            out.set(k, v.substitute(a)?);
        }
        Ok(out)
    }

    /// 2-form with `ω(e_i, e_j) = m[i][j]`; `m` must be antisymmetric.
    pub fn from_gram(m: &[Vec<Scalar>]) -> Self {
        let n = m.len();
        let mut f = Self::zero(n, 2);
        for i in 0..n {
            for j in i + 1..n {
                f.set(&[i, j], m[i][j].clone());
            }
        }
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Scalar)> {
        self.coeffs.iter()
    }

    /// Coefficient at any index order; alternating sign applied.
    pub fn coeff(&self, idx: &[usize]) -> Scalar {
        match sort_sign(idx) {
            None => Scalar::zero(),
            Some((k, s)) => self
                .coeffs
                .get(&k)
                .map(|c| signed(c, s))
                .unwrap_or_else(Scalar::zero),
        }
    }

    pub fn set(&mut self, idx: &[usize], value: Scalar) {
        assert_eq!(idx.len(), self.degree, "index length must equal degree");
        assert!(idx.iter().all(|&i| i < self.dim), "index out of range");
        let (k, s) = sort_sign(idx).expect("repeated index in a k-form");
        let v = signed(&value, s);
        if v.is_zero() {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, v);
        }
    }

    /// Multilinear evaluation on `degree` vectors.
    pub fn eval(&self, vs: &[Vec<Scalar>]) -> Scalar {
        assert_eq!(vs.len(), self.degree);
        let mut acc = Scalar::zero();
        for (idx, c) in &self.coeffs {
            let rows: Vec<Vec<Scalar>> = vs
                .iter()
                .map(|v| idx.iter().map(|&i| v[i].clone()).collect())
                .collect();
            let d = det(&rows);
            if !d.is_zero() {
                acc += &(c * &d);
            }
        }
        acc
    }

    /// Gram matrix `m[i][j] = f(e_i, e_j)` of a 2-form.
    pub fn gram(&self) -> Vec<Vec<Scalar>> {
        assert_eq!(self.degree, 2);
        let mut m = super::linalg::zero_matrix(self.dim, self.dim);
        for (idx, c) in &self.coeffs {
            m[idx[0]][idx[1]] = c.clone();
            m[idx[1]][idx[0]] = -c;
        }
        m
    }

    pub fn add(&self, other: &KForm) -> KForm {
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            let cur = out.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero);
            out.set(k, cur + v);
        }
        out
    }

    pub fn sub(&self, other: &KForm) -> KForm {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> KForm {
        let mut out = Self::zero(self.dim, self.degree);
        for (k, v) in &self.coeffs {
            out.set(k, s * v);
        }
        out
    }

    /// Unnormalized wedge product.
    pub fn wedge(&self, other: &KForm) -> Result<KForm, LieError> {
        if self.degree + other.degree > self.dim {
            return Err(LieError::DegreeOverflow {
                degree: self.degree + other.degree,
                dim: self.dim,
            });
        }
        let mut out = Self::zero(self.dim, self.degree + other.degree);
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                let joined: Vec<usize> = a.iter().chain(b).copied().collect();
                if let Some((k, s)) = sort_sign(&joined) {
                    let cur = out.coeffs.get(&k).cloned().unwrap_or_else(Scalar::zero);
                    out.set(&k, cur + signed(&(ca * cb), s));
                }
            }
        }
        Ok(out)
    }

    /// Exterior derivative on the Lie algebra (only bracket terms).
    pub fn d(&self, alg: &LieAlgebra) -> KForm {
        assert_eq!(self.dim, alg.dim());
        let k = self.degree;
        let n = self.dim;
        let mut out = Self::zero(n, k + 1);
        if self.coeffs.is_empty() || k + 1 > n {
            return out;
        }
        for idx in increasing_tuples(n, k + 1) {
            let mut acc = Scalar::zero();
            for a in 0..=k {
                for b in a + 1..=k {
                    let rest: Vec<usize> = idx
                        .iter()
                        .enumerate()
                        .filter(|&(p, _)| p != a && p != b)
                        .map(|(_, &i)| i)
                        .collect();
                    let br = alg.bracket_basis(idx[a], idx[b]);
                    let mut term = Scalar::zero();
                    for (m, c) in br.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let mut full = vec![m];
                        full.extend_from_slice(&rest);
                        let v = self.coeff(&full);
                        if !v.is_zero() {
                            term += &(c * &v);
                        }
                    }
                    if (a + b) % 2 == 1 {
                        acc -= &term;
                    } else {
                        acc += &term;
                    }
                }
            }
            if !acc.is_zero() {
                out.coeffs.insert(idx, acc);
            }
        }
        out
    }
}

/// All strictly increasing `k`-tuples from `0..n`.
pub fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Coefficient of `η ^ (dη)^n` on `e_1, ..., e_{2n+1}`.
pub fn contact_condition(alg: &LieAlgebra, eta: &KForm) -> Result<Scalar, LieError> {
    let dim = alg.dim();
    if dim.is_multiple_of(2) {
        return Err(LieError::EvenDimension(dim));
    }
    let deta = eta.d(alg);
    let mut acc = eta.clone();
    for _ in 0..(dim - 1) / 2 {
        acc = acc.wedge(&deta)?;
    }
    let full: Vec<usize> = (0..dim).collect();
    Ok(acc.coeff(&full))
}

impl fmt::Display for KForm {
    /// Renders as `s*e1^e2 + ...` with one-based indices.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (idx, c) in &self.coeffs {
            let name: Vec<String> = idx.iter().map(|i| format!("e{}", i + 1)).collect();
            let name = name.join("^");
            let text = c.to_string();
            let (neg, body) = match text.strip_prefix('-') {
                Some(rest) if c.numerator().num_terms() == 1 => (true, rest.to_string()),
                _ => (false, text),
            };
            let sep = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            first = false;
            if body == "1" {
                write!(f, "{sep}{name}")?;
            } else if c.numerator().num_terms() > 1 && c.denominator().is_one() {
                write!(f, "{sep}({body})*{name}")?;
            } else {
                write!(f, "{sep}{body}*{name}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_of_coforms_is_antisymmetric_tensor() {
        let e1 = KForm::basis(3, 0);
        let e2 = KForm::basis(3, 1);
        let w = e1.wedge(&e2).unwrap();
        let u = |i| crate::lie::linalg::unit(3, i);
        assert_eq!(w.eval(&[u(0), u(1)]), Scalar::one());
        assert_eq!(w.eval(&[u(1), u(0)]), Scalar::from_int(-1));
    }

    #[test]
    fn degree_overflow_is_rejected() {
        let a = KForm::monomial(2, &[0, 1]);
        assert!(matches!(
            a.wedge(&KForm::basis(2, 0)),
            Err(LieError::DegreeOverflow { .. })
        ));
    }

    #[test]
    fn heisenberg_derivative() {
        let mut h = LieAlgebra::new(3);
        h.set_bracket(0, 1, &crate::lie::linalg::unit(3, 2)).unwrap();
        let d = KForm::basis(3, 2).d(&h);
        assert_eq!(d.coeff(&[0, 1]), Scalar::from_int(-1));
        assert!(KForm::basis(3, 0).d(&h).is_zero());
        assert_eq!(d.to_string(), "-e1^e2");
    }

    #[test]
    fn dual_of_cube_has_sign_six() {
        let d = KForm::monomial(6, &[0, 5])
            .add(&KForm::monomial(6, &[1, 4]))
            .add(&KForm::monomial(6, &[2, 3]))
            .scale(&Scalar::from_int(-1));
        let cube = d.wedge(&d).unwrap().wedge(&d).unwrap();
        assert_eq!(cube.coeff(&[0, 1, 2, 3, 4, 5]), Scalar::from_int(-6));
    }
}
