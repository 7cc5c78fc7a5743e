//! Dense exact linear algebra over [`Scalar`].
//!
//! Elimination treats an entry as a usable pivot when it is not identically
//! zero, so results hold generically in the parameters (off the zero loci of
//! the pivots chosen).

use crate::scalar::Scalar;

pub type Vector = Vec<Scalar>;
pub type Matrix = Vec<Vec<Scalar>>;

pub fn zeros(n: usize) -> Vector {
    vec![Scalar::zero(); n]
}

pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = zeros(n);
    v[i] = Scalar::one();
    v
}

pub fn zero_matrix(r: usize, c: usize) -> Matrix {
    vec![zeros(c); r]
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| unit(n, i)).collect()
}

pub fn vadd(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vsub(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vscale(s: &Scalar, a: &[Scalar]) -> Vector {
    a.iter().map(|x| s * x).collect()
}

pub fn vneg(a: &[Scalar]) -> Vector {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero_vec(a: &[Scalar]) -> bool {
    a.iter().all(Scalar::is_zero)
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut acc = Scalar::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

/// `m v` with `m` acting on column vectors.
pub fn matvec(m: &Matrix, v: &[Scalar]) -> Vector {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let bt = transpose(b);
    a.iter()
        .map(|row| bt.iter().map(|col| dot(row, col)).collect())
        .collect()
}

pub fn transpose(m: &Matrix) -> Matrix {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn madd(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter().zip(b).map(|(x, y)| vadd(x, y)).collect()
}

pub fn msub(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter().zip(b).map(|(x, y)| vsub(x, y)).collect()
}

pub fn mscale(s: &Scalar, m: &Matrix) -> Matrix {
    m.iter().map(|r| vscale(s, r)).collect()
}

pub fn is_zero_matrix(m: &Matrix) -> bool {
    m.iter().all(|r| is_zero_vec(r))
}

pub fn is_symmetric(m: &Matrix) -> bool {
    let n = m.len();
    (0..n).all(|i| (i + 1..n).all(|j| m[i][j] == m[j][i]))
}

/// Cost heuristic for pivot choice: prefer constants, then short expressions.
fn weight(s: &Scalar) -> usize {
    if s.is_constant() {
        0
    } else {
        1 + s.numerator().num_terms() + 2 * s.denominator().num_terms()
    }
}

fn pick_pivot(m: &Matrix, col: usize, from: usize) -> Option<usize> {
    (from..m.len())
        .filter(|&r| !m[r][col].is_zero())
        .min_by_key(|&r| weight(&m[r][col]))
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = pick_pivot(m, c, r) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("pivot is nonzero");
        m[r] = vscale(&inv, &m[r]);
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let row_r = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&row_r) {
                    if !y.is_zero() {
                        *x -= &(&f * y);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Basis of `{ v : m v = 0 }`.
pub fn nullspace(m: &Matrix, cols: usize) -> Vec<Vector> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = zeros(cols);
            v[f] = Scalar::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -&a[r][f];
            }
            v
        })
        .collect()
}

/// Inverse by Gauss-Jordan; `None` when singular.
pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Determinant by Gaussian elimination over the rational function field.
pub fn determinant(m: &Matrix) -> Scalar {
    let n = m.len();
    let mut a = m.clone();
    let mut det = Scalar::one();
    for c in 0..n {
        let Some(p) = pick_pivot(&a, c, c) else {
            return Scalar::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det = &det * &a[c][c];
        let inv = a[c][c].inv().expect("pivot is nonzero");
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] * &inv;
            let row_c = a[c].clone();
            for (x, y) in a[r].iter_mut().zip(&row_c).skip(c) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
    }
    det
}
