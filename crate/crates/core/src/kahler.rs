//! Symplectic forms, almost complex structures, associated metrics and the
//! Nijenhuis tensor.
//!
//! Matrices act on columns: `J e_j = Σ_i J[i][j] e_i`. With `Ω[i][j] = ω(e_i, e_j)`
//! the associated metric `h(X, Y) = ω(X, JY)` has Gram matrix `ΩJ`.

use num_traits::{Signed, Zero};

use crate::lie::linalg::{self, Matrix, Vector};
use crate::lie::{KForm, LieAlgebra, VectorValued2Form};
use crate::scalar::{Assignment, Polynomial, Rational, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KahlerError {
    #[error("J^2 + I does not vanish")]
    NotAlmostComplex,
    #[error("J is not compatible with omega")]
    Incompatible,
    #[error("bilinear form is degenerate")]
    Degenerate,
    #[error("omega is not closed")]
    NotClosed,
    #[error("parameter constraint violated: {0}")]
    Constraint(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

pub fn omega_matrix(omega: &KForm) -> Matrix {
    omega.gram()
}

/// `J^2 + I`.
pub fn almost_complex_residual(j: &Matrix) -> Matrix {
    linalg::madd(&linalg::matmul(j, j), &linalg::identity(j.len()))
}

pub fn is_almost_complex(j: &Matrix) -> bool {
    linalg::is_zero_matrix(&almost_complex_residual(j))
}

/// `ω(Je_i, Je_j) - ω(e_i, e_j)`, i.e. `JᵀΩJ - Ω`.
pub fn compatibility_residual(omega: &KForm, j: &Matrix) -> Matrix {
    let o = omega.gram();
    let jt = linalg::transpose(j);
    linalg::msub(&linalg::matmul(&jt, &linalg::matmul(&o, j)), &o)
}

pub fn is_compatible(omega: &KForm, j: &Matrix) -> Result<bool, KahlerError> {
    if !is_almost_complex(j) {
        return Err(KahlerError::NotAlmostComplex);
    }
    Ok(linalg::is_zero_matrix(&compatibility_residual(omega, j)))
}

/// `dω` on the base algebra.
pub fn closedness_residual(base: &LieAlgebra, omega: &KForm) -> KForm {
    omega.d(base)
}

/// `det Ω`, nonzero exactly when ω is nondegenerate.
pub fn pfaffian_square(omega: &KForm) -> Scalar {
    linalg::determinant(&omega.gram())
}

/// Gram matrix of `h(X, Y) = ω(X, JY)`.
pub fn metric_from(omega: &KForm, j: &Matrix) -> Result<Matrix, KahlerError> {
    if !is_compatible(omega, j)? {
        return Err(KahlerError::Incompatible);
    }
    let h = linalg::matmul(&omega.gram(), j);
    if !linalg::is_symmetric(&h) {
        return Err(KahlerError::Incompatible);
    }
    if linalg::determinant(&h).is_zero() {
        return Err(KahlerError::Degenerate);
    }
    Ok(h)
}

/// `h⁻¹ = -JΩ⁻¹`, avoiding a symbolic inversion of `h` itself.
pub fn metric_inverse(omega: &KForm, j: &Matrix) -> Result<Matrix, KahlerError> {
    let oi = linalg::inverse(&omega.gram()).ok_or(KahlerError::Degenerate)?;
    let m = linalg::matmul(j, &oi);
    Ok(m.iter().map(|r| linalg::vneg(r)).collect())
}

fn apply(j: &Matrix, v: &[Scalar]) -> Vector {
    linalg::matvec(j, v)
}

/// `N_J(X,Y) = [JX,JY] - [X,Y] - J[X,JY] - J[JX,Y]`.
pub fn nijenhuis(alg: &LieAlgebra, j: &Matrix) -> VectorValued2Form {
    let n = alg.dim();
    let cols: Vec<Vector> = (0..n).map(|k| linalg::transpose(j)[k].clone()).collect();
    VectorValued2Form::from_fn(n, |a, b| {
        let (x, y) = (linalg::unit(n, a), linalg::unit(n, b));
        let (jx, jy) = (&cols[a], &cols[b]);
        let t1 = alg.bracket(jx, jy).expect("dim");
        let t2 = alg.bracket(&x, &y).expect("dim");
        let t3 = apply(j, &alg.bracket(&x, jy).expect("dim"));
        let t4 = apply(j, &alg.bracket(jx, &y).expect("dim"));
        linalg::vsub(&linalg::vsub(&linalg::vsub(&t1, &t2), &t3), &t4)
    })
}

/// `[T,T](X,Y) = T²[X,Y] + [TX,TY] - T[X,TY] - T[TX,Y]`.
pub fn nijenhuis_torsion(alg: &LieAlgebra, t: &Matrix) -> VectorValued2Form {
    let n = alg.dim();
    let t2 = linalg::matmul(t, t);
    let cols = linalg::transpose(t);
    VectorValued2Form::from_fn(n, |a, b| {
        let (x, y) = (linalg::unit(n, a), linalg::unit(n, b));
        let (tx, ty) = (&cols[a], &cols[b]);
        let s1 = apply(&t2, &alg.bracket(&x, &y).expect("dim"));
        let s2 = alg.bracket(tx, ty).expect("dim");
        let s3 = apply(t, &alg.bracket(&x, ty).expect("dim"));
        let s4 = apply(t, &alg.bracket(tx, &y).expect("dim"));
        linalg::vsub(&linalg::vsub(&linalg::vadd(&s1, &s2), &s3), &s4)
    })
}

/// The six-dimensional algebra with `[e1,e2]=e4, [e2,e3]=e6, [e2,e4]=e5`.
pub fn h14_algebra() -> LieAlgebra {
    let mut h = LieAlgebra::new(6);
    h.set_bracket(0, 1, &linalg::unit(6, 3)).expect("in range");
    h.set_bracket(1, 2, &linalg::unit(6, 5)).expect("in range");
    h.set_bracket(1, 3, &linalg::unit(6, 4)).expect("in range");
    h
}

/// `ω = -e1^e6 + e2^e5 + e3^e4`.
pub fn h14_omega() -> KForm {
    let mut w = KForm::zero(6, 2);
    w.set(&[0, 5], Scalar::from_int(-1));
    w.set(&[1, 4], Scalar::one());
    w.set(&[2, 3], Scalar::one());
    w
}

pub const H14_PARAMS: [&str; 6] = ["psi11", "psi12", "psi41", "psi42", "psi51", "psi61"];

/// The six-parameter family of complex structures on `h14`, in the order
/// `ψ11, ψ12, ψ41, ψ42, ψ51, ψ61`. Requires `ψ12 ≠ 0`.
pub fn build_h14_family(psi: &[Scalar; 6]) -> Result<Matrix, KahlerError> {
    let [p11, p12, p41, p42, p51, p61] = psi;
    if p12.is_zero() {
        return Err(KahlerError::Constraint("psi12 != 0".into()));
    }
    let one = Scalar::one();
    let s = &(p11 * p11) + &one;
    let b = &s / p12;
    let a = (p42 * &s - Scalar::from_int(2) * p41 * p12 * p11) / (p12 * p12);
    let j52 = (Scalar::from_int(-2) * p11 * p12 * (p42 * p41 - p12 * p51)
        + p42 * p42 * &s
        + p12 * p12 * (p41 * p41 + p12 * p61))
        / (&s * p12);
    let z = Scalar::zero;
    Ok(vec![
        vec![p11.clone(), p12.clone(), z(), z(), z(), z()],
        vec![-&b, -p11, z(), z(), z(), z()],
        vec![a.clone(), -p41, -p11, -&b, z(), z()],
        vec![p41.clone(), p42.clone(), p12.clone(), p11.clone(), z(), z()],
        vec![p51.clone(), j52, p42.clone(), p41.clone(), p11.clone(), p12.clone()],
        vec![p61.clone(), -p51, -p41, a, -&b, -p11],
    ])
}

/// The family with every `ψ` a free symbol.
pub fn h14_family_symbolic() -> Matrix {
    let psi = H14_PARAMS.map(Scalar::var);
    build_h14_family(&psi).expect("psi12 is a nonzero symbol")
}

pub fn h14_constraints() -> Vec<Polynomial> {
    vec![Polynomial::var("psi12")]
}

/// Inertia `(p, q)` of a symmetric form at a parameter assignment, by exact
/// LDLᵀ with 1×1 and 2×2 pivots.
pub fn signature(h: &Matrix, assignment: &Assignment) -> Result<(usize, usize), KahlerError> {
    let mut a: Vec<Vec<Rational>> = h
        .iter()
        .map(|r| r.iter().map(|x| x.eval(assignment)).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()?;
    signature_rational(&mut a)
}

pub fn signature_rational(a: &mut Vec<Vec<Rational>>) -> Result<(usize, usize), KahlerError> {
    let (mut p, mut q) = (0, 0);
    while !a.is_empty() {
        let n = a.len();
        if let Some(k) = (0..n).find(|&k| !a[k][k].is_zero()) {
            let d = a[k][k].clone();
            if d.is_positive() {
                p += 1;
            } else {
                q += 1;
            }
            let row = a[k].clone();
            let mut next = Vec::with_capacity(n - 1);
            for i in (0..n).filter(|&i| i != k) {
                let mut r = Vec::with_capacity(n - 1);
                for j in (0..n).filter(|&j| j != k) {
                    r.push(&a[i][j] - &row[i] * &row[j] / &d);
                }
                next.push(r);
            }
            *a = next;
            continue;
        }
        // Zero diagonal: any nonzero off-diagonal pair forms a hyperbolic block.
        let Some((i0, j0)) = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| !a[i][j].is_zero())
        else {
            return Err(KahlerError::Degenerate);
        };
        p += 1;
        q += 1;
        let b = a[i0][j0].clone();
        let rest: Vec<usize> = (0..n).filter(|&k| k != i0 && k != j0).collect();
        // Block [[0,b],[b,0]] has inverse [[0,1/b],[1/b,0]].
        let mut next = Vec::with_capacity(rest.len());
        for &i in &rest {
            let mut r = Vec::with_capacity(rest.len());
            for &j in &rest {
                let corr = (&a[i][i0] * &a[j0][j] + &a[i][j0] * &a[i0][j]) / &b;
                r.push(&a[i][j] - corr);
            }
            next.push(r);
        }
        *a = next;
    }
    Ok((p, q))
}
