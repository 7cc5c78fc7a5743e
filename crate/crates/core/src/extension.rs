//! Central extensions `h ×_ω ℝ` and their contact metric structures.
//!
//! The Reeb direction is always the last basis vector and `η` its dual coform.

use crate::kahler::{self, KahlerError};
use crate::lie::linalg::{self, Matrix, Vector};
use crate::lie::{KForm, LieAlgebra, LieError, VectorValued2Form};
use crate::residual::Residual;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExtensionError {
    #[error("omega is not closed: d(omega) = {0}")]
    NotClosed(String),
    #[error("omega is degenerate")]
    Degenerate,
    #[error("last basis vector is not central")]
    NotCentral,
    #[error("structure dimension {got} does not match base dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Kahler(#[from] KahlerError),
    #[error(transparent)]
    Lie(#[from] LieError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CentralExtension {
    pub base: LieAlgebra,
    pub omega: KForm,
    pub total: LieAlgebra,
}

/// `[X,Y]_g = [X,Y]_h + ω(X,Y)ξ`, `ξ` central, without any checks on `ω`.
fn assemble(base: &LieAlgebra, omega: &KForm) -> LieAlgebra {
    let n = base.dim();
    let mut total = LieAlgebra::new(n + 1);
    for i in 0..n {
        for j in i + 1..n {
            let mut v = base.bracket_basis(i, j).to_vec();
            v.push(omega.coeff(&[i, j]));
            total.set_bracket(i, j, &v).expect("indices in range");
        }
    }
    total.params = base.params.clone();
    total.constraints = base.constraints.clone();
    total
}

impl CentralExtension {
    pub fn new(base: LieAlgebra, omega: KForm) -> Result<Self, ExtensionError> {
        if omega.dim() != base.dim() || omega.degree() != 2 {
            return Err(ExtensionError::DimensionMismatch {
                expected: base.dim(),
                got: omega.dim(),
            });
        }
        let d = omega.d(&base);
        if !d.is_zero() {
            return Err(ExtensionError::NotClosed(d.to_string()));
        }
        if kahler::pfaffian_square(&omega).is_zero() {
            return Err(ExtensionError::Degenerate);
        }
        let total = assemble(&base, &omega);
        Ok(CentralExtension { base, omega, total })
    }

    /// Builds the bracket table even when `ω` is not a cocycle.
    pub fn new_unchecked(base: LieAlgebra, omega: KForm) -> Self {
        let total = assemble(&base, &omega);
        CentralExtension { base, omega, total }
    }

    /// Splits an algebra whose last basis vector is central into base and cocycle.
    pub fn from_total(total: LieAlgebra) -> Result<Self, ExtensionError> {
        let n = total.dim() - 1;
        let xi = linalg::unit(n + 1, n);
        for i in 0..=n {
            if !linalg::is_zero_vec(&total.bracket_with_basis(i, &xi)) {
                return Err(ExtensionError::NotCentral);
            }
        }
        let base = total.truncate_last();
        let mut omega = KForm::zero(n, 2);
        for i in 0..n {
            for j in i + 1..n {
                omega.set(&[i, j], total.structure_constant(i, j, n).clone());
            }
        }
        Ok(CentralExtension { base, omega, total })
    }

    pub fn dim(&self) -> usize {
        self.total.dim()
    }

    pub fn xi(&self) -> Vector {
        linalg::unit(self.dim(), self.dim() - 1)
    }

    pub fn eta(&self) -> KForm {
        KForm::basis(self.dim(), self.dim() - 1)
    }

    pub fn d_eta(&self) -> KForm {
        self.eta().d(&self.total)
    }

    /// `dω` on the base.
    pub fn closedness_residual(&self) -> KForm {
        self.omega.d(&self.base)
    }

    /// `dη(e_i, e_j) + ω(e_i, e_j)` over base pairs.
    pub fn d_eta_residual(&self) -> Residual {
        let de = self.d_eta();
        let n = self.base.dim();
        let mut r = Residual::new("d_eta_equals_minus_omega");
        for i in 0..n {
            for j in i + 1..n {
                r.push(
                    || format!("(e{},e{})", i + 1, j + 1),
                    de.coeff(&[i, j]) + self.omega.coeff(&[i, j]),
                );
            }
        }
        r
    }
}

/// Pads a base vector with a zero `ξ` coordinate.
pub fn lift(v: &[Scalar]) -> Vector {
    let mut out = v.to_vec();
    out.push(Scalar::zero());
    out
}

/// `J ⊕ 0`.
pub fn lift_affinor(j: &Matrix) -> Matrix {
    let n = j.len();
    let mut out = linalg::zero_matrix(n + 1, n + 1);
    for i in 0..n {
        for k in 0..n {
            out[i][k] = j[i][k].clone();
        }
    }
    out
}

/// `h ⊕ c`.
pub fn block_diag(h: &Matrix, c: Scalar) -> Matrix {
    let n = h.len();
    let mut out = lift_affinor(h);
    out[n][n] = c;
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContactMetricStructure {
    pub eta: KForm,
    pub xi: Vector,
    pub phi: Matrix,
    pub g: Matrix,
    /// `J` and `h = ΩJ` on the base.
    pub j: Matrix,
    pub h: Matrix,
}

/// `ϕ = J ⊕ 0` and `g(X,Y) = dη(ϕX, Y) + η(X)η(Y)`.
pub fn build_contact_structure(
    ext: &CentralExtension,
    j: &Matrix,
) -> Result<ContactMetricStructure, ExtensionError> {
    if j.len() != ext.base.dim() {
        return Err(ExtensionError::DimensionMismatch {
            expected: ext.base.dim(),
            got: j.len(),
        });
    }
    if !kahler::is_compatible(&ext.omega, j)? {
        return Err(KahlerError::Incompatible.into());
    }
    let h = kahler::metric_from(&ext.omega, j)?;
    let phi = lift_affinor(j);
    let eta = ext.eta();
    let de = ext.d_eta().gram();
    let n = ext.dim();
    let mut g = linalg::matmul(&linalg::transpose(&phi), &de);
    let last = n - 1;
    g[last][last] += &Scalar::one();
    Ok(ContactMetricStructure {
        eta,
        xi: ext.xi(),
        phi,
        g,
        j: j.clone(),
        h,
    })
}

/// Inverse of `g = h ⊕ 1` as `h⁻¹ ⊕ 1` with `h⁻¹ = -JΩ⁻¹`.
pub fn metric_inverse(ext: &CentralExtension, s: &ContactMetricStructure) -> Result<Matrix, ExtensionError> {
    Ok(block_diag(&kahler::metric_inverse(&ext.omega, &s.j)?, Scalar::one()))
}

fn eta_vec(s: &ContactMetricStructure) -> Vector {
    (0..s.xi.len()).map(|i| s.eta.coeff(&[i])).collect()
}

/// Every defining identity of the contact metric structure, one residual each.
pub fn axiom_residuals(ext: &CentralExtension, s: &ContactMetricStructure) -> Vec<Residual> {
    let n = ext.dim();
    let ev = eta_vec(s);
    let de = ext.d_eta().gram();
    let mut out = Vec::new();

    let mut r = Residual::new("eta_of_xi");
    r.push(String::new, linalg::dot(&ev, &s.xi) - Scalar::one());
    r = r.merge(Residual::vector("d_eta_xi", &linalg::matvec(&linalg::transpose(&de), &s.xi)));
    out.push(r);

    // ϕ² + I - η⊗ξ, where (η⊗ξ)(x) = η(x)ξ.
    let mut a1 = linalg::madd(&linalg::matmul(&s.phi, &s.phi), &linalg::identity(n));
    for k in 0..n {
        for j in 0..n {
            a1[k][j] -= &(&s.xi[k] * &ev[j]);
        }
    }
    out.push(Residual::matrix("axiom1_phi_squared", &a1));

    // dη(X,Y) - g(X,ϕY).
    out.push(Residual::matrix(
        "axiom2_d_eta_metric",
        &linalg::msub(&de, &linalg::matmul(&s.g, &s.phi)),
    ));

    // g(ϕX,ϕY) - g(X,Y) + η(X)η(Y).
    let mut a3 = linalg::msub(
        &linalg::matmul(&linalg::transpose(&s.phi), &linalg::matmul(&s.g, &s.phi)),
        &s.g,
    );
    for i in 0..n {
        for j in 0..n {
            a3[i][j] += &(&ev[i] * &ev[j]);
        }
    }
    out.push(Residual::matrix("axiom3_phi_isometry", &a3));

    out.push(Residual::matrix(
        "metric_split_h_plus_one",
        &linalg::msub(&s.g, &block_diag(&s.h, Scalar::one())),
    ));
    out.push(Residual::matrix("metric_symmetric", &linalg::msub(&s.g, &linalg::transpose(&s.g))));
    out.push(Residual::vector("phi_xi", &linalg::matvec(&s.phi, &s.xi)));
    out
}

/// `(L_v ϕ)x = [v, ϕx] - ϕ[v, x]`, as the matrix `ad_v ϕ - ϕ ad_v`.
pub fn lie_derivative_affinor(alg: &LieAlgebra, phi: &Matrix, v: &[Scalar]) -> Matrix {
    let ad = alg.ad(v);
    linalg::msub(&linalg::matmul(&ad, phi), &linalg::matmul(phi, &ad))
}

/// `(L_v g)(x,y) = -g([v,x],y) - g(x,[v,y])`.
pub fn lie_derivative_metric(alg: &LieAlgebra, g: &Matrix, v: &[Scalar]) -> Matrix {
    let ad = alg.ad(v);
    let m = linalg::madd(&linalg::matmul(&linalg::transpose(&ad), g), &linalg::matmul(g, &ad));
    m.iter().map(|r| linalg::vneg(r)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormalityTensors {
    pub n1: VectorValued2Form,
    pub n2: KForm,
    pub n3: Matrix,
    pub n4: KForm,
}

pub fn normality_tensors(ext: &CentralExtension, s: &ContactMetricStructure) -> NormalityTensors {
    let alg = &ext.total;
    let n = ext.dim();
    let de = ext.d_eta();
    let torsion = kahler::nijenhuis_torsion(alg, &s.phi);
    let n1 = VectorValued2Form::from_fn(n, |i, j| {
        linalg::vadd(torsion.value(i, j), &linalg::vscale(&de.coeff(&[i, j]), &s.xi))
    });
    let eta_of = |v: &[Scalar]| s.eta.eval(&[v.to_vec()]);
    let cols = linalg::transpose(&s.phi);
    // (L_{ϕX}η)(Y) = -η([ϕX, Y]) for invariant forms.
    let mut n2 = KForm::zero(n, 2);
    for i in 0..n {
        for j in i + 1..n {
            let a = eta_of(&alg.bracket(&cols[i], &linalg::unit(n, j)).expect("dim"));
            let b = eta_of(&alg.bracket(&cols[j], &linalg::unit(n, i)).expect("dim"));
            n2.set(&[i, j], b - a);
        }
    }
    let n3 = lie_derivative_affinor(alg, &s.phi, &s.xi);
    let mut n4 = KForm::zero(n, 1);
    for i in 0..n {
        let v = eta_of(&alg.bracket(&s.xi, &linalg::unit(n, i)).expect("dim"));
        n4.set(&[i], -v);
    }
    NormalityTensors { n1, n2, n3, n4 }
}

/// `L_ξϕ = 0`.
pub fn is_k_contact(ext: &CentralExtension, s: &ContactMetricStructure) -> bool {
    linalg::is_zero_matrix(&lie_derivative_affinor(&ext.total, &s.phi, &s.xi))
}

/// `N⁽¹⁾ = 0`.
pub fn is_sasaki(ext: &CentralExtension, s: &ContactMetricStructure) -> bool {
    normality_tensors(ext, s).n1.is_zero()
}

/// `(L_ξ g)` as a residual; vanishes exactly when `ξ` is Killing.
pub fn killing_residual(ext: &CentralExtension, s: &ContactMetricStructure) -> Residual {
    Residual::matrix("killing_xi", &lie_derivative_metric(&ext.total, &s.g, &s.xi))
}

/// `N_J` of the base, lifted to the total algebra (zero on pairs containing `ξ`).
pub fn lifted_nijenhuis(ext: &CentralExtension, j: &Matrix) -> VectorValued2Form {
    let nj = kahler::nijenhuis(&ext.base, j);
    let m = ext.base.dim();
    VectorValued2Form::from_fn(m + 1, |a, b| {
        if b == m {
            linalg::zeros(m + 1)
        } else {
            lift(nj.value(a, b))
        }
    })
}

/// `[ϕ,ϕ](x,y) - N_J(X,Y) + dη(x,y)ξ`.
pub fn torsion_identity_residual(ext: &CentralExtension, s: &ContactMetricStructure) -> Residual {
    let n = ext.dim();
    let de = ext.d_eta();
    let t = kahler::nijenhuis_torsion(&ext.total, &s.phi);
    let nj = lifted_nijenhuis(ext, &s.j);
    let r = VectorValued2Form::from_fn(n, |i, j| {
        linalg::vadd(
            &linalg::vsub(t.value(i, j), nj.value(i, j)),
            &linalg::vscale(&de.coeff(&[i, j]), &s.xi),
        )
    });
    Residual::vv2("phi_torsion_vs_nijenhuis", &r)
}

/// `N⁽¹⁾(x,y) - N_J(X,Y)`.
pub fn normality_identity_residual(ext: &CentralExtension, s: &ContactMetricStructure) -> Residual {
    let n1 = normality_tensors(ext, s).n1;
    Residual::vv2("n1_vs_nijenhuis", &n1.sub(&lifted_nijenhuis(ext, &s.j)))
}

/// The `7`-dimensional Heisenberg algebra as the extension of abelian `ℝ⁶`
/// by `e1^e4 + e2^e5 + e3^e6`.
pub fn heisenberg7() -> (CentralExtension, Matrix) {
    let base = LieAlgebra::new(6);
    let omega = KForm::monomial(6, &[0, 3])
        .add(&KForm::monomial(6, &[1, 4]))
        .add(&KForm::monomial(6, &[2, 5]));
    let ext = CentralExtension::new(base, omega).expect("standard form is symplectic");
    (ext, canonical_j(3))
}

/// `J e_i = e_{i+n}`, `J e_{i+n} = -e_i`.
pub fn canonical_j(n: usize) -> Matrix {
    let mut j = linalg::zero_matrix(2 * n, 2 * n);
    for i in 0..n {
        j[i + n][i] = Scalar::one();
        j[i][i + n] = Scalar::from_int(-1);
    }
    j
}
