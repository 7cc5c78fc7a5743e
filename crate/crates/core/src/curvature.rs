//! Levi-Civita connection of a left-invariant metric, curvature, Ricci and
//! sectional curvature, plus the identities relating an extension to its base.

use num_traits::{Signed, Zero};

use crate::extension::{self, CentralExtension, ContactMetricStructure};
use crate::kahler;
use crate::lie::linalg::{self, Matrix, Vector};
use crate::lie::{KForm, LieAlgebra};
use crate::residual::Residual;
use crate::scalar::{Assignment, Rational, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CurvatureError {
    #[error("metric is degenerate")]
    Degenerate,
    #[error("supplied inverse does not invert the metric")]
    BadInverse,
    #[error("plane is degenerate")]
    DegeneratePlane,
    #[error(transparent)]
    Extension(#[from] extension::ExtensionError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A nondegenerate symmetric Gram matrix together with its inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct Metric {
    pub g: Matrix,
    pub inv: Matrix,
}

impl Metric {
    pub fn new(g: Matrix) -> Result<Self, CurvatureError> {
        let inv = linalg::inverse(&g).ok_or(CurvatureError::Degenerate)?;
        Ok(Metric { g, inv })
    }

    /// Uses a known inverse after checking `g · inv = I`.
    pub fn with_inverse(g: Matrix, inv: Matrix) -> Result<Self, CurvatureError> {
        if linalg::matmul(&g, &inv) != linalg::identity(g.len()) {
            return Err(CurvatureError::BadInverse);
        }
        Ok(Metric { g, inv })
    }

    pub fn dim(&self) -> usize {
        self.g.len()
    }

    pub fn pair(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        linalg::dot(x, &linalg::matvec(&self.g, y))
    }
}

/// `∇_{e_i} e_j = Σ_k Γ^k_ij e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection {
    dim: usize,
    gamma: Vec<Vector>,
}

impl Connection {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `∇_{e_i} e_j`.
    pub fn basis(&self, i: usize, j: usize) -> &Vector {
        &self.gamma[i * self.dim + j]
    }

    pub fn christoffel(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.basis(i, j)[k]
    }

    /// `∇_x y` for constant-coefficient fields.
    pub fn covariant(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let n = self.dim;
        let mut out = linalg::zeros(n);
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let c = &x[i] * &y[j];
                for (k, v) in self.basis(i, j).iter().enumerate() {
                    if !v.is_zero() {
                        out[k] += &(&c * v);
                    }
                }
            }
        }
        out
    }
}

/// Solves `2g(∇_X Y, Z) = g([X,Y],Z) + g([Z,X],Y) + g(X,[Z,Y])` on basis fields.
pub fn koszul_connection(alg: &LieAlgebra, m: &Metric) -> Connection {
    let n = alg.dim();
    let half = Scalar::ratio(1, 2);
    // gb[i][j] = g([e_i, e_j], ·) as a covector.
    let gb: Vec<Vec<Vector>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| linalg::matvec(&linalg::transpose(&m.g), alg.bracket_basis(i, j)))
                .collect()
        })
        .collect();
    let mut gamma = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let lowered: Vector = (0..n)
                .map(|l| {
                    let s = &gb[i][j][l] + &gb[l][i][j];
                    let s = s + &gb[l][j][i];
                    &s * &half
                })
                .collect();
            gamma.push(if linalg::is_zero_vec(&lowered) {
                linalg::zeros(n)
            } else {
                linalg::matvec(&linalg::transpose(&m.inv), &lowered)
            });
        }
    }
    Connection { dim: n, gamma }
}

/// `∇_{e_i}e_j - ∇_{e_j}e_i - [e_i,e_j]`.
pub fn torsion_residual(alg: &LieAlgebra, c: &Connection) -> Residual {
    let n = alg.dim();
    let mut r = Residual::new("torsion");
    for i in 0..n {
        for j in i + 1..n {
            let t = linalg::vsub(&linalg::vsub(c.basis(i, j), c.basis(j, i)), alg.bracket_basis(i, j));
            for (k, v) in t.into_iter().enumerate() {
                r.push(|| format!("(e{},e{})^{}", i + 1, j + 1, k + 1), v);
            }
        }
    }
    r
}

/// `g(∇_{e_i}e_j, e_k) + g(e_j, ∇_{e_i}e_k)`.
pub fn metric_compatibility_residual(m: &Metric, c: &Connection) -> Residual {
    let n = m.dim();
    let mut r = Residual::new("metric_compatibility");
    for i in 0..n {
        let low: Vec<Vector> = (0..n).map(|j| linalg::matvec(&m.g, c.basis(i, j))).collect();
        for j in 0..n {
            for k in j..n {
                r.push(|| format!("{},{},{}", i + 1, j + 1, k + 1), &low[j][k] + &low[k][j]);
            }
        }
    }
    r
}

/// `R(e_i,e_j)e_k = Σ_l R^l_ijk e_l`.
#[derive(Clone, Debug, PartialEq)]
pub struct Curvature {
    dim: usize,
    r: Vec<Vector>,
}

impl Curvature {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `R(e_i, e_j)e_k`.
    pub fn basis(&self, i: usize, j: usize, k: usize) -> &Vector {
        &self.r[(i * self.dim + j) * self.dim + k]
    }

    pub fn is_zero(&self) -> bool {
        self.r.iter().all(|v| linalg::is_zero_vec(v))
    }

    /// `R(x,y)z` by multilinearity.
    pub fn apply(&self, x: &[Scalar], y: &[Scalar], z: &[Scalar]) -> Vector {
        let n = self.dim;
        let mut out = linalg::zeros(n);
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if i == j || y[j].is_zero() {
                    continue;
                }
                let xy = &x[i] * &y[j];
                for k in 0..n {
                    if z[k].is_zero() {
                        continue;
                    }
                    let v = self.basis(i, j, k);
                    if linalg::is_zero_vec(v) {
                        continue;
                    }
                    let c = &xy * &z[k];
                    for l in 0..n {
                        if !v[l].is_zero() {
                            out[l] += &(&c * &v[l]);
                        }
                    }
                }
            }
        }
        out
    }

    /// Every component evaluated at a parameter assignment.
    pub fn eval(&self, a: &Assignment) -> Result<Vec<Vec<Rational>>, ScalarError> {
        self.r
            .iter()
            .map(|v| v.iter().map(|s| s.eval(a)).collect())
            .collect()
    }

    pub fn residual(&self, name: &str) -> Residual {
        let n = self.dim;
        let mut res = Residual::new(name);
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    for (l, v) in self.basis(i, j, k).iter().enumerate() {
                        res.push(|| format!("R(e{},e{})e{}^{}", i + 1, j + 1, k + 1, l + 1), v.clone());
                    }
                }
            }
        }
        res
    }
}

/// `R^l_ijk = Σ_m (Γ^m_jk Γ^l_im - Γ^m_ik Γ^l_jm - c^m_ij Γ^l_mk)`.
pub fn curvature_tensor(alg: &LieAlgebra, c: &Connection) -> Curvature {
    let n = alg.dim();
    let mut r = vec![linalg::zeros(n); n * n * n];
    for i in 0..n {
        for j in i + 1..n {
            let br = alg.bracket_basis(i, j);
            for k in 0..n {
                // ∇_i ∇_j e_k - ∇_j ∇_i e_k - ∇_{[e_i,e_j]} e_k
                let a = c.covariant(&linalg::unit(n, i), c.basis(j, k));
                let b = c.covariant(&linalg::unit(n, j), c.basis(i, k));
                let t = c.covariant(br, &linalg::unit(n, k));
                let v = linalg::vsub(&linalg::vsub(&a, &b), &t);
                r[(j * n + i) * n + k] = linalg::vneg(&v);
                r[(i * n + j) * n + k] = v;
            }
        }
    }
    Curvature { dim: n, r }
}

/// `Σ_cyc R(e_i,e_j)e_k`.
pub fn bianchi_residual(r: &Curvature) -> Residual {
    let n = r.dim();
    let mut res = Residual::new("first_bianchi");
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let s = linalg::vadd(
                    &linalg::vadd(r.basis(i, j, k), r.basis(j, k, i)),
                    r.basis(k, i, j),
                );
                for (l, v) in s.into_iter().enumerate() {
                    res.push(|| format!("({},{},{})^{}", i + 1, j + 1, k + 1, l + 1), v);
                }
            }
        }
    }
    res
}

/// `R_ijkl = g(R(e_i,e_j)e_k, e_l)`.
fn lowered(m: &Metric, r: &Curvature) -> Vec<Scalar> {
    let n = m.dim();
    let mut out = Vec::with_capacity(n * n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let v = r.basis(i, j, k);
                if linalg::is_zero_vec(v) {
                    out.extend(std::iter::repeat_n(Scalar::zero(), n));
                } else {
                    out.extend(linalg::matvec(&linalg::transpose(&m.g), v));
                }
            }
        }
    }
    out
}

/// `Ric(Y,Z) = Σ_ij G^{ij} g(R(e_i,Y)Z, e_j)`.
pub fn ricci_tensor(m: &Metric, r: &Curvature) -> Matrix {
    let n = m.dim();
    let low = lowered(m, r);
    let at = |i: usize, y: usize, z: usize, j: usize| &low[((i * n + y) * n + z) * n + j];
    let mut ric = linalg::zero_matrix(n, n);
    for y in 0..n {
        for z in 0..n {
            let mut acc = Scalar::zero();
            for i in 0..n {
                for j in 0..n {
                    let gij = &m.inv[i][j];
                    let v = at(i, y, z, j);
                    if !gij.is_zero() && !v.is_zero() {
                        acc += &(gij * v);
                    }
                }
            }
            ric[y][z] = acc;
        }
    }
    ric
}

/// `Ric(Y,Z) = tr(X ↦ R(X,Y)Z) = Σ_i R^i_{iYZ}`.
pub fn ricci_trace(r: &Curvature) -> Matrix {
    let n = r.dim();
    let mut ric = linalg::zero_matrix(n, n);
    for y in 0..n {
        for z in 0..n {
            let mut acc = Scalar::zero();
            for i in 0..n {
                acc += &r.basis(i, y, z)[i];
            }
            ric[y][z] = acc;
        }
    }
    ric
}

/// `‖R‖² = Σ R_ijkl R^ijkl`, every index raised with the inverse metric.
pub fn riemann_pseudo_norm(m: &Metric, r: &Curvature) -> Scalar {
    let n = m.dim();
    let low = lowered(m, r);
    let idx = |a: [usize; 4]| ((a[0] * n + a[1]) * n + a[2]) * n + a[3];
    let mut up = low.clone();
    for slot in 0..4 {
        let mut next = vec![Scalar::zero(); up.len()];
        for flat in 0..up.len() {
            let mut a = [flat / (n * n * n), (flat / (n * n)) % n, (flat / n) % n, flat % n];
            let target = a[slot];
            let mut acc = Scalar::zero();
            for s in 0..n {
                let gi = &m.inv[target][s];
                if gi.is_zero() {
                    continue;
                }
                a[slot] = s;
                let v = &up[idx(a)];
                if !v.is_zero() {
                    acc += &(gi * v);
                }
            }
            next[flat] = acc;
        }
        up = next;
    }
    let mut acc = Scalar::zero();
    for (a, b) in low.iter().zip(&up) {
        if !a.is_zero() && !b.is_zero() {
            acc += &(a * b);
        }
    }
    acc
}

/// `K(x,y) = g(R(x,y)y, x) / (g(x,x)g(y,y) - g(x,y)²)`.
pub fn sectional_curvature(m: &Metric, r: &Curvature, x: &[Scalar], y: &[Scalar]) -> Result<Scalar, CurvatureError> {
    let gxy = m.pair(x, y);
    let den = m.pair(x, x) * m.pair(y, y) - &gxy * &gxy;
    if den.is_zero() {
        return Err(CurvatureError::DegeneratePlane);
    }
    let num = m.pair(&r.apply(x, y, y), x);
    Ok(num.checked_div(&den)?)
}

/// Orthogonal basis with squared norms `g(f_i, f_i)`; no square roots taken.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    pub vectors: Vec<Vec<Rational>>,
    pub sq_norms: Vec<Rational>,
    /// Number of steps where every remaining vector was null and a sum of two was used.
    pub hyperbolic_steps: usize,
}

impl Frame {
    pub fn signs(&self) -> Vec<i32> {
        self.sq_norms.iter().map(|s| if s.is_positive() { 1 } else { -1 }).collect()
    }

    pub fn weights(&self) -> Vec<Rational> {
        self.sq_norms.iter().map(|s| s.recip()).collect()
    }
}

fn rpair(g: &[Vec<Rational>], x: &[Rational], y: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for i in 0..x.len() {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..y.len() {
            if !y[j].is_zero() && !g[i][j].is_zero() {
                acc += &x[i] * &g[i][j] * &y[j];
            }
        }
    }
    acc
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer().sqrt(), r.denom().sqrt());
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rational::new(n, d))
}

/// Generalized Gram–Schmidt over the rationals. Vectors whose squared norm is a
/// rational square are rescaled to `±1`.
pub fn pseudo_orthonormal_frame(g: &[Vec<Rational>]) -> Result<Frame, CurvatureError> {
    let n = g.len();
    let start = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::from_integer(1.into()) } else { Rational::zero() }).collect())
        .collect();
    pseudo_orthonormal_frame_from(g, start)
}

/// Same as [`pseudo_orthonormal_frame`], starting from the rows of `start`,
/// which must form a basis.
pub fn pseudo_orthonormal_frame_from(g: &[Vec<Rational>], start: Vec<Vec<Rational>>) -> Result<Frame, CurvatureError> {
    let mut pending = start;
    let mut frame = Frame {
        vectors: Vec::new(),
        sq_norms: Vec::new(),
        hyperbolic_steps: 0,
    };
    while !pending.is_empty() {
        let pick = pending.iter().position(|v| !rpair(g, v, v).is_zero());
        let f = match pick {
            Some(p) => pending.remove(p),
            None => {
                let mut found = None;
                'outer: for a in 0..pending.len() {
                    for b in a + 1..pending.len() {
                        if !rpair(g, &pending[a], &pending[b]).is_zero() {
                            found = Some((a, b));
                            break 'outer;
                        }
                    }
                }
                let (a, b) = found.ok_or(CurvatureError::Degenerate)?;
                frame.hyperbolic_steps += 1;
                let s: Vec<Rational> = pending[a].iter().zip(&pending[b]).map(|(x, y)| x + y).collect();
                pending.remove(a);
                s
            }
        };
        let nf = rpair(g, &f, &f);
        let (f, nf) = match rational_sqrt(&nf.abs()) {
            Some(root) => (f.iter().map(|x| x / &root).collect::<Vec<_>>(), nf.signum()),
            None => (f, nf),
        };
        for v in pending.iter_mut() {
            let c = rpair(g, v, &f) / &nf;
            if !c.is_zero() {
                for (x, y) in v.iter_mut().zip(&f) {
                    *x -= &c * y;
                }
            }
        }
        frame.vectors.push(f);
        frame.sq_norms.push(nf);
    }
    Ok(frame)
}

/// `Ric(Y,Z) = Σ_a g(R(f_a,Y)Z, f_a) / g(f_a,f_a)` at a rational point.
pub fn ricci_from_frame(
    g: &[Vec<Rational>],
    r: &[Vec<Rational>],
    frame: &Frame,
) -> Vec<Vec<Rational>> {
    let n = g.len();
    let comp = |i: usize, j: usize, k: usize| &r[(i * n + j) * n + k];
    let mut out = vec![vec![Rational::zero(); n]; n];
    for y in 0..n {
        for z in 0..n {
            let mut acc = Rational::zero();
            for (f, w) in frame.vectors.iter().zip(frame.weights()) {
                // R(f,e_y)e_z
                let mut v = vec![Rational::zero(); n];
                for i in 0..n {
                    if f[i].is_zero() {
                        continue;
                    }
                    for (l, c) in comp(i, y, z).iter().enumerate() {
                        if !c.is_zero() {
                            v[l] += &f[i] * c;
                        }
                    }
                }
                acc += rpair(g, &v, f) * w;
            }
            out[y][z] = acc;
        }
    }
    out
}

/// `(D_Zω)(X,Y) = -ω(D_Z X, Y) - ω(X, D_Z Y)` indexed `[z][x][y]`.
pub fn covariant_omega(c: &Connection, omega: &KForm) -> Vec<Matrix> {
    let n = c.dim();
    let o = omega.gram();
    (0..n)
        .map(|z| {
            let om_d: Vec<Vector> = (0..n).map(|x| linalg::matvec(&linalg::transpose(&o), c.basis(z, x))).collect();
            (0..n)
                .map(|x| (0..n).map(|y| -(&om_d[x][y]) + &om_d[y][x]).collect())
                .collect()
        })
        .collect()
}

/// `(D_X J)Y = D_X(JY) - J(D_X Y)` indexed `[x][y]`.
pub fn covariant_affinor(c: &Connection, j: &Matrix) -> Vec<Vec<Vector>> {
    let n = c.dim();
    let cols = linalg::transpose(j);
    (0..n)
        .map(|x| {
            let ex = linalg::unit(n, x);
            (0..n)
                .map(|y| linalg::vsub(&c.covariant(&ex, &cols[y]), &linalg::matvec(j, c.basis(x, y))))
                .collect()
        })
        .collect()
}

/// Everything computed for one base/extension pair.
#[derive(Clone, Debug)]
pub struct ExtensionGeometry {
    pub base_metric: Metric,
    pub base_connection: Connection,
    pub base_curvature: Curvature,
    pub base_ricci: Matrix,
    pub metric: Metric,
    pub connection: Connection,
    pub curvature: Curvature,
    pub ricci: Matrix,
    pub d_omega: Vec<Matrix>,
    pub d_j: Vec<Vec<Vector>>,
}

pub fn extension_geometry(
    ext: &CentralExtension,
    s: &ContactMetricStructure,
) -> Result<ExtensionGeometry, CurvatureError> {
    let hinv = kahler::metric_inverse(&ext.omega, &s.j).map_err(extension::ExtensionError::from)?;
    let base_metric = Metric::with_inverse(s.h.clone(), hinv)?;
    let base_connection = koszul_connection(&ext.base, &base_metric);
    let base_curvature = curvature_tensor(&ext.base, &base_connection);
    let base_ricci = ricci_tensor(&base_metric, &base_curvature);
    let metric = Metric::with_inverse(s.g.clone(), extension::metric_inverse(ext, s)?)?;
    let connection = koszul_connection(&ext.total, &metric);
    let curvature = curvature_tensor(&ext.total, &connection);
    let ricci = ricci_tensor(&metric, &curvature);
    let d_omega = covariant_omega(&base_connection, &ext.omega);
    let d_j = covariant_affinor(&base_connection, &s.j);
    Ok(ExtensionGeometry {
        base_metric,
        base_connection,
        base_curvature,
        base_ricci,
        metric,
        connection,
        curvature,
        ricci,
        d_omega,
        d_j,
    })
}

/// Residuals of every identity expressing the extension's connection, curvature
/// and Ricci tensor through base data. Names are stable and used in reports.
pub fn verify_extension_formulas(
    ext: &CentralExtension,
    s: &ContactMetricStructure,
    geo: &ExtensionGeometry,
) -> Vec<Residual> {
    let m = ext.base.dim();
    let n = m + 1;
    let xi = ext.xi();
    let e = |i: usize| linalg::unit(n, i);
    let half = Scalar::ratio(1, 2);
    let quarter = Scalar::ratio(1, 4);
    let om = |i: usize, k: usize| ext.omega.coeff(&[i, k]);
    let jcol = |i: usize| extension::lift(&linalg::transpose(&s.j)[i]);
    let h = &s.h;
    let nabla = &geo.connection;
    let curv = &geo.curvature;

    let mut out = Vec::new();

    let mut r = Residual::new("connection_base_pair");
    let mut rx = Residual::new("connection_x_xi");
    let mut rxx = Residual::new("connection_xi_x");
    for i in 0..m {
        for k in 0..m {
            let expect = linalg::vadd(
                &extension::lift(geo.base_connection.basis(i, k)),
                &linalg::vscale(&(&half * &om(i, k)), &xi),
            );
            for (l, v) in linalg::vsub(nabla.basis(i, k), &expect).into_iter().enumerate() {
                r.push(|| format!("D(e{})e{}^{}", i + 1, k + 1, l + 1), v);
            }
        }
        let target = linalg::vscale(&half, &jcol(i));
        for (l, v) in linalg::vadd(nabla.basis(i, m), &target).into_iter().enumerate() {
            rx.push(|| format!("e{}^{}", i + 1, l + 1), v);
        }
        for (l, v) in linalg::vadd(nabla.basis(m, i), &target).into_iter().enumerate() {
            rxx.push(|| format!("e{}^{}", i + 1, l + 1), v);
        }
    }
    out.push(r);
    out.push(rx);
    out.push(rxx);
    out.push(Residual::vector("connection_xi_xi", nabla.basis(m, m)));

    let dj = |x: usize, y: usize| extension::lift(&geo.d_j[x][y]);
    let rh = |x: usize, y: usize, z: usize| extension::lift(geo.base_curvature.basis(x, y, z));
    let hz = |a: usize, b: usize| h[a][b].clone();
    // h(Z, JY) = Σ_k h[z][k] J[k][y]
    let h_zjy = |z: usize, y: usize| -> Scalar {
        let mut acc = Scalar::zero();
        for k in 0..m {
            acc += &(&h[z][k] * &s.j[k][y]);
        }
        acc
    };

    let mut t_xyz = Residual::new("curvature_xyz");
    let mut c_xyz = Residual::new("sasaki_curvature_xyz");
    let mut t_xyxi = Residual::new("curvature_xy_xi");
    let mut c_xyxi = Residual::new("sasaki_curvature_xy_xi");
    for x in 0..m {
        for y in x + 1..m {
            for z in 0..m {
                let common = linalg::vadd(
                    &rh(x, y, z),
                    &linalg::vscale(&(&half * &om(x, y)), &jcol(z)),
                );
                let general = linalg::vsub(
                    &linalg::vsub(&common, &linalg::vscale(&(&half * &geo.d_omega[z][x][y]), &xi)),
                    &linalg::vscale(
                        &quarter,
                        &linalg::vsub(&linalg::vscale(&om(y, z), &jcol(x)), &linalg::vscale(&om(x, z), &jcol(y))),
                    ),
                );
                let special = linalg::vsub(
                    &common,
                    &linalg::vscale(
                        &quarter,
                        &linalg::vsub(
                            &linalg::vscale(&h_zjy(z, y), &jcol(x)),
                            &linalg::vscale(&h_zjy(z, x), &jcol(y)),
                        ),
                    ),
                );
                let actual = curv.basis(x, y, z);
                for (l, v) in linalg::vsub(actual, &general).into_iter().enumerate() {
                    t_xyz.push(|| format!("R(e{},e{})e{}^{}", x + 1, y + 1, z + 1, l + 1), v);
                }
                for (l, v) in linalg::vsub(actual, &special).into_iter().enumerate() {
                    c_xyz.push(|| format!("R(e{},e{})e{}^{}", x + 1, y + 1, z + 1, l + 1), v);
                }
            }
            let actual = curv.basis(x, y, m);
            let general = linalg::vscale(&-&half, &linalg::vsub(&dj(x, y), &dj(y, x)));
            for (l, v) in linalg::vsub(actual, &general).into_iter().enumerate() {
                t_xyxi.push(|| format!("R(e{},e{})xi^{}", x + 1, y + 1, l + 1), v);
            }
            for (l, v) in actual.iter().enumerate() {
                c_xyxi.push(|| format!("R(e{},e{})xi^{}", x + 1, y + 1, l + 1), v.clone());
            }
        }
    }

    let mut t_xxiz = Residual::new("curvature_x_xi_z");
    let mut c_xxiz = Residual::new("sasaki_curvature_x_xi_z");
    let mut t_xxixi = Residual::new("curvature_x_xi_xi");
    for x in 0..m {
        for z in 0..m {
            let actual = curv.basis(x, m, z);
            let gxz = linalg::vscale(&(&quarter * &hz(x, z)), &xi);
            let general = linalg::vsub(&linalg::vscale(&-&half, &dj(x, z)), &gxz);
            let special = linalg::vneg(&gxz);
            for (l, v) in linalg::vsub(actual, &general).into_iter().enumerate() {
                t_xxiz.push(|| format!("R(e{},xi)e{}^{}", x + 1, z + 1, l + 1), v);
            }
            for (l, v) in linalg::vsub(actual, &special).into_iter().enumerate() {
                c_xxiz.push(|| format!("R(e{},xi)e{}^{}", x + 1, z + 1, l + 1), v);
            }
        }
        let d = linalg::vsub(curv.basis(x, m, m), &linalg::vscale(&quarter, &e(x)));
        for (l, v) in d.into_iter().enumerate() {
            t_xxixi.push(|| format!("R(e{},xi)xi^{}", x + 1, l + 1), v);
        }
    }
    let c_xxixi = Residual {
        name: "sasaki_curvature_x_xi_xi".into(),
        entries: t_xxixi.entries.clone(),
    };
    out.extend([t_xyz, t_xyxi, t_xxiz, t_xxixi, c_xyz, c_xyxi, c_xxiz, c_xxixi]);

    let mut ric_base = Residual::new("ricci_base_directions");
    let mut ric_mixed = Residual::new("ricci_base_xi");
    for y in 0..m {
        for z in 0..m {
            let v = &geo.ricci[y][z] - &geo.base_ricci[y][z] + &half * &hz(y, z);
            ric_base.push(|| format!("({},{})", y + 1, z + 1), v);
        }
        ric_mixed.push(|| format!("({},xi)", y + 1), geo.ricci[y][m].clone());
    }
    let mut ric_xi = Residual::new("ricci_xi_xi");
    ric_xi.push(String::new, &geo.ricci[m][m] - Scalar::ratio(m as i64, 4));
    out.extend([ric_base, ric_mixed, ric_xi]);
    out
}

/// `R(e_i, ξ)ξ - ¼e_i` over base directions; the form that survives without integrability.
pub fn reeb_curvature_residual(ext: &CentralExtension, r: &Curvature) -> Residual {
    let m = ext.base.dim();
    let mut res = Residual::new("reeb_curvature_quarter");
    for x in 0..m {
        let d = linalg::vsub(r.basis(x, m, m), &linalg::vscale(&Scalar::ratio(1, 4), &linalg::unit(m + 1, x)));
        for (l, v) in d.into_iter().enumerate() {
            res.push(|| format!("e{}^{}", x + 1, l + 1), v);
        }
    }
    res
}

/// Sectional curvature of every `(ξ, e_i)` plane that is nondegenerate.
pub fn reeb_sectional_curvatures(ext: &CentralExtension, m: &Metric, r: &Curvature) -> Vec<(usize, Result<Scalar, CurvatureError>)> {
    let n = ext.dim();
    let xi = ext.xi();
    (0..n - 1)
        .map(|i| (i + 1, sectional_curvature(m, r, &xi, &linalg::unit(n, i))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::{build_contact_structure, heisenberg7};
    use crate::kahler::{h14_algebra, h14_family_symbolic, h14_omega};
    use crate::scalar::rat;

    fn heis3() -> LieAlgebra {
        let mut h = LieAlgebra::new(3);
        h.set_bracket(0, 1, &linalg::unit(3, 2)).unwrap();
        h
    }

    #[test]
    fn heisenberg3_connection() {
        let m = Metric::new(linalg::identity(3)).unwrap();
        let c = koszul_connection(&heis3(), &m);
        let h = Scalar::ratio(1, 2);
        assert_eq!(c.basis(0, 1), &linalg::vscale(&h, &linalg::unit(3, 2)));
        assert_eq!(c.basis(0, 2), &linalg::vscale(&-&h, &linalg::unit(3, 1)));
        assert_eq!(c.basis(1, 2), &linalg::vscale(&h, &linalg::unit(3, 0)));
        assert!(torsion_residual(&heis3(), &c).is_zero());
        assert!(metric_compatibility_residual(&m, &c).is_zero());
        let r = curvature_tensor(&heis3(), &c);
        assert!(bianchi_residual(&r).is_zero());
        assert_eq!(ricci_tensor(&m, &r), ricci_trace(&r));
    }

    #[test]
    fn abelian_is_flat() {
        let a = LieAlgebra::new(4);
        let g = vec![
            vec![Scalar::from_int(2), Scalar::one(), Scalar::zero(), Scalar::zero()],
            vec![Scalar::one(), Scalar::zero(), Scalar::zero(), Scalar::zero()],
            vec![Scalar::zero(), Scalar::zero(), Scalar::from_int(-1), Scalar::zero()],
            vec![Scalar::zero(), Scalar::zero(), Scalar::zero(), Scalar::from_int(3)],
        ];
        let m = Metric::new(g).unwrap();
        let c = koszul_connection(&a, &m);
        assert!((0..4).all(|i| (0..4).all(|j| linalg::is_zero_vec(c.basis(i, j)))));
        let r = curvature_tensor(&a, &c);
        assert!(r.is_zero());
        assert!(riemann_pseudo_norm(&m, &r).is_zero());
    }

    #[test]
    fn diagonal_frame_keeps_squared_norms() {
        let g = vec![vec![rat(2, 1), rat(0, 1)], vec![rat(0, 1), rat(-3, 1)]];
        let f = pseudo_orthonormal_frame(&g).unwrap();
        assert_eq!(f.sq_norms, vec![rat(2, 1), rat(-3, 1)]);
        assert_eq!(f.weights(), vec![rat(1, 2), rat(-1, 3)]);
        let id = vec![vec![rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 1)]];
        assert_eq!(pseudo_orthonormal_frame(&id).unwrap().signs(), vec![1, 1]);
        let hyp = vec![vec![rat(0, 1), rat(1, 1)], vec![rat(1, 1), rat(0, 1)]];
        let f = pseudo_orthonormal_frame(&hyp).unwrap();
        assert_eq!(f.hyperbolic_steps, 1);
        assert_eq!(f.signs().iter().sum::<i32>(), 0);
    }

    #[test]
    fn heisenberg7_formulas() {
        let (ext, j) = heisenberg7();
        let s = build_contact_structure(&ext, &j).unwrap();
        let geo = extension_geometry(&ext, &s).unwrap();
        for r in verify_extension_formulas(&ext, &s, &geo) {
            assert!(r.is_zero(), "{}: {}", r.name, r.render());
        }
        assert_eq!(geo.ricci[6][6], Scalar::ratio(3, 2));
    }

    #[test]
    fn h14_family_is_flat_and_extension_formulas_hold() {
        let ext = CentralExtension::new(h14_algebra(), h14_omega()).unwrap();
        let s = build_contact_structure(&ext, &h14_family_symbolic()).unwrap();
        let geo = extension_geometry(&ext, &s).unwrap();
        assert!(geo.base_curvature.is_zero());
        assert!(linalg::is_zero_matrix(&geo.base_ricci));
        assert!(geo.d_omega.iter().all(linalg::is_zero_matrix));
        for r in verify_extension_formulas(&ext, &s, &geo) {
            assert!(r.is_zero(), "{}: {}", r.name, r.render());
        }
        for (_, k) in reeb_sectional_curvatures(&ext, &geo.metric, &geo.curvature) {
            if let Ok(k) = k {
                assert_eq!(k, Scalar::ratio(1, 4));
            }
        }
    }
}
