use nilcontact::catalog::{embedded_catalog, find, parse_algebra, Shape};
use nilcontact::curvature::{
    covariant_affinor, covariant_omega, curvature_tensor, extension_geometry, koszul_connection,
    metric_compatibility_residual, pseudo_orthonormal_frame, ricci_tensor, riemann_pseudo_norm, sectional_curvature,
    torsion_residual, verify_extension_formulas, Metric,
};
use nilcontact::extension::{build_contact_structure, CentralExtension, ContactMetricStructure};
use nilcontact::kahler::{self, h14_algebra, h14_family_symbolic, h14_omega};
use nilcontact::lie::linalg::{self, unit, Vector};
use nilcontact::lie::LieAlgebra;
use nilcontact::scalar::{rat, Assignment, Rational, Scalar};

fn half(v: &[Scalar]) -> Vector {
    linalg::vscale(&Scalar::ratio(1, 2), v)
}

fn structure(key: &str) -> (CentralExtension, ContactMetricStructure) {
    let cat = embedded_catalog();
    let entry = find(&cat, key).unwrap();
    let Shape::Extension(ext) = entry.shape() else { panic!("{key}") };
    let s = build_contact_structure(&ext, &entry.j_samples[0].matrix).unwrap();
    (ext, s)
}

fn g14_point() -> Assignment {
    ["psi11", "psi12", "psi41", "psi42", "psi51", "psi61"]
        .iter()
        .zip([1, 2, 3, -1, 2, 1])
        .map(|(p, v)| (p.to_string(), rat(v, 1)))
        .collect()
}

#[test]
fn heisenberg3_levi_civita() {
    let h3 = parse_algebra("dim 3\n[e1,e2] = e3\n", "h3").unwrap().algebra;
    let m = Metric::new(linalg::identity(3)).unwrap();
    let c = koszul_connection(&h3, &m);
    let e = |i: usize| unit(3, i - 1);
    assert_eq!(c.covariant(&e(1), &e(2)), half(&e(3)));
    assert_eq!(c.covariant(&e(1), &e(3)), half(&linalg::vneg(&e(2))));
    assert_eq!(c.covariant(&e(2), &e(3)), half(&e(1)));
    assert!(torsion_residual(&h3, &c).is_zero());
    assert!(metric_compatibility_residual(&m, &c).is_zero());
}

#[test]
fn abelian_is_flat() {
    let a = LieAlgebra::new(4);
    let mut g = linalg::identity(4);
    g[2][2] = Scalar::from_int(-3);
    g[0][1] = Scalar::from_int(2);
    g[1][0] = Scalar::from_int(2);
    let m = Metric::new(g).unwrap();
    let c = koszul_connection(&a, &m);
    assert!((0..4).all(|i| (0..4).all(|j| linalg::is_zero_vec(c.basis(i, j)))));
    let r = curvature_tensor(&a, &c);
    assert!(r.is_zero());
    assert!(linalg::is_zero_matrix(&ricci_tensor(&m, &r)));
    assert!(riemann_pseudo_norm(&m, &r).is_zero());
    assert!(sectional_curvature(&m, &r, &unit(4, 0), &unit(4, 3)).unwrap().is_zero());
}

#[test]
fn h14_family_is_flat_and_parallel() {
    let (h, omega, j) = (h14_algebra(), h14_omega(), h14_family_symbolic());
    let m = Metric::new(kahler::metric_from(&omega, &j).unwrap()).unwrap();
    let c = koszul_connection(&h, &m);
    let r = curvature_tensor(&h, &c);
    assert!(r.is_zero());
    assert!(linalg::is_zero_matrix(&ricci_tensor(&m, &r)));
    assert!(riemann_pseudo_norm(&m, &r).is_zero());
    assert!(covariant_omega(&c, &omega).iter().all(linalg::is_zero_matrix));
    assert!(covariant_affinor(&c, &j).iter().flatten().all(|v| linalg::is_zero_vec(v)));
}

#[test]
fn reeb_direction_on_g14_1() {
    let (ext, s) = structure("g14_1");
    let geo = extension_geometry(&ext, &s).unwrap();
    let xi = ext.xi();
    assert!(linalg::is_zero_vec(&geo.connection.covariant(&xi, &xi)));
    for i in 0..6 {
        let x = unit(7, i);
        let jx = linalg::matvec(&s.phi, &x);
        let want = half(&linalg::vneg(&jx));
        assert_eq!(geo.connection.covariant(&x, &xi), want);
        assert_eq!(geo.curvature.apply(&x, &xi, &xi), linalg::vscale(&Scalar::ratio(1, 4), &x));
    }
    let k = sectional_curvature(&geo.metric, &geo.curvature, &xi, &unit(7, 0)).unwrap();
    assert_eq!(k, Scalar::ratio(1, 4));
    for r in verify_extension_formulas(&ext, &s, &geo) {
        assert!(r.is_zero(), "{}: {}", r.name, r.render());
    }
}

#[test]
fn values_at_a_sample_point() {
    let (ext, s) = structure("g14_1");
    let geo = extension_geometry(&ext, &s).unwrap();
    let at = g14_point();
    let (x, y) = (unit(7, 0), unit(7, 1));
    let k = sectional_curvature(&geo.metric, &geo.curvature, &x, &y).unwrap();
    // direct: g(R(x,y)y, x) / (g(x,x)g(y,y) - g(x,y)^2)
    let num = geo.metric.pair(&geo.curvature.apply(&x, &y, &y), &x);
    let den = &(&geo.metric.pair(&x, &x) * &geo.metric.pair(&y, &y)) - &geo.metric.pair(&x, &y).pow(2);
    let den = den.eval(&at).unwrap();
    assert!(den != rat(0, 1));
    assert_eq!(k.eval(&at).unwrap(), num.eval(&at).unwrap() / den);
    let norm = riemann_pseudo_norm(&geo.metric, &geo.curvature);
    assert!(norm.eval(&at).is_ok());
    assert!(!norm.is_zero());
}

#[test]
fn frames() {
    let id: Vec<Vec<Rational>> = (0..3).map(|i| (0..3).map(|j| rat(i64::from(i == j), 1)).collect()).collect();
    let f = pseudo_orthonormal_frame(&id).unwrap();
    assert_eq!(f.vectors, id);
    assert_eq!(f.signs(), vec![1, 1, 1]);
    let d = vec![vec![rat(2, 1), rat(0, 1)], vec![rat(0, 1), rat(-3, 1)]];
    let f = pseudo_orthonormal_frame(&d).unwrap();
    assert_eq!(f.sq_norms, vec![rat(2, 1), rat(-3, 1)]);
    assert_eq!(f.weights(), vec![rat(1, 2), rat(-1, 3)]);
    let hyperbolic = vec![vec![rat(0, 1), rat(1, 1)], vec![rat(1, 1), rat(0, 1)]];
    let f = pseudo_orthonormal_frame(&hyperbolic).unwrap();
    assert_eq!(f.hyperbolic_steps, 1);
    assert_eq!(f.signs().iter().sum::<i32>(), 0);
}

#[test]
fn nonintegrable_sample() {
    let (ext, s) = structure("g19");
    let geo = extension_geometry(&ext, &s).unwrap();
    assert!(!geo.d_j.iter().flatten().all(|v| linalg::is_zero_vec(v)));
    for r in verify_extension_formulas(&ext, &s, &geo) {
        let general = r.name.starts_with("connection_") || r.name.starts_with("curvature_");
        if general {
            assert!(r.is_zero(), "{}: {}", r.name, r.render());
        }
    }
    let short = verify_extension_formulas(&ext, &s, &geo)
        .into_iter()
        .filter(|r| r.name.starts_with("sasaki_curvature_"))
        .any(|r| !r.is_zero());
    assert!(short);
}
