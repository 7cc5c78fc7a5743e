use nilcontact::kahler::{
    self, build_h14_family, h14_algebra, h14_family_symbolic, h14_omega, KahlerError, H14_PARAMS,
};
use nilcontact::lie::linalg::{self, Matrix};
use nilcontact::lie::{KForm, LieAlgebra};
use nilcontact::scalar::{rat, Assignment, Scalar};

fn standard_pair() -> (KForm, Matrix) {
    let mut omega = KForm::zero(6, 2);
    let mut j = linalg::zero_matrix(6, 6);
    for i in 0..3 {
        omega.set(&[i, i + 3], Scalar::one());
        // J e_i = e_{i+3}, J e_{i+3} = -e_i
        j[i + 3][i] = Scalar::one();
        j[i][i + 3] = Scalar::from_int(-1);
    }
    (omega, j)
}

fn special_point() -> Assignment {
    H14_PARAMS
        .iter()
        .map(|p| (p.to_string(), if *p == "psi12" { rat(1, 1) } else { rat(0, 1) }))
        .collect()
}

fn ints(rows: &[[i64; 6]]) -> Matrix {
    rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect()
}

#[test]
fn compatibility() {
    let (omega, j) = standard_pair();
    assert!(kahler::is_compatible(&omega, &j).unwrap());
    assert!(kahler::is_compatible(&h14_omega(), &h14_family_symbolic()).unwrap());
    let mut diag = linalg::identity(6);
    diag[0][0] = Scalar::from_int(2);
    assert!(matches!(kahler::is_compatible(&omega, &diag), Err(KahlerError::NotAlmostComplex)));
}

#[test]
fn associated_metric() {
    let (omega, j) = standard_pair();
    let h = kahler::metric_from(&omega, &j).unwrap();
    assert_eq!(h, linalg::identity(6));

    let j = h14_family_symbolic();
    let h = kahler::metric_from(&h14_omega(), &j).unwrap();
    let o = kahler::omega_matrix(&h14_omega());
    for a in 0..6 {
        for b in 0..6 {
            // h(e_a, e_b) = ω(e_a, J e_b)
            let want: Scalar = (0..6).map(|c| &o[a][c] * &j[c][b]).sum();
            assert_eq!(h[a][b], want);
        }
    }
    let jt = linalg::transpose(&j);
    assert_eq!(linalg::matmul(&linalg::matmul(&jt, &h), &j), h);

    let at = special_point();
    let hv: Matrix = h.iter().map(|r| r.iter().map(|x| Scalar::from_rational(x.eval(&at).unwrap())).collect()).collect();
    assert!(linalg::is_symmetric(&hv));
    let (p, q) = kahler::signature(&h, &at).unwrap();
    assert_eq!(p + q, 6);
    assert!(q >= 1 && p >= 1);
}

#[test]
fn nijenhuis() {
    let (_, j) = standard_pair();
    assert!(kahler::nijenhuis(&LieAlgebra::new(6), &j).is_zero());
    let j = h14_family_symbolic();
    assert!(kahler::nijenhuis(&h14_algebra(), &j).is_zero());
    let mut tampered = j.clone();
    tampered[1][0] = -&tampered[1][0];
    let n = kahler::nijenhuis(&h14_algebra(), &tampered);
    assert!(!n.nonzero_components().is_empty());
}

#[test]
fn nijenhuis_torsion_of_trivial_affinors() {
    let h = h14_algebra();
    assert!(kahler::nijenhuis_torsion(&h, &linalg::zero_matrix(6, 6)).is_zero());
    assert!(kahler::nijenhuis_torsion(&h, &linalg::identity(6)).is_zero());
}

#[test]
fn psi_family_entries() {
    let j = h14_family_symbolic();
    assert!(linalg::is_zero_matrix(&kahler::almost_complex_residual(&j)));
    let at = special_point();
    let psi: [Scalar; 6] = H14_PARAMS.map(|p| Scalar::from_rational(at[p].clone()));
    let jv = build_h14_family(&psi).unwrap();
    assert_eq!(jv[1][0], Scalar::from_int(-1));
    assert!(jv[5][3].is_zero());
    assert!(jv[4][1].is_zero());
    for (a, row) in j.iter().enumerate() {
        for (b, x) in row.iter().enumerate() {
            assert_eq!(x.eval(&at).unwrap(), jv[a][b].as_rational().unwrap());
        }
    }
    let mut zero = psi.clone();
    zero[1] = Scalar::zero();
    assert!(build_h14_family(&zero).is_err());
}

#[test]
fn closedness() {
    assert!(kahler::closedness_residual(&h14_algebra(), &h14_omega()).is_zero());
    let bad = h14_omega().add(&KForm::monomial(6, &[3, 5]));
    assert!(!kahler::closedness_residual(&h14_algebra(), &bad).is_zero());
}

#[test]
fn signatures() {
    let at = Assignment::new();
    assert_eq!(kahler::signature(&linalg::identity(3), &at).unwrap(), (3, 0));
    let d = vec![vec![Scalar::one(), Scalar::zero()], vec![Scalar::zero(), Scalar::from_int(-1)]];
    assert_eq!(kahler::signature(&d, &at).unwrap(), (1, 1));
    // zero diagonal forces a 2x2 pivot
    let hyp = ints(&[
        [0, 1, 0, 0, 0, 0],
        [1, 0, 0, 0, 0, 0],
        [0, 0, 0, 2, 0, 0],
        [0, 0, 2, 0, 0, 0],
        [0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 3],
    ]);
    assert_eq!(kahler::signature(&hyp, &at).unwrap(), (4, 2));
}
