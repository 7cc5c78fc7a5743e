//! Multivariate polynomial GCD by recursive primitive remainder sequences.

use super::poly::Polynomial;

/// Monic greatest common divisor. `gcd(0, 0) = 0`.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one();
    }
    if a.is_monomial() || b.is_monomial() {
        return Polynomial::monomial_gcd(a, b);
    }
    let m = Polynomial::monomial_gcd(a, b);
    let a = a.exact_div(&a.monomial_content()).expect("monomial content divides");
    let b = b.exact_div(&b.monomial_content()).expect("monomial content divides");
    gcd_no_monomial(a, b).mul(&m).monic()
}

fn shares_all(a: &Polynomial, b: &Polynomial) -> Option<String> {
    a.variables()
        .iter()
        .find(|v| b.variables().binary_search(v).is_err())
        .map(|v| v.to_string())
}

fn gcd_no_monomial(mut a: Polynomial, mut b: Polynomial) -> Polynomial {
    loop {
        if a.is_constant() || b.is_constant() {
            return Polynomial::one();
        }
        // A variable missing from one side can only live in the other's content.
        if let Some(v) = shares_all(&a, &b) {
            a = content_in(&a, &v);
            continue;
        }
        if let Some(v) = shares_all(&b, &a) {
            b = content_in(&b, &v);
            continue;
        }
        break;
    }
    if a.num_terms() <= b.num_terms() {
        if b.exact_div(&a).is_some() {
            return a.monic();
        }
    } else if a.exact_div(&b).is_some() {
        return b.monic();
    }
    let x = a.variables().last().expect("non-constant").to_string();
    let ca = content_in(&a, &x);
    let cb = content_in(&b, &x);
    let c = gcd(&ca, &cb);
    let mut p = a.exact_div(&ca).expect("content divides");
    let mut q = b.exact_div(&cb).expect("content divides");
    if p.degree_in(&x) < q.degree_in(&x) {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_zero() {
        if q.degree_in(&x) == 0 {
            // Both are primitive in x, so a remainder free of x means coprime.
            return c.monic();
        }
        let r = pseudo_remainder(&p, &q, &x);
        p = q;
        q = if r.is_zero() { r } else { primitive_part(&r, &x) };
    }
    p.mul(&c).monic()
}

/// GCD of the coefficients with respect to `x`.
pub fn content_in(p: &Polynomial, x: &str) -> Polynomial {
    let coeffs = p.coefficients_in(x);
    let mut g = Polynomial::zero();
    // Sparse coefficients first keeps the fold cheap.
    let mut cs: Vec<Polynomial> = coeffs.into_iter().map(|(_, c)| c).collect();
    cs.sort_by_key(|c| c.num_terms());
    for c in cs {
        g = gcd(&g, &c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_part(p: &Polynomial, x: &str) -> Polynomial {
    let c = content_in(p, x);
    p.exact_div(&c).expect("content divides")
}

/// Pseudo-remainder of `a` by `b` with respect to `x`.
pub fn pseudo_remainder(a: &Polynomial, b: &Polynomial, x: &str) -> Polynomial {
    let d = b.degree_in(x);
    let lc = b.coefficients_in(x).into_iter().next().expect("nonzero").1;
    let mut r = a.clone();
    while !r.is_zero() {
        let k = r.degree_in(x);
        if k < d {
            break;
        }
        let lr = r.coefficients_in(x).into_iter().next().expect("nonzero").1;
        r = r.mul(&lc).sub(&b.mul(&lr).mul_var_pow(x, k - d));
    }
    r
}
