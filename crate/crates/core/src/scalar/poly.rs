//! Sparse multivariate polynomials over the rationals.
//!
//! Each polynomial carries its own sorted variable list; binary operations
//! align the two lists first. Monomials pack up to [`MAX_VARS`] exponents of
//! at most 255 into a `u128`, with the first variable in the most
//! significant byte, so that comparing `(total degree, packed)` is exactly
//! graded-lexicographic order.

use std::borrow::Cow;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::{Rational, ScalarError};

/// Maximum number of distinct variables in a single polynomial.
pub const MAX_VARS: usize = 16;

pub type Symbol = Arc<str>;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub(crate) struct Monomial {
    deg: u16,
    packed: u128,
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg
            .cmp(&other.deg)
            .then_with(|| self.packed.cmp(&other.packed))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[inline]
fn shift(i: usize) -> u32 {
    ((MAX_VARS - 1 - i) * 8) as u32
}

impl Monomial {
    pub(crate) const ONE: Monomial = Monomial { deg: 0, packed: 0 };

    pub(crate) fn from_exponents(exps: &[u32]) -> Monomial {
        assert!(exps.len() <= MAX_VARS, "too many variables");
        let mut m = Monomial::ONE;
        for (i, &e) in exps.iter().enumerate() {
            assert!(e < 256, "exponent overflow");
            m.packed |= (e as u128) << shift(i);
            m.deg += e as u16;
        }
        m
    }

    #[inline]
    pub(crate) fn exp(&self, i: usize) -> u32 {
        ((self.packed >> shift(i)) & 0xff) as u32
    }

    #[inline]
    pub(crate) fn degree(&self) -> u32 {
        self.deg as u32
    }

    #[inline]
    fn mul(self, other: Monomial) -> Monomial {
        assert!(self.deg as u32 + other.deg as u32 <= 255, "degree overflow");
        Monomial {
            deg: self.deg + other.deg,
            packed: self.packed + other.packed,
        }
    }

    #[inline]
    fn divides(&self, other: &Monomial) -> bool {
        if self.deg > other.deg {
            return false;
        }
        (0..MAX_VARS).all(|i| self.exp(i) <= other.exp(i))
    }

    #[inline]
    fn div(self, other: Monomial) -> Monomial {
        Monomial {
            deg: self.deg - other.deg,
            packed: self.packed - other.packed,
        }
    }

    fn with_exp(self, i: usize, e: u32) -> Monomial {
        let old = self.exp(i);
        let cleared = self.packed & !(0xffu128 << shift(i));
        Monomial {
            deg: self.deg - old as u16 + e as u16,
            packed: cleared | ((e as u128) << shift(i)),
        }
    }

    fn min(self, other: Monomial) -> Monomial {
        let mut out = Monomial::ONE;
        for i in 0..MAX_VARS {
            let e = self.exp(i).min(other.exp(i));
            out = out.with_exp(i, e);
        }
        out
    }

    fn remap(self, map: &[usize]) -> Monomial {
        let mut out = Monomial::ONE;
        for (old, &new) in map.iter().enumerate() {
            let e = self.exp(old);
            if e != 0 {
                out.packed |= (e as u128) << shift(new);
                out.deg += e as u16;
            }
        }
        out
    }
}

/// A polynomial in finitely many named variables with rational coefficients.
///
/// Canonical form: no zero coefficients, terms sorted by descending
/// graded-lexicographic order, and the variable list holds exactly the
/// variables that occur.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    vars: Arc<[Symbol]>,
    terms: Vec<(Monomial, Rational)>,
}

fn empty_vars() -> Arc<[Symbol]> {
    thread_local! {
        static EMPTY: Arc<[Symbol]> = Arc::from(Vec::<Symbol>::new());
    }
    EMPTY.with(|e| e.clone())
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial {
            vars: empty_vars(),
            terms: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            vars: empty_vars(),
            terms: vec![(Monomial::ONE, c)],
        }
    }

    pub fn var(name: &str) -> Self {
        Polynomial {
            vars: Arc::from(vec![Symbol::from(name)]),
            terms: vec![(Monomial::from_exponents(&[1]), Rational::one())],
        }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs over `vars`.
    /// Variables need not be sorted; duplicate monomials are summed.
    pub fn from_terms(vars: &[&str], terms: &[(Vec<u32>, Rational)]) -> Self {
        let mut order: Vec<usize> = (0..vars.len()).collect();
        order.sort_by(|&a, &b| vars[a].cmp(vars[b]));
        let sorted: Vec<Symbol> = order.iter().map(|&i| Symbol::from(vars[i])).collect();
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (exps, c) in terms {
            let mut e = vec![0u32; vars.len()];
            for (new, &old) in order.iter().enumerate() {
                e[new] = exps[old];
            }
            let m = Monomial::from_exponents(&e);
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        let terms = acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect();
        Polynomial {
            vars: Arc::from(sorted),
            terms,
        }
        .trimmed()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == Monomial::ONE && self.terms[0].1.is_one()
    }

    /// The value of a constant polynomial (zero included).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if *m == Monomial::ONE => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn variables(&self) -> &[Symbol] {
        &self.vars
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map(|(m, _)| m.degree()).unwrap_or(0)
    }

    fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.binary_search_by(|v| (**v).cmp(name)).ok()
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        match self.var_index(name) {
            Some(i) => self.terms.iter().map(|(m, _)| m.exp(i)).max().unwrap_or(0),
            None => 0,
        }
    }

    /// Leading coefficient under graded-lexicographic order.
    pub fn leading_coefficient(&self) -> Rational {
        self.terms
            .first()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Positive rational `k` such that `k * self` has coprime integer
    /// coefficients.
    pub fn integer_normalizer(&self) -> Rational {
        use num_integer::Integer;
        let mut l = num_bigint::BigInt::one();
        let mut g = num_bigint::BigInt::zero();
        for (_, c) in &self.terms {
            l = l.lcm(c.denom());
            g = g.gcd(c.numer());
        }
        if g.is_zero() {
            return Rational::one();
        }
        Rational::new(l, g)
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Polynomial {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (*m, a * c))
                .collect(),
        }
    }

    fn trimmed(mut self) -> Polynomial {
        if self.terms.is_empty() {
            self.vars = empty_vars();
            return self;
        }
        let used = self.terms.iter().fold(0u128, |acc, (m, _)| acc | m.packed);
        let keep: Vec<usize> = (0..self.vars.len())
            .filter(|&i| (used >> shift(i)) & 0xff != 0)
            .collect();
        if keep.len() == self.vars.len() {
            return self;
        }
        let mut map = vec![0usize; self.vars.len()];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        let vars: Vec<Symbol> = keep.iter().map(|&i| self.vars[i].clone()).collect();
        // Dropping variables that never occur does not change relative order.
        let terms = self
            .terms
            .into_iter()
            .map(|(m, c)| (m.remap(&map), c))
            .collect();
        Polynomial {
            vars: if vars.is_empty() { empty_vars() } else { Arc::from(vars) },
            terms,
        }
    }

    fn remapped_terms(&self, vars: &Arc<[Symbol]>) -> Cow<'_, [(Monomial, Rational)]> {
        if Arc::ptr_eq(&self.vars, vars) || *self.vars == **vars {
            return Cow::Borrowed(&self.terms);
        }
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.binary_search(v).expect("variable missing from union"))
            .collect();
        let mut terms: Vec<(Monomial, Rational)> = self
            .terms
            .iter()
            .map(|(m, c)| (m.remap(&map), c.clone()))
            .collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Cow::Owned(terms)
    }

    fn union_vars(a: &Polynomial, b: &Polynomial) -> Arc<[Symbol]> {
        if Arc::ptr_eq(&a.vars, &b.vars) || a.vars == b.vars {
            return a.vars.clone();
        }
        if b.vars.is_empty() {
            return a.vars.clone();
        }
        if a.vars.is_empty() {
            return b.vars.clone();
        }
        let mut out: Vec<Symbol> = Vec::with_capacity(a.vars.len() + b.vars.len());
        let (mut i, mut j) = (0, 0);
        while i < a.vars.len() || j < b.vars.len() {
            if j >= b.vars.len() || (i < a.vars.len() && a.vars[i] < b.vars[j]) {
                out.push(a.vars[i].clone());
                i += 1;
            } else if i >= a.vars.len() || b.vars[j] < a.vars[i] {
                out.push(b.vars[j].clone());
                j += 1;
            } else {
                out.push(a.vars[i].clone());
                i += 1;
                j += 1;
            }
        }
        assert!(out.len() <= MAX_VARS, "too many variables in one polynomial");
        if out.len() == a.vars.len() {
            return a.vars.clone();
        }
        if out.len() == b.vars.len() {
            return b.vars.clone();
        }
        Arc::from(out)
    }

    fn add_impl(&self, other: &Polynomial, negate: bool) -> Polynomial {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { other.neg() } else { other.clone() };
        }
        let vars = Self::union_vars(self, other);
        let a = self.remapped_terms(&vars);
        let b = other.remapped_terms(&vars);
        let mut terms = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let ord = if i >= a.len() {
                Ordering::Less
            } else if j >= b.len() {
                Ordering::Greater
            } else {
                a[i].0.cmp(&b[j].0)
            };
            match ord {
                Ordering::Greater => {
                    terms.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    terms.push((b[j].0, c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        terms.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Polynomial { vars, terms }.trimmed()
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.add_impl(other, false)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add_impl(other, true)
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        let vars = Self::union_vars(self, other);
        let a = self.remapped_terms(&vars);
        let b = other.remapped_terms(&vars);
        let mut prods: Vec<(Monomial, Rational)> = Vec::with_capacity(a.len() * b.len());
        for (ma, ca) in a.iter() {
            for (mb, cb) in b.iter() {
                prods.push((ma.mul(*mb), ca * cb));
            }
        }
        Polynomial {
            vars,
            terms: combine(prods),
        }
        .trimmed()
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Polynomial) -> Option<Polynomial> {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        if self.is_zero() {
            return Some(Polynomial::zero());
        }
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        if !divisor.vars.iter().all(|v| self.var_index(v).is_some()) {
            return None;
        }
        let vars = self.vars.clone();
        let d = divisor.remapped_terms(&vars).into_owned();
        let (dm, dc) = d[0].clone();
        let mut rem: BTreeMap<Monomial, Rational> = self.terms.iter().cloned().collect();
        let mut quot: Vec<(Monomial, Rational)> = Vec::new();
        while let Some((&lm, lc)) = rem.iter().next_back() {
            if !dm.divides(&lm) {
                return None;
            }
            let qm = lm.div(dm);
            let qc = lc / &dc;
            for (m, c) in &d {
                let key = m.mul(qm);
                let v = rem.entry(key).or_insert_with(Rational::zero);
                *v -= c * &qc;
                if v.is_zero() {
                    rem.remove(&key);
                }
            }
            quot.push((qm, qc));
        }
        Some(Polynomial { vars, terms: quot }.trimmed())
    }

    /// Largest monomial dividing every term (coefficient 1).
    pub fn monomial_content(&self) -> Polynomial {
        let Some(first) = self.terms.first() else {
            return Polynomial::zero();
        };
        let m = self.terms.iter().fold(first.0, |acc, (m, _)| acc.min(*m));
        Polynomial {
            vars: self.vars.clone(),
            terms: vec![(m, Rational::one())],
        }
        .trimmed()
    }

    pub(crate) fn monomial_gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
        let ma = a.monomial_content();
        let mb = b.monomial_content();
        let vars = Self::union_vars(&ma, &mb);
        let x = ma.remapped_terms(&vars)[0].0;
        let y = mb.remapped_terms(&vars)[0].0;
        Polynomial {
            vars,
            terms: vec![(x.min(y), Rational::one())],
        }
        .trimmed()
    }

    /// Coefficients with respect to `name`: `(exponent, coefficient)` pairs in
    /// descending exponent order. The coefficients do not contain `name`.
    pub fn coefficients_in(&self, name: &str) -> Vec<(u32, Polynomial)> {
        let Some(idx) = self.var_index(name) else {
            return if self.is_zero() {
                Vec::new()
            } else {
                vec![(0, self.clone())]
            };
        };
        let mut groups: BTreeMap<u32, Vec<(Monomial, Rational)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            groups
                .entry(m.exp(idx))
                .or_default()
                .push((m.with_exp(idx, 0), c.clone()));
        }
        groups
            .into_iter()
            .rev()
            .map(|(e, mut terms)| {
                terms.sort_by(|a, b| b.0.cmp(&a.0));
                (
                    e,
                    Polynomial {
                        vars: self.vars.clone(),
                        terms,
                    }
                    .trimmed(),
                )
            })
            .collect()
    }

    /// `self * name^e`.
    pub(crate) fn mul_var_pow(&self, name: &str, e: u32) -> Polynomial {
        if e == 0 {
            return self.clone();
        }
        self.mul(&Polynomial::var(name).pow(e))
    }

    /// Evaluates with every variable assigned.
    pub fn eval(&self, assignment: &BTreeMap<String, Rational>) -> Result<Rational, ScalarError> {
        let mut values = Vec::with_capacity(self.vars.len());
        for v in self.vars.iter() {
            match assignment.get(&**v) {
                Some(x) => values.push(x.clone()),
                None => return Err(ScalarError::UnassignedVariable(v.to_string())),
            }
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, x) in values.iter().enumerate() {
                let e = m.exp(i);
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitutes rational values for some of the variables.
    pub fn substitute(&self, assignment: &BTreeMap<String, Rational>) -> Polynomial {
        if !self.vars.iter().any(|v| assignment.contains_key(&**v)) {
            return self.clone();
        }
        let mut acc: Vec<(Monomial, Rational)> = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut mm = *m;
            let mut cc = c.clone();
            for (i, v) in self.vars.iter().enumerate() {
                if let Some(x) = assignment.get(&**v) {
                    let e = m.exp(i);
                    if e > 0 {
                        cc *= num_traits::pow(x.clone(), e as usize);
                        mm = mm.with_exp(i, 0);
                    }
                }
            }
            acc.push((mm, cc));
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: combine(acc),
        }
        .trimmed()
    }
}

fn combine(mut prods: Vec<(Monomial, Rational)>) -> Vec<(Monomial, Rational)> {
    prods.sort_unstable_by(|a, b| b.0.cmp(&a.0));
    let mut out: Vec<(Monomial, Rational)> = Vec::with_capacity(prods.len());
    for (m, c) in prods {
        match out.last_mut() {
            Some((lm, lc)) if *lm == m => *lc += c,
            _ => {
                if let Some((_, lc)) = out.last() {
                    if lc.is_zero() {
                        out.pop();
                    }
                }
                out.push((m, c));
            }
        }
    }
    if let Some((_, lc)) = out.last() {
        if lc.is_zero() {
            out.pop();
        }
    }
    out
}

pub(crate) fn fmt_rational(r: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut factors = Vec::new();
            for (i, v) in self.vars.iter().enumerate() {
                match m.exp(i) {
                    0 => {}
                    1 => factors.push(v.to_string()),
                    e => factors.push(format!("{v}^{e}")),
                }
            }
            if factors.is_empty() {
                fmt_rational(&abs, f)?;
            } else {
                if !abs.is_one() {
                    fmt_rational(&abs, f)?;
                    write!(f, "*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn grlex_orders_by_degree_then_lex() {
        let x = Monomial::from_exponents(&[1, 0]);
        let y = Monomial::from_exponents(&[0, 1]);
        let y2 = Monomial::from_exponents(&[0, 2]);
        assert!(x > y);
        assert!(y2 > x);
        assert!(Monomial::ONE < y);
    }

    #[test]
    fn variables_align_and_trim() {
        let x = Polynomial::var("x");
        let y = Polynomial::var("y");
        let s = x.add(&y).sub(&y);
        assert_eq!(s, x);
        assert_eq!(s.variables().len(), 1);
    }

    #[test]
    fn difference_of_squares_divides() {
        let l = Polynomial::var("lambda");
        let one = Polynomial::one();
        let p = l.sub(&one).mul(&l.add(&one));
        let q2 = p.exact_div(&l.add(&one)).unwrap();
        assert_eq!(q2, l.sub(&one));
        assert!(p.exact_div(&l).is_none());
    }

    #[test]
    fn renders_with_caret_exponents() {
        let a = Polynomial::var("psi11");
        let p = a.mul(&a).add(&Polynomial::one()).scale(&q(3, 2));
        assert_eq!(p.to_string(), "3/2*psi11^2 + 3/2");
        assert_eq!(Polynomial::var("x").neg().to_string(), "-x");
    }

    #[test]
    fn eval_requires_every_variable() {
        let p = Polynomial::var("a").mul(&Polynomial::var("b"));
        let mut asg = BTreeMap::new();
        asg.insert("a".to_string(), q(2, 1));
        assert!(p.eval(&asg).is_err());
        asg.insert("b".to_string(), q(1, 3));
        assert_eq!(p.eval(&asg).unwrap(), q(2, 3));
    }
}
