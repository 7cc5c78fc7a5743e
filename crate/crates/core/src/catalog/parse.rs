//! Line-oriented algebra description format.
//!
//! ```text
//! dim 7
//! params: lambda
//! constraints: lambda != 0
//! [e1,e2] = e4
//! [e2,e5] = lambda*e7
//! eta = e7
//! ```
//!
//! Besides `dim`, `params:`, `constraints:`, bracket lines and the form lines
//! `omega =`, `eta =`, the catalog uses `key:`, `theorem:`, `class:`, `note:`,
//! `deta =` (the table's printed `dη`) and `jsample:` followed by one `J = ...`
//! line per matrix row. `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt;

use super::{CatalogEntry, ExpectedClass, JSample, Theorem};
use crate::lie::linalg::Matrix;
use crate::lie::{KForm, LieAlgebra};
use crate::scalar::expr::{parse_expr, Expr};
use crate::scalar::{parse_rational, Assignment, Polynomial, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

enum Val {
    S(Scalar),
    F(KForm),
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::S(s) => write!(f, "scalar {s}"),
            Val::F(k) => write!(f, "{}-form {k}", k.degree()),
        }
    }
}

struct Ctx<'a> {
    dim: usize,
    params: &'a [String],
}

fn basis_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('e')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

impl Ctx<'_> {
    fn eval(&self, e: &Expr) -> Result<Val, String> {
        Ok(match e {
            Expr::Int(n) => Val::S(Scalar::from_rational(crate::scalar::Rational::from_integer(n.clone()))),
            Expr::Ident(name) => {
                if let Some(k) = basis_index(name) {
                    if k == 0 || k > self.dim {
                        return Err(format!("basis index e{k} out of range for dimension {}", self.dim));
                    }
                    Val::F(KForm::basis(self.dim, k - 1))
                } else if self.params.iter().any(|p| p == name) {
                    Val::S(Scalar::var(name))
                } else {
                    return Err(format!("undeclared parameter '{name}'"));
                }
            }
            Expr::Neg(a) => match self.eval(a)? {
                Val::S(s) => Val::S(-s),
                Val::F(f) => Val::F(f.scale(&Scalar::from_int(-1))),
            },
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let sub = matches!(e, Expr::Sub(..));
                match (self.eval(a)?, self.eval(b)?) {
                    (Val::S(x), Val::S(y)) => Val::S(if sub { x - y } else { x + y }),
                    (Val::F(x), Val::F(y)) if x.degree() == y.degree() => {
                        Val::F(if sub { x.sub(&y) } else { x.add(&y) })
                    }
                    (x, y) => return Err(format!("cannot add {x} and {y}")),
                }
            }
            Expr::Mul(a, b) => match (self.eval(a)?, self.eval(b)?) {
                (Val::S(x), Val::S(y)) => Val::S(x * y),
                (Val::S(s), Val::F(f)) | (Val::F(f), Val::S(s)) => Val::F(f.scale(&s)),
                (Val::F(_), Val::F(_)) => return Err("forms are multiplied with '^'".into()),
            },
            Expr::Div(a, b) => match (self.eval(a)?, self.eval(b)?) {
                (x, Val::S(y)) => {
                    let inv = y.inv().map_err(|e| e.to_string())?;
                    match x {
                        Val::S(x) => Val::S(x * inv),
                        Val::F(f) => Val::F(f.scale(&inv)),
                    }
                }
                (_, y) => return Err(format!("cannot divide by {y}")),
            },
            Expr::Pow(a, b) => match (self.eval(a)?, &**b) {
                (Val::S(s), Expr::Int(n)) => {
                    let n: u32 = n.try_into().map_err(|_| "exponent out of range".to_string())?;
                    Val::S(s.pow(n))
                }
                (Val::F(x), _) => match self.eval(b)? {
                    Val::F(y) => Val::F(x.wedge(&y).map_err(|e| e.to_string())?),
                    y => return Err(format!("cannot wedge with {y}")),
                },
                (Val::S(_), _) => return Err("exponent must be a non-negative integer".into()),
            },
        })
    }
}

/// Parser state for one document.
struct Doc<'a> {
    lineno: usize,
    line: &'a str,
}

impl Doc<'_> {
    fn err_at(&self, col: usize, msg: impl Into<String>) -> ParseError {
        ParseError {
            line: self.lineno,
            column: col,
            message: msg.into(),
        }
    }

    /// Column (one-based) where `part` starts inside the current line.
    fn col_of(&self, part: &str) -> usize {
        let base = self.line.as_ptr() as usize;
        let p = part.as_ptr() as usize;
        if p >= base && p <= base + self.line.len() {
            p - base + 1
        } else {
            1
        }
    }

    fn err(&self, part: &str, msg: impl Into<String>) -> ParseError {
        self.err_at(self.col_of(part), msg)
    }

    /// Column of the first basis identifier that is out of range, for index errors.
    fn index_column(&self, part: &str, dim: usize) -> usize {
        let bytes = part.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            if bytes[i] == b'e' && (i == 0 || !(bytes[i - 1] as char).is_ascii_alphanumeric()) {
                let mut j = i + 1;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                if j > i + 1 && (j == bytes.len() || !(bytes[j] as char).is_ascii_alphanumeric()) {
                    let k: usize = part[i + 1..j].parse().unwrap_or(0);
                    if k == 0 || k > dim {
                        return self.col_of(part) + i;
                    }
                }
                i = j;
            } else {
                i += 1;
            }
        }
        self.col_of(part)
    }

    fn eval(&self, ctx: &Ctx, text: &str) -> Result<Val, ParseError> {
        let e = parse_expr(text).map_err(|e| self.err(text, scalar_msg(e)))?;
        ctx.eval(&e).map_err(|m| {
            let col = if m.contains("out of range") {
                self.index_column(text, ctx.dim)
            } else {
                self.col_of(text)
            };
            self.err_at(col, m)
        })
    }

    fn form(&self, ctx: &Ctx, text: &str, degree: usize) -> Result<KForm, ParseError> {
        match self.eval(ctx, text)? {
            Val::F(f) if f.degree() == degree => Ok(f),
            Val::S(s) if s.is_zero() => Ok(KForm::zero(ctx.dim, degree)),
            v => Err(self.err(text, format!("expected a {degree}-form, found {v}"))),
        }
    }

    fn scalar(&self, ctx: &Ctx, text: &str) -> Result<Scalar, ParseError> {
        match self.eval(ctx, text)? {
            Val::S(s) => Ok(s),
            v => Err(self.err(text, format!("expected a scalar, found {v}"))),
        }
    }
}

fn scalar_msg(e: ScalarError) -> String {
    match e {
        ScalarError::Parse(m) => m,
        other => other.to_string(),
    }
}

fn split_top_commas(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn trim(s: &str) -> &str {
    s.trim()
}

struct Pending {
    sample: JSample,
    rows: Vec<Vec<Scalar>>,
    line: usize,
}

/// Parses one algebra description. `default_key` names entries without `key:`.
pub fn parse_algebra(text: &str, default_key: &str) -> Result<CatalogEntry, ParseError> {
    let mut dim: Option<usize> = None;
    let mut key = default_key.to_string();
    let mut theorem = None;
    let mut class = None;
    let mut params: Vec<String> = Vec::new();
    let mut constraints: Vec<Polynomial> = Vec::new();
    let mut notes = Vec::new();
    // (i, j) with i < j -> component index -> (value, line)
    let mut brackets: BTreeMap<(usize, usize), BTreeMap<usize, (Scalar, usize)>> = BTreeMap::new();
    let mut eta = None;
    let mut omega = None;
    let mut printed_deta = None;
    let mut samples: Vec<Pending> = Vec::new();
    let mut last_line = 0;

    for (n, raw) in text.lines().enumerate() {
        let lineno = n + 1;
        last_line = lineno;
        let content = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let line = trim(content);
        if line.is_empty() {
            continue;
        }
        let doc = Doc { lineno, line: raw };

        if dim.is_none() {
            let Some(rest) = line.strip_prefix("dim") else {
                return Err(doc.err(line, "expected header 'dim N'"));
            };
            let rest = trim(rest);
            let d: usize = rest
                .parse()
                .map_err(|_| doc.err(rest, format!("invalid dimension '{rest}'")))?;
            if d == 0 || d > 16 {
                return Err(doc.err(rest, format!("dimension {d} outside 1..=16")));
            }
            dim = Some(d);
            continue;
        }
        let d = dim.expect("set above");
        let ctx = Ctx { dim: d, params: &params };

        if line.starts_with('[') {
            let close = line
                .find(']')
                .ok_or_else(|| doc.err(line, "missing ']' in bracket"))?;
            let inner = &line[1..close];
            let parts: Vec<&str> = inner.split(',').map(trim).collect();
            if parts.len() != 2 {
                return Err(doc.err(inner, "bracket needs two basis vectors"));
            }
            let mut idx = [0usize; 2];
            for (slot, p) in idx.iter_mut().zip(&parts) {
                let k = basis_index(p).ok_or_else(|| doc.err(p, format!("expected a basis vector, found '{p}'")))?;
                if k == 0 || k > d {
                    return Err(doc.err(p, format!("basis index {p} out of range for dimension {d}")));
                }
                *slot = k - 1;
            }
            let rest = trim(&line[close + 1..]);
            let Some(rhs) = rest.strip_prefix('=') else {
                return Err(doc.err(rest, "expected '=' after bracket"));
            };
            let rhs = trim(rhs);
            let v = doc.form(&ctx, rhs, 1)?;
            let (i, j, sign) = match idx[0].cmp(&idx[1]) {
                std::cmp::Ordering::Less => (idx[0], idx[1], 1),
                std::cmp::Ordering::Greater => (idx[1], idx[0], -1),
                std::cmp::Ordering::Equal => {
                    if v.is_zero() {
                        continue;
                    }
                    return Err(doc.err(inner, "[ei,ei] must vanish"));
                }
            };
            let slot = brackets.entry((i, j)).or_default();
            for (k, c) in v.terms() {
                let c = if sign < 0 { -c } else { c.clone() };
                match slot.get(&k[0]) {
                    Some((old, at)) if *old != c => {
                        return Err(doc.err(
                            rhs,
                            format!(
                                "inconsistent duplicate bracket [e{},e{}]: e{} component {} here, {} on line {}",
                                i + 1,
                                j + 1,
                                k[0] + 1,
                                c,
                                old,
                                at
                            ),
                        ))
                    }
                    Some(_) => {}
                    None => {
                        slot.insert(k[0], (c, lineno));
                    }
                }
            }
            continue;
        }

        if let Some(rest) = line.strip_prefix("J") {
            let rest = trim(rest);
            if let Some(row) = rest.strip_prefix('=') {
                let Some(p) = samples.last_mut() else {
                    return Err(doc.err(line, "'J =' row before any 'jsample:'"));
                };
                let mut out = Vec::new();
                for cell in split_top_commas(row) {
                    out.push(doc.scalar(&ctx, trim(cell))?);
                }
                p.rows.push(out);
                continue;
            }
        }

        if let Some((lhs, rhs)) = line.split_once('=').filter(|(l, _)| !l.contains(':') && !l.contains('!')) {
            let name = trim(lhs);
            let rhs = trim(rhs);
            match name {
                "eta" => eta = Some(doc.form(&ctx, rhs, 1)?),
                "omega" => omega = Some(doc.form(&ctx, rhs, 2)?),
                "deta" => printed_deta = Some(doc.form(&ctx, rhs, 2)?),
                _ => return Err(doc.err(lhs, format!("unknown form '{name}'"))),
            }
            continue;
        }

        let Some((head, value)) = line.split_once(':') else {
            return Err(doc.err(line, format!("unrecognized line '{line}'")));
        };
        let value = trim(value);
        match trim(head) {
            "key" => {
                if value.is_empty() {
                    return Err(doc.err(line, "empty key"));
                }
                key = value.to_string();
            }
            "theorem" => {
                theorem = Some(
                    Theorem::parse(value).ok_or_else(|| doc.err(value, format!("unknown theorem '{value}'")))?,
                )
            }
            "class" => {
                class = Some(
                    ExpectedClass::parse(value)
                        .ok_or_else(|| doc.err(value, format!("unknown class '{value}'")))?,
                )
            }
            "note" => notes.push(value.to_string()),
            "params" => {
                for p in value.split(',').map(trim).filter(|p| !p.is_empty()) {
                    let ok = p.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                        && p.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                    if !ok || basis_index(p).is_some() {
                        return Err(doc.err(p, format!("invalid parameter name '{p}'")));
                    }
                    if !params.iter().any(|q| q == p) {
                        params.push(p.to_string());
                    }
                }
            }
            "constraints" => {
                let ctx = Ctx { dim: d, params: &params };
                for c in split_top_commas(value).into_iter().map(trim).filter(|c| !c.is_empty()) {
                    let Some(lhs) = c.split_once("!=").filter(|(_, r)| trim(r) == "0").map(|(l, _)| l) else {
                        return Err(doc.err(c, "constraint must read '<poly> != 0'"));
                    };
                    let s = doc.scalar(&ctx, trim(lhs))?;
                    if !s.denominator().is_one() {
                        return Err(doc.err(c, "constraint must be a polynomial"));
                    }
                    if s.is_zero() {
                        return Err(doc.err(c, "constraint is identically violated"));
                    }
                    constraints.push(s.numerator().clone());
                }
            }
            "jsample" => {
                let (flag, at) = match value.split_once(" at ") {
                    Some((f, a)) => (trim(f), Some(trim(a))),
                    None => (value, None),
                };
                let integrable = match flag {
                    "integrable" => true,
                    "nonintegrable" => false,
                    _ => return Err(doc.err(flag, "expected 'integrable' or 'nonintegrable'")),
                };
                let mut assignment = Assignment::new();
                if let Some(at) = at {
                    for part in split_top_commas(at).into_iter().map(trim) {
                        let Some((p, v)) = part.split_once('=') else {
                            return Err(doc.err(part, "expected 'name = value'"));
                        };
                        let p = trim(p);
                        if !params.iter().any(|q| q == p) {
                            return Err(doc.err(p, format!("undeclared parameter '{p}'")));
                        }
                        let v = parse_rational(trim(v)).map_err(|e| doc.err(trim(v), scalar_msg(e)))?;
                        assignment.insert(p.to_string(), v);
                    }
                }
                samples.push(Pending {
                    sample: JSample {
                        matrix: Vec::new(),
                        integrable,
                        at: assignment,
                    },
                    rows: Vec::new(),
                    line: lineno,
                });
            }
            other => return Err(doc.err(head, format!("unknown directive '{other}'"))),
        }
    }

    let Some(dim) = dim else {
        return Err(ParseError {
            line: last_line.max(1),
            column: 1,
            message: "missing header 'dim N'".into(),
        });
    };
    let mut algebra = LieAlgebra::new(dim);
    for ((i, j), comps) in &brackets {
        let mut v = vec![Scalar::zero(); dim];
        for (k, (c, _)) in comps {
            v[*k] = c.clone();
        }
        algebra.set_bracket(*i, *j, &v).expect("indices validated");
    }
    algebra.params = params.clone();
    algebra.constraints = constraints.clone();

    let base_dim = if omega.is_some() { dim } else { dim.saturating_sub(1) };
    let mut j_samples = Vec::new();
    for p in samples {
        let bad = |msg: String| ParseError {
            line: p.line,
            column: 1,
            message: msg,
        };
        if p.rows.len() != base_dim {
            return Err(bad(format!("jsample has {} rows, expected {base_dim}", p.rows.len())));
        }
        if let Some(r) = p.rows.iter().find(|r| r.len() != base_dim) {
            return Err(bad(format!("jsample row has {} entries, expected {base_dim}", r.len())));
        }
        let matrix: Matrix = p.rows;
        j_samples.push(JSample { matrix, ..p.sample });
    }

    Ok(CatalogEntry {
        key,
        theorem,
        expected_class: class,
        params,
        constraints,
        algebra,
        eta,
        omega,
        printed_deta,
        j_samples,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heisenberg3() {
        let e = parse_algebra("dim 3\nparams:\n[e1,e2] = e3", "h3").unwrap();
        assert_eq!(e.algebra.dim(), 3);
        assert_eq!(e.algebra.bracket_basis(0, 1)[2], Scalar::one());
        assert_eq!(e.algebra.bracket_basis(1, 0)[2], Scalar::from_int(-1));
        assert!(e.algebra.jacobi_check().is_empty());
    }

    #[test]
    fn index_error_has_position() {
        let err = parse_algebra("dim 7\n[e1,e2] = e9", "x").unwrap_err();
        assert_eq!((err.line, err.column), (2, 11));
        assert!(err.message.contains("out of range"));
        let err = parse_algebra("dim 3\n[e1,e4] = e2", "x").unwrap_err();
        assert_eq!((err.line, err.column), (2, 5));
    }

    #[test]
    fn undeclared_parameter() {
        let err = parse_algebra("dim 3\n[e1,e2] = mu*e3", "x").unwrap_err();
        assert!(err.message.contains("undeclared parameter 'mu'"));
        assert_eq!(err.line, 2);
    }

    #[test]
    fn duplicate_brackets_merge_or_conflict() {
        let e = parse_algebra("dim 7\nparams: a\n[e1,e4] = e6\n[e1,e4] = a*e7", "x").unwrap();
        assert_eq!(e.algebra.bracket_basis(0, 3)[5], Scalar::one());
        assert_eq!(e.algebra.bracket_basis(0, 3)[6], Scalar::var("a"));
        let e = parse_algebra("dim 3\n[e1,e2] = e3\n[e2,e1] = -e3", "x").unwrap();
        assert_eq!(e.algebra.bracket_basis(0, 1)[2], Scalar::one());
        let err = parse_algebra("dim 3\n[e1,e2] = e3\n[e1,e2] = 2*e3", "x").unwrap_err();
        assert_eq!(err.line, 3);
        assert!(err.message.contains("inconsistent"));
    }

    #[test]
    fn header_required() {
        let err = parse_algebra("# c\n[e1,e2] = e3", "x").unwrap_err();
        assert_eq!((err.line, err.column), (2, 1));
        assert!(parse_algebra("", "x").is_err());
    }

    #[test]
    fn forms_and_samples() {
        let text = "dim 7\nparams: lambda\nconstraints: lambda != 0, lambda - 1 != 0\n\
                    [e1,e6] = e7\neta = e7\ndeta = -(e1^e6 + 1/2*lambda*e2^e5)\n\
                    jsample: integrable at lambda = 2\n\
                    J = 0,1,0,0,0,0\nJ = -1,0,0,0,0,0\nJ = 0,0,0,-1/lambda,0,0\n\
                    J = 0,0,lambda,0,0,0\nJ = 0,0,0,0,0,-1\nJ = 0,0,0,0,1,0";
        let e = parse_algebra(text, "x").unwrap();
        assert_eq!(e.constraints.len(), 2);
        assert_eq!(e.eta, Some(KForm::basis(7, 6)));
        let de = e.printed_deta.unwrap();
        assert_eq!(de.coeff(&[0, 5]), Scalar::from_int(-1));
        assert_eq!(de.coeff(&[1, 4]).to_string(), "-1/2*lambda");
        let s = &e.j_samples[0];
        assert!(s.integrable);
        assert_eq!(s.at["lambda"], crate::scalar::rat(2, 1));
        assert_eq!(s.matrix[2][3].to_string(), "-1/lambda");
    }

    #[test]
    fn sample_shape_is_checked() {
        let err = parse_algebra("dim 3\njsample: integrable\nJ = 0, -1\n", "x").unwrap_err();
        assert!(err.message.contains("rows"));
    }
}
