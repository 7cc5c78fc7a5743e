//! Arithmetic expression syntax shared by scalar parsing and the catalog.
//!
//! `expr := term (('+' | '-') term)*`, `term := unary (('*' | '/') unary)*`,
//! `unary := '-' unary | '+' unary | power`, `power := atom ('^' atom)?`,
//! `atom := integer | identifier | '(' expr ')'`.
//! Juxtaposition is not multiplication.

use num_bigint::BigInt;

use super::{Scalar, ScalarError};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Ident(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, ScalarError> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Int(text.parse().expect("digits")));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(ScalarError::Parse(format!("unexpected character '{c}' in \"{s}\"")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn err(&self, what: &str) -> ScalarError {
        ScalarError::Parse(format!("{what} in \"{}\"", self.src))
    }

    fn expr(&mut self) -> Result<Expr, ScalarError> {
        let mut lhs = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if op == '+' {
                Expr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ScalarError> {
        let mut lhs = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = if op == '*' {
                Expr::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Div(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ScalarError> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ScalarError> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            let e = self.atom()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(e)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ScalarError> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Expr::Ident(s))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(self.err("missing ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(Tok::Op(c)) => Err(self.err(&format!("unexpected '{c}'"))),
            None => Err(self.err("unexpected end of expression")),
        }
    }
}

pub fn parse_expr(s: &str) -> Result<Expr, ScalarError> {
    let toks = tokenize(s)?;
    let mut p = Parser { toks, pos: 0, src: s };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Evaluates an expression whose identifiers are all scalar variables.
pub fn eval_scalar(e: &Expr) -> Result<Scalar, ScalarError> {
    Ok(match e {
        Expr::Int(n) => Scalar::from_rational(super::Rational::from_integer(n.clone())),
        Expr::Ident(s) => Scalar::var(s),
        Expr::Neg(a) => -eval_scalar(a)?,
        Expr::Add(a, b) => eval_scalar(a)? + eval_scalar(b)?,
        Expr::Sub(a, b) => eval_scalar(a)? - eval_scalar(b)?,
        Expr::Mul(a, b) => eval_scalar(a)? * eval_scalar(b)?,
        Expr::Div(a, b) => eval_scalar(a)?.checked_div(&eval_scalar(b)?)?,
        Expr::Pow(a, b) => {
            let Expr::Int(n) = &**b else {
                return Err(ScalarError::Parse("exponent must be a non-negative integer".into()));
            };
            let n: u32 = n
                .try_into()
                .map_err(|_| ScalarError::Parse("exponent too large".into()))?;
            eval_scalar(a)?.pow(n)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let s = eval_scalar(&parse_expr("1 + 2*3^2 - 4/2").unwrap()).unwrap();
        assert_eq!(s, Scalar::from_int(17));
        let t = eval_scalar(&parse_expr("-(lambda - 1)/2").unwrap()).unwrap();
        assert_eq!(t.to_string(), "-1/2*lambda + 1/2");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_expr("1 +").is_err());
        assert!(parse_expr("a b").is_err());
        assert!(parse_expr("2 $ 3").is_err());
        assert!(eval_scalar(&parse_expr("1/(a-a)").unwrap()).is_err());
    }
}
