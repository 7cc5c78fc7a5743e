//! Named identity residuals: the nonzero components left after subtracting
//! one side of an identity from the other.

use crate::lie::linalg::{Matrix, Vector};
use crate::lie::VectorValued2Form;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub name: String,
    /// `(location, value)` for every nonzero component.
    pub entries: Vec<(String, Scalar)>,
}

impl Residual {
    pub fn new(name: impl Into<String>) -> Self {
        Residual {
            name: name.into(),
            entries: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, location: impl FnOnce() -> String, value: Scalar) {
        if !value.is_zero() {
            self.entries.push((location(), value));
        }
    }

    pub fn scalar(name: impl Into<String>, value: Scalar) -> Self {
        let mut r = Self::new(name);
        r.push(String::new, value);
        r
    }

    /// Entries indexed one-based as `(i,j)`.
    pub fn matrix(name: impl Into<String>, m: &Matrix) -> Self {
        let mut r = Self::new(name);
        for (i, row) in m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                r.push(|| format!("({},{})", i + 1, j + 1), v.clone());
            }
        }
        r
    }

    pub fn vector(name: impl Into<String>, v: &Vector) -> Self {
        let mut r = Self::new(name);
        for (k, x) in v.iter().enumerate() {
            r.push(|| format!("e{}", k + 1), x.clone());
        }
        r
    }

    pub fn vv2(name: impl Into<String>, f: &VectorValued2Form) -> Self {
        let mut r = Self::new(name);
        for (i, j, k, v) in f.nonzero_components() {
            r.entries.push((format!("(e{i},e{j})^{k}"), v));
        }
        r
    }

    pub fn merge(mut self, other: Residual) -> Self {
        self.entries.extend(other.entries);
        self
    }

    /// `0`, or up to three components followed by a count of the rest.
    pub fn render(&self) -> String {
        if self.entries.is_empty() {
            return "0".to_string();
        }
        let shown: Vec<String> = self
            .entries
            .iter()
            .take(3)
            .map(|(loc, v)| if loc.is_empty() { v.to_string() } else { format!("{loc}: {v}") })
            .collect();
        let mut s = shown.join("; ");
        if self.entries.len() > 3 {
            s.push_str(&format!("; ... ({} nonzero)", self.entries.len()));
        }
        s
    }
}
