//! The catalog of nilpotent contact algebras, the text format they are stored
//! in, and verification runs over them.

pub mod checks;
pub mod parse;
pub mod report;

use std::fmt;
use std::path::{Path, PathBuf};

use crate::extension::CentralExtension;
use crate::lie::linalg::Matrix;
use crate::lie::{KForm, LieAlgebra};
use crate::scalar::{Assignment, Polynomial, ScalarError};

pub use checks::{run_checks, Status, Suite, VerificationReport};
pub use parse::{parse_algebra, ParseError};
pub use report::{reproduce_theorem, TheoremSummary};

/// Directory override for [`load_catalog`].
pub const CATALOG_ENV: &str = "NILCONTACT_CATALOG";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Theorem {
    T31,
    T32,
}

impl Theorem {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "3.1" => Some(Theorem::T31),
            "3.2" => Some(Theorem::T32),
            _ => None,
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theorem::T31 => "3.1",
            Theorem::T32 => "3.2",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpectedClass {
    SasakiPositive,
    PseudoSasaki,
    KContactOnly,
}

impl ExpectedClass {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sasaki_positive" => Some(Self::SasakiPositive),
            "pseudo_sasaki" => Some(Self::PseudoSasaki),
            "k_contact_only" => Some(Self::KContactOnly),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::SasakiPositive => "sasaki_positive",
            Self::PseudoSasaki => "pseudo_sasaki",
            Self::KContactOnly => "k_contact_only",
        }
    }
}

impl fmt::Display for ExpectedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An almost complex structure on the base, with the expected integrability.
/// A nonempty `at` means the sample only exists after specializing parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct JSample {
    pub matrix: Matrix,
    pub integrable: bool,
    pub at: Assignment,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub key: String,
    pub theorem: Option<Theorem>,
    pub expected_class: Option<ExpectedClass>,
    pub params: Vec<String>,
    pub constraints: Vec<Polynomial>,
    pub algebra: LieAlgebra,
    pub eta: Option<KForm>,
    /// Given explicitly only for even-dimensional (base) entries.
    pub omega: Option<KForm>,
    /// `dη` as printed in the source table.
    pub printed_deta: Option<KForm>,
    pub j_samples: Vec<JSample>,
    pub notes: Vec<String>,
}

/// How an entry's algebra relates to a symplectic base.
#[derive(Clone, Debug)]
pub enum Shape {
    /// A symplectic algebra `(h, ω)` given directly.
    Base { base: LieAlgebra, omega: KForm },
    /// `η = e_n` with `e_n` central: the extension of `h = g/⟨e_n⟩` by `ω = -dη|_h`.
    Extension(CentralExtension),
    /// Anything else; only Jacobi and contact checks apply.
    Plain,
}

impl CatalogEntry {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn shape(&self) -> Shape {
        let n = self.dim();
        if let Some(omega) = &self.omega {
            if n.is_multiple_of(2) && omega.dim() == n {
                return Shape::Base {
                    base: self.algebra.clone(),
                    omega: omega.clone(),
                };
            }
        }
        match &self.eta {
            Some(eta) if n % 2 == 1 && n > 1 && *eta == KForm::basis(n, n - 1) => {
                match CentralExtension::from_total(self.algebra.clone()) {
                    Ok(ext) => Shape::Extension(ext),
                    Err(_) => Shape::Plain,
                }
            }
            _ => Shape::Plain,
        }
    }

    /// The base symplectic pair, for both base and extension shapes.
    pub fn symplectic_base(&self) -> Option<(LieAlgebra, KForm)> {
        match self.shape() {
            Shape::Base { base, omega } => Some((base, omega)),
            Shape::Extension(ext) => Some((ext.base, ext.omega)),
            Shape::Plain => None,
        }
    }

    /// Constraint polynomials rendered as `p != 0`.
    pub fn constraint_strings(&self) -> Vec<String> {
        self.constraints.iter().map(|p| format!("{p} != 0")).collect()
    }

    /// Substitutes rational values for some parameters everywhere.
    pub fn specialize(&self, a: &Assignment) -> Result<CatalogEntry, ScalarError> {
        let sub_m = |m: &Matrix| -> Result<Matrix, ScalarError> {
            m.iter()
                .map(|r| r.iter().map(|x| x.substitute(a)).collect())
                .collect()
        };
        let sub_f = |f: &Option<KForm>| f.as_ref().map(|f| f.substitute(a)).transpose();
        let mut j_samples = Vec::new();
        for s in &self.j_samples {
            let mut at = s.at.clone();
            at.retain(|k, _| !a.contains_key(k));
            j_samples.push(JSample {
                matrix: sub_m(&s.matrix)?,
                integrable: s.integrable,
                at,
            });
        }
        let constraints: Vec<Polynomial> = self
            .constraints
            .iter()
            .map(|p| p.substitute(a))
            .filter(|p| !p.is_constant())
            .collect();
        let mut algebra = self.algebra.substitute(a)?;
        algebra.constraints = constraints.clone();
        Ok(CatalogEntry {
            key: self.key.clone(),
            theorem: self.theorem,
            expected_class: self.expected_class,
            params: self.params.iter().filter(|p| !a.contains_key(*p)).cloned().collect(),
            constraints,
            algebra,
            eta: sub_f(&self.eta)?,
            omega: sub_f(&self.omega)?,
            printed_deta: sub_f(&self.printed_deta)?,
            j_samples,
            notes: self.notes.clone(),
        })
    }
}

macro_rules! embedded {
    ($($key:literal),* $(,)?) => {
        &[$(($key, include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/catalog/", $key, ".alg")))),*]
    };
}

/// Catalog sources in table order: the 3.1 slice, then the 3.2 slice,
/// then `h7_heisenberg` and `h14`.
pub const EMBEDDED: &[(&str, &str)] = embedded![
    "g21_1", "g21_2", "g14_1", "g13_1", "g13_2", "g15_1", "g15_2", "g11_1", "g11_2", "g10_1", "g10_2",
    "g12", "g24_1", "g24_2", "g17", "g16_1", "g16_2", "g18_1", "g18_2", "g18_3", "g23_1", "g25",
    "g1", "g2", "g3", "g4", "g5_1", "g5_2", "g5_3", "g5_4", "g6_1a", "g6_1b", "g7_1", "g7_2", "g7_3",
    "g8", "g9", "g19", "g20", "g22", "g14_2", "g14_3", "g21_3", "g13_3", "g15_3", "g23_2", "g23_3",
    "h7_heisenberg", "h14",
];

/// Negative controls and verbatim printed tables that are expected to fail.
pub const FIXTURES: &[(&str, &str)] = &[
    ("broken_jacobi", include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/catalog/fixtures/broken_jacobi.alg"))),
    ("nonclosed_omega", include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/catalog/fixtures/nonclosed_omega.alg"))),
    ("incompatible_j", include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/catalog/fixtures/incompatible_j.alg"))),
    ("g15_2_printed", include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/catalog/fixtures/errata/g15_2_printed.alg"))),
    ("g16_2_printed", include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/catalog/fixtures/errata/g16_2_printed.alg"))),
    ("g23_1_printed", include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/catalog/fixtures/errata/g23_1_printed.alg"))),
];

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("{source_name}: {error}")]
    Parse { source_name: String, error: ParseError },
    #[error("{0}: {1}")]
    Io(PathBuf, std::io::Error),
    #[error("duplicate catalog key '{0}'")]
    DuplicateKey(String),
    #[error("no catalog entry '{0}'")]
    UnknownKey(String),
}

fn parse_all<'a>(sources: impl IntoIterator<Item = (String, &'a str)>) -> Result<Vec<CatalogEntry>, CatalogError> {
    let mut out: Vec<CatalogEntry> = Vec::new();
    for (name, text) in sources {
        let e = parse_algebra(text, &name).map_err(|error| CatalogError::Parse {
            source_name: name.clone(),
            error,
        })?;
        if out.iter().any(|o| o.key == e.key) {
            return Err(CatalogError::DuplicateKey(e.key));
        }
        out.push(e);
    }
    Ok(out)
}

pub fn embedded_catalog() -> Vec<CatalogEntry> {
    parse_all(EMBEDDED.iter().map(|(k, t)| (k.to_string(), *t))).expect("embedded catalog parses")
}

pub fn fixtures() -> Vec<CatalogEntry> {
    parse_all(FIXTURES.iter().map(|(k, t)| (k.to_string(), *t))).expect("fixtures parse")
}

/// Every `*.alg` file directly inside `dir`, in file-name order.
pub fn load_dir(dir: &Path) -> Result<Vec<CatalogEntry>, CatalogError> {
    let rd = std::fs::read_dir(dir).map_err(|e| CatalogError::Io(dir.to_path_buf(), e))?;
    let mut paths: Vec<PathBuf> = Vec::new();
    for item in rd {
        let p = item.map_err(|e| CatalogError::Io(dir.to_path_buf(), e))?.path();
        if p.extension().is_some_and(|x| x == "alg") {
            paths.push(p);
        }
    }
    paths.sort();
    let mut texts = Vec::new();
    for p in &paths {
        let t = std::fs::read_to_string(p).map_err(|e| CatalogError::Io(p.clone(), e))?;
        let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        texts.push((stem, t));
    }
    parse_all(texts.iter().map(|(k, t)| (k.clone(), t.as_str())))
}

/// The catalog from `$NILCONTACT_CATALOG` when set, else the embedded one.
pub fn load_catalog() -> Result<Vec<CatalogEntry>, CatalogError> {
    match std::env::var_os(CATALOG_ENV) {
        Some(dir) if !dir.is_empty() => load_dir(Path::new(&dir)),
        _ => Ok(embedded_catalog()),
    }
}

pub fn load_file(path: &Path) -> Result<CatalogEntry, CatalogError> {
    let text = std::fs::read_to_string(path).map_err(|e| CatalogError::Io(path.to_path_buf(), e))?;
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    parse_algebra(&text, &stem).map_err(|error| CatalogError::Parse {
        source_name: path.display().to_string(),
        error,
    })
}

pub fn find<'a>(catalog: &'a [CatalogEntry], key: &str) -> Result<&'a CatalogEntry, CatalogError> {
    catalog
        .iter()
        .find(|e| e.key == key)
        .ok_or_else(|| CatalogError::UnknownKey(key.to_string()))
}

/// Entries of one theorem, in table order.
pub fn theorem_slice(catalog: &[CatalogEntry], t: Theorem) -> Vec<&CatalogEntry> {
    catalog.iter().filter(|e| e.theorem == Some(t)).collect()
}

/// `d e_n` on the algebra, for entries with a contact form.
pub fn deta(entry: &CatalogEntry) -> Option<KForm> {
    entry.eta.as_ref().map(|e| e.d(&entry.algebra))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_counts() {
        let c = embedded_catalog();
        assert_eq!(c.len(), 49);
        assert_eq!(theorem_slice(&c, Theorem::T31).len(), 23);
        assert_eq!(
            theorem_slice(&c, Theorem::T31)
                .iter()
                .filter(|e| e.expected_class == Some(ExpectedClass::PseudoSasaki))
                .count(),
            22
        );
        assert_eq!(theorem_slice(&c, Theorem::T32).len(), 25);
        for e in &c {
            match e.theorem {
                Some(Theorem::T31) => assert!(matches!(
                    e.expected_class,
                    Some(ExpectedClass::PseudoSasaki | ExpectedClass::SasakiPositive)
                )),
                Some(Theorem::T32) => assert_eq!(e.expected_class, Some(ExpectedClass::KContactOnly)),
                None => assert_eq!(e.key, "h14"),
            }
        }
    }

    #[test]
    fn shapes() {
        let c = embedded_catalog();
        assert!(matches!(find(&c, "h14").unwrap().shape(), Shape::Base { .. }));
        assert!(matches!(find(&c, "g13_1").unwrap().shape(), Shape::Extension(_)));
    }

    #[test]
    fn specialize_drops_parameter() {
        let c = embedded_catalog();
        let e = find(&c, "g18_1").unwrap();
        let a: Assignment = [("lambda".to_string(), crate::scalar::rat(2, 1))].into();
        let s = e.specialize(&a).unwrap();
        assert!(s.params.is_empty());
        assert!(s.algebra.variables().is_empty());
        assert!(s.j_samples[0].at.is_empty());
    }
}
