//! Ordered verification of one catalog entry.
//!
//! Checks run in dependency order; after the first failure every later check
//! of the entry is reported as skipped.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{CatalogEntry, ExpectedClass, JSample, Shape};
use crate::curvature::{
    self, bianchi_residual, curvature_tensor, extension_geometry, koszul_connection, metric_compatibility_residual,
    pseudo_orthonormal_frame_from, reeb_curvature_residual, reeb_sectional_curvatures, ricci_from_frame, ricci_tensor,
    ricci_trace, torsion_residual, verify_extension_formulas, Metric,
};
use crate::extension::{
    axiom_residuals, build_contact_structure, killing_residual, lie_derivative_affinor, normality_identity_residual,
    normality_tensors, torsion_identity_residual, CentralExtension, ContactMetricStructure,
};
use crate::kahler;
use crate::lie::linalg::{self, Matrix};
use crate::lie::{contact_condition, format_vector, KForm, LieAlgebra};
use crate::residual::Residual;
use crate::scalar::{fmt_rational, Assignment, Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
    /// Recorded without a pass/fail expectation.
    Info,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
            Status::Info => "info",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub entry: String,
    pub check: String,
    pub status: Status,
    pub residual: String,
    pub constraints: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

/// Which checks a run reports. Failing prerequisites are always reported.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Jacobi,
    Contact,
    Kahler,
    Curvature,
    Ricci,
}

impl Suite {
    fn includes(&self, check: &str) -> bool {
        let base = check.split('@').next().unwrap_or(check);
        match self {
            Suite::All => true,
            Suite::Jacobi => matches!(base, "jacobi" | "jacobi_extension"),
            Suite::Contact => matches!(base, "jacobi" | "contact" | "deta_table" | "contact_structure"),
            Suite::Kahler => matches!(
                base,
                "jacobi"
                    | "closedness"
                    | "nondegeneracy"
                    | "almost_complex"
                    | "compatibility"
                    | "nijenhuis"
                    | "base_metric"
                    | "base_curvature"
                    | "base_signature"
            ),
            Suite::Curvature => matches!(
                base,
                "connection_formulas" | "curvature_formulas" | "sasaki_curvature" | "reeb_sectional" | "base_curvature"
            ),
            Suite::Ricci => matches!(
                base,
                "ricci_formulas" | "ricci_values" | "ricci_oracle" | "base_ricci" | "base_curvature"
            ),
        }
    }
}

/// Random points used per parametric entry for identities and the Ricci oracle.
pub const SAMPLE_POINTS: usize = 10;
/// Assignments at which metric signatures are recorded for parametric entries.
pub const SIGNATURE_POINTS: usize = 4;

fn entry_seed(seed: u64, key: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in key.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h ^ seed
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let n: i64 = rng.gen_range(-12..=12);
        if n != 0 {
            let d: i64 = rng.gen_range(1..=7);
            return Rational::new(n.into(), d.into());
        }
    }
}

fn render_assignment(a: &Assignment) -> String {
    if a.is_empty() {
        return "-".into();
    }
    a.iter()
        .map(|(k, v)| format!("{k}={}", fmt_rational(v)))
        .collect::<Vec<_>>()
        .join(",")
}

fn eval_matrix(m: &Matrix, a: &Assignment) -> Option<Vec<Vec<Rational>>> {
    m.iter()
        .map(|r| r.iter().map(|x| x.eval(a).ok()).collect::<Option<Vec<_>>>())
        .collect()
}

fn constraints_hold(entry: &CatalogEntry, a: &Assignment) -> bool {
    entry
        .constraints
        .iter()
        .all(|p| p.eval(a).map(|v| !v.is_zero()).unwrap_or(false))
}

/// Up to `count` assignments of `params` accepted by `accept`; the empty
/// assignment once when there are no parameters.
fn sample_points(
    rng: &mut ChaCha8Rng,
    params: &[String],
    count: usize,
    mut accept: impl FnMut(&Assignment) -> bool,
) -> Vec<Assignment> {
    if params.is_empty() {
        let a = Assignment::new();
        return if accept(&a) { vec![a] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for _ in 0..count * 200 {
        if out.len() == count {
            break;
        }
        let a: Assignment = params.iter().map(|p| (p.clone(), random_rational(rng))).collect();
        if accept(&a) {
            out.push(a);
        }
    }
    out
}

fn random_basis(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<Rational>> {
    loop {
        let m: Matrix = (0..n)
            .map(|_| (0..n).map(|_| Scalar::from_int(rng.gen_range(-3..=3))).collect())
            .collect();
        if !linalg::determinant(&m).is_zero() {
            return m
                .iter()
                .map(|r| r.iter().map(|x| x.as_rational().expect("integer")).collect())
                .collect();
        }
    }
}

fn signature_at(g: &Matrix, a: &Assignment) -> Option<(usize, usize)> {
    let mut m = eval_matrix(g, a)?;
    kahler::signature_rational(&mut m).ok()
}

fn jacobi_residual(alg: &LieAlgebra) -> (Status, String) {
    let v = alg.jacobi_check();
    if v.is_empty() {
        return (Status::Pass, "0".into());
    }
    let mut parts: Vec<String> = v
        .iter()
        .take(3)
        .map(|j| {
            let (a, b, c) = j.triple;
            format!("(e{a},e{b},e{c}): {}", format_vector(&j.residual))
        })
        .collect();
    if v.len() > 3 {
        parts.push(format!("... ({} triples)", v.len()));
    }
    (Status::Fail, parts.join("; "))
}

fn expect_zero(r: &Residual) -> (Status, String) {
    (if r.is_zero() { Status::Pass } else { Status::Fail }, r.render())
}

fn merged(name: &str, rs: impl IntoIterator<Item = Residual>) -> Residual {
    rs.into_iter().fold(Residual::new(name), |acc, r| {
        let prefix = r.name.clone();
        let mut r = r;
        for e in r.entries.iter_mut() {
            e.0 = format!("{prefix} {}", e.0);
        }
        acc.merge(r)
    })
}

struct Runner<'a> {
    entry: &'a CatalogEntry,
    constraints: Vec<String>,
    timings: bool,
    blocked: Option<String>,
    out: Vec<VerificationReport>,
}

impl Runner<'_> {
    fn push(&mut self, check: String, status: Status, residual: String, extra: &[String], ms: Option<f64>) {
        let mut constraints = self.constraints.clone();
        constraints.extend(extra.iter().cloned());
        self.out.push(VerificationReport {
            entry: self.entry.key.clone(),
            check,
            status,
            residual,
            constraints,
            wall_ms: if self.timings { ms } else { None },
        });
    }

    /// Runs `f` unless an earlier check failed; returns false when `f` fails or was skipped.
    fn check(&mut self, check: &str, extra: &[String], f: impl FnOnce() -> (Status, String)) -> bool {
        if let Some(b) = &self.blocked {
            let msg = format!("skipped: {b} failed");
            self.push(check.to_string(), Status::Skip, msg, extra, None);
            return false;
        }
        let t = Instant::now();
        let (status, residual) = f();
        let ms = (t.elapsed().as_secs_f64() * 1e6).round() / 1e3;
        if status == Status::Fail {
            self.blocked = Some(check.to_string());
        }
        self.push(check.to_string(), status, residual, extra, Some(ms));
        status != Status::Fail
    }

    fn skip_rest(&mut self, names: &[&str], suffix: &str) {
        for n in names {
            let name = format!("{n}{suffix}");
            self.check(&name, &[], || (Status::Skip, "not applicable".into()));
        }
    }
}

const EXTENSION_CHECKS: &[&str] = &[
    "contact_structure",
    "normality",
    "k_contact",
    "verdict",
    "torsion_identity",
    "normality_identity",
    "connection_formulas",
    "curvature_formulas",
    "sasaki_curvature",
    "ricci_formulas",
    "base_ricci",
    "reeb_sectional",
    "ricci_values",
    "ricci_oracle",
    "signature",
];

/// Every check for `entry`, filtered by `suite`. Deterministic for a fixed
/// entry and seed; `timings` adds wall-clock times.
pub fn run_checks(entry: &CatalogEntry, suite: Suite, seed: u64, timings: bool) -> Vec<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(entry_seed(seed, &entry.key));
    let mut r = Runner {
        entry,
        constraints: entry.constraint_strings(),
        timings,
        blocked: None,
        out: Vec::new(),
    };
    let shape = entry.shape();

    let jac_alg = match &shape {
        Shape::Extension(ext) => ext.base.clone(),
        Shape::Base { base, .. } => base.clone(),
        Shape::Plain => entry.algebra.clone(),
    };
    r.check("jacobi", &[], || jacobi_residual(&jac_alg));

    if let (Some(eta), true) = (&entry.eta, entry.dim() % 2 == 1) {
        let coeff = contact_condition(&entry.algebra, eta);
        let extra: Vec<String> = match &coeff {
            Ok(c) if !c.is_constant() => vec![format!("excluded locus: {} = 0", c.numerator())],
            _ => Vec::new(),
        };
        r.check("contact", &extra, || match coeff {
            Ok(c) if c.is_zero() => (Status::Fail, "0".into()),
            Ok(c) => (Status::Pass, c.to_string()),
            Err(e) => (Status::Fail, e.to_string()),
        });
    }

    let (base, omega) = match &shape {
        Shape::Extension(ext) => (ext.base.clone(), ext.omega.clone()),
        Shape::Base { base, omega } => (base.clone(), omega.clone()),
        Shape::Plain => {
            deta_table(&mut r, entry);
            return finish(r, suite);
        }
    };

    r.check("closedness", &[], || {
        let d = kahler::closedness_residual(&base, &omega);
        (if d.is_zero() { Status::Pass } else { Status::Fail }, d.to_string())
    });
    if matches!(shape, Shape::Extension(_)) {
        r.check("jacobi_extension", &[], || jacobi_residual(&entry.algebra));
    }
    deta_table(&mut r, entry);
    let pf = kahler::pfaffian_square(&omega);
    let extra: Vec<String> = if pf.is_constant() {
        Vec::new()
    } else {
        vec![format!("excluded locus: {} = 0", pf.numerator())]
    };
    r.check("nondegeneracy", &extra, || {
        (if pf.is_zero() { Status::Fail } else { Status::Pass }, format!("det(omega) = {pf}"))
    });

    let many = entry.j_samples.len() > 1;
    for (k, sample) in entry.j_samples.iter().enumerate() {
        let suffix = if many { format!("@J{}", k + 1) } else { String::new() };
        run_sample(&mut r, entry, sample, &suffix, &mut rng);
    }
    finish(r, suite)
}

fn deta_table(r: &mut Runner, entry: &CatalogEntry) {
    if let (Some(eta), Some(printed)) = (&entry.eta, &entry.printed_deta) {
        let computed = eta.d(&entry.algebra);
        r.check("deta_table", &[], || {
            let diff = computed.sub(printed);
            if diff.is_zero() {
                (Status::Pass, computed.to_string())
            } else {
                (Status::Fail, format!("computed {computed}; table {printed}"))
            }
        });
    }
}

fn finish(r: Runner, suite: Suite) -> Vec<VerificationReport> {
    r.out
        .into_iter()
        .filter(|rep| suite.includes(&rep.check) || rep.status == Status::Fail)
        .collect()
}

fn run_sample(r: &mut Runner, entry: &CatalogEntry, sample: &JSample, suffix: &str, rng: &mut ChaCha8Rng) {
    let name = |n: &str| format!("{n}{suffix}");
    let mut extra = Vec::new();
    let fixed;
    let entry = if sample.at.is_empty() {
        entry
    } else {
        extra.push(format!("sample at {}", render_assignment(&sample.at)));
        match entry.specialize(&sample.at) {
            Ok(e) => {
                fixed = e;
                &fixed
            }
            Err(e) => {
                r.check(&name("almost_complex"), &extra, || (Status::Fail, e.to_string()));
                return;
            }
        }
    };
    let shape = entry.shape();
    let (base, omega) = match &shape {
        Shape::Extension(ext) => (ext.base.clone(), ext.omega.clone()),
        Shape::Base { base, omega } => (base.clone(), omega.clone()),
        Shape::Plain => return,
    };
    let j = &sample.matrix;

    r.check(&name("almost_complex"), &extra, || {
        expect_zero(&Residual::matrix("J^2 + I", &kahler::almost_complex_residual(j)))
    });
    r.check(&name("compatibility"), &extra, || {
        expect_zero(&Residual::matrix("J^T Omega J - Omega", &kahler::compatibility_residual(&omega, j)))
    });
    let nj = kahler::nijenhuis(&base, j);
    r.check(&name("nijenhuis"), &extra, || {
        let zero = nj.is_zero();
        let status = if zero == sample.integrable { Status::Pass } else { Status::Fail };
        let res = Residual::vv2("N_J", &nj).render();
        let expect = if sample.integrable { "expected 0" } else { "expected nonzero" };
        (status, format!("{res} ({expect})"))
    });

    let ext = match shape {
        Shape::Extension(ext) => ext,
        _ => {
            base_only(r, entry, &base, &omega, sample, suffix, &extra, rng);
            return;
        }
    };

    let mut structure: Option<ContactMetricStructure> = None;
    r.check(&name("contact_structure"), &extra, || match build_contact_structure(&ext, j) {
        Ok(s) => {
            let res = merged("axioms", axiom_residuals(&ext, &s).into_iter().chain([ext.d_eta_residual()]));
            structure = Some(s);
            expect_zero(&res)
        }
        Err(e) => (Status::Fail, e.to_string()),
    });
    let Some(s) = structure else {
        r.skip_rest(&EXTENSION_CHECKS[1..], suffix);
        return;
    };

    let nt = normality_tensors(&ext, &s);
    let n1_zero = nt.n1.is_zero();
    r.check(&name("normality"), &extra, || {
        let ok = nt.n2.is_zero() && nt.n4.is_zero() && n1_zero == sample.integrable;
        let text = format!(
            "N1: {}; N2: {}; N3: {}; N4: {}",
            Residual::vv2("N1", &nt.n1).render(),
            nt.n2,
            Residual::matrix("N3", &nt.n3).render(),
            nt.n4
        );
        (if ok { Status::Pass } else { Status::Fail }, text)
    });
    let lxi_phi = lie_derivative_affinor(&ext.total, &s.phi, &s.xi);
    let k_contact = linalg::is_zero_matrix(&lxi_phi);
    r.check(&name("k_contact"), &extra, || {
        expect_zero(&Residual::matrix("L_xi phi", &lxi_phi).merge(killing_residual(&ext, &s)))
    });

    let mut sig_points = sample_points(rng, &entry.params, SIGNATURE_POINTS, |a| {
        constraints_hold(entry, a) && signature_at(&s.g, a).is_some()
    });
    sig_points.sort_by_key(render_assignment);
    let n = ext.dim();
    let sigs: Vec<(Assignment, (usize, usize))> = sig_points
        .iter()
        .map(|a| (a.clone(), signature_at(&s.g, a).expect("accepted above")))
        .collect();
    let positive = !sigs.is_empty() && sigs.iter().all(|(_, s)| *s == (n, 0));

    r.check(&name("verdict"), &extra, || {
        let computed = if !k_contact {
            "contact_metric"
        } else if !n1_zero {
            ExpectedClass::KContactOnly.as_str()
        } else if positive {
            ExpectedClass::SasakiPositive.as_str()
        } else {
            ExpectedClass::PseudoSasaki.as_str()
        };
        match entry.expected_class {
            Some(c) if c.as_str() == computed => (Status::Pass, format!("{computed} (expected {c})")),
            Some(c) => (Status::Fail, format!("{computed} (expected {c})")),
            None => (Status::Info, computed.to_string()),
        }
    });

    let identity_points = sample_points(rng, &entry.params, SAMPLE_POINTS, |a| {
        constraints_hold(entry, a) && eval_matrix(j, a).is_some()
    });
    let parametric = !entry.params.is_empty();
    let at_points = |f: fn(&CentralExtension, &ContactMetricStructure) -> Residual| -> (Status, String) {
        let sym = f(&ext, &s);
        if !sym.is_zero() {
            return (Status::Fail, sym.render());
        }
        if !parametric {
            return (Status::Pass, "0".into());
        }
        if identity_points.len() < SAMPLE_POINTS {
            return (Status::Fail, format!("only {} admissible sample points", identity_points.len()));
        }
        for a in &identity_points {
            let pt = match specialized_structure(entry, sample, a) {
                Ok(v) => v,
                Err(e) => return (Status::Fail, format!("at {}: {e}", render_assignment(a))),
            };
            let res = f(&pt.0, &pt.1);
            if !res.is_zero() {
                return (Status::Fail, format!("at {}: {}", render_assignment(a), res.render()));
            }
        }
        (Status::Pass, format!("0 (symbolic and at {} rational points)", identity_points.len()))
    };
    r.check(&name("torsion_identity"), &extra, || at_points(torsion_identity_residual));
    r.check(&name("normality_identity"), &extra, || at_points(normality_identity_residual));

    let geo = match extension_geometry(&ext, &s) {
        Ok(g) => g,
        Err(e) => {
            r.check(&name("connection_formulas"), &extra, || (Status::Fail, e.to_string()));
            r.skip_rest(&EXTENSION_CHECKS[7..], suffix);
            return;
        }
    };
    let formulas = verify_extension_formulas(&ext, &s, &geo);
    let group = |prefix: &str| -> Vec<Residual> {
        formulas.iter().filter(|f| f.name.starts_with(prefix)).cloned().collect()
    };
    r.check(&name("connection_formulas"), &extra, || {
        let mut parts = group("connection_");
        parts.push(torsion_residual(&ext.total, &geo.connection));
        parts.push(metric_compatibility_residual(&geo.metric, &geo.connection));
        expect_zero(&merged("connection", parts))
    });
    r.check(&name("curvature_formulas"), &extra, || {
        let mut parts = group("curvature_");
        parts.push(bianchi_residual(&geo.curvature));
        expect_zero(&merged("curvature", parts))
    });
    r.check(&name("sasaki_curvature"), &extra, || {
        let res = merged("sasaki", group("sasaki_curvature_"));
        let dj_zero = geo.d_j.iter().flatten().all(|v| linalg::is_zero_vec(v));
        let ok = res.is_zero() == dj_zero && dj_zero == sample.integrable;
        let status = if ok { Status::Pass } else { Status::Fail };
        (status, format!("{} (DJ {})", res.render(), if dj_zero { "= 0" } else { "!= 0" }))
    });
    r.check(&name("ricci_formulas"), &extra, || {
        let res = merged("ricci", group("ricci_"));
        if sample.integrable {
            expect_zero(&res)
        } else if res.is_zero() {
            (Status::Info, "holds for this nonintegrable sample".into())
        } else {
            (Status::Info, format!("does not hold: {}", res.render()))
        }
    });
    r.check(&name("base_ricci"), &extra, || {
        let res = Residual::matrix("Ric_h", &geo.base_ricci);
        let flat = geo.base_curvature.is_zero();
        let text = format!("{}; R_h {}", res.render(), if flat { "= 0" } else { "!= 0" });
        if !sample.integrable {
            (Status::Info, text)
        } else if res.is_zero() {
            (Status::Pass, text)
        } else {
            (Status::Fail, text)
        }
    });
    r.check(&name("reeb_sectional"), &extra, || {
        let mut bad = Vec::new();
        let mut degenerate = Vec::new();
        let quarter = Scalar::ratio(1, 4);
        for (i, k) in reeb_sectional_curvatures(&ext, &geo.metric, &geo.curvature) {
            match k {
                Ok(k) if k == quarter => {}
                Ok(k) => bad.push(format!("K(xi,e{i}) = {k}")),
                Err(curvature::CurvatureError::DegeneratePlane) => degenerate.push(format!("e{i}")),
                Err(e) => bad.push(format!("K(xi,e{i}): {e}")),
            }
        }
        let rc = reeb_curvature_residual(&ext, &geo.curvature);
        if !rc.is_zero() {
            bad.push(rc.render());
        }
        if bad.is_empty() {
            let mut text = "K(xi,e_i) = 1/4".to_string();
            if !degenerate.is_empty() {
                text.push_str(&format!(" (degenerate planes: {})", degenerate.join(",")));
            }
            (Status::Pass, text)
        } else {
            (Status::Fail, bad.join("; "))
        }
    });
    r.check(&name("ricci_values"), &extra, || {
        let trace = ricci_trace(&geo.curvature);
        let diff = linalg::msub(&geo.ricci, &trace);
        let sym = linalg::is_symmetric(&geo.ricci);
        let m = n - 1;
        let text = format!("Ric(xi,xi) = {}", geo.ricci[m][m]);
        if linalg::is_zero_matrix(&diff) && sym {
            (Status::Pass, text)
        } else {
            (Status::Fail, format!("{text}; {}", Residual::matrix("trace path", &diff).render()))
        }
    });
    r.check(&name("ricci_oracle"), &extra, || ricci_oracle(entry, &s.g, &geo.curvature, &geo.ricci, rng));
    r.check(&name("signature"), &extra, || {
        if sigs.is_empty() {
            return (Status::Fail, "no admissible sample point".into());
        }
        let text = sigs
            .iter()
            .map(|(a, (p, q))| format!("({p},{q}) at {}", render_assignment(a)))
            .collect::<Vec<_>>()
            .join("; ");
        let ok = match entry.expected_class {
            Some(ExpectedClass::SasakiPositive) => positive,
            Some(ExpectedClass::PseudoSasaki) => sigs.iter().all(|(_, (p, q))| *p > 0 && *q > 0),
            _ => true,
        };
        (if ok { Status::Pass } else { Status::Fail }, text)
    });
}

/// Base entry: the symplectic algebra itself with its metric and curvature.
#[allow(clippy::too_many_arguments)]
fn base_only(
    r: &mut Runner,
    entry: &CatalogEntry,
    base: &LieAlgebra,
    omega: &KForm,
    sample: &JSample,
    suffix: &str,
    extra: &[String],
    rng: &mut ChaCha8Rng,
) {
    let name = |n: &str| format!("{n}{suffix}");
    let j = &sample.matrix;
    let mut metric = None;
    r.check(&name("base_metric"), extra, || match kahler::metric_from(omega, j) {
        Ok(h) => {
            let inv = kahler::metric_inverse(omega, j).expect("compatible and nondegenerate");
            let jhj = linalg::msub(&linalg::matmul(&linalg::matmul(&linalg::transpose(j), &h), j), &h);
            let res = Residual::matrix("J^T h J - h", &jhj);
            match Metric::with_inverse(h, inv) {
                Ok(m) => {
                    metric = Some(m);
                    expect_zero(&res)
                }
                Err(e) => (Status::Fail, e.to_string()),
            }
        }
        Err(e) => (Status::Fail, e.to_string()),
    });
    let Some(m) = metric else {
        return;
    };
    let conn = koszul_connection(base, &m);
    let curv = curvature_tensor(base, &conn);
    let ric = ricci_tensor(&m, &curv);
    r.check(&name("base_curvature"), extra, || {
        let rr = curv.residual("R_h");
        let rc = Residual::matrix("Ric_h", &ric);
        let text = format!("R_h: {}; Ric_h: {}", rr.render(), rc.render());
        if sample.integrable {
            (if rc.is_zero() { Status::Pass } else { Status::Fail }, text)
        } else {
            (Status::Info, text)
        }
    });
    r.check(&name("base_signature"), extra, || {
        let mut pts = sample_points(rng, &entry.params, SIGNATURE_POINTS, |a| {
            constraints_hold(entry, a) && signature_at(&m.g, a).is_some()
        });
        pts.sort_by_key(render_assignment);
        let text = pts
            .iter()
            .map(|a| {
                let (p, q) = signature_at(&m.g, a).expect("accepted above");
                format!("({p},{q}) at {}", render_assignment(a))
            })
            .collect::<Vec<_>>()
            .join("; ");
        (Status::Info, text)
    });
}

/// The extension and structure rebuilt from scratch at a rational point.
fn specialized_structure(
    entry: &CatalogEntry,
    sample: &JSample,
    a: &Assignment,
) -> Result<(CentralExtension, ContactMetricStructure), String> {
    let fixed = entry.specialize(a).map_err(|e| e.to_string())?;
    let ext = CentralExtension::from_total(fixed.algebra.clone()).map_err(|e| e.to_string())?;
    let j: Matrix = sample
        .matrix
        .iter()
        .map(|row| row.iter().map(|x| x.substitute(a)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let s = build_contact_structure(&ext, &j).map_err(|e| e.to_string())?;
    Ok((ext, s))
}

/// Frame-free Ricci against the weighted pseudo-orthonormal frame sum at random
/// points and random starting bases.
fn ricci_oracle(
    entry: &CatalogEntry,
    g: &Matrix,
    r: &curvature::Curvature,
    ric: &Matrix,
    rng: &mut ChaCha8Rng,
) -> (Status, String) {
    let n = g.len();
    let accept = |a: &Assignment| {
        constraints_hold(entry, a)
            && eval_matrix(g, a)
                .is_some_and(|m| {
                    let m: Matrix = m.into_iter().map(|r| r.into_iter().map(Scalar::from_rational).collect()).collect();
                    !linalg::determinant(&m).is_zero()
                })
            && r.eval(a).is_ok()
            && eval_matrix(ric, a).is_some()
    };
    let points: Vec<Assignment> = if entry.params.is_empty() {
        if accept(&Assignment::new()) {
            vec![Assignment::new(); SAMPLE_POINTS]
        } else {
            Vec::new()
        }
    } else {
        sample_points(rng, &entry.params, SAMPLE_POINTS, accept)
    };
    if points.len() < SAMPLE_POINTS {
        return (Status::Fail, format!("only {} admissible sample points", points.len()));
    }
    let mut hyperbolic = 0;
    for (k, a) in points.iter().enumerate() {
        let gv = eval_matrix(g, a).expect("accepted");
        let rv = r.eval(a).expect("accepted");
        let expected = eval_matrix(ric, a).expect("accepted");
        // The standard basis first: its null vectors exercise the hyperbolic steps.
        let start = if k == 0 {
            (0..n)
                .map(|i| (0..n).map(|j| Rational::from_integer(u8::from(i == j).into())).collect())
                .collect()
        } else {
            random_basis(rng, n)
        };
        let frame = match pseudo_orthonormal_frame_from(&gv, start) {
            Ok(f) => f,
            Err(e) => return (Status::Fail, format!("frame at {}: {e}", render_assignment(a))),
        };
        hyperbolic += frame.hyperbolic_steps;
        let got = ricci_from_frame(&gv, &rv, &frame);
        if got != expected {
            let mut loc = String::new();
            'o: for y in 0..n {
                for z in 0..n {
                    if got[y][z] != expected[y][z] {
                        loc = format!(
                            "({},{}): frame {} vs {}",
                            y + 1,
                            z + 1,
                            fmt_rational(&got[y][z]),
                            fmt_rational(&expected[y][z])
                        );
                        break 'o;
                    }
                }
            }
            return (Status::Fail, format!("at {}: {loc}", render_assignment(a)));
        }
    }
    (
        Status::Pass,
        format!("equal at {} points ({hyperbolic} hyperbolic frame steps)", points.len()),
    )
}

/// Runs every entry on a worker pool and merges reports ordered by entry key.
pub fn run_catalog(entries: &[CatalogEntry], suite: Suite, seed: u64, timings: bool) -> Vec<VerificationReport> {
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<(usize, Vec<VerificationReport>)>> = Mutex::new(Vec::new());
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(entries.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= entries.len() {
                    break;
                }
                let reps = run_checks(&entries[i], suite, seed, timings);
                results.lock().expect("no worker panicked").push((i, reps));
            });
        }
    });
    let mut all = results.into_inner().expect("no worker panicked");
    all.sort_by(|a, b| entries[a.0].key.cmp(&entries[b.0].key).then(a.0.cmp(&b.0)));
    all.into_iter().flat_map(|(_, r)| r).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{embedded_catalog, find, fixtures};

    fn status_of<'a>(reps: &'a [VerificationReport], check: &str) -> &'a VerificationReport {
        reps.iter().find(|r| r.check == check).unwrap_or_else(|| panic!("no check {check}"))
    }

    #[test]
    fn g24_1_passes_everything() {
        let c = embedded_catalog();
        let reps = run_checks(find(&c, "g24_1").unwrap(), Suite::All, 7, false);
        for r in &reps {
            assert_ne!(r.status, Status::Fail, "{r:?}");
            assert_ne!(r.status, Status::Skip, "{r:?}");
        }
        assert_eq!(status_of(&reps, "verdict").residual, "pseudo_sasaki (expected pseudo_sasaki)");
    }

    #[test]
    fn negative_controls_fail_where_intended() {
        let f = fixtures();
        for (key, check) in [
            ("broken_jacobi", "jacobi"),
            ("nonclosed_omega", "closedness"),
            ("incompatible_j", "compatibility"),
        ] {
            let reps = run_checks(find(&f, key).unwrap(), Suite::All, 1, false);
            let first = reps.iter().position(|r| r.status == Status::Fail).unwrap();
            assert_eq!(reps[first].check, check, "{key}");
            assert!(reps[..first].iter().all(|r| r.status == Status::Pass), "{key}");
            assert!(reps[first + 1..].iter().all(|r| r.status == Status::Skip), "{key}");
        }
    }

    #[test]
    fn suite_filter_keeps_failures() {
        let f = fixtures();
        let reps = run_checks(find(&f, "incompatible_j").unwrap(), Suite::Jacobi, 1, false);
        assert!(reps.iter().any(|r| r.check == "compatibility" && r.status == Status::Fail));
        assert!(reps.iter().all(|r| r.check != "contact"));
    }

    #[test]
    fn deterministic() {
        let c = embedded_catalog();
        let e = find(&c, "g13_1").unwrap();
        assert_eq!(run_checks(e, Suite::All, 3, false), run_checks(e, Suite::All, 3, false));
    }
}
