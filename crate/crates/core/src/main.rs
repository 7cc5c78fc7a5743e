use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nilcontact::catalog::report::{self, theorem_table, to_json, to_table};
use nilcontact::catalog::{
    self, checks::run_catalog, load_catalog, load_file, reproduce_theorem, CatalogEntry, Status, Suite, Theorem,
    VerificationReport,
};
use nilcontact::scalar::{parse_rational, Assignment};

#[derive(Parser)]
#[command(name = "nilcontact", version, about = "Exact checks of contact and Sasakian structures on nilpotent Lie algebras")]
struct Cli {
    /// Seed for random sample points.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report document here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Record wall-clock time per check (makes reports run-dependent).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Jacobi identity of an entry or algebra file.
    Jacobi { target: String },
    /// Contact condition and the printed d eta.
    Contact { target: String },
    /// Symplectic and almost complex checks on the base.
    KahlerCheck { target: String },
    /// Connection and curvature identities.
    Curvature {
        target: String,
        /// Fix parameters first, e.g. `lambda=2,psi12=1/3`.
        #[arg(long)]
        assign: Option<String>,
    },
    /// Ricci tensor checks.
    Ricci {
        target: String,
        #[arg(long)]
        assign: Option<String>,
    },
    /// Every check on every entry of a theorem table.
    Reproduce {
        #[arg(long)]
        theorem: String,
    },
    /// List catalog entries.
    ListCatalog,
    /// Every check on an algebra file.
    CheckFile { path: PathBuf },
}

fn parse_assign(s: &str) -> Result<Assignment, String> {
    let mut a = Assignment::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| format!("expected name=value, got '{part}'"))?;
        let v = parse_rational(v.trim()).map_err(|e| format!("{part}: {e}"))?;
        a.insert(k.trim().to_string(), v);
    }
    Ok(a)
}

fn resolve(target: &str) -> Result<CatalogEntry, String> {
    let path = Path::new(target);
    if path.is_file() {
        return load_file(path).map_err(|e| e.to_string());
    }
    let cat = load_catalog().map_err(|e| e.to_string())?;
    if let Ok(e) = catalog::find(&cat, target) {
        return Ok(e.clone());
    }
    let fx = catalog::fixtures();
    catalog::find(&fx, target).cloned().map_err(|e| e.to_string())
}

fn with_assign(entry: CatalogEntry, assign: Option<&str>) -> Result<CatalogEntry, String> {
    match assign {
        None => Ok(entry),
        Some(s) => {
            let a = parse_assign(s)?;
            if let Some(k) = a.keys().find(|k| !entry.params.contains(k)) {
                return Err(format!("{}: no parameter '{k}'", entry.key));
            }
            entry.specialize(&a).map_err(|e| format!("{}: {e}", entry.key))
        }
    }
}

fn run(cli: &Cli) -> Result<bool, String> {
    let (command, reports, theorem): (String, Vec<VerificationReport>, _) = match &cli.command {
        Command::ListCatalog => {
            let cat = load_catalog().map_err(|e| e.to_string())?;
            for e in &cat {
                let theorem = e.theorem.map(|t| t.to_string()).unwrap_or_else(|| "-".into());
                let class = e.expected_class.map(|c| c.as_str()).unwrap_or("-");
                let params = if e.params.is_empty() { "-".to_string() } else { e.params.join(",") };
                println!("{:14} dim {}  theorem {:4} {:16} params {}", e.key, e.dim(), theorem, class, params);
            }
            println!("{} entries", cat.len());
            return Ok(true);
        }
        Command::Reproduce { theorem } => {
            let t = Theorem::parse(theorem).ok_or_else(|| format!("unknown theorem '{theorem}' (use 3.1 or 3.2)"))?;
            let cat = load_catalog().map_err(|e| e.to_string())?;
            let s = reproduce_theorem(&cat, t, cli.seed, cli.timings);
            print!("{}", to_table(&s.reports));
            print!("{}", theorem_table(&s));
            let reps = s.reports.clone();
            (format!("reproduce --theorem {t}"), reps, Some(s))
        }
        Command::CheckFile { path } => {
            let e = load_file(path).map_err(|e| e.to_string())?;
            let reps = run_catalog(std::slice::from_ref(&e), Suite::All, cli.seed, cli.timings);
            (format!("check-file {}", path.display()), reps, None)
        }
        Command::Jacobi { target } => one(cli, "jacobi", target, None, Suite::Jacobi)?,
        Command::Contact { target } => one(cli, "contact", target, None, Suite::Contact)?,
        Command::KahlerCheck { target } => one(cli, "kahler-check", target, None, Suite::Kahler)?,
        Command::Curvature { target, assign } => one(cli, "curvature", target, assign.as_deref(), Suite::Curvature)?,
        Command::Ricci { target, assign } => one(cli, "ricci", target, assign.as_deref(), Suite::Ricci)?,
    };
    if theorem.is_none() {
        print!("{}", to_table(&reports));
    }
    if let Some(out) = &cli.out {
        let doc = to_json(&command, cli.seed, &reports, theorem.as_ref());
        std::fs::write(out, doc).map_err(|e| format!("{}: {e}", out.display()))?;
    }
    let ok = reports.iter().all(|r| r.status != Status::Fail) && theorem.as_ref().is_none_or(|s| s.all_confirmed());
    Ok(ok)
}

type Run = (String, Vec<VerificationReport>, Option<report::TheoremSummary>);

fn one(cli: &Cli, verb: &str, target: &str, assign: Option<&str>, suite: Suite) -> Result<Run, String> {
    let entry = with_assign(resolve(target)?, assign)?;
    let reps = run_catalog(std::slice::from_ref(&entry), suite, cli.seed, cli.timings);
    let mut command = format!("{verb} {target}");
    if let Some(a) = assign {
        command.push_str(&format!(" --assign {a}"));
    }
    Ok((command, reps, None))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
