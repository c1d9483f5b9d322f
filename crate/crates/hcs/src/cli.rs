//! Command-line front end.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hcs_core::exponent::{crosscheck, Method};
use hcs_core::{assoc_matrix, iso_signature, search, spectrum, HnsDef, HyperNum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog_file::{CatalogError, CatalogFile};
use crate::verify::{self, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "hcs",
    version,
    about = "Hypercomplex number systems: tables, exponentials, spectra"
)]
pub struct Cli {
    /// User catalog file [default: $HOME/.config/hcs/catalog.json]
    #[arg(long, global = true, env = "HCS_CATALOG", value_name = "PATH")]
    pub catalog: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the Cayley table of a system
    Table {
        #[arg(long)]
        system: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Compute Exp(M)
    Exp {
        #[command(flatten)]
        number: NumberArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::All)]
        method: MethodArg,
        /// Largest allowed disagreement between methods
        #[arg(long, default_value_t = 1e-8, value_parser = positive)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the spectrum of Ψ(M) and the isomorphism signature
    Spectrum {
        #[arg(long)]
        system: String,
        /// Coefficients of M; drawn from `--seed` in [-1, 1] when omitted
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = finite)]
        coeffs: Option<Vec<f64>>,
        #[arg(long, default_value_t = hcs_core::spectral::DEFAULT_TRIALS, value_parser = at_least_one)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the seeded property suites on a system
    Verify {
        #[arg(long)]
        system: String,
        #[arg(long, default_value_t = 1000, value_parser = at_least_one)]
        trials: usize,
        #[arg(long, default_value_t = 1e-8, value_parser = positive)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Manage the user catalog
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Debug, Args)]
pub struct NumberArgs {
    #[arg(long)]
    pub system: String,
    /// Comma-separated coefficients, e.g. `1,0.5,-0.2,0.3,0.1`
    #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true, value_parser = finite)]
    pub coeffs: Vec<f64>,
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    /// List built-in and user systems
    List {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Write every known system to a file
    Export {
        #[arg(long)]
        path: PathBuf,
    },
    /// Merge systems from a file into the user catalog
    Import {
        #[arg(long)]
        path: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Series,
    Matrix,
    Eigen,
    Closed,
    Dft,
    All,
}

fn finite(s: &str) -> Result<f64, String> {
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a number"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let x = finite(s)?;
    if x > 0.0 {
        Ok(x)
    } else {
        Err("must be positive".to_string())
    }
}

fn at_least_one(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err("must be an integer of at least 1".to_string()),
    }
}

/// A failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.to_string(),
        }
    }
}

impl From<CatalogError> for Failure {
    fn from(err: CatalogError) -> Self {
        Failure::input(err)
    }
}

impl From<hcs_core::Error> for Failure {
    fn from(err: hcs_core::Error) -> Self {
        Failure::input(err)
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Failure::input(err)
    }
}

pub fn default_catalog_path() -> Option<PathBuf> {
    std::env::var_os("HOME").map(|home| PathBuf::from(home).join(".config/hcs/catalog.json"))
}

/// Built-in systems plus the user catalog, if it exists.
struct Systems {
    builtin: Vec<HnsDef>,
    user: CatalogFile,
    user_path: Option<PathBuf>,
}

impl Systems {
    fn load(path: Option<PathBuf>) -> Result<Self, Failure> {
        let user_path = path.or_else(default_catalog_path);
        let user = match &user_path {
            Some(p) if p.exists() => CatalogFile::load(p)?,
            _ => CatalogFile::new(Vec::new()),
        };
        Ok(Self {
            builtin: hcs_core::builtin_systems(),
            user,
            user_path,
        })
    }

    fn all(&self) -> Vec<HnsDef> {
        let mut out = self.builtin.clone();
        out.extend(
            self.user
                .systems
                .iter()
                .filter(|s| !self.builtin.iter().any(|b| b.name() == s.name()))
                .cloned(),
        );
        out
    }
}

fn find(all: &[HnsDef], name: &str) -> Result<HnsDef, Failure> {
    Ok(search(all, name)?.clone())
}

fn number<'s>(hns: &'s HnsDef, coeffs: &[f64]) -> Result<HyperNum<'s>, Failure> {
    Ok(HyperNum::new(hns, coeffs.to_vec())?)
}

fn fmt_coeffs(coeffs: &[f64]) -> String {
    coeffs
        .iter()
        .map(|c| format!("{c:.10}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output serializes") + "\n"
}

/// Parses `args`, runs the command, and writes to `out`/`err`. Returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(cli) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}

fn execute(cli: Cli) -> Result<(String, i32), Failure> {
    let systems = Systems::load(cli.catalog)?;
    match cli.command {
        Command::Table { system, format } => {
            let hns = find(&systems.all(), &system)?;
            Ok((cmd_table(&hns, format), EXIT_OK))
        }
        Command::Exp {
            number: n,
            method,
            tol,
            format,
        } => {
            let hns = find(&systems.all(), &n.system)?;
            cmd_exp(&hns, &n.coeffs, method, tol, format)
        }
        Command::Spectrum {
            system,
            coeffs,
            trials,
            seed,
            format,
        } => {
            let hns = find(&systems.all(), &system)?;
            Ok((cmd_spectrum(&hns, coeffs, trials, seed, format)?, EXIT_OK))
        }
        Command::Verify {
            system,
            trials,
            tol,
            seed,
            format,
        } => {
            let hns = find(&systems.all(), &system)?;
            Ok(cmd_verify(&hns, VerifyConfig { trials, tol, seed }, format))
        }
        Command::Catalog { action } => cmd_catalog(systems, action).map(|t| (t, EXIT_OK)),
    }
}

fn cell_forms(hns: &HnsDef) -> Vec<Vec<String>> {
    let n = hns.dim();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut coeffs = vec![0.0; n];
                    for t in hns.cell(i, j) {
                        coeffs[t.index] += t.coeff;
                    }
                    HyperNum::new(hns, coeffs)
                        .expect("cell has dim entries")
                        .natural_form("e")
                })
                .collect()
        })
        .collect()
}

pub fn cmd_table(hns: &HnsDef, format: Format) -> String {
    let cells = cell_forms(hns);
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                system: &'a str,
                dim: usize,
                table: Vec<Vec<String>>,
            }
            json(&Out {
                system: hns.name(),
                dim: hns.dim(),
                table: cells,
            })
        }
        Format::Text => {
            let labels: Vec<String> = (1..=hns.dim()).map(|i| format!("e{i}")).collect();
            let width = cells
                .iter()
                .flatten()
                .chain(&labels)
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(1);
            let label_width = labels.last().map_or(2, String::len);
            let mut text = String::new();
            let _ = write!(text, "{:label_width$} |", "·");
            for l in &labels {
                let _ = write!(text, " {l:width$}");
            }
            text.push('\n');
            let _ = writeln!(
                text,
                "{}",
                "-".repeat(label_width + 2 + labels.len() * (width + 1))
            );
            for (l, row) in labels.iter().zip(&cells) {
                let _ = write!(text, "{l:label_width$} |");
                for c in row {
                    let _ = write!(text, " {c:width$}");
                }
                text.push('\n');
            }
            text
        }
    }
}

#[derive(Serialize)]
struct MethodResult {
    method: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    coeffs: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct ExpOut<'a> {
    system: &'a str,
    coeffs: &'a [f64],
    results: Vec<MethodResult>,
    deviation: f64,
    tol: f64,
    passed: bool,
}

fn closed_method(hns: &HnsDef) -> Option<Method> {
    [Method::ClosedG47, Method::ClosedG51]
        .into_iter()
        .find(|m| m.applies_to(hns))
}

pub fn cmd_exp(
    hns: &HnsDef,
    coeffs: &[f64],
    method: MethodArg,
    tol: f64,
    format: Format,
) -> Result<(String, i32), Failure> {
    let m = number(hns, coeffs)?;
    let (results, deviation, passed) = match method {
        MethodArg::All => {
            let report = crosscheck(&m, tol);
            let results = report
                .outcomes
                .iter()
                .map(|o| match &o.result {
                    Ok(x) => MethodResult {
                        method: o.method.name(),
                        coeffs: Some(x.coeffs().to_vec()),
                        error: None,
                    },
                    Err(e) => MethodResult {
                        method: o.method.name(),
                        coeffs: None,
                        error: Some(e.to_string()),
                    },
                })
                .collect();
            (results, report.max_pairwise_deviation, report.passed())
        }
        single => {
            let chosen = match single {
                MethodArg::Series => Method::Series,
                MethodArg::Matrix => Method::Matrix,
                MethodArg::Eigen => Method::Eigen,
                MethodArg::Dft => Method::Dft,
                MethodArg::Closed => closed_method(hns).ok_or_else(|| {
                    Failure::input(format!("no closed form for system `{}`", hns.name()))
                })?,
                MethodArg::All => unreachable!(),
            };
            if !chosen.applies_to(hns) {
                return Err(Failure::input(format!(
                    "method `{}` does not apply to system `{}`",
                    chosen.name(),
                    hns.name()
                )));
            }
            let x = chosen.exp(&m)?;
            let result = MethodResult {
                method: chosen.name(),
                coeffs: Some(x.into_coeffs()),
                error: None,
            };
            (vec![result], 0.0, true)
        }
    };
    let code = if passed { EXIT_OK } else { EXIT_VERIFY };
    let text = match format {
        Format::Json => json(&ExpOut {
            system: hns.name(),
            coeffs,
            results,
            deviation,
            tol,
            passed,
        }),
        Format::Text => {
            let width = results.iter().map(|r| r.method.len()).max().unwrap_or(0);
            let mut text = format!("system: {}\ncoeffs: [{}]\n", hns.name(), fmt_coeffs(coeffs));
            for r in &results {
                match (&r.coeffs, &r.error) {
                    (Some(c), _) => {
                        let _ = writeln!(text, "{:width$}  [{}]", r.method, fmt_coeffs(c));
                    }
                    (None, Some(e)) => {
                        let _ = writeln!(text, "{:width$}  failed: {e}", r.method);
                    }
                    (None, None) => {}
                }
            }
            if method == MethodArg::All {
                let verdict = if passed { "ok" } else { "FAILED" };
                let _ = writeln!(text, "deviation: {deviation:.3e} (tol {tol:e}) {verdict}");
            }
            text
        }
    };
    Ok((text, code))
}

#[derive(Serialize)]
struct SpectrumJson {
    reals: Vec<f64>,
    pairs: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct SpectrumOut<'a> {
    system: &'a str,
    coeffs: Vec<f64>,
    spectrum: SpectrumJson,
    signature: String,
    system_signature: String,
}

pub fn cmd_spectrum(
    hns: &HnsDef,
    coeffs: Option<Vec<f64>>,
    trials: usize,
    seed: u64,
    format: Format,
) -> Result<String, Failure> {
    let m = match coeffs {
        Some(c) => number(hns, &c)?,
        None => verify::random_number(hns, &mut ChaCha8Rng::seed_from_u64(seed), 1.0),
    };
    let s = spectrum(&assoc_matrix(&m), hcs_core::spectral::DEFAULT_PAIR_TOL)?;
    let system_signature = iso_signature(hns, trials, seed)?;
    let out = SpectrumOut {
        system: hns.name(),
        coeffs: m.coeffs().to_vec(),
        signature: s.signature().label(),
        system_signature: system_signature.label(),
        spectrum: SpectrumJson {
            reals: s.reals.clone(),
            pairs: s.pairs.iter().map(|&(re, im)| [re, im]).collect(),
        },
    };
    Ok(match format {
        Format::Json => json(&out),
        Format::Text => {
            let mut text = format!(
                "system: {}\ncoeffs: [{}]\n",
                out.system,
                fmt_coeffs(&out.coeffs)
            );
            let _ = writeln!(text, "real roots: [{}]", fmt_coeffs(&out.spectrum.reals));
            let pairs: Vec<String> = out
                .spectrum
                .pairs
                .iter()
                .map(|[re, im]| format!("{re:.10} ± {im:.10}i"))
                .collect();
            let _ = writeln!(text, "complex pairs: [{}]", pairs.join(", "));
            let _ = writeln!(text, "signature: {}", out.signature);
            let _ = writeln!(text, "system signature: {}", out.system_signature);
            text
        }
    })
}

pub fn cmd_verify(hns: &HnsDef, cfg: VerifyConfig, format: Format) -> (String, i32) {
    let suites = verify::run_all(hns, &cfg);
    let ok = suites.iter().all(|s| s.ok());
    let code = if ok { EXIT_OK } else { EXIT_VERIFY };
    let text = match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                system: &'a str,
                trials: usize,
                tol: f64,
                seed: u64,
                suites: &'a [verify::SuiteReport],
                passed: bool,
            }
            json(&Out {
                system: hns.name(),
                trials: cfg.trials,
                tol: cfg.tol,
                seed: cfg.seed,
                suites: &suites,
                passed: ok,
            })
        }
        Format::Text => {
            let mut text = format!(
                "system: {}  trials: {}  tol: {:e}  seed: {}\n",
                hns.name(),
                cfg.trials,
                cfg.tol,
                cfg.seed
            );
            for s in &suites {
                match s.skipped {
                    Some(reason) => {
                        let _ = writeln!(text, "{:17} skipped ({reason})", s.name);
                    }
                    None => {
                        let verdict = if s.ok() { "PASS" } else { "FAIL" };
                        let _ = writeln!(
                            text,
                            "{:17} {verdict}  {} passed, {} failed, worst {:.3e} (bound {:.1e})",
                            s.name, s.passed, s.failed, s.worst, s.bound
                        );
                    }
                }
            }
            let _ = writeln!(
                text,
                "{}",
                if ok {
                    "all suites passed"
                } else {
                    "verification failed"
                }
            );
            text
        }
    };
    (text, code)
}

fn cmd_catalog(mut systems: Systems, action: CatalogAction) -> Result<String, Failure> {
    match action {
        CatalogAction::List { format } => {
            let all = systems.all();
            Ok(match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Entry<'a> {
                        name: &'a str,
                        dim: usize,
                        builtin: bool,
                    }
                    let entries: Vec<Entry> = all
                        .iter()
                        .map(|s| Entry {
                            name: s.name(),
                            dim: s.dim(),
                            builtin: systems.builtin.iter().any(|b| b.name() == s.name()),
                        })
                        .collect();
                    json(&entries)
                }
                Format::Text => all
                    .iter()
                    .map(|s| {
                        let origin = if systems.builtin.iter().any(|b| b.name() == s.name()) {
                            "builtin"
                        } else {
                            "user"
                        };
                        format!("{:18} dim {}  {origin}\n", s.name(), s.dim())
                    })
                    .collect(),
            })
        }
        CatalogAction::Export { path } => {
            let file = CatalogFile::new(systems.all());
            file.save(&path)?;
            Ok(format!(
                "exported {} systems to {}\n",
                file.systems.len(),
                path.display()
            ))
        }
        CatalogAction::Import { path } => {
            let incoming = CatalogFile::load(&path)?;
            let mut fresh = Vec::new();
            for system in incoming.systems {
                match systems.builtin.iter().find(|b| b.name() == system.name()) {
                    Some(b) if *b == system => {}
                    Some(_) => {
                        return Err(Failure::input(format!(
                            "system `{}` conflicts with a built-in system",
                            system.name()
                        )))
                    }
                    None => fresh.push(system),
                }
            }
            let added = systems.user.merge(CatalogFile::new(fresh))?;
            let target = systems
                .user_path
                .clone()
                .ok_or_else(|| Failure::input("no catalog path: set --catalog or HCS_CATALOG"))?;
            if added > 0 {
                systems.user.save(&target)?;
            }
            Ok(format!(
                "imported {added} new systems into {}\n",
                target.display()
            ))
        }
    }
}
