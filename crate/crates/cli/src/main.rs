use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use pointed_cy::cartan::{format_root, CartanError, CartanMatrix, RootSystem};
use pointed_cy::datum::{DatumError, GenericDatum, RawDatum};
use pointed_cy::format::parse_datum;
use pointed_cy::homology::{group_algebra_report, is_cy_nichols, is_cy_pointed, CyReport};
use pointed_cy::isomorphism::{classify_raw, find_isomorphism, Classification, IsomorphismOutcome, DEFAULT_SEARCH_BOUND};
use pointed_cy::scalars::Monomial;
use serde::{Deserialize, Serialize};

mod corpus;

pub const OK: u8 = 0;
pub const NEGATIVE: u8 = 1;
pub const USAGE: u8 = 2;
pub const INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(name = "pointed-cy", version, about = "Calabi-Yau verdicts for pointed Hopf algebras of finite Cartan type")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Coefficient bound for the isomorphism search.
    #[arg(long, global = true, default_value_t = DEFAULT_SEARCH_BOUND)]
    bound: i64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the datum conditions.
    Validate { file: PathBuf },
    /// Longest word and positive roots of a Cartan type or matrix literal.
    Roots { cartan: String },
    /// CY report for the pointed algebra and its Nichols algebra.
    Cy { file: PathBuf },
    /// Search for an isomorphism between two data.
    Isom { first: PathBuf, second: PathBuf },
    /// Identify a CY datum of global dimension at most 4.
    Classify { file: PathBuf },
    /// Run the fixture corpus against its expected verdicts.
    Corpus { dir: Option<PathBuf> },
}

/// Exit status plus the text to print on stdout.
pub struct Outcome {
    pub code: u8,
    pub text: String,
}

impl Outcome {
    fn new(code: u8, text: String) -> Outcome {
        Outcome { code, text }
    }
}

/// A failure that should exit with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn read_raw(path: &Path) -> Result<RawDatum> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_datum(&text).with_context(|| format!("{}", path.display()))
}

#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
pub struct ValidateReport {
    pub valid: bool,
    pub violations: Vec<String>,
}

fn violations(err: &DatumError) -> Vec<String> {
    match err {
        DatumError::Invalid(vs) => vs.iter().map(ToString::to_string).collect(),
        other => vec![other.to_string()],
    }
}

/// Validates a raw datum; a bare group algebra is always valid.
fn check(raw: &RawDatum) -> Result<Option<GenericDatum>, Vec<String>> {
    if raw.cartan.is_empty() {
        if raw.g.is_empty() && raw.chi.is_empty() && raw.linking.is_empty() {
            return Ok(None);
        }
        return Err(vec!["vertex data given for an empty Cartan matrix".into()]);
    }
    GenericDatum::new(raw.clone()).map(Some).map_err(|e| violations(&e))
}

fn validate(file: &Path, json: bool) -> Result<Outcome> {
    let raw = read_raw(file)?;
    let report = match check(&raw) {
        Ok(_) => ValidateReport { valid: true, violations: Vec::new() },
        Err(violations) => ValidateReport { valid: false, violations },
    };
    let code = if report.valid { OK } else { NEGATIVE };
    let text = if json {
        to_json(&report)
    } else if report.valid {
        "VALID\n".into()
    } else {
        report.violations.iter().map(|v| format!("{v}\n")).collect()
    };
    Ok(Outcome::new(code, text))
}

#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
pub struct RootsReport {
    pub cartan: Vec<Vec<i64>>,
    pub word: Vec<usize>,
    pub roots: Vec<Vec<i64>>,
    pub labels: Vec<String>,
    pub heights: Vec<i64>,
}

fn roots(cartan: &str, json: bool) -> Result<Outcome> {
    let matrix = match CartanMatrix::parse(cartan) {
        Ok(m) => m,
        Err(e @ (CartanError::Syntax(_) | CartanError::UnknownType(_))) => return Err(UsageError(e.to_string()).into()),
        Err(e) => return Ok(Outcome::new(NEGATIVE, format!("{e}\n"))),
    };
    let rs = RootSystem::new(matrix);
    let report = RootsReport {
        cartan: rs.cartan().entries().to_vec(),
        word: rs.word().iter().map(|i| i + 1).collect(),
        roots: rs.roots().to_vec(),
        labels: rs.roots().iter().map(|r| format_root(r)).collect(),
        heights: rs.heights().to_vec(),
    };
    if json {
        return Ok(Outcome::new(OK, to_json(&report)));
    }
    let mut text = String::new();
    writeln!(text, "cartan: {}", rs.cartan()).unwrap();
    let word: Vec<String> = report.word.iter().map(ToString::to_string).collect();
    writeln!(text, "word: [{}]", word.join(",")).unwrap();
    writeln!(text, "positive roots: {}", rs.p()).unwrap();
    for (t, (label, h)) in report.labels.iter().zip(&report.heights).enumerate() {
        writeln!(text, "  β{} = {label}  height {h}", t + 1).unwrap();
    }
    Ok(Outcome::new(OK, text))
}

#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
pub struct ReportWithComplex {
    #[serde(flatten)]
    pub report: CyReport,
    pub dualizing_complex: String,
}

impl From<CyReport> for ReportWithComplex {
    fn from(report: CyReport) -> Self {
        let dualizing_complex = report.dualizing_complex();
        ReportWithComplex { report, dualizing_complex }
    }
}

#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
pub struct CyOutput {
    pub pointed: ReportWithComplex,
    /// Absent for a bare group algebra.
    pub nichols: Option<ReportWithComplex>,
}

fn scalars(name: &str, var: &str, values: &[Monomial]) -> String {
    values.iter().enumerate().map(|(i, v)| format!("{name}({var}_{})={v}", i + 1)).collect::<Vec<_>>().join(", ")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cy_text(out: &CyOutput) -> String {
    let mut text = String::new();
    let p = &out.pointed.report;
    writeln!(text, "CY: {}, dimension {}", yes_no(p.is_cy), p.dimension).unwrap();
    if let Some(xi) = &p.integral_character {
        writeln!(text, "integral character: {}", scalars("ξ", "y", xi)).unwrap();
    }
    let psi = [scalars("ψ", "x", &p.nakayama.x_scalars), scalars("ψ", "y", &p.nakayama.y_scalars)];
    writeln!(text, "nakayama: {}", psi.iter().filter(|s| !s.is_empty()).cloned().collect::<Vec<_>>().join(", ")).unwrap();
    match &p.conjugator {
        Some(z) => {
            let z: Vec<String> = z.iter().map(ToString::to_string).collect();
            writeln!(text, "squared antipode: inner, z=({})", z.join(",")).unwrap()
        }
        None => writeln!(text, "squared antipode: not inner").unwrap(),
    }
    writeln!(text, "dualizing complex: {}", out.pointed.dualizing_complex).unwrap();
    for f in &p.failures {
        writeln!(text, "failure: {f}").unwrap();
    }
    if let Some(n) = &out.nichols {
        let r = &n.report;
        writeln!(text, "nichols CY: {}, dimension {}", yes_no(r.is_cy), r.dimension).unwrap();
        writeln!(text, "nichols nakayama: {}", scalars("φ", "x", &r.nakayama.x_scalars)).unwrap();
        writeln!(text, "nichols dualizing complex: {}", n.dualizing_complex).unwrap();
        for f in &r.failures {
            writeln!(text, "nichols failure: {f}").unwrap();
        }
    }
    text
}

pub fn cy_output(raw: &RawDatum) -> Result<CyOutput, Vec<String>> {
    Ok(match check(raw)? {
        None => CyOutput { pointed: group_algebra_report(raw.group_rank).into(), nichols: None },
        Some(d) => {
            let rs = d.root_system();
            CyOutput { pointed: is_cy_pointed(&d, &rs).into(), nichols: Some(is_cy_nichols(&d, &rs).into()) }
        }
    })
}

fn invalid(file: &Path, violations: &[String], json: bool) -> Outcome {
    let text = if json {
        to_json(&ValidateReport { valid: false, violations: violations.to_vec() })
    } else {
        violations.iter().map(|v| format!("invalid datum {}: {v}\n", file.display())).collect()
    };
    Outcome::new(NEGATIVE, text)
}

fn cy(file: &Path, json: bool) -> Result<Outcome> {
    let raw = read_raw(file)?;
    let out = match cy_output(&raw) {
        Ok(out) => out,
        Err(v) => return Ok(invalid(file, &v, json)),
    };
    let code = if out.pointed.report.is_cy { OK } else { NEGATIVE };
    Ok(Outcome::new(code, if json { to_json(&out) } else { cy_text(&out) }))
}

/// Isomorphism witness with 1-based `sigma`.
#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
pub struct Witness {
    pub matrix: Vec<Vec<i64>>,
    pub sigma: Vec<usize>,
    pub alpha: Vec<Monomial>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum IsomReport {
    Found { witness: Witness },
    None,
    Inconclusive { bound: i64 },
}

fn isom(first: &Path, second: &Path, bound: i64, json: bool) -> Result<Outcome> {
    let mut data = Vec::new();
    for file in [first, second] {
        let raw = read_raw(file)?;
        match check(&raw) {
            Ok(Some(d)) => data.push(d),
            Ok(None) => {
                return Err(UsageError(format!(
                    "unsupported: {} is a bare group algebra; compare group ranks instead",
                    file.display()
                ))
                .into())
            }
            Err(v) => return Ok(invalid(file, &v, json)),
        }
    }
    if bound < 0 {
        return Err(UsageError(format!("negative search bound {bound}")).into());
    }
    let outcome = find_isomorphism(&data[0], &data[1], bound).map_err(|e| UsageError(e.to_string()))?;
    let report = match outcome {
        IsomorphismOutcome::Found { witness } => IsomReport::Found {
            witness: Witness {
                matrix: witness.matrix,
                sigma: witness.sigma.iter().map(|i| i + 1).collect(),
                alpha: witness.alpha,
            },
        },
        IsomorphismOutcome::None => IsomReport::None,
        IsomorphismOutcome::Inconclusive { bound } => IsomReport::Inconclusive { bound },
    };
    let code = match report {
        IsomReport::Found { .. } => OK,
        IsomReport::None => NEGATIVE,
        IsomReport::Inconclusive { .. } => INCONCLUSIVE,
    };
    if json {
        return Ok(Outcome::new(code, to_json(&report)));
    }
    let text = match &report {
        IsomReport::Found { witness } => {
            let rows: Vec<String> = witness
                .matrix
                .iter()
                .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
                .collect();
            let sigma: Vec<String> = witness.sigma.iter().map(ToString::to_string).collect();
            let alpha: Vec<String> = witness.alpha.iter().map(ToString::to_string).collect();
            format!(
                "isomorphic\nmatrix: {}\nsigma: [{}]\nalpha: [{}]\n",
                rows.join("; "),
                sigma.join(","),
                alpha.join(", ")
            )
        }
        IsomReport::None => "none\n".into(),
        IsomReport::Inconclusive { bound } => format!("inconclusive (bound {bound})\n"),
    };
    Ok(Outcome::new(code, text))
}

pub fn classification(raw: &RawDatum) -> Result<Result<Classification, Vec<String>>> {
    if let Err(v) = check(raw) {
        return Ok(Err(v));
    }
    Ok(Ok(classify_raw(raw).map_err(|e| UsageError(e.to_string()))?))
}

fn classify(file: &Path, json: bool) -> Result<Outcome> {
    let raw = read_raw(file)?;
    let result = match classification(&raw)? {
        Ok(c) => c,
        Err(v) => return Ok(invalid(file, &v, json)),
    };
    let code = if matches!(result, Classification::Label { .. }) { OK } else { NEGATIVE };
    if json {
        return Ok(Outcome::new(code, to_json(&result)));
    }
    let text = match &result {
        Classification::Label { label } => format!("{label}\n"),
        Classification::NotCy => "not CY\n".into(),
        Classification::DimensionAbove4 { dimension } => {
            format!("not classified: global dimension {dimension} exceeds 4\n")
        }
    };
    Ok(Outcome::new(code, text))
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Validate { file } => validate(&file, cli.json),
        Command::Roots { cartan } => roots(&cartan, cli.json),
        Command::Cy { file } => cy(&file, cli.json),
        Command::Isom { first, second } => isom(&first, &second, cli.bound, cli.json),
        Command::Classify { file } => classify(&file, cli.json),
        Command::Corpus { dir } => {
            let dir = dir.unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus"));
            corpus::run(&dir, cli.json)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome { code, text }) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE)
        }
    }
}
