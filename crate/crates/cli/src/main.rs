//! `apnkit`: build APN families, check them, verify the proof steps and
//! compare CCZ invariants.
//!
//! Exit codes: 0 success or verdict reached, 1 usage, 2 validation failure,
//! 3 resource cap, 4 internal consistency failure.

mod repro;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use apnkit::families::{build_family, build_unchecked, parse_subfield_elem, BuildError, FamilyParams};
use apnkit::formats::{to_json, FormatError, FunctionFile};
use apnkit::gf2n::{make_field, FieldError};
use apnkit::invariants::{self, InvariantError, Level, RankMethod, RankOptions, Verdict};
use apnkit::proofcheck::{self, ProofError, QMode};
use apnkit::vbf::{self, VbfError};
use apnkit::{FunctionSpec, Limits, DEFAULT_SEED};

#[derive(Parser, Debug)]
#[command(
    name = "apnkit",
    version,
    about = "Quadratic APN functions over GF(2^n): construction, proof checks, CCZ invariants"
)]
struct Cli {
    /// Worker threads (default: available parallelism; 1 forces sequential execution).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for sampled q-scans and EA transforms.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    /// JSON.
    Structured,
    Csv,
}

#[derive(clap::Args, Debug, Clone)]
struct RankArgs {
    /// Lift the n <= 9 cap on delta_rank (n = 12 needs this).
    #[arg(long)]
    big_rank: bool,
    /// Include the a = 0 point in the derivative set.
    #[arg(long)]
    include_zero_row: bool,
    #[arg(long, default_value = "auto", value_parser = parse_method)]
    rank_method: RankMethod,
    /// Largest n for gamma_rank.
    #[arg(long, default_value_t = 9)]
    gamma_max_n: u32,
}

impl RankArgs {
    fn limits(&self) -> Limits {
        let base = Limits::from_env();
        if self.big_rank {
            Limits { rank_max_n: apnkit::gf2n::MAX_DEGREE, ..base }
        } else {
            base
        }
    }

    fn options(&self) -> RankOptions {
        RankOptions { method: self.rank_method, include_zero_row: self.include_zero_row, gamma_max_n: self.gamma_max_n }
    }
}

fn parse_method(s: &str) -> Result<RankMethod, String> {
    s.parse()
}

fn parse_level(s: &str) -> Result<Level, String> {
    s.parse()
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the field model for GF(2^n).
    Field {
        #[arg(long)]
        n: u32,
    },
    /// Build a family member and write it as a function file.
    Family {
        #[arg(long)]
        family: u8,
        /// Extension degree; derived from k unless the family is 4.
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        s: Option<u32>,
        #[arg(long)]
        i: Option<i64>,
        #[arg(long)]
        m: Option<i64>,
        #[arg(long)]
        u: Option<String>,
        #[arg(long)]
        v: Option<String>,
        #[arg(long)]
        w: Option<String>,
        #[arg(long)]
        t: Option<String>,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        beta: Option<String>,
        #[arg(long, num_args = 1..)]
        gamma: Vec<String>,
        /// Skip the parameter conditions; the file is flagged as unchecked.
        #[arg(long)]
        unchecked: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Differential uniformity by histogram and, for quadratics, by kernels.
    Check { file: PathBuf },
    /// Run the proof-step suite on a family-7 (or 6) function file.
    Prove {
        file: PathBuf,
        /// Scan every q even when n > 9.
        #[arg(long)]
        exhaustive: bool,
        /// Number of seeded q when sampling.
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
    },
    /// Invariant report for one function.
    Invariants {
        file: PathBuf,
        #[arg(long, default_value = "all", value_parser = parse_level)]
        level: Level,
        #[command(flatten)]
        rank: RankArgs,
    },
    /// Compare the invariants of two functions.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value = "all", value_parser = parse_level)]
        level: Level,
        #[command(flatten)]
        rank: RankArgs,
    },
    /// Apply a seeded random EA transform.
    Ea {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// End-to-end reproduction scripts.
    Repro {
        #[arg(value_enum)]
        target: repro::Target,
        #[command(flatten)]
        rank: RankArgs,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Validation(String),
    Cap(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Cap(_) => 3,
            CliError::Internal(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Validation(m) | CliError::Cap(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Io { .. } => CliError::Usage(e.to_string()),
            FormatError::Function(v) => v.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<VbfError> for CliError {
    fn from(e: VbfError) -> Self {
        match e {
            VbfError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<BuildError> for CliError {
    fn from(e: BuildError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<InvariantError> for CliError {
    fn from(e: InvariantError) -> Self {
        match e {
            InvariantError::Function(v) => v.into(),
            other => CliError::Cap(other.to_string()),
        }
    }
}

impl From<ProofError> for CliError {
    fn from(e: ProofError) -> Self {
        match e {
            ProofError::Build(b) => b.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

pub type CliResult = Result<(), CliError>;

fn load(path: &Path) -> Result<(FunctionFile, FunctionSpec), CliError> {
    let file = FunctionFile::read(path)?;
    let f = file.to_function()?;
    Ok((file, f))
}

fn emit_file(file: &FunctionFile, out: &Option<PathBuf>) -> CliResult {
    match out {
        Some(p) => Ok(file.write(p)?),
        None => {
            println!("{}", to_json(file));
            Ok(())
        }
    }
}

fn cmd_field(cli: &Cli, n: u32) -> CliResult {
    let field = make_field(n).map_err(|e| CliError::Usage(e.to_string()))?;
    let poly: Vec<String> = (0..=n)
        .rev()
        .filter(|&i| field.modulus() >> i & 1 == 1)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "x".to_string(),
            i => format!("x^{i}"),
        })
        .collect();
    let factors: Vec<String> =
        field.factors().iter().map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") }).collect();
    match cli.format {
        Format::Structured => println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "n": n,
                "modulus": format!("{:#x}", field.modulus()),
                "polynomial": poly.join(" + "),
                "generator": "g",
                "generator_order": field.order(),
                "factors": field.factors(),
            }))
            .unwrap()
        ),
        Format::Csv => {
            println!("n,modulus,generator_order,factors");
            println!("{n},{:#x},{},{}", field.modulus(), field.order(), factors.join(" * "));
        }
        Format::Text => {
            println!("GF(2^{n})");
            println!("modulus: {:#x} = {}", field.modulus(), poly.join(" + "));
            println!("generator g = x, order {} = {}", field.order(), factors.join(" * "));
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn family_params(
    family: u8,
    n: Option<u32>,
    k: Option<u32>,
    s: Option<u32>,
    i: Option<i64>,
    m: Option<i64>,
    texts: [&Option<String>; 6],
    gamma: &[String],
) -> Result<FamilyParams, CliError> {
    let n = match (family, n, k) {
        (_, Some(n), _) => n,
        (1 | 5 | 6 | 7, None, Some(k)) => 3 * k,
        (2, None, Some(k)) => 4 * k,
        (3, None, Some(k)) => 2 * k,
        (4, None, _) => return Err(CliError::Usage("family 4 needs --n".into())),
        (1..=7, None, None) => return Err(CliError::Usage(format!("family {family} needs --k"))),
        _ => return Err(CliError::Usage(format!("unknown family {family} (expected 1..7)"))),
    };
    let field = make_field(n).map_err(|e| CliError::Usage(e.to_string()))?;
    let elem = |t: &Option<String>| -> Result<Option<apnkit::Elem>, CliError> {
        t.as_deref()
            .map(|t| match k {
                Some(k) if n % k == 0 => parse_subfield_elem(&field, k, t),
                _ => field.parse_elem(t),
            })
            .transpose()
            .map_err(|e| CliError::Usage(e.to_string()))
    };
    let [u, v, w, t, alpha, beta] = texts;
    Ok(FamilyParams {
        family,
        n,
        k,
        s,
        i,
        m,
        u: elem(u)?,
        v: elem(v)?,
        w: elem(w)?,
        t: elem(t)?,
        alpha: elem(alpha)?,
        beta: elem(beta)?,
        gamma: gamma.iter().map(|g| elem(&Some(g.clone())).map(|e| e.unwrap())).collect::<Result<_, _>>()?,
    })
}

fn cmd_check(cli: &Cli, file: &Path) -> CliResult {
    let (_, f) = load(file)?;
    let generic = vbf::differential_uniformity_with(&f, &Limits::from_env())?;
    let degree = vbf::algebraic_degree(&f);
    let quadratic = if degree <= 2 { Some(vbf::differential_uniformity_quadratic(&f)?) } else { None };
    let apn = generic == 2;
    match cli.format {
        Format::Structured => println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "function": f.describe(),
                "n": f.n(),
                "algebraic_degree": degree,
                "uniformity_histogram": generic,
                "uniformity_kernel": quadratic,
                "apn": apn,
            }))
            .unwrap()
        ),
        Format::Csv => {
            println!("n,algebraic_degree,uniformity_histogram,uniformity_kernel,apn");
            println!("{},{degree},{generic},{},{apn}", f.n(), quadratic.map_or(String::new(), |q| q.to_string()));
        }
        Format::Text => {
            println!("function: {}", f.describe());
            println!("algebraic degree: {degree}");
            println!("uniformity (histogram): {generic}");
            if let Some(q) = quadratic {
                println!("uniformity (kernel): {q}");
            }
            println!("APN: {} (uniformity {generic})", if apn { "yes" } else { "no" });
        }
    }
    if quadratic.is_some_and(|q| q != generic) {
        return Err(CliError::Internal(format!(
            "histogram uniformity {generic} disagrees with kernel uniformity {}",
            quadratic.unwrap()
        )));
    }
    Ok(())
}

fn cmd_prove(cli: &Cli, file: &Path, exhaustive: bool, samples: u64) -> CliResult {
    let (ff, _) = load(file)?;
    let params =
        ff.family_params()?.ok_or_else(|| CliError::Validation("function file carries no family parameters".into()))?;
    let mode = if exhaustive { QMode::Exhaustive } else { QMode::default_for(params.n, samples, cli.seed) };
    let report = proofcheck::run_suite(&params, mode, ff.unchecked)?;
    match cli.format {
        Format::Structured => println!("{}", to_json(&report)),
        Format::Csv => {
            println!("step,checked,failures,witness_q");
            for s in &report.steps {
                println!("{},{},{},{}", s.step.name(), s.checked, s.failures, s.witness_q.as_deref().unwrap_or(""));
            }
        }
        Format::Text => {
            println!("function: {}", report.function);
            let mode = match report.q_mode {
                QMode::Exhaustive => "exhaustive".to_string(),
                QMode::Sampled { count, seed } => format!("{count} sampled q, seed {seed:#x}"),
            };
            println!("n = {}, k = {}, s = {}, q-scan: {mode}", report.n, report.k, report.s);
            if report.unchecked {
                println!("WARNING: parameters were not validated");
                for v in &report.violations {
                    println!("  violation: {v}");
                }
            }
            for s in &report.steps {
                let status = if s.passed() { "PASS" } else { "FAIL" };
                match &s.witness_q {
                    Some(q) => {
                        println!("{status} {:<22} {}/{} failed, first q = {q}", s.step.name(), s.failures, s.checked)
                    }
                    None => println!("{status} {:<22} {} q checked", s.step.name(), s.checked),
                }
            }
            println!("overall: {}", if report.passed { "PASS" } else { "FAIL" });
        }
    }
    match (report.passed, report.unchecked) {
        (true, _) => Ok(()),
        (false, true) => Err(CliError::Validation("proof steps fail for the unchecked parameters".into())),
        (false, false) => Err(CliError::Internal("proof steps fail for validated parameters".into())),
    }
}

fn print_report(cli: &Cli, r: &invariants::InvariantReport) {
    match cli.format {
        Format::Structured => println!("{}", to_json(r)),
        Format::Csv => print!("{}", r.to_csv()),
        Format::Text => {
            println!("function: {} (n = {})", r.function, r.n);
            for (name, value) in r.invariants() {
                if let Some(v) = value {
                    println!("{name}: {v}");
                }
            }
            for note in &r.notes {
                println!("note: {note}");
            }
        }
    }
}

fn cmd_invariants(cli: &Cli, file: &Path, level: Level, rank: &RankArgs) -> CliResult {
    let (_, f) = load(file)?;
    let id = file.display().to_string();
    let r = invariants::invariant_report(&f, &id, level, &rank.limits(), &rank.options())?;
    print_report(cli, &r);
    Ok(())
}

fn cmd_compare(cli: &Cli, a: &Path, b: &Path, level: Level, rank: &RankArgs) -> CliResult {
    let (_, f) = load(a)?;
    let (_, g) = load(b)?;
    if f.n() != g.n() {
        return Err(CliError::Validation(VbfError::FieldMismatch(f.n(), g.n()).to_string()));
    }
    let (limits, opts) = (rank.limits(), rank.options());
    let ra = invariants::invariant_report(&f, &a.display().to_string(), level, &limits, &opts)?;
    let rb = invariants::invariant_report(&g, &b.display().to_string(), level, &limits, &opts)?;
    let verdict = invariants::compare_reports(&ra, &rb);
    if let Verdict::Indistinguishable { compared, .. } = &verdict {
        if compared.is_empty() {
            let notes: Vec<_> = ra.notes.iter().chain(&rb.notes).map(String::as_str).collect();
            return Err(CliError::Cap(format!("no invariant computed at level {level}: {}", notes.join("; "))));
        }
    }
    match cli.format {
        Format::Structured => {
            println!("{}", serde_json::to_string_pretty(&json!({ "verdict": verdict, "reports": [ra, rb] })).unwrap())
        }
        Format::Csv => {
            println!("verdict");
            println!("{verdict}");
        }
        Format::Text => {
            for note in ra.notes.iter().chain(&rb.notes) {
                println!("note: {note}");
            }
            println!("{verdict}");
        }
    }
    Ok(())
}

fn cmd_ea(cli: &Cli, file: &Path, out: &Option<PathBuf>) -> CliResult {
    let (_, f) = load(file)?;
    let g = invariants::ea_transform(&f, cli.seed);
    emit_file(&FunctionFile::from_function(&g, None, false), out)
}

fn run(cli: &Cli) -> CliResult {
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(CliError::Usage("--workers must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(w).build_global().map_err(|e| CliError::Internal(e.to_string()))?;
    }
    match &cli.command {
        Command::Field { n } => cmd_field(cli, *n),
        Command::Family { family, n, k, s, i, m, u, v, w, t, alpha, beta, gamma, unchecked, out } => {
            let p = family_params(*family, *n, *k, *s, *i, *m, [u, v, w, t, alpha, beta], gamma)?;
            let f = if *unchecked { build_unchecked(&p)? } else { build_family(&p)? };
            if out.is_some() && cli.format == Format::Text {
                println!("{}", f.describe());
            }
            emit_file(&FunctionFile::from_function(&f, Some(&p), *unchecked), out)
        }
        Command::Check { file } => cmd_check(cli, file),
        Command::Prove { file, exhaustive, samples } => cmd_prove(cli, file, *exhaustive, *samples),
        Command::Invariants { file, level, rank } => cmd_invariants(cli, file, *level, rank),
        Command::Compare { a, b, level, rank } => cmd_compare(cli, a, b, *level, rank),
        Command::Ea { file, out } => cmd_ea(cli, file, out),
        Command::Repro { target, rank } => {
            repro::run(*target, rank.limits(), rank.options(), cli.format == Format::Structured)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
