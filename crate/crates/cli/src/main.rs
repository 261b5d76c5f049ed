//! `wt1`: classify weight-one newform records and generate dihedral ones.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use wt1::characters::enumerate_fundamental_discriminants;
use wt1::classifier::{classify, verify, Certificate, ClassifierConfig, Verdict};
use wt1::quadfields::{characters_of_group, ideals_of_norm, ray_class_group, theta_series, HeckeCharacter};
use wt1::store::{sturm_bound, validate_hecke, NewformRecord};

const EXIT_OK: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_FILE: u8 = 66;

#[derive(Parser)]
#[command(name = "wt1", version, about = "Projective image classification for weight-one newforms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct ClassifyOpts {
    /// Only use primes up to this bound (default: every prime in the record).
    #[arg(long)]
    prime_budget: Option<u64>,
    /// Treat suspicious bad-prime coefficients as errors.
    #[arg(long)]
    strict: bool,
}

impl ClassifyOpts {
    fn config(self) -> ClassifierConfig {
        ClassifierConfig { prime_budget: self.prime_budget, strict: self.strict }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify one record (`-` reads standard input) and print its certificate.
    Classify {
        file: PathBuf,
        #[command(flatten)]
        opts: ClassifyOpts,
        /// Write the certificate here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Classify every `.wt1` file in a directory, writing `<file>.cert` next to each.
    Batch {
        dir: PathBuf,
        #[command(flatten)]
        opts: ClassifyOpts,
        /// Directory for the certificates (default: alongside the inputs).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Replay a certificate against its record.
    Verify { record: PathBuf, certificate: PathBuf },
    /// Generate the theta series of a Hecke character of an imaginary quadratic field.
    #[command(allow_negative_numbers = true)]
    GenDihedral {
        disc: i64,
        conductor_norm: u64,
        /// 1-based index into the character list shown by --list.
        #[arg(long = "char", default_value_t = 1)]
        index: usize,
        /// Number of coefficients (default: max(100, Sturm bound)).
        #[arg(long)]
        terms: Option<usize>,
        /// List the available characters instead of generating.
        #[arg(long)]
        list: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the format and the Hecke relations of a record.
    Validate { file: PathBuf },
    /// Print the Sturm bound for weight one at level N.
    Sturm { level: u64 },
    /// Print the fundamental discriminants supported on the primes of N.
    Discs { level: u64 },
}

/// A failure, with the exit code it maps to.
struct Failure {
    code: u8,
    msg: String,
}

fn fail(code: u8, msg: impl Into<String>) -> Failure {
    Failure { code, msg: msg.into() }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| fail(EXIT_FILE, format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| fail(EXIT_FILE, format!("{}: {e}", path.display())))
}

fn read_record(path: &Path) -> Result<NewformRecord, Failure> {
    let text = read_input(path)?;
    NewformRecord::parse(&text).map_err(|e| fail(EXIT_ERROR, format!("{}: {e}", path.display())))
}

/// Write-then-rename so readers never see a partial file.
fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)
}

fn emit(output: Option<&Path>, contents: &str) -> Result<(), Failure> {
    match output {
        Some(p) => write_atomic(p, contents).map_err(|e| fail(EXIT_FILE, format!("{}: {e}", p.display()))),
        None => io::stdout().write_all(contents.as_bytes()).map_err(|e| fail(EXIT_FILE, format!("stdout: {e}"))),
    }
}

fn verdict_code(v: Verdict) -> u8 {
    if v == Verdict::Inconclusive {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    }
}

fn severity(code: u8) -> u8 {
    match code {
        EXIT_OK => 0,
        EXIT_INCONCLUSIVE => 1,
        _ => 2,
    }
}

fn cmd_classify(file: &Path, opts: ClassifyOpts, output: Option<&Path>) -> Result<u8, Failure> {
    let r = read_record(file)?;
    let cert = classify(&r, &opts.config()).map_err(|e| fail(EXIT_ERROR, e.to_string()))?;
    emit(output, &cert.to_text())?;
    Ok(verdict_code(cert.verdict))
}

struct Row {
    file: String,
    level: String,
    order: String,
    outcome: String,
    code: u8,
}

fn batch_one(path: &Path, out_dir: &Path, config: &ClassifierConfig) -> Row {
    let file = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let mut row = Row { file: file.clone(), level: "-".into(), order: "-".into(), outcome: String::new(), code: EXIT_OK };
    let result = (|| {
        let r = read_record(path)?;
        row.level = r.level.to_string();
        row.order = r.character.order().to_string();
        let cert = classify(&r, config).map_err(|e| fail(EXIT_ERROR, e.to_string()))?;
        let dest = out_dir.join(format!("{file}.cert"));
        write_atomic(&dest, &cert.to_text()).map_err(|e| fail(EXIT_FILE, format!("{}: {e}", dest.display())))?;
        Ok::<_, Failure>(cert.verdict)
    })();
    match result {
        Ok(v) => {
            row.outcome = v.to_string();
            row.code = verdict_code(v);
        }
        Err(f) => {
            row.outcome = format!("ERROR {}", f.msg);
            row.code = f.code;
        }
    }
    row
}

fn cmd_batch(dir: &Path, opts: ClassifyOpts, output: Option<&Path>) -> Result<u8, Failure> {
    let entries = fs::read_dir(dir).map_err(|e| fail(EXIT_FILE, format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> =
        entries.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "wt1")).collect();
    files.sort();
    let out_dir = output.unwrap_or(dir);
    if output.is_some() {
        fs::create_dir_all(out_dir).map_err(|e| fail(EXIT_FILE, format!("{}: {e}", out_dir.display())))?;
    }
    let config = opts.config();
    let rows: Vec<Row> = files.par_iter().map(|p| batch_one(p, out_dir, &config)).collect();

    let width = rows.iter().map(|r| r.file.len()).max().unwrap_or(0).max(4);
    let mut table = format!("{:<width$}  {:>6}  {:>5}  verdict\n", "file", "level", "order");
    for r in &rows {
        table.push_str(&format!("{:<width$}  {:>6}  {:>5}  {}\n", r.file, r.level, r.order, r.outcome));
    }
    print!("{table}");
    Ok(rows.iter().map(|r| r.code).max_by_key(|&c| severity(c)).unwrap_or(EXIT_OK))
}

fn cmd_verify(record: &Path, certificate: &Path) -> Result<u8, Failure> {
    let r = read_record(record)?;
    let text = read_input(certificate)?;
    let cert = Certificate::parse(&text).map_err(|e| fail(EXIT_ERROR, format!("{}: {e}", certificate.display())))?;
    let report = verify(&cert, &r);
    for d in &report.discrepancies {
        println!("discrepancy: {d}");
    }
    println!("checked {} claims, {} discrepancies", report.checked, report.discrepancies.len());
    Ok(if report.is_ok() { EXIT_OK } else { EXIT_ERROR })
}

fn dihedral_characters(disc: i64, norm: u64) -> Result<Vec<HeckeCharacter>, Failure> {
    let mut out = Vec::new();
    for f in ideals_of_norm(disc, norm) {
        let group = ray_class_group(disc, &f).map_err(|e| fail(EXIT_ERROR, e.to_string()))?;
        out.extend(characters_of_group(Arc::new(group)));
    }
    Ok(out)
}

fn cmd_gen_dihedral(disc: i64, norm: u64, index: usize, terms: Option<usize>, list: bool, output: Option<&Path>) -> Result<u8, Failure> {
    wt1::quadfields::class_group(disc).map_err(|e| fail(EXIT_ERROR, e.to_string()))?;
    if norm == 0 {
        return Err(fail(EXIT_ERROR, "conductor norm must be positive"));
    }
    let chars = dihedral_characters(disc, norm)?;
    if list {
        let mut s = String::new();
        for (i, psi) in chars.iter().enumerate() {
            let exps: Vec<String> = psi.exponents().iter().map(u64::to_string).collect();
            s.push_str(&format!(
                "{}  conductor {}  structure {:?}  order {}  exponents [{}]\n",
                i + 1,
                psi.group().conductor(),
                psi.group().structure(),
                psi.order(),
                exps.join(",")
            ));
        }
        emit(output, &s)?;
        return Ok(EXIT_OK);
    }
    let psi = index
        .checked_sub(1)
        .and_then(|i| chars.get(i))
        .ok_or_else(|| fail(EXIT_ERROR, format!("character index {index} out of range 1..={}", chars.len())))?;
    let level = disc.unsigned_abs() * norm;
    let m = terms.unwrap_or_else(|| (sturm_bound(level).bound as usize).max(100));
    let theta = theta_series(psi, m).map_err(|e| fail(EXIT_ERROR, e.to_string()))?;
    let source =
        format!("theta series of character {index} (order {}) of conductor {} in Q(sqrt({disc}))", psi.order(), psi.group().conductor());
    let r = NewformRecord::from_theta(&theta, &source).map_err(|e| fail(EXIT_ERROR, e.to_string()))?;
    emit(output, &r.serialize())?;
    Ok(EXIT_OK)
}

fn cmd_validate(file: &Path) -> Result<u8, Failure> {
    let r = read_record(file)?;
    let report = validate_hecke(&r);
    for v in &report.violations {
        println!("violation a_{}: {} expected {} found {}", v.n, v.relation, v.expected, v.found);
    }
    for p in &report.warnings {
        println!("warning: a_{p} at bad prime {p} is not 0 or a root of unity");
    }
    let bound = sturm_bound(r.level).bound as usize;
    if r.precision() < bound {
        println!("warning: {} coefficients, below the Sturm bound {bound}", r.precision());
    }
    if report.is_valid() {
        println!("ok level {} precision {}", r.level, r.precision());
        Ok(EXIT_OK)
    } else {
        println!("invalid: {} violation(s)", report.violations.len());
        Ok(EXIT_ERROR)
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Classify { file, opts, output } => cmd_classify(&file, opts, output.as_deref()),
        Command::Batch { dir, opts, output } => cmd_batch(&dir, opts, output.as_deref()),
        Command::Verify { record, certificate } => cmd_verify(&record, &certificate),
        Command::GenDihedral { disc, conductor_norm, index, terms, list, output } => {
            cmd_gen_dihedral(disc, conductor_norm, index, terms, list, output.as_deref())
        }
        Command::Validate { file } => cmd_validate(&file),
        Command::Sturm { level } => {
            if level == 0 {
                return Err(fail(EXIT_ERROR, "level must be positive"));
            }
            let s = sturm_bound(level);
            println!("index {} bound {}", s.index, s.bound);
            Ok(EXIT_OK)
        }
        Command::Discs { level } => {
            if level == 0 {
                return Err(fail(EXIT_ERROR, "level must be positive"));
            }
            let ds: Vec<String> = enumerate_fundamental_discriminants(level).iter().map(|d| d.value().to_string()).collect();
            println!("{}", ds.join(" "));
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("wt1: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
