//! Command-line front end. [`run`] parses arguments and writes the selected
//! report to a caller-supplied sink, returning the process exit code.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::arith::PrimeSieve;
use crate::denom;
use crate::error::{Error, Result};
use crate::scanner::{self, ScanConfig, ScanRun, SetKind, SetReport, DEFAULT_CHUNK_SIZE, DEFAULT_SET_LIMIT};
use crate::verify::{self, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeqName {
    #[value(name = "dn")]
    Dn,
    #[value(name = "dd")]
    Dd,
    #[value(name = "db")]
    Db,
    #[value(name = "ds")]
    Ds,
    #[value(name = "dd_plus")]
    DdPlus,
    #[value(name = "dd_minus")]
    DdMinus,
    #[value(name = "dd_coprime")]
    DdCoprime,
    #[value(name = "dd_shared")]
    DdShared,
    #[value(name = "dd_complement")]
    DdComplement,
    #[value(name = "omega_plus")]
    OmegaPlus,
    #[value(name = "db_k")]
    DbK,
}

impl SeqName {
    fn as_str(self) -> &'static str {
        match self {
            SeqName::Dn => "dn",
            SeqName::Dd => "dd",
            SeqName::Db => "db",
            SeqName::Ds => "ds",
            SeqName::DdPlus => "dd_plus",
            SeqName::DdMinus => "dd_minus",
            SeqName::DdCoprime => "dd_coprime",
            SeqName::DdShared => "dd_shared",
            SeqName::DdComplement => "dd_complement",
            SeqName::OmegaPlus => "omega_plus",
            SeqName::DbK => "db_k",
        }
    }

    fn min_index(self) -> u64 {
        match self {
            SeqName::Db | SeqName::Ds => 0,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "berndenom", version, about = "Denominators of Bernoulli polynomials and their derivatives")]
pub struct Cli {
    /// Output encoding.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// All denominator quantities for one index.
    Profile {
        #[arg(value_parser = parse_count)]
        n: u64,
    },
    /// One `n,value` row per index in [lo, hi].
    Seq {
        #[arg(value_enum)]
        name: SeqName,
        #[arg(value_parser = parse_count)]
        lo: u64,
        #[arg(value_parser = parse_count)]
        hi: u64,
        /// Derivative order, required for db_k.
        #[arg(long)]
        k: Option<u64>,
    },
    /// Indices n <= limit with omega(D+(n)) = 0, plus summary statistics.
    Scan {
        #[arg(long, value_parser = parse_count)]
        limit: u64,
        #[arg(long, env = "BERNDENOM_THREADS")]
        threads: Option<usize>,
        #[arg(long, value_parser = parse_count, default_value_t = DEFAULT_CHUNK_SIZE)]
        chunk: u64,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, hide = true)]
        stop_after_chunks: Option<usize>,
    },
    /// Indices whose k-th derivative of B_n(x) has integer coefficients.
    Sets {
        #[arg(long)]
        k: u64,
        #[arg(long, value_parser = parse_count, default_value_t = DEFAULT_SET_LIMIT)]
        limit: u64,
    },
    /// Indices with D(n) = rad(n+1).
    Radset {
        #[arg(long, value_parser = parse_count, default_value_t = DEFAULT_SET_LIMIT)]
        limit: u64,
    },
    /// Run the invariant suites; exits 1 if any family fails.
    Verify {
        #[arg(long, value_parser = parse_count, default_value_t = 10_000)]
        limit: u64,
        #[arg(long, value_parser = parse_count, default_value_t = 300)]
        oracle_limit: u64,
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
}

/// Accepts `1000000`, `1_000_000`, `10^6` and `1e6`.
fn parse_count(s: &str) -> std::result::Result<u64, String> {
    let t = s.replace('_', "");
    let pow = |base: &str, exp: &str| -> Option<u64> {
        let b: u64 = base.parse().ok()?;
        let e: u32 = exp.parse().ok()?;
        b.checked_pow(e)
    };
    let parsed = if let Some((b, e)) = t.split_once('^') {
        pow(b, e)
    } else if let Some((m, e)) = t.split_once(['e', 'E']) {
        let m: u64 = m.parse().ok().unwrap_or(0);
        pow("10", e).and_then(|p| p.checked_mul(m)).filter(|_| m > 0)
    } else {
        t.parse().ok()
    };
    parsed.ok_or_else(|| format!("invalid count `{s}`"))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            if e.use_stderr() {
                let _ = write!(std::io::stderr(), "{e}");
            } else {
                let _ = write!(out, "{e}");
            }
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Profile { n } => cmd_profile(*n, cli.format, out),
        Command::Seq { name, lo, hi, k } => cmd_seq(*name, *lo, *hi, *k, cli.format, out),
        Command::Scan {
            limit,
            threads,
            chunk,
            checkpoint,
            stop_after_chunks,
        } => {
            let config = ScanConfig {
                limit: *limit,
                chunk_size: *chunk,
                threads: *threads,
                checkpoint: checkpoint.clone(),
                stop_after_chunks: *stop_after_chunks,
            };
            cmd_scan(&config, cli.format, out)
        }
        Command::Sets { k, limit } => cmd_sets(*k, *limit, cli.format, out),
        Command::Radset { limit } => cmd_radset(*limit, cli.format, out),
        Command::Verify {
            limit,
            oracle_limit,
            inject_fault,
        } => {
            let config = VerifyConfig {
                limit: *limit,
                oracle_limit: *oracle_limit,
                inject_fault: inject_fault.clone(),
            };
            cmd_verify(&config, cli.format, out)
        }
    }
}

fn write_json(out: &mut dyn Write, value: &Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

pub fn cmd_profile(n: u64, format: Format, out: &mut dyn Write) -> Result<i32> {
    if n == 0 {
        return Err(Error::InvalidArgument("profile requires n >= 1".into()));
    }
    let sieve = PrimeSieve::for_index(n)?;
    let p = denom::profile(n, &sieve);
    let fields: Vec<(&str, String)> = vec![
        ("n", p.n.to_string()),
        ("dd", p.dd.to_string()),
        ("dd_minus", p.dd_minus.to_string()),
        ("dd_plus", p.dd_plus.to_string()),
        ("dd_shared", p.dd_shared.to_string()),
        ("dd_coprime", p.dd_coprime.to_string()),
        ("dd_complement", p.dd_complement.to_string()),
        ("dn", p.dn.to_string()),
        ("db", p.db.to_string()),
        ("ds", p.ds.to_string()),
        ("omega_plus", p.omega_plus.to_string()),
        ("rad_n", p.rad_n.to_string()),
        ("rad_n1", p.rad_n1.to_string()),
        ("in_rad_set", p.in_rad_set().to_string()),
    ];
    match format {
        Format::Csv => {
            let names: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            let values: Vec<&str> = fields.iter().map(|(_, v)| v.as_str()).collect();
            writeln!(out, "{}", names.join(","))?;
            writeln!(out, "{}", values.join(","))?;
        }
        Format::Json => {
            let mut map = serde_json::Map::new();
            for (k, v) in fields {
                let value = match k {
                    "n" => json!(p.n),
                    "omega_plus" => json!(p.omega_plus),
                    "in_rad_set" => json!(p.in_rad_set()),
                    _ => Value::String(v),
                };
                map.insert(k.to_string(), value);
            }
            write_json(out, &Value::Object(map))?;
        }
    }
    Ok(EXIT_OK)
}

/// Value of the named sequence at `n`, as a decimal string.
pub fn sequence_value(name: SeqName, n: u64, k: Option<u64>, sieve: &PrimeSieve) -> String {
    match name {
        SeqName::Dn => denom::dn(n).to_string(),
        SeqName::Dd => denom::dd(n, sieve).to_string(),
        SeqName::Db => denom::db(n, sieve).to_string(),
        SeqName::Ds => denom::ds(n, sieve).to_string(),
        SeqName::DdPlus => denom::dd_split_sqrt(n, sieve).1.to_string(),
        SeqName::DdMinus => denom::dd_split_sqrt(n, sieve).0.to_string(),
        SeqName::DdCoprime => denom::dd_coprime(n, sieve).to_string(),
        SeqName::DdShared => denom::dd_split_divisibility(n, sieve).shared.to_string(),
        SeqName::DdComplement => denom::dd_split_divisibility(n, sieve).complement.to_string(),
        SeqName::OmegaPlus => denom::omega_dd_plus(n, sieve).to_string(),
        SeqName::DbK => denom::db_k(n, k.expect("k checked by caller"), sieve).to_string(),
    }
}

pub fn cmd_seq(name: SeqName, lo: u64, hi: u64, k: Option<u64>, format: Format, out: &mut dyn Write) -> Result<i32> {
    if lo > hi {
        return Err(Error::InvalidRange { lo, hi });
    }
    if lo < name.min_index() {
        return Err(Error::InvalidArgument(format!(
            "{} is defined for n >= {}",
            name.as_str(),
            name.min_index()
        )));
    }
    match (name, k) {
        (SeqName::DbK, None) => return Err(Error::InvalidArgument("db_k requires --k".into())),
        (SeqName::DbK, Some(0)) => return Err(Error::InvalidArgument("--k must be positive".into())),
        (SeqName::DbK, Some(_)) => {}
        (_, Some(_)) => {
            return Err(Error::InvalidArgument(format!("--k only applies to db_k, not {}", name.as_str())))
        }
        _ => {}
    }
    let sieve = PrimeSieve::for_index(hi)?;
    match format {
        Format::Csv => {
            for n in lo..=hi {
                writeln!(out, "{n},{}", sequence_value(name, n, k, &sieve))?;
            }
        }
        Format::Json => {
            let values: Vec<Value> = (lo..=hi)
                .map(|n| json!({ "n": n, "value": sequence_value(name, n, k, &sieve) }))
                .collect();
            write_json(
                out,
                &json!({ "name": name.as_str(), "k": k, "lo": lo, "hi": hi, "values": values }),
            )?;
        }
    }
    Ok(EXIT_OK)
}

pub fn cmd_scan(config: &ScanConfig, format: Format, out: &mut dyn Write) -> Result<i32> {
    let report = match scanner::run_scan(config)? {
        ScanRun::Complete(report) => report,
        ScanRun::Interrupted { completed, total } => {
            eprintln!("scan stopped after {completed}/{total} chunks; rerun with the same --checkpoint to resume");
            return Ok(EXIT_OK);
        }
    };
    let exceptional: Vec<String> = report.exceptional.iter().map(u64::to_string).collect();
    let max_exceptional = report.exceptional.last().map(u64::to_string).unwrap_or_default();
    let float = |x: f64| format!("{x:.9}");
    match format {
        Format::Csv => {
            writeln!(
                out,
                "limit,exceptional_count,max_exceptional,exceptional,omega_sum,omega_max,omega_max_n,kappa_mean,kappa_min,kappa_max,fingerprint"
            )?;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                report.limit,
                report.exceptional.len(),
                max_exceptional,
                exceptional.join(" "),
                report.omega_sum,
                report.omega_max,
                report.omega_max_n,
                float(report.kappa_mean),
                float(report.kappa_min),
                float(report.kappa_max),
                report.fingerprint
            )?;
        }
        Format::Json => {
            let num = |x: f64| -> Value { float(x).parse::<f64>().map(Value::from).unwrap_or(Value::Null) };
            write_json(
                out,
                &json!({
                    "limit": report.limit,
                    "exceptional_count": report.exceptional.len(),
                    "max_exceptional": report.exceptional.last(),
                    "exceptional": report.exceptional,
                    "omega_sum": report.omega_sum.to_string(),
                    "omega_max": report.omega_max,
                    "omega_max_n": report.omega_max_n,
                    "kappa_mean": num(report.kappa_mean),
                    "kappa_min": num(report.kappa_min),
                    "kappa_max": num(report.kappa_max),
                    "fingerprint": report.fingerprint,
                }),
            )?;
        }
    }
    Ok(EXIT_OK)
}

fn write_set(report: &SetReport, format: Format, out: &mut dyn Write) -> Result<()> {
    let flags = (report.kind == SetKind::Derivative(1)).then(|| scanner::successor_primality(report));
    match format {
        Format::Csv => {
            match &flags {
                Some(flags) => {
                    writeln!(out, "n,n_plus_1_prime")?;
                    for (n, f) in report.members.iter().zip(flags) {
                        writeln!(out, "{n},{f}")?;
                    }
                }
                None => {
                    writeln!(out, "n")?;
                    for n in &report.members {
                        writeln!(out, "{n}")?;
                    }
                }
            }
        }
        Format::Json => {
            let mut v = json!({
                "set": match report.kind { SetKind::Derivative(_) => "derivative", SetKind::RadicalKernel => "radical" },
                "k": report.k(),
                "limit": report.limit,
                "members": report.members,
            });
            if let Some(flags) = flags {
                v["n_plus_1_prime"] = json!(flags);
            }
            write_json(out, &v)?;
        }
    }
    Ok(())
}

pub fn cmd_sets(k: u64, limit: u64, format: Format, out: &mut dyn Write) -> Result<i32> {
    if k == 0 || limit == 0 {
        return Err(Error::InvalidArgument("--k and --limit must be positive".into()));
    }
    let sieve = PrimeSieve::for_index(limit)?;
    write_set(&scanner::find_sets(k, limit, &sieve)?, format, out)?;
    Ok(EXIT_OK)
}

pub fn cmd_radset(limit: u64, format: Format, out: &mut dyn Write) -> Result<i32> {
    if limit == 0 {
        return Err(Error::InvalidArgument("--limit must be positive".into()));
    }
    let sieve = PrimeSieve::for_index(limit)?;
    write_set(&scanner::find_rad_set(limit, &sieve)?, format, out)?;
    Ok(EXIT_OK)
}

pub fn cmd_verify(config: &VerifyConfig, format: Format, out: &mut dyn Write) -> Result<i32> {
    let results = verify::run(config)?;
    let passed = results.iter().all(|r| r.passed);
    match format {
        Format::Csv => {
            writeln!(out, "family,status,checked,witness,detail")?;
            for r in &results {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.family,
                    if r.passed { "pass" } else { "fail" },
                    r.checked,
                    r.witness.map(|w| w.to_string()).unwrap_or_default(),
                    r.detail.as_deref().unwrap_or("").replace(',', ";")
                )?;
            }
        }
        Format::Json => {
            write_json(
                out,
                &json!({
                    "limit": config.limit,
                    "oracle_limit": config.oracle_limit,
                    "passed": passed,
                    "families": results,
                }),
            )?;
        }
    }
    Ok(if passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
}
