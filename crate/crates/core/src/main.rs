use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use nslab::gauss::kloosterman_gauss_sum_exact;
use nslab::kloosterman::sheaf_sum_twisted;
use nslab::modforms::{a_p, b_p, f1_coefficients};
use nslab::padic_hypergeom::{g1212_thm2, g44_thm1};
use nslab::residue::{ContextOptions, DEFAULT_GAMMA_BUDGET};
use nslab::verify::{exit_code, max_precision, sweep, write_report, CheckKind, ReportFormat, SweepConfig};
use nslab::{Error, PrimeContext};

#[derive(Parser)]
#[command(name = "nslab", version, about = "Prime-by-prime checks of p-adic hypergeometric identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckArg {
    Master,
    Thm1,
    Thm2,
    Thm3,
    Thm4,
    Prop,
    Intro,
    Dgp,
    Lemmas,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalArg {
    G44,
    G1212,
    Tsheaf,
    Ap,
    Bsum,
}

#[derive(Subcommand)]
enum Command {
    /// Run checks over a range of primes and write a report.
    Verify {
        #[arg(long, value_enum, num_args = 1.., value_delimiter = ',', required = true)]
        check: Vec<CheckArg>,
        #[arg(long)]
        pmin: u64,
        #[arg(long)]
        pmax: u64,
        /// Precision of the Gamma-route checks.
        #[arg(long, default_value_t = 2)]
        precision: u32,
        /// Worker threads; 0 uses all cores.
        #[arg(long, default_value_t = 0)]
        threads: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        /// Memory allowed for one Gamma table, in bytes.
        #[arg(long)]
        gamma_budget: Option<u64>,
        /// Record per-check wall-clock times.
        #[arg(long)]
        timings: bool,
    },
    /// Print a single value at one prime.
    Eval {
        #[arg(value_enum)]
        what: EvalArg,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        precision: Option<u32>,
    },
    /// Print the coefficients a(1..=M) of the level-8 newform.
    Coeffs {
        #[arg(long)]
        upto: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotPrime(_)
            | Error::PrecisionOverflow { .. }
            | Error::TableBudgetExceeded { .. }
            | Error::BadArgument(_)
            | Error::WrongResidueClass { .. }
            | Error::CharacterUnavailable(..) => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn kinds(args: &[CheckArg]) -> Vec<CheckKind> {
    let mut out: Vec<CheckKind> = Vec::new();
    for a in args {
        let add: Vec<CheckKind> = match a {
            CheckArg::All => CheckKind::ALL.to_vec(),
            CheckArg::Master => vec![CheckKind::Master],
            CheckArg::Thm1 => vec![CheckKind::Thm1],
            CheckArg::Thm2 => vec![CheckKind::Thm2],
            CheckArg::Thm3 => vec![CheckKind::Thm3],
            CheckArg::Thm4 => vec![CheckKind::Thm4],
            CheckArg::Prop => vec![CheckKind::Prop],
            CheckArg::Intro => vec![CheckKind::Intro],
            CheckArg::Dgp => vec![CheckKind::Dgp],
            CheckArg::Lemmas => vec![CheckKind::Lemmas],
        };
        for k in add {
            if !out.contains(&k) {
                out.push(k);
            }
        }
    }
    out.sort();
    out
}

fn eval(what: EvalArg, p: u64, precision: Option<u32>) -> Result<String, Failure> {
    Ok(match what {
        EvalArg::G44 | EvalArg::G1212 => {
            let n = precision.unwrap_or(2);
            let ctx = PrimeContext::with_options(p, n, ContextOptions { with_gamma: true, ..Default::default() })?;
            let v = if matches!(what, EvalArg::G44) { g44_thm1(&ctx)? } else { g1212_thm2(&ctx)? };
            ctx.scaled_display(v)
        }
        EvalArg::Tsheaf => sheaf_sum_twisted(&PrimeContext::new(p, 1)?).to_string(),
        EvalArg::Ap => {
            PrimeContext::new(p, 1)?;
            let s = f1_coefficients(p as usize);
            format!("a={} b={}", a_p(&s, p)?, b_p(&s, p)?)
        }
        EvalArg::Bsum => {
            let n = match precision {
                Some(n) => n,
                None => max_precision(p),
            };
            kloosterman_gauss_sum_exact(&PrimeContext::new(p, n)?)?.to_string()
        }
    })
}

fn run(cli: Cli) -> Result<i32, Failure> {
    match cli.command {
        Command::Verify { check, pmin, pmax, precision, threads, out, format, gamma_budget, timings } => {
            let mut cfg = SweepConfig::new(pmin, pmax, kinds(&check));
            cfg.precision = precision;
            cfg.threads = threads;
            cfg.timings = timings;
            // Table entries are stored in at most four bytes each for the budgets in use.
            cfg.gamma_budget = gamma_budget.map(|b| b / 4).unwrap_or(DEFAULT_GAMMA_BUDGET);
            let rows = sweep(&cfg)?;
            let format = match format {
                FormatArg::Json => ReportFormat::Json,
                FormatArg::Csv => ReportFormat::Csv,
            };
            write_report(&rows, format, output(&out)?)?;
            let failed = rows.iter().filter(|r| !r.pass).count();
            eprintln!("{} checks, {} failed", rows.len(), failed);
            Ok(exit_code(&rows))
        }
        Command::Eval { what, p, precision } => {
            println!("{}", eval(what, p, precision)?);
            Ok(0)
        }
        Command::Coeffs { upto, out } => {
            let s = f1_coefficients(upto);
            let mut w = output(&out)?;
            for n in 1..=upto {
                writeln!(w, "{n} {}", s.coeff(n)?).map_err(|e| Failure::Runtime(e.to_string()))?;
            }
            w.flush().map_err(|e| Failure::Runtime(e.to_string()))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(args: &[&str]) -> i32 {
        let mut full = vec!["nslab"];
        full.extend_from_slice(args);
        match Cli::try_parse_from(full) {
            Ok(cli) => match run(cli) {
                Ok(c) => c,
                Err(Failure::Usage(_)) => 2,
                Err(Failure::Runtime(_)) => 1,
            },
            Err(_) => 2,
        }
    }

    #[test]
    fn exit_codes() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("r.json");
        let out = out.to_str().unwrap();
        assert_eq!(code(&["verify", "--check", "dgp", "--pmin", "5", "--pmax", "40", "--out", out]), 0);
        let rows: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
        assert_eq!(rows.as_array().unwrap().len(), 10);
        assert_eq!(code(&["verify", "--check", "dgp", "--pmin", "4", "--pmax", "10", "--out", out]), 2);
        assert_eq!(code(&["verify", "--check", "nope", "--pmin", "5", "--pmax", "10"]), 2);
        assert_eq!(code(&["verify", "--check", "lemmas", "--pmin", "5", "--pmax", "7", "--gamma-budget", "8", "--out", out]), 2);
        assert_eq!(code(&["eval", "ap", "--p", "9"]), 2);
    }

    #[test]
    fn failing_identity_exits_one() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("r.csv");
        let out = out.to_str().unwrap();
        assert_eq!(code(&["verify", "--check", "master", "--pmin", "7", "--pmax", "7", "--format", "csv", "--out", out]), 1);
        let text = std::fs::read_to_string(out).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.lines().nth(1).unwrap().starts_with("7,7,master,"));
    }

    #[test]
    fn one_row_for_thirteen() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("r.json");
        let out_s = out.to_str().unwrap();
        code(&["verify", "--check", "thm2", "--pmin", "13", "--pmax", "13", "--out", out_s]);
        let rows: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert!(rows.as_array().unwrap().is_empty());
    }

    #[test]
    fn eval_values() {
        assert_eq!(eval(EvalArg::Tsheaf, 7, None).ok().unwrap(), "-168");
        assert_eq!(eval(EvalArg::Ap, 7, None).ok().unwrap(), "a=24 b=-24");
        assert_eq!(eval(EvalArg::Bsum, 7, None).ok().unwrap(), "-714");
        assert!(eval(EvalArg::G44, 7, Some(2)).is_ok());
        assert!(eval(EvalArg::G44, 11, Some(2)).is_ok());
    }

    #[test]
    fn coefficients_file() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("c.txt");
        assert_eq!(code(&["coeffs", "--upto", "9", "--out", out.to_str().unwrap()]), 0);
        let text = std::fs::read_to_string(out).unwrap();
        assert_eq!(text.lines().nth(6).unwrap(), "7 24");
        assert_eq!(text.lines().count(), 9);
    }

    #[test]
    fn check_list_expansion() {
        assert_eq!(kinds(&[CheckArg::All]).len(), 9);
        assert_eq!(kinds(&[CheckArg::Thm2, CheckArg::Master, CheckArg::Thm2]), vec![CheckKind::Master, CheckKind::Thm2]);
    }
}
