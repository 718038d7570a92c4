//! `mahlercf`: continued fractions of generalized Thue–Morse series and
//! p-adic certificates for their values.

mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::Format;

/// Largest depth-like bound accepted on the command line.
pub const DEPTH_CAP: usize = 2000;

#[derive(Debug, Parser)]
#[command(name = "mahlercf", version, about = "Exact continued fractions and witnesses for generalized Thue–Morse series")]
struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Omit the `generated_at` field from JSON output.
    #[arg(long, global = true)]
    no_timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Continued fraction of g_d with monic denominators and betas.
    Cf(CfArgs),
    /// Check one identity over a range.
    Verify(VerifyArgs),
    /// Search for a certificate that f_d(a) is not badly approximable.
    Witness(WitnessArgs),
    /// Rebuild the (p, t, residue) table for d = 2.
    Table(TableArgs),
    /// Certified value of f_d(a) or g_d(a) and its continued-fraction prefix.
    Eval(EvalArgs),
    /// Lift a witness root to p^m and locate the matching n.
    DemoHensel(HenselArgs),
}

#[derive(Debug, Args)]
pub struct CfArgs {
    /// Radix d >= 2.
    #[arg(long)]
    pub d: u32,
    /// Last convergent index.
    #[arg(long)]
    pub n: usize,
    /// Starting truncation floor (negative); refloored on failure.
    #[arg(long, allow_negative_numbers = true)]
    pub floor: Option<i64>,
    /// Deepest truncation (`-floor`) the retry loop may reach.
    #[arg(long, default_value_t = 1 << 16)]
    pub max_depth: i64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// funceq, lemma5, prop2, prop_sum3, prop_bk, theorem1 or bzz.
    #[arg(long)]
    pub identity: String,
    /// Radix; 3 for the d = 3 identities, 2 otherwise.
    #[arg(long)]
    pub d: Option<u32>,
    /// Range `a..b` (inclusive) over k.
    #[arg(long)]
    pub k: Option<String>,
    /// Range `a..b` (inclusive) over convergent indices.
    #[arg(long)]
    pub m: Option<String>,
    /// Shorthand for the range `0..n` (the depth for funceq).
    #[arg(long)]
    pub n: Option<i64>,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    /// Integer point a >= 2.
    #[arg(long, required_unless_present = "replay")]
    pub a: Option<u64>,
    /// Radix, 2 or 3.
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    /// Largest prime scanned.
    #[arg(long, default_value_t = 40)]
    pub p_bound: u64,
    /// Largest n0 tried per prime.
    #[arg(long, default_value_t = 16)]
    pub n0_bound: u64,
    /// Largest convergent index tried.
    #[arg(long, default_value_t = 200)]
    pub t_bound: usize,
    /// Comma-separated primes to scan instead of all primes up to the bound.
    #[arg(long, value_delimiter = ',')]
    pub p_list: Option<Vec<u64>>,
    /// Re-validate a witness JSON file instead of searching.
    #[arg(long, conflicts_with = "a")]
    pub replay: Option<std::path::PathBuf>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Radix; only 2 is tabulated.
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    /// Comma-separated odd primes.
    #[arg(long, value_delimiter = ',', default_value = "3,5,7,11,13,17,19,23,29,31,37")]
    pub p_list: Vec<u64>,
    /// Largest convergent index tried.
    #[arg(long, default_value_t = 200)]
    pub t_bound: usize,
    /// Only the first row per prime.
    #[arg(long)]
    pub first_only: bool,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Integer point a >= 2.
    #[arg(long)]
    pub a: u64,
    /// Radix d >= 2.
    #[arg(long)]
    pub d: u32,
    /// Error bound such as `1e-40`, `0.001` or `1/1000`.
    #[arg(long, default_value = "1e-30")]
    pub eps: String,
    /// `f` or `g`.
    #[arg(long, default_value = "f")]
    pub which: String,
    /// Largest number of real partial quotients to print.
    #[arg(long, default_value_t = 40)]
    pub cf_terms: usize,
}

#[derive(Debug, Args)]
pub struct HenselArgs {
    #[arg(long)]
    pub a: u64,
    #[arg(long)]
    pub d: u32,
    /// Witness prime.
    #[arg(long)]
    pub p: u64,
    /// Convergent index of the witness.
    #[arg(long)]
    pub t: usize,
    #[arg(long)]
    pub n0: u64,
    /// Target exponent: find n with p^m | q_t(a^(d^n)).
    #[arg(long, default_value_t = 3)]
    pub m: u32,
    /// Steps past n0 to try; defaults to 4 p^(m-1).
    #[arg(long)]
    pub cap: Option<u64>,
}

fn configure_threads() {
    let Ok(v) = std::env::var("MAHLERCF_THREADS") else { return };
    match v.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                eprintln!("warning: could not set thread count: {e}");
            }
        }
        _ => eprintln!("warning: ignoring MAHLERCF_THREADS={v:?}"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { commands::EXIT_USAGE } else { 0 });
        }
    };
    configure_threads();
    let out = output::Output::new(cli.no_timestamp);
    let code = match cli.command {
        Command::Cf(a) => commands::cf(&a, cli.format.unwrap_or(Format::Json), &out),
        Command::Verify(a) => commands::verify(&a, cli.format.unwrap_or(Format::Json), &out),
        Command::Witness(a) => commands::witness(&a, cli.format.unwrap_or(Format::Json), &out),
        Command::Table(a) => commands::table(&a, cli.format.unwrap_or(Format::Csv), &out),
        Command::Eval(a) => commands::eval(&a, cli.format.unwrap_or(Format::Json), &out),
        Command::DemoHensel(a) => commands::demo_hensel(&a, cli.format.unwrap_or(Format::Json), &out),
    };
    ExitCode::from(code)
}
