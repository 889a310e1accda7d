mod commands;
mod config;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exit status for a failed cross-check.
pub const EXIT_MISMATCH: u8 = 2;
/// Exit status for a value that should be an integer but is not.
pub const EXIT_NONINTEGRAL: u8 = 3;
pub const EXIT_USAGE: u8 = 1;

#[derive(Parser, Debug)]
#[command(name = "cdiff", version, about = "c-differential tables over GF(p^n)", args_override_self = true)]
pub struct Cli {
    /// File of key=value lines applied before the command-line flags.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<String>,

    /// Worker threads; defaults to all cores.
    #[arg(long, global = true, env = "CDIFF_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute a c-differential table or per-c uniformities.
    Ddt(DdtArgs),
    /// Sweep beta over the perturbed Gold families on GF(2^n), n = 3..6.
    Tables(TablesArgs),
    /// Run the cross-checking suites.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct DdtArgs {
    /// Field as p^n, e.g. 2^4.
    #[arg(long)]
    pub field: String,
    /// Modulus coefficients c0,c1,..,cn (lowest degree first, monic).
    #[arg(long)]
    pub modulus: Option<String>,
    /// Use G(x) = x^(p^k+1) + P(x) with this k.
    #[arg(long, value_name = "K", conflicts_with = "function")]
    pub gold: Option<u32>,
    /// Linearized perturbation P: zero, identity, mono:i, bin:i,j or a0,..,a(n-1).
    #[arg(long, default_value = "zero", requires = "gold")]
    pub perturb: String,
    /// Function: identity, power:E or table:PATH.
    #[arg(long = "fn", value_name = "SPEC")]
    pub function: Option<String>,
    /// Multiplier: an element, a comma list, all (every c != 1) or nonzero (c not in {0, 1}).
    #[arg(long, default_value = "all")]
    pub c: String,
    #[arg(long, value_enum, default_value_t = Method::Brute)]
    pub method: Method,
    /// Tolerance for the integer rounding of character sums.
    #[arg(long, default_value_t = cdiff::charsum::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Omit the a = 0 row when c = 1.
    #[arg(long)]
    pub admissible_only: bool,
}

#[derive(Args, Debug)]
pub struct TablesArgs {
    /// Extension degrees to sweep.
    #[arg(long, value_delimiter = ',', default_values_t = [3u32, 4, 5, 6])]
    pub n: Vec<u32>,
    /// Compare against the reference grids and list mismatching cells.
    #[arg(long)]
    pub diff: bool,
    /// Exclude c = 0 from the maximum.
    #[arg(long)]
    pub nonzero_c: bool,
    #[arg(long, value_enum, default_value_t = TableFormat::Text)]
    pub format: TableFormat,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// all, orthogonality, weil, entries, bluher, bounds, properties or discrepancies.
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Restrict to one field, given as p^n.
    #[arg(long)]
    pub field: Option<String>,
    /// Restrict to these k.
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<u32>>,
    /// Replace a closed-form constant by a known-bad alternative.
    #[arg(long, value_name = "FAULT")]
    pub inject_fault: Option<String>,
    /// Use the full sizes instead of the quick scope.
    #[arg(long)]
    pub full: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = cdiff::charsum::DEFAULT_TOL)]
    pub tol: f64,
    /// Print the JSON report instead of one line per suite.
    #[arg(long)]
    pub json: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Brute,
    Char,
    Closed,
    Verify,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Md,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Text,
    Md,
    Csv,
    Json,
}

fn main() -> ExitCode {
    let raw: Vec<String> = std::env::args().collect();
    let args = match config::expand(raw) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let mut out = std::io::stdout().lock();
    let result = match &cli.command {
        Command::Ddt(a) => commands::ddt(a, &mut out),
        Command::Tables(a) => commands::tables(a, &mut out),
        Command::Verify(a) => commands::verify(a, &mut out),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = match e.downcast_ref::<cdiff::Error>() {
                Some(cdiff::Error::NonIntegral { .. }) => EXIT_NONINTEGRAL,
                _ => EXIT_USAGE,
            };
            ExitCode::from(code)
        }
    }
}
