use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mchabauty::data::fetch::{default_cache_dir, DATA_DIR_ENV, DEFAULT_BASE_URL};
use mchabauty::data::TableSource;
use mchabauty::fibre::OutputFormat;
use mchabauty::number::PrimeSet;
use mchabauty::{Error, ErrorClass};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "mchabauty", version, about = "S-integral points on elliptic moduli problems from curve tables")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Cache directory for downloaded tables
    #[arg(long, global = true, env = DATA_DIR_ENV)]
    data_dir: Option<PathBuf>,
    /// Base URL of the allcurves files
    #[arg(long, global = true, default_value = DEFAULT_BASE_URL)]
    url: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Print full solution lists, not just counts
    #[arg(long, global = true)]
    list: bool,
    /// Never touch the network
    #[arg(long, global = true)]
    offline: bool,
    /// Run even when the available tables stop short of N(S); results are then
    /// lower bounds over the tables at hand
    #[arg(long, global = true)]
    allow_partial: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Format {
    Text,
    Json,
    Csv,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => OutputFormat::Text,
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Download and verify the tables for a conductor range
    Fetch {
        /// Conductor range LO..HI (inclusive)
        #[arg(long, value_parser = parse_range)]
        range: (u64, u64),
    },
    /// Curves with good reduction outside S
    Curves {
        #[arg(long, value_parser = parse_primes)]
        primes: PrimeSet,
    },
    /// Solutions of the S-unit equation via Legendre fibres
    Sunit {
        #[arg(long, value_parser = parse_primes)]
        primes: PrimeSet,
    },
    /// Points of Y1(N) over Z[1/S]
    Y1 {
        #[arg(long)]
        level: u32,
        #[arg(long, value_parser = parse_primes)]
        primes: PrimeSet,
    },
    /// Run a registered fibre solver by name
    Solve {
        /// Solver name; see --problems
        #[arg(long, required_unless_present = "problems")]
        problem: Option<String>,
        #[arg(long, value_parser = parse_primes, required_unless_present = "problems")]
        primes: Option<PrimeSet>,
        #[arg(long)]
        level: Option<u32>,
        /// List the registered solvers and exit
        #[arg(long)]
        problems: bool,
    },
    /// Upper bound (2/3)[SL2(Z):Gamma1(N)] N(S) prod (1 + 1/p)
    Bound {
        #[arg(long)]
        level: u64,
        #[arg(long, value_parser = parse_primes)]
        primes: PrimeSet,
    },
    /// Quotient by a rational point of odd prime order, or the class reachable that way
    Isogeny {
        /// a1,a2,a3,a4,a6 or A,B for y^2 = x^3 + Ax + B
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        /// Kernel generator x,y
        #[arg(long, allow_hyphen_values = true, requires = "degree")]
        point: Option<String>,
        #[arg(long)]
        degree: Option<u64>,
    },
    /// Division polynomial psi_n of y^2 = x^3 + Ax + B
    Divpoly {
        /// A,B
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[arg(long)]
        n: usize,
    },
}

fn parse_primes(s: &str) -> Result<PrimeSet, String> {
    s.parse::<PrimeSet>().map_err(|e| e.to_string())
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = s.split_once("..").ok_or("expected LO..HI")?;
    let lo: u64 = lo.trim().parse().map_err(|_| format!("bad lower bound {lo:?}"))?;
    let hi: u64 = hi.trim().parse().map_err(|_| format!("bad upper bound {hi:?}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

pub(crate) struct Config {
    pub tables: TableSource,
    pub format: OutputFormat,
    pub list: bool,
    pub allow_partial: bool,
}

fn exit_code(e: &Error) -> u8 {
    match e.class() {
        ErrorClass::Usage => 1,
        ErrorClass::Data => 2,
        ErrorClass::Domain => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let g = cli.global;
    let config = Config {
        tables: TableSource::new(g.data_dir.unwrap_or_else(default_cache_dir), g.url, g.offline),
        format: g.format.into(),
        list: g.list,
        allow_partial: g.allow_partial,
    };
    match commands::run(&config, cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
