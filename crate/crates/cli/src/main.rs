use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use kostka::faces::Limits;

mod commands;
mod report;

use commands::CliError;
use report::Format;

#[derive(Parser)]
#[command(name = "kostka", version, about = "Faces, face counts and Hilbert basis elements of Kostka cones")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Cap on the number of faces held during enumeration.
    #[arg(long, env = "KOSTKA_MAX_FACES", default_value_t = 2_000_000, global = true)]
    max_faces: usize,
    /// Wall-clock budget in seconds for enumeration and scans.
    #[arg(long, env = "KOSTKA_TIME_BUDGET", global = true)]
    time_budget: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Gcd1,
    Gcd2,
    /// Check every admissible pair up to --max.
    All,
}

#[derive(Subcommand)]
enum Command {
    /// List the vertices of P_r with primitive cone generators.
    Rays { r: usize },
    /// Hyperplanes containing the vertex (a, b, l).
    Incidence { r: usize, a: usize, b: usize, l: usize },
    /// Enumerate faces, or count them with --count-only.
    Faces {
        r: usize,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        count_only: bool,
    },
    /// Decide whether two vertices span an edge.
    #[command(allow_negative_numbers = false)]
    Edge { r: usize, a: usize, b: usize, l: usize, a2: usize, b2: usize, l2: usize },
    /// Largest vertex count of a d-face: `maxface r d` or `maxface --closed-form d`.
    Maxface {
        #[arg(long)]
        closed_form: bool,
        #[arg(required = true, num_args = 1..=2)]
        args: Vec<usize>,
    },
    /// Fit the binomial expansion of f_d(r).
    Fit {
        d: usize,
        /// JSON object {"r": f_d(r)}; enumerated when omitted.
        #[arg(long)]
        values: Option<PathBuf>,
        /// Also evaluate the fit at r = 1..=R.
        #[arg(long, value_name = "R")]
        eval_up_to: Option<u64>,
    },
    /// f-vector of P_r, starting at f_{-1}.
    Fvector { r: usize },
    /// h-vector of P_r.
    Hvector {
        r: usize,
        #[arg(long)]
        check_conjecture: bool,
    },
    /// Hilbert basis membership for a cone point or an array of them ("-" reads stdin).
    HbCheck { file: PathBuf },
    /// Classify an initial pair, or all pairs with lambda1 <= L.
    InitialClassify {
        l1: Option<u64>,
        m1: Option<u64>,
        #[arg(long, value_name = "L", conflicts_with_all = ["l1", "m1"])]
        range: Option<u64>,
        #[arg(long, requires = "range")]
        failing_only: bool,
    },
    /// Build a Hilbert basis element with a given initial pair.
    Construct {
        #[arg(value_enum)]
        family: Family,
        l1: Option<u64>,
        m1: Option<u64>,
        /// Largest lambda1 checked by `construct all`.
        #[arg(long, default_value_t = 40)]
        max: u64,
    },
    /// Search width r for a Hilbert basis element with initial pair (l1, m1).
    ScanInitial {
        l1: u64,
        m1: u64,
        r: usize,
        /// Time limit in seconds; defaults to --time-budget.
        #[arg(long)]
        budget: Option<f64>,
        #[arg(long, default_value_t = 1_000_000)]
        max_candidates: u64,
    },
    /// Bounds on the probability that a random pair is covered by the sufficient conditions.
    Probability {
        #[arg(long = "B", default_value_t = 1_000_000)]
        b: u64,
    },
    /// Empirical density of pairs satisfying condition set I ("1,3" or "any").
    Density {
        n: u64,
        #[arg(value_name = "I")]
        conditions: String,
    },
    /// Maximal vertex counts of d-faces for r = 2..=max-r.
    Table1 {
        #[arg(long, default_value_t = 6)]
        max_r: usize,
    },
    /// Face counts f_d(r) for r <= max-r, d <= max-d.
    Table2 {
        #[arg(long, default_value_t = 5)]
        max_r: usize,
        #[arg(long, default_value_t = 3)]
        max_d: usize,
    },
    /// Compare the edge rule with the closure oracle on all vertex pairs.
    EdgeCheck { r: usize },
    /// Compare Hilbert basis membership with exhaustive decomposition.
    HbOracle {
        #[arg(long, default_value_t = 3)]
        max_r: usize,
        #[arg(long, default_value_t = 10)]
        max_size: u64,
    },
}

fn seconds(s: f64) -> Result<Duration, CliError> {
    Duration::try_from_secs_f64(s).map_err(|_| CliError::Input(format!("invalid time budget {s}")))
}

fn dispatch(cli: &Cli) -> commands::CliResult {
    let time_budget = cli.time_budget.map(seconds).transpose()?;
    let limits = Limits { max_faces: cli.max_faces, time_budget };
    match &cli.command {
        Command::Rays { r } => commands::rays(*r),
        Command::Incidence { r, a, b, l } => commands::incidence(*r, *a, *b, *l),
        Command::Faces { r, dim, count_only } => commands::faces(*r, *dim, *count_only, &limits),
        Command::Edge { r, a, b, l, a2, b2, l2 } => commands::edge(*r, [*a, *b, *l], [*a2, *b2, *l2]),
        Command::Maxface { closed_form, args } => commands::maxface(*closed_form, args, &limits),
        Command::Fit { d, values, eval_up_to } => commands::fit(*d, values.as_deref(), *eval_up_to, &limits),
        Command::Fvector { r } => commands::fvector(*r, &limits),
        Command::Hvector { r, check_conjecture } => commands::hvector(*r, *check_conjecture, &limits),
        Command::HbCheck { file } => commands::hb_check(file),
        Command::InitialClassify { l1, m1, range, failing_only } => {
            commands::initial_classify(*l1, *m1, *range, *failing_only)
        }
        Command::Construct { family, l1, m1, max } => {
            let name = match family {
                Family::Gcd1 => "gcd1",
                Family::Gcd2 => "gcd2",
                Family::All => "all",
            };
            commands::construct(name, *l1, *m1, *max)
        }
        Command::ScanInitial { l1, m1, r, budget, max_candidates } => {
            if let Some(s) = budget {
                seconds(*s)?;
            }
            commands::scan_initial(*l1, *m1, *r, budget.or(cli.time_budget), *max_candidates)
        }
        Command::Probability { b } => commands::probability(*b),
        Command::Density { n, conditions } => commands::density(*n, conditions),
        Command::Table1 { max_r } => commands::table1(*max_r, &limits),
        Command::Table2 { max_r, max_d } => commands::table2(*max_r, *max_d, &limits),
        Command::EdgeCheck { r } => commands::edge_check(*r),
        Command::HbOracle { max_r, max_size } => commands::hb_oracle(*max_r, *max_size),
    }
}

fn emit(report: &report::Report, format: Format) -> io::Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    report.write(format, &mut out)?;
    out.flush()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (report, code) = match dispatch(&cli) {
        Ok(r) => (r, 0),
        Err(CliError::CheckFailed(r)) => (r, 1),
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(CliError::Kostka(e)) => {
            eprintln!("error: {e}");
            let code = if e.is_resource_cap() || matches!(e, kostka::Error::Overflow(_)) { 3 } else { 2 };
            return ExitCode::from(code);
        }
    };
    if let Err(e) = emit(&report, cli.format) {
        if e.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}
