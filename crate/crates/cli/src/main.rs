//! `thetaq`: run exact q-expansion identity checks from the command line.
//!
//! Exit status is 0 when every report passes, 1 when any fails (the count is
//! printed on stderr) and 2 for usage errors.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{error::ErrorKind, CommandFactory, Parser, Subcommand, ValueEnum};

use thetaq::identities::{self, failures, Family, SuiteConfig, VerificationReport};
use thetaq::selftest::{self, Fault, GroupReport, SelftestOptions};

#[derive(Parser, Debug)]
#[command(
    name = "thetaq",
    version,
    about = "Exact checks of theta/eta q-series identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify identities over a range of k.
    Verify(VerifyArgs),
    /// Run the built-in invariant groups.
    Selftest(SelftestArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum DeltaArg {
    #[value(name = "0")]
    Zero,
    #[value(name = "1")]
    One,
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Which {
    Theorem,
    Lemd,
    Lem2,
    Meq1,
    Lem22,
    Bridges,
    TanSum,
    K3,
    All,
}

impl Which {
    fn families(self) -> Vec<Family> {
        match self {
            Which::Theorem => vec![Family::Theorem],
            Which::Lemd => vec![Family::Lemd],
            Which::Lem2 => vec![Family::Lem2],
            Which::Meq1 => vec![Family::Meq1],
            Which::Lem22 => vec![Family::Lem22],
            Which::Bridges => vec![Family::Bridges],
            Which::TanSum => vec![Family::TanSum],
            Which::K3 => vec![Family::K3],
            Which::All => Family::ALL.to_vec(),
        }
    }
}

#[derive(clap::Args, Debug)]
struct VerifyArgs {
    /// Families to run; defaults to all.
    #[arg(value_enum)]
    which: Vec<Which>,
    /// Smallest k [default: min(2, k-max)]
    #[arg(long)]
    k_min: Option<u64>,
    #[arg(long, default_value_t = 20)]
    k_max: u64,
    #[arg(long, value_enum, default_value = "both")]
    delta: DeltaArg,
    /// Number of integer q-steps certified past each series' base exponent.
    #[arg(long, short = 'N', default_value_t = 100)]
    order: u64,
    /// z-jet degree J for the jet identities.
    #[arg(long, short = 'J', default_value_t = 4)]
    jet_degree: usize,
    /// Worker threads [default: available parallelism]
    #[arg(long, env = "THETAQ_JOBS")]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write reports here instead of stdout.
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct SelftestArgs {
    #[arg(long, default_value_t = SelftestOptions::default().seed)]
    seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Corrupt one computed coefficient to check that failures are caught.
    #[arg(long, hide = true)]
    inject_fault: bool,
}

fn usage_error(msg: impl std::fmt::Display) -> ! {
    Cli::command().error(ErrorKind::ValueValidation, msg).exit()
}

fn config(args: &VerifyArgs) -> SuiteConfig {
    let k_min = args.k_min.unwrap_or(args.k_max.min(2));
    if k_min < 1 || args.k_max < 1 {
        usage_error("k must be at least 1 (check --k-min and --k-max)");
    }
    if k_min > args.k_max {
        usage_error(format!("--k-min {k_min} exceeds --k-max {}", args.k_max));
    }
    if args.order < 1 {
        usage_error("--order must be at least 1");
    }
    if args.jobs == Some(0) {
        usage_error("--jobs must be at least 1");
    }
    let mut families: Vec<Family> = if args.which.is_empty() {
        Family::ALL.to_vec()
    } else {
        args.which.iter().flat_map(|w| w.families()).collect()
    };
    families.sort();
    families.dedup();
    let needs = |f| families.contains(&f);
    if needs(Family::Meq1) && args.jet_degree < 2 {
        usage_error("meq1 needs --jet-degree >= 2");
    }
    if needs(Family::Lem22) && args.jet_degree < 3 {
        usage_error("lem22 needs --jet-degree >= 3 (one degree goes to the zero at -pi/2)");
    }
    let deltas = match args.delta {
        DeltaArg::Zero => vec![0],
        DeltaArg::One => vec![1],
        DeltaArg::Both => vec![0, 1],
    };
    SuiteConfig {
        k_min,
        k_max: args.k_max,
        deltas,
        order: args.order,
        jet_degree: args.jet_degree,
        families,
        jobs: args
            .jobs
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn open_output(path: &Option<PathBuf>) -> Box<dyn Write> {
    match path {
        Some(p) => match std::fs::File::create(p) {
            Ok(f) => Box::new(std::io::BufWriter::new(f)),
            Err(e) => usage_error(format!("cannot write {}: {e}", p.display())),
        },
        None => Box::new(std::io::stdout().lock()),
    }
}

fn write_text(out: &mut dyn Write, reports: &[VerificationReport]) -> std::io::Result<()> {
    for r in reports {
        writeln!(out, "{r}")?;
    }
    let total: f64 = identities::total_seconds(reports);
    writeln!(
        out,
        "{} reports, {} failed, {:.3}s of work",
        reports.len(),
        failures(reports),
        total
    )
}

fn verify(args: VerifyArgs) -> ExitCode {
    let cfg = config(&args);
    let jobs = cfg.enumerate();
    let reports = identities::run_jobs(&jobs, cfg.order, cfg.jet_degree, cfg.jobs, |_| {});
    let mut out = open_output(&args.output);
    let written = match args.format {
        Format::Text => write_text(&mut *out, &reports),
        Format::Json => serde_json::to_writer_pretty(&mut *out, &reports)
            .map_err(std::io::Error::from)
            .and_then(|_| writeln!(out)),
    };
    if let Err(e) = written.and_then(|_| out.flush()) {
        eprintln!("thetaq: write failed: {e}");
        return ExitCode::FAILURE;
    }
    finish(failures(&reports), reports.len())
}

fn finish(failed: usize, total: usize) -> ExitCode {
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        eprintln!("thetaq: {failed} of {total} failed");
        ExitCode::from(1)
    }
}

fn write_groups(out: &mut dyn Write, groups: &[GroupReport]) -> std::io::Result<()> {
    for g in groups {
        let tag = if g.passed() { "PASS" } else { "FAIL" };
        writeln!(
            out,
            "{tag} {:<16} {:>5} checks {:>9.3}ms",
            g.name,
            g.checks,
            g.elapsed.as_secs_f64() * 1e3
        )?;
        for f in g.failures.iter().take(5) {
            writeln!(out, "     {f}")?;
        }
    }
    Ok(())
}

fn run_selftest(args: SelftestArgs) -> ExitCode {
    let opts = SelftestOptions {
        seed: args.seed,
        fault: if args.inject_fault {
            Fault::CorruptCoefficient
        } else {
            Fault::None
        },
    };
    let groups = selftest::run(&opts);
    let mut out = std::io::stdout().lock();
    let written = match args.format {
        Format::Text => write_groups(&mut out, &groups),
        Format::Json => serde_json::to_writer_pretty(&mut out, &groups)
            .map_err(std::io::Error::from)
            .and_then(|_| writeln!(out)),
    };
    if let Err(e) = written {
        eprintln!("thetaq: write failed: {e}");
        return ExitCode::FAILURE;
    }
    let failed = groups.iter().filter(|g| !g.passed()).count();
    finish(failed, groups.len())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify(args) => verify(args),
        Command::Selftest(args) => run_selftest(args),
    }
}
