use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use warpsol::report::Status;
use warpsol::runner::{
    catalog, catalog_scenario, fd_check_scenario, load_scenario, run_with, Overrides, ReportFile,
    FD_STEP,
};

/// Reports go here when `--out` is not given.
const REPORT_DIR_ENV: &str = "WARPSOL_REPORT_DIR";

#[derive(Parser)]
#[command(name = "warpsol", version, about = "Curvature and conformal Ricci soliton checks on warped products")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunFlags {
    /// Replace every tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Sample points per suite.
    #[arg(long)]
    count: Option<usize>,
    /// Report path (default: $WARPSOL_REPORT_DIR/<scenario>.report.json).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run suites on separate threads.
    #[arg(long)]
    parallel: bool,
    /// Print only the summary line.
    #[arg(long, short)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file.
    Check {
        scenario: PathBuf,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Run a built-in scenario.
    Suite {
        name: String,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Inspect the built-in scenarios.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Compare curvature against finite differences on every chart of a
    /// built-in scenario.
    FdCheck {
        name: String,
        #[arg(long, default_value_t = FD_STEP)]
        h: f64,
        #[command(flatten)]
        flags: RunFlags,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    /// Print the JSON of one entry.
    Show { name: String },
}

fn overrides(f: &RunFlags) -> Overrides {
    Overrides {
        tolerance: f.tol,
        seed: f.seed,
        count: f.count,
    }
}

fn status_label(s: Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Skipped => "SKIPPED",
        Status::HypothesisFailed => "HYPOTHESIS-FAILED",
        Status::FailedWithError => "FAILED-WITH-ERROR",
    }
}

fn print_summary(report: &ReportFile, quiet: bool) {
    if !quiet {
        for s in &report.suites {
            for c in &s.checks {
                let residual = c.max_residual.map_or("-".to_string(), |r| format!("{r:.3e}"));
                println!(
                    "{:<18} {} / {}  residual {} tol {:.0e}",
                    status_label(c.status),
                    s.suite,
                    c.name,
                    residual,
                    c.tolerance
                );
                if let (Some(note), false) = (&c.note, c.status == Status::Pass) {
                    println!("{:<18}   note: {note}", "");
                }
            }
        }
    }
    let checks: usize = report.suites.iter().map(|s| s.checks.len()).sum();
    let failed = report
        .suites
        .iter()
        .flat_map(|s| &s.checks)
        .filter(|c| !c.status.is_ok())
        .count();
    println!(
        "{}: {} ({} checks, {} failed)",
        report.scenario,
        if report.pass { "PASS" } else { "FAIL" },
        checks,
        failed
    );
}

fn report_path(out: &Option<PathBuf>, scenario: &str) -> PathBuf {
    match out {
        Some(p) => p.clone(),
        None => {
            let dir = std::env::var_os(REPORT_DIR_ENV).map_or_else(|| PathBuf::from("."), PathBuf::from);
            dir.join(format!("{scenario}.report.json"))
        }
    }
}

fn finish(report: ReportFile, flags: &RunFlags) -> ExitCode {
    print_summary(&report, flags.quiet);
    let path = report_path(&flags.out, &report.scenario);
    if let Err(e) = report.write(&path) {
        eprintln!("error: cannot write {}: {e}", path.display());
        return ExitCode::from(2);
    }
    if !flags.quiet {
        println!("report: {}", display(&path));
    }
    ExitCode::from(report.exit_code() as u8)
}

fn display(p: &Path) -> String {
    p.display().to_string()
}

fn fail(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Check { scenario, flags } => match load_scenario(&scenario) {
            Ok(s) => finish(run_with(&s, &overrides(&flags), flags.parallel), &flags),
            Err(e) => fail(e),
        },
        Command::Suite { name, flags } => match catalog_scenario(&name) {
            Ok(s) => finish(run_with(&s, &overrides(&flags), flags.parallel), &flags),
            Err(e) => fail(e),
        },
        Command::Catalog { action } => match action {
            CatalogAction::List => {
                for n in catalog() {
                    println!("{n}");
                }
                ExitCode::SUCCESS
            }
            CatalogAction::Show { name } => match warpsol::runner::catalog_source(&name) {
                Some(src) => {
                    print!("{src}");
                    ExitCode::SUCCESS
                }
                None => fail(format!("`{name}` is not in the catalog")),
            },
        },
        Command::FdCheck { name, h, flags } => {
            if !(h > 0.0) {
                return fail("--h must be positive");
            }
            match catalog_scenario(&name) {
                Ok(s) => finish(fd_check_scenario(&s, h, &overrides(&flags)), &flags),
                Err(e) => fail(e),
            }
        }
    }
}
