//! Command-line interface: validation, homology, spectral pages, the
//! two-route second-page cross-check, reference comparison, and access to
//! the fixture catalog.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use morsefib::report::{self, ReportOptions};
use morsefib::specfile::{parse_spec, FibrationSpec};
use morsefib::{catalog, emit_spec};

#[derive(Parser)]
#[command(
    name = "morsefib",
    about = "Morse complexes with chain-complex coefficients and their spectral sequences over GF(2)",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a spec: shapes, structure equation, d² = 0, filtration.
    Check { spec: PathBuf },
    /// Homology of the total complex.
    Homology { spec: PathBuf },
    /// Page dimensions, differential ranks, stabilization, and the
    /// comparison of the stable page with the filtration on homology.
    Pages {
        spec: PathBuf,
        /// Show pages only up to this index.
        #[arg(long)]
        max_page: Option<u32>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Second page via fiber homology, cross-checked against the
    /// filtration engine; any discrepancy is a failure.
    E2 { spec: PathBuf },
    /// Diff computed values against the spec's reference block.
    Compare { spec: PathBuf },
    /// Access the built-in fixture catalog.
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// List the available fixture names.
    List,
    /// Print a fixture as a spec document.
    Emit {
        name: String,
        /// Truncation degree for parameterized fixtures.
        #[arg(long)]
        param: Option<i64>,
    },
}

fn load_spec(path: &PathBuf) -> Result<FibrationSpec, ExitCode> {
    let text = fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(2)
    })?;
    parse_spec(&text).map_err(|errors| {
        eprintln!("error: {} is not a valid spec:", path.display());
        for e in errors {
            eprintln!("  {e}");
        }
        ExitCode::FAILURE
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Check { spec } => {
            let spec = match load_spec(&spec) {
                Ok(s) => s,
                Err(code) => return code,
            };
            let report = report::run_report(&spec, ReportOptions::default());
            print!("{}", report.checks_text());
            if report.checks.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Command::Homology { spec } => {
            let spec = match load_spec(&spec) {
                Ok(s) => s,
                Err(code) => return code,
            };
            let report = report::run_report(&spec, ReportOptions::default());
            print!("{}", report.checks_text());
            print!("{}", report.homology_text());
            if report.checks.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Command::Pages {
            spec,
            max_page,
            format,
        } => {
            let spec = match load_spec(&spec) {
                Ok(s) => s,
                Err(code) => return code,
            };
            let report = report::run_report(&spec, ReportOptions { max_page });
            match format {
                Format::Json => print!("{}", report.to_json()),
                Format::Table => {
                    print!("{}", report.checks_text());
                    print!("{}", report.pages_text());
                }
            }
            if report.checks.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Command::E2 { spec } => {
            let spec = match load_spec(&spec) {
                Ok(s) => s,
                Err(code) => return code,
            };
            let check = report::e2_cross_check(&spec);
            println!("fixture: {}", check.name);
            println!("second page (fiber-homology route):");
            println!("   p   q  dim");
            for cell in &check.e2 {
                println!("  {:>2}  {:>2}  {:>3}", cell.p, cell.q, cell.dim);
            }
            if check.passed {
                println!("cross-check against the filtration engine: match");
                ExitCode::SUCCESS
            } else {
                println!("cross-check against the filtration engine: MISMATCH");
                for d in &check.diffs {
                    println!("  - {d}");
                }
                ExitCode::FAILURE
            }
        }
        Command::Compare { spec } => {
            let spec = match load_spec(&spec) {
                Ok(s) => s,
                Err(code) => return code,
            };
            let cmp = report::compare(&spec);
            println!("fixture: {}", cmp.name);
            if cmp.passed {
                println!("reference comparison: pass");
                ExitCode::SUCCESS
            } else {
                println!("reference comparison: FAIL");
                for d in &cmp.diffs {
                    println!("  - {d}");
                }
                ExitCode::FAILURE
            }
        }
        Command::Catalog(CatalogCommand::List) => {
            for name in catalog::names() {
                println!("{name}");
            }
            println!("s2-pathloop-<N>  (parameterized; default N = 8)");
            ExitCode::SUCCESS
        }
        Command::Catalog(CatalogCommand::Emit { name, param }) => {
            match catalog::get_with_param(&name, param) {
                Ok(spec) => {
                    print!("{}", emit_spec(&spec));
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            }
        }
    }
}
