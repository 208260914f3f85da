//! `pfol`: derivations, covers, blow-up discrepancies and cones over finite
//! fields, with every result backed by a checkable certificate.

mod commands;
mod config;
mod report;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{ConeArgs, CoverArgs, DiscrepancyArgs, QuotientArgs, RingArgs, SuiteArgs};

#[derive(Parser, Debug)]
#[command(name = "pfol", version, about)]
struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for enumerations and the suite.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether a derivation is p-closed.
    Pclosed {
        derivation: String,
        #[command(flatten)]
        ring: RingArgs,
    },
    /// The p-th power of a derivation.
    Ppower {
        derivation: String,
        #[command(flatten)]
        ring: RingArgs,
    },
    /// The Lie bracket of two derivations.
    Bracket {
        lhs: String,
        rhs: String,
        #[command(flatten)]
        ring: RingArgs,
    },
    /// Critical points of a section and singular points of its cyclic cover.
    Cover(CoverArgs),
    /// Canonical and foliated discrepancies of a weighted blow-up tower.
    Discrepancy(DiscrepancyArgs),
    /// Ring of constants and inseparable degree of a derivation.
    Quotient(QuotientArgs),
    /// Boundary of the positive cone of an intersection lattice.
    Cone(ConeArgs),
    /// Run every worked example and property family.
    #[command(name = "paper-suite")]
    Suite(SuiteArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let jobs = cli.jobs.max(1);
    let result = match &cli.command {
        Command::Pclosed { derivation, ring } => commands::pclosed(ring, derivation),
        Command::Ppower { derivation, ring } => commands::ppower(ring, derivation),
        Command::Bracket { lhs, rhs, ring } => commands::bracket(ring, lhs, rhs),
        Command::Cover(args) => commands::cover(args, jobs),
        Command::Discrepancy(args) => commands::discrepancy(args),
        Command::Quotient(args) => commands::quotient(args),
        Command::Cone(args) => commands::cone(args),
        Command::Suite(args) => commands::worked_examples(args, jobs),
    };
    match result {
        Ok(report) => {
            if cli.json {
                match serde_json::to_string_pretty(&report) {
                    Ok(s) => println!("{s}"),
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(2);
                    }
                }
            } else {
                print!("{}", report.render_text());
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
