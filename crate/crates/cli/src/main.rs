mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use puiseux_core::dsl::{parse_problem, Problem};

use report::RunReport;

/// Newton-Puiseux exploration of polynomial ODEs and q-difference equations.
#[derive(Parser, Debug)]
#[command(name = "puiseux-forge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Problem file (`puiseux-forge v1` format).
    file: PathBuf,
    /// Write the JSON run report here (`-` for stdout).
    #[arg(long, value_name = "OUT")]
    json: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct BudgetArgs {
    /// Total prefix terms, initial segment included.
    #[arg(long, value_name = "K")]
    budget_terms: Option<usize>,
    /// Largest exponent a new term may have, e.g. `4 + tau`.
    #[arg(long, value_name = "E")]
    budget_exponent: Option<String>,
    /// Cap on live branches.
    #[arg(long, value_name = "N")]
    budget_branches: Option<usize>,
    #[arg(long, value_enum)]
    policy: Option<PolicyArg>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum PolicyArg {
    SidesOnly,
    SidesAndVertexRoots,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Complete the initial segment branch by branch.
    Branches {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Check that the initial segment (or `--at`) is admissible.
    Admissible {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "PREFIX")]
        at: Option<String>,
    },
    /// Newton polygon of `P[prefix]`.
    Polygon {
        #[command(flatten)]
        common: Common,
        /// Prefix to substitute; defaults to the empty prefix.
        #[arg(long, value_name = "PREFIX")]
        at: Option<String>,
        /// Draw the supporting line of this co-slope (repeatable).
        #[arg(long = "line", value_name = "MU")]
        lines: Vec<String>,
        #[arg(long, value_name = "OUT", conflicts_with = "ascii")]
        svg: Option<PathBuf>,
        #[arg(long)]
        ascii: bool,
    },
    /// Rational rank of the prefix support modulo the support of P.
    Rank {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "PREFIX")]
        at: Option<String>,
    },
    /// Complete the first branch to K terms and certify convergence.
    Certify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "K", default_value_t = 8)]
        segment_terms: usize,
    },
    /// Continue a stabilized prefix by its forced terms.
    ExtendStabilized {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "PREFIX")]
        at: Option<String>,
        #[arg(long, value_name = "N", default_value_t = 2)]
        count: usize,
    },
    /// Branches of an autonomous first-order equation through `(x0, c0)`.
    Autonomous {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        x0: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        c0: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_OBSTRUCTION: u8 = 2;
pub const EXIT_UNDECIDED: u8 = 3;

fn load(common: &Common) -> Result<(String, Problem), String> {
    let text = std::fs::read_to_string(&common.file).map_err(|e| format!("{}: {e}", common.file.display()))?;
    let problem = parse_problem(&text).map_err(|e| format!("{}:{e}", common.file.display()))?;
    Ok((text, problem))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, common) = match &cli.command {
        Command::Branches { common, .. } => ("branches", common),
        Command::Admissible { common, .. } => ("admissible", common),
        Command::Polygon { common, .. } => ("polygon", common),
        Command::Rank { common, .. } => ("rank", common),
        Command::Certify { common, .. } => ("certify", common),
        Command::ExtendStabilized { common, .. } => ("extend-stabilized", common),
        Command::Autonomous { common, .. } => ("autonomous", common),
    };
    let (text, problem) = match load(common) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let mut rep = RunReport::new(name, &text);
    let result = match &cli.command {
        Command::Branches { budget, .. } => commands::branches(&problem, budget, &mut rep),
        Command::Admissible { at, .. } => commands::admissible(&problem, at.as_deref(), &mut rep),
        Command::Polygon { at, lines, svg, ascii, .. } => {
            commands::polygon(&problem, at.as_deref(), lines, svg.as_deref(), *ascii, &mut rep)
        }
        Command::Rank { at, .. } => commands::rank(&problem, at.as_deref(), &mut rep),
        Command::Certify { segment_terms, .. } => commands::certify(&problem, *segment_terms, &mut rep),
        Command::ExtendStabilized { at, count, .. } => {
            commands::extend_stabilized(&problem, at.as_deref(), *count, &mut rep)
        }
        Command::Autonomous { x0, c0, budget, .. } => commands::autonomous(&problem, x0, c0, budget, &mut rep),
    };
    let code = match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    rep.finish(code);
    let to_stdout = common.json.as_ref().is_some_and(|o| o.as_os_str() == "-");
    for line in rep.lines() {
        if to_stdout {
            eprintln!("{line}");
        } else {
            println!("{line}");
        }
    }
    if let Some(out) = &common.json {
        let body = rep.to_string_pretty();
        let written = if to_stdout {
            println!("{body}");
            Ok(())
        } else {
            std::fs::write(out, body + "\n")
        };
        if let Err(e) = written {
            eprintln!("error: {}: {e}", out.display());
            return ExitCode::from(EXIT_INPUT);
        }
    }
    ExitCode::from(code)
}
