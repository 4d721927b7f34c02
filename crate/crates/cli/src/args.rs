use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use submax_core::lwv::ModuleId;
use submax_core::models::Branch;

#[derive(Parser, Debug)]
#[command(
    name = "submax",
    version,
    about = "Exact algebra for submaximally symmetric vector ODEs of C-class"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Largest accepted n.
    #[arg(long, global = true, default_value_t = 10)]
    pub max_n: usize,
    /// Largest accepted m.
    #[arg(long, global = true, default_value_t = 6)]
    pub max_m: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// A single value `3` or an inclusive range `2..5`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Span(pub RangeInclusive<usize>);

impl FromStr for Span {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("not a number: {t:?}"))
        };
        match s.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
                if a > b {
                    return Err(format!("empty range {s:?}"));
                }
                Ok(Span(a..=b))
            }
            None => {
                let a = num(s)?;
                Ok(Span(a..=a))
            }
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct Grid {
    /// ODE order n, or a range such as 2..5.
    #[arg(long)]
    pub n: Span,
    /// Number of dependent variables m, or a range.
    #[arg(long)]
    pub m: Span,
}

#[derive(Args, Debug, Clone)]
pub struct OptGrid {
    /// ODE order n, or a range such as 2..5.
    #[arg(long, default_value = "2..6")]
    pub n: Span,
    /// Number of dependent variables m, or a range.
    #[arg(long, default_value = "2..4")]
    pub m: Span,
}

fn parse_module(s: &str) -> Result<ModuleId, String> {
    s.parse()
        .map_err(|e: submax_core::error::Error| e.to_string())
}

fn parse_branch(s: &str) -> Result<Branch, String> {
    s.parse()
        .map_err(|e: submax_core::error::Error| e.to_string())
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check antisymmetry, Jacobi identity, grading and dimension of g(n,m).
    Structure(Grid),
    /// Solve for the lowest weight vector, verify it and compare with the closed form.
    Lwv {
        #[arg(long, value_parser = parse_module)]
        module: ModuleId,
        #[command(flatten)]
        grid: Grid,
    },
    /// Annihilator of the lowest weight vector, computed and listed.
    Ann {
        #[arg(long, value_parser = parse_module)]
        module: ModuleId,
        #[command(flatten)]
        grid: Grid,
    },
    /// Symmetry bounds and rigidity for every applicable module.
    Dims {
        #[command(flatten)]
        grid: Grid,
        /// Restrict to one module.
        #[arg(long, value_parser = parse_module)]
        module: Option<ModuleId>,
        /// Also compute the bound from the prolongation.
        #[arg(long)]
        verify: bool,
    },
    /// Build an algebraic model, optionally solve its parameters and verify it.
    Model {
        #[arg(long, value_parser = parse_module)]
        module: ModuleId,
        #[command(flatten)]
        grid: Grid,
        #[arg(long, value_parser = parse_branch)]
        branch: Option<Branch>,
        /// Solve the model parameters from the Jacobi identity.
        #[arg(long)]
        solve_params: bool,
        /// Check the Jacobi identity on all basis triples.
        #[arg(long)]
        verify: bool,
    },
    /// Evaluate the C-class and Wilczynski invariants of an ODE.
    Invariants {
        #[command(flatten)]
        source: OdeSource,
    },
    /// Verify a list of point vector fields as symmetries of an ODE.
    Symmetry {
        #[command(flatten)]
        source: OdeSource,
        /// Vector field list; defaults to the built-in list for the B4 minus model.
        #[arg(long)]
        fields: Option<PathBuf>,
    },
    /// Run the acceptance suite.
    ReproducePaper {
        /// Criteria to run, e.g. 1,4,9; all by default.
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u8>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct OdeSource {
    /// ODE file.
    #[arg(long, conflicts_with = "model", required_unless_present = "model")]
    pub ode: Option<PathBuf>,
    /// Built-in model ODE.
    #[arg(long, value_parser = parse_module)]
    pub model: Option<ModuleId>,
    #[arg(long, requires = "model")]
    pub n: Option<usize>,
    #[arg(long, requires = "model")]
    pub m: Option<usize>,
    #[arg(long, value_parser = parse_branch, requires = "model")]
    pub branch: Option<Branch>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn spans() {
        assert_eq!("3".parse::<Span>().unwrap(), Span(3..=3));
        assert_eq!("2..5".parse::<Span>().unwrap(), Span(2..=5));
        assert_eq!("2..=5".parse::<Span>().unwrap(), Span(2..=5));
        assert!("5..2".parse::<Span>().is_err());
        assert!("x".parse::<Span>().is_err());
    }

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }
}
