//! Command-line frontend.
//!
//! Exit codes: 0 on success (valid PDS, feasible or open order, solutions
//! found), 1 on a negative result (not a PDS, infeasible order, no solution),
//! 2 on usage or input errors.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::feasibility::{atlas, sieve, VerdictKind};
use crate::field::paley_pds;
use crate::group::AbelianGroup;
use crate::pds::{paley_params, verify_pds, CandidateSet};
use crate::search::{search, SearchMode, SearchProblem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "pds-kit",
    version,
    about = "Partial difference sets in finite abelian groups"
)]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify candidate set(s) given as JSON (reads stdin when no path is given).
    Verify {
        path: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Emit the nonzero squares of F_q as a candidate set.
    Paley {
        #[arg(long)]
        q: u64,
    },
    /// Classify an order for Paley-type PDSs.
    Sieve {
        #[arg(long)]
        v: u64,
        #[arg(long)]
        json: bool,
    },
    /// Search a group for PDSs with Paley parameters.
    Search {
        #[arg(long)]
        group: String,
        #[arg(long, required = true)]
        paley: bool,
        /// Defaults to `orbit` when Δ is a perfect square, else `brute`.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long, default_value_t = 0)]
        limit: usize,
        #[arg(long)]
        json: bool,
    },
    /// Sieve every v ≡ 1 (mod 4) up to `max`.
    Atlas {
        #[arg(long)]
        max: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Orbit,
    Brute,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(config.command, stdin, out, err) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Internal(msg)) => {
            let _ = writeln!(err, "internal error: {msg}");
            EXIT_NEGATIVE
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "i/o error: {e}");
            EXIT_USAGE
        }
    }
}

enum Failure {
    Usage(String),
    Internal(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn execute(
    command: Command,
    stdin: &mut dyn Read,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    match command {
        Command::Verify { path, json } => {
            let mut text = String::new();
            match path {
                Some(p) => text = std::fs::read_to_string(&p)?,
                None => {
                    stdin.read_to_string(&mut text)?;
                }
            }
            let values = serde_json::Deserializer::from_str(&text)
                .into_iter::<serde_json::Value>()
                .collect::<Result<Vec<_>, _>>()
                .map_err(usage)?;
            if values.is_empty() {
                return Err(usage("no candidate set in input"));
            }
            let mut code = EXIT_OK;
            for value in values {
                let candidate = CandidateSet::from_json_value(value).map_err(usage)?;
                let report = verify_pds(&candidate);
                if !report.is_pds {
                    code = EXIT_NEGATIVE;
                }
                if json {
                    writeln!(out, "{}", report.to_json())?;
                } else {
                    writeln!(out, "{}: {report}", candidate.group)?;
                }
            }
            Ok(code)
        }
        Command::Paley { q } => {
            let d = paley_pds(q).map_err(usage)?;
            writeln!(out, "{}", d.to_json())?;
            Ok(EXIT_OK)
        }
        Command::Sieve { v, json } => {
            let verdict = sieve(v).map_err(|e| Failure::Internal(e.to_string()))?;
            if json {
                writeln!(out, "{}", verdict.to_json())?;
            } else {
                writeln!(out, "{verdict}")?;
            }
            Ok(if verdict.kind == VerdictKind::Infeasible {
                EXIT_NEGATIVE
            } else {
                EXIT_OK
            })
        }
        Command::Search {
            group,
            paley: _,
            mode,
            limit,
            json,
        } => {
            let group = AbelianGroup::parse(&group).map_err(usage)?;
            let target = paley_params(group.order()).map_err(usage)?;
            let mode = match mode {
                Some(ModeArg::Orbit) => SearchMode::OrbitRestricted,
                Some(ModeArg::Brute) => SearchMode::Unrestricted,
                None if target.delta_is_square() => SearchMode::OrbitRestricted,
                None => SearchMode::Unrestricted,
            };
            let problem = SearchProblem::new(group, target, mode).with_limit(limit);
            let result = search(&problem).map_err(usage)?;
            let summary = format!(
                "{} solution(s) for {target} in {}, {} nodes, {}",
                result.solutions.len(),
                problem.group,
                result.nodes_explored,
                if result.complete {
                    "complete"
                } else {
                    "truncated"
                }
            );
            if json {
                for s in &result.solutions {
                    writeln!(out, "{}", s.to_json())?;
                }
                writeln!(err, "{summary}")?;
            } else {
                for s in &result.solutions {
                    writeln!(out, "{s}")?;
                }
                writeln!(out, "{summary}")?;
            }
            Ok(if result.solutions.is_empty() {
                EXIT_NEGATIVE
            } else {
                EXIT_OK
            })
        }
        Command::Atlas { max, json } => {
            let verdicts = atlas(max).map_err(|e| Failure::Internal(e.to_string()))?;
            for verdict in verdicts {
                if json {
                    writeln!(out, "{}", verdict.to_json())?;
                } else {
                    writeln!(out, "{}\t{verdict}", verdict.v)?;
                }
            }
            Ok(EXIT_OK)
        }
    }
}
