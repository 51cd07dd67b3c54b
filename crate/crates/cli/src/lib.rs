//! The `permforge` command-line front end.
//!
//! Standard output carries only the payload; diagnostics go to standard error.
//! Exit status: 0 success or satisfied, 1 violated or mismatch, 2 on any error.

pub mod oeis;
pub mod sweep;

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use permforge_core::{
    brute_force_solve, find_occurrences, parse_model, solve, Constraint, Mode, Model, Occurrence,
    Permutation, SolveConfig, SolveMode, SolveOutcome,
};

use crate::sweep::{SweepSpec, SweepTable};

#[derive(Debug, Parser)]
#[command(
    name = "permforge",
    version,
    about = "Permutation pattern constraint engine"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate every constraint of a model on one permutation.
    Check {
        model: PathBuf,
        /// Values, as separate arguments or one string ("5 2 1 6 3 4", "5,2,1", "521634").
        #[arg(required = true, num_args = 1.., allow_hyphen_values = true)]
        perm: Vec<String>,
    },
    /// Print the number of solutions.
    Count {
        model: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Print every solution in lexicographic order.
    Enumerate {
        model: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        limit: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Lines)]
        format: Format,
    },
    /// Count pattern avoiders of each length by inversion number.
    Sweep {
        /// Classic pattern to avoid.
        #[arg(long, default_value = "1324")]
        avoid: String,
        /// Lengths, `a..b` inclusive.
        #[arg(long = "n")]
        n: String,
        /// Inversion counts, `a..b` inclusive.
        #[arg(long = "k")]
        k: String,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, default_value_t = 2)]
        split_depth: usize,
        /// Write the table here instead of standard output.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Check the stabilized diagonal of a sweep table against a reference sequence.
    CompareOeis {
        csv: PathBuf,
        #[arg(long)]
        sequence: String,
    },
    /// Brute-force reference solver (length at most 9).
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    Count {
        model: PathBuf,
        #[arg(long)]
        length: Option<usize>,
    },
    Enumerate {
        model: PathBuf,
        #[arg(long)]
        length: Option<usize>,
        #[arg(long)]
        limit: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Lines)]
        format: Format,
    },
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Prefix length at which work is split; clamped below the model length.
    #[arg(long, default_value_t = 2)]
    pub split_depth: usize,
    /// Use the brute-force oracle instead of the search.
    #[arg(long)]
    pub oracle: bool,
    /// Override the model's length.
    #[arg(long)]
    pub length: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Lines,
    Jsonl,
}

pub fn run(cli: Cli) -> Result<i32> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let code = match cli.command {
        Command::Check { model, perm } => check(&load(&model, None)?, &perm.join(" "), &mut out)?,
        Command::Count { model, solver } => {
            let m = load(&model, solver.length)?;
            let outcome = run_solver(&m, &solver, SolveMode::Count, None)?;
            writeln!(out, "{}", outcome.count)?;
            0
        }
        Command::Enumerate {
            model,
            solver,
            limit,
            format,
        } => {
            let m = load(&model, solver.length)?;
            let outcome = run_solver(&m, &solver, SolveMode::Enumerate, limit)?;
            write_solutions(&mut out, &m, &outcome, format)?;
            0
        }
        Command::Sweep {
            avoid,
            n,
            k,
            workers,
            split_depth,
            csv,
        } => {
            let spec = SweepSpec {
                pattern: avoid
                    .parse()
                    .map_err(|e| anyhow::anyhow!("pattern {avoid:?}: {e}"))?,
                n_range: sweep::parse_range(&n)?,
                k_range: sweep::parse_range(&k)?,
            };
            let rows = sweep::run_sweep(&spec, workers, split_depth)?;
            match csv {
                Some(path) => {
                    let file = fs::File::create(&path)
                        .with_context(|| format!("cannot create {}", path.display()))?;
                    sweep::write_csv(BufWriter::new(file), &spec.k_range, &rows)?;
                }
                None => sweep::write_csv(&mut out, &spec.k_range, &rows)?,
            }
            0
        }
        Command::CompareOeis { csv, sequence } => {
            let reference = oeis::lookup(&sequence)
                .with_context(|| format!("unknown sequence {sequence:?}"))?;
            let file =
                fs::File::open(&csv).with_context(|| format!("cannot open {}", csv.display()))?;
            let table: SweepTable = sweep::read_csv(file)?;
            let reports = sweep::compare(&table, &reference)?;
            for r in &reports {
                let observed: Vec<String> = r.observed.iter().map(|(_, v)| v.to_string()).collect();
                let verdict = if r.matches() { "match" } else { "mismatch" };
                writeln!(
                    out,
                    "k={} expected={} observed={} {verdict}",
                    r.k,
                    r.expected,
                    observed.join(",")
                )?;
            }
            i32::from(!reports.iter().all(|r| r.matches()))
        }
        Command::Oracle { command } => match command {
            OracleCommand::Count { model, length } => {
                let m = load(&model, length)?;
                writeln!(out, "{}", brute_force_solve(&m)?.count)?;
                0
            }
            OracleCommand::Enumerate {
                model,
                length,
                limit,
                format,
            } => {
                let m = load(&model, length)?;
                let mut outcome = brute_force_solve(&m)?;
                if let Some(limit) = limit {
                    outcome.solutions.truncate(limit as usize);
                }
                write_solutions(&mut out, &m, &outcome, format)?;
                0
            }
        },
    };
    out.flush()?;
    Ok(code)
}

fn load(path: &Path, length: Option<usize>) -> Result<Model> {
    let text = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    let model = parse_model(&text).with_context(|| format!("{}", path.display()))?;
    match length {
        Some(n) => Ok(model.with_length(n)?),
        None => Ok(model),
    }
}

fn run_solver(
    m: &Model,
    args: &SolverArgs,
    mode: SolveMode,
    limit: Option<u64>,
) -> Result<SolveOutcome> {
    if args.oracle {
        let mut outcome = brute_force_solve(m)?;
        if let Some(limit) = limit {
            outcome.solutions.truncate(limit as usize);
        }
        if mode == SolveMode::Count {
            outcome.solutions.clear();
        }
        return Ok(outcome);
    }
    let config = SolveConfig {
        workers: args.workers,
        split_depth: args.split_depth.min(m.length() - 1),
        limit,
        mode,
        ..SolveConfig::default()
    };
    Ok(solve(m, &config)?)
}

fn write_solutions<W: Write>(
    out: &mut W,
    m: &Model,
    outcome: &SolveOutcome,
    format: Format,
) -> Result<()> {
    for s in &outcome.solutions {
        let values: Vec<String> = s.perm.images().iter().map(|v| v.to_string()).collect();
        match format {
            Format::Lines => {
                write!(out, "{}", values.join(" "))?;
                for v in &s.stats {
                    write!(out, "\t{v}")?;
                }
                writeln!(out)?;
            }
            Format::Jsonl => {
                write!(out, "{{\"perm\":[{}]", values.join(","))?;
                for (kind, v) in m.emit().iter().zip(&s.stats) {
                    write!(out, ",\"{kind}\":{v}")?;
                }
                writeln!(out, "}}")?;
            }
        }
    }
    Ok(())
}

/// The occurrence with the lexicographically least value sequence.
fn witness(p: &Permutation, c: &Constraint) -> Option<Occurrence> {
    let Constraint::Pattern { pattern, .. } = c else {
        return None;
    };
    find_occurrences(p, pattern)
        .into_iter()
        .min_by_key(|o| o.indices().iter().map(|&i| p.at(i)).collect::<Vec<_>>())
}

fn check<W: Write>(m: &Model, text: &str, out: &mut W) -> Result<i32> {
    let p: Permutation = text
        .parse()
        .map_err(|e| anyhow::anyhow!("permutation {text:?}: {e}"))?;
    anyhow::ensure!(
        p.len() == m.length(),
        "permutation has length {} but the model has length {}",
        p.len(),
        m.length()
    );
    let verdicts: Vec<bool> = m.constraints().iter().map(|c| c.holds(&p)).collect();
    let satisfied = verdicts.iter().all(|&v| v);
    writeln!(out, "{}", if satisfied { "satisfied" } else { "violated" })?;
    for (i, (c, ok)) in m.constraints().iter().zip(&verdicts).enumerate() {
        write!(
            out,
            "{}\t{c}\t{}",
            i + 1,
            if *ok { "satisfied" } else { "violated" }
        )?;
        if !ok
            && matches!(
                c,
                Constraint::Pattern {
                    mode: Mode::Avoid,
                    ..
                }
            )
        {
            if let Some(o) = witness(&p, c) {
                write!(out, "\twitness {o}")?;
            }
        }
        writeln!(out)?;
    }
    Ok(if satisfied { 0 } else { 1 })
}
