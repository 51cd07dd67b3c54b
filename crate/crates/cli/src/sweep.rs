//! Fixed-inversion sweeps over avoidance classes and the CSV they produce.

use std::io::{Read, Write};
use std::ops::RangeInclusive;

use anyhow::{bail, ensure, Context, Result};
use permforge_core::{
    solve, Comparator, Constraint, Model, PatternSpec, Permutation, SolveConfig, SolveMode,
    StatisticKind, StatisticPredicate,
};

use crate::oeis::ReferenceSequence;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepSpec {
    pub pattern: Permutation,
    pub n_range: RangeInclusive<usize>,
    pub k_range: RangeInclusive<u64>,
}

/// Parses `a..b` (inclusive) or a single value.
pub fn parse_range<T>(text: &str) -> Result<RangeInclusive<T>>
where
    T: std::str::FromStr + PartialOrd + Copy,
    T::Err: std::error::Error + Send + Sync + 'static,
{
    let (a, b) = match text.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (text, text),
    };
    let a: T = a
        .trim()
        .parse()
        .with_context(|| format!("bad range {text:?}"))?;
    let b: T = b
        .trim()
        .parse()
        .with_context(|| format!("bad range {text:?}"))?;
    ensure!(a <= b, "empty range {text:?}");
    Ok(a..=b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub n: usize,
    pub cells: Vec<u64>,
}

fn max_inversions(n: usize) -> u64 {
    (n * n.saturating_sub(1) / 2) as u64
}

/// Counts permutations of each length avoiding the pattern, one cell per inversion count.
pub fn run_sweep(spec: &SweepSpec, workers: usize, split_depth: usize) -> Result<Vec<SweepRow>> {
    ensure!(*spec.n_range.start() >= 1, "lengths start at 1");
    let avoid = Constraint::avoid(PatternSpec::classic(spec.pattern.clone()));
    let mut rows = Vec::new();
    for n in spec.n_range.clone() {
        let mut cells = Vec::new();
        for k in spec.k_range.clone() {
            if k > max_inversions(n) {
                cells.push(0);
                continue;
            }
            let rhs = i64::try_from(k).context("inversion count too large")?;
            let inv = StatisticPredicate::single(StatisticKind::Inversions, Comparator::Eq, rhs);
            let model = Model::new(n, vec![avoid.clone(), Constraint::Statistic(inv)], vec![])?;
            let config = SolveConfig {
                workers,
                split_depth: split_depth.min(n - 1),
                mode: SolveMode::Count,
                ..SolveConfig::default()
            };
            cells.push(solve(&model, &config)?.count);
        }
        rows.push(SweepRow { n, cells });
    }
    Ok(rows)
}

/// Header `n,<k…>,stable_k`; `stable_k` names the column on the diagonal n = k+2, if present.
pub fn write_csv<W: Write>(out: W, k_range: &RangeInclusive<u64>, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["n".to_string()];
    header.extend(k_range.clone().map(|k| k.to_string()));
    header.push("stable_k".into());
    w.write_record(&header)?;
    for row in rows {
        let mut record = vec![row.n.to_string()];
        record.extend(row.cells.iter().map(|c| c.to_string()));
        let diagonal = (row.n as u64)
            .checked_sub(2)
            .filter(|k| k_range.contains(k));
        record.push(diagonal.map(|k| k.to_string()).unwrap_or_default());
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

type Column = Vec<(usize, u64)>;

/// A sweep table read back from CSV: `(k, [(n, value)])` columns in file order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SweepTable {
    pub columns: Vec<(u64, Column)>,
}

pub fn read_csv<R: Read>(input: R) -> Result<SweepTable> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.clone();
    let n_at = headers
        .iter()
        .position(|h| h.trim() == "n")
        .context("missing `n` column")?;
    let mut columns: Vec<(usize, u64, Column)> = headers
        .iter()
        .enumerate()
        .filter_map(|(i, h)| h.trim().parse::<u64>().ok().map(|k| (i, k, Vec::new())))
        .collect();
    for (line, record) in r.records().enumerate() {
        let record = record?;
        let n: usize = record
            .get(n_at)
            .unwrap_or_default()
            .trim()
            .parse()
            .with_context(|| format!("row {}: bad n", line + 1))?;
        for (i, k, cells) in &mut columns {
            let text = record.get(*i).unwrap_or_default().trim();
            let v = text
                .parse()
                .with_context(|| format!("row {}: bad cell {text:?} for k={k}", line + 1))?;
            cells.push((n, v));
        }
    }
    Ok(SweepTable {
        columns: columns
            .into_iter()
            .map(|(_, k, cells)| (k, cells))
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnReport {
    pub k: u64,
    pub expected: u64,
    /// Cells with n ≥ k+2, in row order.
    pub observed: Vec<(usize, u64)>,
}

impl ColumnReport {
    pub fn matches(&self) -> bool {
        self.observed.iter().all(|&(_, v)| v == self.expected)
    }
}

/// Columns that have a reference term and at least one cell on or past the diagonal.
pub fn compare(table: &SweepTable, reference: &ReferenceSequence) -> Result<Vec<ColumnReport>> {
    let mut reports = Vec::new();
    for (k, cells) in &table.columns {
        let Some(&expected) = usize::try_from(*k)
            .ok()
            .and_then(|i| reference.terms.get(i))
        else {
            eprintln!("k={k}: no {} term, skipped", reference.name);
            continue;
        };
        let observed: Vec<(usize, u64)> = cells
            .iter()
            .copied()
            .filter(|&(n, _)| n as u64 >= k + 2)
            .collect();
        if observed.is_empty() {
            eprintln!("k={k}: no row with n >= {}, skipped", k + 2);
            continue;
        }
        reports.push(ColumnReport {
            k: *k,
            expected,
            observed,
        });
    }
    if reports.is_empty() {
        bail!("nothing to compare");
    }
    Ok(reports)
}
