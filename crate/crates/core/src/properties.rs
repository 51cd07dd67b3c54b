//! Structural properties of complete permutations.

use std::fmt;
use std::str::FromStr;

use crate::perm::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PropertyKind {
    Simple,
    PlusDecomposable,
    MinusDecomposable,
    BlockwiseSimple,
    Derangement,
    Nonderangement,
    Involution,
    Parity,
}

impl PropertyKind {
    pub const ALL: [PropertyKind; 8] = [
        PropertyKind::Simple,
        PropertyKind::PlusDecomposable,
        PropertyKind::MinusDecomposable,
        PropertyKind::BlockwiseSimple,
        PropertyKind::Derangement,
        PropertyKind::Nonderangement,
        PropertyKind::Involution,
        PropertyKind::Parity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PropertyKind::Simple => "simple",
            PropertyKind::PlusDecomposable => "plus_decomposable",
            PropertyKind::MinusDecomposable => "minus_decomposable",
            PropertyKind::BlockwiseSimple => "blockwise_simple",
            PropertyKind::Derangement => "derangement",
            PropertyKind::Nonderangement => "nonderangement",
            PropertyKind::Involution => "involution",
            PropertyKind::Parity => "parity",
        }
    }
}

impl fmt::Display for PropertyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PropertyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown property {s:?}"))
    }
}

/// Contiguous positions `start..=end` whose values are also contiguous.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Interval {
    pub start: usize,
    pub end: usize,
}

/// Every interval of length at least 2 and less than `n`, sorted by `(start, end)`.
pub fn proper_intervals(p: &Permutation) -> Vec<Interval> {
    let n = p.len();
    let mut out = Vec::new();
    for start in 1..=n {
        let (mut lo, mut hi) = (p.at(start), p.at(start));
        for end in start + 1..=n {
            lo = lo.min(p.at(end));
            hi = hi.max(p.at(end));
            let len = end - start + 1;
            if len < n && hi - lo + 1 == len {
                out.push(Interval { start, end });
            }
        }
    }
    out
}

fn prefix_extrema(p: &Permutation) -> (Vec<usize>, Vec<usize>) {
    let mut max = Vec::with_capacity(p.len());
    let mut min = Vec::with_capacity(p.len());
    for &v in p.images() {
        max.push(max.last().map_or(v, |&m: &usize| m.max(v)));
        min.push(min.last().map_or(v, |&m: &usize| m.min(v)));
    }
    (min, max)
}

/// Some split `sep` has every prefix value below every suffix value.
fn plus_decomposable(p: &Permutation) -> bool {
    // prefix max equals sep exactly when the first sep values are {1..sep}
    let (_, max) = prefix_extrema(p);
    (1..p.len()).any(|sep| max[sep - 1] == sep)
}

fn minus_decomposable(p: &Permutation) -> bool {
    let n = p.len();
    let (min, _) = prefix_extrema(p);
    (1..n).any(|sep| min[sep - 1] == n - sep + 1)
}

/// No interval `[start, end]` (the full range included) splits at a middle
/// point into two blocks arranged as 12 or 21.
fn blockwise_simple(p: &Permutation) -> bool {
    let n = p.len();
    for start in 1..=n {
        let (mut lo, mut hi) = (p.at(start), p.at(start));
        for end in start + 1..=n {
            lo = lo.min(p.at(end));
            hi = hi.max(p.at(end));
            if hi - lo != end - start {
                continue;
            }
            let (mut left_lo, mut left_hi) = (usize::MAX, 0);
            for middle in start..end {
                left_lo = left_lo.min(p.at(middle));
                left_hi = left_hi.max(p.at(middle));
                let right = (middle + 1..=end).map(|i| p.at(i));
                let right_lo = right.clone().min().unwrap();
                let right_hi = right.max().unwrap();
                if left_hi < right_lo || left_lo > right_hi {
                    return false;
                }
            }
        }
    }
    true
}

pub fn check_property(p: &Permutation, kind: PropertyKind) -> bool {
    let n = p.len();
    match kind {
        PropertyKind::Simple => proper_intervals(p).is_empty(),
        PropertyKind::PlusDecomposable => plus_decomposable(p),
        PropertyKind::MinusDecomposable => minus_decomposable(p),
        PropertyKind::BlockwiseSimple => blockwise_simple(p),
        PropertyKind::Derangement => (1..=n).all(|i| p.at(i) != i),
        PropertyKind::Nonderangement => (1..=n).any(|i| p.at(i) == i),
        PropertyKind::Involution => (1..=n).all(|i| p.at(p.at(i)) == i),
        PropertyKind::Parity => (1..=n).all(|i| p.at(i) % 2 == i % 2),
    }
}
