//! Permutation statistics and linear predicates over them.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatError {
    #[error("malformed predicate: {0}")]
    MalformedPredicate(String),
    #[error("arithmetic overflow while evaluating predicate")]
    Overflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StatisticKind {
    Inversions,
    Descents,
    Ascents,
    Excedances,
    MajorIndex,
}

impl StatisticKind {
    pub const ALL: [StatisticKind; 5] = [
        StatisticKind::Inversions,
        StatisticKind::Descents,
        StatisticKind::Ascents,
        StatisticKind::Excedances,
        StatisticKind::MajorIndex,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StatisticKind::Inversions => "inversions",
            StatisticKind::Descents => "descents",
            StatisticKind::Ascents => "ascents",
            StatisticKind::Excedances => "excedances",
            StatisticKind::MajorIndex => "major_index",
        }
    }

    /// Largest value the statistic takes on `S_n`.
    pub fn max_value(self, n: usize) -> u64 {
        let n = n as u64;
        match self {
            StatisticKind::Inversions | StatisticKind::MajorIndex => n * n.saturating_sub(1) / 2,
            StatisticKind::Descents | StatisticKind::Ascents => n.saturating_sub(1),
            StatisticKind::Excedances => n.saturating_sub(1),
        }
    }
}

impl fmt::Display for StatisticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StatisticKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown statistic {s:?}"))
    }
}

pub fn statistic(p: &Permutation, kind: StatisticKind) -> u64 {
    let v = p.images();
    match kind {
        StatisticKind::Inversions => {
            let mut inv = 0;
            for i in 0..v.len() {
                inv += v[i + 1..].iter().filter(|&&w| w < v[i]).count() as u64;
            }
            inv
        }
        StatisticKind::Descents => v.windows(2).filter(|w| w[0] > w[1]).count() as u64,
        StatisticKind::Ascents => v.windows(2).filter(|w| w[0] < w[1]).count() as u64,
        StatisticKind::Excedances => (1..=v.len()).filter(|&i| v[i - 1] > i).count() as u64,
        StatisticKind::MajorIndex => v
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] > w[1])
            .map(|(i, _)| i as u64 + 1)
            .sum(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Comparator {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Comparator {
    pub const ALL: [Comparator; 6] = [
        Comparator::Eq,
        Comparator::Ne,
        Comparator::Lt,
        Comparator::Le,
        Comparator::Gt,
        Comparator::Ge,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Comparator::Eq => "eq",
            Comparator::Ne => "ne",
            Comparator::Lt => "lt",
            Comparator::Le => "le",
            Comparator::Gt => "gt",
            Comparator::Ge => "ge",
        }
    }

    fn holds(self, lhs: i128, rhs: i128) -> bool {
        match self {
            Comparator::Eq => lhs == rhs,
            Comparator::Ne => lhs != rhs,
            Comparator::Lt => lhs < rhs,
            Comparator::Le => lhs <= rhs,
            Comparator::Gt => lhs > rhs,
            Comparator::Ge => lhs >= rhs,
        }
    }
}

impl FromStr for Comparator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown comparator {s:?}"))
    }
}

/// `Σ coefficient·stat  <op>  rhs`, optionally comparing the residue modulo `modulus`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StatisticPredicate {
    terms: Vec<(i64, StatisticKind)>,
    comparator: Comparator,
    rhs: i64,
    modulus: Option<i64>,
}

impl StatisticPredicate {
    pub fn new(
        terms: Vec<(i64, StatisticKind)>,
        comparator: Comparator,
        rhs: i64,
        modulus: Option<i64>,
    ) -> Result<Self, StatError> {
        if terms.is_empty() {
            return Err(StatError::MalformedPredicate("no terms".into()));
        }
        if let Some(m) = modulus {
            if m < 2 {
                return Err(StatError::MalformedPredicate(format!(
                    "modulus {m} must be at least 2"
                )));
            }
            if !matches!(comparator, Comparator::Eq | Comparator::Ne) {
                return Err(StatError::MalformedPredicate(format!(
                    "comparator {} cannot be combined with a modulus",
                    comparator.as_str()
                )));
            }
        }
        Ok(Self {
            terms,
            comparator,
            rhs,
            modulus,
        })
    }

    /// Shorthand for `1·kind <op> rhs`.
    pub fn single(kind: StatisticKind, comparator: Comparator, rhs: i64) -> Self {
        Self::new(vec![(1, kind)], comparator, rhs, None).expect("single term is well formed")
    }

    pub fn terms(&self) -> &[(i64, StatisticKind)] {
        &self.terms
    }

    pub fn comparator(&self) -> Comparator {
        self.comparator
    }

    pub fn rhs(&self) -> i64 {
        self.rhs
    }

    pub fn modulus(&self) -> Option<i64> {
        self.modulus
    }

    fn accepts(&self, value: i128) -> bool {
        let lhs = match self.modulus {
            Some(m) => value.rem_euclid(m as i128),
            None => value,
        };
        self.comparator.holds(lhs, self.rhs as i128)
    }

    /// Sound range test: false only if no value in `lo..=hi` satisfies the predicate.
    pub(crate) fn admits_range(&self, lo: i128, hi: i128) -> bool {
        if lo > hi {
            return false;
        }
        let rhs = self.rhs as i128;
        match self.modulus {
            None => match self.comparator {
                Comparator::Eq => lo <= rhs && rhs <= hi,
                Comparator::Ne => !(lo == hi && lo == rhs),
                Comparator::Lt => lo < rhs,
                Comparator::Le => lo <= rhs,
                Comparator::Gt => hi > rhs,
                Comparator::Ge => hi >= rhs,
            },
            Some(m) => {
                let m = m as i128;
                let span = hi - lo + 1;
                if span >= m {
                    // every residue is reachable
                    match self.comparator {
                        Comparator::Eq => 0 <= rhs && rhs < m,
                        _ => true,
                    }
                } else if span > 4096 {
                    true
                } else {
                    (lo..=hi).any(|v| self.accepts(v))
                }
            }
        }
    }

    /// Interval of the linear combination given a per-statistic interval.
    pub(crate) fn combine_ranges(
        &self,
        range: impl Fn(StatisticKind) -> (i64, i64),
    ) -> Option<(i128, i128)> {
        let (mut lo, mut hi) = (0i128, 0i128);
        for &(c, kind) in &self.terms {
            let (a, b) = range(kind);
            let (x, y) = (
                (c as i128).checked_mul(a as i128)?,
                (c as i128).checked_mul(b as i128)?,
            );
            lo = lo.checked_add(x.min(y))?;
            hi = hi.checked_add(x.max(y))?;
        }
        Some((lo, hi))
    }
}

impl fmt::Display for StatisticPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, (c, k)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*{k}")?;
        }
        if let Some(m) = self.modulus {
            write!(f, " mod {m}")?;
        }
        write!(f, " {} {}", self.comparator.as_str(), self.rhs)
    }
}

pub fn evaluate_predicate(p: &Permutation, pred: &StatisticPredicate) -> Result<bool, StatError> {
    let mut value: i128 = 0;
    for &(c, kind) in &pred.terms {
        let term = (c as i128)
            .checked_mul(statistic(p, kind) as i128)
            .ok_or(StatError::Overflow)?;
        value = value.checked_add(term).ok_or(StatError::Overflow)?;
    }
    Ok(pred.accepts(value))
}

/// Bounds on a statistic over all completions of `prefix` to a permutation of length `n`.
/// Exact when the prefix is complete.
pub(crate) fn prefix_range(
    kind: StatisticKind,
    prefix: &[usize],
    n: usize,
    used: &[bool],
) -> (i64, i64) {
    let m = prefix.len();
    let rest = (n - m) as i64;
    match kind {
        StatisticKind::Inversions => {
            // inversions with at least one entry in the prefix are already determined
            let mut fixed = 0i64;
            for i in 0..m {
                fixed += prefix[i + 1..].iter().filter(|&&w| w < prefix[i]).count() as i64;
                fixed += (1..prefix[i]).filter(|&u| !used[u]).count() as i64;
            }
            (fixed, fixed + rest * (rest - 1) / 2)
        }
        StatisticKind::Descents | StatisticKind::Ascents => {
            let want_descent = kind == StatisticKind::Descents;
            let fixed = prefix
                .windows(2)
                .filter(|w| (w[0] > w[1]) == want_descent)
                .count() as i64;
            let open = if m == 0 { n as i64 - 1 } else { rest };
            (fixed, fixed + open.max(0))
        }
        StatisticKind::MajorIndex => {
            let fixed: i64 = prefix
                .windows(2)
                .enumerate()
                .filter(|(_, w)| w[0] > w[1])
                .map(|(i, _)| i as i64 + 1)
                .sum();
            let open: i64 = (m.max(1)..n).map(|i| i as i64).sum();
            (fixed, fixed + open)
        }
        StatisticKind::Excedances => {
            let fixed = (1..=m).filter(|&i| prefix[i - 1] > i).count() as i64;
            let largest_free = (1..=n).rev().find(|&u| !used[u]).unwrap_or(0);
            let open = (largest_free.saturating_sub(1).min(n)).saturating_sub(m) as i64;
            (fixed, fixed + open)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use StatisticKind::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn golden_values() {
        let s = p("7164523");
        let got: Vec<u64> = [Inversions, Descents, Ascents, Excedances, MajorIndex]
            .iter()
            .map(|&k| statistic(&s, k))
            .collect();
        assert_eq!(got, vec![14, 3, 3, 2, 9]);

        let id = Permutation::identity(5);
        let got: Vec<u64> = StatisticKind::ALL
            .iter()
            .map(|&k| statistic(&id, k))
            .collect();
        assert_eq!(got, vec![0, 0, 4, 0, 0]);

        let rev = p("54321");
        assert_eq!(statistic(&rev, Inversions), 10);
        assert_eq!(statistic(&rev, Descents), 4);
        assert_eq!(statistic(&rev, Ascents), 0);
        assert_eq!(statistic(&rev, MajorIndex), 10);
    }

    #[test]
    fn predicate_examples() {
        let s = p("7164523");
        let des3 = StatisticPredicate::single(Descents, Comparator::Eq, 3);
        assert!(evaluate_predicate(&s, &des3).unwrap());
        let mod3 = StatisticPredicate::new(
            vec![(1, Descents), (1, Ascents)],
            Comparator::Eq,
            0,
            Some(3),
        )
        .unwrap();
        assert!(evaluate_predicate(&s, &mod3).unwrap());
        let inv1 = StatisticPredicate::single(Inversions, Comparator::Eq, 1);
        assert!(!evaluate_predicate(&Permutation::identity(4), &inv1).unwrap());
    }

    #[test]
    fn negative_residues_are_nonnegative() {
        // -1·des on 21 is -1, which is 2 mod 3
        let pred =
            StatisticPredicate::new(vec![(-1, Descents)], Comparator::Eq, 2, Some(3)).unwrap();
        assert!(evaluate_predicate(&p("21"), &pred).unwrap());
    }

    #[test]
    fn malformed_predicates() {
        assert!(StatisticPredicate::new(vec![], Comparator::Eq, 0, None).is_err());
        assert!(StatisticPredicate::new(vec![(1, Descents)], Comparator::Eq, 0, Some(1)).is_err());
        assert!(StatisticPredicate::new(vec![(1, Descents)], Comparator::Lt, 0, Some(3)).is_err());
        assert!(StatisticPredicate::new(vec![(1, Descents)], Comparator::Ne, 0, Some(3)).is_ok());
    }

    #[test]
    fn huge_coefficients_do_not_overflow() {
        let pred = StatisticPredicate::new(
            vec![(i64::MAX, Inversions), (i64::MAX, MajorIndex)],
            Comparator::Gt,
            0,
            None,
        )
        .unwrap();
        assert!(evaluate_predicate(&p("21"), &pred).unwrap());
    }

    #[test]
    fn exhaustive_invariants() {
        for n in 1..=8usize {
            let mut inv_hist = vec![0u64; n * n];
            let mut maj_hist = vec![0u64; n * n];
            for s in Permutation::all(n) {
                let inv = statistic(&s, Inversions);
                assert_eq!(
                    statistic(&s, Ascents) + statistic(&s, Descents),
                    n as u64 - 1
                );
                assert!(inv <= (n * (n - 1) / 2) as u64);
                assert_eq!(inv, statistic(&s.inverse(), Inversions));
                inv_hist[inv as usize] += 1;
                maj_hist[statistic(&s, MajorIndex) as usize] += 1;
            }
            assert_eq!(inv_hist, maj_hist, "Mahonian n={n}");
            assert_eq!(
                inv_hist.iter().sum::<u64>(),
                (1..=n as u64).product::<u64>()
            );
        }
    }

    #[test]
    fn prefix_ranges_bracket_all_completions() {
        let n = 6;
        for s in Permutation::all(n) {
            for m in 0..=n {
                let prefix = &s.images()[..m];
                let mut used = vec![false; n + 1];
                for &v in prefix {
                    used[v] = true;
                }
                for kind in StatisticKind::ALL {
                    let (lo, hi) = prefix_range(kind, prefix, n, &used);
                    let v = statistic(&s, kind) as i64;
                    assert!(lo <= v && v <= hi, "{s} m={m} {kind}: {lo}..{hi} vs {v}");
                    if m == n {
                        assert_eq!(lo, hi);
                    }
                }
            }
        }
    }

    #[test]
    fn range_admission_matches_pointwise() {
        for c in Comparator::ALL {
            for rhs in -3..8 {
                let plain = StatisticPredicate::new(vec![(1, Inversions)], c, rhs, None).unwrap();
                for lo in -4..6i128 {
                    for hi in lo..8 {
                        let any = (lo..=hi).any(|v| plain.accepts(v));
                        assert_eq!(plain.admits_range(lo, hi), any, "{c:?} {rhs} {lo}..{hi}");
                    }
                }
            }
        }
        for c in [Comparator::Eq, Comparator::Ne] {
            for m in 2..5 {
                for rhs in -1..6 {
                    let pred =
                        StatisticPredicate::new(vec![(1, Inversions)], c, rhs, Some(m)).unwrap();
                    for lo in -6..6i128 {
                        for hi in lo..10 {
                            let any = (lo..=hi).any(|v| pred.accepts(v));
                            assert_eq!(
                                pred.admits_range(lo, hi),
                                any,
                                "{c:?} mod {m} {rhs} {lo}..{hi}"
                            );
                        }
                    }
                }
            }
        }
    }
}
