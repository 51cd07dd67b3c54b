//! The six pattern variants and their containment test.
//!
//! Every variant is matched by one backtracking search over index vectors
//! `i_1 < … < i_k`. Index adjacencies restrict the candidate range while the
//! vector is being built, order isomorphism is checked incrementally against
//! the nearest already-placed pattern values, and value adjacencies and
//! shaded regions are checked once the vector is complete. Positions and
//! values outside the target use the padded convention `i_0 = 0`,
//! `i_{k+1} = n+1`, `σ(0) = 0`, `σ(n+1) = n+1`, `π⁻¹(0) = 0`,
//! `π⁻¹(k+1) = k+1`.
//!
//! Shaded regions are tested with strict bounds on both sides. Since all
//! values are distinct and the padded boundary positions never lie strictly
//! between two consecutive occurrence indices, this is equivalent to the
//! non-strict comparison against the region's corner values.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::ControlFlow;

use thiserror::Error;

use crate::perm::{Occurrence, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("{what} {value} outside 0..={k}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        k: usize,
    },
    #[error("occurrence {occ} does not fit a target of length {n} and pattern of length {k}")]
    IndexOutOfRange { occ: String, n: usize, k: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Contain,
    Avoid,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Contain => "contain",
            Mode::Avoid => "avoid",
        }
    }
}

/// Payload of a pattern beyond its base permutation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Variant {
    Classic,
    Vincular {
        adjacencies: BTreeSet<usize>,
    },
    Bivincular {
        index_adjacencies: BTreeSet<usize>,
        value_adjacencies: BTreeSet<usize>,
    },
    Mesh {
        regions: BTreeSet<(usize, usize)>,
    },
    /// Mesh with `R = [1,k−1]²`.
    Boxed,
    /// Vincular with `A = {1,…,k−1}`.
    Consecutive,
}

/// A pattern: base permutation `π` of length `k` plus a variant payload.
///
/// Payload coordinates are validated against `0..=k` on construction and
/// stored as sets, so duplicates in the input collapse.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PatternSpec {
    base: Permutation,
    variant: Variant,
}

fn check_range<'a>(
    what: &'static str,
    k: usize,
    items: impl IntoIterator<Item = &'a usize>,
) -> Result<(), PatternError> {
    for &value in items {
        if value > k {
            return Err(PatternError::OutOfRange { what, value, k });
        }
    }
    Ok(())
}

impl PatternSpec {
    pub fn classic(base: Permutation) -> Self {
        Self {
            base,
            variant: Variant::Classic,
        }
    }

    pub fn vincular(
        base: Permutation,
        adjacencies: impl IntoIterator<Item = usize>,
    ) -> Result<Self, PatternError> {
        let adjacencies: BTreeSet<usize> = adjacencies.into_iter().collect();
        check_range("adjacency", base.len(), &adjacencies)?;
        Ok(Self {
            base,
            variant: Variant::Vincular { adjacencies },
        })
    }

    pub fn bivincular(
        base: Permutation,
        index_adjacencies: impl IntoIterator<Item = usize>,
        value_adjacencies: impl IntoIterator<Item = usize>,
    ) -> Result<Self, PatternError> {
        let index_adjacencies: BTreeSet<usize> = index_adjacencies.into_iter().collect();
        let value_adjacencies: BTreeSet<usize> = value_adjacencies.into_iter().collect();
        check_range("index adjacency", base.len(), &index_adjacencies)?;
        check_range("value adjacency", base.len(), &value_adjacencies)?;
        Ok(Self {
            base,
            variant: Variant::Bivincular {
                index_adjacencies,
                value_adjacencies,
            },
        })
    }

    pub fn mesh(
        base: Permutation,
        regions: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, PatternError> {
        let regions: BTreeSet<(usize, usize)> = regions.into_iter().collect();
        let k = base.len();
        for &(x, y) in &regions {
            check_range("region coordinate", k, [&x, &y])?;
        }
        Ok(Self {
            base,
            variant: Variant::Mesh { regions },
        })
    }

    pub fn boxed(base: Permutation) -> Self {
        Self {
            base,
            variant: Variant::Boxed,
        }
    }

    pub fn consecutive(base: Permutation) -> Self {
        Self {
            base,
            variant: Variant::Consecutive,
        }
    }

    pub fn base(&self) -> &Permutation {
        &self.base
    }

    pub fn variant(&self) -> &Variant {
        &self.variant
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Variant tag as used in model files.
    pub fn kind_name(&self) -> &'static str {
        match self.variant {
            Variant::Classic => "classic",
            Variant::Vincular { .. } => "vincular",
            Variant::Bivincular { .. } => "bivincular",
            Variant::Mesh { .. } => "mesh",
            Variant::Boxed => "boxed",
            Variant::Consecutive => "consecutive",
        }
    }

    /// Index adjacencies in effect, including the implied ones of consecutive patterns.
    fn effective_index_adjacencies(&self) -> BTreeSet<usize> {
        let k = self.len();
        match &self.variant {
            Variant::Vincular { adjacencies } => adjacencies.clone(),
            Variant::Bivincular {
                index_adjacencies, ..
            } => index_adjacencies.clone(),
            Variant::Consecutive => (1..k).collect(),
            _ => BTreeSet::new(),
        }
    }

    /// Whether an occurrence found inside a prefix of the target stays an
    /// occurrence in every completion of that prefix.
    ///
    /// Holds for classic and consecutive patterns, and for vincular and
    /// bivincular patterns unless they anchor the last entry to position n
    /// or the largest entry to value n.
    /// Shaded regions can be filled by later entries, so mesh-family
    /// patterns never qualify.
    pub fn is_prefix_monotone(&self) -> bool {
        match &self.variant {
            Variant::Classic | Variant::Consecutive => true,
            Variant::Vincular { adjacencies } => !adjacencies.contains(&self.len()),
            Variant::Bivincular {
                index_adjacencies,
                value_adjacencies,
            } => {
                !index_adjacencies.contains(&self.len()) && !value_adjacencies.contains(&self.len())
            }
            Variant::Mesh { .. } | Variant::Boxed => false,
        }
    }
}

impl fmt::Display for PatternSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base: String = self
            .base
            .images()
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let set = |s: &BTreeSet<usize>| {
            s.iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        match &self.variant {
            Variant::Classic => write!(f, "classic [{base}]"),
            Variant::Boxed => write!(f, "boxed [{base}]"),
            Variant::Consecutive => write!(f, "consecutive [{base}]"),
            Variant::Vincular { adjacencies } => {
                write!(f, "vincular ([{base}], {{{}}})", set(adjacencies))
            }
            Variant::Bivincular {
                index_adjacencies,
                value_adjacencies,
            } => write!(
                f,
                "bivincular ([{base}], {{{}}}, {{{}}})",
                set(index_adjacencies),
                set(value_adjacencies)
            ),
            Variant::Mesh { regions } => {
                let r: Vec<String> = regions.iter().map(|(x, y)| format!("({x},{y})")).collect();
                write!(f, "mesh ([{base}], {{{}}})", r.join(","))
            }
        }
    }
}

/// Compiled form of a [`PatternSpec`] used by the search.
#[derive(Debug, Clone)]
pub(crate) struct Matcher {
    k: usize,
    /// Padded inverse of the pattern: `inv[0] = 0`, `inv[k+1] = k+1`.
    inv: Vec<usize>,
    /// For pattern position `t`, the earlier position holding the largest smaller value.
    below: Vec<Option<usize>>,
    /// For pattern position `t`, the earlier position holding the smallest larger value.
    above: Vec<Option<usize>>,
    /// `adjacent[a]` iff `a ∈ A`.
    adjacent: Vec<bool>,
    value_adjacencies: Vec<usize>,
    regions: Vec<(usize, usize)>,
}

impl Matcher {
    pub(crate) fn new(pattern: &PatternSpec) -> Self {
        let k = pattern.len();
        let mut base = vec![0; k + 1];
        base[1..].copy_from_slice(pattern.base().images());
        let mut inv = vec![0; k + 2];
        inv[k + 1] = k + 1;
        for t in 1..=k {
            inv[base[t]] = t;
        }
        let mut below = vec![None; k + 1];
        let mut above = vec![None; k + 1];
        for t in 1..=k {
            for s in 1..t {
                if base[s] < base[t] && below[t].is_none_or(|b: usize| base[b] < base[s]) {
                    below[t] = Some(s);
                }
                if base[s] > base[t] && above[t].is_none_or(|a: usize| base[a] > base[s]) {
                    above[t] = Some(s);
                }
            }
        }
        let mut adjacent = vec![false; k + 1];
        for a in pattern.effective_index_adjacencies() {
            adjacent[a] = true;
        }
        let value_adjacencies = match pattern.variant() {
            Variant::Bivincular {
                value_adjacencies, ..
            } => value_adjacencies.iter().copied().collect(),
            _ => Vec::new(),
        };
        let regions = match pattern.variant() {
            Variant::Mesh { regions } => regions.iter().copied().collect(),
            Variant::Boxed => (1..k).flat_map(|x| (1..k).map(move |y| (x, y))).collect(),
            _ => Vec::new(),
        };
        Self {
            k,
            inv,
            below,
            above,
            adjacent,
            value_adjacencies,
            regions,
        }
    }

    /// Visits every occurrence in `values` (treated as a target of length
    /// `values.len()`), in lexicographic order of index vectors. With
    /// `last = Some(l)` only occurrences with `i_k = l` are visited.
    pub(crate) fn search<F>(
        &self,
        values: &[usize],
        last: Option<usize>,
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let n = values.len();
        if self.k > n {
            return ControlFlow::Continue(());
        }
        if last.is_some_and(|l| l < self.k || l > n) {
            return ControlFlow::Continue(());
        }
        let mut ix = vec![0; self.k + 2];
        ix[self.k + 1] = n + 1;
        self.extend(values, last, 1, &mut ix, visit)
    }

    fn extend<F>(
        &self,
        values: &[usize],
        last: Option<usize>,
        t: usize,
        ix: &mut [usize],
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let k = self.k;
        if t > k {
            if self.complete_ok(values, ix) {
                return visit(&ix[1..=k]);
            }
            return ControlFlow::Continue(());
        }
        let upper = last.unwrap_or(values.len());
        let mut lo = ix[t - 1] + 1;
        let mut hi = upper - (k - t);
        if self.adjacent[t - 1] {
            hi = hi.min(lo);
        }
        if t == k && last.is_some() {
            lo = lo.max(upper);
        }
        for i in lo..=hi {
            let v = values[i - 1];
            if let Some(s) = self.below[t] {
                if values[ix[s] - 1] > v {
                    continue;
                }
            }
            if let Some(s) = self.above[t] {
                if values[ix[s] - 1] < v {
                    continue;
                }
            }
            ix[t] = i;
            self.extend(values, last, t + 1, ix, visit)?;
        }
        ControlFlow::Continue(())
    }

    fn complete_ok(&self, values: &[usize], ix: &[usize]) -> bool {
        let n = values.len();
        let k = self.k;
        let pad = |i: usize| -> usize {
            if i == 0 {
                0
            } else if i == n + 1 {
                n + 1
            } else {
                values[i - 1]
            }
        };
        if self.adjacent[k] && ix[k] != n {
            return false;
        }
        for &b in &self.value_adjacencies {
            if pad(ix[self.inv[b]]) + 1 != pad(ix[self.inv[b + 1]]) {
                return false;
            }
        }
        for &(x, y) in &self.regions {
            let low = pad(ix[self.inv[y]]);
            let high = pad(ix[self.inv[y + 1]]);
            if (ix[x] + 1..ix[x + 1]).any(|i| {
                let v = values[i - 1];
                low < v && v < high
            }) {
                return false;
            }
        }
        true
    }

    pub(crate) fn exists(&self, values: &[usize]) -> bool {
        self.search(values, None, &mut |_| ControlFlow::Break(()))
            .is_break()
    }

    /// Whether an occurrence uses the last entry of `values` as its last entry.
    pub(crate) fn exists_ending_at_last(&self, values: &[usize]) -> bool {
        if values.is_empty() {
            return false;
        }
        self.search(values, Some(values.len()), &mut |_| ControlFlow::Break(()))
            .is_break()
    }
}

/// True iff the subsequence of `target` at `occ` is order isomorphic to `base`.
pub fn classic_match_at(
    target: &Permutation,
    base: &Permutation,
    occ: &Occurrence,
) -> Result<bool, PatternError> {
    let idx = occ.indices();
    if idx.len() != base.len() || idx.last().is_some_and(|&i| i > target.len()) {
        return Err(PatternError::IndexOutOfRange {
            occ: occ.to_string(),
            n: target.len(),
            k: base.len(),
        });
    }
    let sub: Vec<usize> = idx.iter().map(|&i| target.at(i)).collect();
    Ok(crate::perm::order_isomorphic(&sub, base.images()).expect("lengths checked"))
}

pub fn contains(target: &Permutation, pattern: &PatternSpec) -> bool {
    Matcher::new(pattern).exists(target.images())
}

pub fn avoids(target: &Permutation, pattern: &PatternSpec) -> bool {
    !contains(target, pattern)
}

/// All occurrences satisfying the pattern's full condition, sorted lexicographically.
pub fn find_occurrences(target: &Permutation, pattern: &PatternSpec) -> Vec<Occurrence> {
    let mut out = Vec::new();
    let _ = Matcher::new(pattern).search(target.images(), None, &mut |ix| {
        out.push(Occurrence::from_vec_unchecked(ix.to_vec()));
        ControlFlow::Continue(())
    });
    out
}

/// The lexicographically first occurrence, if any.
pub fn first_occurrence(target: &Permutation, pattern: &PatternSpec) -> Option<Occurrence> {
    let mut found = None;
    let _ = Matcher::new(pattern).search(target.images(), None, &mut |ix| {
        found = Some(Occurrence::from_vec_unchecked(ix.to_vec()));
        ControlFlow::Break(())
    });
    found
}

/// Rewrites any variant as an equivalent mesh pattern.
///
/// Index adjacencies become fully shaded columns, value adjacencies fully
/// shaded rows.
pub fn to_mesh(pattern: &PatternSpec) -> PatternSpec {
    let k = pattern.len();
    let columns = |cols: &BTreeSet<usize>| -> Vec<(usize, usize)> {
        cols.iter()
            .flat_map(|&a| (0..=k).map(move |y| (a, y)))
            .collect()
    };
    let regions: BTreeSet<(usize, usize)> = match pattern.variant() {
        Variant::Classic => BTreeSet::new(),
        Variant::Mesh { regions } => regions.clone(),
        Variant::Vincular { adjacencies } => columns(adjacencies).into_iter().collect(),
        Variant::Consecutive => columns(&(1..k).collect()).into_iter().collect(),
        Variant::Bivincular {
            index_adjacencies,
            value_adjacencies,
        } => {
            let mut r: BTreeSet<_> = columns(index_adjacencies).into_iter().collect();
            for &b in value_adjacencies {
                r.extend((0..=k).map(|x| (x, b)));
            }
            r
        }
        Variant::Boxed => (1..k).flat_map(|x| (1..k).map(move |y| (x, y))).collect(),
    };
    PatternSpec {
        base: pattern.base().clone(),
        variant: Variant::Mesh { regions },
    }
}
