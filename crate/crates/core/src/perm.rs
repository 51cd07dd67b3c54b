//! One-indexed permutations, order isomorphism and occurrence index vectors.
//!
//! A [`Permutation`] of length `n` is stored as its image list
//! `σ(1) … σ(n)`. Accessors take one-indexed positions so that code in the
//! matchers reads like the usual notation. The padded view extends a
//! permutation with `σ(0) = 0` and `σ(n+1) = n+1`, which is how the
//! boundary rows and columns of mesh and bivincular patterns are expressed.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("not a bijection onto 1..n: {0}")]
    NotABijection(String),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("occurrence indices must be strictly increasing and at least 1")]
    BadOccurrence,
    #[error("cannot parse permutation: {0}")]
    Parse(String),
}

/// A bijective arrangement of `{1, …, n}` with `n ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// Validates `values` as a bijection onto `1..=values.len()`.
    pub fn new(values: Vec<usize>) -> Result<Self, PermError> {
        let n = values.len();
        if n == 0 {
            return Err(PermError::NotABijection("empty permutation".into()));
        }
        let mut seen = vec![false; n + 1];
        for &v in &values {
            if v == 0 || v > n {
                return Err(PermError::NotABijection(format!(
                    "value {v} outside 1..{n}"
                )));
            }
            if seen[v] {
                return Err(PermError::NotABijection(format!("duplicate value {v}")));
            }
            seen[v] = true;
        }
        Ok(Self { images: values })
    }

    /// Same as [`Permutation::new`] but for signed input, as read from model files.
    pub fn from_signed(values: &[i64]) -> Result<Self, PermError> {
        let mut out = Vec::with_capacity(values.len());
        for &v in values {
            if v < 1 {
                return Err(PermError::NotABijection(format!(
                    "value {v} outside 1..{}",
                    values.len()
                )));
            }
            out.push(v as usize);
        }
        Self::new(out)
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "identity of length 0");
        Self {
            images: (1..=n).collect(),
        }
    }

    /// Internal constructor for values already known to be a bijection.
    pub(crate) fn from_vec_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Self::new(images.clone()).is_ok());
        Self { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// `σ(i)` for `1 ≤ i ≤ n`.
    #[inline]
    pub fn at(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn padded(&self) -> PaddedView<'_> {
        PaddedView { base: self }
    }

    /// The permutation `q` with `q(σ(i)) = i`.
    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Self { images: inv }
    }

    /// Lexicographic successor, or `None` for the decreasing permutation.
    pub fn next_lex(&self) -> Option<Self> {
        let mut a = self.images.clone();
        let n = a.len();
        if n < 2 {
            return None;
        }
        let mut i = n - 1;
        while i > 0 && a[i - 1] > a[i] {
            i -= 1;
        }
        if i == 0 {
            return None;
        }
        let mut j = n - 1;
        while a[j] < a[i - 1] {
            j -= 1;
        }
        a.swap(i - 1, j);
        a[i..].reverse();
        Some(Self { images: a })
    }

    /// Iterates over all of `S_n` in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        std::iter::successors(Some(Self::identity(n)), |p| p.next_lex())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.images {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    /// Accepts whitespace- or comma-separated values (`"5 2 1 6 3 4"`), or a
    /// bare digit string (`"521634"`) when every value is a single digit.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tokens: Vec<&str> = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect();
        let values: Result<Vec<usize>, _> = if tokens.len() == 1 && tokens[0].len() > 1 {
            tokens[0]
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or(c))
                .collect::<Result<Vec<_>, char>>()
                .map_err(|c| PermError::Parse(format!("unexpected character {c:?}")))
        } else {
            tokens
                .iter()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| PermError::Parse(format!("not a positive integer: {t:?}")))
                })
                .collect()
        };
        Self::new(values?)
    }
}

/// Read-only view of a permutation with the boundary points `(0,0)` and `(n+1,n+1)`.
#[derive(Debug, Clone, Copy)]
pub struct PaddedView<'a> {
    base: &'a Permutation,
}

impl PaddedView<'_> {
    /// `σ(i)` for `0 ≤ i ≤ n+1`.
    #[inline]
    pub fn get(&self, i: usize) -> usize {
        let n = self.base.len();
        if i == 0 {
            0
        } else if i == n + 1 {
            n + 1
        } else {
            self.base.at(i)
        }
    }
}

/// Strictly increasing one-indexed positions `i_1 < … < i_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occurrence {
    indices: Vec<usize>,
}

impl Occurrence {
    pub fn new(indices: Vec<usize>) -> Result<Self, PermError> {
        if indices.first().is_some_and(|&i| i == 0) || indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(PermError::BadOccurrence);
        }
        Ok(Self { indices })
    }

    pub(crate) fn from_vec_unchecked(indices: Vec<usize>) -> Self {
        Self { indices }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

impl fmt::Display for Occurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (n, i) in self.indices.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str(")")
    }
}

/// True iff `a` and `b` compare identically at every index pair.
pub fn order_isomorphic<T: Ord>(a: &[T], b: &[T]) -> Result<bool, PermError> {
    if a.len() != b.len() {
        return Err(PermError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if (a[i] < a[j]) != (b[i] < b[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The unique permutation order isomorphic to a list of distinct values.
pub fn flatten<T: Ord>(values: &[T]) -> Result<Permutation, PermError> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&x, &y| values[x].cmp(&values[y]));
    if order.windows(2).any(|w| values[w[0]] == values[w[1]]) {
        return Err(PermError::NotABijection("repeated value".into()));
    }
    let mut images = vec![0; values.len()];
    for (rank, &pos) in order.iter().enumerate() {
        images[pos] = rank + 1;
    }
    Permutation::new(images)
}
