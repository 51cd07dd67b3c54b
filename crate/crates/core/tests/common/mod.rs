//! Shared test helpers: a literal-definition pattern checker and random
//! model generators.

#![allow(dead_code)]

use std::collections::BTreeSet;

use permforge_core::{
    Comparator, Constraint, Model, PatternSpec, Permutation, PropertyKind, StatisticKind,
    StatisticPredicate, Variant,
};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn perm(s: &str) -> Permutation {
    s.parse().unwrap()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// Occurrence test written straight from the definitions: every index
/// vector, every pair compared, padded sequences built explicitly.
pub fn naive_occurrences(target: &Permutation, pattern: &PatternSpec) -> Vec<Vec<usize>> {
    let n = target.len();
    let k = pattern.len();
    if k > n {
        return Vec::new();
    }
    let pi = pattern.base().images();
    let (adj, vadj, regions): (BTreeSet<usize>, BTreeSet<usize>, BTreeSet<(usize, usize)>) =
        match pattern.variant() {
            Variant::Classic => Default::default(),
            Variant::Vincular { adjacencies } => {
                (adjacencies.clone(), Default::default(), Default::default())
            }
            Variant::Bivincular {
                index_adjacencies,
                value_adjacencies,
            } => (
                index_adjacencies.clone(),
                value_adjacencies.clone(),
                Default::default(),
            ),
            Variant::Mesh { regions } => (Default::default(), Default::default(), regions.clone()),
            Variant::Boxed => (
                Default::default(),
                Default::default(),
                (1..k).flat_map(|x| (1..k).map(move |y| (x, y))).collect(),
            ),
            Variant::Consecutive => ((1..k).collect(), Default::default(), Default::default()),
        };
    let mut sigma = vec![0];
    sigma.extend_from_slice(target.images());
    sigma.push(n + 1);
    let mut pinv = vec![0; k + 2];
    for (i, &v) in pi.iter().enumerate() {
        pinv[v] = i + 1;
    }
    pinv[k + 1] = k + 1;

    let mut out = Vec::new();
    for ix in combinations(n, k) {
        let iso =
            (0..k).all(|a| (0..k).all(|b| (pi[a] <= pi[b]) == (sigma[ix[a]] <= sigma[ix[b]])));
        if !iso {
            continue;
        }
        let mut idx = vec![0];
        idx.extend_from_slice(&ix);
        idx.push(n + 1);
        if !adj.iter().all(|&a| idx[a + 1] == idx[a] + 1) {
            continue;
        }
        let mut j: Vec<usize> = ix.iter().map(|&i| sigma[i]).collect();
        j.sort();
        j.insert(0, 0);
        j.push(n + 1);
        if !vadj.iter().all(|&b| j[b + 1] == j[b] + 1) {
            continue;
        }
        let shaded_empty = regions.iter().all(|&(x, y)| {
            !(1..=n).any(|i| {
                idx[x] < i
                    && i < idx[x + 1]
                    && sigma[idx[pinv[y]]] < sigma[i]
                    && sigma[i] < sigma[idx[pinv[y + 1]]]
            })
        });
        if shaded_empty {
            out.push(ix);
        }
    }
    out
}

pub fn naive_contains(target: &Permutation, pattern: &PatternSpec) -> bool {
    !naive_occurrences(target, pattern).is_empty()
}

pub fn random_perm(rng: &mut StdRng, n: usize) -> Permutation {
    let mut v: Vec<usize> = (1..=n).collect();
    v.shuffle(rng);
    Permutation::new(v).unwrap()
}

fn random_subset(rng: &mut StdRng, k: usize, p: f64) -> Vec<usize> {
    (0..=k).filter(|_| rng.gen_bool(p)).collect()
}

pub fn random_pattern(rng: &mut StdRng, max_k: usize) -> PatternSpec {
    let k = rng.gen_range(1..=max_k);
    let base = random_perm(rng, k);
    match rng.gen_range(0..6) {
        0 => PatternSpec::classic(base),
        1 => PatternSpec::vincular(base, random_subset(rng, k, 0.3)).unwrap(),
        2 => {
            let a = random_subset(rng, k, 0.25);
            let b = random_subset(rng, k, 0.25);
            PatternSpec::bivincular(base, a, b).unwrap()
        }
        3 => {
            let cells = rng.gen_range(0..=4);
            let regions: Vec<(usize, usize)> = (0..cells)
                .map(|_| (rng.gen_range(0..=k), rng.gen_range(0..=k)))
                .collect();
            PatternSpec::mesh(base, regions).unwrap()
        }
        4 => PatternSpec::boxed(base),
        _ => PatternSpec::consecutive(base),
    }
}

const STATS: [StatisticKind; 5] = StatisticKind::ALL;

pub fn random_constraint(rng: &mut StdRng, n: usize) -> Constraint {
    match rng.gen_range(0..10) {
        0..=5 => {
            let pattern = random_pattern(rng, 4.min(n + 1));
            if rng.gen_bool(0.6) {
                Constraint::avoid(pattern)
            } else {
                Constraint::contain(pattern)
            }
        }
        6 | 7 => Constraint::Property {
            kind: *PropertyKind::ALL.choose(rng).unwrap(),
            negate: rng.gen_bool(0.3),
        },
        _ => {
            let terms: Vec<(i64, StatisticKind)> = (0..rng.gen_range(1..=2))
                .map(|_| (rng.gen_range(-2..=3), *STATS.choose(rng).unwrap()))
                .collect();
            let modulus = rng.gen_bool(0.2).then(|| rng.gen_range(2..=4));
            let op = if modulus.is_some() {
                *[Comparator::Eq, Comparator::Ne].choose(rng).unwrap()
            } else {
                *Comparator::ALL.choose(rng).unwrap()
            };
            let rhs = match modulus {
                Some(m) => rng.gen_range(0..m),
                None => rng.gen_range(-2..=(n * (n - 1) / 2) as i64 + 1),
            };
            Constraint::Statistic(StatisticPredicate::new(terms, op, rhs, modulus).unwrap())
        }
    }
}

/// A model of length `1..=max_len` with 1–4 constraints drawn from every kind.
pub fn random_model(rng: &mut StdRng, max_len: usize) -> Model {
    let n = rng.gen_range(1..=max_len);
    let count = rng.gen_range(1..=4);
    let constraints = (0..count).map(|_| random_constraint(rng, n)).collect();
    let emit = STATS
        .iter()
        .copied()
        .filter(|_| rng.gen_bool(0.2))
        .collect();
    Model::new(n, constraints, emit).unwrap()
}
