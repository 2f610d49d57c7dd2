//! Breadth-first search over the edit graph of a metric, used as an independent reference
//! for the dynamic-programming kernels.

use std::collections::{HashMap, VecDeque};

use crate::metric::MetricId;
use crate::word::Letter;

/// Result of a bounded search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleOutcome {
    Exact(u64),
    /// no edit sequence of cost at most the budget exists
    Exceeds(u64),
}

/// Single-edit successors of `w` with their cost. Words never grow beyond `max_len`.
fn neighbours(m: MetricId, w: &[Letter], sigma: u32, max_len: usize) -> Vec<(Vec<Letter>, u64)> {
    let n = w.len();
    let mut out = Vec::new();
    let subst = |out: &mut Vec<(Vec<Letter>, u64)>, cost| {
        for i in 0..n {
            for c in 0..sigma {
                if Letter(c) != w[i] {
                    let mut x = w.to_vec();
                    x[i] = Letter(c);
                    out.push((x, cost));
                }
            }
        }
    };
    let indel = |out: &mut Vec<(Vec<Letter>, u64)>| {
        for i in 0..n {
            let mut x = w.to_vec();
            x.remove(i);
            out.push((x, 1));
        }
        if n < max_len {
            for i in 0..=n {
                for c in 0..sigma {
                    let mut x = w.to_vec();
                    x.insert(i, Letter(c));
                    out.push((x, 1));
                }
            }
        }
    };
    let swaps = |out: &mut Vec<(Vec<Letter>, u64)>, cost| {
        for i in 1..n {
            if w[i - 1] != w[i] {
                let mut x = w.to_vec();
                x.swap(i - 1, i);
                out.push((x, cost));
            }
        }
    };
    match m {
        MetricId::Hamming => subst(&mut out, 1),
        MetricId::Transposition => swaps(&mut out, 1),
        MetricId::Conjugacy => {
            if n > 0 {
                out.push(([&w[1..], &w[..1]].concat(), 1));
                out.push(([&w[n - 1..], &w[..n - 1]].concat(), 1));
            }
        }
        MetricId::Levenshtein => {
            subst(&mut out, 1);
            indel(&mut out);
        }
        MetricId::Lcs => indel(&mut out),
        MetricId::DamerauLevenshtein => {
            subst(&mut out, 1);
            indel(&mut out);
            swaps(&mut out, 1);
        }
        MetricId::Length => {
            subst(&mut out, 0);
            indel(&mut out);
        }
        MetricId::Discrete => {}
    }
    out
}

/// Distances from `u` to every word reachable within `budget`, over letters `0..sigma`,
/// never visiting words longer than `max_len`.
pub fn oracle_ball(m: MetricId, u: &[Letter], budget: u64, sigma: u32, max_len: usize) -> HashMap<Vec<Letter>, u64> {
    let mut dist: HashMap<Vec<Letter>, u64> = HashMap::new();
    let mut queue = VecDeque::new();
    dist.insert(u.to_vec(), 0);
    queue.push_back(u.to_vec());
    // 0-1 breadth-first search; zero-cost edges only occur for the length metric
    while let Some(w) = queue.pop_front() {
        let d = dist[&w];
        for (x, cost) in neighbours(m, &w, sigma, max_len) {
            let nd = d + cost;
            if nd > budget {
                continue;
            }
            if dist.get(&x).is_none_or(|&old| nd < old) {
                dist.insert(x.clone(), nd);
                if cost == 0 {
                    queue.push_front(x);
                } else {
                    queue.push_back(x);
                }
            }
        }
    }
    dist
}

/// Exact distance from `u` to `v` when it is at most `budget`. Intermediate words are at most
/// one letter longer than the longer of the two.
pub fn oracle_distance(m: MetricId, u: &[Letter], v: &[Letter], budget: u64, sigma: u32) -> OracleOutcome {
    let sigma = u.iter().chain(v).map(|l| l.0 + 1).max().unwrap_or(0).max(sigma);
    let max_len = u.len().max(v.len()) + 1;
    match oracle_ball(m, u, budget, sigma, max_len).get(v) {
        Some(&d) => OracleOutcome::Exact(d),
        None => OracleOutcome::Exceeds(budget),
    }
}
