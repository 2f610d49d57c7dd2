//! Word metrics and their dynamic-programming kernels.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::word::{Alphabet, ExtendedNat, Letter};

/// The supported word metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MetricId {
    /// substitutions
    Hamming,
    /// adjacent swaps
    Transposition,
    /// cyclic shifts by one letter
    Conjugacy,
    /// insertions, deletions, substitutions
    Levenshtein,
    /// insertions, deletions
    Lcs,
    /// insertions, deletions, substitutions, adjacent swaps
    DamerauLevenshtein,
    /// difference of lengths (a pseudo-metric)
    Length,
    /// zero on equal words, infinite otherwise
    Discrete,
}

impl MetricId {
    pub const ALL: [MetricId; 8] = [
        MetricId::Hamming,
        MetricId::Transposition,
        MetricId::Conjugacy,
        MetricId::Levenshtein,
        MetricId::Lcs,
        MetricId::DamerauLevenshtein,
        MetricId::Length,
        MetricId::Discrete,
    ];

    /// Metrics defined by a set of unit edit operations.
    pub const EDIT: [MetricId; 6] = [
        MetricId::Hamming,
        MetricId::Transposition,
        MetricId::Conjugacy,
        MetricId::Levenshtein,
        MetricId::Lcs,
        MetricId::DamerauLevenshtein,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricId::Hamming => "hamming",
            MetricId::Transposition => "transposition",
            MetricId::Conjugacy => "conjugacy",
            MetricId::Levenshtein => "levenshtein",
            MetricId::Lcs => "lcs",
            MetricId::DamerauLevenshtein => "damerau",
            MetricId::Length => "length",
            MetricId::Discrete => "discrete",
        }
    }

    pub fn is_edit(self) -> bool {
        Self::EDIT.contains(&self)
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "hamming" => MetricId::Hamming,
            "transposition" => MetricId::Transposition,
            "conjugacy" => MetricId::Conjugacy,
            "levenshtein" => MetricId::Levenshtein,
            "lcs" => MetricId::Lcs,
            "damerau" | "damerau_levenshtein" => MetricId::DamerauLevenshtein,
            "length" => MetricId::Length,
            "discrete" => MetricId::Discrete,
            _ => return Err(Error::Input(format!("unknown metric {s:?}"))),
        })
    }
}

/// Exact value of metric `m` on `(u, v)`.
pub fn word_distance(m: MetricId, u: &[Letter], v: &[Letter]) -> ExtendedNat {
    match m {
        MetricId::Hamming => hamming(u, v),
        MetricId::Transposition => transposition(u, v),
        MetricId::Conjugacy => conjugacy(u, v),
        MetricId::Levenshtein => levenshtein(u, v).into(),
        MetricId::Lcs => lcs_distance(u, v).into(),
        MetricId::DamerauLevenshtein => damerau_levenshtein(u, v).into(),
        MetricId::Length => (u.len().abs_diff(v.len())).into(),
        MetricId::Discrete => {
            if u == v {
                ExtendedNat::ZERO
            } else {
                ExtendedNat::Infinite
            }
        }
    }
}

/// [`word_distance`] after checking both words against `alphabet`.
pub fn word_distance_checked(m: MetricId, alphabet: &Alphabet, u: &[Letter], v: &[Letter]) -> Result<ExtendedNat> {
    alphabet.check_word(u)?;
    alphabet.check_word(v)?;
    Ok(word_distance(m, u, v))
}

pub fn hamming(u: &[Letter], v: &[Letter]) -> ExtendedNat {
    if u.len() != v.len() {
        return ExtendedNat::Infinite;
    }
    (u.iter().zip(v).filter(|(a, b)| a != b).count()).into()
}

/// Letter counts indexed by letter id; the vector is as long as the largest id seen plus one,
/// or `size` when that is larger.
pub fn alphabetic_vector(u: &[Letter], size: usize) -> Vec<usize> {
    let n = u.iter().map(|l| l.index() + 1).max().unwrap_or(0).max(size);
    let mut counts = vec![0; n];
    for l in u {
        counts[l.index()] += 1;
    }
    counts
}

/// True iff `u` and `v` are permutations of each other.
pub fn same_letters(u: &[Letter], v: &[Letter]) -> bool {
    if u.len() != v.len() {
        return false;
    }
    let n = u.iter().chain(v).map(|l| l.index() + 1).max().unwrap_or(0);
    alphabetic_vector(u, n) == alphabetic_vector(v, n)
}

/// Minimum number of adjacent swaps: pair the i-th occurrence of each letter in `u` with the
/// i-th occurrence in `v`, then count inversions of the induced permutation.
pub fn transposition(u: &[Letter], v: &[Letter]) -> ExtendedNat {
    if !same_letters(u, v) {
        return ExtendedNat::Infinite;
    }
    let sigma = u.iter().map(|l| l.index() + 1).max().unwrap_or(0);
    let mut positions: Vec<Vec<usize>> = vec![Vec::new(); sigma];
    for (j, l) in v.iter().enumerate().rev() {
        positions[l.index()].push(j);
    }
    let mut perm: Vec<usize> = u.iter().map(|l| positions[l.index()].pop().expect("equal counts")).collect();
    count_inversions(&mut perm).into()
}

fn count_inversions(a: &mut [usize]) -> u64 {
    let n = a.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut count = count_inversions(&mut a[..mid]) + count_inversions(&mut a[mid..]);
    let mut merged = Vec::with_capacity(n);
    let (mut i, mut j) = (0, mid);
    while i < mid && j < n {
        if a[i] <= a[j] {
            merged.push(a[i]);
            i += 1;
        } else {
            merged.push(a[j]);
            count += (mid - i) as u64;
            j += 1;
        }
    }
    merged.extend_from_slice(&a[i..mid]);
    merged.extend_from_slice(&a[j..]);
    a.copy_from_slice(&merged);
    count
}

/// Minimum number of one-letter cyclic shifts: over offsets `k` with `v = u[k..] u[..k]`,
/// the minimum of `min(k, n - k)`.
pub fn conjugacy(u: &[Letter], v: &[Letter]) -> ExtendedNat {
    let n = u.len();
    if n != v.len() {
        return ExtendedNat::Infinite;
    }
    if n == 0 {
        return ExtendedNat::ZERO;
    }
    (0..n)
        .filter(|&k| u[k..] == v[..n - k] && u[..k] == v[n - k..])
        .map(|k| k.min(n - k))
        .min()
        .map_or(ExtendedNat::Infinite, ExtendedNat::from)
}

pub fn levenshtein(u: &[Letter], v: &[Letter]) -> u64 {
    let mut prev: Vec<u64> = (0..=v.len() as u64).collect();
    let mut cur = vec![0u64; v.len() + 1];
    for (i, a) in u.iter().enumerate() {
        cur[0] = i as u64 + 1;
        for (j, b) in v.iter().enumerate() {
            let sub = prev[j] + u64::from(a != b);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[v.len()]
}

/// `|u| + |v| - 2 * lcs(u, v)`: insertions and deletions only.
pub fn lcs_distance(u: &[Letter], v: &[Letter]) -> u64 {
    let mut prev = vec![0usize; v.len() + 1];
    let mut cur = vec![0usize; v.len() + 1];
    for a in u {
        for (j, b) in v.iter().enumerate() {
            cur[j + 1] = if a == b { prev[j] + 1 } else { prev[j + 1].max(cur[j]) };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    (u.len() + v.len() - 2 * prev[v.len()]) as u64
}

/// Full table of unit-cost Levenshtein distances between prefixes: `t[i][j] = d(u[..i], v[..j])`.
pub fn levenshtein_table(u: &[Letter], v: &[Letter]) -> Vec<Vec<u64>> {
    let mut t = vec![vec![0u64; v.len() + 1]; u.len() + 1];
    for (j, cell) in t[0].iter_mut().enumerate() {
        *cell = j as u64;
    }
    for i in 1..=u.len() {
        t[i][0] = i as u64;
        for j in 1..=v.len() {
            let sub = t[i - 1][j - 1] + u64::from(u[i - 1] != v[j - 1]);
            t[i][j] = sub.min(t[i - 1][j] + 1).min(t[i][j - 1] + 1);
        }
    }
    t
}

/// Full table of insertion/deletion distances between prefixes.
pub fn lcs_table(u: &[Letter], v: &[Letter]) -> Vec<Vec<u64>> {
    let mut t = vec![vec![0u64; v.len() + 1]; u.len() + 1];
    for (j, cell) in t[0].iter_mut().enumerate() {
        *cell = j as u64;
    }
    for i in 1..=u.len() {
        t[i][0] = i as u64;
        for j in 1..=v.len() {
            t[i][j] = if u[i - 1] == v[j - 1] {
                t[i - 1][j - 1]
            } else {
                (t[i - 1][j] + 1).min(t[i][j - 1] + 1)
            };
        }
    }
    t
}

/// Full table of unrestricted Damerau-Levenshtein distances between prefixes
/// (Lowrance-Wagner recurrence with unit costs).
pub fn damerau_table(u: &[Letter], v: &[Letter]) -> Vec<Vec<u64>> {
    let (n, m) = (u.len(), v.len());
    let sigma = u.iter().chain(v).map(|l| l.index() + 1).max().unwrap_or(0);
    let inf = (n + m + 1) as u64;
    // h[i + 1][j + 1] holds the distance between u[..i] and v[..j]
    let mut h = vec![vec![inf; m + 2]; n + 2];
    for i in 0..=n {
        h[i + 1][1] = i as u64;
    }
    for j in 0..=m {
        h[1][j + 1] = j as u64;
    }
    let mut last_row = vec![0usize; sigma];
    for i in 1..=n {
        let mut last_col = 0usize;
        for j in 1..=m {
            let i1 = last_row[v[j - 1].index()];
            let j1 = last_col;
            let cost = if u[i - 1] == v[j - 1] {
                last_col = j;
                0
            } else {
                1
            };
            let swap = h[i1][j1] + (i - i1 - 1) as u64 + 1 + (j - j1 - 1) as u64;
            h[i + 1][j + 1] = (h[i][j] + cost).min(h[i + 1][j] + 1).min(h[i][j + 1] + 1).min(swap);
        }
        last_row[u[i - 1].index()] = i;
    }
    (0..=n).map(|i| h[i + 1][1..].to_vec()).collect()
}

pub fn damerau_levenshtein(u: &[Letter], v: &[Letter]) -> u64 {
    damerau_table(u, v)[u.len()][v.len()]
}

/// A violated inequality of the metric-order suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderViolation {
    pub u: Vec<Letter>,
    pub v: Vec<Letter>,
    pub inequality: &'static str,
}

/// Checks the order relations between the metrics on every sample pair and returns the first
/// violation.
pub fn metric_order_check<'a, I>(samples: I) -> std::result::Result<(), OrderViolation>
where
    I: IntoIterator<Item = (&'a [Letter], &'a [Letter])>,
{
    let two = |x: ExtendedNat| x + x;
    for (u, v) in samples {
        let d = |m| word_distance(m, u, v);
        let (len, disc) = (d(MetricId::Length), d(MetricId::Discrete));
        let (h, t, c) = (d(MetricId::Hamming), d(MetricId::Transposition), d(MetricId::Conjugacy));
        let (l, lcs, dl) = (d(MetricId::Levenshtein), d(MetricId::Lcs), d(MetricId::DamerauLevenshtein));
        let fail = |inequality| Err(OrderViolation { u: u.to_vec(), v: v.to_vec(), inequality });
        for m in MetricId::EDIT {
            if !(len <= d(m) && d(m) <= disc) {
                return fail("length <= d <= discrete");
            }
        }
        if !(l <= lcs && lcs <= two(l)) {
            return fail("levenshtein <= lcs <= 2 levenshtein");
        }
        if !(dl <= l && l <= two(dl)) {
            return fail("damerau <= levenshtein <= 2 damerau");
        }
        if !(l <= h && h <= two(t)) {
            return fail("levenshtein <= hamming <= 2 transposition");
        }
        if !(l <= two(c)) {
            return fail("levenshtein <= 2 conjugacy");
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Word;

    fn w(s: &str) -> Word {
        Alphabet::from_symbols("01abc").unwrap().parse_word(s).unwrap()
    }

    fn d(m: MetricId, u: &str, v: &str) -> ExtendedNat {
        word_distance(m, &w(u), &w(v))
    }

    #[test]
    fn known_values() {
        use ExtendedNat::{Finite, Infinite};
        assert_eq!(d(MetricId::Hamming, "1001", "0101"), Finite(2));
        assert_eq!(d(MetricId::Transposition, "1001", "0101"), Finite(1));
        assert_eq!(d(MetricId::Conjugacy, "0101", "1010"), Finite(1));
        assert_eq!(d(MetricId::Conjugacy, "1001", "0101"), Infinite);
        assert_eq!(d(MetricId::Levenshtein, "aaa", "bbb"), Finite(3));
        assert_eq!(d(MetricId::Levenshtein, "010", "101"), Finite(2));
        assert_eq!(d(MetricId::Transposition, "0101", "1010"), Finite(2));
        assert_eq!(d(MetricId::DamerauLevenshtein, "ab", "ba"), Finite(1));
        assert_eq!(d(MetricId::DamerauLevenshtein, "ca", "abc"), Finite(2));
        assert_eq!(d(MetricId::Lcs, "ab", "ba"), Finite(2));
        assert_eq!(d(MetricId::Hamming, "ab", "a"), Infinite);
    }

    #[test]
    fn empty_word_edge_cases() {
        assert_eq!(d(MetricId::Conjugacy, "", ""), ExtendedNat::ZERO);
        assert_eq!(d(MetricId::Conjugacy, "", "a"), ExtendedNat::Infinite);
        assert_eq!(d(MetricId::Transposition, "", ""), ExtendedNat::ZERO);
    }

    #[test]
    fn vectors() {
        assert_eq!(alphabetic_vector(&w("1001"), 2), vec![2, 2]);
        assert_eq!(alphabetic_vector(&w(""), 2), vec![0, 0]);
        assert_eq!(alphabetic_vector(&w("0101"), 2), alphabetic_vector(&w("1010"), 2));
    }

    #[test]
    fn prefix_tables_agree_with_kernels() {
        let (u, v) = (w("abba0"), w("baab1a"));
        let t = damerau_table(&u, &v);
        let l = levenshtein_table(&u, &v);
        let c = lcs_table(&u, &v);
        for i in 0..=u.len() {
            for j in 0..=v.len() {
                assert_eq!(t[i][j], damerau_levenshtein(&u[..i], &v[..j]));
                assert_eq!(l[i][j], levenshtein(&u[..i], &v[..j]));
                assert_eq!(c[i][j], lcs_distance(&u[..i], &v[..j]));
            }
        }
    }

    #[test]
    fn order_holds_on_small_samples() {
        let pairs = [("aaa", "bbb"), ("ab", "ab"), ("010101", "101010")];
        let words: Vec<(Word, Word)> = pairs.iter().map(|(a, b)| (w(a), w(b))).collect();
        assert!(metric_order_check(words.iter().map(|(a, b)| (&a[..], &b[..]))).is_ok());
        assert_eq!(d(MetricId::Conjugacy, "010101", "101010"), ExtendedNat::Finite(1));
        assert_eq!(d(MetricId::Hamming, "010101", "101010"), ExtendedNat::Finite(6));
    }
}
