//! Common witnesses of sets of pairs, and the closeness deciders for the conjugacy distance and
//! the Levenshtein family.
//!
//! A word `z` is an inner witness of `(u, v)` when `uz = zv` and an outer witness when
//! `zu = vz`. Witnesshood is closed under concatenation of pairs, so a witness of a star body
//! witnesses the whole star.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::{state_elimination, sumfree_decompose, Atom, PairExpr, Sumfree};
use crate::metric::{word_distance, MetricId};
use crate::pair::{add_chain, find_unequal_pair, is_identity_relation, path_words, PairAutomaton};
use crate::verdict::{pumps_increase, Certificate, Closeness, Limits};
use crate::word::{Alphabet, ExtendedNat, Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    /// `u z = z v`
    Inner,
    /// `z u = v z`
    Outer,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub z: Word,
    pub side: Side,
}

/// The language `x (period x)*` of candidate witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WitnessFamily {
    pub x: Word,
    pub period: Word,
}

impl WitnessFamily {
    /// `x (period x)^r`
    pub fn member(&self, r: usize) -> Word {
        self.x.concat(&self.period.concat(&self.x).repeat(r))
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        format!("{}({}{})*", alphabet.render(&self.x), alphabet.render(&self.period), alphabet.render(&self.x))
    }
}

/// Witness families of a single pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairWitnesses {
    NotConjugate,
    /// `(ε, ε)`: every word is a witness
    Universal,
    Families { inner: Vec<WitnessFamily>, outer: Vec<WitnessFamily> },
}

fn primitive_root(u: &[Letter]) -> &[Letter] {
    let n = u.len();
    let p = (1..=n).find(|&p| n.is_multiple_of(p) && u.chunks(p).all(|c| c == &u[..p])).unwrap_or(n);
    &u[..p]
}

/// Families `x (yx)*` over the factorizations `u = xy` with `v = yx`.
fn split_families(u: &[Letter], v: &[Letter]) -> Vec<WitnessFamily> {
    (0..=u.len())
        .filter(|&k| v[..u.len() - k] == u[k..] && v[u.len() - k..] == u[..k])
        .map(|k| WitnessFamily { x: Word(u[..k].to_vec()), period: Word(u[k..].to_vec()) })
        .collect()
}

/// Inner families `x (yx)*` for `u = xy, v = yx`; outer families likewise with `u` and `v`
/// exchanged. Equal non-empty words have the single family `ρ*` with `ρ` the primitive root.
pub fn pair_witnesses(u: &[Letter], v: &[Letter]) -> PairWitnesses {
    if u.len() != v.len() {
        return PairWitnesses::NotConjugate;
    }
    if u.is_empty() {
        return PairWitnesses::Universal;
    }
    if u == v {
        let f = WitnessFamily { x: Word::empty(), period: Word(primitive_root(u).to_vec()) };
        return PairWitnesses::Families { inner: vec![f.clone()], outer: vec![f] };
    }
    let inner = split_families(u, v);
    if inner.is_empty() {
        return PairWitnesses::NotConjugate;
    }
    PairWitnesses::Families { inner, outer: split_families(v, u) }
}

/// True iff `z` is a witness on `side` of every pair accepted by `p`.
pub fn verify_witness(p: &PairAutomaton, z: &[Letter], side: Side) -> bool {
    let mut wrapped = PairAutomaton::new(p.n_states());
    for t in p.transitions() {
        wrapped.add_transition(t.src, t.label, t.dst);
    }
    let start = wrapped.add_state();
    let end = wrapped.add_state();
    wrapped.set_initial(start);
    wrapped.set_final(end, true);
    let empty: &[Letter] = &[];
    let (head, tail) = match side {
        Side::Inner => ((empty, z), (z, empty)),
        Side::Outer => ((z, empty), (empty, z)),
    };
    for &q in p.initial() {
        add_chain(&mut wrapped, start, head.0, head.1, &[], q);
    }
    for q in p.finals() {
        add_chain(&mut wrapped, q, tail.0, tail.1, &[], end);
    }
    is_identity_relation(&wrapped)
}

/// Outcome of a common-witness search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessSearch {
    Found(Witness),
    /// a generated pair that is not conjugate, with the input word along its path
    NotConjugate { left: Word, right: Word, input: Word },
    /// families exist but no member within the cutoff verifies; the shortest family is kept
    Unknown { cutoff: usize, family: WitnessFamily },
}

/// Searches a common witness of the pairs of `e`.
///
/// Candidates are taken from the families of one pair `(u, v)` with `u != v`, with repetition
/// count at most `1 + total constant length + number of stars`, and each is checked exactly.
/// Inner candidates come first, shorter ones first within a side.
pub fn common_witness(e: &Sumfree) -> WitnessSearch {
    let p = e.automaton();
    let Some(path) = find_unequal_pair(&p) else {
        return WitnessSearch::Found(Witness { z: Word::empty(), side: Side::Inner });
    };
    let (u, v, input) = path_words(&p, &path);
    let (inner, outer) = match pair_witnesses(&u, &v) {
        PairWitnesses::NotConjugate => return WitnessSearch::NotConjugate { left: u, right: v, input },
        PairWitnesses::Universal => unreachable!("an unequal pair is never (ε, ε)"),
        PairWitnesses::Families { inner, outer } => (inner, outer),
    };
    let cutoff = 1 + e.size_measure();
    let mut candidates: Vec<(Word, Side)> = Vec::new();
    for (families, side) in [(&inner, Side::Inner), (&outer, Side::Outer)] {
        for f in families.iter() {
            for r in 0..=cutoff {
                candidates.push((f.member(r), side));
            }
        }
    }
    candidates.sort_by(|a, b| (a.1, a.0.len(), &a.0).cmp(&(b.1, b.0.len(), &b.0)));
    candidates.dedup();
    for (z, side) in candidates {
        if verify_witness(&p, &z, side) {
            return WitnessSearch::Found(Witness { z, side });
        }
    }
    let family = inner
        .into_iter()
        .chain(outer)
        .min_by_key(|f| f.x.len() + f.period.len())
        .expect("a conjugate pair has a family");
    WitnessSearch::Unknown { cutoff, family }
}

/// Expression of the relation accepted by `p`.
pub fn expression_of(p: &PairAutomaton) -> Arc<PairExpr> {
    state_elimination(&p.trim())
}

fn unknown_message(cutoff: usize, family: &WitnessFamily, alphabet: &Alphabet) -> String {
    format!("no witness with repetition count <= {cutoff} in family {}", family.render(alphabet))
}

/// Conjugacy-distance closeness of the relation `e`: every sumfree summand needs a common
/// witness. The bound is the longest witness found.
pub fn close_conjugacy(e: &Arc<PairExpr>, output: &Alphabet, limits: &Limits) -> Result<Closeness> {
    let mut bound = 0u64;
    let mut unknown = None;
    for summand in sumfree_decompose(e, limits.summand_limit)? {
        match common_witness(&summand) {
            WitnessSearch::Found(w) => bound = bound.max(w.z.len() as u64),
            WitnessSearch::NotConjugate { input, .. } => return Ok(Closeness::NotClose(Certificate::Input(input))),
            WitnessSearch::Unknown { cutoff, family } => {
                unknown.get_or_insert_with(|| unknown_message(cutoff, &family, output));
            }
        }
    }
    Ok(match unknown {
        Some(msg) => Closeness::Unknown(msg),
        None => Closeness::Close { bound: Some(bound) },
    })
}

/// Largest pump repetition tried when building a growth certificate.
pub(crate) const MAX_PUMP_REPEAT: usize = 8;

/// Closeness for the Levenshtein, LCS and Damerau–Levenshtein distances: every star body of
/// every summand needs a common witness. The bound is `Σ d_l(constants) + 2 Σ |z|`, doubled for
/// the LCS distance.
pub fn close_levenshtein(m: MetricId, e: &Arc<PairExpr>, output: &Alphabet, limits: &Limits) -> Result<Closeness> {
    let scale = match m {
        MetricId::Levenshtein | MetricId::DamerauLevenshtein => 1,
        MetricId::Lcs => 2,
        other => return Err(Error::Unsupported(format!("{} is not a Levenshtein-type distance", other.name()))),
    };
    let mut bound = 0u64;
    let mut unknown = None;
    for summand in sumfree_decompose(e, limits.summand_limit)? {
        let (consts, stars) = summand.canonical();
        let mut summand_bound: u64 =
            consts.iter().map(|c| word_distance(MetricId::Levenshtein, &c.left, &c.right).finite().unwrap_or(0)).sum();
        for (i, body) in stars.iter().enumerate() {
            match common_witness(body) {
                WitnessSearch::Found(w) => summand_bound += 2 * w.z.len() as u64,
                WitnessSearch::NotConjugate { left, right, input } => {
                    let body_pair = Atom { left, right, input };
                    return Ok(Closeness::NotClose(pump_certificate(m, &consts, i, &body_pair)));
                }
                WitnessSearch::Unknown { cutoff, family } => {
                    unknown.get_or_insert_with(|| unknown_message(cutoff, &family, output));
                }
            }
        }
        bound = bound.max(summand_bound);
    }
    Ok(match unknown {
        Some(msg) => Closeness::Unknown(msg),
        None => Closeness::Close { bound: Some(scale * bound) },
    })
}

/// Pumps the non-conjugate pair of star `star` with the other stars taken zero times. The
/// repetition is the smallest one giving strictly increasing distances over three pumps.
fn pump_certificate(m: MetricId, consts: &[Atom], star: usize, body: &Atom) -> Certificate {
    let join = |cs: &[Atom]| cs.iter().fold(Atom::default(), |acc, c| acc.then(c));
    let (before, after) = (join(&consts[..=star]), join(&consts[star + 1..]));
    let distance_at = |r: usize, i: usize| {
        let l = before.left.concat(&body.left.repeat(r * i)).concat(&after.left);
        let rr = before.right.concat(&body.right.repeat(r * i)).concat(&after.right);
        word_distance(m, &l, &rr)
    };
    let grows = |r: usize| {
        let d: Vec<ExtendedNat> = (0..=3).map(|i| distance_at(r, i)).collect();
        pumps_increase(&d[1..])
    };
    let r = (1..=MAX_PUMP_REPEAT).find(|&r| grows(r)).unwrap_or(MAX_PUMP_REPEAT);
    Certificate::Pump { prefix: before.input, cycle: body.input.repeat(r), suffix: after.input }
}

/// Convenience: conjugacy closeness of the relation accepted by `p`.
pub fn close_conjugacy_automaton(p: &PairAutomaton, output: &Alphabet, limits: &Limits) -> Result<Closeness> {
    close_conjugacy(&expression_of(p), output, limits)
}

/// Convenience: Levenshtein-type closeness of the relation accepted by `p`.
pub fn close_levenshtein_automaton(m: MetricId, p: &PairAutomaton, output: &Alphabet, limits: &Limits) -> Result<Closeness> {
    close_levenshtein(m, &expression_of(p), output, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Factor;

    fn ab() -> Alphabet {
        Alphabet::from_symbols("ab").unwrap()
    }

    fn w(s: &str) -> Word {
        ab().parse_word(s).unwrap()
    }

    fn star_of(l: &str, r: &str) -> Sumfree {
        let body = Sumfree { factors: vec![Factor::Const(Atom::new(w(l), w(r)))] };
        Sumfree { factors: vec![Factor::Star(Arc::new(body))] }
    }

    #[test]
    fn families_of_pairs() {
        match pair_witnesses(&w("aaab"), &w("aaba")) {
            PairWitnesses::Families { inner, .. } => {
                assert!(inner.contains(&WitnessFamily { x: w("a"), period: w("aab") }));
            }
            other => panic!("{other:?}"),
        }
        let bin = Alphabet::from_symbols("01").unwrap();
        let p = |s: &str| bin.parse_word(s).unwrap();
        assert_eq!(pair_witnesses(&p("1001"), &p("0101")), PairWitnesses::NotConjugate);
        match pair_witnesses(&w("ab"), &w("ab")) {
            PairWitnesses::Families { inner, .. } => assert_eq!(inner[0].member(2), w("abab")),
            other => panic!("{other:?}"),
        }
        assert_eq!(pair_witnesses(&[], &[]), PairWitnesses::Universal);
    }

    #[test]
    fn witness_checks() {
        let e = star_of("ab", "ba").automaton();
        assert!(verify_witness(&e, &w("a"), Side::Inner));
        assert!(!verify_witness(&e, &[], Side::Inner));
        assert!(!verify_witness(&star_of("a", "b").automaton(), &w("a"), Side::Inner));
    }

    #[test]
    fn common_witnesses() {
        assert_eq!(common_witness(&star_of("ab", "ba")), WitnessSearch::Found(Witness { z: w("a"), side: Side::Inner }));
        assert!(matches!(common_witness(&star_of("a", "b")), WitnessSearch::NotConjugate { .. }));
        match common_witness(&star_of("abb", "bab")) {
            WitnessSearch::Found(wit) => assert_eq!(wit.z, w("ab")),
            other => panic!("{other:?}"),
        }
    }
}
