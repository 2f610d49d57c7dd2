mod common;

use std::collections::BTreeSet;

use common::*;
use transdist::expr::sumfree_decompose;
use transdist::pair::pairs_up_to;
use transdist::verdict::{Closeness, Limits};
use transdist::witness::{close_conjugacy_automaton, close_levenshtein_automaton, common_witness, expression_of, Side, WitnessSearch};
use transdist::{word_distance, ExtendedNat, MetricId, Word};

const SEEDS: u64 = 60;
const ENUM_LEN: usize = 6;

#[test]
fn decomposition_preserves_pairs() {
    let limits = Limits::default();
    let mut checked = 0;
    for seed in 0..SEEDS {
        let Some(j) = random_joint(seed, 2) else { continue };
        let p = j.pair_automaton();
        let summands = sumfree_decompose(&expression_of(&p), limits.summand_limit).unwrap();
        let union: BTreeSet<(Word, Word)> = summands.iter().flat_map(|s| pairs_up_to(&s.automaton(), ENUM_LEN)).collect();
        assert_eq!(union, pairs_up_to(&p, ENUM_LEN), "seed {seed}");
        checked += 1;
    }
    assert!(checked > 20);
}

#[test]
fn found_witnesses_satisfy_their_equation() {
    let limits = Limits::default();
    let mut found = 0;
    for seed in 0..SEEDS {
        let Some(j) = random_joint(seed, 2) else { continue };
        for s in sumfree_decompose(&expression_of(&j.pair_automaton()), limits.summand_limit).unwrap() {
            let WitnessSearch::Found(w) = common_witness(&s) else { continue };
            found += 1;
            for (u, v) in pairs_up_to(&s.automaton(), 10) {
                let (lhs, rhs) = match w.side {
                    Side::Inner => (u.concat(&w.z), w.z.concat(&v)),
                    Side::Outer => (w.z.concat(&u), v.concat(&w.z)),
                };
                assert_eq!(lhs, rhs, "seed {seed}: witness {:?} on {u:?} {v:?}", w.z);
            }
        }
    }
    assert!(found > 20);
}

#[test]
fn expression_deciders_bound_enumerated_pairs() {
    let limits = Limits::default();
    for seed in 0..SEEDS {
        let Some(j) = random_joint(seed, 2) else { continue };
        let p = j.pair_automaton();
        let pairs = pairs_up_to(&p, 8);
        let conj = close_conjugacy_automaton(&p, j.output_alphabet(), &limits).unwrap();
        if let Closeness::Close { bound: Some(b) } = conj {
            for (u, v) in &pairs {
                assert!(word_distance(MetricId::Conjugacy, u, v) <= ExtendedNat::Finite(b), "seed {seed}");
            }
        }
        for m in [MetricId::Levenshtein, MetricId::Lcs, MetricId::DamerauLevenshtein] {
            if let Closeness::Close { bound: Some(b) } = close_levenshtein_automaton(m, &p, j.output_alphabet(), &limits).unwrap() {
                for (u, v) in &pairs {
                    assert!(word_distance(m, u, v) <= ExtendedNat::Finite(b), "seed {seed} {m}");
                }
            }
        }
    }
}
