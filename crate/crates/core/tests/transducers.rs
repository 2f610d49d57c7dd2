mod common;

use common::*;
use transdist::delay::{compute_delays, length_close, Delays};
use transdist::kapprox::close;
use transdist::pair::{pairs_up_to, path_words, PairAutomaton};
use transdist::transducer::{nivat_split, JointMachine};
use transdist::verdict::{Certificate, Closeness, Limits};
use transdist::{word_distance, ExtendedNat, MetricId, Word};

const SEEDS: u64 = 40;

#[test]
fn joint_machine_carries_both_outputs() {
    for seed in 0..SEEDS {
        let (t1, t2) = random_pair(seed, 3);
        let j = JointMachine::new(&t1, &t2).unwrap();
        let (s1, s2) = j.split().unwrap();
        let p = j.pair_automaton();
        let pairs = pairs_up_to(&p, 2 * 8 + 1);
        for w in inputs(t1.input_alphabet(), 8) {
            let expected = match (t1.eval(&w).unwrap(), t2.eval(&w).unwrap()) {
                (Some(a), Some(b)) => Some((a, b)),
                _ => None,
            };
            assert_eq!(j.eval(&w), expected, "seed {seed} {w:?}");
            assert_eq!(s1.eval(&w).unwrap(), expected.as_ref().map(|e| e.0.clone()));
            if let Some(pair) = expected {
                assert!(pairs.contains(&pair), "seed {seed}: pair automaton misses {pair:?}");
            }
        }
        for m in MetricId::ALL {
            for n in 0..=6 {
                let worst = |a: &transdist::transducer::Transducer, b: &transdist::transducer::Transducer| {
                    t1.input_alphabet()
                        .words_of_length(n)
                        .iter()
                        .filter_map(|w| Some(word_distance(m, &a.eval(w).unwrap()?, &b.eval(w).unwrap()?)))
                        .max()
                };
                assert_eq!(worst(&t1, &t2), worst(&s1, &s2), "seed {seed} {m} length {n}");
            }
        }
    }
}

/// Accepting transition paths of length at most `n`.
fn accepting_paths(p: &PairAutomaton, n: usize) -> Vec<Vec<usize>> {
    let out = p.out_edges();
    let mut result = Vec::new();
    let mut stack: Vec<(usize, Vec<usize>)> = p.initial().iter().map(|&q| (q, Vec::new())).collect();
    while let Some((q, path)) = stack.pop() {
        if p.is_final(q) {
            result.push(path.clone());
        }
        if path.len() < n {
            for &e in &out[q] {
                let mut next = path.clone();
                next.push(e);
                stack.push((p.transitions()[e].dst, next));
            }
        }
    }
    result
}

#[test]
fn nivat_split_replays_paths() {
    for seed in 0..SEEDS {
        let Some(j) = random_joint(seed, 3) else { continue };
        let p = j.pair_automaton();
        let (n1, n2) = nivat_split(&p, j.output_alphabet()).unwrap();
        for path in accepting_paths(&p, 6) {
            let (u, v, _) = path_words(&p, &path);
            let w = Word::from_ids(&path.iter().map(|&e| e as u32).collect::<Vec<_>>());
            assert_eq!(n1.eval(&w).unwrap(), Some(u));
            assert_eq!(n2.eval(&w).unwrap(), Some(v));
        }
    }
}

#[test]
fn length_distance_matches_enumeration() {
    let limits = Limits::default();
    let (mut bounded, mut unbounded) = (0, 0);
    for seed in 0..SEEDS {
        let (t1, t2) = random_pair(seed, 3);
        let gaps: Vec<ExtendedNat> = inputs(t1.input_alphabet(), 10)
            .iter()
            .filter_map(|w| Some(word_distance(MetricId::Length, &t1.eval(w).unwrap()?, &t2.eval(w).unwrap()?)))
            .collect();
        let worst = gaps.iter().copied().max().unwrap_or(ExtendedNat::ZERO);
        match length_close(&t1, &t2).unwrap() {
            ExtendedNat::Finite(b) => {
                bounded += 1;
                assert_eq!(worst, ExtendedNat::Finite(b), "seed {seed}");
            }
            ExtendedNat::Infinite => {
                unbounded += 1;
                let p = JointMachine::new(&t1, &t2).unwrap().pair_automaton();
                assert!(matches!(compute_delays(&p), Delays::Unbounded { .. }));
                let Closeness::NotClose(cert @ Certificate::Pump { .. }) = close(MetricId::Length, &t1, &t2, &limits).unwrap() else {
                    panic!("seed {seed}: expected a pump certificate");
                };
                let gap = |i| {
                    let w = cert.instance(i);
                    word_distance(MetricId::Length, &t1.eval(&w).unwrap().unwrap(), &t2.eval(&w).unwrap().unwrap()).finite().unwrap()
                };
                let (g1, g2, g3) = (gap(1), gap(2), gap(3));
                assert!(g1 < g2 && g3 - g2 == g2 - g1, "seed {seed}: gaps {g1} {g2} {g3}");
            }
        }
    }
    assert!(bounded > 5 && unbounded > 5, "{bounded} bounded, {unbounded} unbounded");
}

#[test]
fn partial_gaps_stay_within_the_delays() {
    for seed in 0..SEEDS {
        let Some(j) = random_joint(seed, 3) else { continue };
        let p = j.pair_automaton();
        let Delays::Consistent(split) = compute_delays(&p) else { continue };
        let bound = split.max_abs_delay();
        for path in accepting_paths(&p, 8) {
            let mut gap = 0i64;
            for &e in &path {
                gap += p.transitions()[e].label.gap();
                assert!(gap.abs() <= bound, "seed {seed}");
            }
        }
    }
}
