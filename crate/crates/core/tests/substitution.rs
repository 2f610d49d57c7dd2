mod common;

use common::*;
use transdist::metric::word_distance;
use transdist::substitution::{close_hamming, close_transposition, close_transposition_with, distance_subst, BorderSide};
use transdist::transducer::Transducer;
use transdist::verdict::{Certificate, Closeness, Limits};
use transdist::{ExtendedNat, MetricId};

fn sup_distance(m: MetricId, t1: &Transducer, t2: &Transducer, len: usize) -> ExtendedNat {
    inputs(t1.input_alphabet(), len)
        .iter()
        .map(|w| match (t1.eval(w).unwrap(), t2.eval(w).unwrap()) {
            (Some(a), Some(b)) => word_distance(m, &a, &b),
            (None, None) => ExtendedNat::ZERO,
            _ => ExtendedNat::Infinite,
        })
        .max()
        .unwrap_or(ExtendedNat::ZERO)
}

fn pumped(m: MetricId, t1: &Transducer, t2: &Transducer, cert: &Certificate, i: usize) -> ExtendedNat {
    let w = cert.instance(i);
    match (t1.eval(&w).unwrap(), t2.eval(&w).unwrap()) {
        (Some(a), Some(b)) => word_distance(m, &a, &b),
        _ => ExtendedNat::Infinite,
    }
}

fn assert_certificate_grows(m: MetricId, t1: &Transducer, t2: &Transducer, cert: &Certificate) {
    let d: Vec<ExtendedNat> = (1..=4).map(|i| pumped(m, t1, t2, cert, i)).collect();
    match cert {
        Certificate::Input(_) => assert_eq!(d[0], ExtendedNat::Infinite),
        Certificate::Pump { .. } => assert!(d.windows(2).all(|w| w[0] < w[1] || w[0] == ExtendedNat::Infinite), "{d:?}"),
    }
}

#[test]
fn worked_examples() {
    let limits = Limits::default();
    assert!(matches!(close_hamming(&odd_positions(), &even_positions(), &limits).unwrap(), Closeness::NotClose(_)));
    assert!(matches!(close_hamming(&block_names(), &block_complements(), &limits).unwrap(), Closeness::NotClose(_)));
    assert!(matches!(close_transposition(&odd_positions(), &even_positions(), &limits).unwrap(), Closeness::NotClose(_)));
    assert!(close_hamming(&odd_positions(), &odd_positions(), &limits).unwrap().is_close());
    assert!(close_transposition(&block_names(), &block_names(), &limits).unwrap().is_close());
    assert_eq!(distance_subst(MetricId::Hamming, &block_names(), &block_complements(), &limits).unwrap(), ExtendedNat::Infinite);
    assert_eq!(distance_subst(MetricId::Hamming, &erase_b(), &erase_b(), &limits).unwrap(), ExtendedNat::ZERO);
}

#[test]
fn constant_machines() {
    let limits = Limits::default();
    let c1 = machine("a", "01", 2, &[(1, "")], &[(0, 'a', "1001", 1)]);
    let c2 = machine("a", "01", 2, &[(1, "")], &[(0, 'a', "0101", 1)]);
    assert_eq!(distance_subst(MetricId::Transposition, &c1, &c2, &limits).unwrap(), ExtendedNat::Finite(1));
    assert_eq!(distance_subst(MetricId::Hamming, &c1, &c2, &limits).unwrap(), ExtendedNat::Finite(2));
}

#[test]
fn shifted_loops_with_absorbed_borders() {
    let limits = Limits::default();
    // (ab)^n x  against  (ab)^(n-1) a x b: the right side lags by one letter inside the loop
    let t1 = machine("c", "abx", 2, &[(1, "x")], &[(0, 'c', "ab", 1), (1, 'c', "ab", 1)]);
    let t2 = machine("c", "abx", 2, &[(1, "xb")], &[(0, 'c', "a", 1), (1, 'c', "ba", 1)]);
    assert!(close_transposition(&t1, &t2, &limits).unwrap().is_close());
    let d = distance_subst(MetricId::Transposition, &t1, &t2, &limits).unwrap();
    assert_eq!(d, ExtendedNat::Finite(1));
    assert_eq!(d, sup_distance(MetricId::Transposition, &t1, &t2, 10));
    assert!(!close_hamming(&t1, &t2, &limits).unwrap().is_close() || distance_subst(MetricId::Hamming, &t1, &t2, &limits).unwrap() == sup_distance(MetricId::Hamming, &t1, &t2, 10));
}

#[test]
fn random_corpus_against_enumeration() {
    let limits = Limits::default();
    let mut close_seen = 0;
    for seed in 0..120 {
        let (t1, t2) = random_pair(seed, 4);
        for m in [MetricId::Hamming, MetricId::Transposition] {
            let verdict = if m == MetricId::Hamming {
                close_hamming(&t1, &t2, &limits).unwrap()
            } else {
                close_transposition(&t1, &t2, &limits).unwrap()
            };
            match &verdict {
                Closeness::Close { .. } => {
                    close_seen += 1;
                    let d = distance_subst(m, &t1, &t2, &limits).unwrap();
                    let (d8, d9, d10) = (sup_distance(m, &t1, &t2, 8), sup_distance(m, &t1, &t2, 9), sup_distance(m, &t1, &t2, 10));
                    assert!(d10 <= d, "seed {seed} {m:?}: enumeration {d10} exceeds {d}");
                    if d8 == d10 && d9 == d10 {
                        assert_eq!(d, d10, "seed {seed} {m:?}");
                    }
                }
                Closeness::NotClose(cert) => assert_certificate_grows(m, &t1, &t2, cert),
                Closeness::Unknown(msg) => panic!("substitution deciders are complete: {msg}"),
            }
            if m == MetricId::Transposition {
                let other = close_transposition_with(&t1, &t2, BorderSide::Final, &limits).unwrap();
                assert_eq!(verdict.is_close(), other.is_close(), "seed {seed}: border sides disagree");
            }
        }
    }
    assert!(close_seen > 5, "corpus has too few close pairs: {close_seen}");
}
