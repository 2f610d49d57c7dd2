mod common;

use common::alphabet;
use proptest::prelude::*;
use transdist::metric::{alphabetic_vector, word_distance};
use transdist::oracle::{oracle_distance, OracleOutcome};
use transdist::{ExtendedNat, Letter, MetricId, Word};

fn binary_word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0u32..2, 0..=max).prop_map(|v| Word::from_ids(&v))
}

#[test]
fn separation_and_symmetry_exhaustively() {
    let words = alphabet("01").words_up_to(6);
    for m in MetricId::ALL {
        for u in &words {
            for v in &words {
                let d = word_distance(m, u, v);
                assert_eq!(d, word_distance(m, v, u), "{m} symmetry {u:?} {v:?}");
                if m != MetricId::Length {
                    assert_eq!(d == ExtendedNat::ZERO, u == v, "{m} separation {u:?} {v:?}");
                }
            }
            assert_eq!(word_distance(m, u, u), ExtendedNat::ZERO);
        }
    }
}

#[test]
fn triangle_inequality_exhaustively_on_short_words() {
    let words = alphabet("01").words_up_to(4);
    for m in MetricId::ALL {
        for u in &words {
            for v in &words {
                let uv = word_distance(m, u, v);
                for w in &words {
                    assert!(word_distance(m, u, w) <= uv + word_distance(m, v, w), "{m} {u:?} {v:?} {w:?}");
                }
            }
        }
    }
}

fn rotate(u: &[Letter], k: usize) -> Vec<Letter> {
    [&u[k..], &u[..k]].concat()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn triangle_inequality(u in binary_word(6), v in binary_word(6), w in binary_word(6)) {
        for m in MetricId::ALL {
            prop_assert!(word_distance(m, &u, &w) <= word_distance(m, &u, &v) + word_distance(m, &v, &w));
        }
    }

    #[test]
    fn conjugacy_is_the_shortest_rotation(u in binary_word(8), v in binary_word(8)) {
        let n = u.len();
        let best = (0..n.max(1))
            .filter(|&k| n == v.len() && (n == 0 || rotate(&u, k) == v.0))
            .map(|k| k.min(n - k) as u64)
            .min();
        prop_assert_eq!(word_distance(MetricId::Conjugacy, &u, &v), best.map_or(ExtendedNat::Infinite, ExtendedNat::Finite));
    }

    #[test]
    fn finiteness_conditions(u in binary_word(8), v in binary_word(8)) {
        prop_assert_eq!(word_distance(MetricId::Hamming, &u, &v).is_finite(), u.len() == v.len());
        prop_assert_eq!(word_distance(MetricId::Transposition, &u, &v).is_finite(), alphabetic_vector(&u, 2) == alphabetic_vector(&v, 2));
    }

    #[test]
    fn rotations_are_conjugate(u in binary_word(8), k in 0usize..8) {
        let k = if u.is_empty() { 0 } else { k % u.len() };
        let v = Word(rotate(&u, k));
        prop_assert!(word_distance(MetricId::Conjugacy, &u, &v) <= ExtendedNat::Finite(k.min(u.len() - k) as u64));
    }

    #[test]
    fn kernels_match_bounded_oracle(u in binary_word(8), v in binary_word(8)) {
        for m in MetricId::ALL.into_iter().filter(|&m| m != MetricId::Discrete) {
            match oracle_distance(m, &u, &v, 8, 2) {
                OracleOutcome::Exact(d) => prop_assert_eq!(word_distance(m, &u, &v), ExtendedNat::Finite(d)),
                OracleOutcome::Exceeds(b) => prop_assert!(word_distance(m, &u, &v) > ExtendedNat::Finite(b)),
            }
        }
    }
}
