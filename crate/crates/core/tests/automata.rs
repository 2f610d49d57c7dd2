mod common;

use common::alphabet;
use proptest::prelude::*;
use transdist::automata::{equiv_unambiguous, Nfa};
use transdist::pair::{find_unequal_pair, is_identity_relation, pairs_up_to, path_words, PairAutomaton, PairLabel};
use transdist::{Letter, Word};

/// Random automaton from a list of `(src, letter, dst)` rows.
fn nfa(n: usize, initial: &[usize], finals: &[usize], rows: &[(usize, u32, usize)]) -> Nfa<Letter> {
    let mut a = Nfa::new(n);
    for &q in initial {
        a.set_initial(q % n);
    }
    for &q in finals {
        a.set_final(q % n, true);
    }
    for &(s, l, d) in rows {
        a.add_transition(s % n, Letter(l), d % n);
    }
    a
}

fn arb_nfa(sigma: u32) -> impl Strategy<Value = Nfa<Letter>> {
    (1usize..=5).prop_flat_map(move |n| {
        (
            prop::collection::vec(0..n, 1..=2),
            prop::collection::vec(0..n, 0..=n),
            prop::collection::vec((0..n, 0..sigma, 0..n), 0..=3 * n),
        )
            .prop_map(move |(i, f, rows)| nfa(n, &i, &f, &rows))
    })
}

/// Random deterministic automaton; reversing it yields a co-deterministic one. Both are
/// unambiguous.
fn arb_unambiguous() -> impl Strategy<Value = Nfa<Letter>> {
    (1usize..=6, any::<bool>()).prop_flat_map(|(n, reverse)| {
        (prop::collection::vec(prop::option::of(0..n), 2 * n), prop::collection::vec(any::<bool>(), n)).prop_map(move |(delta, fin)| {
            let rows: Vec<(usize, u32, usize)> =
                delta.iter().enumerate().filter_map(|(i, d)| d.map(|d| (i / 2, (i % 2) as u32, d))).collect();
            let finals: Vec<usize> = (0..n).filter(|&q| fin[q]).collect();
            if reverse && finals.len() == 1 {
                let rev: Vec<_> = rows.iter().map(|&(s, l, d)| (d, l, s)).collect();
                nfa(n, &finals, &[0], &rev)
            } else {
                nfa(n, &[0], &finals, &rows)
            }
        })
    })
}

fn language(a: &Nfa<Letter>, symbols: &str, n: usize) -> Vec<Word> {
    alphabet(symbols).words_up_to(n).into_iter().filter(|w| a.accepts(w)).collect()
}

fn arb_pair_automaton() -> impl Strategy<Value = PairAutomaton> {
    let side = prop::option::of(0u32..2);
    (1usize..=4).prop_flat_map(move |n| {
        (prop::collection::vec(0..n, 1..=n), prop::collection::vec((0..n, side.clone(), side.clone(), 0..n), 1..=3 * n)).prop_map(
            move |(finals, rows)| {
                let mut p = PairAutomaton::new(n);
                p.set_initial(0);
                for q in finals {
                    p.set_final(q, true);
                }
                for (s, l, r, d) in rows {
                    p.add_transition(s, PairLabel::new(l.map(Letter), r.map(Letter)), d);
                }
                p
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn trim_is_idempotent_and_preserves_language(a in arb_nfa(3)) {
        let t = a.trim();
        prop_assert!(t.is_trim());
        let tt = t.trim();
        prop_assert_eq!(tt.n_states(), t.n_states());
        prop_assert_eq!(tt.transitions().len(), t.transitions().len());
        prop_assert_eq!(language(&a, "abc", 8), language(&t, "abc", 8));
    }

    #[test]
    fn equivalence_matches_enumeration(a in arb_unambiguous(), b in arb_unambiguous()) {
        prop_assert!(a.is_unambiguous() && b.is_unambiguous());
        let brute = language(&a, "ab", 10) == language(&b, "ab", 10);
        prop_assert_eq!(equiv_unambiguous(&a, &b).unwrap(), brute);
        prop_assert!(equiv_unambiguous(&a, &a.trim()).unwrap());
    }

    #[test]
    fn identity_test_matches_enumeration(p in arb_pair_automaton()) {
        let pairs = pairs_up_to(&p, 8);
        let identity = is_identity_relation(&p);
        if identity {
            prop_assert!(pairs.iter().all(|(u, v)| u == v));
        } else {
            let path = find_unequal_pair(&p).unwrap();
            let (u, v, _) = path_words(&p, &path);
            prop_assert_ne!(u, v);
        }
    }
}
