//! Shared fixtures: small hand-written machines and seeded random corpora.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use transdist::pair::{PairAutomaton, PairLabel};
use transdist::relations::RationalRelation;
use transdist::transducer::{Edge, JointEdge, JointMachine, Transducer};
use transdist::{Alphabet, Letter, Word};

pub fn alphabet(s: &str) -> Alphabet {
    Alphabet::from_symbols(s).expect("valid alphabet")
}

/// Transducer from `(src, input symbol, output, dst)` rows.
pub fn machine(input: &str, output: &str, n: usize, finals: &[(usize, &str)], edges: &[(usize, char, &str, usize)]) -> Transducer {
    let (ia, oa) = (alphabet(input), alphabet(output));
    let finals = finals.iter().map(|&(q, w)| (q, oa.parse_word(w).unwrap())).collect();
    let edges = edges
        .iter()
        .map(|&(src, a, out, dst)| Edge { src, input: ia.letter(a).unwrap(), output: oa.parse_word(out).unwrap(), dst })
        .collect();
    Transducer::new(ia, oa, n, vec![0], finals, edges).expect("valid machine")
}

/// Letters at odd positions.
pub fn odd_positions() -> Transducer {
    machine("ab", "ab", 2, &[(0, ""), (1, "")], &[(0, 'a', "a", 1), (0, 'b', "b", 1), (1, 'a', "", 0), (1, 'b', "", 0)])
}

/// Letters at even positions.
pub fn even_positions() -> Transducer {
    machine("ab", "ab", 2, &[(0, ""), (1, "")], &[(0, 'a', "", 1), (0, 'b', "", 1), (1, 'a', "a", 0), (1, 'b', "b", 0)])
}

/// Erases every `b`.
pub fn erase_b() -> Transducer {
    machine("ab", "ab", 1, &[(0, "")], &[(0, 'a', "a", 0), (0, 'b', "", 0)])
}

/// One letter per block of equal letters, naming the block.
pub fn block_names() -> Transducer {
    machine("01", "01", 3, &[(1, ""), (2, "")], &[(0, '0', "0", 1), (0, '1', "1", 2), (1, '1', "1", 2), (1, '0', "", 1), (2, '0', "0", 1), (2, '1', "", 2)])
}

/// One letter per block of equal letters, complementing the block.
pub fn block_complements() -> Transducer {
    machine("01", "01", 3, &[(1, ""), (2, "")], &[(0, '0', "1", 1), (0, '1', "0", 2), (1, '1', "0", 2), (1, '0', "", 1), (2, '0', "1", 1), (2, '1', "", 2)])
}

pub fn word(a: &Alphabet, s: &str) -> Word {
    a.parse_word(s).unwrap()
}

/// All words over `a` up to length `n`.
pub fn inputs(a: &Alphabet, n: usize) -> Vec<Word> {
    a.words_up_to(n)
}

/// Random partial DFA over {a,b} with random outputs over {0,1}.
fn random_dfa(rng: &mut ChaCha8Rng, n: usize, density: f64) -> (Vec<Option<usize>>, Vec<bool>) {
    let mut delta = vec![None; 2 * n];
    for q in 0..n {
        for a in 0..2 {
            if rng.gen_bool(density) {
                delta[2 * q + a] = Some(rng.gen_range(0..n));
            }
        }
    }
    let mut finals: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    finals[rng.gen_range(0..n)] = true;
    (delta, finals)
}

fn random_word(rng: &mut ChaCha8Rng, max: usize) -> Vec<u32> {
    let len = rng.gen_range(0..=max);
    (0..len).map(|_| rng.gen_range(0..2)).collect()
}

/// How the second machine's outputs relate to the first's.
#[derive(Debug, Clone, Copy)]
pub enum Flavor {
    /// independent random outputs
    Independent,
    /// same outputs except a few perturbed edges
    Perturbed,
    /// outputs rotated by one letter along every edge
    Rotated,
}

/// Two transducers with the same domain: a random DFA and its product with a parity counter.
pub fn random_pair(seed: u64, max_states: usize) -> (Transducer, Transducer) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_states);
    let (delta, finals) = random_dfa(&mut rng, n, 0.8);
    let flavor = match seed % 3 {
        0 => Flavor::Independent,
        1 => Flavor::Perturbed,
        _ => Flavor::Rotated,
    };
    let edge_out: Vec<Vec<u32>> = (0..2 * n).map(|_| random_word(&mut rng, 2)).collect();
    let final_out: Vec<Vec<u32>> = (0..n).map(|_| random_word(&mut rng, 1)).collect();
    let (ia, oa) = (alphabet("ab"), alphabet("01"));
    let mut e1 = Vec::new();
    for q in 0..n {
        for a in 0..2 {
            if let Some(d) = delta[2 * q + a] {
                e1.push(Edge { src: q, input: Letter(a as u32), output: Word::from_ids(&edge_out[2 * q + a]), dst: d });
            }
        }
    }
    let f1 = (0..n).filter(|&q| finals[q]).map(|q| (q, Word::from_ids(&final_out[q]))).collect();
    let t1 = Transducer::new(ia.clone(), oa.clone(), n, vec![0], f1, e1).unwrap();

    // product with parity: state (q, p) = 2q + p
    let mut e2 = Vec::new();
    let mut alt: Vec<Vec<u32>> = Vec::new();
    for i in 0..4 * n {
        let base = &edge_out[i / 2];
        alt.push(match flavor {
            Flavor::Independent => random_word(&mut rng, 2),
            Flavor::Perturbed if rng.gen_bool(0.15) => random_word(&mut rng, 2),
            Flavor::Perturbed => base.clone(),
            Flavor::Rotated => {
                let mut b = base.clone();
                let shift = b.len().min(1);
                b.rotate_left(shift);
                b
            }
        });
    }
    for q in 0..n {
        for p in 0..2 {
            for a in 0..2 {
                if let Some(d) = delta[2 * q + a] {
                    let i = 2 * (2 * q + a) + p;
                    e2.push(Edge { src: 2 * q + p, input: Letter(a as u32), output: Word::from_ids(&alt[i]), dst: 2 * d + (1 - p) });
                }
            }
        }
    }
    let f2 = (0..n)
        .filter(|&q| finals[q])
        .flat_map(|q| {
            let out = match flavor {
                Flavor::Independent => random_word(&mut rng, 1),
                _ => final_out[q].clone(),
            };
            [(2 * q, Word::from_ids(&out)), (2 * q + 1, Word::from_ids(&out))]
        })
        .collect();
    let t2 = Transducer::new(ia, oa, 2 * n, vec![0], f2, e2).unwrap();
    (t1, t2)
}

/// Joint machine of a random pair, or `None` when its domain is empty.
pub fn random_joint(seed: u64, max_states: usize) -> Option<JointMachine> {
    let (t1, t2) = random_pair(seed, max_states);
    let j = JointMachine::new(&t1, &t2).ok()?;
    (j.n_states() > 0).then_some(j)
}

/// Random joint machine with at most `max_states` states whose cycles all have delay zero: every
/// state carries a potential and edge outputs differ in length by the potential difference.
pub fn random_bounded_joint(seed: u64, max_states: usize) -> JointMachine {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_states);
    let (delta, finals) = random_dfa(&mut rng, n, 0.85);
    let potential: Vec<i64> = (0..n).map(|q| if q == 0 { 0 } else { rng.gen_range(-1..=1) }).collect();
    let rand_word = |rng: &mut ChaCha8Rng, len: usize| Word::from_ids(&(0..len).map(|_| rng.gen_range(0..2)).collect::<Vec<_>>());
    let mut edges = Vec::new();
    for q in 0..n {
        for a in 0..2 {
            let Some(d) = delta[2 * q + a] else { continue };
            let gap = potential[d] - potential[q];
            let right_len = rng.gen_range(0..=2i64).max(-gap);
            let right = rand_word(&mut rng, right_len as usize);
            let left = if gap == 0 && rng.gen_bool(0.5) {
                // a near copy keeps distances small
                let mut w = right.clone().into_inner();
                if let Some(x) = w.first_mut().filter(|_| rng.gen_bool(0.3)) {
                    *x = Letter(1 - x.0);
                }
                Word(w)
            } else {
                rand_word(&mut rng, (right_len + gap) as usize)
            };
            edges.push(JointEdge { src: q, input: Letter(a as u32), left, right, dst: d });
        }
    }
    let finals = (0..n)
        .filter(|&q| finals[q])
        .map(|q| {
            let (l, r) = (rng.gen_range(0..=1), rng.gen_range(0..=1));
            (q, rand_word(&mut rng, l), rand_word(&mut rng, r))
        })
        .collect();
    JointMachine::from_parts(alphabet("ab"), alphabet("01"), n, vec![0], finals, edges).expect("deterministic machine")
}

/// Relation from `(src, left, right, dst)` rows over `alphabet`; `'-'` is the empty side.
/// State 0 is initial.
pub fn relation(alphabet_symbols: &str, n: usize, finals: &[usize], rows: &[(usize, char, char, usize)]) -> RationalRelation {
    let a = alphabet(alphabet_symbols);
    let side = |c: char| (c != '-').then(|| a.letter(c).unwrap());
    let mut p = PairAutomaton::new(n);
    p.set_initial(0);
    for &q in finals {
        p.set_final(q, true);
    }
    for &(s, l, r, d) in rows {
        p.add_transition(s, PairLabel::new(side(l), side(r)), d);
    }
    RationalRelation::new(a, p).unwrap()
}

/// Deletes the first `k` occurrences of `a` (all of them when there are fewer).
pub fn delete_first_as(k: usize) -> RationalRelation {
    let mut rows = Vec::new();
    for i in 0..=k {
        rows.push((i, 'b', 'b', i));
        if i < k {
            rows.push((i, 'a', '-', i + 1));
        }
    }
    rows.push((k, 'a', 'a', k));
    relation("ab", k + 1, &(0..=k).collect::<Vec<_>>(), &rows)
}

pub fn delete_all_as() -> RationalRelation {
    relation("ab", 1, &[0], &[(0, 'a', '-', 0), (0, 'b', 'b', 0)])
}

/// Random relation over {a,b}: identity loops on a chain whose forward edges edit at most one
/// letter. With `same_length` every edge has one letter per side. Occasionally a loop edits a
/// letter, which makes the diameter infinite.
pub fn random_relation(seed: u64, same_length: bool) -> RationalRelation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=4);
    let a = alphabet("ab");
    let letter = |rng: &mut ChaCha8Rng| Some(Letter(rng.gen_range(0..2)));
    let mut p = PairAutomaton::new(n);
    p.set_initial(0);
    p.set_final(n - 1, true);
    for q in 0..n {
        if rng.gen_bool(0.6) {
            for x in a.letters() {
                p.add_transition(q, PairLabel::new(Some(x), Some(x)), q);
            }
        }
        if q + 1 < n {
            for _ in 0..rng.gen_range(1..=2) {
                let label = match if same_length { 0 } else { rng.gen_range(0..3) } {
                    0 => PairLabel::new(letter(&mut rng), letter(&mut rng)),
                    1 => PairLabel::new(letter(&mut rng), None),
                    _ => PairLabel::new(None, letter(&mut rng)),
                };
                p.add_transition(q, label, q + 1);
            }
        }
    }
    if rng.gen_bool(0.15) {
        let q = rng.gen_range(0..n);
        p.add_transition(q, PairLabel::new(Some(Letter(0)), Some(Letter(1))), q);
    }
    RationalRelation::new(a, p).unwrap()
}
