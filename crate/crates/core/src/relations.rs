//! Rational relations on words over one alphabet, their composition and powers, and the
//! index of a relation with respect to a generating relation.
//!
//! The index of `r` with respect to `s` is the least `k` with `r ⊆ s^{≤k}`, where
//! `s^{≤k} = (s ∪ id)^k`. Containment is decided on the left-aligned padded encoding of pairs,
//! which is regular for relations whose pair automata have bounded delay.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use crate::automata::StateId;
use crate::delay::{compute_delays, Delays};
use crate::error::{Error, Result};
use crate::kapprox::distance;
use crate::metric::MetricId;
use crate::pair::{pairs_up_to, PairAutomaton, PairLabel};
use crate::transducer::nivat_split;
use crate::verdict::{Distance, Limits};
use crate::word::{Alphabet, ExtendedNat, Letter, Word};

/// A rational relation given by a trimmed pair automaton; both components range over `alphabet`.
#[derive(Debug, Clone)]
pub struct RationalRelation {
    alphabet: Alphabet,
    automaton: PairAutomaton,
}

impl RationalRelation {
    /// Validates letters, drops input tags and trims.
    pub fn new(alphabet: Alphabet, automaton: PairAutomaton) -> Result<Self> {
        for t in automaton.transitions() {
            for l in [t.label.left, t.label.right].into_iter().flatten() {
                alphabet.check_word(&[l])?;
            }
        }
        let automaton = automaton.map_labels(PairLabel::untagged).trim();
        Ok(Self { alphabet, automaton })
    }

    /// The identity relation on all words.
    pub fn identity(alphabet: &Alphabet) -> Self {
        let mut p = PairAutomaton::new(1);
        p.set_initial(0);
        p.set_final(0, true);
        for a in alphabet.letters() {
            p.add_transition(0, PairLabel::new(Some(a), Some(a)), 0);
        }
        Self { alphabet: alphabet.clone(), automaton: p }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn automaton(&self) -> &PairAutomaton {
        &self.automaton
    }

    fn check_alphabet(&self, other: &RationalRelation) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch("relations are over different alphabets".into()));
        }
        Ok(())
    }

    pub fn union(&self, other: &RationalRelation) -> Result<RationalRelation> {
        self.check_alphabet(other)?;
        let n = self.automaton.n_states();
        let mut p = self.automaton.clone();
        for _ in 0..other.automaton.n_states() {
            p.add_state();
        }
        for &q in other.automaton.initial() {
            p.set_initial(n + q);
        }
        for q in other.automaton.finals() {
            p.set_final(n + q, true);
        }
        for t in other.automaton.transitions() {
            p.add_transition(n + t.src, t.label, n + t.dst);
        }
        Ok(Self { alphabet: self.alphabet.clone(), automaton: p.trim() })
    }

    /// `{(u, w) | (u, v) ∈ self, (v, w) ∈ other}`.
    pub fn compose(&self, other: &RationalRelation) -> Result<RationalRelation> {
        self.check_alphabet(other)?;
        let (a, b) = (&self.automaton, &other.automaton);
        let (out_a, out_b) = (a.out_edges(), b.out_edges());
        let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
        let mut queue = VecDeque::new();
        let mut p = PairAutomaton::new(0);
        let mut intern = |key: (StateId, StateId), p: &mut PairAutomaton, queue: &mut VecDeque<_>| -> StateId {
            *index.entry(key).or_insert_with(|| {
                let s = p.add_state();
                p.set_final(s, a.is_final(key.0) && b.is_final(key.1));
                queue.push_back(key);
                s
            })
        };
        for &qa in a.initial() {
            for &qb in b.initial() {
                let s = intern((qa, qb), &mut p, &mut queue);
                p.set_initial(s);
            }
        }
        while let Some((qa, qb)) = queue.pop_front() {
            let src = intern((qa, qb), &mut p, &mut queue);
            for &ea in &out_a[qa] {
                let ta = &a.transitions()[ea];
                match ta.label.right {
                    // the first relation moves alone when its middle component is empty
                    None => {
                        let dst = intern((ta.dst, qb), &mut p, &mut queue);
                        p.add_transition(src, PairLabel::new(ta.label.left, None), dst);
                    }
                    Some(mid) => {
                        for &eb in &out_b[qb] {
                            let tb = &b.transitions()[eb];
                            if tb.label.left == Some(mid) {
                                let dst = intern((ta.dst, tb.dst), &mut p, &mut queue);
                                p.add_transition(src, PairLabel::new(ta.label.left, tb.label.right), dst);
                            }
                        }
                    }
                }
            }
            for &eb in &out_b[qb] {
                let tb = &b.transitions()[eb];
                if tb.label.left.is_none() {
                    let dst = intern((qa, tb.dst), &mut p, &mut queue);
                    p.add_transition(src, PairLabel::new(None, tb.label.right), dst);
                }
            }
        }
        Ok(Self { alphabet: self.alphabet.clone(), automaton: p.trim() })
    }

    /// `self^n`, with `self^0` the identity.
    pub fn power(&self, n: usize) -> Result<RationalRelation> {
        let mut r = RationalRelation::identity(&self.alphabet);
        for _ in 0..n {
            r = r.compose(self)?;
        }
        Ok(r)
    }

    /// `(self ∪ id)^k`: pairs related by at most `k` steps.
    pub fn power_upto(&self, k: usize) -> Result<RationalRelation> {
        self.union(&RationalRelation::identity(&self.alphabet))?.power(k)
    }

    /// Accepted pairs whose components have length at most `max_len`.
    pub fn pairs_up_to(&self, max_len: usize) -> BTreeSet<(Word, Word)> {
        pairs_up_to(&self.automaton, max_len)
    }

    pub fn contains(&self, u: &[Letter], v: &[Letter]) -> bool {
        let p = &self.automaton;
        let out = p.out_edges();
        let mut seen: HashSet<(StateId, usize, usize)> = p.initial().iter().map(|&q| (q, 0, 0)).collect();
        let mut stack: Vec<_> = seen.iter().copied().collect();
        while let Some((q, i, j)) = stack.pop() {
            if i == u.len() && j == v.len() && p.is_final(q) {
                return true;
            }
            for &e in &out[q] {
                let t = &p.transitions()[e];
                let ni = match t.label.left {
                    None => i,
                    Some(a) if u.get(i) == Some(&a) => i + 1,
                    Some(_) => continue,
                };
                let nj = match t.label.right {
                    None => j,
                    Some(b) if v.get(j) == Some(&b) => j + 1,
                    Some(_) => continue,
                };
                if seen.insert((t.dst, ni, nj)) {
                    stack.push((t.dst, ni, nj));
                }
            }
        }
        false
    }

    /// Same relation with a single initial state, so that accepting paths are in bijection with
    /// transition sequences starting there.
    fn single_initial(&self) -> PairAutomaton {
        let p = &self.automaton;
        if p.initial().len() <= 1 {
            return p.clone();
        }
        let mut q = p.clone();
        let start = q.add_state();
        q.set_final(start, p.initial().iter().any(|&i| p.is_final(i)));
        for t in p.transitions() {
            if p.is_initial(t.src) {
                q.add_transition(start, t.label, t.dst);
            }
        }
        let mut r = PairAutomaton::new(q.n_states());
        r.set_initial(start);
        for s in q.finals() {
            r.set_final(s, true);
        }
        for t in q.transitions() {
            r.add_transition(t.src, t.label, t.dst);
        }
        r.trim()
    }
}

/// Pairs at distance exactly one under `m`: the unit sphere of an edit metric, or the pairs
/// whose lengths differ by one.
pub fn distance_relation(m: MetricId, alphabet: &Alphabet) -> Result<RationalRelation> {
    let letters: Vec<Letter> = alphabet.letters().collect();
    let l = |a: Letter| Some(a);
    let mut p = PairAutomaton::new(2);
    p.set_initial(0);
    p.set_final(1, true);
    let copy_loops = |p: &mut PairAutomaton, q: StateId| {
        for &a in &letters {
            p.add_transition(q, PairLabel::new(l(a), l(a)), q);
        }
    };
    if m != MetricId::Length {
        copy_loops(&mut p, 0);
        copy_loops(&mut p, 1);
    }
    let substitutions = |p: &mut PairAutomaton| {
        for &a in &letters {
            for &b in &letters {
                if a != b {
                    p.add_transition(0, PairLabel::new(l(a), l(b)), 1);
                }
            }
        }
    };
    let indels = |p: &mut PairAutomaton| {
        for &a in &letters {
            p.add_transition(0, PairLabel::new(l(a), None), 1);
            p.add_transition(0, PairLabel::new(None, l(a)), 1);
        }
    };
    let swaps = |p: &mut PairAutomaton| {
        for &a in &letters {
            for &b in &letters {
                if a != b {
                    let mid = p.add_state();
                    p.add_transition(0, PairLabel::new(l(a), l(b)), mid);
                    p.add_transition(mid, PairLabel::new(l(b), l(a)), 1);
                }
            }
        }
    };
    match m {
        MetricId::Hamming => substitutions(&mut p),
        MetricId::Lcs => indels(&mut p),
        MetricId::Levenshtein => {
            substitutions(&mut p);
            indels(&mut p);
        }
        MetricId::Transposition => swaps(&mut p),
        MetricId::DamerauLevenshtein => {
            substitutions(&mut p);
            indels(&mut p);
            swaps(&mut p);
        }
        MetricId::Length => {
            for &a in &letters {
                for &b in &letters {
                    p.add_transition(0, PairLabel::new(l(a), l(b)), 0);
                }
            }
            indels(&mut p);
        }
        MetricId::Conjugacy => {
            // Moves the first letter `a` to the end (or the last letter to the front). The
            // shifted word differs from the original iff it contains a letter other than `a`;
            // the second copy of the middle loop is reached only after such a letter.
            let mut p2 = PairAutomaton::new(2);
            p2.set_initial(0);
            p2.set_final(1, true);
            for &a in &letters {
                for to_end in [true, false] {
                    let (same, mixed) = (p2.add_state(), p2.add_state());
                    let (head, tail) = if to_end {
                        (PairLabel::new(l(a), None), PairLabel::new(None, l(a)))
                    } else {
                        (PairLabel::new(None, l(a)), PairLabel::new(l(a), None))
                    };
                    p2.add_transition(0, head, same);
                    for &b in &letters {
                        let copy = PairLabel::new(l(b), l(b));
                        p2.add_transition(same, copy, if b == a { same } else { mixed });
                        p2.add_transition(mixed, copy, mixed);
                    }
                    p2.add_transition(mixed, tail, 1);
                }
            }
            p = p2;
        }
        MetricId::Discrete => {
            return Err(Error::Unsupported("the discrete metric has no unit sphere".into()));
        }
    }
    RationalRelation::new(alphabet.clone(), p)
}

/// Largest `m`-distance between the components of a pair of `r`.
pub fn diameter(r: &RationalRelation, m: MetricId, limits: &Limits) -> Result<Distance> {
    let (t1, t2) = nivat_split(&r.single_initial(), &r.alphabet)?;
    distance(m, &t1, &t2, limits)
}

/// True when index answers over this declared metric are heuristic: the length pseudo-metric
/// does not separate words, so its spheres do not generate a metric.
pub fn index_is_experimental(m: MetricId) -> bool {
    m == MetricId::Length
}

/// Least `k` with `r ⊆ s^{≤k}`, or infinity. `s` is asserted to generate `declared`, whose
/// diameter on `r` decides finiteness; `Unknown` when no `k ≤ limits.index_max` is found.
pub fn index(r: &RationalRelation, s: &RationalRelation, declared: MetricId, limits: &Limits) -> Result<Distance> {
    r.check_alphabet(s)?;
    match diameter(r, declared, limits)? {
        Distance::Unknown(msg) => return Ok(Distance::Unknown(msg)),
        Distance::Value(ExtendedNat::Infinite) => return Ok(Distance::Value(ExtendedNat::Infinite)),
        Distance::Value(ExtendedNat::Finite(_)) => {}
    }
    let sync_r = SyncEncoding::new(&r.automaton)?;
    let mut s_k = RationalRelation::identity(&r.alphabet);
    let s_or_id = s.union(&RationalRelation::identity(&r.alphabet))?;
    for k in 0..=limits.index_max {
        if k > 0 {
            s_k = s_k.compose(&s_or_id)?;
            if s_k.automaton.n_states() > limits.state_ceiling {
                return Err(Error::Resource(format!("power {k} exceeds {} states", limits.state_ceiling)));
            }
        }
        if contained_in(&sync_r, &SyncEncoding::new(&s_k.automaton)?, limits)?.is_none() {
            return Ok(Distance::Value(ExtendedNat::Finite(k as u64)));
        }
    }
    Ok(Distance::Unknown(format!("no index up to {}", limits.index_max)))
}

/// A pair of `r` outside `s`, or `None` when `r ⊆ s`. Both automata must have bounded delay.
pub fn containment_counterexample(r: &RationalRelation, s: &RationalRelation, limits: &Limits) -> Result<Option<(Word, Word)>> {
    r.check_alphabet(s)?;
    contained_in(&SyncEncoding::new(&r.automaton)?, &SyncEncoding::new(&s.automaton)?, limits)
}

/// One position of the padded encoding; `None` pads the shorter component.
type SyncLetter = (Option<Letter>, Option<Letter>);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Mode {
    Both,
    /// the right component has ended
    LeftOnly,
    /// the left component has ended
    RightOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct SyncNode {
    state: StateId,
    mode: Mode,
    left_ahead: bool,
    buf: VecDeque<Letter>,
}

/// The padded encoding of a bounded-delay relation as an automaton with silent moves, explored
/// on demand. Buffers hold the letters one component has produced ahead of the other.
struct SyncEncoding<'a> {
    p: &'a PairAutomaton,
    out: Vec<Vec<usize>>,
    cap: usize,
}

impl<'a> SyncEncoding<'a> {
    fn new(p: &'a PairAutomaton) -> Result<Self> {
        let cap = match compute_delays(p) {
            Delays::Unbounded { .. } => {
                return Err(Error::Unsupported("index requires relations with bounded delay".into()));
            }
            Delays::Consistent(split) => split.max_abs_delay() as usize + 1,
        };
        Ok(Self { p, out: p.out_edges(), cap })
    }

    fn initial(&self) -> Vec<SyncNode> {
        self.p
            .initial()
            .iter()
            .map(|&state| SyncNode { state, mode: Mode::Both, left_ahead: true, buf: VecDeque::new() })
            .collect()
    }

    fn accepting(&self, n: &SyncNode) -> bool {
        self.p.is_final(n.state) && n.buf.is_empty()
    }

    /// Successors, each with the encoding letter it emits (if any).
    fn moves(&self, n: &SyncNode) -> Vec<(Option<SyncLetter>, SyncNode)> {
        let mut res = Vec::new();
        match n.mode {
            Mode::Both => {
                for (mode, left) in [(Mode::LeftOnly, true), (Mode::RightOnly, false)] {
                    if n.buf.is_empty() || n.left_ahead == left {
                        res.push((None, SyncNode { mode, left_ahead: left, ..n.clone() }));
                    }
                }
            }
            Mode::LeftOnly | Mode::RightOnly => {
                if let Some(&a) = n.buf.front() {
                    let mut next = n.clone();
                    next.buf.pop_front();
                    let letter = if n.mode == Mode::LeftOnly { (Some(a), None) } else { (None, Some(a)) };
                    res.push((Some(letter), next));
                }
            }
        }
        for &e in &self.out[n.state] {
            let t = &self.p.transitions()[e];
            let (left, right) = (t.label.left, t.label.right);
            let mut next = SyncNode { state: t.dst, ..n.clone() };
            let emitted = match n.mode {
                Mode::LeftOnly if right.is_some() => continue,
                Mode::RightOnly if left.is_some() => continue,
                Mode::LeftOnly | Mode::RightOnly => {
                    next.buf.extend(left.or(right));
                    None
                }
                Mode::Both => {
                    let mut emitted = None;
                    for (is_left, x) in [(true, left), (false, right)] {
                        let Some(x) = x else { continue };
                        if next.buf.is_empty() || next.left_ahead == is_left {
                            next.left_ahead = is_left;
                            next.buf.push_back(x);
                        } else {
                            let y = next.buf.pop_front().expect("non-empty buffer");
                            emitted = Some(if is_left { (Some(x), Some(y)) } else { (Some(y), Some(x)) });
                        }
                    }
                    emitted
                }
            };
            if next.buf.len() <= self.cap {
                res.push((emitted, next));
            }
        }
        res
    }

    fn closure(&self, nodes: impl IntoIterator<Item = SyncNode>) -> BTreeSet<SyncNode> {
        let mut set: BTreeSet<SyncNode> = BTreeSet::new();
        let mut stack: Vec<SyncNode> = nodes.into_iter().collect();
        while let Some(n) = stack.pop() {
            if !set.insert(n.clone()) {
                continue;
            }
            for (letter, m) in self.moves(&n) {
                if letter.is_none() && !set.contains(&m) {
                    stack.push(m);
                }
            }
        }
        set
    }
}

/// Explores `r` against the subset construction of `s`; returns a pair of `r` not in `s`.
fn contained_in(r: &SyncEncoding, s: &SyncEncoding, limits: &Limits) -> Result<Option<(Word, Word)>> {
    type Key = (SyncNode, BTreeSet<SyncNode>);
    let mut pred: HashMap<Key, Option<(Key, Option<SyncLetter>)>> = HashMap::new();
    let mut queue: VecDeque<Key> = VecDeque::new();
    let s0 = s.closure(s.initial());
    for n in r.initial() {
        let key = (n, s0.clone());
        pred.insert(key.clone(), None);
        queue.push_back(key);
    }
    let mut step_cache: HashMap<(BTreeSet<SyncNode>, SyncLetter), BTreeSet<SyncNode>> = HashMap::new();
    while let Some(key) = queue.pop_front() {
        let (rn, macro_s) = &key;
        if r.accepting(rn) && !macro_s.iter().any(|n| s.accepting(n)) {
            let mut letters = Vec::new();
            let mut cur = key.clone();
            while let Some(Some((prev, letter))) = pred.get(&cur) {
                letters.extend(*letter);
                cur = prev.clone();
            }
            letters.reverse();
            let u: Word = letters.iter().filter_map(|l| l.0).collect();
            let v: Word = letters.iter().filter_map(|l| l.1).collect();
            return Ok(Some((u, v)));
        }
        for (letter, next_r) in r.moves(rn) {
            let next_s = match letter {
                None => macro_s.clone(),
                Some(x) => step_cache
                    .entry((macro_s.clone(), x))
                    .or_insert_with(|| {
                        let moved = macro_s.iter().flat_map(|n| s.moves(n)).filter(|(l, _)| *l == Some(x)).map(|(_, m)| m);
                        s.closure(moved)
                    })
                    .clone(),
            };
            let next = (next_r, next_s);
            if !pred.contains_key(&next) {
                if pred.len() >= limits.state_ceiling {
                    return Err(Error::Resource(format!("containment exceeds {} states", limits.state_ceiling)));
                }
                pred.insert(next.clone(), Some((key.clone(), letter)));
                queue.push_back(next);
            }
        }
    }
    Ok(None)
}
