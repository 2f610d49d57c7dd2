//! Automata whose edges carry pairs of output letters, with identity and length-preservation
//! tests.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::automata::{Nfa, StateId};
use crate::delay::{compute_delays, Delays};
use crate::word::{Letter, Word};

/// Edge label of a pair automaton: at most one letter per component. `input` records the input
/// letter of the originating machine edge, so that paths can be replayed as input words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairLabel {
    pub left: Option<Letter>,
    pub right: Option<Letter>,
    pub input: Option<Letter>,
}

impl PairLabel {
    pub const EPSILON: PairLabel = PairLabel { left: None, right: None, input: None };

    pub fn new(left: Option<Letter>, right: Option<Letter>) -> Self {
        Self { left, right, input: None }
    }

    /// `|left| - |right|`
    pub fn gap(&self) -> i64 {
        i64::from(self.left.is_some()) - i64::from(self.right.is_some())
    }

    pub fn untagged(&self) -> PairLabel {
        PairLabel { input: None, ..*self }
    }
}

/// Trimmed automaton over [`PairLabel`]s; it denotes a relation on words.
pub type PairAutomaton = Nfa<PairLabel>;

/// Adds a path from `src` to `dst` spelling `(left, right)` with the input tags `input`, using
/// fresh intermediate states and left-aligned components.
pub fn add_chain(p: &mut PairAutomaton, src: StateId, left: &[Letter], right: &[Letter], input: &[Letter], dst: StateId) {
    let n = left.len().max(right.len()).max(input.len()).max(1);
    let mut cur = src;
    for i in 0..n {
        let next = if i + 1 == n { dst } else { p.add_state() };
        let label = PairLabel { left: left.get(i).copied(), right: right.get(i).copied(), input: input.get(i).copied() };
        p.add_transition(cur, label, next);
        cur = next;
    }
}

/// Left word, right word and input word spelled by a transition path.
pub fn path_words(p: &PairAutomaton, path: &[usize]) -> (Word, Word, Word) {
    let (mut l, mut r, mut i) = (Vec::new(), Vec::new(), Vec::new());
    for &e in path {
        let t = &p.transitions()[e].label;
        l.extend(t.left);
        r.extend(t.right);
        i.extend(t.input);
    }
    (Word(l), Word(r), Word(i))
}

/// All accepted pairs whose components both have length at most `max_len`.
pub fn pairs_up_to(p: &PairAutomaton, max_len: usize) -> BTreeSet<(Word, Word)> {
    let out = p.out_edges();
    let mut seen: BTreeSet<(StateId, Word, Word)> = BTreeSet::new();
    let mut stack: Vec<(StateId, Word, Word)> = Vec::new();
    for &q in p.initial() {
        let c = (q, Word::empty(), Word::empty());
        if seen.insert(c.clone()) {
            stack.push(c);
        }
    }
    let mut result = BTreeSet::new();
    while let Some((q, u, v)) = stack.pop() {
        if p.is_final(q) {
            result.insert((u.clone(), v.clone()));
        }
        for &e in &out[q] {
            let t = &p.transitions()[e];
            let nu = match t.label.left {
                Some(a) => u.pushed(a),
                None => u.clone(),
            };
            let nv = match t.label.right {
                Some(b) => v.pushed(b),
                None => v.clone(),
            };
            if nu.len() <= max_len && nv.len() <= max_len {
                let c = (t.dst, nu, nv);
                if seen.insert(c.clone()) {
                    stack.push(c);
                }
            }
        }
    }
    result
}

/// Letters produced ahead on one side and not yet matched by the other.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Pending {
    left_ahead: bool,
    buf: VecDeque<Letter>,
}

impl Pending {
    fn empty() -> Self {
        Pending { left_ahead: true, buf: VecDeque::new() }
    }

    /// Feeds one letter on the given side; false on a mismatch.
    fn feed(&mut self, is_left: bool, a: Letter) -> bool {
        if self.buf.is_empty() || self.left_ahead == is_left {
            self.left_ahead = is_left;
            self.buf.push_back(a);
            true
        } else {
            self.buf.pop_front() == Some(a)
        }
    }
}

/// An accepting path (transition indices of the given automaton) whose pair has different
/// components, or `None` when the relation is contained in the identity.
pub fn find_unequal_pair(p: &PairAutomaton) -> Option<Vec<usize>> {
    let (t, _, tmap) = p.trim_with_maps();
    let map_back = |path: Vec<usize>| -> Vec<usize> { path.into_iter().map(|e| tmap[e]).collect() };
    let split = match compute_delays(&t) {
        Delays::Unbounded { path } => {
            let last = path.last().map_or(t.initial()[0], |&e| t.transitions()[e].dst);
            let mut full = path;
            full.extend(t.path_to_final(last).expect("trimmed automaton"));
            return Some(map_back(full));
        }
        Delays::Consistent(split) => split,
    };
    let s = &split.automaton;
    if let Some(f) = s.finals().find(|&f| split.delay(f) != 0) {
        let path = s.path_from_initial(f).expect("split automaton is accessible");
        return Some(map_back(split.lift_path(&path)));
    }
    // letter-to-letter synchronization: the pending buffer at a split state has length |delay|
    let out = s.out_edges();
    type Node = (StateId, Pending);
    let mut pred: HashMap<Node, Option<(Node, usize)>> = HashMap::new();
    let mut queue = VecDeque::new();
    for &q in s.initial() {
        let c = (q, Pending::empty());
        pred.insert(c.clone(), None);
        queue.push_back(c);
    }
    while let Some(c) = queue.pop_front() {
        for &e in &out[c.0] {
            let tr = &s.transitions()[e];
            let mut pend = c.1.clone();
            let ok = tr.label.left.is_none_or(|a| pend.feed(true, a)) && tr.label.right.is_none_or(|b| pend.feed(false, b));
            if !ok {
                let mut path = vec![e];
                let mut cur = c.clone();
                while let Some(Some((prev, pe))) = pred.get(&cur) {
                    path.push(*pe);
                    cur = prev.clone();
                }
                path.reverse();
                path.extend(s.path_to_final(tr.dst).expect("split automaton is coaccessible"));
                return Some(map_back(split.lift_path(&path)));
            }
            let next = (tr.dst, pend);
            if !pred.contains_key(&next) {
                pred.insert(next.clone(), Some((c.clone(), e)));
                queue.push_back(next);
            }
        }
    }
    None
}

/// True iff every accepted pair has equal components.
pub fn is_identity_relation(p: &PairAutomaton) -> bool {
    find_unequal_pair(p).is_none()
}

/// True iff every accepted pair has components of equal length.
pub fn is_length_preserving(p: &PairAutomaton) -> bool {
    match compute_delays(&p.trim()) {
        Delays::Unbounded { .. } => false,
        Delays::Consistent(split) => split.automaton.finals().all(|f| split.delay(f) == 0),
    }
}
