//! Finite automata over arbitrary edge labels.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::hash::Hash;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type StateId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transition<L> {
    pub src: StateId,
    pub label: L,
    pub dst: StateId,
}

/// Nondeterministic automaton; transitions are identified by their index, so parallel
/// transitions with equal labels count as distinct runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa<L> {
    n_states: usize,
    initial: Vec<StateId>, // sorted, no duplicates
    finals: Vec<bool>,
    transitions: Vec<Transition<L>>,
}

/// Strongly connected components listed in topological order of the condensation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccDecomposition {
    pub component: Vec<usize>,
    pub order: Vec<Vec<StateId>>,
}

impl SccDecomposition {
    /// True iff the component of `q` contains a cycle.
    pub fn is_cyclic<L>(&self, nfa: &Nfa<L>, q: StateId) -> bool {
        let c = self.component[q];
        self.order[c].len() > 1 || nfa.transitions.iter().any(|t| t.src == q && t.dst == q)
    }
}

impl<L: Clone> Nfa<L> {
    pub fn new(n_states: usize) -> Self {
        Self { n_states, initial: Vec::new(), finals: vec![false; n_states], transitions: Vec::new() }
    }

    pub fn add_state(&mut self) -> StateId {
        self.n_states += 1;
        self.finals.push(false);
        self.n_states - 1
    }

    pub fn add_transition(&mut self, src: StateId, label: L, dst: StateId) -> usize {
        assert!(src < self.n_states && dst < self.n_states, "transition endpoint out of range");
        self.transitions.push(Transition { src, label, dst });
        self.transitions.len() - 1
    }

    pub fn set_initial(&mut self, q: StateId) {
        if let Err(pos) = self.initial.binary_search(&q) {
            self.initial.insert(pos, q);
        }
    }

    pub fn set_final(&mut self, q: StateId, is_final: bool) {
        self.finals[q] = is_final;
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn is_initial(&self, q: StateId) -> bool {
        self.initial.binary_search(&q).is_ok()
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals[q]
    }

    pub fn finals(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.n_states).filter(|&q| self.finals[q])
    }

    pub fn transitions(&self) -> &[Transition<L>] {
        &self.transitions
    }

    /// Indices of outgoing transitions per state.
    pub fn out_edges(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_states];
        for (i, t) in self.transitions.iter().enumerate() {
            out[t.src].push(i);
        }
        out
    }

    /// Indices of incoming transitions per state.
    pub fn in_edges(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n_states];
        for (i, t) in self.transitions.iter().enumerate() {
            inc[t.dst].push(i);
        }
        inc
    }

    pub fn accessible(&self) -> Vec<bool> {
        let out = self.out_edges();
        let mut seen = vec![false; self.n_states];
        let mut stack: Vec<StateId> = self.initial.clone();
        for &q in &stack {
            seen[q] = true;
        }
        while let Some(q) = stack.pop() {
            for &e in &out[q] {
                let d = self.transitions[e].dst;
                if !seen[d] {
                    seen[d] = true;
                    stack.push(d);
                }
            }
        }
        seen
    }

    pub fn coaccessible(&self) -> Vec<bool> {
        let inc = self.in_edges();
        let mut seen = self.finals.clone();
        let mut stack: Vec<StateId> = self.finals().collect();
        while let Some(q) = stack.pop() {
            for &e in &inc[q] {
                let s = self.transitions[e].src;
                if !seen[s] {
                    seen[s] = true;
                    stack.push(s);
                }
            }
        }
        seen
    }

    /// Restriction to the states satisfying `keep`, renumbered in increasing order. Returns the
    /// automaton, the old index of every new state and the old index of every new transition.
    pub fn restrict(&self, keep: &[bool]) -> (Nfa<L>, Vec<StateId>, Vec<usize>) {
        let mut new_id = vec![usize::MAX; self.n_states];
        let mut old_state = Vec::new();
        for q in 0..self.n_states {
            if keep[q] {
                new_id[q] = old_state.len();
                old_state.push(q);
            }
        }
        let mut nfa = Nfa::new(old_state.len());
        for &q in &self.initial {
            if keep[q] {
                nfa.set_initial(new_id[q]);
            }
        }
        for (n, &q) in old_state.iter().enumerate() {
            nfa.finals[n] = self.finals[q];
        }
        let mut old_transition = Vec::new();
        for (i, t) in self.transitions.iter().enumerate() {
            if keep[t.src] && keep[t.dst] {
                nfa.transitions.push(Transition { src: new_id[t.src], label: t.label.clone(), dst: new_id[t.dst] });
                old_transition.push(i);
            }
        }
        (nfa, old_state, old_transition)
    }

    /// Sub-automaton of accessible and coaccessible states, with index maps as in [`Nfa::restrict`].
    pub fn trim_with_maps(&self) -> (Nfa<L>, Vec<StateId>, Vec<usize>) {
        let acc = self.accessible();
        let coacc = self.coaccessible();
        let keep: Vec<bool> = acc.iter().zip(&coacc).map(|(a, b)| *a && *b).collect();
        self.restrict(&keep)
    }

    pub fn trim(&self) -> Nfa<L> {
        self.trim_with_maps().0
    }

    pub fn is_trim(&self) -> bool {
        self.accessible().iter().zip(self.coaccessible()).all(|(a, b)| *a && b)
    }

    pub fn map_labels<M: Clone>(&self, mut f: impl FnMut(&L) -> M) -> Nfa<M> {
        Nfa {
            n_states: self.n_states,
            initial: self.initial.clone(),
            finals: self.finals.clone(),
            transitions: self
                .transitions
                .iter()
                .map(|t| Transition { src: t.src, label: f(&t.label), dst: t.dst })
                .collect(),
        }
    }

    /// Iterative Tarjan decomposition.
    pub fn scc(&self) -> SccDecomposition {
        let n = self.n_states;
        let out = self.out_edges();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut component = vec![usize::MAX; n];
        let mut comps: Vec<Vec<StateId>> = Vec::new();
        let mut counter = 0;
        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            // frames: (state, next outgoing edge position)
            let mut frames: Vec<(StateId, usize)> = vec![(root, 0)];
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (q, ref mut pos)) = frames.last_mut() {
                if *pos < out[q].len() {
                    let d = self.transitions[out[q][*pos]].dst;
                    *pos += 1;
                    if index[d] == usize::MAX {
                        index[d] = counter;
                        low[d] = counter;
                        counter += 1;
                        stack.push(d);
                        on_stack[d] = true;
                        frames.push((d, 0));
                    } else if on_stack[d] {
                        low[q] = low[q].min(index[d]);
                    }
                } else {
                    frames.pop();
                    if let Some(&(parent, _)) = frames.last() {
                        low[parent] = low[parent].min(low[q]);
                    }
                    if low[q] == index[q] {
                        let mut comp = Vec::new();
                        loop {
                            let x = stack.pop().expect("tarjan stack");
                            on_stack[x] = false;
                            component[x] = comps.len();
                            comp.push(x);
                            if x == q {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        comps.push(comp);
                    }
                }
            }
        }
        // Tarjan emits components in reverse topological order
        comps.reverse();
        let k = comps.len();
        for c in component.iter_mut() {
            *c = k - 1 - *c;
        }
        SccDecomposition { component, order: comps }
    }

    /// Shortest transition path from some initial state to `target`.
    pub fn path_from_initial(&self, target: StateId) -> Option<Vec<usize>> {
        self.shortest_path(&self.initial.clone(), |q| q == target)
    }

    /// Shortest transition path from `from` to some final state.
    pub fn path_to_final(&self, from: StateId) -> Option<Vec<usize>> {
        self.shortest_path(&[from], |q| self.finals[q])
    }

    /// Shortest transition path from one of `sources` to a state satisfying `goal`.
    pub fn shortest_path(&self, sources: &[StateId], goal: impl Fn(StateId) -> bool) -> Option<Vec<usize>> {
        let out = self.out_edges();
        let mut pred: Vec<Option<usize>> = vec![None; self.n_states];
        let mut seen = vec![false; self.n_states];
        let mut queue = VecDeque::new();
        for &s in sources {
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(q) = queue.pop_front() {
            if goal(q) {
                let mut path = Vec::new();
                let mut cur = q;
                while let Some(e) = pred[cur] {
                    path.push(e);
                    cur = self.transitions[e].src;
                }
                path.reverse();
                return Some(path);
            }
            for &e in &out[q] {
                let d = self.transitions[e].dst;
                if !seen[d] {
                    seen[d] = true;
                    pred[d] = Some(e);
                    queue.push_back(d);
                }
            }
        }
        None
    }
}

impl<L: Clone + Eq + Hash> Nfa<L> {
    /// Number of accepting runs on `word`, saturated at 2.
    pub fn count_runs(&self, word: &[L]) -> u8 {
        let out = self.out_edges();
        let mut current: HashMap<StateId, u8> = self.initial.iter().map(|&q| (q, 1)).collect();
        for a in word {
            let mut next: HashMap<StateId, u8> = HashMap::new();
            for (&q, &c) in &current {
                for &e in &out[q] {
                    let t = &self.transitions[e];
                    if &t.label == a {
                        let slot = next.entry(t.dst).or_insert(0);
                        *slot = (*slot + c).min(2);
                    }
                }
            }
            current = next;
        }
        current.iter().filter(|(q, _)| self.finals[**q]).map(|(_, &c)| c).fold(0u8, |a, b| (a + b).min(2))
    }

    pub fn accepts(&self, word: &[L]) -> bool {
        self.count_runs(word) > 0
    }

    /// True iff no word has two accepting runs. Explores the self-product on transition pairs,
    /// remembering whether the two runs have already diverged.
    pub fn is_unambiguous(&self) -> bool {
        let (a, _, _) = self.trim_with_maps();
        let out = a.out_edges();
        let mut seen: BTreeSet<(StateId, StateId, bool)> = BTreeSet::new();
        let mut stack = Vec::new();
        for &p in &a.initial {
            for &q in &a.initial {
                let s = (p, q, p != q);
                if seen.insert(s) {
                    stack.push(s);
                }
            }
        }
        while let Some((p, q, diverged)) = stack.pop() {
            if diverged && a.finals[p] && a.finals[q] {
                return false;
            }
            for &e in &out[p] {
                for &f in &out[q] {
                    let (te, tf) = (&a.transitions[e], &a.transitions[f]);
                    if te.label == tf.label {
                        let s = (te.dst, tf.dst, diverged || e != f);
                        if seen.insert(s) {
                            stack.push(s);
                        }
                    }
                }
            }
        }
        true
    }

    fn alphabet(&self) -> Vec<L> {
        let mut labels: Vec<L> = Vec::new();
        for t in &self.transitions {
            if !labels.contains(&t.label) {
                labels.push(t.label.clone());
            }
        }
        labels
    }
}

/// Language equality of two unambiguous automata, decided on run-counting vectors over exact
/// rationals. The span of reachable vectors has dimension at most the total number of states.
pub fn equiv_unambiguous<L: Clone + Eq + Hash>(a: &Nfa<L>, b: &Nfa<L>) -> Result<bool> {
    if !a.is_unambiguous() || !b.is_unambiguous() {
        return Err(Error::Precondition("equivalence test requires unambiguous automata".into()));
    }
    let (na, nb) = (a.n_states, b.n_states);
    let dim = na + nb;
    let mut labels = a.alphabet();
    for l in b.alphabet() {
        if !labels.contains(&l) {
            labels.push(l);
        }
    }
    let step = |v: &[BigRational], label: &L| -> Vec<BigRational> {
        let mut r = vec![BigRational::zero(); dim];
        for t in &a.transitions {
            if &t.label == label && !v[t.src].is_zero() {
                r[t.dst] += &v[t.src];
            }
        }
        for t in &b.transitions {
            if &t.label == label && !v[na + t.src].is_zero() {
                r[na + t.dst] += &v[na + t.src];
            }
        }
        r
    };
    let value = |v: &[BigRational]| -> BigRational {
        let mut s = BigRational::zero();
        for (x, _) in v[..na].iter().zip(&a.finals).filter(|(_, &f)| f) {
            s += x;
        }
        for (x, _) in v[na..].iter().zip(&b.finals).filter(|(_, &f)| f) {
            s -= x;
        }
        s
    };
    let mut start = vec![BigRational::zero(); dim];
    for &q in &a.initial {
        start[q] = BigRational::one();
    }
    for &q in &b.initial {
        start[na + q] = BigRational::one();
    }
    // reduced basis: (pivot column, row) with row[pivot] == 1
    let mut basis: Vec<(usize, Vec<BigRational>)> = Vec::new();
    let mut queue = VecDeque::new();
    if let Some(r) = reduce(&basis, start.clone()) {
        basis.push(r);
        queue.push_back(start);
    }
    while let Some(v) = queue.pop_front() {
        if !value(&v).is_zero() {
            return Ok(false);
        }
        for l in &labels {
            let w = step(&v, l);
            if let Some(r) = reduce(&basis, w.clone()) {
                basis.push(r);
                queue.push_back(w);
            }
        }
    }
    Ok(true)
}

/// Reduces `v` against the basis; returns a new normalized basis row if `v` is independent.
fn reduce(basis: &[(usize, Vec<BigRational>)], mut v: Vec<BigRational>) -> Option<(usize, Vec<BigRational>)> {
    for (pivot, row) in basis {
        if !v[*pivot].is_zero() {
            let f = v[*pivot].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
        }
    }
    let pivot = v.iter().position(|x| !x.is_zero())?;
    let inv = v[pivot].recip();
    for x in v.iter_mut() {
        *x *= &inv;
    }
    Some((pivot, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nfa(n: usize, init: &[usize], fin: &[usize], edges: &[(usize, char, usize)]) -> Nfa<char> {
        let mut a = Nfa::new(n);
        for &q in init {
            a.set_initial(q);
        }
        for &q in fin {
            a.set_final(q, true);
        }
        for &(s, l, d) in edges {
            a.add_transition(s, l, d);
        }
        a
    }

    #[test]
    fn trim_removes_sink() {
        let a = nfa(3, &[0], &[1], &[(0, 'a', 1), (1, 'a', 2), (2, 'b', 2)]);
        let t = a.trim();
        assert_eq!(t.n_states(), 2);
        assert!(t.accepts(&['a']));
        assert!(!t.accepts(&['a', 'a']));
        assert_eq!(t.trim(), t);
        let empty = nfa(2, &[0], &[], &[(0, 'a', 1)]).trim();
        assert_eq!(empty.n_states(), 0);
    }

    #[test]
    fn scc_topological() {
        let a = nfa(4, &[0], &[3], &[(0, 'a', 1), (1, 'a', 2), (2, 'a', 1), (2, 'b', 3)]);
        let s = a.scc();
        assert_eq!(s.order.len(), 3);
        assert!(s.component[0] < s.component[1]);
        assert_eq!(s.component[1], s.component[2]);
        assert!(s.component[2] < s.component[3]);
        assert!(s.is_cyclic(&a, 1));
        assert!(!s.is_cyclic(&a, 0));
    }

    #[test]
    fn ambiguity() {
        let dfa = nfa(2, &[0], &[1], &[(0, 'a', 1), (1, 'b', 1)]);
        assert!(dfa.is_unambiguous());
        let two_paths = nfa(4, &[0], &[3], &[(0, 'a', 1), (0, 'a', 2), (1, 'b', 3), (2, 'b', 3)]);
        assert!(!two_paths.is_unambiguous());
        // a*b + ab*, both accepting ab
        let union = nfa(4, &[0, 2], &[1, 3], &[(0, 'a', 0), (0, 'b', 1), (2, 'a', 3), (3, 'b', 3)]);
        assert!(!union.is_unambiguous());
    }

    #[test]
    fn equivalence() {
        let ab_star = nfa(2, &[0], &[0], &[(0, 'a', 1), (1, 'b', 0)]);
        let ab_plus = nfa(3, &[0], &[2], &[(0, 'a', 1), (1, 'b', 2), (2, 'a', 1)]);
        assert!(equiv_unambiguous(&ab_star, &ab_star).unwrap());
        assert!(!equiv_unambiguous(&ab_star, &ab_plus).unwrap());
        let astar_bstar = nfa(2, &[0], &[0, 1], &[(0, 'a', 0), (0, 'b', 1), (1, 'b', 1)]);
        let other = nfa(3, &[0], &[0, 1, 2], &[(0, 'a', 0), (0, 'b', 1), (1, 'b', 2), (2, 'b', 1)]);
        assert!(equiv_unambiguous(&astar_bstar, &other).unwrap());
        let amb = nfa(4, &[0], &[3], &[(0, 'a', 1), (0, 'a', 2), (1, 'b', 3), (2, 'b', 3)]);
        assert!(equiv_unambiguous(&amb, &ab_star).is_err());
    }
}
