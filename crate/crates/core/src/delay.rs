//! Delays of pair automata: the difference of partial output lengths along runs.
//!
//! A state may be reached with several delays along acyclic paths. Delays are therefore
//! attached to the states of a split automaton whose states are pairs `(state, delay)`; the
//! split is finite exactly when every cycle has delay zero.

use std::collections::{HashMap, VecDeque};

use crate::automata::StateId;
use crate::error::Result;
use crate::pair::{PairAutomaton, PairLabel};
use crate::transducer::{same_domain, JointMachine, Transducer};
use crate::word::ExtendedNat;

/// Pair automaton refined so that every state carries a unique potential vector
/// (the sum of edge weights along any path from an initial state).
#[derive(Debug, Clone)]
pub struct Split {
    pub automaton: PairAutomaton,
    pub potential: Vec<Vec<i64>>,
    /// state of the source automaton for every split state
    pub origin_state: Vec<StateId>,
    /// transition of the source automaton for every split transition
    pub origin_transition: Vec<usize>,
}

impl Split {
    /// First potential component; for delay splits this is the delay.
    pub fn delay(&self, q: StateId) -> i64 {
        self.potential[q][0]
    }

    pub fn lift_path(&self, path: &[usize]) -> Vec<usize> {
        path.iter().map(|&e| self.origin_transition[e]).collect()
    }

    pub fn max_abs_delay(&self) -> i64 {
        (0..self.automaton.n_states()).map(|q| self.delay(q).abs()).max().unwrap_or(0)
    }
}

/// Per-state delays, or a path reaching a delay beyond the pigeonhole bound.
#[derive(Debug, Clone)]
pub enum Delays {
    Consistent(Split),
    /// transitions of the input automaton from an initial state to a state whose delay exceeds
    /// `(|Q| + 1) * maxgap`; some cycle on the way has non-zero delay
    Unbounded { path: Vec<usize> },
}

/// Splits `p` by the potential defined by `weight`. Components whose absolute value exceeds
/// `(|Q| + 1) * max |weight|` prove a cycle of non-zero weight.
pub fn split_by_potential(p: &PairAutomaton, weight: impl Fn(&PairLabel) -> Vec<i64>) -> Delays {
    let weights: Vec<Vec<i64>> = p.transitions().iter().map(|t| weight(&t.label)).collect();
    let dim = weights.first().map_or(1, Vec::len);
    let maxgap = weights.iter().flatten().map(|w| w.abs()).max().unwrap_or(0).max(1);
    let guard = (p.n_states() as i64 + 1) * maxgap;
    let out = p.out_edges();

    let mut index: HashMap<(StateId, Vec<i64>), StateId> = HashMap::new();
    let mut nodes: Vec<(StateId, Vec<i64>)> = Vec::new();
    let mut pred: Vec<Option<(StateId, usize)>> = Vec::new();
    let mut queue = VecDeque::new();
    for &q in p.initial() {
        let key = (q, vec![0; dim]);
        index.insert(key.clone(), nodes.len());
        nodes.push(key);
        pred.push(None);
        queue.push_back(nodes.len() - 1);
    }
    let mut edges: Vec<(StateId, usize, StateId)> = Vec::new();
    while let Some(n) = queue.pop_front() {
        let (q, pot) = nodes[n].clone();
        for &e in &out[q] {
            let t = &p.transitions()[e];
            let next: Vec<i64> = pot.iter().zip(&weights[e]).map(|(a, b)| a + b).collect();
            if next.iter().any(|x| x.abs() > guard) {
                let mut path = vec![e];
                let mut cur = n;
                while let Some((prev, pe)) = pred[cur] {
                    path.push(pe);
                    cur = prev;
                }
                path.reverse();
                return Delays::Unbounded { path };
            }
            let key = (t.dst, next);
            let m = match index.get(&key) {
                Some(&m) => m,
                None => {
                    index.insert(key.clone(), nodes.len());
                    nodes.push(key);
                    pred.push(Some((n, e)));
                    queue.push_back(nodes.len() - 1);
                    nodes.len() - 1
                }
            };
            edges.push((n, e, m));
        }
    }
    let mut automaton = PairAutomaton::new(nodes.len());
    for (n, (q, pot)) in nodes.iter().enumerate() {
        if p.is_initial(*q) && pot.iter().all(|&x| x == 0) {
            automaton.set_initial(n);
        }
        automaton.set_final(n, p.is_final(*q));
    }
    let mut origin_transition = Vec::with_capacity(edges.len());
    for (s, e, d) in edges {
        automaton.add_transition(s, p.transitions()[e].label, d);
        origin_transition.push(e);
    }
    let (automaton, kept, kept_t) = automaton.trim_with_maps();
    Delays::Consistent(Split {
        potential: kept.iter().map(|&n| nodes[n].1.clone()).collect(),
        origin_state: kept.iter().map(|&n| nodes[n].0).collect(),
        origin_transition: kept_t.iter().map(|&e| origin_transition[e]).collect(),
        automaton,
    })
}

/// Delay split of a trimmed pair automaton.
pub fn compute_delays(p: &PairAutomaton) -> Delays {
    split_by_potential(p, |l| vec![l.gap()])
}

/// True iff every cycle of `p` has delay zero.
pub fn bounded_delay(p: &PairAutomaton) -> bool {
    matches!(compute_delays(&p.trim()), Delays::Consistent(_))
}

/// A cycle of non-zero total weight: its base state and its transitions.
pub fn unbalanced_cycle(p: &PairAutomaton, weight: impl Fn(&PairLabel) -> i64) -> Option<(StateId, Vec<usize>)> {
    let scc = p.scc();
    for comp in &scc.order {
        let root = comp[0];
        let c = scc.component[root];
        let inside = |q: StateId| scc.component[q] == c;
        // potentials along a breadth-first tree inside the component
        let mut pot: HashMap<StateId, (i64, Vec<usize>)> = HashMap::new();
        pot.insert(root, (0, Vec::new()));
        let out = p.out_edges();
        let mut queue = VecDeque::from([root]);
        while let Some(q) = queue.pop_front() {
            for &e in &out[q] {
                let d = p.transitions()[e].dst;
                if inside(d) && !pot.contains_key(&d) {
                    let (w, mut path) = pot[&q].clone();
                    path.push(e);
                    pot.insert(d, (w + weight(&p.transitions()[e].label), path));
                    queue.push_back(d);
                }
            }
        }
        for (e, t) in p.transitions().iter().enumerate() {
            if !(inside(t.src) && inside(t.dst)) {
                continue;
            }
            let (ws, ref ps) = pot[&t.src];
            let (wd, ref pd) = pot[&t.dst];
            if ws + weight(&t.label) == wd {
                continue;
            }
            let back = p
                .shortest_path(&[t.dst], |q| q == root)
                .expect("strongly connected component");
            let back_w: i64 = back.iter().map(|&b| weight(&p.transitions()[b].label)).sum();
            let via_edge: Vec<usize> = ps.iter().copied().chain([e]).chain(back.iter().copied()).collect();
            let via_tree: Vec<usize> = pd.iter().copied().chain(back.iter().copied()).collect();
            // the two cycles differ in weight by ws + w(e) - wd != 0, so one of them is unbalanced
            let cycle = if ws + weight(&t.label) + back_w != 0 { via_edge } else { via_tree };
            return Some((root, cycle));
        }
    }
    None
}

/// Exact length distance between two transducers: infinite when domains differ or a cycle of the
/// pair automaton has non-zero delay, otherwise the largest absolute delay of a final state.
pub fn length_close(t1: &Transducer, t2: &Transducer) -> Result<ExtendedNat> {
    if !same_domain(t1, t2)? {
        return Ok(ExtendedNat::Infinite);
    }
    let p = JointMachine::new(t1, t2)?.pair_automaton();
    Ok(match compute_delays(&p) {
        Delays::Unbounded { .. } => ExtendedNat::Infinite,
        Delays::Consistent(split) => {
            let a = &split.automaton;
            ExtendedNat::Finite(a.finals().map(|f| split.delay(f).unsigned_abs()).max().unwrap_or(0))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Letter;

    fn loop_automaton(labels: &[(Option<u32>, Option<u32>)]) -> PairAutomaton {
        let mut p = PairAutomaton::new(1);
        p.set_initial(0);
        p.set_final(0, true);
        for &(l, r) in labels {
            p.add_transition(0, PairLabel::new(l.map(Letter), r.map(Letter)), 0);
        }
        p
    }

    #[test]
    fn loops() {
        assert!(matches!(compute_delays(&loop_automaton(&[(Some(0), None)])), Delays::Unbounded { .. }));
        assert!(bounded_delay(&loop_automaton(&[(Some(0), Some(1))])));
        assert!(!bounded_delay(&loop_automaton(&[(Some(0), None), (None, Some(0)), (Some(0), Some(0))])));
        let (_, cycle) = unbalanced_cycle(&loop_automaton(&[(Some(0), Some(0)), (Some(0), None)]), PairLabel::gap).unwrap();
        assert_eq!(cycle.len(), 1);
    }

    #[test]
    fn acyclic_conflict_is_split() {
        let mut p = PairAutomaton::new(2);
        p.set_initial(0);
        p.set_final(1, true);
        p.add_transition(0, PairLabel::new(Some(Letter(0)), None), 1);
        p.add_transition(0, PairLabel::new(None, None), 1);
        match compute_delays(&p) {
            Delays::Consistent(s) => {
                let mut finals: Vec<i64> = s.automaton.finals().map(|f| s.delay(f)).collect();
                finals.sort();
                assert_eq!(finals, vec![0, 1]);
            }
            Delays::Unbounded { .. } => panic!("acyclic automaton has bounded delay"),
        }
    }
}
