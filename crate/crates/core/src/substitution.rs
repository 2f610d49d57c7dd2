//! Closeness and exact distances for the Hamming and transposition distances.
//!
//! Both metrics need equal output lengths, hence bounded delays. A loop at a state with delay
//! `∂` compares its left output against its right output shifted by `∂`: the distance is
//! unbounded iff some loop has a non-trivial interior. The transposition distance additionally
//! needs permutation pairs and balanced borders.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use crate::automata::{Nfa, StateId};
use crate::delay::{compute_delays, split_by_potential, Delays, Split};
use crate::error::{Error, Result};
use crate::metric::{alphabetic_vector, MetricId};
use crate::pair::{path_words, PairAutomaton, PairLabel};
use crate::transducer::{domain_difference, same_domain, JointMachine, Transducer};
use crate::verdict::{Certificate, Closeness, Limits};
use crate::word::{ExtendedNat, Letter, Word};

fn check_pair(u: &[Letter], v: &[Letter], delay: i64) -> Result<usize> {
    let d = delay.unsigned_abs() as usize;
    if u.len() != v.len() || u.len() <= d {
        return Err(Error::Input(format!(
            "interior needs |u| = |v| > |delay|, got |u| = {}, |v| = {}, delay {delay}",
            u.len(),
            v.len()
        )));
    }
    Ok(d)
}

/// The two outputs of a loop with the `|∂|` letters that cross the loop boundary removed.
pub fn interior(u: &[Letter], v: &[Letter], delay: i64) -> Result<(Word, Word)> {
    let d = check_pair(u, v, delay)?;
    let n = u.len();
    Ok(if delay >= 0 {
        (Word(u[..n - d].to_vec()), Word(v[d..].to_vec()))
    } else {
        (Word(u[d..].to_vec()), Word(v[..n - d].to_vec()))
    })
}

/// The `|∂|` leading letters of the lagging side.
pub fn lborder(u: &[Letter], v: &[Letter], delay: i64) -> Result<Word> {
    let d = check_pair(u, v, delay)?;
    Ok(Word(if delay >= 0 { v[..d].to_vec() } else { u[..d].to_vec() }))
}

/// The `|∂|` trailing letters of the leading side.
pub fn rborder(u: &[Letter], v: &[Letter], delay: i64) -> Result<Word> {
    let d = check_pair(u, v, delay)?;
    let n = u.len();
    Ok(Word(if delay >= 0 { u[n - d..].to_vec() } else { v[n - d..].to_vec() }))
}

fn path_input(p: &PairAutomaton, path: &[usize]) -> Word {
    path_words(p, path).2
}

fn completed(p: &PairAutomaton, mut path: Vec<usize>) -> Vec<usize> {
    let last = path.last().map_or(p.initial()[0], |&e| p.transitions()[e].dst);
    path.extend(p.path_to_final(last).expect("trimmed automaton"));
    path
}

/// Input certificate for a split whose potential is unbounded or non-zero at some final state.
fn potential_violation(p: &PairAutomaton, delays: &Delays) -> Option<Certificate> {
    match delays {
        Delays::Unbounded { path } => Some(Certificate::Input(path_input(p, &completed(p, path.clone())))),
        Delays::Consistent(split) => {
            let s = &split.automaton;
            let f = s.finals().find(|&f| split.potential[f].iter().any(|&x| x != 0))?;
            let path = split.lift_path(&s.path_from_initial(f).expect("accessible"));
            Some(Certificate::Input(path_input(p, &path)))
        }
    }
}

/// Domain check and joint pair automaton, or a certificate input where exactly one side is defined.
fn prepare(t1: &Transducer, t2: &Transducer) -> Result<std::result::Result<PairAutomaton, Certificate>> {
    if !same_domain(t1, t2)? {
        let w = domain_difference(t1, t2).expect("domains differ");
        return Ok(Err(Certificate::Input(w)));
    }
    Ok(Ok(JointMachine::new(t1, t2)?.pair_automaton()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum TrailPhase {
    Emit,
    Dropped(usize),
}

/// Pump certificate for a loop with a non-trivial interior, if any.
///
/// For a state `q` with delay `∂` the gadget accepts the interiors of all loops at `q` within its
/// component: the lagging side drops its first `|∂|` letters, the leading side guesses where its
/// last `|∂|` letters begin and drops them. Interiors are trivial iff the gadget is an identity.
fn interior_violation(p: &PairAutomaton, split: &Split, limits: &Limits) -> Result<Option<Certificate>> {
    let s = &split.automaton;
    let scc = s.scc();
    let out = s.out_edges();
    for q in 0..s.n_states() {
        if !scc.is_cyclic(s, q) {
            continue;
        }
        let delay = split.delay(q);
        let d = delay.unsigned_abs() as usize;
        let comp = scc.component[q];
        let size = scc.order[comp].len() * (d + 1) * (d + 1);
        if size > limits.gadget_ceiling {
            return Err(Error::Resource(format!("interior gadget needs {size} states, ceiling {}", limits.gadget_ceiling)));
        }
        // (state, trailing phase, leading letters dropped)
        type Node = (StateId, TrailPhase, usize);
        let mut index: HashMap<Node, StateId> = HashMap::new();
        let mut nodes: Vec<Node> = Vec::new();
        let mut g = PairAutomaton::new(0);
        let mut origin: Vec<usize> = Vec::new();
        let mut queue = VecDeque::new();
        let start: Node = (q, TrailPhase::Emit, 0);
        index.insert(start, g.add_state());
        nodes.push(start);
        g.set_initial(0);
        queue.push_back(0);
        while let Some(n) = queue.pop_front() {
            let (st, phase, dropped) = nodes[n];
            for &e in &out[st] {
                let t = &s.transitions()[e];
                if scc.component[t.dst] != comp {
                    continue;
                }
                let (trail, lead) = if delay >= 0 { (t.label.left, t.label.right) } else { (t.label.right, t.label.left) };
                let (lead_out, dropped2) = match lead {
                    Some(_) if dropped < d => (None, dropped + 1),
                    other => (other, dropped),
                };
                let trail_moves: Vec<(Option<Letter>, TrailPhase)> = match (trail, phase) {
                    (None, ph) => vec![(None, ph)],
                    (Some(y), TrailPhase::Emit) if d > 0 => vec![(Some(y), TrailPhase::Emit), (None, TrailPhase::Dropped(1))],
                    (Some(y), TrailPhase::Emit) => vec![(Some(y), TrailPhase::Emit)],
                    (Some(_), TrailPhase::Dropped(c)) if c < d => vec![(None, TrailPhase::Dropped(c + 1))],
                    (Some(_), TrailPhase::Dropped(_)) => vec![],
                };
                for (trail_out, phase2) in trail_moves {
                    let node = (t.dst, phase2, dropped2);
                    let m = *index.entry(node).or_insert_with(|| {
                        nodes.push(node);
                        queue.push_back(nodes.len() - 1);
                        g.add_state()
                    });
                    let (left, right) = if delay >= 0 { (trail_out, lead_out) } else { (lead_out, trail_out) };
                    g.add_transition(n, PairLabel { left, right, input: t.label.input }, m);
                    origin.push(e);
                }
            }
        }
        let done = if d == 0 { TrailPhase::Emit } else { TrailPhase::Dropped(d) };
        for (n, &(st, phase, dropped)) in nodes.iter().enumerate() {
            g.set_final(n, st == q && phase == done && dropped == d);
        }
        if let Some(bad) = crate::pair::find_unequal_pair(&g) {
            let cycle: Vec<usize> = bad.iter().map(|&e| origin[e]).collect();
            return Ok(Some(pump_at(p, split, q, &cycle, 1)));
        }
    }
    Ok(None)
}

/// Certificate pumping `cycle` (split transitions at `q`) repeated `repeat` times.
fn pump_at(p: &PairAutomaton, split: &Split, q: StateId, cycle: &[usize], repeat: usize) -> Certificate {
    let s = &split.automaton;
    let prefix = split.lift_path(&s.path_from_initial(q).expect("accessible"));
    let suffix = split.lift_path(&s.path_to_final(q).expect("coaccessible"));
    Certificate::Pump {
        prefix: path_input(p, &prefix),
        cycle: path_input(p, &split.lift_path(cycle)).repeat(repeat),
        suffix: path_input(p, &suffix),
    }
}

/// Closeness under the Hamming distance.
pub fn close_hamming(t1: &Transducer, t2: &Transducer, limits: &Limits) -> Result<Closeness> {
    let p = match prepare(t1, t2)? {
        Ok(p) => p,
        Err(cert) => return Ok(Closeness::NotClose(cert)),
    };
    let delays = compute_delays(&p);
    if let Some(cert) = potential_violation(&p, &delays) {
        return Ok(Closeness::NotClose(cert));
    }
    let Delays::Consistent(split) = delays else { unreachable!("checked above") };
    Ok(match interior_violation(&p, &split, limits)? {
        Some(cert) => Closeness::NotClose(cert),
        None => Closeness::Close { bound: None },
    })
}

fn vector_weight(size: usize) -> impl Fn(&PairLabel) -> Vec<i64> {
    move |l: &PairLabel| {
        let mut w = vec![0i64; size];
        if let Some(a) = l.left {
            w[a.index()] += 1;
        }
        if let Some(b) = l.right {
            w[b.index()] -= 1;
        }
        w
    }
}

fn signed_vector(w: &[Letter], size: usize) -> Vec<i64> {
    alphabetic_vector(w, size).into_iter().map(|x| x as i64).collect()
}

/// Which side of a loop the border-balance test looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BorderSide {
    /// the words produced before the loop against the lagging side's leading border
    Initial,
    /// the words produced after the loop against the leading side's trailing border
    Final,
}

/// Pump certificate for a loop whose borders are not compensated by the surrounding outputs.
/// Expects a vector split with every final potential zero and trivial interiors.
fn border_violation(p: &PairAutomaton, split: &Split, size: usize, side: BorderSide) -> Option<Certificate> {
    let s = &split.automaton;
    let scc = s.scc();
    for q in 0..s.n_states() {
        let comp = scc.component[q];
        let Some(e) = s.transitions().iter().position(|t| {
            scc.component[t.src] == comp && scc.component[t.dst] == comp && (t.label.left.is_some() || t.label.right.is_some())
        }) else {
            continue;
        };
        let t = &s.transitions()[e];
        let mut cycle = s.shortest_path(&[q], |x| x == t.src).expect("same component");
        cycle.push(e);
        cycle.extend(s.shortest_path(&[t.dst], |x| x == q).expect("same component"));
        let (u, v, _) = path_words(s, &cycle);
        let delay = split.potential[q].iter().sum::<i64>();
        let d = delay.unsigned_abs() as usize;
        let repeat = d / u.len() + 1;
        let (u, v) = (u.repeat(repeat), v.repeat(repeat));
        let imbalanced = match side {
            BorderSide::Initial => {
                let lb = signed_vector(&lborder(&u, &v, delay).expect("long enough"), size);
                let before = &split.potential[q];
                if delay >= 0 {
                    lb != *before
                } else {
                    lb.iter().zip(before).any(|(a, b)| *a != -b)
                }
            }
            BorderSide::Final => {
                let rb = signed_vector(&rborder(&u, &v, delay).expect("long enough"), size);
                let tail = s.path_to_final(q).expect("coaccessible");
                let (gl, gr, _) = path_words(s, &tail);
                let after: Vec<i64> =
                    signed_vector(&gl, size).iter().zip(signed_vector(&gr, size)).map(|(a, b)| a - b).collect();
                if delay >= 0 {
                    rb.iter().zip(&after).any(|(a, b)| *a != -b)
                } else {
                    rb != after
                }
            }
        };
        if imbalanced {
            return Some(pump_at(p, split, q, &cycle, repeat));
        }
    }
    None
}

/// Closeness under the transposition distance, testing border balance on the given side.
pub fn close_transposition_with(t1: &Transducer, t2: &Transducer, side: BorderSide, limits: &Limits) -> Result<Closeness> {
    let p = match prepare(t1, t2)? {
        Ok(p) => p,
        Err(cert) => return Ok(Closeness::NotClose(cert)),
    };
    let size = t1.output_alphabet().len();
    let vectors = split_by_potential(&p, vector_weight(size));
    if let Some(cert) = potential_violation(&p, &vectors) {
        return Ok(Closeness::NotClose(cert));
    }
    let Delays::Consistent(vector_split) = vectors else { unreachable!("checked above") };
    let Delays::Consistent(delay_split) = compute_delays(&p) else {
        unreachable!("bounded vector potentials bound the delay")
    };
    if let Some(cert) = interior_violation(&p, &delay_split, limits)? {
        return Ok(Closeness::NotClose(cert));
    }
    Ok(match border_violation(&p, &vector_split, size, side) {
        Some(cert) => Closeness::NotClose(cert),
        None => Closeness::Close { bound: None },
    })
}

/// Closeness under the transposition distance.
pub fn close_transposition(t1: &Transducer, t2: &Transducer, limits: &Limits) -> Result<Closeness> {
    close_transposition_with(t1, t2, BorderSide::Initial, limits)
}

/// Letters of one side not yet matched by the other. For the Hamming distance only one side is
/// ever non-empty; for the transposition distance the two sides share no letter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct Buffers {
    left: VecDeque<Letter>,
    right: VecDeque<Letter>,
}

impl Buffers {
    pub(crate) fn new() -> Self {
        Self { left: VecDeque::new(), right: VecDeque::new() }
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.left.is_empty() && self.right.is_empty()
    }

    pub(crate) fn len(&self) -> usize {
        self.left.len() + self.right.len()
    }

    /// Aligned comparison; cost is the number of mismatched positions.
    pub(crate) fn hamming(&mut self, is_left: bool, a: Letter) -> u64 {
        let (own, other) = if is_left { (&mut self.left, &mut self.right) } else { (&mut self.right, &mut self.left) };
        match other.pop_front() {
            Some(b) => u64::from(a != b),
            None => {
                own.push_back(a);
                0
            }
        }
    }

    /// Stable pairing; cost is the number of inversions completed by this letter.
    pub(crate) fn transposition(&mut self, is_left: bool, a: Letter) -> u64 {
        let (own, other) = if is_left { (&mut self.left, &mut self.right) } else { (&mut self.right, &mut self.left) };
        match other.iter().position(|&b| b == a) {
            Some(i) => {
                other.remove(i);
                i as u64
            }
            None => {
                own.push_back(a);
                other.len() as u64
            }
        }
    }
}

/// Incremental computation of a metric over a stream of letters from both words.
pub fn streaming_distance(m: MetricId, steps: impl IntoIterator<Item = (bool, Letter)>) -> Option<u64> {
    let mut b = Buffers::new();
    let mut total = 0;
    for (is_left, a) in steps {
        total += match m {
            MetricId::Hamming => b.hamming(is_left, a),
            MetricId::Transposition => b.transposition(is_left, a),
            _ => return None,
        };
    }
    b.is_empty().then_some(total)
}

/// Largest total cost of an accepting path in the product of `p` with a deterministic
/// cost-annotated configuration stepper. A positive-cost cycle gives `Infinite`.
fn max_path_cost<C: Clone + Eq + Hash>(
    p: &PairAutomaton,
    start: C,
    step: impl Fn(&C, &PairLabel) -> (C, u64),
    accepting: impl Fn(&C) -> bool,
    ceiling: usize,
) -> Result<ExtendedNat> {
    let mut index: HashMap<(StateId, C), StateId> = HashMap::new();
    let mut nodes: Vec<(StateId, C)> = Vec::new();
    let mut g: Nfa<u64> = Nfa::new(0);
    let mut queue = VecDeque::new();
    for &q in p.initial() {
        let key = (q, start.clone());
        if !index.contains_key(&key) {
            let n = g.add_state();
            g.set_initial(n);
            index.insert(key.clone(), n);
            nodes.push(key);
            queue.push_back(n);
        }
    }
    let out = p.out_edges();
    while let Some(n) = queue.pop_front() {
        let (q, c) = nodes[n].clone();
        for &e in &out[q] {
            let t = &p.transitions()[e];
            let (c2, cost) = step(&c, &t.label);
            let key = (t.dst, c2);
            let m = match index.get(&key) {
                Some(&m) => m,
                None => {
                    if nodes.len() >= ceiling {
                        return Err(Error::Resource(format!("alignment graph exceeds {ceiling} states")));
                    }
                    let m = g.add_state();
                    index.insert(key.clone(), m);
                    nodes.push(key);
                    queue.push_back(m);
                    m
                }
            };
            g.add_transition(n, cost, m);
        }
    }
    for (n, (q, c)) in nodes.iter().enumerate() {
        g.set_final(n, p.is_final(*q) && accepting(c));
    }
    let g = g.trim();
    if g.n_states() == 0 {
        return Ok(ExtendedNat::ZERO);
    }
    let scc = g.scc();
    if g.transitions().iter().any(|t| t.label > 0 && scc.component[t.src] == scc.component[t.dst]) {
        return Ok(ExtendedNat::Infinite);
    }
    let out = g.out_edges();
    let mut value = vec![0u64; scc.order.len()];
    for (c, members) in scc.order.iter().enumerate().rev() {
        value[c] = members
            .iter()
            .flat_map(|&x| out[x].iter())
            .map(|&e| &g.transitions()[e])
            .filter(|t| scc.component[t.dst] != c)
            .map(|t| t.label + value[scc.component[t.dst]])
            .max()
            .unwrap_or(0);
    }
    Ok(ExtendedNat::Finite(g.initial().iter().map(|&q| value[scc.component[q]]).max().unwrap_or(0)))
}

/// Exact Hamming or transposition distance.
pub fn distance_subst(m: MetricId, t1: &Transducer, t2: &Transducer, limits: &Limits) -> Result<ExtendedNat> {
    let verdict = match m {
        MetricId::Hamming => close_hamming(t1, t2, limits)?,
        MetricId::Transposition => close_transposition(t1, t2, limits)?,
        other => return Err(Error::Unsupported(format!("{} is not a substitution distance", other.name()))),
    };
    if !verdict.is_close() {
        return Ok(ExtendedNat::Infinite);
    }
    let p = JointMachine::new(t1, t2)?.pair_automaton();
    let step = |b: &Buffers, l: &PairLabel| {
        let mut b = b.clone();
        let mut cost = 0;
        for (is_left, x) in [(true, l.left), (false, l.right)] {
            if let Some(a) = x {
                cost += if m == MetricId::Hamming { b.hamming(is_left, a) } else { b.transposition(is_left, a) };
            }
        }
        (b, cost)
    };
    let value = max_path_cost(&p, Buffers::new(), step, Buffers::is_empty, limits.gadget_ceiling)?;
    if !value.is_finite() {
        return Err(Error::Integrity("positive-cost cycle in a close alignment graph".into()));
    }
    Ok(value)
}

/// `distance_subst(m, t1, t2) <= k`.
pub fn kclose_subst(m: MetricId, t1: &Transducer, t2: &Transducer, k: u64, limits: &Limits) -> Result<bool> {
    Ok(distance_subst(m, t1, t2, limits)? <= ExtendedNat::Finite(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::word_distance;
    use crate::word::Alphabet;

    fn w(s: &str) -> Word {
        Alphabet::from_symbols("abcdef").unwrap().parse_word(s).unwrap()
    }

    #[test]
    fn interiors_and_borders() {
        assert_eq!(interior(&w("abc"), &w("def"), 1).unwrap(), (w("ab"), w("ef")));
        assert_eq!(interior(&w("abc"), &w("def"), -1).unwrap(), (w("bc"), w("de")));
        assert_eq!(interior(&w("abc"), &w("def"), 0).unwrap(), (w("abc"), w("def")));
        assert_eq!(lborder(&w("abc"), &w("def"), 1).unwrap(), w("d"));
        assert_eq!(rborder(&w("abc"), &w("def"), 1).unwrap(), w("c"));
        assert!(interior(&w("ab"), &w("de"), 2).is_err());
    }

    #[test]
    fn streaming_matches_kernels() {
        let (u, v) = (w("abcab"), w("bacba"));
        let steps: Vec<(bool, Letter)> = u.iter().map(|&a| (true, a)).chain(v.iter().map(|&b| (false, b))).collect();
        assert_eq!(
            ExtendedNat::Finite(streaming_distance(MetricId::Transposition, steps).unwrap()),
            word_distance(MetricId::Transposition, &u, &v)
        );
    }
}
