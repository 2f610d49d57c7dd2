//! k-approximations of the distance between two transducers by (min, +) automata, k-closeness,
//! and exact distances by doubling and bisection.
//!
//! A run of the distance automaton reads an input word of the joint machine and aligns the two
//! output streams incrementally. The alignment state between input letters is a small
//! configuration (unmatched leftovers, a delay, or the stored prefix of a cyclic shift); run
//! weights add up the edits committed so far. Configurations whose committed cost exceeds `k`
//! are never created.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap, VecDeque};

use crate::automata::StateId;
use crate::delay::{compute_delays, length_close, unbalanced_cycle, Delays};
use crate::error::{Error, Result};
use crate::metric::{damerau_levenshtein, damerau_table, lcs_table, levenshtein_table, word_distance, MetricId};
use crate::pair::{is_identity_relation, path_words, PairAutomaton, PairLabel};
use crate::substitution::{close_hamming, close_transposition, Buffers};
use crate::transducer::{same_domain, JointMachine, Transducer};
use crate::verdict::{pumps_increase, Certificate, Closeness, Distance, Limits};
use crate::witness::{close_conjugacy_automaton, close_levenshtein_automaton, MAX_PUMP_REPEAT};
use crate::word::{ExtendedNat, Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum ShiftPhase {
    /// the rotated side is still emitting the prefix `x` that moves to the end
    Store,
    /// both sides emit the common middle part
    Match,
    /// the other side emits `x`; the index counts letters already checked
    Tail(usize),
}

/// Guess of a decomposition `u = x y`, `v = y x`, read letter by letter. With `swapped` the
/// roles of the two output streams are exchanged.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Shift {
    swapped: bool,
    x: Vec<Letter>,
    phase: ShiftPhase,
    /// letters of `u` past `x` not yet matched by `v`
    ubuf: VecDeque<Letter>,
    /// letters of `v` not yet matched by `u`
    vbuf: VecDeque<Letter>,
}

impl Shift {
    fn start(swapped: bool) -> Self {
        Shift { swapped, x: Vec::new(), phase: ShiftPhase::Store, ubuf: VecDeque::new(), vbuf: VecDeque::new() }
    }

    /// The configuration itself and those reachable by phase switches.
    fn closure(self) -> Vec<Shift> {
        let mut out = vec![self];
        let mut i = 0;
        while i < out.len() {
            let c = &out[i];
            let next = match c.phase {
                ShiftPhase::Store => Some(Shift { phase: ShiftPhase::Match, ..c.clone() }),
                ShiftPhase::Match if c.ubuf.is_empty() => Some(Shift { phase: ShiftPhase::Tail(0), ..c.clone() }),
                _ => None,
            };
            out.extend(next);
            i += 1;
        }
        out
    }

    /// Successors after one letter on the `u` side (`on_u`) or the `v` side, with their cost.
    fn feed(&self, on_u: bool, a: Letter) -> Vec<(Shift, u64)> {
        let mut result = Vec::new();
        for mut c in self.clone().closure() {
            let cost = match (on_u, c.phase) {
                (true, ShiftPhase::Store) => {
                    c.x.push(a);
                    1
                }
                (true, ShiftPhase::Match) => {
                    match c.vbuf.pop_front() {
                        Some(b) if b != a => continue,
                        Some(_) => {}
                        None => c.ubuf.push_back(a),
                    }
                    0
                }
                (true, ShiftPhase::Tail(_)) => {
                    if c.vbuf.pop_front() != Some(a) {
                        continue;
                    }
                    0
                }
                (false, ShiftPhase::Store) => {
                    c.vbuf.push_back(a);
                    0
                }
                (false, ShiftPhase::Match) => {
                    match c.ubuf.pop_front() {
                        Some(b) if b != a => continue,
                        Some(_) => {}
                        None => c.vbuf.push_back(a),
                    }
                    0
                }
                (false, ShiftPhase::Tail(i)) => {
                    if c.x.get(i) != Some(&a) {
                        continue;
                    }
                    c.phase = ShiftPhase::Tail(i + 1);
                    0
                }
            };
            result.push((c, cost));
        }
        result
    }

    fn accepting(&self) -> bool {
        self.clone().closure().iter().any(|c| {
            c.ubuf.is_empty() && c.vbuf.is_empty() && (c.x.is_empty() || c.phase == ShiftPhase::Tail(c.x.len()))
        })
    }

    fn size(&self) -> usize {
        self.x.len() + self.ubuf.len() + self.vbuf.len()
    }
}

/// Alignment configuration between two input letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Config {
    /// unaligned suffix of one side; the other side is fully aligned
    OneSided { left: bool, rest: Vec<Letter> },
    /// unaligned suffixes of both sides
    TwoSided { left: Vec<Letter>, right: Vec<Letter> },
    Buffers(Buffers),
    /// length of the left output minus length of the right output
    Delay(i64),
    Shift(Shift),
}

impl Config {
    fn size(&self) -> usize {
        match self {
            Config::OneSided { rest, .. } => rest.len(),
            Config::TwoSided { left, right } => left.len() + right.len(),
            Config::Buffers(b) => b.len(),
            Config::Delay(d) => d.unsigned_abs() as usize,
            Config::Shift(s) => s.size(),
        }
    }
}

/// Metric-specific transition rules on configurations.
#[derive(Debug, Clone, Copy)]
struct Rules {
    metric: MetricId,
    cap: usize,
}

impl Rules {
    fn initial(&self) -> Vec<Config> {
        match self.metric {
            MetricId::Levenshtein | MetricId::Lcs => vec![Config::OneSided { left: true, rest: Vec::new() }],
            MetricId::DamerauLevenshtein => vec![Config::TwoSided { left: Vec::new(), right: Vec::new() }],
            MetricId::Hamming | MetricId::Transposition | MetricId::Discrete => vec![Config::Buffers(Buffers::new())],
            MetricId::Length => vec![Config::Delay(0)],
            MetricId::Conjugacy => vec![Config::Shift(Shift::start(false)), Config::Shift(Shift::start(true))],
        }
    }

    /// Successors after the two sides emit `x` and `y`, with the edits committed on the way.
    fn step(&self, c: &Config, x: &[Letter], y: &[Letter]) -> Vec<(Config, u64)> {
        let mut out: HashMap<Config, u64> = HashMap::new();
        let mut add = |c: Config, w: u64| {
            if c.size() <= self.cap {
                let e = out.entry(c).or_insert(w);
                *e = (*e).min(w);
            }
        };
        match c {
            Config::OneSided { left, rest } => {
                let (a, b) = if *left { ([&rest[..], x].concat(), y.to_vec()) } else { (x.to_vec(), [&rest[..], y].concat()) };
                let t = if self.metric == MetricId::Lcs { lcs_table(&a, &b) } else { levenshtein_table(&a, &b) };
                for i in 0..=a.len() {
                    add(Config::OneSided { left: true, rest: a[i..].to_vec() }, t[i][b.len()]);
                }
                for j in 0..b.len() {
                    add(Config::OneSided { left: false, rest: b[j..].to_vec() }, t[a.len()][j]);
                }
            }
            Config::TwoSided { left, right } => {
                let a = [&left[..], x].concat();
                let b = [&right[..], y].concat();
                let t = damerau_table(&a, &b);
                for i in 0..=a.len() {
                    for j in 0..=b.len() {
                        add(Config::TwoSided { left: a[i..].to_vec(), right: b[j..].to_vec() }, t[i][j]);
                    }
                }
            }
            Config::Buffers(buf) => {
                let mut buf = buf.clone();
                let mut cost = 0;
                for (is_left, letters) in [(true, x), (false, y)] {
                    for &l in letters {
                        let c = match self.metric {
                            MetricId::Transposition => buf.transposition(is_left, l),
                            _ => buf.hamming(is_left, l),
                        };
                        if self.metric == MetricId::Discrete && c > 0 {
                            return Vec::new();
                        }
                        cost += c;
                    }
                }
                add(Config::Buffers(buf), cost);
            }
            Config::Delay(d) => add(Config::Delay(d + x.len() as i64 - y.len() as i64), 0),
            Config::Shift(s) => {
                let (u, v) = if s.swapped { (y, x) } else { (x, y) };
                let mut current: HashMap<Shift, u64> = HashMap::from([(s.clone(), 0)]);
                for (on_u, letters) in [(true, u), (false, v)] {
                    for &l in letters {
                        let mut next: HashMap<Shift, u64> = HashMap::new();
                        for (c, w) in &current {
                            for (c2, dw) in c.feed(on_u, l) {
                                if c2.size() <= self.cap {
                                    let e = next.entry(c2).or_insert(w + dw);
                                    *e = (*e).min(w + dw);
                                }
                            }
                        }
                        current = next;
                    }
                }
                for (c, w) in current {
                    add(Config::Shift(c), w);
                }
            }
        }
        out.into_iter().collect()
    }

    /// Cost of completing the alignment once both outputs have ended.
    fn final_cost(&self, c: &Config) -> Option<u64> {
        match c {
            Config::OneSided { rest, .. } => Some(rest.len() as u64),
            Config::TwoSided { left, right } => Some(damerau_levenshtein(left, right)),
            Config::Buffers(b) => b.is_empty().then_some(0),
            Config::Delay(d) => Some(d.unsigned_abs()),
            Config::Shift(s) => s.accepting().then_some(0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightedEdge {
    pub src: usize,
    pub input: Letter,
    pub weight: u64,
    pub dst: usize,
}

/// Automaton over (ℕ, min, +) whose minimal run weight on an input equals the distance of the
/// two outputs when that distance is at most `k`, and which rejects the input otherwise.
#[derive(Debug, Clone)]
pub struct DistanceAutomaton {
    metric: MetricId,
    k: u64,
    /// joint-machine state of every automaton state
    joint_state: Vec<StateId>,
    configs: Vec<Config>,
    initial: Vec<usize>,
    edges: Vec<WeightedEdge>,
    out: Vec<Vec<usize>>,
    final_weight: Vec<Option<u64>>,
}

impl DistanceAutomaton {
    pub fn metric(&self) -> MetricId {
        self.metric
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn n_states(&self) -> usize {
        self.configs.len()
    }

    pub fn joint_state(&self, s: usize) -> StateId {
        self.joint_state[s]
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn edges(&self) -> &[WeightedEdge] {
        &self.edges
    }

    /// Weight added when a run ends in `s`, if it may end there.
    pub fn final_weight(&self, s: usize) -> Option<u64> {
        self.final_weight[s]
    }

    /// Least weight at most `k` of an accepting run on `w`.
    pub fn min_weight(&self, w: &[Letter]) -> Option<u64> {
        let mut current: BTreeMap<usize, u64> = self.initial.iter().map(|&s| (s, 0)).collect();
        for &a in w {
            let mut next: BTreeMap<usize, u64> = BTreeMap::new();
            for (&s, &c) in &current {
                for &e in &self.out[s] {
                    let edge = &self.edges[e];
                    let total = c + edge.weight;
                    if edge.input == a && total <= self.k {
                        let slot = next.entry(edge.dst).or_insert(total);
                        *slot = (*slot).min(total);
                    }
                }
            }
            current = next;
        }
        current.iter().filter_map(|(&s, &c)| Some(c + self.final_weight[s]?)).filter(|&t| t <= self.k).min()
    }
}

/// Largest absolute delay of the pair automaton of `j`, or a precondition error when the
/// length distance is unbounded.
fn max_delay(j: &JointMachine) -> Result<usize> {
    match compute_delays(&j.pair_automaton()) {
        Delays::Unbounded { .. } => Err(Error::Precondition("length distance is unbounded, so no k-approximation exists".into())),
        Delays::Consistent(split) => Ok(split.max_abs_delay() as usize),
    }
}

/// k-approximation of the distance between the two outputs of `j` under `m`.
pub fn build_kapprox(m: MetricId, j: &JointMachine, k: u64, limits: &Limits) -> Result<DistanceAutomaton> {
    let delay = max_delay(j)?;
    // an alignment of cost at most k keeps each leftover within the delay plus the edits spent,
    // and a pending transposition spans at most k + 2 letters
    let cap = delay + 2 * k as usize + 2 + j.max_output_len();
    let rules = Rules { metric: m, cap };
    let mut index: HashMap<(StateId, Config), usize> = HashMap::new();
    let mut joint_state = Vec::new();
    let mut configs = Vec::new();
    let mut best: Vec<u64> = Vec::new();
    let mut heap = BinaryHeap::new();
    let mut intern = |q: StateId, c: Config, cost: u64, joint_state: &mut Vec<StateId>, configs: &mut Vec<Config>, best: &mut Vec<u64>, heap: &mut BinaryHeap<_>| -> Result<usize> {
        let key = (q, c);
        let s = match index.get(&key) {
            Some(&s) => s,
            None => {
                if configs.len() >= limits.state_ceiling {
                    return Err(Error::Resource(format!("distance automaton exceeds {} states", limits.state_ceiling)));
                }
                let s = configs.len();
                joint_state.push(key.0);
                configs.push(key.1.clone());
                best.push(u64::MAX);
                index.insert(key, s);
                s
            }
        };
        if cost < best[s] {
            best[s] = cost;
            heap.push(Reverse((cost, s)));
        }
        Ok(s)
    };
    let mut initial = Vec::new();
    for &q in j.initial() {
        for c in rules.initial() {
            initial.push(intern(q, c, 0, &mut joint_state, &mut configs, &mut best, &mut heap)?);
        }
    }
    let mut by_src: Vec<Vec<usize>> = vec![Vec::new(); j.n_states()];
    for (i, e) in j.edges().iter().enumerate() {
        by_src[e.src].push(i);
    }
    let mut settled: Vec<bool> = Vec::new();
    let mut edges = Vec::new();
    while let Some(Reverse((cost, s))) = heap.pop() {
        settled.resize(configs.len(), false);
        if settled[s] || cost > best[s] {
            continue;
        }
        settled[s] = true;
        let (q, c) = (joint_state[s], configs[s].clone());
        for &ei in &by_src[q] {
            let e = &j.edges()[ei];
            for (c2, w) in rules.step(&c, &e.left, &e.right) {
                if cost + w > k {
                    continue;
                }
                let d = intern(e.dst, c2, cost + w, &mut joint_state, &mut configs, &mut best, &mut heap)?;
                edges.push(WeightedEdge { src: s, input: e.input, weight: w, dst: d });
            }
        }
    }
    let final_weight = (0..configs.len())
        .map(|s| {
            let (fa, fb) = j.final_outputs(joint_state[s])?;
            rules.step(&configs[s], fa, fb).iter().filter_map(|(c, w)| Some(w + rules.final_cost(c)?)).min()
        })
        .collect();
    let mut out = vec![Vec::new(); configs.len()];
    for (i, e) in edges.iter().enumerate() {
        out[e.src].push(i);
    }
    initial.sort_unstable();
    initial.dedup();
    Ok(DistanceAutomaton { metric: m, k, joint_state, configs, initial, edges, out, final_weight })
}

/// True iff every input of the common domain has output distance at most `k`.
pub fn kclose(m: MetricId, t1: &Transducer, t2: &Transducer, k: u64, limits: &Limits) -> Result<bool> {
    if !same_domain(t1, t2)? {
        return Ok(false);
    }
    let j = JointMachine::new(t1, t2)?;
    kclose_joint(m, &j, k, limits)
}

/// [`kclose`] on a joint machine: explores the subsets of joint states paired with the least
/// committed cost of every distance-automaton state, and fails on a reachable domain word with
/// no accepting run of weight at most `k`.
pub fn kclose_joint(m: MetricId, j: &JointMachine, k: u64, limits: &Limits) -> Result<bool> {
    if matches!(compute_delays(&j.pair_automaton()), Delays::Unbounded { .. }) {
        return Ok(false);
    }
    let da = build_kapprox(m, j, k, limits)?;
    let letters: Vec<Letter> = j.input_alphabet().letters().collect();
    let mut joint_out: Vec<Vec<usize>> = vec![Vec::new(); j.n_states()];
    for (i, e) in j.edges().iter().enumerate() {
        joint_out[e.src].push(i);
    }
    type Macro = (BTreeSet<StateId>, BTreeMap<usize, u64>);
    let start: Macro = (j.initial().iter().copied().collect(), da.initial.iter().map(|&s| (s, 0)).collect());
    let mut seen: BTreeSet<Macro> = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some((joint, weights)) = queue.pop_front() {
        let in_domain = joint.iter().any(|&q| j.final_outputs(q).is_some());
        if in_domain && !weights.iter().any(|(&s, &c)| da.final_weight[s].is_some_and(|f| c + f <= k)) {
            return Ok(false);
        }
        for &a in &letters {
            let joint2: BTreeSet<StateId> = joint
                .iter()
                .flat_map(|&q| joint_out[q].iter().map(|&i| &j.edges()[i]))
                .filter(|e| e.input == a)
                .map(|e| e.dst)
                .collect();
            if joint2.is_empty() {
                continue;
            }
            let mut weights2: BTreeMap<usize, u64> = BTreeMap::new();
            for (&s, &c) in &weights {
                for &ei in &da.out[s] {
                    let e = &da.edges[ei];
                    if e.input == a && c + e.weight <= k {
                        let slot = weights2.entry(e.dst).or_insert(c + e.weight);
                        *slot = (*slot).min(c + e.weight);
                    }
                }
            }
            let next = (joint2, weights2);
            if !seen.contains(&next) {
                if seen.len() >= limits.state_ceiling {
                    return Err(Error::Resource(format!("k-closeness exploration exceeds {} macro states", limits.state_ceiling)));
                }
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(true)
}

/// Closeness under `m`, decided by the metric-specific procedure.
pub fn close(m: MetricId, t1: &Transducer, t2: &Transducer, limits: &Limits) -> Result<Closeness> {
    if !same_domain(t1, t2)? {
        let w = crate::transducer::domain_difference(t1, t2).expect("domains differ");
        return Ok(Closeness::NotClose(Certificate::Input(w)));
    }
    match m {
        MetricId::Hamming => return close_hamming(t1, t2, limits),
        MetricId::Transposition => return close_transposition(t1, t2, limits),
        _ => {}
    }
    let j = JointMachine::new(t1, t2)?;
    let p = j.pair_automaton();
    // every metric here dominates the length distance
    if let Delays::Unbounded { .. } = compute_delays(&p) {
        return Ok(Closeness::NotClose(delay_pump(m, &j, &p)));
    }
    let output = j.output_alphabet();
    match m {
        MetricId::Length => Ok(Closeness::Close { bound: length_close(t1, t2)?.finite() }),
        MetricId::Discrete => Ok(match crate::pair::find_unequal_pair(&p) {
            None => Closeness::Close { bound: Some(0) },
            Some(path) => Closeness::NotClose(Certificate::Input(crate::pair::path_words(&p, &path).2)),
        }),
        MetricId::Conjugacy => close_conjugacy_automaton(&p, output, limits),
        MetricId::Levenshtein | MetricId::Lcs | MetricId::DamerauLevenshtein => close_levenshtein_automaton(m, &p, output, limits),
        MetricId::Hamming | MetricId::Transposition => unreachable!("handled above"),
    }
}

/// Pumps a cycle of non-zero delay; the output lengths drift apart linearly. The repetition is
/// the smallest one whose three pumps give increasing distances.
fn delay_pump(m: MetricId, j: &JointMachine, p: &PairAutomaton) -> Certificate {
    let (base, cycle) = unbalanced_cycle(p, PairLabel::gap).expect("unbounded delay implies an unbalanced cycle");
    let input = |path: &[usize]| path_words(p, path).2;
    let prefix = input(&p.path_from_initial(base).expect("trimmed"));
    let suffix = input(&p.path_to_final(base).expect("trimmed"));
    let cycle = input(&cycle);
    let distance_at = |w: Word| {
        let (a, b) = j.eval(&w).expect("pumped input is in the domain");
        word_distance(m, &a, &b)
    };
    let grows = |r: usize| {
        let d: Vec<ExtendedNat> = (1..=3).map(|i| distance_at(prefix.concat(&cycle.repeat(r * i)).concat(&suffix))).collect();
        pumps_increase(&d)
    };
    let r = (1..=MAX_PUMP_REPEAT).find(|&r| grows(r)).unwrap_or(MAX_PUMP_REPEAT);
    Certificate::Pump { prefix, cycle: cycle.repeat(r), suffix }
}

/// Exact distance: infinite when the closeness decider refutes closeness, otherwise the least
/// `k` with [`kclose`], found by doubling and bisection.
pub fn distance(m: MetricId, t1: &Transducer, t2: &Transducer, limits: &Limits) -> Result<Distance> {
    let hint = match close(m, t1, t2, limits)? {
        Closeness::NotClose(_) => return Ok(Distance::Value(ExtendedNat::Infinite)),
        Closeness::Unknown(msg) => return Ok(Distance::Unknown(msg)),
        Closeness::Close { bound } => bound,
    };
    let j = JointMachine::new(t1, t2)?;
    if m == MetricId::Discrete {
        return Ok(Distance::Value(if is_identity_relation(&j.pair_automaton()) { ExtendedNat::ZERO } else { ExtendedNat::Infinite }));
    }
    let probe = |k: u64| kclose_joint(m, &j, k, limits);
    if probe(0)? {
        return Ok(Distance::Value(ExtendedNat::ZERO));
    }
    // invariant: not close at lo, close at hi
    let mut lo = 0u64;
    let mut hi = match hint {
        Some(b) if b > 0 && probe(b)? => b,
        _ => {
            let mut k = hint.unwrap_or(1).max(1);
            loop {
                if probe(k)? {
                    break k;
                }
                lo = k;
                k = k.checked_mul(2).ok_or_else(|| Error::Resource("distance search overflow".into()))?;
            }
        }
    };
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if probe(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Distance::Value(ExtendedNat::Finite(hi)))
}
