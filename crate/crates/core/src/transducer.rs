//! Sequential and unambiguous one-way transducers, their product and the Nivat correspondence
//! with pair automata.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::automata::{equiv_unambiguous, Nfa, StateId};
use crate::error::{Error, Result};
use crate::pair::{add_chain, PairAutomaton};
use crate::word::{Alphabet, Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    /// deterministic underlying automaton with one initial state
    Sequential,
    /// at most one accepting run per input
    Unambiguous,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub src: StateId,
    pub input: Letter,
    pub output: Word,
    pub dst: StateId,
}

/// One-way transducer whose underlying automaton is unambiguous, so it computes a function.
#[derive(Debug, Clone)]
pub struct Transducer {
    input: Alphabet,
    output: Alphabet,
    n_states: usize,
    initial: Vec<StateId>,
    finals: Vec<Option<Word>>,
    edges: Vec<Edge>,
    flavor: Flavor,
}

impl Transducer {
    /// Validates states and letters and rejects machines with an ambiguous underlying automaton.
    pub fn new(
        input: Alphabet,
        output: Alphabet,
        n_states: usize,
        initial: Vec<StateId>,
        finals: Vec<(StateId, Word)>,
        edges: Vec<Edge>,
    ) -> Result<Self> {
        let check_state = |q: StateId| {
            if q < n_states {
                Ok(())
            } else {
                Err(Error::Input(format!("state {q} out of range (machine has {n_states} states)")))
            }
        };
        let mut final_out = vec![None; n_states];
        for (q, w) in finals {
            check_state(q)?;
            output.check_word(&w)?;
            final_out[q] = Some(w);
        }
        for &q in &initial {
            check_state(q)?;
        }
        for e in &edges {
            check_state(e.src)?;
            check_state(e.dst)?;
            input.check_word(&[e.input])?;
            output.check_word(&e.output)?;
        }
        let mut initial = initial;
        initial.sort_unstable();
        initial.dedup();
        let mut t = Self { input, output, n_states, initial, finals: final_out, edges, flavor: Flavor::Unambiguous };
        if !t.underlying().is_unambiguous() {
            return Err(Error::Input("underlying automaton is ambiguous; only functional machines are supported".into()));
        }
        let mut seen = BTreeSet::new();
        let deterministic = t.edges.iter().all(|e| seen.insert((e.src, e.input)));
        if deterministic && t.initial.len() <= 1 {
            t.flavor = Flavor::Sequential;
        }
        Ok(t)
    }

    pub fn input_alphabet(&self) -> &Alphabet {
        &self.input
    }

    pub fn output_alphabet(&self) -> &Alphabet {
        &self.output
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn final_output(&self, q: StateId) -> Option<&Word> {
        self.finals[q].as_ref()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// Underlying automaton over input letters.
    pub fn underlying(&self) -> Nfa<Letter> {
        let mut a = Nfa::new(self.n_states);
        for &q in &self.initial {
            a.set_initial(q);
        }
        for q in 0..self.n_states {
            a.set_final(q, self.finals[q].is_some());
        }
        for e in &self.edges {
            a.add_transition(e.src, e.input, e.dst);
        }
        a
    }

    /// Output on `w`, or `None` outside the domain. Two accepting runs raise an integrity error.
    pub fn eval(&self, w: &[Letter]) -> Result<Option<Word>> {
        self.input.check_word(w)?;
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); self.n_states];
        for (i, e) in self.edges.iter().enumerate() {
            out[e.src].push(i);
        }
        // per state: number of runs (saturated at 2) and the output of one of them
        let mut current: HashMap<StateId, (u8, Vec<Letter>)> =
            self.initial.iter().map(|&q| (q, (1, Vec::new()))).collect();
        for &a in w {
            let mut next: HashMap<StateId, (u8, Vec<Letter>)> = HashMap::new();
            for (q, (count, produced)) in &current {
                for &i in &out[*q] {
                    let e = &self.edges[i];
                    if e.input == a {
                        let slot = next.entry(e.dst).or_insert_with(|| {
                            let mut o = produced.clone();
                            o.extend_from_slice(&e.output);
                            (0, o)
                        });
                        slot.0 = (slot.0 + count).min(2);
                    }
                }
            }
            current = next;
        }
        let mut result = None;
        let mut runs = 0u8;
        for (q, (count, produced)) in current {
            if let Some(fo) = &self.finals[q] {
                runs = runs.saturating_add(count);
                let mut o = produced;
                o.extend_from_slice(fo);
                result = Some(Word(o));
            }
        }
        if runs > 1 {
            return Err(Error::Integrity(format!("input {} has two accepting runs", self.input.render(w))));
        }
        Ok(result)
    }

    /// Same machine with output letters re-expressed over `target`.
    pub fn with_output_alphabet(&self, target: &Alphabet) -> Result<Transducer> {
        let mut t = self.clone();
        for e in &mut t.edges {
            e.output = self.output.translate(&e.output, target)?;
        }
        for f in t.finals.iter_mut().flatten() {
            *f = self.output.translate(f, target)?;
        }
        t.output = target.clone();
        Ok(t)
    }

    /// Same machine with input letters re-expressed over `target`.
    pub fn with_input_alphabet(&self, target: &Alphabet) -> Result<Transducer> {
        let mut t = self.clone();
        for e in &mut t.edges {
            e.input = self.input.translate(&[e.input], target)?[0];
        }
        t.input = target.clone();
        Ok(t)
    }
}

fn check_compatible(t1: &Transducer, t2: &Transducer) -> Result<()> {
    if t1.input != t2.input {
        return Err(Error::AlphabetMismatch("transducers have different input alphabets".into()));
    }
    if t1.output != t2.output {
        return Err(Error::AlphabetMismatch("transducers have different output alphabets".into()));
    }
    Ok(())
}

/// True iff both transducers have the same domain.
pub fn same_domain(t1: &Transducer, t2: &Transducer) -> Result<bool> {
    if t1.input != t2.input {
        return Err(Error::AlphabetMismatch("transducers have different input alphabets".into()));
    }
    equiv_unambiguous(&t1.underlying(), &t2.underlying())
}

/// A shortest input in exactly one of the two domains, if any.
pub fn domain_difference(t1: &Transducer, t2: &Transducer) -> Option<Word> {
    let (a, b) = (t1.underlying(), t2.underlying());
    let (oa, ob) = (a.out_edges(), b.out_edges());
    type Macro = (BTreeSet<StateId>, BTreeSet<StateId>);
    let start: Macro = (a.initial().iter().copied().collect(), b.initial().iter().copied().collect());
    let mut pred: HashMap<Macro, Option<(Macro, Letter)>> = HashMap::new();
    pred.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    while let Some(m) = queue.pop_front() {
        let acc_a = m.0.iter().any(|&q| a.is_final(q));
        let acc_b = m.1.iter().any(|&q| b.is_final(q));
        if acc_a != acc_b {
            let mut w = Vec::new();
            let mut cur = m;
            while let Some(Some((prev, l))) = pred.get(&cur) {
                w.push(*l);
                cur = prev.clone();
            }
            w.reverse();
            return Some(Word(w));
        }
        for l in t1.input.letters() {
            let step = |nfa: &Nfa<Letter>, out: &[Vec<usize>], set: &BTreeSet<StateId>| -> BTreeSet<StateId> {
                set.iter()
                    .flat_map(|&q| out[q].iter())
                    .map(|&e| &nfa.transitions()[e])
                    .filter(|t| t.label == l)
                    .map(|t| t.dst)
                    .collect()
            };
            let next = (step(&a, &oa, &m.0), step(&b, &ob, &m.1));
            if !pred.contains_key(&next) {
                pred.insert(next.clone(), Some((m.clone(), l)));
                queue.push_back(next);
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointEdge {
    pub src: StateId,
    pub input: Letter,
    pub left: Word,
    pub right: Word,
    pub dst: StateId,
}

/// Common unambiguous automaton carrying the output functions of two transducers.
#[derive(Debug, Clone)]
pub struct JointMachine {
    input: Alphabet,
    output: Alphabet,
    initial: Vec<StateId>,
    finals: Vec<Option<(Word, Word)>>,
    edges: Vec<JointEdge>,
}

impl JointMachine {
    /// Product of two transducers with the same domain; it is trimmed.
    pub fn new(t1: &Transducer, t2: &Transducer) -> Result<Self> {
        check_compatible(t1, t2)?;
        if !same_domain(t1, t2)? {
            return Err(Error::Input("transducers have different domains".into()));
        }
        let (o1, o2) = (t1.underlying().out_edges(), t2.underlying().out_edges());
        let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
        let mut states = Vec::new();
        let mut queue = VecDeque::new();
        for &p in t1.initial() {
            for &q in t2.initial() {
                index.insert((p, q), states.len());
                states.push((p, q));
                queue.push_back((p, q));
            }
        }
        let mut nfa_edges = Vec::new();
        while let Some((p, q)) = queue.pop_front() {
            for &i in &o1[p] {
                for &j in &o2[q] {
                    let (e, f) = (&t1.edges[i], &t2.edges[j]);
                    if e.input != f.input {
                        continue;
                    }
                    let key = (e.dst, f.dst);
                    let dst = *index.entry(key).or_insert_with(|| {
                        states.push(key);
                        queue.push_back(key);
                        states.len() - 1
                    });
                    nfa_edges.push(JointEdge {
                        src: index[&(p, q)],
                        input: e.input,
                        left: e.output.clone(),
                        right: f.output.clone(),
                        dst,
                    });
                }
            }
        }
        let finals = states
            .iter()
            .map(|&(p, q)| Some((t1.finals[p].clone()?, t2.finals[q].clone()?)))
            .collect::<Vec<_>>();
        let initial = (0..t1.initial().len() * t2.initial().len()).collect();
        Ok(Self { input: t1.input.clone(), output: t1.output.clone(), initial, finals, edges: nfa_edges }.trimmed())
    }

    /// Machine given directly by its parts; the underlying automaton must be unambiguous.
    pub fn from_parts(
        input: Alphabet,
        output: Alphabet,
        n_states: usize,
        initial: Vec<StateId>,
        finals: Vec<(StateId, Word, Word)>,
        edges: Vec<JointEdge>,
    ) -> Result<Self> {
        let mut f = vec![None; n_states];
        for (q, a, b) in finals {
            if q >= n_states {
                return Err(Error::Input(format!("final state {q} out of range")));
            }
            output.check_word(&a)?;
            output.check_word(&b)?;
            f[q] = Some((a, b));
        }
        for e in &edges {
            if e.src >= n_states || e.dst >= n_states {
                return Err(Error::Input("edge endpoint out of range".into()));
            }
            input.check_word(&[e.input])?;
            output.check_word(&e.left)?;
            output.check_word(&e.right)?;
        }
        if initial.iter().any(|&q| q >= n_states) {
            return Err(Error::Input("initial state out of range".into()));
        }
        let j = Self { input, output, initial, finals: f, edges }.trimmed();
        if !j.underlying().is_unambiguous() {
            return Err(Error::Input("joint machine is ambiguous".into()));
        }
        Ok(j)
    }

    fn trimmed(self) -> Self {
        let (_, kept, kept_edges) = self.underlying().trim_with_maps();
        let mut new_id = vec![usize::MAX; self.finals.len()];
        for (n, &q) in kept.iter().enumerate() {
            new_id[q] = n;
        }
        let mut initial: Vec<StateId> = self.initial.iter().filter(|&&q| new_id[q] != usize::MAX).map(|&q| new_id[q]).collect();
        initial.sort_unstable();
        initial.dedup();
        Self {
            input: self.input,
            output: self.output,
            initial,
            finals: kept.iter().map(|&q| self.finals[q].clone()).collect(),
            edges: kept_edges
                .iter()
                .map(|&i| {
                    let e = &self.edges[i];
                    JointEdge { src: new_id[e.src], dst: new_id[e.dst], ..e.clone() }
                })
                .collect(),
        }
    }

    pub fn input_alphabet(&self) -> &Alphabet {
        &self.input
    }

    pub fn output_alphabet(&self) -> &Alphabet {
        &self.output
    }

    pub fn n_states(&self) -> usize {
        self.finals.len()
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn final_outputs(&self, q: StateId) -> Option<&(Word, Word)> {
        self.finals[q].as_ref()
    }

    pub fn edges(&self) -> &[JointEdge] {
        &self.edges
    }

    pub fn max_output_len(&self) -> usize {
        let e = self.edges.iter().map(|e| e.left.len().max(e.right.len()));
        let f = self.finals.iter().flatten().map(|(a, b)| a.len().max(b.len()));
        e.chain(f).max().unwrap_or(0)
    }

    pub fn underlying(&self) -> Nfa<Letter> {
        let mut a = Nfa::new(self.n_states());
        for &q in &self.initial {
            a.set_initial(q);
        }
        for q in 0..self.n_states() {
            a.set_final(q, self.finals[q].is_some());
        }
        for e in &self.edges {
            a.add_transition(e.src, e.input, e.dst);
        }
        a
    }

    /// Both outputs on `w`, or `None` outside the domain.
    pub fn eval(&self, w: &[Letter]) -> Option<(Word, Word)> {
        let mut current: Vec<(StateId, Vec<Letter>, Vec<Letter>)> =
            self.initial.iter().map(|&q| (q, Vec::new(), Vec::new())).collect();
        for &a in w {
            let mut next = Vec::new();
            for (q, l, r) in &current {
                for e in self.edges.iter().filter(|e| e.src == *q && e.input == a) {
                    next.push((e.dst, [&l[..], &e.left].concat(), [&r[..], &e.right].concat()));
                }
            }
            current = next;
        }
        current.into_iter().find_map(|(q, l, r)| {
            let (fl, fr) = self.finals[q].as_ref()?;
            Some((Word([&l[..], fl].concat()), Word([&r[..], fr].concat())))
        })
    }

    /// The two component transducers.
    pub fn split(&self) -> Result<(Transducer, Transducer)> {
        let side = |left: bool| {
            Transducer::new(
                self.input.clone(),
                self.output.clone(),
                self.n_states(),
                self.initial.clone(),
                self.finals
                    .iter()
                    .enumerate()
                    .filter_map(|(q, f)| f.as_ref().map(|(a, b)| (q, if left { a.clone() } else { b.clone() })))
                    .collect(),
                self.edges
                    .iter()
                    .map(|e| Edge {
                        src: e.src,
                        input: e.input,
                        output: if left { e.left.clone() } else { e.right.clone() },
                        dst: e.dst,
                    })
                    .collect(),
            )
        };
        Ok((side(true)?, side(false)?))
    }

    /// Pair automaton of the output pairs: input letters become tags, multi-letter outputs are
    /// split over fresh states, and every final output pair moves onto a dedicated edge into a
    /// fresh final state.
    pub fn pair_automaton(&self) -> PairAutomaton {
        let mut p = PairAutomaton::new(self.n_states());
        for &q in &self.initial {
            p.set_initial(q);
        }
        for e in &self.edges {
            add_chain(&mut p, e.src, &e.left, &e.right, &[e.input], e.dst);
        }
        for q in 0..self.n_states() {
            if let Some((a, b)) = &self.finals[q] {
                let f = p.add_state();
                p.set_final(f, true);
                add_chain(&mut p, q, a, b, &[], f);
            }
        }
        p.trim()
    }
}

/// Product of two transducers with the same domain.
pub fn joint_product(t1: &Transducer, t2: &Transducer) -> Result<JointMachine> {
    JointMachine::new(t1, t2)
}

/// Two transducers over the alphabet of transitions of `p`: transition `i` is read as letter
/// `i` and produces its left (resp. right) component.
pub fn nivat_split(p: &PairAutomaton, alphabet: &Alphabet) -> Result<(Transducer, Transducer)> {
    let input = Alphabet::synthetic(p.transitions().len());
    let finals: Vec<(StateId, Word)> = p.finals().map(|q| (q, Word::empty())).collect();
    let side = |left: bool| {
        let edges = p
            .transitions()
            .iter()
            .enumerate()
            .map(|(i, t)| Edge {
                src: t.src,
                input: Letter(i as u32),
                output: Word(if left { t.label.left } else { t.label.right }.into_iter().collect()),
                dst: t.dst,
            })
            .collect();
        Transducer::new(input.clone(), alphabet.clone(), p.n_states(), p.initial().to_vec(), finals.clone(), edges)
    };
    Ok((side(true)?, side(false)?))
}
