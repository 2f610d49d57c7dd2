//! Rational expressions of pairs of words: state elimination and sumfree decomposition.

use std::collections::HashMap;
use std::sync::Arc;

use crate::automata::StateId;
use crate::error::{Error, Result};
use crate::pair::{add_chain, PairAutomaton, PairLabel};
use crate::word::{Alphabet, Word};

/// A pair of words with the input word that produced it.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Atom {
    pub left: Word,
    pub right: Word,
    pub input: Word,
}

impl Atom {
    pub fn new(left: Word, right: Word) -> Self {
        Self { left, right, input: Word::empty() }
    }

    pub fn is_epsilon(&self) -> bool {
        self.left.is_empty() && self.right.is_empty() && self.input.is_empty()
    }

    pub fn then(&self, other: &Atom) -> Atom {
        Atom {
            left: self.left.concat(&other.left),
            right: self.right.concat(&other.right),
            input: self.input.concat(&other.input),
        }
    }

    fn from_label(l: &PairLabel) -> Atom {
        let w = |x: Option<crate::word::Letter>| Word(x.into_iter().collect());
        Atom { left: w(l.left), right: w(l.right), input: w(l.input) }
    }
}

/// Expression tree; subexpressions are shared.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairExpr {
    /// the empty relation
    Empty,
    Atom(Atom),
    Concat(Vec<Arc<PairExpr>>),
    Sum(Vec<Arc<PairExpr>>),
    Star(Arc<PairExpr>),
}

impl PairExpr {
    pub fn epsilon() -> Arc<PairExpr> {
        Arc::new(PairExpr::Atom(Atom::default()))
    }

    pub fn atom(a: Atom) -> Arc<PairExpr> {
        Arc::new(PairExpr::Atom(a))
    }

    fn is_epsilon(&self) -> bool {
        matches!(self, PairExpr::Atom(a) if a.is_epsilon())
    }

    pub fn concat(a: &Arc<PairExpr>, b: &Arc<PairExpr>) -> Arc<PairExpr> {
        match (&**a, &**b) {
            (PairExpr::Empty, _) | (_, PairExpr::Empty) => Arc::new(PairExpr::Empty),
            (x, _) if x.is_epsilon() => b.clone(),
            (_, y) if y.is_epsilon() => a.clone(),
            (PairExpr::Atom(x), PairExpr::Atom(y)) => PairExpr::atom(x.then(y)),
            _ => {
                let mut parts: Vec<Arc<PairExpr>> = Vec::new();
                for e in [a, b] {
                    let items: Vec<Arc<PairExpr>> = match &**e {
                        PairExpr::Concat(xs) => xs.clone(),
                        _ => vec![e.clone()],
                    };
                    for it in items {
                        match (parts.last().map(|l| &**l), &*it) {
                            (Some(PairExpr::Atom(x)), PairExpr::Atom(y)) => {
                                let merged = PairExpr::atom(x.then(y));
                                *parts.last_mut().expect("nonempty") = merged;
                            }
                            _ => parts.push(it),
                        }
                    }
                }
                Arc::new(PairExpr::Concat(parts))
            }
        }
    }

    pub fn sum(a: &Arc<PairExpr>, b: &Arc<PairExpr>) -> Arc<PairExpr> {
        match (&**a, &**b) {
            (PairExpr::Empty, _) => b.clone(),
            (_, PairExpr::Empty) => a.clone(),
            _ if a == b => a.clone(),
            _ => {
                let mut parts: Vec<Arc<PairExpr>> = Vec::new();
                for e in [a, b] {
                    let items = match &**e {
                        PairExpr::Sum(xs) => xs.clone(),
                        _ => vec![e.clone()],
                    };
                    for it in items {
                        if !parts.contains(&it) {
                            parts.push(it);
                        }
                    }
                }
                Arc::new(PairExpr::Sum(parts))
            }
        }
    }

    pub fn star(a: &Arc<PairExpr>) -> Arc<PairExpr> {
        match &**a {
            PairExpr::Empty => PairExpr::epsilon(),
            x if x.is_epsilon() => PairExpr::epsilon(),
            PairExpr::Star(_) => a.clone(),
            _ => Arc::new(PairExpr::Star(a.clone())),
        }
    }

    /// Parenthesized text: `(u,v)` atoms, juxtaposition, `+`, postfix `*`, `()` for the empty pair.
    pub fn render(&self, alphabet: &Alphabet) -> String {
        match self {
            PairExpr::Empty => "0".into(),
            PairExpr::Atom(a) if a.left.is_empty() && a.right.is_empty() => "()".into(),
            PairExpr::Atom(a) => format!("({},{})", alphabet.render(&a.left), alphabet.render(&a.right)),
            PairExpr::Concat(xs) => xs.iter().map(|x| x.render_factor(alphabet)).collect::<Vec<_>>().join(" "),
            PairExpr::Sum(xs) => xs.iter().map(|x| x.render(alphabet)).collect::<Vec<_>>().join(" + "),
            PairExpr::Star(x) => match &**x {
                PairExpr::Atom(_) => format!("{}*", x.render(alphabet)),
                _ => format!("({})*", x.render(alphabet)),
            },
        }
    }

    fn render_factor(&self, alphabet: &Alphabet) -> String {
        match self {
            PairExpr::Sum(_) => format!("({})", self.render(alphabet)),
            _ => self.render(alphabet),
        }
    }
}

/// Expression for the relation of `p`. States are eliminated in ascending order of
/// (in-degree × out-degree), ties broken by index.
pub fn state_elimination(p: &PairAutomaton) -> Arc<PairExpr> {
    let n = p.n_states();
    let (start, end) = (n, n + 1);
    let mut edges: HashMap<(StateId, StateId), Arc<PairExpr>> = HashMap::new();
    let add = |edges: &mut HashMap<(StateId, StateId), Arc<PairExpr>>, i, j, e: Arc<PairExpr>| {
        let cur = edges.remove(&(i, j)).unwrap_or_else(|| Arc::new(PairExpr::Empty));
        edges.insert((i, j), PairExpr::sum(&cur, &e));
    };
    for t in p.transitions() {
        add(&mut edges, t.src, t.dst, PairExpr::atom(Atom::from_label(&t.label)));
    }
    for &q in p.initial() {
        add(&mut edges, start, q, PairExpr::epsilon());
    }
    for q in p.finals() {
        add(&mut edges, q, end, PairExpr::epsilon());
    }
    let mut alive: Vec<bool> = vec![true; n];
    for _ in 0..n {
        let degree = |q: StateId| {
            let ins = edges.keys().filter(|(i, j)| *j == q && *i != q).count();
            let outs = edges.keys().filter(|(i, j)| *i == q && *j != q).count();
            ins * outs
        };
        let q = (0..n).filter(|&q| alive[q]).min_by_key(|&q| (degree(q), q)).expect("a live state");
        alive[q] = false;
        let loop_star = edges.remove(&(q, q)).map(|e| PairExpr::star(&e)).unwrap_or_else(PairExpr::epsilon);
        let ins: Vec<(StateId, Arc<PairExpr>)> =
            edges.iter().filter(|((_, j), _)| *j == q).map(|((i, _), e)| (*i, e.clone())).collect();
        let outs: Vec<(StateId, Arc<PairExpr>)> =
            edges.iter().filter(|((i, _), _)| *i == q).map(|((_, j), e)| (*j, e.clone())).collect();
        edges.retain(|(i, j), _| *i != q && *j != q);
        let mut ins = ins;
        let mut outs = outs;
        ins.sort_by_key(|(i, _)| *i);
        outs.sort_by_key(|(j, _)| *j);
        for (i, ein) in &ins {
            for (j, eout) in &outs {
                let through = PairExpr::concat(&PairExpr::concat(ein, &loop_star), eout);
                add(&mut edges, *i, *j, through);
            }
        }
    }
    edges.remove(&(start, end)).unwrap_or_else(|| Arc::new(PairExpr::Empty))
}

/// Factor of a sumfree expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factor {
    Const(Atom),
    Star(Arc<Sumfree>),
}

/// Sum-free expression: a product of constants and starred sum-free expressions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Sumfree {
    pub factors: Vec<Factor>,
}

impl Sumfree {
    pub fn epsilon() -> Self {
        Self::default()
    }

    fn then(&self, other: &Sumfree) -> Sumfree {
        let mut factors = self.factors.clone();
        for f in &other.factors {
            match (factors.last_mut(), f) {
                (Some(Factor::Const(a)), Factor::Const(b)) => *a = a.then(b),
                _ => factors.push(f.clone()),
            }
        }
        Sumfree { factors }
    }

    fn starred(body: Arc<Sumfree>) -> Sumfree {
        if body.factors.is_empty() {
            Sumfree::epsilon()
        } else {
            Sumfree { factors: vec![Factor::Star(body)] }
        }
    }

    /// Canonical shape `c0 S1* c1 ... Sk* ck`: the k+1 constants and the k star bodies.
    pub fn canonical(&self) -> (Vec<Atom>, Vec<Arc<Sumfree>>) {
        let mut consts = vec![Atom::default()];
        let mut stars = Vec::new();
        for f in &self.factors {
            match f {
                Factor::Const(a) => {
                    let last = consts.last_mut().expect("nonempty");
                    *last = last.then(a);
                }
                Factor::Star(b) => {
                    stars.push(b.clone());
                    consts.push(Atom::default());
                }
            }
        }
        (consts, stars)
    }

    /// Total length of constant components plus the number of stars, counted recursively.
    pub fn size_measure(&self) -> usize {
        self.factors
            .iter()
            .map(|f| match f {
                Factor::Const(a) => a.left.len() + a.right.len(),
                Factor::Star(b) => 1 + b.size_measure(),
            })
            .sum()
    }

    pub fn to_expr(&self) -> Arc<PairExpr> {
        self.factors.iter().fold(PairExpr::epsilon(), |acc, f| {
            let e = match f {
                Factor::Const(a) => PairExpr::atom(a.clone()),
                Factor::Star(b) => PairExpr::star(&b.to_expr()),
            };
            PairExpr::concat(&acc, &e)
        })
    }

    /// Automaton with one initial and one final state recognizing the same pairs.
    pub fn automaton(&self) -> PairAutomaton {
        let mut p = PairAutomaton::new(1);
        p.set_initial(0);
        let end = self.build(&mut p, 0);
        p.set_final(end, true);
        p
    }

    fn build(&self, p: &mut PairAutomaton, from: StateId) -> StateId {
        let mut cur = from;
        for f in &self.factors {
            match f {
                Factor::Const(a) => {
                    let next = p.add_state();
                    add_chain(p, cur, &a.left, &a.right, &a.input, next);
                    cur = next;
                }
                Factor::Star(b) => {
                    let hub = p.add_state();
                    p.add_transition(cur, PairLabel::EPSILON, hub);
                    let body_end = b.build(p, hub);
                    p.add_transition(body_end, PairLabel::EPSILON, hub);
                    cur = hub;
                }
            }
        }
        cur
    }
}

/// Sum of sumfree expressions with the same relation as `e`. Concatenation distributes over
/// sums and `(X + Y)*` becomes `(X* Y)* X*`. Fails once more than `limit` summands arise.
pub fn sumfree_decompose(e: &Arc<PairExpr>, limit: usize) -> Result<Vec<Arc<Sumfree>>> {
    let mut memo: HashMap<*const PairExpr, Vec<Arc<Sumfree>>> = HashMap::new();
    decompose(e, limit, &mut memo)
}

fn decompose(
    e: &Arc<PairExpr>,
    limit: usize,
    memo: &mut HashMap<*const PairExpr, Vec<Arc<Sumfree>>>,
) -> Result<Vec<Arc<Sumfree>>> {
    if let Some(r) = memo.get(&Arc::as_ptr(e)) {
        return Ok(r.clone());
    }
    let too_many = |n: usize| Error::Resource(format!("sumfree decomposition exceeds {limit} summands (reached {n})"));
    let result: Vec<Arc<Sumfree>> = match &**e {
        PairExpr::Empty => Vec::new(),
        PairExpr::Atom(a) if a.is_epsilon() => vec![Arc::new(Sumfree::epsilon())],
        PairExpr::Atom(a) => vec![Arc::new(Sumfree { factors: vec![Factor::Const(a.clone())] })],
        PairExpr::Sum(xs) => {
            let mut out: Vec<Arc<Sumfree>> = Vec::new();
            for x in xs {
                for s in decompose(x, limit, memo)? {
                    if !out.contains(&s) {
                        out.push(s);
                    }
                }
                if out.len() > limit {
                    return Err(too_many(out.len()));
                }
            }
            out
        }
        PairExpr::Concat(xs) => {
            let mut acc = vec![Arc::new(Sumfree::epsilon())];
            for x in xs {
                let parts = decompose(x, limit, memo)?;
                if acc.len() * parts.len() > limit {
                    return Err(too_many(acc.len() * parts.len()));
                }
                acc = acc.iter().flat_map(|a| parts.iter().map(move |b| Arc::new(a.then(b)))).collect();
            }
            acc
        }
        PairExpr::Star(x) => {
            let parts = decompose(x, limit, memo)?;
            vec![Arc::new(star_of_sum(&parts))]
        }
    };
    memo.insert(Arc::as_ptr(e), result.clone());
    Ok(result)
}

/// `(s1 + ... + sn)*` as one sumfree expression.
fn star_of_sum(parts: &[Arc<Sumfree>]) -> Sumfree {
    match parts {
        [] => Sumfree::epsilon(),
        [only] => Sumfree::starred(only.clone()),
        [first, rest @ ..] => {
            let first_star = Sumfree::starred(first.clone());
            let inner: Vec<Arc<Sumfree>> = rest.iter().map(|y| Arc::new(first_star.then(y))).collect();
            Sumfree::starred(Arc::new(star_of_sum(&inner))).then(&first_star)
        }
    }
}
