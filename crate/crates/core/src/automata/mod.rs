//! Total deterministic automata over a finite alphabet: boolean operations,
//! minimization, word counting, exact generating functions and the
//! decomposition of loop-only automata into path terms.

mod poly;
mod rational;

use std::collections::{HashMap, VecDeque};

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::encoding::Letter;
use crate::error::{Error, Result};

pub use poly::{determinant, Poly};
pub use rational::RationalFunction;

/// Words counted by [`Dfa::generating_function`] when it checks itself
/// against [`Dfa::count_words`].
pub const GF_SELF_CHECK_LEN: usize = 20;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "DfaJson", into = "DfaJson")]
pub struct Dfa {
    alphabet: Vec<String>,
    start: usize,
    accepting: Vec<bool>,
    // state * alphabet.len() + letter
    table: Vec<usize>,
}

/// Wire form: `{"states", "alphabet", "start", "accepting", "transitions"}`
/// with accepting states listed by index and a dense transition table.
#[derive(Serialize, Deserialize)]
struct DfaJson {
    states: usize,
    alphabet: Vec<String>,
    start: usize,
    accepting: Vec<usize>,
    transitions: Vec<Vec<usize>>,
}

impl TryFrom<DfaJson> for Dfa {
    type Error = Error;

    fn try_from(j: DfaJson) -> Result<Dfa> {
        if j.transitions.len() != j.states {
            return Err(Error::InvalidAutomaton(format!(
                "{} transition rows for {} states",
                j.transitions.len(),
                j.states
            )));
        }
        let mut accepting = vec![false; j.states];
        for s in j.accepting {
            *accepting
                .get_mut(s)
                .ok_or_else(|| Error::InvalidAutomaton(format!("accepting state {s} out of range")))? = true;
        }
        Dfa::new(j.alphabet, j.start, accepting, j.transitions)
    }
}

impl From<Dfa> for DfaJson {
    fn from(d: Dfa) -> DfaJson {
        DfaJson {
            states: d.states(),
            start: d.start,
            accepting: (0..d.states()).filter(|&s| d.accepting[s]).collect(),
            transitions: (0..d.states())
                .map(|s| d.table[s * d.alphabet.len()..(s + 1) * d.alphabet.len()].to_vec())
                .collect(),
            alphabet: d.alphabet,
        }
    }
}

impl Dfa {
    pub fn new(
        alphabet: Vec<String>,
        start: usize,
        accepting: Vec<bool>,
        transitions: Vec<Vec<usize>>,
    ) -> Result<Dfa> {
        let n = accepting.len();
        if n == 0 || start >= n {
            return Err(Error::InvalidAutomaton("start state out of range".into()));
        }
        if transitions.len() != n {
            return Err(Error::InvalidAutomaton("one transition row per state required".into()));
        }
        let mut table = Vec::with_capacity(n * alphabet.len());
        for (s, row) in transitions.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(Error::InvalidAutomaton(format!("state {s} has {} transitions", row.len())));
            }
            if let Some(&t) = row.iter().find(|&&t| t >= n) {
                return Err(Error::InvalidAutomaton(format!("transition to missing state {t}")));
            }
            table.extend_from_slice(row);
        }
        Ok(Dfa {
            alphabet,
            start,
            accepting,
            table,
        })
    }

    /// Accepts every word.
    pub fn universal(alphabet: Vec<String>) -> Dfa {
        let k = alphabet.len();
        Dfa {
            alphabet,
            start: 0,
            accepting: vec![true],
            table: vec![0; k],
        }
    }

    /// Accepts nothing.
    pub fn empty_language(alphabet: Vec<String>) -> Dfa {
        let mut d = Dfa::universal(alphabet);
        d.accepting[0] = false;
        d
    }

    pub fn states(&self) -> usize {
        self.accepting.len()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_accepting(&self, s: usize) -> bool {
        self.accepting[s]
    }

    pub fn next(&self, s: usize, a: Letter) -> usize {
        self.table[s * self.alphabet.len() + a.0]
    }

    fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.alphabet.len()).map(Letter)
    }

    pub fn run(&self, w: &[Letter]) -> usize {
        w.iter().fold(self.start, |s, &a| self.next(s, a))
    }

    pub fn accepts(&self, w: &[Letter]) -> bool {
        self.accepting[self.run(w)]
    }

    fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.states()];
        seen[self.start] = true;
        let mut stack = vec![self.start];
        while let Some(s) = stack.pop() {
            for a in self.letters() {
                let t = self.next(s, a);
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    fn coaccessible(&self) -> Vec<bool> {
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); self.states()];
        for s in 0..self.states() {
            for a in self.letters() {
                preds[self.next(s, a)].push(s);
            }
        }
        let mut good = self.accepting.clone();
        let mut stack: Vec<usize> = (0..self.states()).filter(|&s| good[s]).collect();
        while let Some(t) = stack.pop() {
            for &s in &preds[t] {
                if !good[s] {
                    good[s] = true;
                    stack.push(s);
                }
            }
        }
        good
    }

    /// States both reachable from the start and able to reach acceptance.
    pub fn live_states(&self) -> Vec<bool> {
        let r = self.reachable();
        let c = self.coaccessible();
        r.iter().zip(&c).map(|(&a, &b)| a && b).collect()
    }

    pub fn is_empty_language(&self) -> bool {
        !self.live_states()[self.start]
    }

    /// Minimal equivalent automaton with states numbered in breadth-first
    /// order from the start, so equal languages give identical automata.
    pub fn minimize(&self) -> Dfa {
        let k = self.alphabet.len();
        // restrict to reachable states
        let reach = self.reachable();
        let states: Vec<usize> = (0..self.states()).filter(|&s| reach[s]).collect();
        let mut index = vec![usize::MAX; self.states()];
        for (i, &s) in states.iter().enumerate() {
            index[s] = i;
        }
        let next = |i: usize, a: usize| index[self.table[states[i] * k + a]];

        // Moore refinement
        let mut class: Vec<usize> = states.iter().map(|&s| usize::from(self.accepting[s])).collect();
        let mut count = 0;
        loop {
            let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
            let refined: Vec<usize> = (0..states.len())
                .map(|i| {
                    let mut sig = Vec::with_capacity(k + 1);
                    sig.push(class[i]);
                    sig.extend((0..k).map(|a| class[next(i, a)]));
                    let fresh = ids.len();
                    *ids.entry(sig).or_insert(fresh)
                })
                .collect();
            let new_count = ids.len();
            class = refined;
            if new_count == count {
                break;
            }
            count = new_count;
        }

        // canonical breadth-first numbering of classes
        let start_class = class[index[self.start]];
        let mut order = vec![usize::MAX; count];
        let mut reps = vec![usize::MAX; count];
        for i in 0..states.len() {
            if reps[class[i]] == usize::MAX {
                reps[class[i]] = i;
            }
        }
        let mut queue = VecDeque::from([start_class]);
        order[start_class] = 0;
        let mut numbered = vec![start_class];
        while let Some(c) = queue.pop_front() {
            for a in 0..k {
                let d = class[next(reps[c], a)];
                if order[d] == usize::MAX {
                    order[d] = numbered.len();
                    numbered.push(d);
                    queue.push_back(d);
                }
            }
        }
        let mut table = Vec::with_capacity(numbered.len() * k);
        let mut accepting = Vec::with_capacity(numbered.len());
        for &c in &numbered {
            accepting.push(self.accepting[states[reps[c]]]);
            table.extend((0..k).map(|a| order[class[next(reps[c], a)]]));
        }
        Dfa {
            alphabet: self.alphabet.clone(),
            start: 0,
            accepting,
            table,
        }
    }

    fn product(&self, other: &Dfa, keep: impl Fn(bool, bool) -> bool) -> Result<Dfa> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let k = self.alphabet.len();
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = vec![(self.start, other.start)];
        ids.insert((self.start, other.start), 0);
        let mut table = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            for a in self.letters() {
                let pair = (self.next(p, a), other.next(q, a));
                let id = *ids.entry(pair).or_insert_with(|| {
                    pairs.push(pair);
                    pairs.len() - 1
                });
                table.push(id);
            }
            i += 1;
        }
        debug_assert_eq!(table.len(), pairs.len() * k);
        let accepting = pairs
            .iter()
            .map(|&(p, q)| keep(self.accepting[p], other.accepting[q]))
            .collect();
        Ok(Dfa {
            alphabet: self.alphabet.clone(),
            start: 0,
            accepting,
            table,
        }
        .minimize())
    }

    pub fn intersect(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |a, b| a && b)
    }

    pub fn union(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |a, b| a || b)
    }

    pub fn difference(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> Dfa {
        Dfa {
            accepting: self.accepting.iter().map(|&a| !a).collect(),
            ..self.clone()
        }
        .minimize()
    }

    /// Language equality, decided by emptiness of both differences.
    pub fn equivalent(&self, other: &Dfa) -> Result<bool> {
        Ok(self.difference(other)?.is_empty_language() && other.difference(self)?.is_empty_language())
    }

    /// Number of accepted words of each length `0..=n`.
    pub fn count_words_upto(&self, n: usize) -> Vec<BigUint> {
        let mut occupancy = vec![BigUint::zero(); self.states()];
        occupancy[self.start] = BigUint::from(1u32);
        let mut out = Vec::with_capacity(n + 1);
        for len in 0..=n {
            let accepted = (0..self.states())
                .filter(|&s| self.accepting[s])
                .fold(BigUint::zero(), |acc, s| acc + &occupancy[s]);
            out.push(accepted);
            if len == n {
                break;
            }
            let mut next = vec![BigUint::zero(); self.states()];
            for (s, count) in occupancy.iter().enumerate() {
                if count.is_zero() {
                    continue;
                }
                for a in self.letters() {
                    next[self.next(s, a)] += count;
                }
            }
            occupancy = next;
        }
        out
    }

    /// Number of accepted words of length exactly `n`.
    pub fn count_words(&self, n: usize) -> BigUint {
        self.count_words_upto(n).pop().expect("n + 1 entries")
    }

    /// The generating function `sum |L_n| x^n` of the accepted language,
    /// obtained from the transfer matrix of the live states by Cramer's rule
    /// over `Z[x]`. The result is checked against [`Dfa::count_words`] up to
    /// length [`GF_SELF_CHECK_LEN`].
    pub fn generating_function(&self) -> Result<RationalFunction> {
        let live = self.live_states();
        let gf = if !live[self.start] {
            RationalFunction::new(Poly::zero(), Poly::one())
        } else {
            // start state first
            let mut states = vec![self.start];
            states.extend((0..self.states()).filter(|&s| live[s] && s != self.start));
            let mut index = HashMap::new();
            for (i, &s) in states.iter().enumerate() {
                index.insert(s, i);
            }
            let n = states.len();
            // (I - xT) v = accepting indicator; the answer is v[0]
            let mut system = vec![vec![Poly::zero(); n]; n];
            for (i, &s) in states.iter().enumerate() {
                let mut moves = vec![0i64; n];
                for a in self.letters() {
                    if let Some(&j) = index.get(&self.next(s, a)) {
                        moves[j] += 1;
                    }
                }
                for (j, &m) in moves.iter().enumerate() {
                    let diag = i64::from(i == j);
                    system[i][j] = Poly::from_i64s(&[diag, -m]);
                }
            }
            let rhs: Vec<Poly> = states
                .iter()
                .map(|&s| Poly::from_i64s(&[i64::from(self.accepting[s])]))
                .collect();
            let den = determinant(system.clone());
            let mut replaced = system;
            for (row, b) in replaced.iter_mut().zip(rhs) {
                row[0] = b;
            }
            let num = determinant(replaced);
            RationalFunction::new(num, den)
        };
        let series = gf.series(GF_SELF_CHECK_LEN + 1);
        for (len, count) in self.count_words_upto(GF_SELF_CHECK_LEN).into_iter().enumerate() {
            if series[len] != BigInt::from(count) {
                return Err(Error::GfMismatch(len));
            }
        }
        Ok(gf)
    }

    /// Live states in the non-self-loop transition graph, or `None` if that
    /// graph has a cycle.
    fn loop_free_order(&self) -> Option<Vec<usize>> {
        let live = self.live_states();
        let mut indegree = vec![0usize; self.states()];
        for s in (0..self.states()).filter(|&s| live[s]) {
            for a in self.letters() {
                let t = self.next(s, a);
                if t != s && live[t] {
                    indegree[t] += 1;
                }
            }
        }
        let mut ready: Vec<usize> = (0..self.states()).filter(|&s| live[s] && indegree[s] == 0).collect();
        let mut order = Vec::new();
        while let Some(s) = ready.pop() {
            order.push(s);
            for a in self.letters() {
                let t = self.next(s, a);
                if t != s && live[t] {
                    indegree[t] -= 1;
                    if indegree[t] == 0 {
                        ready.push(t);
                    }
                }
            }
        }
        (order.len() == live.iter().filter(|&&l| l).count()).then_some(order)
    }

    /// Every cycle through live states is a self-loop.
    pub fn is_path_loop_form(&self) -> bool {
        self.loop_free_order().is_some()
    }

    /// One [`PathTerm`] per simple path from the start to an accepting
    /// state, where each step between distinct states fixes its letter. The
    /// union of the terms' languages is the accepted language.
    pub fn decompose_paths(&self) -> Result<Vec<PathTerm>> {
        if !self.is_path_loop_form() {
            return Err(Error::NotPathLoopForm);
        }
        let live = self.live_states();
        let mut out = Vec::new();
        if !live[self.start] {
            return Ok(out);
        }
        let loops = |s: usize| -> Vec<Letter> { self.letters().filter(|&a| self.next(s, a) == s).collect() };
        let mut term = PathTerm {
            loops: vec![loops(self.start)],
            connectors: Vec::new(),
        };
        self.extend_paths(self.start, &live, &loops, &mut term, &mut out);
        Ok(out)
    }

    fn extend_paths(
        &self,
        s: usize,
        live: &[bool],
        loops: &impl Fn(usize) -> Vec<Letter>,
        term: &mut PathTerm,
        out: &mut Vec<PathTerm>,
    ) {
        if self.accepting[s] {
            out.push(term.clone());
        }
        for a in self.letters() {
            let t = self.next(s, a);
            if t == s || !live[t] {
                continue;
            }
            term.connectors.push(a);
            term.loops.push(loops(t));
            self.extend_paths(t, live, loops, term, out);
            term.loops.pop();
            term.connectors.pop();
        }
    }
}

/// The language `Σ_1* a_2 Σ_3* a_4 … a_{2q} Σ_{2q+1}*` with mandatory
/// connector letters.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct PathTerm {
    /// `q + 1` loop alphabets, each sorted.
    pub loops: Vec<Vec<Letter>>,
    /// `q` connector letters.
    pub connectors: Vec<Letter>,
}

impl PathTerm {
    pub fn q(&self) -> usize {
        self.connectors.len()
    }

    /// Loop alphabet `Σ_s` for odd `s`.
    pub fn loop_alphabet(&self, s: usize) -> &[Letter] {
        assert!(s % 2 == 1, "loop alphabets have odd index");
        &self.loops[(s - 1) / 2]
    }

    /// Connector `a_s` for even `s`.
    pub fn connector(&self, s: usize) -> Letter {
        assert!(s.is_multiple_of(2) && s >= 2, "connectors have even index");
        self.connectors[s / 2 - 1]
    }

    pub fn accepts(&self, w: &[Letter]) -> bool {
        // set of loop segments the word can currently be in
        let q = self.q();
        let mut current = vec![false; q + 1];
        current[0] = true;
        for &a in w {
            let mut next = vec![false; q + 1];
            for i in (0..=q).filter(|&i| current[i]) {
                if self.loops[i].contains(&a) {
                    next[i] = true;
                }
                if i < q && self.connectors[i] == a {
                    next[i + 1] = true;
                }
            }
            current = next;
        }
        current[q]
    }
}

/// Accepts the words over `alphabet` containing none of `forbidden` as a
/// (scattered) subword. States track how much of each forbidden word has
/// been matched greedily; progress never decreases.
pub fn subword_avoider(alphabet: Vec<String>, forbidden: &[Vec<Letter>]) -> Dfa {
    if forbidden.iter().any(Vec::is_empty) {
        return Dfa::empty_language(alphabet);
    }
    let k = alphabet.len();
    // state 0 is the shared sink reached once any forbidden word completes
    let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
    let start = vec![0usize; forbidden.len()];
    let mut states = vec![None, Some(start.clone())];
    ids.insert(start, 1);
    let mut table = vec![0; k];
    let mut i = 1;
    while i < states.len() {
        let progress = states[i].clone().expect("live state");
        for a in 0..k {
            let mut next = progress.clone();
            let mut done = false;
            for (j, f) in forbidden.iter().enumerate() {
                if f[next[j]].0 == a {
                    next[j] += 1;
                    done |= next[j] == f.len();
                }
            }
            let id = if done {
                0
            } else {
                *ids.entry(next.clone()).or_insert_with(|| {
                    states.push(Some(next));
                    states.len() - 1
                })
            };
            table.push(id);
        }
        i += 1;
    }
    let accepting = (0..states.len()).map(|s| s != 0).collect();
    Dfa {
        alphabet,
        start: 1,
        accepting,
        table,
    }
    .minimize()
}
