//! The trace monoid of a cell alphabet. Letters in cells sharing neither a
//! row nor a column commute; two words with the same trace encode the same
//! gridded permutation.

use std::collections::{HashMap, VecDeque};

use crate::automata::Dfa;
use crate::encoding::{CellAlphabet, Letter, Word};
use crate::error::Result;

/// A set of letters as a bitset.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub(crate) struct LetterSet(Vec<u64>);

impl LetterSet {
    pub(crate) fn new(len: usize) -> Self {
        LetterSet(vec![0; len.div_ceil(64)])
    }

    pub(crate) fn contains(&self, a: Letter) -> bool {
        self.0[a.0 / 64] >> (a.0 % 64) & 1 == 1
    }

    pub(crate) fn insert(&mut self, a: Letter) {
        self.0[a.0 / 64] |= 1 << (a.0 % 64);
    }
}

/// The forbidden set after reading `c` in state `s`, or `None` if `c` is
/// itself forbidden. A letter `b` stays forbidden while it commutes with
/// everything read since some larger letter it commutes with.
pub(crate) fn step(alpha: &CellAlphabet, s: &LetterSet, c: Letter) -> Option<LetterSet> {
    if s.contains(c) {
        return None;
    }
    let mut next = LetterSet::new(alpha.len());
    for b in alpha.letters() {
        if alpha.independent(b, c) && (c > b || s.contains(b)) {
            next.insert(b);
        }
    }
    Some(next)
}

/// The lexicographically least word with the same trace as `w`: repeatedly
/// emit the least letter among positions with no unemitted dependent
/// predecessor, taking the earliest such position on ties.
pub fn normal_form(alpha: &CellAlphabet, w: &[Letter]) -> Word {
    let mut emitted = vec![false; w.len()];
    let mut out = Vec::with_capacity(w.len());
    for _ in 0..w.len() {
        let mut best: Option<usize> = None;
        for j in (0..w.len()).filter(|&j| !emitted[j]) {
            let blocked = (0..j).any(|i| !emitted[i] && !alpha.independent(w[i], w[j]));
            if !blocked && best.is_none_or(|b| w[j] < w[b]) {
                best = Some(j);
            }
        }
        let j = best.expect("the first unemitted position is always a source");
        emitted[j] = true;
        out.push(w[j]);
    }
    out
}

pub fn trace_equivalent(alpha: &CellAlphabet, v: &[Letter], w: &[Letter]) -> Result<bool> {
    alpha.check_word(v)?;
    alpha.check_word(w)?;
    Ok(normal_form(alpha, v) == normal_form(alpha, w))
}

pub fn is_normal_form(alpha: &CellAlphabet, w: &[Letter]) -> bool {
    let mut s = LetterSet::new(alpha.len());
    for &c in w {
        match step(alpha, &s, c) {
            Some(t) => s = t,
            None => return false,
        }
    }
    true
}

/// Automaton accepting exactly the normal forms. States are the reachable
/// forbidden sets, numbered in breadth-first order from the empty set, plus
/// a dead state numbered last.
pub fn normal_form_automaton(alpha: &CellAlphabet) -> Dfa {
    let k = alpha.len();
    let start = LetterSet::new(k);
    let mut ids: HashMap<LetterSet, usize> = HashMap::from([(start.clone(), 0)]);
    let mut sets = vec![start];
    let mut rows: Vec<Vec<Option<usize>>> = Vec::new();
    let mut queue = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        let s = sets[i].clone();
        let row = alpha
            .letters()
            .map(|c| {
                step(alpha, &s, c).map(|t| {
                    *ids.entry(t.clone()).or_insert_with(|| {
                        sets.push(t);
                        queue.push_back(sets.len() - 1);
                        sets.len() - 1
                    })
                })
            })
            .collect();
        if rows.len() <= i {
            rows.resize(i + 1, Vec::new());
        }
        rows[i] = row;
    }
    let dead = sets.len();
    let mut transitions: Vec<Vec<usize>> = rows
        .into_iter()
        .map(|row| row.into_iter().map(|t| t.unwrap_or(dead)).collect())
        .collect();
    transitions.push(vec![dead; k]);
    let mut accepting = vec![true; dead];
    accepting.push(false);
    Dfa::new(alpha.labels(), 0, accepting, transitions).expect("well-formed by construction")
}

/// All normal forms of length `n`, in lexicographic order.
pub fn normal_forms(alpha: &CellAlphabet, n: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(n);
    extend_normal_forms(alpha, &LetterSet::new(alpha.len()), n, &mut word, &mut |w| {
        out.push(w.to_vec())
    });
    out
}

/// Calls `visit` on every normal form of length `n` that extends `prefix`,
/// given the forbidden set `s` reached after `prefix`.
pub(crate) fn extend_normal_forms(
    alpha: &CellAlphabet,
    s: &LetterSet,
    n: usize,
    prefix: &mut Word,
    visit: &mut impl FnMut(&[Letter]),
) {
    if prefix.len() == n {
        visit(prefix);
        return;
    }
    for c in alpha.letters() {
        if let Some(t) = step(alpha, s, c) {
            prefix.push(c);
            extend_normal_forms(alpha, &t, n, prefix, visit);
            prefix.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use std::collections::{BTreeSet, HashSet};

    use num_bigint::BigUint;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::matrix::GridMatrix;
    use crate::testutil::words;

    fn alpha(s: &str) -> CellAlphabet {
        CellAlphabet::new(&s.parse::<GridMatrix>().unwrap()).unwrap()
    }

    fn matrices() -> Vec<CellAlphabet> {
        ["1", "1 1", "1 0\n0 1", "1 -1\n-1 1", "-1 1\n1 -1", "1 1\n1 1", "0 1 1\n1 0 -1"]
            .iter()
            .map(|s| alpha(s))
            .collect()
    }

    /// Every word reachable from `w` by swapping adjacent independent letters.
    fn swap_closure(alpha: &CellAlphabet, w: &[Letter]) -> BTreeSet<Word> {
        let mut seen = BTreeSet::from([w.to_vec()]);
        let mut stack = vec![w.to_vec()];
        while let Some(v) = stack.pop() {
            for i in 0..v.len().saturating_sub(1) {
                if alpha.independent(v[i], v[i + 1]) {
                    let mut u = v.clone();
                    u.swap(i, i + 1);
                    if seen.insert(u.clone()) {
                        stack.push(u);
                    }
                }
            }
        }
        seen
    }

    #[test]
    fn normal_form_is_the_least_word_in_the_trace() {
        for a in matrices().iter().filter(|a| a.len() <= 4) {
            for n in 0..=6 {
                for w in words(a, n) {
                    let closure = swap_closure(a, &w);
                    let nf = normal_form(a, &w);
                    assert!(closure.contains(&nf));
                    assert_eq!(&nf, closure.first().unwrap());
                }
            }
        }
    }

    #[test]
    fn four_cell_normal_form() {
        let a = alpha("0 1 1\n1 0 -1");
        let v = a.parse_word("3,1 3,2 1,1 2,2 3,1 3,2 1,1").unwrap();
        let w = a.parse_word("3,1 1,1 3,2 2,2 3,1 3,2 1,1").unwrap();
        assert!(trace_equivalent(&a, &v, &w).unwrap());
        let oracle = swap_closure(&a, &w).into_iter().next().unwrap();
        assert_eq!(normal_form(&a, &w), oracle);
        assert_eq!(a.format_word(&oracle), "3,1 1,1 3,2 2,2 3,1 1,1 3,2");
    }

    #[test]
    fn trivial_normal_forms() {
        let a = alpha("1 1");
        let w = a.parse_word("2,1 1,1 2,1").unwrap();
        assert_eq!(normal_form(&a, &w), w);
        assert_eq!(normal_form(&a, &[]), Vec::<Letter>::new());
        let v = a.parse_word("1,1 2,1").unwrap();
        let u = a.parse_word("2,1 1,1").unwrap();
        assert!(!trace_equivalent(&a, &v, &u).unwrap());
        assert!(trace_equivalent(&a, &v, &v).unwrap());
        assert!(trace_equivalent(&a, &v, &[Letter(7)]).is_err());
    }

    #[test]
    fn automaton_accepts_exactly_normal_forms() {
        for a in matrices() {
            let dfa = normal_form_automaton(&a);
            let max = if a.len() <= 4 { 6 } else { 5 };
            for n in 0..=max {
                for w in words(&a, n) {
                    let oracle = swap_closure(&a, &w).into_iter().next().unwrap() == w;
                    assert_eq!(dfa.accepts(&w), oracle, "{a:?} {w:?}");
                    assert_eq!(is_normal_form(&a, &w), oracle);
                }
            }
        }
    }

    /// `b` is forbidden after `w` iff some occurrence of a larger letter `a`
    /// commuting with `b` is followed only by letters commuting with `b`.
    #[test]
    fn forbidden_sets_match_factor_characterization() {
        for a in matrices() {
            for n in 0..=5 {
                for w in words(&a, n).into_iter().filter(|w| is_normal_form(&a, w)) {
                    let mut s = LetterSet::new(a.len());
                    for &c in &w {
                        s = step(&a, &s, c).unwrap();
                    }
                    for b in a.letters() {
                        let oracle = (0..w.len()).any(|i| {
                            w[i] > b && a.independent(w[i], b) && w[i + 1..].iter().all(|&x| a.independent(x, b))
                        });
                        assert_eq!(s.contains(b), oracle);
                    }
                }
            }
        }
    }

    #[test]
    fn phi_sharp_identifies_exactly_traces() {
        for a in matrices() {
            for n in 0..=4 {
                let ws = words(&a, n);
                for v in &ws {
                    for w in &ws {
                        let same_image = a.phi_sharp(v).unwrap() == a.phi_sharp(w).unwrap();
                        assert_eq!(same_image, trace_equivalent(&a, v, w).unwrap());
                    }
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for a in matrices() {
            for _ in 0..1000 {
                let n = rng.gen_range(0..=7);
                let random = |rng: &mut ChaCha8Rng| -> Word { (0..n).map(|_| Letter(rng.gen_range(0..a.len()))).collect() };
                let v = random(&mut rng);
                // half the pairs are shuffles within the trace
                let w = if rng.gen_bool(0.5) {
                    let closure: Vec<Word> = swap_closure(&a, &v).into_iter().collect();
                    closure[rng.gen_range(0..closure.len())].clone()
                } else {
                    random(&mut rng)
                };
                let same_image = a.phi_sharp(&v).unwrap() == a.phi_sharp(&w).unwrap();
                assert_eq!(same_image, trace_equivalent(&a, &v, &w).unwrap());
            }
        }
    }

    #[test]
    fn counts_match_distinct_gridded_images() {
        for a in matrices() {
            let dfa = normal_form_automaton(&a);
            let max = if a.len() <= 4 { 7 } else { 6 };
            for n in 0..=max {
                let images: HashSet<_> = words(&a, n).iter().map(|w| a.phi_sharp(w).unwrap()).collect();
                assert_eq!(dfa.count_words(n), BigUint::from(images.len()));
                assert_eq!(normal_forms(&a, n).len(), images.len());
            }
        }
    }

    #[test]
    fn small_automata() {
        let one = normal_form_automaton(&alpha("1"));
        assert_eq!(one.generating_function().unwrap().to_string(), "1/(1 - 1*x)");
        assert_eq!(one.minimize().states(), 1);
        let row = normal_form_automaton(&alpha("1 1"));
        assert_eq!(row.generating_function().unwrap().to_string(), "1/(1 - 2*x)");
        let diag = normal_form_automaton(&alpha("0 1\n1 0"));
        assert_eq!(diag.generating_function().unwrap().to_string(), "1/(1 - 2*x + 1*x^2)");
        assert_eq!(diag.count_words(6), BigUint::from(7u32));
        // empty set, {1,1} after reading 2,2, and the dead state
        assert_eq!(diag.minimize().states(), 3);
        let a = alpha("0 1\n1 0");
        let ba = a.parse_word("2,2 1,1").unwrap();
        assert!(!diag.accepts(&ba));
        assert!(diag.accepts(&a.parse_word("1,1 1,1 2,2 2,2").unwrap()));
    }
}
