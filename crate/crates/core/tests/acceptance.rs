//! Acceptance checks, one per criterion. Prints a PASS/FAIL line for each
//! and exits non-zero if any fails.

use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use geomgrid::*;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn mat(s: &str) -> GridMatrix {
    s.parse().unwrap()
}

fn p(s: &str) -> Permutation {
    s.parse().unwrap()
}

fn perms(list: &[&str]) -> Vec<Permutation> {
    list.iter().map(|s| p(s)).collect()
}

const FOUR_BY_THREE: &str = "0 -1 1 0\n1 -1 0 1\n0 0 0 -1";
const FIVE_CELL: &str = "0 1 1\n1 -1 -1";
const FOUR_CELL: &str = "0 1 1\n1 0 -1";
const HOOK: &str = "1 -1 1\n-1 0 0";
const X: &str = "-1 1\n1 -1";
const DIAG: &str = "0 1\n1 0";

fn words(alpha: &CellAlphabet, n: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                alpha.letters().map(move |a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out
}

fn is_subword(small: &[Letter], big: &[Letter]) -> bool {
    let mut it = big.iter();
    small.iter().all(|a| it.any(|b| b == a))
}

fn brute_contains(pattern: &Permutation, host: &Permutation) -> bool {
    let (k, n) = (pattern.len(), host.len());
    fn go(pattern: &Permutation, host: &Permutation, from: usize, chosen: &mut Vec<usize>) -> bool {
        if chosen.len() == pattern.len() {
            let values: Vec<usize> = chosen.iter().map(|&i| host.at(i)).collect();
            return Permutation::pattern_of(&values) == *pattern;
        }
        (from..=host.len()).any(|i| {
            chosen.push(i);
            let found = go(pattern, host, i + 1, chosen);
            chosen.pop();
            found
        })
    }
    k <= n && go(pattern, host, 1, &mut Vec::new())
}

fn criterion_1() {
    let signs: SignAssignment = "c=-1,+1,+1 r=-1,+1".parse().unwrap();
    let alpha = CellAlphabet::with_signs(&mat(FIVE_CELL), signs).unwrap();
    let w = alpha.parse_word("3,1 3,1 2,2 2,1 1,1 3,2 2,2").unwrap();
    assert_eq!(alpha.phi(&w).unwrap(), p("1527436"));
}

fn criterion_2() {
    let alpha = CellAlphabet::new(&mat(FOUR_CELL)).unwrap();
    let v = alpha.parse_word("3,1 3,2 1,1 2,2 3,1 3,2 1,1").unwrap();
    let w = alpha.parse_word("3,1 1,1 3,2 2,2 3,1 3,2 1,1").unwrap();
    assert_eq!(alpha.phi_sharp(&v).unwrap(), alpha.phi_sharp(&w).unwrap());
    assert_eq!(normal_form(&alpha, &v), normal_form(&alpha, &w));
    assert_eq!(alpha.phi(&v).unwrap(), p("2465371"));
    assert_eq!(alpha.phi(&w).unwrap(), p("2465371"));
}

fn criterion_3() {
    let x = mat(X);
    assert!(member_grid(&p("2413"), &x));
    assert!(!member_geom(&p("2413"), &x));
    let limits = Limits::default();
    let geom = enumerate(&ClassSpec::geom(x.clone()).unwrap(), 4, &limits).unwrap();
    let grid = enumerate(&ClassSpec::grid(x).unwrap(), 4, &limits).unwrap();
    assert!(geom.len() < grid.len(), "{} vs {}", geom.len(), grid.len());
}

fn criterion_4() {
    let limits = Limits::default();
    let b = basis(&ClassSpec::geom(mat("1")).unwrap(), 4, &limits).unwrap();
    assert_eq!(b.elements.iter().collect::<BTreeSet<_>>(), perms(&["21"]).iter().collect());
    let b = basis(&ClassSpec::geom(mat("1 1")).unwrap(), 5, &limits).unwrap();
    assert_eq!(
        b.elements.iter().collect::<BTreeSet<_>>(),
        perms(&["321", "2143", "3142"]).iter().collect()
    );
    let b = basis(&ClassSpec::grid(mat("-1 1\n1 -1")).unwrap(), 5, &limits).unwrap();
    assert_eq!(b.elements.iter().collect::<BTreeSet<_>>(), perms(&["2143", "3412"]).iter().collect());
}

fn random_forests(count: usize, seed: u64) -> Vec<GridMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let (t, u) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let m = GridMatrix::from_fn(t, u, |_, _| rng.gen_range(-1..=1));
        if !m.is_zero() && m.is_forest() && m.nonzero_cells().len() >= 2 {
            out.push(m);
        }
    }
    out
}

fn criterion_5() {
    let limits = Limits::default();
    let mut forests = vec![mat("1"), mat("1 1"), mat(DIAG), mat(FOUR_BY_THREE)];
    forests.extend(random_forests(5, 0));
    for m in &forests {
        assert!(m.is_forest(), "{m:?}");
        assert!(verify_forest_equality(m, 6, &limits).unwrap(), "{m:?}");
    }
    assert!(!verify_forest_equality(&mat(X), 4, &limits).unwrap());
}

fn criterion_6() {
    let expected = [("1", "1/(1 - 1*x)"), ("1 1", "1/(1 - 2*x)"), (DIAG, "1/(1 - 2*x + 1*x^2)")];
    for (m, gf) in expected {
        assert_eq!(gridded_gf(&mat(m)).unwrap().to_string(), gf);
    }
    for m in ["1", "1 1", DIAG, X, "1 1\n1 1", FOUR_CELL, HOOK, FOUR_BY_THREE] {
        let m = mat(m);
        let alpha = CellAlphabet::new(&m).unwrap();
        let series = gridded_gf(&m).unwrap().series(9);
        for (n, coeff) in series.iter().enumerate() {
            let distinct: HashSet<GriddedPermutation> =
                words(&alpha, n).iter().map(|w| alpha.phi_sharp(w).unwrap()).collect();
            assert_eq!(*coeff, BigInt::from(distinct.len()), "{m:?} n={n}");
        }
    }
}

fn swap_closure_min(alpha: &CellAlphabet, w: &[Letter]) -> Word {
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
    seen.into_iter().next().unwrap()
}

fn criterion_7() {
    for m in ["1 1", DIAG, X, "1 1\n1 1", FOUR_CELL] {
        let alpha = CellAlphabet::new(&mat(m)).unwrap();
        let dfa = normal_form_automaton(&alpha);
        for n in 0..=6 {
            for w in words(&alpha, n) {
                assert_eq!(dfa.accepts(&w), swap_closure_min(&alpha, &w) == w, "{m} {w:?}");
            }
        }
    }
}

fn all_matrices(t: usize, u: usize) -> impl Iterator<Item = GridMatrix> {
    (0..3usize.pow((t * u) as u32)).map(move |code| {
        let mut c = code;
        GridMatrix::from_fn(t, u, |_, _| {
            let v = (c % 3) as i8 - 1;
            c /= 3;
            v
        })
    })
}

fn criterion_8() {
    for t in 1..=3 {
        for u in 1..=3 {
            for m in all_matrices(t, u) {
                let signs = m.refine(2).unwrap().infer_signs();
                assert!(signs.is_some(), "{m:?}");
            }
        }
    }
    let limits = Limits::default();
    for m in ["1", "1 1", DIAG, X, FOUR_BY_THREE, FOUR_CELL, HOOK, "1 1\n1 -1"] {
        let m = mat(m);
        let a = ClassSpec::geom(m.clone()).unwrap();
        let b = ClassSpec::geom(m.refine(2).unwrap()).unwrap();
        for n in 0..=6 {
            assert_eq!(enumerate(&a, n, &limits).unwrap(), enumerate(&b, n, &limits).unwrap(), "{m:?} n={n}");
        }
    }
}

fn criterion_9() {
    let descents = |q: &Permutation| (1..q.len()).filter(|&i| q.at(i) > q.at(i + 1)).count();
    let limits = Limits::default();
    let row = ClassSpec::geom(mat("1 1")).unwrap();
    for n in 1..=10 {
        let members = enumerate(&row, n, &limits).unwrap();
        let formula = (1usize << n) - n;
        if n <= 8 {
            let oracle: Vec<Permutation> = Permutation::all(n).into_iter().filter(|q| descents(q) <= 1).collect();
            assert_eq!(oracle.len(), formula, "descent oracle n={n}");
            assert_eq!(members, oracle, "n={n}");
        }
        assert_eq!(members.len(), formula, "n={n}");
    }
}

fn criterion_10() {
    let limits = Limits::default();
    let spec = ClassSpec::grid(mat("-1 1\n1 -1")).unwrap();
    let basis = perms(&["2143", "3412"]);
    for n in 0..=7 {
        let oracle: Vec<Permutation> = Permutation::all(n)
            .into_iter()
            .filter(|q| basis.iter().all(|b| !brute_contains(b, q)))
            .collect();
        assert_eq!(enumerate(&spec, n, &limits).unwrap(), oracle, "n={n}");
    }
}

fn criterion_11() {
    for t in 1..=2 {
        for u in 1..=2 {
            for m in all_matrices(t, u).filter(|m| !m.is_zero() && m.is_partial_multiplication()) {
                let signs = m.infer_signs().unwrap();
                let negated = SignAssignment::new(
                    signs.col_signs().iter().map(|s| -s).collect(),
                    signs.row_signs().iter().map(|s| -s).collect(),
                )
                .unwrap();
                for signs in [signs, negated] {
                    let alpha = CellAlphabet::with_signs(&m, signs).unwrap();
                    let images: HashSet<GriddedPermutation> = (0..=5)
                        .flat_map(|n| words(&alpha, n))
                        .map(|w| alpha.phi_sharp(&w).unwrap())
                        .collect();
                    for n in 0..=5 {
                        for q in Permutation::all(n) {
                            for g in all_griddings(&q, &m) {
                                assert_eq!(member_gridded_geom(&g, &alpha), images.contains(&g), "{m:?} {g:?}");
                            }
                        }
                    }
                }
            }
        }
    }
}

fn decomposition_cases() -> Vec<(&'static str, Vec<&'static str>)> {
    vec![
        ("1", vec![]),
        ("1 1", vec!["2,1 1,1"]),
        (X, vec!["1,1 2,2", "2,1 2,1"]),
        (HOOK, vec!["2,2 2,2 2,2", "3,2 1,1"]),
        (HOOK, vec!["2,2 2,2 1,1", "1,1 3,2 1,1"]),
        (FOUR_CELL, vec!["1,1 3,2 1,1", "2,2 2,2"]),
    ]
}

fn criterion_12() {
    // a fixed path term on the hook matrix
    let alpha = CellAlphabet::new(&mat(HOOK)).unwrap();
    let set = |s: &str| alpha.parse_word(s).unwrap();
    let term = PathTerm {
        loops: vec![set("1,1 1,2"), set("1,1 1,2 3,2"), set("1,2 3,2")],
        connectors: vec![set("2,2")[0], set("2,2")[0]],
    };
    let hook_atom = atom_for_term(&alpha, &term);
    assert_eq!((hook_atom.cols(), hook_atom.rows()), (15, 10));
    assert_eq!(hook_atom.dots().len(), 2);
    assert!(hook_atom.is_dot_isolated());

    let mut atoms = vec![hook_atom];
    for (m, forbidden) in decomposition_cases() {
        let m = mat(m);
        let alpha = CellAlphabet::new(&m).unwrap();
        let forbidden: Vec<Word> = forbidden.iter().map(|s| alpha.parse_word(s).unwrap()).collect();
        let outputs = decompose_to_atoms(&m, &forbidden).unwrap();
        for n in 0..=5 {
            let image: HashSet<Permutation> = words(&alpha, n)
                .into_iter()
                .filter(|w| forbidden.iter().all(|f| !is_subword(f, w)))
                .map(|w| alpha.phi(&w).unwrap())
                .collect();
            let mut union = HashSet::new();
            for d in &outputs {
                assert!(d.is_dot_isolated());
                union.extend(enumerate_geom_dotted(d, n).unwrap());
            }
            assert_eq!(union, image, "{m:?} n={n}");
        }
        atoms.extend(outputs);
    }

    for d in &atoms {
        let members: Vec<Permutation> = (1..=3).flat_map(|n| enumerate_geom_dotted(d, n).unwrap()).collect();
        for a in &members {
            for b in &members {
                let t = joint_embed(d, a, b, 8).unwrap();
                let t = t.unwrap_or_else(|| panic!("no joint embedding of {a} and {b} in {d:?}"));
                assert!(brute_contains(a, &t) && brute_contains(b, &t));
            }
        }
    }
}

fn interval_oracle(q: &Permutation) -> (bool, bool, bool) {
    let n = q.len();
    let mut nontrivial = false;
    for i in 1..=n {
        for j in i..=n {
            let values: Vec<usize> = (i..=j).map(|k| q.at(k)).collect();
            let span = values.iter().max().unwrap() - values.iter().min().unwrap() + 1;
            if span == values.len() && values.len() > 1 && values.len() < n {
                nontrivial = true;
            }
        }
    }
    let simple = n >= 2 && !nontrivial;
    let prefix_is = |k: usize, low: bool| {
        let values: BTreeSet<usize> = (1..=k).map(|i| q.at(i)).collect();
        let want: BTreeSet<usize> = if low { (1..=k).collect() } else { (n - k + 1..=n).collect() };
        values == want
    };
    let sum_indec = n > 0 && !(1..n).any(|k| prefix_is(k, true));
    let skew_indec = n > 0 && !(1..n).any(|k| prefix_is(k, false));
    (simple, sum_indec, skew_indec)
}

fn criterion_13() {
    let limits = Limits::default();
    let one = ClassSpec::geom(mat("1")).unwrap();
    assert_eq!(census(&one, 2, CensusFilter::Simple, &limits).unwrap(), perms(&["12"]));
    for n in 3..=6 {
        assert!(census(&one, n, CensusFilter::Simple, &limits).unwrap().is_empty());
    }
    let specs = [
        one,
        ClassSpec::geom(mat("1 1")).unwrap(),
        ClassSpec::geom(mat(X)).unwrap(),
        ClassSpec::grid(mat(X)).unwrap(),
        ClassSpec::geom(mat(FOUR_CELL)).unwrap(),
    ];
    let filters = [
        CensusFilter::Simple,
        CensusFilter::SumIndecomposable,
        CensusFilter::SkewIndecomposable,
        CensusFilter::All,
    ];
    for spec in &specs {
        for n in 1..=6 {
            let members = enumerate(spec, n, &limits).unwrap();
            for filter in filters {
                let out = census(spec, n, filter, &limits).unwrap();
                let expected: Vec<Permutation> = members
                    .iter()
                    .filter(|q| {
                        let (simple, sum, skew) = interval_oracle(q);
                        match filter {
                            CensusFilter::Simple => simple,
                            CensusFilter::SumIndecomposable => sum,
                            CensusFilter::SkewIndecomposable => skew,
                            CensusFilter::All => true,
                        }
                    })
                    .cloned()
                    .collect();
                assert_eq!(out, expected, "{spec:?} n={n} {filter:?}");
            }
        }
    }
}

fn main() {
    let criteria: [(usize, &str, fn()); 13] = [
        (1, "encoding with given signs", criterion_1),
        (2, "distinct words share a gridding", criterion_2),
        (3, "separation of Grid and Geom", criterion_3),
        (4, "basis recovery", criterion_4),
        (5, "forest matrices give equal classes", criterion_5),
        (6, "gridded generating functions", criterion_6),
        (7, "normal-form automaton against swap closure", criterion_7),
        (8, "refinement by 2 admits signs and preserves Geom", criterion_8),
        (9, "one-descent class counts", criterion_9),
        (10, "skew-merged class", criterion_10),
        (11, "acyclicity membership audit", criterion_11),
        (12, "atomic decomposition", criterion_12),
        (13, "census sanity", criterion_13),
    ];
    let mut failed = 0;
    for (i, name, check) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {i}: PASS ({name}, {secs:.2}s)"),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("criterion {i}: FAIL ({name}): {msg}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
