//! Monotone and geometric grid classes: membership, enumeration, minimal
//! griddings, bases and censuses.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::ops::ControlFlow;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automata::RationalFunction;
use crate::encoding::{CellAlphabet, Letter, Word};
use crate::error::{Error, Result};
use crate::matrix::GridMatrix;
use crate::perm::{all_griddings, contains, for_each_gridding, GriddedPermutation, Permutation};
use crate::trace::{extend_normal_forms, normal_form_automaton, normal_forms, step, LetterSet};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassKind {
    /// `Geom(M)`
    Geom,
    /// `Grid(M)`
    Grid,
}

/// `Geom(M)` or `Grid(M)`, optionally intersected with `Av(B)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClassSpec {
    kind: ClassKind,
    matrix: GridMatrix,
    avoid: Vec<Permutation>,
}

impl ClassSpec {
    /// Keeps only the minimal elements of `avoid`.
    pub fn new(kind: ClassKind, matrix: GridMatrix, avoid: Vec<Permutation>) -> Result<Self> {
        if matrix.is_zero() {
            return Err(Error::ZeroMatrix);
        }
        let mut avoid: Vec<Permutation> = avoid.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        avoid.sort_by_key(Permutation::len);
        let mut kept: Vec<Permutation> = Vec::new();
        for b in avoid {
            if !kept.iter().any(|k| contains(k, &b)) {
                kept.push(b);
            }
        }
        kept.sort();
        Ok(ClassSpec {
            kind,
            matrix,
            avoid: kept,
        })
    }

    pub fn geom(matrix: GridMatrix) -> Result<Self> {
        ClassSpec::new(ClassKind::Geom, matrix, Vec::new())
    }

    pub fn grid(matrix: GridMatrix) -> Result<Self> {
        ClassSpec::new(ClassKind::Grid, matrix, Vec::new())
    }

    pub fn kind(&self) -> ClassKind {
        self.kind
    }

    pub fn matrix(&self) -> &GridMatrix {
        &self.matrix
    }

    pub fn avoid(&self) -> &[Permutation] {
        &self.avoid
    }

    fn avoids_all(&self, p: &Permutation) -> bool {
        self.avoid.iter().all(|b| !contains(b, p))
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        let member = match self.kind {
            ClassKind::Geom => member_geom(p, &self.matrix),
            ClassKind::Grid => member_grid(p, &self.matrix),
        };
        member && self.avoids_all(p)
    }
}

/// Size limits for enumeration.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Limits {
    /// Longest permutations [`enumerate`] will produce.
    pub max_len: usize,
    /// Longest permutations for which `Grid` classes are found by testing
    /// all `n!` permutations; longer ones are assembled cell by cell.
    pub grid_filter_len: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_len: 10,
            grid_filter_len: 8,
        }
    }
}

/// A word `w` with `phi_sharp(w) = g`, if one exists.
///
/// Inside a column the distances of the points must increase away from the
/// base edge, and likewise inside a row. These constraints form a digraph on
/// the points; any topological order is an encoding word, and a cycle rules
/// one out.
pub fn encoding_word(g: &GriddedPermutation, alpha: &CellAlphabet) -> Option<Word> {
    let m = alpha.matrix();
    if !g.is_compatible_with(m) {
        return None;
    }
    let n = g.len();
    let inverse = g.perm().inverse();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut indegree = vec![0usize; n];
    let mut chain = |pts: Vec<usize>, sign: i8| {
        let mut add = |a: usize, b: usize| {
            succ[a].push(b);
            indegree[b] += 1;
        };
        for w in pts.windows(2) {
            if sign == 1 {
                add(w[0], w[1]);
            } else {
                add(w[1], w[0]);
            }
        }
    };
    // points are 0-based positions
    let mut start = 0;
    for (k, count) in g.col_counts().into_iter().enumerate() {
        chain((start..start + count).collect(), alpha.signs().col(k + 1));
        start += count;
    }
    let mut low = 0;
    for (l, count) in g.row_counts().into_iter().enumerate() {
        let pts = (low + 1..=low + count).map(|v| inverse.at(v) - 1).collect();
        chain(pts, alpha.signs().row(l + 1));
        low += count;
    }
    let mut ready: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut word = Vec::with_capacity(n);
    while let Some(i) = ready.pop() {
        let letter = alpha.letter(g.cell_of(i + 1)).expect("compatible cells are letters");
        word.push(letter);
        for &j in &succ[i] {
            indegree[j] -= 1;
            if indegree[j] == 0 {
                ready.push(j);
            }
        }
    }
    (word.len() == n).then_some(word)
}

/// Whether `g` lies in the gridded geometric class of the alphabet's matrix.
pub fn member_gridded_geom(g: &GriddedPermutation, alpha: &CellAlphabet) -> bool {
    encoding_word(g, alpha).is_some()
}

pub fn member_grid(p: &Permutation, m: &GridMatrix) -> bool {
    for_each_gridding(p, m, |_| ControlFlow::Break(())).is_some()
}

/// Tests griddings against `m`, or against `M^{×2}` if `m` is not a partial
/// multiplication matrix.
pub fn member_geom(p: &Permutation, m: &GridMatrix) -> bool {
    geom_gridding(p, &CellAlphabet::for_class(m)).is_some()
}

fn geom_gridding(p: &Permutation, alpha: &CellAlphabet) -> Option<GriddedPermutation> {
    for_each_gridding(p, alpha.matrix(), |g| {
        if member_gridded_geom(&g, alpha) {
            ControlFlow::Break(g)
        } else {
            ControlFlow::Continue(())
        }
    })
}

/// The members of length `n`, sorted.
pub fn enumerate(spec: &ClassSpec, n: usize, limits: &Limits) -> Result<Vec<Permutation>> {
    if n > limits.max_len {
        return Err(Error::BoundExceeded {
            requested: n,
            bound: limits.max_len,
        });
    }
    let members = match spec.kind {
        ClassKind::Geom => enumerate_geom(&CellAlphabet::for_class(&spec.matrix), n),
        ClassKind::Grid if n <= limits.grid_filter_len => filter_grid(&spec.matrix, n),
        ClassKind::Grid => assemble_grid(&spec.matrix, n),
    };
    Ok(members.into_iter().filter(|p| spec.avoids_all(p)).collect())
}

/// Images of the normal forms of length `n`.
pub(crate) fn enumerate_geom(alpha: &CellAlphabet, n: usize) -> BTreeSet<Permutation> {
    normal_form_images(alpha, n, |w| alpha.phi(w).expect("letters of the alphabet"))
}

/// Distinct values of `image` over the normal forms of length `n`. The
/// search is split on short prefixes whose branches run in parallel.
pub(crate) fn normal_form_images(
    alpha: &CellAlphabet,
    n: usize,
    image: impl Fn(&[Letter]) -> Permutation + Sync,
) -> BTreeSet<Permutation> {
    let prefixes = normal_forms(alpha, n.min(2));
    prefixes
        .par_iter()
        .map(|prefix| {
            let mut s = LetterSet::new(alpha.len());
            for &c in prefix {
                s = step(alpha, &s, c).expect("prefix is a normal form");
            }
            let mut found = HashSet::new();
            let mut word = prefix.clone();
            extend_normal_forms(alpha, &s, n, &mut word, &mut |w| {
                found.insert(image(w));
            });
            found
        })
        .reduce(HashSet::new, |mut a, b| {
            a.extend(b);
            a
        })
        .into_iter()
        .collect()
}

pub(crate) fn filter_grid(m: &GridMatrix, n: usize) -> BTreeSet<Permutation> {
    Permutation::all(n)
        .into_par_iter()
        .filter(|p| member_grid(p, m))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

/// Builds every gridded permutation of length `n` from cell occupancies:
/// each column interleaves its cells' entries by position and each row
/// interleaves them by value, and the cell's sign then pairs them up.
pub(crate) fn assemble_grid(m: &GridMatrix, n: usize) -> BTreeSet<Permutation> {
    let cells = m.nonzero_cells();
    let mut occupancies = Vec::new();
    compositions(n, cells.len(), &mut Vec::new(), &mut occupancies);
    occupancies
        .par_iter()
        .map(|occ| assemble_occupancy(m, &cells, occ))
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        })
}

fn compositions(n: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() + 1 == parts {
        cur.push(n);
        out.push(cur.clone());
        cur.pop();
        return;
    }
    for c in 0..=n {
        cur.push(c);
        compositions(n - c, parts, cur, out);
        cur.pop();
    }
}

/// Distinct orderings of a multiset given as counts per label.
fn multiset_orders(counts: &[(usize, usize)]) -> Vec<Vec<usize>> {
    fn go(left: &mut Vec<(usize, usize)>, cur: &mut Vec<usize>, total: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == total {
            out.push(cur.clone());
            return;
        }
        for i in 0..left.len() {
            if left[i].1 > 0 {
                left[i].1 -= 1;
                cur.push(left[i].0);
                go(left, cur, total, out);
                cur.pop();
                left[i].1 += 1;
            }
        }
    }
    let total = counts.iter().map(|c| c.1).sum();
    let mut out = Vec::new();
    go(&mut counts.to_vec(), &mut Vec::new(), total, &mut out);
    out
}

fn assemble_occupancy(m: &GridMatrix, cells: &[(usize, usize)], occ: &[usize]) -> BTreeSet<Permutation> {
    let (t, u) = (m.cols(), m.rows());
    let count = |k: usize, l: usize| cells.iter().position(|&c| c == (k, l)).map_or(0, |i| occ[i]);
    // per column: orders of row labels; per row: orders of column labels
    let axis_orders: Vec<Vec<Vec<usize>>> = (1..=t)
        .map(|k| multiset_orders(&(1..=u).map(|l| (l, count(k, l))).collect::<Vec<_>>()))
        .chain((1..=u).map(|l| multiset_orders(&(1..=t).map(|k| (k, count(k, l))).collect::<Vec<_>>())))
        .collect();
    let n: usize = occ.iter().sum();
    let mut out = BTreeSet::new();
    let mut choice = vec![0usize; axis_orders.len()];
    loop {
        // positions and values of each cell's entries, in increasing order
        let mut positions: Vec<Vec<usize>> = vec![Vec::new(); t * u];
        let mut values: Vec<Vec<usize>> = vec![Vec::new(); t * u];
        let mut pos = 0;
        for k in 1..=t {
            for &l in &axis_orders[k - 1][choice[k - 1]] {
                pos += 1;
                positions[(k - 1) * u + l - 1].push(pos);
            }
        }
        let mut val = 0;
        for l in 1..=u {
            for &k in &axis_orders[t + l - 1][choice[t + l - 1]] {
                val += 1;
                values[(k - 1) * u + l - 1].push(val);
            }
        }
        let mut perm = vec![0; n];
        for &(k, l) in cells {
            let idx = (k - 1) * u + l - 1;
            let vs = &values[idx];
            for (i, &p) in positions[idx].iter().enumerate() {
                perm[p - 1] = if m.get(k, l) == 1 { vs[i] } else { vs[vs.len() - 1 - i] };
            }
        }
        out.insert(Permutation::new(perm).expect("assembled entries are distinct"));
        // advance the odometer
        let mut i = 0;
        loop {
            if i == choice.len() {
                return out;
            }
            choice[i] += 1;
            if choice[i] < axis_orders[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Where two griddings first differ: a column, or failing that a row.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Witness {
    Column(usize),
    Row(usize),
}

/// Outcome of comparing two griddings of the same permutation in the
/// gridding order.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GriddingOrderWitness {
    Equal,
    Less(Witness),
    Greater(Witness),
}

impl GriddingOrderWitness {
    pub fn ordering(self) -> Ordering {
        match self {
            GriddingOrderWitness::Equal => Ordering::Equal,
            GriddingOrderWitness::Less(_) => Ordering::Less,
            GriddingOrderWitness::Greater(_) => Ordering::Greater,
        }
    }
}

impl fmt::Display for GriddingOrderWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = |w: &Witness| match w {
            Witness::Column(k) => format!("column {k}"),
            Witness::Row(l) => format!("row {l}"),
        };
        match self {
            GriddingOrderWitness::Equal => write!(f, "equal"),
            GriddingOrderWitness::Less(x) => write!(f, "less ({})", w(x)),
            GriddingOrderWitness::Greater(x) => write!(f, "greater ({})", w(x)),
        }
    }
}

/// The gridding order: more entries in an earlier column is smaller, and
/// columns being equal, more entries in a lower row is smaller.
pub fn compare_griddings(g: &GriddedPermutation, h: &GriddedPermutation) -> GriddingOrderWitness {
    let axes = [
        (g.col_counts(), h.col_counts(), Witness::Column as fn(usize) -> Witness),
        (g.row_counts(), h.row_counts(), Witness::Row as fn(usize) -> Witness),
    ];
    for (a, b, witness) in axes {
        if let Some(i) = (0..a.len().min(b.len())).find(|&i| a[i] != b[i]) {
            return if a[i] > b[i] {
                GriddingOrderWitness::Less(witness(i + 1))
            } else {
                GriddingOrderWitness::Greater(witness(i + 1))
            };
        }
    }
    GriddingOrderWitness::Equal
}

/// The least geometric gridding of `p` over a partial multiplication
/// matrix, found by checking every gridding.
pub fn min_gridding(p: &Permutation, m: &GridMatrix) -> Result<GriddedPermutation> {
    let alpha = CellAlphabet::new(m)?;
    all_griddings(p, m)
        .into_iter()
        .filter(|g| member_gridded_geom(g, &alpha))
        .min_by(|g, h| compare_griddings(g, h).ordering())
        .ok_or_else(|| Error::NotInClass(p.to_string()))
}

/// Generating function of the gridded class, one term per trace.
pub fn gridded_gf(m: &GridMatrix) -> Result<RationalFunction> {
    normal_form_automaton(&CellAlphabet::new(m)?).generating_function()
}

pub fn gridded_count(m: &GridMatrix, n: usize) -> Result<BigUint> {
    Ok(normal_form_automaton(&CellAlphabet::new(m)?).count_words(n))
}

/// Basis elements up to some length. Completeness is never certified.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Basis {
    pub elements: Vec<Permutation>,
    pub max_len: usize,
    /// Always `false`: longer basis elements may exist.
    pub complete: bool,
}

/// All minimal non-members of length at most `max_len`. Each one is a
/// one-point extension of a member one shorter.
pub fn basis(spec: &ClassSpec, max_len: usize, limits: &Limits) -> Result<Basis> {
    if max_len > limits.max_len {
        return Err(Error::BoundExceeded {
            requested: max_len,
            bound: limits.max_len,
        });
    }
    let mut elements = Vec::new();
    let mut prev: BTreeSet<Permutation> = enumerate(spec, 0, limits)?.into_iter().collect();
    for k in 1..=max_len {
        let current: BTreeSet<Permutation> = enumerate(spec, k, limits)?.into_iter().collect();
        let candidates: BTreeSet<Permutation> = prev.iter().flat_map(|p| p.one_point_extensions()).collect();
        for c in candidates {
            if !current.contains(&c) && c.children().iter().all(|d| prev.contains(d)) {
                elements.push(c);
            }
        }
        prev = current;
    }
    elements.sort();
    Ok(Basis {
        elements,
        max_len,
        complete: false,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CensusFilter {
    Simple,
    SumIndecomposable,
    SkewIndecomposable,
    All,
}

impl CensusFilter {
    pub fn accepts(self, p: &Permutation) -> bool {
        match self {
            CensusFilter::Simple => p.is_simple(),
            CensusFilter::SumIndecomposable => p.is_sum_indecomposable(),
            CensusFilter::SkewIndecomposable => p.is_skew_indecomposable(),
            CensusFilter::All => true,
        }
    }
}

pub fn census(spec: &ClassSpec, n: usize, filter: CensusFilter, limits: &Limits) -> Result<Vec<Permutation>> {
    Ok(enumerate(spec, n, limits)?
        .into_iter()
        .filter(|p| filter.accepts(p))
        .collect())
}

/// Whether `Grid(M)` and `Geom(M)` agree at every length up to `n`.
pub fn verify_forest_equality(m: &GridMatrix, n: usize, limits: &Limits) -> Result<bool> {
    let grid = ClassSpec::grid(m.clone())?;
    let geom = ClassSpec::geom(m.clone())?;
    for k in 0..=n {
        if enumerate(&grid, k, limits)? != enumerate(&geom, k, limits)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Counts per length as a map, for JSON output.
pub fn counts_by_length(spec: &ClassSpec, max_len: usize, limits: &Limits) -> Result<BTreeMap<usize, usize>> {
    (0..=max_len).map(|n| Ok((n, enumerate(spec, n, limits)?.len()))).collect()
}
