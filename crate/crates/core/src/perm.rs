//! Permutations in one-line notation, pattern involvement, intervals and
//! inflations, and griddings against a `0/±1` matrix.

use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{Cell, GridMatrix};

/// A permutation of `{1..n}` in one-line notation. The empty permutation is
/// allowed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n + 1];
        for &v in &values {
            if v == 0 || v > n || seen[v] {
                return Err(Error::InvalidPermutation(format!("{values:?}")));
            }
            seen[v] = true;
        }
        Ok(Permutation(values))
    }

    pub fn empty() -> Self {
        Permutation(Vec::new())
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    /// The permutation order-isomorphic to `seq`. Entries must be distinct.
    pub fn pattern_of<T: Ord>(seq: &[T]) -> Self {
        let mut idx: Vec<usize> = (0..seq.len()).collect();
        idx.sort_by(|&a, &b| seq[a].cmp(&seq[b]));
        let mut values = vec![0; seq.len()];
        for (rank, &i) in idx.iter().enumerate() {
            values[i] = rank + 1;
        }
        Permutation(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    /// `π(i)` for 1-based `i`.
    pub fn at(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation(inv)
    }

    /// Whether `self` involves `pattern`.
    pub fn involves(&self, pattern: &Permutation) -> bool {
        contains(pattern, self)
    }

    /// Removes the entry at 1-based position `i` and standardizes.
    pub fn delete_entry(&self, i: usize) -> Result<Permutation> {
        if i == 0 || i > self.len() {
            return Err(Error::OutOfRange {
                index: i,
                len: self.len(),
            });
        }
        let removed = self.0[i - 1];
        let values = self
            .0
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i - 1)
            .map(|(_, &v)| if v > removed { v - 1 } else { v })
            .collect();
        Ok(Permutation(values))
    }

    /// All distinct permutations obtained by deleting one entry.
    pub fn children(&self) -> Vec<Permutation> {
        let mut out: Vec<Permutation> = (1..=self.len())
            .map(|i| self.delete_entry(i).expect("in range"))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// All distinct permutations of length `n + 1` that contain `self`.
    pub fn one_point_extensions(&self) -> Vec<Permutation> {
        let n = self.len();
        let mut out = Vec::with_capacity((n + 1) * (n + 1));
        for pos in 0..=n {
            for val in 1..=n + 1 {
                let mut values: Vec<usize> = self
                    .0
                    .iter()
                    .map(|&v| if v >= val { v + 1 } else { v })
                    .collect();
                values.insert(pos, val);
                out.push(Permutation(values));
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Every `[a, b]` (1-based, inclusive) whose values form a contiguous
    /// set, trivial ones included, sorted by `(a, b)`.
    pub fn intervals(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            let (mut lo, mut hi) = (self.0[a], self.0[a]);
            for b in a..n {
                lo = lo.min(self.0[b]);
                hi = hi.max(self.0[b]);
                if hi - lo == b - a {
                    out.push((a + 1, b + 1));
                }
            }
        }
        out
    }

    /// Length at least 2 and only trivial intervals.
    pub fn is_simple(&self) -> bool {
        let n = self.len();
        n >= 2
            && self
                .intervals()
                .into_iter()
                .all(|(a, b)| a == b || (a == 1 && b == n))
    }

    /// Not of the form `α ⊕ β` with both parts nonempty.
    pub fn is_sum_indecomposable(&self) -> bool {
        let mut max = 0;
        for (i, &v) in self.0.iter().enumerate() {
            max = max.max(v);
            if max == i + 1 && i + 1 < self.len() {
                return false;
            }
        }
        true
    }

    /// Not of the form `α ⊖ β` with both parts nonempty.
    pub fn is_skew_indecomposable(&self) -> bool {
        let n = self.len();
        let mut min = usize::MAX;
        for (i, &v) in self.0.iter().enumerate() {
            min = min.min(v);
            if min == n - i && i + 1 < n {
                return false;
            }
        }
        true
    }

    /// The inflation `σ[α_1, …, α_m]`.
    pub fn inflate(&self, parts: &[Permutation]) -> Result<Permutation> {
        if parts.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: parts.len(),
            });
        }
        if parts.iter().any(Permutation::is_empty) {
            return Err(Error::EmptyPart);
        }
        // offset[v] = total size of the parts inflating values below v
        let mut size_by_value = vec![0; self.len() + 1];
        for (i, &v) in self.0.iter().enumerate() {
            size_by_value[v] = parts[i].len();
        }
        let mut offset = vec![0; self.len() + 1];
        for v in 2..=self.len() {
            offset[v] = offset[v - 1] + size_by_value[v - 1];
        }
        let values = self
            .0
            .iter()
            .zip(parts)
            .flat_map(|(&v, part)| {
                let shift = offset[v];
                part.0.iter().map(move |&x| x + shift)
            })
            .collect();
        Ok(Permutation(values))
    }

    pub fn direct_sum(&self, other: &Permutation) -> Permutation {
        let n = self.len();
        Permutation(self.0.iter().copied().chain(other.0.iter().map(|&v| v + n)).collect())
    }

    pub fn skew_sum(&self, other: &Permutation) -> Permutation {
        let m = other.len();
        Permutation(self.0.iter().map(|&v| v + m).chain(other.0.iter().copied()).collect())
    }

    /// All permutations of length `n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut cur: Vec<usize> = (1..=n).collect();
        let mut out = vec![Permutation(cur.clone())];
        while next_permutation(&mut cur) {
            out.push(Permutation(cur.clone()));
        }
        out
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).expect("successor");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// Whether `host` involves `pattern`, by backtracking over increasing index
/// embeddings.
pub fn contains(pattern: &Permutation, host: &Permutation) -> bool {
    let k = pattern.len();
    if k > host.len() {
        return false;
    }
    if k == 0 {
        return true;
    }
    // For pattern entry j, the earlier entries whose values are the nearest
    // below and above it; matching those two keeps the prefix order-isomorphic.
    let p = &pattern.0;
    let bounds: Vec<(Option<usize>, Option<usize>)> = (0..k)
        .map(|j| {
            let below = (0..j).filter(|&i| p[i] < p[j]).max_by_key(|&i| p[i]);
            let above = (0..j).filter(|&i| p[i] > p[j]).min_by_key(|&i| p[i]);
            (below, above)
        })
        .collect();
    let mut chosen = vec![0usize; k];
    embed(&host.0, &bounds, &mut chosen, 0, 0)
}

fn embed(
    host: &[usize],
    bounds: &[(Option<usize>, Option<usize>)],
    chosen: &mut [usize],
    j: usize,
    start: usize,
) -> bool {
    let k = bounds.len();
    if j == k {
        return true;
    }
    let (below, above) = bounds[j];
    for pos in start..=host.len() - (k - j) {
        let v = host[pos];
        if below.is_some_and(|i| host[chosen[i]] > v) || above.is_some_and(|i| host[chosen[i]] < v) {
            continue;
        }
        chosen[j] = pos;
        if embed(host, bounds, chosen, j + 1, pos + 1) {
            return true;
        }
    }
    false
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 9 {
            for v in &self.0 {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "ε")
        } else {
            write!(f, "{self}")
        }
    }
}

/// Serialized in the text form, e.g. `"2413"`.
impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(de::Error::custom)
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Contiguous digits (`2413`) or comma-separated integers. The empty
    /// string and `ε` give the empty permutation.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "ε" {
            return Ok(Permutation::empty());
        }
        let bad = || Error::InvalidPermutation(s.to_string());
        let values: Vec<usize> = if s.contains(',') {
            s.split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                .collect::<Result<_>>()?
        };
        Permutation::new(values)
    }
}

/// A permutation together with a gridding, stored as cut positions.
///
/// Column `k` holds positions `col_cuts[k-2]+1 ..= col_cuts[k-1]` (with
/// implicit cuts `0` and `n` at the ends); rows are cut by value in the same
/// way.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GriddedPermutation {
    perm: Permutation,
    col_cuts: Vec<usize>,
    row_cuts: Vec<usize>,
}

impl GriddedPermutation {
    pub fn new(perm: Permutation, col_cuts: Vec<usize>, row_cuts: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        for cuts in [&col_cuts, &row_cuts] {
            if cuts.windows(2).any(|w| w[0] > w[1]) || cuts.iter().any(|&c| c > n) {
                return Err(Error::InvalidGridding(format!("bad cuts {cuts:?} for length {n}")));
            }
        }
        Ok(GriddedPermutation {
            perm,
            col_cuts,
            row_cuts,
        })
    }

    /// Builds the gridding from per-column and per-row entry counts.
    pub fn from_counts(perm: Permutation, col_counts: &[usize], row_counts: &[usize]) -> Result<Self> {
        let cuts = |counts: &[usize]| -> Vec<usize> {
            counts[..counts.len().saturating_sub(1)]
                .iter()
                .scan(0, |acc, &c| {
                    *acc += c;
                    Some(*acc)
                })
                .collect()
        };
        if col_counts.iter().sum::<usize>() != perm.len() || row_counts.iter().sum::<usize>() != perm.len() {
            return Err(Error::InvalidGridding("counts do not sum to length".into()));
        }
        GriddedPermutation::new(perm, cuts(col_counts), cuts(row_counts))
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn col_cuts(&self) -> &[usize] {
        &self.col_cuts
    }

    pub fn row_cuts(&self) -> &[usize] {
        &self.row_cuts
    }

    /// Number of columns `t`.
    pub fn cols(&self) -> usize {
        self.col_cuts.len() + 1
    }

    /// Number of rows `u`.
    pub fn rows(&self) -> usize {
        self.row_cuts.len() + 1
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// Column of 1-based position `i`.
    pub fn col_of_position(&self, i: usize) -> usize {
        1 + self.col_cuts.iter().filter(|&&c| c < i).count()
    }

    /// Row of value `v`.
    pub fn row_of_value(&self, v: usize) -> usize {
        1 + self.row_cuts.iter().filter(|&&c| c < v).count()
    }

    /// Cell of the entry at 1-based position `i`.
    pub fn cell_of(&self, i: usize) -> Cell {
        (self.col_of_position(i), self.row_of_value(self.perm.at(i)))
    }

    fn counts(cuts: &[usize], n: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(cuts.len() + 1);
        let mut prev = 0;
        for &c in cuts.iter().chain(std::iter::once(&n)) {
            out.push(c - prev);
            prev = c;
        }
        out
    }

    pub fn col_counts(&self) -> Vec<usize> {
        Self::counts(&self.col_cuts, self.len())
    }

    pub fn row_counts(&self) -> Vec<usize> {
        Self::counts(&self.row_cuts, self.len())
    }

    /// Every entry lies in a nonzero cell of `m` and each cell is increasing
    /// or decreasing as `m` prescribes.
    pub fn is_compatible_with(&self, m: &GridMatrix) -> bool {
        if self.cols() != m.cols() || self.rows() != m.rows() {
            return false;
        }
        let mut last: Vec<Option<usize>> = vec![None; m.cols() * m.rows()];
        for i in 1..=self.len() {
            let (k, l) = self.cell_of(i);
            let v = self.perm.at(i);
            let sign = m.get(k, l);
            if sign == 0 {
                return false;
            }
            let slot = &mut last[(k - 1) * m.rows() + (l - 1)];
            if let Some(prev) = *slot {
                if (sign == 1) != (v > prev) {
                    return false;
                }
            }
            *slot = Some(v);
        }
        true
    }
}

fn fmt_cuts(cuts: &[usize]) -> String {
    cuts.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for GriddedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} | {} | {}",
            self.perm,
            fmt_cuts(&self.col_cuts),
            fmt_cuts(&self.row_cuts)
        )
    }
}

impl fmt::Debug for GriddedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} | {} | {}",
            self.perm,
            fmt_cuts(&self.col_cuts),
            fmt_cuts(&self.row_cuts)
        )
    }
}

impl FromStr for GriddedPermutation {
    type Err = Error;

    /// Parses `perm | colcuts | rowcuts`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split('|').map(str::trim).collect();
        let [perm, cols, rows] = parts[..] else {
            return Err(Error::InvalidGridding(s.to_string()));
        };
        let cuts = |t: &str| -> Result<Vec<usize>> {
            if t.is_empty() {
                return Ok(Vec::new());
            }
            t.split(',')
                .map(|c| c.trim().parse().map_err(|_| Error::InvalidGridding(s.to_string())))
                .collect()
        };
        GriddedPermutation::new(perm.parse()?, cuts(cols)?, cuts(rows)?)
    }
}

/// Weakly increasing sequences of length `len` with entries in `0..=max`, in
/// lexicographic order.
pub(crate) fn weak_sequences(len: usize, max: usize) -> Vec<Vec<usize>> {
    fn go(len: usize, max: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for c in from..=max {
            cur.push(c);
            go(len, max, c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(len, max, 0, &mut Vec::with_capacity(len), &mut out);
    out
}

/// Visits every gridding of `perm` compatible with `m` until `visit` breaks.
/// Visiting order is by row cuts, then column cuts.
pub fn for_each_gridding<B>(
    perm: &Permutation,
    m: &GridMatrix,
    mut visit: impl FnMut(GriddedPermutation) -> ControlFlow<B>,
) -> Option<B> {
    let n = perm.len();
    let t = m.cols();
    for row_cuts in weak_sequences(m.rows() - 1, n) {
        let row_of = |v: usize| 1 + row_cuts.iter().filter(|&&c| c < v).count();
        let rows: Vec<usize> = perm.values().iter().map(|&v| row_of(v)).collect();
        // column k spanning positions lo+1..=hi is valid for these row cuts
        let column_ok = |k: usize, lo: usize, hi: usize| -> bool {
            let mut last: Vec<Option<usize>> = vec![None; m.rows()];
            for (&l, &v) in rows[lo..hi].iter().zip(&perm.values()[lo..hi]) {
                let sign = m.get(k, l);
                if sign == 0 {
                    return false;
                }
                if let Some(prev) = last[l - 1] {
                    if (sign == 1) != (v > prev) {
                        return false;
                    }
                }
                last[l - 1] = Some(v);
            }
            true
        };
        let mut cuts = Vec::with_capacity(t);
        if let ControlFlow::Break(b) = column_search(1, 0, t, n, &column_ok, &mut cuts, &mut |cols| {
            visit(GriddedPermutation {
                perm: perm.clone(),
                col_cuts: cols.to_vec(),
                row_cuts: row_cuts.clone(),
            })
        }) {
            return Some(b);
        }
    }
    None
}

fn column_search<B>(
    k: usize,
    lo: usize,
    t: usize,
    n: usize,
    column_ok: &impl Fn(usize, usize, usize) -> bool,
    cuts: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    if k == t {
        if column_ok(k, lo, n) {
            return emit(cuts);
        }
        return ControlFlow::Continue(());
    }
    for hi in lo..=n {
        if !column_ok(k, lo, hi) {
            // extending the column further cannot repair it
            break;
        }
        cuts.push(hi);
        column_search(k + 1, hi, t, n, column_ok, cuts, emit)?;
        cuts.pop();
    }
    ControlFlow::Continue(())
}

/// Every gridding of `perm` compatible with `m`, ordered lexicographically by
/// `(column cuts, row cuts)`.
pub fn all_griddings(perm: &Permutation, m: &GridMatrix) -> Vec<GriddedPermutation> {
    let mut out = Vec::new();
    for_each_gridding::<()>(perm, m, |g| {
        out.push(g);
        ControlFlow::Continue(())
    });
    out.sort_by(|a, b| (&a.col_cuts, &a.row_cuts).cmp(&(&b.col_cuts, &b.row_cuts)));
    out
}
