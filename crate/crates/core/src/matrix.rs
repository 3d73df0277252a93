//! Matrices over `{0, 1, -1}` and `{0, •, 1, -1}`.
//!
//! Cells are addressed `(k, l)` with `k` the column counted from the left and
//! `l` the row counted from the bottom, both starting at 1. The text format
//! lists rows top-down, so the conversion between the two happens only in
//! [`GridMatrix::from_str`] and the `Display` impls.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A cell coordinate `(column, row)`, both 1-based.
pub type Cell = (usize, usize);

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridMatrix {
    cols: usize,
    rows: usize,
    // column-major: (k, l) lives at (k - 1) * rows + (l - 1)
    entries: Vec<i8>,
}

impl GridMatrix {
    pub fn zeros(cols: usize, rows: usize) -> Self {
        GridMatrix {
            cols,
            rows,
            entries: vec![0; cols * rows],
        }
    }

    /// Builds a matrix from a function of the cell coordinate.
    ///
    /// Panics if `f` returns anything outside `{-1, 0, 1}`.
    pub fn from_fn(cols: usize, rows: usize, mut f: impl FnMut(usize, usize) -> i8) -> Self {
        let mut m = GridMatrix::zeros(cols, rows);
        for k in 1..=cols {
            for l in 1..=rows {
                m.set(k, l, f(k, l));
            }
        }
        m
    }

    /// Builds a matrix from visual rows, top row first.
    pub fn from_rows(rows: &[Vec<i8>]) -> Result<Self> {
        let tokens: Vec<Vec<Entry>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| Entry::from_sign(v)).collect())
            .collect::<Result<_>>()?;
        let dotted = DottedMatrix::from_visual_rows(&tokens)?;
        dotted.sign_part_checked()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn get(&self, k: usize, l: usize) -> i8 {
        assert!(
            (1..=self.cols).contains(&k) && (1..=self.rows).contains(&l),
            "cell ({k},{l}) outside {}x{} matrix",
            self.cols,
            self.rows
        );
        self.entries[(k - 1) * self.rows + (l - 1)]
    }

    pub(crate) fn set(&mut self, k: usize, l: usize, v: i8) {
        assert!(matches!(v, -1..=1), "entry {v} not in {{-1,0,1}}");
        self.entries[(k - 1) * self.rows + (l - 1)] = v;
    }

    /// Nonzero cells in `(k, l)` lexicographic order.
    pub fn nonzero_cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for k in 1..=self.cols {
            for l in 1..=self.rows {
                if self.get(k, l) != 0 {
                    out.push((k, l));
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    /// The refinement `M^{×q}`: each `1` becomes a `q×q` identity block, each
    /// `-1` a negated anti-identity block and each `0` a zero block.
    pub fn refine(&self, q: usize) -> Result<GridMatrix> {
        if q == 0 {
            return Err(Error::ZeroRefinement);
        }
        let mut out = GridMatrix::zeros(self.cols * q, self.rows * q);
        for (k, l) in self.nonzero_cells() {
            let v = self.get(k, l);
            for s in 1..=q {
                let col = (k - 1) * q + s;
                let row = if v == 1 {
                    (l - 1) * q + s
                } else {
                    (l - 1) * q + q + 1 - s
                };
                out.set(col, row, v);
            }
        }
        Ok(out)
    }

    /// Column and row signs certifying a partial multiplication matrix.
    ///
    /// Among all valid assignments the lexicographically least one over
    /// `(c_1..c_t, r_1..r_u)` with `+1 < -1` is returned: each connected
    /// component of the row-column graph is seeded with `+1` at its first
    /// variable in that order and propagated.
    pub fn infer_signs(&self) -> Option<SignAssignment> {
        let (t, u) = (self.cols, self.rows);
        // variables 0..t are columns, t..t+u rows
        let mut sign = vec![0i8; t + u];
        for seed in 0..t + u {
            if sign[seed] != 0 {
                continue;
            }
            sign[seed] = 1;
            let mut stack = vec![seed];
            while let Some(v) = stack.pop() {
                let neighbours: Vec<(usize, i8)> = if v < t {
                    (1..=u)
                        .filter_map(|l| match self.get(v + 1, l) {
                            0 => None,
                            e => Some((t + l - 1, e)),
                        })
                        .collect()
                } else {
                    (1..=t)
                        .filter_map(|k| match self.get(k, v - t + 1) {
                            0 => None,
                            e => Some((k - 1, e)),
                        })
                        .collect()
                };
                for (w, e) in neighbours {
                    let want = e * sign[v];
                    if sign[w] == 0 {
                        sign[w] = want;
                        stack.push(w);
                    } else if sign[w] != want {
                        return None;
                    }
                }
            }
        }
        Some(SignAssignment {
            cols: sign[..t].to_vec(),
            rows: sign[t..].to_vec(),
        })
    }

    pub fn is_partial_multiplication(&self) -> bool {
        self.infer_signs().is_some()
    }

    pub fn cell_graph(&self) -> CellGraph {
        let vertices = self.nonzero_cells();
        let index = |c: Cell| vertices.binary_search(&c).expect("vertex");
        let mut edges = Vec::new();
        for k in 1..=self.cols {
            let column: Vec<Cell> = (1..=self.rows)
                .filter(|&l| self.get(k, l) != 0)
                .map(|l| (k, l))
                .collect();
            for pair in column.windows(2) {
                edges.push((index(pair[0]), index(pair[1])));
            }
        }
        for l in 1..=self.rows {
            let row: Vec<Cell> = (1..=self.cols)
                .filter(|&k| self.get(k, l) != 0)
                .map(|k| (k, l))
                .collect();
            for pair in row.windows(2) {
                edges.push((index(pair[0]), index(pair[1])));
            }
        }
        edges.sort_unstable();
        CellGraph { vertices, edges }
    }

    pub fn row_column_graph(&self) -> RowColumnGraph {
        RowColumnGraph {
            cols: self.cols,
            rows: self.rows,
            edges: self.nonzero_cells(),
        }
    }

    /// Whether the cell graph is a forest.
    ///
    /// Panics if the cell graph and the row-column graph disagree about
    /// acyclicity, which would indicate a bug in one of the graph builders.
    pub fn is_forest(&self) -> bool {
        let cell = self.cell_graph().is_acyclic();
        let row_col = self.row_column_graph().is_acyclic();
        assert_eq!(
            cell, row_col,
            "cell graph and row-column graph disagree on acyclicity for\n{self}"
        );
        cell
    }

    /// Block-diagonal sum with `self` in the lower-left and `other` in the
    /// upper-right block.
    pub fn direct_sum(&self, other: &GridMatrix) -> GridMatrix {
        let mut out = GridMatrix::zeros(self.cols + other.cols, self.rows + other.rows);
        for (k, l) in self.nonzero_cells() {
            out.set(k, l, self.get(k, l));
        }
        for (k, l) in other.nonzero_cells() {
            out.set(self.cols + k, self.rows + l, other.get(k, l));
        }
        out
    }

    pub fn transpose(&self) -> GridMatrix {
        GridMatrix::from_fn(self.rows, self.cols, |k, l| self.get(l, k))
    }
}

impl FromStr for GridMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let dotted: DottedMatrix = s.parse()?;
        dotted.sign_part_checked()
    }
}

impl fmt::Display for GridMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in (1..=self.rows).rev() {
            let line: Vec<String> = (1..=self.cols).map(|k| self.get(k, l).to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for GridMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (1..=self.rows)
            .rev()
            .map(|l| {
                (1..=self.cols)
                    .map(|k| self.get(k, l).to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        write!(f, "GridMatrix[{}]", rows.join(" / "))
    }
}

/// Column signs `c_k` and row signs `r_l`, each `+1` or `-1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignAssignment {
    cols: Vec<i8>,
    rows: Vec<i8>,
}

impl SignAssignment {
    pub fn new(cols: Vec<i8>, rows: Vec<i8>) -> Result<Self> {
        if cols.iter().chain(&rows).any(|&s| s != 1 && s != -1) {
            return Err(Error::BadSigns);
        }
        Ok(SignAssignment { cols, rows })
    }

    /// `c_k`, 1-based.
    pub fn col(&self, k: usize) -> i8 {
        self.cols[k - 1]
    }

    /// `r_l`, 1-based.
    pub fn row(&self, l: usize) -> i8 {
        self.rows[l - 1]
    }

    pub fn col_signs(&self) -> &[i8] {
        &self.cols
    }

    pub fn row_signs(&self) -> &[i8] {
        &self.rows
    }

    /// Every nonzero `M_{k,l}` equals `c_k * r_l`.
    pub fn certifies(&self, m: &GridMatrix) -> bool {
        self.cols.len() == m.cols()
            && self.rows.len() == m.rows()
            && m
                .nonzero_cells()
                .into_iter()
                .all(|(k, l)| m.get(k, l) == self.col(k) * self.row(l))
    }
}

fn fmt_signs(signs: &[i8]) -> String {
    signs
        .iter()
        .map(|&s| if s > 0 { "+1" } else { "-1" })
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for SignAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c={} r={}", fmt_signs(&self.cols), fmt_signs(&self.rows))
    }
}

impl FromStr for SignAssignment {
    type Err = Error;

    /// Parses `c=+1,-1 r=-1`.
    fn from_str(s: &str) -> Result<Self> {
        let mut cols = None;
        let mut rows = None;
        let parse_list = |v: &str| -> Result<Vec<i8>> {
            v.split(',')
                .map(|tok| match tok.trim() {
                    "+1" | "1" | "+" => Ok(1),
                    "-1" | "-" => Ok(-1),
                    other => Err(Error::BadToken(other.to_string())),
                })
                .collect()
        };
        for part in s.split_whitespace() {
            if let Some(v) = part.strip_prefix("c=") {
                cols = Some(parse_list(v)?);
            } else if let Some(v) = part.strip_prefix("r=") {
                rows = Some(parse_list(v)?);
            } else {
                return Err(Error::BadToken(part.to_string()));
            }
        }
        match (cols, rows) {
            (Some(c), Some(r)) => SignAssignment::new(c, r),
            _ => Err(Error::BadToken(s.to_string())),
        }
    }
}

/// Nonzero cells joined when they share a row or column with no nonzero
/// cell between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellGraph {
    pub vertices: Vec<Cell>,
    /// Pairs of indices into `vertices`, smaller index first.
    pub edges: Vec<(usize, usize)>,
}

impl CellGraph {
    pub fn is_acyclic(&self) -> bool {
        let mut uf = UnionFind::new(self.vertices.len());
        self.edges.iter().all(|&(a, b)| uf.union(a, b))
    }
}

/// Bipartite graph on columns `x_k` and rows `y_l`; `(k, l)` is an edge iff
/// `M_{k,l} != 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowColumnGraph {
    pub cols: usize,
    pub rows: usize,
    pub edges: Vec<Cell>,
}

impl RowColumnGraph {
    pub fn is_acyclic(&self) -> bool {
        let mut uf = UnionFind::new(self.cols + self.rows);
        self.edges
            .iter()
            .all(|&(k, l)| uf.union(k - 1, self.cols + l - 1))
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already connected.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// An entry of a dotted matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Entry {
    Zero,
    Dot,
    Inc,
    Dec,
}

impl Entry {
    fn from_sign(v: i8) -> Result<Entry> {
        match v {
            0 => Ok(Entry::Zero),
            1 => Ok(Entry::Inc),
            -1 => Ok(Entry::Dec),
            other => Err(Error::BadToken(other.to_string())),
        }
    }

    fn sign(self) -> i8 {
        match self {
            Entry::Inc => 1,
            Entry::Dec => -1,
            Entry::Zero | Entry::Dot => 0,
        }
    }

    fn token(self) -> &'static str {
        match self {
            Entry::Zero => "0",
            Entry::Dot => "d",
            Entry::Inc => "1",
            Entry::Dec => "-1",
        }
    }
}

impl FromStr for Entry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Entry> {
        match s {
            "0" => Ok(Entry::Zero),
            "1" => Ok(Entry::Inc),
            "-1" => Ok(Entry::Dec),
            "d" | "." => Ok(Entry::Dot),
            other => Err(Error::BadToken(other.to_string())),
        }
    }
}

/// A matrix over `{0, •, 1, -1}`. Dot isolation is checked separately by
/// [`DottedMatrix::is_dot_isolated`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DottedMatrix {
    cols: usize,
    rows: usize,
    entries: Vec<Entry>,
}

impl DottedMatrix {
    pub fn zeros(cols: usize, rows: usize) -> Self {
        DottedMatrix {
            cols,
            rows,
            entries: vec![Entry::Zero; cols * rows],
        }
    }

    fn from_visual_rows(lines: &[Vec<Entry>]) -> Result<Self> {
        let Some(first) = lines.first() else {
            return Err(Error::EmptyMatrix);
        };
        let cols = first.len();
        if cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        for (i, line) in lines.iter().enumerate() {
            if line.len() != cols {
                return Err(Error::RaggedRows {
                    row: i + 1,
                    found: line.len(),
                    expected: cols,
                });
            }
        }
        let rows = lines.len();
        let mut m = DottedMatrix::zeros(cols, rows);
        for (i, line) in lines.iter().enumerate() {
            let l = rows - i;
            for (j, &e) in line.iter().enumerate() {
                m.set(j + 1, l, e);
            }
        }
        if m.entries.iter().all(|&e| e == Entry::Zero) {
            return Err(Error::ZeroMatrix);
        }
        Ok(m)
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn get(&self, k: usize, l: usize) -> Entry {
        assert!((1..=self.cols).contains(&k) && (1..=self.rows).contains(&l));
        self.entries[(k - 1) * self.rows + (l - 1)]
    }

    pub fn set(&mut self, k: usize, l: usize, e: Entry) {
        assert!((1..=self.cols).contains(&k) && (1..=self.rows).contains(&l));
        self.entries[(k - 1) * self.rows + (l - 1)] = e;
    }

    pub fn dots(&self) -> Vec<Cell> {
        self.cells_where(|e| e == Entry::Dot)
    }

    pub fn nonzero_cells(&self) -> Vec<Cell> {
        self.cells_where(|e| e != Entry::Zero)
    }

    fn cells_where(&self, pred: impl Fn(Entry) -> bool) -> Vec<Cell> {
        let mut out = Vec::new();
        for k in 1..=self.cols {
            for l in 1..=self.rows {
                if pred(self.get(k, l)) {
                    out.push((k, l));
                }
            }
        }
        out
    }

    /// Every dot is the only nonzero entry in its column and in its row.
    pub fn is_dot_isolated(&self) -> bool {
        self.dots().into_iter().all(|(k, l)| {
            let col_alone = (1..=self.rows).all(|j| j == l || self.get(k, j) == Entry::Zero);
            let row_alone = (1..=self.cols).all(|i| i == k || self.get(i, l) == Entry::Zero);
            col_alone && row_alone
        })
    }

    /// The `0/±1` part with every dot replaced by `0`.
    pub fn sign_part(&self) -> GridMatrix {
        GridMatrix::from_fn(self.cols, self.rows, |k, l| self.get(k, l).sign())
    }

    fn sign_part_checked(&self) -> Result<GridMatrix> {
        if let Some(&(k, l)) = self.dots().first() {
            return Err(Error::BadToken(format!("dot at ({k},{l})")));
        }
        Ok(self.sign_part())
    }
}

impl From<&GridMatrix> for DottedMatrix {
    fn from(m: &GridMatrix) -> Self {
        let mut d = DottedMatrix::zeros(m.cols(), m.rows());
        for (k, l) in m.nonzero_cells() {
            d.set(k, l, Entry::from_sign(m.get(k, l)).expect("sign entry"));
        }
        d
    }
}

impl FromStr for DottedMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lines: Vec<Vec<Entry>> = s
            .lines()
            .map(str::trim)
            .filter(|line| !line.is_empty())
            .map(|line| line.split_whitespace().map(str::parse).collect())
            .collect::<Result<_>>()?;
        DottedMatrix::from_visual_rows(&lines)
    }
}

impl fmt::Display for DottedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in (1..=self.rows).rev() {
            let line: Vec<&str> = (1..=self.cols).map(|k| self.get(k, l).token()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for DottedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (1..=self.rows)
            .rev()
            .map(|l| {
                (1..=self.cols)
                    .map(|k| self.get(k, l).token())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        write!(f, "DottedMatrix[{}]", rows.join(" / "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> GridMatrix {
        s.parse().unwrap()
    }

    /// All matrices of the given size, including the zero matrix.
    fn all_matrices(cols: usize, rows: usize) -> Vec<GridMatrix> {
        let cells = cols * rows;
        (0..3usize.pow(cells as u32))
            .map(|mut code| {
                GridMatrix::from_fn(cols, rows, |_, _| {
                    let v = (code % 3) as i8 - 1;
                    code /= 3;
                    v
                })
            })
            .collect()
    }

    fn brute_signs(mat: &GridMatrix) -> Option<SignAssignment> {
        let n = mat.cols() + mat.rows();
        // bit set means -1; counting up in this order is lexicographic
        // with +1 < -1 when the first variable is the most significant bit
        (0..1u32 << n)
            .map(|code| {
                let sign = |i: usize| if code >> (n - 1 - i) & 1 == 1 { -1 } else { 1 };
                SignAssignment::new(
                    (0..mat.cols()).map(sign).collect(),
                    (mat.cols()..n).map(sign).collect(),
                )
                .unwrap()
            })
            .find(|s| s.certifies(mat))
    }

    #[test]
    fn parse_single_cell() {
        let a = m("1");
        assert_eq!((a.cols(), a.rows()), (1, 1));
        assert_eq!(a.get(1, 1), 1);
    }

    #[test]
    fn parse_x_matrix_bottom_up() {
        let x = m("-1 1\n1 -1");
        assert_eq!(x.get(1, 1), 1);
        assert_eq!(x.get(2, 1), -1);
        assert_eq!(x.get(1, 2), -1);
        assert_eq!(x.get(2, 2), 1);
    }

    #[test]
    fn parse_three_by_two() {
        let a = m("0 1 1\n1 -1 -1");
        assert_eq!((a.cols(), a.rows()), (3, 2));
        let expect = [
            ((1, 1), 1),
            ((2, 1), -1),
            ((3, 1), -1),
            ((1, 2), 0),
            ((2, 2), 1),
            ((3, 2), 1),
        ];
        for ((k, l), v) in expect {
            assert_eq!(a.get(k, l), v, "cell ({k},{l})");
        }
    }

    #[test]
    fn parse_errors() {
        assert_eq!("".parse::<GridMatrix>(), Err(Error::EmptyMatrix));
        assert_eq!("  \n \n".parse::<GridMatrix>(), Err(Error::EmptyMatrix));
        assert!(matches!(
            "1 0\n1".parse::<GridMatrix>(),
            Err(Error::RaggedRows { row: 2, .. })
        ));
        assert!(matches!("1 2".parse::<GridMatrix>(), Err(Error::BadToken(_))));
        assert!(matches!("1 x".parse::<GridMatrix>(), Err(Error::BadToken(_))));
        assert_eq!("0 0\n0 0".parse::<GridMatrix>(), Err(Error::ZeroMatrix));
        assert!(matches!("d 0".parse::<GridMatrix>(), Err(Error::BadToken(_))));
    }

    #[test]
    fn print_round_trip() {
        for s in ["1", "-1 1\n1 -1", "0 1 1\n1 -1 -1", "0 -1 1 0\n1 -1 0 1\n0 0 0 -1"] {
            let normalized: String = s.lines().map(|l| format!("{l}\n")).collect();
            assert_eq!(m(s).to_string(), normalized);
        }
        assert_eq!(m("  1   -1 \n\n0 1").to_string(), "1 -1\n0 1\n");
    }

    #[test]
    fn refine_examples() {
        let r = m("1").refine(2).unwrap();
        assert_eq!(r, GridMatrix::from_fn(2, 2, |k, l| (k == l) as i8));
        let r = m("-1").refine(2).unwrap();
        assert_eq!(r, GridMatrix::from_fn(2, 2, |k, l| -((k != l) as i8)));
        let x = m("-1 1\n1 -1");
        assert_eq!(x.refine(1).unwrap(), x);
        assert_eq!(x.refine(0), Err(Error::ZeroRefinement));
    }

    #[test]
    fn refinement_composes() {
        for (cols, rows) in [(1, 1), (1, 2), (2, 2), (2, 3)] {
            for mat in all_matrices(cols, rows) {
                for a in 1..=3 {
                    for b in 1..=3 {
                        let two_step = mat.refine(a).unwrap().refine(b).unwrap();
                        let one_step = mat.refine(a * b).unwrap();
                        assert_eq!(
                            two_step.nonzero_cells(),
                            one_step.nonzero_cells(),
                            "{mat:?} a={a} b={b}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn sign_examples() {
        let x = m("-1 1\n1 -1");
        let s = x.infer_signs().unwrap();
        assert_eq!(s.col_signs(), &[1, -1]);
        assert_eq!(s.row_signs(), &[1, -1]);

        let s = m("1 -1").infer_signs().unwrap();
        assert_eq!(s.col_signs(), &[1, -1]);
        assert_eq!(s.row_signs(), &[1]);

        // 2x2 all nonzero with odd number of -1 has no signs
        assert!(m("1 1\n1 -1").infer_signs().is_none());
    }

    #[test]
    fn signs_match_exhaustive_oracle() {
        for (cols, rows) in [(1, 1), (2, 1), (1, 3), (2, 2), (3, 2), (2, 3)] {
            for mat in all_matrices(cols, rows) {
                assert_eq!(mat.infer_signs(), brute_signs(&mat), "{mat:?}");
            }
        }
    }

    #[test]
    fn refinement_by_two_has_parity_signs() {
        for mat in all_matrices(3, 3).into_iter().step_by(7) {
            let r = mat.refine(2).unwrap();
            let parity = |n: usize| (1..=n).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
            let s = SignAssignment::new(parity(r.cols()), parity(r.rows())).unwrap();
            assert!(s.certifies(&r), "{mat:?}");
            assert!(r.infer_signs().is_some());
        }
    }

    #[test]
    fn graphs_of_four_by_three_matrix() {
        let a = m("0 -1 1 0\n1 -1 0 1\n0 0 0 -1");
        let rc = a.row_column_graph();
        let mut edges = rc.edges.clone();
        edges.sort();
        assert_eq!(edges, vec![(1, 2), (2, 2), (2, 3), (3, 3), (4, 1), (4, 2)]);
        assert!(rc.is_acyclic());
        let cg = a.cell_graph();
        assert_eq!(cg.vertices.len(), 6);
        assert_eq!(cg.edges.len(), 5);
        assert!(a.is_forest());
    }

    #[test]
    fn graphs_of_small_matrices() {
        let one = m("1");
        assert_eq!(one.cell_graph().vertices, vec![(1, 1)]);
        assert!(one.cell_graph().edges.is_empty());
        assert!(one.is_forest());

        let x = m("-1 1\n1 -1");
        let cg = x.cell_graph();
        assert_eq!(cg.vertices.len(), 4);
        assert_eq!(cg.edges.len(), 4);
        let mut degree = [0; 4];
        for &(a, b) in &cg.edges {
            degree[a] += 1;
            degree[b] += 1;
        }
        assert_eq!(degree, [2; 4]);
        assert!(!x.is_forest());
    }

    #[test]
    fn cell_graph_skips_blocked_pairs() {
        // three cells in one row: the outer two are not adjacent
        let row = m("1 1 1");
        assert_eq!(row.cell_graph().edges, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn forest_tests_agree_exhaustively() {
        for (cols, rows) in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1), (2, 3), (3, 2), (3, 3)] {
            for mat in all_matrices(cols, rows) {
                // is_forest panics on disagreement
                mat.is_forest();
            }
        }
    }

    #[test]
    fn direct_sums() {
        assert_eq!(m("1").direct_sum(&m("1")), m("0 1\n1 0"));
        let s = m("1").direct_sum(&m("-1"));
        assert_eq!((s.get(1, 1), s.get(2, 2), s.get(1, 2), s.get(2, 1)), (1, -1, 0, 0));
        let x = m("-1 1\n1 -1");
        assert_eq!(x.direct_sum(&m("1")), m("0 0 1\n-1 1 0\n1 -1 0"));
    }

    #[test]
    fn dot_isolation() {
        let d: DottedMatrix = "d".parse().unwrap();
        assert!(d.is_dot_isolated());
        let d: DottedMatrix = "d 1".parse().unwrap();
        assert!(!d.is_dot_isolated());
        let d: DottedMatrix = "d 0\n0 1".parse().unwrap();
        assert_eq!(d.get(1, 2), Entry::Dot);
        assert!(d.is_dot_isolated());
        let d: DottedMatrix = ". 0\n0 .".parse().unwrap();
        assert!(d.is_dot_isolated());
        assert_eq!(d.to_string(), "d 0\n0 d\n");
        assert_eq!(d.sign_part(), GridMatrix::zeros(2, 2));
    }

    #[test]
    fn signs_text_round_trip() {
        let s = SignAssignment::new(vec![-1, 1, 1], vec![-1, 1]).unwrap();
        assert_eq!(s.to_string(), "c=-1,+1,+1 r=-1,+1");
        assert_eq!(s.to_string().parse::<SignAssignment>().unwrap(), s);
        assert!("c=+1,2 r=+1".parse::<SignAssignment>().is_err());
    }
}
