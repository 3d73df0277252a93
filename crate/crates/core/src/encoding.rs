//! The cell alphabet of a partial multiplication matrix and the encoding of
//! words as (gridded) permutations.
//!
//! A letter `a_{k,l}` places a point on the diagonal of cell `(k, l)`. The
//! `i`-th letter of a word sits at distance `i` from the cell's base point,
//! which is the left or right edge of the column according to `c_k` and the
//! bottom or top edge of the row according to `r_l`. Ordering the points by
//! `(column, c_k * i)` left to right and by `(row, r_l * i)` bottom to top
//! gives the permutation.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::{Cell, GridMatrix, SignAssignment};
use crate::perm::{GriddedPermutation, Permutation};

/// Index into a [`CellAlphabet`]. Letters compare in `(k, l)` order of their
/// cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(pub usize);

pub type Word = Vec<Letter>;

/// Sort key of a point along one axis: the band (column or row) it lies in,
/// then its signed distance inside the band.
pub(crate) type AxisKey = (usize, i64);

#[derive(Clone, PartialEq, Eq)]
pub struct CellAlphabet {
    matrix: GridMatrix,
    signs: SignAssignment,
    cells: Vec<Cell>,
}

impl CellAlphabet {
    /// The alphabet of a partial multiplication matrix, using the
    /// lexicographically least sign assignment.
    pub fn new(m: &GridMatrix) -> Result<Self> {
        let signs = m.infer_signs().ok_or(Error::NotPartialMultiplication)?;
        CellAlphabet::with_signs(m, signs)
    }

    pub fn with_signs(m: &GridMatrix, signs: SignAssignment) -> Result<Self> {
        if !signs.certifies(m) {
            return Err(Error::BadSigns);
        }
        Ok(CellAlphabet {
            matrix: m.clone(),
            signs,
            cells: m.nonzero_cells(),
        })
    }

    /// The alphabet of `m` if it is a partial multiplication matrix,
    /// otherwise of its refinement `M^{×2}`. Both have the same geometric
    /// grid class.
    pub fn for_class(m: &GridMatrix) -> Self {
        CellAlphabet::new(m).unwrap_or_else(|_| {
            let refined = m.refine(2).expect("q = 2");
            CellAlphabet::new(&refined).expect("refinement by 2 admits signs")
        })
    }

    pub fn matrix(&self) -> &GridMatrix {
        &self.matrix
    }

    pub fn signs(&self) -> &SignAssignment {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.cells.len()).map(Letter)
    }

    pub fn cell(&self, a: Letter) -> Cell {
        self.cells[a.0]
    }

    pub fn letter(&self, cell: Cell) -> Option<Letter> {
        self.cells.binary_search(&cell).ok().map(Letter)
    }

    /// Letters in cells sharing neither a row nor a column commute.
    pub fn independent(&self, a: Letter, b: Letter) -> bool {
        let (ka, la) = self.cell(a);
        let (kb, lb) = self.cell(b);
        ka != kb && la != lb
    }

    pub fn label(&self, a: Letter) -> String {
        let (k, l) = self.cell(a);
        format!("{k},{l}")
    }

    pub fn labels(&self) -> Vec<String> {
        self.letters().map(|a| self.label(a)).collect()
    }

    pub fn check_word(&self, w: &[Letter]) -> Result<()> {
        match w.iter().find(|a| a.0 >= self.len()) {
            Some(a) => Err(Error::UnknownLetter(format!("#{}", a.0))),
            None => Ok(()),
        }
    }

    /// Parses space-separated `k,l` tokens.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        s.split_whitespace()
            .map(|tok| {
                let (k, l) = tok.split_once(',').ok_or_else(|| Error::BadWord(tok.to_string()))?;
                let parse = |x: &str| x.trim().parse::<usize>().map_err(|_| Error::BadWord(tok.to_string()));
                let cell = (parse(k)?, parse(l)?);
                self.letter(cell).ok_or_else(|| Error::UnknownLetter(tok.to_string()))
            })
            .collect()
    }

    pub fn format_word(&self, w: &[Letter]) -> String {
        w.iter().map(|&a| self.label(a)).collect::<Vec<_>>().join(" ")
    }

    /// Sort keys of a letter placed at signed distance rank `d`.
    pub(crate) fn keys(&self, a: Letter, d: i64) -> (AxisKey, AxisKey) {
        let (k, l) = self.cell(a);
        (
            (k, i64::from(self.signs.col(k)) * d),
            (l, i64::from(self.signs.row(l)) * d),
        )
    }

    pub fn phi(&self, w: &[Letter]) -> Result<Permutation> {
        Ok(self.phi_sharp(w)?.perm().clone())
    }

    /// `phi` with explicit distances; `d` must be strictly increasing and as
    /// long as `w`.
    pub fn phi_with_distances(&self, w: &[Letter], d: &[i64]) -> Result<Permutation> {
        self.check_word(w)?;
        assert_eq!(w.len(), d.len(), "one distance per letter");
        assert!(d.windows(2).all(|p| p[0] < p[1]), "distances must increase");
        let points: Vec<_> = w.iter().zip(d).map(|(&a, &di)| self.keys(a, di)).collect();
        Ok(place_points(&points))
    }

    pub fn phi_sharp(&self, w: &[Letter]) -> Result<GriddedPermutation> {
        self.check_word(w)?;
        let points: Vec<_> = w
            .iter()
            .enumerate()
            .map(|(i, &a)| self.keys(a, i as i64 + 1))
            .collect();
        let perm = place_points(&points);
        let mut col_counts = vec![0; self.matrix.cols()];
        let mut row_counts = vec![0; self.matrix.rows()];
        for &a in w {
            let (k, l) = self.cell(a);
            col_counts[k - 1] += 1;
            row_counts[l - 1] += 1;
        }
        GriddedPermutation::from_counts(perm, &col_counts, &row_counts)
    }
}

impl fmt::Debug for CellAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CellAlphabet")
            .field("matrix", &self.matrix)
            .field("signs", &self.signs.to_string())
            .finish()
    }
}

/// The permutation formed by points with the given horizontal and vertical
/// sort keys. Keys along each axis must be distinct.
pub(crate) fn place_points(points: &[(AxisKey, AxisKey)]) -> Permutation {
    let mut by_x: Vec<usize> = (0..points.len()).collect();
    by_x.sort_by_key(|&i| points[i].0);
    let ys: Vec<AxisKey> = by_x.iter().map(|&i| points[i].1).collect();
    Permutation::pattern_of(&ys)
}
