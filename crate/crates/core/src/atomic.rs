//! Classes of dotted matrices, where a dot cell holds at most one point, and
//! the splitting of a subword-closed language's image into such classes.

use std::collections::BTreeSet;

use crate::automata::subword_avoider;
pub use crate::automata::PathTerm;
use crate::encoding::{place_points, AxisKey, CellAlphabet, Letter, Word};
use crate::error::{Error, Result};
use crate::gridclass::normal_form_images;
use crate::matrix::{Cell, DottedMatrix, Entry, GridMatrix};
use crate::perm::{contains, Permutation};

/// The cell alphabet of a dotted matrix's `±1` part together with its dot
/// cells. If the `±1` part admits no signs it is refined by 2, and each dot
/// moves to the lower left subcell of its block.
#[derive(Clone, Debug)]
pub struct DottedAlphabet {
    alpha: CellAlphabet,
    dots: Vec<Cell>,
}

impl DottedAlphabet {
    pub fn new(d: &DottedMatrix) -> Result<Self> {
        if !d.is_dot_isolated() {
            return Err(Error::NotDotIsolated);
        }
        let signs = d.sign_part();
        Ok(match CellAlphabet::new(&signs) {
            Ok(alpha) => DottedAlphabet { alpha, dots: d.dots() },
            Err(_) => DottedAlphabet {
                alpha: CellAlphabet::new(&signs.refine(2)?)?,
                dots: d.dots().into_iter().map(|(k, l)| (2 * k - 1, 2 * l - 1)).collect(),
            },
        })
    }

    pub fn alphabet(&self) -> &CellAlphabet {
        &self.alpha
    }

    pub fn dots(&self) -> &[Cell] {
        &self.dots
    }

    /// The permutation of the word `w` plus one point for each chosen dot.
    /// A dot is alone in its column and row, so its place in the word does
    /// not matter.
    pub fn image(&self, w: &[Letter], dots: &[Cell]) -> Permutation {
        let mut points: Vec<(AxisKey, AxisKey)> = w
            .iter()
            .enumerate()
            .map(|(i, &a)| self.alpha.keys(a, i as i64 + 1))
            .collect();
        points.extend(dots.iter().map(|&(k, l)| ((k, 0), (l, 0))));
        place_points(&points)
    }

    /// Members of length `n`, sorted.
    pub fn enumerate(&self, n: usize) -> Vec<Permutation> {
        let mut out = BTreeSet::new();
        for chosen in subsets(&self.dots) {
            if chosen.len() > n {
                continue;
            }
            out.extend(normal_form_images(&self.alpha, n - chosen.len(), |w| {
                self.image(w, &chosen)
            }));
        }
        out.into_iter().collect()
    }
}

fn subsets(items: &[Cell]) -> Vec<Vec<Cell>> {
    (0..1usize << items.len())
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &c)| c)
                .collect()
        })
        .collect()
}

/// Members of length `n` of the class of a dot-isolated matrix.
pub fn enumerate_geom_dotted(d: &DottedMatrix, n: usize) -> Result<Vec<Permutation>> {
    Ok(DottedAlphabet::new(d)?.enumerate(n))
}

/// The dotted matrix whose class is the image of the term's language. It
/// lives on `M^{×(2q+1)}`; subcell `s` of each cell is the `s`-th nearest to
/// the cell's base point. Loop letters keep their sign in odd subcells and
/// each connector becomes a dot in its even subcell.
pub fn atom_for_term(alpha: &CellAlphabet, term: &PathTerm) -> DottedMatrix {
    let m = alpha.matrix();
    let q = 2 * term.q() + 1;
    let mut out = DottedMatrix::zeros(m.cols() * q, m.rows() * q);
    let subcell = |a: Letter, s: usize| -> Cell {
        let (k, l) = alpha.cell(a);
        let along = |sign: i8| if sign == 1 { s } else { q + 1 - s };
        ((k - 1) * q + along(alpha.signs().col(k)), (l - 1) * q + along(alpha.signs().row(l)))
    };
    for s in 1..=q {
        if s % 2 == 1 {
            for &a in term.loop_alphabet(s) {
                let (x, y) = subcell(a, s);
                let (k, l) = alpha.cell(a);
                let e = if m.get(k, l) == 1 { Entry::Inc } else { Entry::Dec };
                out.set(x, y, e);
            }
        } else {
            let (x, y) = subcell(term.connector(s), s);
            out.set(x, y, Entry::Dot);
        }
    }
    out
}

/// Splits the image of the words over the matrix's alphabet that avoid
/// every forbidden subword into classes of dot-isolated matrices, one per
/// path through the avoiding automaton. Matrices with no entries describe
/// only the empty permutation and are dropped, so an empty result means
/// just the empty permutation.
pub fn decompose_to_atoms(m: &GridMatrix, forbidden: &[Word]) -> Result<Vec<DottedMatrix>> {
    let alpha = CellAlphabet::new(m)?;
    for w in forbidden {
        alpha.check_word(w)?;
    }
    let language = subword_avoider(alpha.labels(), forbidden);
    let terms = language.decompose_paths()?;
    let atoms: BTreeSet<String> = terms
        .iter()
        .map(|t| atom_for_term(&alpha, t))
        .filter(|d| !d.nonzero_cells().is_empty())
        .map(|d| d.to_string())
        .collect();
    Ok(atoms
        .into_iter()
        .map(|s| s.parse().expect("printed matrices parse"))
        .collect())
}

/// The least `τ` of smallest length, at most `bound`, in the class of `d`
/// that contains both `p` and `r`. `None` only means nothing was found
/// within the bound.
pub fn joint_embed(d: &DottedMatrix, p: &Permutation, r: &Permutation, bound: usize) -> Result<Option<Permutation>> {
    let dotted = DottedAlphabet::new(d)?;
    for n in p.len().max(r.len())..=bound {
        if let Some(t) = dotted.enumerate(n).into_iter().find(|t| contains(p, t) && contains(r, t)) {
            return Ok(Some(t));
        }
    }
    Ok(None)
}
