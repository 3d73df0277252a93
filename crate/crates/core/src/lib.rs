//! Geometric grid classes of permutations.
//!
//! A `0/±1` matrix describes the monotone grid class `Grid(M)` and the
//! geometric grid class `Geom(M)`. Members of `Geom(M)` are images of words
//! over the cell alphabet of `M`, which turns enumeration, bases and
//! generating functions into questions about regular languages.

pub mod atomic;
pub mod automata;
pub mod encoding;
pub mod error;
pub mod gridclass;
pub mod matrix;
pub mod perm;
#[cfg(test)]
mod testutil;
pub mod trace;

pub use atomic::{atom_for_term, decompose_to_atoms, enumerate_geom_dotted, joint_embed, DottedAlphabet};
pub use automata::{subword_avoider, Dfa, PathTerm, Poly, RationalFunction};
pub use encoding::{CellAlphabet, Letter, Word};
pub use error::{Error, Result};
pub use gridclass::{
    basis, census, compare_griddings, encoding_word, enumerate, gridded_count, gridded_gf, member_geom,
    member_grid, member_gridded_geom, min_gridding, verify_forest_equality, Basis, CensusFilter, ClassKind,
    ClassSpec, GriddingOrderWitness, Limits, Witness,
};
pub use matrix::{Cell, DottedMatrix, Entry, GridMatrix, SignAssignment};
pub use perm::{all_griddings, contains, GriddedPermutation, Permutation};
pub use trace::{is_normal_form, normal_form, normal_form_automaton, normal_forms, trace_equivalent};
