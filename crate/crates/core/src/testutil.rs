use crate::encoding::{CellAlphabet, Word};

/// Every word of length `n` over the alphabet, in lexicographic order.
pub(crate) fn words(alpha: &CellAlphabet, n: usize) -> Vec<Word> {
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
