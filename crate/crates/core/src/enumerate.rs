//! Enumeration of one-arc divides by number of double points.

use std::collections::BTreeMap;

use crate::divide::{equivalence_key, Divide, KeyOptions, SignedGaussCode};

/// A double-occurrence word; letters are numbered in order of first appearance.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GaussCode(pub Vec<usize>);

impl GaussCode {
    pub fn num_letters(&self) -> usize {
        self.0.len() / 2
    }
}

/// Every double-occurrence word on `g` letters, up to renaming, exactly once.
pub fn candidate_codes(g: usize) -> Vec<GaussCode> {
    fn extend(word: &mut Vec<usize>, open: &mut Vec<usize>, next: usize, g: usize, out: &mut Vec<GaussCode>) {
        if word.len() == 2 * g {
            out.push(GaussCode(word.clone()));
            return;
        }
        // open a new letter
        if next < g {
            word.push(next);
            open.push(next);
            extend(word, open, next + 1, g, out);
            open.pop();
            word.pop();
        }
        // close a letter already opened
        for i in 0..open.len() {
            let letter = open.remove(i);
            word.push(letter);
            extend(word, open, next, g, out);
            word.pop();
            open.insert(i, letter);
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), &mut Vec::new(), 0, g, &mut out);
    out
}

/// All divides, one per canonical class, whose arc reads `code`.
pub fn realizations(code: &GaussCode) -> Vec<Divide> {
    realizations_with(code, KeyOptions::default())
}

/// Like [`realizations`], one divide per class of the given equivalence.
pub fn realizations_with(code: &GaussCode, options: KeyOptions) -> Vec<Divide> {
    let g = code.num_letters();
    let mut found: BTreeMap<String, Divide> = BTreeMap::new();
    for mask in 0u64..(1 << g) {
        let signs = (0..g)
            .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
            .collect();
        if let Ok(d) = SignedGaussCode::arc(code.0.clone(), signs).to_divide() {
            found.entry(equivalence_key(&d, options)).or_insert(d);
        }
    }
    found.into_values().collect()
}

/// One representative divide per canonical class with `g` double points,
/// keyed and sorted by canonical label.
pub fn enumerate_divides(g: usize) -> BTreeMap<String, Divide> {
    enumerate_divides_with(g, KeyOptions::default())
}

/// Enumeration under a chosen equivalence (see [`KeyOptions`]).
pub fn enumerate_divides_with(g: usize, options: KeyOptions) -> BTreeMap<String, Divide> {
    let codes = candidate_codes(g);
    #[cfg(feature = "parallel")]
    let per_code: Vec<Vec<Divide>> = {
        use rayon::prelude::*;
        codes.par_iter().map(|c| realizations_with(c, options)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let per_code: Vec<Vec<Divide>> = codes.iter().map(|c| realizations_with(c, options)).collect();
    let mut all = BTreeMap::new();
    for d in per_code.into_iter().flatten() {
        all.entry(equivalence_key(&d, options)).or_insert(d);
    }
    all
}

/// Number of connected one-arc divides with `g` double points.
pub fn count_divides(g: usize) -> usize {
    enumerate_divides(g).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn code_counts_are_double_factorials() {
        let counts: Vec<usize> = (0..6).map(|g| candidate_codes(g).len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 15, 105, 945]);
        let two: Vec<Vec<usize>> = candidate_codes(2).into_iter().map(|c| c.0).collect();
        assert_eq!(two.len(), 3);
        for w in [vec![0, 0, 1, 1], vec![0, 1, 0, 1], vec![0, 1, 1, 0]] {
            assert!(two.contains(&w));
        }
    }

    #[test]
    fn small_realizations() {
        assert_eq!(realizations(&GaussCode(vec![])).len(), 1);
        assert_eq!(realizations(&GaussCode(vec![0, 0])).len(), 1);
        assert!(realizations(&GaussCode(vec![0, 1, 0, 1])).is_empty());
    }
}
