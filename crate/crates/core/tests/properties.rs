use std::sync::OnceLock;

use dividelab::divide::{apply_move_iii, build_divide, canonical_label, counts, triangle_faces, Divide, RawDivide};
use dividelab::enumerate::{candidate_codes, enumerate_divides, realizations};
use dividelab::generators::{chebyshev_divide, puiseux_divide};
use dividelab::homology::{alexander, monodromy, seifert, vanishing_basis};
use proptest::prelude::*;

fn corpus() -> &'static [Divide] {
    static CORPUS: OnceLock<Vec<Divide>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut all: Vec<Divide> = (0..=3).flat_map(|g| enumerate_divides(g).into_values()).collect();
        for (p, q) in [(2, 5), (3, 4), (3, 5)] {
            all.push(chebyshev_divide(p, q).unwrap());
        }
        all.push(puiseux_divide(&"(2,3),(2,7)".parse().unwrap()).unwrap());
        all
    })
}

/// Renames half-edges, reorders crossings and edges, and rotates each
/// crossing record and the endpoint list; none of this changes the divide.
fn relabel(raw: &RawDivide, ids: &[u64], order: &[usize], turns: &[usize], shift: usize) -> RawDivide {
    let id = |h: u64| ids[h as usize];
    let crossings = order
        .iter()
        .map(|&c| {
            let rec = &raw.crossings[c];
            (0..4).map(|k| id(rec[(k + turns[c]) % 4])).collect()
        })
        .collect();
    let k = raw.endpoints.len();
    let endpoints = (0..k).map(|j| id(raw.endpoints[(j + shift) % k.max(1)])).collect();
    let mut edges: Vec<Vec<u64>> = raw.edges.iter().map(|e| vec![id(e[1]), id(e[0])]).collect();
    edges.reverse();
    RawDivide { crossings, endpoints, edges }
}

fn invariants(d: &Divide) -> (usize, i64, Vec<i64>) {
    let sd = seifert(d, &vanishing_basis(d).unwrap());
    (counts(d).unwrap().mu, monodromy(&sd).trace(), alexander(&sd).coeffs().to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn canonical_label_ignores_presentation(
        index in any::<prop::sample::Index>(),
        seed in any::<u64>(),
        turns in prop::collection::vec(0usize..4, 16),
        shift in 0usize..8,
    ) {
        let d = &corpus()[index.index(corpus().len())];
        let raw = d.to_raw();
        let n = 4 * raw.crossings.len() + raw.endpoints.len();
        // a pseudo-random injective renaming into sparse ids
        let mut ids: Vec<u64> = (0..n as u64).map(|h| h * 7 + 3).collect();
        let mut order: Vec<usize> = (0..raw.crossings.len()).collect();
        let mut state = seed | 1;
        let mut next = || { state ^= state << 13; state ^= state >> 7; state ^= state << 17; state };
        for i in (1..ids.len()).rev() { let j = (next() % (i as u64 + 1)) as usize; ids.swap(i, j); }
        for i in (1..order.len()).rev() { let j = (next() % (i as u64 + 1)) as usize; order.swap(i, j); }
        let turns: Vec<usize> = (0..raw.crossings.len()).map(|c| turns[c % turns.len()]).collect();
        let moved = build_divide(&relabel(&raw, &ids, &order, &turns, shift)).unwrap();
        prop_assert_eq!(canonical_label(&moved).key, canonical_label(d).key);
    }

    #[test]
    fn json_round_trip(index in any::<prop::sample::Index>()) {
        let d = &corpus()[index.index(corpus().len())];
        let back = Divide::from_json(&d.to_json()).unwrap();
        prop_assert_eq!(canonical_label(&back).key, canonical_label(d).key);
        prop_assert_eq!(back.to_json(), d.to_json());
    }

    #[test]
    fn third_moves_keep_invariants(index in any::<prop::sample::Index>(), picks in prop::collection::vec(any::<prop::sample::Index>(), 1..6)) {
        let start = corpus()[index.index(corpus().len())].clone();
        let expected = invariants(&start);
        let mut d = start;
        for pick in picks {
            let faces = triangle_faces(&d).unwrap();
            if faces.is_empty() {
                break;
            }
            d = apply_move_iii(&d, faces[pick.index(faces.len())]).unwrap();
            prop_assert_eq!(invariants(&d), expected.clone());
        }
    }

    #[test]
    fn realizations_are_valid(g in 0usize..5, index in any::<prop::sample::Index>()) {
        let codes = candidate_codes(g);
        let code = &codes[index.index(codes.len())];
        for d in realizations(code) {
            prop_assert_eq!(d.num_crossings(), g);
            prop_assert!(build_divide(&d.to_raw()).is_ok());
            prop_assert_eq!(d.branches().len(), 1);
        }
    }
}
