use num_integer::Integer;

use super::chebyshev::{box_crossings, sin_sign};
use super::puiseux::{puiseux_to_plan, PuiseuxPairs};
use super::chebyshev_divide;
use crate::divide::{canonical_label, Divide, SignedGaussCode};
use crate::error::GeneratorError;

/// Where the self-crossings of the `P_{p,q}` pattern sit along the base arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PatternPlacement {
    /// After the last grid, traversing the base from its first endpoint.
    #[default]
    Terminal,
    /// Before the first grid.
    Initial,
}

/// Star product `P_{p,q} * base` with the pattern in the terminal arc.
pub fn cable(p: u64, q: u64, base: &Divide) -> Result<Divide, GeneratorError> {
    cable_with(p, q, base, PatternPlacement::Terminal)
}

pub fn cable_with(
    p: u64,
    q: u64,
    base: &Divide,
    placement: PatternPlacement,
) -> Result<Divide, GeneratorError> {
    Ok(cable_code(p, q, base, placement)?.code.to_divide()?)
}

/// Gauss code of a cable together with the bookkeeping needed to read
/// the base back off one strand.
#[cfg_attr(not(test), allow(dead_code))]
pub(crate) struct CableCode {
    pub code: SignedGaussCode,
    /// Number of pattern crossings; grid crossing `(c, j1, j2)` has id
    /// `pattern + c p² + j1 p + j2`.
    pub pattern: usize,
    /// Transverse position of each piece in the grid region.
    pub position: Vec<usize>,
}

/// Oriented single-arc code of the base, walked from its canonical first endpoint.
fn base_code(base: &Divide) -> Result<SignedGaussCode, GeneratorError> {
    let branches = base.branches();
    if branches.len() != 1 {
        return Err(GeneratorError::MultiBranch(branches.len()));
    }
    if branches[0].closed {
        return Err(GeneratorError::CircleBranch);
    }
    let c = base.num_crossings();
    let start = branches[0].walk[0] - 4 * c;
    let first = canonical_label(base).endpoint_order[0];
    let reverse: Vec<usize> = if start == first { vec![] } else { vec![start] };
    Ok(SignedGaussCode::from_divide_oriented(base, &reverse))
}

pub(crate) fn cable_code(
    p: u64,
    q: u64,
    base: &Divide,
    placement: PatternPlacement,
) -> Result<CableCode, GeneratorError> {
    if p == 0 || q == 0 || p.gcd(&q) != 1 {
        return Err(GeneratorError::NotCoprime(p, q));
    }
    let base = base_code(base)?;
    let passages = &base.branches[0].visits;
    let sigma = &base.signs;
    let nb = base.num_crossings();
    let pu = p as usize;

    let pattern = box_crossings(p, q);
    let np = pattern.len();
    let mut pattern_at = std::collections::BTreeMap::new();
    for (id, x) in pattern.iter().enumerate() {
        pattern_at.insert(x.first, id);
        pattern_at.insert(x.second, id);
    }

    // piece k runs over θ ∈ [kπ/p, (k+1)π/p]; even pieces run against the base
    let forward = |k: usize| k % 2 == 1;
    // the turning parameter (units π/p) on the grid side of each piece
    let grid_turn = |k: usize| -> u64 {
        let at_minus_one = if forward(k) { k } else { k + 1 };
        let turn = match placement {
            PatternPlacement::Terminal => at_minus_one,
            PatternPlacement::Initial => if forward(k) { k + 1 } else { k },
        };
        turn as u64
    };
    // transverse rank (0 = rightmost) of each piece near the grid side
    let mut keys: Vec<(u64, i8, usize)> = (0..pu)
        .map(|k| {
            let n = grid_turn(k);
            let a = (n * q) % (2 * p);
            let folded = a.min(2 * p - a);
            // pieces leaving the turn go down iff sin(qθ*) > 0
            let leaves = (n as usize) == k;
            let s = sin_sign(a, p);
            let tie = if leaves { -s } else { s };
            (folded, tie, k)
        })
        .collect();
    // larger folded angle = lower y; among equals the lower piece first
    keys.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
    let mut position = vec![0; pu];
    for (rank, &(_, _, k)) in keys.iter().enumerate() {
        position[k] = rank;
    }
    let mut piece_at = vec![0; pu];
    for k in 0..pu {
        piece_at[position[k]] = k;
    }

    let grid_id = |c: usize, j1: usize, j2: usize| np + c * pu * pu + j1 * pu + j2;
    let total = np + nb * pu * pu;
    let mut signs = vec![0i8; total];
    let mut visits = Vec::with_capacity(2 * total);

    // which pass (1 or 2) each base passage is
    let mut seen = vec![false; nb];
    let passes: Vec<(usize, bool)> = passages
        .iter()
        .map(|&c| {
            let first = !seen[c];
            seen[c] = true;
            (c, first)
        })
        .collect();

    let dir = |k: usize| if forward(k) { 1i8 } else { -1 };
    for k in 0..pu {
        let mut pattern_visits = Vec::new();
        let lo = k as u64 * q;
        let hi = (k as u64 + 1) * q;
        for (_, &id) in pattern_at.range(lo + 1..hi) {
            pattern_visits.push(id);
        }
        let mut grid_visits = Vec::new();
        let j = position[k];
        let order: Box<dyn Iterator<Item = &(usize, bool)>> = if forward(k) {
            Box::new(passes.iter())
        } else {
            Box::new(passes.iter().rev())
        };
        for &(c, first_pass) in order {
            let s = sigma[c];
            // a forward first-pass strand meets second-pass positions upward iff σ = -1,
            // a forward second-pass strand meets first-pass positions upward iff σ = +1
            let upward = if first_pass { s < 0 } else { s > 0 } == forward(k);
            let others: Vec<usize> = if upward {
                (0..pu).collect()
            } else {
                (0..pu).rev().collect()
            };
            for other in others {
                let (j1, j2) = if first_pass { (j, other) } else { (other, j) };
                let id = grid_id(c, j1, j2);
                if signs[id] == 0 {
                    let s1 = dir(piece_at[j1]);
                    let s2 = dir(piece_at[j2]);
                    let base_sign = s1 * s2 * s;
                    signs[id] = if first_pass { base_sign } else { -base_sign };
                }
                grid_visits.push(id);
            }
        }
        let pattern_first = match placement {
            PatternPlacement::Terminal => !forward(k),
            PatternPlacement::Initial => forward(k),
        };
        if pattern_first {
            visits.extend(pattern_visits);
            visits.extend(grid_visits);
        } else {
            visits.extend(grid_visits);
            visits.extend(pattern_visits);
        }
    }
    for (id, x) in pattern.iter().enumerate() {
        signs[id] = x.sign;
    }
    debug_assert!(signs.iter().all(|&s| s != 0));
    Ok(CableCode {
        code: SignedGaussCode::arc(visits, signs),
        pattern: np,
        position,
    })
}

/// Divide of the irreducible germ with the given Puiseux pairs:
/// `P_{a_n,b'_n} * ⋯ * P_{a_2,b'_2} * P_{a_1,b_1}`, evaluated right to left.
pub fn puiseux_divide(pp: &PuiseuxPairs) -> Result<Divide, GeneratorError> {
    let plan = puiseux_to_plan(pp)?;
    let (a1, b1) = pp.pairs()[0];
    let mut d = chebyshev_divide(a1, b1)?;
    for k in 1..pp.len() {
        let a = plan.multiplicities[k] as u64;
        let b = plan.cable_exponents[k] as u64;
        d = cable(a, b, &d)?;
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divide::{build_divide, counts, GaussBranch, RawDivide};

    /// The strand of piece `k` alone, keeping only its own grid crossings.
    fn strand_minor(cc: &CableCode, p: usize, k: usize) -> Divide {
        let visits = &cc.code.branches[0].visits;
        let j = cc.position[k];
        let per_piece = visits.len() / p;
        let mut ids = Vec::new();
        for &id in &visits[k * per_piece..(k + 1) * per_piece] {
            if id >= cc.pattern {
                let local = id - cc.pattern;
                let (j1, j2) = ((local / p) % p, local % p);
                if j1 == j && j2 == j {
                    ids.push(id);
                }
            }
        }
        let mut renumber = std::collections::BTreeMap::new();
        for &id in &ids {
            let n = renumber.len();
            renumber.entry(id).or_insert(n);
        }
        let mut signs = vec![0; renumber.len()];
        for (&id, &n) in &renumber {
            signs[n] = cc.code.signs[id];
        }
        SignedGaussCode {
            branches: vec![GaussBranch {
                visits: ids.iter().map(|id| renumber[id]).collect(),
                closed: false,
            }],
            signs,
            boundary: cc.code.boundary.clone(),
        }
        .to_divide()
        .unwrap()
    }

    #[test]
    fn cabling_a_chord_gives_the_box_divide() {
        let chord = build_divide(&RawDivide {
            crossings: vec![],
            endpoints: vec![0, 1],
            edges: vec![vec![0, 1]],
        })
        .unwrap();
        for (p, q) in [(2, 3), (3, 4), (3, 5), (4, 7)] {
            let d = cable(p, q, &chord).unwrap();
            let expected = chebyshev_divide(p, q).unwrap();
            assert_eq!(canonical_label(&d).key, canonical_label(&expected).key);
        }
    }

    #[test]
    fn double_point_formula() {
        let base = chebyshev_divide(2, 3).unwrap();
        for (p, q) in [(2, 9), (3, 14), (2, 5), (3, 7), (4, 5)] {
            for placement in [PatternPlacement::Terminal, PatternPlacement::Initial] {
                let d = cable_with(p, q, &base, placement).unwrap();
                let expected = ((p - 1) * (q - 1) / 2 + p * p) as usize;
                assert_eq!(d.num_crossings(), expected);
                let c = counts(&d).unwrap();
                assert_eq!(c.mu, 2 * expected);
                assert_eq!(c.r_open, 1);
            }
        }
    }

    #[test]
    fn base_is_a_strand_minor() {
        for base in [chebyshev_divide(2, 3).unwrap(), chebyshev_divide(3, 4).unwrap(), chebyshev_divide(2, 5).unwrap()] {
            let key = canonical_label(&base).key;
            for (p, q) in [(2, 9), (3, 7)] {
                let cc = cable_code(p, q, &base, PatternPlacement::Terminal).unwrap();
                for k in 0..p as usize {
                    assert_eq!(canonical_label(&strand_minor(&cc, p as usize, k)).key, key);
                }
            }
        }
    }

    #[test]
    fn puiseux_divides() {
        let d = puiseux_divide(&"(2,3),(2,7)".parse().unwrap()).unwrap();
        let c = counts(&d).unwrap();
        assert_eq!((c.d, c.mu, c.b), (8, 16, 8));
        let d = puiseux_divide(&"(2,3),(3,11)".parse().unwrap()).unwrap();
        assert_eq!(counts(&d).unwrap().mu, 44);
        let d = puiseux_divide(&"(2,3)".parse().unwrap()).unwrap();
        assert_eq!(
            canonical_label(&d).key,
            canonical_label(&chebyshev_divide(2, 3).unwrap()).key
        );
    }

    #[test]
    fn invalid_bases() {
        let two = build_divide(&RawDivide {
            crossings: vec![vec![0, 1, 2, 3]],
            endpoints: vec![4, 5, 6, 7],
            edges: vec![vec![0, 4], vec![2, 6], vec![1, 5], vec![3, 7]],
        })
        .unwrap();
        assert!(matches!(cable(2, 3, &two), Err(GeneratorError::MultiBranch(2))));
        let base = chebyshev_divide(2, 3).unwrap();
        assert!(matches!(cable(2, 4, &base), Err(GeneratorError::NotCoprime(2, 4))));
    }
}
