use num_integer::Integer;

use crate::divide::{Divide, SignedGaussCode};
use crate::error::GeneratorError;

/// A self-crossing of the box curve `θ ↦ (cos pθ, cos qθ)`, `θ ∈ [0, π]`.
///
/// Parameters are integers in units of `π / (pq)`; `first < second`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoxCrossing {
    pub first: u64,
    pub second: u64,
    /// Sign of `tangent(first) × tangent(second)`.
    pub sign: i8,
}

/// Sign of `sin(π a / n)`, exactly.
pub(crate) fn sin_sign(a: u64, n: u64) -> i8 {
    let r = a % (2 * n);
    if r == 0 || r == n {
        0
    } else if r < n {
        1
    } else {
        -1
    }
}

/// All double points of the box curve, sorted by their first parameter.
///
/// Two parameters share a point iff `i ≡ ±j (mod 2q)` and `i ≡ ±j (mod 2p)`;
/// the crossings are the pairs where the signs differ.
pub fn box_crossings(p: u64, q: u64) -> Vec<BoxCrossing> {
    let n = p * q;
    let congruent = |i: u64, j: u64, m: u64| -> Option<i8> {
        if (i + 2 * m * n - j) % (2 * m) == 0 {
            Some(1)
        } else if (i + j) % (2 * m) == 0 {
            Some(-1)
        } else {
            None
        }
    };
    let mut out = Vec::new();
    for i in 1..n {
        for j in i + 1..n {
            let (Some(s1), Some(s2)) = (congruent(i, j, q), congruent(i, j, p)) else {
                continue;
            };
            if s1 == s2 {
                continue;
            }
            // x' ∝ -sin(pθ), y' ∝ -sin(qθ); at θ_j these are s1, s2 times the values at θ_i
            let sign = sin_sign(i, q) * sin_sign(i, p) * (s2 - s1).signum();
            debug_assert_ne!(sign, 0);
            out.push(BoxCrossing {
                first: i,
                second: j,
                sign,
            });
        }
    }
    out
}

/// The Chebyshev box divide `P_{p,q}`, built from exact parameter arithmetic.
pub fn chebyshev_divide(p: u64, q: u64) -> Result<Divide, GeneratorError> {
    if p == 0 || q == 0 || p.gcd(&q) != 1 {
        return Err(GeneratorError::NotCoprime(p, q));
    }
    Ok(chebyshev_code(p, q).to_divide()?)
}

pub(crate) fn chebyshev_code(p: u64, q: u64) -> SignedGaussCode {
    let crossings = box_crossings(p, q);
    let mut visits: Vec<(u64, usize)> = Vec::with_capacity(2 * crossings.len());
    for (id, x) in crossings.iter().enumerate() {
        visits.push((x.first, id));
        visits.push((x.second, id));
    }
    visits.sort();
    SignedGaussCode::arc(
        visits.into_iter().map(|(_, id)| id).collect(),
        crossings.iter().map(|x| x.sign).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divide::{canonical_label, counts};

    #[test]
    fn crossing_counts_match_delta() {
        for (p, q) in [(2, 3), (2, 5), (3, 4), (3, 5), (7, 5), (4, 9), (5, 6)] {
            let d = chebyshev_divide(p, q).unwrap();
            let delta = ((p - 1) * (q - 1) / 2) as usize;
            assert_eq!(d.num_crossings(), delta, "P_{{{p},{q}}}");
            let c = counts(&d).unwrap();
            assert_eq!(c.mu, 2 * delta);
        }
    }

    #[test]
    fn degenerate_and_invalid_inputs() {
        let chord = chebyshev_divide(1, 7).unwrap();
        assert_eq!(chord.num_crossings(), 0);
        assert_eq!(chebyshev_divide(4, 6), Err(GeneratorError::NotCoprime(4, 6)));
    }

    #[test]
    fn swapping_axes_is_a_reflection() {
        for (p, q) in [(2, 3), (3, 5), (4, 7)] {
            let a = canonical_label(&chebyshev_divide(p, q).unwrap()).key;
            let b = canonical_label(&chebyshev_divide(q, p).unwrap()).key;
            assert_eq!(a, b);
        }
    }

    #[test]
    fn distinct_torus_types_have_distinct_keys() {
        let a = canonical_label(&chebyshev_divide(2, 3).unwrap()).key;
        let b = canonical_label(&chebyshev_divide(2, 5).unwrap()).key;
        assert_ne!(a, b);
    }
}
