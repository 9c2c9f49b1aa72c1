use std::fmt;

use serde::{Deserialize, Serialize};

/// Integer polynomial, coefficients in ascending degree.
///
/// Always normalized: no trailing zero coefficients, so the zero polynomial
/// has an empty coefficient list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<i64>", into = "Vec<i64>")]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        IntPoly { coeffs: vec![1] }
    }

    /// `c·t^n`.
    pub fn monomial(c: i64, n: usize) -> Self {
        let mut coeffs = vec![0; n + 1];
        coeffs[n] = c;
        IntPoly::new(coeffs)
    }

    /// `t^n − 1`.
    pub fn t_pow_minus_one(n: usize) -> Self {
        let mut coeffs = vec![0; n + 1];
        coeffs[0] = -1;
        coeffs[n] += 1;
        IntPoly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> i64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j]
                    .checked_add(a.checked_mul(b).expect("polynomial overflow"))
                    .expect("polynomial overflow");
            }
        }
        IntPoly::new(out)
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&0) + other.coeffs.get(i).unwrap_or(&0))
                .collect(),
        )
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        self.add(&other.neg())
    }

    /// Division with remainder by a polynomial with leading coefficient ±1.
    pub fn div_rem(&self, divisor: &IntPoly) -> (IntPoly, IntPoly) {
        let lead = divisor.leading();
        assert!(lead == 1 || lead == -1, "divisor must have a unit leading coefficient");
        let dd = divisor.degree().expect("nonzero divisor");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (IntPoly::zero(), self.clone());
        }
        let mut quot = vec![0i64; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd] * lead;
            quot[i] = c;
            if c != 0 {
                for (j, &d) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= c * d;
                }
            }
        }
        (IntPoly::new(quot), IntPoly::new(rem))
    }

    /// Exact quotient, or `None` when the division leaves a remainder.
    pub fn exact_div(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// `t^deg · p(1/t)`.
    pub fn reciprocal(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().rev().copied().collect())
    }

    /// `p(t^k)`.
    pub fn compose_power(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![0; (self.coeffs.len() - 1) * k + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c;
        }
        IntPoly::new(coeffs)
    }

    pub fn eval(&self, t: i64) -> i64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * t + c)
    }

    /// `t^μ·p(1/t) = (−1)^μ·p(t)` with `μ = deg p`.
    pub fn is_torres_symmetric(&self) -> bool {
        let Some(mu) = self.degree() else {
            return true;
        };
        let rhs = if mu % 2 == 0 { self.clone() } else { self.neg() };
        self.reciprocal() == rhs
    }

    /// The `n`-th cyclotomic polynomial.
    pub fn cyclotomic(n: usize) -> IntPoly {
        assert!(n >= 1);
        let mut p = IntPoly::t_pow_minus_one(n);
        for d in 1..n {
            if n % d == 0 {
                p = p.exact_div(&IntPoly::cyclotomic(d)).expect("Φ_d divides t^n − 1");
            }
        }
        p
    }
}

impl From<Vec<i64>> for IntPoly {
    fn from(coeffs: Vec<i64>) -> Self {
        IntPoly::new(coeffs)
    }
}

impl From<IntPoly> for Vec<i64> {
    fn from(p: IntPoly) -> Self {
        p.coeffs
    }
}

/// Ascending order, e.g. `1 - t + t^2`.
impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mag = c.unsigned_abs();
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c < 0 { '-' } else { '+' })?;
            }
            first = false;
            match (i, mag) {
                (0, _) => write!(f, "{mag}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "{mag}t")?,
                (_, 1) => write!(f, "t^{i}")?,
                _ => write!(f, "{mag}t^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomics() {
        assert_eq!(IntPoly::cyclotomic(1).coeffs(), &[-1, 1]);
        assert_eq!(IntPoly::cyclotomic(6).coeffs(), &[1, -1, 1]);
        assert_eq!(IntPoly::cyclotomic(12).coeffs(), &[1, 0, -1, 0, 1]);
        assert_eq!(IntPoly::cyclotomic(30).degree(), Some(8));
    }

    #[test]
    fn division_and_display() {
        let p = IntPoly::t_pow_minus_one(6);
        let (q, r) = p.div_rem(&IntPoly::t_pow_minus_one(2));
        assert!(r.is_zero());
        assert_eq!(q.coeffs(), &[1, 0, 1, 0, 1]);
        assert_eq!(IntPoly::new(vec![1, -1, 1]).to_string(), "1 - t + t^2");
        assert_eq!(IntPoly::new(vec![0, -3, 0, 2]).to_string(), "-3t + 2t^3");
        assert!(IntPoly::new(vec![1, -1, 1]).is_torres_symmetric());
        assert!(IntPoly::new(vec![-1, 1]).is_torres_symmetric());
        assert!(!IntPoly::new(vec![1, 2, 1, 1]).is_torres_symmetric());
    }
}
