use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::poly::IntPoly;
use crate::error::HomologyError;

/// Outcome of the order analysis of an integral monodromy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrderProfile {
    /// Least `k ≥ 1` with `T^k = Id`.
    Finite { order: u64 },
    /// The characteristic polynomial has a non-cyclotomic factor, so some
    /// eigenvalue lies off the unit circle.
    OffUnitCircle { factor: IntPoly },
    /// All eigenvalues are roots of unity of order dividing `period`, but
    /// `N = T^period − Id` is a nonzero nilpotent with `N^index = 0`.
    Unipotent { period: u64, nilpotency_index: u32 },
}

impl OrderProfile {
    pub fn is_finite(&self) -> bool {
        matches!(self, OrderProfile::Finite { .. })
    }
}

/// Splits off cyclotomic factors: returns the orders `n` with multiplicity
/// and the remaining cofactor.
pub fn cyclotomic_factors(p: &IntPoly) -> (Vec<(usize, usize)>, IntPoly) {
    let mut rest = p.clone();
    let mut found = Vec::new();
    let deg = p.degree().unwrap_or(0);
    // φ(n) ≥ sqrt(n/2), so only n ≤ 2·deg² can contribute
    let bound = 2 * deg * deg + 2;
    let mut n = 1;
    while rest.degree().unwrap_or(0) > 0 && n <= bound {
        let phi = IntPoly::cyclotomic(n);
        let mut mult = 0;
        while let Some(q) = rest.exact_div(&phi) {
            rest = q;
            mult += 1;
        }
        if mult > 0 {
            found.push((n, mult));
        }
        n += 1;
    }
    (found, rest)
}

/// Least lcm bound on the order, if the characteristic polynomial is a
/// product of cyclotomic polynomials.
pub fn cyclotomic_period(t: &IntMatrix) -> Option<u64> {
    let (factors, rest) = cyclotomic_factors(&t.charpoly());
    (rest.degree().unwrap_or(0) == 0)
        .then(|| factors.iter().fold(1u64, |l, &(n, _)| l.lcm(&(n as u64))))
}

/// Decides whether `T` has finite order, exactly.
///
/// `k_max` defaults to the lcm of the cyclotomic orders of the eigenvalues.
pub fn order_profile(t: &IntMatrix, k_max: Option<u64>) -> Result<OrderProfile, HomologyError> {
    assert!(t.is_square());
    let n = t.rows();
    let chi = t.charpoly();
    let (factors, rest) = cyclotomic_factors(&chi);
    if rest.degree().unwrap_or(0) > 0 {
        return Ok(OrderProfile::OffUnitCircle { factor: rest });
    }
    let period = factors.iter().fold(1u64, |l, &(m, _)| l.lcm(&(m as u64)));
    let k_max = k_max.unwrap_or(period);
    let id = IntMatrix::identity(n);
    let tp = t.pow(period);
    if tp == id {
        let mut order = period;
        let mut primes = Vec::new();
        let mut rest = period;
        let mut f = 2;
        while f * f <= rest {
            if rest % f == 0 {
                primes.push(f);
                while rest % f == 0 {
                    rest /= f;
                }
            }
            f += 1;
        }
        if rest > 1 {
            primes.push(rest);
        }
        for p in primes {
            while order % p == 0 && t.pow(order / p) == id {
                order /= p;
            }
        }
        if order > k_max {
            return Err(HomologyError::Inconclusive { k_max });
        }
        return Ok(OrderProfile::Finite { order });
    }
    let nil = tp.sub(&id);
    let mut power = nil.clone();
    let mut index = 1;
    while !power.is_zero() {
        power = power.mul(&nil);
        index += 1;
        assert!(index as usize <= n + 1, "T^period − Id is nilpotent");
    }
    Ok(OrderProfile::Unipotent {
        period,
        nilpotency_index: index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_profiles() {
        let t = IntMatrix::from(vec![vec![1, 1], vec![-1, 0]]);
        assert_eq!(order_profile(&t, None).unwrap(), OrderProfile::Finite { order: 6 });
        assert_eq!(
            order_profile(&IntMatrix::identity(3), None).unwrap(),
            OrderProfile::Finite { order: 1 }
        );
        let shear = IntMatrix::from(vec![vec![1, 1], vec![0, 1]]);
        assert_eq!(
            order_profile(&shear, None).unwrap(),
            OrderProfile::Unipotent {
                period: 1,
                nilpotency_index: 2
            }
        );
        let cat = IntMatrix::from(vec![vec![2, 1], vec![1, 1]]);
        assert!(matches!(
            order_profile(&cat, None).unwrap(),
            OrderProfile::OffUnitCircle { .. }
        ));
        assert_eq!(
            order_profile(&t, Some(5)),
            Err(HomologyError::Inconclusive { k_max: 5 })
        );
    }
}
