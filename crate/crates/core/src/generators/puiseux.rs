use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::GeneratorError;

/// Essential Puiseux pairs `(a_i, b_i)` of an irreducible plane curve germ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(u64, u64)>", into = "Vec<(u64, u64)>")]
pub struct PuiseuxPairs {
    pairs: Vec<(u64, u64)>,
}

impl PuiseuxPairs {
    pub fn new(pairs: Vec<(u64, u64)>) -> Result<Self, GeneratorError> {
        if pairs.is_empty() {
            return Err(GeneratorError::InvalidPuiseux("no pairs given".into()));
        }
        let mut prefix: u64 = 1;
        for (i, &(a, b)) in pairs.iter().enumerate() {
            if a < 2 || a >= b {
                return Err(GeneratorError::InvalidPuiseux(format!(
                    "pair {} = ({a},{b}) violates 2 <= a < b",
                    i + 1
                )));
            }
            prefix = prefix.checked_mul(a).ok_or_else(|| {
                GeneratorError::InvalidPuiseux("product of the a_i overflows".into())
            })?;
            if b.gcd(&prefix) != 1 {
                return Err(GeneratorError::InvalidPuiseux(format!(
                    "gcd({b}, {prefix}) != 1 at pair {}",
                    i + 1
                )));
            }
            if i > 0 {
                let (_, b_prev) = pairs[i - 1];
                // b_{i-1}/(a_1..a_{i-1}) < b_i/(a_1..a_i)
                if b_prev * a >= b {
                    return Err(GeneratorError::InvalidPuiseux(format!(
                        "exponents not increasing at pair {}",
                        i + 1
                    )));
                }
            }
        }
        Ok(PuiseuxPairs { pairs })
    }

    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

impl TryFrom<Vec<(u64, u64)>> for PuiseuxPairs {
    type Error = GeneratorError;

    fn try_from(pairs: Vec<(u64, u64)>) -> Result<Self, Self::Error> {
        PuiseuxPairs::new(pairs)
    }
}

impl From<PuiseuxPairs> for Vec<(u64, u64)> {
    fn from(pp: PuiseuxPairs) -> Self {
        pp.pairs
    }
}

impl fmt::Display for PuiseuxPairs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .pairs
            .iter()
            .map(|(a, b)| format!("({a},{b})"))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Parses `"(a1,b1),(a2,b2),..."`; whitespace is ignored.
impl FromStr for PuiseuxPairs {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |why: &str| GeneratorError::Parse(format!("{why} in {s:?}"));
        let mut pairs = Vec::new();
        let mut rest = compact.as_str();
        loop {
            rest = rest.strip_prefix('(').ok_or_else(|| bad("expected '('"))?;
            let close = rest.find(')').ok_or_else(|| bad("missing ')'"))?;
            let (inner, tail) = rest.split_at(close);
            let (a, b) = inner.split_once(',').ok_or_else(|| bad("expected 'a,b'"))?;
            let num = |t: &str| {
                if t.is_empty() || !t.bytes().all(|c| c.is_ascii_digit()) {
                    Err(bad("expected ASCII digits"))
                } else {
                    t.parse::<u64>().map_err(|_| bad("number out of range"))
                }
            };
            pairs.push((num(a)?, num(b)?));
            rest = &tail[1..];
            if rest.is_empty() {
                break;
            }
            rest = rest.strip_prefix(',').ok_or_else(|| bad("expected ','"))?;
        }
        PuiseuxPairs::new(pairs)
    }
}

/// Newton pairs and cable exponents for the iterated star product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CablingPlan {
    pub newton_lambdas: Vec<i64>,
    pub cable_exponents: Vec<i64>,
    pub stage_deltas: Vec<i64>,
    /// The `a_k`, repeated for convenience.
    pub multiplicities: Vec<i64>,
}

pub fn puiseux_to_plan(pp: &PuiseuxPairs) -> Result<CablingPlan, GeneratorError> {
    let n = pp.len();
    let a: Vec<i64> = pp.pairs().iter().map(|&(a, _)| a as i64).collect();
    let b: Vec<i64> = pp.pairs().iter().map(|&(_, b)| b as i64).collect();
    let mut lambdas = vec![b[0]];
    for k in 1..n {
        let next = b[k] - b[k - 1] * a[k] + lambdas[k - 1] * a[k - 1] * a[k];
        lambdas.push(next);
    }
    let mut exps = vec![b[0]];
    let mut deltas = vec![(a[0] - 1) * (b[0] - 1) / 2];
    for k in 1..n {
        let bp = lambdas[k] - 2 * a[k] * deltas[k - 1];
        if bp <= 0 {
            return Err(GeneratorError::InvalidPuiseux(format!(
                "cable exponent b'_{} = {bp} is not positive",
                k + 1
            )));
        }
        exps.push(bp);
        deltas.push((a[k] - 1) * (bp - 1) / 2 + deltas[k - 1] * a[k] * a[k]);
    }
    for k in 0..n {
        assert_eq!(
            a[k].gcd(&exps[k]),
            1,
            "cable exponents are coprime to their multiplicity"
        );
    }
    Ok(CablingPlan {
        newton_lambdas: lambdas,
        cable_exponents: exps,
        stage_deltas: deltas,
        multiplicities: a,
    })
}

/// Number of curves in a complete reduction system of the monodromy:
/// `Σ_{j=2..n} a_j a_{j+1} ⋯ a_n`.
pub fn reduction_count(pp: &PuiseuxPairs) -> u64 {
    let a: Vec<u64> = pp.pairs().iter().map(|&(a, _)| a).collect();
    (1..a.len()).map(|j| a[j..].iter().product::<u64>()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Milnor number from the semigroup generators of the branch.
    fn semigroup_mu(pp: &PuiseuxPairs) -> i64 {
        let a: Vec<i64> = pp.pairs().iter().map(|&(a, _)| a as i64).collect();
        let b: Vec<i64> = pp.pairs().iter().map(|&(_, b)| b as i64).collect();
        let n = a.len();
        let beta0: i64 = a.iter().product();
        let beta: Vec<i64> = (0..n).map(|i| b[i] * a[i + 1..].iter().product::<i64>()).collect();
        let mut bar = vec![beta[0]];
        for i in 1..n {
            bar.push(a[i - 1] * bar[i - 1] - beta[i - 1] + beta[i]);
        }
        (0..n).map(|i| (a[i] - 1) * bar[i]).sum::<i64>() - beta0 + 1
    }

    #[test]
    fn worked_examples() {
        let plan = puiseux_to_plan(&"(2,3),(2,7)".parse().unwrap()).unwrap();
        assert_eq!(plan.newton_lambdas, vec![3, 13]);
        assert_eq!(plan.cable_exponents, vec![3, 9]);
        assert_eq!(plan.stage_deltas, vec![1, 8]);
        let plan = puiseux_to_plan(&"(2,3),(3,11)".parse().unwrap()).unwrap();
        assert_eq!(plan.newton_lambdas[1], 20);
        assert_eq!(plan.cable_exponents[1], 14);
        let plan = puiseux_to_plan(&"(4,9)".parse().unwrap()).unwrap();
        assert_eq!(plan.stage_deltas, vec![12]);
    }

    #[test]
    fn delta_matches_semigroup_milnor_number() {
        for text in ["(2,3)", "(2,3),(2,7)", "(2,3),(3,11)", "(2,5),(2,11)", "(3,4),(2,13)", "(2,3),(2,7),(2,15)"] {
            let pp: PuiseuxPairs = text.parse().unwrap();
            let plan = puiseux_to_plan(&pp).unwrap();
            assert_eq!(2 * plan.stage_deltas.last().unwrap(), semigroup_mu(&pp), "{text}");
        }
        assert_eq!(semigroup_mu(&"(2,3),(2,7)".parse().unwrap()), 16);
        assert_eq!(semigroup_mu(&"(2,3),(3,11)".parse().unwrap()), 44);
    }

    #[test]
    fn parsing_and_validation() {
        let pp: PuiseuxPairs = " ( 2 , 3 ) ,(2,7)".parse().unwrap();
        assert_eq!(pp.pairs(), &[(2, 3), (2, 7)]);
        assert_eq!(pp.to_string(), "(2,3),(2,7)");
        for bad in ["", "(2,3", "(2;3)", "(2,3),", "(-2,3)", "(2,3)(2,7)", "(x,3)"] {
            assert!(matches!(bad.parse::<PuiseuxPairs>(), Err(GeneratorError::Parse(_))), "{bad:?}");
        }
        for invalid in ["(1,3)", "(3,2)", "(2,4)", "(2,3),(2,5)", "(2,3),(2,6)"] {
            assert!(
                matches!(invalid.parse::<PuiseuxPairs>(), Err(GeneratorError::InvalidPuiseux(_))),
                "{invalid:?}"
            );
        }
    }

    #[test]
    fn reduction_counts() {
        assert_eq!(reduction_count(&"(2,3),(2,7)".parse().unwrap()), 2);
        assert_eq!(reduction_count(&"(5,7)".parse().unwrap()), 0);
        assert_eq!(reduction_count(&"(2,3),(2,7),(2,15)".parse().unwrap()), 6);
    }
}
