use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::poly::IntPoly;
use crate::divide::{regions, CriticalMarker, Divide, DivideCounts, RegionData, Sign};
use crate::error::HomologyError;

/// One vanishing cycle of the distinguished basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum VanishingCycle {
    /// Circuit around a bounded `+` region.
    Maximum { region: usize },
    /// Tear at a double point.
    Saddle { crossing: usize },
    /// Circuit around a bounded `-` region.
    Minimum { region: usize },
}

/// Distinguished basis ordered maxima, saddles, minima; canonical order inside blocks.
#[derive(Debug, Clone)]
pub struct VanishingBasis {
    pub cycles: Vec<VanishingCycle>,
    pub mu_plus: usize,
    pub mu_zero: usize,
    pub mu_minus: usize,
    pub(crate) data: RegionData,
}

impl VanishingBasis {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn regions(&self) -> &RegionData {
        &self.data
    }
}

pub fn vanishing_basis(d: &Divide) -> Result<VanishingBasis, HomologyError> {
    let data = regions(d)?;
    let cycles: Vec<VanishingCycle> = data
        .critical_assignment
        .iter()
        .map(|m| match *m {
            CriticalMarker::Maximum { region } => VanishingCycle::Maximum { region },
            CriticalMarker::Saddle { crossing } => VanishingCycle::Saddle { crossing },
            CriticalMarker::Minimum { region } => VanishingCycle::Minimum { region },
        })
        .collect();
    let count = |f: fn(&VanishingCycle) -> bool| cycles.iter().filter(|c| f(c)).count();
    Ok(VanishingBasis {
        mu_plus: count(|c| matches!(c, VanishingCycle::Maximum { .. })),
        mu_zero: count(|c| matches!(c, VanishingCycle::Saddle { .. })),
        mu_minus: count(|c| matches!(c, VanishingCycle::Minimum { .. })),
        cycles,
        data,
    })
}

/// Seifert form of the distinguished basis in block form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeifertData {
    pub mu_plus: usize,
    pub mu_zero: usize,
    pub mu_minus: usize,
    /// Sectors of each saddle inside each `+` region (μ₊ × μ₀).
    pub a: IntMatrix,
    /// Sectors of each saddle inside each `-` region (μ₀ × μ₋).
    pub b: IntMatrix,
    /// Edges shared by a `+` and a `-` region (μ₊ × μ₋).
    pub g: IntMatrix,
    pub s: IntMatrix,
    pub n: IntMatrix,
}

impl SeifertData {
    pub fn mu(&self) -> usize {
        self.mu_plus + self.mu_zero + self.mu_minus
    }

    /// Whether `A·B` is even and `G = ½·A·B` entrywise.
    pub fn g_is_half_ab(&self) -> bool {
        let ab = self.a.mul(&self.b);
        ab == self.g.scale(2)
    }

    /// Intersection pairing `Sᵗ − S` of the vanishing cycles.
    pub fn intersection(&self) -> IntMatrix {
        self.s.transpose().sub(&self.s)
    }
}

pub fn seifert(d: &Divide, basis: &VanishingBasis) -> SeifertData {
    let data = &basis.data;
    let mut maxima = Vec::new();
    let mut saddles = Vec::new();
    let mut minima = Vec::new();
    for c in &basis.cycles {
        match *c {
            VanishingCycle::Maximum { region } => maxima.push(region),
            VanishingCycle::Saddle { crossing } => saddles.push(crossing),
            VanishingCycle::Minimum { region } => minima.push(region),
        }
    }
    let (mp, m0, mm) = (maxima.len(), saddles.len(), minima.len());
    let mut a = IntMatrix::zeros(mp, m0);
    for (i, &r) in maxima.iter().enumerate() {
        for (s, &x) in saddles.iter().enumerate() {
            a[(i, s)] = data.regions[r].sectors_at(x) as i64;
        }
    }
    let mut b = IntMatrix::zeros(m0, mm);
    for (s, &x) in saddles.iter().enumerate() {
        for (j, &r) in minima.iter().enumerate() {
            b[(s, j)] = data.regions[r].sectors_at(x) as i64;
        }
    }
    let mut g = IntMatrix::zeros(mp, mm);
    for (i, &r) in maxima.iter().enumerate() {
        for &h in &data.regions[r].circuit {
            let other = data.region_of_dart[d.partner(h)];
            if let Some(j) = minima.iter().position(|&m| m == other) {
                g[(i, j)] += 1;
            }
        }
    }
    debug_assert!(maxima.iter().all(|&r| data.regions[r].sign == Sign::Plus));

    let mu = mp + m0 + mm;
    let mut s = IntMatrix::identity(mu);
    s.set_block(0, mp, &a);
    s.set_block(0, mp + m0, &g);
    s.set_block(mp, mp + m0, &b);
    let n = s.sub(&IntMatrix::identity(mu));
    SeifertData {
        mu_plus: mp,
        mu_zero: m0,
        mu_minus: mm,
        a,
        b,
        g,
        s,
        n,
    }
}

/// Homological monodromy `T = (Sᵗ)⁻¹·S`, by forward substitution.
pub fn monodromy(sd: &SeifertData) -> IntMatrix {
    let mu = sd.mu();
    let l = sd.s.transpose();
    let mut t = IntMatrix::zeros(mu, mu);
    for i in 0..mu {
        for j in 0..mu {
            let mut v = sd.s[(i, j)];
            for k in 0..i {
                v -= l[(i, k)] * t[(k, j)];
            }
            t[(i, j)] = v;
        }
    }
    t
}

/// Conjugation involution: `S` with its middle block row negated.
pub fn conjugation(sd: &SeifertData) -> IntMatrix {
    let mut c = sd.s.clone();
    for i in sd.mu_plus..sd.mu_plus + sd.mu_zero {
        for j in 0..sd.mu() {
            c[(i, j)] = -c[(i, j)];
        }
    }
    c
}

/// `μ = 2·μ₀ + trace(C)`.
pub fn mu_identity_check(counts: &DivideCounts, c: &IntMatrix) -> bool {
    counts.mu as i64 == 2 * counts.mu_zero as i64 + c.trace()
}

/// Characteristic polynomial `det(t·Id − T)` of the monodromy.
pub fn alexander(sd: &SeifertData) -> IntPoly {
    monodromy(sd).charpoly()
}

/// Sign of the transvections: `x ↦ x + ε⟨x, δ_i⟩δ_i` with `⟨·,·⟩ = Sᵗ − S`.
pub const TRANSVECTION_SIGN: i64 = 1;

/// Product of transvections, leftmost factor outermost.
///
/// Each letter is a basis index with exponent `±1`.
pub fn transvection_product(
    basis: &VanishingBasis,
    sd: &SeifertData,
    word: &[(usize, i8)],
) -> Result<IntMatrix, HomologyError> {
    let mu = basis.len();
    let pairing = sd.intersection();
    let mut out = IntMatrix::identity(mu);
    for &(i, e) in word {
        if i >= mu {
            return Err(HomologyError::IndexOutOfRange { index: i, len: mu });
        }
        // out · τ_i^e, with τ_i = Id + ε e_i (column i of the pairing)ᵀ
        let eps = TRANSVECTION_SIGN * e as i64;
        let col: Vec<i64> = (0..mu).map(|k| pairing[(k, i)]).collect();
        let mut next = out.clone();
        for r in 0..mu {
            let f = out[(r, i)] * eps;
            if f != 0 {
                for (k, &v) in col.iter().enumerate() {
                    next[(r, k)] += f * v;
                }
            }
        }
        out = next;
    }
    Ok(out)
}

/// Word `T₋ ∘ T₀ ∘ T₊`: minima, then saddles, then maxima, so the maxima act first.
pub fn distinguished_word(basis: &VanishingBasis) -> Vec<(usize, i8)> {
    let (p, z, m) = (basis.mu_plus, basis.mu_zero, basis.mu_minus);
    (p + z..p + z + m)
        .chain(p..p + z)
        .chain(0..p)
        .map(|i| (i, 1))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::chebyshev_divide;

    #[test]
    fn trefoil_matrices() {
        let d = chebyshev_divide(2, 3).unwrap();
        let basis = vanishing_basis(&d).unwrap();
        assert_eq!(basis.len(), 2);
        let sd = seifert(&d, &basis);
        assert_eq!(sd.s.to_rows(), vec![vec![1, 1], vec![0, 1]]);
        let t = monodromy(&sd);
        assert_eq!(t.trace(), 1);
        assert!(t.pow(6).is_identity());
        let c = conjugation(&sd);
        assert!(c.mul(&c).is_identity());
        assert_eq!(c.trace(), 0);
        assert_eq!(alexander(&sd).coeffs(), &[1, -1, 1]);
        let word = transvection_product(&basis, &sd, &distinguished_word(&basis)).unwrap();
        assert_eq!(word, t);
        assert_eq!(
            transvection_product(&basis, &sd, &[(2, 1)]),
            Err(HomologyError::IndexOutOfRange { index: 2, len: 2 })
        );
        assert!(transvection_product(&basis, &sd, &[]).unwrap().is_identity());
    }

    #[test]
    fn inverse_letters_cancel() {
        let d = chebyshev_divide(3, 4).unwrap();
        let basis = vanishing_basis(&d).unwrap();
        let sd = seifert(&d, &basis);
        let m = transvection_product(&basis, &sd, &[(1, 1), (1, -1), (4, -1), (4, 1)]).unwrap();
        assert!(m.is_identity());
    }
}
