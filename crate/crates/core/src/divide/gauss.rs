use super::Divide;
use crate::error::DivideError;

/// A branch as the sequence of crossings it passes through.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussBranch {
    pub visits: Vec<usize>,
    pub closed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BranchEnd {
    Start,
    End,
}

/// Signed Gauss code of a divide.
///
/// Traversal order is branch by branch, each in its own direction. The sign of
/// a crossing is the sign of `tangent(first passage) x tangent(second passage)`.
/// `boundary` lists the open-branch ends counterclockwise along the disk boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedGaussCode {
    pub branches: Vec<GaussBranch>,
    pub signs: Vec<i8>,
    pub boundary: Vec<(usize, BranchEnd)>,
}

impl SignedGaussCode {
    /// Code of a single open arc with both ends on the boundary.
    pub fn arc(visits: Vec<usize>, signs: Vec<i8>) -> Self {
        SignedGaussCode {
            branches: vec![GaussBranch {
                visits,
                closed: false,
            }],
            signs,
            boundary: vec![(0, BranchEnd::Start), (0, BranchEnd::End)],
        }
    }

    pub fn num_crossings(&self) -> usize {
        self.signs.len()
    }

    /// Builds the planar map and validates it.
    ///
    /// At a crossing with sign `+` the counterclockwise slots are
    /// `[out₁, out₂, in₁, in₂]`, with sign `-` they are `[out₁, in₂, in₁, out₂]`.
    pub fn to_divide(&self) -> Result<Divide, DivideError> {
        let c = self.signs.len();
        let mut passage = vec![0u8; c];
        // (crossing, passage) -> (in slot, out slot)
        let slots = |crossing: usize, second: bool, sign: i8| -> (usize, usize) {
            let base = 4 * crossing;
            match (second, sign > 0) {
                (false, _) => (base + 2, base),
                (true, true) => (base + 3, base + 1),
                (true, false) => (base + 1, base + 3),
            }
        };
        let k = self.boundary.len();
        let mut endpoint_of = std::collections::HashMap::new();
        for (i, &end) in self.boundary.iter().enumerate() {
            endpoint_of.insert(end, 4 * c + i);
        }
        let mut partner = vec![usize::MAX; 4 * c + k];
        let link = |a: usize, b: usize, partner: &mut Vec<usize>| {
            partner[a] = b;
            partner[b] = a;
        };
        for (bi, branch) in self.branches.iter().enumerate() {
            let mut ins = Vec::with_capacity(branch.visits.len());
            let mut outs = Vec::with_capacity(branch.visits.len());
            for &x in &branch.visits {
                if x >= c || passage[x] >= 2 {
                    return Err(DivideError::InconsistentStrands(x as u64, x as u64));
                }
                let (i, o) = slots(x, passage[x] == 1, self.signs[x]);
                passage[x] += 1;
                ins.push(i);
                outs.push(o);
            }
            if branch.closed {
                if ins.is_empty() {
                    return Err(DivideError::EmptyClosedBranch);
                }
                for j in 0..ins.len() {
                    link(outs[j], ins[(j + 1) % ins.len()], &mut partner);
                }
            } else {
                let start = *endpoint_of
                    .get(&(bi, BranchEnd::Start))
                    .ok_or(DivideError::NotAnEndpoint(bi))?;
                let end = *endpoint_of
                    .get(&(bi, BranchEnd::End))
                    .ok_or(DivideError::NotAnEndpoint(bi))?;
                let mut prev = start;
                for j in 0..ins.len() {
                    link(prev, ins[j], &mut partner);
                    prev = outs[j];
                }
                link(prev, end, &mut partner);
            }
        }
        if let Some(h) = partner.iter().position(|&p| p == usize::MAX) {
            return Err(DivideError::DanglingHalfEdge(h as u64));
        }
        Divide::from_partner(c, k, partner)
    }

    /// Reads the code off a divide; open branches start at their lower endpoint.
    pub fn from_divide(d: &Divide) -> Self {
        Self::from_divide_oriented(d, &[])
    }

    /// Like [`from_divide`](Self::from_divide), but open branches whose start
    /// endpoint appears in `reverse_from` are walked from their other end.
    pub fn from_divide_oriented(d: &Divide, reverse_from: &[usize]) -> Self {
        let c = d.num_crossings();
        let mut first: Vec<Option<(usize, usize)>> = vec![None; c];
        let mut second: Vec<Option<(usize, usize)>> = vec![None; c];
        let mut branches = Vec::new();
        let mut ends: Vec<(usize, (usize, BranchEnd))> = Vec::new();
        for (bi, b) in d.branches().iter().enumerate() {
            let mut walk = b.walk.clone();
            if !b.closed {
                let start = walk[0] - 4 * c;
                if reverse_from.contains(&start) {
                    walk.reverse();
                }
                ends.push((walk[0] - 4 * c, (bi, BranchEnd::Start)));
                ends.push((walk[walk.len() - 1] - 4 * c, (bi, BranchEnd::End)));
            }
            let body = if b.closed {
                &walk[..]
            } else {
                &walk[1..walk.len() - 1]
            };
            let mut visits = Vec::new();
            for pair in body.chunks(2) {
                let (i, o) = (pair[0], pair[1]);
                let x = i / 4;
                if first[x].is_none() {
                    first[x] = Some((i, o));
                } else {
                    second[x] = Some((i, o));
                }
                visits.push(x);
            }
            branches.push(GaussBranch {
                visits,
                closed: b.closed,
            });
        }
        let signs = (0..c)
            .map(|x| {
                let (_, out_a) = first[x].expect("crossing visited");
                let (_, out_b) = second[x].expect("crossing visited twice");
                if (out_a % 4 + 1) % 4 == out_b % 4 {
                    1
                } else {
                    -1
                }
            })
            .collect();
        ends.sort();
        let boundary = ends.into_iter().map(|(_, e)| e).collect();
        SignedGaussCode {
            branches,
            signs,
            boundary,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divide::canonical_label;

    #[test]
    fn kink_arc_round_trip() {
        for sign in [1, -1] {
            let code = SignedGaussCode::arc(vec![0, 0], vec![sign]);
            let d = code.to_divide().unwrap();
            assert_eq!(d.num_crossings(), 1);
            let back = SignedGaussCode::from_divide(&d).to_divide().unwrap();
            assert_eq!(canonical_label(&back).key, canonical_label(&d).key);
        }
    }

    #[test]
    fn interlaced_arc_code_is_not_planar() {
        for signs in [[1, 1], [1, -1], [-1, 1], [-1, -1]] {
            let code = SignedGaussCode::arc(vec![0, 1, 0, 1], signs.to_vec());
            assert!(code.to_divide().is_err());
        }
    }
}
