//! Divides as combinatorial planar maps.
//!
//! A divide is stored with dense half-edge ids: crossing `c` owns the four
//! half-edges `4c..4c+4` in counterclockwise order, so slots `k` and `k + 2`
//! belong to the same strand. Boundary endpoints follow, `4C + i` being the
//! `i`-th endpoint in counterclockwise order along the disk boundary.

mod canon;
mod gauss;
mod map;
mod moves;
mod regions;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::DivideError;

pub use canon::{canonical_label, equivalence_key, Canonical, KeyOptions};
pub use gauss::{BranchEnd, GaussBranch, SignedGaussCode};
pub use map::ClosedMap;
pub use moves::{apply_move_iii, connected_sum, triangle_faces};
pub use regions::{counts, regions, CriticalMarker, DivideCounts, Region, RegionData, Sign};

/// JSON wire form of a divide. Half-edge ids are arbitrary non-negative integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawDivide {
    pub crossings: Vec<Vec<u64>>,
    pub endpoints: Vec<u64>,
    pub edges: Vec<Vec<u64>>,
}

/// One branch of a divide, as the walk of half-edges it traverses.
///
/// Open walks read `[start endpoint, in, out, in, out, ..., end endpoint]`,
/// closed walks `[in, out, ..., in, out]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub closed: bool,
    pub walk: Vec<usize>,
}

impl Branch {
    /// Crossings visited in order, one entry per passage.
    pub fn passages(&self) -> impl Iterator<Item = usize> + '_ {
        let body = if self.closed {
            &self.walk[..]
        } else {
            &self.walk[1..self.walk.len() - 1]
        };
        body.chunks(2).map(|pair| pair[0] / 4)
    }
}

/// A validated divide: immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divide {
    n_crossings: usize,
    n_endpoints: usize,
    partner: Vec<usize>,
    branches: Vec<Branch>,
}

/// Where a half-edge sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Crossing { crossing: usize, slot: usize },
    Endpoint(usize),
}

impl Divide {
    /// Builds and validates a divide from dense data.
    ///
    /// `partner` must be an involution without fixed points on
    /// `0..4 * n_crossings + n_endpoints`.
    pub fn from_partner(
        n_crossings: usize,
        n_endpoints: usize,
        partner: Vec<usize>,
    ) -> Result<Self, DivideError> {
        let n = 4 * n_crossings + n_endpoints;
        assert_eq!(partner.len(), n, "partner table has the wrong length");
        for (h, &p) in partner.iter().enumerate() {
            if p >= n || partner[p] != h || p == h {
                return Err(DivideError::DuplicateHalfEdge(h as u64));
            }
            if h < 4 * n_crossings && p < 4 * n_crossings && p / 4 == h / 4 && p % 4 == (h + 2) % 4 {
                return Err(DivideError::InconsistentStrands(h as u64, p as u64));
            }
        }
        let mut d = Divide {
            n_crossings,
            n_endpoints,
            partner,
            branches: Vec::new(),
        };
        let map = ClosedMap::new(&d);
        map.check_planar()?;
        d.branches = d.walk_branches()?;
        Ok(d)
    }

    pub fn num_crossings(&self) -> usize {
        self.n_crossings
    }

    pub fn num_endpoints(&self) -> usize {
        self.n_endpoints
    }

    pub fn num_half_edges(&self) -> usize {
        self.partner.len()
    }

    pub fn partner(&self, h: usize) -> usize {
        self.partner[h]
    }

    pub fn partners(&self) -> &[usize] {
        &self.partner
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn num_open_branches(&self) -> usize {
        self.branches.iter().filter(|b| !b.closed).count()
    }

    pub fn num_closed_branches(&self) -> usize {
        self.branches.iter().filter(|b| b.closed).count()
    }

    /// Half-edge id of the `i`-th boundary endpoint.
    pub fn endpoint_half_edge(&self, i: usize) -> usize {
        4 * self.n_crossings + i
    }

    pub fn slot(&self, h: usize) -> Slot {
        if h < 4 * self.n_crossings {
            Slot::Crossing {
                crossing: h / 4,
                slot: h % 4,
            }
        } else {
            Slot::Endpoint(h - 4 * self.n_crossings)
        }
    }

    /// The half-edge continuing the same strand through a crossing.
    pub fn opposite(h: usize) -> usize {
        (h & !3) | ((h + 2) & 3)
    }

    /// Number of connected components of the union of branches.
    pub fn components(&self) -> usize {
        let mut uf = UnionFind::new(self.n_crossings + self.n_endpoints);
        let vertex = |h: usize| match self.slot(h) {
            Slot::Crossing { crossing, .. } => crossing,
            Slot::Endpoint(i) => self.n_crossings + i,
        };
        for h in 0..self.partner.len() {
            uf.union(vertex(h), vertex(self.partner[h]));
        }
        uf.count()
    }

    pub fn is_connected(&self) -> bool {
        self.components() == 1
    }

    pub(crate) fn require_connected(&self) -> Result<(), DivideError> {
        match self.components() {
            1 => Ok(()),
            components => Err(DivideError::Disconnected { components }),
        }
    }

    fn walk_branches(&self) -> Result<Vec<Branch>, DivideError> {
        let n = self.partner.len();
        let mut seen = vec![false; n];
        let mut branches = Vec::new();
        for i in 0..self.n_endpoints {
            let start = self.endpoint_half_edge(i);
            if seen[start] {
                continue;
            }
            let mut walk = vec![start];
            seen[start] = true;
            let mut h = self.partner[start];
            loop {
                seen[h] = true;
                walk.push(h);
                if h >= 4 * self.n_crossings {
                    break;
                }
                let out = Self::opposite(h);
                seen[out] = true;
                walk.push(out);
                h = self.partner[out];
            }
            branches.push(Branch {
                closed: false,
                walk,
            });
        }
        for start in 0..4 * self.n_crossings {
            if seen[start] {
                continue;
            }
            let mut walk = Vec::new();
            let mut h = start;
            while !seen[h] {
                let out = Self::opposite(h);
                seen[h] = true;
                seen[out] = true;
                walk.push(h);
                walk.push(out);
                h = self.partner[out];
            }
            if h != start {
                return Err(DivideError::InconsistentStrands(start as u64, h as u64));
            }
            branches.push(Branch { closed: true, walk });
        }
        Ok(branches)
    }

    /// Emits the wire form with canonical crossing order and dense ids.
    pub fn to_raw(&self) -> RawDivide {
        let canon = canonical_label(self);
        let mut new_id = vec![usize::MAX; self.partner.len()];
        for (rank, &c) in canon.crossing_order.iter().enumerate() {
            let entry = canon.crossing_entry[c];
            for k in 0..4 {
                new_id[4 * c + (entry + k) % 4] = 4 * rank + k;
            }
        }
        let k = self.n_endpoints;
        let first = canon.endpoint_order.first().copied().unwrap_or(0);
        for j in 0..k {
            let i = (first + j) % k;
            new_id[self.endpoint_half_edge(i)] = 4 * self.n_crossings + j;
        }
        let crossings = (0..self.n_crossings)
            .map(|rank| (0..4).map(|s| (4 * rank + s) as u64).collect())
            .collect();
        let endpoints = (0..k).map(|j| (4 * self.n_crossings + j) as u64).collect();
        let mut edges: Vec<Vec<u64>> = (0..self.partner.len())
            .filter(|&h| h < self.partner[h])
            .map(|h| {
                let (a, b) = (new_id[h], new_id[self.partner[h]]);
                vec![a.min(b) as u64, a.max(b) as u64]
            })
            .collect();
        edges.sort();
        RawDivide {
            crossings,
            endpoints,
            edges,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_raw()).expect("divide serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, DivideJsonError> {
        let raw: RawDivide = serde_json::from_str(text)?;
        Ok(build_divide(&raw)?)
    }
}

/// Errors reading a divide document.
#[derive(Debug, thiserror::Error)]
pub enum DivideJsonError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Invalid(#[from] DivideError),
}

/// Validates wire data and returns the divide with dense ids.
///
/// Branch walks are derived from the strand-through pairing at crossings.
pub fn build_divide(raw: &RawDivide) -> Result<Divide, DivideError> {
    let mut dense: HashMap<u64, usize> = HashMap::new();
    for (index, record) in raw.crossings.iter().enumerate() {
        if record.len() != 4 {
            return Err(DivideError::NonQuadrivalent {
                index,
                degree: record.len(),
            });
        }
        for (slot, &h) in record.iter().enumerate() {
            if dense.insert(h, 4 * index + slot).is_some() {
                return Err(DivideError::DuplicateHalfEdge(h));
            }
        }
    }
    let n_crossings = raw.crossings.len();
    for (i, &h) in raw.endpoints.iter().enumerate() {
        if dense.insert(h, 4 * n_crossings + i).is_some() {
            return Err(DivideError::DuplicateHalfEdge(h));
        }
    }
    let n = dense.len();
    let mut partner = vec![usize::MAX; n];
    for edge in &raw.edges {
        let ids: Vec<usize> = edge
            .iter()
            .map(|h| dense.get(h).copied().ok_or(DivideError::UnknownHalfEdge(*h)))
            .collect::<Result<_, _>>()?;
        if ids.len() != 2 {
            return Err(DivideError::NonQuadrivalent {
                index: usize::MAX,
                degree: ids.len(),
            });
        }
        let (a, b) = (ids[0], ids[1]);
        if a == b {
            return Err(DivideError::DuplicateHalfEdge(edge[0]));
        }
        for (&x, &raw_id) in [a, b].iter().zip(edge.iter()) {
            if partner[x] != usize::MAX {
                return Err(DivideError::DuplicateHalfEdge(raw_id));
            }
        }
        if a < 4 * n_crossings && b < 4 * n_crossings && Divide::opposite(a) == b {
            return Err(DivideError::InconsistentStrands(edge[0], edge[1]));
        }
        partner[a] = b;
        partner[b] = a;
    }
    if let Some(h) = partner.iter().position(|&p| p == usize::MAX) {
        let raw_id = dense
            .iter()
            .find(|(_, &v)| v == h)
            .map(|(&k, _)| k)
            .unwrap_or(h as u64);
        return Err(DivideError::DanglingHalfEdge(raw_id));
    }
    Divide::from_partner(n_crossings, raw.endpoints.len(), partner)
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    pub(crate) fn count(&mut self) -> usize {
        (0..self.parent.len()).filter(|&x| self.find(x) == x).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chord() -> RawDivide {
        RawDivide {
            crossings: vec![],
            endpoints: vec![0, 1],
            edges: vec![vec![0, 1]],
        }
    }

    /// One crossing with a loop joining two adjacent slots.
    pub(crate) fn teardrop() -> RawDivide {
        RawDivide {
            crossings: vec![vec![10, 11, 12, 13]],
            endpoints: vec![20, 21],
            edges: vec![vec![10, 11], vec![12, 20], vec![13, 21]],
        }
    }

    #[test]
    fn chord_is_one_open_branch() {
        let d = build_divide(&chord()).unwrap();
        assert_eq!(d.num_crossings(), 0);
        assert_eq!(d.branches().len(), 1);
        assert!(!d.branches()[0].closed);
        assert_eq!(d.num_half_edges() / 2, 1);
    }

    #[test]
    fn teardrop_visits_its_crossing_twice() {
        let d = build_divide(&teardrop()).unwrap();
        assert_eq!(d.num_crossings(), 1);
        assert_eq!(d.num_open_branches(), 1);
        assert_eq!(d.branches()[0].passages().collect::<Vec<_>>(), vec![0, 0]);
    }

    #[test]
    fn interlaced_loops_are_not_planar() {
        // dipole whose rotation agrees at both ends: a torus map
        let raw = RawDivide {
            crossings: vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]],
            endpoints: vec![],
            edges: vec![vec![0, 4], vec![1, 5], vec![2, 6], vec![3, 7]],
        };
        assert!(matches!(build_divide(&raw), Err(DivideError::NonPlanar { .. })));
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        let mut raw = teardrop();
        raw.crossings[0].pop();
        assert!(matches!(
            build_divide(&raw),
            Err(DivideError::NonQuadrivalent { .. })
        ));

        let mut raw = teardrop();
        raw.edges.pop();
        assert!(matches!(build_divide(&raw), Err(DivideError::DanglingHalfEdge(_))));

        let mut raw = teardrop();
        raw.edges[0] = vec![10, 99];
        assert_eq!(build_divide(&raw), Err(DivideError::UnknownHalfEdge(99)));

        let mut raw = teardrop();
        raw.edges = vec![vec![10, 12], vec![11, 20], vec![13, 21]];
        assert_eq!(build_divide(&raw), Err(DivideError::InconsistentStrands(10, 12)));
    }

    #[test]
    fn json_round_trip_keeps_key_order() {
        let d = build_divide(&teardrop()).unwrap();
        let text = d.to_json();
        assert!(text.starts_with("{\"crossings\":"));
        let back = Divide::from_json(&text).unwrap();
        assert_eq!(canonical_label(&back).key, canonical_label(&d).key);
    }
}
