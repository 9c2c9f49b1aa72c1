use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::canon::canonical_of_map;
use super::{Canonical, ClosedMap, Divide};
use crate::error::DivideError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// A complementary region of the divide in the disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    /// Face id in the closed map.
    pub face: usize,
    /// Divide half-edges along the region, face on their left, in circuit order.
    pub circuit: Vec<usize>,
    /// `(crossing, sectors of that crossing inside the region)`, sorted by crossing.
    pub corners: Vec<(usize, usize)>,
    pub touches_boundary: bool,
    pub sign: Sign,
}

impl Region {
    pub fn is_bounded(&self) -> bool {
        !self.touches_boundary
    }

    pub fn sectors_at(&self, crossing: usize) -> usize {
        self.corners
            .iter()
            .find(|(c, _)| *c == crossing)
            .map_or(0, |(_, n)| *n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalMarker {
    Maximum { region: usize },
    Minimum { region: usize },
    Saddle { crossing: usize },
}

/// Regions in canonical order together with their chessboard signs.
#[derive(Debug, Clone)]
pub struct RegionData {
    pub regions: Vec<Region>,
    pub critical_assignment: Vec<CriticalMarker>,
    /// Region index of every dart of the closed map (`usize::MAX` on the outside).
    pub region_of_dart: Vec<usize>,
    pub canonical: Canonical,
}

impl RegionData {
    pub fn bounded(&self) -> impl Iterator<Item = (usize, &Region)> {
        self.regions.iter().enumerate().filter(|(_, r)| r.is_bounded())
    }
}

/// Region structure, chessboard signs and critical-point markers.
///
/// The unbounded region on the inner side of the canonical root dart is `-`;
/// when the divide has no endpoints the outer face itself is the anchor.
pub fn regions(d: &Divide) -> Result<RegionData, DivideError> {
    d.require_connected()?;
    let map = ClosedMap::new(d);
    let canonical = canonical_of_map(d, &map);
    let outer = canonical.outer_face;
    let has_endpoints = d.num_endpoints() > 0;

    // regions: faces other than the outside, in canonical dart order
    let mut faces: Vec<usize> = (0..map.faces().len())
        .filter(|&f| !(has_endpoints && f == outer))
        .collect();
    let first_rank = |f: usize| {
        map.faces()[f]
            .iter()
            .map(|&x| canonical.dart_rank[x])
            .min()
            .unwrap_or(usize::MAX)
    };
    faces.sort_by_key(|&f| first_rank(f));
    let mut region_of_face = vec![usize::MAX; map.faces().len()];
    for (i, &f) in faces.iter().enumerate() {
        region_of_face[f] = i;
    }

    let h_count = d.num_half_edges();
    let c = d.num_crossings();
    let mut regions: Vec<Region> = faces
        .iter()
        .map(|&f| {
            let darts = &map.faces()[f];
            let circuit: Vec<usize> = darts.iter().copied().filter(|&x| x < h_count).collect();
            let mut corners: Vec<(usize, usize)> = Vec::new();
            for &x in &circuit {
                if x < 4 * c {
                    let crossing = x / 4;
                    match corners.iter_mut().find(|(cc, _)| *cc == crossing) {
                        Some(entry) => entry.1 += 1,
                        None => corners.push((crossing, 1)),
                    }
                }
            }
            corners.sort();
            let touches_boundary =
                darts.iter().any(|&x| map.is_boundary(x)) || (!has_endpoints && f == outer);
            Region {
                face: f,
                circuit,
                corners,
                touches_boundary,
                sign: Sign::Minus,
            }
        })
        .collect();

    // chessboard colouring across divide edges
    let anchor_face = if has_endpoints {
        // inner side of the root boundary edge
        let root = canonical.root;
        if map.face_of(root) == outer {
            map.face_of(map.twin(root))
        } else {
            map.face_of(root)
        }
    } else {
        outer
    };
    let anchor = region_of_face[anchor_face];
    let mut sign: Vec<Option<Sign>> = vec![None; regions.len()];
    sign[anchor] = Some(Sign::Minus);
    let mut queue = VecDeque::from([anchor]);
    while let Some(r) = queue.pop_front() {
        let s = sign[r].expect("queued regions are signed");
        for &x in &map.faces()[regions[r].face] {
            if x >= h_count {
                continue;
            }
            let other = region_of_face[map.face_of(d.partner(x))];
            match sign[other] {
                None => {
                    sign[other] = Some(s.flip());
                    queue.push_back(other);
                }
                Some(t) => assert_ne!(t, s, "divide regions admit a chessboard colouring"),
            }
        }
    }
    for (r, s) in regions.iter_mut().zip(&sign) {
        r.sign = s.expect("connected divide: every region reached");
    }

    let mut critical_assignment = Vec::new();
    for (i, r) in regions.iter().enumerate() {
        if r.is_bounded() && r.sign == Sign::Plus {
            critical_assignment.push(CriticalMarker::Maximum { region: i });
        }
    }
    for &x in &canonical.crossing_order {
        critical_assignment.push(CriticalMarker::Saddle { crossing: x });
    }
    for (i, r) in regions.iter().enumerate() {
        if r.is_bounded() && r.sign == Sign::Minus {
            critical_assignment.push(CriticalMarker::Minimum { region: i });
        }
    }

    let region_of_dart = (0..map.num_darts())
        .map(|x| region_of_face[map.face_of(x)])
        .collect();

    Ok(RegionData {
        regions,
        critical_assignment,
        region_of_dart,
        canonical,
    })
}

/// Count invariants of a connected divide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivideCounts {
    /// Double points.
    pub d: usize,
    pub r_open: usize,
    pub r_closed: usize,
    /// Bounded regions.
    pub b: usize,
    /// First Betti number of the Milnor fiber.
    pub mu: usize,
    pub mu_plus: usize,
    pub mu_zero: usize,
    pub mu_minus: usize,
}

pub fn counts(d: &Divide) -> Result<DivideCounts, DivideError> {
    let data = regions(d)?;
    Ok(counts_from_regions(d, &data))
}

pub(crate) fn counts_from_regions(d: &Divide, data: &RegionData) -> DivideCounts {
    let mu_plus = data
        .bounded()
        .filter(|(_, r)| r.sign == Sign::Plus)
        .count();
    let mu_minus = data
        .bounded()
        .filter(|(_, r)| r.sign == Sign::Minus)
        .count();
    let b = mu_plus + mu_minus;
    DivideCounts {
        d: d.num_crossings(),
        r_open: d.num_open_branches(),
        r_closed: d.num_closed_branches(),
        b,
        mu: b + d.num_crossings(),
        mu_plus,
        mu_zero: d.num_crossings(),
        mu_minus,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divide::{build_divide, RawDivide};

    fn chord() -> Divide {
        build_divide(&RawDivide {
            crossings: vec![],
            endpoints: vec![0, 1],
            edges: vec![vec![0, 1]],
        })
        .unwrap()
    }

    fn teardrop() -> Divide {
        build_divide(&RawDivide {
            crossings: vec![vec![0, 1, 2, 3]],
            endpoints: vec![4, 5],
            edges: vec![vec![0, 1], vec![2, 4], vec![3, 5]],
        })
        .unwrap()
    }

    #[test]
    fn teardrop_has_one_bounded_region() {
        let data = regions(&teardrop()).unwrap();
        assert_eq!(data.regions.len(), 3);
        assert_eq!(data.bounded().count(), 1);
        assert_eq!(data.regions.iter().filter(|r| r.touches_boundary).count(), 2);
        // one saddle and one extremum
        assert_eq!(data.critical_assignment.len(), 2);
        let c = counts(&teardrop()).unwrap();
        assert_eq!((c.d, c.r_open, c.b, c.mu), (1, 1, 1, 2));
    }

    #[test]
    fn chord_has_no_bounded_region() {
        let data = regions(&chord()).unwrap();
        assert_eq!(data.regions.len(), 2);
        assert_eq!(data.bounded().count(), 0);
        assert!(data.critical_assignment.is_empty());
        let c = counts(&chord()).unwrap();
        assert_eq!((c.d, c.r_open, c.b, c.mu), (0, 1, 0, 0));
    }

    #[test]
    fn signs_alternate_across_edges() {
        let d = teardrop();
        let data = regions(&d).unwrap();
        for h in 0..d.num_half_edges() {
            let a = data.region_of_dart[h];
            let b = data.region_of_dart[d.partner(h)];
            assert_ne!(data.regions[a].sign, data.regions[b].sign);
        }
    }

    #[test]
    fn disconnected_divides_are_rejected() {
        let two_chords = build_divide(&RawDivide {
            crossings: vec![],
            endpoints: vec![0, 1, 2, 3],
            edges: vec![vec![0, 1], vec![2, 3]],
        })
        .unwrap();
        assert_eq!(
            regions(&two_chords).unwrap_err(),
            DivideError::Disconnected { components: 2 }
        );
    }
}
