use std::collections::VecDeque;

use super::{ClosedMap, Divide};

const UNSET: usize = usize::MAX;

/// Canonical form of a divide up to disk homeomorphism (either orientation)
/// and relabeling or reversal of branches.
///
/// Besides the key, the winning traversal fixes a total order on crossings,
/// endpoints and darts; every basis ordering downstream derives from it.
#[derive(Debug, Clone)]
pub struct Canonical {
    pub key: String,
    /// Crossings in canonical order.
    pub crossing_order: Vec<usize>,
    /// Inverse of `crossing_order`.
    pub crossing_rank: Vec<usize>,
    /// Slot through which each crossing was first reached.
    pub crossing_entry: Vec<usize>,
    /// Endpoint indices in canonical order.
    pub endpoint_order: Vec<usize>,
    /// Position of every dart of the closed map in the canonical traversal.
    pub dart_rank: Vec<usize>,
    /// Root dart of the winning traversal; it lies on the outer face.
    pub root: usize,
    pub orientation: i8,
    /// The face of the closed map playing the role of the outside.
    pub outer_face: usize,
}

struct Traversal {
    code: Vec<u32>,
    vertex_order: Vec<usize>,
    entry: Vec<usize>,
    darts: Vec<usize>,
}

fn traverse(map: &ClosedMap, root: usize, orientation: i8, label: &mut [usize]) -> Traversal {
    let mut entry = vec![UNSET; map.num_vertices()];
    let mut code = Vec::new();
    let mut vertex_order = Vec::new();
    let mut darts = Vec::new();
    let mut queue = VecDeque::new();

    let v0 = map.vertex(root);
    label[v0] = 0;
    entry[v0] = root;
    vertex_order.push(v0);
    queue.push_back(v0);
    while let Some(v) = queue.pop_front() {
        let deg = map.degree(v);
        code.push(deg as u32);
        let mut d = entry[v];
        for _ in 0..deg {
            let t = map.twin(d);
            let w = map.vertex(t);
            if label[w] == UNSET {
                label[w] = vertex_order.len();
                entry[w] = t;
                vertex_order.push(w);
                queue.push_back(w);
            }
            let mut offset = 0;
            let mut probe = entry[w];
            while probe != t {
                probe = map.rot(probe, orientation);
                offset += 1;
            }
            code.push(map.is_boundary(d) as u32);
            code.push(label[w] as u32);
            code.push(offset);
            darts.push(d);
            d = map.rot(d, orientation);
        }
    }
    Traversal {
        code,
        vertex_order,
        entry,
        darts,
    }
}

fn best_traversal(
    map: &ClosedMap,
    roots: &[(usize, i8)],
) -> Option<(usize, i8, Traversal)> {
    let mut best: Option<(usize, i8, Traversal)> = None;
    let mut label = vec![UNSET; map.num_vertices()];
    for &(root, orientation) in roots {
        label.iter_mut().for_each(|x| *x = UNSET);
        let t = traverse(map, root, orientation, &mut label);
        let better = match &best {
            None => true,
            Some((_, _, b)) => t.code < b.code,
        };
        if better {
            best = Some((root, orientation, t));
        }
    }
    best
}

/// Roots lying on `face` for both orientations.
fn face_roots(map: &ClosedMap, face: usize) -> Vec<(usize, i8)> {
    let darts = &map.faces()[face];
    darts
        .iter()
        .map(|&d| (d, 1))
        .chain(darts.iter().map(|&d| (map.twin(d), -1)))
        .collect()
}

pub fn canonical_label(d: &Divide) -> Canonical {
    let map = ClosedMap::new(d);
    canonical_of_map(d, &map)
}

pub(crate) fn canonical_of_map(d: &Divide, map: &ClosedMap) -> Canonical {
    let n_darts = map.num_darts();
    if n_darts == 0 {
        return Canonical {
            key: "D0E0:".to_string(),
            crossing_order: vec![],
            crossing_rank: vec![],
            crossing_entry: vec![],
            endpoint_order: vec![],
            dart_rank: vec![],
            root: 0,
            orientation: 1,
            outer_face: 0,
        };
    }

    // candidate outer faces
    let candidates: Vec<usize> = match map.outer_face() {
        Some(f) => vec![f],
        None => {
            let longest = map.faces().iter().map(Vec::len).max().unwrap_or(0);
            (0..map.faces().len())
                .filter(|&f| map.faces()[f].len() == longest)
                .collect()
        }
    };
    let mut best: Option<(usize, i8, Traversal, usize)> = None;
    for &f in &candidates {
        if let Some((root, o, t)) = best_traversal(map, &face_roots(map, f)) {
            let better = match &best {
                None => true,
                Some((_, _, b, _)) => t.code < b.code,
            };
            if better {
                best = Some((root, o, t, f));
            }
        }
    }
    let (root, orientation, main, outer_face) = best.expect("at least one root");

    // components not reachable from the outer face (isolated closed curves)
    let mut reached = vec![false; map.num_vertices()];
    for &v in &main.vertex_order {
        reached[v] = true;
    }
    let mut extra: Vec<Traversal> = Vec::new();
    loop {
        let Some(v) = (0..map.num_vertices()).find(|&v| !reached[v]) else {
            break;
        };
        // all darts of the component
        let start = (0..n_darts)
            .find(|&x| map.vertex(x) == v)
            .expect("vertex has darts");
        let mut label = vec![UNSET; map.num_vertices()];
        let probe = traverse(map, start, 1, &mut label);
        let comp_roots: Vec<(usize, i8)> = probe
            .darts
            .iter()
            .flat_map(|&x| [(x, 1), (x, -1)])
            .collect();
        let (_, _, t) = best_traversal(map, &comp_roots).expect("component has darts");
        for &w in &t.vertex_order {
            reached[w] = true;
        }
        extra.push(t);
    }
    extra.sort_by(|a, b| a.code.cmp(&b.code));

    let join = |code: &[u32]| {
        code.iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(".")
    };
    let mut key = format!("D{}E{}:", d.num_crossings(), d.num_endpoints());
    key.push_str(&join(&main.code));
    for t in &extra {
        key.push('|');
        key.push_str(&join(&t.code));
    }

    let c = d.num_crossings();
    let mut crossing_order = Vec::with_capacity(c);
    let mut endpoint_order = Vec::with_capacity(d.num_endpoints());
    let mut crossing_entry = vec![0; c];
    let mut dart_rank = vec![UNSET; n_darts];
    let mut next_rank = 0;
    for t in std::iter::once(&main).chain(extra.iter()) {
        for &v in &t.vertex_order {
            if v < c {
                crossing_order.push(v);
                crossing_entry[v] = t.entry[v] % 4;
            } else {
                endpoint_order.push(v - c);
            }
        }
        for &x in &t.darts {
            dart_rank[x] = next_rank;
            next_rank += 1;
        }
    }
    let mut crossing_rank = vec![0; c];
    for (rank, &x) in crossing_order.iter().enumerate() {
        crossing_rank[x] = rank;
    }
    Canonical {
        key,
        crossing_order,
        crossing_rank,
        crossing_entry,
        endpoint_order,
        dart_rank,
        root,
        orientation,
        outer_face,
    }
}

/// Which symmetries a divide key forgets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KeyOptions {
    /// Identify a divide with its mirror image.
    pub reflections: bool,
    /// Identify a branch with its reverse.
    pub branch_reversal: bool,
}

impl Default for KeyOptions {
    fn default() -> Self {
        KeyOptions {
            reflections: true,
            branch_reversal: true,
        }
    }
}

/// Key of `d` under a coarser or finer equivalence than [`canonical_label`].
///
/// With both options set it coincides with the canonical key. Only the
/// component of the outer face is encoded beyond the default case; this is
/// meant for connected divides.
pub fn equivalence_key(d: &Divide, options: KeyOptions) -> String {
    if options == KeyOptions::default() {
        return canonical_label(d).key;
    }
    let map = ClosedMap::new(d);
    if map.num_darts() == 0 {
        return "D0E0:".to_string();
    }
    let c = d.num_crossings();
    let starts: Vec<usize> = d
        .branches()
        .iter()
        .filter(|b| !b.closed)
        .map(|b| c + (b.walk[0] - 4 * c))
        .collect();
    let faces: Vec<usize> = match map.outer_face() {
        Some(f) => vec![f],
        None => {
            let longest = map.faces().iter().map(Vec::len).max().unwrap_or(0);
            (0..map.faces().len())
                .filter(|&f| map.faces()[f].len() == longest)
                .collect()
        }
    };
    let mut best: Option<Vec<u32>> = None;
    let mut label = vec![UNSET; map.num_vertices()];
    for f in faces {
        for (root, orientation) in face_roots(&map, f) {
            if orientation < 0 && !options.reflections {
                continue;
            }
            label.iter_mut().for_each(|x| *x = UNSET);
            let mut t = traverse(&map, root, orientation, &mut label);
            if !options.branch_reversal {
                let mut marks: Vec<u32> = starts.iter().map(|&v| label[v] as u32).collect();
                marks.sort();
                t.code.push(u32::MAX);
                t.code.extend(marks);
            }
            if best.as_ref().map_or(true, |b| t.code < *b) {
                best = Some(t.code);
            }
        }
    }
    let code = best.expect("at least one root");
    let body: Vec<String> = code.iter().map(u32::to_string).collect();
    format!(
        "D{}E{}{}{}:{}",
        d.num_crossings(),
        d.num_endpoints(),
        if options.reflections { "" } else { "+" },
        if options.branch_reversal { "" } else { ">" },
        body.join(".")
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divide::{build_divide, RawDivide};

    fn relabel(raw: &RawDivide, f: impl Fn(u64) -> u64) -> RawDivide {
        RawDivide {
            crossings: raw.crossings.iter().map(|c| c.iter().map(|&h| f(h)).collect()).collect(),
            endpoints: raw.endpoints.iter().map(|&h| f(h)).collect(),
            edges: raw.edges.iter().map(|e| e.iter().map(|&h| f(h)).collect()).collect(),
        }
    }

    fn mirror(raw: &RawDivide) -> RawDivide {
        RawDivide {
            crossings: raw
                .crossings
                .iter()
                .map(|c| c.iter().rev().copied().collect())
                .collect(),
            endpoints: raw.endpoints.iter().rev().copied().collect(),
            edges: raw.edges.clone(),
        }
    }

    fn sample() -> RawDivide {
        // two kinks on the same side of an arc
        RawDivide {
            crossings: vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]],
            endpoints: vec![8, 9],
            edges: vec![vec![8, 2], vec![0, 1], vec![3, 6], vec![4, 5], vec![7, 9]],
        }
    }

    #[test]
    fn invariant_under_relabeling_and_mirror() {
        let raw = sample();
        let d = build_divide(&raw).unwrap();
        let key = canonical_label(&d).key;
        let shifted = relabel(&raw, |h| 1000 - 3 * h);
        assert_eq!(canonical_label(&build_divide(&shifted).unwrap()).key, key);
        let m = mirror(&raw);
        assert_eq!(canonical_label(&build_divide(&m).unwrap()).key, key);
        // rotating the slot lists of a crossing is a relabeling too
        let mut rotated = raw.clone();
        rotated.crossings[1].rotate_left(1);
        assert_eq!(canonical_label(&build_divide(&rotated).unwrap()).key, key);
    }

    #[test]
    fn orders_are_permutations() {
        let d = build_divide(&sample()).unwrap();
        let c = canonical_label(&d);
        let mut order = c.crossing_order.clone();
        order.sort();
        assert_eq!(order, vec![0, 1]);
        assert!(c.dart_rank.iter().all(|&r| r != UNSET));
    }
}
