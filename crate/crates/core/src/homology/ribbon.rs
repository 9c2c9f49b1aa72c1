use serde::{Deserialize, Serialize};

use crate::divide::{Divide, Slot};
use crate::error::HomologyError;

/// Vertex of the roundabout ribbon graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RibbonVertex {
    /// T-junction on the roundabout of `crossing`, facing `slot`.
    Junction { crossing: usize, slot: usize },
    /// Stub at a boundary endpoint.
    Stub { endpoint: usize },
}

/// A strip between two vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RibbonEdge {
    pub ends: [usize; 2],
    pub half_twist: bool,
}

/// Ribbon-graph model of the Milnor fiber.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RibbonSurface {
    pub vertices: Vec<RibbonVertex>,
    pub edges: Vec<RibbonEdge>,
    /// Each boundary circle as the cyclic list of edges it runs along.
    pub boundary: Vec<Vec<usize>>,
    pub orientable: bool,
    pub euler_char: i64,
    pub genus: i64,
    pub boundary_count: usize,
}

/// Replaces every double point by a roundabout of four T-junctions and
/// every road section by a strip with a half twist.
pub fn ribbon_fiber(d: &Divide) -> Result<RibbonSurface, HomologyError> {
    d.require_connected()?;
    let c = d.num_crossings();
    let k = d.num_endpoints();
    // darts: junction (c, s) owns 3 darts [out, toward s+1, toward s-1]; stubs one each
    let junction = |x: usize, s: usize| 4 * x + s;
    let n_vertices = 4 * c + k;
    let n_darts = 12 * c + k;
    let dart_vertex = |h: usize| if h < 12 * c { h / 3 } else { 4 * c + (h - 12 * c) };
    let out_dart = |h: usize| match d.slot(h) {
        Slot::Crossing { crossing, slot } => 3 * junction(crossing, slot),
        Slot::Endpoint(i) => 12 * c + i,
    };
    let mut twin = vec![usize::MAX; n_darts];
    let mut edges = Vec::new();
    let mut edge_of = vec![usize::MAX; n_darts];
    let mut add_edge = |a: usize, b: usize, twin: &mut Vec<usize>| {
        twin[a] = b;
        twin[b] = a;
        edge_of[a] = edges.len();
        edge_of[b] = edges.len();
        edges.push(RibbonEdge {
            ends: [dart_vertex(a), dart_vertex(b)],
            half_twist: true,
        });
    };
    for h in 0..d.num_half_edges() {
        let p = d.partner(h);
        if h < p {
            add_edge(out_dart(h), out_dart(p), &mut twin);
        }
    }
    for x in 0..c {
        for s in 0..4 {
            let here = 3 * junction(x, s) + 1;
            let there = 3 * junction(x, (s + 1) % 4) + 2;
            add_edge(here, there, &mut twin);
        }
    }
    let rot = |h: usize, dir: i8| -> usize {
        if h >= 12 * c {
            return h;
        }
        let base = h - h % 3;
        let off = h % 3;
        if dir > 0 {
            base + (off + 1) % 3
        } else {
            base + (off + 2) % 3
        }
    };
    let twisted: Vec<bool> = edges.iter().map(|e| e.half_twist).collect();

    // boundary circles: orbits of (dart, side), each circle traced once per direction
    let mut seen = vec![[false; 2]; n_darts];
    let mut circles = Vec::new();
    for start in 0..n_darts {
        for start_side in [0usize, 1] {
            if seen[start][start_side] {
                continue;
            }
            let mut walk = Vec::new();
            let (mut h, mut side) = (start, start_side);
            while !seen[h][side] {
                seen[h][side] = true;
                let e = edge_of[h];
                walk.push(e);
                let t = twin[h];
                let s = if twisted[e] { 1 - side } else { side };
                h = rot(t, if s == 0 { 1 } else { -1 });
                side = s;
            }
            circles.push(walk);
        }
    }
    assert!(circles.len() % 2 == 0, "boundary orbits come in pairs");
    // keep one traversal per circle: the one containing the smallest (edge) first seen
    let mut boundary: Vec<Vec<usize>> = Vec::new();
    let mut used = vec![false; circles.len()];
    for i in 0..circles.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut set_i = circles[i].clone();
        set_i.sort();
        if let Some(j) = (i + 1..circles.len()).find(|&j| {
            if used[j] {
                return false;
            }
            let mut s = circles[j].clone();
            s.sort();
            s == set_i
        }) {
            used[j] = true;
        }
        boundary.push(circles[i].clone());
    }

    // orientability: twisted strips must join opposite colours
    let mut colour = vec![None::<bool>; n_vertices];
    let mut orientable = true;
    for root in 0..n_vertices {
        if colour[root].is_some() {
            continue;
        }
        colour[root] = Some(false);
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for e in edges.iter().filter(|e| e.ends.contains(&v)) {
                let w = if e.ends[0] == v { e.ends[1] } else { e.ends[0] };
                let want = colour[v].unwrap() ^ e.half_twist;
                match colour[w] {
                    None => {
                        colour[w] = Some(want);
                        stack.push(w);
                    }
                    Some(cw) if cw != want => orientable = false,
                    _ => {}
                }
            }
        }
    }

    let euler_char = n_vertices as i64 - edges.len() as i64;
    let boundary_count = boundary.len();
    let genus = (2 - euler_char - boundary_count as i64) / 2;
    let vertices = (0..n_vertices)
        .map(|v| {
            if v < 4 * c {
                RibbonVertex::Junction {
                    crossing: v / 4,
                    slot: v % 4,
                }
            } else {
                RibbonVertex::Stub { endpoint: v - 4 * c }
            }
        })
        .collect();
    Ok(RibbonSurface {
        vertices,
        edges,
        boundary,
        orientable,
        euler_char,
        genus,
        boundary_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divide::{build_divide, RawDivide};
    use crate::generators::chebyshev_divide;

    #[test]
    fn chord_is_a_disk() {
        let d = build_divide(&RawDivide {
            crossings: vec![],
            endpoints: vec![0, 1],
            edges: vec![vec![0, 1]],
        })
        .unwrap();
        let r = ribbon_fiber(&d).unwrap();
        assert_eq!((r.euler_char, r.genus, r.boundary_count), (1, 0, 1));
        assert!(r.orientable);
    }

    #[test]
    fn torus_knot_fibers() {
        for (p, q) in [(2, 3), (3, 4), (2, 7)] {
            let d = chebyshev_divide(p, q).unwrap();
            let r = ribbon_fiber(&d).unwrap();
            let delta = ((p - 1) * (q - 1) / 2) as i64;
            assert_eq!(r.edges.len() as i64, 6 * delta + 1);
            assert!(r.orientable);
            assert_eq!(r.boundary_count, 1);
            assert_eq!(r.genus, delta);
            assert_eq!(r.euler_char, 1 - 2 * delta);
        }
    }
}
