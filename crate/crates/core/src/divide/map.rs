use super::{Divide, Slot, UnionFind};
use crate::error::DivideError;

/// A divide closed off by the boundary circle of the disk.
///
/// Darts `0..H` are the divide's half-edges. Each endpoint `i` adds two
/// boundary darts: `H + 2i` runs counterclockwise to endpoint `i + 1`,
/// `H + 2i + 1` clockwise to endpoint `i - 1`. Rotation at an endpoint is
/// `[ccw boundary dart, divide half-edge, cw boundary dart]`.
///
/// Faces are traced with the face on the left: `next(d) = rot_prev(twin(d))`.
/// The face outside the circle consists of the clockwise boundary darts.
#[derive(Debug, Clone)]
pub struct ClosedMap {
    pub(crate) n_crossings: usize,
    pub(crate) n_endpoints: usize,
    pub(crate) twin: Vec<usize>,
    pub(crate) vertex: Vec<usize>,
    pub(crate) rot_next: Vec<usize>,
    pub(crate) rot_prev: Vec<usize>,
    pub(crate) boundary: Vec<bool>,
    pub(crate) face_of: Vec<usize>,
    pub(crate) faces: Vec<Vec<usize>>,
}

impl ClosedMap {
    pub fn new(d: &Divide) -> Self {
        let c = d.num_crossings();
        let k = d.num_endpoints();
        let h_count = d.num_half_edges();
        let total = h_count + 2 * k;
        let mut twin = vec![0; total];
        let mut vertex = vec![0; total];
        let mut rot_next = vec![0; total];
        let mut rot_prev = vec![0; total];
        let mut boundary = vec![false; total];

        for h in 0..h_count {
            twin[h] = d.partner(h);
            match d.slot(h) {
                Slot::Crossing { crossing, slot } => {
                    vertex[h] = crossing;
                    rot_next[h] = 4 * crossing + (slot + 1) % 4;
                    rot_prev[h] = 4 * crossing + (slot + 3) % 4;
                }
                Slot::Endpoint(i) => vertex[h] = c + i,
            }
        }
        for i in 0..k {
            let h = d.endpoint_half_edge(i);
            let ccw = h_count + 2 * i;
            let cw = ccw + 1;
            let next_cw = h_count + 2 * ((i + 1) % k) + 1;
            twin[ccw] = next_cw;
            twin[next_cw] = ccw;
            boundary[ccw] = true;
            boundary[cw] = true;
            vertex[ccw] = c + i;
            vertex[cw] = c + i;
            let ring = [ccw, h, cw];
            for j in 0..3 {
                rot_next[ring[j]] = ring[(j + 1) % 3];
                rot_prev[ring[j]] = ring[(j + 2) % 3];
            }
        }

        let mut face_of = vec![usize::MAX; total];
        let mut faces = Vec::new();
        for start in 0..total {
            if face_of[start] != usize::MAX {
                continue;
            }
            let id = faces.len();
            let mut face = Vec::new();
            let mut dart = start;
            while face_of[dart] == usize::MAX {
                face_of[dart] = id;
                face.push(dart);
                dart = rot_prev[twin[dart]];
            }
            faces.push(face);
        }

        ClosedMap {
            n_crossings: c,
            n_endpoints: k,
            twin,
            vertex,
            rot_next,
            rot_prev,
            boundary,
            face_of,
            faces,
        }
    }

    pub fn num_darts(&self) -> usize {
        self.twin.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.n_crossings + self.n_endpoints
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn face_of(&self, dart: usize) -> usize {
        self.face_of[dart]
    }

    pub fn twin(&self, dart: usize) -> usize {
        self.twin[dart]
    }

    pub fn vertex(&self, dart: usize) -> usize {
        self.vertex[dart]
    }

    pub fn is_boundary(&self, dart: usize) -> bool {
        self.boundary[dart]
    }

    pub fn degree(&self, v: usize) -> usize {
        if v < self.n_crossings {
            4
        } else {
            3
        }
    }

    /// Successor in the rotation at the dart's vertex; `orientation < 0` walks clockwise.
    pub fn rot(&self, dart: usize, orientation: i8) -> usize {
        if orientation > 0 {
            self.rot_next[dart]
        } else {
            self.rot_prev[dart]
        }
    }

    /// Face containing the boundary darts only, when the divide has endpoints.
    pub fn outer_face(&self) -> Option<usize> {
        if self.n_endpoints == 0 {
            return None;
        }
        let cw = self.twin.len() - 2 * self.n_endpoints + 1;
        Some(self.face_of[cw])
    }

    /// Checks that every connected component closes to a sphere.
    pub fn check_planar(&self) -> Result<(), DivideError> {
        let v = self.num_vertices();
        let mut uf = UnionFind::new(v);
        for d in 0..self.num_darts() {
            uf.union(self.vertex[d], self.vertex[self.twin[d]]);
        }
        let mut verts = vec![0i64; v];
        let mut darts = vec![0i64; v];
        let mut faces = vec![0i64; v];
        for x in 0..v {
            verts[uf.find(x)] += 1;
        }
        for d in 0..self.num_darts() {
            darts[uf.find(self.vertex[d])] += 1;
        }
        for face in &self.faces {
            faces[uf.find(self.vertex[face[0]])] += 1;
        }
        for root in 0..v {
            if uf.find(root) != root {
                continue;
            }
            let euler = verts[root] - darts[root] / 2 + faces[root];
            if euler != 2 {
                return Err(DivideError::NonPlanar { euler });
            }
        }
        Ok(())
    }
}
