//! Planar layout and SVG export.
//!
//! The closed map minus its outside face is barycentrically subdivided twice,
//! which yields a simplicial triangulation of the disk. A grid drawing of that
//! triangulation (capped by one extra node over the boundary) supplies
//! mean-value weights; with the boundary pinned to the unit circle, the Tutte
//! placement under those weights is a straight-line embedding that does not
//! crowd long chains of small faces the way uniform weights do. Each divide
//! edge, drawn through its subdivision points, meets the others only at its
//! ends. A force pass that refuses any move changing the embedding spreads
//! the drawing out, and edges are smoothed into cubic pieces, checked by a
//! segment sweep and tightened until only declared crossings remain.

use std::f64::consts::PI;
use std::fmt::Write as _;

use std::collections::HashMap;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::divide::{ClosedMap, Divide, Slot};
use crate::error::RenderError;

mod grid;

type Pt = (f64, f64);

/// Placement controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayoutOptions {
    /// Seed of the edge-weight jitter used when a placement degenerates.
    pub seed: u64,
    /// Jittered retries before giving up.
    pub retries: usize,
}

impl Default for LayoutOptions {
    fn default() -> Self {
        LayoutOptions { seed: 0, retries: 3 }
    }
}

impl LayoutOptions {
    /// Defaults, with the seed taken from `DIVIDELAB_SEED` when it parses.
    pub fn from_env() -> Self {
        let mut options = LayoutOptions::default();
        if let Some(seed) = std::env::var("DIVIDELAB_SEED").ok().and_then(|s| s.trim().parse().ok()) {
            options.seed = seed;
        }
        options
    }
}

/// Geometry of a rendered divide in the unit disk.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderLayout {
    /// Crossings then endpoints, as in the divide's vertex numbering.
    pub vertices: Vec<Pt>,
    /// One entry per divide edge: its half-edges and the cubic pieces
    /// `[start, control, control, end]` from the first half-edge's vertex.
    pub edges: Vec<RenderEdge>,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderEdge {
    pub half_edges: (usize, usize),
    pub pieces: Vec<[Pt; 4]>,
}

impl RenderLayout {
    /// Flattened polyline of every edge.
    pub fn flattened(&self, steps: usize) -> Vec<Vec<Pt>> {
        self.edges
            .iter()
            .map(|e| {
                let mut pts = vec![e.pieces[0][0]];
                for piece in &e.pieces {
                    for s in 1..=steps {
                        pts.push(bezier(piece, s as f64 / steps as f64));
                    }
                }
                pts
            })
            .collect()
    }
}

fn bezier(c: &[Pt; 4], t: f64) -> Pt {
    let u = 1.0 - t;
    let (a, b, cc, d) = (u * u * u, 3.0 * u * u * t, 3.0 * u * t * t, t * t * t);
    (
        a * c[0].0 + b * c[1].0 + cc * c[2].0 + d * c[3].0,
        a * c[0].1 + b * c[1].1 + cc * c[2].1 + d * c[3].1,
    )
}

/// Cells of the once-subdivided disk, numbered vertices | edge midpoints |
/// face centres. Its edges are half-edge segments, midpoint–face and
/// corner (vertex–face) segments; its triangles are flags.
struct Subdivision {
    n_cells0: usize,
    /// `(a, b)` endpoints of each 1-cell, in 0-cell ids.
    edges1: Vec<(usize, usize)>,
    /// 1-cells of each triangle.
    triangles: Vec<[usize; 3]>,
    /// Boundary cycle as alternating 0-cells and 1-cells.
    boundary: Vec<(bool, usize)>,
    /// Per divide half-edge: its segment (1-cell).
    seg_of_dart: Vec<usize>,
}

fn subdivide(map: &ClosedMap, outer: usize) -> Subdivision {
    let n_darts = map.num_darts();
    let n_vertices = map.num_vertices();
    // edge ids: one per twin pair
    let mut edge_of = vec![usize::MAX; n_darts];
    let mut n_edges = 0;
    for d in 0..n_darts {
        if edge_of[d] == usize::MAX {
            edge_of[d] = n_edges;
            edge_of[map.twin(d)] = n_edges;
            n_edges += 1;
        }
    }
    let mut face_id = vec![usize::MAX; map.faces().len()];
    let mut n_faces = 0;
    for (f, id) in face_id.iter_mut().enumerate() {
        if f != outer {
            *id = n_faces;
            n_faces += 1;
        }
    }
    let vtx = |v: usize| v;
    let mid = |e: usize| n_vertices + e;
    let fc = |f: usize| n_vertices + n_edges + face_id[f];

    let mut edges1 = Vec::new();
    let seg: Vec<usize> = (0..n_darts)
        .map(|d| {
            edges1.push((vtx(map.vertex(d)), mid(edge_of[d])));
            edges1.len() - 1
        })
        .collect();
    // midpoint–face on the left of each dart, and the corner after each dart
    let mut ef = vec![usize::MAX; n_darts];
    let mut corner = vec![usize::MAX; n_darts];
    for d in 0..n_darts {
        let f = map.face_of(d);
        if f == outer {
            continue;
        }
        edges1.push((mid(edge_of[d]), fc(f)));
        ef[d] = edges1.len() - 1;
        edges1.push((vtx(map.vertex(d)), fc(f)));
        corner[d] = edges1.len() - 1;
    }
    let mut triangles = Vec::new();
    for d in 0..n_darts {
        if map.face_of(d) != outer {
            triangles.push([seg[d], ef[d], corner[d]]);
        }
        let t = map.twin(d);
        if map.face_of(t) != outer {
            triangles.push([seg[d], ef[t], corner[map.rot(d, -1)]]);
        }
    }
    let mut boundary = Vec::new();
    for &d in &map.faces()[outer] {
        boundary.push((true, vtx(map.vertex(d))));
        boundary.push((false, seg[d]));
        boundary.push((true, mid(edge_of[d])));
        boundary.push((false, seg[map.twin(d)]));
    }
    Subdivision {
        n_cells0: n_vertices + n_edges + n_faces,
        edges1,
        triangles,
        boundary,
        seg_of_dart: seg,
    }
}

/// Nodes of the second subdivision along the boundary cycle.
fn boundary_ring(sub: &Subdivision) -> Vec<usize> {
    sub.boundary
        .iter()
        .map(|&(is_cell0, id)| if is_cell0 { id } else { sub.n_cells0 + id })
        .collect()
}

/// Vertices of the second subdivision: 0-cells, then 1-cells, then triangles.
struct Graph2 {
    n: usize,
    adj: Vec<Vec<usize>>,
    pinned: Vec<Option<Pt>>,
    /// Triangles `(0-cell, 1-cell, triangle)`, unoriented.
    triangles: Vec<[usize; 3]>,
}

fn second_subdivision(sub: &Subdivision, boundary_angles: &[f64]) -> Graph2 {
    let n0 = sub.n_cells0;
    let n1 = sub.edges1.len();
    let n = n0 + n1 + sub.triangles.len();
    let mut adj = vec![Vec::new(); n];
    let mut link = |a: usize, b: usize| {
        adj[a].push(b);
        adj[b].push(a);
    };
    for (i, &(a, b)) in sub.edges1.iter().enumerate() {
        link(n0 + i, a);
        link(n0 + i, b);
    }
    let mut triangles = Vec::with_capacity(6 * sub.triangles.len());
    for (t, tri) in sub.triangles.iter().enumerate() {
        let id = n0 + n1 + t;
        let mut corners = Vec::with_capacity(3);
        for &e in tri {
            link(id, n0 + e);
            let (a, b) = sub.edges1[e];
            triangles.push([a, n0 + e, id]);
            triangles.push([b, n0 + e, id]);
            for v in [a, b] {
                if !corners.contains(&v) {
                    corners.push(v);
                }
            }
        }
        for v in corners {
            link(id, v);
        }
    }
    let mut pinned = vec![None; n];
    for (node, &angle) in boundary_ring(sub).into_iter().zip(boundary_angles) {
        pinned[node] = Some((angle.cos(), angle.sin()));
    }
    Graph2 {
        n,
        adj,
        pinned,
        triangles,
    }
}

/// Solves the Tutte equations for the free nodes by Jacobi-preconditioned
/// BiCGSTAB; the weights need not be symmetric. `weights[v]` runs parallel
/// to `g.adj[v]`.
fn tutte(g: &Graph2, weights: &[Vec<f64>]) -> Vec<Pt> {
    let free: Vec<usize> = (0..g.n).filter(|&v| g.pinned[v].is_none()).collect();
    let mut index = vec![usize::MAX; g.n];
    for (i, &v) in free.iter().enumerate() {
        index[v] = i;
    }
    let m = free.len();
    let diag: Vec<f64> = free.iter().map(|&v| weights[v].iter().sum()).collect();
    // the preconditioned operator x ↦ D⁻¹ (D − W) x
    let apply = |x: &[f64], y: &mut [f64]| {
        for (i, &v) in free.iter().enumerate() {
            let mut acc = diag[i] * x[i];
            for (&w, &wt) in g.adj[v].iter().zip(&weights[v]) {
                if index[w] != usize::MAX {
                    acc -= wt * x[index[w]];
                }
            }
            y[i] = acc / diag[i];
        }
    };
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut out: Vec<Pt> = g.pinned.iter().map(|p| p.unwrap_or((0.0, 0.0))).collect();
    for axis in 0..2 {
        let coord = |p: Pt| if axis == 0 { p.0 } else { p.1 };
        let rhs: Vec<f64> = free
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                g.adj[v]
                    .iter()
                    .zip(&weights[v])
                    .filter_map(|(&w, &wt)| g.pinned[w].map(|p| wt * coord(p)))
                    .sum::<f64>()
                    / diag[i]
            })
            .collect();
        let mut x = vec![0.0; m];
        let mut r = rhs.clone();
        let r0 = r.clone();
        let norm0 = dot(&rhs, &rhs).sqrt().max(1e-300);
        let (mut rho, mut alpha, mut omega) = (1.0, 1.0, 1.0);
        let mut v = vec![0.0; m];
        let mut p = vec![0.0; m];
        let mut s = vec![0.0; m];
        let mut t = vec![0.0; m];
        for _ in 0..20 * m.max(10) {
            if dot(&r, &r).sqrt() <= 1e-15 * norm0 {
                break;
            }
            let next = dot(&r0, &r);
            if next == 0.0 || omega == 0.0 {
                break;
            }
            let beta = (next / rho) * (alpha / omega);
            rho = next;
            for i in 0..m {
                p[i] = r[i] + beta * (p[i] - omega * v[i]);
            }
            apply(&p, &mut v);
            alpha = rho / dot(&r0, &v);
            for i in 0..m {
                s[i] = r[i] - alpha * v[i];
            }
            apply(&s, &mut t);
            let tt = dot(&t, &t);
            omega = if tt > 0.0 { dot(&t, &s) / tt } else { 0.0 };
            for i in 0..m {
                x[i] += alpha * p[i] + omega * s[i];
                r[i] = s[i] - omega * t[i];
            }
        }
        for (i, &v) in free.iter().enumerate() {
            if axis == 0 {
                out[v].0 = x[i];
            } else {
                out[v].1 = x[i];
            }
        }
    }
    out
}

/// Mean-value weights of every node's neighbours in a plane drawing;
/// positive whenever the node sees its link star-shaped.
fn mean_value_weights(g: &Graph2, drawing: &[Pt]) -> Vec<Vec<f64>> {
    (0..g.n)
        .map(|v| {
            let p = drawing[v];
            let angle = |w: usize| (drawing[w].1 - p.1).atan2(drawing[w].0 - p.0);
            g.adj[v]
                .iter()
                .map(|&u| {
                    let a = angle(u);
                    // angular gaps to the neighbours on either side of u
                    let (mut before, mut after) = (f64::INFINITY, f64::INFINITY);
                    for &w in &g.adj[v] {
                        if w == u {
                            continue;
                        }
                        let gap = (angle(w) - a).rem_euclid(2.0 * PI);
                        after = after.min(gap);
                        before = before.min(2.0 * PI - gap);
                    }
                    let len = (drawing[u].0 - p.0).hypot(drawing[u].1 - p.1);
                    ((before / 2.0).tan() + (after / 2.0).tan()) / len
                })
                .collect()
        })
        .collect()
}

/// Smallest distance between two placed nodes.
fn min_separation(pos: &[Pt]) -> f64 {
    let mut sorted: Vec<Pt> = pos.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = f64::INFINITY;
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            if sorted[j].0 - sorted[i].0 >= best {
                break;
            }
            best = best.min((sorted[j].0 - sorted[i].0).hypot(sorted[j].1 - sorted[i].1));
        }
    }
    best
}

/// Straight-line drawing of the divide: vertices first, then the bend
/// points of each edge.
struct Drawing {
    pos: Vec<Pt>,
    pinned: Vec<bool>,
    /// Node pairs of the segments.
    segments: Vec<(usize, usize)>,
    incident: Vec<Vec<usize>>,
    /// Per edge: its half-edges and node path.
    paths: Vec<((usize, usize), Vec<usize>)>,
    /// Per half-edge: the bend next to its vertex.
    bends: Vec<usize>,
    /// Per node: for a bend next to a crossing, the bend continuing its
    /// strand on the far side.
    across: Vec<Option<usize>>,
    n_vertices: usize,
}

impl Drawing {
    fn bend(&self, h: usize) -> usize {
        self.bends[h]
    }

    /// Builds the drawing from vertex positions and, per edge `(h, t)` with
    /// `h < t`, the bend points from the end of `h` to the end of `t`.
    fn new(d: &Divide, map: &ClosedMap, vertices: Vec<Pt>, bends: impl Fn(usize, usize) -> Vec<Pt>) -> Drawing {
        let nv = vertices.len();
        let mut pos = vertices;
        let mut pinned = vec![false; nv];
        for p in pinned.iter_mut().skip(d.num_crossings()) {
            *p = true;
        }
        let mut paths = Vec::new();
        let mut first_bend = vec![usize::MAX; d.num_half_edges()];
        for h in 0..d.num_half_edges() {
            let t = d.partner(h);
            if t < h {
                continue;
            }
            let mut path = vec![map.vertex(h)];
            for p in bends(h, t) {
                path.push(pos.len());
                pos.push(p);
                pinned.push(false);
            }
            path.push(map.vertex(t));
            first_bend[h] = path[1];
            first_bend[t] = path[path.len() - 2];
            paths.push(((h, t), path));
        }
        let mut segments = Vec::new();
        let mut incident = vec![Vec::new(); pos.len()];
        for (_, path) in &paths {
            for w in path.windows(2) {
                incident[w[0]].push(segments.len());
                incident[w[1]].push(segments.len());
                segments.push((w[0], w[1]));
            }
        }
        let mut across = vec![None; pos.len()];
        for h in 0..d.num_half_edges() {
            if matches!(d.slot(h), Slot::Crossing { .. }) {
                across[first_bend[h]] = Some(first_bend[Divide::opposite(h)]);
            }
        }
        Drawing {
            pos,
            pinned,
            segments,
            incident,
            paths,
            bends: first_bend,
            across,
            n_vertices: nv,
        }
    }

    /// The drawing along the second subdivision: each edge runs through the
    /// nodes of its two segments and its midpoint.
    fn along(d: &Divide, map: &ClosedMap, sub: &Subdivision, k2: &[Pt]) -> Drawing {
        let n0 = sub.n_cells0;
        let vertices = (0..map.num_vertices()).map(|v| k2[v]).collect();
        Drawing::new(d, map, vertices, |h, t| {
            vec![
                k2[n0 + sub.seg_of_dart[h]],
                k2[sub.edges1[sub.seg_of_dart[h]].1],
                k2[n0 + sub.seg_of_dart[t]],
            ]
        })
    }

    /// Force-directed spreading that never changes the embedding. A node
    /// only moves when nothing lies in the triangles swept by its segments
    /// and its own track crosses no segment; otherwise the step is halved.
    fn spread(&mut self, sweeps: usize) {
        let n = self.pos.len();
        let ideal = 0.9 * (PI / n as f64).sqrt();
        let mut temperature = 0.05;
        let cooling = (0.001f64 / temperature).powf(1.0 / sweeps.max(1) as f64);
        for _ in 0..sweeps {
            for v in 0..n {
                if self.pinned[v] {
                    continue;
                }
                let f = self.force(v, ideal);
                let norm = f.0.hypot(f.1);
                if norm < 1e-15 {
                    continue;
                }
                let p = self.pos[v];
                let mut step = norm.min(temperature);
                for _ in 0..12 {
                    let next = (p.0 + f.0 / norm * step, p.1 + f.1 / norm * step);
                    let radius = next.0.hypot(next.1);
                    if (radius < 0.97 || radius < p.0.hypot(p.1)) && self.can_move(v, next) {
                        self.pos[v] = next;
                        break;
                    }
                    step *= 0.5;
                }
            }
            temperature *= cooling;
        }
    }

    fn force(&self, v: usize, ideal: f64) -> Pt {
        let p = self.pos[v];
        let mut f = (0.0, 0.0);
        for (u, &q) in self.pos.iter().enumerate() {
            if u == v {
                continue;
            }
            let (dx, dy) = (p.0 - q.0, p.1 - q.1);
            let dist = dx.hypot(dy).max(1e-12);
            let push = ideal * ideal / (dist * dist);
            f.0 += dx * push;
            f.1 += dy * push;
        }
        for &s in &self.incident[v] {
            let (a, b) = self.segments[s];
            let u = if a == v { b } else { a };
            let (dx, dy) = (self.pos[u].0 - p.0, self.pos[u].1 - p.1);
            let dist = dx.hypot(dy);
            f.0 += dx * dist / ideal;
            f.1 += dy * dist / ideal;
        }
        // straighten paths, through crossings too
        // the bend across the crossing from a bend next to it
        let strand = |w: usize| self.across[w];
        let neighbours: Vec<usize> = self.incident[v]
            .iter()
            .map(|&s| if self.segments[s].0 == v { self.segments[s].1 } else { self.segments[s].0 })
            .collect();
        if v < self.n_vertices {
            for &a in &neighbours {
                if let Some(b) = strand(a) {
                    let mid = ((self.pos[a].0 + self.pos[b].0) / 2.0, (self.pos[a].1 + self.pos[b].1) / 2.0);
                    f.0 += STRAIGHTEN * (mid.0 - p.0) / 2.0;
                    f.1 += STRAIGHTEN * (mid.1 - p.1) / 2.0;
                }
            }
        } else if neighbours.len() == 2 {
            let [a, b] = [neighbours[0], neighbours[1]];
            let mut target = ((self.pos[a].0 + self.pos[b].0) / 2.0, (self.pos[a].1 + self.pos[b].1) / 2.0);
            // next to a crossing, line up with the strand beyond it
            for (c, other) in [(a, b), (b, a)] {
                if c < self.n_vertices && !self.pinned[c] {
                    if let Some(w) = strand(v) {
                        let (cp, wp) = (self.pos[c], self.pos[w]);
                        let beyond = sub_pt(cp, wp);
                        let len = beyond.0.hypot(beyond.1).max(1e-12);
                        let reach = (p.0 - cp.0).hypot(p.1 - cp.1);
                        let through = (cp.0 + beyond.0 / len * reach, cp.1 + beyond.1 / len * reach);
                        target = (
                            (through.0 + (cp.0 + self.pos[other].0) / 2.0) / 2.0,
                            (through.1 + (cp.1 + self.pos[other].1) / 2.0) / 2.0,
                        );
                    }
                }
            }
            f.0 += STRAIGHTEN * (target.0 - p.0);
            f.1 += STRAIGHTEN * (target.1 - p.1);
        }
        // keep away from segments nearby
        for &(a, b) in &self.segments {
            if a == v || b == v {
                continue;
            }
            let (x, y) = (self.pos[a], self.pos[b]);
            let e = sub_pt(y, x);
            let len2 = e.0 * e.0 + e.1 * e.1;
            if len2 == 0.0 {
                continue;
            }
            let t = (((p.0 - x.0) * e.0 + (p.1 - x.1) * e.1) / len2).clamp(0.0, 1.0);
            let (dx, dy) = (p.0 - x.0 - t * e.0, p.1 - x.1 - t * e.1);
            let dist = dx.hypot(dy).max(1e-12);
            if dist < ideal {
                let push = (ideal - dist).powi(2) / (dist * dist);
                f.0 += dx * push;
                f.1 += dy * push;
            }
        }
        // keep clear of the circle
        let r = p.0.hypot(p.1);
        if r > 0.8 {
            let pull = 10.0 * (r - 0.8) / r;
            f.0 -= p.0 * pull;
            f.1 -= p.1 * pull;
        }
        f
    }

    /// Whether moving node `v` straight to `next` keeps the embedding.
    fn can_move(&self, v: usize, next: Pt) -> bool {
        let p = self.pos[v];
        for (s, &(a, b)) in self.segments.iter().enumerate() {
            if a == v || b == v {
                let u = if a == v { b } else { a };
                let tri = (p, next, self.pos[u]);
                for (w, &q) in self.pos.iter().enumerate() {
                    if w != v && w != u && in_triangle(q, tri) {
                        return false;
                    }
                }
            } else if !self.incident[v].contains(&s)
                && segments_touch((p, next), (self.pos[a], self.pos[b]))
            {
                return false;
            }
        }
        true
    }

    /// Whether segments meet only at shared nodes.
    fn is_plane(&self) -> bool {
        for (i, &(a, b)) in self.segments.iter().enumerate() {
            for &(c, e) in &self.segments[i + 1..] {
                if a == c || a == e || b == c || b == e {
                    continue;
                }
                if segments_touch((self.pos[a], self.pos[b]), (self.pos[c], self.pos[e])) {
                    return false;
                }
            }
        }
        true
    }
}

/// Closed triangle membership.
fn in_triangle(q: Pt, (a, b, c): (Pt, Pt, Pt)) -> bool {
    let o = |x: Pt, y: Pt| cross(sub_pt(y, x), sub_pt(q, x));
    let (d1, d2, d3) = (o(a, b), o(b, c), o(c, a));
    let neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
    let pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
    !(neg && pos)
}

/// Pull of each bend towards the line through its neighbours.
const STRAIGHTEN: f64 = 2.0;

/// Force-directed sweeps after the Tutte placement.
const SPREAD_SWEEPS: usize = 300;

/// Places the divide in the unit disk.
pub fn layout(d: &Divide) -> Result<RenderLayout, RenderError> {
    layout_with(d, &LayoutOptions::default())
}

pub fn layout_with(d: &Divide, options: &LayoutOptions) -> Result<RenderLayout, RenderError> {
    d.require_connected()?;
    if d.num_endpoints() == 0 {
        return Err(RenderError::Unsupported("divides without endpoints".into()));
    }
    let map = ClosedMap::new(d);
    let outer = map.outer_face().expect("divide has endpoints");
    let sub = subdivide(&map, outer);

    // endpoints evenly spaced counterclockwise; the outer face runs clockwise
    let k = d.num_endpoints() as f64;
    let c = d.num_crossings();
    let mut angles = Vec::with_capacity(sub.boundary.len());
    for &dart in &map.faces()[outer] {
        let i = (map.vertex(dart) - c) as f64;
        let start = PI / 2.0 + 2.0 * PI * i / k;
        for j in 0..4 {
            angles.push(start - 2.0 * PI / k * j as f64 / 4.0);
        }
    }
    let graph = second_subdivision(&sub, &angles);
    let ring = boundary_ring(&sub);
    let base: Vec<Vec<f64>> = match grid::grid_drawing(graph.n, &graph.triangles, &ring) {
        Some(drawing) => mean_value_weights(&graph, &drawing),
        None => graph.adj.iter().map(|a| vec![1.0; a.len()]).collect(),
    };

    let mut last_error = String::new();
    for attempt in 0..=options.retries {
        let mut rng = StdRng::seed_from_u64(options.seed.wrapping_add(attempt as u64));
        let mut jitter: HashMap<(usize, usize), f64> = HashMap::new();
        let weights: Vec<Vec<f64>> = (0..graph.n)
            .map(|v| {
                graph.adj[v]
                    .iter()
                    .zip(&base[v])
                    .map(|(&u, &w)| {
                        if attempt == 0 {
                            return w;
                        }
                        w * *jitter
                            .entry((v.min(u), v.max(u)))
                            .or_insert_with(|| rng.gen_range(0.5..1.5))
                    })
                    .collect()
            })
            .collect();
        let pos = tutte(&graph, &weights);
        if let Some(msg) = coincident(&pos) {
            last_error = msg;
            continue;
        }
        let mut drawing = Drawing::along(d, &map, &sub, &pos);
        if !drawing.is_plane() {
            last_error = "placement is not plane".into();
            continue;
        }
        drawing.spread(SPREAD_SWEEPS);
        match finish(d, &drawing) {
            Ok(layout) => return Ok(layout),
            Err(e) => last_error = e,
        }
    }
    Err(RenderError::LayoutDegenerate(last_error))
}

/// Smooths the drawing into cubic pieces, relaxing the tension until the
/// curves verify.
fn finish(d: &Divide, drawing: &Drawing) -> Result<RenderLayout, String> {
    let mut last_error = String::new();
    for tension in [1.0 / 6.0, 1.0 / 12.0, 1.0 / 24.0, 0.0] {
        let layout = RenderLayout {
            vertices: drawing.pos[..drawing.n_vertices].to_vec(),
            edges: drawing
                .paths
                .iter()
                .map(|(he, path)| RenderEdge {
                    half_edges: *he,
                    pieces: smooth(d, drawing, *he, path, tension),
                })
                .collect(),
            radius: 1.0,
        };
        match verify_layout(d, &layout) {
            Ok(()) => return Ok(layout),
            Err(e) => last_error = e.to_string(),
        }
    }
    Err(last_error)
}

fn coincident(pos: &[Pt]) -> Option<String> {
    let sep = min_separation(pos);
    (sep < MIN_NODE_SEPARATION).then(|| format!("placed nodes {sep:.1e} apart"))
}

/// Below this two placed nodes count as coincident.
const MIN_NODE_SEPARATION: f64 = 1e-9;

/// Cubic pieces through the polyline. Tangents at crossings follow the
/// strand through the opposite slot; at endpoints they point along the path.
fn smooth(d: &Divide, drawing: &Drawing, (h, t): (usize, usize), nodes: &[usize], tension: f64) -> Vec<[Pt; 4]> {
    let path: Vec<Pt> = nodes.iter().map(|&v| drawing.pos[v]).collect();
    let through = |dart: usize| -> Option<Pt> {
        match d.slot(dart) {
            Slot::Crossing { .. } => Some(drawing.pos[drawing.bend(Divide::opposite(dart))]),
            Slot::Endpoint(_) => None,
        }
    };
    let n = path.len();
    // virtual neighbours before the first and after the last point
    let before = through(h).unwrap_or_else(|| reflect(path[1], path[0]));
    let after = through(t).unwrap_or_else(|| reflect(path[n - 2], path[n - 1]));
    let at = |i: isize| -> Pt {
        if i < 0 {
            before
        } else if i as usize >= n {
            after
        } else {
            path[i as usize]
        }
    };
    (0..n - 1)
        .map(|i| {
            let i = i as isize;
            let (p0, p1, p2, p3) = (at(i - 1), at(i), at(i + 1), at(i + 2));
            [
                p1,
                (p1.0 + tension * (p2.0 - p0.0), p1.1 + tension * (p2.1 - p0.1)),
                (p2.0 - tension * (p3.0 - p1.0), p2.1 - tension * (p3.1 - p1.1)),
                p2,
            ]
        })
        .collect()
}

fn reflect(p: Pt, about: Pt) -> Pt {
    (2.0 * about.0 - p.0, 2.0 * about.1 - p.1)
}

fn cross(a: Pt, b: Pt) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

fn sub_pt(a: Pt, b: Pt) -> Pt {
    (a.0 - b.0, a.1 - b.1)
}

fn segments_touch(p: (Pt, Pt), q: (Pt, Pt)) -> bool {
    let o = |a: Pt, b: Pt, c: Pt| cross(sub_pt(b, a), sub_pt(c, a));
    let (d1, d2) = (o(q.0, q.1, p.0), o(q.0, q.1, p.1));
    let (d3, d4) = (o(p.0, p.1, q.0), o(p.0, p.1, q.1));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |a: Pt, b: Pt, c: Pt, dd: f64| {
        dd == 0.0 && c.0 >= a.0.min(b.0) && c.0 <= a.0.max(b.0) && c.1 >= a.1.min(b.1) && c.1 <= a.1.max(b.1)
    };
    on(q.0, q.1, p.0, d1) || on(q.0, q.1, p.1, d2) || on(p.0, p.1, q.0, d3) || on(p.0, p.1, q.1, d4)
}

/// Checks that the flattened curves meet only at declared crossings and that
/// endpoints sit on the circle in their cyclic order.
pub fn verify_layout(d: &Divide, layout: &RenderLayout) -> Result<(), RenderError> {
    let c = d.num_crossings();
    let k = d.num_endpoints();
    if layout.vertices.iter().any(|p| !p.0.is_finite() || !p.1.is_finite())
        || layout.edges.iter().flat_map(|e| e.pieces.iter().flatten()).any(|p| !p.0.is_finite() || !p.1.is_finite())
    {
        return Err(RenderError::LayoutDegenerate("non-finite coordinate".into()));
    }
    let mut last_angle = None;
    let mut turns = 0.0;
    for i in 0..k {
        let p = layout.vertices[c + i];
        if (p.0.hypot(p.1) - layout.radius).abs() > 1e-9 {
            return Err(RenderError::LayoutDegenerate(format!("endpoint {i} is off the circle")));
        }
        let a = p.1.atan2(p.0);
        if let Some(prev) = last_angle {
            let mut step: f64 = a - prev;
            while step <= 0.0 {
                step += 2.0 * PI;
            }
            turns += step;
        }
        last_angle = Some(a);
    }
    if k > 1 {
        let first = layout.vertices[c].1.atan2(layout.vertices[c].0);
        let mut step = first - last_angle.unwrap_or(first);
        while step <= 0.0 {
            step += 2.0 * PI;
        }
        if ((turns + step) - 2.0 * PI).abs() > 1e-6 {
            return Err(RenderError::LayoutDegenerate("endpoints out of cyclic order".into()));
        }
    }

    let flat = layout.flattened(12);
    // (min x, max x, edge, index)
    let mut segs: Vec<(f64, f64, usize, usize)> = Vec::new();
    for (e, pts) in flat.iter().enumerate() {
        for i in 0..pts.len() - 1 {
            let (a, b) = (pts[i], pts[i + 1]);
            segs.push((a.0.min(b.0), a.0.max(b.0), e, i));
        }
    }
    segs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let vertex_of_end = |e: usize, i: usize| -> Option<usize> {
        let (h, t) = layout.edges[e].half_edges;
        let last = flat[e].len() - 2;
        let v = |x: usize| match d.slot(x) {
            Slot::Crossing { crossing, .. } => crossing,
            Slot::Endpoint(j) => c + j,
        };
        if i == 0 {
            Some(v(h))
        } else if i == last {
            Some(v(t))
        } else {
            None
        }
    };
    for a in 0..segs.len() {
        let (_, max_a, ea, ia) = segs[a];
        for &(min_b, _, eb, ib) in &segs[a + 1..] {
            if min_b > max_a {
                break;
            }
            if ea == eb && ia.abs_diff(ib) <= 1 {
                continue;
            }
            let p = (flat[ea][ia], flat[ea][ia + 1]);
            let q = (flat[eb][ib], flat[eb][ib + 1]);
            if !segments_touch(p, q) {
                continue;
            }
            // allowed: both pieces leave the same divide vertex
            let shared = match (vertex_of_end(ea, ia), vertex_of_end(eb, ib)) {
                (Some(x), Some(y)) if x == y => {
                    let v = layout.vertices[x];
                    let near = |s: (Pt, Pt)| s.0 == v || s.1 == v;
                    near(p) && near(q)
                }
                _ => false,
            };
            // a loop edge passes its vertex at both ends
            let loop_end = ea == eb && {
                let last = flat[ea].len() - 2;
                (ia == 0 && ib == last) || (ib == 0 && ia == last)
            };
            if !shared && !loop_end {
                return Err(RenderError::LayoutDegenerate(format!(
                    "edges {ea} and {eb} meet away from a crossing (pieces {ia}, {ib})"
                )));
            }
        }
    }
    Ok(())
}

fn fmt(x: f64) -> String {
    let s = format!("{:.4}", x);
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

/// SVG 1.1 document for the layout; output depends only on the layout.
pub fn to_svg(d: &Divide, layout: &RenderLayout) -> String {
    let size = 400.0;
    let scale = 180.0 / layout.radius;
    let map = |p: Pt| (size / 2.0 + scale * p.0, size / 2.0 - scale * p.1);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">"
    );
    let _ = writeln!(
        out,
        "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#f7f7f2\" stroke=\"#888888\" stroke-width=\"1\"/>",
        fmt(size / 2.0),
        fmt(size / 2.0),
        fmt(scale * layout.radius)
    );
    // colour by branch
    let palette = ["#1f4e9e", "#b8322a", "#2a7f3f", "#8a4fa3", "#c27c0e", "#2b8a8a"];
    let mut branch_of = vec![0; d.num_half_edges()];
    for (bi, b) in d.branches().iter().enumerate() {
        for &h in &b.walk {
            branch_of[h] = bi;
        }
    }
    out.push_str("  <g fill=\"none\" stroke-width=\"2\" stroke-linecap=\"round\">\n");
    for e in &layout.edges {
        let mut path = String::new();
        let (x, y) = map(e.pieces[0][0]);
        let _ = write!(path, "M {} {}", fmt(x), fmt(y));
        for piece in &e.pieces {
            let pts: Vec<String> = piece[1..]
                .iter()
                .map(|&p| {
                    let (x, y) = map(p);
                    format!("{} {}", fmt(x), fmt(y))
                })
                .collect();
            let _ = write!(path, " C {}", pts.join(" "));
        }
        let colour = palette[branch_of[e.half_edges.0] % palette.len()];
        let _ = writeln!(out, "    <path d=\"{path}\" stroke=\"{colour}\"/>");
    }
    out.push_str("  </g>\n");
    let c = d.num_crossings();
    for (v, &p) in layout.vertices.iter().enumerate() {
        let (x, y) = map(p);
        let (r, fill) = if v < c { (3.0, "#222222") } else { (4.0, "#ffffff") };
        let _ = writeln!(
            out,
            "  <circle cx=\"{}\" cy=\"{}\" r=\"{r}\" fill=\"{fill}\" stroke=\"#222222\" stroke-width=\"1\"/>",
            fmt(x),
            fmt(y)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Layout plus SVG in one call.
pub fn render_svg(d: &Divide, options: &LayoutOptions) -> Result<String, RenderError> {
    let layout = layout_with(d, options)?;
    Ok(to_svg(d, &layout))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divide::{connected_sum, SignedGaussCode};
    use crate::generators::{cable, chebyshev_divide};

    #[test]
    fn chord_is_one_arc() {
        let d = chebyshev_divide(1, 2).unwrap();
        let l = layout(&d).unwrap();
        assert_eq!(l.edges.len(), 1);
        assert_eq!(l.vertices.len(), 2);
    }

    #[test]
    fn teardrop_has_one_interior_crossing() {
        let d = SignedGaussCode::arc(vec![0, 0], vec![1]).to_divide().unwrap();
        let l = layout(&d).unwrap();
        assert!(l.vertices[0].0.hypot(l.vertices[0].1) < 1.0 - 1e-6);
        assert_eq!(l.edges.len(), 3);
    }

    #[test]
    fn sum_of_torus_divides_lays_out() {
        let a = chebyshev_divide(2, 9).unwrap();
        let b = chebyshev_divide(2, 3).unwrap();
        let d = connected_sum(&a, &b, 1, 0).unwrap();
        assert_eq!(d.num_crossings(), 5);
        verify_layout(&d, &layout(&d).unwrap()).unwrap();
    }

    #[test]
    fn cable_of_cusp_lays_out() {
        let d = cable(2, 9, &chebyshev_divide(2, 3).unwrap()).unwrap();
        assert_eq!(d.num_crossings(), 8);
        verify_layout(&d, &layout(&d).unwrap()).unwrap();
    }

    #[test]
    fn stray_intersections_are_caught() {
        let d = chebyshev_divide(2, 5).unwrap();
        let mut l = layout(&d).unwrap();
        // drag an interior control point of one edge across the disk
        let last = l.edges.len() - 1;
        l.edges[last].pieces[1][1] = (-3.0, -3.0);
        l.edges[last].pieces[1][2] = (3.0, 3.0);
        assert!(verify_layout(&d, &l).is_err());
    }

    #[test]
    fn closed_curves_are_unsupported() {
        let circle = SignedGaussCode {
            branches: vec![crate::divide::GaussBranch { visits: vec![0, 0], closed: true }],
            signs: vec![1],
            boundary: vec![],
        };
        if let Ok(d) = circle.to_divide() {
            assert!(matches!(layout(&d), Err(RenderError::Unsupported(_))));
        }
    }

    #[test]
    fn svg_is_deterministic() {
        let d = chebyshev_divide(3, 4).unwrap();
        let options = LayoutOptions { seed: 7, retries: 3 };
        let a = render_svg(&d, &options).unwrap();
        let b = render_svg(&d, &options).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("<?xml"));
        assert!(a.contains("version=\"1.1\""));
    }
}
