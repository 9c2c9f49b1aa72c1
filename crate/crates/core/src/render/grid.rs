//! Straight-line grid drawing of a triangulated disk by the shift method.
//! Unlike harmonic placements it keeps every feature at least polynomially
//! large, which makes it a good source of Tutte weights.

use std::collections::{HashMap, VecDeque};
use super::Pt;

/// Orients all triangles consistently; `None` if the complex is not an
/// orientable surface.
fn orient(triangles: &[[usize; 3]]) -> Option<Vec<[usize; 3]>> {
    let mut by_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (t, tri) in triangles.iter().enumerate() {
        for i in 0..3 {
            let (a, b) = (tri[i], tri[(i + 1) % 3]);
            by_edge.entry((a.min(b), a.max(b))).or_default().push(t);
        }
    }
    let mut out: Vec<Option<[usize; 3]>> = vec![None; triangles.len()];
    for start in 0..triangles.len() {
        if out[start].is_some() {
            continue;
        }
        out[start] = Some(triangles[start]);
        let mut queue = VecDeque::from([start]);
        while let Some(t) = queue.pop_front() {
            let tri = out[t].expect("oriented");
            for i in 0..3 {
                let (a, b) = (tri[i], tri[(i + 1) % 3]);
                for &u in &by_edge[&(a.min(b), a.max(b))] {
                    if u == t {
                        continue;
                    }
                    let other = triangles[u];
                    // the neighbour must run through the edge as b → a
                    let runs_ba = (0..3).any(|j| other[j] == b && other[(j + 1) % 3] == a);
                    let fixed = if runs_ba { other } else { [other[0], other[2], other[1]] };
                    match out[u] {
                        None => {
                            out[u] = Some(fixed);
                            queue.push_back(u);
                        }
                        Some(existing) if existing != fixed => {
                            let same = (0..3).any(|j| {
                                existing == [fixed[j], fixed[(j + 1) % 3], fixed[(j + 2) % 3]]
                            });
                            if !same {
                                return None;
                            }
                        }
                        Some(_) => {}
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Draws the triangulated disk on a grid, capped by an extra node joined
/// to the whole boundary `ring`; the cap and the first ring edge make the
/// outer face. Returns the positions of the `n` disk nodes, or `None` if
/// the triangles do not form a disk bounded by `ring`.
pub(super) fn grid_drawing(n: usize, triangles: &[[usize; 3]], ring: &[usize]) -> Option<Vec<Pt>> {
    let mut tris = orient(triangles)?;
    let cap = n;
    let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
    for (t, tri) in tris.iter().enumerate() {
        for i in 0..3 {
            directed.insert((tri[i], tri[(i + 1) % 3]), t);
        }
    }
    let m = ring.len();
    if m < 3 {
        return None;
    }
    for i in 0..m {
        let (a, b) = (ring[i], ring[(i + 1) % m]);
        if directed.contains_key(&(a, b)) {
            tris.push([b, a, cap]);
        } else if directed.contains_key(&(b, a)) {
            tris.push([a, b, cap]);
        } else {
            return None;
        }
    }
    let total = n + 1;
    // rotation: after neighbour b of a comes c
    let mut next: HashMap<(usize, usize), usize> = HashMap::new();
    for tri in &tris {
        for i in 0..3 {
            next.insert((tri[i], tri[(i + 1) % 3]), tri[(i + 2) % 3]);
        }
    }
    let mut rotation: Vec<Vec<usize>> = vec![Vec::new(); total];
    let mut starts: Vec<(usize, usize)> = next.keys().copied().collect();
    starts.sort_unstable();
    for (a, b) in starts {
        if rotation[a].is_empty() {
            let mut x = b;
            loop {
                rotation[a].push(x);
                x = *next.get(&(a, x))?;
                if x == b {
                    break;
                }
                if rotation[a].len() > total {
                    return None;
                }
            }
        }
    }
    let mut positions = shift_drawing(total, &rotation, [ring[0], ring[1], cap])?;
    positions.truncate(n);
    Some(positions)
}

/// Canonical ordering by peeling chord-free vertices off the contour, then
/// the shift method placing each vertex above its contour neighbours.
fn shift_drawing(n: usize, rotation: &[Vec<usize>], outer: [usize; 3]) -> Option<Vec<Pt>> {
    let [v1, v2, vn] = outer;
    let mut removed = vec![false; n];
    let mut contour = vec![v1, vn, v2];
    let mut order = Vec::with_capacity(n);
    let mut at = vec![usize::MAX; n];
    while contour.len() > 2 {
        for (i, &v) in contour.iter().enumerate() {
            at[v] = i;
        }
        let chord_free = |i: usize| {
            let v = contour[i];
            rotation[v].iter().all(|&u| removed[u] || at[u] == usize::MAX || at[u].abs_diff(i) <= 1)
        };
        let i = (1..contour.len() - 1).find(|&i| chord_free(i))?;
        let v = contour[i];
        let (a, b) = (contour[i - 1], contour[i + 1]);
        // the neighbours between a and b on the side not yet peeled
        let rot = &rotation[v];
        let k = rot.len();
        let pa = rot.iter().position(|&u| u == a)?;
        let pb = rot.iter().position(|&u| u == b)?;
        let arc = |from: usize, to: usize| -> Vec<usize> {
            let mut out = Vec::new();
            let mut j = (from + 1) % k;
            while j != to {
                out.push(rot[j]);
                j = (j + 1) % k;
            }
            out
        };
        let (forward, backward) = (arc(pa, pb), arc(pb, pa));
        let fresh = |s: &[usize]| s.iter().all(|&u| !removed[u] && at[u] == usize::MAX);
        let inner = if fresh(&forward) && (!forward.is_empty() || !fresh(&backward)) {
            forward
        } else if fresh(&backward) {
            let mut b = backward;
            b.reverse();
            b
        } else {
            return None;
        };
        removed[v] = true;
        order.push(v);
        for &u in &contour {
            at[u] = usize::MAX;
        }
        let mut next = contour[..i].to_vec();
        next.extend(inner);
        next.extend_from_slice(&contour[i + 1..]);
        contour = next;
    }
    if order.len() + 2 != n {
        return None;
    }
    order.reverse();

    let mut x = vec![0i64; n];
    let mut y = vec![0i64; n];
    let mut under: Vec<Vec<usize>> = vec![Vec::new(); n];
    let v3 = order[0];
    x[v2] = 2;
    x[v3] = 1;
    y[v3] = 1;
    let mut contour = vec![v1, v3, v2];
    for &v in &order[1..] {
        let positions: Vec<usize> = (0..contour.len())
            .filter(|&j| rotation[v].contains(&contour[j]))
            .collect();
        let (p, q) = (*positions.first()?, *positions.last()?);
        if q <= p {
            return None;
        }
        for (j, &w) in contour.iter().enumerate().skip(p + 1) {
            let shift = if j < q { 1 } else { 2 };
            x[w] += shift;
            for &u in &under[w] {
                x[u] += shift;
            }
        }
        let (wp, wq) = (contour[p], contour[q]);
        x[v] = (x[wp] - y[wp] + x[wq] + y[wq]) / 2;
        y[v] = (-x[wp] + y[wp] + x[wq] + y[wq]) / 2;
        let mut covered = Vec::new();
        for &w in &contour[p + 1..q] {
            covered.push(w);
            covered.extend_from_slice(&under[w]);
        }
        under[v] = covered;
        let mut next = contour[..=p].to_vec();
        next.push(v);
        next.extend_from_slice(&contour[q..]);
        contour = next;
    }
    Some((0..n).map(|v| (x[v] as f64, y[v] as f64)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orientation(o: Pt, a: Pt, b: Pt) -> f64 {
        ((a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)).signum()
    }

    /// A wheel: hub 0, rim 1..=k.
    fn wheel(k: usize) -> Vec<[usize; 3]> {
        (0..k).map(|i| [0, 1 + i, 1 + (i + 1) % k]).collect()
    }

    #[test]
    fn wheel_is_drawn_plane() {
        for k in [3, 4, 7, 12] {
            let ring: Vec<usize> = (1..=k).collect();
            let pos = grid_drawing(k + 1, &wheel(k), &ring).unwrap();
            let signs: Vec<f64> = wheel(k)
                .iter()
                .map(|t| orientation(pos[t[0]], pos[t[1]], pos[t[2]]))
                .collect();
            assert!(signs.iter().all(|&s| s != 0.0 && s == signs[0]), "{k}: {pos:?}");
        }
    }

    #[test]
    fn missing_ring_edge_is_rejected() {
        assert!(grid_drawing(5, &wheel(4), &[1, 3, 2, 4]).is_none());
    }

    #[test]
    fn inconsistent_orientation_is_fixed() {
        let tris = vec![[0, 1, 2], [0, 3, 2]];
        let out = orient(&tris).unwrap();
        let runs = |t: [usize; 3], a: usize, b: usize| (0..3).any(|j| t[j] == a && t[(j + 1) % 3] == b);
        assert!(runs(out[0], 2, 0) != runs(out[1], 2, 0));
    }
}
