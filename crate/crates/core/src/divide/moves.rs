use super::{regions, Divide, Slot};
use crate::error::DivideError;

/// Region ids (as numbered by [`regions`]) that are admissible for a III-move.
pub fn triangle_faces(d: &Divide) -> Result<Vec<usize>, DivideError> {
    let data = regions(d)?;
    Ok(data
        .regions
        .iter()
        .enumerate()
        .filter(|(_, r)| is_triangle(d, r.is_bounded(), &r.circuit))
        .map(|(i, _)| i)
        .collect())
}

fn is_triangle(d: &Divide, bounded: bool, circuit: &[usize]) -> bool {
    if !bounded || circuit.len() != 3 {
        return false;
    }
    let c = d.num_crossings();
    if circuit.iter().any(|&h| h >= 4 * c) {
        return false;
    }
    let (a, b, x) = (circuit[0] / 4, circuit[1] / 4, circuit[2] / 4);
    a != b && b != x && a != x
}

/// Flips the triangular region `face` across its opposite crossing.
///
/// Every strand bounding the triangle swaps the order in which it meets its
/// two triangle crossings; rotations at the crossings are untouched. The
/// move is an involution up to canonical relabeling.
pub fn apply_move_iii(d: &Divide, face: usize) -> Result<Divide, DivideError> {
    let data = regions(d)?;
    let region = data
        .regions
        .get(face)
        .ok_or(DivideError::NotATriangle(face))?;
    if region.touches_boundary {
        return Err(DivideError::BoundaryFace(face));
    }
    if !is_triangle(d, true, &region.circuit) {
        return Err(DivideError::NotATriangle(face));
    }
    // Each side is a strand piece `E_U - [u_out U u_tri] - [v_tri V v_out] - E_V`
    // which becomes `E_U - [v_tri V v_out] - [u_out U u_tri] - E_V`.
    let mut partner = d.partners().to_vec();
    let mut new_end = std::collections::HashMap::new();
    for &h in &region.circuit {
        let v_tri = d.partner(h);
        new_end.insert(Divide::opposite(h), v_tri);
        new_end.insert(Divide::opposite(v_tri), h);
    }
    for &h in &region.circuit {
        let u_out = Divide::opposite(h);
        let v_out = Divide::opposite(d.partner(h));
        partner[u_out] = v_out;
        partner[v_out] = u_out;
    }
    for (&old, &new) in &new_end {
        let far = d.partner(old);
        let far_new = new_end.get(&far).copied().unwrap_or(far);
        partner[new] = far_new;
        partner[far_new] = new;
    }
    Divide::from_partner(d.num_crossings(), d.num_endpoints(), partner)
}

/// Boundary connected sum at endpoint `e1` of `d1` and `e2` of `d2`.
///
/// The two endpoints are removed and their branches joined. Crossings of
/// `d1` come first; the new boundary reads the endpoints of `d1` following
/// `e1`, then those of `d2` following `e2`.
pub fn connected_sum(
    d1: &Divide,
    d2: &Divide,
    e1: usize,
    e2: usize,
) -> Result<Divide, DivideError> {
    if e1 >= d1.num_endpoints() {
        return Err(DivideError::NotAnEndpoint(e1));
    }
    if e2 >= d2.num_endpoints() {
        return Err(DivideError::NotAnEndpoint(e2));
    }
    let (c1, c2) = (d1.num_crossings(), d2.num_crossings());
    let (k1, k2) = (d1.num_endpoints(), d2.num_endpoints());
    let c = c1 + c2;
    let k = k1 + k2 - 2;
    let mut map1 = vec![usize::MAX; d1.num_half_edges()];
    let mut map2 = vec![usize::MAX; d2.num_half_edges()];
    for h in 0..4 * c1 {
        map1[h] = h;
    }
    for h in 0..4 * c2 {
        map2[h] = 4 * c1 + h;
    }
    let mut next = 4 * c;
    for j in 1..k1 {
        map1[d1.endpoint_half_edge((e1 + j) % k1)] = next;
        next += 1;
    }
    for j in 1..k2 {
        map2[d2.endpoint_half_edge((e2 + j) % k2)] = next;
        next += 1;
    }
    let mut partner = vec![usize::MAX; 4 * c + k];
    let skip1 = d1.endpoint_half_edge(e1);
    let skip2 = d2.endpoint_half_edge(e2);
    for h in 0..d1.num_half_edges() {
        let p = d1.partner(h);
        if h != skip1 && p != skip1 {
            partner[map1[h]] = map1[p];
        }
    }
    for h in 0..d2.num_half_edges() {
        let p = d2.partner(h);
        if h != skip2 && p != skip2 {
            partner[map2[h]] = map2[p];
        }
    }
    let (a, b) = (map1[d1.partner(skip1)], map2[d2.partner(skip2)]);
    partner[a] = b;
    partner[b] = a;
    debug_assert!(matches!(d1.slot(skip1), Slot::Endpoint(_)));
    Divide::from_partner(c, k, partner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divide::{build_divide, canonical_label, counts, RawDivide, SignedGaussCode};

    fn teardrop() -> Divide {
        SignedGaussCode::arc(vec![0, 0], vec![1]).to_divide().unwrap()
    }

    fn chord() -> Divide {
        build_divide(&RawDivide {
            crossings: vec![],
            endpoints: vec![0, 1],
            edges: vec![vec![0, 1]],
        })
        .unwrap()
    }

    #[test]
    fn chord_sum_is_a_chord() {
        let s = connected_sum(&chord(), &chord(), 0, 1).unwrap();
        assert_eq!(s.num_crossings(), 0);
        assert_eq!(s.num_endpoints(), 2);
        assert_eq!(canonical_label(&s).key, canonical_label(&chord()).key);
    }

    #[test]
    fn teardrop_sum_adds_counts() {
        let s = connected_sum(&teardrop(), &teardrop(), 0, 0).unwrap();
        let c = counts(&s).unwrap();
        assert_eq!((c.d, c.mu, c.r_open), (2, 4, 1));
    }

    #[test]
    fn bad_endpoint_is_rejected() {
        assert_eq!(
            connected_sum(&chord(), &chord(), 2, 0).unwrap_err(),
            DivideError::NotAnEndpoint(2)
        );
    }

    #[test]
    fn teardrop_has_no_triangle() {
        let d = teardrop();
        assert!(triangle_faces(&d).unwrap().is_empty());
        assert!(matches!(
            apply_move_iii(&d, 0),
            Err(DivideError::NotATriangle(_) | DivideError::BoundaryFace(_))
        ));
    }
}
