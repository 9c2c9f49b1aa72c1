use dividelab::divide::{
    apply_move_iii, canonical_label, connected_sum, counts, regions, triangle_faces, Divide,
};
use dividelab::generators::{cable, chebyshev_divide, puiseux_divide, PuiseuxPairs};
use dividelab::homology::{
    alexander, monodromy, order_profile, seifert, torus_knot_alexander, vanishing_basis, IntPoly,
    OrderProfile,
};
use dividelab::report::analyze;

fn alex(d: &Divide) -> IntPoly {
    let basis = vanishing_basis(d).unwrap();
    alexander(&seifert(d, &basis))
}

#[test]
fn identities_hold_on_generated_divides() {
    let mut divides = Vec::new();
    for (p, q) in [(2, 3), (2, 5), (3, 4), (3, 5), (2, 9), (4, 5)] {
        divides.push(chebyshev_divide(p, q).unwrap());
    }
    for text in ["(2,3),(2,7)", "(2,3),(3,11)", "(3,4),(2,13)"] {
        divides.push(puiseux_divide(&text.parse().unwrap()).unwrap());
    }
    for d in &divides {
        let report = analyze(d).unwrap();
        for check in &report.checks {
            assert!(check.pass, "{} fails on {}", check.name, report.key);
        }
    }
}

#[test]
fn torus_knot_alexander_polynomials() {
    for (p, q) in [(2, 3), (2, 5), (3, 4), (3, 5), (2, 11), (5, 7)] {
        let d = chebyshev_divide(p, q).unwrap();
        assert_eq!(alex(&d), torus_knot_alexander(p, q), "P_{{{p},{q}}}");
    }
}

#[test]
fn cable_alexander_matches_satellite_formula() {
    // (p, λ)-cable of the trefoil: Δ_{2,3}(t^p) · Δ_{p,λ}(t)
    for (text, p, lambda) in [("(2,3),(2,7)", 2, 13), ("(2,3),(3,11)", 3, 20)] {
        let d = puiseux_divide(&text.parse::<PuiseuxPairs>().unwrap()).unwrap();
        let expected = torus_knot_alexander(2, 3)
            .compose_power(p as usize)
            .mul(&torus_knot_alexander(p, lambda));
        assert_eq!(alex(&d), expected, "{text}");
    }
}

#[test]
fn iterated_cable_has_period_156() {
    let d = puiseux_divide(&"(2,3),(2,7)".parse().unwrap()).unwrap();
    let basis = vanishing_basis(&d).unwrap();
    let t = monodromy(&seifert(&d, &basis));
    assert!(t.pow(156).is_identity());
    assert!(order_profile(&t, None).unwrap().is_finite());
}

#[test]
fn connected_sum_multiplies_alexander() {
    let a = chebyshev_divide(2, 3).unwrap();
    let b = chebyshev_divide(2, 5).unwrap();
    let s = connected_sum(&a, &b, 0, 1).unwrap();
    assert_eq!(counts(&s).unwrap().mu, 6);
    assert_eq!(alex(&s), alex(&a).mul(&alex(&b)));
}

#[test]
fn third_move_preserves_invariants() {
    let d = chebyshev_divide(3, 4).unwrap();
    let faces = triangle_faces(&d).unwrap();
    assert!(!faces.is_empty(), "P_{{3,4}} has a triangle");
    for f in faces {
        let e = apply_move_iii(&d, f).unwrap();
        let (ce, cd) = (counts(&e).unwrap(), counts(&d).unwrap());
        assert_eq!((ce.d, ce.r_open, ce.b, ce.mu, ce.mu_zero), (cd.d, cd.r_open, cd.b, cd.mu, cd.mu_zero));
        // the flipped triangle changes colour
        assert_eq!(ce.mu_plus.abs_diff(cd.mu_plus), 1);
        assert_eq!(alex(&e), alex(&d));
        // the move is an involution at the triangle on the same three crossings
        let crossings = |d: &Divide, f: usize| -> Vec<usize> {
            regions(d).unwrap().regions[f].corners.iter().map(|c| c.0).collect()
        };
        let mine = crossings(&d, f);
        let g = triangle_faces(&e)
            .unwrap()
            .into_iter()
            .find(|&g| crossings(&e, g) == mine)
            .expect("flipped triangle");
        let back = apply_move_iii(&e, g).unwrap();
        assert_eq!(canonical_label(&back).key, canonical_label(&d).key);
        assert_ne!(canonical_label(&e).key, canonical_label(&d).key);
    }
}

#[test]
fn order_profile_of_trefoil() {
    let d = cable(2, 3, &chebyshev_divide(1, 2).unwrap()).unwrap();
    let basis = vanishing_basis(&d).unwrap();
    let t = monodromy(&seifert(&d, &basis));
    assert_eq!(order_profile(&t, None).unwrap(), OrderProfile::Finite { order: 6 });
}
