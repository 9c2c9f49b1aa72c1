//! Vanishing cycles, Seifert form, monodromy and the ribbon model of the Milnor fiber.

mod matrix;
mod order;
mod poly;
mod ribbon;
mod seifert;

pub use matrix::IntMatrix;
pub use order::{cyclotomic_factors, cyclotomic_period, order_profile, OrderProfile};
pub use poly::IntPoly;
pub use ribbon::{ribbon_fiber, RibbonEdge, RibbonSurface, RibbonVertex};
pub use seifert::{
    alexander, conjugation, distinguished_word, monodromy, mu_identity_check, seifert,
    transvection_product, vanishing_basis, SeifertData, VanishingBasis, VanishingCycle,
    TRANSVECTION_SIGN,
};

/// Alexander polynomial of the `(p, q)` torus knot,
/// `(t^{pq} − 1)(t − 1) / ((t^p − 1)(t^q − 1))`.
pub fn torus_knot_alexander(p: u64, q: u64) -> IntPoly {
    let (p, q) = (p as usize, q as usize);
    let num = IntPoly::t_pow_minus_one(p * q).mul(&IntPoly::t_pow_minus_one(1));
    let den = IntPoly::t_pow_minus_one(p).mul(&IntPoly::t_pow_minus_one(q));
    num.exact_div(&den).expect("torus knot quotient is exact")
}
