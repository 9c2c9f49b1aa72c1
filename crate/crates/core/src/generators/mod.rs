//! Divides from Puiseux data: Chebyshev box divides and the star-product cabling.

mod cable;
mod chebyshev;
mod puiseux;

pub use cable::{cable, cable_with, puiseux_divide, PatternPlacement};
pub use chebyshev::{box_crossings, chebyshev_divide, BoxCrossing};
pub use puiseux::{puiseux_to_plan, reduction_count, CablingPlan, PuiseuxPairs};
