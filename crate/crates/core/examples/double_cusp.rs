//! Regenerates `tests/fixtures/double_cusp.json`: a morsified cusp together
//! with a copy rotated by a quarter turn and shifted off the diagonal.

use dividelab::tracer::{combinatorialize_polylines, trace, ParamCurve, TraceOptions};
use num_rational::Rational64;

fn main() {
    let radius = 1.0;
    let shift = 0.1;
    let cusp = ParamCurve::monomial(2, 3, Rational64::from_integer(1)).expect("valid curve");
    let options = TraceOptions {
        samples: 2000,
        radius: Some(radius),
        ..Default::default()
    };
    let traced = trace(&cusp, &options).expect("cusp traces cleanly");
    let a: Vec<(f64, f64)> = traced.samples.iter().map(|&(_, x, y)| (x, y)).collect();
    // the shifted copy overshoots the circle; pull its ends back onto it
    let b: Vec<(f64, f64)> = a
        .iter()
        .map(|&(x, y)| (-y + shift, x + shift))
        .map(|(x, y)| {
            let r = x.hypot(y);
            if r > radius {
                (x * radius / r, y * radius / r)
            } else {
                (x, y)
            }
        })
        .collect();
    let d = combinatorialize_polylines(&[a, b]).expect("generic position");
    println!("{}", d.to_json());
}
