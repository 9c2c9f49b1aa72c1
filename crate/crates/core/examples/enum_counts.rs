//! Prints divide counts per number of double points under several equivalences.
use dividelab::divide::KeyOptions;
use dividelab::enumerate::enumerate_divides_with;

fn main() {
    let max_g: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    for (name, reflections, branch_reversal) in [
        ("mirror + reversal", true, true),
        ("mirror only", true, false),
        ("reversal only", false, true),
        ("neither", false, false),
    ] {
        let options = KeyOptions { reflections, branch_reversal };
        let counts: Vec<usize> = (0..=max_g).map(|g| enumerate_divides_with(g, options).len()).collect();
        println!("{name:>18}: {counts:?}");
    }
}
