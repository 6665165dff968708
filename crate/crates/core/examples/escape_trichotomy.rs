//! The four kinds of Julia set, decided first by following the critical value and then
//! certified on a labeled grid.
//!
//! cargo run --release --example escape_trichotomy

use checkerboard::orbit::{classify_fast, CLASSIFY_MAX_ITER};
use checkerboard::{classify_certified, GridSpec, MapParams};
use num_complex::Complex64;

fn main() -> checkerboard::Result<()> {
    let cases = [
        ("Cantor set", 2, 1, Complex64::new(5.0, 0.0)),
        ("McMullen domain", 3, 3, Complex64::new(0.0005, 0.0)),
        ("Sierpinski hole", 3, 3, Complex64::new(-0.1725, -0.1245)),
        ("checkerboard", 4, 3, Complex64::new(0.18, 0.0)),
    ];
    for (name, n, d, lambda) in cases {
        let params = MapParams::new(n, d, lambda)?;
        let fast = classify_fast(&params, CLASSIFY_MAX_ITER);
        let grid = GridSpec::covering(&params, 1024)?;
        let certified = classify_certified(&params, &grid, CLASSIFY_MAX_ITER)?;
        println!(
            "{name:>16}  n={n} d={d} lambda={lambda}:  fast {:?}, grid {:?}",
            fast.label, certified.label
        );
    }
    Ok(())
}
