//! Centers of the principal main cardioids of z^13 + lambda/z^7, the induced map on
//! connecting components, and the minimal rotation numbers that separate conjugacy classes.
//!
//! cargo run --example rotation_numbers

use checkerboard::centers::{all_centers, are_conjugate, rotation_profile};

fn main() -> checkerboard::Result<()> {
    let (n, d) = (13, 7);
    for center in all_centers(n, d)? {
        let profile = rotation_profile(n, d, center.k)?;
        println!(
            "k={:>2}  lambda={:+.5}{:+.5}i  rho_min={}  rho={:?}",
            center.k, center.lambda.re, center.lambda.im, profile.rho_min, profile.rho
        );
    }
    for (k1, k2) in [(0, 4), (1, 3), (0, 2)] {
        let c = are_conjugate(n, d, k1, k2)?;
        println!("M_{k1} ~ M_{k2}: {} {:?}", c.conjugate, c.witness);
    }
    Ok(())
}
