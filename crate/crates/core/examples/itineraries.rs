//! Sector itineraries of repelling periodic points of z^3 + 1/(8 z^3), including the two
//! itineraries of the junction point on the positive real axis.
//!
//! cargo run --release --example itineraries

use checkerboard::orbit::{find_periodic_points, newton_periodic, Rect};
use checkerboard::{build_region_map, itinerary_of, GridSpec, MapParams};
use num_complex::Complex64;

fn main() -> checkerboard::Result<()> {
    let params = MapParams::real(3, 3, 0.125)?;
    let grid = GridSpec::new(Complex64::new(0.0, 0.0), 1.5, 1024)?;
    let map = build_region_map(&params, &grid, 1000)?;

    let q0 = newton_periodic(&params, Complex64::new(0.9, 0.0), 1, 50).expect("fixed point");
    let reading = itinerary_of(&params, &map, q0, 20)?;
    println!("q0 = {q0:.12}: {}  (twin {})", reading.itinerary, reading.twin.unwrap());

    let search = Rect::centered(Complex64::new(0.0, 0.0), 1.2);
    for period in 1..=2 {
        let points = find_periodic_points(&params, period, search, 48);
        let repelling: Vec<_> = points.iter().filter(|p| p.is_repelling()).collect();
        println!("period {period}: {} repelling points", repelling.len());
        for p in repelling.iter().take(8) {
            match itinerary_of(&params, &map, p.z, 20) {
                Ok(r) => println!("  {:.5}  {}", p.z, r.itinerary),
                Err(e) => println!("  {:.5}  {e}", p.z),
            }
        }
    }
    Ok(())
}
