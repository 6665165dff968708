//! Labels the dynamical plane of z^4 + 0.18/z^3 and reports the checkerboard structure:
//! seven connecting components between the basin of infinity and the trap door, with no
//! two escaping regions in contact.
//!
//! cargo run --release --example checkerboard_regions

use checkerboard::{build_region_map, GridSpec, MapParams};
use num_complex::Complex64;

fn main() -> checkerboard::Result<()> {
    let params = MapParams::real(4, 3, 0.18)?;
    let grid = GridSpec::new(Complex64::new(0.0, 0.0), 1.5, 1024)?;
    let map = build_region_map(&params, &grid, 1000)?;
    let stats = map.checkerboard_stats();

    println!("components: {:?}", map.component_count());
    println!("connecting components: {}", stats.n_connecting);
    println!("red-red adjacencies: {}", stats.red_red_adjacencies);
    println!("black-black adjacencies: {}", stats.black_black_adjacencies);
    for (i, cycle) in map.attracting_cycles().iter().enumerate() {
        println!("attracting cycle {i}: period {}, |multiplier| {:.2e}", cycle.period(), cycle.multiplier_modulus);
    }
    for j in 0..stats.n_connecting {
        let comp = map.connecting_component(j).unwrap();
        println!(
            "  C^{j}: centroid {:.4}, {} px, cycle {:?}",
            comp.centroid,
            comp.pixel_count,
            map.connecting_cycle(j)
        );
    }
    for pair in stats.junction_estimates.chunks(2) {
        println!("  junctions: outer {:.4}  inner {:.4}", pair[0], pair[1]);
    }
    println!("{}", serde_json::to_string_pretty(&map.report()?).unwrap());
    Ok(())
}
