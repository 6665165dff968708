//! Writes PPM images of a checkerboard Julia set and two parameter planes to the
//! directory given as the first argument (default: current directory).
//!
//! cargo run --release --example render_figures -- /tmp

use std::path::PathBuf;

use checkerboard::render::{default_parameter_window, render, Palette, Plane, RenderSpec};
use checkerboard::{GridSpec, MapParams};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    let origin = Complex64::new(0.0, 0.0);

    let julia = MapParams::real(4, 3, 0.18)?;
    let jobs = [
        (
            "julia_4_3_labels.ppm",
            RenderSpec::new(Plane::Dynamical(julia), GridSpec::new(origin, 1.5, 768)?, 1000, Palette::RegionLabels)?,
        ),
        (
            "julia_4_3_shade.ppm",
            RenderSpec::new(Plane::Dynamical(julia), GridSpec::new(origin, 1.5, 768)?, 500, Palette::EscapeShade)?,
        ),
        (
            "param_3_3.ppm",
            RenderSpec::new(Plane::Parameter { n: 3, d: 3 }, GridSpec::new(origin, 0.5, 768)?, 300, Palette::EscapeShade)?,
        ),
        (
            "param_4_4.ppm",
            RenderSpec::new(Plane::Parameter { n: 4, d: 4 }, default_parameter_window(4, 4, 768)?, 300, Palette::EscapeShade)?,
        ),
    ];
    for (name, spec) in jobs {
        let path = dir.join(name);
        render(&spec)?.write_ppm(&path)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
