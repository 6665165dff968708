//! Deterministic images of the dynamical and parameter planes, written as binary PPM.

use std::io::{self, Write};
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::centers::all_centers;
use crate::error::{Error, Result};
use crate::map::MapParams;
use crate::regions::{GridSpec, Label, RegionMap};

pub const MAX_RESOLUTION: usize = 8192;
pub const MAX_ITER_LIMIT: usize = 1_000_000;

/// RGB8 raster, row-major, top row first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl Image {
    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = 3 * (y * self.width + x);
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }

    pub fn write_ppm(&self, path: impl AsRef<Path>) -> io::Result<()> {
        let mut file = io::BufWriter::new(std::fs::File::create(path)?);
        file.write_all(&self.to_ppm())?;
        file.flush()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Plane {
    Dynamical(MapParams),
    Parameter { n: u32, d: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Palette {
    EscapeShade,
    RegionLabels,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RenderSpec {
    pub plane: Plane,
    pub grid: GridSpec,
    pub max_iter: usize,
    pub palette: Palette,
}

impl RenderSpec {
    pub fn new(plane: Plane, grid: GridSpec, max_iter: usize, palette: Palette) -> Result<Self> {
        if grid.resolution > MAX_RESOLUTION {
            return Err(Error::InvalidGrid(format!("resolution {} exceeds {MAX_RESOLUTION}", grid.resolution)));
        }
        if max_iter == 0 || max_iter > MAX_ITER_LIMIT {
            return Err(Error::InvalidParams(format!("max_iter {max_iter} outside 1..={MAX_ITER_LIMIT}")));
        }
        if let Plane::Parameter { n, d } = plane {
            if n < 2 || d < 1 {
                return Err(Error::InvalidParams(format!("need n >= 2 and d >= 1, got n = {n}, d = {d}")));
            }
            if palette == Palette::RegionLabels {
                return Err(Error::InvalidParams("region labels exist only for the dynamical plane".into()));
            }
        }
        Ok(RenderSpec {
            plane,
            grid,
            max_iter,
            palette,
        })
    }
}

/// Square window around the origin framing all principal Mandelbrot sets: half width
/// `2.4 |lambda_0|` when the family has them, 1 otherwise.
pub fn default_parameter_window(n: u32, d: u32, resolution: usize) -> Result<GridSpec> {
    let half = match all_centers(n, d) {
        Ok(centers) => 2.4 * centers[0].lambda.norm(),
        Err(_) => 1.0,
    };
    GridSpec::new(Complex64::new(0.0, 0.0), half, resolution)
}

/// Red ramp for escaping pixels: never black, brighter for slower escape.
pub fn escape_shade(iterations: u32) -> [u8; 3] {
    let ramp = 1.0 - (-(iterations as f64) / 32.0).exp();
    [(96.0 + (159.0 * ramp).round()) as u8, 0, 0]
}

fn escape_count(params: &MapParams, z0: Complex64, radius: f64, max_iter: usize) -> Option<u32> {
    let mut z = z0;
    for k in 0..=max_iter {
        if !(z.re.is_finite() && z.im.is_finite()) || z.norm() > radius {
            return Some(k as u32);
        }
        if k < max_iter {
            z = params.apply(z);
        }
    }
    None
}

fn shade(count: Option<u32>) -> [u8; 3] {
    count.map_or([0, 0, 0], escape_shade)
}

fn fill_rows(grid: &GridSpec, color: impl Fn(usize, usize) -> [u8; 3] + Sync) -> Image {
    let res = grid.resolution;
    let mut pixels = vec![0u8; 3 * res * res];
    pixels.par_chunks_mut(3 * res).enumerate().for_each(|(y, row)| {
        for x in 0..res {
            row[3 * x..3 * x + 3].copy_from_slice(&color(x, y));
        }
    });
    Image {
        width: res,
        height: res,
        pixels,
    }
}

fn hue(j: u32, count: u32) -> [u8; 3] {
    // Dark, evenly spaced hues.
    let h = 6.0 * j as f64 / count.max(1) as f64;
    let x = 1.0 - (h % 2.0 - 1.0).abs();
    let (r, g, b) = match h as u32 {
        0 => (1.0, x, 0.0),
        1 => (x, 1.0, 0.0),
        2 => (0.0, 1.0, x),
        3 => (0.0, x, 1.0),
        4 => (x, 0.0, 1.0),
        _ => (1.0, 0.0, x),
    };
    let v = 110.0;
    [(r * v) as u8, (g * v) as u8, (b * v) as u8]
}

pub fn label_color(label: Label, n_connecting: usize) -> [u8; 3] {
    match label {
        Label::Basin => [200, 20, 20],
        Label::TrapDoor => [255, 110, 40],
        Label::EscapingOther(id) => [150 + (id * 37 % 90) as u8, 30, 30],
        Label::Connecting(j) => hue(j, n_connecting as u32),
        Label::FatouOther(_) => [12, 12, 12],
        Label::JuliaApprox => [255, 255, 255],
    }
}

pub fn render_dynamical(spec: &RenderSpec) -> Result<Image> {
    let Plane::Dynamical(params) = spec.plane else {
        return Err(Error::InvalidParams("dynamical render needs map parameters".into()));
    };
    let grid = spec.grid;
    match spec.palette {
        Palette::EscapeShade => {
            let radius = params.escape_radius();
            Ok(fill_rows(&grid, |x, y| shade(escape_count(&params, grid.point(x, y), radius, spec.max_iter))))
        }
        Palette::RegionLabels => {
            let map = RegionMap::build(&params, &grid, spec.max_iter)?;
            let n = map.n_connecting();
            Ok(fill_rows(&grid, |x, y| label_color(map.label(x, y), n)))
        }
    }
}

/// Each pixel is a parameter; the orbit of the critical value `F(c^0)` is followed.
pub fn render_parameter(spec: &RenderSpec) -> Result<Image> {
    let Plane::Parameter { n, d } = spec.plane else {
        return Err(Error::InvalidParams("parameter render needs a family".into()));
    };
    let grid = spec.grid;
    Ok(fill_rows(&grid, |x, y| {
        let lambda = grid.point(x, y);
        match MapParams::new(n, d, lambda) {
            Ok(params) => {
                let v = params.apply(params.principal_critical_point());
                shade(escape_count(&params, v, params.escape_radius(), spec.max_iter))
            }
            Err(_) => [0, 0, 0],
        }
    }))
}

pub fn render(spec: &RenderSpec) -> Result<Image> {
    match spec.plane {
        Plane::Dynamical(_) => render_dynamical(spec),
        Plane::Parameter { .. } => render_parameter(spec),
    }
}
