//! Command-line surface. Every subcommand prints JSON to stdout (render commands write a
//! PPM file and print a short JSON summary).
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input, 3 not resolvable at the
//! requested resolution.

use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::centers::{all_centers, family_report, rotation_profile};
use crate::classes::class_report;
use crate::error::Error;
use crate::map::MapParams;
use crate::orbit::{newton_periodic, CLASSIFY_MAX_ITER};
use crate::regions::{GridSpec, RegionMap};
use crate::render::{default_parameter_window, render, Palette, Plane, RenderSpec};
use crate::symbolic::itinerary_of;

#[derive(Parser, Debug)]
#[command(name = "checkerboard", version, about = "Dynamics of z^n + lambda / z^d")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PaletteArg {
    EscapeShade,
    RegionLabels,
}

impl From<PaletteArg> for Palette {
    fn from(p: PaletteArg) -> Self {
        match p {
            PaletteArg::EscapeShade => Palette::EscapeShade,
            PaletteArg::RegionLabels => Palette::RegionLabels,
        }
    }
}

/// `re,im,half_width`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub center: Complex64,
    pub half_width: f64,
}

impl FromStr for Window {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [re, im, half] = parts.as_slice() else {
            return Err(format!("expected re,im,half_width, got {s:?}"));
        };
        let num = |t: &str| t.parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
        Ok(Window {
            center: Complex64::new(num(re)?, num(im)?),
            half_width: num(half)?,
        })
    }
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    Complex64::from_str(s.trim()).map_err(|e| format!("{s:?} is not a complex number: {e}"))
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Escape Trichotomy label certified by region flood fill.
    Classify {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        lambda: Complex64,
        #[arg(long, default_value_t = 1024)]
        resolution: usize,
        #[arg(long, default_value_t = CLASSIFY_MAX_ITER)]
        max_iter: usize,
        /// Defaults to a square of half width 1.05 R around the origin.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<Window>,
    },
    /// Centers of the principal main cardioids with rotation numbers.
    Centers {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
    },
    /// Component index map and rotation numbers at a center (all centers without --k).
    Rotation {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        k: Option<u32>,
    },
    /// Conjugacy classes of the main cardioids; with --max-n/--max-d sweeps a grid.
    Classes {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        max_n: Option<u32>,
        #[arg(long)]
        max_d: Option<u32>,
    },
    /// Sector itinerary of a Julia point at the center lambda_k.
    Itinerary {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 0)]
        k: u32,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Complex64,
        #[arg(long, default_value_t = 30)]
        length: usize,
        #[arg(long, default_value_t = 1024)]
        resolution: usize,
        /// Newton-refine `z` as a periodic point of this period first.
        #[arg(long)]
        polish: Option<usize>,
    },
    /// Render the dynamical plane to a PPM file.
    RenderJulia {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        lambda: Complex64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        window: Option<Window>,
        #[arg(long, default_value_t = 512)]
        resolution: usize,
        #[arg(long, default_value_t = 500)]
        max_iter: usize,
        #[arg(long, value_enum, default_value = "escape-shade")]
        palette: PaletteArg,
    },
    /// Render the parameter plane of a family to a PPM file.
    RenderParam {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        window: Option<Window>,
        #[arg(long, default_value_t = 512)]
        resolution: usize,
        #[arg(long, default_value_t = 500)]
        max_iter: usize,
        #[arg(long, value_enum, default_value = "escape-shade")]
        palette: PaletteArg,
    },
}

#[derive(Debug)]
pub enum Failure {
    Domain(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Domain(e) if e.is_resolution_issue() => 3,
            Failure::Domain(_) => 2,
            Failure::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Domain(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

fn grid(window: Option<Window>, fallback: GridSpec, resolution: usize) -> Result<GridSpec, Error> {
    match window {
        Some(w) => GridSpec::new(w.center, w.half_width, resolution),
        None => GridSpec::new(fallback.center, fallback.half_width, resolution),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

#[derive(Serialize)]
struct RenderSummary {
    out: String,
    width: usize,
    height: usize,
    center_re: f64,
    center_im: f64,
    half_width: f64,
}

fn write_render(spec: &RenderSpec, out: &PathBuf) -> Result<String, Failure> {
    let image = render(spec)?;
    image.write_ppm(out)?;
    Ok(json(&RenderSummary {
        out: out.display().to_string(),
        width: image.width,
        height: image.height,
        center_re: spec.grid.center.re,
        center_im: spec.grid.center.im,
        half_width: spec.grid.half_width,
    }))
}

/// Runs one command and returns the text to print.
pub fn execute(command: Command) -> Result<String, Failure> {
    match command {
        Command::Classify {
            n,
            d,
            lambda,
            resolution,
            max_iter,
            window,
        } => {
            let params = MapParams::new(n, d, lambda)?;
            let spec = grid(window, GridSpec::covering(&params, 64)?, resolution)?;
            let map = RegionMap::build(&params, &spec, max_iter)?;
            Ok(json(&map.report()?))
        }
        Command::Centers { n, d } => Ok(json(&family_report(n, d)?)),
        Command::Rotation { n, d, k } => match k {
            Some(k) => Ok(json(&rotation_profile(n, d, k)?)),
            None => {
                let profiles = (0..all_centers(n, d)?.len() as u32)
                    .map(|k| rotation_profile(n, d, k))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(json(&profiles))
            }
        },
        Command::Classes { n, d, max_n, max_d } => {
            if max_n.is_none() && max_d.is_none() {
                return Ok(json(&class_report(n, d)?));
            }
            let (max_n, max_d) = (max_n.unwrap_or(n), max_d.unwrap_or(d));
            let mut reports = Vec::new();
            for nn in n..=max_n {
                for dd in d..=max_d {
                    reports.push(class_report(nn, dd)?);
                }
            }
            Ok(json(&reports))
        }
        Command::Itinerary {
            n,
            d,
            k,
            z,
            length,
            resolution,
            polish,
        } => {
            let center = all_centers(n, d)?
                .into_iter()
                .find(|c| c.k == k)
                .ok_or(Error::CardioidIndex { n, k })?;
            let params = MapParams::new(n, d, center.lambda)?;
            let spec = GridSpec::covering(&params, resolution)?;
            let map = RegionMap::build(&params, &spec, CLASSIFY_MAX_ITER)?;
            let z = match polish {
                Some(period) => newton_periodic(&params, z, period, 100).ok_or_else(|| {
                    Error::InvalidParams(format!("Newton's method for period {period} did not converge from {z}"))
                })?,
                None => z,
            };
            let reading = itinerary_of(&params, &map, z, length)?;
            #[derive(Serialize)]
            struct Out {
                display: String,
                twin_display: Option<String>,
                #[serde(flatten)]
                reading: crate::symbolic::ItineraryReading,
            }
            Ok(json(&Out {
                display: reading.itinerary.to_string(),
                twin_display: reading.twin.as_ref().map(ToString::to_string),
                reading,
            }))
        }
        Command::RenderJulia {
            n,
            d,
            lambda,
            out,
            window,
            resolution,
            max_iter,
            palette,
        } => {
            let params = MapParams::new(n, d, lambda)?;
            let spec = grid(window, GridSpec::covering(&params, 64)?, resolution)?;
            let spec = RenderSpec::new(Plane::Dynamical(params), spec, max_iter, palette.into())?;
            write_render(&spec, &out)
        }
        Command::RenderParam {
            n,
            d,
            out,
            window,
            resolution,
            max_iter,
            palette,
        } => {
            let fallback = default_parameter_window(n, d, 64)?;
            let spec = grid(window, fallback, resolution)?;
            let spec = RenderSpec::new(Plane::Parameter { n, d }, spec, max_iter, palette.into())?;
            write_render(&spec, &out)
        }
    }
}

/// Parses `args`, runs the command, prints the result, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(text) => {
            // A closed pipe downstream is not an error worth a panic.
            let _ = writeln!(std::io::stdout(), "{text}");
            0
        }
        Err(failure) => {
            eprintln!("error: {failure}");
            failure.exit_code()
        }
    }
}
