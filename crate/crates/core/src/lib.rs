//! Dynamics of the rational family `F(z) = z^n + lambda / z^d`: symmetry, escape
//! classification, labeled region maps of the dynamical plane, the centers of the
//! principal main cardioids with their rotation numbers, conjugacy-class counts, sector
//! itineraries, and deterministic rendering.

pub mod centers;
pub mod classes;
pub mod cli;
pub mod error;
pub mod map;
pub mod orbit;
pub mod regions;
pub mod render;
pub mod symbolic;

pub use error::{Error, Result};
pub use map::{CriticalData, MapParams, Tolerances};
pub use orbit::{Trichotomy, TrichotomyLabel};
pub use regions::{build_region_map, classify_certified, GridSpec, Label, RegionMap};
pub use symbolic::{itinerary_of, quotient_equal, Itinerary};
