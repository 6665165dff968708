//! Labeled grids of the dynamical plane.
//!
//! Every pixel center is iterated. Escaping pixels carry their escape iteration and a
//! distance estimate to the Julia set; pixels closer than a fraction of a pixel are treated
//! as boundary ("thin") so that Fatou components separated only by the Julia set, such as
//! the basin and the trap door of a Cantor-circle map, do not merge. Non-escaping pixels are
//! matched to the attracting cycles of the critical orbits and to the phase of the cycle
//! point they approach, so that the immediate basins of different cycle points stay apart.
//!
//! Components are 8-connected. Thin pixels are afterwards handed to the nearest escaping
//! component (breadth first), which restores contact between escaping and non-escaping
//! regions without merging distinct escaping components.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{arg_nonneg, MapParams};
use crate::orbit::{
    classify_fast, find_attracting_cycles, iterate_orbit, AttractingCycle, Basis, Fate, Trichotomy,
    TrichotomyLabel, POLE_EPS, PRECISION_MAX_ITER,
};

/// Escaping pixels whose distance estimate is below this many pixel widths count as boundary.
pub const THIN_FRACTION: f64 = 0.5;

/// Julia points within this many pixels of a sector ray carry two candidate digits.
pub const SECTOR_TIE_PIXELS: f64 = 2.0;

/// Points this close (in radians) to a sector ray are taken to lie on it.
pub const ON_RAY_ANGLE: f64 = 1e-9;

/// Square viewport sampled at pixel centers, row 0 at the top.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub center: Complex64,
    pub half_width: f64,
    pub resolution: usize,
}

impl GridSpec {
    pub fn new(center: Complex64, half_width: f64, resolution: usize) -> Result<Self> {
        if resolution < 64 {
            return Err(Error::InvalidGrid(format!("resolution {resolution} is below 64")));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidGrid(format!("half width {half_width} must be positive")));
        }
        Ok(GridSpec {
            center,
            half_width,
            resolution,
        })
    }

    /// Centered at the origin with a half width of `1.05 R`, which keeps the whole Julia set
    /// and every bounded critical value inside.
    pub fn covering(params: &MapParams, resolution: usize) -> Result<Self> {
        Self::new(Complex64::new(0.0, 0.0), 1.05 * params.escape_radius(), resolution)
    }

    pub fn pixel_size(&self) -> f64 {
        2.0 * self.half_width / self.resolution as f64
    }

    /// Center of pixel `(ix, iy)`. Mirror-image pixels map to exactly negated offsets.
    pub fn point(&self, ix: usize, iy: usize) -> Complex64 {
        let step = self.half_width / self.resolution as f64;
        let res = self.resolution as f64;
        Complex64::new(
            self.center.re + (2.0 * ix as f64 + 1.0 - res) * step,
            self.center.im + (res - 1.0 - 2.0 * iy as f64) * step,
        )
    }

    pub fn pixel_of(&self, z: Complex64) -> Option<(usize, usize)> {
        let px = self.pixel_size();
        let fx = ((z.re - (self.center.re - self.half_width)) / px).floor();
        let fy = (((self.center.im + self.half_width) - z.im) / px).floor();
        let res = self.resolution as f64;
        if fx >= 0.0 && fy >= 0.0 && fx < res && fy < res {
            Some((fx as usize, fy as usize))
        } else {
            None
        }
    }
}

/// Region label of a pixel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    Basin,
    TrapDoor,
    EscapingOther(u32),
    Connecting(u32),
    FatouOther(u32),
    JuliaApprox,
}

impl Label {
    pub fn is_escaping(&self) -> bool {
        matches!(self, Label::Basin | Label::TrapDoor | Label::EscapingOther(_))
    }

    /// Basin, trap door and connecting components: the Fatou pieces that define sectors.
    pub fn is_identified(&self) -> bool {
        matches!(self, Label::Basin | Label::TrapDoor | Label::Connecting(_))
    }

    fn category(&self) -> &'static str {
        match self {
            Label::Basin => "basin",
            Label::TrapDoor => "trap_door",
            Label::EscapingOther(_) => "escaping_other",
            Label::Connecting(_) => "connecting",
            Label::FatouOther(_) => "fatou_other",
            Label::JuliaApprox => "julia_approx",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum PixelFate {
    Escaped { iter: u32, thin: bool },
    /// Sub-basin index: one per point of each attracting cycle.
    Captured { basin: u32 },
    Undecided,
}

impl PixelFate {
    fn escaping(&self) -> bool {
        matches!(self, PixelFate::Escaped { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentKind {
    Escaping,
    /// Non-escaping, attracted to the given cycle.
    Fatou { cycle: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub kind: ComponentKind,
    pub label: Label,
    pub pixel_count: usize,
    pub centroid: Complex64,
}

/// Counts of components per category.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentCount {
    pub basin: usize,
    pub trap_door: usize,
    pub escaping_other: usize,
    pub connecting: usize,
    pub fatou_other: usize,
}

const NONE: u32 = u32::MAX;

/// Labeled dynamical plane.
#[derive(Debug, Clone)]
pub struct RegionMap {
    params: MapParams,
    spec: GridSpec,
    max_iter: usize,
    fates: Vec<PixelFate>,
    component_of: Vec<u32>,
    julia: Vec<bool>,
    components: Vec<Component>,
    cycles: Vec<AttractingCycle>,
    basin_cycle: Vec<usize>,
    basin_id: Option<u32>,
    trap_door_id: Option<u32>,
    /// Component ids of `Connecting(0..)`, in index order.
    connecting: Vec<u32>,
    sector_rays: Option<Vec<f64>>,
    adjacency: HashSet<(u32, u32)>,
    red_red: usize,
    black_black: usize,
    count: ComponentCount,
}

struct Attractor {
    point: Complex64,
    index: usize,
    period: usize,
    offset: usize,
}

fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

fn classify_pixel(
    params: &MapParams,
    z0: Complex64,
    radius: f64,
    attractors: &[Attractor],
    max_iter: usize,
    thin_distance: f64,
) -> PixelFate {
    let mut z = z0;
    let mut dz = Complex64::new(1.0, 0.0);
    for t in 0..=max_iter {
        if !finite(z) || z.norm() > radius {
            let thin = distance_estimate(params, z, dz) < thin_distance;
            return PixelFate::Escaped { iter: t as u32, thin };
        }
        if z.norm() <= POLE_EPS {
            return PixelFate::Escaped {
                iter: t as u32 + 1,
                thin: false,
            };
        }
        for a in attractors {
            if (z - a.point).norm() < 1e-6 * (1.0 + a.point.norm()) {
                let phase = (a.index + a.period - t % a.period) % a.period;
                return PixelFate::Captured {
                    basin: (a.offset + phase) as u32,
                };
            }
        }
        if t == max_iter {
            break;
        }
        let (f, df) = params.apply_with_derivative(z);
        dz *= df;
        z = f;
    }
    PixelFate::Undecided
}

/// Green-function distance estimate `|w| ln|w| / (2 |w'|)`, after pushing the escaped
/// orbit further out so the logarithm is accurate.
fn distance_estimate(params: &MapParams, z: Complex64, dz: Complex64) -> f64 {
    let (mut w, mut dw) = (z, dz);
    for _ in 0..8 {
        if !finite(w) || !finite(dw) || w.norm() > 1e4 {
            break;
        }
        let (f, df) = params.apply_with_derivative(w);
        dw *= df;
        w = f;
    }
    match (finite(w), finite(dw)) {
        (true, true) if dw.norm() > 0.0 => 0.5 * w.norm() * w.norm().ln() / dw.norm(),
        (true, false) => 0.0,
        _ => f64::INFINITY,
    }
}

const NEIGHBORS8: [(isize, isize); 8] = [(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)];

/// Groups 8-connected pixels with equal `Some` keys. Returns per-pixel ids and the count.
fn flood_fill(res: usize, keys: &[Option<u64>], start_id: u32, out: &mut [u32]) -> u32 {
    let mut next = start_id;
    let mut stack = Vec::new();
    for start in 0..keys.len() {
        let Some(key) = keys[start] else { continue };
        if out[start] != NONE {
            continue;
        }
        out[start] = next;
        stack.push(start);
        while let Some(p) = stack.pop() {
            let (x, y) = ((p % res) as isize, (p / res) as isize);
            for (dx, dy) in NEIGHBORS8 {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= res as isize || ny >= res as isize {
                    continue;
                }
                let q = ny as usize * res + nx as usize;
                if out[q] == NONE && keys[q] == Some(key) {
                    out[q] = next;
                    stack.push(q);
                }
            }
        }
        next += 1;
    }
    next
}

fn wrap_angle(a: f64) -> f64 {
    let mut r = a.rem_euclid(TAU);
    if r > PI {
        r -= TAU;
    }
    r
}

impl RegionMap {
    /// Iterates every pixel, labels components and assigns basin, trap door and
    /// connecting roles.
    pub fn build(params: &MapParams, spec: &GridSpec, max_iter: usize) -> Result<Self> {
        let res = spec.resolution;
        let radius = params.escape_radius();
        let cycles = find_attracting_cycles(params, PRECISION_MAX_ITER);

        let mut attractors = Vec::new();
        let mut basin_cycle = Vec::new();
        for (cid, cycle) in cycles.iter().enumerate() {
            let offset = basin_cycle.len();
            for (index, point) in cycle.points.iter().enumerate() {
                attractors.push(Attractor {
                    point: *point,
                    index,
                    period: cycle.period(),
                    offset,
                });
                basin_cycle.push(cid);
            }
        }

        let thin_distance = THIN_FRACTION * spec.pixel_size();
        let mut fates = vec![PixelFate::Undecided; res * res];
        fates.par_chunks_mut(res).enumerate().for_each(|(iy, row)| {
            for (ix, fate) in row.iter_mut().enumerate() {
                *fate = classify_pixel(params, spec.point(ix, iy), radius, &attractors, max_iter, thin_distance);
            }
        });

        // The basin must surround the picture.
        let border = (0..res)
            .flat_map(|i| [(i, 0), (i, res - 1), (0, i), (res - 1, i)])
            .map(|(x, y)| y * res + x);
        if border.clone().any(|p| !fates[p].escaping()) {
            return Err(Error::ViewportTooSmall(
                "non-escaping pixels on the viewport border".into(),
            ));
        }

        // Components: solid escaping pixels, then captured pixels per sub-basin.
        let keys: Vec<Option<u64>> = fates
            .iter()
            .map(|f| match f {
                PixelFate::Escaped { thin: false, .. } => Some(u64::MAX),
                PixelFate::Captured { basin } => Some(*basin as u64),
                _ => None,
            })
            .collect();
        let mut component_of = vec![NONE; res * res];
        let mut next = flood_fill(res, &keys, 0, &mut component_of);

        // Hand thin pixels to the nearest solid escaping component.
        let is_thin = |p: usize| matches!(fates[p], PixelFate::Escaped { thin: true, .. });
        let mut queue: VecDeque<usize> = (0..res * res)
            .filter(|&p| matches!(fates[p], PixelFate::Escaped { thin: false, .. }))
            .collect();
        while let Some(p) = queue.pop_front() {
            let (x, y) = ((p % res) as isize, (p / res) as isize);
            for (dx, dy) in NEIGHBORS8 {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= res as isize || ny >= res as isize {
                    continue;
                }
                let q = ny as usize * res + nx as usize;
                if component_of[q] == NONE && is_thin(q) {
                    component_of[q] = component_of[p];
                    queue.push_back(q);
                }
            }
        }
        let orphan_keys: Vec<Option<u64>> = (0..res * res)
            .map(|p| (component_of[p] == NONE && is_thin(p)).then_some(u64::MAX))
            .collect();
        next = flood_fill(res, &orphan_keys, next, &mut component_of);

        // Component statistics.
        let mut comps: Vec<Component> = (0..next)
            .map(|_| Component {
                kind: ComponentKind::Escaping,
                label: Label::JuliaApprox,
                pixel_count: 0,
                centroid: Complex64::new(0.0, 0.0),
            })
            .collect();
        for (p, &cid) in component_of.iter().enumerate() {
            if cid == NONE {
                continue;
            }
            let comp = &mut comps[cid as usize];
            comp.pixel_count += 1;
            comp.centroid += spec.point(p % res, p / res);
            if let PixelFate::Captured { basin } = fates[p] {
                comp.kind = ComponentKind::Fatou {
                    cycle: basin_cycle[basin as usize],
                };
            }
        }
        for comp in comps.iter_mut() {
            comp.centroid /= comp.pixel_count as f64;
        }

        let border_ids: HashSet<u32> = border.map(|p| component_of[p]).collect();
        if border_ids.len() != 1 || border_ids.contains(&NONE) {
            return Err(Error::ViewportTooSmall(format!(
                "{} escaping components meet the viewport border",
                border_ids.len()
            )));
        }
        let basin_id = *border_ids.iter().next().unwrap();

        let trap_door_id = Self::locate_trap_door(params, spec, &fates, &component_of, basin_id);

        // Pixel adjacency between components.
        let mut adjacency = HashSet::new();
        for y in 0..res {
            for x in 0..res {
                let p = y * res + x;
                let a = component_of[p];
                if a == NONE {
                    continue;
                }
                for (dx, dy) in [(1isize, 0isize), (-1, 1), (0, 1), (1, 1)] {
                    let (nx, ny) = (x as isize + dx, y as isize + dy);
                    if nx < 0 || nx >= res as isize || ny >= res as isize {
                        continue;
                    }
                    let q = ny as usize * res + nx as usize;
                    let b = component_of[q];
                    if b == NONE || b == a {
                        continue;
                    }
                    adjacency.insert((a.min(b), a.max(b)));
                }
            }
        }
        let adjacent = |a: u32, b: u32| adjacency.contains(&(a.min(b), a.max(b)));

        // Connecting components touch both the basin and the trap door.
        let crit0 = params.critical_data().critical_points[0];
        let mut connecting: Vec<u32> = match trap_door_id {
            Some(t) => (0..next)
                .filter(|&c| {
                    matches!(comps[c as usize].kind, ComponentKind::Fatou { .. })
                        && adjacent(c, basin_id)
                        && adjacent(c, t)
                })
                .collect(),
            None => Vec::new(),
        };
        if let Some(&first) = connecting.iter().min_by(|&&a, &&b| {
            let da = wrap_angle(arg_nonneg(comps[a as usize].centroid) - arg_nonneg(crit0)).abs();
            let db = wrap_angle(arg_nonneg(comps[b as usize].centroid) - arg_nonneg(crit0)).abs();
            da.total_cmp(&db)
        }) {
            let base = arg_nonneg(comps[first as usize].centroid);
            connecting.sort_by(|&a, &b| {
                let ra = (arg_nonneg(comps[a as usize].centroid) - base).rem_euclid(TAU);
                let rb = (arg_nonneg(comps[b as usize].centroid) - base).rem_euclid(TAU);
                // The anchor sorts first even if rounding puts it just below 2 pi.
                let ra = if a == first { -1.0 } else { ra };
                let rb = if b == first { -1.0 } else { rb };
                ra.total_cmp(&rb)
            });
        }

        // Labels.
        let mut count = ComponentCount::default();
        for (cid, comp) in comps.iter_mut().enumerate() {
            let cid = cid as u32;
            comp.label = if cid == basin_id {
                count.basin += 1;
                Label::Basin
            } else if Some(cid) == trap_door_id {
                count.trap_door += 1;
                Label::TrapDoor
            } else if let Some(j) = connecting.iter().position(|&c| c == cid) {
                count.connecting += 1;
                Label::Connecting(j as u32)
            } else if comp.kind == ComponentKind::Escaping {
                count.escaping_other += 1;
                Label::EscapingOther(count.escaping_other as u32 - 1)
            } else {
                count.fatou_other += 1;
                Label::FatouOther(count.fatou_other as u32 - 1)
            };
        }

        let sector_rays = Self::compute_sector_rays(params, &comps, &connecting);

        // Boundary mask: thin or undecided pixels, and pixels whose 4-neighborhood mixes
        // escaping with non-escaping fates or two different sub-basins.
        let mut julia = vec![false; res * res];
        for y in 0..res {
            for x in 0..res {
                let p = y * res + x;
                let here = fates[p];
                let mut mark = matches!(here, PixelFate::Undecided | PixelFate::Escaped { thin: true, .. });
                if !mark {
                    for (dx, dy) in [(1isize, 0isize), (-1, 0), (0, 1), (0, -1)] {
                        let (nx, ny) = (x as isize + dx, y as isize + dy);
                        if nx < 0 || ny < 0 || nx >= res as isize || ny >= res as isize {
                            continue;
                        }
                        let there = fates[ny as usize * res + nx as usize];
                        let differs = match (here, there) {
                            (PixelFate::Captured { basin: a }, PixelFate::Captured { basin: b }) => a != b,
                            _ => here.escaping() != there.escaping(),
                        };
                        if differs {
                            mark = true;
                            break;
                        }
                    }
                }
                julia[p] = mark;
            }
        }

        // Contacts between distinct components on the label grid, where boundary pixels
        // separate regions.
        let (mut red_red, mut black_black) = (0usize, 0usize);
        for y in 0..res {
            for x in 0..res {
                let p = y * res + x;
                let a = component_of[p];
                if a == NONE || julia[p] {
                    continue;
                }
                for (dx, dy) in [(1isize, 0isize), (-1, 1), (0, 1), (1, 1)] {
                    let (nx, ny) = (x as isize + dx, y as isize + dy);
                    if nx < 0 || nx >= res as isize || ny >= res as isize {
                        continue;
                    }
                    let q = ny as usize * res + nx as usize;
                    let b = component_of[q];
                    if b == NONE || b == a || julia[q] {
                        continue;
                    }
                    match (fates[p].escaping(), fates[q].escaping()) {
                        (true, true) => red_red += 1,
                        (false, false) => black_black += 1,
                        _ => {}
                    }
                }
            }
        }

        let map = RegionMap {
            params: *params,
            spec: *spec,
            max_iter,
            fates,
            component_of,
            julia,
            components: comps,
            cycles,
            basin_cycle,
            basin_id: Some(basin_id),
            trap_door_id,
            connecting,
            sector_rays,
            adjacency,
            red_red,
            black_black,
            count,
        };

        if map.trap_door_id.is_none() && spec.pixel_of(Complex64::new(0.0, 0.0)).is_some() {
            let fast = classify_fast(params, max_iter).label;
            let expected = matches!(
                fast,
                Trichotomy::ConnectedOther | Trichotomy::CantorCircles | Trichotomy::Sierpinski { .. }
            );
            if expected {
                return Err(Error::ResolutionTooCoarse(format!(
                    "expected a trap door ({fast:?}) but the origin's component is not separated from the basin"
                )));
            }
        }
        Ok(map)
    }

    /// The escaping component around the origin pixel, provided it maps into the basin; at
    /// coarse resolutions the origin pixel may instead sample a deeper preimage of the trap door.
    fn locate_trap_door(
        params: &MapParams,
        spec: &GridSpec,
        fates: &[PixelFate],
        component_of: &[u32],
        basin_id: u32,
    ) -> Option<u32> {
        let res = spec.resolution;
        let (ox, oy) = spec.pixel_of(Complex64::new(0.0, 0.0))?;
        let mut candidates = vec![(ox, oy)];
        for (dx, dy) in NEIGHBORS8 {
            let (nx, ny) = (ox as isize + dx, oy as isize + dy);
            if nx >= 0 && ny >= 0 && (nx as usize) < res && (ny as usize) < res {
                candidates.push((nx as usize, ny as usize));
            }
        }
        candidates.into_iter().find_map(|(x, y)| {
            let p = y * res + x;
            let cid = component_of[p];
            if !fates[p].escaping() || cid == NONE || cid == basin_id {
                return None;
            }
            let image = params.apply(spec.point(x, y));
            let in_basin = !(image.re.is_finite() && image.im.is_finite())
                || image.norm() > params.escape_radius()
                || spec
                    .pixel_of(image)
                    .is_some_and(|(ix, iy)| component_of[iy * res + ix] == basin_id);
            in_basin.then_some(cid)
        })
    }

    /// Sector boundaries. Each connecting component is symmetric about the critical ray it
    /// straddles, so when the centroids sit near those rays the exact ray angles are used;
    /// otherwise the centroid arguments themselves.
    fn compute_sector_rays(params: &MapParams, comps: &[Component], connecting: &[u32]) -> Option<Vec<f64>> {
        let count = params.degree() as usize;
        if connecting.len() != count {
            return None;
        }
        let base = arg_nonneg(params.critical_data().critical_points[0]);
        let step = TAU / count as f64;
        let centroid_args: Vec<f64> = connecting
            .iter()
            .map(|&c| arg_nonneg(comps[c as usize].centroid))
            .collect();
        let snapped = centroid_args
            .iter()
            .enumerate()
            .all(|(j, a)| wrap_angle(a - (base + step * j as f64)).abs() < step / 4.0);
        Some(if snapped {
            (0..count).map(|j| (base + step * j as f64).rem_euclid(TAU)).collect()
        } else {
            centroid_args
        })
    }

    pub fn params(&self) -> &MapParams {
        &self.params
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn max_iter(&self) -> usize {
        self.max_iter
    }

    pub fn resolution(&self) -> usize {
        self.spec.resolution
    }

    fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.spec.resolution + ix
    }

    /// Label of pixel `(ix, iy)`; boundary pixels report `JuliaApprox`.
    pub fn label(&self, ix: usize, iy: usize) -> Label {
        let p = self.index(ix, iy);
        if self.julia[p] {
            return Label::JuliaApprox;
        }
        self.component_label(ix, iy)
    }

    /// Label of the component owning the pixel, ignoring the boundary mask.
    pub fn component_label(&self, ix: usize, iy: usize) -> Label {
        match self.component_of[self.index(ix, iy)] {
            NONE => Label::JuliaApprox,
            cid => self.components[cid as usize].label,
        }
    }

    pub fn component_id(&self, ix: usize, iy: usize) -> Option<u32> {
        match self.component_of[self.index(ix, iy)] {
            NONE => None,
            cid => Some(cid),
        }
    }

    pub fn is_boundary(&self, ix: usize, iy: usize) -> bool {
        self.julia[self.index(ix, iy)]
    }

    pub fn escape_iteration(&self, ix: usize, iy: usize) -> Option<u32> {
        match self.fates[self.index(ix, iy)] {
            PixelFate::Escaped { iter, .. } => Some(iter),
            _ => None,
        }
    }

    /// Attracting cycle reached from the pixel, if any.
    pub fn cycle_id(&self, ix: usize, iy: usize) -> Option<usize> {
        match self.fates[self.index(ix, iy)] {
            PixelFate::Captured { basin } => Some(self.basin_cycle[basin as usize]),
            _ => None,
        }
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn attracting_cycles(&self) -> &[AttractingCycle] {
        &self.cycles
    }

    pub fn component_count(&self) -> ComponentCount {
        self.count
    }

    pub fn n_connecting(&self) -> usize {
        self.connecting.len()
    }

    pub fn has_trap_door(&self) -> bool {
        self.trap_door_id.is_some()
    }

    /// Component record of `Connecting(j)`.
    pub fn connecting_component(&self, j: usize) -> Option<&Component> {
        self.connecting.get(j).map(|&c| &self.components[c as usize])
    }

    /// Cycle attracting `Connecting(j)`.
    pub fn connecting_cycle(&self, j: usize) -> Option<usize> {
        match self.connecting_component(j)?.kind {
            ComponentKind::Fatou { cycle } => Some(cycle),
            ComponentKind::Escaping => None,
        }
    }

    pub fn sector_rays(&self) -> Option<&[f64]> {
        self.sector_rays.as_deref()
    }

    pub fn are_adjacent(&self, a: u32, b: u32) -> bool {
        self.adjacency.contains(&(a.min(b), a.max(b)))
    }

    /// Label of the pixel containing `z`; points outside the viewport beyond the escape
    /// radius lie in the basin.
    pub fn label_at(&self, z: Complex64) -> Option<Label> {
        match self.spec.pixel_of(z) {
            Some((x, y)) => Some(self.label(x, y)),
            None if z.norm() > self.params.escape_radius() => Some(Label::Basin),
            None => None,
        }
    }

    /// Pixel counts per label category.
    pub fn label_histogram(&self) -> BTreeMap<String, usize> {
        let mut hist = BTreeMap::new();
        for cat in ["basin", "trap_door", "escaping_other", "connecting", "fatou_other", "julia_approx"] {
            hist.insert(cat.to_string(), 0);
        }
        let res = self.spec.resolution;
        for y in 0..res {
            for x in 0..res {
                *hist.get_mut(self.label(x, y).category()).unwrap() += 1;
            }
        }
        hist
    }

    /// Unmasked 8-adjacent pixel pairs lying in distinct escaping components.
    pub fn red_red_adjacencies(&self) -> usize {
        self.red_red
    }

    /// Unmasked 8-adjacent pixel pairs lying in distinct non-escaping components.
    pub fn black_black_adjacencies(&self) -> usize {
        self.black_black
    }

    /// Which sector `z` lies in, measured angularly between consecutive connecting components.
    pub fn sector_of(&self, z: Complex64) -> Result<SectorHit> {
        let rays = self.sector_rays.as_ref().ok_or(Error::NoSectors)?;
        if z.norm() <= POLE_EPS {
            return Err(Error::NotInSector(format!("{z} is the pole")));
        }
        if self.in_identified_fatou(z)? {
            return Err(Error::NotInSector(format!("{z}")));
        }
        let count = rays.len();
        let arg = arg_nonneg(z);
        let rel = |j: usize| (rays[j] - rays[0]).rem_euclid(TAU);
        let t = (arg - rays[0]).rem_euclid(TAU);
        let sector = (0..count).rev().find(|&j| rel(j) <= t).unwrap_or(0);

        // Nearest ray, signed offset (positive = counterclockwise of the ray).
        let (ray, offset) = (0..count)
            .map(|j| (j, wrap_angle(arg - rays[j])))
            .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .unwrap();
        let tie = offset.abs() * z.norm() <= SECTOR_TIE_PIXELS * self.spec.pixel_size();
        let on_ray = offset.abs() < ON_RAY_ANGLE;
        let (primary, alternate) = if tie {
            let ccw = ray as u32;
            let cw = ((ray + count - 1) % count) as u32;
            if offset >= 0.0 {
                (ccw, Some(cw))
            } else {
                (cw, Some(ccw))
            }
        } else {
            (sector as u32, None)
        };
        Ok(SectorHit {
            sector: primary,
            alternate,
            ray: tie.then_some(ray as u32),
            on_ray,
        })
    }

    /// True when the pixel of `z` and its 8 neighbours all belong to one identified
    /// component and none of them is a boundary pixel.
    fn in_identified_fatou(&self, z: Complex64) -> Result<bool> {
        let Some((x, y)) = self.spec.pixel_of(z) else {
            if z.norm() > self.params.escape_radius() {
                return Ok(true);
            }
            return Err(Error::ViewportTooSmall(format!("{z} lies outside the viewport")));
        };
        let res = self.spec.resolution;
        let center = self.component_of[self.index(x, y)];
        if center == NONE || !self.components[center as usize].label.is_identified() {
            return Ok(false);
        }
        for dy in -1isize..=1 {
            for dx in -1isize..=1 {
                let (nx, ny) = (x as isize + dx, y as isize + dy);
                if nx < 0 || ny < 0 || nx >= res as isize || ny >= res as isize {
                    continue;
                }
                let p = ny as usize * res + nx as usize;
                if self.julia[p] || self.component_of[p] != center {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Counts and junction estimates for the checkerboard structure.
    pub fn checkerboard_stats(&self) -> CheckerboardStats {
        let res = self.spec.resolution;
        let count = self.connecting.len();
        let mut junction_estimates = Vec::new();
        if let (Some(basin), Some(trap)) = (self.basin_id, self.trap_door_id) {
            for &cid in &self.connecting {
                let mut outer = (Complex64::new(0.0, 0.0), 0usize);
                let mut inner = (Complex64::new(0.0, 0.0), 0usize);
                for y in 0..res {
                    for x in 0..res {
                        if self.component_of[y * res + x] != cid {
                            continue;
                        }
                        let (mut touches_basin, mut touches_trap) = (false, false);
                        for (dx, dy) in NEIGHBORS8 {
                            let (nx, ny) = (x as isize + dx, y as isize + dy);
                            if nx < 0 || ny < 0 || nx >= res as isize || ny >= res as isize {
                                continue;
                            }
                            let other = self.component_of[ny as usize * res + nx as usize];
                            touches_basin |= other == basin;
                            touches_trap |= other == trap;
                        }
                        let z = self.spec.point(x, y);
                        if touches_basin {
                            outer.0 += z;
                            outer.1 += 1;
                        }
                        if touches_trap {
                            inner.0 += z;
                            inner.1 += 1;
                        }
                    }
                }
                for (sum, n) in [outer, inner] {
                    if n > 0 {
                        junction_estimates.push(sum / n as f64);
                    }
                }
            }
        }

        // Sectors whose neighbouring connecting components are both touched by one other
        // escaping component.
        let mut separated_sectors = 0;
        if count > 1 {
            for j in 0..count {
                let (a, b) = (self.connecting[j], self.connecting[(j + 1) % count]);
                let found = self.components.iter().enumerate().any(|(cid, comp)| {
                    let cid = cid as u32;
                    matches!(comp.label, Label::EscapingOther(_))
                        && self.are_adjacent(cid, a)
                        && self.are_adjacent(cid, b)
                });
                if found {
                    separated_sectors += 1;
                }
            }
        }

        CheckerboardStats {
            n_connecting: count,
            red_red_adjacencies: self.red_red,
            black_black_adjacencies: self.black_black,
            separated_sectors,
            junction_estimates,
        }
    }

    /// Trichotomy label decided by the component containing the critical value.
    pub fn classify(&self) -> Result<TrichotomyLabel> {
        let params = &self.params;
        let v = params.apply(params.critical_data().critical_points[0]);
        let certified = |label| {
            Ok(TrichotomyLabel {
                label,
                basis: Basis::RegionCertified,
            })
        };
        let orbit_escapes = matches!(iterate_orbit(params, v, self.max_iter).fate, Fate::Escaped { .. });

        let label = self.resolve_label(v)?;
        match label {
            Label::Basin if orbit_escapes => certified(Trichotomy::CantorSet),
            Label::TrapDoor if orbit_escapes => {
                if !crate::orbit::cantor_circles_possible(params.n(), params.d()) {
                    return Err(Error::Unresolvable(
                        "critical value in a trap door for a family without Cantor circles".into(),
                    ));
                }
                certified(Trichotomy::CantorCircles)
            }
            Label::Connecting(_) | Label::FatouOther(_) if !orbit_escapes => certified(Trichotomy::ConnectedOther),
            Label::EscapingOther(_) if orbit_escapes => {
                let mut z = v;
                for j in 1..=self.max_iter {
                    z = params.apply(z);
                    match self.resolve_label(z)? {
                        Label::TrapDoor => return certified(Trichotomy::Sierpinski { escape_iteration: j }),
                        Label::Basin => {
                            return Err(Error::Unresolvable(
                                "critical orbit reached the basin without visiting the trap door".into(),
                            ))
                        }
                        _ => {}
                    }
                }
                Err(Error::Unresolvable("critical orbit never reached the trap door".into()))
            }
            other => Err(Error::Unresolvable(format!(
                "critical value pixel is {other:?} while its orbit {}",
                if orbit_escapes { "escapes" } else { "stays bounded" }
            ))),
        }
    }

    /// Label of `z`'s pixel, iterating points outside the viewport back into it.
    fn resolve_label(&self, z: Complex64) -> Result<Label> {
        match self.label_at(z) {
            Some(label) => Ok(label),
            None => Err(Error::ViewportTooSmall(format!("{z} lies outside the viewport"))),
        }
    }

    pub fn report(&self) -> Result<RegionReport> {
        Ok(RegionReport {
            n: self.params.n(),
            d: self.params.d(),
            lambda_re: self.params.lambda().re,
            lambda_im: self.params.lambda().im,
            resolution: self.spec.resolution,
            label_histogram: self.label_histogram(),
            n_connecting: self.n_connecting(),
            trichotomy: self.classify()?,
            red_red_adjacencies: self.red_red,
        })
    }
}

/// Sector membership of a point, with the second candidate for points near a ray.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SectorHit {
    pub sector: u32,
    pub alternate: Option<u32>,
    /// Ray whose neighbourhood caused the tie.
    pub ray: Option<u32>,
    pub on_ray: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckerboardStats {
    pub n_connecting: usize,
    pub red_red_adjacencies: usize,
    pub black_black_adjacencies: usize,
    /// Sectors `j` where one escaping component touches both `Connecting(j)` and `Connecting(j+1)`.
    pub separated_sectors: usize,
    /// Outer then inner contact locus for each connecting component, in index order.
    pub junction_estimates: Vec<Complex64>,
}

/// JSON summary of a region map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionReport {
    pub n: u32,
    pub d: u32,
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub resolution: usize,
    pub label_histogram: BTreeMap<String, usize>,
    pub n_connecting: usize,
    pub trichotomy: TrichotomyLabel,
    pub red_red_adjacencies: usize,
}

pub fn build_region_map(params: &MapParams, spec: &GridSpec, max_iter: usize) -> Result<RegionMap> {
    RegionMap::build(params, spec, max_iter)
}

/// Builds the map, then classifies by the component holding the critical value.
pub fn classify_certified(params: &MapParams, spec: &GridSpec, max_iter: usize) -> Result<TrichotomyLabel> {
    RegionMap::build(params, spec, max_iter)?.classify()
}
