//! Orbit iteration, attracting-cycle detection, periodic points and the fast
//! trichotomy verdict.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::map::MapParams;

/// Iterates within this distance of the origin are treated as landing on the pole.
pub const POLE_EPS: f64 = 1e-300;

/// Default iteration budget for classification.
pub const CLASSIFY_MAX_ITER: usize = 1000;

/// Default iteration budget when locating attracting cycles to high precision.
pub const PRECISION_MAX_ITER: usize = 100_000;

/// What happened to a seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Fate {
    /// `|z_k| > R` first at step `iterations`.
    Escaped { iterations: usize },
    /// Converged onto an attracting cycle.
    Cycle {
        period: usize,
        representative: Complex64,
        multiplier_modulus: f64,
    },
    Undecided,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitOutcome {
    pub fate: Fate,
    pub trace: Option<Vec<Complex64>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitConfig {
    pub max_iter: usize,
    /// Closeness at which Brent's tortoise and hare count as equal.
    pub cycle_tol: f64,
    /// Keep this many leading iterates (including the seed).
    pub trace_len: Option<usize>,
}

impl OrbitConfig {
    pub fn new(max_iter: usize) -> Self {
        OrbitConfig {
            max_iter,
            cycle_tol: 1e-9,
            trace_len: None,
        }
    }

    pub fn with_trace(mut self, len: usize) -> Self {
        self.trace_len = Some(len);
        self
    }
}

fn near(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm())
}

fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Iterates `z0` until it escapes, settles on an attracting cycle, or the budget runs out.
pub fn iterate_orbit(params: &MapParams, z0: Complex64, max_iter: usize) -> OrbitOutcome {
    iterate_orbit_with(params, z0, &OrbitConfig::new(max_iter))
}

pub fn iterate_orbit_with(params: &MapParams, z0: Complex64, config: &OrbitConfig) -> OrbitOutcome {
    let radius = params.escape_radius();
    let mut trace = config.trace_len.map(|len| {
        let mut t = Vec::with_capacity(len.min(4096));
        if len > 0 {
            t.push(z0);
        }
        t
    });
    let done = |fate: Fate, trace: Option<Vec<Complex64>>| OrbitOutcome { fate, trace };

    if z0.norm() > radius {
        return done(Fate::Escaped { iterations: 0 }, trace);
    }
    if z0.norm() <= POLE_EPS {
        return done(Fate::Escaped { iterations: 1 }, trace);
    }

    // Brent's cycle finding with a closeness test in place of equality.
    let mut power = 1usize;
    let mut lam = 1usize;
    let mut tortoise = z0;
    let mut hare = params.apply(z0);
    let mut steps = 1usize;
    loop {
        if let Some(t) = trace.as_mut() {
            if t.len() < config.trace_len.unwrap_or(0) {
                t.push(hare);
            }
        }
        if !finite(hare) || hare.norm() > radius {
            return done(Fate::Escaped { iterations: steps }, trace);
        }
        if hare.norm() <= POLE_EPS {
            return done(Fate::Escaped { iterations: steps + 1 }, trace);
        }
        if near(tortoise, hare, config.cycle_tol) {
            break;
        }
        if steps >= config.max_iter {
            return done(Fate::Undecided, trace);
        }
        if power == lam {
            tortoise = hare;
            power *= 2;
            lam = 0;
        }
        hare = params.apply(hare);
        steps += 1;
        lam += 1;
    }

    let fate = match polish_cycle(params, hare, lam) {
        Some(cycle) if cycle.multiplier_modulus < 1.0 => Fate::Cycle {
            period: cycle.period,
            representative: cycle.point,
            multiplier_modulus: cycle.multiplier_modulus,
        },
        _ => Fate::Undecided,
    };
    done(fate, trace)
}

/// A verified periodic point with its minimal period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolishedCycle {
    pub point: Complex64,
    pub period: usize,
    pub multiplier_modulus: f64,
}

/// `F^p(z) - z` and `(F^p)'(z)`; `None` if the orbit meets the pole or overflows.
pub fn periodic_residual(params: &MapParams, z: Complex64, period: usize) -> Option<(Complex64, Complex64)> {
    let mut w = z;
    let mut dw = Complex64::new(1.0, 0.0);
    for _ in 0..period {
        if w.norm() <= POLE_EPS {
            return None;
        }
        let (f, df) = params.apply_with_derivative(w);
        dw *= df;
        w = f;
        if !finite(w) || !finite(dw) {
            return None;
        }
    }
    Some((w - z, dw))
}

/// Newton's method on `F^p(z) - z`.
pub fn newton_periodic(params: &MapParams, seed: Complex64, period: usize, max_steps: usize) -> Option<Complex64> {
    let mut z = seed;
    let mut settled = 0;
    for _ in 0..max_steps {
        let (g, dg) = periodic_residual(params, z, period)?;
        let denom = dg - 1.0;
        if denom.norm() == 0.0 {
            return None;
        }
        let step = g / denom;
        z -= step;
        if !finite(z) || z.norm() > 1e8 {
            return None;
        }
        if step.norm() <= 1e-15 * (1.0 + z.norm()) {
            settled += 1;
            if settled >= 2 {
                break;
            }
        }
    }
    Some(z)
}

/// Refines a candidate on a period-`period` cycle, reduces to the minimal period and
/// computes the multiplier by the chain rule.
pub fn polish_cycle(params: &MapParams, candidate: Complex64, period: usize) -> Option<PolishedCycle> {
    let tol = 1e-8;
    let verify = |z: Complex64, p: usize| {
        periodic_residual(params, z, p).is_some_and(|(g, _)| g.norm() <= tol * (1.0 + z.norm()))
    };
    let point = match newton_periodic(params, candidate, period, 60) {
        Some(z) if verify(z, period) && (z - candidate).norm() <= 1e-4 * (1.0 + candidate.norm()) => z,
        _ if verify(candidate, period) => candidate,
        _ => return None,
    };
    let minimal = (1..=period)
        .filter(|q| period.is_multiple_of(*q))
        .find(|&q| verify(point, q))
        .unwrap_or(period);
    let (_, dw) = periodic_residual(params, point, minimal)?;
    Some(PolishedCycle {
        point,
        period: minimal,
        multiplier_modulus: dw.norm(),
    })
}

/// An attracting cycle listed in orbit order: `points[i + 1] = F(points[i])`.
#[derive(Debug, Clone, PartialEq)]
pub struct AttractingCycle {
    pub points: Vec<Complex64>,
    pub multiplier_modulus: f64,
}

impl AttractingCycle {
    pub fn period(&self) -> usize {
        self.points.len()
    }

    fn contains(&self, z: Complex64, tol: f64) -> bool {
        self.points.iter().any(|p| near(*p, z, tol))
    }
}

/// Attracting cycles reached by the free critical orbits.
///
/// Every attracting cycle attracts a critical point, so this list is complete up to the
/// iteration budget.
pub fn find_attracting_cycles(params: &MapParams, max_iter: usize) -> Vec<AttractingCycle> {
    let mut cycles: Vec<AttractingCycle> = Vec::new();
    for c in params.critical_data().critical_points {
        let fate = iterate_orbit(params, c, max_iter).fate;
        let Fate::Cycle {
            period,
            representative,
            multiplier_modulus,
        } = fate
        else {
            continue;
        };
        if cycles.iter().any(|cy| cy.contains(representative, 1e-6)) {
            continue;
        }
        let mut points = Vec::with_capacity(period);
        let mut z = representative;
        for _ in 0..period {
            points.push(z);
            z = params.apply(z);
        }
        cycles.push(AttractingCycle {
            points,
            multiplier_modulus,
        });
    }
    cycles
}

/// Axis-aligned rectangle in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub min: Complex64,
    pub max: Complex64,
}

impl Rect {
    pub fn centered(center: Complex64, half_width: f64) -> Self {
        let h = Complex64::new(half_width, half_width);
        Rect {
            min: center - h,
            max: center + h,
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.min.re && z.re <= self.max.re && z.im >= self.min.im && z.im <= self.max.im
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicPoint {
    pub z: Complex64,
    pub multiplier_modulus: f64,
}

impl PeriodicPoint {
    pub fn is_repelling(&self) -> bool {
        self.multiplier_modulus > 1.0
    }
}

/// Roots of `F^p(z) = z` inside `search_box`, found by Newton from a `grid x grid` lattice
/// of seeds and deduplicated at distance `1e-6`. Seeds that fail to converge are dropped.
pub fn find_periodic_points(params: &MapParams, period: usize, search_box: Rect, grid: usize) -> Vec<PeriodicPoint> {
    assert!(period >= 1, "period must be positive");
    assert!(grid >= 8, "grid must be at least 8");
    let span = search_box.max - search_box.min;
    let roots: Vec<Option<Complex64>> = (0..grid * grid)
        .into_par_iter()
        .map(|idx| {
            let (ix, iy) = (idx % grid, idx / grid);
            let seed = search_box.min
                + Complex64::new(
                    span.re * (ix as f64 + 0.5) / grid as f64,
                    span.im * (iy as f64 + 0.5) / grid as f64,
                );
            let z = newton_periodic(params, seed, period, 80)?;
            let (g, _) = periodic_residual(params, z, period)?;
            (g.norm() <= 1e-9 && search_box.contains(z)).then_some(z)
        })
        .collect();

    let mut found: Vec<PeriodicPoint> = Vec::new();
    for z in roots.into_iter().flatten() {
        if found.iter().any(|p| (p.z - z).norm() <= 1e-6) {
            continue;
        }
        if let Some((_, dw)) = periodic_residual(params, z, period) {
            found.push(PeriodicPoint {
                z,
                multiplier_modulus: dw.norm(),
            });
        }
    }
    found
}

/// Which topological type the Julia set has.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Trichotomy {
    CantorSet,
    CantorCircles,
    /// The critical orbit enters the trap door after `escape_iteration` steps.
    Sierpinski { escape_iteration: usize },
    ConnectedOther,
}

/// How a [`Trichotomy`] verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    FastHeuristic,
    RegionCertified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrichotomyLabel {
    pub label: Trichotomy,
    pub basis: Basis,
}

/// Cantor circles are impossible when `1/n + 1/d >= 1`, i.e. for `n = d = 2` or `d = 1`.
pub fn cantor_circles_possible(n: u32, d: u32) -> bool {
    // 1/n + 1/d < 1  <=>  n + d < n d
    n + d < n * d
}

/// Follows one critical value. A bounded orbit gives `ConnectedOther`. For an escaping
/// orbit the step just before escape is inspected: an iterate inside the critical circle is
/// taken as a visit to the trap door. Certification belongs to the region layer.
pub fn classify_fast(params: &MapParams, max_iter: usize) -> TrichotomyLabel {
    let crit = params.critical_data();
    let v = params.apply(crit.critical_points[0]);
    let radius = params.escape_radius();
    let heuristic = |label| TrichotomyLabel {
        label,
        basis: Basis::FastHeuristic,
    };

    let mut prev = v;
    let mut z = v;
    let mut k = 0usize;
    let escaped_at = loop {
        if !finite(z) || z.norm() > radius {
            break Some(k);
        }
        if z.norm() <= POLE_EPS {
            prev = z;
            break Some(k + 1);
        }
        if k >= max_iter {
            break None;
        }
        prev = z;
        z = params.apply(z);
        k += 1;
    };

    let label = match escaped_at {
        None => Trichotomy::ConnectedOther,
        Some(0) => Trichotomy::CantorSet,
        Some(k) if prev.norm() < crit.critical_radius => {
            let entry = k - 1;
            if entry == 0 {
                if cantor_circles_possible(params.n(), params.d()) {
                    Trichotomy::CantorCircles
                } else {
                    Trichotomy::CantorSet
                }
            } else {
                Trichotomy::Sierpinski { escape_iteration: entry }
            }
        }
        Some(_) => Trichotomy::CantorSet,
    };
    // A bounded orbit may still be Undecided near parabolic parameters; the label is a
    // numerical verdict either way.
    heuristic(label)
}
