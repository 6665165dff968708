//! Itineraries of Julia points through the sectors between connecting components.
//!
//! Sequences are stored eventually periodic. Junction points on a sector ray genuinely
//! have two itineraries; [`itinerary_of`] reports both, choosing the digit at each on-ray
//! step from the side an infinitesimal counterclockwise (resp. clockwise) perturbation of
//! the seed moves to.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::MapParams;
use crate::regions::RegionMap;

/// Eventually periodic digit sequence over `0..alphabet_size`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Itinerary {
    pub preperiod: Vec<u32>,
    pub period: Vec<u32>,
    pub alphabet_size: u32,
    /// False for finite observations whose tail was padded with the last digit.
    pub certified: bool,
    /// Number of digits actually observed (meaningful for uncertified words).
    pub observed_len: usize,
}

impl Itinerary {
    pub fn new(preperiod: Vec<u32>, period: Vec<u32>, alphabet_size: u32) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidParams("empty period".into()));
        }
        if let Some(&bad) = preperiod.iter().chain(&period).find(|&&s| s >= alphabet_size) {
            return Err(Error::InvalidParams(format!("digit {bad} outside alphabet of size {alphabet_size}")));
        }
        let observed_len = preperiod.len() + period.len();
        Ok(Self::canonical(preperiod, period, alphabet_size, true, observed_len))
    }

    pub fn periodic(period: Vec<u32>, alphabet_size: u32) -> Result<Self> {
        Self::new(Vec::new(), period, alphabet_size)
    }

    /// A finite observation. The tail repeats the last digit and the word is not certified.
    pub fn finite(digits: Vec<u32>, alphabet_size: u32) -> Result<Self> {
        let Some((&last, head)) = digits.split_last() else {
            return Err(Error::InvalidParams("empty digit word".into()));
        };
        let mut it = Self::new(head.to_vec(), vec![last], alphabet_size)?;
        it.certified = false;
        it.observed_len = digits.len();
        Ok(it)
    }

    fn canonical(mut preperiod: Vec<u32>, mut period: Vec<u32>, alphabet_size: u32, certified: bool, observed_len: usize) -> Self {
        // Shortest period: the smallest divisor length that tiles the word.
        let p = period.len();
        if let Some(q) = (1..=p).find(|&q| p.is_multiple_of(q) && (q..p).all(|i| period[i] == period[i - q])) {
            period.truncate(q);
        }
        // Shortest preperiod: absorb trailing preperiod digits into a rotated period.
        while let Some(&last) = preperiod.last() {
            if last != *period.last().unwrap() {
                break;
            }
            preperiod.pop();
            period.rotate_right(1);
        }
        let observed_len = if certified {
            preperiod.len() + period.len()
        } else {
            observed_len
        };
        Itinerary {
            preperiod,
            period,
            alphabet_size,
            certified,
            observed_len,
        }
    }

    /// Digit at position `i` of the infinite sequence.
    pub fn digit(&self, i: usize) -> u32 {
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    /// Drops the first digit.
    pub fn shift(&self) -> Itinerary {
        let (preperiod, period) = if self.preperiod.is_empty() {
            let mut period = self.period.clone();
            period.rotate_left(1);
            (Vec::new(), period)
        } else {
            (self.preperiod[1..].to_vec(), self.period.clone())
        };
        let observed_len = self.observed_len.saturating_sub(1).max(1);
        Self::canonical(preperiod, period, self.alphabet_size, self.certified, observed_len)
    }

    /// `(w, 0, top, top, ...)` or `(w, top, 0, 0, ...)`, where `top = alphabet_size - 1`:
    /// returns `w` and whether the tail is the all-`top` one.
    fn junction_form(&self) -> Option<(&[u32], bool)> {
        let top = self.alphabet_size - 1;
        let (&last, w) = self.preperiod.split_last()?;
        match (last, self.period.as_slice()) {
            (0, [t]) if *t == top => Some((w, true)),
            (l, [0]) if l == top => Some((w, false)),
            _ => None,
        }
    }

    fn is_constant(&self, digit: u32) -> bool {
        self.preperiod.is_empty() && self.period == [digit]
    }
}

impl fmt::Display for Itinerary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.preperiod {
            write!(f, "{s} ")?;
        }
        let period: Vec<String> = self.period.iter().map(u32::to_string).collect();
        write!(f, "[{}]", period.join(" "))?;
        if !self.certified {
            write!(f, " (first {} observed)", self.observed_len)?;
        }
        Ok(())
    }
}

/// Equality in the quotient space: `(w, 0, top...) ~ (w, top, 0...)` for every prefix `w`,
/// and `(0...) ~ (top...)`. Uncertified words are compared on their common observed prefix.
pub fn quotient_equal(x: &Itinerary, y: &Itinerary) -> Result<bool> {
    if x.alphabet_size != y.alphabet_size {
        return Err(Error::AlphabetMismatch(x.alphabet_size, y.alphabet_size));
    }
    if !x.certified || !y.certified {
        let len = match (x.certified, y.certified) {
            (false, false) => x.observed_len.min(y.observed_len),
            (false, true) => x.observed_len,
            _ => y.observed_len,
        };
        return Ok((0..len).all(|i| x.digit(i) == y.digit(i)));
    }
    if x.preperiod == y.preperiod && x.period == y.period {
        return Ok(true);
    }
    let top = x.alphabet_size - 1;
    if (x.is_constant(0) && y.is_constant(top)) || (x.is_constant(top) && y.is_constant(0)) {
        return Ok(true);
    }
    Ok(match (x.junction_form(), y.junction_form()) {
        (Some((wx, tx)), Some((wy, ty))) => wx == wy && tx != ty,
        _ => false,
    })
}

pub fn shift(x: &Itinerary) -> Itinerary {
    x.shift()
}

/// A step whose point lay within the tie distance of a sector ray.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlaggedStep {
    pub step: usize,
    pub digit: u32,
    pub alternate: u32,
    pub on_ray: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItineraryReading {
    pub itinerary: Itinerary,
    /// The other itinerary of a junction point (some step on a ray), if any.
    pub twin: Option<Itinerary>,
    pub flagged: Vec<FlaggedStep>,
}

impl ItineraryReading {
    /// True if `other` equals this point's itinerary or its twin in the quotient.
    pub fn accepts(&self, other: &Itinerary) -> Result<bool> {
        if quotient_equal(&self.itinerary, other)? {
            return Ok(true);
        }
        match &self.twin {
            Some(twin) => quotient_equal(twin, other),
            None => Ok(false),
        }
    }

    /// True if some itinerary of this reading matches some itinerary of `other`.
    pub fn agrees_with(&self, other: &ItineraryReading) -> Result<bool> {
        if self.accepts(&other.itinerary)? {
            return Ok(true);
        }
        match &other.twin {
            Some(twin) => self.accepts(twin),
            None => Ok(false),
        }
    }

    pub fn shift(&self) -> ItineraryReading {
        ItineraryReading {
            itinerary: self.itinerary.shift(),
            twin: self.twin.as_ref().map(Itinerary::shift),
            flagged: self
                .flagged
                .iter()
                .filter(|f| f.step > 0)
                .map(|f| FlaggedStep { step: f.step - 1, ..*f })
                .collect(),
        }
    }
}

/// Relative distance under which a later iterate counts as a return to an earlier one.
pub const RETURN_TOL: f64 = 1e-7;

/// Follows `z` for up to `length` steps, recording the sector of each iterate. Stops at
/// the first return to an earlier iterate and folds the word into eventually periodic form.
pub fn itinerary_of(params: &MapParams, map: &RegionMap, z: Complex64, length: usize) -> Result<ItineraryReading> {
    if length == 0 {
        return Err(Error::InvalidParams("itinerary length must be at least 1".into()));
    }
    let alphabet = params.degree();
    let mut orbit: Vec<Complex64> = Vec::new();
    let (mut ccw, mut cw) = (Vec::new(), Vec::new());
    let mut flagged = Vec::new();
    // Tangent vectors of counterclockwise and clockwise perturbations of the seed.
    let mut tangent = Complex64::i() * z;
    let mut point = z;
    let mut fold = None;

    for step in 0..length {
        if let Some(i) = orbit
            .iter()
            .position(|&w| (point - w).norm() <= RETURN_TOL * (1.0 + w.norm()))
        {
            fold = Some(i);
            break;
        }
        let hit = map.sector_of(point).map_err(|e| match e {
            Error::NotInSector(_) => Error::SectorAmbiguity { step },
            other => other,
        })?;
        let (a, b) = if hit.on_ray {
            let ray = hit.ray.expect("on-ray hits carry their ray");
            let left = ray;
            let right = (ray + alphabet - 1) % alphabet;
            if (tangent / point).im >= 0.0 {
                (left, right)
            } else {
                (right, left)
            }
        } else {
            (hit.sector, hit.sector)
        };
        if let Some(alternate) = hit.alternate {
            flagged.push(FlaggedStep {
                step,
                digit: hit.sector,
                alternate,
                on_ray: hit.on_ray,
            });
        }
        ccw.push(a);
        cw.push(b);
        orbit.push(point);

        let (next, deriv) = params.apply_with_derivative(point);
        tangent *= deriv;
        // Keep the tangent at unit scale; only its direction matters.
        let scale = tangent.norm();
        if scale > 0.0 && scale.is_finite() {
            tangent /= scale;
        }
        point = next;
    }

    let build = |digits: &[u32]| -> Result<Itinerary> {
        match fold {
            Some(i) => Itinerary::new(digits[..i].to_vec(), digits[i..].to_vec(), alphabet),
            None => Itinerary::finite(digits.to_vec(), alphabet),
        }
    };
    let itinerary = build(&ccw)?;
    let twin = if ccw != cw { Some(build(&cw)?) } else { None };
    Ok(ItineraryReading {
        itinerary,
        twin,
        flagged,
    })
}
