use std::collections::HashSet;

use checkerboard::orbit::{find_periodic_points, newton_periodic, Rect};
use checkerboard::symbolic::{itinerary_of, quotient_equal, Itinerary, ItineraryReading};
use checkerboard::{build_region_map, GridSpec, MapParams, RegionMap};
use num_complex::Complex64;

const ALPHABET: u32 = 6;

fn center() -> (MapParams, RegionMap) {
    let params = MapParams::real(3, 3, 0.125).unwrap();
    let grid = GridSpec::new(Complex64::new(0.0, 0.0), 1.5, 1024).unwrap();
    let map = build_region_map(&params, &grid, 1000).unwrap();
    (params, map)
}

fn repelling(params: &MapParams, period: usize) -> Vec<Complex64> {
    find_periodic_points(params, period, Rect::centered(Complex64::new(0.0, 0.0), 1.2), 128)
        .into_iter()
        .filter(|p| p.is_repelling())
        .map(|p| p.z)
        .collect()
}

/// The exact fixed points come from t = z^2 solving (t - 1/2)(t^2 - t/2 - 1/4) = 0.
#[test]
fn q0_is_constant_zero() {
    let (params, map) = center();
    let exact = ((1.0 + 5f64.sqrt()) / 4.0).sqrt();
    let q0 = newton_periodic(&params, Complex64::new(0.9, 0.01), 1, 50).unwrap();
    assert!((q0 - Complex64::new(exact, 0.0)).norm() < 1e-14);
    let r = itinerary_of(&params, &map, q0, 30).unwrap();
    let zero = Itinerary::periodic(vec![0], ALPHABET).unwrap();
    let top = Itinerary::periodic(vec![5], ALPHABET).unwrap();
    assert!(r.accepts(&zero).unwrap());
    assert!(r.accepts(&top).unwrap());
    assert!(quotient_equal(&r.itinerary, &zero).unwrap());
}

#[test]
fn rotated_junction_reads_one_or_zero() {
    let (params, map) = center();
    let q0 = newton_periodic(&params, Complex64::new(0.9, 0.0), 1, 50).unwrap();
    let q1 = params.omega() * q0;
    // omega q0 lies on ray 1; it is not periodic, so only a finite word is certified.
    let r = itinerary_of(&params, &map, q1, 12).unwrap();
    let twin = r.twin.as_ref().expect("on-ray point has two readings");
    let first: HashSet<u32> = [r.itinerary.digit(0), twin.digit(0)].into();
    assert_eq!(first, HashSet::from([0, 1]));
}

#[test]
fn every_short_periodic_word_is_realized() {
    let (params, map) = center();
    let mut realized: HashSet<(Vec<u32>, Vec<u32>)> = HashSet::new();
    let mut points = 0;
    for period in 1..=3 {
        for z in repelling(&params, period) {
            let r = itinerary_of(&params, &map, z, 30).unwrap();
            assert!(r.itinerary.certified, "{z} did not close up");
            for it in std::iter::once(&r.itinerary).chain(r.twin.as_ref()) {
                realized.insert((it.preperiod.clone(), it.period.clone()));
            }
            points += 1;
        }
    }
    assert!(points >= 214);
    let mut missing = Vec::new();
    for len in 1..=3u32 {
        for code in 0..ALPHABET.pow(len) {
            let word: Vec<u32> = (0..len).map(|i| code / ALPHABET.pow(i) % ALPHABET).collect();
            let it = Itinerary::periodic(word, ALPHABET).unwrap();
            if !realized.contains(&(it.preperiod.clone(), it.period.clone())) {
                missing.push(it.to_string());
            }
        }
    }
    assert!(missing.is_empty(), "unrealized words: {missing:?}");
}

#[test]
fn itineraries_commute_with_the_shift() {
    let (params, map) = center();
    let mut checked = 0;
    for period in 1..=3 {
        for z in repelling(&params, period) {
            let here = itinerary_of(&params, &map, z, 30).unwrap();
            let there = itinerary_of(&params, &map, params.apply(z), 30).unwrap();
            let shifted: ItineraryReading = here.shift();
            assert!(shifted.agrees_with(&there).unwrap(), "{z}: {} vs {}", shifted.itinerary, there.itinerary);
            checked += 1;
        }
    }
    assert!(checked >= 20);
}

#[test]
fn rotation_moves_sectors_by_one() {
    let (params, map) = center();
    let omega = params.omega();
    let mut checked = 0;
    for z in repelling(&params, 2) {
        let Ok(hit) = map.sector_of(z) else { continue };
        if hit.alternate.is_some() {
            continue;
        }
        let rotated = map.sector_of(omega * z).unwrap();
        if rotated.alternate.is_some() {
            continue;
        }
        assert_eq!(rotated.sector, (hit.sector + 1) % ALPHABET, "{z}");
        checked += 1;
    }
    assert!(checked >= 20);
}
