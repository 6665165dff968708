//! One line per acceptance criterion; exits non-zero if any fails.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use checkerboard::centers::{all_centers, center_of_m0, numeric_index_map, rotation_profile};
use checkerboard::classes::{class_report, count_burnside, count_closed_form, enumerate_partition};
use checkerboard::map::root_of_unity;
use checkerboard::orbit::{find_periodic_points, newton_periodic, Rect};
use checkerboard::render::{render, Palette, Plane, RenderSpec};
use checkerboard::symbolic::{itinerary_of, quotient_equal, Itinerary};
use checkerboard::{build_region_map, classify_certified, GridSpec, MapParams, Tolerances, Trichotomy};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CENTER_TOL: f64 = 1e-12;
const CLASSES_BUDGET: Duration = Duration::from_secs(1);
const SWEEP_BUDGET: Duration = Duration::from_secs(10);
const PARTITION_BUDGET: Duration = Duration::from_secs(30);
const CHECKERBOARD_BUDGET: Duration = Duration::from_secs(30);
const SYMMETRY_BUDGET: Duration = Duration::from_secs(10);
const SAMPLES: usize = 1000;
const FAMILIES: [(u32, u32); 10] = [(3, 2), (3, 3), (4, 3), (4, 4), (5, 2), (5, 5), (6, 5), (7, 3), (11, 4), (13, 7)];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn origin() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn timed(budget: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let detail = f()?;
    let elapsed = start.elapsed();
    if elapsed > budget {
        return Err(format!("{detail}; took {elapsed:.2?}, budget {budget:?}"));
    }
    Ok(format!("{detail}; {elapsed:.2?}"))
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn class_counts() -> Outcome {
    timed(CLASSES_BUDGET, || {
        let mut seen = Vec::new();
        for (n, d) in [(13, 7), (11, 4)] {
            let report = class_report(n, d).map_err(err)?;
            if report.count_closed_form != 3 || report.classes.len() != 3 {
                return Err(format!("({n},{d}) gave {}", report.classes.len()));
            }
            seen.push(format!("({n},{d}) -> 3"));
        }
        Ok(seen.join(", "))
    })
}

fn triple_agreement() -> Outcome {
    timed(SWEEP_BUDGET, || {
        let mut pairs = 0;
        for n in 3..=50 {
            for d in 1..=50 {
                let closed = count_closed_form(n, d).map_err(err)?;
                let burnside = count_burnside(n, d).map_err(err)?;
                let orbits = enumerate_partition(n, d).map_err(err)?.count;
                if closed != burnside || burnside != orbits {
                    return Err(format!("({n},{d}): {closed} / {burnside} / {orbits}"));
                }
                pairs += 1;
            }
        }
        Ok(format!("{pairs} pairs agree"))
    })
}

fn grid() -> impl Iterator<Item = (u32, u32)> {
    (3..=12).flat_map(|n| (2..=12).map(move |d| (n, d)))
}

fn rho_partition() -> Outcome {
    timed(PARTITION_BUDGET, || {
        let mut pairs = 0;
        for (n, d) in grid() {
            let mut by_rho: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
            for k in 0..n - 1 {
                by_rho.entry(rotation_profile(n, d, k).map_err(err)?.rho_min).or_default().push(k);
            }
            let mut invariant: Vec<Vec<u32>> = by_rho.into_values().collect();
            invariant.sort();
            let symmetry = enumerate_partition(n, d).map_err(err)?.classes;
            if invariant != symmetry {
                return Err(format!("({n},{d}): {invariant:?} vs {symmetry:?}"));
            }
            pairs += 1;
        }
        Ok(format!("{pairs} families"))
    })
}

fn index_maps() -> Outcome {
    let mut centers = 0;
    for (n, d) in grid() {
        let total = n + d;
        for k in 0..n - 1 {
            let numeric = numeric_index_map(n, d, k).map_err(err)?;
            for (j, found) in numeric.into_iter().enumerate() {
                let expected = (n * j as u32 + k) % total;
                if found != Some(expected) {
                    return Err(format!("({n},{d}) k={k} j={j}: {found:?} vs {expected}"));
                }
            }
            centers += 1;
        }
    }
    Ok(format!("{centers} centers"))
}

fn three_three_center() -> Outcome {
    let center = center_of_m0(3, 3).map_err(err)?;
    let params = MapParams::new(3, 3, center.lambda).map_err(err)?;
    let c = params.critical_data().critical_points[0];
    let lambda_err = (center.lambda - Complex64::new(0.125, 0.0)).norm();
    let c_err = (c - Complex64::new(0.5f64.sqrt(), 0.0)).norm();
    let fixed_err = (params.apply(c) - c).norm();
    if lambda_err > CENTER_TOL || c_err > CENTER_TOL || fixed_err > CENTER_TOL {
        return Err(format!("lambda err {lambda_err:.1e}, c err {c_err:.1e}, F(c)-c {fixed_err:.1e}"));
    }
    Ok(format!("lambda err {lambda_err:.1e}, c err {c_err:.1e}"))
}

fn checkerboard() -> Outcome {
    timed(CHECKERBOARD_BUDGET, || {
        let params = MapParams::real(4, 3, 0.18).map_err(err)?;
        let spec = GridSpec::new(origin(), 1.5, 1024).map_err(err)?;
        let map = build_region_map(&params, &spec, 1000).map_err(err)?;
        let (connecting, red_red) = (map.n_connecting(), map.red_red_adjacencies());
        let detail = format!("{connecting} connecting, {red_red} red-red");
        if connecting == 7 && red_red == 0 {
            Ok(detail)
        } else {
            Err(detail)
        }
    })
}

fn trichotomy() -> Outcome {
    let cases = [
        (3, 3, 0.0005, Trichotomy::CantorCircles),
        (2, 1, 5.0, Trichotomy::CantorSet),
        (4, 3, 0.18, Trichotomy::ConnectedOther),
    ];
    let mut lines = Vec::new();
    for (n, d, lambda, expected) in cases {
        let params = MapParams::real(n, d, lambda).map_err(err)?;
        for res in [512, 1024, 2048] {
            let spec = GridSpec::covering(&params, res).map_err(err)?;
            let label = classify_certified(&params, &spec, 1000).map_err(|e| format!("({n},{d},{lambda}) at {res}: {e}"))?;
            if label.label != expected {
                return Err(format!("({n},{d},{lambda}) at {res}: {:?}", label.label));
            }
        }
        lines.push(format!("({n},{d},{lambda}) {expected:?}"));
    }
    Ok(lines.join(", "))
}

fn symmetry_suites() -> Outcome {
    timed(SYMMETRY_BUDGET, || {
        let tol = Tolerances::default();
        let rel = |a: Complex64, b: Complex64| (a - b).norm() / b.norm().max(1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut worst = [0f64; 4];
        for (n, d) in FAMILIES {
            for _ in 0..SAMPLES {
                let lambda = Complex64::from_polar(rng.gen_range(0.01..1.0), rng.gen_range(0.0..std::f64::consts::TAU));
                let z = Complex64::from_polar(rng.gen_range(0.2..1.8), rng.gen_range(0.0..std::f64::consts::TAU));
                let p = MapParams::new(n, d, lambda).map_err(err)?;
                // Conjugation.
                let q = p.with_lambda(lambda.conj()).map_err(err)?;
                worst[0] = worst[0].max(rel(q.apply(z.conj()), p.apply(z).conj()));
                // Rotation by omega.
                let j = rng.gen_range(0..(n + d) as i64);
                let w = root_of_unity((n + d) as u64, j);
                worst[1] = worst[1].max(rel(p.apply(w * z), root_of_unity((n + d) as u64, j * n as i64) * p.apply(z)));
                // Rotation by nu with the parameter twist.
                let j = rng.gen_range(0..(n - 1) as i64);
                let twisted = p.with_lambda(root_of_unity((n - 1) as u64, j * (d as i64 + 1)) * lambda).map_err(err)?;
                let nu = root_of_unity((n - 1) as u64, j);
                worst[2] = worst[2].max(rel(twisted.apply(nu * z), nu * p.apply(z)));
                // Rotation by eta carried through k iterates.
                let k = rng.gen_range(1..=3u32);
                let rotated = p.symmetry_rotate(1).map_err(err)?;
                let (lhs, rhs) = (rotated.params.iterate(rotated.eta_power * z, k as usize), p.iterate(z, k as usize));
                if lhs.norm().is_finite() && rhs.norm() < 1e12 {
                    let m = ((n + d) * (n - 1)) as u64;
                    let factor = root_of_unity(m, ((n as u64).pow(k) % m) as i64);
                    worst[3] = worst[3].max(rel(lhs, factor * rhs));
                }
            }
        }
        let limits = [tol.algebraic, tol.algebraic, tol.algebraic, tol.iterated];
        let detail = format!(
            "{} samples, worst {:.1e} / {:.1e} / {:.1e} / {:.1e}",
            SAMPLES * FAMILIES.len(),
            worst[0],
            worst[1],
            worst[2],
            worst[3]
        );
        if worst.iter().zip(limits).all(|(&e, limit)| e < limit) {
            Ok(detail)
        } else {
            Err(detail)
        }
    })
}

fn symbolic() -> Outcome {
    let params = MapParams::real(3, 3, 0.125).map_err(err)?;
    let spec = GridSpec::new(origin(), 1.5, 1024).map_err(err)?;
    let map = build_region_map(&params, &spec, 1000).map_err(err)?;
    let q0 = newton_periodic(&params, Complex64::new(0.9, 0.0), 1, 50).ok_or("q0 did not converge")?;
    let reading = itinerary_of(&params, &map, q0, 30).map_err(err)?;
    let zero = Itinerary::periodic(vec![0], 6).map_err(err)?;
    if !quotient_equal(&reading.itinerary, &zero).map_err(err)? {
        return Err(format!("q0 reads {}", reading.itinerary));
    }
    let mut checked = 0;
    for period in 1..=3 {
        for p in find_periodic_points(&params, period, Rect::centered(origin(), 1.2), 128) {
            if !p.is_repelling() {
                continue;
            }
            let here = itinerary_of(&params, &map, p.z, 30).map_err(err)?;
            let there = itinerary_of(&params, &map, params.apply(p.z), 30).map_err(err)?;
            if !here.shift().agrees_with(&there).map_err(err)? {
                return Err(format!("{}: {} vs {}", p.z, here.itinerary, there.itinerary));
            }
            checked += 1;
        }
    }
    if checked < 20 {
        return Err(format!("only {checked} points"));
    }
    Ok(format!("q0 -> {}, {checked} points commute with the shift", reading.itinerary))
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("checkerboard-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(err)?;
    let mut images = Vec::new();
    for name in ["a.ppm", "b.ppm"] {
        let path = dir.join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_checkerboard"))
            .args(["render-julia", "--n", "4", "--d", "3", "--lambda", "0.18", "--resolution", "512", "--out"])
            .arg(&path)
            .output()
            .map_err(err)?
            .status;
        if !status.success() {
            return Err(format!("render-julia exited with {status}"));
        }
        images.push(std::fs::read(&path).map_err(err)?);
    }
    let _ = std::fs::remove_dir_all(&dir);
    if images[0] != images[1] {
        return Err("render-julia output differs between runs".into());
    }
    let mut mismatches = 0;
    for (n, d) in [(3, 3), (4, 4), (13, 7)] {
        let half = 2.4 * all_centers(n, d).map_err(err)?[0].lambda.norm();
        let spec = RenderSpec::new(Plane::Parameter { n, d }, GridSpec::new(origin(), half, 512).map_err(err)?, 300, Palette::EscapeShade)
            .map_err(err)?;
        let img = render(&spec).map_err(err)?;
        for y in 0..512 {
            for x in 0..512 {
                mismatches += (img.pixel(x, y) != img.pixel(x, 511 - y)) as usize;
            }
        }
    }
    if mismatches > 0 {
        return Err(format!("{mismatches} asymmetric parameter-plane pixels"));
    }
    Ok(format!("{} identical bytes; parameter planes mirror-exact", images[0].len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("class counts (13,7) and (11,4)", class_counts),
        ("closed form = Burnside = orbits, n<=50, d<=50", triple_agreement),
        ("rho_min partition = dihedral orbits", rho_partition),
        ("numeric index maps", index_maps),
        ("(3,3) center and fixed critical point", three_three_center),
        ("(4,3,0.18) checkerboard at 1024", checkerboard),
        ("trichotomy stable at 512/1024/2048", trichotomy),
        ("symmetry identities", symmetry_suites),
        ("itineraries at (3,3,1/8)", symbolic),
        ("deterministic renders", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
