//! Centers of the main cardioids of the principal Mandelbrot sets, the induced map on
//! connecting components, and rotation numbers.
//!
//! At the center of the cardioid meeting the positive real axis, the positive real critical
//! point `c` is a fixed point. Writing `c^(n+d) = d lambda / n` turns `F(c) = c` into
//! `c^(n-1) = d / (n+d)`, so
//!
//! ```text
//! c = (d / (n+d))^(1/(n-1)),    lambda_0 = (n/d) c^(n+d).
//! ```
//!
//! The other centers are `lambda_k = nu^k lambda_0`. The critical points at `lambda_k` are
//! `c^j = eta^k omega^j c`, and the rotation symmetries give `F(c^j) = c^(n j + k mod (n+d))`.

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::MapParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CenterData {
    pub k: u32,
    pub lambda: Complex64,
    /// A critical index lying on a shortest cycle of the component index map.
    pub fixed_or_periodic_critical_index: u32,
    pub superattracting_period: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationProfile {
    pub k: u32,
    /// Image component of each `C^j`.
    pub index_map: Vec<u32>,
    /// Signed displacement of each component, in `(-(n+d)/2, (n+d)/2]`.
    pub rho: Vec<i64>,
    pub rho_min: u32,
}

/// Whether a family has principal Mandelbrot sets: `d >= 2` and `(n, d) != (2, 2)`.
pub fn check_family(n: u32, d: u32) -> Result<()> {
    if n < 2 || d < 1 {
        return Err(Error::InvalidParams(format!("need n >= 2 and d >= 1, got n = {n}, d = {d}")));
    }
    if d == 1 || (n == 2 && d == 2) {
        return Err(Error::UnsupportedFamily { n, d });
    }
    Ok(())
}

fn check_index(n: u32, k: u32) -> Result<()> {
    if k > n - 2 {
        return Err(Error::CardioidIndex { n, k });
    }
    Ok(())
}

/// Closed-form center polished by Newton's method along the real axis, then checked for
/// a superattracting fixed point.
pub fn center_of_m0(n: u32, d: u32) -> Result<CenterData> {
    check_family(n, d)?;
    let (nf, df) = (n as f64, d as f64);
    let total = nf + df;
    let c_of = |lambda: f64| (df * lambda / nf).powf(1.0 / total);
    // h(lambda) = F(c) - c on the real critical point, using lambda / c^d = (n/d) c^n.
    let h = |lambda: f64| {
        let c = c_of(lambda);
        c.powf(nf) * total / df - c
    };
    let dh = |lambda: f64| {
        let c = c_of(lambda);
        let dc = c / (total * lambda);
        (nf * c.powf(nf - 1.0) * total / df - 1.0) * dc
    };

    let c0 = (df / total).powf(1.0 / (nf - 1.0));
    let mut lambda = nf / df * c0.powf(total);
    for _ in 0..20 {
        let slope = dh(lambda);
        if slope == 0.0 || !slope.is_finite() {
            break;
        }
        let step = h(lambda) / slope;
        lambda -= step;
        if step.abs() <= 1e-17 * lambda.abs() {
            break;
        }
    }

    let params = MapParams::real(n, d, lambda)?;
    let c = Complex64::new(c_of(lambda), 0.0);
    let (fc, dfc) = params.apply_with_derivative(c);
    if (fc - c).norm() > 1e-12 || dfc.norm() > 1e-10 {
        return Err(Error::InvariantViolation(format!(
            "center lambda = {lambda} of family ({n}, {d}): |F(c) - c| = {:e}, |F'(c)| = {:e}",
            (fc - c).norm(),
            dfc.norm()
        )));
    }
    Ok(center_data(n, d, 0, Complex64::new(lambda, 0.0)))
}

fn closed_form_index_map(n: u32, d: u32, k: u32) -> Vec<u32> {
    let total = (n + d) as u64;
    (0..total).map(|j| ((n as u64 * j + k as u64) % total) as u32).collect()
}

fn center_data(n: u32, d: u32, k: u32, lambda: Complex64) -> CenterData {
    let map = closed_form_index_map(n, d, k);
    // Shortest cycle of the index map; every orbit of a finite map ends in one.
    let mut best: Option<(u32, u32)> = None;
    for start in 0..map.len() as u32 {
        let mut j = start;
        for _ in 0..map.len() {
            j = map[j as usize];
        }
        // j is now periodic.
        let mut period = 1;
        let mut i = map[j as usize];
        let mut smallest = j;
        while i != j {
            smallest = smallest.min(i);
            i = map[i as usize];
            period += 1;
        }
        if best.is_none_or(|(p, s)| (period, smallest) < (p, s)) {
            best = Some((period, smallest));
        }
    }
    let (period, index) = best.expect("index map has at least one cycle");
    CenterData {
        k,
        lambda,
        fixed_or_periodic_critical_index: index,
        superattracting_period: period,
    }
}

/// `lambda_k = nu^k lambda_0` for `k = 0..n-2`.
pub fn all_centers(n: u32, d: u32) -> Result<Vec<CenterData>> {
    let base = center_of_m0(n, d)?;
    Ok((0..n - 1)
        .map(|k| {
            let lambda = if k == 0 {
                base.lambda
            } else {
                base.lambda * crate::map::root_of_unity((n - 1) as u64, k as i64)
            };
            center_data(n, d, k, lambda)
        })
        .collect())
}

/// Representative of `x mod m` in `(-m/2, m/2]`.
pub fn centered_residue(x: i64, m: i64) -> i64 {
    let r = x.rem_euclid(m);
    if 2 * r > m {
        r - m
    } else {
        r
    }
}

/// Image index of each critical point at the center `lambda_k`, found by matching `F(c^j)`
/// to the nearest critical point. The nearest match must be ten times closer than the
/// runner-up.
pub fn numeric_index_map(n: u32, d: u32, k: u32) -> Result<Vec<Option<u32>>> {
    check_index(n, k)?;
    let center = all_centers(n, d)?[k as usize];
    let params = MapParams::new(n, d, center.lambda)?;
    let crit = params.critical_data().critical_points;
    Ok(crit
        .iter()
        .map(|&c| {
            let image = params.apply(c);
            let mut dist: Vec<(f64, usize)> = crit.iter().enumerate().map(|(m, &cm)| ((image - cm).norm(), m)).collect();
            dist.sort_by(|a, b| a.0.total_cmp(&b.0));
            (dist[0].0 * 10.0 < dist[1].0).then_some(dist[0].1 as u32)
        })
        .collect())
}

/// Index map, rotation numbers and the minimal rotation number at the center `lambda_k`.
/// The closed-form index map is cross-checked against the numeric one.
pub fn rotation_profile(n: u32, d: u32, k: u32) -> Result<RotationProfile> {
    check_family(n, d)?;
    check_index(n, k)?;
    let index_map = closed_form_index_map(n, d, k);
    let numeric = numeric_index_map(n, d, k)?;
    for (j, (&expected, &found)) in index_map.iter().zip(&numeric).enumerate() {
        if found != Some(expected) {
            return Err(Error::IndexMapMismatch {
                j: j as u32,
                expected,
                found,
            });
        }
    }
    let total = (n + d) as i64;
    let rho: Vec<i64> = index_map
        .iter()
        .enumerate()
        .map(|(j, &m)| centered_residue(m as i64 - j as i64, total))
        .collect();
    let rho_min = rho.iter().map(|r| r.unsigned_abs() as u32).min().unwrap();
    Ok(RotationProfile {
        k,
        index_map,
        rho,
        rho_min,
    })
}

/// How the dynamics at `lambda_{k1}` and `lambda_{k2}` are related.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `k2 = k1 + steps * g (mod n-1)`: conjugate by a rotation of the plane.
    Rotation { steps: u32 },
    /// `k2 = -k1 + steps * g (mod n-1)`: a rotation composed with complex conjugation.
    RotationWithConjugation { steps: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conjugacy {
    pub conjugate: bool,
    pub witness: Option<Witness>,
}

/// Conjugacy of the centers `lambda_{k1}`, `lambda_{k2}` by the symmetry criterion
/// `k2 = +-k1 (mod g)`, cross-checked against equality of minimal rotation numbers.
pub fn are_conjugate(n: u32, d: u32, k1: u32, k2: u32) -> Result<Conjugacy> {
    check_family(n, d)?;
    check_index(n, k1)?;
    check_index(n, k2)?;
    let m = (n - 1) as i64;
    let g = (n - 1).gcd(&(d + 1)) as i64;
    let steps_to = |from: i64| -> Option<u32> {
        let diff = (k2 as i64 - from).rem_euclid(m);
        (diff % g == 0).then_some((diff / g) as u32)
    };
    let witness = match steps_to(k1 as i64) {
        Some(steps) => Some(Witness::Rotation { steps }),
        None => steps_to(-(k1 as i64)).map(|steps| Witness::RotationWithConjugation { steps }),
    };
    let by_symmetry = witness.is_some();
    let by_rho = rotation_profile(n, d, k1)?.rho_min == rotation_profile(n, d, k2)?.rho_min;
    if by_symmetry != by_rho {
        return Err(Error::InvariantViolation(format!(
            "({n}, {d}): k = {k1}, {k2} symmetric = {by_symmetry} but equal rho_min = {by_rho}"
        )));
    }
    Ok(Conjugacy {
        conjugate: by_symmetry,
        witness,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CenterEntry {
    pub k: u32,
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub rho: Vec<i64>,
    pub rho_min: u32,
}

/// JSON summary of all centers of a family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub n: u32,
    pub d: u32,
    pub g: u32,
    pub centers: Vec<CenterEntry>,
}

pub fn family_report(n: u32, d: u32) -> Result<FamilyReport> {
    let centers = all_centers(n, d)?
        .into_iter()
        .map(|c| {
            let profile = rotation_profile(n, d, c.k)?;
            Ok(CenterEntry {
                k: c.k,
                lambda_re: c.lambda.re,
                lambda_im: c.lambda.im,
                rho: profile.rho,
                rho_min: profile.rho_min,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FamilyReport {
        n,
        d,
        g: (n - 1).gcd(&(d + 1)),
        centers,
    })
}
