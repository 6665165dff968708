//! The family `F(z) = z^n + lambda / z^d` and its symmetry constants.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical tolerances used when checking algebraic and iterated identities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub algebraic: f64,
    pub iterated: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            algebraic: 1e-10,
            iterated: 1e-6,
        }
    }
}

/// Exponents and parameter of one member of the family.
///
/// Construction rejects `n < 2`, `d < 1` and `lambda = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapParams {
    n: u32,
    d: u32,
    lambda: Complex64,
}

impl MapParams {
    pub fn new(n: u32, d: u32, lambda: Complex64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams(format!("n = {n} must be at least 2")));
        }
        if d < 1 {
            return Err(Error::InvalidParams(format!("d = {d} must be at least 1")));
        }
        if !lambda.re.is_finite() || !lambda.im.is_finite() {
            return Err(Error::InvalidParams("lambda must be finite".into()));
        }
        if lambda == Complex64::new(0.0, 0.0) {
            return Err(Error::InvalidParams("lambda = 0 degenerates to z^n".into()));
        }
        Ok(MapParams { n, d, lambda })
    }

    /// Shorthand for a real parameter.
    pub fn real(n: u32, d: u32, lambda: f64) -> Result<Self> {
        Self::new(n, d, Complex64::new(lambda, 0.0))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    /// `n + d`: number of free critical points, prepoles and connecting components.
    pub fn degree(&self) -> u32 {
        self.n + self.d
    }

    /// Same exponents, different parameter.
    pub fn with_lambda(&self, lambda: Complex64) -> Result<Self> {
        Self::new(self.n, self.d, lambda)
    }

    /// `exp(2 pi i / (n + d))`.
    pub fn omega(&self) -> Complex64 {
        root_of_unity(self.degree() as u64, 1)
    }

    /// `exp(2 pi i / (n - 1))`, equal to 1 when `n = 2`.
    pub fn nu(&self) -> Complex64 {
        root_of_unity((self.n - 1) as u64, 1)
    }

    /// `exp(2 pi i / ((n + d)(n - 1)))`.
    pub fn eta(&self) -> Complex64 {
        root_of_unity(self.degree() as u64 * (self.n - 1) as u64, 1)
    }

    /// `F(z)` without the pole check. Returns non-finite values at `z = 0`.
    #[inline]
    pub fn apply(&self, z: Complex64) -> Complex64 {
        z.powu(self.n) + self.lambda / z.powu(self.d)
    }

    /// `F(z)` and `F'(z)` in one pass.
    #[inline]
    pub fn apply_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let zn1 = z.powu(self.n - 1);
        let zd = z.powu(self.d);
        let pole = self.lambda / zd;
        let value = zn1 * z + pole;
        let deriv = zn1 * self.n as f64 - pole * self.d as f64 / z;
        (value, deriv)
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        if z == Complex64::new(0.0, 0.0) {
            return Err(Error::Pole);
        }
        Ok(self.apply(z))
    }

    /// `n z^(n-1) - d lambda / z^(d+1)`.
    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        if z == Complex64::new(0.0, 0.0) {
            return Err(Error::Pole);
        }
        Ok(self.apply_with_derivative(z).1)
    }

    /// `k`-fold composition. Stops early (returning the non-finite value) if the orbit hits the pole.
    pub fn iterate(&self, z: Complex64, k: usize) -> Complex64 {
        let mut w = z;
        for _ in 0..k {
            w = self.apply(w);
            if !w.re.is_finite() || !w.im.is_finite() {
                break;
            }
        }
        w
    }

    /// Critical points and prepoles, each listed counterclockwise from the root
    /// of smallest nonnegative argument.
    pub fn critical_data(&self) -> CriticalData {
        let target = self.lambda * (self.d as f64 / self.n as f64);
        let critical_points = roots_ccw(target, self.degree());
        let prepoles = roots_ccw(-self.lambda, self.degree());
        CriticalData {
            critical_radius: target.norm().powf(1.0 / self.degree() as f64),
            critical_points,
            prepoles,
        }
    }

    /// The critical point `r exp(i Arg(lambda) / (n + d))` built from the principal argument.
    ///
    /// Unlike `critical_data().critical_points[0]` this choice commutes exactly with complex
    /// conjugation of `lambda`, which keeps parameter-plane images mirror symmetric bit for bit.
    pub fn principal_critical_point(&self) -> Complex64 {
        let target = self.lambda * (self.d as f64 / self.n as f64);
        let radius = target.norm().powf(1.0 / self.degree() as f64);
        let angle = target.im.atan2(target.re) / self.degree() as f64;
        Complex64::new(radius * angle.cos(), radius * angle.sin())
    }

    /// `max(2, (2 + |lambda|)^(1/(n-1)))`. Once `|z| >= R`, `|F(z)| >= 2|z|`.
    pub fn escape_radius(&self) -> f64 {
        let grow = (2.0 + self.lambda.norm()).powf(1.0 / (self.n - 1) as f64);
        grow.max(2.0)
    }

    /// Replaces `lambda` by `nu^j lambda`; the companion dynamical rotation is `eta^j`.
    pub fn symmetry_rotate(&self, j: i64) -> Result<RotatedParams> {
        if self.n == 2 {
            return Err(Error::SymmetryUndefined);
        }
        let nu_j = root_of_unity((self.n - 1) as u64, j);
        let eta_j = root_of_unity(self.degree() as u64 * (self.n - 1) as u64, j);
        Ok(RotatedParams {
            params: self.with_lambda(nu_j * self.lambda)?,
            eta_power: eta_j,
        })
    }
}

/// Output of [`MapParams::symmetry_rotate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatedParams {
    pub params: MapParams,
    pub eta_power: Complex64,
}

/// Free critical points (`z^(n+d) = d lambda / n`) and prepoles (`z^(n+d) = -lambda`).
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalData {
    pub critical_points: Vec<Complex64>,
    pub prepoles: Vec<Complex64>,
    pub critical_radius: f64,
}

/// `exp(2 pi i k / m)`, with `k` reduced mod `m` first so large exponents stay exact.
pub fn root_of_unity(m: u64, k: i64) -> Complex64 {
    if m <= 1 {
        return Complex64::new(1.0, 0.0);
    }
    let k = k.rem_euclid(m as i64) as f64;
    Complex64::from_polar(1.0, TAU * k / m as f64)
}

/// Argument normalized into `[0, 2 pi)`.
pub fn arg_nonneg(z: Complex64) -> f64 {
    let a = z.im.atan2(z.re);
    if a >= 0.0 {
        return a;
    }
    let wrapped = a + TAU;
    if wrapped >= TAU {
        0.0
    } else {
        wrapped
    }
}

/// All `count` roots of `w^count = target`, counterclockwise from smallest nonnegative argument.
fn roots_ccw(target: Complex64, count: u32) -> Vec<Complex64> {
    let radius = target.norm().powf(1.0 / count as f64);
    let base = arg_nonneg(target) / count as f64;
    let step = TAU / count as f64;
    (0..count)
        .map(|j| Complex64::from_polar(radius, base + step * j as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_degenerate_parameters() {
        assert!(MapParams::real(1, 1, 1.0).is_err());
        assert!(MapParams::real(2, 0, 1.0).is_err());
        assert!(MapParams::real(3, 3, 0.0).is_err());
        assert!(MapParams::new(3, 3, c(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let p = MapParams::real(2, 1, 1.0).unwrap();
        assert!(close(p.evaluate(c(1.0, 0.0)).unwrap(), c(2.0, 0.0), 1e-15));
        let p = MapParams::real(4, 3, 0.18).unwrap();
        assert!(close(p.evaluate(c(1.0, 0.0)).unwrap(), c(1.18, 0.0), 1e-15));
        // c^(n-1) = d/(n+d) = 1/2 is a fixed point of z^3 + (1/8)/z^3.
        let p = MapParams::real(3, 3, 0.125).unwrap();
        let fixed = c(0.5f64.sqrt(), 0.0);
        assert!(close(p.evaluate(fixed).unwrap(), fixed, 1e-15));
        assert_eq!(p.evaluate(c(0.0, 0.0)), Err(Error::Pole));
    }

    #[test]
    fn derivative_examples() {
        let p = MapParams::real(2, 1, 1.0).unwrap();
        assert!(close(p.derivative(c(1.0, 0.0)).unwrap(), c(1.0, 0.0), 1e-15));
        let p = MapParams::real(3, 3, 0.125).unwrap();
        let crit = c(0.125f64.powf(1.0 / 6.0), 0.0);
        assert!(p.derivative(crit).unwrap().norm() < 1e-10);
        let p = MapParams::real(2, 2, 16.0).unwrap();
        assert!(p.derivative(c(2.0, 0.0)).unwrap().norm() < 1e-10);
        assert_eq!(p.derivative(c(0.0, 0.0)), Err(Error::Pole));
    }

    #[test]
    fn critical_data_examples() {
        let p = MapParams::real(2, 2, 16.0).unwrap();
        let cd = p.critical_data();
        assert!((cd.critical_radius - 2.0).abs() < 1e-12);
        let expected = [c(2.0, 0.0), c(0.0, 2.0), c(-2.0, 0.0), c(0.0, -2.0)];
        for (got, want) in cd.critical_points.iter().zip(expected) {
            assert!(close(*got, want, 1e-12), "{got} vs {want}");
        }

        let p = MapParams::real(3, 3, 0.125).unwrap();
        assert!((p.critical_data().critical_radius - 0.5f64.sqrt()).abs() < 1e-12);

        let p = MapParams::real(2, 2, -1.0).unwrap();
        let expected = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        for (got, want) in p.critical_data().prepoles.iter().zip(expected) {
            assert!(close(*got, want, 1e-12), "{got} vs {want}");
        }
    }

    #[test]
    fn critical_data_invariants() {
        let p = MapParams::new(5, 3, c(0.3, -0.7)).unwrap();
        let cd = p.critical_data();
        let target = p.lambda() * (3.0 / 5.0);
        let step = TAU / 8.0;
        for (j, z) in cd.critical_points.iter().enumerate() {
            assert!((z.powu(8) - target).norm() <= 1e-10 * target.norm());
            assert!((z.norm() - cd.critical_radius).abs() < 1e-10);
            assert!(p.derivative(*z).unwrap().norm() < 1e-10);
            let next = cd.critical_points[(j + 1) % 8];
            let gap = (arg_nonneg(next / z) - step).abs();
            assert!(gap < 1e-10, "gap {gap}");
        }
        assert!(arg_nonneg(cd.critical_points[0]) < step);
        for w in &cd.prepoles {
            assert!((w.powu(8) + p.lambda()).norm() <= 1e-10 * p.lambda().norm());
            assert!((w.powu(5) * w.powu(3) + p.lambda()).norm() <= 1e-10);
        }
    }

    #[test]
    fn escape_radius_examples() {
        assert_eq!(MapParams::real(3, 2, 1.0).unwrap().escape_radius(), 2.0);
        assert!((MapParams::real(2, 1, 100.0).unwrap().escape_radius() - 102.0).abs() < 1e-12);
        assert_eq!(MapParams::real(13, 7, 0.3228).unwrap().escape_radius(), 2.0);
    }

    #[test]
    fn symmetry_rotate_examples() {
        let p = MapParams::real(3, 3, 0.125).unwrap();
        let r = p.symmetry_rotate(1).unwrap();
        assert!(close(r.params.lambda(), c(-0.125, 0.0), 1e-15));

        let p = MapParams::real(13, 7, 0.3228).unwrap();
        let r = p.symmetry_rotate(12).unwrap();
        assert!(close(r.params.lambda(), p.lambda(), 1e-15));

        let p = MapParams::real(4, 3, 0.18).unwrap();
        let r = p.symmetry_rotate(1).unwrap();
        let want = Complex64::from_polar(0.18, TAU / 3.0);
        assert!(close(r.params.lambda(), want, 1e-15));

        let p = MapParams::real(2, 3, 0.1).unwrap();
        assert_eq!(p.symmetry_rotate(1), Err(Error::SymmetryUndefined));
    }

    #[test]
    fn roots_of_unity_relations() {
        for (n, d) in [(3, 3), (4, 3), (13, 7), (2, 5)] {
            let p = MapParams::real(n, d, 0.2).unwrap();
            let eta = p.eta();
            assert!(close(eta.powu(n + d), p.nu(), 1e-12));
            assert!(close(eta.powu(n - 1), p.omega(), 1e-12));
        }
    }

    #[test]
    fn principal_critical_point_is_critical() {
        let p = MapParams::new(4, 4, c(-0.2, -0.05)).unwrap();
        let z = p.principal_critical_point();
        assert!(p.derivative(z).unwrap().norm() < 1e-10);
        let q = p.with_lambda(p.lambda().conj()).unwrap();
        assert_eq!(q.principal_critical_point(), z.conj());
    }
}
