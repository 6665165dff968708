//! Checks the conjugation and rotation symmetries of the family at a few random points.
//!
//! cargo run --example symmetry_identities

use checkerboard::MapParams;
use num_complex::Complex64;

fn main() -> checkerboard::Result<()> {
    let params = MapParams::new(4, 3, Complex64::new(0.18, 0.05))?;
    let omega = params.omega();
    let samples = [
        Complex64::new(0.7, 0.2),
        Complex64::new(-0.4, 0.9),
        Complex64::new(1.3, -1.1),
    ];

    let conj = params.with_lambda(params.lambda().conj())?;
    let rotated = params.symmetry_rotate(1)?;
    let n = params.n() as i32;

    println!("F(z) = z^{} + ({}) / z^{}", params.n(), params.lambda(), params.d());
    for z in samples {
        let fz = params.evaluate(z)?;
        // Conjugate parameter, conjugate point.
        let e1 = (conj.evaluate(z.conj())? - fz.conj()).norm();
        // Rotation by omega commutes up to omega^n.
        let e2 = (params.evaluate(omega * z)? - omega.powi(n) * fz).norm();
        // nu lambda and eta z, after three iterates.
        let k = 3;
        let lhs = rotated.params.iterate(rotated.eta_power * z, k);
        let rhs = rotated.eta_power.powi(n.pow(k as u32)) * params.iterate(z, k);
        let e3 = (lhs - rhs).norm() / rhs.norm().max(1.0);
        println!("z = {z:.3}: conjugation {e1:.1e}, omega rotation {e2:.1e}, eta rotation (3 iterates) {e3:.1e}");
    }

    let crit = params.critical_data();
    println!("critical points |c| = {:.6}", crit.critical_radius);
    for (j, c) in crit.critical_points.iter().enumerate() {
        println!("  c^{j} = {c:.6}  F'(c) = {:.1e}", params.derivative(*c)?.norm());
    }
    println!("escape radius R = {:.4}", params.escape_radius());
    Ok(())
}
