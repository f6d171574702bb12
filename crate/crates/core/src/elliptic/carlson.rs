//! Carlson symmetric integrals R_F and R_D by the duplication theorem.
//!
//! Truncation follows DLMF 19.36.1 and 19.36.2; with the stopping rule
//! below the relative error is at the level of machine precision.

const MAX_ITER: usize = 64;

/// R_F(x, y, z) for non-negative arguments, at most one of them zero.
pub fn rf(x: f64, y: f64, z: f64) -> f64 {
    let (mut x, mut y, mut z) = (x, y, z);
    let a0 = (x + y + z) / 3.0;
    let q = (3.0 * f64::EPSILON).powf(-1.0 / 6.0)
        * (a0 - x).abs().max((a0 - y).abs()).max((a0 - z).abs());
    let mut a = a0;
    let mut scale = 1.0;
    let (x0, y0) = (x, y);
    for _ in 0..MAX_ITER {
        if q * scale < a.abs() {
            break;
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * sy + sx * sz + sy * sz;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        a = 0.25 * (a + lam);
        scale *= 0.25;
    }
    let dx = (a0 - x0) * scale / a;
    let dy = (a0 - y0) * scale / a;
    let dz = -(dx + dy);
    let e2 = dx * dy - dz * dz;
    let e3 = dx * dy * dz;
    (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / a.sqrt()
}

/// R_D(x, y, z) for x, y ≥ 0 (not both zero) and z > 0.
pub fn rd(x: f64, y: f64, z: f64) -> f64 {
    let (mut x, mut y, mut z) = (x, y, z);
    let a0 = (x + y + 3.0 * z) / 5.0;
    let q = (0.25 * f64::EPSILON).powf(-1.0 / 6.0)
        * (a0 - x).abs().max((a0 - y).abs()).max((a0 - z).abs());
    let mut a = a0;
    let mut scale = 1.0;
    let mut tail = 0.0;
    let (x0, y0) = (x, y);
    for _ in 0..MAX_ITER {
        if q * scale < a.abs() {
            break;
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * sy + sx * sz + sy * sz;
        tail += 3.0 * scale / (sz * (z + lam));
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        a = 0.25 * (a + lam);
        scale *= 0.25;
    }
    let dx = (a0 - x0) * scale / a;
    let dy = (a0 - y0) * scale / a;
    let dz = -(dx + dy) / 3.0;
    let xy = dx * dy;
    let e2 = xy - 6.0 * dz * dz;
    let e3 = (3.0 * xy - 8.0 * dz * dz) * dz;
    let e4 = 3.0 * (xy - dz * dz) * dz * dz;
    let e5 = xy * dz * dz * dz;
    let poly = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0
        - 3.0 * e4 / 22.0
        - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0;
    scale * poly / (a * a.sqrt()) + tail
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rf_closed_forms() {
        // R_F(0, 1, 1) = π/2 and R_F(x, x, x) = x^{-1/2}
        assert!((rf(0.0, 1.0, 1.0) - PI / 2.0).abs() < 1e-15);
        assert!((rf(4.0, 4.0, 4.0) - 0.5).abs() < 1e-15);
        // DLMF 19.20.1: R_F(0, y, y) = π / (2√y)
        assert!((rf(0.0, 9.0, 9.0) - PI / 6.0).abs() < 1e-15);
    }

    #[test]
    fn rd_closed_forms() {
        // R_D(x, x, x) = x^{-3/2}, R_D(0, y, y) = 3π / (4 y^{3/2})
        assert!((rd(4.0, 4.0, 4.0) - 0.125).abs() < 1e-15);
        assert!((rd(0.0, 4.0, 4.0) - 3.0 * PI / 32.0).abs() < 1e-15);
    }

    #[test]
    fn reference_values() {
        // Carlson (1995), table of test values
        assert!((rf(1.0, 2.0, 0.0) - 1.311_028_777_146_059_9).abs() < 1e-14);
        assert!((rd(0.0, 2.0, 1.0) - 1.797_210_352_103_388_3).abs() < 1e-14);
    }
}
