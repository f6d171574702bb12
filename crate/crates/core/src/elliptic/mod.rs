//! Legendre elliptic integrals and Jacobi elliptic functions.
//!
//! All routines take the modulus `k`, not the parameter `m = k²`.
//! Complete integrals use the arithmetic-geometric mean, incomplete ones go
//! through Carlson's R_F / R_D with quasi-periodic range reduction, and the
//! amplitude is obtained by descending Landen transformation followed by a
//! Newton polish against our own F, so that `incomplete_f(am(p)) = p` holds to
//! rounding.

mod carlson;
pub(crate) mod series;

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

/// Largest admissible modulus; K(k) is finite but grows like −½ log(1 − k).
pub const MODULUS_CAP: f64 = 1.0 - 1e-12;

/// Below this modulus ι₁…ι₆ are summed as power series.
const SERIES_SWITCH: f64 = 0.7;

const MAX_AGM: usize = 40;

/// Elliptic modulus k ∈ [0, 1) together with its complement k' = √(1 − k²).
///
/// [`Modulus::new`] enforces the cap k ≤ 1 − 10⁻¹². [`Modulus::from_complement`]
/// reaches closer to 1: every routine reads 1 − k² through `m1()`, so a
/// modulus given by an exact k' stays accurate where k itself rounds to 1.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Modulus {
    k: f64,
    kc: f64,
}

impl Modulus {
    pub fn new(k: f64) -> Result<Self> {
        if (0.0..=MODULUS_CAP).contains(&k) {
            Ok(Self::unchecked(k))
        } else {
            Err(Error::Domain {
                what: "elliptic modulus",
                value: k,
            })
        }
    }

    fn unchecked(k: f64) -> Self {
        Modulus {
            k,
            kc: ((1.0 - k) * (1.0 + k)).sqrt(),
        }
    }

    /// Modulus with complement k' ∈ [10⁻¹⁵⁰, 1]; k' = 1 is k = 0.
    pub fn from_complement(kc: f64) -> Result<Self> {
        if (1e-150..=1.0).contains(&kc) {
            Ok(Modulus {
                k: ((1.0 - kc) * (1.0 + kc)).sqrt(),
                kc,
            })
        } else {
            Err(Error::Domain {
                what: "complementary modulus",
                value: kc,
            })
        }
    }

    /// Clamps into the admissible range. NaN maps to 0.
    pub fn saturating(k: f64) -> Self {
        if k.is_nan() {
            return Self::unchecked(0.0);
        }
        Self::unchecked(k.clamp(0.0, MODULUS_CAP))
    }

    #[inline]
    pub fn k(self) -> f64 {
        self.k
    }

    #[inline]
    pub fn m(self) -> f64 {
        self.k * self.k
    }

    /// 1 − k², without cancellation.
    #[inline]
    pub fn m1(self) -> f64 {
        self.kc * self.kc
    }

    /// Complementary modulus k' = √(1 − k²).
    #[inline]
    pub fn kc(self) -> f64 {
        self.kc
    }
}

/// (K(k), E(k)) from one AGM sweep.
pub fn complete_pair(k: Modulus) -> (f64, f64) {
    if k.k == 0.0 {
        return (FRAC_PI_2, FRAC_PI_2);
    }
    let mut a = 1.0_f64;
    let mut b = k.kc();
    let mut c = k.k;
    let mut sum = 0.5 * c * c;
    let mut pow2 = 0.5;
    for _ in 0..MAX_AGM {
        if c.abs() <= f64::EPSILON * a {
            break;
        }
        c = 0.5 * (a - b);
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
        pow2 *= 2.0;
        sum += pow2 * c * c;
    }
    let kk = PI / (2.0 * a);
    (kk, kk * (1.0 - sum))
}

pub fn complete_k(k: Modulus) -> f64 {
    complete_pair(k).0
}

pub fn complete_e(k: Modulus) -> f64 {
    complete_pair(k).1
}

/// E(k) on the closed interval k ∈ [0, 1], where E(1) = 1.
pub fn complete_e_closed(k: f64) -> Result<f64> {
    if k == 1.0 {
        return Ok(1.0);
    }
    if (0.0..1.0).contains(&k) {
        Ok(complete_e(Modulus::unchecked(k.min(MODULUS_CAP))))
    } else {
        Err(Error::Domain {
            what: "elliptic modulus",
            value: k,
        })
    }
}

/// Splits φ = nπ + r with r ∈ [−π/2, π/2].
#[inline]
fn reduce_half_period(phi: f64) -> (f64, f64) {
    let n = (phi / PI).round();
    (n, phi - n * PI)
}

/// Δ(φ)² = 1 − k² sin²φ, formed as cos²φ + k'² sin²φ.
#[inline]
fn delta_sq(s: f64, c: f64, k: Modulus) -> f64 {
    c * c + k.m1() * s * s
}

/// F(φ, k) = ∫₀^φ dt / √(1 − k² sin² t) for any real φ.
pub fn incomplete_f(phi: f64, k: Modulus) -> f64 {
    let (n, r) = reduce_half_period(phi);
    let (s, c) = r.sin_cos();
    let base = s * carlson::rf(c * c, delta_sq(s, c, k), 1.0);
    if n == 0.0 {
        base
    } else {
        2.0 * n * complete_k(k) + base
    }
}

/// E(φ, k) = ∫₀^φ √(1 − k² sin² t) dt for any real φ.
pub fn incomplete_e(phi: f64, k: Modulus) -> f64 {
    let (n, r) = reduce_half_period(phi);
    let (s, c) = r.sin_cos();
    let d2 = delta_sq(s, c, k);
    let base =
        s * carlson::rf(c * c, d2, 1.0) - k.m() * s * s * s * carlson::rd(c * c, d2, 1.0) / 3.0;
    if n == 0.0 {
        base
    } else {
        2.0 * n * complete_e(k) + base
    }
}

/// (F(φ, k), E(φ, k)) for φ ∈ [−π/2, π/2] given by (sin φ, cos φ), cos φ ≥ 0.
/// Passing the pair avoids forming φ near ±π/2, where cos φ would lose
/// its relative accuracy.
pub fn incomplete_fe_sc(s: f64, c: f64, k: Modulus) -> (f64, f64) {
    let d2 = delta_sq(s, c, k);
    let rf = carlson::rf(c * c, d2, 1.0);
    let f = s * rf;
    (f, f - k.m() * s * s * s * carlson::rd(c * c, d2, 1.0) / 3.0)
}

/// Jacobi amplitude am(p, k).
pub fn am(p: f64, k: Modulus) -> f64 {
    if k.k == 0.0 {
        return p;
    }
    let kk = complete_k(k);
    let n = (p / (2.0 * kk)).round();
    let r = p - 2.0 * n * kk;
    let mut phi = am_landen(r, k);
    // one Newton step on F(φ) = r; dF/dφ = 1/Δ
    let (s, c) = phi.sin_cos();
    let f = s * carlson::rf(c * c, delta_sq(s, c, k), 1.0);
    phi -= (f - r) * delta_sq(s, c, k).sqrt();
    n * PI + phi
}

/// Descending Landen / AGM amplitude for |p| ≤ K.
fn am_landen(p: f64, k: Modulus) -> f64 {
    let mut a = [0.0_f64; MAX_AGM + 1];
    let mut c = [0.0_f64; MAX_AGM + 1];
    a[0] = 1.0;
    let mut b = k.kc();
    c[0] = k.k;
    let mut n = 0;
    while n < MAX_AGM && c[n].abs() > f64::EPSILON * a[n] {
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = (a[n] * b).sqrt();
        n += 1;
    }
    let mut phi = 2f64.powi(n as i32) * a[n] * p;
    for i in (1..=n).rev() {
        phi = 0.5 * (phi + (c[i] / a[i] * phi.sin()).asin());
    }
    phi
}

/// (sn, cn, dn)(p, k).
pub fn jacobi(p: f64, k: Modulus) -> (f64, f64, f64) {
    let phi = am(p, k);
    let (s, c) = phi.sin_cos();
    (s, c, delta_sq(s, c, k).sqrt())
}

/// Jacobi epsilon E(p) = ∫₀^p dn² t dt = E(am p, k).
pub fn jacobi_eps(p: f64, k: Modulus) -> f64 {
    incomplete_e(am(p, k), k)
}

/// ι₁ = 2E − K.
pub fn iota1(k: Modulus) -> f64 {
    let (kk, e) = complete_pair(k);
    2.0 * e - kk
}

/// ι₂ = K − E.
pub fn iota2(k: Modulus) -> f64 {
    if k.k <= SERIES_SWITCH {
        let m = k.m();
        return m * series::iota_series().i2.eval(m);
    }
    let (kk, e) = complete_pair(k);
    kk - e
}

/// ι₃ = (3E² − (5 − 4k²)EK + 2(1 − k²)K²) / (1 − k²).
pub fn iota3(k: Modulus) -> f64 {
    let m = k.m();
    if k.k <= SERIES_SWITCH {
        return m * series::iota_series().i3.eval(m) / k.m1();
    }
    let (kk, e) = complete_pair(k);
    (3.0 * e * e - (5.0 - 4.0 * m) * e * kk + 2.0 * k.m1() * kk * kk) / k.m1()
}

/// ι₄ = (2 − k²)K − 2E.
pub fn iota4(k: Modulus) -> f64 {
    let m = k.m();
    if k.k <= SERIES_SWITCH {
        return m * m * series::iota_series().i4.eval(m);
    }
    let (kk, e) = complete_pair(k);
    (2.0 - m) * kk - 2.0 * e
}

/// ι₄ / k⁴, regular at k = 0 with value π/16.
pub fn iota4_reduced(k: Modulus) -> f64 {
    let m = k.m();
    if k.k <= SERIES_SWITCH {
        return series::iota_series().i4.eval(m);
    }
    iota4(k) / (m * m)
}

/// (K − 8ι₄/k⁴)/k², regular at k = 0; both terms tend to π/2 there.
pub fn iota4_defect(k: Modulus) -> f64 {
    let m = k.m();
    if k.k <= SERIES_SWITCH {
        return series::iota_series().k8.eval(m);
    }
    (complete_k(k) - 8.0 * iota4_reduced(k)) / m
}

/// ι₅ = (2 − k²)EK + (1 − k²)K² − 3E².
pub fn iota5(k: Modulus) -> f64 {
    let m = k.m();
    if k.k <= SERIES_SWITCH {
        return m.powi(4) * series::iota_series().i5.eval(m);
    }
    let (kk, e) = complete_pair(k);
    (2.0 - m) * e * kk + k.m1() * kk * kk - 3.0 * e * e
}

/// ι₆ = E + (k² − 1)K.
pub fn iota6(k: Modulus) -> f64 {
    let m = k.m();
    if k.k <= SERIES_SWITCH {
        return m * series::iota_series().i6.eval(m);
    }
    let (kk, e) = complete_pair(k);
    e - k.m1() * kk
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(k: f64) -> Modulus {
        Modulus::new(k).unwrap()
    }

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!(
            (a - b).abs() <= tol * (1.0 + b.abs()),
            "{a} vs {b} (tol {tol})"
        );
    }

    /// Gauss–Legendre quadrature of the defining integrals, independent of AGM.
    fn quad(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        // composite 5-point Gauss–Legendre on 400 panels
        let nodes = [
            (0.0, 0.568_888_888_888_888_9),
            (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
            (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
            (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
            (0.906_179_845_938_664, 0.236_926_885_056_189_1),
        ];
        let n = 400;
        let h = (b - a) / n as f64;
        let mut acc = 0.0;
        for i in 0..n {
            let mid = a + (i as f64 + 0.5) * h;
            for (x, w) in nodes {
                acc += w * f(mid + 0.5 * h * x);
            }
        }
        0.5 * h * acc
    }

    #[test]
    fn complete_values() {
        assert_eq!(complete_k(md(0.0)), FRAC_PI_2);
        assert_eq!(complete_e(md(0.0)), FRAC_PI_2);
        assert_eq!(complete_e_closed(1.0).unwrap(), 1.0);
        // K(1/√2) = Γ(1/4)² / (4√π)
        let gamma_quarter = 3.625_609_908_221_908;
        let k_ref = gamma_quarter * gamma_quarter / (4.0 * PI.sqrt());
        assert_close(
            complete_k(md(std::f64::consts::FRAC_1_SQRT_2)),
            k_ref,
            1e-15,
        );
        assert!(complete_k(md(MODULUS_CAP)).is_finite());
    }

    #[test]
    fn complete_against_quadrature() {
        for k in [0.1, 0.5, 0.9, 0.99] {
            let kk = quad(
                |t| 1.0 / (1.0 - k * k * t.sin().powi(2)).sqrt(),
                0.0,
                FRAC_PI_2,
            );
            let ee = quad(|t| (1.0 - k * k * t.sin().powi(2)).sqrt(), 0.0, FRAC_PI_2);
            assert_close(complete_k(md(k)), kk, 1e-13);
            assert_close(complete_e(md(k)), ee, 1e-13);
        }
    }

    #[test]
    fn legendre_relation() {
        // E K' + E' K − K K' = π/2
        for k in [0.2, 0.6, 0.95] {
            let (kk, e) = complete_pair(md(k));
            let kc = (1.0 - k * k).sqrt();
            let (kp, ep) = complete_pair(md(kc));
            assert_close(e * kp + ep * kk - kk * kp, FRAC_PI_2, 1e-14);
        }
    }

    #[test]
    fn domain() {
        assert!(Modulus::new(1.0).is_err());
        assert!(Modulus::new(-0.1).is_err());
        assert!(complete_e_closed(1.1).is_err());
    }

    #[test]
    fn incomplete_against_quadrature() {
        for k in [0.3, 0.8, 0.999] {
            for phi in [0.3, 1.2, 2.5, -4.0, 7.0] {
                let f = quad(|t| 1.0 / (1.0 - k * k * t.sin().powi(2)).sqrt(), 0.0, phi);
                let e = quad(|t| (1.0 - k * k * t.sin().powi(2)).sqrt(), 0.0, phi);
                assert_close(incomplete_f(phi, md(k)), f, 1e-12);
                assert_close(incomplete_e(phi, md(k)), e, 1e-12);
            }
        }
    }

    #[test]
    fn amplitude_inverts_f() {
        for k in [0.0, 0.4, 0.9, 0.999_999] {
            for p in [-7.3, -0.2, 0.0, 1.1, 3.0, 20.0] {
                let phi = am(p, md(k));
                assert_close(incomplete_f(phi, md(k)), p, 1e-13);
            }
        }
    }

    #[test]
    fn jacobi_special_points() {
        let k = md(0.95);
        let kk = complete_k(k);
        let (s, c, d) = jacobi(kk, k);
        assert_close(s, 1.0, 1e-14);
        assert!(c.abs() < 1e-12);
        assert_close(d, (1.0 - 0.95f64 * 0.95).sqrt(), 1e-12);
        let (s0, c0, d0) = jacobi(0.0, k);
        assert_eq!((s0, c0, d0), (0.0, 1.0, 1.0));
        assert_close(jacobi_eps(kk, k), complete_e(k), 1e-14);
        assert_close(jacobi_eps(4.0 * kk, k), 4.0 * complete_e(k), 1e-13);
    }

    #[test]
    fn jacobi_identities_and_derivative() {
        for k in [0.2, 0.7, 0.99] {
            let k = md(k);
            for p in [0.1, 0.9, 2.7, 5.0] {
                let (s, c, d) = jacobi(p, k);
                assert_close(s * s + c * c, 1.0, 1e-15);
                assert_close(d * d + k.m() * s * s, 1.0, 1e-15);
                // d/dp sn = cn dn
                let h = 1e-6;
                let ds = (jacobi(p + h, k).0 - jacobi(p - h, k).0) / (2.0 * h);
                assert_close(ds, c * d, 1e-8);
            }
        }
    }

    #[test]
    fn iota_small_k_matches_direct() {
        // at the switch both branches are well conditioned
        let k = SERIES_SWITCH;
        let (kk, e) = complete_pair(md(k));
        let m = k * k;
        assert_close(iota2(md(k)), kk - e, 1e-13);
        assert_close(iota4(md(k)), (2.0 - m) * kk - 2.0 * e, 1e-12);
        assert_close(iota6(md(k)), e + (m - 1.0) * kk, 1e-13);
        assert_close(
            iota5(md(k)),
            (2.0 - m) * e * kk + (1.0 - m) * kk * kk - 3.0 * e * e,
            1e-10,
        );
        assert_close(
            iota3(md(k)),
            (3.0 * e * e - (5.0 - 4.0 * m) * e * kk + 2.0 * (1.0 - m) * kk * kk) / (1.0 - m),
            1e-11,
        );
    }

    #[test]
    fn iota4_defect_branches_agree() {
        let k = SERIES_SWITCH;
        let direct = (complete_k(md(k)) - 8.0 * iota4(md(k)) / k.powi(4)) / (k * k);
        assert_close(iota4_defect(md(k)), direct, 1e-11);
        // continuity across the switch
        let below = iota4_defect(md(k - 1e-9));
        let above = iota4_defect(md(k + 1e-9));
        assert_close(below, above, 1e-8);
    }

    #[test]
    fn iota4_small_k_asymptotics() {
        let k = 1e-3;
        assert_close(iota4(md(k)) / k.powi(4), PI / 16.0, 1e-6);
        assert!(iota5(md(1e-2)) > 0.0);
    }
}
