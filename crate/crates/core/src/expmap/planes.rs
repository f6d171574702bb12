//! Closed forms on the symmetric planes.
//!
//! On {z = 0} the dilation-invariant pair is (Y¹, W¹) = (y/x, w/x³), on
//! {x = 0} it is (Y², W²) = (y/√z, w/√z³). Each function below is the pair
//! evaluated along one family of cut-time endpoints, written with
//! s_i = sin u_i, c_i = cos u_i, d_i = √(1 − k² s_i²) and E₁ = E(u₁, k).

use std::f64::consts::PI;

use crate::elliptic::{self, Modulus};
use crate::error::{Error, Result};
use crate::group::Point;

/// Guard against division by a vanishing trigonometric factor.
const TINY: f64 = 1e-14;

fn nonvanishing(what: &'static str, v: f64) -> Result<()> {
    if v.abs() > TINY && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { what, value: v })
    }
}

fn open_modulus(k: f64) -> Result<Modulus> {
    if k > 0.0 {
        Modulus::new(k)
    } else {
        Err(Error::Domain {
            what: "modulus",
            value: k,
        })
    }
}

/// (Y₁¹, W₁¹) at the N₁ endpoint (k, u₁, u₂) with u₁ = u₁z(k), where z = 0.
pub fn yw1(k: f64, u1: f64, u2: f64) -> Result<(f64, f64)> {
    let km = open_modulus(k)?;
    let e1 = elliptic::incomplete_e(u1, km);
    yw1_sc(km, u1.sin_cos(), e1, u2.sin())
}

/// [`yw1`] with u₁ given by (sin u₁, cos u₁) and E₁, so that u₁ close to π
/// keeps sin u₁ to full relative accuracy. Only sin u₂ enters.
pub fn yw1_sc(km: Modulus, (s1, c1): (f64, f64), e1: f64, s2: f64) -> Result<(f64, f64)> {
    let (k, m) = (km.k(), km.m());
    nonvanishing("cos u1", c1)?;
    nonvanishing("sin u1", s1)?;
    nonvanishing("sin u2", s2)?;
    let (s1q, s2q) = (s1 * s1, s2 * s2);
    let d1 = (c1 * c1 + km.m1() * s1q).sqrt();
    let d2 = (1.0 - m * s2q).sqrt();
    let big_d = 1.0 - m * s1q * s2q;
    let y = -(1.0 + m * (s1q - 2.0) * s2q) / (2.0 * k * c1 * s2 * d2);
    let inner = 6.0 - 3.0 * m * (4.0 - s1q) * s2q + 4.0 * m * m * (2.0 - s1q) * s2q * s2q;
    let num = -e1 * c1 * big_d.powi(3) + d1.powi(3) * s1 * (1.0 - m * s1q * s2q * inner);
    let den = 48.0 * k.powi(3) * s1.powi(3) * c1 * d1.powi(3) * s2.powi(3) * d2.powi(3);
    Ok((y, num / den))
}

/// (Y₁¹, W₁¹) at u₂ = π/2, rearranged so that 1 − k² enters only as the
/// factor k′² = (1 − k)(1 + k); this is the conjugate-curve parametrization.
pub fn yw1_half_pi(k: f64, u1: f64) -> Result<(f64, f64)> {
    let km = open_modulus(k)?;
    let (m, m1) = (km.m(), km.m1());
    let (s1, c1) = u1.sin_cos();
    nonvanishing("cos u1", c1)?;
    nonvanishing("sin u1", s1)?;
    let kp = m1.sqrt();
    let d1 = (1.0 - m * s1 * s1).sqrt();
    let e1 = elliptic::incomplete_e(u1, km);
    let y = (m * c1 * c1 - m1) / (2.0 * k * kp * c1);
    let k3 = 48.0 * k.powi(3);
    let w = -d1.powi(3) * e1 / (k3 * m1 * kp * s1.powi(3)) - kp * (4.0 * m - 1.0) / (k3 * c1)
        + c1 * (c1 * c1 + m1 * (1.0 + m + 4.0 * m * m) * s1 * s1) / (k3 * m1 * kp * s1 * s1);
    Ok((y, w))
}

/// (Y₁², W₁²) at the N₁ endpoint (k, π, u₂): requires k < k₀ (ι₁ > 0) and
/// cos u₂ > 0.
pub fn yw2_1(k: f64, u2: f64) -> Result<(f64, f64)> {
    let km = open_modulus(k)?;
    let c2 = u2.cos();
    if c2 <= TINY {
        return Err(Error::Domain {
            what: "cos u2 (must be positive)",
            value: c2,
        });
    }
    let i1 = elliptic::iota1(km);
    if i1 <= 0.0 {
        return Err(Error::Domain {
            what: "iota1 (modulus must be below k0)",
            value: k,
        });
    }
    let i2 = elliptic::iota2(km);
    let y = (2.0 * i1 / (k * c2)).sqrt();
    let w = (i2 + km.m() * i1 * (1.0 + 3.0 * c2 * c2)) / (3.0 * (2.0 * k * i1 * c2).powf(1.5));
    Ok((y, w))
}

/// (Y₂², W₂²) at the N₂ endpoint (k, π/2, u₂). Expressed through ι₄/k⁴ and
/// (K − 8ι₄/k⁴)/k², so the k → 0 end keeps full relative accuracy.
pub fn yw2_2(k: f64, u2: f64) -> Result<(f64, f64)> {
    yw2_2_mod(open_modulus(k)?, u2)
}

/// [`yw2_2`] for a modulus given with its complement, so that the k → 1 end
/// can be followed past the cap on k.
pub fn yw2_2_mod(km: Modulus, u2: f64) -> Result<(f64, f64)> {
    let (s2, c2) = u2.sin_cos();
    yw2_2_sc(km, s2, c2)
}

/// [`yw2_2_mod`] with u₂ given by (sin u₂, cos u₂), so that u₂ = π/2 can be
/// passed exactly. Every factor 1 − k² enters through k', which keeps the
/// k → 1 end free of cancellation and underflow.
pub fn yw2_2_sc(km: Modulus, s2: f64, c2: f64) -> Result<(f64, f64)> {
    if km.k() == 0.0 {
        return Err(Error::Domain {
            what: "modulus",
            value: 0.0,
        });
    }
    let (m, kc) = (km.m(), km.kc());
    let (s2q, c2q) = (s2 * s2, c2 * c2);
    let d2 = (c2q + km.m1() * s2q).sqrt();
    let i4r = elliptic::iota4_reduced(km);
    // numerator of W divided by k⁶
    let nr = elliptic::iota4_defect(km) * d2 * d2 + (7.0 * c2q + km.m1() * s2q) * i4r;
    let y = -m * (i4r * d2 / kc).sqrt();
    let w = nr / (12.0 * i4r.powf(1.5) * kc.powf(1.5) * d2.sqrt());
    Ok((y, w))
}

/// (Y₆², W₆²) at the N₆ endpoint after one full turn, t = 2π/|c|.
pub fn yw2_6(theta: f64) -> (f64, f64) {
    (0.0, -theta.cos() / PI.sqrt())
}

/// p cosh p − sinh p and 9 sinh p − 12 p cosh p + sinh 3p by their Taylor
/// series, which start at p³ and p⁵ respectively.
fn fix3_series(p: f64) -> (f64, f64) {
    let p2 = p * p;
    let (mut d, mut n) = (0.0, 0.0);
    // term = p^{2j+1}/(2j+1)!, pow3 = 3^{2j+1}
    let mut term = p;
    let mut pow3 = 3.0;
    for j in 0..60 {
        let jf = j as f64;
        d += term * 2.0 * jf;
        n += term * (9.0 + pow3 - 12.0 * (2.0 * jf + 1.0));
        term *= p2 / ((2.0 * jf + 2.0) * (2.0 * jf + 3.0));
        pow3 *= 9.0;
    }
    (d, n)
}

/// (Y₃², W₃²)(p) on the N₃ endpoints fixed by ε² (the curve Fix³⁺).
pub fn yw2_3(p: f64) -> Result<(f64, f64)> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::Domain {
            what: "p",
            value: p,
        });
    }
    let (sh, ch) = (p.sinh(), p.cosh());
    let (d, n) = if p < 1.0 {
        fix3_series(p)
    } else {
        (p * ch - sh, 9.0 * sh - 12.0 * p * ch + (3.0 * p).sinh())
    };
    Ok(((2.0 * sh - p * ch) / d.sqrt(), n / (24.0 * d.powf(1.5))))
}

/// Endpoint of the N₁ geodesic (k, π, π/2, σ), which lies on the y-axis
/// plane x = z = 0.
pub fn max20_endpoint(k: f64, sigma: f64) -> Result<Point> {
    let km = open_modulus(k)?;
    nonvanishing("sigma", sigma)?;
    let (i1, i2) = (elliptic::iota1(km), elliptic::iota2(km));
    Ok(Point::new(
        0.0,
        4.0 * i1 / sigma,
        0.0,
        8.0 * (km.m() * i1 + i2) / (3.0 * sigma.powi(3)),
    ))
}

/// Endpoint of the N₁ geodesic (k, u₁, 0, σ) with u₁ = u₁z(k).
pub fn max10_endpoint(k: f64, u1: f64, sigma: f64) -> Result<Point> {
    let km = open_modulus(k)?;
    nonvanishing("sigma", sigma)?;
    let (s1, c1) = u1.sin_cos();
    nonvanishing("cos u1", c1)?;
    let d1 = (1.0 - km.m() * s1 * s1).sqrt();
    let e1 = elliptic::incomplete_e(u1, km);
    let f1 = elliptic::incomplete_f(u1, km);
    Ok(Point::new(
        0.0,
        2.0 * (2.0 * e1 - f1) / sigma,
        0.0,
        4.0 * (e1 * c1 - d1.powi(3) * s1) / (3.0 * sigma.powi(3) * c1),
    ))
}
