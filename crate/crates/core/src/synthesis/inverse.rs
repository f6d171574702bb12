//! Closed-form inversion on the cut-locus strata.
//!
//! Each solver takes a point of unit homogeneous norm lying exactly on its
//! plane and in canonical position: x > 0 on the z-plane; z > 0 and Y > 0
//! for I_x; z > 0 and Y < 0 in the lens. The outer unknown is always a
//! modulus, found by a bracketed scan; the remaining chart parameters follow
//! from the invariant coordinates, and σ from one forward evaluation.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::cutlocus::{conj_z_modulus, k0, modulus_at, tau_of_k, z_root};
use crate::elliptic::{self, Modulus, MODULUS_CAP};
use crate::error::{Error, Result};
use crate::expmap::planes::yw1_sc;
use crate::expmap::{exp, from_chart, ChartPoint};
use crate::group::Point;
use crate::roots::brent;

/// Distance kept from k₀, where ι₁ vanishes.
const K0_GAP: f64 = 1e-12;
/// Smallest modulus tried by the x-plane solvers.
const K_FLOOR: f64 = 1e-150;
/// Smallest u₂ tried on the z-plane.
const U2_FLOOR: f64 = 1e-12;
/// Grid size of the sign-change scans.
const SCAN: usize = 64;

fn endpoint(nu: &ChartPoint) -> Result<Point> {
    let (l, t) = from_chart(nu)?;
    exp(&l, t)
}

/// First root of `f` met when walking from `a` to `b` on a uniform grid,
/// refined by Brent. NaN samples (outside the domain of `f`) are skipped.
fn scan_root(what: &'static str, f: impl Fn(f64) -> f64, a: f64, b: f64) -> Result<f64> {
    let (mut xa, mut fa) = (a, f(a));
    if fa == 0.0 {
        return Ok(a);
    }
    for i in 1..=SCAN {
        let xb = a + (b - a) * i as f64 / SCAN as f64;
        let fb = f(xb);
        if fa.is_finite() && fb.is_finite() && (fb == 0.0 || fa.signum() != fb.signum()) {
            return brent(what, &f, xa, xb, 0.0);
        }
        xa = xb;
        fa = fb;
    }
    Err(Error::NotBracketed { what })
}

/// I⁰_x: N₁ points (k, π, π/2, σ) and (k, π, 3π/2, σ) with
/// (k²ι₁ + ι₂)/(24ι₁³) = w/y³ and σ = 4ι₁/y.
pub(super) fn i0x(y: f64, w: f64) -> Result<Vec<ChartPoint>> {
    let ln_r = (w / (y * y * y)).ln();
    let f = |x: f64| {
        let km = Modulus::saturating(x.exp());
        let i1 = elliptic::iota1(km);
        ((km.m() * i1 + elliptic::iota2(km)) / (24.0 * i1.powi(3))).ln() - ln_r
    };
    let k = brent("I0x modulus", f, K_FLOOR.ln(), (k0() - K0_GAP).ln(), 0.0)?.exp();
    let sigma = 4.0 * elliptic::iota1(Modulus::new(k)?) / y;
    Ok([FRAC_PI_2, 3.0 * FRAC_PI_2]
        .into_iter()
        .map(|u2| ChartPoint::N1 {
            k,
            u1: PI,
            u2,
            sigma,
        })
        .collect())
}

/// u₁ = u₁z(k) with (sin u₁, cos u₁), E₁ and F₁, all from the z-root.
struct ZEnd {
    u1: f64,
    s1: f64,
    c1: f64,
    e1: f64,
    f1: f64,
}

fn z_end(km: Modulus) -> Result<ZEnd> {
    let r = z_root(km)?;
    let (kk, e) = elliptic::complete_pair(km);
    let (fv, ev) = elliptic::incomplete_fe_sc(r.sv, r.cv, km);
    // u₁ = π + v
    Ok(ZEnd {
        u1: PI + r.v,
        s1: -r.sv,
        c1: -r.cv,
        e1: 2.0 * e + ev,
        f1: 2.0 * kk + fv,
    })
}

/// I⁰_z: N₁ points (k, u₁z, 0, σ) and (k, u₁z, π, σ) with k ∈ (k₀, 1),
/// (E₁c₁ − d₁³s₁)/(6c₁(2E₁ − F₁)³) = w/y³ and σ = 2(2E₁ − F₁)/y.
pub(super) fn i0z(y: f64, w: f64) -> Result<Vec<ChartPoint>> {
    let ln_r = (-w / (y * y * y)).ln();
    let ratio = |km: Modulus| -> Result<(f64, ZEnd)> {
        let z = z_end(km)?;
        let d1 = (z.c1 * z.c1 + km.m1() * z.s1 * z.s1).sqrt();
        let g = 2.0 * z.e1 - z.f1;
        Ok((
            (z.e1 * z.c1 - d1.powi(3) * z.s1) / (6.0 * z.c1 * g.powi(3)),
            z,
        ))
    };
    // the ratio rises from −∞ at k₀ to about −10⁻⁴ at the cap
    let f = |tau: f64| {
        modulus_at(tau)
            .and_then(ratio)
            .map(|(r, _)| (-r).ln() - ln_r)
            .unwrap_or(f64::NAN)
    };
    let tau = brent(
        "I0z modulus",
        f,
        tau_of_k(k0() + K0_GAP),
        tau_of_k(MODULUS_CAP),
        0.0,
    )?;
    let km = modulus_at(tau)?;
    let (_, z) = ratio(km)?;
    let sigma = 2.0 * (2.0 * z.e1 - z.f1) / y;
    Ok([0.0, PI]
        .into_iter()
        .map(|u2| ChartPoint::N1 {
            k: km.k(),
            u1: z.u1,
            u2,
            sigma,
        })
        .collect())
}

/// σ̂ of the E-family: the w-component 8(k²ι₁ + ι₂)/(3σ³) at ι₁(k₀) = 0.
pub(super) fn e_sigma(w: f64) -> f64 {
    let i2 = elliptic::iota2(Modulus::saturating(k0()));
    w.signum() * (8.0 * i2 / (3.0 * w.abs())).cbrt()
}

/// The A-ray: a straight line along ±y.
pub(super) fn a_ray(y: f64) -> ChartPoint {
    ChartPoint::N7 {
        theta: if y > 0.0 { 0.0 } else { PI },
        t: y.abs(),
    }
}

/// σ of magnitude |ref_x|/|x| whose sign makes the endpoint x positive; the
/// reference endpoint is computed at σ = −1.
fn z_plane_sigma(reference: ChartPoint, x: f64) -> Result<f64> {
    let q1 = endpoint(&reference)?;
    Ok(-q1.x.signum() * q1.x.abs() / x)
}

/// u₂ ∈ (0, π/2] with Y¹(k, u₂) = y; Y¹ decreases in u₂ from +∞ there.
fn iz_u2(km: Modulus, z: &ZEnd, y: f64) -> Result<f64> {
    let g = |x: f64| {
        yw1_sc(km, (z.s1, z.c1), z.e1, x.exp().sin())
            .map(|p| p.0 - y)
            .unwrap_or(f64::NAN)
    };
    // sin u₂ must stay above the closed form's guard; Y is ~10¹¹ there already
    Ok(brent("Iz u2", g, U2_FLOOR.ln(), FRAC_PI_2.ln(), 0.0)?
        .exp()
        .min(FRAC_PI_2))
}

/// I_z⁺⁺ (x > 0, below W¹_conj): the N₁ pair (k, u₁z, u₂) and (k, u₁z, π − u₂).
pub(super) fn iz(q: Point) -> Result<Vec<ChartPoint>> {
    let (y, w) = (q.y / q.x, q.w / q.x.powi(3));
    let k_start = k0() + K0_GAP;
    // k ranges up to the conjugate-curve modulus with this Y
    let k_hi = conj_z_modulus(y)
        .map(|m| m.k())
        .unwrap_or(MODULUS_CAP)
        .min(MODULUS_CAP);
    let solve_at = |k: f64| -> Result<(f64, f64, ZEnd)> {
        let km = Modulus::new(k)?;
        let z = z_end(km)?;
        let u2 = iz_u2(km, &z, y)?;
        let (_, ww) = yw1_sc(km, (z.s1, z.c1), z.e1, u2.sin())?;
        Ok((u2, ww, z))
    };
    // W¹ falls to −∞ towards k₀; k − k₀ grows like the square of the scan variable
    let k_of = |s: f64| k_start + (k_hi - k_start) * s * s;
    let f = |s: f64| solve_at(k_of(s)).map(|r| r.1 - w).unwrap_or(f64::NAN);
    // walk up from k₀: near k_hi the z-root loses accuracy and spurious crossings appear
    let s = scan_root("Iz modulus", f, 1e-6, 1.0)?;
    let k = k_of(s);
    let (u2, _, z) = solve_at(k)?;
    let sigma = z_plane_sigma(
        ChartPoint::N1 {
            k,
            u1: z.u1,
            u2,
            sigma: -1.0,
        },
        q.x,
    )?;
    Ok(vec![
        ChartPoint::N1 {
            k,
            u1: z.u1,
            u2,
            sigma,
        },
        ChartPoint::N1 {
            k,
            u1: z.u1,
            u2: PI - u2,
            sigma,
        },
    ])
}

/// CI_z⁺⁺: the single N₁ point (k, u₁z, π/2) on the conjugate curve.
pub(super) fn ciz(q: Point) -> Result<Vec<ChartPoint>> {
    let km = conj_z_modulus(q.y / q.x)?;
    let k = Modulus::new(km.k())?.k();
    let z = z_end(km)?;
    let sigma = z_plane_sigma(
        ChartPoint::N1 {
            k,
            u1: z.u1,
            u2: FRAC_PI_2,
            sigma: -1.0,
        },
        q.x,
    )?;
    Ok(vec![ChartPoint::N1 {
        k,
        u1: z.u1,
        u2: FRAC_PI_2,
        sigma,
    }])
}

/// σ > 0 placing the endpoint of `reference` (taken at σ = 1) at height z.
fn x_plane_sigma(reference: ChartPoint, z: f64) -> Result<f64> {
    let q1 = endpoint(&reference)?;
    Ok((q1.z / z).sqrt())
}

/// Least k with cos u₂ = 2ι₁/(kY²) ≤ 1, which is the conjugate curve CI.
fn ix_k_min(y: f64) -> Result<f64> {
    let g = |x: f64| {
        let k = x.exp();
        (2.0 * elliptic::iota1(Modulus::saturating(k)) / k).ln() - 2.0 * y.ln()
    };
    Ok(brent("CIx modulus", g, K_FLOOR.ln(), (k0() - K0_GAP).ln(), 0.0)?.exp())
}

fn ix_pair(k: f64, c2: f64, z: f64) -> Result<Vec<ChartPoint>> {
    let u2 = c2.clamp(-1.0, 1.0).acos();
    let sigma = x_plane_sigma(
        ChartPoint::N1 {
            k,
            u1: PI,
            u2,
            sigma: 1.0,
        },
        z,
    )?;
    let mut out = vec![ChartPoint::N1 {
        k,
        u1: PI,
        u2,
        sigma,
    }];
    if u2 > 0.0 {
        out.push(ChartPoint::N1 {
            k,
            u1: PI,
            u2: 2.0 * PI - u2,
            sigma,
        });
    }
    Ok(out)
}

/// I_x⁺⁺ (z > 0, Y > 0, above W²₁): N₁ points (k, π, ±u₂) with
/// cos u₂ = 2ι₁/(kY²) and W = Y³(ι₂ + k²ι₁(1 + 3cos²u₂))/(24ι₁³).
pub(super) fn ix(q: Point) -> Result<Vec<ChartPoint>> {
    let (y, w) = (q.y / q.z.sqrt(), q.w / q.z.powf(1.5));
    let k_lo = ix_k_min(y)?;
    let k_hi = k0() - K0_GAP;
    let parts = |k: f64| {
        let km = Modulus::saturating(k);
        let i1 = elliptic::iota1(km);
        let c2 = (2.0 * i1 / (k * y * y)).min(1.0);
        let ww = y.powi(3) * (elliptic::iota2(km) + km.m() * i1 * (1.0 + 3.0 * c2 * c2))
            / (24.0 * i1.powi(3));
        (c2, ww)
    };
    // W rises from W²₁(Y) at k_lo to +∞ at k₀
    let f = |s: f64| parts(k_lo + (k_hi - k_lo) * s).1.ln() - w.ln();
    let s = scan_root("Ix modulus", f, 0.0, 1.0)?;
    let k = k_lo + (k_hi - k_lo) * s;
    ix_pair(k, parts(k).0, q.z)
}

/// CI_x⁺⁺: the single N₁ point (k, π, 0) on the conjugate curve.
pub(super) fn cix(q: Point) -> Result<Vec<ChartPoint>> {
    let k = ix_k_min(q.y / q.z.sqrt())?;
    ix_pair(k, 1.0, q.z)
}

/// Lens data at modulus `km` for a given Y < 0: cos²u₂ and W²₂.
/// Y² = k⁴(ι₄/k⁴)d₂/k' fixes d₂, and d₂² = k'² + k²cos²u₂ fixes u₂.
fn lens_at(km: Modulus, y: f64) -> (f64, f64) {
    let (m, kc) = (km.m(), km.kc());
    let i4r = elliptic::iota4_reduced(km);
    let d2 = y * y * kc / (m * m * i4r);
    let c2q = ((d2 - kc) * (d2 + kc) / m).clamp(0.0, 1.0);
    let num = elliptic::iota4_defect(km) * d2 * d2 + i4r * (7.0 * c2q + km.m1() * (1.0 - c2q));
    (c2q, num / (12.0 * i4r.powf(1.5) * kc.powf(1.5) * d2.sqrt()))
}

fn lens_tau_range() -> (f64, f64) {
    (tau_of_k(1e-60), tau_of_k(MODULUS_CAP))
}

/// Modulus parameter τ where d₂ = 1 (upper boundary, u₂ = 0) or d₂ = k'
/// (lower boundary, u₂ = π/2).
fn lens_edge(y: f64, upper: bool) -> Result<f64> {
    let (a, b) = lens_tau_range();
    let g = |tau: f64| {
        modulus_at(tau)
            .map(|km| {
                let i4 = km.m() * km.m() * elliptic::iota4_reduced(km);
                let lhs = if upper { i4 / km.kc() } else { i4 };
                lhs.ln() - 2.0 * y.abs().ln()
            })
            .unwrap_or(f64::NAN)
    };
    if !upper && g(b) < 0.0 {
        // the lower edge lies past the cap; the lens is cut off there
        return Ok(b);
    }
    brent("lens edge", g, a, b, 0.0)
}

fn lens_pair(km: Modulus, c2q: f64, z: f64) -> Result<Vec<ChartPoint>> {
    let k = km.k();
    let u2 = c2q.sqrt().min(1.0).acos();
    let n2 = |u2: f64, sigma: f64| ChartPoint::N2 {
        k,
        u1: FRAC_PI_2,
        u2,
        sigma,
        sign_c: 1,
    };
    let sigma = x_plane_sigma(n2(u2, 1.0), z)?;
    let mut out = vec![n2(u2, sigma)];
    if u2 > 0.0 && u2 < FRAC_PI_2 {
        out.push(n2(PI - u2, sigma));
    }
    Ok(out)
}

/// N_x⁺ with Y < 0: the N₂ pair (k, π/2, u₂) and (k, π/2, π − u₂).
pub(super) fn lens(q: Point) -> Result<Vec<ChartPoint>> {
    let (y, w) = (q.y / q.z.sqrt(), q.w / q.z.powf(1.5));
    let (ta, tb) = (lens_edge(y, true)?, lens_edge(y, false)?);
    // W falls from the upper boundary at ta to the lower one at tb
    let f = |tau: f64| {
        modulus_at(tau)
            .map(|km| lens_at(km, y).1 - w)
            .unwrap_or(f64::NAN)
    };
    let tau = scan_root("lens modulus", f, ta, tb)?;
    let km = modulus_at(tau)?;
    lens_pair(km, lens_at(km, y).0, q.z)
}

/// CN_x with Y < 0: u₂ = 0 on the upper boundary, u₂ = π/2 on the lower.
pub(super) fn cnx(q: Point, upper: bool) -> Result<Vec<ChartPoint>> {
    let y = q.y / q.z.sqrt();
    let km = modulus_at(lens_edge(y, upper)?)?;
    lens_pair(km, if upper { 1.0 } else { 0.0 }, q.z)
}

/// The segment C_x (x = y = 0): N₆ circles with z = π/(c|c|) and
/// W = −cos θ/√π. `single` keeps one of the two (the endpoints W = ±1/√π).
pub(super) fn c_segment(q: Point, single: bool) -> Vec<ChartPoint> {
    let c = q.z.signum() * (PI / q.z.abs()).sqrt();
    let t = 2.0 * PI / c.abs();
    let ww = q.w / q.z.abs().powf(1.5);
    let theta = (-PI.sqrt() * ww).clamp(-1.0, 1.0).acos();
    let mut out = vec![ChartPoint::N6 { theta, c, t }];
    if !single && theta > 0.0 && theta < PI {
        out.push(ChartPoint::N6 {
            theta: -theta,
            c,
            t,
        });
    }
    out
}
