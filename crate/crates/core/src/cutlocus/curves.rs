//! Boundary curves of the cut-locus strata in the invariant planes.
//!
//! Each curve is parametrized by the modulus and is a graph over its
//! abscissa because the abscissa is strictly monotone in the modulus. Graph
//! values come from inverting that monotone map with Brent's method in the
//! parameter τ below, which follows k towards 0 and k' towards 0 alike.
//! Past the ends of τ the functions report `OutOfRange`, and the classifier
//! falls back on the monotone bounds of each curve.

use std::f64::consts::PI;
use std::sync::OnceLock;

use super::{k0, z_root};
use crate::elliptic::{self, Modulus};
use crate::error::{Error, Result};
use crate::expmap::planes::{yw2_1, yw2_2_sc, yw2_3};
use crate::roots::brent;

/// Smallest modulus at the k → 0 end of a curve.
const K_TINY: f64 = 1e-100;
/// Smallest complementary modulus at the k → 1 end of a curve.
const KC_TINY: f64 = 1e-140;
/// Offset from k₀ where a curve leaves through k₀.
const K0_GAP: f64 = 1e-13;
/// The two halves of τ meet at this modulus.
const K_SPLIT: f64 = 0.5;

fn kc_split() -> f64 {
    ((1.0 - K_SPLIT) * (1.0 + K_SPLIT)).sqrt()
}

/// Monotone parameter: k = K_SPLIT·e^τ for τ ≤ 0, k' = k'_split·e^{−τ} for τ > 0.
pub(crate) fn modulus_at(tau: f64) -> Result<Modulus> {
    if tau <= 0.0 {
        Modulus::new(K_SPLIT * tau.exp())
    } else {
        Modulus::from_complement(kc_split() * (-tau).exp())
    }
}

pub(crate) fn tau_of_k(k: f64) -> f64 {
    if k <= K_SPLIT {
        (k / K_SPLIT).ln()
    } else {
        (kc_split() / ((1.0 - k) * (1.0 + k)).sqrt()).ln()
    }
}

fn tau_of_kc(kc: f64) -> f64 {
    (kc_split() / kc).ln()
}

/// Y₀¹ = (1 − 2k₀²)/(2k₀√(1 − k₀²)), the left end of the z-plane conjugate curve.
pub fn y0_conj() -> f64 {
    let k = k0();
    (1.0 - 2.0 * k * k) / (2.0 * k * (1.0 - k * k).sqrt())
}

/// (Y₁¹, W₁¹) on the z-plane conjugate curve, u₁ = u₁z(k), u₂ = π/2.
///
/// With ρ = cos u₁/k', Y = (k²ρ² − 1)/(2kρ), and W follows from the identity
/// Y − 6W = r^{3/2}(ρE₁ − √r s₁)/(8k³s₁³ρ), r = ρ² + s₁². Neither needs 1 − k²
/// beyond k', and neither cancels as k → 1.
pub(crate) fn conj_z_mod(km: Modulus) -> Result<(f64, f64)> {
    if !(km.k() > k0()) {
        return Err(Error::Domain {
            what: "conjugate curve modulus (k0, 1)",
            value: km.k(),
        });
    }
    let root = z_root(km)?;
    // u₁ = π + v
    let (s1, c1) = (-root.sv, -root.cv);
    let e1 = 2.0 * elliptic::complete_e(km) + elliptic::incomplete_fe_sc(root.sv, root.cv, km).1;
    let k = km.k();
    let rho = c1 / km.kc();
    let y = (k * k * rho * rho - 1.0) / (2.0 * k * rho);
    let r = rho * rho + s1 * s1;
    let diff = r.powf(1.5) * (rho * e1 - r.sqrt() * s1) / (8.0 * k.powi(3) * s1.powi(3) * rho);
    Ok((y, (y - diff) / 6.0))
}

/// Point (Y₁¹, W₁¹) of the z-plane conjugate curve at modulus k ∈ (k₀, 1).
pub fn conj_z(k: f64) -> Result<(f64, f64)> {
    conj_z_mod(Modulus::new(k)?)
}

/// The same curve at complementary modulus k' ∈ (0, √(1 − k₀²)), which
/// follows the k → 1 end past the cap on k.
pub fn conj_z_complement(kc: f64) -> Result<(f64, f64)> {
    conj_z_mod(Modulus::from_complement(kc)?)
}

/// Point (Y₁², W₁²) of the x-plane conjugate curve CI at modulus k ∈ (0, k₀).
pub fn conj_x1(k: f64) -> Result<(f64, f64)> {
    yw2_1(k, 0.0)
}

fn conj_x2_mod(km: Modulus, upper_branch: bool) -> Result<(f64, f64)> {
    if upper_branch {
        yw2_2_sc(km, 0.0, 1.0)
    } else {
        let (y, w) = yw2_2_sc(km, 1.0, 0.0)?;
        Ok((-y, -w))
    }
}

/// The two branches of the lens boundary: u₂ = 0 for Y < 0, and the ε⁴
/// image of u₂ = π/2 for Y > 0.
pub fn conj_x2(k: f64, upper_branch: bool) -> Result<(f64, f64)> {
    conj_x2_mod(Modulus::new(k)?, upper_branch)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Curve {
    Z,
    X1,
    X2Upper,
    X2Lower,
}

impl Curve {
    fn eval(self, km: Modulus) -> Result<(f64, f64)> {
        match self {
            Curve::Z => conj_z_mod(km),
            Curve::X1 => yw2_1(km.k(), 0.0),
            Curve::X2Upper => conj_x2_mod(km, true),
            Curve::X2Lower => conj_x2_mod(km, false),
        }
    }

    fn tau_range(self) -> (f64, f64) {
        match self {
            Curve::Z => (tau_of_k(k0() + K0_GAP), tau_of_kc(KC_TINY)),
            Curve::X1 => (tau_of_k(K_TINY), tau_of_k(k0() - K0_GAP)),
            Curve::X2Upper | Curve::X2Lower => (tau_of_k(K_TINY), tau_of_kc(KC_TINY)),
        }
    }

    fn at(self, tau: f64) -> Result<(f64, f64)> {
        self.eval(modulus_at(tau)?)
    }

    /// Ordinate over abscissa `y`; the caller has checked the range.
    fn solve(self, what: &'static str, y: f64) -> Result<f64> {
        let (a, b) = self.tau_range();
        let tau = brent(
            what,
            |t| self.at(t).map(|p| p.0 - y).unwrap_or(f64::NAN),
            a,
            b,
            0.0,
        )?;
        Ok(self.at(tau)?.1)
    }
}

/// Curve points at both ends of each τ range.
struct Ranges {
    z: [(f64, f64); 2],
    x1: [(f64, f64); 2],
    x2_up: [(f64, f64); 2],
    x2_low: [(f64, f64); 2],
}

fn ranges() -> &'static Ranges {
    static CELL: OnceLock<Ranges> = OnceLock::new();
    CELL.get_or_init(|| {
        let ends = |c: Curve| {
            let (a, b) = c.tau_range();
            let p = |t| c.at(t).expect("curve endpoint inside its parameter domain");
            [p(a), p(b)]
        };
        Ranges {
            z: ends(Curve::Z),
            x1: ends(Curve::X1),
            x2_up: ends(Curve::X2Upper),
            x2_low: ends(Curve::X2Lower),
        }
    })
}

fn out_of_range(y: f64) -> Error {
    Error::OutOfRange([y, f64::NAN, f64::NAN, f64::NAN])
}

/// W¹_conj(Y): the conjugate curve CI⁺_{z+} as a graph over Y ∈ (Y₀¹, ∞).
pub fn w1_conj(y: f64) -> Result<f64> {
    if !(y > y0_conj()) || !y.is_finite() {
        return Err(Error::Domain {
            what: "Y1 (must exceed Y0)",
            value: y,
        });
    }
    let [lo, hi] = ranges().z;
    if y < lo.0 || y > hi.0 {
        return Err(out_of_range(y));
    }
    Curve::Z.solve("w1_conj", y)
}

/// W²¹_conj(Y): the conjugate curve CI⁺_{x+} as a graph over Y ∈ (0, ∞).
pub fn w21_conj(y: f64) -> Result<f64> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::Domain {
            what: "Y2 (must be positive)",
            value: y,
        });
    }
    // Y decreases along τ
    let [big, small] = ranges().x1;
    if y < small.0 || y > big.0 {
        return Err(out_of_range(y));
    }
    Curve::X1.solve("w21_conj", y)
}

/// W²²_conj(Y): the smooth curve CN⁺_{x+} through (0, 1/√π).
pub fn w22_conj(y: f64) -> Result<f64> {
    if !y.is_finite() {
        return Err(Error::Domain {
            what: "Y2",
            value: y,
        });
    }
    let (curve, [near, far]) = if y < 0.0 {
        (Curve::X2Upper, ranges().x2_up)
    } else {
        (Curve::X2Lower, ranges().x2_low)
    };
    if y.abs() <= near.0.abs() {
        // |Y| ~ k² here, and the curve is 1/√π to far below rounding
        return Ok(1.0 / PI.sqrt());
    }
    if y.abs() > far.0.abs() {
        return Err(out_of_range(y));
    }
    curve.solve("w22_conj", y)
}

/// Value of a monotone curve, or the side of it a point lies on when the
/// abscissa is past the computable range.
pub(crate) enum CurveCmp {
    Value(f64),
    /// The point is strictly below the curve.
    Below,
    /// The point is strictly above the curve.
    Above,
}

/// Compares W with W¹_conj(Y); the curve increases from −∞, and stays
/// below Y/6.
pub(crate) fn cmp_w1(y: f64, w: f64) -> Result<CurveCmp> {
    let [lo, hi] = ranges().z;
    if y < lo.0 {
        return if w >= lo.1 {
            Ok(CurveCmp::Above)
        } else {
            Err(out_of_range(y))
        };
    }
    if y > hi.0 {
        return if w <= hi.1 {
            Ok(CurveCmp::Below)
        } else if w >= y / 6.0 {
            Ok(CurveCmp::Above)
        } else {
            Err(out_of_range(y))
        };
    }
    Ok(CurveCmp::Value(w1_conj(y)?))
}

/// Compares W with W²¹_conj(Y), Y > 0; the curve decreases from ∞ to 0.
pub(crate) fn cmp_w21(y: f64, w: f64) -> Result<CurveCmp> {
    let [big, small] = ranges().x1;
    if y < small.0 {
        return if w <= small.1 {
            Ok(CurveCmp::Below)
        } else {
            Err(out_of_range(y))
        };
    }
    if y > big.0 {
        return if w <= 0.0 {
            Ok(CurveCmp::Below)
        } else if w >= big.1 {
            Ok(CurveCmp::Above)
        } else {
            Err(out_of_range(y))
        };
    }
    Ok(CurveCmp::Value(w21_conj(y)?))
}

/// Compares W with W²²_conj(Y). For Y < 0 the curve decreases from ∞ to
/// 1/√π; for Y > 0 it decreases from 1/√π towards 0.
pub(crate) fn cmp_w22(y: f64, w: f64) -> Result<CurveCmp> {
    let far_up = ranges().x2_up[1];
    let far_low = ranges().x2_low[1];
    if y < far_up.0 {
        return if w <= far_up.1 {
            Ok(CurveCmp::Below)
        } else {
            Err(out_of_range(y))
        };
    }
    if y > far_low.0 {
        return if w <= 0.0 {
            Ok(CurveCmp::Below)
        } else if w >= far_low.1 {
            Ok(CurveCmp::Above)
        } else {
            Err(out_of_range(y))
        };
    }
    Ok(CurveCmp::Value(w22_conj(y)?))
}

/// G₁(x, y) = W¹_conj(y/|x|)|x|³, with G₁(0, y) = 0; defined for y > Y₀¹|x|.
#[allow(non_snake_case)]
pub fn G1(x: f64, y: f64) -> Result<f64> {
    if !(y > y0_conj() * x.abs()) {
        return Err(Error::Domain {
            what: "G1 requires y > Y0|x|",
            value: y,
        });
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(w1_conj(y / x.abs())? * x.abs().powi(3))
}

/// G₂(z, y) = W²¹_conj(y/√|z|)|z|^{3/2}, with G₂(0, y) = 0; defined for y > 0.
#[allow(non_snake_case)]
pub fn G2(z: f64, y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::Domain {
            what: "G2 requires y > 0",
            value: y,
        });
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    Ok(w21_conj(y / z.abs().sqrt())? * z.abs().powf(1.5))
}

/// G₃(z, y) = W²²_conj(y/√|z|)|z|^{3/2}; defined for z ≠ 0.
#[allow(non_snake_case)]
pub fn G3(z: f64, y: f64) -> Result<f64> {
    if z == 0.0 || !z.is_finite() {
        return Err(Error::Domain {
            what: "G3 requires z != 0",
            value: z,
        });
    }
    Ok(w22_conj(y / z.abs().sqrt())? * z.abs().powf(1.5))
}

/// Positive root of p = 2 tanh p.
pub fn p3() -> f64 {
    static CELL: OnceLock<f64> = OnceLock::new();
    *CELL.get_or_init(|| {
        brent("p3", |p| p - 2.0 * p.tanh(), 1.0, 3.0, 0.0)
            .expect("p - 2 tanh p changes sign on [1, 3]")
    })
}

/// p₀ = ln(3 + √10), where W₃² crosses 1/√3 from below.
pub fn p0() -> f64 {
    (3.0 + 10f64.sqrt()).ln()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveKind {
    /// CI⁺_{z+}, parameter k ∈ (k₀, 1)
    W1,
    /// CI⁺_{x+}, parameter k ∈ (0, k₀)
    W21,
    /// CN⁺_{x+}: branch u₂ = 0 for decreasing k, then the reflected branch
    /// u₂ = π/2 for increasing k
    W22,
    /// Fix³⁺, parameter p > 0
    Fix3,
}

/// Row of a sampled curve: parameter, abscissa, ordinate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveSample {
    pub param: f64,
    pub y: f64,
    pub w: f64,
}

/// `n` samples of a curve on a uniform interior grid of its parameter.
pub fn sample_curve(which: CurveKind, n: usize) -> Result<Vec<CurveSample>> {
    if n < 2 {
        return Err(Error::Domain {
            what: "sample count (at least 2)",
            value: n as f64,
        });
    }
    let grid = |a: f64, b: f64, n: usize| -> Vec<f64> {
        (1..=n)
            .map(|i| a + (b - a) * i as f64 / (n + 1) as f64)
            .collect()
    };
    let mut out = Vec::with_capacity(n);
    let mut push = |param: f64, (y, w): (f64, f64)| out.push(CurveSample { param, y, w });
    match which {
        CurveKind::W1 => {
            for k in grid(k0(), 1.0, n) {
                push(k, conj_z(k)?);
            }
        }
        CurveKind::W21 => {
            for k in grid(0.0, k0(), n) {
                push(k, conj_x1(k)?);
            }
        }
        CurveKind::W22 => {
            let half = n / 2;
            for k in grid(0.0, 1.0, n - half).into_iter().rev() {
                push(k, conj_x2(k, true)?);
            }
            for k in grid(0.0, 1.0, half) {
                push(k, conj_x2(k, false)?);
            }
        }
        CurveKind::Fix3 => {
            for p in grid(0.0, 8.0, n) {
                push(p, yw2_3(p)?);
            }
        }
    }
    Ok(out)
}

/// Modulus k ∈ (k₀, 1) of the z-plane conjugate curve point with abscissa Y,
/// returned with its complement.
pub fn conj_z_modulus(y: f64) -> Result<Modulus> {
    let [lo, hi] = ranges().z;
    if !(y >= lo.0 && y <= hi.0) {
        return Err(out_of_range(y));
    }
    let (a, b) = Curve::Z.tau_range();
    let tau = brent(
        "conj_z_modulus",
        |t| Curve::Z.at(t).map(|p| p.0 - y).unwrap_or(f64::NAN),
        a,
        b,
        0.0,
    )?;
    modulus_at(tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cutlocus::u1z;
    use crate::expmap::planes::yw1_half_pi;

    #[test]
    fn tau_is_monotone_and_continuous() {
        let ks: Vec<f64> = [-200.0, -1.0, -1e-9, 0.0, 1e-9, 1.0, 300.0]
            .iter()
            .map(|&t| modulus_at(t).unwrap().k())
            .collect();
        assert!(ks.windows(2).all(|p| p[0] <= p[1]));
        let (a, b) = (modulus_at(-1e-12).unwrap(), modulus_at(1e-12).unwrap());
        assert!((a.k() - b.k()).abs() < 1e-11);
        assert!((tau_of_k(0.9) - tau_of_kc((0.19f64).sqrt())).abs() < 1e-12);
    }

    #[test]
    fn stable_form_matches_general_closed_form() {
        for k in [0.92, 0.95, 0.99] {
            let (y, w) = conj_z(k).unwrap();
            let (yr, wr) = yw1_half_pi(k, u1z(k).unwrap()).unwrap();
            assert!(
                (y - yr).abs() < 1e-10 * (1.0 + yr.abs()),
                "{k}: {y} vs {yr}"
            );
            assert!((w - wr).abs() < 1e-9 * (1.0 + wr.abs()), "{k}: {w} vs {wr}");
        }
    }

    #[test]
    fn complement_reaches_past_the_cap() {
        // values from an independent 60-digit evaluation
        let (y, w) = conj_z_complement(1e-10).unwrap();
        assert!((y - 11.194_927_215).abs() < 1e-8, "{y}");
        assert!((w - 1.375_682_706_22).abs() < 1e-8, "{w}");
        let (y, _) = conj_z_complement(1.4142e-6).unwrap();
        assert!((y - 6.408_221_894_34).abs() < 1e-8, "{y}");
    }

    #[test]
    fn w1_below_line_y_over_6() {
        for y in [0.0, 1.0, 10.0] {
            assert!(w1_conj(y).unwrap() < y / 6.0);
        }
    }

    #[test]
    fn w1_tends_to_minus_infinity_at_y0() {
        let (y, w) = ranges().z[0];
        assert!(y - y0_conj() < 1e-4);
        assert!(w < -1e6, "{w}");
    }

    #[test]
    fn w1_round_trip() {
        let (y, w) = conj_z(0.95).unwrap();
        assert!((w1_conj(y).unwrap() - w).abs() < 1e-9 * (1.0 + w.abs()));
        let km = conj_z_modulus(y).unwrap();
        assert!((km.k() - 0.95).abs() < 1e-12);
    }

    #[test]
    fn w1_ratio_stays_bounded() {
        let r: Vec<f64> = [20.0, 50.0, 150.0]
            .iter()
            .map(|&y| w1_conj(y).unwrap() / y)
            .collect();
        assert!(r.iter().all(|v| *v > 0.05 && *v < 1.0 / 6.0), "{r:?}");
    }

    #[test]
    fn w21_monotone_with_limits() {
        let ys: Vec<f64> = (1..60).map(|i| 0.05 * i as f64 * i as f64).collect();
        let ws: Vec<f64> = ys.iter().map(|&y| w21_conj(y).unwrap()).collect();
        assert!(ws.windows(2).all(|p| p[1] < p[0]));
        assert!(w21_conj(1e6).unwrap() < 1e-5);
        assert!(w21_conj(1e-3).unwrap() > 1e3);
        let (y, w) = conj_x1(0.5).unwrap();
        assert!((w21_conj(y).unwrap() - w).abs() < 1e-10 * w);
    }

    #[test]
    fn w22_shape() {
        assert_eq!(w22_conj(0.0).unwrap(), 1.0 / PI.sqrt());
        let ys: Vec<f64> = (1..40).map(|i| -0.1 * i as f64).collect();
        let ws: Vec<f64> = ys.iter().map(|&y| w22_conj(y).unwrap()).collect();
        // decreasing in Y, so increasing along decreasing Y
        assert!(ws.windows(2).all(|p| p[1] > p[0]));
        assert!(w22_conj(-50.0).unwrap() > 10.0);
        // the lower branch now reaches beyond |Y| = 10
        assert!(w22_conj(10.0).unwrap() > 0.0);
        for y in [0.5, 1.0, 5.0] {
            let lower = -w22_conj(-y).unwrap();
            assert!(lower < w21_conj(y).unwrap());
        }
    }

    #[test]
    fn g_function_symmetries() {
        assert_eq!(G1(0.0, 1.0).unwrap(), 0.0);
        let a = G1(1.0, 1.0).unwrap();
        assert!((G1(2.0, 2.0).unwrap() - 8.0 * a).abs() < 1e-8 * a.abs());
        assert_eq!(G1(-1.0, 1.0).unwrap(), a);
        assert!((G3(-1.0, 2.0).unwrap() - G3(1.0, 2.0).unwrap()).abs() < 1e-15);
        assert_eq!(G2(0.0, 1.0).unwrap(), 0.0);
        let b = G2(1.0, 1.0).unwrap();
        assert!((G2(4.0, 2.0).unwrap() - 8.0 * b).abs() < 1e-8 * b);
        assert!(G1(1.0, -5.0).is_err());
        assert!(G3(0.0, 1.0).is_err());
    }

    #[test]
    fn fix3_constants() {
        let p = p3();
        assert!((p - 2.0 * p.tanh()).abs() <= 1e-12);
        assert!(p0() < p);
        let (y, w) = yw2_3(p).unwrap();
        assert!(y.abs() < 1e-10);
        assert!(w > 1.0 / 3f64.sqrt());
    }

    #[test]
    fn sampled_curves_have_requested_length() {
        for which in [
            CurveKind::W1,
            CurveKind::W21,
            CurveKind::W22,
            CurveKind::Fix3,
        ] {
            let s = sample_curve(which, 16).unwrap();
            assert_eq!(s.len(), 16);
            assert!(s.iter().all(|r| r.y.is_finite() && r.w.is_finite()));
        }
        assert!(sample_curve(CurveKind::W1, 1).is_err());
    }
}
