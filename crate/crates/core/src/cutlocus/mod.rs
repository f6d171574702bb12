//! Cut time and the stratification of the cut locus.
//!
//! Points are classified in the dilation-invariant coordinates
//! (Ŷ, Ŵ) = (y/|x|, w/|x|³) on {z = 0} and (Y, W) = (y/√|z|, w/|z|^{3/2}) on
//! {x = 0}. Using |x| and |z| folds the reflections ε² and ε¹ into the sign
//! index j; ε⁴ acts as (Y, W) ↦ (−Y, −W) and swaps the ± strata.

mod curves;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use curves::{cmp_w1, cmp_w21, cmp_w22, CurveCmp};
pub use curves::{
    conj_x1, conj_x2, conj_z, conj_z_complement, conj_z_modulus, p0, p3, sample_curve, w1_conj,
    w21_conj, w22_conj, y0_conj, CurveKind, CurveSample, G1, G2, G3,
};
pub(crate) use curves::{modulus_at, tau_of_k};

use crate::elliptic::{self, Modulus};
use crate::error::{Error, Result};
use crate::expmap::{classify_with, Covector, CovectorKind, EPS_CLASS};
use crate::group::{Point, Reflection};
use crate::roots::brent;

/// Default tolerance on the invariant coordinates for membership in a
/// boundary curve, and for x = 0, z = 0 after unit-norm dilation.
pub const EPS_STRAT: f64 = 1e-9;

/// k₀: the unique root of 2E(k) − K(k) on (0, 1).
pub fn k0() -> f64 {
    static CELL: OnceLock<f64> = OnceLock::new();
    *CELL.get_or_init(|| {
        brent(
            "k0",
            |k| elliptic::iota1(Modulus::saturating(k)),
            0.5,
            0.99,
            0.0,
        )
        .expect("2E - K changes sign on [0.5, 0.99]")
    })
}

/// f_z(p, k) = dn p sn p + (p − 2E(p)) cn p.
pub fn f_z(p: f64, k: f64) -> Result<f64> {
    let km = Modulus::new(k)?;
    let (sn, cn, dn) = elliptic::jacobi(p, km);
    Ok(dn * sn + (p - 2.0 * elliptic::jacobi_eps(p, km)) * cn)
}

/// Root u = π + v of f_z(F(u), k) = 0 in (π/2, 3π/2), with sin v and cos v
/// kept to full relative accuracy.
#[derive(Clone, Copy, Debug)]
pub(crate) struct ZRoot {
    pub v: f64,
    pub sv: f64,
    pub cv: f64,
}

/// |ι₁| below this many K is rounding noise; ι₁ vanishes exactly at k₀.
const IOTA1_NOISE: f64 = 8.0 * f64::EPSILON;

/// h(v) = F(v) − 2E(v) + tan v·Δ(v); h' = Δ tan² v ≥ 0 and h ~ v³/3.
fn h_z(sv: f64, cv: f64, v: f64, km: Modulus) -> f64 {
    if v.abs() < 1e-3 {
        let v2 = v * v;
        return v * v2 * (1.0 / 3.0 + (2.0 / 3.0 - 0.5 * km.m()) * v2 / 5.0);
    }
    let (f, e) = elliptic::incomplete_fe_sc(sv, cv, km);
    f - 2.0 * e + sv / cv * (cv * cv + km.m1() * sv * sv).sqrt()
}

/// v = δ − π/2 with (sin v, cos v); away from v = 0 both come from δ so that
/// cos v keeps relative accuracy as v → ±π/2.
fn v_of_delta(delta: f64) -> (f64, f64, f64) {
    let v = delta - FRAC_PI_2;
    if v.abs() < FRAC_PI_4 {
        (v, v.sin(), v.cos())
    } else {
        (v, -delta.cos(), delta.sin())
    }
}

/// Dividing f_z by cn p and writing p = F(π + v) turns f_z = 0 into
/// h(v) = 2ι₁(k), which has exactly one root since h is increasing.
pub(crate) fn z_root(km: Modulus) -> Result<ZRoot> {
    if km.k() == 0.0 {
        return Err(Error::Domain {
            what: "p_z1 modulus (0, 1)",
            value: 0.0,
        });
    }
    let (kk, e) = elliptic::complete_pair(km);
    let i1 = 2.0 * e - kk;
    if i1.abs() <= IOTA1_NOISE * kk {
        return Ok(ZRoot {
            v: 0.0,
            sv: 0.0,
            cv: 1.0,
        });
    }
    let g = |delta: f64| {
        let (v, sv, cv) = v_of_delta(delta);
        h_z(sv, cv, v, km) - 2.0 * i1
    };
    // the root has δ ≈ k'/|F₁ − 2E₁|, well above 10⁻⁴k'; searching in ln δ
    // keeps the bracket count independent of how small k' is
    let ln_delta = brent(
        "p_z1",
        |x: f64| g(x.exp()),
        (1e-4 * km.kc()).ln(),
        (PI - 1e-15).ln(),
        0.0,
    )?;
    let delta = ln_delta.exp();
    let (v, sv, cv) = v_of_delta(delta);
    Ok(ZRoot { v, sv, cv })
}

/// p_z¹(k): the first root of f_z(·, k) past K(k); it lies in (K, 3K).
pub fn p_z1(k: f64) -> Result<f64> {
    let km = Modulus::new(k)?;
    let r = z_root(km)?;
    Ok(2.0 * elliptic::complete_k(km) + elliptic::incomplete_fe_sc(r.sv, r.cv, km).0)
}

/// u₁z(k) = am(p_z¹(k), k).
pub fn u1z(k: f64) -> Result<f64> {
    Ok(PI + z_root(Modulus::new(k)?)?.v)
}

/// Cut time of the geodesic with initial covector λ; +∞ on C₃, C₄, C₅, C₇.
pub fn t_cut(lambda: &Covector) -> Result<f64> {
    t_cut_with(lambda, EPS_CLASS)
}

pub fn t_cut_with(lambda: &Covector, eps: f64) -> Result<f64> {
    let class = classify_with(lambda, eps);
    let sigma = lambda.alpha.abs().sqrt();
    Ok(match class.kind {
        CovectorKind::C1 => {
            let k = class.k.expect("C1 carries a modulus");
            if k <= k0() {
                4.0 * elliptic::complete_k(Modulus::new(k)?) / sigma
            } else {
                2.0 * p_z1(k)? / sigma
            }
        }
        CovectorKind::C2 => {
            let k = class.k.expect("C2 carries a modulus");
            2.0 * k * elliptic::complete_k(Modulus::new(k)?) / sigma
        }
        CovectorKind::C6 => 2.0 * PI / lambda.c.abs(),
        CovectorKind::C3 | CovectorKind::C4 | CovectorKind::C5 | CovectorKind::C7 => f64::INFINITY,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn of(v: f64) -> Sign {
        if v < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    fn flip_if(self, b: bool) -> Sign {
        if b {
            self.flip()
        } else {
            self
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Piece of the lens N_x: Y < 0, Y > 0, or the segment C_x on Y = 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LensPiece {
    Plus,
    Minus,
    C,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Multiplicity {
    None,
    One,
    Two,
    Family,
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Multiplicity::None => "none",
            Multiplicity::One => "1",
            Multiplicity::Two => "2",
            Multiplicity::Family => "family",
        })
    }
}

/// Stratum of a terminal point. In the z-plane j = sgn x, in the x-plane
/// j = sgn z; i is the sign distinguishing the ε⁴-mirrored pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stratum {
    Origin,
    /// xz ≠ 0
    Generic,
    /// z = 0, x ≠ 0 outside the cut locus
    FixZ {
        j: Sign,
    },
    /// x = 0, z ≠ 0 outside the cut locus
    FixX {
        j: Sign,
    },
    /// x = z = w = 0: abnormal rays, in the closure of the cut locus only
    A(Sign),
    /// x = y = z = 0
    E(Sign),
    I0x(Sign),
    I0z(Sign),
    Iz {
        i: Sign,
        j: Sign,
    },
    CIz {
        i: Sign,
        j: Sign,
    },
    Ix {
        i: Sign,
        j: Sign,
    },
    CIx {
        i: Sign,
        j: Sign,
    },
    Nx {
        j: Sign,
        piece: LensPiece,
    },
    CNx {
        i: Sign,
        j: Sign,
    },
}

impl Stratum {
    pub fn multiplicity(self) -> Multiplicity {
        use Stratum::*;
        match self {
            Origin => Multiplicity::None,
            E(_) => Multiplicity::Family,
            I0x(_) | I0z(_) | Iz { .. } | Ix { .. } | Nx { .. } => Multiplicity::Two,
            Generic | FixZ { .. } | FixX { .. } | A(_) | CIz { .. } | CIx { .. } | CNx { .. } => {
                Multiplicity::One
            }
        }
    }

    /// Member of Cut ∩ Conj.
    pub fn is_conjugate(self) -> bool {
        use Stratum::*;
        matches!(self, CIz { .. } | CIx { .. } | CNx { .. } | E(_))
    }

    /// Member of Cut ∩ Max.
    pub fn is_maxwell(self) -> bool {
        use Stratum::*;
        matches!(
            self,
            I0x(_) | I0z(_) | Iz { .. } | Ix { .. } | Nx { .. } | E(_)
        )
    }

    /// Member of the cut locus itself (A± and the origin lie only in its closure).
    pub fn in_cut(self) -> bool {
        self.is_conjugate() || self.is_maxwell()
    }

    /// Label of ε(q) for q in this stratum.
    pub fn mirrored(self, r: Reflection) -> Stratum {
        use Stratum::*;
        let (e1, e2, e4) = (r.has_e1(), r.has_e2(), r.has_e4());
        match self {
            Origin | Generic => self,
            // ε¹, ε² fix x = z = 0 pointwise
            A(s) => A(s.flip_if(e4)),
            E(s) => E(s.flip_if(e4)),
            I0x(s) => I0x(s.flip_if(e4)),
            I0z(s) => I0z(s.flip_if(e4)),
            // on z = 0, ε¹ is the identity and ε², ε⁴ both negate x
            FixZ { j } => FixZ {
                j: j.flip_if(e2 ^ e4),
            },
            Iz { i, j } => Iz {
                i: i.flip_if(e4),
                j: j.flip_if(e2 ^ e4),
            },
            CIz { i, j } => CIz {
                i: i.flip_if(e4),
                j: j.flip_if(e2 ^ e4),
            },
            // on x = 0, ε² is the identity, ε¹ negates z, ε⁴ negates (Y, W)
            FixX { j } => FixX { j: j.flip_if(e1) },
            Ix { i, j } => Ix {
                i: i.flip_if(e4),
                j: j.flip_if(e1),
            },
            CIx { i, j } => CIx {
                i: i.flip_if(e4),
                j: j.flip_if(e1),
            },
            CNx { i, j } => CNx {
                i: i.flip_if(e4),
                j: j.flip_if(e1),
            },
            Nx { j, piece } => Nx {
                j: j.flip_if(e1),
                piece: match (piece, e4) {
                    (LensPiece::Plus, true) => LensPiece::Minus,
                    (LensPiece::Minus, true) => LensPiece::Plus,
                    (p, _) => p,
                },
            },
        }
    }

    /// Short label, e.g. `I0x+`, `Iz-^+`, `Nx^+(C)`.
    pub fn label(self) -> String {
        use Stratum::*;
        let pm = |a: Sign, b: Sign, name: &str| format!("{name}{}^{}", a.symbol(), b.symbol());
        match self {
            Origin => "Origin".into(),
            Generic => "Generic".into(),
            FixZ { j } => format!("FixZ^{}", j.symbol()),
            FixX { j } => format!("FixX^{}", j.symbol()),
            A(s) => format!("A{}", s.symbol()),
            E(s) => format!("E{}", s.symbol()),
            I0x(s) => format!("I0x{}", s.symbol()),
            I0z(s) => format!("I0z{}", s.symbol()),
            Iz { i, j } => pm(i, j, "Iz"),
            CIz { i, j } => pm(i, j, "CIz"),
            Ix { i, j } => pm(i, j, "Ix"),
            CIx { i, j } => pm(i, j, "CIx"),
            CNx { i, j } => pm(i, j, "CNx"),
            Nx { j, piece } => format!(
                "Nx^{}({})",
                j.symbol(),
                match piece {
                    LensPiece::Plus => "N+",
                    LensPiece::Minus => "N-",
                    LensPiece::C => "C",
                }
            ),
        }
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    /// |x|, |z|, |y|, |w| at or below this, after dilation to unit
    /// homogeneous norm, count as zero.
    pub eps_zero: f64,
    /// Relative distance to a boundary curve counted as membership.
    pub eps_strat: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            eps_zero: EPS_STRAT,
            eps_strat: EPS_STRAT,
        }
    }
}

pub fn classify_point(q: Point) -> Result<Stratum> {
    classify_point_with(q, ClassifyOptions::default())
}

/// Stratum of q. Fails with `OutOfRange` only when q sits so close to a
/// boundary curve beyond the modulus cap that the side cannot be decided.
pub fn classify_point_with(q: Point, opt: ClassifyOptions) -> Result<Stratum> {
    if !q.is_finite() {
        return Err(Error::Domain {
            what: "point coordinate",
            value: f64::NAN,
        });
    }
    if q.is_origin() {
        return Ok(Stratum::Origin);
    }
    let (n, _) = q.normalized();
    let zero = |v: f64| v.abs() <= opt.eps_zero;
    let on_range = |e: Error| match e {
        Error::OutOfRange(_) => Error::OutOfRange(q.to_array()),
        e => e,
    };
    match (zero(n.x), zero(n.z)) {
        (false, false) => Ok(Stratum::Generic),
        (true, true) => Ok(classify_m00(n.y, n.w, &zero)),
        (false, true) => {
            let ax = n.x.abs();
            classify_z_plane(n.y / ax, n.w / ax.powi(3), Sign::of(n.x), opt.eps_strat)
                .map_err(on_range)
        }
        (true, false) => {
            let az = n.z.abs();
            classify_x_plane(
                n.y / az.sqrt(),
                n.w / az.powf(1.5),
                Sign::of(n.z),
                opt.eps_strat,
            )
            .map_err(on_range)
        }
    }
}

fn classify_m00(y: f64, w: f64, zero: &dyn Fn(f64) -> bool) -> Stratum {
    match (zero(y), zero(w)) {
        (true, true) => Stratum::Origin,
        (true, false) => Stratum::E(Sign::of(w)),
        (false, true) => Stratum::A(Sign::of(y)),
        (false, false) => {
            if (y > 0.0) == (w > 0.0) {
                Stratum::I0x(Sign::of(y))
            } else {
                Stratum::I0z(Sign::of(w))
            }
        }
    }
}

/// Position of `w` relative to a curve: −1 below, 0 on, 1 above.
fn side(c: CurveCmp, w: f64, eps: f64) -> i8 {
    match c {
        CurveCmp::Below => -1,
        CurveCmp::Above => 1,
        CurveCmp::Value(v) => {
            if (w - v).abs() <= eps * v.abs().max(1.0) {
                0
            } else if w < v {
                -1
            } else {
                1
            }
        }
    }
}

fn classify_z_plane(y: f64, w: f64, j: Sign, eps: f64) -> Result<Stratum> {
    let y0 = y0_conj();
    // (y, w) for i = +, (−y, −w) for i = −
    for i in [Sign::Plus, Sign::Minus] {
        let (yy, ww) = (i.value() * y, i.value() * w);
        if yy > y0 {
            // Y₀¹ < 0, so both signs can pass this test; the regions are disjoint
            match side(cmp_w1(yy, ww)?, ww, eps) {
                -1 => return Ok(Stratum::Iz { i, j }),
                0 => return Ok(Stratum::CIz { i, j }),
                _ => {}
            }
        }
    }
    Ok(Stratum::FixZ { j })
}

fn classify_x_plane(y: f64, w: f64, j: Sign, eps: f64) -> Result<Stratum> {
    for i in [Sign::Plus, Sign::Minus] {
        let (yy, ww) = (i.value() * y, i.value() * w);
        if yy > eps {
            match side(cmp_w21(yy, ww)?, ww, eps) {
                1 => return Ok(Stratum::Ix { i, j }),
                0 => return Ok(Stratum::CIx { i, j }),
                _ => {}
            }
        }
    }
    let (upper, lower) = if y.abs() <= eps {
        let b = 1.0 / PI.sqrt();
        (
            side(CurveCmp::Value(b), w, eps),
            side(CurveCmp::Value(-b), w, eps),
        )
    } else {
        // the lower boundary is the ε⁴ image of the upper one
        (
            side(cmp_w22(y, w)?, w, eps),
            -side(cmp_w22(-y, -w)?, -w, eps),
        )
    };
    Ok(match (upper, lower) {
        (0, _) => Stratum::CNx { i: Sign::Plus, j },
        (_, 0) => Stratum::CNx { i: Sign::Minus, j },
        (-1, 1) => Stratum::Nx {
            j,
            piece: if y.abs() <= eps {
                LensPiece::C
            } else if y < 0.0 {
                LensPiece::Plus
            } else {
                LensPiece::Minus
            },
        },
        _ => Stratum::FixX { j },
    })
}
