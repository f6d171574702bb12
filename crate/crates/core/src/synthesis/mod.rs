//! Optimal synthesis: every minimizer to a terminal point.
//!
//! The point is dilated to unit homogeneous norm and classified. On the
//! cut-locus strata the minimizers come from closed-form inversion, after a
//! reflection has moved the point into the canonical sign sector of its
//! stratum. The pairs are images of each other under the reflection fixing
//! the plane: ε¹ (u₂ ↦ π − u₂) on z = 0, ε² (u₂ ↦ −u₂) on x = 0. Off the cut
//! locus the single minimizer is found by shooting.

mod inverse;
mod shooting;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::cutlocus::{
    classify_point_with, t_cut, ClassifyOptions, LensPiece, Multiplicity, Sign, Stratum,
};
use crate::error::{Error, Result};
use crate::expmap::{exp, from_chart, normalize_angle, to_chart, ChartPoint, Covector};
use crate::group::{Point, Reflection};

use shooting::CUT_SLACK;

/// Default endpoint tolerance, applied at unit homogeneous norm.
pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_FAMILY_SAMPLES: usize = 32;
pub const DEFAULT_MAX_STARTS: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Minimizer {
    pub nu: ChartPoint,
    /// Equal to the length.
    pub time: f64,
    /// |Exp(from_chart(ν)) − q|.
    pub residual: f64,
}

/// The one-parameter family on E±: N₁ points (k₀, π, u₂⁰, σ̂), u₂⁰ ∈ [0, 2π).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Family {
    pub k: f64,
    pub u1: f64,
    pub sigma: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthesisResult {
    pub stratum: Stratum,
    pub multiplicity: Multiplicity,
    /// For a family, evenly spaced samples of it.
    pub minimizers: Vec<Minimizer>,
    pub family: Option<Family>,
}

impl SynthesisResult {
    /// The common time of the minimizers.
    pub fn distance(&self) -> f64 {
        self.minimizers.first().map_or(0.0, |m| m.time)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SynthesisOptions {
    /// Endpoint tolerance after dilation to unit homogeneous norm.
    pub tol: f64,
    pub family_samples: usize,
    pub classify: ClassifyOptions,
    /// Shooting starts tried before giving up.
    pub max_starts: usize,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        SynthesisOptions {
            tol: DEFAULT_TOL,
            family_samples: DEFAULT_FAMILY_SAMPLES,
            classify: ClassifyOptions::default(),
            max_starts: DEFAULT_MAX_STARTS,
        }
    }
}

pub fn minimizers(q: Point, tol: f64) -> Result<SynthesisResult> {
    minimizers_with(
        q,
        &SynthesisOptions {
            tol,
            ..Default::default()
        },
    )
}

pub fn minimizers_with(q: Point, opt: &SynthesisOptions) -> Result<SynthesisResult> {
    if !(opt.tol > 0.0) {
        return Err(Error::Domain {
            what: "tolerance",
            value: opt.tol,
        });
    }
    if opt.family_samples < 2 {
        return Err(Error::Domain {
            what: "family sample count",
            value: opt.family_samples as f64,
        });
    }
    let stratum = classify_point_with(q, opt.classify)?;
    if stratum == Stratum::Origin {
        return Err(Error::Domain {
            what: "terminal point (the origin)",
            value: 0.0,
        });
    }
    let (n, h) = q.normalized();
    let (charts, family) = solve_normalized(stratum, n, opt).map_err(|e| match e {
        Error::NotBracketed { .. } | Error::OutOfRange(_) => Error::OutOfRange(q.to_array()),
        e => e,
    })?;
    let mut out = Vec::with_capacity(charts.len());
    for nu in charts {
        let nu = scale_chart(nu, h);
        let (l, t) = from_chart(&nu)?;
        let residual = exp(&l, t)?.dist(q);
        out.push(Minimizer {
            nu,
            time: t,
            residual,
        });
    }
    Ok(SynthesisResult {
        stratum,
        multiplicity: stratum.multiplicity(),
        minimizers: out,
        family: family.map(|f| Family {
            sigma: f.sigma / h,
            ..f
        }),
    })
}

/// True when the chart point lies within its cut time (t_cut = ∞ always
/// passes). Times equal to t_cut up to rounding count as optimal.
pub fn is_optimal(nu: &ChartPoint) -> Result<bool> {
    let (l, t) = from_chart(nu)?;
    Ok(t <= t_cut(&l)? * (1.0 + CUT_SLACK))
}

/// Sub-Riemannian distance from the origin.
pub fn distance(q: Point) -> Result<f64> {
    if q.is_origin() {
        return Ok(0.0);
    }
    Ok(minimizers(q, DEFAULT_TOL)?.distance())
}

/// Chart point reaching dilate(ρ, q) when `nu` reaches q.
pub fn scale_chart(nu: ChartPoint, rho: f64) -> ChartPoint {
    match nu {
        ChartPoint::N1 { k, u1, u2, sigma } => ChartPoint::N1 {
            k,
            u1,
            u2,
            sigma: sigma / rho,
        },
        ChartPoint::N2 {
            k,
            u1,
            u2,
            sigma,
            sign_c,
        } => ChartPoint::N2 {
            k,
            u1,
            u2,
            sigma: sigma / rho,
            sign_c,
        },
        ChartPoint::N3 {
            p,
            tau,
            sigma,
            sign_c,
        } => ChartPoint::N3 {
            p,
            tau,
            sigma: sigma / rho,
            sign_c,
        },
        ChartPoint::N6 { theta, c, t } => ChartPoint::N6 {
            theta,
            c: c / rho,
            t: t * rho,
        },
        ChartPoint::N7 { theta, t } => ChartPoint::N7 { theta, t: t * rho },
    }
}

const REFLECTIONS: [Reflection; 8] = [
    Reflection::ID,
    Reflection::E1,
    Reflection::E2,
    Reflection::E3,
    Reflection::E4,
    Reflection::E5,
    Reflection::E6,
    Reflection::E7,
];

/// Closed-form solver for a stratum in canonical sign position.
type Solver = fn(Point) -> Result<Vec<ChartPoint>>;

fn canonical_solver(s: Stratum, q: Point) -> Option<Solver> {
    use Sign::Plus;
    match s {
        Stratum::Iz { i: Plus, j: Plus } => Some(inverse::iz),
        Stratum::CIz { i: Plus, j: Plus } => Some(inverse::ciz),
        Stratum::Ix { i: Plus, j: Plus } => Some(inverse::ix),
        Stratum::CIx { i: Plus, j: Plus } => Some(inverse::cix),
        Stratum::Nx {
            j: Plus,
            piece: LensPiece::Plus,
        } => Some(inverse::lens),
        Stratum::CNx { i: Plus, j: Plus } if q.y < 0.0 => Some(|q| inverse::cnx(q, true)),
        Stratum::CNx {
            i: Sign::Minus,
            j: Plus,
        } if q.y < 0.0 => Some(|q| inverse::cnx(q, false)),
        _ => None,
    }
}

/// Moves q into canonical position, solves there, and maps the charts back;
/// every reflection is an involution.
fn solve_by_reflection(s: Stratum, q: Point) -> Result<Vec<ChartPoint>> {
    for r in REFLECTIONS {
        let q2 = r.apply(q);
        if let Some(solve) = canonical_solver(s.mirrored(r), q2) {
            return Ok(solve(q2)?.into_iter().map(|nu| nu.reflect(r)).collect());
        }
    }
    Err(Error::Unsupported("stratum without a canonical sector"))
}

fn chart_of_shot(shot: shooting::Shot) -> Result<ChartPoint> {
    let l = shot.lambda;
    to_chart(
        &Covector::new(normalize_angle(l.theta), l.c, l.alpha),
        shot.t,
    )
}

/// Below this |α| a shot is tried as a circle (α = 0).
const CIRCLE_ALPHA: f64 = 1e-8;

/// A shot with vanishing α is the circle through the same point when that
/// circle still reaches it within tolerance: LM leaves α at rounding level
/// instead of exactly 0, which would report a degenerate rotation chart.
fn snap_circle(shot: shooting::Shot, n: Point, tol: f64) -> shooting::Shot {
    let l = shot.lambda;
    if l.alpha == 0.0 || l.alpha.abs() > CIRCLE_ALPHA * l.c * l.c {
        return shot;
    }
    let circle = Covector::new(l.theta, l.c, 0.0);
    match exp(&circle, shot.t) {
        Ok(q) if q.dist(n) <= tol && shooting::within_cut(&circle, shot.t) => shooting::Shot {
            lambda: circle,
            residual: q.dist(n),
            ..shot
        },
        _ => shot,
    }
}

/// Charts reaching the unit-norm point n, with the family description on E±.
fn solve_normalized(
    s: Stratum,
    n: Point,
    opt: &SynthesisOptions,
) -> Result<(Vec<ChartPoint>, Option<Family>)> {
    let on_z = Point::new(n.x, n.y, 0.0, n.w);
    let on_x = Point::new(0.0, n.y, n.z, n.w);
    let on_axis = Point::new(0.0, n.y, 0.0, n.w);
    // lens points with |Y| inside the stratum tolerance sit on the segment C_x
    let on_segment = n.y.abs() <= opt.classify.eps_strat * n.z.abs().sqrt();
    let charts = match s {
        Stratum::Origin => unreachable!("rejected by the caller"),
        Stratum::A(_) => vec![inverse::a_ray(n.y)],
        Stratum::E(_) => {
            let k = crate::cutlocus::k0();
            let sigma = inverse::e_sigma(n.w);
            let m = opt.family_samples;
            let charts = (0..m)
                .map(|i| ChartPoint::N1 {
                    k,
                    u1: PI,
                    u2: 2.0 * PI * i as f64 / m as f64,
                    sigma,
                })
                .collect();
            return Ok((charts, Some(Family { k, u1: PI, sigma })));
        }
        Stratum::I0x(_) => inverse::i0x(on_axis.y, on_axis.w)?,
        Stratum::I0z(_) => inverse::i0z(on_axis.y, on_axis.w)?,
        Stratum::Nx {
            piece: LensPiece::C,
            ..
        } => inverse::c_segment(Point::new(0.0, 0.0, n.z, n.w), false),
        Stratum::CNx { .. } if on_segment => {
            inverse::c_segment(Point::new(0.0, 0.0, n.z, n.w), true)
        }
        Stratum::Iz { .. } | Stratum::CIz { .. } => solve_by_reflection(s, on_z)?,
        Stratum::Ix { .. } | Stratum::CIx { .. } | Stratum::Nx { .. } | Stratum::CNx { .. } => {
            solve_by_reflection(s, on_x)?
        }
        Stratum::Generic | Stratum::FixZ { .. } | Stratum::FixX { .. } => {
            let shot = shooting::shoot(n, opt.tol, opt.max_starts)?;
            vec![chart_of_shot(snap_circle(shot, n, opt.tol))?]
        }
    };
    Ok((polish_all(charts, n, opt.tol)?, None))
}

/// Closed forms meet the tolerance on their own; a chart that does not is
/// refined by shooting from it, and rejected if that fails too.
fn polish_all(charts: Vec<ChartPoint>, n: Point, tol: f64) -> Result<Vec<ChartPoint>> {
    charts
        .into_iter()
        .map(|nu| {
            let (l, t) = from_chart(&nu)?;
            let r = exp(&l, t)?.dist(n);
            if r <= tol {
                return Ok(nu);
            }
            let shot = shooting::polish(n, l, t)?;
            if shot.residual <= tol {
                chart_of_shot(shot)
            } else {
                Err(Error::NotReached {
                    best_residual: r.min(shot.residual),
                })
            }
        })
        .collect()
}

#[cfg(test)]
mod tests;
