//! The exponential mapping Exp: (λ, t) ↦ q_t.
//!
//! A covector λ = (θ, c, α) drives the pendulum θ̇ = c, ċ = −α sin θ and the
//! controls u₁ = −sin θ, u₂ = cos θ. The energy E = c²/2 − α cos θ is a first
//! integral, and its level relative to |α| sorts λ into the classes C₁…C₇.
//! Endpoints are computed by adaptive integration; closed forms exist only on
//! the symmetric planes and live in [`planes`].

mod chart;
pub mod planes;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

pub use chart::{from_chart, to_chart, to_chart_with, ChartPoint};

use crate::error::Result;
use crate::group::{Point, Reflection};
use crate::ode::{self, Tolerance};

/// Default tolerance for the boundary tests E = ±|α|, α = 0 and c = 0.
pub const EPS_CLASS: f64 = 1e-12;

/// Representative of θ in (−π, π].
pub fn normalize_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Representative of u in [0, period).
pub(crate) fn wrap(u: f64, period: f64) -> f64 {
    let r = u.rem_euclid(period);
    if r >= period {
        0.0
    } else {
        r
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Covector {
    pub theta: f64,
    pub c: f64,
    pub alpha: f64,
}

impl Covector {
    pub fn new(theta: f64, c: f64, alpha: f64) -> Self {
        Covector {
            theta: normalize_angle(theta),
            c,
            alpha,
        }
    }

    pub fn energy(&self) -> f64 {
        0.5 * self.c * self.c - self.alpha * self.theta.cos()
    }

    /// Image under the dilation: (θ, c/ρ, α/ρ²) pairs with time ρt.
    pub fn dilated(&self, rho: f64) -> Self {
        Covector {
            theta: self.theta,
            c: self.c / rho,
            alpha: self.alpha / (rho * rho),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CovectorKind {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CovectorClass {
    pub kind: CovectorKind,
    /// Modulus on C₁, C₂; 1 on C₃.
    pub k: Option<f64>,
    pub energy: f64,
}

/// θ shifted so that the pendulum potential is −|α| cos θ'.
#[inline]
pub(crate) fn upright_angle(lambda: &Covector) -> f64 {
    if lambda.alpha > 0.0 {
        normalize_angle(lambda.theta)
    } else {
        normalize_angle(lambda.theta - PI)
    }
}

pub fn classify(lambda: &Covector) -> CovectorClass {
    classify_with(lambda, EPS_CLASS)
}

/// Classification with tolerance `eps` on the scale-free quantity
/// κ = c²/(4|α|) + sin²(θ'/2) = (E + |α|)/(2|α|).
pub fn classify_with(lambda: &Covector, eps: f64) -> CovectorClass {
    let energy = lambda.energy();
    let mk = |kind, k| CovectorClass { kind, k, energy };
    if lambda.alpha.abs() <= eps {
        return if lambda.c.abs() <= eps {
            mk(CovectorKind::C7, None)
        } else {
            mk(CovectorKind::C6, None)
        };
    }
    let half = 0.5 * upright_angle(lambda);
    let kappa = lambda.c * lambda.c / (4.0 * lambda.alpha.abs()) + half.sin().powi(2);
    if kappa <= eps {
        mk(CovectorKind::C4, None)
    } else if (kappa - 1.0).abs() <= eps {
        if lambda.c.abs() <= eps {
            mk(CovectorKind::C5, None)
        } else {
            mk(CovectorKind::C3, Some(1.0))
        }
    } else if kappa < 1.0 {
        mk(CovectorKind::C1, Some(kappa.sqrt()))
    } else {
        mk(CovectorKind::C2, Some(1.0 / kappa.sqrt()))
    }
}

/// Constant-θ classes, where the trajectory is the straight line in direction θ.
fn is_straight(kind: CovectorKind) -> bool {
    matches!(kind, CovectorKind::C4 | CovectorKind::C5 | CovectorKind::C7)
}

fn straight_line(theta: f64, t: f64) -> Point {
    let (s, c) = theta.sin_cos();
    Point::new(-t * s, t * c, 0.0, t * t * t * s * s * c / 6.0)
}

/// (θ_t, c_t) of the vertical subsystem.
pub fn pendulum_flow(lambda: &Covector, t: f64) -> Result<Covector> {
    Ok(exp_state(lambda, t)?.1)
}

pub fn exp(lambda: &Covector, t: f64) -> Result<Point> {
    Ok(exp_state(lambda, t)?.0)
}

/// Endpoint together with the pendulum state at time t.
pub fn exp_state(lambda: &Covector, t: f64) -> Result<(Point, Covector)> {
    exp_state_with(lambda, t, Tolerance::default())
}

pub fn exp_state_with(lambda: &Covector, t: f64, tol: Tolerance) -> Result<(Point, Covector)> {
    let class = classify(lambda);
    if is_straight(class.kind) {
        // the ODE would drift off the unstable equilibrium of C₅
        ode::check_time(t)?;
        return Ok((
            straight_line(lambda.theta, t),
            Covector::new(lambda.theta, lambda.c, lambda.alpha),
        ));
    }
    let y = ode::flow(
        lambda.alpha,
        [0.0, 0.0, 0.0, 0.0, lambda.theta, lambda.c],
        t,
        tol,
    )?;
    Ok((
        Point::new(y[0], y[1], y[2], y[3]),
        Covector::new(y[4], y[5], lambda.alpha),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub w: f64,
    pub theta: f64,
    pub c: f64,
}

/// `n` ≥ 2 samples, evenly spaced on [0, t].
pub fn trajectory(lambda: &Covector, t: f64, n: usize) -> Result<Vec<TrajectorySample>> {
    let n = n.max(2);
    let ts: Vec<f64> = (0..n).map(|i| t * i as f64 / (n - 1) as f64).collect();
    let class = classify(lambda);
    let states: Vec<[f64; 6]> = if is_straight(class.kind) {
        ts.iter()
            .map(|&s| {
                let q = straight_line(lambda.theta, s);
                [q.x, q.y, q.z, q.w, lambda.theta, lambda.c]
            })
            .collect()
    } else {
        ode::flow_samples(
            lambda.alpha,
            [0.0, 0.0, 0.0, 0.0, lambda.theta, lambda.c],
            &ts,
            Tolerance::default(),
        )?
    };
    Ok(ts
        .iter()
        .zip(states)
        .map(|(&t, y)| TrajectorySample {
            t,
            x: y[0],
            y: y[1],
            z: y[2],
            w: y[3],
            theta: normalize_angle(y[4]),
            c: y[5],
        })
        .collect())
}

/// Action of ε^i on the preimage: ε¹(λ,t) = (θ_t, −c_t, α, t),
/// ε²(λ,t) = (−θ_t, c_t, α, t), ε⁴(λ,t) = (θ + π, c, −α, t). Composites apply
/// ε⁴, ε², ε¹ in that order.
pub fn reflect_preimage(r: Reflection, lambda: &Covector, t: f64) -> Result<(Covector, f64)> {
    let mut l = *lambda;
    if r.has_e4() {
        l = Covector::new(l.theta + PI, l.c, -l.alpha);
    }
    if r.has_e2() {
        let end = pendulum_flow(&l, t)?;
        l = Covector::new(-end.theta, end.c, l.alpha);
    }
    if r.has_e1() {
        let end = pendulum_flow(&l, t)?;
        l = Covector::new(end.theta, -end.c, l.alpha);
    }
    Ok((l, t))
}
