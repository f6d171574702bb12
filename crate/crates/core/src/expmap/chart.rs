//! Elliptic chart coordinates on the preimage of Exp.
//!
//! With s = |σ| = √|α| and θ' the upright angle (θ for α > 0, θ − π for α < 0):
//!
//! * N₁ (C₁): sin(θ'/2) = k sn ψ, cos(θ'/2) = dn ψ, c = 2ks cn ψ, ψ̇ = s;
//!   p = st/2, ψ(0) = τ − p.
//! * N₂ (C₂): θ'/2 = ± am ψ, c = ±(2s/k) dn ψ, ψ̇ = s/k; p = st/(2k).
//! * N₃ (C₃): θ'/2 = ± gd ψ, c = ±2s sech ψ, ψ̇ = s; p = st/2.
//!
//! The sign on N₂, N₃ is the (constant) sign of c, carried as `sign_c`.
//! u₁ = am p, u₂ = am τ, with u₂ reduced mod 2π on N₁ and mod π on N₂.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{
    classify_with, normalize_angle, upright_angle, wrap, Covector, CovectorKind, EPS_CLASS,
};
use crate::elliptic::{self, Modulus};
use crate::error::{Error, Result};
use crate::group::Reflection;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "chart")]
pub enum ChartPoint {
    N1 {
        k: f64,
        u1: f64,
        u2: f64,
        sigma: f64,
    },
    N2 {
        k: f64,
        u1: f64,
        u2: f64,
        sigma: f64,
        sign_c: i8,
    },
    N3 {
        p: f64,
        tau: f64,
        sigma: f64,
        sign_c: i8,
    },
    N6 {
        theta: f64,
        c: f64,
        t: f64,
    },
    N7 {
        theta: f64,
        t: f64,
    },
}

fn open_modulus(k: f64) -> Result<Modulus> {
    if k > 0.0 {
        Modulus::new(k)
    } else {
        Err(Error::Domain {
            what: "chart modulus",
            value: k,
        })
    }
}

fn nonzero(what: &'static str, v: f64) -> Result<()> {
    if v != 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { what, value: v })
    }
}

fn nonnegative(what: &'static str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { what, value: v })
    }
}

fn sign_of(what: &'static str, s: i8) -> Result<f64> {
    match s {
        1 => Ok(1.0),
        -1 => Ok(-1.0),
        _ => Err(Error::Domain {
            what,
            value: s as f64,
        }),
    }
}

/// Undo the upright shift: θ = θ' for σ > 0, θ' + π for σ < 0.
fn assemble(theta_up: f64, c: f64, sigma: f64) -> Covector {
    if sigma > 0.0 {
        Covector::new(theta_up, c, sigma * sigma)
    } else {
        Covector::new(theta_up + PI, c, -sigma * sigma)
    }
}

/// Gudermannian gd ψ = atan(sinh ψ).
fn gd(x: f64) -> f64 {
    x.sinh().atan()
}

/// (λ, t) of a chart point.
pub fn from_chart(nu: &ChartPoint) -> Result<(Covector, f64)> {
    match *nu {
        ChartPoint::N1 { k, u1, u2, sigma } => {
            let km = open_modulus(k)?;
            nonzero("sigma", sigma)?;
            nonnegative("u1", u1)?;
            let s = sigma.abs();
            let p = elliptic::incomplete_f(u1, km);
            let tau = elliptic::incomplete_f(u2, km);
            let (sn, cn, dn) = elliptic::jacobi(tau - p, km);
            let theta_up = 2.0 * (k * sn).atan2(dn);
            Ok((assemble(theta_up, 2.0 * k * s * cn, sigma), 2.0 * p / s))
        }
        ChartPoint::N2 {
            k,
            u1,
            u2,
            sigma,
            sign_c,
        } => {
            let km = open_modulus(k)?;
            nonzero("sigma", sigma)?;
            nonnegative("u1", u1)?;
            let dir = sign_of("sign_c", sign_c)?;
            let s = sigma.abs();
            let p = elliptic::incomplete_f(u1, km);
            let tau = elliptic::incomplete_f(u2, km);
            let psi0 = tau - p;
            let a = elliptic::am(psi0, km);
            let dn = (1.0 - k * k * a.sin().powi(2)).sqrt();
            let theta_up = dir * 2.0 * a;
            Ok((
                assemble(theta_up, dir * 2.0 * s / k * dn, sigma),
                2.0 * k * p / s,
            ))
        }
        ChartPoint::N3 {
            p,
            tau,
            sigma,
            sign_c,
        } => {
            nonzero("sigma", sigma)?;
            nonnegative("p", p)?;
            let dir = sign_of("sign_c", sign_c)?;
            let s = sigma.abs();
            let psi0 = tau - p;
            let theta_up = dir * 2.0 * gd(psi0);
            Ok((
                assemble(theta_up, dir * 2.0 * s / psi0.cosh(), sigma),
                2.0 * p / s,
            ))
        }
        ChartPoint::N6 { theta, c, t } => {
            nonzero("c", c)?;
            nonnegative("t", t)?;
            Ok((Covector::new(theta, c, 0.0), t))
        }
        ChartPoint::N7 { theta, t } => {
            nonnegative("t", t)?;
            Ok((Covector::new(theta, 0.0, 0.0), t))
        }
    }
}

pub fn to_chart(lambda: &Covector, t: f64) -> Result<ChartPoint> {
    to_chart_with(lambda, t, EPS_CLASS)
}

/// Chart coordinates of (λ, t). C₄ and C₅ map to N₇: their trajectories are
/// the straight lines of C₇.
pub fn to_chart_with(lambda: &Covector, t: f64, eps: f64) -> Result<ChartPoint> {
    nonnegative("t", t)?;
    let class = classify_with(lambda, eps);
    let s = lambda.alpha.abs().sqrt();
    let sigma = lambda.alpha.signum() * s;
    let theta_up = upright_angle(lambda);
    match class.kind {
        CovectorKind::C1 => {
            let k = class.k.unwrap_or(0.0);
            let km = open_modulus(k)?;
            let amp0 = ((theta_up / 2.0).sin() / k).atan2(lambda.c / (2.0 * k * s));
            let psi0 = elliptic::incomplete_f(amp0, km);
            let p = 0.5 * s * t;
            Ok(ChartPoint::N1 {
                k,
                u1: elliptic::am(p, km),
                u2: wrap(elliptic::am(psi0 + p, km), 2.0 * PI),
                sigma,
            })
        }
        CovectorKind::C2 => {
            let k = class.k.unwrap_or(0.0);
            let km = open_modulus(k)?;
            let dir = lambda.c.signum();
            let psi0 = elliptic::incomplete_f(dir * theta_up / 2.0, km);
            let p = 0.5 * s * t / k;
            Ok(ChartPoint::N2 {
                k,
                u1: elliptic::am(p, km),
                u2: wrap(elliptic::am(psi0 + p, km), PI),
                sigma,
                sign_c: dir as i8,
            })
        }
        CovectorKind::C3 => {
            let dir = lambda.c.signum();
            let psi0 = (dir * (theta_up / 2.0).sin()).atanh();
            let p = 0.5 * s * t;
            Ok(ChartPoint::N3 {
                p,
                tau: psi0 + p,
                sigma,
                sign_c: dir as i8,
            })
        }
        CovectorKind::C6 => Ok(ChartPoint::N6 {
            theta: lambda.theta,
            c: lambda.c,
            t,
        }),
        CovectorKind::C4 | CovectorKind::C5 | CovectorKind::C7 => Ok(ChartPoint::N7 {
            theta: lambda.theta,
            t,
        }),
    }
}

impl ChartPoint {
    /// Chart-level form of the preimage reflections: ε¹ sends τ ↦ 2K − τ on N₁
    /// (u₂ ↦ π − u₂) and τ ↦ −τ with the sign of c flipped on N₂, N₃; ε² sends
    /// τ ↦ −τ; ε⁴ sends σ ↦ −σ.
    pub fn reflect(&self, r: Reflection) -> ChartPoint {
        let mut nu = *self;
        if r.has_e4() {
            nu = match nu {
                ChartPoint::N1 { k, u1, u2, sigma } => ChartPoint::N1 {
                    k,
                    u1,
                    u2,
                    sigma: -sigma,
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
                    sigma: -sigma,
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
                    sigma: -sigma,
                    sign_c,
                },
                ChartPoint::N6 { theta, c, t } => ChartPoint::N6 {
                    theta: normalize_angle(theta + PI),
                    c,
                    t,
                },
                ChartPoint::N7 { theta, t } => ChartPoint::N7 {
                    theta: normalize_angle(theta + PI),
                    t,
                },
            };
        }
        if r.has_e2() {
            nu = match nu {
                ChartPoint::N1 { k, u1, u2, sigma } => ChartPoint::N1 {
                    k,
                    u1,
                    u2: wrap(-u2, 2.0 * PI),
                    sigma,
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
                    u2: wrap(-u2, PI),
                    sigma,
                    sign_c,
                },
                ChartPoint::N3 {
                    p,
                    tau,
                    sigma,
                    sign_c,
                } => ChartPoint::N3 {
                    p,
                    tau: -tau,
                    sigma,
                    sign_c,
                },
                ChartPoint::N6 { theta, c, t } => ChartPoint::N6 {
                    theta: normalize_angle(-(theta + c * t)),
                    c,
                    t,
                },
                ChartPoint::N7 { theta, t } => ChartPoint::N7 {
                    theta: normalize_angle(-theta),
                    t,
                },
            };
        }
        if r.has_e1() {
            nu = match nu {
                ChartPoint::N1 { k, u1, u2, sigma } => ChartPoint::N1 {
                    k,
                    u1,
                    u2: wrap(PI - u2, 2.0 * PI),
                    sigma,
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
                    u2: wrap(-u2, PI),
                    sigma,
                    sign_c: -sign_c,
                },
                ChartPoint::N3 {
                    p,
                    tau,
                    sigma,
                    sign_c,
                } => ChartPoint::N3 {
                    p,
                    tau: -tau,
                    sigma,
                    sign_c: -sign_c,
                },
                ChartPoint::N6 { theta, c, t } => ChartPoint::N6 {
                    theta: normalize_angle(theta + c * t),
                    c: -c,
                    t,
                },
                ChartPoint::N7 { theta, t } => ChartPoint::N7 { theta, t },
            };
        }
        nu
    }

    pub fn name(&self) -> &'static str {
        match self {
            ChartPoint::N1 { .. } => "N1",
            ChartPoint::N2 { .. } => "N2",
            ChartPoint::N3 { .. } => "N3",
            ChartPoint::N6 { .. } => "N6",
            ChartPoint::N7 { .. } => "N7",
        }
    }

    /// Parameters in declaration order.
    pub fn params(&self) -> Vec<f64> {
        match *self {
            ChartPoint::N1 { k, u1, u2, sigma } => vec![k, u1, u2, sigma],
            ChartPoint::N2 {
                k,
                u1,
                u2,
                sigma,
                sign_c,
            } => vec![k, u1, u2, sigma, sign_c as f64],
            ChartPoint::N3 {
                p,
                tau,
                sigma,
                sign_c,
            } => vec![p, tau, sigma, sign_c as f64],
            ChartPoint::N6 { theta, c, t } => vec![theta, c, t],
            ChartPoint::N7 { theta, t } => vec![theta, t],
        }
    }
}
