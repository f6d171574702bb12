//! Shooting off the cut locus: Levenberg–Marquardt on (θ, c, α, t) ↦ Exp(λ, t)
//! for a target of unit homogeneous norm.
//!
//! Starts come from a table of optimal geodesics (t below 0.97·t_cut) whose
//! endpoints were dilated to unit norm, nearest endpoint first. The first
//! converged solution with t ≤ t_cut is the minimizer: a geodesic is optimal
//! up to its cut time, and off the cut locus only one reaches the point.
//!
//! When the nearest starts fail, the solution is continued along the segment
//! from a table endpoint with the same signs of x and z. The cut locus lies in
//! the planes x = 0 and z = 0, so the segment never crosses it and the
//! minimizer depends continuously on the point along the way.

use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::{Matrix4, Vector4};

use crate::cutlocus::t_cut;
use crate::error::{Error, Result};
use crate::expmap::Covector;
use crate::group::{Point, Reflection};
use crate::ode::{flow_samples, flow_with_sensitivity, rhs, Tolerance};

/// Relative slack on t ≤ t_cut, for times that equal t_cut up to rounding.
pub(crate) const CUT_SLACK: f64 = 1e-9;

const N_THETA: usize = 24;
const C_GRID: [f64; 16] = [
    -4.0, -3.0, -2.2, -1.6, -1.1, -0.7, -0.35, -0.1, 0.1, 0.35, 0.7, 1.1, 1.6, 2.2, 3.0, 4.0,
];
const N_TIME: usize = 12;
const CUT_MARGIN: f64 = 0.97;
/// Longest table time on α = ±1, reached only where t_cut is larger.
const T_MAX: f64 = 4.0 * PI;

const MAX_ITER: usize = 60;
/// Direct starts tried before continuation.
const DIRECT: usize = 8;
/// Continuation paths tried, each from a different table endpoint.
const PATHS: usize = 4;
/// Residual accepted at intermediate continuation targets.
const PATH_TOL: f64 = 1e-9;
/// Smallest continuation step, as a fraction of the segment.
const MIN_STEP: f64 = 1e-5;
/// Residual at which the iteration stops improving in double precision.
const RES_FLOOR: f64 = 1e-13;

struct Start {
    lambda: Covector,
    t: f64,
    p: [f64; 4],
}

fn push_run(out: &mut Vec<Start>, lambda: Covector, t_max: f64) -> Result<()> {
    let ts: Vec<f64> = (1..=N_TIME)
        .map(|i| t_max * i as f64 / N_TIME as f64)
        .collect();
    let states = flow_samples(
        lambda.alpha,
        [0.0, 0.0, 0.0, 0.0, lambda.theta, lambda.c],
        &ts,
        Tolerance::default(),
    )?;
    for (t, s) in ts.into_iter().zip(states) {
        let (p, h) = Point::new(s[0], s[1], s[2], s[3]).normalized();
        if !(h > 0.0 && h.is_finite()) {
            continue;
        }
        out.push(Start {
            lambda: lambda.dilated(1.0 / h),
            t: t / h,
            p: p.to_array(),
        });
        // the ε⁴ image comes for free
        let mirrored = Covector::new(lambda.theta + PI, lambda.c, -lambda.alpha);
        out.push(Start {
            lambda: mirrored.dilated(1.0 / h),
            t: t / h,
            p: Reflection::E4.apply(p).to_array(),
        });
    }
    Ok(())
}

fn build_table() -> Result<Vec<Start>> {
    let mut out = Vec::new();
    let thetas = (0..N_THETA).map(|i| -PI + 2.0 * PI * (i as f64 + 0.5) / N_THETA as f64);
    for theta in thetas.clone() {
        for c in C_GRID {
            let l = Covector::new(theta, c, 1.0);
            push_run(&mut out, l, (CUT_MARGIN * t_cut(&l)?).min(T_MAX))?;
        }
        for c in [-1.0, 1.0] {
            push_run(
                &mut out,
                Covector::new(theta, c, 0.0),
                CUT_MARGIN * 2.0 * PI,
            )?;
        }
        push_run(&mut out, Covector::new(theta, 0.0, 0.0), 1.0)?;
    }
    Ok(out)
}

fn table() -> &'static [Start] {
    static CELL: OnceLock<Vec<Start>> = OnceLock::new();
    CELL.get_or_init(|| build_table().expect("start table integrates on a fixed grid"))
}

/// Converged (λ, t) and its endpoint residual.
#[derive(Clone, Copy, Debug)]
pub(super) struct Shot {
    pub lambda: Covector,
    pub t: f64,
    pub residual: f64,
}

/// Mismatch Exp(λ, t) − q and its Jacobian in (θ, c, α, t).
fn eval(v: &Vector4<f64>, q: &[f64; 4]) -> Result<(Vector4<f64>, Matrix4<f64>)> {
    let (state, sens) = flow_with_sensitivity(
        v[2],
        [0.0, 0.0, 0.0, 0.0, v[0], v[1]],
        v[3],
        Tolerance::default(),
    )?;
    let rate = rhs(v[2], &state);
    let f = Vector4::from_fn(|i, _| state[i] - q[i]);
    let j = Matrix4::from_fn(|i, k| if k < 3 { sens[i][k] } else { rate[i] });
    Ok((f, j))
}

/// Levenberg–Marquardt from (λ, t), with Marquardt's diagonal scaling.
pub(super) fn polish(q: Point, lambda: Covector, t: f64) -> Result<Shot> {
    let q = q.to_array();
    let mut v = Vector4::new(lambda.theta, lambda.c, lambda.alpha, t);
    let (mut f, mut j) = eval(&v, &q)?;
    let mut mu = 1e-6;
    for _ in 0..MAX_ITER {
        if f.norm() <= RES_FLOOR || mu > 1e10 {
            break;
        }
        let jtj = j.transpose() * j;
        let mut a = jtj;
        for i in 0..4 {
            a[(i, i)] += mu * jtj[(i, i)].max(1e-12);
        }
        let Some(step) = a.lu().solve(&(-(j.transpose() * f))) else {
            mu *= 10.0;
            continue;
        };
        let trial = v + step;
        if !(trial[3] > 0.0) || !trial.iter().all(|x| x.is_finite()) {
            mu *= 10.0;
            continue;
        }
        match eval(&trial, &q) {
            Ok((ft, jt)) if ft.norm() < f.norm() => {
                v = trial;
                f = ft;
                j = jt;
                mu = (mu / 5.0).max(1e-12);
            }
            _ => mu *= 4.0,
        }
    }
    Ok(Shot {
        lambda: Covector::new(v[0], v[1], v[2]),
        t: v[3],
        residual: f.norm(),
    })
}

/// t ≤ t_cut(λ) up to [`CUT_SLACK`]; false where t_cut cannot be evaluated.
pub(crate) fn within_cut(lambda: &Covector, t: f64) -> bool {
    t_cut(lambda)
        .map(|tc| t <= tc * (1.0 + CUT_SLACK))
        .unwrap_or(false)
}

fn same_orthant(p: &[f64; 4], q: &[f64; 4]) -> bool {
    [0, 2].iter().all(|&i| q[i] == 0.0 || p[i] * q[i] > 0.0)
}

/// Follows the solution from table entry `s` to q along the segment between
/// their endpoints, halving the step when a polish fails. Each polish starts
/// from the secant through the last two accepted solutions.
fn continue_from(s: &Start, q: &[f64; 4], tol: f64) -> Option<Shot> {
    let pack = |l: &Covector, t: f64| Vector4::new(l.theta, l.c, l.alpha, t);
    let mut cur = pack(&s.lambda, s.t);
    let mut prev: Option<(f64, Vector4<f64>)> = None;
    let (mut at, mut step) = (0.0f64, 1.0f64);
    while step >= MIN_STEP {
        let next = (at + step).min(1.0);
        let target = Point::from_array(std::array::from_fn(|i| s.p[i] + next * (q[i] - s.p[i])));
        let goal = if next == 1.0 { tol } else { PATH_TOL };
        let guess = match prev {
            Some((a0, v0)) => cur + (cur - v0) * ((next - at) / (at - a0)),
            None => cur,
        };
        let guess = if guess[3] > 0.0 { guess } else { cur };
        let shot = polish(
            target,
            Covector::new(guess[0], guess[1], guess[2]),
            guess[3],
        );
        match shot {
            Ok(shot) if shot.residual <= goal && within_cut(&shot.lambda, shot.t) => {
                if next == 1.0 {
                    return Some(shot);
                }
                prev = Some((at, cur));
                (cur, at) = (pack(&shot.lambda, shot.t), next);
                step *= 2.0;
            }
            _ => step /= 2.0,
        }
    }
    None
}

/// The minimizer to a unit-norm point q off the cut locus.
pub(super) fn shoot(q: Point, tol: f64, max_starts: usize) -> Result<Shot> {
    let qa = q.to_array();
    let tab = table();
    let mut order: Vec<(f64, usize)> = tab
        .iter()
        .enumerate()
        .map(|(i, s)| (s.p.iter().zip(&qa).map(|(a, b)| (a - b) * (a - b)).sum(), i))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = f64::INFINITY;
    for &(_, i) in order.iter().take(max_starts.min(DIRECT)) {
        let s = &tab[i];
        let Ok(shot) = polish(q, s.lambda, s.t) else {
            continue;
        };
        if shot.residual <= tol && within_cut(&shot.lambda, shot.t) {
            return Ok(shot);
        }
        if within_cut(&shot.lambda, shot.t) {
            best = best.min(shot.residual);
        }
    }
    let paths = order
        .iter()
        .filter(|(_, i)| same_orthant(&tab[*i].p, &qa))
        .take(PATHS);
    if let Some(shot) = paths
        .into_iter()
        .find_map(|&(_, i)| continue_from(&tab[i], &qa, tol))
    {
        return Ok(shot);
    }
    for &(_, i) in order.iter().take(max_starts).skip(DIRECT) {
        let Ok(shot) = polish(q, tab[i].lambda, tab[i].t) else {
            continue;
        };
        if within_cut(&shot.lambda, shot.t) {
            if shot.residual <= tol {
                return Ok(shot);
            }
            best = best.min(shot.residual);
        }
    }
    Err(Error::NotReached {
        best_residual: best,
    })
}
