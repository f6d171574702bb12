//! Adaptive integration of the normal extremal flow.
//!
//! State layout is (x, y, z, w, θ, c) with α a parameter:
//! ẋ = −sin θ, ẏ = cos θ, ż = (x cos θ + y sin θ)/2, ẇ = x² cos θ / 2,
//! θ̇ = c, ċ = −α sin θ.

use ode_solvers::dop853::Dop853;
use ode_solvers::{OutputType, SVector, System};

use crate::error::{Error, Result};

pub const RTOL: f64 = 1e-10;
pub const ATOL: f64 = 1e-12;

pub type State = [f64; 6];

/// ∂(state)/∂(θ₀, c₀, α), row per state component.
pub type Sensitivity = [[f64; 3]; 6];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rtol: RTOL,
            atol: ATOL,
        }
    }
}

struct Extremal {
    alpha: f64,
}

#[inline]
pub(crate) fn rhs(alpha: f64, y: &[f64]) -> State {
    let (s, c) = y[4].sin_cos();
    [
        -s,
        c,
        0.5 * (y[0] * c + y[1] * s),
        0.5 * y[0] * y[0] * c,
        y[5],
        -alpha * s,
    ]
}

impl System<f64, SVector<f64, 6>> for Extremal {
    fn system(&self, _t: f64, y: &SVector<f64, 6>, dy: &mut SVector<f64, 6>) {
        let f = rhs(self.alpha, y.as_slice());
        dy.copy_from_slice(&f);
    }
}

/// Extremal flow plus its first variation with respect to (θ₀, c₀, α).
struct Variational {
    alpha: f64,
}

impl System<f64, SVector<f64, 24>> for Variational {
    fn system(&self, _t: f64, y: &SVector<f64, 24>, dy: &mut SVector<f64, 24>) {
        let v = y.as_slice();
        let f = rhs(self.alpha, v);
        dy.as_mut_slice()[..6].copy_from_slice(&f);
        let (x, yy, th) = (v[0], v[1], v[4]);
        let (s, c) = th.sin_cos();
        for j in 0..3 {
            let col = |i: usize| v[6 + 6 * j + i];
            let (dx, dyy, dth, dc) = (col(0), col(1), col(4), col(5));
            let out = &mut dy.as_mut_slice()[6 + 6 * j..12 + 6 * j];
            out[0] = -c * dth;
            out[1] = -s * dth;
            out[2] = 0.5 * (c * dx + s * dyy + (yy * c - x * s) * dth);
            out[3] = c * x * dx - 0.5 * s * x * x * dth;
            out[4] = dc;
            out[5] = -self.alpha * c * dth - if j == 2 { s } else { 0.0 };
        }
    }
}

pub(crate) fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "integration time",
            value: t,
        })
    }
}

fn run<const N: usize, F>(
    f: F,
    y0: SVector<f64, N>,
    t: f64,
    tol: Tolerance,
) -> Result<SVector<f64, N>>
where
    F: System<f64, SVector<f64, N>>,
{
    check_time(t)?;
    if t == 0.0 {
        return Ok(y0);
    }
    let mut solver = Dop853::new(f, 0.0, t, t, y0, tol.rtol, tol.atol);
    solver.set_output(OutputType::Sparse);
    solver
        .integrate()
        .map_err(|e| Error::Integration(e.to_string()))?;
    solver
        .y_out()
        .last()
        .cloned()
        .ok_or_else(|| Error::Integration("empty solution".into()))
}

/// Integrates the extremal from `y0` over [0, t].
pub fn flow(alpha: f64, y0: State, t: f64, tol: Tolerance) -> Result<State> {
    let y = run(Extremal { alpha }, SVector::from(y0), t, tol)?;
    Ok(std::array::from_fn(|i| y[i]))
}

/// States at the increasing sample times `ts` (each ≥ 0).
pub fn flow_samples(alpha: f64, y0: State, ts: &[f64], tol: Tolerance) -> Result<Vec<State>> {
    let mut out = Vec::with_capacity(ts.len());
    let mut y = y0;
    let mut t_prev = 0.0;
    for &t in ts {
        if t < t_prev {
            return Err(Error::Domain {
                what: "sample time (must be increasing)",
                value: t,
            });
        }
        y = flow(alpha, y, t - t_prev, tol)?;
        t_prev = t;
        out.push(y);
    }
    Ok(out)
}

/// Endpoint and its sensitivity to (θ₀, c₀, α).
pub fn flow_with_sensitivity(
    alpha: f64,
    y0: State,
    t: f64,
    tol: Tolerance,
) -> Result<(State, Sensitivity)> {
    let mut v = SVector::<f64, 24>::zeros();
    v.as_mut_slice()[..6].copy_from_slice(&y0);
    // ∂θ/∂θ₀ = 1, ∂c/∂c₀ = 1
    v[6 + 4] = 1.0;
    v[12 + 5] = 1.0;
    let y = run(Variational { alpha }, v, t, tol)?;
    let state = std::array::from_fn(|i| y[i]);
    let sens = std::array::from_fn(|i| std::array::from_fn(|j| y[6 + 6 * j + i]));
    Ok((state, sens))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Classical RK4 with a fixed tiny step, independent of the adaptive solver.
    fn rk4(alpha: f64, y0: State, t: f64, n: usize) -> State {
        let h = t / n as f64;
        let mut y = y0;
        for _ in 0..n {
            let k1 = rhs(alpha, &y);
            let k2 = rhs(
                alpha,
                &std::array::from_fn::<f64, 6, _>(|i| y[i] + 0.5 * h * k1[i]),
            );
            let k3 = rhs(
                alpha,
                &std::array::from_fn::<f64, 6, _>(|i| y[i] + 0.5 * h * k2[i]),
            );
            let k4 = rhs(
                alpha,
                &std::array::from_fn::<f64, 6, _>(|i| y[i] + h * k3[i]),
            );
            y = std::array::from_fn(|i| {
                y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            });
        }
        y
    }

    #[test]
    fn matches_fixed_step_oracle() {
        let y0 = [0.0, 0.0, 0.0, 0.0, 0.3, 0.2];
        let a = flow(1.5, y0, 2.0, Tolerance::default()).unwrap();
        let b = rk4(1.5, y0, 2.0, 20_000);
        for i in 0..6 {
            assert!((a[i] - b[i]).abs() < 1e-10, "{i}: {} vs {}", a[i], b[i]);
        }
    }

    #[test]
    fn samples_are_consistent_with_single_run() {
        let y0 = [0.0, 0.0, 0.0, 0.0, -1.0, 0.7];
        let s = flow_samples(0.4, y0, &[0.5, 1.0, 3.0], Tolerance::default()).unwrap();
        let direct = flow(0.4, y0, 3.0, Tolerance::default()).unwrap();
        for i in 0..6 {
            assert!((s[2][i] - direct[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn sensitivity_matches_finite_differences() {
        let (th, c, al, t) = (0.4, 0.9, -0.7, 2.5);
        let y0 = [0.0, 0.0, 0.0, 0.0, th, c];
        let (_, j) = flow_with_sensitivity(al, y0, t, Tolerance::default()).unwrap();
        let h = 1e-6;
        let fd = |d: [f64; 3]| {
            let p = flow(
                al + d[2],
                [0.0, 0.0, 0.0, 0.0, th + d[0], c + d[1]],
                t,
                Tolerance::default(),
            )
            .unwrap();
            let m = flow(
                al - d[2],
                [0.0, 0.0, 0.0, 0.0, th - d[0], c - d[1]],
                t,
                Tolerance::default(),
            )
            .unwrap();
            std::array::from_fn::<f64, 6, _>(|i| (p[i] - m[i]) / (2.0 * h))
        };
        let cols = [fd([h, 0.0, 0.0]), fd([0.0, h, 0.0]), fd([0.0, 0.0, h])];
        for (jj, col) in cols.iter().enumerate() {
            for i in 0..6 {
                assert!(
                    (j[i][jj] - col[i]).abs() < 1e-5,
                    "d{i}/d{jj}: {} vs {}",
                    j[i][jj],
                    col[i]
                );
            }
        }
    }

    #[test]
    fn zero_time_and_bad_time() {
        let y0 = [1.0, 2.0, 3.0, 4.0, 0.5, 0.1];
        assert_eq!(flow(1.0, y0, 0.0, Tolerance::default()).unwrap(), y0);
        assert!(flow(1.0, y0, -1.0, Tolerance::default()).is_err());
        assert!(flow(1.0, y0, f64::NAN, Tolerance::default()).is_err());
    }
}
