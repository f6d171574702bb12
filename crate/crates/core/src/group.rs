//! State model of the Engel group: control dynamics, dilations and the
//! reflection group ℤ₂³ acting on states.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub w: f64,
}

impl Point {
    pub const ORIGIN: Point = Point {
        x: 0.0,
        y: 0.0,
        z: 0.0,
        w: 0.0,
    };

    pub const fn new(x: f64, y: f64, z: f64, w: f64) -> Self {
        Point { x, y, z, w }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x, self.y, self.z, self.w]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Point::new(a[0], a[1], a[2], a[3])
    }

    pub fn is_origin(self) -> bool {
        self == Point::ORIGIN
    }

    pub fn is_finite(self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }

    /// Euclidean distance in coordinates.
    pub fn dist(self, o: Point) -> f64 {
        let d = [self.x - o.x, self.y - o.y, self.z - o.z, self.w - o.w];
        d.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Homogeneous norm (x⁶ + y⁶ + |z|³ + w²)^{1/6}; dilate(ρ) scales it by ρ.
    pub fn homogeneous_norm(self) -> f64 {
        let scale = self
            .x
            .abs()
            .max(self.y.abs())
            .max(self.z.abs().sqrt())
            .max(self.w.abs().cbrt());
        if scale == 0.0 {
            return 0.0;
        }
        // factor out the dominant weight to avoid overflow in the sixth powers
        let q = dilate(1.0 / scale, self);
        let s = q.x.powi(6) + q.y.powi(6) + q.z.abs().powi(3) + q.w * q.w;
        scale * s.powf(1.0 / 6.0)
    }

    /// Representative with unit homogeneous norm, and the norm itself.
    pub fn normalized(self) -> (Point, f64) {
        let r = self.homogeneous_norm();
        (dilate(1.0 / r, self), r)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:.16e},{:.16e},{:.16e},{:.16e}",
            self.x, self.y, self.z, self.w
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Control {
    pub u1: f64,
    pub u2: f64,
}

/// q̇ = u₁X₁(q) + u₂X₂(q), returned as a rate in Point layout.
pub fn dynamics(q: Point, u: Control) -> Point {
    Point::new(
        u.u1,
        u.u2,
        0.5 * (u.u2 * q.x - u.u1 * q.y),
        0.5 * u.u2 * q.x * q.x,
    )
}

/// The dilation e^{tX₀} with ρ = e^t: weights 1, 1, 2, 3.
pub fn dilate(rho: f64, q: Point) -> Point {
    Point::new(rho * q.x, rho * q.y, rho * rho * q.z, rho * rho * rho * q.w)
}

/// Elements of the reflection group. Only ε¹, ε², ε⁴ are generators; the
/// composites are labeled ε³ = ε¹ε², ε⁵ = ε¹ε⁴, ε⁶ = ε²ε⁴, ε⁷ = ε¹ε²ε⁴.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Reflection(u8);

impl Reflection {
    pub const ID: Reflection = Reflection(0);
    pub const E1: Reflection = Reflection(1);
    pub const E2: Reflection = Reflection(2);
    pub const E3: Reflection = Reflection(3);
    pub const E4: Reflection = Reflection(4);
    pub const E5: Reflection = Reflection(5);
    pub const E6: Reflection = Reflection(6);
    pub const E7: Reflection = Reflection(7);

    pub fn new(i: u8) -> Result<Self> {
        if (1..=7).contains(&i) {
            Ok(Reflection(i))
        } else {
            Err(Error::Domain {
                what: "reflection index",
                value: i as f64,
            })
        }
    }

    pub fn index(self) -> u8 {
        self.0
    }

    /// Generator bits: 1 → ε¹, 2 → ε², 4 → ε⁴.
    fn bits(self) -> u8 {
        match self.0 {
            0 => 0,
            1 => 1,
            2 => 2,
            3 => 1 | 2,
            4 => 4,
            5 => 1 | 4,
            6 => 2 | 4,
            _ => 1 | 2 | 4,
        }
    }

    fn from_bits(b: u8) -> Self {
        match b {
            0 => Reflection(0),
            1 => Reflection(1),
            2 => Reflection(2),
            3 => Reflection(3),
            4 => Reflection(4),
            5 => Reflection(5),
            6 => Reflection(6),
            _ => Reflection(7),
        }
    }

    pub fn compose(self, o: Reflection) -> Reflection {
        Reflection::from_bits(self.bits() ^ o.bits())
    }

    pub fn has_e1(self) -> bool {
        self.bits() & 1 != 0
    }

    pub fn has_e2(self) -> bool {
        self.bits() & 2 != 0
    }

    pub fn has_e4(self) -> bool {
        self.bits() & 4 != 0
    }

    pub fn apply(self, q: Point) -> Point {
        let mut q = q;
        if self.has_e4() {
            q = eps4(q);
        }
        if self.has_e2() {
            q = eps2(q);
        }
        if self.has_e1() {
            q = eps1(q);
        }
        q
    }
}

fn eps1(q: Point) -> Point {
    Point::new(q.x, q.y, -q.z, q.w - q.x * q.z)
}

fn eps2(q: Point) -> Point {
    Point::new(-q.x, q.y, q.z, q.w - q.x * q.z)
}

fn eps4(q: Point) -> Point {
    Point::new(-q.x, -q.y, q.z, -q.w)
}

/// ε^i(q) for i ∈ 1..=7.
pub fn reflect(i: u8, q: Point) -> Result<Point> {
    Ok(Reflection::new(i)?.apply(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn dynamics_examples() {
        let o = Point::ORIGIN;
        assert_eq!(
            dynamics(o, Control { u1: 1.0, u2: 0.0 }),
            Point::new(1.0, 0.0, 0.0, 0.0)
        );
        assert_eq!(
            dynamics(Point::new(2.0, 0.0, 0.0, 0.0), Control { u1: 0.0, u2: 1.0 }),
            Point::new(0.0, 1.0, 1.0, 2.0)
        );
        assert_eq!(
            dynamics(Point::new(0.0, 3.0, 0.0, 0.0), Control { u1: 1.0, u2: 0.0 }),
            Point::new(1.0, 0.0, -1.5, 0.0)
        );
    }

    #[test]
    fn dilate_examples() {
        let q = Point::new(1.0, 1.0, 1.0, 1.0);
        assert_eq!(dilate(1.0, q), q);
        assert_eq!(dilate(2.0, q), Point::new(2.0, 2.0, 4.0, 8.0));
    }

    #[test]
    fn dilation_is_flow_of_euler_field() {
        // RK4 on q̇ = (x, y, 2z, 3w) for time 0.3
        let q0 = [0.7, -1.2, 0.4, 2.5];
        let f = |q: [f64; 4]| [q[0], q[1], 2.0 * q[2], 3.0 * q[3]];
        let n = 2000;
        let h = 0.3 / n as f64;
        let mut q = q0;
        for _ in 0..n {
            let k1 = f(q);
            let k2 = f(std::array::from_fn(|i| q[i] + 0.5 * h * k1[i]));
            let k3 = f(std::array::from_fn(|i| q[i] + 0.5 * h * k2[i]));
            let k4 = f(std::array::from_fn(|i| q[i] + h * k3[i]));
            q = std::array::from_fn(|i| {
                q[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            });
        }
        let d = dilate(0.3f64.exp(), Point::from_array(q0));
        assert!(d.dist(Point::from_array(q)) < 1e-12);
    }

    #[test]
    fn reflection_examples() {
        let q = Point::new(1.0, 2.0, 3.0, 4.0);
        assert_eq!(reflect(1, q).unwrap(), Point::new(1.0, 2.0, -3.0, 1.0));
        assert!(reflect(0, q).is_err());
        assert!(reflect(8, q).is_err());
    }

    #[test]
    fn composite_e3() {
        let q = Point::new(0.3, -1.1, 0.8, 2.0);
        let a = Reflection::E1.apply(Reflection::E2.apply(q));
        let b = Reflection::E2.apply(Reflection::E1.apply(q));
        assert!(a.dist(b) < 1e-15);
        assert_eq!(a, Point::new(-q.x, q.y, -q.z, q.w));
        assert!(Reflection::E3.apply(q).dist(a) < 1e-15);
    }

    #[test]
    fn fixed_planes() {
        let qz = Point::new(0.4, 1.0, 0.0, -2.0);
        assert_eq!(Reflection::E1.apply(qz), qz);
        let qx = Point::new(0.0, 1.0, 0.7, -2.0);
        assert_eq!(Reflection::E2.apply(qx), qx);
    }

    fn point() -> impl Strategy<Value = Point> {
        (-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64)
            .prop_map(|(x, y, z, w)| Point::new(x, y, z, w))
    }

    proptest! {
        #[test]
        fn reflections_are_involutions(q in point(), i in 1u8..=7) {
            let r = Reflection::new(i).unwrap();
            prop_assert!(r.apply(r.apply(q)).dist(q) < 1e-12);
        }

        #[test]
        fn group_closure(q in point(), i in 1u8..=7, j in 1u8..=7) {
            let (a, b) = (Reflection::new(i).unwrap(), Reflection::new(j).unwrap());
            let lhs = a.apply(b.apply(q));
            let rhs = a.compose(b).apply(q);
            prop_assert!(lhs.dist(rhs) < 1e-12);
        }

        #[test]
        fn dilations_compose(q in point(), r1 in 0.1..4.0f64, r2 in 0.1..4.0f64) {
            let a = dilate(r1, dilate(r2, q));
            let b = dilate(r1 * r2, q);
            prop_assert!(a.dist(b) <= 1e-12 * (1.0 + b.dist(Point::ORIGIN)));
        }

        #[test]
        fn homogeneous_norm_scales(q in point(), r in 0.1..10.0f64) {
            let n = q.homogeneous_norm();
            prop_assert!((dilate(r, q).homogeneous_norm() - r * n).abs() <= 1e-12 * r * n.max(1e-300));
        }
    }
}
