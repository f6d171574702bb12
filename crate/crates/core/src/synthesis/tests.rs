use std::f64::consts::PI;

use proptest::prelude::*;

use super::*;
use crate::cutlocus::{classify_point, u1z};
use crate::group::dilate;

fn endpoint(nu: ChartPoint) -> Point {
    let (l, t) = from_chart(&nu).unwrap();
    exp(&l, t).unwrap()
}

fn time(nu: ChartPoint) -> f64 {
    from_chart(&nu).unwrap().1
}

/// Every minimizer reaches q, all times agree, and the generating chart
/// point's time is the distance.
fn check_round_trip(nu: ChartPoint, expect: Multiplicity) -> SynthesisResult {
    let q = endpoint(nu);
    let res = minimizers(q, 1e-6).unwrap_or_else(|e| panic!("{nu:?} → {q}: {e}"));
    assert_eq!(res.multiplicity, expect, "{nu:?}: {}", res.stratum);
    let n = match expect {
        Multiplicity::Two => 2,
        _ => 1,
    };
    assert_eq!(res.minimizers.len(), n, "{nu:?}");
    for m in &res.minimizers {
        assert!(endpoint(m.nu).dist(q) <= 1e-6, "{nu:?}: {m:?}");
        assert!(m.residual <= 1e-6);
        assert!(
            (m.time - time(nu)).abs() <= 1e-9 * time(nu).max(1.0),
            "{nu:?}: {} vs {}",
            m.time,
            time(nu)
        );
        assert!(is_optimal(&m.nu).unwrap(), "{m:?}");
    }
    res
}

#[test]
fn figure_two_pair() {
    let nu = ChartPoint::N1 {
        k: 0.84,
        u1: PI,
        u2: PI / 2.0,
        sigma: 1.0,
    };
    let res = check_round_trip(nu, Multiplicity::Two);
    let got: Vec<Vec<f64>> = res.minimizers.iter().map(|m| m.nu.params()).collect();
    for (g, u2) in got.iter().zip([PI / 2.0, 3.0 * PI / 2.0]) {
        let want = [0.84, PI, u2, 1.0];
        assert!(
            g.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-9),
            "{g:?}"
        );
    }
}

#[test]
fn a_ray_is_a_straight_line() {
    let res = minimizers(Point::new(0.0, 2.0, 0.0, 0.0), 1e-9).unwrap();
    assert_eq!(res.minimizers.len(), 1);
    assert_eq!(res.minimizers[0].nu, ChartPoint::N7 { theta: 0.0, t: 2.0 });
    assert_eq!(distance(Point::new(0.0, -3.0, 0.0, 0.0)).unwrap(), 3.0);
}

#[test]
fn figure_eight_family() {
    for w in [1.0, -0.3] {
        let q = Point::new(0.0, 0.0, 0.0, w);
        let res = minimizers(q, 1e-6).unwrap();
        assert_eq!(res.multiplicity, Multiplicity::Family);
        assert_eq!(res.minimizers.len(), 32);
        let fam = res.family.unwrap();
        assert!(fam.sigma.signum() == w.signum());
        let t0 = res.minimizers[0].time;
        for m in &res.minimizers {
            assert!(endpoint(m.nu).dist(q) <= 1e-6, "{m:?}");
            assert!((m.time - t0).abs() <= 1e-12);
        }
    }
}

#[test]
fn i0_strata() {
    for k in [0.05, 0.3, 0.6, 0.85, 0.905] {
        for sigma in [0.7, -1.5] {
            check_round_trip(
                ChartPoint::N1 {
                    k,
                    u1: PI,
                    u2: PI / 2.0,
                    sigma,
                },
                Multiplicity::Two,
            );
        }
    }
    for k in [0.912, 0.95, 0.99] {
        for sigma in [0.7, -1.5] {
            let u1 = u1z(k).unwrap();
            check_round_trip(
                ChartPoint::N1 {
                    k,
                    u1,
                    u2: 0.0,
                    sigma,
                },
                Multiplicity::Two,
            );
        }
    }
}

#[test]
fn z_plane_strata() {
    for k in [0.92, 0.95, 0.99] {
        let u1 = u1z(k).unwrap();
        for sigma in [1.0, -0.6] {
            for u2 in [0.4, 1.2, 2.0, 2.9, 4.0, 5.5] {
                let res = check_round_trip(ChartPoint::N1 { k, u1, u2, sigma }, Multiplicity::Two);
                assert!(matches!(res.stratum, Stratum::Iz { .. }));
            }
            for u2 in [PI / 2.0, 3.0 * PI / 2.0] {
                let res = check_round_trip(ChartPoint::N1 { k, u1, u2, sigma }, Multiplicity::One);
                assert!(matches!(res.stratum, Stratum::CIz { .. }));
            }
        }
    }
}

#[test]
fn x_plane_strata() {
    for k in [0.1, 0.5, 0.85] {
        for sigma in [1.0, -2.0] {
            for u2 in [0.3, 1.2, 5.0, 5.9] {
                let res = check_round_trip(
                    ChartPoint::N1 {
                        k,
                        u1: PI,
                        u2,
                        sigma,
                    },
                    Multiplicity::Two,
                );
                assert!(matches!(res.stratum, Stratum::Ix { .. }));
            }
            let res = check_round_trip(
                ChartPoint::N1 {
                    k,
                    u1: PI,
                    u2: 0.0,
                    sigma,
                },
                Multiplicity::One,
            );
            assert!(
                matches!(res.stratum, Stratum::CIx { .. }),
                "{}",
                res.stratum
            );
        }
    }
    for k in [0.1, 0.6, 0.95] {
        for sigma in [1.0, -0.5] {
            for sign_c in [1, -1] {
                for u2 in [0.3, 1.0, 2.5] {
                    let nu = ChartPoint::N2 {
                        k,
                        u1: PI / 2.0,
                        u2,
                        sigma,
                        sign_c,
                    };
                    let res = check_round_trip(nu, Multiplicity::Two);
                    assert!(matches!(res.stratum, Stratum::Nx { .. }));
                }
                for u2 in [0.0, PI / 2.0] {
                    let nu = ChartPoint::N2 {
                        k,
                        u1: PI / 2.0,
                        u2,
                        sigma,
                        sign_c,
                    };
                    let res = check_round_trip(nu, Multiplicity::One);
                    assert!(
                        matches!(res.stratum, Stratum::CNx { .. }),
                        "{nu:?}: {}",
                        res.stratum
                    );
                }
            }
        }
    }
}

#[test]
fn lens_segment_circles() {
    for c in [1.3, -0.8] {
        for theta in [0.5, 2.0, -1.0] {
            let nu = ChartPoint::N6 {
                theta,
                c,
                t: 2.0 * PI / f64::abs(c),
            };
            let res = check_round_trip(nu, Multiplicity::Two);
            assert!(matches!(
                res.stratum,
                Stratum::Nx {
                    piece: LensPiece::C,
                    ..
                }
            ));
        }
        let nu = ChartPoint::N6 {
            theta: 0.0,
            c,
            t: 2.0 * PI / f64::abs(c),
        };
        check_round_trip(nu, Multiplicity::One);
    }
}

#[test]
fn generic_points_are_reached_once() {
    let nus = [
        ChartPoint::N1 {
            k: 0.5,
            u1: 2.0,
            u2: 0.7,
            sigma: 1.0,
        },
        ChartPoint::N1 {
            k: 0.95,
            u1: 0.8 * u1z(0.95).unwrap(),
            u2: 4.0,
            sigma: -2.0,
        },
        ChartPoint::N2 {
            k: 0.7,
            u1: 1.0,
            u2: 2.0,
            sigma: 0.5,
            sign_c: -1,
        },
        ChartPoint::N6 {
            theta: 1.0,
            c: 0.7,
            t: 5.0,
        },
        ChartPoint::N3 {
            p: 1.5,
            tau: 0.4,
            sigma: 1.0,
            sign_c: 1,
        },
    ];
    for nu in nus {
        assert!(is_optimal(&nu).unwrap(), "{nu:?}");
        let res = check_round_trip(nu, Multiplicity::One);
        assert!(matches!(
            res.stratum,
            Stratum::Generic | Stratum::FixZ { .. } | Stratum::FixX { .. }
        ));
    }
}

#[test]
fn circles_come_back_as_circles() {
    for (theta, c, t) in [(-2.3, -2.31, 2.18), (1.0, 0.7, 5.0)] {
        let nu = ChartPoint::N6 { theta, c, t };
        let res = check_round_trip(nu, Multiplicity::One);
        assert!(
            matches!(res.minimizers[0].nu, ChartPoint::N6 { .. }),
            "{:?}",
            res.minimizers[0].nu
        );
    }
}

#[test]
fn past_the_cut_a_shorter_geodesic_wins() {
    for l in [
        Covector::new(0.3, 1.1, 1.0),
        Covector::new(0.2, 3.0, 1.0),
        Covector::new(0.5, 1.0, 0.0),
    ] {
        let t = 1.05 * t_cut(&l).unwrap();
        let q = exp(&l, t).unwrap();
        let res = minimizers(q, 1e-6).unwrap();
        assert!(res.distance() < t, "{l:?}: {} vs {t}", res.distance());
    }
}

#[test]
fn optimality_examples() {
    let c6 = |t| ChartPoint::N6 {
        theta: 0.0,
        c: 1.0,
        t,
    };
    assert!(is_optimal(&c6(2.0 * PI)).unwrap());
    assert!(!is_optimal(&c6(2.0 * PI + 0.01)).unwrap());
    assert!(is_optimal(&ChartPoint::N3 {
        p: 5e5,
        tau: 0.0,
        sigma: 1.0,
        sign_c: 1
    })
    .unwrap());
}

#[test]
fn origin_and_bad_options_are_rejected() {
    assert!(minimizers(Point::ORIGIN, 1e-6).is_err());
    assert!(minimizers(Point::new(0.0, 1.0, 0.0, 0.0), 0.0).is_err());
    assert_eq!(distance(Point::ORIGIN).unwrap(), 0.0);
}

#[test]
fn result_serializes() {
    let res = minimizers(Point::new(0.0, 1.0, 0.0, 1.0), 1e-6).unwrap();
    let js = serde_json::to_string(&res).unwrap();
    assert_eq!(serde_json::from_str::<SynthesisResult>(&js).unwrap(), res);
}

fn generic_point() -> impl Strategy<Value = Point> {
    (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64)
        .prop_filter("off the planes", |(x, _, z, _)| {
            x.abs() > 0.05 && z.abs() > 0.05
        })
        .prop_map(|(x, y, z, w)| Point::new(x, y, z, w))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn distance_is_homogeneous(q in generic_point()) {
        let d = distance(q).unwrap();
        let d3 = distance(dilate(3.0, q)).unwrap();
        prop_assert!((d3 - 3.0 * d).abs() <= 1e-7 * d3);
    }

    #[test]
    fn distance_is_reflection_invariant(q in generic_point()) {
        let d = distance(q).unwrap();
        let d4 = distance(Reflection::E4.apply(q)).unwrap();
        prop_assert!((d4 - d).abs() <= 1e-7 * d);
        prop_assert_eq!(classify_point(q).unwrap().multiplicity(), Multiplicity::One);
    }
}
