#![allow(clippy::approx_constant, clippy::excessive_precision)] // frozen reference digits

use std::f64::consts::{LN_2, PI};

use latticek::lseries::*;
use latticek::Error;

fn l(id: CharacterId, s: f64) -> f64 {
    lvalue(id, s).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn classical_anchors() {
    assert!(rel(l(CharacterId::Zeta, 2.0), PI * PI / 6.0) < 1e-14);
    assert!(rel(l(CharacterId::Zeta, 4.0), PI.powi(4) / 90.0) < 1e-14);
    assert!(rel(l(CharacterId::Beta, 1.0), PI / 4.0) < 1e-14);
    assert!(rel(l(CharacterId::Beta, 3.0), PI.powi(3) / 32.0) < 1e-14);
    assert!(rel(l(CharacterId::Eta, 1.0), LN_2) < 1e-15);
    assert!(rel(l(CharacterId::Lm3, 1.0), PI / 27f64.sqrt()) < 1e-14);
}

#[test]
fn l8_values_at_one() {
    assert!(rel(l(CharacterId::Lm8, 1.0), PI / 8f64.sqrt()) < 1e-14);
    let want = (1.0 + 2f64.sqrt()).ln() / 2f64.sqrt();
    assert!(rel(l(CharacterId::L8, 1.0), want) < 1e-14);
}

#[test]
fn trivial_zeros_and_bernoulli_values() {
    assert_eq!(l(CharacterId::Zeta, -2.0), 0.0);
    assert_eq!(l(CharacterId::Zeta, -4.0), 0.0);
    assert!(rel(l(CharacterId::Zeta, 0.0), -0.5) < 1e-15);
    assert!(rel(l(CharacterId::Zeta, -1.0), -1.0 / 12.0) < 1e-15);
    assert!(rel(l(CharacterId::Zeta, -3.0), 1.0 / 120.0) < 1e-15);
    // Odd characters vanish at negative odd integers, even ones at
    // nonpositive even integers.
    assert_eq!(l(CharacterId::Beta, -1.0), 0.0);
    assert_eq!(l(CharacterId::L8, 0.0), 0.0);
    assert_eq!(l(CharacterId::L8, -2.0), 0.0);
    assert!(rel(l(CharacterId::Beta, 0.0), 0.5) < 1e-15);
    assert!(rel(l(CharacterId::Beta, -2.0), -0.5) < 1e-15);
    assert!(rel(l(CharacterId::Eta, -1.0), 0.25) < 1e-15);
    assert_eq!(l(CharacterId::Eta, -2.0), 0.0);
    assert_eq!(l(CharacterId::Lambda, 0.0), 0.0);
}

#[test]
fn poles() {
    let v = lseries_eval(CharacterId::Zeta, 1.0).unwrap();
    assert_eq!(v.kind, SeriesKind::Pole);
    assert_eq!(lseries_eval(CharacterId::Lambda, 1.0).unwrap().kind, SeriesKind::Pole);
    assert!(matches!(lvalue(CharacterId::Zeta, 1.0), Err(Error::Pole(_))));
    assert_eq!(lseries_eval(CharacterId::Beta, 1.0).unwrap().kind, SeriesKind::Finite);
}

#[test]
fn eta_and_lambda_reduce_to_zeta() {
    for i in 0..20 {
        let s = 1.1 + 6.9 * i as f64 / 19.0;
        let z = l(CharacterId::Zeta, s);
        assert!(rel(l(CharacterId::Eta, s), (1.0 - 2f64.powf(1.0 - s)) * z) < 1e-12);
        assert!(rel(l(CharacterId::Lambda, s), (1.0 - 2f64.powf(-s)) * z) < 1e-12);
    }
}

#[test]
fn sign_patterns() {
    for id in CharacterId::ALL {
        let p = id.sign_pattern();
        assert_eq!(p.len(), id.period());
        if !id.is_principal() {
            assert_eq!(p.iter().map(|c| *c as i32).sum::<i32>(), 0, "{}", id.label());
        }
        if id.period() > 2 {
            for (a, c) in p.iter().enumerate() {
                if *c != 0 {
                    assert_eq!(num_integer::gcd(a, id.period()), 1, "{}", id.label());
                }
            }
        }
    }
    // L_{-8}: 1 + 1/3 - 1/5 - 1/7 + ...; L_8: 1 - 1/3 - 1/5 + 1/7 + ...
    let first = |id: CharacterId| (1..=16).map(|n| id.chi(n)).collect::<Vec<_>>();
    assert_eq!(first(CharacterId::Lm8), [1, 0, 1, 0, -1, 0, -1, 0, 1, 0, 1, 0, -1, 0, -1, 0]);
    assert_eq!(first(CharacterId::L8), [1, 0, -1, 0, -1, 0, 1, 0, 1, 0, -1, 0, -1, 0, 1, 0]);
    assert_eq!(first(CharacterId::Lm3)[..6], [1, -1, 0, 1, -1, 0]);
    let l24: Vec<i8> = [1, 5, 7, 11, 13, 17, 19, 23].iter().map(|n| CharacterId::L24.chi(*n)).collect();
    assert_eq!(l24, [1, 1, -1, -1, -1, -1, 1, 1]);
    let lm24: Vec<i8> = [1, 5, 7, 11, 13, 17, 19, 23].iter().map(|n| CharacterId::Lm24.chi(*n)).collect();
    assert_eq!(lm24, [1, 1, 1, 1, -1, -1, -1, -1]);
}

/// Brute-force `sum_{n <= N} chi(n) n^{-s}` with a tail bound: for a
/// character of period k the tail is at most k * (N+1)^{-s}.
fn brute(id: CharacterId, s: f64, n: u64) -> (f64, f64) {
    let mut sum = 0.0;
    let mut c = 0.0;
    for m in (1..=n).rev() {
        let x = id.chi(m);
        if x != 0 {
            let y = x as f64 * (m as f64).powf(-s) - c;
            let t = sum + y;
            c = (t - sum) - y;
            sum = t;
        }
    }
    let k = id.period() as f64;
    let bound = if id.is_principal() {
        (n as f64).powf(1.0 - s) / (s - 1.0)
    } else {
        k * ((n + 1) as f64).powf(-s)
    };
    (sum, bound)
}

#[test]
fn agrees_with_brute_force_sums() {
    for id in CharacterId::ALL {
        for s in [2.0, 3.0, 4.0] {
            let (b, bound) = brute(id, s, 10_000_000);
            let v = l(id, s);
            let tol = if id.is_principal() { bound * 1.01 } else { 1e-9 };
            assert!((v - b).abs() <= tol.max(1e-9), "{}({s}): {v} vs {b}", id.label());
        }
    }
}

// Reference values from an independent 30-digit Hurwitz-zeta evaluation.
const REFERENCE: &[(CharacterId, [f64; 6])] = &[
    (CharacterId::Beta, [-0.47477605327648972625, 0.27517974122882025012, 0.66769145718960917666, 0.78539816339744830962, 0.86450265346120204036, 0.96894614625936938048]),
    (CharacterId::Lm8, [-3.9369101890736603248, 0.69405641397411804808, 1.1004214095255483776, 1.1107207345395915618, 1.090221265658982786, 1.0277225859368585679]),
    (CharacterId::L8, [3.7785898855306807791, -0.49592181566319634377, 0.37369171291254730738, 0.62322524014023051339, 0.77899216642120464489, 0.95838045456309456205]),
    (CharacterId::L12, [13.004545474136212906, -0.84897115345298257336, 0.49855700245781543616, 0.76034599630094634753, 0.88904051293251435979, 0.99004001943815994979]),
    (CharacterId::Lm3, [-0.18702994013252145768, 0.16806003892587702446, 0.48086755769682862618, 0.60459978807807261686, 0.70396824486873326167, 0.88402381175007985674]),
    (CharacterId::Lm24, [-104.98651319355767617, 2.1584100771321384782, 1.5719151599905976544, 1.2825498301618640955, 1.1301408736254175371, 1.0109026642805024164]),
    (CharacterId::L24, [104.71785675966855087, -1.9027755904706146286, 0.7094580614652300427, 0.93588131010357011049, 0.99629096940874398453, 1.0039416231500563207]),
];

#[test]
fn reference_values_including_negative_half_integers() {
    let grid = [-2.5, -0.5, 0.5, 1.0, 1.5, 3.0];
    for (id, vals) in REFERENCE {
        for (s, want) in grid.iter().zip(vals) {
            assert!(rel(l(*id, *s), *want) < 1e-12, "{}({s})", id.label());
        }
    }
    let zeta_grid = [-2.5, -1.5, -0.5, 0.5, 1.5];
    let zeta_want = [
        0.0085169287778503305424,
        -0.02548520188983303595,
        -0.20788622497735456602,
        -1.4603545088095868129,
        2.6123753486854883433,
    ];
    for (s, want) in zeta_grid.iter().zip(zeta_want) {
        assert!(rel(l(CharacterId::Zeta, *s), want) < 1e-12, "zeta({s})");
    }
}

#[test]
fn exact_bernoulli_values() {
    use num_rational::BigRational;
    let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    assert_eq!(bernoulli(2), r(1, 6));
    assert_eq!(bernoulli(12), r(-691, 2730));
    assert_eq!(bernoulli_value_exact(CharacterId::Zeta, 1), r(-1, 12));
    assert_eq!(bernoulli_value_exact(CharacterId::Beta, 2), r(-1, 2));
    assert_eq!(bernoulli_value_exact(CharacterId::Eta, 3), r(-1, 8));
}

#[test]
fn regularized_products() {
    use CharacterId::*;
    let zeta3 = l(Zeta, 3.0);
    let v = regularized_product(&[(Eta, -3.0), (Lambda, 0.0)], 1.0).unwrap();
    assert!(rel(v, 7.0 * zeta3 / (8.0 * PI * PI)) < 1e-9);
    assert!(rel(2.0 * PI * PI * v, 7.0 * zeta3 / 4.0) < 1e-9);

    let v = regularized_product(&[(Eta, -3.0), (Lambda, 0.0)], 3.0).unwrap();
    assert!(rel(v, l(Eta, 0.0) * l(Lambda, 3.0)) < 1e-15);

    // k(2k^2-1)K^4 = -(pi^4/2) Gamma(1) eta(-4) lambda(1) in the limit.
    let v = regularized_product(&[(Eta, -5.0), (Lambda, 0.0)], 1.0).unwrap();
    let zeta5 = l(Zeta, 5.0);
    assert!(rel(-PI.powi(4) / 2.0 * v, 93.0 / 16.0 * zeta5) < 1e-9);

    assert!(matches!(
        regularized_product(&[(Zeta, 0.0), (Lambda, 0.0)], 1.0),
        Err(Error::NonCancelling(_))
    ));
}
