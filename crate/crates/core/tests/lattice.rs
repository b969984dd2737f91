use std::f64::consts::PI;

use latticek::lattice::*;
use latticek::lseries::{lvalue, CharacterId::*};
use latticek::specfun::{gamma_fn, hypergeometric_pfq};
use latticek::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn spec(m: f64, n: f64, p: f64, s: f64) -> LatticeSumSpec {
    LatticeSumSpec::new(m, n, p, s).unwrap()
}

fn l(id: latticek::lseries::CharacterId, s: f64) -> f64 {
    lvalue(id, s).unwrap()
}

fn catalan() -> f64 {
    l(Beta, 2.0)
}

#[test]
fn direct_sum_examples() {
    // 2^5 L_{-8}(2) L_8(2) for the two-dimensional theta_2 theta_4 sum.
    let (v, err) = lattice_direct(&spec(1.0, 0.0, 1.0, 2.0), 200).unwrap();
    let want = 32.0 * l(Lm8, 2.0) * l(L8, 2.0);
    assert!(rel(v, want) < 1e-6, "{v} vs {want}");
    assert!(err < 1e-6);
    // Hardy-Lorenz, origin omitted.
    let (v, _) = lattice_direct(&spec(0.0, 2.0, 0.0, 2.0), 200).unwrap();
    assert!(rel(v, 4.0 * l(Zeta, 2.0) * catalan()) < 1e-6);
    let (v, _) = lattice_direct(&spec(0.0, 0.0, 2.0, 2.0), 200).unwrap();
    assert!(rel(v, -4.0 * l(Eta, 2.0) * catalan()) < 1e-6);
}

#[test]
fn direct_sum_contract() {
    assert!(matches!(lattice_direct(&spec(1.0, 3.0, 3.0, 4.0), 10), Err(Error::DimensionTooLarge(7))));
    assert!(matches!(lattice_direct(&spec(0.0, 2.0, 0.0, 1.0), 10), Err(Error::TailUnbounded(_))));
    assert!(matches!(lattice_direct(&spec(0.5, 0.0, 1.0, 2.0), 10), Err(Error::Unsupported(_))));
    assert!(LatticeSumSpec::new(0.0, 0.0, 0.0, 2.0).is_err());
    assert!(LatticeSumSpec::new(-1.0, 0.0, 1.0, 2.0).is_err());
}

#[test]
fn eq_1_8_at_one_and_two() {
    for s in [1.0, 2.0] {
        let want = PI.powf(-s) * gamma_fn(s).unwrap() * 2f64.powf(2.0 * s + 1.0) * l(Lm8, s) * l(L8, s);
        let k = spec(1.0, 0.0, 1.0, s).k_spec();
        let integral = latticek::quadrature::k_integral(&k, 1e-12).unwrap().value / k.prefactor;
        assert!(rel(integral, want) < 1e-10, "s = {s}");
        let m = lattice_mellin(&spec(1.0, 0.0, 1.0, s), 1e-12).unwrap();
        assert!(rel(m, 2f64.powf(2.0 * s + 1.0) * l(Lm8, s) * l(L8, s)) < 1e-10);
        let (d, _) = lattice_direct(&spec(1.0, 0.0, 1.0, s), 200).unwrap();
        assert!(rel(d, m) < 1e-6, "s = {s}: {d} vs {m}");
    }
}

#[test]
fn mellin_examples() {
    // int (K'/K) dk/k' = 2G is L(2,0,2;2) up to its prefactor.
    let s = spec(2.0, 0.0, 2.0, 2.0);
    let v = lattice_mellin(&s, 1e-12).unwrap();
    assert!(rel(v / (PI * PI * 2.0 / PI), 2.0 * catalan()) < 1e-10);
    // L(4,0,4;s) = 16 eta(s-3) lambda(s).
    let v = lattice_mellin(&spec(4.0, 0.0, 4.0, 2.0), 1e-12).unwrap();
    assert!(rel(v, 16.0 * l(Eta, -1.0) * l(Lambda, 2.0)) < 1e-9);
    // (2/pi^2) sum' 1/(a^2+b^2)^2 = 4G/3.
    let v = lattice_mellin_regularized(2.0, 0.0, 2.0, 1e-12).unwrap();
    assert!(rel(2.0 / (PI * PI) * v, 4.0 * catalan() / 3.0) < 1e-8);
    let v = lattice_mellin_regularized(0.0, 2.0, 2.0, 1e-12).unwrap();
    assert!(rel(v, -4.0 * l(Eta, 2.0) * catalan()) < 1e-8);
    assert!(rel(lattice_mellin(&spec(0.0, 2.0, 0.0, 2.0), 1e-12).unwrap(), 4.0 * l(Zeta, 2.0) * catalan()) < 1e-8);
}

#[test]
fn new_evaluations() {
    let g4 = gamma_fn(0.25).unwrap().powi(4);
    // Six dimensions.
    assert!(rel(lattice_mellin(&spec(1.0, 1.0, 4.0, 2.0), 1e-12).unwrap(), g4 / (2.0 * PI)) < 1e-9);
    assert!(rel(2.0 * lattice_mellin(&spec(2.0, 2.0, 2.0, 2.0), 1e-12).unwrap(), g4 / (2.0 * PI)) < 1e-9);
    let (d, _) = lattice_direct(&spec(1.0, 1.0, 4.0, 2.0), 100).unwrap();
    assert!(rel(d, g4 / (2.0 * PI)) < 1e-6, "{d}");
    // Eight dimensions: 7F6 at unit argument.
    let f76 = hypergeometric_pfq(&[1.25, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5], &[0.25, 1.0, 1.0, 1.0, 1.0, 1.0], 1.0).unwrap();
    let want = PI.powi(4) / 4.0 * f76;
    assert!(rel(lattice_mellin(&spec(2.0, 2.0, 4.0, 3.0), 1e-12).unwrap(), want) < 1e-8);
    assert!(rel(2.0 * lattice_mellin(&spec(4.0, 2.0, 2.0, 3.0), 1e-12).unwrap(), want) < 1e-8);
    // 4F3 from L(2,0,6;3).
    let f43 = hypergeometric_pfq(&[0.5; 4], &[1.0; 3], 1.0).unwrap();
    assert!(rel(lattice_mellin(&spec(2.0, 0.0, 6.0, 3.0), 1e-12).unwrap(), PI.powi(3) / 4.0 * (1.0 + 2.0 * f43)) < 1e-8);
    // Fractional exponents.
    let v = lattice_mellin(&spec(2.5, 0.0, 3.5, 2.0), 1e-12).unwrap() / 4.0;
    assert!(rel(v, PI * PI / 12.0 * (5.0 + 0.5f64.sqrt()).sqrt()) < 1e-9);
}

#[test]
fn ten_dimensional_evaluations() {
    let g8 = gamma_fn(0.25).unwrap().powi(8);
    let want = g8 / (48.0 * PI * PI);
    assert!(rel(5.0 * lattice_mellin(&spec(4.0, 2.0, 4.0, 4.0), 1e-12).unwrap(), want) < 1e-8);
    assert!(rel(lattice_mellin(&spec(2.0, 4.0, 4.0, 4.0), 1e-12).unwrap(), want) < 1e-8);
    assert!(rel(lattice_mellin(&spec(1.0, 1.0, 8.0, 4.0), 1e-12).unwrap() / 8.0, want) < 1e-8);

    let t3 = theta10(3.0, 300, 1e-12).unwrap();
    let want3 = -PI.powi(3) / 10.0 - g8 / (120.0 * PI.powi(3));
    assert!(rel(t3.lhs, want3) < 1e-8, "{t3:?}");
    assert!(rel(t3.rhs, t3.lhs) < 1e-8, "{t3:?}");
    let t4 = theta10(4.0, 300, 1e-12).unwrap();
    let want4 = -7.0 * PI.powi(4) / 1800.0 - 32.0 * l(Beta, 4.0) / 5.0 - g8 / (400.0 * PI * PI);
    assert!(rel(t4.lhs, want4) < 1e-8, "{t4:?}");
    assert!(rel(t4.rhs, t4.lhs) < 1e-8, "{t4:?}");
}

fn small_integer_specs() -> Vec<(usize, usize, usize)> {
    let mut v = Vec::new();
    for m in 0..=4 {
        for n in 0..=4 {
            for p in 0..=4 {
                let d = m + n + p;
                if (1..=4).contains(&d) {
                    v.push((m, n, p));
                }
            }
        }
    }
    v
}

#[test]
fn direct_oracle_agrees_with_mellin_path() {
    let mut checked = 0;
    for (m, n, p) in small_integer_specs() {
        for s in [2.0, 3.0] {
            let sp = spec(m as f64, n as f64, p as f64, s);
            if p == 0 && s <= (m + n + p) as f64 / 2.0 {
                assert!(lattice_direct(&sp, 20).is_err());
                continue;
            }
            let (d, err) = lattice_direct(&sp, 200).unwrap();
            let f = lattice_mellin(&sp, 1e-12).unwrap();
            assert!((d - f).abs() <= 1e-6 * f.abs().max(1.0), "({m},{n},{p};{s}): {d} vs {f}, est {err:e}");
            checked += 1;
        }
    }
    assert!(checked > 50);
}

#[test]
fn dual_forms_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let m = rng.gen_range(1..=8) as f64 / 2.0;
        let n = rng.gen_range(0..=6) as f64 / 2.0;
        let p = rng.gen_range(1..=8) as f64 / 2.0;
        let s = rng.gen_range(1.2..3.5);
        let sp = spec(m, n, p, s);
        if sp.k_spec().check_integrable().is_err() {
            continue;
        }
        let a = lattice_mellin(&sp, 1e-11).unwrap();
        let b = lattice_mellin_dual(&sp, 1e-11).unwrap();
        assert!((a - b).abs() <= 2e-11 * a.abs().max(1.0), "{sp:?}: {a} vs {b}");
    }
}

#[test]
fn reflection_symmetry() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut n_checked = 0;
    while n_checked < 20 {
        let m = rng.gen_range(1..=8) as f64 / 2.0;
        let n = rng.gen_range(0..=4) as f64 / 2.0;
        let p = rng.gen_range(1..=8) as f64 / 2.0;
        let sp = spec(m, n, p, rng.gen_range(0.5..3.5));
        let (r, c) = sp.reflection();
        if r.s <= 0.0 || sp.k_spec().check_integrable().is_err() {
            continue;
        }
        let a = lattice_mellin(&sp, 1e-11).unwrap();
        let b = lattice_mellin(&r, 1e-11).unwrap();
        assert!(rel(a, c * b) < 1e-8, "{sp:?}: {a} vs {}", c * b);
        n_checked += 1;
    }
}

#[test]
fn prop2_chain() {
    let chains = prop2_equivalents(1.0, 2.0, 2.0).unwrap();
    assert_eq!(chains[0].0, spec(2.0, 2.0, 2.0, 2.0));
    assert_eq!(chains[1].0, spec(1.0, 1.0, 4.0, 2.0));
    assert_eq!(chains[1].1, 0.5);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut n_checked = 0;
    while n_checked < 20 {
        let m = rng.gen_range(1..=6) as f64 / 2.0;
        let n = rng.gen_range(1..=6) as f64 / 2.0;
        let s = rng.gen_range(0.6..(m + n - 0.1).max(0.7));
        let forms = prop2_equivalents(m, n, s).unwrap();
        if forms.iter().any(|(sp, _)| sp.s <= 0.0 || sp.k_spec().check_integrable().is_err()) {
            continue;
        }
        let vals: Vec<f64> = forms.iter().map(|(sp, c)| c * lattice_mellin(sp, 1e-11).unwrap()).collect();
        for v in &vals[1..] {
            assert!(rel(*v, vals[0]) < 1e-8, "m={m} n={n} s={s}: {vals:?}");
        }
        n_checked += 1;
    }
    assert!(matches!(prop2_for(&spec(2.0, 1.0, 3.0, 2.0)), Err(Error::Shape(_))));
    assert_eq!(prop2_for(&spec(4.0, 2.0, 2.0, 3.0)).unwrap()[1].0, spec(2.0, 2.0, 4.0, 3.0));
}

#[test]
fn functional_equation_of_self_dual_sums() {
    for (m, s) in [(1.0, 1.3), (1.0, 0.8), (2.0, 2.5), (1.5, 2.0), (0.5, 0.7)] {
        let a = lattice_mellin(&spec(m, m, 2.0 * m, s), 1e-11).unwrap();
        let (r, c) = self_dual_2m(m, s).unwrap();
        let b = c * lattice_mellin(&r, 1e-11).unwrap();
        assert!(rel(a, b) < 1e-8, "2m: m={m} s={s}: {a} vs {b}");
    }
    for (m, s) in [(1.0, 1.3), (2.0, 2.5), (1.5, 2.0), (0.5, 1.2)] {
        let a = lattice_mellin(&spec(m, m, 4.0 * m, s), 1e-11).unwrap();
        let (r, c) = self_dual_4m(m, s).unwrap();
        let b = c * lattice_mellin(&r, 1e-11).unwrap();
        assert!(rel(a, b) < 1e-8, "4m: m={m} s={s}: {a} vs {b}");
    }
    // Without the Gamma ratio the relation fails away from the centre.
    let a = lattice_mellin(&spec(1.0, 1.0, 4.0, 1.3), 1e-11).unwrap();
    let b = (2.0 * PI).powf(2.0 * 1.3 - 3.0) * lattice_mellin(&spec(1.0, 1.0, 4.0, 1.7), 1e-11).unwrap();
    assert!(rel(a, b) > 1e-3);
}

#[test]
fn jacobi_linear_relation() {
    let r = jacobi_linear_relation_check(2.0, 0.0, 2.0, 3.0, 1e-12).unwrap();
    assert!(r.abs() <= 1e-8, "{r}");
    let r = jacobi_linear_relation_check(1.0, 1.0, 1.0, 3.0, 1e-12).unwrap();
    assert!(r.abs() <= 1e-8, "{r}");
    assert!(jacobi_linear_relation_check(0.0, 0.0, 0.0, 3.0, 1e-12).is_err());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let m = rng.gen_range(1..=6) as f64 / 2.0;
        let n = rng.gen_range(0..=4) as f64 / 2.0;
        let p = rng.gen_range(1..=4) as f64 / 2.0;
        let d = m + n + p + 4.0;
        let s = rng.gen_range(d / 2.0 + 0.2..d / 2.0 + 2.0);
        let r = jacobi_linear_relation_check(m, n, p, s, 1e-12).unwrap();
        let scale = lattice_mellin(&spec(m + 4.0, n, p, s), 1e-12).unwrap().abs().max(1.0);
        assert!(r.abs() <= 1e-8 * scale, "({m},{n},{p};{s}): {r}");
    }
}
