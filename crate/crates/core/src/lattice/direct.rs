use rayon::prelude::*;

use super::LatticeSumSpec;
use crate::error::{Error, Result};
use crate::quadrature::integrate_01;
use crate::specfun::gamma_fn;

pub const MAX_DIRECT_DIMENSION: usize = 6;

/// Smooth cutoff: 1 at 0, 0 from 1 on, all derivatives vanishing at both
/// ends.
fn cutoff(x: f64) -> f64 {
    if x <= 0.0 {
        1.0
    } else if x >= 1.0 {
        0.0
    } else {
        let a = (-1.0 / (1.0 - x)).exp();
        let b = (-1.0 / x).exp();
        a / (a + b)
    }
}

fn cutoff_deriv(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    let a = (-1.0 / (1.0 - x)).exp();
    let b = (-1.0 / x).exp();
    let da = -a / ((1.0 - x) * (1.0 - x));
    let db = b / (x * x);
    (da * b - a * db) / ((a + b) * (a + b))
}

/// Mellin transform of the cutoff, `int_0^inf phi(x) x^{w-1} dx`, continued
/// to `w < 0` as `-(1/w) int_0^1 phi'(x) x^w dx`.
fn cutoff_mellin(w: f64) -> Result<f64> {
    let r = integrate_01(|x, _| cutoff_deriv(x) * x.powf(w), 1e-13)?;
    Ok(-r.value / w)
}

/// `sum_Q a(Q) Q^{-s} phi(Q/X)` over `(Q, a)` pairs.
fn smoothed(terms: &[(f64, f64)], s: f64, x: f64) -> f64 {
    terms
        .par_iter()
        .map(|&(q, a)| if q < x { a * q.powf(-s) * cutoff(q / x) } else { 0.0 })
        .sum()
}

/// A Dirichlet series `sum a(Q) Q^{-s}` from its coefficients up to `Q <= X`
/// under a smooth cutoff. `pole = Some((u, r))` declares a simple pole of the
/// series at `u` with residue `r`; its image under the cutoff,
/// `r Phi(u - s) X^{u - s}`, is subtracted.
///
/// Returns `(value, error_estimate)`: the error estimate is the change when
/// the cutoff is pulled in to `0.6 X`.
pub(crate) fn smoothed_dirichlet(terms: &[(f64, f64)], s: f64, x: f64, pole: Option<(f64, f64)>) -> Result<(f64, f64)> {
    let eval = |x: f64| -> Result<f64> {
        let mut v = smoothed(terms, s, x);
        if let Some((u, residue)) = pole {
            let w = u - s;
            v -= residue * cutoff_mellin(w)? * x.powf(w);
        }
        Ok(v)
    };
    let v = eval(x)?;
    let v2 = eval(0.6 * x)?;
    Ok((v, (v - v2).abs()))
}

/// Coefficients of `theta_i(e^{-t/4})` as a sparse list over `N = 4Q`.
fn theta_terms(i: u8, n_max: usize) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    match i {
        2 => {
            let mut a = 0usize;
            while (2 * a + 1) * (2 * a + 1) <= n_max {
                out.push(((2 * a + 1) * (2 * a + 1), 2));
                a += 1;
            }
        }
        _ => {
            out.push((0, 1));
            let mut a = 1usize;
            while 4 * a * a <= n_max {
                let c = if i == 4 && a % 2 == 1 { -2 } else { 2 };
                out.push((4 * a * a, c));
                a += 1;
            }
        }
    }
    out
}

/// Representation counts `r(N)` of `theta_2^m theta_3^n theta_4^p` in
/// `N = 4Q` units, `N <= n_max`.
pub(crate) fn theta_product_coeffs(m: usize, n: usize, p: usize, n_max: usize) -> Vec<f64> {
    let mut acc = vec![0.0f64; n_max + 1];
    acc[0] = 1.0;
    let factors = std::iter::repeat_n(2u8, m).chain(std::iter::repeat_n(3, n)).chain(std::iter::repeat_n(4, p));
    for i in factors {
        let t = theta_terms(i, n_max);
        let prev = acc;
        acc = (0..=n_max)
            .into_par_iter()
            .map(|j| {
                let mut s = 0.0;
                for &(pos, c) in &t {
                    if pos > j {
                        break;
                    }
                    s += c as f64 * prev[j - pos];
                }
                s
            })
            .collect();
    }
    acc
}

/// Direct summation of `L(m, n, p; s)` over the ball `Q <= radius^2`.
///
/// The truncation is smooth rather than sharp, so the truncated sum of an
/// alternating lattice sum converges faster than any power of the radius;
/// for `p = 0` the smooth cutoff of the mean lattice-point density is added
/// back in closed form. Returns `(value, error_estimate)`, the estimate
/// being heuristic (see [`smoothed_dirichlet`]).
pub fn lattice_direct(spec: &LatticeSumSpec, radius: usize) -> Result<(f64, f64)> {
    let (m, n, p) = spec
        .integer_exponents()
        .ok_or_else(|| Error::Unsupported("direct summation needs integer exponents".into()))?;
    let d = m + n + p;
    if d > MAX_DIRECT_DIMENSION {
        return Err(Error::DimensionTooLarge(d));
    }
    if p == 0 && spec.s <= d as f64 / 2.0 {
        return Err(Error::TailUnbounded(format!(
            "non-alternating sum in dimension {d} diverges at s = {}",
            spec.s
        )));
    }
    if spec.s <= 0.0 {
        return Err(Error::TailUnbounded(format!("s = {} <= 0", spec.s)));
    }
    let n_max = 4 * radius * radius;
    let r = theta_product_coeffs(m, n, p, n_max);
    let terms: Vec<(f64, f64)> = r.iter().enumerate().skip(1).filter(|(_, a)| **a != 0.0).map(|(j, a)| (j as f64 / 4.0, *a)).collect();
    let pole = if p == 0 {
        let h = d as f64 / 2.0;
        Some((h, std::f64::consts::PI.powf(h) / gamma_fn(h)?))
    } else {
        None
    };
    smoothed_dirichlet(&terms, spec.s, (radius * radius) as f64, pole)
}

/// `sum' (-1)^{a+b} Re[(a - b i)^4] / (a^2 + b^2)^s` over the disc of the
/// given radius, smoothly truncated.
pub fn gaussian_quartic_sum(s: f64, radius: i64) -> Result<(f64, f64)> {
    let r2 = radius * radius;
    let mut terms = Vec::new();
    for a in -radius..=radius {
        for b in -radius..=radius {
            let q = a * a + b * b;
            if q == 0 || q > r2 {
                continue;
            }
            let (a2, b2) = ((a * a) as f64, (b * b) as f64);
            let re = a2 * a2 - 6.0 * a2 * b2 + b2 * b2;
            let sign = if (a + b) % 2 == 0 { 1.0 } else { -1.0 };
            terms.push((q as f64, sign * re));
        }
    }
    smoothed_dirichlet(&terms, s, r2 as f64, None)
}
