use crate::error::{Error, Result};

const LEVIN_ORDER: usize = 12;
const LEVIN_BETA: f64 = 1.0;
const RICHARDSON_N0: usize = 64;
const RICHARDSON_LEVELS: usize = 15;
const DIRECT_CAP: usize = 2_000_000;

/// A generalized hypergeometric value with the accuracy it can vouch for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PfqValue {
    pub value: f64,
    /// At unit argument: disagreement between the Levin-u and the
    /// Richardson tail-fit evaluations. Otherwise a rounding-level bound.
    pub error_estimate: f64,
}

struct Terms<'a> {
    a: &'a [f64],
    b: &'a [f64],
    z: f64,
    n: usize,
    t: f64,
}

impl Iterator for Terms<'_> {
    type Item = f64;
    fn next(&mut self) -> Option<f64> {
        let cur = self.t;
        let n = self.n as f64;
        let mut r = self.z / (n + 1.0);
        for a in self.a {
            r *= a + n;
        }
        for b in self.b {
            r /= b + n;
        }
        self.t *= r;
        self.n += 1;
        Some(cur)
    }
}

fn terms<'a>(a: &'a [f64], b: &'a [f64], z: f64) -> Terms<'a> {
    Terms { a, b, z, n: 0, t: 1.0 }
}

/// Neumaier-compensated running sum.
#[derive(Default, Clone, Copy)]
struct Compensated {
    sum: f64,
    c: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }
    fn value(&self) -> f64 {
        self.sum + self.c
    }
}

/// `pFq(a; b; z)` for `z` in `[0, 1]`.
pub fn hypergeometric_pfq(numerator: &[f64], denominator: &[f64], z: f64) -> Result<f64> {
    Ok(hypergeometric_pfq_est(numerator, denominator, z)?.value)
}

pub fn hypergeometric_pfq_est(numerator: &[f64], denominator: &[f64], z: f64) -> Result<PfqValue> {
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::Domain(format!("pFq argument {z} outside [0,1]")));
    }
    if let Some(b) = denominator.iter().find(|b| **b <= 0.0 && **b == b.floor()) {
        return Err(Error::Domain(format!("denominator parameter {b} is a nonpositive integer")));
    }
    if z == 0.0 {
        return Ok(PfqValue { value: 1.0, error_estimate: 0.0 });
    }
    let terminating = numerator.iter().any(|a| *a <= 0.0 && *a == a.floor());
    let p = numerator.len();
    let q = denominator.len();
    if terminating || z < 1.0 || p <= q {
        return direct_sum(numerator, denominator, z);
    }
    if p > q + 1 {
        return Err(Error::Divergence(format!("{p}F{q} diverges at z = 1")));
    }
    let delta: f64 = denominator.iter().sum::<f64>() - numerator.iter().sum::<f64>();
    if !(delta > 0.0) {
        return Err(Error::Divergence(format!(
            "terms decay like n^{:.3}, need an exponent below -1",
            -1.0 - delta
        )));
    }
    let levin = levin_u(numerator, denominator)?;
    let rich = richardson(numerator, denominator, delta)?;
    Ok(PfqValue { value: levin, error_estimate: (levin - rich).abs() })
}

fn direct_sum(a: &[f64], b: &[f64], z: f64) -> Result<PfqValue> {
    let mut s = Compensated::default();
    let mut last = 0.0;
    for (n, t) in terms(a, b, z).enumerate() {
        s.add(t);
        if t == 0.0 || (n > 4 && t.abs() < 1e-17 * s.value().abs()) {
            return Ok(PfqValue { value: s.value(), error_estimate: 1e-16 * s.value().abs() });
        }
        if n > DIRECT_CAP {
            return Err(Error::NoConvergence { last: s.value(), previous: last });
        }
        last = s.value();
    }
    unreachable!()
}

/// Levin u-transform of the partial sums, order 12, anchored at `n = 0`.
fn levin_u(a: &[f64], b: &[f64]) -> Result<f64> {
    let ts: Vec<f64> = terms(a, b, 1.0).take(LEVIN_ORDER + 1).collect();
    let mut partial = Vec::with_capacity(ts.len());
    let mut acc = 0.0;
    for t in &ts {
        acc += t;
        partial.push(acc);
    }
    let k = LEVIN_ORDER;
    let (mut num, mut den) = (0.0, 0.0);
    let mut binom = 1.0;
    for j in 0..=k {
        let nj = j as f64;
        let w = (LEVIN_BETA + nj) * ts[j];
        if w == 0.0 {
            return Ok(partial[j]);
        }
        let ratio = ((LEVIN_BETA + nj) / (LEVIN_BETA + k as f64)).powi(k as i32 - 1);
        let c = if j % 2 == 0 { binom } else { -binom } * ratio / w;
        num += c * partial[j];
        den += c;
        binom = binom * (k - j) as f64 / (j + 1) as f64;
    }
    let v = num / den;
    if !v.is_finite() {
        return Err(Error::NoConvergence { last: v, previous: partial[k] });
    }
    Ok(v)
}

/// Partial sums at `N_j = 64 * 2^j`, extrapolated against the tail expansion
/// `N^{-delta} (c_0 + c_1/N + ...)`.
fn richardson(a: &[f64], b: &[f64], delta: f64) -> Result<f64> {
    let mut sums = Vec::with_capacity(RICHARDSON_LEVELS);
    let mut acc = Compensated::default();
    let mut next = RICHARDSON_N0;
    for (n, t) in terms(a, b, 1.0).enumerate() {
        acc.add(t);
        if n + 1 == next {
            sums.push(acc.value());
            if sums.len() == RICHARDSON_LEVELS {
                break;
            }
            next *= 2;
        }
    }
    let mut row = sums.clone();
    let mut best = *row.last().unwrap();
    let mut best_diff = f64::INFINITY;
    for m in 0..RICHARDSON_LEVELS - 1 {
        let f = 2f64.powf(delta + m as f64);
        let new: Vec<f64> = row.windows(2).map(|w| (f * w[1] - w[0]) / (f - 1.0)).collect();
        if new.len() >= 2 {
            let d = (new[new.len() - 1] - new[new.len() - 2]).abs();
            if d < best_diff {
                best_diff = d;
                best = new[new.len() - 1];
            }
        }
        row = new;
        if row.len() < 2 {
            break;
        }
    }
    Ok(best)
}
