//! The ten real-character Dirichlet series: `zeta, eta, lambda, beta` and
//! `L_{-3}, L_{-8}, L_8, L_12, L_{-24}, L_24`, on the whole real line.
//!
//! `s >= 0` is summed by Euler-Maclaurin on Hurwitz zeta functions, negative
//! integers come from exact generalized Bernoulli numbers, and the remaining
//! negative arguments from the functional equation.

mod bernoulli;

use std::f64::consts::{LN_2, PI};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{gamma_fn, rgamma, sin_pi};

pub use bernoulli::{bernoulli, bernoulli_poly};

const EM_N: usize = 32;
const EM_M: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CharacterId {
    #[serde(rename = "ZETA")]
    Zeta,
    #[serde(rename = "ETA")]
    Eta,
    #[serde(rename = "LAMBDA")]
    Lambda,
    #[serde(rename = "BETA")]
    Beta,
    #[serde(rename = "L-3")]
    Lm3,
    #[serde(rename = "L-8")]
    Lm8,
    #[serde(rename = "L8")]
    L8,
    #[serde(rename = "L12")]
    L12,
    #[serde(rename = "L-24")]
    Lm24,
    #[serde(rename = "L24")]
    L24,
}

impl CharacterId {
    pub const ALL: [CharacterId; 10] = [
        CharacterId::Zeta,
        CharacterId::Eta,
        CharacterId::Lambda,
        CharacterId::Beta,
        CharacterId::Lm3,
        CharacterId::Lm8,
        CharacterId::L8,
        CharacterId::L12,
        CharacterId::Lm24,
        CharacterId::L24,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CharacterId::Zeta => "ZETA",
            CharacterId::Eta => "ETA",
            CharacterId::Lambda => "LAMBDA",
            CharacterId::Beta => "BETA",
            CharacterId::Lm3 => "L-3",
            CharacterId::Lm8 => "L-8",
            CharacterId::L8 => "L8",
            CharacterId::L12 => "L12",
            CharacterId::Lm24 => "L-24",
            CharacterId::L24 => "L24",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let u = s.trim().to_ascii_uppercase();
        Self::ALL.into_iter().find(|c| c.label() == u).or(match u.as_str() {
            "Z" => Some(CharacterId::Zeta),
            "LM3" => Some(CharacterId::Lm3),
            "LM8" => Some(CharacterId::Lm8),
            "LM24" => Some(CharacterId::Lm24),
            _ => None,
        })
    }

    pub fn period(self) -> usize {
        self.sign_pattern().len()
    }

    /// `chi(n)` for `n = 0, 1, ..., period - 1`.
    pub fn sign_pattern(self) -> &'static [i8] {
        match self {
            CharacterId::Zeta => &[1],
            CharacterId::Eta => &[-1, 1],
            CharacterId::Lambda => &[0, 1],
            CharacterId::Beta => &[0, 1, 0, -1],
            CharacterId::Lm3 => &[0, 1, -1],
            CharacterId::Lm8 => &[0, 1, 0, 1, 0, -1, 0, -1],
            CharacterId::L8 => &[0, 1, 0, -1, 0, -1, 0, 1],
            CharacterId::L12 => &[0, 1, 0, 0, 0, -1, 0, -1, 0, 0, 0, 1],
            CharacterId::Lm24 => &[
                0, 1, 0, 0, 0, 1, 0, 1, 0, 0, 0, 1, 0, -1, 0, 0, 0, -1, 0, -1, 0, 0, 0, -1,
            ],
            CharacterId::L24 => &[
                0, 1, 0, 0, 0, 1, 0, -1, 0, 0, 0, -1, 0, -1, 0, 0, 0, -1, 0, 1, 0, 0, 0, 1,
            ],
        }
    }

    pub fn chi(self, n: u64) -> i8 {
        let p = self.sign_pattern();
        p[(n % p.len() as u64) as usize]
    }

    /// `zeta` and `lambda` have a pole at 1; every other series is entire.
    pub fn is_principal(self) -> bool {
        matches!(self, CharacterId::Zeta | CharacterId::Lambda)
    }

    /// 1 for odd characters (`chi(-1) = -1`), 0 for even ones.
    fn parity(self) -> u8 {
        match self {
            CharacterId::Beta | CharacterId::Lm3 | CharacterId::Lm8 | CharacterId::Lm24 => 1,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeriesKind {
    #[serde(rename = "FINITE")]
    Finite,
    #[serde(rename = "POLE")]
    Pole,
    #[serde(rename = "REGULARIZED_LIMIT")]
    RegularizedLimit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub kind: SeriesKind,
}

/// `L(s)` for one of the ten series. `zeta` and `lambda` at `s = 1` come
/// back as [`SeriesKind::Pole`] with an infinite value.
pub fn lseries_eval(id: CharacterId, s: f64) -> Result<SeriesValue> {
    if !s.is_finite() {
        return Err(Error::Domain(format!("{}({s})", id.label())));
    }
    if id.is_principal() && s == 1.0 {
        return Ok(SeriesValue { value: f64::INFINITY, kind: SeriesKind::Pole });
    }
    let value = match id {
        CharacterId::Zeta => zeta(s)?,
        CharacterId::Eta => {
            if s == 1.0 {
                LN_2
            } else {
                -(((1.0 - s) * LN_2).exp_m1()) * zeta(s)?
            }
        }
        CharacterId::Lambda => -((-s * LN_2).exp_m1()) * zeta(s)?,
        _ => dirichlet(id, s)?,
    };
    Ok(SeriesValue { value, kind: SeriesKind::Finite })
}

/// `L(s)` as a number; a pole is an error.
pub fn lvalue(id: CharacterId, s: f64) -> Result<f64> {
    let v = lseries_eval(id, s)?;
    match v.kind {
        SeriesKind::Pole => Err(Error::Pole(format!("{} at s = {s}", id.label()))),
        _ => Ok(v.value),
    }
}

fn nonpositive_integer(s: f64) -> Option<usize> {
    (s <= 0.0 && s == s.floor() && s > -60.0).then(|| (-s) as usize)
}

fn zeta(s: f64) -> Result<f64> {
    if let Some(n) = nonpositive_integer(s) {
        return Ok(bernoulli_value(CharacterId::Zeta, n));
    }
    if s < 0.0 {
        // zeta(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1 - s) zeta(1 - s)
        let g = gamma_fn(1.0 - s)?;
        return Ok(2f64.powf(s) * PI.powf(s - 1.0) * sin_pi(0.5 * s) * g * zeta(1.0 - s)?);
    }
    Ok(hurwitz_sum(s, &[(1.0, 1.0)], true))
}

fn dirichlet(id: CharacterId, s: f64) -> Result<f64> {
    if let Some(n) = nonpositive_integer(s) {
        return Ok(bernoulli_value(id, n));
    }
    let k = id.period() as f64;
    if s < 0.0 {
        let a = id.parity() as f64;
        let pre = (k / PI).powf(0.5 - s);
        let g = gamma_fn(0.5 * (1.0 - s + a))?;
        return Ok(pre * g * rgamma(0.5 * (s + a)) * dirichlet(id, 1.0 - s)?);
    }
    let terms: Vec<(f64, f64)> = id
        .sign_pattern()
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0)
        .map(|(a, c)| (*c as f64, a as f64 / k))
        .collect();
    Ok(k.powf(-s) * hurwitz_sum(s, &terms, false))
}

/// `sum_i c_i zeta(s, a_i)` by Euler-Maclaurin after `N = 32` terms. When
/// `pole` is false the coefficients sum to zero and the `1/(s-1)` pieces are
/// combined into a form that stays finite at `s = 1`.
fn hurwitz_sum(s: f64, terms: &[(f64, f64)], pole: bool) -> f64 {
    let n = EM_N as f64;
    let mut total = 0.0;
    for &(c, a) in terms {
        let mut head = 0.0;
        for j in 0..EM_N {
            head += (j as f64 + a).powf(-s);
        }
        let x = n + a;
        let mut tail = 0.5 * x.powf(-s);
        // B_{2j}/(2j)! * s(s+1)...(s+2j-2) * x^{-s-2j+1}
        let mut rising = s;
        let mut fact = 2.0;
        let mut xp = x.powf(-s - 1.0);
        let x2 = 1.0 / (x * x);
        for j in 1..=EM_M {
            tail += bernoulli::bernoulli_f64(2 * j) / fact * rising * xp;
            let jj = 2 * j as u32;
            rising *= (s + jj as f64 - 1.0) * (s + jj as f64);
            fact *= (jj + 1) as f64 * (jj + 2) as f64;
            xp *= x2;
        }
        let pole_part = if pole {
            x.powf(1.0 - s) / (s - 1.0)
        } else {
            // (x^{1-s} - N^{1-s})/(s-1), the N-part cancelling across terms.
            let l = (1.0 + a / n).ln();
            let u = 1.0 - s;
            let ratio = if u == 0.0 { -l } else { -(u * l).exp_m1() / u };
            n.powf(1.0 - s) * ratio
        };
        total += c * (head + tail + pole_part);
    }
    total
}

/// `L(-n)` from `L(1-m, chi) = -B_{m,chi}/m`, `m = n + 1`.
fn bernoulli_value(id: CharacterId, n: usize) -> f64 {
    bernoulli_value_exact(id, n).to_f64().unwrap()
}

/// Exact `L(-n)` for the ten series.
pub fn bernoulli_value_exact(id: CharacterId, n: usize) -> BigRational {
    let m = n + 1;
    let pow2 = |e: i64| -> BigRational {
        if e >= 0 {
            BigRational::from_integer(BigInt::from(1) << e as usize)
        } else {
            BigRational::new(BigInt::from(1), BigInt::from(1) << (-e) as usize)
        }
    };
    match id {
        CharacterId::Eta => {
            // (1 - 2^{1+n}) zeta(-n)
            let z = bernoulli_value_exact(CharacterId::Zeta, n);
            (BigRational::from_integer(1.into()) - pow2(1 + n as i64)) * z
        }
        CharacterId::Lambda => {
            let z = bernoulli_value_exact(CharacterId::Zeta, n);
            (BigRational::from_integer(1.into()) - pow2(n as i64)) * z
        }
        _ => {
            let k = id.period();
            let mut acc = BigRational::zero();
            for (a, c) in id.sign_pattern().iter().enumerate() {
                let a = if k == 1 { 1 } else { a };
                if *c == 0 {
                    continue;
                }
                let x = BigRational::new(BigInt::from(a), BigInt::from(k));
                acc += BigRational::from_integer(BigInt::from(*c)) * bernoulli_poly(m, &x);
            }
            let km = BigRational::from_integer(BigInt::from(k).pow(m as u32 - 1));
            -(km * acc) / BigRational::from_integer(BigInt::from(m))
        }
    }
}

const REG_STEPS: [f64; 2] = [1e-4, 1e-5];

/// `lim_{s -> s0} f(s)` when `f` has a removable singularity at `s0` (a pole
/// of one factor cancelled by a zero of another): symmetric samples at
/// `s0 +- eps`, `eps` in `{1e-4, 1e-5}`, Richardson-extrapolated in `eps^2`.
pub fn regularized_limit<F>(f: F, s0: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut sym = [0.0; 2];
    let mut right = [0.0; 2];
    for (i, e) in REG_STEPS.iter().enumerate() {
        let p = f(s0 + e)?;
        let m = f(s0 - e)?;
        sym[i] = 0.5 * (p + m);
        right[i] = p;
    }
    let r = (100.0 * sym[1] - sym[0]) / 99.0;
    let drift = (right[1] - right[0]).abs();
    if !r.is_finite() || drift > 1e-2 * (r.abs() + right[0].abs()) + 1e-12 {
        return Err(Error::NonCancelling(format!(
            "samples at s0 + 1e-4 and s0 + 1e-5 are {:e} and {:e}",
            right[0], right[1]
        )));
    }
    Ok(r)
}

/// `lim_{s -> s0} prod_i L_i(s + shift_i)`; an ordinary product when no
/// factor is singular at `s0`.
pub fn regularized_product(factors: &[(CharacterId, f64)], s0: f64) -> Result<f64> {
    let eval = |s: f64| -> Result<SeriesValue> {
        let mut prod = 1.0;
        for (id, shift) in factors {
            let v = lseries_eval(*id, s + shift)?;
            if v.kind == SeriesKind::Pole {
                return Ok(v);
            }
            prod *= v.value;
        }
        Ok(SeriesValue { value: prod, kind: SeriesKind::Finite })
    };
    let direct = eval(s0)?;
    if direct.kind == SeriesKind::Finite {
        return Ok(direct.value);
    }
    regularized_limit(|s| Ok(eval(s)?.value), s0)
}
