use std::f64::consts::{LN_2, PI};

use super::elliptic::Modulus;
use crate::error::{Error, Result};

const REL_CUTOFF: f64 = 1e-18;
const MIN_TERMS: usize = 3;

/// `sum_{n>=1} e^{-t n^2}`.
pub(crate) fn sum_squares(t: f64) -> f64 {
    let mut sum = 0.0;
    for n in 1.. {
        let term = (-t * (n * n) as f64).exp();
        sum += term;
        if n >= MIN_TERMS && term <= REL_CUTOFF * sum || term == 0.0 {
            break;
        }
    }
    sum
}

/// `sum_{n>=1} (-1)^n e^{-t n^2}`.
pub(crate) fn sum_squares_alt(t: f64) -> f64 {
    let mut sum = 0.0;
    for n in 1.. {
        let term = (-t * (n * n) as f64).exp();
        sum += if n % 2 == 0 { term } else { -term };
        if n >= MIN_TERMS && term <= REL_CUTOFF * sum.abs() || term == 0.0 {
            break;
        }
    }
    sum
}

/// `sum_{n>=0} e^{-t n(n+1)}`.
pub(crate) fn sum_pronic(t: f64) -> f64 {
    let mut sum = 1.0;
    for n in 1.. {
        let term = (-t * (n * (n + 1)) as f64).exp();
        sum += term;
        if n >= MIN_TERMS && term <= REL_CUTOFF * sum || term == 0.0 {
            break;
        }
    }
    sum
}

/// Natural logs of `theta_2, theta_3, theta_4` at `q = e^{-t}` together with
/// `theta_3 - 1`, for `t >= pi` where every series converges at least like
/// `e^{-pi n^2}`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ThetaLogs {
    pub ln2: f64,
    pub ln3: f64,
    pub ln4: f64,
    pub t3m1: f64,
}

pub(crate) fn theta_logs_direct(t: f64) -> ThetaLogs {
    let s3 = sum_squares(t);
    let s4 = sum_squares_alt(t);
    ThetaLogs {
        ln2: LN_2 - 0.25 * t + sum_pronic(t).ln(),
        ln3: (2.0 * s3).ln_1p(),
        ln4: (2.0 * s4).ln_1p(),
        t3m1: 2.0 * s3,
    }
}

fn check_q(q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Domain(format!("nome {q} outside (0,1)")));
    }
    Ok(-q.ln())
}

/// `ln theta_i(e^{-t})` for any `t > 0`, via the modular transform when
/// `t < pi`.
pub fn ln_theta_t(i: u8, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("theta needs t > 0, got {t}")));
    }
    if t >= PI {
        let l = theta_logs_direct(t);
        return match i {
            2 => Ok(l.ln2),
            3 => Ok(l.ln3),
            4 => Ok(l.ln4),
            _ => Err(Error::Domain(format!("theta index {i} not in {{2,3,4}}"))),
        };
    }
    let u = PI * PI / t;
    let l = theta_logs_direct(u);
    let pre = 0.5 * (PI / t).ln();
    match i {
        2 => Ok(pre + l.ln4),
        3 => Ok(pre + l.ln3),
        4 => Ok(pre + l.ln2),
        _ => Err(Error::Domain(format!("theta index {i} not in {{2,3,4}}"))),
    }
}

/// Jacobi theta function `theta_i(q)`, `i` in `{2, 3, 4}`.
pub fn theta(i: u8, q: f64) -> Result<f64> {
    let t = check_q(q)?;
    Ok(ln_theta_t(i, t)?.exp())
}

/// `k = theta_2^2 / theta_3^2` with `k' = theta_4^2 / theta_3^2`.
pub fn modulus_from_nome(q: f64) -> Result<Modulus> {
    let t = check_q(q)?;
    let l2 = ln_theta_t(2, t)?;
    let l3 = ln_theta_t(3, t)?;
    let l4 = ln_theta_t(4, t)?;
    let k = (2.0 * (l2 - l3)).exp();
    let kp = (2.0 * (l4 - l3)).exp();
    if !(k > 0.0 && kp > 0.0) {
        return Err(Error::Domain(format!("nome {q} gives a modulus outside binary64 range")));
    }
    Ok(Modulus { k, k_prime: kp })
}

/// `theta_2 theta_3 theta_4` from the triple-product series
/// `sum_{n>=0} 2 (2n+1) (-1)^n q^{(n+1/2)^2}`.
pub fn triple_product_series(q: f64) -> Result<f64> {
    let t = check_q(q)?;
    let mut sum = 0.0;
    for n in 0.. {
        let x = n as f64 + 0.5;
        let term = 2.0 * (2 * n + 1) as f64 * (-t * x * x).exp();
        sum += if n % 2 == 0 { term } else { -term };
        if n >= MIN_TERMS && term <= REL_CUTOFF * sum.abs() {
            break;
        }
        if n > 1_000_000 {
            return Err(Error::NoConvergence { last: sum, previous: term });
        }
    }
    Ok(sum)
}
