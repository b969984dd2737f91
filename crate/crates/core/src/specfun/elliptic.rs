use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

const AGM_CAP: usize = 60;

/// A modulus `k` together with an independently accurate complement `k'`.
///
/// Near `k = 1` the complement cannot be recovered from `k` alone, so every
/// constructor that has `k'` to hand keeps it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modulus {
    pub k: f64,
    pub k_prime: f64,
}

impl Modulus {
    pub fn new(k: f64) -> Result<Self> {
        if !(k > 0.0 && k < 1.0) {
            return Err(Error::Domain(format!("modulus {k} outside (0,1)")));
        }
        Ok(Self { k, k_prime: complement(k) })
    }

    pub fn from_complement(k_prime: f64) -> Result<Self> {
        let m = Self::new(k_prime)?;
        Ok(Self { k: m.k_prime, k_prime: m.k })
    }

    /// Pairs `k` with a caller-supplied complement. The pair must satisfy
    /// `k^2 + k'^2 = 1` to working precision.
    pub fn with_complement(k: f64, k_prime: f64) -> Result<Self> {
        if !(k > 0.0 && k < 1.0 && k_prime > 0.0 && k_prime < 1.0) {
            return Err(Error::Domain(format!("pair ({k}, {k_prime}) outside (0,1)")));
        }
        if (k * k + k_prime * k_prime - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("k^2 + k'^2 != 1 for ({k}, {k_prime})")));
        }
        Ok(Self { k, k_prime })
    }

    pub fn swap(self) -> Self {
        Self { k: self.k_prime, k_prime: self.k }
    }
}

/// `sqrt(1 - k^2)` without forming `k^2` near 1.
pub fn complement(k: f64) -> f64 {
    ((1.0 - k) * (1.0 + k)).sqrt()
}

/// Arithmetic-geometric mean of `(1, b)` plus the weighted sum
/// `sum_{n>=0} 2^{n-1} c_n^2` with `c_0` given, so that `K - E = K * sum`.
///
/// `c_{n+1} = c_n^2 / (4 a_{n+1})` keeps every `c_n` free of cancellation.
pub(crate) fn agm_chain(b: f64, c0: f64) -> Result<(f64, f64)> {
    let (mut a, mut b) = (1.0_f64, b);
    let mut c = c0;
    let mut pow = 0.5;
    let mut sum = pow * c * c;
    for _ in 0..AGM_CAP {
        if (a - b).abs() < 1e-16 * a {
            return Ok((a, sum));
        }
        let a1 = 0.5 * (a + b);
        let b1 = (a * b).sqrt();
        // Stagnation one ulp apart counts as convergence.
        if a1 == a && b1 == b {
            return Ok((a, sum));
        }
        b = b1;
        a = a1;
        c = c * c / (4.0 * a);
        pow *= 2.0;
        sum += pow * c * c;
    }
    Err(Error::NoConvergence { last: a, previous: b })
}

pub fn agm(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain("agm needs positive arguments".into()));
    }
    let (m, _) = agm_chain(b / a, 0.0)?;
    Ok(a * m)
}

fn k_of_complement(kp: f64) -> Result<f64> {
    Ok(FRAC_PI_2 / agm(1.0, kp)?)
}

pub fn ellint_k(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::Domain(format!("K({k}) needs 0 <= k < 1")));
    }
    let kp = complement(k);
    if kp == 0.0 {
        return Err(Error::Domain(format!("K({k}) overflows: complement underflowed")));
    }
    k_of_complement(kp)
}

pub fn ellint_e(k: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::Domain(format!("E({k}) needs 0 <= k <= 1")));
    }
    if k == 1.0 {
        return Ok(1.0);
    }
    if k == 0.0 {
        return Ok(FRAC_PI_2);
    }
    let m = Modulus { k, k_prime: complement(k) };
    Ok(CompleteIntegrals::new(m)?.e)
}

/// `(K', E') = (K(k'), E(k'))`.
pub fn ellint_complementary(k: f64) -> Result<(f64, f64)> {
    let m = Modulus::new(k)?;
    let c = CompleteIntegrals::new(m)?;
    Ok((c.kp, c.ep))
}

/// `K, K', E, E'` at one modulus, each to full relative accuracy.
///
/// The smaller of `k, k'` drives the `c_n` chain, giving `D = K - E` (or its
/// complement) without cancellation; the other `E` follows from Legendre's
/// relation, again as a sum of positive terms.
#[derive(Debug, Clone, Copy)]
pub struct CompleteIntegrals {
    pub modulus: Modulus,
    pub k: f64,
    pub kp: f64,
    pub e: f64,
    pub ep: f64,
}

impl CompleteIntegrals {
    pub fn new(m: Modulus) -> Result<Self> {
        let big_k = k_of_complement(m.k_prime)?;
        let big_kp = k_of_complement(m.k)?;
        let (e, ep) = e_pair(m, big_k, big_kp)?;
        Ok(Self { modulus: m, k: big_k, kp: big_kp, e, ep })
    }
}

/// `(E, E')` given accurate `K, K'` at modulus `m`.
pub(crate) fn e_pair(m: Modulus, big_k: f64, big_kp: f64) -> Result<(f64, f64)> {
    if m.k <= m.k_prime {
        let (_, s) = agm_chain(m.k_prime, m.k)?;
        let d = big_k * s;
        Ok((big_k - d, (FRAC_PI_2 + big_kp * d) / big_k))
    } else {
        let (_, s) = agm_chain(m.k, m.k_prime)?;
        let dp = big_kp * s;
        Ok(((FRAC_PI_2 + big_k * dp) / big_kp, big_kp - dp))
    }
}

/// `dK/dk = (E - k'^2 K) / (k k'^2)`.
pub fn deriv_k(k: f64) -> Result<f64> {
    let m = Modulus::new(k)?;
    let c = CompleteIntegrals::new(m)?;
    let kp2 = m.k_prime * m.k_prime;
    Ok((c.e - kp2 * c.k) / (k * kp2))
}

/// `dE/dk = (E - K) / k`.
pub fn deriv_e(k: f64) -> Result<f64> {
    let m = Modulus::new(k)?;
    let (_, s) = agm_chain(m.k_prime, m.k)?;
    let big_k = k_of_complement(m.k_prime)?;
    Ok(-big_k * s / k)
}

/// The nome `q = exp(-pi K'/K)` with `tau = i K'/K`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nome {
    pub q: f64,
    pub tau_imag: f64,
    /// `dq/dk = pi^2 q / (2 k k'^2 K^2)`.
    pub dq_dk: f64,
}

pub fn nome(k: f64) -> Result<Nome> {
    let m = Modulus::new(k)?;
    nome_of(m)
}

pub fn nome_of(m: Modulus) -> Result<Nome> {
    let big_k = k_of_complement(m.k_prime)?;
    let big_kp = k_of_complement(m.k)?;
    let tau_imag = big_kp / big_k;
    let q = (-PI * tau_imag).exp();
    let dq_dk = PI * PI * q / (2.0 * m.k * m.k_prime * m.k_prime * big_k * big_k);
    Ok(Nome { q, tau_imag, dq_dk })
}

/// `K(k) - pi/2`, accurate for small `k` (hypergeometric series) and by
/// direct difference elsewhere.
pub(crate) fn k_minus_half_pi(k: f64, big_k: f64) -> f64 {
    if k < 0.7 {
        let k2 = k * k;
        let (mut term, mut sum) = (1.0_f64, 0.0_f64);
        for n in 1..400 {
            let r = (n as f64 - 0.5) / n as f64;
            term *= r * r * k2;
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
        }
        FRAC_PI_2 * sum
    } else {
        big_k - FRAC_PI_2
    }
}
