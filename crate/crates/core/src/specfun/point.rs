use std::f64::consts::{FRAC_PI_2, PI};

use super::elliptic::{agm_chain, k_minus_half_pi, CompleteIntegrals, Modulus};
use super::theta::theta_logs_direct;
use crate::error::{Error, Result};

/// Everything an integrand of `k, k', K, K', E, E'` may ask for at one
/// point, each quantity computed without cancellation.
///
/// Logs are kept alongside values so that monomials with large or
/// fractional exponents can be assembled in log space even when `k` itself
/// underflows.
#[derive(Debug, Clone, Copy)]
pub struct EllipticPoint {
    pub k: f64,
    pub kp: f64,
    pub ln_k: f64,
    pub ln_kp: f64,
    /// `1 - k`
    pub omk: f64,
    /// `1 - k' = k^2 / (1 + k')`
    pub omkp: f64,
    pub big_k: f64,
    pub big_kp: f64,
    pub ln_big_k: f64,
    pub ln_big_kp: f64,
    /// `K - pi/2`
    pub k_mhp: f64,
    /// `K' - pi/2`
    pub kp_mhp: f64,
    pub e: f64,
    pub ep: f64,
    /// `t = pi K'/K`, so that the nome is `e^{-t}`.
    pub t: f64,
}

impl EllipticPoint {
    /// The point with nome `e^{-t}`.
    pub fn from_t(t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Domain(format!("nome exponent {t} must be positive")));
        }
        if t >= PI {
            Self::direct(t)
        } else {
            Ok(Self::direct(PI * PI / t)?.swap())
        }
    }

    fn direct(t: f64) -> Result<Self> {
        let l = theta_logs_direct(t);
        let ln_k = 2.0 * (l.ln2 - l.ln3);
        let ln_kp = 2.0 * (l.ln4 - l.ln3);
        let k = ln_k.exp();
        let kp = ln_kp.exp();
        let big_k = FRAC_PI_2 * (2.0 * l.ln3).exp();
        let ln_big_k = FRAC_PI_2.ln() + 2.0 * l.ln3;
        let big_kp = t * big_k / PI;
        let ln_big_kp = t.ln() + ln_big_k - PI.ln();
        let k_mhp = FRAC_PI_2 * l.t3m1 * (2.0 + l.t3m1);
        let omkp = k * k / (1.0 + kp);
        let mut p = Self {
            k,
            kp,
            ln_k,
            ln_kp,
            omk: 1.0 - k,
            omkp,
            big_k,
            big_kp,
            ln_big_k,
            ln_big_kp,
            k_mhp,
            kp_mhp: big_kp - FRAC_PI_2,
            e: f64::NAN,
            ep: f64::NAN,
            t,
        };
        p.fill_e()?;
        Ok(p)
    }

    /// The point at modulus `m`.
    pub fn from_modulus(m: Modulus) -> Result<Self> {
        let c = CompleteIntegrals::new(m)?;
        let k = m.k;
        let kp = m.k_prime;
        Ok(Self {
            k,
            kp,
            ln_k: k.ln(),
            ln_kp: kp.ln(),
            omk: if k < 0.5 { 1.0 - k } else { kp * kp / (1.0 + k) },
            omkp: if kp < 0.5 { 1.0 - kp } else { k * k / (1.0 + kp) },
            big_k: c.k,
            big_kp: c.kp,
            ln_big_k: c.k.ln(),
            ln_big_kp: c.kp.ln(),
            k_mhp: k_minus_half_pi(k, c.k),
            kp_mhp: k_minus_half_pi(kp, c.kp),
            e: c.e,
            ep: c.ep,
            t: PI * c.kp / c.k,
        })
    }

    pub fn from_k(k: f64) -> Result<Self> {
        Self::from_modulus(Modulus::new(k)?)
    }

    /// `k <-> k'`: the point with nome `e^{-pi^2/t}`.
    pub fn swap(self) -> Self {
        Self {
            k: self.kp,
            kp: self.k,
            ln_k: self.ln_kp,
            ln_kp: self.ln_k,
            omk: self.omkp,
            omkp: self.omk,
            big_k: self.big_kp,
            big_kp: self.big_k,
            ln_big_k: self.ln_big_kp,
            ln_big_kp: self.ln_big_k,
            k_mhp: self.kp_mhp,
            kp_mhp: self.k_mhp,
            e: self.ep,
            ep: self.e,
            t: PI * PI / self.t,
        }
    }

    // Only reached with t >= pi, where k <= k'.
    fn fill_e(&mut self) -> Result<()> {
        let (_, s) = agm_chain(self.kp, self.k)?;
        let d = self.big_k * s;
        self.e = self.big_k - d;
        self.ep = (FRAC_PI_2 + self.big_kp * d) / self.big_k;
        Ok(())
    }
}
