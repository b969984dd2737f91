use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{q, q_to_f64, qgcd, Q};
use crate::error::{Error, Result};
use crate::lseries::bernoulli;

/// Truncated q-expansion `sum_j coeffs[j] q^{offset + j step}` with rational
/// exponents. Every coefficient with exponent `<= order` is exact; nothing
/// beyond `order` is stored.
#[derive(Clone, PartialEq, Eq)]
pub struct QSeries {
    pub offset: Q,
    pub step: Q,
    pub coeffs: Vec<Q>,
    pub order: Q,
}

impl QSeries {
    pub fn from_terms(terms: BTreeMap<Q, Q>, order: Q) -> Self {
        let terms: Vec<(Q, Q)> = terms.into_iter().filter(|(e, c)| !c.is_zero() && *e <= order).collect();
        let Some((offset, _)) = terms.first().cloned() else {
            return Self { offset: Q::zero(), step: Q::one(), coeffs: Vec::new(), order };
        };
        let step = terms.iter().skip(1).fold(Q::zero(), |g, (e, _)| qgcd(&g, &(e - &offset)));
        let step = if step.is_zero() { Q::one() } else { step };
        let len = ((&terms.last().unwrap().0 - &offset) / &step).to_integer().to_usize().unwrap() + 1;
        let mut coeffs = vec![Q::zero(); len];
        for (e, c) in terms {
            coeffs[((e - &offset) / &step).to_integer().to_usize().unwrap()] = c;
        }
        Self { offset, step, coeffs, order }
    }

    pub fn constant(c: Q, order: Q) -> Self {
        Self::from_terms(BTreeMap::from([(Q::zero(), c)]), order)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Q, &Q)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, c)| (&self.offset + &self.step * q(j as i64), c))
    }

    fn map(&self) -> BTreeMap<Q, Q> {
        self.terms().map(|(e, c)| (e, c.clone())).collect()
    }

    pub fn coeff(&self, e: &Q) -> Q {
        let j = (e - &self.offset) / &self.step;
        if !j.is_integer() || j.is_negative() {
            return Q::zero();
        }
        self.coeffs.get(j.to_integer().to_usize().unwrap()).cloned().unwrap_or_else(Q::zero)
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<Q> {
        self.terms().next().map(|(e, _)| e)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn truncate(&self, order: &Q) -> Self {
        Self::from_terms(self.map(), order.min(&self.order).clone())
    }

    pub fn scale(&self, a: &Q) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e, c * a)).collect(), self.order.clone())
    }

    /// Multiplication by `q^e`.
    pub fn shift(&self, e: &Q) -> Self {
        Self::from_terms(self.terms().map(|(x, c)| (x + e, c.clone())).collect(), &self.order + e)
    }

    pub fn add(&self, o: &QSeries) -> Self {
        let mut m = self.map();
        for (e, c) in o.terms() {
            *m.entry(e).or_insert_with(Q::zero) += c;
        }
        Self::from_terms(m, self.order.clone().min(o.order.clone()))
    }

    pub fn sub(&self, o: &QSeries) -> Self {
        self.add(&o.scale(&q(-1)))
    }

    pub fn mul(&self, o: &QSeries) -> Self {
        let (Some(va), Some(vb)) = (self.valuation(), o.valuation()) else {
            let order = match (self.valuation(), o.valuation()) {
                (Some(v), None) => &o.order + v,
                (None, Some(v)) => &self.order + v,
                _ => &self.order + &o.order,
            };
            return Self::from_terms(BTreeMap::new(), order);
        };
        let order = (&self.order + &vb).min(&o.order + &va);
        let mut m: BTreeMap<Q, Q> = BTreeMap::new();
        for (ea, ca) in self.terms() {
            if ea.clone() + &vb > order {
                break;
            }
            for (eb, cb) in o.terms() {
                let e = &ea + &eb;
                if e > order {
                    break;
                }
                *m.entry(e).or_insert_with(Q::zero) += ca * cb;
            }
        }
        Self::from_terms(m, order)
    }

    pub fn powi(&self, n: u32) -> Self {
        if n == 0 {
            return Self::constant(Q::one(), self.order.clone());
        }
        let mut acc: Option<Self> = None;
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = Some(match acc {
                    Some(a) => a.mul(&base),
                    None => base.clone(),
                });
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc.unwrap()
    }

    /// `self^alpha` for rational `alpha`. The leading term `c q^v` must
    /// have `c = 1` unless `alpha` is an integer.
    pub fn pow(&self, alpha: &Q) -> Result<Self> {
        let v = self.valuation().ok_or_else(|| Error::Domain("power of the zero series".into()))?;
        let c = self.coeff(&v);
        if alpha.is_integer() && !alpha.is_negative() {
            return Ok(self.powi(alpha.to_integer().to_u32().unwrap()));
        }
        let lead = if c.is_one() {
            Q::one()
        } else if alpha.is_integer() {
            let n = alpha.to_integer().to_i32().unwrap();
            if n < 0 {
                Q::one() / num_traits::pow(c.clone(), n.unsigned_abs() as usize)
            } else {
                num_traits::pow(c.clone(), n as usize)
            }
        } else {
            return Err(Error::Domain(format!("leading coefficient {c} has no rational power {alpha}")));
        };
        // u = self / (c q^v) = 1 + h; g = u^alpha solves u g' = alpha u' g
        // coefficientwise on the exponent grid.
        let u = self.shift(&-&v).scale(&(Q::one() / &c));
        let step = u.step.clone();
        let n = ((&u.order / &step).floor().to_integer().to_usize()).unwrap_or(0);
        let a: Vec<Q> = (0..=n).map(|j| u.coeff(&(&step * q(j as i64)))).collect();
        let mut g = vec![Q::one()];
        for j in 1..=n {
            // j g_j = sum_{i=1}^{j} (alpha i - (j - i)) a_i g_{j-i}
            let mut s = Q::zero();
            for i in 1..=j {
                if a[i].is_zero() {
                    continue;
                }
                s += (alpha * q(i as i64) - q((j - i) as i64)) * &a[i] * &g[j - i];
            }
            g.push(s / q(j as i64));
        }
        let m = g.into_iter().enumerate().map(|(j, x)| (&step * q(j as i64), x)).collect();
        let out = Self::from_terms(m, u.order.clone()).scale(&lead);
        Ok(out.shift(&(alpha * &v)))
    }

    pub fn inv(&self) -> Result<Self> {
        self.pow(&q(-1))
    }

    /// `q d/dq`, term by term.
    pub fn q_ddq(&self) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e.clone(), c * e)).collect(), self.order.clone())
    }

    /// `f(q^r)` for rational `r > 0`.
    pub fn substitute_power(&self, r: &Q) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e * r, c.clone())).collect(), &self.order * r)
    }

    /// `f(-q)`; exponents must be integers.
    pub fn negate_q(&self) -> Result<Self> {
        let mut m = BTreeMap::new();
        for (e, c) in self.terms() {
            if !e.is_integer() {
                return Err(Error::Domain(format!("(-q)^{e} is not real")));
            }
            let s = if e.to_integer().is_odd() { -c } else { c.clone() };
            m.insert(e, s);
        }
        Ok(Self::from_terms(m, self.order.clone()))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.terms().map(|(e, c)| q_to_f64(c) * x.powf(q_to_f64(&e))).sum()
    }

    /// Agreement of all coefficients up to the smaller order (and `up_to`).
    pub fn agrees_with(&self, o: &QSeries, up_to: &Q) -> bool {
        let order = self.order.clone().min(o.order.clone()).min(up_to.clone());
        self.truncate(&order).sub(&o.truncate(&order)).is_zero()
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            first = false;
            let c = c.abs();
            if e.is_zero() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "q^{e}")?;
            } else {
                write!(f, "{c}*q^{e}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + o(q^{})", self.order)
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries({self})")
    }
}

/// `theta_i(q)` exactly through exponent `order`. `theta_2` lives on the
/// grid `(n + 1/2)^2 = 1/4 + n(n+1)`.
pub fn theta_qseries(i: u8, order: usize) -> Result<QSeries> {
    if order == 0 {
        return Err(Error::Domain("order must be at least 1".into()));
    }
    let ord = q(order as i64);
    let mut m = BTreeMap::new();
    match i {
        2 => {
            let mut n = 0i64;
            loop {
                let e = Q::new(BigInt::from((2 * n + 1) * (2 * n + 1)), BigInt::from(4));
                if e > ord {
                    break;
                }
                m.insert(e, q(2));
                n += 1;
            }
        }
        3 | 4 => {
            m.insert(Q::zero(), Q::one());
            let mut n = 1i64;
            while (n * n) as usize <= order {
                let c = if i == 4 && n % 2 == 1 { -2 } else { 2 };
                m.insert(q(n * n), q(c));
                n += 1;
            }
        }
        _ => return Err(Error::Domain(format!("theta_{i} is not one of theta_2, theta_3, theta_4"))),
    }
    Ok(QSeries::from_terms(m, ord))
}

/// `sigma_r(m)`.
fn divisor_power_sum(m: usize, r: u32) -> BigInt {
    (1..=m).filter(|d| m.is_multiple_of(*d)).map(|d| num_traits::pow(BigInt::from(d), r as usize)).sum()
}

/// `E_w = 1 - (2w / B_w) sum_m sigma_{w-1}(m) q^m`.
pub fn eisenstein_qseries(weight: usize, order: usize) -> Result<QSeries> {
    if weight < 4 || weight % 2 == 1 {
        return Err(Error::Domain(format!("Eisenstein weight {weight} must be even and at least 4")));
    }
    let c = -q(2 * weight as i64) / bernoulli(weight);
    let mut m = BTreeMap::from([(Q::zero(), Q::one())]);
    for j in 1..=order {
        m.insert(q(j as i64), &c * Q::from_integer(divisor_power_sum(j, weight as u32 - 1)));
    }
    Ok(QSeries::from_terms(m, q(order as i64)))
}
