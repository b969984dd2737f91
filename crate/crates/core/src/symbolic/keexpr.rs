use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{q, q_to_f64, qr, Poly, RatFunc, Q};
use super::qseries::{theta_qseries, QSeries};
use crate::error::{Error, Result};
use crate::quadrature::{Factor, KIntegralSpec, Leaf};
use crate::specfun::{gamma_fn, CompleteIntegrals, Modulus};

/// Monomial `sqrt(2)^{sqrt2} pi^{pi_pow} K^{k_pow} E^{e_pow}`; the rational
/// coefficient in `k` sits beside it in [`KEExpr`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct KEMono {
    pub k_pow: Q,
    pub e_pow: u32,
    pub pi_pow: Q,
    pub sqrt2: bool,
}

impl KEMono {
    pub fn new(k_pow: Q, e_pow: u32, pi_pow: Q) -> Self {
        Self { k_pow, e_pow, pi_pow, sqrt2: false }
    }

    fn mul(&self, o: &KEMono) -> (KEMono, Q) {
        let both = self.sqrt2 && o.sqrt2;
        let m = KEMono {
            k_pow: &self.k_pow + &o.k_pow,
            e_pow: self.e_pow + o.e_pow,
            pi_pow: &self.pi_pow + &o.pi_pow,
            sqrt2: self.sqrt2 ^ o.sqrt2,
        };
        (m, if both { q(2) } else { Q::one() })
    }
}

/// Finite sum of `c(k) * monomial` with `c` a reduced rational function of
/// the modulus `k`. Zero terms are pruned.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct KEExpr {
    terms: BTreeMap<KEMono, RatFunc>,
}

impl KEExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(c: RatFunc, m: KEMono) -> Self {
        let mut e = Self::zero();
        e.push(m, c);
        e
    }

    pub fn constant(c: Q) -> Self {
        Self::term(RatFunc::constant(c), KEMono::new(Q::zero(), 0, Q::zero()))
    }

    /// `c(k) pi^{pi_pow} K^{k_pow}`.
    pub fn k_power(c: Poly, k_pow: i64, pi_pow: i64) -> Self {
        Self::term(RatFunc::poly(c), KEMono::new(q(k_pow), 0, q(pi_pow)))
    }

    /// `theta_3 = sqrt(2K/pi)`.
    pub fn theta3() -> Self {
        Self::term(RatFunc::one(), KEMono { k_pow: qr(1, 2), e_pow: 0, pi_pow: qr(-1, 2), sqrt2: true })
    }

    /// `theta_2^2 = 2kK/pi`.
    pub fn theta2_squared() -> Self {
        Self::k_power(Poly::from_ints(&[0, 2]), 1, -1)
    }

    fn push(&mut self, m: KEMono, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(RatFunc::zero);
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&KEMono, &RatFunc)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_e_free(&self) -> bool {
        self.terms.keys().all(|m| m.e_pow == 0)
    }

    pub fn add(&self, o: &KEExpr) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.push(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &KEExpr) -> Self {
        self.add(&o.scale(&q(-1)))
    }

    pub fn scale(&self, a: &Q) -> Self {
        self.mul_rat(&RatFunc::constant(a.clone()))
    }

    pub fn mul_rat(&self, r: &RatFunc) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.push(m.clone(), c * r);
        }
        out
    }

    /// Multiplication by `pi^e`.
    pub fn mul_pi(&self, e: &Q) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.push(KEMono { pi_pow: &m.pi_pow + e, ..m.clone() }, c.clone());
        }
        out
    }

    pub fn mul(&self, o: &KEExpr) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let (m, f) = ma.mul(mb);
                out.push(m, (ca * cb).scale(&f));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(Q::one()), |acc, _| acc.mul(self))
    }

    /// `q d/dq = (2 k k'^2 K^2 / pi^2) d/dk` with
    /// `dK/dk = (E - k'^2 K)/(k k'^2)`, `dE/dk = (E - K)/k`.
    pub fn q_ddq(&self) -> Self {
        let kp2 = RatFunc::poly(Poly::one_minus_x2());
        let two = q(2);
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let pi = &m.pi_pow - q(2);
            let at = |dk: i64, de: i64| KEMono { k_pow: &m.k_pow + q(dk), e_pow: (m.e_pow as i64 + de) as u32, pi_pow: pi.clone(), sqrt2: m.sqrt2 };
            // the coefficient
            let dc = &(&RatFunc::poly(Poly::from_ints(&[0, 2])) * &kp2) * &c.deriv();
            out.push(at(2, 0), dc);
            // K^a
            if !m.k_pow.is_zero() {
                let a2 = &m.k_pow * &two;
                out.push(at(1, 1), c.scale(&a2));
                out.push(at(2, 0), -&(&kp2 * c).scale(&a2));
            }
            // E^b
            if m.e_pow > 0 {
                let b2 = q(2 * m.e_pow as i64);
                out.push(at(2, 0), (&kp2 * c).scale(&b2));
                out.push(at(3, -1), -&(&kp2 * c).scale(&b2));
            }
        }
        out
    }

    pub fn q_ddq_n(&self, n: u32) -> Self {
        (0..n).fold(self.clone(), |e, _| e.q_ddq())
    }

    /// The `E`-free part and whether anything else was present.
    pub fn split_e(&self) -> (KEExpr, KEExpr) {
        let mut free = Self::zero();
        let mut rest = Self::zero();
        for (m, c) in &self.terms {
            if m.e_pow == 0 {
                free.push(m.clone(), c.clone());
            } else {
                rest.push(m.clone(), c.clone());
            }
        }
        (free, rest)
    }

    /// The single term of an expression with one monomial.
    pub fn single(&self) -> Option<(&KEMono, &RatFunc)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn eval_at(&self, c: &CompleteIntegrals) -> f64 {
        let k = c.modulus.k;
        self.terms
            .iter()
            .map(|(m, r)| {
                let s2 = if m.sqrt2 { std::f64::consts::SQRT_2 } else { 1.0 };
                let mut v = r.eval_f64(k) * s2 * std::f64::consts::PI.powf(q_to_f64(&m.pi_pow));
                v *= c.k.powf(q_to_f64(&m.k_pow));
                v *= c.e.powi(m.e_pow as i32);
                v
            })
            .sum()
    }

    pub fn eval(&self, k: f64) -> Result<f64> {
        Ok(self.eval_at(&CompleteIntegrals::new(Modulus::new(k)?)?))
    }

    /// Exact re-expansion in the nome through exponent `order`, graded by
    /// the irrational factor: `(pi power, sqrt 2 present) -> series`.
    pub fn to_qseries(&self, order: usize) -> Result<BTreeMap<(Q, bool), QSeries>> {
        let t2 = theta_qseries(2, order + 2)?;
        let t3 = theta_qseries(3, order + 2)?;
        let t4 = theta_qseries(4, order + 2)?;
        let t3_inv = t3.inv()?;
        let k = t2.powi(2).mul(&t3_inv.powi(2));
        // E = (pi/2) [theta_4^4/theta_3^2 + 4 (q d/dq theta_3)/theta_3^3]
        let e_unit = t4.powi(4).mul(&t3_inv.powi(2)).add(&t3.q_ddq().mul(&t3_inv.powi(3)).scale(&q(4)));
        let horner = |p: &Poly| -> QSeries {
            p.coeffs().iter().rev().fold(QSeries::constant(Q::zero(), k.order.clone()), |acc, a| acc.mul(&k).add(&QSeries::constant(a.clone(), k.order.clone())))
        };
        let mut out: BTreeMap<(Q, bool), QSeries> = BTreeMap::new();
        for (m, c) in &self.terms {
            // K^a E^b = (pi/2)^{a+b} theta_3^{2a} e_unit^b
            let w = &m.k_pow + q(m.e_pow as i64);
            let mut s = horner(c.num()).mul(&horner(c.den()).inv()?);
            s = s.mul(&t3.pow(&(&m.k_pow * q(2)))?).mul(&e_unit.powi(m.e_pow));
            // 2^{-w} = 2^{-w - h} sqrt(2)^{2h}, h in {0, 1/2}
            let h = if w.is_integer() { Q::zero() } else { qr(1, 2) };
            let two_int = -(&w + &h);
            let f = two_int.to_integer().to_i32().ok_or_else(|| Error::Domain("power of two out of range".into()))?;
            let mut scale = pow2(f);
            let mut sqrt2 = m.sqrt2;
            if !h.is_zero() {
                if sqrt2 {
                    scale *= q(2);
                    sqrt2 = false;
                } else {
                    sqrt2 = true;
                }
            }
            let key = (&m.pi_pow + &w, sqrt2);
            let s = s.scale(&scale).truncate(&q(order as i64));
            let slot = out.remove(&key);
            out.insert(key, match slot {
                Some(x) => x.add(&s),
                None => s,
            });
        }
        out.retain(|_, s| !s.is_zero());
        Ok(out)
    }

    /// The series of an expression whose irrational factors cancel; an
    /// error otherwise.
    pub fn to_rational_qseries(&self, order: usize) -> Result<QSeries> {
        let graded = self.to_qseries(order)?;
        let mut it = graded.into_iter();
        match (it.next(), it.next()) {
            (None, _) => Ok(QSeries::constant(Q::zero(), q(order as i64))),
            (Some(((pi, s2), s)), None) if pi.is_zero() && !s2 => Ok(s),
            (Some(((pi, s2), _)), _) => Err(Error::Domain(format!("expression carries pi^{pi}{}", if s2 { " sqrt(2)" } else { "" }))),
        }
    }

    /// Normalized Mellin transform at `s` with `q = e^{-t}`, as a `K`
    /// integral: `t = pi K'/K`, `dt = -pi^2 dk / (2 k k'^2 K^2)`.
    pub fn mellin_k_spec(&self, s: f64) -> Result<KIntegralSpec> {
        if self.is_zero() {
            return Err(Error::Domain("Mellin transform of zero".into()));
        }
        // Common polynomial content of the numerators goes into `poly`.
        let mut common: Option<Poly> = None;
        for c in self.terms.values() {
            common = Some(match common {
                None => c.num().monic(),
                Some(g) => g.gcd(c.num()),
            });
        }
        let common = common.unwrap();
        let mut parts = Vec::new();
        for (m, c) in &self.terms {
            let rest = RatFunc::new(c.num().divrem(&common).0, c.den().clone())?;
            let scalar = (if m.sqrt2 { std::f64::consts::SQRT_2 } else { 1.0 }) * std::f64::consts::PI.powf(q_to_f64(&m.pi_pow));
            let mut f = vec![Factor::Const(scalar)];
            if rest.num().degree() != Some(0) {
                f.push(Factor::Poly(Leaf::K, rest.num().to_f64()));
            } else {
                f[0] = Factor::Const(scalar * q_to_f64(&rest.num().coeff(0)));
            }
            if rest.den().degree() != Some(0) {
                f = vec![Factor::Div(Box::new(Factor::Mul(f)), Box::new(Factor::Poly(Leaf::K, rest.den().to_f64())))];
            }
            if !m.k_pow.is_zero() {
                f.push(Factor::Pow(Box::new(Factor::Leaf(Leaf::BigK)), q_to_f64(&m.k_pow)));
            }
            if m.e_pow > 0 {
                f.push(Factor::Pow(Box::new(Factor::Leaf(Leaf::E)), m.e_pow as f64));
            }
            parts.push(Factor::Mul(f));
        }
        let factor = if parts.len() == 1 { parts.pop().unwrap() } else { Factor::Add(parts) };
        let pre = std::f64::consts::PI.powf(s + 1.0) / (2.0 * gamma_fn(s)?);
        let mut spec = KIntegralSpec::monomial(-1.0, -2.0, -s - 1.0, s - 1.0).with_factor(factor).with_prefactor(pre);
        if common.degree() != Some(0) {
            spec = spec.with_poly(common.to_f64());
        }
        Ok(spec)
    }
}

pub(crate) fn pow2(e: i32) -> Q {
    let p = Q::from_integer(num_traits::pow(num_bigint::BigInt::from(2), e.unsigned_abs() as usize));
    if e >= 0 {
        p
    } else {
        Q::one() / p
    }
}

impl fmt::Display for KEExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "[{c}]")?;
            if m.sqrt2 {
                f.write_str("*sqrt(2)")?;
            }
            if !m.pi_pow.is_zero() {
                write!(f, "*pi^({})", m.pi_pow)?;
            }
            if !m.k_pow.is_zero() {
                if m.k_pow.is_negative() || !m.k_pow.is_integer() {
                    write!(f, "*K^({})", m.k_pow)?;
                } else {
                    write!(f, "*K^{}", m.k_pow)?;
                }
            }
            if m.e_pow > 0 {
                write!(f, "*E^{}", m.e_pow)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for KEExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KEExpr({self})")
    }
}
