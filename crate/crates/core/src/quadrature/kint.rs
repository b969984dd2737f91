use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use serde::{Deserialize, Serialize};

use super::de::{integrate_tail, QuadResult};
use crate::error::{Error, Result};
use crate::specfun::EllipticPoint;

/// The quantities an integrand may reference at a point of `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Leaf {
    /// the modulus `k`
    K,
    /// `k'`
    Kp,
    /// `1 - k`
    Omk,
    /// `1 - k'`
    Omkp,
    /// `K(k)`
    BigK,
    /// `K'(k) = K(k')`
    BigKp,
    /// `K - pi/2`
    KmHalfPi,
    /// `K' - pi/2`
    KpmHalfPi,
    E,
    Ep,
}

impl Leaf {
    pub fn mirror(self) -> Self {
        use Leaf::*;
        match self {
            K => Kp,
            Kp => K,
            Omk => Omkp,
            Omkp => Omk,
            BigK => BigKp,
            BigKp => BigK,
            KmHalfPi => KpmHalfPi,
            KpmHalfPi => KmHalfPi,
            E => Ep,
            Ep => E,
        }
    }

    fn value(self, p: &EllipticPoint) -> f64 {
        use Leaf::*;
        match self {
            K => p.k,
            Kp => p.kp,
            Omk => p.omk,
            Omkp => p.omkp,
            BigK => p.big_k,
            BigKp => p.big_kp,
            KmHalfPi => p.k_mhp,
            KpmHalfPi => p.kp_mhp,
            E => p.e,
            Ep => p.ep,
        }
    }

    fn ln(self, p: &EllipticPoint) -> f64 {
        use Leaf::*;
        match self {
            K => p.ln_k,
            Kp => p.ln_kp,
            Omk => 2.0 * p.ln_kp - p.k.ln_1p(),
            Omkp => 2.0 * p.ln_k - p.kp.ln_1p(),
            BigK => p.ln_big_k,
            BigKp => p.ln_big_kp,
            // K - pi/2 ~ pi k^2 / 8 once it underflows.
            KmHalfPi if p.k_mhp < 1e-280 => (PI / 8.0).ln() + 2.0 * p.ln_k,
            KpmHalfPi if p.kp_mhp < 1e-280 => (PI / 8.0).ln() + 2.0 * p.ln_kp,
            _ => self.value(p).ln(),
        }
    }

    /// Behaviour at an endpoint: `(limit, growth)`, where `limit` is the
    /// finite nonzero limit if there is one.
    fn at(self, end: End) -> (Option<f64>, Growth) {
        use Leaf::*;
        let g = |order, logpow| Growth { order, logpow };
        match (self, end) {
            (K, End::Zero) => (None, g(1.0, 0.0)),
            (K, End::One) => (Some(1.0), g(0.0, 0.0)),
            (Kp, End::Zero) => (Some(1.0), g(0.0, 0.0)),
            (Kp, End::One) => (None, g(0.5, 0.0)),
            (Omk, End::Zero) => (Some(1.0), g(0.0, 0.0)),
            (Omk, End::One) => (None, g(1.0, 0.0)),
            (Omkp, End::Zero) => (None, g(2.0, 0.0)),
            (Omkp, End::One) => (Some(1.0), g(0.0, 0.0)),
            (BigK, End::Zero) => (Some(FRAC_PI_2), g(0.0, 0.0)),
            (BigK, End::One) => (None, g(0.0, 1.0)),
            (BigKp, End::Zero) => (None, g(0.0, 1.0)),
            (BigKp, End::One) => (Some(FRAC_PI_2), g(0.0, 0.0)),
            (KmHalfPi, End::Zero) => (None, g(2.0, 0.0)),
            (KmHalfPi, End::One) => (None, g(0.0, 1.0)),
            (KpmHalfPi, End::Zero) => (None, g(0.0, 1.0)),
            (KpmHalfPi, End::One) => (None, g(1.0, 0.0)),
            (E, End::Zero) => (Some(FRAC_PI_2), g(0.0, 0.0)),
            (E, End::One) => (Some(1.0), g(0.0, 0.0)),
            (Ep, End::Zero) => (Some(1.0), g(0.0, 0.0)),
            (Ep, End::One) => (Some(FRAC_PI_2), g(0.0, 0.0)),
        }
    }

    /// Growth of `leaf - limit` at an endpoint where the leaf has a finite
    /// nonzero limit.
    fn deviation(self, end: End) -> Growth {
        use Leaf::*;
        let g = |order, logpow| Growth { order, logpow };
        match (self, end) {
            (K, End::One) | (Omk, End::Zero) => g(1.0, 0.0),
            (Kp, End::Zero) => g(2.0, 0.0),
            (Omkp, End::One) => g(0.5, 0.0),
            (BigK, End::Zero) | (E, End::Zero) => g(2.0, 0.0),
            (BigKp, End::One) | (Ep, End::One) => g(1.0, 0.0),
            (E, End::One) => g(1.0, 1.0),
            (Ep, End::Zero) => g(2.0, 1.0),
            _ => g(0.0, 0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum End {
    /// `k -> 0`, measured in powers of `k`.
    Zero,
    /// `k -> 1`, measured in powers of `1 - k`.
    One,
}

/// Local behaviour `x^order * log(1/x)^logpow` near an endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Growth {
    pub order: f64,
    pub logpow: f64,
}

impl Growth {
    const ONE: Growth = Growth { order: 0.0, logpow: 0.0 };
    const ZERO: Growth = Growth { order: f64::INFINITY, logpow: 0.0 };

    fn mul(self, o: Growth) -> Growth {
        Growth { order: self.order + o.order, logpow: self.logpow + o.logpow }
    }

    fn pow(self, a: f64) -> Growth {
        if self.order.is_infinite() {
            return if a > 0.0 { self } else { Growth { order: f64::NEG_INFINITY, logpow: 0.0 } };
        }
        Growth { order: self.order * a, logpow: self.logpow * a }
    }

    /// The dominant of two summands (no cancellation assumed).
    fn dominant(self, o: Growth) -> Growth {
        if self.order < o.order || (self.order == o.order && self.logpow >= o.logpow) {
            self
        } else {
            o
        }
    }

    /// Integrability of `int_0 x^order log(1/x)^logpow dx`.
    pub fn integrable(self) -> bool {
        let o = self.order + 1.0;
        o > 1e-12 || (o.abs() <= 1e-12 && self.logpow < -1.0)
    }
}

/// An `O(1)`-style factor of an integrand, as an expression tree.
///
/// Sums are classified at the endpoints by their dominant term, so a
/// difference whose leading terms cancel should be written through the
/// cancellation-free leaves (`omk`, `omkp`, `km_half_pi`, ...).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Factor {
    Const(f64),
    Leaf(Leaf),
    /// `sum_j c_j x^j` in the given leaf.
    Poly(Leaf, Vec<f64>),
    Add(Vec<Factor>),
    Sub(Box<Factor>, Box<Factor>),
    Mul(Vec<Factor>),
    Div(Box<Factor>, Box<Factor>),
    Pow(Box<Factor>, f64),
}

/// A real number held as `sign * exp(ln)`.
#[derive(Debug, Clone, Copy)]
struct LogNum {
    sign: f64,
    ln: f64,
}

impl LogNum {
    fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            LogNum { sign: 0.0, ln: f64::NEG_INFINITY }
        } else {
            LogNum { sign: x.signum(), ln: x.abs().ln() }
        }
    }

    fn value(self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * self.ln.exp()
        }
    }

    fn sum(parts: &[LogNum]) -> LogNum {
        let m = parts.iter().filter(|p| p.sign != 0.0).map(|p| p.ln).fold(f64::NEG_INFINITY, f64::max);
        if m == f64::NEG_INFINITY {
            return LogNum::from_f64(0.0);
        }
        let s: f64 = parts.iter().filter(|p| p.sign != 0.0).map(|p| p.sign * (p.ln - m).exp()).sum();
        let r = LogNum::from_f64(s);
        LogNum { sign: r.sign, ln: r.ln + m }
    }
}

impl Factor {
    pub fn leaf(l: Leaf) -> Self {
        Factor::Leaf(l)
    }

    pub fn mirror(&self) -> Self {
        match self {
            Factor::Const(c) => Factor::Const(*c),
            Factor::Leaf(l) => Factor::Leaf(l.mirror()),
            Factor::Poly(l, c) => Factor::Poly(l.mirror(), c.clone()),
            Factor::Add(v) => Factor::Add(v.iter().map(Factor::mirror).collect()),
            Factor::Mul(v) => Factor::Mul(v.iter().map(Factor::mirror).collect()),
            Factor::Sub(a, b) => Factor::Sub(Box::new(a.mirror()), Box::new(b.mirror())),
            Factor::Div(a, b) => Factor::Div(Box::new(a.mirror()), Box::new(b.mirror())),
            Factor::Pow(a, e) => Factor::Pow(Box::new(a.mirror()), *e),
        }
    }

    pub fn uses_e(&self) -> bool {
        match self {
            Factor::Const(_) => false,
            Factor::Leaf(l) | Factor::Poly(l, _) => matches!(l, Leaf::E | Leaf::Ep),
            Factor::Add(v) | Factor::Mul(v) => v.iter().any(Factor::uses_e),
            Factor::Sub(a, b) | Factor::Div(a, b) => a.uses_e() || b.uses_e(),
            Factor::Pow(a, _) => a.uses_e(),
        }
    }

    /// Numeric value at a point.
    pub fn eval(&self, p: &EllipticPoint) -> f64 {
        self.eval_ln(p).value()
    }

    fn eval_ln(&self, p: &EllipticPoint) -> LogNum {
        match self {
            Factor::Const(c) => LogNum::from_f64(*c),
            Factor::Leaf(l) => LogNum { sign: 1.0, ln: l.ln(p) },
            Factor::Poly(l, c) => poly_ln(*l, c, p),
            Factor::Add(v) => LogNum::sum(&v.iter().map(|f| f.eval_ln(p)).collect::<Vec<_>>()),
            Factor::Sub(a, b) => {
                let b = b.eval_ln(p);
                LogNum::sum(&[a.eval_ln(p), LogNum { sign: -b.sign, ln: b.ln }])
            }
            Factor::Mul(v) => v.iter().fold(LogNum { sign: 1.0, ln: 0.0 }, |acc, f| {
                let x = f.eval_ln(p);
                LogNum { sign: acc.sign * x.sign, ln: acc.ln + x.ln }
            }),
            Factor::Div(a, b) => {
                let (a, b) = (a.eval_ln(p), b.eval_ln(p));
                if b.sign == 0.0 {
                    return LogNum { sign: f64::NAN, ln: f64::NAN };
                }
                LogNum { sign: a.sign * b.sign, ln: a.ln - b.ln }
            }
            Factor::Pow(a, e) => {
                let a = a.eval_ln(p);
                if a.sign < 0.0 && e.fract() != 0.0 {
                    return LogNum { sign: f64::NAN, ln: f64::NAN };
                }
                let sign = if a.sign < 0.0 && (*e as i64) % 2 != 0 { -1.0 } else { a.sign.abs() };
                LogNum { sign, ln: a.ln * e }
            }
        }
    }

    /// Endpoint growth, assuming sums do not cancel at leading order.
    pub fn growth(&self, end: End) -> Growth {
        match self {
            Factor::Const(c) => {
                if *c == 0.0 {
                    Growth::ZERO
                } else {
                    Growth::ONE
                }
            }
            Factor::Leaf(l) => l.at(end).1,
            Factor::Poly(l, c) => poly_growth(*l, c, end),
            Factor::Add(v) => v.iter().map(|f| f.growth(end)).fold(Growth::ZERO, Growth::dominant),
            Factor::Sub(a, b) => a.growth(end).dominant(b.growth(end)),
            Factor::Mul(v) => v.iter().map(|f| f.growth(end)).fold(Growth::ONE, Growth::mul),
            Factor::Div(a, b) => a.growth(end).mul(b.growth(end).pow(-1.0)),
            Factor::Pow(a, e) => a.growth(end).pow(*e),
        }
    }
}

fn poly_ln(l: Leaf, c: &[f64], p: &EllipticPoint) -> LogNum {
    let Some(j0) = c.iter().position(|x| *x != 0.0) else {
        return LogNum::from_f64(0.0);
    };
    let x = l.value(p);
    let rest = c[j0..].iter().rev().fold(0.0, |acc, cj| acc * x + cj);
    let r = LogNum::from_f64(rest);
    LogNum { sign: r.sign, ln: r.ln + j0 as f64 * l.ln(p) }
}

fn poly_growth(l: Leaf, c: &[f64], end: End) -> Growth {
    let Some(j0) = c.iter().position(|x| *x != 0.0) else {
        return Growth::ZERO;
    };
    let deg = c.iter().rposition(|x| *x != 0.0).unwrap();
    match l.at(end) {
        (Some(limit), _) => {
            // Multiplicity of the root at the limit, by synthetic division.
            let scale: f64 = c.iter().map(|x| x.abs() * limit.abs().max(1.0).powi(deg as i32)).sum();
            let mut q: Vec<f64> = c[..=deg].to_vec();
            let mut mult = 0;
            while q.len() > 1 {
                let mut r = vec![0.0; q.len() - 1];
                let mut acc = 0.0;
                for i in (0..q.len()).rev() {
                    acc = acc * limit + q[i];
                    if i > 0 {
                        r[i - 1] = acc;
                    }
                }
                if acc.abs() > 1e-12 * scale {
                    break;
                }
                mult += 1;
                q = r;
            }
            l.deviation(end).pow(mult as f64)
        }
        (None, g) if g.order > 0.0 => g.pow(j0 as f64),
        (None, g) => g.pow(deg as f64),
    }
}

/// `int_0^1 poly(k) k^alpha k'^beta K^gamma K'^delta factor dk`, scaled by
/// `prefactor`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KIntegralSpec {
    pub alpha: f64,
    pub beta: f64,
    pub gamma_k: f64,
    pub delta_kp: f64,
    /// Coefficients of a polynomial in `k`, lowest degree first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor: Option<Factor>,
    #[serde(default = "one")]
    pub prefactor: f64,
}

fn one() -> f64 {
    1.0
}

impl KIntegralSpec {
    pub fn monomial(alpha: f64, beta: f64, gamma_k: f64, delta_kp: f64) -> Self {
        Self { alpha, beta, gamma_k, delta_kp, poly: None, factor: None, prefactor: 1.0 }
    }

    pub fn with_poly(mut self, c: Vec<f64>) -> Self {
        self.poly = Some(c);
        self
    }

    pub fn with_factor(mut self, f: Factor) -> Self {
        self.factor = Some(match self.factor.take() {
            None => f,
            Some(g) => Factor::Mul(vec![g, f]),
        });
        self
    }

    pub fn with_prefactor(mut self, c: f64) -> Self {
        self.prefactor *= c;
        self
    }

    /// The same integral after `k -> k'` (the measure contributes `k / k'`
    /// in the new variable).
    pub fn mirror(&self) -> Self {
        let mut f = Vec::new();
        if let Some(c) = &self.poly {
            f.push(Factor::Poly(Leaf::Kp, c.clone()));
        }
        if let Some(g) = &self.factor {
            f.push(g.mirror());
        }
        Self {
            alpha: self.beta + 1.0,
            beta: self.alpha - 1.0,
            gamma_k: self.delta_kp,
            delta_kp: self.gamma_k,
            poly: None,
            factor: match f.len() {
                0 => None,
                1 => f.pop(),
                _ => Some(Factor::Mul(f)),
            },
            prefactor: self.prefactor,
        }
    }

    pub fn growth(&self, end: End) -> Growth {
        let mono = match end {
            End::Zero => Growth { order: self.alpha, logpow: self.delta_kp },
            End::One => Growth { order: 0.5 * self.beta, logpow: self.gamma_k },
        };
        let mut g = mono;
        if let Some(c) = &self.poly {
            g = g.mul(poly_growth(Leaf::K, c, end));
        }
        if let Some(f) = &self.factor {
            g = g.mul(f.growth(end));
        }
        g
    }

    pub fn check_integrable(&self) -> Result<()> {
        for (end, name) in [(End::Zero, "k = 0"), (End::One, "k = 1")] {
            let g = self.growth(end);
            if !g.integrable() {
                return Err(Error::Integrability(format!(
                    "at {name} the integrand behaves like x^{} log(1/x)^{}",
                    g.order, g.logpow
                )));
            }
        }
        Ok(())
    }

    /// `ln |integrand * dk/dt|` and its sign at a point (with `dk/dt` up to
    /// sign: `dk = -(2 k k'^2 K^2 / pi^2) dt`).
    fn ln_t_integrand(&self, p: &EllipticPoint) -> (f64, f64) {
        let mut ln = (self.alpha + 1.0) * p.ln_k
            + (self.beta + 2.0) * p.ln_kp
            + (self.gamma_k + 2.0) * p.ln_big_k
            + self.delta_kp * p.ln_big_kp
            + LN_2
            - 2.0 * PI.ln();
        let mut sign = 1.0;
        if let Some(c) = &self.poly {
            let x = poly_ln(Leaf::K, c, p);
            sign *= x.sign;
            ln += x.ln;
        }
        if let Some(f) = &self.factor {
            let x = f.eval_ln(p);
            sign *= x.sign;
            ln += x.ln;
        }
        (sign, ln)
    }

    /// The integrand in `k` at a point (for checks; quadrature runs in `t`).
    pub fn integrand_at(&self, p: &EllipticPoint) -> f64 {
        let (sign, ln) = self.ln_t_integrand(p);
        let jac = LN_2 + p.ln_k + 2.0 * p.ln_kp + 2.0 * p.ln_big_k - 2.0 * PI.ln();
        if sign == 0.0 {
            0.0
        } else {
            sign * (ln - jac).exp()
        }
    }
}

fn signed_exp(sign: f64, ln: f64) -> f64 {
    if sign == 0.0 || ln == f64::NEG_INFINITY {
        0.0
    } else {
        sign * ln.exp()
    }
}

/// Evaluates a [`KIntegralSpec`] after checking integrability at both ends.
///
/// The integral runs in the nome variable `t = pi K'/K`, where
/// `int_0^1 F dk = int_0^inf F 2 k k'^2 K^2 / pi^2 dt`; the range `t < pi`
/// is folded onto `(pi, inf)` by `t = pi^2/u`, which swaps `k` and `k'`.
/// Both endpoint singularities of the `k` form become exponential or
/// algebraic decay, and every factor is assembled in log space.
pub fn k_integral(spec: &KIntegralSpec, tol: f64) -> Result<QuadResult> {
    spec.check_integrable()?;
    k_integral_unchecked(spec, tol)
}

/// As [`k_integral`] without the endpoint classification.
pub fn k_integral_unchecked(spec: &KIntegralSpec, tol: f64) -> Result<QuadResult> {
    let upper = integrate_tail(
        |t, _| {
            let p = EllipticPoint::from_t(t)?;
            let (s, ln) = spec.ln_t_integrand(&p);
            Ok(signed_exp(s, ln))
        },
        PI,
        tol,
    )?;
    let lower = integrate_tail(
        |u, _| {
            let p = EllipticPoint::from_t(PI * PI / u)?;
            let (s, ln) = spec.ln_t_integrand(&p);
            Ok(signed_exp(s, ln + 2.0 * (PI / u).ln()))
        },
        PI,
        tol,
    )?;
    let value = spec.prefactor * (upper.value + lower.value);
    Ok(QuadResult {
        value,
        error_estimate: spec.prefactor.abs() * (upper.error_estimate + lower.error_estimate),
        level: upper.level.max(lower.level),
        evaluations: upper.evaluations + lower.evaluations,
    })
}
