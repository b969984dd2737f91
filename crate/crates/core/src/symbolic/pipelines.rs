use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::keexpr::{pow2, KEExpr, KEMono};
use super::poly::{q, qr, Poly, RatFunc, Q};
use super::qseries::QSeries;
use super::weighted::eisenstein_as_e4e6;
use crate::error::{Error, Result};
use crate::lseries::bernoulli;

/// Where the modular argument sits relative to the modulus `k = k(q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EisensteinVariant {
    /// `E(q^2)`
    QSquared,
    /// `E(q)`
    Q,
    /// `E(-q)`
    MinusQ,
}

/// `(E_4, E_6)` of the given argument as `c(k) K^w / pi^w`.
fn e4_e6_forms(v: EisensteinVariant) -> (KEExpr, KEExpr) {
    let (p4, p6) = match v {
        EisensteinVariant::QSquared => (
            Poly::from_ints(&[16, 0, -16, 0, 16]),
            &(&Poly::from_ints(&[32, 0, 32]) * &Poly::from_ints(&[1, 0, -2])) * &Poly::from_ints(&[2, 0, -1]),
        ),
        EisensteinVariant::Q => (Poly::from_ints(&[16, 0, 224, 0, 16]), &Poly::from_ints(&[64, 0, 64]) * &Poly::from_ints(&[1, 0, -34, 0, 1])),
        EisensteinVariant::MinusQ => (
            Poly::from_ints(&[16, 0, -256, 0, 256]),
            &Poly::from_ints(&[64, 0, -128]) * &Poly::from_ints(&[1, 0, 32, 0, -32]),
        ),
    };
    (KEExpr::k_power(p4, 4, -4), KEExpr::k_power(p6, 6, -6))
}

/// `E_w` at the variant's argument as an `E`-free expression
/// `c(k) K^w / pi^w`.
pub fn eisenstein_k_form(weight: usize, variant: EisensteinVariant) -> Result<KEExpr> {
    let p = eisenstein_as_e4e6(weight)?;
    let (e4, e6) = e4_e6_forms(variant);
    Ok(p.eval_with(&e4, &e6, KEExpr::constant(Q::one()), |a, b| a.add(b), |a, b| a.mul(b), |a, c| a.scale(c), KEExpr::zero()))
}

/// The polynomial `c(k)` of `c(k) K^w pi^{-w}`.
fn k_form_poly(e: &KEExpr, w: i64) -> Result<Poly> {
    if e.is_zero() {
        return Ok(Poly::zero());
    }
    match e.single() {
        Some((m, c)) if m.e_pow == 0 && m.k_pow == q(w) && m.pi_pow == q(-w) && !m.sqrt2 => {
            c.as_poly().cloned().ok_or_else(|| Error::Domain("non-polynomial Eisenstein form".into()))
        }
        _ => Err(Error::Domain(format!("{e} is not of the form c(k) K^{w} / pi^{w}"))),
    }
}

/// Closed form `int_0^1 k p_n(k) K^{2n-1-s} K'^{s-1} dk
///   = c pi^{2n-1-s} Gamma(s) eta(s+1-2n) lambda(s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PnResult {
    pub n: usize,
    /// `Q_n` with `E_{2n}(q^2) - E_{2n}(-q) = Q_n(k) K^{2n} / pi^{2n}`.
    pub q_n: Poly,
    /// Primitive integer polynomial, even, lowest coefficient positive.
    pub p_n: Poly,
    pub constant: Q,
}

impl PnResult {
    /// `p_n(k') = sign * p_n(k)`, found exactly; `None` if neither sign works.
    pub fn complement_sign(&self) -> Option<i32> {
        let c = self.p_n.complement_even().ok()?;
        if c == self.p_n {
            Some(1)
        } else if c == -&self.p_n {
            Some(-1)
        } else {
            None
        }
    }
}

pub fn compute_pn(n: usize) -> Result<PnResult> {
    if n < 2 {
        return Err(Error::Domain(format!("p_n needs n >= 2, got {n}")));
    }
    let w = 2 * n as i64;
    let a = k_form_poly(&eisenstein_k_form(2 * n, EisensteinVariant::QSquared)?, w)?;
    let b = k_form_poly(&eisenstein_k_form(2 * n, EisensteinVariant::MinusQ)?, w)?;
    let q_n = &a - &b;
    // Q_n / (k k'^2) = k p_n
    let raw = q_n.div_exact(&(&Poly::from_ints(&[0, 0, 1]) * &Poly::one_minus_x2()))?;
    let (content, p_n) = raw.primitive();
    // Mellin of the Lambert side: -(4n/B_2n)(1-2^-s)(1-2^{2n-s}) zeta zeta;
    // of the K side: pi^{s+1-2n}/2 int k raw K^{2n-1-s} K'^{s-1}.
    let lambert = -q(4 * n as i64) / bernoulli(2 * n);
    let constant = q(2) * lambert / content;
    Ok(PnResult { n, q_n, p_n, constant })
}

/// `sum_n n^{2b} q^{n^2}`: `b` applications of `q d/dq` to
/// `theta_3 = sqrt(2K/pi)`.
pub fn theta_power_sum(b: u32) -> KEExpr {
    KEExpr::theta3().q_ddq_n(b)
}

/// Binomial coefficient as a rational.
fn binom(n: u64, k: u64) -> Q {
    let mut acc = Q::one();
    for i in 0..k {
        acc = acc * q((n - i) as i64) / q((i + 1) as i64);
    }
    acc
}

/// `f_{4p}(q) = sum_{m,n} (m - i n)^{4p} q^{m^2+n^2} = G_p(k) K^{4p+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct F4pResult {
    pub p: usize,
    /// `G_p` including every rational factor; `f_{4p} = G_p K^{4p+1} pi^{pi_pow}`.
    pub g: RatFunc,
    pub pi_pow: Q,
    pub expr: KEExpr,
}

pub fn compute_f4p(p: usize) -> Result<F4pResult> {
    if p == 0 {
        return Err(Error::Domain("f_{4p} needs p >= 1".into()));
    }
    let pp = 2 * p as u32;
    let sums: Vec<KEExpr> = (0..=pp).map(theta_power_sum).collect();
    let mut f = KEExpr::zero();
    for b in 0..=pp {
        let c = binom(4 * p as u64, 2 * b as u64) * if b % 2 == 1 { q(-1) } else { Q::one() };
        f = f.add(&sums[(pp - b) as usize].mul(&sums[b as usize]).scale(&c));
    }
    let (free, rest) = f.split_e();
    if !rest.is_zero() {
        return Err(Error::EResidue(format!("f_{} keeps {rest}", 4 * p)));
    }
    let (m, g) = free.single().ok_or_else(|| Error::EResidue(format!("f_{} = {free} is not a single K power", 4 * p)))?;
    if m.k_pow != q(4 * p as i64 + 1) || m.sqrt2 {
        return Err(Error::EResidue(format!("f_{} = {free} has the wrong weight", 4 * p)));
    }
    Ok(F4pResult { p, g: g.clone(), pi_pow: m.pi_pow.clone(), expr: free.clone() })
}

/// `int_0^1 g_p(k) K'^{4p-1} dk = constant * Gamma(1/4)^{8p} * pi^{pi_pow}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GpResult {
    pub p: usize,
    /// Primitive integer polynomial.
    pub g_p: Poly,
    pub constant: Q,
    pub gamma_quarter_pow: u32,
    pub pi_pow: i64,
}

impl GpResult {
    pub fn rhs_f64(&self) -> f64 {
        let g = crate::specfun::gamma_fn(0.25).unwrap();
        super::poly::q_to_f64(&self.constant) * g.powi(self.gamma_quarter_pow as i32) * std::f64::consts::PI.powi(self.pi_pow as i32)
    }
}

/// Mellin transform at `s = 4p` of `f_{4p} = G_p K^{4p+1}`: the lattice
/// side is `2 zeta(4p) E_{4p}(i)` with `E_{4p}(i) = c E_4(i)^p`,
/// `E_4(i) = 3 Gamma(1/4)^8 / (64 pi^6)`.
pub fn compute_gp(p: usize) -> Result<GpResult> {
    let f = compute_f4p(p)?;
    let g = f.g.as_poly().ok_or_else(|| Error::Domain(format!("G_{p} = {} is not a polynomial", f.g)))?;
    // g_p = G_p / (k k'^2)
    let raw = g.div_exact(&(&Poly::x() * &Poly::one_minus_x2()))?;
    let (content, g_p) = raw.primitive();
    let e = f.pi_pow.to_integer().to_i64().ok_or_else(|| Error::Domain("non-integral pi power".into()))?;
    let w = 4 * p;
    let c_p = eisenstein_as_e4e6(w)?.e4_power_coefficient();
    // int raw K'^{4p-1} = 2 Gamma(4p) pi^{-e-4p-1} 2 zeta(4p) E_4p(i),
    // zeta(4p) = -B_{4p} (2 pi)^{4p} / (2 (4p)!).
    let three_64 = qr(3, 64);
    let mut r = -q(2) * bernoulli(w) * pow2(w as i32) / q(w as i64) * c_p;
    for _ in 0..p {
        r *= &three_64;
    }
    let constant = r / content;
    Ok(GpResult { p, g_p, constant, gamma_quarter_pow: 8 * p as u32, pi_pow: -6 * p as i64 - e - 1 })
}

/// `g(q) = sum_{m,n} Re (n - sqrt(2) i m)^{2P} q^{n^2 + 2m^2}` rewritten
/// through `lambda = k(q^2)`: `g = sqrt(1 + lambda) * expr(lambda)`.
///
/// Uses `k(q)^2 = 4 lambda / (1 + lambda)^2`, `K(k) = (1 + lambda) K(lambda)`,
/// `E(k) = (2 E(lambda) - (1 - lambda^2) K(lambda)) / (1 + lambda)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sqrt2FormTheta {
    pub big_p: usize,
    /// `E`-free, in `lambda`.
    pub expr: KEExpr,
    /// `R(c)` with `int_0^1 R(c) (1+c)^{-1/2} K(c)^{2P-1} dc` the Mellin
    /// image at `s = 2P`, up to `integral_scale`; `c = k'(q)`.
    pub integrand: Poly,
    /// `int_0^1 R (1+c)^{-1/2} K^{2P-1} dc = integral_scale * M_{2P}[g]`.
    pub integral_scale: f64,
}

/// Substitutes the ascending Landen map into an expression in `k` whose
/// coefficients are even and whose `K`-weights are all half-odd-integers:
/// returns `expr(lambda)` with `expr(k) = sqrt(1 + lambda) * expr(lambda)`.
fn landen_up(e: &KEExpr) -> Result<KEExpr> {
    let lam1 = Poly::from_ints(&[1, 1]);
    let k2 = RatFunc::new(Poly::from_ints(&[0, 4]), lam1.pow(2))?;
    let mut out = KEExpr::zero();
    for (m, c) in e.terms() {
        let (num, den) = (c.num(), c.den());
        if !num.is_even() || !den.is_even() {
            return Err(Error::Domain(format!("coefficient {c} is not even in k")));
        }
        let half = |p: &Poly| Poly::new(p.coeffs().iter().step_by(2).cloned().collect());
        let coef = RatFunc::new(half(num), half(den))?.compose(&k2)?;
        let a = &m.k_pow - qr(1, 2);
        if !a.is_integer() {
            return Err(Error::Domain(format!("K^{} is not a half-odd power", m.k_pow)));
        }
        let a = a.to_integer().to_i32().unwrap();
        // K(k)^{k_pow} = sqrt(1+lambda) (1+lambda)^a K^{k_pow}
        let kfac = RatFunc::poly(lam1.clone()).pow(a)?;
        let mut t = KEExpr::term(&coef * &kfac, KEMono { e_pow: 0, ..m.clone() });
        // E(k) = (2E - (1 - lambda^2) K) / (1 + lambda)
        let e_img = KEExpr::term(RatFunc::new(Poly::from_ints(&[2]), lam1.clone())?, KEMono::new(Q::zero(), 1, Q::zero())).sub(&KEExpr::term(
            RatFunc::new(Poly::from_ints(&[1, 0, -1]), lam1.clone())?,
            KEMono::new(Q::one(), 0, Q::zero()),
        ));
        t = t.mul(&e_img.pow(m.e_pow));
        out = out.add(&t);
    }
    Ok(out)
}

pub fn sqrt2_form_theta(big_p: usize) -> Result<Sqrt2FormTheta> {
    if big_p < 2 {
        return Err(Error::Domain("the sqrt(2) construction needs P >= 2".into()));
    }
    let bp = big_p as u32;
    let sums: Vec<KEExpr> = (0..=bp).map(theta_power_sum).collect();
    let mut g = KEExpr::zero();
    for b in 0..=bp {
        let c = binom(2 * big_p as u64, 2 * b as u64) * q(-2).pow(b as i32);
        // sum_n n^{2P-2b} q^{n^2} in lambda (carries sqrt(1+lambda)),
        // sum_m m^{2b} q^{2m^2} is the same series at q^2, i.e. in lambda.
        g = g.add(&landen_up(&sums[(bp - b) as usize])?.mul(&sums[b as usize]).scale(&c));
    }
    let (free, rest) = g.split_e();
    if !rest.is_zero() {
        return Err(Error::EResidue(format!("g keeps {rest}")));
    }
    let (m, gl) = free.single().ok_or_else(|| Error::EResidue(format!("g = {free} is not a single K power")))?;
    let n = 2 * big_p as i32 - 1;
    // lambda = (1-c)/(1+c): R(c) = G((1-c)/(1+c)) (1+c)^{n+1} / (c (1-c))
    let lam = RatFunc::new(Poly::from_ints(&[1, -1]), Poly::from_ints(&[1, 1]))?;
    let r = &(&gl.compose(&lam)? * &RatFunc::poly(Poly::from_ints(&[1, 1])).pow(n + 1)?) * &RatFunc::new(Poly::one(), Poly::from_ints(&[0, 1, -1]))?;
    let integrand = r.as_poly().cloned().ok_or_else(|| Error::NonDivisible(format!("R(c) = {r}")))?;
    // M_s[g] = (1/Gamma(s)) int g t^{s-1} dt with 2t = pi K'(lambda)/K(lambda)
    //   = pi^{e+s+1} 2^{1-s} / (4 Gamma(s)) int sqrt(1+lambda) G K'(lambda)^n d lambda / (lambda lambda'^2),
    // and with lambda = (1-c)/(1+c), K'(lambda) = (1+c) K(c),
    // sqrt(1+lambda) = sqrt(2/(1+c)) the last integral is sqrt(2)/2 int R (1+c)^{-1/2} K(c)^n dc.
    let s = 2.0 * big_p as f64;
    let mut pre = std::f64::consts::PI.powf(super::poly::q_to_f64(&m.pi_pow) + s + 1.0) * 2f64.powf(1.0 - s) / 4.0;
    pre *= std::f64::consts::SQRT_2 / 2.0;
    if m.sqrt2 {
        pre *= std::f64::consts::SQRT_2;
    }
    let pre = pre / crate::specfun::gamma_fn(s)?;
    Ok(Sqrt2FormTheta { big_p, expr: free.clone(), integrand, integral_scale: 1.0 / pre })
}

/// An exact identity `series = expr` in the nome, `derivatives` applications
/// of `q d/dq` away from its base. Under the normalized Mellin transform each
/// application shifts `s` by one: `M_s[q f'] = M_{s-1}[f]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QIdentity {
    pub series: QSeries,
    pub expr: KEExpr,
    pub derivatives: u32,
}

impl QIdentity {
    pub fn new(series: QSeries, expr: KEExpr) -> Self {
        Self { series, expr, derivatives: 0 }
    }

    /// Both sides agree exactly through the series' order.
    pub fn check(&self) -> Result<bool> {
        let order = self.series.order.floor().to_integer().to_usize().unwrap_or(0);
        let rhs = self.expr.to_rational_qseries(order)?;
        Ok(rhs.agrees_with(&self.series, &self.series.order))
    }
}

/// One `q d/dq` on both sides: termwise on the series, symbolically on the
/// `K, E` side.
pub fn derive_e_identity(base: &QIdentity) -> QIdentity {
    QIdentity { series: base.series.q_ddq(), expr: base.expr.q_ddq(), derivatives: base.derivatives + 1 }
}

/// `(8/B_4) sum_j j^3 (-q)^j / (1 - q^{2j}) = 240 k^2 k'^2 K^4 / pi^4`.
pub fn e4_case_identity(order: usize) -> Result<QIdentity> {
    let c = q(8) / bernoulli(4);
    let mut m = std::collections::BTreeMap::new();
    for j in 1..=order {
        // sum over odd multiples: (-q)^j / (1 - q^{2j}) = sum_{r odd} (-1)^j q^{j r}
        let sign = if j % 2 == 1 { -1 } else { 1 };
        let mut r = 1;
        while j * r <= order {
            let e = q((j * r) as i64);
            let v = &c * q(sign * (j * j * j) as i64);
            *m.entry(e).or_insert_with(Q::zero) += v;
            r += 2;
        }
    }
    let series = QSeries::from_terms(m, q(order as i64));
    let expr = KEExpr::k_power(&Poly::from_ints(&[0, 0, 240]) * &Poly::one_minus_x2(), 4, -4);
    Ok(QIdentity::new(series, expr))
}

/// `theta_2^4 = 16 sum_n (2n+1) q^{2n+1} / (1 - q^{4n+2}) = 4 k^2 K^2 / pi^2`.
pub fn theta2_fourth_identity(order: usize) -> Result<QIdentity> {
    let mut m = std::collections::BTreeMap::new();
    let mut a = 1;
    while a <= order {
        let mut r = 1;
        while a * r <= order {
            *m.entry(q((a * r) as i64)).or_insert_with(Q::zero) += q(16 * a as i64);
            r += 2;
        }
        a += 2;
    }
    let series = QSeries::from_terms(m, q(order as i64));
    Ok(QIdentity::new(series, KEExpr::k_power(Poly::from_ints(&[0, 0, 4]), 2, -2)))
}

/// `theta_2^2 = 4 q^{1/2} sum_n q^n / (1 + q^{2n+1}) = 2 k K / pi`.
pub fn theta2_squared_identity(order: usize) -> Result<QIdentity> {
    let mut m = std::collections::BTreeMap::new();
    // q^{n + 1/2} / (1 + q^{2n+1}) = sum_r (-1)^r q^{(2n+1)(r + 1/2)}
    let mut a = 1; // 2n + 1
    while 2 * order >= a {
        let mut r = 0;
        while a * (2 * r + 1) <= 2 * order {
            let e = qr((a * (2 * r + 1)) as i64, 2);
            let s = if r % 2 == 1 { -4 } else { 4 };
            *m.entry(e).or_insert_with(Q::zero) += q(s);
            r += 1;
        }
        a += 2;
    }
    let series = QSeries::from_terms(m, q(order as i64));
    Ok(QIdentity::new(series, KEExpr::theta2_squared()))
}

/// A constant series: `c = c`, whose derivative is `0 = 0`.
pub fn constant_identity(c: Q, order: usize) -> QIdentity {
    QIdentity::new(QSeries::constant(c.clone(), q(order as i64)), KEExpr::constant(c))
}
