use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::specfun::gamma_fn;

pub const MAX_LEVEL: u32 = 12;
const MIN_LEVEL: u32 = 3;
/// Abscissae closer than this to a finite endpoint are dropped.
const GUARD: f64 = 1e-290;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// `|S_l - S_{l-1}|` between the last two levels; DE rules converge
    /// roughly quadratically per level, so this bounds the error of `S_l`
    /// with a wide margin.
    pub error_estimate: f64,
    pub level: u32,
    pub evaluations: usize,
}

#[derive(Clone, Copy)]
enum Rule {
    /// `x = (1 + tanh(pi/2 sinh t)) / 2` on `(0, 1)`.
    TanhSinh,
    /// `x = a + exp(pi/2 sinh t)` on `(a, inf)`.
    ExpSinh(f64),
}

struct Node {
    x: f64,
    /// Distance to the nearer finite endpoint, computed directly.
    xc: f64,
    w: f64,
    tail: bool,
}

impl Rule {
    fn t_max(self) -> f64 {
        match self {
            // 1/(1 + e^{2v}) < 1e-290 once v > 334, i.e. t > 6.05.
            Rule::TanhSinh => 6.1,
            // e^{v} overflows past v = 709.
            Rule::ExpSinh(_) => 6.8,
        }
    }

    fn node(self, t: f64) -> Option<Node> {
        let v = FRAC_PI_2 * t.sinh();
        let dv = FRAC_PI_2 * t.cosh();
        match self {
            Rule::TanhSinh => {
                let x = 1.0 / (1.0 + (-2.0 * v).exp());
                let xc = 1.0 / (1.0 + (2.0 * v).exp());
                if x < GUARD || xc < GUARD {
                    return None;
                }
                Some(Node { x, xc, w: 2.0 * dv * x * xc, tail: x.min(xc) < 1e-12 })
            }
            Rule::ExpSinh(a) => {
                let e = v.exp();
                if !e.is_finite() || e == 0.0 {
                    return None;
                }
                Some(Node { x: a + e, xc: e, w: dv * e, tail: t.abs() > 3.0 })
            }
        }
    }
}

fn de_integrate<F>(rule: Rule, f: F, tol: f64) -> Result<QuadResult>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    let t_max = rule.t_max();
    let mut evaluations = 0usize;
    let mut sum = 0.0;
    let mut l1 = 0.0;
    let mut eval = |t: f64, sum: &mut f64, l1: &mut f64| -> Result<()> {
        let Some(n) = rule.node(t) else { return Ok(()) };
        evaluations += 1;
        let y = f(n.x, n.xc)? * n.w;
        if y.is_finite() {
            *sum += y;
            *l1 += y.abs();
            Ok(())
        } else if n.tail {
            Ok(())
        } else {
            Err(Error::Domain(format!("integrand not finite at interior point {}", n.x)))
        }
    };

    // Level 0: h = 1.
    let j_max = t_max.floor() as i64;
    for j in -j_max..=j_max {
        eval(j as f64, &mut sum, &mut l1)?;
    }
    let mut prev = sum;
    let mut h = 1.0;
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        let mut t = h;
        while t <= t_max {
            eval(t, &mut sum, &mut l1)?;
            eval(-t, &mut sum, &mut l1)?;
            t += 2.0 * h;
        }
        let value = sum * h;
        let err = (value - prev).abs();
        if level >= MIN_LEVEL && (err <= tol * value.abs() || err <= 4.0 * f64::EPSILON * l1 * h) {
            return Ok(QuadResult { value, error_estimate: err, level, evaluations });
        }
        if level == MAX_LEVEL {
            return Err(Error::NoConvergence { last: value, previous: prev });
        }
        prev = value;
    }
    unreachable!()
}

/// Tanh-sinh quadrature of `f(x, 1 - x)` over `(0, 1)`.
///
/// The second argument is the distance to 1 computed without cancellation,
/// so integrands singular at `x = 1` can be written in terms of it.
pub fn integrate_01<F>(f: F, tol: f64) -> Result<QuadResult>
where
    F: Fn(f64, f64) -> f64,
{
    de_integrate(Rule::TanhSinh, |x, xc| Ok(f(x, xc)), tol)
}

/// Fallible variant of [`integrate_01`]; the first integrand error aborts.
pub fn try_integrate_01<F>(f: F, tol: f64) -> Result<QuadResult>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    de_integrate(Rule::TanhSinh, f, tol)
}

/// Exp-sinh quadrature of `f(x, x - a)` over `(a, inf)`.
pub fn integrate_tail<F>(f: F, a: f64, tol: f64) -> Result<QuadResult>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    de_integrate(Rule::ExpSinh(a), f, tol)
}

/// Normalized Mellin transform `(1/Gamma(s)) int_0^inf f(t) t^{s-1} dt`,
/// spliced at `t = 1`.
pub fn mellin_transform<F>(f: F, s: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    Ok(mellin_transform_est(|t| Ok(f(t)), s, tol)?.value)
}

pub fn mellin_transform_est<F>(f: F, s: f64, tol: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(s > 0.0) {
        return Err(Error::Domain(format!("Mellin transform needs s > 0, got {s}")));
    }
    let g = gamma_fn(s)?;
    let head = try_integrate_01(|t, _| Ok(f(t)? * ((s - 1.0) * t.ln()).exp()), tol)?;
    let tail = integrate_tail(|t, _| Ok(f(t)? * ((s - 1.0) * t.ln()).exp()), 1.0, tol)?;
    Ok(QuadResult {
        value: (head.value + tail.value) / g,
        error_estimate: (head.error_estimate + tail.error_estimate) / g,
        level: head.level.max(tail.level),
        evaluations: head.evaluations + tail.evaluations,
    })
}
