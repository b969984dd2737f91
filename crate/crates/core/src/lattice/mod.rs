//! Lattice sums
//! `L(m, n, p; s) = sum (-1)^{c_1 + ... + c_p} / Q^s`,
//! `Q = sum_{i<=m} (a_i + 1/2)^2 + sum_{j<=n} b_j^2 + sum_{l<=p} c_l^2`,
//! i.e. the normalized Mellin transform of `theta_2^m theta_3^n theta_4^p`,
//! the origin omitted when `m = 0`.

mod direct;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

pub use direct::{gaussian_quartic_sum, lattice_direct, MAX_DIRECT_DIMENSION};

use crate::error::{Error, Result};
use crate::lseries::{lvalue, CharacterId};
use crate::quadrature::{k_integral, mellin_transform_est, KIntegralSpec, QuadResult};
use crate::specfun::{ln_theta_t, rgamma};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeSumSpec {
    pub m: f64,
    pub n: f64,
    pub p: f64,
    pub s: f64,
}

impl LatticeSumSpec {
    pub fn new(m: f64, n: f64, p: f64, s: f64) -> Result<Self> {
        if !(m >= 0.0 && n >= 0.0 && p >= 0.0) {
            return Err(Error::Domain(format!("exponents ({m}, {n}, {p}) must be nonnegative")));
        }
        if m + n + p == 0.0 {
            return Err(Error::Domain("exponents (0, 0, 0) give no lattice".into()));
        }
        Ok(Self { m, n, p, s })
    }

    pub fn dimension(&self) -> f64 {
        self.m + self.n + self.p
    }

    pub fn integer_exponents(&self) -> Option<(usize, usize, usize)> {
        let ok = |x: f64| x.fract() == 0.0;
        (ok(self.m) && ok(self.n) && ok(self.p)).then_some((self.m as usize, self.n as usize, self.p as usize))
    }

    pub fn with_s(&self, s: f64) -> Self {
        Self { s, ..*self }
    }

    fn prefactor(&self) -> f64 {
        PI.powf(self.s) * rgamma(self.s) * (2.0 / PI).powf((self.dimension() - 2.0) / 2.0)
    }

    /// `L = pi^s/Gamma(s) (2/pi)^{(d-2)/2}
    ///      int k^{(m-2)/2} k'^{(p-4)/2} K^{(d-2s-2)/2} K'^{s-1} dk`.
    pub fn k_spec(&self) -> KIntegralSpec {
        let d = self.dimension();
        KIntegralSpec::monomial((self.m - 2.0) / 2.0, (self.p - 4.0) / 2.0, (d - 2.0 * self.s - 2.0) / 2.0, self.s - 1.0)
            .with_prefactor(self.prefactor())
    }

    /// The same value with the roles of `k` and `k'` exchanged:
    /// `int k^{(p-2)/2} k'^{(m-4)/2} K'^{(d-2s-2)/2} K^{s-1} dk`.
    pub fn dual_k_spec(&self) -> KIntegralSpec {
        let d = self.dimension();
        KIntegralSpec::monomial((self.p - 2.0) / 2.0, (self.m - 4.0) / 2.0, self.s - 1.0, (d - 2.0 * self.s - 2.0) / 2.0)
            .with_prefactor(self.prefactor())
    }

    /// `(spec', c)` with `L(self) = c L(spec')`, from equating the two
    /// `K`-integral forms: `Gamma(s) pi^{-s} L(m,n,p;s)` is invariant under
    /// `(m, n, p; s) -> (p, n, m; s*)`, `s* = (d-2s)/2`.
    pub fn reflection(&self) -> (LatticeSumSpec, f64) {
        let d = self.dimension();
        let r = LatticeSumSpec { m: self.p, n: self.n, p: self.m, s: (d - 2.0 * self.s) / 2.0 };
        (r, completion_ratio(self.s, r.s, PI))
    }
}

/// The theta-product/Mellin fast path: the `K` integral when `m > 0`, the
/// regularized Mellin transform of `theta_3^n theta_4^p - 1` when `m = 0`.
pub fn lattice_mellin(spec: &LatticeSumSpec, tol: f64) -> Result<f64> {
    Ok(lattice_mellin_est(spec, tol)?.value)
}

pub fn lattice_mellin_est(spec: &LatticeSumSpec, tol: f64) -> Result<QuadResult> {
    if spec.m == 0.0 {
        return lattice_mellin_regularized_est(spec.n, spec.p, spec.s, tol);
    }
    k_integral(&spec.k_spec(), tol)
}

/// The dual `K` integral; agrees with [`lattice_mellin`] when `m > 0`.
pub fn lattice_mellin_dual(spec: &LatticeSumSpec, tol: f64) -> Result<f64> {
    Ok(k_integral(&spec.dual_k_spec(), tol)?.value)
}

/// `M_s[theta_3^n theta_4^p - 1]`, the origin-omitted sum `L(0, n, p; s)`.
pub fn lattice_mellin_regularized(n: f64, p: f64, s: f64, tol: f64) -> Result<f64> {
    Ok(lattice_mellin_regularized_est(n, p, s, tol)?.value)
}

fn lattice_mellin_regularized_est(n: f64, p: f64, s: f64, tol: f64) -> Result<QuadResult> {
    LatticeSumSpec::new(0.0, n, p, s)?;
    if p == 0.0 && s <= n / 2.0 {
        return Err(Error::Integrability(format!("theta_3^{n} - 1 needs s > {}", n / 2.0)));
    }
    mellin_transform_est(
        |t| {
            let mut ln = 0.0;
            if n > 0.0 {
                ln += n * ln_theta_t(3, t)?;
            }
            if p > 0.0 {
                ln += p * ln_theta_t(4, t)?;
            }
            Ok(ln.exp_m1())
        },
        s,
        tol,
    )
}

/// Prop.-2 equivalents of `L(2m, n, n; s)`: each `(spec, c)` has
/// `c L(spec)` equal to `L(2m, n, n; s)`.
pub fn prop2_equivalents(m: f64, n: f64, s: f64) -> Result<Vec<(LatticeSumSpec, f64)>> {
    if !(m > 0.0 && n >= 0.0) {
        return Err(Error::Shape(format!("L(2m, n, n; s) needs m > 0, n >= 0; got m = {m}, n = {n}")));
    }
    Ok(vec![
        (LatticeSumSpec::new(2.0 * m, n, n, s)?, 1.0),
        (LatticeSumSpec::new(m, m, 2.0 * n, s)?, 2f64.powf(m - s)),
        (LatticeSumSpec::new(n, n, 2.0 * m, m + n - s)?, completion_ratio(s, m + n - s, PI)),
    ])
}

/// `c^{s - s*} Gamma(s*) / Gamma(s)`: the factor relating `L(s)` to `L(s*)`
/// when `c^{-s} Gamma(s) L(s)` is the invariant combination.
pub fn completion_ratio(s: f64, s_star: f64, c: f64) -> f64 {
    c.powf(s - s_star) * rgamma(s) / rgamma(s_star)
}

/// `c L(m, m, 2m; 2m - s)` equal to `L(m, m, 2m; s)`; the invariant is
/// `(sqrt(2) pi)^{-s} Gamma(s) L`.
pub fn self_dual_2m(m: f64, s: f64) -> Result<(LatticeSumSpec, f64)> {
    Ok((LatticeSumSpec::new(m, m, 2.0 * m, 2.0 * m - s)?, completion_ratio(s, 2.0 * m - s, 2f64.sqrt() * PI)))
}

/// `c L(m, m, 4m; 3m - s)` equal to `L(m, m, 4m; s)`; the invariant is
/// `(2 pi)^{-s} Gamma(s) L`.
pub fn self_dual_4m(m: f64, s: f64) -> Result<(LatticeSumSpec, f64)> {
    Ok((LatticeSumSpec::new(m, m, 4.0 * m, 3.0 * m - s)?, completion_ratio(s, 3.0 * m - s, 2.0 * PI)))
}

/// [`prop2_equivalents`] for a spec that must already have the shape
/// `L(2m, n, n; s)`.
pub fn prop2_for(spec: &LatticeSumSpec) -> Result<Vec<(LatticeSumSpec, f64)>> {
    if spec.n != spec.p || spec.m == 0.0 {
        return Err(Error::Shape(format!("L({}, {}, {}) is not of the form L(2m, n, n)", spec.m, spec.n, spec.p)));
    }
    prop2_equivalents(spec.m / 2.0, spec.n, spec.s)
}

/// `L(m, n, p+4; s) - L(m, n+4, p; s) + L(m+4, n, p; s)`, which vanishes by
/// `theta_3^4 = theta_2^4 + theta_4^4`.
pub fn jacobi_linear_relation_check(m: f64, n: f64, p: f64, s: f64, tol: f64) -> Result<f64> {
    LatticeSumSpec::new(m, n, p, s)?;
    let a = lattice_mellin(&LatticeSumSpec::new(m, n, p + 4.0, s)?, tol)?;
    let b = lattice_mellin(&LatticeSumSpec::new(m, n + 4.0, p, s)?, tol)?;
    let c = lattice_mellin(&LatticeSumSpec::new(m + 4.0, n, p, s)?, tol)?;
    Ok(a - b + c)
}

/// The pieces of the ten-dimensional alternating sum
/// `sum' (-1)^{a_1+...+a_10} / |a|^{2s} = -(4/5)[beta(s-4) eta(s) +
///  16 beta(s) eta(s-4) - 2 S(s)]`, `S` the Gaussian-integer quartic sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theta10 {
    pub s: f64,
    /// `M_s[theta_4^10 - 1]`
    pub lhs: f64,
    pub beta_eta: f64,
    pub beta_eta_shifted: f64,
    pub gaussian_sum: f64,
    pub gaussian_sum_error: f64,
    pub rhs: f64,
}

pub fn theta10(s: f64, radius: i64, tol: f64) -> Result<Theta10> {
    let lhs = lattice_mellin_regularized(0.0, 10.0, s, tol)?;
    let beta_eta = lvalue(CharacterId::Beta, s - 4.0)? * lvalue(CharacterId::Eta, s)?;
    let beta_eta_shifted = 16.0 * lvalue(CharacterId::Beta, s)? * lvalue(CharacterId::Eta, s - 4.0)?;
    let (g, ge) = gaussian_quartic_sum(s, radius)?;
    let rhs = -0.8 * (beta_eta + beta_eta_shifted - 2.0 * g);
    Ok(Theta10 { s, lhs, beta_eta, beta_eta_shifted, gaussian_sum: g, gaussian_sum_error: ge, rhs })
}
