//! Records emitted by the exact pipelines rather than transcribed.

use super::expr::{ClosedFormExpr as X, Constant, Op};
use super::record::{IdentityRecord, Lhs, Pipeline, ToleranceClass};
use crate::error::Result;
use crate::lseries::CharacterId;
use crate::quadrature::KIntegralSpec;
use crate::symbolic::{compute_gp, compute_pn, sqrt2_form_theta, Q};

const CITE: &str = "generated";

fn pi() -> X {
    X::constant(Constant::Pi, CITE)
}

/// `int k p_n K^{2n-1-s} K'^{s-1} = c pi^{2n-1-s} Gamma(s) eta(s+1-2n) lambda(s)`,
/// the product taken as a limit at `s = 1`.
pub fn even_power_record(n: usize, s_values: &[f64]) -> Result<IdentityRecord> {
    let r = compute_pn(n)?;
    let w = 2 * n as i64 - 1;
    let rhs = X::mul(vec![
        X::Rational(r.constant.clone()),
        X::pow(pi(), X::op(Op::Sub, vec![X::int(w), X::S])),
        X::constant(Constant::Gamma(Box::new(X::S)), CITE),
        X::constant(Constant::LProduct(vec![(CharacterId::Eta, -w as f64), (CharacterId::Lambda, 0.0)]), CITE),
    ]);
    Ok(IdentityRecord {
        id: format!("generated:even_powers:n{n}"),
        lhs: Lhs::Generated(Pipeline::EvenPowers { n }),
        rhs,
        s_values: s_values.to_vec(),
        skipped: Vec::new(),
        tolerance_class: if n >= 5 { ToleranceClass::Singular } else { ToleranceClass::Standard },
        citation: String::new(),
        tags: vec!["generated:thm31".into(), "even_powers".into()],
    })
}

/// `int g_p K'^{4p-1} = c Gamma(1/4)^{8p} pi^e`.
pub fn odd_power_record(p: usize) -> Result<IdentityRecord> {
    let g = compute_gp(p)?;
    let rhs = X::mul(vec![
        X::Rational(g.constant.clone()),
        X::pow(X::constant(Constant::Gamma(Box::new(X::rational(1, 4))), CITE), X::int(g.gamma_quarter_pow as i64)),
        X::pow(pi(), X::int(g.pi_pow)),
    ]);
    Ok(IdentityRecord {
        id: format!("generated:odd_powers:p{p}"),
        lhs: Lhs::Generated(Pipeline::OddPowers { p }),
        rhs,
        s_values: Vec::new(),
        skipped: Vec::new(),
        tolerance_class: ToleranceClass::Singular,
        citation: String::new(),
        tags: vec!["generated:thm42".into(), "odd_powers".into()],
    })
}

/// The even-power family for `n = 2..=6` at `s in {1, 2}` and the
/// odd-power family for `p = 1..=4`.
pub fn generated_records() -> Result<Vec<IdentityRecord>> {
    let mut out = Vec::new();
    for n in 2..=6 {
        out.push(even_power_record(n, &[1.0, 2.0])?);
    }
    for p in 1..=4 {
        out.push(odd_power_record(p)?);
    }
    Ok(out)
}

fn coeffs(p: &crate::symbolic::Poly) -> Vec<f64> {
    p.to_f64()
}

/// The integral a pipeline stands for, at `s`.
pub fn pipeline_spec(p: Pipeline, s: Option<f64>) -> Result<KIntegralSpec> {
    Ok(match p {
        Pipeline::EvenPowers { n } => {
            let s = s.ok_or_else(|| crate::Error::Domain("the even-power family needs s".into()))?;
            let r = compute_pn(n)?;
            KIntegralSpec::monomial(1.0, 0.0, (2 * n) as f64 - 1.0 - s, s - 1.0).with_poly(coeffs(&r.p_n))
        }
        Pipeline::OddPowers { p } => {
            let g = compute_gp(p)?;
            KIntegralSpec::monomial(0.0, 0.0, 0.0, (4 * p) as f64 - 1.0).with_poly(coeffs(&g.g_p))
        }
        Pipeline::Sqrt2Lattice { big_p } => {
            let r = sqrt2_form_theta(big_p)?;
            let (_, prim): (Q, _) = r.integrand.primitive();
            KIntegralSpec::monomial(0.0, 0.0, (2 * big_p) as f64 - 1.0, 0.0)
                .with_poly(coeffs(&prim))
                .with_factor(crate::quadrature::Factor::Pow(
                    Box::new(crate::quadrature::Factor::Poly(crate::quadrature::Leaf::K, vec![1.0, 1.0])),
                    -0.5,
                ))
        }
    })
}
