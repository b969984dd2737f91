use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use super::expr::ClosedFormExpr;
use crate::error::{Error, Result};
use crate::lattice::LatticeSumSpec;
use crate::quadrature::{Factor, KIntegralSpec};
use crate::symbolic::q_to_f64;

/// `c + d s`. JSON: a number, a rational string, or `[c, d]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Affine {
    pub c: f64,
    pub d: f64,
}

impl Affine {
    pub fn constant(c: f64) -> Self {
        Self { c, d: 0.0 }
    }

    pub fn at(self, s: Option<f64>) -> Result<f64> {
        match (self.d, s) {
            (d, _) if d == 0.0 => Ok(self.c),
            (d, Some(s)) => Ok(self.c + d * s),
            _ => Err(Error::Domain("exponent depends on s but none was given".into())),
        }
    }

    fn scalar(v: &Value) -> std::result::Result<f64, String> {
        match ClosedFormExpr::from_json(v) {
            Ok(ClosedFormExpr::Rational(r)) => Ok(q_to_f64(&r)),
            _ => Err(format!("{v} is not a number or rational")),
        }
    }
}

impl Serialize for Affine {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        if self.d == 0.0 {
            json!(self.c).serialize(ser)
        } else {
            json!([self.c, self.d]).serialize(ser)
        }
    }
}

impl<'de> Deserialize<'de> for Affine {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(de)?;
        let r = match &v {
            Value::Array(a) if a.len() == 2 => Affine::scalar(&a[0]).and_then(|c| Ok(Affine { c, d: Affine::scalar(&a[1])? })),
            Value::Array(_) => Err(format!("exponent {v} must be [constant, coefficient of s]")),
            _ => Affine::scalar(&v).map(Affine::constant),
        };
        r.map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeMethod {
    /// theta-product Mellin transform / `K` integral
    Mellin,
    /// the `K` integral with `k` and `k'` exchanged
    Dual,
    /// direct summation with a smooth cutoff
    Direct,
}

/// A symbolic pipeline that produces the integrand when verified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "pipeline", rename_all = "snake_case")]
pub enum Pipeline {
    /// `int k p_n(k) K^{2n-1-s} K'^{s-1} dk`
    EvenPowers { n: usize },
    /// `int g_p(k) K'^{4p-1} dk`
    OddPowers { p: usize },
    /// `int R(k) (1+k)^{-1/2} K^{2P-1} dk`
    Sqrt2Lattice { big_p: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Lhs {
    /// `scale * int_0^1 poly(k) k^alpha k'^beta K^gamma K'^delta factor dk`
    /// with exponents affine in `s`.
    KIntegral {
        alpha: Affine,
        beta: Affine,
        gamma_k: Affine,
        delta_kp: Affine,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        poly: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        factor: Option<Factor>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<ClosedFormExpr>,
    },
    /// `scale * L(m, n, p; s)`; `s` is the record's parameter unless fixed.
    Lattice {
        m: f64,
        n: f64,
        p: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        s: Option<f64>,
        method: LatticeMethod,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<ClosedFormExpr>,
    },
    /// `K(k)` at a closed-form modulus.
    CompleteK { k: ClosedFormExpr },
    Generated(Pipeline),
    /// `sum coef_i * lhs_i`
    Combination { terms: Vec<Term> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coef: ClosedFormExpr,
    pub lhs: Lhs,
}

impl Lhs {
    /// The `K` integral at `s` (prefactor one) and its scale, for the
    /// integral kinds.
    pub fn k_spec(&self, s: Option<f64>) -> Result<Option<(KIntegralSpec, Option<&ClosedFormExpr>)>> {
        Ok(match self {
            Lhs::KIntegral { alpha, beta, gamma_k, delta_kp, poly, factor, scale } => {
                let mut spec = KIntegralSpec::monomial(alpha.at(s)?, beta.at(s)?, gamma_k.at(s)?, delta_kp.at(s)?);
                spec.poly = poly.clone();
                spec.factor = factor.clone();
                Some((spec, scale.as_ref()))
            }
            _ => None,
        })
    }

    pub fn lattice_spec(&self, s: Option<f64>) -> Result<Option<LatticeSumSpec>> {
        Ok(match self {
            Lhs::Lattice { m, n, p, s: fixed, .. } => {
                let s = fixed.or(s).ok_or_else(|| Error::Domain("lattice sum without s".into()))?;
                Some(LatticeSumSpec::new(*m, *n, *p, s)?)
            }
            _ => None,
        })
    }

    fn validate(&self) -> std::result::Result<(), String> {
        let finite = |a: &Affine| a.c.is_finite() && a.d.is_finite();
        match self {
            Lhs::KIntegral { alpha, beta, gamma_k, delta_kp, poly, .. } => {
                if ![alpha, beta, gamma_k, delta_kp].into_iter().all(finite) {
                    return Err("non-finite exponent".into());
                }
                if poly.as_ref().is_some_and(|p| p.is_empty() || p.iter().any(|c| !c.is_finite())) {
                    return Err("poly must be a nonempty list of finite coefficients".into());
                }
            }
            Lhs::Lattice { m, n, p, .. } => {
                if !(*m >= 0.0 && *n >= 0.0 && *p >= 0.0 && m + n + p > 0.0) {
                    return Err(format!("lattice exponents ({m}, {n}, {p}) must be nonnegative and not all zero"));
                }
            }
            Lhs::Combination { terms } => {
                if terms.is_empty() {
                    return Err("empty combination".into());
                }
                for t in terms {
                    t.lhs.validate()?;
                }
            }
            Lhs::CompleteK { .. } | Lhs::Generated(_) => {}
        }
        Ok(())
    }

    pub fn uses_e(&self) -> bool {
        match self {
            Lhs::KIntegral { factor, .. } => factor.as_ref().is_some_and(|f| f.uses_e()),
            Lhs::Combination { terms } => terms.iter().any(|t| t.lhs.uses_e()),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ToleranceClass {
    #[serde(rename = "STANDARD")]
    Standard,
    #[serde(rename = "SINGULAR")]
    Singular,
}

impl ToleranceClass {
    pub fn tolerance(self) -> f64 {
        match self {
            ToleranceClass::Standard => 1e-8,
            ToleranceClass::Singular => 1e-7,
        }
    }
}

/// An `s` the identity is stated for but not verified at, with the reason.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedS {
    pub s: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityRecord {
    pub id: String,
    pub lhs: Lhs,
    pub rhs: ClosedFormExpr,
    /// Values of `s` to verify at; empty when neither side depends on `s`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub s_values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<SkippedS>,
    pub tolerance_class: ToleranceClass,
    #[serde(default)]
    pub citation: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tags: Vec<String>,
}

pub const GENERATED_TAG: &str = "generated";

impl IdentityRecord {
    pub fn is_generated(&self) -> bool {
        self.tags.iter().any(|t| t == GENERATED_TAG || t.starts_with("generated:"))
    }

    /// Whether the record is selected by `filter`: empty or `all`, the id,
    /// a tag, or a prefix of either ending at a `:` or `.` boundary.
    pub fn matches(&self, filter: &str) -> bool {
        let f = filter.trim();
        if f.is_empty() || f == "all" {
            return true;
        }
        let hit = |x: &str| x == f || (x.starts_with(f) && matches!(x.as_bytes()[f.len()], b':' | b'.'));
        hit(&self.id) || self.tags.iter().any(|t| hit(t))
    }

    /// The `s` grid: `[None]` for an `s`-free identity.
    pub fn grid(&self) -> Vec<Option<f64>> {
        if self.s_values.is_empty() {
            vec![None]
        } else {
            self.s_values.iter().map(|s| Some(*s)).collect()
        }
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.id.trim().is_empty() {
            return Err("empty id".into());
        }
        if self.citation.trim().is_empty() && !self.is_generated() {
            return Err("no citation and not tagged generated".into());
        }
        self.lhs.validate()?;
        if let Some(s) = self.s_values.iter().chain(self.skipped.iter().map(|k| &k.s)).find(|s| !s.is_finite()) {
            return Err(format!("s value {s} is not finite"));
        }
        if self.s_values.is_empty() && self.rhs.uses_s() {
            return Err("rhs depends on s but no s_values are listed".into());
        }
        Ok(())
    }
}

fn record_id(v: &Value, index: usize) -> String {
    v.get("id").and_then(Value::as_str).map(str::to_string).unwrap_or_else(|| format!("#{index}"))
}

/// Parses and validates a registry document (a JSON array of records).
/// Blank input is an empty registry.
pub fn parse_registry(text: &str) -> Result<Vec<IdentityRecord>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let Value::Array(items) = doc else {
        return Err(Error::Schema { id: "<root>".into(), msg: "the registry must be a JSON array of records".into() });
    };
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(items.len());
    for (i, v) in items.into_iter().enumerate() {
        let id = record_id(&v, i);
        let r: IdentityRecord = serde_json::from_value(v).map_err(|e| Error::Schema { id: id.clone(), msg: e.to_string() })?;
        r.validate().map_err(|msg| Error::Schema { id: id.clone(), msg })?;
        if !seen.insert(r.id.clone()) {
            return Err(Error::DuplicateId(r.id));
        }
        out.push(r);
    }
    Ok(out)
}

pub fn load_registry(path: impl AsRef<Path>) -> Result<Vec<IdentityRecord>> {
    let text = std::fs::read_to_string(path.as_ref()).map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_registry(&text)
}

/// Joins record lists, rejecting repeated ids.
pub fn merge_records(parts: Vec<Vec<IdentityRecord>>) -> Result<Vec<IdentityRecord>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for r in parts.into_iter().flatten() {
        if !seen.insert(r.id.clone()) {
            return Err(Error::DuplicateId(r.id));
        }
        out.push(r);
    }
    Ok(out)
}
