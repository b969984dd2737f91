use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lseries::{lvalue, regularized_product, CharacterId};
use crate::specfun::{gamma_fn, hypergeometric_pfq};
use crate::symbolic::{q_to_f64, Q};

/// Right-hand sides of identities: a tree over rationals, the parameter `s`
/// and cited constants.
///
/// JSON form: a number or a rational string (`"3/2"`) is a literal, `"s"`
/// is the parameter, `{"op": ..., "args": [...]}` an operation and
/// `{"const": ..., "args": [...], "cite": ...}` a constant.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedFormExpr {
    Rational(Q),
    S,
    Const { value: Constant, cite: String },
    Op { op: Op, args: Vec<ClosedFormExpr> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    /// `a^b`; a surd when `b` is a non-integral rational.
    Pow,
    Neg,
    Sqrt,
}

impl Op {
    const ALL: [(Op, &'static str); 7] =
        [(Op::Add, "add"), (Op::Sub, "sub"), (Op::Mul, "mul"), (Op::Div, "div"), (Op::Pow, "pow"), (Op::Neg, "neg"), (Op::Sqrt, "sqrt")];

    fn name(self) -> &'static str {
        Self::ALL.iter().find(|(o, _)| *o == self).unwrap().1
    }

    fn arity(self) -> Option<usize> {
        match self {
            Op::Add | Op::Mul => None,
            Op::Sub | Op::Div | Op::Pow => Some(2),
            Op::Neg | Op::Sqrt => Some(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Constant {
    Pi,
    /// `log(1 + sqrt 2)`
    Log1pSqrt2,
    /// Catalan's constant `G = beta(2)`.
    Catalan,
    Log(Box<ClosedFormExpr>),
    Gamma(Box<ClosedFormExpr>),
    L(CharacterId, Box<ClosedFormExpr>),
    /// `prod_i L_i(s + shift_i)`, taken as a limit where a pole meets a zero.
    LProduct(Vec<(CharacterId, f64)>),
    /// `pFq(a; b; 1)`
    Pfq(Vec<ClosedFormExpr>, Vec<ClosedFormExpr>),
    /// `k(e^{-sqrt(2) pi}) = sqrt 2 - 1`
    SingularModulus2,
    /// `K` at that modulus, `sqrt((2 + sqrt 2)/(128 pi)) Gamma(1/8) Gamma(3/8)`.
    SingularK2,
}

impl Constant {
    fn name(&self) -> &'static str {
        match self {
            Constant::Pi => "pi",
            Constant::Log1pSqrt2 => "log1p_sqrt2",
            Constant::Catalan => "catalan",
            Constant::Log(_) => "log",
            Constant::Gamma(_) => "gamma",
            Constant::L(..) => "L",
            Constant::LProduct(_) => "lprod",
            Constant::Pfq(..) => "pfq",
            Constant::SingularModulus2 => "singular_k2",
            Constant::SingularK2 => "singular_big_k2",
        }
    }
}

impl ClosedFormExpr {
    pub fn rational(n: i64, d: i64) -> Self {
        ClosedFormExpr::Rational(Q::new(n.into(), d.into()))
    }

    pub fn int(n: i64) -> Self {
        Self::rational(n, 1)
    }

    pub fn constant(value: Constant, cite: &str) -> Self {
        ClosedFormExpr::Const { value, cite: cite.to_string() }
    }

    pub fn op(op: Op, args: Vec<ClosedFormExpr>) -> Self {
        ClosedFormExpr::Op { op, args }
    }

    pub fn mul(args: Vec<ClosedFormExpr>) -> Self {
        Self::op(Op::Mul, args)
    }

    pub fn pow(a: ClosedFormExpr, b: ClosedFormExpr) -> Self {
        Self::op(Op::Pow, vec![a, b])
    }

    /// Whether the value depends on `s`.
    pub fn uses_s(&self) -> bool {
        match self {
            ClosedFormExpr::S => true,
            ClosedFormExpr::Rational(_) => false,
            ClosedFormExpr::Op { args, .. } => args.iter().any(|a| a.uses_s()),
            ClosedFormExpr::Const { value, .. } => match value {
                Constant::Log(a) | Constant::Gamma(a) | Constant::L(_, a) => a.uses_s(),
                Constant::LProduct(_) => true,
                Constant::Pfq(a, b) => a.iter().chain(b).any(|x| x.uses_s()),
                _ => false,
            },
        }
    }

    /// Whether a generalized hypergeometric value appears (such right
    /// sides are only good to the slower Levin acceleration).
    pub fn uses_pfq(&self) -> bool {
        match self {
            ClosedFormExpr::Const { value: Constant::Pfq(..), .. } => true,
            ClosedFormExpr::Op { args, .. } => args.iter().any(|a| a.uses_pfq()),
            _ => false,
        }
    }

    /// Citations of every constant leaf, in tree order.
    pub fn citations(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if let ClosedFormExpr::Const { cite, .. } = e {
                out.push(cite.as_str());
            }
        });
        out
    }

    fn walk<'a>(&'a self, f: &mut impl FnMut(&'a ClosedFormExpr)) {
        f(self);
        match self {
            ClosedFormExpr::Op { args, .. } => args.iter().for_each(|a| a.walk(f)),
            ClosedFormExpr::Const { value, .. } => match value {
                Constant::Log(a) | Constant::Gamma(a) | Constant::L(_, a) => a.walk(f),
                Constant::Pfq(a, b) => a.iter().chain(b).for_each(|x| x.walk(f)),
                _ => {}
            },
            _ => {}
        }
    }

    /// Numeric value, `s` bound to the given parameter.
    pub fn eval(&self, s: Option<f64>) -> Result<f64> {
        let v = match self {
            ClosedFormExpr::Rational(r) => q_to_f64(r),
            ClosedFormExpr::S => s.ok_or_else(|| Error::Domain("expression uses s but none was given".into()))?,
            ClosedFormExpr::Const { value, .. } => eval_constant(value, s)?,
            ClosedFormExpr::Op { op, args } => {
                let v: Vec<f64> = args.iter().map(|a| a.eval(s)).collect::<Result<_>>()?;
                match op {
                    Op::Add => v.iter().sum(),
                    Op::Mul => v.iter().product(),
                    Op::Sub => v[0] - v[1],
                    Op::Div => {
                        if v[1] == 0.0 {
                            return Err(Error::Pole("division by zero".into()));
                        }
                        v[0] / v[1]
                    }
                    Op::Pow => pow_exact(&args[1], v[0], v[1]),
                    Op::Neg => -v[0],
                    Op::Sqrt => v[0].sqrt(),
                }
            }
        };
        if v.is_nan() {
            return Err(Error::Domain(format!("{self} evaluates to NaN")));
        }
        Ok(v)
    }
}

/// `powi` for integral literal exponents (exact for small integers).
fn pow_exact(exponent: &ClosedFormExpr, a: f64, b: f64) -> f64 {
    match exponent {
        ClosedFormExpr::Rational(r) if r.is_integer() && r.abs() < Q::from_integer(1000.into()) => a.powi(b as i32),
        _ => a.powf(b),
    }
}

fn eval_constant(c: &Constant, s: Option<f64>) -> Result<f64> {
    Ok(match c {
        Constant::Pi => PI,
        Constant::Log1pSqrt2 => SQRT_2.ln_1p(),
        Constant::Catalan => lvalue(CharacterId::Beta, 2.0)?,
        Constant::Log(a) => {
            let x = a.eval(s)?;
            if x <= 0.0 {
                return Err(Error::Domain(format!("log of {x}")));
            }
            x.ln()
        }
        Constant::Gamma(a) => gamma_fn(a.eval(s)?)?,
        Constant::L(id, a) => lvalue(*id, a.eval(s)?)?,
        Constant::LProduct(f) => {
            let s = s.ok_or_else(|| Error::Domain("an L-series product needs s".into()))?;
            regularized_product(f, s)?
        }
        Constant::Pfq(a, b) => {
            let a: Vec<f64> = a.iter().map(|x| x.eval(s)).collect::<Result<_>>()?;
            let b: Vec<f64> = b.iter().map(|x| x.eval(s)).collect::<Result<_>>()?;
            hypergeometric_pfq(&a, &b, 1.0)?
        }
        Constant::SingularModulus2 => SQRT_2 - 1.0,
        Constant::SingularK2 => ((2.0 + SQRT_2) / (128.0 * PI)).sqrt() * gamma_fn(0.125)? * gamma_fn(0.375)?,
    })
}

/// Exact value of a literal: a JSON integer, a decimal or `"p/q"`.
fn parse_rational(v: &Value) -> Option<Q> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                return Some(Q::from_integer(i.into()));
            }
            Q::from_float(n.as_f64()?)
        }
        Value::String(s) => {
            let s = s.trim();
            match s.split_once('/') {
                Some((a, b)) => {
                    let (a, b) = (num_bigint::BigInt::from_str(a.trim()).ok()?, num_bigint::BigInt::from_str(b.trim()).ok()?);
                    (!b.is_zero()).then(|| Q::new(a, b))
                }
                None => num_bigint::BigInt::from_str(s).ok().map(Q::from_integer),
            }
        }
        _ => None,
    }
}

fn args_of(obj: &serde_json::Map<String, Value>) -> std::result::Result<&[Value], String> {
    match obj.get("args") {
        None => Ok(&[]),
        Some(Value::Array(a)) => Ok(a),
        Some(v) => Err(format!("args must be an array, got {v}")),
    }
}

fn want(args: &[Value], n: usize, what: &str) -> std::result::Result<(), String> {
    if args.len() != n {
        return Err(format!("{what} takes {n} argument(s), got {}", args.len()));
    }
    Ok(())
}

fn parse_list(v: &Value, what: &str) -> std::result::Result<Vec<ClosedFormExpr>, String> {
    match v {
        Value::Array(a) => a.iter().map(ClosedFormExpr::from_json).collect(),
        _ => Err(format!("{what} must be an array")),
    }
}

impl ClosedFormExpr {
    pub fn from_json(v: &Value) -> std::result::Result<Self, String> {
        match v {
            Value::String(s) if s.trim() == "s" => Ok(ClosedFormExpr::S),
            Value::Number(_) | Value::String(_) => {
                parse_rational(v).map(ClosedFormExpr::Rational).ok_or_else(|| format!("{v} is not a rational literal"))
            }
            Value::Object(obj) => {
                let args = args_of(obj)?;
                if let Some(op) = obj.get("op") {
                    let name = op.as_str().ok_or("op must be a string")?;
                    let op = Op::ALL.iter().find(|(_, n)| *n == name).map(|(o, _)| *o).ok_or_else(|| format!("unknown op {name:?}"))?;
                    match op.arity() {
                        Some(n) => want(args, n, name)?,
                        None if args.is_empty() => return Err(format!("{name} needs at least one argument")),
                        None => {}
                    }
                    let args = args.iter().map(Self::from_json).collect::<std::result::Result<_, _>>()?;
                    return Ok(ClosedFormExpr::Op { op, args });
                }
                let Some(name) = obj.get("const") else {
                    return Err("expression objects need an op or a const".into());
                };
                let name = name.as_str().ok_or("const must be a string")?;
                let cite = match obj.get("cite") {
                    Some(Value::String(c)) if !c.trim().is_empty() => c.clone(),
                    _ => return Err(format!("constant {name:?} carries no citation")),
                };
                let one = |args: &[Value]| -> std::result::Result<Box<Self>, String> {
                    want(args, 1, name)?;
                    Ok(Box::new(Self::from_json(&args[0])?))
                };
                let value = match name {
                    "pi" => Constant::Pi,
                    "log1p_sqrt2" => Constant::Log1pSqrt2,
                    "catalan" => Constant::Catalan,
                    "singular_k2" => Constant::SingularModulus2,
                    "singular_big_k2" => Constant::SingularK2,
                    "log" => Constant::Log(one(args)?),
                    "gamma" => Constant::Gamma(one(args)?),
                    "L" => {
                        want(args, 2, name)?;
                        let id = args[0].as_str().and_then(CharacterId::parse).ok_or_else(|| format!("unknown character {}", args[0]))?;
                        Constant::L(id, Box::new(Self::from_json(&args[1])?))
                    }
                    "lprod" => {
                        let mut f = Vec::new();
                        for a in args {
                            let pair = a.as_array().filter(|p| p.len() == 2).ok_or_else(|| format!("lprod factor {a} is not [character, shift]"))?;
                            let id = pair[0].as_str().and_then(CharacterId::parse).ok_or_else(|| format!("unknown character {}", pair[0]))?;
                            let shift = parse_rational(&pair[1]).ok_or_else(|| format!("shift {} is not rational", pair[1]))?;
                            f.push((id, q_to_f64(&shift)));
                        }
                        if f.is_empty() {
                            return Err("lprod needs at least one factor".into());
                        }
                        Constant::LProduct(f)
                    }
                    "pfq" => {
                        want(args, 2, name)?;
                        Constant::Pfq(parse_list(&args[0], "pfq numerator")?, parse_list(&args[1], "pfq denominator")?)
                    }
                    _ => return Err(format!("unknown constant {name:?}")),
                };
                Ok(ClosedFormExpr::Const { value, cite })
            }
            _ => Err(format!("{v} is not an expression")),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            ClosedFormExpr::Rational(r) => {
                if r.is_integer() {
                    if let Ok(i) = i64::try_from(r.to_integer()) {
                        return json!(i);
                    }
                }
                json!(r.to_string())
            }
            ClosedFormExpr::S => json!("s"),
            ClosedFormExpr::Op { op, args } => json!({"op": op.name(), "args": args.iter().map(|a| a.to_json()).collect::<Vec<_>>()}),
            ClosedFormExpr::Const { value, cite } => {
                let list = |v: &[ClosedFormExpr]| Value::Array(v.iter().map(|a| a.to_json()).collect());
                let args: Vec<Value> = match value {
                    Constant::Log(a) | Constant::Gamma(a) => vec![a.to_json()],
                    Constant::L(id, a) => vec![json!(id.label()), a.to_json()],
                    Constant::LProduct(f) => f.iter().map(|(id, sh)| json!([id.label(), sh])).collect(),
                    Constant::Pfq(a, b) => vec![list(a), list(b)],
                    _ => Vec::new(),
                };
                let mut obj = serde_json::Map::new();
                obj.insert("const".into(), json!(value.name()));
                if !args.is_empty() {
                    obj.insert("args".into(), Value::Array(args));
                }
                obj.insert("cite".into(), json!(cite));
                Value::Object(obj)
            }
        }
    }
}

impl Serialize for ClosedFormExpr {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(ser)
    }
}

impl<'de> Deserialize<'de> for ClosedFormExpr {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(de)?;
        Self::from_json(&v).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for ClosedFormExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, v: &[ClosedFormExpr], sep: &str| -> fmt::Result {
            for (i, a) in v.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                write!(f, "{a}")?;
            }
            Ok(())
        };
        match self {
            ClosedFormExpr::Rational(r) if r.is_one() || r.is_integer() => write!(f, "{r}"),
            ClosedFormExpr::Rational(r) => write!(f, "({r})"),
            ClosedFormExpr::S => f.write_str("s"),
            ClosedFormExpr::Op { op, args } => match op {
                Op::Add | Op::Sub | Op::Mul | Op::Div => {
                    let sep = match op {
                        Op::Add => " + ",
                        Op::Sub => " - ",
                        Op::Mul => "*",
                        _ => "/",
                    };
                    f.write_str("(")?;
                    join(f, args, sep)?;
                    f.write_str(")")
                }
                Op::Pow => write!(f, "{}^{}", args[0], args[1]),
                Op::Neg => write!(f, "-{}", args[0]),
                Op::Sqrt => write!(f, "sqrt({})", args[0]),
            },
            ClosedFormExpr::Const { value, .. } => match value {
                Constant::Pi => f.write_str("pi"),
                Constant::Log1pSqrt2 => f.write_str("log(1+sqrt(2))"),
                Constant::Catalan => f.write_str("G"),
                Constant::Log(a) => write!(f, "log({a})"),
                Constant::Gamma(a) => write!(f, "Gamma({a})"),
                Constant::L(id, a) => write!(f, "{}({a})", id.label()),
                Constant::LProduct(v) => {
                    for (i, (id, sh)) in v.iter().enumerate() {
                        if i > 0 {
                            f.write_str("*")?;
                        }
                        match sh {
                            x if *x == 0.0 => write!(f, "{}(s)", id.label())?,
                            x if *x > 0.0 => write!(f, "{}(s+{x})", id.label())?,
                            x => write!(f, "{}(s{x})", id.label())?,
                        }
                    }
                    Ok(())
                }
                Constant::Pfq(a, b) => {
                    write!(f, "{}F{}(", a.len(), b.len())?;
                    join(f, a, ",")?;
                    f.write_str("; ")?;
                    join(f, b, ",")?;
                    f.write_str("; 1)")
                }
                Constant::SingularModulus2 => f.write_str("k(e^(-sqrt(2) pi))"),
                Constant::SingularK2 => f.write_str("K(k(e^(-sqrt(2) pi)))"),
            },
        }
    }
}

/// Free-standing evaluator: `s` bound when given.
pub fn evaluate_closed_form(expr: &ClosedFormExpr, s: Option<f64>) -> Result<f64> {
    expr.eval(s)
}

