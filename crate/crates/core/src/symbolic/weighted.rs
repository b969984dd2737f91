use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{q, Q};
use super::qseries::{eisenstein_qseries, QSeries};
use crate::error::{Error, Result};

/// Weight-homogeneous polynomial `sum c_{ij} E_4^i E_6^j`, `4i + 6j = weight`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightedPoly {
    pub weight: usize,
    pub monomials: BTreeMap<(u32, u32), Q>,
}

/// The exponent pairs `(i, j)` with `4i + 6j = weight`.
pub fn weight_basis(weight: usize) -> Vec<(u32, u32)> {
    (0..=weight / 6).filter(|j| (weight - 6 * j).is_multiple_of(4)).map(|j| (((weight - 6 * j) / 4) as u32, j as u32)).collect()
}

impl WeightedPoly {
    pub fn new(weight: usize, monomials: BTreeMap<(u32, u32), Q>) -> Result<Self> {
        for &(i, j) in monomials.keys() {
            if 4 * i as usize + 6 * j as usize != weight {
                return Err(Error::Domain(format!("E4^{i} E6^{j} does not have weight {weight}")));
            }
        }
        let monomials = monomials.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(Self { weight, monomials })
    }

    /// Evaluation in any commutative setting given `E_4`, `E_6` and the
    /// ring operations.
    pub fn eval_with<T: Clone>(&self, e4: &T, e6: &T, one: T, add: impl Fn(&T, &T) -> T, mul: impl Fn(&T, &T) -> T, scale: impl Fn(&T, &Q) -> T, zero: T) -> T {
        let pow = |x: &T, n: u32| (0..n).fold(one.clone(), |acc, _| mul(&acc, x));
        self.monomials.iter().fold(zero, |acc, (&(i, j), c)| add(&acc, &scale(&mul(&pow(e4, i), &pow(e6, j)), c)))
    }

    pub fn eval_f64(&self, e4: f64, e6: f64) -> f64 {
        self.eval_with(&e4, &e6, 1.0, |a, b| a + b, |a, b| a * b, |a, c| a * super::poly::q_to_f64(c), 0.0)
    }

    pub fn eval_qseries(&self, e4: &QSeries, e6: &QSeries) -> QSeries {
        let zero = QSeries::from_terms(BTreeMap::new(), e4.order.clone().min(e6.order.clone()));
        let one = QSeries::constant(Q::one(), zero.order.clone());
        self.eval_with(e4, e6, one, |a, b| a.add(b), |a, b| a.mul(b), |a, c| a.scale(c), zero)
    }

    /// Coefficient of the pure power `E_4^{weight/4}` (zero when absent): the
    /// value at `tau = i`, in units of `E_4(i)^{weight/4}`, since
    /// `E_6(i) = 0`.
    pub fn e4_power_coefficient(&self) -> Q {
        if !self.weight.is_multiple_of(4) {
            return Q::zero();
        }
        self.monomials.get(&((self.weight / 4) as u32, 0)).cloned().unwrap_or_else(Q::zero)
    }
}

impl fmt::Display for WeightedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&(i, j), c) in &self.monomials {
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            first = false;
            let c = c.abs();
            let mut parts = Vec::new();
            if !c.is_one() || (i == 0 && j == 0) {
                parts.push(c.to_string());
            }
            match i {
                0 => {}
                1 => parts.push("E4".into()),
                _ => parts.push(format!("E4^{i}")),
            }
            match j {
                0 => {}
                1 => parts.push("E6".into()),
                _ => parts.push(format!("E6^{j}")),
            }
            f.write_str(&parts.join("*"))?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Exact solution of the (possibly overdetermined) system `A x = b`;
/// `None` when the system is singular or inconsistent.
pub(crate) fn solve_exact(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        let Some(p) = (pivot_row..rows).find(|&r| !a[r][c].is_zero()) else {
            return None;
        };
        a.swap(pivot_row, p);
        b.swap(pivot_row, p);
        let inv = Q::one() / &a[pivot_row][c];
        for r in 0..rows {
            if r == pivot_row || a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] * &inv;
            for cc in c..cols {
                let v = &f * &a[pivot_row][cc];
                a[r][cc] -= v;
            }
            let v = &f * &b[pivot_row];
            b[r] -= v;
        }
        pivots.push(pivot_row);
        pivot_row += 1;
    }
    if b[pivot_row..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some((0..cols).map(|c| &b[pivots[c]] / &a[pivots[c]][c]).collect())
}

/// `E_w` as a polynomial in `E_4`, `E_6`, solved from q-expansions over the
/// monomial basis and checked on twice as many further coefficients.
pub fn eisenstein_as_e4e6(weight: usize) -> Result<WeightedPoly> {
    let basis = weight_basis(weight);
    if weight < 4 || weight % 2 == 1 || basis.is_empty() {
        return Err(Error::Domain(format!("Eisenstein weight {weight} must be even and at least 4")));
    }
    let n = basis.len();
    let order = 2 * n + 10 + 2 * n;
    let e4 = eisenstein_qseries(4, order)?;
    let e6 = eisenstein_qseries(6, order)?;
    let target = eisenstein_qseries(weight, order)?;
    let cols: Vec<QSeries> = basis.iter().map(|&(i, j)| e4.powi(i).mul(&e6.powi(j))).collect();
    let a: Vec<Vec<Q>> = (0..=order).map(|r| cols.iter().map(|c| c.coeff(&q(r as i64))).collect()).collect();
    let b: Vec<Q> = (0..=order).map(|r| target.coeff(&q(r as i64))).collect();
    let x = solve_exact(a, b).ok_or_else(|| Error::SingularSystem(format!("E_{weight} over the E4/E6 monomials")))?;
    WeightedPoly::new(weight, basis.into_iter().zip(x).collect())
}

/// Serializable form used by reports: `[[i, j, "c"], ...]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedPolyRecord {
    pub weight: usize,
    pub monomials: Vec<(u32, u32, String)>,
}

impl From<&WeightedPoly> for WeightedPolyRecord {
    fn from(p: &WeightedPoly) -> Self {
        Self { weight: p.weight, monomials: p.monomials.iter().map(|(&(i, j), c)| (i, j, c.to_string())).collect() }
    }
}
