use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

const TABLE_LEN: usize = 96;

fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 0..n {
        let next = &row[k] * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(next);
    }
    row
}

fn table() -> &'static [BigRational] {
    static TABLE: OnceLock<Vec<BigRational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // sum_{j=0}^{m} C(m+1, j) B_j = 0, with B_1 = -1/2.
        let mut b: Vec<BigRational> = vec![BigRational::one()];
        for m in 1..TABLE_LEN {
            let row = binomial_row(m + 1);
            let mut acc = BigRational::zero();
            for (j, bj) in b.iter().enumerate() {
                acc += BigRational::from_integer(row[j].clone()) * bj;
            }
            b.push(-acc / BigRational::from_integer(row[m].clone()));
        }
        b
    })
}

/// Bernoulli number `B_n` with `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> BigRational {
    assert!(n < TABLE_LEN, "Bernoulli table holds B_0..B_{}", TABLE_LEN - 1);
    table()[n].clone()
}

pub(crate) fn bernoulli_f64(n: usize) -> f64 {
    use num_traits::ToPrimitive;
    table()[n].to_f64().unwrap()
}

/// Bernoulli polynomial `B_n(x)` at rational `x`.
pub fn bernoulli_poly(n: usize, x: &BigRational) -> BigRational {
    let row = binomial_row(n);
    let mut acc = BigRational::zero();
    let mut xp = BigRational::one();
    // Horner would need the reversed order; the direct sum is cheap here.
    let mut powers = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        powers.push(xp.clone());
        xp *= x;
    }
    for j in 0..=n {
        acc += BigRational::from_integer(row[j].clone()) * bernoulli(j) * &powers[n - j];
    }
    acc
}
