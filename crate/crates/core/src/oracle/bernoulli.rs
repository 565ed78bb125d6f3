use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest `K` for which [`bernoulli_numbers`] promises exact values `B_0..B_{2K}`.
pub const MAX_HALF_INDEX: usize = 60;

/// Exact Bernoulli numbers `B_0..=B_{2K}` (convention `B_1 = -1/2`).
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliTable {
    values: Vec<BigRational>,
}

impl BernoulliTable {
    pub fn get(&self, index: usize) -> Option<&BigRational> {
        self.values.get(index)
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    /// Largest index held, i.e. `2K`.
    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    /// `B_index` rounded to the nearest `f64`.
    pub fn to_f64(&self, index: usize) -> Option<f64> {
        self.values.get(index).and_then(|b| b.to_f64())
    }
}

/// Exact `B_0..=B_{2K}` from `sum_{j=0}^{m} C(m+1, j) B_j = 0`.
pub fn bernoulli_numbers(half_index: usize) -> Result<BernoulliTable> {
    if half_index > MAX_HALF_INDEX {
        return Err(Error::UnsupportedRange(format!(
            "Bernoulli table limited to K <= {MAX_HALF_INDEX}, got K = {half_index}"
        )));
    }
    let top = 2 * half_index;
    let mut values: Vec<BigRational> = Vec::with_capacity(top + 1);
    values.push(BigRational::one());
    for m in 1..=top {
        // binom walks C(m+1, j) for j = 0..m
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (j, b) in values.iter().enumerate() {
            if !b.is_zero() {
                acc += BigRational::from_integer(binom.clone()) * b;
            }
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        let b_m = -acc / BigRational::from_integer(BigInt::from(m + 1));
        values.push(b_m);
    }
    Ok(BernoulliTable { values })
}

/// Sign of `B_{2k}` for `k >= 1`: `(-1)^(k+1)`.
pub(crate) fn even_index_sign_is_positive(b: &BigRational) -> bool {
    b.is_positive()
}
