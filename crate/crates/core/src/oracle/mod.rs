//! Independent reference evaluations of zeta(s).
//!
//! Every evaluator returns a [`ZetaReference`] whose `error_bound` is the
//! truncation bound of the method plus a fixed rounding allowance of
//! [`ROUNDING_ULPS`] units of `f64::EPSILON * |value|`.

mod bernoulli;
mod primes;
mod stieltjes;

use std::f64::consts::LN_2;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

pub use bernoulli::{bernoulli_numbers, BernoulliTable, MAX_HALF_INDEX};
pub use primes::PrimeCache;
pub use stieltjes::{stieltjes, StieltjesTable};

use crate::error::{Error, Result};
use crate::numeric::{ln_1p_complex, pow_positive, ComplexCompensatedSum, DoubleDouble};
use crate::ComplexScalar;

/// Rounding allowance folded into every truncation bound.
pub const ROUNDING_ULPS: f64 = 16.0;

/// Target bound for [`reference_zeta`] on `Re(s) > 1`.
pub const REFERENCE_TARGET: f64 = 1e-10;

/// Largest Euler-Maclaurin integration cut-off [`reference_zeta`] will use.
pub const REFERENCE_MAX_CUTOFF: u64 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Dirichlet,
    Eta,
    EulerMaclaurin,
    EulerProduct,
    Bernoulli,
    Laurent,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Dirichlet => "dirichlet",
            Method::Eta => "eta",
            Method::EulerMaclaurin => "euler_maclaurin",
            Method::EulerProduct => "euler_product",
            Method::Bernoulli => "bernoulli",
            Method::Laurent => "laurent",
        })
    }
}

/// Whether an error bound is proven or a labelled estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Rigorous,
    Heuristic,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::Rigorous => "rigorous",
            BoundKind::Heuristic => "heuristic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaReference {
    pub value: ComplexScalar,
    pub method: Method,
    pub error_bound: f64,
    pub bound_kind: BoundKind,
}

impl ZetaReference {
    /// True when `|self - other|` is within the sum of both bounds.
    pub fn agrees_with(&self, other: &ZetaReference) -> bool {
        (self.value - other.value).norm() <= self.error_bound + other.error_bound
    }
}

fn rounding_allowance(value: ComplexScalar) -> f64 {
    ROUNDING_ULPS * f64::EPSILON * value.norm().max(f64::MIN_POSITIVE)
}

fn require_right_of_pole(s: ComplexScalar) -> Result<()> {
    if s.re > 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("Re(s) > 1 required, got s = {s}")))
    }
}

fn require_not_pole(s: ComplexScalar) -> Result<()> {
    if s == ComplexScalar::new(1.0, 0.0) {
        Err(Error::domain("s = 1 is the pole of zeta"))
    } else {
        Ok(())
    }
}

/// `sum_{k=1}^{n} k^-s`, smallest terms first.
fn dirichlet_partial(s: ComplexScalar, n: u64) -> ComplexScalar {
    let neg = -s;
    (1..=n)
        .rev()
        .map(|k| pow_positive(k as f64, neg))
        .collect::<ComplexCompensatedSum>()
        .value()
}

/// Truncated Dirichlet series `sum_{n<=N} n^-s` with the integral tail bound
/// `N^(1-Re s)/(Re s - 1)`.
pub fn zeta_dirichlet(s: ComplexScalar, terms: u64) -> Result<ZetaReference> {
    require_right_of_pole(s)?;
    if terms == 0 {
        return Err(Error::domain("need at least one term"));
    }
    let value = dirichlet_partial(s, terms);
    let sigma = s.re;
    let tail = (terms as f64).powf(1.0 - sigma) / (sigma - 1.0);
    Ok(ZetaReference {
        value,
        method: Method::Dirichlet,
        error_bound: tail + rounding_allowance(value),
        bound_kind: BoundKind::Rigorous,
    })
}

/// `1 - 2^(1-s)`, rejecting the zeros of the factor.
fn eta_prefactor(s: ComplexScalar) -> Result<ComplexScalar> {
    require_not_pole(s)?;
    let factor = ComplexScalar::new(1.0, 0.0) - pow_positive(2.0, ComplexScalar::new(1.0, 0.0) - s);
    if factor.norm() < 1e-12 {
        let k = s.im * LN_2 / (2.0 * std::f64::consts::PI);
        return Err(Error::domain(format!(
            "s = {s} is a zero of 1 - 2^(1-s) (s = 1 + 2 pi i k / ln 2 with k ~ {k:.3})"
        )));
    }
    Ok(factor)
}

/// Alternating eta series with the factor `(1 - 2^(1-s))^-1`.
///
/// The bound `|1 - 2^(1-s)|^-1 (N+1)^(-Re s)` is the alternating-series bound;
/// it is rigorous for real `s` and a labelled estimate otherwise.
pub fn zeta_eta(s: ComplexScalar, terms: u64) -> Result<ZetaReference> {
    if !(s.re > 0.0) {
        return Err(Error::domain(format!("Re(s) > 0 required, got s = {s}")));
    }
    if terms == 0 {
        return Err(Error::domain("need at least one term"));
    }
    let factor = eta_prefactor(s)?;
    let neg = -s;
    let alternating: ComplexCompensatedSum = (1..=terms)
        .rev()
        .map(|k| {
            let t = pow_positive(k as f64, neg);
            if k % 2 == 1 {
                t
            } else {
                -t
            }
        })
        .collect();
    let value = alternating.value() / factor;
    let tail = ((terms + 1) as f64).powf(-s.re) / factor.norm();
    Ok(ZetaReference {
        value,
        method: Method::Eta,
        error_bound: tail + rounding_allowance(value),
        bound_kind: if s.im == 0.0 {
            BoundKind::Rigorous
        } else {
            BoundKind::Heuristic
        },
    })
}

/// `exp(z) - 1` without cancellation for small `|z|`.
fn expm1_complex(z: ComplexScalar) -> ComplexScalar {
    if z.im == 0.0 {
        return ComplexScalar::new(z.re.exp_m1(), z.im);
    }
    let half_sin = (z.im / 2.0).sin();
    let re = z.re.exp_m1() * z.im.cos() - 2.0 * half_sin * half_sin;
    let im = z.re.exp() * z.im.sin();
    ComplexScalar::new(re, im)
}

/// `int_k^{k+1} (x - k) x^(-s-1) dx` in closed form.
///
/// With `L = ln(1 + 1/k)` the integral equals
/// `k^(1-s) [ (e^((1-s)L) - 1)/(1-s) + (e^(-sL) - 1)/s ]`. The bracket loses
/// about `log10(k)` digits to cancellation, so for large `k` (or `s` near 1)
/// it is replaced by its expansion `sum_{j>=2} d_{j-1} L^j / j!` where
/// `d_N = ((1-s)^N - (-s)^N)`, generated by `d_{N+1} = (1-s) d_N + (-s)^N`.
pub(crate) fn unit_interval_integral(k: u64, s: ComplexScalar) -> ComplexScalar {
    let one = ComplexScalar::new(1.0, 0.0);
    let kf = k as f64;
    let log_step = (1.0 / kf).ln_1p();
    let scale = pow_positive(kf, one - s);
    let use_series = kf >= 8.0 * (s.norm() + 2.0) || (one - s).norm() < 0.25;

    let bracket = if use_series {
        let a = one - s;
        let b = -s;
        let mut d = one; // d_1
        let mut b_pow = b; // b^1
        let mut l_pow = log_step * log_step / 2.0; // L^j / j! at j = 2
        let mut acc = d * l_pow;
        let mut previous = acc.norm();
        for j in 3..80u32 {
            d = a * d + b_pow;
            b_pow *= b;
            l_pow *= log_step / f64::from(j);
            let t = d * l_pow;
            acc += t;
            // d_N can vanish for single N (e.g. real s = 1/2), so require two small terms
            let current = t.norm();
            if current + previous <= 1e-18 * acc.norm() {
                break;
            }
            previous = current;
        }
        acc
    } else {
        expm1_complex((one - s) * log_step) / (one - s) + expm1_complex(-s * log_step) / s
    };
    scale * bracket
}

/// `sum_{m<=n} m^-s + n^(1-s)/(s-1) - s int_n^X (x - floor x) x^(-s-1) dx`.
///
/// The integral is cut at `X`; the omitted piece is bounded by
/// `|s| X^(-Re s) / Re s` because `0 <= x - floor x < 1`.
pub fn zeta_euler_maclaurin(s: ComplexScalar, n: u64, cutoff: u64) -> Result<ZetaReference> {
    require_not_pole(s)?;
    if !(s.re > 0.0) {
        return Err(Error::domain(format!("Re(s) > 0 required, got s = {s}")));
    }
    if n == 0 {
        return Err(Error::domain("n must be positive"));
    }
    if cutoff < n {
        return Err(Error::domain(format!(
            "cut-off X = {cutoff} is below n = {n}"
        )));
    }
    let one = ComplexScalar::new(1.0, 0.0);
    let head = dirichlet_partial(s, n);
    let boundary = pow_positive(n as f64, one - s) / (s - one);
    let integral: ComplexCompensatedSum = (n..cutoff)
        .rev()
        .map(|k| unit_interval_integral(k, s))
        .collect();
    let value = head + boundary - s * integral.value();
    let tail = s.norm() * (cutoff as f64).powf(-s.re) / s.re;
    Ok(ZetaReference {
        value,
        method: Method::EulerMaclaurin,
        error_bound: tail + rounding_allowance(value),
        bound_kind: BoundKind::Rigorous,
    })
}

/// Euler product over the cached primes, accumulated as
/// `exp(-sum ln(1 - p^-s))`.
///
/// With `T = L^(1-Re s) / ((Re s - 1)(1 - L^(-Re s)))` bounding
/// `sum_{p > L} -ln(1 - p^(-Re s))`, the omitted factors change the value by
/// at most `|value| (e^T - 1)`.
pub fn zeta_euler_product(s: ComplexScalar, cache: &PrimeCache) -> Result<ZetaReference> {
    require_right_of_pole(s)?;
    if cache.is_empty() {
        return Err(Error::domain("prime cache is empty"));
    }
    let neg = -s;
    let log_sum: ComplexCompensatedSum = cache
        .primes()
        .iter()
        .rev()
        .map(|&p| ln_1p_complex(-pow_positive(p as f64, neg)))
        .collect();
    let value = (-log_sum.value()).exp();
    let limit = cache.limit() as f64;
    let sigma = s.re;
    let tail_log = limit.powf(1.0 - sigma) / ((sigma - 1.0) * (1.0 - limit.powf(-sigma)));
    Ok(ZetaReference {
        value,
        method: Method::EulerProduct,
        error_bound: value.norm() * tail_log.exp_m1() + rounding_allowance(value),
        bound_kind: BoundKind::Rigorous,
    })
}

/// `zeta(2n) = (-1)^(n+1) (2 pi)^(2n) B_{2n} / (2 (2n)!)`.
///
/// The rational factor `2^(2n-1) |B_{2n}| / (2n)!` is exact; it is multiplied
/// by `pi^(2n)` in double-double arithmetic and rounded once.
pub fn zeta_even(n: u32) -> Result<ZetaReference> {
    if n == 0 {
        return Err(Error::UnsupportedRange(
            "zeta(0) lies outside the evaluation domain; n must be at least 1".into(),
        ));
    }
    let half = n as usize;
    let table = bernoulli_numbers(half)?;
    let b = table.get(2 * half).expect("table holds B_2n");
    let mut factorial = BigInt::from(1u32);
    for k in 2..=(2 * n) {
        factorial *= BigInt::from(k);
    }
    let ratio = b.abs() * BigRational::from_integer(BigInt::from(1u32) << (2 * n - 1))
        / BigRational::from_integer(factorial);
    let hi = ratio.to_f64().expect("finite ratio");
    let lo = (ratio - BigRational::from_f64(hi).expect("finite"))
        .to_f64()
        .expect("finite residual");
    let value = (DoubleDouble { hi, lo } * DoubleDouble::PI.powi(2 * n)).to_f64();
    debug_assert!(bernoulli::even_index_sign_is_positive(b) == (n % 2 == 1));
    Ok(ZetaReference {
        value: ComplexScalar::new(value, 0.0),
        method: Method::Bernoulli,
        error_bound: 2.0 * f64::EPSILON * value,
        bound_kind: BoundKind::Rigorous,
    })
}

/// Truncated Laurent series `1/(s-1) + sum_n (-1)^n gamma_n (s-1)^n / n!`.
///
/// The bound (last included term plus the propagated table error) is a
/// labelled estimate.
pub fn zeta_laurent(s: ComplexScalar, table: &StieltjesTable) -> Result<ZetaReference> {
    require_not_pole(s)?;
    let one = ComplexScalar::new(1.0, 0.0);
    let w = s - one;
    let mut power = one; // (-1)^n (s-1)^n / n!
    let mut acc = ComplexCompensatedSum::new();
    acc.add(one / w);
    let mut last_term = 0.0;
    let mut propagated = 0.0;
    for (n, (&gamma, &err)) in table.gammas.iter().zip(&table.est_error).enumerate() {
        if n > 0 {
            power = -power * w / n as f64;
        }
        let t = power * gamma;
        acc.add(t);
        last_term = t.norm();
        propagated += err * power.norm();
    }
    let value = acc.value();
    Ok(ZetaReference {
        value,
        method: Method::Laurent,
        error_bound: last_term + propagated + rounding_allowance(value),
        bound_kind: BoundKind::Heuristic,
    })
}

/// Euler-Maclaurin cut-off meeting [`REFERENCE_TARGET`] for `Re(s) > 1`.
fn reference_cutoff(s: ComplexScalar) -> u64 {
    let needed = (s.norm() / (s.re * 0.9 * REFERENCE_TARGET)).powf(1.0 / s.re);
    if needed.is_finite() {
        (needed.ceil() as u64).clamp(1_000, REFERENCE_MAX_CUTOFF)
    } else {
        REFERENCE_MAX_CUTOFF
    }
}

fn cross_check(primary: ZetaReference, secondary: ZetaReference) -> Result<ZetaReference> {
    let gap = (primary.value - secondary.value).norm();
    if gap <= 10.0 * (primary.error_bound + secondary.error_bound) {
        Ok(primary)
    } else {
        Err(Error::CrossCheck {
            primary_method: primary.method.to_string(),
            primary: primary.value,
            primary_bound: primary.error_bound,
            secondary_method: secondary.method.to_string(),
            secondary: secondary.value,
            secondary_bound: secondary.error_bound,
        })
    }
}

/// Best available reference value of zeta(s) for `Re(s) > 0`, `s != 1`.
///
/// * `Re(s) > 1`: Euler-Maclaurin with the cut-off chosen so the bound is at
///   most `1e-10` (capped at [`REFERENCE_MAX_CUTOFF`]), checked against the
///   eta series with `10^6` terms.
/// * `0 < Re(s) <= 1`: the eta series with `10^6` terms, checked against
///   Euler-Maclaurin with `n = 100`, `X = 10^6`.
///
/// The two must agree within ten times their summed bounds.
pub fn reference_zeta(s: ComplexScalar) -> Result<ZetaReference> {
    require_not_pole(s)?;
    if !(s.re > 0.0) {
        return Err(Error::domain(format!("Re(s) > 0 required, got s = {s}")));
    }
    const ETA_TERMS: u64 = 1_000_000;
    if s.re > 1.0 {
        let primary = zeta_euler_maclaurin(s, 10, reference_cutoff(s))?;
        let secondary = zeta_eta(s, ETA_TERMS)?;
        cross_check(primary, secondary)
    } else {
        let em = zeta_euler_maclaurin(s, 100, 1_000_000)?;
        match zeta_eta(s, ETA_TERMS) {
            Ok(eta) => cross_check(eta, em),
            // zeros of 1 - 2^(1-s) on Re(s) = 1: only Euler-Maclaurin applies
            Err(Error::Domain(_)) => Ok(em),
            Err(e) => Err(e),
        }
    }
}
