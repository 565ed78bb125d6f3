use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

pub const MAX_ORDER: usize = 8;
pub const MIN_TRUNCATION: u64 = 1_000;

/// Stieltjes constants `gamma_0..=gamma_K` estimated from their defining limit.
#[derive(Debug, Clone, PartialEq)]
pub struct StieltjesTable {
    pub gammas: Vec<f64>,
    /// Largest truncation index used (twice the requested `M`).
    pub m_max: u64,
    /// Heuristic per-entry error: `|accelerated - raw(2M)|`.
    pub est_error: Vec<f64>,
}

impl StieltjesTable {
    pub fn order(&self) -> usize {
        self.gammas.len() - 1
    }
}

/// `gamma_n ~ sum_{k<=M} (ln k)^n / k - (ln M)^(n+1)/(n+1)`, evaluated at `M`
/// and `2M` and combined by one first-order Richardson step.
pub fn stieltjes(nmax: usize, truncation: u64) -> Result<StieltjesTable> {
    if nmax > MAX_ORDER {
        return Err(Error::UnsupportedRange(format!(
            "Stieltjes constants limited to n <= {MAX_ORDER}, got {nmax}"
        )));
    }
    if truncation < MIN_TRUNCATION {
        return Err(Error::UnsupportedRange(format!(
            "truncation M must be at least {MIN_TRUNCATION}, got {truncation}"
        )));
    }

    let doubled = 2 * truncation;
    let mut sums = vec![CompensatedSum::new(); nmax + 1];
    let mut at_m = Vec::new();
    for k in 1..=doubled {
        let ln_k = (k as f64).ln();
        let mut power = 1.0 / k as f64;
        for acc in sums.iter_mut() {
            acc.add(power);
            power *= ln_k;
        }
        if k == truncation {
            at_m = sums.iter().map(CompensatedSum::value).collect();
        }
    }

    let raw = |partial: f64, n: usize, m: u64| {
        let ln_m = (m as f64).ln();
        partial - ln_m.powi(n as i32 + 1) / (n as f64 + 1.0)
    };

    let mut gammas = Vec::with_capacity(nmax + 1);
    let mut est_error = Vec::with_capacity(nmax + 1);
    for n in 0..=nmax {
        let coarse = raw(at_m[n], n, truncation);
        let fine = raw(sums[n].value(), n, doubled);
        let accelerated = 2.0 * fine - coarse;
        gammas.push(accelerated);
        est_error.push((accelerated - fine).abs());
    }
    Ok(StieltjesTable {
        gammas,
        m_max: doubled,
        est_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_gamma_and_gamma_one() {
        let t = stieltjes(1, 1_000_000).unwrap();
        assert!((t.gammas[0] - 0.577_215_664_901_532_9).abs() < 1e-4);
        assert!((t.gammas[1] + 0.0728).abs() < 1e-4);
        assert_eq!(t.m_max, 2_000_000);
    }

    #[test]
    fn gamma_zero_matches_harmonic_minus_log() {
        let t = stieltjes(0, 1_000).unwrap();
        // H_m - ln m at m = 2000, summed independently in descending order
        let h: f64 = (1..=2000u32).rev().map(|k| 1.0 / f64::from(k)).sum();
        let raw = h - 2000f64.ln();
        assert!((t.gammas[0] - raw).abs() <= t.est_error[0]);
    }

    #[test]
    fn coarse_and_fine_truncations_agree_within_estimates() {
        let coarse = stieltjes(0, 1_000).unwrap();
        let fine = stieltjes(0, 1_000_000).unwrap();
        assert!(
            (coarse.gammas[0] - fine.gammas[0]).abs() <= coarse.est_error[0] + fine.est_error[0]
        );
    }

    #[test]
    fn range_checks() {
        assert!(matches!(
            stieltjes(9, 1_000),
            Err(Error::UnsupportedRange(_))
        ));
        assert!(matches!(stieltjes(2, 999), Err(Error::UnsupportedRange(_))));
    }
}
