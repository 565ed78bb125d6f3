//! Tannery's theorem, checked numerically.
//!
//! If `f_p(q) -> f_p` for every fixed `p`, `|f_p(q)| <= M_p` with `M_p`
//! independent of `q`, and `sum M_p` converges, then
//! `sum_{p=0}^{alpha(q)} f_p(q) -> sum_p f_p` for any nondecreasing unbounded
//! `alpha`. [`verify_condition_i`] and [`verify_condition_ii`] test the two
//! hypotheses on finite grids; [`tannery_exchange`] evaluates both sides.
//!
//! Indices start at `p = 0`; the zeta instances set `f_0 = 0`.

use std::f64::consts::FRAC_PI_2;
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::numeric::{ln_1p_complex, pow_positive, CompensatedSum, ComplexCompensatedSum};
use crate::trig::{self, TrigKind, TrigSumSpec};
use crate::ComplexScalar;

/// Shape of the dominating sequence, when known in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundLaw {
    /// `M_p = coefficient / p^exponent` for `p >= 1`.
    Power {
        coefficient: f64,
        exponent: f64,
    },
    Unknown,
}

/// A double sequence `f_p(q)` registered for a Tannery check.
pub trait TanneryInstance: Send + Sync {
    fn name(&self) -> String;

    /// `f_p(q)`.
    fn term(&self, p: u64, q: u64) -> Result<ComplexScalar>;

    /// Claimed limit `f_p` as `q -> infinity`.
    fn limit(&self, p: u64) -> ComplexScalar;

    /// Dominating bound `M_p`; takes no `q`.
    fn bound(&self, p: u64) -> f64;

    /// Upper index `alpha(q)`.
    fn alpha(&self, q: u64) -> u64;

    fn is_admissible(&self, q: u64) -> bool;

    fn bound_law(&self) -> BoundLaw {
        BoundLaw::Unknown
    }

    /// `f_0(q), ..., f_upto(q)`.
    fn row(&self, q: u64, upto: u64) -> Result<Vec<ComplexScalar>> {
        (0..=upto).map(|p| self.term(p, q)).collect()
    }

    /// `f_0, ..., f_upto`.
    fn limits(&self, upto: u64) -> Vec<ComplexScalar> {
        (0..=upto).map(|p| self.limit(p)).collect()
    }
}

/// `C_{m,n}`: `1` for `n <= m`, else `(1+n)/(1+m)`; an upper bound of
/// `(2q+n)/(2q+m)` over `q >= 1`.
pub fn c_bound(m: u32, n: u32) -> f64 {
    if n <= m {
        1.0
    } else {
        (1.0 + f64::from(n)) / (1.0 + f64::from(m))
    }
}

/// q-independent bound on `|term(spec, p, q, s)|` for real `s > 0`:
/// `C^s / p^s` for cot and `(pi/2)^s C^s / p^s` for csc, from
/// `cot x < 1/x` and `csc x < pi/(2x)` on `(0, pi/2)`.
pub fn term_bound(kind: TrigKind, p: u64, m: u32, n: u32, s: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::domain(format!(
            "term bound needs s > 0, got {s}; the bounding series cannot converge"
        )));
    }
    if p == 0 {
        return Err(Error::domain("term bound is defined for p >= 1"));
    }
    Ok(bound_coefficient(kind, m, n, s) / (p as f64).powf(s))
}

fn bound_coefficient(kind: TrigKind, m: u32, n: u32, s: f64) -> f64 {
    let c = c_bound(m, n).powf(s);
    match kind {
        TrigKind::Cot => c,
        TrigKind::Csc => FRAC_PI_2.powf(s) * c,
    }
}

/// The zeta double sequence `f_p(q) = term(spec, p, q, s)`, `f_0 = 0`,
/// with limit `p^-s` and bound from [`term_bound`] at `Re(s)`.
#[derive(Debug, Clone, Copy)]
pub struct TrigInstance {
    pub spec: TrigSumSpec,
    pub s: ComplexScalar,
}

impl TrigInstance {
    pub fn new(spec: TrigSumSpec, s: ComplexScalar) -> Result<Self> {
        if !(s.re > 0.0) {
            return Err(Error::domain(format!(
                "Re(s) > 0 required for the bound, got {s}"
            )));
        }
        Ok(Self { spec, s })
    }
}

impl TanneryInstance for TrigInstance {
    fn name(&self) -> String {
        format!("zeta-{} {} s={}", self.spec.kind, self.spec, self.s)
    }

    fn term(&self, p: u64, q: u64) -> Result<ComplexScalar> {
        if p == 0 {
            trig::upper_index(q, self.spec.n)?;
            return Ok(ComplexScalar::new(0.0, 0.0));
        }
        trig::term(self.spec, p, q, self.s)
    }

    fn limit(&self, p: u64) -> ComplexScalar {
        if p == 0 {
            ComplexScalar::new(0.0, 0.0)
        } else {
            pow_positive(p as f64, -self.s)
        }
    }

    fn bound(&self, p: u64) -> f64 {
        if p == 0 {
            return 0.0;
        }
        term_bound(self.spec.kind, p, self.spec.m, self.spec.n, self.s.re)
            .expect("instance guarantees Re(s) > 0")
    }

    fn alpha(&self, q: u64) -> u64 {
        trig::upper_index(q, self.spec.n).unwrap_or(0)
    }

    fn is_admissible(&self, q: u64) -> bool {
        self.spec.is_admissible(q)
    }

    fn bound_law(&self) -> BoundLaw {
        let spec = self.spec;
        BoundLaw::Power {
            coefficient: bound_coefficient(spec.kind, spec.m, spec.n, self.s.re),
            exponent: self.s.re,
        }
    }
}

/// `f_k(n) = C(n, k) (x/n)^k`, the binomial expansion of `(1 + x/n)^n`, with
/// limit `x^k / k!` and bound `|x|^k / k!`.
#[derive(Debug, Clone, Copy)]
pub struct ExpInstance {
    pub x: f64,
}

impl ExpInstance {
    fn power_over_factorial(x: f64, k: u64) -> f64 {
        (1..=k).fold(1.0, |acc, j| acc * x / j as f64)
    }
}

impl TanneryInstance for ExpInstance {
    fn name(&self) -> String {
        format!("exp x={}", self.x)
    }

    fn term(&self, k: u64, n: u64) -> Result<ComplexScalar> {
        Ok(*self.row(n, k)?.last().expect("row has k+1 entries"))
    }

    fn limit(&self, k: u64) -> ComplexScalar {
        ComplexScalar::new(Self::power_over_factorial(self.x, k), 0.0)
    }

    fn bound(&self, k: u64) -> f64 {
        Self::power_over_factorial(self.x.abs(), k)
    }

    fn alpha(&self, n: u64) -> u64 {
        n
    }

    fn is_admissible(&self, n: u64) -> bool {
        n >= 1
    }

    fn row(&self, n: u64, upto: u64) -> Result<Vec<ComplexScalar>> {
        if n == 0 {
            return Err(Error::domain("exp instance needs n >= 1"));
        }
        let nf = n as f64;
        let step = self.x / nf;
        let mut t = 1.0;
        let mut out = Vec::with_capacity(upto as usize + 1);
        out.push(ComplexScalar::new(1.0, 0.0));
        for k in 1..=upto {
            t = if k > n || t == 0.0 {
                0.0
            } else {
                t * ((n - k + 1) as f64 / k as f64) * step
            };
            out.push(ComplexScalar::new(t, 0.0));
        }
        Ok(out)
    }

    fn limits(&self, upto: u64) -> Vec<ComplexScalar> {
        let mut t = 1.0;
        let mut out = vec![ComplexScalar::new(1.0, 0.0)];
        for k in 1..=upto {
            t *= self.x / k as f64;
            out.push(ComplexScalar::new(t, 0.0));
        }
        out
    }
}

type TermFn = Box<dyn Fn(u64, u64) -> Result<ComplexScalar> + Send + Sync>;
type LimitFn = Box<dyn Fn(u64) -> ComplexScalar + Send + Sync>;
type BoundFn = Box<dyn Fn(u64) -> f64 + Send + Sync>;
type AlphaFn = Box<dyn Fn(u64) -> u64 + Send + Sync>;
type AdmissibleFn = Box<dyn Fn(u64) -> bool + Send + Sync>;

/// An instance assembled from closures.
pub struct FnInstance {
    pub name: String,
    pub term: TermFn,
    pub limit: LimitFn,
    pub bound: BoundFn,
    pub alpha: AlphaFn,
    pub admissible: AdmissibleFn,
    pub bound_law: BoundLaw,
}

impl fmt::Debug for FnInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnInstance")
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

impl TanneryInstance for FnInstance {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn term(&self, p: u64, q: u64) -> Result<ComplexScalar> {
        (self.term)(p, q)
    }
    fn limit(&self, p: u64) -> ComplexScalar {
        (self.limit)(p)
    }
    fn bound(&self, p: u64) -> f64 {
        (self.bound)(p)
    }
    fn alpha(&self, q: u64) -> u64 {
        (self.alpha)(q)
    }
    fn is_admissible(&self, q: u64) -> bool {
        (self.admissible)(q)
    }
    fn bound_law(&self) -> BoundLaw {
        self.bound_law
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionIReport {
    pub pass: bool,
    pub p_max: u64,
    pub q_first: u64,
    pub q_last: u64,
    /// Index with the largest deviation at `q_last`.
    pub worst_p: u64,
    pub worst_deviation: f64,
    /// Indices whose deviation is above tolerance or grew along the schedule.
    pub failing: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionIIReport {
    pub pass: bool,
    /// Largest `|f_p(q)| / M_p` seen on the grid.
    pub worst_ratio: f64,
    pub worst_at: (u64, u64),
    pub cells_checked: u64,
    pub bound_violations: u64,
    /// `sum_{p <= p_max} M_p`.
    pub bound_series_partial: f64,
    /// Integral tail `sum_{p > p_max} M_p`, for power-law bounds.
    pub tail_estimate: Option<f64>,
    /// Last Cauchy-condensation ratio `2 M_{2^(k+1)} / M_{2^k}`.
    pub condensation_ratio: Option<f64>,
    pub bound_series_convergent: bool,
}

/// Outcome of one or both condition checks on an instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub instance: String,
    pub condition_i: Option<ConditionIReport>,
    pub condition_ii: Option<ConditionIIReport>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.condition_i.as_ref().is_none_or(|r| r.pass)
            && self.condition_ii.as_ref().is_none_or(|r| r.pass)
    }

    /// One-line reason for the first failing condition.
    pub fn failure_reason(&self) -> Option<String> {
        if let Some(r) = self.condition_i.as_ref().filter(|r| !r.pass) {
            return Some(format!(
                "condition (i) failed for {}: p = {:?} deviate from their limits (worst {:.3e} at p = {})",
                self.instance, r.failing, r.worst_deviation, r.worst_p
            ));
        }
        if let Some(r) = self.condition_ii.as_ref().filter(|r| !r.pass) {
            return Some(if r.bound_violations > 0 {
                format!(
                    "condition (ii) failed for {}: {} bound violations (worst ratio {:.6} at p = {}, q = {})",
                    self.instance, r.bound_violations, r.worst_ratio, r.worst_at.0, r.worst_at.1
                )
            } else {
                format!(
                    "condition (ii) failed for {}: dominating series does not converge",
                    self.instance
                )
            });
        }
        None
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "instance: {}", self.instance);
        if let Some(r) = &self.condition_i {
            let _ = writeln!(
                out,
                "  condition (i):  {}  p <= {}, q {}..{}, worst |f_p(q) - f_p| = {:.3e} at p = {}",
                verdict(r.pass),
                r.p_max,
                r.q_first,
                r.q_last,
                r.worst_deviation,
                r.worst_p
            );
        }
        if let Some(r) = &self.condition_ii {
            let _ = writeln!(
                out,
                "  condition (ii): {}  worst |f_p(q)|/M_p = {:.12} at (p, q) = ({}, {}), {} cells, {} violations",
                verdict(r.pass),
                r.worst_ratio,
                r.worst_at.0,
                r.worst_at.1,
                r.cells_checked,
                r.bound_violations
            );
            let _ = writeln!(
                out,
                "                  sum M_p partial = {:.12}, tail = {}, condensation ratio = {}, convergent = {}",
                r.bound_series_partial,
                r.tail_estimate.map_or("n/a".into(), |t| format!("{t:.3e}")),
                r.condensation_ratio.map_or("n/a".into(), |t| format!("{t:.6}")),
                r.bound_series_convergent
            );
        }
        out
    }

    /// `key=value` lines for scripts.
    pub fn to_key_values(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "instance={}", self.instance);
        let _ = writeln!(out, "pass={}", self.passed());
        if let Some(r) = &self.condition_i {
            let _ = writeln!(out, "condition_i.pass={}", r.pass);
            let _ = writeln!(out, "condition_i.p_max={}", r.p_max);
            let _ = writeln!(out, "condition_i.q_first={}", r.q_first);
            let _ = writeln!(out, "condition_i.q_last={}", r.q_last);
            let _ = writeln!(out, "condition_i.worst_p={}", r.worst_p);
            let _ = writeln!(out, "condition_i.worst_deviation={:e}", r.worst_deviation);
        }
        if let Some(r) = &self.condition_ii {
            let _ = writeln!(out, "condition_ii.pass={}", r.pass);
            let _ = writeln!(out, "condition_ii.worst_ratio={:e}", r.worst_ratio);
            let _ = writeln!(out, "condition_ii.worst_p={}", r.worst_at.0);
            let _ = writeln!(out, "condition_ii.worst_q={}", r.worst_at.1);
            let _ = writeln!(out, "condition_ii.cells_checked={}", r.cells_checked);
            let _ = writeln!(out, "condition_ii.bound_violations={}", r.bound_violations);
            let _ = writeln!(
                out,
                "condition_ii.bound_series_partial={:e}",
                r.bound_series_partial
            );
            if let Some(t) = r.tail_estimate {
                let _ = writeln!(out, "condition_ii.tail_estimate={t:e}");
            }
            if let Some(c) = r.condensation_ratio {
                let _ = writeln!(out, "condition_ii.condensation_ratio={c:e}");
            }
            let _ = writeln!(
                out,
                "condition_ii.bound_series_convergent={}",
                r.bound_series_convergent
            );
        }
        out
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Checks `|f_p(q_last) - f_p| < tol` and that the deviation did not grow
/// between the first and last schedule points, for `p = 0..=p_max`.
pub fn verify_condition_i(
    inst: &dyn TanneryInstance,
    p_max: u64,
    q_schedule: &[u64],
    tol: f64,
) -> Result<ConditionIReport> {
    let (&q_first, &q_last) = match (q_schedule.first(), q_schedule.last()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::domain("empty q schedule")),
    };
    if let Some(&q) = q_schedule.iter().find(|&&q| !inst.is_admissible(q)) {
        return Err(Error::domain(format!(
            "q = {q} is inadmissible for {}",
            inst.name()
        )));
    }
    let q_min = *q_schedule.iter().min().expect("nonempty");
    if p_max > inst.alpha(q_min) {
        return Err(Error::domain(format!(
            "p_max = {p_max} exceeds alpha({q_min}) = {}",
            inst.alpha(q_min)
        )));
    }
    let first = inst.row(q_first, p_max)?;
    let last = inst.row(q_last, p_max)?;
    let limits = inst.limits(p_max);

    let mut worst_p = 0;
    let mut worst_deviation = 0.0;
    let mut failing = Vec::new();
    for p in 0..=p_max {
        let i = p as usize;
        let dev_first = (first[i] - limits[i]).norm();
        let dev_last = (last[i] - limits[i]).norm();
        if dev_last > worst_deviation || p == 0 {
            worst_deviation = dev_last;
            worst_p = p;
        }
        if !(dev_last < tol && dev_last <= dev_first) {
            failing.push(p);
        }
    }
    Ok(ConditionIReport {
        pass: failing.is_empty(),
        p_max,
        q_first,
        q_last,
        worst_p,
        worst_deviation,
        failing,
    })
}

/// Grid of admissible `q <= q_max`: every value up to 1024, then geometric
/// steps of about 5%, always ending at `q_max`.
pub fn condition_ii_grid(inst: &dyn TanneryInstance, q_max: u64) -> Vec<u64> {
    const DENSE: u64 = 1024;
    let mut grid: Vec<u64> = (1..=q_max.min(DENSE))
        .filter(|&q| inst.is_admissible(q))
        .collect();
    let mut q = DENSE;
    while q < q_max {
        q = (q + q / 20).min(q_max);
        if inst.is_admissible(q) {
            grid.push(q);
        }
    }
    grid.dedup();
    grid
}

/// Checks `|f_p(q)| <= M_p` on [`condition_ii_grid`] for
/// `p <= min(p_max, alpha(q))`, and that `sum M_p` converges.
///
/// Convergence is decided exactly for power-law bounds (exponent > 1, with the
/// integral tail reported) and by a Cauchy-condensation ratio test otherwise.
pub fn verify_condition_ii(
    inst: &dyn TanneryInstance,
    p_max: u64,
    q_max: u64,
) -> Result<ConditionIIReport> {
    if !inst.is_admissible(q_max) {
        return Err(Error::domain(format!(
            "q_max = {q_max} is inadmissible for {}",
            inst.name()
        )));
    }
    let bounds: Vec<f64> = (0..=p_max).map(|p| inst.bound(p)).collect();

    let mut worst_ratio = 0.0f64;
    let mut worst_at = (0, q_max);
    let mut cells = 0u64;
    let mut violations = 0u64;
    for q in condition_ii_grid(inst, q_max) {
        let upto = p_max.min(inst.alpha(q));
        for (p, f) in inst.row(q, upto)?.into_iter().enumerate() {
            let magnitude = f.norm();
            let bound = bounds[p];
            let ratio = if magnitude == 0.0 {
                0.0
            } else if bound > 0.0 {
                magnitude / bound
            } else {
                f64::INFINITY
            };
            cells += 1;
            if ratio > 1.0 {
                violations += 1;
            }
            if ratio > worst_ratio {
                worst_ratio = ratio;
                worst_at = (p as u64, q);
            }
        }
    }

    let bound_series_partial = bounds.iter().copied().collect::<CompensatedSum>().value();
    let condensation_ratio = condensation_ratio(&bounds);
    let (tail_estimate, bound_series_convergent) = match inst.bound_law() {
        BoundLaw::Power {
            coefficient,
            exponent,
        } => {
            if exponent > 1.0 {
                let tail = coefficient * (p_max as f64).powf(1.0 - exponent) / (exponent - 1.0);
                (Some(tail), true)
            } else {
                (Some(f64::INFINITY), false)
            }
        }
        BoundLaw::Unknown => (
            None,
            condensation_ratio.is_none_or(|r| r <= CONDENSATION_LIMIT),
        ),
    };

    Ok(ConditionIIReport {
        pass: violations == 0 && worst_ratio <= 1.0 + 1e-12 && bound_series_convergent,
        worst_ratio,
        worst_at,
        cells_checked: cells,
        bound_violations: violations,
        bound_series_partial,
        tail_estimate,
        condensation_ratio,
        bound_series_convergent,
    })
}

/// Largest condensation ratio accepted as evidence of convergence.
pub const CONDENSATION_LIMIT: f64 = 0.95;

/// Worst of the last three ratios `2 M_{2^(k+1)} / M_{2^k}` with
/// `2^(k+1) <= p_max`; `None` when the bounds vanish there.
fn condensation_ratio(bounds: &[f64]) -> Option<f64> {
    let mut ratios = Vec::new();
    let mut p = 1usize;
    while 2 * p < bounds.len() {
        let (lo, hi) = (bounds[p], bounds[2 * p]);
        if lo > 0.0 {
            ratios.push(2.0 * hi / lo);
        } else if hi > 0.0 {
            ratios.push(f64::INFINITY);
        }
        p *= 2;
    }
    ratios.iter().rev().take(3).copied().reduce(f64::max)
}

/// Both sides of the interchange identity.
#[derive(Debug, Clone, PartialEq)]
pub struct ExchangeResult {
    /// `sum_{p=0}^{alpha(q_last)} f_p(q_last)`.
    pub lhs: ComplexScalar,
    /// `sum_{p=0}^{series_terms} f_p`.
    pub rhs: ComplexScalar,
    pub gap: f64,
    /// `(q, |lhs(q) - rhs|)` for every schedule point.
    pub gaps: Vec<(u64, f64)>,
    /// Integral bound on the omitted `sum_{p > series_terms} M_p`, for power laws.
    pub rhs_tail: Option<f64>,
}

impl ExchangeResult {
    /// Gap nonincreasing over the last three schedule points.
    pub fn gap_decreasing_at_end(&self) -> bool {
        let tail = &self.gaps[self.gaps.len().saturating_sub(3)..];
        tail.windows(2).all(|w| w[1].1 <= w[0].1)
    }
}

/// Evaluates the finite side at every schedule point and the limit series.
pub fn tannery_exchange(
    inst: &dyn TanneryInstance,
    q_schedule: &[u64],
    series_terms: u64,
) -> Result<ExchangeResult> {
    if q_schedule.is_empty() {
        return Err(Error::domain("empty q schedule"));
    }
    if let Some(&q) = q_schedule.iter().find(|&&q| !inst.is_admissible(q)) {
        return Err(Error::domain(format!(
            "q = {q} is inadmissible for {}",
            inst.name()
        )));
    }
    let rhs = inst
        .limits(series_terms)
        .into_iter()
        .rev()
        .collect::<ComplexCompensatedSum>()
        .value();
    let mut gaps = Vec::with_capacity(q_schedule.len());
    let mut lhs = ComplexScalar::new(0.0, 0.0);
    for &q in q_schedule {
        lhs = inst
            .row(q, inst.alpha(q))?
            .into_iter()
            .collect::<ComplexCompensatedSum>()
            .value();
        gaps.push((q, (lhs - rhs).norm()));
    }
    let rhs_tail = match inst.bound_law() {
        BoundLaw::Power {
            coefficient,
            exponent,
        } if exponent > 1.0 => {
            Some(coefficient * (series_terms as f64).powf(1.0 - exponent) / (exponent - 1.0))
        }
        _ => None,
    };
    Ok(ExchangeResult {
        lhs,
        rhs,
        gap: (lhs - rhs).norm(),
        gaps,
        rhs_tail,
    })
}

/// `(1 + x/n)^n`: binomial sum for `n <= 64`, `exp(n ln(1 + x/n))` above.
pub fn exp_limit(x: f64, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    if n <= BINOMIAL_PATH_MAX {
        Ok(exp_limit_binomial(x, n))
    } else {
        exp_limit_log(x, n)
    }
}

pub const BINOMIAL_PATH_MAX: u64 = 64;

/// `sum_{k=0}^{n} C(n, k) (x/n)^k`.
pub fn exp_limit_binomial(x: f64, n: u64) -> f64 {
    let step = x / n as f64;
    let mut binom: u128 = 1;
    let mut power = 1.0;
    let mut acc = CompensatedSum::new();
    for k in 0..=n {
        acc.add(binom as f64 * power);
        binom = binom * u128::from(n - k) / u128::from(k + 1);
        power *= step;
    }
    acc.value()
}

/// `exp(n ln(1 + x/n))`.
pub fn exp_limit_log(x: f64, n: u64) -> Result<f64> {
    let nf = n as f64;
    if !(1.0 + x / nf > 0.0) {
        return Err(Error::domain(format!(
            "1 + x/n must be positive, got x = {x}, n = {n}"
        )));
    }
    Ok((nf * (x / nf).ln_1p()).exp())
}

/// Euler's limit `n! n^z / (z (z+1) ... (z+n))`, as
/// `exp(z ln n - ln z - sum_{k=1}^n ln(1 + z/k))`.
pub fn gamma_limit(z: ComplexScalar, n: u64) -> Result<ComplexScalar> {
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return Err(Error::domain(format!("z = {} is a pole of Gamma", z.re)));
    }
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    let mut log_sum = ComplexCompensatedSum::new();
    for k in (1..=n).rev() {
        log_sum.add(ln_1p_complex(z / k as f64));
    }
    let log_value = z * (n as f64).ln() - z.ln() - log_sum.value();
    Ok(log_value.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn real(x: f64) -> ComplexScalar {
        ComplexScalar::new(x, 0.0)
    }

    fn zeta_cot(s: f64) -> TrigInstance {
        TrigInstance::new(TrigSumSpec::cot(0, 1), real(s)).unwrap()
    }

    #[test]
    fn c_bound_cases() {
        assert_eq!(c_bound(0, 0), 1.0);
        assert_eq!(c_bound(0, 1), 2.0);
        assert_eq!(c_bound(3, 1), 1.0);
        assert_eq!(c_bound(1, 4), 2.5);
    }

    #[test]
    fn c_bound_is_the_supremum() {
        for m in 0..6 {
            for n in 0..6 {
                let sup = (1..5000u32)
                    .map(|q| f64::from(2 * q + n) / f64::from(2 * q + m))
                    .fold(f64::MIN, f64::max);
                let c = c_bound(m, n);
                assert!(sup <= c);
                if n > m {
                    // the ratio peaks at q = 1; C extends it to q = 1/2
                    assert_eq!(sup, f64::from(2 + n) / f64::from(2 + m));
                }
            }
        }
    }

    #[test]
    fn term_bound_examples() {
        assert_eq!(term_bound(TrigKind::Cot, 2, 0, 0, 2.0).unwrap(), 0.25);
        assert_eq!(term_bound(TrigKind::Cot, 1, 0, 1, 2.0).unwrap(), 4.0);
        assert_eq!(term_bound(TrigKind::Csc, 1, 0, 0, 1.0).unwrap(), PI / 2.0);
        assert!(term_bound(TrigKind::Cot, 1, 0, 0, 0.0).is_err());
        assert!(term_bound(TrigKind::Cot, 1, 0, 0, -1.0).is_err());
    }

    #[test]
    fn condition_i_examples() {
        let sched: Vec<u64> = (0..5).map(|k| 10u64.pow(k + 1)).collect();
        let r = verify_condition_i(&zeta_cot(2.0), 5, &sched, 1e-3).unwrap();
        assert!(r.pass, "{r:?}");

        let exp_sched: Vec<u64> = (1..=6).map(|k| 10u64.pow(k)).collect();
        let r = verify_condition_i(&ExpInstance { x: 1.0 }, 5, &exp_sched, 1e-4).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn condition_i_negative_control() {
        let base = zeta_cot(2.0);
        let wrong = FnInstance {
            name: "zeta-cot with limit 1/p".into(),
            term: Box::new(move |p, q| base.term(p, q)),
            limit: Box::new(|p| {
                if p == 0 {
                    real(0.0)
                } else {
                    real(1.0 / p as f64)
                }
            }),
            bound: Box::new(move |p| base.bound(p)),
            alpha: Box::new(move |q| base.alpha(q)),
            admissible: Box::new(move |q| base.is_admissible(q)),
            bound_law: base.bound_law(),
        };
        let sched = [10, 100, 1000, 10_000, 100_000];
        let r = verify_condition_i(&wrong, 5, &sched, 1e-3).unwrap();
        assert!(!r.pass);
        assert_eq!(r.failing, vec![2, 3, 4, 5]);
    }

    #[test]
    fn condition_i_rejects_bad_preconditions() {
        assert!(verify_condition_i(&zeta_cot(2.0), 50, &[10, 100], 1e-3).is_err());
        let inst = TrigInstance::new(TrigSumSpec::cot(0, 0), real(2.0)).unwrap();
        assert!(verify_condition_i(&inst, 1, &[1, 10], 1e-3).is_err());
        assert!(verify_condition_i(&inst, 1, &[], 1e-3).is_err());
    }

    #[test]
    fn condition_ii_examples() {
        let r = verify_condition_ii(&zeta_cot(2.0), 10_000, 10_000).unwrap();
        assert!(r.pass && r.worst_ratio <= 1.0, "{r:?}");

        let r = verify_condition_ii(&zeta_cot(1.0), 1000, 1000).unwrap();
        assert!(!r.pass);
        assert_eq!(r.bound_violations, 0);
        assert!(!r.bound_series_convergent);

        let csc = TrigInstance::new(TrigSumSpec::csc(0, 0), real(3.0)).unwrap();
        let r = verify_condition_ii(&csc, 1000, 1000).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn condition_ii_detects_a_violated_bound() {
        let base = zeta_cot(2.0);
        let tight = FnInstance {
            name: "shrunken bound".into(),
            term: Box::new(move |p, q| base.term(p, q)),
            limit: Box::new(move |p| base.limit(p)),
            bound: Box::new(move |p| 0.2 * base.bound(p)),
            alpha: Box::new(move |q| base.alpha(q)),
            admissible: Box::new(move |q| base.is_admissible(q)),
            bound_law: BoundLaw::Unknown,
        };
        let r = verify_condition_ii(&tight, 100, 100).unwrap();
        assert!(!r.pass);
        assert!(r.bound_violations > 0);
        assert!(
            r.bound_series_convergent,
            "condensation ratio 2^(1-2) = 0.5"
        );
    }

    #[test]
    fn condensation_separates_harmonic_from_square() {
        let harmonic: Vec<f64> = (0..=1024)
            .map(|p| if p == 0 { 0.0 } else { 1.0 / p as f64 })
            .collect();
        assert_eq!(condensation_ratio(&harmonic), Some(1.0));
        let square: Vec<f64> = (0..=1024)
            .map(|p| if p == 0 { 0.0 } else { 1.0 / (p * p) as f64 })
            .collect();
        assert_eq!(condensation_ratio(&square), Some(0.5));
    }

    #[test]
    fn exchange_examples() {
        let sched = [2500, 5000, 10_000];
        let r = tannery_exchange(&zeta_cot(2.0), &sched, 1_000_000).unwrap();
        assert!(r.gap < 1e-3);
        assert!(r.gap_decreasing_at_end());
        assert!((r.rhs.re - PI * PI / 6.0).abs() < 1.1e-6);

        let r =
            tannery_exchange(&ExpInstance { x: 1.0 }, &[10_000, 100_000, 1_000_000], 40).unwrap();
        assert!(r.gap < 1e-5);
        assert!((r.rhs.re - std::f64::consts::E).abs() < 1e-15);
        assert!(r.gap_decreasing_at_end());

        let r = tannery_exchange(&ExpInstance { x: 0.0 }, &[10, 1000], 30).unwrap();
        assert_eq!(r.lhs, real(1.0));
        assert_eq!(r.rhs, real(1.0));
        assert_eq!(r.gap, 0.0);
    }

    #[test]
    fn exp_limit_examples() {
        assert_eq!(exp_limit(0.0, 10).unwrap(), 1.0);
        assert_eq!(exp_limit(-1.0, 1).unwrap(), 0.0);
        assert!((exp_limit(1.0, 1_000_000).unwrap() - std::f64::consts::E).abs() < 2e-6);
        for x in [-3.0, -0.5, 0.7, 2.0, 10.0] {
            let a = exp_limit_binomial(x, 64);
            let b = exp_limit_log(x, 64).unwrap();
            assert!(
                (a - b).abs() <= 1e-13 * b.abs().max(1e-300),
                "x={x}: {a} vs {b}"
            );
        }
        assert!(exp_limit(-200.0, 100).is_err());
        assert!(exp_limit(1.0, 0).is_err());
    }

    #[test]
    fn gamma_limit_examples() {
        assert!((gamma_limit(real(1.0), 100_000).unwrap().re - 1.0).abs() < 1e-4);
        assert!((gamma_limit(real(0.5), 1_000_000).unwrap().re - PI.sqrt()).abs() < 1e-3);
        assert!((gamma_limit(real(5.0), 1_000_000).unwrap().re - 24.0).abs() < 0.24);
        for z in [0.0, -1.0, -7.0] {
            assert!(gamma_limit(real(z), 10).is_err());
        }
        assert!(gamma_limit(real(-0.5), 10).is_ok());
    }

    #[test]
    fn gamma_limit_telescopes_at_one() {
        for n in [1u64, 5, 1000] {
            let g = gamma_limit(real(1.0), n).unwrap();
            let expected = n as f64 / (n + 1) as f64;
            assert!((g.re - expected).abs() < 1e-13, "n={n}");
        }
    }
}
