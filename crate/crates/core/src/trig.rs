//! Finite cotangent/cosecant power sums and their `q -> infinity` limit.
//!
//! For a [`TrigSumSpec`] `(kind, m, n)` and an admissible `q`,
//!
//! ```text
//! S(q) = sum_{p=1}^{floor((2q+n-1)/2)} ( pi/(2q+m) * f(p pi/(2q+n)) )^s,   f = cot or csc
//! ```
//!
//! tends to `zeta(s)` for every `Re(s) > 1`. Every angle lies strictly inside
//! `(0, pi/2)`, so each base is a positive real and `base^s` is taken through
//! the real logarithm.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::convergence::QSchedule;
use crate::error::{Error, Result};
use crate::numeric::{pow_positive, ComplexCompensatedSum};
use crate::ComplexScalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrigKind {
    Cot,
    Csc,
}

impl fmt::Display for TrigKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrigKind::Cot => f.write_str("cot"),
            TrigKind::Csc => f.write_str("csc"),
        }
    }
}

impl FromStr for TrigKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cot" => Ok(TrigKind::Cot),
            "csc" => Ok(TrigKind::Csc),
            other => Err(Error::Parse(format!(
                "unknown kind `{other}` (expected cot or csc)"
            ))),
        }
    }
}

/// Parameters of one family of finite sums: the trigonometric function, the
/// prefactor shift `m` in `pi/(2q+m)` and the angle shift `n` in `p pi/(2q+n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TrigSumSpec {
    pub kind: TrigKind,
    pub m: u32,
    pub n: u32,
}

impl TrigSumSpec {
    pub const fn new(kind: TrigKind, m: u32, n: u32) -> Self {
        Self { kind, m, n }
    }

    pub const fn cot(m: u32, n: u32) -> Self {
        Self::new(TrigKind::Cot, m, n)
    }

    pub const fn csc(m: u32, n: u32) -> Self {
        Self::new(TrigKind::Csc, m, n)
    }

    /// `n = 0` needs `q >= 2`; `n >= 1` needs `q >= 1`.
    pub fn is_admissible(&self, q: u64) -> bool {
        is_admissible(q, self.n)
    }

    /// Smallest admissible `q`.
    pub fn min_q(&self) -> u64 {
        if self.n == 0 {
            2
        } else {
            1
        }
    }
}

impl fmt::Display for TrigSumSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, m={}, n={})", self.kind, self.m, self.n)
    }
}

fn is_admissible(q: u64, n: u32) -> bool {
    if n == 0 {
        q >= 2
    } else {
        q >= 1
    }
}

fn check_admissible(q: u64, n: u32) -> Result<()> {
    if is_admissible(q, n) {
        Ok(())
    } else if n == 0 {
        Err(Error::domain(format!(
            "q = {q} is inadmissible for n = 0 (need q >= 2)"
        )))
    } else {
        Err(Error::domain(format!(
            "q = {q} is inadmissible (need q >= 1)"
        )))
    }
}

/// Upper summation index `floor((2q + n - 1)/2)`.
pub fn upper_index(q: u64, n: u32) -> Result<u64> {
    check_admissible(q, n)?;
    Ok((2 * q + u64::from(n) - 1) / 2)
}

/// Positive real base `pi/(2q+m) * cot(p pi/(2q+n))` (or `csc`).
///
/// Caller guarantees `1 <= p <= upper_index(q, n)`.
#[inline]
fn base(spec: TrigSumSpec, p: u64, q: u64) -> f64 {
    let angle = (p as f64 * PI) / (2 * q + u64::from(spec.n)) as f64;
    let prefactor = PI / (2 * q + u64::from(spec.m)) as f64;
    let (sin, cos) = angle.sin_cos();
    match spec.kind {
        TrigKind::Cot => prefactor * (cos / sin),
        TrigKind::Csc => prefactor / sin,
    }
}

/// One summand `b^s` of the finite sum.
pub fn term(spec: TrigSumSpec, p: u64, q: u64, s: ComplexScalar) -> Result<ComplexScalar> {
    let upper = upper_index(q, spec.n)?;
    if p == 0 || p > upper {
        return Err(Error::domain(format!(
            "p = {p} outside 1..={upper} for q = {q}, n = {}",
            spec.n
        )));
    }
    Ok(pow_positive(base(spec, p, q), s))
}

/// One evaluation of the finite sum at a fixed `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumEvaluation {
    pub q: u64,
    pub term_count: u64,
    pub value: ComplexScalar,
    /// Magnitude of the compensated-summation residual; diagnostic only.
    pub compensation: f64,
}

/// The finite sum at `q`, accumulated in ascending `p` with compensation.
pub fn finite_trig_sum(spec: TrigSumSpec, q: u64, s: ComplexScalar) -> Result<SumEvaluation> {
    let term_count = upper_index(q, spec.n)?;
    let acc: ComplexCompensatedSum = (1..=term_count)
        .map(|p| pow_positive(base(spec, p, q), s))
        .collect();
    Ok(SumEvaluation {
        q,
        term_count,
        value: acc.value(),
        compensation: acc.compensation(),
    })
}

/// Classical limit formulas that are special cases of the general sums.
///
/// `E10`-`E16` are the classical even/odd integer-argument formulas, `E28`-`E32`
/// their extensions to complex `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassicalForm {
    E10,
    E11,
    E12,
    E14,
    E15,
    E16,
    E28,
    E29,
    E30,
    E31,
    E32,
}

impl ClassicalForm {
    pub const ALL: [ClassicalForm; 11] = [
        ClassicalForm::E10,
        ClassicalForm::E11,
        ClassicalForm::E12,
        ClassicalForm::E14,
        ClassicalForm::E15,
        ClassicalForm::E16,
        ClassicalForm::E28,
        ClassicalForm::E29,
        ClassicalForm::E30,
        ClassicalForm::E31,
        ClassicalForm::E32,
    ];

    /// Human-readable form of the limit, for reports.
    pub fn formula(self) -> &'static str {
        match self {
            ClassicalForm::E10 | ClassicalForm::E28 => "(pi/2q)^s sum_{p=1}^{q} cot^s(p pi/(2q+1))",
            ClassicalForm::E12 => "(pi/2q)^(2n+1) sum_{p=1}^{q} cot^(2n+1)(p pi/(2q+1))",
            ClassicalForm::E11 | ClassicalForm::E29 => {
                "(pi/(2q+1))^s sum_{p=1}^{q} cot^s(p pi/(2q+1))"
            }
            ClassicalForm::E14 | ClassicalForm::E30 => "(pi/2q)^s sum_{p=1}^{q-1} cot^s(p pi/2q)",
            ClassicalForm::E15 | ClassicalForm::E32 => "(pi/2q)^s sum_{p=1}^{q-1} csc^s(p pi/2q)",
            ClassicalForm::E16 | ClassicalForm::E31 => "(pi/2q)^s sum_{p=1}^{q} csc^s(p pi/(2q+1))",
        }
    }
}

impl fmt::Display for ClassicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for ClassicalForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClassicalForm::ALL
            .into_iter()
            .find(|id| id.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown catalog id `{s}`")))
    }
}

/// The `(kind, m, n)` reproducing a classical formula.
pub fn classical_form(id: ClassicalForm) -> TrigSumSpec {
    use ClassicalForm::*;
    match id {
        E10 | E12 | E28 => TrigSumSpec::cot(0, 1),
        E11 | E29 => TrigSumSpec::cot(1, 1),
        E14 | E30 => TrigSumSpec::cot(0, 0),
        E15 | E32 => TrigSumSpec::csc(0, 0),
        E16 | E31 => TrigSumSpec::csc(0, 1),
    }
}

/// Result of driving the finite sum along a schedule of `q` values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitEstimate {
    pub value: ComplexScalar,
    pub q_final: u64,
    /// `|S(q_last) - S(q_prev)|`; infinite for a one-point schedule.
    pub error_estimate: f64,
    pub converged: bool,
}

/// Evaluates the finite sum at every schedule point and reports the last value.
///
/// `converged` is set when the last two evaluations differ by less than `tol`.
/// Running out of schedule is not an error; the best estimate is returned with
/// `converged = false`.
pub fn zeta_limit_estimate(
    spec: TrigSumSpec,
    s: ComplexScalar,
    schedule: &QSchedule,
    tol: f64,
) -> Result<LimitEstimate> {
    if !(s.re > 1.0) {
        return Err(Error::domain(format!(
            "Re(s) > 1 required, got s = {s}: the dominating series sum p^-s diverges"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let qs = schedule.points_for(&spec)?;

    let mut previous: Option<ComplexScalar> = None;
    let mut error_estimate = f64::INFINITY;
    let mut last = None;
    for &q in &qs {
        let value = finite_trig_sum(spec, q, s)?.value;
        if let Some(prev) = previous {
            error_estimate = (value - prev).norm();
        }
        previous = Some(value);
        last = Some((q, value));
    }
    let (q_final, value) = last.expect("schedule has at least one point");
    Ok(LimitEstimate {
        value,
        q_final,
        error_estimate,
        converged: error_estimate < tol,
    })
}
