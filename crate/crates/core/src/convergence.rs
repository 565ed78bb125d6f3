//! Sweeps of the finite trigonometric sums along a geometric `q` schedule,
//! measured against [`reference_zeta`].

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{reference_zeta, BoundKind, Method, ZetaReference};
use crate::trig::{finite_trig_sum, TrigSumSpec};
use crate::ComplexScalar;

/// Geometric schedule `q_k = q0 * factor^k`, `k = 0..steps`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSchedule {
    q0: u64,
    factor: u64,
    steps: u32,
}

impl Default for QSchedule {
    /// `q = 10, 20, ..., 10240`.
    fn default() -> Self {
        Self {
            q0: 10,
            factor: 2,
            steps: 11,
        }
    }
}

impl QSchedule {
    pub fn new(q0: u64, factor: u64, steps: u32) -> Result<Self> {
        if q0 == 0 {
            return Err(Error::domain("schedule start q0 must be positive"));
        }
        if factor < 2 {
            return Err(Error::domain(format!(
                "schedule factor must be at least 2, got {factor}"
            )));
        }
        if steps == 0 {
            return Err(Error::domain("schedule needs at least one step"));
        }
        let last = factor
            .checked_pow(steps - 1)
            .and_then(|f| f.checked_mul(q0))
            .and_then(|q| q.checked_mul(2));
        if last.is_none() {
            return Err(Error::domain("schedule overflows 64-bit q"));
        }
        Ok(Self { q0, factor, steps })
    }

    pub fn q0(&self) -> u64 {
        self.q0
    }

    pub fn factor(&self) -> u64 {
        self.factor
    }

    pub fn steps(&self) -> u32 {
        self.steps
    }

    /// Strictly increasing list of schedule points.
    pub fn points(&self) -> Vec<u64> {
        std::iter::successors(Some(self.q0), |q| Some(q * self.factor))
            .take(self.steps as usize)
            .collect()
    }

    /// Schedule points after checking every one is admissible for `spec`.
    pub fn points_for(&self, spec: &TrigSumSpec) -> Result<Vec<u64>> {
        if !spec.is_admissible(self.q0) {
            return Err(Error::domain(format!(
                "schedule start q0 = {} is inadmissible for {spec} (need q >= {})",
                self.q0,
                spec.min_q()
            )));
        }
        Ok(self.points())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRecord {
    pub q: u64,
    pub estimate: ComplexScalar,
    pub abs_error: f64,
    pub rel_error: f64,
}

/// Least-squares fit of `log(abs_error) = c - order * log(q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderFit {
    pub order: f64,
    /// Root-mean-square residual of the fit in natural-log units.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceSeries {
    pub spec: TrigSumSpec,
    pub s: ComplexScalar,
    pub reference: ZetaReference,
    /// Sorted by `q`.
    pub records: Vec<ConvergenceRecord>,
    pub fit: Option<OrderFit>,
}

impl ConvergenceSeries {
    /// Builds a series from estimates, measuring each against `reference`.
    pub fn from_estimates(
        spec: TrigSumSpec,
        s: ComplexScalar,
        reference: ZetaReference,
        estimates: impl IntoIterator<Item = (u64, ComplexScalar)>,
    ) -> Self {
        let scale = reference.value.norm();
        let mut records: Vec<ConvergenceRecord> = estimates
            .into_iter()
            .map(|(q, estimate)| {
                let abs_error = (estimate - reference.value).norm();
                ConvergenceRecord {
                    q,
                    estimate,
                    abs_error,
                    rel_error: abs_error / scale,
                }
            })
            .collect();
        records.sort_by_key(|r| r.q);
        let mut series = Self {
            spec,
            s,
            reference,
            records,
            fit: None,
        };
        series.fit = empirical_order(&series).ok();
        series
    }

    /// `true` when every step strictly reduces the absolute error.
    pub fn errors_strictly_decreasing(&self) -> bool {
        self.records
            .windows(2)
            .all(|w| w[1].abs_error < w[0].abs_error)
    }

    pub fn last(&self) -> Option<&ConvergenceRecord> {
        self.records.last()
    }

    /// One row per record, header `q,re_estimate,im_estimate,abs_error,rel_error`,
    /// floats with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER).expect("in-memory write");
        for r in &self.records {
            w.write_record([
                r.q.to_string(),
                fmt17(r.estimate.re),
                fmt17(r.estimate.im),
                fmt17(r.abs_error),
                fmt17(r.rel_error),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
    }

    pub fn to_json(&self) -> String {
        let doc = SeriesDoc::from(self);
        let mut out = serde_json::to_string_pretty(&doc).expect("finite series serialises");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SeriesDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("series JSON: {e}")))?;
        Ok(doc.into())
    }

    /// Plain-text table for terminals.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "spec      {}", self.spec);
        let _ = writeln!(out, "s         {}", fmt_complex(self.s));
        let _ = writeln!(
            out,
            "reference {} ({}, bound {:.3e}, {})",
            fmt_complex(self.reference.value),
            self.reference.method,
            self.reference.error_bound,
            self.reference.bound_kind
        );
        let _ = writeln!(
            out,
            "{:>12}  {:>24}  {:>24}  {:>12}  {:>12}",
            "q", "re_estimate", "im_estimate", "abs_error", "rel_error"
        );
        for r in &self.records {
            let _ = writeln!(
                out,
                "{:>12}  {:>24.17}  {:>24.17}  {:>12.4e}  {:>12.4e}",
                r.q, r.estimate.re, r.estimate.im, r.abs_error, r.rel_error
            );
        }
        match self.fit {
            Some(fit) => {
                let _ = writeln!(
                    out,
                    "empirical order {:.6} (fit residual {:.3e}; measured, not a proven rate)",
                    fit.order, fit.residual
                );
            }
            None => {
                let _ = writeln!(
                    out,
                    "empirical order unavailable (fewer than 4 usable records)"
                );
            }
        }
        out
    }
}

pub const CSV_HEADER: [&str; 5] = ["q", "re_estimate", "im_estimate", "abs_error", "rel_error"];

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

pub(crate) fn fmt_complex(z: ComplexScalar) -> String {
    if z.im < 0.0 {
        format!("{:.17}-{:.17}i", z.re, -z.im)
    } else {
        format!("{:.17}+{:.17}i", z.re, z.im)
    }
}

/// Parses the CSV emitted by [`ConvergenceSeries::to_csv`].
pub fn parse_csv_records(text: &str) -> Result<Vec<ConvergenceRecord>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Parse(format!("csv header: {e}")))?;
    if headers.iter().ne(CSV_HEADER) {
        return Err(Error::Parse(format!("unexpected csv header {headers:?}")));
    }
    let float = |field: &str| {
        field
            .parse::<f64>()
            .map_err(|e| Error::Parse(format!("bad float `{field}`: {e}")))
    };
    reader
        .records()
        .map(|row| {
            let row = row.map_err(|e| Error::Parse(format!("csv row: {e}")))?;
            if row.len() != CSV_HEADER.len() {
                return Err(Error::Parse(format!(
                    "expected 5 fields, got {}",
                    row.len()
                )));
            }
            Ok(ConvergenceRecord {
                q: row[0]
                    .parse()
                    .map_err(|e| Error::Parse(format!("bad q `{}`: {e}", &row[0])))?,
                estimate: ComplexScalar::new(float(&row[1])?, float(&row[2])?),
                abs_error: float(&row[3])?,
                rel_error: float(&row[4])?,
            })
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
struct ReferenceDoc {
    value_re: f64,
    value_im: f64,
    method: Method,
    error_bound: f64,
    bound_kind: BoundKind,
}

#[derive(Serialize, Deserialize)]
struct RecordDoc {
    q: u64,
    re_estimate: f64,
    im_estimate: f64,
    abs_error: f64,
    rel_error: f64,
}

#[derive(Serialize, Deserialize)]
struct SeriesDoc {
    spec: TrigSumSpec,
    s_re: f64,
    s_im: f64,
    reference: ReferenceDoc,
    fitted_order: Option<f64>,
    fit_residual: Option<f64>,
    records: Vec<RecordDoc>,
}

impl From<&ConvergenceSeries> for SeriesDoc {
    fn from(series: &ConvergenceSeries) -> Self {
        Self {
            spec: series.spec,
            s_re: series.s.re,
            s_im: series.s.im,
            reference: ReferenceDoc {
                value_re: series.reference.value.re,
                value_im: series.reference.value.im,
                method: series.reference.method,
                error_bound: series.reference.error_bound,
                bound_kind: series.reference.bound_kind,
            },
            fitted_order: series.fit.map(|f| f.order),
            fit_residual: series.fit.map(|f| f.residual),
            records: series
                .records
                .iter()
                .map(|r| RecordDoc {
                    q: r.q,
                    re_estimate: r.estimate.re,
                    im_estimate: r.estimate.im,
                    abs_error: r.abs_error,
                    rel_error: r.rel_error,
                })
                .collect(),
        }
    }
}

impl From<SeriesDoc> for ConvergenceSeries {
    fn from(doc: SeriesDoc) -> Self {
        Self {
            spec: doc.spec,
            s: ComplexScalar::new(doc.s_re, doc.s_im),
            reference: ZetaReference {
                value: ComplexScalar::new(doc.reference.value_re, doc.reference.value_im),
                method: doc.reference.method,
                error_bound: doc.reference.error_bound,
                bound_kind: doc.reference.bound_kind,
            },
            records: doc
                .records
                .into_iter()
                .map(|r| ConvergenceRecord {
                    q: r.q,
                    estimate: ComplexScalar::new(r.re_estimate, r.im_estimate),
                    abs_error: r.abs_error,
                    rel_error: r.rel_error,
                })
                .collect(),
            fit: match (doc.fitted_order, doc.fit_residual) {
                (Some(order), Some(residual)) => Some(OrderFit { order, residual }),
                _ => None,
            },
        }
    }
}

/// Evaluates the finite sum at every schedule point against `reference_zeta(s)`.
pub fn run_sweep(
    spec: TrigSumSpec,
    s: ComplexScalar,
    sched: &QSchedule,
) -> Result<ConvergenceSeries> {
    if !(s.re > 1.0) {
        return Err(Error::domain(format!(
            "Re(s) > 1 required for a sweep, got s = {s}"
        )));
    }
    let points = sched.points_for(&spec)?;
    let reference = reference_zeta(s)?;
    let estimates = std::thread::scope(|scope| {
        let handles: Vec<_> = points
            .iter()
            .map(|&q| scope.spawn(move || finite_trig_sum(spec, q, s).map(|e| (q, e.value))))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(ConvergenceSeries::from_estimates(
        spec, s, reference, estimates,
    ))
}

/// Negated least-squares slope of `log(abs_error)` against `log(q)`.
///
/// Records with zero or non-finite error are skipped; at least four usable
/// records are required.
pub fn empirical_order(series: &ConvergenceSeries) -> Result<OrderFit> {
    let points: Vec<(f64, f64)> = series
        .records
        .iter()
        .filter(|r| r.abs_error > 0.0 && r.abs_error.is_finite() && r.q > 0)
        .map(|r| ((r.q as f64).ln(), r.abs_error.ln()))
        .collect();
    if points.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "order fit needs at least 4 records with nonzero error, have {}",
            points.len()
        )));
    }
    let count = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / count;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / count;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let sse: f64 = points
        .iter()
        .map(|p| (p.1 - (intercept + slope * p.0)).powi(2))
        .sum();
    Ok(OrderFit {
        order: -slope,
        residual: (sse / count).sqrt(),
    })
}

/// One Richardson step on the last two records:
/// `(r^order E(rq) - E(q)) / (r^order - 1)` with `r = q_last / q_prev`.
pub fn richardson_accelerate(series: &ConvergenceSeries, order: f64) -> Result<ComplexScalar> {
    if !(order > 0.0) || !order.is_finite() {
        return Err(Error::domain(format!(
            "order must be positive and finite, got {order}"
        )));
    }
    let [.., coarse, fine] = series.records.as_slice() else {
        return Err(Error::InsufficientData(format!(
            "Richardson step needs 2 records, have {}",
            series.records.len()
        )));
    };
    let ratio = fine.q as f64 / coarse.q as f64;
    let weight = ratio.powf(order);
    Ok((fine.estimate * weight - coarse.estimate) / (weight - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trig::TrigSumSpec;

    fn synthetic(errors: impl Fn(f64) -> f64) -> ConvergenceSeries {
        let reference = ZetaReference {
            value: ComplexScalar::new(1.5, 0.0),
            method: Method::Bernoulli,
            error_bound: 0.0,
            bound_kind: BoundKind::Rigorous,
        };
        let estimates = (0..8).map(|k| {
            let q = 10u64 << k;
            (q, ComplexScalar::new(1.5 + errors(q as f64), 0.0))
        });
        ConvergenceSeries::from_estimates(
            TrigSumSpec::cot(0, 1),
            ComplexScalar::new(2.0, 0.0),
            reference,
            estimates,
        )
    }

    #[test]
    fn schedule_points() {
        assert_eq!(QSchedule::default().points().last(), Some(&10_240));
        assert_eq!(QSchedule::default().points().len(), 11);
        assert_eq!(QSchedule::new(3, 3, 3).unwrap().points(), vec![3, 9, 27]);
        assert!(QSchedule::new(0, 2, 3).is_err());
        assert!(QSchedule::new(1, 1, 3).is_err());
        assert!(QSchedule::new(1, 2, 0).is_err());
        assert!(QSchedule::new(1, 2, 70).is_err());
        let one = QSchedule::new(1, 2, 4).unwrap();
        assert!(one.points_for(&TrigSumSpec::cot(0, 0)).is_err());
        assert!(one.points_for(&TrigSumSpec::cot(0, 1)).is_ok());
    }

    #[test]
    fn order_of_exact_power_laws() {
        let fit = empirical_order(&synthetic(|q| 0.3 / q)).unwrap();
        assert!((fit.order - 1.0).abs() < 1e-6);
        assert!(fit.residual < 1e-6);
        let fit = empirical_order(&synthetic(|q| 7.0 / (q * q))).unwrap();
        assert!((fit.order - 2.0).abs() < 1e-6);
    }

    #[test]
    fn order_needs_four_records() {
        let mut series = synthetic(|q| 1.0 / q);
        series.records.truncate(3);
        assert!(matches!(
            empirical_order(&series),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn richardson_is_exact_for_pure_inverse_q() {
        let series = synthetic(|q| 1.0 / q);
        assert_eq!(
            richardson_accelerate(&series, 1.0).unwrap(),
            ComplexScalar::new(1.5, 0.0)
        );
    }

    #[test]
    fn richardson_argument_checks() {
        let mut series = synthetic(|q| 1.0 / q);
        assert!(matches!(
            richardson_accelerate(&series, 0.0),
            Err(Error::Domain(_))
        ));
        series.records.truncate(1);
        assert!(matches!(
            richardson_accelerate(&series, 1.0),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn csv_layout() {
        let csv = synthetic(|q| 1.0 / q).to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next(),
            Some("q,re_estimate,im_estimate,abs_error,rel_error")
        );
        assert_eq!(
            lines.next(),
            Some("10,1.6000000000000001e0,0.0000000000000000e0,1.0000000000000009e-1,6.6666666666666721e-2")
        );
    }

    #[test]
    fn sweep_rejects_pole_side() {
        assert!(matches!(
            run_sweep(
                TrigSumSpec::cot(0, 1),
                ComplexScalar::new(1.0, 0.0),
                &QSchedule::default()
            ),
            Err(Error::Domain(_))
        ));
    }
}
