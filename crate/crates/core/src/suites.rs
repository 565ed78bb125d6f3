//! Fixed verification suites run by `trigzeta verify`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::Result;
use crate::oracle::{
    zeta_dirichlet, zeta_eta, zeta_euler_maclaurin, zeta_euler_product, zeta_even, PrimeCache,
    ZetaReference, REFERENCE_TARGET,
};
use crate::tannery::{
    tannery_exchange, verify_condition_i, verify_condition_ii, ConditionReport, ExpInstance,
    TrigInstance,
};
use crate::trig::{classical_form, finite_trig_sum, ClassicalForm, TrigSumSpec};
use crate::ComplexScalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Bernoulli,
    Cross,
    Tannery,
    Specializations,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::Bernoulli,
        Suite::Cross,
        Suite::Tannery,
        Suite::Specializations,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Bernoulli => "bernoulli",
            Suite::Cross => "cross",
            Suite::Tannery => "tannery",
            Suite::Specializations => "specializations",
        }
    }

    pub fn parse(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
    /// Condition reports, for the tannery suite.
    pub conditions: Vec<ConditionReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "suite {}", self.suite.name());
        for c in &self.checks {
            let _ = writeln!(
                out,
                "  [{}] {}: {}",
                if c.pass { "PASS" } else { "FAIL" },
                c.label,
                c.detail
            );
        }
        for r in &self.conditions {
            out.push_str(&r.to_text());
        }
        let _ = writeln!(
            out,
            "{} of {} checks passed",
            self.checks.iter().filter(|c| c.pass).count(),
            self.checks.len()
        );
        out
    }

    pub fn to_key_values(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "suite={}", self.suite.name());
        let _ = writeln!(out, "pass={}", self.passed());
        for (i, c) in self.checks.iter().enumerate() {
            let _ = writeln!(out, "check.{i}.label={}", c.label);
            let _ = writeln!(out, "check.{i}.pass={}", c.pass);
        }
        for (i, r) in self.conditions.iter().enumerate() {
            for line in r.to_key_values().lines() {
                let _ = writeln!(out, "report.{i}.{line}");
            }
        }
        out
    }
}

pub fn run_suite(suite: Suite, s: Option<ComplexScalar>) -> Result<SuiteReport> {
    match suite {
        Suite::Bernoulli => bernoulli_suite(),
        Suite::Cross => cross_suite(),
        Suite::Tannery => tannery_suite(s),
        Suite::Specializations => specializations_suite(),
    }
}

/// `zeta_even(n)` against the Dirichlet series at `2n`, `n = 1..=5`.
pub fn bernoulli_suite() -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for n in 1..=5u32 {
        let even = zeta_even(n)?;
        let dirichlet = zeta_dirichlet(ComplexScalar::new(f64::from(2 * n), 0.0), 1_000_000)?;
        let gap = (even.value - dirichlet.value).norm();
        checks.push(Check {
            label: format!("zeta({})", 2 * n),
            pass: gap <= dirichlet.error_bound,
            detail: format!(
                "bernoulli {:.17} dirichlet {:.17} gap {gap:.3e} bound {:.3e}",
                even.value.re, dirichlet.value.re, dirichlet.error_bound
            ),
        });
    }
    Ok(SuiteReport {
        suite: Suite::Bernoulli,
        checks,
        conditions: Vec::new(),
    })
}

pub const CROSS_POINTS: [(f64, f64); 6] = [
    (1.5, 0.0),
    (2.0, 0.0),
    (3.0, 0.0),
    (4.0, 0.0),
    (2.5, 1.3),
    (10.0, 0.0),
];

/// Dirichlet, eta, Euler-Maclaurin and Euler product at one point.
pub fn four_oracles(s: ComplexScalar, primes: &PrimeCache) -> Result<[ZetaReference; 4]> {
    let cutoff = ((s.norm() / (s.re * 0.9 * REFERENCE_TARGET))
        .powf(1.0 / s.re)
        .ceil() as u64)
        .max(1_000);
    Ok([
        zeta_dirichlet(s, 1_000_000)?,
        zeta_eta(s, 1_000_000)?,
        zeta_euler_maclaurin(s, 10, cutoff)?,
        zeta_euler_product(s, primes)?,
    ])
}

/// Pairwise agreement of the four `Re(s) > 1` oracles.
pub fn cross_suite() -> Result<SuiteReport> {
    let primes = PrimeCache::new(100_000);
    let mut checks = Vec::new();
    for (re, im) in CROSS_POINTS {
        let s = ComplexScalar::new(re, im);
        let refs = four_oracles(s, &primes)?;
        for i in 0..refs.len() {
            for j in i + 1..refs.len() {
                let (a, b) = (&refs[i], &refs[j]);
                let gap = (a.value - b.value).norm();
                checks.push(Check {
                    label: format!("s={s} {} vs {}", a.method, b.method),
                    pass: a.agrees_with(b),
                    detail: format!(
                        "gap {gap:.3e} allowed {:.3e}",
                        a.error_bound + b.error_bound
                    ),
                });
            }
        }
    }
    Ok(SuiteReport {
        suite: Suite::Cross,
        checks,
        conditions: Vec::new(),
    })
}

/// Both Tannery conditions for the cot and csc instances, plus the exp
/// exchange identity. With `s` given only that value is checked.
pub fn tannery_suite(s: Option<ComplexScalar>) -> Result<SuiteReport> {
    let points: Vec<ComplexScalar> = match s {
        Some(s) => vec![s],
        None => [1.5, 2.0, 3.0].map(|x| ComplexScalar::new(x, 0.0)).to_vec(),
    };
    let schedule = [10, 100, 1_000, 10_000, 100_000];
    let mut checks = Vec::new();
    let mut conditions = Vec::new();
    for s in points {
        for spec in [TrigSumSpec::cot(0, 1), TrigSumSpec::csc(0, 0)] {
            let inst = TrigInstance::new(spec, s)?;
            let report = ConditionReport {
                instance: format!("zeta-{} {spec} s={s}", spec.kind),
                condition_i: Some(verify_condition_i(&inst, 5, &schedule, 1e-3)?),
                condition_ii: Some(verify_condition_ii(&inst, 1_000, 1_000)?),
            };
            checks.push(Check {
                label: report.instance.clone(),
                pass: report.passed(),
                detail: report
                    .failure_reason()
                    .unwrap_or_else(|| "conditions (i) and (ii) hold".into()),
            });
            conditions.push(report);
        }
    }
    if s.is_none() {
        let ex = tannery_exchange(&ExpInstance { x: 1.0 }, &[10_000, 100_000, 1_000_000], 40)?;
        checks.push(Check {
            label: "exp x=1 exchange".into(),
            pass: ex.gap < 1e-5,
            detail: format!(
                "lhs {:.17} rhs {:.17} gap {:.3e}",
                ex.lhs.re, ex.rhs.re, ex.gap
            ),
        });
        let ex0 = tannery_exchange(&ExpInstance { x: 0.0 }, &[10, 1_000], 30)?;
        checks.push(Check {
            label: "exp x=0 exchange".into(),
            pass: ex0.lhs == ex0.rhs,
            detail: format!("lhs {} rhs {}", ex0.lhs.re, ex0.rhs.re),
        });
    }
    Ok(SuiteReport {
        suite: Suite::Tannery,
        checks,
        conditions,
    })
}

/// Literal transcription of each catalogued formula's finite sum:
/// `sum_{p=1}^{upper} (prefactor * f(p pi / angle_den))^s`.
pub fn transcribed_sum(id: ClassicalForm, q: u64, s: ComplexScalar) -> ComplexScalar {
    use ClassicalForm::*;
    let qf = q as f64;
    // (prefactor denominator, angle denominator, upper limit, use csc)
    let (prefactor_den, angle_den, upper, csc) = match id {
        E10 | E12 | E28 => (2.0 * qf, 2.0 * qf + 1.0, q, false),
        E11 | E29 => (2.0 * qf + 1.0, 2.0 * qf + 1.0, q, false),
        E14 | E30 => (2.0 * qf, 2.0 * qf, q - 1, false),
        E15 | E32 => (2.0 * qf, 2.0 * qf, q - 1, true),
        E16 | E31 => (2.0 * qf, 2.0 * qf + 1.0, q, true),
    };
    let mut sum = ComplexScalar::new(0.0, 0.0);
    let mut carry = ComplexScalar::new(0.0, 0.0);
    for p in 1..=upper {
        let x = p as f64 * PI / angle_den;
        let f = if csc {
            1.0 / x.sin()
        } else {
            x.cos() / x.sin()
        };
        let summand = ComplexScalar::new(PI / prefactor_den * f, 0.0).powc(s);
        // Kahan step
        let y = summand - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

pub const SPECIALIZATION_ULPS: f64 = 4.0;

/// Each catalogue entry against its literal transcription.
pub fn specializations_suite() -> Result<SuiteReport> {
    let points = [
        ComplexScalar::new(2.0, 0.0),
        ComplexScalar::new(3.0, 0.0),
        ComplexScalar::new(2.5, 1.3),
    ];
    let mut checks = Vec::new();
    for id in ClassicalForm::ALL {
        let spec = classical_form(id);
        for q in [5u64, 50, 100] {
            for s in points {
                let ours = finite_trig_sum(spec, q, s)?.value;
                let literal = transcribed_sum(id, q, s);
                let ulps = crate::numeric::ulps_of_magnitude(ours, literal);
                checks.push(Check {
                    label: format!("{id} q={q} s={s}"),
                    pass: ulps <= SPECIALIZATION_ULPS,
                    detail: format!("{ulps:.2} ulps"),
                });
            }
        }
    }
    Ok(SuiteReport {
        suite: Suite::Specializations,
        checks,
        conditions: Vec::new(),
    })
}
