//! Riemann's zeta function for `Re(s) > 1` as the `q -> infinity` limit of
//! finite cotangent and cosecant power sums, together with the classical
//! reference evaluations used to cross-check them and a numerical harness
//! for Tannery's limit-interchange theorem.
//!
//! The crate is organised as:
//!
//! * [`trig`]: the finite sums `(pi/(2q+m))^s * sum cot^s(p pi/(2q+n))` (and the
//!   `csc` analogue), their admissibility rules, the catalogue of classical
//!   special cases and the schedule-driven limit estimator.
//! * [`oracle`]: Dirichlet, eta, Euler-Maclaurin, Euler product, Bernoulli and
//!   Laurent/Stieltjes evaluations of zeta.
//! * [`tannery`]: double sequences with per-index limits and dominating bounds,
//!   and checks of both hypotheses of Tannery's theorem.
//! * [`convergence`]: q-sweeps against a reference, order fitting, one-step
//!   Richardson extrapolation, CSV/JSON emission.
//! * [`cli`]: the `trigzeta` command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod convergence;
pub mod error;
pub mod numeric;
pub mod oracle;
pub mod suites;
pub mod tannery;
pub mod trig;

/// A complex number; the type of `s` and of every zeta value in this crate.
pub type ComplexScalar = num_complex::Complex64;

pub use convergence::{
    empirical_order, richardson_accelerate, run_sweep, ConvergenceRecord, ConvergenceSeries,
    OrderFit, QSchedule,
};
pub use error::{Error, Result};
pub use oracle::{
    bernoulli_numbers, reference_zeta, stieltjes, zeta_dirichlet, zeta_eta, zeta_euler_maclaurin,
    zeta_euler_product, zeta_even, zeta_laurent, BernoulliTable, BoundKind, Method, PrimeCache,
    StieltjesTable, ZetaReference,
};
pub use trig::{
    classical_form, finite_trig_sum, term, upper_index, zeta_limit_estimate, ClassicalForm,
    LimitEstimate, SumEvaluation, TrigKind, TrigSumSpec,
};
