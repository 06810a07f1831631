//! Crate-wide error type.
//!
//! Variants are grouped by the failure class they report. `Domain` covers
//! parameter/precondition violations, the numeric variants cover quadrature
//! and truncation budgets, and the certificate variants cover self-check
//! failures that invalidate a would-be result. The CLI maps these classes
//! onto its exit codes.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Parameter outside its documented domain, or an operation
    /// precondition that the inputs fail to meet.
    #[error("domain: {0}")]
    Domain(String),

    /// Series truncation could not reach the requested tolerance within
    /// the term budget.
    #[error("truncation budget exceeded: {0}")]
    TruncationBudget(String),

    /// Adaptive quadrature failed to converge to the requested tolerance.
    #[error("quadrature non-convergence: {0}")]
    QuadratureNonconvergence(String),

    /// A point left the validated accuracy envelope of an evaluator.
    #[error("accuracy envelope exceeded: {0}")]
    AccuracyEnvelope(String),

    /// Two independent computation routes disagree beyond combined error.
    #[error("cross-check failure: {0}")]
    CrossCheck(String),

    /// A zero (or pole) sits on or too close to an integration contour.
    #[error("zero on contour: {0}")]
    ZeroOnContour(String),

    /// Winding-number quadrature did not land near an integer.
    #[error("non-integral winding: residual {residual:.3e} at r = {r}")]
    NonintegralWinding { residual: f64, r: f64 },

    /// The linear-program solver reported an infeasible or unbounded
    /// subproblem where that should be impossible.
    #[error("solver failure: {0}")]
    Solver(String),

    /// Certification shrank a candidate bound by more than the declared
    /// slack, so no trustworthy value can be reported.
    #[error("certification collapse: raw {raw:.6} vs certified {certified:.6}")]
    CertificationCollapse { raw: f64, certified: f64 },

    /// A certificate recomputation disagreed with the stored value.
    #[error("certificate mismatch: {0}")]
    CertificateMismatch(String),

    /// An exact kernel came back trivial where exact arithmetic guarantees
    /// a nonzero vector.
    #[error("rank-deficiency anomaly: {0}")]
    RankDeficiency(String),

    /// A scan over a grid or window found no admissible point.
    #[error("scan failure: {0}")]
    ScanFailure(String),

    /// The supplied profile or sample range does not cover what the
    /// operation needs.
    #[error("insufficient range: {0}")]
    InsufficientRange(String),

    /// Enumeration box or partition budget exceeded.
    #[error("enumeration budget exceeded: {0}")]
    EnumerationBudget(String),

    /// Exhaustive or lattice search ended with no solution inside the bound.
    #[error("no solution within bound: {0}")]
    NoSolutionWithinBound(String),

    /// Instance too large for the exact enumeration path.
    #[error("instance too large: {0}")]
    InstanceTooLarge(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Exit-code class used by the CLI: 3 domain, 4 numeric, 5 certificate.
    pub fn exit_class(&self) -> i32 {
        use Error::*;
        match self {
            Domain(_) | InsufficientRange(_) | InstanceTooLarge(_) => 3,
            TruncationBudget(_) | QuadratureNonconvergence(_) | AccuracyEnvelope(_)
            | ZeroOnContour(_) | NonintegralWinding { .. } | Solver(_) | ScanFailure(_)
            | EnumerationBudget(_) | NoSolutionWithinBound(_) | Io(_) | Json(_) => 4,
            CrossCheck(_) | CertificationCollapse { .. } | CertificateMismatch(_)
            | RankDeficiency(_) => 5,
        }
    }
}
