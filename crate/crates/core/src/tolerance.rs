use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by every computation in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Eigenvalues at or below this are treated as kernel (absolute, unit-trace scale).
    pub rank: f64,
    /// Slack on the pass side of every criterion threshold.
    pub criterion: f64,
    /// Relative Hermiticity slack, scaled by the largest entry magnitude.
    pub hermiticity: f64,
    /// Trace and positivity slack when validating a density operator.
    pub state: f64,
    /// Residual allowed when checking that the kernel of the conditioning operator annihilates the state.
    pub support: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank: 1e-10,
            criterion: 1e-9,
            hermiticity: 1e-10,
            state: 1e-9,
            support: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn with_criterion(mut self, tol: f64) -> Self {
        self.criterion = tol;
        self
    }

    pub fn with_rank(mut self, tol: f64) -> Self {
        self.rank = tol;
        self
    }
}
