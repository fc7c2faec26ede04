//! Dense semidefinite programming for small problems.
//!
//! Problems are stated over complex Hermitian, real symmetric and
//! nonnegative-vector blocks (see [`SdpProblem`]) and solved by a
//! homogeneous self-dual interior point method. Hermitian blocks are handled
//! through their real symmetric embedding so the numerical core works in
//! real arithmetic only.
//!
//! The primal is `min Σ tr(C_k X_k)` subject to `Σ tr(A_ik X_k) = b_i`,
//! `X_k ⪰ 0`; the dual is `max bᵀy` subject to `S_k = C_k − Σ y_i A_ik ⪰ 0`.

mod problem;
mod real;
mod solver;
mod verify;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub use problem::{BlockId, BlockKind, Constraint, LinearForm, SdpProblem};
pub use verify::{verify_solution, Verification};

#[derive(Debug, thiserror::Error)]
pub enum SdpError {
    #[error("malformed problem: {0}")]
    Malformed(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

/// Stopping tolerances.
#[derive(Clone, Debug)]
pub struct Tolerances {
    /// Relative duality gap `|p − d| / (1 + (|p| + |d|)/2)`.
    pub gap: f64,
    /// Relative primal and dual residual norms.
    pub feasibility: f64,
    /// Residual-to-objective ratio accepted for a Farkas ray.
    pub infeasibility: f64,
    pub max_iterations: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { gap: 1e-8, feasibility: 1e-8, infeasibility: 1e-8, max_iterations: 200 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdpStatus {
    Optimal,
    /// The dual carries a ray `y` with `bᵀy = 1` and `−Σ y_i A_i ⪰ 0`.
    PrimalInfeasible,
    /// The primal carries a ray `X ⪰ 0` with `A(X) = 0` and `tr(CX) = −1`.
    DualInfeasible,
    NumericalFailure,
}

/// Value of one block in a solution.
#[derive(Clone, Debug)]
pub enum BlockValue {
    Hermitian(DMatrix<Complex64>),
    Symmetric(DMatrix<f64>),
    Nonneg(DVector<f64>),
}

impl BlockValue {
    pub fn hermitian(&self) -> Option<&DMatrix<Complex64>> {
        match self {
            BlockValue::Hermitian(m) => Some(m),
            _ => None,
        }
    }

    pub fn symmetric(&self) -> Option<&DMatrix<f64>> {
        match self {
            BlockValue::Symmetric(m) => Some(m),
            _ => None,
        }
    }

    pub fn nonneg(&self) -> Option<&DVector<f64>> {
        match self {
            BlockValue::Nonneg(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SdpSolution {
    pub status: SdpStatus,
    pub primal_value: f64,
    pub dual_value: f64,
    /// Primal blocks (or the dual-infeasibility ray).
    pub primal: Vec<BlockValue>,
    /// Dual slack blocks `S_k` (or the slack of the primal-infeasibility ray).
    pub dual_slack: Vec<BlockValue>,
    /// Dual multipliers `y` (or the primal-infeasibility ray).
    pub dual: DVector<f64>,
    pub gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
}

impl SdpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == SdpStatus::Optimal
    }

    /// Midpoint of primal and dual values.
    pub fn value(&self) -> f64 {
        0.5 * (self.primal_value + self.dual_value)
    }

    pub fn block(&self, id: BlockId) -> &BlockValue {
        &self.primal[id.0]
    }
}

/// Solves `problem`. Malformed problems are rejected before any iteration;
/// non-convergence is reported through [`SdpStatus::NumericalFailure`] with the
/// best iterate attached.
pub fn solve(problem: &SdpProblem, tol: &Tolerances) -> Result<SdpSolution, SdpError> {
    solver::solve(problem, tol)
}

/// Outcome of a pure feasibility problem.
#[derive(Clone, Debug)]
pub enum Feasibility {
    Feasible(Vec<BlockValue>),
    /// Farkas ray `y` with `bᵀy = 1` and `−Σ y_i A_i ⪰ 0`.
    Infeasible(DVector<f64>),
}

/// Decides feasibility of the constraint system, ignoring any objective.
pub fn check_feasibility(problem: &SdpProblem, tol: &Tolerances) -> Result<Feasibility, SdpError> {
    let mut p = problem.clone();
    p.set_objective(LinearForm::new());
    let sol = solve(&p, tol)?;
    match sol.status {
        SdpStatus::Optimal => Ok(Feasibility::Feasible(sol.primal)),
        SdpStatus::PrimalInfeasible => Ok(Feasibility::Infeasible(sol.dual)),
        SdpStatus::DualInfeasible => {
            Err(SdpError::Numerical("zero objective reported unbounded".into()))
        }
        SdpStatus::NumericalFailure => Err(SdpError::Numerical(format!(
            "no convergence after {} iterations (primal residual {:.2e}, gap {:.2e})",
            sol.iterations, sol.primal_residual, sol.gap
        ))),
    }
}
