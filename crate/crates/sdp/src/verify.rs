//! Re-checks a reported solution directly on the Hermitian data, without
//! going through the real embedding or any solver state.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::problem::{BlockKind, LinearForm, SdpProblem};
use crate::{BlockValue, SdpSolution};

#[derive(Clone, Debug)]
pub struct Verification {
    /// `max_i |Σ tr(A_ik X_k) − b_i|`.
    pub primal_residual: f64,
    /// Smallest eigenvalue over all primal blocks.
    pub primal_min_eig: f64,
    /// Smallest eigenvalue over the recomputed dual slacks `C − Σ y_i A_i`.
    pub dual_min_eig: f64,
    pub primal_value: f64,
    pub dual_value: f64,
}

impl Verification {
    pub fn feasible_within(&self, tol: f64) -> bool {
        self.primal_residual <= tol && self.primal_min_eig >= -tol && self.dual_min_eig >= -tol
    }
}

fn eval_form(form: &LinearForm, x: &[BlockValue]) -> f64 {
    let mut acc = 0.0;
    for (b, r, c, v) in form.entries() {
        match &x[b.0] {
            BlockValue::Hermitian(m) => {
                if r == c {
                    acc += v.re * m[(r, r)].re;
                } else {
                    // A_rc X_cr + A_cr X_rc
                    acc += 2.0 * (v * m[(c, r)]).re;
                }
            }
            BlockValue::Symmetric(m) => {
                acc += if r == c { v.re * m[(r, r)] } else { 2.0 * v.re * m[(r, c)] };
            }
            BlockValue::Nonneg(d) => acc += v.re * d[r],
        }
    }
    acc
}

fn accumulate(form: &LinearForm, w: f64, out: &mut [DMatrix<Complex64>]) {
    for (b, r, c, v) in form.entries() {
        out[b.0][(r, c)] += v * w;
        if r != c {
            out[b.0][(c, r)] += v.conj() * w;
        }
    }
}

fn min_eig(kind: BlockKind, m: &DMatrix<Complex64>) -> f64 {
    match kind {
        BlockKind::Nonneg(_) => m.diagonal().iter().map(|z| z.re).fold(f64::INFINITY, f64::min),
        _ => {
            let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
            h.symmetric_eigenvalues().min()
        }
    }
}

fn as_complex(v: &BlockValue) -> DMatrix<Complex64> {
    match v {
        BlockValue::Hermitian(m) => m.clone(),
        BlockValue::Symmetric(m) => m.map(|x| Complex64::new(x, 0.0)),
        BlockValue::Nonneg(d) => DMatrix::from_diagonal(&d.map(|x| Complex64::new(x, 0.0))),
    }
}

/// Independent check of an (optimal) solution.
pub fn verify_solution(problem: &SdpProblem, sol: &SdpSolution) -> Verification {
    let primal_residual = problem
        .constraints()
        .iter()
        .map(|c| (eval_form(&c.form, &sol.primal) - c.rhs).abs())
        .fold(0.0, f64::max);
    let primal_min_eig = problem
        .blocks()
        .iter()
        .zip(&sol.primal)
        .map(|(k, v)| min_eig(*k, &as_complex(v)))
        .fold(f64::INFINITY, f64::min);
    let mut slack: Vec<DMatrix<Complex64>> =
        problem.blocks().iter().map(|k| DMatrix::zeros(k.dim(), k.dim())).collect();
    accumulate(&problem.objective, 1.0, &mut slack);
    for (i, c) in problem.constraints().iter().enumerate() {
        accumulate(&c.form, -sol.dual[i], &mut slack);
    }
    let dual_min_eig = problem
        .blocks()
        .iter()
        .zip(&slack)
        .map(|(k, m)| min_eig(*k, m))
        .fold(f64::INFINITY, f64::min);
    let primal_value = eval_form(&problem.objective, &sol.primal);
    let dual_value =
        problem.constraints().iter().enumerate().map(|(i, c)| c.rhs * sol.dual[i]).sum();
    Verification { primal_residual, primal_min_eig, dual_min_eig, primal_value, dual_value }
}
