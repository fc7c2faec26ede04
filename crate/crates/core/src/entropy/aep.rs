//! Finite-n equipartition bounds and exact smooth entropies of small tensor
//! powers.

use super::program::{self, Reduced};
use super::EntropyQuery;
use crate::linalg;
use crate::state::{self, DensityOperator, RANK_CUTOFF};
use crate::Error;

#[derive(Clone, Copy, Debug)]
pub struct AepBounds {
    /// Lower bound on `H_min^ε(A^n|B^n)`.
    pub min_lower: f64,
    /// Upper bound on `H_max^ε(A^n|B^n)`.
    pub max_upper: f64,
    pub conditional_entropy: f64,
    pub mu_b: f64,
    pub mu_c: f64,
}

/// `log ‖X⁻¹‖` with the inverse taken on the support.
fn log_inverse_norm(m: &linalg::ComplexMatrix) -> f64 {
    let vals = linalg::eigvalsh(m);
    let top = vals.last().copied().unwrap_or(0.0);
    let smallest = vals.into_iter().filter(|&x| x > RANK_CUTOFF * top.max(f64::MIN_POSITIVE)).fold(f64::INFINITY, f64::min);
    if smallest.is_finite() {
        (1.0 / smallest).log2()
    } else {
        0.0
    }
}

/// `n S(A|B) ∓ (μ_B + μ_C) √(n ln(2/ε))` for a bipartite state `ρ_AB`.
pub fn aep_bounds(rho: &DensityOperator, n: usize, eps: f64) -> Result<AepBounds, Error> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("AEP needs 0 < ε < 1, got {eps}")));
    }
    if rho.dims().len() != 2 {
        return Err(Error::Subsystem(format!("expected a bipartite state, dims {:?}", rho.dims())));
    }
    let s = state::conditional_entropy(rho, &[0], &[1])?;
    let mu_b = log_inverse_norm(rho.partial_trace(&[1])?.matrix());
    // ψ_C has the nonzero spectrum of ρ_AB.
    let mu_c = log_inverse_norm(rho.matrix());
    let nf = n as f64;
    let pen = (mu_b + mu_c) * (nf * (2.0 / eps).ln()).sqrt();
    Ok(AepBounds { min_lower: nf * s - pen, max_upper: nf * s + pen, conditional_entropy: s, mu_b, mu_c })
}

fn bipartite_dims(rho: &DensityOperator) -> Result<(usize, usize), Error> {
    match rho.dims() {
        &[a, b] => Ok((a, b)),
        d => Err(Error::Subsystem(format!("expected a bipartite state, dims {d:?}"))),
    }
}

/// Exact `H_min^ε(A^n|B^n)` of `ρ^{⊗n}`, `n ≤ 3`, using permutation symmetry.
pub fn h_min_smooth_power(rho: &DensityOperator, n: usize, eps: f64) -> Result<f64, Error> {
    let (d_a, d_b) = bipartite_dims(rho)?;
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::Domain(format!("smoothing parameter {eps} outside [0, 1)")));
    }
    let red = Reduced::tensor_power(rho.matrix(), d_a, d_b, n)?;
    let v = if eps == 0.0 { program::min_entropy_value(&red)? } else { program::smooth_min_entropy_value(&red, eps)? };
    Ok(-v.log2())
}

/// Exact `H_max^ε(A^n|B^n) = −H_min^ε(A^n|C^n)` of the purification's tensor power.
pub fn h_max_smooth_power(rho: &DensityOperator, n: usize, eps: f64) -> Result<f64, Error> {
    bipartite_dims(rho)?;
    if n == 1 {
        return EntropyQuery::bipartite(rho, eps)?.h_max_smooth();
    }
    let ac = state::purification(rho).marginal(&[0, 2])?;
    Ok(-h_min_smooth_power(&ac, n, eps)?)
}
