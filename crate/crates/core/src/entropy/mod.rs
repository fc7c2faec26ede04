//! Conditional min- and max-entropies, exact and smoothed.
//!
//! Smoothing uses the purified-distance ball of subnormalized states.
//! Max-entropies are obtained from min-entropies of a purification,
//! `H_max^ε(A|B)_ρ = −H_min^ε(A|C)_ψ`; for `ε = 0` an independent fidelity
//! program is also available ([`EntropyQuery::h_max_direct`]).

mod aep;
mod harness;
mod program;
mod symmetry;

pub use aep::{aep_bounds, h_max_smooth_power, h_min_smooth_power, AepBounds};
pub use harness::{
    orbit_mixture, random_instance_report, run_harness, verify_inequality, write_reports_csv, InequalityReport,
    LemmaInstance, Params, Rule, CHECK_TOL,
};

use crate::linalg::ComplexMatrix;
use crate::state::{self, DensityOperator};
use crate::Error;
use program::Reduced;

/// Which conditional entropy to evaluate on a subsystem split of a state.
#[derive(Clone, Debug)]
pub struct EntropyQuery {
    rho_ab: ComplexMatrix,
    d_a: usize,
    d_b: usize,
    pub eps: f64,
}

impl EntropyQuery {
    /// Entropy of subsystems `a` conditioned on `b`; all other subsystems are
    /// traced out. `b` may be empty.
    pub fn new(rho: &DensityOperator, a: &[usize], b: &[usize], eps: f64) -> Result<Self, Error> {
        if a.is_empty() {
            return Err(Error::Subsystem("the conditioned system A is empty".into()));
        }
        if !(0.0..1.0).contains(&eps) {
            return Err(Error::Domain(format!("smoothing parameter {eps} outside [0, 1)")));
        }
        let keep: Vec<usize> = a.iter().chain(b).copied().collect();
        let m = rho.marginal(&keep)?;
        let d_a = a.iter().map(|&k| rho.dims()[k]).product();
        let d_b = b.iter().map(|&k| rho.dims()[k]).product();
        Ok(EntropyQuery { rho_ab: m.into_matrix(), d_a, d_b, eps })
    }

    /// Bipartite query on a state whose dims are `[d_a, d_b]`.
    pub fn bipartite(rho: &DensityOperator, eps: f64) -> Result<Self, Error> {
        match rho.dims() {
            [_, _] => Self::new(rho, &[0], &[1], eps),
            [_] => Self::new(rho, &[0], &[], eps),
            d => Err(Error::Subsystem(format!("expected a bipartite state, dims {d:?}"))),
        }
    }

    pub fn with_eps(&self, eps: f64) -> Result<Self, Error> {
        if !(0.0..1.0).contains(&eps) {
            return Err(Error::Domain(format!("smoothing parameter {eps} outside [0, 1)")));
        }
        Ok(EntropyQuery { eps, ..self.clone() })
    }

    fn state(&self) -> DensityOperator {
        DensityOperator::from_parts(self.rho_ab.clone(), vec![self.d_a, self.d_b])
    }

    /// `ψ_AC` of a purification of `ρ_AB`, as a bipartite query.
    fn complement(&self) -> EntropyQuery {
        let psi = state::purification(&self.state());
        let ac = psi.marginal(&[0, 2]).expect("purification has three factors");
        let d_c = ac.dims()[1];
        EntropyQuery { rho_ab: ac.into_matrix(), d_a: self.d_a, d_b: d_c, eps: self.eps }
    }

    fn reduced(&self) -> Reduced {
        Reduced::plain(&self.rho_ab, self.d_a, self.d_b)
    }

    /// Unsmoothed `H_min(A|B)` (ignores `eps`).
    pub fn h_min(&self) -> Result<f64, Error> {
        Ok(-program::min_entropy_value(&self.reduced())?.log2())
    }

    /// Unsmoothed `H_max(A|B)` through the purification (ignores `eps`).
    pub fn h_max(&self) -> Result<f64, Error> {
        Ok(-self.complement().h_min()?)
    }

    /// Unsmoothed `H_max(A|B) = max_σ log F(ρ, 1 ⊗ σ)²` by a fidelity program.
    pub fn h_max_direct(&self) -> Result<f64, Error> {
        Ok(2.0 * program::max_fidelity_value(&self.reduced())?.log2())
    }

    pub fn h_min_smooth(&self) -> Result<f64, Error> {
        if self.eps == 0.0 {
            return self.h_min();
        }
        Ok(-program::smooth_min_entropy_value(&self.reduced(), self.eps)?.log2())
    }

    pub fn h_max_smooth(&self) -> Result<f64, Error> {
        Ok(-self.complement().h_min_smooth()?)
    }
}

/// `H_min^ε(A|B)` with `A`, `B` given as subsystem index lists.
pub fn h_min_smooth(rho: &DensityOperator, a: &[usize], b: &[usize], eps: f64) -> Result<f64, Error> {
    EntropyQuery::new(rho, a, b, eps)?.h_min_smooth()
}

/// `H_max^ε(A|B)` with `A`, `B` given as subsystem index lists.
pub fn h_max_smooth(rho: &DensityOperator, a: &[usize], b: &[usize], eps: f64) -> Result<f64, Error> {
    EntropyQuery::new(rho, a, b, eps)?.h_max_smooth()
}

pub fn h_min(rho: &DensityOperator, a: &[usize], b: &[usize]) -> Result<f64, Error> {
    EntropyQuery::new(rho, a, b, 0.0)?.h_min()
}

pub fn h_max(rho: &DensityOperator, a: &[usize], b: &[usize]) -> Result<f64, Error> {
    EntropyQuery::new(rho, a, b, 0.0)?.h_max()
}
