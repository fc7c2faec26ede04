//! Density operators and the functions of states used throughout the crate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{self, c, ComplexMatrix};
use crate::Error;

/// Hermiticity and trace tolerance for validation.
pub const STATE_TOL: f64 = 1e-8;
/// Eigenvalues in `[-PSD_CLIP, 0)` are treated as zero.
pub const PSD_CLIP: f64 = 1e-10;

/// Positive semidefinite operator with trace at most one, on a product of
/// subsystems with the given dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
}

impl DensityOperator {
    /// Validates and wraps `matrix`. Slightly negative eigenvalues (down to
    /// `-1e-10`) are clipped to zero; anything more negative is rejected.
    pub fn new(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self, Error> {
        let d: usize = dims.iter().product();
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::Dimension(format!("bad subsystem dimensions {dims:?}")));
        }
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::Dimension(format!(
                "matrix is {}x{} but dims {dims:?} multiply to {d}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        let defect = linalg::hermiticity_defect(&matrix);
        if defect > STATE_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (defect {defect:.3e})")));
        }
        let tr = linalg::trace(&matrix);
        if tr > 1.0 + STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} exceeds one")));
        }
        let (vals, vecs) = linalg::eigh(&matrix);
        let min = vals.first().copied().unwrap_or(0.0);
        if min < -PSD_CLIP {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        let matrix = if min < 0.0 {
            let clipped: Vec<f64> = vals.iter().map(|&x| x.max(0.0)).collect();
            let s = DMatrix::from_fn(d, d, |r, k| vecs[(r, k)] * c(clipped[k]));
            s * vecs.adjoint()
        } else {
            linalg::hermitian_part(&matrix)
        };
        Ok(DensityOperator { matrix, dims })
    }

    /// Wraps a matrix known to be a valid state (results of internal
    /// computations); only the Hermitian part is kept.
    pub(crate) fn from_parts(matrix: ComplexMatrix, dims: Vec<usize>) -> Self {
        debug_assert_eq!(matrix.nrows(), dims.iter().product::<usize>());
        DensityOperator { matrix: linalg::hermitian_part(&matrix), dims }
    }

    pub fn from_pure(psi: &DVector<Complex64>, dims: Vec<usize>) -> Result<Self, Error> {
        Self::new(linalg::projector(psi), dims)
    }

    /// Diagonal (classical) state.
    pub fn diagonal(p: &[f64], dims: Vec<usize>) -> Result<Self, Error> {
        Self::new(linalg::diag(p), dims)
    }

    pub fn maximally_mixed(d: usize) -> Self {
        DensityOperator { matrix: linalg::identity(d) * c(1.0 / d as f64), dims: vec![d] }
    }

    /// `(|00⟩ + … + |d-1,d-1⟩)/√d` on two `d`-dimensional systems.
    pub fn maximally_entangled(d: usize) -> Self {
        let mut psi = DVector::zeros(d * d);
        for i in 0..d {
            psi[i * d + i] = c(1.0 / (d as f64).sqrt());
        }
        DensityOperator { matrix: linalg::projector(&psi), dims: vec![d, d] }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(&self.matrix)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvalsh(&self.matrix)
    }

    pub fn rank(&self, cutoff: f64) -> usize {
        self.eigenvalues().iter().filter(|&&x| x > cutoff).count()
    }

    /// Same matrix with a different factorization of the dimension.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self, Error> {
        if dims.iter().product::<usize>() != self.dim() || dims.contains(&0) {
            return Err(Error::Dimension(format!("dims {dims:?} do not factor {}", self.dim())));
        }
        Ok(DensityOperator { matrix: self.matrix.clone(), dims })
    }

    pub fn tensor(&self, other: &DensityOperator) -> DensityOperator {
        let mut dims = self.dims.clone();
        dims.extend(&other.dims);
        DensityOperator { matrix: linalg::kron(&self.matrix, &other.matrix), dims }
    }

    pub fn tensor_power(&self, n: usize) -> DensityOperator {
        let mut out = self.clone();
        for _ in 1..n {
            out = out.tensor(self);
        }
        out
    }

    pub fn scale(&self, w: f64) -> DensityOperator {
        DensityOperator { matrix: &self.matrix * c(w), dims: self.dims.clone() }
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOperator, Error> {
        let m = linalg::partial_trace(&self.matrix, &self.dims, keep)?;
        let mut k = keep.to_vec();
        k.sort_unstable();
        Ok(DensityOperator { matrix: m, dims: k.iter().map(|&i| self.dims[i]).collect() })
    }

    /// Output subsystem `k` is input subsystem `order[k]`.
    pub fn permute(&self, order: &[usize]) -> Result<DensityOperator, Error> {
        let m = linalg::permute(&self.matrix, &self.dims, order)?;
        Ok(DensityOperator { matrix: m, dims: order.iter().map(|&k| self.dims[k]).collect() })
    }

    /// Marginal on `keep`, with factors in the order listed.
    pub fn marginal(&self, keep: &[usize]) -> Result<DensityOperator, Error> {
        let reduced = self.partial_trace(keep)?;
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        let order: Vec<usize> = keep.iter().map(|k| sorted.iter().position(|s| s == k).unwrap()).collect();
        reduced.permute(&order)
    }

    /// Conjugation `A ρ A†` (not renormalized). The caller guarantees the
    /// result stays a subnormalized state.
    pub(crate) fn conjugate(&self, a: &ComplexMatrix, dims: Vec<usize>) -> DensityOperator {
        DensityOperator::from_parts(a * &self.matrix * a.adjoint(), dims)
    }
}

fn check_same_dim(a: &DensityOperator, b: &DensityOperator) -> Result<(), Error> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension(format!("states of dimension {} and {}", a.dim(), b.dim())));
    }
    Ok(())
}

/// `‖√ρ√σ‖₁`, the fidelity of the operators themselves.
pub fn fidelity_plain(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> f64 {
    linalg::trace_norm(&(linalg::sqrtm(rho) * linalg::sqrtm(sigma)))
}

/// Generalized fidelity `‖√ρ√σ‖₁ + √((1−tr ρ)(1−tr σ))`, which reduces to
/// the usual fidelity on normalized states.
pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64, Error> {
    check_same_dim(rho, sigma)?;
    let defect = ((1.0 - rho.trace()).max(0.0) * (1.0 - sigma.trace()).max(0.0)).sqrt();
    Ok((fidelity_plain(rho.matrix(), sigma.matrix()) + defect).min(1.0))
}

/// `√(1 − F²)` with the generalized fidelity.
pub fn purified_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64, Error> {
    let f = fidelity(rho, sigma)?;
    Ok((1.0 - f * f).max(0.0).sqrt())
}

pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64, Error> {
    check_same_dim(rho, sigma)?;
    Ok(0.5 * linalg::trace_norm(&(rho.matrix() - sigma.matrix())))
}

/// Eigenvalues below this fraction of the trace are treated as outside the support.
pub const RANK_CUTOFF: f64 = 1e-12;

/// Purification `|ψ⟩ = Σ_k √λ_k |v_k⟩|k⟩` with a purifying system of
/// dimension `rank ρ`, appended as the last subsystem. The vector has squared
/// norm `tr ρ`.
pub fn purify(rho: &DensityOperator) -> (DVector<Complex64>, Vec<usize>) {
    let cutoff = RANK_CUTOFF * rho.trace().max(f64::MIN_POSITIVE);
    let (vals, vecs) = linalg::support(rho.matrix(), cutoff);
    let r = vals.len().max(1);
    let d = rho.dim();
    let mut psi = DVector::zeros(d * r);
    for (k, &lam) in vals.iter().enumerate() {
        let s = lam.sqrt();
        for i in 0..d {
            psi[i * r + k] += vecs[(i, k)] * s;
        }
    }
    let mut dims = rho.dims().to_vec();
    dims.push(r);
    (psi, dims)
}

/// Purification as a (rank one) density operator.
pub fn purification(rho: &DensityOperator) -> DensityOperator {
    let (psi, dims) = purify(rho);
    DensityOperator::from_parts(linalg::projector(&psi), dims)
}

/// Base-2 von Neumann entropy of a normalized state.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64, Error> {
    let tr = rho.trace();
    if (tr - 1.0).abs() > STATE_TOL {
        return Err(Error::InvalidState(format!("entropy needs a normalized state, trace is {tr}")));
    }
    Ok(linalg::entropy_of(&rho.eigenvalues()))
}

fn entropy_of_marginal(rho: &DensityOperator, keep: &[usize]) -> Result<f64, Error> {
    if keep.is_empty() {
        return Ok(0.0);
    }
    Ok(linalg::entropy_of(&rho.partial_trace(keep)?.eigenvalues()))
}

/// `S(A|B) = S(AB) − S(B)`.
pub fn conditional_entropy(rho: &DensityOperator, a: &[usize], b: &[usize]) -> Result<f64, Error> {
    let ab: Vec<usize> = a.iter().chain(b).copied().collect();
    linalg::check_subsystems(rho.dims(), &ab)?;
    Ok(entropy_of_marginal(rho, &ab)? - entropy_of_marginal(rho, b)?)
}

/// `I(X:Y|Z) = S(XZ) + S(YZ) − S(Z) − S(XYZ)`; an empty `z` gives `I(X:Y)`.
pub fn conditional_mutual_information(
    rho: &DensityOperator,
    x: &[usize],
    y: &[usize],
    z: &[usize],
) -> Result<f64, Error> {
    let all: Vec<usize> = x.iter().chain(y).chain(z).copied().collect();
    linalg::check_subsystems(rho.dims(), &all)?;
    let xz: Vec<usize> = x.iter().chain(z).copied().collect();
    let yz: Vec<usize> = y.iter().chain(z).copied().collect();
    Ok(entropy_of_marginal(rho, &xz)? + entropy_of_marginal(rho, &yz)?
        - entropy_of_marginal(rho, z)?
        - entropy_of_marginal(rho, &all)?)
}

pub fn mutual_information(rho: &DensityOperator, x: &[usize], y: &[usize]) -> Result<f64, Error> {
    conditional_mutual_information(rho, x, y, &[])
}

/// Haar-random unit vector.
pub fn random_pure<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DVector<Complex64> {
    let v = DVector::from_fn(d, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let n = v.norm();
    v / c(n)
}

/// Random state on `dims`: a Haar-random pure state on `dims ⊗ C^ancilla`
/// with the ancilla traced out, so the rank is at most `ancilla`.
pub fn random_state<R: Rng + ?Sized>(dims: &[usize], ancilla: usize, rng: &mut R) -> DensityOperator {
    let d: usize = dims.iter().product();
    let psi = random_pure(d * ancilla, rng);
    let g = DMatrix::from_fn(d, ancilla, |i, k| psi[i * ancilla + k]);
    DensityOperator::from_parts(&g * g.adjoint(), dims.to_vec())
}

/// Haar-random unitary (QR of a Ginibre matrix with phase correction).
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let g = DMatrix::from_fn(d, d, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            let z = r[(i, i)];
            if z.norm() > 0.0 {
                z / c(z.norm())
            } else {
                c(1.0)
            }
        } else {
            c(0.0)
        }
    });
    q * phases
}
