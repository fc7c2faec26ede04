//! Channels in Kraus form, Choi operators and Stinespring isometries.

use nalgebra::DMatrix;

use crate::linalg::{self, c, ComplexMatrix, ZERO};
use crate::state::DensityOperator;
use crate::Error;

pub const TP_TOL: f64 = 1e-8;

/// Completely positive trace preserving map `ρ ↦ Σ K ρ K†`.
#[derive(Clone, Debug)]
pub struct QuantumChannel {
    kraus: Vec<ComplexMatrix>,
    d_in: usize,
    d_out: usize,
}

impl QuantumChannel {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self, Error> {
        let first = kraus.first().ok_or_else(|| Error::InvalidChannel("no Kraus operators".into()))?;
        let (d_out, d_in) = first.shape();
        if d_in == 0 || d_out == 0 {
            return Err(Error::InvalidChannel("empty Kraus operator".into()));
        }
        if kraus.iter().any(|k| k.shape() != (d_out, d_in)) {
            return Err(Error::InvalidChannel("Kraus operators of different shapes".into()));
        }
        let mut sum = DMatrix::zeros(d_in, d_in);
        for k in &kraus {
            sum += k.adjoint() * k;
        }
        let defect = linalg::max_abs(&(sum - linalg::identity(d_in)));
        if defect > TP_TOL {
            return Err(Error::InvalidChannel(format!("not trace preserving (defect {defect:.3e})")));
        }
        Ok(QuantumChannel { kraus, d_in, d_out })
    }

    pub fn identity(d: usize) -> Self {
        QuantumChannel { kraus: vec![linalg::identity(d)], d_in: d, d_out: d }
    }

    /// `ρ ↦ tr(ρ) τ`.
    pub fn replace(d_in: usize, tau: &DensityOperator) -> Self {
        let (vals, vecs) = linalg::eigh(tau.matrix());
        let mut kraus = Vec::new();
        for (k, &lam) in vals.iter().enumerate() {
            if lam <= 0.0 {
                continue;
            }
            for j in 0..d_in {
                let mut m = DMatrix::zeros(tau.dim(), d_in);
                for i in 0..tau.dim() {
                    m[(i, j)] = vecs[(i, k)] * c(lam.sqrt());
                }
                kraus.push(m);
            }
        }
        QuantumChannel { kraus, d_in, d_out: tau.dim() }
    }

    /// Builds a channel from its Choi operator `J = Σ |i⟩⟨j| ⊗ N(|i⟩⟨j|)`
    /// (input factor first), dropping eigenvalues at or below `cutoff`.
    /// The Kraus set is renormalized so the result is exactly trace
    /// preserving.
    pub fn from_choi(j: &ComplexMatrix, d_in: usize, d_out: usize, cutoff: f64) -> Result<Self, Error> {
        if j.nrows() != d_in * d_out {
            return Err(Error::Dimension(format!("Choi matrix of size {} for {d_in}->{d_out}", j.nrows())));
        }
        let (vals, vecs) = linalg::support(j, cutoff);
        if vals.is_empty() {
            return Err(Error::InvalidChannel("Choi operator is zero".into()));
        }
        let mut kraus: Vec<ComplexMatrix> = vals
            .iter()
            .enumerate()
            .map(|(k, &lam)| DMatrix::from_fn(d_out, d_in, |o, i| vecs[(i * d_out + o, k)] * c(lam.sqrt())))
            .collect();
        let mut sum = DMatrix::zeros(d_in, d_in);
        for k in &kraus {
            sum += k.adjoint() * k;
        }
        let inv_sqrt = linalg::funm(&sum, |x| if x > 1e-300 { 1.0 / x.sqrt() } else { 0.0 });
        for k in kraus.iter_mut() {
            *k = &*k * &inv_sqrt;
        }
        QuantumChannel::new(kraus)
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn input_dim(&self) -> usize {
        self.d_in
    }

    pub fn output_dim(&self) -> usize {
        self.d_out
    }

    pub fn apply_matrix(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = DMatrix::zeros(self.d_out, self.d_out);
        for k in &self.kraus {
            out += k * rho * k.adjoint();
        }
        out
    }

    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator, Error> {
        if rho.dim() != self.d_in {
            return Err(Error::Dimension(format!("channel input {} but state dimension {}", self.d_in, rho.dim())));
        }
        Ok(DensityOperator::from_parts(self.apply_matrix(rho.matrix()), vec![self.d_out]))
    }

    pub fn choi(&self) -> ComplexMatrix {
        let (di, d_o) = (self.d_in, self.d_out);
        let mut j = DMatrix::zeros(di * d_o, di * d_o);
        for a in 0..di {
            for b in 0..di {
                let mut e = DMatrix::from_element(di, di, ZERO);
                e[(a, b)] = c(1.0);
                let out = self.apply_matrix(&e);
                for o in 0..d_o {
                    for p in 0..d_o {
                        j[(a * d_o + o, b * d_o + p)] = out[(o, p)];
                    }
                }
            }
        }
        j
    }
}

/// Applies a channel given by its Choi operator: `N(ρ) = tr_in[(ρᵀ ⊗ 1) J]`.
pub fn apply_choi(j: &ComplexMatrix, d_in: usize, d_out: usize, rho: &ComplexMatrix) -> ComplexMatrix {
    DMatrix::from_fn(d_out, d_out, |o, p| {
        let mut acc = ZERO;
        for a in 0..d_in {
            for b in 0..d_in {
                acc += rho[(a, b)] * j[(a * d_out + o, b * d_out + p)];
            }
        }
        acc
    })
}

/// Isometry `V` with `V†V = 1`, output factored as `out_dims`.
#[derive(Clone, Debug)]
pub struct Isometry {
    matrix: ComplexMatrix,
    out_dims: Vec<usize>,
}

impl Isometry {
    pub fn new(matrix: ComplexMatrix, out_dims: Vec<usize>) -> Result<Self, Error> {
        let (d_out, d_in) = matrix.shape();
        if out_dims.iter().product::<usize>() != d_out {
            return Err(Error::Dimension(format!("output dims {out_dims:?} do not factor {d_out}")));
        }
        if d_out < d_in {
            return Err(Error::InvalidChannel("isometry must not shrink the space".into()));
        }
        let defect = linalg::max_abs(&(matrix.adjoint() * &matrix - linalg::identity(d_in)));
        if defect > TP_TOL {
            return Err(Error::InvalidChannel(format!("V†V deviates from identity by {defect:.3e}")));
        }
        Ok(Isometry { matrix, out_dims })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn out_dims(&self) -> &[usize] {
        &self.out_dims
    }

    pub fn input_dim(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator, Error> {
        if rho.dim() != self.input_dim() {
            return Err(Error::Dimension(format!("isometry input {} but state dimension {}", self.input_dim(), rho.dim())));
        }
        Ok(rho.conjugate(&self.matrix, self.out_dims.clone()))
    }
}

/// `V|ψ⟩ = Σ_k K_k|ψ⟩ ⊗ |k⟩`: output factors are (channel output, environment)
/// with the environment dimension equal to the number of Kraus operators.
pub fn stinespring(channel: &QuantumChannel) -> Isometry {
    let r = channel.kraus.len();
    let (d_out, d_in) = (channel.d_out, channel.d_in);
    let mut v = DMatrix::zeros(d_out * r, d_in);
    for (k, kr) in channel.kraus.iter().enumerate() {
        for o in 0..d_out {
            for i in 0..d_in {
                v[(o * r + k, i)] = kr[(o, i)];
            }
        }
    }
    Isometry { matrix: v, out_dims: vec![d_out, r] }
}

/// Applies `channel` to subsystem `target` of `rho`, leaving the others alone.
pub fn apply_channel(channel: &QuantumChannel, rho: &DensityOperator, target: usize) -> Result<DensityOperator, Error> {
    let dims = rho.dims();
    if target >= dims.len() {
        return Err(Error::Subsystem(format!("target {target} but only {} subsystems", dims.len())));
    }
    if dims[target] != channel.d_in {
        return Err(Error::Dimension(format!(
            "channel input {} but subsystem {target} has dimension {}",
            channel.d_in, dims[target]
        )));
    }
    let left: usize = dims[..target].iter().product();
    let right: usize = dims[target + 1..].iter().product();
    let mut out_dims = dims.to_vec();
    out_dims[target] = channel.d_out;
    let d: usize = out_dims.iter().product();
    let mut out = DMatrix::zeros(d, d);
    for k in &channel.kraus {
        let full = linalg::kron(&linalg::kron(&linalg::identity(left), k), &linalg::identity(right));
        out += &full * rho.matrix() * full.adjoint();
    }
    Ok(DensityOperator::from_parts(out, out_dims))
}
