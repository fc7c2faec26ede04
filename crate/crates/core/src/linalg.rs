//! Dense complex matrix helpers.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::Error;

pub type ComplexMatrix = DMatrix<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(d: usize) -> ComplexMatrix {
    DMatrix::identity(d, d)
}

/// Kronecker product; entry `(i·p + k, j·q + l)` is `a_ij b_kl` for `b` of shape `p × q`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn kron_all(ms: &[ComplexMatrix]) -> ComplexMatrix {
    ms.iter().fold(DMatrix::from_element(1, 1, ONE), |acc, m| kron(&acc, m))
}

pub fn diag(v: &[f64]) -> ComplexMatrix {
    DMatrix::from_diagonal(&DVector::from_iterator(v.len(), v.iter().map(|&x| c(x))))
}

pub fn ket(d: usize, i: usize) -> DVector<Complex64> {
    let mut v = DVector::zeros(d);
    v[i] = ONE;
    v
}

pub fn projector(v: &DVector<Complex64>) -> ComplexMatrix {
    v * v.adjoint()
}

pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()) * c(0.5)
}

/// Largest entrywise deviation from Hermiticity.
pub fn hermiticity_defect(m: &ComplexMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..m.nrows() {
        for col in r..m.ncols() {
            worst = worst.max((m[(r, col)] - m[(col, r)].conj()).norm());
        }
    }
    worst
}

pub fn trace(m: &ComplexMatrix) -> f64 {
    m.trace().re
}

/// Eigenvalues (ascending) and eigenvectors of the Hermitian part of `m`.
pub fn eigh(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let e = hermitian_part(m).symmetric_eigen();
    let mut idx: Vec<usize> = (0..e.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
    let vals = idx.iter().map(|&i| e.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(m.nrows(), idx.len(), |r, k| e.eigenvectors[(r, idx[k])]);
    (vals, vecs)
}

pub fn eigvalsh(m: &ComplexMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = hermitian_part(m).symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Applies `f` to the spectrum of a Hermitian matrix.
pub fn funm(m: &ComplexMatrix, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let (vals, vecs) = eigh(m);
    let fd = DVector::from_iterator(vals.len(), vals.iter().map(|&x| c(f(x))));
    let scaled = DMatrix::from_fn(vecs.nrows(), vecs.ncols(), |r, k| vecs[(r, k)] * fd[k]);
    scaled * vecs.adjoint()
}

/// Square root of a PSD matrix (negative eigenvalues clipped).
pub fn sqrtm(m: &ComplexMatrix) -> ComplexMatrix {
    funm(m, |x| x.max(0.0).sqrt())
}

pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    m.clone().singular_values().sum()
}

/// Support of a PSD matrix: eigenvalues above `cutoff` and the isometry onto them.
pub fn support(m: &ComplexMatrix, cutoff: f64) -> (Vec<f64>, ComplexMatrix) {
    let (vals, vecs) = eigh(m);
    let keep: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > cutoff).collect();
    let v = DMatrix::from_fn(m.nrows(), keep.len(), |r, k| vecs[(r, keep[k])]);
    (keep.iter().map(|&i| vals[i]).collect(), v)
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

fn digits(mut i: usize, dims: &[usize], out: &mut [usize]) {
    for k in (0..dims.len()).rev() {
        out[k] = i % dims[k];
        i /= dims[k];
    }
}

pub(crate) fn check_subsystems(dims: &[usize], idx: &[usize]) -> Result<(), Error> {
    for (n, &k) in idx.iter().enumerate() {
        if k >= dims.len() {
            return Err(Error::Subsystem(format!("index {k} but only {} subsystems", dims.len())));
        }
        if idx[..n].contains(&k) {
            return Err(Error::Subsystem(format!("index {k} listed twice")));
        }
    }
    Ok(())
}

/// Reorders tensor factors: output factor `k` is input factor `order[k]`.
pub fn permute(m: &ComplexMatrix, dims: &[usize], order: &[usize]) -> Result<ComplexMatrix, Error> {
    if order.len() != dims.len() {
        return Err(Error::Subsystem(format!(
            "permutation of length {} for {} subsystems",
            order.len(),
            dims.len()
        )));
    }
    check_subsystems(dims, order)?;
    let d: usize = dims.iter().product();
    if m.nrows() != d || m.ncols() != d {
        return Err(Error::Dimension(format!("matrix {}x{} but dims multiply to {d}", m.nrows(), m.ncols())));
    }
    let new_dims: Vec<usize> = order.iter().map(|&k| dims[k]).collect();
    let old_strides = strides(dims);
    // map[new index] = old index
    let mut map = vec![0usize; d];
    let mut dg = vec![0usize; dims.len()];
    for (i, slot) in map.iter_mut().enumerate() {
        digits(i, &new_dims, &mut dg);
        *slot = order.iter().zip(&dg).map(|(&k, &x)| x * old_strides[k]).sum();
    }
    Ok(DMatrix::from_fn(d, d, |r, col| m[(map[r], map[col])]))
}

/// Traces out every subsystem not listed in `keep`; kept factors stay in
/// their original relative order.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix, Error> {
    check_subsystems(dims, keep)?;
    let d: usize = dims.iter().product();
    if m.nrows() != d || m.ncols() != d {
        return Err(Error::Dimension(format!("matrix {}x{} but dims multiply to {d}", m.nrows(), m.ncols())));
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep_sorted.contains(k)).collect();
    let mut order = keep_sorted.clone();
    order.extend(&traced);
    let p = permute(m, dims, &order)?;
    let dk: usize = keep_sorted.iter().map(|&k| dims[k]).product();
    let dt: usize = traced.iter().map(|&k| dims[k]).product();
    Ok(DMatrix::from_fn(dk, dk, |r, col| (0..dt).map(|t| p[(r * dt + t, col * dt + t)]).sum()))
}

/// Shannon/von Neumann entropy of a spectrum, base 2, `0 log 0 = 0`.
pub fn entropy_of(vals: &[f64]) -> f64 {
    vals.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

pub fn frobenius_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).norm()
}

/// Largest entry modulus.
pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
