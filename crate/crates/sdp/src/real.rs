//! Real symmetric form of a Hermitian problem.
//!
//! A complex Hermitian block `X = P + iQ` of dimension `n` becomes the real
//! symmetric block `[[P, -Q], [Q, P]]` of dimension `2n`. The coefficient of a
//! functional is embedded the same way and halved, so `<emb(A)/2, emb(X)> =
//! tr(A X)` and constraint values are unchanged.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::problem::{BlockKind, LinearForm, SdpProblem};

#[derive(Clone, Copy, Debug)]
pub(crate) enum Placement {
    /// Real PSD block index; `complex` means the user block is Hermitian and
    /// occupies a doubled real block.
    Psd { index: usize, complex: bool, dim: usize },
    /// Offset into the concatenated nonnegative vector.
    Lp { offset: usize, dim: usize },
}

/// Sparse functional on the real variables. PSD entries are stored with both
/// triangles expanded so that `<A, X> = Σ v X[r][c]`.
#[derive(Clone, Debug, Default)]
pub(crate) struct RealForm {
    pub psd: Vec<(usize, Vec<(usize, usize, f64)>)>,
    pub lp: Vec<(usize, f64)>,
}

pub(crate) struct RealProblem {
    pub psd_dims: Vec<usize>,
    pub lp_dim: usize,
    pub placement: Vec<Placement>,
    pub c: RealForm,
    pub rows: Vec<RealForm>,
    pub b: DVector<f64>,
}

impl RealProblem {
    pub fn from_problem(p: &SdpProblem) -> Self {
        let mut psd_dims = Vec::new();
        let mut lp_dim = 0;
        let mut placement = Vec::with_capacity(p.blocks.len());
        for kind in &p.blocks {
            match *kind {
                BlockKind::Hermitian(n) => {
                    placement.push(Placement::Psd { index: psd_dims.len(), complex: true, dim: n });
                    psd_dims.push(2 * n);
                }
                BlockKind::Symmetric(n) => {
                    placement.push(Placement::Psd { index: psd_dims.len(), complex: false, dim: n });
                    psd_dims.push(n);
                }
                BlockKind::Nonneg(n) => {
                    placement.push(Placement::Lp { offset: lp_dim, dim: n });
                    lp_dim += n;
                }
            }
        }
        let c = embed_form(&p.objective, &placement);
        let rows = p.constraints.iter().map(|con| embed_form(&con.form, &placement)).collect();
        let b = DVector::from_iterator(p.constraints.len(), p.constraints.iter().map(|c| c.rhs));
        RealProblem { psd_dims, lp_dim, placement, c, rows, b }
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }
}

fn embed_form(form: &LinearForm, placement: &[Placement]) -> RealForm {
    let mut psd: std::collections::BTreeMap<usize, Vec<(usize, usize, f64)>> = Default::default();
    let mut lp = Vec::new();
    for (block, r, c, v) in form.entries() {
        match placement[block.0] {
            Placement::Lp { offset, .. } => lp.push((offset + r, v.re)),
            Placement::Psd { index, complex: false, .. } => {
                let e = psd.entry(index).or_default();
                if r == c {
                    e.push((r, r, v.re));
                } else {
                    e.push((r, c, v.re));
                    e.push((c, r, v.re));
                }
            }
            Placement::Psd { index, complex: true, dim: n } => {
                let e = psd.entry(index).or_default();
                let (a, bi) = (0.5 * v.re, 0.5 * v.im);
                if r == c {
                    e.push((r, r, a));
                    e.push((r + n, r + n, a));
                } else {
                    if a != 0.0 {
                        e.push((r, c, a));
                        e.push((c, r, a));
                        e.push((r + n, c + n, a));
                        e.push((c + n, r + n, a));
                    }
                    if bi != 0.0 {
                        e.push((r, c + n, -bi));
                        e.push((c + n, r, -bi));
                        e.push((c, r + n, bi));
                        e.push((r + n, c, bi));
                    }
                }
            }
        }
    }
    RealForm {
        psd: psd.into_iter().filter(|(_, e)| !e.is_empty()).collect(),
        lp,
    }
}

/// Recovers the Hermitian matrix from its real embedding. For dual slacks
/// the embedding carries an extra factor 1/2, undone by `scale = 2`.
pub(crate) fn extract_hermitian(y: &DMatrix<f64>, n: usize, scale: f64) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |r, c| {
        let re = 0.5 * (y[(r, c)] + y[(r + n, c + n)]);
        let im = 0.5 * (y[(r + n, c)] - y[(r, c + n)]);
        Complex64::new(scale * re, scale * im)
    })
}
