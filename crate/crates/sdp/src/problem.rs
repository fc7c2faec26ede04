//! Problem description in Hermitian terms.
//!
//! A problem is
//!
//! ```text
//!   minimize    sum_k tr(C_k X_k)
//!   subject to  sum_k tr(A_ik X_k) = b_i      for every constraint i
//!               X_k ⪰ 0                      for every block k
//! ```
//!
//! where each block is a complex Hermitian matrix, a real symmetric matrix,
//! or a vector of nonnegative scalars. Every linear functional on a block is
//! stored as a sparse Hermitian coefficient matrix `A` acting through
//! `tr(A X)`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::SdpError;

/// Kind and dimension of one variable block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockKind {
    /// Complex Hermitian PSD matrix of the given dimension.
    Hermitian(usize),
    /// Real symmetric PSD matrix of the given dimension.
    Symmetric(usize),
    /// Vector of nonnegative reals (a diagonal block).
    Nonneg(usize),
}

impl BlockKind {
    pub fn dim(&self) -> usize {
        match *self {
            BlockKind::Hermitian(n) | BlockKind::Symmetric(n) | BlockKind::Nonneg(n) => n,
        }
    }
}

/// Index of a block inside an [`SdpProblem`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockId(pub usize);

/// A real-linear functional `X ↦ Σ_k tr(A_k X_k)`.
///
/// Coefficients are kept in upper-triangular form: the entry `(r, c, v)` with
/// `r <= c` stands for `A_rc = v` and `A_cr = conj(v)`.
#[derive(Clone, Debug, Default)]
pub struct LinearForm {
    terms: BTreeMap<(BlockId, usize, usize), Complex64>,
}

impl LinearForm {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `A_rc += v` (and the Hermitian partner) to the coefficient of `block`.
    pub fn coeff(&mut self, block: BlockId, r: usize, c: usize, v: Complex64) -> &mut Self {
        let (r, c, v) = if r <= c { (r, c, v) } else { (c, r, v.conj()) };
        let v = if r == c { Complex64::new(v.re, 0.0) } else { v };
        *self.terms.entry((block, r, c)).or_insert(Complex64::new(0.0, 0.0)) += v;
        self
    }

    /// Adds `w · Re X_rc`.
    pub fn re_entry(&mut self, block: BlockId, r: usize, c: usize, w: f64) -> &mut Self {
        if r == c {
            self.coeff(block, r, r, Complex64::new(w, 0.0))
        } else {
            self.coeff(block, r, c, Complex64::new(0.5 * w, 0.0))
        }
    }

    /// Adds `w · Im X_rc`. Diagonal imaginary parts vanish for Hermitian `X`.
    pub fn im_entry(&mut self, block: BlockId, r: usize, c: usize, w: f64) -> &mut Self {
        if r == c {
            return self;
        }
        // tr(A X) with A_rc = i w/2, A_cr = -i w/2 equals w Im X_rc.
        self.coeff(block, r, c, Complex64::new(0.0, 0.5 * w))
    }

    /// Adds `w · tr X` for a block of dimension `dim`.
    pub fn trace(&mut self, block: BlockId, dim: usize, w: f64) -> &mut Self {
        for i in 0..dim {
            self.re_entry(block, i, i, w);
        }
        self
    }

    /// Adds `tr(H X)` for a dense Hermitian `H` given row-major.
    pub fn dense(&mut self, block: BlockId, h: &nalgebra::DMatrix<Complex64>, scale: f64) -> &mut Self {
        let n = h.nrows();
        for r in 0..n {
            for c in r..n {
                let v = h[(r, c)] * scale;
                if v.norm() > 0.0 {
                    self.coeff(block, r, c, v);
                }
            }
        }
        self
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Stored upper-triangular entries `(block, r, c, A_rc)` with `r <= c`.
    pub fn entries(&self) -> impl Iterator<Item = (BlockId, usize, usize, Complex64)> + '_ {
        self.terms.iter().map(|(&(b, r, c), &v)| (b, r, c, v))
    }
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub form: LinearForm,
    pub rhs: f64,
}

/// Standard-form semidefinite program.
#[derive(Clone, Debug, Default)]
pub struct SdpProblem {
    pub(crate) blocks: Vec<BlockKind>,
    pub(crate) objective: LinearForm,
    pub(crate) constraints: Vec<Constraint>,
}

impl SdpProblem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_block(&mut self, kind: BlockKind) -> BlockId {
        self.blocks.push(kind);
        BlockId(self.blocks.len() - 1)
    }

    pub fn blocks(&self) -> &[BlockKind] {
        &self.blocks
    }

    pub fn objective_mut(&mut self) -> &mut LinearForm {
        &mut self.objective
    }

    pub fn set_objective(&mut self, form: LinearForm) {
        self.objective = form;
    }

    pub fn add_constraint(&mut self, form: LinearForm, rhs: f64) -> usize {
        self.constraints.push(Constraint { form, rhs });
        self.constraints.len() - 1
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    /// Rejects malformed problems before any numerical work.
    pub fn validate(&self) -> Result<(), SdpError> {
        if self.blocks.is_empty() {
            return Err(SdpError::Malformed("problem has no variable blocks".into()));
        }
        for (k, b) in self.blocks.iter().enumerate() {
            if b.dim() == 0 {
                return Err(SdpError::Malformed(format!("block {k} has dimension zero")));
            }
        }
        let check_form = |form: &LinearForm, what: &str| -> Result<(), SdpError> {
            for (b, r, c, v) in form.entries() {
                let kind = self.blocks.get(b.0).ok_or_else(|| {
                    SdpError::Malformed(format!("{what} references missing block {}", b.0))
                })?;
                if c >= kind.dim() {
                    return Err(SdpError::Malformed(format!(
                        "{what} entry ({r},{c}) outside block {} of dimension {}",
                        b.0,
                        kind.dim()
                    )));
                }
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(SdpError::Malformed(format!("{what} has a non-finite coefficient")));
                }
                match kind {
                    BlockKind::Symmetric(_) if v.im != 0.0 => {
                        return Err(SdpError::Malformed(format!(
                            "{what} puts a complex coefficient on real block {}",
                            b.0
                        )))
                    }
                    BlockKind::Nonneg(_) if r != c => {
                        return Err(SdpError::Malformed(format!(
                            "{what} uses off-diagonal entry on nonnegative block {}",
                            b.0
                        )))
                    }
                    _ => {}
                }
            }
            Ok(())
        };
        check_form(&self.objective, "objective")?;
        for (i, con) in self.constraints.iter().enumerate() {
            if !con.rhs.is_finite() {
                return Err(SdpError::Malformed(format!("constraint {i} has non-finite rhs")));
            }
            if con.form.is_empty() {
                return Err(SdpError::Malformed(format!("constraint {i} is empty")));
            }
            check_form(&con.form, &format!("constraint {i}"))?;
        }
        Ok(())
    }
}
