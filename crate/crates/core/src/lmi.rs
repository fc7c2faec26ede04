//! Helpers for writing matrix equations as scalar SDP constraints.

use num_complex::Complex64;
use secrecy_sdp::{BlockId, LinearForm, SdpProblem};

use crate::linalg::ComplexMatrix;

/// Adds one scalar constraint per real coordinate of a Hermitian matrix
/// equation `L(X) = R` of dimension `d`. `build(form, r, c, re)` adds the terms
/// of entry `(r, c)` of `L(X)`, real part if `re` and imaginary part otherwise.
pub(crate) fn hermitian_equation(
    p: &mut SdpProblem,
    d: usize,
    rhs: &ComplexMatrix,
    mut build: impl FnMut(&mut LinearForm, usize, usize, bool),
) {
    for r in 0..d {
        for col in r..d {
            for re in [true, false] {
                if !re && r == col {
                    continue;
                }
                let mut f = LinearForm::new();
                build(&mut f, r, col, re);
                let v = rhs[(r, col)];
                p.add_constraint(f, if re { v.re } else { v.im });
            }
        }
    }
}

/// Adds `Re(z X_rc)` or `Im(z X_rc)` with weight `w`.
pub(crate) fn add_product(f: &mut LinearForm, block: BlockId, r: usize, col: usize, z: Complex64, re: bool, w: f64) {
    if re {
        f.re_entry(block, r, col, w * z.re);
        f.im_entry(block, r, col, -w * z.im);
    } else {
        f.im_entry(block, r, col, w * z.re);
        f.re_entry(block, r, col, w * z.im);
    }
}
