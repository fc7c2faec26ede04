//! Semidefinite programs for conditional min-entropies.
//!
//! The state `ρ_AB` enters through a [`Reduced`] description: the blocks
//! `ρ_λ` of a decomposition of the AB space, and the linear map
//! `σ_B ↦ (1_A ⊗ σ_B)_λ` evaluated on a real coordinate basis of the
//! (block-structured) variable `σ_B`. A plain state is the one-block case.
//!
//! Smooth min-entropy program, with `ρ_λ = V_λ D_λ V_λ†` compressed to its
//! support:
//!
//! ```text
//!   minimize   Σ_μ m_μ tr σ_μ
//!   subject to W_λ = [[D_λ, Y_λ], [Y_λ†, ρ'_λ]] ⪰ 0        (top-left block fixed)
//!              (1 ⊗ σ)_λ − ρ'_λ = Z_λ ⪰ 0
//!              Σ_λ m_λ tr ρ'_λ + t = 1
//!              Σ_λ m_λ Re tr(Y_λ V_λ) + g − s = √(1 − ε²)
//!              [[1 − tr ρ, g], [g, t]] ⪰ 0                   (only if tr ρ < 1)
//! ```
//!
//! The maximum of `Re tr(Y V)` over the `W` block is `‖√ρ'√ρ‖₁`, so the last
//! two lines bound the generalized fidelity from below. The optimum equals
//! `2^{-H_min^ε}`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use secrecy_sdp::{solve, BlockId, BlockKind, LinearForm, SdpProblem, SdpSolution, Tolerances};

use super::symmetry::Decomposition;
use crate::linalg::{self, c, ComplexMatrix, ZERO};
use crate::state::RANK_CUTOFF;
use crate::Error;

#[derive(Clone, Copy, Debug)]
enum Part {
    Re,
    Im,
}

/// One real coordinate of a Hermitian variable block.
#[derive(Clone, Copy, Debug)]
struct Coord {
    sector: usize,
    a: usize,
    b: usize,
    part: Part,
}

impl Coord {
    fn all(sector: usize, d: usize) -> Vec<Coord> {
        let mut out = Vec::with_capacity(d * d);
        for a in 0..d {
            for b in a..d {
                out.push(Coord { sector, a, b, part: Part::Re });
                if a != b {
                    out.push(Coord { sector, a, b, part: Part::Im });
                }
            }
        }
        out
    }

    /// The Hermitian matrix `H` with `σ = Σ coord · H`.
    fn unit(&self, d: usize) -> ComplexMatrix {
        let mut m = DMatrix::from_element(d, d, ZERO);
        match self.part {
            Part::Re if self.a == self.b => m[(self.a, self.a)] = c(1.0),
            Part::Re => {
                m[(self.a, self.b)] = c(1.0);
                m[(self.b, self.a)] = c(1.0);
            }
            Part::Im => {
                m[(self.a, self.b)] = Complex64::new(0.0, 1.0);
                m[(self.b, self.a)] = Complex64::new(0.0, -1.0);
            }
        }
        m
    }

    fn add_to(&self, form: &mut LinearForm, block: BlockId, w: f64) {
        match self.part {
            Part::Re => form.re_entry(block, self.a, self.b, w),
            Part::Im => form.im_entry(block, self.a, self.b, w),
        };
    }
}

/// Adds `w · Re(z X_rc)` (or the imaginary part) to `form`.
fn add_entry(form: &mut LinearForm, block: BlockId, r: usize, col: usize, z: Complex64, part: Part) {
    match part {
        Part::Re => {
            form.re_entry(block, r, col, z.re);
            form.im_entry(block, r, col, -z.im);
        }
        Part::Im => {
            form.im_entry(block, r, col, z.re);
            form.re_entry(block, r, col, z.im);
        }
    }
}

pub(crate) struct Reduced {
    /// `(ρ_λ, m_λ)`.
    ab: Vec<(ComplexMatrix, usize)>,
    /// `(d_μ, m_μ)`.
    b: Vec<(usize, usize)>,
    /// `(coordinate, [(1_A ⊗ unit)_λ for every λ])`.
    images: Vec<(Coord, Vec<ComplexMatrix>)>,
    trace: f64,
}

impl Reduced {
    /// A bipartite operator on `C^{d_a} ⊗ C^{d_b}` without symmetry.
    pub fn plain(rho: &ComplexMatrix, d_a: usize, d_b: usize) -> Self {
        let id = linalg::identity(d_a);
        let images = Coord::all(0, d_b)
            .into_iter()
            .map(|co| (co, vec![linalg::kron(&id, &co.unit(d_b))]))
            .collect();
        Reduced { ab: vec![(rho.clone(), 1)], b: vec![(d_b, 1)], images, trace: linalg::trace(rho) }
    }

    /// `ρ^{⊗n}` for `ρ` on `C^{d_a} ⊗ C^{d_b}`, factors ordered
    /// `A_1 B_1 A_2 B_2 …`, reduced by permutation symmetry.
    pub fn tensor_power(rho: &ComplexMatrix, d_a: usize, d_b: usize, n: usize) -> Result<Self, Error> {
        if n > 3 {
            return Err(Error::Domain(format!("tensor powers implemented for n ≤ 3, got {n}")));
        }
        if n <= 1 {
            return Ok(Self::plain(rho, d_a, d_b));
        }
        let full = (1..n).fold(rho.clone(), |acc, _| linalg::kron(&acc, rho));
        let ab = Decomposition::symmetric(d_a * d_b, n);
        let bdec = Decomposition::symmetric(d_b, n);
        let id_a = linalg::identity(d_a.pow(n as u32));
        let mut dims = vec![d_a; n];
        dims.extend(vec![d_b; n]);
        let order: Vec<usize> = (0..n).flat_map(|k| [k, n + k]).collect();
        let mut images = Vec::new();
        for (mu, sector) in bdec.sectors.iter().enumerate() {
            for co in Coord::all(mu, sector.dim()) {
                let unit = co.unit(sector.dim());
                let mut sigma = DMatrix::from_element(d_b.pow(n as u32), d_b.pow(n as u32), ZERO);
                for u in &sector.copies {
                    sigma += u * &unit * u.adjoint();
                }
                let lifted = linalg::permute(&linalg::kron(&id_a, &sigma), &dims, &order)?;
                images.push((co, ab.reduce(&lifted)));
            }
        }
        let blocks = ab.reduce(&full);
        Ok(Reduced {
            ab: blocks.into_iter().zip(ab.sectors.iter().map(|s| s.mult())).collect(),
            b: bdec.sectors.iter().map(|s| (s.dim(), s.mult())).collect(),
            images,
            trace: linalg::trace(&full),
        })
    }
}

/// Compressed support `(D, V)` of a block.
fn compress(rho: &ComplexMatrix, total_trace: f64) -> (Vec<f64>, ComplexMatrix) {
    linalg::support(rho, RANK_CUTOFF * total_trace.max(f64::MIN_POSITIVE))
}

/// Adds `(1 ⊗ σ)_λ − expr_λ − Z_λ = rhs` entrywise for every sector.
/// `extra(λ, form, r, c, part)` contributes further variable terms.
fn couple(
    p: &mut SdpProblem,
    red: &Reduced,
    sigma: &[BlockId],
    z: &[BlockId],
    rhs: &[ComplexMatrix],
    mut extra: impl FnMut(usize, &mut LinearForm, usize, usize, Part),
) {
    for (lam, (rho_l, _)) in red.ab.iter().enumerate() {
        let d = rho_l.nrows();
        for r in 0..d {
            for col in r..d {
                let parts: &[Part] = if r == col { &[Part::Re] } else { &[Part::Re, Part::Im] };
                for &part in parts {
                    let mut f = LinearForm::new();
                    for (co, img) in &red.images {
                        let z = img[lam][(r, col)];
                        let w = match part {
                            Part::Re => z.re,
                            Part::Im => z.im,
                        };
                        if w.abs() > 1e-14 {
                            co.add_to(&mut f, sigma[co.sector], w);
                        }
                    }
                    if !z.is_empty() {
                        match part {
                            Part::Re => f.re_entry(z[lam], r, col, -1.0),
                            Part::Im => f.im_entry(z[lam], r, col, -1.0),
                        };
                    }
                    extra(lam, &mut f, r, col, part);
                    let v = rhs[lam][(r, col)];
                    let b = match part {
                        Part::Re => v.re,
                        Part::Im => v.im,
                    };
                    if !f.is_empty() {
                        p.add_constraint(f, b);
                    }
                }
            }
        }
    }
}

fn objective_trace(p: &mut SdpProblem, red: &Reduced, sigma: &[BlockId]) {
    for (mu, &(d, m)) in red.b.iter().enumerate() {
        p.objective_mut().trace(sigma[mu], d, m as f64);
    }
}

fn run(p: &SdpProblem, what: &str) -> Result<SdpSolution, Error> {
    let sol = solve(p, &Tolerances::default())?;
    if !sol.is_optimal() {
        return Err(Error::Solver(format!(
            "{what}: status {:?} after {} iterations (gap {:.2e}, residuals {:.2e}/{:.2e})",
            sol.status, sol.iterations, sol.gap, sol.primal_residual, sol.dual_residual
        )));
    }
    Ok(sol)
}

/// `min tr σ` subject to `1 ⊗ σ ⪰ ρ`: the value is `2^{-H_min}`.
pub(crate) fn min_entropy_value(red: &Reduced) -> Result<f64, Error> {
    let mut p = SdpProblem::new();
    let sigma: Vec<BlockId> = red.b.iter().map(|&(d, _)| p.add_block(BlockKind::Hermitian(d))).collect();
    let z: Vec<BlockId> = red.ab.iter().map(|(r, _)| p.add_block(BlockKind::Hermitian(r.nrows()))).collect();
    let rhs: Vec<ComplexMatrix> = red.ab.iter().map(|(r, _)| r.clone()).collect();
    couple(&mut p, red, &sigma, &z, &rhs, |_, _, _, _, _| {});
    objective_trace(&mut p, red, &sigma);
    Ok(run(&p, "min-entropy")?.value())
}

/// Optimal value of the smoothed program above (`ε > 0`).
pub(crate) fn smooth_min_entropy_value(red: &Reduced, eps: f64) -> Result<f64, Error> {
    let normalized = 1.0 - red.trace < 1e-12;
    let mut p = SdpProblem::new();
    let sigma: Vec<BlockId> = red.b.iter().map(|&(d, _)| p.add_block(BlockKind::Hermitian(d))).collect();
    let supports: Vec<(Vec<f64>, ComplexMatrix)> = red.ab.iter().map(|(r, _)| compress(r, red.trace)).collect();
    let w: Vec<BlockId> = red
        .ab
        .iter()
        .zip(&supports)
        .map(|((r, _), (dvals, _))| p.add_block(BlockKind::Hermitian(dvals.len() + r.nrows())))
        .collect();
    let z: Vec<BlockId> = red.ab.iter().map(|(r, _)| p.add_block(BlockKind::Hermitian(r.nrows()))).collect();
    let slack = p.add_block(BlockKind::Nonneg(if normalized { 2 } else { 1 }));
    let defect = if normalized { None } else { Some(p.add_block(BlockKind::Symmetric(2))) };

    // Top-left blocks of W fixed to D.
    for (lam, (dvals, _)) in supports.iter().enumerate() {
        let r = dvals.len();
        for i in 0..r {
            for j in i..r {
                let mut f = LinearForm::new();
                f.re_entry(w[lam], i, j, 1.0);
                p.add_constraint(f, if i == j { dvals[i] } else { 0.0 });
                if i != j {
                    let mut f = LinearForm::new();
                    f.im_entry(w[lam], i, j, 1.0);
                    p.add_constraint(f, 0.0);
                }
            }
        }
    }
    // (1 ⊗ σ)_λ − ρ'_λ − Z_λ = 0 with ρ'_λ the bottom-right block of W_λ.
    let zeros: Vec<ComplexMatrix> = red.ab.iter().map(|(r, _)| DMatrix::from_element(r.nrows(), r.nrows(), ZERO)).collect();
    couple(&mut p, red, &sigma, &z, &zeros, |lam, f, r, col, part| {
        let off = supports[lam].0.len();
        match part {
            Part::Re => f.re_entry(w[lam], off + r, off + col, -1.0),
            Part::Im => f.im_entry(w[lam], off + r, off + col, -1.0),
        };
    });
    // Trace of ρ' plus its slack.
    let mut f = LinearForm::new();
    for (lam, (r, m)) in red.ab.iter().enumerate() {
        let off = supports[lam].0.len();
        for i in 0..r.nrows() {
            f.re_entry(w[lam], off + i, off + i, *m as f64);
        }
    }
    match defect {
        None => f.re_entry(slack, 1, 1, 1.0),
        Some(g) => f.re_entry(g, 1, 1, 1.0),
    };
    p.add_constraint(f, 1.0);
    // Fidelity lower bound.
    let mut f = LinearForm::new();
    for (lam, (_, m)) in red.ab.iter().enumerate() {
        let (dvals, v) = &supports[lam];
        let off = dvals.len();
        for i in 0..off {
            for j in 0..v.nrows() {
                let z = v[(j, i)] * c(*m as f64);
                if z.norm() > 1e-14 {
                    add_entry(&mut f, w[lam], i, off + j, z, Part::Re);
                }
            }
        }
    }
    f.re_entry(slack, 0, 0, -1.0);
    if let Some(g) = defect {
        f.re_entry(g, 0, 1, 1.0);
        let mut h = LinearForm::new();
        h.re_entry(g, 0, 0, 1.0);
        p.add_constraint(h, 1.0 - red.trace);
    }
    p.add_constraint(f, (1.0 - eps * eps).sqrt());

    objective_trace(&mut p, red, &sigma);
    Ok(run(&p, "smooth min-entropy")?.value())
}

/// `max_σ ‖√ρ √(1 ⊗ σ)‖₁` over states `σ_B`: the value is `2^{H_max/2}`.
pub(crate) fn max_fidelity_value(red: &Reduced) -> Result<f64, Error> {
    let mut p = SdpProblem::new();
    let sigma: Vec<BlockId> = red.b.iter().map(|&(d, _)| p.add_block(BlockKind::Hermitian(d))).collect();
    let supports: Vec<(Vec<f64>, ComplexMatrix)> = red.ab.iter().map(|(r, _)| compress(r, red.trace)).collect();
    let w: Vec<BlockId> = red
        .ab
        .iter()
        .zip(&supports)
        .map(|((r, _), (dvals, _))| p.add_block(BlockKind::Hermitian(dvals.len() + r.nrows())))
        .collect();
    for (lam, (dvals, _)) in supports.iter().enumerate() {
        let r = dvals.len();
        for i in 0..r {
            for j in i..r {
                let mut f = LinearForm::new();
                f.re_entry(w[lam], i, j, 1.0);
                p.add_constraint(f, if i == j { dvals[i] } else { 0.0 });
                if i != j {
                    let mut f = LinearForm::new();
                    f.im_entry(w[lam], i, j, 1.0);
                    p.add_constraint(f, 0.0);
                }
            }
        }
    }
    // bottom-right of W_λ equals (1 ⊗ σ)_λ
    let zeros: Vec<ComplexMatrix> = red.ab.iter().map(|(r, _)| DMatrix::from_element(r.nrows(), r.nrows(), ZERO)).collect();
    couple(&mut p, red, &sigma, &[], &zeros, |lam, f, r, col, part| {
        let off = supports[lam].0.len();
        match part {
            Part::Re => f.re_entry(w[lam], off + r, off + col, -1.0),
            Part::Im => f.im_entry(w[lam], off + r, off + col, -1.0),
        };
    });
    let mut f = LinearForm::new();
    for (mu, &(d, m)) in red.b.iter().enumerate() {
        f.trace(sigma[mu], d, m as f64);
    }
    p.add_constraint(f, 1.0);
    for (lam, (_, m)) in red.ab.iter().enumerate() {
        let (dvals, v) = &supports[lam];
        let off = dvals.len();
        for i in 0..off {
            for j in 0..v.nrows() {
                let z = v[(j, i)] * c(-(*m as f64));
                if z.norm() > 1e-14 {
                    add_entry(p.objective_mut(), w[lam], i, off + j, z, Part::Re);
                }
            }
        }
    }
    Ok(-run(&p, "max-entropy fidelity")?.value())
}
