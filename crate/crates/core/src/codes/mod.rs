//! Explicit wiretap codes, their errors, converse bounds and the `(ε, δ)`
//! region.
//!
//! Input strings `xⁿ` are indexed lexicographically, first letter most
//! significant. Blocks of channel outputs are ordered `B₁…Bₙ E₁…Eₙ`.

mod converse;
mod region;
mod search;

pub use converse::{
    audit_privacy_bound_chain, finite_n_converse, trivial_converse_bound, ChainLine, ChainReport, ConverseBound,
    ConverseOptions, HASHING_CONSTANT,
};
pub use region::{classify_region, emit_region_csv, region_grid, Region, RegionVerdict, BOUNDARY_TOL};
pub use search::{
    brute_force_m, deterministic_codes, empirical_type, grid_distributions, nogo_mixture_code, stochastic_codes,
    type_class_check, SearchConfig, SearchResult, TypeClass, TypeClassReport,
};

use nalgebra::DMatrix;
use secrecy_sdp::{solve, BlockId, BlockKind, SdpProblem, SdpStatus, Tolerances};

use crate::linalg::{self, c, ComplexMatrix};
use crate::lmi::{add_product, hermitian_equation};
use crate::state::{fidelity_plain, DensityOperator, RANK_CUTOFF};
use crate::wiretap::CqqWiretapChannel;
use crate::Error;

/// Default cap on `M · (d_B d_E)ⁿ`.
pub const DEFAULT_BUDGET_DIM: usize = 64;
/// Tolerance for encoder rows and POVM completeness.
pub const CODE_TOL: f64 = 1e-8;

/// The joint-dimension budget, from `SECRECY_BUDGET_DIM` when set.
pub fn budget_dim() -> usize {
    std::env::var("SECRECY_BUDGET_DIM").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_BUDGET_DIM)
}

/// An `n`-block code with `M` messages: a stochastic encoder `E(xⁿ|u)` and an
/// optional decoding POVM on `Bⁿ`.
#[derive(Clone, Debug)]
pub struct WiretapCode {
    m: usize,
    n: usize,
    alphabet: usize,
    encoder: Vec<Vec<f64>>,
    decoder: Option<Vec<ComplexMatrix>>,
}

impl WiretapCode {
    pub fn new(
        alphabet: usize,
        n: usize,
        encoder: Vec<Vec<f64>>,
        decoder: Option<Vec<ComplexMatrix>>,
    ) -> Result<Self, Error> {
        let m = encoder.len();
        if m == 0 || n == 0 || alphabet == 0 {
            return Err(Error::Domain("a code needs M ≥ 1, n ≥ 1 and a nonempty alphabet".into()));
        }
        let words = alphabet
            .checked_pow(n as u32)
            .ok_or_else(|| Error::Domain("too many input strings".into()))?;
        for (u, row) in encoder.iter().enumerate() {
            if row.len() != words {
                return Err(Error::Dimension(format!("encoder row {u} has {} entries, expected {words}", row.len())));
            }
            if row.iter().any(|&p| !(p >= -CODE_TOL)) || (row.iter().sum::<f64>() - 1.0).abs() > CODE_TOL {
                return Err(Error::Domain(format!("encoder row {u} is not a probability distribution")));
            }
        }
        if let Some(d) = &decoder {
            check_povm(d, m)?;
        }
        Ok(WiretapCode { m, n, alphabet, encoder, decoder })
    }

    /// Deterministic encoder `u ↦ codewords[u]` (letters of each codeword).
    pub fn deterministic(alphabet: usize, codewords: &[Vec<usize>]) -> Result<Self, Error> {
        let n = codewords.first().map_or(0, |w| w.len());
        let words = alphabet.pow(n as u32);
        let mut enc = Vec::with_capacity(codewords.len());
        for w in codewords {
            if w.len() != n || w.iter().any(|&x| x >= alphabet) {
                return Err(Error::Domain(format!("codeword {w:?} is not a string over the alphabet of length {n}")));
            }
            let mut row = vec![0.0; words];
            row[string_index(w, alphabet)] = 1.0;
            enc.push(row);
        }
        Self::new(alphabet, n, enc, None)
    }

    pub fn with_decoder(mut self, decoder: Vec<ComplexMatrix>) -> Result<Self, Error> {
        check_povm(&decoder, self.m)?;
        self.decoder = Some(decoder);
        Ok(self)
    }

    pub fn messages(&self) -> usize {
        self.m
    }

    pub fn blocklength(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn encoder(&self) -> &[Vec<f64>] {
        &self.encoder
    }

    pub fn decoder(&self) -> Option<&[ComplexMatrix]> {
        self.decoder.as_deref()
    }

    /// `log M / n`.
    pub fn rate(&self) -> f64 {
        (self.m as f64).log2() / self.n as f64
    }

    /// Codeword of message `u` if the encoder is deterministic.
    pub fn codeword(&self, u: usize) -> Option<usize> {
        let row = &self.encoder[u];
        row.iter().position(|&p| (p - 1.0).abs() <= CODE_TOL)
    }

    pub fn is_deterministic(&self) -> bool {
        (0..self.m).all(|u| self.codeword(u).is_some())
    }
}

fn check_povm(d: &[ComplexMatrix], m: usize) -> Result<(), Error> {
    if d.len() != m {
        return Err(Error::Dimension(format!("decoder has {} elements for {m} messages", d.len())));
    }
    let dim = d[0].nrows();
    let mut total = DMatrix::zeros(dim, dim);
    for (u, e) in d.iter().enumerate() {
        if e.nrows() != dim || e.ncols() != dim {
            return Err(Error::Dimension(format!("POVM element {u} has the wrong shape")));
        }
        if linalg::hermiticity_defect(e) > CODE_TOL {
            return Err(Error::Domain(format!("POVM element {u} is not Hermitian")));
        }
        if linalg::eigvalsh(e).first().copied().unwrap_or(0.0) < -CODE_TOL {
            return Err(Error::Domain(format!("POVM element {u} is not positive semidefinite")));
        }
        total += e;
    }
    if linalg::max_abs(&(total - linalg::identity(dim))) > CODE_TOL {
        return Err(Error::Domain("POVM elements do not sum to the identity".into()));
    }
    Ok(())
}

/// Lexicographic index of a string over an alphabet of size `k`.
pub fn string_index(word: &[usize], k: usize) -> usize {
    word.iter().fold(0, |acc, &x| acc * k + x)
}

/// Letters of the string with index `i`.
pub fn string_letters(mut i: usize, k: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = i % k;
        i /= k;
    }
    out
}

/// `ρ_{xⁿ}^{BⁿEⁿ}` with factors ordered `B₁…Bₙ E₁…Eₙ`.
pub fn block_state(w: &CqqWiretapChannel, word: &[usize]) -> Result<ComplexMatrix, Error> {
    let n = word.len();
    let mats: Vec<ComplexMatrix> = word.iter().map(|&x| w.states()[x].matrix().clone()).collect();
    let joint = linalg::kron_all(&mats);
    let dims: Vec<usize> = (0..n).flat_map(|_| [w.dim_b(), w.dim_e()]).collect();
    let order: Vec<usize> = (0..n).map(|k| 2 * k).chain((0..n).map(|k| 2 * k + 1)).collect();
    linalg::permute(&joint, &dims, &order)
}

/// Conditional states of a code: `ρ_u^{BⁿEⁿ} = Σ_{xⁿ} E(xⁿ|u) ρ_{xⁿ}`.
#[derive(Clone, Debug)]
pub struct CodeState {
    pub m: usize,
    pub dim_b: usize,
    pub dim_e: usize,
    pub conditional: Vec<ComplexMatrix>,
}

impl CodeState {
    /// Assembles the conditional states, refusing when `M (d_B d_E)ⁿ`
    /// exceeds `budget`.
    pub fn new(code: &WiretapCode, w: &CqqWiretapChannel, budget: usize) -> Result<Self, Error> {
        if code.alphabet != w.alphabet() {
            return Err(Error::Dimension(format!(
                "code alphabet {} but channel alphabet {}",
                code.alphabet,
                w.alphabet()
            )));
        }
        let n = code.n as u32;
        let needed = (w.dim_b() * w.dim_e())
            .checked_pow(n)
            .and_then(|d| d.checked_mul(code.m))
            .unwrap_or(usize::MAX);
        if needed > budget {
            return Err(Error::Budget { needed, budget });
        }
        let (db, de) = (w.dim_b().pow(n), w.dim_e().pow(n));
        if let Some(d) = &code.decoder {
            if d[0].nrows() != db {
                return Err(Error::Dimension(format!("decoder acts on dimension {}, Bⁿ has {db}", d[0].nrows())));
            }
        }
        let mut cache: Vec<Option<ComplexMatrix>> = vec![None; code.encoder[0].len()];
        let mut conditional = Vec::with_capacity(code.m);
        for row in &code.encoder {
            let mut acc = DMatrix::zeros(db * de, db * de);
            for (i, &p) in row.iter().enumerate() {
                if p == 0.0 {
                    continue;
                }
                if cache[i].is_none() {
                    cache[i] = Some(block_state(w, &string_letters(i, code.alphabet, code.n))?);
                }
                acc += cache[i].as_ref().unwrap() * c(p);
            }
            conditional.push(acc);
        }
        Ok(CodeState { m: code.m, dim_b: db, dim_e: de, conditional })
    }

    pub fn bob(&self) -> Vec<ComplexMatrix> {
        self.conditional.iter().map(|r| linalg::partial_trace(r, &[self.dim_b, self.dim_e], &[0]).unwrap()).collect()
    }

    pub fn eve(&self) -> Vec<ComplexMatrix> {
        self.conditional.iter().map(|r| linalg::partial_trace(r, &[self.dim_b, self.dim_e], &[1]).unwrap()).collect()
    }

    /// `(1/M) Σ_u |u⟩⟨u| ⊗ X_u`.
    fn classical_register(&self, blocks: &[ComplexMatrix]) -> DensityOperator {
        let d = blocks[0].nrows();
        let mut out = DMatrix::zeros(self.m * d, self.m * d);
        for (u, b) in blocks.iter().enumerate() {
            out.view_mut((u * d, u * d), (d, d)).copy_from(&(b * c(1.0 / self.m as f64)));
        }
        DensityOperator::from_parts(linalg::hermitian_part(&out), vec![self.m, d])
    }

    /// `ρ^{UBⁿ}`.
    pub fn u_b(&self) -> DensityOperator {
        self.classical_register(&self.bob())
    }

    /// `ρ^{UEⁿ}`.
    pub fn u_e(&self) -> DensityOperator {
        self.classical_register(&self.eve())
    }

    /// `ρ^{UÛEⁿ}` with entries `(1/M) tr_{Bⁿ}[ρ_u (D_û ⊗ 1)]`.
    pub fn u_uhat_e(&self, decoder: &[ComplexMatrix]) -> DensityOperator {
        let (m, de) = (self.m, self.dim_e);
        let id_e = linalg::identity(de);
        let d = m * m * de;
        let mut out = DMatrix::zeros(d, d);
        for (u, r) in self.conditional.iter().enumerate() {
            for (uh, povm) in decoder.iter().enumerate() {
                let e = linalg::partial_trace(&(linalg::kron(povm, &id_e) * r), &[self.dim_b, de], &[1]).unwrap();
                let k = (u * m + uh) * de;
                out.view_mut((k, k), (de, de)).copy_from(&(e * c(1.0 / m as f64)));
            }
        }
        DensityOperator::from_parts(linalg::hermitian_part(&out), vec![m, m, de])
    }

    /// `P(û|u) = tr(D_û ρ_u^{Bⁿ})`, rows `u`.
    pub fn confusion(&self, decoder: &[ComplexMatrix]) -> Vec<Vec<f64>> {
        self.bob()
            .iter()
            .map(|rb| decoder.iter().map(|d| (d * rb).trace().re).collect())
            .collect()
    }
}

/// `ρ^{UÛEⁿ}` of a code (dims `[M, M, d_Eⁿ]`), with the code's own decoder
/// or, when it has none, the optimal one.
pub fn joint_state(code: &WiretapCode, w: &CqqWiretapChannel) -> Result<DensityOperator, Error> {
    let st = CodeState::new(code, w, budget_dim())?;
    let dec = match &code.decoder {
        Some(d) => d.clone(),
        None => optimal_decoder(code, w)?,
    };
    Ok(st.u_uhat_e(&dec))
}

/// POVM maximizing the average probability of decoding the message correctly.
pub fn optimal_decoder(code: &WiretapCode, w: &CqqWiretapChannel) -> Result<Vec<ComplexMatrix>, Error> {
    let st = CodeState::new(code, w, budget_dim())?;
    decoder_for_states(&st.bob())
}

/// Discrimination program `max (1/M) Σ tr(D_u ρ_u)` over POVMs.
pub fn decoder_for_states(states: &[ComplexMatrix]) -> Result<Vec<ComplexMatrix>, Error> {
    let m = states.len();
    let d = states[0].nrows();
    if m == 1 {
        return Ok(vec![linalg::identity(d)]);
    }
    let mut p = SdpProblem::new();
    let blocks: Vec<BlockId> = (0..m).map(|_| p.add_block(BlockKind::Hermitian(d))).collect();
    for (b, r) in blocks.iter().zip(states) {
        p.objective_mut().dense(*b, r, -1.0 / m as f64);
    }
    hermitian_equation(&mut p, d, &linalg::identity(d), |f, r, col, re| {
        for &b in &blocks {
            add_product(f, b, r, col, c(1.0), re, 1.0);
        }
    });
    let sol = solve(&p, &Tolerances::default())?;
    if sol.status != SdpStatus::Optimal {
        return Err(Error::Solver(format!("decoder program ended with {:?}", sol.status)));
    }
    let raw: Vec<ComplexMatrix> = blocks.iter().map(|&b| sol.block(b).hermitian().unwrap().clone()).collect();
    Ok(polish_povm(&raw))
}

/// Rounds eigenvalues within 1e-7 of 0 or 1, clips negatives and restores
/// completeness exactly.
fn polish_povm(raw: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
    let rounded: Vec<ComplexMatrix> = raw
        .iter()
        .map(|e| {
            linalg::funm(&linalg::hermitian_part(e), |x| {
                if x < 1e-7 {
                    0.0
                } else if (x - 1.0).abs() < 1e-7 {
                    1.0
                } else {
                    x
                }
            })
        })
        .collect();
    let d = rounded[0].nrows();
    let mut s = DMatrix::zeros(d, d);
    for e in &rounded {
        s += e;
    }
    let inv = linalg::funm(&s, |x| if x > 1e-12 { 1.0 / x.sqrt() } else { 0.0 });
    let mut out: Vec<ComplexMatrix> = rounded.iter().map(|e| linalg::hermitian_part(&(&inv * e * &inv))).collect();
    // a zero-weight direction of s (never hit in practice) goes to the first element
    let fix = linalg::identity(d) - out.iter().fold(DMatrix::zeros(d, d), |a, e| a + e);
    out[0] += linalg::hermitian_part(&fix);
    out
}

/// How the reference state `ρ̃^{Eⁿ}` of the privacy error is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PrivacyMode {
    /// `ρ̃ = ρ^{Eⁿ}`, the actual marginal.
    Fixed,
    /// `ρ̃` minimizing the purified distance.
    #[default]
    Optimized,
}

#[derive(Clone, Debug)]
pub struct CodePerformance {
    /// Transmission error `P(ρ^{UÛ}, Δ^{UÛ})`.
    pub eps: f64,
    /// Privacy error for the requested mode.
    pub delta: f64,
    pub mode: PrivacyMode,
    pub delta_fixed: f64,
    pub delta_optimized: Option<f64>,
    pub rate: f64,
    pub success_probability: f64,
    pub decoder: Vec<ComplexMatrix>,
    /// Reference state `ρ̃^{Eⁿ}` behind `delta`.
    pub reference: ComplexMatrix,
}

fn pd(f: f64) -> f64 {
    (1.0 - f.min(1.0).powi(2)).max(0.0).sqrt()
}

/// Largest `(1/M) Σ_u F(ρ_u, σ)` over states `σ`, with its maximizer.
pub fn best_reference_state(states: &[ComplexMatrix]) -> Result<(f64, ComplexMatrix), Error> {
    let m = states.len();
    let d = states[0].nrows();
    if d == 1 {
        let one = linalg::identity(1);
        let f = states.iter().map(|r| fidelity_plain(r, &one)).sum::<f64>() / m as f64;
        return Ok((f, one));
    }
    let mut p = SdpProblem::new();
    let sigma = p.add_block(BlockKind::Hermitian(d));
    p.add_constraint(
        {
            let mut f = secrecy_sdp::LinearForm::new();
            f.trace(sigma, d, 1.0);
            f
        },
        1.0,
    );
    for r in states {
        // W = [[D, Y'], [Y'†, σ]] on the support of ρ_u = V D V†
        let (vals, v) = linalg::support(r, RANK_CUTOFF * linalg::trace(r).max(f64::MIN_POSITIVE));
        let k = vals.len();
        if k == 0 {
            continue;
        }
        let wb = p.add_block(BlockKind::Hermitian(k + d));
        hermitian_equation(&mut p, k, &linalg::diag(&vals), |f, a, b, re| {
            add_product(f, wb, a, b, c(1.0), re, 1.0);
        });
        hermitian_equation(&mut p, d, &DMatrix::zeros(d, d), |f, a, b, re| {
            add_product(f, wb, k + a, k + b, c(1.0), re, 1.0);
            add_product(f, sigma, a, b, c(1.0), re, -1.0);
        });
        // maximize Re tr(V Y')
        let obj = p.objective_mut();
        for i in 0..d {
            for q in 0..k {
                add_product(obj, wb, q, k + i, v[(i, q)], true, -1.0 / m as f64);
            }
        }
    }
    let sol = solve(&p, &Tolerances::default())?;
    if sol.status != SdpStatus::Optimal {
        return Err(Error::Solver(format!("reference-state program ended with {:?}", sol.status)));
    }
    let raw = sol.block(sigma).hermitian().unwrap();
    let clipped = linalg::funm(&linalg::hermitian_part(raw), |x| x.max(0.0));
    let sigma = &clipped * c(1.0 / linalg::trace(&clipped));
    let f = states.iter().map(|r| fidelity_plain(r, &sigma)).sum::<f64>() / m as f64;
    Ok((f, sigma))
}

/// Transmission and privacy errors of a code. Codes without a decoder use
/// [`optimal_decoder`].
pub fn evaluate_code(code: &WiretapCode, w: &CqqWiretapChannel, mode: PrivacyMode) -> Result<CodePerformance, Error> {
    let st = CodeState::new(code, w, budget_dim())?;
    evaluate_state(code, &st, mode)
}

pub(crate) fn evaluate_state(code: &WiretapCode, st: &CodeState, mode: PrivacyMode) -> Result<CodePerformance, Error> {
    let m = code.m;
    let decoder = match &code.decoder {
        Some(d) => d.clone(),
        None => decoder_for_states(&st.bob())?,
    };
    let conf = st.confusion(&decoder);
    // ρ^{UÛ} and Δ^{UÛ} are both diagonal
    let f_eps: f64 = (0..m).map(|u| (conf[u][u].max(0.0) / (m * m) as f64).sqrt()).sum();
    let eps = pd(f_eps);
    let success = (0..m).map(|u| conf[u][u]).sum::<f64>() / m as f64;

    let eve = st.eve();
    let mut marginal = DMatrix::zeros(st.dim_e, st.dim_e);
    for e in &eve {
        marginal += e * c(1.0 / m as f64);
    }
    let f_fixed = eve.iter().map(|e| fidelity_plain(e, &marginal)).sum::<f64>() / m as f64;
    let delta_fixed = pd(f_fixed);
    let (delta, delta_optimized, reference) = match mode {
        PrivacyMode::Fixed => (delta_fixed, None, marginal),
        PrivacyMode::Optimized => {
            let (f, sigma) = best_reference_state(&eve)?;
            if f >= f_fixed {
                (pd(f), Some(pd(f)), sigma)
            } else {
                (delta_fixed, Some(delta_fixed), marginal)
            }
        }
    };
    Ok(CodePerformance {
        eps,
        delta,
        mode,
        delta_fixed,
        delta_optimized,
        rate: code.rate(),
        success_probability: success,
        decoder,
        reference,
    })
}
