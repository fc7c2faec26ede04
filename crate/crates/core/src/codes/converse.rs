//! Converse bounds: the one-shot entropic bound of a code, a line-by-line
//! audit of the privacy bound on degraded channels, and the assembled
//! finite-blocklength bound.

use nalgebra::DMatrix;

use super::{budget_dim, evaluate_state, string_letters, CodeState, PrivacyMode, WiretapCode};
use crate::entropy::EntropyQuery;
use crate::linalg::{self, c, ComplexMatrix};
use crate::state::{DensityOperator, RANK_CUTOFF};
use crate::wiretap::{private_capacity_degraded, CqqWiretapChannel, DegradedStructure};
use crate::Error;

/// Default constant `c_h` of the `c_h log(n+1)` surcharge paid by general
/// (non-constant-type) encoders for hashing out the type information.
pub const HASHING_CONSTANT: f64 = 2.0;

/// `H_min^ε(A|B)`, `+∞` once the smoothing ball reaches the zero operator.
fn hmin(rho: &DensityOperator, eps: f64) -> Result<f64, Error> {
    if eps >= 1.0 {
        return Ok(f64::INFINITY);
    }
    EntropyQuery::bipartite(rho, eps.max(0.0))?.h_min_smooth()
}

/// `H_max^ε(A|B)`, `−∞` once the smoothing ball reaches the zero operator.
fn hmax(rho: &DensityOperator, eps: f64) -> Result<f64, Error> {
    if eps >= 1.0 {
        return Ok(f64::NEG_INFINITY);
    }
    EntropyQuery::bipartite(rho, eps.max(0.0))?.h_max_smooth()
}

/// `H_min^{δ*}(U|Eⁿ) − H_max^{ε*}(U|Bⁿ)` at the measured errors of the code.
pub fn trivial_converse_bound(code: &WiretapCode, w: &CqqWiretapChannel, mode: PrivacyMode) -> Result<f64, Error> {
    let st = CodeState::new(code, w, budget_dim())?;
    let perf = evaluate_state(code, &st, mode)?;
    let a = hmin(&st.u_e(), perf.delta)?;
    let b = hmax(&st.u_b(), perf.eps)?;
    Ok(a - b)
}

/// One line of the privacy-bound chain, `lhs ≤ rhs` (or `=` for the
/// degradability substitution).
#[derive(Clone, Debug)]
pub struct ChainLine {
    pub label: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`, or `−|rhs − lhs|` for an equality.
    pub slack: f64,
    pub holds: bool,
}

impl ChainLine {
    fn new(label: &'static str, lhs: f64, rhs: f64, equality: bool) -> Self {
        let mut slack = if equality { -(rhs - lhs).abs() } else { rhs - lhs };
        if slack.is_nan() {
            // both sides infinite in the same direction
            slack = if equality { 0.0 } else { f64::INFINITY };
        }
        ChainLine { label, lhs, rhs, slack, holds: slack >= -crate::entropy::CHECK_TOL }
    }
}

#[derive(Clone, Debug)]
pub struct ChainReport {
    pub eps: f64,
    pub delta: f64,
    pub eta: f64,
    pub lambda: f64,
    pub lines: Vec<ChainLine>,
}

impl ChainReport {
    pub fn holds(&self) -> bool {
        self.lines.iter().all(|l| l.holds)
    }
}

/// Applies `V^{⊗n}` to an operator on `Bⁿ`, ordering the output `E′ⁿ Fⁿ`.
fn dilate(v: &ComplexMatrix, dims: [usize; 2], n: usize, rho_b: &ComplexMatrix) -> Result<ComplexMatrix, Error> {
    let vn = (1..n).fold(v.clone(), |acc, _| linalg::kron(&acc, v));
    let out = &vn * rho_b * vn.adjoint();
    let fdims: Vec<usize> = (0..n).flat_map(|_| dims).collect();
    let order: Vec<usize> = (0..n).map(|k| 2 * k).chain((0..n).map(|k| 2 * k + 1)).collect();
    linalg::permute(&out, &fdims, &order)
}

/// `Σ_k |k⟩⟨k| ⊗ X_k` (weights already inside the blocks), register first.
fn classical_sum(blocks: &[ComplexMatrix]) -> ComplexMatrix {
    let d = blocks[0].nrows();
    let k = blocks.len();
    let mut out = DMatrix::zeros(k * d, k * d);
    for (i, b) in blocks.iter().enumerate() {
        out.view_mut((i * d, i * d), (d, d)).copy_from(b);
    }
    out
}

fn state(m: ComplexMatrix, dims: Vec<usize>) -> Result<DensityOperator, Error> {
    DensityOperator::new(linalg::hermitian_part(&m), dims)
}

/// Evaluates every step of the privacy bound on the dilated code state
/// `ω^{UXⁿE′ⁿFⁿEⁿ}` of a degraded channel:
///
/// 1. `H_min^δ(U|Eⁿ) = H_min^δ(U|E′ⁿ)` (degradability),
/// 2. `H_min^δ(U|E′ⁿ) − H_max^ε(U|E′ⁿFⁿ) ≤ H_max^η(Fⁿ|E′ⁿ) − H_max^λ(Fⁿ|E′ⁿU) + 4 log(2/η²)`,
/// 3. the same with `H_max^λ(Fⁿ|E′ⁿXⁿ)` in place of `H_max^λ(Fⁿ|E′ⁿU)`,
/// 4. `log M` against the final expression,
///
/// with `λ = ε + 2δ + 5η` at the measured errors `ε*`, `δ*`.
pub fn audit_privacy_bound_chain(
    code: &WiretapCode,
    w: &CqqWiretapChannel,
    structure: &DegradedStructure,
    eta: f64,
) -> Result<ChainReport, Error> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::Domain(format!("η must lie in (0, 1), got {eta}")));
    }
    let n = code.blocklength();
    let st = CodeState::new(code, w, budget_dim())?;
    let perf = evaluate_state(code, &st, PrivacyMode::Optimized)?;
    let (eps, delta) = (perf.eps, perf.delta);
    let lambda = eps + 2.0 * delta + 5.0 * eta;
    let m = code.messages();
    let v = structure.dilation.matrix();
    let vd = [structure.dim_e_prime, structure.dim_f];
    let de = structure.dim_e_prime.pow(n as u32);
    let df = structure.dim_f.pow(n as u32);
    let scale = c(1.0 / m as f64);

    // per-message E′F blocks
    let omega_u: Vec<ComplexMatrix> =
        st.bob().iter().map(|rb| dilate(v, vd, n, rb).map(|o| o * scale)).collect::<Result<_, _>>()?;
    // per-string E′F blocks, only strings in use
    let words = code.encoder()[0].len();
    let mut omega_x = Vec::new();
    for i in 0..words {
        let p: f64 = code.encoder().iter().map(|row| row[i]).sum::<f64>() / m as f64;
        if p <= 0.0 {
            continue;
        }
        let letters = string_letters(i, code.alphabet(), n);
        let bob: Vec<ComplexMatrix> = letters.iter().map(|&x| w.bob_states()[x].matrix().clone()).collect();
        omega_x.push(dilate(v, vd, n, &linalg::kron_all(&bob))? * c(p));
    }

    let ue = st.u_e();
    let ue_prime: Vec<ComplexMatrix> =
        omega_u.iter().map(|o| linalg::partial_trace(o, &[de, df], &[0])).collect::<Result<_, _>>()?;
    let ue_prime = state(classical_sum(&ue_prime), vec![m, de])?;
    let u_ef = state(classical_sum(&omega_u), vec![m, de * df])?;
    // F first, then the conditioning registers
    let f_e = |blocks: &[ComplexMatrix]| -> Result<DensityOperator, Error> {
        let joint = classical_sum(blocks);
        let k = blocks.len();
        let perm = linalg::permute(&joint, &[k, de, df], &[2, 1, 0])?;
        state(perm, vec![df, de * k])
    };
    let fe = {
        let total = omega_u.iter().fold(DMatrix::zeros(de * df, de * df), |a, o| a + o);
        state(linalg::permute(&total, &[de, df], &[1, 0])?, vec![df, de])?
    };
    let feu = f_e(&omega_u)?;
    let fex = f_e(&omega_x)?;

    let h_min_e = hmin(&ue, delta)?;
    let h_min_eprime = hmin(&ue_prime, delta)?;
    let h_max_u = hmax(&u_ef, eps)?;
    let h_max_f = hmax(&fe, eta)?;
    let h_max_fu = hmax(&feu, lambda)?;
    let h_max_fx = hmax(&fex, lambda)?;
    let cost = 4.0 * (2.0 / (eta * eta)).log2();

    let x2 = h_min_eprime - h_max_u;
    let x3 = h_max_f - h_max_fu + cost;
    let x4 = h_max_f - h_max_fx + cost;
    let lines = vec![
        ChainLine::new("degradability", h_min_e, h_min_eprime, true),
        ChainLine::new("chain rule", x2, x3, false),
        ChainLine::new("data processing", x3, x4, false),
        ChainLine::new("privacy bound", (m as f64).log2(), x4, false),
    ];
    Ok(ChainReport { eps, delta, eta, lambda, lines })
}

/// Knobs of [`finite_n_converse`].
#[derive(Clone, Debug)]
pub struct ConverseOptions {
    /// Override of the chain-rule slack `η`.
    pub eta: Option<f64>,
    /// Constant `c_h` of the hashing surcharge.
    pub hashing_constant: f64,
}

impl Default for ConverseOptions {
    fn default() -> Self {
        ConverseOptions { eta: None, hashing_constant: HASHING_CONSTANT }
    }
}

/// The assembled bound `B(n, ε, δ)` on `log M(n, ε, δ)` and its pieces (bits).
#[derive(Clone, Debug)]
pub struct ConverseBound {
    pub n: usize,
    pub eps: f64,
    pub delta: f64,
    /// `P(W)` and the input distribution attaining it.
    pub capacity: f64,
    pub input: Vec<f64>,
    /// Bound for general encoders.
    pub value: f64,
    /// Bound for encoders supported on one type class (no type register,
    /// no hashing surcharge).
    pub constant_type_value: f64,
    /// Slack parameters for general and constant-type encoders.
    pub eta: f64,
    pub eta_constant_type: f64,
    /// `μ` of the i.i.d. upper-bound state and the worst letter state.
    pub mu_upper: f64,
    pub mu_lower: f64,
    pub type_register_cost: f64,
    pub hashing_surcharge: f64,
    pub hashing_constant: f64,
}

/// `log ‖X⁻¹‖` on the support.
fn log_inverse_norm(m: &ComplexMatrix) -> f64 {
    let vals = linalg::eigvalsh(m);
    let top = vals.last().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
    vals.into_iter().filter(|&x| x > RANK_CUTOFF * top).fold(0.0, |acc: f64, x| acc.max((1.0 / x).log2()))
}

/// `μ_B + μ_C` of a state on `E′ ⊗ F` for `H(F|E′)`: inverse norms of the
/// `E′` marginal and of the full spectrum (the purifying system's).
fn mu_pair(omega: &ComplexMatrix, de: usize, df: usize) -> f64 {
    let e = linalg::partial_trace(omega, &[de, df], &[0]).expect("consistent dims");
    log_inverse_norm(&e) + log_inverse_norm(omega)
}

/// Penalties beyond `n P(W)` for a constant-type code with chain-rule slack
/// `η` and `λ = ε + 2δ + 5η`: the equipartition terms of both max-entropies,
/// the two min/max conversions and the chain-rule cost.
fn one_type_excess(n: usize, k: usize, eta: f64, lambda: f64, mu_upper: f64, mu_lower: f64) -> f64 {
    let nf = n as f64;
    let types = ((n + 1) as f64).powi(k as i32);
    let lambda_hat = lambda * (2.0 - lambda * lambda).sqrt();
    // H_max^η(F|E′)_ω ≤ H_max^{η²/(32N)}(F|E′)_{Θ^⊗n} + conversion ≤ n S(F|E′)_Θ + …
    let small = eta * eta / (32.0 * types);
    let upper = mu_upper * (nf * (2.0 / small).ln()).sqrt() + (1.0 / (1.0 - (1.0 - small).powi(2))).log2();
    // H_max^λ(F|E′X)_ω ≥ H_max^λ̂ of one string ≥ H_min^{ε′} − conversion, ε′ = (1 − λ̂)/2
    let eps_low = (1.0 - lambda_hat) / 2.0;
    let lower =
        mu_lower * (nf * (2.0 / eps_low).ln()).sqrt() + (1.0 / (1.0 - ((1.0 + lambda_hat) / 2.0).powi(2))).log2();
    upper + lower + 4.0 * (2.0 / (eta * eta)).log2()
}

/// Finite-blocklength converse for a degraded channel, valid when
/// `ε + 2δ < 1`.
///
/// With `η = (1 − ε − 2δ)/6` we have `λ = ε + 2δ + 5η = 1 − η`. The bound for
/// constant-type encoders is `n P(W)` plus [`one_type_excess`]. General
/// encoders first hand the type to Eve and hash it out, which costs
/// `|𝒳| log(n+1) + c_h log(n+1)` bits and loosens both errors by `2θ`; with
/// `θ = (1 − ε − 2δ)/12` the reduced code uses `η = θ`.
///
/// `μ` values are taken at the capacity-achieving input: the upper penalty
/// uses `Θ = Σ_x P(x) ω_x`, the lower one the worst letter state in its
/// support.
pub fn finite_n_converse(
    w: &CqqWiretapChannel,
    structure: &DegradedStructure,
    n: usize,
    eps: f64,
    delta: f64,
    opts: &ConverseOptions,
) -> Result<ConverseBound, Error> {
    if !(0.0..=1.0).contains(&eps) || !(0.0..=1.0).contains(&delta) {
        return Err(Error::Domain(format!("errors must lie in [0, 1], got ε = {eps}, δ = {delta}")));
    }
    if eps + 2.0 * delta >= 1.0 {
        return Err(Error::OutsideConverseRegion { eps, delta });
    }
    if n == 0 {
        return Err(Error::Domain("blocklength must be positive".into()));
    }
    let gap = 1.0 - eps - 2.0 * delta;
    let eta1 = opts.eta.unwrap_or(gap / 6.0);
    if !(eta1 > 0.0 && eps + 2.0 * delta + 5.0 * eta1 < 1.0) {
        return Err(Error::Domain(format!("η = {eta1} must be positive with ε + 2δ + 5η < 1")));
    }
    let eta_general = opts.eta.map_or(gap / 12.0, |e| e.min(gap / 12.0));

    let cap = private_capacity_degraded(w, structure)?;
    let (de, df) = (structure.dim_e_prime, structure.dim_f);
    let omegas: Vec<ComplexMatrix> = w
        .bob_states()
        .iter()
        .map(|rb| structure.dilation.apply(rb).map(|o| o.into_matrix()))
        .collect::<Result<_, _>>()?;
    let mut theta = DMatrix::zeros(de * df, de * df);
    for (o, &p) in omegas.iter().zip(&cap.distribution) {
        theta += o * c(p);
    }
    let mu_upper = mu_pair(&theta, de, df);
    let mu_lower = omegas
        .iter()
        .zip(&cap.distribution)
        .filter(|(_, &p)| p > 0.0)
        .map(|(o, _)| mu_pair(o, de, df))
        .fold(0.0, f64::max);

    let k = w.alphabet();
    let base = n as f64 * cap.value;
    let constant = base + one_type_excess(n, k, eta1, eps + 2.0 * delta + 5.0 * eta1, mu_upper, mu_lower);
    // reduced code: errors ε + 2θ, δ + 2θ with θ = gap/12
    let lambda_general = eps + 2.0 * delta + gap / 2.0 + 5.0 * eta_general;
    let log_n1 = ((n + 1) as f64).log2();
    let type_cost = k as f64 * log_n1;
    let surcharge = opts.hashing_constant * log_n1;
    let general =
        base + one_type_excess(n, k, eta_general, lambda_general, mu_upper, mu_lower) + type_cost + surcharge;
    Ok(ConverseBound {
        n,
        eps,
        delta,
        capacity: cap.value,
        input: cap.distribution,
        value: general,
        constant_type_value: constant,
        eta: eta_general,
        eta_constant_type: eta1,
        mu_upper,
        mu_lower,
        type_register_cost: type_cost,
        hashing_surcharge: surcharge,
        hashing_constant: opts.hashing_constant,
    })
}
