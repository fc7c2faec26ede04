//! Classical-input wiretap channels `x ↦ ρ_x^{BE}`, degradability and
//! capacities.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use secrecy_sdp::{solve, BlockKind, SdpProblem, SdpStatus, Tolerances};

use crate::channel::{stinespring, Isometry, QuantumChannel};
use crate::linalg::{self, c, ComplexMatrix};
use crate::lmi::{add_product, hermitian_equation};
use crate::state::{DensityOperator, PSD_CLIP, STATE_TOL};
use crate::Error;

/// Largest tolerated operator-norm violation for a channel to count as degraded.
pub const DEGRADE_TOL: f64 = 1e-7;
/// Choi eigenvalues below this are dropped when extracting Kraus operators.
pub const KRAUS_CUTOFF: f64 = 1e-10;

/// Validation record of one letter state.
#[derive(Clone, Debug)]
pub struct LetterDiagnostic {
    pub letter: usize,
    pub dims_ok: bool,
    pub trace: f64,
    pub hermiticity_defect: f64,
    pub min_eigenvalue: f64,
}

impl LetterDiagnostic {
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.dims_ok {
            out.push("wrong dimension".to_string());
            return out;
        }
        if self.hermiticity_defect > STATE_TOL {
            out.push(format!("not Hermitian (defect {:.3e})", self.hermiticity_defect));
        }
        if (self.trace - 1.0).abs() > STATE_TOL {
            out.push(format!("trace {} ≠ 1", self.trace));
        }
        if self.min_eigenvalue < -PSD_CLIP.max(STATE_TOL) {
            out.push(format!("negative eigenvalue {:.3e}", self.min_eigenvalue));
        }
        out
    }

    pub fn ok(&self) -> bool {
        self.problems().is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct ChannelDiagnostics {
    pub letters: Vec<LetterDiagnostic>,
}

impl ChannelDiagnostics {
    pub fn ok(&self) -> bool {
        !self.letters.is_empty() && self.letters.iter().all(|l| l.ok())
    }

    pub fn offending(&self) -> Vec<usize> {
        self.letters.iter().filter(|l| !l.ok()).map(|l| l.letter).collect()
    }

    /// `Err` listing every offending letter.
    pub fn into_result(self) -> Result<(), Error> {
        if self.letters.is_empty() {
            return Err(Error::InvalidChannel("empty input alphabet".into()));
        }
        let msgs: Vec<String> = self
            .letters
            .iter()
            .filter(|l| !l.ok())
            .map(|l| format!("letter {}: {}", l.letter, l.problems().join(", ")))
            .collect();
        if msgs.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidChannel(msgs.join("; ")))
        }
    }
}

/// Per-letter PSD, trace and dimension checks of candidate states on `B ⊗ E`.
pub fn validate_channel(states: &[ComplexMatrix], dim_b: usize, dim_e: usize) -> ChannelDiagnostics {
    let d = dim_b * dim_e;
    let letters = states
        .iter()
        .enumerate()
        .map(|(x, m)| {
            if m.nrows() != d || m.ncols() != d || d == 0 {
                return LetterDiagnostic {
                    letter: x,
                    dims_ok: false,
                    trace: f64::NAN,
                    hermiticity_defect: f64::NAN,
                    min_eigenvalue: f64::NAN,
                };
            }
            let h = linalg::hermitian_part(m);
            LetterDiagnostic {
                letter: x,
                dims_ok: true,
                trace: linalg::trace(m),
                hermiticity_defect: linalg::hermiticity_defect(m),
                min_eigenvalue: linalg::eigvalsh(&h).first().copied().unwrap_or(0.0),
            }
        })
        .collect();
    ChannelDiagnostics { letters }
}

/// `W: x ↦ ρ_x^{BE}` with a finite input alphabet.
#[derive(Clone, Debug)]
pub struct CqqWiretapChannel {
    states: Vec<DensityOperator>,
    dim_b: usize,
    dim_e: usize,
}

impl CqqWiretapChannel {
    pub fn new(states: Vec<ComplexMatrix>, dim_b: usize, dim_e: usize) -> Result<Self, Error> {
        validate_channel(&states, dim_b, dim_e).into_result()?;
        let states = states
            .into_iter()
            .map(|m| DensityOperator::new(m, vec![dim_b, dim_e]))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CqqWiretapChannel { states, dim_b, dim_e })
    }

    pub fn from_states(states: Vec<DensityOperator>) -> Result<Self, Error> {
        let dims = states.first().map(|s| s.dims().to_vec()).unwrap_or_default();
        let [b, e] = dims[..] else {
            return Err(Error::InvalidChannel("letter states must be bipartite B ⊗ E".into()));
        };
        Self::new(states.into_iter().map(|s| s.into_matrix()).collect(), b, e)
    }

    /// Commuting embedding of a classical channel `p[x][b][e] = P(b, e | x)`.
    pub fn classical(p: &[Vec<Vec<f64>>]) -> Result<Self, Error> {
        let dim_b = p.first().map_or(0, |r| r.len());
        let dim_e = p.first().and_then(|r| r.first()).map_or(0, |r| r.len());
        let mut states = Vec::with_capacity(p.len());
        for (x, table) in p.iter().enumerate() {
            if table.len() != dim_b || table.iter().any(|r| r.len() != dim_e) {
                return Err(Error::InvalidChannel(format!("letter {x}: ragged probability table")));
            }
            let flat: Vec<f64> = table.iter().flatten().copied().collect();
            states.push(linalg::diag(&flat));
        }
        Self::new(states, dim_b, dim_e)
    }

    pub fn alphabet(&self) -> usize {
        self.states.len()
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dim_e(&self) -> usize {
        self.dim_e
    }

    pub fn states(&self) -> &[DensityOperator] {
        &self.states
    }

    pub fn bob_states(&self) -> Vec<DensityOperator> {
        self.states.iter().map(|s| s.partial_trace(&[0]).expect("bipartite")).collect()
    }

    pub fn eve_states(&self) -> Vec<DensityOperator> {
        self.states.iter().map(|s| s.partial_trace(&[1]).expect("bipartite")).collect()
    }
}

/// A certified degrading map and its dilation `V: B → E′ ⊗ F`.
#[derive(Clone, Debug)]
pub struct DegradedStructure {
    pub channel: QuantumChannel,
    pub dilation: Isometry,
    pub dim_e_prime: usize,
    pub dim_f: usize,
    /// `max_x ‖tr_F(V ρ_x^B V†) − ρ_x^E‖₁`.
    pub residual: f64,
}

/// Evidence that no degrading map exists.
#[derive(Clone, Debug)]
pub struct InfeasibilityCertificate {
    /// Smallest achievable `max_x ‖𝒟(ρ_x^B) − ρ_x^E‖_∞` found by the solver.
    pub min_violation: f64,
    /// Dual objective: a certified lower bound on that minimum.
    pub lower_bound: f64,
    /// Dual multipliers of the violation program.
    pub multipliers: Vec<f64>,
}

#[derive(Clone, Debug)]
pub enum Degradability {
    Degraded(DegradedStructure),
    NotDegraded(InfeasibilityCertificate),
}

/// Decides whether some channel `𝒟: B → E` maps every `ρ_x^B` to `ρ_x^E`.
///
/// The program minimizes `t` over Choi operators `J ⪰ 0` with `tr_E J = 1_B`
/// and `−t·1 ⪯ 𝒟_J(ρ_x^B) − ρ_x^E ⪯ t·1`; the channel is degraded iff the
/// optimum is at most `tol`.
pub fn check_degraded(w: &CqqWiretapChannel, tol: f64) -> Result<Degradability, Error> {
    let (db, de) = (w.dim_b, w.dim_e);
    let bob = w.bob_states();
    let eve = w.eve_states();
    let mut p = SdpProblem::new();
    let j = p.add_block(BlockKind::Hermitian(db * de));
    let t = p.add_block(BlockKind::Nonneg(1));
    p.objective_mut().re_entry(t, 0, 0, 1.0);

    hermitian_equation(&mut p, db, &linalg::identity(db), |f, r, col, re| {
        for e in 0..de {
            add_product(f, j, r * de + e, col * de + e, c(1.0), re, 1.0);
        }
    });
    for (rb, re_state) in bob.iter().zip(&eve) {
        for sign in [1.0, -1.0] {
            // t·1 − sign·(𝒟(ρ) − ρ^E) − S = 0
            let s = p.add_block(BlockKind::Hermitian(de));
            let rhs = re_state.matrix() * c(-sign);
            hermitian_equation(&mut p, de, &rhs, |f, o1, o2, re| {
                if re && o1 == o2 {
                    f.re_entry(t, 0, 0, 1.0);
                }
                for a in 0..db {
                    for b in 0..db {
                        let z = rb.matrix()[(a, b)];
                        if z.norm() > 0.0 {
                            add_product(f, j, a * de + o1, b * de + o2, z, re, -sign);
                        }
                    }
                }
                add_product(f, s, o1, o2, c(1.0), re, -1.0);
            });
        }
    }
    let sol = solve(&p, &Tolerances::default())?;
    if sol.status != SdpStatus::Optimal {
        return Err(Error::Solver(format!("degradability program ended with {:?}", sol.status)));
    }
    let violation = sol.primal_value.max(0.0);
    if violation > tol {
        return Ok(Degradability::NotDegraded(InfeasibilityCertificate {
            min_violation: violation,
            lower_bound: sol.dual_value,
            multipliers: sol.dual.iter().copied().collect(),
        }));
    }
    let choi = sol.block(j).hermitian().expect("Hermitian block").clone();
    let channel = QuantumChannel::from_choi(&choi, db, de, KRAUS_CUTOFF)?;
    let mut dilation = degraded_dilation(&channel);
    let mut residual = dilation_residual(&dilation, &bob, &eve)?;
    let mut channel = channel;
    if let Some(polished) = polish_choi(&choi, &bob, &eve) {
        let polished = QuantumChannel::from_choi(&polished, db, de, KRAUS_CUTOFF)?;
        let polished_dilation = degraded_dilation(&polished);
        let polished_residual = dilation_residual(&polished_dilation, &bob, &eve)?;
        if polished_residual < residual {
            (channel, dilation, residual) = (polished, polished_dilation, polished_residual);
        }
    }
    Ok(Degradability::Degraded(DegradedStructure {
        dim_e_prime: de,
        dim_f: dilation.out_dims()[1],
        channel,
        dilation,
        residual,
    }))
}

/// Gauss-Newton refinement of an approximate Choi operator onto the affine
/// set `tr_E J = 1_B`, `𝒟_J(ρ_x^B) = ρ_x^E`, through a factorization
/// `J = K K†` on the numerical rank of the input (so positivity is kept).
fn polish_choi(choi: &ComplexMatrix, bob: &[DensityOperator], eve: &[DensityOperator]) -> Option<ComplexMatrix> {
    let (db, de) = (bob[0].matrix().nrows(), eve[0].matrix().nrows());
    let d = db * de;
    let top = linalg::eigvalsh(choi).into_iter().fold(0.0, f64::max);
    let (vals, v) = linalg::support(choi, 1e-6 * top);
    let r = v.ncols();
    let mut k = DMatrix::from_fn(d, r, |i, j| v[(i, j)] * vals[j].sqrt());
    let constraints = |j: &ComplexMatrix| {
        let mut out = Vec::new();
        let mut push = |m: &ComplexMatrix| {
            for z in m.iter() {
                out.push(z.re);
                out.push(z.im);
            }
        };
        push(&DMatrix::from_fn(db, db, |r, col| (0..de).map(|e| j[(r * de + e, col * de + e)]).sum()));
        for rb in bob {
            push(&DMatrix::from_fn(de, de, |o1, o2| {
                let mut z = c(0.0);
                for a in 0..db {
                    for b in 0..db {
                        z += rb.matrix()[(a, b)] * j[(a * de + o1, b * de + o2)];
                    }
                }
                z
            }));
        }
        DVector::from_vec(out)
    };
    let target: Vec<f64> =
        linalg::identity(db).iter().chain(eve.iter().flat_map(|e| e.matrix().iter())).flat_map(|z| [z.re, z.im]).collect();
    let target = DVector::from_vec(target);
    // real coordinates of a step δ ∈ C^{d×r}: real parts, then imaginary parts
    let step = |x: &DVector<f64>| DMatrix::from_fn(d, r, |i, j| Complex64::new(x[j * d + i], x[d * r + j * d + i]));
    for _ in 0..6 {
        let f = constraints(&(&k * k.adjoint())) - &target;
        if f.amax() < 1e-15 {
            break;
        }
        let cols: Vec<DVector<f64>> = (0..2 * d * r)
            .map(|t| {
                let delta = step(&DVector::from_fn(2 * d * r, |i, _| if i == t { 1.0 } else { 0.0 }));
                constraints(&(&k * delta.adjoint() + &delta * k.adjoint()))
            })
            .collect();
        let jac = DMatrix::from_columns(&cols);
        let dx = jac.pseudo_inverse(1e-12).ok()? * f;
        k -= step(&dx);
    }
    Some(&k * k.adjoint())
}

/// Stinespring dilation `V: B → E′ ⊗ F` of a degrading map; `dim F` is the
/// number of Kraus operators.
pub fn degraded_dilation(d: &QuantumChannel) -> Isometry {
    stinespring(d)
}

fn dilation_residual(v: &Isometry, bob: &[DensityOperator], eve: &[DensityOperator]) -> Result<f64, Error> {
    let mut worst: f64 = 0.0;
    for (rb, re) in bob.iter().zip(eve) {
        let out = v.apply(rb)?.partial_trace(&[0])?;
        worst = worst.max(linalg::trace_norm(&(out.matrix() - re.matrix())));
    }
    Ok(worst)
}

/// Convergence evidence of a capacity optimization.
#[derive(Clone, Debug)]
pub struct Certificate {
    /// Norm of the projected-gradient step at the returned point.
    pub gradient_norm: f64,
    /// Values reached by the individual starts.
    pub start_values: Vec<f64>,
    /// Best value on the step-1e-4 grid (binary alphabets only).
    pub grid_value: Option<f64>,
    /// The value is only a lower bound on the optimum (nonconcave objective).
    pub lower_bound_only: bool,
}

impl Certificate {
    /// Spread between the best and worst start.
    pub fn start_spread(&self) -> f64 {
        let hi = self.start_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = self.start_values.iter().copied().fold(f64::INFINITY, f64::min);
        if self.start_values.is_empty() {
            0.0
        } else {
            hi - lo
        }
    }
}

#[derive(Clone, Debug)]
pub struct CapacityResult {
    /// Bits per channel use.
    pub value: f64,
    /// Optimal input distribution `P_X`.
    pub distribution: Vec<f64>,
    /// Optimal joint `P_{UX}` (rows `u`) for the auxiliary-variable formula.
    pub joint: Option<Vec<Vec<f64>>>,
    pub certificate: Certificate,
}

/// `−tr X log X` of a PSD matrix (eigenvalues below zero ignored).
fn entropy_unnormalized(m: &ComplexMatrix) -> f64 {
    linalg::eigvalsh(m).into_iter().filter(|&v| v > 0.0).map(|v| -v * v.log2()).sum()
}

/// `S(F|E′)` of a (possibly unnormalized) operator on `E′ ⊗ F`.
fn cond_entropy_unnormalized(m: &ComplexMatrix, de: usize, df: usize) -> f64 {
    let e = linalg::partial_trace(m, &[de, df], &[0]).expect("consistent dims");
    entropy_unnormalized(m) - entropy_unnormalized(&e)
}

fn mix(ms: &[ComplexMatrix], p: &[f64]) -> ComplexMatrix {
    let d = ms[0].nrows();
    let mut acc = DMatrix::zeros(d, d);
    for (m, &w) in ms.iter().zip(p) {
        if w != 0.0 {
            acc += m * c(w);
        }
    }
    acc
}

const FD_STEP: f64 = 1e-6;
const MIN_IMPROVEMENT: f64 = 1e-10;
const GRID_STEP: f64 = 1e-4;

/// Euclidean projection onto the probability simplex.
fn project_simplex(y: &[f64]) -> Vec<f64> {
    let mut u = y.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut acc = 0.0;
    let mut theta = 0.0;
    for (k, &v) in u.iter().enumerate() {
        acc += v;
        let t = (acc - 1.0) / (k + 1) as f64;
        if v - t > 0.0 {
            theta = t;
        }
    }
    y.iter().map(|&v| (v - theta).max(0.0)).collect()
}

fn gradient(f: &impl Fn(&[f64]) -> f64, p: &[f64]) -> Vec<f64> {
    let mut q = p.to_vec();
    (0..p.len())
        .map(|i| {
            let x = p[i];
            let g = if x >= FD_STEP {
                q[i] = x + FD_STEP;
                let up = f(&q);
                q[i] = x - FD_STEP;
                let down = f(&q);
                (up - down) / (2.0 * FD_STEP)
            } else {
                q[i] = x + FD_STEP;
                let up = f(&q);
                q[i] = x;
                (up - f(&q)) / FD_STEP
            };
            q[i] = x;
            g
        })
        .collect()
}

fn step_norm(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Projected gradient ascent with step halving. Returns the point, its value
/// and the final projected-gradient norm.
fn ascend(f: &impl Fn(&[f64]) -> f64, start: Vec<f64>) -> (Vec<f64>, f64, f64) {
    let mut p = project_simplex(&start);
    let mut val = f(&p);
    let mut step = 1.0;
    for _ in 0..10_000 {
        let g = gradient(f, &p);
        let mut accepted = None;
        let mut s = step;
        while s > 1e-14 {
            let y: Vec<f64> = p.iter().zip(&g).map(|(x, gi)| x + s * gi).collect();
            let cand = project_simplex(&y);
            let v = f(&cand);
            if v > val {
                accepted = Some((cand, v, s));
                break;
            }
            s *= 0.5;
        }
        match accepted {
            Some((cand, v, s)) => {
                let gain = v - val;
                p = cand;
                val = v;
                step = (2.0 * s).min(1e3);
                if gain < MIN_IMPROVEMENT {
                    break;
                }
            }
            None => break,
        }
    }
    let g = gradient(f, &p);
    let y: Vec<f64> = p.iter().zip(&g).map(|(x, gi)| x + gi).collect();
    let gn = step_norm(&project_simplex(&y), &p);
    (p, val, gn)
}

fn random_simplex_point(k: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| -rng.random_range(1e-12..1.0f64).ln()).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / s).collect()
}

/// Concave maximization over the simplex of size `k`: grid search for `k = 2`
/// plus seeded multistart ascent.
fn maximize_concave(f: impl Fn(&[f64]) -> f64, k: usize, seed: u64) -> (Vec<f64>, f64, Certificate) {
    if k == 1 {
        let v = f(&[1.0]);
        let cert = Certificate { gradient_norm: 0.0, start_values: vec![v], grid_value: None, lower_bound_only: false };
        return (vec![1.0], v, cert);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts = vec![vec![1.0 / k as f64; k]];
    while starts.len() < 5 {
        starts.push(random_simplex_point(k, &mut rng));
    }
    let mut grid_value = None;
    let mut grid_best = None;
    if k == 2 {
        let steps = (1.0 / GRID_STEP).round() as usize;
        let (mut bp, mut bv) = (0.0, f64::NEG_INFINITY);
        for i in 0..=steps {
            let q = i as f64 * GRID_STEP;
            let v = f(&[q, 1.0 - q]);
            if v > bv {
                bv = v;
                bp = q;
            }
        }
        grid_value = Some(bv);
        grid_best = Some((vec![bp, 1.0 - bp], bv));
    }
    let mut best: Option<(Vec<f64>, f64, f64)> = None;
    let mut start_values = Vec::new();
    for s in starts {
        let (p, v, gn) = ascend(&f, s);
        start_values.push(v);
        if best.as_ref().is_none_or(|b| v > b.1) {
            best = Some((p, v, gn));
        }
    }
    let (mut p, mut v, gn) = best.expect("at least one start");
    if let Some((gp, gv)) = grid_best {
        if gv > v {
            p = gp;
            v = gv;
        }
    }
    (p, v, Certificate { gradient_norm: gn, start_values, grid_value, lower_bound_only: false })
}

/// `P_X ↦ I(X:F|E′)` of the state `Σ_x P(x) |x⟩⟨x| ⊗ V ρ_x^B V†`.
fn degraded_objective(
    w: &CqqWiretapChannel,
    structure: &DegradedStructure,
) -> Result<impl Fn(&[f64]) -> f64, Error> {
    let (de, df) = (structure.dim_e_prime, structure.dim_f);
    let omegas: Vec<ComplexMatrix> = w
        .bob_states()
        .iter()
        .map(|rb| structure.dilation.apply(rb).map(|o| o.into_matrix()))
        .collect::<Result<_, _>>()?;
    let letter: Vec<f64> = omegas.iter().map(|o| cond_entropy_unnormalized(o, de, df)).collect();
    Ok(move |p: &[f64]| {
        let avg: f64 = p.iter().zip(&letter).map(|(a, b)| a * b).sum();
        cond_entropy_unnormalized(&mix(&omegas, p), de, df) - avg
    })
}

/// `I(X:F|E′)` at input distribution `p` for a degraded channel.
pub fn private_rate_degraded(w: &CqqWiretapChannel, structure: &DegradedStructure, p: &[f64]) -> Result<f64, Error> {
    if p.len() != w.alphabet() || p.iter().any(|&x| x < 0.0) || (p.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(Error::Domain("input distribution must be a probability vector over the alphabet".into()));
    }
    Ok(degraded_objective(w, structure)?(p))
}

/// `max_{P_X} I(X:F|E′)` for a degraded channel, with `ω_x = V ρ_x^B V†`.
pub fn private_capacity_degraded(w: &CqqWiretapChannel, structure: &DegradedStructure) -> Result<CapacityResult, Error> {
    let f = degraded_objective(w, structure)?;
    let (p, v, cert) = maximize_concave(f, w.alphabet(), 0x5eed);
    Ok(CapacityResult { value: v, distribution: p, joint: None, certificate: cert })
}

/// Holevo capacity `max_{P_X} S(Σ P(x)ρ_x) − Σ P(x) S(ρ_x)` of `x ↦ ρ_x`.
pub fn classical_capacity_cq(states: &[DensityOperator]) -> Result<CapacityResult, Error> {
    if states.is_empty() {
        return Err(Error::InvalidChannel("empty input alphabet".into()));
    }
    let d = states[0].dim();
    if states.iter().any(|s| s.dim() != d) {
        return Err(Error::Dimension("letter states differ in dimension".into()));
    }
    let ms: Vec<ComplexMatrix> = states.iter().map(|s| s.matrix().clone()).collect();
    let letter: Vec<f64> = ms.iter().map(entropy_unnormalized).collect();
    let f = |p: &[f64]| {
        let avg: f64 = p.iter().zip(&letter).map(|(a, b)| a * b).sum();
        entropy_unnormalized(&mix(&ms, p)) - avg
    };
    let (p, v, cert) = maximize_concave(f, states.len(), 0xc1a5);
    Ok(CapacityResult { value: v, distribution: p, joint: None, certificate: cert })
}

/// Best value of `I(U:B) − I(U:E)` found over joint distributions `P_{UX}`
/// with `|U| = aux_size`. A lower bound on the one-letter private capacity.
pub fn p1_general_lower_bound(
    w: &CqqWiretapChannel,
    aux_size: usize,
    multistarts: usize,
    seed: u64,
) -> Result<CapacityResult, Error> {
    if aux_size == 0 {
        return Err(Error::Domain("auxiliary alphabet must be nonempty".into()));
    }
    let nx = w.alphabet();
    let bob: Vec<ComplexMatrix> = w.bob_states().into_iter().map(|s| s.into_matrix()).collect();
    let eve: Vec<ComplexMatrix> = w.eve_states().into_iter().map(|s| s.into_matrix()).collect();
    // With unnormalized conditional states ρ̃_u = Σ_x P(u,x) ρ_x, the p_u log p_u
    // terms of both mutual informations cancel.
    let f = |q: &[f64]| {
        let holevo = |ms: &[ComplexMatrix]| {
            let mut total = entropy_unnormalized(&mix(ms, &sum_rows(q, aux_size, nx)));
            for u in 0..aux_size {
                total -= entropy_unnormalized(&mix(ms, &q[u * nx..(u + 1) * nx]));
            }
            total
        };
        holevo(&bob) - holevo(&eve)
    };
    let k = aux_size * nx;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts = Vec::new();
    if aux_size >= nx {
        // U = X with uniform input
        let mut s = vec![0.0; k];
        for x in 0..nx {
            s[x * nx + x] = 1.0 / nx as f64;
        }
        starts.push(s);
    }
    // constant U, worth exactly zero
    let mut s = vec![0.0; k];
    s[..nx].fill(1.0 / nx as f64);
    starts.push(s);
    starts.push(vec![1.0 / k as f64; k]);
    while starts.len() < multistarts.max(1) {
        starts.push(random_simplex_point(k, &mut rng));
    }
    let mut best: Option<(Vec<f64>, f64, f64)> = None;
    let mut start_values = Vec::new();
    for s in starts {
        let (p, v, gn) = ascend(&f, s);
        start_values.push(v);
        if best.as_ref().is_none_or(|b| v > b.1) {
            best = Some((p, v, gn));
        }
    }
    let (q, v, gn) = best.expect("at least one start");
    let joint: Vec<Vec<f64>> = (0..aux_size).map(|u| q[u * nx..(u + 1) * nx].to_vec()).collect();
    Ok(CapacityResult {
        value: v,
        distribution: sum_rows(&q, aux_size, nx),
        joint: Some(joint),
        certificate: Certificate { gradient_norm: gn, start_values, grid_value: None, lower_bound_only: true },
    })
}

/// Marginal `P_X` of a row-major `P_{UX}`.
fn sum_rows(q: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    (0..cols).map(|x| (0..rows).map(|u| q[u * cols + x]).sum()).collect()
}
