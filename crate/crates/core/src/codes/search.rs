//! Desk-scale achievability: exhaustive code search, the no-go mixture
//! construction and type classes.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{budget_dim, evaluate_state, CodePerformance, CodeState, PrivacyMode, WiretapCode};
use crate::wiretap::CqqWiretapChannel;
use crate::Error;

/// Slack allowed when comparing measured errors with the targets.
const ACCEPT_TOL: f64 = 1e-6;

/// Mixes every codeword of a deterministic code with a fixed string:
/// message `u` sends `xⁿ(u)` with probability `ε²` and `x₀ⁿ` otherwise.
pub fn nogo_mixture_code(base: &WiretapCode, eps: f64, x0: &[usize]) -> Result<WiretapCode, Error> {
    if !base.is_deterministic() {
        return Err(Error::Domain("the base code must be deterministic".into()));
    }
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::Domain(format!("ε = {eps} outside [0, 1]")));
    }
    if x0.len() != base.blocklength() || x0.iter().any(|&x| x >= base.alphabet()) {
        return Err(Error::Dimension("x₀ is not a string of the code's length and alphabet".into()));
    }
    let w = eps * eps;
    let fixed = super::string_index(x0, base.alphabet());
    let encoder = (0..base.messages())
        .map(|u| {
            let mut row = vec![0.0; base.encoder()[u].len()];
            row[base.codeword(u).unwrap()] += w;
            row[fixed] += 1.0 - w;
            row
        })
        .collect();
    WiretapCode::new(base.alphabet(), base.blocklength(), encoder, base.decoder().map(|d| d.to_vec()))
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Spacing of the probability grid for stochastic encoders.
    pub grid_step: f64,
    pub max_m: usize,
    /// Stochastic codes evaluated per `M`; beyond this the grid is sampled.
    pub stochastic_limit: usize,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { grid_step: 0.1, max_m: 4, stochastic_limit: 2000, seed: 0 }
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    /// Largest `M` reached by a searched code.
    pub m: usize,
    pub witness: WiretapCode,
    pub perf: CodePerformance,
    pub codes_evaluated: usize,
}

/// Non-decreasing `m`-tuples from `0..k` (multisets).
fn multisets(k: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(k: usize, m: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            cur.push(i);
            rec(k, m, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, m, 0, &mut Vec::with_capacity(m), &mut out);
    out
}

/// Points of the simplex over `k` outcomes with coordinates in `{0, step, …, 1}`.
pub fn grid_distributions(k: usize, step: f64) -> Result<Vec<Vec<f64>>, Error> {
    let levels = (1.0 / step).round();
    if !(step > 0.0) || (levels * step - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!("grid step {step} does not divide 1")));
    }
    let levels = levels as usize;
    fn rec(k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() + 1 == k {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in 0..=left {
            cur.push(a);
            rec(k, left - a, cur, out);
            cur.pop();
        }
    }
    let mut counts = Vec::new();
    rec(k, levels, &mut Vec::new(), &mut counts);
    Ok(counts.into_iter().map(|c| c.iter().map(|&a| a as f64 / levels as f64).collect()).collect())
}

/// Every deterministic `M`-message code of length `n`, up to relabelling
/// messages.
pub fn deterministic_codes(alphabet: usize, n: usize, m: usize) -> Result<Vec<WiretapCode>, Error> {
    let words = alphabet.pow(n as u32);
    multisets(words, m)
        .into_iter()
        .map(|pick| {
            let cw: Vec<Vec<usize>> = pick.iter().map(|&i| super::string_letters(i, alphabet, n)).collect();
            WiretapCode::deterministic(alphabet, &cw)
        })
        .collect()
}

/// Stochastic `M`-message codes with rows on the probability grid, skipping
/// the deterministic ones. When there are more than `limit`, `limit` of them
/// are drawn at random.
pub fn stochastic_codes(
    alphabet: usize,
    n: usize,
    m: usize,
    step: f64,
    limit: usize,
    rng: &mut impl Rng,
) -> Result<Vec<WiretapCode>, Error> {
    let grid = grid_distributions(alphabet.pow(n as u32), step)?;
    let vertex: Vec<bool> = grid.iter().map(|r| r.iter().any(|&p| p == 1.0)).collect();
    let picks: Vec<Vec<usize>> = if binomial(grid.len() + m - 1, m) <= limit as f64 {
        multisets(grid.len(), m)
    } else {
        (0..limit)
            .map(|_| {
                let mut p: Vec<usize> = (0..m).map(|_| rng.random_range(0..grid.len())).collect();
                p.sort_unstable();
                p
            })
            .collect()
    };
    picks
        .into_iter()
        .filter(|p| !p.iter().all(|&i| vertex[i]))
        .map(|p| WiretapCode::new(alphabet, n, p.iter().map(|&i| grid[i].clone()).collect(), None))
        .collect()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Measures a code against the targets, trying the fixed reference state
/// before the optimized one.
fn admissible(
    code: &WiretapCode,
    w: &CqqWiretapChannel,
    eps: f64,
    delta: f64,
) -> Result<Option<CodePerformance>, Error> {
    let st = CodeState::new(code, w, budget_dim())?;
    let perf = evaluate_state(code, &st, PrivacyMode::Fixed)?;
    if perf.eps > eps + ACCEPT_TOL {
        return Ok(None);
    }
    if perf.delta <= delta + ACCEPT_TOL {
        return Ok(Some(perf));
    }
    let with_dec = code.clone().with_decoder(perf.decoder)?;
    let perf = evaluate_state(&with_dec, &st, PrivacyMode::Optimized)?;
    Ok((perf.delta <= delta + ACCEPT_TOL).then_some(perf))
}

/// Largest `M ≤ cfg.max_m` reached by a deterministic or grid-stochastic
/// code with errors at most `(ε, δ)`, with the witness. `M = 1` always
/// succeeds.
pub fn brute_force_m(
    w: &CqqWiretapChannel,
    n: usize,
    eps: f64,
    delta: f64,
    cfg: &SearchConfig,
) -> Result<SearchResult, Error> {
    if n == 0 || cfg.max_m == 0 {
        return Err(Error::Domain("need n ≥ 1 and max_m ≥ 1".into()));
    }
    let needed = cfg.max_m * (w.dim_b() * w.dim_e()).pow(n as u32);
    let budget = budget_dim();
    if needed > budget {
        return Err(Error::Budget { needed, budget });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut evaluated = 0;
    for m in (2..=cfg.max_m).rev() {
        let mut candidates = deterministic_codes(w.alphabet(), n, m)?;
        let mut stochastic = stochastic_codes(w.alphabet(), n, m, cfg.grid_step, cfg.stochastic_limit, &mut rng)?;
        stochastic.shuffle(&mut rng);
        candidates.extend(stochastic);
        for code in candidates {
            evaluated += 1;
            if let Some(perf) = admissible(&code, w, eps, delta)? {
                let witness = code.with_decoder(perf.decoder.clone())?;
                return Ok(SearchResult { m, witness, perf, codes_evaluated: evaluated });
            }
        }
    }
    let code = WiretapCode::new(w.alphabet(), n, vec![vec![1.0 / (w.alphabet().pow(n as u32)) as f64; w.alphabet().pow(n as u32)]], None)?;
    let st = CodeState::new(&code, w, budget)?;
    let perf = evaluate_state(&code, &st, PrivacyMode::Optimized)?;
    let witness = code.with_decoder(perf.decoder.clone())?;
    Ok(SearchResult { m: 1, witness, perf, codes_evaluated: evaluated + 1 })
}

/// The type class `τ(P₀)` of strings of length `n` with letter counts
/// `counts`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeClass {
    pub n: usize,
    pub counts: Vec<usize>,
}

impl TypeClass {
    pub fn new(counts: Vec<usize>) -> Self {
        TypeClass { n: counts.iter().sum(), counts }
    }

    pub fn distribution(&self) -> Vec<f64> {
        self.counts.iter().map(|&c| c as f64 / self.n as f64).collect()
    }

    /// Multinomial coefficient `n! / Π_x (nP₀(x))!`.
    pub fn size(&self) -> u128 {
        let mut out: u128 = 1;
        let mut seen = 0u128;
        for &c in &self.counts {
            for i in 1..=c as u128 {
                seen += 1;
                out = out * seen / i;
            }
        }
        out
    }

    /// Members in lexicographic order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        fn rec(left: &mut [usize], cur: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
            if cur.len() == n {
                out.push(cur.clone());
                return;
            }
            for x in 0..left.len() {
                if left[x] > 0 {
                    left[x] -= 1;
                    cur.push(x);
                    rec(left, cur, n, out);
                    cur.pop();
                    left[x] += 1;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut self.counts.clone(), &mut Vec::with_capacity(self.n), self.n, &mut out);
        out
    }
}

/// Empirical distribution `t(xⁿ)` of a string.
pub fn empirical_type(word: &[usize], alphabet: usize) -> Vec<f64> {
    let mut t = vec![0.0; alphabet];
    for &x in word {
        t[x] += 1.0 / word.len() as f64;
    }
    t
}

#[derive(Clone, Debug)]
pub struct TypeClassReport {
    pub class: TypeClass,
    pub size: u128,
    /// `(n+1)^{|𝒳|}`.
    pub factor: f64,
    /// Smallest `log₂((n+1)^{|𝒳|} P₀^{⊗n}(xⁿ)) − log₂ Υ(xⁿ)` over members.
    pub min_log_slack: f64,
    /// Every member has empirical distribution `P₀`.
    pub types_match: bool,
}

impl TypeClassReport {
    pub fn holds(&self) -> bool {
        self.types_match && self.min_log_slack >= -1e-12
    }
}

/// Enumerates `τ(P₀)` and checks `Υ_{P₀} ≤ (n+1)^{|𝒳|} P₀^{⊗n}` on every
/// member, `Υ_{P₀}` being the uniform distribution on the class.
pub fn type_class_check(n: usize, p0: &[f64], alphabet: usize) -> Result<TypeClassReport, Error> {
    if p0.len() != alphabet || n == 0 {
        return Err(Error::Dimension(format!("P₀ has {} entries for an alphabet of {alphabet}", p0.len())));
    }
    let mut counts = Vec::with_capacity(alphabet);
    for &p in p0 {
        let c = p * n as f64;
        if !(p >= 0.0) || (c - c.round()).abs() > 1e-9 {
            return Err(Error::Domain(format!("n·P₀ = {c} is not an integer")));
        }
        counts.push(c.round() as usize);
    }
    if counts.iter().sum::<usize>() != n {
        return Err(Error::Domain("P₀ does not sum to one".into()));
    }
    let class = TypeClass::new(counts);
    let size = class.size();
    let factor = ((n + 1) as f64).powi(alphabet as i32);
    let mut min_log_slack = f64::INFINITY;
    let mut types_match = true;
    for word in class.members() {
        let t = empirical_type(&word, alphabet);
        types_match &= t.iter().zip(p0).all(|(a, b)| (a - b).abs() <= 1e-12);
        let log_iid: f64 = word.iter().map(|&x| p0[x].log2()).sum();
        let slack = factor.log2() + log_iid + (size as f64).log2();
        min_log_slack = min_log_slack.min(slack);
    }
    Ok(TypeClassReport { class, size, factor, min_log_slack, types_match })
}
