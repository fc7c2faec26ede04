//! Numerical checks of the entropy inequalities used by the converse.
//!
//! Each rule is evaluated on explicit states with every entropy computed by
//! its own semidefinite program. A smoothing parameter of one or more makes
//! the smoothing ball contain the zero operator, so such max-entropies are
//! `−∞` and such min-entropies `+∞`.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{aep, EntropyQuery};
use crate::linalg::{self, ComplexMatrix};
use crate::state::{random_state, random_unitary, DensityOperator};
use crate::Error;

/// A report holds when its slack is at least `-CHECK_TOL`.
pub const CHECK_TOL: f64 = 1e-6;

const GRID: [f64; 4] = [0.05, 0.1, 0.2, 0.4];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    DataProcessingMin,
    DataProcessingMax,
    ChainMaxUpper,
    ChainMaxLower,
    MinMaxConversion,
    MinMaxConversionSharp,
    MaxMinConversion,
    QuasiConcavity,
    AepMin,
    AepMax,
}

impl Rule {
    pub const ALL: [Rule; 10] = [
        Rule::DataProcessingMin,
        Rule::DataProcessingMax,
        Rule::ChainMaxUpper,
        Rule::ChainMaxLower,
        Rule::MinMaxConversion,
        Rule::MinMaxConversionSharp,
        Rule::MaxMinConversion,
        Rule::QuasiConcavity,
        Rule::AepMin,
        Rule::AepMax,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Rule::DataProcessingMin => "DataProcessingMin",
            Rule::DataProcessingMax => "DataProcessingMax",
            Rule::ChainMaxUpper => "ChainMaxUpper",
            Rule::ChainMaxLower => "ChainMaxLower",
            Rule::MinMaxConversion => "MinMaxConversion",
            Rule::MinMaxConversionSharp => "MinMaxConversionSharp",
            Rule::MaxMinConversion => "MaxMinConversion",
            Rule::QuasiConcavity => "QuasiConcavity",
            Rule::AepMin => "AepMin",
            Rule::AepMax => "AepMax",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Rule::ALL
            .iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .copied()
            .ok_or_else(|| Error::Domain(format!("unknown rule {s}")))
    }
}

/// Parameters of one rule instance; unused fields stay `None`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Params {
    pub eps: Option<f64>,
    pub delta: Option<f64>,
    pub eta: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub n: Option<usize>,
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, v) in [("eps", self.eps), ("delta", self.delta), ("eta", self.eta), ("alpha", self.alpha), ("beta", self.beta)] {
            if let Some(v) = v {
                parts.push(format!("{k}={v}"));
            }
        }
        if let Some(n) = self.n {
            parts.push(format!("n={n}"));
        }
        f.write_str(&parts.join(";"))
    }
}

impl Params {
    fn need(&self, v: Option<f64>, name: &str) -> Result<f64, Error> {
        let x = v.ok_or_else(|| Error::Domain(format!("parameter {name} missing")))?;
        if !(x >= 0.0 && x.is_finite()) {
            return Err(Error::Domain(format!("parameter {name} = {x} must be nonnegative")));
        }
        Ok(x)
    }
}

/// Outcome of checking one inequality on one instance.
#[derive(Clone, Debug)]
pub struct InequalityReport {
    pub rule: Rule,
    pub seed: Option<u64>,
    pub params: Params,
    /// Left-hand side as the rule is written.
    pub lhs: f64,
    pub rhs: f64,
    /// Distance from violation: `rhs − lhs` for `≤` rules, `lhs − rhs` for `≥`.
    pub slack: f64,
    pub holds: bool,
}

impl InequalityReport {
    fn new(rule: Rule, params: Params, lhs: f64, rhs: f64, less_eq: bool) -> Self {
        let slack = if less_eq { rhs - lhs } else { lhs - rhs };
        let slack = if slack.is_nan() { f64::INFINITY } else { slack };
        InequalityReport { rule, seed: None, params, lhs, rhs, slack, holds: slack >= -CHECK_TOL }
    }
}

/// States a rule is evaluated on.
#[derive(Clone, Debug)]
pub enum LemmaInstance {
    /// `ρ_AB`, dims `[d_A, d_B]`.
    Bipartite(DensityOperator),
    /// `ρ_ABC`, dims `[d_A, d_B, d_C]`.
    Tripartite(DensityOperator),
    /// `ρ_AB` and the mixture `Σ p_i (U_i ⊗ V_i) ρ (U_i ⊗ V_i)†`.
    Orbit { rho: DensityOperator, probs: Vec<f64>, unitaries: Vec<(ComplexMatrix, ComplexMatrix)> },
}

fn hmin(rho: &DensityOperator, a: &[usize], b: &[usize], eps: f64) -> Result<f64, Error> {
    if eps >= 1.0 {
        return Ok(f64::INFINITY);
    }
    EntropyQuery::new(rho, a, b, eps)?.h_min_smooth()
}

fn hmax(rho: &DensityOperator, a: &[usize], b: &[usize], eps: f64) -> Result<f64, Error> {
    if eps >= 1.0 {
        return Ok(f64::NEG_INFINITY);
    }
    EntropyQuery::new(rho, a, b, eps)?.h_max_smooth()
}

fn log_cost(eta: f64) -> Result<f64, Error> {
    if eta <= 0.0 {
        return Err(Error::Domain("η must be positive".into()));
    }
    Ok((2.0 / (eta * eta)).log2())
}

fn tripartite(inst: &LemmaInstance, rule: Rule) -> Result<&DensityOperator, Error> {
    match inst {
        LemmaInstance::Tripartite(r) if r.dims().len() == 3 => Ok(r),
        _ => Err(Error::Domain(format!("{rule} needs a tripartite state"))),
    }
}

fn bipartite(inst: &LemmaInstance, rule: Rule) -> Result<&DensityOperator, Error> {
    match inst {
        LemmaInstance::Bipartite(r) if r.dims().len() == 2 => Ok(r),
        _ => Err(Error::Domain(format!("{rule} needs a bipartite state"))),
    }
}

/// Mixture over the local-unitary orbit.
pub fn orbit_mixture(
    rho: &DensityOperator,
    probs: &[f64],
    unitaries: &[(ComplexMatrix, ComplexMatrix)],
) -> Result<DensityOperator, Error> {
    if probs.len() != unitaries.len() || probs.is_empty() {
        return Err(Error::Domain("need one probability per unitary pair".into()));
    }
    if probs.iter().any(|&p| p < 0.0) || (probs.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(Error::Domain("mixture weights must form a distribution".into()));
    }
    let d = rho.dim();
    let mut acc = ComplexMatrix::zeros(d, d);
    for (p, (u, v)) in probs.iter().zip(unitaries) {
        let w = linalg::kron(u, v);
        acc += (&w * rho.matrix() * w.adjoint()) * linalg::c(*p);
    }
    DensityOperator::new(acc, rho.dims().to_vec())
}

/// Evaluates both sides of `rule` on `inst`.
pub fn verify_inequality(rule: Rule, inst: &LemmaInstance, params: &Params) -> Result<InequalityReport, Error> {
    let p = params.clone();
    match rule {
        Rule::DataProcessingMin | Rule::DataProcessingMax => {
            let rho = tripartite(inst, rule)?;
            let eps = p.need(p.eps, "eps")?;
            let f = if rule == Rule::DataProcessingMin { hmin } else { hmax };
            let lhs = f(rho, &[0], &[1, 2], eps)?;
            let rhs = f(rho, &[0], &[1], eps)?;
            Ok(InequalityReport::new(rule, p, lhs, rhs, true))
        }
        Rule::ChainMaxUpper => {
            let rho = tripartite(inst, rule)?;
            let (eps, delta, eta) = (p.need(p.eps, "eps")?, p.need(p.delta, "delta")?, p.need(p.eta, "eta")?);
            let lhs = hmax(rho, &[0, 1], &[2], eps + 2.0 * delta + eta)?;
            let rhs = hmax(rho, &[1], &[2], delta)? + hmax(rho, &[0], &[1, 2], eps)? + log_cost(eta)?;
            Ok(InequalityReport::new(rule, p, lhs, rhs, true))
        }
        Rule::ChainMaxLower => {
            let rho = tripartite(inst, rule)?;
            let (eps, delta, eta) = (p.need(p.eps, "eps")?, p.need(p.delta, "delta")?, p.need(p.eta, "eta")?);
            let lhs = hmax(rho, &[0, 1], &[2], eps)?;
            let cost = 3.0 * log_cost(eta)?;
            let h_max_part = hmax(rho, &[0], &[1, 2], eps + 2.0 * delta + 2.0 * eta)?;
            let rhs = if h_max_part == f64::NEG_INFINITY {
                f64::NEG_INFINITY
            } else {
                hmin(rho, &[1], &[2], delta)? + h_max_part - cost
            };
            Ok(InequalityReport::new(rule, p, lhs, rhs, false))
        }
        Rule::MinMaxConversion => {
            let rho = bipartite(inst, rule)?;
            let (eps, delta) = (p.need(p.eps, "eps")?, p.need(p.delta, "delta")?);
            if eps + delta >= 1.0 {
                return Err(Error::Domain(format!("need ε + δ < 1, got {}", eps + delta)));
            }
            let lhs = hmin(rho, &[0], &[1], eps)?;
            let rhs = hmax(rho, &[0], &[1], delta)? + (1.0 / (1.0 - (eps + delta).powi(2))).log2();
            Ok(InequalityReport::new(rule, p, lhs, rhs, true))
        }
        Rule::MinMaxConversionSharp => {
            let rho = bipartite(inst, rule)?;
            let (alpha, beta) = (p.need(p.alpha, "alpha")?, p.need(p.beta, "beta")?);
            if alpha + beta >= std::f64::consts::FRAC_PI_2 {
                return Err(Error::Domain(format!("need α + β < π/2, got {}", alpha + beta)));
            }
            let lhs = hmin(rho, &[0], &[1], alpha.sin())?;
            let rhs = hmax(rho, &[0], &[1], beta.sin())? + (1.0 / (alpha + beta).cos().powi(2)).log2();
            Ok(InequalityReport::new(rule, p, lhs, rhs, true))
        }
        Rule::MaxMinConversion => {
            let rho = bipartite(inst, rule)?;
            let delta = p.need(p.delta, "delta")?;
            if delta > 1.0 {
                return Err(Error::Domain(format!("need δ ≤ 1, got {delta}")));
            }
            let lhs = hmax(rho, &[0], &[1], delta)?;
            let rhs = hmin(rho, &[0], &[1], 1.0 - 0.25 * delta * delta)?;
            Ok(InequalityReport::new(rule, p, lhs, rhs, true))
        }
        Rule::QuasiConcavity => {
            let (rho, probs, unitaries) = match inst {
                LemmaInstance::Orbit { rho, probs, unitaries } => (rho, probs, unitaries),
                _ => return Err(Error::Domain("QuasiConcavity needs an orbit instance".into())),
            };
            let eps = p.need(p.eps, "eps")?;
            let eps_hat = eps * (2.0 - eps * eps).sqrt();
            let mix = orbit_mixture(rho, probs, unitaries)?;
            let lhs = hmax(&mix, &[0], &[1], eps)?;
            let rhs = hmax(rho, &[0], &[1], eps_hat)?;
            Ok(InequalityReport::new(rule, p, lhs, rhs, false))
        }
        Rule::AepMin | Rule::AepMax => {
            let rho = bipartite(inst, rule)?;
            let eps = p.need(p.eps, "eps")?;
            let n = p.n.ok_or_else(|| Error::Domain("parameter n missing".into()))?;
            let b = aep::aep_bounds(rho, n, eps)?;
            if rule == Rule::AepMin {
                let lhs = aep::h_min_smooth_power(rho, n, eps)?;
                Ok(InequalityReport::new(rule, p, lhs, b.min_lower, false))
            } else {
                let lhs = aep::h_max_smooth_power(rho, n, eps)?;
                Ok(InequalityReport::new(rule, p, lhs, b.max_upper, true))
            }
        }
    }
}

fn pick<R: Rng>(rng: &mut R) -> f64 {
    GRID[rng.random_range(0..GRID.len())]
}

/// Draws a random instance of `rule` from `seed` and checks it. States have
/// local dimensions `dims` and rank at most four (two for the AEP rules, which
/// work with tensor powers).
pub fn random_instance_report(rule: Rule, seed: u64, dims: [usize; 3]) -> Result<InequalityReport, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ancilla = rng.random_range(1..=4);
    let (inst, params) = match rule {
        Rule::DataProcessingMin | Rule::DataProcessingMax => {
            let rho = random_state(&dims, ancilla, &mut rng);
            (LemmaInstance::Tripartite(rho), Params { eps: Some(pick(&mut rng)), ..Default::default() })
        }
        Rule::ChainMaxUpper | Rule::ChainMaxLower => {
            let rho = random_state(&dims, ancilla, &mut rng);
            let k = if rule == Rule::ChainMaxUpper { 1.0 } else { 2.0 };
            let (eps, delta, eta) = loop {
                let t = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
                if t.0 + 2.0 * t.1 + k * t.2 < 1.0 {
                    break t;
                }
            };
            let params = Params { eps: Some(eps), delta: Some(delta), eta: Some(eta), ..Default::default() };
            (LemmaInstance::Tripartite(rho), params)
        }
        Rule::MinMaxConversion => {
            let rho = random_state(&dims[..2], ancilla, &mut rng);
            let params = Params { eps: Some(pick(&mut rng)), delta: Some(pick(&mut rng)), ..Default::default() };
            (LemmaInstance::Bipartite(rho), params)
        }
        Rule::MinMaxConversionSharp => {
            let rho = random_state(&dims[..2], ancilla, &mut rng);
            let (a, b) = (pick(&mut rng).asin(), pick(&mut rng).asin());
            (LemmaInstance::Bipartite(rho), Params { alpha: Some(a), beta: Some(b), ..Default::default() })
        }
        Rule::MaxMinConversion => {
            let rho = random_state(&dims[..2], ancilla, &mut rng);
            (LemmaInstance::Bipartite(rho), Params { delta: Some(pick(&mut rng)), ..Default::default() })
        }
        Rule::QuasiConcavity => {
            let rho = random_state(&dims[..2], ancilla, &mut rng);
            let k = rng.random_range(2..=3);
            let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
            let total: f64 = raw.iter().sum();
            let probs = raw.iter().map(|x| x / total).collect();
            let unitaries =
                (0..k).map(|_| (random_unitary(dims[0], &mut rng), random_unitary(dims[1], &mut rng))).collect();
            let params = Params { eps: Some(pick(&mut rng)), ..Default::default() };
            (LemmaInstance::Orbit { rho, probs, unitaries }, params)
        }
        Rule::AepMin | Rule::AepMax => {
            let rho = random_state(&dims[..2], 2, &mut rng);
            let params = Params { eps: Some(pick(&mut rng)), n: Some(rng.random_range(1..=2)), ..Default::default() };
            (LemmaInstance::Bipartite(rho), params)
        }
    };
    let mut report = verify_inequality(rule, &inst, &params)?;
    report.seed = Some(seed);
    Ok(report)
}

/// Runs `trials` seeded instances of each rule; instance `i` uses seed `seed + i`.
pub fn run_harness(rules: &[Rule], trials: usize, seed: u64, dims: [usize; 3]) -> Result<Vec<InequalityReport>, Error> {
    let mut out = Vec::with_capacity(rules.len() * trials);
    for &rule in rules {
        for i in 0..trials {
            out.push(random_instance_report(rule, seed.wrapping_add(i as u64), dims)?);
        }
    }
    Ok(out)
}

/// Writes reports as CSV with columns `rule,seed,params,lhs,rhs,slack,holds`.
pub fn write_reports_csv<W: Write>(reports: &[InequalityReport], out: W) -> Result<(), Error> {
    let io = |e: csv::Error| Error::Io(e.to_string());
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["rule", "seed", "params", "lhs", "rhs", "slack", "holds"]).map_err(io)?;
    for r in reports {
        w.write_record([
            r.rule.name().to_string(),
            r.seed.map(|s| s.to_string()).unwrap_or_default(),
            r.params.to_string(),
            format!("{}", r.lhs),
            format!("{}", r.rhs),
            format!("{}", r.slack),
            r.holds.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}
