//! Command line front end: argument definitions, dispatch and report
//! formatting. The binary in `main.rs` only maps the outcome to an exit code.

pub mod io;

use std::fmt;
use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use secrecy_core::codes::{
    self, brute_force_m, classify_region, emit_region_csv, evaluate_code, finite_n_converse, trivial_converse_bound,
    ConverseOptions, PrivacyMode, SearchConfig,
};
use secrecy_core::entropy::{run_harness, EntropyQuery, Rule};
use secrecy_core::wiretap::{
    check_degraded, classical_capacity_cq, p1_general_lower_bound, private_capacity_degraded, CqqWiretapChannel,
    Degradability, DegradedStructure, DEGRADE_TOL,
};
use secrecy_core::Error;

/// Failure of a command with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub const PARSE: i32 = 1;
    pub const INFEASIBLE: i32 = 2;
    pub const SOLVER: i32 = 3;

    pub fn parse(message: impl Into<String>) -> Self {
        CliError { code: Self::PARSE, message: message.into() }
    }

    pub fn infeasible(message: impl Into<String>) -> Self {
        CliError { code: Self::INFEASIBLE, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::OutsideConverseRegion { .. } => Self::INFEASIBLE,
            Error::Solver(_) => Self::SOLVER,
            _ => Self::PARSE,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::parse(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "secrecy", version, about = "Private capacities, smooth entropies and converse bounds for cqq-wiretap channels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Which {
    Hmin,
    Hmax,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Privacy {
    Fixed,
    Optimized,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and validate a channel file.
    Validate { channel: PathBuf },
    /// Decide whether Eve's states are a degraded version of Bob's.
    DegradeCheck { channel: PathBuf },
    /// Private capacity (degraded channels) or the auxiliary-variable lower bound.
    Capacity {
        channel: PathBuf,
        /// Size of the auxiliary alphabet for the general formula.
        #[arg(long)]
        aux_size: Option<usize>,
        #[arg(long, default_value_t = 8)]
        starts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Smooth conditional min- or max-entropy of a state file.
    Entropy {
        state: PathBuf,
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, default_value_t = 0.0)]
        smooth: f64,
        /// Subsystem groups `A,B[,C]`: entropy of A given B, C traced out.
        /// A group lists subsystem indices joined by `+`; B may be `-` (empty).
        #[arg(long)]
        split: String,
    },
    /// Check the entropy inequalities on seeded random instances.
    Lemmas {
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "2,2,2")]
        dims: String,
        /// Comma-separated rule names; all rules by default.
        #[arg(long)]
        rules: Option<String>,
        /// Write every report as CSV.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Transmission and privacy errors of a code.
    CodeEval {
        channel: PathBuf,
        code: PathBuf,
        #[arg(long, value_enum, default_value = "optimized")]
        privacy: Privacy,
    },
    /// Largest number of messages found by exhaustive search.
    CodeSearch {
        channel: PathBuf,
        #[arg(short)]
        n: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 0.1)]
        grid_step: f64,
        #[arg(long, default_value_t = 4)]
        max_m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the witness code.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Finite-blocklength converse bound on log M(n, ε, δ).
    Converse {
        channel: PathBuf,
        #[arg(short)]
        n: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        eta: Option<f64>,
    },
    /// Classify a grid over the (ε, δ) square.
    Region {
        #[arg(long)]
        grid: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// `x` with six significant digits.
pub fn sig(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-5..=9).contains(&mag) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

fn sig_vec(v: &[f64]) -> String {
    format!("[{}]", v.iter().map(|&x| sig(x)).collect::<Vec<_>>().join(", "))
}

fn degraded_structure(w: &CqqWiretapChannel) -> Result<DegradedStructure, CliError> {
    match check_degraded(w, DEGRADE_TOL)? {
        Degradability::Degraded(s) => Ok(s),
        Degradability::NotDegraded(c) => Err(CliError::infeasible(format!(
            "channel is not degraded (minimal violation {}, certified lower bound {})",
            sig(c.min_violation),
            sig(c.lower_bound)
        ))),
    }
}

fn parse_group(s: &str, what: &str) -> Result<Vec<usize>, CliError> {
    if s == "-" || s.is_empty() {
        return Ok(Vec::new());
    }
    s.split('+')
        .map(|t| t.trim().parse::<usize>().map_err(|_| CliError::parse(format!("--split: bad subsystem `{t}` in {what}"))))
        .collect()
}

/// `A,B[,C]` into index groups, checking that they partition the subsystems.
pub fn parse_split(split: &str, parties: usize) -> Result<(Vec<usize>, Vec<usize>, Vec<usize>), CliError> {
    let parts: Vec<&str> = split.split(',').collect();
    if !(2..=3).contains(&parts.len()) {
        return Err(CliError::parse("--split expects A,B or A,B,C"));
    }
    let a = parse_group(parts[0], "A")?;
    let b = parse_group(parts[1], "B")?;
    let c = match parts.get(2) {
        Some(p) => parse_group(p, "C")?,
        None => Vec::new(),
    };
    let mut seen = vec![false; parties];
    for &k in a.iter().chain(&b).chain(&c) {
        if k >= parties || seen[k] {
            return Err(CliError::parse(format!("--split: subsystem {k} out of range or repeated")));
        }
        seen[k] = true;
    }
    if parts.len() == 3 && seen.iter().any(|s| !s) {
        return Err(CliError::parse("--split: A, B and C must cover every subsystem"));
    }
    Ok((a, b, c))
}

fn parse_dims(s: &str) -> Result<[usize; 3], CliError> {
    let v: Vec<usize> = s
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| CliError::parse(format!("--dims: bad dimension `{t}`"))))
        .collect::<Result<_, _>>()?;
    match v.as_slice() {
        &[a, b, c] if a > 0 && b > 0 && c > 0 => Ok([a, b, c]),
        _ => Err(CliError::parse("--dims expects three positive dimensions dA,dB,dC")),
    }
}

/// Runs one command, writing its report to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Validate { channel } => {
            let w = io::read_channel(&channel)?;
            writeln!(out, "valid: |X| = {}, dim_B = {}, dim_E = {}", w.alphabet(), w.dim_b(), w.dim_e())?;
        }
        Command::DegradeCheck { channel } => {
            let w = io::read_channel(&channel)?;
            match check_degraded(&w, DEGRADE_TOL)? {
                Degradability::Degraded(s) => {
                    writeln!(out, "degraded: yes")?;
                    writeln!(out, "dilation: B -> E' ⊗ F with dim E' = {}, dim F = {}", s.dim_e_prime, s.dim_f)?;
                    writeln!(out, "kraus operators: {}", s.channel.kraus().len())?;
                    writeln!(out, "residual: {}", sig(s.residual))?;
                }
                Degradability::NotDegraded(c) => {
                    writeln!(out, "degraded: no")?;
                    writeln!(out, "minimal violation: {}", sig(c.min_violation))?;
                    writeln!(out, "certified lower bound: {}", sig(c.lower_bound))?;
                    return Err(CliError::infeasible("channel is not degraded"));
                }
            }
        }
        Command::Capacity { channel, aux_size, starts, seed } => {
            let w = io::read_channel(&channel)?;
            let classical = classical_capacity_cq(&w.bob_states())?;
            writeln!(out, "classical capacity C: {}", sig(classical.value))?;
            match check_degraded(&w, DEGRADE_TOL)? {
                Degradability::Degraded(s) => {
                    let p = private_capacity_degraded(&w, &s)?;
                    writeln!(out, "private capacity P: {}", sig(p.value))?;
                    writeln!(out, "optimal input: {}", sig_vec(&p.distribution))?;
                    writeln!(out, "gradient norm: {}", sig(p.certificate.gradient_norm))?;
                    if let Some(k) = aux_size {
                        let g = p1_general_lower_bound(&w, k, starts, seed)?;
                        writeln!(out, "general formula (|U| = {k}, lower bound): {}", sig(g.value))?;
                    }
                }
                Degradability::NotDegraded(_) => {
                    let k = aux_size.unwrap_or(w.alphabet() + 1);
                    let g = p1_general_lower_bound(&w, k, starts, seed)?;
                    writeln!(out, "channel is not degraded")?;
                    writeln!(out, "private capacity lower bound (|U| = {k}): {}", sig(g.value))?;
                    writeln!(out, "input: {}", sig_vec(&g.distribution))?;
                }
            }
        }
        Command::Entropy { state, which, smooth, split } => {
            let rho = io::read_state(&state)?;
            let (a, b, _) = parse_split(&split, rho.dims().len())?;
            let q = EntropyQuery::new(&rho, &a, &b, smooth)?;
            let (name, v) = match which {
                Which::Hmin => ("H_min", q.h_min_smooth()?),
                Which::Hmax => ("H_max", q.h_max_smooth()?),
            };
            writeln!(out, "{name}^{}(A|B): {}", sig(smooth), sig(v))?;
        }
        Command::Lemmas { trials, seed, dims, rules, output } => {
            let dims = parse_dims(&dims)?;
            let rules: Vec<Rule> = match rules {
                Some(list) => list.split(',').map(|r| r.trim().parse::<Rule>()).collect::<Result<_, _>>()?,
                None => Rule::ALL.to_vec(),
            };
            let reports = run_harness(&rules, trials, seed, dims)?;
            if let Some(path) = output {
                secrecy_core::entropy::write_reports_csv(&reports, File::create(path)?)?;
            }
            let mut failed = 0;
            for rule in &rules {
                let mine: Vec<_> = reports.iter().filter(|r| r.rule == *rule).collect();
                let bad = mine.iter().filter(|r| !r.holds).count();
                let min = mine.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
                writeln!(out, "{rule}: {} of {} hold, min slack {}", mine.len() - bad, mine.len(), sig(min))?;
                failed += bad;
            }
            for r in reports.iter().filter(|r| !r.holds) {
                writeln!(
                    out,
                    "FAILED {} seed={} params={} lhs={} rhs={} slack={}",
                    r.rule,
                    r.seed.unwrap_or_default(),
                    r.params,
                    sig(r.lhs),
                    sig(r.rhs),
                    sig(r.slack)
                )?;
            }
            if failed > 0 {
                return Err(CliError::infeasible(format!("{failed} inequality instance(s) violated")));
            }
        }
        Command::CodeEval { channel, code, privacy } => {
            let w = io::read_channel(&channel)?;
            let code = io::read_code(&code, w.alphabet())?;
            let mode = match privacy {
                Privacy::Fixed => PrivacyMode::Fixed,
                Privacy::Optimized => PrivacyMode::Optimized,
            };
            let p = evaluate_code(&code, &w, mode)?;
            writeln!(out, "messages: {}, blocklength: {}, rate: {}", code.messages(), code.blocklength(), sig(p.rate))?;
            writeln!(out, "transmission error: {}", sig(p.eps))?;
            writeln!(out, "privacy error ({privacy:?}): {}", sig(p.delta).to_string())?;
            writeln!(out, "privacy error (fixed marginal): {}", sig(p.delta_fixed))?;
            writeln!(out, "success probability: {}", sig(p.success_probability))?;
            let b = trivial_converse_bound(&code, &w, mode)?;
            writeln!(out, "one-shot converse bound on log M: {}", sig(b))?;
        }
        Command::CodeSearch { channel, n, eps, delta, grid_step, max_m, seed, output } => {
            let w = io::read_channel(&channel)?;
            let cfg = SearchConfig { grid_step, max_m, seed, ..Default::default() };
            let r = brute_force_m(&w, n, eps, delta, &cfg)?;
            writeln!(out, "M: {}", r.m)?;
            writeln!(out, "witness errors: transmission {}, privacy {}", sig(r.perf.eps), sig(r.perf.delta))?;
            writeln!(out, "codes evaluated: {}", r.codes_evaluated)?;
            let spec = io::CodeSpec::from_code(&r.witness);
            match output {
                Some(path) => io::write_json(&spec, &path)?,
                None => writeln!(out, "encoder: {}", serde_json::to_string(&spec.encoder).unwrap())?,
            }
        }
        Command::Converse { channel, n, eps, delta, eta } => {
            let v = classify_region(eps, delta)?;
            if v.line >= 1.0 {
                return Err(Error::OutsideConverseRegion { eps, delta }.into());
            }
            let w = io::read_channel(&channel)?;
            let s = degraded_structure(&w)?;
            let opts = ConverseOptions { eta, ..Default::default() };
            let b = finite_n_converse(&w, &s, n, eps, delta, &opts)?;
            writeln!(out, "P(W): {}", sig(b.capacity))?;
            writeln!(out, "n P(W): {}", sig(n as f64 * b.capacity))?;
            writeln!(out, "bound on log M: {}", sig(b.value))?;
            writeln!(out, "bound for constant-type encoders: {}", sig(b.constant_type_value))?;
            writeln!(out, "eta: {} (constant type {})", sig(b.eta), sig(b.eta_constant_type))?;
            writeln!(out, "mu: upper {}, lower {}", sig(b.mu_upper), sig(b.mu_lower))?;
            writeln!(
                out,
                "type register: {}, hashing surcharge: {} (c_h = {}, a declared constant)",
                sig(b.type_register_cost),
                sig(b.hashing_surcharge),
                sig(b.hashing_constant)
            )?;
        }
        Command::Region { grid, output } => {
            match output {
                Some(path) => emit_region_csv(grid, File::create(&path)?)?,
                None => emit_region_csv(grid, &mut *out)?,
            }
            let counts = codes::region_grid(grid)?.iter().fold([0usize; 3], |mut acc, (_, _, v)| {
                acc[v.region as usize] += 1;
                acc
            });
            if grid > 0 {
                eprintln!("converse {}, no-go {}, gap {}", counts[0], counts[1], counts[2]);
            }
        }
    }
    Ok(())
}
