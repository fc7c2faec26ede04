//! Homogeneous self-dual interior point method with HKM search directions
//! and Mehrotra predictor-corrector steps.
//!
//! The embedding solved is
//!
//! ```text
//!   A x - b τ = 0,   Aᵀy + s - c τ = 0,   bᵀy - cᵀx - κ = 0,
//!   x ∈ K, s ∈ K, τ, κ ≥ 0,
//! ```
//!
//! whose limit points either give an optimal pair `(x/τ, y/τ, s/τ)` or, with
//! `τ → 0`, a Farkas certificate of primal or dual infeasibility.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::real::{extract_hermitian, Placement, RealForm, RealProblem};
use crate::{BlockKind, BlockValue, SdpError, SdpProblem, SdpSolution, SdpStatus, Tolerances};

const STEP_FRACTION: f64 = 0.98;

/// Iterate of the embedding.
#[derive(Clone)]
struct Point {
    x: Vec<DMatrix<f64>>,
    xl: DVector<f64>,
    s: Vec<DMatrix<f64>>,
    sl: DVector<f64>,
    y: DVector<f64>,
    tau: f64,
    kappa: f64,
}

struct Direction {
    x: Vec<DMatrix<f64>>,
    xl: DVector<f64>,
    s: Vec<DMatrix<f64>>,
    sl: DVector<f64>,
    y: DVector<f64>,
    tau: f64,
    kappa: f64,
}

/// Per-block list of constraints touching it, used to assemble the Schur
/// complement.
struct BlockRows {
    rows: Vec<(usize, Vec<(usize, usize, f64)>)>,
    dense: bool,
}

struct Workspace<'a> {
    p: &'a RealProblem,
    c_psd: Vec<DMatrix<f64>>,
    c_lp: DVector<f64>,
    block_rows: Vec<BlockRows>,
    lp_rows: Vec<Vec<(usize, f64)>>,
    nu: f64,
}

impl<'a> Workspace<'a> {
    fn new(p: &'a RealProblem) -> Self {
        let (c_psd, c_lp) = densify(p, &p.c);
        let mut block_rows: Vec<BlockRows> =
            p.psd_dims.iter().map(|_| BlockRows { rows: Vec::new(), dense: false }).collect();
        let mut lp_rows = vec![Vec::new(); p.lp_dim];
        for (i, row) in p.rows.iter().enumerate() {
            for (blk, entries) in &row.psd {
                block_rows[*blk].rows.push((i, entries.clone()));
            }
            for &(k, v) in &row.lp {
                lp_rows[k].push((i, v));
            }
        }
        for (blk, br) in block_rows.iter_mut().enumerate() {
            let n = p.psd_dims[blk] as f64;
            let k = br.rows.len() as f64;
            let nnz: f64 = br.rows.iter().map(|(_, e)| e.len() as f64).sum();
            let sparse_cost = 0.5 * nnz * nnz;
            let dense_cost = k * n.powi(4) + 0.5 * k * k * n * n;
            br.dense = dense_cost < sparse_cost && n <= 24.0;
        }
        let nu = p.psd_dims.iter().sum::<usize>() as f64 + p.lp_dim as f64 + 1.0;
        Workspace { p, c_psd, c_lp, block_rows, lp_rows, nu }
    }

    fn apply_a(&self, x: &[DMatrix<f64>], xl: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(self.p.m(), self.p.rows.iter().map(|row| apply_form(row, x, xl)))
    }

    fn apply_at(&self, y: &DVector<f64>) -> (Vec<DMatrix<f64>>, DVector<f64>) {
        let mut out: Vec<DMatrix<f64>> =
            self.p.psd_dims.iter().map(|&n| DMatrix::zeros(n, n)).collect();
        let mut outl = DVector::zeros(self.p.lp_dim);
        for (i, row) in self.p.rows.iter().enumerate() {
            let yi = y[i];
            if yi == 0.0 {
                continue;
            }
            for (blk, entries) in &row.psd {
                let m = &mut out[*blk];
                for &(r, c, v) in entries {
                    m[(r, c)] += yi * v;
                }
            }
            for &(k, v) in &row.lp {
                outl[k] += yi * v;
            }
        }
        (out, outl)
    }

    fn objective(&self, x: &[DMatrix<f64>], xl: &DVector<f64>) -> f64 {
        apply_form(&self.p.c, x, xl)
    }

    /// Schur complement `M_ij = tr(A_i X A_j S⁻¹) + Σ_k a_ik a_jk x_k/s_k`.
    fn schur(&self, x: &[DMatrix<f64>], sinv: &[DMatrix<f64>], xl: &DVector<f64>, sl: &DVector<f64>) -> DMatrix<f64> {
        let m = self.p.m();
        let mut mm = DMatrix::<f64>::zeros(m, m);
        for (blk, br) in self.block_rows.iter().enumerate() {
            let xb = &x[blk];
            let sb = &sinv[blk];
            let n = xb.nrows();
            if br.dense {
                // Kronecker route: K[(p,q),(k,l)] = X[q,k] Sinv[l,p].
                let nn = n * n;
                let kk = br.rows.len();
                let mut abar = DMatrix::<f64>::zeros(kk, nn);
                for (t, (_, entries)) in br.rows.iter().enumerate() {
                    for &(r, c, v) in entries {
                        abar[(t, r * n + c)] += v;
                    }
                }
                let kron = DMatrix::from_fn(nn, nn, |a, bidx| {
                    let (p, q) = (a / n, a % n);
                    let (k, l) = (bidx / n, bidx % n);
                    xb[(q, k)] * sb[(l, p)]
                });
                let tmp = &abar * kron;
                let contrib = &tmp * abar.transpose();
                for (t1, (i, _)) in br.rows.iter().enumerate() {
                    for (t2, (j, _)) in br.rows.iter().enumerate() {
                        mm[(*i, *j)] += contrib[(t1, t2)];
                    }
                }
            } else {
                for (t1, (i, ei)) in br.rows.iter().enumerate() {
                    for (j, ej) in br.rows[t1..].iter() {
                        let mut acc = 0.0;
                        for &(p, q, a) in ei {
                            for &(k, l, c) in ej {
                                acc += a * c * xb[(q, k)] * sb[(l, p)];
                            }
                        }
                        mm[(*i, *j)] += acc;
                        if i != j {
                            mm[(*j, *i)] += acc;
                        }
                    }
                }
            }
        }
        for (k, rows) in self.lp_rows.iter().enumerate() {
            let w = xl[k] / sl[k];
            for (t1, &(i, a)) in rows.iter().enumerate() {
                for &(j, c) in &rows[t1..] {
                    let v = w * a * c;
                    mm[(i, j)] += v;
                    if i != j {
                        mm[(j, i)] += v;
                    }
                }
            }
        }
        // Symmetrize against rounding from the Kronecker route.
        let t = mm.transpose();
        (mm + t) * 0.5
    }
}

fn densify(p: &RealProblem, form: &RealForm) -> (Vec<DMatrix<f64>>, DVector<f64>) {
    let mut out: Vec<DMatrix<f64>> = p.psd_dims.iter().map(|&n| DMatrix::zeros(n, n)).collect();
    let mut outl = DVector::zeros(p.lp_dim);
    for (blk, entries) in &form.psd {
        for &(r, c, v) in entries {
            out[*blk][(r, c)] += v;
        }
    }
    for &(k, v) in &form.lp {
        outl[k] += v;
    }
    (out, outl)
}

fn apply_form(form: &RealForm, x: &[DMatrix<f64>], xl: &DVector<f64>) -> f64 {
    let mut acc = 0.0;
    for (blk, entries) in &form.psd {
        let xb = &x[*blk];
        for &(r, c, v) in entries {
            acc += v * xb[(r, c)];
        }
    }
    for &(k, v) in &form.lp {
        acc += v * xl[k];
    }
    acc
}

fn inner(a: &[DMatrix<f64>], al: &DVector<f64>, b: &[DMatrix<f64>], bl: &DVector<f64>) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.dot(y)).sum::<f64>() + al.dot(bl)
}

fn frob(a: &[DMatrix<f64>], al: &DVector<f64>) -> f64 {
    (a.iter().map(|x| x.norm_squared()).sum::<f64>() + al.norm_squared()).sqrt()
}

fn sym(m: DMatrix<f64>) -> DMatrix<f64> {
    let t = m.transpose();
    (m + t) * 0.5
}

/// Largest `α ≤ cap` with `X + α dX ⪰ 0`, given the Cholesky factor of `X`.
fn psd_step(chol: &Cholesky<f64, Dyn>, dx: &DMatrix<f64>) -> f64 {
    let l = chol.l();
    let w = match l.solve_lower_triangular(dx) {
        Some(w) => w,
        None => return 0.0,
    };
    let w = match l.solve_lower_triangular(&w.transpose()) {
        Some(w) => w,
        None => return 0.0,
    };
    let w = sym(w);
    let lmin = w.symmetric_eigenvalues().min();
    if lmin < 0.0 {
        -1.0 / lmin
    } else {
        f64::INFINITY
    }
}

fn lp_step(x: &DVector<f64>, dx: &DVector<f64>) -> f64 {
    let mut a = f64::INFINITY;
    for k in 0..x.len() {
        if dx[k] < 0.0 {
            a = a.min(-x[k] / dx[k]);
        }
    }
    a
}

fn scalar_step(x: f64, dx: f64) -> f64 {
    if dx < 0.0 {
        -x / dx
    } else {
        f64::INFINITY
    }
}

struct Factors {
    chol_x: Vec<Cholesky<f64, Dyn>>,
    chol_s: Vec<Cholesky<f64, Dyn>>,
    sinv: Vec<DMatrix<f64>>,
    schur: Cholesky<f64, Dyn>,
    /// D(c) where D(V) = sym(X V S⁻¹) and x c / s on the LP part.
    dc: Vec<DMatrix<f64>>,
    dcl: DVector<f64>,
    /// Solution of M q = b + A D(c).
    q: DVector<f64>,
}

impl<'a> Workspace<'a> {
    fn factor(&self, pt: &Point) -> Result<Factors, SdpError> {
        let mut chol_x = Vec::with_capacity(pt.x.len());
        let mut chol_s = Vec::with_capacity(pt.x.len());
        let mut sinv = Vec::with_capacity(pt.x.len());
        for (xb, sb) in pt.x.iter().zip(&pt.s) {
            let cx = Cholesky::new(xb.clone())
                .ok_or_else(|| SdpError::Numerical("primal block lost definiteness".into()))?;
            let cs = Cholesky::new(sb.clone())
                .ok_or_else(|| SdpError::Numerical("dual block lost definiteness".into()))?;
            sinv.push(sym(cs.inverse()));
            chol_x.push(cx);
            chol_s.push(cs);
        }
        let mm = self.schur(&pt.x, &sinv, &pt.xl, &pt.sl);
        let schur = factor_spd(mm)?;
        let (dc, dcl) = self.apply_d(pt, &sinv, &self.c_psd, &self.c_lp);
        let rhs = &self.p.b + self.apply_a(&dc, &dcl);
        let q = schur.solve(&rhs);
        Ok(Factors { chol_x, chol_s, sinv, schur, dc, dcl, q })
    }

    fn apply_d(
        &self,
        pt: &Point,
        sinv: &[DMatrix<f64>],
        v: &[DMatrix<f64>],
        vl: &DVector<f64>,
    ) -> (Vec<DMatrix<f64>>, DVector<f64>) {
        let d = pt
            .x
            .iter()
            .zip(sinv)
            .zip(v)
            .map(|((xb, sb), vb)| sym(xb * vb * sb))
            .collect();
        let dl = DVector::from_fn(self.p.lp_dim, |k, _| pt.xl[k] * vl[k] / pt.sl[k]);
        (d, dl)
    }

    /// Solves the Newton system for target `rc` (complementarity right-hand
    /// side), `rtk` (τκ right-hand side) and residual weight `eta`.
    #[allow(clippy::too_many_arguments)]
    fn direction(
        &self,
        pt: &Point,
        f: &Factors,
        res: &Residuals,
        eta: f64,
        rc: &[DMatrix<f64>],
        rcl: &DVector<f64>,
        rtk: f64,
    ) -> Direction {
        // u = R_c - η D(r_d)
        let (drd, drdl) = self.apply_d(pt, &f.sinv, &res.rd, &res.rdl);
        let u: Vec<DMatrix<f64>> = rc.iter().zip(&drd).map(|(a, b)| a - b * eta).collect();
        let ul = rcl - &drdl * eta;
        let rhs_p = &res.rp * eta - self.apply_a(&u, &ul);
        let p = f.schur.solve(&rhs_p);
        // D(Aᵀp)
        let (atp, atpl) = self.apply_at(&p);
        let (datp, datpl) = self.apply_d(pt, &f.sinv, &atp, &atpl);
        let (atq, atql) = self.apply_at(&f.q);
        let (datq, datql) = self.apply_d(pt, &f.sinv, &atq, &atql);

        let c_dc = inner(&self.c_psd, &self.c_lp, &f.dc, &f.dcl);
        let c_datq = inner(&self.c_psd, &self.c_lp, &datq, &datql);
        let b_q = self.p.b.dot(&f.q);
        let denom = c_dc - c_datq + b_q + pt.kappa / pt.tau;

        let c_u = inner(&self.c_psd, &self.c_lp, &u, &ul);
        let c_datp = inner(&self.c_psd, &self.c_lp, &datp, &datpl);
        let b_p = self.p.b.dot(&p);
        let num = eta * res.rg + c_u + c_datp - b_p + rtk / pt.tau;
        let dtau = num / denom;

        let dy = &p + &f.q * dtau;
        // ds = η r_d + c dτ - Aᵀdy
        let (atdy, atdyl) = self.apply_at(&dy);
        let ds: Vec<DMatrix<f64>> = res
            .rd
            .iter()
            .zip(&self.c_psd)
            .zip(&atdy)
            .map(|((rd, c), at)| sym(rd * eta + c * dtau - at))
            .collect();
        let dsl = &res.rdl * eta + &self.c_lp * dtau - atdyl;
        // dx = R_c - D(ds)
        let (dds, ddsl) = self.apply_d(pt, &f.sinv, &ds, &dsl);
        let dx: Vec<DMatrix<f64>> = rc.iter().zip(dds).map(|(r, d)| sym(r - d)).collect();
        let dxl = rcl - ddsl;
        let dkappa = (rtk - pt.kappa * dtau) / pt.tau;
        Direction { x: dx, xl: dxl, s: ds, sl: dsl, y: dy, tau: dtau, kappa: dkappa }
    }

    fn max_step(&self, pt: &Point, f: &Factors, d: &Direction) -> f64 {
        let mut a = f64::INFINITY;
        for (k, (dx, ds)) in d.x.iter().zip(&d.s).enumerate() {
            a = a.min(psd_step(&f.chol_x[k], dx));
            a = a.min(psd_step(&f.chol_s[k], ds));
        }
        a = a.min(lp_step(&pt.xl, &d.xl));
        a = a.min(lp_step(&pt.sl, &d.sl));
        a = a.min(scalar_step(pt.tau, d.tau));
        a = a.min(scalar_step(pt.kappa, d.kappa));
        a
    }
}

fn factor_spd(mut mm: DMatrix<f64>) -> Result<Cholesky<f64, Dyn>, SdpError> {
    if mm.nrows() == 0 {
        return Cholesky::new(mm).ok_or_else(|| SdpError::Numerical("empty Schur complement".into()));
    }
    let scale = mm.diagonal().amax().max(1e-300);
    let mut shift = 0.0;
    for _ in 0..8 {
        if let Some(ch) = Cholesky::new(mm.clone()) {
            return Ok(ch);
        }
        shift = if shift == 0.0 { 1e-14 * scale } else { shift * 100.0 };
        for i in 0..mm.nrows() {
            mm[(i, i)] += shift;
        }
    }
    Err(SdpError::Numerical("Schur complement is not positive definite".into()))
}

struct Residuals {
    rp: DVector<f64>,
    rd: Vec<DMatrix<f64>>,
    rdl: DVector<f64>,
    rg: f64,
}

fn residuals(ws: &Workspace, pt: &Point) -> Residuals {
    let rp = &ws.p.b * pt.tau - ws.apply_a(&pt.x, &pt.xl);
    let (aty, atyl) = ws.apply_at(&pt.y);
    let rd: Vec<DMatrix<f64>> = ws
        .c_psd
        .iter()
        .zip(&aty)
        .zip(&pt.s)
        .map(|((c, a), s)| c * pt.tau - a - s)
        .collect();
    let rdl = &ws.c_lp * pt.tau - atyl - &pt.sl;
    let rg = pt.kappa + ws.objective(&pt.x, &pt.xl) - ws.p.b.dot(&pt.y);
    Residuals { rp, rd, rdl, rg }
}

struct Outcome {
    status: SdpStatus,
    point: Point,
    iterations: usize,
    primal_residual: f64,
    dual_residual: f64,
    gap: f64,
}

fn run(ws: &Workspace, tol: &Tolerances) -> Outcome {
    let p = ws.p;
    let mut pt = Point {
        x: p.psd_dims.iter().map(|&n| DMatrix::identity(n, n)).collect(),
        xl: DVector::from_element(p.lp_dim, 1.0),
        s: p.psd_dims.iter().map(|&n| DMatrix::identity(n, n)).collect(),
        sl: DVector::from_element(p.lp_dim, 1.0),
        y: DVector::zeros(p.m()),
        tau: 1.0,
        kappa: 1.0,
    };
    let bnorm = 1.0 + p.b.norm();
    let cnorm = 1.0 + frob(&ws.c_psd, &ws.c_lp);
    let mut last = (f64::INFINITY, f64::INFINITY, f64::INFINITY);
    let mut best: Option<(f64, Point)> = None;

    for iter in 0..tol.max_iterations {
        let res = residuals(ws, &pt);
        let pres = res.rp.norm() / pt.tau / bnorm;
        let dres = frob(&res.rd, &res.rdl) / pt.tau / cnorm;
        let pobj = ws.objective(&pt.x, &pt.xl) / pt.tau;
        let dobj = p.b.dot(&pt.y) / pt.tau;
        let gap = (pobj - dobj).abs() / (1.0 + 0.5 * (pobj.abs() + dobj.abs()));
        last = (pres, dres, gap);
        let merit = pres.max(dres).max(gap);
        if best.as_ref().is_none_or(|(m, _)| merit < *m) {
            best = Some((merit, pt.clone()));
        }
        if pres <= tol.feasibility && dres <= tol.feasibility && gap <= tol.gap {
            return Outcome { status: SdpStatus::Optimal, point: pt, iterations: iter, primal_residual: pres, dual_residual: dres, gap };
        }
        // Farkas certificates.
        let by = p.b.dot(&pt.y);
        if by > 0.0 {
            let (aty, atyl) = ws.apply_at(&pt.y);
            let r: Vec<DMatrix<f64>> = aty.iter().zip(&pt.s).map(|(a, s)| a + s).collect();
            let rl = atyl + &pt.sl;
            if frob(&r, &rl) / by <= tol.infeasibility && pt.tau <= 1e-3 * pt.kappa.max(1.0) {
                return Outcome { status: SdpStatus::PrimalInfeasible, point: pt, iterations: iter, primal_residual: pres, dual_residual: dres, gap };
            }
        }
        let cx = ws.objective(&pt.x, &pt.xl);
        if cx < 0.0 {
            let ax = ws.apply_a(&pt.x, &pt.xl);
            if ax.norm() / (-cx) <= tol.infeasibility && pt.tau <= 1e-3 * pt.kappa.max(1.0) {
                return Outcome { status: SdpStatus::DualInfeasible, point: pt, iterations: iter, primal_residual: pres, dual_residual: dres, gap };
            }
        }

        let mu = (inner(&pt.x, &pt.xl, &pt.s, &pt.sl) + pt.tau * pt.kappa) / ws.nu;
        let f = match ws.factor(&pt) {
            Ok(f) => f,
            Err(_) => break,
        };
        // Predictor.
        let rc_aff: Vec<DMatrix<f64>> = pt.x.iter().map(|x| -x).collect();
        let rcl_aff = -&pt.xl;
        let d_aff = ws.direction(&pt, &f, &res, 1.0, &rc_aff, &rcl_aff, -pt.tau * pt.kappa);
        let a_aff = ws.max_step(&pt, &f, &d_aff).min(1.0);
        let mu_aff = {
            let mut acc = 0.0;
            for k in 0..pt.x.len() {
                let xa = &pt.x[k] + &d_aff.x[k] * a_aff;
                let sa = &pt.s[k] + &d_aff.s[k] * a_aff;
                acc += xa.dot(&sa);
            }
            let xla = &pt.xl + &d_aff.xl * a_aff;
            let sla = &pt.sl + &d_aff.sl * a_aff;
            acc += xla.dot(&sla);
            acc += (pt.tau + a_aff * d_aff.tau) * (pt.kappa + a_aff * d_aff.kappa);
            acc / ws.nu
        };
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);
        // Corrector.
        let rc: Vec<DMatrix<f64>> = (0..pt.x.len())
            .map(|k| {
                let corr = sym(&d_aff.x[k] * &d_aff.s[k] * &f.sinv[k]);
                &f.sinv[k] * (sigma * mu) - &pt.x[k] - corr
            })
            .collect();
        let rcl = DVector::from_fn(p.lp_dim, |k, _| {
            sigma * mu / pt.sl[k] - pt.xl[k] - d_aff.xl[k] * d_aff.sl[k] / pt.sl[k]
        });
        let rtk = sigma * mu - pt.tau * pt.kappa - d_aff.tau * d_aff.kappa;
        let d = ws.direction(&pt, &f, &res, 1.0 - sigma, &rc, &rcl, rtk);
        let amax = ws.max_step(&pt, &f, &d);
        let alpha = (STEP_FRACTION * amax).min(1.0);
        if !alpha.is_finite() || alpha < 1e-12 {
            break;
        }
        for k in 0..pt.x.len() {
            pt.x[k] = sym(&pt.x[k] + &d.x[k] * alpha);
            pt.s[k] = sym(&pt.s[k] + &d.s[k] * alpha);
        }
        pt.xl += &d.xl * alpha;
        pt.sl += &d.sl * alpha;
        pt.y += &d.y * alpha;
        pt.tau += alpha * d.tau;
        pt.kappa += alpha * d.kappa;
        if !(pt.tau.is_finite() && pt.kappa.is_finite()) {
            break;
        }
    }
    let (pt, iterations) = match best {
        Some((_, b)) => (b, tol.max_iterations),
        None => (pt, tol.max_iterations),
    };
    Outcome { status: SdpStatus::NumericalFailure, point: pt, iterations, primal_residual: last.0, dual_residual: last.1, gap: last.2 }
}

pub(crate) fn solve(problem: &SdpProblem, tol: &Tolerances) -> Result<SdpSolution, SdpError> {
    problem.validate()?;
    let real = RealProblem::from_problem(problem);
    let ws = Workspace::new(&real);
    let out = run(&ws, tol);
    let pt = &out.point;
    let cx = ws.objective(&pt.x, &pt.xl);
    let by = real.b.dot(&pt.y);
    // Optimal iterates are dehomogenized by τ; rays are normalized so the
    // certificate's objective equals one.
    let (sx, sy) = match out.status {
        SdpStatus::PrimalInfeasible => (1.0 / pt.tau.max(1e-300), 1.0 / by),
        SdpStatus::DualInfeasible => (-1.0 / cx, 1.0 / pt.tau.max(1e-300)),
        _ => (1.0 / pt.tau, 1.0 / pt.tau),
    };
    let mut primal = Vec::with_capacity(problem.blocks.len());
    let mut dual_slack = Vec::with_capacity(problem.blocks.len());
    for (kind, place) in problem.blocks.iter().zip(&real.placement) {
        match (*kind, *place) {
            (BlockKind::Hermitian(n), Placement::Psd { index, .. }) => {
                primal.push(BlockValue::Hermitian(extract_hermitian(&(&pt.x[index] * sx), n, 1.0)));
                dual_slack.push(BlockValue::Hermitian(extract_hermitian(&(&pt.s[index] * sy), n, 2.0)));
            }
            (BlockKind::Symmetric(_), Placement::Psd { index, .. }) => {
                primal.push(BlockValue::Symmetric(&pt.x[index] * sx));
                dual_slack.push(BlockValue::Symmetric(&pt.s[index] * sy));
            }
            (BlockKind::Nonneg(_), Placement::Lp { offset, dim }) => {
                primal.push(BlockValue::Nonneg(pt.xl.rows(offset, dim) * sx));
                dual_slack.push(BlockValue::Nonneg(pt.sl.rows(offset, dim) * sy));
            }
            _ => unreachable!("placement mismatch"),
        }
    }
    let y = &pt.y * sy;
    let (pv, dv) = (cx * sx, by * sy);
    Ok(SdpSolution {
        status: out.status,
        primal_value: pv,
        dual_value: dv,
        primal,
        dual_slack,
        dual: y,
        gap: out.gap,
        primal_residual: out.primal_residual,
        dual_residual: out.dual_residual,
        iterations: out.iterations,
    })
}
