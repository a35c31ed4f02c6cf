//! Variational solvers.
//!
//! `solve_monotone` minimizes the strictly convex functional
//! `Phi(u) = I(u) - integral(f u)` by Armijo-backtracking descent on the exact
//! gradient; its minimizer is the unique solution of `L(u) = f` on the box.
//!
//! `minimize_constrained` performs projected descent for
//! `inf { I(u) : J(u) = t }` with `J(u) = 1/r integral |u|^r`: an Armijo step
//! on I followed by exact multiplicative rescaling back onto the constraint
//! sphere. Stationary points solve `L(u) = lambda |u|^(r-2) u` with the
//! multiplier reported by [`lagrange_multiplier`]. Because the constraint set
//! is not convex the solver multistarts from recorded seeds and keeps the
//! lowest-energy stationary point; a delta seed and a plateau seed are always
//! included so that the returned energy dominates those closed-form
//! candidates.

use std::time::Instant;

use rand::Rng;

use crate::error::{CoreError, Result};
use crate::graph::{gradient, Graph, VertexFunction};
use crate::norms::{lp_norm_edge, lp_norm_vertex, modular_edge};
use crate::operator::{apply, energy, energy_gradient};
use crate::params::DoublePhaseParams;
use crate::report::{SolveReport, SweepRow, SweepSummary};
use crate::sampling::rng_from_seed;
use crate::sum::csum;

/// Backtracking line-search parameters.
#[derive(Debug, Clone)]
pub struct StepRule {
    /// Trial step of the first iteration; later iterations start from twice
    /// the last accepted step.
    pub initial_step: f64,
    /// Multiplicative shrink factor in (0, 1).
    pub shrink: f64,
    /// Sufficient-decrease constant in (0, 1).
    pub armijo_c: f64,
}

impl Default for StepRule {
    fn default() -> Self {
        StepRule {
            initial_step: 1.0,
            shrink: 0.5,
            armijo_c: 1e-4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub max_iters: u64,
    /// Sup-norm tolerance on the stationarity residual.
    pub grad_tol: f64,
    pub step: StepRule,
    /// Multistart count for the constrained solver (minimum 1).
    pub restarts: u32,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iters: 400_000,
            grad_tol: 1e-8,
            step: StepRule::default(),
            restarts: 3,
            seed: 0,
        }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<()> {
        if !(self.grad_tol > 0.0) {
            return Err(CoreError::domain("grad_tol must be positive"));
        }
        if !(self.step.shrink > 0.0 && self.step.shrink < 1.0) {
            return Err(CoreError::domain("shrink factor must lie in (0,1)"));
        }
        if !(self.step.armijo_c > 0.0 && self.step.armijo_c < 1.0) {
            return Err(CoreError::domain("armijo constant must lie in (0,1)"));
        }
        if !(self.step.initial_step > 0.0) {
            return Err(CoreError::domain("initial step must be positive"));
        }
        Ok(())
    }
}

fn mu_dot(g: &Graph, a: &VertexFunction, b: &VertexFunction) -> f64 {
    csum((0..g.n_interior()).map(|x| g.mu(x) * a[x] * b[x]))
}

/// Solve `L(u) = f` from the zero start.
pub fn solve_monotone(
    g: &Graph,
    f: &VertexFunction,
    params: &DoublePhaseParams,
    cfg: &SolverConfig,
) -> Result<(VertexFunction, SolveReport)> {
    let start = VertexFunction::zeros(g.n_interior());
    solve_monotone_from(g, f, params, &start, cfg)
}

/// Solve `L(u) = f` by descent on Phi from a caller-chosen start. Phi
/// decreases monotonically across accepted iterations.
pub fn solve_monotone_from(
    g: &Graph,
    f: &VertexFunction,
    params: &DoublePhaseParams,
    start: &VertexFunction,
    cfg: &SolverConfig,
) -> Result<(VertexFunction, SolveReport)> {
    cfg.validate()?;
    if f.len() != g.n_interior() {
        return Err(CoreError::ShapeMismatch {
            expected: g.n_interior(),
            got: f.len(),
        });
    }
    if !f.is_finite() || !start.is_finite() {
        return Err(CoreError::numeric("inputs contain non-finite values"));
    }
    let clock = Instant::now();

    let phi = |u: &VertexFunction| energy(g, u, params) - mu_dot(g, f, u);

    let mut u = start.clone();
    let mut phi_u = phi(&u);
    if !phi_u.is_finite() {
        return Err(CoreError::numeric("objective is not finite at the start"));
    }

    let mut step = cfg.step.initial_step;
    let mut iters = 0u64;
    let mut converged = false;
    let mut residual = f64::INFINITY;
    // Once energy differences fall below evaluation noise the Armijo test can
    // no longer certify decrease; past that floor, steps are accepted on a
    // strict drop of the (noise-free) gradient sup norm instead.
    let mut noise_floor = false;

    while iters <= cfg.max_iters {
        // gradient of Phi: mu * (L(u) - f)
        let mut grad = energy_gradient(g, &u, params)?;
        for x in 0..g.n_interior() {
            grad[x] -= g.mu(x) * f[x];
        }
        residual = grad.sup_norm();
        if residual <= cfg.grad_tol {
            converged = true;
            break;
        }
        if iters == cfg.max_iters {
            break;
        }

        let mut accepted = false;
        if !noise_floor {
            let g_norm2 = grad.dot(&grad);
            let trial = (2.0 * step).min(1e12);
            // decreases below ~50 eps of the objective cannot be certified
            // from function values
            if cfg.step.armijo_c * trial * g_norm2 < 1e-14 * (1.0 + phi_u.abs()) {
                noise_floor = true;
            }
        }
        if !noise_floor {
            let g_norm2 = grad.dot(&grad);
            let mut trial = (2.0 * step).min(1e12);
            while trial > 1e-300 {
                let mut cand = u.clone();
                cand.axpy(-trial, &grad);
                let phi_c = phi(&cand);
                if phi_c.is_nan() {
                    return Err(CoreError::numeric("NaN in line search"));
                }
                if phi_c <= phi_u - cfg.step.armijo_c * trial * g_norm2 {
                    u = cand;
                    phi_u = phi_c;
                    step = trial;
                    accepted = true;
                    break;
                }
                trial *= cfg.step.shrink;
            }
            if !accepted {
                noise_floor = true;
            }
        }
        if noise_floor && !accepted {
            // the l2 gradient norm contracts strictly under small enough
            // steps, unlike the sup norm which can need two steps
            let g_l2 = grad.dot(&grad);
            let mut trial = (2.0 * step).min(1e12);
            while trial > 1e-300 {
                let mut cand = u.clone();
                cand.axpy(-trial, &grad);
                let mut cand_grad = energy_gradient(g, &cand, params)?;
                for x in 0..g.n_interior() {
                    cand_grad[x] -= g.mu(x) * f[x];
                }
                let c_l2 = cand_grad.dot(&cand_grad);
                if c_l2.is_nan() {
                    return Err(CoreError::numeric("NaN in line search"));
                }
                if c_l2 < g_l2 {
                    u = cand;
                    step = trial;
                    accepted = true;
                    break;
                }
                trial *= cfg.step.shrink;
            }
        }
        iters += 1;
        if !accepted {
            break; // no measurable progress left at machine precision
        }
    }

    let report = SolveReport {
        converged,
        iters,
        energy: energy(g, &u, params),
        constraint: None,
        multiplier: None,
        residual_inf: residual,
        wall_ms: clock.elapsed().as_secs_f64() * 1e3,
        seed: cfg.seed,
        peak: Some(g.coords_of(u.peak_index()).to_vec()),
        restart_peaks: Vec::new(),
        converged_restarts: converged as u32,
        restarts: 1,
        sign_restarts: 0,
    };
    Ok((u, report))
}

/// The multiplier of the eigenvalue equation at `u`:
/// edge modular of grad u divided by the r-integral of |u|.
pub fn lagrange_multiplier(
    g: &Graph,
    u: &VertexFunction,
    params: &DoublePhaseParams,
    r: f64,
) -> Result<f64> {
    let den = csum(
        u.as_slice()
            .iter()
            .enumerate()
            .map(|(x, v)| g.mu(x) * v.abs().powf(r)),
    );
    if den == 0.0 {
        return Err(CoreError::domain("multiplier is undefined at u == 0"));
    }
    let grad = gradient(g, u)?;
    Ok(modular_edge(g, &grad, params) / den)
}

/// Sup norm over interior vertices of `L(u) - lambda |u|^(r-2) u`.
pub fn eigen_residual(
    g: &Graph,
    u: &VertexFunction,
    lambda: f64,
    params: &DoublePhaseParams,
    r: f64,
) -> Result<f64> {
    let lu = apply(g, u, params)?;
    let mut sup: f64 = 0.0;
    for x in 0..g.n_interior() {
        let rhs = lambda * u[x].abs().powf(r - 1.0).copysign(u[x]);
        sup = sup.max((lu[x] - rhs).abs());
    }
    Ok(sup)
}

/// The scaled indicator step candidate: value `n^(-N/r)` on the integer cube
/// `[-n/2, n/2)^N`, zero outside, scaled by `(r t)^(1/r)` so it satisfies
/// `J = t` exactly up to rounding.
pub fn plateau_candidate(g: &Graph, n: u32, r: f64, t: f64) -> Result<VertexFunction> {
    if n == 0 {
        return Err(CoreError::domain("plateau side must be positive"));
    }
    let dim = g.dim();
    // integer points of [-n/2, n/2): {-n/2 .. n/2 - 1} for even n,
    // {-(n-1)/2 .. (n-1)/2} for odd n
    let lo = if n % 2 == 0 {
        -(n as i64) / 2
    } else {
        -((n as i64 - 1) / 2)
    };
    let hi = lo + n as i64 - 1;
    let height = (n as f64).powf(-(dim as f64) / r) * (r * t).powf(1.0 / r);
    let mut u = VertexFunction::zeros(g.n_interior());
    let mut count = 0usize;
    for v in 0..g.n_interior() {
        if g.coords_of(v).iter().all(|&c| c >= lo && c <= hi) {
            u[v] = height;
            count += 1;
        }
    }
    if count != (n as usize).pow(dim as u32) {
        return Err(CoreError::domain(
            "plateau does not fit inside the interior box",
        ));
    }
    Ok(u)
}

/// Result of the constrained ground-state search.
#[derive(Debug, Clone)]
pub struct ConstrainedSolution {
    pub u: VertexFunction,
    pub multiplier: f64,
    pub report: SolveReport,
}

/// Minimize `I` on the sphere `J(u) = t` by projected Armijo descent with
/// multistart. See the module docs for the seeding policy.
pub fn minimize_constrained(
    g: &Graph,
    params: &DoublePhaseParams,
    r: f64,
    t: f64,
    cfg: &SolverConfig,
) -> Result<ConstrainedSolution> {
    minimize_constrained_seeded(g, params, r, t, cfg, &[])
}

/// As [`minimize_constrained`], with extra caller-provided seed candidates
/// (used by warm-started sweeps). Each extra candidate is projected onto the
/// constraint sphere and descended like any other restart.
pub fn minimize_constrained_seeded(
    g: &Graph,
    params: &DoublePhaseParams,
    r: f64,
    t: f64,
    cfg: &SolverConfig,
    extra_seeds: &[VertexFunction],
) -> Result<ConstrainedSolution> {
    cfg.validate()?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(CoreError::domain("constraint level t must be positive"));
    }
    if !(r > 1.0) || !r.is_finite() {
        return Err(CoreError::domain("constraint exponent r must exceed 1"));
    }
    if g.lattice_radius().is_some() {
        let n = g.dim() as f64;
        if params.p < n {
            let p_star = params.critical_exponent(g.dim())?;
            if r <= p_star {
                return Err(CoreError::domain(format!(
                    "supercritical exponent required: r = {} <= critical exponent {}",
                    r, p_star
                )));
            }
        }
    }
    let clock = Instant::now();

    // Seed candidates: delta at the most central interior vertex, the best
    // plateau (lattice only), caller extras, then folded-uniform randoms.
    let mut seeds: Vec<(u64, VertexFunction)> = Vec::new();
    let central = (0..g.n_interior())
        .min_by_key(|&v| (g.l1_norm_of(v), v))
        .expect("graph has interior vertices");
    let mut delta = VertexFunction::zeros(g.n_interior());
    delta[central] = 1.0;
    seeds.push((0, delta));
    if g.lattice_radius().is_some() {
        if let Some(w) = best_plateau(g, params, r, t)? {
            seeds.push((1, w));
        }
    }
    for (k, s) in extra_seeds.iter().enumerate() {
        if s.len() == g.n_interior() && s.is_finite() {
            seeds.push((100 + k as u64, s.clone()));
        }
    }
    let randoms = cfg.restarts.max(1) as u64;
    for k in 0..randoms {
        let mut rng = rng_from_seed(cfg.seed.wrapping_add(k));
        let mut s = VertexFunction::zeros(g.n_interior());
        for x in 0..g.n_interior() {
            s[x] = rng.gen_range(0.0..1.0f64) + 1e-3;
        }
        seeds.push((1000 + k, s));
    }

    let mut best: Option<(bool, f64, u64, VertexFunction, SolveReport)> = None;
    let mut converged_restarts = 0u32;
    let mut restart_peaks: Vec<(u64, Vec<i64>)> = Vec::new();
    let total_restarts = seeds.len() as u32;

    for (seed_id, start) in seeds {
        let (u, mut report) = descend_on_sphere(g, params, r, t, cfg, &start)?;
        report.seed = seed_id;
        restart_peaks.push((seed_id, g.coords_of(u.peak_index()).to_vec()));
        if report.converged {
            converged_restarts += 1;
        }
        let key = (!report.converged, report.energy, seed_id);
        let replace = match &best {
            None => true,
            Some((bc, be, bs, _, _)) => key < (*bc, *be, *bs),
        };
        if replace {
            best = Some((!report.converged, report.energy, seed_id, u, report));
        }
    }

    let (_, _, _, u, mut report) = best.expect("at least one restart ran");
    report.converged_restarts = converged_restarts;
    report.restarts = total_restarts;
    report.restart_peaks = restart_peaks;
    report.wall_ms = clock.elapsed().as_secs_f64() * 1e3;
    let multiplier = lagrange_multiplier(g, &u, params, r)?;
    report.multiplier = Some(multiplier);
    Ok(ConstrainedSolution {
        u,
        multiplier,
        report,
    })
}

/// Smallest-energy plateau candidate that fits in the box.
fn best_plateau(
    g: &Graph,
    params: &DoublePhaseParams,
    r: f64,
    t: f64,
) -> Result<Option<VertexFunction>> {
    let radius = match g.lattice_radius() {
        Some(r) => r,
        None => return Ok(None),
    };
    let mut best: Option<(f64, VertexFunction)> = None;
    let max_n = (2 * radius + 1).max(1) as u32;
    for n in 1..=max_n {
        match plateau_candidate(g, n, r, t) {
            Ok(w) => {
                let e = energy(g, &w, params);
                if best.as_ref().map_or(true, |(be, _)| e < *be) {
                    best = Some((e, w));
                }
            }
            Err(_) => break,
        }
    }
    Ok(best.map(|(_, w)| w))
}

/// Project onto `{J = t}` by exact multiplicative rescaling.
fn project_to_sphere(g: &Graph, u: &mut VertexFunction, r: f64, t: f64) -> bool {
    let s = csum(
        u.as_slice()
            .iter()
            .enumerate()
            .map(|(x, v)| g.mu(x) * v.abs().powf(r)),
    );
    if s == 0.0 || !s.is_finite() {
        return false;
    }
    u.scale((r * t / s).powf(1.0 / r));
    true
}

fn constraint_value(g: &Graph, u: &VertexFunction, r: f64) -> f64 {
    csum(
        u.as_slice()
            .iter()
            .enumerate()
            .map(|(x, v)| g.mu(x) * v.abs().powf(r)),
    ) / r
}

/// Squared l2 norm of `mu (L(u) - lambda |u|^(r-2) u)` with the Rayleigh
/// multiplier.
fn stationarity_residual_l2(
    g: &Graph,
    u: &VertexFunction,
    params: &DoublePhaseParams,
    r: f64,
) -> Result<f64> {
    let g_i = energy_gradient(g, u, params)?;
    let lambda = lagrange_multiplier(g, u, params, r)?;
    let mut res = crate::sum::CompensatedSum::new();
    for x in 0..g.n_interior() {
        let g_j = g.mu(x) * u[x].abs().powf(r - 1.0).copysign(u[x]);
        let d = g_i[x] - lambda * g_j;
        res.add(d * d);
    }
    Ok(res.value())
}

/// One projected-descent run from a single start.
fn descend_on_sphere(
    g: &Graph,
    params: &DoublePhaseParams,
    r: f64,
    t: f64,
    cfg: &SolverConfig,
    start: &VertexFunction,
) -> Result<(VertexFunction, SolveReport)> {
    let clock = Instant::now();
    let mut u = start.clone();
    u.abs_in_place();
    if !project_to_sphere(g, &mut u, r, t) {
        return Err(CoreError::domain("start vanishes; cannot project"));
    }

    let mut iters = 0u64;
    let mut converged = false;
    let mut sign_restarts = 0u32;

    'outer: for _pass in 0..3 {
        let mut energy_u = energy(g, &u, params);
        let mut step = cfg.step.initial_step;

        let mut noise_floor = false;
        while iters <= cfg.max_iters {
            let g_i = energy_gradient(g, &u, params)?;
            // gradient of J: mu |u|^(r-2) u
            let mut g_j = VertexFunction::zeros(g.n_interior());
            for x in 0..g.n_interior() {
                g_j[x] = g.mu(x) * u[x].abs().powf(r - 1.0).copysign(u[x]);
            }
            let lambda = lagrange_multiplier(g, &u, params, r)?;
            // eigen-equation residual: |L(u) - lambda |u|^(r-2) u| pointwise
            let mut res: f64 = 0.0;
            for x in 0..g.n_interior() {
                res = res.max((g_i[x] - lambda * g_j[x]).abs() / g.mu(x));
            }
            if res <= cfg.grad_tol {
                converged = true;
                break;
            }
            if iters == cfg.max_iters {
                break;
            }

            // tangential direction: remove the least-squares multiple of g_j
            let lam_ls = g_i.dot(&g_j) / g_j.dot(&g_j);
            let mut dir = g_i.clone();
            dir.axpy(-lam_ls, &g_j);
            let d_norm2 = dir.dot(&dir);

            let mut accepted = false;
            if !noise_floor
                && cfg.step.armijo_c * (2.0 * step).min(1e12) * d_norm2
                    < 1e-14 * (1.0 + energy_u.abs())
            {
                noise_floor = true;
            }
            if !noise_floor {
                let mut trial = (2.0 * step).min(1e12);
                while trial > 1e-300 {
                    let mut cand = u.clone();
                    cand.axpy(-trial, &dir);
                    if !project_to_sphere(g, &mut cand, r, t) {
                        trial *= cfg.step.shrink;
                        continue;
                    }
                    let energy_c = energy(g, &cand, params);
                    if energy_c.is_nan() {
                        return Err(CoreError::numeric("NaN in line search"));
                    }
                    if energy_c <= energy_u - cfg.step.armijo_c * trial * d_norm2 {
                        u = cand;
                        energy_u = energy_c;
                        step = trial;
                        accepted = true;
                        break;
                    }
                    trial *= cfg.step.shrink;
                }
                if !accepted {
                    noise_floor = true;
                }
            }
            if noise_floor && !accepted {
                // past the certification floor: accept on a strict drop of the
                // l2 stationarity residual
                let res_l2 = stationarity_residual_l2(g, &u, params, r)?;
                let mut trial = (2.0 * step).min(1e12);
                while trial > 1e-300 {
                    let mut cand = u.clone();
                    cand.axpy(-trial, &dir);
                    if !project_to_sphere(g, &mut cand, r, t) {
                        trial *= cfg.step.shrink;
                        continue;
                    }
                    let c_l2 = stationarity_residual_l2(g, &cand, params, r)?;
                    if c_l2 < res_l2 {
                        energy_u = energy(g, &cand, params);
                        u = cand;
                        step = trial;
                        accepted = true;
                        break;
                    }
                    trial *= cfg.step.shrink;
                }
            }
            iters += 1;
            if !accepted {
                break; // no measurable progress left at machine precision
            }
        }

        // Descent does not preserve sign; a converged iterate that changed
        // sign restarts from |u|, which cannot increase the energy.
        if converged && u.as_slice().iter().any(|&v| v < 0.0) {
            u.abs_in_place();
            project_to_sphere(g, &mut u, r, t);
            sign_restarts += 1;
            converged = false;
            continue 'outer;
        }
        break;
    }

    // Tighten the constraint once more so J(u) = t to rescale precision.
    project_to_sphere(g, &mut u, r, t);
    let lambda = lagrange_multiplier(g, &u, params, r)?;
    let report = SolveReport {
        converged,
        iters,
        energy: energy(g, &u, params),
        constraint: Some(constraint_value(g, &u, r)),
        multiplier: Some(lambda),
        residual_inf: eigen_residual(g, &u, lambda, params, r)?,
        wall_ms: clock.elapsed().as_secs_f64() * 1e3,
        seed: 0,
        peak: Some(g.coords_of(u.peak_index()).to_vec()),
        restart_peaks: Vec::new(),
        converged_restarts: 0,
        restarts: 1,
        sign_restarts,
    };
    Ok((u, report))
}

/// One sweep point: a constrained solve plus the per-row diagnostics needed
/// by [`summarize_sweep`].
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub row: SweepRow,
    pub u: VertexFunction,
    /// ||grad u||_p / ||u||_r measured on this solution.
    pub sobolev_ratio: f64,
    /// Whether p I/(rt) <= lambda <= q I/(rt) held.
    pub sandwich_ok: bool,
}

/// Solve a single sweep point at constraint level `t`.
pub fn sweep_point(
    g: &Graph,
    params: &DoublePhaseParams,
    r: f64,
    t: f64,
    cfg: &SolverConfig,
    extra_seeds: &[VertexFunction],
) -> Result<SweepPoint> {
    let sol = minimize_constrained_seeded(g, params, r, t, cfg, extra_seeds)?;
    let i_u = sol.report.energy;
    let lambda = sol.multiplier;

    // identity-level sandwich p I/(rt) <= lambda <= q I/(rt)
    let lo = params.p * i_u / (r * t);
    let hi = params.q * i_u / (r * t);
    let slack = 1e-9 * (1.0 + lambda.abs());
    let sandwich_ok = lo <= lambda + slack && lambda <= hi + slack;

    let grad = gradient(g, &sol.u)?;
    let sobolev_ratio = lp_norm_edge(g, &grad, params.p)? / lp_norm_vertex(g, &sol.u, r)?;

    Ok(SweepPoint {
        row: SweepRow {
            t,
            energy: i_u,
            lambda,
            residual: sol.report.residual_inf,
            iters: sol.report.iters,
            seed: sol.report.seed,
            converged: sol.report.converged,
        },
        u: sol.u,
        sobolev_ratio,
        sandwich_ok,
    })
}

/// Order points by t and fit the log-log slopes of the multiplier curve.
pub fn summarize_sweep(mut points: Vec<SweepPoint>) -> Result<SweepSummary> {
    if points.len() < 2 {
        return Err(CoreError::domain("sweep needs at least two points"));
    }
    points.sort_by(|a, b| a.row.t.total_cmp(&b.row.t));
    let sandwich_ok = points.iter().all(|p| p.sandwich_ok);
    let sobolev_ratio_min = points
        .iter()
        .map(|p| p.sobolev_ratio)
        .fold(f64::INFINITY, f64::min);
    let rows: Vec<SweepRow> = points.into_iter().map(|p| p.row).collect();

    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.converged && r.lambda > 0.0)
        .map(|r| (r.t.ln(), r.lambda.ln()))
        .collect();
    let slope_all = least_squares_slope(&pts);
    let two_point =
        |a: &SweepRow, b: &SweepRow| (b.lambda.ln() - a.lambda.ln()) / (b.t.ln() - a.t.ln());
    let slope_small_t = two_point(&rows[0], &rows[1]);
    let slope_large_t = two_point(&rows[rows.len() - 2], &rows[rows.len() - 1]);

    Ok(SweepSummary {
        all_converged: rows.iter().all(|r| r.converged),
        rows,
        slope_all,
        slope_small_t,
        slope_large_t,
        sandwich_ok,
        sobolev_ratio_min,
    })
}

/// Run the constrained solver across a list of constraint levels and fit the
/// log-log slopes of the multiplier curve.
///
/// With `warm_start` the points run in ascending t order and each run seeds
/// the next with the rescaled previous solution; otherwise the runs are
/// independent (and may be parallelized by the caller via [`sweep_point`]).
pub fn multiplier_sweep(
    g: &Graph,
    params: &DoublePhaseParams,
    r: f64,
    t_values: &[f64],
    cfg: &SolverConfig,
    warm_start: bool,
) -> Result<SweepSummary> {
    if t_values.len() < 2 {
        return Err(CoreError::domain("sweep needs at least two points"));
    }
    let mut ts = t_values.to_vec();
    ts.sort_by(f64::total_cmp);

    let mut points = Vec::with_capacity(ts.len());
    let mut prev: Option<VertexFunction> = None;
    for &t in &ts {
        let seeds: Vec<VertexFunction> = match (&prev, warm_start) {
            (Some(u), true) => vec![u.clone()],
            _ => vec![],
        };
        let point = sweep_point(g, params, r, t, cfg, &seeds)?;
        if warm_start {
            prev = Some(point.u.clone());
        }
        points.push(point);
    }
    summarize_sweep(points)
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_lattice, LatticeSpec};
    use crate::params::CoefficientProfile;

    fn box_2d(r: i64) -> Graph {
        build_lattice(&LatticeSpec::new(2, r)).unwrap()
    }

    fn path_of_three() -> Graph {
        Graph::from_dump(
            "v 0 0 1\nv 1 1 1\nv 2 2 1\nv 3 -1 0\nv 4 3 0\ne 3 0 1\ne 0 1 1\ne 1 2 1\ne 2 4 1\n",
        )
        .unwrap()
    }

    #[test]
    fn zero_source_needs_zero_iterations() {
        let g = box_2d(2);
        let params = DoublePhaseParams::constant(&g, 1.5, 2.5, 1.0).unwrap();
        let f = VertexFunction::zeros(g.n_interior());
        let (u, report) = solve_monotone(&g, &f, &params, &SolverConfig::default()).unwrap();
        assert!(report.converged);
        assert_eq!(report.iters, 0);
        assert!(u.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn path_of_three_matches_tridiagonal_solve() {
        let g = path_of_three();
        let params = DoublePhaseParams::constant(&g, 2.0, 3.0, 0.0).unwrap();
        let mut f = VertexFunction::zeros(3);
        f[g.vertex_at(&[1]).unwrap()] = 1.0;
        let cfg = SolverConfig {
            grad_tol: 1e-12,
            ..SolverConfig::default()
        };
        let (u, report) = solve_monotone(&g, &f, &params, &cfg).unwrap();
        assert!(report.converged, "residual {}", report.residual_inf);
        let expect = [0.5, 1.0, 0.5];
        for (i, coord) in [0i64, 1, 2].iter().enumerate() {
            let v = g.vertex_at(&[*coord]).unwrap();
            assert!(
                (u[v] - expect[i]).abs() <= 1e-10,
                "u({}) = {}",
                coord,
                u[v]
            );
        }
    }

    #[test]
    fn monotone_solution_is_start_independent() {
        let g = box_2d(2);
        let params =
            DoublePhaseParams::from_profile(&g, 1.5, 2.5, &CoefficientProfile::Coercive {
                c: 1.0,
                s: 1.0,
            })
            .unwrap();
        let f = VertexFunction::delta(&g, &[0, 0]).unwrap();
        let cfg = SolverConfig {
            grad_tol: 1e-9,
            ..SolverConfig::default()
        };
        let mut rng = rng_from_seed(17);
        let mut starts = Vec::new();
        for _ in 0..2 {
            let mut s = VertexFunction::zeros(g.n_interior());
            for x in 0..g.n_interior() {
                s[x] = rng.gen_range(-0.5..0.5);
            }
            starts.push(s);
        }
        let (u1, r1) = solve_monotone_from(&g, &f, &params, &starts[0], &cfg).unwrap();
        let (u2, r2) = solve_monotone_from(&g, &f, &params, &starts[1], &cfg).unwrap();
        assert!(r1.converged && r2.converged);
        let mut diff = u1.clone();
        diff.axpy(-1.0, &u2);
        assert!(diff.sup_norm() <= 1e-6, "starts disagree by {}", diff.sup_norm());
    }

    #[test]
    fn monotone_regression_baseline() {
        // frozen at residual 1e-10; uniqueness makes the value stable
        let g = build_lattice(&LatticeSpec::new(2, 4)).unwrap();
        let params =
            DoublePhaseParams::from_profile(&g, 1.5, 2.5, &CoefficientProfile::Coercive {
                c: 1.0,
                s: 1.0,
            })
            .unwrap();
        let f = VertexFunction::delta(&g, &[0, 0]).unwrap();
        let cfg = SolverConfig {
            grad_tol: 1e-10,
            max_iters: 2_000_000,
            ..SolverConfig::default()
        };
        let (u, report) = solve_monotone(&g, &f, &params, &cfg).unwrap();
        assert!(report.converged);
        for (coords, expect) in [
            ([0i64, 0], 0.075244741454334),
            ([1, 0], 0.016273605743241),
            ([2, 2], 0.003908432982147),
        ] {
            let v = g.vertex_at(&coords).unwrap();
            assert!(
                (u[v] - expect).abs() <= 1e-6,
                "u({:?}) = {} drifted from baseline {}",
                coords,
                u[v],
                expect
            );
        }
        assert!((report.energy - 0.049667349202027).abs() <= 1e-9);
    }

    #[test]
    fn multiplier_closed_forms() {
        let g = box_2d(2);
        let delta = VertexFunction::delta(&g, &[0, 0]).unwrap();

        let p0 = DoublePhaseParams::constant(&g, 1.5, 2.5, 0.0).unwrap();
        let lam = lagrange_multiplier(&g, &delta, &p0, 7.0).unwrap();
        assert!((lam - 4.0).abs() < 1e-13);

        let p1 = DoublePhaseParams::constant(&g, 2.0, 4.0, 1.0).unwrap();
        let lam = lagrange_multiplier(&g, &delta, &p1, 7.0).unwrap();
        assert!((lam - 8.0).abs() < 1e-13);

        let zero = VertexFunction::zeros(g.n_interior());
        assert!(lagrange_multiplier(&g, &zero, &p0, 7.0).is_err());
    }

    #[test]
    fn multiplier_scaling_law_in_pure_power_case() {
        let g = box_2d(2);
        let params = DoublePhaseParams::constant(&g, 1.5, 2.5, 0.0).unwrap();
        let mut rng = rng_from_seed(4);
        let u = crate::sampling::random_vertex_fn(&g, &mut rng, &Default::default());
        let r = 7.0;
        let base = lagrange_multiplier(&g, &u, &params, r).unwrap();
        for c in [0.3, 2.0, 11.0] {
            let lam = lagrange_multiplier(&g, &u.scaled(c), &params, r).unwrap();
            let expect = c.powf(params.p - r) * base;
            assert!(
                (lam - expect).abs() <= 1e-10 * expect.abs(),
                "c={}: {} vs {}",
                c,
                lam,
                expect
            );
        }
    }

    #[test]
    fn eigen_residual_examples() {
        let g = box_2d(2);
        let p0 = DoublePhaseParams::constant(&g, 1.5, 2.5, 0.0).unwrap();
        let zero = VertexFunction::zeros(g.n_interior());
        assert_eq!(eigen_residual(&g, &zero, 3.0, &p0, 7.0).unwrap(), 0.0);

        // delta is not an eigenfunction: the defect at its neighbours is 1
        let delta = VertexFunction::delta(&g, &[0, 0]).unwrap();
        let lam = lagrange_multiplier(&g, &delta, &p0, 7.0).unwrap();
        let res = eigen_residual(&g, &delta, lam, &p0, 7.0).unwrap();
        assert!((res - 1.0).abs() < 1e-13);
    }

    #[test]
    fn plateau_candidates_sit_on_the_sphere() {
        let g = box_2d(3);
        let r = 7.0;
        let t = 1.0 / r;
        for n in 1..=6 {
            let w = plateau_candidate(&g, n, r, t).unwrap();
            let j = constraint_value(&g, &w, r);
            assert!((j - t).abs() <= 1e-12 * t, "n={} J={}", n, j);
        }
        assert!(plateau_candidate(&g, 8, r, t).is_err());
    }

    #[test]
    fn constrained_small_instance_converges_positive() {
        let g = box_2d(2);
        let params =
            DoublePhaseParams::from_profile(&g, 1.5, 2.5, &CoefficientProfile::Coercive {
                c: 1.0,
                s: 1.0,
            })
            .unwrap();
        let r = 7.0;
        let t = 1.0 / r;
        let cfg = SolverConfig {
            grad_tol: 1e-7,
            restarts: 2,
            seed: 9,
            ..SolverConfig::default()
        };
        let sol = minimize_constrained(&g, &params, r, t, &cfg).unwrap();
        assert!(sol.report.converged, "residual {}", sol.report.residual_inf);

        // constraint holds to rescale precision
        let j = constraint_value(&g, &sol.u, r);
        assert!((j - t).abs() <= 1e-12 * t);

        // positivity
        assert!(sol.u.as_slice().iter().all(|&v| v > 0.0));

        // sandwich around the achieved energy
        let i_u = sol.report.energy;
        let lo = params.p * i_u / (r * t);
        let hi = params.q * i_u / (r * t);
        assert!(lo <= sol.multiplier + 1e-9 && sol.multiplier <= hi + 1e-9);

        // candidate domination: no worse than the scaled delta
        let delta = VertexFunction::delta(&g, &[0, 0]).unwrap();
        let scaled = delta.scaled((r * t).powf(1.0 / r));
        assert!(i_u <= energy(&g, &scaled, &params) + 1e-12);

        // stationarity residual matches the report
        let res = eigen_residual(&g, &sol.u, sol.multiplier, &params, r).unwrap();
        assert!((res - sol.report.residual_inf).abs() <= 1e-12 * (1.0 + res));
    }

    #[test]
    fn constrained_rejects_subcritical_exponent() {
        let g = box_2d(2);
        let params = DoublePhaseParams::constant(&g, 1.5, 2.5, 0.0).unwrap();
        // critical exponent is 6 here
        assert!(minimize_constrained(&g, &params, 5.0, 0.2, &SolverConfig::default()).is_err());
        assert!(minimize_constrained(&g, &params, 7.0, -1.0, &SolverConfig::default()).is_err());
    }

    #[test]
    fn sweep_slope_matches_homogeneity_on_tiny_instance() {
        let g = box_2d(2);
        let params = DoublePhaseParams::constant(&g, 1.5, 2.5, 0.0).unwrap();
        let r = 7.0;
        let ts: Vec<f64> = (-2..=2).map(|k| 2f64.powi(k)).collect();
        let cfg = SolverConfig {
            grad_tol: 1e-7,
            restarts: 1,
            seed: 3,
            ..SolverConfig::default()
        };
        let summary = multiplier_sweep(&g, &params, r, &ts, &cfg, true).unwrap();
        assert!(summary.all_converged);
        assert!(summary.sandwich_ok);
        let expect = params.p / r - 1.0;
        assert!(
            (summary.slope_all - expect).abs() < 0.05,
            "slope {} vs {}",
            summary.slope_all,
            expect
        );
        for w in summary.rows.windows(2) {
            assert!(w[1].lambda < w[0].lambda, "lambda must strictly decrease");
        }
    }
}
