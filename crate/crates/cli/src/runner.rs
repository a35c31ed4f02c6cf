//! Mode execution and artifact writing: solution dumps, a JSON report, and
//! the sweep CSV with its frozen column order.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use dpg_core::solver::sweep_point;
use dpg_core::{
    build_lattice, minimize_constrained, multiplier_sweep, solve_monotone, summarize_sweep,
    CoefficientProfile, DoublePhaseParams, Graph, LatticeSpec, SolveReport, SweepSummary,
    VertexFunction,
};

use crate::config::{ExperimentConfig, Mode};

pub const CSV_HEADER: &str = "t,I,lambda,residual,iters,seed,converged";

#[derive(Debug, Serialize)]
pub struct RunEntry {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    pub radius_used: i64,
    /// Fraction of the constraint mass within l1 distance R/2 of the peak.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass_fraction: Option<f64>,
    pub refined: bool,
    pub report: SolveReport,
    pub solution_file: String,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub config: ExperimentConfig,
    pub runs: Vec<RunEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSummary>,
}

pub struct RunOutcome {
    pub all_converged: bool,
    pub report_path: PathBuf,
}

/// Execute the configured mode, writing artifacts under `output_dir`.
pub fn run(config: &ExperimentConfig, base: &Path) -> Result<RunOutcome> {
    let out_dir = base.join(&config.output_dir);
    fs::create_dir_all(&out_dir)
        .with_context(|| format!("creating output dir {}", out_dir.display()))?;

    let graph = build_graph(config)?;
    let profile = config
        .build_coefficient(&graph, base)
        .map_err(|e| anyhow::anyhow!("{}", e))?;

    if config.dump_graph {
        fs::write(out_dir.join("graph.dump"), graph.to_dump())?;
    }

    let mut runs = Vec::new();
    let mut sweep_summary = None;

    match &config.mode {
        Mode::Monotone { .. } => {
            let params = make_params(&graph, config, &profile)?;
            let f = config
                .build_source(&graph, base)
                .map_err(|e| anyhow::anyhow!("{}", e))?
                .expect("monotone mode has a source");
            let (u, report) = solve_monotone(&graph, &f, &params, &config.solver.to_core())?;
            let file = "solution_monotone.txt".to_string();
            write_solution(&out_dir.join(&file), config, &graph, &u, None)?;
            runs.push(RunEntry {
                label: "monotone".into(),
                t: None,
                radius_used: config.lattice.radius,
                mass_fraction: None,
                refined: false,
                report,
                solution_file: file,
            });
        }
        Mode::GroundState { t } => {
            let r = config.exponents.r.expect("validated");
            let entry = ground_state_run(config, base, &graph, &profile, r, *t, "ground_state")?;
            let spread = entry
                .mass_fraction
                .map_or(false, |m| m < 1.0 - 1e-6);
            runs.push(entry);
            // a custom table only covers the original box and cannot be
            // re-evaluated on a bigger one
            let refinable = !matches!(config.coefficient, crate::config::CoefficientSpec::Custom { .. });
            if spread && config.solver.refine && refinable {
                // mass is not concentrated: double the radius once
                let mut wide_cfg = config.clone();
                wide_cfg.lattice.radius = config.lattice.radius * 2;
                let wide = build_graph(&wide_cfg)?;
                let mut entry = ground_state_run(
                    &wide_cfg,
                    base,
                    &wide,
                    &profile,
                    r,
                    *t,
                    "ground_state_refined",
                )?;
                entry.refined = true;
                runs.push(entry);
            }
        }
        Mode::Sweep { t_values } => {
            let r = config.exponents.r.expect("validated");
            let params = make_params(&graph, config, &profile)?;
            let cfg = config.solver.to_core();
            let summary = if config.solver.workers > 1 {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(config.solver.workers)
                    .build()
                    .context("building worker pool")?;
                let points = pool.install(|| {
                    use rayon::prelude::*;
                    t_values
                        .par_iter()
                        .map(|&t| sweep_point(&graph, &params, r, t, &cfg, &[]))
                        .collect::<std::result::Result<Vec<_>, _>>()
                })?;
                summarize_sweep(points)?
            } else {
                multiplier_sweep(&graph, &params, r, t_values, &cfg, config.solver.warm_start)?
            };

            // per-point solutions, re-ordered by t like the CSV rows
            let mut csv = String::from(CSV_HEADER);
            csv.push('\n');
            for (i, row) in summary.rows.iter().enumerate() {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{},{}",
                    row.t, row.energy, row.lambda, row.residual, row.iters, row.seed, row.converged
                );
                runs.push(RunEntry {
                    label: format!("sweep_{:02}", i),
                    t: Some(row.t),
                    radius_used: config.lattice.radius,
                    mass_fraction: None,
                    refined: false,
                    report: SolveReport {
                        converged: row.converged,
                        iters: row.iters,
                        energy: row.energy,
                        constraint: Some(row.t),
                        multiplier: Some(row.lambda),
                        residual_inf: row.residual,
                        wall_ms: 0.0,
                        seed: row.seed,
                        peak: None,
                        restart_peaks: Vec::new(),
                        converged_restarts: 0,
                        restarts: 0,
                        sign_restarts: 0,
                    },
                    solution_file: String::new(),
                });
            }
            fs::write(out_dir.join("sweep.csv"), csv)?;
            sweep_summary = Some(summary);
        }
    }

    let all_converged = runs.iter().all(|r| r.report.converged);
    let report = RunReport {
        config: config.clone(),
        runs,
        sweep: sweep_summary,
    };
    let report_path = out_dir.join("report.json");
    fs::write(&report_path, serde_json::to_string_pretty(&report)?)?;
    Ok(RunOutcome {
        all_converged,
        report_path,
    })
}

fn build_graph(config: &ExperimentConfig) -> Result<Graph> {
    build_lattice(&LatticeSpec::new(
        config.lattice.dim,
        config.lattice.radius,
    ))
    .context("building lattice")
}

fn make_params(
    g: &Graph,
    config: &ExperimentConfig,
    profile: &CoefficientProfile,
) -> Result<DoublePhaseParams> {
    DoublePhaseParams::from_profile(g, config.exponents.p, config.exponents.q, profile)
        .context("building parameters")
}

fn ground_state_run(
    config: &ExperimentConfig,
    base: &Path,
    graph: &Graph,
    profile: &CoefficientProfile,
    r: f64,
    t: f64,
    label: &str,
) -> Result<RunEntry> {
    let out_dir = base.join(&config.output_dir);
    let params = make_params(graph, config, profile)?;
    let sol = minimize_constrained(graph, &params, r, t, &config.solver.to_core())?;
    let mass = concentrated_mass_fraction(graph, &sol.u, r, t, config.lattice.radius);
    let file = format!("solution_{}.txt", label);
    write_solution(&out_dir.join(&file), config, graph, &sol.u, Some(t))?;
    Ok(RunEntry {
        label: label.to_string(),
        t: Some(t),
        radius_used: config.lattice.radius,
        mass_fraction: Some(mass),
        refined: false,
        report: sol.report,
        solution_file: file,
    })
}

/// Share of `integral mu |u|^r` within l1 distance R/2 of the peak vertex.
fn concentrated_mass_fraction(
    g: &Graph,
    u: &VertexFunction,
    r: f64,
    t: f64,
    radius: i64,
) -> f64 {
    let peak = u.peak_index();
    let peak_coords = g.coords_of(peak).to_vec();
    let mut inside = 0.0;
    for v in 0..g.n_interior() {
        let d: i64 = g
            .coords_of(v)
            .iter()
            .zip(&peak_coords)
            .map(|(a, b)| (a - b).abs())
            .sum();
        if (d as f64) <= radius as f64 / 2.0 {
            inside += g.mu(v) * u[v].abs().powf(r);
        }
    }
    inside / (r * t)
}

/// Solution dump: a header line with the experiment identity, then one
/// `coords... value` line per interior vertex.
fn write_solution(
    path: &Path,
    config: &ExperimentConfig,
    g: &Graph,
    u: &VertexFunction,
    t: Option<f64>,
) -> Result<()> {
    let mut s = String::new();
    let r = config
        .exponents
        .r
        .map(|r| r.to_string())
        .unwrap_or_else(|| "-".into());
    let t = t.map(|t| t.to_string()).unwrap_or_else(|| "-".into());
    let _ = writeln!(
        s,
        "# N {} R {} p {} q {} r {} t {} profile {} seed {}",
        config.lattice.dim,
        config.lattice.radius,
        config.exponents.p,
        config.exponents.q,
        r,
        t,
        config.coefficient.name(),
        config.solver.seed,
    );
    for v in 0..g.n_interior() {
        for c in g.coords_of(v) {
            let _ = write!(s, "{} ", c);
        }
        let _ = writeln!(s, "{}", u[v]);
    }
    fs::write(path, s).with_context(|| format!("writing {}", path.display()))
}
