//! The `check` and `oracle` subcommands: run the property suites and the
//! brute-force comparisons on default configurations, one JSON line each.

use serde::Serialize;

use dpg_core::norms::{
    check_interpolation, check_modular_norm_laws, check_modular_scaling, check_norm_equivalence,
};
use dpg_core::operator::{check_green, check_operator_monotonicity, check_scalar_monotonicity};
use dpg_core::oracle::{brute_force_unconstrained, reference_instances, GridSpec};
use dpg_core::{
    build_lattice, solve_monotone, CoefficientProfile, DoublePhaseParams, LatticeSpec,
    PropertyReport, SolverConfig,
};

pub struct CheckOptions {
    pub samples: usize,
    pub seed: u64,
}

/// Run every property suite on the default desk-scale configurations.
pub fn run_all_checks(opts: &CheckOptions) -> anyhow::Result<Vec<PropertyReport>> {
    let mut reports = Vec::new();
    let tag = |mut r: PropertyReport, label: String| {
        r.name = format!("{}[{}]", r.name, label);
        r
    };

    let graphs = [
        build_lattice(&LatticeSpec::new(2, 3))?,
        build_lattice(&LatticeSpec::new(3, 2))?,
    ];
    let profiles = [
        CoefficientProfile::Zero,
        CoefficientProfile::Constant { c: 1.0 },
        CoefficientProfile::Coercive { c: 1.0, s: 1.0 },
    ];
    let exponents = [(1.5, 2.5), (2.0, 4.0)];

    for g in &graphs {
        for profile in &profiles {
            for &(p, q) in &exponents {
                let params = DoublePhaseParams::from_profile(g, p, q, profile)?;
                let label = format!("N{}_{}_p{}_q{}", g.dim(), profile_name(profile), p, q);
                reports.push(tag(
                    check_green(g, opts.samples, &params, opts.seed)?,
                    label.clone(),
                ));
                reports.push(tag(
                    check_operator_monotonicity(g, opts.samples / 2, &params, opts.seed)?,
                    label,
                ));
            }
        }
    }

    let g = &graphs[0];
    for profile in &profiles {
        for &(p, q) in &exponents {
            let params = DoublePhaseParams::from_profile(g, p, q, profile)?;
            let label = format!("{}_p{}_q{}", profile_name(profile), p, q);
            reports.push(tag(
                check_modular_norm_laws(g, opts.samples, &params, opts.seed, 1e-9)?,
                label.clone(),
            ));
            reports.push(tag(
                check_modular_scaling(g, opts.samples, &params, opts.seed + 1, 1e-9)?,
                label,
            ));
        }
    }

    reports.push(tag(
        check_interpolation(g, opts.samples, opts.seed)?,
        "N2".into(),
    ));
    let bounded =
        DoublePhaseParams::from_profile(g, 1.5, 2.5, &CoefficientProfile::Constant { c: 1.0 })?;
    reports.push(tag(
        check_norm_equivalence(g, opts.samples, &bounded, opts.seed)?,
        "constant_1".into(),
    ));

    for p in [1.2, 1.5, 1.9, 2.0, 2.5, 4.0] {
        reports.push(tag(
            check_scalar_monotonicity(opts.samples * 100, p, opts.seed, 1e-12)?,
            format!("p{}", p),
        ));
    }

    Ok(reports)
}

fn profile_name(p: &CoefficientProfile) -> &'static str {
    match p {
        CoefficientProfile::Zero => "zero",
        CoefficientProfile::Constant { .. } => "constant",
        CoefficientProfile::Coercive { .. } => "coercive",
        CoefficientProfile::Periodic { .. } => "periodic",
        CoefficientProfile::BoundedPotential { .. } => "bounded_potential",
        CoefficientProfile::Custom { .. } => "custom",
    }
}

#[derive(Debug, Serialize)]
pub struct OracleComparison {
    pub instance: String,
    pub sup_diff: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Compare the descent solver against the zooming grid oracle on the frozen
/// small-instance set.
pub fn run_oracle_comparisons(tol: f64) -> anyhow::Result<Vec<OracleComparison>> {
    let grid = GridSpec {
        half_width: 2.0,
        points_per_dim: 65,
        zoom_rounds: 6,
    };
    let cfg = SolverConfig {
        grad_tol: 1e-10,
        max_iters: 2_000_000,
        ..SolverConfig::default()
    };
    let mut out = Vec::new();
    for inst in reference_instances() {
        let oracle = brute_force_unconstrained(&inst.graph, &inst.source, &inst.params, &grid)?;
        let (u, report) = solve_monotone(&inst.graph, &inst.source, &inst.params, &cfg)?;
        let mut diff = u.clone();
        diff.axpy(-1.0, &oracle);
        let sup_diff = diff.sup_norm();
        out.push(OracleComparison {
            instance: inst.label.to_string(),
            sup_diff,
            tol,
            pass: report.converged && sup_diff <= tol,
        });
    }
    Ok(out)
}
