//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured numbers (run with `--nocapture` to see them).

use std::time::Instant;

use dpg_core::graph::{divergence, gradient};
use dpg_core::norms::{
    check_interpolation, check_modular_norm_laws, check_modular_scaling, luxemburg_norm_edge,
    luxemburg_norm_vertex_report, modular_edge,
};
use dpg_core::operator::{apply, check_green, check_scalar_monotonicity, energy, flux};
use dpg_core::oracle::{brute_force_unconstrained, GridSpec};
use dpg_core::sampling::rng_from_seed;
use dpg_core::*;
use rand::Rng;

fn lattice(dim: usize, radius: i64) -> Graph {
    build_lattice(&LatticeSpec::new(dim, radius)).unwrap()
}

fn coercive() -> CoefficientProfile {
    CoefficientProfile::Coercive { c: 1.0, s: 1.0 }
}

fn profile_params(g: &Graph, p: f64, q: f64, profile: &CoefficientProfile) -> DoublePhaseParams {
    DoublePhaseParams::from_profile(g, p, q, profile).unwrap()
}

#[test]
fn criterion_01_green_formula() {
    let clock = Instant::now();
    let graphs = [lattice(2, 3), lattice(3, 2)];
    let profiles = [
        CoefficientProfile::Zero,
        CoefficientProfile::Constant { c: 1.0 },
        coercive(),
    ];
    let exponents = [(1.5, 2.5), (2.0, 4.0)];
    let mut configs = 0;
    for g in &graphs {
        for profile in &profiles {
            for &(p, q) in &exponents {
                let params = profile_params(g, p, q, profile);
                let report = check_green(g, 500, &params, 7).unwrap();
                assert_eq!(
                    report.violations, 0,
                    "green violations for dim={} profile={:?} p={} q={}: {:?}",
                    g.dim(),
                    profile,
                    p,
                    q,
                    report.witness
                );
                configs += 1;
            }
        }
    }
    let elapsed = clock.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {:?}", elapsed);
    println!(
        "criterion 01: PASS — Green's formula, {} configs x 500 pairs, 0 violations, {:?}",
        configs, elapsed
    );
}

#[test]
fn criterion_02_modular_norm_laws_and_scaling() {
    let clock = Instant::now();
    let g = lattice(2, 2);
    let profiles = [
        CoefficientProfile::Zero,
        CoefficientProfile::Constant { c: 1.0 },
        coercive(),
    ];
    let mut suites = 0;
    for profile in &profiles {
        for &(p, q) in &[(1.5, 2.5), (2.0, 4.0)] {
            let params = profile_params(&g, p, q, profile);
            let laws = check_modular_norm_laws(&g, 1000, &params, 42, 1e-9).unwrap();
            assert_eq!(laws.violations, 0, "laws: {:?}", laws.witness);
            let scaling = check_modular_scaling(&g, 1000, &params, 43, 1e-9).unwrap();
            assert_eq!(scaling.violations, 0, "scaling: {:?}", scaling.witness);
            suites += 2;
        }
    }
    let elapsed = clock.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {:?}", elapsed);
    println!(
        "criterion 02: PASS — modular-norm laws + scaling bounds, {} suites x 1000 samples, 0 violations, {:?}",
        suites, elapsed
    );
}

#[test]
fn criterion_03_interpolation() {
    let clock = Instant::now();
    let g = lattice(2, 3);
    let report = check_interpolation(&g, 1000, 11).unwrap();
    assert_eq!(report.violations, 0, "witness: {:?}", report.witness);
    let elapsed = clock.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {:?}", elapsed);
    println!(
        "criterion 03: PASS — norm interpolation, 1000 samples, 0 violations, {:?}",
        elapsed
    );
}

#[test]
fn criterion_04_scalar_monotonicity() {
    let clock = Instant::now();
    for p in [1.1, 1.5, 1.9, 2.0, 2.5, 4.0] {
        let report = check_scalar_monotonicity(100_000, p, 99, 1e-12).unwrap();
        assert_eq!(report.violations, 0, "p={}: {:?}", p, report.witness);
    }
    println!(
        "criterion 04: PASS — scalar monotonicity, 6 exponents x 100000 pairs, 0 violations, {:?}",
        clock.elapsed()
    );
}

#[test]
fn criterion_05_closed_form_values() {
    // edge modular and Luxemburg norm of the delta gradient, both dimensions
    for (dim, radius) in [(2usize, 2i64), (3, 1)] {
        let g = lattice(dim, radius);
        let two_n = (2 * dim) as f64;
        let origin = vec![0i64; dim];
        let delta = VertexFunction::delta(&g, &origin).unwrap();
        let grad = gradient(&g, &delta).unwrap();
        for p in [1.5, 2.0, 3.0] {
            let params = DoublePhaseParams::constant(&g, p, p + 1.5, 0.0).unwrap();
            let rho = modular_edge(&g, &grad, &params);
            assert!(
                (rho - two_n).abs() <= 1e-10,
                "modular {} vs {}",
                rho,
                two_n
            );
            let norm = luxemburg_norm_edge(&g, &grad, &params, 1e-12).unwrap();
            assert!(
                (norm - two_n.powf(1.0 / p)).abs() <= 1e-10,
                "norm {} vs {}",
                norm,
                two_n.powf(1.0 / p)
            );
        }
    }

    // single site with a(0) = 1, p = 2, q = 4: modular(u/c) = 1 reads
    // c^-2 + c^-4 = 1; verify against an independent scalar bisection and
    // the closed form ((sqrt 5 - 1)/2)^(-1/2).
    let g = lattice(2, 0);
    let params = DoublePhaseParams::constant(&g, 2.0, 4.0, 1.0).unwrap();
    let u = VertexFunction::delta(&g, &[0, 0]).unwrap();
    let report = luxemburg_norm_vertex_report(&g, &u, &params, 1e-12).unwrap();

    let h = |c: f64| c.powi(-2) + c.powi(-4) - 1.0;
    let (mut lo, mut hi) = (1.0, 2.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    let closed = ((5f64.sqrt() - 1.0) / 2.0).powf(-0.5);
    assert!((root - closed).abs() <= 1e-12);
    assert!(
        (report.norm - closed).abs() <= 1e-8,
        "norm {} vs closed form {}",
        report.norm,
        closed
    );
    println!(
        "criterion 05: PASS — closed forms: edge modular 2N, norm (2N)^(1/p), single-site norm {:.10} (closed {:.10})",
        report.norm, closed
    );
}

#[test]
fn criterion_06_monotone_solver() {
    let clock = Instant::now();
    let g = lattice(2, 4);
    let params = profile_params(&g, 1.5, 2.5, &coercive());
    let f = VertexFunction::delta(&g, &[0, 0]).unwrap();
    let cfg = SolverConfig {
        grad_tol: 1e-8,
        max_iters: 2_000_000,
        ..SolverConfig::default()
    };

    let (u, report) = solve_monotone(&g, &f, &params, &cfg).unwrap();
    assert!(report.converged);
    let lu = apply(&g, &u, &params).unwrap();
    let mut sup = 0.0f64;
    for x in 0..g.n_interior() {
        sup = sup.max((lu[x] - f[x]).abs());
    }
    assert!(sup <= 1e-8, "residual {}", sup);

    // uniqueness: two independent random starts agree in sup norm
    let mut starts = Vec::new();
    for seed in [101u64, 202] {
        let mut rng = rng_from_seed(seed);
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
    assert!(diff.sup_norm() <= 1e-6, "disagreement {}", diff.sup_norm());

    // Dirichlet path of three at p = 2: the tridiagonal system has the exact
    // solution (1/2, 1, 1/2)
    let path = Graph::from_dump(
        "v 0 0 1\nv 1 1 1\nv 2 2 1\nv 3 -1 0\nv 4 3 0\ne 3 0 1\ne 0 1 1\ne 1 2 1\ne 2 4 1\n",
    )
    .unwrap();
    let p2 = DoublePhaseParams::constant(&path, 2.0, 3.0, 0.0).unwrap();
    let mut fp = VertexFunction::zeros(3);
    fp[path.vertex_at(&[1]).unwrap()] = 1.0;
    let tight = SolverConfig {
        grad_tol: 1e-12,
        ..cfg.clone()
    };
    let (up, rp) = solve_monotone(&path, &fp, &p2, &tight).unwrap();
    assert!(rp.converged);
    for (coord, expect) in [(0i64, 0.5), (1, 1.0), (2, 0.5)] {
        let v = path.vertex_at(&[coord]).unwrap();
        assert!(
            (up[v] - expect).abs() <= 1e-10,
            "path u({}) = {} vs {}",
            coord,
            up[v],
            expect
        );
    }

    let elapsed = clock.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {:?}", elapsed);
    println!(
        "criterion 06: PASS — monotone solver: residual {:.2e}, start disagreement {:.2e}, path error <= 1e-10, {:?}",
        sup,
        diff.sup_norm(),
        elapsed
    );
}

#[test]
fn criterion_07_oracle_equivalence() {
    let clock = Instant::now();
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

    let instances = dpg_core::oracle::reference_instances();
    for inst in &instances {
        let oracle =
            brute_force_unconstrained(&inst.graph, &inst.source, &inst.params, &grid).unwrap();
        let (u, report) = solve_monotone(&inst.graph, &inst.source, &inst.params, &cfg).unwrap();
        assert!(report.converged, "{} did not converge", inst.label);
        let mut diff = u.clone();
        diff.axpy(-1.0, &oracle);
        assert!(
            diff.sup_norm() <= 1e-6,
            "{}: solver and oracle differ by {}",
            inst.label,
            diff.sup_norm()
        );
    }
    println!(
        "criterion 07: PASS — oracle equivalence on {} instances (<= 3 vertices) to 1e-6, {:?}",
        instances.len(),
        clock.elapsed()
    );
}

#[test]
fn criterion_08_constrained_solver() {
    let clock = Instant::now();
    let g = lattice(2, 6);
    let params = profile_params(&g, 1.5, 2.5, &coercive());
    let (r, t) = (7.0, 1.0 / 7.0);
    let cfg = SolverConfig {
        grad_tol: 1e-6,
        max_iters: 2_000_000,
        restarts: 2,
        seed: 7,
        ..SolverConfig::default()
    };
    let sol = minimize_constrained(&g, &params, r, t, &cfg).unwrap();
    assert!(sol.report.converged);
    assert!(
        sol.report.residual_inf <= 1e-6,
        "residual {}",
        sol.report.residual_inf
    );

    let min_u = sol.u.as_slice().iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(min_u > 0.0, "minimizer must be strictly positive, min {}", min_u);

    let i_u = sol.report.energy;
    let (lo, hi) = (params.p * i_u / (r * t), params.q * i_u / (r * t));
    assert!(
        lo - 1e-6 <= sol.multiplier && sol.multiplier <= hi + 1e-6,
        "multiplier {} outside [{}, {}]",
        sol.multiplier,
        lo,
        hi
    );

    // candidate domination by the rescaled delta
    let delta = VertexFunction::delta(&g, &[0, 0]).unwrap();
    let candidate = delta.scaled((r * t).powf(1.0 / r));
    let cand_energy = energy(&g, &candidate, &params);
    assert!(
        i_u <= cand_energy + 1e-12,
        "I(u) = {} exceeds delta candidate {}",
        i_u,
        cand_energy
    );

    let elapsed = clock.elapsed();
    assert!(elapsed.as_secs_f64() < 300.0, "took {:?}", elapsed);
    println!(
        "criterion 08: PASS — constrained solver: residual {:.2e}, min u {:.2e}, lambda {:.4} in [{:.4}, {:.4}], I {:.4} <= delta candidate {:.4}, {:?}",
        sol.report.residual_inf, min_u, sol.multiplier, lo, hi, i_u, cand_energy, elapsed
    );
}

#[test]
fn criterion_09_multiplier_asymptotics() {
    let clock = Instant::now();
    let ts: Vec<f64> = (-4..=4).map(|k| 2f64.powi(k)).collect();
    let r = 7.0;
    let (p, q) = (1.5, 2.5);
    let cfg = SolverConfig {
        grad_tol: 1e-6,
        max_iters: 2_000_000,
        restarts: 2,
        seed: 42,
        ..SolverConfig::default()
    };

    // pure p case: homogeneity forces lambda(t) proportional to t^(p/r - 1)
    let g = lattice(2, 4);
    let params = DoublePhaseParams::constant(&g, p, q, 0.0).unwrap();
    let pure = multiplier_sweep(&g, &params, r, &ts, &cfg, true).unwrap();
    assert!(pure.all_converged);
    assert!(pure.sandwich_ok);
    for w in pure.rows.windows(2) {
        assert!(w[1].lambda < w[0].lambda, "lambda must strictly decrease");
    }
    let exact = p / r - 1.0;
    assert!(
        (pure.slope_all - exact).abs() <= 0.05,
        "fitted slope {} vs {}",
        pure.slope_all,
        exact
    );

    // coercive case
    let gc = lattice(2, 5);
    let params_c = profile_params(&gc, p, q, &coercive());
    let co = multiplier_sweep(&gc, &params_c, r, &ts, &cfg, true).unwrap();
    assert!(co.all_converged);
    assert!(co.sandwich_ok);
    for w in co.rows.windows(2) {
        assert!(w[1].lambda < w[0].lambda, "lambda must strictly decrease");
    }
    let cap = q / r - 1.0 + 0.1;
    assert!(
        co.slope_large_t <= cap,
        "large-t slope {} above {}",
        co.slope_large_t,
        cap
    );

    // quantitative multiplier bounds on the coercive sweep, with the delta
    // energy and the box Sobolev ratio measured on the same box
    let delta = VertexFunction::delta(&gc, &[0, 0]).unwrap();
    let i_delta = energy(&gc, &delta, &params_c);
    let c_box = co.sobolev_ratio_min;
    for row in &co.rows {
        let rt = r * row.t;
        if rt >= 1.0 {
            let upper = q * rt.powf(q / r - 1.0) * i_delta;
            assert!(
                row.lambda <= upper * (1.0 + 1e-9),
                "t={}: lambda {} above bound {}",
                row.t,
                row.lambda,
                upper
            );
        }
        let lower = c_box.powf(p) * rt.powf(p / r - 1.0);
        assert!(
            row.lambda >= lower * (1.0 - 1e-9),
            "t={}: lambda {} below bound {}",
            row.t,
            row.lambda,
            lower
        );
    }

    let elapsed = clock.elapsed();
    assert!(elapsed.as_secs_f64() < 1800.0, "took {:?}", elapsed);
    println!(
        "criterion 09: PASS — sweeps: pure-p slope {:.6} (exact {:.6}), coercive large-t slope {:.4} <= {:.4}, lambda strictly decreasing, {:?}",
        pure.slope_all, exact, co.slope_large_t, cap, elapsed
    );
}

#[test]
fn criterion_10_translation_equivariance() {
    let g = lattice(2, 4);
    let profile = coercive();
    let params = profile_params(&g, 1.5, 2.5, &profile);
    let shifted_a: Vec<f64> = (0..g.n_vertices())
        .map(|v| {
            let mut c = g.coords_of(v).to_vec();
            c[0] -= 1;
            profile.evaluate(&c).unwrap()
        })
        .collect();
    let params_shifted = DoublePhaseParams::new(1.5, 2.5, shifted_a).unwrap();

    // u supported in the inner half of the box
    let mut rng = rng_from_seed(55);
    let mut u = VertexFunction::zeros(g.n_interior());
    for v in 0..g.n_interior() {
        if g.coords_of(v).iter().all(|c| c.abs() <= 2) {
            u[v] = rng.gen_range(-1.0..1.0);
        }
    }

    let lu = apply(&g, &u, &params).unwrap();
    let u_shifted = g.translate(&u, &[1, 0]).unwrap();
    let lu_shifted = apply(&g, &u_shifted, &params_shifted).unwrap();
    let expected = g.translate(&lu, &[1, 0]).unwrap();
    for x in 0..g.n_interior() {
        assert!(
            lu_shifted[x] == expected[x],
            "bitwise equivariance failed at vertex {} ({} vs {})",
            x,
            lu_shifted[x],
            expected[x]
        );
    }

    // the flux field is exactly antisymmetric as well
    let fl = flux(&g, &u, &params).unwrap();
    assert!(fl.is_antisymmetric(&g));
    let div = divergence(&g, &fl).unwrap();
    for x in 0..g.n_interior() {
        assert!((lu[x] + div[x]).abs() <= 1e-13 * (1.0 + lu[x].abs()));
    }
    println!("criterion 10: PASS — apply commutes with the shift bitwise on the inner half");
}
