//! l^alpha norms, the vertex and edge modulars of the double-phase integrand
//! H(x,t) = t^p + a(x) t^q, and the induced Luxemburg norms.
//!
//! The modular and the norm are tied together by the unit-modular law: for
//! u != 0, ||u|| = c exactly when the modular of u/c equals one. The norm is
//! computed by bracketing and bisecting the strictly decreasing map
//! c -> modular(u/c), starting from the l^p norm (always a lower bound for
//! the root, because a >= 0).

use rand::Rng;

use crate::error::{CoreError, Result};
use crate::graph::{gradient, EdgeFunction, Graph, VertexFunction};
use crate::params::DoublePhaseParams;
use crate::report::{PropertyReport, Witness};
use crate::sampling::{random_vertex_fn, rng_from_seed, SampleCfg};
use crate::sum::csum;

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha >= 1.0 {
        Ok(())
    } else {
        Err(CoreError::domain("norm exponent must satisfy alpha >= 1"))
    }
}

/// l^alpha norm of a vertex function (mu-weighted); sup norm at alpha = inf.
pub fn lp_norm_vertex(g: &Graph, u: &VertexFunction, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if u.len() != g.n_interior() {
        return Err(CoreError::ShapeMismatch {
            expected: g.n_interior(),
            got: u.len(),
        });
    }
    if alpha.is_infinite() {
        return Ok(u.sup_norm());
    }
    let sum = csum(
        u.as_slice()
            .iter()
            .enumerate()
            .map(|(x, v)| g.mu(x) * v.abs().powf(alpha)),
    );
    Ok(sum.powf(1.0 / alpha))
}

/// l^alpha norm of an edge function (w/2-weighted); sup norm at alpha = inf.
pub fn lp_norm_edge(g: &Graph, f: &EdgeFunction, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if f.len() != g.n_directed_edges() {
        return Err(CoreError::ShapeMismatch {
            expected: g.n_directed_edges(),
            got: f.len(),
        });
    }
    if alpha.is_infinite() {
        return Ok(f.as_slice().iter().fold(0.0, |m, v| m.max(v.abs())));
    }
    let sum = csum(
        g.edges()
            .iter()
            .zip(f.as_slice())
            .map(|(e, v)| 0.5 * e.weight * v.abs().powf(alpha)),
    );
    Ok(sum.powf(1.0 / alpha))
}

/// Vertex modular: integral of |u|^p + a(x)|u|^q over the interior.
pub fn modular_vertex(g: &Graph, u: &VertexFunction, params: &DoublePhaseParams) -> f64 {
    assert_eq!(u.len(), g.n_interior(), "vertex function has wrong length");
    csum(u.as_slice().iter().enumerate().map(|(x, v)| {
        let t = v.abs();
        g.mu(x) * (t.powf(params.p) + params.a(x) * t.powf(params.q))
    }))
}

/// Edge modular: 1/2 * sum over directed edges of w * (|f|^p + a(tail)|f|^q),
/// with the coefficient evaluated at the tail of each directed edge.
pub fn modular_edge(g: &Graph, f: &EdgeFunction, params: &DoublePhaseParams) -> f64 {
    assert_eq!(
        f.len(),
        g.n_directed_edges(),
        "edge function has wrong length"
    );
    csum(g.edges().iter().zip(f.as_slice()).map(|(e, v)| {
        let t = v.abs();
        0.5 * e.weight * (t.powf(params.p) + params.a(e.tail as usize) * t.powf(params.q))
    }))
}

/// Luxemburg norm computed by bisection, with the achieved modular residual
/// and a slope-based bound on the norm error.
#[derive(Debug, Clone, Copy)]
pub struct LuxemburgResult {
    pub norm: f64,
    /// |modular(f/norm) - 1|; zero for f == 0.
    pub modular_residual: f64,
    /// Residual divided by the local slope of c -> modular(f/c).
    pub norm_error_bound: f64,
}

/// Solve modular(f / c) = 1 for c given the scaled p- and q-parts of the
/// modular at scale 1. `pq_parts(c)` must return (p_part, q_part) of the
/// modular of f/c.
fn luxemburg_root(
    p: f64,
    q: f64,
    initial: f64,
    tol: f64,
    pq_parts: impl Fn(f64) -> (f64, f64),
) -> Result<LuxemburgResult> {
    if !(tol > 0.0) {
        return Err(CoreError::domain("luxemburg tolerance must be positive"));
    }
    let modular = |c: f64| {
        let (a, b) = pq_parts(c);
        a + b
    };

    // initial = ||f||_p satisfies modular(f/initial) >= 1, so it brackets the
    // root from below; double upward for the other side.
    let mut lo = initial;
    let mut hi = initial;
    let mut m_hi = modular(hi);
    let mut doublings = 0;
    while m_hi > 1.0 {
        lo = hi;
        hi *= 2.0;
        m_hi = modular(hi);
        doublings += 1;
        if doublings > 1100 || !hi.is_finite() {
            return Err(CoreError::numeric("luxemburg bracket failed to close"));
        }
    }

    let mut mid = hi;
    let mut m_mid = m_hi;
    if (m_mid - 1.0).abs() > tol {
        for _ in 0..400 {
            mid = 0.5 * (lo + hi);
            m_mid = modular(mid);
            if (m_mid - 1.0).abs() <= tol || (hi - lo) <= 4.0 * f64::EPSILON * mid {
                break;
            }
            if m_mid > 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }

    let (p_part, q_part) = pq_parts(mid);
    let residual = (p_part + q_part - 1.0).abs();
    // d/dc modular(f/c) = -(p*p_part + q*q_part)/c
    let slope = (p * p_part + q * q_part) / mid;
    let bound = if slope > 0.0 { residual / slope } else { f64::INFINITY };
    Ok(LuxemburgResult {
        norm: mid,
        modular_residual: residual,
        norm_error_bound: bound,
    })
}

/// Luxemburg norm of a vertex function with full diagnostics.
pub fn luxemburg_norm_vertex_report(
    g: &Graph,
    u: &VertexFunction,
    params: &DoublePhaseParams,
    tol: f64,
) -> Result<LuxemburgResult> {
    if !u.is_finite() {
        return Err(CoreError::numeric("vertex function has non-finite values"));
    }
    let initial = lp_norm_vertex(g, u, params.p)?;
    if initial == 0.0 {
        return Ok(LuxemburgResult {
            norm: 0.0,
            modular_residual: 0.0,
            norm_error_bound: 0.0,
        });
    }
    luxemburg_root(params.p, params.q, initial, tol, |c| {
        let mut p_part = crate::sum::CompensatedSum::new();
        let mut q_part = crate::sum::CompensatedSum::new();
        for (x, v) in u.as_slice().iter().enumerate() {
            let t = v.abs() / c;
            p_part.add(g.mu(x) * t.powf(params.p));
            q_part.add(g.mu(x) * params.a(x) * t.powf(params.q));
        }
        (p_part.value(), q_part.value())
    })
}

pub fn luxemburg_norm_vertex(
    g: &Graph,
    u: &VertexFunction,
    params: &DoublePhaseParams,
    tol: f64,
) -> Result<f64> {
    Ok(luxemburg_norm_vertex_report(g, u, params, tol)?.norm)
}

/// Luxemburg norm of an edge function with full diagnostics.
pub fn luxemburg_norm_edge_report(
    g: &Graph,
    f: &EdgeFunction,
    params: &DoublePhaseParams,
    tol: f64,
) -> Result<LuxemburgResult> {
    if !f.is_finite() {
        return Err(CoreError::numeric("edge function has non-finite values"));
    }
    let initial = lp_norm_edge(g, f, params.p)?;
    if initial == 0.0 {
        return Ok(LuxemburgResult {
            norm: 0.0,
            modular_residual: 0.0,
            norm_error_bound: 0.0,
        });
    }
    luxemburg_root(params.p, params.q, initial, tol, |c| {
        let mut p_part = crate::sum::CompensatedSum::new();
        let mut q_part = crate::sum::CompensatedSum::new();
        for (e, v) in g.edges().iter().zip(f.as_slice()) {
            let t = v.abs() / c;
            p_part.add(0.5 * e.weight * t.powf(params.p));
            q_part.add(0.5 * e.weight * params.a(e.tail as usize) * t.powf(params.q));
        }
        (p_part.value(), q_part.value())
    })
}

pub fn luxemburg_norm_edge(
    g: &Graph,
    f: &EdgeFunction,
    params: &DoublePhaseParams,
    tol: f64,
) -> Result<f64> {
    Ok(luxemburg_norm_edge_report(g, f, params, tol)?.norm)
}

/// Gradient seminorm of the work space: Luxemburg norm of the gradient.
pub fn sobolev_norm(
    g: &Graph,
    u: &VertexFunction,
    params: &DoublePhaseParams,
    tol: f64,
) -> Result<f64> {
    let grad = gradient(g, u)?;
    luxemburg_norm_edge(g, &grad, params, tol)
}

const LUX_TOL: f64 = 1e-12;

/// Modular-norm laws on random samples: unit modular at u/||u||, the <1/=1/>1
/// correspondence, and the p-q sandwich between norm and modular.
pub fn check_modular_norm_laws(
    g: &Graph,
    samples: usize,
    params: &DoublePhaseParams,
    seed: u64,
    tol: f64,
) -> Result<PropertyReport> {
    let mut rng = rng_from_seed(seed);
    let cfg = SampleCfg::default();
    let mut report = PropertyReport::new("modular_norm_laws");
    // Norm values this close to 1 are skipped in the strict-inequality laws;
    // the laws themselves are exact, the guard only covers float rounding.
    let guard = 1e-12;

    for _ in 0..samples {
        let u = random_vertex_fn(g, &mut rng, &cfg);
        let rho = modular_vertex(g, &u, params);
        let norm = luxemburg_norm_vertex(g, &u, params, LUX_TOL)?;
        let mut failure: Option<Witness> = None;

        // (i) unit modular at u / ||u||
        let scaled = u.scaled(1.0 / norm);
        let rho_unit = modular_vertex(g, &scaled, params);
        if (rho_unit - 1.0).abs() > tol {
            failure = Some(
                Witness::new("modular(u/norm) == 1")
                    .with_context("modular", rho_unit)
                    .with_context("norm", norm)
                    .with_function(u.as_slice()),
            );
        }

        // (ii) trichotomy correspondence
        if failure.is_none() && (norm - 1.0).abs() > guard && (rho - 1.0).abs() > guard {
            let consistent = (norm < 1.0) == (rho < 1.0);
            if !consistent {
                failure = Some(
                    Witness::new("norm<1 <=> modular<1")
                        .with_context("modular", rho)
                        .with_context("norm", norm)
                        .with_function(u.as_slice()),
                );
            }
        }

        // (iii) sandwich in the applicable regime
        if failure.is_none() && (norm - 1.0).abs() > guard {
            let (low, high) = if norm < 1.0 {
                (norm.powf(params.q), norm.powf(params.p))
            } else {
                (norm.powf(params.p), norm.powf(params.q))
            };
            let slack = tol * (1.0 + rho);
            if !(low <= rho + slack && rho <= high + slack) {
                failure = Some(
                    Witness::new("norm^q <= modular <= norm^p sandwich")
                        .with_context("modular", rho)
                        .with_context("norm", norm)
                        .with_context("low", low)
                        .with_context("high", high)
                        .with_function(u.as_slice()),
                );
            }
        }

        report.record(failure);
    }
    Ok(report)
}

/// Scaling bounds of the modular: b^p rho(u) <= rho(bu) <= b^q rho(u) for
/// b > 1 (reversed for 0 < b < 1), plus the doubling bound rho(2u) <= 2^q rho(u).
pub fn check_modular_scaling(
    g: &Graph,
    samples: usize,
    params: &DoublePhaseParams,
    seed: u64,
    tol: f64,
) -> Result<PropertyReport> {
    let mut rng = rng_from_seed(seed);
    let cfg = SampleCfg::default();
    let mut report = PropertyReport::new("modular_scaling_bounds");

    for _ in 0..samples {
        let u = random_vertex_fn(g, &mut rng, &cfg);
        let b = 10f64.powf(rng.gen_range(-1.2..1.2));
        let rho = modular_vertex(g, &u, params);
        let rho_b = modular_vertex(g, &u.scaled(b), params);
        let (lo, hi) = if b > 1.0 {
            (b.powf(params.p) * rho, b.powf(params.q) * rho)
        } else {
            (b.powf(params.q) * rho, b.powf(params.p) * rho)
        };
        let slack = tol * (1.0 + rho_b.abs());
        let mut failure = None;
        if !(lo <= rho_b + slack && rho_b <= hi + slack) {
            failure = Some(
                Witness::new("b^p rho <= rho(bu) <= b^q rho")
                    .with_context("b", b)
                    .with_context("rho", rho)
                    .with_context("rho_b", rho_b)
                    .with_function(u.as_slice()),
            );
        }
        if failure.is_none() {
            let rho2 = modular_vertex(g, &u.scaled(2.0), params);
            let bound = 2f64.powf(params.q) * rho;
            if rho2 > bound * (1.0 + tol) {
                failure = Some(
                    Witness::new("doubling bound rho(2u) <= 2^q rho(u)")
                        .with_context("rho2", rho2)
                        .with_context("bound", bound)
                        .with_function(u.as_slice()),
                );
            }
        }
        report.record(failure);
    }
    Ok(report)
}

/// Interpolation of lattice norms: ||u||_beta <= ||u||_alpha and
/// ||grad u||_beta <= ||grad u||_alpha for 1 <= alpha <= beta <= inf.
/// Requires unit measure and unit weights.
pub fn check_interpolation(g: &Graph, samples: usize, seed: u64) -> Result<PropertyReport> {
    if !g.has_unit_weights() {
        return Err(CoreError::domain(
            "interpolation check requires mu == 1 and w == 1",
        ));
    }
    let mut rng = rng_from_seed(seed);
    let cfg = SampleCfg::default();
    let mut report = PropertyReport::new("norm_interpolation");
    let tol = 1e-12;

    for _ in 0..samples {
        let u = random_vertex_fn(g, &mut rng, &cfg);
        let alpha = rng.gen_range(1.0..8.0);
        let beta = if rng.gen_bool(0.15) {
            f64::INFINITY
        } else {
            alpha + rng.gen_range(0.0..6.0)
        };
        let nu_a = lp_norm_vertex(g, &u, alpha)?;
        let nu_b = lp_norm_vertex(g, &u, beta)?;
        let grad = gradient(g, &u)?;
        let ng_a = lp_norm_edge(g, &grad, alpha)?;
        let ng_b = lp_norm_edge(g, &grad, beta)?;

        let mut failure = None;
        if nu_b > nu_a * (1.0 + tol) {
            failure = Some(
                Witness::new("||u||_beta <= ||u||_alpha")
                    .with_context("alpha", alpha)
                    .with_context("beta", beta)
                    .with_context("norm_alpha", nu_a)
                    .with_context("norm_beta", nu_b)
                    .with_function(u.as_slice()),
            );
        } else if ng_b > ng_a * (1.0 + tol) {
            failure = Some(
                Witness::new("||grad u||_beta <= ||grad u||_alpha")
                    .with_context("alpha", alpha)
                    .with_context("beta", beta)
                    .with_context("norm_alpha", ng_a)
                    .with_context("norm_beta", ng_b)
                    .with_function(u.as_slice()),
            );
        }
        report.record(failure);
    }
    Ok(report)
}

/// The two inequalities behind norm equivalence for bounded coefficients:
/// ||grad u||_p <= ||u||_{D} and modular(grad u / ||grad u||_p) <= 1 + sup a.
pub fn check_norm_equivalence(
    g: &Graph,
    samples: usize,
    params: &DoublePhaseParams,
    seed: u64,
) -> Result<PropertyReport> {
    if !g.has_unit_weights() {
        return Err(CoreError::domain(
            "norm equivalence check requires mu == 1 and w == 1",
        ));
    }
    let mut rng = rng_from_seed(seed);
    let cfg = SampleCfg::default();
    let mut report = PropertyReport::new("norm_equivalence_bounds");
    let tol = 1e-10;
    let a_sup = params.a_sup();

    for _ in 0..samples {
        let u = random_vertex_fn(g, &mut rng, &cfg);
        let grad = gradient(g, &u)?;
        let grad_p = lp_norm_edge(g, &grad, params.p)?;
        let sob = sobolev_norm(g, &u, params, LUX_TOL)?;
        let mut failure = None;
        if grad_p > sob * (1.0 + tol) {
            failure = Some(
                Witness::new("||grad u||_p <= ||u||_D")
                    .with_context("grad_p", grad_p)
                    .with_context("sobolev", sob)
                    .with_function(u.as_slice()),
            );
        } else {
            let scaled =
                EdgeFunction::from_values(grad.as_slice().iter().map(|v| v / grad_p).collect());
            let rho = modular_edge(g, &scaled, params);
            if rho > (1.0 + a_sup) * (1.0 + tol) {
                failure = Some(
                    Witness::new("modular(grad u / ||grad u||_p) <= 1 + sup a")
                        .with_context("rho", rho)
                        .with_context("bound", 1.0 + a_sup)
                        .with_function(u.as_slice()),
                );
            }
        }
        report.record(failure);
    }
    Ok(report)
}
