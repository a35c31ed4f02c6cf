//! The double-phase operator, its energy functional, the weak pairing, and
//! the property suites tying them together (integration by parts, scalar and
//! operator monotonicity, gradient consistency).

use rand::Rng;

use crate::error::{CoreError, Result};
use crate::graph::{divergence, gradient, integrate_vertices, EdgeFunction, Graph, VertexFunction};
use crate::params::DoublePhaseParams;
use crate::report::{PropertyReport, Witness};
use crate::sampling::{random_vertex_fn, rng_from_seed, SampleCfg};
use crate::sum::CompensatedSum;

/// sign(s) * |s|^(e-1), the flux of the power energy |s|^e / e. The value at
/// s = 0 is 0 for every e > 1, which encodes the convention 0^(e-2) * 0 = 0.
#[inline]
pub fn power_flux(s: f64, e: f64) -> f64 {
    s.abs().powf(e - 1.0).copysign(s)
}

/// Flux field of `u`: per directed edge (x,y), with s = u(y) - u(x),
/// |s|^(p-2) s + (a(x)+a(y))/2 * |s|^(q-2) s. Exactly antisymmetric.
pub fn flux(g: &Graph, u: &VertexFunction, params: &DoublePhaseParams) -> Result<EdgeFunction> {
    let grad = gradient(g, u)?;
    let mut out = EdgeFunction::zeros(g.n_directed_edges());
    for (i, e) in g.edges().iter().enumerate() {
        let s = grad[i];
        let a_avg = 0.5 * (params.a(e.tail as usize) + params.a(e.head as usize));
        out[i] = power_flux(s, params.p) + a_avg * power_flux(s, params.q);
    }
    Ok(out)
}

/// Flux with the coefficient evaluated at the tail of each directed edge, the
/// form appearing inside the weak pairing. Not antisymmetric, but it has the
/// same divergence as [`flux`] after both orientations are summed.
pub fn flux_tail(
    g: &Graph,
    u: &VertexFunction,
    params: &DoublePhaseParams,
) -> Result<EdgeFunction> {
    let grad = gradient(g, u)?;
    let mut out = EdgeFunction::zeros(g.n_directed_edges());
    for (i, e) in g.edges().iter().enumerate() {
        let s = grad[i];
        out[i] = power_flux(s, params.p) + params.a(e.tail as usize) * power_flux(s, params.q);
    }
    Ok(out)
}

/// Apply the operator pointwise on interior vertices:
/// L(u)(x) = -1/mu(x) * sum over y ~ x of w_xy * flux(u)(x,y).
pub fn apply(g: &Graph, u: &VertexFunction, params: &DoublePhaseParams) -> Result<VertexFunction> {
    if !(params.p > 1.0) {
        return Err(CoreError::domain("operator requires p > 1"));
    }
    if u.len() != g.n_interior() {
        return Err(CoreError::ShapeMismatch {
            expected: g.n_interior(),
            got: u.len(),
        });
    }
    let mut out = VertexFunction::zeros(g.n_interior());
    for x in 0..g.n_interior() {
        let ux = u[x];
        let ax = params.a(x);
        let mut acc = 0.0;
        for e in g.out_edges(x) {
            let s = g.value_at(u, e.head as usize) - ux;
            let a_avg = 0.5 * (ax + params.a(e.head as usize));
            acc += e.weight * (power_flux(s, params.p) + a_avg * power_flux(s, params.q));
        }
        out[x] = -acc / g.mu(x);
    }
    Ok(out)
}

/// The energy functional:
/// I(u) = integral over edges of |grad u|^p / p + a(x) |grad u|^q / q.
pub fn energy(g: &Graph, u: &VertexFunction, params: &DoublePhaseParams) -> f64 {
    assert_eq!(u.len(), g.n_interior(), "vertex function has wrong length");
    let inv_p = 1.0 / params.p;
    let inv_q = 1.0 / params.q;
    let mut acc = CompensatedSum::new();
    for e in g.edges() {
        let s = (g.value_at(u, e.head as usize) - g.value_at(u, e.tail as usize)).abs();
        acc.add(
            0.5 * e.weight
                * (inv_p * s.powf(params.p)
                    + params.a(e.tail as usize) * inv_q * s.powf(params.q)),
        );
    }
    acc.value()
}

/// Weak pairing <L(u), v>: the edge integral of
/// |grad u|^(p-2) grad u grad v + a(x) |grad u|^(q-2) grad u grad v.
pub fn pairing(
    g: &Graph,
    u: &VertexFunction,
    v: &VertexFunction,
    params: &DoublePhaseParams,
) -> Result<f64> {
    let fu = flux_tail(g, u, params)?;
    let gv = gradient(g, v)?;
    let mut acc = CompensatedSum::new();
    for (i, e) in g.edges().iter().enumerate() {
        acc.add(0.5 * e.weight * fu[i] * gv[i]);
    }
    Ok(acc.value())
}

/// Exact partial derivatives of the energy: x -> mu(x) * L(u)(x), so that
/// sum_x gradient(x) v(x) equals the weak pairing for every v.
pub fn energy_gradient(
    g: &Graph,
    u: &VertexFunction,
    params: &DoublePhaseParams,
) -> Result<VertexFunction> {
    let mut lu = apply(g, u, params)?;
    for x in 0..g.n_interior() {
        lu[x] *= g.mu(x);
    }
    Ok(lu)
}

/// Integration by parts on random pairs: the weak pairing must equal
/// -integral of v * div(flux(u)) to 1e-10 relative.
pub fn check_green(
    g: &Graph,
    samples: usize,
    params: &DoublePhaseParams,
    seed: u64,
) -> Result<PropertyReport> {
    let mut rng = rng_from_seed(seed);
    let cfg = SampleCfg {
        max_support: 12,
        log10_scale: (-0.5, 0.5),
    };
    let mut report = PropertyReport::new("green_formula");
    for _ in 0..samples {
        let u = random_vertex_fn(g, &mut rng, &cfg);
        let v = random_vertex_fn(g, &mut rng, &cfg);
        let lhs = pairing(g, &u, &v, params)?;
        let div = divergence(g, &flux(g, &u, params)?)?;
        let mut vdiv = VertexFunction::zeros(g.n_interior());
        for x in 0..g.n_interior() {
            vdiv[x] = v[x] * div[x];
        }
        let rhs = -integrate_vertices(g, &vdiv);
        let err = (lhs - rhs).abs();
        let failure = if err <= 1e-10 * (1.0 + lhs.abs()) {
            None
        } else {
            Some(
                Witness::new("pairing == -integral(v div flux)")
                    .with_context("lhs", lhs)
                    .with_context("rhs", rhs)
                    .with_function(u.as_slice()),
            )
        };
        report.record(failure);
    }
    Ok(report)
}

/// Scalar monotonicity of the power flux on random pairs:
/// for 1 < p < 2: (flux(xi) - flux(eta))(xi - eta) (|xi|^p + |eta|^p)^((2-p)/p)
///   >= (p-1) (xi - eta)^2,
/// for p >= 2:   (flux(xi) - flux(eta))(xi - eta) >= (1/2)^p |xi - eta|^p.
pub fn scalar_monotonicity_gap(xi: f64, eta: f64, p: f64) -> f64 {
    let d = (power_flux(xi, p) - power_flux(eta, p)) * (xi - eta);
    if p < 2.0 {
        let weight = (xi.abs().powf(p) + eta.abs().powf(p)).powf((2.0 - p) / p);
        d * weight - (p - 1.0) * (xi - eta) * (xi - eta)
    } else {
        d - 0.5f64.powf(p) * (xi - eta).abs().powf(p)
    }
}

/// Check the scalar inequality on `samples` random pairs drawn across three
/// magnitude scales. A violation is a gap below -slack relative to magnitude.
pub fn check_scalar_monotonicity(
    samples: usize,
    p: f64,
    seed: u64,
    slack: f64,
) -> Result<PropertyReport> {
    if !(p > 1.0) {
        return Err(CoreError::domain("monotonicity check requires p > 1"));
    }
    let mut rng = rng_from_seed(seed);
    let mut report = PropertyReport::new(format!("scalar_monotonicity_p_{}", p));
    for k in 0..samples {
        let scale = match k % 3 {
            0 => 1e-3,
            1 => 1.0,
            _ => 1e3,
        };
        let xi: f64 = rng.gen_range(-2.0..2.0) * scale;
        let eta: f64 = if k % 7 == 0 { xi } else { rng.gen_range(-2.0..2.0) * scale };
        let gap = scalar_monotonicity_gap(xi, eta, p);
        let tol = slack * (1.0 + xi.abs().max(eta.abs()).powf(p.max(2.0)));
        let failure = if gap >= -tol {
            None
        } else {
            Some(
                Witness::new("scalar flux monotonicity")
                    .with_context("xi", xi)
                    .with_context("eta", eta)
                    .with_context("p", p)
                    .with_context("gap", gap),
            )
        };
        report.record(failure);
    }
    Ok(report)
}

/// Operator-level monotonicity: <L(u) - L(v), u - v> >= 0 on random pairs.
pub fn check_operator_monotonicity(
    g: &Graph,
    samples: usize,
    params: &DoublePhaseParams,
    seed: u64,
) -> Result<PropertyReport> {
    let mut rng = rng_from_seed(seed);
    let cfg = SampleCfg::default();
    let mut report = PropertyReport::new("operator_monotonicity");
    for _ in 0..samples {
        let u = random_vertex_fn(g, &mut rng, &cfg);
        let v = random_vertex_fn(g, &mut rng, &cfg);
        let lu = energy_gradient(g, &u, params)?;
        let lv = energy_gradient(g, &v, params)?;
        let mut diff = u.clone();
        diff.axpy(-1.0, &v);
        let mut inner = 0.0;
        for x in 0..g.n_interior() {
            inner += (lu[x] - lv[x]) * diff[x];
        }
        let failure = if inner >= -1e-12 * (1.0 + inner.abs()) {
            None
        } else {
            Some(
                Witness::new("<L(u)-L(v), u-v> >= 0")
                    .with_context("inner", inner)
                    .with_function(diff.as_slice()),
            )
        };
        report.record(failure);
    }
    Ok(report)
}
