//! Brute-force verification oracles: zooming grid search over the vertex
//! values of very small instances. Independent of the descent machinery; the
//! only shared code is the energy evaluation itself.

use crate::error::{CoreError, Result};
use crate::graph::{Graph, VertexFunction};
use crate::operator::energy;
use crate::params::DoublePhaseParams;
use crate::sum::csum;

/// Largest instance the oracle will accept.
pub const MAX_ORACLE_VERTICES: usize = 6;

/// Grid-search resolution: a symmetric window of `points_per_dim` samples per
/// vertex, re-centred and shrunk `zoom_rounds` times around the best point.
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub half_width: f64,
    pub points_per_dim: usize,
    pub zoom_rounds: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            half_width: 2.0,
            points_per_dim: 33,
            zoom_rounds: 3,
        }
    }
}

impl GridSpec {
    fn validate(&self) -> Result<()> {
        if self.points_per_dim < 3 || self.zoom_rounds == 0 || !(self.half_width > 0.0) {
            return Err(CoreError::domain("degenerate grid specification"));
        }
        Ok(())
    }

    /// Final cell size after all zoom rounds: each round shrinks the window
    /// to twice the previous cell.
    pub fn resolution(&self) -> f64 {
        let factor = (self.points_per_dim - 1) as f64 / 4.0;
        2.0 * self.half_width / (self.points_per_dim - 1) as f64 / factor.powi(self.zoom_rounds as i32 - 1)
    }
}

fn check_capacity(g: &Graph) -> Result<usize> {
    let n = g.n_interior();
    if n > MAX_ORACLE_VERTICES {
        return Err(CoreError::Capacity {
            cells: n as u128,
            budget: MAX_ORACLE_VERTICES as u64,
        });
    }
    Ok(n)
}

fn grid_search<F: FnMut(&VertexFunction) -> f64>(
    n: usize,
    grid: &GridSpec,
    mut objective: F,
) -> VertexFunction {
    let mut center = vec![0.0f64; n];
    let mut half = grid.half_width;
    let pts = grid.points_per_dim;
    let mut best = VertexFunction::zeros(n);
    let mut best_val = f64::INFINITY;

    for _ in 0..grid.zoom_rounds {
        let cell = 2.0 * half / (pts - 1) as f64;
        let mut idx = vec![0usize; n];
        let mut cand = VertexFunction::zeros(n);
        loop {
            for d in 0..n {
                cand[d] = center[d] - half + idx[d] as f64 * cell;
            }
            let val = objective(&cand);
            if val < best_val {
                best_val = val;
                best = cand.clone();
            }
            // odometer
            let mut d = 0;
            loop {
                if d == n {
                    break;
                }
                idx[d] += 1;
                if idx[d] < pts {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
            if d == n {
                break;
            }
        }
        center.copy_from_slice(best.as_slice());
        half = 2.0 * cell;
    }
    best
}

/// Minimize `Phi(u) = I(u) - integral(f u)` exhaustively.
pub fn brute_force_unconstrained(
    g: &Graph,
    f: &VertexFunction,
    params: &DoublePhaseParams,
    grid: &GridSpec,
) -> Result<VertexFunction> {
    grid.validate()?;
    let n = check_capacity(g)?;
    if f.len() != n {
        return Err(CoreError::ShapeMismatch {
            expected: n,
            got: f.len(),
        });
    }
    let objective = |u: &VertexFunction| {
        energy(g, u, params)
            - csum((0..n).map(|x| g.mu(x) * f[x] * u[x]))
    };
    Ok(grid_search(n, grid, objective))
}

/// Minimize `I` over the discretized constraint sphere `{J(u) = t}`: grid
/// points are projected onto the sphere before evaluation.
pub fn brute_force_constrained(
    g: &Graph,
    params: &DoublePhaseParams,
    r: f64,
    t: f64,
    grid: &GridSpec,
) -> Result<VertexFunction> {
    grid.validate()?;
    let n = check_capacity(g)?;
    if !(t > 0.0) || !(r > 1.0) {
        return Err(CoreError::domain("constrained oracle needs t > 0 and r > 1"));
    }
    let project = |u: &VertexFunction| -> Option<VertexFunction> {
        let s = csum((0..n).map(|x| g.mu(x) * u[x].abs().powf(r)));
        if s == 0.0 {
            return None;
        }
        Some(u.scaled((r * t / s).powf(1.0 / r)))
    };
    let objective = |u: &VertexFunction| match project(u) {
        Some(p) => energy(g, &p, params),
        None => f64::INFINITY,
    };
    let best = grid_search(n, grid, objective);
    project(&best).ok_or_else(|| CoreError::numeric("oracle never found a feasible point"))
}

/// A named small instance of the source problem, used by the brute-force
/// comparisons (every instance has at most 3 interior vertices).
pub struct ReferenceInstance {
    pub label: &'static str,
    pub graph: Graph,
    pub params: DoublePhaseParams,
    pub source: VertexFunction,
}

/// The frozen comparison set: single-vertex boxes across coefficient
/// regimes and exponent pairs, plus Dirichlet paths of two and three.
pub fn reference_instances() -> Vec<ReferenceInstance> {
    use crate::graph::{build_lattice, LatticeSpec};
    use crate::params::CoefficientProfile;

    let mut out = Vec::new();

    let single = |label: &'static str, p: f64, q: f64, profile: CoefficientProfile, c: f64| {
        let g = build_lattice(&LatticeSpec::new(2, 0)).expect("1-vertex box");
        let params = DoublePhaseParams::from_profile(&g, p, q, &profile).expect("params");
        let mut f = VertexFunction::zeros(1);
        f[0] = c;
        ReferenceInstance {
            label,
            graph: g,
            params,
            source: f,
        }
    };
    out.push(single("single_p1.5_a0", 1.5, 2.5, CoefficientProfile::Zero, 1.0));
    out.push(single(
        "single_p2_a1_negative",
        2.0,
        4.0,
        CoefficientProfile::Constant { c: 1.0 },
        -2.0,
    ));
    out.push(single(
        "single_p2.5_coercive",
        2.5,
        3.5,
        CoefficientProfile::Coercive { c: 1.0, s: 1.0 },
        0.7,
    ));

    let path2 = Graph::from_dump(
        "v 0 0 1\nv 1 1 1\nv 2 -1 0\nv 3 2 0\ne 2 0 1\ne 0 1 1\ne 1 3 1\n",
    )
    .expect("path of two");
    let params = DoublePhaseParams::constant(&path2, 1.5, 2.5, 0.3).expect("params");
    let mut f = VertexFunction::zeros(2);
    f[path2.vertex_at(&[0]).unwrap()] = 1.0;
    f[path2.vertex_at(&[1]).unwrap()] = 0.5;
    out.push(ReferenceInstance {
        label: "path2_p1.5",
        graph: path2,
        params,
        source: f,
    });

    let path3 = || {
        Graph::from_dump(
            "v 0 0 1\nv 1 1 1\nv 2 2 1\nv 3 -1 0\nv 4 3 0\ne 3 0 1\ne 0 1 1\ne 1 2 1\ne 2 4 1\n",
        )
        .expect("path of three")
    };
    {
        let g = path3();
        let params = DoublePhaseParams::constant(&g, 2.0, 3.0, 0.0).expect("params");
        let mut f = VertexFunction::zeros(3);
        f[g.vertex_at(&[1]).unwrap()] = 1.0;
        out.push(ReferenceInstance {
            label: "path3_laplacian",
            graph: g,
            params,
            source: f,
        });
    }
    {
        let g = path3();
        let params = DoublePhaseParams::constant(&g, 1.8, 2.2, 0.3).expect("params");
        let mut f = VertexFunction::zeros(3);
        f[g.vertex_at(&[0]).unwrap()] = 0.2;
        f[g.vertex_at(&[1]).unwrap()] = 1.0;
        f[g.vertex_at(&[2]).unwrap()] = -0.4;
        out.push(ReferenceInstance {
            label: "path3_mixed_sign",
            graph: g,
            params,
            source: f,
        });
    }
    out
}
