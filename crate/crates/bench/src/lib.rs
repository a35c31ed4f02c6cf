//! Shared fixtures for the criterion benchmarks.

use dpg_core::sampling::{random_vertex_fn, rng_from_seed, SampleCfg};
use dpg_core::{build_lattice, CoefficientProfile, DoublePhaseParams, Graph, LatticeSpec, VertexFunction};

pub struct Fixture {
    pub graph: Graph,
    pub params: DoublePhaseParams,
    pub u: VertexFunction,
}

/// A coercive-coefficient box with a dense random function on it.
pub fn fixture(radius: i64) -> Fixture {
    let graph = build_lattice(&LatticeSpec::new(2, radius)).expect("lattice");
    let params = DoublePhaseParams::from_profile(
        &graph,
        1.5,
        2.5,
        &CoefficientProfile::Coercive { c: 1.0, s: 1.0 },
    )
    .expect("params");
    let mut rng = rng_from_seed(1);
    let cfg = SampleCfg {
        max_support: graph.n_interior(),
        log10_scale: (0.0, 0.0),
    };
    let u = random_vertex_fn(&graph, &mut rng, &cfg);
    Fixture { graph, params, u }
}
