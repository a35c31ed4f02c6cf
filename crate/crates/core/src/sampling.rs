//! Random finite-support functions for the property suites. Everything is
//! driven by an explicit ChaCha seed so that reports are reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{EdgeFunction, Graph, VertexFunction};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Controls for random sample generation.
#[derive(Debug, Clone)]
pub struct SampleCfg {
    /// Upper bound on the support size (clamped to the interior size).
    pub max_support: usize,
    /// Values are drawn in [-2, 2] and the whole function is then scaled by
    /// 10^u with u uniform in this range, to exercise both small and large
    /// norms.
    pub log10_scale: (f64, f64),
}

impl Default for SampleCfg {
    fn default() -> Self {
        SampleCfg {
            max_support: 12,
            log10_scale: (-1.5, 1.5),
        }
    }
}

/// A random non-zero function with small support in the interior.
pub fn random_vertex_fn(g: &Graph, rng: &mut ChaCha8Rng, cfg: &SampleCfg) -> VertexFunction {
    let n = g.n_interior();
    let support = rng.gen_range(1..=cfg.max_support.clamp(1, n));
    let scale = 10f64.powf(rng.gen_range(cfg.log10_scale.0..=cfg.log10_scale.1));
    let mut u = VertexFunction::zeros(n);
    let mut placed = 0;
    while placed < support {
        let v = rng.gen_range(0..n);
        if u[v] == 0.0 {
            let mut val: f64 = rng.gen_range(-2.0..2.0);
            if val == 0.0 {
                val = 1.0;
            }
            u[v] = val * scale;
            placed += 1;
        }
    }
    u
}

/// A random antisymmetric edge function: one value per undirected pair.
pub fn random_antisymmetric_edge_fn(
    g: &Graph,
    rng: &mut ChaCha8Rng,
    cfg: &SampleCfg,
) -> EdgeFunction {
    let scale = 10f64.powf(rng.gen_range(cfg.log10_scale.0..=cfg.log10_scale.1));
    let mut f = EdgeFunction::zeros(g.n_directed_edges());
    for e in 0..g.n_directed_edges() {
        let r = g.reverse_edge(e);
        if e < r {
            let val: f64 = rng.gen_range(-2.0..2.0) * scale;
            f[e] = val;
            f[r] = -val;
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_lattice, LatticeSpec};

    #[test]
    fn samples_are_deterministic_per_seed() {
        let g = build_lattice(&LatticeSpec::new(2, 2)).unwrap();
        let cfg = SampleCfg::default();
        let a = random_vertex_fn(&g, &mut rng_from_seed(5), &cfg);
        let b = random_vertex_fn(&g, &mut rng_from_seed(5), &cfg);
        assert_eq!(a, b);
    }

    #[test]
    fn antisymmetric_samples_are_antisymmetric() {
        let g = build_lattice(&LatticeSpec::new(2, 1)).unwrap();
        let f = random_antisymmetric_edge_fn(&g, &mut rng_from_seed(9), &SampleCfg::default());
        assert!(f.is_antisymmetric(&g));
    }
}
