//! Exponents and the modulating coefficient field of the double-phase energy.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::graph::Graph;

/// Named coefficient families, all defined on the whole lattice so that halo
/// vertices can be evaluated too.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "snake_case")]
pub enum CoefficientProfile {
    /// a == 0: the pure p-Laplacian case.
    Zero,
    /// a == c.
    Constant { c: f64 },
    /// a(x) = c * |x|^s with |x| the l1 distance to the origin; unbounded.
    Coercive { c: f64, s: f64 },
    /// a(x) = table[x mod period] with a row-major table over [0, period)^N.
    Periodic { period: u32, table: Vec<f64> },
    /// a(x) = a_inf - c / (1 + |x|): approaches its supremum from below.
    BoundedPotential { a_inf: f64, c: f64 },
    /// Explicit per-vertex table over interior + halo, in vertex-index order.
    Custom { table: Vec<f64> },
}

impl CoefficientProfile {
    /// Check the defining constraints of the family for dimension `dim`.
    pub fn validate(&self, dim: usize) -> Result<()> {
        match self {
            CoefficientProfile::Zero => Ok(()),
            CoefficientProfile::Constant { c } => {
                if *c >= 0.0 && c.is_finite() {
                    Ok(())
                } else {
                    Err(CoreError::domain("constant coefficient must be >= 0"))
                }
            }
            CoefficientProfile::Coercive { c, s } => {
                if *c > 0.0 && *s > 0.0 && c.is_finite() && s.is_finite() {
                    Ok(())
                } else {
                    Err(CoreError::domain(
                        "coercive coefficient needs c > 0 and s > 0",
                    ))
                }
            }
            CoefficientProfile::Periodic { period, table } => {
                let t = *period as usize;
                if t == 0 {
                    return Err(CoreError::domain("period must be positive"));
                }
                if table.len() != t.pow(dim as u32) {
                    return Err(CoreError::domain(format!(
                        "periodic table needs period^dim = {} entries, got {}",
                        t.pow(dim as u32),
                        table.len()
                    )));
                }
                if table.iter().any(|a| !a.is_finite() || *a < 0.0) {
                    return Err(CoreError::domain("periodic table entries must be >= 0"));
                }
                Ok(())
            }
            CoefficientProfile::BoundedPotential { a_inf, c } => {
                if !a_inf.is_finite() || !c.is_finite() || *a_inf < 0.0 {
                    return Err(CoreError::domain("bounded potential needs finite a_inf >= 0"));
                }
                if *c < 0.0 || *c > *a_inf {
                    return Err(CoreError::domain(
                        "bounded potential needs 0 <= c <= a_inf so that 0 <= a(x) <= a_inf",
                    ));
                }
                Ok(())
            }
            CoefficientProfile::Custom { table } => {
                if table.iter().any(|a| !a.is_finite() || *a < 0.0) {
                    Err(CoreError::domain("custom table entries must be >= 0"))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Evaluate the profile at a lattice point. `Custom` has no closed form
    /// and cannot be evaluated this way.
    pub fn evaluate(&self, coords: &[i64]) -> Result<f64> {
        let l1: i64 = coords.iter().map(|c| c.abs()).sum();
        match self {
            CoefficientProfile::Zero => Ok(0.0),
            CoefficientProfile::Constant { c } => Ok(*c),
            CoefficientProfile::Coercive { c, s } => Ok(c * (l1 as f64).powf(*s)),
            CoefficientProfile::Periodic { period, table } => {
                let t = *period as i64;
                let mut idx = 0usize;
                for &c in coords {
                    let m = ((c % t) + t) % t;
                    idx = idx * (*period as usize) + m as usize;
                }
                Ok(table[idx])
            }
            CoefficientProfile::BoundedPotential { a_inf, c } => {
                Ok(a_inf - c / (1.0 + l1 as f64))
            }
            CoefficientProfile::Custom { .. } => Err(CoreError::domain(
                "custom coefficient table has no pointwise formula",
            )),
        }
    }

    /// Tabulate the profile on interior + halo vertices of `g`.
    pub fn build(&self, g: &Graph) -> Result<Vec<f64>> {
        self.validate(g.dim())?;
        if let CoefficientProfile::Custom { table } = self {
            if table.len() != g.n_vertices() {
                return Err(CoreError::ShapeMismatch {
                    expected: g.n_vertices(),
                    got: table.len(),
                });
            }
            return Ok(table.clone());
        }
        (0..g.n_vertices())
            .map(|v| self.evaluate(g.coords_of(v)))
            .collect()
    }

    /// Replay the family's defining property against a built table.
    pub fn verify_table(&self, g: &Graph, table: &[f64]) -> Result<()> {
        if table.len() != g.n_vertices() {
            return Err(CoreError::ShapeMismatch {
                expected: g.n_vertices(),
                got: table.len(),
            });
        }
        if table.iter().any(|a| !a.is_finite() || *a < 0.0) {
            return Err(CoreError::domain("coefficient table must be >= 0 and finite"));
        }
        match self {
            CoefficientProfile::Custom { .. } => Ok(()),
            CoefficientProfile::Periodic { period, .. } => {
                // a(x + T e_i) = a(x) wherever both points are in the graph.
                let t = *period as i64;
                let mut shifted = vec![0i64; g.dim()];
                for v in 0..g.n_vertices() {
                    for d in 0..g.dim() {
                        shifted.copy_from_slice(g.coords_of(v));
                        shifted[d] += t;
                        if let Some(wv) = g.vertex_at(&shifted) {
                            if table[v] != table[wv] {
                                return Err(CoreError::domain(format!(
                                    "periodicity violated between vertices {} and {}",
                                    v, wv
                                )));
                            }
                        }
                    }
                }
                Ok(())
            }
            _ => {
                for v in 0..g.n_vertices() {
                    let want = self.evaluate(g.coords_of(v))?;
                    if table[v] != want {
                        return Err(CoreError::domain(format!(
                            "table value {} at vertex {} differs from profile value {}",
                            table[v], v, want
                        )));
                    }
                }
                if let CoefficientProfile::BoundedPotential { a_inf, .. } = self {
                    if table.iter().any(|a| a > a_inf) {
                        return Err(CoreError::domain("bounded potential exceeds its limit"));
                    }
                }
                Ok(())
            }
        }
    }
}

/// Exponents `1 < p < q` and the coefficient `a >= 0` tabulated on
/// interior + halo vertices.
#[derive(Debug, Clone)]
pub struct DoublePhaseParams {
    pub p: f64,
    pub q: f64,
    a: Vec<f64>,
}

impl DoublePhaseParams {
    pub fn new(p: f64, q: f64, a: Vec<f64>) -> Result<Self> {
        if !(p > 1.0) || !p.is_finite() {
            return Err(CoreError::domain("exponent p must satisfy 1 < p"));
        }
        if !(q > p) || !q.is_finite() {
            return Err(CoreError::domain("exponents must satisfy p < q"));
        }
        if a.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(CoreError::domain("coefficient a must be >= 0 and finite"));
        }
        Ok(DoublePhaseParams { p, q, a })
    }

    pub fn from_profile(g: &Graph, p: f64, q: f64, profile: &CoefficientProfile) -> Result<Self> {
        let a = profile.build(g)?;
        DoublePhaseParams::new(p, q, a)
    }

    /// Constant-coefficient shortcut used pervasively in tests.
    pub fn constant(g: &Graph, p: f64, q: f64, c: f64) -> Result<Self> {
        DoublePhaseParams::new(p, q, vec![c; g.n_vertices()])
    }

    pub fn a(&self, v: usize) -> f64 {
        self.a[v]
    }

    pub fn a_table(&self) -> &[f64] {
        &self.a
    }

    pub fn a_sup(&self) -> f64 {
        self.a.iter().fold(0.0f64, |m, v| m.max(*v))
    }

    /// Critical Sobolev exponent `N p / (N - p)`; requires `p < N`.
    pub fn critical_exponent(&self, dim: usize) -> Result<f64> {
        let n = dim as f64;
        if self.p < n {
            Ok(n * self.p / (n - self.p))
        } else {
            Err(CoreError::domain(
                "critical exponent needs p < lattice dimension",
            ))
        }
    }
}
