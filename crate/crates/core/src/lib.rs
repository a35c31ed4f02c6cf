//! Double-phase (p,q) problems on finite weighted graphs with a zero-pinned
//! exterior: discrete calculus, Musielak-Orlicz modulars and Luxemburg norms,
//! the double-phase operator and its energy, and variational solvers for the
//! source problem and the constrained ground-state problem.

pub mod error;
pub mod graph;
pub mod norms;
pub mod operator;
pub mod oracle;
pub mod params;
pub mod report;
pub mod sampling;
pub mod solver;
pub mod sum;

pub use error::{CoreError, Result};
pub use graph::{
    build_lattice, divergence, gradient, integrate_edges, integrate_vertices, Edge, EdgeFunction,
    Graph, GraphKind, LatticeSpec, VertexFunction, DEFAULT_CELL_BUDGET,
};
pub use params::{CoefficientProfile, DoublePhaseParams};
pub use report::{PropertyReport, SolveReport, SweepRow, SweepSummary, Witness};
pub use solver::{
    eigen_residual, lagrange_multiplier, minimize_constrained, minimize_constrained_seeded,
    multiplier_sweep, plateau_candidate, solve_monotone, solve_monotone_from, summarize_sweep,
    sweep_point, ConstrainedSolution, SolverConfig, StepRule, SweepPoint,
};
