//! Experiment configuration: one TOML file fully specifies a run. No
//! environment overrides; paths inside the file resolve relative to the
//! file's own directory.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use dpg_core::{CoefficientProfile, Graph, SolverConfig, StepRule, VertexFunction};

/// A configuration problem, reported with the offending field path.
#[derive(Debug)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn err(path: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        path: path.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Directory for artifacts, resolved relative to the config file.
    pub output_dir: PathBuf,
    /// Also write the graph in the line-oriented debug format.
    #[serde(default)]
    pub dump_graph: bool,
    pub lattice: LatticeSection,
    pub exponents: ExponentSection,
    pub coefficient: CoefficientSpec,
    pub mode: Mode,
    #[serde(default)]
    pub solver: SolverSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSection {
    pub dim: usize,
    pub radius: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentSection {
    pub p: f64,
    pub q: f64,
    /// Constraint exponent; required by ground_state and sweep modes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
}

/// Coefficient families as written in config files. `custom` points at a
/// file of `coords... value` lines covering every interior + halo vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "snake_case", deny_unknown_fields)]
pub enum CoefficientSpec {
    Zero,
    Constant { c: f64 },
    Coercive { c: f64, s: f64 },
    Periodic { period: u32, table: Vec<f64> },
    BoundedPotential { a_inf: f64, c: f64 },
    Custom { file: PathBuf },
}

impl CoefficientSpec {
    pub fn name(&self) -> &'static str {
        match self {
            CoefficientSpec::Zero => "zero",
            CoefficientSpec::Constant { .. } => "constant",
            CoefficientSpec::Coercive { .. } => "coercive",
            CoefficientSpec::Periodic { .. } => "periodic",
            CoefficientSpec::BoundedPotential { .. } => "bounded_potential",
            CoefficientSpec::Custom { .. } => "custom",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Mode {
    /// Solve L(u) = f for a fixed source.
    Monotone { source: SourceSpec },
    /// Constrained ground state at a single level t.
    GroundState { t: f64 },
    /// Multiplier sweep over a list of levels.
    Sweep { t_values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceSpec {
    Zero,
    Delta {
        site: Vec<i64>,
        #[serde(default = "default_scale")]
        scale: f64,
    },
    /// `coords... value` lines; unlisted vertices are zero.
    File { path: PathBuf },
}

fn default_scale() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub max_iters: u64,
    pub grad_tol: f64,
    pub initial_step: f64,
    pub shrink: f64,
    pub armijo_c: f64,
    pub restarts: u32,
    pub seed: u64,
    /// Parallel workers for independent sweep points.
    pub workers: usize,
    /// Seed each sweep point with the previous solution (forces workers = 1).
    pub warm_start: bool,
    /// Double the radius once if the ground state's mass is not concentrated.
    pub refine: bool,
}

impl Default for SolverSection {
    fn default() -> Self {
        SolverSection {
            max_iters: 400_000,
            grad_tol: 1e-8,
            initial_step: 1.0,
            shrink: 0.5,
            armijo_c: 1e-4,
            restarts: 3,
            seed: 0,
            workers: 1,
            warm_start: false,
            refine: true,
        }
    }
}

impl SolverSection {
    pub fn to_core(&self) -> SolverConfig {
        SolverConfig {
            max_iters: self.max_iters,
            grad_tol: self.grad_tol,
            step: StepRule {
                initial_step: self.initial_step,
                shrink: self.shrink,
                armijo_c: self.armijo_c,
            },
            restarts: self.restarts,
            seed: self.seed,
        }
    }
}

impl ExperimentConfig {
    /// Parse and validate a config file.
    pub fn load(path: &Path) -> Result<(ExperimentConfig, PathBuf), ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| err("(file)", format!("cannot read {}: {}", path.display(), e)))?;
        let config = ExperimentConfig::parse(&text)?;
        let base = path
            .parent()
            .map(|p| p.to_path_buf())
            .unwrap_or_else(|| PathBuf::from("."));
        Ok((config, base))
    }

    pub fn parse(text: &str) -> Result<ExperimentConfig, ConfigError> {
        let config: ExperimentConfig =
            toml::from_str(text).map_err(|e| err("(toml)", e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Canonical serialized form; `parse(normalized()) == self`.
    pub fn normalized(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let n = self.lattice.dim;
        if n < 2 {
            return Err(err("lattice.dim", "must be at least 2"));
        }
        if self.lattice.radius < 0 {
            return Err(err("lattice.radius", "must be non-negative"));
        }

        let (p, q) = (self.exponents.p, self.exponents.q);
        if !(p > 1.0) || !(p < q) || !(p < n as f64) {
            return Err(err("exponents.p", "must satisfy 1 < p < min(q, N)"));
        }
        if !q.is_finite() {
            return Err(err("exponents.q", "must be finite"));
        }

        match &self.coefficient {
            CoefficientSpec::Constant { c } if *c < 0.0 => {
                return Err(err("coefficient.c", "must be >= 0"));
            }
            CoefficientSpec::Coercive { c, s } => {
                if !(*c > 0.0) || !(*s > 0.0) {
                    return Err(err("coefficient", "coercive profile needs c > 0 and s > 0"));
                }
            }
            CoefficientSpec::Periodic { period, table } => {
                if *period == 0 {
                    return Err(err("coefficient.period", "must be positive"));
                }
                let want = (*period as usize).pow(n as u32);
                if table.len() != want {
                    return Err(err(
                        "coefficient.table",
                        format!("needs period^dim = {} entries, got {}", want, table.len()),
                    ));
                }
                if table.iter().any(|a| *a < 0.0 || !a.is_finite()) {
                    return Err(err("coefficient.table", "entries must be >= 0 and finite"));
                }
            }
            CoefficientSpec::BoundedPotential { a_inf, c } => {
                if !(*a_inf >= 0.0) || *c < 0.0 || c > a_inf {
                    return Err(err(
                        "coefficient",
                        "bounded potential needs 0 <= c <= a_inf so that 0 <= a(x) <= a_inf",
                    ));
                }
            }
            _ => {}
        }

        let p_star = n as f64 * p / (n as f64 - p);
        let require_r = |path: &'static str| -> Result<f64, ConfigError> {
            let r = self
                .exponents
                .r
                .ok_or_else(|| err("exponents.r", format!("required for {} mode", path)))?;
            if r <= p_star {
                return Err(err(
                    "exponents.r",
                    format!("must exceed the critical exponent Np/(N-p) = {}", p_star),
                ));
            }
            let needs_r_ge_q = matches!(
                self.coefficient,
                CoefficientSpec::Periodic { .. } | CoefficientSpec::BoundedPotential { .. }
            );
            if needs_r_ge_q && r < q {
                return Err(err(
                    "exponents.r",
                    "periodic and bounded-potential profiles need r >= q",
                ));
            }
            Ok(r)
        };

        match &self.mode {
            Mode::Monotone { source } => {
                if let SourceSpec::Delta { site, scale } = source {
                    if site.len() != n {
                        return Err(err("mode.source.site", "dimension mismatch"));
                    }
                    if site.iter().any(|c| c.abs() > self.lattice.radius) {
                        return Err(err("mode.source.site", "outside the interior box"));
                    }
                    if !scale.is_finite() {
                        return Err(err("mode.source.scale", "must be finite"));
                    }
                }
            }
            Mode::GroundState { t } => {
                require_r("ground_state")?;
                if !(*t > 0.0) || !t.is_finite() {
                    return Err(err("mode.t", "must be positive and finite"));
                }
            }
            Mode::Sweep { t_values } => {
                require_r("sweep")?;
                if t_values.len() < 3 {
                    return Err(err("mode.t_values", "sweep needs at least 3 points"));
                }
                if t_values.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
                    return Err(err("mode.t_values", "levels must be positive and finite"));
                }
                let max = t_values.iter().cloned().fold(f64::MIN, f64::max);
                let min = t_values.iter().cloned().fold(f64::MAX, f64::min);
                if max / min < 100.0 {
                    return Err(err("mode.t_values", "sweep must span at least two decades"));
                }
                if self.solver.warm_start && self.solver.workers > 1 {
                    return Err(err(
                        "solver.warm_start",
                        "warm-started sweeps are sequential; set workers = 1",
                    ));
                }
            }
        }

        let s = &self.solver;
        if !(s.grad_tol > 0.0) {
            return Err(err("solver.grad_tol", "must be positive"));
        }
        if !(s.shrink > 0.0 && s.shrink < 1.0) {
            return Err(err("solver.shrink", "must lie in (0, 1)"));
        }
        if !(s.armijo_c > 0.0 && s.armijo_c < 1.0) {
            return Err(err("solver.armijo_c", "must lie in (0, 1)"));
        }
        if !(s.initial_step > 0.0) {
            return Err(err("solver.initial_step", "must be positive"));
        }
        if s.workers == 0 {
            return Err(err("solver.workers", "must be at least 1"));
        }
        Ok(())
    }

    /// Build the coefficient profile, reading the custom table file if any.
    /// The built table is re-verified against the profile's definition.
    pub fn build_coefficient(
        &self,
        g: &Graph,
        base: &Path,
    ) -> Result<CoefficientProfile, ConfigError> {
        let profile = match &self.coefficient {
            CoefficientSpec::Zero => CoefficientProfile::Zero,
            CoefficientSpec::Constant { c } => CoefficientProfile::Constant { c: *c },
            CoefficientSpec::Coercive { c, s } => CoefficientProfile::Coercive { c: *c, s: *s },
            CoefficientSpec::Periodic { period, table } => CoefficientProfile::Periodic {
                period: *period,
                table: table.clone(),
            },
            CoefficientSpec::BoundedPotential { a_inf, c } => {
                CoefficientProfile::BoundedPotential {
                    a_inf: *a_inf,
                    c: *c,
                }
            }
            CoefficientSpec::Custom { file } => {
                let path = base.join(file);
                let text = std::fs::read_to_string(&path).map_err(|e| {
                    err(
                        "coefficient.file",
                        format!("cannot read {}: {}", path.display(), e),
                    )
                })?;
                let table = parse_vertex_table(g, &text, true)
                    .map_err(|m| err("coefficient.file", m))?;
                CoefficientProfile::Custom { table }
            }
        };
        let table = profile
            .build(g)
            .map_err(|e| err("coefficient", e.to_string()))?;
        profile
            .verify_table(g, &table)
            .map_err(|e| err("coefficient", format!("definition replay failed: {}", e)))?;
        Ok(profile)
    }

    /// Build the source term for monotone mode.
    pub fn build_source(
        &self,
        g: &Graph,
        base: &Path,
    ) -> Result<Option<VertexFunction>, ConfigError> {
        let source = match &self.mode {
            Mode::Monotone { source } => source,
            _ => return Ok(None),
        };
        let f = match source {
            SourceSpec::Zero => VertexFunction::zeros(g.n_interior()),
            SourceSpec::Delta { site, scale } => {
                let mut f = VertexFunction::delta(g, site)
                    .map_err(|e| err("mode.source.site", e.to_string()))?;
                f.scale(*scale);
                f
            }
            SourceSpec::File { path } => {
                let full = base.join(path);
                let text = std::fs::read_to_string(&full).map_err(|e| {
                    err(
                        "mode.source.path",
                        format!("cannot read {}: {}", full.display(), e),
                    )
                })?;
                let values = parse_vertex_table(g, &text, false)
                    .map_err(|m| err("mode.source.path", m))?;
                VertexFunction::from_values(values[..g.n_interior()].to_vec())
            }
        };
        Ok(Some(f))
    }
}

/// Parse `coords... value` lines into a per-vertex table. With
/// `need_halo` the table covers interior + halo and every vertex must be
/// listed; otherwise unlisted vertices are zero and halo entries are
/// rejected.
fn parse_vertex_table(g: &Graph, text: &str, need_halo: bool) -> Result<Vec<f64>, String> {
    let n = if need_halo {
        g.n_vertices()
    } else {
        g.n_interior()
    };
    let mut table = vec![0.0f64; g.n_vertices()];
    let mut seen = vec![false; g.n_vertices()];
    for (lno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != g.dim() + 1 {
            return Err(format!(
                "line {}: expected {} coordinates and a value",
                lno + 1,
                g.dim()
            ));
        }
        let coords = fields[..g.dim()]
            .iter()
            .map(|f| f.parse::<i64>())
            .collect::<Result<Vec<i64>, _>>()
            .map_err(|_| format!("line {}: bad coordinate", lno + 1))?;
        let value: f64 = fields[g.dim()]
            .parse()
            .map_err(|_| format!("line {}: bad value", lno + 1))?;
        let v = g
            .vertex_at(&coords)
            .ok_or_else(|| format!("line {}: no vertex at {:?}", lno + 1, coords))?;
        if !need_halo && !g.is_interior(v) {
            return Err(format!("line {}: vertex {:?} is exterior", lno + 1, coords));
        }
        table[v] = value;
        seen[v] = true;
    }
    if need_halo {
        if let Some(v) = (0..n).find(|&v| !seen[v]) {
            return Err(format!(
                "vertex {:?} missing from the table",
                g.coords_of(v)
            ));
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
output_dir = "out"

[lattice]
dim = 2
radius = 3

[exponents]
p = 1.5
q = 2.5
r = 7.0

[coefficient]
profile = "coercive"
c = 1.0
s = 1.0

[mode]
kind = "ground_state"
t = 0.5
"#;

    #[test]
    fn parses_and_round_trips() {
        let config = ExperimentConfig::parse(BASE).unwrap();
        let normalized = config.normalized();
        let again = ExperimentConfig::parse(&normalized).unwrap();
        assert_eq!(config, again);
        assert_eq!(again.normalized(), normalized);
    }

    #[test]
    fn rejects_bad_exponents() {
        let bad = BASE.replace("p = 1.5", "p = 2.5");
        let e = ExperimentConfig::parse(&bad).unwrap_err();
        assert_eq!(e.path, "exponents.p");
    }

    #[test]
    fn rejects_subcritical_r() {
        let bad = BASE.replace("r = 7.0", "r = 5.0");
        let e = ExperimentConfig::parse(&bad).unwrap_err();
        assert_eq!(e.path, "exponents.r");
    }

    #[test]
    fn rejects_unknown_fields() {
        let bad = format!("{}\nunknown_knob = 3\n", BASE);
        assert!(ExperimentConfig::parse(&bad).is_err());
    }

    #[test]
    fn sweep_needs_two_decades() {
        let sweep = BASE.replace(
            "kind = \"ground_state\"\nt = 0.5",
            "kind = \"sweep\"\nt_values = [1.0, 2.0, 4.0]",
        );
        let e = ExperimentConfig::parse(&sweep).unwrap_err();
        assert_eq!(e.path, "mode.t_values");
    }

    #[test]
    fn bounded_potential_requires_r_at_least_q() {
        let cfg = BASE
            .replace(
                "profile = \"coercive\"\nc = 1.0\ns = 1.0",
                "profile = \"bounded_potential\"\na_inf = 1.0\nc = 0.5",
            )
            .replace("r = 7.0", "r = 6.5")
            .replace("q = 2.5", "q = 6.8");
        let e = ExperimentConfig::parse(&cfg).unwrap_err();
        assert_eq!(e.path, "exponents.r");
    }
}
