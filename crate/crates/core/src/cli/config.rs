//! Scenario files: TOML, or JSON when the text starts with `{`.

use crate::error::{Error, Result};
use crate::geom::RadialTerm;
use crate::topo::{ActionSummary, ScenarioSpec};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topology: Option<TopologySpec>,
    #[serde(default)]
    pub solver: SolverOptions,
    #[serde(default)]
    pub output: OutputOptions,
}

/// Group acting on the closed model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ActionSpec {
    Trivial,
    Antipodal,
    Lens {
        p: u32,
        #[serde(default = "one")]
        q: u32,
    },
    RotationPi,
    /// Orthogonal 4×4 generators, row by row.
    Custom {
        generators: Vec<[[f64; 4]; 4]>,
    },
}

fn one() -> u32 {
    1
}

fn unit() -> f64 {
    1.0
}

/// Geometry to analyse: a closed model to blow up, or an end given directly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelSpec {
    /// Round `S³` of the given radius, blown up at the orbit of `base_point`.
    Round {
        #[serde(default = "unit")]
        radius: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base_point: Option<[f64; 4]>,
    },
    /// Spatial Schwarzschild exterior to its horizon.
    Schwarzschild { mass: f64 },
    /// Schwarzschild with its horizon antipodally identified.
    Rp3Model {
        #[serde(default = "unit")]
        mass: f64,
    },
    Flat {
        #[serde(default = "unit")]
        boundary_radius: f64,
    },
    /// `φ` as a sum of radial terms.
    Radial {
        terms: Vec<RadialTerm>,
        boundary_radius: f64,
    },
    /// `φ` tabulated in `s = 1/r`; the boundary defaults to the outermost
    /// horizon.
    Table {
        s: Vec<f64>,
        phi: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        boundary_radius: Option<f64>,
    },
}

/// A builtin topology name or an inline description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TopologySource {
    Builtin(String),
    Inline(ScenarioSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologySpec {
    pub scenario: TopologySource,
    /// Overrides the summary derived from `action` and `model`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<ActionSummary>,
    /// Summand used to check the connected-sum hypothesis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_model: Option<TopologySource>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverOptions {
    pub t_max: f64,
    pub levels: usize,
    /// Absolute tolerance on `W` bound checks.
    pub tol: f64,
    /// Multiplies level and profile resolution.
    pub refinement: usize,
    /// Cells per axis of the grid cross-check; 0 disables it.
    pub grid_cells: usize,
    pub grid_outer_radius: f64,
    /// Accepted sup-norm gap between grid and radial solutions.
    pub grid_tol: f64,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            t_max: 5.0,
            levels: 200,
            tol: 1e-8,
            refinement: 1,
            grid_cells: 0,
            grid_outer_radius: 16.0,
            grid_tol: 5e-3,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    #[serde(default = "yes")]
    pub timestamps: bool,
}

fn yes() -> bool {
    true
}

impl Default for OutputOptions {
    fn default() -> Self {
        Self {
            dir: None,
            timestamps: true,
        }
    }
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let config: Self = if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| {
                Error::Config(format!("line {}, column {}: {e}", e.line(), e.column()))
            })?
        } else {
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?
        };
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let s = &self.solver;
        let bad = |field: &str, why: &str| Err(Error::Config(format!("solver.{field}: {why}")));
        if !(s.t_max > 0.0 && s.t_max.is_finite()) {
            return bad("t_max", "must be positive");
        }
        if !(s.tol > 0.0) {
            return bad("tol", "must be positive");
        }
        if !(s.grid_tol > 0.0) {
            return bad("grid_tol", "must be positive");
        }
        if s.levels < 2 {
            return bad("levels", "need at least 2 levels");
        }
        if s.refinement < 1 {
            return bad("refinement", "must be at least 1");
        }
        if s.grid_cells != 0 && s.grid_cells < 4 {
            return bad("grid_cells", "use 0 to disable or at least 4");
        }
        if self.model.is_none() && self.topology.is_none() {
            return Err(Error::Config(
                "scenario needs a `model` or a `topology` section".into(),
            ));
        }
        if let Some(ActionSpec::Lens { p: 0, .. }) = self.action {
            return Err(Error::Config(
                "action.p: lens order must be positive".into(),
            ));
        }
        if matches!(self.model, Some(ModelSpec::Round { .. })) && self.action.is_none() {
            return Err(Error::Config("a round model needs an `action`".into()));
        }
        Ok(())
    }
}
