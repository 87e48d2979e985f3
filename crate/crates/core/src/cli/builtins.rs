//! Catalog of ready-made scenarios.

use super::config::{
    ActionSpec, ModelSpec, OutputOptions, ScenarioConfig, SolverOptions, TopologySource,
    TopologySpec,
};
use crate::error::{Error, Result};
use crate::topo::{builtins as topo, ActionSummary, ScenarioSpec};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
}

pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        name: "schwarzschild",
        description: "Schwarzschild exterior, m = 2 (`schwarzschild-<m>` for other masses)",
    },
    CatalogEntry {
        name: "rp3-model",
        description: "Schwarzschild m = 1 with antipodally identified horizon; Rayleigh quotient of the model profile",
    },
    CatalogEntry {
        name: "antipodal-s3",
        description: "round S³ blown up at an antipodal pair",
    },
    CatalogEntry {
        name: "lens-3",
        description: "round S³ blown up at a free ℤ₃ orbit (`lens-<p>` for any p ≥ 1)",
    },
    CatalogEntry {
        name: "s2xs1-sphere-z2",
        description: "S²×S¹ with ℤ₂ acting on the sphere factor (topology only)",
    },
    CatalogEntry {
        name: "s2xs1-circle-z2",
        description: "S²×S¹ with ℤ₂ acting on the circle factor (topology only)",
    },
    CatalogEntry {
        name: "flat-r3",
        description: "flat end outside the unit sphere, with the grid cross-check",
    },
    CatalogEntry {
        name: "custom",
        description: "round S³ with an explicit generator matrix (rotation by π), blown up off its fixed circle",
    },
];

/// Names accepted by [`builtin`], including parametrised examples.
pub fn names() -> Vec<String> {
    let mut out: Vec<String> = CATALOG.iter().map(|e| e.name.to_string()).collect();
    out.extend(["lens-2", "lens-5"].map(String::from));
    out
}

fn base(name: &str) -> ScenarioConfig {
    ScenarioConfig {
        name: name.into(),
        description: CATALOG
            .iter()
            .find(|e| e.name == name)
            .map(|e| e.description.to_string()),
        action: None,
        model: None,
        topology: None,
        solver: SolverOptions::default(),
        output: OutputOptions::default(),
    }
}

fn round() -> ModelSpec {
    ModelSpec::Round {
        radius: 1.0,
        base_point: None,
    }
}

fn named(name: &str) -> TopologySource {
    TopologySource::Builtin(name.into())
}

fn lens(p: u32) -> ScenarioConfig {
    let name = format!("lens-{p}");
    let mut c = base(&name);
    c.description = Some(format!("round S³ blown up at a free ℤ_{p} orbit"));
    c.action = Some(ActionSpec::Lens { p, q: 1 });
    c.model = Some(round());
    c.topology = Some(TopologySpec {
        scenario: named(&name),
        summary: None,
        q_model: Some(named("s3-summand")),
    });
    c
}

/// Configuration of a builtin scenario; unknown names get a suggestion.
pub fn builtin(name: &str) -> Result<ScenarioConfig> {
    if let Some(p) = name
        .strip_prefix("lens-")
        .and_then(|p| p.parse::<u32>().ok())
    {
        if p >= 1 {
            return Ok(lens(p));
        }
    }
    if let Some(m) = name
        .strip_prefix("schwarzschild-")
        .and_then(|m| m.parse::<f64>().ok())
    {
        if m > 0.0 {
            let mut c = base(name);
            c.description = Some(format!("Schwarzschild exterior, m = {m}"));
            c.model = Some(ModelSpec::Schwarzschild { mass: m });
            return Ok(c);
        }
    }
    let mut c = base(name);
    match name {
        "schwarzschild" => c.model = Some(ModelSpec::Schwarzschild { mass: 2.0 }),
        "rp3-model" => c.model = Some(ModelSpec::Rp3Model { mass: 1.0 }),
        "antipodal-s3" => {
            c.action = Some(ActionSpec::Antipodal);
            c.model = Some(round());
            c.topology = Some(TopologySpec {
                scenario: named("antipodal-s3"),
                summary: None,
                q_model: Some(named("s3-summand")),
            });
        }
        "s2xs1-sphere-z2" | "s2xs1-circle-z2" => {
            c.topology = Some(TopologySpec {
                scenario: named(name),
                summary: Some(ActionSummary {
                    min_card: Some(2),
                    has_fixed_point: false,
                    is_sphere_manifold: false,
                }),
                q_model: None,
            });
        }
        "flat-r3" => {
            c.model = Some(ModelSpec::Flat {
                boundary_radius: 1.0,
            });
            c.solver.grid_cells = 64;
            c.solver.grid_outer_radius = 8.0;
        }
        "custom" => {
            let mut g = [[0.0; 4]; 4];
            for (i, d) in [-1.0, -1.0, 1.0, 1.0].into_iter().enumerate() {
                g[i][i] = d;
            }
            // poles 3π/4 apart, so the horizon lies inside the chart
            let (sn, cs) = (std::f64::consts::PI / 8.0).sin_cos();
            c.action = Some(ActionSpec::Custom {
                generators: vec![g],
            });
            c.model = Some(ModelSpec::Round {
                radius: 1.0,
                base_point: Some([cs, 0.0, sn, 0.0]),
            });
        }
        _ => return Err(unknown("scenario", name, &names())),
    }
    Ok(c)
}

fn unknown(kind: &'static str, name: &str, candidates: &[String]) -> Error {
    let best = candidates
        .iter()
        .map(|c| (strsim::jaro_winkler(name, c), c))
        .max_by(|a, b| a.0.total_cmp(&b.0));
    let hint = match best {
        Some((score, c)) if score > 0.6 => format!("; did you mean `{c}`?"),
        _ => String::new(),
    };
    Error::Config(format!("unknown {kind} `{name}`{hint}"))
}

/// Topology scenario by name.
pub fn topology(name: &str) -> Result<ScenarioSpec> {
    if let Some(p) = name
        .strip_prefix("lens-")
        .and_then(|p| p.parse::<usize>().ok())
    {
        if p >= 1 {
            return Ok(topo::lens(p));
        }
    }
    Ok(match name {
        "s3-summand" => topo::s3_summand(),
        "s2xs1-sphere-z2" => topo::s2xs1_sphere_z2(),
        "s2xs1-circle-z2" => topo::s2xs1_circle_z2(),
        "antipodal-s3" => topo::antipodal_s3(),
        "trivial-r3" => topo::trivial_r3(),
        _ => {
            let known = [
                "s3-summand",
                "s2xs1-sphere-z2",
                "s2xs1-circle-z2",
                "antipodal-s3",
                "trivial-r3",
                "lens-3",
            ]
            .map(String::from);
            return Err(unknown("topology", name, &known));
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_builtin_round_trips() {
        assert!(CATALOG.len() >= 7);
        for name in names() {
            let c = builtin(&name).unwrap();
            c.validate().unwrap();
            let text = c.to_toml().unwrap();
            assert_eq!(ScenarioConfig::parse(&text).unwrap(), c, "{name}");
            let json = serde_json::to_string(&c).unwrap();
            assert_eq!(ScenarioConfig::parse(&json).unwrap(), c, "{name}");
        }
    }

    #[test]
    fn unknown_name_suggests_nearest() {
        let err = builtin("antipodal-s4").unwrap_err().to_string();
        assert!(err.contains("did you mean `antipodal-s3`"), "{err}");
        let err = topology("s2xs1-sphere").unwrap_err().to_string();
        assert!(err.contains("s2xs1-sphere-z2"), "{err}");
    }

    #[test]
    fn parametrised_names() {
        assert_eq!(
            builtin("lens-7").unwrap().action,
            Some(ActionSpec::Lens { p: 7, q: 1 })
        );
        assert_eq!(
            builtin("schwarzschild-4").unwrap().model,
            Some(ModelSpec::Schwarzschild { mass: 4.0 })
        );
        assert!(builtin("lens-0").is_err());
    }
}
