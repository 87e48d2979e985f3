//! Runs a scenario through topology checks, blow-up, level-set scans and the
//! Rayleigh quotient, collecting every verdict into a [`RunReport`].

use super::builtins;
use super::config::{ActionSpec, ModelSpec, ScenarioConfig, TopologySource};
use crate::blowup::{build_blowup, detect_horizon, verify_af_decay, BlowupModel, DecayReport};
use crate::error::{Error, Result};
use crate::geom::{ClosedModelMetric, ConformalFactor, InvertedTable, RadialMetric};
use crate::groups::{
    min_orbit_cardinality, random_sphere_points, FiniteGroupAction, GroupLabel, Mat4, Vec4,
};
use crate::levelset::{
    check_minimal_bound, check_monotonicity, combine_equivariant, scan_levels,
    solve_harmonic_grid3d, solve_harmonic_radial, BoundReport, GridSpec, HarmonicSolution,
    LevelSetScan, Provenance, MINIMAL_TOL,
};
use crate::numerics::linspace;
use crate::quotient::{
    build_model_profile_on, compare_bounds, rayleigh_model, BoundComparison, RayleighReport,
};
use crate::topo::{ActionSummary, AssumptionReport, LemmaVerdict, ScenarioSpec, TopologyScenario};
use serde::Serialize;
use std::collections::BTreeMap;
use std::time::Instant;

/// Which stages to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stages {
    All,
    TopologyOnly,
    /// Blow-up and level-set scans, without topology or the quotient.
    ScanOnly,
}

/// Outcome of one stage.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Stage<T> {
    Ran(T),
    Skipped { reason: String },
    Failed { error: String },
}

impl<T> Stage<T> {
    pub fn ran(&self) -> Option<&T> {
        match self {
            Stage::Ran(t) => Some(t),
            _ => None,
        }
    }

    fn skipped(reason: impl Into<String>) -> Self {
        Stage::Skipped {
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictKind {
    Topological,
    Numerical,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub kind: VerdictKind,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopologyReport {
    pub summary: ActionSummary,
    pub assumptions: AssumptionReport,
    pub lemma: LemmaVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EndSummary {
    pub label: String,
    pub boundary_radius: f64,
    pub horizon: bool,
    pub mass: Option<f64>,
    pub pole_sum: Option<f64>,
    pub scalar_curvature_residual: Option<f64>,
    pub decay: DecayReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometryReport {
    pub group: Option<String>,
    pub group_order: usize,
    pub orbit_cardinality: usize,
    pub ends_transitive: bool,
    pub ends: Vec<EndSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundSummary {
    pub pass: bool,
    pub max_excess: f64,
    pub near_equality: usize,
}

impl From<&BoundReport> for BoundSummary {
    fn from(b: &BoundReport) -> Self {
        Self {
            pass: b.pass,
            max_excess: b.max_excess,
            near_equality: b.near_equality,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EndScan {
    pub label: String,
    pub provenance: Provenance,
    pub c0: f64,
    pub w0: f64,
    pub flux_deviation: f64,
    pub monotonicity: BoundSummary,
    pub minimal_bound: Stage<BoundSummary>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivariantSummary {
    pub card: usize,
    pub c0: f64,
    pub flux_deviation: f64,
    pub bound: BoundSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelsetReport {
    pub levels: usize,
    pub t_max: f64,
    pub ends: Vec<EndScan>,
    pub equivariant: Stage<EquivariantSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuotientReport {
    pub rayleigh: RayleighReport,
    pub comparison: BoundComparison,
    pub profile_round_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridReport {
    pub cells: usize,
    pub outer_radius: f64,
    pub iterations: usize,
    pub relative_residual: f64,
    pub sup_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub name: String,
    pub seed: u64,
    pub topology: Stage<TopologyReport>,
    pub geometry: Stage<GeometryReport>,
    pub levelset: Stage<LevelsetReport>,
    pub quotient: Stage<QuotientReport>,
    pub grid: Stage<GridReport>,
    pub verdicts: Vec<Verdict>,
    pub exit_code: i32,
    /// Seconds per stage; omitted when timestamps are off.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_unix: Option<u64>,
}

/// A scan ready for CSV export.
#[derive(Debug, Clone)]
pub struct ScanTable {
    /// File stem, e.g. `scan_0` or `scan_G`.
    pub stem: String,
    pub scan: LevelSetScan,
    pub bound: BoundReport,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: RunReport,
    pub tables: Vec<ScanTable>,
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_ASSUMPTION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_SOLVER: i32 = 4;

/// Accepted `max |flux e⁻ᵗ / C₀ − 1|`.
pub const FLUX_TOL: f64 = 1e-6;
const SUMMARY_SAMPLES: usize = 256;

struct EndInput {
    label: String,
    metric: RadialMetric,
    horizon: bool,
    mass: Option<f64>,
    pole_sum: Option<f64>,
    scalar_curvature_residual: Option<f64>,
}

struct Geometry {
    ends: Vec<EndInput>,
    blowup: Option<BlowupModel>,
    report: GeometryReport,
}

struct Runner<'a> {
    config: &'a ScenarioConfig,
    verdicts: Vec<Verdict>,
    timings: BTreeMap<String, f64>,
    failed: bool,
}

impl Runner<'_> {
    fn verdict(
        &mut self,
        name: impl Into<String>,
        kind: VerdictKind,
        pass: bool,
        detail: impl Into<String>,
    ) {
        self.verdicts.push(Verdict {
            name: name.into(),
            kind,
            pass,
            detail: detail.into(),
        });
    }

    fn timed<T>(&mut self, stage: &str, f: impl FnOnce(&mut Self) -> Result<T>) -> Stage<T> {
        let start = Instant::now();
        let out = f(self);
        self.timings
            .insert(stage.into(), start.elapsed().as_secs_f64());
        match out {
            Ok(v) => Stage::Ran(v),
            Err(e) => {
                self.failed = true;
                Stage::Failed {
                    error: format!("{stage}: {e}"),
                }
            }
        }
    }
}

fn action(spec: &ActionSpec) -> Result<FiniteGroupAction> {
    match spec {
        ActionSpec::Trivial => Ok(FiniteGroupAction::trivial()),
        ActionSpec::Antipodal => Ok(FiniteGroupAction::antipodal()),
        ActionSpec::Lens { p, q } => FiniteGroupAction::lens(*p, *q),
        ActionSpec::RotationPi => Ok(FiniteGroupAction::rotation_pi()),
        ActionSpec::Custom { generators } => FiniteGroupAction::from_generators(
            GroupLabel::Custom,
            generators
                .iter()
                .map(|rows| Mat4::from_fn(|i, j| rows[i][j]))
                .collect(),
        ),
    }
}

fn resolve_topology(source: &TopologySource) -> Result<ScenarioSpec> {
    match source {
        TopologySource::Builtin(name) => builtins::topology(name),
        TopologySource::Inline(spec) => Ok(spec.clone()),
    }
}

fn derived_summary(config: &ScenarioConfig) -> Result<ActionSummary> {
    let Some(spec) = &config.action else {
        return Err(Error::Config(
            "topology needs either `summary` or an `action` to derive it from".into(),
        ));
    };
    let g = action(spec)?;
    let min_card = min_orbit_cardinality(
        &g,
        &random_sphere_points(config.solver.seed, SUMMARY_SAMPLES),
    );
    Ok(ActionSummary {
        min_card: Some(min_card),
        has_fixed_point: min_card == 1,
        is_sphere_manifold: matches!(config.model, Some(ModelSpec::Round { .. })),
    })
}

fn topology_stage(r: &mut Runner) -> Result<Option<TopologyReport>> {
    let Some(spec) = &r.config.topology else {
        return Ok(None);
    };
    let scenario = TopologyScenario::from_spec(&resolve_topology(&spec.scenario)?)?;
    let summary = match spec.summary {
        Some(s) => s,
        None => derived_summary(r.config)?,
    };
    let q = match &spec.q_model {
        Some(src) => Some(TopologyScenario::from_spec(&resolve_topology(src)?)?),
        None => None,
    };
    let assumptions = scenario.check_assumptions(&summary, q.as_ref())?;
    let lemma = scenario.lemma_outermost_verdict(&assumptions);
    for (key, v) in assumptions.verdicts() {
        r.verdict(
            format!("assumption ({key})"),
            VerdictKind::Topological,
            v.status != crate::topo::VerdictStatus::Fail,
            v.note.clone(),
        );
    }
    if assumptions.all_pass() {
        let detail = if lemma.pass {
            format!("J = {}, L₁ = {} = k₀", lemma.j, lemma.l1_boundary_copies)
        } else {
            lemma.violated.join("; ")
        };
        r.verdict(
            "outermost-sphere lemma",
            VerdictKind::Topological,
            lemma.pass,
            detail,
        );
    }
    Ok(Some(TopologyReport {
        summary,
        assumptions,
        lemma,
    }))
}

fn single_end(label: &str, metric: RadialMetric, mass: Option<f64>) -> EndInput {
    let rb = metric.r_min();
    let horizon =
        rb > 0.0 && (metric.areal_growth(rb) / metric.factor().value(rb)).abs() <= MINIMAL_TOL;
    EndInput {
        label: label.into(),
        metric,
        horizon,
        mass,
        pole_sum: None,
        scalar_curvature_residual: None,
    }
}

fn geometry_stage(r: &mut Runner) -> Result<Geometry> {
    let model = r.config.model.as_ref().expect("checked by caller");
    let mut blowup = None;
    let mut group = None;
    let (mut order, mut card) = (1, 1);
    let ends = match model {
        ModelSpec::Round { radius, base_point } => {
            let closed = ClosedModelMetric::round_sphere(*radius)?;
            let g = action(r.config.action.as_ref().expect("validated"))?;
            let p = match base_point {
                Some(v) => Vec4::from_column_slice(v).normalize(),
                None => Vec4::new(1.0, 0.0, 0.0, 0.0),
            };
            let model = build_blowup(&closed, &g, &p)?;
            group = Some(g.label().to_string());
            order = g.order();
            card = model.ends.len();
            let ends = model
                .ends
                .iter()
                .map(|e| EndInput {
                    label: e.orbit_index.to_string(),
                    metric: e.metric.clone(),
                    horizon: e.horizon_radius.is_some(),
                    mass: Some(e.mass),
                    pole_sum: Some(e.pole_sum),
                    scalar_curvature_residual: Some(e.scalar_curvature_residual),
                })
                .collect();
            blowup = Some(model);
            ends
        }
        ModelSpec::Schwarzschild { mass } | ModelSpec::Rp3Model { mass } => {
            let metric = RadialMetric::new(ConformalFactor::schwarzschild(*mass), mass / 2.0)?;
            vec![single_end("0", metric, Some(*mass))]
        }
        ModelSpec::Flat { boundary_radius } => {
            let metric = RadialMetric::new(ConformalFactor::Flat { scale: 1.0 }, *boundary_radius)?;
            vec![single_end("0", metric, Some(0.0))]
        }
        ModelSpec::Radial {
            terms,
            boundary_radius,
        } => {
            let metric =
                RadialMetric::new(ConformalFactor::Terms(terms.clone()), *boundary_radius)?;
            vec![single_end("0", metric, None)]
        }
        ModelSpec::Table {
            s,
            phi,
            boundary_radius,
        } => {
            let table = InvertedTable::new(s.clone(), phi.clone())?;
            let s_max = table.s_max();
            let factor = ConformalFactor::Tabulated(table);
            let rb = match boundary_radius {
                Some(rb) => *rb,
                None => detect_horizon(&factor, s_max)?,
            };
            vec![single_end("0", RadialMetric::new(factor, rb)?, None)]
        }
    };
    let mut summaries = Vec::with_capacity(ends.len());
    for e in &ends {
        let decay = verify_af_decay(&e.metric)?;
        let detail = match decay.exponent() {
            Some(x) => format!("fitted exponent {x:.4}"),
            None => "conformal factor exactly constant at large radius".into(),
        };
        r.verdict(
            format!("decay[{}]", e.label),
            VerdictKind::Numerical,
            decay.passes(),
            detail,
        );
        summaries.push(EndSummary {
            label: e.label.clone(),
            boundary_radius: e.metric.r_min(),
            horizon: e.horizon,
            mass: e.mass,
            pole_sum: e.pole_sum,
            scalar_curvature_residual: e.scalar_curvature_residual,
            decay,
        });
    }
    let ends_transitive = blowup.as_ref().is_none_or(BlowupModel::ends_transitive);
    Ok(Geometry {
        report: GeometryReport {
            group,
            group_order: order,
            orbit_cardinality: card,
            ends_transitive,
            ends: summaries,
        },
        ends,
        blowup,
    })
}

struct Scans {
    report: LevelsetReport,
    solutions: Vec<HarmonicSolution>,
    combined: Option<LevelSetScan>,
}

fn levelset_stage(
    r: &mut Runner,
    geometry: &Geometry,
    tables: &mut Vec<ScanTable>,
) -> Result<Scans> {
    let opts = r.config.solver;
    let levels = opts.levels * opts.refinement;
    let t_grid = linspace(0.0, opts.t_max, levels);
    let mut ends = Vec::new();
    let mut solutions = Vec::new();
    for e in &geometry.ends {
        let sol = solve_harmonic_radial(&e.metric)?;
        let scan = scan_levels(&sol, &t_grid)?;
        let w0 = scan.w0()?;
        let flux_deviation = scan.flux_deviation();
        let mono = check_monotonicity(&scan, w0, opts.tol);
        r.verdict(
            format!("flux-constancy[{}]", e.label),
            VerdictKind::Numerical,
            flux_deviation < FLUX_TOL,
            format!("max deviation {flux_deviation:.3e}"),
        );
        r.verdict(
            format!("monotonicity[{}]", e.label),
            VerdictKind::Numerical,
            mono.pass,
            format!("max excess {:.3e}", mono.max_excess),
        );
        let (minimal_bound, table_bound) = if e.horizon {
            let rep = check_minimal_bound(&sol, &scan, opts.tol)?;
            r.verdict(
                format!("minimal-bound[{}]", e.label),
                VerdictKind::Numerical,
                rep.pass,
                format!("max excess {:.3e}", rep.max_excess),
            );
            (Stage::Ran(BoundSummary::from(&rep)), rep)
        } else {
            (
                Stage::skipped("boundary is not a minimal sphere"),
                mono.clone(),
            )
        };
        ends.push(EndScan {
            label: e.label.clone(),
            provenance: sol.provenance(),
            c0: sol.capacity_flux(),
            w0,
            flux_deviation,
            monotonicity: BoundSummary::from(&mono),
            minimal_bound,
            warnings: scan.warnings.clone(),
        });
        tables.push(ScanTable {
            stem: format!("scan_{}", e.label),
            scan,
            bound: table_bound,
        });
        solutions.push(sol);
    }
    let mut combined = None;
    let equivariant = match &geometry.blowup {
        None => Stage::skipped("no group action"),
        Some(_) if geometry.ends.iter().any(|e| !e.horizon) => {
            Stage::skipped("some end has no horizon")
        }
        Some(model) => {
            let eq = combine_equivariant(model, &solutions, &t_grid, opts.tol)?;
            let flux_deviation = eq.scan.flux_deviation();
            r.verdict(
                "equivariant-bound",
                VerdictKind::Numerical,
                eq.bound.pass,
                format!("card {}, max excess {:.3e}", eq.card, eq.bound.max_excess),
            );
            let summary = EquivariantSummary {
                card: eq.card,
                c0: eq.scan.c0,
                flux_deviation,
                bound: BoundSummary::from(&eq.bound),
            };
            tables.push(ScanTable {
                stem: "scan_G".into(),
                scan: eq.scan.clone(),
                bound: eq.bound,
            });
            combined = Some(eq.scan);
            Stage::Ran(summary)
        }
    };
    Ok(Scans {
        report: LevelsetReport {
            levels,
            t_max: opts.t_max,
            ends,
            equivariant,
        },
        solutions,
        combined,
    })
}

fn quotient_stage(r: &mut Runner, scans: &Scans, card: usize) -> Result<QuotientReport> {
    let opts = r.config.solver;
    let grid = linspace(0.0, 12.0, 960 * opts.refinement + 1);
    let profile = build_model_profile_on(1.0, &grid)?;
    let scan = match &scans.combined {
        Some(s) => s,
        None => &scan_levels(
            &scans.solutions[0],
            &linspace(0.0, opts.t_max, opts.levels * opts.refinement),
        )?,
    };
    let rayleigh = rayleigh_model(&profile, scan, card)?;
    r.verdict(
        "rayleigh-bound",
        VerdictKind::Numerical,
        rayleigh.verdict,
        format!(
            "quotient {:.6} vs bound {:.6} (card {card})",
            rayleigh.quotient_ub, rayleigh.bound
        ),
    );
    Ok(QuotientReport {
        comparison: compare_bounds(card)?,
        rayleigh,
        profile_round_residual: profile.round_residual(),
    })
}

fn grid_stage(r: &mut Runner, geometry: &Geometry, scans: &Scans) -> Result<GridReport> {
    let opts = r.config.solver;
    let spec = GridSpec {
        cells: opts.grid_cells,
        outer_radius: opts.grid_outer_radius,
        ..GridSpec::default()
    };
    let grid = solve_harmonic_grid3d(&geometry.ends[0].metric, spec)?;
    let sup_error = grid.sup_error(&scans.solutions[0])?;
    r.verdict(
        "grid-agreement",
        VerdictKind::Numerical,
        sup_error < opts.grid_tol,
        format!("sup error {sup_error:.3e} on {}³", opts.grid_cells),
    );
    Ok(GridReport {
        cells: spec.cells,
        outer_radius: spec.outer_radius,
        iterations: grid.iterations(),
        relative_residual: grid.relative_residual(),
        sup_error,
    })
}

/// Runs the selected stages. Stage failures are recorded in the report;
/// only configuration problems are returned as errors.
pub fn run(config: &ScenarioConfig, stages: Stages) -> Result<RunOutcome> {
    config.validate()?;
    let mut runner = Runner {
        config,
        verdicts: Vec::new(),
        timings: BTreeMap::new(),
        failed: false,
    };
    let mut tables = Vec::new();

    let topology = if stages == Stages::ScanOnly {
        Stage::skipped("scan only")
    } else {
        match runner.timed("topology", topology_stage) {
            Stage::Ran(None) => Stage::skipped("no topology section"),
            Stage::Ran(Some(t)) => Stage::Ran(t),
            Stage::Skipped { reason } => Stage::Skipped { reason },
            Stage::Failed { error } => Stage::Failed { error },
        }
    };
    let blocked = match &topology {
        Stage::Ran(t) if !t.assumptions.all_pass() => Some(format!(
            "assumption ({}) failed",
            t.assumptions.failed().join(", ")
        )),
        Stage::Failed { .. } => Some("topology stage failed".into()),
        _ => None,
    };
    let numeric_skip = if stages == Stages::TopologyOnly {
        Some("topology only".to_string())
    } else if let Some(reason) = blocked {
        Some(reason)
    } else if config.model.is_none() {
        Some("no model".to_string())
    } else {
        None
    };

    let (geometry, levelset, quotient, grid) = match numeric_skip {
        Some(reason) => (
            Stage::skipped(reason.clone()),
            Stage::skipped(reason.clone()),
            Stage::skipped(reason.clone()),
            Stage::skipped(reason),
        ),
        None => {
            let geom = runner.timed("geometry", geometry_stage);
            let (geometry_report, geom) = match geom {
                Stage::Ran(g) => (Stage::Ran(g.report.clone()), Some(g)),
                Stage::Skipped { reason } => (Stage::Skipped { reason }, None),
                Stage::Failed { error } => (Stage::Failed { error }, None),
            };
            let scans = match &geom {
                Some(g) => runner.timed("levelset", |r| levelset_stage(r, g, &mut tables)),
                None => Stage::skipped("geometry unavailable"),
            };
            let levelset_report = match &scans {
                Stage::Ran(s) => Stage::Ran(s.report.clone()),
                Stage::Skipped { reason } => Stage::Skipped {
                    reason: reason.clone(),
                },
                Stage::Failed { error } => Stage::Failed {
                    error: error.clone(),
                },
            };
            let quotient = match (&geom, scans.ran()) {
                _ if stages == Stages::ScanOnly => Stage::skipped("scan only"),
                (Some(g), Some(s)) => {
                    let closed = matches!(
                        config.model,
                        Some(ModelSpec::Rp3Model { .. }) | Some(ModelSpec::Round { .. })
                    );
                    if !closed {
                        Stage::skipped("no closed manifold behind the end")
                    } else if g.ends.iter().any(|e| !e.horizon) {
                        Stage::skipped("some end has no horizon")
                    } else if s.combined.is_none() && g.ends.len() > 1 {
                        Stage::skipped("ends could not be combined")
                    } else {
                        let card = g.ends.len();
                        runner.timed("quotient", |r| quotient_stage(r, s, card))
                    }
                }
                _ => Stage::skipped("level-set scans unavailable"),
            };
            let grid = match (&geom, scans.ran()) {
                _ if config.solver.grid_cells == 0 => Stage::skipped("grid cross-check disabled"),
                (Some(g), Some(s)) => {
                    if g.ends[0].metric.factor().is_flat_harmonic() {
                        runner.timed("grid", |r| grid_stage(r, g, s))
                    } else {
                        Stage::skipped("conformal factor is not flat-harmonic")
                    }
                }
                _ => Stage::skipped("level-set scans unavailable"),
            };
            (geometry_report, levelset_report, quotient, grid)
        }
    };

    let exit_code = if runner.failed {
        EXIT_SOLVER
    } else if runner
        .verdicts
        .iter()
        .any(|v| v.kind == VerdictKind::Topological && !v.pass)
    {
        EXIT_ASSUMPTION
    } else if runner.verdicts.iter().any(|v| !v.pass) {
        EXIT_NUMERICAL
    } else {
        EXIT_PASS
    };
    let timestamps = config.output.timestamps;
    let report = RunReport {
        name: config.name.clone(),
        seed: config.solver.seed,
        topology,
        geometry,
        levelset,
        quotient,
        grid,
        verdicts: runner.verdicts,
        exit_code,
        timings: timestamps.then_some(runner.timings),
        generated_unix: timestamps.then(|| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map_or(0, |d| d.as_secs())
        }),
    };
    Ok(RunOutcome { report, tables })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::builtins::builtin;

    fn quiet(name: &str) -> ScenarioConfig {
        let mut c = builtin(name).unwrap();
        c.output.timestamps = false;
        c
    }

    #[test]
    fn schwarzschild_has_no_group_stage() {
        let out = run(&quiet("schwarzschild"), Stages::All).unwrap();
        let rep = &out.report;
        assert_eq!(rep.exit_code, EXIT_PASS, "{:#?}", rep.verdicts);
        assert!(matches!(rep.quotient, Stage::Skipped { .. }));
        let ls = rep.levelset.ran().unwrap();
        assert!(matches!(ls.equivariant, Stage::Skipped { .. }));
        assert_eq!(ls.ends[0].minimal_bound.ran().unwrap().near_equality, 200);
        assert_eq!(out.tables.len(), 1);
    }

    #[test]
    fn circle_action_stops_at_topology() {
        let rep = run(&quiet("s2xs1-circle-z2"), Stages::All).unwrap().report;
        assert_eq!(rep.exit_code, EXIT_ASSUMPTION);
        match &rep.levelset {
            Stage::Skipped { reason } => assert!(reason.contains("(iv)"), "{reason}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sphere_action_passes() {
        let rep = run(&quiet("s2xs1-sphere-z2"), Stages::All).unwrap().report;
        assert_eq!(rep.exit_code, EXIT_PASS, "{:#?}", rep.verdicts);
        let lemma = &rep.topology.ran().unwrap().lemma;
        assert_eq!((lemma.j, lemma.l1_boundary_copies, lemma.k0), (1, 2, 2));
    }

    #[test]
    fn report_is_deterministic() {
        let a =
            serde_json::to_string(&run(&quiet("rp3-model"), Stages::All).unwrap().report).unwrap();
        let b =
            serde_json::to_string(&run(&quiet("rp3-model"), Stages::All).unwrap().report).unwrap();
        assert_eq!(a, b);
        assert!(!a.contains("timings"));
    }

    #[test]
    fn stage_errors_map_to_solver_exit() {
        let mut c = quiet("flat-r3");
        c.model = Some(ModelSpec::Flat {
            boundary_radius: 0.0,
        });
        let rep = run(&c, Stages::All).unwrap().report;
        assert_eq!(rep.exit_code, EXIT_SOLVER);
        assert!(matches!(rep.levelset, Stage::Failed { .. }));
    }
}
