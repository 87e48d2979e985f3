//! Graph encodings of sphere decompositions and checks of the topological
//! hypotheses.
//!
//! A [`TopologyScenario`] is a connected multigraph: vertices are the
//! regions of the complement of a family of embedded surfaces, edges are
//! the surfaces. A surface with the same region on both sides is a
//! self-loop. A finite group acts by permuting regions and surfaces
//! compatibly with incidence.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Enumeration limit for [`TopologyScenario::alpha_two_region_max`].
pub const ALPHA_EDGE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub name: String,
    /// Marks a region containing an end at infinity.
    #[serde(default)]
    pub exterior: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub name: String,
    /// The one or two regions on either side.
    pub joins: [String; 2],
    #[serde(default)]
    pub genus: u32,
}

/// Permutation of regions and surfaces by one generator; names absent from
/// a map are fixed.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(default)]
    pub regions: BTreeMap<String, String>,
    #[serde(default)]
    pub spheres: BTreeMap<String, String>,
}

/// Name-based description of a scenario, as found in configuration files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub regions: Vec<Region>,
    #[serde(default)]
    pub spheres: Vec<SurfaceSpec>,
    #[serde(default)]
    pub generators: Vec<GeneratorSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Edge {
    name: String,
    ends: [usize; 2],
    genus: u32,
}

impl Edge {
    fn is_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Generator {
    regions: Vec<usize>,
    edges: Vec<usize>,
}

/// Validated scenario with index-based incidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologyScenario {
    regions: Vec<Region>,
    edges: Vec<Edge>,
    generators: Vec<Generator>,
}

fn index_map<'a, I: Iterator<Item = &'a str>>(
    names: I,
    kind: &'static str,
) -> Result<BTreeMap<&'a str, usize>> {
    let mut map = BTreeMap::new();
    for (i, n) in names.enumerate() {
        if map.insert(n, i).is_some() {
            return Err(Error::Config(format!("duplicate {kind} name `{n}`")));
        }
    }
    Ok(map)
}

fn permutation(
    map: &BTreeMap<String, String>,
    index: &BTreeMap<&str, usize>,
    kind: &'static str,
) -> Result<Vec<usize>> {
    let mut perm: Vec<usize> = (0..index.len()).collect();
    for (from, to) in map {
        let lookup = |n: &str| {
            index.get(n).copied().ok_or_else(|| Error::Lookup {
                kind,
                name: n.to_string(),
            })
        };
        perm[lookup(from)?] = lookup(to)?;
    }
    let distinct: BTreeSet<usize> = perm.iter().copied().collect();
    if distinct.len() != perm.len() {
        return Err(Error::Config(format!(
            "generator map on {kind}s is not a bijection"
        )));
    }
    Ok(perm)
}

fn unordered(e: [usize; 2]) -> [usize; 2] {
    if e[0] <= e[1] {
        e
    } else {
        [e[1], e[0]]
    }
}

/// Status of one hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictStatus {
    Pass,
    Fail,
    NotChecked,
    NotApplicable,
}

/// Evidence attached to a failed hypothesis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    NoFiniteOrbit,
    FixedPoint {
        min_card: usize,
    },
    AlphaDeficit {
        alpha: Option<i64>,
        cut: Vec<String>,
    },
    DisconnectedUnion {
        spheres: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssumptionVerdict {
    pub status: VerdictStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub note: String,
}

impl AssumptionVerdict {
    fn pass(note: impl Into<String>) -> Self {
        Self {
            status: VerdictStatus::Pass,
            witness: None,
            note: note.into(),
        }
    }

    fn fail(witness: Witness, note: impl Into<String>) -> Self {
        Self {
            status: VerdictStatus::Fail,
            witness: Some(witness),
            note: note.into(),
        }
    }

    fn other(status: VerdictStatus, note: impl Into<String>) -> Self {
        Self {
            status,
            witness: None,
            note: note.into(),
        }
    }
}

/// Verdicts for the four hypotheses (i)–(iv).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssumptionReport {
    pub finite_orbit: AssumptionVerdict,
    pub connected_sum: AssumptionVerdict,
    pub sphere_fixed_point: AssumptionVerdict,
    pub non_separating: AssumptionVerdict,
}

impl AssumptionReport {
    pub fn verdicts(&self) -> [(&'static str, &AssumptionVerdict); 4] {
        [
            ("i", &self.finite_orbit),
            ("ii", &self.connected_sum),
            ("iii", &self.sphere_fixed_point),
            ("iv", &self.non_separating),
        ]
    }

    /// True when no checked hypothesis failed.
    pub fn all_pass(&self) -> bool {
        self.verdicts()
            .iter()
            .all(|(_, v)| v.status != VerdictStatus::Fail)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.verdicts()
            .iter()
            .filter(|(_, v)| v.status == VerdictStatus::Fail)
            .map(|(k, _)| *k)
            .collect()
    }
}

/// What is known about the action on the closed manifold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSummary {
    /// `inf card(G·p)`, `None` when every orbit is infinite.
    pub min_card: Option<usize>,
    #[serde(default)]
    pub has_fixed_point: bool,
    /// Whether the closed manifold is diffeomorphic to `S³`.
    #[serde(default)]
    pub is_sphere_manifold: bool,
}

/// Conclusion of the outermost-sphere lemma on a scenario.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaVerdict {
    /// Number of ends `k₀`.
    pub k0: usize,
    /// Number of maximal `G`-connected unions of horizon spheres.
    pub j: usize,
    /// Distinct spheres in each union.
    pub l: Vec<usize>,
    /// Boundary spheres of each end, counted per end.
    pub boundary_per_end: Vec<usize>,
    /// `L₁` counting each horizon sphere once.
    pub l1_distinct: usize,
    /// `L₁` counting a sphere once for every end it bounds.
    pub l1_boundary_copies: usize,
    /// Some horizon sphere bounds two ends at once.
    pub shared_boundary: bool,
    pub all_separating: bool,
    pub pass: bool,
    pub violated: Vec<String>,
}

/// Largest total Euler characteristic of a two-region cut.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaResult {
    /// `None` when no subset of surfaces cuts the graph into exactly two
    /// regions.
    pub alpha: Option<i64>,
    pub cut: Vec<String>,
}

impl TopologyScenario {
    pub fn from_spec(spec: &ScenarioSpec) -> Result<Self> {
        let rindex = index_map(spec.regions.iter().map(|r| r.name.as_str()), "region")?;
        let eindex = index_map(spec.spheres.iter().map(|s| s.name.as_str()), "sphere")?;
        let edges = spec
            .spheres
            .iter()
            .map(|s| {
                let look = |n: &String| {
                    rindex
                        .get(n.as_str())
                        .copied()
                        .ok_or_else(|| Error::Lookup {
                            kind: "region",
                            name: n.clone(),
                        })
                };
                Ok(Edge {
                    name: s.name.clone(),
                    ends: [look(&s.joins[0])?, look(&s.joins[1])?],
                    genus: s.genus,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let generators = spec
            .generators
            .iter()
            .map(|g| {
                Ok(Generator {
                    regions: permutation(&g.regions, &rindex, "region")?,
                    edges: permutation(&g.spheres, &eindex, "sphere")?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let scenario = Self {
            regions: spec.regions.clone(),
            edges,
            generators,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn to_spec(&self) -> ScenarioSpec {
        let rname = |i: usize| self.regions[i].name.clone();
        ScenarioSpec {
            regions: self.regions.clone(),
            spheres: self
                .edges
                .iter()
                .map(|e| SurfaceSpec {
                    name: e.name.clone(),
                    joins: [rname(e.ends[0]), rname(e.ends[1])],
                    genus: e.genus,
                })
                .collect(),
            generators: self
                .generators
                .iter()
                .map(|g| GeneratorSpec {
                    regions: g
                        .regions
                        .iter()
                        .enumerate()
                        .filter(|(i, j)| i != *j)
                        .map(|(i, &j)| (rname(i), rname(j)))
                        .collect(),
                    spheres: g
                        .edges
                        .iter()
                        .enumerate()
                        .filter(|(i, j)| i != *j)
                        .map(|(i, &j)| (self.edges[i].name.clone(), self.edges[j].name.clone()))
                        .collect(),
                })
                .collect(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.regions.is_empty() {
            return Err(Error::Config("scenario has no regions".into()));
        }
        for g in &self.generators {
            for (i, e) in self.edges.iter().enumerate() {
                let image = &self.edges[g.edges[i]];
                let mapped = unordered([g.regions[e.ends[0]], g.regions[e.ends[1]]]);
                if mapped != unordered(image.ends) {
                    return Err(Error::Config(format!(
                        "generator maps sphere `{}` to `{}` but does not map its regions accordingly",
                        e.name, image.name
                    )));
                }
                if image.genus != e.genus {
                    return Err(Error::Config(format!(
                        "generator maps sphere `{}` to a surface of different genus",
                        e.name
                    )));
                }
            }
            for (i, r) in self.regions.iter().enumerate() {
                if self.regions[g.regions[i]].exterior != r.exterior {
                    return Err(Error::Config(format!(
                        "generator maps region `{}` across the exterior/bounded divide",
                        r.name
                    )));
                }
            }
        }
        if self.components(None) != 1 {
            return Err(Error::Config("region graph is not connected".into()));
        }
        let trivial = self.regions.len() == 1 && self.edges.is_empty();
        if !trivial {
            for (i, r) in self.regions.iter().enumerate() {
                if r.exterior && !self.edges.iter().any(|e| e.ends.contains(&i)) {
                    return Err(Error::Config(format!(
                        "exterior region `{}` has no boundary sphere",
                        r.name
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn region_count(&self) -> usize {
        self.regions.len()
    }

    pub fn sphere_count(&self) -> usize {
        self.edges.len()
    }

    pub fn sphere_name(&self, e: usize) -> &str {
        &self.edges[e].name
    }

    pub fn sphere_index(&self, name: &str) -> Result<usize> {
        self.edges
            .iter()
            .position(|e| e.name == name)
            .ok_or_else(|| Error::Lookup {
                kind: "sphere",
                name: name.to_string(),
            })
    }

    pub fn ends(&self) -> Vec<usize> {
        (0..self.regions.len())
            .filter(|&i| self.regions[i].exterior)
            .collect()
    }

    fn check_edge(&self, e: usize) -> Result<()> {
        if e >= self.edges.len() {
            return Err(Error::Lookup {
                kind: "sphere",
                name: format!("#{e}"),
            });
        }
        Ok(())
    }

    /// Connected components of the graph with the edges in `removed` deleted.
    fn components(&self, removed: Option<&[bool]>) -> usize {
        let n = self.regions.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut count = n;
        for (i, e) in self.edges.iter().enumerate() {
            if removed.is_some_and(|r| r[i]) {
                continue;
            }
            let (a, b) = (find(&mut parent, e.ends[0]), find(&mut parent, e.ends[1]));
            if a != b {
                parent[a] = b;
                count -= 1;
            }
        }
        count
    }

    /// True iff deleting `sphere` disconnects the region graph.
    pub fn is_separating(&self, sphere: usize) -> Result<bool> {
        self.check_edge(sphere)?;
        let edge = &self.edges[sphere];
        if edge.is_loop() {
            return Ok(false);
        }
        let mut seen = vec![false; self.regions.len()];
        let mut stack = vec![edge.ends[0]];
        seen[edge.ends[0]] = true;
        while let Some(v) = stack.pop() {
            for (i, e) in self.edges.iter().enumerate() {
                if i == sphere || !e.ends.contains(&v) {
                    continue;
                }
                let w = if e.ends[0] == v { e.ends[1] } else { e.ends[0] };
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        Ok(!seen[edge.ends[1]])
    }

    /// Bridge flags for every edge, by a lowpoint search that keys on edge
    /// ids so parallel edges are never mistaken for bridges.
    pub fn bridges(&self) -> Vec<bool> {
        let n = self.regions.len();
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (i, e) in self.edges.iter().enumerate() {
            if !e.is_loop() {
                adj[e.ends[0]].push((e.ends[1], i));
                adj[e.ends[1]].push((e.ends[0], i));
            }
        }
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut out = vec![false; self.edges.len()];
        let mut timer = 0;
        fn dfs(
            v: usize,
            via: Option<usize>,
            adj: &[Vec<(usize, usize)>],
            disc: &mut [usize],
            low: &mut [usize],
            out: &mut [bool],
            timer: &mut usize,
        ) {
            disc[v] = *timer;
            low[v] = *timer;
            *timer += 1;
            for &(w, id) in &adj[v] {
                if Some(id) == via {
                    continue;
                }
                if disc[w] == usize::MAX {
                    dfs(w, Some(id), adj, disc, low, out, timer);
                    low[v] = low[v].min(low[w]);
                    if low[w] > disc[v] {
                        out[id] = true;
                    }
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            }
        }
        for v in 0..n {
            if disc[v] == usize::MAX {
                dfs(v, None, &adj, &mut disc, &mut low, &mut out, &mut timer);
            }
        }
        out
    }

    /// Orbits of the generated group on a set of edges.
    fn edge_orbits(&self, set: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
        let mut remaining = set.clone();
        let mut orbits = Vec::new();
        while let Some(&start) = remaining.iter().next() {
            let mut orbit = BTreeSet::from([start]);
            let mut stack = vec![start];
            while let Some(e) = stack.pop() {
                for g in &self.generators {
                    let img = g.edges[e];
                    if orbit.insert(img) {
                        stack.push(img);
                    }
                }
            }
            for e in &orbit {
                remaining.remove(e);
            }
            orbits.push(orbit);
        }
        orbits
    }

    /// True iff the group permutes the spheres of `set` transitively.
    ///
    /// The spheres of an embedded union are disjoint, so its components
    /// are the individual spheres.
    pub fn g_connected(&self, set: &[usize]) -> Result<bool> {
        if set.is_empty() {
            return Err(Error::DegenerateInput("empty sphere set".into()));
        }
        for &e in set {
            self.check_edge(e)?;
        }
        let s: BTreeSet<usize> = set.iter().copied().collect();
        for g in &self.generators {
            if s.iter().any(|&e| !s.contains(&g.edges[e])) {
                return Err(Error::Domain(
                    "sphere set is not invariant under the group".into(),
                ));
            }
        }
        Ok(self.edge_orbits(&s).len() == 1)
    }

    /// Genus-zero surfaces that do not separate.
    pub fn non_separating_spheres(&self) -> Vec<usize> {
        let bridges = self.bridges();
        (0..self.edges.len())
            .filter(|&i| self.edges[i].genus == 0 && !bridges[i])
            .collect()
    }

    fn names(&self, set: &BTreeSet<usize>) -> Vec<String> {
        set.iter().map(|&e| self.edges[e].name.clone()).collect()
    }

    /// Checks hypotheses (i)–(iv). `q_model` encodes the summand `Q` of a
    /// decomposition `P # Q` with genus labels; (ii) is reported as not
    /// checked without it.
    pub fn check_assumptions(
        &self,
        summary: &ActionSummary,
        q_model: Option<&TopologyScenario>,
    ) -> Result<AssumptionReport> {
        let finite_orbit = match summary.min_card {
            Some(k) => AssumptionVerdict::pass(format!("minimal orbit has {k} points")),
            None => AssumptionVerdict::fail(Witness::NoFiniteOrbit, "every orbit is infinite"),
        };
        let connected_sum = match q_model {
            None => AssumptionVerdict::other(
                VerdictStatus::NotChecked,
                "no summand Q with genus data supplied",
            ),
            Some(q) => {
                let a = q.alpha_two_region_max()?;
                if a.alpha == Some(2) {
                    AssumptionVerdict::pass("α(Q) = 2 on the supplied summand")
                } else {
                    AssumptionVerdict::fail(
                        Witness::AlphaDeficit {
                            alpha: a.alpha,
                            cut: a.cut,
                        },
                        "α(Q) differs from 2 on the supplied summand",
                    )
                }
            }
        };
        let fixed = summary.has_fixed_point || summary.min_card == Some(1);
        let sphere_fixed_point = if !summary.is_sphere_manifold {
            AssumptionVerdict::other(VerdictStatus::NotApplicable, "manifold is not S³")
        } else if fixed {
            AssumptionVerdict::fail(
                Witness::FixedPoint {
                    min_card: summary.min_card.unwrap_or(1),
                },
                "the action on S³ has a fixed point",
            )
        } else {
            AssumptionVerdict::pass("no fixed point on S³")
        };
        let ns: BTreeSet<usize> = self.non_separating_spheres().into_iter().collect();
        let non_separating = if ns.is_empty() {
            AssumptionVerdict::other(VerdictStatus::NotApplicable, "no non-separating sphere")
        } else if fixed || summary.min_card.is_none() {
            AssumptionVerdict::fail(
                Witness::FixedPoint {
                    min_card: summary.min_card.unwrap_or(1),
                },
                "non-separating sphere present but the minimal orbit is a point",
            )
        } else {
            // Orbits of non-separating spheres are the maximal G-connected
            // invariant unions; each must be a single sphere.
            match self.edge_orbits(&ns).into_iter().find(|o| o.len() > 1) {
                Some(orbit) => AssumptionVerdict::fail(
                    Witness::DisconnectedUnion {
                        spheres: self.names(&orbit),
                    },
                    format!(
                        "G-connected union of {} non-separating spheres",
                        orbit.len()
                    ),
                ),
                None => {
                    AssumptionVerdict::pass("every G-connected non-separating union is one sphere")
                }
            }
        };
        Ok(AssumptionReport {
            finite_orbit,
            connected_sum,
            sphere_fixed_point,
            non_separating,
        })
    }

    /// Evaluates the conclusion of the outermost-sphere lemma: horizon
    /// spheres (those bounding an end) are all separating, they form a
    /// single `G`-connected union, and each end has one boundary sphere.
    pub fn lemma_outermost_verdict(&self, assumptions: &AssumptionReport) -> LemmaVerdict {
        let ends = self.ends();
        let horizon: BTreeSet<usize> = (0..self.edges.len())
            .filter(|&i| self.edges[i].ends.iter().any(|v| self.regions[*v].exterior))
            .collect();
        let unions = self.edge_orbits(&horizon);
        let l: Vec<usize> = unions.iter().map(BTreeSet::len).collect();
        let boundary_per_end: Vec<usize> = ends
            .iter()
            .map(|&v| {
                horizon
                    .iter()
                    .filter(|&&e| self.edges[e].ends.contains(&v))
                    .count()
            })
            .collect();
        let shared_boundary = horizon.iter().any(|&e| {
            let [a, b] = self.edges[e].ends;
            a != b && self.regions[a].exterior && self.regions[b].exterior
        });
        let bridges = self.bridges();
        let all_separating = horizon.iter().all(|&e| bridges[e]);
        let l1_distinct = l.first().copied().unwrap_or(0);
        let l1_boundary_copies = boundary_per_end.iter().sum();

        let mut violated = Vec::new();
        for key in assumptions.failed() {
            violated.push(format!("assumption ({key}) failed"));
        }
        if !all_separating {
            let bad: Vec<&str> = horizon
                .iter()
                .filter(|&&e| !bridges[e])
                .map(|&e| self.edges[e].name.as_str())
                .collect();
            violated.push(format!(
                "non-separating horizon spheres: {}",
                bad.join(", ")
            ));
        }
        if unions.len() != 1 {
            violated.push(format!("J = {} (expected 1)", unions.len()));
        }
        if boundary_per_end.iter().any(|&c| c != 1) {
            violated.push("some end boundary is not a single sphere".into());
        }
        if l1_boundary_copies != ends.len() {
            violated.push(format!(
                "L₁ = {l1_boundary_copies} boundary copies, k₀ = {}",
                ends.len()
            ));
        }
        LemmaVerdict {
            k0: ends.len(),
            j: unions.len(),
            l,
            boundary_per_end,
            l1_distinct,
            l1_boundary_copies,
            shared_boundary,
            all_separating,
            pass: violated.is_empty(),
            violated,
        }
    }

    /// `max Σ (2 − 2·genus)` over surface subsets whose removal leaves
    /// exactly two regions, by exhaustive enumeration.
    pub fn alpha_two_region_max(&self) -> Result<AlphaResult> {
        let m = self.edges.len();
        if m > ALPHA_EDGE_LIMIT {
            return Err(Error::TooLarge {
                what: "surface family",
                size: m,
                limit: ALPHA_EDGE_LIMIT,
            });
        }
        let chi: Vec<i64> = self.edges.iter().map(|e| 2 - 2 * e.genus as i64).collect();
        let mut best: Option<(i64, u32)> = None;
        let mut removed = vec![false; m];
        for mask in 1u32..(1u32 << m) {
            for (i, r) in removed.iter_mut().enumerate() {
                *r = mask & (1 << i) != 0;
            }
            if self.components(Some(&removed)) != 2 {
                continue;
            }
            let total: i64 = (0..m).filter(|&i| removed[i]).map(|i| chi[i]).sum();
            if best.is_none_or(|(b, _)| total > b) {
                best = Some((total, mask));
            }
        }
        Ok(match best {
            None => AlphaResult {
                alpha: None,
                cut: Vec::new(),
            },
            Some((a, mask)) => AlphaResult {
                alpha: Some(a),
                cut: (0..m)
                    .filter(|&i| mask & (1 << i) != 0)
                    .map(|i| self.edges[i].name.clone())
                    .collect(),
            },
        })
    }
}

fn region(name: &str, exterior: bool) -> Region {
    Region {
        name: name.into(),
        exterior,
    }
}

fn sphere(name: &str, a: &str, b: &str) -> SurfaceSpec {
    SurfaceSpec {
        name: name.into(),
        joins: [a.into(), b.into()],
        genus: 0,
    }
}

fn swap(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .flat_map(|(a, b)| {
            [
                (a.to_string(), b.to_string()),
                (b.to_string(), a.to_string()),
            ]
        })
        .collect()
}

/// Encodings of the worked examples.
pub mod builtins {
    use super::*;

    /// `S³` cut by one sphere into two balls: the summand `Q` with `α = 2`.
    pub fn s3_summand() -> ScenarioSpec {
        ScenarioSpec {
            regions: vec![region("B1", false), region("B2", false)],
            spheres: vec![sphere("S", "B1", "B2")],
            generators: Vec::new(),
        }
    }

    /// Blow-up of `S²×S¹` at an orbit of `ℤ₂` acting antipodally on `S²`:
    /// two ends, each bounded by its own horizon sphere, and an invariant
    /// non-separating sphere inside the trapped region.
    pub fn s2xs1_sphere_z2() -> ScenarioSpec {
        ScenarioSpec {
            regions: vec![region("N1", true), region("N2", true), region("K", false)],
            spheres: vec![
                sphere("H1", "N1", "K"),
                sphere("H2", "N2", "K"),
                sphere("F", "K", "K"),
            ],
            generators: vec![GeneratorSpec {
                regions: swap(&[("N1", "N2")]),
                spheres: swap(&[("H1", "H2")]),
            }],
        }
    }

    /// Blow-up of `S²×S¹` at an orbit of `ℤ₂` acting on `S¹`: the two
    /// horizon spheres both join the two ends and are swapped.
    pub fn s2xs1_circle_z2() -> ScenarioSpec {
        ScenarioSpec {
            regions: vec![region("N1", true), region("N2", true)],
            spheres: vec![sphere("H1", "N1", "N2"), sphere("H2", "N1", "N2")],
            generators: vec![GeneratorSpec {
                regions: swap(&[("N1", "N2")]),
                spheres: swap(&[("H1", "H2")]),
            }],
        }
    }

    /// Antipodal blow-up of `S³`: one invariant horizon shared by both ends.
    pub fn antipodal_s3() -> ScenarioSpec {
        ScenarioSpec {
            regions: vec![region("N1", true), region("N2", true)],
            spheres: vec![sphere("H", "N1", "N2")],
            generators: vec![GeneratorSpec {
                regions: swap(&[("N1", "N2")]),
                spheres: BTreeMap::new(),
            }],
        }
    }

    /// Blow-up of `S³` at a free `ℤ_p` orbit: `p` ends around a trapped
    /// core, cyclically permuted. For `p = 2` this is [`antipodal_s3`].
    pub fn lens(p: usize) -> ScenarioSpec {
        if p == 2 {
            return antipodal_s3();
        }
        if p == 1 {
            return ScenarioSpec {
                regions: vec![region("N1", true)],
                spheres: Vec::new(),
                generators: Vec::new(),
            };
        }
        let mut regions: Vec<Region> = (1..=p).map(|i| region(&format!("N{i}"), true)).collect();
        regions.push(region("K", false));
        let spheres = (1..=p)
            .map(|i| sphere(&format!("H{i}"), &format!("N{i}"), "K"))
            .collect();
        let cycle = |prefix: &str| {
            (1..=p)
                .map(|i| (format!("{prefix}{i}"), format!("{prefix}{}", i % p + 1)))
                .collect()
        };
        ScenarioSpec {
            regions,
            spheres,
            generators: vec![GeneratorSpec {
                regions: cycle("N"),
                spheres: cycle("H"),
            }],
        }
    }

    /// Flat `ℝ³` from the trivial group: one end, no horizon.
    pub fn trivial_r3() -> ScenarioSpec {
        lens(1)
    }
}
