//! Harmonic potentials on asymptotically flat ends and the level-set
//! quantity `W(t) = ∫_{w=t} |∇w|² da` with `w = −log u`.
//!
//! For `g = φ⁴δ` radial, `Δ_g u = φ⁻⁶ r⁻² (r² φ² u')'`, so the potential
//! with `u = 1` on `{r = r_b}` and `u → 0` at infinity is
//! `u(r) = c ∫₀^{1/r} ds / φ(s)²` with `c` fixed by the boundary value.
//! The flux `∫ |∇u| da = 4πc` is the same through every level.

mod grid;

pub use grid::{solve_harmonic_grid3d, GridSolution, GridSpec};

use crate::blowup::BlowupModel;
use crate::error::{Error, Result};
use crate::geom::RadialMetric;
use crate::numerics::bisect;
use crate::numerics::interp::CubicHermite;
use crate::numerics::quad::{self, QuadOptions};
use serde::Serialize;
use std::f64::consts::PI;
use std::io::Write;

/// How a [`HarmonicSolution`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// `φu = b/r` for a factor of the form `a + b/r`.
    ClosedForm,
    /// Quadrature of the first integral `r² φ² u' = −c`.
    RadialOde,
    Grid3d,
}

#[derive(Debug, Clone)]
enum Profile {
    ClosedForm {
        b: f64,
    },
    Quadrature {
        cumulative: CubicHermite,
        total: f64,
    },
}

/// Harmonic `u` on `{ r ≥ r_b }` with `u(r_b) = 1`, `u → 0`.
#[derive(Debug, Clone)]
pub struct HarmonicSolution {
    end: RadialMetric,
    c: f64,
    provenance: Provenance,
    profile: Profile,
}

const CUMULATIVE_KNOTS: usize = 4001;

impl HarmonicSolution {
    pub fn end(&self) -> &RadialMetric {
        &self.end
    }

    pub fn boundary_radius(&self) -> f64 {
        self.end.r_min()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// `C₀ = ∫_Σ |∇u| da`, identical on every level set.
    pub fn capacity_flux(&self) -> f64 {
        4.0 * PI * self.c
    }

    /// `(u(r), u'(r))` for `r ≥ r_b`.
    pub fn eval(&self, r: f64) -> Result<(f64, f64)> {
        let rb = self.boundary_radius();
        if r < rb * (1.0 - 1e-12) {
            return Err(Error::Range { value: r, min: rb });
        }
        let s = 1.0 / r;
        Ok(self.eval_inverted(s))
    }

    /// `(u, du/dr)` at `s = 1/r`.
    fn eval_inverted(&self, s: f64) -> (f64, f64) {
        let factor = self.end.factor();
        match &self.profile {
            Profile::ClosedForm { b } => {
                // u = b s / φ(s)
                let (p, ps, _) = factor.inverted_jet(s);
                let u = b * s / p;
                let du_ds = b * (p - s * ps) / (p * p);
                (u, -s * s * du_ds)
            }
            Profile::Quadrature { cumulative, total } => {
                let (i, di, _) = cumulative.eval(s);
                (i / total, -s * s * di / total)
            }
        }
    }

    /// Radius of the level `{u = e^{−t}}`, by bisection in `s = 1/r`.
    pub fn level_radius(&self, t: f64) -> Option<f64> {
        if t < 0.0 {
            return None;
        }
        let target = (-t).exp();
        let sb = 1.0 / self.boundary_radius();
        if t == 0.0 {
            return Some(self.boundary_radius());
        }
        bisect(|s| self.eval_inverted(s).0 - target, 0.0, sb, 0.0).map(|s| 1.0 / s)
    }
}

fn check_boundary(end: &RadialMetric) -> Result<f64> {
    let rb = end.r_min();
    if !(rb > 0.0) {
        return Err(Error::Boundary(
            "the end has no boundary sphere (r_min = 0)".into(),
        ));
    }
    let phi_inf = end.factor().asymptotic_value();
    if !(phi_inf > 0.0) {
        return Err(Error::Boundary(format!(
            "conformal factor does not tend to a positive constant (φ_∞ = {phi_inf})"
        )));
    }
    Ok(rb)
}

/// Solves `Δ_g u = 0` on the end, `u = 1` on its boundary, `u → 0` at
/// infinity; factors of the form `a + b/r` use the closed form.
pub fn solve_harmonic_radial(end: &RadialMetric) -> Result<HarmonicSolution> {
    if end.factor().is_flat_harmonic() {
        let rb = check_boundary(end)?;
        let b = rb * end.factor().value(rb);
        let c = b * end.factor().asymptotic_value();
        if !(b > 0.0) {
            return Err(Error::Solver {
                stage: "harmonic solve",
                message: "closed-form potential is not positive".into(),
                residual: b,
            });
        }
        return Ok(HarmonicSolution {
            end: end.clone(),
            c,
            provenance: Provenance::ClosedForm,
            profile: Profile::ClosedForm { b },
        });
    }
    solve_harmonic_radial_ode(end)
}

/// Same as [`solve_harmonic_radial`] but always integrates the radial
/// equation numerically.
pub fn solve_harmonic_radial_ode(end: &RadialMetric) -> Result<HarmonicSolution> {
    let rb = check_boundary(end)?;
    let factor = end.factor();
    let sb = 1.0 / rb;
    let knots: Vec<f64> = (0..CUMULATIVE_KNOTS)
        .map(|i| sb * i as f64 / (CUMULATIVE_KNOTS - 1) as f64)
        .collect();
    let integrand = |s: f64| factor.inverted_jet(s).0.powi(-2);
    let mut values = Vec::with_capacity(knots.len());
    let mut slopes = Vec::with_capacity(knots.len());
    let mut acc = 0.0;
    for (k, &s) in knots.iter().enumerate() {
        let p = factor.inverted_jet(s).0;
        if !(p > 0.0) {
            return Err(Error::Solver {
                stage: "harmonic solve",
                message: format!("conformal factor not positive at r = {}", 1.0 / s),
                residual: p,
            });
        }
        if k > 0 {
            acc += quad::gk15(&integrand, knots[k - 1], s).0;
        }
        values.push(acc);
        slopes.push(1.0 / (p * p));
    }
    let total = acc;
    let cumulative = CubicHermite::new(knots, values, slopes)?;
    Ok(HarmonicSolution {
        end: end.clone(),
        c: 1.0 / total,
        provenance: Provenance::RadialOde,
        profile: Profile::Quadrature { cumulative, total },
    })
}

/// One level `{w = t}` of a scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelSample {
    pub t: f64,
    /// Coordinate radius of the level sphere (of the first end for
    /// combined scans).
    pub r: f64,
    pub area: f64,
    /// `∫ |∇w| da`
    pub flux: f64,
    /// `∫ |∇w|² da`
    pub w: f64,
    /// `∫ |∇w|⁻¹ da`, when available.
    pub coarea: Option<f64>,
    /// `d/dt ∫ |∇w|⁻¹ da`, when available.
    pub dcoarea_dt: Option<f64>,
}

/// Samples of the level-set sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelSetScan {
    pub samples: Vec<LevelSample>,
    pub t_max: f64,
    /// Total capacity flux over all ends in the scan.
    pub c0: f64,
    /// Number of ends summed into the scan.
    pub ends: usize,
    pub warnings: Vec<String>,
}

impl LevelSetScan {
    /// `max_t |flux(t) e^{−t} / C₀ − 1|`.
    pub fn flux_deviation(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| (s.flux * (-s.t).exp() / self.c0 - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Smallest `W·area / flux² − 1`; non-negative by Cauchy–Schwarz.
    pub fn cauchy_schwarz_margin(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.w * s.area / (s.flux * s.flux) - 1.0)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn w0(&self) -> Result<f64> {
        match self.samples.first() {
            Some(s) if s.t == 0.0 => Ok(s.w),
            _ => Err(Error::MissingData("scan has no level at t = 0".into())),
        }
    }

    /// Cubic Hermite interpolant of the coarea term in `t`.
    pub fn coarea_interpolant(&self) -> Result<CubicHermite> {
        let missing = || Error::MissingData("scan lacks the coarea column".into());
        let mut t = Vec::with_capacity(self.samples.len());
        let mut v = Vec::with_capacity(self.samples.len());
        let mut d = Vec::with_capacity(self.samples.len());
        for s in &self.samples {
            t.push(s.t);
            v.push(s.coarea.ok_or_else(missing)?);
            d.push(s.dcoarea_dt.ok_or_else(missing)?);
        }
        CubicHermite::new(t, v, d)
    }
}

fn check_t_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::DegenerateInput("empty level grid".into()));
    }
    if t_grid[0] < 0.0 || t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain(
            "levels must be non-negative and strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Evaluates area, flux, `W` and the coarea term on each level.
///
/// Levels that cannot be located are dropped with a warning.
pub fn scan_levels(sol: &HarmonicSolution, t_grid: &[f64]) -> Result<LevelSetScan> {
    check_t_grid(t_grid)?;
    let factor = sol.end().factor();
    let c = sol.c;
    let mut samples = Vec::with_capacity(t_grid.len());
    let mut warnings = Vec::new();
    for &t in t_grid {
        let Some(r) = sol.level_radius(t) else {
            warnings.push(format!(
                "level t = {t} not found in the chart; scan truncated"
            ));
            break;
        };
        let (u, du) = sol.eval(r)?;
        let (p, dp, _) = factor.jet(r);
        let area = 4.0 * PI * r * r * p.powi(4);
        let grad_w = du.abs() / (u * p * p);
        let flux = grad_w * area;
        let w = grad_w * grad_w * area;
        let coarea = area / grad_w;
        // coarea = 4π r⁴ φ⁸ u / c along the level, and dr/dt = −u/u'.
        let dcoarea_dr = 4.0 * PI / c
            * (4.0 * r.powi(3) * p.powi(8) * u
                + 8.0 * r.powi(4) * p.powi(7) * dp * u
                + r.powi(4) * p.powi(8) * du);
        let dr_dt = -u / du;
        samples.push(LevelSample {
            t,
            r,
            area,
            flux,
            w,
            coarea: Some(coarea),
            dcoarea_dt: Some(dcoarea_dr * dr_dt),
        });
    }
    Ok(LevelSetScan {
        t_max: samples.last().map_or(0.0, |s| s.t),
        samples,
        c0: sol.capacity_flux(),
        ends: 1,
        warnings,
    })
}

/// One level of a bound check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundLevel {
    pub t: f64,
    pub w: f64,
    pub bound: f64,
    /// `bound − W`
    pub slack: f64,
}

/// Result of comparing `W(t)` against an upper bound at every level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub pass: bool,
    pub tolerance: f64,
    /// `max (W − bound)`; negative when the bound is strict everywhere.
    pub max_excess: f64,
    /// Levels with `|W − bound| ≤ 10⁻⁶ · bound`.
    pub near_equality: usize,
    pub levels: Vec<BoundLevel>,
}

fn check_against<F: Fn(f64) -> f64>(scan: &LevelSetScan, bound: F, tol: f64) -> BoundReport {
    let levels: Vec<BoundLevel> = scan
        .samples
        .iter()
        .map(|s| {
            let b = bound(s.t);
            BoundLevel {
                t: s.t,
                w: s.w,
                bound: b,
                slack: b - s.w,
            }
        })
        .collect();
    let max_excess = levels
        .iter()
        .map(|l| -l.slack)
        .fold(f64::NEG_INFINITY, f64::max);
    BoundReport {
        pass: levels.iter().all(|l| l.w <= l.bound + tol),
        tolerance: tol,
        max_excess,
        near_equality: levels
            .iter()
            .filter(|l| l.slack.abs() <= 1e-6 * l.bound)
            .count(),
        levels,
    }
}

/// `[e^{−t} √W₀ + (1 − e^{−t}) √(4π)]²`
pub fn monotonicity_bound(t: f64, w0: f64) -> f64 {
    let e = (-t).exp();
    (e * w0.sqrt() + (1.0 - e) * (4.0 * PI).sqrt()).powi(2)
}

/// `π (2 − e^{−t})²`
pub fn minimal_boundary_bound(t: f64) -> f64 {
    PI * (2.0 - (-t).exp()).powi(2)
}

/// Checks `W(t) ≤ [e^{−t}√W₀ + (1−e^{−t})√(4π)]² + tol` on a single-end scan.
pub fn check_monotonicity(scan: &LevelSetScan, w0: f64, tol: f64) -> BoundReport {
    check_against(scan, |t| monotonicity_bound(t, w0), tol)
}

/// Relative size of the boundary mean curvature below which the boundary
/// counts as minimal.
pub const MINIMAL_TOL: f64 = 1e-6;

/// Checks `W(t) ≤ π(2 − e^{−t})² + tol`; the boundary must be minimal.
pub fn check_minimal_bound(
    sol: &HarmonicSolution,
    scan: &LevelSetScan,
    tol: f64,
) -> Result<BoundReport> {
    let rb = sol.boundary_radius();
    let end = sol.end();
    let h = end.areal_growth(rb) / end.factor().value(rb);
    if h.abs() > MINIMAL_TOL {
        return Err(Error::Precondition(format!(
            "boundary sphere r = {rb} is not minimal (relative mean curvature {h:e})"
        )));
    }
    Ok(check_against(scan, minimal_boundary_bound, tol))
}

/// Sum of per-end scans together with the bound `card · π(2 − e^{−t})²`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivariantScan {
    pub scan: LevelSetScan,
    pub per_end: Vec<LevelSetScan>,
    pub card: usize,
    pub bound: BoundReport,
}

const SYMMETRY_TOL: f64 = 1e-8;

/// Sums `W`, flux, area and coarea over the ends of a blow-up whose ends are
/// permuted isometrically by the group.
pub fn combine_equivariant(
    model: &BlowupModel,
    per_end: &[HarmonicSolution],
    t_grid: &[f64],
    tol: f64,
) -> Result<EquivariantScan> {
    if per_end.len() != model.ends.len() || per_end.is_empty() {
        return Err(Error::Consistency(format!(
            "{} harmonic solutions for {} ends",
            per_end.len(),
            model.ends.len()
        )));
    }
    let reference = &per_end[0];
    let rb = reference.boundary_radius();
    for (i, sol) in per_end.iter().enumerate().skip(1) {
        let rel = (sol.boundary_radius() - rb).abs() / rb;
        if rel > SYMMETRY_TOL {
            return Err(Error::Symmetry(format!(
                "end {i} has boundary radius {} vs {rb}",
                sol.boundary_radius()
            )));
        }
        for k in 0..50 {
            let r = rb * (1.0 + 0.5 * k as f64).powi(2);
            let (u0, _) = reference.eval(r)?;
            let (u1, _) = sol.eval(r)?;
            let p0 = reference.end().factor().value(r);
            let p1 = sol.end().factor().value(r);
            if (u0 - u1).abs() > SYMMETRY_TOL || (p0 - p1).abs() > SYMMETRY_TOL {
                return Err(Error::Symmetry(format!(
                    "end {i} differs from end 0 at r = {r}"
                )));
            }
        }
    }
    let scans = per_end
        .iter()
        .map(|s| scan_levels(s, t_grid))
        .collect::<Result<Vec<_>>>()?;
    let n = scans.iter().map(|s| s.samples.len()).min().unwrap_or(0);
    let samples = (0..n)
        .map(|k| {
            let first = scans[0].samples[k];
            let sum = |f: &dyn Fn(&LevelSample) -> f64| {
                scans.iter().map(|s| f(&s.samples[k])).sum::<f64>()
            };
            let opt_sum = |f: &dyn Fn(&LevelSample) -> Option<f64>| {
                scans.iter().map(|s| f(&s.samples[k])).sum::<Option<f64>>()
            };
            LevelSample {
                t: first.t,
                r: first.r,
                area: sum(&|s| s.area),
                flux: sum(&|s| s.flux),
                w: sum(&|s| s.w),
                coarea: opt_sum(&|s| s.coarea),
                dcoarea_dt: opt_sum(&|s| s.dcoarea_dt),
            }
        })
        .collect::<Vec<_>>();
    let card = model.ends.len();
    let scan = LevelSetScan {
        t_max: samples.last().map_or(0.0, |s| s.t),
        samples,
        c0: per_end.iter().map(HarmonicSolution::capacity_flux).sum(),
        ends: card,
        warnings: scans.iter().flat_map(|s| s.warnings.clone()).collect(),
    };
    let bound = check_against(&scan, |t| card as f64 * minimal_boundary_bound(t), tol);
    Ok(EquivariantScan {
        scan,
        per_end: scans,
        card,
        bound,
    })
}

/// Writes a scan with its bound check as CSV with columns
/// `t,r,area,flux,W,bound,slack`.
pub fn write_scan_csv<W: Write>(out: W, scan: &LevelSetScan, bound: &BoundReport) -> Result<()> {
    let io = |e: csv::Error| Error::Config(format!("cannot write CSV: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "r", "area", "flux", "W", "bound", "slack"])
        .map_err(io)?;
    for (s, b) in scan.samples.iter().zip(&bound.levels) {
        w.write_record(
            [s.t, s.r, s.area, s.flux, s.w, b.bound, b.slack].map(|x| format!("{x:.12e}")),
        )
        .map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::Config(format!("cannot write CSV: {e}")))?;
    Ok(())
}

/// `∫ weight(t) · coarea(t) dt` over `[0, t_end]` using the scan's coarea
/// interpolant; `t_end` must lie within the scan.
pub fn coarea_integral<F: Fn(f64) -> f64>(
    scan: &LevelSetScan,
    weight: F,
    t_end: f64,
) -> Result<f64> {
    let interp = scan.coarea_interpolant()?;
    if t_end > scan.t_max * (1.0 + 1e-12) {
        return Err(Error::Domain(format!(
            "integration end {t_end} beyond scan horizon {}",
            scan.t_max
        )));
    }
    let mut breaks: Vec<f64> = scan
        .samples
        .iter()
        .map(|s| s.t)
        .filter(|&t| t < t_end)
        .collect();
    breaks.push(t_end);
    let opts = QuadOptions {
        rel_tol: 1e-12,
        abs_tol: 1e-300,
        max_panels: 400,
    };
    Ok(quad::integrate_pieces(|t| weight(t) * interp.eval(t).0, &breaks, opts)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{ConformalFactor, RadialTerm};
    use crate::numerics::linspace;

    fn schwarzschild(m: f64) -> RadialMetric {
        RadialMetric::new(ConformalFactor::schwarzschild(m), m / 2.0).unwrap()
    }

    #[test]
    fn schwarzschild_potential() {
        let sol = solve_harmonic_radial(&schwarzschild(2.0)).unwrap();
        assert_eq!(sol.provenance(), Provenance::ClosedForm);
        assert!((sol.eval(1.0).unwrap().0 - 1.0).abs() < 1e-15);
        assert!((sol.eval(3.0).unwrap().0 - 0.5).abs() < 1e-15);
        assert!((sol.capacity_flux() - 8.0 * PI).abs() < 1e-12);
        let ode = solve_harmonic_radial_ode(&schwarzschild(2.0)).unwrap();
        for r in [1.0, 1.5, 3.0, 40.0] {
            assert!((ode.eval(r).unwrap().0 - 2.0 / (r + 1.0)).abs() < 1e-10);
        }
        assert!((ode.capacity_flux() - 8.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn flat_end_potential_and_w() {
        let flat = RadialMetric::new(ConformalFactor::Flat { scale: 1.0 }, 1.0).unwrap();
        let sol = solve_harmonic_radial(&flat).unwrap();
        assert!((sol.eval(4.0).unwrap().0 - 0.25).abs() < 1e-15);
        let scan = scan_levels(&sol, &linspace(0.0, 5.0, 50)).unwrap();
        for s in &scan.samples {
            assert!((s.w - 4.0 * PI).abs() < 1e-9);
        }
        let rep = check_monotonicity(&scan, scan.w0().unwrap(), 1e-8);
        assert!(rep.pass);
        assert_eq!(rep.near_equality, 50);
    }

    #[test]
    fn schwarzschild_equality() {
        let sol = solve_harmonic_radial(&schwarzschild(2.0)).unwrap();
        let scan = scan_levels(&sol, &linspace(0.0, 5.0, 200)).unwrap();
        assert!((scan.samples[0].w - PI).abs() < 1e-12);
        for s in &scan.samples {
            assert!((s.w - minimal_boundary_bound(s.t)).abs() < 1e-9);
        }
        let t1 = scan_levels(&sol, &[1.0]).unwrap().samples[0].w;
        assert!((t1 - 8.368_630).abs() < 1e-6);
        assert!(scan.flux_deviation() < 1e-12);
        assert!(scan.cauchy_schwarz_margin() > -1e-12);
        let mono = check_monotonicity(&scan, PI, 1e-8);
        assert!(mono.pass && mono.near_equality == 200);
        let minimal = check_minimal_bound(&sol, &scan, 1e-8).unwrap();
        assert!(minimal.pass && minimal.max_excess.abs() < 1e-9);
    }

    #[test]
    fn ode_pipeline_reproduces_schwarzschild() {
        let sol = solve_harmonic_radial_ode(&schwarzschild(2.0)).unwrap();
        let scan = scan_levels(&sol, &linspace(0.0, 5.0, 200)).unwrap();
        for s in &scan.samples {
            assert!((s.w - minimal_boundary_bound(s.t)).abs() < 1e-3);
        }
        assert!(scan.flux_deviation() < 1e-6);
    }

    #[test]
    fn minimal_bound_requires_minimal_boundary() {
        let end = RadialMetric::new(ConformalFactor::schwarzschild(2.0), 2.0).unwrap();
        let sol = solve_harmonic_radial(&end).unwrap();
        let scan = scan_levels(&sol, &[0.0, 1.0]).unwrap();
        assert!(matches!(
            check_minimal_bound(&sol, &scan, 1e-8),
            Err(Error::Precondition(_))
        ));
        assert!((minimal_boundary_bound(40.0) - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn perturbed_end_is_strict() {
        let factor = ConformalFactor::Terms(vec![
            RadialTerm::Constant { value: 1.0 },
            RadialTerm::InverseR { weight: 1.0 },
            RadialTerm::Plummer {
                weight: 0.05,
                core: 1.0,
            },
        ]);
        let end = RadialMetric::new(factor, 1.5).unwrap();
        let sol = solve_harmonic_radial(&end).unwrap();
        assert_eq!(sol.provenance(), Provenance::RadialOde);
        let scan = scan_levels(&sol, &linspace(0.0, 6.0, 60)).unwrap();
        let rep = check_monotonicity(&scan, scan.w0().unwrap(), 1e-8);
        assert!(rep.pass);
        assert!(rep.levels.iter().skip(1).all(|l| l.slack > 0.0));
    }

    #[test]
    fn boundary_errors() {
        let end = RadialMetric::new(ConformalFactor::Flat { scale: 1.0 }, 0.0).unwrap();
        assert!(matches!(
            solve_harmonic_radial(&end),
            Err(Error::Boundary(_))
        ));
        let sol = solve_harmonic_radial(&schwarzschild(2.0)).unwrap();
        assert!(matches!(sol.eval(0.5), Err(Error::Range { .. })));
        assert!(matches!(
            scan_levels(&sol, &[1.0, 0.5]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn coarea_volume_identity() {
        // ∫₀^T coarea dt = Vol{r_b ≤ r ≤ r(T)} = ∫ 4π r² φ⁶ dr.
        let sol = solve_harmonic_radial(&schwarzschild(2.0)).unwrap();
        let scan = scan_levels(&sol, &linspace(0.0, 3.0, 121)).unwrap();
        let lhs = coarea_integral(&scan, |_| 1.0, 3.0).unwrap();
        let rt = sol.level_radius(3.0).unwrap();
        let rhs = quad::integrate(
            |r: f64| 4.0 * PI * r * r * (1.0 + 1.0 / r).powi(6),
            1.0,
            rt,
            QuadOptions::default(),
        )
        .unwrap()
        .value;
        assert!((lhs - rhs).abs() / rhs < 1e-7, "{lhs} vs {rhs}");
    }

    #[test]
    fn csv_has_fixed_header() {
        let sol = solve_harmonic_radial(&schwarzschild(2.0)).unwrap();
        let scan = scan_levels(&sol, &[0.0, 1.0]).unwrap();
        let rep = check_minimal_bound(&sol, &scan, 1e-8).unwrap();
        let mut buf = Vec::new();
        write_scan_csv(&mut buf, &scan, &rep).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), "t,r,area,flux,W,bound,slack");
        assert_eq!(text.lines().count(), 3);
    }
}
