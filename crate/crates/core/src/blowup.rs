//! Green's functions of the conformal Laplacian on round `S³`, their
//! group averages, and the asymptotically flat blow-up `Gr⁴ g` at an orbit.
//!
//! On the unit sphere `L₀ = Δ − R₀/8` with `R₀ = 6`. A radial solution
//! `Gr(d)` of `L₀ Gr = 0` becomes, after `v = sin(d) Gr`, the oscillator
//! `v'' + (1 − λ) v = 0` with `λ = R₀/8`, which is what the shooting solver
//! integrates.
//!
//! Each end of the blow-up is charted by stereographic projection from its
//! orbit point, rescaled so that the conformal factor tends to one:
//! `r = cot(θ/2)/2` where `θ` is the distance to the orbit point. The radial
//! profile of the end is the spherical mean of `2 sin(θ/2) Gr` over the
//! geodesic sphere of radius `θ`.

use crate::error::{Error, Result};
use crate::geom::{
    scalar_curvature_radial, ClosedModelMetric, ConformalFactor, InvertedTable, ModelKind,
    RadialMetric,
};
use crate::groups::{orbit, sphere_distance, FiniteGroupAction, OrbitData, Vec4};
use crate::numerics::interp::QuinticHermite;
use crate::numerics::ode::{self, OdeOptions};
use crate::numerics::quad::GaussLegendre;
use crate::numerics::{bisect, linspace};
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::Arc;

/// Distance from the singular points where the series take over.
pub const SERIES_CUTOFF: f64 = 1e-3;
const TABLE_KNOTS: usize = 600;
const MAX_SHOOTING_ITERATIONS: usize = 30;

/// Frobenius coefficients of the two radial modes at a pole:
/// `1/d + a₁ d + a₃ d³` and `1 + b₂ d² + b₄ d⁴`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct PoleSeries {
    a1: f64,
    a3: f64,
    b2: f64,
    b4: f64,
}

impl PoleSeries {
    fn new(lambda: f64) -> Self {
        let a1 = lambda / 2.0 - 1.0 / 3.0;
        let a3 = ((lambda + 2.0 / 3.0) * a1 - 2.0 / 45.0) / 12.0;
        let b2 = lambda / 6.0;
        let b4 = b2 * (lambda + 4.0 / 3.0) / 20.0;
        Self { a1, a3, b2, b4 }
    }

    fn singular(&self, d: f64) -> (f64, f64) {
        (
            1.0 / d + self.a1 * d + self.a3 * d.powi(3),
            -1.0 / (d * d) + self.a1 + 3.0 * self.a3 * d * d,
        )
    }

    fn regular(&self, d: f64) -> (f64, f64) {
        (
            1.0 + self.b2 * d * d + self.b4 * d.powi(4),
            2.0 * self.b2 * d + 4.0 * self.b4 * d.powi(3),
        )
    }
}

/// Outcome of the shooting iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShootingReport {
    pub iterations: usize,
    /// Coefficient of the regular mode mixed in at the pole.
    pub regular_coefficient: f64,
    /// Remaining coefficient of the mode singular at the antipode.
    pub antipodal_singular_coefficient: f64,
    /// Value at the antipode.
    pub antipodal_value: f64,
}

/// Radial Green's function of `L₀` with pole at `p` on the unit round
/// sphere, transported to radius `radius` by scaling.
#[derive(Debug, Clone)]
pub struct GreensProfile {
    radius: f64,
    lambda: f64,
    series: PoleSeries,
    regular_coefficient: f64,
    antipodal_value: f64,
    table: QuinticHermite,
    shooting: ShootingReport,
    pole: Vec4,
}

fn v_rhs(lambda: f64) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] {
    move |_, y| [y[1], -(1.0 - lambda) * y[0]]
}

fn to_v(d: f64, gr: f64, dgr: f64) -> [f64; 2] {
    [d.sin() * gr, d.cos() * gr + d.sin() * dgr]
}

const GREEN_ODE: OdeOptions = OdeOptions {
    rel_tol: 1e-13,
    abs_tol: 1e-15,
    initial_step: 1e-4,
    max_steps: 200_000,
};

impl GreensProfile {
    /// Value at unit-sphere distance `d`.
    fn unit_value(&self, d: f64) -> f64 {
        let d1 = PI - SERIES_CUTOFF;
        if d < SERIES_CUTOFF {
            self.series.singular(d).0 + self.regular_coefficient * self.series.regular(d).0
        } else if d > d1 {
            self.antipodal_value * self.series.regular(PI - d).0
        } else {
            self.table.eval(d).0 / d.sin()
        }
    }

    /// `(Gr, dGr/dd)` on the unit sphere.
    fn unit_jet(&self, d: f64) -> (f64, f64) {
        let d1 = PI - SERIES_CUTOFF;
        if d < SERIES_CUTOFF {
            let (s, ds) = self.series.singular(d);
            let (r, dr) = self.series.regular(d);
            (
                s + self.regular_coefficient * r,
                ds + self.regular_coefficient * dr,
            )
        } else if d > d1 {
            let (r, dr) = self.series.regular(PI - d);
            (self.antipodal_value * r, -self.antipodal_value * dr)
        } else {
            let (v, dv, _) = self.table.eval(d);
            let (sn, cs) = d.sin_cos();
            let g = v / sn;
            (g, (dv - g * cs) / sn)
        }
    }

    /// `(Gr(d), Gr'(d))`, with the same domain as [`GreensProfile::eval`].
    pub fn eval_jet(&self, d: f64) -> Result<(f64, f64)> {
        self.eval(d)?;
        let a = self.radius;
        let (g, dg) = self.unit_jet((d / a).min(PI));
        Ok((g / a, dg / (a * a)))
    }

    /// `Gr(d)` at geodesic distance `d ∈ (0, π·radius]` from the pole.
    pub fn eval(&self, d: f64) -> Result<f64> {
        if !(d > 0.0) {
            return Err(Error::Singularity(format!(
                "Green's function evaluated at distance {d}"
            )));
        }
        let a = self.radius;
        if d > PI * a * (1.0 + 1e-12) {
            return Err(Error::Domain(format!(
                "distance {d} exceeds the diameter {}",
                PI * a
            )));
        }
        Ok(self.unit_value((d / a).min(PI)) / a)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn pole(&self) -> Vec4 {
        self.pole
    }

    pub fn shooting(&self) -> ShootingReport {
        self.shooting
    }

    /// `lim_{d→0} d·Gr(d)` by quadratic Richardson extrapolation of table
    /// values just beyond the series region.
    pub fn normalization(&self) -> f64 {
        let h = 2.0 * SERIES_CUTOFF;
        let f = |d: f64| d * self.unit_value(d);
        (4.0 * f(h) - f(2.0 * h)) / 3.0
    }

    /// Sup-norm of `Gr'' + 2 cot(d) Gr' − λ Gr` on `[δ, π − δ]` (unit sphere),
    /// computed from the interpolant.
    pub fn l0_residual(&self, delta: f64) -> f64 {
        let lo = delta.max(SERIES_CUTOFF);
        let hi = (PI - delta).min(PI - SERIES_CUTOFF);
        linspace(lo, hi, 4001)
            .into_iter()
            .map(|d| {
                let (v, _, v2) = self.table.eval(d);
                ((v2 + (1.0 - self.lambda) * v) / d.sin()).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Solves `Gr'' + 2 cot(d) Gr' − (R₀/8) Gr = 0` with `d·Gr → 1` at the pole
/// and regularity at the antipode.
///
/// The pole is handled by the Frobenius series up to `d = 10⁻³`; the
/// coefficient of the regular mode there is the shooting parameter, tuned by
/// secant steps until the solution has no singular component at the
/// antipode.
pub fn greens_round(model: &ClosedModelMetric, pole: &Vec4) -> Result<GreensProfile> {
    if model.kind() != ModelKind::RoundSphere {
        return Err(Error::Precondition(
            "Green's functions are solved on the covering round sphere".into(),
        ));
    }
    if ((pole.norm()) - 1.0).abs() > 1e-9 {
        return Err(Error::Domain("pole must be a unit vector".into()));
    }
    let lambda = model.scalar_curvature() * model.radius().powi(2) / 8.0;
    let series = PoleSeries::new(lambda);
    let d0 = SERIES_CUTOFF;
    let d1 = PI - SERIES_CUTOFF;

    let initial = |b: f64| {
        let (s, ds) = series.singular(d0);
        let (r, dr) = series.regular(d0);
        to_v(d0, s + b * r, ds + b * dr)
    };
    // Coefficients (α, β) of Gr ≈ α·sing(π−d) + β·reg(π−d) near the antipode.
    let decompose = |b: f64| -> Result<(f64, f64)> {
        let y = ode::integrate(v_rhs(lambda), d0, initial(b), d1, GREEN_ODE)?;
        let sn = d1.sin();
        let gr = y[0] / sn;
        let dgr = (y[1] - d1.cos() * gr) / sn;
        let e = PI - d1;
        let (zs, dzs) = series.singular(e);
        let (zr, dzr) = series.regular(e);
        // d/dd = −d/de
        let det = zs * (-dzr) - zr * (-dzs);
        let alpha = (gr * (-dzr) - zr * dgr) / det;
        let beta = (zs * dgr - gr * (-dzs)) / det;
        Ok((alpha, beta))
    };

    let tol = 1e-11;
    let (mut b0, mut a0) = (0.0, decompose(0.0)?.0);
    let mut b = 0.1;
    let (mut alpha, mut beta) = decompose(b)?;
    let mut iterations = 2;
    while alpha.abs() > tol {
        if iterations >= MAX_SHOOTING_ITERATIONS {
            return Err(Error::Solver {
                stage: "Green's function shooting",
                message: format!("{iterations} secant steps without a regular antipode"),
                residual: alpha.abs(),
            });
        }
        let denom = alpha - a0;
        if denom == 0.0 {
            return Err(Error::Solver {
                stage: "Green's function shooting",
                message: "shooting map is flat".into(),
                residual: alpha.abs(),
            });
        }
        let next = b - alpha * (b - b0) / denom;
        (b0, a0) = (b, alpha);
        b = next;
        (alpha, beta) = decompose(b)?;
        iterations += 1;
    }

    let knots = linspace(d0, d1, TABLE_KNOTS);
    let mut vals = Vec::with_capacity(TABLE_KNOTS);
    let mut slopes = Vec::with_capacity(TABLE_KNOTS);
    let mut state = initial(b);
    for (i, &d) in knots.iter().enumerate() {
        if i > 0 {
            state = ode::integrate(v_rhs(lambda), knots[i - 1], state, d, GREEN_ODE)?;
        }
        vals.push(state[0]);
        slopes.push(state[1]);
    }
    let curv = vals.iter().map(|v| -(1.0 - lambda) * v).collect();
    let table = QuinticHermite::new(knots, vals, slopes, curv)?;

    let shooting = ShootingReport {
        iterations,
        regular_coefficient: b,
        antipodal_singular_coefficient: alpha,
        antipodal_value: beta / model.radius(),
    };
    Ok(GreensProfile {
        radius: model.radius(),
        lambda,
        series,
        regular_coefficient: b,
        antipodal_value: beta,
        table,
        shooting,
        pole: *pole,
    })
}

/// `Gr(x) = Σ_{q ∈ G·p} Gr_q(dist(q, x))`, the `G`-invariant Green's
/// function at the orbit `G·p`.
#[derive(Debug, Clone)]
pub struct AveragedGreen {
    profile: Arc<GreensProfile>,
    orbit: OrbitData,
}

impl AveragedGreen {
    pub fn orbit(&self) -> &OrbitData {
        &self.orbit
    }

    pub fn profile(&self) -> &GreensProfile {
        &self.profile
    }

    /// Value at a unit vector `x` (a point of `S³(radius)` by scaling).
    pub fn eval(&self, x: &Vec4) -> Result<f64> {
        let a = self.profile.radius();
        self.orbit
            .orbit_points
            .iter()
            .map(|q| {
                let d = a * sphere_distance(q, x);
                if d < 1e-12 * a {
                    Err(Error::Singularity("evaluation at an orbit point".into()))
                } else {
                    self.profile.eval(d)
                }
            })
            .sum()
    }
}

pub fn averaged_green(
    action: &FiniteGroupAction,
    profile: Arc<GreensProfile>,
    p: &Vec4,
) -> Result<AveragedGreen> {
    if (profile.pole() - p).amax() > 1e-9 {
        return Err(Error::Consistency(
            "profile pole differs from the orbit base point".into(),
        ));
    }
    Ok(AveragedGreen {
        profile,
        orbit: orbit(action, p)?,
    })
}

/// Fitted asymptotics of an end.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum DecayReport {
    /// `φ` is constant at large radius; there is nothing to fit.
    Exact { phi_inf: f64 },
    Fitted {
        phi_inf: f64,
        exponent: f64,
        residual: f64,
        passes: bool,
    },
}

impl DecayReport {
    pub fn passes(&self) -> bool {
        match self {
            DecayReport::Exact { .. } => true,
            DecayReport::Fitted { passes, .. } => *passes,
        }
    }

    pub fn exponent(&self) -> Option<f64> {
        match self {
            DecayReport::Exact { .. } => None,
            DecayReport::Fitted { exponent, .. } => Some(*exponent),
        }
    }
}

/// Outer radius of the decay fit window `[R/4, R]`.
pub const DECAY_FIT_RADIUS: f64 = 1e3;

/// Least-squares slope of `log|φ⁴ − φ_∞⁴|` against `log r` on `[R/4, R]`.
pub fn verify_af_decay(end: &RadialMetric) -> Result<DecayReport> {
    let factor = end.factor();
    let phi_inf = factor.asymptotic_value();
    if !(phi_inf > 0.0) || !phi_inf.is_finite() {
        return Err(Error::DecayFit(format!(
            "asymptotic value φ_∞ = {phi_inf} is not positive"
        )));
    }
    let target = phi_inf.powi(4);
    let rmax = DECAY_FIT_RADIUS;
    let pts: Vec<(f64, f64)> = linspace((rmax / 4.0).ln(), rmax.ln(), 33)
        .into_iter()
        .filter_map(|lr| {
            let diff = (factor.value(lr.exp()).powi(4) - target).abs();
            (diff > 1e-13 * target).then(|| (lr, diff.ln()))
        })
        .collect();
    if pts.len() < 2 {
        return Ok(DecayReport::Exact { phi_inf });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let exponent = sxy / sxx;
    let residual = (pts
        .iter()
        .map(|p| (p.1 - my - exponent * (p.0 - mx)).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    if !exponent.is_finite() {
        return Err(Error::DecayFit("non-finite slope".into()));
    }
    Ok(DecayReport::Fitted {
        phi_inf,
        exponent,
        residual,
        passes: exponent <= -1.0 + 0.1,
    })
}

/// Horizon of a radial end: first zero of `φ − 2sφ_s` (the critical sphere
/// of the areal radius `r φ²`) searched outward from infinity.
pub fn detect_horizon(factor: &ConformalFactor, s_max: f64) -> Result<f64> {
    let f = |s: f64| {
        let (p, ps, _) = factor.inverted_jet(s);
        p - 2.0 * s * ps
    };
    let grid = linspace(0.0, s_max, 2001);
    for w in grid.windows(2) {
        if f(w[0]) > 0.0 && f(w[1]) <= 0.0 {
            let s = bisect(f, w[0], w[1], 1e-14).expect("bracketed");
            return Ok(1.0 / s);
        }
    }
    Err(Error::HorizonNotFound(format!(
        "areal radius has no critical sphere for r ≥ {}",
        1.0 / s_max
    )))
}

/// One asymptotically flat end of the blow-up.
#[derive(Debug, Clone)]
pub struct BlowupEnd {
    pub orbit_index: usize,
    /// The end restricted to the exterior of its horizon, or to the chart
    /// when no horizon was found.
    pub metric: RadialMetric,
    pub horizon_radius: Option<f64>,
    pub horizon_error: Option<Error>,
    /// `m` from `φ ≈ φ_∞(1 + m/2r)`.
    pub mass: f64,
    /// Largest `|R|` over the chart samples outside the horizon.
    pub scalar_curvature_residual: f64,
    /// Smallest chart radius covered by the tabulation.
    pub chart_min_radius: f64,
    /// `Σ_{q ≠ p_i} Gr(dist(p_i, q))`, the mass aspect read off the
    /// other poles.
    pub pole_sum: f64,
}

/// The blow-up `(S³ \ G·p, Gr⁴ g)`.
#[derive(Debug, Clone)]
pub struct BlowupModel {
    pub source: ClosedModelMetric,
    pub action: FiniteGroupAction,
    pub green: AveragedGreen,
    pub ends: Vec<BlowupEnd>,
    /// For each generator, the induced permutation of ends.
    pub end_permutation: Vec<Vec<usize>>,
}

impl BlowupModel {
    /// True when the generators permute the ends transitively.
    pub fn ends_transitive(&self) -> bool {
        let n = self.ends.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for perm in &self.end_permutation {
                let j = perm[i];
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|b| b)
    }
}

const END_SAMPLES: usize = 801;
const MEAN_NODES: usize = 96;

/// Spherical mean of `d ↦ g(d)` (a radial function about `q`) over the
/// geodesic sphere of radius `θ` about a point at distance `δ` from `q`.
fn spherical_mean<F: Fn(f64) -> Result<f64>>(
    gl: &GaussLegendre,
    g: &F,
    theta: f64,
    delta: f64,
) -> Result<f64> {
    let (ct, st) = (theta.cos(), theta.sin());
    let (cd, sd) = (delta.cos(), delta.sin());
    let mut acc = 0.0;
    for (x, w) in gl.nodes.iter().zip(&gl.weights) {
        let c = (ct * cd + st * sd * x).clamp(-1.0, 1.0);
        acc += w * g(c.acos())?;
    }
    Ok(0.5 * acc)
}

/// Builds one radial end per orbit point.
///
/// The chart about `p_i` covers `θ ≤ 0.75·δ_min`, where `δ_min` is the
/// distance to the nearest other orbit point (or `θ ≤ 0.75π` for a single
/// point). A missing horizon is recorded on the end, not raised.
pub fn build_blowup(
    model: &ClosedModelMetric,
    action: &FiniteGroupAction,
    p: &Vec4,
) -> Result<BlowupModel> {
    let profile = Arc::new(greens_round(&ClosedModelMetric::round_sphere(1.0)?, p)?);
    let scaled_profile = Arc::new(greens_round(model, p)?);
    let green = averaged_green(action, scaled_profile, p)?;
    let orbit = green.orbit().clone();
    let a = model.radius();
    let gl = GaussLegendre::new(MEAN_NODES);
    let unit = |d: f64| profile.eval(d);

    let mut ends = Vec::with_capacity(orbit.cardinality());
    for (i, pi) in orbit.orbit_points.iter().enumerate() {
        let others: Vec<f64> = orbit
            .orbit_points
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, q)| sphere_distance(pi, q))
            .collect();
        let delta_min = others.iter().copied().fold(PI, f64::min);
        let theta_max = 0.75 * delta_min;
        let s_max = 2.0 * (theta_max / 2.0).tan();
        let pole_sum = others.iter().map(|&d| unit(d)).sum::<Result<f64>>()?;

        let s_grid = linspace(0.0, s_max, END_SAMPLES);
        let mut phi = Vec::with_capacity(END_SAMPLES);
        for &s in &s_grid {
            if s == 0.0 {
                phi.push(1.0);
                continue;
            }
            let theta = 2.0 * (s / 2.0).atan();
            let mut mean = unit(theta)?;
            for &delta in &others {
                mean += spherical_mean(&gl, &unit, theta, delta)?;
            }
            phi.push(2.0 * (theta / 2.0).sin() * mean);
        }
        // Radius a rescales the chart: r' = r/a, so s' = a·s.
        let s_scaled: Vec<f64> = s_grid.iter().map(|s| a * s).collect();
        let s_top = a * s_max;
        let factor = ConformalFactor::Tabulated(InvertedTable::new(s_scaled, phi)?);
        let chart_min_radius = 1.0 / s_top;
        let (horizon_radius, horizon_error) = match detect_horizon(&factor, s_top) {
            Ok(r) => (Some(r), None),
            Err(e) => (None, Some(e)),
        };
        let r_min = horizon_radius.unwrap_or(chart_min_radius);
        let metric = RadialMetric::new(factor, r_min)?;
        let (p0, ps0, _) = metric.factor().inverted_jet(0.0);
        let mut residual = 0.0f64;
        for s in linspace(0.0, 1.0 / r_min, 400).into_iter().skip(1) {
            residual = residual.max(scalar_curvature_radial(&metric, 1.0 / s)?.abs());
        }
        ends.push(BlowupEnd {
            orbit_index: i,
            metric,
            horizon_radius,
            horizon_error,
            mass: 2.0 * ps0 / p0,
            scalar_curvature_residual: residual,
            chart_min_radius,
            pole_sum: pole_sum / a,
        });
    }
    let end_permutation = action
        .generators()
        .iter()
        .map(|g| orbit.permutation(g))
        .collect::<Result<Vec<_>>>()?;
    Ok(BlowupModel {
        source: *model,
        action: action.clone(),
        green,
        ends,
        end_permutation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::random_sphere_points;

    fn e1() -> Vec4 {
        Vec4::new(1.0, 0.0, 0.0, 0.0)
    }

    fn unit_green() -> GreensProfile {
        greens_round(&ClosedModelMetric::round_sphere(1.0).unwrap(), &e1()).unwrap()
    }

    fn closed_form(d: f64) -> f64 {
        0.5 / (d / 2.0).sin()
    }

    #[test]
    fn frobenius_coefficients_match_closed_form_expansion() {
        // 1/(2 sin(d/2)) = 1/d + d/24 + 7d³/5760 + …,  1/cos(d/2) = 1 + d²/8 + 5d⁴/384 + …
        let s = PoleSeries::new(0.75);
        assert!((s.a1 - 1.0 / 24.0).abs() < 1e-16);
        assert!((s.a3 - 7.0 / 5760.0).abs() < 1e-16);
        assert!((s.b2 - 1.0 / 8.0).abs() < 1e-16);
        assert!((s.b4 - 5.0 / 384.0).abs() < 1e-16);
    }

    #[test]
    fn unit_sphere_green_matches_closed_form() {
        let g = unit_green();
        assert!((g.eval(PI / 2.0).unwrap() - 0.5f64.sqrt()).abs() < 1e-10);
        assert!((g.eval(PI).unwrap() - 0.5).abs() < 1e-10);
        let sup = linspace(1e-4, PI, 3001)
            .into_iter()
            .map(|d| (g.eval(d).unwrap() - closed_form(d)).abs())
            .fold(0.0, f64::max);
        assert!(sup < 1e-9, "sup error {sup}");
        assert!((g.normalization() - 1.0).abs() < 1e-6);
        assert!(g.l0_residual(1e-3) < 1e-6);
        assert!(g.shooting().regular_coefficient.abs() < 1e-9);
    }

    #[test]
    fn green_derivative_matches_closed_form() {
        let g = unit_green();
        // d/dd [1/(2 sin(d/2))] = −cos(d/2) / (4 sin²(d/2))
        for d in [5e-4, 0.2, 1.3, 2.9, PI - 5e-4] {
            let exact = -(d / 2.0).cos() / (4.0 * (d / 2.0).sin().powi(2));
            let (_, dg) = g.eval_jet(d).unwrap();
            assert!((dg - exact).abs() < 1e-8 * exact.abs().max(1.0), "d = {d}");
        }
    }

    #[test]
    fn green_errors() {
        let g = unit_green();
        assert!(matches!(g.eval(0.0), Err(Error::Singularity(_))));
        assert!(matches!(g.eval(4.0), Err(Error::Domain(_))));
        let rp3 = ClosedModelMetric::new(ModelKind::ProjectiveSpace, 1.0).unwrap();
        assert!(matches!(
            greens_round(&rp3, &e1()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn green_scales_with_radius() {
        let g2 = greens_round(&ClosedModelMetric::round_sphere(2.0).unwrap(), &e1()).unwrap();
        for d in [0.3, 1.7, 5.0] {
            assert!((g2.eval(d).unwrap() - closed_form(d / 2.0) / 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn antipodal_average_is_two_pole_sum() {
        let g = Arc::new(unit_green());
        let avg = averaged_green(&FiniteGroupAction::antipodal(), g, &e1()).unwrap();
        for d in [0.01f64, 0.8, 2.0, 3.1] {
            let x = Vec4::new(d.cos(), d.sin(), 0.0, 0.0);
            let exact = 0.5 / (d / 2.0).sin() + 0.5 / (d / 2.0).cos();
            assert!((avg.eval(&x).unwrap() - exact).abs() < 1e-9);
        }
        assert!(matches!(avg.eval(&-e1()), Err(Error::Singularity(_))));
    }

    #[test]
    fn lens_average_is_invariant() {
        let g = Arc::new(unit_green());
        let lens = FiniteGroupAction::lens(3, 1).unwrap();
        let avg = averaged_green(&lens, g, &e1()).unwrap();
        for x in random_sphere_points(11, 100) {
            let v = avg.eval(&x).unwrap();
            for h in lens.elements() {
                assert!((avg.eval(&(h * x)).unwrap() - v).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn trivial_blowup_is_flat() {
        let m = build_blowup(
            &ClosedModelMetric::round_sphere(1.0).unwrap(),
            &FiniteGroupAction::trivial(),
            &e1(),
        )
        .unwrap();
        assert_eq!(m.ends.len(), 1);
        let end = &m.ends[0];
        assert!(end.horizon_radius.is_none());
        assert!(matches!(end.horizon_error, Some(Error::HorizonNotFound(_))));
        assert!(end.mass.abs() < 1e-9);
        assert!(end.scalar_curvature_residual < 1e-6);
        assert!(matches!(
            verify_af_decay(&end.metric).unwrap(),
            DecayReport::Exact { .. }
        ));
    }

    #[test]
    fn antipodal_blowup_is_schwarzschild() {
        let m = build_blowup(
            &ClosedModelMetric::round_sphere(1.0).unwrap(),
            &FiniteGroupAction::antipodal(),
            &e1(),
        )
        .unwrap();
        assert_eq!(m.ends.len(), 2);
        assert!(m.ends_transitive());
        let exact = ConformalFactor::schwarzschild(1.0);
        for end in &m.ends {
            assert!((end.mass - 1.0).abs() < 1e-8);
            assert!((end.horizon_radius.unwrap() - 0.5).abs() < 1e-8);
            assert!(end.scalar_curvature_residual < 1e-6);
            for r in [0.5, 0.9, 3.0, 50.0] {
                assert!((end.metric.factor().value(r) - exact.value(r)).abs() < 1e-8);
            }
            let e = verify_af_decay(&end.metric).unwrap().exponent().unwrap();
            assert!((e + 1.0).abs() < 0.1);
        }
        for r in [0.6, 1.0, 10.0] {
            let a = m.ends[0].metric.factor().value(r);
            let b = m.ends[m.end_permutation[0][0]].metric.factor().value(r);
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn lens_blowup_ends() {
        for p in [3u32, 5] {
            let m = build_blowup(
                &ClosedModelMetric::round_sphere(1.0).unwrap(),
                &FiniteGroupAction::lens(p, 1).unwrap(),
                &e1(),
            )
            .unwrap();
            assert_eq!(m.ends.len(), p as usize);
            assert!(m.ends_transitive());
            for end in &m.ends {
                // Mean-value property: φ = 1 + S·s exactly, S = Σ Gr(δ_k).
                assert!((end.mass - 2.0 * end.pole_sum).abs() < 1e-8);
                assert!((end.horizon_radius.unwrap() - end.pole_sum).abs() < 1e-8);
                assert!(end.scalar_curvature_residual < 1e-6);
                assert!(verify_af_decay(&end.metric).unwrap().passes());
            }
        }
    }

    #[test]
    fn decay_fits() {
        let schw = RadialMetric::new(
            ConformalFactor::Terms(vec![
                crate::geom::RadialTerm::Constant { value: 1.0 },
                crate::geom::RadialTerm::InverseR { weight: 1.0 },
            ]),
            1.0,
        )
        .unwrap();
        let e = verify_af_decay(&schw).unwrap().exponent().unwrap();
        assert!((e + 1.0).abs() < 0.05);
        let flat = RadialMetric::new(ConformalFactor::Flat { scale: 1.0 }, 1.0).unwrap();
        assert!(matches!(
            verify_af_decay(&flat).unwrap(),
            DecayReport::Exact { .. }
        ));
        let bad =
            RadialMetric::new(ConformalFactor::RoundStereographic { radius: 1.0 }, 1.0).unwrap();
        assert!(matches!(verify_af_decay(&bad), Err(Error::DecayFit(_))));
    }
}
