//! Metric representations and the conformal variational functionals.
//!
//! Two kinds of carrier are supported:
//!
//! * [`ClosedModelMetric`]: a round space form `S³`, `ℝP³` or a lens space,
//!   described by its covering radius. Functions on it are given as radial
//!   profiles of the geodesic distance from a pole on the covering sphere.
//! * [`RadialMetric`]: a conformally flat end `g = φ(r)⁴ δ` on `{ r ≥ r_min }`.
//!
//! For `g = φ⁴δ` in three dimensions the scalar curvature is
//! `R = -8 φ⁻⁵ Δ_δ φ`, and for radial `φ` the flat Laplacian is
//! `φ'' + 2φ'/r`. In the inverted coordinate `s = 1/r` the same operator
//! reads `s⁴ φ_ss`, which is how tabulated ends are stored and
//! differentiated.

use crate::error::{Error, Result};
use crate::numerics::interp::CubicSpline;
use crate::numerics::quad::{self, QuadOptions};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

/// Space form underlying a [`ClosedModelMetric`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    RoundSphere,
    ProjectiveSpace,
    Lens(u32),
}

impl ModelKind {
    /// Order of the deck group of the covering `S³ → M`.
    pub fn deck_order(self) -> u32 {
        match self {
            ModelKind::RoundSphere => 1,
            ModelKind::ProjectiveSpace => 2,
            ModelKind::Lens(p) => p,
        }
    }
}

/// Constant-curvature closed model with covering radius `radius`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedModelMetric {
    kind: ModelKind,
    radius: f64,
}

impl ClosedModelMetric {
    pub fn new(kind: ModelKind, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Domain(format!(
                "radius must be positive, got {radius}"
            )));
        }
        if let ModelKind::Lens(0) = kind {
            return Err(Error::Domain("lens space order must be at least 1".into()));
        }
        Ok(Self { kind, radius })
    }

    pub fn round_sphere(radius: f64) -> Result<Self> {
        Self::new(ModelKind::RoundSphere, radius)
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `R₀ = 6 / radius²`.
    pub fn scalar_curvature(&self) -> f64 {
        6.0 / (self.radius * self.radius)
    }

    pub fn volume(&self) -> f64 {
        2.0 * PI * PI * self.radius.powi(3) / self.kind.deck_order() as f64
    }

    /// The metric `c² g`, i.e. the same model with radius multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.kind, self.radius * c)
    }
}

/// One summand of a [`ConformalFactor::Terms`] profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RadialTerm {
    /// `c`
    Constant { value: f64 },
    /// `b / r`
    InverseR { weight: f64 },
    /// `c / sqrt(r² + a²)`, superharmonic for `c > 0`.
    Plummer { weight: f64, core: f64 },
    /// `c · exp(-r / λ)`
    Exponential { weight: f64, length: f64 },
}

impl RadialTerm {
    fn jet(&self, r: f64) -> (f64, f64, f64) {
        match *self {
            RadialTerm::Constant { value } => (value, 0.0, 0.0),
            RadialTerm::InverseR { weight } => {
                (weight / r, -weight / (r * r), 2.0 * weight / (r * r * r))
            }
            RadialTerm::Plummer { weight, core } => {
                let q = r * r + core * core;
                let sq = q.sqrt();
                (
                    weight / sq,
                    -weight * r / (q * sq),
                    weight * (3.0 * r * r / (q * q * sq) - 1.0 / (q * sq)),
                )
            }
            RadialTerm::Exponential { weight, length } => {
                let e = weight * (-r / length).exp();
                (e, -e / length, e / (length * length))
            }
        }
    }

    fn inverted_jet(&self, s: f64) -> (f64, f64, f64) {
        match *self {
            RadialTerm::Constant { value } => (value, 0.0, 0.0),
            RadialTerm::InverseR { weight } => (weight * s, weight, 0.0),
            RadialTerm::Plummer { weight, core } => {
                let q = 1.0 + core * core * s * s;
                let sq = q.sqrt();
                (
                    weight * s / sq,
                    weight / (q * sq),
                    -3.0 * weight * core * core * s / (q * q * sq),
                )
            }
            RadialTerm::Exponential { weight, length } => {
                if s <= 0.0 {
                    return (0.0, 0.0, 0.0);
                }
                let e = weight * (-1.0 / (length * s)).exp();
                let ls2 = length * s * s;
                (
                    e,
                    e / ls2,
                    e * (1.0 / (ls2 * ls2) - 2.0 / (length * s * s * s)),
                )
            }
        }
    }

    fn is_flat_harmonic(&self) -> bool {
        matches!(
            self,
            RadialTerm::Constant { .. } | RadialTerm::InverseR { .. }
        )
    }
}

/// Tabulated conformal factor sampled in the inverted coordinate `s = 1/r`.
///
/// The first knot must be `s = 0`, carrying the asymptotic value `φ_∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct InvertedTable {
    spline: CubicSpline,
}

impl InvertedTable {
    pub fn new(s: Vec<f64>, phi: Vec<f64>) -> Result<Self> {
        if s.first().copied() != Some(0.0) {
            return Err(Error::DegenerateInput(
                "inverted table must start at s = 0 (spatial infinity)".into(),
            ));
        }
        if phi.iter().any(|&p| !(p > 0.0)) {
            return Err(Error::Domain(
                "tabulated conformal factor must be positive".into(),
            ));
        }
        Ok(Self {
            spline: CubicSpline::natural(s, phi)?,
        })
    }

    /// Builds the table from samples `(r, φ(r))` and the limit `φ_∞`.
    pub fn from_radial_samples(samples: &[(f64, f64)], phi_inf: f64) -> Result<Self> {
        let mut pts: Vec<(f64, f64)> = samples.iter().map(|&(r, p)| (1.0 / r, p)).collect();
        pts.push((0.0, phi_inf));
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (s, phi) = pts.into_iter().unzip();
        Self::new(s, phi)
    }

    pub fn s_max(&self) -> f64 {
        *self.spline.knots().last().expect("non-empty")
    }

    pub fn knots(&self) -> &[f64] {
        self.spline.knots()
    }

    pub fn values(&self) -> &[f64] {
        self.spline.values()
    }

    fn eval(&self, s: f64) -> (f64, f64, f64) {
        self.spline.eval(s)
    }
}

/// Radial conformal factor `φ` of a conformally flat metric `φ⁴ δ`.
#[derive(Debug, Clone, PartialEq)]
pub enum ConformalFactor {
    /// `φ ≡ scale`
    Flat {
        scale: f64,
    },
    /// `φ = scale · (1 + m / 2r)`, the spatial Schwarzschild factor.
    Schwarzschild {
        mass: f64,
        scale: f64,
    },
    /// `φ = sqrt(2a / (1 + r²))`: the round sphere of radius `a` in
    /// stereographic coordinates.
    RoundStereographic {
        radius: f64,
    },
    /// A finite sum of elementary radial terms.
    Terms(Vec<RadialTerm>),
    Tabulated(InvertedTable),
}

impl ConformalFactor {
    pub fn schwarzschild(mass: f64) -> Self {
        ConformalFactor::Schwarzschild { mass, scale: 1.0 }
    }

    /// `(φ, φ', φ'')` with derivatives in `r`.
    pub fn jet(&self, r: f64) -> (f64, f64, f64) {
        match self {
            ConformalFactor::Flat { scale } => (*scale, 0.0, 0.0),
            ConformalFactor::Schwarzschild { mass, scale } => (
                scale * (1.0 + mass / (2.0 * r)),
                -scale * mass / (2.0 * r * r),
                scale * mass / (r * r * r),
            ),
            ConformalFactor::RoundStereographic { radius } => {
                let c = (2.0 * radius).sqrt();
                let q = 1.0 + r * r;
                let sq = q.sqrt();
                (
                    c / sq,
                    -c * r / (q * sq),
                    c * (3.0 * r * r / (q * q * sq) - 1.0 / (q * sq)),
                )
            }
            ConformalFactor::Terms(terms) => terms.iter().fold((0.0, 0.0, 0.0), |acc, t| {
                let j = t.jet(r);
                (acc.0 + j.0, acc.1 + j.1, acc.2 + j.2)
            }),
            ConformalFactor::Tabulated(table) => {
                let s = 1.0 / r;
                let (p, ps, pss) = table.eval(s);
                (p, -s * s * ps, 2.0 * s * s * s * ps + s * s * s * s * pss)
            }
        }
    }

    /// `(φ, φ_s, φ_ss)` in the inverted coordinate `s = 1/r`; `s = 0` is
    /// spatial infinity.
    pub fn inverted_jet(&self, s: f64) -> (f64, f64, f64) {
        match self {
            ConformalFactor::Flat { scale } => (*scale, 0.0, 0.0),
            ConformalFactor::Schwarzschild { mass, scale } => {
                (scale * (1.0 + 0.5 * mass * s), 0.5 * scale * mass, 0.0)
            }
            ConformalFactor::RoundStereographic { radius } => {
                let c = (2.0 * radius).sqrt();
                let q = 1.0 + s * s;
                let sq = q.sqrt();
                (c * s / sq, c / (q * sq), -3.0 * c * s / (q * q * sq))
            }
            ConformalFactor::Terms(terms) => terms.iter().fold((0.0, 0.0, 0.0), |acc, t| {
                let j = t.inverted_jet(s);
                (acc.0 + j.0, acc.1 + j.1, acc.2 + j.2)
            }),
            ConformalFactor::Tabulated(table) => table.eval(s),
        }
    }

    pub fn value(&self, r: f64) -> f64 {
        self.jet(r).0
    }

    /// `Δ_δ φ` for the radial profile.
    pub fn flat_laplacian(&self, r: f64) -> f64 {
        match self {
            ConformalFactor::Tabulated(table) => {
                let s = 1.0 / r;
                s.powi(4) * table.eval(s).2
            }
            _ => {
                let (_, d1, d2) = self.jet(r);
                d2 + 2.0 * d1 / r
            }
        }
    }

    /// `lim_{r→∞} φ(r)`.
    pub fn asymptotic_value(&self) -> f64 {
        self.inverted_jet(0.0).0
    }

    /// True when `φ = a + b/r` in closed form, so that `Δ_δ φ = 0` exactly.
    pub fn is_flat_harmonic(&self) -> bool {
        match self {
            ConformalFactor::Flat { .. } | ConformalFactor::Schwarzschild { .. } => true,
            ConformalFactor::Terms(terms) => terms.iter().all(RadialTerm::is_flat_harmonic),
            _ => false,
        }
    }

    /// Smallest radius at which the factor is defined (tabulated data only
    /// covers `s ≤ s_max`).
    pub fn min_defined_radius(&self) -> f64 {
        match self {
            ConformalFactor::Tabulated(t) => 1.0 / t.s_max(),
            _ => 0.0,
        }
    }
}

/// Conformally flat radial metric `φ(r)⁴ δ` on `{ r ≥ r_min }`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialMetric {
    factor: ConformalFactor,
    r_min: f64,
}

impl RadialMetric {
    pub fn new(factor: ConformalFactor, r_min: f64) -> Result<Self> {
        if !(r_min >= 0.0) || !r_min.is_finite() {
            return Err(Error::Domain(format!(
                "r_min must be non-negative, got {r_min}"
            )));
        }
        let floor = factor.min_defined_radius();
        if r_min < floor * (1.0 - 1e-12) {
            return Err(Error::Range {
                value: r_min,
                min: floor,
            });
        }
        if r_min > 0.0 && !(factor.value(r_min) > 0.0) {
            return Err(Error::Domain(format!(
                "conformal factor is not positive at r_min = {r_min}"
            )));
        }
        Ok(Self { factor, r_min })
    }

    pub fn factor(&self) -> &ConformalFactor {
        &self.factor
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    /// Same factor restricted to `{ r ≥ r_min }`.
    pub fn with_r_min(&self, r_min: f64) -> Result<Self> {
        Self::new(self.factor.clone(), r_min)
    }

    fn check_radius(&self, r: f64) -> Result<()> {
        if r < self.r_min * (1.0 - 1e-12) || r.is_nan() {
            return Err(Error::Range {
                value: r,
                min: self.r_min,
            });
        }
        Ok(())
    }

    /// Area of the coordinate sphere `{|x| = r}`: `4π r² φ⁴`.
    pub fn sphere_area(&self, r: f64) -> f64 {
        4.0 * PI * r * r * self.factor.value(r).powi(4)
    }

    /// Sign-carrying mean-curvature indicator of the coordinate sphere
    /// `{|x| = r}`: `φ + 2 r φ'`, positive when area increases outward.
    pub fn areal_growth(&self, r: f64) -> f64 {
        let (p, d1, _) = self.factor.jet(r);
        p + 2.0 * r * d1
    }

    /// Mean curvature of the coordinate sphere `{|x| = r}`.
    pub fn sphere_mean_curvature(&self, r: f64) -> f64 {
        let p = self.factor.value(r);
        2.0 * self.areal_growth(r) / (r * p.powi(3))
    }
}

/// Scalar curvature of `φ⁴ δ` at radius `r`: `-8 φ⁻⁵ (φ'' + 2φ'/r)`.
pub fn scalar_curvature_radial(metric: &RadialMetric, r: f64) -> Result<f64> {
    metric.check_radius(r)?;
    if r <= 0.0 {
        return Err(Error::Domain("curvature is evaluated at r > 0 only".into()));
    }
    let phi = metric.factor.value(r);
    if !(phi > 0.0) {
        return Err(Error::Domain(format!(
            "conformal factor {phi} is not positive at r = {r}"
        )));
    }
    Ok(-8.0 * metric.factor.flat_laplacian(r) / phi.powi(5))
}

/// Normalized total scalar curvature `E(g) = R₀ · Vol^{2/3}` of a closed
/// constant-curvature model.
pub fn einstein_hilbert_energy(metric: &ClosedModelMetric) -> f64 {
    metric.scalar_curvature() * metric.volume() * metric.volume().powf(-1.0 / 3.0)
}

type Profile = dyn Fn(f64) -> (f64, f64) + Send + Sync;

/// Radial test function `u` with its derivative.
///
/// On a [`ClosedModelMetric`] the argument is the geodesic distance from a
/// pole on the covering sphere; on a [`RadialMetric`] it is the chart
/// radius `r`.
#[derive(Clone)]
pub struct ConformalTestFunction {
    profile: Arc<Profile>,
    support_radius: Option<f64>,
    breakpoints: Vec<f64>,
}

impl fmt::Debug for ConformalTestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConformalTestFunction")
            .field("support_radius", &self.support_radius)
            .field("breakpoints", &self.breakpoints)
            .finish_non_exhaustive()
    }
}

impl ConformalTestFunction {
    /// `profile(x)` returns `(u(x), u'(x))`.
    pub fn new<F>(profile: F) -> Self
    where
        F: Fn(f64) -> (f64, f64) + Send + Sync + 'static,
    {
        Self {
            profile: Arc::new(profile),
            support_radius: None,
            breakpoints: Vec::new(),
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(move |_| (c, 0.0))
    }

    /// `u` vanishes identically beyond `radius`.
    pub fn with_support(mut self, radius: f64) -> Self {
        self.support_radius = Some(radius);
        self
    }

    /// Points where `u'` may jump; quadrature splits there.
    pub fn with_breakpoints(mut self, points: Vec<f64>) -> Self {
        self.breakpoints = points;
        self
    }

    /// `c · u`.
    pub fn scaled(&self, c: f64) -> Self {
        let inner = Arc::clone(&self.profile);
        Self {
            profile: Arc::new(move |x| {
                let (v, d) = inner(x);
                (c * v, c * d)
            }),
            support_radius: self.support_radius,
            breakpoints: self.breakpoints.clone(),
        }
    }

    pub fn support_radius(&self) -> Option<f64> {
        self.support_radius
    }

    pub fn eval(&self, x: f64) -> (f64, f64) {
        match self.support_radius {
            Some(rs) if x > rs => (0.0, 0.0),
            _ => (self.profile)(x),
        }
    }
}

/// Carrier of a Yamabe quotient evaluation.
#[derive(Debug, Clone, Copy)]
pub enum Carrier<'a> {
    Closed(&'a ClosedModelMetric),
    Radial(&'a RadialMetric),
}

/// The three integrals entering the Yamabe quotient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuotientTerms {
    /// `∫ 8 |∇u|² dV`
    pub dirichlet: f64,
    /// `∫ R u² dV`
    pub curvature: f64,
    /// `∫ u⁶ dV`
    pub l6: f64,
}

impl QuotientTerms {
    pub fn quotient(&self) -> Result<f64> {
        if !(self.l6 > 0.0) || !self.l6.is_finite() {
            return Err(Error::DegenerateInput(format!(
                "L⁶ norm of the test function is {}",
                self.l6
            )));
        }
        Ok((self.dirichlet + self.curvature) / self.l6.cbrt())
    }
}

const QUOTIENT_QUAD: QuadOptions = QuadOptions {
    rel_tol: 1e-10,
    abs_tol: 1e-300,
    max_panels: 20_000,
};

fn sorted_breaks(lo: f64, hi: f64, extra: &[f64]) -> Vec<f64> {
    let mut pts = vec![lo];
    pts.extend(extra.iter().copied().filter(|&b| b > lo && b < hi));
    pts.push(hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Integrals `(∫8|∇u|², ∫Ru², ∫u⁶)` of the test function on its carrier.
pub fn yamabe_terms(carrier: Carrier<'_>, u: &ConformalTestFunction) -> Result<QuotientTerms> {
    match carrier {
        Carrier::Closed(model) => closed_terms(model, u),
        Carrier::Radial(metric) => radial_terms(metric, u),
    }
}

/// `Q(u) = (∫ 8|∇u|² + R u²) / (∫ u⁶)^{1/3}`.
pub fn yamabe_quotient(carrier: Carrier<'_>, u: &ConformalTestFunction) -> Result<f64> {
    yamabe_terms(carrier, u)?.quotient()
}

fn closed_terms(model: &ClosedModelMetric, u: &ConformalTestFunction) -> Result<QuotientTerms> {
    let a = model.radius();
    let r0 = model.scalar_curvature();
    let deg = model.kind().deck_order() as f64;
    let hi = u.support_radius().map_or(PI * a, |rs| rs.min(PI * a));
    let area = |d: f64| 4.0 * PI * a * a * (d / a).sin().powi(2);
    let breaks = sorted_breaks(0.0, hi, &u.breakpoints);
    let dir = quad::integrate_pieces(
        |d| {
            let (_, du) = u.eval(d);
            8.0 * du * du * area(d)
        },
        &breaks,
        QUOTIENT_QUAD,
    )?;
    let curv = quad::integrate_pieces(
        |d| {
            let (v, _) = u.eval(d);
            r0 * v * v * area(d)
        },
        &breaks,
        QUOTIENT_QUAD,
    )?;
    let l6 = quad::integrate_pieces(|d| u.eval(d).0.powi(6) * area(d), &breaks, QUOTIENT_QUAD)?;
    Ok(QuotientTerms {
        dirichlet: dir.value / deg,
        curvature: curv.value / deg,
        l6: l6.value / deg,
    })
}

/// `∫_{lo}^{hi} F(r) dr` with `hi` possibly infinite; the unbounded part is
/// mapped to `s = 1/r`.
fn radial_integral<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, extra: &[f64]) -> Result<f64> {
    if hi.is_finite() {
        return Ok(quad::integrate_pieces(&f, &sorted_breaks(lo, hi, extra), QUOTIENT_QUAD)?.value);
    }
    let split = extra
        .iter()
        .copied()
        .filter(|&b| b > lo)
        .fold(lo.max(1.0), f64::max);
    let near = if split > lo {
        quad::integrate_pieces(&f, &sorted_breaks(lo, split, extra), QUOTIENT_QUAD)?.value
    } else {
        0.0
    };
    let far = quad::integrate(
        |s: f64| {
            if s <= 0.0 {
                return 0.0;
            }
            f(1.0 / s) / (s * s)
        },
        0.0,
        1.0 / split,
        QUOTIENT_QUAD,
    )?
    .value;
    Ok(near + far)
}

fn radial_terms(metric: &RadialMetric, u: &ConformalTestFunction) -> Result<QuotientTerms> {
    let lo = metric.r_min();
    let hi = u.support_radius().unwrap_or(f64::INFINITY);
    if hi <= lo {
        return Err(Error::DegenerateInput(
            "test function support is empty".into(),
        ));
    }
    let factor = metric.factor();
    let dir = radial_integral(
        |r| {
            let (_, du) = u.eval(r);
            let p = factor.value(r);
            8.0 * du * du * p * p * 4.0 * PI * r * r
        },
        lo,
        hi,
        &u.breakpoints,
    )?;
    let curv = radial_integral(
        |r| {
            if r <= 0.0 {
                return 0.0;
            }
            let (v, _) = u.eval(r);
            let p = factor.value(r);
            // R φ⁶ = -8 φ Δφ
            -8.0 * factor.flat_laplacian(r) * p * v * v * 4.0 * PI * r * r
        },
        lo,
        hi,
        &u.breakpoints,
    )?;
    let l6 = radial_integral(
        |r| {
            let (v, _) = u.eval(r);
            (v * factor.value(r)).powi(6) * 4.0 * PI * r * r
        },
        lo,
        hi,
        &u.breakpoints,
    )?;
    Ok(QuotientTerms {
        dirichlet: dir,
        curvature: curv,
        l6,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma_s3() -> f64 {
        6.0 * (2.0 * PI * PI).powf(2.0 / 3.0)
    }

    #[test]
    fn flat_space_is_scalar_flat() {
        let m = RadialMetric::new(ConformalFactor::Flat { scale: 1.0 }, 0.0).unwrap();
        for r in [0.1, 1.0, 17.0] {
            assert_eq!(scalar_curvature_radial(&m, r).unwrap(), 0.0);
        }
    }

    #[test]
    fn schwarzschild_is_scalar_flat() {
        let m = RadialMetric::new(ConformalFactor::schwarzschild(2.0), 0.5).unwrap();
        assert!(scalar_curvature_radial(&m, 3.0).unwrap().abs() < 1e-10);
    }

    #[test]
    fn stereographic_sphere_has_curvature_six() {
        let m =
            RadialMetric::new(ConformalFactor::RoundStereographic { radius: 1.0 }, 0.0).unwrap();
        assert!((scalar_curvature_radial(&m, 1.0).unwrap() - 6.0).abs() < 1e-8);
        assert!((scalar_curvature_radial(&m, 0.3).unwrap() - 6.0).abs() < 1e-8);
        let big =
            RadialMetric::new(ConformalFactor::RoundStereographic { radius: 2.0 }, 0.0).unwrap();
        assert!((scalar_curvature_radial(&big, 0.7).unwrap() - 1.5).abs() < 1e-8);
    }

    #[test]
    fn curvature_errors() {
        let m = RadialMetric::new(ConformalFactor::schwarzschild(2.0), 1.0).unwrap();
        assert!(matches!(
            scalar_curvature_radial(&m, 0.5),
            Err(Error::Range { .. })
        ));
        let neg = RadialMetric {
            factor: ConformalFactor::Flat { scale: -1.0 },
            r_min: 0.0,
        };
        assert!(matches!(
            scalar_curvature_radial(&neg, 1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn energy_of_space_forms() {
        let s3 = ClosedModelMetric::round_sphere(1.0).unwrap();
        assert!((einstein_hilbert_energy(&s3) - sigma_s3()).abs() < 1e-10);
        assert!((einstein_hilbert_energy(&s3) - 43.823).abs() < 1e-3);
        let rp3 = ClosedModelMetric::new(ModelKind::ProjectiveSpace, 1.0).unwrap();
        let e = einstein_hilbert_energy(&rp3);
        assert!((e - 6.0 * (PI * PI).powf(2.0 / 3.0)).abs() < 1e-12);
        assert!((e - sigma_s3() / 2f64.powf(2.0 / 3.0)).abs() < 1e-12);
        assert!((e - 27.607).abs() < 1e-3);
        assert!((s3.volume() - 2.0 * PI * PI).abs() < 1e-14);
        let l5 = ClosedModelMetric::new(ModelKind::Lens(5), 1.0).unwrap();
        assert!((l5.volume() - 2.0 * PI * PI / 5.0).abs() < 1e-14);
    }

    #[test]
    fn energy_is_scale_invariant() {
        let s3 = ClosedModelMetric::round_sphere(1.0).unwrap();
        for c in [0.1, 3.0, 17.5] {
            let e = einstein_hilbert_energy(&s3.scaled(c).unwrap());
            assert!((e - einstein_hilbert_energy(&s3)).abs() < 1e-10);
        }
    }

    #[test]
    fn constant_function_gives_energy() {
        let s3 = ClosedModelMetric::round_sphere(1.0).unwrap();
        let q =
            yamabe_quotient(Carrier::Closed(&s3), &ConformalTestFunction::constant(1.0)).unwrap();
        assert!((q - einstein_hilbert_energy(&s3)).abs() < 1e-8);
        let rp3 = ClosedModelMetric::new(ModelKind::ProjectiveSpace, 2.5).unwrap();
        let q =
            yamabe_quotient(Carrier::Closed(&rp3), &ConformalTestFunction::constant(0.3)).unwrap();
        assert!((q - einstein_hilbert_energy(&rp3)).abs() < 1e-8);
    }

    #[test]
    fn bubble_attains_sharp_sobolev_constant() {
        // u = (1 + r²)^{-1/2} on flat ℝ³:
        // ∫|∇u|² = 4π·3π/16, ∫u⁶ = π²/4, quotient = σ(S³).
        let flat = RadialMetric::new(ConformalFactor::Flat { scale: 1.0 }, 0.0).unwrap();
        let u = ConformalTestFunction::new(|r| {
            let q = 1.0 + r * r;
            (q.powf(-0.5), -r * q.powf(-1.5))
        });
        let t = yamabe_terms(Carrier::Radial(&flat), &u).unwrap();
        assert!((t.dirichlet - 8.0 * 4.0 * PI * 3.0 * PI / 16.0).abs() < 1e-7);
        assert!((t.l6 - PI * PI / 4.0).abs() < 1e-9);
        assert!((t.quotient().unwrap() - sigma_s3()).abs() < 1e-7);
    }

    #[test]
    fn capped_inverse_r_exceeds_sobolev_constant() {
        // min(1, 1/r) with a linear cut-off on [R, 2R]; the exact uncut value
        // is 32π / (8π/3)^{1/3}.
        let flat = RadialMetric::new(ConformalFactor::Flat { scale: 1.0 }, 0.0).unwrap();
        let cut = 200.0;
        let u = ConformalTestFunction::new(move |r| {
            let (v, d) = if r < 1.0 {
                (1.0, 0.0)
            } else {
                (1.0 / r, -1.0 / (r * r))
            };
            if r < cut {
                (v, d)
            } else {
                let chi = 2.0 - r / cut;
                (v * chi, d * chi - v / cut)
            }
        })
        .with_support(2.0 * cut)
        .with_breakpoints(vec![1.0, cut]);
        let q = yamabe_quotient(Carrier::Radial(&flat), &u).unwrap();
        let uncut = 32.0 * PI / (8.0 * PI / 3.0f64).cbrt();
        assert!(q >= sigma_s3() * (1.0 - 1e-9));
        assert!((q - uncut).abs() / uncut < 0.02);
    }

    #[test]
    fn zero_function_is_degenerate() {
        let s3 = ClosedModelMetric::round_sphere(1.0).unwrap();
        let r = yamabe_quotient(Carrier::Closed(&s3), &ConformalTestFunction::constant(0.0));
        assert!(matches!(r, Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn inverted_and_radial_jets_agree() {
        let f = ConformalFactor::Terms(vec![
            RadialTerm::Constant { value: 1.0 },
            RadialTerm::InverseR { weight: 0.7 },
            RadialTerm::Plummer {
                weight: 0.3,
                core: 1.3,
            },
            RadialTerm::Exponential {
                weight: -0.1,
                length: 0.8,
            },
        ]);
        for r in [0.4f64, 1.0, 2.5, 9.0] {
            let (p, d1, d2) = f.jet(r);
            let s = 1.0 / r;
            let (q, qs, qss) = f.inverted_jet(s);
            assert!((p - q).abs() < 1e-14);
            assert!((-s * s * qs - d1).abs() < 1e-12);
            let lap_r = d2 + 2.0 * d1 / r;
            assert!((s.powi(4) * qss - lap_r).abs() < 1e-12);
        }
    }

    #[test]
    fn tabulated_factor_matches_closed_form() {
        let exact = ConformalFactor::schwarzschild(1.0);
        let s: Vec<f64> = (0..=100).map(|i| i as f64 * 0.04).collect();
        let phi = s.iter().map(|&x| exact.inverted_jet(x).0).collect();
        let tab = ConformalFactor::Tabulated(InvertedTable::new(s, phi).unwrap());
        let m = RadialMetric::new(tab.clone(), 0.5).unwrap();
        assert!((tab.value(1.3) - exact.value(1.3)).abs() < 1e-14);
        assert!(scalar_curvature_radial(&m, 0.7).unwrap().abs() < 1e-12);
        assert!((tab.asymptotic_value() - 1.0).abs() < 1e-15);
        assert!(matches!(
            RadialMetric::new(tab, 0.1),
            Err(Error::Range { .. })
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn quotient_is_invariant_under_scaling_u(c in 0.01f64..50.0, width in 0.3f64..3.0) {
                let s3 = ClosedModelMetric::round_sphere(1.0).unwrap();
                let u = ConformalTestFunction::new(move |d| {
                    let e = (-d * d / width).exp();
                    (1.0 + e, -2.0 * d / width * e)
                });
                let q1 = yamabe_quotient(Carrier::Closed(&s3), &u).unwrap();
                let q2 = yamabe_quotient(Carrier::Closed(&s3), &u.scaled(c)).unwrap();
                prop_assert!((q1 - q2).abs() <= 1e-9 * q1.abs());
            }

            #[test]
            fn harmonic_profiles_are_scalar_flat(a in 0.0f64..5.0, b in 0.0f64..5.0, r in 0.05f64..100.0) {
                prop_assume!(a + b > 0.1);
                let f = ConformalFactor::Terms(vec![
                    RadialTerm::Constant { value: a },
                    RadialTerm::InverseR { weight: b },
                ]);
                let m = RadialMetric::new(f, 0.0).unwrap();
                prop_assert!(scalar_curvature_radial(&m, r).unwrap().abs() < 1e-8);
            }
        }
    }
}
